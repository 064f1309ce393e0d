//! Deterministic block renderer for the six-track instrument.
//!
//! Control events change base values immediately but are heard from the
//! next block on. LFOs are evaluated once per block at the block end; every
//! parameter ramps linearly from its previous block-end value, which also
//! smooths `set` events over one block.

use crate::buffer::StereoBuffer;
use crate::catalog::{catalog, instantiate, UnitDescriptor, UnitState};
use crate::error::{Error, Result};
use crate::lfo::LfoState;
use crate::param::ParamRamp;
use crate::patch::{ControlEvent, EventKind, Patch, Slot, LFOS, SAMPLE_RATES, SLOTS, TRACKS};

pub const DEFAULT_BLOCK_SIZE: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EngineOptions {
    pub block_size: usize,
    pub seed: u64,
    /// Soft-clip the master sum. Disabling is meant for tests.
    pub limiter: bool,
}

impl Default for EngineOptions {
    fn default() -> Self {
        Self {
            block_size: DEFAULT_BLOCK_SIZE,
            seed: 0,
            limiter: true,
        }
    }
}

/// SplitMix64 finalizer, used to derive per-unit and per-LFO seeds.
pub fn mix_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

struct UnitSlot {
    state: UnitState,
    lfos: [LfoState; LFOS],
    /// Modulated normalized values at the end of the previous block.
    current: Vec<f32>,
    /// Physical image of `current`.
    physical: Vec<f32>,
    ramps: Vec<ParamRamp>,
}

impl UnitSlot {
    fn descriptor(&self) -> &'static UnitDescriptor {
        self.state.descriptor()
    }
}

pub struct Engine {
    patch: Patch,
    sample_rate: u32,
    options: EngineOptions,
    units: Vec<UnitSlot>,
    track_out: Vec<StereoBuffer>,
    scratch: StereoBuffer,
    master: StereoBuffer,
    frame: u64,
}

impl std::fmt::Debug for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Engine")
            .field("sample_rate", &self.sample_rate)
            .field("options", &self.options)
            .field("frame", &self.frame)
            .finish_non_exhaustive()
    }
}

/// Builds an engine with default options (64-frame blocks, seed 0, limiter on).
pub fn make_engine(patch: Patch, sample_rate: u32) -> Result<Engine> {
    Engine::new(patch, sample_rate, EngineOptions::default())
}

/// Master soft clip. Non-finite input maps to silence.
#[inline]
pub fn soft_clip(x: f32) -> f32 {
    if x.is_finite() {
        x.tanh()
    } else {
        0.0
    }
}

impl Engine {
    pub fn new(patch: Patch, sample_rate: u32, options: EngineOptions) -> Result<Self> {
        if !SAMPLE_RATES.contains(&sample_rate) {
            return Err(Error::SampleRate(sample_rate));
        }
        if options.block_size == 0 {
            return Err(Error::Invalid("block size must be positive".into()));
        }
        patch.validate(catalog())?;
        let mut engine = Self {
            patch,
            sample_rate,
            options,
            units: Vec::with_capacity(TRACKS * SLOTS),
            track_out: vec![StereoBuffer::new(options.block_size); TRACKS],
            scratch: StereoBuffer::new(options.block_size),
            master: StereoBuffer::new(options.block_size),
            frame: 0,
        };
        engine.build_units()?;
        Ok(engine)
    }

    fn build_units(&mut self) -> Result<()> {
        self.units.clear();
        for t in 0..TRACKS {
            for slot in Slot::ALL {
                let index = (t * SLOTS + slot.index()) as u64;
                let config = self.patch.unit(t, slot);
                let state = instantiate(config.unit_id, self.sample_rate, mix_seed(self.options.seed, index))?;
                let lfos = std::array::from_fn(|j| {
                    LfoState::new(mix_seed(self.options.seed, 1_000 + index * LFOS as u64 + j as u64))
                });
                let arity = config.params.len();
                let mut unit = UnitSlot {
                    state,
                    lfos,
                    current: vec![0.0; arity],
                    physical: vec![0.0; arity],
                    ramps: vec![ParamRamp::constant(0.0); arity],
                };
                Self::modulate(&self.patch, t, slot, &mut unit);
                for k in 0..arity {
                    unit.physical[k] = unit.descriptor().param_schema[k].to_physical(unit.current[k]);
                }
                self.units.push(unit);
            }
        }
        Ok(())
    }

    /// Restores the freshly constructed state, keeping the current patch.
    pub fn reset(&mut self) -> Result<()> {
        self.frame = 0;
        self.build_units()
    }

    pub fn patch(&self) -> &Patch {
        &self.patch
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn block_size(&self) -> usize {
        self.options.block_size
    }

    pub fn options(&self) -> EngineOptions {
        self.options
    }

    /// Frames rendered so far.
    pub fn frame(&self) -> u64 {
        self.frame
    }

    pub fn unit_count(&self) -> usize {
        self.units.len()
    }

    pub fn unit_state(&self, track: usize, slot: Slot) -> &UnitState {
        &self.units[track * SLOTS + slot.index()].state
    }

    /// Modulated normalized parameter values used at the end of the last block.
    pub fn current_params(&self, track: usize, slot: Slot) -> &[f32] {
        &self.units[track * SLOTS + slot.index()].current
    }

    /// LFO phase in `[0, 1)`.
    pub fn lfo_phase(&self, track: usize, slot: Slot, lfo: usize) -> f64 {
        self.units[track * SLOTS + slot.index()].lfos[lfo].phase()
    }

    /// Post-chain output of a track (before track gain) from the last block.
    pub fn track_output(&self, track: usize) -> &StereoBuffer {
        &self.track_out[track]
    }

    /// Applies a control event to the base values; no audio is produced.
    pub fn apply_event(&mut self, event: &ControlEvent) -> Result<()> {
        self.patch.apply_event(event, catalog())?;
        if event.kind == EventKind::Trigger {
            self.units[event.address.track * SLOTS].state.trigger();
        }
        Ok(())
    }

    fn modulate(patch: &Patch, track: usize, slot: Slot, unit: &mut UnitSlot) {
        let config = patch.unit(track, slot);
        unit.current.copy_from_slice(&config.params);
        for (lfo, state) in config.lfos.iter().zip(unit.lfos.iter()) {
            if let Some(k) = lfo.target {
                unit.current[k] += lfo.depth * state.value(lfo);
            }
        }
        for v in unit.current.iter_mut() {
            *v = v.clamp(0.0, 1.0);
        }
    }

    /// Renders one block and returns the master bus.
    pub fn render_block(&mut self) -> &StereoBuffer {
        let n = self.options.block_size;
        let sr = self.sample_rate as f64;
        self.master.clear();
        for t in 0..TRACKS {
            for slot in Slot::ALL {
                let unit = &mut self.units[t * SLOTS + slot.index()];
                let config = self.patch.unit(t, slot);
                for (lfo, state) in config.lfos.iter().zip(unit.lfos.iter_mut()) {
                    state.advance(n as f64 * lfo.rate_hz() as f64 / sr);
                }
                Self::modulate(&self.patch, t, slot, unit);
                let schema = &unit.state.descriptor().param_schema;
                for k in 0..unit.current.len() {
                    let end = schema[k].to_physical(unit.current[k]);
                    unit.ramps[k] = ParamRamp {
                        start: unit.physical[k],
                        end,
                    };
                    unit.physical[k] = end;
                }
            }

            let base = t * SLOTS;
            let out = &mut self.track_out[t];
            let gen = &mut self.units[base];
            gen.state.process(None, &gen.ramps, out);
            for p in 1..SLOTS {
                let unit = &mut self.units[base + p];
                unit.state.process(Some(out), &unit.ramps, &mut self.scratch);
                std::mem::swap(out, &mut self.scratch);
            }

            let gain = self.patch.track(t).gain;
            for i in 0..n {
                self.master.left[i] += out.left[i] * gain;
                self.master.right[i] += out.right[i] * gain;
            }
        }
        if self.options.limiter {
            for s in self.master.left.iter_mut().chain(self.master.right.iter_mut()) {
                *s = soft_clip(*s);
            }
        }
        self.frame += n as u64;
        &self.master
    }

    /// Renders one block as interleaved stereo into `out` (`2 × block_size` samples).
    pub fn render_interleaved(&mut self, out: &mut [f32]) {
        self.render_block().write_interleaved(out);
    }
}

//! Low-frequency oscillators and parameter modulation.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::patch::{LfoConfig, LfoShape};

/// Waveform value in `[-1, 1]` at `phase` in `[0, 1)`.
///
/// `held` is the current sample-and-hold value, returned for
/// [`LfoShape::Random`] and ignored by the periodic shapes.
pub fn lfo_value(shape: LfoShape, phase: f64, held: f32) -> f32 {
    match shape {
        LfoShape::Sine => (TAU * phase).sin() as f32,
        LfoShape::Square => {
            if phase < 0.5 {
                1.0
            } else {
                -1.0
            }
        }
        LfoShape::Triangle => (1.0 - 4.0 * (phase - 0.5).abs()) as f32,
        LfoShape::Saw => (2.0 * phase - 1.0) as f32,
        LfoShape::Random => held,
    }
}

/// `clamp(base + depth · lfo, 0, 1)`.
#[inline]
pub fn modulated_param(base: f32, depth: f32, lfo: f32) -> f32 {
    (base + depth * lfo).clamp(0.0, 1.0)
}

/// Running phase of one LFO plus its seeded random stream.
#[derive(Debug, Clone)]
pub struct LfoState {
    phase: f64,
    held: f32,
    rng: ChaCha8Rng,
}

impl LfoState {
    pub fn new(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let held = draw(&mut rng);
        Self { phase: 0.0, held, rng }
    }

    pub fn phase(&self) -> f64 {
        self.phase
    }

    /// Moves the phase forward by `cycles`; the random shape redraws on
    /// every period boundary crossed.
    pub fn advance(&mut self, cycles: f64) {
        let next = self.phase + cycles;
        let wraps = next.floor();
        self.phase = next - wraps;
        if self.phase >= 1.0 {
            self.phase = 0.0;
        }
        for _ in 0..(wraps as u64).min(16) {
            self.held = draw(&mut self.rng);
        }
    }

    pub fn value(&self, config: &LfoConfig) -> f32 {
        lfo_value(config.shape, self.phase, self.held)
    }
}

fn draw(rng: &mut ChaCha8Rng) -> f32 {
    rng.random::<f32>() * 2.0 - 1.0
}

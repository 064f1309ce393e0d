use rand::seq::IndexedRandom;
use rand::Rng;

use super::{Meta, ScoreLoop, Scorefile, FORMAT_VERSION};
use crate::catalog::{catalog, UnitKind};
use crate::gesture::{GestureLoop, LoopMode};
use crate::patch::{
    ControlEvent, LfoConfig, LfoField, LfoShape, ParamAddress, Patch, Slot, TrackConfig, UnitConfig, LFOS,
    SAMPLE_RATES, TRACKS,
};

/// Shape of a generated piece.
#[derive(Debug, Clone)]
pub struct RandomScoreOptions {
    pub duration_ms: u64,
    pub events: usize,
    pub loops: usize,
    /// Upper bound on events recorded per loop.
    pub loop_events: usize,
    /// Chance that an LFO is configured.
    pub lfo_density: f64,
}

impl Default for RandomScoreOptions {
    fn default() -> Self {
        Self {
            duration_ms: 10_000,
            events: 40,
            loops: 2,
            loop_events: 8,
            lfo_density: 0.2,
        }
    }
}

fn unit_value(rng: &mut impl Rng) -> f32 {
    match rng.random_range(0..10) {
        0 => 0.0,
        1 => 1.0,
        2 => rng.random_range(0..=100) as f32 / 100.0,
        _ => rng.random::<f32>(),
    }
}

fn random_unit(rng: &mut impl Rng, kind: UnitKind, lfo_density: f64) -> UnitConfig {
    let ids: Vec<u32> = catalog().iter().filter(|d| d.kind == kind).map(|d| d.unit_id).collect();
    let id = *ids.choose(rng).expect("catalog has both kinds");
    let mut unit = UnitConfig::new(catalog(), id).expect("id comes from the catalog");
    for p in unit.params.iter_mut() {
        *p = unit_value(rng);
    }
    let arity = unit.params.len();
    for lfo in unit.lfos.iter_mut() {
        if rng.random_bool(lfo_density) {
            *lfo = LfoConfig {
                rate: unit_value(rng),
                depth: unit_value(rng),
                shape: *LfoShape::ALL.choose(rng).expect("non-empty"),
                target: rng.random_bool(0.8).then(|| rng.random_range(0..arity)),
            };
        }
    }
    unit
}

fn random_event(rng: &mut impl Rng, patch: &Patch, time_ms: u64) -> ControlEvent {
    let track = rng.random_range(0..TRACKS);
    match rng.random_range(0..10) {
        0..=2 => ControlEvent::trigger(time_ms, ParamAddress::param(track, Slot::Gen, 0)),
        3..=7 => {
            let slot = *Slot::ALL.choose(rng).expect("non-empty");
            let arity = patch.unit(track, slot).params.len();
            let k = rng.random_range(0..arity);
            ControlEvent::set(time_ms, ParamAddress::param(track, slot, k), unit_value(rng))
        }
        _ => {
            let slot = *Slot::ALL.choose(rng).expect("non-empty");
            let j = rng.random_range(0..LFOS);
            let field = *LfoField::ALL.choose(rng).expect("non-empty");
            ControlEvent::lfo_set(time_ms, ParamAddress::lfo(track, slot, j, field), unit_value(rng))
        }
    }
}

fn sorted_times(rng: &mut impl Rng, count: usize, below: u64) -> Vec<u64> {
    let mut times: Vec<u64> = (0..count).map(|_| rng.random_range(0..below)).collect();
    times.sort_unstable();
    times
}

fn random_text(rng: &mut impl Rng) -> String {
    const PIECES: &[&str] = &["drone", "bamboo", " ", "\"", "\\", "é", "string", "#7", "\t", "ü", "loop"];
    let n = rng.random_range(0..6);
    (0..n).map(|_| *PIECES.choose(rng).expect("non-empty")).collect()
}

/// A valid piece with random units, parameters, LFOs, events and loops.
pub fn random_score(rng: &mut impl Rng, options: &RandomScoreOptions) -> Scorefile {
    let duration_ms = options.duration_ms.max(1);
    let sample_rate = *SAMPLE_RATES.choose(rng).expect("non-empty");
    let tracks = (0..TRACKS)
        .map(|_| TrackConfig {
            generator: random_unit(rng, UnitKind::Generator, options.lfo_density),
            processors: std::array::from_fn(|_| random_unit(rng, UnitKind::Processor, options.lfo_density)),
            gain: unit_value(rng),
        })
        .collect();
    let patch = Patch::new(tracks, sample_rate).expect("six tracks");

    let events = sorted_times(rng, options.events, duration_ms)
        .into_iter()
        .map(|t| random_event(rng, &patch, t))
        .collect();

    let mut loops = Vec::with_capacity(options.loops);
    for _ in 0..options.loops {
        let from_ms = rng.random_range(0..duration_ms);
        let to_ms = rng.random_range(from_ms + 1..=duration_ms);
        let length_ms = rng.random_range(1..=duration_ms.min(4_000));
        let count = rng.random_range(0..=options.loop_events);
        let mut events: Vec<ControlEvent> = sorted_times(rng, count, length_ms)
            .into_iter()
            .map(|t| random_event(rng, &patch, t))
            .collect();
        let scope = (rng.random_bool(0.3) && !events.is_empty()).then(|| events[0].address);
        if let Some(scope) = scope {
            let first = events[0];
            for ev in events.iter_mut() {
                ev.address = scope;
                ev.kind = first.kind;
                if ev.kind == crate::patch::EventKind::Trigger {
                    ev.value = 0.0;
                }
            }
        }
        let mode = if rng.random_bool(0.25) { LoopMode::Once } else { LoopMode::Cycle };
        loops.push(ScoreLoop {
            gesture: GestureLoop {
                events,
                length_ms,
                scope,
                mode,
            },
            from_ms,
            to_ms,
        });
    }

    Scorefile {
        version: FORMAT_VERSION,
        sample_rate,
        seed: rng.random(),
        duration_ms,
        patch,
        events,
        loops,
        meta: Meta {
            title: random_text(rng),
            author: random_text(rng),
        },
    }
}

//! Performance-layer gestures: recorded loops and sequences, arpeggios, and
//! parameter snapshots. Everything here is a pure function that emits
//! [`ControlEvent`] streams for the engine to apply.

use serde::{Deserialize, Serialize};

use crate::catalog::Catalog;
use crate::error::{Error, Result};
use crate::patch::{
    check_unit_range, AddressItem, ControlEvent, LfoField, ParamAddress, Patch, Slot, LFOS, SLOTS, TRACKS,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LoopMode {
    /// Replays every `length_ms`.
    Cycle,
    /// Plays once: a sequence.
    Once,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GestureLoop {
    /// Time-ordered, times relative to the loop start and below `length_ms`.
    pub events: Vec<ControlEvent>,
    pub length_ms: u64,
    /// When set, only events for this address were captured.
    pub scope: Option<ParamAddress>,
    pub mode: LoopMode,
}

/// Captures the events of `[start_ms, stop_ms)` as a cyclic loop.
pub fn loop_record(start_ms: u64, stop_ms: u64, captured: &[ControlEvent]) -> Result<GestureLoop> {
    GestureLoop::record(start_ms, stop_ms, captured, None, LoopMode::Cycle)
}

impl GestureLoop {
    /// Re-bases the captured events to the window start. Recording replaces
    /// whatever loop was there before; there is no overdub.
    pub fn record(
        start_ms: u64,
        stop_ms: u64,
        captured: &[ControlEvent],
        scope: Option<ParamAddress>,
        mode: LoopMode,
    ) -> Result<Self> {
        if stop_ms <= start_ms {
            return Err(Error::Invalid(format!(
                "empty loop window [{start_ms}, {stop_ms})"
            )));
        }
        let mut events = Vec::with_capacity(captured.len());
        for ev in captured {
            if ev.time_ms < start_ms || ev.time_ms >= stop_ms {
                return Err(Error::Invalid(format!(
                    "event at {} ms lies outside the loop window [{start_ms}, {stop_ms})",
                    ev.time_ms
                )));
            }
            if scope.is_some_and(|s| s != ev.address) {
                continue;
            }
            events.push(ev.at(ev.time_ms - start_ms));
        }
        events.sort_by_key(|e| e.time_ms);
        Ok(Self {
            events,
            length_ms: stop_ms - start_ms,
            scope,
            mode,
        })
    }

    /// Occurrences in `[from_ms, to_ms)` with the loop anchored at time 0.
    pub fn events_between(&self, from_ms: u64, to_ms: u64) -> Vec<ControlEvent> {
        self.occurrences(0, from_ms, to_ms)
    }

    /// Occurrences in `[from_ms, to_ms)` with the loop started at `anchor_ms`,
    /// in time order.
    pub fn occurrences(&self, anchor_ms: u64, from_ms: u64, to_ms: u64) -> Vec<ControlEvent> {
        let from = from_ms.max(anchor_ms);
        if to_ms <= from || self.events.is_empty() || self.length_ms == 0 {
            return Vec::new();
        }
        let (rel_from, rel_to) = (from - anchor_ms, to_ms - anchor_ms);
        let len = self.length_ms;
        let last_cycle = match self.mode {
            LoopMode::Cycle => (rel_to - 1) / len,
            LoopMode::Once => 0,
        };
        let mut out = Vec::new();
        for cycle in rel_from / len..=last_cycle {
            let offset = cycle * len;
            for ev in &self.events {
                let t = offset + ev.time_ms;
                if t >= rel_to {
                    break;
                }
                if t >= rel_from {
                    out.push(ev.at(anchor_ms + t));
                }
            }
        }
        out
    }
}

/// Occurrences of a cyclic loop anchored at 0 within `[from_ms, to_ms)`.
pub fn loop_events(gesture: &GestureLoop, from_ms: u64, to_ms: u64) -> Vec<ControlEvent> {
    gesture.events_between(from_ms, to_ms)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArpeggioConfig {
    target: ParamAddress,
    steps: Vec<f32>,
    step_ms: u64,
    retrigger: bool,
}

pub const MAX_ARPEGGIO_STEPS: usize = 16;

impl ArpeggioConfig {
    /// `target` must be a generator parameter.
    pub fn new(target: ParamAddress, steps: Vec<f32>, step_ms: u64, retrigger: bool) -> Result<Self> {
        if target.slot != Slot::Gen || !matches!(target.item, AddressItem::Param(_)) {
            return Err(Error::Address(format!("{target}: arpeggios target a generator parameter")));
        }
        if steps.is_empty() || steps.len() > MAX_ARPEGGIO_STEPS {
            return Err(Error::Invalid(format!(
                "an arpeggio has 1..={MAX_ARPEGGIO_STEPS} steps, found {}",
                steps.len()
            )));
        }
        for (i, &v) in steps.iter().enumerate() {
            check_unit_range(&format!("step {i}"), v)?;
        }
        if step_ms == 0 {
            return Err(Error::Invalid("arpeggio step must be at least 1 ms".into()));
        }
        Ok(Self {
            target,
            steps,
            step_ms,
            retrigger,
        })
    }

    pub fn target(&self) -> ParamAddress {
        self.target
    }

    pub fn steps(&self) -> &[f32] {
        &self.steps
    }

    pub fn step_ms(&self) -> u64 {
        self.step_ms
    }

    pub fn retrigger(&self) -> bool {
        self.retrigger
    }
}

/// At every multiple `n · step_ms` inside `[from_ms, to_ms)`, sets the target
/// to `steps[n mod len]`, followed by a trigger when retriggering.
pub fn arpeggio_events(config: &ArpeggioConfig, from_ms: u64, to_ms: u64) -> Vec<ControlEvent> {
    let mut out = Vec::new();
    let step = config.step_ms;
    let mut n = from_ms.div_ceil(step);
    while let Some(t) = n.checked_mul(step).filter(|&t| t < to_ms) {
        let value = config.steps[(n % config.steps.len() as u64) as usize];
        out.push(ControlEvent::set(t, config.target, value));
        if config.retrigger {
            out.push(ControlEvent::trigger(t, config.target));
        }
        n += 1;
    }
    out
}

/// Base values of one unit, with LFO fields in their normalized encoding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitImage {
    pub unit_id: u32,
    pub params: Vec<f32>,
    pub lfos: [[f32; 4]; LFOS],
}

/// Full base-parameter image of a patch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub label: String,
    /// Track-major, generator first: `track * 4 + slot`.
    pub units: Vec<UnitImage>,
}

fn image(patch: &Patch, track: usize, slot: Slot) -> UnitImage {
    let unit = patch.unit(track, slot);
    let arity = unit.params.len();
    UnitImage {
        unit_id: unit.unit_id,
        params: unit.params.clone(),
        lfos: unit
            .lfos
            .map(|lfo| LfoField::ALL.map(|f| lfo.field_normalized(f, arity))),
    }
}

pub fn snapshot_take(patch: &Patch, label: impl Into<String>) -> Snapshot {
    let mut units = Vec::with_capacity(TRACKS * SLOTS);
    for t in 0..TRACKS {
        for slot in Slot::ALL {
            units.push(image(patch, t, slot));
        }
    }
    Snapshot {
        label: label.into(),
        units,
    }
}

/// Events that bring `current` back to the snapshot image: one per value
/// that differs, all stamped `at_ms`.
pub fn snapshot_restore(
    snapshot: &Snapshot,
    current: &Patch,
    catalog: &Catalog,
    at_ms: u64,
) -> Result<Vec<ControlEvent>> {
    if snapshot.units.len() != TRACKS * SLOTS {
        return Err(Error::Invalid(format!(
            "snapshot holds {} units, a patch has {}",
            snapshot.units.len(),
            TRACKS * SLOTS
        )));
    }
    let mut out = Vec::new();
    for t in 0..TRACKS {
        for slot in Slot::ALL {
            let saved = &snapshot.units[t * SLOTS + slot.index()];
            let location = format!("t{t}.{slot}");
            let desc = catalog.get(saved.unit_id)?;
            if saved.params.len() != desc.arity() {
                return Err(Error::Schema {
                    location,
                    unit_id: saved.unit_id,
                    name: desc.name.clone(),
                    expected: desc.arity(),
                    found: saved.params.len(),
                });
            }
            let now = image(current, t, slot);
            if now.unit_id != saved.unit_id {
                return Err(Error::Invalid(format!(
                    "{location}: snapshot holds unit {}, patch has unit {}",
                    saved.unit_id, now.unit_id
                )));
            }
            for (k, (&want, &have)) in saved.params.iter().zip(&now.params).enumerate() {
                if want != have {
                    out.push(ControlEvent::set(at_ms, ParamAddress::param(t, slot, k), want));
                }
            }
            for j in 0..LFOS {
                for (f, field) in LfoField::ALL.into_iter().enumerate() {
                    let want = saved.lfos[j][f];
                    if want != now.lfos[j][f] {
                        out.push(ControlEvent::lfo_set(at_ms, ParamAddress::lfo(t, slot, j, field), want));
                    }
                }
            }
        }
    }
    Ok(out)
}

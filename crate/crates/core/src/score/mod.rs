//! Line-based scorefile: a patch, timed events and loops, with a canonical
//! text form.
//!
//! ```text
//! FMOLSCORE 1
//! SR 44100
//! SEED 7
//! DUR 4000
//! META title "Opening"
//! TRACK 0 GAIN 0.5 GEN 0 0.5 0.5 0.5 0.5 PROC 100 0.5 PROC 100 0.5 PROC 100 0.5
//! ...five more TRACK lines...
//! LFO 0 g 0 2.5 0.1 sine 0
//! EV 0 t0.g.param0 trigger
//! LOOP 1000 0 4000
//!   EV 250 t0.g.param0 set 0.4
//! ```

mod parse;
mod random;
mod render;

use std::fmt::Write;

use serde::{Deserialize, Serialize};

pub use parse::{parse, ParseError, ParseErrorKind};
pub use random::{random_score, RandomScoreOptions};
pub use render::{event_frame, render_score, schedule, score_frames, Schedule};

use crate::catalog::Catalog;
use crate::gesture::{GestureLoop, LoopMode};
use crate::patch::{ControlEvent, EventKind, LfoConfig, Patch, Slot, MAX_LFO_HZ, TRACKS};

pub const FORMAT_VERSION: u32 = 1;
pub const MAGIC: &str = "FMOLSCORE";
/// Longest accepted piece.
pub const MAX_DURATION_MS: u64 = 3_600_000;

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Meta {
    pub title: String,
    pub author: String,
}

/// A gesture loop active over `[from_ms, to_ms)`, its first cycle starting at `from_ms`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreLoop {
    pub gesture: GestureLoop,
    pub from_ms: u64,
    pub to_ms: u64,
}

impl ScoreLoop {
    pub fn occurrences(&self) -> Vec<ControlEvent> {
        self.gesture.occurrences(self.from_ms, self.from_ms, self.to_ms)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scorefile {
    pub version: u32,
    pub sample_rate: u32,
    pub seed: u64,
    pub duration_ms: u64,
    pub patch: Patch,
    /// Sorted by time; ties keep file order.
    pub events: Vec<ControlEvent>,
    pub loops: Vec<ScoreLoop>,
    pub meta: Meta,
}

impl Scorefile {
    /// An empty piece over the default patch.
    pub fn new(catalog: &Catalog, sample_rate: u32, seed: u64, duration_ms: u64) -> Self {
        let mut patch = Patch::default_patch(catalog);
        patch.sample_rate_hint = sample_rate;
        Self {
            version: FORMAT_VERSION,
            sample_rate,
            seed,
            duration_ms,
            patch,
            events: Vec::new(),
            loops: Vec::new(),
            meta: Meta::default(),
        }
    }
}

/// Canonical text: fixed line order, one event per line, `\n` endings.
pub fn serialize(score: &Scorefile) -> String {
    let mut out = String::with_capacity(1024 + score.events.len() * 40);
    let _ = writeln!(out, "{MAGIC} {}", score.version);
    let _ = writeln!(out, "SR {}", score.sample_rate);
    let _ = writeln!(out, "SEED {}", score.seed);
    let _ = writeln!(out, "DUR {}", score.duration_ms);
    for (key, value) in [("title", &score.meta.title), ("author", &score.meta.author)] {
        if !value.is_empty() {
            let quoted = serde_json::to_string(value).expect("strings always serialize");
            let _ = writeln!(out, "META {key} {quoted}");
        }
    }
    for (t, track) in score.patch.tracks().iter().enumerate() {
        let _ = write!(out, "TRACK {t} GAIN {} GEN {}", track.gain, track.generator.unit_id);
        for p in &track.generator.params {
            let _ = write!(out, " {p}");
        }
        for proc in &track.processors {
            let _ = write!(out, " PROC {}", proc.unit_id);
            for p in &proc.params {
                let _ = write!(out, " {p}");
            }
        }
        out.push('\n');
    }
    for t in 0..TRACKS {
        for slot in Slot::ALL {
            for (j, lfo) in score.patch.unit(t, slot).lfos.iter().enumerate() {
                if lfo.is_default() {
                    continue;
                }
                let target = lfo.target.map_or_else(|| "off".to_string(), |k| k.to_string());
                let _ = writeln!(
                    out,
                    "LFO {t} {slot} {j} {} {} {} {target}",
                    format_rate_hz(lfo),
                    lfo.depth,
                    lfo.shape
                );
            }
        }
    }
    for ev in &score.events {
        write_event(&mut out, "", ev);
    }
    for lp in &score.loops {
        let word = match lp.gesture.mode {
            LoopMode::Cycle => "LOOP",
            LoopMode::Once => "SEQ",
        };
        let _ = write!(out, "{word} {} {} {}", lp.gesture.length_ms, lp.from_ms, lp.to_ms);
        if let Some(scope) = lp.gesture.scope {
            let _ = write!(out, " {scope}");
        }
        out.push('\n');
        for ev in &lp.gesture.events {
            write_event(&mut out, "  ", ev);
        }
    }
    out
}

fn write_event(out: &mut String, indent: &str, ev: &ControlEvent) {
    let _ = write!(out, "{indent}EV {} {} {}", ev.time_ms, ev.address, ev.kind.as_str());
    if ev.kind != EventKind::Trigger {
        let _ = write!(out, " {}", ev.value);
    }
    out.push('\n');
}

/// Rate as Hz, shortest decimal that parses back to the same stored rate.
fn format_rate_hz(lfo: &LfoConfig) -> String {
    let hz = lfo.rate as f64 * MAX_LFO_HZ as f64;
    for digits in 0..17 {
        let text = format!("{hz:.digits$}");
        let text = if text.contains('.') {
            text.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            text
        };
        if parse::rate_from_hz(&text) == Some(lfo.rate) {
            return text;
        }
    }
    hz.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog;

    #[test]
    fn rate_text_is_short() {
        let mut lfo = LfoConfig::default();
        for (hz, text) in [(0.25f32, "0.25"), (2.5, "2.5"), (20.0, "20"), (0.0, "0"), (7.3, "7.3")] {
            lfo.rate = (hz as f64 / 20.0) as f32;
            assert_eq!(format_rate_hz(&lfo), text);
        }
    }

    #[test]
    fn empty_score_text() {
        let score = Scorefile::new(catalog(), 44100, 3, 1000);
        let text = serialize(&score);
        assert!(text.starts_with("FMOLSCORE 1\nSR 44100\nSEED 3\nDUR 1000\nTRACK 0 GAIN 0.5 GEN 0 "));
        assert_eq!(text.lines().count(), 10);
        assert!(text.lines().all(|l| l.trim_end() == l));
    }
}

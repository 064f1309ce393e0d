use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::{ScoreLoop, Scorefile};
use crate::buffer::StereoBuffer;
use crate::engine::{Engine, EngineOptions};
use crate::error::Result;
use crate::gesture::LoopMode;
use crate::patch::ControlEvent;

/// Lazily expands one loop over its activation window.
struct LoopCursor<'a> {
    lp: &'a ScoreLoop,
    cycle: u64,
    index: usize,
}

impl LoopCursor<'_> {
    fn next_event(&mut self) -> Option<ControlEvent> {
        let g = &self.lp.gesture;
        if g.events.is_empty() {
            return None;
        }
        if self.index == g.events.len() {
            self.index = 0;
            self.cycle += 1;
        }
        if g.mode == LoopMode::Once && self.cycle > 0 {
            return None;
        }
        let ev = &g.events[self.index];
        let t = self.lp.from_ms + self.cycle * g.length_ms + ev.time_ms;
        if t >= self.lp.to_ms {
            return None;
        }
        self.index += 1;
        Some(ev.at(t))
    }
}

/// Time-ordered merge of explicit events and loop expansions. Equal times
/// yield explicit events first, then loops in file order.
pub struct Schedule<'a> {
    explicit: std::slice::Iter<'a, ControlEvent>,
    loops: Vec<LoopCursor<'a>>,
    /// `(time, source, sequence)`; source 0 is the explicit list.
    heap: BinaryHeap<Reverse<(u64, usize, u64)>>,
    heads: Vec<Option<ControlEvent>>,
    sequence: u64,
}

pub fn schedule(score: &Scorefile) -> Schedule<'_> {
    let mut s = Schedule {
        explicit: score.events.iter(),
        loops: score
            .loops
            .iter()
            .map(|lp| LoopCursor {
                lp,
                cycle: 0,
                index: 0,
            })
            .collect(),
        heap: BinaryHeap::new(),
        heads: vec![None; score.loops.len() + 1],
        sequence: 0,
    };
    for source in 0..s.heads.len() {
        s.refill(source);
    }
    s
}

impl Schedule<'_> {
    fn refill(&mut self, source: usize) {
        let next = match source {
            0 => self.explicit.next().copied(),
            _ => self.loops[source - 1].next_event(),
        };
        if let Some(ev) = next {
            self.heap.push(Reverse((ev.time_ms, source, self.sequence)));
            self.sequence += 1;
        }
        self.heads[source] = next;
    }
}

impl Iterator for Schedule<'_> {
    type Item = ControlEvent;

    fn next(&mut self) -> Option<ControlEvent> {
        let Reverse((_, source, _)) = self.heap.pop()?;
        let ev = self.heads[source].take();
        self.refill(source);
        ev
    }
}

/// Frame at which an event lands: `floor(time_ms · sr / 1000)`.
pub fn event_frame(time_ms: u64, sample_rate: u32) -> u64 {
    (time_ms as u128 * sample_rate as u128 / 1000) as u64
}

/// `ceil(duration_ms · sr / 1000)`.
pub fn score_frames(score: &Scorefile) -> usize {
    (score.duration_ms * score.sample_rate as u64).div_ceil(1000) as usize
}

/// Renders the whole piece. Each event is applied before the first block
/// whose end lies past the event's frame.
pub fn render_score(score: &Scorefile) -> Result<StereoBuffer> {
    let options = EngineOptions {
        seed: score.seed,
        ..EngineOptions::default()
    };
    let mut engine = Engine::new(score.patch.clone(), score.sample_rate, options)?;
    let frames = score_frames(score);
    let n = engine.block_size();
    let mut out = StereoBuffer::new(frames);
    let mut events = schedule(score).peekable();
    let mut start = 0usize;
    while start < frames {
        let end = (start + n) as u64;
        while let Some(ev) = events.next_if(|ev| event_frame(ev.time_ms, score.sample_rate) < end) {
            engine.apply_event(&ev)?;
        }
        let block = engine.render_block();
        let take = n.min(frames - start);
        out.left[start..start + take].copy_from_slice(&block.left[..take]);
        out.right[start..start + take].copy_from_slice(&block.right[..take]);
        start += take;
    }
    Ok(out)
}

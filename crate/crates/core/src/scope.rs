//! Min/max decimation of track output for oscilloscope display.

use serde::{Deserialize, Serialize};

pub const SCOPE_POINTS: usize = 256;

/// One track's oscilloscope slice: `SCOPE_POINTS` `(min, max)` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScopeFrame {
    pub track: usize,
    pub frame_index: u64,
    pub points: Vec<(f32, f32)>,
}

/// Splits `samples` into `SCOPE_POINTS` contiguous spans, span `i` covering
/// `[i·N/256, (i+1)·N/256)`, and reports each span's extrema clamped to
/// `[-1, 1]`. With fewer than 256 samples a span repeats its nearest
/// sample; an empty run gives all zeros.
pub fn scope_decimate(samples: &[f32]) -> Vec<(f32, f32)> {
    let n = samples.len();
    if n == 0 {
        return vec![(0.0, 0.0); SCOPE_POINTS];
    }
    (0..SCOPE_POINTS)
        .map(|i| {
            let a = i * n / SCOPE_POINTS;
            let b = ((i + 1) * n / SCOPE_POINTS).max(a + 1).min(n);
            let span = &samples[a.min(n - 1)..b];
            let (lo, hi) = span.iter().fold((f32::INFINITY, f32::NEG_INFINITY), |(lo, hi), &s| {
                let s = if s.is_finite() { s.clamp(-1.0, 1.0) } else { 0.0 };
                (lo.min(s), hi.max(s))
            });
            (lo, hi)
        })
        .collect()
}

#![allow(dead_code)]

use fmol_core::catalog::{GEN_AMP, GEN_FREQ, GEN_RELEASE};
use fmol_core::patch::{Slot, TRACKS};
use fmol_core::{catalog, ControlEvent, ParamAddress, Patch, StereoBuffer, TrackConfig};
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

pub const SR: u32 = 44100;
pub const BLOCK: usize = 64;

/// Normalized frequency setting for `hz` on the generator pitch curve.
pub fn freq_setting(hz: f64) -> f32 {
    ((hz / 20.0).ln() / (8000.0f64 / 20.0).ln()) as f32
}

/// Index of the largest magnitude bin in `[1, n/2)` of an `n`-point transform.
pub fn spectral_peak(signal: &[f32]) -> usize {
    let n = signal.len();
    let mut buf: Vec<Complex<f64>> = signal.iter().map(|&x| Complex::new(x as f64, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    (1..n / 2)
        .max_by(|&a, &b| buf[a].norm().total_cmp(&buf[b].norm()))
        .unwrap()
}

pub fn rms(x: &[f32]) -> f64 {
    (x.iter().map(|&s| (s as f64).powi(2)).sum::<f64>() / x.len() as f64).sqrt()
}

/// Generator schema values holding the note indefinitely.
pub fn held_generator(unit_id: u32, freq: f32, amp: f32) -> Vec<f32> {
    let mut params = catalog().get(unit_id).unwrap().default_params();
    params[GEN_FREQ] = freq;
    params[GEN_AMP] = amp;
    params[GEN_RELEASE] = 1.0;
    params
}

/// Patch where only track 0 has a sounding configuration.
pub fn solo_patch(gen_id: u32, gen_params: Vec<f32>) -> Patch {
    let cat = catalog();
    let mut track = TrackConfig::with_generator(cat, gen_id).unwrap();
    track.generator.params = gen_params;
    let mut tracks = vec![TrackConfig::with_generator(cat, 0).unwrap(); TRACKS];
    tracks[0] = track;
    Patch::new(tracks, SR).unwrap()
}

pub fn trigger(track: usize) -> ControlEvent {
    ControlEvent::trigger(0, ParamAddress::param(track, Slot::Gen, 0))
}

/// Concatenates `blocks` blocks of a stream.
pub fn collect(blocks: usize, mut next: impl FnMut() -> StereoBuffer) -> StereoBuffer {
    let mut out = StereoBuffer::default();
    for _ in 0..blocks {
        let b = next();
        out.left.extend_from_slice(&b.left);
        out.right.extend_from_slice(&b.right);
    }
    out
}

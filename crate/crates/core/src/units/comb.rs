use super::{input_or_silence, mix, Dsp};
use crate::buffer::StereoBuffer;
use crate::param::ParamRamp;

/// Resonator layouts: single combs or small chords of combs (pitch ratios).
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum ResonatorShape {
    Comb,
    Inverted,
    Chord(&'static [f32]),
}

pub(crate) const CHORD_FIFTH: &[f32] = &[1.0, 1.5];
pub(crate) const CHORD_OCTAVE: &[f32] = &[1.0, 2.0];
pub(crate) const CHORD_MAJOR: &[f32] = &[1.0, 1.259_921, 1.498_307];
pub(crate) const CHORD_MINOR: &[f32] = &[1.0, 1.189_207, 1.498_307];
pub(crate) const CHORD_SUS4: &[f32] = &[1.0, 1.334_84, 1.498_307];
pub(crate) const CHORD_SEVENTH: &[f32] = &[1.0, 1.259_921, 1.498_307, 1.781_797];

struct CombLine {
    buf: Vec<f32>,
    write: usize,
    damp: f32,
}

impl CombLine {
    fn new(len: usize) -> Self {
        Self {
            buf: vec![0.0; len],
            write: 0,
            damp: 0.0,
        }
    }

    #[inline]
    fn tick(&mut self, x: f32, delay: f32, feedback: f32, damping: f32) -> f32 {
        let len = self.buf.len();
        let pos = self.write as f32 + len as f32 - delay;
        let i = pos.floor();
        let frac = pos - i;
        let a = self.buf[i as usize % len];
        let b = self.buf[(i as usize + 1) % len];
        let delayed = a + (b - a) * frac;
        self.damp = delayed + (self.damp - delayed) * damping;
        let y = x + feedback * self.damp;
        self.buf[self.write] = y;
        self.write = (self.write + 1) % len;
        y
    }
}

/// Feedback comb resonator(s) tuned to the frequency parameter.
///
/// Params: `[freq Hz, decay seconds (to -60 dB), damping, mix]`. The loop
/// gain per pass is `10^(-3 · period / decay)`.
pub(crate) struct Resonator {
    shape: ResonatorShape,
    sample_rate: f32,
    lines: Vec<[CombLine; 2]>,
}

/// Lowest tunable pitch; sizes the delay lines.
const MIN_FREQ: f32 = 20.0;

impl Resonator {
    pub fn new(sample_rate: u32, shape: ResonatorShape) -> Self {
        let count = match shape {
            ResonatorShape::Chord(r) => r.len(),
            _ => 1,
        };
        let len = (sample_rate as f32 / MIN_FREQ) as usize + 4;
        Self {
            shape,
            sample_rate: sample_rate as f32,
            lines: (0..count).map(|_| [CombLine::new(len), CombLine::new(len)]).collect(),
        }
    }

    fn ratios(&self) -> &'static [f32] {
        match self.shape {
            ResonatorShape::Chord(r) => r,
            _ => &[1.0],
        }
    }
}

impl Dsp for Resonator {
    fn process(&mut self, input: Option<&StereoBuffer>, params: &[ParamRamp], out: &mut StereoBuffer) {
        let n = out.frames();
        let ratios = self.ratios();
        let sign = if self.shape == ResonatorShape::Inverted { -1.0 } else { 1.0 };
        let scale = 1.0 / ratios.len() as f32;
        let max_delay = (self.lines[0][0].buf.len() - 2) as f32;
        for i in 0..n {
            let freq = params[0].at(i, n).max(MIN_FREQ);
            let decay = params[1].at(i, n).max(1e-3);
            let damping = params[2].at(i, n).clamp(0.0, 0.95);
            let amount = params[3].at(i, n);
            let mut wet = [0.0f32; 2];
            for (lines, &ratio) in self.lines.iter_mut().zip(ratios) {
                let delay = (self.sample_rate / (freq * ratio)).clamp(2.0, max_delay);
                let feedback = sign * 10f32.powf(-3.0 * delay / (decay * self.sample_rate));
                for ch in 0..2 {
                    let x = input_or_silence(input, ch, i);
                    wet[ch] += lines[ch].tick(x, delay, feedback, damping) * scale;
                }
            }
            out.left[i] = mix(input_or_silence(input, 0, i), wet[0], amount);
            out.right[i] = mix(input_or_silence(input, 1, i), wet[1], amount);
        }
    }

    fn reset(&mut self) {
        for pair in &mut self.lines {
            for line in pair.iter_mut() {
                line.buf.fill(0.0);
                line.write = 0;
                line.damp = 0.0;
            }
        }
    }
}

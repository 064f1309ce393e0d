//! Schroeder reverberator in the Freeverb arrangement: eight parallel
//! damped feedback combs into four series allpasses per channel.

use super::{input_or_silence, mix, Dsp};
use crate::buffer::StereoBuffer;
use crate::param::ParamRamp;

const COMB_TUNING: [usize; 8] = [1116, 1188, 1277, 1356, 1422, 1491, 1557, 1617];
const ALLPASS_TUNING: [usize; 4] = [556, 441, 341, 225];
const STEREO_SPREAD: usize = 23;
const INPUT_GAIN: f32 = 0.015;
const ALLPASS_FEEDBACK: f32 = 0.5;

/// Room sizes scale every delay line; `plate` also shortens the allpasses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct RoomSize {
    pub comb_scale: f32,
    pub allpass_scale: f32,
}

struct Comb {
    buf: Vec<f32>,
    idx: usize,
    store: f32,
}

impl Comb {
    fn new(len: usize) -> Self {
        Self {
            buf: vec![0.0; len.max(1)],
            idx: 0,
            store: 0.0,
        }
    }

    #[inline]
    fn tick(&mut self, x: f32, feedback: f32, damp: f32) -> f32 {
        let out = self.buf[self.idx];
        self.store = out * (1.0 - damp) + self.store * damp;
        self.buf[self.idx] = x + self.store * feedback;
        self.idx += 1;
        if self.idx == self.buf.len() {
            self.idx = 0;
        }
        out
    }
}

struct Allpass {
    buf: Vec<f32>,
    idx: usize,
}

impl Allpass {
    fn new(len: usize) -> Self {
        Self {
            buf: vec![0.0; len.max(1)],
            idx: 0,
        }
    }

    #[inline]
    fn tick(&mut self, x: f32) -> f32 {
        let delayed = self.buf[self.idx];
        let out = delayed - x;
        self.buf[self.idx] = x + delayed * ALLPASS_FEEDBACK;
        self.idx += 1;
        if self.idx == self.buf.len() {
            self.idx = 0;
        }
        out
    }
}

struct Channel {
    combs: Vec<Comb>,
    allpasses: Vec<Allpass>,
}

impl Channel {
    fn new(sample_rate: u32, size: RoomSize, spread: usize) -> Self {
        let scale = sample_rate as f32 / 44100.0;
        let len = |base: usize, s: f32| ((base + spread) as f32 * s * scale).round() as usize;
        Self {
            combs: COMB_TUNING.iter().map(|&b| Comb::new(len(b, size.comb_scale))).collect(),
            allpasses: ALLPASS_TUNING
                .iter()
                .map(|&b| Allpass::new(len(b, size.allpass_scale)))
                .collect(),
        }
    }

    #[inline]
    fn tick(&mut self, x: f32, feedback: f32, damp: f32) -> f32 {
        let input = x * INPUT_GAIN;
        let mut acc = 0.0;
        for c in &mut self.combs {
            acc += c.tick(input, feedback, damp);
        }
        for a in &mut self.allpasses {
            acc = a.tick(acc);
        }
        acc
    }
}

/// Params: `[decay, damping, mix]`; decay maps onto comb feedback 0.70..0.98.
pub(crate) struct Reverb {
    sample_rate: u32,
    size: RoomSize,
    channels: [Channel; 2],
}

impl Reverb {
    pub fn new(sample_rate: u32, size: RoomSize) -> Self {
        Self {
            sample_rate,
            size,
            channels: [
                Channel::new(sample_rate, size, 0),
                Channel::new(sample_rate, size, STEREO_SPREAD),
            ],
        }
    }
}

impl Dsp for Reverb {
    fn process(&mut self, input: Option<&StereoBuffer>, params: &[ParamRamp], out: &mut StereoBuffer) {
        let n = out.frames();
        for i in 0..n {
            let feedback = 0.7 + 0.28 * params[0].at(i, n).clamp(0.0, 1.0);
            let damp = params[1].at(i, n).clamp(0.0, 1.0) * 0.4;
            let amount = params[2].at(i, n);
            let dry = [input_or_silence(input, 0, i), input_or_silence(input, 1, i)];
            let mono = dry[0] + dry[1];
            let wl = self.channels[0].tick(mono, feedback, damp);
            let wr = self.channels[1].tick(mono, feedback, damp);
            out.left[i] = mix(dry[0], wl * 3.0, amount);
            out.right[i] = mix(dry[1], wr * 3.0, amount);
        }
    }

    fn reset(&mut self) {
        *self = Self::new(self.sample_rate, self.size);
    }
}

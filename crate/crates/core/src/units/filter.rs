//! Trapezoidal-integrated state variable filter (Simper's "linear trap"
//! form), which stays stable under per-sample coefficient changes.

use std::f32::consts::PI;

use super::{input_or_silence, mix, Dsp};
use crate::buffer::StereoBuffer;
use crate::param::ParamRamp;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum FilterMode {
    Lowpass,
    Highpass,
    Bandpass,
    Notch,
    Peak,
    Allpass,
}

#[derive(Debug, Clone, Copy)]
struct Coeffs {
    a1: f32,
    a2: f32,
    a3: f32,
    k: f32,
}

impl Coeffs {
    #[inline]
    fn new(cutoff: f32, q: f32, sample_rate: f32) -> Self {
        let fc = cutoff.clamp(1.0, 0.49 * sample_rate);
        let g = (PI * fc / sample_rate).tan();
        let k = 1.0 / q.max(0.05);
        let a1 = 1.0 / (1.0 + g * (g + k));
        let a2 = g * a1;
        let a3 = g * a2;
        Self { a1, a2, a3, k }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct SvfState {
    ic1: f32,
    ic2: f32,
}

impl SvfState {
    #[inline]
    fn tick(&mut self, c: &Coeffs, v0: f32, mode: FilterMode) -> f32 {
        let v3 = v0 - self.ic2;
        let v1 = c.a1 * self.ic1 + c.a2 * v3;
        let v2 = self.ic2 + c.a2 * self.ic1 + c.a3 * v3;
        self.ic1 = 2.0 * v1 - self.ic1;
        self.ic2 = 2.0 * v2 - self.ic2;
        let low = v2;
        let band = v1;
        let high = v0 - c.k * v1 - v2;
        match mode {
            FilterMode::Lowpass => low,
            FilterMode::Highpass => high,
            FilterMode::Bandpass => band,
            FilterMode::Notch => low + high,
            FilterMode::Peak => low - high,
            FilterMode::Allpass => low + high - c.k * band,
        }
    }
}

/// Resonance `[0, 1]` to quality factor, exponential from 0.5 to 20.
#[inline]
fn resonance_to_q(res: f32) -> f32 {
    0.5 * 40f32.powf(res.clamp(0.0, 1.0))
}

/// Params: `[cutoff Hz, resonance]`. `stages` of 2 gives the 24 dB/oct slopes.
pub(crate) struct StateVariable {
    mode: FilterMode,
    stages: usize,
    sample_rate: f32,
    state: [[SvfState; 2]; 2],
}

impl StateVariable {
    pub fn new(sample_rate: u32, mode: FilterMode, stages: usize) -> Self {
        Self {
            mode,
            stages: stages.clamp(1, 2),
            sample_rate: sample_rate as f32,
            state: Default::default(),
        }
    }
}

impl Dsp for StateVariable {
    fn process(&mut self, input: Option<&StereoBuffer>, params: &[ParamRamp], out: &mut StereoBuffer) {
        let n = out.frames();
        let constant = params[0].is_constant() && params[1].is_constant();
        let mut c = Coeffs::new(params[0].end, resonance_to_q(params[1].end), self.sample_rate);
        for i in 0..n {
            if !constant {
                c = Coeffs::new(params[0].at(i, n), resonance_to_q(params[1].at(i, n)), self.sample_rate);
            }
            for ch in 0..2 {
                let mut v = input_or_silence(input, ch, i);
                for stage in 0..self.stages {
                    v = self.state[ch][stage].tick(&c, v, self.mode);
                }
                if ch == 0 {
                    out.left[i] = v;
                } else {
                    out.right[i] = v;
                }
            }
        }
    }

    fn reset(&mut self) {
        self.state = Default::default();
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Vowel {
    A,
    E,
    I,
    O,
    U,
}

impl Vowel {
    /// First three formants (Hz) and their relative gains.
    fn formants(self) -> [(f32, f32); 3] {
        match self {
            Vowel::A => [(800.0, 1.0), (1150.0, 0.5), (2900.0, 0.25)],
            Vowel::E => [(400.0, 1.0), (1600.0, 0.35), (2700.0, 0.2)],
            Vowel::I => [(350.0, 1.0), (2300.0, 0.3), (3000.0, 0.2)],
            Vowel::O => [(450.0, 1.0), (800.0, 0.5), (2830.0, 0.1)],
            Vowel::U => [(325.0, 1.0), (700.0, 0.3), (2530.0, 0.05)],
        }
    }
}

/// Three parallel band-pass filters at vowel formants.
/// Params: `[shift ratio, resonance, mix]`.
pub(crate) struct Formant {
    formants: [(f32, f32); 3],
    norm: f32,
    sample_rate: f32,
    state: [[SvfState; 3]; 2],
}

impl Formant {
    pub fn new(sample_rate: u32, vowel: Vowel) -> Self {
        let formants = vowel.formants();
        Self {
            formants,
            norm: 1.0 / formants.iter().map(|f| f.1).sum::<f32>(),
            sample_rate: sample_rate as f32,
            state: Default::default(),
        }
    }

    fn coeffs(&self, shift: f32, res: f32) -> [Coeffs; 3] {
        let q = 2.0 * 10f32.powf(res.clamp(0.0, 1.0));
        self.formants.map(|(f, _)| Coeffs::new(f * shift, q, self.sample_rate))
    }
}

impl Dsp for Formant {
    fn process(&mut self, input: Option<&StereoBuffer>, params: &[ParamRamp], out: &mut StereoBuffer) {
        let n = out.frames();
        let constant = params[0].is_constant() && params[1].is_constant();
        let mut c = self.coeffs(params[0].end, params[1].end);
        for i in 0..n {
            if !constant {
                c = self.coeffs(params[0].at(i, n), params[1].at(i, n));
            }
            let amount = params[2].at(i, n);
            for ch in 0..2 {
                let dry = input_or_silence(input, ch, i);
                let mut wet = 0.0;
                for (k, coeffs) in c.iter().enumerate() {
                    // Band-pass gain at the centre is Q; scale back to unity.
                    let band = self.state[ch][k].tick(coeffs, dry, FilterMode::Bandpass) * coeffs.k;
                    wet += band * self.formants[k].1;
                }
                let v = mix(dry, wet * self.norm, amount);
                if ch == 0 {
                    out.left[i] = v;
                } else {
                    out.right[i] = v;
                }
            }
        }
    }

    fn reset(&mut self) {
        self.state = Default::default();
    }
}

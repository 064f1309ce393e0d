use std::f64::consts::TAU;

use super::{input_or_silence, mix, Dsp};
use crate::buffer::StereoBuffer;
use crate::param::ParamRamp;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum CarrierShape {
    Sine,
    Square,
    Triangle,
    Saw,
    /// Unipolar sine: amplitude modulation rather than ring modulation.
    Am,
}

/// Multiplies the input by an internal carrier. Params: `[freq Hz, mix]`.
pub(crate) struct RingMod {
    shape: CarrierShape,
    phase: f64,
    inv_sr: f64,
}

impl RingMod {
    pub fn new(sample_rate: u32, shape: CarrierShape) -> Self {
        Self {
            shape,
            phase: 0.0,
            inv_sr: 1.0 / sample_rate as f64,
        }
    }

    #[inline]
    fn carrier(&self) -> f32 {
        let p = self.phase;
        (match self.shape {
            CarrierShape::Sine => (TAU * p).sin(),
            CarrierShape::Square => {
                if p < 0.5 {
                    1.0
                } else {
                    -1.0
                }
            }
            CarrierShape::Triangle => 1.0 - 4.0 * (p - 0.5).abs(),
            CarrierShape::Saw => 2.0 * p - 1.0,
            CarrierShape::Am => 0.5 + 0.5 * (TAU * p).sin(),
        }) as f32
    }
}

impl Dsp for RingMod {
    fn process(&mut self, input: Option<&StereoBuffer>, params: &[ParamRamp], out: &mut StereoBuffer) {
        let n = out.frames();
        for i in 0..n {
            let freq = params[0].at(i, n) as f64;
            let amount = params[1].at(i, n);
            let c = self.carrier();
            self.phase += freq * self.inv_sr;
            self.phase -= self.phase.floor();
            let l = input_or_silence(input, 0, i);
            let r = input_or_silence(input, 1, i);
            out.left[i] = mix(l, l * c, amount);
            out.right[i] = mix(r, r * c, amount);
        }
    }

    fn reset(&mut self) {
        self.phase = 0.0;
    }
}

use std::f32::consts::FRAC_PI_2;

use super::{input_or_silence, mix, Dsp};
use crate::buffer::StereoBuffer;
use crate::param::ParamRamp;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum ShaperCurve {
    Tanh,
    HardClip,
    Foldback,
    Bitcrush,
    Cubic,
    FullRectify,
    HalfRectify,
    Asymmetric,
    SineFold,
}

const ASYM_BIAS: f32 = 0.3;

impl ShaperCurve {
    /// Transfer function; every curve maps 0 to 0.
    #[inline]
    fn apply(self, x: f32, drive: f32) -> f32 {
        let d = x * drive;
        match self {
            ShaperCurve::Tanh => d.tanh(),
            ShaperCurve::HardClip => d.clamp(-1.0, 1.0),
            ShaperCurve::Foldback => {
                // Triangle fold into [-1, 1].
                let t = (d + 1.0).rem_euclid(4.0);
                if t < 2.0 {
                    t - 1.0
                } else {
                    3.0 - t
                }
            }
            ShaperCurve::Bitcrush => {
                let levels = (256.0 / drive).max(2.0);
                (x.clamp(-1.0, 1.0) * levels).round() / levels
            }
            ShaperCurve::Cubic => {
                let c = d.clamp(-1.0, 1.0);
                1.5 * (c - c * c * c / 3.0)
            }
            ShaperCurve::FullRectify => d.abs().min(1.0),
            ShaperCurve::HalfRectify => d.clamp(0.0, 1.0),
            ShaperCurve::Asymmetric => {
                // tanh(d + b) - tanh(b), rewritten so zero input gives exactly zero.
                let (t, tb) = (d.tanh(), ASYM_BIAS.tanh());
                t * (1.0 - tb * tb) / (1.0 + t * tb) / (1.0 + tb)
            }
            ShaperCurve::SineFold => (d * FRAC_PI_2).sin(),
        }
    }
}

/// Static waveshaper. Params: `[drive, mix]`.
pub(crate) struct Shaper {
    curve: ShaperCurve,
}

impl Shaper {
    pub fn new(curve: ShaperCurve) -> Self {
        Self { curve }
    }
}

impl Dsp for Shaper {
    fn process(&mut self, input: Option<&StereoBuffer>, params: &[ParamRamp], out: &mut StereoBuffer) {
        let n = out.frames();
        for i in 0..n {
            let drive = params[0].at(i, n);
            let amount = params[1].at(i, n);
            let l = input_or_silence(input, 0, i);
            let r = input_or_silence(input, 1, i);
            out.left[i] = mix(l, self.curve.apply(l, drive), amount);
            out.right[i] = mix(r, self.curve.apply(r, drive), amount);
        }
    }

    fn reset(&mut self) {}
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_curve_fixes_zero_and_stays_bounded() {
        use ShaperCurve::*;
        for curve in [Tanh, HardClip, Foldback, Bitcrush, Cubic, FullRectify, HalfRectify, Asymmetric, SineFold] {
            assert_eq!(curve.apply(0.0, 10.0), 0.0, "{curve:?}");
            for i in -100..=100 {
                let y = curve.apply(i as f32 / 100.0, 40.0);
                assert!(y.abs() <= 1.0 + 1e-6, "{curve:?} {y}");
            }
        }
    }
}

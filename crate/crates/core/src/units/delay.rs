use super::{input_or_silence, mix, Dsp};
use crate::buffer::StereoBuffer;
use crate::param::ParamRamp;

/// One read tap: position as a fraction of the delay time, gain, and
/// left/right weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Tap {
    pub at: f32,
    pub gain: f32,
    pub left: f32,
    pub right: f32,
}

const fn tap(at: f32, gain: f32, left: f32, right: f32) -> Tap {
    Tap { at, gain, left, right }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct TapLayout {
    pub taps: &'static [Tap],
    /// Feed the left line's output into the right line and vice versa.
    pub cross_feedback: bool,
}

pub(crate) const SINGLE: TapLayout = TapLayout {
    taps: &[tap(1.0, 1.0, 1.0, 1.0)],
    cross_feedback: false,
};
pub(crate) const PING_PONG: TapLayout = TapLayout {
    taps: &[tap(1.0, 1.0, 1.0, 0.0)],
    cross_feedback: true,
};
pub(crate) const TRIPLET: TapLayout = TapLayout {
    taps: &[tap(1.0 / 3.0, 0.4, 1.0, 0.6), tap(2.0 / 3.0, 0.3, 0.6, 1.0), tap(1.0, 0.3, 1.0, 1.0)],
    cross_feedback: false,
};
pub(crate) const FOUR_TAP: TapLayout = TapLayout {
    taps: &[
        tap(0.25, 0.3, 1.0, 0.2),
        tap(0.5, 0.25, 0.2, 1.0),
        tap(0.75, 0.25, 1.0, 0.2),
        tap(1.0, 0.2, 0.2, 1.0),
    ],
    cross_feedback: false,
};
pub(crate) const DOTTED: TapLayout = TapLayout {
    taps: &[tap(0.75, 0.6, 1.0, 0.5), tap(1.0, 0.4, 0.5, 1.0)],
    cross_feedback: false,
};
pub(crate) const GOLDEN: TapLayout = TapLayout {
    taps: &[tap(0.381_966, 0.4, 0.8, 0.4), tap(0.618_034, 0.35, 0.4, 0.8), tap(1.0, 0.25, 1.0, 1.0)],
    cross_feedback: false,
};
pub(crate) const CASCADE: TapLayout = TapLayout {
    taps: &[
        tap(0.125, 0.35, 1.0, 1.0),
        tap(0.25, 0.25, 1.0, 1.0),
        tap(0.5, 0.2, 1.0, 1.0),
        tap(1.0, 0.2, 1.0, 1.0),
    ],
    cross_feedback: false,
};
pub(crate) const CLUSTER: TapLayout = TapLayout {
    taps: &[
        tap(0.91, 0.25, 1.0, 0.3),
        tap(0.94, 0.25, 0.3, 1.0),
        tap(0.97, 0.25, 1.0, 0.3),
        tap(1.0, 0.25, 0.3, 1.0),
    ],
    cross_feedback: false,
};

/// Longest delay time in seconds.
pub(crate) const MAX_DELAY_SECONDS: f32 = 1.5;

/// Multi-tap feedback delay. Params: `[time seconds, feedback, mix]`.
/// Feedback is taken from the full-length tap.
pub(crate) struct MultiTapDelay {
    layout: TapLayout,
    sample_rate: f32,
    lines: [Vec<f32>; 2],
    write: usize,
}

impl MultiTapDelay {
    pub fn new(sample_rate: u32, layout: TapLayout) -> Self {
        let len = (MAX_DELAY_SECONDS * sample_rate as f32) as usize + 4;
        Self {
            layout,
            sample_rate: sample_rate as f32,
            lines: [vec![0.0; len], vec![0.0; len]],
            write: 0,
        }
    }

    #[inline]
    fn read(&self, ch: usize, delay: f32) -> f32 {
        let line = &self.lines[ch];
        let len = line.len();
        let pos = self.write as f32 + len as f32 - delay;
        let i = pos.floor();
        let frac = pos - i;
        let a = line[i as usize % len];
        let b = line[(i as usize + 1) % len];
        a + (b - a) * frac
    }
}

impl Dsp for MultiTapDelay {
    fn process(&mut self, input: Option<&StereoBuffer>, params: &[ParamRamp], out: &mut StereoBuffer) {
        let n = out.frames();
        let len = self.lines[0].len();
        let max_delay = (len - 2) as f32;
        for i in 0..n {
            let delay = (params[0].at(i, n) * self.sample_rate).clamp(2.0, max_delay);
            let feedback = params[1].at(i, n).clamp(0.0, 0.95);
            let amount = params[2].at(i, n);
            let dry = [input_or_silence(input, 0, i), input_or_silence(input, 1, i)];
            let mut wet = [0.0f32; 2];
            for t in self.layout.taps {
                let d = (delay * t.at).max(2.0);
                let l = self.read(0, d) * t.gain;
                let r = self.read(1, d) * t.gain;
                wet[0] += l * t.left;
                wet[1] += r * t.right;
            }
            let fb = [self.read(0, delay), self.read(1, delay)];
            let (fl, fr) = if self.layout.cross_feedback { (fb[1], fb[0]) } else { (fb[0], fb[1]) };
            // Ping-pong feeds the input into the left line only.
            let (inl, inr) = if self.layout.cross_feedback {
                (0.5 * (dry[0] + dry[1]), 0.0)
            } else {
                (dry[0], dry[1])
            };
            self.lines[0][self.write] = inl + feedback * fl;
            self.lines[1][self.write] = inr + feedback * fr;
            self.write = (self.write + 1) % len;
            if self.layout.cross_feedback {
                wet = [fb[0], fb[1]];
            }
            out.left[i] = mix(dry[0], wet[0], amount);
            out.right[i] = mix(dry[1], wet[1], amount);
        }
    }

    fn reset(&mut self) {
        self.lines[0].fill(0.0);
        self.lines[1].fill(0.0);
        self.write = 0;
    }
}

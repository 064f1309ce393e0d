//! DSP implementations behind the catalog entries.
//!
//! Generators share a common frame: an [`Oscillator`] produces a mono
//! signal, an attack/release [`Envelope`] excited by triggers shapes it, and
//! the amplitude and pan parameters place it in the stereo field. Processors
//! implement [`Dsp`] directly.

mod additive;
mod comb;
mod delay;
mod envelope;
mod filter;
mod fm;
mod noise;
mod oscillators;
mod pluck;
mod reverb;
mod ring;
mod sampler;
mod shaper;

use crate::buffer::StereoBuffer;
use crate::param::ParamRamp;

pub use envelope::{Envelope, ATTACK_SECONDS, RELEASE_HOLD_SECONDS};
pub use sampler::{bundled_tone, Sample, SampleError, BUNDLED_TONE_HZ};

pub(crate) use additive::Additive;
pub(crate) use comb::Resonator;
pub(crate) use delay::MultiTapDelay;
pub(crate) use filter::{Formant, StateVariable};
pub(crate) use fm::TwoOpFm;
pub(crate) use noise::Noise;
pub(crate) use oscillators::{PolyBlepPulse, PolyBlepSaw, NaiveSquare, Sine, Supersaw, Triangle};
pub(crate) use pluck::Pluck;
pub(crate) use reverb::Reverb;
pub(crate) use ring::RingMod;
pub(crate) use sampler::SamplePlayer;
pub(crate) use shaper::Shaper;

pub(crate) use comb::ResonatorShape;
pub(crate) use delay::TapLayout;
pub(crate) use filter::{FilterMode, Vowel};
pub(crate) use noise::NoiseColor;
pub(crate) use pluck::PluckVoice;
pub(crate) use reverb::RoomSize;
pub(crate) use ring::CarrierShape;
pub(crate) use sampler::PlayMode;
pub(crate) use shaper::ShaperCurve;
pub(crate) use additive::Registration;

/// A block-processing audio unit.
pub(crate) trait Dsp: Send {
    /// Renders one block into `out`. Processors read `input`; generators get `None`.
    fn process(&mut self, input: Option<&StereoBuffer>, params: &[ParamRamp], out: &mut StereoBuffer);

    /// Excites a generator (pluck). Processors ignore it.
    fn trigger(&mut self) {}

    /// Returns to the freshly instantiated state.
    fn reset(&mut self);
}

/// Per-sample mono source used by [`Generator`].
pub(crate) trait Oscillator: Send {
    /// `freq` in Hz, `extra` holds the family-specific parameters at this sample.
    fn next(&mut self, freq: f32, extra: &[f32]) -> f32;

    fn excite(&mut self) {}

    fn reset(&mut self);
}

/// Number of extra parameters a generator can carry between `release` and `pan`.
const MAX_EXTRA: usize = 2;

/// Generator parameter layout: `[freq, amp, release, extra.., pan]`.
pub(crate) struct Generator<O> {
    osc: O,
    env: Envelope,
}

impl<O: Oscillator> Generator<O> {
    pub fn new(osc: O, sample_rate: u32) -> Self {
        Self {
            osc,
            env: Envelope::new(sample_rate),
        }
    }
}

/// Balance law: centre leaves both channels at unity, the far side silences the other.
#[inline]
pub(crate) fn pan_gains(pan: f32) -> (f32, f32) {
    let p = pan.clamp(0.0, 1.0);
    ((2.0 * (1.0 - p)).min(1.0), (2.0 * p).min(1.0))
}

impl<O: Oscillator> Dsp for Generator<O> {
    fn process(&mut self, _input: Option<&StereoBuffer>, params: &[ParamRamp], out: &mut StereoBuffer) {
        let n = out.frames();
        let extra_count = params.len() - 4;
        debug_assert!(extra_count <= MAX_EXTRA);
        let pan_ramp = params[params.len() - 1];
        let mut extra = [0.0f32; MAX_EXTRA];
        for i in 0..n {
            let freq = params[0].at(i, n);
            let amp = params[1].at(i, n);
            let release = params[2].at(i, n);
            for (k, slot) in extra.iter_mut().enumerate().take(extra_count) {
                *slot = params[3 + k].at(i, n);
            }
            let level = self.env.next(release);
            let s = self.osc.next(freq, &extra[..extra_count]) * amp * level;
            let (gl, gr) = pan_gains(pan_ramp.at(i, n));
            out.left[i] = s * gl;
            out.right[i] = s * gr;
        }
    }

    fn trigger(&mut self) {
        self.env.trigger();
        self.osc.excite();
    }

    fn reset(&mut self) {
        self.env.reset();
        self.osc.reset();
    }
}

/// Identity processor.
pub(crate) struct Bypass;

impl Dsp for Bypass {
    fn process(&mut self, input: Option<&StereoBuffer>, _params: &[ParamRamp], out: &mut StereoBuffer) {
        match input {
            Some(input) => out.copy_from(input),
            None => out.clear(),
        }
    }

    fn reset(&mut self) {}
}

/// Runs `f` over each channel of `input` (or silence) into `out`.
#[inline]
pub(crate) fn input_or_silence(input: Option<&StereoBuffer>, ch: usize, i: usize) -> f32 {
    match input {
        Some(b) if ch == 0 => b.left[i],
        Some(b) => b.right[i],
        None => 0.0,
    }
}

/// Wet/dry blend.
#[inline]
pub(crate) fn mix(dry: f32, wet: f32, amount: f32) -> f32 {
    dry + (wet - dry) * amount
}

pub(crate) use comb::{CHORD_FIFTH, CHORD_MAJOR, CHORD_MINOR, CHORD_OCTAVE, CHORD_SEVENTH, CHORD_SUS4};
pub(crate) use delay::{CASCADE, CLUSTER, DOTTED, FOUR_TAP, GOLDEN, PING_PONG, SINGLE, TRIPLET};

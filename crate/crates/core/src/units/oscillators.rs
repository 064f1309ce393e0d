use std::f64::consts::TAU;

use super::Oscillator;

#[inline]
fn advance(phase: &mut f64, inc: f64) {
    *phase += inc;
    if *phase >= 1.0 {
        *phase -= phase.floor();
    }
}

/// Polynomial band-limited step residual for a discontinuity at phase 0.
#[inline]
fn poly_blep(t: f64, dt: f64) -> f64 {
    if t < dt {
        let x = t / dt;
        x + x - x * x - 1.0
    } else if t > 1.0 - dt {
        let x = (t - 1.0) / dt;
        x * x + x + x + 1.0
    } else {
        0.0
    }
}

pub(crate) struct Sine {
    phase: f64,
    inv_sr: f64,
}

impl Sine {
    pub fn new(sample_rate: u32) -> Self {
        Self {
            phase: 0.0,
            inv_sr: 1.0 / sample_rate as f64,
        }
    }
}

impl Oscillator for Sine {
    fn next(&mut self, freq: f32, _extra: &[f32]) -> f32 {
        let s = (TAU * self.phase).sin() as f32;
        advance(&mut self.phase, freq as f64 * self.inv_sr);
        s
    }

    fn reset(&mut self) {
        self.phase = 0.0;
    }
}

/// Plain two-level square; its RMS equals its amplitude exactly.
pub(crate) struct NaiveSquare {
    phase: f64,
    inv_sr: f64,
}

impl NaiveSquare {
    pub fn new(sample_rate: u32) -> Self {
        Self {
            phase: 0.0,
            inv_sr: 1.0 / sample_rate as f64,
        }
    }
}

impl Oscillator for NaiveSquare {
    fn next(&mut self, freq: f32, _extra: &[f32]) -> f32 {
        let s = if self.phase < 0.5 { 1.0 } else { -1.0 };
        advance(&mut self.phase, freq as f64 * self.inv_sr);
        s
    }

    fn reset(&mut self) {
        self.phase = 0.0;
    }
}

/// PolyBLEP pulse with a fixed duty cycle, DC removed.
pub(crate) struct PolyBlepPulse {
    phase: f64,
    inv_sr: f64,
    width: f64,
}

impl PolyBlepPulse {
    pub fn new(sample_rate: u32, width: f64) -> Self {
        Self {
            phase: 0.0,
            inv_sr: 1.0 / sample_rate as f64,
            width,
        }
    }
}

impl Oscillator for PolyBlepPulse {
    fn next(&mut self, freq: f32, _extra: &[f32]) -> f32 {
        let dt = (freq as f64 * self.inv_sr).min(0.5);
        let t = self.phase;
        let mut s = if t < self.width { 1.0 } else { -1.0 };
        s += poly_blep(t, dt);
        let mut t2 = t + (1.0 - self.width);
        if t2 >= 1.0 {
            t2 -= 1.0;
        }
        s -= poly_blep(t2, dt);
        // Mean of a ±1 pulse with duty `w` is 2w - 1.
        let out = (s - (2.0 * self.width - 1.0)) / (2.0 * (1.0 - self.width)).max(1.0);
        advance(&mut self.phase, dt);
        out as f32
    }

    fn reset(&mut self) {
        self.phase = 0.0;
    }
}

pub(crate) struct PolyBlepSaw {
    phase: f64,
    inv_sr: f64,
    direction: f64,
}

impl PolyBlepSaw {
    /// `rising` selects the ramp-up shape; otherwise the ramp falls.
    pub fn new(sample_rate: u32, rising: bool) -> Self {
        Self::with_phase(sample_rate, rising, 0.0)
    }

    pub fn with_phase(sample_rate: u32, rising: bool, phase: f64) -> Self {
        Self {
            phase,
            inv_sr: 1.0 / sample_rate as f64,
            direction: if rising { 1.0 } else { -1.0 },
        }
    }

    #[inline]
    fn tick(&mut self, freq: f64) -> f64 {
        let dt = (freq * self.inv_sr).min(0.5);
        let s = 2.0 * self.phase - 1.0 - poly_blep(self.phase, dt);
        advance(&mut self.phase, dt);
        s * self.direction
    }
}

impl Oscillator for PolyBlepSaw {
    fn next(&mut self, freq: f32, _extra: &[f32]) -> f32 {
        self.tick(freq as f64) as f32
    }

    fn reset(&mut self) {
        self.phase = 0.0;
    }
}

pub(crate) struct Triangle {
    phase: f64,
    inv_sr: f64,
}

impl Triangle {
    pub fn new(sample_rate: u32) -> Self {
        Self {
            phase: 0.0,
            inv_sr: 1.0 / sample_rate as f64,
        }
    }
}

impl Oscillator for Triangle {
    fn next(&mut self, freq: f32, _extra: &[f32]) -> f32 {
        let s = 1.0 - 4.0 * (self.phase - 0.5).abs();
        advance(&mut self.phase, freq as f64 * self.inv_sr);
        s as f32
    }

    fn reset(&mut self) {
        self.phase = 0.0;
    }
}

/// Stack of detuned band-limited saws. Extra parameter: detune amount `[0, 1]`.
pub(crate) struct Supersaw {
    voices: Vec<PolyBlepSaw>,
    sample_rate: u32,
}

/// Maximum spread of the outermost voice, in cents.
const SUPERSAW_SPREAD_CENTS: f64 = 50.0;

impl Supersaw {
    pub fn new(sample_rate: u32, voices: usize) -> Self {
        Self {
            voices: Self::fresh(sample_rate, voices),
            sample_rate,
        }
    }

    fn fresh(sample_rate: u32, voices: usize) -> Vec<PolyBlepSaw> {
        // Fixed, spread-out start phases so the stack does not start phase-locked.
        (0..voices)
            .map(|v| PolyBlepSaw::with_phase(sample_rate, true, (v as f64 * 0.618_034).fract()))
            .collect()
    }
}

impl Oscillator for Supersaw {
    fn next(&mut self, freq: f32, extra: &[f32]) -> f32 {
        let detune = extra.first().copied().unwrap_or(0.0) as f64;
        let count = self.voices.len();
        let centre = (count - 1) as f64 / 2.0;
        let mut sum = 0.0;
        for (v, saw) in self.voices.iter_mut().enumerate() {
            let offset = if centre > 0.0 { (v as f64 - centre) / centre } else { 0.0 };
            let cents = offset * detune * SUPERSAW_SPREAD_CENTS;
            sum += saw.tick(freq as f64 * (cents / 1200.0).exp2());
        }
        (sum / count as f64) as f32
    }

    fn reset(&mut self) {
        self.voices = Self::fresh(self.sample_rate, self.voices.len());
    }
}

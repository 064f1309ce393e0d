use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Oscillator;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum NoiseColor {
    White,
    /// Paul Kellet's economy pink filter.
    Pink,
    /// Leaky-integrated white noise.
    Brown,
    /// White values held for one period of the frequency parameter.
    SampleHold,
}

/// Seeded noise source. The frequency slot is a one-pole tone control
/// (fully open at the top of its range) or, for sample-and-hold, the hold rate.
pub(crate) struct Noise {
    color: NoiseColor,
    seed: u64,
    rng: ChaCha8Rng,
    sample_rate: f32,
    pink: [f32; 3],
    brown: f32,
    held: f32,
    hold_phase: f32,
    tone: f32,
}

impl Noise {
    pub fn new(sample_rate: u32, color: NoiseColor, seed: u64) -> Self {
        Self {
            color,
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
            sample_rate: sample_rate as f32,
            pink: [0.0; 3],
            brown: 0.0,
            held: 0.0,
            hold_phase: 1.0,
            tone: 0.0,
        }
    }

    #[inline]
    fn white(&mut self) -> f32 {
        self.rng.random::<f32>() * 2.0 - 1.0
    }
}

impl Oscillator for Noise {
    fn next(&mut self, freq: f32, _extra: &[f32]) -> f32 {
        let raw = match self.color {
            NoiseColor::White => self.white(),
            NoiseColor::Pink => {
                let w = self.white();
                self.pink[0] = 0.99765 * self.pink[0] + w * 0.099_046;
                self.pink[1] = 0.96300 * self.pink[1] + w * 0.296_516_4;
                self.pink[2] = 0.57000 * self.pink[2] + w * 1.052_691_3;
                (self.pink[0] + self.pink[1] + self.pink[2] + w * 0.1848) * 0.25
            }
            NoiseColor::Brown => {
                let w = self.white();
                self.brown = (self.brown * 0.998 + w * 0.05).clamp(-1.0, 1.0);
                self.brown
            }
            NoiseColor::SampleHold => {
                self.hold_phase += freq / self.sample_rate;
                if self.hold_phase >= 1.0 {
                    self.hold_phase -= self.hold_phase.floor();
                    self.held = self.white();
                }
                return self.held;
            }
        };
        let cutoff = freq.min(0.5 * self.sample_rate);
        if cutoff >= 0.45 * self.sample_rate {
            self.tone = raw;
        } else {
            let a = 1.0 - (-std::f32::consts::TAU * cutoff / self.sample_rate).exp();
            self.tone += a * (raw - self.tone);
        }
        self.tone.clamp(-1.0, 1.0)
    }

    fn reset(&mut self) {
        *self = Self::new(self.sample_rate as u32, self.color, self.seed);
    }
}

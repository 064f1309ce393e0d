use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Oscillator;

/// Loop-gain presets for the plucked string.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum PluckVoice {
    Nylon,
    Steel,
    Muted,
    Harp,
}

impl PluckVoice {
    fn loop_gain(self) -> f32 {
        match self {
            PluckVoice::Nylon => 0.996,
            PluckVoice::Steel => 0.999,
            PluckVoice::Muted => 0.97,
            PluckVoice::Harp => 0.998,
        }
    }
}

/// Karplus-Strong string: a noise burst circulating in a fractional delay
/// line with a two-point averaging loop filter. Extra parameter: brightness.
pub(crate) struct Pluck {
    line: Vec<f32>,
    write: usize,
    last: f32,
    loop_gain: f32,
    sample_rate: f32,
    seed: u64,
    rng: ChaCha8Rng,
}

/// Lowest supported pitch; sizes the delay line.
const MIN_FREQ: f32 = 20.0;

impl Pluck {
    pub fn new(sample_rate: u32, voice: PluckVoice, seed: u64) -> Self {
        let len = (sample_rate as f32 / MIN_FREQ) as usize + 4;
        Self {
            line: vec![0.0; len],
            write: 0,
            last: 0.0,
            loop_gain: voice.loop_gain(),
            sample_rate: sample_rate as f32,
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    #[inline]
    fn read(&self, delay: f32) -> f32 {
        let len = self.line.len();
        let pos = self.write as f32 + len as f32 - delay;
        let i = pos.floor();
        let frac = pos - i;
        let a = self.line[i as usize % len];
        let b = self.line[(i as usize + 1) % len];
        a + (b - a) * frac
    }
}

impl Oscillator for Pluck {
    fn next(&mut self, freq: f32, extra: &[f32]) -> f32 {
        let brightness = extra.first().copied().unwrap_or(0.5).clamp(0.0, 1.0);
        let max_delay = (self.line.len() - 2) as f32;
        let delay = (self.sample_rate / freq.max(MIN_FREQ)).clamp(2.0, max_delay);
        let y = self.read(delay);
        // brightness 1 keeps most of the current sample; 0 averages evenly.
        let keep = 0.5 + 0.45 * brightness;
        let filtered = self.loop_gain * (keep * y + (1.0 - keep) * self.last);
        self.last = y;
        self.line[self.write] = filtered;
        self.write = (self.write + 1) % self.line.len();
        y
    }

    fn excite(&mut self) {
        for s in self.line.iter_mut() {
            *s = self.rng.random::<f32>() * 2.0 - 1.0;
        }
        self.last = 0.0;
    }

    fn reset(&mut self) {
        self.line.fill(0.0);
        self.write = 0;
        self.last = 0.0;
        self.rng = ChaCha8Rng::seed_from_u64(self.seed);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn silent_until_excited_then_decays() {
        let mut p = Pluck::new(44100, PluckVoice::Muted, 1);
        assert!((0..1000).all(|_| p.next(220.0, &[0.5]) == 0.0));
        p.excite();
        let early: f32 = (0..2000).map(|_| p.next(220.0, &[0.5]).abs()).fold(0.0, f32::max);
        for _ in 0..44100 {
            p.next(220.0, &[0.5]);
        }
        let late: f32 = (0..2000).map(|_| p.next(220.0, &[0.5]).abs()).fold(0.0, f32::max);
        assert!(early > 0.5 && late < early * 0.05, "{early} {late}");
    }
}

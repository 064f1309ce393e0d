use std::f64::consts::TAU;

use super::Oscillator;

/// Two-operator phase modulation: a sine modulator at `ratio × freq`
/// drives the carrier phase. Extra parameter: modulation index.
pub(crate) struct TwoOpFm {
    ratio: f64,
    carrier: f64,
    modulator: f64,
    inv_sr: f64,
}

impl TwoOpFm {
    pub fn new(sample_rate: u32, ratio: f64) -> Self {
        Self {
            ratio,
            carrier: 0.0,
            modulator: 0.0,
            inv_sr: 1.0 / sample_rate as f64,
        }
    }
}

#[inline]
fn wrap(phase: &mut f64, inc: f64) {
    *phase += inc;
    *phase -= phase.floor();
}

impl Oscillator for TwoOpFm {
    fn next(&mut self, freq: f32, extra: &[f32]) -> f32 {
        let index = extra.first().copied().unwrap_or(0.0) as f64;
        let m = (TAU * self.modulator).sin();
        let s = (TAU * self.carrier + index * m).sin();
        let inc = freq as f64 * self.inv_sr;
        wrap(&mut self.carrier, inc);
        wrap(&mut self.modulator, inc * self.ratio);
        s as f32
    }

    fn reset(&mut self) {
        self.carrier = 0.0;
        self.modulator = 0.0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_index_is_a_sine() {
        let mut fm = TwoOpFm::new(44100, 3.5);
        for i in 0..1000 {
            let expect = (TAU * 441.0 * i as f64 / 44100.0).sin() as f32;
            assert!((fm.next(441.0, &[0.0]) - expect).abs() < 1e-4);
        }
    }
}

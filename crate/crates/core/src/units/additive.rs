use std::f64::consts::TAU;

use super::Oscillator;

/// Partial layouts for the additive generator: (frequency multiple, amplitude).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Registration {
    Flute,
    Principal,
    Clarinet,
    Bell,
}

impl Registration {
    fn partials(self) -> &'static [(f64, f64)] {
        match self {
            Registration::Flute => &[(1.0, 1.0), (2.0, 0.3), (3.0, 0.1)],
            Registration::Principal => &[
                (1.0, 1.0),
                (2.0, 0.5),
                (3.0, 0.333),
                (4.0, 0.25),
                (5.0, 0.2),
                (6.0, 0.166),
                (7.0, 0.142),
                (8.0, 0.125),
            ],
            Registration::Clarinet => &[(1.0, 1.0), (3.0, 0.5), (5.0, 0.3), (7.0, 0.2), (9.0, 0.12)],
            Registration::Bell => &[(1.0, 1.0), (2.76, 0.6), (5.40, 0.4), (8.93, 0.25), (13.34, 0.15)],
        }
    }
}

/// Sum of sine partials; partials at or above Nyquist are skipped.
/// Extra parameter: brightness, a spectral tilt applied to upper partials.
pub(crate) struct Additive {
    partials: &'static [(f64, f64)],
    phases: Vec<f64>,
    inv_sr: f64,
}

impl Additive {
    pub fn new(sample_rate: u32, registration: Registration) -> Self {
        let partials = registration.partials();
        Self {
            partials,
            phases: vec![0.0; partials.len()],
            inv_sr: 1.0 / sample_rate as f64,
        }
    }
}

impl Oscillator for Additive {
    fn next(&mut self, freq: f32, extra: &[f32]) -> f32 {
        let brightness = extra.first().copied().unwrap_or(1.0) as f64;
        let base = freq as f64 * self.inv_sr;
        let mut sum = 0.0;
        let mut norm = 0.0;
        for (k, (&(mult, amp), phase)) in self.partials.iter().zip(self.phases.iter_mut()).enumerate() {
            let inc = base * mult;
            if inc >= 0.5 {
                continue;
            }
            let weight = if k == 0 { amp } else { amp * brightness };
            sum += weight * (TAU * *phase).sin();
            norm += weight;
            *phase += inc;
            *phase -= phase.floor();
        }
        if norm > 0.0 {
            (sum / norm) as f32
        } else {
            0.0
        }
    }

    fn reset(&mut self) {
        self.phases.fill(0.0);
    }
}

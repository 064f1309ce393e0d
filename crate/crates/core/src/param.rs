use serde::Serialize;

/// How a normalized `[0, 1]` control value maps onto a physical range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Curve {
    Linear,
    /// `min * (max / min)^x`; requires `0 < min < max`.
    Exponential,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParamSpec {
    pub name: &'static str,
    pub min: f32,
    pub max: f32,
    pub curve: Curve,
    /// Normalized default.
    pub default: f32,
    /// Frequency-like parameters are pitch targets for plucks, frets and arpeggios.
    pub frequency_like: bool,
}

impl ParamSpec {
    pub const fn linear(name: &'static str, min: f32, max: f32, default: f32) -> Self {
        Self {
            name,
            min,
            max,
            curve: Curve::Linear,
            default,
            frequency_like: false,
        }
    }

    pub const fn exponential(name: &'static str, min: f32, max: f32, default: f32) -> Self {
        Self {
            name,
            min,
            max,
            curve: Curve::Exponential,
            default,
            frequency_like: false,
        }
    }

    pub const fn frequency(name: &'static str, min: f32, max: f32, default: f32) -> Self {
        Self {
            name,
            min,
            max,
            curve: Curve::Exponential,
            default,
            frequency_like: true,
        }
    }

    /// Maps a normalized value to the physical range. Inputs are clamped to `[0, 1]`.
    pub fn to_physical(&self, normalized: f32) -> f32 {
        let x = normalized.clamp(0.0, 1.0) as f64;
        let (min, max) = (self.min as f64, self.max as f64);
        let v = match self.curve {
            Curve::Linear => min + (max - min) * x,
            Curve::Exponential => min * (max / min).powf(x),
        };
        v as f32
    }

    /// Inverse of [`ParamSpec::to_physical`], clamped to `[0, 1]`.
    pub fn to_normalized(&self, physical: f32) -> f32 {
        let p = physical as f64;
        let (min, max) = (self.min as f64, self.max as f64);
        let x = match self.curve {
            Curve::Linear => (p - min) / (max - min),
            Curve::Exponential => (p / min).ln() / (max / min).ln(),
        };
        (x as f32).clamp(0.0, 1.0)
    }
}

/// A physical parameter value moving linearly across one block.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamRamp {
    pub start: f32,
    pub end: f32,
}

impl ParamRamp {
    pub const fn constant(value: f32) -> Self {
        Self {
            start: value,
            end: value,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.start == self.end
    }

    /// Value at sample `i` of an `n`-sample block; the last sample lands on `end`.
    #[inline]
    pub fn at(&self, i: usize, n: usize) -> f32 {
        if self.start == self.end {
            return self.end;
        }
        let t = (i + 1) as f32 / n as f32;
        self.start + (self.end - self.start) * t
    }
}

use std::io::Read;
use std::sync::{Arc, LazyLock};

use super::Oscillator;

/// Pitch of the bundled tone's fundamental (exactly 200 samples per cycle at 44.1 kHz).
pub const BUNDLED_TONE_HZ: f32 = 220.5;

const BUNDLED_TONE_WAV: &[u8] = include_bytes!("../../assets/tone.wav");

static BUNDLED: LazyLock<Arc<Sample>> = LazyLock::new(|| {
    Arc::new(
        Sample::from_wav(BUNDLED_TONE_WAV, BUNDLED_TONE_HZ).expect("bundled tone asset is a valid mono 16-bit WAV"),
    )
});

/// The tone shipped with the crate, used by every sample-player variation.
pub fn bundled_tone() -> Arc<Sample> {
    Arc::clone(&BUNDLED)
}

#[derive(Debug, thiserror::Error)]
pub enum SampleError {
    #[error("unsupported sample format: {0}")]
    Format(String),
    #[error(transparent)]
    Wav(#[from] hound::Error),
}

/// Mono sample data with the pitch it was recorded at.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub data: Vec<f32>,
    pub sample_rate: u32,
    pub root_hz: f32,
}

impl Sample {
    /// Loads a 16-bit PCM mono 44.1 kHz WAV stream.
    pub fn from_wav<R: Read>(reader: R, root_hz: f32) -> Result<Self, SampleError> {
        let reader = hound::WavReader::new(reader)?;
        let spec = reader.spec();
        if spec.channels != 1
            || spec.bits_per_sample != 16
            || spec.sample_format != hound::SampleFormat::Int
            || spec.sample_rate != 44100
        {
            return Err(SampleError::Format(format!(
                "expected 16-bit PCM mono at 44100 Hz, got {} ch / {} bit / {} Hz",
                spec.channels, spec.bits_per_sample, spec.sample_rate
            )));
        }
        let data = reader
            .into_samples::<i16>()
            .map(|s| s.map(|v| v as f32 / 32768.0))
            .collect::<Result<Vec<_>, _>>()?;
        if data.is_empty() {
            return Err(SampleError::Format("no sample frames".into()));
        }
        Ok(Self {
            data,
            sample_rate: spec.sample_rate,
            root_hz,
        })
    }
}

/// Harmonic test tone from which `assets/tone.wav` is generated.
#[cfg(test)]
pub(crate) fn synthesize_tone() -> Vec<i16> {
    let sr = 44100.0;
    (0..44100)
        .map(|n| {
            let t = n as f64 / sr;
            let s: f64 = (1..=6)
                .map(|k| (std::f64::consts::TAU * BUNDLED_TONE_HZ as f64 * k as f64 * t).sin() / k as f64)
                .sum();
            (s * 0.45 * 32767.0).round() as i16
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum PlayMode {
    Loop,
    PingPong,
    OneShot,
    Reverse,
}

/// Plays a [`Sample`] transposed to the frequency parameter.
/// Extra parameter: start position as a fraction of the sample.
pub(crate) struct SamplePlayer {
    sample: Arc<Sample>,
    mode: PlayMode,
    pos: f64,
    forward: bool,
    playing: bool,
    rate_scale: f64,
    pending_start: bool,
}

impl SamplePlayer {
    pub fn new(sample_rate: u32, sample: Arc<Sample>, mode: PlayMode) -> Self {
        let rate_scale = sample.sample_rate as f64 / sample_rate as f64;
        Self {
            sample,
            mode,
            pos: 0.0,
            forward: mode != PlayMode::Reverse,
            playing: mode != PlayMode::OneShot,
            rate_scale,
            pending_start: false,
        }
    }

    #[inline]
    fn read(&self, pos: f64) -> f32 {
        let data = &self.sample.data;
        let i = pos.floor() as usize % data.len();
        let j = (i + 1) % data.len();
        let frac = (pos - pos.floor()) as f32;
        data[i] + (data[j] - data[i]) * frac
    }
}

impl Oscillator for SamplePlayer {
    fn next(&mut self, freq: f32, extra: &[f32]) -> f32 {
        let len = self.sample.data.len() as f64;
        let start = (extra.first().copied().unwrap_or(0.0).clamp(0.0, 0.99) as f64 * len).floor();
        if self.pending_start {
            self.pending_start = false;
            self.playing = true;
            self.forward = self.mode != PlayMode::Reverse;
            self.pos = if self.mode == PlayMode::Reverse { len - 1.0 } else { start };
        }
        if !self.playing {
            return 0.0;
        }
        let s = self.read(self.pos);
        let step = freq as f64 / self.sample.root_hz as f64 * self.rate_scale;
        match self.mode {
            PlayMode::Loop => {
                self.pos += step;
                if self.pos >= len {
                    self.pos = start + (self.pos - len) % (len - start);
                }
            }
            PlayMode::OneShot => {
                self.pos += step;
                if self.pos >= len - 1.0 {
                    self.playing = false;
                }
            }
            PlayMode::Reverse => {
                self.pos -= step;
                if self.pos < start {
                    self.pos = len - 1.0 - (start - self.pos) % (len - 1.0 - start).max(1.0);
                }
            }
            PlayMode::PingPong => {
                let last = len - 1.0;
                if self.forward {
                    self.pos += step;
                    if self.pos >= last {
                        self.pos = (last - (self.pos - last)).max(start);
                        self.forward = false;
                    }
                } else {
                    self.pos -= step;
                    if self.pos <= start {
                        self.pos = (start + (start - self.pos)).min(last);
                        self.forward = true;
                    }
                }
            }
        }
        s
    }

    fn excite(&mut self) {
        self.pending_start = true;
    }

    fn reset(&mut self) {
        self.pos = 0.0;
        self.forward = self.mode != PlayMode::Reverse;
        self.playing = self.mode != PlayMode::OneShot;
        self.pending_start = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn asset_matches_generator() {
        let tone = bundled_tone();
        let expected = synthesize_tone();
        assert_eq!(tone.data.len(), expected.len());
        assert!(tone
            .data
            .iter()
            .zip(expected)
            .all(|(&a, b)| a == b as f32 / 32768.0));
    }

    /// Regenerates `assets/tone.wav`; run with `--ignored` after changing the tone.
    #[test]
    #[ignore]
    fn write_tone_asset() {
        let spec = hound::WavSpec {
            channels: 1,
            sample_rate: 44100,
            bits_per_sample: 16,
            sample_format: hound::SampleFormat::Int,
        };
        let path = concat!(env!("CARGO_MANIFEST_DIR"), "/assets/tone.wav");
        let mut w = hound::WavWriter::create(path, spec).unwrap();
        for s in synthesize_tone() {
            w.write_sample(s).unwrap();
        }
        w.finalize().unwrap();
    }

    #[test]
    fn rejects_stereo_input() {
        let spec = hound::WavSpec {
            channels: 2,
            sample_rate: 44100,
            bits_per_sample: 16,
            sample_format: hound::SampleFormat::Int,
        };
        let mut cursor = std::io::Cursor::new(Vec::new());
        {
            let mut w = hound::WavWriter::new(&mut cursor, spec).unwrap();
            w.write_sample(0i16).unwrap();
            w.write_sample(0i16).unwrap();
            w.finalize().unwrap();
        }
        let bytes = cursor.into_inner();
        assert!(matches!(Sample::from_wav(&bytes[..], 440.0), Err(SampleError::Format(_))));
    }

    #[test]
    fn one_shot_stops_after_the_sample() {
        let mut p = SamplePlayer::new(44100, bundled_tone(), PlayMode::OneShot);
        assert_eq!(p.next(BUNDLED_TONE_HZ, &[0.0]), 0.0);
        p.excite();
        for _ in 0..44100 {
            p.next(BUNDLED_TONE_HZ, &[0.0]);
        }
        assert!((0..100).all(|_| p.next(BUNDLED_TONE_HZ, &[0.0]) == 0.0));
    }

    #[test]
    fn loop_at_root_pitch_reproduces_sample() {
        let tone = bundled_tone();
        let mut p = SamplePlayer::new(44100, tone.clone(), PlayMode::Loop);
        p.excite();
        for i in 0..1000 {
            assert_eq!(p.next(BUNDLED_TONE_HZ, &[0.0]), tone.data[i]);
        }
    }
}

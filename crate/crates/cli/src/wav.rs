//! 16-bit PCM stereo WAV output.

use std::io::{Seek, Write};

use fmol_core::StereoBuffer;

/// Full-scale conversion with clamping; non-finite samples become silence.
pub fn to_pcm16(sample: f32) -> i16 {
    if !sample.is_finite() {
        return 0;
    }
    (sample.clamp(-1.0, 1.0) * i16::MAX as f32).round() as i16
}

pub fn spec(sample_rate: u32) -> hound::WavSpec {
    hound::WavSpec {
        channels: 2,
        sample_rate,
        bits_per_sample: 16,
        sample_format: hound::SampleFormat::Int,
    }
}

/// Writes RIFF/WAVE with only `fmt ` and `data` chunks.
pub fn write_wav<W: Write + Seek>(out: W, audio: &StereoBuffer, sample_rate: u32) -> hound::Result<()> {
    let mut writer = hound::WavWriter::new(out, spec(sample_rate))?;
    {
        let mut samples = writer.get_i16_writer(audio.frames() as u32 * 2);
        for (&l, &r) in audio.left.iter().zip(&audio.right) {
            samples.write_sample(to_pcm16(l));
            samples.write_sample(to_pcm16(r));
        }
        samples.flush()?;
    }
    writer.finalize()
}

pub fn wav_bytes(audio: &StereoBuffer, sample_rate: u32) -> Vec<u8> {
    let mut cursor = std::io::Cursor::new(Vec::with_capacity(44 + audio.frames() * 4));
    write_wav(&mut cursor, audio, sample_rate).expect("writing to memory cannot fail");
    cursor.into_inner()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pcm_conversion() {
        assert_eq!(to_pcm16(0.0), 0);
        assert_eq!(to_pcm16(1.0), 32767);
        assert_eq!(to_pcm16(-1.0), -32767);
        assert_eq!(to_pcm16(3.0), 32767);
        assert_eq!(to_pcm16(f32::NAN), 0);
        assert_eq!(to_pcm16(0.5), 16384);
    }
}

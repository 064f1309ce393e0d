//! Offline rendering of a scorefile to WAV.

use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use fmol_core::score::{parse, render_score, ParseError};
use fmol_core::{catalog, StereoBuffer};

use crate::wav::write_wav;

#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub sample_rate: Option<u32>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderReport {
    pub frames: usize,
    pub sample_rate: u32,
    pub peak: f32,
}

impl RenderReport {
    pub fn duration_secs(&self) -> f64 {
        self.frames as f64 / self.sample_rate as f64
    }

    pub fn peak_dbfs(&self) -> f64 {
        20.0 * (self.peak as f64).log10()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RenderError {
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error("{0}")]
    Engine(#[from] fmol_core::Error),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: hound::Error },
}

impl RenderError {
    pub fn exit_code(&self) -> u8 {
        match self {
            RenderError::Parse { .. } | RenderError::Engine(_) => crate::exit::PARSE,
            RenderError::Read { .. } | RenderError::Write { .. } => crate::exit::IO,
        }
    }
}

fn peak(audio: &StereoBuffer) -> f32 {
    audio.left.iter().chain(&audio.right).fold(0.0f32, |m, s| m.max(s.abs()))
}

pub fn render_file(input: &Path, output: &Path, overrides: &Overrides) -> Result<RenderReport, RenderError> {
    let text = fs::read_to_string(input).map_err(|source| RenderError::Read {
        path: input.to_path_buf(),
        source,
    })?;
    let mut score = parse(&text, catalog()).map_err(|source| RenderError::Parse {
        path: input.to_path_buf(),
        source,
    })?;
    if let Some(sr) = overrides.sample_rate {
        score.sample_rate = sr;
        score.patch.sample_rate_hint = sr;
    }
    if let Some(seed) = overrides.seed {
        score.seed = seed;
    }
    let audio = render_score(&score)?;
    let write_err = |source| RenderError::Write {
        path: output.to_path_buf(),
        source,
    };
    let file = fs::File::create(output).map_err(|e| write_err(hound::Error::IoError(e)))?;
    write_wav(BufWriter::new(file), &audio, score.sample_rate).map_err(write_err)?;
    Ok(RenderReport {
        frames: audio.frames(),
        sample_rate: score.sample_rate,
        peak: peak(&audio),
    })
}

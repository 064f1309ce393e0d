use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown unit id {0}")]
    UnknownUnit(u32),

    #[error("{location}: unit {unit_id} ({name}) expects {expected} params, found {found}")]
    Schema {
        location: String,
        unit_id: u32,
        name: String,
        expected: usize,
        found: usize,
    },

    #[error("{location}: unit {unit_id} is a {found}, expected a {expected}")]
    UnitKind {
        location: String,
        unit_id: u32,
        expected: &'static str,
        found: &'static str,
    },

    #[error("a patch has exactly six tracks, found {0}")]
    TrackCount(usize),

    #[error("a track has exactly three processors, found {0}")]
    ProcessorCount(usize),

    #[error("a unit has exactly four LFOs, found {0}")]
    LfoCount(usize),

    #[error("unsupported sample rate {0} (expected 22050, 44100 or 48000)")]
    SampleRate(u32),

    #[error("invalid address: {0}")]
    Address(String),

    #[error("{what} = {value} is outside [0, 1]")]
    Range { what: String, value: f32 },

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

//! Library side of the `fmol` binary, shared with its tests.

pub mod catalog_cmd;
pub mod render;
pub mod session;
pub mod wav;

/// Process exit statuses.
pub mod exit {
    pub const OK: u8 = 0;
    pub const USAGE: u8 = 1;
    pub const PARSE: u8 = 2;
    pub const IO: u8 = 3;
    pub const PORT_BUSY: u8 = 4;
}

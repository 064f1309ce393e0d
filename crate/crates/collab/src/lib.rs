//! Collaborative piece database: validated, canonical scorefiles with
//! lineage, stored on disk and served over HTTP.

pub mod http;
pub mod store;

pub use http::{bind_and_serve, router, serve, ApiError, Health};
pub use store::{Page, PieceRecord, PieceSummary, Store, StoreError, Submission};

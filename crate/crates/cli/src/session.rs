//! Live session host: a real-time engine shared by every connected client.

mod host;
pub mod protocol;
mod server;

pub use host::{Command, Host, HostConfig, HostHandle, Reply, BATCHES_PER_SECOND, QUEUE_CAPACITY};
pub use server::{router, serve};

#![allow(dead_code)]

use std::net::SocketAddr;
use std::path::Path;
use std::sync::Arc;

use fmol_collab::Store;
use fmol_core::catalog;
use fmol_core::score::{serialize, Scorefile};

/// A minimal valid piece whose text differs per `n`.
pub fn minimal_piece(n: u64) -> String {
    let mut score = Scorefile::new(catalog(), 44100, n, 1000 + n % 5000);
    score.meta.title = format!("piece {n}");
    serialize(&score)
}

pub async fn spawn_server(dir: &Path) -> (SocketAddr, Arc<Store>) {
    let store = Arc::new(Store::open(dir).unwrap());
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    tokio::spawn(fmol_collab::serve(listener, store.clone()));
    (addr, store)
}

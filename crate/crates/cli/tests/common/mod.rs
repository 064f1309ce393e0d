#![allow(dead_code)]

use std::io::{BufRead, BufReader};
use std::process::{Child, Command, Stdio};
use std::time::Duration;

use futures_util::{SinkExt, StreamExt};
use serde_json::{json, Value};
use tokio::net::TcpStream;
use tokio_tungstenite::tungstenite::Message;
use tokio_tungstenite::{connect_async, MaybeTlsStream, WebSocketStream};

pub const BIN: &str = env!("CARGO_BIN_EXE_fmol");

/// `fmol serve` on an ephemeral port, killed on drop.
pub struct Server {
    child: Child,
    pub addr: String,
}

impl Server {
    pub fn start(extra: &[&str]) -> Self {
        let mut child = Command::new(BIN)
            .args(["serve", "--port", "0"])
            .args(extra)
            .stdout(Stdio::null())
            .stderr(Stdio::piped())
            .spawn()
            .expect("spawning fmol serve");
        let mut lines = BufReader::new(child.stderr.take().unwrap()).lines();
        let addr = loop {
            let line = lines.next().expect("serve exited before listening").unwrap();
            if let Some(rest) = line.strip_prefix("session listening on ws://") {
                break rest.trim_end_matches("/session").to_string();
            }
        };
        // Keep draining so the child never blocks on a full pipe.
        std::thread::spawn(move || lines.for_each(drop));
        Self { child, addr }
    }

    pub fn url(&self) -> String {
        format!("ws://{}/session", self.addr)
    }
}

impl Drop for Server {
    fn drop(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

pub struct Client {
    ws: WebSocketStream<MaybeTlsStream<TcpStream>>,
}

impl Client {
    pub async fn connect(url: &str) -> Self {
        let (ws, _) = connect_async(url).await.expect("websocket handshake");
        Self { ws }
    }

    pub async fn send(&mut self, kind: &str, seq: u64, payload: Value) {
        self.send_raw(&json!({"type": kind, "seq": seq, "payload": payload}).to_string())
            .await;
    }

    pub async fn send_raw(&mut self, text: &str) {
        self.ws.send(Message::text(text)).await.expect("send");
    }

    /// Next host message of any type.
    pub async fn next(&mut self) -> Value {
        let msg = tokio::time::timeout(Duration::from_secs(10), self.ws.next())
            .await
            .expect("no message within 10 s")
            .expect("connection closed")
            .expect("websocket error");
        serde_json::from_str(msg.to_text().unwrap()).expect("host sent JSON")
    }

    /// Next message that is not a `frames` batch.
    pub async fn reply(&mut self) -> Value {
        loop {
            let v = self.next().await;
            if v["type"] != "frames" {
                return v;
            }
        }
    }

    pub async fn frame(&mut self) -> Value {
        loop {
            let v = self.next().await;
            if v["type"] == "frames" {
                return v;
            }
        }
    }

    pub fn split(
        self,
    ) -> (
        futures_util::stream::SplitSink<WebSocketStream<MaybeTlsStream<TcpStream>>, Message>,
        futures_util::stream::SplitStream<WebSocketStream<MaybeTlsStream<TcpStream>>>,
    ) {
        self.ws.split()
    }
}

pub fn set_event(address: &str, value: f32) -> Value {
    json!({"address": address, "kind": "set", "value": value})
}

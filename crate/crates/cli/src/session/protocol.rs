//! Wire format: WebSocket text frames, each a JSON object
//! `{"type": ..., "seq": ..., "payload": ...}`. Replies echo the client's
//! `seq`; unsolicited host messages carry `"seq": null`.

use fmol_core::gesture::{LoopMode, Snapshot};
use fmol_core::{ControlEvent, EventKind, ParamAddress, ScopeFrame};
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const PROTOCOL_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Envelope {
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(default)]
    pub seq: Option<u64>,
    #[serde(default)]
    pub payload: Value,
}

#[derive(Serialize)]
struct Outgoing<'a, T> {
    #[serde(rename = "type")]
    kind: &'a str,
    seq: Option<u64>,
    payload: &'a T,
}

/// Serializes a host message. Goes straight from the typed payload so f32
/// values keep their shortest form.
pub fn encode<T: Serialize>(kind: &str, seq: Option<u64>, payload: &T) -> String {
    serde_json::to_string(&Outgoing { kind, seq, payload }).expect("payloads always serialize")
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct HelloPayload {
    #[serde(default)]
    pub client: Option<String>,
}

/// A control event applied at the next block boundary; no timestamp.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EventPayload {
    pub address: ParamAddress,
    pub kind: EventKind,
    #[serde(default)]
    pub value: f32,
}

impl EventPayload {
    pub fn at(&self, time_ms: u64) -> ControlEvent {
        ControlEvent {
            time_ms,
            address: self.address,
            kind: self.kind,
            value: if self.kind == EventKind::Trigger { 0.0 } else { self.value },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum SnapshotCmd {
    Take { label: String },
    Restore { label: String },
    /// Replies with a `state` message.
    State,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum LoopCmd {
    RecordStart {
        #[serde(default)]
        scope: Option<ParamAddress>,
    },
    RecordStop {
        #[serde(default = "cycle")]
        mode: LoopMode,
    },
    Arpeggio {
        target: ParamAddress,
        steps: Vec<f32>,
        step_ms: u64,
        #[serde(default)]
        retrigger: bool,
    },
    /// Stops one loop or arpeggio, or all of them without `id`.
    Clear {
        #[serde(default)]
        id: Option<u64>,
    },
}

fn cycle() -> LoopMode {
    LoopMode::Cycle
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "snake_case")]
pub enum TransportCmd {
    Play,
    Pause,
    /// Back to the starting patch at time zero; loops and arpeggios are dropped.
    Reset,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ClientMessage {
    Hello(HelloPayload),
    Event(EventPayload),
    Snapshot(SnapshotCmd),
    Loop(LoopCmd),
    Transport(TransportCmd),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrPayload {
    pub code: String,
    pub message: String,
}

/// A rejected client message: the reply to send and the seq it answers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    pub seq: Option<u64>,
    pub err: ErrPayload,
}

impl Rejection {
    pub fn new(seq: Option<u64>, code: &str, message: impl Into<String>) -> Self {
        Self {
            seq,
            err: ErrPayload {
                code: code.to_string(),
                message: message.into(),
            },
        }
    }

    pub fn to_json(&self) -> String {
        encode("err", self.seq, &self.err)
    }
}

fn payload<T: for<'de> Deserialize<'de>>(env: &Envelope) -> Result<T, Rejection> {
    let value = if env.payload.is_null() {
        Value::Object(Default::default())
    } else {
        env.payload.clone()
    };
    serde_json::from_value(value)
        .map_err(|e| Rejection::new(env.seq, "invalid_payload", format!("{} payload: {e}", env.kind)))
}

/// Decodes one client text frame.
pub fn decode(text: &str) -> Result<(Option<u64>, ClientMessage), Rejection> {
    let env: Envelope = serde_json::from_str(text)
        .map_err(|e| Rejection::new(None, "malformed", format!("not a message envelope: {e}")))?;
    let msg = match env.kind.as_str() {
        "hello" => ClientMessage::Hello(payload(&env)?),
        "event" => ClientMessage::Event(payload(&env)?),
        "snapshot" => ClientMessage::Snapshot(payload(&env)?),
        "loop" => ClientMessage::Loop(payload(&env)?),
        "transport" => ClientMessage::Transport(payload(&env)?),
        other => {
            return Err(Rejection::new(
                env.seq,
                "unknown_type",
                format!("unknown message type `{other}`"),
            ))
        }
    };
    Ok((env.seq, msg))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FramesPayload {
    pub frame_index: u64,
    pub tracks: Vec<ScopeFrame>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LoopInfo {
    pub id: u64,
    pub length_ms: u64,
    pub events: usize,
    pub mode: LoopMode,
    pub anchor_ms: u64,
    pub scope: Option<ParamAddress>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArpeggioInfo {
    pub id: u64,
    pub target: ParamAddress,
    pub steps: Vec<f32>,
    pub step_ms: u64,
    pub retrigger: bool,
    pub anchor_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatePayload {
    pub sample_rate: u32,
    pub frame: u64,
    pub time_ms: u64,
    pub playing: bool,
    pub recording: bool,
    /// Base values of every unit.
    pub image: Snapshot,
    pub snapshots: Vec<String>,
    pub loops: Vec<LoopInfo>,
    pub arpeggios: Vec<ArpeggioInfo>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionInfo {
    pub protocol: u32,
    pub sample_rate: u32,
    pub block_size: usize,
    pub scope_points: usize,
    pub batches_per_second: u32,
}

/// Sent once a command has been applied. `frame` and `time_ms` give the
/// session clock at that point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AckPayload {
    pub frame: u64,
    pub time_ms: u64,
    /// Loop or arpeggio id, for `record_stop` and `arpeggio`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub id: Option<u64>,
    /// Only in the answer to `hello`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub session: Option<SessionInfo>,
}

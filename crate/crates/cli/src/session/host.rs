//! The render clock: one thread owns the engine, renders in step with wall
//! time, applies queued commands between blocks and emits scope batches.

use std::collections::BTreeMap;
use std::io::Write;
use std::sync::mpsc::{self, Receiver, RecvTimeoutError, SyncSender, TrySendError};
use std::thread::JoinHandle;
use std::time::{Duration, Instant};

use axum::extract::ws::Utf8Bytes;
use fmol_core::gesture::{ArpeggioConfig, GestureLoop, Snapshot};
use fmol_core::{
    arpeggio_events, catalog, scope_decimate, snapshot_restore, snapshot_take, ControlEvent, Engine, EngineOptions,
    ParamAddress, Patch, ScopeFrame, SCOPE_POINTS,
};
use tokio::sync::{broadcast, mpsc as tmpsc};

use super::protocol::{
    encode, AckPayload, ArpeggioInfo, ClientMessage, EventPayload, FramesPayload, LoopCmd, LoopInfo, Rejection,
    SessionInfo, SnapshotCmd, StatePayload, TransportCmd, PROTOCOL_VERSION,
};

pub const QUEUE_CAPACITY: usize = 1024;
pub const BATCHES_PER_SECOND: u32 = 40;
const FRAME_BROADCAST_CAPACITY: usize = 64;
/// The clock gives up on frames it is this far behind (ms) instead of racing.
const MAX_LAG_MS: u64 = 250;

pub type Reply = tmpsc::UnboundedSender<Utf8Bytes>;

pub struct Command {
    pub seq: Option<u64>,
    pub msg: ClientMessage,
    pub reply: Reply,
}

#[derive(Debug, Clone)]
pub struct HostConfig {
    pub patch: Patch,
    pub sample_rate: u32,
    pub seed: u64,
    /// Also write the master bus to stdout as s16le stereo.
    pub audio_out: bool,
}

/// Cloneable entry point for connections.
#[derive(Clone)]
pub struct HostHandle {
    commands: SyncSender<Command>,
    frames: broadcast::Sender<Utf8Bytes>,
    info: SessionInfo,
}

impl HostHandle {
    /// Queues a command without blocking; a full queue comes back as an
    /// error reply for the caller to send.
    pub fn submit(&self, cmd: Command) -> Result<(), Rejection> {
        let seq = cmd.seq;
        match self.commands.try_send(cmd) {
            Ok(()) => Ok(()),
            Err(TrySendError::Full(_)) => Err(Rejection::new(
                seq,
                "queue_full",
                format!("command queue is full ({QUEUE_CAPACITY}); message dropped"),
            )),
            Err(TrySendError::Disconnected(_)) => Err(Rejection::new(seq, "host_stopped", "the session has ended")),
        }
    }

    pub fn subscribe(&self) -> broadcast::Receiver<Utf8Bytes> {
        self.frames.subscribe()
    }

    pub fn info(&self) -> &SessionInfo {
        &self.info
    }
}

pub struct Host {
    handle: HostHandle,
    thread: JoinHandle<()>,
}

impl Host {
    pub fn start(config: HostConfig) -> fmol_core::Result<Self> {
        let options = EngineOptions {
            seed: config.seed,
            ..EngineOptions::default()
        };
        let engine = Engine::new(config.patch.clone(), config.sample_rate, options)?;
        let (tx, rx) = mpsc::sync_channel(QUEUE_CAPACITY);
        let (frames, _) = broadcast::channel(FRAME_BROADCAST_CAPACITY);
        let info = SessionInfo {
            protocol: PROTOCOL_VERSION,
            sample_rate: config.sample_rate,
            block_size: engine.block_size(),
            scope_points: SCOPE_POINTS,
            batches_per_second: BATCHES_PER_SECOND,
        };
        let handle = HostHandle {
            commands: tx,
            frames: frames.clone(),
            info: info.clone(),
        };
        let audio = config.audio_out.then(AudioOut::start);
        let clock = Clock::new(engine, config.patch, options, frames, info, audio);
        let thread = std::thread::Builder::new()
            .name("render-clock".into())
            .spawn(move || clock.run(rx))
            .expect("spawning the render thread");
        Ok(Self { handle, thread })
    }

    pub fn handle(&self) -> HostHandle {
        self.handle.clone()
    }

    /// Stops the clock once every handle is dropped.
    pub fn join(self) {
        drop(self.handle);
        let _ = self.thread.join();
    }
}

struct ActiveLoop {
    id: u64,
    anchor_ms: u64,
    gesture: GestureLoop,
}

struct ActiveArpeggio {
    id: u64,
    anchor_ms: u64,
    config: ArpeggioConfig,
}

struct Recording {
    start_ms: u64,
    scope: Option<ParamAddress>,
    captured: Vec<ControlEvent>,
}

struct Clock {
    engine: Engine,
    initial: Patch,
    options: EngineOptions,
    frames: broadcast::Sender<Utf8Bytes>,
    info: SessionInfo,
    audio: Option<AudioOut>,

    playing: bool,
    /// Wall-clock origin of `origin_frame` while playing.
    origin: Instant,
    origin_frame: u64,
    /// Loop and arpeggio events before this time have been played.
    cursor_ms: u64,
    loops: Vec<ActiveLoop>,
    arpeggios: Vec<ActiveArpeggio>,
    next_id: u64,
    recording: Option<Recording>,
    snapshots: BTreeMap<String, Snapshot>,

    batch_index: u64,
    next_batch: Instant,
    scope: Vec<Vec<f32>>,
}

impl Clock {
    fn new(
        engine: Engine,
        initial: Patch,
        options: EngineOptions,
        frames: broadcast::Sender<Utf8Bytes>,
        info: SessionInfo,
        audio: Option<AudioOut>,
    ) -> Self {
        let now = Instant::now();
        let per_batch = info.sample_rate as usize / BATCHES_PER_SECOND as usize + 1;
        Self {
            engine,
            initial,
            options,
            frames,
            info,
            audio,
            playing: true,
            origin: now,
            origin_frame: 0,
            cursor_ms: 0,
            loops: Vec::new(),
            arpeggios: Vec::new(),
            next_id: 1,
            recording: None,
            snapshots: BTreeMap::new(),
            batch_index: 0,
            next_batch: now + batch_period(),
            scope: vec![Vec::with_capacity(per_batch); 6],
        }
    }

    fn run(mut self, rx: Receiver<Command>) {
        loop {
            let now = Instant::now();
            if now >= self.next_batch {
                self.emit_batch();
                self.next_batch += batch_period();
                if self.next_batch < now {
                    self.next_batch = now + batch_period();
                }
                continue;
            }
            if self.playing {
                let due = self.due_frame(now);
                if self.engine.frame() < due {
                    self.render_block();
                    // Stay responsive: take whatever arrived meanwhile.
                    while let Ok(cmd) = rx.try_recv() {
                        self.handle(cmd);
                    }
                    continue;
                }
            }
            let wake = if self.playing {
                self.next_batch.min(self.block_deadline())
            } else {
                self.next_batch
            };
            match rx.recv_timeout(wake.saturating_duration_since(now)) {
                Ok(cmd) => self.handle(cmd),
                Err(RecvTimeoutError::Timeout) => {}
                Err(RecvTimeoutError::Disconnected) => return,
            }
        }
    }

    fn sample_rate(&self) -> u64 {
        self.info.sample_rate as u64
    }

    fn due_frame(&mut self, now: Instant) -> u64 {
        let elapsed = now.duration_since(self.origin).as_nanos() as u64;
        let due = self.origin_frame + elapsed * self.sample_rate() / 1_000_000_000;
        let max_lag = MAX_LAG_MS * self.sample_rate() / 1000;
        if due > self.engine.frame() + max_lag {
            // Too slow to keep up: drop the backlog rather than spiral.
            self.rebase(now);
            return self.engine.frame();
        }
        due
    }

    fn block_deadline(&self) -> Instant {
        let next = self.engine.frame() + self.engine.block_size() as u64 - self.origin_frame;
        self.origin + Duration::from_nanos(next * 1_000_000_000 / self.sample_rate())
    }

    fn rebase(&mut self, now: Instant) {
        self.origin = now;
        self.origin_frame = self.engine.frame();
    }

    fn time_ms(&self) -> u64 {
        self.engine.frame() * 1000 / self.sample_rate()
    }

    fn render_block(&mut self) {
        let start = self.engine.frame();
        let end = start + self.engine.block_size() as u64;
        let sr = self.sample_rate();
        // Events whose frame floor(t·sr/1000) falls before `end`.
        let upper_ms = (end * 1000).div_ceil(sr);
        let from_ms = self.cursor_ms;
        let mut due: Vec<ControlEvent> = Vec::new();
        for l in &self.loops {
            due.extend(l.gesture.occurrences(l.anchor_ms, from_ms, upper_ms));
        }
        for a in &self.arpeggios {
            let lo = from_ms.max(a.anchor_ms) - a.anchor_ms;
            let hi = upper_ms.saturating_sub(a.anchor_ms);
            due.extend(arpeggio_events(&a.config, lo, hi).into_iter().map(|e| e.at(e.time_ms + a.anchor_ms)));
        }
        due.sort_by_key(|e| e.time_ms);
        for ev in &due {
            // Gesture playback targets the same patch it was recorded on;
            // a unit swapped since then can reject it, which is harmless.
            let _ = self.engine.apply_event(ev);
        }
        self.cursor_ms = upper_ms;

        let master = self.engine.render_block();
        if let Some(audio) = &self.audio {
            audio.push(master);
        }
        for (t, buf) in self.scope.iter_mut().enumerate() {
            let out = self.engine.track_output(t);
            buf.extend(out.left.iter().zip(&out.right).map(|(l, r)| 0.5 * (l + r)));
        }
    }

    fn emit_batch(&mut self) {
        let frame_index = self.batch_index;
        self.batch_index += 1;
        let tracks = self
            .scope
            .iter_mut()
            .enumerate()
            .map(|(track, buf)| {
                let points = scope_decimate(buf);
                buf.clear();
                ScopeFrame {
                    track,
                    frame_index,
                    points,
                }
            })
            .collect();
        let text = encode("frames", None, &FramesPayload { frame_index, tracks });
        // No subscribers is fine.
        let _ = self.frames.send(Utf8Bytes::from(text));
    }

    fn ack(&self, id: Option<u64>) -> AckPayload {
        AckPayload {
            frame: self.engine.frame(),
            time_ms: self.time_ms(),
            id,
            session: None,
        }
    }

    fn handle(&mut self, cmd: Command) {
        let seq = cmd.seq;
        let text = match self.apply(cmd.msg) {
            Ok(Answer::Ack(ack)) => encode("ack", seq, &ack),
            Ok(Answer::State(state)) => encode("state", seq, &state),
            Err((code, message)) => Rejection::new(seq, code, message).to_json(),
        };
        // The client may have gone; its replies go nowhere.
        let _ = cmd.reply.send(Utf8Bytes::from(text));
    }

    fn apply(&mut self, msg: ClientMessage) -> Result<Answer, (&'static str, String)> {
        match msg {
            ClientMessage::Hello(_) => Ok(Answer::Ack(AckPayload {
                session: Some(self.info.clone()),
                ..self.ack(None)
            })),
            ClientMessage::Event(ev) => self.event(ev).map(|()| Answer::Ack(self.ack(None))),
            ClientMessage::Snapshot(cmd) => self.snapshot(cmd),
            ClientMessage::Loop(cmd) => self.gesture(cmd).map(|id| Answer::Ack(self.ack(id))),
            ClientMessage::Transport(cmd) => {
                self.transport(cmd);
                Ok(Answer::Ack(self.ack(None)))
            }
        }
    }

    fn event(&mut self, payload: EventPayload) -> Result<(), (&'static str, String)> {
        let ev = payload.at(self.time_ms());
        self.engine
            .apply_event(&ev)
            .map_err(|e| ("invalid_event", e.to_string()))?;
        if let Some(rec) = &mut self.recording {
            if rec.scope.is_none_or(|s| s == ev.address) {
                rec.captured.push(ev);
            }
        }
        Ok(())
    }

    fn snapshot(&mut self, cmd: SnapshotCmd) -> Result<Answer, (&'static str, String)> {
        match cmd {
            SnapshotCmd::Take { label } => {
                let snap = snapshot_take(self.engine.patch(), label.clone());
                self.snapshots.insert(label, snap);
                Ok(Answer::Ack(self.ack(None)))
            }
            SnapshotCmd::Restore { label } => {
                let snap = self
                    .snapshots
                    .get(&label)
                    .ok_or_else(|| ("not_found", format!("no snapshot labelled `{label}`")))?;
                let events = snapshot_restore(snap, self.engine.patch(), catalog(), self.time_ms())
                    .map_err(|e| ("invalid_snapshot", e.to_string()))?;
                for ev in &events {
                    self.engine
                        .apply_event(ev)
                        .map_err(|e| ("invalid_snapshot", e.to_string()))?;
                }
                Ok(Answer::Ack(self.ack(None)))
            }
            SnapshotCmd::State => Ok(Answer::State(self.state())),
        }
    }

    fn state(&self) -> StatePayload {
        StatePayload {
            sample_rate: self.info.sample_rate,
            frame: self.engine.frame(),
            time_ms: self.time_ms(),
            playing: self.playing,
            recording: self.recording.is_some(),
            image: snapshot_take(self.engine.patch(), "current"),
            snapshots: self.snapshots.keys().cloned().collect(),
            loops: self
                .loops
                .iter()
                .map(|l| LoopInfo {
                    id: l.id,
                    length_ms: l.gesture.length_ms,
                    events: l.gesture.events.len(),
                    mode: l.gesture.mode,
                    anchor_ms: l.anchor_ms,
                    scope: l.gesture.scope,
                })
                .collect(),
            arpeggios: self
                .arpeggios
                .iter()
                .map(|a| ArpeggioInfo {
                    id: a.id,
                    target: a.config.target(),
                    steps: a.config.steps().to_vec(),
                    step_ms: a.config.step_ms(),
                    retrigger: a.config.retrigger(),
                    anchor_ms: a.anchor_ms,
                })
                .collect(),
        }
    }

    fn gesture(&mut self, cmd: LoopCmd) -> Result<Option<u64>, (&'static str, String)> {
        let now = self.time_ms();
        match cmd {
            LoopCmd::RecordStart { scope } => {
                if self.recording.is_some() {
                    return Err(("already_recording", "a loop is already being recorded".into()));
                }
                if let Some(s) = scope {
                    self.engine
                        .patch()
                        .resolve(&s, catalog())
                        .map_err(|e| ("invalid_payload", e.to_string()))?;
                }
                self.recording = Some(Recording {
                    start_ms: now,
                    scope,
                    captured: Vec::new(),
                });
                Ok(None)
            }
            LoopCmd::RecordStop { mode } => {
                let rec = self
                    .recording
                    .take()
                    .ok_or_else(|| ("not_recording", "no loop is being recorded".to_string()))?;
                // Events applied in the same block as the stop still belong to the loop.
                let last = rec.captured.last().map_or(0, |e| e.time_ms + 1);
                let stop = now.max(rec.start_ms + 1).max(last);
                let gesture = GestureLoop::record(rec.start_ms, stop, &rec.captured, rec.scope, mode)
                    .map_err(|e| ("invalid_loop", e.to_string()))?;
                let id = self.take_id();
                self.loops.push(ActiveLoop {
                    id,
                    anchor_ms: stop.max(self.cursor_ms),
                    gesture,
                });
                Ok(Some(id))
            }
            LoopCmd::Arpeggio {
                target,
                steps,
                step_ms,
                retrigger,
            } => {
                let config = ArpeggioConfig::new(target, steps, step_ms, retrigger)
                    .map_err(|e| ("invalid_payload", e.to_string()))?;
                self.engine
                    .patch()
                    .resolve(&target, catalog())
                    .map_err(|e| ("invalid_payload", e.to_string()))?;
                let id = self.take_id();
                self.arpeggios.push(ActiveArpeggio {
                    id,
                    anchor_ms: now.max(self.cursor_ms),
                    config,
                });
                Ok(Some(id))
            }
            LoopCmd::Clear { id: None } => {
                self.loops.clear();
                self.arpeggios.clear();
                Ok(None)
            }
            LoopCmd::Clear { id: Some(id) } => {
                let before = self.loops.len() + self.arpeggios.len();
                self.loops.retain(|l| l.id != id);
                self.arpeggios.retain(|a| a.id != id);
                if self.loops.len() + self.arpeggios.len() == before {
                    return Err(("not_found", format!("no loop or arpeggio with id {id}")));
                }
                Ok(None)
            }
        }
    }

    fn take_id(&mut self) -> u64 {
        let id = self.next_id;
        self.next_id += 1;
        id
    }

    fn transport(&mut self, cmd: TransportCmd) {
        match cmd {
            TransportCmd::Play => {
                if !self.playing {
                    self.playing = true;
                    self.rebase(Instant::now());
                }
            }
            TransportCmd::Pause => self.playing = false,
            TransportCmd::Reset => {
                self.engine = Engine::new(self.initial.clone(), self.info.sample_rate, self.options)
                    .expect("the starting patch was accepted once");
                self.loops.clear();
                self.arpeggios.clear();
                self.recording = None;
                self.cursor_ms = 0;
                for buf in &mut self.scope {
                    buf.clear();
                }
                self.rebase(Instant::now());
            }
        }
    }
}

enum Answer {
    Ack(AckPayload),
    State(StatePayload),
}

fn batch_period() -> Duration {
    Duration::from_secs(1) / BATCHES_PER_SECOND
}

/// Raw s16le stereo on stdout, written off the render thread. Blocks are
/// dropped when the writer falls behind.
struct AudioOut {
    tx: SyncSender<Vec<i16>>,
}

impl AudioOut {
    fn start() -> Self {
        let (tx, rx) = mpsc::sync_channel::<Vec<i16>>(64);
        std::thread::Builder::new()
            .name("audio-out".into())
            .spawn(move || {
                let mut out = std::io::stdout().lock();
                let mut bytes = Vec::new();
                for block in rx {
                    bytes.clear();
                    bytes.extend(block.iter().flat_map(|s| s.to_le_bytes()));
                    if out.write_all(&bytes).and_then(|()| out.flush()).is_err() {
                        return;
                    }
                }
            })
            .expect("spawning the audio writer");
        Self { tx }
    }

    fn push(&self, master: &fmol_core::StereoBuffer) {
        let block = master
            .left
            .iter()
            .zip(&master.right)
            .flat_map(|(&l, &r)| [crate::wav::to_pcm16(l), crate::wav::to_pcm16(r)])
            .collect();
        let _ = self.tx.try_send(block);
    }
}

/// Runs `cmds` through a clock that is never started, for unit tests.
#[cfg(test)]
fn scripted(cmds: Vec<ClientMessage>) -> Vec<String> {
    let patch = Patch::default_patch(catalog());
    let options = EngineOptions::default();
    let engine = Engine::new(patch.clone(), 44100, options).unwrap();
    let (frames, _) = broadcast::channel(4);
    let info = SessionInfo {
        protocol: PROTOCOL_VERSION,
        sample_rate: 44100,
        block_size: 64,
        scope_points: SCOPE_POINTS,
        batches_per_second: BATCHES_PER_SECOND,
    };
    let mut clock = Clock::new(engine, patch, options, frames, info, None);
    let (tx, mut rx) = tmpsc::unbounded_channel();
    let mut out = Vec::new();
    for (i, msg) in cmds.into_iter().enumerate() {
        clock.handle(Command {
            seq: Some(i as u64),
            msg,
            reply: tx.clone(),
        });
        // Advance 100 ms between commands.
        for _ in 0..69 {
            clock.render_block();
        }
        while let Ok(t) = rx.try_recv() {
            out.push(t.to_string());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use fmol_core::{EventKind, LoopMode, Slot};
    use serde_json::Value;

    use super::*;

    fn set(v: f32) -> ClientMessage {
        ClientMessage::Event(EventPayload {
            address: ParamAddress::param(2, Slot::Gen, 0),
            kind: EventKind::Set,
            value: v,
        })
    }

    fn parsed(replies: &[String]) -> Vec<Value> {
        replies.iter().map(|r| serde_json::from_str(r).unwrap()).collect()
    }

    #[test]
    fn every_command_is_answered_in_order() {
        let replies = parsed(&scripted(vec![
            set(0.25),
            ClientMessage::Snapshot(SnapshotCmd::Restore { label: "none".into() }),
            ClientMessage::Snapshot(SnapshotCmd::State),
        ]));
        let kinds: Vec<_> = replies.iter().map(|r| r["type"].as_str().unwrap()).collect();
        assert_eq!(kinds, ["ack", "err", "state"]);
        for (i, r) in replies.iter().enumerate() {
            assert_eq!(r["seq"], i);
        }
        assert_eq!(replies[1]["payload"]["code"], "not_found");
        let image = &replies[2]["payload"]["image"]["units"][2 * 4];
        assert_eq!(image["params"][0], 0.25);
    }

    #[test]
    fn recorded_loop_replays_after_stop() {
        let replies = parsed(&scripted(vec![
            ClientMessage::Loop(LoopCmd::RecordStart { scope: None }),
            set(0.1),
            set(0.9),
            ClientMessage::Loop(LoopCmd::RecordStop { mode: LoopMode::Cycle }),
            set(0.5),
            ClientMessage::Snapshot(SnapshotCmd::State),
        ]));
        assert!(replies[..5].iter().all(|r| r["type"] == "ack"), "{replies:?}");
        assert_eq!(replies[3]["payload"]["id"], 1);
        let state = &replies[5]["payload"];
        assert_eq!(state["loops"][0]["events"], 2);
        assert_eq!(state["loops"][0]["length_ms"], 300);
        // Anchored at the first unplayed ms after the stop (301), so the replayed
        // 0.1 at 401 ms overrides the manual set at 400; 0.9 at 501 is still ahead.
        assert_eq!(state["loops"][0]["anchor_ms"], 301);
        let v = state["image"]["units"][2 * 4]["params"][0].as_f64().unwrap();
        assert!((v - 0.1).abs() < 1e-6, "{v}");
    }

    #[test]
    fn snapshot_round_trip_and_reset() {
        let replies = parsed(&scripted(vec![
            set(0.3),
            ClientMessage::Snapshot(SnapshotCmd::Take { label: "a".into() }),
            set(0.7),
            ClientMessage::Snapshot(SnapshotCmd::Restore { label: "a".into() }),
            ClientMessage::Snapshot(SnapshotCmd::State),
            ClientMessage::Transport(TransportCmd::Reset),
            ClientMessage::Snapshot(SnapshotCmd::State),
        ]));
        let v = &replies[4]["payload"]["image"]["units"][8]["params"][0];
        assert!((v.as_f64().unwrap() - 0.3).abs() < 1e-6);
        let after = &replies[6]["payload"];
        assert_eq!(after["snapshots"][0], "a");
        let default = Patch::default_patch(catalog()).unit(2, Slot::Gen).params[0];
        assert!((after["image"]["units"][8]["params"][0].as_f64().unwrap() - default as f64).abs() < 1e-6);
    }

    #[test]
    fn arpeggio_steps_through_values() {
        let replies = parsed(&scripted(vec![
            ClientMessage::Loop(LoopCmd::Arpeggio {
                target: ParamAddress::param(2, Slot::Gen, 0),
                steps: vec![0.2, 0.4, 0.6],
                step_ms: 40,
                retrigger: true,
            }),
            ClientMessage::Snapshot(SnapshotCmd::State),
        ]));
        assert_eq!(replies[0]["payload"]["id"], 1);
        // Anchored at 0; by ~100 ms steps 0, 1, 2 have played.
        let v = replies[1]["payload"]["image"]["units"][8]["params"][0].as_f64().unwrap();
        assert!((v - 0.6).abs() < 1e-6, "{v}");
    }

    #[test]
    fn full_queue_is_reported_not_blocked_on() {
        let (commands, _rx) = mpsc::sync_channel(1);
        let (frames, _) = broadcast::channel(1);
        let handle = HostHandle {
            commands,
            frames,
            info: SessionInfo {
                protocol: PROTOCOL_VERSION,
                sample_rate: 44100,
                block_size: 64,
                scope_points: SCOPE_POINTS,
                batches_per_second: BATCHES_PER_SECOND,
            },
        };
        let (tx, _) = tmpsc::unbounded_channel();
        let cmd = |seq| Command {
            seq: Some(seq),
            msg: set(0.5),
            reply: tx.clone(),
        };
        assert!(handle.submit(cmd(1)).is_ok());
        let r = handle.submit(cmd(2)).unwrap_err();
        assert_eq!((r.seq, r.err.code.as_str()), (Some(2), "queue_full"));
        drop(_rx);
        assert_eq!(handle.submit(cmd(3)).unwrap_err().err.code, "host_stopped");
    }

    #[test]
    fn bad_commands_get_reason_codes() {
        let replies = parsed(&scripted(vec![
            ClientMessage::Event(EventPayload {
                address: ParamAddress::param(0, Slot::P0, 0),
                kind: EventKind::Trigger,
                value: 0.0,
            }),
            ClientMessage::Loop(LoopCmd::RecordStop { mode: LoopMode::Once }),
            ClientMessage::Loop(LoopCmd::Clear { id: Some(9) }),
            set(1.5),
        ]));
        let codes: Vec<_> = replies.iter().map(|r| r["payload"]["code"].as_str().unwrap()).collect();
        assert_eq!(codes, ["invalid_event", "not_recording", "not_found", "invalid_event"]);
    }
}

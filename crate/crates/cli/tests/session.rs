mod common;

use std::collections::HashMap;
use std::process::Command;
use std::time::{Duration, Instant};

use common::{set_event, Client, Server, BIN};
use futures_util::{SinkExt, StreamExt};
use serde_json::{json, Value};
use tokio_tungstenite::tungstenite::Message;

#[tokio::test]
async fn hello_reports_session_parameters() {
    let server = Server::start(&[]);
    let mut c = Client::connect(&server.url()).await;
    c.send("hello", 1, json!({"client": "test"})).await;
    let r = c.reply().await;
    assert_eq!((r["type"].as_str(), r["seq"].as_u64()), (Some("ack"), Some(1)));
    let s = &r["payload"]["session"];
    assert_eq!(s["sample_rate"], 44100);
    assert_eq!(s["scope_points"], 256);
    assert!(s["batches_per_second"].as_u64().unwrap() >= 30);
}

#[tokio::test]
async fn state_reflects_a_set_event() {
    let server = Server::start(&[]);
    let mut c = Client::connect(&server.url()).await;
    c.send("event", 1, set_event("t3.g.param1", 0.42)).await;
    c.send("snapshot", 2, json!({"action": "state"})).await;
    let ack = c.reply().await;
    assert_eq!((ack["type"].as_str(), ack["seq"].as_u64()), (Some("ack"), Some(1)));
    let state = c.reply().await;
    assert_eq!((state["type"].as_str(), state["seq"].as_u64()), (Some("state"), Some(2)));
    assert_eq!(state["payload"]["image"]["units"][3 * 4]["params"][1], 0.42);
}

#[tokio::test]
async fn scope_frames_are_well_formed() {
    let server = Server::start(&[]);
    let mut c = Client::connect(&server.url()).await;
    c.send("event", 1, json!({"address": "t0.g.param0", "kind": "trigger"})).await;
    let mut loud = false;
    for _ in 0..10 {
        let f = c.frame().await;
        assert!(f["seq"].is_null());
        let tracks = f["payload"]["tracks"].as_array().unwrap();
        assert_eq!(tracks.len(), 6);
        for (t, tr) in tracks.iter().enumerate() {
            assert_eq!(tr["track"], t);
            assert_eq!(tr["frame_index"], f["payload"]["frame_index"]);
            let points = tr["points"].as_array().unwrap();
            assert_eq!(points.len(), 256);
            for p in points {
                let (lo, hi) = (p[0].as_f64().unwrap(), p[1].as_f64().unwrap());
                assert!((-1.0..=1.0).contains(&lo) && lo <= hi && hi <= 1.0);
                loud |= t == 0 && hi > 0.1;
            }
        }
    }
    assert!(loud, "the triggered sine never showed on track 0");
}

#[tokio::test]
async fn two_clients_see_the_same_frames() {
    let server = Server::start(&[]);
    let mut a = Client::connect(&server.url()).await;
    let mut b = Client::connect(&server.url()).await;
    async fn collect(c: &mut Client, n: usize) -> Vec<(u64, Value)> {
        let mut out = Vec::new();
        for _ in 0..n {
            let f = c.frame().await;
            out.push((f["payload"]["frame_index"].as_u64().unwrap(), f["payload"]["tracks"].clone()));
        }
        out
    }
    let (fa, fb) = tokio::join!(collect(&mut a, 40), collect(&mut b, 40));
    for f in [&fa, &fb] {
        assert!(f.windows(2).all(|w| w[1].0 == w[0].0 + 1), "gap in frame_index");
    }
    let lo = fa[0].0.max(fb[0].0);
    let hi = fa.last().unwrap().0.min(fb.last().unwrap().0);
    assert!(hi >= lo + 30, "clients overlapped on too few batches");
    let pick = |f: &[(u64, Value)]| f.iter().filter(|(i, _)| (lo..=hi).contains(i)).cloned().collect::<Vec<_>>();
    assert_eq!(pick(&fa), pick(&fb));
}

#[tokio::test]
async fn malformed_messages_get_errors_and_the_connection_stays() {
    let server = Server::start(&[]);
    let mut c = Client::connect(&server.url()).await;
    c.send_raw("this is not json").await;
    let r = c.reply().await;
    assert_eq!((r["type"].as_str(), r["payload"]["code"].as_str()), (Some("err"), Some("malformed")));
    assert!(r["seq"].is_null());

    c.send("juggle", 2, json!({})).await;
    let r = c.reply().await;
    assert_eq!((r["seq"].as_u64(), r["payload"]["code"].as_str()), (Some(2), Some("unknown_type")));

    c.send("event", 3, set_event("t7.g.param0", 0.5)).await;
    assert_eq!(c.reply().await["payload"]["code"], "invalid_payload");

    c.send("event", 4, set_event("t0.g.param0", 1.5)).await;
    let r = c.reply().await;
    assert_eq!((r["seq"].as_u64(), r["payload"]["code"].as_str()), (Some(4), Some("invalid_event")));

    c.send("hello", 5, json!({})).await;
    let r = c.reply().await;
    assert_eq!((r["type"].as_str(), r["seq"].as_u64()), (Some("ack"), Some(5)));
}

#[tokio::test]
async fn gestures_over_the_wire() {
    let server = Server::start(&[]);
    let mut c = Client::connect(&server.url()).await;
    c.send("loop", 1, json!({"action": "record_start", "scope": "t1.g.param0"})).await;
    c.send("event", 2, set_event("t1.g.param0", 0.3)).await;
    c.send("event", 3, set_event("t2.g.param0", 0.3)).await;
    tokio::time::sleep(Duration::from_millis(200)).await;
    c.send("loop", 4, json!({"action": "record_stop", "mode": "cycle"})).await;
    c.send(
        "loop",
        5,
        json!({"action": "arpeggio", "target": "t0.g.param0", "steps": [0.1, 0.2], "step_ms": 50, "retrigger": true}),
    )
    .await;
    c.send("snapshot", 6, json!({"action": "take", "label": "x"})).await;
    c.send("snapshot", 7, json!({"action": "state"})).await;
    let replies: Vec<Value> = [c.reply().await, c.reply().await, c.reply().await, c.reply().await]
        .into_iter()
        .chain([c.reply().await, c.reply().await, c.reply().await])
        .collect();
    let seqs: Vec<u64> = replies.iter().map(|r| r["seq"].as_u64().unwrap()).collect();
    assert_eq!(seqs, (1..=7).collect::<Vec<_>>());
    assert_eq!(replies[3]["payload"]["id"], 1);
    assert_eq!(replies[4]["payload"]["id"], 2);
    let state = &replies[6]["payload"];
    assert_eq!(state["loops"][0]["events"], 1, "scope keeps only t1.g.param0");
    assert_eq!(state["loops"][0]["scope"], "t1.g.param0");
    assert_eq!(state["arpeggios"][0]["step_ms"], 50);
    assert_eq!(state["snapshots"][0], "x");

    c.send("loop", 8, json!({"action": "clear"})).await;
    c.send("transport", 9, json!({"action": "pause"})).await;
    c.send("snapshot", 10, json!({"action": "state"})).await;
    c.reply().await;
    c.reply().await;
    let state = c.reply().await;
    assert_eq!(state["payload"]["loops"], json!([]));
    assert_eq!(state["payload"]["playing"], false);
    let frame = state["payload"]["frame"].as_u64().unwrap();
    tokio::time::sleep(Duration::from_millis(100)).await;
    c.send("snapshot", 11, json!({"action": "state"})).await;
    assert_eq!(c.reply().await["payload"]["frame"].as_u64().unwrap(), frame, "paused clock moved");
}

/// 10,000 events inside one second: every one is answered, p99 reply
/// latency stays under 100 ms, and acks arrive in send order.
#[tokio::test(flavor = "multi_thread", worker_threads = 2)]
async fn flood_of_events_stays_responsive() {
    const N: u64 = 10_000;
    let server = Server::start(&[]);
    let (mut sink, mut stream) = Client::connect(&server.url()).await.split();

    let sender = tokio::spawn(async move {
        let mut sent = HashMap::with_capacity(N as usize);
        let start = Instant::now();
        for seq in 1..=N {
            let msg = json!({"type": "event", "seq": seq, "payload": set_event("t2.g.param1", seq as f32 / N as f32)});
            sent.insert(seq, Instant::now());
            sink.send(Message::text(msg.to_string())).await.unwrap();
            // Spread over ~1 s in bursts of 100.
            if seq % 100 == 0 {
                let target = start + Duration::from_millis(seq / 10);
                tokio::time::sleep_until(target.into()).await;
            }
        }
        (sent, sink)
    });

    let mut replies: Vec<(u64, String, Instant)> = Vec::with_capacity(N as usize);
    while (replies.len() as u64) < N {
        let msg = tokio::time::timeout(Duration::from_secs(10), stream.next())
            .await
            .expect("host went quiet")
            .unwrap()
            .unwrap();
        let at = Instant::now();
        let v: Value = serde_json::from_str(msg.to_text().unwrap()).unwrap();
        if v["type"] == "frames" {
            continue;
        }
        let kind = if v["type"] == "ack" {
            "ack".to_string()
        } else {
            v["payload"]["code"].as_str().unwrap().to_string()
        };
        replies.push((v["seq"].as_u64().unwrap(), kind, at));
    }
    let (sent, mut sink) = sender.await.unwrap();

    let mut latencies: Vec<Duration> = replies.iter().map(|(s, _, at)| *at - sent[s]).collect();
    latencies.sort();
    let p99 = latencies[latencies.len() * 99 / 100];
    assert!(p99 < Duration::from_millis(100), "p99 reply latency {p99:?}");

    let mut answered: Vec<u64> = replies.iter().map(|r| r.0).collect();
    answered.sort();
    assert_eq!(answered, (1..=N).collect::<Vec<_>>(), "every event answered exactly once");
    for (_, kind, _) in &replies {
        assert!(kind == "ack" || kind == "queue_full", "unexpected reply {kind}");
    }
    let acked: Vec<u64> = replies.iter().filter(|r| r.1 == "ack").map(|r| r.0).collect();
    assert!(acked.windows(2).all(|w| w[0] < w[1]), "acks out of order");

    // Applied in order: the image holds the last acknowledged value.
    let last = *acked.last().unwrap();
    sink.send(Message::text(json!({"type": "snapshot", "seq": N + 1, "payload": {"action": "state"}}).to_string()))
        .await
        .unwrap();
    let state = loop {
        let v: Value = serde_json::from_str(stream.next().await.unwrap().unwrap().to_text().unwrap()).unwrap();
        if v["type"] == "state" {
            break v;
        }
    };
    let got = state["payload"]["image"]["units"][2 * 4]["params"][1].as_f64().unwrap();
    assert!((got - last as f64 / N as f64).abs() < 1e-6, "image {got}, last ack {last}");
}

#[test]
fn busy_port_exits_4() {
    let taken = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
    let port = taken.local_addr().unwrap().port().to_string();
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().to_str().unwrap();
    for args in [vec!["serve", "--port", &port], vec!["collab", "--port", &port, "--data", data]] {
        let out = Command::new(BIN).args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(4), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn serve_rejects_a_bad_patch_file() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.fmol");
    std::fs::write(&bad, "FMOLSCORE 1\nnonsense\n").unwrap();
    let out = Command::new(BIN)
        .args(["serve", "--port", "0", "--patch", bad.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[tokio::test]
async fn serve_starts_from_a_score_patch() {
    let demo = concat!(env!("CARGO_MANIFEST_DIR"), "/../../scores/demo.fmol");
    let server = Server::start(&["--patch", demo]);
    let mut c = Client::connect(&server.url()).await;
    c.send("snapshot", 1, json!({"action": "state"})).await;
    let state = c.reply().await;
    assert_eq!(state["payload"]["image"]["units"][0]["unit_id"], 42);
    assert_eq!(state["payload"]["sample_rate"], 44100);
}

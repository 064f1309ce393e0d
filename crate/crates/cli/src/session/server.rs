//! WebSocket front end: `/session` for performers, `/health` for probes.

use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::State;
use axum::response::IntoResponse;
use axum::routing::get;
use axum::{Json, Router};
use futures_util::{SinkExt, StreamExt};
use tokio::net::TcpListener;
use tokio::sync::{broadcast, mpsc};

use super::host::{Command, HostHandle};
use super::protocol::{decode, Rejection};

pub fn router(host: HostHandle) -> Router {
    Router::new()
        .route("/session", get(upgrade))
        .route("/health", get(health))
        .with_state(host)
}

pub async fn serve(listener: TcpListener, host: HostHandle) -> std::io::Result<()> {
    axum::serve(listener, router(host)).await
}

async fn health(State(host): State<HostHandle>) -> impl IntoResponse {
    Json(host.info().clone())
}

async fn upgrade(ws: WebSocketUpgrade, State(host): State<HostHandle>) -> impl IntoResponse {
    ws.on_upgrade(move |socket| connection(socket, host))
}

async fn connection(socket: WebSocket, host: HostHandle) {
    tracing::debug!("client connected");
    let (mut sink, mut stream) = socket.split();
    let (reply_tx, mut reply_rx) = mpsc::unbounded_channel();
    let mut frames = host.subscribe();

    let writer = tokio::spawn(async move {
        loop {
            let text = tokio::select! {
                biased;
                reply = reply_rx.recv() => match reply {
                    Some(text) => text,
                    None => break,
                },
                frame = frames.recv() => match frame {
                    Ok(text) => text,
                    // A slow reader skips batches; the next one is current.
                    Err(broadcast::error::RecvError::Lagged(_)) => continue,
                    Err(broadcast::error::RecvError::Closed) => break,
                },
            };
            if sink.send(Message::Text(text)).await.is_err() {
                break;
            }
        }
    });

    while let Some(Ok(msg)) = stream.next().await {
        let rejection = match msg {
            Message::Text(text) => match decode(&text) {
                Ok((seq, msg)) => host
                    .submit(Command {
                        seq,
                        msg,
                        reply: reply_tx.clone(),
                    })
                    .err(),
                Err(rejection) => Some(rejection),
            },
            Message::Binary(_) => Some(Rejection::new(None, "malformed", "binary frames are not part of the protocol")),
            Message::Close(_) => break,
            Message::Ping(_) | Message::Pong(_) => None,
        };
        if let Some(r) = rejection {
            let _ = reply_tx.send(r.to_json().into());
        }
    }
    writer.abort();
    tracing::debug!("client disconnected");
}

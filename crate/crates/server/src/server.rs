use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{mpsc, Arc};
use std::time::{Duration, Instant};

use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::State;
use axum::response::{Html, IntoResponse};
use axum::routing::get;
use axum::Router;
use futures_util::{SinkExt, StreamExt};
use sharenav_core::bridge::{ControlInput, Hub, LogSink, Payload, SessionSink, MAP};
use sharenav_core::engine::{Engine, ServerConfig};
use sharenav_core::sim::load_scenario_file;
use tokio::sync::mpsc as tmpsc;
use tower_http::services::ServeDir;

use crate::Failure;

const STUB_INDEX: &str = "<!doctype html><title>sharenav</title>\
<p>Bridge at <code>/ws</code>. Start with <code>--static-dir</code> to serve the operator console.</p>";

struct Outbox(tmpsc::UnboundedSender<String>);

impl SessionSink for Outbox {
    fn deliver(&self, text: &str) -> bool {
        self.0.send(text.to_string()).is_ok()
    }
}

/// Fixed-rate simulation loop; the only writer of engine state.
fn engine_loop(mut engine: Engine, hub: Arc<Hub>, inputs: mpsc::Receiver<ControlInput>, stop: Arc<AtomicBool>) {
    let period = Duration::from_secs_f64(engine.settings().dt);
    let mut next = Instant::now();
    while !stop.load(Ordering::Relaxed) {
        let commands: Vec<_> = inputs.try_iter().map(|c| c.command).collect();
        let report = engine.tick(commands);
        for (topic, payload) in report.publications {
            hub.publish(topic, payload);
        }
        next += period;
        let now = Instant::now();
        if next > now {
            std::thread::sleep(next - now);
        } else {
            // fell behind; do not try to catch up in a burst
            next = now;
        }
    }
}

async fn ws_handler(ws: WebSocketUpgrade, State(hub): State<Arc<Hub>>) -> impl IntoResponse {
    ws.on_upgrade(move |socket| session(socket, hub))
}

async fn session(socket: WebSocket, hub: Arc<Hub>) {
    let (tx, mut rx) = tmpsc::unbounded_channel::<String>();
    let id = hub.connect(Arc::new(Outbox(tx)));
    let (mut sink, mut stream) = socket.split();
    let writer = tokio::spawn(async move {
        while let Some(text) = rx.recv().await {
            if sink.send(Message::Text(text.into())).await.is_err() {
                break;
            }
        }
    });
    while let Some(Ok(msg)) = stream.next().await {
        match msg {
            Message::Text(text) => {
                // errors were already reported to the client
                let _ = hub.handle_text(id, text.as_str());
            }
            Message::Binary(bytes) => {
                let _ = hub.handle_text(id, &String::from_utf8_lossy(&bytes));
            }
            Message::Close(_) => break,
            _ => {}
        }
    }
    hub.disconnect(id);
    writer.abort();
}

pub fn run(config: &ServerConfig, static_dir: Option<PathBuf>) -> Result<(), Failure> {
    config.validate().map_err(|e| Failure::Config(e.to_string()))?;
    let scenario = load_scenario_file(&config.scenario_path).map_err(|e| Failure::Config(e.to_string()))?;
    let engine = Engine::new(scenario, config.settings()).map_err(|e| Failure::Config(e.to_string()))?;

    let (tx, rx) = mpsc::channel();
    let mut hub = Hub::new(tx);
    if let Some(path) = &config.log_path {
        let sink = LogSink::create(path)
            .map_err(|e| Failure::Config(format!("cannot open log {}: {e}", path.display())))?;
        hub = hub.with_log(sink);
    }
    let hub = Arc::new(hub);
    hub.publish(MAP, Payload::Map(engine.map_message()));

    let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::Config(e.to_string()))?;
    let listener = runtime
        .block_on(tokio::net::TcpListener::bind(("0.0.0.0", config.port)))
        .map_err(|e| Failure::Bind(format!("cannot bind port {}: {e}", config.port)))?;
    eprintln!("sharenav: listening on port {}", config.port);

    let stop = Arc::new(AtomicBool::new(false));
    let sim = {
        let (hub, stop) = (hub.clone(), stop.clone());
        std::thread::spawn(move || engine_loop(engine, hub, rx, stop))
    };

    let router = Router::new().route("/ws", get(ws_handler)).with_state(hub.clone());
    let router = match static_dir {
        Some(dir) => router.fallback_service(ServeDir::new(dir)),
        None => router.fallback(|| async { Html(STUB_INDEX) }),
    };
    let served = runtime.block_on(async {
        axum::serve(listener, router)
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await
    });

    stop.store(true, Ordering::Relaxed);
    let _ = sim.join();
    if let Err(e) = hub.flush_log() {
        eprintln!("sharenav: {e}");
    }
    runtime.shutdown_timeout(Duration::from_secs(1));
    served.map_err(|e| Failure::Config(format!("server error: {e}")))
}

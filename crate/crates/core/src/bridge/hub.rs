use std::collections::BTreeMap;
use std::sync::mpsc::Sender;
use std::sync::{Arc, Mutex, MutexGuard};
use std::time::Instant;

use super::{
    decode_message, encode_message, status_notice, BridgeError, BridgeMessage, CmdVelMsg, Direction,
    GoalMsg, LogRecord, LogSink, Op, Payload, SessionId, SetSpeedMsg, SinkFailure, SubscriptionTable,
    CANCEL_GOAL, CMD_VEL, GOAL, MAP, SET_SPEED,
};

/// Topics whose last message is replayed to new subscribers.
pub const LATCHED_TOPICS: [&str; 1] = [MAP];

/// Outbound half of a client connection. `deliver` must not block.
pub trait SessionSink: Send + Sync {
    /// Returns false once the connection is gone.
    fn deliver(&self, text: &str) -> bool;
}

impl<F: Fn(&str) -> bool + Send + Sync> SessionSink for F {
    fn deliver(&self, text: &str) -> bool {
        self(text)
    }
}

/// Operator input forwarded to the engine.
#[derive(Debug, Clone, PartialEq)]
pub enum InboundCommand {
    CmdVel(CmdVelMsg),
    Goal(GoalMsg),
    CancelGoal,
    SetSpeed(SetSpeedMsg),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ControlInput {
    pub session: SessionId,
    pub command: InboundCommand,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct HubStats {
    pub inbound: u64,
    pub outbound: u64,
    pub rejected: u64,
}

struct HubState {
    table: SubscriptionTable,
    sessions: BTreeMap<SessionId, Arc<dyn SessionSink>>,
    latched: BTreeMap<String, String>,
    log: Option<LogSink>,
    next_id: u64,
    stats: HubStats,
}

/// Session multiplexer: routing, latching, logging and control forwarding.
///
/// All operations serialize on one lock, so every session observes messages
/// of a topic in publish order and the log order matches delivery order.
pub struct Hub {
    state: Mutex<HubState>,
    control: Sender<ControlInput>,
    clock: Box<dyn Fn() -> u64 + Send + Sync>,
}

impl Hub {
    pub fn new(control: Sender<ControlInput>) -> Self {
        let origin = Instant::now();
        Self::with_clock(control, Box::new(move || origin.elapsed().as_millis() as u64))
    }

    pub fn with_clock(control: Sender<ControlInput>, clock: Box<dyn Fn() -> u64 + Send + Sync>) -> Self {
        Self {
            state: Mutex::new(HubState {
                table: SubscriptionTable::new(),
                sessions: BTreeMap::new(),
                latched: BTreeMap::new(),
                log: None,
                next_id: 1,
                stats: HubStats::default(),
            }),
            control,
            clock,
        }
    }

    pub fn with_log(self, sink: LogSink) -> Self {
        self.lock().log = Some(sink);
        self
    }

    fn lock(&self) -> MutexGuard<'_, HubState> {
        self.state.lock().unwrap_or_else(|e| e.into_inner())
    }

    pub fn connect(&self, sink: Arc<dyn SessionSink>) -> SessionId {
        let mut st = self.lock();
        let id = SessionId(st.next_id);
        st.next_id += 1;
        st.sessions.insert(id, sink);
        id
    }

    pub fn disconnect(&self, session: SessionId) {
        let mut st = self.lock();
        st.sessions.remove(&session);
        st.table.remove_session(session);
    }

    pub fn session_count(&self) -> usize {
        self.lock().sessions.len()
    }

    fn log(&self, st: &mut HubState, dir: Direction, session: SessionId, text: &str) {
        if let Some(sink) = st.log.as_mut() {
            let record = LogRecord::from_text((self.clock)(), dir, session, text);
            // failures are kept on the sink and surfaced via log_status
            let _ = sink.log_record(&record);
        }
    }

    fn send(&self, st: &mut HubState, session: SessionId, text: &str) {
        let Some(sink) = st.sessions.get(&session).cloned() else {
            return;
        };
        if sink.deliver(text) {
            st.stats.outbound += 1;
            self.log(st, Direction::Out, session, text);
        } else {
            st.sessions.remove(&session);
            st.table.remove_session(session);
        }
    }

    fn fan_out(&self, st: &mut HubState, message: &BridgeMessage) -> usize {
        let text = encode_message(message);
        if LATCHED_TOPICS.contains(&message.topic.as_str()) {
            st.latched.insert(message.topic.clone(), text.clone());
        }
        let targets = super::route(&st.table, message);
        for &s in &targets {
            self.send(st, s, &text);
        }
        targets.len()
    }

    /// Processes one inbound frame. Errors are also reported to the session.
    pub fn handle_text(&self, session: SessionId, text: &str) -> Result<(), BridgeError> {
        let mut st = self.lock();
        st.stats.inbound += 1;
        self.log(&mut st, Direction::In, session, text);
        let message = match decode_message(text) {
            Ok(m) => m,
            Err(e) => {
                st.stats.rejected += 1;
                let id = serde_json::from_str::<serde_json::Value>(text)
                    .ok()
                    .and_then(|v| v.get("id").and_then(|i| i.as_str()).map(str::to_string));
                let notice = status_notice("error", &e.to_string(), id.as_deref());
                self.send(&mut st, session, &notice);
                return Err(e);
            }
        };
        match message.op {
            Op::Advertise => {}
            Op::Subscribe => {
                st.table.subscribe(session, &message.topic);
                if let Some(text) = st.latched.get(&message.topic).cloned() {
                    self.send(&mut st, session, &text);
                }
            }
            Op::Unsubscribe => {
                st.table.unsubscribe(session, &message.topic);
            }
            Op::Publish => {
                if let Some(command) = control_command(&message) {
                    // a stopped engine simply drops input
                    let _ = self.control.send(ControlInput { session, command });
                }
                self.fan_out(&mut st, &message);
            }
        }
        Ok(())
    }

    /// Publishes a server-side message; returns the number of deliveries.
    pub fn publish(&self, topic: &str, payload: Payload) -> usize {
        let mut st = self.lock();
        self.fan_out(&mut st, &BridgeMessage::publish(topic, payload))
    }

    pub fn stats(&self) -> HubStats {
        self.lock().stats
    }

    pub fn log_status(&self) -> Option<SinkFailure> {
        self.lock().log.as_ref().and_then(|l| l.failure().cloned())
    }

    pub fn flush_log(&self) -> Result<(), SinkFailure> {
        match self.lock().log.as_mut() {
            Some(l) => l.flush(),
            None => Ok(()),
        }
    }
}

fn control_command(message: &BridgeMessage) -> Option<InboundCommand> {
    match (message.topic.as_str(), message.msg.as_ref()?) {
        (CMD_VEL, Payload::CmdVel(m)) => Some(InboundCommand::CmdVel(m.clone())),
        (GOAL, Payload::Goal(m)) => Some(InboundCommand::Goal(*m)),
        (CANCEL_GOAL, Payload::CancelGoal(_)) => Some(InboundCommand::CancelGoal),
        (SET_SPEED, Payload::SetSpeed(m)) => Some(InboundCommand::SetSpeed(*m)),
        _ => None,
    }
}

//! Transport-agnostic message bridge: JSON envelopes, topic schemas,
//! subscription routing and the session log.

mod hub;
mod log;
mod protocol;
mod registry;

use thiserror::Error;

pub use hub::{ControlInput, Hub, HubStats, InboundCommand, SessionSink, LATCHED_TOPICS};
pub use log::{Direction, LogRecord, LogSink, SinkFailure, FLUSH_INTERVAL, FLUSH_RECORDS};
pub use protocol::{
    decode_message, decode_value, encode_message, status_notice, ArbitrationName, BridgeMessage,
    CancelGoalMsg, CmdVelMsg, GoalMsg, LimitsMsg, MapMsg, ModeStateMsg, Op, Payload, PlanMsg, PoseMsg,
    SetSpeedMsg, CANCEL_GOAL, CMD_VEL, GOAL, INBOUND_TOPICS, MAP, MODE_STATE, OUTBOUND_TOPICS, PLAN,
    ROBOT_POSE, SET_SPEED,
};
pub use registry::{route, SessionId, SubscriptionTable};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BridgeError {
    #[error("malformed envelope: {0}")]
    MalformedEnvelope(String),
    #[error("unknown op {0:?}")]
    UnknownOp(String),
    #[error("schema violation on {topic}: {reason}")]
    SchemaViolation { topic: String, reason: String },
}

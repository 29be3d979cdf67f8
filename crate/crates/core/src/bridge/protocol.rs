use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use super::BridgeError;
use crate::control::{SpeedDirection, SpeedTarget};

pub const CMD_VEL: &str = "/cmd_vel";
pub const GOAL: &str = "/goal";
pub const CANCEL_GOAL: &str = "/cancel_goal";
pub const SET_SPEED: &str = "/set_speed";
pub const MAP: &str = "/map";
pub const ROBOT_POSE: &str = "/robot_pose";
pub const PLAN: &str = "/plan";
pub const MODE_STATE: &str = "/mode_state";

/// Topics the operator console publishes.
pub const INBOUND_TOPICS: [&str; 4] = [CMD_VEL, GOAL, CANCEL_GOAL, SET_SPEED];
/// Topics the server publishes.
pub const OUTBOUND_TOPICS: [&str; 4] = [MAP, ROBOT_POSE, PLAN, MODE_STATE];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Op {
    Advertise,
    Subscribe,
    Unsubscribe,
    Publish,
}

impl Op {
    pub fn as_str(self) -> &'static str {
        match self {
            Op::Advertise => "advertise",
            Op::Subscribe => "subscribe",
            Op::Unsubscribe => "unsubscribe",
            Op::Publish => "publish",
        }
    }

    fn parse(s: &str) -> Option<Op> {
        Some(match s {
            "advertise" => Op::Advertise,
            "subscribe" => Op::Subscribe,
            "unsubscribe" => Op::Unsubscribe,
            "publish" => Op::Publish,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CmdVelMsg {
    pub v: f64,
    pub omega: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pull: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bearing: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoalMsg {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CancelGoalMsg {}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetSpeedMsg {
    pub target: SpeedTarget,
    pub direction: SpeedDirection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapMsg {
    pub width: usize,
    pub height: usize,
    pub resolution: f64,
    /// Row-major, row 0 at the top; 1 = occupied.
    pub data: Vec<u8>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoseMsg {
    pub x: f64,
    pub y: f64,
    pub theta: f64,
    pub stamp_ms: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanMsg {
    pub mode_id: usize,
    pub label: String,
    pub waypoints: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ArbitrationName {
    Idle,
    Teleop,
    Autonomous,
    Override,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitsMsg {
    pub v_max: f64,
    pub omega_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeStateMsg {
    pub arbitration: ArbitrationName,
    pub goal: Option<GoalMsg>,
    pub alpha_probs: [f64; 5],
    pub m_h: Option<usize>,
    pub m_r: Option<usize>,
    pub limits: LimitsMsg,
}

/// A publish payload, typed for the known topics.
#[derive(Debug, Clone, PartialEq)]
pub enum Payload {
    CmdVel(CmdVelMsg),
    Goal(GoalMsg),
    CancelGoal(CancelGoalMsg),
    SetSpeed(SetSpeedMsg),
    Map(MapMsg),
    Pose(PoseMsg),
    Plan(PlanMsg),
    ModeState(ModeStateMsg),
    /// Payload of a topic without a registered schema; passed through unchecked.
    Other(Value),
}

fn typed<T: for<'de> Deserialize<'de>>(topic: &str, value: Value) -> Result<T, BridgeError> {
    serde_json::from_value(value).map_err(|e| BridgeError::SchemaViolation {
        topic: topic.to_string(),
        reason: e.to_string(),
    })
}

impl Payload {
    /// Validates `value` against the schema registered for `topic`.
    pub fn from_topic(topic: &str, value: Value) -> Result<Payload, BridgeError> {
        let payload = match topic {
            CMD_VEL => Payload::CmdVel(typed(topic, value)?),
            GOAL => Payload::Goal(typed(topic, value)?),
            CANCEL_GOAL => Payload::CancelGoal(typed(topic, value)?),
            SET_SPEED => Payload::SetSpeed(typed(topic, value)?),
            MAP => {
                let map: MapMsg = typed(topic, value)?;
                if map.data.len() != map.width * map.height || map.data.iter().any(|&c| c > 1) {
                    return Err(BridgeError::SchemaViolation {
                        topic: topic.into(),
                        reason: "data must hold width*height entries of 0 or 1".into(),
                    });
                }
                Payload::Map(map)
            }
            ROBOT_POSE => Payload::Pose(typed(topic, value)?),
            PLAN => Payload::Plan(typed(topic, value)?),
            MODE_STATE => Payload::ModeState(typed(topic, value)?),
            _ => Payload::Other(value),
        };
        Ok(payload)
    }

    pub fn to_value(&self) -> Value {
        let v = match self {
            Payload::CmdVel(m) => serde_json::to_value(m),
            Payload::Goal(m) => serde_json::to_value(m),
            Payload::CancelGoal(m) => serde_json::to_value(m),
            Payload::SetSpeed(m) => serde_json::to_value(m),
            Payload::Map(m) => serde_json::to_value(m),
            Payload::Pose(m) => serde_json::to_value(m),
            Payload::Plan(m) => serde_json::to_value(m),
            Payload::ModeState(m) => serde_json::to_value(m),
            Payload::Other(v) => Ok(v.clone()),
        };
        v.expect("payload types serialize infallibly")
    }
}

/// The wire envelope.
#[derive(Debug, Clone, PartialEq)]
pub struct BridgeMessage {
    pub op: Op,
    pub topic: String,
    /// Present only for `publish`.
    pub msg: Option<Payload>,
    pub id: Option<String>,
}

impl BridgeMessage {
    pub fn subscribe(topic: impl Into<String>) -> Self {
        Self {
            op: Op::Subscribe,
            topic: topic.into(),
            msg: None,
            id: None,
        }
    }

    pub fn unsubscribe(topic: impl Into<String>) -> Self {
        Self {
            op: Op::Unsubscribe,
            ..Self::subscribe(topic)
        }
    }

    pub fn advertise(topic: impl Into<String>) -> Self {
        Self {
            op: Op::Advertise,
            ..Self::subscribe(topic)
        }
    }

    pub fn publish(topic: impl Into<String>, msg: Payload) -> Self {
        Self {
            op: Op::Publish,
            topic: topic.into(),
            msg: Some(msg),
            id: None,
        }
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = Some(id.into());
        self
    }

    pub fn to_value(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("op".into(), Value::from(self.op.as_str()));
        obj.insert("topic".into(), Value::from(self.topic.clone()));
        if let Some(msg) = &self.msg {
            obj.insert("msg".into(), msg.to_value());
        }
        if let Some(id) = &self.id {
            obj.insert("id".into(), Value::from(id.clone()));
        }
        Value::Object(obj)
    }
}

fn malformed(reason: impl Into<String>) -> BridgeError {
    BridgeError::MalformedEnvelope(reason.into())
}

/// Parses and validates one envelope. Unknown envelope keys are ignored.
pub fn decode_message(text: &str) -> Result<BridgeMessage, BridgeError> {
    let value: Value = serde_json::from_str(text).map_err(|e| malformed(e.to_string()))?;
    decode_value(value)
}

pub fn decode_value(value: Value) -> Result<BridgeMessage, BridgeError> {
    let Value::Object(mut obj) = value else {
        return Err(malformed("envelope must be a JSON object"));
    };
    let op = match obj.remove("op") {
        Some(Value::String(s)) => Op::parse(&s).ok_or(BridgeError::UnknownOp(s))?,
        Some(_) => return Err(malformed("`op` must be a string")),
        None => return Err(malformed("missing `op`")),
    };
    let topic = match obj.remove("topic") {
        Some(Value::String(s)) if s.len() > 1 && s.starts_with('/') => s,
        Some(Value::String(s)) => {
            return Err(malformed(format!("topic {s:?} must start with '/' and be non-empty")))
        }
        Some(_) => return Err(malformed("`topic` must be a string")),
        None => return Err(malformed("missing `topic`")),
    };
    let id = match obj.remove("id") {
        None => None,
        Some(Value::String(s)) => Some(s),
        Some(_) => return Err(malformed("`id` must be a string")),
    };
    let msg = match (op, obj.remove("msg")) {
        (Op::Publish, Some(v)) => Some(Payload::from_topic(&topic, v)?),
        (Op::Publish, None) => return Err(malformed("publish requires `msg`")),
        (_, Some(_)) => return Err(malformed(format!("`msg` is not allowed on {}", op.as_str()))),
        (_, None) => None,
    };
    Ok(BridgeMessage { op, topic, msg, id })
}

/// Canonical serialization: keys `op`, `topic`, then `msg` and `id` when present.
pub fn encode_message(message: &BridgeMessage) -> String {
    message.to_value().to_string()
}

/// Out-of-band error notice sent to the offending session.
pub fn status_notice(level: &str, text: &str, id: Option<&str>) -> String {
    let mut v = json!({ "op": "status", "level": level, "msg": text });
    if let Some(id) = id {
        v["id"] = Value::from(id);
    }
    v.to_string()
}

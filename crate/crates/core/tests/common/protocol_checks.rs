use std::sync::{mpsc, Arc, Mutex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use sharenav_core::bridge::*;
use sharenav_core::control::{SpeedDirection, SpeedTarget};

fn float(rng: &mut ChaCha8Rng) -> f64 {
    match rng.gen_range(0..6) {
        0 => 0.0,
        1 => rng.gen_range(-1e-300..1e-300),
        2 => rng.gen_range(-1e12..1e12),
        3 => f64::from(rng.gen_range(-1000i32..1000)),
        _ => rng.gen_range(-10.0..10.0),
    }
}

fn text(rng: &mut ChaCha8Rng) -> String {
    const POOL: &[&str] = &["a", "Z", " ", "\"", "\\", "\n", "é", "漢", "🚀", "/", "{", "\u{1}"];
    (0..rng.gen_range(0..8)).map(|_| POOL[rng.gen_range(0..POOL.len())]).collect()
}

fn value(rng: &mut ChaCha8Rng, depth: u32) -> Value {
    match rng.gen_range(0..if depth > 2 { 5 } else { 7 }) {
        0 => Value::Null,
        1 => Value::Bool(rng.gen()),
        2 => json!(rng.gen::<i64>()),
        3 => json!(float(rng)),
        4 => Value::String(text(rng)),
        5 => Value::Array((0..rng.gen_range(0..4)).map(|_| value(rng, depth + 1)).collect()),
        _ => Value::Object((0..rng.gen_range(0..4)).map(|_| (text(rng), value(rng, depth + 1))).collect()),
    }
}

fn payload(rng: &mut ChaCha8Rng) -> (String, Payload) {
    let opt = |rng: &mut ChaCha8Rng| rng.gen_bool(0.5).then(|| float(rng));
    let goal = |rng: &mut ChaCha8Rng| GoalMsg { x: float(rng), y: float(rng), theta: float(rng) };
    match rng.gen_range(0..9) {
        0 => (CMD_VEL.into(), Payload::CmdVel(CmdVelMsg { v: float(rng), omega: float(rng), pull: opt(rng), bearing: opt(rng) })),
        1 => (GOAL.into(), Payload::Goal(goal(rng))),
        2 => (CANCEL_GOAL.into(), Payload::CancelGoal(CancelGoalMsg {})),
        3 => (
            SET_SPEED.into(),
            Payload::SetSpeed(SetSpeedMsg {
                target: if rng.gen() { SpeedTarget::Linear } else { SpeedTarget::Angular },
                direction: if rng.gen() { SpeedDirection::Up } else { SpeedDirection::Down },
            }),
        ),
        4 => {
            let (w, h) = (rng.gen_range(0..6), rng.gen_range(0..6));
            let data = (0..w * h).map(|_| rng.gen_range(0..2)).collect();
            (MAP.into(), Payload::Map(MapMsg { width: w, height: h, resolution: float(rng), data }))
        }
        5 => (ROBOT_POSE.into(), Payload::Pose(PoseMsg { x: float(rng), y: float(rng), theta: float(rng), stamp_ms: rng.gen() })),
        6 => {
            let waypoints = (0..rng.gen_range(0..6)).map(|_| [float(rng), float(rng)]).collect();
            (PLAN.into(), Payload::Plan(PlanMsg { mode_id: rng.gen_range(0..4), label: text(rng), waypoints }))
        }
        7 => {
            let arbitration = [ArbitrationName::Idle, ArbitrationName::Teleop, ArbitrationName::Autonomous, ArbitrationName::Override][rng.gen_range(0..4)];
            (
                MODE_STATE.into(),
                Payload::ModeState(ModeStateMsg {
                    arbitration,
                    goal: rng.gen_bool(0.5).then(|| goal(rng)),
                    alpha_probs: [float(rng), float(rng), float(rng), float(rng), float(rng)],
                    m_h: rng.gen_bool(0.5).then(|| rng.gen_range(0..3)),
                    m_r: rng.gen_bool(0.5).then(|| rng.gen_range(0..3)),
                    limits: LimitsMsg { v_max: float(rng), omega_max: float(rng) },
                }),
            )
        }
        _ => (format!("/x/{}", rng.gen_range(0..100)), Payload::Other(value(rng, 0))),
    }
}

fn message(rng: &mut ChaCha8Rng) -> BridgeMessage {
    let (topic, msg) = payload(rng);
    let mut m = match rng.gen_range(0..5) {
        0 => BridgeMessage::subscribe(topic),
        1 => BridgeMessage::unsubscribe(topic),
        2 => BridgeMessage::advertise(topic),
        _ => BridgeMessage::publish(topic, msg),
    };
    if rng.gen_bool(0.3) {
        m = m.with_id(text(rng));
    }
    m
}

pub fn round_trip_messages(count: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..count {
        let m = message(&mut rng);
        let wire = encode_message(&m);
        let back = decode_message(&wire).unwrap_or_else(|e| panic!("{wire}: {e}"));
        assert_eq!(back, m, "{wire}");
        assert_eq!(encode_message(&back), wire);
    }
}

type Inbox = Arc<Mutex<Vec<String>>>;

fn client(hub: &Hub) -> (SessionId, Inbox) {
    let inbox: Inbox = Arc::default();
    let sink = inbox.clone();
    let id = hub.connect(Arc::new(move |t: &str| {
        sink.lock().unwrap().push(t.to_string());
        true
    }));
    (id, inbox)
}

fn stamps(inbox: &Inbox, topic: &str) -> Vec<u64> {
    inbox
        .lock()
        .unwrap()
        .iter()
        .filter_map(|t| decode_message(t).ok())
        .filter(|m| m.topic == topic)
        .map(|m| match m.msg {
            Some(Payload::Pose(p)) => p.stamp_ms,
            Some(Payload::Other(v)) => v["seq"].as_u64().unwrap(),
            other => panic!("{other:?}"),
        })
        .collect()
}

pub fn delivery_is_fifo_per_topic() {
    let (tx, _rx) = mpsc::channel();
    let hub = Arc::new(Hub::new(tx));
    let clients: Vec<_> = (0..3).map(|_| client(&hub)).collect();
    for (id, _) in &clients {
        hub.handle_text(*id, r#"{"op":"subscribe","topic":"/robot_pose"}"#).unwrap();
        hub.handle_text(*id, r#"{"op":"subscribe","topic":"/chatter"}"#).unwrap();
    }
    let publisher = clients[0].0;
    let h = hub.clone();
    let server = std::thread::spawn(move || {
        for i in 0..2000 {
            h.publish(ROBOT_POSE, Payload::Pose(PoseMsg { x: 0.0, y: 0.0, theta: 0.0, stamp_ms: i }));
        }
    });
    for i in 0..2000u64 {
        hub.handle_text(publisher, &json!({"op":"publish","topic":"/chatter","msg":{"seq": i}}).to_string()).unwrap();
    }
    server.join().unwrap();
    let expected: Vec<u64> = (0..2000).collect();
    for (_, inbox) in &clients {
        assert_eq!(stamps(inbox, ROBOT_POSE), expected);
        assert_eq!(stamps(inbox, "/chatter"), expected);
    }
}

pub fn scripted_session_log_is_complete() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("session.jsonl");
    let (tx, rx) = mpsc::channel();
    let hub = Hub::new(tx).with_log(LogSink::create(&path).unwrap());
    let (a, a_in) = client(&hub);
    let (b, b_in) = client(&hub);
    let (c, c_in) = client(&hub);

    hub.publish(MAP, Payload::Map(MapMsg { width: 2, height: 1, resolution: 0.5, data: vec![0, 1] }));
    let script: Vec<(SessionId, String)> = vec![
        (a, r#"{"op":"subscribe","topic":"/map"}"#.into()),
        (a, r#"{"op":"subscribe","topic":"/robot_pose"}"#.into()),
        (b, r#"{"op":"subscribe","topic":"/plan","id":"b1"}"#.into()),
        (b, r#"{"op":"subscribe","topic":"/cmd_vel"}"#.into()),
        (c, r#"{"op":"advertise","topic":"/cmd_vel"}"#.into()),
        (c, r#"{"op":"publish","topic":"/cmd_vel","msg":{"v":0.2,"omega":0.1}}"#.into()),
        (c, r#"{"op":"publish","topic":"/goal","msg":{"x":1,"y":1,"theta":0}}"#.into()),
        (c, "garbage".into()),
        (c, r#"{"op":"publish","topic":"/goal","msg":{"x":1}}"#.into()),
        (a, r#"{"op":"unsubscribe","topic":"/robot_pose"}"#.into()),
        (b, r#"{"op":"publish","topic":"/set_speed","msg":{"target":"linear","direction":"up"}}"#.into()),
    ];
    for (i, (session, frame)) in script.iter().enumerate() {
        let _ = hub.handle_text(*session, frame);
        if i == 3 {
            for t in 0..5 {
                hub.publish(ROBOT_POSE, Payload::Pose(PoseMsg { x: 0.0, y: 0.0, theta: 0.0, stamp_ms: t }));
            }
            hub.publish(PLAN, Payload::Plan(PlanMsg { mode_id: 0, label: "right".into(), waypoints: vec![[0.25, 0.25]] }));
        }
    }
    hub.publish(ROBOT_POSE, Payload::Pose(PoseMsg { x: 1.0, y: 0.0, theta: 0.0, stamp_ms: 9 }));
    hub.disconnect(c);

    let stats = hub.stats();
    assert_eq!(stats.inbound, script.len() as u64);
    assert_eq!(stats.rejected, 2);
    hub.flush_log().unwrap();
    assert!(hub.log_status().is_none());
    drop(hub);

    let log = std::fs::read_to_string(&path).unwrap();
    let records: Vec<LogRecord> = log.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(records.len() as u64, stats.inbound + stats.outbound);
    let delivered = a_in.lock().unwrap().len() + b_in.lock().unwrap().len() + c_in.lock().unwrap().len();
    assert_eq!(stats.outbound, delivered as u64);
    assert_eq!(records.iter().filter(|r| r.dir == Direction::In).count(), script.len());
    for (session, inbox) in [(a, &a_in), (b, &b_in), (c, &c_in)] {
        let outs: Vec<&Value> = records.iter().filter(|r| r.dir == Direction::Out && r.session == session).map(|r| &r.msg).collect();
        let got: Vec<Value> = inbox.lock().unwrap().iter().map(|t| serde_json::from_str(t).unwrap()).collect();
        assert_eq!(outs.len(), got.len());
        assert!(outs.iter().zip(&got).all(|(a, b)| *a == b));
    }
    assert!(records.windows(2).all(|w| w[0].stamp_ms <= w[1].stamp_ms));
    assert!(records.iter().any(|r| r.msg == Value::String("garbage".into())));

    // latched map, 5 poses to a, the plan and the forwarded twist to b, two notices to c
    assert_eq!(a_in.lock().unwrap().len(), 6);
    assert_eq!(b_in.lock().unwrap().len(), 2);
    assert_eq!(c_in.lock().unwrap().len(), 2);
    let forwarded: Vec<InboundCommand> = rx.try_iter().map(|c| c.command).collect();
    assert_eq!(forwarded.len(), 3);
}

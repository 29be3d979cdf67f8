use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sharenav_core::control::{
    arbitrate, ArbitrationConfig, ArbitrationState, ControlEvent, Directive, JoystickInput, PlannedRoute,
};
use sharenav_core::nav::Path;
use sharenav_core::sim::{Cell, OccupancyGrid, Pose2D};

pub const SEQUENCES: usize = 100_000;

pub fn goals() -> [Pose2D; 3] {
    [Pose2D::new(1.0, 1.0, 0.0), Pose2D::new(2.0, 3.0, 1.0), Pose2D::new(4.0, 0.5, -2.0)]
}

fn random_event(rng: &mut ChaCha8Rng, path: &Path, state: &ArbitrationState) -> ControlEvent {
    match rng.gen_range(0..100) {
        0..=44 => ControlEvent::Tick,
        45..=59 => ControlEvent::Joystick(JoystickInput::new(rng.gen_range(0.06..1.0), rng.gen_range(-3.0..3.0))),
        60..=71 => ControlEvent::Joystick(JoystickInput::new(rng.gen_range(0.0..0.05), 0.0)),
        72..=79 => ControlEvent::GoalClick(goals()[rng.gen_range(0..3)]),
        80..=83 => ControlEvent::CancelGoal,
        _ => {
            // mostly plans for the pending goal, sometimes stale ones
            let goal = match (state.goal(), rng.gen_bool(0.8)) {
                (Some(g), true) => g,
                _ => goals()[rng.gen_range(0..3)],
            };
            ControlEvent::PlanReady(Box::new(PlannedRoute { goal, mode_id: rng.gen_range(0..2), path: path.clone() }))
        }
    }
}

/// Independent bookkeeping of what the contract promises.
#[derive(Default)]
struct Model {
    /// Ticks without a strong stick since entering (or re-arming) override.
    quiet: u32,
    /// Source-bearing directives since the last tick.
    sources_this_tick: usize,
}

pub fn fuzzed_sequences_honor_contract(sequences: usize) {
    let grid = OccupancyGrid::open(6, 6, 1.0).unwrap();
    let path = Path::from_cells(&grid, vec![Cell::new(0, 0), Cell::new(0, 1)]);
    let config = ArbitrationConfig::default();
    let eps = config.epsilon;
    let n_release = config.release_ticks;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut republished = 0usize;
    let mut overrides = 0usize;

    for _ in 0..sequences {
        let mut state = ArbitrationState::Idle;
        let mut model = Model::default();
        let len = rng.gen_range(1..60);
        let mut burst = 0u32;
        for _ in 0..len {
            // occasional runs of ticks so quiet periods reach the release threshold
            if burst == 0 && rng.gen_bool(0.05) {
                burst = rng.gen_range(n_release - 3..n_release + 3);
            }
            let event = if burst > 0 {
                burst -= 1;
                ControlEvent::Tick
            } else {
                random_event(&mut rng, &path, &state)
            };
            let (next, directive) = arbitrate(&state, &event, &config);

            model.sources_this_tick += usize::from(directive.source().is_some());
            match &event {
                ControlEvent::Tick => {
                    assert!(matches!(
                        directive,
                        Directive::Hold | Directive::ApplyJoystick(_) | Directive::FollowPath | Directive::RepublishGoal(_)
                    ));
                    assert!(model.sources_this_tick <= 1, "two command sources in one tick");
                    model.sources_this_tick = 0;
                }
                _ => assert!(
                    matches!(directive, Directive::None | Directive::RequestPlan(_) | Directive::Stop),
                    "{event:?} produced motion {directive:?}"
                ),
            }

            match (&state, &event) {
                (_, ControlEvent::CancelGoal) => {
                    assert_eq!(next, ArbitrationState::Idle);
                    assert_eq!(directive, Directive::Stop);
                }
                (_, ControlEvent::GoalClick(g)) => {
                    assert_eq!(next.goal(), Some(*g));
                    assert_eq!(directive, Directive::RequestPlan(*g));
                }
                (ArbitrationState::Autonomous { goal, .. }, ControlEvent::Joystick(s)) if s.pull > eps => {
                    // override latency: the very next state hands the stick control
                    overrides += 1;
                    match &next {
                        ArbitrationState::Override { saved_goal, .. } => assert_eq!(saved_goal, goal),
                        other => panic!("strong stick left autonomy as {other:?}"),
                    }
                    model.quiet = 0;
                }
                (ArbitrationState::Override { saved_goal, stick, .. }, ev) => {
                    match ev {
                        ControlEvent::Joystick(s) => {
                            assert!(matches!(&next, ArbitrationState::Override { saved_goal: g, .. } if g == saved_goal));
                            if s.pull > eps {
                                model.quiet = 0;
                            }
                        }
                        ControlEvent::PlanReady(_) => assert_eq!(&next, &state),
                        ControlEvent::Tick if stick.pull > eps => {
                            assert_eq!(directive, Directive::ApplyJoystick(*stick));
                            model.quiet = 0;
                        }
                        ControlEvent::Tick => {
                            model.quiet += 1;
                            if model.quiet == n_release {
                                republished += 1;
                                assert_eq!(directive, Directive::RepublishGoal(*saved_goal));
                                assert_eq!(next.goal(), Some(*saved_goal));
                                assert!(matches!(next, ArbitrationState::Autonomous { path: None, .. }));
                            } else {
                                assert!(model.quiet < n_release);
                                assert_eq!(directive, Directive::Hold);
                                assert_eq!(next.goal(), Some(*saved_goal));
                            }
                        }
                        _ => {}
                    }
                }
                (ArbitrationState::Autonomous { goal, path, .. }, ControlEvent::Tick) => {
                    assert_eq!(next, state);
                    let want = if path.is_some() { Directive::FollowPath } else { Directive::Hold };
                    assert_eq!(directive, want);
                    assert_eq!(next.goal(), Some(*goal));
                }
                (ArbitrationState::Autonomous { goal, .. }, ControlEvent::PlanReady(p)) => {
                    if p.goal == *goal {
                        assert!(matches!(&next, ArbitrationState::Autonomous { path: Some(_), mode_id: Some(m), .. } if *m == p.mode_id));
                    } else {
                        assert_eq!(next, state);
                    }
                }
                (ArbitrationState::Idle | ArbitrationState::Teleop { .. }, ControlEvent::PlanReady(_)) => {
                    assert_eq!(next, state);
                }
                (ArbitrationState::Teleop { stick }, ControlEvent::Tick) => {
                    assert_eq!(directive, Directive::ApplyJoystick(*stick));
                }
                (ArbitrationState::Idle, ControlEvent::Tick) => assert_eq!(directive, Directive::Hold),
                _ => {}
            }
            state = next;
        }
    }
    assert!(republished * 100 > sequences && overrides * 10 > sequences, "fuzzer reached {republished} republishes, {overrides} overrides");
}


/// Random up/down presses against a stepwise clamped product of 1.1 and 0.9.
pub fn speed_button_sequences(sequences: usize) {
    use sharenav_core::control::{adjust_speed, SpeedDirection, SpeedLimits, SpeedTarget, SPEED_CEILING, SPEED_FLOOR};
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..sequences {
        let mut limits = SpeedLimits::default();
        let (mut v, mut w) = (limits.v_max, limits.omega_max);
        for _ in 0..rng.gen_range(0..120) {
            let linear = rng.gen_bool(0.5);
            let up = rng.gen_bool(0.6);
            let factor = if up { 1.1 } else { 0.9 };
            let target = if linear { SpeedTarget::Linear } else { SpeedTarget::Angular };
            let direction = if up { SpeedDirection::Up } else { SpeedDirection::Down };
            limits = adjust_speed(limits, target, direction);
            if linear {
                v = (v * factor).max(SPEED_FLOOR).min(SPEED_CEILING);
            } else {
                w = (w * factor).max(SPEED_FLOOR).min(SPEED_CEILING);
            }
            assert_eq!((limits.v_max, limits.omega_max), (v, w));
        }
    }
}

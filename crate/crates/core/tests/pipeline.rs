//! End-to-end checks against oracles written with plain arrays, so they
//! share no code with the solver.

use std::f64::consts::{PI, TAU};

use armik_core::{
    forward, ArmGeometry, BodySide, ElbowPolicy, JointLimits, SolveRequest, SolveStatus, Solver,
    Target, TargetPose, Vec3,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type V = [f64; 3];

fn sub(a: V, b: V) -> V {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}
fn dot(a: V, b: V) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}
fn cross(a: V, b: V) -> V {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}
fn norm(a: V) -> f64 {
    dot(a, a).sqrt()
}
fn angle(a: V, b: V) -> f64 {
    (dot(a, b) / (norm(a) * norm(b))).clamp(-1.0, 1.0).acos()
}

struct Case {
    geom: ArmGeometry,
    pose: TargetPose,
    t: f64,
}

fn random_case(rng: &mut ChaCha8Rng) -> Case {
    let geom = ArmGeometry::new(
        rng.random_range(1.0..4.0),
        rng.random_range(1.0..4.0),
        rng.random_range(0.2..1.5),
    )
    .unwrap();
    let (lo, hi) = (geom.min_reach(), geom.max_reach());
    let reach = lo + rng.random_range(0.05..0.95) * (hi - lo);
    let (p, a) = (rng.random_range(0.1..PI - 0.1), rng.random_range(-PI..PI));
    let wrist: V = [
        reach * p.sin() * a.cos(),
        reach * p.sin() * a.sin(),
        reach * p.cos(),
    ];
    let (hp, ha) = (rng.random_range(0.0..PI), rng.random_range(-PI..PI));
    let l = geom.hand;
    let tip = sub(
        wrist,
        [
            l * hp.sin() * ha.cos(),
            l * hp.sin() * ha.sin(),
            l * hp.cos(),
        ],
    );
    Case {
        geom,
        pose: TargetPose::new(Vec3::from(tip), hp, ha),
        t: rng.random_range(0.0..TAU),
    }
}

#[test]
fn random_targets_satisfy_geometric_oracles() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    for _ in 0..2000 {
        let c = random_case(&mut rng);
        let solver = Solver::new(c.geom, JointLimits::default());
        let report = solver.solve(&SolveRequest::new(
            Target::Pose(c.pose),
            ElbowPolicy::FixedT(c.t),
        ));
        let s = report.solution.expect("reachable target yields a posture");
        let (d1, d2) = (c.geom.upper_arm, c.geom.forearm);
        let (e, w) = (s.witness.elbow.to_array(), s.witness.wrist.to_array());
        let tip = c.pose.tip.to_array();

        assert!((norm(e) - d1).abs() < 1e-9);
        assert!((norm(sub(e, w)) - d2).abs() < 1e-9);
        assert!((norm(sub(w, tip)) - c.geom.hand).abs() < 1e-9);

        let cos_elbow = (d1 * d1 + d2 * d2 - dot(w, w)) / (2.0 * d1 * d2);
        assert!((s.elbow - cos_elbow.clamp(-1.0, 1.0).acos()).abs() < 1e-6);
        assert!((s.hand_flex.unwrap() - angle(sub(e, w), sub(tip, w))).abs() < 1e-9);

        let beta = (d1 * d1 - d2 * d2 + dot(w, w)) / (2.0 * dot(w, w));
        let normal = cross(e, [beta * w[0], beta * w[1], beta * w[2]]);
        if norm(normal) > 1e-6 {
            let alpha = PI / 2.0 - angle(sub(w, tip), normal);
            let alpha = alpha.abs();
            assert!((s.wrist_roll.unwrap() - (c.geom.wrist_roll_offset + alpha)).abs() < 1e-6);
            checked += 1;
        }

        let tilt = (-e[2] / d1).clamp(-1.0, 1.0).acos();
        let tilt = if e[2] > 0.0 { PI - tilt } else { tilt };
        assert!(
            (s.shoulder_tilt - tilt).abs() < 1e-9,
            "{} vs {}",
            s.shoulder_tilt,
            tilt
        );

        let fk = forward(&s, &c.geom).unwrap();
        assert!((fk.elbow - s.witness.elbow).norm() < 1e-6);
        assert!((fk.wrist - s.witness.wrist).norm() < 1e-6);
        assert!((fk.tip.unwrap() - c.pose.tip).norm() < 1e-6);
    }
    assert!(checked > 1900);
}

#[test]
fn body_side_elbows_stay_on_their_side() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..500 {
        let c = random_case(&mut rng);
        let solver = Solver::new(c.geom, JointLimits::default());
        for side in [BodySide::Right, BodySide::Left] {
            let req = SolveRequest::new(Target::Pose(c.pose), ElbowPolicy::MidArc).with_body(side);
            let r = solver.solve(&req);
            let w = r.diagnostics.wrist.unwrap().to_array();
            let s = r.solution.expect("half the circle is always on each side");
            let e = s.witness.elbow.to_array();
            let n = [w[1], -w[0], 0.0];
            let sign = if side == BodySide::Right { 1.0 } else { -1.0 };
            assert!(sign * dot(e, n) >= -1e-9);
        }
    }
}

#[test]
fn unreachable_targets_are_infeasible() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let solver = Solver::new(
        ArmGeometry::new(3.0, 2.0, 1.0).unwrap(),
        JointLimits::default(),
    );
    for _ in 0..500 {
        let r = rng.random_range(0.0..10.0);
        let u: V = [
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        ];
        let k = r / norm(u);
        let wrist = Vec3::new(u[0] * k, u[1] * k, u[2] * k);
        let report = solver.solve(&SolveRequest::new(
            Target::Wrist { wrist, tip: None },
            ElbowPolicy::MidArc,
        ));
        let reachable = (1.0 + 1e-6..5.0 - 1e-6).contains(&r);
        let unreachable = !(1.0 - 1e-6..=5.0 + 1e-6).contains(&r);
        if reachable {
            assert!(report.solution.is_some(), "r = {r}");
        }
        if unreachable {
            assert!(
                matches!(report.status, SolveStatus::Infeasible { .. }),
                "r = {r}"
            );
            assert!(report.diagnostics.circle.is_none());
        }
    }
}

#[test]
fn nearest_policy_tracks_a_moving_target() {
    let geom = ArmGeometry::new(3.0, 3.0, 1.0).unwrap();
    let solver = Solver::new(geom, JointLimits::default());
    let at = |k: f64| Target::Wrist {
        wrist: Vec3::new(3.0, 3.0 - k, -3.0),
        tip: None,
    };
    let mut current = solver
        .solve(&SolveRequest::new(at(0.0), ElbowPolicy::FixedT(PI)))
        .solution
        .unwrap();
    for i in 1..=20 {
        let req = SolveRequest::new(at(i as f64 * 0.05), ElbowPolicy::NearestToCurrent)
            .with_current(current.clone());
        let next = solver.solve(&req).solution.unwrap();
        assert!(next.witness.elbow.distance(current.witness.elbow) < 0.2);
        current = next;
    }
}

#[test]
fn mid_arc_round_trip_is_tight() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let geom =
            ArmGeometry::new(rng.random_range(0.5..5.0), rng.random_range(0.5..5.0), 1.0).unwrap();
        let eps = 1e-3 * geom.upper_arm.min(geom.forearm);
        let reach = rng.random_range(geom.min_reach() + eps..geom.max_reach() - eps);
        let u: V = loop {
            let u = [
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
                rng.random_range(-1.0..1.0),
            ];
            let n = norm(u);
            if n > 1e-3 && n <= 1.0 {
                break [u[0] / n, u[1] / n, u[2] / n];
            }
        };
        let wrist = Vec3::new(u[0] * reach, u[1] * reach, u[2] * reach);
        let r = Solver::new(geom, JointLimits::default()).solve(&SolveRequest::new(
            Target::Wrist { wrist, tip: None },
            ElbowPolicy::MidArc,
        ));
        assert_eq!(r.status, SolveStatus::Solved);
        let fk = forward(&r.solution.unwrap(), &geom).unwrap();
        worst = worst.max((fk.wrist - wrist).norm());
    }
    assert!(worst < 1e-9, "worst wrist error {worst:e}");
}

#[test]
fn identical_requests_give_identical_reports() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..50 {
        let c = random_case(&mut rng);
        let solver = Solver::new(c.geom, JointLimits::default());
        let req =
            SolveRequest::new(Target::Pose(c.pose), ElbowPolicy::MidArc).with_body(BodySide::Right);
        let a = serde_json::to_string(&solver.solve(&req)).unwrap();
        let b = serde_json::to_string(&solver.solve(&req)).unwrap();
        assert_eq!(a, b);
    }
}

//! End-to-end solve: target → wrist → reachability → redundancy circle →
//! feasible arc → elbow choice → joint angles → limit check.
//!
//! Failures are reported as data. A report that stops at some stage leaves
//! every later diagnostic field empty.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::angles::{elbow_angle, hand_flex, hand_plane, shoulder_angles, wrist_roll};
use crate::arm::{ArmGeometry, Interval, Joint, JointLimits, TargetPose};
use crate::circle::{
    feasible_arc, reachability, ArcConstraint, ArcSet, BodySide, Reachability, RedundancyCircle,
    SelectorRange,
};
use crate::decouple::{direction_angles, wrist_from_target};
use crate::error::{IkError, Result};
use crate::fk::wrist_root;
use crate::geom::{Plane, Vec3};
use crate::solution::{Branch, HandDirection, JointSolution, Witness};

/// What the arm should reach.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Target {
    /// Tip position and hand orientation; the wrist is derived.
    Pose(TargetPose),
    /// Wrist given directly, optionally with a tip so the hand angles can
    /// still be extracted.
    Wrist { wrist: Vec3, tip: Option<Vec3> },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "t", rename_all = "snake_case")]
pub enum ElbowPolicy {
    FixedT(f64),
    MidArc,
    /// Minimum squared joint-space distance to the request's `current`.
    NearestToCurrent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveRequest {
    pub target: Target,
    pub policy: ElbowPolicy,
    pub body: Option<BodySide>,
    pub current: Option<JointSolution>,
    /// Passed through to the solution untouched.
    pub gripper: f64,
}

impl SolveRequest {
    pub fn new(target: Target, policy: ElbowPolicy) -> Self {
        SolveRequest {
            target,
            policy,
            body: None,
            current: None,
            gripper: 0.0,
        }
    }

    pub fn with_body(mut self, side: BodySide) -> Self {
        self.body = Some(side);
        self
    }

    pub fn with_current(mut self, current: JointSolution) -> Self {
        self.current = Some(current);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Infeasible {
    TooFar,
    TooClose,
    WristAtShoulder,
    NoValidElbow,
    PolicyViolation { message: String },
    Degenerate { message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitViolation {
    pub joint: Joint,
    pub value: f64,
    pub range: Interval,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SolveStatus {
    Solved,
    Infeasible { reason: Infeasible },
    OutOfLimits { violations: Vec<LimitViolation> },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircleSummary {
    pub center: Vec3,
    pub radius: f64,
    pub beta: f64,
    pub basis_a: Vec3,
    pub basis_b: Vec3,
    pub plane: Plane,
}

impl From<&RedundancyCircle> for CircleSummary {
    fn from(c: &RedundancyCircle) -> Self {
        CircleSummary {
            center: c.center,
            radius: c.radius,
            beta: c.beta,
            basis_a: c.basis_a,
            basis_b: c.basis_b,
            plane: c.plane,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub wrist: Option<Vec3>,
    pub reach: Option<f64>,
    pub reachability: Option<Reachability>,
    pub circle: Option<CircleSummary>,
    pub feasible_arc: Option<ArcSet>,
    pub selected_t: Option<f64>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub solution: Option<JointSolution>,
    pub diagnostics: Diagnostics,
}

impl SolveReport {
    pub fn is_solved(&self) -> bool {
        self.status == SolveStatus::Solved
    }

    fn infeasible(reason: Infeasible, diagnostics: Diagnostics) -> Self {
        SolveReport {
            status: SolveStatus::Infeasible { reason },
            solution: None,
            diagnostics,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Arc samples scanned by the nearest-pose policy before refinement.
    pub nearest_samples: usize,
    /// Bracket width at which the golden-section refinement stops.
    pub refine_tol: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            nearest_samples: 720,
            refine_tol: 1e-9,
        }
    }
}

/// Stage outputs up to and including the feasible arc.
#[derive(Debug, Clone)]
struct Prepared {
    circle: RedundancyCircle,
    tip: Option<Vec3>,
    hand_direction: Option<HandDirection>,
    diagnostics: Diagnostics,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Solver {
    pub geometry: ArmGeometry,
    pub limits: JointLimits,
    pub options: SolverOptions,
}

impl Solver {
    pub fn new(geometry: ArmGeometry, limits: JointLimits) -> Self {
        Solver {
            geometry,
            limits,
            options: SolverOptions::default(),
        }
    }

    pub fn solve(&self, request: &SolveRequest) -> SolveReport {
        let prepared = match self.prepare(&request.target, request.body) {
            Ok(p) => p,
            Err(report) => return *report,
        };
        let mut diagnostics = prepared.diagnostics.clone();
        let arc = &prepared.circle.feasible_arc;

        let chosen = match request.policy {
            ElbowPolicy::NearestToCurrent => match &request.current {
                Some(current) => self.nearest_to(&prepared, current, request.gripper),
                None => Err(IkError::PolicyViolation(
                    "nearest-to-current policy needs a current solution".into(),
                )),
            },
            policy => select_elbow(arc, policy, |_| (0.0, true), 0, 0.0),
        };
        let t = match chosen {
            Ok(t) => t,
            Err(e) => {
                return SolveReport::infeasible(
                    Infeasible::PolicyViolation {
                        message: e.to_string(),
                    },
                    diagnostics,
                )
            }
        };
        diagnostics.selected_t = Some(t);
        self.finish(&prepared, t, request.gripper, diagnostics)
    }

    /// Reports for `samples` parameters spread evenly over the feasible arc,
    /// or the failure report when there is no arc to sweep.
    pub fn sweep(
        &self,
        target: &Target,
        body: Option<BodySide>,
        samples: usize,
    ) -> std::result::Result<Vec<SolveReport>, Box<SolveReport>> {
        let prepared = self.prepare(target, body)?;
        Ok(prepared
            .circle
            .feasible_arc
            .sample(samples)
            .into_iter()
            .map(|t| {
                let mut diagnostics = prepared.diagnostics.clone();
                diagnostics.selected_t = Some(t);
                self.finish(&prepared, t, 0.0, diagnostics)
            })
            .collect())
    }

    fn prepare(
        &self,
        target: &Target,
        body: Option<BodySide>,
    ) -> std::result::Result<Prepared, Box<SolveReport>> {
        let mut diagnostics = Diagnostics::default();
        let degenerate = |e: IkError, d: Diagnostics| {
            Box::new(SolveReport::infeasible(
                Infeasible::Degenerate {
                    message: e.to_string(),
                },
                d,
            ))
        };

        let resolved = match *target {
            Target::Pose(pose) => wrist_from_target(&pose, &self.geometry).map(|w| {
                let dir = HandDirection {
                    polar: pose.hand_polar,
                    azimuth: pose.hand_azimuth,
                };
                (w.point, Some(pose.tip), Some(dir))
            }),
            Target::Wrist { wrist, tip } => {
                if !wrist.is_finite() || tip.is_some_and(|p| !p.is_finite()) {
                    Err(IkError::DegenerateInput("non-finite wrist or tip".into()))
                } else {
                    tip.map(|p| direction_angles(wrist - p))
                        .transpose()
                        .map(|d| {
                            let dir = d.map(|(polar, azimuth)| HandDirection { polar, azimuth });
                            (wrist, tip, dir)
                        })
                }
            }
        };
        let (wrist, tip, hand_direction) =
            resolved.map_err(|e| degenerate(e, diagnostics.clone()))?;
        diagnostics.wrist = Some(wrist);
        diagnostics.reach = Some(wrist.norm());

        let class = reachability(wrist, &self.geometry);
        diagnostics.reachability = Some(class);
        let unreachable = match class {
            Reachability::TooFar => Some(Infeasible::TooFar),
            Reachability::TooClose => Some(Infeasible::TooClose),
            Reachability::WristAtShoulder => Some(Infeasible::WristAtShoulder),
            Reachability::Reachable | Reachability::TangentPoint => None,
        };
        if let Some(reason) = unreachable {
            return Err(Box::new(SolveReport::infeasible(reason, diagnostics)));
        }
        if class == Reachability::TangentPoint {
            diagnostics
                .notes
                .push("wrist on the reach boundary: single elbow position".into());
        }

        let mut circle = RedundancyCircle::new(wrist, &self.geometry)
            .map_err(|e| degenerate(e, diagnostics.clone()))?;
        diagnostics.circle = Some(CircleSummary::from(&circle));

        let selector = SelectorRange(self.limits.get(Joint::ArmRoll));
        let mut constraints: Vec<&dyn ArcConstraint> = vec![&selector];
        let side;
        if let Some(s) = body {
            side = s;
            constraints.push(&side);
        }
        let arc = feasible_arc(&circle, &constraints);
        diagnostics.feasible_arc = Some(arc.clone());
        if arc.is_empty() {
            return Err(Box::new(SolveReport::infeasible(
                Infeasible::NoValidElbow,
                diagnostics,
            )));
        }
        circle.feasible_arc = arc;
        Ok(Prepared {
            circle,
            tip,
            hand_direction,
            diagnostics,
        })
    }

    fn finish(
        &self,
        prepared: &Prepared,
        t: f64,
        gripper: f64,
        mut diagnostics: Diagnostics,
    ) -> SolveReport {
        match self.posture(prepared, t, gripper) {
            Ok(solution) => {
                if solution.tip.is_some() && solution.inner.wrist_roll.is_none() {
                    diagnostics
                        .notes
                        .push("hand plane undefined: wrist roll is free".into());
                }
                let solution = solution.inner;
                let violations = validate_limits(&solution, &self.limits);
                let status = if violations.is_empty() {
                    SolveStatus::Solved
                } else {
                    SolveStatus::OutOfLimits { violations }
                };
                SolveReport {
                    status,
                    solution: Some(solution),
                    diagnostics,
                }
            }
            Err(e) => SolveReport::infeasible(
                Infeasible::Degenerate {
                    message: e.to_string(),
                },
                diagnostics,
            ),
        }
    }

    fn posture(&self, prepared: &Prepared, t: f64, gripper: f64) -> Result<Posture> {
        let geom = &self.geometry;
        let circle = &prepared.circle;
        let wrist = circle.wrist;
        let elbow = circle.point_at(t);
        let shoulder = shoulder_angles(elbow, geom)?;
        let bend = elbow_angle(wrist, circle, geom)?;

        let (mut roll, mut flex, mut alpha) = (None, None, None);
        if let Some(tip) = prepared.tip {
            flex = Some(hand_flex(elbow, wrist, tip)?);
            match hand_plane(geom.shoulder(), elbow, circle.center) {
                Ok(plane) => {
                    let r = wrist_roll(tip, wrist, &plane, geom.wrist_roll_offset)?;
                    roll = Some(r.total);
                    alpha = Some(r.alpha);
                }
                Err(IkError::DegenerateHandPlane) => {}
                Err(e) => return Err(e),
            }
        }

        Ok(Posture {
            tip: prepared.tip,
            inner: JointSolution {
                shoulder_tilt: shoulder.tilt,
                shoulder_azimuth: shoulder.azimuth,
                arm_roll: t,
                elbow: bend.angle,
                wrist_roll: roll,
                hand_flex: flex,
                gripper,
                branch: Branch {
                    elbow_raised: shoulder.elbow_raised,
                    azimuth_negative: shoulder.azimuth_negative,
                    wrist_upper_root: wrist_root(elbow, wrist, t, geom),
                },
                hand_direction: prepared.hand_direction,
                witness: Witness {
                    wrist,
                    elbow,
                    tip: prepared.tip,
                    circle: circle.clone(),
                    roll_alpha: alpha,
                },
            },
        })
    }

    fn nearest_to(
        &self,
        prepared: &Prepared,
        current: &JointSolution,
        gripper: f64,
    ) -> Result<f64> {
        let cost = |t: f64| match self.posture(prepared, t, gripper) {
            Ok(p) => (
                joint_distance2(&p.inner, current),
                validate_limits(&p.inner, &self.limits).is_empty(),
            ),
            Err(_) => (f64::INFINITY, false),
        };
        select_elbow(
            &prepared.circle.feasible_arc,
            ElbowPolicy::NearestToCurrent,
            cost,
            self.options.nearest_samples,
            self.options.refine_tol,
        )
    }
}

struct Posture {
    tip: Option<Vec3>,
    inner: JointSolution,
}

pub fn solve(request: &SolveRequest, geom: &ArmGeometry, limits: &JointLimits) -> SolveReport {
    Solver::new(*geom, *limits).solve(request)
}

fn wrapped_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Squared joint-space distance between two postures. The arm roll and the
/// signed shoulder azimuth are compared on the circle; joints missing from
/// either side are skipped.
pub fn joint_distance2(a: &JointSolution, b: &JointSolution) -> f64 {
    let signed_azimuth = |s: &JointSolution| {
        if s.branch.azimuth_negative {
            -s.shoulder_azimuth
        } else {
            s.shoulder_azimuth
        }
    };
    let mut sum = wrapped_gap(a.arm_roll, b.arm_roll).powi(2)
        + wrapped_gap(signed_azimuth(a), signed_azimuth(b)).powi(2);
    for joint in [
        Joint::ShoulderTilt,
        Joint::Elbow,
        Joint::WristRoll,
        Joint::HandFlex,
        Joint::Gripper,
    ] {
        if let (Some(x), Some(y)) = (a.angle(joint), b.angle(joint)) {
            sum += (x - y).powi(2);
        }
    }
    sum
}

/// Picks the elbow parameter on `arc`.
///
/// `cost` maps a parameter to (distance, within-limits) and is only used by
/// [`ElbowPolicy::NearestToCurrent`]: the arc is scanned at `samples`
/// points, preferring samples within limits, and the best one is refined by
/// golden-section search down to `tol`.
pub fn select_elbow<F>(
    arc: &ArcSet,
    policy: ElbowPolicy,
    cost: F,
    samples: usize,
    tol: f64,
) -> Result<f64>
where
    F: Fn(f64) -> (f64, bool),
{
    // merged arcs may run past 2π
    let wrap = |t: f64| if t >= TAU { t - TAU } else { t };
    let cost = |t: f64| cost(wrap(t));
    if arc.is_empty() {
        return Err(IkError::PolicyViolation("feasible arc is empty".into()));
    }
    match policy {
        ElbowPolicy::FixedT(t) => {
            if arc.contains(t) {
                Ok(t)
            } else {
                Err(IkError::PolicyViolation(format!(
                    "t = {t} lies outside the feasible arc"
                )))
            }
        }
        ElbowPolicy::MidArc => Ok(arc.midpoint().expect("non-empty arc")),
        ElbowPolicy::NearestToCurrent => {
            let arcs = arc.arcs();
            let total = arc.length();
            let mut best: Option<(bool, f64, f64, f64, f64)> = None; // (ok, cost, t, lo, hi)
            for a in &arcs {
                let n = ((samples as f64 * a.length() / total.max(f64::MIN_POSITIVE)).ceil()
                    as usize)
                    .max(2);
                let step = a.length() / (n - 1) as f64;
                for i in 0..n {
                    let t = a.start + step * i as f64;
                    let (c, ok) = cost(t);
                    let better = match best {
                        None => true,
                        Some((bok, bc, ..)) => (ok && !bok) || (ok == bok && c < bc),
                    };
                    if better {
                        best = Some((ok, c, t, (t - step).max(a.start), (t + step).min(a.end)));
                    }
                }
            }
            let (best_ok, _, t0, mut lo, mut hi) = best.expect("non-empty arc");
            if hi <= lo {
                return Ok(wrap(t0));
            }
            let f = |t: f64| match cost(t) {
                (c, ok) if ok || !best_ok => c,
                _ => f64::INFINITY,
            };
            let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
            let mut x1 = hi - inv_phi * (hi - lo);
            let mut x2 = lo + inv_phi * (hi - lo);
            let (mut f1, mut f2) = (f(x1), f(x2));
            while hi - lo > tol {
                if f1 <= f2 {
                    hi = x2;
                    x2 = x1;
                    f2 = f1;
                    x1 = hi - inv_phi * (hi - lo);
                    f1 = f(x1);
                } else {
                    lo = x1;
                    x1 = x2;
                    f1 = f2;
                    x2 = lo + inv_phi * (hi - lo);
                    f2 = f(x2);
                }
            }
            let refined = 0.5 * (lo + hi);
            // keep the scan winner if refinement drifted somewhere worse
            let t = if f(refined) <= f(t0) { refined } else { t0 };
            Ok(wrap(t))
        }
    }
}

/// Every joint whose angle falls outside its closed interval.
pub fn validate_limits(solution: &JointSolution, limits: &JointLimits) -> Vec<LimitViolation> {
    solution
        .angles()
        .into_iter()
        .filter_map(|(joint, value)| {
            let value = value?;
            let range = limits.get(joint);
            (!range.contains(value)).then_some(LimitViolation {
                joint,
                value,
                range,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    const WRIST: Vec3 = Vec3::new(3.0, 3.0, -3.0);
    const TIP: Vec3 = Vec3::new(3.0, 4.0, -3.0);

    fn solver() -> Solver {
        Solver::new(
            ArmGeometry::new(3.0, 3.0, 1.0).unwrap(),
            JointLimits::default(),
        )
    }

    fn wrist_request(policy: ElbowPolicy) -> SolveRequest {
        SolveRequest::new(
            Target::Wrist {
                wrist: WRIST,
                tip: Some(TIP),
            },
            policy,
        )
    }

    #[test]
    fn reference_wrist_is_solved() {
        let r = solver().solve(&wrist_request(ElbowPolicy::FixedT(PI)));
        assert_eq!(r.status, SolveStatus::Solved);
        let s = r.solution.unwrap();
        assert!((s.witness.elbow - Vec3::new(2.5607, 0.4393, -1.5)).norm() < 1e-4);
        assert!((s.elbow.to_degrees() - 120.0).abs() < 1e-6);
        assert!((s.wrist_roll.unwrap().to_degrees() - 114.095).abs() < 1e-3);
        assert!((s.hand_flex.unwrap().to_degrees() - 148.60).abs() < 0.01);
        let d = r.diagnostics;
        assert_eq!(d.reachability, Some(Reachability::Reachable));
        assert!(d.circle.is_some() && d.feasible_arc.unwrap().is_full());
        assert_eq!(d.selected_t, Some(PI));
    }

    #[test]
    fn far_target_stops_early() {
        let req = SolveRequest::new(
            Target::Wrist {
                wrist: Vec3::new(10.0, 0.0, 0.0),
                tip: None,
            },
            ElbowPolicy::MidArc,
        );
        let r = solver().solve(&req);
        assert_eq!(
            r.status,
            SolveStatus::Infeasible {
                reason: Infeasible::TooFar
            }
        );
        assert!(r.solution.is_none());
        assert_eq!(r.diagnostics.reach, Some(10.0));
        assert!(r.diagnostics.circle.is_none());
        assert!(r.diagnostics.feasible_arc.is_none());
        assert!(r.diagnostics.selected_t.is_none());
    }

    #[test]
    fn close_and_origin_targets() {
        let s = Solver::new(
            ArmGeometry::new(3.0, 1.0, 1.0).unwrap(),
            JointLimits::default(),
        );
        let at = |w: Vec3| {
            s.solve(&SolveRequest::new(
                Target::Wrist {
                    wrist: w,
                    tip: None,
                },
                ElbowPolicy::MidArc,
            ))
        };
        assert_eq!(
            at(Vec3::new(1.0, 0.0, 0.0)).status,
            SolveStatus::Infeasible {
                reason: Infeasible::TooClose
            }
        );
        assert_eq!(
            at(Vec3::ZERO).status,
            SolveStatus::Infeasible {
                reason: Infeasible::WristAtShoulder
            }
        );
    }

    #[test]
    fn tangent_target_is_solved_with_note() {
        let r = solver().solve(&SolveRequest::new(
            Target::Wrist {
                wrist: Vec3::new(0.0, 0.0, -6.0),
                tip: Some(Vec3::new(0.0, 0.0, -7.0)),
            },
            ElbowPolicy::MidArc,
        ));
        assert_eq!(r.status, SolveStatus::Solved);
        assert!(!r.diagnostics.notes.is_empty());
        let s = r.solution.unwrap();
        assert!((s.witness.elbow - Vec3::new(0.0, 0.0, -3.0)).norm() < 1e-9);
        assert!(s.wrist_roll.is_none());
    }

    #[test]
    fn body_side_restricts_choice() {
        let s = solver();
        let r = s.solve(&wrist_request(ElbowPolicy::FixedT(0.1)).with_body(BodySide::Right));
        assert!(matches!(
            r.status,
            SolveStatus::Infeasible {
                reason: Infeasible::PolicyViolation { .. }
            }
        ));
        assert!(r.diagnostics.feasible_arc.is_some());
        let r = s.solve(&wrist_request(ElbowPolicy::MidArc).with_body(BodySide::Right));
        assert!((r.diagnostics.selected_t.unwrap() - PI).abs() < 1e-9);
        let r = s.solve(&wrist_request(ElbowPolicy::MidArc).with_body(BodySide::Left));
        let t = r.diagnostics.selected_t.unwrap();
        assert!(t < 1e-9 || (TAU - t) < 1e-9, "{t}");
    }

    #[test]
    fn selector_limit_shapes_arc() {
        let mut limits = JointLimits::default();
        limits.set(Joint::ArmRoll, Interval::new(0.0, 1.0)).unwrap();
        let s = Solver::new(solver().geometry, limits);
        let r = s.solve(&wrist_request(ElbowPolicy::MidArc));
        assert!((r.diagnostics.selected_t.unwrap() - 0.5).abs() < 1e-9);

        limits.set(Joint::ArmRoll, Interval::new(2.0, 3.0)).unwrap();
        let s = Solver::new(solver().geometry, limits);
        let r = s.solve(&wrist_request(ElbowPolicy::MidArc).with_body(BodySide::Left));
        assert_eq!(
            r.status,
            SolveStatus::Infeasible {
                reason: Infeasible::NoValidElbow
            }
        );
        assert!(r.diagnostics.feasible_arc.unwrap().is_empty());
        assert!(r.diagnostics.selected_t.is_none());
    }

    #[test]
    fn limits_are_reported_not_clamped() {
        let mut limits = JointLimits::default();
        limits.set(Joint::Elbow, Interval::new(0.0, 1.0)).unwrap();
        let r =
            Solver::new(solver().geometry, limits).solve(&wrist_request(ElbowPolicy::FixedT(PI)));
        let SolveStatus::OutOfLimits { violations } = r.status else {
            panic!("{:?}", r.status)
        };
        assert_eq!(violations.len(), 1);
        assert_eq!(violations[0].joint, Joint::Elbow);
        assert!((violations[0].value - 2.0 * PI / 3.0).abs() < 1e-9);
        assert!((r.solution.unwrap().elbow - 2.0 * PI / 3.0).abs() < 1e-9);
    }

    #[test]
    fn missing_hand_angles_skip_limit_checks() {
        let mut limits = JointLimits::default();
        limits
            .set(Joint::HandFlex, Interval::new(0.0, 0.1))
            .unwrap();
        let s = Solver::new(solver().geometry, limits);
        let req = SolveRequest::new(
            Target::Wrist {
                wrist: WRIST,
                tip: None,
            },
            ElbowPolicy::FixedT(PI),
        );
        let r = s.solve(&req);
        assert_eq!(r.status, SolveStatus::Solved);
        assert!(r.solution.unwrap().hand_flex.is_none());
    }

    #[test]
    fn nearest_recovers_current() {
        let s = solver();
        for t in [0.3, 2.0, 4.5, 6.1] {
            let current = s
                .solve(&wrist_request(ElbowPolicy::FixedT(t)))
                .solution
                .unwrap();
            let r = s.solve(&wrist_request(ElbowPolicy::NearestToCurrent).with_current(current));
            assert_eq!(r.status, SolveStatus::Solved);
            assert!((r.diagnostics.selected_t.unwrap() - t).abs() < 1e-6, "{t}");
        }
    }

    #[test]
    fn nearest_needs_current() {
        let r = solver().solve(&wrist_request(ElbowPolicy::NearestToCurrent));
        assert!(matches!(
            r.status,
            SolveStatus::Infeasible {
                reason: Infeasible::PolicyViolation { .. }
            }
        ));
    }

    #[test]
    fn select_elbow_minimises_cost() {
        let full = ArcSet::full();
        let t = select_elbow(
            &full,
            ElbowPolicy::NearestToCurrent,
            |t| ((t - 1.3).powi(2), true),
            64,
            1e-10,
        )
        .unwrap();
        assert!((t - 1.3).abs() < 1e-6);
        // samples within limits win over closer ones outside
        let t = select_elbow(
            &full,
            ElbowPolicy::NearestToCurrent,
            |t| ((t - 1.3).powi(2), t > 3.0),
            64,
            1e-10,
        )
        .unwrap();
        assert!(t > 3.0 && t < 3.2, "{t}");
        let wrapped = ArcSet::from_arc(3.0 * FRAC_PI_2, PI);
        let t = select_elbow(
            &wrapped,
            ElbowPolicy::NearestToCurrent,
            |t| ((t - 0.2).powi(2), true),
            64,
            1e-10,
        )
        .unwrap();
        assert!((t - 0.2).abs() < 1e-6, "{t}");
        assert!(select_elbow(
            &ArcSet::empty(),
            ElbowPolicy::MidArc,
            |_| (0.0, true),
            8,
            1e-9
        )
        .is_err());
    }

    #[test]
    fn sweep_covers_arc() {
        let reports = solver()
            .sweep(
                &Target::Wrist {
                    wrist: WRIST,
                    tip: Some(TIP),
                },
                Some(BodySide::Right),
                5,
            )
            .unwrap();
        let ts: Vec<f64> = reports
            .iter()
            .map(|r| r.diagnostics.selected_t.unwrap())
            .collect();
        for (t, want) in ts.iter().zip([0.5, 0.75, 1.0, 1.25, 1.5]) {
            assert!((t - want * PI).abs() < 1e-9, "{ts:?}");
        }
        assert!(reports.iter().all(|r| r.solution.is_some()));
        let far = solver().sweep(
            &Target::Wrist {
                wrist: Vec3::new(9.0, 0.0, 0.0),
                tip: None,
            },
            None,
            5,
        );
        assert!(far.is_err());
    }

    #[test]
    fn pose_target_decouples() {
        let pose = TargetPose::new(Vec3::new(3.0, 4.0, -1.0), FRAC_PI_2, FRAC_PI_2);
        let r = solver().solve(&SolveRequest::new(Target::Pose(pose), ElbowPolicy::MidArc));
        assert_eq!(
            r.diagnostics
                .wrist
                .map(|w| (w - Vec3::new(3.0, 5.0, -1.0)).norm() < 1e-12),
            Some(true)
        );
    }

    #[test]
    fn report_json_round_trip() {
        let r = solver().solve(&wrist_request(ElbowPolicy::FixedT(PI)).with_body(BodySide::Right));
        let json = serde_json::to_string(&r).unwrap();
        let back: SolveReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back.status, r.status);
        let (a, b) = (back.solution.unwrap(), r.solution.unwrap());
        assert!((a.elbow - b.elbow).abs() < 1e-12);
        assert_eq!(a.branch, b.branch);
    }

    #[test]
    fn joint_distance_wraps_roll() {
        let s = solver();
        let a = s
            .solve(&wrist_request(ElbowPolicy::FixedT(0.05)))
            .solution
            .unwrap();
        let mut b = a.clone();
        b.arm_roll = TAU - 0.05;
        assert!((joint_distance2(&a, &b) - 0.01).abs() < 1e-12);
    }
}

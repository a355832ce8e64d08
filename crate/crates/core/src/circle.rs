//! The redundancy circle: every elbow position that joins a shoulder sphere
//! of radius `d1` to a wrist sphere of radius `d2`.
//!
//! The circle lies in the plane obtained by subtracting the two sphere
//! equations. Its in-plane frame is built from the wrist vector `v1 = 2m`:
//! `a1` swaps and negates the horizontal components of `v1`, and
//! `b1 = a1 × v1`. Points are parametrised as
//! `center + r·cos(t)·a + r·sin(t)·b`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::arm::{ArmGeometry, Interval};
use crate::error::{IkError, Result};
use crate::geom::{Plane, Vec3, ZERO_TOL};

/// Distance tolerance for the tangent (single-point) classification.
pub const TANGENT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reachability {
    Reachable,
    /// Spheres touch in a single point: fully stretched or fully folded arm.
    TangentPoint,
    TooFar,
    TooClose,
    WristAtShoulder,
}

impl Reachability {
    pub fn has_elbow(self) -> bool {
        matches!(self, Reachability::Reachable | Reachability::TangentPoint)
    }
}

pub fn reachability(wrist: Vec3, geom: &ArmGeometry) -> Reachability {
    let m = wrist.norm();
    if m < ZERO_TOL {
        return Reachability::WristAtShoulder;
    }
    let (max, min) = (geom.max_reach(), geom.min_reach());
    if (m - max).abs() <= TANGENT_TOL || (m - min).abs() <= TANGENT_TOL {
        Reachability::TangentPoint
    } else if m > max {
        Reachability::TooFar
    } else if m < min {
        Reachability::TooClose
    } else {
        Reachability::Reachable
    }
}

fn require_offset_wrist(wrist: Vec3) -> Result<()> {
    if wrist.is_zero() {
        return Err(IkError::DegenerateInput(
            "wrist coincides with the shoulder".into(),
        ));
    }
    Ok(())
}

/// Plane `2a·x + 2b·y + 2c·z = a² + b² + c² + d1² - d2²` shared by both spheres.
pub fn intersection_plane(wrist: Vec3, geom: &ArmGeometry) -> Result<Plane> {
    require_offset_wrist(wrist)?;
    let (d1, d2) = (geom.upper_arm, geom.forearm);
    Plane::new(wrist * 2.0, wrist.norm_squared() + d1 * d1 - d2 * d2)
}

/// Orthonormal in-plane frame `(a, b)` for the circle around `wrist`.
///
/// When the wrist lies on the Z axis the swap-negate construction yields the
/// zero vector; the frame then falls back to `a = X`, `b = X × ŵ`.
pub fn circle_frame(wrist: Vec3) -> Result<(Vec3, Vec3)> {
    require_offset_wrist(wrist)?;
    let v1 = wrist * 2.0;
    let a1 = Vec3::new(-v1.y, v1.x, 0.0);
    if a1.is_zero() {
        let a = Vec3::X;
        return Ok((a, a.cross(v1.normalize()?)));
    }
    let b1 = a1.cross(v1);
    Ok((a1.normalize()?, b1.normalize()?))
}

/// Circle centre `β·m` where the shoulder/wrist line meets the plane.
pub fn circle_center(wrist: Vec3, geom: &ArmGeometry) -> Result<(Vec3, f64)> {
    require_offset_wrist(wrist)?;
    let (d1, d2) = (geom.upper_arm, geom.forearm);
    let m2 = wrist.norm_squared();
    let beta = (d1 * d1 - d2 * d2 + m2) / (2.0 * m2);
    Ok((wrist * beta, beta))
}

/// Circle radius `√(d1² - |center|²)`.
pub fn circle_radius(center: Vec3, geom: &ArmGeometry) -> Result<f64> {
    let d1 = geom.upper_arm;
    let d = center.norm();
    if d > d1 + TANGENT_TOL {
        return Err(IkError::InternalInconsistency(format!(
            "circle centre at distance {d} lies outside the upper-arm sphere (radius {d1})"
        )));
    }
    Ok((d1 * d1 - d * d).max(0.0).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RedundancyCircle {
    pub wrist: Vec3,
    pub center: Vec3,
    pub radius: f64,
    pub basis_a: Vec3,
    pub basis_b: Vec3,
    pub plane: Plane,
    pub beta: f64,
    pub feasible_arc: ArcSet,
}

impl RedundancyCircle {
    /// Builds the circle for a wrist that passed [`reachability`]. The
    /// feasible arc starts out as the full turn.
    pub fn new(wrist: Vec3, geom: &ArmGeometry) -> Result<Self> {
        let class = reachability(wrist, geom);
        if !class.has_elbow() {
            return Err(IkError::DegenerateInput(format!(
                "no elbow circle for wrist {wrist}: {class:?}"
            )));
        }
        let plane = intersection_plane(wrist, geom)?;
        let (basis_a, basis_b) = circle_frame(wrist)?;
        let (center, beta) = circle_center(wrist, geom)?;
        let radius = circle_radius(center, geom)?;
        Ok(RedundancyCircle {
            wrist,
            center,
            radius,
            basis_a,
            basis_b,
            plane,
            beta,
            feasible_arc: ArcSet::full(),
        })
    }

    pub fn point_at(&self, t: f64) -> Vec3 {
        self.center
            + self.basis_a * (self.radius * t.cos())
            + self.basis_b * (self.radius * t.sin())
    }
}

/// One arc `[start, end]` of the circle parameter; `start ∈ [0, 2π)` and
/// `end` may exceed `2π` when the arc wraps through zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub start: f64,
    pub end: f64,
}

impl Arc {
    pub fn length(&self) -> f64 {
        self.end - self.start
    }

    pub fn midpoint(&self) -> f64 {
        wrap_upper(0.5 * (self.start + self.end))
    }
}

/// Maps into `[0, 2π]`, keeping an exact `2π` rather than folding it to 0.
fn wrap_upper(t: f64) -> f64 {
    if !(0.0..=TAU).contains(&t) {
        t.rem_euclid(TAU)
    } else {
        t
    }
}

const ARC_TOL: f64 = 1e-9;

/// A subset of the circle parameter range, kept as disjoint pieces of
/// `[0, 2π]` sorted by start.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "Vec<Arc>", from = "Vec<Arc>")]
pub struct ArcSet {
    pieces: Vec<(f64, f64)>,
}

impl From<ArcSet> for Vec<Arc> {
    fn from(set: ArcSet) -> Self {
        set.arcs()
    }
}

impl From<Vec<Arc>> for ArcSet {
    fn from(arcs: Vec<Arc>) -> Self {
        arcs.into_iter()
            .map(|a| ArcSet::from_arc(a.start, a.length()))
            .fold(ArcSet::empty(), |acc, s| acc.union(&s))
    }
}

impl ArcSet {
    pub fn full() -> Self {
        ArcSet {
            pieces: vec![(0.0, TAU)],
        }
    }

    pub fn empty() -> Self {
        ArcSet { pieces: Vec::new() }
    }

    /// Arc of `length` starting at `start` (any real), wrapping if needed.
    pub fn from_arc(start: f64, length: f64) -> Self {
        if length >= TAU {
            return Self::full();
        }
        if length < 0.0 || !start.is_finite() {
            return Self::empty();
        }
        let s = start.rem_euclid(TAU);
        let e = s + length;
        if e <= TAU {
            ArcSet {
                pieces: vec![(s, e)],
            }
        } else {
            ArcSet {
                pieces: vec![(0.0, e - TAU), (s, TAU)],
            }
        }
    }

    pub fn from_interval(range: Interval) -> Self {
        Self::from_arc(range.lo, range.width())
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.pieces.len() == 1 && self.pieces[0].0 <= 0.0 && self.pieces[0].1 >= TAU
    }

    pub fn length(&self) -> f64 {
        self.pieces.iter().map(|(a, b)| b - a).sum()
    }

    /// Contiguous arcs, merging pieces that meet across `t = 0`.
    pub fn arcs(&self) -> Vec<Arc> {
        let mut arcs: Vec<Arc> = self
            .pieces
            .iter()
            .map(|&(start, end)| Arc { start, end })
            .collect();
        if arcs.len() >= 2 {
            let first = arcs[0];
            let last = arcs[arcs.len() - 1];
            if first.start <= 0.0 && last.end >= TAU {
                arcs.remove(0);
                let n = arcs.len();
                arcs[n - 1].end = TAU + first.end;
            }
        }
        arcs
    }

    pub fn contains(&self, t: f64) -> bool {
        let t = t.rem_euclid(TAU);
        [t, t - TAU, t + TAU].into_iter().any(|u| {
            self.pieces
                .iter()
                .any(|&(a, b)| a - ARC_TOL <= u && u <= b + ARC_TOL)
        })
    }

    pub fn intersect(&self, other: &ArcSet) -> ArcSet {
        let mut pieces = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.pieces.len() && j < other.pieces.len() {
            let (a0, a1) = self.pieces[i];
            let (b0, b1) = other.pieces[j];
            let lo = a0.max(b0);
            let hi = a1.min(b1);
            if lo <= hi {
                pieces.push((lo, hi));
            }
            if a1 < b1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        ArcSet { pieces }
    }

    pub fn union(&self, other: &ArcSet) -> ArcSet {
        let mut all: Vec<(f64, f64)> = self.pieces.iter().chain(&other.pieces).copied().collect();
        all.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut pieces: Vec<(f64, f64)> = Vec::with_capacity(all.len());
        for (a, b) in all {
            match pieces.last_mut() {
                Some(last) if a <= last.1 => last.1 = last.1.max(b),
                _ => pieces.push((a, b)),
            }
        }
        ArcSet { pieces }
    }

    /// Midpoint of the longest arc.
    pub fn midpoint(&self) -> Option<f64> {
        self.arcs()
            .into_iter()
            .max_by(|x, y| x.length().total_cmp(&y.length()))
            .map(|a| a.midpoint())
    }

    /// `n` parameters spread evenly along the set by arc length, both ends
    /// included.
    pub fn sample(&self, n: usize) -> Vec<f64> {
        let arcs = self.arcs();
        let total: f64 = arcs.iter().map(Arc::length).sum();
        if arcs.is_empty() || n == 0 {
            return Vec::new();
        }
        if n == 1 {
            return vec![arcs[0].start];
        }
        (0..n)
            .map(|i| {
                let mut u = total * i as f64 / (n - 1) as f64;
                for (k, arc) in arcs.iter().enumerate() {
                    if u <= arc.length() || k == arcs.len() - 1 {
                        return wrap_upper(arc.start + u.min(arc.length()));
                    }
                    u -= arc.length();
                }
                unreachable!()
            })
            .collect()
    }
}

/// A restriction on where the elbow may sit along the circle.
pub trait ArcConstraint {
    fn admissible(&self, circle: &RedundancyCircle) -> ArcSet;
}

/// Keeps elbows with `elbow · normal >= 0`: a half-space bounded by a plane
/// through the shoulder.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfSpace {
    pub normal: Vec3,
}

impl ArcConstraint for HalfSpace {
    fn admissible(&self, circle: &RedundancyCircle) -> ArcSet {
        // elbow(t)·n = p + q cos t + s sin t = p + R cos(t - φ)
        let n = self.normal;
        let p = circle.center.dot(n);
        let q = circle.radius * circle.basis_a.dot(n);
        let s = circle.radius * circle.basis_b.dot(n);
        let amp = q.hypot(s);
        let scale = n.norm() * (circle.center.norm() + circle.radius).max(1.0);
        if amp <= 1e-12 * scale {
            return if p >= -1e-12 * scale {
                ArcSet::full()
            } else {
                ArcSet::empty()
            };
        }
        let k = -p / amp;
        if k <= -1.0 {
            return ArcSet::full();
        }
        if k > 1.0 {
            return ArcSet::empty();
        }
        let phase = s.atan2(q);
        let half = k.acos();
        ArcSet::from_arc(phase - half, 2.0 * half)
    }
}

/// Body-collision model: the elbow must stay on the outer side of the
/// vertical plane through the shoulder and the wrist. For a right arm the
/// admissible side is the one with `t ∈ [π/2, 3π/2]`; `Left` mirrors it.
///
/// A wrist on the Z axis leaves the plane undefined and nothing is excluded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BodySide {
    Right,
    Left,
}

impl BodySide {
    pub fn half_space(self, wrist: Vec3) -> HalfSpace {
        let outward = Vec3::new(wrist.y, -wrist.x, 0.0);
        HalfSpace {
            normal: match self {
                BodySide::Right => outward,
                BodySide::Left => -outward,
            },
        }
    }
}

impl ArcConstraint for BodySide {
    fn admissible(&self, circle: &RedundancyCircle) -> ArcSet {
        self.half_space(circle.wrist).admissible(circle)
    }
}

/// Limits the circle parameter itself to an interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectorRange(pub Interval);

impl ArcConstraint for SelectorRange {
    fn admissible(&self, _circle: &RedundancyCircle) -> ArcSet {
        ArcSet::from_interval(self.0)
    }
}

/// Arbitrary pointwise predicate on `t`, resolved by sampling at
/// `resolution` evenly spaced parameters and bisecting each sign change.
/// Admissible windows narrower than the sample spacing can be missed.
pub struct Predicate<F> {
    pub resolution: usize,
    pub test: F,
}

impl<F: Fn(f64) -> bool> ArcConstraint for Predicate<F> {
    fn admissible(&self, _circle: &RedundancyCircle) -> ArcSet {
        let n = self.resolution.max(3);
        let step = TAU / n as f64;
        let ok: Vec<bool> = (0..n).map(|i| (self.test)(i as f64 * step)).collect();
        if ok.iter().all(|&b| b) {
            return ArcSet::full();
        }
        if !ok.iter().any(|&b| b) {
            return ArcSet::empty();
        }
        // boundary between sample i and i+1, refined by bisection
        let edge = |i: usize| {
            let (mut lo, mut hi) = (i as f64 * step, (i + 1) as f64 * step);
            let lo_ok = ok[i];
            while hi - lo > 1e-10 {
                let mid = 0.5 * (lo + hi);
                if (self.test)(mid) == lo_ok {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            if lo_ok {
                lo
            } else {
                hi
            }
        };
        let rises: Vec<usize> = (0..n).filter(|&i| !ok[i] && ok[(i + 1) % n]).collect();
        let mut set = ArcSet::empty();
        for r in rises {
            let start = edge(r);
            let mut k = (r + 1) % n;
            while ok[(k + 1) % n] {
                k = (k + 1) % n;
            }
            let mut end = edge(k);
            if end < start {
                end += TAU;
            }
            set = set.union(&ArcSet::from_arc(start, end - start));
        }
        set
    }
}

/// Parameters of `circle` admitted by every constraint.
pub fn feasible_arc(circle: &RedundancyCircle, constraints: &[&dyn ArcConstraint]) -> ArcSet {
    constraints.iter().fold(ArcSet::full(), |acc, c| {
        acc.intersect(&c.admissible(circle))
    })
}

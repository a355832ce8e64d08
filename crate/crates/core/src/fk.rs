//! Forward kinematics written against the solver's own angle conventions.
//! It rebuilds elbow, wrist and tip from a [`JointSolution`] without
//! looking at the witness points, so a round trip checks the inverse.
//!
//! The wrist is recovered from the redundancy-circle parametrisation: for a
//! wrist direction `u = (cos φ sin ψ, sin φ sin ψ, cos ψ)` the circle frame
//! is the local spherical frame, so the elbow reads
//! `E = h·u + r·cos t·φ̂ + r·sin t·ψ̂`. Given `E`, `h`, `r` and `t` this is
//! solved for `ψ` (two roots, picked by the branch flag) and then `φ`.
//!
//! The map is singular when the elbow sits on the Z axis (shoulder azimuth
//! undefined).

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::arm::ArmGeometry;
use crate::decouple::spherical_direction;
use crate::error::{IkError, Result};
use crate::geom::{Vec3, ZERO_TOL};
use crate::solution::{Branch, JointSolution};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FkPose {
    pub elbow: Vec3,
    pub wrist: Vec3,
    pub tip: Option<Vec3>,
}

/// Elbow position from the two shoulder angles and their sign flags.
pub fn elbow_point(tilt: f64, azimuth: f64, branch: Branch, upper_arm: f64) -> Vec3 {
    let sz = if branch.elbow_raised { 1.0 } else { -1.0 };
    let sy = if branch.azimuth_negative { -1.0 } else { 1.0 };
    Vec3::new(
        tilt.sin() * azimuth.cos(),
        sy * tilt.sin() * azimuth.sin(),
        sz * tilt.cos(),
    ) * upper_arm
}

/// Centre height `h` along the wrist direction and circle radius for a
/// wrist at distance `reach`.
fn circle_dims(reach: f64, geom: &ArmGeometry) -> (f64, f64) {
    let (d1, d2) = (geom.upper_arm, geom.forearm);
    let h = (d1 * d1 - d2 * d2 + reach * reach) / (2.0 * reach);
    (h, (d1 * d1 - h * h).max(0.0).sqrt())
}

/// The two candidate polar angles of the wrist direction.
fn polar_roots(elbow: Vec3, h: f64, r: f64, t: f64) -> (f64, f64) {
    // E_z = h cos ψ - r sin t sin ψ
    let (a, b) = (h, -r * t.sin());
    let rho = a.hypot(b);
    let ratio = if rho < 1e-15 {
        0.0
    } else {
        (elbow.z / rho).clamp(-1.0, 1.0)
    };
    let base = b.atan2(a);
    let delta = ratio.acos();
    (base + delta, base - delta)
}

fn angular_gap(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Branch flag selecting the root that reproduces `wrist`.
pub fn wrist_root(elbow: Vec3, wrist: Vec3, t: f64, geom: &ArmGeometry) -> bool {
    let reach = wrist.norm();
    if reach < ZERO_TOL {
        return true;
    }
    let (h, r) = circle_dims(reach, geom);
    let (upper, lower) = polar_roots(elbow, h, r, t);
    let psi = (wrist.z / reach).clamp(-1.0, 1.0).acos();
    angular_gap(psi, upper) <= angular_gap(psi, lower)
}

pub fn forward(solution: &JointSolution, geom: &ArmGeometry) -> Result<FkPose> {
    let angles = [
        solution.shoulder_tilt,
        solution.shoulder_azimuth,
        solution.arm_roll,
        solution.elbow,
    ];
    if angles.iter().any(|a| !a.is_finite()) {
        return Err(IkError::DegenerateInput("non-finite joint angle".into()));
    }
    let (d1, d2) = (geom.upper_arm, geom.forearm);
    let branch = solution.branch;
    let elbow = elbow_point(
        solution.shoulder_tilt,
        solution.shoulder_azimuth,
        branch,
        d1,
    );

    let reach2 = d1 * d1 + d2 * d2 - 2.0 * d1 * d2 * solution.elbow.cos();
    let reach = reach2.max(0.0).sqrt();
    let wrist = if reach < ZERO_TOL {
        Vec3::ZERO
    } else {
        let t = solution.arm_roll;
        let (h, r) = circle_dims(reach, geom);
        let (upper, lower) = polar_roots(elbow, h, r, t);
        let psi = if branch.wrist_upper_root {
            upper
        } else {
            lower
        };
        // E_x + i E_y = e^{iφ} (P + iQ)
        let p = h * psi.sin() + r * t.sin() * psi.cos();
        let q = r * t.cos();
        let phi = elbow.y.atan2(elbow.x) - q.atan2(p);
        Vec3::new(phi.cos() * psi.sin(), phi.sin() * psi.sin(), psi.cos()) * reach
    };

    let tip = solution
        .hand_direction
        .map(|h| wrist - spherical_direction(h.polar, h.azimuth) * geom.hand);
    Ok(FkPose { elbow, wrist, tip })
}

//! Joint-angle extraction from a chosen elbow point: shoulder tilt and
//! azimuth, the interior elbow angle, the wrist roll and the hand flex.

use serde::{Deserialize, Serialize};

use crate::arm::ArmGeometry;
use crate::circle::RedundancyCircle;
use crate::error::{IkError, Result};
use crate::geom::{
    clamp_unit, line_plane_angle, vector_angle, AngleMode, Line3, Plane, Vec3, ZERO_TOL,
};

/// How far an elbow may sit off the upper-arm sphere before the shoulder
/// stage refuses it.
pub const ON_SPHERE_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShoulderAngles {
    /// Tilt from the Z axis, `arcsin(catCodo_z / d1)`, in `[0, π/2]`.
    pub tilt: f64,
    /// Azimuth from the X axis in the XY plane, `arccos(x / hip_xy)`, in `[0, π]`.
    pub azimuth: f64,
    /// Distance of the elbow from the Z axis computed from its height.
    pub cat_codo_z: f64,
    /// Same distance computed from the horizontal components.
    pub hip_xy: f64,
    /// Elbow above the shoulder (`z > 0`); the tilt alone cannot tell.
    pub elbow_raised: bool,
    /// Elbow on the `y < 0` side; the azimuth alone cannot tell.
    pub azimuth_negative: bool,
}

pub fn shoulder_angles(elbow: Vec3, geom: &ArmGeometry) -> Result<ShoulderAngles> {
    let d1 = geom.upper_arm;
    if (elbow.norm() - d1).abs() > ON_SPHERE_TOL {
        return Err(IkError::InternalInconsistency(format!(
            "elbow {elbow} is not on the upper-arm sphere of radius {d1}"
        )));
    }
    if elbow.z.abs() > d1 + ON_SPHERE_TOL {
        return Err(IkError::InternalInconsistency(format!(
            "elbow height {} exceeds the upper-arm length {d1}",
            elbow.z
        )));
    }
    let cat_codo_z = (d1 * d1 - elbow.z * elbow.z).max(0.0).sqrt();
    let tilt = clamp_unit(cat_codo_z / d1, "shoulder tilt")?.asin();
    let hip_xy = elbow.x.hypot(elbow.y);
    // azimuth is undefined on the Z axis; report 0 there
    let azimuth = if hip_xy < ZERO_TOL {
        0.0
    } else {
        clamp_unit(elbow.x / hip_xy, "shoulder azimuth")?.acos()
    };
    Ok(ShoulderAngles {
        tilt,
        azimuth,
        cat_codo_z,
        hip_xy,
        elbow_raised: elbow.z > 0.0,
        azimuth_negative: elbow.y < 0.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElbowAngle {
    /// Interior angle at the elbow between the upper arm and the forearm.
    pub angle: f64,
    /// Part of the angle on the upper-arm side of the centre line (angCodo_1).
    pub upper_part: f64,
    /// Part of the angle on the forearm side (angCodo_2).
    pub fore_part: f64,
    /// Distance from the circle centre to the wrist (catAntebrazo).
    pub cat_forearm: f64,
    /// Distance from the shoulder to the circle centre (catBrazo).
    pub cat_upper: f64,
}

/// Interior elbow angle from the two right triangles that share the
/// elbow-to-centre leg.
///
/// With the centre between shoulder and wrist the two parts add. When the
/// centre falls outside that segment (`β < 0` or `β > 1`, possible with
/// unequal links) the part on the far side enters with a negative sign.
pub fn elbow_angle(
    wrist: Vec3,
    circle: &RedundancyCircle,
    geom: &ArmGeometry,
) -> Result<ElbowAngle> {
    let (d1, d2) = (geom.upper_arm, geom.forearm);
    let cat_forearm = wrist.distance(circle.center);
    let cat_upper = circle.center.norm();
    let mut upper_part = clamp_unit(cat_upper / d1, "elbow upper triangle")?.asin();
    let mut fore_part = clamp_unit(cat_forearm / d2, "elbow forearm triangle")?.asin();
    if circle.beta < 0.0 {
        upper_part = -upper_part;
    }
    if circle.beta > 1.0 {
        fore_part = -fore_part;
    }
    Ok(ElbowAngle {
        angle: upper_part + fore_part,
        upper_part,
        fore_part,
        cat_forearm,
        cat_upper,
    })
}

/// Plane through shoulder, elbow and circle centre; the hand-flex servo
/// moves perpendicular to it.
pub fn hand_plane(shoulder: Vec3, elbow: Vec3, circle_center: Vec3) -> Result<Plane> {
    Plane::from_points(shoulder, elbow, circle_center).map_err(|_| IkError::DegenerateHandPlane)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WristRoll {
    /// Angle between the hand line and the hand plane, in `[0, π/2]`.
    pub alpha: f64,
    /// Servo command: mounting offset plus `alpha`.
    pub total: f64,
}

pub fn wrist_roll(
    tip: Vec3,
    wrist: Vec3,
    plane: &Plane,
    mounting_offset: f64,
) -> Result<WristRoll> {
    if tip.distance(wrist) < ZERO_TOL {
        return Err(IkError::DegenerateInput(
            "tip coincides with the wrist".into(),
        ));
    }
    let hand_line = Line3::through(tip, wrist)?;
    let alpha = line_plane_angle(&hand_line, plane)?;
    Ok(WristRoll {
        alpha,
        total: mounting_offset + alpha,
    })
}

/// Angle at the wrist between the forearm (towards the elbow) and the hand
/// (towards the tip), in `[0, π]`.
pub fn hand_flex(elbow: Vec3, wrist: Vec3, tip: Vec3) -> Result<f64> {
    vector_angle(elbow - wrist, tip - wrist, AngleMode::Signed)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HandAngles {
    pub plane: Plane,
    pub roll: WristRoll,
    pub flex: f64,
}

pub fn hand_angles(
    elbow: Vec3,
    circle: &RedundancyCircle,
    tip: Vec3,
    geom: &ArmGeometry,
) -> Result<HandAngles> {
    let plane = hand_plane(geom.shoulder(), elbow, circle.center)?;
    let roll = wrist_roll(tip, circle.wrist, &plane, geom.wrist_roll_offset)?;
    let flex = hand_flex(elbow, circle.wrist, tip)?;
    Ok(HandAngles { plane, roll, flex })
}

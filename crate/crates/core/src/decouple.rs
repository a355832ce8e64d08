//! Kinematic decoupling: the wrist point follows from the tip position and
//! the hand orientation alone, independent of the rest of the arm.

use serde::{Deserialize, Serialize};

use crate::arm::{ArmGeometry, TargetPose};
use crate::error::{IkError, Result};
use crate::geom::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WristPoint {
    pub point: Vec3,
    pub source: TargetPose,
}

/// Unit direction with the given polar (from +Z) and azimuth (from +X) angles.
pub fn spherical_direction(polar: f64, azimuth: f64) -> Vec3 {
    Vec3::new(
        polar.sin() * azimuth.cos(),
        polar.sin() * azimuth.sin(),
        polar.cos(),
    )
}

/// Polar and azimuth angles of `v`, the inverse of [`spherical_direction`].
pub fn direction_angles(v: Vec3) -> Result<(f64, f64)> {
    let u = v.normalize()?;
    Ok((u.z.clamp(-1.0, 1.0).acos(), u.y.atan2(u.x)))
}

/// Wrist point at `hand_length` from the tip along the hand orientation.
///
/// The formulas are total: orientation angles outside the servo ranges are
/// accepted here and caught by limit validation later.
pub fn wrist_point(target: &TargetPose, hand_length: f64) -> Result<WristPoint> {
    if !(target.tip.is_finite()
        && target.hand_polar.is_finite()
        && target.hand_azimuth.is_finite()
        && hand_length.is_finite())
    {
        return Err(IkError::DegenerateInput(
            "target pose has non-finite components".into(),
        ));
    }
    let dir = spherical_direction(target.hand_polar, target.hand_azimuth);
    Ok(WristPoint {
        point: target.tip + dir * hand_length,
        source: *target,
    })
}

pub fn wrist_from_target(target: &TargetPose, geom: &ArmGeometry) -> Result<WristPoint> {
    wrist_point(target, geom.hand)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    fn close(a: Vec3, b: Vec3) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn examples() {
        let tip = Vec3::new(3.0, 4.0, -3.0);
        let w = wrist_point(&TargetPose::new(tip, 0.0, 0.0), 2.0).unwrap();
        assert_eq!(w.point, Vec3::new(3.0, 4.0, -1.0));

        let w = wrist_point(&TargetPose::new(Vec3::ZERO, 1.2, 0.3), 0.0).unwrap();
        assert_eq!(w.point, Vec3::ZERO);

        let w = wrist_point(&TargetPose::new(tip, FRAC_PI_2, 0.0), 2.0).unwrap();
        assert!(close(w.point, Vec3::new(5.0, 4.0, -3.0)));
    }

    #[test]
    fn rejects_non_finite() {
        let t = TargetPose::new(Vec3::new(f64::NAN, 0.0, 0.0), 0.0, 0.0);
        assert!(matches!(
            wrist_point(&t, 1.0),
            Err(IkError::DegenerateInput(_))
        ));
        let t = TargetPose::new(Vec3::ZERO, f64::INFINITY, 0.0);
        assert!(wrist_point(&t, 1.0).is_err());
    }

    #[test]
    fn direction_angles_invert_spherical_direction() {
        let (p, a) = direction_angles(spherical_direction(1.1, 0.4)).unwrap();
        assert!((p - 1.1).abs() < 1e-12 && (a - 0.4).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn wrist_lies_on_hand_sphere(
            x in -5.0f64..5.0, y in -5.0f64..5.0, z in -5.0f64..5.0,
            polar in -7.0f64..7.0, azimuth in -7.0f64..7.0, len in 0.1f64..5.0,
        ) {
            let tip = Vec3::new(x, y, z);
            let w = wrist_point(&TargetPose::new(tip, polar, azimuth), len).unwrap();
            let r2 = (w.point - tip).norm_squared();
            prop_assert!((r2 - len * len).abs() <= 1e-12 * len * len * 10.0);
        }

        #[test]
        fn zero_polar_points_straight_up(azimuth in 0.0f64..TAU, len in 0.1f64..5.0) {
            let tip = Vec3::new(1.0, -2.0, 0.5);
            let w = wrist_point(&TargetPose::new(tip, 0.0, azimuth), len).unwrap();
            prop_assert!(close(w.point - tip, Vec3::new(0.0, 0.0, len)));
        }

        #[test]
        fn azimuth_sweep_traces_a_latitude(polar in 0.0f64..PI, a1 in 0.0f64..TAU, a2 in 0.0f64..TAU) {
            let tip = Vec3::new(3.0, 4.0, -3.0);
            let p1 = wrist_point(&TargetPose::new(tip, polar, a1), 2.0).unwrap().point - tip;
            let p2 = wrist_point(&TargetPose::new(tip, polar, a2), 2.0).unwrap().point - tip;
            prop_assert!((p1.z - p2.z).abs() < 1e-12);
            prop_assert!((p1.x.hypot(p1.y) - p2.x.hypot(p2.y)).abs() < 1e-12);
        }
    }
}

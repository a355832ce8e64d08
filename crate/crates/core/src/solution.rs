use serde::{Deserialize, Serialize};

use crate::arm::Joint;
use crate::circle::RedundancyCircle;
use crate::geom::Vec3;

/// Sign information that the arcsin/arccos extractions drop. Together with
/// the angles it makes the forward map a function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Branch {
    /// Elbow above the shoulder. Default: hanging.
    pub elbow_raised: bool,
    /// Elbow on the `y < 0` side of the XZ plane.
    pub azimuth_negative: bool,
    /// Which of the two wrist directions compatible with the elbow, the
    /// elbow angle and `t` was taken.
    pub wrist_upper_root: bool,
}

/// Hand orientation as polar/azimuth angles of the tip-to-wrist direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HandDirection {
    pub polar: f64,
    pub azimuth: f64,
}

/// Intermediate points that justify a solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub wrist: Vec3,
    pub elbow: Vec3,
    pub tip: Option<Vec3>,
    pub circle: RedundancyCircle,
    /// Line/plane angle behind the wrist roll.
    pub roll_alpha: Option<f64>,
}

/// The seven joint angles (radians) of one arm posture.
///
/// `wrist_roll` and `hand_flex` are absent when no tip was given. The roll
/// is also absent when the hand plane is undefined (straight or folded arm),
/// in which case any roll reaches the tip.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointSolution {
    pub shoulder_tilt: f64,
    pub shoulder_azimuth: f64,
    /// Circle parameter `t` selecting the elbow.
    pub arm_roll: f64,
    pub elbow: f64,
    pub wrist_roll: Option<f64>,
    pub hand_flex: Option<f64>,
    pub gripper: f64,
    pub branch: Branch,
    pub hand_direction: Option<HandDirection>,
    pub witness: Witness,
}

impl JointSolution {
    pub fn angle(&self, joint: Joint) -> Option<f64> {
        match joint {
            Joint::ShoulderTilt => Some(self.shoulder_tilt),
            Joint::ShoulderAzimuth => Some(self.shoulder_azimuth),
            Joint::ArmRoll => Some(self.arm_roll),
            Joint::Elbow => Some(self.elbow),
            Joint::WristRoll => self.wrist_roll,
            Joint::HandFlex => self.hand_flex,
            Joint::Gripper => Some(self.gripper),
        }
    }

    pub fn angles(&self) -> [(Joint, Option<f64>); 7] {
        Joint::ALL.map(|j| (j, self.angle(j)))
    }
}

//! Arm geometry, joint limits and the configuration document they load from.
//!
//! ```toml
//! d1 = 3.0          # upper arm, shoulder -> elbow
//! d2 = 3.0          # forearm, elbow -> wrist
//! long_mano = 2.0   # hand, wrist -> tip
//!
//! [limits]
//! codo = [0.0, 2.4]
//! ```

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ConfigError;
use crate::geom::Vec3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArmGeometry {
    /// Upper-arm length (shoulder to elbow).
    pub upper_arm: f64,
    /// Forearm length (elbow to wrist).
    pub forearm: f64,
    /// Hand length (wrist to tip).
    pub hand: f64,
    /// Rest offset of the wrist-roll servo added to the measured line/plane
    /// angle. Defaults to π/2.
    pub wrist_roll_offset: f64,
}

impl ArmGeometry {
    pub fn new(upper_arm: f64, forearm: f64, hand: f64) -> Result<Self, ConfigError> {
        let geom = ArmGeometry {
            upper_arm,
            forearm,
            hand,
            wrist_roll_offset: FRAC_PI_2,
        };
        geom.validate()?;
        Ok(geom)
    }

    /// The shoulder is the origin of the solver frame.
    pub fn shoulder(&self) -> Vec3 {
        Vec3::ZERO
    }

    pub fn max_reach(&self) -> f64 {
        self.upper_arm + self.forearm
    }

    pub fn min_reach(&self) -> f64 {
        (self.upper_arm - self.forearm).abs()
    }

    fn validate(&self) -> Result<(), ConfigError> {
        for (key, value) in [
            ("d1", self.upper_arm),
            ("d2", self.forearm),
            ("long_mano", self.hand),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(ConfigError::invalid(key, format!("{key} must be > 0")));
            }
        }
        if !self.wrist_roll_offset.is_finite() {
            return Err(ConfigError::invalid(
                "wrist_roll_offset",
                "wrist_roll_offset must be finite",
            ));
        }
        Ok(())
    }
}

/// The seven joints of the arm, in chain order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Joint {
    /// Shoulder tilt measured from the Z axis.
    ShoulderTilt,
    /// Shoulder azimuth measured from the X axis in the XY plane.
    ShoulderAzimuth,
    /// Upper-arm roll, carried as the redundancy-circle parameter `t`.
    ArmRoll,
    /// Interior elbow angle.
    Elbow,
    WristRoll,
    HandFlex,
    /// Never solved; passed through unchanged.
    Gripper,
}

impl Joint {
    pub const ALL: [Joint; 7] = [
        Joint::ShoulderTilt,
        Joint::ShoulderAzimuth,
        Joint::ArmRoll,
        Joint::Elbow,
        Joint::WristRoll,
        Joint::HandFlex,
        Joint::Gripper,
    ];

    /// Key used in configuration files and output columns.
    pub fn key(self) -> &'static str {
        match self {
            Joint::ShoulderTilt => "hombro_z",
            Joint::ShoulderAzimuth => "hombro_x",
            Joint::ArmRoll => "brazo_t",
            Joint::Elbow => "codo",
            Joint::WristRoll => "muneca",
            Joint::HandFlex => "mano",
            Joint::Gripper => "pinza",
        }
    }

    pub fn from_key(key: &str) -> Option<Joint> {
        Joint::ALL.into_iter().find(|j| j.key() == key)
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Joint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// Closed interval `[lo, hi]` in radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Interval { lo, hi }
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointLimits {
    ranges: [Interval; 7],
}

impl JointLimits {
    /// Servo range used for every joint that is not configured.
    pub const SERVO_RANGE: Interval = Interval::new(0.0, PI);
    /// The arm-roll selector is a circle parameter and spans the full turn.
    pub const SELECTOR_RANGE: Interval = Interval::new(0.0, TAU);

    pub fn default_for(joint: Joint) -> Interval {
        match joint {
            Joint::ArmRoll => Self::SELECTOR_RANGE,
            _ => Self::SERVO_RANGE,
        }
    }

    pub fn get(&self, joint: Joint) -> Interval {
        self.ranges[joint.index()]
    }

    pub fn set(&mut self, joint: Joint, range: Interval) -> Result<(), ConfigError> {
        let key = format!("limits.{}", joint.key());
        if !(range.lo.is_finite() && range.hi.is_finite()) {
            return Err(ConfigError::invalid(key, "bounds must be finite"));
        }
        if range.lo > range.hi {
            return Err(ConfigError::invalid(key, "lower bound exceeds upper bound"));
        }
        if range.width() > TAU {
            return Err(ConfigError::invalid(key, "interval wider than 2π"));
        }
        self.ranges[joint.index()] = range;
        Ok(())
    }
}

impl Default for JointLimits {
    fn default() -> Self {
        let mut ranges = [Self::SERVO_RANGE; 7];
        for j in Joint::ALL {
            ranges[j.index()] = Self::default_for(j);
        }
        JointLimits { ranges }
    }
}

/// Desired hand-tip position plus the hand orientation in spherical angles.
///
/// `hand_polar` (ang_muneca) is measured from +Z, `hand_azimuth` (ang_mano)
/// from +X; both describe the direction from the tip back to the wrist.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TargetPose {
    pub tip: Vec3,
    pub hand_polar: f64,
    pub hand_azimuth: f64,
}

impl TargetPose {
    pub fn new(tip: Vec3, hand_polar: f64, hand_azimuth: f64) -> Self {
        TargetPose {
            tip,
            hand_polar,
            hand_azimuth,
        }
    }
}

/// Geometry and limits loaded together from one document.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArmConfig {
    pub geometry: ArmGeometry,
    pub limits: JointLimits,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    d1: Option<f64>,
    d2: Option<f64>,
    long_mano: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    wrist_roll_offset: Option<f64>,
    #[serde(default)]
    limits: BTreeMap<String, [f64; 2]>,
}

impl ArmConfig {
    pub fn from_toml_str(doc: &str) -> Result<Self, ConfigError> {
        let raw: RawConfig = toml::from_str(doc).map_err(|e| ConfigError::Parse(e.to_string()))?;
        let need = |v: Option<f64>, key: &str| v.ok_or_else(|| ConfigError::Missing(key.into()));
        let mut geometry = ArmGeometry {
            upper_arm: need(raw.d1, "d1")?,
            forearm: need(raw.d2, "d2")?,
            hand: need(raw.long_mano, "long_mano")?,
            wrist_roll_offset: FRAC_PI_2,
        };
        if let Some(offset) = raw.wrist_roll_offset {
            geometry.wrist_roll_offset = offset;
        }
        geometry.validate()?;

        let mut limits = JointLimits::default();
        for (key, [lo, hi]) in raw.limits {
            let joint = Joint::from_key(&key)
                .ok_or_else(|| ConfigError::invalid(format!("limits.{key}"), "unknown joint"))?;
            limits.set(joint, Interval::new(lo, hi))?;
        }
        Ok(ArmConfig { geometry, limits })
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self, ConfigError> {
        let path = path.as_ref();
        let doc = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Parse(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&doc)
    }

    /// Serialise back to a document that [`ArmConfig::from_toml_str`] accepts.
    /// Every limit is written out explicitly.
    pub fn to_toml_string(&self) -> String {
        let raw = RawConfig {
            d1: Some(self.geometry.upper_arm),
            d2: Some(self.geometry.forearm),
            long_mano: Some(self.geometry.hand),
            wrist_roll_offset: Some(self.geometry.wrist_roll_offset),
            limits: Joint::ALL
                .iter()
                .map(|j| {
                    let r = self.limits.get(*j);
                    (j.key().to_string(), [r.lo, r.hi])
                })
                .collect(),
        };
        toml::to_string(&raw).expect("config serialises")
    }
}

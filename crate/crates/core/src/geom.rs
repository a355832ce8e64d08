//! Minimal 3D primitives: vectors, planes, lines and the handful of
//! constructions the solver needs (cross products, plane through three
//! points, line/plane and vector/vector angles).
//!
//! Angles are always radians. Planes keep their unnormalised normal so the
//! coefficients produced by a construction can be compared literally.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{IkError, Result};

/// A vector is treated as zero below this norm (arm-link units).
pub const ZERO_TOL: f64 = 1e-9;

/// Clamp slack for arcsin/arccos arguments that spill past ±1 by rounding.
pub const RATIO_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);
    pub const X: Vec3 = Vec3::new(1.0, 0.0, 0.0);
    pub const Y: Vec3 = Vec3::new(0.0, 1.0, 0.0);
    pub const Z: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn distance(self, other: Vec3) -> f64 {
        (self - other).norm()
    }

    pub fn is_zero(self) -> bool {
        self.norm() < ZERO_TOL
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Unit vector parallel to `self`.
    pub fn normalize(self) -> Result<Vec3> {
        let n = self.norm();
        if n < ZERO_TOL {
            return Err(IkError::DegenerateInput(format!(
                "cannot normalise near-zero vector {self}"
            )));
        }
        Ok(self / n)
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(a: [f64; 3]) -> Self {
        Vec3::new(a[0], a[1], a[2])
    }
}

impl fmt::Display for Vec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

/// The plane `normal · p = offset`. The normal is not normalised.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Plane {
    pub normal: Vec3,
    pub offset: f64,
}

impl Plane {
    pub fn new(normal: Vec3, offset: f64) -> Result<Self> {
        if normal.is_zero() {
            return Err(IkError::DegenerateInput("plane normal is zero".into()));
        }
        Ok(Plane { normal, offset })
    }

    /// Plane through three points with normal `(p2 - p1) × (p3 - p1)`.
    pub fn from_points(p1: Vec3, p2: Vec3, p3: Vec3) -> Result<Self> {
        let normal = (p2 - p1).cross(p3 - p1);
        if normal.is_zero() {
            return Err(IkError::DegenerateInput(format!(
                "points {p1}, {p2}, {p3} are collinear"
            )));
        }
        Ok(Plane {
            normal,
            offset: normal.dot(p1),
        })
    }

    /// `normal · p - offset`; zero on the plane.
    pub fn residual(&self, p: Vec3) -> f64 {
        self.normal.dot(p) - self.offset
    }

    pub fn signed_distance(&self, p: Vec3) -> f64 {
        self.residual(p) / self.normal.norm()
    }

    /// Same plane with a unit normal.
    pub fn normalized(&self) -> Plane {
        let n = self.normal.norm();
        Plane {
            normal: self.normal / n,
            offset: self.offset / n,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Line3 {
    pub origin: Vec3,
    pub direction: Vec3,
}

impl Line3 {
    pub fn new(origin: Vec3, direction: Vec3) -> Result<Self> {
        if direction.is_zero() {
            return Err(IkError::DegenerateInput("line direction is zero".into()));
        }
        Ok(Line3 { origin, direction })
    }

    pub fn through(a: Vec3, b: Vec3) -> Result<Self> {
        Line3::new(a, b - a)
    }

    pub fn point_at(&self, s: f64) -> Vec3 {
        self.origin + self.direction * s
    }
}

/// Clamp a ratio fed to arcsin/arccos into [-1, 1], tolerating rounding
/// spill up to [`RATIO_SLACK`].
pub fn clamp_unit(ratio: f64, what: &str) -> Result<f64> {
    if !ratio.is_finite() || ratio.abs() > 1.0 + RATIO_SLACK {
        return Err(IkError::InternalInconsistency(format!(
            "{what}: ratio {ratio} outside [-1, 1]"
        )));
    }
    Ok(ratio.clamp(-1.0, 1.0))
}

/// Angle between a line and a plane, in `[0, π/2]`.
///
/// Computed as `arcsin(|d·n| / (|d||n|))`, the complement of the angle
/// between the direction and the plane normal.
pub fn line_plane_angle(line: &Line3, plane: &Plane) -> Result<f64> {
    let d = line.direction;
    let n = plane.normal;
    if d.is_zero() || n.is_zero() {
        return Err(IkError::DegenerateInput(
            "line direction or plane normal is zero".into(),
        ));
    }
    let ratio = d.dot(n).abs() / (d.norm() * n.norm());
    Ok(clamp_unit(ratio, "line/plane angle")?.asin())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AngleMode {
    /// `arccos(u·v / |u||v|)` in `[0, π]`.
    Signed,
    /// `arccos(|u·v| / |u||v|)` in `[0, π/2]`.
    Unsigned,
}

pub fn vector_angle(u: Vec3, v: Vec3, mode: AngleMode) -> Result<f64> {
    if u.is_zero() || v.is_zero() {
        return Err(IkError::DegenerateInput(
            "angle between vectors with a zero operand".into(),
        ));
    }
    let mut ratio = u.dot(v) / (u.norm() * v.norm());
    if mode == AngleMode::Unsigned {
        ratio = ratio.abs();
    }
    Ok(clamp_unit(ratio, "vector angle")?.acos())
}

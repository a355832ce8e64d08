//! Closed-form inverse kinematics for a seven-joint arm with a spherical
//! shoulder.
//!
//! The tip target is decoupled into a wrist point, the elbow is confined to
//! the circle where the upper-arm and forearm spheres meet, and the joint
//! angles are read off geometrically once an elbow on that circle is chosen.
//!
//! ```
//! use armik_core::{ArmGeometry, ElbowPolicy, JointLimits, SolveRequest, Solver, Target, Vec3};
//!
//! let geom = ArmGeometry::new(3.0, 3.0, 1.0).unwrap();
//! let solver = Solver::new(geom, JointLimits::default());
//! let request = SolveRequest::new(
//!     Target::Wrist { wrist: Vec3::new(3.0, 3.0, -3.0), tip: None },
//!     ElbowPolicy::FixedT(std::f64::consts::PI),
//! );
//! let report = solver.solve(&request);
//! let elbow = report.solution.unwrap().witness.elbow;
//! assert!((elbow.x - 2.5607).abs() < 1e-4);
//! ```

pub mod angles;
pub mod arm;
pub mod circle;
pub mod decouple;
pub mod error;
pub mod fk;
pub mod geom;
pub mod solution;
pub mod solver;

pub use arm::{ArmConfig, ArmGeometry, Interval, Joint, JointLimits, TargetPose};
pub use circle::{Arc, ArcConstraint, ArcSet, BodySide, HalfSpace, Reachability, RedundancyCircle};
pub use error::{ConfigError, IkError};
pub use fk::{forward, FkPose};
pub use geom::{Line3, Plane, Vec3};
pub use solution::{Branch, HandDirection, JointSolution, Witness};
pub use solver::{
    solve, validate_limits, Diagnostics, ElbowPolicy, Infeasible, LimitViolation, SolveReport,
    SolveRequest, SolveStatus, Solver, SolverOptions, Target,
};

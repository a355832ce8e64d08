//! Flat CSV rows for batch input, batch output and sweeps.

use armik_core::{
    ElbowPolicy, Infeasible, Joint, SolveReport, SolveStatus, Target, TargetPose, Vec3,
};
use serde::{Deserialize, Serialize};

/// One input row. Either `wrist_*` (optionally with `tip_*`) or `tip_*`
/// plus both hand angles must be filled in.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BatchRecord {
    pub id: String,
    pub tip_x: Option<f64>,
    pub tip_y: Option<f64>,
    pub tip_z: Option<f64>,
    pub ang_muneca: Option<f64>,
    pub ang_mano: Option<f64>,
    pub wrist_x: Option<f64>,
    pub wrist_y: Option<f64>,
    pub wrist_z: Option<f64>,
    /// `fixed`, `mid` or `nearest`; empty means the command-line default.
    #[serde(default)]
    pub policy: Option<String>,
    #[serde(default)]
    pub elbow_t: Option<f64>,
}

fn triple(
    x: Option<f64>,
    y: Option<f64>,
    z: Option<f64>,
    what: &str,
) -> Result<Option<Vec3>, String> {
    match (x, y, z) {
        (Some(x), Some(y), Some(z)) => Ok(Some(Vec3::new(x, y, z))),
        (None, None, None) => Ok(None),
        _ => Err(format!("{what} needs all three coordinates")),
    }
}

impl BatchRecord {
    pub fn target(&self) -> Result<Target, String> {
        let tip = triple(self.tip_x, self.tip_y, self.tip_z, "tip")?;
        let wrist = triple(self.wrist_x, self.wrist_y, self.wrist_z, "wrist")?;
        let angles = match (self.ang_muneca, self.ang_mano) {
            (Some(p), Some(a)) => Some((p, a)),
            (None, None) => None,
            _ => return Err("ang_muneca and ang_mano go together".into()),
        };
        match (wrist, tip, angles) {
            (Some(_), _, Some(_)) => Err("give either a wrist or hand angles, not both".into()),
            (Some(wrist), tip, None) => Ok(Target::Wrist { wrist, tip }),
            (None, Some(tip), Some((p, a))) => Ok(Target::Pose(TargetPose::new(tip, p, a))),
            (None, _, _) => Err("row has no wrist and no complete tip pose".into()),
        }
    }

    pub fn policy(&self, default: ElbowPolicy) -> Result<ElbowPolicy, String> {
        parse_policy(self.policy.as_deref(), self.elbow_t, default)
    }
}

pub fn parse_policy(
    name: Option<&str>,
    t: Option<f64>,
    default: ElbowPolicy,
) -> Result<ElbowPolicy, String> {
    match (name.map(str::trim).filter(|s| !s.is_empty()), t) {
        (None, None) => Ok(default),
        (None | Some("fixed"), Some(t)) => Ok(ElbowPolicy::FixedT(t)),
        (Some("fixed"), None) => Err("fixed policy needs elbow_t".into()),
        (Some("mid"), None) => Ok(ElbowPolicy::MidArc),
        (Some("nearest"), None) => Ok(ElbowPolicy::NearestToCurrent),
        (Some(p @ ("mid" | "nearest")), Some(_)) => Err(format!(
            "elbow_t is only valid with the fixed policy, not {p}"
        )),
        (Some(other), _) => Err(format!("unknown policy {other:?}")),
    }
}

/// One output row. Angles appear twice: `_rad` for machines, `_deg` for
/// people.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SolutionRow {
    pub id: String,
    pub status: String,
    pub message: String,
    pub t: Option<f64>,
    pub hombro_z_rad: Option<f64>,
    pub hombro_z_deg: Option<f64>,
    pub hombro_x_rad: Option<f64>,
    pub hombro_x_deg: Option<f64>,
    pub brazo_t_rad: Option<f64>,
    pub brazo_t_deg: Option<f64>,
    pub codo_rad: Option<f64>,
    pub codo_deg: Option<f64>,
    pub muneca_rad: Option<f64>,
    pub muneca_deg: Option<f64>,
    pub mano_rad: Option<f64>,
    pub mano_deg: Option<f64>,
    pub pinza_rad: Option<f64>,
    pub pinza_deg: Option<f64>,
    pub wrist_x: Option<f64>,
    pub wrist_y: Option<f64>,
    pub wrist_z: Option<f64>,
    pub elbow_x: Option<f64>,
    pub elbow_y: Option<f64>,
    pub elbow_z: Option<f64>,
    pub tip_x: Option<f64>,
    pub tip_y: Option<f64>,
    pub tip_z: Option<f64>,
}

pub fn status_name(status: &SolveStatus) -> &'static str {
    match status {
        SolveStatus::Solved => "Solved",
        SolveStatus::OutOfLimits { .. } => "OutOfLimits",
        SolveStatus::Infeasible { reason } => match reason {
            Infeasible::TooFar => "TooFar",
            Infeasible::TooClose => "TooClose",
            Infeasible::WristAtShoulder => "WristAtShoulder",
            Infeasible::NoValidElbow => "NoValidElbow",
            Infeasible::PolicyViolation { .. } => "PolicyViolation",
            Infeasible::Degenerate { .. } => "Degenerate",
        },
    }
}

fn status_message(status: &SolveStatus) -> String {
    match status {
        SolveStatus::Infeasible {
            reason: Infeasible::PolicyViolation { message } | Infeasible::Degenerate { message },
        } => message.clone(),
        SolveStatus::OutOfLimits { violations } => violations
            .iter()
            .map(|v| {
                format!(
                    "{}={:.4} not in [{}, {}]",
                    v.joint, v.value, v.range.lo, v.range.hi
                )
            })
            .collect::<Vec<_>>()
            .join("; "),
        _ => String::new(),
    }
}

impl SolutionRow {
    pub fn parse_error(id: String, message: String) -> Self {
        SolutionRow {
            id,
            status: "ParseError".into(),
            message,
            ..Default::default()
        }
    }

    pub fn from_report(id: String, report: &SolveReport) -> Self {
        let mut row = SolutionRow {
            id,
            status: status_name(&report.status).into(),
            message: status_message(&report.status),
            t: report.diagnostics.selected_t,
            ..Default::default()
        };
        if let Some(w) = report.diagnostics.wrist {
            (row.wrist_x, row.wrist_y, row.wrist_z) = (Some(w.x), Some(w.y), Some(w.z));
        }
        let Some(s) = &report.solution else {
            return row;
        };
        let e = s.witness.elbow;
        (row.elbow_x, row.elbow_y, row.elbow_z) = (Some(e.x), Some(e.y), Some(e.z));
        if let Some(p) = s.witness.tip {
            (row.tip_x, row.tip_y, row.tip_z) = (Some(p.x), Some(p.y), Some(p.z));
        }
        for joint in Joint::ALL {
            let rad = s.angle(joint);
            let deg = rad.map(f64::to_degrees);
            let (r, d) = match joint {
                Joint::ShoulderTilt => (&mut row.hombro_z_rad, &mut row.hombro_z_deg),
                Joint::ShoulderAzimuth => (&mut row.hombro_x_rad, &mut row.hombro_x_deg),
                Joint::ArmRoll => (&mut row.brazo_t_rad, &mut row.brazo_t_deg),
                Joint::Elbow => (&mut row.codo_rad, &mut row.codo_deg),
                Joint::WristRoll => (&mut row.muneca_rad, &mut row.muneca_deg),
                Joint::HandFlex => (&mut row.mano_rad, &mut row.mano_deg),
                Joint::Gripper => (&mut row.pinza_rad, &mut row.pinza_deg),
            };
            (*r, *d) = (rad, deg);
        }
        row
    }
}

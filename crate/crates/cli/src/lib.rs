//! `armik`: solve single targets, CSV batches and redundancy-circle sweeps.
//!
//! Exit codes: 0 solved, 2 infeasible or out of limits, 1 usage or
//! configuration error.

pub mod rows;

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use armik_core::{
    ArmConfig, BodySide, ElbowPolicy, JointSolution, SolveReport, SolveRequest, Solver, Target,
    TargetPose, Vec3,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use rows::{BatchRecord, SolutionRow};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "armik",
    version,
    about = "Closed-form inverse kinematics for a 7-joint arm"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one target and print the report as JSON.
    Solve(SolveArgs),
    /// Solve every row of a CSV file.
    Batch(BatchArgs),
    /// Sample the feasible elbow arc of one target.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Fixed,
    Mid,
    Nearest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum ConstraintArg {
    #[default]
    None,
    RightBody,
    LeftBody,
}

impl ConstraintArg {
    fn body(self) -> Option<BodySide> {
        match self {
            ConstraintArg::None => None,
            ConstraintArg::RightBody => Some(BodySide::Right),
            ConstraintArg::LeftBody => Some(BodySide::Left),
        }
    }
}

fn parse_vec3(s: &str) -> Result<Vec3, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [x, y, z] = parts.as_slice() else {
        return Err(format!("expected x,y,z, got {s:?}"));
    };
    let num = |v: &str| v.parse::<f64>().map_err(|e| format!("{v:?}: {e}"));
    Ok(Vec3::new(num(x)?, num(y)?, num(z)?))
}

#[derive(Debug, Args)]
pub struct GeometryArgs {
    /// Arm configuration file (TOML).
    #[arg(long, value_name = "PATH")]
    pub geometry: PathBuf,
}

#[derive(Debug, Args)]
pub struct TargetArgs {
    /// Wrist point, skipping the hand decoupling.
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
    pub wrist: Option<Vec3>,
    /// Tip point. With --wrist it only feeds the hand angles.
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
    pub tip: Option<Vec3>,
    /// Hand polar angle from +Z (radians).
    #[arg(long, allow_hyphen_values = true)]
    pub ang_muneca: Option<f64>,
    /// Hand azimuth from +X (radians).
    #[arg(long, allow_hyphen_values = true)]
    pub ang_mano: Option<f64>,
    #[arg(long, value_enum, default_value_t)]
    pub constraints: ConstraintArg,
}

impl TargetArgs {
    fn target(&self) -> anyhow::Result<Target> {
        match (self.wrist, self.tip, self.ang_muneca, self.ang_mano) {
            (Some(_), _, Some(_), _) | (Some(_), _, _, Some(_)) => {
                bail!("--wrist cannot be combined with --ang-muneca/--ang-mano")
            }
            (Some(wrist), tip, None, None) => Ok(Target::Wrist { wrist, tip }),
            (None, Some(tip), Some(p), Some(a)) => Ok(Target::Pose(TargetPose::new(tip, p, a))),
            _ => bail!("give --wrist, or --tip with --ang-muneca and --ang-mano"),
        }
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub geometry: GeometryArgs,
    #[command(flatten)]
    pub target: TargetArgs,
    /// Circle parameter of the elbow; implies the fixed policy.
    #[arg(long, allow_hyphen_values = true)]
    pub elbow_t: Option<f64>,
    #[arg(long, value_enum)]
    pub policy: Option<PolicyArg>,
    /// Previous report (or bare solution) JSON for the nearest policy.
    #[arg(long, value_name = "PATH")]
    pub current: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BatchArgs {
    #[command(flatten)]
    pub geometry: GeometryArgs,
    /// Input CSV with a header row.
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Policy for rows that do not name one.
    #[arg(long, value_enum, default_value = "mid")]
    pub policy: PolicyArg,
    #[arg(long, value_enum, default_value_t)]
    pub constraints: ConstraintArg,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub geometry: GeometryArgs,
    #[command(flatten)]
    pub target: TargetArgs,
    #[arg(long, default_value_t = 37)]
    pub samples: usize,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

fn solver_for(args: &GeometryArgs) -> anyhow::Result<Solver> {
    let cfg = ArmConfig::load(&args.geometry)
        .with_context(|| format!("loading {}", args.geometry.display()))?;
    Ok(Solver::new(cfg.geometry, cfg.limits))
}

fn exit_for(report: &SolveReport) -> i32 {
    if report.is_solved() {
        EXIT_OK
    } else {
        EXIT_INFEASIBLE
    }
}

fn read_current(path: &Path) -> anyhow::Result<JointSolution> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if let Ok(report) = serde_json::from_str::<SolveReport>(&text) {
        return report
            .solution
            .with_context(|| format!("{} holds no solution", path.display()));
    }
    serde_json::from_str(&text)
        .with_context(|| format!("{} is neither a report nor a solution", path.display()))
}

fn open_out<'a>(
    path: Option<&Path>,
    stdout: &'a mut dyn Write,
) -> anyhow::Result<Box<dyn Write + 'a>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(stdout),
    })
}

fn cmd_solve(args: &SolveArgs, stdout: &mut dyn Write) -> anyhow::Result<i32> {
    let solver = solver_for(&args.geometry)?;
    let target = args.target.target()?;
    let policy = match (args.policy, args.elbow_t) {
        (None | Some(PolicyArg::Fixed), Some(t)) => ElbowPolicy::FixedT(t),
        (Some(PolicyArg::Fixed), None) => bail!("--policy fixed needs --elbow-t"),
        (Some(p), Some(_)) => bail!("--elbow-t only goes with --policy fixed, not {p:?}"),
        (None | Some(PolicyArg::Mid), None) => ElbowPolicy::MidArc,
        (Some(PolicyArg::Nearest), None) => ElbowPolicy::NearestToCurrent,
    };
    let mut request = SolveRequest::new(target, policy);
    request.body = args.target.constraints.body();
    if let Some(path) = &args.current {
        request.current = Some(read_current(path)?);
    } else if policy == ElbowPolicy::NearestToCurrent {
        bail!("--policy nearest needs --current");
    }

    let report = solver.solve(&request);
    let mut out = open_out(args.out.as_deref(), stdout)?;
    serde_json::to_writer_pretty(&mut out, &report)?;
    writeln!(out)?;
    Ok(exit_for(&report))
}

fn cmd_batch(args: &BatchArgs, stdout: &mut dyn Write) -> anyhow::Result<i32> {
    let solver = solver_for(&args.geometry)?;
    let default_policy = match args.policy {
        PolicyArg::Fixed => bail!("batch --policy fixed needs an elbow_t column instead"),
        PolicyArg::Mid => ElbowPolicy::MidArc,
        PolicyArg::Nearest => ElbowPolicy::NearestToCurrent,
    };
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(&args.input)
        .with_context(|| format!("opening {}", args.input.display()))?;
    let headers = reader.headers().context("reading header row")?.clone();
    let id_col = headers.iter().position(|h| h == "id");

    let mut parsed = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let parsed_row = match record {
            Ok(rec) => {
                let id = id_col
                    .and_then(|c| rec.get(c))
                    .unwrap_or_default()
                    .to_string();
                rec.deserialize::<BatchRecord>(Some(&headers))
                    .map_err(|e| (id, e.to_string()))
            }
            Err(e) if e.is_io_error() => return Err(e).context("reading batch input"),
            Err(e) => Err((format!("row{}", i + 1), e.to_string())),
        };
        parsed.push(parsed_row);
    }

    let rows: Vec<SolutionRow> = parsed
        .into_par_iter()
        .map(|p| {
            let rec = match p {
                Ok(rec) => rec,
                Err((id, msg)) => return SolutionRow::parse_error(id, msg),
            };
            let request = rec
                .target()
                .and_then(|t| Ok(SolveRequest::new(t, rec.policy(default_policy)?)));
            match request {
                Ok(mut req) => {
                    req.body = args.constraints.body();
                    SolutionRow::from_report(rec.id, &solver.solve(&req))
                }
                Err(msg) => SolutionRow::parse_error(rec.id, msg),
            }
        })
        .collect();

    write_rows(open_out(args.out.as_deref(), stdout)?, &rows)?;
    Ok(EXIT_OK)
}

fn cmd_sweep(
    args: &SweepArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> anyhow::Result<i32> {
    if args.samples < 2 {
        bail!("--samples must be at least 2");
    }
    let solver = solver_for(&args.geometry)?;
    let target = args.target.target()?;
    match solver.sweep(&target, args.target.constraints.body(), args.samples) {
        Ok(reports) => {
            let rows: Vec<SolutionRow> = reports
                .iter()
                .enumerate()
                .map(|(i, r)| SolutionRow::from_report(i.to_string(), r))
                .collect();
            write_rows(open_out(args.out.as_deref(), stdout)?, &rows)?;
            Ok(EXIT_OK)
        }
        Err(report) => {
            writeln!(
                stderr,
                "armik: no elbow arc to sweep: {}",
                rows::status_name(&report.status)
            )?;
            Ok(EXIT_INFEASIBLE)
        }
    }
}

fn write_rows(mut out: impl Write, rows: &[SolutionRow]) -> anyhow::Result<()> {
    if rows.is_empty() {
        // header only
        let mut probe = csv::Writer::from_writer(Vec::new());
        probe.serialize(SolutionRow::default())?;
        let bytes = probe.into_inner().map_err(|e| anyhow::anyhow!("{e}"))?;
        let end = bytes
            .iter()
            .position(|&b| b == b'\n')
            .map_or(bytes.len(), |i| i + 1);
        out.write_all(&bytes[..end])?;
        return Ok(());
    }
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let informational =
                matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion);
            let text = e.render().to_string();
            let sink: &mut dyn Write = if informational { stdout } else { stderr };
            let _ = sink.write_all(text.as_bytes());
            return if informational { EXIT_OK } else { EXIT_USAGE };
        }
    };
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a, stdout),
        Command::Batch(a) => cmd_batch(a, stdout),
        Command::Sweep(a) => cmd_sweep(a, stdout, stderr),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "armik: {e:#}");
            EXIT_USAGE
        }
    }
}

/// Entry point used by the binary.
pub fn main_exit() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

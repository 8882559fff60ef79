//! The `decomp` command line.
//!
//! Exit codes: 0 on success, 1 for computation-domain errors (for example
//! `n < 3` for Θ), 2 for input and parse errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::error::{DomainError, Error, GroupError};
use crate::group::{Group, GroupSpec};
use crate::montecarlo::{
    bisect_crossing, locate_crossing, sweep, window_k_values, Simulator, SweepCurve, SweepSettings, Variant,
};
use crate::oracle::{self, SharedAxis};
use crate::rational::ExactJson;
use crate::structure::commute_probability;
use crate::suen::{self, Intersections};
use crate::theta::{critical_size_for, solve_theta_with, theta_bounds, SolveOptions};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "decomp", version, about = "Random decompositions AB ∪ BA = G of finite groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build and validate a group; print its order and class structure.
    Group(GroupArgs),
    /// Solve for Θ(G) and evaluate its bounds.
    Theta(ThetaArgs),
    /// Monte Carlo sweep of P(G, k) over a range of k.
    Sweep(SweepArgs),
    /// Exact moments and Suen bounds on Pr[x ∉ AB ∪ BA].
    Suen(SuenArgs),
    /// Exact values by exhaustive enumeration on tiny instances.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
}

#[derive(Debug, Args)]
pub struct SpecArg {
    /// Group spec: cyclic:m, dihedral:m, symmetric:m, product:(spec),(spec), table:<path>.
    #[arg(long)]
    pub spec: String,
}

#[derive(Debug, Args)]
pub struct OutputArg {
    /// Write the result here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GroupArgs {
    #[command(flatten)]
    pub spec: SpecArg,
    /// Include per-element centralizer sizes and class sizes.
    #[arg(long)]
    pub full: bool,
    #[command(flatten)]
    pub output: OutputArg,
}

#[derive(Debug, Args)]
pub struct ThetaArgs {
    #[command(flatten)]
    pub spec: SpecArg,
    /// Stop once |f(Θ)| is at most this.
    #[arg(long, default_value_t = 1e-10)]
    pub residual_tol: f64,
    /// Stop once the bisection bracket is at most this wide.
    #[arg(long, default_value_t = 1e-12)]
    pub width_tol: f64,
    #[arg(long, default_value_t = 60)]
    pub max_iter: u32,
    #[command(flatten)]
    pub output: OutputArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Both,
    AbOnly,
    Aa,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Both => Variant::Both,
            VariantArg::AbOnly => Variant::AbOnly,
            VariantArg::Aa => Variant::Aa,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepMode {
    /// Every k in kmin..=kmax at the given step.
    Grid,
    /// Bisection in k between kmin and kmax.
    Bisect,
    /// Step-1 sweep over the predicted critical size ± √n.
    Window,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub spec: SpecArg,
    #[arg(long)]
    pub kmin: Option<usize>,
    #[arg(long)]
    pub kmax: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub step: usize,
    #[arg(long, default_value_t = 400)]
    pub trials: u64,
    /// Master seed; drawn from system entropy (and reported) when absent.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = VariantArg::Both)]
    pub variant: VariantArg,
    /// B gets m = round(m_ratio · k) draws.
    #[arg(long, default_value_t = 1.0)]
    pub m_ratio: f64,
    /// Worker threads; never affects results.
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long, value_enum, default_value_t = SweepMode::Grid)]
    pub mode: SweepMode,
    /// Per-probe trial ceiling for bisect mode.
    #[arg(long, default_value_t = 25_600)]
    pub max_trials: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(flatten)]
    pub output: OutputArg,
    /// Where to write run metadata JSON for CSV output (standard error if absent).
    #[arg(long)]
    pub metadata: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SuenArgs {
    #[command(flatten)]
    pub spec: SpecArg,
    #[arg(long)]
    pub k: u64,
    #[arg(long)]
    pub element: usize,
    #[command(flatten)]
    pub output: OutputArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AxisArg {
    Row,
    Column,
}

#[derive(Debug, Subcommand)]
pub enum OracleCommand {
    /// Exact P(G, k) by enumerating all n^(k+m) draws.
    ExactP(OracleDrawArgs),
    /// Exact distribution of |S| over all draws.
    MissDistribution(OracleDrawArgs),
    /// Exact E[I_v(x)] over all n^2 pairs.
    SingleMean {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        element: usize,
        #[command(flatten)]
        output: OutputArg,
    },
    /// Exact E[I_v(x) I_u(y)] over all n^3 triples.
    PairMean {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        x: usize,
        #[arg(long)]
        y: usize,
        #[arg(long, value_enum, default_value_t = AxisArg::Row)]
        axis: AxisArg,
        #[command(flatten)]
        output: OutputArg,
    },
}

#[derive(Debug, Args)]
pub struct OracleDrawArgs {
    #[command(flatten)]
    pub spec: SpecArg,
    #[arg(long)]
    pub k: usize,
    /// Draws for B; defaults to k.
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long, value_enum, default_value_t = VariantArg::Both)]
    pub variant: VariantArg,
    #[command(flatten)]
    pub output: OutputArg,
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Domain(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Input(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Domain(m) => m,
        }
    }
}

impl From<GroupError> for CliError {
    fn from(e: GroupError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<DomainError> for CliError {
    fn from(e: DomainError) -> Self {
        CliError::Domain(e.to_string())
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Group(e) => e.into(),
            Error::Domain(e) => e.into(),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Input(format!("I/O error: {e}"))
    }
}

type CliResult = Result<(), CliError>;

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{text}")
            } else {
                write!(stdout, "{text}")
            };
            return code;
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message());
            e.exit_code()
        }
    }
}

fn build(spec: &SpecArg) -> Result<(GroupSpec, Group), CliError> {
    let parsed: GroupSpec = spec.spec.parse()?;
    let group = parsed.build()?;
    Ok((parsed, group))
}

fn with_output(output: &OutputArg, stdout: &mut dyn Write, f: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> CliResult {
    match &output.output {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            f(&mut w)?;
            w.flush()?;
        }
        None => f(stdout)?,
    }
    Ok(())
}

fn emit_json(output: &OutputArg, stdout: &mut dyn Write, value: &impl Serialize) -> CliResult {
    with_output(output, stdout, |w| {
        serde_json::to_writer_pretty(&mut *w, value).map_err(io::Error::from)?;
        writeln!(w)
    })
}

fn execute(command: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult {
    match command {
        Command::Group(args) => cmd_group(args, stdout),
        Command::Theta(args) => cmd_theta(args, stdout),
        Command::Sweep(args) => cmd_sweep(args, stdout, stderr),
        Command::Suen(args) => cmd_suen(args, stdout),
        Command::Oracle { command } => cmd_oracle(command, stdout),
    }
}

fn cmd_group(args: GroupArgs, stdout: &mut dyn Write) -> CliResult {
    let (spec, group) = build(&args.spec)?;
    let validation = group.validate()?;
    let profile = group.profile();
    let sizes: Vec<_> = profile
        .distinct_sizes()
        .iter()
        .map(|&(size, count)| json!({"centralizer_size": size, "elements": count}))
        .collect();
    let mut out = json!({
        "spec": spec.to_string(),
        "order": group.order(),
        "backend": format!("{:?}", group.backend_kind()),
        "identity": group.identity(),
        "abelian": group.is_abelian(),
        "validation": validation,
        "R": profile.class_count(),
        "center_size": profile.center_size(),
        "centralizer_size_counts": sizes,
        "commute_probability": ExactJson::from(&commute_probability(&group)),
    });
    if args.full {
        out["profile"] = serde_json::to_value(profile).map_err(io::Error::from)?;
    }
    emit_json(&args.output, stdout, &out)
}

fn cmd_theta(args: ThetaArgs, stdout: &mut dyn Write) -> CliResult {
    let (spec, group) = build(&args.spec)?;
    let opts = SolveOptions {
        residual_tol: args.residual_tol,
        width_tol: args.width_tol,
        max_iterations: args.max_iter,
    };
    let result = solve_theta_with(group.profile(), opts)?;
    let bounds = theta_bounds(group.profile())?;
    let out = json!({
        "spec": spec.to_string(),
        "n": group.order(),
        "result": result,
        "bounds": bounds,
        "critical_size": critical_size_for(result.theta, group.order()),
    });
    emit_json(&args.output, stdout, &out)
}

#[derive(Serialize)]
struct SweepMetadata<'a> {
    version: &'static str,
    group_spec: String,
    variant: Variant,
    master_seed: u64,
    theta: Option<f64>,
    critical_prediction: Option<f64>,
    crossing_k: Option<f64>,
    crossing: &'a crate::montecarlo::Crossing,
    crossing_ratio: Option<f64>,
    mode: &'static str,
    config: serde_json::Value,
    warnings: &'a [String],
    #[serde(skip_serializing_if = "Option::is_none")]
    bisection: Option<serde_json::Value>,
}

fn cmd_sweep(args: SweepArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult {
    let (spec, group) = build(&args.spec)?;
    let seed = match args.seed {
        Some(s) => s,
        None => {
            let s = rand::random::<u64>();
            writeln!(stderr, "seed: {s}")?;
            s
        }
    };
    if args.step == 0 {
        return Err(CliError::Input("--step must be positive".into()));
    }
    let variant = Variant::from(args.variant);
    let mut settings = SweepSettings::new([], args.trials, seed);
    settings.variant = variant;
    settings.m_ratio = args.m_ratio;
    settings.workers = args.workers;

    let need_range = || -> Result<(usize, usize), CliError> {
        match (args.kmin, args.kmax) {
            (Some(lo), Some(hi)) if lo >= 1 && lo <= hi => Ok((lo, hi)),
            (Some(_), Some(_)) => Err(CliError::Input("need 1 <= kmin <= kmax".into())),
            _ => Err(CliError::Input("--kmin and --kmax are required for this mode".into())),
        }
    };

    let mode_name;
    let mut bisection = None;
    let curve: SweepCurve = match args.mode {
        SweepMode::Grid => {
            mode_name = "grid";
            let (lo, hi) = need_range()?;
            settings.k_values = (lo..=hi).step_by(args.step).collect();
            writeln!(stderr, "sweeping {} values of k on {spec}", settings.k_values.len())?;
            sweep(&group, &settings)?
        }
        SweepMode::Window => {
            mode_name = "window";
            let probe = sweep(&group, &SweepSettings { k_values: vec![1], trials_per_k: 1, ..settings.clone() })?;
            let prediction = probe
                .critical_prediction
                .ok_or(DomainError::OrderTooSmall(group.order()))?;
            settings.k_values = window_k_values(prediction, group.order());
            writeln!(stderr, "sweeping {} values of k around {prediction:.2} on {spec}", settings.k_values.len())?;
            sweep(&group, &settings)?
        }
        SweepMode::Bisect => {
            mode_name = "bisect";
            let (lo, hi) = need_range()?;
            let mut sim = Simulator::new(&group, variant, seed);
            if let Some(w) = args.workers {
                sim = sim.with_workers(w)?;
            }
            let outcome = bisect_crossing(&sim, lo, hi, args.m_ratio, args.trials, args.max_trials)?;
            let probe = sweep(&group, &SweepSettings { k_values: vec![lo], trials_per_k: 1, ..settings.clone() })?;
            let mut points = outcome.evaluations.clone();
            points.sort_by_key(|p| (p.k, p.trials));
            // keep the largest batch per k
            points.dedup_by(|later, earlier| {
                if later.k == earlier.k {
                    *earlier = *later;
                    true
                } else {
                    false
                }
            });
            bisection = Some(json!({
                "below_k": outcome.below_k,
                "above_k": outcome.above_k,
                "resolved": outcome.resolved,
                "estimate": outcome.estimate(),
            }));
            SweepCurve {
                crossing: locate_crossing(&points),
                points,
                ..probe
            }
        }
    };

    let metadata = SweepMetadata {
        version: VERSION,
        group_spec: spec.to_string(),
        variant,
        master_seed: seed,
        theta: curve.theta,
        critical_prediction: curve.critical_prediction,
        crossing_k: curve.crossing_k(),
        crossing: &curve.crossing,
        crossing_ratio: curve.crossing_ratio(),
        mode: mode_name,
        config: json!({
            "kmin": args.kmin,
            "kmax": args.kmax,
            "step": args.step,
            "trials": args.trials,
            "m_ratio": args.m_ratio,
            "max_trials": args.max_trials,
            "k_values": curve.points.iter().map(|p| p.k).collect::<Vec<_>>(),
        }),
        warnings: &curve.warnings,
        bisection,
    };
    for w in &curve.warnings {
        writeln!(stderr, "warning: {w}")?;
    }

    match args.format {
        Format::Csv => {
            with_output(&args.output, stdout, |w| curve.write_csv(w))?;
            let text = serde_json::to_string_pretty(&metadata).map_err(io::Error::from)?;
            match &args.metadata {
                Some(path) => std::fs::write(path, text + "\n")?,
                None => writeln!(stderr, "{text}")?,
            }
        }
        Format::Json => {
            let out = json!({ "metadata": metadata, "points": curve.points });
            emit_json(&args.output, stdout, &out)?;
            if let Some(path) = &args.metadata {
                let text = serde_json::to_string_pretty(&metadata).map_err(io::Error::from)?;
                std::fs::write(path, text + "\n")?;
            }
        }
    }
    Ok(())
}

fn cmd_suen(args: SuenArgs, stdout: &mut dyn Write) -> CliResult {
    let (spec, group) = build(&args.spec)?;
    let report = suen::suen_point(group.profile(), args.element, args.k)?;
    let out = json!({
        "spec": spec.to_string(),
        "n": group.order(),
        "report": report,
        "delta_cap": suen::delta_cap(group.order(), args.k),
        "miss_expectation_upper": suen::miss_expectation_upper(group.profile(), args.k)?,
    });
    emit_json(&args.output, stdout, &out)
}

fn cmd_oracle(command: OracleCommand, stdout: &mut dyn Write) -> CliResult {
    match command {
        OracleCommand::ExactP(args) => {
            let (spec, group) = build(&args.spec)?;
            let m = args.m.unwrap_or(args.k);
            let p = oracle::exact_p(&group, args.k, m, args.variant.into())?;
            let out = json!({
                "spec": spec.to_string(),
                "k": args.k,
                "m": m,
                "variant": Variant::from(args.variant),
                "p": ExactJson::from(&p),
                "p_float": crate::rational::to_f64(&p),
            });
            emit_json(&args.output, stdout, &out)
        }
        OracleCommand::MissDistribution(args) => {
            let (spec, group) = build(&args.spec)?;
            let m = args.m.unwrap_or(args.k);
            let d = oracle::exact_miss_distribution(&group, args.k, m, args.variant.into())?;
            let out = json!({
                "spec": spec.to_string(),
                "k": args.k,
                "m": m,
                "variant": Variant::from(args.variant),
                "distribution": d,
                "mean": ExactJson::from(&d.mean()),
            });
            emit_json(&args.output, stdout, &out)
        }
        OracleCommand::SingleMean { spec, element, output } => {
            let (parsed, group) = build(&spec)?;
            let exact = oracle::exact_single_mean(&group, element)?;
            let closed = suen::single_mean(group.profile(), element)?;
            let out = json!({
                "spec": parsed.to_string(),
                "element": element,
                "oracle": ExactJson::from(&exact),
                "closed_form": ExactJson::from(&closed),
                "agree": exact == closed,
            });
            emit_json(&output, stdout, &out)
        }
        OracleCommand::PairMean { spec, x, y, axis, output } => {
            let (parsed, group) = build(&spec)?;
            let axis = match axis {
                AxisArg::Row => SharedAxis::Row,
                AxisArg::Column => SharedAxis::Column,
            };
            let exact = oracle::exact_pair_mean(&group, x, y, axis)?;
            let closed = suen::pair_mean(&Intersections::new(&group), x, y)?;
            let out = json!({
                "spec": parsed.to_string(),
                "x": x,
                "y": y,
                "axis": format!("{axis:?}").to_lowercase(),
                "oracle": ExactJson::from(&exact),
                "closed_form": ExactJson::from(&closed),
                "agree": exact == closed,
            });
            emit_json(&output, stdout, &out)
        }
    }
}

//! Command-line surface of the reliability comparison toolkit.
//!
//! Exit codes: 0 for a successful computation (and a "holds" verdict), 1 for
//! a failing verdict, 2 for usage or parameter errors.

mod output;

use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use parrondo_rel::game::{self, Allocation, GameResult, GameSpec, SweepConfig};
use parrondo_rel::grid::{GridSpacing, TimeGrid};
use parrondo_rel::models::{ModelFamily, Quadruple, SystemId};
use parrondo_rel::ordering::{
    check_paradox_conditions_with_tolerance, check_st_order_with_tolerance, feasibility_point,
    sufficient_family_a_bound, sufficient_family_b_bound, OrderingReport, Verdict, POINTWISE_TOL,
};
use parrondo_rel::quadrature::{mean_lifetime_detailed, MeanEstimate};

use output::{csv_field, fmt_f64, to_json};

const SCHEMA_VERSION: u32 = 1;
/// Attached verbatim to every order-check result: verdicts certify the
/// evaluation grid only, never all t ≥ 0.
const GRID_CERTIFIED: &str = "grid-certified";

/// Writes a report line to stdout. A consumer that stops reading (broken
/// pipe) ends the run quietly; any other stdout failure is a real error.
macro_rules! outln {
    ($($arg:tt)*) => {{
        use std::io::Write;
        if let Err(e) = writeln!(std::io::stdout(), $($arg)*) {
            if e.kind() == std::io::ErrorKind::BrokenPipe {
                std::process::exit(0);
            }
            eprintln!("error: cannot write to stdout: {e}");
            std::process::exit(2);
        }
    }};
}

#[derive(Parser)]
#[command(
    name = "parrondo-rel",
    version,
    about = "Series-system reliability comparisons under randomized unit selection"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a system's survival function on a grid
    Eval(EvalArgs),
    /// Expected lifetime of a system by adaptive quadrature
    Mean(MeanArgs),
    /// Verify the reversal conditions (i)/(ii), or a pairwise stochastic order
    OrderCheck(OrderCheckArgs),
    /// Ratio-space feasibility data (x1, x2, A) on a grid
    Feasible(FeasibleArgs),
    /// Band envelopes of the two sufficient solution families
    Bounds(BoundsArgs),
    /// Analytic and Monte Carlo expected gain for one allocation
    Game(GameArgs),
    /// Gain table over a (lambda, nu) grid, both allocations per point
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelName {
    Example1,
    Example2,
}

impl From<ModelName> for ModelFamily {
    fn from(m: ModelName) -> Self {
        match m {
            ModelName::Example1 => ModelFamily::Example1,
            ModelName::Example2 => ModelFamily::Example2,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SystemArg {
    #[value(name = "X", alias = "x")]
    X,
    #[value(name = "Y", alias = "y")]
    Y,
    #[value(name = "Xstar", alias = "xstar")]
    XStar,
    #[value(name = "F1", alias = "f1")]
    F1,
    #[value(name = "F2", alias = "f2")]
    F2,
    #[value(name = "G1", alias = "g1")]
    G1,
    #[value(name = "G2", alias = "g2")]
    G2,
}

impl SystemArg {
    fn name(self) -> &'static str {
        match self {
            SystemArg::X => "X",
            SystemArg::Y => "Y",
            SystemArg::XStar => "Xstar",
            SystemArg::F1 => "F1",
            SystemArg::F2 => "F2",
            SystemArg::G1 => "G1",
            SystemArg::G2 => "G2",
        }
    }
}

impl From<SystemArg> for SystemId {
    fn from(s: SystemArg) -> Self {
        match s {
            SystemArg::X => SystemId::X,
            SystemArg::Y => SystemId::Y,
            SystemArg::XStar => SystemId::XStar,
            SystemArg::F1 => SystemId::F1,
            SystemArg::F2 => SystemId::F2,
            SystemArg::G1 => SystemId::G1,
            SystemArg::G2 => SystemId::G2,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AllocationArg {
    Deterministic,
    Randomized,
}

impl From<AllocationArg> for Allocation {
    fn from(a: AllocationArg) -> Self {
        match a {
            AllocationArg::Deterministic => Allocation::Deterministic,
            AllocationArg::Randomized => Allocation::Randomized,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SpacingArg {
    Linear,
    Log,
    Mixed,
}

impl SpacingArg {
    fn name(self) -> &'static str {
        match self {
            SpacingArg::Linear => "linear",
            SpacingArg::Log => "log",
            SpacingArg::Mixed => "mixed",
        }
    }
}

impl From<SpacingArg> for GridSpacing {
    fn from(s: SpacingArg) -> Self {
        match s {
            SpacingArg::Linear => GridSpacing::Linear,
            SpacingArg::Log => GridSpacing::Log,
            SpacingArg::Mixed => GridSpacing::Mixed,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct ModelArgs {
    /// Built-in family
    #[arg(long, value_enum)]
    model: ModelName,
    /// Rate parameter, must be positive
    #[arg(long)]
    lambda: f64,
    /// Band parameter, must satisfy 0 <= nu <= lambda
    #[arg(long)]
    nu: f64,
}

impl ModelArgs {
    fn build(&self) -> Result<Quadruple, String> {
        ModelFamily::from(self.model)
            .build(self.lambda, self.nu)
            .map_err(|e| e.to_string())
    }

    fn desc(&self) -> ModelDesc {
        ModelDesc {
            family: ModelFamily::from(self.model).name(),
            lambda: self.lambda,
            nu: self.nu,
        }
    }
}

#[derive(Args)]
struct GridArgs {
    /// Number of grid points
    #[arg(long = "grid-points", default_value_t = 2000)]
    grid_points: usize,
    /// Largest grid time; defaults to 5x the largest support hint
    #[arg(long = "t-max")]
    t_max: Option<f64>,
    /// Grid spacing
    #[arg(long, value_enum, default_value_t = SpacingArg::Mixed)]
    spacing: SpacingArg,
}

impl GridArgs {
    fn build(&self, q: &Quadruple) -> Result<(TimeGrid, GridDesc), String> {
        let t_max = self.t_max.unwrap_or_else(|| {
            5.0 * q
                .f1
                .support_hint()
                .max(q.f2.support_hint())
                .max(q.g1.support_hint())
                .max(q.g2.support_hint())
        });
        let grid = TimeGrid::new(self.spacing.into(), t_max, self.grid_points)
            .map_err(|e| e.to_string())?;
        let desc = GridDesc {
            spacing: self.spacing.name(),
            points: grid.len(),
            t_max: grid.t_max(),
            caveat: GRID_CERTIFIED,
        };
        Ok((grid, desc))
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    output: OutputFormat,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// System to evaluate
    #[arg(long, value_enum)]
    system: SystemArg,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct MeanArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// System whose expected lifetime to compute
    #[arg(long, value_enum)]
    system: SystemArg,
    /// Relative tolerance of the quadrature
    #[arg(long, default_value_t = 1e-10)]
    tolerance: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct OrderCheckArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Check F(lower) <= F(upper) instead of the reversal conditions
    #[arg(long, value_enum, requires = "upper")]
    lower: Option<SystemArg>,
    #[arg(long, value_enum, requires = "lower")]
    upper: Option<SystemArg>,
    /// Absolute slack allowed per grid point
    #[arg(long, default_value_t = POINTWISE_TOL)]
    tolerance: f64,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct FeasibleArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Slack allowed on each feasibility inequality
    #[arg(long, default_value_t = POINTWISE_TOL)]
    tolerance: f64,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct BoundsArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct GameArgs {
    #[command(flatten)]
    model: ModelArgs,
    /// Unit allocation of the first system
    #[arg(long, value_enum)]
    allocation: AllocationArg,
    /// Monte Carlo replications
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    replications: u64,
    /// Seed of the replication streams
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Relative tolerance of the analytic-gain quadrature
    #[arg(long, default_value_t = 1e-10)]
    tolerance: f64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// Built-in family
    #[arg(long, value_enum)]
    model: ModelName,
    /// Comma-separated lambda values
    #[arg(long, value_delimiter = ',', required = true)]
    lambda: Vec<f64>,
    /// Comma-separated nu values (crossed with every lambda)
    #[arg(long, value_delimiter = ',', required = true)]
    nu: Vec<f64>,
    /// Monte Carlo replications per row
    #[arg(long, default_value_t = 50_000, value_parser = clap::value_parser!(u64).range(1..))]
    replications: u64,
    /// Base seed; row i uses seed + i
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Serialize)]
struct ModelDesc {
    family: &'static str,
    lambda: f64,
    nu: f64,
}

#[derive(Serialize)]
struct GridDesc {
    spacing: &'static str,
    points: usize,
    t_max: f64,
    caveat: &'static str,
}

#[derive(Serialize)]
struct Report<T: Serialize> {
    schema_version: u32,
    command: &'static str,
    timestamp_unix_ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    model: Option<ModelDesc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    grid: Option<GridDesc>,
    result: T,
}

fn report<T: Serialize>(
    command: &'static str,
    model: Option<ModelDesc>,
    grid: Option<GridDesc>,
    result: T,
) -> Report<T> {
    Report {
        schema_version: SCHEMA_VERSION,
        command,
        timestamp_unix_ms: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .unwrap_or_default()
            .as_millis() as u64,
        model,
        grid,
        result,
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(msg) = init_thread_cap() {
        eprintln!("error: {msg}");
        std::process::exit(2);
    }
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            std::process::exit(2);
        }
    }
}

/// PARRONDO_REL_THREADS caps the rayon pool used by the Monte Carlo runs.
fn init_thread_cap() -> Result<(), String> {
    match std::env::var("PARRONDO_REL_THREADS") {
        Ok(v) => {
            let n: usize = v
                .trim()
                .parse()
                .map_err(|_| format!("PARRONDO_REL_THREADS must be a positive integer, got '{v}'"))?;
            if n == 0 {
                return Err("PARRONDO_REL_THREADS must be at least 1".into());
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| e.to_string())
        }
        Err(std::env::VarError::NotPresent) => Ok(()),
        Err(e) => Err(e.to_string()),
    }
}

fn run(cli: Cli) -> Result<i32, String> {
    match cli.command {
        Command::Eval(args) => cmd_eval(args),
        Command::Mean(args) => cmd_mean(args),
        Command::OrderCheck(args) => cmd_order_check(args),
        Command::Feasible(args) => cmd_feasible(args),
        Command::Bounds(args) => cmd_bounds(args),
        Command::Game(args) => cmd_game(args),
        Command::Sweep(args) => cmd_sweep(args),
    }
}

#[derive(Serialize)]
struct EvalRow {
    t: f64,
    survival: f64,
}

#[derive(Serialize)]
struct EvalResult {
    system: &'static str,
    label: String,
    rows: Vec<EvalRow>,
}

fn cmd_eval(args: EvalArgs) -> Result<i32, String> {
    let q = args.model.build()?;
    let sf = q.system(args.system.into());
    let (grid, grid_desc) = args.grid.build(&q)?;
    let rows: Vec<EvalRow> = grid
        .points()
        .iter()
        .map(|&t| EvalRow {
            t,
            survival: sf.eval(t),
        })
        .collect();
    match args.out.output {
        OutputFormat::Json => {
            let body = EvalResult {
                system: args.system.name(),
                label: sf.label().to_string(),
                rows,
            };
            outln!(
                "{}",
                to_json(&report("eval", Some(args.model.desc()), Some(grid_desc), body))
            );
        }
        OutputFormat::Csv => {
            outln!("t,survival");
            for r in &rows {
                outln!("{},{}", fmt_f64(r.t), fmt_f64(r.survival));
            }
        }
        OutputFormat::Text => {
            outln!("system {} = {}", args.system.name(), sf.label());
            for r in &rows {
                outln!("  t = {:<12.6} survival = {:.9}", r.t, r.survival);
            }
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct MeanResult {
    system: &'static str,
    label: String,
    rel_tol: f64,
    mean: MeanEstimate,
}

fn cmd_mean(args: MeanArgs) -> Result<i32, String> {
    let q = args.model.build()?;
    let sf = q.system(args.system.into());
    let est = mean_lifetime_detailed(&sf, args.tolerance).map_err(|e| e.to_string())?;
    match args.out.output {
        OutputFormat::Json => {
            let body = MeanResult {
                system: args.system.name(),
                label: sf.label().to_string(),
                rel_tol: args.tolerance,
                mean: est,
            };
            outln!("{}", to_json(&report("mean", Some(args.model.desc()), None, body)));
        }
        OutputFormat::Csv => {
            outln!("system,mean,error_bound,tail_bound,t_max");
            outln!(
                "{},{},{},{},{}",
                csv_field(args.system.name()),
                fmt_f64(est.value),
                fmt_f64(est.error_bound),
                fmt_f64(est.tail_bound),
                fmt_f64(est.t_max)
            );
        }
        OutputFormat::Text => {
            outln!("E[{}] = {:.12} (error bound {:.3e}, truncated at t = {:.3})",
                args.system.name(), est.value, est.error_bound, est.t_max);
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct ParadoxResult {
    verdict: Verdict,
    condition_i: OrderingReport,
    condition_ii: OrderingReport,
}

#[derive(Serialize)]
struct PairwiseResult {
    verdict: Verdict,
    lower: &'static str,
    upper: &'static str,
    report: OrderingReport,
}

fn overall(verdicts: &[Verdict]) -> Verdict {
    if verdicts.contains(&Verdict::Fails) {
        Verdict::Fails
    } else if verdicts.contains(&Verdict::Inconclusive) {
        Verdict::Inconclusive
    } else {
        Verdict::Holds
    }
}

fn verdict_exit(v: Verdict) -> i32 {
    match v {
        Verdict::Holds => 0,
        _ => 1,
    }
}

fn print_report_text(name: &str, r: &OrderingReport) {
    let verdict = match r.verdict {
        Verdict::Holds => "holds",
        Verdict::Fails => "fails",
        Verdict::Inconclusive => "inconclusive",
    };
    match r.witness_t {
        Some(t) => outln!(
            "{name}: {verdict} (margin {:.3e} over {} grid points, worst at t = {t:.6})",
            r.margin, r.grid_size
        ),
        None => outln!(
            "{name}: {verdict} (margin {:.3e} over {} grid points)",
            r.margin, r.grid_size
        ),
    }
}

fn order_check_csv(rows: &[(&str, &OrderingReport)]) {
    outln!("check,verdict,margin,witness_t,grid_size,tolerance,skipped");
    for (name, r) in rows {
        let verdict = match r.verdict {
            Verdict::Holds => "holds",
            Verdict::Fails => "fails",
            Verdict::Inconclusive => "inconclusive",
        };
        outln!(
            "{},{},{},{},{},{},{}",
            csv_field(name),
            verdict,
            fmt_f64(r.margin),
            r.witness_t.map(fmt_f64).unwrap_or_default(),
            r.grid_size,
            fmt_f64(r.tolerance),
            r.skipped
        );
    }
}

fn cmd_order_check(args: OrderCheckArgs) -> Result<i32, String> {
    let q = args.model.build()?;
    let (grid, grid_desc) = args.grid.build(&q)?;

    if let (Some(lower), Some(upper)) = (args.lower, args.upper) {
        let lo = q.system(lower.into());
        let hi = q.system(upper.into());
        let r = check_st_order_with_tolerance(&lo, &hi, &grid, args.tolerance);
        let verdict = r.verdict;
        match args.out.output {
            OutputFormat::Json => {
                let body = PairwiseResult {
                    verdict,
                    lower: lower.name(),
                    upper: upper.name(),
                    report: r,
                };
                outln!(
                    "{}",
                    to_json(&report("order-check", Some(args.model.desc()), Some(grid_desc), body))
                );
            }
            OutputFormat::Csv => order_check_csv(&[("st-order", &r)]),
            OutputFormat::Text => {
                outln!(
                    "stochastic order {} <=st {} ({GRID_CERTIFIED}: verdict covers the {} evaluated grid points only)",
                    lower.name(),
                    upper.name(),
                    grid.len()
                );
                print_report_text("st-order", &r);
            }
        }
        return Ok(verdict_exit(verdict));
    }

    let r = check_paradox_conditions_with_tolerance(&q.f1, &q.f2, &q.g1, &q.g2, &grid, args.tolerance);
    let verdict = overall(&[r.condition_i.verdict, r.condition_ii.verdict]);
    match args.out.output {
        OutputFormat::Json => {
            let body = ParadoxResult {
                verdict,
                condition_i: r.condition_i,
                condition_ii: r.condition_ii,
            };
            outln!(
                "{}",
                to_json(&report("order-check", Some(args.model.desc()), Some(grid_desc), body))
            );
        }
        OutputFormat::Csv => order_check_csv(&[
            ("condition_i", &r.condition_i),
            ("condition_ii", &r.condition_ii),
        ]),
        OutputFormat::Text => {
            outln!(
                "reversal conditions ({GRID_CERTIFIED}: verdicts cover the {} evaluated grid points only)",
                grid.len()
            );
            print_report_text("condition (i)  [(F1+F2)/2]^2 >= G1*G2", &r.condition_i);
            print_report_text("condition (ii) Fi <= Gi", &r.condition_ii);
        }
    }
    Ok(verdict_exit(verdict))
}

#[derive(Serialize)]
struct FeasibleRow {
    t: f64,
    x1: f64,
    x2: f64,
    a: f64,
    feasible: bool,
}

#[derive(Serialize)]
struct FeasibleResult {
    all_feasible: bool,
    tolerance: f64,
    rows: Vec<FeasibleRow>,
}

fn cmd_feasible(args: FeasibleArgs) -> Result<i32, String> {
    let q = args.model.build()?;
    let (grid, grid_desc) = args.grid.build(&q)?;
    let mut rows = Vec::with_capacity(grid.len());
    for &t in grid.points() {
        let p = feasibility_point(&q.f1, &q.f2, &q.g1, &q.g2, t).map_err(|e| e.to_string())?;
        rows.push(FeasibleRow {
            t,
            x1: p.x1,
            x2: p.x2,
            a: p.a,
            feasible: p.is_feasible(args.tolerance),
        });
    }
    let all_feasible = rows.iter().all(|r| r.feasible);
    match args.out.output {
        OutputFormat::Json => {
            let body = FeasibleResult {
                all_feasible,
                tolerance: args.tolerance,
                rows,
            };
            outln!(
                "{}",
                to_json(&report("feasible", Some(args.model.desc()), Some(grid_desc), body))
            );
        }
        OutputFormat::Csv => {
            outln!("t,x1,x2,a,feasible");
            for r in &rows {
                outln!(
                    "{},{},{},{},{}",
                    fmt_f64(r.t),
                    fmt_f64(r.x1),
                    fmt_f64(r.x2),
                    fmt_f64(r.a),
                    r.feasible
                );
            }
        }
        OutputFormat::Text => {
            outln!(
                "feasibility region check: {}",
                if all_feasible { "feasible at every grid point" } else { "infeasible somewhere" }
            );
            for r in rows.iter().take(10) {
                outln!(
                    "  t = {:<12.4e} x1 = {:+.3e} x2 = {:+.3e} A = {:.3e} feasible = {}",
                    r.t, r.x1, r.x2, r.a, r.feasible
                );
            }
            if rows.len() > 10 {
                outln!("  ... ({} rows total)", rows.len());
            }
        }
    }
    Ok(if all_feasible { 0 } else { 1 })
}

#[derive(Serialize)]
struct BoundsRow {
    t: f64,
    f1: f64,
    f2: f64,
    g1: f64,
    g2: f64,
    envelope_a: f64,
    envelope_b: f64,
}

#[derive(Serialize)]
struct BoundsResult {
    rows: Vec<BoundsRow>,
}

fn cmd_bounds(args: BoundsArgs) -> Result<i32, String> {
    let q = args.model.build()?;
    let (grid, grid_desc) = args.grid.build(&q)?;
    let env_a = sufficient_family_a_bound(&q.f1, &q.f2);
    let env_b = sufficient_family_b_bound(&q.f1, &q.f2);
    let rows: Vec<BoundsRow> = grid
        .points()
        .iter()
        .map(|&t| BoundsRow {
            t,
            f1: q.f1.eval(t),
            f2: q.f2.eval(t),
            g1: q.g1.eval(t),
            g2: q.g2.eval(t),
            envelope_a: env_a.eval(t),
            envelope_b: env_b.eval(t),
        })
        .collect();
    match args.out.output {
        OutputFormat::Json => {
            outln!(
                "{}",
                to_json(&report(
                    "bounds",
                    Some(args.model.desc()),
                    Some(grid_desc),
                    BoundsResult { rows }
                ))
            );
        }
        OutputFormat::Csv => {
            outln!("t,f1,f2,g1,g2,envelope_a,envelope_b");
            for r in &rows {
                outln!(
                    "{},{},{},{},{},{},{}",
                    fmt_f64(r.t),
                    fmt_f64(r.f1),
                    fmt_f64(r.f2),
                    fmt_f64(r.g1),
                    fmt_f64(r.g2),
                    fmt_f64(r.envelope_a),
                    fmt_f64(r.envelope_b)
                );
            }
        }
        OutputFormat::Text => {
            outln!("band envelopes (family a: G1=F1, F2 <= G2 <= envelope_a;");
            outln!("                family b: G1/F1 = G2/F2, F1 <= G1 <= envelope_b)");
            for r in rows.iter().take(10) {
                outln!(
                    "  t = {:<12.4e} F1 = {:.6} F2 = {:.6} env_a = {:.6} env_b = {:.6}",
                    r.t, r.f1, r.f2, r.envelope_a, r.envelope_b
                );
            }
            if rows.len() > 10 {
                outln!("  ... ({} rows total)", rows.len());
            }
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct GameResultOut {
    allocation: Allocation,
    replications: u64,
    seed: u64,
    game: GameResult,
}

fn cmd_game(args: GameArgs) -> Result<i32, String> {
    let q = args.model.build()?;
    let spec = GameSpec::new(q, args.allocation.into(), args.replications, args.seed)
        .map_err(|e| e.to_string())?
        .with_quadrature_rel_tol(args.tolerance);
    let result = game::simulate(&spec).map_err(|e| e.to_string())?;
    match args.out.output {
        OutputFormat::Json => {
            let body = GameResultOut {
                allocation: args.allocation.into(),
                replications: args.replications,
                seed: args.seed,
                game: result,
            };
            outln!("{}", to_json(&report("game", Some(args.model.desc()), None, body)));
        }
        OutputFormat::Csv => {
            outln!("allocation,n,analytic_gain,mc_gain,mc_stderr,ci_lo,ci_hi");
            outln!(
                "{},{},{},{},{},{},{}",
                match Allocation::from(args.allocation) {
                    Allocation::Deterministic => "deterministic",
                    Allocation::Randomized => "randomized",
                },
                result.n,
                fmt_f64(result.analytic_gain),
                fmt_f64(result.mc_gain),
                fmt_f64(result.mc_stderr),
                fmt_f64(result.ci95.0),
                fmt_f64(result.ci95.1)
            );
        }
        OutputFormat::Text => {
            outln!(
                "expected gain ({} allocation, {} replications, seed {})",
                match Allocation::from(args.allocation) {
                    Allocation::Deterministic => "deterministic",
                    Allocation::Randomized => "randomized",
                },
                result.n,
                args.seed
            );
            outln!("  analytic : {:+.9}", result.analytic_gain);
            outln!(
                "  monte carlo: {:+.9} +/- {:.3e} (95% CI [{:+.6e}, {:+.6e}])",
                result.mc_gain, result.mc_stderr, result.ci95.0, result.ci95.1
            );
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct SweepRowOut {
    lambda: f64,
    nu: f64,
    allocation: Allocation,
    n: Option<u64>,
    analytic_gain: Option<f64>,
    mc_gain: Option<f64>,
    mc_stderr: Option<f64>,
    ci95: Option<(f64, f64)>,
    error: Option<String>,
}

#[derive(Serialize)]
struct SweepResult {
    family: &'static str,
    replications: u64,
    seed: u64,
    rows: Vec<SweepRowOut>,
}

fn cmd_sweep(args: SweepArgs) -> Result<i32, String> {
    let family = ModelFamily::from(args.model);
    let mut params = Vec::with_capacity(args.lambda.len() * args.nu.len());
    for &l in &args.lambda {
        for &n in &args.nu {
            params.push((l, n));
        }
    }
    let rows = game::sweep(family, &params, &SweepConfig::new(args.replications, args.seed));
    let rows_out: Vec<SweepRowOut> = rows
        .into_iter()
        .map(|row| match row.outcome {
            Ok(r) => SweepRowOut {
                lambda: row.lambda,
                nu: row.nu,
                allocation: row.allocation,
                n: Some(r.n),
                analytic_gain: Some(r.analytic_gain),
                mc_gain: Some(r.mc_gain),
                mc_stderr: Some(r.mc_stderr),
                ci95: Some(r.ci95),
                error: None,
            },
            Err(e) => SweepRowOut {
                lambda: row.lambda,
                nu: row.nu,
                allocation: row.allocation,
                n: None,
                analytic_gain: None,
                mc_gain: None,
                mc_stderr: None,
                ci95: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    match args.out.output {
        OutputFormat::Json => {
            let body = SweepResult {
                family: family.name(),
                replications: args.replications,
                seed: args.seed,
                rows: rows_out,
            };
            outln!("{}", to_json(&report("sweep", None, None, body)));
        }
        OutputFormat::Csv => {
            outln!("lambda,nu,allocation,n,analytic_gain,mc_gain,mc_stderr,ci_lo,ci_hi,error");
            for r in &rows_out {
                outln!(
                    "{},{},{},{},{},{},{},{},{},{}",
                    fmt_f64(r.lambda),
                    fmt_f64(r.nu),
                    match r.allocation {
                        Allocation::Deterministic => "deterministic",
                        Allocation::Randomized => "randomized",
                    },
                    r.n.map(|n| n.to_string()).unwrap_or_default(),
                    r.analytic_gain.map(fmt_f64).unwrap_or_default(),
                    r.mc_gain.map(fmt_f64).unwrap_or_default(),
                    r.mc_stderr.map(fmt_f64).unwrap_or_default(),
                    r.ci95.map(|c| fmt_f64(c.0)).unwrap_or_default(),
                    r.ci95.map(|c| fmt_f64(c.1)).unwrap_or_default(),
                    csv_field(r.error.as_deref().unwrap_or(""))
                );
            }
        }
        OutputFormat::Text => {
            outln!("gain sweep over {} parameter points:", rows_out.len() / 2);
            for r in &rows_out {
                let alloc = match r.allocation {
                    Allocation::Deterministic => "det ",
                    Allocation::Randomized => "rand",
                };
                match (&r.analytic_gain, &r.mc_gain, &r.error) {
                    (Some(a), Some(m), _) => outln!(
                        "  lambda = {:<8.4} nu = {:<8.4} {alloc} analytic = {a:+.6e} mc = {m:+.6e}",
                        r.lambda, r.nu
                    ),
                    (_, _, Some(e)) => outln!(
                        "  lambda = {:<8.4} nu = {:<8.4} {alloc} error: {e}",
                        r.lambda, r.nu
                    ),
                    _ => {}
                }
            }
        }
    }
    Ok(0)
}

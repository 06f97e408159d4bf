//! Command-line front end: select a catalogue inequality, configure the grid
//! and trial family, run the verification, and emit JSON/CSV reports.
//!
//! Exit status: 0 on pass, 1 when a verified inequality or criterion fails,
//! 2 on configuration or precondition errors.

mod config;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hardy_dirac::clifford::CliffordRep;
use hardy_dirac::dirac::{GridSpec, MagneticPotential};
use hardy_dirac::verifier::{
    angular_identity_check, d_constant, gamma_criterion, magnetic_reduction_check,
    matrix_condition_m, sample_directions, thm5_constant, trials_to_csv, verify_inequality,
    InequalityCase, MatrixWeights, PhiKind, VerifyConfig,
};
use hardy_dirac::weights::{log_spaced_per_decade, Pairing};

use config::FileConfig;

const EXIT_PASS: u8 = 0;
const EXIT_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;

#[derive(Parser)]
#[command(
    name = "hardy-dirac",
    version,
    about = "Verify weighted Hardy-Carleman inequalities for Dirac operators at desk scale"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded-trial verification of a catalogue inequality.
    Verify(VerifyArgs),
    /// Evaluate the positivity criteria for a catalogue weight pair.
    CheckWeights(CheckWeightsArgs),
    /// Print the power-weight constant d^2/4 from two-candidate enumeration.
    Thm5Constant(Thm5Args),
    /// Check the angular operator identity on spherical harmonics.
    AngularCheck(AngularArgs),
    /// Verify the gauge reduction to the magnetic Dirac operator.
    MagneticVerify(MagneticArgs),
}

#[derive(Args, Clone)]
struct CaseArgs {
    /// Inequality id: example_4.1 | agmon_4.2 | hardy_4.3 | example_4.2 |
    /// treve_4.6 | log_4.8 | thm3.1 | thm5.1
    #[arg(long)]
    ineq: Option<String>,
    /// Weight parameter tau.
    #[arg(long)]
    tau: Option<f64>,
    /// Weight parameter alpha (example_4.2 only).
    #[arg(long)]
    alpha: Option<f64>,
    /// Radial phase for thm3.1: r | r^2.
    #[arg(long)]
    phi: Option<String>,
}

#[derive(Args, Clone)]
struct GridArgs {
    /// Spatial dimension.
    #[arg(long)]
    n: Option<usize>,
    /// Grid points per axis (defaults: 256 for n=1, 128 for n=2, 48 for n=3).
    #[arg(long)]
    points: Option<usize>,
    /// Box halfwidth R (domain [-R, R]^n).
    #[arg(long)]
    halfwidth: Option<f64>,
    /// Support annulus inner radius.
    #[arg(long)]
    rmin: Option<f64>,
    /// Support annulus outer radius.
    #[arg(long)]
    rmax: Option<f64>,
}

#[derive(Args, Clone)]
struct OutputArgs {
    /// Write the JSON report here (relative paths resolve against
    /// $HARDY_DIRAC_OUTDIR when set).
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write the per-trial CSV here.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Flat key-value config file; flags override file values.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    case: CaseArgs,
    #[command(flatten)]
    grid: GridArgs,
    /// Number of seeded trials.
    #[arg(long)]
    trials: Option<usize>,
    /// Master seed; trial t uses seed + t.
    #[arg(long)]
    seed: Option<u64>,
    /// Multiplicative tolerance on the predicted constant.
    #[arg(long)]
    slack: Option<f64>,
    /// Lower end of the criterion sampling interval (defaults to rmin).
    #[arg(long)]
    interval_lo: Option<f64>,
    /// Upper end of the criterion sampling interval (defaults to rmax).
    #[arg(long)]
    interval_hi: Option<f64>,
    /// Criterion sample count (default: 512 per decade).
    #[arg(long)]
    samples: Option<usize>,
    /// Re-run the first trial at doubled resolution and report the delta.
    #[arg(long)]
    refine: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct CheckWeightsArgs {
    #[command(flatten)]
    case: CaseArgs,
    /// Include the mass term (the -i alpha_hat beta block) in M.
    #[arg(long)]
    mass: bool,
    /// Sampling interval lower end.
    #[arg(long)]
    interval_lo: Option<f64>,
    /// Sampling interval upper end.
    #[arg(long)]
    interval_hi: Option<f64>,
    /// Radial sample count (default: 512 per decade).
    #[arg(long)]
    samples: Option<usize>,
    /// Random unit directions sampled in addition to the axes.
    #[arg(long)]
    directions: Option<usize>,
    /// Spatial dimension for the matrix criterion.
    #[arg(long)]
    n: Option<usize>,
    /// Seed for the random directions.
    #[arg(long)]
    seed: Option<u64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct Thm5Args {
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct AngularArgs {
    #[arg(long)]
    points: Option<usize>,
    #[arg(long)]
    halfwidth: Option<f64>,
    /// Radius of the radial shell carrying the harmonics.
    #[arg(long)]
    shell_center: Option<f64>,
    /// Width of the radial shell.
    #[arg(long)]
    shell_sigma: Option<f64>,
    /// Check l = 0 ..= lmax.
    #[arg(long)]
    lmax: Option<u32>,
    /// Worst acceptable relative residual.
    #[arg(long)]
    tolerance: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct MagneticArgs {
    #[command(flatten)]
    case: CaseArgs,
    #[command(flatten)]
    grid: GridArgs,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    slack: Option<f64>,
    /// Amplitude of the Gaussian gauge phase.
    #[arg(long)]
    phi_amplitude: Option<f64>,
    /// Width of the Gaussian gauge phase.
    #[arg(long)]
    phi_sigma: Option<f64>,
    /// Center of the Gaussian gauge phase, comma-separated coordinates.
    #[arg(long)]
    phi_center: Option<String>,
    /// Largest acceptable relative gauge defect of the quotients.
    #[arg(long)]
    gauge_tol: Option<f64>,
    #[command(flatten)]
    output: OutputArgs,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}

fn run(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Verify(args) => cmd_verify(args),
        Command::CheckWeights(args) => cmd_check_weights(args),
        Command::Thm5Constant(args) => cmd_thm5(args),
        Command::AngularCheck(args) => cmd_angular(args),
        Command::MagneticVerify(args) => cmd_magnetic(args),
    }
}

fn load_config(path: &Option<PathBuf>) -> Result<FileConfig, String> {
    match path {
        Some(p) => FileConfig::load(p),
        None => Ok(FileConfig::empty()),
    }
}

fn build_case(file: &FileConfig, args: &CaseArgs) -> Result<InequalityCase, String> {
    let id = file
        .string(args.ineq.clone(), "ineq")
        .ok_or("missing --ineq (or 'ineq' in the config file)")?;
    let mut params: BTreeMap<String, f64> = BTreeMap::new();
    if let Some(tau) = file.f64(args.tau, "tau")? {
        params.insert("tau".into(), tau);
    }
    if let Some(alpha) = file.f64(args.alpha, "alpha")? {
        params.insert("alpha".into(), alpha);
    }
    if let Some(phi) = file.string(args.phi.clone(), "phi") {
        let kind = PhiKind::parse(&phi).map_err(|e| e.to_string())?;
        params.insert(
            "phi".into(),
            match kind {
                PhiKind::Linear => 1.0,
                PhiKind::Quadratic => 2.0,
                PhiKind::Log => 0.0,
            },
        );
    }
    InequalityCase::from_id(&id, &params).map_err(|e| e.to_string())
}

fn default_points(n: usize) -> usize {
    match n {
        1 => 256,
        2 => 128,
        _ => 48,
    }
}

fn build_grid(file: &FileConfig, args: &GridArgs) -> Result<(GridSpec, (f64, f64)), String> {
    let n = file.usize(args.n, "n")?.unwrap_or(3);
    let points = file
        .usize(args.points, "points")?
        .unwrap_or_else(|| default_points(n));
    let halfwidth = file.f64(args.halfwidth, "halfwidth")?.unwrap_or(3.0);
    let rmin = file.f64(args.rmin, "rmin")?.unwrap_or(1.0);
    let rmax = file.f64(args.rmax, "rmax")?.unwrap_or(2.0);
    let grid = GridSpec::new(n, points, halfwidth).map_err(|e| e.to_string())?;
    Ok((grid, (rmin, rmax)))
}

fn sample_count(file: &FileConfig, cli: Option<usize>, interval: (f64, f64)) -> Result<usize, String> {
    match file.usize(cli, "samples")? {
        Some(s) => Ok(s.max(2)),
        None => Ok(log_spaced_per_decade(interval.0, interval.1, 512).len()),
    }
}

/// Resolve a report path against `$HARDY_DIRAC_OUTDIR` for relative paths.
fn resolve_out(path: &Path) -> PathBuf {
    if path.is_absolute() {
        return path.to_path_buf();
    }
    match std::env::var_os("HARDY_DIRAC_OUTDIR") {
        Some(dir) => PathBuf::from(dir).join(path),
        None => path.to_path_buf(),
    }
}

fn write_artifact(path: &Option<PathBuf>, contents: &str) -> Result<(), String> {
    if let Some(p) = path {
        let resolved = resolve_out(p);
        if let Some(parent) = resolved.parent() {
            if !parent.as_os_str().is_empty() {
                std::fs::create_dir_all(parent)
                    .map_err(|e| format!("cannot create {}: {e}", parent.display()))?;
            }
        }
        std::fs::write(&resolved, contents)
            .map_err(|e| format!("cannot write {}: {e}", resolved.display()))?;
    }
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<u8, String> {
    let file = load_config(&args.output.config)?;
    let case = build_case(&file, &args.case)?;
    let (grid, annulus) = build_grid(&file, &args.grid)?;
    let interval = (
        file.f64(args.interval_lo, "interval-lo")?.unwrap_or(annulus.0),
        file.f64(args.interval_hi, "interval-hi")?.unwrap_or(annulus.1),
    );
    let cfg = VerifyConfig {
        grid,
        annulus,
        trials: file.usize(args.trials, "trials")?.unwrap_or(25),
        seed: file.u64(args.seed, "seed")?.unwrap_or(7),
        slack: file.f64(args.slack, "slack")?.unwrap_or(0.02),
        sample_interval: interval,
        sample_count: sample_count(&file, args.samples, interval)?,
        refine: file.flag(args.refine, "refine")?,
    };
    let outcome = verify_inequality(&case, &cfg).map_err(|e| e.to_string())?;
    write_artifact(&args.output.json, &outcome.report.to_json_string())?;
    write_artifact(&args.output.csv, &trials_to_csv(&outcome.trials))?;
    let r = &outcome.report;
    println!(
        "{} operator={} constant={} observed_min={} verdict={}",
        r.inequality_id,
        r.operator,
        r.paper_constant,
        r.observed_min_quotient,
        if r.passed() { "pass" } else { "fail" }
    );
    Ok(if r.passed() { EXIT_PASS } else { EXIT_FAIL })
}

fn cmd_check_weights(args: CheckWeightsArgs) -> Result<u8, String> {
    let file = load_config(&args.output.config)?;
    let case = build_case(&file, &args.case)?;
    let n = file.usize(args.n, "n")?.unwrap_or(3);
    let interval = (
        file.f64(args.interval_lo, "interval-lo")?.unwrap_or(1e-2),
        file.f64(args.interval_hi, "interval-hi")?.unwrap_or(1e2),
    );
    let count = sample_count(&file, args.samples, interval)?;
    let n_dirs = file.usize(args.directions, "directions")?.unwrap_or(8);
    let seed = file.u64(args.seed, "seed")?.unwrap_or(7);
    let include_mass = file.flag(args.mass, "mass")?;

    let rep = CliffordRep::build(n).map_err(|e| e.to_string())?;
    let pair = case.weight_pair();
    let radii = log_spaced(interval, count);
    let directions = sample_directions(n, n_dirs, seed);
    let matrix = matrix_condition_m(
        &rep,
        &MatrixWeights::Radial(&pair),
        &radii,
        &directions,
        include_mass,
    )
    .map_err(|e| e.to_string())?;

    let mut conditions = vec![matrix.clone()];
    if pair.pairing == Pairing::HalfPower {
        conditions.push(d_constant(&pair, interval, count).map_err(|e| e.to_string())?);
    }
    if let InequalityCase::RadialPhase { phi, .. } = &case {
        conditions.push(gamma_criterion(&phi.weight(), interval, count).map_err(|e| e.to_string())?);
    }

    let mut json = serde_json::to_string_pretty(&serde_json::json!({
        "inequality_id": case.id(),
        "params": case.params(),
        "mass": include_mass,
        "conditions": conditions,
    }))
    .expect("serialization");
    json.push('\n');
    write_artifact(&args.output.json, &json)?;
    println!(
        "{} criterion=matrix_M value={} satisfied={}",
        case.id(),
        matrix.value,
        matrix.satisfied
    );
    Ok(if matrix.satisfied { EXIT_PASS } else { EXIT_FAIL })
}

fn log_spaced(interval: (f64, f64), count: usize) -> Vec<f64> {
    hardy_dirac::weights::log_spaced(interval.0, interval.1, count.max(2))
}

fn cmd_thm5(args: Thm5Args) -> Result<u8, String> {
    let file = load_config(&args.output.config)?;
    let tau = file
        .f64(args.tau, "tau")?
        .ok_or("missing --tau (or 'tau' in the config file)")?;
    let n = file.usize(args.n, "n")?.unwrap_or(3);
    let case = thm5_constant(tau, n).map_err(|e| e.to_string())?;
    if case.degenerate {
        return Err(format!(
            "tau = {tau} is degenerate at k = {}: the estimate requires tau != 2k - n for all integers k",
            case.k_star
        ));
    }
    let mut json = serde_json::to_string_pretty(&case).expect("serialization");
    json.push('\n');
    write_artifact(&args.output.json, &json)?;
    println!(
        "thm5.1 tau={} n={} nu={} k={} d={} c={}{}",
        case.tau,
        case.n,
        case.nu,
        case.k_star,
        case.d,
        case.c,
        if case.tie { " (tie, smaller k chosen)" } else { "" }
    );
    Ok(EXIT_PASS)
}

fn cmd_angular(args: AngularArgs) -> Result<u8, String> {
    let file = load_config(&args.output.config)?;
    let points = file.usize(args.points, "points")?.unwrap_or(48);
    let halfwidth = file.f64(args.halfwidth, "halfwidth")?.unwrap_or(3.0);
    let center = file
        .f64(args.shell_center, "shell-center")?
        .unwrap_or(halfwidth / 2.0);
    let sigma = file
        .f64(args.shell_sigma, "shell-sigma")?
        .unwrap_or(0.08 * halfwidth);
    let lmax = args.lmax.unwrap_or(2);
    let tolerance = file.f64(args.tolerance, "tolerance")?.unwrap_or(1e-6);

    let grid = GridSpec::new(3, points, halfwidth).map_err(|e| e.to_string())?;
    let rep = CliffordRep::build(3).map_err(|e| e.to_string())?;
    let ls: Vec<u32> = (0..=lmax).collect();
    let out = angular_identity_check(&rep, &grid, (center, sigma), &ls)
        .map_err(|e| e.to_string())?;
    let mut json = serde_json::to_string_pretty(&out).expect("serialization");
    json.push('\n');
    write_artifact(&args.output.json, &json)?;
    let pass = out.worst_residual <= tolerance;
    println!(
        "angular-check lmax={} worst_residual={} tolerance={} verdict={}",
        lmax,
        out.worst_residual,
        tolerance,
        if pass { "pass" } else { "fail" }
    );
    Ok(if pass { EXIT_PASS } else { EXIT_FAIL })
}

fn cmd_magnetic(args: MagneticArgs) -> Result<u8, String> {
    let file = load_config(&args.output.config)?;
    let case = build_case(&file, &args.case)?;
    let (grid, annulus) = build_grid(&file, &args.grid)?;
    let cfg = VerifyConfig {
        grid,
        annulus,
        trials: file.usize(args.trials, "trials")?.unwrap_or(10),
        seed: file.u64(args.seed, "seed")?.unwrap_or(7),
        slack: file.f64(args.slack, "slack")?.unwrap_or(0.02),
        sample_interval: annulus,
        sample_count: sample_count(&file, None, annulus)?,
        refine: false,
    };
    let amplitude = file.f64(args.phi_amplitude, "phi-amplitude")?.unwrap_or(0.6);
    let sigma = file.f64(args.phi_sigma, "phi-sigma")?.unwrap_or(0.45);
    let center = match file.string(args.phi_center.clone(), "phi-center") {
        Some(spec) => spec
            .split(',')
            .map(|v| v.trim().parse::<f64>().map_err(|_| format!("bad phi-center '{spec}'")))
            .collect::<Result<Vec<f64>, String>>()?,
        None => {
            let mut c = vec![0.0; grid.n];
            c[0] = 0.1;
            if grid.n > 1 {
                c[1] = -0.05;
            }
            c
        }
    };
    let gauge_tol = file.f64(args.gauge_tol, "gauge-tol")?.unwrap_or(1e-8);

    let pot = MagneticPotential::gaussian(&grid, amplitude, &center, sigma)
        .map_err(|e| e.to_string())?;
    let outcome = magnetic_reduction_check(&case, &cfg, &pot).map_err(|e| e.to_string())?;
    let mut json = serde_json::to_string_pretty(&outcome).expect("serialization");
    json.push('\n');
    write_artifact(&args.output.json, &json)?;
    write_artifact(&args.output.csv, &trials_to_csv(&outcome.trials))?;

    let m = &outcome.magnetic_report;
    let verdicts_match = m.verdict == outcome.base_report.verdict;
    let pass = m.passed() && verdicts_match && outcome.max_relative_gauge_defect <= gauge_tol;
    println!(
        "{} operator={} constant={} observed_min={} gauge_defect={} verdict={}",
        m.inequality_id,
        m.operator,
        m.paper_constant,
        m.observed_min_quotient,
        outcome.max_relative_gauge_defect,
        if pass { "pass" } else { "fail" }
    );
    Ok(if pass { EXIT_PASS } else { EXIT_FAIL })
}

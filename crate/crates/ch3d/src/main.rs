//! Command-line surface: run a solve, the cutoff-convergence ladder, the
//! continuous-dependence experiment, the sup-norm semigroup probe, and
//! potential validation.
//!
//! Exit codes: 0 on success, 1 on configuration or validation problems,
//! 2 on numerical failure (blow-up or a failed runtime assertion).

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use ch3d::config::{parse_config, serialize_config, RunConfig};
use ch3d::csvio;
use ch3d::diagnostics::continuous_dependence;
use ch3d::error::Error;
use ch3d::experiments::convergence_study;
use ch3d::flow::{
    etd_cfl_number, linf_semigroup_probe, rk4_stability_number, solve, Scheme,
    RK4_STABILITY_LIMIT,
};
use ch3d::ops::DealiasRule;
use ch3d::potential::Potential;
use ch3d::snapshot::save_snapshot;

#[derive(Parser)]
#[command(name = "ch3d", version, about = "Pseudo-spectral 3D Cahn-Hilliard solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the configured problem, writing diagnostics and snapshots.
    Run(RunArgs),
    /// Run a ladder of frequency cutoffs against a reference cutoff.
    Converge(ConvergeArgs),
    /// Perturb the initial data and fit an exponential separation envelope.
    Depend(DependArgs),
    /// Sample the sup norm of the bi-harmonic flow of the initial data.
    Semigroup(SemigroupArgs),
    /// Fit growth constants and check positivity of a potential.
    ValidatePotential(ValidatePotentialArgs),
}

/// Config file plus overriding flags; flags win over config keys.
#[derive(Args)]
struct Common {
    /// Run configuration file (TOML)
    #[arg(long)]
    config: PathBuf,
    /// Override grid.n
    #[arg(long)]
    n: Option<usize>,
    /// Override grid.l
    #[arg(long)]
    l: Option<f64>,
    /// Override solver.dt
    #[arg(long)]
    dt: Option<f64>,
    /// Override solver.t_final
    #[arg(long)]
    t_final: Option<f64>,
    /// Override solver.scheme
    #[arg(long)]
    scheme: Option<String>,
    /// Override solver.n_cutoff
    #[arg(long)]
    n_cutoff: Option<f64>,
    /// Override solver.dealias (two_thirds | padded:<degree>)
    #[arg(long)]
    dealias: Option<String>,
    /// Override solver.record_every
    #[arg(long)]
    record_every: Option<usize>,
    /// Override initial.seed
    #[arg(long)]
    seed: Option<u64>,
    /// Override output.dir
    #[arg(long)]
    out_dir: Option<String>,
    /// Override output.csv
    #[arg(long)]
    csv: Option<String>,
    /// Override output.snapshot_every
    #[arg(long)]
    snapshot_every: Option<usize>,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct ConvergeArgs {
    #[command(flatten)]
    common: Common,
    /// Comma-separated cutoff ladder, e.g. 4,8,16
    #[arg(long = "n-list")]
    n_list: String,
    /// Reference cutoff (must exceed the ladder)
    #[arg(long)]
    reference: f64,
}

#[derive(Args)]
struct DependArgs {
    #[command(flatten)]
    common: Common,
    /// Perturbation amplitude applied to a seeded unit-L2 field
    #[arg(long)]
    delta: f64,
    /// Seed of the perturbation field
    #[arg(long, default_value_t = 1)]
    perturb_seed: u64,
}

#[derive(Args)]
struct SemigroupArgs {
    #[command(flatten)]
    common: Common,
    /// Probe horizon
    #[arg(long, default_value_t = 1.0)]
    t_max: f64,
    /// Number of uniformly spaced sample times
    #[arg(long, default_value_t = 201)]
    samples: usize,
}

#[derive(Args)]
struct ValidatePotentialArgs {
    /// Potential name (double_well | zero); omit when giving coefficients
    name: Option<String>,
    /// Coefficients a0,a1,a2,a3,a4 of phi
    #[arg(long, allow_hyphen_values = true)]
    coefficients: Option<String>,
    /// Sample range lo:hi
    #[arg(long, allow_hyphen_values = true, default_value = "-4:4")]
    range: String,
    /// Number of sample points
    #[arg(long, default_value_t = 20001)]
    samples: usize,
    /// Where the JSON summary goes
    #[arg(long)]
    out_dir: Option<String>,
}

enum CliError {
    Lib(Error),
    Usage(String),
    Assertion(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Assertion(m) => write!(f, "assertion failed: {m}"),
        }
    }
}

fn exit_code(e: &CliError) -> u8 {
    match e {
        CliError::Assertion(_) => 2,
        CliError::Lib(Error::BlowUp { .. })
        | CliError::Lib(Error::NonFinitePotential { .. })
        | CliError::Lib(Error::NonFiniteSample { .. }) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Converge(args) => cmd_converge(args),
        Command::Depend(args) => cmd_depend(args),
        Command::Semigroup(args) => cmd_semigroup(args),
        Command::ValidatePotential(args) => cmd_validate_potential(args),
    }
}

fn load_config(common: &Common) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(&common.config).map_err(Error::Io)?;
    let mut cfg = parse_config(&text)?;
    if let Some(n) = common.n {
        cfg.grid.n = n;
    }
    if let Some(l) = common.l {
        cfg.grid.l = l;
    }
    if let Some(dt) = common.dt {
        cfg.solver.dt = dt;
    }
    if let Some(t) = common.t_final {
        cfg.solver.t_final = t;
    }
    if let Some(scheme) = &common.scheme {
        cfg.solver.scheme =
            Scheme::from_str(scheme).map_err(CliError::Usage)?;
    }
    if common.n_cutoff.is_some() {
        cfg.solver.n_cutoff = common.n_cutoff;
    }
    if let Some(rule) = &common.dealias {
        cfg.solver.dealias = DealiasRule::from_str(rule).map_err(CliError::Usage)?;
    }
    if let Some(r) = common.record_every {
        cfg.solver.record_every = r;
    }
    if let Some(seed) = common.seed {
        cfg.initial.seed = seed;
    }
    if common.out_dir.is_some() {
        cfg.output.dir = common.out_dir.clone();
    }
    if let Some(csv) = &common.csv {
        cfg.output.csv = csv.clone();
    }
    if let Some(s) = common.snapshot_every {
        cfg.output.snapshot_every = s;
    }
    Ok(cfg)
}

struct Prepared {
    cfg: RunConfig,
    potential: Potential,
    u0: ch3d::RealField,
    solver: ch3d::flow::SolverConfig,
    out_dir: PathBuf,
}

fn prepare(common: &Common) -> Result<Prepared, CliError> {
    let cfg = load_config(common)?;
    let grid = cfg.build_grid()?;
    let potential = cfg.build_potential()?;
    for w in potential.warnings() {
        eprintln!("warning: {w}");
    }
    let u0 = cfg.initial_data().build(&grid)?;
    let solver = cfg.solver_config();
    solver.validate()?;

    // stability guard: refuse a linearly unstable explicit step, warn about
    // an aggressive nonlinear CFL for the exponential schemes
    match solver.scheme {
        Scheme::GalerkinRk4 => {
            let number = rk4_stability_number(&grid, solver.dt, solver.n_cutoff);
            if number > RK4_STABILITY_LIMIT {
                return Err(CliError::Usage(format!(
                    "dt = {} makes rk4 linearly unstable: dt * max|xi|^4 = {number:.3} > {RK4_STABILITY_LIMIT}; \
                     reduce solver.dt or the cutoff",
                    solver.dt
                )));
            }
        }
        Scheme::Etd1 | Scheme::Etdrk2 => {
            let number = etd_cfl_number(&grid, solver.dt, &potential, &u0);
            if number > 1.0 {
                eprintln!(
                    "warning: nonlinear CFL estimate dt * max|xi|^2 * max|phi'(u0)| = {number:.3} > 1; \
                     the run may be inaccurate"
                );
            }
        }
    }

    let out_dir = PathBuf::from(cfg.output_dir());
    std::fs::create_dir_all(&out_dir).map_err(Error::Io)?;
    Ok(Prepared {
        cfg,
        potential,
        u0,
        solver,
        out_dir,
    })
}

fn write_json(path: &Path, value: &serde_json::Value) -> Result<(), CliError> {
    std::fs::write(path, format!("{:#}\n", value)).map_err(Error::Io)?;
    Ok(())
}

fn cmd_run(args: RunArgs) -> Result<(), CliError> {
    let p = prepare(&args.common)?;
    let snapshot_every = match p.cfg.output.snapshot_every {
        0 => None,
        s => Some(s),
    };
    let csv_path = p.out_dir.join(&p.cfg.output.csv);

    let out = match solve(&p.u0, &p.potential, &p.solver, snapshot_every) {
        Ok(out) => out,
        Err(failure) => {
            // keep whatever was produced before the abort
            if !failure.partial.records.is_empty() {
                let _ = csvio::write_csv(&failure.partial.records, &csv_path);
                eprintln!("partial diagnostics written to {}", csv_path.display());
            }
            return Err(failure.error.into());
        }
    };

    csvio::write_csv(&out.records, &csv_path)?;
    let mut snapshot_paths = Vec::new();
    for state in &out.snapshots {
        let path = p.out_dir.join(format!("snapshot_{:08}.chf", state.step_count));
        save_snapshot(&path, &state.to_real(), state.t)?;
        snapshot_paths.push(path.display().to_string());
    }
    // persist the effective configuration next to the outputs
    std::fs::write(p.out_dir.join("run_config.toml"), serialize_config(&p.cfg))
        .map_err(Error::Io)?;

    let last = out.records.last().expect("at least the initial record");
    let summary = serde_json::json!({
        "command": "run",
        "steps": out.state.step_count,
        "t_final": out.state.t,
        "records": out.records.len(),
        "csv": csv_path.display().to_string(),
        "snapshots": snapshot_paths,
        "final": {
            "mass": last.mass,
            "free_energy": last.free_energy,
            "dissipation": last.dissipation,
            "l2": last.l2,
            "h2": last.h2,
            "linf": last.linf,
        },
    });
    write_json(&p.out_dir.join("run_summary.json"), &summary)?;
    println!(
        "run complete: {} steps to t = {}, {} records -> {}",
        out.state.step_count,
        out.state.t,
        out.records.len(),
        csv_path.display()
    );
    println!(
        "final: mass = {:.6e}, F = {:.6e}, D = {:.6e}, |u|_inf = {:.6e}",
        last.mass, last.free_energy, last.dissipation, last.linf
    );
    Ok(())
}

fn cmd_converge(args: ConvergeArgs) -> Result<(), CliError> {
    let p = prepare(&args.common)?;
    let ladder: Vec<f64> = args
        .n_list
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("bad cutoff '{s}' in --n-list")))
        })
        .collect::<Result<_, _>>()?;

    let report = convergence_study(&p.u0, &p.potential, &p.solver, &ladder, args.reference)?;

    println!("cutoff ladder vs reference n = {}:", report.reference_cutoff);
    for (n, err) in &report.errors {
        println!("  n = {n:>6}: |u_n(T) - u_ref(T)|_L2 = {err:.6e}");
    }
    println!(
        "strictly decreasing: {}; halving: {}",
        report.strictly_decreasing, report.halving
    );
    let summary = serde_json::json!({
        "command": "converge",
        "reference": report.reference_cutoff,
        "t_final": report.t_final,
        "errors": report.errors,
        "strictly_decreasing": report.strictly_decreasing,
        "halving": report.halving,
    });
    write_json(&p.out_dir.join("converge_summary.json"), &summary)?;

    if !report.strictly_decreasing {
        return Err(CliError::Assertion(
            "ladder errors are not strictly decreasing".into(),
        ));
    }
    Ok(())
}

fn cmd_depend(args: DependArgs) -> Result<(), CliError> {
    let p = prepare(&args.common)?;
    let report = continuous_dependence(
        &p.u0,
        args.delta,
        &p.potential,
        &p.solver,
        args.perturb_seed,
    )?;

    let d0 = report.diff_l2.first().copied().unwrap_or(0.0);
    let d_last = report.diff_l2.last().copied().unwrap_or(0.0);
    println!(
        "separation: |d(0)| = {d0:.6e}, |d(T)| = {d_last:.6e}, fitted C = {:.6}, bound_ok = {}",
        report.fitted_c, report.bound_ok
    );
    let summary = serde_json::json!({
        "command": "depend",
        "delta": args.delta,
        "perturb_seed": args.perturb_seed,
        "times": report.times,
        "diff_l2": report.diff_l2,
        "fitted_c": report.fitted_c,
        "bound_ok": report.bound_ok,
    });
    write_json(&p.out_dir.join("depend_summary.json"), &summary)?;

    if !report.bound_ok {
        return Err(CliError::Assertion(
            "separation left the fitted exponential envelope".into(),
        ));
    }
    Ok(())
}

fn cmd_semigroup(args: SemigroupArgs) -> Result<(), CliError> {
    let p = prepare(&args.common)?;
    let probe = linf_semigroup_probe(&p.u0, args.t_max, args.samples)?;

    match probe.first_violation {
        Some(t) => println!(
            "sup norm first exceeded its initial value {:.6e} at t = {t:.6e}",
            probe.initial_linf
        ),
        None => println!(
            "no sup-norm growth on [0, {}]: empirical bound holds at all {} sample times",
            probe.t_max, probe.samples
        ),
    }
    println!(
        "max |u|_inf = {:.9e} at t = {:.6e} (initial {:.9e})",
        probe.max_linf, probe.max_linf_time, probe.initial_linf
    );
    let summary = serde_json::json!({
        "command": "semigroup",
        "t_max": probe.t_max,
        "samples": probe.samples,
        "initial_linf": probe.initial_linf,
        "max_linf": probe.max_linf,
        "max_linf_time": probe.max_linf_time,
        "first_violation": probe.first_violation,
    });
    write_json(&p.out_dir.join("semigroup_summary.json"), &summary)?;
    Ok(())
}

fn cmd_validate_potential(args: ValidatePotentialArgs) -> Result<(), CliError> {
    let potential = match (&args.name, &args.coefficients) {
        (Some(name), None) => match name.as_str() {
            "double_well" => Potential::double_well(),
            "zero" => Potential::zero(),
            other => {
                return Err(CliError::Usage(format!(
                    "unknown potential '{other}' (use double_well, zero, or --coefficients)"
                )))
            }
        },
        (None, Some(list)) => {
            let nums: Vec<f64> = list
                .split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|_| CliError::Usage(format!("bad coefficient '{s}'")))
                })
                .collect::<Result<_, _>>()?;
            let arr: [f64; 5] = nums
                .try_into()
                .map_err(|_| CliError::Usage("need exactly 5 coefficients a0..a4".into()))?;
            Potential::polynomial(arr)?
        }
        _ => {
            return Err(CliError::Usage(
                "give a potential name or --coefficients, not both".into(),
            ))
        }
    };

    let (lo, hi) = args
        .range
        .split_once(':')
        .and_then(|(a, b)| Some((a.parse::<f64>().ok()?, b.parse::<f64>().ok()?)))
        .ok_or_else(|| CliError::Usage(format!("bad --range '{}', expected lo:hi", args.range)))?;

    for w in potential.warnings() {
        eprintln!("warning: {w}");
    }
    let report = potential.validate_growth(lo, hi, args.samples)?;

    println!(
        "potential '{}' with p = {} on [{lo}, {hi}] ({} samples):",
        potential.name(),
        potential.growth_exponent(),
        args.samples
    );
    println!("  fitted C for phi   = {:.10}", report.fitted_c[0]);
    println!("  fitted C for phi'  = {:.10}", report.fitted_c[1]);
    println!("  fitted C for phi'' = {:.10}", report.fitted_c[2]);
    println!("  density nonnegative: {}", report.positivity_ok);

    let summary = serde_json::json!({
        "command": "validate_potential",
        "name": potential.name(),
        "p": potential.growth_exponent(),
        "range": [lo, hi],
        "samples": args.samples,
        "fitted_c": report.fitted_c,
        "satisfied": report.satisfied,
        "positivity_ok": report.positivity_ok,
        "warnings": potential.warnings(),
    });
    let dir = args
        .out_dir
        .clone()
        .or_else(|| std::env::var(ch3d::config::OUTPUT_DIR_ENV).ok())
        .unwrap_or_else(|| ".".into());
    std::fs::create_dir_all(&dir).map_err(Error::Io)?;
    write_json(&Path::new(&dir).join("validate_potential_summary.json"), &summary)?;
    Ok(())
}

//! `sdof`: command-line front end for the S.D.o.F. calculus, the grid
//! verifier, and the Monte Carlo secrecy-rate simulator.
//!
//! Exit codes are part of the contract: 0 success, 2 bad arguments or bad
//! scenario config, 3 numerical or simulation failure, 4 verification
//! mismatches.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use sdof_core::dof::{oracle_max_over_split, sdof_active, sdof_active_max, worst_case_sdof};
use sdof_core::simulator::{run_scenario, ScenarioSpec, Scheme, SweepVar};
use sdof_core::verify::{
    verify_helper_allocation, verify_optimal_split_with, verify_stream_budget, verify_worst_case,
    verify_worst_case_positivity, GridBounds, GridReport,
};
use sdof_core::{AntennaConfig, SdofError};

const EXIT_USAGE: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_VERIFY: u8 = 4;

#[derive(Parser)]
#[command(
    name = "sdof",
    version,
    about = "Secrecy degrees of freedom and secrecy rates for MIMO wiretap \
             channels with a full-duplex active eavesdropper"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// S.D.o.F. of an antenna configuration, with Bob's transmit/receive
    /// split fixed (--nbt) or optimized over all splits (omit --nbt).
    Sdof(SdofArgs),
    /// Worst-case S.D.o.F. over every way Eve can split her antennas
    /// between jamming and eavesdropping.
    Worstcase(WorstcaseArgs),
    /// Check every closed form against exhaustive search over full antenna
    /// grids; exits 0 only if no grid finds a counterexample.
    Verify(VerifyArgs),
    /// Run a Monte Carlo secrecy-rate sweep described by a scenario file.
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct SdofArgs {
    /// Alice's transmit antennas.
    #[arg(long)]
    na: u32,
    /// Bob's total antennas.
    #[arg(long)]
    nb: u32,
    /// Bob's jamming antennas; omit to search all splits.
    #[arg(long)]
    nbt: Option<u32>,
    /// Eve's jamming antennas.
    #[arg(long)]
    net: u32,
    /// Eve's eavesdropping antennas.
    #[arg(long)]
    ner: u32,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
}

#[derive(Args)]
struct WorstcaseArgs {
    /// Alice's transmit antennas.
    #[arg(long)]
    na: u32,
    /// Bob's total antennas.
    #[arg(long)]
    nb: u32,
    /// Eve's total antennas; the adversary picks the split.
    #[arg(long)]
    ne: u32,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
}

#[derive(Args)]
struct VerifyArgs {
    /// Largest Alice antenna count to sweep.
    #[arg(long, default_value_t = 10)]
    na_max: u32,
    /// Largest Bob antenna count to sweep.
    #[arg(long, default_value_t = 12)]
    nb_max: u32,
    /// Largest per-side Eve antenna count to sweep.
    #[arg(long, default_value_t = 12)]
    ne_max: u32,
    /// Largest helper + destination antenna budget to sweep.
    #[arg(long, default_value_t = 15)]
    nsum_max: u32,
    /// Corrupt the optimal-split closed form before checking; proves the
    /// verifier catches wrong formulas. Must exit nonzero.
    #[arg(long, hide = true)]
    self_test_fault: bool,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    format: ReportFormat,
}

#[derive(Args)]
struct SimulateArgs {
    /// Scenario file (TOML, keys mirroring the simulator's scenario spec).
    #[arg(long)]
    config: PathBuf,
    /// Override the scenario's trial count.
    #[arg(long)]
    trials: Option<u32>,
    /// Override the scenario's master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output path; default is the config stem + .csv/.json, placed in
    /// $SDOF_OUT_DIR if set, else the working directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    format: TableFormat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Csv,
    Json,
}

/// A failed run: what to print on stderr and which code to exit with.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<SdofError> for Failure {
    fn from(e: SdofError) -> Self {
        let code = match &e {
            SdofError::Config(_) | SdofError::Dimension(_) => EXIT_USAGE,
            SdofError::Numerical(_) | SdofError::Simulation(_) => EXIT_NUMERICAL,
        };
        Self { code, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Sdof(args) => cmd_sdof(args),
        Command::Worstcase(args) => cmd_worstcase(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Simulate(args) => cmd_simulate(args),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

// --- sdof ---

#[derive(Serialize)]
struct FixedSplitReport {
    n_a: u32,
    n_b: u32,
    n_b_t: u32,
    n_b_r: u32,
    n_e_t: u32,
    n_e_r: u32,
    dof: u32,
}

#[derive(Serialize)]
struct BestSplitReport {
    n_a: u32,
    n_b: u32,
    n_e_t: u32,
    n_e_r: u32,
    dof: u32,
    nbt_star: u32,
    maximizing_splits: Vec<u32>,
}

fn cmd_sdof(args: &SdofArgs) -> Result<ExitCode, Failure> {
    match args.nbt {
        Some(nbt) => {
            let cfg = AntennaConfig::new(args.na, args.nb, nbt, args.net, args.ner)?;
            let report = FixedSplitReport {
                n_a: cfg.n_a(),
                n_b: cfg.n_b(),
                n_b_t: cfg.n_b_t(),
                n_b_r: cfg.n_b_r(),
                n_e_t: cfg.n_e_t(),
                n_e_r: cfg.n_e_r(),
                dof: sdof_active(&cfg),
            };
            match args.format {
                ReportFormat::Json => println!("{}", to_json(&report)),
                ReportFormat::Text => {
                    println!(
                        "n_a={} n_b={} (n_b_t={} jam, n_b_r={} receive) vs n_e_t={} n_e_r={}",
                        report.n_a, report.n_b, report.n_b_t, report.n_b_r, report.n_e_t,
                        report.n_e_r
                    );
                    println!("sdof = {}", report.dof);
                }
            }
        }
        None => {
            // Validate counts through the same constructor the fixed path
            // uses, then search; the closed form supplies one optimizer and
            // the exhaustive route supplies the full argmax set.
            AntennaConfig::new(args.na, args.nb, 0, args.net, args.ner)?;
            let closed = sdof_active_max(args.na, args.nb, args.net, args.ner);
            let oracle = oracle_max_over_split(args.na, args.nb, args.net, args.ner);
            let report = BestSplitReport {
                n_a: args.na,
                n_b: args.nb,
                n_e_t: args.net,
                n_e_r: args.ner,
                dof: closed.dof,
                nbt_star: closed.optimizer.expect("optimized form always names a split"),
                maximizing_splits: oracle.optimizer_set,
            };
            match args.format {
                ReportFormat::Json => println!("{}", to_json(&report)),
                ReportFormat::Text => {
                    println!(
                        "n_a={} n_b={} vs n_e_t={} n_e_r={}",
                        report.n_a, report.n_b, report.n_e_t, report.n_e_r
                    );
                    println!("max sdof = {} at n_b_t = {}", report.dof, report.nbt_star);
                    println!("maximizing splits: {}", join(&report.maximizing_splits));
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

// --- worstcase ---

#[derive(Serialize)]
struct WorstCaseReport {
    n_a: u32,
    n_b: u32,
    n_e: u32,
    dof: u32,
    minimizing_splits: Vec<u32>,
    /// Eve putting every antenna on listening attains the worst case.
    eavesdrop_only_worst: bool,
    /// Eve putting every antenna on jamming attains the worst case.
    jam_only_worst: bool,
}

fn cmd_worstcase(args: &WorstcaseArgs) -> Result<ExitCode, Failure> {
    AntennaConfig::new(args.na, args.nb, 0, 0, args.ne)?;
    let worst = worst_case_sdof(args.na, args.nb, args.ne);
    let report = WorstCaseReport {
        n_a: args.na,
        n_b: args.nb,
        n_e: args.ne,
        dof: worst.dof,
        eavesdrop_only_worst: worst.optimizer_set.contains(&0),
        jam_only_worst: worst.optimizer_set.contains(&args.ne),
        minimizing_splits: worst.optimizer_set,
    };
    match args.format {
        ReportFormat::Json => println!("{}", to_json(&report)),
        ReportFormat::Text => {
            println!("n_a={} n_b={} n_e={}", report.n_a, report.n_b, report.n_e);
            println!("worst-case sdof = {}", report.dof);
            println!("minimizing Eve splits (n_e_t): {}", join(&report.minimizing_splits));
            println!(
                "worst case at pure eavesdropping (n_e_t=0): {}",
                yes_no(report.eavesdrop_only_worst)
            );
            println!(
                "worst case at pure jamming (n_e_t={}): {}",
                report.n_e,
                yes_no(report.jam_only_worst)
            );
        }
    }
    Ok(ExitCode::SUCCESS)
}

// --- verify ---

#[derive(Serialize)]
struct VerifyReport {
    bounds: GridBounds,
    self_test_fault: bool,
    reports: Vec<GridReport>,
    total_mismatches: usize,
    passed: bool,
}

fn cmd_verify(args: &VerifyArgs) -> Result<ExitCode, Failure> {
    let bounds = GridBounds {
        na_max: args.na_max,
        nb_max: args.nb_max,
        ne_max: args.ne_max,
        nsum_max: args.nsum_max,
    };
    // Same sequence as the library's verify_all, spelled out so the
    // self-test hook can swap in a corrupted closed form.
    let optimal_split = if args.self_test_fault {
        verify_optimal_split_with(
            |n_a, n_b, n_e_t, n_e_r| {
                let mut r = sdof_active_max(n_a, n_b, n_e_t, n_e_r);
                r.dof += 1;
                r
            },
            &bounds,
        )
    } else {
        verify_optimal_split_with(sdof_active_max, &bounds)
    };
    let reports = vec![
        optimal_split,
        verify_worst_case(&bounds),
        verify_helper_allocation(&bounds),
        verify_stream_budget(&bounds),
        verify_worst_case_positivity(&bounds),
    ];
    let total_mismatches: usize = reports.iter().map(|r| r.mismatches.len()).sum();
    let report = VerifyReport {
        bounds,
        self_test_fault: args.self_test_fault,
        reports,
        total_mismatches,
        passed: total_mismatches == 0,
    };
    match args.format {
        ReportFormat::Json => println!("{}", to_json(&report)),
        ReportFormat::Text => {
            if report.self_test_fault {
                println!("self-test: optimal-split closed form deliberately corrupted");
            }
            println!(
                "grid bounds: n_a <= {}, n_b <= {}, n_e (per side) <= {}, n_sum <= {}",
                bounds.na_max, bounds.nb_max, bounds.ne_max, bounds.nsum_max
            );
            for r in &report.reports {
                println!(
                    "{:<24} {:>8} checks {:>6} mismatches   {}",
                    r.name,
                    r.checks,
                    r.mismatches.len(),
                    if r.passed() { "ok" } else { "FAIL" }
                );
                for m in &r.mismatches {
                    println!("  {m}");
                }
            }
            if report.passed {
                println!("verification passed: no counterexamples");
            } else {
                println!(
                    "verification FAILED: {} counterexample(s) across {} grid(s)",
                    report.total_mismatches,
                    report.reports.iter().filter(|r| !r.passed()).count()
                );
            }
        }
    }
    if report.passed {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(EXIT_VERIFY))
    }
}

// --- simulate ---

/// Scenario file schema. Flat TOML; unknown keys are rejected so a typo'd
/// field fails the run instead of silently falling back to a default.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    n_a: u32,
    n_b: u32,
    /// Bob's jamming antennas; omitted means the closed-form optimum.
    n_b_t: Option<u32>,
    n_e_t: u32,
    n_e_r: u32,
    /// Alice sits at (-r, 0), Bob at (r, 0).
    r: f64,
    eve_x: Option<f64>,
    eve_y: Option<f64>,
    path_loss_exp: Option<f64>,
    rho_b: Option<f64>,
    rho_e: Option<f64>,
    power_dbm: Option<f64>,
    sigma2_dbm: Option<f64>,
    alpha_h: Option<f64>,
    alpha_g: Option<f64>,
    sweep: String,
    sweep_values: Option<Vec<f64>>,
    sweep_start: Option<f64>,
    sweep_stop: Option<f64>,
    sweep_steps: Option<u32>,
    trials: Option<u32>,
    seed: Option<u64>,
    schemes: Option<Vec<String>>,
}

impl FileConfig {
    fn resolve(self) -> Result<ScenarioSpec, Failure> {
        let n_b_t = match self.n_b_t {
            Some(n) => n,
            None => sdof_active_max(self.n_a, self.n_b, self.n_e_t, self.n_e_r)
                .optimizer
                .expect("optimized form always names a split"),
        };
        let cfg = AntennaConfig::new(self.n_a, self.n_b, n_b_t, self.n_e_t, self.n_e_r)?;
        let sweep: SweepVar = self.sweep.parse()?;
        let sweep_values = match (self.sweep_values, self.sweep_start, self.sweep_stop, self.sweep_steps) {
            (Some(values), None, None, None) => values,
            (None, Some(start), Some(stop), Some(steps)) => linspace(start, stop, steps)?,
            (None, None, None, None) => {
                return Err(Failure::usage(
                    "scenario needs sweep_values or sweep_start/sweep_stop/sweep_steps",
                ))
            }
            (Some(_), _, _, _) => {
                return Err(Failure::usage(
                    "give sweep_values or sweep_start/sweep_stop/sweep_steps, not both",
                ))
            }
            _ => {
                return Err(Failure::usage(
                    "sweep_start, sweep_stop and sweep_steps must be given together",
                ))
            }
        };
        let schemes = match self.schemes {
            Some(names) => names
                .iter()
                .map(|s| s.parse::<Scheme>())
                .collect::<Result<Vec<_>, _>>()?,
            None => vec![Scheme::ProposedFd, Scheme::HdBaseline],
        };
        let spec = ScenarioSpec {
            cfg,
            r: self.r,
            eve_pos: [self.eve_x.unwrap_or(0.0), self.eve_y.unwrap_or(-self.r)],
            path_loss_exp: self.path_loss_exp.unwrap_or(3.5),
            rho_b: self.rho_b.unwrap_or(1.0),
            rho_e: self.rho_e.unwrap_or(1.0),
            power_dbm: self.power_dbm.unwrap_or(0.0),
            sigma2_dbm: self.sigma2_dbm.unwrap_or(-60.0),
            alpha_h: self.alpha_h.unwrap_or(0.0),
            alpha_g: self.alpha_g.unwrap_or(0.0),
            sweep,
            sweep_values,
            trials: self.trials.unwrap_or(1000),
            seed: self.seed.unwrap_or(1),
            schemes,
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// Inclusive endpoints, `steps` evenly spaced points.
fn linspace(start: f64, stop: f64, steps: u32) -> Result<Vec<f64>, Failure> {
    if steps < 2 {
        return Err(Failure::usage(
            "sweep_steps must be at least 2; list a single point via sweep_values",
        ));
    }
    let h = (stop - start) / f64::from(steps - 1);
    Ok((0..steps).map(|i| start + f64::from(i) * h).collect())
}

fn cmd_simulate(args: &SimulateArgs) -> Result<ExitCode, Failure> {
    let raw = std::fs::read_to_string(&args.config).map_err(|e| {
        Failure::usage(format!("cannot read config {}: {e}", args.config.display()))
    })?;
    let file: FileConfig = toml::from_str(&raw).map_err(|e| {
        Failure::usage(format!("bad scenario config {}: {e}", args.config.display()))
    })?;
    let mut spec = file.resolve()?;
    if let Some(trials) = args.trials {
        spec.trials = trials;
    }
    if let Some(seed) = args.seed {
        spec.seed = seed;
    }
    spec.validate()?;

    println!("seed = {}", spec.seed);
    println!("config sha256 = {}", spec.digest());
    println!(
        "sweep {} over {} point(s), {} trial(s) per point, schemes: {}",
        spec.sweep.name(),
        spec.sweep_values.len(),
        spec.trials,
        spec.schemes.iter().map(|s| s.name()).collect::<Vec<_>>().join(" ")
    );

    let result = run_scenario(&spec)?;

    let ext = match args.format {
        TableFormat::Csv => "csv",
        TableFormat::Json => "json",
    };
    let out = args.out.clone().unwrap_or_else(|| default_out(&args.config, ext));
    if let Some(parent) = out.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| Failure {
                code: 1,
                message: format!("cannot create output directory {}: {e}", parent.display()),
            })?;
        }
    }
    let write = |path: &Path, data: &str| -> Result<(), Failure> {
        std::fs::write(path, data).map_err(|e| Failure {
            code: 1,
            message: format!("cannot write {}: {e}", path.display()),
        })
    };
    match args.format {
        TableFormat::Csv => {
            write(&out, &result.to_csv())?;
            let meta = PathBuf::from(format!("{}.meta.json", out.display()));
            write(&meta, &result.meta_json())?;
            println!("wrote {} (meta: {})", out.display(), meta.display());
        }
        TableFormat::Json => {
            write(&out, &to_json(&result))?;
            println!("wrote {}", out.display());
        }
    }
    let failed: u32 = result.rows.iter().map(|r| r.failed_trials).sum();
    if failed > 0 {
        println!("failed trials = {failed}");
    }
    Ok(ExitCode::SUCCESS)
}

/// Config stem + extension, under $SDOF_OUT_DIR when set.
fn default_out(config: &Path, ext: &str) -> PathBuf {
    let stem = config
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "scenario".into());
    let dir = std::env::var_os("SDOF_OUT_DIR").map(PathBuf::from).unwrap_or_default();
    dir.join(format!("{stem}.{ext}"))
}

// --- small helpers ---

fn to_json(value: &impl Serialize) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize")
}

fn join(values: &[u32]) -> String {
    values.iter().map(u32::to_string).collect::<Vec<_>>().join(" ")
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

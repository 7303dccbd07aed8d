//! Browser bindings for the S.D.o.F. toolkit.
//!
//! Three exports back the demo page: [`dof_surface`] maps Bob's
//! transmit/receive split to achievable S.D.o.F., [`worst_case_report`]
//! maps Eve's split to the guarantee against her best choice, and
//! [`rate_sweep`] runs a small Monte Carlo secrecy-rate campaign.
//!
//! Every export speaks JSON strings: scalar antenna counts in, one JSON
//! document out, errors as `{"error": "..."}` instead of an exception.
//! The functions are plain Rust underneath, so the whole surface is tested
//! on the host; wasm-bindgen only adds the JS glue when targeting wasm.

use serde::{Deserialize, Serialize};
use wasm_bindgen::prelude::wasm_bindgen;

use sdof_core::dof::{oracle_max_over_split, sdof_active, sdof_active_max, worst_case_sdof};
use sdof_core::simulator::{run_scenario, ScenarioSpec, Scheme};
use sdof_core::AntennaConfig;

/// Largest per-node antenna count the demo accepts; keeps every call
/// comfortably inside a frame budget.
pub const MAX_ANTENNAS: u32 = 16;
/// Monte Carlo trial cap per sweep point.
pub const MAX_TRIALS: u32 = 200;
/// Sweep resolution cap.
pub const MAX_POINTS: u32 = 101;

#[derive(Serialize)]
struct ErrorReply<'a> {
    error: &'a str,
}

fn reply(result: Result<String, String>) -> String {
    match result {
        Ok(json) => json,
        Err(e) => serde_json::to_string(&ErrorReply { error: &e }).expect("error serializes"),
    }
}

fn check_counts(counts: &[(&str, u32)]) -> Result<(), String> {
    for (name, n) in counts {
        if *n > MAX_ANTENNAS {
            return Err(format!("{name} = {n} exceeds the demo cap of {MAX_ANTENNAS} antennas"));
        }
    }
    Ok(())
}

// --- split explorer ---

#[derive(Serialize)]
struct SplitPoint {
    n_b_t: u32,
    n_b_r: u32,
    dof: u32,
}

#[derive(Serialize)]
struct SurfaceReport {
    n_a: u32,
    n_b: u32,
    n_e_t: u32,
    n_e_r: u32,
    splits: Vec<SplitPoint>,
    best_dof: u32,
    nbt_star: u32,
    maximizing_splits: Vec<u32>,
}

/// S.D.o.F. of every Bob split for fixed Eve counts, plus the optimum.
#[wasm_bindgen]
pub fn dof_surface(n_a: u32, n_b: u32, n_e_t: u32, n_e_r: u32) -> String {
    reply(dof_surface_impl(n_a, n_b, n_e_t, n_e_r))
}

fn dof_surface_impl(n_a: u32, n_b: u32, n_e_t: u32, n_e_r: u32) -> Result<String, String> {
    check_counts(&[("n_a", n_a), ("n_b", n_b), ("n_e_t", n_e_t), ("n_e_r", n_e_r)])?;
    let splits = (0..=n_b)
        .map(|n_b_t| {
            let cfg = AntennaConfig::new(n_a, n_b, n_b_t, n_e_t, n_e_r)
                .map_err(|e| e.to_string())?;
            Ok(SplitPoint { n_b_t, n_b_r: cfg.n_b_r(), dof: sdof_active(&cfg) })
        })
        .collect::<Result<Vec<_>, String>>()?;
    let closed = sdof_active_max(n_a, n_b, n_e_t, n_e_r);
    let oracle = oracle_max_over_split(n_a, n_b, n_e_t, n_e_r);
    let report = SurfaceReport {
        n_a,
        n_b,
        n_e_t,
        n_e_r,
        splits,
        best_dof: closed.dof,
        nbt_star: closed.optimizer.expect("optimized form always names a split"),
        maximizing_splits: oracle.optimizer_set,
    };
    serde_json::to_string(&report).map_err(|e| e.to_string())
}

// --- adversary view ---

#[derive(Serialize)]
struct EvePoint {
    n_e_t: u32,
    n_e_r: u32,
    dof: u32,
}

#[derive(Serialize)]
struct WorstCaseReport {
    n_a: u32,
    n_b: u32,
    n_e: u32,
    eve_splits: Vec<EvePoint>,
    worst_dof: u32,
    minimizing_splits: Vec<u32>,
    eavesdrop_only_worst: bool,
    jam_only_worst: bool,
}

/// Best-achievable S.D.o.F. against every Eve split, plus the minimum Eve
/// can force and which pure strategies attain it.
#[wasm_bindgen]
pub fn worst_case_report(n_a: u32, n_b: u32, n_e: u32) -> String {
    reply(worst_case_report_impl(n_a, n_b, n_e))
}

fn worst_case_report_impl(n_a: u32, n_b: u32, n_e: u32) -> Result<String, String> {
    check_counts(&[("n_a", n_a), ("n_b", n_b), ("n_e", n_e)])?;
    AntennaConfig::new(n_a, n_b, 0, 0, n_e).map_err(|e| e.to_string())?;
    let eve_splits = (0..=n_e)
        .map(|n_e_t| EvePoint {
            n_e_t,
            n_e_r: n_e - n_e_t,
            dof: sdof_active_max(n_a, n_b, n_e_t, n_e - n_e_t).dof,
        })
        .collect();
    let worst = worst_case_sdof(n_a, n_b, n_e);
    let report = WorstCaseReport {
        n_a,
        n_b,
        n_e,
        eve_splits,
        worst_dof: worst.dof,
        eavesdrop_only_worst: worst.optimizer_set.contains(&0),
        jam_only_worst: worst.optimizer_set.contains(&n_e),
        minimizing_splits: worst.optimizer_set,
    };
    serde_json::to_string(&report).map_err(|e| e.to_string())
}

// --- rate sweep ---

/// Demo sweep request. Same keys as the CLI scenario format where they
/// overlap; the sweep is always given as start/stop/steps.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DemoSpec {
    n_a: u32,
    n_b: u32,
    n_b_t: Option<u32>,
    n_e_t: u32,
    n_e_r: u32,
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
    sweep_start: f64,
    sweep_stop: f64,
    sweep_steps: u32,
    trials: Option<u32>,
    seed: Option<u64>,
    schemes: Option<Vec<String>>,
}

/// Runs a bounded Monte Carlo sweep described by a JSON document and
/// returns the full result table as JSON.
#[wasm_bindgen]
pub fn rate_sweep(spec_json: &str) -> String {
    reply(rate_sweep_impl(spec_json))
}

fn rate_sweep_impl(spec_json: &str) -> Result<String, String> {
    let demo: DemoSpec = serde_json::from_str(spec_json).map_err(|e| e.to_string())?;
    check_counts(&[
        ("n_a", demo.n_a),
        ("n_b", demo.n_b),
        ("n_e_t", demo.n_e_t),
        ("n_e_r", demo.n_e_r),
    ])?;
    let trials = demo.trials.unwrap_or(50);
    if trials > MAX_TRIALS {
        return Err(format!("trials = {trials} exceeds the demo cap of {MAX_TRIALS}"));
    }
    if !(2..=MAX_POINTS).contains(&demo.sweep_steps) {
        return Err(format!("sweep_steps must be between 2 and {MAX_POINTS}"));
    }
    let n_b_t = match demo.n_b_t {
        Some(n) => n,
        None => sdof_active_max(demo.n_a, demo.n_b, demo.n_e_t, demo.n_e_r)
            .optimizer
            .expect("optimized form always names a split"),
    };
    let cfg = AntennaConfig::new(demo.n_a, demo.n_b, n_b_t, demo.n_e_t, demo.n_e_r)
        .map_err(|e| e.to_string())?;
    let schemes = match &demo.schemes {
        Some(names) => names
            .iter()
            .map(|s| s.parse::<Scheme>().map_err(|e| e.to_string()))
            .collect::<Result<Vec<_>, _>>()?,
        None => vec![Scheme::ProposedFd, Scheme::HdBaseline],
    };
    let h = (demo.sweep_stop - demo.sweep_start) / f64::from(demo.sweep_steps - 1);
    let spec = ScenarioSpec {
        cfg,
        r: demo.r,
        eve_pos: [demo.eve_x.unwrap_or(0.0), demo.eve_y.unwrap_or(-demo.r)],
        path_loss_exp: demo.path_loss_exp.unwrap_or(3.5),
        rho_b: demo.rho_b.unwrap_or(1.0),
        rho_e: demo.rho_e.unwrap_or(1.0),
        power_dbm: demo.power_dbm.unwrap_or(0.0),
        sigma2_dbm: demo.sigma2_dbm.unwrap_or(-60.0),
        alpha_h: demo.alpha_h.unwrap_or(0.0),
        alpha_g: demo.alpha_g.unwrap_or(0.0),
        sweep: demo.sweep.parse().map_err(|e: sdof_core::SdofError| e.to_string())?,
        sweep_values: (0..demo.sweep_steps)
            .map(|i| demo.sweep_start + f64::from(i) * h)
            .collect(),
        trials,
        seed: demo.seed.unwrap_or(1),
        schemes,
    };
    let result = run_scenario(&spec).map_err(|e| e.to_string())?;
    serde_json::to_string(&result).map_err(|e| e.to_string())
}

//! Monte-Carlo evaluation: per-realization secrecy rates, empirical
//! degrees-of-freedom slopes, and deterministic sweep campaigns.
//!
//! Determinism contract: every trial's randomness derives from
//! (master seed, trial index) alone, never from execution order, so a
//! parallel run produces byte-identical results to a serial one. Trials
//! are collected in index order and aggregated sequentially afterwards.

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::channel::{
    dbm_to_watts, draw_channels, perturb_csi, ChannelSet, CsiPerturbation, Geometry, LinkFamily,
};
use crate::dof::{sdof_active, AntennaConfig};
use crate::numerics::{rate_logdet, CMatrix};
use crate::precoding::{build_precoders, hd_baseline, PrecoderPair};
use crate::{Result, SdofError};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Transmit scheme evaluated at each sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Scheme {
    /// Full-duplex design with the configured Bob split.
    ProposedFd,
    /// Bob only listens; Alice uses whitened generalized eigendirections.
    HdBaseline,
    /// Full-duplex design with an overridden Bob transmit count.
    AltSplit(u32),
}

impl Scheme {
    pub fn name(&self) -> String {
        match self {
            Scheme::ProposedFd => "proposed_fd".into(),
            Scheme::HdBaseline => "hd_baseline".into(),
            Scheme::AltSplit(n) => format!("alt_split:{n}"),
        }
    }
}

impl std::str::FromStr for Scheme {
    type Err = SdofError;

    fn from_str(s: &str) -> Result<Self> {
        if s == "proposed_fd" {
            return Ok(Scheme::ProposedFd);
        }
        if s == "hd_baseline" {
            return Ok(Scheme::HdBaseline);
        }
        if let Some(n) = s.strip_prefix("alt_split:") {
            let n = n
                .parse::<u32>()
                .map_err(|_| SdofError::Config(format!("bad transmit count in scheme '{s}'")))?;
            return Ok(Scheme::AltSplit(n));
        }
        Err(SdofError::Config(format!(
            "unknown scheme '{s}' (expected proposed_fd, hd_baseline, or alt_split:N)"
        )))
    }
}

/// Quantity swept across the x-axis of a campaign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SweepVar {
    EveX,
    EveY,
    Rho,
    RhoB,
    RhoE,
    AlphaH,
    AlphaG,
    PowerDbm,
}

impl SweepVar {
    pub fn name(&self) -> &'static str {
        match self {
            SweepVar::EveX => "eve_x",
            SweepVar::EveY => "eve_y",
            SweepVar::Rho => "rho",
            SweepVar::RhoB => "rho_b",
            SweepVar::RhoE => "rho_e",
            SweepVar::AlphaH => "alpha_h",
            SweepVar::AlphaG => "alpha_g",
            SweepVar::PowerDbm => "power_dbm",
        }
    }
}

impl std::str::FromStr for SweepVar {
    type Err = SdofError;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "eve_x" => SweepVar::EveX,
            "eve_y" => SweepVar::EveY,
            "rho" => SweepVar::Rho,
            "rho_b" => SweepVar::RhoB,
            "rho_e" => SweepVar::RhoE,
            "alpha_h" => SweepVar::AlphaH,
            "alpha_g" => SweepVar::AlphaG,
            "power_dbm" => SweepVar::PowerDbm,
            _ => {
                return Err(SdofError::Config(format!(
                    "unknown sweep variable '{s}' (expected eve_x, eve_y, rho, rho_b, rho_e, \
                     alpha_h, alpha_g, or power_dbm)"
                )))
            }
        })
    }
}

/// Full description of one sweep campaign. Alice sits at (-r, 0) and Bob
/// at (r, 0); `eve_pos` is Eve's base position, overridden coordinatewise
/// by the eve_x / eve_y sweeps.
#[derive(Debug, Clone, Serialize)]
pub struct ScenarioSpec {
    pub cfg: AntennaConfig,
    pub r: f64,
    pub eve_pos: [f64; 2],
    pub path_loss_exp: f64,
    pub rho_b: f64,
    pub rho_e: f64,
    pub power_dbm: f64,
    pub sigma2_dbm: f64,
    pub alpha_h: f64,
    pub alpha_g: f64,
    pub sweep: SweepVar,
    pub sweep_values: Vec<f64>,
    pub trials: u32,
    pub seed: u64,
    pub schemes: Vec<Scheme>,
}

/// Everything that varies at a single sweep point.
#[derive(Debug, Clone, Copy)]
struct PointParams {
    eve_pos: [f64; 2],
    rho_b: f64,
    rho_e: f64,
    alpha_h: f64,
    alpha_g: f64,
    power: f64,
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(SdofError::Config("trials must be at least 1".into()));
        }
        if self.sweep_values.is_empty() {
            return Err(SdofError::Config("sweep_values must be nonempty".into()));
        }
        if self.sweep_values.iter().any(|v| !v.is_finite()) {
            return Err(SdofError::Config("sweep_values must be finite".into()));
        }
        if self.schemes.is_empty() {
            return Err(SdofError::Config("at least one scheme is required".into()));
        }
        let unit = |name: &str, v: f64| {
            if !(0.0..=1.0).contains(&v) {
                Err(SdofError::Config(format!("{name} must lie in [0, 1], got {v}")))
            } else {
                Ok(())
            }
        };
        unit("rho_b", self.rho_b)?;
        unit("rho_e", self.rho_e)?;
        unit("alpha_h", self.alpha_h)?;
        unit("alpha_g", self.alpha_g)?;
        if matches!(
            self.sweep,
            SweepVar::Rho | SweepVar::RhoB | SweepVar::RhoE | SweepVar::AlphaH | SweepVar::AlphaG
        ) {
            for &v in &self.sweep_values {
                unit(self.sweep.name(), v)?;
            }
        }
        for scheme in &self.schemes {
            if let Scheme::AltSplit(n) = scheme {
                if *n > self.cfg.n_b() {
                    return Err(SdofError::Config(format!(
                        "alt_split:{n} exceeds Bob's {} antennas",
                        self.cfg.n_b()
                    )));
                }
            }
        }
        Ok(())
    }

    fn at(&self, value: f64) -> PointParams {
        let mut p = PointParams {
            eve_pos: self.eve_pos,
            rho_b: self.rho_b,
            rho_e: self.rho_e,
            alpha_h: self.alpha_h,
            alpha_g: self.alpha_g,
            power: dbm_to_watts(self.power_dbm),
        };
        match self.sweep {
            SweepVar::EveX => p.eve_pos[0] = value,
            SweepVar::EveY => p.eve_pos[1] = value,
            SweepVar::Rho => {
                p.rho_b = value;
                p.rho_e = value;
            }
            SweepVar::RhoB => p.rho_b = value,
            SweepVar::RhoE => p.rho_e = value,
            SweepVar::AlphaH => p.alpha_h = value,
            SweepVar::AlphaG => p.alpha_g = value,
            SweepVar::PowerDbm => p.power = dbm_to_watts(value),
        }
        p
    }

    /// SHA-256 of the canonical JSON form, for result provenance.
    pub fn digest(&self) -> String {
        let json = serde_json::to_string(self).expect("spec serializes");
        let mut h = Sha256::new();
        h.update(json.as_bytes());
        format!("{:x}", h.finalize())
    }
}

/// One aggregated table row: a (sweep point, scheme) cell.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimRow {
    pub sweep_value: f64,
    pub scheme: String,
    pub mean_secrecy_rate_bits: f64,
    pub mean_rb_bits: f64,
    pub mean_re_bits: f64,
    pub k_streams: u32,
    pub trials: u32,
    pub failed_trials: u32,
}

/// Campaign output: rows in sweep-major, scheme-minor order plus
/// provenance metadata.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimResult {
    pub sweep_var: String,
    pub rows: Vec<SimRow>,
    pub seed: u64,
    pub config_sha256: String,
    pub version: String,
}

impl SimResult {
    /// Plot-ready CSV. Float fields use Rust's shortest round-trip
    /// formatting, which is a pure function of the bits, so equal results
    /// serialize to equal bytes.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "sweep_var,sweep_value,scheme,mean_secrecy_rate_bits,mean_rb_bits,mean_re_bits,k_streams,trials\n",
        );
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{}\n",
                self.sweep_var,
                r.sweep_value,
                r.scheme,
                r.mean_secrecy_rate_bits,
                r.mean_rb_bits,
                r.mean_re_bits,
                r.k_streams,
                r.trials
            ));
        }
        out
    }

    /// Sidecar metadata JSON (seed, config digest, version, failure count).
    pub fn meta_json(&self) -> String {
        #[derive(Serialize)]
        struct Meta<'a> {
            seed: u64,
            config_sha256: &'a str,
            version: &'a str,
            failed_trials_total: u32,
        }
        serde_json::to_string_pretty(&Meta {
            seed: self.seed,
            config_sha256: &self.config_sha256,
            version: &self.version,
            failed_trials_total: self.rows.iter().map(|r| r.failed_trials).sum(),
        })
        .expect("meta serializes")
    }
}

/// splitmix64-style finalizer: decorrelates per-trial seeds drawn from a
/// single master seed.
fn mix_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Both nodes' achievable rates for one realization and design, from the
/// covariance form of the mutual information.
///
/// Bob's interference is his residual self-interference plus Eve's
/// jamming; Eve's is Bob's jamming plus her residual self-interference.
/// Eve's jamming power P is split equally over her transmit antennas.
pub fn rates(cs: &ChannelSet, pp: &PrecoderPair) -> Result<(f64, f64)> {
    let n_e_t = cs.cfg.n_e_t() as usize;
    let q_a = pp.q_a();
    let q_b = pp.q_b();

    let jam = |x: &CMatrix, level: f64| -> CMatrix {
        let m = x.nrows();
        if n_e_t == 0 || level == 0.0 {
            CMatrix::zeros(m, m)
        } else {
            x * x.adjoint() * num_complex::Complex64::new(level * cs.power / n_e_t as f64, 0.0)
        }
    };
    let scale = |m: CMatrix, level: f64| m * num_complex::Complex64::new(level, 0.0);

    let w_b = scale(&cs.h_bb * &q_b * cs.h_bb.adjoint(), cs.rho_b) + jam(&cs.h_be, 1.0);
    let w_e = &cs.g_eb * &q_b * cs.g_eb.adjoint() + jam(&cs.g_ee, cs.rho_e);

    let r_b = rate_logdet(&cs.h_ba, &q_a, &w_b, cs.sigma2)?;
    let r_e = rate_logdet(&cs.g_ea, &q_a, &w_e, cs.sigma2)?;
    Ok((r_b, r_e))
}

/// Achievable secrecy rate (R_b - R_e)+, never negative.
pub fn secrecy_rate(cs: &ChannelSet, pp: &PrecoderPair) -> Result<f64> {
    let (r_b, r_e) = rates(cs, pp)?;
    Ok((r_b - r_e).max(0.0))
}

fn scheme_config(base: &AntennaConfig, scheme: &Scheme) -> Result<AntennaConfig> {
    let n_b_t = match scheme {
        Scheme::ProposedFd => base.n_b_t(),
        Scheme::HdBaseline => 0,
        Scheme::AltSplit(n) => *n,
    };
    AntennaConfig::new(base.n_a(), base.n_b(), n_b_t, base.n_e_t(), base.n_e_r())
}

/// Design precoders from the estimated channels. The half-duplex baseline
/// is handed the proposed scheme's stream count so comparisons carry the
/// same number of streams.
fn scheme_precoders(est: &ChannelSet, scheme: &Scheme, k_hd: u32) -> Result<PrecoderPair> {
    match scheme {
        Scheme::HdBaseline => hd_baseline(est, k_hd),
        _ => build_precoders(est),
    }
}

#[derive(Debug, Clone, Copy)]
struct TrialOut {
    r_b: f64,
    r_e: f64,
    secrecy: f64,
    k: u32,
}

/// One full trial: draw truth, degrade to estimates, design on the
/// estimates, score on the truth.
fn run_trial(
    cfg: &AntennaConfig,
    geo: &Geometry,
    p: &PointParams,
    sigma2: f64,
    scheme: &Scheme,
    k_hd: u32,
    trial_seed: u64,
) -> Result<TrialOut> {
    let truth = draw_channels(cfg, geo, p.rho_b, p.rho_e, sigma2, p.power, trial_seed)?;
    let est_h = perturb_csi(
        &truth,
        &CsiPerturbation { alpha: p.alpha_h, target: LinkFamily::IntoBob, seed: trial_seed },
    )?;
    let est = perturb_csi(
        &est_h,
        &CsiPerturbation { alpha: p.alpha_g, target: LinkFamily::IntoEve, seed: trial_seed },
    )?;
    let pp = scheme_precoders(&est, scheme, k_hd)?;
    let (r_b, r_e) = rates(&truth, &pp)?;
    Ok(TrialOut { r_b, r_e, secrecy: (r_b - r_e).max(0.0), k: pp.k as u32 })
}

/// Run a complete sweep campaign. Per-trial seeds are mixed from
/// (master seed, trial index) only, so every sweep point and scheme sees
/// the same channel population (common random numbers) and the output is
/// reproducible under any trial scheduling.
pub fn run_scenario(spec: &ScenarioSpec) -> Result<SimResult> {
    spec.validate()?;
    let sigma2 = dbm_to_watts(spec.sigma2_dbm);
    let k_hd = sdof_active(&spec.cfg).max(1);

    let mut rows = Vec::with_capacity(spec.sweep_values.len() * spec.schemes.len());
    for &value in &spec.sweep_values {
        let p = spec.at(value);
        let geo = Geometry::baseline(spec.r, p.eve_pos, spec.path_loss_exp)?;
        for scheme in &spec.schemes {
            let cfg = scheme_config(&spec.cfg, scheme)?;
            let run_one = |t: u32| {
                run_trial(&cfg, &geo, &p, sigma2, scheme, k_hd, mix_seed(spec.seed, t as u64))
            };

            #[cfg(feature = "parallel")]
            let outcomes: Vec<Result<TrialOut>> =
                (0..spec.trials).into_par_iter().map(run_one).collect();
            #[cfg(not(feature = "parallel"))]
            let outcomes: Vec<Result<TrialOut>> = (0..spec.trials).map(run_one).collect();

            // Aggregate strictly in trial order so scheduling cannot
            // change float summation order.
            let mut sums = (0.0f64, 0.0f64, 0.0f64);
            let mut k_streams = None;
            let mut good = 0u32;
            let mut failed = 0u32;
            let mut first_err = None;
            for out in outcomes {
                match out {
                    Ok(t) => {
                        sums.0 += t.secrecy;
                        sums.1 += t.r_b;
                        sums.2 += t.r_e;
                        k_streams.get_or_insert(t.k);
                        good += 1;
                    }
                    Err(e) => {
                        failed += 1;
                        first_err.get_or_insert(e);
                    }
                }
            }
            if f64::from(failed) > 0.01 * f64::from(spec.trials) {
                return Err(SdofError::Simulation(format!(
                    "{failed}/{} trials failed at {} = {value}, scheme {} (first: {})",
                    spec.trials,
                    spec.sweep.name(),
                    scheme.name(),
                    first_err.map(|e| e.to_string()).unwrap_or_default()
                )));
            }
            let n = f64::from(good.max(1));
            rows.push(SimRow {
                sweep_value: value,
                scheme: scheme.name(),
                mean_secrecy_rate_bits: sums.0 / n,
                mean_rb_bits: sums.1 / n,
                mean_re_bits: sums.2 / n,
                k_streams: k_streams.unwrap_or(0),
                trials: good,
                failed_trials: failed,
            });
        }
    }
    Ok(SimResult {
        sweep_var: spec.sweep.name().into(),
        rows,
        seed: spec.seed,
        config_sha256: spec.digest(),
        version: env!("CARGO_PKG_VERSION").into(),
    })
}

/// Channel population for slope estimation: geometry and self-interference
/// levels, with noise normalized to 1 so transmit powers are given in dB
/// over the noise floor.
#[derive(Debug, Clone)]
pub struct ChannelTemplate {
    pub cfg: AntennaConfig,
    pub geo: Geometry,
    pub rho_b: f64,
    pub rho_e: f64,
}

/// Empirical secrecy-dof estimate: mean over trials of the secrecy-rate
/// difference between two power points divided by the log-power gap, with
/// each trial's channels held fixed across the two points. Powers are dB
/// over the (unit) noise power; the gap must exceed 10 dB for the slope
/// to mean anything.
pub fn sdof_slope(
    tpl: &ChannelTemplate,
    scheme: &Scheme,
    p_low_db: f64,
    p_high_db: f64,
    trials: u32,
    seed: u64,
) -> Result<f64> {
    if p_high_db < p_low_db + 10.0 {
        return Err(SdofError::Config(format!(
            "power gap too small for a slope estimate: {p_low_db} dB to {p_high_db} dB"
        )));
    }
    if trials == 0 {
        return Err(SdofError::Config("trials must be at least 1".into()));
    }
    let cfg = scheme_config(&tpl.cfg, scheme)?;
    let k_hd = sdof_active(&tpl.cfg).max(1);
    let p_low = 10f64.powf(p_low_db / 10.0);
    let p_high = 10f64.powf(p_high_db / 10.0);
    let denom = p_high.log2() - p_low.log2();

    let run_one = |t: u32| -> Result<f64> {
        let ts = mix_seed(seed, t as u64);
        let lo = draw_channels(&cfg, &tpl.geo, tpl.rho_b, tpl.rho_e, 1.0, p_low, ts)?;
        // Same realization, higher power: only the power field moves.
        let hi = ChannelSet { power: p_high, ..lo.clone() };
        let s_lo = secrecy_rate(&lo, &scheme_precoders(&lo, scheme, k_hd)?)?;
        let s_hi = secrecy_rate(&hi, &scheme_precoders(&hi, scheme, k_hd)?)?;
        Ok((s_hi - s_lo) / denom)
    };

    #[cfg(feature = "parallel")]
    let outcomes: Vec<Result<f64>> = (0..trials).into_par_iter().map(run_one).collect();
    #[cfg(not(feature = "parallel"))]
    let outcomes: Vec<Result<f64>> = (0..trials).map(run_one).collect();

    let mut sum = 0.0;
    let mut good = 0u32;
    let mut failed = 0u32;
    for out in outcomes {
        match out {
            Ok(s) => {
                sum += s;
                good += 1;
            }
            Err(_) => failed += 1,
        }
    }
    if f64::from(failed) > 0.01 * f64::from(trials) {
        return Err(SdofError::Simulation(format!(
            "{failed}/{trials} slope trials failed"
        )));
    }
    Ok(sum / f64::from(good))
}

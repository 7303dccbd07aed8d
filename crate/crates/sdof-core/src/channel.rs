//! Scenario geometry and random channel generation.
//!
//! Inter-node channels follow a pure line-of-sight model: every entry of a
//! link's matrix is d^(-c/2) e^(j theta) with the same distance d for all
//! antenna pairs of that link and i.i.d. uniform phases. Self-interference
//! loops (Bob's transmit into his own receive array, likewise for Eve) have
//! unit-magnitude entries; their strength is carried entirely by the rho
//! knobs. Imperfect CSI follows a Gauss-Markov mix of the true phase matrix
//! with a standard complex Gaussian.
//!
//! Everything here is a pure function of (inputs, seed). Each matrix draws
//! from its own ChaCha stream so results do not depend on evaluation order.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::dof::AntennaConfig;
use crate::numerics::CMatrix;
use crate::{Result, SdofError};

/// Node placement on a plane, plus the path-loss exponent c.
///
/// Typical exponents lie in [2, 4]; values outside that range are accepted
/// but are the caller's responsibility to justify.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    pub alice_pos: [f64; 2],
    pub bob_pos: [f64; 2],
    pub eve_pos: [f64; 2],
    pub path_loss_exp: f64,
}

impl Geometry {
    pub fn new(
        alice_pos: [f64; 2],
        bob_pos: [f64; 2],
        eve_pos: [f64; 2],
        path_loss_exp: f64,
    ) -> Result<Self> {
        for p in [alice_pos, bob_pos, eve_pos] {
            if !p[0].is_finite() || !p[1].is_finite() {
                return Err(SdofError::Config(format!("non-finite node position {p:?}")));
            }
        }
        if !path_loss_exp.is_finite() || path_loss_exp <= 0.0 {
            return Err(SdofError::Config(format!(
                "path loss exponent must be positive and finite, got {path_loss_exp}"
            )));
        }
        Ok(Self { alice_pos, bob_pos, eve_pos, path_loss_exp })
    }

    /// Alice at (-r, 0) and Bob at (r, 0), with Eve wherever the scenario
    /// puts her.
    pub fn baseline(r: f64, eve_pos: [f64; 2], path_loss_exp: f64) -> Result<Self> {
        Self::new([-r, 0.0], [r, 0.0], eve_pos, path_loss_exp)
    }

    fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
        (a[0] - b[0]).hypot(a[1] - b[1])
    }

    pub fn d_alice_bob(&self) -> f64 {
        Self::dist(self.alice_pos, self.bob_pos)
    }
    pub fn d_alice_eve(&self) -> f64 {
        Self::dist(self.alice_pos, self.eve_pos)
    }
    pub fn d_bob_eve(&self) -> f64 {
        Self::dist(self.bob_pos, self.eve_pos)
    }

    /// Amplitude scale d^(-c/2) for a link of distance d.
    fn amp(&self, d: f64) -> f64 {
        d.powf(-self.path_loss_exp / 2.0)
    }
}

/// Which side's incoming channels a CSI perturbation degrades.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinkFamily {
    /// Channels received by Bob (from Alice, his own loop, and Eve).
    IntoBob,
    /// Channels received by Eve (from Alice, Bob, and her own loop).
    IntoEve,
}

/// Gauss-Markov CSI error: the targeted matrices become
/// d^(-c/2) (sqrt(1-alpha^2) Gbar + alpha DeltaG) with DeltaG standard
/// complex Gaussian; alpha = 0 is perfect knowledge, alpha = 1 none.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsiPerturbation {
    pub alpha: f64,
    pub target: LinkFamily,
    pub seed: u64,
}

/// Per-link amplitude scales of a drawn channel set, kept so a
/// perturbation can separate the deterministic path loss from the random
/// phase part it must mix with fresh noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkScales {
    pub ba: f64,
    pub bb: f64,
    pub be: f64,
    pub ea: f64,
    pub eb: f64,
    pub ee: f64,
}

/// One realization of all six channel matrices plus the scenario's power
/// and noise levels. Naming: `h_*` arrive at Bob, `g_*` at Eve; the second
/// letter is the transmitter (a = Alice, b = Bob, e = Eve).
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    pub cfg: AntennaConfig,
    pub h_ba: CMatrix,
    pub h_bb: CMatrix,
    pub h_be: CMatrix,
    pub g_ea: CMatrix,
    pub g_eb: CMatrix,
    pub g_ee: CMatrix,
    pub scales: LinkScales,
    pub rho_b: f64,
    pub rho_e: f64,
    pub sigma2: f64,
    pub power: f64,
}

/// 10^((x-30)/10): dBm to linear watts.
pub fn dbm_to_watts(x_dbm: f64) -> f64 {
    10f64.powf((x_dbm - 30.0) / 10.0)
}

/// Inverse of [`dbm_to_watts`].
pub fn watts_to_dbm(x_w: f64) -> f64 {
    10.0 * x_w.log10() + 30.0
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Constant-amplitude matrix with i.i.d. uniform phases.
fn phase_matrix(rows: usize, cols: usize, amp: f64, rng: &mut ChaCha8Rng) -> CMatrix {
    DMatrix::from_fn(rows, cols, |_, _| {
        let theta = rng.gen::<f64>() * std::f64::consts::TAU;
        Complex64::from_polar(amp, theta)
    })
}

/// Matrix of i.i.d. standard complex Gaussian entries (unit variance per
/// entry, split evenly between the real and imaginary parts).
fn gaussian_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re * s, im * s)
    })
}

/// Draw one channel realization for the given antenna split and geometry.
///
/// Deterministic in `seed`; each of the six matrices has its own RNG
/// stream, so a matrix's values do not depend on the dimensions of the
/// others.
pub fn draw_channels(
    cfg: &AntennaConfig,
    geo: &Geometry,
    rho_b: f64,
    rho_e: f64,
    sigma2: f64,
    power: f64,
    seed: u64,
) -> Result<ChannelSet> {
    for (what, v) in [("rho_b", rho_b), ("rho_e", rho_e)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(SdofError::Config(format!("{what} must lie in [0, 1], got {v}")));
        }
    }
    if sigma2 <= 0.0 || power < 0.0 {
        return Err(SdofError::Config(format!(
            "need sigma2 > 0 and power >= 0, got sigma2 = {sigma2}, power = {power}"
        )));
    }
    let (d_ab, d_ae, d_be) = (geo.d_alice_bob(), geo.d_alice_eve(), geo.d_bob_eve());
    for (pair, d) in [("Alice-Bob", d_ab), ("Alice-Eve", d_ae), ("Bob-Eve", d_be)] {
        if d <= 0.0 {
            return Err(SdofError::Config(format!("{pair} distance is zero")));
        }
    }
    let scales = LinkScales {
        ba: geo.amp(d_ab),
        bb: 1.0,
        be: geo.amp(d_be),
        ea: geo.amp(d_ae),
        eb: geo.amp(d_be),
        ee: 1.0,
    };

    let draw = |rows, cols, amp, stream| phase_matrix(rows, cols, amp, &mut stream_rng(seed, stream));
    Ok(ChannelSet {
        cfg: *cfg,
        h_ba: draw(cfg.n_b_r() as usize, cfg.n_a() as usize, scales.ba, 0),
        h_bb: draw(cfg.n_b_r() as usize, cfg.n_b_t() as usize, scales.bb, 1),
        h_be: draw(cfg.n_b_r() as usize, cfg.n_e_t() as usize, scales.be, 2),
        g_ea: draw(cfg.n_e_r() as usize, cfg.n_a() as usize, scales.ea, 3),
        g_eb: draw(cfg.n_e_r() as usize, cfg.n_b_t() as usize, scales.eb, 4),
        g_ee: draw(cfg.n_e_r() as usize, cfg.n_e_t() as usize, scales.ee, 5),
        scales,
        rho_b,
        rho_e,
        sigma2,
        power,
    })
}

/// Degrade one link family with Gauss-Markov CSI error.
///
/// Each targeted matrix M with amplitude scale s becomes
/// sqrt(1-alpha^2) M + alpha s DeltaM, which equals
/// s (sqrt(1-alpha^2) Mbar + alpha DeltaM) for the unit-magnitude phase
/// part Mbar. alpha = 0 returns the input bit-exactly.
pub fn perturb_csi(cs: &ChannelSet, pert: &CsiPerturbation) -> Result<ChannelSet> {
    if !(0.0..=1.0).contains(&pert.alpha) {
        return Err(SdofError::Config(format!(
            "CSI uncertainty alpha must lie in [0, 1], got {}",
            pert.alpha
        )));
    }
    let mut out = cs.clone();
    if pert.alpha == 0.0 {
        return Ok(out);
    }
    let keep = (1.0 - pert.alpha * pert.alpha).sqrt();
    let mix = |m: &CMatrix, scale: f64, stream: u64| {
        let noise = gaussian_matrix(m.nrows(), m.ncols(), &mut stream_rng(pert.seed, stream));
        m * Complex64::new(keep, 0.0) + noise * Complex64::new(pert.alpha * scale, 0.0)
    };
    match pert.target {
        LinkFamily::IntoBob => {
            out.h_ba = mix(&cs.h_ba, cs.scales.ba, 8);
            out.h_bb = mix(&cs.h_bb, cs.scales.bb, 9);
            out.h_be = mix(&cs.h_be, cs.scales.be, 10);
        }
        LinkFamily::IntoEve => {
            out.g_ea = mix(&cs.g_ea, cs.scales.ea, 11);
            out.g_eb = mix(&cs.g_eb, cs.scales.eb, 12);
            out.g_ee = mix(&cs.g_ee, cs.scales.ee, 13);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg_457() -> AntennaConfig {
        AntennaConfig::new(4, 7, 2, 1, 5).unwrap()
    }

    fn geo_r10() -> Geometry {
        Geometry::baseline(10.0, [0.0, -10.0], 3.5).unwrap()
    }

    fn draw_default(seed: u64) -> ChannelSet {
        draw_channels(&cfg_457(), &geo_r10(), 1.0, 1.0, 1e-9, 1e-3, seed).unwrap()
    }

    #[test]
    fn entry_magnitudes_follow_link_distance() {
        let cs = draw_default(1);
        let expect = 20f64.powf(-1.75);
        for e in cs.h_ba.iter() {
            assert!((e.norm() - expect).abs() < 1e-14 * expect, "{} vs {expect}", e.norm());
        }
        let d_ae = 200f64.sqrt(); // Alice (-10,0) to Eve (0,-10)
        let expect_ea = d_ae.powf(-1.75);
        for e in cs.g_ea.iter() {
            assert!((e.norm() - expect_ea).abs() < 1e-14);
        }
        for e in cs.h_bb.iter().chain(cs.g_ee.iter()) {
            assert!((e.norm() - 1.0).abs() < 1e-14, "self-interference entries are unit magnitude");
        }
    }

    #[test]
    fn dimensions_match_the_antenna_split() {
        let cfg = AntennaConfig::new(3, 6, 4, 2, 5).unwrap();
        let cs = draw_channels(&cfg, &geo_r10(), 0.5, 0.3, 1e-9, 1e-3, 7).unwrap();
        assert_eq!(cs.h_ba.shape(), (2, 3)); // n_b_r x n_a
        assert_eq!(cs.h_bb.shape(), (2, 4)); // n_b_r x n_b_t
        assert_eq!(cs.h_be.shape(), (2, 2)); // n_b_r x n_e_t
        assert_eq!(cs.g_ea.shape(), (5, 3)); // n_e_r x n_a
        assert_eq!(cs.g_eb.shape(), (5, 4)); // n_e_r x n_b_t
        assert_eq!(cs.g_ee.shape(), (5, 2)); // n_e_r x n_e_t
    }

    #[test]
    fn same_seed_is_bit_identical_and_different_seeds_decorrelate() {
        let a = draw_default(42);
        let b = draw_default(42);
        assert_eq!(a, b);

        // Pearson correlation of matching real parts across 1000 seed pairs.
        let n = 1000;
        let (mut xs, mut ys) = (Vec::new(), Vec::new());
        for s in 0..n {
            xs.push(draw_default(s).h_ba[(0, 0)].re);
            ys.push(draw_default(s + 10_000).h_ba[(0, 0)].re);
        }
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        let (mx, my) = (mean(&xs), mean(&ys));
        let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let vx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        let vy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
        let corr = cov / (vx * vy).sqrt();
        assert!(corr.abs() < 0.05, "seed-to-seed correlation {corr}");
    }

    /// Asymptotic Kolmogorov p-value for the one-sample test against a
    /// continuous CDF.
    fn ks_p_value(mut samples: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
        samples.sort_by(f64::total_cmp);
        let n = samples.len() as f64;
        let mut d: f64 = 0.0;
        for (i, x) in samples.iter().enumerate() {
            let f = cdf(*x);
            d = d.max((f - i as f64 / n).abs()).max(((i + 1) as f64 / n - f).abs());
        }
        let lambda = (n.sqrt() + 0.12 + 0.11 / n.sqrt()) * d;
        let mut p = 0.0;
        for k in 1..=100 {
            let term = (-2.0 * (k as f64 * lambda).powi(2)).exp();
            p += if k % 2 == 1 { 2.0 * term } else { -2.0 * term };
        }
        p.clamp(0.0, 1.0)
    }

    #[test]
    fn phases_are_uniform() {
        let mut phases = Vec::with_capacity(10_000);
        let mut seed = 0;
        while phases.len() < 10_000 {
            let cs = draw_default(seed);
            phases.extend(cs.h_ba.iter().map(|e| e.arg().rem_euclid(std::f64::consts::TAU)));
            seed += 1;
        }
        phases.truncate(10_000);
        let p = ks_p_value(phases, |x| x / std::f64::consts::TAU);
        assert!(p > 0.01, "phase uniformity rejected, p = {p}");
    }

    #[test]
    fn zero_distance_is_rejected() {
        let geo = Geometry::new([0.0, 0.0], [0.0, 0.0], [1.0, 1.0], 3.5).unwrap();
        assert!(draw_channels(&cfg_457(), &geo, 1.0, 1.0, 1e-9, 1e-3, 1).is_err());
    }

    #[test]
    fn alpha_zero_perturbation_is_bit_exact_identity() {
        let cs = draw_default(5);
        for target in [LinkFamily::IntoBob, LinkFamily::IntoEve] {
            let out = perturb_csi(&cs, &CsiPerturbation { alpha: 0.0, target, seed: 99 }).unwrap();
            assert_eq!(out, cs);
        }
    }

    #[test]
    fn perturbation_is_deterministic_and_touches_only_its_family() {
        let cs = draw_default(6);
        let pert = CsiPerturbation { alpha: 0.4, target: LinkFamily::IntoEve, seed: 3 };
        let a = perturb_csi(&cs, &pert).unwrap();
        let b = perturb_csi(&cs, &pert).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.h_ba, cs.h_ba);
        assert_eq!(a.h_bb, cs.h_bb);
        assert_eq!(a.h_be, cs.h_be);
        assert_ne!(a.g_ea, cs.g_ea);
        assert_ne!(a.g_ee, cs.g_ee);
    }

    #[test]
    fn half_alpha_preserves_unit_second_moment() {
        // Var(out/scale) = (1 - a^2) |Gbar|^2 + a^2 = 1 when |Gbar| = 1.
        let mut sum = 0.0;
        let mut count = 0usize;
        let mut seed = 0;
        while count < 100_000 {
            let cs = draw_default(seed);
            let out = perturb_csi(
                &cs,
                &CsiPerturbation { alpha: 0.5, target: LinkFamily::IntoBob, seed: seed + 1 },
            )
            .unwrap();
            let scale = cs.scales.ba;
            for e in out.h_ba.iter() {
                sum += (e / scale).norm_sqr();
                count += 1;
            }
            seed += 1;
        }
        let moment = sum / count as f64;
        assert!((moment - 1.0).abs() < 0.02, "second moment {moment}");
    }

    #[test]
    fn full_alpha_forgets_the_original() {
        // With alpha = 1 the output is pure fresh noise: correlation with
        // the original realization must be statistical zero.
        let (mut xs, mut ys) = (Vec::new(), Vec::new());
        for seed in 0..2000 {
            let cs = draw_default(seed);
            let out = perturb_csi(
                &cs,
                &CsiPerturbation { alpha: 1.0, target: LinkFamily::IntoBob, seed: seed + 1 },
            )
            .unwrap();
            xs.push(cs.h_ba[(0, 0)].re);
            ys.push(out.h_ba[(0, 0)].re);
        }
        let n = xs.len() as f64;
        let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
        let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let vx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        let vy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
        assert!((cov / (vx * vy).sqrt()).abs() < 0.06);
    }

    #[test]
    fn dbm_conversions_are_exact_inverses() {
        assert!((dbm_to_watts(0.0) - 1e-3).abs() < 1e-18);
        assert!((dbm_to_watts(-60.0) - 1e-9).abs() < 1e-24);
        assert!((dbm_to_watts(30.0) - 1.0).abs() < 1e-15);
        for x in [-60.0, -10.0, 0.0, 17.5, 30.0] {
            assert!((watts_to_dbm(dbm_to_watts(x)) - x).abs() < 1e-12);
        }
    }
}

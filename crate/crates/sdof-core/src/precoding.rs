//! Precoder construction for the full-duplex secrecy scheme and the
//! half-duplex baseline.
//!
//! The full-duplex design works in two stages. First both receive sides
//! project out Eve's jamming: Bob keeps the left null space of the
//! Eve-to-Bob channel, Eve (from the designer's worst-case view) keeps the
//! left null space of her own self-interference loop. In the reduced
//! problem Alice's streams come in three classes, cheapest first:
//!
//! * [`StreamClass::NullSpace`]: the direction is invisible to Eve on its
//!   own; no jamming partner, occupies 1 receive dimension at Bob.
//! * [`StreamClass::AlignedFree`]: Bob jams so that his jamming hides the
//!   stream at Eve while landing in the null space of his own reduced
//!   loop channel; still 1 dimension at Bob.
//! * [`StreamClass::AlignedPaid`]: aligned at Eve but the jamming occupies
//!   a second receive dimension at Bob.
//!
//! Candidates are orthonormal null-space bases of the defining linear
//! systems; class independence is enforced by projecting previously
//! accepted message directions out before extracting the next class. A
//! greedy pass then buys pairs in class order until Bob's receive budget
//! or Alice's antenna count is exhausted, reproducing the closed-form
//! stream counts of [`crate::dof`] for generic channels.

use num_complex::Complex64;

use crate::channel::ChannelSet;
use crate::numerics::{
    self, gen_eig_hermitian, left_null_basis, null_basis, CMatrix, CVector, NullBasis,
    RANK_TOL_REL,
};
use crate::{Result, SdofError};

/// How a selected Alice stream is protected, ordered by Bob-dimension
/// cost (1, 1, 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamClass {
    /// In Eve's null space by itself; no jamming partner.
    NullSpace,
    /// Aligned with a jamming partner that Bob's own receive side never
    /// sees.
    AlignedFree,
    /// Aligned with a jamming partner that costs Bob a receive dimension.
    AlignedPaid,
}

/// Both sides' channels after projecting out Eve's jamming subspaces.
#[derive(Debug, Clone)]
pub struct ReducedChannels {
    /// Left null basis of the Eve-to-Bob channel (Bob's clean subspace).
    pub u_b0: NullBasis,
    /// Left null basis of Eve's self-interference loop (Eve's clean
    /// subspace).
    pub u_e0: NullBasis,
    pub h_ba_bar: CMatrix,
    pub h_bb_bar: CMatrix,
    pub g_ea_bar: CMatrix,
    pub g_eb_bar: CMatrix,
}

/// One candidate (message direction, jamming direction); the jamming part
/// is the zero vector for [`StreamClass::NullSpace`].
#[derive(Debug, Clone)]
pub struct CandidatePair {
    pub v_a: CVector,
    pub v_b: CVector,
    pub class: StreamClass,
}

/// Candidate pairs per class, cheapest class first.
#[derive(Debug, Clone)]
pub struct CandidateLists {
    pub null_space: Vec<CandidatePair>,
    pub aligned_free: Vec<CandidatePair>,
    pub aligned_paid: Vec<CandidatePair>,
    n_s: usize,
    n_h: usize,
}

impl CandidateLists {
    /// Candidate counts per class, cheapest first.
    pub fn counts(&self) -> (usize, usize, usize) {
        (self.null_space.len(), self.aligned_free.len(), self.aligned_paid.len())
    }
}

/// The final transmit design: Alice's `v_a` is n_a x k, Bob's `v_b` is
/// n_b_t x k_b (possibly zero columns when no jamming is needed).
#[derive(Debug, Clone)]
pub struct PrecoderPair {
    pub v_a: CMatrix,
    pub v_b: CMatrix,
    pub stream_classes: Vec<StreamClass>,
    pub k: usize,
}

impl PrecoderPair {
    fn empty(n_s: usize, n_h: usize) -> Self {
        Self {
            v_a: CMatrix::zeros(n_s, 0),
            v_b: CMatrix::zeros(n_h, 0),
            stream_classes: Vec::new(),
            k: 0,
        }
    }

    /// Alice's transmit covariance V_a V_a^H.
    pub fn q_a(&self) -> CMatrix {
        &self.v_a * self.v_a.adjoint()
    }

    /// Bob's transmit covariance V_b V_b^H (zero when he is silent).
    pub fn q_b(&self) -> CMatrix {
        &self.v_b * self.v_b.adjoint()
    }

    /// Number of jamming streams.
    pub fn k_b(&self) -> usize {
        self.v_b.ncols()
    }
}

/// Project both receive sides onto their jamming-free subspaces and form
/// the reduced channels. Degenerate splits (no Eve transmit antennas, or
/// Eve jamming with at least as many antennas as a receive side) fall out
/// naturally as identity or empty bases.
pub fn reduce(cs: &ChannelSet) -> Result<ReducedChannels> {
    let u_b0 = left_null_basis(&cs.h_be)?;
    let u_e0 = left_null_basis(&cs.g_ee)?;
    Ok(ReducedChannels {
        h_ba_bar: u_b0.basis.adjoint() * &cs.h_ba,
        h_bb_bar: u_b0.basis.adjoint() * &cs.h_bb,
        g_ea_bar: u_e0.basis.adjoint() * &cs.g_ea,
        g_eb_bar: u_e0.basis.adjoint() * &cs.g_eb,
        u_b0,
        u_e0,
    })
}

/// From an orthonormal null-space basis `k_basis` of a stacked
/// (message, jamming) system, extract one candidate pair per direction
/// whose message part is independent of the span of `prior` message
/// directions. Directions come out ordered by decreasing singular value
/// of the projected message block, which depends only on the inputs here
/// (no hidden channel state).
fn extract_pairs(
    k_basis: &CMatrix,
    n_s: usize,
    n_h: usize,
    prior: &[CVector],
    class: StreamClass,
) -> Result<Vec<CandidatePair>> {
    let m = k_basis.ncols();
    if m == 0 {
        return Ok(Vec::new());
    }
    let k_a = k_basis.rows(0, n_s).into_owned();

    // Projector onto the complement of the already-claimed message span.
    let mut phi = k_a.clone();
    if !prior.is_empty() {
        let span = numerics::range_basis(&CMatrix::from_columns(prior))?;
        phi -= &span * (span.adjoint() * &k_a);
    }

    let svd = phi
        .try_svd(false, true, f64::EPSILON, 0)
        .ok_or_else(|| SdofError::Numerical("SVD did not converge".into()))?;
    let v_t = svd.v_t.expect("v_t requested");
    // k_basis is orthonormal and the projector is a contraction, so each
    // singular value is the sine of an angle against the prior span: an
    // absolute threshold separates real directions from fully-claimed
    // ones (a relative one would mistake pure noise for rank).
    let rank = svd.singular_values.iter().take_while(|&&s| s > RANK_TOL_REL).count();

    let mut out = Vec::with_capacity(rank);
    for i in 0..rank {
        let w = v_t.row(i).adjoint();
        let p = k_basis * w;
        let v_a = p.rows(0, n_s).into_owned();
        let v_b = p.rows(n_s, n_h).into_owned();
        let nrm = Complex64::new(v_a.norm(), 0.0);
        // Joint scaling keeps the alignment identity of the pair intact.
        out.push(CandidatePair { v_a: v_a / nrm, v_b: v_b / nrm, class });
    }
    Ok(out)
}

/// Enumerate candidate pairs of all three classes from the reduced
/// channels. Counts equal the closed-form per-class counts of
/// [`crate::dof::candidate_counts`] for channels in generic position.
pub fn enumerate_candidates(rc: &ReducedChannels) -> Result<CandidateLists> {
    let n_s = rc.g_ea_bar.ncols();
    let n_h = rc.g_eb_bar.ncols();
    let n_ep = rc.g_ea_bar.nrows();
    let n_d_rows = rc.h_bb_bar.nrows();

    // Cheapest class: message directions Eve cannot see at all.
    let null_space: Vec<CandidatePair> = null_basis(&rc.g_ea_bar)?
        .basis
        .column_iter()
        .map(|c| CandidatePair {
            v_a: c.into_owned(),
            v_b: CVector::zeros(n_h),
            class: StreamClass::NullSpace,
        })
        .collect();
    let mut claimed: Vec<CVector> = null_space.iter().map(|p| p.v_a.clone()).collect();

    // Aligned pairs whose jamming also vanishes in Bob's reduced loop
    // channel: null space of [[G_ea, G_eb], [0, H_bb]] (reduced symbols).
    let mut stacked = CMatrix::zeros(n_ep + n_d_rows, n_s + n_h);
    stacked.view_mut((0, 0), (n_ep, n_s)).copy_from(&rc.g_ea_bar);
    stacked.view_mut((0, n_s), (n_ep, n_h)).copy_from(&rc.g_eb_bar);
    stacked.view_mut((n_ep, n_s), (n_d_rows, n_h)).copy_from(&rc.h_bb_bar);
    let mut aligned_free =
        extract_pairs(&null_basis(&stacked)?.basis, n_s, n_h, &claimed, StreamClass::AlignedFree)?;
    // Strongest reduced forward gain first, so a budget cut keeps the
    // best streams. This class already depends on Bob-side channels
    // through the stacked system, so the ordering adds no new coupling.
    let gain = |p: &CandidatePair| (&rc.h_ba_bar * &p.v_a).norm();
    aligned_free.sort_by(|x, y| gain(y).total_cmp(&gain(x)));
    claimed.extend(aligned_free.iter().map(|p| p.v_a.clone()));

    // Remaining aligned pairs: null space of [G_ea | G_eb] (reduced).
    let mut wide = CMatrix::zeros(n_ep, n_s + n_h);
    wide.view_mut((0, 0), (n_ep, n_s)).copy_from(&rc.g_ea_bar);
    wide.view_mut((0, n_s), (n_ep, n_h)).copy_from(&rc.g_eb_bar);
    let aligned_paid =
        extract_pairs(&null_basis(&wide)?.basis, n_s, n_h, &claimed, StreamClass::AlignedPaid)?;

    Ok(CandidateLists { null_space, aligned_free, aligned_paid, n_s, n_h })
}

/// Greedy pair selection in class order with Bob-dimension costs 1, 1, 2:
/// stop before any pair that would push the used dimensions past `n_d` or
/// the stream count past `n_s`. Returns unscaled (unit-message-norm)
/// precoders.
pub fn select_pairs(cands: &CandidateLists, n_d: u32, n_s: u32) -> PrecoderPair {
    let mut selected: Vec<&CandidatePair> = Vec::new();
    let mut used = 0u32;
    for (list, cost) in [
        (&cands.null_space, 1u32),
        (&cands.aligned_free, 1),
        (&cands.aligned_paid, 2),
    ] {
        for pair in list {
            if used + cost > n_d || selected.len() as u32 >= n_s {
                break;
            }
            selected.push(pair);
            used += cost;
        }
    }

    let k = selected.len();
    let mut v_a = CMatrix::zeros(cands.n_s, k);
    for (j, p) in selected.iter().enumerate() {
        v_a.set_column(j, &p.v_a);
    }
    let jams: Vec<&CVector> = selected
        .iter()
        .filter(|p| p.class != StreamClass::NullSpace)
        .map(|p| &p.v_b)
        .collect();
    let mut v_b = CMatrix::zeros(cands.n_h, jams.len());
    for (j, col) in jams.iter().enumerate() {
        v_b.set_column(j, col);
    }
    PrecoderPair {
        v_a,
        v_b,
        stream_classes: selected.iter().map(|p| p.class).collect(),
        k,
    }
}

/// Scale every column to squared norm `power / ncols`, so the matrix
/// carries total power `power` split equally across streams.
fn scale_equal_power(m: &mut CMatrix, power: f64) {
    let cols = m.ncols();
    if cols == 0 {
        return;
    }
    let per = (power / cols as f64).sqrt();
    for mut c in m.column_iter_mut() {
        let nrm = c.norm();
        if nrm > 0.0 {
            c *= Complex64::new(per / nrm, 0.0);
        }
    }
}

/// Hermitian Gram matrix X^H X with a relative ridge so it can serve as
/// either side of a definite pencil.
fn gram_ridge(x: &CMatrix) -> CMatrix {
    let n = x.ncols();
    let g = x.adjoint() * x;
    let ridge = 1e-12 * g.diagonal().iter().map(|d| d.re).sum::<f64>();
    g + CMatrix::identity(n, n) * Complex64::new(ridge, 0.0)
}

/// Build the full transmit design for one channel realization: reduce,
/// enumerate, select, then split each node's power equally across its
/// streams.
///
/// When Bob keeps no transmit antennas the scheme degenerates to a
/// three-node wiretap design: generalized eigendirections of the reduced
/// forward-vs-leakage Gram pencil with eigenvalue above 1 (better to Bob
/// than to Eve), capped at the closed-form stream count.
pub fn build_precoders(cs: &ChannelSet) -> Result<PrecoderPair> {
    let cfg = &cs.cfg;
    let n_s = cfg.n_a() as usize;
    let n_h = cfg.n_b_t() as usize;
    let dof = crate::dof::sdof_active(cfg);

    let mut pair = if cfg.n_b_t() == 0 && cfg.n_e_t() < cfg.n_e_r() {
        if dof == 0 {
            return Ok(PrecoderPair::empty(n_s, n_h));
        }
        let rc = reduce(cs)?;
        let pencil = gen_eig_hermitian(
            &gram_ridge(&rc.h_ba_bar),
            &gram_ridge(&rc.g_ea_bar),
            n_s,
        )?;
        let k = pencil.iter().take_while(|(lam, _)| *lam > 1.0).count().min(dof as usize);
        let mut v_a = CMatrix::zeros(n_s, k);
        for (j, (_, v)) in pencil.iter().take(k).enumerate() {
            v_a.set_column(j, &(v / Complex64::new(v.norm(), 0.0)));
        }
        PrecoderPair {
            v_a,
            v_b: CMatrix::zeros(0, 0),
            stream_classes: vec![StreamClass::NullSpace; k],
            k,
        }
    } else {
        let rc = reduce(cs)?;
        let cands = enumerate_candidates(&rc)?;
        select_pairs(&cands, rc.u_b0.dim() as u32, cfg.n_a())
    };

    scale_equal_power(&mut pair.v_a, cs.power);
    scale_equal_power(&mut pair.v_b, cs.power);
    Ok(pair)
}

/// Half-duplex baseline: Bob only listens, Alice beamforms along the
/// top-k generalized eigendirections of the jamming-whitened forward
/// channel against the jamming-whitened leakage channel. Requires a
/// channel set drawn with every Bob antenna receiving.
pub fn hd_baseline(cs: &ChannelSet, k: u32) -> Result<PrecoderPair> {
    let cfg = &cs.cfg;
    if cfg.n_b_t() != 0 {
        return Err(SdofError::Config(format!(
            "half-duplex baseline needs all of Bob's antennas receiving, got n_b_t = {}",
            cfg.n_b_t()
        )));
    }
    if k == 0 {
        return Err(SdofError::Config("half-duplex baseline needs k >= 1".into()));
    }
    let n_s = cfg.n_a() as usize;
    let n_e_t = cfg.n_e_t() as usize;

    // sigma^2 I + (P / n_e_t) X X^H, the receiver's jamming-plus-noise
    // covariance; Eve's own loop is additionally damped by rho_e.
    let whiten = |x: &CMatrix, jam_power: f64| {
        let m = x.nrows();
        let mut s = CMatrix::identity(m, m) * Complex64::new(cs.sigma2, 0.0);
        if n_e_t > 0 {
            s += x * x.adjoint() * Complex64::new(jam_power / n_e_t as f64, 0.0);
        }
        s
    };
    let quad = |ch: &CMatrix, s: &CMatrix| -> Result<CMatrix> {
        let chol = nalgebra::Cholesky::new(s.clone())
            .ok_or_else(|| SdofError::Numerical("jamming covariance not positive definite".into()))?;
        let solved = chol.solve(ch);
        Ok(ch.adjoint() * solved)
    };

    let a = quad(&cs.h_ba, &whiten(&cs.h_be, cs.power))?;
    let b0 = quad(&cs.g_ea, &whiten(&cs.g_ee, cs.rho_e * cs.power))?;
    let ridge = 1e-12 * b0.diagonal().iter().map(|d| d.re).sum::<f64>().max(a.trace().re);
    let b = b0 + CMatrix::identity(n_s, n_s) * Complex64::new(ridge, 0.0);

    let k_eff = (k as usize).min(n_s);
    let pairs = gen_eig_hermitian(&a, &b, k_eff)?;
    let mut v_a = CMatrix::zeros(n_s, k_eff);
    for (j, (_, v)) in pairs.iter().enumerate() {
        v_a.set_column(j, &(v / Complex64::new(v.norm(), 0.0)));
    }
    scale_equal_power(&mut v_a, cs.power);
    Ok(PrecoderPair {
        v_a,
        v_b: CMatrix::zeros(0, 0),
        stream_classes: vec![StreamClass::NullSpace; k_eff],
        k: k_eff,
    })
}

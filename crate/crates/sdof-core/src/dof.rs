//! Integer secrecy-degrees-of-freedom (S.D.o.F.) calculus.
//!
//! Everything here is exact integer arithmetic on antenna counts. The
//! network: Alice (`n_a` transmit antennas) talks to Bob (`n_b` antennas,
//! split into `n_b_t` jamming and `n_b_r = n_b - n_b_t` receiving) in the
//! presence of full-duplex Eve (`n_e_t` jamming antennas, `n_e_r`
//! eavesdropping antennas). Nulling Eve's jamming costs Bob `n_e_t` receive
//! dimensions and costs Eve `n_e_t` of her own eavesdropping dimensions
//! (her self-interference), which reduces every question to a wiretap
//! channel with a cooperative jammer: a source with `n_s` antennas, a
//! jamming helper with `n_h`, a destination with `n_d` and an eavesdropper
//! with `n_ep`.
//!
//! Two routes are implemented for every optimization: a closed form and an
//! exhaustive-search oracle (`oracle_*`). The [`crate::verify`] module
//! checks them against each other over full grids.

use serde::Serialize;

use crate::SdofError;

// --- configuration types ---

/// Antenna counts for the three-node network with both splits fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AntennaConfig {
    n_a: u32,
    n_b: u32,
    n_b_t: u32,
    n_e: u32,
    n_e_t: u32,
}

impl AntennaConfig {
    /// Builds a config from Alice's count, Bob's total and jamming split,
    /// and Eve's jamming/eavesdropping split. Rejects `n_a = 0`, `n_b = 0`
    /// and `n_b_t > n_b`; zero Eve antennas are legal (passive or absent).
    pub fn new(n_a: u32, n_b: u32, n_b_t: u32, n_e_t: u32, n_e_r: u32) -> crate::Result<Self> {
        if n_a == 0 {
            return Err(SdofError::Config("Alice needs at least one antenna".into()));
        }
        if n_b == 0 {
            return Err(SdofError::Config("Bob needs at least one antenna".into()));
        }
        if n_b_t > n_b {
            return Err(SdofError::Config(format!(
                "Bob's jamming split n_b_t = {n_b_t} exceeds his antenna count n_b = {n_b}"
            )));
        }
        Ok(Self { n_a, n_b, n_b_t, n_e: n_e_t + n_e_r, n_e_t })
    }

    pub fn n_a(&self) -> u32 {
        self.n_a
    }
    pub fn n_b(&self) -> u32 {
        self.n_b
    }
    /// Bob's transmit-jamming antennas.
    pub fn n_b_t(&self) -> u32 {
        self.n_b_t
    }
    /// Bob's receive antennas, `n_b - n_b_t`.
    pub fn n_b_r(&self) -> u32 {
        self.n_b - self.n_b_t
    }
    /// Eve's total antennas.
    pub fn n_e(&self) -> u32 {
        self.n_e
    }
    /// Eve's jamming antennas.
    pub fn n_e_t(&self) -> u32 {
        self.n_e_t
    }
    /// Eve's eavesdropping antennas, `n_e - n_e_t`.
    pub fn n_e_r(&self) -> u32 {
        self.n_e - self.n_e_t
    }

    /// Antenna counts of the equivalent helper-assisted wiretap problem
    /// after both sides cancel Eve's jamming: source keeps `n_a`, the
    /// helper is Bob's transmit side, and the receive spaces shrink by
    /// `n_e_t`.
    pub fn helper_equivalent(&self) -> HelperConfig {
        HelperConfig::new(
            self.n_a,
            self.n_b_t,
            self.n_b_r().saturating_sub(self.n_e_t),
            self.n_e_r().saturating_sub(self.n_e_t),
        )
    }
}

/// Antenna counts of the reduced wiretap-channel-with-helper problem:
/// source `n_s`, jamming helper `n_h`, destination `n_d`, eavesdropper
/// `n_ep`. Any field may be zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct HelperConfig {
    pub n_s: u32,
    pub n_h: u32,
    pub n_d: u32,
    pub n_ep: u32,
}

impl HelperConfig {
    pub fn new(n_s: u32, n_h: u32, n_d: u32, n_ep: u32) -> Self {
        Self { n_s, n_h, n_d, n_ep }
    }

    /// Combined helper + destination antenna budget.
    pub fn n_sum(&self) -> u32 {
        self.n_h + self.n_d
    }
}

/// Result of an S.D.o.F. optimization: the optimum value, the closed-form
/// optimizer when one is defined, and the full optimizer set when it was
/// found by exhaustive search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DofResult {
    pub dof: u32,
    pub optimizer: Option<u32>,
    pub optimizer_set: Vec<u32>,
}

fn pos(x: i64) -> i64 {
    x.max(0)
}

// --- helper-channel closed forms ---

/// Stream counts of the two aligned-pair families of the helper channel.
///
/// An aligned pair is a source direction whose image at the eavesdropper is
/// masked by a matching helper jamming direction. `s1` counts pairs whose
/// jamming is additionally invisible at the destination (it lands in the
/// null space of the helper-to-destination channel), `s2` counts the
/// remaining pairs, whose jamming burns one destination dimension each.
pub fn s1_s2(hc: &HelperConfig) -> (u32, u32) {
    let (n_s, n_h, n_d, n_ep) =
        (hc.n_s as i64, hc.n_h as i64, hc.n_d as i64, hc.n_ep as i64);
    let s1 = pos(n_s.min(n_ep) + pos(n_h - n_d).min(n_ep) - n_ep);
    let s1s2 = pos(n_s.min(n_ep) + n_h.min(n_ep) - n_ep);
    (s1 as u32, (s1s2 - s1) as u32)
}

/// Candidate counts `(n_c1, n_c2, n_c3)` for the three precoder classes:
/// C1 source directions invisible at the eavesdropper, C2 aligned pairs
/// that are also jamming-free at the destination, C3 plain aligned pairs.
pub fn candidate_counts(hc: &HelperConfig) -> (u32, u32, u32) {
    let c1 = pos(hc.n_s as i64 - hc.n_ep as i64) as u32;
    let (s1, s2) = s1_s2(hc);
    (c1, s1, s2)
}

/// Achievable S.D.o.F. of the helper channel at a fixed split.
///
/// Cost-1 streams (C1 and C2) each occupy one destination dimension;
/// cost-2 streams (C3) occupy two (message plus visible jamming). The
/// closed form packs cost-1 streams first, then pairs of dimensions for
/// cost-2 streams, and never exceeds `n_d` dimensions or `n_s` streams.
pub fn helper_g(hc: &HelperConfig) -> u32 {
    let (c1, s1, s2) = candidate_counts(hc);
    let d_cost1 = (c1 + s1) as i64;
    let d_cost2 = (s2 as i64).min(pos(hc.n_d as i64 - d_cost1) / 2);
    (d_cost1 + d_cost2).min(hc.n_d as i64).min(hc.n_s as i64) as u32
}

/// Greedy stream selection count under the destination-dimension budget:
/// cost-1 candidates first, then cost-2, stopping when a candidate would
/// exceed `n_d` dimensions or the `n_s` stream cap. Mirrors the order the
/// precoder builder uses; must coincide with [`helper_g`] everywhere.
pub fn greedy_stream_count(hc: &HelperConfig) -> u32 {
    let (c1, s1, s2) = candidate_counts(hc);
    let budget = hc.n_d;
    let mut used = 0u32;
    let mut k = 0u32;
    for _ in 0..(c1 + s1) {
        if used + 1 <= budget && k < hc.n_s {
            used += 1;
            k += 1;
        }
    }
    for _ in 0..s2 {
        if used + 2 <= budget && k < hc.n_s {
            used += 2;
            k += 1;
        }
    }
    k
}

/// Maximum S.D.o.F. of the helper channel over all splits of `n_sum`
/// antennas between helper and destination, in closed form.
pub fn helper_sdof_max(n_sum: u32, n_s: u32, n_ep: u32) -> u32 {
    let (n_sum, n_s, n_ep) = (n_sum as i64, n_s as i64, n_ep as i64);
    let delta = pos(n_sum - (n_s - n_ep).abs()) / 3 + pos(n_s - n_ep);
    delta.min(n_sum).min(n_s) as u32
}

/// A closed-form maximizing helper antenna count for [`helper_sdof_max`]:
/// `helper_g(n_s, n_h_hat, n_sum - n_h_hat, n_ep)` attains the maximum.
/// Returns 0 when the budget is too small for jamming to help
/// (`n_sum <= |n_s - n_ep|`), where every antenna goes to the destination.
pub fn helper_optimal_nh(n_sum: u32, n_s: u32, n_ep: u32) -> u32 {
    let (n_sum, n_s, n_ep) = (n_sum as i64, n_s as i64, n_ep as i64);
    let slack = n_sum - (n_s - n_ep).abs();
    if slack <= 0 {
        return 0;
    }
    let third = slack / 3;
    let nh = if n_s <= n_ep { n_ep - n_s + third } else { third };
    nh as u32
}

/// Exhaustive max of [`helper_g`] over `n_h = 0..=n_sum`; returns the max
/// and the full argmax set. Oracle route for [`helper_sdof_max`] and
/// [`helper_optimal_nh`].
pub fn oracle_helper_max(n_sum: u32, n_s: u32, n_ep: u32) -> (u32, Vec<u32>) {
    let mut best = 0u32;
    let mut argmax = Vec::new();
    for n_h in 0..=n_sum {
        let hc = HelperConfig::new(n_s, n_h, n_sum - n_h, n_ep);
        let g = helper_g(&hc);
        if g > best {
            best = g;
            argmax.clear();
        }
        if g == best {
            argmax.push(n_h);
        }
    }
    (best, argmax)
}

// --- full-network closed forms ---

/// Achievable S.D.o.F. of the full network at a fixed split of both Bob's
/// and Eve's antennas.
///
/// Bob nulls Eve's jamming by projecting onto the `(n_b_r - n_e_t)`
/// dimensions orthogonal to it; Eve's own self-interference denies her
/// `n_e_t` of her `n_e_r` eavesdropping dimensions. Three regimes:
/// - Eve jams at least as many antennas as she listens with
///   (`n_e_t >= n_e_r`): she keeps no clean eavesdropping subspace, and the
///   link supports `min((n_b_r - n_e_t)+, n_a)` streams without secrecy
///   penalty;
/// - otherwise, if her jamming floods Bob (`n_e_t >= n_b_r`): zero;
/// - otherwise the network reduces to the helper channel with
///   `n_s = n_a`, `n_h = n_b_t`, `n_d = n_b_r - n_e_t`,
///   `n_ep = n_e_r - n_e_t`.
pub fn sdof_active(cfg: &AntennaConfig) -> u32 {
    let (n_b_r, n_e_t, n_e_r) = (cfg.n_b_r(), cfg.n_e_t(), cfg.n_e_r());
    if n_e_t >= n_e_r {
        return pos(n_b_r as i64 - n_e_t as i64).min(cfg.n_a as i64) as u32;
    }
    if n_e_t >= n_b_r {
        return 0;
    }
    helper_g(&cfg.helper_equivalent())
}

/// Maximum achievable S.D.o.F. over Bob's split, in closed form, together
/// with a closed-form maximizing `n_b_t`.
pub fn sdof_active_max(n_a: u32, n_b: u32, n_e_t: u32, n_e_r: u32) -> DofResult {
    let (na, nb, net, ner) = (n_a as i64, n_b as i64, n_e_t as i64, n_e_r as i64);
    let dof = if net >= ner {
        pos(nb - net).min(na)
    } else {
        let eta = pos(nb - net - (na - ner + net).abs()) / 3 + pos(na - ner + net);
        eta.min(pos(nb - net)).min(na)
    };

    // Bob's maximizing jamming split: zero whenever jamming cannot raise
    // the S.D.o.F., otherwise the helper-channel optimum shifted by Eve's
    // self-interference discount.
    let nbt_star = if net < ner.min(nb - (na - ner + net).abs()) {
        let third = (nb - net - (na - ner + net).abs()) / 3;
        if na <= ner - net { ner - net - na + third } else { third }
    } else {
        0
    };

    DofResult { dof: dof as u32, optimizer: Some(nbt_star as u32), optimizer_set: Vec::new() }
}

/// Worst-case S.D.o.F. over Eve's split of `n_e` antennas, assuming Bob
/// splits optimally against each Eve strategy, in closed form. The
/// `optimizer_set` holds every minimizing `n_e_t` (scanned, since the
/// minimizer has no closed form).
pub fn worst_case_sdof(n_a: u32, n_b: u32, n_e: u32) -> DofResult {
    let (na, nb, ne) = (n_a as i64, n_b as i64, n_e as i64);
    // Case order matters: the first matching row applies. Conditions with
    // halves are compared as `2*n_e` vs `n_b - n_a` to stay in integers.
    let dof = if ne >= nb {
        0
    } else if nb - na <= 2 * ne && na <= ne {
        // Eve large enough to shadow Alice: jamming-aware three-way balance.
        ((nb - ne + na) / 3).min(nb - ne).min(na)
    } else if nb - na <= 2 * ne && ne > na - nb {
        ((nb - na + ne) / 3 + na - ne).min(nb - ne)
    } else if nb - na <= 2 * ne {
        nb - ne
    } else {
        // Eve too small to matter: Alice keeps all her streams.
        na
    };

    let mut worst = u32::MAX;
    let mut argmin = Vec::new();
    for n_e_t in 0..=n_e {
        let d = sdof_active_max(n_a, n_b, n_e_t, n_e - n_e_t).dof;
        if d < worst {
            worst = d;
            argmin.clear();
        }
        if d == worst {
            argmin.push(n_e_t);
        }
    }

    DofResult { dof: dof as u32, optimizer: None, optimizer_set: argmin }
}

// --- exhaustive oracles ---

/// Exhaustive max of [`sdof_active`] over `n_b_t = 0..=n_b`; returns the
/// max and the full argmax set. Oracle route for [`sdof_active_max`].
pub fn oracle_max_over_split(n_a: u32, n_b: u32, n_e_t: u32, n_e_r: u32) -> DofResult {
    let mut best = 0u32;
    let mut argmax = Vec::new();
    for n_b_t in 0..=n_b {
        let cfg = AntennaConfig::new(n_a, n_b, n_b_t, n_e_t, n_e_r)
            .expect("split bounded by n_b");
        let d = sdof_active(&cfg);
        if d > best {
            best = d;
            argmax.clear();
        }
        if d == best {
            argmax.push(n_b_t);
        }
    }
    DofResult { dof: best, optimizer: None, optimizer_set: argmax }
}

/// Exhaustive min over Eve's split of the exhaustive max over Bob's split.
/// Fully search-based oracle route for [`worst_case_sdof`].
pub fn oracle_worst_case(n_a: u32, n_b: u32, n_e: u32) -> DofResult {
    let mut worst = u32::MAX;
    let mut argmin = Vec::new();
    for n_e_t in 0..=n_e {
        let d = oracle_max_over_split(n_a, n_b, n_e_t, n_e - n_e_t).dof;
        if d < worst {
            worst = d;
            argmin.clear();
        }
        if d == worst {
            argmin.push(n_e_t);
        }
    }
    DofResult { dof: worst, optimizer: None, optimizer_set: argmin }
}

// --- tests ---

#[cfg(test)]
mod tests {
    use super::*;

    fn hc(n_s: u32, n_h: u32, n_d: u32, n_ep: u32) -> HelperConfig {
        HelperConfig::new(n_s, n_h, n_d, n_ep)
    }

    #[test]
    fn config_rejects_bad_splits() {
        assert!(AntennaConfig::new(0, 7, 2, 1, 5).is_err());
        assert!(AntennaConfig::new(4, 0, 0, 1, 5).is_err());
        assert!(AntennaConfig::new(4, 7, 8, 1, 5).is_err());
        let cfg = AntennaConfig::new(4, 7, 2, 1, 5).unwrap();
        assert_eq!(cfg.n_b_r(), 5);
        assert_eq!(cfg.n_e(), 6);
        assert_eq!(cfg.n_e_r(), 5);
    }

    #[test]
    fn aligned_pair_counts_on_reference_splits() {
        assert_eq!(s1_s2(&hc(4, 2, 4, 4)), (0, 2));
        assert_eq!(s1_s2(&hc(4, 4, 2, 4)), (2, 2));
        assert_eq!(s1_s2(&hc(3, 0, 5, 3)), (0, 0));
    }

    #[test]
    fn candidate_counts_per_class() {
        assert_eq!(candidate_counts(&hc(4, 2, 4, 4)), (0, 0, 2));
        assert_eq!(candidate_counts(&hc(4, 4, 2, 4)), (0, 2, 2));
        assert_eq!(candidate_counts(&hc(6, 0, 3, 2)), (4, 0, 0));
    }

    #[test]
    fn helper_dof_at_fixed_splits() {
        assert_eq!(helper_g(&hc(4, 2, 4, 4)), 2);
        assert_eq!(helper_g(&hc(4, 4, 2, 4)), 2);
        assert_eq!(helper_g(&hc(4, 3, 3, 4)), 1);
        // No helper antennas and a fully covered source: nothing gets out.
        assert_eq!(helper_g(&hc(4, 0, 4, 4)), 0);
        // No eavesdropper: plain point-to-point multiplexing.
        assert_eq!(helper_g(&hc(3, 0, 4, 0)), 3);
    }

    #[test]
    fn helper_max_closed_form_values() {
        assert_eq!(helper_sdof_max(6, 4, 4), 2);
        assert_eq!(helper_sdof_max(3, 2, 6), 0);
        assert_eq!(helper_sdof_max(3, 8, 2), 3);
    }

    #[test]
    fn optimal_helper_count_matches_exhaustive_search() {
        // Frozen from the oracle: splits n_h in {4,5,6,7} all reach the
        // max of 2; the closed form picks 4.
        let (max, argmax) = oracle_helper_max(9, 3, 5);
        assert_eq!(max, 2);
        assert_eq!(argmax, vec![4, 5, 6, 7]);
        assert_eq!(helper_optimal_nh(9, 3, 5), 4);
        assert_eq!(helper_optimal_nh(6, 4, 4), 2);
        // Budget no larger than the antenna-count gap: all antennas to the
        // destination.
        assert_eq!(helper_optimal_nh(3, 2, 6), 0);
        assert_eq!(helper_optimal_nh(2, 6, 2), 0);
    }

    #[test]
    fn fixed_split_dof_full_network() {
        let cfg = AntennaConfig::new(4, 7, 2, 1, 5).unwrap();
        assert_eq!(sdof_active(&cfg), 2);
        // Frozen from the helper-channel reduction by hand: Eve jamming 3
        // discounts both sides, leaving one aligned stream.
        let cfg = AntennaConfig::new(10, 18, 5, 3, 17).unwrap();
        assert_eq!(sdof_active(&cfg), 1);
        // Eve jams with everything she has: no eavesdropping left, but her
        // jamming floods Bob's receive array.
        let cfg = AntennaConfig::new(5, 6, 0, 6, 0).unwrap();
        assert_eq!(sdof_active(&cfg), 0);
    }

    #[test]
    fn optimal_split_reference_points() {
        let r = sdof_active_max(4, 7, 1, 5);
        assert_eq!((r.dof, r.optimizer), (2, Some(2)));
        // Frozen from oracle_max_over_split: dof 3 at n_b_t in {5,6,7}.
        let r = sdof_active_max(10, 18, 3, 17);
        assert_eq!((r.dof, r.optimizer), (3, Some(7)));
        let o = oracle_max_over_split(10, 18, 3, 17);
        assert_eq!(o.dof, 3);
        assert!(o.optimizer_set.contains(&7));
        // No Eve at all: plain multiplexing with every Bob antenna listening.
        assert_eq!(sdof_active_max(3, 5, 0, 0).dof, 3);
        assert_eq!(oracle_max_over_split(1, 1, 0, 0).dof, 1);
    }

    #[test]
    fn worst_case_reference_points() {
        assert_eq!(worst_case_sdof(10, 18, 20).dof, 0);
        assert_eq!(worst_case_sdof(2, 10, 3).dof, 2);
        let r = worst_case_sdof(4, 7, 6);
        assert_eq!(r.dof, 1);
        // Frozen from the oracle: Eve's minimizing splits are all-listen
        // or all-jam.
        assert_eq!(r.optimizer_set, vec![0, 6]);
        let o = oracle_worst_case(4, 7, 6);
        assert_eq!(o.dof, 1);
        assert_eq!(o.optimizer_set, vec![0, 6]);
        assert_eq!(oracle_worst_case(3, 5, 0).dof, 3);
    }

    #[test]
    fn greedy_matches_closed_form_on_spot_checks() {
        for hc in [hc(4, 2, 4, 4), hc(4, 4, 2, 4), hc(3, 3, 3, 3), hc(5, 4, 3, 2), hc(2, 6, 6, 2)] {
            assert_eq!(greedy_stream_count(&hc), helper_g(&hc), "split {hc:?}");
        }
    }
}

//! Grid verification of the closed-form S.D.o.F. results against their
//! exhaustive-search oracles.
//!
//! Each checker sweeps a full antenna-count grid, compares the closed form
//! with brute force, and collects human-readable counterexamples. The
//! `*_with` variants take the closed form as a parameter so tests can prove
//! the machinery actually catches wrong formulas.

use serde::Serialize;

use crate::dof::{
    self, greedy_stream_count, helper_g, helper_optimal_nh, helper_sdof_max, oracle_helper_max,
    oracle_max_over_split, oracle_worst_case, DofResult, HelperConfig,
};

/// Inclusive upper bounds of the verification grids. Lower bounds are 1
/// for `n_a` and `n_b`, 0 elsewhere.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct GridBounds {
    pub na_max: u32,
    pub nb_max: u32,
    pub ne_max: u32,
    pub nsum_max: u32,
}

impl Default for GridBounds {
    fn default() -> Self {
        Self { na_max: 10, nb_max: 12, ne_max: 12, nsum_max: 15 }
    }
}

/// Outcome of one grid sweep: how many configurations were checked and
/// every counterexample found.
#[derive(Debug, Clone, Serialize)]
pub struct GridReport {
    pub name: String,
    pub checks: u64,
    pub mismatches: Vec<String>,
}

impl GridReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Closed-form optimal Bob split vs exhaustive search, plus membership of
/// the closed-form optimizer in the exhaustive argmax set.
pub fn verify_optimal_split(bounds: &GridBounds) -> GridReport {
    verify_optimal_split_with(dof::sdof_active_max, bounds)
}

pub fn verify_optimal_split_with(
    formula: impl Fn(u32, u32, u32, u32) -> DofResult,
    bounds: &GridBounds,
) -> GridReport {
    let mut report = GridReport {
        name: "optimal-split".into(),
        checks: 0,
        mismatches: Vec::new(),
    };
    for n_a in 1..=bounds.na_max {
        for n_b in 1..=bounds.nb_max {
            for n_e_t in 0..=bounds.ne_max {
                for n_e_r in 0..=bounds.ne_max {
                    report.checks += 1;
                    let got = formula(n_a, n_b, n_e_t, n_e_r);
                    let oracle = oracle_max_over_split(n_a, n_b, n_e_t, n_e_r);
                    if got.dof != oracle.dof {
                        report.mismatches.push(format!(
                            "optimal-split dof: n_a={n_a} n_b={n_b} n_e_t={n_e_t} n_e_r={n_e_r}: \
                             closed form {}, exhaustive {}",
                            got.dof, oracle.dof
                        ));
                    } else if let Some(nbt) = got.optimizer {
                        if !oracle.optimizer_set.contains(&nbt) {
                            report.mismatches.push(format!(
                                "optimal-split argmax: n_a={n_a} n_b={n_b} n_e_t={n_e_t} \
                                 n_e_r={n_e_r}: closed-form n_b_t={nbt} not in exhaustive set \
                                 {:?}",
                                oracle.optimizer_set
                            ));
                        }
                    }
                }
            }
        }
    }
    report
}

/// Closed-form worst case over Eve's split vs exhaustive search, plus the
/// structural guarantee that some minimizing Eve strategy is all-jam or
/// all-listen.
pub fn verify_worst_case(bounds: &GridBounds) -> GridReport {
    verify_worst_case_with(dof::worst_case_sdof, bounds)
}

pub fn verify_worst_case_with(
    formula: impl Fn(u32, u32, u32) -> DofResult,
    bounds: &GridBounds,
) -> GridReport {
    let mut report = GridReport {
        name: "worst-case".into(),
        checks: 0,
        mismatches: Vec::new(),
    };
    for n_a in 1..=bounds.na_max {
        for n_b in 1..=bounds.nb_max {
            for n_e in 0..=bounds.ne_max {
                report.checks += 1;
                let got = formula(n_a, n_b, n_e);
                let oracle = oracle_worst_case(n_a, n_b, n_e);
                if got.dof != oracle.dof {
                    report.mismatches.push(format!(
                        "worst-case dof: n_a={n_a} n_b={n_b} n_e={n_e}: closed form {}, \
                         exhaustive {}",
                        got.dof, oracle.dof
                    ));
                    continue;
                }
                if got.optimizer_set != oracle.optimizer_set {
                    report.mismatches.push(format!(
                        "worst-case argmin: n_a={n_a} n_b={n_b} n_e={n_e}: scanned {:?}, \
                         exhaustive {:?}",
                        got.optimizer_set, oracle.optimizer_set
                    ));
                }
                if !oracle.optimizer_set.iter().any(|&t| t == 0 || t == n_e) {
                    report.mismatches.push(format!(
                        "worst-case extremes: n_a={n_a} n_b={n_b} n_e={n_e}: no minimizer at \
                         n_e_t=0 or n_e_t=n_e in {:?}",
                        oracle.optimizer_set
                    ));
                }
                let cap = n_a.min(n_b);
                if got.dof > cap {
                    report.mismatches.push(format!(
                        "worst-case range: n_a={n_a} n_b={n_b} n_e={n_e}: dof {} exceeds \
                         min(n_a, n_b) = {cap}",
                        got.dof
                    ));
                }
            }
        }
    }
    report
}

/// The claimed guarantee that Bob out-gunning Eve (`n_b > n_e`) always
/// keeps at least one secure stream in the worst case.
///
/// The claim is false as stated: for `n_a = 1` and `n_e = n_b - 1` the
/// worst case is zero (Eve listens with everything; one aligned pair
/// exists but its jamming burns Bob's last receive dimension), and the
/// closed form and the exhaustive search agree on that. This checker
/// reports every violation so the failure stays visible rather than
/// patched over; see the README's known-limitations note.
pub fn verify_worst_case_positivity(bounds: &GridBounds) -> GridReport {
    let mut report = GridReport {
        name: "worst-case-positivity".into(),
        checks: 0,
        mismatches: Vec::new(),
    };
    for n_a in 1..=bounds.na_max {
        for n_b in 1..=bounds.nb_max {
            for n_e in 0..=bounds.ne_max {
                if n_b <= n_e {
                    continue;
                }
                report.checks += 1;
                let dof = dof::worst_case_sdof(n_a, n_b, n_e).dof;
                if dof < 1 {
                    report.mismatches.push(format!(
                        "worst-case positivity: n_a={n_a} n_b={n_b} n_e={n_e}: n_b > n_e but \
                         dof = 0"
                    ));
                }
            }
        }
    }
    report
}

/// Closed-form helper-channel max over the antenna split vs exhaustive
/// search, plus membership of the closed-form split in the argmax set.
pub fn verify_helper_allocation(bounds: &GridBounds) -> GridReport {
    verify_helper_allocation_with(helper_sdof_max, bounds)
}

pub fn verify_helper_allocation_with(
    formula: impl Fn(u32, u32, u32) -> u32,
    bounds: &GridBounds,
) -> GridReport {
    let mut report = GridReport {
        name: "helper-allocation".into(),
        checks: 0,
        mismatches: Vec::new(),
    };
    for n_sum in 0..=bounds.nsum_max {
        for n_s in 0..=bounds.ne_max {
            for n_ep in 0..=bounds.ne_max {
                report.checks += 1;
                let got = formula(n_sum, n_s, n_ep);
                let (max, argmax) = oracle_helper_max(n_sum, n_s, n_ep);
                if got != max {
                    report.mismatches.push(format!(
                        "helper max: n_sum={n_sum} n_s={n_s} n_ep={n_ep}: closed form {got}, \
                         exhaustive {max}"
                    ));
                    continue;
                }
                let nh = helper_optimal_nh(n_sum, n_s, n_ep);
                if !argmax.contains(&nh) {
                    report.mismatches.push(format!(
                        "helper split: n_sum={n_sum} n_s={n_s} n_ep={n_ep}: closed-form \
                         n_h={nh} not in exhaustive argmax {argmax:?}"
                    ));
                }
            }
        }
    }
    report
}

/// Greedy budgeted stream selection vs the closed-form helper S.D.o.F. on
/// every split: the packing order the precoder builder uses must never
/// lose a stream the closed form promises.
pub fn verify_stream_budget(bounds: &GridBounds) -> GridReport {
    let mut report = GridReport {
        name: "stream-budget".into(),
        checks: 0,
        mismatches: Vec::new(),
    };
    for n_sum in 0..=bounds.nsum_max {
        for n_h in 0..=n_sum {
            for n_s in 0..=bounds.ne_max {
                for n_ep in 0..=bounds.ne_max {
                    report.checks += 1;
                    let hc = HelperConfig::new(n_s, n_h, n_sum - n_h, n_ep);
                    let greedy = greedy_stream_count(&hc);
                    let closed = helper_g(&hc);
                    if greedy != closed {
                        report.mismatches.push(format!(
                            "stream budget: {hc:?}: greedy {greedy}, closed form {closed}"
                        ));
                    }
                }
            }
        }
    }
    report
}

/// Runs every grid check at the given bounds. The positivity check is
/// included and is expected to report its documented counterexamples.
pub fn verify_all(bounds: &GridBounds) -> Vec<GridReport> {
    vec![
        verify_optimal_split(bounds),
        verify_worst_case(bounds),
        verify_helper_allocation(bounds),
        verify_stream_budget(bounds),
        verify_worst_case_positivity(bounds),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corrupted_formula_is_caught() {
        let bounds = GridBounds { na_max: 4, nb_max: 5, ne_max: 4, nsum_max: 6 };
        let report = verify_optimal_split_with(
            |n_a, n_b, n_e_t, n_e_r| {
                let mut r = dof::sdof_active_max(n_a, n_b, n_e_t, n_e_r);
                r.dof += u32::from(n_e_t == 2); // inject an off-by-one
                r
            },
            &bounds,
        );
        assert!(!report.passed());
        assert!(report.mismatches.len() >= 1);
        assert!(report.mismatches[0].contains("n_e_t=2"));
    }

    #[test]
    fn small_grids_pass() {
        let bounds = GridBounds { na_max: 4, nb_max: 5, ne_max: 4, nsum_max: 6 };
        for report in verify_all(&bounds) {
            assert!(report.checks > 0);
            if report.name == "worst-case-positivity" {
                continue; // documented counterexamples, checked below
            }
            assert!(report.passed(), "{}: {:?}", report.name, report.mismatches);
        }
    }

    #[test]
    fn positivity_violations_are_exactly_the_documented_family() {
        // The guarantee fails precisely at n_a = 1, n_e = n_b - 1 >= 1:
        // both the closed form and the exhaustive search give 0 there.
        let bounds = GridBounds { na_max: 4, nb_max: 5, ne_max: 4, nsum_max: 6 };
        let report = verify_worst_case_positivity(&bounds);
        let expected: Vec<String> = (2..=5)
            .map(|n_b| {
                format!(
                    "worst-case positivity: n_a=1 n_b={n_b} n_e={}: n_b > n_e but dof = 0",
                    n_b - 1
                )
            })
            .collect();
        assert_eq!(report.mismatches, expected);
        for n_b in 2..=5u32 {
            assert_eq!(dof::oracle_worst_case(1, n_b, n_b - 1).dof, 0);
        }
    }
}

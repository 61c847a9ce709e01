//! Joint-distribution feasibility for the four cross correlators, decided
//! two independent ways: exact linear feasibility over the 16 outcome atoms
//! (phase-1 simplex, no external solver), and the eight-inequality
//! correlation-polytope test. The two verdicts must agree.

use crate::model::{labels, CorrelatorSet, Error, JointTable, Result};

/// Degeneracy tolerance for the feasibility decision.
pub const FEAS_TOL: f64 = 1e-9;

/// Outcome of a feasibility query. A feasible verdict carries a witness
/// table that reproduces the input correlators within [`FEAS_TOL`]; an
/// infeasible verdict names a violated inequality.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityResult {
    pub feasible: bool,
    pub witness: Option<JointTable>,
    pub violated_inequality: Option<String>,
}

const PARTIES: [&str; 4] = [labels::A1, labels::B1, labels::A2, labels::B2];
const CROSS_PAIRS: [(usize, usize); 4] = [(0, 1), (1, 2), (2, 3), (0, 3)];

/// The eight CHSH variants: every signed sum of the four cross correlators
/// with an odd number of minus signs, each bounded by 2 for any joint
/// distribution. Returns (label, value) pairs.
pub fn chsh_variants(c: &CorrelatorSet) -> Vec<(String, f64)> {
    let names = ["E_A1B1", "E_B1A2", "E_A2B2", "E_A1B2"];
    let values = c.cross();
    let mut out = Vec::with_capacity(8);
    for mask in 0u32..16 {
        if mask.count_ones() % 2 != 1 {
            continue;
        }
        let mut value = 0.0;
        let mut label = String::new();
        for (k, (name, e)) in names.iter().zip(values).enumerate() {
            let sign = if mask & (1 << k) != 0 { -1.0 } else { 1.0 };
            value += sign * e;
            if !label.is_empty() {
                label.push(' ');
            }
            label.push(if sign > 0.0 { '+' } else { '-' });
            label.push_str(name);
        }
        out.push((label, value));
    }
    out
}

/// The maximal CHSH variant as (label, value).
pub fn max_chsh_variant(c: &CorrelatorSet) -> (String, f64) {
    chsh_variants(c)
        .into_iter()
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("eight variants")
}

/// True when every CHSH variant is within the classical bound.
pub fn chsh_family_satisfied(c: &CorrelatorSet) -> bool {
    max_chsh_variant(c).1 <= 2.0 + FEAS_TOL
}

/// Decide whether a 16-atom joint with the given pairwise expectations
/// exists, optionally also requiring fair single-party marginals, and
/// cross-check the verdict against the CHSH family.
pub fn joint_exists(c: &CorrelatorSet, unbiased_marginals: bool) -> Result<FeasibilityResult> {
    let pairs: Vec<(&str, &str, f64)> = CROSS_PAIRS
        .iter()
        .zip(c.cross())
        .map(|(&(i, j), e)| (PARTIES[i], PARTIES[j], e))
        .collect();
    let result = pair_feasibility(&pairs, unbiased_marginals)?;

    let lp_infeasible = !result.feasible;
    let (label, max_variant) = max_chsh_variant(c);
    let chsh_infeasible = max_variant > 2.0 + FEAS_TOL;
    if lp_infeasible != chsh_infeasible && (max_variant - 2.0).abs() > 1e-8 {
        return Err(Error::Internal(format!(
            "feasibility verdicts disagree: LP {} vs CHSH {} (max variant {} = {})",
            if lp_infeasible { "infeasible" } else { "feasible" },
            if chsh_infeasible { "infeasible" } else { "feasible" },
            label,
            max_variant,
        )));
    }
    Ok(result)
}

/// Linear-feasibility query for arbitrary pairwise expectation constraints
/// over (A1, B1, A2, B2). Duplicate pairs with conflicting values are an
/// error; agreeing duplicates are merged.
pub fn pair_feasibility(
    pairs: &[(&str, &str, f64)],
    unbiased_marginals: bool,
) -> Result<FeasibilityResult> {
    let mut merged: Vec<(usize, usize, f64)> = Vec::new();
    for &(first, second, e) in pairs {
        let i = party_index(first)?;
        let j = party_index(second)?;
        if i == j {
            return Err(Error::DuplicateParty(first.to_string()));
        }
        if !e.is_finite() || e.abs() > 1.0 + FEAS_TOL {
            return Err(Error::OutOfRange {
                what: "pair expectation",
                lo: -1.0,
                hi: 1.0,
                value: e,
            });
        }
        let (lo, hi) = (i.min(j), i.max(j));
        if let Some(existing) = merged.iter().find(|&&(a, b, _)| (a, b) == (lo, hi)) {
            if (existing.2 - e).abs() > 1e-12 {
                return Err(Error::ConflictingConstraint(
                    first.to_string(),
                    second.to_string(),
                    existing.2,
                    e,
                ));
            }
            continue;
        }
        merged.push((lo, hi, e));
    }

    // One row per constraint over the 16 atom weights.
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut rhs: Vec<f64> = Vec::new();
    rows.push(vec![1.0; 16]);
    rhs.push(1.0);
    for &(i, j, e) in &merged {
        let row = (0..16)
            .map(|atom| atom_sign(atom, i) * atom_sign(atom, j))
            .collect();
        rows.push(row);
        rhs.push(e);
    }
    if unbiased_marginals {
        for party in 0..4 {
            rows.push((0..16).map(|atom| atom_sign(atom, party)).collect());
            rhs.push(0.0);
        }
    }

    match phase1_simplex(&rows, &rhs)? {
        Some(weights) => {
            let total: f64 = weights.iter().sum();
            let probs: Vec<f64> = weights.iter().map(|w| w / total).collect();
            let witness = JointTable::new(PARTIES.to_vec(), probs)?;
            for &(i, j, e) in &merged {
                let got = witness.expectation(PARTIES[i], PARTIES[j])?;
                if (got - e).abs() > FEAS_TOL {
                    return Err(Error::Internal(format!(
                        "witness reproduces E({}, {}) as {} instead of {}",
                        PARTIES[i], PARTIES[j], got, e
                    )));
                }
            }
            Ok(FeasibilityResult {
                feasible: true,
                witness: Some(witness),
                violated_inequality: None,
            })
        }
        None => {
            // Name the strongest violated family member, if one exists.
            let violated = correlator_set_of(&merged)
                .map(|set| max_chsh_variant(&set))
                .filter(|(_, v)| *v > 2.0 + FEAS_TOL)
                .map(|(label, value)| format!("{label} = {value:.9} > 2"));
            Ok(FeasibilityResult {
                feasible: false,
                witness: None,
                violated_inequality: Some(violated.unwrap_or_else(|| {
                    "no nonnegative normalized weighting matches the constraints".to_string()
                })),
            })
        }
    }
}

fn correlator_set_of(merged: &[(usize, usize, f64)]) -> Option<CorrelatorSet> {
    let mut cross = [None; 4];
    for &(i, j, e) in merged {
        if let Some(k) = CROSS_PAIRS.iter().position(|&(a, b)| (a, b) == (i, j)) {
            cross[k] = Some(e);
        }
    }
    match cross {
        [Some(a), Some(b), Some(c), Some(d)] => CorrelatorSet::new(a, b, c, d).ok(),
        _ => None,
    }
}

fn party_index(label: &str) -> Result<usize> {
    PARTIES
        .iter()
        .position(|p| *p == label)
        .ok_or_else(|| Error::UnknownParty(label.to_string()))
}

/// Sign of `party` in the given atom index; party 0 occupies the most
/// significant bit, bit 0 means +1.
fn atom_sign(atom: usize, party: usize) -> f64 {
    if (atom >> (3 - party)) & 1 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Phase-1 simplex with Bland's rule: minimize the sum of artificial
/// variables for A·x = b, x ≥ 0. Returns a feasible x when the optimum is
/// within [`FEAS_TOL`] of zero, `None` when the system is infeasible.
fn phase1_simplex(rows: &[Vec<f64>], rhs: &[f64]) -> Result<Option<Vec<f64>>> {
    let m = rows.len();
    let n = rows[0].len();
    let cols = n + m;

    // tableau[i] = row of length cols + 1 (rhs last); artificial i is basic.
    let mut tableau: Vec<Vec<f64>> = Vec::with_capacity(m);
    for (row, &b) in rows.iter().zip(rhs) {
        let flip = if b < 0.0 { -1.0 } else { 1.0 };
        let mut t: Vec<f64> = row.iter().map(|&a| flip * a).collect();
        t.resize(cols, 0.0);
        t.push(flip * b);
        tableau.push(t);
    }
    for (i, row) in tableau.iter_mut().enumerate() {
        row[n + i] = 1.0;
    }
    let mut basis: Vec<usize> = (n..cols).collect();

    // Reduced-cost row for minimizing the artificial sum: artificials are
    // basic, so their reduced costs start at zero and the original columns
    // start at minus their column sums.
    let mut cost = vec![0.0; cols + 1];
    for j in 0..=cols {
        cost[j] = -tableau.iter().map(|row| row[j]).sum::<f64>();
    }
    for i in 0..m {
        cost[n + i] = 0.0;
    }

    let mut iterations = 0usize;
    loop {
        iterations += 1;
        if iterations > 10_000 {
            return Err(Error::Internal(
                "phase-1 simplex exceeded the iteration cap".to_string(),
            ));
        }
        // Bland: entering column is the lowest index with negative reduced cost.
        let entering = (0..cols).find(|&j| cost[j] < -FEAS_TOL);
        let Some(entering) = entering else {
            let objective = -cost[cols];
            if objective > FEAS_TOL {
                return Ok(None);
            }
            let mut x = vec![0.0; n];
            for (i, &var) in basis.iter().enumerate() {
                if var < n {
                    x[var] = tableau[i][cols].max(0.0);
                }
            }
            return Ok(Some(x));
        };
        // Ratio test; ties broken by the smallest basis variable (Bland).
        let mut leaving: Option<(usize, f64)> = None;
        for (i, row) in tableau.iter().enumerate() {
            if row[entering] > FEAS_TOL {
                let ratio = row[cols] / row[entering];
                let better = match leaving {
                    None => true,
                    Some((cur, best)) => {
                        ratio < best - 1e-15
                            || ((ratio - best).abs() <= 1e-15 && basis[i] < basis[cur])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
        }
        let Some((pivot_row, _)) = leaving else {
            // The phase-1 objective is bounded below by 0, so an unbounded
            // ray cannot occur; treat it as a solver failure.
            return Err(Error::Internal(
                "phase-1 simplex found an unbounded direction".to_string(),
            ));
        };

        let pivot = tableau[pivot_row][entering];
        for value in tableau[pivot_row].iter_mut() {
            *value /= pivot;
        }
        let pivot_values = tableau[pivot_row].clone();
        for (i, row) in tableau.iter_mut().enumerate() {
            if i == pivot_row {
                continue;
            }
            let factor = row[entering];
            if factor == 0.0 {
                continue;
            }
            for (value, pivot_value) in row.iter_mut().zip(&pivot_values) {
                *value -= factor * pivot_value;
            }
        }
        let factor = cost[entering];
        if factor != 0.0 {
            for (value, pivot_value) in cost.iter_mut().zip(&pivot_values) {
                *value -= factor * pivot_value;
            }
        }
        basis[pivot_row] = entering;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Settings, Sign};
    use std::f64::consts::PI;

    fn tsirelson() -> Settings {
        Settings::new(0.0, PI / 4.0, PI / 2.0, 3.0 * PI / 4.0).unwrap()
    }

    #[test]
    fn all_zero_correlators_are_feasible() {
        let set = CorrelatorSet::new(0.0, 0.0, 0.0, 0.0).unwrap();
        let result = joint_exists(&set, true).unwrap();
        assert!(result.feasible);
        assert!(result.witness.is_some());
    }

    #[test]
    fn pilot_wave_set_is_feasible_with_witness() {
        let pm = crate::pilotwave::pm_correlators(&tsirelson()).unwrap();
        let result = joint_exists(&pm.chain, true).unwrap();
        assert!(result.feasible);
        let witness = result.witness.unwrap();
        for ((a, b), e) in [("A1", "B1"), ("B1", "A2"), ("A2", "B2"), ("A1", "B2")]
            .into_iter()
            .zip(pm.chain.cross())
        {
            assert!((witness.expectation(a, b).unwrap() - e).abs() < FEAS_TOL);
        }
    }

    #[test]
    fn quantum_set_at_tsirelson_is_infeasible() {
        let set = crate::quantum::quantum_correlator_set(&tsirelson()).unwrap();
        let result = joint_exists(&set, true).unwrap();
        assert!(!result.feasible);
        assert!(result.witness.is_none());
        assert!(result.violated_inequality.unwrap().contains("> 2"));
    }

    #[test]
    fn verdicts_agree_on_random_sets() {
        let mut state = 1234u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        };
        for _ in 0..1000 {
            let set = CorrelatorSet::new(next(), next(), next(), next()).unwrap();
            let result = joint_exists(&set, true).unwrap();
            assert_eq!(result.feasible, chsh_family_satisfied(&set));
        }
    }

    #[test]
    fn marginal_constraint_produces_fair_witness() {
        let set = CorrelatorSet::new(0.5, -0.3, 0.2, 0.1).unwrap();
        let result = joint_exists(&set, true).unwrap();
        let witness = result.witness.unwrap();
        for party in ["A1", "B1", "A2", "B2"] {
            let p = witness.event_prob(&[(party, Sign::Plus)]).unwrap();
            assert!((p - 0.5).abs() < FEAS_TOL, "party {party}: {p}");
        }
    }

    #[test]
    fn conflicting_duplicate_pairs_are_rejected() {
        let err = pair_feasibility(
            &[("A1", "B1", 0.5), ("B1", "A1", -0.5)],
            false,
        )
        .unwrap_err();
        assert!(matches!(err, Error::ConflictingConstraint(..)));
        // Agreeing duplicates pass.
        assert!(pair_feasibility(&[("A1", "B1", 0.5), ("B1", "A1", 0.5)], false)
            .unwrap()
            .feasible);
    }

    #[test]
    fn same_side_constraints_participate() {
        // Perfectly correlated chain A1=B1=A2=B2 is feasible.
        let result = pair_feasibility(
            &[
                ("A1", "B1", 1.0),
                ("A1", "A2", 1.0),
                ("B1", "B2", 1.0),
                ("A2", "B2", 1.0),
            ],
            false,
        )
        .unwrap();
        assert!(result.feasible);
        // A1=B1, B1=A2, A2=B2 but A1 anti-correlated with B2 is not.
        let result = pair_feasibility(
            &[
                ("A1", "B1", 1.0),
                ("B1", "A2", 1.0),
                ("A2", "B2", 1.0),
                ("A1", "B2", -1.0),
            ],
            false,
        )
        .unwrap();
        assert!(!result.feasible);
    }
}

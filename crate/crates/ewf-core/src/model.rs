//! Shared outcome algebra: signs, angles, measurement settings, joint
//! probability tables and correlator sets.
//!
//! Every engine in this workspace reports its predictions as a [`JointTable`]
//! over ±1 outcomes, one slot per party. Tables are dense (2^n atoms over n
//! parties), validated for nonnegativity and unit mass on construction, and
//! immutable afterwards, so they can be shared freely across threads.

use std::f64::consts::PI;
use std::fmt;

use thiserror::Error;

/// Absolute tolerance for table normalization and amplitude-norm checks.
pub const NORM_TOL: f64 = 1e-12;

/// Well-known party labels used by the built-in experiments.
pub mod labels {
    pub const A1: &str = "A1";
    pub const B1: &str = "B1";
    pub const A2: &str = "A2";
    pub const B2: &str = "B2";
    pub const FBAR: &str = "Fbar";
    pub const F: &str = "F";
    pub const W: &str = "W";
    pub const WBAR: &str = "Wbar";
    pub const W1: &str = "W1";
    pub const W2: &str = "W2";
    pub const W3: &str = "W3";
    pub const F1: &str = "F1";
    pub const F2: &str = "F2";
    pub const F3: &str = "F3";
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("unknown party label `{0}`")]
    UnknownParty(String),
    #[error("duplicate party label `{0}`")]
    DuplicateParty(String),
    #[error("party subset must not be empty")]
    EmptyPartySubset,
    #[error("expected {expected} atom probabilities for {parties} parties, got {got}")]
    WrongAtomCount {
        expected: usize,
        parties: usize,
        got: usize,
    },
    #[error("negative probability {value} at atom {index}")]
    NegativeProbability { index: usize, value: f64 },
    #[error("table mass {total} deviates from 1 by more than {NORM_TOL}")]
    NotNormalized { total: f64 },
    #[error("{what} must lie in [{lo}, {hi}], got {value}")]
    OutOfRange {
        what: &'static str,
        lo: f64,
        hi: f64,
        value: f64,
    },
    #[error("{what} must be finite")]
    NotFinite { what: &'static str },
    #[error("party lists differ: [{left}] vs [{right}]")]
    PartyMismatch { left: String, right: String },
    #[error("conflicting constraints for pair ({0}, {1}): {2} vs {3}")]
    ConflictingConstraint(String, String, f64, f64),
    #[error("malformed premise: {0}")]
    MalformedPremise(String),
    #[error("unsupported trial plan ({engine}): {reason}")]
    UnsupportedPlan {
        engine: &'static str,
        reason: String,
    },
    #[error("internal solver failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// A measurement direction in the fixed plane, in radians.
///
/// No range restriction is imposed; everything downstream depends on angle
/// differences only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Angle(f64);

impl Angle {
    pub fn new(radians: f64) -> Result<Self> {
        if radians.is_finite() {
            Ok(Angle(radians))
        } else {
            Err(Error::NotFinite { what: "angle" })
        }
    }

    pub fn radians(self) -> f64 {
        self.0
    }
}

/// Wrap an angle difference to the interval (−π, π].
pub fn wrap_angle(x: f64) -> f64 {
    let r = x.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// A ±1 measurement outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    fn bit(self) -> usize {
        match self {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }

    fn from_bit(bit: usize) -> Sign {
        if bit == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => write!(f, "+1"),
            Sign::Minus => write!(f, "-1"),
        }
    }
}

/// The four measurement directions of the two-round pair experiment: first
/// round (a1, b1), second round (a2, b2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    pub a1: Angle,
    pub b1: Angle,
    pub a2: Angle,
    pub b2: Angle,
}

impl Settings {
    pub fn new(a1: f64, b1: f64, a2: f64, b2: f64) -> Result<Self> {
        Ok(Settings {
            a1: Angle::new(a1)?,
            b1: Angle::new(b1)?,
            a2: Angle::new(a2)?,
            b2: Angle::new(b2)?,
        })
    }

    /// Geometric angle between the two a-side axes, in [0, π].
    pub fn alpha(&self) -> f64 {
        wrap_angle(self.a1.radians() - self.a2.radians()).abs()
    }

    /// Geometric angle between the two b-side axes, in [0, π].
    pub fn beta(&self) -> f64 {
        wrap_angle(self.b1.radians() - self.b2.radians()).abs()
    }
}

/// An ordered assignment of one sign per party; labels are unique.
#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeTuple(Vec<(String, Sign)>);

impl OutcomeTuple {
    pub fn new(pairs: Vec<(String, Sign)>) -> Result<Self> {
        for (i, (label, _)) in pairs.iter().enumerate() {
            if pairs[..i].iter().any(|(other, _)| other == label) {
                return Err(Error::DuplicateParty(label.clone()));
            }
        }
        Ok(OutcomeTuple(pairs))
    }

    pub fn pairs(&self) -> &[(String, Sign)] {
        &self.0
    }

    pub fn sign_of(&self, party: &str) -> Option<Sign> {
        self.0
            .iter()
            .find(|(label, _)| label == party)
            .map(|&(_, s)| s)
    }

    pub fn signs(&self) -> Vec<Sign> {
        self.0.iter().map(|&(_, s)| s).collect()
    }
}

/// A joint probability distribution over tuples of ±1 outcomes.
///
/// Stored densely: atom index bit k is 0 for `+1` and 1 for `-1` on party k,
/// with party 0 in the most significant position. Construction rejects
/// negative entries and any total mass outside 1 ± [`NORM_TOL`].
#[derive(Debug, Clone, PartialEq)]
pub struct JointTable {
    parties: Vec<String>,
    probs: Vec<f64>,
}

impl JointTable {
    pub fn new<S: Into<String>>(parties: Vec<S>, mut probs: Vec<f64>) -> Result<Self> {
        let parties: Vec<String> = parties.into_iter().map(Into::into).collect();
        if parties.is_empty() {
            return Err(Error::EmptyPartySubset);
        }
        for (i, label) in parties.iter().enumerate() {
            if parties[..i].contains(label) {
                return Err(Error::DuplicateParty(label.clone()));
            }
        }
        let expected = 1usize << parties.len();
        if probs.len() != expected {
            return Err(Error::WrongAtomCount {
                expected,
                parties: parties.len(),
                got: probs.len(),
            });
        }
        for (index, p) in probs.iter_mut().enumerate() {
            if !p.is_finite() {
                return Err(Error::NotFinite {
                    what: "atom probability",
                });
            }
            // Tolerate cancellation residue from exactly-vanishing areas.
            if *p < 0.0 {
                if *p > -NORM_TOL {
                    *p = 0.0;
                } else {
                    return Err(Error::NegativeProbability {
                        index,
                        value: *p,
                    });
                }
            }
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { total });
        }
        Ok(JointTable { parties, probs })
    }

    /// Build a table from explicitly listed atoms; unlisted atoms get zero.
    pub fn from_atoms<S: Into<String> + Clone>(
        parties: Vec<S>,
        atoms: &[(&[Sign], f64)],
    ) -> Result<Self> {
        let n = parties.len();
        let mut probs = vec![0.0; 1usize << n];
        for (signs, p) in atoms {
            if signs.len() != n {
                return Err(Error::WrongAtomCount {
                    expected: n,
                    parties: n,
                    got: signs.len(),
                });
            }
            probs[Self::index_for(signs)] += p;
        }
        Self::new(parties, probs)
    }

    fn index_for(signs: &[Sign]) -> usize {
        signs
            .iter()
            .fold(0usize, |acc, s| (acc << 1) | s.bit())
    }

    fn signs_for(&self, index: usize) -> Vec<Sign> {
        let n = self.parties.len();
        (0..n)
            .map(|k| Sign::from_bit((index >> (n - 1 - k)) & 1))
            .collect()
    }

    pub fn parties(&self) -> &[String] {
        &self.parties
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    fn position(&self, party: &str) -> Result<usize> {
        self.parties
            .iter()
            .position(|p| p == party)
            .ok_or_else(|| Error::UnknownParty(party.to_string()))
    }

    /// Probability of a single fully specified atom, in party order.
    pub fn atom_prob(&self, signs: &[Sign]) -> Result<f64> {
        if signs.len() != self.parties.len() {
            return Err(Error::WrongAtomCount {
                expected: self.parties.len(),
                parties: self.parties.len(),
                got: signs.len(),
            });
        }
        Ok(self.probs[Self::index_for(signs)])
    }

    /// Total mass of all atoms matching a partial assignment.
    pub fn event_prob(&self, conds: &[(&str, Sign)]) -> Result<f64> {
        let mut fixed: Vec<(usize, Sign)> = Vec::with_capacity(conds.len());
        for &(party, sign) in conds {
            let pos = self.position(party)?;
            if fixed.iter().any(|&(other, _)| other == pos) {
                return Err(Error::DuplicateParty(party.to_string()));
            }
            fixed.push((pos, sign));
        }
        let n = self.parties.len();
        let mut total = 0.0;
        for (index, p) in self.probs.iter().enumerate() {
            let matches = fixed
                .iter()
                .all(|&(pos, sign)| (index >> (n - 1 - pos)) & 1 == sign.bit());
            if matches {
                total += p;
            }
        }
        Ok(total)
    }

    /// Iterate atoms as (outcome tuple, probability), ascending atom index.
    pub fn atoms(&self) -> impl Iterator<Item = (OutcomeTuple, f64)> + '_ {
        (0..self.probs.len()).map(move |index| {
            let pairs = self
                .parties
                .iter()
                .cloned()
                .zip(self.signs_for(index))
                .collect();
            (OutcomeTuple(pairs), self.probs[index])
        })
    }

    /// Expectation of the product of two parties' outcomes; lies in [−1, 1].
    pub fn expectation(&self, first: &str, second: &str) -> Result<f64> {
        if first == second {
            return Err(Error::DuplicateParty(first.to_string()));
        }
        self.product_expectation(&[first, second])
    }

    /// Expectation of the product of any set of distinct parties' outcomes.
    pub fn product_expectation(&self, parties: &[&str]) -> Result<f64> {
        if parties.is_empty() {
            return Err(Error::EmptyPartySubset);
        }
        let mut positions = Vec::with_capacity(parties.len());
        for party in parties {
            let pos = self.position(party)?;
            if positions.contains(&pos) {
                return Err(Error::DuplicateParty(party.to_string()));
            }
            positions.push(pos);
        }
        let n = self.parties.len();
        let mut sum = 0.0;
        for (index, p) in self.probs.iter().enumerate() {
            let minus_count: usize = positions
                .iter()
                .map(|&pos| (index >> (n - 1 - pos)) & 1)
                .sum();
            let sign = if minus_count.is_multiple_of(2) { 1.0 } else { -1.0 };
            sum += sign * p;
        }
        Ok(sum)
    }

    /// Sum out all parties not in `keep`; the result keeps the order of
    /// `keep` and remains normalized.
    pub fn marginal(&self, keep: &[&str]) -> Result<JointTable> {
        if keep.is_empty() {
            return Err(Error::EmptyPartySubset);
        }
        let mut positions = Vec::with_capacity(keep.len());
        for party in keep {
            let pos = self.position(party)?;
            if positions.contains(&pos) {
                return Err(Error::DuplicateParty(party.to_string()));
            }
            positions.push(pos);
        }
        let n = self.parties.len();
        let m = keep.len();
        let mut out = vec![0.0; 1usize << m];
        for (index, p) in self.probs.iter().enumerate() {
            let mut target = 0usize;
            for &pos in &positions {
                target = (target << 1) | ((index >> (n - 1 - pos)) & 1);
            }
            out[target] += p;
        }
        JointTable::new(keep.iter().map(|s| s.to_string()).collect(), out)
    }

    /// Convex mixture λ·a + (1−λ)·b of two tables over the same party list.
    pub fn mix(a: &JointTable, b: &JointTable, lambda: f64) -> Result<JointTable> {
        if a.parties != b.parties {
            return Err(Error::PartyMismatch {
                left: a.parties.join(","),
                right: b.parties.join(","),
            });
        }
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::OutOfRange {
                what: "mixing weight",
                lo: 0.0,
                hi: 1.0,
                value: lambda,
            });
        }
        let probs = a
            .probs
            .iter()
            .zip(&b.probs)
            .map(|(x, y)| lambda * x + (1.0 - lambda) * y)
            .collect();
        JointTable::new(a.parties.clone(), probs)
    }
}

/// The four cross correlators of the two-round pair experiment, plus the
/// optional same-side pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelatorSet {
    pub e_a1b1: f64,
    pub e_b1a2: f64,
    pub e_a2b2: f64,
    pub e_a1b2: f64,
    pub e_a1a2: Option<f64>,
    pub e_b1b2: Option<f64>,
}

impl CorrelatorSet {
    pub fn new(e_a1b1: f64, e_b1a2: f64, e_a2b2: f64, e_a1b2: f64) -> Result<Self> {
        for (what, value) in [
            ("correlator E_A1B1", e_a1b1),
            ("correlator E_B1A2", e_b1a2),
            ("correlator E_A2B2", e_a2b2),
            ("correlator E_A1B2", e_a1b2),
        ] {
            check_correlator(what, value)?;
        }
        Ok(CorrelatorSet {
            e_a1b1: clamp_unit(e_a1b1),
            e_b1a2: clamp_unit(e_b1a2),
            e_a2b2: clamp_unit(e_a2b2),
            e_a1b2: clamp_unit(e_a1b2),
            e_a1a2: None,
            e_b1b2: None,
        })
    }

    pub fn with_same_side(mut self, e_a1a2: f64, e_b1b2: f64) -> Result<Self> {
        check_correlator("correlator E_A1A2", e_a1a2)?;
        check_correlator("correlator E_B1B2", e_b1b2)?;
        self.e_a1a2 = Some(clamp_unit(e_a1a2));
        self.e_b1b2 = Some(clamp_unit(e_b1b2));
        Ok(self)
    }

    /// The CHSH functional |E_A1B1 + E_B1A2 + E_A2B2 − E_A1B2|.
    pub fn chsh_value(&self) -> f64 {
        (self.e_a1b1 + self.e_b1a2 + self.e_a2b2 - self.e_a1b2).abs()
    }

    /// The cross correlators in the conventional order
    /// (E_A1B1, E_B1A2, E_A2B2, E_A1B2).
    pub fn cross(&self) -> [f64; 4] {
        [self.e_a1b1, self.e_b1a2, self.e_a2b2, self.e_a1b2]
    }
}

fn check_correlator(what: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::NotFinite { what: "correlator" });
    }
    if value.abs() > 1.0 + 1e-9 {
        return Err(Error::OutOfRange {
            what,
            lo: -1.0,
            hi: 1.0,
            value,
        });
    }
    Ok(())
}

fn clamp_unit(value: f64) -> f64 {
    value.clamp(-1.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform(parties: Vec<&str>) -> JointTable {
        let n = 1usize << parties.len();
        JointTable::new(parties, vec![1.0 / n as f64; n]).unwrap()
    }

    #[test]
    fn single_atom_table_has_expectation_minus_one() {
        let table = JointTable::from_atoms(
            vec!["A", "B"],
            &[(&[Sign::Plus, Sign::Minus], 1.0)],
        )
        .unwrap();
        assert_eq!(table.expectation("A", "B").unwrap(), -1.0);
    }

    #[test]
    fn uniform_pair_table_has_zero_expectation() {
        let table = uniform(vec!["A", "B"]);
        assert!(table.expectation("A", "B").unwrap().abs() < 1e-15);
    }

    #[test]
    fn expectation_rejects_unknown_and_duplicate_parties() {
        let table = uniform(vec!["A", "B"]);
        assert_eq!(
            table.expectation("A", "C"),
            Err(Error::UnknownParty("C".into()))
        );
        assert_eq!(
            table.expectation("A", "A"),
            Err(Error::DuplicateParty("A".into()))
        );
    }

    #[test]
    fn marginal_of_uniform_table_stays_uniform() {
        let table = uniform(vec!["A", "B", "C", "D"]);
        let marg = table.marginal(&["B", "D"]).unwrap();
        assert_eq!(marg.parties(), &["B".to_string(), "D".to_string()]);
        for p in marg.probs() {
            assert!((p - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn marginal_rejects_empty_and_unknown_subsets() {
        let table = uniform(vec!["A", "B"]);
        assert_eq!(table.marginal(&[]), Err(Error::EmptyPartySubset));
        assert_eq!(
            table.marginal(&["Z"]),
            Err(Error::UnknownParty("Z".into()))
        );
    }

    #[test]
    fn chsh_value_reaches_algebraic_maximum() {
        let set = CorrelatorSet::new(-1.0, -1.0, -1.0, 1.0).unwrap();
        assert_eq!(set.chsh_value(), 4.0);
    }

    #[test]
    fn table_construction_rejects_bad_mass() {
        let err = JointTable::new(vec!["A"], vec![0.7, 0.2]).unwrap_err();
        assert!(matches!(err, Error::NotNormalized { .. }));
        let err = JointTable::new(vec!["A"], vec![1.2, -0.2]).unwrap_err();
        assert!(matches!(err, Error::NegativeProbability { .. }));
    }

    #[test]
    fn event_prob_sums_matching_atoms() {
        let table = JointTable::from_atoms(
            vec!["A", "B"],
            &[
                (&[Sign::Plus, Sign::Plus], 0.5),
                (&[Sign::Minus, Sign::Plus], 0.25),
                (&[Sign::Minus, Sign::Minus], 0.25),
            ],
        )
        .unwrap();
        assert!((table.event_prob(&[("B", Sign::Plus)]).unwrap() - 0.75).abs() < 1e-15);
        assert!(
            (table
                .event_prob(&[("A", Sign::Minus), ("B", Sign::Minus)])
                .unwrap()
                - 0.25)
                .abs()
                < 1e-15
        );
    }

    #[test]
    fn wrap_angle_lands_in_half_open_interval() {
        assert!((wrap_angle(3.0 * PI) - PI).abs() < 1e-12);
        assert!((wrap_angle(-PI) - PI).abs() < 1e-12);
        assert!((wrap_angle(PI / 3.0) - PI / 3.0).abs() < 1e-15);
        assert!((wrap_angle(-PI / 3.0) + PI / 3.0).abs() < 1e-15);
    }

    #[test]
    fn settings_alpha_beta_are_geometric() {
        let s = Settings::new(0.0, PI / 4.0, PI / 2.0, 3.0 * PI / 4.0).unwrap();
        assert!((s.alpha() - PI / 2.0).abs() < 1e-15);
        assert!((s.beta() - PI / 2.0).abs() < 1e-15);
        let s = Settings::new(0.0, 0.0, 2.0 * PI - 0.1, 0.0).unwrap();
        assert!((s.alpha() - 0.1).abs() < 1e-12);
    }
}

//! Objective-collapse predictions for the two-round pair experiment.
//!
//! Every measurement collapses the pair irreversibly, so beam recombination
//! is a no-op and the second round measures two independent pure spins. The
//! persistence probability between successive measurements of the same
//! particle at relative angle γ is cos²(γ/2).

use crate::model::{labels, CorrelatorSet, JointTable, Result, Settings, Sign};

/// Closed-form correlators: the first-round pair keeps the singlet value,
/// every later pair is damped by cosα and/or cosβ.
pub fn collapse_correlators(s: &Settings) -> Result<CorrelatorSet> {
    let c1 = (s.a1.radians() - s.b1.radians()).cos();
    let ca = s.alpha().cos();
    let cb = s.beta().cos();
    CorrelatorSet::new(-c1, -ca * c1, -ca * cb * c1, -cb * c1)?
        .with_same_side(ca, cb)
}

/// Exact-enumeration oracle for the closed forms: the 16-atom joint built by
/// sequential conditioning. A1 is fair; B1 | A1 follows the singlet
/// conditional; A2 | A1 and B2 | B1 follow the per-side persistence rule;
/// A2 and B2 are conditionally independent given (A1, B1).
pub fn collapse_chain_joint(s: &Settings) -> Result<JointTable> {
    let half_first = (s.a1.radians() - s.b1.radians()) / 2.0;
    let b1_plus_given = |a1: Sign| match a1 {
        Sign::Plus => half_first.sin().powi(2),
        Sign::Minus => half_first.cos().powi(2),
    };
    let persist_a = (s.alpha() / 2.0).cos().powi(2);
    let persist_b = (s.beta() / 2.0).cos().powi(2);

    let parties = vec![labels::A1, labels::B1, labels::A2, labels::B2];
    let mut probs = vec![0.0; 16];
    for (ai, a1) in Sign::BOTH.into_iter().enumerate() {
        let p_b1_plus = b1_plus_given(a1);
        for (bi, b1) in Sign::BOTH.into_iter().enumerate() {
            let p_b1 = if b1 == Sign::Plus {
                p_b1_plus
            } else {
                1.0 - p_b1_plus
            };
            for (ji, a2) in Sign::BOTH.into_iter().enumerate() {
                let p_a2 = if a2 == a1 { persist_a } else { 1.0 - persist_a };
                for (li, b2) in Sign::BOTH.into_iter().enumerate() {
                    let p_b2 = if b2 == b1 { persist_b } else { 1.0 - persist_b };
                    let index = (ai << 3) | (bi << 2) | (ji << 1) | li;
                    probs[index] = 0.5 * p_b1 * p_a2 * p_b2;
                }
            }
        }
    }
    JointTable::new(parties, probs)
}

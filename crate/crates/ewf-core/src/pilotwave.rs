//! Hidden-variable predictions for the two-round pair experiment and the
//! coin–electron arrangement.
//!
//! Outcomes are deterministic functions of two independent uniform particle
//! positions on a unit disk. The closed-form disk areas for each result pair,
//! together with the conditional weights selected by the remote first-round
//! (a-side) and second-round (b-side) results, define a conditional chain:
//!
//!   1. A1 is a fair coin (the a-particle position is uniform);
//!   2. (B1, B2) | A1 follows the b-side area table with weight ω_b(A1);
//!   3. A2 | (A1, B2) follows the A1-row of the a-side area table with
//!      weight ω_a(B2);
//!   4. B1 and A2 are conditionally independent given (A1, B2).
//!
//! The chain reproduces −cos(a1−b1), −cos(a2−b2) and 0 for the pairs
//! (A1,B1), (A2,B2) and (A1,B2), plus a closed form for (B1,A2), and always
//! satisfies the CHSH bound.

use std::f64::consts::PI;

use crate::model::{labels, Error, JointTable, Result, Settings, Sign};
use crate::report::AuditReport;

/// Tolerance for area-table mass checks (sum of the four regions is π).
const AREA_TOL: f64 = 1e-9;

/// Conditional up-weights for the second measurement on each side, selected
/// by the remote result: ω_a by B2, ω_b by A1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaWeights {
    pub a_plus: f64,
    pub a_minus: f64,
    pub b_plus: f64,
    pub b_minus: f64,
}

impl OmegaWeights {
    /// Weight for the a-side table given the b-side second-round result.
    pub fn a_for(&self, b2: Sign) -> f64 {
        match b2 {
            Sign::Plus => self.a_plus,
            Sign::Minus => self.a_minus,
        }
    }

    /// Weight for the b-side table given the a-side first-round result.
    pub fn b_for(&self, a1: Sign) -> f64 {
        match a1 {
            Sign::Plus => self.b_plus,
            Sign::Minus => self.b_minus,
        }
    }
}

/// ω_a^± = sin²/cos² of half the second-round angle difference,
/// ω_b^± = sin²/cos² of half the first-round angle difference.
pub fn omega_weights(s: &Settings) -> OmegaWeights {
    let half_a = (s.a2.radians() - s.b2.radians()) / 2.0;
    let half_b = (s.a1.radians() - s.b1.radians()) / 2.0;
    OmegaWeights {
        a_plus: half_a.sin().powi(2),
        a_minus: half_a.cos().powi(2),
        b_plus: half_b.sin().powi(2),
        b_minus: half_b.cos().powi(2),
    }
}

/// Which particle's cross-section the table describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

/// The four region areas of the unit disk, indexed by the (first, second)
/// result pair for that particle. Entries are nonnegative and sum to π.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaTable {
    pub pp: f64,
    pub pm: f64,
    pub mp: f64,
    pub mm: f64,
}

impl AreaTable {
    pub fn entry(&self, first: Sign, second: Sign) -> f64 {
        match (first, second) {
            (Sign::Plus, Sign::Plus) => self.pp,
            (Sign::Plus, Sign::Minus) => self.pm,
            (Sign::Minus, Sign::Plus) => self.mp,
            (Sign::Minus, Sign::Minus) => self.mm,
        }
    }

    pub fn sum(&self) -> f64 {
        self.pp + self.pm + self.mp + self.mm
    }
}

/// Closed-form region areas for a unit disk, at the given sector angle and
/// conditional weight. The one-dimensional step terms evaluate to
/// max(0, 1−2ω) and max(0, 2ω−1).
pub fn area_table(side: Side, sector_angle: f64, omega: f64) -> Result<AreaTable> {
    if !sector_angle.is_finite() || !(-1e-12..=PI + 1e-12).contains(&sector_angle) {
        return Err(Error::OutOfRange {
            what: "sector angle",
            lo: 0.0,
            hi: PI,
            value: sector_angle,
        });
    }
    if !omega.is_finite() || !(-1e-12..=1.0 + 1e-12).contains(&omega) {
        return Err(Error::OutOfRange {
            what: "area weight",
            lo: 0.0,
            hi: 1.0,
            value: omega,
        });
    }
    let g = sector_angle.clamp(0.0, PI);
    let w = omega.clamp(0.0, 1.0);
    let dev = (2.0 * w - 1.0).abs();
    let step_lo = (1.0 - 2.0 * w).max(0.0);
    let step_hi = (2.0 * w - 1.0).max(0.0);
    let aligned = 0.5 * ((PI - g) + g * dev);
    let crossed = 0.5 * (g - g * dev);
    // The two sides place the step terms on opposite off-diagonal entries.
    let table = match side {
        Side::A => AreaTable {
            pp: aligned - 0.5 * PI * step_lo,
            pm: crossed + 0.5 * PI * step_lo,
            mp: crossed + 0.5 * PI * step_hi,
            mm: aligned - 0.5 * PI * step_hi,
        },
        Side::B => AreaTable {
            pp: aligned - 0.5 * PI * step_lo,
            pm: crossed + 0.5 * PI * step_hi,
            mp: crossed + 0.5 * PI * step_lo,
            mm: aligned - 0.5 * PI * step_hi,
        },
    };
    let clamp = |x: f64| if x < 0.0 && x > -AREA_TOL { 0.0 } else { x };
    let table = AreaTable {
        pp: clamp(table.pp),
        pm: clamp(table.pm),
        mp: clamp(table.mp),
        mm: clamp(table.mm),
    };
    debug_assert!((table.sum() - PI).abs() < AREA_TOL);
    debug_assert!(table.pp >= 0.0 && table.pm >= 0.0 && table.mp >= 0.0 && table.mm >= 0.0);
    Ok(table)
}

/// Conditional distribution of (B1, B2) given A1, as four probabilities in
/// the order (++, +−, −+, −−).
pub(crate) fn b_pair_conditional(s: &Settings, a1: Sign) -> Result<[f64; 4]> {
    let w = omega_weights(s);
    let table = area_table(Side::B, s.beta(), w.b_for(a1))?;
    Ok([
        table.pp / PI,
        table.pm / PI,
        table.mp / PI,
        table.mm / PI,
    ])
}

/// Conditional probability of A2 = +1 given (A1, B2).
pub(crate) fn a2_conditional_plus(s: &Settings, a1: Sign, b2: Sign) -> Result<f64> {
    let w = omega_weights(s);
    let table = area_table(Side::A, s.alpha(), w.a_for(b2))?;
    let row_plus = table.entry(a1, Sign::Plus);
    Ok(row_plus / (PI / 2.0))
}

/// The 16-atom joint distribution over (A1, B1, A2, B2) built by the
/// conditional chain.
pub fn pm_joint(s: &Settings) -> Result<JointTable> {
    let w = omega_weights(s);
    let alpha = s.alpha();
    let beta = s.beta();
    let a_tables = [
        area_table(Side::A, alpha, w.a_for(Sign::Plus))?,
        area_table(Side::A, alpha, w.a_for(Sign::Minus))?,
    ];
    let parties = vec![labels::A1, labels::B1, labels::A2, labels::B2];
    let mut probs = vec![0.0; 16];
    for (ai, a1) in Sign::BOTH.into_iter().enumerate() {
        let b_table = area_table(Side::B, beta, w.b_for(a1))?;
        for (bi, b1) in Sign::BOTH.into_iter().enumerate() {
            for (li, b2) in Sign::BOTH.into_iter().enumerate() {
                let p_b = b_table.entry(b1, b2) / PI;
                let a_table = &a_tables[li];
                for (ji, a2) in Sign::BOTH.into_iter().enumerate() {
                    let p_a = a_table.entry(a1, a2) / (PI / 2.0);
                    let index = (ai << 3) | (bi << 2) | (ji << 1) | li;
                    probs[index] = 0.5 * p_b * p_a;
                }
            }
        }
    }
    JointTable::new(parties, probs)
}

/// Closed form for the cross-round correlator E(B1, A2).
pub fn mixed_closed_form(s: &Settings) -> f64 {
    let c1 = (s.a1.radians() - s.b1.radians()).cos();
    let c2 = (s.a2.radians() - s.b2.radians()).cos();
    let alpha = s.alpha();
    let beta = s.beta();
    let both_positive = |x: f64, y: f64| if x > 0.0 && y > 0.0 { 1.0 } else { 0.0 };
    -(1.0 - 2.0 * alpha / PI) * c1 - (1.0 - 2.0 * beta / PI) * c2
        - (2.0 / PI) * (alpha * c1 * c2.abs() + beta * c1.abs() * c2)
        + 2.0 * c1 * c2 * both_positive(c1, c2)
        - 2.0 * c1 * c2 * both_positive(-c1, -c2)
}

/// The same-side closed forms under the two possible argument conventions.
/// The modulation factor 1−|cosθ| can be read with θ either the first-round
/// pair angle (a1−b1) or the second-round pair angle (a2−b2); the chain
/// fixes one of them per side, and [`pm_correlators`] records which.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SameSideForms {
    pub a_side_first_round: f64,
    pub a_side_second_round: f64,
    pub b_side_first_round: f64,
    pub b_side_second_round: f64,
}

pub fn same_side_forms(s: &Settings) -> SameSideForms {
    let first = 1.0 - (s.a1.radians() - s.b1.radians()).cos().abs();
    let second = 1.0 - (s.a2.radians() - s.b2.radians()).cos().abs();
    let a_factor = 1.0 - 2.0 * s.alpha() / PI;
    let b_factor = 1.0 - 2.0 * s.beta() / PI;
    SameSideForms {
        a_side_first_round: a_factor * first,
        a_side_second_round: a_factor * second,
        b_side_first_round: b_factor * first,
        b_side_second_round: b_factor * second,
    }
}

/// Correlators of the two-round pair experiment, exposed both as summed from
/// the chain joint and as the closed forms, so they can be compared.
#[derive(Debug, Clone, PartialEq)]
pub struct PmCorrelators {
    /// Summed from [`pm_joint`], same-side entries included.
    pub chain: crate::model::CorrelatorSet,
    /// The closed-form cross correlators (−cos, −cos, 0 and the mixed form).
    pub closed_form: crate::model::CorrelatorSet,
    /// Same-side closed forms under both argument conventions.
    pub same_side: SameSideForms,
    /// Records which argument convention the chain matches on each side.
    pub same_side_audit: AuditReport,
}

pub fn pm_correlators(s: &Settings) -> Result<PmCorrelators> {
    let joint = pm_joint(s)?;
    let chain = crate::model::CorrelatorSet::new(
        joint.expectation(labels::A1, labels::B1)?,
        joint.expectation(labels::B1, labels::A2)?,
        joint.expectation(labels::A2, labels::B2)?,
        joint.expectation(labels::A1, labels::B2)?,
    )?
    .with_same_side(
        joint.expectation(labels::A1, labels::A2)?,
        joint.expectation(labels::B1, labels::B2)?,
    )?;
    let closed_form = crate::model::CorrelatorSet::new(
        -(s.a1.radians() - s.b1.radians()).cos(),
        mixed_closed_form(s),
        -(s.a2.radians() - s.b2.radians()).cos(),
        0.0,
    )?;
    let same_side = same_side_forms(s);

    let mut audit = AuditReport::new("same-side-argument-convention");
    let tol = 1e-9;
    let a_chain = chain.e_a1a2.unwrap();
    let b_chain = chain.e_b1b2.unwrap();
    audit.flag(
        "E_A1A2 uses first-round angles",
        Some(a_chain),
        (a_chain - same_side.a_side_first_round).abs() <= tol,
        format!(
            "chain {:.12} vs (1-2α/π)(1-|cos(a1-b1)|) = {:.12}",
            a_chain, same_side.a_side_first_round
        ),
    );
    audit.flag(
        "E_A1A2 uses second-round angles",
        Some(a_chain),
        (a_chain - same_side.a_side_second_round).abs() <= tol,
        format!(
            "chain {:.12} vs (1-2α/π)(1-|cos(a2-b2)|) = {:.12}",
            a_chain, same_side.a_side_second_round
        ),
    );
    audit.flag(
        "E_B1B2 uses first-round angles",
        Some(b_chain),
        (b_chain - same_side.b_side_first_round).abs() <= tol,
        format!(
            "chain {:.12} vs (1-2β/π)(1-|cos(a1-b1)|) = {:.12}",
            b_chain, same_side.b_side_first_round
        ),
    );
    audit.flag(
        "E_B1B2 uses second-round angles",
        Some(b_chain),
        (b_chain - same_side.b_side_second_round).abs() <= tol,
        format!(
            "chain {:.12} vs (1-2β/π)(1-|cos(a2-b2)|) = {:.12}",
            b_chain, same_side.b_side_second_round
        ),
    );
    Ok(PmCorrelators {
        chain,
        closed_form,
        same_side,
        same_side_audit: audit,
    })
}

/// The coin–electron joint distribution over (Fbar, F, W, Wbar): nine atoms
/// of probability 1/9, all other atoms zero. Symbols map to signs as
/// h,up,f ≙ +1 and t,down,o ≙ −1.
pub fn fr_pilotwave_table() -> JointTable {
    use Sign::{Minus as M, Plus as P};
    let ninth = 1.0 / 9.0;
    let atoms: [(&[Sign], f64); 9] = [
        (&[P, M, P, M], ninth), // (h, down, f, o)
        (&[P, M, M, P], ninth), // (h, down, o, f)
        (&[P, M, M, M], ninth), // (h, down, o, o)
        (&[M, P, P, M], ninth), // (t, up, f, o)
        (&[M, P, M, P], ninth), // (t, up, o, f)
        (&[M, P, M, M], ninth), // (t, up, o, o)
        (&[M, M, P, M], ninth), // (t, down, f, o)
        (&[M, M, M, P], ninth), // (t, down, o, f)
        (&[M, M, M, M], ninth), // (t, down, o, o)
    ];
    JointTable::from_atoms(vec![labels::FBAR, labels::F, labels::W, labels::WBAR], &atoms)
        .expect("literal table is normalized")
}

/// Labels used by [`fr_mixed_claims_audit`] findings.
pub mod fr_audit {
    pub const W_F_GIVEN_FBAR_T: &str = "P(W=f | Fbar=t)";
    pub const F_UP_GIVEN_WBAR_O: &str = "P(F=up | Wbar=o)";
    pub const BOTH_O: &str = "P(W=o and Wbar=o)";
}

/// Conditional-probability audit of the two certainty claims on a
/// (Fbar, F, W, Wbar) table: whether Fbar=t forces W=f, whether Wbar=o
/// forces F=up, and the joint weight of both outside observers finding o.
/// A conditioning event of probability zero is flagged as vacuous.
pub fn fr_mixed_claims_audit(table: &JointTable) -> Result<AuditReport> {
    for party in [labels::FBAR, labels::F, labels::W, labels::WBAR] {
        if !table.parties().iter().any(|p| p == party) {
            return Err(Error::UnknownParty(party.to_string()));
        }
    }
    let mut report = AuditReport::new("fr-mixed-claims");
    let certainty_tol = 1e-12;

    let conditional = |label: &str,
                           given: (&str, Sign),
                           then: (&str, Sign),
                           report: &mut AuditReport|
     -> Result<Option<f64>> {
        let cond = table.event_prob(&[given])?;
        if cond <= 0.0 {
            report.flag(
                label,
                None,
                false,
                "vacuous: conditioning event has probability zero",
            );
            return Ok(None);
        }
        let joint = table.event_prob(&[given, then])?;
        let value = joint / cond;
        let holds = (value - 1.0).abs() <= certainty_tol;
        report.flag(
            label,
            Some(value),
            holds,
            if holds {
                "certainty claim holds".to_string()
            } else {
                format!("certainty claim violated: conditional is {value:.12}")
            },
        );
        Ok(Some(value))
    };

    conditional(
        fr_audit::W_F_GIVEN_FBAR_T,
        (labels::FBAR, Sign::Minus),
        (labels::W, Sign::Plus),
        &mut report,
    )?;
    conditional(
        fr_audit::F_UP_GIVEN_WBAR_O,
        (labels::WBAR, Sign::Minus),
        (labels::F, Sign::Plus),
        &mut report,
    )?;

    let both_o = table.event_prob(&[(labels::W, Sign::Minus), (labels::WBAR, Sign::Minus)])?;
    report.info_value(
        fr_audit::BOTH_O,
        both_o,
        "joint weight of both outside observers finding o",
    );
    Ok(report)
}

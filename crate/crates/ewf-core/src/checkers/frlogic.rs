//! Propositional audit of the certainty-chain argument for the coin–electron
//! arrangement.
//!
//! A premise set is a list of conditional-certainty statements over the four
//! outcome variables plus a possibility statement asserting positive
//! probability for some joint outcome. The audit enumerates the sixteen
//! outcome worlds, closes them under the certainty implications, and reports
//! a contradiction exactly when no surviving world realizes the possibility.

use std::fmt;

use crate::model::{labels, Error, JointTable, Result, Sign, NORM_TOL};
use crate::report::AuditReport;

/// Finding label carrying the verdict flag in the audit report.
pub const VERDICT_LABEL: &str = "contradiction";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrVariable {
    Fbar,
    F,
    W,
    Wbar,
}

impl FrVariable {
    pub const ALL: [FrVariable; 4] = [FrVariable::Fbar, FrVariable::F, FrVariable::W, FrVariable::Wbar];

    fn bit(self) -> usize {
        match self {
            FrVariable::Fbar => 3,
            FrVariable::F => 2,
            FrVariable::W => 1,
            FrVariable::Wbar => 0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            FrVariable::Fbar => labels::FBAR,
            FrVariable::F => labels::F,
            FrVariable::W => labels::W,
            FrVariable::Wbar => labels::WBAR,
        }
    }

    pub fn symbol(self, sign: Sign) -> &'static str {
        match (self, sign) {
            (FrVariable::Fbar, Sign::Plus) => "h",
            (FrVariable::Fbar, Sign::Minus) => "t",
            (FrVariable::F, Sign::Plus) => "up",
            (FrVariable::F, Sign::Minus) => "down",
            (FrVariable::W | FrVariable::Wbar, Sign::Plus) => "f",
            (FrVariable::W | FrVariable::Wbar, Sign::Minus) => "o",
        }
    }
}

/// "If `given` has value `given_is`, then `then` has value `then_is` with
/// certainty."
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Implication {
    pub given: FrVariable,
    pub given_is: Sign,
    pub then: FrVariable,
    pub then_is: Sign,
}

impl fmt::Display for Implication {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}={} => {}={}",
            self.given.label(),
            self.given.symbol(self.given_is),
            self.then.label(),
            self.then.symbol(self.then_is),
        )
    }
}

/// "The joint outcome `event` occurs with probability `probability` > 0."
#[derive(Debug, Clone, PartialEq)]
pub struct PossibilityStatement {
    pub event: Vec<(FrVariable, Sign)>,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PremiseSet {
    pub implications: Vec<Implication>,
    pub possibility: PossibilityStatement,
}

/// The four certainty claims of the nested-observer chain, together with the
/// nonzero weight of both outside observers finding o:
///   Fbar=t => W=f;  F=up => W=f;  Wbar=o => F=up;  Wbar=o => W=f.
pub fn certainty_chain_premises() -> PremiseSet {
    use FrVariable::*;
    use Sign::{Minus, Plus};
    PremiseSet {
        implications: vec![
            Implication { given: Fbar, given_is: Minus, then: W, then_is: Plus },
            Implication { given: F, given_is: Plus, then: W, then_is: Plus },
            Implication { given: Wbar, given_is: Minus, then: F, then_is: Plus },
            Implication { given: Wbar, given_is: Minus, then: W, then_is: Plus },
        ],
        possibility: PossibilityStatement {
            event: vec![(Wbar, Minus), (W, Minus)],
            probability: 1.0 / 12.0,
        },
    }
}

/// Extract the premises a joint table actually licenses: every conditional
/// certainty that holds in the table, plus the table's own weight for both
/// outside observers finding o.
pub fn premises_from_table(table: &JointTable) -> Result<PremiseSet> {
    let mut implications = Vec::new();
    for given in FrVariable::ALL {
        for given_is in Sign::BOTH {
            let cond = table.event_prob(&[(given.label(), given_is)])?;
            if cond <= 0.0 {
                continue;
            }
            for then in FrVariable::ALL {
                if then == given {
                    continue;
                }
                for then_is in Sign::BOTH {
                    let joint =
                        table.event_prob(&[(given.label(), given_is), (then.label(), then_is)])?;
                    if (joint / cond - 1.0).abs() <= NORM_TOL {
                        implications.push(Implication {
                            given,
                            given_is,
                            then,
                            then_is,
                        });
                    }
                }
            }
        }
    }
    let probability = table.event_prob(&[
        (FrVariable::W.label(), Sign::Minus),
        (FrVariable::Wbar.label(), Sign::Minus),
    ])?;
    Ok(PremiseSet {
        implications,
        possibility: PossibilityStatement {
            event: vec![(FrVariable::Wbar, Sign::Minus), (FrVariable::W, Sign::Minus)],
            probability,
        },
    })
}

fn validate(premises: &PremiseSet) -> Result<()> {
    for imp in &premises.implications {
        if imp.given == imp.then {
            return Err(Error::MalformedPremise(format!(
                "implication relates {} to itself",
                imp.given.label()
            )));
        }
    }
    let p = premises.possibility.probability;
    if !p.is_finite() || p <= 0.0 || p > 1.0 {
        return Err(Error::MalformedPremise(format!(
            "possibility statement needs a probability in (0, 1], got {p}"
        )));
    }
    if premises.possibility.event.is_empty() {
        return Err(Error::MalformedPremise(
            "possibility statement has an empty event".to_string(),
        ));
    }
    for (k, (var, _)) in premises.possibility.event.iter().enumerate() {
        if premises.possibility.event[..k].iter().any(|(v, _)| v == var) {
            return Err(Error::MalformedPremise(format!(
                "possibility event assigns {} twice",
                var.label()
            )));
        }
    }
    Ok(())
}

fn world_matches(world: u8, var: FrVariable, sign: Sign) -> bool {
    let bit = (world >> var.bit()) & 1;
    (bit == 0) == (sign == Sign::Plus)
}

/// Close the implications over the sixteen outcome worlds and report whether
/// the possibility statement survives. CONTRADICTION means the certainty
/// premises rule out every world realizing the possibility event.
pub fn fr_logic_contradiction(premises: &PremiseSet) -> Result<AuditReport> {
    validate(premises)?;
    let mut report = AuditReport::new("fr-logic");
    for imp in &premises.implications {
        report.info("premise", imp.to_string());
    }
    let event_text = premises
        .possibility
        .event
        .iter()
        .map(|&(v, s)| format!("{}={}", v.label(), v.symbol(s)))
        .collect::<Vec<_>>()
        .join(" and ");
    report.info_value(
        "possibility",
        premises.possibility.probability,
        format!("P({event_text}) > 0"),
    );

    let admissible = |world: u8| {
        premises.implications.iter().all(|imp| {
            !world_matches(world, imp.given, imp.given_is)
                || world_matches(world, imp.then, imp.then_is)
        })
    };
    let surviving: Vec<u8> = (0u8..16).filter(|&w| admissible(w)).collect();
    let realizing = surviving
        .iter()
        .filter(|&&w| {
            premises
                .possibility
                .event
                .iter()
                .all(|&(v, s)| world_matches(w, v, s))
        })
        .count();
    report.info_value(
        "admissible worlds",
        surviving.len() as f64,
        "outcome worlds consistent with every certainty premise",
    );
    report.info_value(
        "realizing worlds",
        realizing as f64,
        "admissible worlds realizing the possibility event",
    );
    let contradiction = realizing == 0;
    report.flag(
        VERDICT_LABEL,
        None,
        contradiction,
        if contradiction {
            "CONTRADICTION: the certainty premises exclude the possible outcome"
        } else {
            "CONSISTENT: some admissible world realizes the possible outcome"
        },
    );
    Ok(report)
}

/// Convenience: true when the audit reported a contradiction.
pub fn is_contradiction(report: &AuditReport) -> bool {
    report.flag_of(VERDICT_LABEL) == Some(true)
}

//! Plan dispatch: map a validated plan onto an engine, collect its analytic
//! tables, correlators and audits, and package everything as a serializable
//! report.

use std::f64::consts::PI;

use ewf_core::checkers::{joint_exists, max_chsh_variant};
use ewf_core::montecarlo::{self, TrialEngine, TrialPlan};
use ewf_core::pilotwave::{fr_mixed_claims_audit, fr_pilotwave_table, pm_correlators, pm_joint};
use ewf_core::quantum::{ghz_correlator, ghz_joint, hardy_born_tables, quantum_correlator_set, singlet_pair_table};
use ewf_core::{collapse, labels, Angle, AuditReport, CorrelatorSet, JointTable, Settings};
use serde::Serialize;

use crate::diag::{DiagCode, Diagnostic};
use crate::emit::TableDump;
use crate::plan::{EngineChoice, ExperimentPlan, MeasureEvent, PlanEvent, StateKind};

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RunReport {
    pub plan: PlanEcho,
    pub engine: String,
    pub tables: Vec<TableDump>,
    pub correlators: Vec<CorrelatorDump>,
    pub audits: Vec<AuditDump>,
    pub rng: RngDump,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct PlanEcho {
    pub name: String,
    pub state: String,
    pub engine: String,
    pub parties: Vec<String>,
    pub events: Vec<String>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CorrelatorDump {
    pub name: String,
    pub e_a1b1: f64,
    pub e_b1a2: f64,
    pub e_a2b2: f64,
    pub e_a1b2: f64,
    pub e_a1a2: Option<f64>,
    pub e_b1b2: Option<f64>,
    pub chsh: f64,
}

impl CorrelatorDump {
    fn new(name: impl Into<String>, set: &CorrelatorSet) -> Self {
        CorrelatorDump {
            name: name.into(),
            e_a1b1: set.e_a1b1,
            e_b1a2: set.e_b1a2,
            e_a2b2: set.e_a2b2,
            e_a1b2: set.e_a1b2,
            e_a1a2: set.e_a1a2,
            e_b1b2: set.e_b1b2,
            chsh: set.chsh_value(),
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct AuditDump {
    pub name: String,
    pub passed: bool,
    pub findings: Vec<FindingDump>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct FindingDump {
    pub label: String,
    pub status: String,
    pub value: Option<f64>,
    pub flag: Option<bool>,
    pub detail: String,
}

impl AuditDump {
    fn new(report: &AuditReport) -> Self {
        AuditDump {
            name: report.name.clone(),
            passed: report.passed(),
            findings: report
                .findings
                .iter()
                .map(|f| FindingDump {
                    label: f.label.clone(),
                    status: f.status.to_string(),
                    value: f.value,
                    flag: f.flag,
                    detail: f.detail.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RngDump {
    pub generator: Option<String>,
    pub seed: Option<u64>,
}

fn plan_echo(plan: &ExperimentPlan) -> PlanEcho {
    PlanEcho {
        name: plan.name.clone(),
        state: plan.state.to_string(),
        engine: plan.engine.to_string(),
        parties: plan.parties.clone(),
        events: plan
            .events
            .iter()
            .map(|e| match e {
                PlanEvent::Measure(m) => {
                    format!("measure {} {} as {}", m.party, m.angle_text, m.tag)
                }
                PlanEvent::Undo { party, tag } => format!("undo {party} {tag}"),
            })
            .collect(),
        trials: plan.trials,
        seed: plan.seed,
    }
}

fn unsupported(message: impl Into<String>) -> Vec<Diagnostic> {
    vec![Diagnostic::error(
        1,
        1,
        DiagCode::UnsupportedModel,
        message,
    )]
}

/// The recognized shapes of a validated plan's event list.
enum PlanShape<'p> {
    /// One measurement per party on a two-party state.
    Pair {
        first: &'p MeasureEvent,
        second: &'p MeasureEvent,
    },
    /// The canonical two-round order: measure both, undo both (inner side
    /// first), re-measure both in reversed side order.
    TwoRound {
        a_first: &'p MeasureEvent,
        b_first: &'p MeasureEvent,
        a_second: &'p MeasureEvent,
        b_second: &'p MeasureEvent,
    },
    /// One measurement per party on the three-party state.
    Triple(Vec<&'p MeasureEvent>),
}

fn classify(plan: &ExperimentPlan) -> Result<PlanShape<'_>, Vec<Diagnostic>> {
    let events = &plan.events;
    let measures: Vec<&MeasureEvent> = events
        .iter()
        .filter_map(|e| match e {
            PlanEvent::Measure(m) => Some(m),
            _ => None,
        })
        .collect();

    if plan.state == StateKind::Ghz {
        if measures.len() == 3 && events.len() == 3 {
            let mut seen = Vec::new();
            for m in &measures {
                if seen.contains(&&m.party) {
                    return Err(unsupported(
                        "three-party plans measure each party exactly once",
                    ));
                }
                seen.push(&m.party);
            }
            return Ok(PlanShape::Triple(measures));
        }
        return Err(unsupported(
            "three-party plans take exactly one measurement per party and no undo",
        ));
    }

    if events.len() == 2 && measures.len() == 2 && measures[0].party != measures[1].party {
        return Ok(PlanShape::Pair {
            first: measures[0],
            second: measures[1],
        });
    }

    if events.len() == 6 && measures.len() == 4 {
        // Canonical order: measure p, measure q, undo q, undo p,
        // measure q, measure p.
        let p = &measures[0].party;
        let q = &measures[1].party;
        let canonical = matches!(
            (&events[2], &events[3]),
            (PlanEvent::Undo { party: u1, .. }, PlanEvent::Undo { party: u2, .. })
                if u1 == q && u2 == p
        ) && p != q
            && measures[2].party == *q
            && measures[3].party == *p;
        if canonical {
            return Ok(PlanShape::TwoRound {
                a_first: measures[0],
                b_first: measures[1],
                a_second: measures[3],
                b_second: measures[2],
            });
        }
        return Err(vec![Diagnostic::error(
            1,
            1,
            DiagCode::UnsupportedOrder,
            "two-round plans must follow the canonical order: measure p, measure q, \
             undo q, undo p, measure q, measure p",
        )]);
    }

    Err(unsupported(format!(
        "no model is defined for a {} plan with {} events; expected a single-round pair, \
         the canonical six-event two-round order, or one measurement per party",
        plan.state,
        events.len()
    )))
}

fn two_round_settings(
    a_first: &MeasureEvent,
    b_first: &MeasureEvent,
    a_second: &MeasureEvent,
    b_second: &MeasureEvent,
) -> Result<Settings, Vec<Diagnostic>> {
    Settings::new(
        a_first.radians,
        b_first.radians,
        a_second.radians,
        b_second.radians,
    )
    .map_err(|e| unsupported(e.to_string()))
}

fn relabel(table: &JointTable, parties: Vec<String>) -> JointTable {
    JointTable::new(parties, table.probs().to_vec()).expect("same probabilities stay normalized")
}

/// Run a validated plan analytically: tables, correlators and audits for the
/// declared engine/state combination. Combinations without a defined model
/// yield an `UNSUPPORTED_MODEL` diagnostic naming the gap.
pub fn run_plan(plan: &ExperimentPlan) -> Result<RunReport, Vec<Diagnostic>> {
    let shape = classify(plan)?;
    let mut tables = Vec::new();
    let mut correlators = Vec::new();
    let mut audits = Vec::new();

    match (plan.state, &shape) {
        (StateKind::Singlet, PlanShape::Pair { first, second }) => {
            // A single Bell round: every engine reproduces the Born pair.
            let angle_a = Angle::new(first.radians).map_err(|e| unsupported(e.to_string()))?;
            let angle_b = Angle::new(second.radians).map_err(|e| unsupported(e.to_string()))?;
            let table = singlet_pair_table(angle_a, angle_b, &first.tag, &second.tag)
                .map_err(|e| unsupported(e.to_string()))?;
            tables.push(TableDump::from_table("pair", &table));
        }
        (
            StateKind::Singlet,
            PlanShape::TwoRound {
                a_first,
                b_first,
                a_second,
                b_second,
            },
        ) => {
            let settings = two_round_settings(a_first, b_first, a_second, b_second)?;
            let output_labels = vec![
                a_first.tag.clone(),
                b_first.tag.clone(),
                a_second.tag.clone(),
                b_second.tag.clone(),
            ];
            match plan.engine {
                EngineChoice::PilotWave => {
                    let joint = pm_joint(&settings).map_err(|e| unsupported(e.to_string()))?;
                    let pm = pm_correlators(&settings).map_err(|e| unsupported(e.to_string()))?;
                    tables.push(TableDump::from_table("joint", &relabel(&joint, output_labels)));
                    correlators.push(CorrelatorDump::new("chain", &pm.chain));
                    correlators.push(CorrelatorDump::new("closed-form", &pm.closed_form));
                    audits.push(AuditDump::new(&pm.same_side_audit));
                    let feasibility = joint_exists(&pm.chain, true)
                        .map_err(|e| unsupported(e.to_string()))?;
                    audits.push(AuditDump::new(&feasibility_audit(
                        &pm.chain,
                        feasibility.feasible,
                        true,
                    )));
                }
                EngineChoice::Collapse => {
                    let joint = collapse::collapse_chain_joint(&settings)
                        .map_err(|e| unsupported(e.to_string()))?;
                    let closed = collapse::collapse_correlators(&settings)
                        .map_err(|e| unsupported(e.to_string()))?;
                    let chain = chain_correlators(&joint).map_err(|e| unsupported(e.to_string()))?;
                    tables.push(TableDump::from_table("joint", &relabel(&joint, output_labels)));
                    correlators.push(CorrelatorDump::new("chain", &chain));
                    correlators.push(CorrelatorDump::new("closed-form", &closed));
                    let feasibility =
                        joint_exists(&closed, true).map_err(|e| unsupported(e.to_string()))?;
                    audits.push(AuditDump::new(&feasibility_audit(
                        &closed,
                        feasibility.feasible,
                        true,
                    )));
                }
                EngineChoice::Quantum => {
                    // The fresh-singlet assignment: correlators only; no joint
                    // table exists when the bound is violated.
                    let set = quantum_correlator_set(&settings)
                        .map_err(|e| unsupported(e.to_string()))?;
                    correlators.push(CorrelatorDump::new("fresh-singlet", &set));
                    let feasibility =
                        joint_exists(&set, true).map_err(|e| unsupported(e.to_string()))?;
                    audits.push(AuditDump::new(&feasibility_audit(
                        &set,
                        feasibility.feasible,
                        false,
                    )));
                }
            }
        }
        (StateKind::Hardy, shape) => {
            let rounds = hardy_rounds(plan, shape)?;
            match plan.engine {
                EngineChoice::PilotWave => {
                    let table = fr_pilotwave_table();
                    let audit =
                        fr_mixed_claims_audit(&table).map_err(|e| unsupported(e.to_string()))?;
                    // Core order: (coin first, electron first, electron
                    // second, coin second).
                    let output_labels = vec![
                        rounds.coin_first.tag.clone(),
                        rounds.electron_first.tag.clone(),
                        rounds.electron_second.tag.clone(),
                        rounds.coin_second.tag.clone(),
                    ];
                    tables.push(TableDump::from_table("joint", &relabel(&table, output_labels)));
                    audits.push(AuditDump::new(&audit));
                }
                EngineChoice::Quantum => {
                    let (first, second) =
                        hardy_born_tables().map_err(|e| unsupported(e.to_string()))?;
                    tables.push(TableDump::from_table("first-round", &first));
                    tables.push(TableDump::from_table("second-round", &second));
                }
                EngineChoice::Collapse => {
                    return Err(unsupported(
                        "no collapse-model table is defined for the coin-electron state; \
                         only pilotwave and quantum run this plan",
                    ));
                }
            }
        }
        (StateKind::Ghz, PlanShape::Triple(measures)) => {
            if plan.engine != EngineChoice::Quantum {
                return Err(unsupported(format!(
                    "no {} model is defined for the three-particle state; \
                     the parity checker covers the structural argument",
                    plan.engine
                )));
            }
            let angles: Vec<Angle> = measures
                .iter()
                .map(|m| Angle::new(m.radians))
                .collect::<Result<_, _>>()
                .map_err(|e| unsupported(e.to_string()))?;
            let table = ghz_joint(
                angles[0],
                angles[1],
                angles[2],
                [
                    measures[0].tag.as_str(),
                    measures[1].tag.as_str(),
                    measures[2].tag.as_str(),
                ],
            )
            .map_err(|e| unsupported(e.to_string()))?;
            let product = ghz_correlator(angles[0], angles[1], angles[2]);
            let closed = (angles.iter().map(|a| a.radians()).sum::<f64>()).cos();
            let mut audit = AuditReport::new("ghz-product");
            audit.check_value(
                "product expectation",
                product,
                (product - closed).abs() < 1e-12,
                format!("state-vector contraction vs cos(t1+t2+t3) = {closed:.12}"),
            );
            tables.push(TableDump::from_table("joint", &table));
            audits.push(AuditDump::new(&audit));
        }
        _ => {
            return Err(unsupported(format!(
                "no model is defined for state `{}` with this event shape",
                plan.state
            )))
        }
    }

    Ok(RunReport {
        plan: plan_echo(plan),
        engine: plan.engine.to_string(),
        tables,
        correlators,
        audits,
        rng: RngDump {
            generator: None,
            seed: None,
        },
    })
}

/// Run a validated plan as a seeded simulation; `trials`/`seed` arguments
/// override the plan directives.
pub fn simulate_plan(
    plan: &ExperimentPlan,
    trials_override: Option<u64>,
    seed_override: Option<u64>,
) -> Result<RunReport, Vec<Diagnostic>> {
    let trials = match trials_override.or(plan.trials) {
        Some(t) => t,
        None => {
            return Err(vec![Diagnostic::error(
                1,
                1,
                DiagCode::MissingTrials,
                "simulation needs a `trials` directive or --trials",
            )])
        }
    };
    let seed = seed_override.or(plan.seed).unwrap_or(0);

    let shape = classify(plan)?;
    let (engine, settings, output_labels) = match (plan.state, &shape, plan.engine) {
        (StateKind::Singlet, PlanShape::Pair { first, second }, _) => {
            let settings = Settings::new(first.radians, second.radians, 0.0, 0.0)
                .map_err(|e| unsupported(e.to_string()))?;
            (
                TrialEngine::QuantumPair,
                Some(settings),
                vec![first.tag.clone(), second.tag.clone()],
            )
        }
        (
            StateKind::Singlet,
            PlanShape::TwoRound {
                a_first,
                b_first,
                a_second,
                b_second,
            },
            engine,
        ) => {
            let settings = two_round_settings(a_first, b_first, a_second, b_second)?;
            let labels = vec![
                a_first.tag.clone(),
                b_first.tag.clone(),
                a_second.tag.clone(),
                b_second.tag.clone(),
            ];
            let trial_engine = match engine {
                EngineChoice::PilotWave => TrialEngine::PilotWavePm,
                EngineChoice::Collapse => TrialEngine::CollapsePm,
                EngineChoice::Quantum => {
                    return Err(unsupported(
                        "the fresh-singlet assignment admits no joint distribution to sample; \
                         simulate the pilotwave or collapse engine instead",
                    ))
                }
            };
            (trial_engine, Some(settings), labels)
        }
        (StateKind::Hardy, shape, EngineChoice::PilotWave) => {
            let rounds = hardy_rounds(plan, shape)?;
            (
                TrialEngine::FrTable,
                None,
                vec![
                    rounds.coin_first.tag.clone(),
                    rounds.electron_first.tag.clone(),
                    rounds.electron_second.tag.clone(),
                    rounds.coin_second.tag.clone(),
                ],
            )
        }
        _ => {
            return Err(unsupported(format!(
                "no sampling engine covers state `{}` with engine `{}`",
                plan.state, plan.engine
            )))
        }
    };

    let trial_plan = TrialPlan {
        engine,
        settings,
        trials,
        seed,
    };
    let report = montecarlo::sample(&trial_plan).map_err(|e| unsupported(e.to_string()))?;
    let audit = montecarlo::compare(&report, &report.analytic, 5.0)
        .map_err(|e| unsupported(e.to_string()))?;

    Ok(RunReport {
        plan: plan_echo(plan),
        engine: plan.engine.to_string(),
        tables: vec![
            TableDump::from_table("empirical", &relabel(&report.table, output_labels.clone())),
            TableDump::from_table("analytic", &relabel(&report.analytic, output_labels)),
        ],
        correlators: Vec::new(),
        audits: vec![AuditDump::new(&audit)],
        rng: RngDump {
            generator: Some(report.generator.to_string()),
            seed: Some(seed),
        },
    })
}

struct HardyRounds<'p> {
    coin_first: &'p MeasureEvent,
    electron_first: &'p MeasureEvent,
    electron_second: &'p MeasureEvent,
    coin_second: &'p MeasureEvent,
}

/// Validate the coin–electron rounds: the first declared party is the coin.
/// First-round measurements must be in the computational basis (angle 0),
/// second-round in the conjugate basis (angle π/2).
fn hardy_rounds<'p>(
    plan: &'p ExperimentPlan,
    shape: &PlanShape<'p>,
) -> Result<HardyRounds<'p>, Vec<Diagnostic>> {
    let PlanShape::TwoRound {
        a_first,
        b_first,
        a_second,
        b_second,
    } = shape
    else {
        return Err(unsupported(
            "coin-electron plans follow the canonical six-event two-round order",
        ));
    };
    let coin = &plan.parties[0];
    if &a_first.party != coin {
        return Err(unsupported(format!(
            "the first declared party `{coin}` is the coin and must be measured first"
        )));
    }
    for (m, expected, what) in [
        (*a_first, 0.0, "first-round coin"),
        (*b_first, 0.0, "first-round electron"),
        (*a_second, PI / 2.0, "second-round coin"),
        (*b_second, PI / 2.0, "second-round electron"),
    ] {
        if (m.radians - expected).abs() > 1e-12 {
            return Err(unsupported(format!(
                "{what} measurement must use angle {expected} \
                 (z-basis first round, x-basis second round); got {}",
                m.radians
            )));
        }
    }
    Ok(HardyRounds {
        coin_first: a_first,
        electron_first: b_first,
        electron_second: b_second,
        coin_second: a_second,
    })
}

fn chain_correlators(joint: &JointTable) -> ewf_core::Result<CorrelatorSet> {
    CorrelatorSet::new(
        joint.expectation(labels::A1, labels::B1)?,
        joint.expectation(labels::B1, labels::A2)?,
        joint.expectation(labels::A2, labels::B2)?,
        joint.expectation(labels::A1, labels::B2)?,
    )?
    .with_same_side(
        joint.expectation(labels::A1, labels::A2)?,
        joint.expectation(labels::B1, labels::B2)?,
    )
}

fn feasibility_audit(set: &CorrelatorSet, feasible: bool, must_be_feasible: bool) -> AuditReport {
    let mut audit = AuditReport::new("joint-feasibility");
    let (label, value) = max_chsh_variant(set);
    audit.info_value("max CHSH variant", value, label);
    if must_be_feasible {
        audit.check(
            "joint distribution exists",
            feasible,
            "definite-outcome engines must admit a joint distribution",
        );
    } else {
        audit.flag(
            "joint distribution exists",
            Some(value),
            feasible,
            if feasible {
                "the correlator set admits a joint distribution"
            } else {
                "no joint distribution reproduces these correlators"
            },
        );
    }
    audit
}

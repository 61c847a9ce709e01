//! Seeded, reproducible sampling of every engine's conditional chain.
//!
//! Each trial draws from its own ChaCha8 stream, selected by the trial index
//! (`set_stream`), so the result is bit-identical for a fixed (seed, trials,
//! settings) no matter how the trials are split across workers. Worker
//! results are merged as exact per-atom counts.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::collapse::collapse_chain_joint;
use crate::model::{labels, CorrelatorSet, Error, JointTable, Result, Settings, Sign};
use crate::pilotwave::{a2_conditional_plus, b_pair_conditional, fr_pilotwave_table, pm_joint};
use crate::quantum::{singlet_correlator, singlet_pair_table};
use crate::report::AuditReport;

/// The pinned generator, recorded in every report.
pub const GENERATOR: &str = "chacha8 (independent 64-bit stream per trial index)";

/// Trials per parallel work unit.
const CHUNK: u64 = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrialEngine {
    PilotWavePm,
    CollapsePm,
    FrTable,
    QuantumPair,
}

impl TrialEngine {
    pub fn name(self) -> &'static str {
        match self {
            TrialEngine::PilotWavePm => "pilotwave-pm",
            TrialEngine::CollapsePm => "collapse-pm",
            TrialEngine::FrTable => "fr-table",
            TrialEngine::QuantumPair => "quantum-pair",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialPlan {
    pub engine: TrialEngine,
    pub settings: Option<Settings>,
    pub trials: u64,
    pub seed: u64,
}

/// One estimated pair correlator with its conservative standard error
/// 1/√trials (exact for ±1 products).
#[derive(Debug, Clone, PartialEq)]
pub struct PairEstimate {
    pub first: String,
    pub second: String,
    pub estimate: f64,
    pub std_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalReport {
    pub engine: TrialEngine,
    pub trials: u64,
    pub seed: u64,
    pub generator: &'static str,
    pub table: JointTable,
    pub analytic: JointTable,
    pub correlators: Vec<PairEstimate>,
    pub max_atom_deviation: f64,
    pub max_correlator_deviation: f64,
}

/// Draw `plan.trials` outcome tuples from the engine's conditional chain and
/// summarize them against the engine's analytic table.
pub fn sample(plan: &TrialPlan) -> Result<EmpiricalReport> {
    if plan.trials == 0 {
        return Err(Error::OutOfRange {
            what: "trial count",
            lo: 1.0,
            hi: f64::INFINITY,
            value: 0.0,
        });
    }
    let sampler = build_sampler(plan)?;
    let counts = run_trials(plan.seed, plan.trials, &sampler.draw, sampler.atoms);
    summarize(plan, sampler.analytic, counts)
}

struct Sampler {
    analytic: JointTable,
    atoms: usize,
    draw: Box<dyn Fn(&mut ChaCha8Rng) -> usize + Sync + Send>,
}

fn require_settings(plan: &TrialPlan) -> Result<Settings> {
    plan.settings.ok_or_else(|| Error::UnsupportedPlan {
        engine: plan.engine.name(),
        reason: "this engine requires measurement settings".to_string(),
    })
}

fn build_sampler(plan: &TrialPlan) -> Result<Sampler> {
    match plan.engine {
        TrialEngine::PilotWavePm => {
            let s = require_settings(plan)?;
            let analytic = pm_joint(&s)?;
            // Cumulative (B1,B2) rows per A1 and A2-plus probabilities per
            // (A1, B2), precomputed once.
            let b_rows = [
                cumulative(&b_pair_conditional(&s, Sign::Plus)?),
                cumulative(&b_pair_conditional(&s, Sign::Minus)?),
            ];
            let mut a2_plus = [[0.0; 2]; 2];
            for (ai, a1) in Sign::BOTH.into_iter().enumerate() {
                for (li, b2) in Sign::BOTH.into_iter().enumerate() {
                    a2_plus[ai][li] = a2_conditional_plus(&s, a1, b2)?;
                }
            }
            let draw = move |rng: &mut ChaCha8Rng| {
                let ai = usize::from(rng.random::<f64>() >= 0.5);
                let pair = pick(&b_rows[ai], rng.random::<f64>());
                let (bi, li) = (pair >> 1, pair & 1);
                let ji = usize::from(rng.random::<f64>() >= a2_plus[ai][li]);
                (ai << 3) | (bi << 2) | (ji << 1) | li
            };
            Ok(Sampler {
                analytic,
                atoms: 16,
                draw: Box::new(draw),
            })
        }
        TrialEngine::CollapsePm => {
            let s = require_settings(plan)?;
            let analytic = collapse_chain_joint(&s)?;
            let half_first = (s.a1.radians() - s.b1.radians()) / 2.0;
            let b1_plus = [half_first.sin().powi(2), half_first.cos().powi(2)];
            let persist_a = (s.alpha() / 2.0).cos().powi(2);
            let persist_b = (s.beta() / 2.0).cos().powi(2);
            let draw = move |rng: &mut ChaCha8Rng| {
                let ai = usize::from(rng.random::<f64>() >= 0.5);
                let bi = usize::from(rng.random::<f64>() >= b1_plus[ai]);
                let ji = if rng.random::<f64>() < persist_a { ai } else { 1 - ai };
                let li = if rng.random::<f64>() < persist_b { bi } else { 1 - bi };
                (ai << 3) | (bi << 2) | (ji << 1) | li
            };
            Ok(Sampler {
                analytic,
                atoms: 16,
                draw: Box::new(draw),
            })
        }
        TrialEngine::FrTable => {
            let analytic = fr_pilotwave_table();
            let cdf = cumulative(analytic.probs());
            let draw = move |rng: &mut ChaCha8Rng| pick(&cdf, rng.random::<f64>());
            Ok(Sampler {
                analytic,
                atoms: 16,
                draw: Box::new(draw),
            })
        }
        TrialEngine::QuantumPair => {
            let s = require_settings(plan)?;
            let analytic = singlet_pair_table(s.a1, s.b1, labels::A1, labels::B1)?;
            let e = singlet_correlator(s.a1, s.b1);
            // P(B1 = A1-aligned) from the pair correlator.
            let same = (1.0 + e) / 2.0;
            let draw = move |rng: &mut ChaCha8Rng| {
                let ai = usize::from(rng.random::<f64>() >= 0.5);
                let bi = if rng.random::<f64>() < same { ai } else { 1 - ai };
                (ai << 1) | bi
            };
            Ok(Sampler {
                analytic,
                atoms: 4,
                draw: Box::new(draw),
            })
        }
    }
}

/// Categorical sampling straight from an analytic table, trial streams
/// identical to [`sample`]'s.
pub fn sample_categorical(table: &JointTable, trials: u64, seed: u64) -> Result<JointTable> {
    if trials == 0 {
        return Err(Error::OutOfRange {
            what: "trial count",
            lo: 1.0,
            hi: f64::INFINITY,
            value: 0.0,
        });
    }
    let cdf = cumulative(table.probs());
    let draw = move |rng: &mut ChaCha8Rng| pick(&cdf, rng.random::<f64>());
    let counts = run_trials(seed, trials, &draw, table.len());
    empirical_table(table.parties(), &counts, trials)
}

fn cumulative(probs: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    let mut cdf: Vec<f64> = probs
        .iter()
        .map(|p| {
            acc += p;
            acc
        })
        .collect();
    if let Some(last) = cdf.last_mut() {
        *last = 1.0;
    }
    cdf
}

fn pick(cdf: &[f64], u: f64) -> usize {
    cdf.iter().position(|&c| u < c).unwrap_or(cdf.len() - 1)
}

fn run_trials<F>(seed: u64, trials: u64, draw: &F, atoms: usize) -> Vec<u64>
where
    F: Fn(&mut ChaCha8Rng) -> usize + Sync,
{
    let base = ChaCha8Rng::seed_from_u64(seed);
    let chunks: Vec<(u64, u64)> = (0..trials)
        .step_by(CHUNK as usize)
        .map(|start| (start, (start + CHUNK).min(trials)))
        .collect();
    chunks
        .into_par_iter()
        .map(|(start, end)| {
            let mut counts = vec![0u64; atoms];
            let mut rng = base.clone();
            for trial in start..end {
                rng.set_stream(trial);
                rng.set_word_pos(0);
                counts[draw(&mut rng)] += 1;
            }
            counts
        })
        .reduce(
            || vec![0u64; atoms],
            |mut acc, counts| {
                for (a, c) in acc.iter_mut().zip(counts) {
                    *a += c;
                }
                acc
            },
        )
}

fn empirical_table(parties: &[String], counts: &[u64], trials: u64) -> Result<JointTable> {
    let probs = counts
        .iter()
        .map(|&c| c as f64 / trials as f64)
        .collect();
    JointTable::new(parties.to_vec(), probs)
}

fn summarize(plan: &TrialPlan, analytic: JointTable, counts: Vec<u64>) -> Result<EmpiricalReport> {
    let table = empirical_table(analytic.parties(), &counts, plan.trials)?;
    let std_error = 1.0 / (plan.trials as f64).sqrt();

    let parties = table.parties().to_vec();
    let mut correlators = Vec::new();
    let mut max_correlator_deviation: f64 = 0.0;
    for i in 0..parties.len() {
        for j in i + 1..parties.len() {
            let estimate = table.expectation(&parties[i], &parties[j])?;
            let reference = analytic.expectation(&parties[i], &parties[j])?;
            max_correlator_deviation = max_correlator_deviation.max((estimate - reference).abs());
            correlators.push(PairEstimate {
                first: parties[i].clone(),
                second: parties[j].clone(),
                estimate,
                std_error,
            });
        }
    }
    let max_atom_deviation = table
        .probs()
        .iter()
        .zip(analytic.probs())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    Ok(EmpiricalReport {
        engine: plan.engine,
        trials: plan.trials,
        seed: plan.seed,
        generator: GENERATOR,
        table,
        analytic,
        correlators,
        max_atom_deviation,
        max_correlator_deviation,
    })
}

/// Per-atom and per-correlator comparison of an empirical report against an
/// analytic table; passes when every deviation is within
/// `sigma_multiplier / √trials`.
pub fn compare(
    empirical: &EmpiricalReport,
    analytic: &JointTable,
    sigma_multiplier: f64,
) -> Result<AuditReport> {
    if empirical.table.parties() != analytic.parties() {
        return Err(Error::PartyMismatch {
            left: empirical.table.parties().join(","),
            right: analytic.parties().join(","),
        });
    }
    let tolerance = sigma_multiplier / (empirical.trials as f64).sqrt();
    let mut report = AuditReport::new(format!("sampling-vs-analytic ({})", empirical.engine.name()));
    report.info_value("tolerance", tolerance, format!("{sigma_multiplier} sigma"));

    let mut worst_atom: f64 = 0.0;
    for ((tuple, p_hat), p_ref) in empirical.table.atoms().zip(analytic.probs()) {
        let deviation = (p_hat - p_ref).abs();
        worst_atom = worst_atom.max(deviation);
        if deviation > tolerance {
            let outcome = tuple
                .pairs()
                .iter()
                .map(|(party, s)| format!("{party}={s}"))
                .collect::<Vec<_>>()
                .join(" ");
            report.check_value(
                format!("atom {outcome}"),
                deviation,
                false,
                format!("empirical {p_hat:.6} vs analytic {p_ref:.6}"),
            );
        }
    }
    report.check_value(
        "max atom deviation",
        worst_atom,
        worst_atom <= tolerance,
        String::new(),
    );

    let parties = analytic.parties().to_vec();
    let mut worst_pair: f64 = 0.0;
    for i in 0..parties.len() {
        for j in i + 1..parties.len() {
            let estimate = empirical.table.expectation(&parties[i], &parties[j])?;
            let reference = analytic.expectation(&parties[i], &parties[j])?;
            let deviation = (estimate - reference).abs();
            worst_pair = worst_pair.max(deviation);
            report.check_value(
                format!("E({}, {})", parties[i], parties[j]),
                estimate,
                deviation <= tolerance,
                format!("analytic {reference:.6}, deviation {deviation:.6}"),
            );
        }
    }
    report.check_value(
        "max correlator deviation",
        worst_pair,
        worst_pair <= tolerance,
        String::new(),
    );
    Ok(report)
}

/// Compare empirical cross correlators against a reference correlator set;
/// used to exhibit which assignments a sampled engine cannot satisfy.
pub fn compare_correlators(
    empirical: &EmpiricalReport,
    reference: &CorrelatorSet,
    sigma_multiplier: f64,
) -> Result<AuditReport> {
    let tolerance = sigma_multiplier / (empirical.trials as f64).sqrt();
    let mut report = AuditReport::new(format!(
        "sampling-vs-correlators ({})",
        empirical.engine.name()
    ));
    report.info_value("tolerance", tolerance, format!("{sigma_multiplier} sigma"));
    let pairs = [
        (labels::A1, labels::B1, reference.e_a1b1),
        (labels::B1, labels::A2, reference.e_b1a2),
        (labels::A2, labels::B2, reference.e_a2b2),
        (labels::A1, labels::B2, reference.e_a1b2),
    ];
    for (first, second, expected) in pairs {
        let estimate = empirical.table.expectation(first, second)?;
        let deviation = (estimate - expected).abs();
        report.check_value(
            format!("E({first}, {second})"),
            estimate,
            deviation <= tolerance,
            format!("reference {expected:.6}, deviation {deviation:.6}"),
        );
    }
    Ok(report)
}

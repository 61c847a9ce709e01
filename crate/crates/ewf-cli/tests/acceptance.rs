//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! (visible with `cargo test -p ewf-cli --test acceptance -- --nocapture`).

use std::f64::consts::PI;
use std::path::PathBuf;
use std::time::Instant;

use ewf_core::checkers::{
    certainty_chain_premises, chsh_family_satisfied, fr_logic_contradiction, ghz_parity_satisfiable,
    is_contradiction, joint_exists, order_census, premises_from_table,
};
use ewf_core::montecarlo::{sample, TrialEngine, TrialPlan};
use ewf_core::pilotwave::{
    fr_audit, fr_mixed_claims_audit, fr_pilotwave_table, pm_correlators, same_side_forms,
};
use ewf_core::quantum::{ghz_correlator, hardy_born_tables, quantum_correlator_set};
use ewf_core::{collapse, labels, Angle, CorrelatorSet, Settings, Sign};
use ewf_cli::plan::parse_plan;

fn criterion<F>(number: u8, name: &str, body: F)
where
    F: FnOnce() -> String + std::panic::UnwindSafe,
{
    let start = Instant::now();
    match std::panic::catch_unwind(body) {
        Ok(detail) => println!(
            "acceptance {number:02} {name}: PASS — {detail} [{:.2?}]",
            start.elapsed()
        ),
        Err(payload) => {
            println!(
                "acceptance {number:02} {name}: FAIL [{:.2?}]",
                start.elapsed()
            );
            std::panic::resume_unwind(payload);
        }
    }
}

fn tsirelson() -> Settings {
    Settings::new(0.0, PI / 4.0, PI / 2.0, 3.0 * PI / 4.0).unwrap()
}

struct SplitMix(u64);

impl SplitMix {
    fn unit(&mut self) -> f64 {
        self.0 = self.0.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        ((z ^ (z >> 31)) >> 11) as f64 / (1u64 << 53) as f64
    }

    fn settings(&mut self) -> Settings {
        Settings::new(
            self.unit() * 2.0 * PI,
            self.unit() * 2.0 * PI,
            self.unit() * 2.0 * PI,
            self.unit() * 2.0 * PI,
        )
        .unwrap()
    }
}

#[test]
fn criterion_01_quantum_chsh() {
    criterion(1, "quantum CHSH at the maximal settings", || {
        let set = quantum_correlator_set(&tsirelson()).unwrap();
        let value = set.chsh_value();
        let expected = 2.0 * 2.0_f64.sqrt();
        assert!(
            (value - expected).abs() < 1e-9,
            "CHSH {value} vs {expected}"
        );
        format!("CHSH = {value:.12}")
    });
}

#[test]
fn criterion_02_pilot_wave_chsh_bound() {
    criterion(2, "pilot-wave CHSH bound on random settings", || {
        let mut rng = SplitMix(0xC2);
        let mut max_seen: f64 = 0.0;
        for trial in 0..10_000 {
            let s = rng.settings();
            let value = pm_correlators(&s).unwrap().chain.chsh_value();
            max_seen = max_seen.max(value);
            assert!(value <= 2.0 + 1e-9, "trial {trial}: CHSH {value}");
        }
        format!("10^4 settings, max CHSH = {max_seen:.12}")
    });
}

#[test]
fn criterion_03_closed_form_reproduction() {
    criterion(3, "chain vs closed-form correlators", || {
        let mut rng = SplitMix(0xC3);
        let mut worst: f64 = 0.0;
        for trial in 0..1_000 {
            let s = rng.settings();
            let pm = pm_correlators(&s).unwrap();
            let c1 = (s.a1.radians() - s.b1.radians()).cos();
            let c2 = (s.a2.radians() - s.b2.radians()).cos();
            let checks = [
                ("E_A1B1", pm.chain.e_a1b1, -c1),
                ("E_A2B2", pm.chain.e_a2b2, -c2),
                ("E_A1B2", pm.chain.e_a1b2, 0.0),
                ("E_B1A2", pm.chain.e_b1a2, pm.closed_form.e_b1a2),
            ];
            for (label, got, expected) in checks {
                let deviation = (got - expected).abs();
                worst = worst.max(deviation);
                assert!(deviation < 1e-9, "trial {trial} {label}: {got} vs {expected}");
            }
            // Same-side correlators against both printed argument
            // conventions, with the match recorded in the audit.
            let forms = same_side_forms(&s);
            let a_chain = pm.chain.e_a1a2.unwrap();
            let b_chain = pm.chain.e_b1b2.unwrap();
            assert!((a_chain - forms.a_side_second_round).abs() < 1e-9);
            assert!((b_chain - forms.b_side_first_round).abs() < 1e-9);
            let audit = &pm.same_side_audit;
            assert_eq!(
                audit.flag_of("E_A1A2 uses second-round angles"),
                Some(true)
            );
            assert_eq!(audit.flag_of("E_B1B2 uses first-round angles"), Some(true));
            let a_first_matches = (a_chain - forms.a_side_first_round).abs() <= 1e-9;
            assert_eq!(
                audit.flag_of("E_A1A2 uses first-round angles"),
                Some(a_first_matches)
            );
        }
        format!("10^3 settings, worst deviation {worst:.2e}; same-side arguments swap recorded")
    });
}

#[test]
fn criterion_04_monte_carlo_agreement() {
    criterion(4, "10^6-trial sampling agreement", || {
        let plan = TrialPlan {
            engine: TrialEngine::PilotWavePm,
            settings: Some(tsirelson()),
            trials: 1_000_000,
            seed: 20240817,
        };
        let report = sample(&plan).unwrap();
        let pairs = [
            (labels::A1, labels::B1),
            (labels::B1, labels::A2),
            (labels::A2, labels::B2),
            (labels::A1, labels::B2),
        ];
        let mut worst: f64 = 0.0;
        for (first, second) in pairs {
            let estimate = report.table.expectation(first, second).unwrap();
            let analytic = report.analytic.expectation(first, second).unwrap();
            let deviation = (estimate - analytic).abs();
            worst = worst.max(deviation);
            assert!(
                deviation <= 5e-3,
                "E({first},{second}): {estimate} vs {analytic}"
            );
        }
        let rerun = sample(&plan).unwrap();
        assert_eq!(report.table, rerun.table, "re-run with the same seed differs");
        format!("worst correlator deviation {worst:.2e}; bit-identical re-run")
    });
}

#[test]
fn criterion_05_fr_table_and_audit() {
    criterion(5, "nine-atom table and certainty audit", || {
        let table = fr_pilotwave_table();
        let ninth = 1.0 / 9.0;
        let mut nonzero = 0;
        for (_, p) in table.atoms() {
            if p != 0.0 {
                assert_eq!(p, ninth, "atom mass is exactly 1/9");
                nonzero += 1;
            }
        }
        assert_eq!(nonzero, 9);
        use Sign::Minus as M;
        assert_eq!(table.atom_prob(&[M, M, M, M]).unwrap(), ninth);

        let audit = fr_mixed_claims_audit(&table).unwrap();
        let third = 1.0 / 3.0;
        let ulps = 4.0 * f64::EPSILON;
        let c1 = audit.value_of(fr_audit::W_F_GIVEN_FBAR_T).unwrap();
        let c2 = audit.value_of(fr_audit::F_UP_GIVEN_WBAR_O).unwrap();
        let oo = audit.value_of(fr_audit::BOTH_O).unwrap();
        assert!((c1 - third).abs() <= ulps, "P(W=f|Fbar=t) = {c1:e}");
        assert!((c2 - third).abs() <= ulps, "P(F=up|Wbar=o) = {c2:e}");
        assert_eq!(oo, third, "P(o,o) is exactly 1/3");
        assert_eq!(audit.flag_of(fr_audit::W_F_GIVEN_FBAR_T), Some(false));
        assert_eq!(audit.flag_of(fr_audit::F_UP_GIVEN_WBAR_O), Some(false));

        let (_, second_round) = hardy_born_tables().unwrap();
        let quantum_oo = second_round.atom_prob(&[M, M]).unwrap();
        assert!((quantum_oo - 1.0 / 12.0).abs() < 1e-12);
        format!("both claims violated at 1/3; P(o,o) = 1/3 vs Born {quantum_oo:.12}")
    });
}

#[test]
fn criterion_06_fr_logic() {
    criterion(6, "certainty-chain logic", || {
        let chain = fr_logic_contradiction(&certainty_chain_premises()).unwrap();
        assert!(is_contradiction(&chain), "chain premises must contradict");
        let table = premises_from_table(&fr_pilotwave_table()).unwrap();
        let verdict = fr_logic_contradiction(&table).unwrap();
        assert!(!is_contradiction(&verdict), "table premises must be consistent");
        format!(
            "chain premises CONTRADICTION; table premises CONSISTENT with P(o,o) = {:.12}",
            table.possibility.probability
        )
    });
}

#[test]
fn criterion_07_ghz() {
    criterion(7, "three-particle perfect correlations and parity", || {
        let x = Angle::new(0.0).unwrap();
        let y = Angle::new(PI / 2.0).unwrap();
        let values = [
            (ghz_correlator(x, y, y), -1.0),
            (ghz_correlator(y, x, y), -1.0),
            (ghz_correlator(y, y, x), -1.0),
            (ghz_correlator(x, x, x), 1.0),
        ];
        for (got, expected) in values {
            assert!((got - expected).abs() < 1e-12, "{got} vs {expected}");
        }
        let count = ghz_parity_satisfiable();
        assert_eq!(count, 0, "parity assignments");
        format!("E = (-1, -1, -1, +1); {count} of 64 parity assignments")
    });
}

#[test]
fn criterion_08_fine_equivalence() {
    criterion(8, "solver vs inequality-family equivalence", || {
        let mut rng = SplitMix(0xC8);
        let mut feasible_count = 0u32;
        for trial in 0..10_000 {
            let set = CorrelatorSet::new(
                rng.unit() * 2.0 - 1.0,
                rng.unit() * 2.0 - 1.0,
                rng.unit() * 2.0 - 1.0,
                rng.unit() * 2.0 - 1.0,
            )
            .unwrap();
            let result = joint_exists(&set, true).unwrap();
            assert_eq!(
                result.feasible,
                chsh_family_satisfied(&set),
                "trial {trial}: verdicts disagree"
            );
            if result.feasible {
                feasible_count += 1;
                let witness = result.witness.expect("feasible verdicts carry a witness");
                for ((a, b), e) in [
                    (labels::A1, labels::B1),
                    (labels::B1, labels::A2),
                    (labels::A2, labels::B2),
                    (labels::A1, labels::B2),
                ]
                .into_iter()
                .zip(set.cross())
                {
                    let got = witness.expectation(a, b).unwrap();
                    assert!(
                        (got - e).abs() <= 1e-9,
                        "trial {trial}: witness E({a},{b}) = {got} vs {e}"
                    );
                }
            } else {
                assert!(result.violated_inequality.is_some());
            }
        }
        format!("10^4 sets, {feasible_count} feasible, all witnesses verified")
    });
}

#[test]
fn criterion_09_time_order() {
    criterion(9, "event-order measurability census", || {
        let census = order_census();
        assert_eq!(census.admissible, 20);
        assert_eq!(census.both, 0);
        format!(
            "20 orders; only-first {}, only-second {}, neither {}, both 0",
            census.only_first_cross, census.only_second_cross, census.neither
        )
    });
}

#[test]
fn criterion_10_collapse_model() {
    criterion(10, "collapse chain vs closed forms", || {
        let mut rng = SplitMix(0xCA);
        let mut worst: f64 = 0.0;
        for trial in 0..1_000 {
            let s = rng.settings();
            let joint = collapse::collapse_chain_joint(&s).unwrap();
            let closed = collapse::collapse_correlators(&s).unwrap();
            let pairs = [
                (labels::A1, labels::B1, closed.e_a1b1),
                (labels::B1, labels::A2, closed.e_b1a2),
                (labels::A2, labels::B2, closed.e_a2b2),
                (labels::A1, labels::B2, closed.e_a1b2),
            ];
            for (a, b, expected) in pairs {
                let got = joint.expectation(a, b).unwrap();
                let deviation = (got - expected).abs();
                worst = worst.max(deviation);
                assert!(deviation < 1e-12, "trial {trial}: E({a},{b})");
            }
        }
        let s = tsirelson();
        let collapse_set = collapse::collapse_correlators(&s).unwrap();
        let pilot = pm_correlators(&s).unwrap();
        let gap = (collapse_set.e_a2b2 - pilot.chain.e_a2b2).abs();
        assert!(
            (gap - 0.5_f64.sqrt()).abs() < 1e-12,
            "E_A2B2 gap {gap} vs sqrt(2)/2"
        );
        format!("10^3 settings, worst deviation {worst:.2e}; discrimination gap {gap:.12}")
    });
}

#[test]
fn criterion_11_frontend() {
    criterion(11, "reference plans and diagnostics", || {
        let plans = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../plans");
        // Reference plans parse and run with byte-stable emission.
        for name in ["pm_pilotwave.ewf", "fr_pilotwave.ewf"] {
            let path = plans.join(name);
            let run = |args: &[&str]| {
                std::process::Command::new(env!("CARGO_BIN_EXE_ewf"))
                    .args(args)
                    .output()
                    .expect("binary runs")
            };
            let path_str = path.to_string_lossy().into_owned();
            let first = run(&["analytic", &path_str]);
            let second = run(&["analytic", &path_str]);
            assert!(first.status.success(), "{name}");
            assert!(!first.stdout.is_empty());
            assert_eq!(first.stdout, second.stdout, "{name}: JSON not byte-stable");

            let text = std::fs::read_to_string(&path).unwrap();
            let plan = parse_plan(&text).unwrap();
            let report_a = ewf_cli::run::run_plan(&plan).unwrap();
            let report_b = ewf_cli::run::run_plan(&plan).unwrap();
            assert_eq!(
                ewf_cli::emit::report_to_csv(&report_a),
                ewf_cli::emit::report_to_csv(&report_b),
                "{name}: CSV not byte-stable"
            );
        }
        // The malformed corpus produces exactly its documented codes.
        let mut checked = 0;
        for entry in std::fs::read_dir(plans.join("malformed")).unwrap() {
            let path = entry.unwrap().path();
            let stem = path.file_stem().unwrap().to_string_lossy().into_owned();
            let text = std::fs::read_to_string(&path).unwrap();
            let diags = match parse_plan(&text) {
                Err(diags) => diags,
                Ok(plan) => match stem.as_str() {
                    "MISSING_TRIALS" => ewf_cli::run::simulate_plan(&plan, None, None).unwrap_err(),
                    _ => ewf_cli::run::run_plan(&plan).unwrap_err(),
                },
            };
            assert!(
                diags.iter().any(|d| d.code.as_str() == stem),
                "{stem}: {:?}",
                diags.iter().map(|d| d.code.as_str()).collect::<Vec<_>>()
            );
            checked += 1;
        }
        format!("2 reference plans byte-stable; {checked} diagnostic fixtures verified")
    });
}

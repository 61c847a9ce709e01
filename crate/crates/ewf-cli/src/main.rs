//! `ewf` — run, simulate and audit extended Wigner's-friend experiments.
//!
//! Exit codes: 0 success, 1 diagnostics or I/O failure, 2 audit failure.

use std::f64::consts::PI;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ewf_core::checkers::{
    self, chsh_family_satisfied, ghz_constraints, ghz_parity_satisfiable, joint_exists,
    time_order_audit,
};
use ewf_core::pilotwave::{fr_audit, fr_mixed_claims_audit, fr_pilotwave_table, pm_correlators};
use ewf_core::quantum::{ghz_correlator, hardy_born_tables, quantum_correlator_set};
use ewf_core::{collapse, Angle, CorrelatorSet, Settings, Sign};
use ewf_cli::diag::Diagnostic;
use ewf_cli::emit::{format_sig, report_to_csv, report_to_json};
use ewf_cli::plan::parse_plan;
use ewf_cli::run::{run_plan, simulate_plan, RunReport};

#[derive(Parser)]
#[command(
    name = "ewf",
    about = "Simulate and audit extended Wigner's-friend experiments",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a plan analytically and emit its report.
    Analytic {
        /// Plan file.
        plan: PathBuf,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Also write the report tables as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run a plan as a seeded Monte Carlo simulation.
    Simulate {
        /// Plan file (needs `trials`, optionally `seed`).
        plan: PathBuf,
        /// Override the plan's trial count.
        #[arg(long)]
        trials: Option<u64>,
        /// Override the plan's seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Scan the fan of settings (0, t, 2t, 3t) and emit CHSH values as CSV.
    ChshScan {
        /// Number of grid steps over [0, pi].
        #[arg(long, default_value_t = 64)]
        points: usize,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Structural consistency checks (exit 2 on failure).
    #[command(subcommand)]
    Check(CheckCommand),
    /// Informational audits.
    #[command(subcommand)]
    Audit(AuditCommand),
}

#[derive(Subcommand)]
enum CheckCommand {
    /// Joint-distribution feasibility: engine sets at the maximal-violation
    /// settings plus a randomized agreement battery.
    Fine {
        /// Random instances for the battery.
        #[arg(long, default_value_t = 1000)]
        random: u64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
    },
    /// Perfect-correlation parity argument for the three-particle state.
    Ghz,
    /// Certainty-chain logic for the coin-electron arrangement.
    Fr,
    /// Event-order measurability census.
    Timeorder,
}

#[derive(Subcommand)]
enum AuditCommand {
    /// Conditional-probability audit of the certainty claims on the
    /// coin-electron table.
    FrMixed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode, String> {
    match command {
        Command::Analytic { plan, json, csv } => {
            let report = load_and(run_plan, &plan)?;
            emit_report(&report, json, csv)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Simulate {
            plan,
            trials,
            seed,
            json,
            csv,
        } => {
            let report = load_and(|p| simulate_plan(p, trials, seed), &plan)?;
            emit_report(&report, json, csv)?;
            let all_passed = report.audits.iter().all(|a| a.passed);
            Ok(if all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            })
        }
        Command::ChshScan { points, out } => {
            let csv = chsh_scan(points)?;
            write_out(out.as_deref(), &csv)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Check(check) => run_check(check),
        Command::Audit(AuditCommand::FrMixed) => {
            audit_fr_mixed();
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn load_and<F>(run: F, path: &Path) -> Result<RunReport, String>
where
    F: FnOnce(&ewf_cli::ExperimentPlan) -> Result<RunReport, Vec<Diagnostic>>,
{
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let outcome = parse_plan(&text).and_then(|plan| run(&plan));
    outcome.map_err(|diags| {
        let mut message = format!("{} diagnostic(s) in {}:", diags.len(), path.display());
        for d in diags {
            message.push_str(&format!("\n  {d}"));
        }
        message
    })
}

fn emit_report(
    report: &RunReport,
    json: Option<PathBuf>,
    csv: Option<PathBuf>,
) -> Result<(), String> {
    let json_text = report_to_json(report);
    match json {
        Some(path) => write_file(&path, &json_text)?,
        None => print!("{json_text}"),
    }
    if let Some(path) = csv {
        write_file(&path, &report_to_csv(report))?;
    }
    Ok(())
}

fn write_file(path: &Path, content: &str) -> Result<(), String> {
    std::fs::write(path, content).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn write_out(path: Option<&Path>, content: &str) -> Result<(), String> {
    match path {
        Some(path) => write_file(path, content),
        None => {
            std::io::stdout()
                .write_all(content.as_bytes())
                .map_err(|e| e.to_string())?;
            Ok(())
        }
    }
}

/// CHSH of all three engines along the fan (0, t, 2t, 3t), t in [0, pi].
fn chsh_scan(points: usize) -> Result<String, String> {
    if points == 0 {
        return Err("chsh-scan needs at least one grid step".to_string());
    }
    let mut out = String::from("t,a1,b1,a2,b2,S_quantum,S_pilotwave,S_collapse\n");
    for step in 0..=points {
        let t = PI * step as f64 / points as f64;
        let settings =
            Settings::new(0.0, t, 2.0 * t, 3.0 * t).map_err(|e| e.to_string())?;
        let quantum = quantum_correlator_set(&settings).map_err(|e| e.to_string())?;
        let pilot = pm_correlators(&settings).map_err(|e| e.to_string())?;
        let collapse = collapse::collapse_correlators(&settings).map_err(|e| e.to_string())?;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            format_sig(t),
            format_sig(0.0),
            format_sig(t),
            format_sig(2.0 * t),
            format_sig(3.0 * t),
            format_sig(quantum.chsh_value()),
            format_sig(pilot.chain.chsh_value()),
            format_sig(collapse.chsh_value()),
        ));
    }
    Ok(out)
}

fn run_check(check: CheckCommand) -> Result<ExitCode, String> {
    let mut all_ok = true;
    let mut line = |ok: bool, label: &str, detail: String| {
        all_ok &= ok;
        println!("[{}] {label}: {detail}", if ok { "PASS" } else { "FAIL" });
    };

    match check {
        CheckCommand::Fine { random, seed } => {
            let settings = tsirelson();
            let quantum = quantum_correlator_set(&settings).map_err(|e| e.to_string())?;
            let result = joint_exists(&quantum, true).map_err(|e| e.to_string())?;
            line(
                !result.feasible,
                "fresh-singlet set at the maximal-violation settings",
                format!(
                    "expected infeasible; CHSH = {:.9}; {}",
                    quantum.chsh_value(),
                    result
                        .violated_inequality
                        .unwrap_or_else(|| "no violated inequality reported".to_string())
                ),
            );

            for (name, set) in [
                (
                    "pilotwave chain",
                    pm_correlators(&settings).map_err(|e| e.to_string())?.chain,
                ),
                (
                    "collapse closed form",
                    collapse::collapse_correlators(&settings).map_err(|e| e.to_string())?,
                ),
            ] {
                let result = joint_exists(&set, true).map_err(|e| e.to_string())?;
                let witness_ok = result.witness.is_some();
                line(
                    result.feasible && witness_ok,
                    name,
                    format!(
                        "expected feasible with witness; CHSH = {:.9}",
                        set.chsh_value()
                    ),
                );
            }

            let mut rng = SplitMix::new(seed);
            let mut disagreements = 0u64;
            for _ in 0..random {
                let set = CorrelatorSet::new(
                    rng.unit() * 2.0 - 1.0,
                    rng.unit() * 2.0 - 1.0,
                    rng.unit() * 2.0 - 1.0,
                    rng.unit() * 2.0 - 1.0,
                )
                .map_err(|e| e.to_string())?;
                let lp = joint_exists(&set, true).map_err(|e| e.to_string())?;
                if lp.feasible != chsh_family_satisfied(&set) {
                    disagreements += 1;
                }
            }
            line(
                disagreements == 0,
                "solver vs inequality-family agreement",
                format!("{random} random correlator sets, {disagreements} disagreement(s)"),
            );

            let mut bound_violations = 0u64;
            for _ in 0..random {
                let s = Settings::new(
                    rng.unit() * 2.0 * PI,
                    rng.unit() * 2.0 * PI,
                    rng.unit() * 2.0 * PI,
                    rng.unit() * 2.0 * PI,
                )
                .map_err(|e| e.to_string())?;
                let pilot = pm_correlators(&s).map_err(|e| e.to_string())?;
                let collapse_set =
                    collapse::collapse_correlators(&s).map_err(|e| e.to_string())?;
                if pilot.chain.chsh_value() > 2.0 + 1e-9
                    || collapse_set.chsh_value() > 2.0 + 1e-9
                {
                    bound_violations += 1;
                }
            }
            line(
                bound_violations == 0,
                "definite-outcome engines respect the CHSH bound",
                format!("{random} random settings, {bound_violations} violation(s)"),
            );
        }
        CheckCommand::Ghz => {
            let count = ghz_parity_satisfiable();
            line(
                count == 0,
                "parity constraints",
                format!("{count} of 64 assignments satisfy all four product constraints"),
            );
            let constraints = ghz_constraints();
            for drop in 0..constraints.len() {
                let reduced: Vec<_> = constraints
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != drop)
                    .map(|(_, &c)| c)
                    .collect();
                let reduced_count = checkers::count_satisfying(&reduced);
                line(
                    reduced_count > 0,
                    "dropping one constraint restores solutions",
                    format!("without constraint {drop}: {reduced_count} assignments"),
                );
            }
            let x = Angle::new(0.0).map_err(|e| e.to_string())?;
            let y = Angle::new(PI / 2.0).map_err(|e| e.to_string())?;
            for (label, value, expected) in [
                ("E(x,y,y)", ghz_correlator(x, y, y), -1.0),
                ("E(y,x,y)", ghz_correlator(y, x, y), -1.0),
                ("E(y,y,x)", ghz_correlator(y, y, x), -1.0),
                ("E(x,x,x)", ghz_correlator(x, x, x), 1.0),
            ] {
                line(
                    (value - expected).abs() < 1e-12,
                    label,
                    format!("{value:.12} (expected {expected})"),
                );
            }
        }
        CheckCommand::Fr => {
            let chain = checkers::certainty_chain_premises();
            let report = checkers::fr_logic_contradiction(&chain).map_err(|e| e.to_string())?;
            line(
                checkers::is_contradiction(&report),
                "certainty-chain premises",
                "expected CONTRADICTION".to_string(),
            );
            let table_premises = checkers::premises_from_table(&fr_pilotwave_table())
                .map_err(|e| e.to_string())?;
            let report =
                checkers::fr_logic_contradiction(&table_premises).map_err(|e| e.to_string())?;
            line(
                !checkers::is_contradiction(&report),
                "table-licensed premises",
                format!(
                    "expected CONSISTENT; P(o,o) = {}",
                    format_sig(table_premises.possibility.probability)
                ),
            );
        }
        CheckCommand::Timeorder => {
            let report = time_order_audit();
            print!("{report}");
            line(report.passed(), "event-order census", "see findings above".to_string());
        }
    }

    Ok(if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn audit_fr_mixed() {
    let table = fr_pilotwave_table();
    let report = fr_mixed_claims_audit(&table).expect("canonical table audits");
    print!("{report}");
    if let Ok((_, second_round)) = hardy_born_tables() {
        let quantum_oo = second_round
            .atom_prob(&[Sign::Minus, Sign::Minus])
            .expect("two-party table");
        let pilot_oo = report.value_of(fr_audit::BOTH_O).unwrap_or(f64::NAN);
        println!(
            "  [INFO] second-round reference — {} = {} here vs {} in the Born table",
            fr_audit::BOTH_O,
            format_sig(pilot_oo),
            format_sig(quantum_oo),
        );
    }
}

fn tsirelson() -> Settings {
    Settings::new(0.0, PI / 4.0, PI / 2.0, 3.0 * PI / 4.0).expect("finite angles")
}

/// Small deterministic generator for the check batteries.
struct SplitMix {
    state: u64,
}

impl SplitMix {
    fn new(seed: u64) -> Self {
        SplitMix { state: seed }
    }

    fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

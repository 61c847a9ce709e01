//! Line-oriented experiment-description language.
//!
//! ```text
//! # comment
//! name  <identifier>                         (optional)
//! state singlet | ghz | hardy
//! engine pilotwave | collapse | quantum
//! party <label>
//! measure <party> <angle | basis-keyword> as <tag>
//! undo <party> <tag>
//! trials <n>                                 (simulation only)
//! seed <n>                                   (simulation only)
//! ```
//!
//! Angles are radians with `pi` literals (`pi/4`, `3pi/4`, `-pi/2`, `0.75`).
//! Basis keywords: `x` ≙ 0 and `y` ≙ π/2 for three-particle plans;
//! `z-basis` ≙ 0 and `x-basis` ≙ π/2 for coin–electron plans.

use std::f64::consts::PI;
use std::fmt;

use crate::diag::{DiagCode, Diagnostic};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateKind {
    Singlet,
    Ghz,
    Hardy,
}

impl StateKind {
    pub fn as_str(self) -> &'static str {
        match self {
            StateKind::Singlet => "singlet",
            StateKind::Ghz => "ghz",
            StateKind::Hardy => "hardy",
        }
    }

    fn party_count(self) -> usize {
        match self {
            StateKind::Singlet => 2,
            StateKind::Ghz => 3,
            StateKind::Hardy => 2,
        }
    }
}

impl fmt::Display for StateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EngineChoice {
    PilotWave,
    Collapse,
    Quantum,
}

impl EngineChoice {
    pub fn as_str(self) -> &'static str {
        match self {
            EngineChoice::PilotWave => "pilotwave",
            EngineChoice::Collapse => "collapse",
            EngineChoice::Quantum => "quantum",
        }
    }
}

impl fmt::Display for EngineChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasureEvent {
    pub party: String,
    /// The angle token as written (kept for faithful serialization).
    pub angle_text: String,
    pub radians: f64,
    pub tag: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PlanEvent {
    Measure(MeasureEvent),
    Undo { party: String, tag: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentPlan {
    pub name: String,
    pub state: StateKind,
    pub engine: EngineChoice,
    pub parties: Vec<String>,
    pub events: Vec<PlanEvent>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
}

/// Parse an angle token: `pi` expressions, plain radians, or a basis
/// keyword.
pub fn parse_angle(token: &str) -> Option<f64> {
    let t = token.to_ascii_lowercase();
    match t.as_str() {
        "x" => return Some(0.0),
        "y" => return Some(PI / 2.0),
        "z-basis" => return Some(0.0),
        "x-basis" => return Some(PI / 2.0),
        _ => {}
    }
    let (sign, rest) = match t.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, t.as_str()),
    };
    if let Some(pi_at) = rest.find("pi") {
        let coef_text = &rest[..pi_at];
        let tail = &rest[pi_at + 2..];
        let coef = if coef_text.is_empty() {
            1.0
        } else {
            coef_text.parse::<f64>().ok()?
        };
        let denom = if tail.is_empty() {
            1.0
        } else {
            let den_text = tail.strip_prefix('/')?;
            let den = den_text.parse::<f64>().ok()?;
            if den == 0.0 {
                return None;
            }
            den
        };
        let value = sign * coef * PI / denom;
        return value.is_finite().then_some(value);
    }
    let value = sign * rest.parse::<f64>().ok()?;
    value.is_finite().then_some(value)
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let content = match line.find('#') {
        Some(at) => &line[..at],
        None => line,
    };
    let mut spans = Vec::new();
    let mut start: Option<usize> = None;
    for (idx, ch) in content.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                spans.push((s, idx));
            }
        } else if start.is_none() {
            start = Some(idx);
        }
    }
    if let Some(s) = start {
        spans.push((s, content.len()));
    }
    spans
        .into_iter()
        .map(|(s, e)| Token {
            text: &content[s..e],
            column: content[..s].chars().count() + 1,
        })
        .collect()
}

#[derive(Debug)]
enum RawEvent {
    Measure {
        line: usize,
        column: usize,
        party: String,
        angle_text: String,
        radians: f64,
        tag: String,
    },
    Undo {
        line: usize,
        column: usize,
        party: String,
        tag: String,
    },
}

/// Parse and validate a plan; on failure every problem found is reported.
pub fn parse_plan(text: &str) -> Result<ExperimentPlan, Vec<Diagnostic>> {
    let mut diags: Vec<Diagnostic> = Vec::new();
    let mut name: Option<String> = None;
    let mut state: Option<(StateKind, usize)> = None;
    let mut engine: Option<EngineChoice> = None;
    let mut parties: Vec<String> = Vec::new();
    let mut trials: Option<u64> = None;
    let mut seed: Option<u64> = None;
    let mut raw_events: Vec<RawEvent> = Vec::new();
    let mut saw_content = false;

    for (line_idx, line) in text.lines().enumerate() {
        let line_no = line_idx + 1;
        let tokens = tokenize(line);
        if tokens.is_empty() {
            continue;
        }
        saw_content = true;
        let keyword = &tokens[0];
        let args = &tokens[1..];
        let arity = |diags: &mut Vec<Diagnostic>, expected: usize, usage: &str| -> bool {
            if args.len() != expected {
                diags.push(Diagnostic::error(
                    line_no,
                    keyword.column,
                    DiagCode::Arity,
                    format!(
                        "`{}` takes {} argument(s): {}",
                        keyword.text, expected, usage
                    ),
                ));
                false
            } else {
                true
            }
        };
        match keyword.text {
            "name" => {
                if !arity(&mut diags, 1, "name <identifier>") {
                    continue;
                }
                if name.is_some() {
                    diags.push(Diagnostic::error(
                        line_no,
                        keyword.column,
                        DiagCode::DuplicateDirective,
                        "`name` was already given",
                    ));
                } else {
                    name = Some(args[0].text.to_string());
                }
            }
            "state" => {
                if !arity(&mut diags, 1, "state singlet|ghz|hardy") {
                    continue;
                }
                let kind = match args[0].text {
                    "singlet" => Some(StateKind::Singlet),
                    "ghz" => Some(StateKind::Ghz),
                    "hardy" => Some(StateKind::Hardy),
                    other => {
                        diags.push(Diagnostic::error(
                            line_no,
                            args[0].column,
                            DiagCode::UnknownState,
                            format!("unknown state `{other}` (expected singlet, ghz or hardy)"),
                        ));
                        None
                    }
                };
                if let Some(kind) = kind {
                    if state.is_some() {
                        diags.push(Diagnostic::error(
                            line_no,
                            keyword.column,
                            DiagCode::DuplicateDirective,
                            "`state` was already given",
                        ));
                    } else {
                        state = Some((kind, line_no));
                    }
                }
            }
            "engine" => {
                if !arity(&mut diags, 1, "engine pilotwave|collapse|quantum") {
                    continue;
                }
                let kind = match args[0].text {
                    "pilotwave" => Some(EngineChoice::PilotWave),
                    "collapse" => Some(EngineChoice::Collapse),
                    "quantum" => Some(EngineChoice::Quantum),
                    other => {
                        diags.push(Diagnostic::error(
                            line_no,
                            args[0].column,
                            DiagCode::UnknownEngine,
                            format!(
                                "unknown engine `{other}` (expected pilotwave, collapse or quantum)"
                            ),
                        ));
                        None
                    }
                };
                if let Some(kind) = kind {
                    if engine.is_some() {
                        diags.push(Diagnostic::error(
                            line_no,
                            keyword.column,
                            DiagCode::DuplicateDirective,
                            "`engine` was already given",
                        ));
                    } else {
                        engine = Some(kind);
                    }
                }
            }
            "party" => {
                if !arity(&mut diags, 1, "party <label>") {
                    continue;
                }
                let label = args[0].text;
                if parties.iter().any(|p| p == label) {
                    diags.push(Diagnostic::error(
                        line_no,
                        args[0].column,
                        DiagCode::DuplicateParty,
                        format!("party `{label}` was already declared"),
                    ));
                } else {
                    parties.push(label.to_string());
                }
            }
            "measure" => {
                if args.len() != 4 || args[2].text != "as" {
                    diags.push(Diagnostic::error(
                        line_no,
                        keyword.column,
                        DiagCode::Arity,
                        "`measure` takes `measure <party> <angle> as <tag>`",
                    ));
                    continue;
                }
                let party = args[0].text;
                if !parties.iter().any(|p| p == party) {
                    diags.push(Diagnostic::error(
                        line_no,
                        args[0].column,
                        DiagCode::UnknownParty,
                        format!("party `{party}` was not declared"),
                    ));
                    continue;
                }
                let Some(radians) = parse_angle(args[1].text) else {
                    diags.push(Diagnostic::error(
                        line_no,
                        args[1].column,
                        DiagCode::BadAngle,
                        format!(
                            "cannot read `{}` as an angle (radians, pi expression or basis keyword)",
                            args[1].text
                        ),
                    ));
                    continue;
                };
                raw_events.push(RawEvent::Measure {
                    line: line_no,
                    column: args[3].column,
                    party: party.to_string(),
                    angle_text: args[1].text.to_string(),
                    radians,
                    tag: args[3].text.to_string(),
                });
            }
            "undo" => {
                if !arity(&mut diags, 2, "undo <party> <tag>") {
                    continue;
                }
                let party = args[0].text;
                if !parties.iter().any(|p| p == party) {
                    diags.push(Diagnostic::error(
                        line_no,
                        args[0].column,
                        DiagCode::UnknownParty,
                        format!("party `{party}` was not declared"),
                    ));
                    continue;
                }
                raw_events.push(RawEvent::Undo {
                    line: line_no,
                    column: args[1].column,
                    party: party.to_string(),
                    tag: args[1].text.to_string(),
                });
            }
            "trials" | "seed" => {
                if !arity(&mut diags, 1, "<directive> <nonnegative integer>") {
                    continue;
                }
                let parsed = args[0].text.parse::<u64>().ok();
                let value = match (keyword.text, parsed) {
                    (_, None) => {
                        diags.push(Diagnostic::error(
                            line_no,
                            args[0].column,
                            DiagCode::BadInteger,
                            format!("cannot read `{}` as an unsigned integer", args[0].text),
                        ));
                        continue;
                    }
                    ("trials", Some(0)) => {
                        diags.push(Diagnostic::error(
                            line_no,
                            args[0].column,
                            DiagCode::BadInteger,
                            "trial count must be at least 1",
                        ));
                        continue;
                    }
                    (_, Some(v)) => v,
                };
                let slot = if keyword.text == "trials" {
                    &mut trials
                } else {
                    &mut seed
                };
                if slot.is_some() {
                    diags.push(Diagnostic::error(
                        line_no,
                        keyword.column,
                        DiagCode::DuplicateDirective,
                        format!("`{}` was already given", keyword.text),
                    ));
                } else {
                    *slot = Some(value);
                }
            }
            other => {
                diags.push(Diagnostic::error(
                    line_no,
                    keyword.column,
                    DiagCode::UnknownKeyword,
                    format!("unknown keyword `{other}`"),
                ));
            }
        }
    }

    if !saw_content {
        return Err(vec![Diagnostic::error(
            1,
            1,
            DiagCode::EmptyPlan,
            "plan has no content",
        )]);
    }

    // Referential checks over the ordered event list.
    let mut events: Vec<PlanEvent> = Vec::new();
    // tag -> (party, undone)
    let mut tags: Vec<(String, String, bool)> = Vec::new();
    // party -> pending (measured and not yet undone) tag
    let mut pending: Vec<(String, Option<String>)> =
        parties.iter().map(|p| (p.clone(), None)).collect();
    let definition_order: Vec<(String, usize)> = raw_events
        .iter()
        .enumerate()
        .filter_map(|(idx, e)| match e {
            RawEvent::Measure { tag, .. } => Some((tag.clone(), idx)),
            RawEvent::Undo { .. } => None,
        })
        .collect();

    for (idx, raw) in raw_events.iter().enumerate() {
        match raw {
            RawEvent::Measure {
                line,
                column,
                party,
                angle_text,
                radians,
                tag,
            } => {
                if tags.iter().any(|(t, ..)| t == tag) {
                    diags.push(Diagnostic::error(
                        *line,
                        *column,
                        DiagCode::DuplicateTag,
                        format!("tag `{tag}` was already used"),
                    ));
                    continue;
                }
                if let Some((_, slot)) = pending.iter_mut().find(|(p, _)| p == party) {
                    if let Some(open) = slot {
                        diags.push(Diagnostic::error(
                            *line,
                            *column,
                            DiagCode::MeasureWhilePending,
                            format!(
                                "party `{party}` still has measurement `{open}` pending; undo it first"
                            ),
                        ));
                        continue;
                    }
                    *slot = Some(tag.clone());
                }
                tags.push((tag.clone(), party.clone(), false));
                events.push(PlanEvent::Measure(MeasureEvent {
                    party: party.clone(),
                    angle_text: angle_text.clone(),
                    radians: *radians,
                    tag: tag.clone(),
                }));
            }
            RawEvent::Undo {
                line,
                column,
                party,
                tag,
            } => {
                match tags.iter_mut().find(|(t, ..)| t == tag) {
                    None => {
                        let defined_later = definition_order
                            .iter()
                            .any(|(t, def_idx)| t == tag && *def_idx > idx);
                        let (code, what) = if defined_later {
                            (
                                DiagCode::UndoBeforeMeasure,
                                format!("tag `{tag}` is only measured later"),
                            )
                        } else {
                            (
                                DiagCode::UndoUnknownTag,
                                format!("tag `{tag}` was never measured"),
                            )
                        };
                        diags.push(Diagnostic::error(*line, *column, code, what));
                    }
                    Some((_, tag_party, undone)) => {
                        if tag_party != party {
                            diags.push(Diagnostic::error(
                                *line,
                                *column,
                                DiagCode::UndoWrongParty,
                                format!(
                                    "tag `{tag}` belongs to party `{tag_party}`, not `{party}`"
                                ),
                            ));
                        } else if *undone {
                            diags.push(Diagnostic::error(
                                *line,
                                *column,
                                DiagCode::UndoTwice,
                                format!("tag `{tag}` was already undone"),
                            ));
                        } else {
                            *undone = true;
                            if let Some((_, slot)) = pending.iter_mut().find(|(p, _)| p == party) {
                                *slot = None;
                            }
                            events.push(PlanEvent::Undo {
                                party: party.clone(),
                                tag: tag.clone(),
                            });
                        }
                    }
                }
            }
        }
    }

    let state_value = match state {
        Some((kind, line)) => {
            if !parties.is_empty() && parties.len() != kind.party_count() {
                diags.push(Diagnostic::error(
                    line,
                    1,
                    DiagCode::PartyCount,
                    format!(
                        "state `{kind}` needs exactly {} parties, plan declares {}",
                        kind.party_count(),
                        parties.len()
                    ),
                ));
            }
            Some(kind)
        }
        None => {
            diags.push(Diagnostic::error(
                1,
                1,
                DiagCode::MissingState,
                "plan never declares `state`",
            ));
            None
        }
    };
    if engine.is_none() {
        diags.push(Diagnostic::error(
            1,
            1,
            DiagCode::MissingEngine,
            "plan never declares `engine`",
        ));
    }

    if !diags.is_empty() {
        return Err(diags);
    }
    Ok(ExperimentPlan {
        name: name.unwrap_or_else(|| "unnamed".to_string()),
        state: state_value.expect("validated"),
        engine: engine.expect("validated"),
        parties,
        events,
        trials,
        seed,
    })
}

/// Write a plan back in canonical directive order; reparsing yields a
/// structurally identical plan.
pub fn serialize_plan(plan: &ExperimentPlan) -> String {
    let mut out = String::new();
    out.push_str(&format!("name {}\n", plan.name));
    out.push_str(&format!("state {}\n", plan.state));
    out.push_str(&format!("engine {}\n", plan.engine));
    for party in &plan.parties {
        out.push_str(&format!("party {party}\n"));
    }
    for event in &plan.events {
        match event {
            PlanEvent::Measure(m) => {
                out.push_str(&format!(
                    "measure {} {} as {}\n",
                    m.party, m.angle_text, m.tag
                ));
            }
            PlanEvent::Undo { party, tag } => {
                out.push_str(&format!("undo {party} {tag}\n"));
            }
        }
    }
    if let Some(trials) = plan.trials {
        out.push_str(&format!("trials {trials}\n"));
    }
    if let Some(seed) = plan.seed {
        out.push_str(&format!("seed {seed}\n"));
    }
    out
}

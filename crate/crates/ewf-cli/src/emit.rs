//! Report serialization: CSV tables with 12-significant-digit decimal
//! probabilities, and JSON reports with a stable key order.

use ewf_core::{labels, JointTable, Sign};
use serde::Serialize;

use crate::run::RunReport;

/// Outcome symbol for a party: the coin–electron parties print their
/// conventional symbols, every other party prints the sign itself.
pub fn outcome_symbol(party: &str, sign: Sign) -> &'static str {
    match (party, sign) {
        (p, Sign::Plus) if p == labels::FBAR => "h",
        (p, Sign::Minus) if p == labels::FBAR => "t",
        (p, Sign::Plus) if p == labels::F => "up",
        (p, Sign::Minus) if p == labels::F => "down",
        (p, Sign::Plus) if p == labels::W || p == labels::WBAR => "f",
        (p, Sign::Minus) if p == labels::W || p == labels::WBAR => "o",
        (_, Sign::Plus) => "+1",
        (_, Sign::Minus) => "-1",
    }
}

/// Decimal with 12 significant digits; zero prints as `0`.
pub fn format_sig(value: f64) -> String {
    if value == 0.0 {
        return "0".to_string();
    }
    let magnitude = value.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).clamp(0, 17) as usize;
    format!("{value:.decimals$}")
}

/// A serializable table: outcomes already mapped to symbols, atoms in
/// ascending index order (all +1 first).
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct TableDump {
    pub name: String,
    pub parties: Vec<String>,
    pub atoms: Vec<AtomDump>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct AtomDump {
    pub outcome: Vec<String>,
    pub probability: f64,
}

impl TableDump {
    pub fn from_table(name: impl Into<String>, table: &JointTable) -> Self {
        let atoms = table
            .atoms()
            .map(|(tuple, probability)| AtomDump {
                outcome: tuple
                    .pairs()
                    .iter()
                    .map(|(party, sign)| outcome_symbol(party, *sign).to_string())
                    .collect(),
                probability,
            })
            .collect();
        TableDump {
            name: name.into(),
            parties: table.parties().to_vec(),
            atoms,
        }
    }

    /// CSV with header `<parties...>,probability`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.parties.join(","));
        out.push_str(",probability\n");
        for atom in &self.atoms {
            out.push_str(&atom.outcome.join(","));
            out.push(',');
            out.push_str(&format_sig(atom.probability));
            out.push('\n');
        }
        out
    }
}

/// All tables of a report, concatenated with a blank line in between.
pub fn report_to_csv(report: &RunReport) -> String {
    report
        .tables
        .iter()
        .map(TableDump::to_csv)
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn report_to_json(report: &RunReport) -> String {
    let mut text = serde_json::to_string_pretty(report).expect("report serializes");
    text.push('\n');
    text
}

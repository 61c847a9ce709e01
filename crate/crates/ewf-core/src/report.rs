//! Structured audit reports shared by the checkers, the hidden-variable
//! engines and the sampling comparisons.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FindingStatus {
    Pass,
    Fail,
    Info,
}

impl fmt::Display for FindingStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FindingStatus::Pass => write!(f, "PASS"),
            FindingStatus::Fail => write!(f, "FAIL"),
            FindingStatus::Info => write!(f, "INFO"),
        }
    }
}

/// One line of an audit: a labeled observation with an optional numeric
/// value and an optional boolean flag (e.g. "does this certainty claim
/// hold").
#[derive(Debug, Clone, PartialEq)]
pub struct Finding {
    pub label: String,
    pub status: FindingStatus,
    pub value: Option<f64>,
    pub flag: Option<bool>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditReport {
    pub name: String,
    pub findings: Vec<Finding>,
}

impl AuditReport {
    pub fn new(name: impl Into<String>) -> Self {
        AuditReport {
            name: name.into(),
            findings: Vec::new(),
        }
    }

    pub fn push(&mut self, finding: Finding) {
        self.findings.push(finding);
    }

    pub fn check(&mut self, label: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.findings.push(Finding {
            label: label.into(),
            status: if ok {
                FindingStatus::Pass
            } else {
                FindingStatus::Fail
            },
            value: None,
            flag: None,
            detail: detail.into(),
        });
    }

    pub fn check_value(
        &mut self,
        label: impl Into<String>,
        value: f64,
        ok: bool,
        detail: impl Into<String>,
    ) {
        self.findings.push(Finding {
            label: label.into(),
            status: if ok {
                FindingStatus::Pass
            } else {
                FindingStatus::Fail
            },
            value: Some(value),
            flag: None,
            detail: detail.into(),
        });
    }

    pub fn info(&mut self, label: impl Into<String>, detail: impl Into<String>) {
        self.findings.push(Finding {
            label: label.into(),
            status: FindingStatus::Info,
            value: None,
            flag: None,
            detail: detail.into(),
        });
    }

    pub fn info_value(
        &mut self,
        label: impl Into<String>,
        value: f64,
        detail: impl Into<String>,
    ) {
        self.findings.push(Finding {
            label: label.into(),
            status: FindingStatus::Info,
            value: Some(value),
            flag: None,
            detail: detail.into(),
        });
    }

    pub fn flag(
        &mut self,
        label: impl Into<String>,
        value: Option<f64>,
        flag: bool,
        detail: impl Into<String>,
    ) {
        self.findings.push(Finding {
            label: label.into(),
            status: FindingStatus::Info,
            value,
            flag: Some(flag),
            detail: detail.into(),
        });
    }

    /// True when no finding failed.
    pub fn passed(&self) -> bool {
        self.findings
            .iter()
            .all(|f| f.status != FindingStatus::Fail)
    }

    pub fn finding(&self, label: &str) -> Option<&Finding> {
        self.findings.iter().find(|f| f.label == label)
    }

    pub fn value_of(&self, label: &str) -> Option<f64> {
        self.finding(label).and_then(|f| f.value)
    }

    pub fn flag_of(&self, label: &str) -> Option<bool> {
        self.finding(label).and_then(|f| f.flag)
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "audit {}", self.name)?;
        for finding in &self.findings {
            write!(f, "  [{}] {}", finding.status, finding.label)?;
            if let Some(value) = finding.value {
                write!(f, " = {value:.12}")?;
            }
            if let Some(flag) = finding.flag {
                write!(f, " ({})", if flag { "holds" } else { "violated" })?;
            }
            if !finding.detail.is_empty() {
                write!(f, " — {}", finding.detail)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_passes_without_failures() {
        let mut report = AuditReport::new("demo");
        report.check("a", true, "fine");
        report.info("b", "note");
        assert!(report.passed());
        report.check("c", false, "broken");
        assert!(!report.passed());
        assert_eq!(report.finding("c").unwrap().status, FindingStatus::Fail);
    }
}

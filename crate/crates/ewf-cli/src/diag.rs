//! Diagnostics for plan parsing and dispatch. Every diagnostic carries a
//! stable code and a 1-based source location.

use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiagCode {
    EmptyPlan,
    UnknownKeyword,
    Arity,
    UnknownState,
    UnknownEngine,
    BadAngle,
    BadInteger,
    UnknownParty,
    DuplicateParty,
    DuplicateTag,
    UndoUnknownTag,
    UndoBeforeMeasure,
    UndoWrongParty,
    UndoTwice,
    MeasureWhilePending,
    PartyCount,
    MissingState,
    MissingEngine,
    DuplicateDirective,
    MissingTrials,
    UnsupportedModel,
    UnsupportedOrder,
}

impl DiagCode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagCode::EmptyPlan => "EMPTY_PLAN",
            DiagCode::UnknownKeyword => "UNKNOWN_KEYWORD",
            DiagCode::Arity => "ARITY",
            DiagCode::UnknownState => "UNKNOWN_STATE",
            DiagCode::UnknownEngine => "UNKNOWN_ENGINE",
            DiagCode::BadAngle => "BAD_ANGLE",
            DiagCode::BadInteger => "BAD_INTEGER",
            DiagCode::UnknownParty => "UNKNOWN_PARTY",
            DiagCode::DuplicateParty => "DUPLICATE_PARTY",
            DiagCode::DuplicateTag => "DUPLICATE_TAG",
            DiagCode::UndoUnknownTag => "UNDO_UNKNOWN_TAG",
            DiagCode::UndoBeforeMeasure => "UNDO_BEFORE_MEASURE",
            DiagCode::UndoWrongParty => "UNDO_WRONG_PARTY",
            DiagCode::UndoTwice => "UNDO_TWICE",
            DiagCode::MeasureWhilePending => "MEASURE_WHILE_PENDING",
            DiagCode::PartyCount => "PARTY_COUNT",
            DiagCode::MissingState => "MISSING_STATE",
            DiagCode::MissingEngine => "MISSING_ENGINE",
            DiagCode::DuplicateDirective => "DUPLICATE_DIRECTIVE",
            DiagCode::MissingTrials => "MISSING_TRIALS",
            DiagCode::UnsupportedModel => "UNSUPPORTED_MODEL",
            DiagCode::UnsupportedOrder => "UNSUPPORTED_ORDER",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub line: usize,
    pub column: usize,
    pub code: DiagCode,
    pub message: String,
}

impl Diagnostic {
    pub fn error(line: usize, column: usize, code: DiagCode, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            line,
            column,
            code,
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(
            f,
            "{kind}[{}] {}:{}: {}",
            self.code.as_str(),
            self.line,
            self.column,
            self.message
        )
    }
}

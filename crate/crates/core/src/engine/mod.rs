//! Axiomatic systems and bottom-up theorem enumeration.

use std::fmt;

mod enumerate;
mod proof;
mod rules;
mod system;

pub use enumerate::{enumerate, EnumerationResult, EnumerationStats, StopReason};
pub use proof::{check_proof, extract_proof, InvalidReason, InvalidStep, NotDerived};
pub use rules::{apply_rule, ArityMismatch, RuleKind, UnknownRule};
pub use system::{
    load_system, AxiomaticSystem, Bounds, ConfigError, SystemDocument, DEFAULT_MAX_FORMULA_SIZE,
    DEFAULT_MAX_GENERATIONS, DEFAULT_MAX_THEOREMS,
};

use crate::formula::FormulaId;

/// Why a theorem holds: it is an axiom, or a rule produced it.
///
/// `LEM_AXIOM` instances are `Rule(RuleKind::LemAxiom)` with no premises.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Justification {
    Axiom,
    Rule(RuleKind),
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Axiom => f.write_str("AXIOM"),
            Justification::Rule(rule) => f.write_str(rule.name()),
        }
    }
}

impl std::str::FromStr for Justification {
    type Err = UnknownRule;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "AXIOM" {
            Ok(Justification::Axiom)
        } else {
            s.parse().map(Justification::Rule)
        }
    }
}

/// One derivation step. `premises` index earlier steps of the same list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofStep {
    pub conclusion: FormulaId,
    pub justification: Justification,
    pub premises: Vec<usize>,
}

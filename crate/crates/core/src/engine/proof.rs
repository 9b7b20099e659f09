use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use super::enumerate::EnumerationResult;
use super::rules::{apply_rule, RuleKind};
use super::system::AxiomaticSystem;
use super::{Justification, ProofStep};
use crate::formula::{FormulaId, FormulaStore};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("goal was not produced by the enumeration")]
pub struct NotDerived;

/// The ancestor steps of `goal`, re-indexed so that premises refer to
/// positions in the returned list. The last step concludes `goal`.
pub fn extract_proof(result: &EnumerationResult, goal: FormulaId) -> Result<Vec<ProofStep>, NotDerived> {
    let root = result.index_of(goal).ok_or(NotDerived)?;
    let mut needed = BTreeSet::new();
    let mut stack = vec![root];
    while let Some(i) = stack.pop() {
        if needed.insert(i) {
            stack.extend(result.steps[i].premises.iter().copied());
        }
    }
    // Discovery order is a topological order of the DAG.
    let order: Vec<usize> = needed.into_iter().collect();
    let local = |i: usize| order.binary_search(&i).expect("premise is an ancestor");
    Ok(order
        .iter()
        .map(|&i| {
            let step = &result.steps[i];
            ProofStep {
                conclusion: step.conclusion,
                justification: step.justification,
                premises: step.premises.iter().map(|&p| local(p)).collect(),
            }
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InvalidReason {
    NotAnAxiom,
    RuleNotEnabled(RuleKind),
    /// A premise index does not point at an earlier step.
    PremiseNotEarlier(usize),
    WrongArity { expected: usize, got: usize },
    /// The conclusion is not among the rule's outputs for these premises.
    NotDerivable,
}

impl fmt::Display for InvalidReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InvalidReason::NotAnAxiom => f.write_str("conclusion is not an axiom"),
            InvalidReason::RuleNotEnabled(rule) => write!(f, "rule {rule} is not enabled"),
            InvalidReason::PremiseNotEarlier(p) => {
                write!(f, "premise {p} does not refer to an earlier step")
            }
            InvalidReason::WrongArity { expected, got } => {
                write!(f, "expected {expected} premise(s), got {got}")
            }
            InvalidReason::NotDerivable => f.write_str("conclusion not in apply_rule output"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid proof step {index}: {reason}")]
pub struct InvalidStep {
    pub index: usize,
    pub reason: InvalidReason,
}

/// Replays every step of `steps` against `system`, reporting the first
/// failure.
pub fn check_proof(
    store: &mut FormulaStore,
    steps: &[ProofStep],
    system: &AxiomaticSystem,
) -> Result<(), InvalidStep> {
    for (index, step) in steps.iter().enumerate() {
        let fail = |reason| Err(InvalidStep { index, reason });
        if let Some(&p) = step.premises.iter().find(|&&p| p >= index) {
            return fail(InvalidReason::PremiseNotEarlier(p));
        }
        match step.justification {
            Justification::Axiom => {
                if !step.premises.is_empty() {
                    return fail(InvalidReason::WrongArity {
                        expected: 0,
                        got: step.premises.len(),
                    });
                }
                if !system.axioms().contains(&step.conclusion) {
                    return fail(InvalidReason::NotAnAxiom);
                }
            }
            Justification::Rule(rule) => {
                if !system.has_rule(rule) {
                    return fail(InvalidReason::RuleNotEnabled(rule));
                }
                let premises: Vec<FormulaId> =
                    step.premises.iter().map(|&p| steps[p].conclusion).collect();
                match apply_rule(store, rule, &premises, system.universe()) {
                    Err(e) => {
                        return fail(InvalidReason::WrongArity {
                            expected: e.expected,
                            got: e.got,
                        })
                    }
                    Ok(outputs) if !outputs.contains(&step.conclusion) => {
                        return fail(InvalidReason::NotDerivable)
                    }
                    Ok(_) => {}
                }
            }
        }
    }
    Ok(())
}

//! Machine-readable documents for enumeration results, proofs and gap
//! reports.
//!
//! Every document is a plain serde struct whose field order is its
//! serialization order, so rendering the same result twice yields the same
//! bytes. Formulas appear in canonical rendering.

use serde::{Deserialize, Serialize};

use crate::engine::{EnumerationResult, EnumerationStats, ProofStep};
use crate::formula::FormulaStore;
use crate::gap::{GapReport, LbiWitness, Verification, WitnessMode};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepDoc {
    pub index: usize,
    pub formula: String,
    pub rule: String,
    pub premises: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TheoremDoc {
    pub index: usize,
    pub formula: String,
    pub generation: usize,
    pub rule: String,
    pub premises: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnumerationDoc {
    pub theorems: Vec<TheoremDoc>,
    pub stats: EnumerationStats,
}

impl EnumerationDoc {
    pub fn new(store: &FormulaStore, result: &EnumerationResult) -> Self {
        let theorems = result
            .steps
            .iter()
            .zip(&result.generations)
            .enumerate()
            .map(|(index, (step, &generation))| TheoremDoc {
                index,
                formula: store.render(step.conclusion),
                generation,
                rule: step.justification.to_string(),
                premises: step.premises.clone(),
            })
            .collect();
        EnumerationDoc {
            theorems,
            stats: result.stats,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProofDoc {
    pub goal: String,
    pub steps: Vec<StepDoc>,
    pub valid: bool,
}

impl ProofDoc {
    pub fn new(store: &FormulaStore, goal: &str, steps: &[ProofStep], valid: bool) -> Self {
        ProofDoc {
            goal: goal.to_string(),
            steps: steps
                .iter()
                .enumerate()
                .map(|(index, s)| StepDoc {
                    index,
                    formula: store.render(s.conclusion),
                    rule: s.justification.to_string(),
                    premises: s.premises.clone(),
                })
                .collect(),
            valid,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessDoc {
    pub conclusion: String,
    pub pivot: String,
    pub mode: WitnessMode,
    pub sources: Vec<usize>,
}

impl WitnessDoc {
    fn new(store: &FormulaStore, w: &LbiWitness) -> Self {
        WitnessDoc {
            conclusion: store.render(w.conclusion),
            pivot: store.render(w.pivot),
            mode: w.mode,
            sources: w.source_indices.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GapWitnessDoc {
    pub pivot: String,
    pub mode: WitnessMode,
    pub sources: Vec<usize>,
    pub pivot_independent: bool,
    pub pivot_absent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GapMemberDoc {
    pub conclusion: String,
    pub witnesses: Vec<GapWitnessDoc>,
    pub verification: Verification,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClosureDoc {
    pub rule: String,
    pub enumerated: EnumerationDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GapDoc {
    pub gap: Vec<GapMemberDoc>,
    pub gap_closed: Option<bool>,
    pub lbi_accepted: Vec<WitnessDoc>,
    pub enumerated: EnumerationDoc,
    pub closure: Option<ClosureDoc>,
}

impl GapDoc {
    pub fn new(store: &FormulaStore, report: &GapReport) -> Self {
        GapDoc {
            gap: report
                .gap
                .iter()
                .map(|m| GapMemberDoc {
                    conclusion: store.render(m.conclusion),
                    witnesses: m
                        .witnesses
                        .iter()
                        .map(|c| GapWitnessDoc {
                            pivot: store.render(c.witness.pivot),
                            mode: c.witness.mode,
                            sources: c.witness.source_indices.clone(),
                            pivot_independent: c.pivot_independent,
                            pivot_absent: c.pivot_absent,
                        })
                        .collect(),
                    verification: m.verification,
                })
                .collect(),
            gap_closed: report.gap_closed(),
            lbi_accepted: report
                .lbi_accepted
                .iter()
                .map(|w| WitnessDoc::new(store, w))
                .collect(),
            enumerated: EnumerationDoc::new(store, &report.enumerated),
            closure: report.closure.as_ref().map(|c| ClosureDoc {
                rule: c.rule.name().to_string(),
                enumerated: EnumerationDoc::new(store, &c.enumerated),
            }),
        }
    }
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut out = serde_json::to_string_pretty(doc).expect("documents serialize");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::RuleKind;
    use crate::gap::{gap_report, paper_demo, DemoVariant};

    #[test]
    fn gap_document_shape() {
        let mut s = FormulaStore::new();
        let sys = paper_demo(&mut s, DemoVariant::Eq1);
        let report = gap_report(&mut s, &sys, Some(RuleKind::LbiRule)).unwrap();
        let json = to_json(&GapDoc::new(&s, &report));
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["gap"][0]["conclusion"], "q");
        assert_eq!(value["gap"][0]["witnesses"][0]["pivot"], "p");
        assert_eq!(value["gap"][0]["witnesses"][0]["mode"], "EQ1_SHAPE");
        assert_eq!(value["gap_closed"], true);
        assert_eq!(value["closure"]["rule"], "LBI_RULE");
        let back: GapDoc = serde_json::from_str(&json).unwrap();
        assert_eq!(to_json(&back), json);
    }
}

//! Excluded-middle conclusions that bottom-up enumeration never reaches.
//!
//! A conclusion `y` is *accepted* when the enumerated theorems contain
//! `(x | ~x) -> y` for some pivot `x`, or both `x -> y` and `~x -> y`. The
//! *gap* is the set of accepted conclusions missing from the enumeration.
//! Every gap member is checked against the truth-table oracle: `y` must be
//! entailed by the axioms, and the pivot should be both semantically
//! independent of them and syntactically absent from the theorem list
//! (neither `x` nor `~x` was enumerated).

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{enumerate, AxiomaticSystem, Bounds, EnumerationResult, RuleKind};
use crate::formula::{Formula, FormulaId, FormulaStore};
use crate::oracle::{self, OracleError, TruthTables};
use crate::parser::parse;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum WitnessMode {
    /// A theorem of the form `(x | ~x) -> y` (either disjunct order).
    Eq1Shape,
    /// Theorems `x -> y` and `~x -> y`.
    TwoBranch,
}

impl WitnessMode {
    pub fn name(self) -> &'static str {
        match self {
            WitnessMode::Eq1Shape => "EQ1_SHAPE",
            WitnessMode::TwoBranch => "TWO_BRANCH",
        }
    }
}

impl std::fmt::Display for WitnessMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Justification for accepting `conclusion` via a case split on `pivot`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LbiWitness {
    pub conclusion: FormulaId,
    pub pivot: FormulaId,
    pub mode: WitnessMode,
    /// Theorem indices: one for `Eq1Shape`, `[x -> y, ~x -> y]` for
    /// `TwoBranch`.
    pub source_indices: Vec<usize>,
}

/// All case-split acceptances among the enumerated theorems.
///
/// Deduplicated by (conclusion, pivot, mode), keeping the earliest sources,
/// and sorted by the canonical rendering of conclusion, then pivot.
pub fn lbi_accepted(store: &FormulaStore, result: &EnumerationResult) -> Vec<LbiWitness> {
    let index: BTreeMap<FormulaId, usize> = result
        .theorems
        .iter()
        .enumerate()
        .map(|(i, &f)| (f, i))
        .collect();
    let mut found: BTreeMap<(FormulaId, FormulaId, WitnessMode), Vec<usize>> = BTreeMap::new();
    for (i, &t) in result.theorems.iter().enumerate() {
        if let Some((pivot, conclusion)) = store.match_lbi_shape(t) {
            found
                .entry((conclusion, pivot, WitnessMode::Eq1Shape))
                .or_insert_with(|| vec![i]);
        }
        if let Formula::Implies(pivot, conclusion) = store.node(t) {
            let negative = store
                .find(&Formula::Not(pivot))
                .and_then(|np| store.find(&Formula::Implies(np, conclusion)))
                .and_then(|f| index.get(&f));
            if let Some(&j) = negative {
                found
                    .entry((conclusion, pivot, WitnessMode::TwoBranch))
                    .or_insert_with(|| vec![i, j]);
            }
        }
    }
    let mut witnesses: Vec<(String, String, LbiWitness)> = found
        .into_iter()
        .map(|((conclusion, pivot, mode), source_indices)| {
            (
                store.render(conclusion),
                store.render(pivot),
                LbiWitness {
                    conclusion,
                    pivot,
                    mode,
                    source_indices,
                },
            )
        })
        .collect();
    witnesses.sort_by(|a, b| (&a.0, &a.1, a.2.mode).cmp(&(&b.0, &b.1, b.2.mode)));
    witnesses.into_iter().map(|(_, _, w)| w).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Verification {
    pub oracle_entailed: bool,
    /// Every witness pivot is independent of the axioms.
    pub pivot_independent_semantically: bool,
    /// For every witness pivot `x`, neither `x` nor `~x` was enumerated.
    pub pivot_absent_syntactically: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessCheck {
    pub witness: LbiWitness,
    pub pivot_independent: bool,
    pub pivot_absent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapMember {
    pub conclusion: FormulaId,
    pub witnesses: Vec<WitnessCheck>,
    pub verification: Verification,
}

/// Re-enumeration with a case-split rule switched on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosureCheck {
    pub rule: RuleKind,
    pub enumerated: EnumerationResult,
    /// Every gap member appears in the re-enumeration.
    pub gap_closed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GapReport {
    pub enumerated: EnumerationResult,
    pub lbi_accepted: Vec<LbiWitness>,
    pub gap: Vec<GapMember>,
    pub closure: Option<ClosureCheck>,
}

impl GapReport {
    pub fn gap_closed(&self) -> Option<bool> {
        self.closure.as_ref().map(|c| c.gap_closed)
    }

    pub fn gap_conclusions(&self) -> Vec<FormulaId> {
        self.gap.iter().map(|m| m.conclusion).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GapError {
    #[error("base system must be pure bottom-up enumeration, but enables {0}")]
    PreconditionViolated(RuleKind),
    #[error("{0} cannot close a gap; use LBI_RULE, LEM_AXIOM or CASE_SPLIT")]
    InvalidCloseRule(RuleKind),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Enumerates `system`, collects case-split acceptances, and verifies every
/// accepted conclusion the enumeration missed.
///
/// With `close_with`, the system is re-enumerated with that rule enabled and
/// the report records whether the gap disappears.
pub fn gap_report(
    store: &mut FormulaStore,
    system: &AxiomaticSystem,
    close_with: Option<RuleKind>,
) -> Result<GapReport, GapError> {
    if let Some(&rule) = system.rules().iter().find(|r| r.is_case_split_style()) {
        return Err(GapError::PreconditionViolated(rule));
    }
    if let Some(rule) = close_with.filter(|r| !r.is_case_split_style()) {
        return Err(GapError::InvalidCloseRule(rule));
    }

    let enumerated = enumerate(store, system);
    let accepted = lbi_accepted(store, &enumerated);
    let theorems: BTreeSet<FormulaId> = enumerated.theorems.iter().copied().collect();

    let mut grouped: Vec<(FormulaId, Vec<LbiWitness>)> = Vec::new();
    for w in accepted.iter().filter(|w| !theorems.contains(&w.conclusion)) {
        match grouped.last_mut() {
            Some((c, ws)) if *c == w.conclusion => ws.push(w.clone()),
            _ => grouped.push((w.conclusion, vec![w.clone()])),
        }
    }

    let mut tables = TruthTables::covering(
        store,
        system
            .axioms()
            .iter()
            .copied()
            .chain(grouped.iter().flat_map(|(c, ws)| {
                std::iter::once(*c).chain(ws.iter().map(|w| w.pivot))
            })),
    )?;
    let models = tables.models(system.axioms())?;
    let mut gap = Vec::with_capacity(grouped.len());
    for (conclusion, witnesses) in grouped {
        let oracle_entailed = tables.entails_from(&models, conclusion)?.holds;
        let mut checks = Vec::with_capacity(witnesses.len());
        for witness in witnesses {
            let pivot_independent = oracle::independent(store, system.axioms(), witness.pivot)?;
            let negated = store.find(&Formula::Not(witness.pivot));
            let pivot_absent = !theorems.contains(&witness.pivot)
                && negated.is_none_or(|n| !theorems.contains(&n));
            checks.push(WitnessCheck {
                witness,
                pivot_independent,
                pivot_absent,
            });
        }
        let verification = Verification {
            oracle_entailed,
            pivot_independent_semantically: checks.iter().all(|c| c.pivot_independent),
            pivot_absent_syntactically: checks.iter().all(|c| c.pivot_absent),
        };
        gap.push(GapMember {
            conclusion,
            witnesses: checks,
            verification,
        });
    }

    let closure = close_with.map(|rule| {
        let mut rules = system.rules().clone();
        rules.insert(rule);
        let enumerated = enumerate(store, &system.with_rules(rules));
        let gap_closed = gap.iter().all(|m| enumerated.contains(m.conclusion));
        ClosureCheck {
            rule,
            enumerated,
            gap_closed,
        }
    });

    Ok(GapReport {
        enumerated,
        lbi_accepted: accepted,
        gap,
        closure,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DemoVariant {
    /// A single axiom `(p | ~p) -> q`.
    Eq1,
    /// Axioms `rh -> y` and `~rh -> y`: both branches of a case split.
    TwoBranch,
}

impl std::str::FromStr for DemoVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "EQ1" => Ok(DemoVariant::Eq1),
            "TWO_BRANCH" => Ok(DemoVariant::TwoBranch),
            other => Err(format!("unknown demo variant `{other}`")),
        }
    }
}

fn build(store: &mut FormulaStore, atoms: &[String], axioms: &[String]) -> AxiomaticSystem {
    let axioms = axioms
        .iter()
        .map(|t| parse(t, store).expect("demo axioms parse"))
        .collect();
    AxiomaticSystem::new(
        store,
        atoms.iter().cloned().collect(),
        axioms,
        BTreeSet::from([RuleKind::Mp]),
        Vec::new(),
        Bounds::default(),
    )
    .expect("demo systems are valid")
}

/// The ready-made demonstration systems, under `{MP}` with default bounds.
pub fn paper_demo(store: &mut FormulaStore, variant: DemoVariant) -> AxiomaticSystem {
    let owned = |xs: &[&str]| xs.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    match variant {
        DemoVariant::Eq1 => build(store, &owned(&["p", "q"]), &owned(&["(p | ~p) -> q"])),
        DemoVariant::TwoBranch => build(
            store,
            &owned(&["rh", "y"]),
            &owned(&["rh -> y", "~rh -> y"]),
        ),
    }
}

/// `(p_i | ~p_i) -> q` for `i` in `1..=n`, under `{MP}`.
pub fn eq1_family(store: &mut FormulaStore, n: usize) -> AxiomaticSystem {
    let mut atoms: Vec<String> = (1..=n).map(|i| format!("p_{i}")).collect();
    let axioms: Vec<String> = atoms
        .iter()
        .map(|p| format!("({p} | ~{p}) -> q"))
        .collect();
    atoms.push("q".to_string());
    build(store, &atoms, &axioms)
}

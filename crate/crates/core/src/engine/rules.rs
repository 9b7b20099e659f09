use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{Formula, FormulaId, FormulaStore};

/// The inference-rule catalog. Declaration order is the canonical rule order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RuleKind {
    /// `φ, φ -> ψ ⊢ ψ`
    Mp,
    /// `φ, ψ ⊢ φ & ψ`
    AndIntro,
    /// `φ & ψ ⊢ φ`
    AndElimL,
    /// `φ & ψ ⊢ ψ`
    AndElimR,
    /// `φ ⊢ φ | σ` and `φ ⊢ σ | φ` for each side formula `σ`
    OrIntro,
    /// `x | ~x` for each side formula `x`
    LemAxiom,
    /// `(x | ~x) -> y ⊢ y`
    LbiRule,
    /// `x -> y, ~x -> y ⊢ y`
    CaseSplit,
}

impl RuleKind {
    pub const ALL: [RuleKind; 8] = [
        RuleKind::Mp,
        RuleKind::AndIntro,
        RuleKind::AndElimL,
        RuleKind::AndElimR,
        RuleKind::OrIntro,
        RuleKind::LemAxiom,
        RuleKind::LbiRule,
        RuleKind::CaseSplit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleKind::Mp => "MP",
            RuleKind::AndIntro => "AND_INTRO",
            RuleKind::AndElimL => "AND_ELIM_L",
            RuleKind::AndElimR => "AND_ELIM_R",
            RuleKind::OrIntro => "OR_INTRO",
            RuleKind::LemAxiom => "LEM_AXIOM",
            RuleKind::LbiRule => "LBI_RULE",
            RuleKind::CaseSplit => "CASE_SPLIT",
        }
    }

    /// Number of premises the rule consumes.
    pub fn arity(self) -> usize {
        match self {
            RuleKind::LemAxiom => 0,
            RuleKind::AndElimL | RuleKind::AndElimR | RuleKind::OrIntro | RuleKind::LbiRule => 1,
            RuleKind::Mp | RuleKind::AndIntro | RuleKind::CaseSplit => 2,
        }
    }

    /// Rules that conclude `y` from an excluded-middle case split.
    pub fn is_case_split_style(self) -> bool {
        matches!(
            self,
            RuleKind::LemAxiom | RuleKind::LbiRule | RuleKind::CaseSplit
        )
    }
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown rule `{0}`")]
pub struct UnknownRule(pub String);

impl FromStr for RuleKind {
    type Err = UnknownRule;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleKind::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| UnknownRule(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{rule} takes {expected} premise(s), got {got}")]
pub struct ArityMismatch {
    pub rule: RuleKind,
    pub expected: usize,
    pub got: usize,
}

/// All conclusions of one application of `rule` to `premises`.
///
/// Returns the empty set when the premises do not have the shape the rule
/// needs. `OrIntro` and `LemAxiom` range over `universe`. No size filtering
/// is applied.
pub fn apply_rule(
    store: &mut FormulaStore,
    rule: RuleKind,
    premises: &[FormulaId],
    universe: &BTreeSet<FormulaId>,
) -> Result<BTreeSet<FormulaId>, ArityMismatch> {
    let mut out = BTreeSet::new();
    apply_bounded(store, rule, premises, universe, usize::MAX, &mut |f| {
        out.insert(f);
    })?;
    Ok(out)
}

/// Like [`apply_rule`], but never interns a conclusion larger than
/// `max_size`. Conclusions are passed to `emit` in a deterministic order.
pub(crate) fn apply_bounded(
    store: &mut FormulaStore,
    rule: RuleKind,
    premises: &[FormulaId],
    universe: &BTreeSet<FormulaId>,
    max_size: usize,
    emit: &mut dyn FnMut(FormulaId),
) -> Result<(), ArityMismatch> {
    if premises.len() != rule.arity() {
        return Err(ArityMismatch {
            rule,
            expected: rule.arity(),
            got: premises.len(),
        });
    }
    let fits = |store: &FormulaStore, parts: &[FormulaId], extra: usize| {
        parts.iter().map(|&f| store.size(f)).sum::<usize>() + extra <= max_size
    };
    match rule {
        RuleKind::Mp => {
            if let Formula::Implies(a, c) = store.node(premises[1]) {
                if a == premises[0] {
                    emit(c);
                }
            }
        }
        RuleKind::AndIntro => {
            if fits(store, premises, 1) {
                emit(store.and(premises[0], premises[1]));
            }
        }
        RuleKind::AndElimL => {
            if let Formula::And(l, _) = store.node(premises[0]) {
                emit(l);
            }
        }
        RuleKind::AndElimR => {
            if let Formula::And(_, r) = store.node(premises[0]) {
                emit(r);
            }
        }
        RuleKind::OrIntro => {
            let phi = premises[0];
            for &side in universe {
                if fits(store, &[phi, side], 1) {
                    emit(store.or(phi, side));
                    emit(store.or(side, phi));
                }
            }
        }
        RuleKind::LemAxiom => {
            for &x in universe {
                if fits(store, &[x, x], 2) {
                    let nx = store.not(x);
                    emit(store.or(x, nx));
                }
            }
        }
        RuleKind::LbiRule => {
            if let Some((_, y)) = store.match_lbi_shape(premises[0]) {
                emit(y);
            }
        }
        RuleKind::CaseSplit => {
            if let (Formula::Implies(x, y), Formula::Implies(nx, y2)) =
                (store.node(premises[0]), store.node(premises[1]))
            {
                if y == y2 && store.node(nx) == Formula::Not(x) {
                    emit(y);
                }
            }
        }
    }
    Ok(())
}

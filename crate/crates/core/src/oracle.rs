//! Classical truth-table semantics.
//!
//! Formulas are evaluated over every assignment at once: a truth table over
//! `n` atoms is a bitset of `2^n` rows packed into `u64` words, where row `i`
//! assigns atom `j` (in sorted name order) the value of bit `j` of `i`.
//! Exhaustive evaluation is capped at [`MAX_ATOMS`] atoms.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{Formula, FormulaId, FormulaStore};

pub const MAX_ATOMS: usize = 20;

/// Truth values for a set of atoms, keyed by name.
pub type Assignment = BTreeMap<String, bool>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Tautology,
    Contradiction,
    Contingent,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("assignment has no value for atom `{0}`")]
    MissingAtom(String),
    #[error("{count} atoms exceed the truth-table limit of {limit}")]
    TooManyAtoms { count: usize, limit: usize },
}

/// Outcome of an entailment query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entailment {
    pub holds: bool,
    /// A model of the axioms falsifying the goal; present iff `!holds`.
    pub countermodel: Option<Assignment>,
}

/// Evaluates `f` under `a`. Extra entries in `a` are ignored.
pub fn evaluate(store: &FormulaStore, f: FormulaId, a: &Assignment) -> Result<bool, OracleError> {
    Ok(match store.node(f) {
        Formula::Atom(sym) => {
            let name = store.symbol_name(sym);
            *a.get(name)
                .ok_or_else(|| OracleError::MissingAtom(name.to_string()))?
        }
        Formula::Not(c) => !evaluate(store, c, a)?,
        Formula::And(l, r) => {
            let l = evaluate(store, l, a)?;
            let r = evaluate(store, r, a)?;
            l && r
        }
        Formula::Or(l, r) => {
            let l = evaluate(store, l, a)?;
            let r = evaluate(store, r, a)?;
            l || r
        }
        Formula::Implies(l, r) => {
            let l = evaluate(store, l, a)?;
            let r = evaluate(store, r, a)?;
            !l || r
        }
    })
}

/// Memoising bitset evaluator over a fixed atom universe.
pub struct TruthTables<'s> {
    store: &'s FormulaStore,
    atoms: Vec<String>,
    rows: usize,
    words: usize,
    memo: HashMap<FormulaId, Vec<u64>>,
}

impl<'s> TruthTables<'s> {
    pub fn new(store: &'s FormulaStore, atoms: BTreeSet<String>) -> Result<Self, OracleError> {
        if atoms.len() > MAX_ATOMS {
            return Err(OracleError::TooManyAtoms {
                count: atoms.len(),
                limit: MAX_ATOMS,
            });
        }
        let rows = 1usize << atoms.len();
        Ok(TruthTables {
            store,
            atoms: atoms.into_iter().collect(),
            rows,
            words: rows.div_ceil(64),
            memo: HashMap::new(),
        })
    }

    /// Universe covering every atom of `formulas`.
    pub fn covering<I>(store: &'s FormulaStore, formulas: I) -> Result<Self, OracleError>
    where
        I: IntoIterator<Item = FormulaId>,
    {
        let mut atoms = BTreeSet::new();
        for f in formulas {
            store.collect_atoms(f, &mut atoms);
        }
        Self::new(store, atoms)
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    fn last_mask(&self) -> u64 {
        match self.rows % 64 {
            0 => u64::MAX,
            r => (1u64 << r) - 1,
        }
    }

    fn ones(&self) -> Vec<u64> {
        let mut v = vec![u64::MAX; self.words];
        *v.last_mut().unwrap() = self.last_mask();
        v
    }

    fn atom_table(&self, index: usize) -> Vec<u64> {
        // Within a word, bit b is row (w*64 + b); atom j is bit j of the row.
        const PATTERNS: [u64; 6] = [
            0xAAAA_AAAA_AAAA_AAAA,
            0xCCCC_CCCC_CCCC_CCCC,
            0xF0F0_F0F0_F0F0_F0F0,
            0xFF00_FF00_FF00_FF00,
            0xFFFF_0000_FFFF_0000,
            0xFFFF_FFFF_0000_0000,
        ];
        let mut v: Vec<u64> = (0..self.words)
            .map(|w| {
                if index < 6 {
                    PATTERNS[index]
                } else if (w >> (index - 6)) & 1 == 1 {
                    u64::MAX
                } else {
                    0
                }
            })
            .collect();
        *v.last_mut().unwrap() &= self.last_mask();
        v
    }

    /// Truth table of `f`, one bit per assignment.
    pub fn table(&mut self, f: FormulaId) -> Result<&[u64], OracleError> {
        if !self.memo.contains_key(&f) {
            let t = self.compute(f)?;
            self.memo.insert(f, t);
        }
        Ok(&self.memo[&f])
    }

    fn compute(&mut self, f: FormulaId) -> Result<Vec<u64>, OracleError> {
        let mask = self.last_mask();
        Ok(match self.store.node(f) {
            Formula::Atom(sym) => {
                let name = self.store.symbol_name(sym);
                let index = self
                    .atoms
                    .binary_search_by(|a| a.as_str().cmp(name))
                    .map_err(|_| OracleError::MissingAtom(name.to_string()))?;
                self.atom_table(index)
            }
            Formula::Not(c) => {
                let mut t: Vec<u64> = self.table(c)?.iter().map(|w| !w).collect();
                *t.last_mut().unwrap() &= mask;
                t
            }
            Formula::And(l, r) => self.combine(l, r, |a, b| a & b)?,
            Formula::Or(l, r) => self.combine(l, r, |a, b| a | b)?,
            Formula::Implies(l, r) => {
                let mut t = self.combine(l, r, |a, b| !a | b)?;
                *t.last_mut().unwrap() &= mask;
                t
            }
        })
    }

    fn combine(
        &mut self,
        l: FormulaId,
        r: FormulaId,
        op: impl Fn(u64, u64) -> u64,
    ) -> Result<Vec<u64>, OracleError> {
        let lt = self.table(l)?.to_vec();
        let rt = self.table(r)?;
        Ok(lt.iter().zip(rt).map(|(&a, &b)| op(a, b)).collect())
    }

    /// Conjunction of the tables of `axioms`: the set of their common models.
    pub fn models(&mut self, axioms: &[FormulaId]) -> Result<Vec<u64>, OracleError> {
        let mut acc = self.ones();
        for &ax in axioms {
            let t = self.table(ax)?;
            acc.iter_mut().zip(t).for_each(|(a, b)| *a &= b);
        }
        Ok(acc)
    }

    /// The assignment encoded by row `row`.
    pub fn assignment(&self, row: usize) -> Assignment {
        self.atoms
            .iter()
            .enumerate()
            .map(|(j, name)| (name.clone(), (row >> j) & 1 == 1))
            .collect()
    }

    pub fn classify(&mut self, f: FormulaId) -> Result<Verdict, OracleError> {
        let ones = self.ones();
        let t = self.table(f)?;
        Ok(if t == ones.as_slice() {
            Verdict::Tautology
        } else if t.iter().all(|&w| w == 0) {
            Verdict::Contradiction
        } else {
            Verdict::Contingent
        })
    }

    /// Checks `models ⊨ f` where `models` came from [`Self::models`].
    pub fn entails_from(&mut self, models: &[u64], f: FormulaId) -> Result<Entailment, OracleError> {
        let t = self.table(f)?;
        let bad = models
            .iter()
            .zip(t)
            .enumerate()
            .find_map(|(w, (&m, &v))| {
                let miss = m & !v;
                (miss != 0).then(|| w * 64 + miss.trailing_zeros() as usize)
            });
        Ok(match bad {
            None => Entailment {
                holds: true,
                countermodel: None,
            },
            Some(row) => Entailment {
                holds: false,
                countermodel: Some(self.assignment(row)),
            },
        })
    }
}

/// Tautology / contradiction / contingent classification of `f`.
pub fn classify(store: &FormulaStore, f: FormulaId) -> Result<Verdict, OracleError> {
    TruthTables::covering(store, [f])?.classify(f)
}

/// Does every model of `axioms` satisfy `f`? Returns a countermodel if not.
pub fn entails(
    store: &FormulaStore,
    axioms: &[FormulaId],
    f: FormulaId,
) -> Result<Entailment, OracleError> {
    let mut tables = TruthTables::covering(store, axioms.iter().copied().chain([f]))?;
    let models = tables.models(axioms)?;
    tables.entails_from(&models, f)
}

/// Neither `x` nor `~x` follows from `axioms`.
///
/// Equivalently, the axioms have a model making `x` true and one making it
/// false; unsatisfiable axioms therefore make nothing independent.
pub fn independent(
    store: &FormulaStore,
    axioms: &[FormulaId],
    x: FormulaId,
) -> Result<bool, OracleError> {
    let mut tables = TruthTables::covering(store, axioms.iter().copied().chain([x]))?;
    let models = tables.models(axioms)?;
    let t = tables.table(x)?;
    let some_true = models.iter().zip(t).any(|(&m, &v)| m & v != 0);
    let some_false = models.iter().zip(t).any(|(&m, &v)| m & !v != 0);
    Ok(some_true && some_false)
}

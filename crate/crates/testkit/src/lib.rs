//! Test support for `lbi-core`.
//!
//! [`naive_closure`] recomputes the bounded deductive closure of a system
//! using its own boxed formula trees and its own rule implementations: every
//! rule is applied to every premise tuple of the whole current set until
//! nothing changes. It shares no code with the engine's semi-naive
//! saturation beyond the rule catalog enum.

use std::collections::BTreeSet;

use lbi_core::{AxiomaticSystem, Bounds, Formula, FormulaId, FormulaStore, RuleKind};
use rand::seq::SliceRandom;
use rand::Rng;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tree {
    Atom(String),
    Not(Box<Tree>),
    And(Box<Tree>, Box<Tree>),
    Or(Box<Tree>, Box<Tree>),
    Implies(Box<Tree>, Box<Tree>),
}

impl Tree {
    pub fn atom(name: &str) -> Tree {
        Tree::Atom(name.to_string())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Tree) -> Tree {
        Tree::Not(Box::new(a))
    }

    pub fn and(a: Tree, b: Tree) -> Tree {
        Tree::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Tree, b: Tree) -> Tree {
        Tree::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Tree, b: Tree) -> Tree {
        Tree::Implies(Box::new(a), Box::new(b))
    }

    pub fn size(&self) -> usize {
        match self {
            Tree::Atom(_) => 1,
            Tree::Not(a) => 1 + a.size(),
            Tree::And(a, b) | Tree::Or(a, b) | Tree::Implies(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn from_store(store: &FormulaStore, id: FormulaId) -> Tree {
        match store.node(id) {
            Formula::Atom(sym) => Tree::atom(store.symbol_name(sym)),
            Formula::Not(a) => Tree::not(Tree::from_store(store, a)),
            Formula::And(a, b) => Tree::and(Tree::from_store(store, a), Tree::from_store(store, b)),
            Formula::Or(a, b) => Tree::or(Tree::from_store(store, a), Tree::from_store(store, b)),
            Formula::Implies(a, b) => {
                Tree::implies(Tree::from_store(store, a), Tree::from_store(store, b))
            }
        }
    }

    pub fn intern(&self, store: &mut FormulaStore) -> FormulaId {
        match self {
            Tree::Atom(name) => store.atom(name).expect("valid atom"),
            Tree::Not(a) => {
                let a = a.intern(store);
                store.not(a)
            }
            Tree::And(a, b) => {
                let (a, b) = (a.intern(store), b.intern(store));
                store.and(a, b)
            }
            Tree::Or(a, b) => {
                let (a, b) = (a.intern(store), b.intern(store));
                store.or(a, b)
            }
            Tree::Implies(a, b) => {
                let (a, b) = (a.intern(store), b.intern(store));
                store.implies(a, b)
            }
        }
    }

    fn subformulas(&self, out: &mut BTreeSet<Tree>) {
        if !out.insert(self.clone()) {
            return;
        }
        match self {
            Tree::Atom(_) => {}
            Tree::Not(a) => a.subformulas(out),
            Tree::And(a, b) | Tree::Or(a, b) | Tree::Implies(a, b) => {
                a.subformulas(out);
                b.subformulas(out);
            }
        }
    }
}

/// Bounded closure of `axioms` under `rules`, by naive iteration.
pub fn naive_closure(
    axioms: &[Tree],
    side_formulas: &[Tree],
    rules: &BTreeSet<RuleKind>,
    max_size: usize,
) -> BTreeSet<Tree> {
    let mut universe = BTreeSet::new();
    for t in axioms.iter().chain(side_formulas) {
        t.subformulas(&mut universe);
    }
    let mut known: BTreeSet<Tree> = axioms.iter().filter(|t| t.size() <= max_size).cloned().collect();
    if rules.contains(&RuleKind::LemAxiom) {
        for x in &universe {
            known.insert(Tree::or(x.clone(), Tree::not(x.clone())));
        }
        known.retain(|t| t.size() <= max_size);
    }
    loop {
        let current: Vec<Tree> = known.iter().cloned().collect();
        let sizes: Vec<usize> = current.iter().map(Tree::size).collect();
        let mut fresh = Vec::new();
        for rule in rules {
            match rule {
                RuleKind::LemAxiom => {}
                RuleKind::Mp => {
                    for b in &current {
                        if let Tree::Implies(a, c) = b {
                            if known.contains(a.as_ref()) {
                                fresh.push(c.as_ref().clone());
                            }
                        }
                    }
                }
                RuleKind::AndIntro => {
                    for (a, sa) in current.iter().zip(&sizes) {
                        for (b, sb) in current.iter().zip(&sizes) {
                            if sa + sb < max_size {
                                fresh.push(Tree::and(a.clone(), b.clone()));
                            }
                        }
                    }
                }
                RuleKind::AndElimL | RuleKind::AndElimR => {
                    for t in &current {
                        if let Tree::And(a, b) = t {
                            let picked = if *rule == RuleKind::AndElimL { a } else { b };
                            fresh.push(picked.as_ref().clone());
                        }
                    }
                }
                RuleKind::OrIntro => {
                    for (t, st) in current.iter().zip(&sizes) {
                        for s in universe.iter().filter(|s| st + s.size() < max_size) {
                            fresh.push(Tree::or(t.clone(), s.clone()));
                            fresh.push(Tree::or(s.clone(), t.clone()));
                        }
                    }
                }
                RuleKind::LbiRule => {
                    for t in &current {
                        if let Tree::Implies(d, y) = t {
                            if let Tree::Or(l, r) = d.as_ref() {
                                let shaped = matches!(r.as_ref(), Tree::Not(x) if x == l)
                                    || matches!(l.as_ref(), Tree::Not(x) if x == r);
                                if shaped {
                                    fresh.push(y.as_ref().clone());
                                }
                            }
                        }
                    }
                }
                RuleKind::CaseSplit => {
                    for t in &current {
                        if let Tree::Implies(x, y) = t {
                            let other = Tree::implies(Tree::not(x.as_ref().clone()), y.as_ref().clone());
                            if known.contains(&other) {
                                fresh.push(y.as_ref().clone());
                            }
                        }
                    }
                }
            }
        }
        let before = known.len();
        known.extend(fresh.into_iter().filter(|t| t.size() <= max_size));
        if known.len() == before {
            return known;
        }
    }
}

/// The naive closure of `system`, read from `store`.
pub fn naive_closure_of(store: &FormulaStore, system: &AxiomaticSystem) -> BTreeSet<Tree> {
    naive_closure_with(store, system, system.rules())
}

pub fn naive_closure_with(
    store: &FormulaStore,
    system: &AxiomaticSystem,
    rules: &BTreeSet<RuleKind>,
) -> BTreeSet<Tree> {
    let axioms: Vec<Tree> = system.axioms().iter().map(|&f| Tree::from_store(store, f)).collect();
    let side: Vec<Tree> = system
        .side_formulas()
        .iter()
        .map(|&f| Tree::from_store(store, f))
        .collect();
    naive_closure(&axioms, &side, rules, system.bounds().max_formula_size)
}

/// A uniformly shaped random formula with exactly `size` nodes.
pub fn random_tree<R: Rng>(rng: &mut R, atoms: &[&str], size: usize) -> Tree {
    assert!(size >= 1);
    if size == 1 {
        return Tree::atom(atoms.choose(rng).unwrap());
    }
    if size == 2 || rng.gen_bool(0.2) {
        return Tree::not(random_tree(rng, atoms, size - 1));
    }
    let left = rng.gen_range(1..=size - 2);
    let l = random_tree(rng, atoms, left);
    let r = random_tree(rng, atoms, size - 1 - left);
    match rng.gen_range(0..3) {
        0 => Tree::and(l, r),
        1 => Tree::or(l, r),
        _ => Tree::implies(l, r),
    }
}

pub const BASE_RULES: [RuleKind; 6] = [
    RuleKind::Mp,
    RuleKind::AndIntro,
    RuleKind::AndElimL,
    RuleKind::AndElimR,
    RuleKind::OrIntro,
    RuleKind::LemAxiom,
];

/// A small random system: at most 3 atoms, 1 to 3 axioms of size at most
/// 5, base rules sampled from [`BASE_RULES`], and a size bound of at most 7.
pub fn random_system<R: Rng>(rng: &mut R, store: &mut FormulaStore) -> AxiomaticSystem {
    let pool = ["a", "b", "c"];
    let atoms = &pool[..rng.gen_range(1..=3)];
    let count = rng.gen_range(1..=3);
    let axioms: Vec<FormulaId> = (0..count)
        .map(|_| {
            let size = rng.gen_range(1..=5);
            random_tree(rng, atoms, size).intern(store)
        })
        .collect();
    let largest = axioms.iter().map(|&f| store.size(f)).max().unwrap();
    let max_formula_size = rng.gen_range(largest.max(3)..=7);
    let mut rules = BTreeSet::new();
    for rule in BASE_RULES {
        if rng.gen_bool(0.5) {
            rules.insert(rule);
        }
    }
    if rules.is_empty() {
        rules.insert(RuleKind::Mp);
    }
    AxiomaticSystem::new(
        store,
        atoms.iter().map(|s| s.to_string()).collect(),
        axioms,
        rules,
        Vec::new(),
        Bounds {
            max_formula_size,
            max_generations: 1000,
            max_theorems: 1_000_000,
        },
    )
    .expect("random system is valid")
}

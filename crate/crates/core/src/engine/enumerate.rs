use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::rules::{apply_bounded, RuleKind};
use super::system::AxiomaticSystem;
use super::{Justification, ProofStep};
use crate::formula::{Formula, FormulaId, FormulaStore};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum StopReason {
    /// A generation produced no new theorem within the size bound.
    FixedPoint,
    GenerationLimit,
    TheoremLimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EnumerationStats {
    /// Derivation rounds executed after generation 0.
    pub generations_run: usize,
    pub fixed_point_reached: bool,
    pub stop_reason: StopReason,
    /// In-bound conclusions produced by rule applications (and axiom
    /// schemas), counting duplicates.
    pub rule_applications: usize,
    /// Produced conclusions that were already theorems or already produced
    /// earlier in the same generation.
    pub dedup_hits: usize,
}

/// Discovery-ordered theorems with one proof step per theorem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationResult {
    pub theorems: Vec<FormulaId>,
    pub steps: Vec<ProofStep>,
    /// Generation in which each theorem was discovered.
    pub generations: Vec<usize>,
    pub stats: EnumerationStats,
}

impl EnumerationResult {
    pub fn index_of(&self, f: FormulaId) -> Option<usize> {
        self.theorems.iter().position(|&t| t == f)
    }

    pub fn contains(&self, f: FormulaId) -> bool {
        self.theorems.contains(&f)
    }

    pub fn len(&self) -> usize {
        self.theorems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theorems.is_empty()
    }
}

/// Preferred justification for a candidate: lowest (justification, premises).
type Candidates = BTreeMap<FormulaId, (Justification, Vec<usize>)>;

struct Saturation<'a> {
    store: &'a mut FormulaStore,
    system: &'a AxiomaticSystem,
    max_size: usize,
    known: HashMap<FormulaId, usize>,
    theorems: Vec<FormulaId>,
    steps: Vec<ProofStep>,
    generations: Vec<usize>,
    /// Theorem indices of implications, keyed by antecedent.
    by_antecedent: HashMap<FormulaId, Vec<usize>>,
    rule_applications: usize,
    dedup_hits: usize,
}

impl Saturation<'_> {
    fn offer(&mut self, candidates: &mut Candidates, f: FormulaId, just: Justification, premises: Vec<usize>) {
        self.rule_applications += 1;
        if self.known.contains_key(&f) {
            self.dedup_hits += 1;
            return;
        }
        match candidates.get_mut(&f) {
            Some(existing) => {
                self.dedup_hits += 1;
                if (just, &premises) < (existing.0, &existing.1) {
                    *existing = (just, premises);
                }
            }
            None => {
                candidates.insert(f, (just, premises));
            }
        }
    }

    fn apply(&mut self, candidates: &mut Candidates, rule: RuleKind, premises: &[usize]) {
        let ids: Vec<FormulaId> = premises.iter().map(|&i| self.theorems[i]).collect();
        let mut out = Vec::new();
        apply_bounded(
            self.store,
            rule,
            &ids,
            self.system.universe(),
            self.max_size,
            &mut |f| out.push(f),
        )
        .expect("premise count matches rule arity");
        for f in out {
            if self.store.size(f) <= self.max_size {
                self.offer(candidates, f, Justification::Rule(rule), premises.to_vec());
            }
        }
    }

    /// Appends candidates in (size, rendering) order; returns how many were
    /// added and whether the theorem limit cut the generation short.
    fn commit(&mut self, candidates: Candidates, generation: usize) -> (usize, bool) {
        let mut batch: Vec<(usize, String, FormulaId, Justification, Vec<usize>)> = candidates
            .into_iter()
            .map(|(f, (just, premises))| (self.store.size(f), self.store.render(f), f, just, premises))
            .collect();
        batch.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
        let room = self
            .system
            .bounds()
            .max_theorems
            .saturating_sub(self.theorems.len());
        let truncated = batch.len() > room;
        batch.truncate(room);
        let added = batch.len();
        for (_, _, f, justification, premises) in batch {
            let index = self.theorems.len();
            self.known.insert(f, index);
            self.theorems.push(f);
            self.generations.push(generation);
            if let Formula::Implies(a, _) = self.store.node(f) {
                self.by_antecedent.entry(a).or_default().push(index);
            }
            self.steps.push(ProofStep {
                conclusion: f,
                justification,
                premises,
            });
        }
        (added, truncated)
    }

    fn generation_zero(&mut self) -> Candidates {
        let mut candidates = Candidates::new();
        for &axiom in self.system.axioms() {
            if self.store.size(axiom) <= self.max_size {
                self.offer(&mut candidates, axiom, Justification::Axiom, Vec::new());
            }
        }
        if self.system.has_rule(RuleKind::LemAxiom) {
            self.apply(&mut candidates, RuleKind::LemAxiom, &[]);
        }
        candidates
    }

    /// Every conclusion whose premise tuple touches `delta_start..`.
    fn next_generation(&mut self, delta_start: usize) -> Candidates {
        let mut candidates = Candidates::new();
        let len = self.theorems.len();
        let rules: Vec<RuleKind> = self.system.rules().iter().copied().collect();
        for rule in rules {
            match rule {
                RuleKind::LemAxiom => {}
                RuleKind::AndElimL | RuleKind::AndElimR | RuleKind::OrIntro | RuleKind::LbiRule => {
                    for i in delta_start..len {
                        self.apply(&mut candidates, rule, &[i]);
                    }
                }
                RuleKind::Mp => {
                    // New implication, any minor premise.
                    for j in delta_start..len {
                        if let Formula::Implies(a, _) = self.store.node(self.theorems[j]) {
                            if let Some(&i) = self.known.get(&a) {
                                self.apply(&mut candidates, rule, &[i, j]);
                            }
                        }
                    }
                    // New minor premise, old implication.
                    for i in delta_start..len {
                        let olds: Vec<usize> = self
                            .by_antecedent
                            .get(&self.theorems[i])
                            .map(|v| v.iter().copied().filter(|&j| j < delta_start).collect())
                            .unwrap_or_default();
                        for j in olds {
                            self.apply(&mut candidates, rule, &[i, j]);
                        }
                    }
                }
                RuleKind::AndIntro => {
                    for i in 0..len {
                        let si = self.store.size(self.theorems[i]);
                        if si + 2 > self.max_size {
                            continue;
                        }
                        let lo = if i < delta_start { delta_start } else { 0 };
                        for j in lo..len {
                            if si + self.store.size(self.theorems[j]) < self.max_size {
                                self.apply(&mut candidates, rule, &[i, j]);
                            }
                        }
                    }
                }
                RuleKind::CaseSplit => {
                    for i in 0..len {
                        let Formula::Implies(x, y) = self.store.node(self.theorems[i]) else {
                            continue;
                        };
                        let Some(nx) = self.store.find(&Formula::Not(x)) else {
                            continue;
                        };
                        let Some(other) = self.store.find(&Formula::Implies(nx, y)) else {
                            continue;
                        };
                        if let Some(&j) = self.known.get(&other) {
                            if i >= delta_start || j >= delta_start {
                                self.apply(&mut candidates, rule, &[i, j]);
                            }
                        }
                    }
                }
            }
        }
        candidates
    }
}

/// Generation-based semi-naive saturation of `system`.
///
/// Generation 0 holds the axioms and, when `LEM_AXIOM` is enabled, the
/// excluded-middle instances over the side-formula universe. Generation
/// `k + 1` holds every in-bound conclusion not seen before whose premise
/// tuple includes a generation-`k` theorem. Each generation is ordered by
/// (size, canonical rendering), so the theorem order is a function of the
/// system alone.
pub fn enumerate(store: &mut FormulaStore, system: &AxiomaticSystem) -> EnumerationResult {
    let bounds = system.bounds();
    let mut sat = Saturation {
        store,
        system,
        max_size: bounds.max_formula_size,
        known: HashMap::new(),
        theorems: Vec::new(),
        steps: Vec::new(),
        generations: Vec::new(),
        by_antecedent: HashMap::new(),
        rule_applications: 0,
        dedup_hits: 0,
    };

    let zero = sat.generation_zero();
    let (_, mut truncated) = sat.commit(zero, 0);
    let mut generations_run = 0;
    let mut stop_reason = StopReason::GenerationLimit;
    let mut delta_start = 0;
    if truncated {
        stop_reason = StopReason::TheoremLimit;
    } else {
        for generation in 1..=bounds.max_generations {
            generations_run = generation;
            let candidates = sat.next_generation(delta_start);
            delta_start = sat.theorems.len();
            let (added, cut) = sat.commit(candidates, generation);
            truncated = cut;
            if truncated {
                stop_reason = StopReason::TheoremLimit;
                break;
            }
            if added == 0 {
                stop_reason = StopReason::FixedPoint;
                break;
            }
        }
    }

    EnumerationResult {
        theorems: sat.theorems,
        steps: sat.steps,
        generations: sat.generations,
        stats: EnumerationStats {
            generations_run,
            fixed_point_reached: stop_reason == StopReason::FixedPoint,
            stop_reason,
            rule_applications: sat.rule_applications,
            dedup_hits: sat.dedup_hits,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::load_system;

    fn texts(store: &FormulaStore, r: &EnumerationResult) -> Vec<String> {
        r.theorems.iter().map(|&f| store.render(f)).collect()
    }

    #[test]
    fn excluded_middle_demo_stalls_immediately() {
        let mut s = FormulaStore::new();
        let sys = load_system(
            &mut s,
            r#"{"axioms": ["(p | ~p) -> q"], "rules": ["MP"], "bounds": {"max_formula_size": 8, "max_generations": 10}}"#,
        )
        .unwrap();
        let r = enumerate(&mut s, &sys);
        assert_eq!(texts(&s, &r), ["(p | ~p) -> q"]);
        assert!(r.stats.fixed_point_reached);
        assert_eq!(r.stats.generations_run, 1);
    }

    #[test]
    fn single_modus_ponens_step() {
        let mut s = FormulaStore::new();
        let sys = load_system(&mut s, r#"{"axioms": ["p", "p -> q"]}"#).unwrap();
        let r = enumerate(&mut s, &sys);
        assert_eq!(texts(&s, &r), ["p", "p -> q", "q"]);
        assert_eq!(r.generations, [0, 0, 1]);
        assert_eq!(r.steps[2].justification, Justification::Rule(RuleKind::Mp));
        assert_eq!(r.steps[2].premises, [0, 1]);
        assert!(r.stats.fixed_point_reached);
    }

    #[test]
    fn excluded_middle_axiom_unlocks_conclusion() {
        let mut s = FormulaStore::new();
        let sys = load_system(&mut s, r#"{"axioms": ["(p | ~p) -> q"], "rules": ["MP", "LEM_AXIOM"]}"#)
            .unwrap();
        let r = enumerate(&mut s, &sys);
        let t = texts(&s, &r);
        assert!(t.contains(&"p | ~p".to_string()));
        assert!(t.contains(&"q".to_string()));
    }

    #[test]
    fn empty_axioms() {
        let mut s = FormulaStore::new();
        let sys = load_system(&mut s, r#"{"axioms": [], "rules": ["MP", "LEM_AXIOM"]}"#).unwrap();
        let r = enumerate(&mut s, &sys);
        assert!(r.is_empty());
        assert!(r.stats.fixed_point_reached);
        let sys = load_system(
            &mut s,
            r#"{"axioms": [], "rules": ["LEM_AXIOM"], "side_formulas": ["p"]}"#,
        )
        .unwrap();
        let r = enumerate(&mut s, &sys);
        assert_eq!(texts(&s, &r), ["p | ~p"]);
        assert_eq!(r.steps[0].justification, Justification::Rule(RuleKind::LemAxiom));
    }

    #[test]
    fn generation_limit_is_reported() {
        let mut s = FormulaStore::new();
        let sys = load_system(
            &mut s,
            r#"{"axioms": ["p", "q"], "rules": ["AND_INTRO"], "bounds": {"max_formula_size": 7, "max_generations": 1}}"#,
        )
        .unwrap();
        let r = enumerate(&mut s, &sys);
        assert!(!r.stats.fixed_point_reached);
        assert_eq!(r.stats.stop_reason, StopReason::GenerationLimit);
        assert_eq!(texts(&s, &r), ["p", "q", "p & p", "p & q", "q & p", "q & q"]);
    }

    #[test]
    fn theorem_limit_truncates_in_canonical_order() {
        let mut s = FormulaStore::new();
        let sys = load_system(
            &mut s,
            r#"{"axioms": ["p", "q"], "rules": ["AND_INTRO"], "bounds": {"max_theorems": 4}}"#,
        )
        .unwrap();
        let r = enumerate(&mut s, &sys);
        assert_eq!(r.stats.stop_reason, StopReason::TheoremLimit);
        assert_eq!(texts(&s, &r), ["p", "q", "p & p", "p & q"]);
    }

    #[test]
    fn generation_zero_is_sorted_and_deduplicated() {
        let mut s = FormulaStore::new();
        let sys = load_system(
            &mut s,
            r#"{"axioms": ["q -> p", "p | ~p", "r", "r"], "rules": ["LEM_AXIOM"], "bounds": {"max_formula_size": 5}}"#,
        )
        .unwrap();
        let r = enumerate(&mut s, &sys);
        assert_eq!(texts(&s, &r), ["r", "q -> p", "p | ~p", "q | ~q", "r | ~r"]);
        // an axiom that is also a schema instance is recorded as an axiom
        assert_eq!(r.steps[2].justification, Justification::Axiom);
    }

    #[test]
    fn elimination_does_not_cycle() {
        let mut s = FormulaStore::new();
        let sys = load_system(
            &mut s,
            r#"{"axioms": ["p & q"], "rules": ["AND_INTRO", "AND_ELIM_L", "AND_ELIM_R"], "bounds": {"max_formula_size": 3}}"#,
        )
        .unwrap();
        let r = enumerate(&mut s, &sys);
        assert!(r.stats.fixed_point_reached);
        assert_eq!(texts(&s, &r), ["p & q", "p", "q", "p & p", "q & p", "q & q"]);
    }

    #[test]
    fn case_split_and_excluded_middle_rule() {
        let mut s = FormulaStore::new();
        let sys = load_system(&mut s, r#"{"axioms": ["a -> y", "~a -> y"], "rules": ["CASE_SPLIT"]}"#).unwrap();
        let r = enumerate(&mut s, &sys);
        assert_eq!(texts(&s, &r), ["a -> y", "~a -> y", "y"]);
        assert_eq!(r.steps[2].premises, [0, 1]);
        let sys = load_system(&mut s, r#"{"axioms": ["(p | ~p) -> q"], "rules": ["LBI_RULE"]}"#).unwrap();
        let r = enumerate(&mut s, &sys);
        assert_eq!(texts(&s, &r), ["(p | ~p) -> q", "q"]);
    }
}

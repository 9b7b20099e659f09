//! Interned propositional formulas.
//!
//! Every formula lives in a [`FormulaStore`] and is referred to by a dense
//! [`FormulaId`]. Interning is perfect: two ids from the same store are equal
//! exactly when the formulas they denote are structurally identical, so
//! equality, hashing and set membership on ids are all structural.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
#[cfg(debug_assertions)]
use std::sync::atomic::{AtomicU32, Ordering};

use thiserror::Error;

#[cfg(debug_assertions)]
static NEXT_STORE_TAG: AtomicU32 = AtomicU32::new(1);

/// Handle to an interned formula.
///
/// In debug builds the handle also carries the tag of the store that issued
/// it, and every store access asserts that the tags agree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FormulaId {
    index: u32,
    #[cfg(debug_assertions)]
    store: u32,
}

impl FormulaId {
    /// Position of this formula in its store's node table.
    pub fn index(self) -> usize {
        self.index as usize
    }
}

/// Handle to an interned atom name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(u32);

/// One node of a formula. Children are ids in the same store.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(Symbol),
    Not(FormulaId),
    And(FormulaId, FormulaId),
    Or(FormulaId, FormulaId),
    Implies(FormulaId, FormulaId),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("invalid atom name `{0}`: expected [a-z][a-z0-9_]*")]
    InvalidAtom(String),
}

/// Returns true when `name` matches `[a-z][a-z0-9_]*`.
pub fn is_valid_atom_name(name: &str) -> bool {
    let mut bytes = name.bytes();
    match bytes.next() {
        Some(b'a'..=b'z') => {}
        _ => return false,
    }
    bytes.all(|b| matches!(b, b'a'..=b'z' | b'0'..=b'9' | b'_'))
}

/// Append-only, hash-consed formula table.
#[derive(Debug, Clone)]
pub struct FormulaStore {
    nodes: Vec<Formula>,
    sizes: Vec<u32>,
    dedup: HashMap<Formula, FormulaId>,
    symbols: Vec<String>,
    symbol_index: HashMap<String, Symbol>,
    #[cfg(debug_assertions)]
    tag: u32,
}

impl Default for FormulaStore {
    fn default() -> Self {
        Self::new()
    }
}

impl FormulaStore {
    pub fn new() -> Self {
        FormulaStore {
            nodes: Vec::new(),
            sizes: Vec::new(),
            dedup: HashMap::new(),
            symbols: Vec::new(),
            symbol_index: HashMap::new(),
            #[cfg(debug_assertions)]
            tag: NEXT_STORE_TAG.fetch_add(1, Ordering::Relaxed),
        }
    }

    /// Number of distinct formulas interned so far.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn make_id(&self, index: usize) -> FormulaId {
        FormulaId {
            index: u32::try_from(index).expect("formula store overflow"),
            #[cfg(debug_assertions)]
            store: self.tag,
        }
    }

    #[inline]
    fn check(&self, id: FormulaId) {
        #[cfg(debug_assertions)]
        assert_eq!(
            id.store, self.tag,
            "FormulaId from a different FormulaStore"
        );
        debug_assert!(id.index() < self.nodes.len());
        let _ = id;
    }

    fn symbol(&mut self, name: &str) -> Result<Symbol, FormulaError> {
        if let Some(&sym) = self.symbol_index.get(name) {
            return Ok(sym);
        }
        if !is_valid_atom_name(name) {
            return Err(FormulaError::InvalidAtom(name.to_string()));
        }
        let sym = Symbol(self.symbols.len() as u32);
        self.symbols.push(name.to_string());
        self.symbol_index.insert(name.to_string(), sym);
        Ok(sym)
    }

    /// Interns a node whose children already belong to this store.
    pub fn intern(&mut self, node: Formula) -> FormulaId {
        let size = match node {
            Formula::Atom(sym) => {
                debug_assert!((sym.0 as usize) < self.symbols.len());
                1
            }
            Formula::Not(c) => {
                self.check(c);
                1 + self.sizes[c.index()]
            }
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                self.check(l);
                self.check(r);
                1 + self.sizes[l.index()] + self.sizes[r.index()]
            }
        };
        if let Some(&id) = self.dedup.get(&node) {
            return id;
        }
        let id = self.make_id(self.nodes.len());
        self.nodes.push(node);
        self.sizes.push(size);
        self.dedup.insert(node, id);
        id
    }

    /// Looks up an already-interned node without inserting it.
    pub fn find(&self, node: &Formula) -> Option<FormulaId> {
        self.dedup.get(node).copied()
    }

    /// Looks up an atom by name without inserting it.
    pub fn find_atom(&self, name: &str) -> Option<FormulaId> {
        let sym = *self.symbol_index.get(name)?;
        self.find(&Formula::Atom(sym))
    }

    pub fn atom(&mut self, name: &str) -> Result<FormulaId, FormulaError> {
        let sym = self.symbol(name)?;
        Ok(self.intern(Formula::Atom(sym)))
    }

    pub fn not(&mut self, child: FormulaId) -> FormulaId {
        self.intern(Formula::Not(child))
    }

    pub fn and(&mut self, left: FormulaId, right: FormulaId) -> FormulaId {
        self.intern(Formula::And(left, right))
    }

    pub fn or(&mut self, left: FormulaId, right: FormulaId) -> FormulaId {
        self.intern(Formula::Or(left, right))
    }

    pub fn implies(&mut self, antecedent: FormulaId, consequent: FormulaId) -> FormulaId {
        self.intern(Formula::Implies(antecedent, consequent))
    }

    pub fn node(&self, id: FormulaId) -> Formula {
        self.check(id);
        self.nodes[id.index()]
    }

    pub fn symbol_name(&self, sym: Symbol) -> &str {
        &self.symbols[sym.0 as usize]
    }

    /// Name of the atom `id`, or `None` for compound formulas.
    pub fn atom_name(&self, id: FormulaId) -> Option<&str> {
        match self.node(id) {
            Formula::Atom(sym) => Some(self.symbol_name(sym)),
            _ => None,
        }
    }

    /// AST node count. Atoms have size 1; each connective adds 1.
    pub fn size(&self, id: FormulaId) -> usize {
        self.check(id);
        self.sizes[id.index()] as usize
    }

    /// Sorted distinct atom names occurring in `id`.
    pub fn atoms_of(&self, id: FormulaId) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_atoms(id, &mut out);
        out
    }

    pub(crate) fn collect_atoms(&self, id: FormulaId, out: &mut BTreeSet<String>) {
        let mut stack = vec![id];
        while let Some(f) = stack.pop() {
            match self.node(f) {
                Formula::Atom(sym) => {
                    if !out.contains(self.symbol_name(sym)) {
                        out.insert(self.symbol_name(sym).to_string());
                    }
                }
                Formula::Not(c) => stack.push(c),
                Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                    stack.push(r);
                    stack.push(l);
                }
            }
        }
    }

    /// All subformulas of the inputs, the inputs included.
    pub fn subformula_closure<I>(&self, roots: I) -> BTreeSet<FormulaId>
    where
        I: IntoIterator<Item = FormulaId>,
    {
        let mut out = BTreeSet::new();
        let mut stack: Vec<FormulaId> = roots.into_iter().collect();
        while let Some(f) = stack.pop() {
            if !out.insert(f) {
                continue;
            }
            match self.node(f) {
                Formula::Atom(_) => {}
                Formula::Not(c) => stack.push(c),
                Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
                    stack.push(l);
                    stack.push(r);
                }
            }
        }
        out
    }

    /// Recognises `(x | ~x) -> y` and `(~x | x) -> y`, returning `(x, y)`.
    ///
    /// Purely syntactic: `(~~p | ~p) -> q` has pivot `~p`, not `p`.
    pub fn match_lbi_shape(&self, id: FormulaId) -> Option<(FormulaId, FormulaId)> {
        let Formula::Implies(disjunction, conclusion) = self.node(id) else {
            return None;
        };
        let Formula::Or(left, right) = self.node(disjunction) else {
            return None;
        };
        if self.node(right) == Formula::Not(left) {
            Some((left, conclusion))
        } else if self.node(left) == Formula::Not(right) {
            Some((right, conclusion))
        } else {
            None
        }
    }

    /// Canonical ASCII rendering.
    ///
    /// Parentheses are omitted around atoms and negations, and around a
    /// binary subformula whose connective matches its parent's on the side
    /// that connective associates to (`p -> q -> r`, `p & q & r`). Every
    /// other binary subformula of a binary formula is bracketed, so mixed
    /// connectives always read unambiguously: `(p | ~p) -> q`.
    pub fn render(&self, id: FormulaId) -> String {
        let mut out = String::new();
        self.render_into(id, &mut out);
        out
    }

    pub fn display(&self, id: FormulaId) -> Display<'_> {
        Display { store: self, id }
    }

    fn render_into(&self, id: FormulaId, out: &mut String) {
        match self.node(id) {
            Formula::Atom(sym) => out.push_str(self.symbol_name(sym)),
            Formula::Not(c) => {
                out.push('~');
                self.render_child(c, is_binary(self.node(c)), out);
            }
            Formula::And(l, r) => self.render_binary(l, r, " & ", out),
            Formula::Or(l, r) => self.render_binary(l, r, " | ", out),
            Formula::Implies(l, r) => self.render_binary(l, r, " -> ", out),
        }
    }

    // A binary child is bracketed unless it has the parent's connective and
    // sits on the side that connective associates to.
    fn render_binary(&self, l: FormulaId, r: FormulaId, op: &str, out: &mut String) {
        let right_assoc = op == " -> ";
        let same = |child: Formula| connective(child) == Some(op);
        let (lc, rc) = (self.node(l), self.node(r));
        let left_parens = is_binary(lc) && (right_assoc || !same(lc));
        let right_parens = is_binary(rc) && (!right_assoc || !same(rc));
        self.render_child(l, left_parens, out);
        out.push_str(op);
        self.render_child(r, right_parens, out);
    }

    fn render_child(&self, id: FormulaId, parens: bool, out: &mut String) {
        if parens {
            out.push('(');
            self.render_into(id, out);
            out.push(')');
        } else {
            self.render_into(id, out);
        }
    }
}

fn is_binary(node: Formula) -> bool {
    connective(node).is_some()
}

fn connective(node: Formula) -> Option<&'static str> {
    match node {
        Formula::And(..) => Some(" & "),
        Formula::Or(..) => Some(" | "),
        Formula::Implies(..) => Some(" -> "),
        Formula::Atom(_) | Formula::Not(_) => None,
    }
}

/// `fmt::Display` adapter returned by [`FormulaStore::display`].
pub struct Display<'a> {
    store: &'a FormulaStore,
    id: FormulaId,
}

impl fmt::Display for Display<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.store.render(self.id))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lem_q(store: &mut FormulaStore) -> (FormulaId, FormulaId, FormulaId) {
        let p = store.atom("p").unwrap();
        let q = store.atom("q").unwrap();
        let np = store.not(p);
        let d = store.or(p, np);
        (store.implies(d, q), p, q)
    }

    #[test]
    fn interning_is_structural() {
        let mut store = FormulaStore::new();
        let (a, _, _) = lem_q(&mut store);
        let before = store.len();
        let (b, _, _) = lem_q(&mut store);
        assert_eq!(a, b);
        assert_eq!(store.len(), before);
        let p = store.atom("p").unwrap();
        let q = store.atom("q").unwrap();
        assert_ne!(store.implies(p, q), store.implies(q, p));
    }

    #[test]
    fn atom_names_are_validated() {
        let mut store = FormulaStore::new();
        assert!(store.atom("p_1").is_ok());
        assert!(store.atom("x9").is_ok());
        for bad in ["", "P", "1p", "_p", "p-q", "p q"] {
            assert_eq!(
                store.atom(bad),
                Err(FormulaError::InvalidAtom(bad.to_string())),
                "{bad:?}"
            );
        }
    }

    #[test]
    fn sizes() {
        let mut store = FormulaStore::new();
        let (f, p, _) = lem_q(&mut store);
        assert_eq!(store.size(p), 1);
        let np = store.not(p);
        assert_eq!(store.size(np), 2);
        assert_eq!(store.size(f), 6);
    }

    #[test]
    fn atoms_sorted_and_deduplicated() {
        let mut store = FormulaStore::new();
        let (f, p, _) = lem_q(&mut store);
        assert_eq!(store.atoms_of(f).into_iter().collect::<Vec<_>>(), ["p", "q"]);
        let pp = store.and(p, p);
        assert_eq!(store.atoms_of(pp).len(), 1);
    }

    #[test]
    fn closure_of_lem_implication() {
        let mut store = FormulaStore::new();
        let (f, p, q) = lem_q(&mut store);
        let np = store.not(p);
        let d = store.or(p, np);
        let closure = store.subformula_closure([f]);
        assert_eq!(closure, BTreeSet::from([f, d, np, p, q]));
        assert!(store.subformula_closure([]).is_empty());
        assert_eq!(store.subformula_closure([p, np]), BTreeSet::from([p, np]));
    }

    #[test]
    fn lbi_shape_both_orders() {
        let mut store = FormulaStore::new();
        let (f, p, q) = lem_q(&mut store);
        assert_eq!(store.match_lbi_shape(f), Some((p, q)));
        let np = store.not(p);
        let d = store.or(np, p);
        let g = store.implies(d, q);
        assert_eq!(store.match_lbi_shape(g), Some((p, q)));
        let r = store.atom("r").unwrap();
        let nq = store.not(q);
        let d = store.or(p, nq);
        let h = store.implies(d, r);
        assert_eq!(store.match_lbi_shape(h), None);
        assert_eq!(store.match_lbi_shape(p), None);
    }

    #[test]
    fn lbi_shape_is_not_up_to_double_negation() {
        let mut store = FormulaStore::new();
        let p = store.atom("p").unwrap();
        let q = store.atom("q").unwrap();
        let np = store.not(p);
        let nnp = store.not(np);
        let d = store.or(nnp, np);
        let f = store.implies(d, q);
        assert_eq!(store.match_lbi_shape(f), Some((np, q)));
    }

    #[test]
    fn rendering_uses_minimal_parentheses() {
        let mut store = FormulaStore::new();
        let (f, p, q) = lem_q(&mut store);
        assert_eq!(store.render(f), "(p | ~p) -> q");
        assert_eq!(store.render(p), "p");
        let r = store.atom("r").unwrap();
        let qr = store.implies(q, r);
        let pqr = store.implies(p, qr);
        assert_eq!(store.render(pqr), "p -> q -> r");
        let pq = store.implies(p, q);
        let left = store.implies(pq, r);
        assert_eq!(store.render(left), "(p -> q) -> r");
        let qr_and = store.and(q, r);
        let right_and = store.and(p, qr_and);
        assert_eq!(store.render(right_and), "p & (q & r)");
        let nand = store.not(right_and);
        assert_eq!(store.render(nand), "~(p & (q & r))");
        let np = store.not(p);
        let nnp = store.not(np);
        assert_eq!(store.render(nnp), "~~p");
        let npq = store.and(np, q);
        let mixed = store.or(npq, r);
        assert_eq!(store.render(mixed), "(~p & q) | r");
        let imp_or = store.or(qr, p);
        assert_eq!(store.render(imp_or), "(q -> r) | p");
    }

    #[test]
    #[cfg(debug_assertions)]
    #[should_panic(expected = "different FormulaStore")]
    fn cross_store_ids_are_caught() {
        let mut a = FormulaStore::new();
        let b = FormulaStore::new();
        let p = a.atom("p").unwrap();
        b.render(p);
    }
}

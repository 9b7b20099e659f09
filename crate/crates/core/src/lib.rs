//! Bottom-up propositional theorem enumeration, a truth-table oracle, and
//! analysis of the excluded-middle conclusions that forward chaining misses.
//!
//! A system with the single axiom `(p | ~p) -> q` and modus ponens never
//! derives `q`: no rule application can produce `p | ~p`, `p` or `~p`. Yet
//! `q` is classically entailed. [`gap::gap_report`] finds such conclusions,
//! checks them against [`oracle`], and shows that enabling an excluded-middle
//! rule closes the gap.

pub mod engine;
pub mod formula;
pub mod gap;
pub mod oracle;
pub mod parser;
pub mod report;

pub use engine::{
    apply_rule, check_proof, enumerate, extract_proof, load_system, AxiomaticSystem, Bounds,
    ConfigError, EnumerationResult, Justification, ProofStep, RuleKind,
};
pub use formula::{Formula, FormulaId, FormulaStore};
pub use gap::{gap_report, lbi_accepted, paper_demo, DemoVariant, GapReport, LbiWitness};
pub use oracle::{classify, entails, evaluate, independent, Assignment, Verdict};
pub use parser::{parse, ParseError};

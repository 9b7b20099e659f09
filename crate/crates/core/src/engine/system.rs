use std::collections::{BTreeSet, HashSet};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use super::rules::RuleKind;
use crate::formula::{is_valid_atom_name, FormulaId, FormulaStore};
use crate::parser::{parse, ParseError};

pub const DEFAULT_MAX_FORMULA_SIZE: usize = 12;
pub const DEFAULT_MAX_GENERATIONS: usize = 50;
pub const DEFAULT_MAX_THEOREMS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bounds {
    pub max_formula_size: usize,
    pub max_generations: usize,
    pub max_theorems: usize,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_formula_size: DEFAULT_MAX_FORMULA_SIZE,
            max_generations: DEFAULT_MAX_GENERATIONS,
            max_theorems: DEFAULT_MAX_THEOREMS,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("invalid system document: {0}")]
    Syntax(String),
    #[error("{field}: {message}")]
    Field { field: String, message: String },
    #[error("{field}: {source}")]
    Parse {
        field: String,
        #[source]
        source: ParseError,
    },
    #[error("{field}: formula has size {size}, above max_formula_size {max}")]
    AxiomTooLarge {
        field: String,
        size: usize,
        max: usize,
    },
}

impl ConfigError {
    fn field(field: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError::Field {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Name of the offending document field, if the error concerns one.
    pub fn field_name(&self) -> Option<&str> {
        match self {
            ConfigError::Syntax(_) => None,
            ConfigError::Field { field, .. }
            | ConfigError::Parse { field, .. }
            | ConfigError::AxiomTooLarge { field, .. } => Some(field),
        }
    }
}

/// A set of axioms, a set of enabled rules, and enumeration bounds.
///
/// Constructed only through [`AxiomaticSystem::new`] (or [`load_system`]),
/// which enforces that axioms use declared atoms and that the side-formula
/// universe fits within the size bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomaticSystem {
    atoms: BTreeSet<String>,
    axioms: Vec<FormulaId>,
    rules: BTreeSet<RuleKind>,
    side_formulas: Vec<FormulaId>,
    bounds: Bounds,
    universe: BTreeSet<FormulaId>,
}

impl AxiomaticSystem {
    pub fn new(
        store: &FormulaStore,
        atoms: BTreeSet<String>,
        axioms: Vec<FormulaId>,
        rules: BTreeSet<RuleKind>,
        side_formulas: Vec<FormulaId>,
        bounds: Bounds,
    ) -> Result<Self, ConfigError> {
        for name in &atoms {
            if !is_valid_atom_name(name) {
                return Err(ConfigError::field(
                    "atoms",
                    format!("invalid atom name `{name}`"),
                ));
            }
        }
        for (field, value) in [
            ("bounds.max_formula_size", bounds.max_formula_size),
            ("bounds.max_generations", bounds.max_generations),
            ("bounds.max_theorems", bounds.max_theorems),
        ] {
            if value == 0 {
                return Err(ConfigError::field(field, "must be positive"));
            }
        }
        let labelled = axioms
            .iter()
            .enumerate()
            .map(|(i, &f)| (format!("axioms[{i}]"), f))
            .chain(
                side_formulas
                    .iter()
                    .enumerate()
                    .map(|(i, &f)| (format!("side_formulas[{i}]"), f)),
            );
        for (field, f) in labelled {
            let size = store.size(f);
            if size > bounds.max_formula_size {
                return Err(ConfigError::AxiomTooLarge {
                    field,
                    size,
                    max: bounds.max_formula_size,
                });
            }
            if let Some(stray) = store.atoms_of(f).into_iter().find(|a| !atoms.contains(a)) {
                return Err(ConfigError::field(
                    field,
                    format!("atom `{stray}` is not declared in atoms"),
                ));
            }
        }
        let universe = store.subformula_closure(axioms.iter().chain(&side_formulas).copied());
        Ok(AxiomaticSystem {
            atoms,
            axioms,
            rules,
            side_formulas,
            bounds,
            universe,
        })
    }

    pub fn atoms(&self) -> &BTreeSet<String> {
        &self.atoms
    }

    pub fn axioms(&self) -> &[FormulaId] {
        &self.axioms
    }

    pub fn rules(&self) -> &BTreeSet<RuleKind> {
        &self.rules
    }

    pub fn side_formulas(&self) -> &[FormulaId] {
        &self.side_formulas
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    /// Subformula closure of the axioms and side formulas: the range of
    /// `OR_INTRO` side formulas and of the `LEM_AXIOM` schema.
    pub fn universe(&self) -> &BTreeSet<FormulaId> {
        &self.universe
    }

    pub fn has_rule(&self, rule: RuleKind) -> bool {
        self.rules.contains(&rule)
    }

    /// The same system with a different rule set.
    pub fn with_rules(&self, rules: BTreeSet<RuleKind>) -> Self {
        AxiomaticSystem {
            rules,
            ..self.clone()
        }
    }

    /// The same system with new bounds, re-validated.
    pub fn with_bounds(&self, store: &FormulaStore, bounds: Bounds) -> Result<Self, ConfigError> {
        AxiomaticSystem::new(
            store,
            self.atoms.clone(),
            self.axioms.clone(),
            self.rules.clone(),
            self.side_formulas.clone(),
            bounds,
        )
    }

    /// Serializes to the system document format.
    pub fn to_document(&self, store: &FormulaStore) -> SystemDocument {
        SystemDocument {
            atoms: self.atoms.iter().cloned().collect(),
            axioms: self.axioms.iter().map(|&f| store.render(f)).collect(),
            rules: self.rules.iter().map(|r| r.name().to_string()).collect(),
            side_formulas: self.side_formulas.iter().map(|&f| store.render(f)).collect(),
            bounds: self.bounds,
        }
    }
}

/// On-disk form of an [`AxiomaticSystem`]. Field order is the
/// serialization order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDocument {
    pub atoms: Vec<String>,
    pub axioms: Vec<String>,
    pub rules: Vec<String>,
    pub side_formulas: Vec<String>,
    pub bounds: Bounds,
}

impl SystemDocument {
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("system document serializes");
        out.push('\n');
        out
    }
}

const TOP_LEVEL_KEYS: [&str; 5] = ["atoms", "axioms", "rules", "side_formulas", "bounds"];

fn string_list<'v>(value: &'v Value, field: &str) -> Result<Vec<&'v str>, ConfigError> {
    let items = value
        .as_array()
        .ok_or_else(|| ConfigError::field(field, "expected an array of strings"))?;
    items
        .iter()
        .enumerate()
        .map(|(i, v)| {
            v.as_str()
                .ok_or_else(|| ConfigError::field(format!("{field}[{i}]"), "expected a string"))
        })
        .collect()
}

fn formula_list(
    store: &mut FormulaStore,
    value: Option<&Value>,
    field: &str,
) -> Result<Vec<FormulaId>, ConfigError> {
    let Some(value) = value else {
        return Ok(Vec::new());
    };
    string_list(value, field)?
        .into_iter()
        .enumerate()
        .map(|(i, text)| {
            parse(text, store).map_err(|source| ConfigError::Parse {
                field: format!("{field}[{i}]"),
                source,
            })
        })
        .collect()
}

fn positive(value: &Value, field: &str) -> Result<usize, ConfigError> {
    value
        .as_u64()
        .filter(|&n| n > 0)
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| ConfigError::field(field, "expected a positive integer"))
}

/// Parses and validates a system document.
///
/// `axioms` is required. Missing `rules` default to `["MP"]`, missing bounds
/// fields to 12 / 50 / 100000, missing `side_formulas` to `[]`, and missing
/// `atoms` to the atoms occurring in the axioms and side formulas. Unknown
/// keys are rejected.
pub fn load_system(store: &mut FormulaStore, document: &str) -> Result<AxiomaticSystem, ConfigError> {
    let root: Value =
        serde_json::from_str(document).map_err(|e| ConfigError::Syntax(e.to_string()))?;
    let object = root
        .as_object()
        .ok_or_else(|| ConfigError::Syntax("expected a JSON object".into()))?;
    if let Some(key) = object.keys().find(|k| !TOP_LEVEL_KEYS.contains(&k.as_str())) {
        return Err(ConfigError::field(key.clone(), "unknown field"));
    }

    let axioms = match object.get("axioms") {
        Some(v) => formula_list(store, Some(v), "axioms")?,
        None => return Err(ConfigError::field("axioms", "missing required field")),
    };
    let side_formulas = formula_list(store, object.get("side_formulas"), "side_formulas")?;

    let rules = match object.get("rules") {
        None => BTreeSet::from([RuleKind::Mp]),
        Some(v) => {
            let mut rules = BTreeSet::new();
            let mut seen = HashSet::new();
            for (i, name) in string_list(v, "rules")?.into_iter().enumerate() {
                let rule = name
                    .parse::<RuleKind>()
                    .map_err(|e| ConfigError::field(format!("rules[{i}]"), e.to_string()))?;
                if !seen.insert(rule) {
                    return Err(ConfigError::field(
                        format!("rules[{i}]"),
                        format!("duplicate rule `{name}`"),
                    ));
                }
                rules.insert(rule);
            }
            rules
        }
    };

    let atoms = match object.get("atoms") {
        Some(v) => {
            let mut atoms = BTreeSet::new();
            for (i, name) in string_list(v, "atoms")?.into_iter().enumerate() {
                if !is_valid_atom_name(name) {
                    return Err(ConfigError::field(
                        format!("atoms[{i}]"),
                        format!("invalid atom name `{name}`"),
                    ));
                }
                atoms.insert(name.to_string());
            }
            atoms
        }
        None => {
            let mut atoms = BTreeSet::new();
            for &f in axioms.iter().chain(&side_formulas) {
                atoms.extend(store.atoms_of(f));
            }
            atoms
        }
    };

    let mut bounds = Bounds::default();
    if let Some(v) = object.get("bounds") {
        let b = v
            .as_object()
            .ok_or_else(|| ConfigError::field("bounds", "expected an object"))?;
        for (key, value) in b {
            let field = format!("bounds.{key}");
            match key.as_str() {
                "max_formula_size" => bounds.max_formula_size = positive(value, &field)?,
                "max_generations" => bounds.max_generations = positive(value, &field)?,
                "max_theorems" => bounds.max_theorems = positive(value, &field)?,
                _ => return Err(ConfigError::field(field, "unknown field")),
            }
        }
    }

    AxiomaticSystem::new(store, atoms, axioms, rules, side_formulas, bounds)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loads_excluded_middle_demo() {
        let mut s = FormulaStore::new();
        let sys = load_system(
            &mut s,
            r#"{ "atoms": ["p","q"], "axioms": ["(p | ~p) -> q"], "rules": ["MP"], "side_formulas": [], "bounds": {"max_formula_size": 12, "max_generations": 50, "max_theorems": 100000} }"#,
        )
        .unwrap();
        assert_eq!(sys.axioms().len(), 1);
        assert_eq!(s.render(sys.axioms()[0]), "(p | ~p) -> q");
        assert_eq!(sys.rules(), &BTreeSet::from([RuleKind::Mp]));
        assert_eq!(sys.universe().len(), 5);
    }

    #[test]
    fn defaults() {
        let mut s = FormulaStore::new();
        let sys = load_system(&mut s, r#"{"axioms": ["p -> q"]}"#).unwrap();
        assert_eq!(sys.rules(), &BTreeSet::from([RuleKind::Mp]));
        assert_eq!(sys.bounds(), Bounds::default());
        assert_eq!(sys.atoms().iter().collect::<Vec<_>>(), ["p", "q"]);
        let sys = load_system(&mut s, r#"{"axioms": [], "bounds": {"max_generations": 3}}"#).unwrap();
        assert!(sys.axioms().is_empty());
        assert_eq!(sys.bounds().max_generations, 3);
        assert_eq!(sys.bounds().max_formula_size, DEFAULT_MAX_FORMULA_SIZE);
    }

    fn field_of(doc: &str) -> String {
        let mut s = FormulaStore::new();
        load_system(&mut s, doc)
            .unwrap_err()
            .field_name()
            .unwrap_or("<none>")
            .to_string()
    }

    #[test]
    fn errors_name_the_field() {
        assert_eq!(field_of(r#"{"axioms": ["p ->"]}"#), "axioms[0]");
        assert_eq!(field_of(r#"{"axioms": ["p"], "rules": ["MP", "NOPE"]}"#), "rules[1]");
        assert_eq!(field_of(r#"{"axioms": ["p"], "extra": 1}"#), "extra");
        assert_eq!(field_of(r#"{"axioms": ["p"], "bounds": {"max_size": 1}}"#), "bounds.max_size");
        assert_eq!(
            field_of(r#"{"axioms": ["p"], "bounds": {"max_formula_size": 0}}"#),
            "bounds.max_formula_size"
        );
        assert_eq!(field_of(r#"{"atoms": ["p"], "axioms": ["p -> q"]}"#), "axioms[0]");
        assert_eq!(field_of(r#"{"atoms": ["P"], "axioms": []}"#), "atoms[0]");
        assert_eq!(field_of(r#"{"rules": []}"#), "axioms");
        assert_eq!(field_of(r#"{"axioms": [1]}"#), "axioms[0]");
        assert_eq!(field_of(r#"{"axioms": ["p"], "rules": ["MP", "MP"]}"#), "rules[1]");
        assert_eq!(field_of("[1]"), "<none>");
        assert_eq!(field_of("{"), "<none>");
    }

    #[test]
    fn oversized_axiom() {
        let mut s = FormulaStore::new();
        let err = load_system(
            &mut s,
            r#"{"axioms": ["p", "(p | ~p) -> q"], "bounds": {"max_formula_size": 5}}"#,
        )
        .unwrap_err();
        assert_eq!(
            err,
            ConfigError::AxiomTooLarge {
                field: "axioms[1]".into(),
                size: 6,
                max: 5
            }
        );
    }

    #[test]
    fn document_round_trip() {
        let mut s = FormulaStore::new();
        let sys = load_system(
            &mut s,
            r#"{"axioms": ["p", "p->q"], "rules": ["OR_INTRO", "MP"], "side_formulas": ["r"]}"#,
        )
        .unwrap();
        let json = sys.to_document(&s).to_json();
        let again = load_system(&mut s, &json).unwrap();
        assert_eq!(again, sys);
        assert_eq!(again.to_document(&s).to_json(), json);
    }
}

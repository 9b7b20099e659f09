//! The `lbi` command line.
//!
//! [`run`] takes the argument list and two output streams and returns the
//! process exit status, so the whole command surface can be driven
//! in-process from tests.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use lbi_core::engine::{check_proof, enumerate, extract_proof, load_system, AxiomaticSystem, Bounds, StopReason};
use lbi_core::formula::{FormulaId, FormulaStore};
use lbi_core::gap::{gap_report, paper_demo, DemoVariant, GapError, GapReport};
use lbi_core::oracle::{self, OracleError};
use lbi_core::parser::{parse, ParseError};
use lbi_core::report::{to_json, EnumerationDoc, GapDoc, ProofDoc};
use lbi_core::RuleKind;
use serde::{Deserialize, Serialize};

/// Process exit statuses. The numeric values are part of the interface.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    Usage = 1,
    Parse = 2,
    NotDerived = 3,
    OracleLimit = 4,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    /// Pretty-printed JSON with a fixed field order.
    Machine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "SCREAMING_SNAKE_CASE")]
enum Variant {
    Eq1,
    TwoBranch,
}

#[derive(Debug, Parser)]
#[command(name = "lbi", version, about = "Bottom-up theorem enumeration and excluded-middle gap analysis")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: OutputFormat,
    /// System definition file (JSON).
    #[arg(long, global = true, value_name = "FILE")]
    system: Option<PathBuf>,
    /// Override the system's max_formula_size.
    #[arg(long, global = true, value_name = "N")]
    max_size: Option<usize>,
    /// Override the system's max_generations.
    #[arg(long, global = true, value_name = "N")]
    max_generations: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse a formula and print its canonical form, size and atoms.
    Parse { formula: String },
    /// Classify a formula, or test entailment / independence against --system.
    Classify {
        formula: Option<String>,
        #[arg(long, value_name = "FORMULA", conflicts_with_all = ["formula", "independent"])]
        entails: Option<String>,
        #[arg(long, value_name = "FORMULA", conflicts_with = "formula")]
        independent: Option<String>,
    },
    /// Enumerate the theorems of --system bottom-up.
    Enumerate,
    /// Extract and check a proof of --goal from the enumeration.
    Prove {
        #[arg(long, value_name = "FORMULA")]
        goal: String,
    },
    /// Report excluded-middle conclusions missing from the enumeration.
    Gap {
        #[arg(long, value_name = "RULE")]
        close_with: Option<String>,
    },
    /// Write one of the demonstration systems.
    Demo {
        #[arg(long, value_enum)]
        variant: Variant,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

struct Failure {
    status: ExitStatus,
    message: String,
}

impl Failure {
    fn new(status: ExitStatus, message: impl Into<String>) -> Self {
        Failure {
            status,
            message: message.into(),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn parse_failure(text: &str, e: ParseError) -> Failure {
    Failure::new(
        ExitStatus::Parse,
        format!("error: cannot parse `{text}`\n{e}\n  {text}\n  {}^", " ".repeat(e.offset)),
    )
}

fn oracle_failure(e: OracleError) -> Failure {
    let status = match e {
        OracleError::TooManyAtoms { .. } => ExitStatus::OracleLimit,
        OracleError::MissingAtom(_) => ExitStatus::Usage,
    };
    Failure::new(status, format!("error: {e}"))
}

fn io_failure(what: &str, path: &Path, e: std::io::Error) -> Failure {
    Failure::new(ExitStatus::Usage, format!("error: cannot {what} {}: {e}", path.display()))
}

fn write_out(out: &mut dyn Write, text: &str) -> CmdResult {
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::new(ExitStatus::Usage, format!("error: writing output: {e}")))
}

/// Runs the CLI and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    ExitStatus::Success.code()
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    ExitStatus::Usage.code()
                }
            };
        }
    };
    let mut session = Session {
        store: FormulaStore::new(),
        cli: &cli,
    };
    match session.dispatch(out) {
        Ok(()) => ExitStatus::Success.code(),
        Err(f) => {
            let _ = writeln!(err, "{}", f.message);
            f.status.code()
        }
    }
}

struct Session<'c> {
    store: FormulaStore,
    cli: &'c Cli,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParseDoc {
    pub formula: String,
    pub size: usize,
    pub atoms: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassifyDoc {
    pub formula: String,
    pub verdict: oracle::Verdict,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntailsDoc {
    pub formula: String,
    pub entails: bool,
    pub countermodel: Option<oracle::Assignment>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndependentDoc {
    pub formula: String,
    pub independent: bool,
}

impl Session<'_> {
    fn machine(&self) -> bool {
        self.cli.format == OutputFormat::Machine
    }

    fn dispatch(&mut self, out: &mut dyn Write) -> CmdResult {
        match &self.cli.command {
            Command::Parse { formula } => self.cmd_parse(formula, out),
            Command::Classify {
                formula,
                entails,
                independent,
            } => self.cmd_classify(formula.as_deref(), entails.as_deref(), independent.as_deref(), out),
            Command::Enumerate => self.cmd_enumerate(out),
            Command::Prove { goal } => self.cmd_prove(goal, out),
            Command::Gap { close_with } => self.cmd_gap(close_with.as_deref(), out),
            Command::Demo { variant, out: path } => self.cmd_demo(*variant, path.as_deref(), out),
        }
    }

    fn formula(&mut self, text: &str) -> Result<FormulaId, Failure> {
        parse(text, &mut self.store).map_err(|e| parse_failure(text, e))
    }

    fn system(&mut self) -> Result<AxiomaticSystem, Failure> {
        let path = self
            .cli
            .system
            .as_ref()
            .ok_or_else(|| Failure::new(ExitStatus::Usage, "error: --system FILE is required"))?;
        let text = fs::read_to_string(path).map_err(|e| io_failure("read", path, e))?;
        let system = load_system(&mut self.store, &text).map_err(|e| {
            Failure::new(ExitStatus::Usage, format!("error: {}: {e}", path.display()))
        })?;
        if self.cli.max_size.is_none() && self.cli.max_generations.is_none() {
            return Ok(system);
        }
        let bounds = Bounds {
            max_formula_size: self.cli.max_size.unwrap_or(system.bounds().max_formula_size),
            max_generations: self
                .cli
                .max_generations
                .unwrap_or(system.bounds().max_generations),
            ..system.bounds()
        };
        system
            .with_bounds(&self.store, bounds)
            .map_err(|e| Failure::new(ExitStatus::Usage, format!("error: {e}")))
    }

    fn cmd_parse(&mut self, text: &str, out: &mut dyn Write) -> CmdResult {
        let f = self.formula(text)?;
        let doc = ParseDoc {
            formula: self.store.render(f),
            size: self.store.size(f),
            atoms: self.store.atoms_of(f).into_iter().collect(),
        };
        let text = if self.machine() {
            to_json(&doc)
        } else {
            format!(
                "{}\nsize: {}\natoms: {}\n",
                doc.formula,
                doc.size,
                doc.atoms.join(", ")
            )
        };
        write_out(out, &text)
    }

    fn cmd_classify(
        &mut self,
        formula: Option<&str>,
        entails: Option<&str>,
        independent: Option<&str>,
        out: &mut dyn Write,
    ) -> CmdResult {
        let text = match (formula, entails, independent) {
            (Some(text), None, None) => {
                let f = self.formula(text)?;
                let verdict = oracle::classify(&self.store, f).map_err(oracle_failure)?;
                let doc = ClassifyDoc {
                    formula: self.store.render(f),
                    verdict,
                };
                if self.machine() {
                    to_json(&doc)
                } else {
                    format!("{:?}\n", doc.verdict)
                }
            }
            (None, Some(text), None) => {
                let system = self.system()?;
                let f = self.formula(text)?;
                let res = oracle::entails(&self.store, system.axioms(), f).map_err(oracle_failure)?;
                let doc = EntailsDoc {
                    formula: self.store.render(f),
                    entails: res.holds,
                    countermodel: res.countermodel,
                };
                if self.machine() {
                    to_json(&doc)
                } else {
                    let mut s = format!("entails: {}\n", doc.entails);
                    if let Some(m) = &doc.countermodel {
                        let cells: Vec<String> = m
                            .iter()
                            .map(|(k, &v)| format!("{k}={}", if v { 'T' } else { 'F' }))
                            .collect();
                        s.push_str(&format!("countermodel: {}\n", cells.join(" ")));
                    }
                    s
                }
            }
            (None, None, Some(text)) => {
                let system = self.system()?;
                let f = self.formula(text)?;
                let indep =
                    oracle::independent(&self.store, system.axioms(), f).map_err(oracle_failure)?;
                let doc = IndependentDoc {
                    formula: self.store.render(f),
                    independent: indep,
                };
                if self.machine() {
                    to_json(&doc)
                } else {
                    format!("independent: {}\n", doc.independent)
                }
            }
            _ => {
                return Err(Failure::new(
                    ExitStatus::Usage,
                    "error: give exactly one of FORMULA, --entails FORMULA, --independent FORMULA",
                ))
            }
        };
        write_out(out, &text)
    }

    fn cmd_enumerate(&mut self, out: &mut dyn Write) -> CmdResult {
        let system = self.system()?;
        let result = enumerate(&mut self.store, &system);
        let doc = EnumerationDoc::new(&self.store, &result);
        let text = if self.machine() {
            to_json(&doc)
        } else {
            let mut s = enumeration_listing(&doc);
            s.push_str(&format!(
                "{} theorem(s), {} generation(s) run, {}\n",
                doc.theorems.len(),
                doc.stats.generations_run,
                stop_description(doc.stats.stop_reason)
            ));
            s
        };
        write_out(out, &text)
    }

    fn cmd_prove(&mut self, goal_text: &str, out: &mut dyn Write) -> CmdResult {
        let system = self.system()?;
        let goal = self.formula(goal_text)?;
        let result = enumerate(&mut self.store, &system);
        let steps = match extract_proof(&result, goal) {
            Ok(steps) => steps,
            Err(_) => {
                let why = if result.stats.fixed_point_reached {
                    "fixed point reached without goal".to_string()
                } else {
                    format!(
                        "not derived within bounds ({})",
                        stop_description(result.stats.stop_reason)
                    )
                };
                return Err(Failure::new(
                    ExitStatus::NotDerived,
                    format!("{}: {why}", self.store.render(goal)),
                ));
            }
        };
        check_proof(&mut self.store, &steps, &system).map_err(|e| {
            Failure::new(ExitStatus::Usage, format!("internal error: extracted proof rejected: {e}"))
        })?;
        let doc = ProofDoc::new(&self.store, &self.store.render(goal), &steps, true);
        let text = if self.machine() {
            to_json(&doc)
        } else {
            let mut s = String::new();
            for step in &doc.steps {
                s.push_str(&format!(
                    "{:>4}  {}  {}\n",
                    step.index,
                    step.formula,
                    justification_text(&step.rule, &step.premises)
                ));
            }
            s.push_str(&format!("proof of {} checked: {} step(s)\n", doc.goal, doc.steps.len()));
            s
        };
        write_out(out, &text)
    }

    fn cmd_gap(&mut self, close_with: Option<&str>, out: &mut dyn Write) -> CmdResult {
        let rule = close_with
            .map(|name| {
                name.parse::<RuleKind>()
                    .map_err(|e| Failure::new(ExitStatus::Usage, format!("error: --close-with: {e}")))
            })
            .transpose()?;
        let system = self.system()?;
        let report = gap_report(&mut self.store, &system, rule).map_err(|e| match e {
            GapError::Oracle(o) => oracle_failure(o),
            other => Failure::new(ExitStatus::Usage, format!("error: {other}")),
        })?;
        let text = if self.machine() {
            to_json(&GapDoc::new(&self.store, &report))
        } else {
            gap_text(&self.store, &report)
        };
        write_out(out, &text)
    }

    fn cmd_demo(&mut self, variant: Variant, path: Option<&Path>, out: &mut dyn Write) -> CmdResult {
        let variant = match variant {
            Variant::Eq1 => DemoVariant::Eq1,
            Variant::TwoBranch => DemoVariant::TwoBranch,
        };
        let system = paper_demo(&mut self.store, variant);
        let json = system.to_document(&self.store).to_json();
        match path {
            Some(path) => {
                fs::write(path, json).map_err(|e| io_failure("write", path, e))?;
                if !self.machine() {
                    write_out(out, &format!("wrote {}\n", path.display()))?;
                }
                Ok(())
            }
            None => write_out(out, &json),
        }
    }
}

fn stop_description(reason: StopReason) -> &'static str {
    match reason {
        StopReason::FixedPoint => "fixed point reached",
        StopReason::GenerationLimit => "stopped at max_generations",
        StopReason::TheoremLimit => "stopped at max_theorems",
    }
}

fn justification_text(rule: &str, premises: &[usize]) -> String {
    if premises.is_empty() {
        rule.to_string()
    } else {
        let ps: Vec<String> = premises.iter().map(ToString::to_string).collect();
        format!("{rule} {}", ps.join(","))
    }
}

fn enumeration_listing(doc: &EnumerationDoc) -> String {
    let mut s = String::new();
    for t in &doc.theorems {
        s.push_str(&format!(
            "{:>4}  g{}  {}  {}\n",
            t.index,
            t.generation,
            t.formula,
            justification_text(&t.rule, &t.premises)
        ));
    }
    s
}

fn gap_text(store: &FormulaStore, report: &GapReport) -> String {
    let mut s = format!(
        "enumerated {} theorem(s), {}\n",
        report.enumerated.len(),
        stop_description(report.enumerated.stats.stop_reason)
    );
    if report.lbi_accepted.is_empty() {
        s.push_str("no excluded-middle acceptances\n");
    } else {
        s.push_str("excluded-middle acceptances:\n");
        for w in &report.lbi_accepted {
            s.push_str(&format!(
                "  {}  via pivot {} ({}, theorems {:?})\n",
                store.render(w.conclusion),
                store.render(w.pivot),
                w.mode,
                w.source_indices
            ));
        }
    }
    if report.gap.is_empty() {
        s.push_str("gap: empty\n");
    } else {
        s.push_str("gap:\n");
        for m in &report.gap {
            s.push_str(&format!(
                "  {}  entailed={} pivot_independent={} pivot_absent={}\n",
                store.render(m.conclusion),
                m.verification.oracle_entailed,
                m.verification.pivot_independent_semantically,
                m.verification.pivot_absent_syntactically
            ));
            for c in &m.witnesses {
                s.push_str(&format!(
                    "    pivot {} ({}): independent={} absent={}\n",
                    store.render(c.witness.pivot),
                    c.witness.mode,
                    c.pivot_independent,
                    c.pivot_absent
                ));
            }
        }
    }
    if let Some(c) = &report.closure {
        s.push_str(&format!(
            "with {}: {} theorem(s), gap closed: {}\n",
            c.rule,
            c.enumerated.len(),
            c.gap_closed
        ));
    }
    s
}

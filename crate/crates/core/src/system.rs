//! The bundled substitution rule system: eight conceptual antecedents
//! (positional context split into three switches), the nine-term Modifier
//! output, and rules R01-R15.
//!
//! Parameters live in two text assets so they can be recalibrated without
//! touching code: `assets/system_variables.json` and
//! `assets/system_rules.txt`. Every term records whether its value is
//! published or chosen here.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuzzy::{parse_rules, Engine, LinguisticVariable, MembershipFunction, RuleBase, Term, Universe};

pub const BUNDLED_VARIABLES: &str = include_str!("../assets/system_variables.json");
pub const BUNDLED_RULES: &str = include_str!("../assets/system_rules.txt");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Published,
    Decision,
}

/// Where one parameter came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    /// `Variable` or `Variable.Term`.
    pub item: String,
    pub source: Source,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct TermDoc {
    name: String,
    #[serde(flatten)]
    mf: MembershipFunction,
    source: Source,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct VariableDoc {
    name: String,
    universe: Universe,
    source: Source,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    note: Option<String>,
    terms: Vec<TermDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct VariablesDoc {
    output: String,
    variables: Vec<VariableDoc>,
}

/// Variables, rules and per-parameter provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemConfig {
    pub variables: Vec<LinguisticVariable>,
    pub output: String,
    pub rules: RuleBase,
    pub provenance: Vec<Provenance>,
}

impl SystemConfig {
    pub fn variable(&self, name: &str) -> Option<&LinguisticVariable> {
        self.variables.iter().find(|v| v.name == name)
    }

    pub fn variable_mut(&mut self, name: &str) -> Option<&mut LinguisticVariable> {
        self.variables.iter_mut().find(|v| v.name == name)
    }

    pub fn engine(&self) -> Result<Engine> {
        Engine::new(&self.variables, &self.rules)
    }
}

/// Reads a variables document (JSON) and rule text.
pub fn load_system(variables_json: &str, rules_text: &str) -> Result<SystemConfig> {
    let doc: VariablesDoc =
        serde_json::from_str(variables_json).map_err(|e| Error::Config(alloc::format!("variables document: {e}")))?;
    let mut provenance = Vec::new();
    let mut variables = Vec::with_capacity(doc.variables.len());
    for v in doc.variables {
        provenance.push(Provenance { item: v.name.clone(), source: v.source, note: v.note });
        let mut lv = LinguisticVariable::new(v.name.clone(), v.universe);
        for t in v.terms {
            provenance.push(Provenance {
                item: alloc::format!("{}.{}", v.name, t.name),
                source: t.source,
                note: t.note,
            });
            lv.terms.push(Term { name: t.name, mf: t.mf });
        }
        variables.push(lv);
    }
    if !variables.iter().any(|v| v.name == doc.output) {
        return Err(Error::Config(alloc::format!("output variable `{}` is not defined", doc.output)));
    }
    let rules = parse_rules(rules_text, &variables)?;
    Ok(SystemConfig { variables, output: doc.output, rules, provenance })
}

/// The bundled system.
pub fn build_bundled_system() -> SystemConfig {
    load_system(BUNDLED_VARIABLES, BUNDLED_RULES).expect("bundled system assets are valid")
}

/// Human-readable name of a bundled rule family, e.g. `R04` -> "Rapid Decline".
pub fn rule_title(id: &str) -> Option<&'static str> {
    let family = id.trim_end_matches(|c: char| c.is_ascii_lowercase());
    Some(match family {
        "R01" => "Untouchable Star",
        "R02" => "Fatigue",
        "R03" => "Defensive Risk",
        "R04" => "Rapid Decline",
        "R07" => "Positive Momentum",
        "R08" => "Ineffective Forward",
        "R09" => "Striker Under Pressure",
        "R10" => "Invisible Playmaker",
        "R11" => "Creator Bonus",
        "R12" => "Veteran Fatigue",
        "R13" => "Young Talent Protection",
        "R14" => "Goal Protection",
        "R15" => "Neutral State",
        _ => return None,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    InvalidUniverse {
        variable: String,
    },
    DuplicateTerm {
        variable: String,
        term: String,
    },
    ParameterOrder {
        variable: String,
        term: String,
    },
    SupportOutsideUniverse {
        variable: String,
        term: String,
    },
    /// A point of an input universe where no term has positive membership.
    CoverageGap {
        variable: String,
        at: f64,
    },
    /// Same, on the output universe.
    OutputGap {
        at: f64,
    },
    DanglingReference {
        rule: String,
        variable: String,
        term: String,
    },
    MissingOutput {
        variable: String,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::InvalidUniverse { variable } => write!(f, "{variable}: invalid universe"),
            Violation::DuplicateTerm { variable, term } => write!(f, "{variable}.{term}: duplicate term"),
            Violation::ParameterOrder { variable, term } => write!(f, "{variable}.{term}: parameters not ordered"),
            Violation::SupportOutsideUniverse { variable, term } => {
                write!(f, "{variable}.{term}: support leaves the universe")
            }
            Violation::CoverageGap { variable, at } => write!(f, "{variable}: no term covers {at}"),
            Violation::OutputGap { at } => write!(f, "output: no term covers {at}"),
            Violation::DanglingReference { rule, variable, term } => {
                write!(f, "{rule}: `{variable} IS {term}` is not defined")
            }
            Violation::MissingOutput { variable } => write!(f, "output variable `{variable}` is not defined"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Structural checks over a system. Single-term input variables are
/// switches and may leave gaps (e.g. `Card_Y` = 0 has no term).
pub fn validate_system(cfg: &SystemConfig) -> ValidationReport {
    let mut out = Vec::new();
    for v in &cfg.variables {
        let name = || v.name.clone();
        if !v.universe.is_valid() {
            out.push(Violation::InvalidUniverse { variable: name() });
            continue;
        }
        let mut seen = BTreeSet::new();
        let mut ordered = true;
        for t in &v.terms {
            if !seen.insert(t.name.as_str()) {
                out.push(Violation::DuplicateTerm { variable: name(), term: t.name.clone() });
            }
            if !t.mf.is_ordered() {
                ordered = false;
                out.push(Violation::ParameterOrder { variable: name(), term: t.name.clone() });
                continue;
            }
            let (lo, hi) = t.mf.support();
            if lo < v.universe.lo || hi > v.universe.hi {
                out.push(Violation::SupportOutsideUniverse { variable: name(), term: t.name.clone() });
            }
        }
        let is_output = v.name == cfg.output;
        if ordered && (is_output || v.terms.len() > 1) {
            if let Some(at) = first_gap(v) {
                out.push(if is_output {
                    Violation::OutputGap { at }
                } else {
                    Violation::CoverageGap { variable: name(), at }
                });
            }
        }
    }
    if cfg.variable(&cfg.output).is_none() {
        out.push(Violation::MissingOutput { variable: cfg.output.clone() });
    }
    for r in &cfg.rules.rules {
        let mut atoms = r.antecedent.atoms();
        atoms.push(&r.consequent);
        for a in atoms {
            let ok = cfg.variable(&a.variable).is_some_and(|v| v.find_term(&a.term).is_some());
            if !ok {
                out.push(Violation::DanglingReference {
                    rule: r.id.clone(),
                    variable: a.variable.clone(),
                    term: a.term.clone(),
                });
            }
        }
    }
    ValidationReport { violations: out }
}

fn first_gap(v: &LinguisticVariable) -> Option<f64> {
    let u = &v.universe;
    (0..u.resolution).map(|i| u.point(i)).find(|&x| v.terms.iter().all(|t| t.mf.eval(x) <= 0.0))
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("valid");
        }
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Published => "published",
            Source::Decision => "decision",
        })
    }
}

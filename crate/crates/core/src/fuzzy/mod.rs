//! Generic Mamdani fuzzy inference.

pub mod dsl;
pub mod engine;
pub mod membership;
pub mod rules;

pub use dsl::{parse_rules, ParseError, ParseErrorKind};
pub use engine::{defuzz_centroid, ActivationTrace, CrispInputs, Engine, Inference, RuleActivation};
pub use membership::{LinguisticVariable, MembershipFunction, Term, Universe, DEFAULT_RESOLUTION};
pub use rules::{Atom, Expr, Rule, RuleBase};

//! Mamdani inference: min for AND, max for OR, min implication, max
//! aggregation, centroid defuzzification.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::membership::{LinguisticVariable, Universe};
use super::rules::{Expr, RuleBase};
use crate::error::{Error, Result};

/// Crisp input values keyed by variable name.
pub type CrispInputs = BTreeMap<String, f64>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleActivation {
    pub rule: String,
    /// Firing strength after the rule weight is applied.
    pub strength: f64,
    pub consequent: String,
    /// Whether the clipped consequent adds area to the aggregate.
    pub contributes: bool,
}

/// Firing strength of every rule in the base, in rule order, zeros included.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ActivationTrace {
    pub rules: Vec<RuleActivation>,
}

impl ActivationTrace {
    pub fn strengths(&self) -> Vec<f64> {
        self.rules.iter().map(|r| r.strength).collect()
    }

    pub fn strength_of(&self, rule: &str) -> Option<f64> {
        self.rules.iter().find(|r| r.rule == rule).map(|r| r.strength)
    }

    /// Rules with non-zero strength, strongest first.
    pub fn active(&self) -> Vec<&RuleActivation> {
        let mut v: Vec<_> = self.rules.iter().filter(|r| r.strength > 0.0).collect();
        v.sort_by(|a, b| b.strength.total_cmp(&a.strength));
        v
    }
}

#[derive(Debug, Clone)]
enum Compiled {
    Atom { var: usize, term: usize },
    And(Vec<Compiled>),
    Or(Vec<Compiled>),
}

#[derive(Debug, Clone)]
struct CompiledRule {
    id: String,
    antecedent: Compiled,
    consequent: usize,
    weight: f64,
}

/// Immutable inference engine compiled from variables and a rule base.
#[derive(Debug, Clone)]
pub struct Engine {
    inputs: Vec<LinguisticVariable>,
    output: LinguisticVariable,
    rules: Vec<CompiledRule>,
    /// Consequent membership sampled on the output grid, per output term.
    sampled: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Inference {
    pub curve: Vec<f64>,
    pub trace: ActivationTrace,
}

impl Engine {
    /// `variables` holds the inputs and the single output variable named by
    /// every consequent.
    pub fn new(variables: &[LinguisticVariable], rules: &RuleBase) -> Result<Engine> {
        let output_name = match rules.rules.first() {
            Some(r) => r.consequent.variable.clone(),
            None => return Err(Error::Config("rule base is empty".into())),
        };
        if let Some(r) = rules.rules.iter().find(|r| r.consequent.variable != output_name) {
            return Err(Error::Config(alloc::format!(
                "rule {} concludes on `{}`, expected output `{}`",
                r.id,
                r.consequent.variable,
                output_name
            )));
        }
        let output = variables
            .iter()
            .find(|v| v.name == output_name)
            .cloned()
            .ok_or_else(|| Error::Config(alloc::format!("output variable `{output_name}` is not defined")))?;
        if !output.universe.is_valid() {
            return Err(Error::Config(alloc::format!("output universe of `{output_name}` is invalid")));
        }
        let inputs: Vec<LinguisticVariable> = variables.iter().filter(|v| v.name != output_name).cloned().collect();

        let mut compiled = Vec::with_capacity(rules.len());
        for r in &rules.rules {
            let antecedent = compile(&r.antecedent, &inputs, &r.id)?;
            let (consequent, _) = output.find_term(&r.consequent.term).ok_or_else(|| {
                Error::Config(alloc::format!("rule {}: unknown output term `{}`", r.id, r.consequent.term))
            })?;
            if !(r.weight > 0.0 && r.weight <= 1.0) {
                return Err(Error::Config(alloc::format!("rule {}: weight {} outside (0, 1]", r.id, r.weight)));
            }
            compiled.push(CompiledRule { id: r.id.clone(), antecedent, consequent, weight: r.weight });
        }

        let grid = output.universe.grid();
        let sampled = output.terms.iter().map(|t| grid.iter().map(|&x| t.mf.eval(x)).collect()).collect();
        Ok(Engine { inputs, output, rules: compiled, sampled })
    }

    pub fn inputs(&self) -> &[LinguisticVariable] {
        &self.inputs
    }

    pub fn output(&self) -> &LinguisticVariable {
        &self.output
    }

    pub fn rule_ids(&self) -> impl Iterator<Item = &str> {
        self.rules.iter().map(|r| r.id.as_str())
    }

    /// Firing strengths of all rules.
    pub fn fire(&self, inputs: &CrispInputs) -> Result<ActivationTrace> {
        let values: Vec<Option<f64>> = self.inputs.iter().map(|v| inputs.get(&v.name).copied()).collect();
        let mut trace = ActivationTrace { rules: Vec::with_capacity(self.rules.len()) };
        for r in &self.rules {
            let s = self.strength(&r.antecedent, &values)? * r.weight;
            trace.rules.push(RuleActivation {
                rule: r.id.clone(),
                strength: s,
                consequent: self.output.terms[r.consequent].name.clone(),
                contributes: s > 0.0,
            });
        }
        Ok(trace)
    }

    fn strength(&self, e: &Compiled, values: &[Option<f64>]) -> Result<f64> {
        Ok(match e {
            Compiled::Atom { var, term } => {
                let v = &self.inputs[*var];
                let x = values[*var].ok_or_else(|| Error::UnboundVariable(v.name.clone()))?;
                v.terms[*term].mf.eval(x)
            }
            Compiled::And(parts) => {
                let mut acc = 1.0f64;
                for p in parts {
                    acc = acc.min(self.strength(p, values)?);
                }
                acc
            }
            Compiled::Or(parts) => {
                let mut acc = 0.0f64;
                for p in parts {
                    acc = acc.max(self.strength(p, values)?);
                }
                acc
            }
        })
    }

    /// Aggregated output curve for the given per-rule strengths (rule order).
    pub fn aggregate(&self, strengths: &[f64]) -> Vec<f64> {
        let mut curve = alloc::vec![0.0f64; self.output.universe.resolution];
        for (r, &s) in self.rules.iter().zip(strengths) {
            if s <= 0.0 {
                continue;
            }
            for (c, &m) in curve.iter_mut().zip(&self.sampled[r.consequent]) {
                *c = (*c).max(m.min(s));
            }
        }
        curve
    }

    pub fn infer(&self, inputs: &CrispInputs) -> Result<Inference> {
        let trace = self.fire(inputs)?;
        let curve = self.aggregate(&trace.strengths());
        Ok(Inference { curve, trace })
    }

    /// Crisp output and the trace that produced it.
    pub fn evaluate(&self, inputs: &CrispInputs) -> Result<(f64, ActivationTrace)> {
        let inf = self.infer(inputs)?;
        Ok((defuzz_centroid(&inf.curve, &self.output.universe), inf.trace))
    }

    /// Recomputes the crisp output from recorded strengths.
    pub fn replay(&self, trace: &ActivationTrace) -> f64 {
        defuzz_centroid(&self.aggregate(&trace.strengths()), &self.output.universe)
    }
}

fn compile(e: &Expr, inputs: &[LinguisticVariable], rule: &str) -> Result<Compiled> {
    Ok(match e {
        Expr::Is(a) => {
            let (var, v) =
                inputs.iter().enumerate().find(|(_, v)| v.name == a.variable).ok_or_else(|| {
                    Error::Config(alloc::format!("rule {rule}: unknown input variable `{}`", a.variable))
                })?;
            let (term, _) = v.find_term(&a.term).ok_or_else(|| {
                Error::Config(alloc::format!("rule {rule}: unknown term `{}` for `{}`", a.term, a.variable))
            })?;
            Compiled::Atom { var, term }
        }
        Expr::And(v) => Compiled::And(v.iter().map(|e| compile(e, inputs, rule)).collect::<Result<_>>()?),
        Expr::Or(v) => Compiled::Or(v.iter().map(|e| compile(e, inputs, rule)).collect::<Result<_>>()?),
    })
}

/// Centre of mass of `curve` sampled on `universe`, trapezoidal rule.
/// A curve with zero area yields 0.
pub fn defuzz_centroid(curve: &[f64], universe: &Universe) -> f64 {
    let n = curve.len().min(universe.resolution);
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 1..n {
        let (x0, x1) = (universe.point(i - 1), universe.point(i));
        let (m0, m1) = (curve[i - 1], curve[i]);
        num += x0 * m0 + x1 * m1;
        den += m0 + m1;
    }
    if den <= 0.0 {
        return 0.0;
    }
    (num / den).clamp(universe.lo, universe.hi)
}

impl core::fmt::Display for RuleActivation {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{} -> {} @ {:.4}", self.rule, self.consequent, self.strength)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuzzy::dsl::parse_rules;
    use crate::fuzzy::membership::MembershipFunction::*;
    use alloc::vec;

    fn out() -> LinguisticVariable {
        LinguisticVariable::new("Out", Universe::new(-100.0, 100.0))
            .term("Neg", Triangle(-60.0, -30.0, 0.0))
            .term("Zero", Triangle(-10.0, 0.0, 10.0))
            .term("Pos", Triangle(0.0, 30.0, 60.0))
    }

    fn x() -> LinguisticVariable {
        LinguisticVariable::new("X", Universe::new(0.0, 1.0))
            .term("Lo", Trapezoid(0.0, 0.0, 0.2, 0.6))
            .term("Hi", Trapezoid(0.4, 0.8, 1.0, 1.0))
    }

    fn engine(src: &str) -> Engine {
        let vars = vec![x(), out()];
        Engine::new(&vars, &parse_rules(src, &vars).unwrap()).unwrap()
    }

    fn inputs(v: f64) -> CrispInputs {
        let mut m = CrispInputs::new();
        m.insert("X".into(), v);
        m
    }

    #[test]
    fn centroid_of_symmetric_triangle() {
        let u = Universe::new(-100.0, 100.0);
        let curve: Vec<f64> = u.grid().iter().map(|&x| Triangle(-10.0, 0.0, 10.0).eval(x)).collect();
        assert!(defuzz_centroid(&curve, &u).abs() < 1e-12);
    }

    #[test]
    fn centroid_of_uniform_curve() {
        let u = Universe::new(0.0, 100.0);
        let curve = vec![1.0; u.resolution];
        assert!((defuzz_centroid(&curve, &u) - 50.0).abs() < 1e-9);
    }

    #[test]
    fn zero_area_defuzzifies_to_zero() {
        let e = engine("RULE a: IF X IS Hi THEN Out IS Pos");
        let (v, trace) = e.evaluate(&inputs(0.1)).unwrap();
        assert_eq!(v, 0.0);
        assert_eq!(trace.rules.len(), 1);
        assert_eq!(trace.rules[0].strength, 0.0);
        assert!(!trace.rules[0].contributes);
    }

    #[test]
    fn single_full_rule_reproduces_consequent() {
        let e = engine("RULE a: IF X IS Lo THEN Out IS Zero");
        let inf = e.infer(&inputs(0.1)).unwrap();
        let grid = e.output().universe.grid();
        for (c, x) in inf.curve.iter().zip(&grid) {
            assert_eq!(*c, Triangle(-10.0, 0.0, 10.0).eval(*x));
        }
        assert!(defuzz_centroid(&inf.curve, &e.output().universe).abs() < 1e-9);
    }

    #[test]
    fn unbound_variable_named() {
        let e = engine("RULE a: IF X IS Lo THEN Out IS Zero");
        assert_eq!(e.fire(&CrispInputs::new()), Err(Error::UnboundVariable("X".into())));
    }

    #[test]
    fn weight_scales_strength() {
        let e = engine("RULE a: IF X IS Lo THEN Out IS Neg WEIGHT 0.5");
        let t = e.fire(&inputs(0.0)).unwrap();
        assert_eq!(t.strength_of("a"), Some(0.5));
    }

    #[test]
    fn replay_matches_evaluate() {
        let e = engine("RULE a: IF X IS Lo THEN Out IS Neg\nRULE b: IF X IS Hi THEN Out IS Pos");
        for v in [0.0, 0.3, 0.45, 0.5, 0.7, 1.0] {
            let (m, trace) = e.evaluate(&inputs(v)).unwrap();
            assert!((e.replay(&trace) - m).abs() < 1e-12);
        }
    }

    #[test]
    fn mixed_outputs_rejected() {
        let vars = vec![
            x(),
            out(),
            LinguisticVariable::new("Other", Universe::new(0.0, 1.0)).term("T", Triangle(0.0, 0.5, 1.0)),
        ];
        let rb = parse_rules("RULE a: IF X IS Lo THEN Out IS Neg\nRULE b: IF X IS Hi THEN Other IS T", &vars).unwrap();
        assert!(matches!(Engine::new(&vars, &rb), Err(Error::Config(_))));
    }
}

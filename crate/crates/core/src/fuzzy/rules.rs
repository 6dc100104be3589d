use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use serde::{Deserialize, Serialize};

/// `variable IS term`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Atom {
    pub variable: String,
    pub term: String,
}

impl Atom {
    pub fn new(variable: impl Into<String>, term: impl Into<String>) -> Atom {
        Atom { variable: variable.into(), term: term.into() }
    }
}

/// Antecedent expression. `And`/`Or` are n-ary and kept flat: a child of
/// `And` is never an `And`, a child of `Or` is never an `Or`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expr {
    Is(Atom),
    And(Vec<Expr>),
    Or(Vec<Expr>),
}

impl Expr {
    pub fn is(variable: impl Into<String>, term: impl Into<String>) -> Expr {
        Expr::Is(Atom::new(variable, term))
    }

    pub fn and(parts: impl IntoIterator<Item = Expr>) -> Expr {
        Self::join(parts, true)
    }

    pub fn or(parts: impl IntoIterator<Item = Expr>) -> Expr {
        Self::join(parts, false)
    }

    fn join(parts: impl IntoIterator<Item = Expr>, conj: bool) -> Expr {
        let mut flat = Vec::new();
        for p in parts {
            match (p, conj) {
                (Expr::And(inner), true) | (Expr::Or(inner), false) => flat.extend(inner),
                (p, _) => flat.push(p),
            }
        }
        if flat.len() == 1 {
            return flat.pop().unwrap();
        }
        if conj {
            Expr::And(flat)
        } else {
            Expr::Or(flat)
        }
    }

    /// Every atom in left-to-right order.
    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a Atom>) {
        match self {
            Expr::Is(a) => out.push(a),
            Expr::And(v) | Expr::Or(v) => v.iter().for_each(|e| e.collect_atoms(out)),
        }
    }

    /// Evaluates with min for AND and max for OR; `degree` supplies atom truth.
    pub fn evaluate<E>(&self, degree: &mut impl FnMut(&Atom) -> Result<f64, E>) -> Result<f64, E> {
        match self {
            Expr::Is(a) => degree(a),
            Expr::And(v) => {
                let mut acc = 1.0f64;
                for e in v {
                    acc = acc.min(e.evaluate(degree)?);
                }
                Ok(acc)
            }
            Expr::Or(v) => {
                let mut acc = 0.0f64;
                for e in v {
                    acc = acc.max(e.evaluate(degree)?);
                }
                Ok(acc)
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Is(a) => write!(f, "{} IS {}", a.variable, a.term),
            Expr::And(v) => {
                for (i, e) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" AND ")?;
                    }
                    if matches!(e, Expr::Or(_)) {
                        write!(f, "({e})")?;
                    } else {
                        write!(f, "{e}")?;
                    }
                }
                Ok(())
            }
            Expr::Or(v) => {
                for (i, e) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" OR ")?;
                    }
                    write!(f, "{e}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rule {
    pub id: String,
    pub antecedent: Expr,
    pub consequent: Atom,
    pub weight: f64,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "RULE {}: IF {} THEN {} IS {}",
            self.id, self.antecedent, self.consequent.variable, self.consequent.term
        )?;
        if self.weight != 1.0 {
            write!(f, " WEIGHT {}", self.weight)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RuleBase {
    pub rules: Vec<Rule>,
}

impl RuleBase {
    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn get(&self, id: &str) -> Option<&Rule> {
        self.rules.iter().find(|r| r.id == id)
    }
}

impl fmt::Display for RuleBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn flattening() {
        let e = Expr::or([Expr::or([Expr::is("A", "x"), Expr::is("A", "y")]), Expr::is("B", "z")]);
        assert!(matches!(&e, Expr::Or(v) if v.len() == 3));
        assert_eq!(Expr::and([Expr::is("A", "x")]), Expr::is("A", "x"));
    }

    #[test]
    fn printing_parenthesizes_or_under_and() {
        let e = Expr::and([Expr::or([Expr::is("P", "Low"), Expr::is("P", "VeryLow")]), Expr::is("M", "High")]);
        assert_eq!(e.to_string(), "(P IS Low OR P IS VeryLow) AND M IS High");
        let o = Expr::or([Expr::and([Expr::is("A", "x"), Expr::is("B", "y")]), Expr::is("C", "z")]);
        assert_eq!(o.to_string(), "A IS x AND B IS y OR C IS z");
    }

    #[test]
    fn min_max_semantics() {
        let e = Expr::and([Expr::is("A", "High"), Expr::is("B", "Low")]);
        let mut deg = |a: &Atom| -> Result<f64, ()> { Ok(if a.variable == "A" { 0.7 } else { 0.4 }) };
        assert_eq!(e.evaluate(&mut deg), Ok(0.4));
        let o = Expr::or([Expr::is("A", "High"), Expr::is("B", "Low")]);
        assert_eq!(o.evaluate(&mut deg), Ok(0.7));
        let z = Expr::is("A", "High");
        assert_eq!(z.evaluate(&mut |_: &Atom| -> Result<f64, ()> { Ok(0.0) }), Ok(0.0));
    }
}

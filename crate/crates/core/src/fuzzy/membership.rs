use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

/// Default number of grid points used to sample an output universe.
pub const DEFAULT_RESOLUTION: usize = 2001;

/// Closed interval of discourse, sampled on a uniform grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Universe {
    pub lo: f64,
    pub hi: f64,
    #[serde(default = "default_resolution")]
    pub resolution: usize,
}

fn default_resolution() -> usize {
    DEFAULT_RESOLUTION
}

impl Universe {
    pub fn new(lo: f64, hi: f64) -> Self {
        Universe { lo, hi, resolution: DEFAULT_RESOLUTION }
    }

    pub fn with_resolution(mut self, resolution: usize) -> Self {
        self.resolution = resolution;
        self
    }

    pub fn is_valid(&self) -> bool {
        self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi && self.resolution >= 3
    }

    pub fn span(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn step(&self) -> f64 {
        self.span() / (self.resolution - 1) as f64
    }

    /// Grid point `i`; the last point is exactly `hi`.
    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.resolution {
            self.hi
        } else {
            self.lo + self.step() * i as f64
        }
    }

    pub fn grid(&self) -> Vec<f64> {
        (0..self.resolution).map(|i| self.point(i)).collect()
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }
}

/// Piecewise-linear membership shapes.
///
/// Degenerate edges (`a == b` or `c == d`) act as vertical shoulders: the
/// plateau extends to include the shared endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", content = "params", rename_all = "lowercase")]
pub enum MembershipFunction {
    #[serde(rename = "tri")]
    Triangle(f64, f64, f64),
    #[serde(rename = "trap")]
    Trapezoid(f64, f64, f64, f64),
}

impl MembershipFunction {
    pub fn params(&self) -> Vec<f64> {
        match *self {
            MembershipFunction::Triangle(a, b, c) => alloc::vec![a, b, c],
            MembershipFunction::Trapezoid(a, b, c, d) => alloc::vec![a, b, c, d],
        }
    }

    pub fn is_ordered(&self) -> bool {
        let p = self.params();
        p.iter().all(|v| v.is_finite()) && p.windows(2).all(|w| w[0] <= w[1])
    }

    /// Lowest and highest points with non-zero membership (closed hull).
    pub fn support(&self) -> (f64, f64) {
        match *self {
            MembershipFunction::Triangle(a, _, c) => (a, c),
            MembershipFunction::Trapezoid(a, _, _, d) => (a, d),
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            MembershipFunction::Triangle(a, b, c) => trapezoid(a, b, b, c, x),
            MembershipFunction::Trapezoid(a, b, c, d) => trapezoid(a, b, c, d, x),
        }
    }

    /// Abscissa of the peak (midpoint of the plateau for trapezoids).
    pub fn center(&self) -> f64 {
        match *self {
            MembershipFunction::Triangle(_, b, _) => b,
            MembershipFunction::Trapezoid(_, b, c, _) => 0.5 * (b + c),
        }
    }
}

fn trapezoid(a: f64, b: f64, c: f64, d: f64, x: f64) -> f64 {
    if x.is_nan() || x < a || x > d {
        0.0
    } else if x >= b && x <= c {
        1.0
    } else if x < b {
        (x - a) / (b - a)
    } else {
        (d - x) / (d - c)
    }
}

/// A named quantity with linguistic terms over a shared universe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinguisticVariable {
    pub name: String,
    pub universe: Universe,
    pub terms: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub name: String,
    #[serde(flatten)]
    pub mf: MembershipFunction,
}

impl LinguisticVariable {
    pub fn new(name: impl Into<String>, universe: Universe) -> Self {
        LinguisticVariable { name: name.into(), universe, terms: Vec::new() }
    }

    pub fn term(mut self, name: impl Into<String>, mf: MembershipFunction) -> Self {
        self.terms.push(Term { name: name.into(), mf });
        self
    }

    pub fn find_term(&self, name: &str) -> Option<(usize, &Term)> {
        self.terms.iter().enumerate().find(|(_, t)| t.name == name)
    }

    pub fn membership(&self, term: &str, x: f64) -> Option<f64> {
        self.find_term(term).map(|(_, t)| t.mf.eval(x))
    }
}

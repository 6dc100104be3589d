//! Engine centroids against an independent fine-grid Mamdani evaluation, plus
//! membership and defuzzification properties.

use proptest::prelude::*;
use subaudit_core::fuzzy::{
    defuzz_centroid, parse_rules, Atom, CrispInputs, Engine, Expr, LinguisticVariable, MembershipFunction, Rule,
    RuleBase, Universe,
};
use subaudit_core::system::build_bundled_system;

const ORACLE_POINTS: usize = 100_000;

/// Trapezoid evaluated from scratch, shoulders included.
fn mu(p: &[f64], x: f64) -> f64 {
    let (a, b, c, d) = match *p {
        [a, b, c] => (a, b, b, c),
        [a, b, c, d] => (a, b, c, d),
        _ => unreachable!(),
    };
    if x < a || x > d {
        return 0.0;
    }
    let up = if b > a { (x - a) / (b - a) } else { 1.0 };
    let down = if d > c { (d - x) / (d - c) } else { 1.0 };
    up.min(down).min(1.0)
}

/// Rectangle-midpoint centroid of `max_k min(s_k, mu_k(x))` over `[lo, hi]`.
fn oracle_centroid(lo: f64, hi: f64, clipped: &[(f64, Vec<f64>)]) -> f64 {
    let h = (hi - lo) / ORACLE_POINTS as f64;
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..ORACLE_POINTS {
        let x = lo + (i as f64 + 0.5) * h;
        let m = clipped.iter().map(|(s, p)| s.min(mu(p, x))).fold(0.0, f64::max);
        num += x * m;
        den += m;
    }
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

#[derive(Debug, Clone)]
struct RandomSystem {
    /// Sorted breakpoints per output term, 3 or 4 of them.
    out_terms: Vec<Vec<f64>>,
    /// (input term index, output term index, weight) per rule.
    rules: Vec<(usize, usize, f64)>,
    /// Crisp input values for x1 and x2.
    x: (f64, f64),
    /// AND or OR join for two-atom rules.
    joins: Vec<bool>,
}

fn breakpoints(lo: f64, hi: f64) -> impl Strategy<Value = Vec<f64>> {
    let span = hi - lo;
    (lo..hi - 0.05 * span, prop::bool::ANY, prop::collection::vec(0.0..1.0f64, 3)).prop_map(move |(start, tri, fr)| {
        // widths of at least 2% of the span keep features well above the grid step
        let w = |f: f64| 0.02 * span + f * 0.3 * span;
        let a = start;
        let b = a + w(fr[0]);
        let c = if tri { b } else { b + w(fr[1]) * 0.5 };
        let d = c + w(fr[2]);
        if tri {
            vec![a, b, d]
        } else {
            vec![a, b, c, d]
        }
    })
}

fn system() -> impl Strategy<Value = RandomSystem> {
    (
        prop::collection::vec(breakpoints(-100.0, 100.0), 2..6),
        prop::collection::vec((0..3usize, 0..8usize, prop_oneof![Just(1.0), 0.1..1.0f64]), 1..7),
        (0.0..10.0f64, 0.0..10.0f64),
        prop::collection::vec(prop::bool::ANY, 7),
    )
        .prop_map(|(out_terms, rules, x, joins)| {
            let n = out_terms.len();
            RandomSystem { rules: rules.into_iter().map(|(i, o, w)| (i, o % n, w)).collect(), out_terms, x, joins }
        })
}

fn mf(p: &[f64]) -> MembershipFunction {
    match *p {
        [a, b, c] => MembershipFunction::Triangle(a, b, c),
        [a, b, c, d] => MembershipFunction::Trapezoid(a, b, c, d),
        _ => unreachable!(),
    }
}

const IN_TERMS: [[f64; 3]; 3] = [[0.0, 0.0, 5.0], [0.0, 5.0, 10.0], [5.0, 10.0, 10.0]];

fn build(sys: &RandomSystem) -> (Engine, CrispInputs) {
    let input = |name: &str| {
        let mut v = LinguisticVariable::new(name, Universe::new(0.0, 10.0));
        for (i, p) in IN_TERMS.iter().enumerate() {
            v = v.term(format!("T{i}"), mf(p));
        }
        v
    };
    let mut out = LinguisticVariable::new("Y", Universe::new(-100.0, 100.0));
    for (i, p) in sys.out_terms.iter().enumerate() {
        out = out.term(format!("O{i}"), mf(p));
    }
    let rules = sys
        .rules
        .iter()
        .enumerate()
        .map(|(k, &(i, o, w))| {
            let first = Expr::is("x1", format!("T{i}"));
            let antecedent = if k % 2 == 0 {
                first
            } else {
                let second = Expr::is("x2", format!("T{}", (i + 1) % 3));
                if sys.joins[k] {
                    Expr::and([first, second])
                } else {
                    Expr::or([first, second])
                }
            };
            Rule { id: format!("R{k}"), antecedent, consequent: Atom::new("Y", format!("O{o}")), weight: w }
        })
        .collect();
    let engine = Engine::new(&[input("x1"), input("x2"), out], &RuleBase { rules }).unwrap();
    let crisp = [("x1".to_string(), sys.x.0), ("x2".to_string(), sys.x.1)].into_iter().collect();
    (engine, crisp)
}

fn oracle(sys: &RandomSystem) -> f64 {
    let (x1, x2) = sys.x;
    let clipped: Vec<(f64, Vec<f64>)> = sys
        .rules
        .iter()
        .enumerate()
        .map(|(k, &(i, o, w))| {
            let a = mu(&IN_TERMS[i], x1);
            let s = if k % 2 == 0 {
                a
            } else {
                let b = mu(&IN_TERMS[(i + 1) % 3], x2);
                if sys.joins[k] {
                    a.min(b)
                } else {
                    a.max(b)
                }
            };
            (s * w, sys.out_terms[o].clone())
        })
        .collect();
    oracle_centroid(-100.0, 100.0, &clipped)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn centroid_matches_fine_grid(sys in system()) {
        let (engine, crisp) = build(&sys);
        let (y, _) = engine.evaluate(&crisp).unwrap();
        let want = oracle(&sys);
        prop_assert!((y - want).abs() <= 1e-3 * 200.0, "engine {y} oracle {want}");
    }

    #[test]
    fn centroid_stays_in_universe(sys in system()) {
        let (engine, crisp) = build(&sys);
        let (y, _) = engine.evaluate(&crisp).unwrap();
        prop_assert!((-100.0..=100.0).contains(&y));
    }

    #[test]
    fn doubling_resolution_barely_moves_centroid(strengths in prop::collection::vec(prop_oneof![Just(0.0), 0.0..1.0f64], 18)) {
        let system = build_bundled_system();
        let coarse = system.engine().unwrap();
        let mut fine_system = system.clone();
        let out = fine_system.output.clone();
        let v = fine_system.variable_mut(&out).unwrap();
        v.universe.resolution = 2 * v.universe.resolution - 1;
        let fine = fine_system.engine().unwrap();
        let a = defuzz_centroid(&coarse.aggregate(&strengths), &coarse.output().universe);
        let b = defuzz_centroid(&fine.aggregate(&strengths), &fine.output().universe);
        prop_assert!((a - b).abs() < 1e-2, "{a} vs {b}");
    }

    #[test]
    fn trace_lists_every_rule_and_replays(sys in system()) {
        let (engine, crisp) = build(&sys);
        let (y, trace) = engine.evaluate(&crisp).unwrap();
        prop_assert_eq!(trace.rules.len(), sys.rules.len());
        for (k, r) in trace.rules.iter().enumerate() {
            prop_assert_eq!(&r.rule, &format!("R{k}"));
            prop_assert!((0.0..=1.0).contains(&r.strength));
        }
        prop_assert!((engine.replay(&trace) - y).abs() <= 1e-6);
    }

    #[test]
    fn membership_is_bounded_and_piecewise_linear(p in breakpoints(-50.0, 50.0), x in -60.0..60.0f64) {
        let f = mf(&p);
        let v = f.eval(x);
        prop_assert!((0.0..=1.0).contains(&v));
        prop_assert!((v - mu(&p, x)).abs() < 1e-12);
        // linear between consecutive breakpoints: midpoint equals mean of ends
        for w in p.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b - a > 1e-9 {
                let lhs = f.eval(0.5 * (a + b));
                let rhs = 0.5 * (f.eval(a + 1e-12 * (b - a)) + f.eval(b - 1e-12 * (b - a)));
                prop_assert!((lhs - rhs).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn membership_is_continuous_inside_support(p in breakpoints(-50.0, 50.0), x in -60.0..60.0f64) {
        let f = mf(&p);
        let (lo, hi) = f.support();
        // the slope is bounded by 1 / (smallest edge width); edges here are >= 1
        if x > lo && x < hi {
            let h = 1e-7;
            prop_assert!((f.eval(x + h) - f.eval(x)).abs() <= h / 1.0 + 1e-12);
        }
    }

    #[test]
    fn stronger_one_sided_rule_pulls_centroid(lo in 0.05..0.95f64, bump in 0.01..0.5f64) {
        // Zero always fires fully; raising Pos moves the output toward Pos
        let x = LinguisticVariable::new("x", Universe::new(0.0, 1.0)).term("Up", MembershipFunction::Triangle(0.0, 1.0, 1.0));
        let y = LinguisticVariable::new("Y", Universe::new(-100.0, 100.0))
            .term("Zero", MembershipFunction::Triangle(-20.0, 0.0, 20.0))
            .term("Pos", MembershipFunction::Triangle(20.0, 60.0, 100.0));
        let vars = [x.clone(), y.clone()];
        let rb = parse_rules("RULE p: IF x IS Up THEN Y IS Pos\nRULE z: IF x IS Up THEN Y IS Zero", &vars).unwrap();
        let e = Engine::new(&vars, &rb).unwrap();
        let at = |s: f64| defuzz_centroid(&e.aggregate(&[s, 1.0]), &e.output().universe);
        let hi = (lo + bump).min(1.0);
        let (a, b) = (at(lo), at(hi));
        prop_assert!(b > a, "{a} -> {b}");
        prop_assert!(b < 60.0);
    }
}

/// Two adjacent terms at strengths 0.5 and 1.0 against the fine-grid oracle.
#[test]
fn adjacent_terms_at_half_and_full_strength() {
    let x = LinguisticVariable::new("x", Universe::new(0.0, 10.0))
        .term("Lo", MembershipFunction::Triangle(0.0, 0.0, 10.0))
        .term("Hi", MembershipFunction::Triangle(0.0, 10.0, 10.0));
    let y = LinguisticVariable::new("Y", Universe::new(0.0, 20.0))
        .term("A", MembershipFunction::Triangle(0.0, 5.0, 10.0))
        .term("B", MembershipFunction::Triangle(5.0, 10.0, 15.0));
    let rb = parse_rules(
        "RULE a: IF x IS Lo THEN Y IS A WEIGHT 0.5\nRULE b: IF x IS Lo THEN Y IS B",
        &[x.clone(), y.clone()],
    )
    .unwrap();
    let e = Engine::new(&[x, y], &rb).unwrap();
    let (got, trace) = e.evaluate(&[("x".to_string(), 0.0)].into_iter().collect()).unwrap();
    assert_eq!(trace.strengths(), vec![0.5, 1.0]);
    let want = oracle_centroid(0.0, 20.0, &[(0.5, vec![0.0, 5.0, 10.0]), (1.0, vec![5.0, 10.0, 15.0])]);
    assert!((got - want).abs() < 1e-3, "{got} vs {want}");
}

/// Triangle(0, 10, 20) clipped at 0.5 is symmetric, so the centroid is 10.
#[test]
fn clipped_symmetric_triangle() {
    let x =
        LinguisticVariable::new("x", Universe::new(0.0, 1.0)).term("Half", MembershipFunction::Triangle(0.0, 0.5, 1.0));
    let y =
        LinguisticVariable::new("Y", Universe::new(0.0, 30.0)).term("T", MembershipFunction::Triangle(0.0, 10.0, 20.0));
    let rb = parse_rules("RULE only: IF x IS Half THEN Y IS T", &[x.clone(), y.clone()]).unwrap();
    let e = Engine::new(&[x, y], &rb).unwrap();
    let inf = e.infer(&[("x".to_string(), 0.25)].into_iter().collect()).unwrap();
    assert_eq!(inf.trace.strengths(), vec![0.5]);
    assert!(inf.curve.iter().all(|&m| m <= 0.5));
    let c = defuzz_centroid(&inf.curve, &e.output().universe);
    assert!((c - 10.0).abs() < 1e-3, "{c}");
    let want = oracle_centroid(0.0, 30.0, &[(0.5, vec![0.0, 10.0, 20.0])]);
    assert!((c - want).abs() < 1e-3);
}

#[test]
fn nothing_fires_gives_zero() {
    let x =
        LinguisticVariable::new("x", Universe::new(0.0, 10.0)).term("Lo", MembershipFunction::Triangle(0.0, 1.0, 2.0));
    let y = LinguisticVariable::new("Y", Universe::new(10.0, 30.0))
        .term("T", MembershipFunction::Triangle(10.0, 20.0, 30.0));
    let rb = parse_rules("RULE a: IF x IS Lo THEN Y IS T", &[x.clone(), y.clone()]).unwrap();
    let e = Engine::new(&[x, y], &rb).unwrap();
    let (c, trace) = e.evaluate(&[("x".to_string(), 9.0)].into_iter().collect()).unwrap();
    assert_eq!(c, 0.0);
    assert!(trace.active().is_empty());
}

#[test]
fn unbound_variable_is_named() {
    let x = LinguisticVariable::new("speed", Universe::new(0.0, 10.0))
        .term("Lo", MembershipFunction::Triangle(0.0, 1.0, 2.0));
    let y =
        LinguisticVariable::new("Y", Universe::new(0.0, 1.0)).term("T", MembershipFunction::Triangle(0.0, 0.5, 1.0));
    let rb = parse_rules("RULE a: IF speed IS Lo THEN Y IS T", &[x.clone(), y.clone()]).unwrap();
    let e = Engine::new(&[x, y], &rb).unwrap();
    let err = e.evaluate(&CrispInputs::new()).unwrap_err();
    assert!(err.to_string().contains("speed"), "{err}");
}

/// Lone clipped terms are the worst case for the grid: a weak clip turns the
/// term into a near-rectangle whose edges fall between grid points, and each
/// edge can misplace up to half a cell of mass. The shift stays under half a
/// step (0.05 here) but can exceed 0.01.
#[test]
fn doubling_resolution_on_lone_terms() {
    let system = build_bundled_system();
    let coarse = system.engine().unwrap();
    let mut fine_system = system.clone();
    let out = fine_system.output.clone();
    fine_system.variable_mut(&out).unwrap().universe.resolution = 4001;
    let fine = fine_system.engine().unwrap();
    let n = coarse.rule_ids().count();
    let mut worst: f64 = 0.0;
    for k in 0..n {
        for step in 1..=1000 {
            let mut s = vec![0.0; n];
            s[k] = step as f64 / 1000.0;
            let a = defuzz_centroid(&coarse.aggregate(&s), &coarse.output().universe);
            let b = defuzz_centroid(&fine.aggregate(&s), &fine.output().universe);
            worst = worst.max((a - b).abs());
        }
    }
    let step = coarse.output().universe.step();
    assert!(worst < 0.5 * step, "worst shift {worst}");
}

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use super::*;
use crate::field::{Embedding, FieldCtx};
use crate::par::Exec;

fn s(v: &[&str]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn system(p: u64, q: u64, vars: &[&str], eqs: &[&str], units: &[&str]) -> DiffSystem {
    DiffSystem::parse(Base::new(p, q, 1).unwrap(), &s(vars), &s(eqs), &s(units), None).unwrap()
}

fn counts(sys: &DiffSystem, ns: &[u64]) -> Vec<u128> {
    count_sequence(sys, ns, &CountOptions::default()).unwrap().counts
}

#[test]
fn multiplicative_group() {
    let gm = system(7, 7, &["x"], &[], &["x"]);
    assert_eq!(counts(&gm, &[1, 2, 3]), vec![6, 48, 342]);
    for n in 1..=8 {
        let (c, exact) = count_points(&gm, n, &CountOptions::default()).unwrap();
        assert_eq!(c, 7u128.pow(n as u32) - 1);
        assert!(exact);
    }
}

#[test]
fn affine_line() {
    let a1 = system(2, 2, &["x"], &[], &[]);
    assert_eq!(counts(&a1, &[1, 2, 3]), vec![2, 4, 8]);
}

#[test]
fn inseparable_quadratic() {
    let sys = system(2, 2, &["x"], &["x@1 - x^2 - 1"], &[]);
    // T^8 + T^2 + 1 = (T^4 + T + 1)^2 has four distinct roots
    assert_eq!(counts(&sys, &[1, 2, 3]), vec![0, 2, 4]);
    let pts = points(&sys, 2, &CountOptions::default()).unwrap();
    assert!(pts.materialized);
    assert_eq!(pts.points.len(), 2);
    for z in &pts.points {
        // the roots of T^2 + T + 1 generate F_4 over F_2
        assert_eq!(pts.field.subfield_degree(&z[0]), 2);
    }
    assert!(points(&sys, 1, &CountOptions::default()).unwrap().points.is_empty());
}

#[test]
fn multivariate_plain_enumeration() {
    // the hyperbola xy = 1 has q^n - 1 points
    let sys = system(3, 3, &["x", "y"], &["x*y - 1"], &[]);
    assert_eq!(counts(&sys, &[1, 2, 3]), vec![2, 8, 26]);
    let pts = points(&sys, 2, &CountOptions::default()).unwrap();
    assert_eq!(pts.points.len(), 8);
    assert!(pts.exact);
}

#[test]
fn free_variables_factor_out() {
    let sys = system(2, 2, &["x", "y", "u"], &["x@1 - x^2 - 1"], &["u"]);
    let (c, _) = count_points(&sys, 3, &CountOptions::default()).unwrap();
    assert_eq!(c, 4 * 8 * 7);
}

#[test]
fn multivariate_twisted_stabilizes() {
    // x@1 = y, y@1 = x: solutions have x^{Q^2} = x with y = x^Q
    let sys = system(2, 2, &["x", "y"], &["x@1 - y", "y@1 - x"], &[]);
    let opts = CountOptions { bound: 4, ..CountOptions::default() };
    let (c, exact) = count_points(&sys, 1, &opts).unwrap();
    assert_eq!(c, 4);
    assert!(!exact);
}

#[test]
fn enumeration_budget_is_reported() {
    let sys = system(2, 2, &["x", "y", "z"], &["x*y*z - 1"], &[]);
    let opts = CountOptions { budget: 1000, ..CountOptions::default() };
    let err = count_points(&sys, 6, &opts).unwrap_err();
    assert_eq!(err.kind(), crate::ErrorKind::Budget);
}

#[test]
fn positive_sigma_dimension_is_distinct_error() {
    let sys = system(2, 2, &["x"], &["x@1 - x@1"], &[]);
    // the equation is identically zero, so x is free and plain
    assert_eq!(counts(&sys, &[1, 2]), vec![2, 4]);
    let sys = system(2, 2, &["x"], &["x@1^2 - x@2"], &[]);
    let err = count_points(&sys, 1, &CountOptions::default()).unwrap_err();
    assert!(err.to_string().contains("σ-dimension"), "{err}");
}

#[test]
fn sequential_and_parallel_agree() {
    let sys = system(3, 3, &["x", "y"], &["x^2 + y^2 - 1"], &[]);
    let ns = [1, 2, 3];
    let seq = count_sequence(&sys, &ns, &CountOptions { exec: Exec::Sequential, ..Default::default() }).unwrap();
    let par = count_sequence(&sys, &ns, &CountOptions { exec: Exec::Parallel, ..Default::default() }).unwrap();
    assert_eq!(seq, par);
    assert!(seq.to_csv().starts_with("n,Q,count,exact\n1,3,"));
}

#[test]
fn reordering_equations_and_variables() {
    let a = system(3, 3, &["x", "y"], &["x*y - 1", "x - y^2"], &[]);
    let b = system(3, 3, &["y", "x"], &["y^2 - x", "y*x - 1"], &[]);
    assert_eq!(counts(&a, &[1, 2, 3]), counts(&b, &[1, 2, 3]));
}

/// Roots of the twisted equation found by scanning a field that contains
/// every root of a polynomial of degree `deg`.
fn brute_force(sys: &DiffSystem, n: u64, deg: u64) -> u64 {
    let twist = sys.base().twist(n);
    let m = (1..=deg).fold(twist.point_field_degree(), num_integer::lcm);
    let field = FieldCtx::cached(sys.base().p, m as usize).unwrap();
    let emb = Embedding::cached(&sys.ring().field, &field).unwrap();
    let plain = sys.plain_vars()[0];
    field
        .subfield_elements(if plain { twist.exponent() } else { m })
        .filter(|a| !(sys.is_unit(0) && a.is_zero()))
        .filter(|a| satisfies(sys.equations(), &field, &emb, twist.exponent(), std::slice::from_ref(a)))
        .count() as u64
}

fn poly_text(coeffs: &[u64]) -> String {
    coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| format!("{c}*x^{i}"))
        .collect::<Vec<_>>()
        .join(" + ")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn plain_fast_path_matches_enumeration(
        p in prop::sample::select(vec![2u64, 3, 5]),
        coeffs in prop::collection::vec(0u64..5, 2..=7),
        n in 1u64..=2,
        unit in any::<bool>(),
    ) {
        let coeffs: Vec<u64> = coeffs.iter().map(|c| c % p).collect();
        let units: &[&str] = if unit { &["x"] } else { &[] };
        let sys = system(p, p, &["x"], &[&poly_text(&coeffs)], units);
        let (fast, exact) = count_points(&sys, n, &CountOptions::default()).unwrap();
        prop_assert!(exact);
        prop_assert_eq!(fast as u64, brute_force(&sys, n, 1));
    }

    #[test]
    fn twisted_fast_path_matches_enumeration(
        p in prop::sample::select(vec![2u64, 3]),
        coeffs in prop::collection::vec(0u64..3, 1..=3),
        unit in any::<bool>(),
    ) {
        let coeffs: Vec<u64> = coeffs.iter().map(|c| c % p).collect();
        let eq = format!("x@1 - ({})", poly_text(&coeffs));
        let units: &[&str] = if unit { &["x"] } else { &[] };
        let sys = system(p, p, &["x"], &[&eq], units);
        let deg = p.max(coeffs.len() as u64 - 1);
        match count_points(&sys, 1, &CountOptions::default()) {
            Ok((fast, _)) => prop_assert_eq!(fast as u64, brute_force(&sys, 1, deg)),
            // x@1 = x^p twists to the zero polynomial
            Err(e) => prop_assert!(e.to_string().contains("σ-dimension")),
        }
    }
}

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn lang_weil_declared_gm() {
    let gm = system(7, 7, &["x"], &[], &["x"]);
    let cs = count_sequence(&gm, &[1, 2, 3, 4, 5, 6], &CountOptions::default()).unwrap();
    let fit = lang_weil_fit(&cs, Some(1), Some(rational(1, 1))).unwrap();
    assert!((fit.constant - 7f64.powf(-0.5)).abs() < 1e-12);
    assert!(!fit.inferred);
    assert!(fit.stable());
    // residual is constant, so its exponent is 0
    assert!(fit.residual_exponent.abs() < 1e-9);
}

#[test]
fn lang_weil_inferred_inseparable() {
    let sys = system(2, 2, &["x"], &["x@1 - x^2 - 1"], &[]);
    let ns: Vec<u64> = (1..=12).collect();
    let cs = count_sequence(&sys, &ns, &CountOptions::default()).unwrap();
    let fit = lang_weil_fit(&cs, None, None).unwrap();
    assert_eq!(fit.d, 1);
    assert_eq!(fit.mu, rational(1, 2));
    assert!(fit.residual_exponent <= 0.55);
    // with μ = 1 the residual grows like Q
    let declared = lang_weil_fit(&cs, Some(1), Some(rational(1, 1))).unwrap();
    assert!((declared.residual_exponent - 1.0).abs() < 0.05);
}

#[test]
fn lang_weil_rejects_bad_input() {
    let sys = system(2, 2, &["x"], &["x^2 + x + 1"], &["x"]);
    let cs = count_sequence(&sys, &[1, 3, 5, 7], &CountOptions::default()).unwrap();
    assert!(lang_weil_fit(&cs, None, None).is_err());
    let cs = count_sequence(&sys, &[1, 2, 3], &CountOptions::default()).unwrap();
    assert!(lang_weil_fit(&cs, None, None).is_err());
}

#[test]
fn limit_degree_examples() {
    let forward = system(5, 5, &["x"], &["x@1 - x^2 - 1"], &[]);
    let r = limit_degree_estimate(&forward, 4, 3, 1).unwrap();
    assert_eq!(r.estimate, Some(1));

    let backward = system(5, 5, &["x"], &["x - x@1^2 - 1"], &[]);
    let r = limit_degree_estimate(&backward, 4, 3, 1).unwrap();
    assert_eq!(r.estimate, Some(2));
    assert_eq!(r.per_level, vec![2, 2, 2]);

    let kummer = system(7, 7, &["x", "y"], &["y^3 - x"], &[]);
    let r = limit_degree_estimate(&kummer, 4, 3, 1).unwrap();
    assert_eq!(r.estimate, Some(1));
}

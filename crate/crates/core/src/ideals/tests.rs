use super::*;
use crate::diffpoly::{parse_poly, ShiftOperator};
use crate::diffvar::{Base, DiffSystem};
use crate::par::Exec;

fn ring(p: u64, vars: &[&str]) -> PolyRing {
    PolyRing::new(FieldCtx::cached(p, 1).unwrap(), vars.iter().map(|v| v.to_string()).collect())
}

fn polys(r: &PolyRing, src: &[&str]) -> Vec<DifferencePolynomial> {
    src.iter().map(|s| parse_poly(r, s).unwrap()).collect()
}

fn member(r: &PolyRing, f: &str, gens: &[&str], k: u32) -> bool {
    let ideal = shift_closure(r, &polys(r, gens), k, 0).unwrap();
    groebner_membership(&parse_poly(r, f).unwrap(), &ideal, GroebnerLimits::default()).unwrap()
}

fn perfect(r: &PolyRing, f: &str, gens: &[&str], b: IdealBounds) -> Membership {
    perfect_membership_bounded(&parse_poly(r, f).unwrap(), &polys(r, gens), &b, 0).unwrap()
}

#[test]
fn closure_adds_shifts() {
    let r = ring(3, &["x"]);
    let i = shift_closure(&r, &polys(&r, &["x@1 - x^2"]), 2, 0).unwrap();
    assert_eq!(i.gens(), polys(&r, &["x@1 - x^2", "x@2 - x@1^2"]).as_slice());
    let i = shift_closure(&r, &polys(&r, &["x"]), 3, 0).unwrap();
    assert_eq!(i.gens(), polys(&r, &["x", "x@1", "x@2", "x@3"]).as_slice());
}

#[test]
fn closure_rejects_small_k() {
    let r = ring(3, &["x"]);
    assert!(shift_closure(&r, &polys(&r, &["x@2 - x"]), 1, 0).is_err());
}

#[test]
fn closure_twists_coefficients() {
    let field = FieldCtx::cached(2, 2).unwrap();
    let r = PolyRing::new(field, vec!["x".into()]).with_generator("w");
    let i = shift_closure(&r, &polys(&r, &["w*x"]), 1, 1).unwrap();
    assert_eq!(i.gens(), polys(&r, &["w*x", "(w+1)*x@1"]).as_slice());
}

#[test]
fn groebner_examples() {
    let r = ring(5, &["x", "y"]);
    assert!(member(&r, "x^2", &["x"], 0));
    assert!(!member(&r, "y", &["x"], 0));
    assert!(member(&r, "x + y", &["x", "y"], 0));
    assert!(member(&r, "x*y@3", &["x"], 0));
    assert!(!member(&r, "x@3*y", &["x"], 0));
    assert!(!member(&r, "1", &["x^2 - y", "x*y - 1"], 0) || member(&r, "y^3 - 1", &["x^2 - y", "x*y - 1"], 0));
}

#[test]
fn groebner_needs_s_polynomials() {
    // y² − 1 is not divisible by either leading term but lies in the ideal
    let r = ring(7, &["x", "y"]);
    assert!(member(&r, "y^3 - 1", &["x^2 - y", "x*y - 1"], 0));
    assert!(!member(&r, "y - 1", &["x^2 - y", "x*y - 1"], 0));
    assert!(member(&r, "1", &["x*y - 1", "x"], 0));
}

#[test]
fn groebner_budget_is_reported() {
    let r = ring(7, &["x", "y", "z"]);
    let ideal = shift_closure(&r, &polys(&r, &["x^2*y + z", "x*y^2 + 1", "x*z^2 + y"]), 0, 0).unwrap();
    let tight = GroebnerLimits {
        max_basis: 4,
        max_pairs: 10,
    };
    let err = groebner_membership(&parse_poly(&r, "x").unwrap(), &ideal, tight).unwrap_err();
    assert_eq!(err.kind(), crate::ErrorKind::Budget);
}

#[test]
fn perfect_examples() {
    let r = ring(2, &["x", "y"]);
    let b = IdealBounds::new(2, 2, 2);
    assert_eq!(perfect(&r, "x", &["x*x@1"], b), Membership::Yes(ShiftOperator::new(vec![1, 1])));
    assert_eq!(perfect(&r, "x", &["x^2"], b), Membership::Yes(ShiftOperator::new(vec![2])));
    assert_eq!(perfect(&r, "y", &["x"], b), Membership::NoWithinBounds);
    assert_eq!(perfect(&r, "x", &["x*x@1"], IdealBounds::new(2, 1, 3)), Membership::NoWithinBounds);
}

#[test]
fn generator_is_its_own_witness() {
    let r = ring(3, &["x", "y"]);
    let b = IdealBounds::new(1, 2, 2);
    let m = perfect(&r, "x@1*y + x", &["x^2 - y", "x@1*y + x"], b);
    assert_eq!(m, Membership::Yes(ShiftOperator::new(vec![1])));
}

#[test]
fn witnesses_verify_independently() {
    let r = ring(2, &["x"]);
    let f = parse_poly(&r, "x").unwrap();
    let gens = polys(&r, &["x*x@1"]);
    let limits = GroebnerLimits::default();
    assert!(verify_witness(&f, &gens, 2, &ShiftOperator::new(vec![1, 1]), 0, limits).unwrap());
    assert!(!verify_witness(&f, &gens, 2, &ShiftOperator::new(vec![2]), 0, limits).unwrap());
    assert!(!verify_witness(&f, &gens, 2, &ShiftOperator::new(vec![]), 0, limits).unwrap());
}

#[test]
fn point_check_examples() {
    let sys = DiffSystem::parse(Base::new(2, 2, 1).unwrap(), &["x".into()], &["x*x@1".into()], &[], None).unwrap();
    let f = parse_poly(sys.ring(), "x").unwrap();
    let c = perfect_point_check(&sys, &f, &IdealBounds::new(2, 2, 2), &PointCheckOptions::default()).unwrap();
    assert!(c.membership.is_yes());
    assert!(c.consistent());
    assert!(c.solutions > 0);

    let sys = DiffSystem::parse(Base::new(2, 2, 1).unwrap(), &["x".into()], &["x".into()], &[], None).unwrap();
    let one = parse_poly(sys.ring(), "1").unwrap();
    let c = perfect_point_check(&sys, &one, &IdealBounds::new(1, 2, 2), &PointCheckOptions::default()).unwrap();
    assert_eq!(c.membership, Membership::NoWithinBounds);
    assert!(c.consistent());
}

#[test]
fn point_check_reports_budget() {
    let sys = DiffSystem::parse(Base::new(2, 2, 1).unwrap(), &["x".into(), "y".into()], &["x".into()], &[], None)
        .unwrap();
    let f = parse_poly(sys.ring(), "x").unwrap();
    let opts = PointCheckOptions {
        ns: vec![1],
        exts: vec![8],
        budget: 1000,
    };
    let err = perfect_point_check(&sys, &f, &IdealBounds::new(1, 1, 1), &opts).unwrap_err();
    assert_eq!(err.kind(), crate::ErrorKind::Budget);
}

#[test]
fn intersection_examples() {
    let r = ring(2, &["x"]);
    let b = IdealBounds::new(2, 2, 2);
    let c = perfect_intersection_check(&r, &polys(&r, &["x"]), &polys(&r, &["x"]), &b, 0).unwrap();
    assert!(c.passed(), "{:?}", c.violations);
    let x = c.candidates.iter().find(|c| c.f.to_string() == "x").unwrap();
    assert_eq!(x.in_st, Membership::Yes(ShiftOperator::new(vec![2])));

    let c = perfect_intersection_check(&r, &polys(&r, &["x"]), &polys(&r, &["x@1"]), &b, 0).unwrap();
    assert!(c.passed(), "{:?}", c.violations);
    let x = c.candidates.iter().find(|c| c.f.to_string() == "x").unwrap();
    assert!(x.in_s.is_yes() && x.in_t.is_yes());
    assert_eq!(x.in_st, Membership::Yes(ShiftOperator::new(vec![1, 1])));
}

#[test]
fn corpus_is_deterministic() {
    let a: Vec<String> = corpus(7, 12).unwrap().iter().map(|c| c.f.to_string()).collect();
    let b: Vec<String> = corpus(7, 12).unwrap().iter().map(|c| c.f.to_string()).collect();
    assert_eq!(a, b);
}

#[test]
fn fuzz_corpus_passes() {
    let report = run_corpus(
        2024,
        50,
        &IdealBounds::new(2, 2, 2),
        &PointCheckOptions::default(),
        Exec::Parallel,
    )
    .unwrap();
    assert_eq!(report.cases.len(), 50);
    assert!(report.yes >= 20, "too few positive cases: {}", report.yes);
    assert!(report.passed(), "{:#?}", report.cases.iter().filter(|c| !c.monotone || !c.verified || c.counterexamples > 0 || !c.intersection_violations.is_empty()).collect::<Vec<_>>());
}

#[test]
fn corpus_seq_matches_par() {
    let b = IdealBounds::new(2, 2, 2);
    let pts = PointCheckOptions::default();
    let s = run_corpus(5, 8, &b, &pts, Exec::Sequential).unwrap();
    let p = run_corpus(5, 8, &b, &pts, Exec::Parallel).unwrap();
    assert_eq!(serde_json::to_string(&s).unwrap(), serde_json::to_string(&p).unwrap());
}

mod props {
    use super::*;
    use proptest::prelude::*;

    fn poly_strategy() -> impl Strategy<Value = String> {
        let term = (1u8..5, 0usize..3, 0u32..3, 0usize..3, 0u32..2).prop_map(|(c, v1, e1, v2, e2)| {
            let names = ["x", "y", "x@1"];
            format!("{c}*{}^{e1}*{}^{e2}", names[v1], names[v2])
        });
        prop::collection::vec(term, 1..4).prop_map(|ts| ts.join(" + "))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn combinations_are_members(g1 in poly_strategy(), g2 in poly_strategy(), a in poly_strategy(), b in poly_strategy()) {
            let r = ring(5, &["x", "y"]);
            let [g1, g2, a, b] = [&g1, &g2, &a, &b].map(|s| parse_poly(&r, s).unwrap());
            let f = a.mul(&g1).add(&b.mul(&g2));
            let ideal = shift_closure(&r, &[g1.clone(), g2.clone()], 1, 0).unwrap();
            prop_assert!(groebner_membership(&f, &ideal, GroebnerLimits::default()).unwrap());
            let with_f = shift_closure(&r, &[g1, f.add(&a)], 1, 0).unwrap();
            prop_assert!(groebner_membership(&f.add(&a), &with_f, GroebnerLimits::default()).unwrap());
        }
    }
}

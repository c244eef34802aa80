use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::error::Error;
use crate::field::FieldCtx;

fn ring(p: u64, deg: usize, vars: &[&str]) -> PolyRing {
    PolyRing::new(
        Arc::new(FieldCtx::new(p, deg).unwrap()),
        vars.iter().map(|s| s.to_string()).collect(),
    )
    .with_generator("w")
}

fn endo(r: &PolyRing, pairs: &[(&str, &str)]) -> EndoSpec {
    let map: BTreeMap<String, String> = pairs
        .iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
    parse_endo(r, &map).unwrap()
}

fn random_poly(r: &PolyRing, rng: &mut ChaCha8Rng) -> DifferencePolynomial {
    let mut p = r.zero();
    for _ in 0..rng.gen_range(0..5) {
        let mut t = r.constant(r.field.random(rng));
        for _ in 0..rng.gen_range(0..3) {
            let v = r.var(rng.gen_range(0..r.vars.len()), rng.gen_range(0..3));
            t = t.mul(&v.pow(rng.gen_range(1..3)));
        }
        p = p.add(&t);
    }
    p
}

#[test]
fn parse_examples() {
    let r2 = ring(2, 1, &["x"]);
    let p = parse_poly(&r2, "x@1 - x^2 - 1").unwrap();
    assert_eq!(p, parse_poly(&r2, "x@1 + x^2 + 1").unwrap());
    assert_eq!(p.to_string(), "x^2 + x@1 + 1");

    let r7 = ring(7, 1, &["x", "y"]);
    let q = parse_poly(&r7, "y@1*y - 3*x").unwrap();
    assert_eq!(q, parse_poly(&r7, "y*y@1 + 4*x").unwrap());

    assert_eq!(
        parse_poly(&r2, "x@@1").unwrap_err(),
        Error::Syntax {
            column: 2,
            msg: "expected a nonnegative integer shift".into()
        }
    );
    assert_eq!(
        parse_poly(&r2, "z + 1").unwrap_err(),
        Error::UnknownVariable("z".into())
    );
    assert!(matches!(parse_poly(&r2, "x@-1"), Err(Error::Syntax { column: 2, .. })));
}

#[test]
fn precedence_and_towers() {
    let r = ring(101, 1, &["x"]);
    let p = |s| parse_poly(&r, s).unwrap();
    assert_eq!(p("2^3"), p("8"));
    assert_eq!(p("2^1^3"), p("2"));
    assert_eq!(p("x^2^2"), p("x*x*x*x"));
    assert_eq!(p("1 + 2*3"), p("7"));
    assert_eq!(p("(1 + 2)*3"), p("9"));
    // unary minus binds to the atom, so the square absorbs the sign
    assert_eq!(p("-x^2"), p("x^2"));
    assert_eq!(p("0 - x^2"), p("-1*x^2"));
}

#[test]
fn generator_constant() {
    let r = ring(2, 2, &["y"]);
    let p = parse_poly(&r, "w*y + w^2").unwrap();
    let q = parse_poly(&r, "w*y + w + 1").unwrap();
    assert_eq!(p, q);
    assert_eq!(parse_poly(&r, &p.to_string()).unwrap(), p);
}

#[test]
fn endo_examples() {
    let r = ring(7, 1, &["x", "y"]);
    let g = endo(&r, &[("x", "x"), ("y", "2*y")]);
    let h = endo(&r, &[("x", "x"), ("y", "4*y")]);
    let p = parse_poly(&r, "y^3 - x").unwrap();
    assert_eq!(apply_endo(&g, &p).unwrap(), p);
    assert_eq!(apply_endo(&EndoSpec::identity(&r), &p).unwrap(), p);
    assert_eq!(compose_endo(&g, &h).unwrap(), EndoSpec::identity(&r));

    let r4 = ring(2, 2, &["x", "y"]);
    let mut m = BTreeMap::new();
    m.insert("x".to_string(), "x".to_string());
    m.insert("y".to_string(), "y@0^2".to_string());
    m.insert("constTwist".to_string(), "1".to_string());
    let s = parse_endo(&r4, &m).unwrap();
    assert_eq!(s.const_twist(), 1);

    let mut bad = BTreeMap::new();
    bad.insert("x".to_string(), "z".to_string());
    assert_eq!(
        parse_endo(&ring(7, 1, &["x"]), &bad).unwrap_err(),
        Error::UnknownVariable("z".into())
    );
}

#[test]
fn twisted_constants() {
    // constants squared: w -> w^2 = w + 1 in F_4
    let r = ring(2, 2, &["y"]);
    let frob = endo(&r, &[("y", "y"), ("constTwist", "1")]);
    let p = parse_poly(&r, "w*y").unwrap();
    assert_eq!(
        apply_endo(&frob, &p).unwrap(),
        parse_poly(&r, "(w + 1)*y").unwrap()
    );
    let twice = compose_endo(&frob, &frob).unwrap();
    assert_eq!(twice, EndoSpec::identity(&r));
}

#[test]
fn twist_substitute_examples() {
    let r = ring(2, 1, &["x"]);
    let p = parse_poly(&r, "x@1 - x^2 - 1").unwrap();
    assert_eq!(p.twist_substitute(1).unwrap(), r.one());
    let r7 = ring(7, 1, &["x"]);
    let q = parse_poly(&r7, "x@1 - x").unwrap();
    assert!(q.twist_substitute(0).unwrap().is_zero());
    let r3 = ring(3, 1, &["x"]);
    assert_eq!(
        parse_poly(&r3, "x@2").unwrap().twist_substitute(1).unwrap(),
        parse_poly(&r3, "x^9").unwrap()
    );
}

#[test]
fn shift_operator_applies_products() {
    let r = ring(2, 1, &["x"]);
    let x = parse_poly(&r, "x").unwrap();
    let nu = ShiftOperator::new(vec![1, 1]);
    assert_eq!(nu.apply(&x, 0), parse_poly(&r, "x*x@1").unwrap());
    assert_eq!(nu.to_string(), "1+σ");
    assert_eq!(nu.weight(), 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn print_parse_roundtrip(seed in any::<u64>(), which in 0usize..3) {
        let r = [ring(2, 2, &["x", "y"]), ring(7, 1, &["x", "y"]), ring(3, 2, &["a", "b1"])][which].clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = random_poly(&r, &mut rng);
        prop_assert_eq!(parse_poly(&r, &p.to_string()).unwrap(), p);
    }

    #[test]
    fn apply_is_ring_homomorphism(seed in any::<u64>()) {
        let r = ring(3, 2, &["x", "y"]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = EndoSpec::new(&r, vec![random_poly(&r, &mut rng), random_poly(&r, &mut rng)], rng.gen_range(0..2)).unwrap();
        let p = random_poly(&r, &mut rng);
        let q = random_poly(&r, &mut rng);
        prop_assert_eq!(apply_endo(&f, &p.add(&q)).unwrap(), apply_endo(&f, &p).unwrap().add(&apply_endo(&f, &q).unwrap()));
        prop_assert_eq!(apply_endo(&f, &p.mul(&q)).unwrap(), apply_endo(&f, &p).unwrap().mul(&apply_endo(&f, &q).unwrap()));
    }

    #[test]
    fn composition_is_associative(seed in any::<u64>()) {
        let r = ring(2, 2, &["x", "y"]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let small = |rng: &mut ChaCha8Rng| {
            let imgs = (0..2).map(|_| {
                let mut p = r.zero();
                for _ in 0..2 {
                    let t = r.constant(r.field.random(rng)).mul(&r.var(rng.gen_range(0..2), 0));
                    p = p.add(&t);
                }
                p.add(&r.constant(r.field.random(rng)))
            }).collect();
            EndoSpec::new(&r, imgs, rng.gen_range(0..2)).unwrap()
        };
        let (f, g, h) = (small(&mut rng), small(&mut rng), small(&mut rng));
        let p = random_poly(&r, &mut rng);
        let fg = compose_endo(&f, &g).unwrap();
        prop_assert_eq!(compose_endo(&fg, &h).unwrap(), compose_endo(&f, &compose_endo(&g, &h).unwrap()).unwrap());
        prop_assert_eq!(apply_endo(&fg, &p).unwrap(), apply_endo(&f, &apply_endo(&g, &p).unwrap()).unwrap());
    }
}

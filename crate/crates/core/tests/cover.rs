use std::collections::BTreeMap;

use diffcheb::cover::{histogram_csv, CoverInput, CoverSpec, Level};
use diffcheb::diffvar::{Base, CountOptions, DiffSystem};
use diffcheb::field::FqElement;
use diffcheb::gauss;
use diffcheb::quandle::CentralFunction;
use num_bigint::BigUint;

fn strings(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn map(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

fn gm(p: u64, q: u64, q0: u64, generator: Option<&str>) -> DiffSystem {
    DiffSystem::parse(Base::new(p, q, q0).unwrap(), &strings(&["x"]), &[], &strings(&["x"]), generator).unwrap()
}

fn kummer() -> CoverSpec {
    let input = CoverInput {
        fiber_vars: strings(&["y"]),
        fiber_equations: strings(&["y^3 - x"]),
        fiber_units: strings(&["y"]),
        group_generators: vec![map(&[("y", "2*y")])],
        sigma_tilde: BTreeMap::new(),
        const_field_degree: 1,
        validation_level: 2,
        fiber_extension: Some(3),
    };
    CoverSpec::build(&gm(7, 7, 1, None), &input, &CountOptions::default()).unwrap()
}

fn twisted_kummer() -> CoverSpec {
    let input = CoverInput {
        fiber_vars: strings(&["y"]),
        fiber_equations: strings(&["y^3 - x"]),
        fiber_units: strings(&["y"]),
        group_generators: vec![map(&[("y", "w*y")])],
        sigma_tilde: map(&[("y", "y"), ("constTwist", "1")]),
        const_field_degree: 1,
        validation_level: 1,
        fiber_extension: Some(3),
    };
    CoverSpec::build(&gm(2, 4, 2, Some("w")), &input, &CountOptions::default()).unwrap()
}

fn x_point(lv: &Level, v: u64) -> Vec<FqElement> {
    vec![lv.points.field.from_u64(v)]
}

/// ζ with g(y) = ζ y, read off at a fiber point.
fn zeta(cov: &CoverSpec, lv: &Level, g: usize, z: &[FqElement]) -> FqElement {
    let f = &lv.fiber_field;
    let image = cov.act(lv, g, z);
    f.mul(&image[1], &f.inv(&z[1]).unwrap())
}

#[test]
fn kummer_structure() {
    let cov = kummer();
    assert_eq!(cov.group().len(), 3);
    assert_eq!(cov.operator(), &[0, 1, 2]);
    let s = cov.sigma();
    assert_eq!(s.len(), 3);
    for a in 0..3 {
        for b in 0..3 {
            assert_eq!(s.conj(a, b), a);
        }
    }
    assert_eq!(cov.domains().domains.len(), 3);
}

#[test]
fn kummer_fibers() {
    let cov = kummer();
    let lv = cov.level(1, &CountOptions::default()).unwrap();
    let f = &lv.fiber_field;
    let lift = |v: u64| lv.lift.apply(f, &lv.points.field.from_u64(v));

    let fib = cov.fiber(&lv, &x_point(&lv, 1)).unwrap();
    let mut ys: Vec<FqElement> = fib.iter().map(|z| z[1].clone()).collect();
    let mut want = vec![lift(1), lift(2), lift(4)];
    ys.sort();
    want.sort();
    assert_eq!(ys, want);

    let fib = cov.fiber(&lv, &x_point(&lv, 2)).unwrap();
    assert_eq!(fib.len(), 3);
    assert!(fib.iter().all(|z| f.subfield_degree(&z[1]) == 3));

    let fib = cov.fiber(&lv, &x_point(&lv, 6)).unwrap();
    assert_eq!(fib.len(), 3);
    assert!(fib.iter().all(|z| f.subfield_degree(&z[1]) == 1));

    for z in &fib {
        assert_eq!(cov.inertia(&lv, z), vec![0]);
    }
}

#[test]
fn kummer_power_residue_oracle() {
    let cov = kummer();
    for n in 1..=3u64 {
        let lv = cov.level(n, &CountOptions::default()).unwrap();
        let pf = &lv.points.field;
        let exp = (BigUint::from(7u32).pow(n as u32) - 1u32) / 3u32;
        for r in cov.substitutions(&lv, Default::default()).unwrap() {
            let z = &cov.fiber(&lv, &r.point).unwrap()[0];
            let oracle = lv.lift.apply(&lv.fiber_field, &pf.pow(&r.point[0], &exp));
            assert_eq!(zeta(&cov, &lv, r.class_rep, z), oracle);
        }
    }
}

#[test]
fn kummer_substitution_examples() {
    let cov = kummer();
    let lv = cov.level(1, &CountOptions::default()).unwrap();
    let f = &lv.fiber_field;
    let z1 = &cov.fiber(&lv, &x_point(&lv, 1)).unwrap()[0];
    for (x, want) in [(3u64, 2u64), (1, 1), (2, 4)] {
        let r = cov.frobenius_substitution(&lv, &x_point(&lv, x)).unwrap();
        assert_eq!(zeta(&cov, &lv, r.class_rep, z1), f.from_u64(want), "x = {x}");
    }
}

#[test]
fn kummer_histograms_are_uniform() {
    let cov = kummer();
    let opts = CountOptions::default();
    let h1 = cov.substitution_histogram(1, &opts).unwrap();
    assert_eq!(h1.counts, vec![2, 2, 2]);
    let h2 = cov.substitution_histogram(2, &opts).unwrap();
    assert_eq!(h2.counts, vec![16, 16, 16]);
    let csv = histogram_csv(&[h1, h2]);
    assert!(csv.starts_with("n,domain_id,domain_size,count\n1,0,1,2\n"));
    assert_eq!(csv.lines().count(), 7);
}

#[test]
fn kummer_component_equity() {
    let cov = kummer();
    for n in 1..=2 {
        let counts = cov.twisted_component_counts(n, &CountOptions::default()).unwrap();
        let x = 7u64.pow(n as u32) - 1;
        assert_eq!(counts.iter().sum::<u64>(), 3 * x);
    }
}

#[test]
fn kummer_pushforward_to_base() {
    let cov = kummer();
    let ind = CentralFunction::indicator(cov.sigma(), &[1]).unwrap();
    let pushed = cov.pushforward_to_base(&ind).unwrap();
    assert_eq!(pushed.values(), &[gauss::from_ratio(1, 3)]);
    let one = CentralFunction::constant(cov.sigma(), gauss::one());
    assert_eq!(cov.pushforward_to_base(&one).unwrap().values(), &[gauss::one()]);
}

#[test]
fn twisted_kummer_single_domain() {
    let cov = twisted_kummer();
    assert_eq!(cov.group().len(), 3);
    // g^σ̃ = g², so the operator swaps the two nontrivial elements
    assert_eq!(cov.operator()[0], 0);
    for g in 1..3 {
        assert_eq!(cov.operator()[g], cov.group_with_operators().mul(g, g));
    }
    assert_eq!(cov.domains().domains.len(), 1);
    for n in 1..=2 {
        let h = cov.substitution_histogram(n, &CountOptions::default()).unwrap();
        let q = 2u64.pow(2 * n as u32 + 1);
        assert_eq!(h.counts, vec![q - 1]);
    }
}

#[test]
fn translation_is_not_an_automorphism() {
    let input = CoverInput {
        fiber_vars: strings(&["y"]),
        fiber_equations: strings(&["y^3 - x"]),
        fiber_units: strings(&["y"]),
        group_generators: vec![map(&[("y", "y + 1")])],
        sigma_tilde: BTreeMap::new(),
        const_field_degree: 1,
        validation_level: 1,
        fiber_extension: Some(3),
    };
    let err = CoverSpec::build(&gm(7, 7, 1, None), &input, &CountOptions::default()).unwrap_err();
    assert!(err.to_string().contains("not an automorphism"), "{err}");
}

#[test]
fn group_elements_must_fix_the_base() {
    let input = CoverInput {
        fiber_vars: strings(&["y"]),
        fiber_equations: strings(&["y^3 - x"]),
        group_generators: vec![map(&[("y", "2*y"), ("x", "2*x")])],
        const_field_degree: 1,
        fiber_extension: Some(3),
        ..Default::default()
    };
    assert!(CoverSpec::build(&gm(7, 7, 1, None), &input, &CountOptions::default()).is_err());
}

#[test]
fn inertia_at_a_ramified_point() {
    let line = DiffSystem::parse(Base::new(5, 5, 1).unwrap(), &strings(&["x"]), &[], &[], None).unwrap();
    let input = CoverInput {
        fiber_vars: strings(&["y"]),
        fiber_equations: strings(&["y^2 - x^2"]),
        group_generators: vec![map(&[("y", "-y")])],
        const_field_degree: 1,
        validation_level: 0,
        ..Default::default()
    };
    let cov = CoverSpec::build(&line, &input, &CountOptions::default()).unwrap();
    let lv = cov.level(1, &CountOptions::default()).unwrap();
    let f = &lv.fiber_field;
    assert_eq!(cov.inertia(&lv, &[f.zero(), f.zero()]), vec![0, 1]);
    assert_eq!(cov.inertia(&lv, &[f.one(), f.one()]), vec![0]);
    // the fiber over 0 collapses to one point
    assert!(cov.fiber(&lv, &x_point(&lv, 0)).is_err());
}

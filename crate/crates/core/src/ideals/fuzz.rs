use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{
    perfect_intersection_check, perfect_membership_bounded, perfect_point_check, verify_witness, IdealBounds,
    Membership, PointCheckOptions,
};
use crate::diffpoly::{DifferencePolynomial, Monomial, PolyRing, VarShift};
use crate::diffvar::{Base, DiffSystem};
use crate::error::Result;
use crate::par::Exec;

/// One randomized membership problem: is f in the perfect closure of gens,
/// and is {gens} ∩ {extra} = {gens·extra}?
#[derive(Clone, Debug)]
pub struct CorpusCase {
    pub system: DiffSystem,
    pub f: DifferencePolynomial,
    pub extra: DifferencePolynomial,
}

/// Deterministic corpus mixing random pairs with planted members
/// (f·σf, f², g₁ + g₂·h).
pub fn corpus(seed: u64, size: usize) -> Result<Vec<CorpusCase>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vars = vec!["x".to_string(), "y".to_string()];
    (0..size)
        .map(|i| {
            let p = if i % 2 == 0 { 2 } else { 3 };
            let base = Base::new(p, p, 1)?;
            let ring = PolyRing::new(base.field()?, vars.clone());
            let f0 = random_poly(&mut rng, &ring, 0);
            let (f, gens) = match i % 4 {
                0 => (random_poly(&mut rng, &ring, 1), vec![random_poly(&mut rng, &ring, 1)]),
                1 => (f0.clone(), vec![f0.mul(&f0.shift_by(1, 0))]),
                2 => (f0.clone(), vec![f0.pow(2)]),
                _ => {
                    let g1 = random_poly(&mut rng, &ring, 1);
                    let g2 = random_poly(&mut rng, &ring, 1);
                    let h = random_poly(&mut rng, &ring, 0);
                    (g1.add(&g2.mul(&h)), vec![g1, g2])
                }
            };
            let extra = random_poly(&mut rng, &ring, 1);
            Ok(CorpusCase {
                system: DiffSystem::new(base, ring, gens, Vec::new())?,
                f,
                extra,
            })
        })
        .collect()
}

/// One to three terms, each a product of one or two shifted variables.
fn random_poly(rng: &mut ChaCha8Rng, ring: &PolyRing, max_shift: u32) -> DifferencePolynomial {
    let field = &ring.field;
    let nv = ring.vars.len();
    loop {
        let terms: Vec<(Monomial, _)> = (0..rng.gen_range(1..=3))
            .map(|_| {
                let factors = (0..rng.gen_range(1..=2))
                    .map(|_| {
                        let v = VarShift {
                            var: rng.gen_range(0..nv),
                            shift: rng.gen_range(0..=max_shift),
                        };
                        (v, 1)
                    })
                    .collect();
                let c = field.from_u64(rng.gen_range(1..field.p()));
                (Monomial::from_factors(factors), c)
            })
            .collect();
        let f = DifferencePolynomial::from_terms(ring, terms);
        if !f.is_zero() {
            return f;
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseResult {
    pub p: u64,
    pub f: String,
    pub gens: Vec<String>,
    pub extra: String,
    /// witness at the base bounds
    pub witness: Option<String>,
    /// witness at the enlarged bounds
    pub enlarged_witness: Option<String>,
    pub monotone: bool,
    pub verified: bool,
    pub solutions: u64,
    pub counterexamples: usize,
    pub intersection_candidates: usize,
    pub intersection_violations: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusReport {
    pub seed: u64,
    pub yes: usize,
    pub monotonicity_violations: usize,
    pub witness_failures: usize,
    pub point_inconsistencies: usize,
    pub intersection_violations: usize,
    pub cases: Vec<CaseResult>,
}

impl CorpusReport {
    pub fn passed(&self) -> bool {
        self.monotonicity_violations == 0
            && self.witness_failures == 0
            && self.point_inconsistencies == 0
            && self.intersection_violations == 0
    }
}

/// Runs every check of the ideals module on the corpus.
pub fn run_corpus(
    seed: u64,
    size: usize,
    bounds: &IdealBounds,
    points: &PointCheckOptions,
    exec: Exec,
) -> Result<CorpusReport> {
    let cases = corpus(seed, size)?;
    let results = exec.map(&cases, |c| run_case(c, bounds, points));
    let cases = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(CorpusReport {
        seed,
        yes: cases.iter().filter(|c| c.witness.is_some()).count(),
        monotonicity_violations: cases.iter().filter(|c| !c.monotone).count(),
        witness_failures: cases.iter().filter(|c| !c.verified).count(),
        point_inconsistencies: cases.iter().map(|c| c.counterexamples).sum(),
        intersection_violations: cases.iter().map(|c| c.intersection_violations.len()).sum(),
        cases,
    })
}

fn run_case(case: &CorpusCase, bounds: &IdealBounds, points: &PointCheckOptions) -> Result<CaseResult> {
    let sys = &case.system;
    let twist = sys.base().b();
    let gens = sys.equations();
    let check = perfect_point_check(sys, &case.f, bounds, points)?;
    let enlarged = perfect_membership_bounded(&case.f, gens, &bounds.enlarged(), twist)?;
    let verified = match &check.membership {
        Membership::Yes(nu) => verify_witness(&case.f, gens, bounds.k, nu, twist, bounds.limits)?,
        Membership::NoWithinBounds => true,
    };
    let inter = perfect_intersection_check(sys.ring(), gens, std::slice::from_ref(&case.extra), bounds, twist)?;
    Ok(CaseResult {
        p: sys.base().p,
        f: case.f.to_string(),
        gens: gens.iter().map(|g| g.to_string()).collect(),
        extra: case.extra.to_string(),
        witness: check.membership.witness().map(|nu| nu.to_string()),
        enlarged_witness: enlarged.witness().map(|nu| nu.to_string()),
        monotone: !check.membership.is_yes() || enlarged.is_yes(),
        verified,
        solutions: check.solutions,
        counterexamples: check.counterexamples.len(),
        intersection_candidates: inter.candidates.len(),
        intersection_violations: inter.violations,
    })
}

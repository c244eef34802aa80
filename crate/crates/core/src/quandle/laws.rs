//! Randomized exact checks of the central-function calculus: projection
//! formula, functoriality, base change and Frobenius reciprocity.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::families::{
    catalogue, random_central, random_closed_inclusion, random_constant_fiber_surjection,
    random_morphism,
};
use super::{
    pullback, pushforward, quandle_fiber_product, reciprocity_check, DiffMorphism,
    DiffStructure, ReciprocityHypothesis,
};
use crate::error::Result;

/// Per-law tallies: cases checked and cases where exact equality failed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LawTally {
    pub checked: usize,
    pub failed: usize,
}

impl LawTally {
    fn record(&mut self, ok: bool) {
        self.checked += 1;
        if !ok {
            self.failed += 1;
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub structures: usize,
    pub projection_formula: LawTally,
    pub pullback_functoriality: LawTally,
    pub pushforward_functoriality: LawTally,
    pub base_change: LawTally,
    pub reciprocity_injective: LawTally,
    pub reciprocity_surjective: LawTally,
    /// morphisms whose pushforward is undefined (non-closed image or
    /// non-central average); not counted as failures
    pub skipped: usize,
}

impl LawReport {
    pub fn all_hold(&self) -> bool {
        [
            &self.projection_formula,
            &self.pullback_functoriality,
            &self.pushforward_functoriality,
            &self.base_change,
            &self.reciprocity_injective,
            &self.reciprocity_surjective,
        ]
        .iter()
        .all(|t| t.failed == 0 && t.checked > 0)
    }
}

/// Run `cases` rounds; each round draws a fresh structure and exercises
/// every law on it.
pub fn run_law_suite(seed: u64, cases: usize) -> Result<LawReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cat = catalogue();
    let regular: Vec<DiffStructure> = cat.iter().filter(|s| s.is_regular()).cloned().collect();
    let mut report = LawReport::default();
    for _ in 0..cases {
        let t = cat.choose(&mut rng).expect("nonempty").clone();
        report.structures += 1;
        let source = cat.choose(&mut rng).expect("nonempty").clone();
        if let Some(psi) = random_morphism(&mut rng, &source, &t, 20_000) {
            projection_formula(&mut rng, &psi, &mut report)?;
            pull_functoriality(&mut rng, &psi, &cat, &mut report)?;
        }
        let surj = random_constant_fiber_surjection(&mut rng, &t);
        projection_formula(&mut rng, &surj, &mut report)?;
        reciprocity(&mut rng, &surj, &mut report)?;

        let r = regular.choose(&mut rng).expect("nonempty").clone();
        let incl = random_closed_inclusion(&mut rng, &r);
        projection_formula(&mut rng, &incl, &mut report)?;
        reciprocity(&mut rng, &incl, &mut report)?;

        push_functoriality(&mut rng, &t, &r, &mut report)?;
        base_change(&mut rng, &t, &cat, &mut report)?;
    }
    Ok(report)
}

fn projection_formula(rng: &mut ChaCha8Rng, psi: &DiffMorphism, report: &mut LawReport) -> Result<()> {
    let alpha = random_central(rng, psi.source());
    let beta = random_central(rng, psi.target());
    let lhs = pushforward(psi, &alpha.mul(&pullback(psi, &beta)?)?);
    let rhs = pushforward(psi, &alpha).and_then(|p| p.mul(&beta));
    match (lhs, rhs) {
        (Ok(l), Ok(r)) => report.projection_formula.record(l == r),
        _ => report.skipped += 1,
    }
    Ok(())
}

fn pull_functoriality(
    rng: &mut ChaCha8Rng,
    psi: &DiffMorphism,
    cat: &[DiffStructure],
    report: &mut LawReport,
) -> Result<()> {
    let u = cat.choose(rng).expect("nonempty");
    if let Some(phi) = random_morphism(rng, psi.target(), u, 20_000) {
        let beta = random_central(rng, u);
        let composite = psi.then(&phi)?;
        let lhs = pullback(&composite, &beta)?;
        let rhs = pullback(psi, &pullback(&phi, &beta)?)?;
        report.pullback_functoriality.record(lhs == rhs);
    }
    Ok(())
}

/// Pushforward composes within each hypothesis class: constant-fiber
/// surjections, closed inclusions into regular targets, and a surjection
/// followed by an inclusion.
fn push_functoriality(
    rng: &mut ChaCha8Rng,
    t: &DiffStructure,
    regular: &DiffStructure,
    report: &mut LawReport,
) -> Result<()> {
    let mut check = |psi: &DiffMorphism, phi: &DiffMorphism, rng: &mut ChaCha8Rng| -> Result<()> {
        let alpha = random_central(rng, psi.source());
        let composite = psi.then(phi)?;
        let lhs = pushforward(&composite, &alpha);
        let rhs = pushforward(psi, &alpha).and_then(|a| pushforward(phi, &a));
        match (lhs, rhs) {
            (Ok(l), Ok(r)) => report.pushforward_functoriality.record(l == r),
            _ => report.skipped += 1,
        }
        Ok(())
    };
    let phi = random_constant_fiber_surjection(rng, t);
    if phi.source().len() <= 32 {
        let psi = random_constant_fiber_surjection(rng, phi.source());
        check(&psi, &phi, rng)?;
    }
    let outer = random_closed_inclusion(rng, regular);
    if outer.source().is_regular() {
        let inner = random_closed_inclusion(rng, outer.source());
        check(&inner, &outer, rng)?;
    }
    let surj = random_constant_fiber_surjection(rng, outer.source());
    check(&surj, &outer, rng)
}

fn base_change(
    rng: &mut ChaCha8Rng,
    t: &DiffStructure,
    cat: &[DiffStructure],
    report: &mut LawReport,
) -> Result<()> {
    let psi1 = random_constant_fiber_surjection(rng, t);
    // any surjection onto T will do for the second leg
    let psi2 = if rng.gen_bool(0.5) {
        random_constant_fiber_surjection(rng, t)
    } else {
        let mut found = None;
        for _ in 0..8 {
            let s = cat.choose(rng).expect("nonempty");
            if let Some(m) = random_morphism(rng, s, t, 20_000) {
                if m.is_surjective() {
                    found = Some(m);
                    break;
                }
            }
        }
        match found {
            Some(m) => m,
            None => DiffMorphism::identity(t),
        }
    };
    let fp = quandle_fiber_product(&psi1, &psi2)?;
    let alpha = random_central(rng, psi1.source());
    let lhs = pushforward(&fp.pi2, &pullback(&fp.pi1, &alpha)?);
    let rhs = pushforward(&psi1, &alpha).and_then(|a| pullback(&psi2, &a));
    match (lhs, rhs) {
        (Ok(l), Ok(r)) => report.base_change.record(l == r),
        _ => report.skipped += 1,
    }
    Ok(())
}

fn reciprocity(rng: &mut ChaCha8Rng, psi: &DiffMorphism, report: &mut LawReport) -> Result<()> {
    let alpha = random_central(rng, psi.source());
    let beta = random_central(rng, psi.target());
    let Ok(r) = reciprocity_check(psi, &alpha, &beta) else {
        report.skipped += 1;
        return Ok(());
    };
    match r.hypothesis {
        ReciprocityHypothesis::InjectiveRegularTarget => report.reciprocity_injective.record(r.holds),
        ReciprocityHypothesis::SurjectiveConstantFibers(_) => {
            report.reciprocity_surjective.record(r.holds)
        }
        ReciprocityHypothesis::Neither => {}
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_holds() {
        let r = run_law_suite(11, 40).unwrap();
        assert!(r.all_hold(), "{r:?}");
        println!("{r:?}");
    }
}

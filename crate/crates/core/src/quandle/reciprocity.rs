use serde::Serialize;

use super::{inner_product, pullback, pushforward, CentralFunction, DiffMorphism};
use crate::error::Result;
use crate::gauss::Gauss;

/// Which sufficient condition for reciprocity a morphism meets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ReciprocityHypothesis {
    InjectiveRegularTarget,
    SurjectiveConstantFibers(usize),
    Neither,
}

#[derive(Clone, Debug)]
pub struct ReciprocityReport {
    pub hypothesis: ReciprocityHypothesis,
    pub lhs: Gauss,
    pub rhs: Gauss,
    pub holds: bool,
}

pub fn reciprocity_hypothesis(psi: &DiffMorphism) -> ReciprocityHypothesis {
    if psi.is_injective() && psi.target().is_regular() {
        ReciprocityHypothesis::InjectiveRegularTarget
    } else if let Some(c) = psi.constant_fiber_size() {
        ReciprocityHypothesis::SurjectiveConstantFibers(c)
    } else {
        ReciprocityHypothesis::Neither
    }
}

/// Compare (α, ψ*β)_Σ with (ψ_*α, β)_T exactly and report which hypothesis
/// was available.
pub fn reciprocity_check(
    psi: &DiffMorphism,
    alpha: &CentralFunction,
    beta: &CentralFunction,
) -> Result<ReciprocityReport> {
    let lhs = inner_product(alpha, &pullback(psi, beta)?)?;
    let rhs = inner_product(&pushforward(psi, alpha)?, beta)?;
    Ok(ReciprocityReport {
        hypothesis: reciprocity_hypothesis(psi),
        holds: lhs == rhs,
        lhs,
        rhs,
    })
}

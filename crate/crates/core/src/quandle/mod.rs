//! Finite difference structures (quandles), morphisms and central functions.

mod central;
pub mod families;
mod fiber;
mod group;
pub mod laws;
mod morphism;
mod reciprocity;
mod structure;

pub use central::{inner_product, pullback, pushforward, CentralFunction};
pub use fiber::{quandle_fiber_product, FiberProduct};
pub use group::{coset_quandle, GroupWithOperators};
pub use morphism::DiffMorphism;
pub use reciprocity::{reciprocity_check, reciprocity_hypothesis, ReciprocityHypothesis, ReciprocityReport};
pub use structure::{build_structure, DiffStructure, Partition};

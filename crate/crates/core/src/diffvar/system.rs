use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::diffpoly::{parse_poly, DifferencePolynomial, PolyRing};
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FrobeniusTwist};

/// Base data (p, q, q0): constants live in F_q, and the n-th Frobenius is
/// x ↦ x^Q with Q = q^n·q0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Base {
    pub p: u64,
    pub q: u64,
    pub q0: u64,
}

impl Base {
    pub fn new(p: u64, q: u64, q0: u64) -> Result<Self> {
        FrobeniusTwist::from_sizes(p, q, q0, 1)?;
        Ok(Base { p, q, q0 })
    }

    pub fn twist(&self, n: u64) -> FrobeniusTwist {
        FrobeniusTwist::from_sizes(self.p, self.q, self.q0, n).expect("validated at construction")
    }

    /// log_p q
    pub fn a(&self) -> u64 {
        self.twist(0).a
    }

    /// log_p q0
    pub fn b(&self) -> u64 {
        self.twist(0).b
    }

    pub fn field(&self) -> Result<Arc<FieldCtx>> {
        FieldCtx::cached(self.p, self.a() as usize)
    }
}

/// A system of difference equations with optional unit conditions.
#[derive(Clone, Debug)]
pub struct DiffSystem {
    base: Base,
    ring: PolyRing,
    equations: Vec<DifferencePolynomial>,
    units: Vec<usize>,
}

impl DiffSystem {
    pub fn new(
        base: Base,
        ring: PolyRing,
        equations: Vec<DifferencePolynomial>,
        units: Vec<usize>,
    ) -> Result<Self> {
        if ring.field.p() != base.p || ring.field.degree() as u64 != base.a() {
            return Err(Error::invalid("diffvar", "coefficient field must be F_q"));
        }
        if equations.iter().any(|e| e.ring() != &ring) {
            return Err(Error::invalid("diffvar", "equation over a different ring"));
        }
        let mut units = units;
        if units.iter().any(|&u| u >= ring.vars.len()) {
            return Err(Error::invalid("diffvar", "unit index out of range"));
        }
        units.sort_unstable();
        units.dedup();
        Ok(DiffSystem {
            base,
            ring,
            equations,
            units,
        })
    }

    /// Build from expression strings in the diffpoly grammar.
    pub fn parse(
        base: Base,
        vars: &[String],
        equations: &[String],
        units: &[String],
        generator: Option<&str>,
    ) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = vars.iter().find(|v| !seen.insert(v.as_str())) {
            return Err(Error::invalid("diffvar", format!("variable {dup} declared twice")));
        }
        let mut ring = PolyRing::new(base.field()?, vars.to_vec());
        if let Some(g) = generator {
            ring = ring.with_generator(g);
        }
        let eqs = equations
            .iter()
            .map(|e| parse_poly(&ring, e))
            .collect::<Result<Vec<_>>>()?;
        let units = units
            .iter()
            .map(|u| ring.var_index(u).ok_or_else(|| Error::UnknownVariable(u.clone())))
            .collect::<Result<Vec<_>>>()?;
        DiffSystem::new(base, ring, eqs, units)
    }

    pub fn base(&self) -> Base {
        self.base
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn equations(&self) -> &[DifferencePolynomial] {
        &self.equations
    }

    pub fn units(&self) -> &[usize] {
        &self.units
    }

    pub fn num_vars(&self) -> usize {
        self.ring.vars.len()
    }

    /// Variables that never occur shifted. They carry the implicit equation
    /// v@1 = v, so their points are fixed by the Frobenius.
    pub fn plain_vars(&self) -> Vec<bool> {
        let mut plain = vec![true; self.num_vars()];
        for e in &self.equations {
            for v in e.support() {
                if v.shift > 0 {
                    plain[v.var] = false;
                }
            }
        }
        plain
    }

    /// Variables occurring in some equation.
    pub fn constrained_vars(&self) -> Vec<bool> {
        let mut used = vec![false; self.num_vars()];
        for e in &self.equations {
            for v in e.support() {
                used[v.var] = true;
            }
        }
        used
    }

    pub fn is_unit(&self, var: usize) -> bool {
        self.units.binary_search(&var).is_ok()
    }

    /// The same system with extra equations and unit conditions.
    pub fn with_extra(&self, equations: &[DifferencePolynomial], units: &[usize]) -> Result<Self> {
        let mut eqs = self.equations.clone();
        eqs.extend_from_slice(equations);
        let mut us = self.units.clone();
        us.extend_from_slice(units);
        DiffSystem::new(self.base, self.ring.clone(), eqs, us)
    }
}

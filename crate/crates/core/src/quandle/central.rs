use serde_json::{json, Value};

use super::{DiffMorphism, DiffStructure};
use crate::error::{Error, Result};
use crate::gauss::{self, Gauss};

/// An exact Gaussian-rational function constant on conjugacy domains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralFunction {
    structure: DiffStructure,
    values: Vec<Gauss>,
}

impl CentralFunction {
    pub fn new(structure: DiffStructure, values: Vec<Gauss>) -> Result<Self> {
        if values.len() != structure.len() {
            return Err(Error::Quandle(format!(
                "{} values for a structure of size {}",
                values.len(),
                structure.len()
            )));
        }
        for s in 0..structure.len() {
            for t in 0..structure.len() {
                let st = structure.conj(s, t);
                if values[st] != values[s] {
                    return Err(Error::NotCentral(format!(
                        "value at {st} = {s}^{t} differs from value at {s}"
                    )));
                }
            }
        }
        Ok(CentralFunction { structure, values })
    }

    pub fn constant(structure: &DiffStructure, c: Gauss) -> Self {
        CentralFunction {
            values: vec![c; structure.len()],
            structure: structure.clone(),
        }
    }

    /// Characteristic function of a union of conjugacy domains.
    pub fn indicator(structure: &DiffStructure, members: &[usize]) -> Result<Self> {
        let mut values = vec![gauss::zero(); structure.len()];
        for &m in members {
            if m >= structure.len() {
                return Err(Error::Quandle(format!("element {m} out of range")));
            }
            values[m] = gauss::one();
        }
        Self::new(structure.clone(), values)
    }

    pub fn structure(&self) -> &DiffStructure {
        &self.structure
    }

    pub fn values(&self) -> &[Gauss] {
        &self.values
    }

    pub fn value(&self, s: usize) -> &Gauss {
        &self.values[s]
    }

    fn zip(&self, other: &Self, f: impl Fn(&Gauss, &Gauss) -> Gauss) -> Result<Self> {
        if self.structure != other.structure {
            return Err(Error::StructureMismatch);
        }
        Ok(CentralFunction {
            structure: self.structure.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a * b)
    }

    pub fn scale(&self, c: &Gauss) -> Self {
        CentralFunction {
            structure: self.structure.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    /// Haar average (1/|Σ|) Σ α(σ).
    pub fn mean(&self) -> Gauss {
        if self.values.is_empty() {
            return gauss::zero();
        }
        let total: Gauss = self.values.iter().sum();
        total / gauss::from_int(self.values.len() as i64)
    }

    /// `{"values": [[num, den, inum, iden], ...]}`
    pub fn to_json(&self) -> Value {
        json!({ "values": self.values.iter().map(gauss::to_strings).collect::<Vec<_>>() })
    }

    pub fn from_json(structure: &DiffStructure, v: &Value) -> Result<Self> {
        let bad = || Error::Quandle("central function JSON needs a \"values\" array".into());
        let arr = v.get("values").and_then(Value::as_array).ok_or_else(bad)?;
        let values = arr
            .iter()
            .map(|entry| {
                let parts: Vec<String> = entry
                    .as_array()
                    .ok_or_else(bad)?
                    .iter()
                    .map(|p| match p {
                        Value::String(s) => Ok(s.clone()),
                        Value::Number(n) => Ok(n.to_string()),
                        _ => Err(bad()),
                    })
                    .collect::<Result<_>>()?;
                gauss::from_strings(&parts)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(structure.clone(), values)
    }
}

/// `inner_product`: (α, γ) = (1/|Σ|) Σ α(σ) conj(γ(σ)).
pub fn inner_product(alpha: &CentralFunction, gamma: &CentralFunction) -> Result<Gauss> {
    if alpha.structure != gamma.structure {
        return Err(Error::StructureMismatch);
    }
    if alpha.values.is_empty() {
        return Ok(gauss::zero());
    }
    let total: Gauss = alpha
        .values
        .iter()
        .zip(&gamma.values)
        .map(|(a, g)| a * g.conj())
        .sum();
    Ok(total / gauss::from_int(alpha.values.len() as i64))
}

/// `pullback`: ψ*β = β∘ψ.
pub fn pullback(psi: &DiffMorphism, beta: &CentralFunction) -> Result<CentralFunction> {
    if beta.structure != *psi.target() {
        return Err(Error::StructureMismatch);
    }
    let values = psi.map().iter().map(|&t| beta.values[t].clone()).collect();
    CentralFunction::new(psi.source().clone(), values)
}

/// `pushforward` through the image: average over fibers, then extend along
/// the inclusion.
pub fn pushforward(psi: &DiffMorphism, alpha: &CentralFunction) -> Result<CentralFunction> {
    if alpha.structure != *psi.source() {
        return Err(Error::StructureMismatch);
    }
    if psi.is_surjective() {
        return push_surjective(psi, alpha);
    }
    if psi.is_injective() {
        return push_injective(psi, alpha);
    }
    let (surj, incl) = psi.factor()?;
    push_injective(&incl, &push_surjective(&surj, alpha)?)
}

fn push_surjective(psi: &DiffMorphism, alpha: &CentralFunction) -> Result<CentralFunction> {
    let target = psi.target();
    let mut sums = vec![gauss::zero(); target.len()];
    for (s, &t) in psi.map().iter().enumerate() {
        sums[t] += &alpha.values[s];
    }
    let values = sums
        .into_iter()
        .zip(psi.fiber_sizes())
        .map(|(sum, c)| sum / gauss::from_int(c as i64))
        .collect();
    CentralFunction::new(target.clone(), values)
}

fn push_injective(psi: &DiffMorphism, alpha: &CentralFunction) -> Result<CentralFunction> {
    let target = psi.target();
    let img = psi.map();
    if !target.is_closed(img) {
        return Err(Error::Quandle(
            "image is not closed under conjugation in the target".into(),
        ));
    }
    let mut preimage = vec![None; target.len()];
    for (s, &t) in img.iter().enumerate() {
        preimage[t] = Some(s);
    }
    let size = gauss::from_int(psi.source().len() as i64);
    let values = (0..target.len())
        .map(|tau| {
            let mut acc = gauss::zero();
            for rho in 0..target.len() {
                if let Some(s) = preimage[target.conj(tau, rho)] {
                    acc += &alpha.values[s];
                }
            }
            acc / &size
        })
        .collect();
    CentralFunction::new(target.clone(), values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quandle::families;

    #[test]
    fn inner_product_examples() {
        let s4 = DiffStructure::trivial(4);
        let one = CentralFunction::constant(&s4, gauss::one());
        assert_eq!(inner_product(&one, &one).unwrap(), gauss::one());

        let s6 = DiffStructure::trivial(6);
        let ind = CentralFunction::indicator(&s6, &[0, 1]).unwrap();
        assert_eq!(inner_product(&ind, &ind).unwrap(), gauss::from_ratio(1, 3));
        let other = CentralFunction::indicator(&s6, &[2, 3]).unwrap();
        assert_eq!(inner_product(&ind, &other).unwrap(), gauss::zero());
    }

    #[test]
    fn pullback_examples() {
        let t = DiffStructure::trivial(2);
        let beta = CentralFunction::indicator(&t, &[1]).unwrap();
        let id = DiffMorphism::identity(&t);
        assert_eq!(pullback(&id, &beta).unwrap(), beta);
        let incl = DiffMorphism::new(DiffStructure::trivial(1), t, vec![0]).unwrap();
        assert_eq!(pullback(&incl, &beta).unwrap().values(), &[gauss::zero()]);
    }

    #[test]
    fn pushforward_examples() {
        let point = DiffStructure::trivial(1);
        let two = DiffStructure::trivial(2);
        let surj = DiffMorphism::new(two.clone(), point, vec![0, 0]).unwrap();
        let alpha = CentralFunction::indicator(&two, &[0]).unwrap();
        assert_eq!(
            pushforward(&surj, &alpha).unwrap().values(),
            &[gauss::from_ratio(1, 2)]
        );

        let one = DiffStructure::trivial(1);
        let inj = DiffMorphism::new(one.clone(), two.clone(), vec![0]).unwrap();
        let a = CentralFunction::constant(&one, gauss::one());
        assert_eq!(
            pushforward(&inj, &a).unwrap().values(),
            &[gauss::from_int(2), gauss::zero()]
        );

        let s3 = families::group_conjugation(&families::symmetric_group(3));
        let dom = s3.conjugacy_domains();
        let beta = CentralFunction::indicator(&s3, &dom.domains[1]).unwrap();
        assert_eq!(pushforward(&DiffMorphism::identity(&s3), &beta).unwrap(), beta);
    }

    #[test]
    fn non_closed_image_is_rejected() {
        // a single reflection inside the dihedral quandle of order 3
        let d3 = families::dihedral(3);
        let one = DiffStructure::trivial(1);
        let inj = DiffMorphism::new(one.clone(), d3, vec![0]).unwrap();
        let a = CentralFunction::constant(&one, gauss::one());
        assert!(pushforward(&inj, &a).is_err());
    }

    #[test]
    fn non_central_values_rejected() {
        let d3 = families::dihedral(3);
        let err = CentralFunction::indicator(&d3, &[0]).unwrap_err();
        assert!(matches!(err, Error::NotCentral(_)));
    }
}

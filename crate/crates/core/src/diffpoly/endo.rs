use std::collections::BTreeMap;
use std::fmt;

use super::{parse_poly, DifferencePolynomial, PolyRing, VarShift};
use crate::error::{Error, Result};
use crate::field::{Embedding, FieldCtx, FqElement};

/// A ring endomorphism given by the image of every variable; constants map
/// by u ↦ u^{p^constTwist}. Shifted variables map to shifted images.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EndoSpec {
    images: Vec<DifferencePolynomial>,
    const_twist: u64,
}

impl EndoSpec {
    pub fn new(ring: &PolyRing, images: Vec<DifferencePolynomial>, const_twist: u64) -> Result<Self> {
        if images.len() != ring.vars.len() {
            return Err(Error::Poly(format!(
                "{} images for {} variables",
                images.len(),
                ring.vars.len()
            )));
        }
        if images.iter().any(|p| p.ring() != ring) {
            return Err(Error::Poly("image lives in a different ring".into()));
        }
        Ok(EndoSpec {
            images,
            const_twist: const_twist % ring.field.degree() as u64,
        })
    }

    pub fn identity(ring: &PolyRing) -> Self {
        EndoSpec {
            images: (0..ring.vars.len()).map(|j| ring.var(j, 0)).collect(),
            const_twist: 0,
        }
    }

    pub fn ring(&self) -> &PolyRing {
        self.images[0].ring()
    }

    pub fn images(&self) -> &[DifferencePolynomial] {
        &self.images
    }

    pub fn image(&self, var: usize) -> &DifferencePolynomial {
        &self.images[var]
    }

    pub fn const_twist(&self) -> u64 {
        self.const_twist
    }

    /// Value of the image of variable `var` at a point, without twisting.
    pub fn eval_image(
        &self,
        var: usize,
        target: &FieldCtx,
        emb: &Embedding,
        value: &dyn Fn(VarShift) -> FqElement,
    ) -> FqElement {
        self.images[var].eval(target, emb, value)
    }
}

/// `parse_endo`: one expression per variable plus an optional `constTwist`.
pub fn parse_endo(ring: &PolyRing, spec: &BTreeMap<String, String>) -> Result<EndoSpec> {
    let mut images = vec![None; ring.vars.len()];
    let mut twist = 0;
    for (key, text) in spec {
        if key == "constTwist" {
            twist = text
                .trim()
                .parse()
                .map_err(|_| Error::Poly(format!("constTwist must be a natural number, got {text:?}")))?;
            continue;
        }
        let j = ring
            .var_index(key)
            .ok_or_else(|| Error::UnknownVariable(key.clone()))?;
        images[j] = Some(parse_poly(ring, text)?);
    }
    let images = images
        .into_iter()
        .enumerate()
        .map(|(j, img)| img.ok_or_else(|| Error::Poly(format!("missing image for variable {}", ring.vars[j]))))
        .collect::<Result<Vec<_>>>()?;
    EndoSpec::new(ring, images, twist)
}

/// `apply_endo`: substitute the images into `p`, twisting its constants.
pub fn apply_endo(f: &EndoSpec, p: &DifferencePolynomial) -> Result<DifferencePolynomial> {
    if p.ring() != f.ring() {
        return Err(Error::Poly("variable mismatch between endomorphism and polynomial".into()));
    }
    let twisted = p.twist_coeffs(f.const_twist);
    Ok(twisted.substitute(f.ring(), &|v| f.images[v.var].shift_by(v.shift, 0)))
}

/// `compose_endo`: the ring map f∘g, i.e. v ↦ f(g(v)).
pub fn compose_endo(f: &EndoSpec, g: &EndoSpec) -> Result<EndoSpec> {
    if f.ring() != g.ring() {
        return Err(Error::Poly("variable mismatch between endomorphisms".into()));
    }
    let images = g
        .images
        .iter()
        .map(|img| apply_endo(f, img))
        .collect::<Result<Vec<_>>>()?;
    EndoSpec::new(f.ring(), images, f.const_twist + g.const_twist)
}

impl fmt::Display for EndoSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ring = self.ring();
        let parts: Vec<String> = self
            .images
            .iter()
            .enumerate()
            .map(|(j, img)| format!("{} -> {}", ring.vars[j], img))
            .collect();
        write!(f, "{{{}", parts.join(", "))?;
        if self.const_twist != 0 {
            write!(f, ", constTwist: {}", self.const_twist)?;
        }
        write!(f, "}}")
    }
}

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::cover::CoverSpec;
use crate::diffpoly::{parse_poly, DifferencePolynomial, PolyRing, VarShift};
use crate::diffvar::{points, satisfies, twisted_coordinate, CountOptions, DiffSystem};
use crate::error::{Error, Result};
use crate::field::FqElement;
use crate::gauss::{self, Gauss};
use crate::quandle::CentralFunction;

fn density_err(msg: impl Into<String>) -> Error {
    Error::invalid("density", msg)
}

/// A cover together with a central function on its Σ.
#[derive(Clone, Debug)]
pub struct BasicConstructible {
    pub cover: Arc<CoverSpec>,
    pub alpha: CentralFunction,
}

impl BasicConstructible {
    pub fn new(cover: Arc<CoverSpec>, alpha: CentralFunction) -> Result<Self> {
        if alpha.structure() != cover.sigma() {
            return Err(Error::StructureMismatch);
        }
        Ok(BasicConstructible { cover, alpha })
    }
}

/// A locally closed piece of X (X's equations plus extra ones) carrying a
/// basic constructible function.
#[derive(Clone, Debug)]
pub struct Stratum {
    pub system: DiffSystem,
    pub basic: BasicConstructible,
}

/// x ↦ α_i(φ_{n,x}) on the stratum i containing x.
#[derive(Clone, Debug)]
pub struct ConstructibleFunction {
    base: DiffSystem,
    strata: Vec<Stratum>,
}

impl ConstructibleFunction {
    pub fn new(base: DiffSystem, strata: Vec<Stratum>) -> Result<Self> {
        if strata.is_empty() {
            return Err(density_err("a constructible function needs at least one stratum"));
        }
        for s in &strata {
            if s.system.ring() != base.ring() || s.basic.cover.base().ring() != base.ring() {
                return Err(density_err("strata and covers must use the variables of X"));
            }
        }
        Ok(ConstructibleFunction { base, strata })
    }

    /// One stratum, the whole base of the cover.
    pub fn basic(b: BasicConstructible) -> Self {
        let base = b.cover.base().clone();
        ConstructibleFunction {
            strata: vec![Stratum {
                system: base.clone(),
                basic: b,
            }],
            base,
        }
    }

    pub fn base(&self) -> &DiffSystem {
        &self.base
    }

    pub fn strata(&self) -> &[Stratum] {
        &self.strata
    }
}

/// Values of a function at every X-point of one level, in enumeration order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realization {
    pub n: u64,
    pub points: Vec<Vec<FqElement>>,
    pub values: Vec<Gauss>,
}

impl Realization {
    pub fn sum(&self) -> Gauss {
        self.values.iter().fold(gauss::zero(), |acc, v| acc + v)
    }

    pub fn get(&self, x: &[FqElement]) -> Option<&Gauss> {
        self.points.iter().position(|p| p == x).map(|i| &self.values[i])
    }
}

fn in_stratum(s: &DiffSystem, field: &crate::field::FieldCtx, emb: &crate::field::Embedding, e: u64, x: &[FqElement]) -> bool {
    s.units().iter().all(|&u| !x[u].is_zero()) && satisfies(s.equations(), field, emb, e, x)
}

/// `realize`: the value of f at every point of X at level n.
pub fn realize(f: &ConstructibleFunction, n: u64, opts: &CountOptions) -> Result<Realization> {
    let pts = points(&f.base, n, opts)?;
    if !pts.materialized {
        return Err(density_err(format!("points of X at level {n} could not be materialized")));
    }
    let e = pts.twist.exponent();
    let mut levels = Vec::with_capacity(f.strata.len());
    for s in &f.strata {
        let lv = s.basic.cover.level(n, opts)?;
        if lv.points.field.degree() != pts.field.degree() {
            return Err(density_err("cover base and X have different point fields"));
        }
        levels.push(lv);
    }
    let values = opts.exec.map(&pts.points, |x| -> Result<Gauss> {
        let hits: Vec<usize> = (0..f.strata.len())
            .filter(|&i| in_stratum(&f.strata[i].system, &pts.field, &pts.embedding, e, x))
            .collect();
        match hits.as_slice() {
            [i] => {
                let s = &f.strata[*i];
                let r = s.basic.cover.frobenius_substitution(&levels[*i], x)?;
                Ok(s.basic.alpha.value(r.class_rep).clone())
            }
            [] => Err(density_err("an X-point lies in no stratum")),
            _ => Err(density_err("an X-point lies in two strata")),
        }
    });
    Ok(Realization {
        n,
        points: pts.points.clone(),
        values: values.into_iter().collect::<Result<_>>()?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgebraOp {
    Add,
    Mul,
}

fn same_strata(a: &Stratum, b: &Stratum) -> bool {
    a.system.equations() == b.system.equations()
        && a.system.units() == b.system.units()
        && (Arc::ptr_eq(&a.basic.cover, &b.basic.cover) || a.basic.cover.same_as(&b.basic.cover))
}

/// `constructible_algebra`: stratum-wise sum or product on shared covers.
pub fn constructible_algebra(
    f: &ConstructibleFunction,
    g: &ConstructibleFunction,
    op: AlgebraOp,
) -> Result<ConstructibleFunction> {
    if f.strata.len() != g.strata.len() || f.strata.iter().zip(&g.strata).any(|(a, b)| !same_strata(a, b)) {
        return Err(density_err("constructible functions must share strata and covers"));
    }
    let strata = f
        .strata
        .iter()
        .zip(&g.strata)
        .map(|(a, b)| {
            let alpha = match op {
                AlgebraOp::Add => a.basic.alpha.add(&b.basic.alpha)?,
                AlgebraOp::Mul => a.basic.alpha.mul(&b.basic.alpha)?,
            };
            Ok(Stratum {
                system: a.system.clone(),
                basic: BasicConstructible::new(a.basic.cover.clone(), alpha)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    ConstructibleFunction::new(f.base.clone(), strata)
}

/// A polynomial map X → Y: one difference polynomial in X's variables per
/// variable of Y.
#[derive(Clone, Debug)]
pub struct PolyMap {
    pub images: Vec<DifferencePolynomial>,
}

impl PolyMap {
    pub fn parse(source: &PolyRing, target_vars: &[String], images: &BTreeMap<String, String>) -> Result<Self> {
        let images = target_vars
            .iter()
            .map(|v| {
                let text = images
                    .get(v)
                    .ok_or_else(|| density_err(format!("map has no image for {v}")))?;
                parse_poly(source, text)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyMap { images })
    }

    pub fn identity(ring: &PolyRing) -> Self {
        PolyMap {
            images: (0..ring.vars.len()).map(|j| ring.var(j, 0)).collect(),
        }
    }
}

/// `realized_pullback`: x ↦ β(h(x)) at level n.
pub fn realized_pullback(
    h: &PolyMap,
    x: &DiffSystem,
    beta: &ConstructibleFunction,
    n: u64,
    opts: &CountOptions,
) -> Result<Realization> {
    if h.images.len() != beta.base().num_vars() || h.images.iter().any(|p| p.ring() != x.ring()) {
        return Err(density_err("map does not match the variables of X and Y"));
    }
    let pts = points(x, n, opts)?;
    let target = realize(beta, n, opts)?;
    let e = pts.twist.exponent();
    let index: HashMap<&[FqElement], usize> = target
        .points
        .iter()
        .enumerate()
        .map(|(i, p)| (p.as_slice(), i))
        .collect();
    let target_field = crate::field::FieldCtx::cached(pts.field.p(), pts.field.degree())?;
    let ydeg = points(beta.base(), n, opts)?.field.degree();
    if ydeg != pts.field.degree() {
        return Err(density_err("X and Y have different point fields at this level"));
    }
    let values = pts
        .points
        .iter()
        .map(|z| {
            let value = |v: VarShift| twisted_coordinate(&target_field, z, v, e);
            let y: Vec<FqElement> = h
                .images
                .iter()
                .map(|img| img.eval(&target_field, &pts.embedding, &value))
                .collect();
            index
                .get(y.as_slice())
                .map(|&i| target.values[i].clone())
                .ok_or_else(|| density_err("the image of an X-point is not a Y-point"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Realization {
        n,
        points: pts.points.clone(),
        values,
    })
}

/// `pairing`: (1/|X|) ∑ u(x)·conj(v(x)), and 0 on the empty set.
pub fn pairing(u: &Realization, v: &Realization) -> Result<Gauss> {
    if u.points != v.points {
        return Err(density_err("pairing of functions on different point sets"));
    }
    if u.points.is_empty() {
        return Ok(gauss::zero());
    }
    let s = u
        .values
        .iter()
        .zip(&v.values)
        .fold(gauss::zero(), |acc, (a, b)| acc + a * b.conj());
    Ok(s.scale(BigRational::new(1.into(), BigInt::from(u.points.len()))))
}

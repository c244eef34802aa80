//! Explicit Galois covers Z → X of difference varieties: group closure,
//! relation checks on sample points, fibers, inertia and local Frobenius
//! substitutions.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_integer::Integer;

use crate::diffpoly::{compose_endo, parse_endo, parse_poly, DifferencePolynomial, EndoSpec, PolyRing, VarShift};
use crate::diffvar::{points, twisted_coordinate, CountOptions, DiffSystem, PointSet};
use crate::error::{Error, Result};
use crate::field::poly::roots_in_field;
use crate::field::{Embedding, FieldCtx, FqElement, Poly};
use crate::par::Exec;
use crate::quandle::{coset_quandle, pushforward, CentralFunction, DiffMorphism, DiffStructure, GroupWithOperators, Partition};

/// Largest group the closure will build.
pub const MAX_GROUP_ORDER: usize = 64;
/// X-points per level used when validating relations.
const SAMPLES_PER_LEVEL: usize = 48;

/// User-facing description of a cover, before validation.
#[derive(Clone, Debug, Default)]
pub struct CoverInput {
    pub fiber_vars: Vec<String>,
    pub fiber_equations: Vec<String>,
    pub fiber_units: Vec<String>,
    /// images of fiber variables (and optionally `constTwist`) per generator
    pub group_generators: Vec<BTreeMap<String, String>>,
    pub sigma_tilde: BTreeMap<String, String>,
    pub const_field_degree: u64,
    /// relations are checked on every level n ≤ this
    pub validation_level: u64,
    /// degree S of the fiber field over the point field; default lcm(1..deg)
    pub fiber_extension: Option<u64>,
}

/// A validated Galois cover with its quandle Σ = G·σ̃.
#[derive(Clone, Debug)]
pub struct CoverSpec {
    x: DiffSystem,
    ring: PolyRing,
    n_base: usize,
    fiber_equations: Vec<DifferencePolynomial>,
    fiber_units: Vec<usize>,
    group: Vec<EndoSpec>,
    gops: GroupWithOperators,
    sigma_tilde: EndoSpec,
    /// g∘σ̃ for each g
    taus: Vec<EndoSpec>,
    /// g ↦ g^σ̃
    operator: Vec<usize>,
    sigma: DiffStructure,
    domains: Partition,
    const_field_degree: u64,
    fiber_extension: u64,
}

/// Fields used at one Frobenius level.
#[derive(Clone, Debug)]
pub struct Level {
    pub points: PointSet,
    pub fiber_field: Arc<FieldCtx>,
    /// point field → fiber field
    pub lift: Arc<Embedding>,
    /// F_q → fiber field, through the point field
    pub constants: Arc<Embedding>,
}

impl Level {
    pub fn n(&self) -> u64 {
        self.points.twist.n
    }

    fn exponent(&self) -> u64 {
        self.points.twist.exponent()
    }
}

/// Local Frobenius at one X-point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubstitutionResult {
    pub point: Vec<FqElement>,
    /// index g of the element gσ̃ of Σ
    pub class_rep: usize,
    pub domain: usize,
}

/// Frobenius classes over all X-points at one level.
#[derive(Clone, Debug)]
pub struct Histogram {
    pub n: u64,
    pub domain_sizes: Vec<usize>,
    pub counts: Vec<u64>,
    pub results: Vec<SubstitutionResult>,
}

impl Histogram {
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// CSV with columns n, domain_id, domain_size, count.
pub fn histogram_csv(hs: &[Histogram]) -> String {
    let mut out = String::from("n,domain_id,domain_size,count\n");
    for h in hs {
        for (d, c) in h.counts.iter().enumerate() {
            out.push_str(&format!("{},{},{},{}\n", h.n, d, h.domain_sizes[d], c));
        }
    }
    out
}

fn cover_err(msg: impl Into<String>) -> Error {
    Error::invalid("cover", msg)
}

/// Complete an endomorphism spec with v ↦ v for every variable left out.
fn full_endo(ring: &PolyRing, n_base: usize, spec: &BTreeMap<String, String>, fix_base: bool) -> Result<EndoSpec> {
    let mut spec = spec.clone();
    for v in &ring.vars[n_base..] {
        spec.entry(v.clone()).or_insert_with(|| v.clone());
    }
    for v in &ring.vars[..n_base] {
        match spec.get(v) {
            None => {
                spec.insert(v.clone(), v.clone());
            }
            Some(img) if fix_base => {
                let img = parse_poly(ring, img)?;
                if img != ring.var(ring.var_index(v).expect("own variable"), 0) {
                    return Err(cover_err(format!("group elements must fix the base variable {v}")));
                }
            }
            Some(_) => {}
        }
    }
    parse_endo(ring, &spec)
}

/// Close the generators under composition; index 0 is the identity.
fn close_group(ring: &PolyRing, gens: &[EndoSpec]) -> Result<(Vec<EndoSpec>, Vec<Vec<usize>>)> {
    let mut elems = vec![EndoSpec::identity(ring)];
    let mut i = 0;
    while i < elems.len() {
        for g in gens {
            let h = compose_endo(&elems[i], g)?;
            if !elems.contains(&h) {
                if elems.len() == MAX_GROUP_ORDER {
                    return Err(cover_err(format!(
                        "group generated by the given maps has more than {MAX_GROUP_ORDER} elements"
                    )));
                }
                elems.push(h);
            }
        }
        i += 1;
    }
    let mut cayley = vec![vec![0; elems.len()]; elems.len()];
    for (a, ga) in elems.iter().enumerate() {
        for (b, gb) in elems.iter().enumerate() {
            let c = compose_endo(ga, gb)?;
            cayley[a][b] = elems
                .iter()
                .position(|e| *e == c)
                .ok_or_else(|| cover_err("group is not closed under composition"))?;
        }
    }
    Ok((elems, cayley))
}

impl CoverSpec {
    /// `build_cover`: close G, derive g ↦ g^σ̃, validate on sample points and
    /// form Σ as the coset quandle.
    pub fn build(x: &DiffSystem, input: &CoverInput, opts: &CountOptions) -> Result<Self> {
        let n_base = x.num_vars();
        let mut names: Vec<String> = x.ring().vars.to_vec();
        for v in &input.fiber_vars {
            if names.contains(v) {
                return Err(cover_err(format!("variable {v} declared twice")));
            }
            names.push(v.clone());
        }
        if input.fiber_vars.is_empty() {
            return Err(cover_err("a cover needs at least one fiber variable"));
        }
        let mut ring = PolyRing::new(x.ring().field.clone(), names);
        ring.generator = x.ring().generator.clone();
        let fiber_equations = input
            .fiber_equations
            .iter()
            .map(|e| parse_poly(&ring, e))
            .collect::<Result<Vec<_>>>()?;
        for eq in &fiber_equations {
            if eq.support().iter().any(|v| v.var >= n_base && v.shift > 0) {
                return Err(cover_err("fiber equations may not shift fiber variables"));
            }
        }
        let fiber_units = input
            .fiber_units
            .iter()
            .map(|u| match ring.var_index(u) {
                Some(i) if i >= n_base => Ok(i),
                _ => Err(cover_err(format!("unit {u} is not a fiber variable"))),
            })
            .collect::<Result<Vec<_>>>()?;
        let gens = input
            .group_generators
            .iter()
            .map(|g| full_endo(&ring, n_base, g, true))
            .collect::<Result<Vec<_>>>()?;
        let sigma_tilde = full_endo(&ring, n_base, &input.sigma_tilde, false)?;
        let (group, cayley) = close_group(&ring, &gens)?;
        let taus = group
            .iter()
            .map(|g| compose_endo(g, &sigma_tilde))
            .collect::<Result<Vec<_>>>()?;
        let maxdeg = fiber_equations
            .iter()
            .map(|e| {
                e.terms()
                    .map(|(m, _)| m.factors().iter().filter(|(v, _)| v.var >= n_base).map(|(_, x)| *x).sum::<u64>())
                    .max()
                    .unwrap_or(0)
            })
            .max()
            .unwrap_or(1)
            .max(1);
        let fiber_extension = match input.fiber_extension {
            Some(0) => return Err(cover_err("fiberExtension must be positive")),
            Some(s) => s,
            None => (1..=maxdeg).fold(1u64, |a, k| a.lcm(&k)),
        };
        if input.const_field_degree == 0 {
            return Err(cover_err("constFieldDegree must be positive"));
        }
        let mut cov = CoverSpec {
            x: x.clone(),
            ring,
            n_base,
            fiber_equations,
            fiber_units,
            gops: GroupWithOperators::new(cayley)?,
            group,
            sigma_tilde,
            taus,
            operator: Vec::new(),
            sigma: DiffStructure::trivial(1),
            domains: DiffStructure::trivial(1).conjugacy_domains(),
            const_field_degree: input.const_field_degree,
            fiber_extension,
        };
        let samples = cov.samples(input.validation_level, opts)?;
        cov.operator = cov.derive_operator(&samples)?;
        cov.validate(&samples)?;
        let mut op_inv = vec![0; cov.operator.len()];
        for (g, &h) in cov.operator.iter().enumerate() {
            op_inv[h] = g;
        }
        cov.gops = cov.gops.clone().with_operator("sigma", cov.operator.clone())?;
        // the coset quandle takes the inverse operator: σ̃ h = op⁻¹(h) σ̃
        let coset = cov.gops.clone().with_operator("coset", op_inv)?;
        cov.sigma = coset_quandle(&coset, "coset")?;
        cov.domains = cov.sigma.conjugacy_domains();
        Ok(cov)
    }

    pub fn base(&self) -> &DiffSystem {
        &self.x
    }

    /// Same presentation: variables, fiber equations, group and σ̃.
    pub fn same_as(&self, other: &CoverSpec) -> bool {
        self.ring == other.ring
            && self.x.equations() == other.x.equations()
            && self.fiber_equations == other.fiber_equations
            && self.fiber_units == other.fiber_units
            && self.group == other.group
            && self.sigma_tilde == other.sigma_tilde
            && self.const_field_degree == other.const_field_degree
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn group(&self) -> &[EndoSpec] {
        &self.group
    }

    pub fn group_with_operators(&self) -> &GroupWithOperators {
        &self.gops
    }

    pub fn sigma_tilde(&self) -> &EndoSpec {
        &self.sigma_tilde
    }

    /// g ↦ g^σ̃ as indices into `group()`.
    pub fn operator(&self) -> &[usize] {
        &self.operator
    }

    pub fn sigma(&self) -> &DiffStructure {
        &self.sigma
    }

    pub fn domains(&self) -> &Partition {
        &self.domains
    }

    pub fn const_field_degree(&self) -> u64 {
        self.const_field_degree
    }

    pub fn fiber_extension(&self) -> u64 {
        self.fiber_extension
    }

    /// Z as a difference system: X's equations plus the fiber equations.
    pub fn total_space(&self) -> Result<DiffSystem> {
        let mut eqs = self
            .x
            .equations()
            .iter()
            .map(|e| e.rebase(&self.ring))
            .collect::<Result<Vec<_>>>()?;
        eqs.extend(self.fiber_equations.iter().cloned());
        let mut units = self.x.units().to_vec();
        units.extend(&self.fiber_units);
        DiffSystem::new(self.x.base(), self.ring.clone(), eqs, units)
    }

    /// X-points at level n with the fields needed above them.
    pub fn level(&self, n: u64, opts: &CountOptions) -> Result<Level> {
        let pts = points(&self.x, n, opts)?;
        if !pts.materialized {
            return Err(cover_err(format!("X-points at level {n} could not all be materialized")));
        }
        let fiber_field = FieldCtx::cached(pts.field.p(), pts.field.degree() * self.fiber_extension as usize)?;
        let lift = Embedding::cached(&pts.field, &fiber_field)?;
        let constants = Arc::new(pts.embedding.then(&lift, &fiber_field));
        Ok(Level {
            points: pts,
            fiber_field,
            lift,
            constants,
        })
    }

    fn eval_endo(&self, lv: &Level, f: &EndoSpec, z: &[FqElement]) -> Vec<FqElement> {
        let field = &lv.fiber_field;
        let e = lv.exponent();
        let value = |v: VarShift| twisted_coordinate(field, z, v, e);
        (0..self.ring.vars.len())
            .map(|j| f.eval_image(j, field, &lv.constants, &value))
            .collect()
    }

    /// Image z∘g of a Z-point under the group element g.
    pub fn act(&self, lv: &Level, g: usize, z: &[FqElement]) -> Vec<FqElement> {
        self.eval_endo(lv, &self.group[g], z)
    }

    /// `fiber`: every Z-point over x, found in the fiber field.
    pub fn fiber(&self, lv: &Level, x: &[FqElement]) -> Result<Vec<Vec<FqElement>>> {
        let field = &lv.fiber_field;
        let mut z: Vec<Option<FqElement>> = x.iter().map(|a| Some(lv.lift.apply(field, a))).collect();
        z.resize(self.ring.vars.len(), None);
        let mut out = Vec::new();
        self.solve_fiber(lv, &mut z, &mut out)?;
        out.sort();
        if out.len() < self.group.len() {
            return Err(cover_err(format!(
                "fiber over a level-{} point has {} points in F_{}^{}, fewer than |G| = {}: it escapes the fiber field or the cover is ramified",
                lv.n(),
                out.len(),
                field.p(),
                field.degree(),
                self.group.len()
            )));
        }
        let mut orbit: Vec<Vec<FqElement>> = (0..self.group.len()).map(|g| self.act(lv, g, &out[0])).collect();
        orbit.sort();
        orbit.dedup();
        if orbit != out {
            return Err(cover_err(format!(
                "fiber of size {} is not a single G-orbit (orbit size {})",
                out.len(),
                orbit.len()
            )));
        }
        Ok(out)
    }

    fn solve_fiber(&self, lv: &Level, z: &mut Vec<Option<FqElement>>, out: &mut Vec<Vec<FqElement>>) -> Result<()> {
        let field = &lv.fiber_field;
        let Some(next) = z.iter().position(Option::is_none) else {
            out.push(z.iter().map(|a| a.clone().expect("solved")).collect());
            return Ok(());
        };
        let mut h = Poly::zero();
        for eq in &self.fiber_equations {
            let unknown: Vec<usize> = eq.support().iter().map(|v| v.var).filter(|&v| z[v].is_none()).collect();
            if !unknown.is_empty() && unknown.iter().all(|&v| v == next) {
                h = Poly::gcd(field, &h, &self.specialize(lv, eq, next, z));
            }
        }
        if h.is_zero() {
            return Err(cover_err(format!(
                "fiber variable {} is not determined by a triangular fiber equation",
                self.ring.vars[next]
            )));
        }
        let roots = if h.degree() == Some(0) { Vec::new() } else { roots_in_field(field, &h)? };
        let unit = self.fiber_units.contains(&next);
        for r in roots {
            if unit && r.is_zero() {
                continue;
            }
            z[next] = Some(r);
            self.solve_fiber(lv, z, out)?;
        }
        z[next] = None;
        Ok(())
    }

    /// Univariate polynomial in fiber variable `v` with everything else known.
    fn specialize(&self, lv: &Level, eq: &DifferencePolynomial, v: usize, z: &[Option<FqElement>]) -> Poly {
        let field = &lv.fiber_field;
        let e = lv.exponent();
        let mut coeffs: Vec<FqElement> = Vec::new();
        for (m, c) in eq.terms() {
            let mut t = lv.constants.apply(field, c);
            let mut deg = 0;
            for &(w, x) in m.factors() {
                if w.var == v {
                    deg += x as usize;
                } else {
                    let a = z[w.var].as_ref().expect("known coordinate");
                    let val = if w.shift == 0 { a.clone() } else { field.frobenius(a, e * w.shift as u64) };
                    t = field.mul(&t, &field.pow_u64(&val, x));
                }
            }
            if coeffs.len() <= deg {
                coeffs.resize(deg + 1, field.zero());
            }
            coeffs[deg] = field.add(&coeffs[deg], &t);
        }
        Poly::from_coeffs(coeffs)
    }

    /// Whether `z` satisfies the fiber equations and units.
    fn on_z(&self, lv: &Level, z: &[FqElement]) -> bool {
        let field = &lv.fiber_field;
        let e = lv.exponent();
        if self.fiber_units.iter().any(|&u| z[u].is_zero()) {
            return false;
        }
        let value = |v: VarShift| twisted_coordinate(field, z, v, e);
        self.fiber_equations.iter().all(|eq| eq.eval(field, &lv.constants, &value).is_zero())
    }

    /// `inertia_check`: the stabilizer of z in G.
    pub fn inertia(&self, lv: &Level, z: &[FqElement]) -> Vec<usize> {
        (0..self.group.len()).filter(|&g| self.act(lv, g, z) == z).collect()
    }

    /// Elements τ = gσ̃ with z∘τ equal to the coordinatewise Q-power of z,
    /// compared on fiber coordinates.
    fn matching_taus(&self, lv: &Level, z: &[FqElement]) -> Vec<usize> {
        let field = &lv.fiber_field;
        let e = lv.exponent();
        let frob: Vec<FqElement> = z[self.n_base..].iter().map(|a| field.frobenius(a, e)).collect();
        (0..self.taus.len())
            .filter(|&g| self.eval_endo(lv, &self.taus[g], z)[self.n_base..] == frob[..])
            .collect()
    }

    fn substitution_at(&self, lv: &Level, z: &[FqElement]) -> Result<usize> {
        match self.matching_taus(lv, z).as_slice() {
            [g] => Ok(*g),
            [] => Err(cover_err("no element of Σ matches the Frobenius at this point")),
            many => Err(cover_err(format!(
                "{} elements of Σ match the Frobenius: nontrivial inertia",
                many.len()
            ))),
        }
    }

    /// `frobenius_substitution` at the X-point x.
    pub fn frobenius_substitution(&self, lv: &Level, x: &[FqElement]) -> Result<SubstitutionResult> {
        let fib = self.fiber(lv, x)?;
        if fib.iter().any(|z| self.inertia(lv, z).len() > 1) {
            return Err(cover_err("nontrivial inertia: the cover is not étale here"));
        }
        let g = self.substitution_at(lv, &fib[0])?;
        let domain = self.domains.domain_of[g];
        if let Some(z2) = fib.get(1) {
            let g2 = self.substitution_at(lv, z2)?;
            if self.domains.domain_of[g2] != domain {
                return Err(cover_err("Frobenius classes from two fiber points lie in different domains"));
            }
        }
        Ok(SubstitutionResult {
            point: x.to_vec(),
            class_rep: g,
            domain,
        })
    }

    /// Substitution for every X-point at a level.
    pub fn substitutions(&self, lv: &Level, exec: Exec) -> Result<Vec<SubstitutionResult>> {
        exec.map(&lv.points.points, |x| self.frobenius_substitution(lv, x))
            .into_iter()
            .collect()
    }

    /// `substitution_histogram`: X-points per conjugacy domain at level n.
    pub fn substitution_histogram(&self, n: u64, opts: &CountOptions) -> Result<Histogram> {
        let lv = self.level(n, opts)?;
        let results = self.substitutions(&lv, opts.exec)?;
        let mut counts = vec![0u64; self.domains.domains.len()];
        for r in &results {
            counts[r.domain] += 1;
        }
        Ok(Histogram {
            n,
            domain_sizes: self.domains.domains.iter().map(Vec::len).collect(),
            counts,
            results,
        })
    }

    /// |Z^τ| for each τ: fiber points whose Frobenius is exactly τ.
    pub fn twisted_component_counts(&self, n: u64, opts: &CountOptions) -> Result<Vec<u64>> {
        let lv = self.level(n, opts)?;
        let per_point = opts.exec.map(&lv.points.points, |x| -> Result<Vec<usize>> {
            self.fiber(&lv, x)?.iter().map(|z| self.substitution_at(&lv, z)).collect()
        });
        let mut counts = vec![0u64; self.group.len()];
        for taus in per_point {
            for g in taus? {
                counts[g] += 1;
            }
        }
        Ok(counts)
    }

    /// Up to `SAMPLES_PER_LEVEL` X-points per level, with their fibers.
    fn samples(&self, levels: u64, opts: &CountOptions) -> Result<Vec<(Level, Vec<Vec<FqElement>>)>> {
        let mut out = Vec::new();
        for n in 1..=levels {
            let lv = self.level(n, opts)?;
            let step = (lv.points.points.len() / SAMPLES_PER_LEVEL).max(1);
            let mut fibers = Vec::new();
            for x in lv.points.points.iter().step_by(step).take(SAMPLES_PER_LEVEL) {
                let field = &lv.fiber_field;
                let mut z: Vec<Option<FqElement>> = x.iter().map(|a| Some(lv.lift.apply(field, a))).collect();
                z.resize(self.ring.vars.len(), None);
                let mut fib = Vec::new();
                self.solve_fiber(&lv, &mut z, &mut fib)?;
                fibers.extend(fib);
            }
            out.push((lv, fibers));
        }
        Ok(out)
    }

    /// Find g^σ̃ with g∘σ̃ = σ̃∘g^σ̃, symbolically or else on samples.
    fn derive_operator(&self, samples: &[(Level, Vec<Vec<FqElement>>)]) -> Result<Vec<usize>> {
        let right = self
            .group
            .iter()
            .map(|h| compose_endo(&self.sigma_tilde, h))
            .collect::<Result<Vec<_>>>()?;
        let have_points = samples.iter().any(|(_, f)| !f.is_empty());
        let mut op = Vec::with_capacity(self.group.len());
        for (g, left) in self.taus.iter().enumerate() {
            let symbolic = right.iter().position(|r| r == left);
            let found = symbolic.or_else(|| {
                if !have_points {
                    return None;
                }
                (0..right.len()).find(|&h| {
                    samples.iter().all(|(lv, fib)| {
                        fib.iter().all(|z| self.eval_endo(lv, left, z) == self.eval_endo(lv, &right[h], z))
                    })
                })
            });
            match found {
                Some(h) => op.push(h),
                None => {
                    return Err(cover_err(format!(
                        "no h in G satisfies g∘σ̃ = σ̃∘h for g = {}",
                        self.group[g]
                    )))
                }
            }
        }
        let mut seen = vec![false; op.len()];
        for &h in &op {
            if std::mem::replace(&mut seen[h], true) {
                return Err(cover_err("the operator g ↦ g^σ̃ is not bijective"));
            }
        }
        Ok(op)
    }

    /// Automorphism property and the σ̃ relation at every sample point.
    fn validate(&self, samples: &[(Level, Vec<Vec<FqElement>>)]) -> Result<()> {
        for (lv, fib) in samples {
            for z in fib {
                for (g, elem) in self.group.iter().enumerate() {
                    let image = self.act(lv, g, z);
                    if image[..self.n_base] != z[..self.n_base] || !self.on_z(lv, &image) {
                        return Err(cover_err(format!(
                            "{elem} is not an automorphism of Z over X (fails at level {})",
                            lv.n()
                        )));
                    }
                    let lhs = self.eval_endo(lv, &self.taus[g], z);
                    let rhs = self.eval_endo(lv, &compose_endo(&self.sigma_tilde, &self.group[self.operator[g]])?, z);
                    if lhs != rhs {
                        return Err(cover_err(format!(
                            "relation g∘σ̃ = σ̃∘g^σ̃ fails at level {} for g = {elem}",
                            lv.n()
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// π: Σ → T where T is the trivial structure on Gal(k₁/k), sending gσ̃
    /// to its action on constants.
    pub fn base_map(&self) -> Result<DiffMorphism> {
        let c = self.const_field_degree;
        let t = DiffStructure::trivial(c as usize);
        let map: Vec<usize> = self.taus.iter().map(|tau| (tau.const_twist() % c) as usize).collect();
        let m = DiffMorphism::new(self.sigma.clone(), t, map)?;
        if !m.is_surjective() {
            return Err(cover_err(format!(
                "declared constFieldDegree {c} is inconsistent with the constant twists of Σ"
            )));
        }
        Ok(m)
    }

    /// `pushforward_to_base`: π_*α on T.
    pub fn pushforward_to_base(&self, alpha: &CentralFunction) -> Result<CentralFunction> {
        if alpha.structure() != &self.sigma {
            return Err(Error::StructureMismatch);
        }
        pushforward(&self.base_map()?, alpha)
    }

    /// Central function on Σ from a domain-level table.
    pub fn domain_function(&self, per_domain: &[crate::gauss::Gauss]) -> Result<CentralFunction> {
        if per_domain.len() != self.domains.domains.len() {
            return Err(cover_err("one value per conjugacy domain expected"));
        }
        let values = self.domains.domain_of.iter().map(|&d| per_domain[d].clone()).collect();
        CentralFunction::new(self.sigma.clone(), values)
    }
}

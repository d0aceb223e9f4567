//! Linear effect algebras `[0, u]` and their elementwise predicates.
//!
//! Three kinds are supported:
//! * `Classical(n)`: the orthant in ℚⁿ with unit `(1, …, 1)`;
//! * `Polyhedral`: any pointed full-dimensional polyhedral cone with an interior unit;
//! * `Spin(d)`: the Lorentz cone `t ≥ ‖x‖` in ℚ^{1+d} with unit `(1, 0, …, 0)`.
//!
//! Classical algebras also carry their orthant cone, so the generic polyhedral
//! routines can be run on them via [`EffectAlgebra::as_polyhedral`].

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_traits::{One, Signed, Zero};

use crate::cone::{cone_contains, dd_convert, Cone};
use crate::error::{Error, Result};
use crate::linalg::rank_of;
use crate::lp::{lp_solve, polytope_vertices, HPolytope, Sense};
use crate::rational::{fmt_rational, half, rational_sqrt, RatVector, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AlgebraKind {
    Classical(usize),
    Polyhedral,
    Spin(usize),
}

impl fmt::Display for AlgebraKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraKind::Classical(n) => write!(f, "classical({n})"),
            AlgebraKind::Polyhedral => write!(f, "polyhedral"),
            AlgebraKind::Spin(d) => write!(f, "spin({d})"),
        }
    }
}

/// Parameters accepted by [`make_algebra`].
#[derive(Clone, Debug)]
pub enum AlgebraSpec {
    Classical(usize),
    Polyhedral {
        generators: Vec<RatVector>,
        unit: RatVector,
    },
    Spin(usize),
}

struct AlgebraInner {
    kind: AlgebraKind,
    dim: usize,
    cone: Option<Cone>,
    unit: RatVector,
    name: String,
    interval_vertices: OnceLock<Vec<RatVector>>,
    pub(crate) cache: crate::spectral::AlgebraCache,
}

/// An order interval `[0, u]`. Cheap to clone; clones share cached data.
#[derive(Clone)]
pub struct EffectAlgebra(Arc<AlgebraInner>);

pub fn make_algebra(spec: AlgebraSpec, name: &str) -> Result<EffectAlgebra> {
    match spec {
        AlgebraSpec::Classical(n) => {
            if n == 0 {
                return Err(Error::InvalidParameters("classical(n) needs n >= 1".into()));
            }
            let unit = RatVector::new(vec![Rational::one(); n]);
            Ok(EffectAlgebra::from_parts(
                AlgebraKind::Classical(n),
                Some(Cone::positive_orthant(n)),
                unit,
                name,
            ))
        }
        AlgebraSpec::Polyhedral { generators, unit } => {
            let cone = dd_convert(&generators)?;
            if unit.dim() != cone.dim() {
                return Err(Error::DimensionMismatch {
                    expected: cone.dim(),
                    got: unit.dim(),
                });
            }
            if cone.facets().iter().any(|f| !f.dot(&unit).is_positive()) {
                return Err(Error::UnitNotOrderUnit);
            }
            Ok(EffectAlgebra::from_parts(
                AlgebraKind::Polyhedral,
                Some(cone),
                unit,
                name,
            ))
        }
        AlgebraSpec::Spin(d) => {
            if d == 0 {
                return Err(Error::InvalidParameters("spin(d) needs d >= 1".into()));
            }
            Ok(EffectAlgebra::from_parts(
                AlgebraKind::Spin(d),
                None,
                RatVector::unit(d + 1, 0),
                name,
            ))
        }
    }
}

impl EffectAlgebra {
    fn from_parts(kind: AlgebraKind, cone: Option<Cone>, unit: RatVector, name: &str) -> Self {
        EffectAlgebra(Arc::new(AlgebraInner {
            kind,
            dim: unit.dim(),
            cone,
            unit,
            name: name.to_string(),
            interval_vertices: OnceLock::new(),
            cache: Default::default(),
        }))
    }

    pub fn classical(n: usize) -> Result<Self> {
        make_algebra(AlgebraSpec::Classical(n), &format!("E(S{n})"))
    }

    pub fn spin(d: usize) -> Result<Self> {
        make_algebra(AlgebraSpec::Spin(d), &format!("spin({d})"))
    }

    pub fn polyhedral(name: &str, generators: Vec<RatVector>, unit: RatVector) -> Result<Self> {
        make_algebra(AlgebraSpec::Polyhedral { generators, unit }, name)
    }

    /// The same cone and unit, tagged `Polyhedral` so that every operation
    /// takes the generic LP / double-description route.
    pub fn as_polyhedral(&self) -> Result<Self> {
        match &self.0.cone {
            Some(c) => Ok(EffectAlgebra::from_parts(
                AlgebraKind::Polyhedral,
                Some(c.clone()),
                self.0.unit.clone(),
                &self.0.name,
            )),
            None => Err(Error::UnsupportedKind(self.kind().to_string())),
        }
    }

    pub fn kind(&self) -> AlgebraKind {
        self.0.kind
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    /// The polyhedral cone; `None` for spin factors.
    pub fn cone(&self) -> Option<&Cone> {
        self.0.cone.as_ref()
    }

    pub fn unit(&self) -> &RatVector {
        &self.0.unit
    }

    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn is_spin(&self) -> bool {
        matches!(self.0.kind, AlgebraKind::Spin(_))
    }

    pub(crate) fn cache(&self) -> &crate::spectral::AlgebraCache {
        &self.0.cache
    }

    pub fn same_as(&self, other: &EffectAlgebra) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.kind == other.0.kind
                && self.0.unit == other.0.unit
                && self.0.cone == other.0.cone)
    }

    /// Membership in the positive cone.
    pub fn is_positive(&self, v: &RatVector) -> bool {
        match &self.0.cone {
            Some(c) => cone_contains(c, v),
            None => lorentz_contains(v),
        }
    }

    pub fn contains(&self, v: &RatVector) -> bool {
        v.dim() == self.dim() && self.is_positive(v) && self.is_positive(&(self.unit() - v))
    }

    pub fn effect(&self, coords: RatVector) -> Result<Effect> {
        if coords.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: coords.dim(),
            });
        }
        if !self.contains(&coords) {
            return Err(Error::InvalidEffect(coords.to_string()));
        }
        Ok(Effect {
            algebra: self.clone(),
            coords,
        })
    }

    pub fn zero(&self) -> Effect {
        Effect {
            algebra: self.clone(),
            coords: RatVector::zeros(self.dim()),
        }
    }

    pub fn unit_effect(&self) -> Effect {
        Effect {
            algebra: self.clone(),
            coords: self.unit().clone(),
        }
    }

    /// `{g : 0 ≤ g ≤ u}` as an H-polytope (polyhedral kinds).
    pub fn interval_polytope(&self) -> Result<HPolytope> {
        let cone = self.polyhedral_cone()?;
        let mut p = HPolytope::new(self.dim());
        for f in cone.facets() {
            p.push_inequality(f.clone(), Rational::zero());
            p.push_inequality(-f, -f.dot(self.unit()));
        }
        Ok(p)
    }

    /// Vertices of `[0, u]` (polyhedral kinds), sorted.
    pub fn interval_vertices(&self) -> Result<&[RatVector]> {
        if let Some(v) = self.0.interval_vertices.get() {
            return Ok(v);
        }
        let vs = polytope_vertices(&self.interval_polytope()?)?;
        Ok(self.0.interval_vertices.get_or_init(|| vs))
    }

    pub(crate) fn polyhedral_cone(&self) -> Result<&Cone> {
        self.0
            .cone
            .as_ref()
            .ok_or_else(|| Error::UnsupportedKind(self.kind().to_string()))
    }
}

impl fmt::Debug for EffectAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "EffectAlgebra({}, {}, unit {})",
            self.name(),
            self.kind(),
            self.unit()
        )
    }
}

impl PartialEq for EffectAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

fn lorentz_contains(v: &RatVector) -> bool {
    let t = &v[0];
    let x = v.slice(1..v.dim());
    !t.is_negative() && t * t >= x.norm_sq()
}

/// An element of `[0, u]`.
#[derive(Clone)]
pub struct Effect {
    algebra: EffectAlgebra,
    coords: RatVector,
}

impl Effect {
    pub fn algebra(&self) -> &EffectAlgebra {
        &self.algebra
    }

    pub fn coords(&self) -> &RatVector {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        &self.coords == self.algebra.unit()
    }

    /// Spin-factor split `(t, x)`.
    pub fn spin_parts(&self) -> (Rational, RatVector) {
        (
            self.coords[0].clone(),
            self.coords.slice(1..self.coords.dim()),
        )
    }

    fn same_algebra(&self, other: &Effect) -> Result<()> {
        if self.algebra.same_as(&other.algebra) {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    /// Builds an effect in the same algebra without re-validating.
    pub(crate) fn sibling(&self, coords: RatVector) -> Effect {
        Effect {
            algebra: self.algebra.clone(),
            coords,
        }
    }
}

impl PartialEq for Effect {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords && self.algebra.same_as(&other.algebra)
    }
}

impl Eq for Effect {}

impl fmt::Debug for Effect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coords)
    }
}

impl fmt::Display for Effect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coords)
    }
}

/// `a + b` when it stays below the unit, `None` otherwise.
pub fn effect_sum(a: &Effect, b: &Effect) -> Result<Option<Effect>> {
    a.same_algebra(b)?;
    let s = &a.coords + &b.coords;
    if a.algebra.is_positive(&(a.algebra.unit() - &s)) {
        Ok(Some(a.sibling(s)))
    } else {
        Ok(None)
    }
}

pub fn complement(a: &Effect) -> Effect {
    a.sibling(a.algebra.unit() - &a.coords)
}

pub fn scale(lambda: &Rational, a: &Effect) -> Result<Effect> {
    if lambda.is_negative() || lambda > &Rational::one() {
        return Err(Error::ScalarOutOfRange(fmt_rational(lambda)));
    }
    Ok(a.sibling(a.coords.scale(lambda)))
}

/// `λa + (1-λ)b`.
pub fn mix(lambda: &Rational, a: &Effect, b: &Effect) -> Result<Effect> {
    a.same_algebra(b)?;
    let l = scale(lambda, a)?;
    let r = scale(&(Rational::one() - lambda), b)?;
    Ok(a.sibling(&l.coords + &r.coords))
}

pub fn leq(a: &Effect, b: &Effect) -> Result<bool> {
    a.same_algebra(b)?;
    Ok(a.algebra.is_positive(&(&b.coords - &a.coords)))
}

pub fn is_one_dimensional(f: &Effect) -> bool {
    if f.is_zero() {
        return false;
    }
    match f.algebra.kind() {
        AlgebraKind::Classical(_) => f.coords.iter().filter(|x| !x.is_zero()).count() == 1,
        AlgebraKind::Spin(_) => {
            let (t, x) = f.spin_parts();
            t.is_positive() && &t * &t == x.norm_sq()
        }
        AlgebraKind::Polyhedral => f
            .algebra
            .cone()
            .is_some_and(|c| c.is_extreme_ray(&f.coords)),
    }
}

/// Sharp: the only `g` with `g ≤ f` and `g ≤ u - f` is zero.
pub fn is_sharp(f: &Effect) -> bool {
    match f.algebra.kind() {
        AlgebraKind::Classical(_) => f.coords.iter().all(|x| x.is_zero() || x.is_one()),
        AlgebraKind::Spin(_) => is_spin_vertex(f),
        AlgebraKind::Polyhedral => sharpness_certificate(f)
            .expect("sharpness LP over a bounded nonempty region")
            .is_none(),
    }
}

/// A nonzero `g` below both `f` and `u - f`, if one exists (polyhedral kinds).
///
/// Maximizes a strictly positive functional (the sum of facet normals) over
/// `{g : g ≥ 0, g ≤ f, g ≤ u - f}`; `f` is sharp iff the optimum is zero.
pub fn sharpness_certificate(f: &Effect) -> Result<Option<Effect>> {
    let alg = &f.algebra;
    let cone = alg.polyhedral_cone()?;
    let rest = alg.unit() - &f.coords;
    let mut p = HPolytope::new(alg.dim());
    for n in cone.facets() {
        p.push_inequality(n.clone(), Rational::zero());
        p.push_inequality(-n, -n.dot(&f.coords));
        p.push_inequality(-n, -n.dot(&rest));
    }
    let one = Rational::one();
    let e = RatVector::combination(alg.dim(), cone.facets().iter().map(|n| (&one, n)));
    let sol = lp_solve(&e, &p, Sense::Maximize)?;
    if sol.value.is_zero() {
        Ok(None)
    } else {
        Ok(Some(f.sibling(sol.point)))
    }
}

/// Extreme point of the convex set `[0, u]`.
pub fn is_extremal(f: &Effect) -> bool {
    match f.algebra.kind() {
        AlgebraKind::Classical(_) => f.coords.iter().all(|x| x.is_zero() || x.is_one()),
        AlgebraKind::Spin(_) => is_spin_vertex(f),
        AlgebraKind::Polyhedral => {
            let cone = f.algebra.cone().expect("polyhedral kind has a cone");
            let rest = f.algebra.unit() - &f.coords;
            let tight: Vec<RatVector> = cone
                .facets()
                .iter()
                .filter(|n| n.dot(&f.coords).is_zero() || n.dot(&rest).is_zero())
                .cloned()
                .collect();
            rank_of(&tight, f.algebra.dim()) == f.algebra.dim()
        }
    }
}

/// `0`, `u`, or `½(1, ω)` with `‖ω‖ = 1`.
fn is_spin_vertex(f: &Effect) -> bool {
    if f.is_zero() || f.is_unit() {
        return true;
    }
    let (t, x) = f.spin_parts();
    t == half() && x.norm_sq() == &half() * &half()
}

/// `inf {λ > 0 : -λu ≤ v ≤ λu}`.
pub fn order_unit_norm(v: &RatVector, alg: &EffectAlgebra) -> Result<Rational> {
    if v.dim() != alg.dim() {
        return Err(Error::SpanMismatch {
            expected: alg.dim(),
            got: v.dim(),
        });
    }
    match alg.kind() {
        AlgebraKind::Classical(_) => Ok(v
            .iter()
            .map(|x| x.abs())
            .max()
            .unwrap_or_else(Rational::zero)),
        AlgebraKind::Spin(_) => {
            let t = v[0].clone();
            let x = v.slice(1..v.dim());
            let r = rational_sqrt(&x.norm_sq())
                .ok_or_else(|| Error::SymbolicNormRequired(fmt_rational(&x.norm_sq())))?;
            Ok(t.abs() + r)
        }
        AlgebraKind::Polyhedral => {
            // One variable λ: n·(λu ∓ v) ≥ 0 for every facet n.
            let cone = alg.polyhedral_cone()?;
            let mut p = HPolytope::new(1);
            for n in cone.facets() {
                let nu = n.dot(alg.unit());
                let nv = n.dot(v);
                p.push_inequality(RatVector::new(vec![nu.clone()]), nv.clone());
                p.push_inequality(RatVector::new(vec![nu]), -nv);
            }
            p.push_inequality(RatVector::new(vec![Rational::one()]), Rational::zero());
            let sol = lp_solve(&RatVector::new(vec![Rational::one()]), &p, Sense::Minimize)?;
            Ok(sol.value)
        }
    }
}

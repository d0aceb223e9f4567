//! Contexts, spectral decompositions and the lattice of sharp elements.
//!
//! A context is a finite set of sharp one-dimensional effects summing to the
//! unit. Polyhedral algebras have finitely many of them, found by subset-sum
//! search over the sharp one-dimensional elements; spin factors have the
//! continuum `{½(1, ω), ½(1, -ω)}` which is described parametrically.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};

use crate::algebra::{
    complement, is_one_dimensional, is_sharp, leq, mix, order_unit_norm, AlgebraKind, Effect,
    EffectAlgebra,
};
use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::lp::{feasible_point, lp_solve, HPolytope, Sense};
use crate::rational::{fmt_rational, half, int, rat, rational_sqrt, RatVector, Rational};
use crate::states::{hat_face, FaceStates, State};

#[derive(Default)]
pub(crate) struct AlgebraCache {
    sharp_one_dim: OnceLock<Vec<RatVector>>,
    contexts: OnceLock<Vec<Vec<RatVector>>>,
}

/// Sharp one-dimensional effects summing to the unit, in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Context {
    elements: Vec<Effect>,
}

impl Context {
    /// Validates and canonically orders the elements.
    pub fn new(mut elements: Vec<Effect>) -> Result<Context> {
        let first = elements
            .first()
            .ok_or_else(|| Error::InvalidParameters("empty context".into()))?;
        let alg = first.algebra().clone();
        if elements.iter().any(|e| !e.algebra().same_as(&alg)) {
            return Err(Error::AlgebraMismatch);
        }
        elements.sort_by(|a, b| a.coords().cmp(b.coords()));
        elements.dedup();
        let one = Rational::one();
        let sum = RatVector::combination(alg.dim(), elements.iter().map(|e| (&one, e.coords())));
        if &sum != alg.unit() {
            return Err(Error::InvalidParameters(format!(
                "context elements sum to {sum}, not the unit"
            )));
        }
        if let Some(bad) = elements
            .iter()
            .find(|e| !is_sharp(e) || !is_one_dimensional(e))
        {
            return Err(Error::InvalidParameters(format!(
                "context element {bad} is not sharp and one-dimensional"
            )));
        }
        Ok(Context { elements })
    }

    fn from_sorted(elements: Vec<Effect>) -> Context {
        Context { elements }
    }

    pub fn elements(&self) -> &[Effect] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn algebra(&self) -> &EffectAlgebra {
        self.elements[0].algebra()
    }

    pub fn coords(&self) -> Vec<RatVector> {
        self.elements.iter().map(|e| e.coords().clone()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ContextFamily {
    /// Exhaustive list of all contexts.
    Finite(Vec<Context>),
    /// `{½(1, ω), ½(1, -ω)}` over all unit vectors `ω ∈ ℝᵈ`.
    SpinParametric(usize),
}

impl ContextFamily {
    pub fn count_label(&self) -> String {
        match self {
            ContextFamily::Finite(cs) => cs.len().to_string(),
            ContextFamily::SpinParametric(_) => "uncountable".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SharpOneDim {
    Finite(Vec<Effect>),
    /// `{½(1, ω) : ‖ω‖ = 1}` in spin(d).
    SpinFamily(usize),
}

/// `f = Σ μᵢ aᵢ` with `μᵢ ∈ [0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub context: Context,
    pub coefficients: Vec<Rational>,
}

impl Decomposition {
    pub fn recompose(&self) -> RatVector {
        let alg = self.context.algebra();
        RatVector::combination(
            alg.dim(),
            self.coefficients
                .iter()
                .zip(self.context.elements().iter().map(Effect::coords)),
        )
    }

    pub fn max_coefficient(&self) -> Rational {
        self.coefficients.iter().max().cloned().unwrap_or_default()
    }

    pub fn min_coefficient(&self) -> Rational {
        self.coefficients.iter().min().cloned().unwrap_or_default()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Level {
    pub coefficient: Rational,
    pub projection: Effect,
}

/// `f = Σ μᵢ pᵢ` with `μ₁ > … > μₙ > 0` and sharp, summable `pᵢ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupedDecomposition {
    pub levels: Vec<Level>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonSpectralWitness {
    pub effect: Effect,
    pub checked_contexts: ContextFamily,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decomposed {
    Spectral(Decomposition),
    NonSpectral(NonSpectralWitness),
}

impl Decomposed {
    pub fn into_result(self) -> Result<Decomposition> {
        match self {
            Decomposed::Spectral(d) => Ok(d),
            Decomposed::NonSpectral(w) => Err(Error::NotSpectral(w.effect.to_string())),
        }
    }
}

/// S₁(E): all sharp one-dimensional effects.
pub fn sharp_one_dim_elements(alg: &EffectAlgebra) -> Result<SharpOneDim> {
    match alg.kind() {
        AlgebraKind::Spin(d) => Ok(SharpOneDim::SpinFamily(d)),
        AlgebraKind::Classical(n) => Ok(SharpOneDim::Finite(
            (0..n)
                .rev()
                .map(|i| alg.effect(RatVector::unit(n, i)))
                .collect::<Result<_>>()?,
        )),
        AlgebraKind::Polyhedral => {
            let coords = polyhedral_sharp_one_dim(alg)?;
            Ok(SharpOneDim::Finite(
                coords
                    .iter()
                    .map(|c| alg.effect(c.clone()))
                    .collect::<Result<_>>()?,
            ))
        }
    }
}

fn polyhedral_sharp_one_dim(alg: &EffectAlgebra) -> Result<&[RatVector]> {
    if let Some(v) = alg.cache().sharp_one_dim.get() {
        return Ok(v);
    }
    let cone = alg.polyhedral_cone()?;
    let mut found = BTreeSet::new();
    for r in cone.generators() {
        // λ_max = max {λ : λ r ≤ u}
        let mut p = HPolytope::new(1);
        for n in cone.facets() {
            p.push_inequality(RatVector::new(vec![-n.dot(r)]), -n.dot(alg.unit()));
        }
        p.push_inequality(RatVector::new(vec![Rational::one()]), Rational::zero());
        let lmax = lp_solve(&RatVector::new(vec![Rational::one()]), &p, Sense::Maximize)?.value;
        // Smaller multiples of r sit below both themselves and their complement.
        let candidate = alg.effect(r.scale(&lmax))?;
        if is_sharp(&candidate) {
            found.insert(candidate.coords().clone());
        }
    }
    let v: Vec<RatVector> = found.into_iter().collect();
    Ok(alg.cache().sharp_one_dim.get_or_init(|| v))
}

pub fn enumerate_contexts(alg: &EffectAlgebra) -> Result<ContextFamily> {
    match alg.kind() {
        AlgebraKind::Spin(d) => Ok(ContextFamily::SpinParametric(d)),
        AlgebraKind::Classical(_) => {
            let SharpOneDim::Finite(basis) = sharp_one_dim_elements(alg)? else {
                unreachable!()
            };
            let mut basis = basis;
            basis.sort_by(|a, b| a.coords().cmp(b.coords()));
            Ok(ContextFamily::Finite(vec![Context::from_sorted(basis)]))
        }
        AlgebraKind::Polyhedral => Ok(ContextFamily::Finite(
            polyhedral_contexts(alg)?
                .iter()
                .map(|c| {
                    Context::from_sorted(
                        c.iter()
                            .map(|v| alg.effect(v.clone()).expect("cached effect"))
                            .collect(),
                    )
                })
                .collect(),
        )),
    }
}

fn polyhedral_contexts(alg: &EffectAlgebra) -> Result<&[Vec<RatVector>]> {
    if let Some(v) = alg.cache().contexts.get() {
        return Ok(v);
    }
    let candidates = polyhedral_sharp_one_dim(alg)?.to_vec();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    subset_search(
        alg,
        &candidates,
        0,
        &RatVector::zeros(alg.dim()),
        &mut chosen,
        &mut out,
    );
    out.sort();
    Ok(alg.cache().contexts.get_or_init(|| out))
}

fn subset_search(
    alg: &EffectAlgebra,
    candidates: &[RatVector],
    start: usize,
    partial: &RatVector,
    chosen: &mut Vec<usize>,
    out: &mut Vec<Vec<RatVector>>,
) {
    if partial == alg.unit() {
        out.push(chosen.iter().map(|&i| candidates[i].clone()).collect());
        return;
    }
    for i in start..candidates.len() {
        let next = partial + &candidates[i];
        // Every candidate is positive, so partial sums must stay below u.
        if !alg.is_positive(&(alg.unit() - &next)) {
            continue;
        }
        chosen.push(i);
        subset_search(alg, candidates, i + 1, &next, chosen, out);
        chosen.pop();
    }
}

/// The spin context `{½(1, ω), ½(1, -ω)}`; `ω` must be a rational unit vector.
pub fn spin_context(alg: &EffectAlgebra, omega: &RatVector) -> Result<Context> {
    let AlgebraKind::Spin(d) = alg.kind() else {
        return Err(Error::UnsupportedKind(alg.kind().to_string()));
    };
    if omega.dim() != d || omega.norm_sq() != Rational::one() {
        return Err(Error::InvalidParameters(format!(
            "{omega} is not a unit vector in dimension {d}"
        )));
    }
    let plus = alg.effect(spin_projection(omega))?;
    let minus = alg.effect(spin_projection(&-omega))?;
    let mut elements = vec![plus, minus];
    elements.sort_by(|a, b| a.coords().cmp(b.coords()));
    Ok(Context::from_sorted(elements))
}

/// `½(1, ω)`.
pub fn spin_projection(omega: &RatVector) -> RatVector {
    RatVector::new(vec![half()]).concat(&omega.scale(&half()))
}

pub fn spectral_decomposition(f: &Effect) -> Result<Decomposed> {
    let alg = f.algebra();
    match alg.kind() {
        AlgebraKind::Classical(_) => {
            let ContextFamily::Finite(cs) = enumerate_contexts(alg)? else {
                unreachable!()
            };
            let ctx = cs.into_iter().next().expect("classical context");
            let coefficients = ctx
                .elements()
                .iter()
                .map(|e| e.coords().dot(f.coords()))
                .collect();
            Ok(Decomposed::Spectral(Decomposition {
                context: ctx,
                coefficients,
            }))
        }
        AlgebraKind::Spin(d) => {
            let (t, x) = f.spin_parts();
            if x.is_zero() {
                let ctx = spin_context(alg, &RatVector::unit(d, 0))?;
                return Ok(Decomposed::Spectral(Decomposition {
                    context: ctx,
                    coefficients: vec![t.clone(), t],
                }));
            }
            let r = rational_sqrt(&x.norm_sq())
                .ok_or_else(|| Error::SymbolicNormRequired(fmt_rational(&x.norm_sq())))?;
            let omega = x.scale(&r.recip());
            let ctx = spin_context(alg, &omega)?;
            let plus = spin_projection(&omega);
            let coefficients = ctx
                .elements()
                .iter()
                .map(|e| {
                    if e.coords() == &plus {
                        &t + &r
                    } else {
                        &t - &r
                    }
                })
                .collect();
            Ok(Decomposed::Spectral(Decomposition {
                context: ctx,
                coefficients,
            }))
        }
        AlgebraKind::Polyhedral => {
            let family = enumerate_contexts(alg)?;
            let ContextFamily::Finite(contexts) = &family else {
                unreachable!()
            };
            for ctx in contexts {
                if let Some(coefficients) = solve_coefficients(ctx, f.coords())? {
                    return Ok(Decomposed::Spectral(Decomposition {
                        context: ctx.clone(),
                        coefficients,
                    }));
                }
            }
            let reason = if contexts.is_empty() {
                "algebra has no contexts".to_string()
            } else {
                format!(
                    "no coefficient vector in [0,1] over any of {} contexts",
                    contexts.len()
                )
            };
            Ok(Decomposed::NonSpectral(NonSpectralWitness {
                effect: f.clone(),
                checked_contexts: family,
                reason,
            }))
        }
    }
}

/// Shorthand for [`spectral_decomposition`] that treats a witness as an error.
pub fn decompose(f: &Effect) -> Result<Decomposition> {
    spectral_decomposition(f)?.into_result()
}

/// Coefficients in `[0, 1]` expressing `target` over `ctx`, if any.
fn solve_coefficients(ctx: &Context, target: &RatVector) -> Result<Option<Vec<Rational>>> {
    let dim = target.dim();
    let cols = ctx.coords();
    let m = RatMatrix::from_columns(&cols, dim);
    let Some(sol) = m.solve(target) else {
        return Ok(None);
    };
    let in_range = |x: &Rational| !x.is_negative() && x <= &Rational::one();
    if m.nullspace().is_empty() {
        return Ok(sol.iter().all(in_range).then(|| sol.into_entries()));
    }
    // Dependent context: search the solution set for a point in the box.
    let k = cols.len();
    let mut p = HPolytope::unit_box(k, Rational::zero(), Rational::one());
    for i in 0..dim {
        p.push_equality(m.row(i), target[i].clone());
    }
    match feasible_point(&p) {
        Ok(x) => Ok(Some(x.into_entries())),
        Err(Error::Infeasible) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Decomposes an arbitrary vector `v = Σ αᵢ aᵢ` over a context, with real
/// (possibly negative) coefficients, via `a = v/(2λ) + u/2` for `λ = ‖v‖`.
pub fn decompose_vector(v: &RatVector, alg: &EffectAlgebra) -> Result<(Context, Vec<Rational>)> {
    let lambda = order_unit_norm(v, alg)?;
    if lambda.is_zero() {
        let d = decompose(&alg.zero())?;
        return Ok((d.context, d.coefficients));
    }
    let a = &v.scale(&(int(2) * &lambda).recip()) + &alg.unit().scale(&half());
    let d = decompose(&alg.effect(a)?)?;
    let coefficients = d
        .coefficients
        .iter()
        .map(|nu| &lambda * (int(2) * nu - Rational::one()))
        .collect();
    Ok((d.context, coefficients))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Extrema {
    pub max: Rational,
    pub min: Rational,
    /// States from the faces of the context elements attaining the extrema.
    pub max_state: Option<State>,
    pub min_state: Option<State>,
    /// Exact LP max/min of `s(f)` over the state polytope (polyhedral kinds).
    pub lp_max: Option<Rational>,
    pub lp_min: Option<Rational>,
}

impl Extrema {
    pub fn lp_agrees(&self) -> bool {
        self.lp_max.as_ref().is_none_or(|m| m == &self.max)
            && self.lp_min.as_ref().is_none_or(|m| m == &self.min)
    }
}

/// Max and min of `s(f)` over states, read off the coefficients of `d`.
pub fn minmax_extrema(f: &Effect, d: &Decomposition) -> Result<Extrema> {
    if &d.recompose() != f.coords() {
        return Err(Error::DecompositionMismatch);
    }
    let pick = |target: &Rational| -> Result<Option<State>> {
        let i = d
            .coefficients
            .iter()
            .position(|c| c == target)
            .expect("extremal coefficient present");
        let face = hat_face(&d.context.elements()[i])?;
        Ok(match face.states {
            FaceStates::Vertices(v) => v.into_iter().next(),
            FaceStates::WholeBall(_) => None,
        })
    };
    let max = d.max_coefficient();
    let min = d.min_coefficient();
    let (lp_max, lp_min) = match f.algebra().kind() {
        AlgebraKind::Spin(_) => (None, None),
        _ => {
            let sp = crate::states::state_polytope(f.algebra())?;
            (
                Some(lp_solve(f.coords(), &sp, Sense::Maximize)?.value),
                Some(lp_solve(f.coords(), &sp, Sense::Minimize)?.value),
            )
        }
    };
    Ok(Extrema {
        max_state: pick(&max)?,
        min_state: pick(&min)?,
        max,
        min,
        lp_max,
        lp_min,
    })
}

/// Whether two decompositions of `f` agree on their largest and smallest coefficients.
pub fn check_decomposition_extrema(
    f: &Effect,
    d1: &Decomposition,
    d2: &Decomposition,
) -> Result<bool> {
    if &d1.recompose() != f.coords() || &d2.recompose() != f.coords() {
        return Err(Error::DecompositionMismatch);
    }
    Ok(
        d1.max_coefficient() == d2.max_coefficient()
            && d1.min_coefficient() == d2.min_coefficient(),
    )
}

fn group(f: &Effect, context: &Context, coefficients: &[Rational]) -> GroupedDecomposition {
    let alg = f.algebra();
    let mut by_coeff: BTreeMap<Rational, RatVector> = BTreeMap::new();
    for (c, e) in coefficients.iter().zip(context.elements()) {
        if c.is_zero() {
            continue;
        }
        let slot = by_coeff
            .entry(c.clone())
            .or_insert_with(|| RatVector::zeros(alg.dim()));
        *slot = &*slot + e.coords();
    }
    GroupedDecomposition {
        levels: by_coeff
            .into_iter()
            .rev()
            .map(|(coefficient, p)| Level {
                coefficient,
                projection: f.sibling(p),
            })
            .collect(),
    }
}

/// Merges equal coefficients and drops zeros; levels strictly decreasing.
pub fn grouped_decomposition(f: &Effect) -> Result<GroupedDecomposition> {
    let d = decompose(f)?;
    Ok(group(f, &d.context, &d.coefficients))
}

/// Second route to the grouped form: through the order-unit norm and the
/// affine rescaling used by [`decompose_vector`].
pub fn grouped_decomposition_via_norm(f: &Effect) -> Result<GroupedDecomposition> {
    let (ctx, coefficients) = decompose_vector(f.coords(), f.algebra())?;
    Ok(group(f, &ctx, &coefficients))
}

impl GroupedDecomposition {
    pub fn recompose(&self, dim: usize) -> RatVector {
        RatVector::combination(
            dim,
            self.levels
                .iter()
                .map(|l| (&l.coefficient, l.projection.coords())),
        )
    }
}

/// f⁰: the smallest sharp element above `f`.
pub fn sharp_cover(f: &Effect) -> Result<Effect> {
    let alg = f.algebra();
    if alg.is_spin() {
        // Closed form; needs no square roots.
        let (t, x) = f.spin_parts();
        if f.is_zero() {
            return Ok(alg.zero());
        }
        if &t * &t > x.norm_sq() {
            return Ok(alg.unit_effect());
        }
        // t = ‖x‖ > 0: the cover is ½(1, x/t).
        return alg.effect(spin_projection(&x.scale(&t.recip())));
    }
    let d = decompose(f)?;
    let one = Rational::one();
    let sum = RatVector::combination(
        alg.dim(),
        d.coefficients
            .iter()
            .zip(d.context.elements())
            .filter(|(c, _)| c.is_positive())
            .map(|(_, e)| (&one, e.coords())),
    );
    Ok(f.sibling(sum))
}

fn require_sharp(f: &Effect) -> Result<()> {
    if is_sharp(f) {
        Ok(())
    } else {
        Err(Error::NotSharp(f.to_string()))
    }
}

/// `f ∨ g = (½f + ½g)⁰` for sharp `f`, `g`.
pub fn sharp_join(f: &Effect, g: &Effect) -> Result<Effect> {
    require_sharp(f)?;
    require_sharp(g)?;
    sharp_cover(&mix(&half(), f, g)?)
}

/// `f ∧ g = 1 - ((1-f) ∨ (1-g))`.
pub fn sharp_meet(f: &Effect, g: &Effect) -> Result<Effect> {
    Ok(complement(&sharp_join(&complement(f), &complement(g))?))
}

/// Recomputes `(λf + (1-λ)g)⁰` at λ ∈ {¼, ½, ¾}; true iff all agree.
pub fn join_is_lambda_independent(f: &Effect, g: &Effect) -> Result<bool> {
    require_sharp(f)?;
    require_sharp(g)?;
    let covers = [rat(1, 4), half(), rat(3, 4)]
        .iter()
        .map(|l| sharp_cover(&mix(l, f, g)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(covers.windows(2).all(|w| w[0] == w[1]))
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LatticeReport {
    pub candidates: usize,
    pub checks: usize,
    pub failures: Vec<String>,
    /// Joins that could not be computed (e.g. a non-spectral mixture).
    pub undecided: Vec<String>,
}

impl LatticeReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.undecided.is_empty()
    }
}

/// Checks lattice and orthomodular laws over all pairs and triples of candidates.
pub fn orthomodularity_check(alg: &EffectAlgebra, candidates: &[Effect]) -> Result<LatticeReport> {
    for c in candidates {
        if !c.algebra().same_as(alg) {
            return Err(Error::AlgebraMismatch);
        }
        require_sharp(c)?;
    }
    let mut report = LatticeReport {
        candidates: candidates.len(),
        ..Default::default()
    };
    let mut joins: HashMap<(RatVector, RatVector), Option<Effect>> = HashMap::new();
    let mut join = |a: &Effect, b: &Effect, report: &mut LatticeReport| -> Option<Effect> {
        let key = (a.coords().clone(), b.coords().clone());
        if let Some(j) = joins.get(&key) {
            return j.clone();
        }
        let j = match sharp_join(a, b) {
            Ok(j) => Some(j),
            Err(e) => {
                report.undecided.push(format!("{a} ∨ {b}: {e}"));
                None
            }
        };
        joins.insert(key, j.clone());
        j
    };
    let check = |ok: bool, what: String, report: &mut LatticeReport| {
        report.checks += 1;
        if !ok {
            report.failures.push(what);
        }
    };

    for f in candidates {
        if let Some(j) = join(f, &complement(f), &mut report) {
            check(j.is_unit(), format!("f ∨ f' ≠ u for {f}"), &mut report);
        }
        for g in candidates {
            let (Some(fg), Some(gf)) = (join(f, g, &mut report), join(g, f, &mut report)) else {
                continue;
            };
            check(
                fg == gf,
                format!("commutativity fails for {f}, {g}"),
                &mut report,
            );
            check(
                leq(f, &fg)? && leq(g, &fg)?,
                format!("join is not an upper bound for {f}, {g}"),
                &mut report,
            );
            // Complementation reverses order: (f ∨ g)' ≤ f'.
            check(
                leq(&complement(&fg), &complement(f))?,
                format!("complement is not antitone on {f}, {g}"),
                &mut report,
            );
            if let Some(cj) = join(&complement(f), &complement(g), &mut report) {
                let meet = complement(&cj);
                if let Some(abs) = join(f, &meet, &mut report) {
                    check(
                        &abs == f,
                        format!("absorption f ∨ (f ∧ g) ≠ f for {f}, {g}"),
                        &mut report,
                    );
                }
            }
            match join_is_lambda_independent(f, g) {
                Ok(ok) => check(ok, format!("join depends on λ for {f}, {g}"), &mut report),
                Err(e) => report
                    .undecided
                    .push(format!("λ-independence for {f}, {g}: {e}")),
            }
            if leq(f, g)? {
                // Orthomodular law: g = f ∨ (g ∧ (1 - f)).
                let Some(inner) = join(&complement(g), f, &mut report) else {
                    continue;
                };
                let g_meet_fc = complement(&inner);
                if let Some(rhs) = join(f, &g_meet_fc, &mut report) {
                    check(
                        &rhs == g,
                        format!("orthomodular law fails for {f} ≤ {g}"),
                        &mut report,
                    );
                }
            }
        }
    }
    for f in candidates {
        for g in candidates {
            let Some(fg) = join(f, g, &mut report) else {
                continue;
            };
            for h in candidates {
                // Least upper bound among the candidates.
                if leq(f, h)? && leq(g, h)? {
                    check(
                        leq(&fg, h)?,
                        format!("{f} ∨ {g} is not below {h}"),
                        &mut report,
                    );
                }
                let Some(gh) = join(g, h, &mut report) else {
                    continue;
                };
                let (Some(l), Some(r)) = (join(&fg, h, &mut report), join(f, &gh, &mut report))
                else {
                    continue;
                };
                check(
                    l == r,
                    format!("associativity fails for {f}, {g}, {h}"),
                    &mut report,
                );
            }
        }
    }
    report.undecided.sort();
    report.undecided.dedup();
    Ok(report)
}

/// Rational unit vectors in ℚᵈ: signed axes plus Pythagorean directions.
pub fn rational_unit_vectors(d: usize) -> Vec<RatVector> {
    let mut out = BTreeSet::new();
    for i in 0..d {
        out.insert(RatVector::unit(d, i));
        out.insert(-&RatVector::unit(d, i));
    }
    let triples: [(i64, i64, i64); 3] = [(3, 4, 5), (5, 12, 13), (8, 15, 17)];
    if d >= 2 {
        for &(a, b, c) in &triples {
            for (sa, sb) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
                let mut v = vec![Rational::zero(); d];
                v[0] = rat(sa * a, c);
                v[1] = rat(sb * b, c);
                out.insert(RatVector::new(v));
            }
        }
    }
    if d >= 3 {
        for &(a, b, c, n) in &[(1, 2, 2, 3), (2, 3, 6, 7)] {
            let mut v = vec![Rational::zero(); d];
            v[0] = rat(a, n);
            v[1] = rat(b, n);
            v[2] = rat(c, n);
            out.insert(RatVector::new(v.clone()));
            out.insert(-&RatVector::new(v));
        }
    }
    out.into_iter().collect()
}

/// Weights `λ ∈ (0, 1)` with `λ² + (1-λ)²` a rational square.
///
/// Rational points on `2λ² - 2λ + 1 = r²` through `(0, 1)`: the line
/// `r = 1 + kλ` meets the conic again at `λ = (2 + 2k)/(2 - k²)`.
pub fn pythagorean_weights(count: usize) -> Vec<Rational> {
    let mut out = BTreeSet::new();
    let mut denom = count as i64 + 1;
    while out.len() < count {
        for j in 1..denom {
            let k = rat(-j, denom);
            let lambda = (int(2) + int(2) * &k) / (int(2) - &k * &k);
            if lambda.is_positive() && lambda < Rational::one() {
                out.insert(lambda);
            }
        }
        denom += 1;
    }
    out.into_iter().take(count).collect()
}

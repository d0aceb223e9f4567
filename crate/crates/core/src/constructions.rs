//! Direct products, direct convex sums, the builtin corpus and a small
//! affine-isomorphism search.

use std::collections::BTreeSet;

use num_traits::Zero;

use crate::algebra::{AlgebraKind, Effect, EffectAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{independent_subset, RatMatrix};
use crate::rational::{half, RatVector, Rational};
use crate::spectral::{
    enumerate_contexts, sharp_one_dim_elements, spectral_decomposition, Context, ContextFamily,
    Decomposed, NonSpectralWitness, SharpOneDim,
};

const MAX_ISOMORPHISM_RAYS: usize = 12;

fn require_polyhedral(alg: &EffectAlgebra) -> Result<()> {
    if alg.is_spin() {
        Err(Error::UnsupportedKind(alg.kind().to_string()))
    } else {
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct ProductAlgebra {
    pub left: EffectAlgebra,
    pub right: EffectAlgebra,
    pub result: EffectAlgebra,
}

impl ProductAlgebra {
    /// `(f₁, f₂)`.
    pub fn pair(&self, f1: &Effect, f2: &Effect) -> Result<Effect> {
        if !f1.algebra().same_as(&self.left) || !f2.algebra().same_as(&self.right) {
            return Err(Error::AlgebraMismatch);
        }
        self.result.effect(f1.coords().concat(f2.coords()))
    }

    pub fn split(&self, f: &Effect) -> Result<(Effect, Effect)> {
        let n = self.left.dim();
        let c = f.coords();
        Ok((
            self.left.effect(c.slice(0..n))?,
            self.right.effect(c.slice(n..c.dim()))?,
        ))
    }

    pub fn embed_left(&self, a: &Effect) -> Result<Effect> {
        self.pair(a, &self.right.zero())
    }

    pub fn embed_right(&self, b: &Effect) -> Result<Effect> {
        self.pair(&self.left.zero(), b)
    }
}

/// `E₁ × E₂` with the block cone `C₁ × C₂` and unit `(u₁, u₂)`.
pub fn direct_product(e1: &EffectAlgebra, e2: &EffectAlgebra) -> Result<ProductAlgebra> {
    require_polyhedral(e1)?;
    require_polyhedral(e2)?;
    let name = format!("{} x {}", e1.name(), e2.name());
    let result = match (e1.kind(), e2.kind()) {
        (AlgebraKind::Classical(n), AlgebraKind::Classical(m)) => {
            crate::algebra::make_algebra(crate::algebra::AlgebraSpec::Classical(n + m), &name)?
        }
        _ => {
            let (n, m) = (e1.dim(), e2.dim());
            let c1 = e1.polyhedral_cone()?;
            let c2 = e2.polyhedral_cone()?;
            let gens = c1
                .generators()
                .iter()
                .map(|g| g.concat(&RatVector::zeros(m)))
                .chain(
                    c2.generators()
                        .iter()
                        .map(|h| RatVector::zeros(n).concat(h)),
                )
                .collect();
            EffectAlgebra::polyhedral(&name, gens, e1.unit().concat(e2.unit()))?
        }
    };
    Ok(ProductAlgebra {
        left: e1.clone(),
        right: e2.clone(),
        result,
    })
}

#[derive(Clone, Debug)]
pub struct SumAlgebra {
    pub left: EffectAlgebra,
    pub right: EffectAlgebra,
    /// Linear map `V₁ × V₂ → V` with kernel `span{(u₁, -u₂)}`.
    pub basis_map: RatMatrix,
    pub result: EffectAlgebra,
}

impl SumAlgebra {
    /// `[(v₁, v₂)]≈`.
    pub fn image(&self, v1: &RatVector, v2: &RatVector) -> RatVector {
        self.basis_map.mul_vec(&v1.concat(v2))
    }

    pub fn embed_left(&self, a: &Effect) -> Result<Effect> {
        self.result
            .effect(self.image(a.coords(), &RatVector::zeros(self.right.dim())))
    }

    pub fn embed_right(&self, b: &Effect) -> Result<Effect> {
        self.result
            .effect(self.image(&RatVector::zeros(self.left.dim()), b.coords()))
    }
}

/// Coordinates on `V` relative to `u`: the entries of `v - φ(v)u` other than
/// the pivot, then `φ(v) = v[k]/u[k]` for the last nonzero entry `k` of `u`.
fn unit_split(v: &RatVector, u: &RatVector) -> (Vec<Rational>, Rational) {
    let k = (0..u.dim())
        .rev()
        .find(|&i| !u[i].is_zero())
        .expect("order unit is nonzero");
    let phi = &v[k] / &u[k];
    let rest = v - &u.scale(&phi);
    let coords = (0..v.dim())
        .filter(|&i| i != k)
        .map(|i| rest[i].clone())
        .collect();
    (coords, phi)
}

/// `E₁ ⊕ E₂ = [0, u]` in `(V₁ × V₂)/≈` where `(u₁, 0) ≈ (0, u₂)`.
pub fn direct_convex_sum(e1: &EffectAlgebra, e2: &EffectAlgebra) -> Result<SumAlgebra> {
    require_polyhedral(e1)?;
    require_polyhedral(e2)?;
    let (n, m) = (e1.dim(), e2.dim());
    let apply = |v: &RatVector| -> RatVector {
        let (c1, p1) = unit_split(&v.slice(0..n), e1.unit());
        let (c2, p2) = unit_split(&v.slice(n..n + m), e2.unit());
        let mut out = c1;
        out.extend(c2);
        out.push(p1 + p2);
        RatVector::new(out)
    };
    let columns: Vec<RatVector> = (0..n + m)
        .map(|j| apply(&RatVector::unit(n + m, j)))
        .collect();
    let basis_map = RatMatrix::from_columns(&columns, n + m - 1);

    let c1 = e1.polyhedral_cone()?;
    let c2 = e2.polyhedral_cone()?;
    let gens: Vec<RatVector> = c1
        .generators()
        .iter()
        .map(|g| basis_map.mul_vec(&g.concat(&RatVector::zeros(m))))
        .chain(
            c2.generators()
                .iter()
                .map(|h| basis_map.mul_vec(&RatVector::zeros(n).concat(h))),
        )
        .collect();
    let unit = basis_map.mul_vec(&e1.unit().concat(&RatVector::zeros(m)));
    let result = EffectAlgebra::polyhedral(&format!("{} + {}", e1.name(), e2.name()), gens, unit)?;
    Ok(SumAlgebra {
        left: e1.clone(),
        right: e2.clone(),
        basis_map,
        result,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SumContextClassification {
    /// Contexts of the sum that are images of contexts of the left summand.
    pub left: Vec<Context>,
    pub right: Vec<Context>,
}

fn embedded_contexts(
    alg: &EffectAlgebra,
    embed: impl Fn(&Effect) -> Result<Effect>,
) -> Result<Vec<Vec<RatVector>>> {
    let ContextFamily::Finite(cs) = enumerate_contexts(alg)? else {
        return Err(Error::UnsupportedKind(alg.kind().to_string()));
    };
    cs.iter()
        .map(|c| {
            let mut v = c
                .elements()
                .iter()
                .map(|e| embed(e).map(|x| x.coords().clone()))
                .collect::<Result<Vec<_>>>()?;
            v.sort();
            v.dedup();
            Ok(v)
        })
        .collect()
}

/// Splits the contexts of `E₁ ⊕ E₂` into images of left and right contexts.
pub fn classify_sum_contexts(s: &SumAlgebra) -> Result<SumContextClassification> {
    let lefts = embedded_contexts(&s.left, |e| s.embed_left(e))?;
    let rights = embedded_contexts(&s.right, |e| s.embed_right(e))?;
    let ContextFamily::Finite(contexts) = enumerate_contexts(&s.result)? else {
        unreachable!("sum algebras are polyhedral")
    };
    let mut out = SumContextClassification {
        left: Vec::new(),
        right: Vec::new(),
    };
    for ctx in &contexts {
        let coords = ctx.coords();
        let in_left = lefts.contains(&coords);
        let in_right = rights.contains(&coords);
        if !in_left && !in_right {
            return Err(Error::ClassificationFailure(format!("{coords:?}")));
        }
        if in_left {
            out.left.push(ctx.clone());
        }
        if in_right {
            out.right.push(ctx.clone());
        }
    }
    let found: BTreeSet<Vec<RatVector>> = contexts.iter().map(Context::coords).collect();
    if let Some(missing) = lefts.iter().chain(&rights).find(|c| !found.contains(*c)) {
        return Err(Error::ClassificationFailure(format!(
            "summand context {missing:?} is not a context of the sum"
        )));
    }
    Ok(out)
}

/// A one-dimensional effect that is not a multiple of the unit, if any.
fn non_unit_element(alg: &EffectAlgebra) -> Result<Effect> {
    if alg.dim() < 2 {
        return Err(Error::NoSuitableElement);
    }
    match sharp_one_dim_elements(alg)? {
        SharpOneDim::Finite(v) => v.into_iter().next().ok_or(Error::NoSuitableElement),
        SharpOneDim::SpinFamily(_) => Err(Error::UnsupportedKind(alg.kind().to_string())),
    }
}

/// Builds `[(½f₁, ½f₂)]≈` with non-unit `fᵢ` and confirms no context decomposes it.
pub fn nonspectral_witness_for_sum(s: &SumAlgebra) -> Result<NonSpectralWitness> {
    let f1 = non_unit_element(&s.left)?;
    let f2 = non_unit_element(&s.right)?;
    let v = s.image(&f1.coords().scale(&half()), &f2.coords().scale(&half()));
    let f = s.result.effect(v)?;
    match spectral_decomposition(&f)? {
        Decomposed::NonSpectral(w) => Ok(w),
        Decomposed::Spectral(d) => Err(Error::PropositionFailure(format!(
            "{f} decomposes over {:?}",
            d.context.coords()
        ))),
    }
}

/// `λ_max · r` for each extreme ray `r`: the vertex of `[0, u]` on that ray.
fn normalized_rays(alg: &EffectAlgebra) -> Result<Vec<RatVector>> {
    let cone = alg.polyhedral_cone()?;
    let mut out = Vec::new();
    for r in cone.generators() {
        let lmax = cone
            .facets()
            .iter()
            .filter(|n| n.dot(r) > Rational::zero())
            .map(|n| n.dot(alg.unit()) / n.dot(r))
            .min()
            .expect("a ray of a pointed cone leaves some facet");
        out.push(r.scale(&lmax));
    }
    Ok(out)
}

/// Linear bijection `T` with `T u₁ = u₂` and `T C₁ = C₂`, if one exists.
pub fn affine_isomorphism_search(
    e1: &EffectAlgebra,
    e2: &EffectAlgebra,
) -> Result<Option<RatMatrix>> {
    require_polyhedral(e1)?;
    require_polyhedral(e2)?;
    let c1 = e1.polyhedral_cone()?;
    let c2 = e2.polyhedral_cone()?;
    let count = c1.generators().len().max(c2.generators().len());
    if count > MAX_ISOMORPHISM_RAYS {
        return Err(Error::SizeLimitExceeded(format!(
            "{count} extreme rays (limit {MAX_ISOMORPHISM_RAYS})"
        )));
    }
    if e1.dim() != e2.dim() || c1.generators().len() != c2.generators().len() {
        return Ok(None);
    }
    let dim = e1.dim();
    let r1 = normalized_rays(e1)?;
    let r2 = normalized_rays(e2)?;
    let target: BTreeSet<RatVector> = r2.iter().cloned().collect();
    let basis = independent_subset(&r1, dim);
    let source = RatMatrix::from_columns(
        &basis.iter().map(|&i| r1[i].clone()).collect::<Vec<_>>(),
        dim,
    );
    let source_inv = source.inverse().expect("independent rays");

    let mut choice: Vec<usize> = Vec::new();
    let mut found = None;
    search_assignments(r2.len(), dim, &mut choice, &mut |choice| {
        let images: Vec<RatVector> = choice.iter().map(|&j| r2[j].clone()).collect();
        let t = RatMatrix::from_columns(&images, dim).mul(&source_inv);
        if &t.mul_vec(e1.unit()) != e2.unit() {
            return false;
        }
        let mapped: BTreeSet<RatVector> = r1.iter().map(|r| t.mul_vec(r)).collect();
        if mapped == target && t.inverse().is_some() {
            found = Some(t);
            true
        } else {
            false
        }
    });
    Ok(found)
}

/// Injective assignments of `k` slots into `0..n`, lexicographic; stops when `visit` returns true.
fn search_assignments(
    n: usize,
    k: usize,
    choice: &mut Vec<usize>,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    if choice.len() == k {
        return visit(choice);
    }
    for j in 0..n {
        if choice.contains(&j) {
            continue;
        }
        choice.push(j);
        if search_assignments(n, k, choice, visit) {
            return true;
        }
        choice.pop();
    }
    false
}

/// Re-verifies an isomorphism certificate.
pub fn verify_isomorphism(t: &RatMatrix, e1: &EffectAlgebra, e2: &EffectAlgebra) -> Result<bool> {
    if t.nrows() != e2.dim() || t.ncols() != e1.dim() || t.inverse().is_none() {
        return Ok(false);
    }
    if &t.mul_vec(e1.unit()) != e2.unit() {
        return Ok(false);
    }
    let mapped: BTreeSet<RatVector> = e1
        .polyhedral_cone()?
        .generators()
        .iter()
        .map(|g| t.mul_vec(g).canonical_ray())
        .collect();
    let target: BTreeSet<RatVector> = e2.polyhedral_cone()?.generators().iter().cloned().collect();
    Ok(mapped == target)
}

/// Square state space: cone generated by `f, g, u - f, u - g` in ℚ³, `u = e₃`.
pub fn square() -> EffectAlgebra {
    EffectAlgebra::polyhedral(
        "square",
        vec![
            RatVector::from_ints(&[1, 0, 0]),
            RatVector::from_ints(&[0, 1, 0]),
            RatVector::from_ints(&[-1, 0, 1]),
            RatVector::from_ints(&[0, -1, 1]),
        ],
        RatVector::from_ints(&[0, 0, 1]),
    )
    .expect("square cone is valid")
}

/// Builtin corpus: `classical` (needs `n`), `square`, `spin` (needs `d`).
pub fn builtin(name: &str, param: Option<usize>) -> Result<EffectAlgebra> {
    let need = |p: Option<usize>| {
        p.ok_or_else(|| Error::InvalidParameters(format!("builtin `{name}` needs a parameter")))
    };
    match name {
        "classical" => EffectAlgebra::classical(need(param)?),
        "square" => Ok(square()),
        "spin" => EffectAlgebra::spin(need(param)?),
        "qubit" => EffectAlgebra::spin(3),
        other => Err(Error::UnknownName(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::is_sharp;

    fn c(n: usize) -> EffectAlgebra {
        EffectAlgebra::classical(n).unwrap()
    }

    fn context_count(alg: &EffectAlgebra) -> usize {
        match enumerate_contexts(alg).unwrap() {
            ContextFamily::Finite(v) => v.len(),
            ContextFamily::SpinParametric(_) => usize::MAX,
        }
    }

    #[test]
    fn classical_products() {
        let p = direct_product(&c(2), &c(3)).unwrap();
        assert_eq!(p.result.kind(), AlgebraKind::Classical(5));
        assert_eq!(p.result.cone(), c(5).cone());
        let q = direct_product(&c(1), &c(1)).unwrap();
        assert_eq!(q.result.unit(), c(2).unit());
    }

    #[test]
    fn square_times_point() {
        let p = direct_product(&square(), &c(1)).unwrap();
        assert_eq!(p.result.dim(), 4);
        assert_eq!(p.result.kind(), AlgebraKind::Polyhedral);
        assert_eq!(context_count(&p.result), 2);
        let h = square()
            .effect(RatVector::from_fracs(&[(1, 2), (1, 2), (0, 1)]))
            .unwrap();
        let one = c(1).unit_effect();
        assert!(is_sharp(&p.pair(&h, &one).unwrap()));
    }

    #[test]
    fn spin_is_unsupported() {
        let s = EffectAlgebra::spin(2).unwrap();
        assert!(matches!(
            direct_product(&s, &c(1)),
            Err(Error::UnsupportedKind(_))
        ));
        assert!(matches!(
            direct_convex_sum(&c(1), &s),
            Err(Error::UnsupportedKind(_))
        ));
    }

    #[test]
    fn bits_sum_is_the_square_literally() {
        let s = direct_convex_sum(&c(2), &c(2)).unwrap();
        assert_eq!(s.result.cone(), square().cone());
        assert_eq!(s.result.unit(), square().unit());
        let zero2 = RatVector::zeros(2);
        assert_eq!(s.image(c(2).unit(), &zero2), s.image(&zero2, c(2).unit()));
        assert!(s.image(c(2).unit(), &-c(2).unit()).is_zero());
        let t = affine_isomorphism_search(&s.result, &square())
            .unwrap()
            .unwrap();
        assert!(verify_isomorphism(&t, &s.result, &square()).unwrap());
    }

    #[test]
    fn sum_of_points_is_a_point() {
        let s = direct_convex_sum(&c(1), &c(1)).unwrap();
        assert_eq!(s.result.dim(), 1);
        let cls = classify_sum_contexts(&s).unwrap();
        assert_eq!(cls.left.len(), 1);
        assert_eq!(cls.right.len(), 1);
        assert_eq!(cls.left, cls.right);
        assert_eq!(
            nonspectral_witness_for_sum(&s).unwrap_err(),
            Error::NoSuitableElement
        );
    }

    #[test]
    fn sum_contexts_split_by_side() {
        let s = direct_convex_sum(&c(2), &c(3)).unwrap();
        assert_eq!(s.result.dim(), 4);
        let cls = classify_sum_contexts(&s).unwrap();
        assert_eq!(cls.left.len(), 1);
        assert_eq!(cls.right.len(), 1);
        assert_eq!(cls.left[0].len(), 2);
        assert_eq!(cls.right[0].len(), 3);
        nonspectral_witness_for_sum(&s).unwrap();
    }

    #[test]
    fn isomorphism_negative_cases() {
        assert!(affine_isomorphism_search(&c(2), &c(3)).unwrap().is_none());
        assert!(affine_isomorphism_search(&c(3), &square())
            .unwrap()
            .is_none());
        assert!(matches!(
            affine_isomorphism_search(&c(13), &c(13)),
            Err(Error::SizeLimitExceeded(_))
        ));
    }

    #[test]
    fn builtins() {
        assert_eq!(
            builtin("classical", Some(3)).unwrap().kind(),
            AlgebraKind::Classical(3)
        );
        assert_eq!(builtin("square", None).unwrap().dim(), 3);
        assert_eq!(builtin("spin", Some(3)).unwrap().dim(), 4);
        assert!(matches!(
            builtin("hexagon", None),
            Err(Error::UnknownName(_))
        ));
        assert!(builtin("classical", None).is_err());
    }
}

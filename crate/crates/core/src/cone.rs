//! Polyhedral cones in double representation.
//!
//! A [`Cone`] always carries both its extreme rays and its facet normals.
//! Conversion between the two is done with the double-description method
//! (Motzkin's incremental algorithm with the combinatorial adjacency test).

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{independent_subset, rank_of, RatMatrix};
use crate::rational::RatVector;

/// Pointed, full-dimensional polyhedral cone.
///
/// Generators and facets are canonical rays (coprime integer entries) sorted
/// lexicographically, so two cones are equal iff their representations are.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cone {
    dim: usize,
    generators: Vec<RatVector>,
    facets: Vec<RatVector>,
}

impl Cone {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Extreme-ray representatives.
    pub fn generators(&self) -> &[RatVector] {
        &self.generators
    }

    /// Inward facet normals: `v ∈ C ⟺ f·v ≥ 0` for every facet `f`.
    pub fn facets(&self) -> &[RatVector] {
        &self.facets
    }

    /// Both representations are computed eagerly on construction.
    pub fn is_synced(&self) -> bool {
        true
    }

    /// Builds the cone from an inequality description `{v : fᵢ·v ≥ 0}`.
    pub fn from_facets(dim: usize, normals: &[RatVector]) -> Result<Cone> {
        check_dims(dim, normals)?;
        let rays = extreme_rays(dim, normals)?;
        let rank = rank_of(&rays, dim);
        if rank < dim {
            return Err(Error::NotFullDimensional { rank, dim });
        }
        let facets = irredundant(dim, canonical_set(normals), &rays);
        Ok(Cone {
            dim,
            generators: rays,
            facets,
        })
    }

    pub fn positive_orthant(dim: usize) -> Cone {
        let basis: Vec<RatVector> = (0..dim).map(|i| RatVector::unit(dim, i)).collect();
        Cone {
            dim,
            generators: basis
                .iter()
                .rev()
                .cloned()
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect(),
            facets: basis
                .into_iter()
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect(),
        }
    }

    /// Tight facets at `v`, as indices into [`Cone::facets`].
    pub fn tight_facets(&self, v: &RatVector) -> Vec<usize> {
        self.facets
            .iter()
            .enumerate()
            .filter(|(_, f)| f.dot(v).is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    /// Whether `v` spans an extreme ray of the cone.
    pub fn is_extreme_ray(&self, v: &RatVector) -> bool {
        if v.is_zero() || !cone_contains(self, v) {
            return false;
        }
        let canon = v.canonical_ray();
        self.generators.binary_search(&canon).is_ok()
    }
}

/// Cone generated by `generators`; interior and duplicate generators are dropped.
pub fn dd_convert(generators: &[RatVector]) -> Result<Cone> {
    let dim = generators.first().ok_or(Error::EmptyGenerators)?.dim();
    check_dims(dim, generators)?;
    if generators.iter().any(RatVector::is_zero) {
        return Err(Error::ZeroGenerator);
    }
    let gens = canonical_set(generators);
    let rank = rank_of(&gens, dim);
    if rank < dim {
        return Err(Error::NotFullDimensional { rank, dim });
    }
    let facets = extreme_rays(dim, &gens)?;
    if rank_of(&facets, dim) < dim {
        return Err(Error::NotPointed);
    }
    let generators = irredundant(dim, gens, &facets);
    Ok(Cone {
        dim,
        generators,
        facets,
    })
}

/// `{w : w·v ≥ 0 for all v ∈ c}`.
pub fn dual_cone(c: &Cone) -> Cone {
    Cone {
        dim: c.dim,
        generators: c.facets.clone(),
        facets: c.generators.clone(),
    }
}

pub fn cone_contains(c: &Cone, v: &RatVector) -> bool {
    debug_assert_eq!(c.dim, v.dim());
    c.facets.iter().all(|f| !f.dot(v).is_negative())
}

fn check_dims(dim: usize, vs: &[RatVector]) -> Result<()> {
    match vs.iter().find(|v| v.dim() != dim) {
        Some(v) => Err(Error::DimensionMismatch {
            expected: dim,
            got: v.dim(),
        }),
        None => Ok(()),
    }
}

fn canonical_set(vs: &[RatVector]) -> Vec<RatVector> {
    vs.iter()
        .filter(|v| !v.is_zero())
        .map(RatVector::canonical_ray)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// Keeps the candidates whose tight set among `duals` has rank `dim - 1`.
fn irredundant(dim: usize, candidates: Vec<RatVector>, duals: &[RatVector]) -> Vec<RatVector> {
    candidates
        .into_iter()
        .filter(|c| {
            let tight: Vec<RatVector> = duals
                .iter()
                .filter(|d| d.dot(c).is_zero())
                .cloned()
                .collect();
            rank_of(&tight, dim) + 1 == dim
        })
        .collect()
}

#[derive(Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn subset_of(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

/// Extreme rays of the pointed cone `{y : aᵢ·y ≥ 0}`, canonical and sorted.
///
/// Fails with `NotPointed` when the constraint rows do not span the space.
pub(crate) fn extreme_rays(dim: usize, constraints: &[RatVector]) -> Result<Vec<RatVector>> {
    let basis = independent_subset(constraints, dim);
    if basis.len() < dim {
        return Err(Error::NotPointed);
    }
    let n = constraints.len();
    let rows: Vec<RatVector> = basis.iter().map(|&i| constraints[i].clone()).collect();
    let inv = RatMatrix::from_rows(&rows, dim)
        .inverse()
        .expect("independent rows form an invertible matrix");

    // Initial simplicial cone: columns of the inverse.
    let mut rays: Vec<(RatVector, Bits)> = (0..dim)
        .map(|j| {
            let mut tight = Bits::new(n);
            for (k, &i) in basis.iter().enumerate() {
                if k != j {
                    tight.set(i);
                }
            }
            (inv.column(j).canonical_ray(), tight)
        })
        .collect();

    let in_basis: BTreeSet<usize> = basis.iter().copied().collect();
    for (k, row) in constraints.iter().enumerate() {
        if in_basis.contains(&k) {
            continue;
        }
        let values: Vec<_> = rays.iter().map(|(r, _)| row.dot(r)).collect();
        let pos: Vec<usize> = (0..rays.len())
            .filter(|&i| values[i].is_positive())
            .collect();
        let neg: Vec<usize> = (0..rays.len())
            .filter(|&i| values[i].is_negative())
            .collect();
        if neg.is_empty() {
            for (i, (_, tight)) in rays.iter_mut().enumerate() {
                if values[i].is_zero() {
                    tight.set(k);
                }
            }
            continue;
        }

        let mut next: Vec<(RatVector, Bits)> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].1.and(&rays[q].1);
                if dim >= 2 && common.count() < dim - 2 {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(i, (_, t))| i == p || i == q || !common.subset_of(t));
                if !adjacent {
                    continue;
                }
                let combined = &rays[q].0.scale(&values[p]) - &rays[p].0.scale(&values[q]);
                let mut tight = common;
                tight.set(k);
                next.push((combined.canonical_ray(), tight));
            }
        }
        for (i, (r, mut tight)) in rays.into_iter().enumerate() {
            if values[i].is_positive() {
                next.push((r, tight));
            } else if values[i].is_zero() {
                tight.set(k);
                next.push((r, tight));
            }
        }
        rays = next;
    }

    Ok(rays
        .into_iter()
        .map(|(r, _)| r)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect())
}

/// Extreme rays of `{y : aᵢ·y ≥ 0, eⱼ·y = 0}` (pointed, possibly lower-dimensional).
pub(crate) fn extreme_rays_with_equalities(
    dim: usize,
    inequalities: &[RatVector],
    equalities: &[RatVector],
) -> Result<Vec<RatVector>> {
    let basis = if equalities.is_empty() {
        (0..dim).map(|i| RatVector::unit(dim, i)).collect()
    } else {
        RatMatrix::from_rows(equalities, dim).nullspace()
    };
    if basis.is_empty() {
        return Ok(Vec::new());
    }
    let k = basis.len();
    let reduced: Vec<RatVector> = inequalities
        .iter()
        .map(|a| basis.iter().map(|b| a.dot(b)).collect())
        .collect();
    let rays = extreme_rays(k, &reduced)?;
    Ok(rays
        .iter()
        .map(|y| RatVector::combination(dim, y.iter().zip(&basis)).canonical_ray())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> RatVector {
        RatVector::from_ints(xs)
    }

    fn square_cone() -> Cone {
        dd_convert(&[v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[-1, 0, 1]), v(&[0, -1, 1])]).unwrap()
    }

    #[test]
    fn orthant_in_the_plane() {
        let c = dd_convert(&[v(&[1, 0]), v(&[0, 1])]).unwrap();
        assert_eq!(c.generators(), &[v(&[0, 1]), v(&[1, 0])]);
        assert_eq!(c.facets(), &[v(&[0, 1]), v(&[1, 0])]);
        assert_eq!(c, Cone::positive_orthant(2));
    }

    #[test]
    fn square_cone_has_four_facets_and_rays() {
        let c = square_cone();
        assert_eq!(c.generators().len(), 4);
        // Facet normals equal the square's extreme states (brute-force triple search in tests/).
        assert_eq!(
            c.facets(),
            &[v(&[0, 0, 1]), v(&[0, 1, 1]), v(&[1, 0, 1]), v(&[1, 1, 1])]
        );
        assert!(cone_contains(&c, &v(&[0, 0, 1])));
    }

    #[test]
    fn interior_generator_dropped() {
        let c = dd_convert(&[v(&[1, 0]), v(&[1, 1]), v(&[1, 2])]).unwrap();
        assert_eq!(c.generators(), &[v(&[1, 0]), v(&[1, 2])]);
    }

    #[test]
    fn membership() {
        let c = Cone::positive_orthant(2);
        assert!(cone_contains(&c, &v(&[1, 2])));
        assert!(!cone_contains(&c, &v(&[1, -1])));
    }

    #[test]
    fn rejects_lines_and_degenerate_input() {
        assert_eq!(
            dd_convert(&[v(&[1, 0]), v(&[-1, 0]), v(&[0, 1])]),
            Err(Error::NotPointed)
        );
        assert_eq!(dd_convert(&[]), Err(Error::EmptyGenerators));
        assert_eq!(
            dd_convert(&[v(&[0, 0]), v(&[1, 0])]),
            Err(Error::ZeroGenerator)
        );
        assert!(matches!(
            dd_convert(&[v(&[1, 0, 0]), v(&[0, 1, 0])]),
            Err(Error::NotFullDimensional { rank: 2, dim: 3 })
        ));
        assert!(matches!(
            dd_convert(&[v(&[1, 0]), v(&[1, 0, 0])]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn duplicates_are_merged() {
        let c = dd_convert(&[v(&[1, 0]), v(&[2, 0]), v(&[0, 3]), v(&[0, 1])]).unwrap();
        assert_eq!(c, Cone::positive_orthant(2));
    }

    #[test]
    fn dual_of_orthant_and_square() {
        let o = Cone::positive_orthant(4);
        assert_eq!(dual_cone(&o), o);
        let s = square_cone();
        let d = dual_cone(&s);
        assert_eq!(dd_convert(s.facets()).unwrap(), d);
        assert_eq!(dual_cone(&d), s);
    }

    #[test]
    fn from_facets_roundtrip() {
        let s = square_cone();
        assert_eq!(Cone::from_facets(3, s.facets()).unwrap(), s);
    }

    #[test]
    fn extreme_ray_test() {
        let s = square_cone();
        assert!(s.is_extreme_ray(&v(&[2, 0, 0])));
        assert!(!s.is_extreme_ray(&v(&[1, 1, 0])));
        assert!(!s.is_extreme_ray(&v(&[0, 0, 0])));
    }

    #[test]
    fn one_dimensional_cone() {
        let c = dd_convert(&[v(&[3])]).unwrap();
        assert_eq!(c.generators(), &[v(&[1])]);
        assert_eq!(c.facets(), &[v(&[1])]);
    }
}

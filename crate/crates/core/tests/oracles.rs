//! Independent brute-force oracles checked against the double-description,
//! simplex and vertex-enumeration engines.

mod common;

use std::collections::BTreeSet;

use itertools::Itertools;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use speclat_core::linalg::{rank_of, RatMatrix};
use speclat_core::rational::{int, RatVector, Rational};
use speclat_core::{dd_convert, lp_solve, polytope_vertices, EffectAlgebra, HPolytope, Sense};

/// Facets by exhaustive search: every (dim-1)-subset of generators spanning a
/// hyperplane whose normal is nonnegative on all generators.
fn brute_force_facets(gens: &[RatVector], dim: usize) -> BTreeSet<RatVector> {
    let mut out = BTreeSet::new();
    for subset in (0..gens.len()).combinations(dim - 1) {
        let rows: Vec<RatVector> = subset.iter().map(|&i| gens[i].clone()).collect();
        if rank_of(&rows, dim) != dim - 1 {
            continue;
        }
        let normal = RatMatrix::from_rows(&rows, dim).nullspace().remove(0);
        for n in [normal.clone(), -&normal] {
            if gens.iter().all(|g| !n.dot(g).is_negative()) {
                out.insert(n.canonical_ray());
            }
        }
    }
    out
}

/// Vertices by exhaustive search over dim-subsets of constraints made tight.
fn brute_force_vertices(p: &HPolytope) -> BTreeSet<RatVector> {
    let mut rows: Vec<(RatVector, Rational)> = p.inequalities.clone();
    rows.extend(p.equalities.iter().cloned());
    let mut out = BTreeSet::new();
    for subset in (0..rows.len()).combinations(p.dim) {
        let a: Vec<RatVector> = subset.iter().map(|&i| rows[i].0.clone()).collect();
        let m = RatMatrix::from_rows(&a, p.dim);
        let Some(inv) = m.inverse() else { continue };
        let b: RatVector = subset.iter().map(|&i| rows[i].1.clone()).collect();
        let x = inv.mul_vec(&b);
        if p.contains(&x) {
            out.insert(x);
        }
    }
    out
}

fn v(xs: &[i64]) -> RatVector {
    RatVector::from_ints(xs)
}

#[test]
fn square_facets_match_generator_triple_search() {
    let gens = vec![v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[-1, 0, 1]), v(&[0, -1, 1])];
    let facets = brute_force_facets(&gens, 3);
    assert_eq!(facets.len(), 4);
    let cone = dd_convert(&gens).unwrap();
    assert_eq!(
        cone.facets().iter().cloned().collect::<BTreeSet<_>>(),
        facets
    );
    assert_eq!(cone.generators().len(), 4);
}

#[test]
fn interior_generator_is_a_nonnegative_combination() {
    // (1,1) = a (1,0) + b (1,2): solve the 2x2 system directly.
    let m = RatMatrix::from_columns(&[v(&[1, 0]), v(&[1, 2])], 2);
    let x = m.solve(&v(&[1, 1])).unwrap();
    assert!(x.iter().all(|c| c.is_positive()));
    let cone = dd_convert(&[v(&[1, 0]), v(&[1, 1]), v(&[1, 2])]).unwrap();
    assert_eq!(cone.generators(), &[v(&[1, 0]), v(&[1, 2])]);
}

#[test]
fn classical_three_interval_has_the_eight_cube_corners() {
    let expected: BTreeSet<RatVector> = (0..8)
        .map(|m| v(&[m & 1, (m >> 1) & 1, (m >> 2) & 1]))
        .collect();
    let c3 = EffectAlgebra::classical(3).unwrap();
    let p = c3.interval_polytope().unwrap();
    assert!(expected.iter().all(|x| p.contains(x)));
    let got: BTreeSet<RatVector> = polytope_vertices(&p).unwrap().into_iter().collect();
    assert_eq!(got, expected);
    assert_eq!(brute_force_vertices(&p), expected);
}

#[test]
fn square_state_polytope_vertices_by_brute_force() {
    let sq = speclat_core::constructions::square();
    let p = speclat_core::states::state_polytope(&sq).unwrap();
    let expected: BTreeSet<RatVector> =
        [v(&[0, 0, 1]), v(&[1, 0, 1]), v(&[0, 1, 1]), v(&[1, 1, 1])]
            .into_iter()
            .collect();
    assert_eq!(brute_force_vertices(&p), expected);
    let got: BTreeSet<RatVector> = polytope_vertices(&p).unwrap().into_iter().collect();
    assert_eq!(got, expected);
}

#[test]
fn lp_extrema_of_h_over_square_states() {
    let sq = speclat_core::constructions::square();
    let p = speclat_core::states::state_polytope(&sq).unwrap();
    let h = RatVector::from_fracs(&[(1, 2), (1, 2), (0, 1)]);
    let max = lp_solve(&h, &p, Sense::Maximize).unwrap();
    assert_eq!(max.value, int(1));
    assert_eq!(max.point, v(&[1, 1, 1]));
    let min = lp_solve(&h, &p, Sense::Minimize).unwrap();
    assert_eq!(min.value, int(0));
    assert_eq!(min.point, v(&[0, 0, 1]));
}

fn small_int_vec(dim: usize) -> impl Strategy<Value = RatVector> {
    prop::collection::vec(-3i64..=3, dim).prop_map(|xs| RatVector::from_ints(&xs))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // Cones containing the positive orthant plus random extra generators.
    #[test]
    fn dd_facets_agree_with_brute_force(extra in prop::collection::vec(small_int_vec(3), 1..5)) {
        let mut gens: Vec<RatVector> = (0..3).map(|i| RatVector::unit(3, i)).collect();
        gens.extend(extra.into_iter().filter(|g| !g.is_zero()));
        match dd_convert(&gens) {
            Ok(cone) => {
                let facets: BTreeSet<RatVector> = cone.facets().iter().cloned().collect();
                prop_assert_eq!(facets, brute_force_facets(&gens, 3));
            }
            Err(speclat_core::Error::NotPointed) => {
                prop_assert!(brute_force_facets(&gens, 3).len() < 3
                    || rank_of(&brute_force_facets(&gens, 3).into_iter().collect::<Vec<_>>(), 3) < 3);
            }
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn lp_optimum_matches_best_vertex(
        cuts in prop::collection::vec((small_int_vec(2), -2i64..=2), 0..4),
        obj in small_int_vec(2),
    ) {
        let mut p = HPolytope::unit_box(2, int(-2), int(2));
        for (n, b) in cuts {
            p.push_inequality(n, int(b));
        }
        let brute = brute_force_vertices(&p);
        match lp_solve(&obj, &p, Sense::Maximize) {
            Ok(sol) => {
                let best = brute.iter().map(|x| obj.dot(x)).max().unwrap();
                prop_assert_eq!(sol.value, best);
                prop_assert!(p.contains(&sol.point));
                let got: BTreeSet<RatVector> = polytope_vertices(&p).unwrap().into_iter().collect();
                prop_assert_eq!(got, brute);
            }
            Err(speclat_core::Error::Infeasible) => prop_assert!(brute.is_empty()),
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }
}

#[test]
fn norm_equals_max_state_value_on_square() {
    let sq = speclat_core::constructions::square();
    let speclat_core::states::StateSet::Polytope(states) =
        speclat_core::states::extreme_states(&sq).unwrap()
    else {
        panic!()
    };
    for x in -2..=2 {
        for y in -2..=2 {
            for z in -2..=2 {
                let w = v(&[x, y, z]);
                let brute = states
                    .iter()
                    .map(|s| s.coords.dot(&w).abs())
                    .max()
                    .unwrap_or_else(Rational::zero);
                assert_eq!(
                    speclat_core::order_unit_norm(&w, &sq).unwrap(),
                    brute,
                    "{w}"
                );
            }
        }
    }
    assert_eq!(
        speclat_core::order_unit_norm(sq.unit(), &sq).unwrap(),
        Rational::one()
    );
}

//! Worked examples on the builtin corpus.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use speclat_core::constructions::{
    affine_isomorphism_search, builtin, classify_sum_contexts, direct_convex_sum, direct_product,
    nonspectral_witness_for_sum, square, verify_isomorphism,
};
use speclat_core::rational::{half, rat, RatVector, Rational};
use speclat_core::spectral::{
    decompose, decompose_vector, enumerate_contexts, grouped_decomposition, minmax_extrema,
    sharp_cover, sharp_join, sharp_one_dim_elements, spectral_decomposition, ContextFamily,
    Decomposed, SharpOneDim,
};
use speclat_core::states::{
    hat_face, is_e_exposed_point, order_determining_check, sharp_candidates,
    sharply_determining_check, State,
};
use speclat_core::{
    complement, dual_cone, is_extremal, is_one_dimensional, is_sharp, leq, mix, order_unit_norm,
    EffectAlgebra, Error,
};

fn fr(xs: &[(i64, i64)]) -> RatVector {
    RatVector::from_fracs(xs)
}

fn v(xs: &[i64]) -> RatVector {
    RatVector::from_ints(xs)
}

fn finite_contexts(alg: &EffectAlgebra) -> BTreeSet<Vec<RatVector>> {
    let ContextFamily::Finite(cs) = enumerate_contexts(alg).unwrap() else {
        panic!("expected a finite context family")
    };
    cs.iter().map(|c| c.coords()).collect()
}

#[test]
fn square_dual_is_generated_by_its_facets() {
    let sq = square();
    let cone = sq.cone().unwrap();
    let dual = dual_cone(cone);
    assert_eq!(dual.generators(), cone.facets());
    assert_eq!(dual.facets(), cone.generators());
}

#[test]
fn square_complement_of_h_is_the_average_of_complements() {
    let sq = square();
    let f = sq.effect(v(&[1, 0, 0])).unwrap();
    let g = sq.effect(v(&[0, 1, 0])).unwrap();
    let h = mix(&half(), &f, &g).unwrap();
    let rhs = mix(&half(), &complement(&f), &complement(&g)).unwrap();
    assert_eq!(complement(&h), rhs);
    assert_eq!(complement(&h).coords(), &fr(&[(-1, 2), (-1, 2), (1, 1)]));
    assert!(leq(&f.algebra().effect(f.coords().scale(&half())).unwrap(), &h).unwrap());
}

#[test]
fn square_one_dimensional_and_sharp_elements() {
    let sq = square();
    let f = sq.effect(v(&[1, 0, 0])).unwrap();
    let h = sq.effect(fr(&[(1, 2), (1, 2), (0, 1)])).unwrap();
    assert!(is_one_dimensional(&f));
    assert!(!is_one_dimensional(&h));
    assert!(is_extremal(&f) && is_sharp(&f));
    assert!(is_sharp(&h) && !is_extremal(&h));

    let SharpOneDim::Finite(s1) = sharp_one_dim_elements(&sq).unwrap() else {
        panic!()
    };
    let got: BTreeSet<RatVector> = s1.iter().map(|e| e.coords().clone()).collect();
    let expected: BTreeSet<RatVector> =
        [v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[-1, 0, 1]), v(&[0, -1, 1])]
            .into_iter()
            .collect();
    assert_eq!(got, expected);
}

#[test]
fn square_has_exactly_two_contexts() {
    let expected: BTreeSet<Vec<RatVector>> = [
        vec![v(&[-1, 0, 1]), v(&[1, 0, 0])],
        vec![v(&[0, -1, 1]), v(&[0, 1, 0])],
    ]
    .into_iter()
    .collect();
    assert_eq!(finite_contexts(&square()), expected);
}

#[test]
fn square_interior_point_has_no_decomposition() {
    let sq = square();
    let f = sq.effect(fr(&[(1, 4), (1, 4), (1, 2)])).unwrap();
    let Decomposed::NonSpectral(w) = spectral_decomposition(&f).unwrap() else {
        panic!("expected a witness")
    };
    assert_eq!(w.effect, f);
    // Independent check: both two-element contexts force f to lie in a plane it misses.
    for ctx in finite_contexts(&sq) {
        let (a, b) = (&ctx[0], &ctx[1]);
        let m = speclat_core::RatMatrix::from_columns(&[a.clone(), b.clone()], 3);
        match m.solve(f.coords()) {
            None => {}
            Some(c) => assert!(c
                .iter()
                .any(|x| x < &Rational::zero() || x > &Rational::one())),
        }
    }
    assert!(matches!(decompose(&f), Err(Error::NotSpectral(_))));
}

#[test]
fn spin2_decomposition_example() {
    let s2 = EffectAlgebra::spin(2).unwrap();
    let f = s2.effect(fr(&[(1, 2), (3, 10), (0, 1)])).unwrap();
    let d = decompose(&f).unwrap();
    let mut pairs: Vec<(Rational, RatVector)> = d
        .coefficients
        .iter()
        .cloned()
        .zip(d.context.coords())
        .collect();
    pairs.sort();
    assert_eq!(
        pairs,
        vec![
            (rat(1, 5), fr(&[(1, 2), (-1, 2), (0, 1)])),
            (rat(4, 5), fr(&[(1, 2), (1, 2), (0, 1)])),
        ]
    );
    assert_eq!(&d.recompose(), f.coords());

    let ex = minmax_extrema(&f, &d).unwrap();
    assert_eq!((ex.max.clone(), ex.min.clone()), (rat(4, 5), rat(1, 5)));
    assert_eq!(ex.max_state.unwrap(), State::spin(&v(&[1, 0])).unwrap());
    assert_eq!(ex.min_state.unwrap(), State::spin(&v(&[-1, 0])).unwrap());

    let g = grouped_decomposition(&f).unwrap();
    let levels: Vec<Rational> = g.levels.iter().map(|l| l.coefficient.clone()).collect();
    assert_eq!(levels, vec![rat(4, 5), rat(1, 5)]);
    assert!(sharp_cover(&f).unwrap().is_unit());
}

#[test]
fn spin2_vector_decomposition() {
    let s2 = EffectAlgebra::spin(2).unwrap();
    let (ctx, coeffs) = decompose_vector(&v(&[0, 1, 0]), &s2).unwrap();
    let mut pairs: Vec<(Rational, RatVector)> = coeffs.into_iter().zip(ctx.coords()).collect();
    pairs.sort();
    assert_eq!(
        pairs[0],
        (
            Rational::from_integer((-1).into()),
            fr(&[(1, 2), (-1, 2), (0, 1)])
        )
    );
    assert_eq!(pairs[1], (Rational::one(), fr(&[(1, 2), (1, 2), (0, 1)])));
}

#[test]
fn spin_norm_closed_form_against_polygon_states() {
    // Any rational boundary state gives a lower bound; the closed form is attained.
    let s2 = EffectAlgebra::spin(2).unwrap();
    let dirs = speclat_core::spectral::rational_unit_vectors(2);
    for (t, x, y, r) in [(1, 3, 4, 5), (-2, 3, 4, 5), (0, 6, 8, 10), (2, 0, 0, 0)] {
        let w = v(&[t, x, y]);
        let n = order_unit_norm(&w, &s2).unwrap();
        let xn = Rational::from_integer(r.into());
        let tt = Rational::from_integer(t.into());
        let closed = std::cmp::max((&tt + &xn).abs(), (&tt - &xn).abs());
        assert_eq!(n, closed);
        let best = dirs
            .iter()
            .map(|d| State::spin(d).unwrap().coords.dot(&w).abs())
            .max()
            .unwrap();
        assert!(best <= n);
    }
    let c3 = EffectAlgebra::classical(3).unwrap();
    assert_eq!(
        order_unit_norm(&fr(&[(1, 1), (-1, 1), (1, 2)]), &c3).unwrap(),
        Rational::one()
    );
}

#[test]
fn spin_join_of_opposite_projections_is_the_unit() {
    let s2 = EffectAlgebra::spin(2).unwrap();
    let a = s2.effect(fr(&[(1, 2), (3, 10), (2, 5)])).unwrap();
    let b = complement(&a);
    assert!(sharp_join(&a, &b).unwrap().is_unit());
    let c3 = EffectAlgebra::classical(3).unwrap();
    let f = c3.effect(fr(&[(1, 2), (0, 1), (3, 4)])).unwrap();
    assert_eq!(sharp_cover(&f).unwrap().coords(), &v(&[1, 0, 1]));
}

#[test]
fn spin_face_of_a_projection_is_its_tangent_state() {
    let s2 = EffectAlgebra::spin(2).unwrap();
    let p = s2.effect(fr(&[(1, 2), (1, 2), (0, 1)])).unwrap();
    let face = hat_face(&p).unwrap();
    assert_eq!(face.vertices(), &[State::spin(&v(&[1, 0])).unwrap()]);
    let (exposed, by) =
        is_e_exposed_point(&s2, &State::spin(&fr(&[(3, 5), (4, 5)])).unwrap()).unwrap();
    assert!(exposed);
    assert_eq!(by.unwrap().coords(), &fr(&[(1, 2), (3, 10), (2, 5)]));
}

#[test]
fn square_state_facts() {
    let sq = square();
    assert!(order_determining_check(&sq).unwrap());
    let sizes = speclat_core::states::hat_face_sizes(&sq).unwrap();
    assert!(sizes.iter().all(|(_, n)| *n == 2));
    for c in [v(&[0, 0, 1]), v(&[1, 0, 1]), v(&[0, 1, 1]), v(&[1, 1, 1])] {
        let (exposed, by) = is_e_exposed_point(&sq, &State { coords: c }).unwrap();
        assert!(!exposed && by.is_none());
    }
}

#[test]
fn sharply_determining_on_classical_and_spin() {
    for alg in [
        EffectAlgebra::classical(3).unwrap(),
        EffectAlgebra::spin(2).unwrap(),
    ] {
        let cands = sharp_candidates(&alg).unwrap();
        assert!(sharply_determining_check(&alg, &cands).unwrap().passed());
    }
    let c3 = EffectAlgebra::classical(3).unwrap();
    assert_eq!(sharp_candidates(&c3).unwrap().len(), 8);
    // The square report is recorded but carries no expectation.
    let sq = square();
    let report = sharply_determining_check(&sq, &sharp_candidates(&sq).unwrap()).unwrap();
    assert!(!report.entries.is_empty());
}

#[test]
fn product_with_a_point_keeps_the_square_contexts() {
    let p = direct_product(&square(), &EffectAlgebra::classical(1).unwrap()).unwrap();
    assert_eq!(p.result.dim(), 4);
    let expected: BTreeSet<Vec<RatVector>> = [
        vec![v(&[-1, 0, 1, 0]), v(&[0, 0, 0, 1]), v(&[1, 0, 0, 0])],
        vec![v(&[0, -1, 1, 0]), v(&[0, 0, 0, 1]), v(&[0, 1, 0, 0])],
    ]
    .into_iter()
    .collect();
    assert_eq!(finite_contexts(&p.result), expected);
}

#[test]
fn sums_of_small_classical_algebras() {
    let c1 = EffectAlgebra::classical(1).unwrap();
    let c2 = EffectAlgebra::classical(2).unwrap();
    let c3 = EffectAlgebra::classical(3).unwrap();

    let s11 = direct_convex_sum(&c1, &c1).unwrap();
    assert_eq!(s11.result.dim(), 1);
    assert!(affine_isomorphism_search(&s11.result, &c1)
        .unwrap()
        .is_some());
    assert_eq!(
        s11.image(c1.unit(), &RatVector::zeros(1)),
        s11.image(&RatVector::zeros(1), c1.unit())
    );
    assert!(matches!(
        nonspectral_witness_for_sum(&s11),
        Err(Error::NoSuitableElement)
    ));

    let s23 = direct_convex_sum(&c2, &c3).unwrap();
    assert_eq!(s23.result.dim(), 4);
    let cl = classify_sum_contexts(&s23).unwrap();
    assert_eq!((cl.left.len(), cl.right.len()), (1, 1));
    assert_eq!((cl.left[0].len(), cl.right[0].len()), (2, 3));
    let w = nonspectral_witness_for_sum(&s23).unwrap();
    assert!(matches!(
        spectral_decomposition(&w.effect).unwrap(),
        Decomposed::NonSpectral(_)
    ));

    let s22 = direct_convex_sum(&c2, &c2).unwrap();
    assert_eq!(s22.result.cone(), square().cone());
    assert_eq!(s22.result.unit(), square().unit());
    let t = affine_isomorphism_search(&s22.result, &square())
        .unwrap()
        .unwrap();
    assert!(verify_isomorphism(&t, &s22.result, &square()).unwrap());
    assert!(affine_isomorphism_search(&c2, &c3).unwrap().is_none());
}

#[test]
fn square_with_permuted_generators_is_isomorphic_by_a_non_identity_map() {
    let sq = square();
    let permuted = EffectAlgebra::polyhedral(
        "swapped square",
        vec![v(&[0, 1, 0]), v(&[1, 0, 0]), v(&[0, -1, 1]), v(&[-1, 0, 1])],
        v(&[0, 0, 2]),
    )
    .unwrap();
    let t = affine_isomorphism_search(&sq, &permuted).unwrap().unwrap();
    assert!(verify_isomorphism(&t, &sq, &permuted).unwrap());
    assert_ne!(t, speclat_core::RatMatrix::identity(3));
}

#[test]
fn builtin_names() {
    assert_eq!(builtin("classical", Some(3)).unwrap().dim(), 3);
    assert_eq!(builtin("square", None).unwrap().dim(), 3);
    assert_eq!(builtin("spin", Some(3)).unwrap().dim(), 4);
    assert!(matches!(
        builtin("pentagon", None),
        Err(Error::UnknownName(_))
    ));
}

#[test]
fn product_sharpness_factorizes_over_candidate_pairs() {
    let sq = square();
    let c2 = EffectAlgebra::classical(2).unwrap();
    let p = direct_product(&sq, &c2).unwrap();
    let grid = |alg: &EffectAlgebra| -> Vec<speclat_core::Effect> {
        let mut out = sharp_candidates(alg).unwrap();
        out.extend(
            alg.interval_vertices()
                .unwrap()
                .iter()
                .map(|x| alg.effect(x.clone()).unwrap()),
        );
        out.push(alg.effect(alg.unit().scale(&half())).unwrap());
        out
    };
    for f1 in grid(&sq) {
        for f2 in grid(&c2) {
            let pair = p.pair(&f1, &f2).unwrap();
            assert_eq!(
                is_sharp(&pair),
                is_sharp(&f1) && is_sharp(&f2),
                "{f1}, {f2}"
            );
            let (a, b) = p.split(&pair).unwrap();
            assert_eq!((a.coords(), b.coords()), (f1.coords(), f2.coords()));
        }
    }
}

#[test]
fn sum_quotient_identifies_units_and_stays_pointed() {
    for (l, r) in [(1, 2), (2, 2), (2, 3), (3, 3)] {
        let e1 = EffectAlgebra::classical(l).unwrap();
        let e2 = EffectAlgebra::classical(r).unwrap();
        let s = direct_convex_sum(&e1, &e2).unwrap();
        let left = s.image(e1.unit(), &RatVector::zeros(r));
        assert_eq!(left, s.image(&RatVector::zeros(l), e2.unit()));
        assert_eq!(&left, s.result.unit());
        assert_eq!(s.result.dim(), l + r - 1);
        let cone = s.result.cone().unwrap();
        assert!(speclat_core::linalg::rank_of(cone.facets(), s.result.dim()) == s.result.dim());
    }
}

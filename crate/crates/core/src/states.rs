//! States, their faces, and the order- and sharply-determining checks.
//!
//! States are dual vectors paired with effects by the Euclidean dot product.
//! For polyhedral algebras the state space is the polytope
//! `{s : s·g ≥ 0 for every generator g, s·u = 1}`; for spin(d) it is the ball
//! `{(1, ω) : ‖ω‖ ≤ 1}`.

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::algebra::{is_sharp, leq, AlgebraKind, Effect, EffectAlgebra};
use crate::cone::{dd_convert, dual_cone};
use crate::error::{Error, Result};
use crate::linalg::rank_of;
use crate::lp::{feasible_point, polytope_vertices, HPolytope};
use crate::rational::{half, RatVector, Rational};
use crate::spectral::{sharp_one_dim_elements, spin_projection, Context, SharpOneDim};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct State {
    pub coords: RatVector,
}

impl State {
    /// `(1, ω)` in spin(d); requires `‖ω‖ ≤ 1`.
    pub fn spin(omega: &RatVector) -> Result<State> {
        if omega.norm_sq() > Rational::one() {
            return Err(Error::InvalidParameters(format!(
                "{omega} lies outside the unit ball"
            )));
        }
        Ok(State {
            coords: RatVector::new(vec![Rational::one()]).concat(omega),
        })
    }
}

pub fn evaluate(s: &State, f: &Effect) -> Rational {
    s.coords.dot(f.coords())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StateSet {
    Polytope(Vec<State>),
    /// `{(1, ω) : ‖ω‖ ≤ 1}` in spin(d).
    Ball(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FaceStates {
    Vertices(Vec<State>),
    /// The whole state ball (the face of the unit in a spin factor).
    WholeBall(usize),
}

/// `f̂ = {s : s(f) = 1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub defining_effect: Effect,
    pub states: FaceStates,
}

impl Face {
    pub fn vertices(&self) -> &[State] {
        match &self.states {
            FaceStates::Vertices(v) => v,
            FaceStates::WholeBall(_) => &[],
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(&self.states, FaceStates::Vertices(v) if v.is_empty())
    }
}

pub fn state_polytope(alg: &EffectAlgebra) -> Result<HPolytope> {
    let cone = alg.polyhedral_cone()?;
    let mut p = HPolytope::new(alg.dim()).with_equality(alg.unit().clone(), Rational::one());
    for g in cone.generators() {
        p.push_inequality(g.clone(), Rational::zero());
    }
    Ok(p)
}

pub fn extreme_states(alg: &EffectAlgebra) -> Result<StateSet> {
    match alg.kind() {
        AlgebraKind::Spin(d) => Ok(StateSet::Ball(d)),
        AlgebraKind::Classical(n) => Ok(StateSet::Polytope(
            (0..n)
                .rev()
                .map(|i| State {
                    coords: RatVector::unit(n, i),
                })
                .collect(),
        )),
        AlgebraKind::Polyhedral => match polytope_vertices(&state_polytope(alg)?) {
            Ok(vs) if !vs.is_empty() => Ok(StateSet::Polytope(
                vs.into_iter().map(|coords| State { coords }).collect(),
            )),
            Ok(_) | Err(Error::Infeasible) => Err(Error::EmptyStateSpace),
            Err(e) => Err(e),
        },
    }
}

fn polytope_states(alg: &EffectAlgebra) -> Result<Vec<State>> {
    match extreme_states(alg)? {
        StateSet::Polytope(v) => Ok(v),
        StateSet::Ball(_) => Err(Error::UnsupportedKind(alg.kind().to_string())),
    }
}

pub fn hat_face(f: &Effect) -> Result<Face> {
    let alg = f.algebra();
    let states = match alg.kind() {
        AlgebraKind::Spin(d) => {
            let (t, x) = f.spin_parts();
            if f.is_unit() {
                FaceStates::WholeBall(d)
            } else {
                // s(f) = t + x·ω ≤ t + ‖x‖, with equality only at ω = x/‖x‖.
                let r = Rational::one() - &t;
                if !x.is_zero() && r > Rational::zero() && x.norm_sq() == &r * &r {
                    FaceStates::Vertices(vec![State::spin(&x.scale(&r.recip()))?])
                } else {
                    FaceStates::Vertices(Vec::new())
                }
            }
        }
        _ => FaceStates::Vertices(
            polytope_states(alg)?
                .into_iter()
                .filter(|s| evaluate(s, f).is_one())
                .collect(),
        ),
    };
    Ok(Face {
        defining_effect: f.clone(),
        states,
    })
}

/// `sᵢ(aⱼ) = δᵢⱼ` for every `sᵢ ∈ âᵢ`.
pub fn context_orthogonality_check(ctx: &Context) -> Result<bool> {
    for (i, a) in ctx.elements().iter().enumerate() {
        let face = hat_face(a)?;
        if face.is_empty() {
            return Ok(false);
        }
        for s in face.vertices() {
            for (j, b) in ctx.elements().iter().enumerate() {
                let expected = if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                };
                if evaluate(s, b) != expected {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Picks one state from each `âᵢ` and checks that they are affinely independent.
pub fn hat_faces_affinely_independent(ctx: &Context) -> Result<bool> {
    let mut reps = Vec::new();
    for a in ctx.elements() {
        match hat_face(a)?.vertices().first() {
            Some(s) => reps.push(s.coords.clone()),
            None => return Ok(false),
        }
    }
    let base = reps[0].clone();
    let diffs: Vec<RatVector> = reps[1..].iter().map(|r| r - &base).collect();
    Ok(rank_of(&diffs, base.dim()) == diffs.len())
}

/// Whether `s` is exposed by a sharp one-dimensional effect: `â = {s}`.
pub fn is_e_exposed_point(alg: &EffectAlgebra, s: &State) -> Result<(bool, Option<Effect>)> {
    match sharp_one_dim_elements(alg)? {
        SharpOneDim::SpinFamily(_) => {
            let omega = s.coords.slice(1..s.coords.dim());
            if !s.coords[0].is_one() || omega.norm_sq() != Rational::one() {
                return Ok((false, None));
            }
            Ok((true, Some(alg.effect(spin_projection(&omega))?)))
        }
        SharpOneDim::Finite(candidates) => {
            for a in candidates {
                let face = hat_face(&a)?;
                if face.vertices() == std::slice::from_ref(s) {
                    return Ok((true, Some(a)));
                }
            }
            Ok((false, None))
        }
    }
}

/// Whether the extreme states generate the whole dual cone.
pub fn order_determining_check(alg: &EffectAlgebra) -> Result<bool> {
    if alg.is_spin() {
        return Ok(true);
    }
    let states: Vec<RatVector> = polytope_states(alg)?
        .into_iter()
        .map(|s| s.coords)
        .collect();
    let generated = match dd_convert(&states) {
        Ok(c) => c,
        Err(Error::NotFullDimensional { .. }) => return Ok(false),
        Err(e) => return Err(e),
    };
    Ok(generated == dual_cone(alg.polyhedral_cone()?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharpnessEntry {
    pub effect: Effect,
    pub passed: bool,
    /// Vertex `g` of `G_f` with `s(g) = 1` on `f̂` but `g ≱ f`.
    pub counterexample: Option<RatVector>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharpDeterminingReport {
    pub entries: Vec<SharpnessEntry>,
}

impl SharpDeterminingReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.passed)
    }
}

/// For each sharp `f`, every `g ∈ [0, u]` with `s(g) = 1` on all of `f̂` must
/// satisfy `g ≥ f`. The `g` quantifier is discharged exactly by checking the
/// vertices of that polytope; the `f` quantifier only ranges over `candidates`.
pub fn sharply_determining_check(
    alg: &EffectAlgebra,
    candidates: &[Effect],
) -> Result<SharpDeterminingReport> {
    let mut entries = Vec::new();
    for f in candidates {
        if !f.algebra().same_as(alg) {
            return Err(Error::AlgebraMismatch);
        }
        if !is_sharp(f) {
            return Err(Error::NotSharp(f.to_string()));
        }
        let face = hat_face(f)?;
        if face.is_empty() && !f.is_zero() {
            entries.push(SharpnessEntry {
                effect: f.clone(),
                passed: false,
                counterexample: None,
                note: Some("nonzero sharp effect with empty face".into()),
            });
            continue;
        }
        let g_vertices = match (&face.states, alg.kind()) {
            (FaceStates::WholeBall(_), _) => vec![alg.unit().clone()],
            (FaceStates::Vertices(v), AlgebraKind::Spin(_)) => match v.first() {
                // G_f is the segment from f = ½(1, ω) up to u.
                Some(_) => vec![f.coords().clone(), alg.unit().clone()],
                None => vec![RatVector::zeros(alg.dim())],
            },
            (FaceStates::Vertices(v), _) => {
                let mut p = alg.interval_polytope()?;
                for s in v {
                    p.push_equality(s.coords.clone(), Rational::one());
                }
                polytope_vertices(&p)?
            }
        };
        let counterexample = g_vertices
            .into_iter()
            .find(|g| !leq(f, &f.sibling(g.clone())).unwrap_or(false));
        entries.push(SharpnessEntry {
            effect: f.clone(),
            passed: counterexample.is_none(),
            counterexample,
            note: None,
        });
    }
    Ok(SharpDeterminingReport { entries })
}

/// Sharp candidates: subset sums of S₁(E) plus sharp vertices of `[0, u]`
/// (polyhedral); `0`, `u` and `½(1, ±ω)` over rational directions (spin).
pub fn sharp_candidates(alg: &EffectAlgebra) -> Result<Vec<Effect>> {
    match sharp_one_dim_elements(alg)? {
        SharpOneDim::SpinFamily(d) => {
            let mut out = vec![alg.zero(), alg.unit_effect()];
            for w in crate::spectral::rational_unit_vectors(d) {
                out.push(alg.effect(spin_projection(&w))?);
            }
            Ok(out)
        }
        SharpOneDim::Finite(s1) => {
            let one = Rational::one();
            let mut set: BTreeSet<RatVector> = BTreeSet::new();
            if s1.len() <= 16 {
                for mask in 0u32..(1 << s1.len()) {
                    let v = RatVector::combination(
                        alg.dim(),
                        s1.iter()
                            .enumerate()
                            .filter(|(i, _)| mask & (1 << i) != 0)
                            .map(|(_, e)| (&one, e.coords())),
                    );
                    if alg.contains(&v) {
                        set.insert(v);
                    }
                }
            }
            for v in alg.interval_vertices()? {
                set.insert(v.clone());
            }
            Ok(set
                .into_iter()
                .map(|v| alg.effect(v))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .filter(is_sharp)
                .collect())
        }
    }
}

/// Number of states in `â` for each `a ∈ S₁(E)` (polyhedral kinds).
pub fn hat_face_sizes(alg: &EffectAlgebra) -> Result<Vec<(Effect, usize)>> {
    match sharp_one_dim_elements(alg)? {
        SharpOneDim::SpinFamily(_) => Err(Error::UnsupportedKind(alg.kind().to_string())),
        SharpOneDim::Finite(s1) => s1
            .into_iter()
            .map(|a| {
                let n = hat_face(&a)?.vertices().len();
                Ok((a, n))
            })
            .collect(),
    }
}

/// Fraction of probe states lying in the convex hull of `âᵢ` for some context.
///
/// Probes are the extreme states, their barycenter and all pairwise midpoints.
pub fn context_hull_coverage(alg: &EffectAlgebra) -> Result<(usize, usize)> {
    let crate::spectral::ContextFamily::Finite(contexts) =
        crate::spectral::enumerate_contexts(alg)?
    else {
        return Err(Error::UnsupportedKind(alg.kind().to_string()));
    };
    let states = polytope_states(alg)?;
    let mut probes: Vec<RatVector> = states.iter().map(|s| s.coords.clone()).collect();
    let n = Rational::from_integer((states.len() as i64).into());
    let one = Rational::one();
    probes.push(
        RatVector::combination(alg.dim(), states.iter().map(|s| (&one, &s.coords)))
            .scale(&n.recip()),
    );
    for i in 0..states.len() {
        for j in i + 1..states.len() {
            probes.push((&states[i].coords + &states[j].coords).scale(&half()));
        }
    }
    let mut hulls: Vec<Vec<RatVector>> = Vec::new();
    for ctx in &contexts {
        let mut pts = Vec::new();
        for a in ctx.elements() {
            pts.extend(hat_face(a)?.vertices().iter().map(|s| s.coords.clone()));
        }
        hulls.push(pts);
    }
    let covered = probes
        .iter()
        .filter(|p| hulls.iter().any(|h| in_convex_hull(p, h)))
        .count();
    Ok((covered, probes.len()))
}

fn in_convex_hull(p: &RatVector, points: &[RatVector]) -> bool {
    if points.is_empty() {
        return false;
    }
    let k = points.len();
    let mut lp =
        HPolytope::new(k).with_equality(RatVector::new(vec![Rational::one(); k]), Rational::one());
    for i in 0..k {
        lp.push_inequality(RatVector::unit(k, i), Rational::zero());
    }
    for d in 0..p.dim() {
        lp.push_equality(points.iter().map(|q| q[d].clone()).collect(), p[d].clone());
    }
    feasible_point(&lp).is_ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{enumerate_contexts, spin_context, ContextFamily};

    fn square() -> EffectAlgebra {
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
        .unwrap()
    }

    #[test]
    fn square_states_match_the_four_corners() {
        let StateSet::Polytope(v) = extreme_states(&square()).unwrap() else {
            panic!()
        };
        let coords: Vec<_> = v.into_iter().map(|s| s.coords).collect();
        assert_eq!(
            coords,
            vec![
                RatVector::from_ints(&[0, 0, 1]),
                RatVector::from_ints(&[0, 1, 1]),
                RatVector::from_ints(&[1, 0, 1]),
                RatVector::from_ints(&[1, 1, 1]),
            ]
        );
    }

    #[test]
    fn faces() {
        let sq = square();
        let h = sq
            .effect(RatVector::from_fracs(&[(1, 2), (1, 2), (0, 1)]))
            .unwrap();
        let face = hat_face(&h).unwrap();
        assert_eq!(
            face.vertices(),
            &[State {
                coords: RatVector::from_ints(&[1, 1, 1])
            }]
        );

        let c3 = EffectAlgebra::classical(3).unwrap();
        let e1 = c3.effect(RatVector::from_ints(&[1, 0, 0])).unwrap();
        assert_eq!(
            hat_face(&e1).unwrap().vertices(),
            &[State {
                coords: RatVector::from_ints(&[1, 0, 0])
            }]
        );

        let s = EffectAlgebra::spin(2).unwrap();
        let p = s
            .effect(RatVector::from_fracs(&[(1, 2), (1, 2), (0, 1)]))
            .unwrap();
        assert_eq!(
            hat_face(&p).unwrap().vertices(),
            &[State::spin(&RatVector::from_ints(&[1, 0])).unwrap()]
        );
        assert!(hat_face(&s.zero()).unwrap().is_empty());
        assert_eq!(
            hat_face(&s.unit_effect()).unwrap().states,
            FaceStates::WholeBall(2)
        );
    }

    #[test]
    fn orthogonality_and_independence() {
        let c3 = EffectAlgebra::classical(3).unwrap();
        let ContextFamily::Finite(cs) = enumerate_contexts(&c3).unwrap() else {
            panic!()
        };
        assert!(context_orthogonality_check(&cs[0]).unwrap());
        assert!(hat_faces_affinely_independent(&cs[0]).unwrap());
        let s = EffectAlgebra::spin(2).unwrap();
        let ctx = spin_context(&s, &RatVector::from_fracs(&[(3, 5), (4, 5)])).unwrap();
        assert!(context_orthogonality_check(&ctx).unwrap());
        assert!(hat_faces_affinely_independent(&ctx).unwrap());
    }

    #[test]
    fn exposed_points() {
        let c3 = EffectAlgebra::classical(3).unwrap();
        let (ok, cert) = is_e_exposed_point(
            &c3,
            &State {
                coords: RatVector::from_ints(&[0, 1, 0]),
            },
        )
        .unwrap();
        assert!(ok);
        assert_eq!(cert.unwrap().coords(), &RatVector::from_ints(&[0, 1, 0]));
        let s = EffectAlgebra::spin(2).unwrap();
        let st = State::spin(&RatVector::from_fracs(&[(3, 5), (-4, 5)])).unwrap();
        let (ok, cert) = is_e_exposed_point(&s, &st).unwrap();
        assert!(ok);
        assert_eq!(
            cert.unwrap().coords(),
            &RatVector::from_fracs(&[(1, 2), (3, 10), (-2, 5)])
        );
        // In the square each one-dimensional effect exposes an edge, not a corner.
        let sq = square();
        let (ok, _) = is_e_exposed_point(
            &sq,
            &State {
                coords: RatVector::from_ints(&[1, 1, 1]),
            },
        )
        .unwrap();
        assert!(!ok);
    }

    #[test]
    fn order_determining() {
        assert!(order_determining_check(&EffectAlgebra::classical(3).unwrap()).unwrap());
        assert!(order_determining_check(&EffectAlgebra::spin(3).unwrap()).unwrap());
        assert!(order_determining_check(&square()).unwrap());
    }

    #[test]
    fn sharply_determining() {
        let c3 = EffectAlgebra::classical(3).unwrap();
        let cands = sharp_candidates(&c3).unwrap();
        assert_eq!(cands.len(), 8);
        assert!(sharply_determining_check(&c3, &cands).unwrap().passed());
        let s = EffectAlgebra::spin(2).unwrap();
        let cands = sharp_candidates(&s).unwrap();
        assert!(sharply_determining_check(&s, &cands).unwrap().passed());
        let half_u = s
            .effect(RatVector::from_fracs(&[(1, 2), (0, 1), (0, 1)]))
            .unwrap();
        assert!(matches!(
            sharply_determining_check(&s, &[half_u]),
            Err(Error::NotSharp(_))
        ));
    }
}

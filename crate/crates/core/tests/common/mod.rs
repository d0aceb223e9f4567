#![allow(dead_code)]

use num_traits::{One, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use speclat_core::rational::{rat, RatVector, Rational};
use speclat_core::spectral::rational_unit_vectors;
use speclat_core::{Effect, EffectAlgebra};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_fraction(rng: &mut ChaCha8Rng, max_den: i64) -> Rational {
    let d = rng.gen_range(1..=max_den);
    let n = rng.gen_range(0..=d);
    rat(n, d)
}

/// A random effect with small denominators.
///
/// Polyhedral kinds: a random convex combination of vertices of `[0, u]`.
/// Spin kinds: `(t, r ω)` with rational unit `ω` so the vector norm stays rational.
pub fn random_effect(alg: &EffectAlgebra, rng: &mut ChaCha8Rng) -> Effect {
    if alg.is_spin() {
        let d = alg.dim() - 1;
        let dirs = rational_unit_vectors(d);
        let w = &dirs[rng.gen_range(0..dirs.len())];
        let t = random_fraction(rng, 12);
        let cap = if t <= rat(1, 2) {
            t.clone()
        } else {
            Rational::one() - &t
        };
        let r = &cap * random_fraction(rng, 6);
        let coords = RatVector::new(vec![t]).concat(&w.scale(&r));
        return alg.effect(coords).expect("sampled inside [0, u]");
    }
    let vs = alg
        .interval_vertices()
        .expect("polyhedral vertices")
        .to_vec();
    let k = rng.gen_range(1..=3.min(vs.len()));
    let mut weights: Vec<Rational> = (0..k)
        .map(|_| Rational::from_integer(rng.gen_range(1..6).into()))
        .collect();
    let total: Rational = weights.iter().fold(Rational::zero(), |a, b| a + b);
    for w in weights.iter_mut() {
        *w = &*w / &total;
    }
    let picks: Vec<&RatVector> = (0..k).map(|_| &vs[rng.gen_range(0..vs.len())]).collect();
    let coords = RatVector::combination(alg.dim(), weights.iter().zip(picks));
    alg.effect(coords).expect("convex combination of vertices")
}

/// Random effect of a spin factor whose vector part may have irrational norm.
pub fn random_spin_effect_any(alg: &EffectAlgebra, rng: &mut ChaCha8Rng) -> Effect {
    loop {
        let t = random_fraction(rng, 10);
        let x: RatVector = (1..alg.dim())
            .map(|_| random_fraction(rng, 10) - rat(1, 2))
            .collect();
        let coords = RatVector::new(vec![t]).concat(&x);
        if let Ok(e) = alg.effect(coords) {
            return e;
        }
    }
}

pub fn builtins() -> Vec<EffectAlgebra> {
    vec![
        EffectAlgebra::classical(2).unwrap(),
        EffectAlgebra::classical(3).unwrap(),
        EffectAlgebra::classical(4).unwrap(),
        speclat_core::constructions::square(),
        EffectAlgebra::spin(2).unwrap(),
        EffectAlgebra::spin(3).unwrap(),
    ]
}

pub fn spectral_builtins() -> Vec<EffectAlgebra> {
    builtins()
        .into_iter()
        .filter(|a| a.name() != "square")
        .collect()
}

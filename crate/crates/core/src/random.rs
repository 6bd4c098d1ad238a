//! Seeded generation of random minimal Sullivan algebras for
//! property-based testing. Each differential is a random cocycle of the
//! subalgebra on the earlier generators, so d^2 = 0 holds by construction
//! and the result is always minimal.

use crate::algebra::{basis, GradedContext, Polynomial};
use crate::dga::SullivanAlgebra;
use crate::rat::{rat_i, RatMatrix, Rational};
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

/// Shape constraints for the generator.
#[derive(Debug, Clone, Copy)]
pub struct RandomSpec {
    pub max_gens: usize,
    pub max_degree: usize,
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec { max_gens: 5, max_degree: 9 }
    }
}

/// A random minimal simply-connected Sullivan algebra, reproducible from
/// the seed.
pub fn random_minimal_algebra(seed: u64, spec: RandomSpec) -> SullivanAlgebra {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_gens = rng.gen_range(2..=spec.max_gens.max(2));
    let mut degrees: Vec<usize> =
        (0..n_gens).map(|_| rng.gen_range(2..=spec.max_degree.max(2))).collect();
    degrees.sort();
    let gens: Vec<(String, usize)> = degrees
        .iter()
        .enumerate()
        .map(|(i, d)| (format!("g{i}"), *d))
        .collect();
    let ctx = GradedContext::new(gens).expect("degrees >= 2 by construction");

    let mut diff: Vec<Polynomial> = Vec::new();
    for i in 0..ctx.len() {
        let target_degree = ctx.degree(i) + 1;
        // candidate monomials: wordlength >= 2, only earlier generators
        let candidates: Vec<_> = basis(&ctx, target_degree, 2, None)
            .into_iter()
            .filter(|m| m.factors().iter().all(|(g, _)| *g < i))
            .collect();
        if candidates.is_empty() {
            diff.push(Polynomial::zero(ctx.clone()));
            continue;
        }
        // matrix of the differential built so far on those monomials
        let codomain = basis(&ctx, target_degree + 1, 0, None);
        let mut m = RatMatrix::zeros(codomain.len(), candidates.len());
        for (j, mono) in candidates.iter().enumerate() {
            let partial = SullivanAlgebra::new(
                ctx.clone(),
                diff.iter()
                    .cloned()
                    .chain((i..ctx.len()).map(|_| Polynomial::zero(ctx.clone())))
                    .collect(),
            )
            .expect("degrees verified");
            let dm = partial.apply_d(&Polynomial::from_term(
                ctx.clone(),
                mono.clone(),
                Rational::one(),
            ));
            for (t, c) in dm.terms() {
                if let Some(row) = codomain.iter().position(|b| b == t) {
                    m.set(row, j, c.clone());
                }
            }
        }
        let kernel = m.kernel_basis();
        let mut d_i = Polynomial::zero(ctx.clone());
        for k in &kernel {
            let c = rat_i(rng.gen_range(-2i64..=2));
            if c.is_zero() {
                continue;
            }
            for (idx, v) in k.iter().enumerate() {
                if !v.is_zero() {
                    d_i.add_term(candidates[idx].clone(), v * &c);
                }
            }
        }
        diff.push(d_i);
    }
    SullivanAlgebra::new(ctx, diff).expect("cocycle construction keeps degrees")
}

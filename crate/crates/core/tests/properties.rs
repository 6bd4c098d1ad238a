//! Randomized invariant suites over the public API: Koszul sign laws,
//! Leibniz, quadratic-part closure, Toomer witnesses, Kunneth.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;
use sullivan::algebra::{basis, normalize, GradedContext, Polynomial};
use sullivan::cohomology::ToomerCertainty;
use sullivan::dga::{sphere_model, tensor};
use sullivan::fixtures;
use sullivan::rat::rat_i;
use sullivan::{betti, coformalize, random_minimal_algebra, toomer, RandomSpec, SullivanAlgebra};

fn mixed_ctx() -> Arc<GradedContext> {
    GradedContext::new(vec![
        ("a".into(), 2),
        ("b".into(), 3),
        ("c".into(), 3),
        ("e".into(), 4),
        ("f".into(), 5),
    ])
    .unwrap()
}

fn random_poly(rng: &mut ChaCha8Rng, ctx: &Arc<GradedContext>, degree: usize) -> Polynomial {
    let monos = basis(ctx, degree, 0, None);
    let mut p = Polynomial::zero(ctx.clone());
    for m in monos {
        let c = rng.gen_range(-3i64..=3);
        if c != 0 && rng.gen_bool(0.6) {
            p.add_term(m, rat_i(c));
        }
    }
    p
}

#[test]
fn koszul_graded_commutativity() {
    let ctx = mixed_ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let dp = rng.gen_range(2..=7);
        let dq = rng.gen_range(2..=7);
        let p = random_poly(&mut rng, &ctx, dp);
        let q = random_poly(&mut rng, &ctx, dq);
        let pq = p.mul_checked(&q).unwrap();
        let qp = q.mul_checked(&p).unwrap();
        let sign = if dp % 2 == 1 && dq % 2 == 1 { -1 } else { 1 };
        assert_eq!(pq, qp.scale(&rat_i(sign)));
    }
}

#[test]
fn koszul_odd_squares_vanish() {
    let ctx = mixed_ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..1000 {
        let d = [3, 5][rng.gen_range(0..2)];
        let p = random_poly(&mut rng, &ctx, d);
        assert!(p.mul_checked(&p).unwrap().is_zero());
    }
}

#[test]
fn koszul_associativity() {
    let ctx = mixed_ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..1000 {
        let (dp, dq, dr) =
            (rng.gen_range(2..=6), rng.gen_range(2..=6), rng.gen_range(2..=6));
        let p = random_poly(&mut rng, &ctx, dp);
        let q = random_poly(&mut rng, &ctx, dq);
        let r = random_poly(&mut rng, &ctx, dr);
        let left = p.mul_checked(&q).unwrap().mul_checked(&r).unwrap();
        let right = p.mul_checked(&q.mul_checked(&r).unwrap()).unwrap();
        assert_eq!(left, right);
    }
}

#[test]
fn normalize_agrees_with_pairwise_swaps() {
    // the sign of a permuted word equals the product of adjacent
    // transposition signs, computed independently by bubble sort
    let ctx = mixed_ctx();
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..1000 {
        let len = rng.gen_range(1..=5);
        let word: Vec<usize> = (0..len).map(|_| rng.gen_range(0..ctx.len())).collect();
        let (sign, mono) = normalize(&ctx, &word);
        // oracle: bubble sort counting odd-odd swaps, zero on repeated odds
        let mut w = word.clone();
        let mut s: i8 = 1;
        for i in 0..w.len() {
            for j in (i + 1..w.len()).rev() {
                if w[j] < w[j - 1] {
                    if ctx.is_odd(w[j]) && ctx.is_odd(w[j - 1]) {
                        s = -s;
                    }
                    w.swap(j - 1, j);
                }
            }
        }
        for pair in w.windows(2) {
            if pair[0] == pair[1] && ctx.is_odd(pair[0]) {
                s = 0;
            }
        }
        assert_eq!(sign, s, "word {word:?}");
        if s != 0 {
            assert_eq!(mono.word(), w);
        }
    }
}

#[test]
fn leibniz_on_random_minimal_algebras() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for seed in 0..60 {
        let alg = random_minimal_algebra(seed, RandomSpec::default());
        let ctx = alg.ctx().clone();
        for _ in 0..17 {
            let dp = rng.gen_range(2..=8);
            let dq = rng.gen_range(2..=8);
            let p = random_poly(&mut rng, &ctx, dp);
            let q = random_poly(&mut rng, &ctx, dq);
            let lhs = alg.apply_d(&p.mul_checked(&q).unwrap());
            let sign = if dp % 2 == 1 { -1 } else { 1 };
            let rhs = alg
                .apply_d(&p)
                .mul_checked(&q)
                .unwrap()
                .add_checked(&p.mul_checked(&alg.apply_d(&q)).unwrap().scale(&rat_i(sign)))
                .unwrap();
            assert_eq!(lhs, rhs, "seed {seed}");
        }
    }
}

#[test]
fn quadratic_part_of_random_algebras_is_closed() {
    for seed in 100..200 {
        let alg = random_minimal_algebra(seed, RandomSpec::default());
        let quad = alg.quadratic_part().unwrap();
        let report = quad.validate(12);
        assert!(report.all_ok(), "seed {seed}: {:?}", report.counterexamples);
    }
}

#[test]
fn toomer_witness_consistency() {
    let algebras: Vec<SullivanAlgebra> = vec![
        sphere_model(2),
        fixtures::e54_model().quadratic_part().unwrap(),
        fixtures::e53_model().quadratic_part().unwrap(),
        fixtures::cp3_model().quadratic_part().unwrap(),
        tensor(&sphere_model(2), &sphere_model(3)),
    ];
    for alg in &algebras {
        let v = toomer(alg, 12).unwrap();
        assert!(v.value >= 1);
        assert_eq!(v.cutoff, 12);
        match &v.witness {
            Some((deg, w)) => {
                assert!(v.value > 1);
                assert!(!w.is_zero());
                assert!(alg.apply_d(w).is_zero());
                assert_eq!(w.homogeneous_degree(), Some(*deg));
                assert!(*deg < 12);
            }
            None => assert_eq!(v.value, 1),
        }
        assert!(matches!(
            v.certainty,
            ToomerCertainty::ExactUpToCutoff | ToomerCertainty::LowerBoundOnly
        ));
    }
}

#[test]
fn kunneth_on_random_products() {
    let parts = [sphere_model(2), sphere_model(3), sphere_model(4), fixtures::cp2_model()];
    for a in &parts {
        for b in &parts {
            let t = tensor(a, b);
            let ta = betti(a, 9).unwrap();
            let tb = betti(b, 9).unwrap();
            let tt = betti(&t, 9).unwrap();
            for k in 0..9 {
                let expect: usize = (0..=k).map(|i| ta.dim(i) * tb.dim(k - i)).sum();
                assert_eq!(tt.dim(k), expect, "degree {k}");
            }
        }
    }
}

#[test]
fn low_toomer_limits_always_coformalize() {
    // on random minimal algebras whose limit has small Toomer invariant,
    // the elimination procedure must certify
    let mut checked = 0usize;
    for seed in 1000..1120 {
        let alg = random_minimal_algebra(seed, RandomSpec::default());
        let limit = alg.quadratic_part().unwrap();
        let e0 = toomer(&limit, 14).unwrap();
        if e0.value <= 2 {
            checked += 1;
            let v = coformalize(&alg, 14).unwrap();
            assert!(v.is_certified(), "seed {seed} must coformalize");
        }
    }
    assert!(checked >= 30, "sample too small: {checked}");
}

#[test]
fn quadratic_model_map_functoriality() {
    // the induced map between quadratic parts of a certified iso validates
    for alg in [fixtures::e54_model(), sphere_model(2), fixtures::s2_x_s2_model()] {
        let v = coformalize(&alg, 12).unwrap();
        let phi = match v.kind {
            sullivan::CoformalKind::CertifiedCoformal(phi) => phi,
            k => panic!("expected certification, got {k:?}"),
        };
        let q = phi.quadratic_model_map().unwrap();
        assert!(q.validate(12).all_ok());
        assert!(q.linear_part_invertible());
    }
}

//! Stock models from the corpus: the worked examples every analysis is
//! exercised against.

use crate::algebra::{GradedContext, Polynomial};
use crate::dga::SullivanAlgebra;
use crate::fibration::RelativeModel;

/// (Lambda(x2, y5, a3), dy = x^3, da = x^2): total model of an
/// S^3-fibration over CP^2; coformal with one elimination y -> y - x*a.
pub fn e54_model() -> SullivanAlgebra {
    let ctx =
        GradedContext::new(vec![("x".into(), 2), ("y".into(), 5), ("a".into(), 3)]).unwrap();
    let x = Polynomial::generator(ctx.clone(), 0);
    let x2 = x.mul_checked(&x).unwrap();
    let x3 = x2.mul_checked(&x).unwrap();
    SullivanAlgebra::new(ctx.clone(), vec![Polynomial::zero(ctx), x3, x2]).unwrap()
}

/// (Lambda(u3,v3,a4,b7,s9), db=a^2, ds=u*v*a): total model of an
/// S^9-fibration over S^3 x S^3 x S^4; not coformal, since [u v a] is a
/// nonzero cubic d1-cohomology class with no primitive.
pub fn e53_model() -> SullivanAlgebra {
    let ctx = GradedContext::new(vec![
        ("u".into(), 3),
        ("v".into(), 3),
        ("a".into(), 4),
        ("b".into(), 7),
        ("s".into(), 9),
    ])
    .unwrap();
    let u = Polynomial::generator(ctx.clone(), 0);
    let v = Polynomial::generator(ctx.clone(), 1);
    let a = Polynomial::generator(ctx.clone(), 2);
    let a2 = a.mul_checked(&a).unwrap();
    let ds = u.mul_checked(&v).unwrap().mul_checked(&a).unwrap();
    SullivanAlgebra::new(
        ctx.clone(),
        vec![
            Polynomial::zero(ctx.clone()),
            Polynomial::zero(ctx.clone()),
            Polynomial::zero(ctx),
            a2,
            ds,
        ],
    )
    .unwrap()
}

/// CP^3 model: (Lambda(x2, y7), dy = x^4).
pub fn cp3_model() -> SullivanAlgebra {
    let ctx = GradedContext::new(vec![("x".into(), 2), ("y".into(), 7)]).unwrap();
    let x = Polynomial::generator(ctx.clone(), 0);
    let x2 = x.mul_checked(&x).unwrap();
    let x4 = x2.mul_checked(&x2).unwrap();
    SullivanAlgebra::new(ctx.clone(), vec![Polynomial::zero(ctx), x4]).unwrap()
}

/// CP^2 model: (Lambda(x2, y5), dy = x^3).
pub fn cp2_model() -> SullivanAlgebra {
    let ctx = GradedContext::new(vec![("x".into(), 2), ("y".into(), 5)]).unwrap();
    let x = Polynomial::generator(ctx.clone(), 0);
    let x3 = x.mul_checked(&x).unwrap().mul_checked(&x).unwrap();
    SullivanAlgebra::new(ctx.clone(), vec![Polynomial::zero(ctx), x3]).unwrap()
}

/// The S^2 x S^2 model: (Lambda(x2,y3,a2,b3), dy=x^2, db=a^2).
pub fn s2_x_s2_model() -> SullivanAlgebra {
    let ctx = GradedContext::new(vec![
        ("x".into(), 2),
        ("y".into(), 3),
        ("a".into(), 2),
        ("b".into(), 3),
    ])
    .unwrap();
    let x = Polynomial::generator(ctx.clone(), 0);
    let a = Polynomial::generator(ctx.clone(), 2);
    let x2 = x.mul_checked(&x).unwrap();
    let a2 = a.mul_checked(&a).unwrap();
    SullivanAlgebra::new(
        ctx.clone(),
        vec![Polynomial::zero(ctx.clone()), x2, Polynomial::zero(ctx), a2],
    )
    .unwrap()
}

/// The S^3 x S^3 x S^4 model with the generator names used by `e53_model`.
pub fn s3_x_s3_x_s4_model() -> SullivanAlgebra {
    let ctx = GradedContext::new(vec![
        ("u".into(), 3),
        ("v".into(), 3),
        ("a".into(), 4),
        ("b".into(), 7),
    ])
    .unwrap();
    let a = Polynomial::generator(ctx.clone(), 2);
    let a2 = a.mul_checked(&a).unwrap();
    SullivanAlgebra::new(
        ctx.clone(),
        vec![
            Polynomial::zero(ctx.clone()),
            Polynomial::zero(ctx.clone()),
            Polynomial::zero(ctx),
            a2,
        ],
    )
    .unwrap()
}

/// Relative model of the S^9-fibration over S^3 x S^3 x S^4 whose total
/// model is `e53_model`.
pub fn e53_relative_model() -> RelativeModel {
    let total = e53_model();
    RelativeModel::assemble(
        s3_x_s3_x_s4_model(),
        vec![("s".into(), 9)],
        total.diffs().to_vec(),
        12,
    )
    .unwrap()
}

/// Relative model of the S^3-fibration over CP^2 whose total model is
/// `e54_model`.
pub fn e54_relative_model() -> RelativeModel {
    let base = cp2_model();
    let total = e54_model();
    RelativeModel::assemble(base, vec![("a".into(), 3)], total.diffs().to_vec(), 12).unwrap()
}

/// Relative model of the S^2-bundle CP^3 -> S^4: base (Lambda(u4,v7),
/// dv=u^2), fiber generators (x2, w3) with dx = 0, dw = x^2 - u.
pub fn cp3_over_s4_relative_model() -> RelativeModel {
    let base_ctx = GradedContext::new(vec![("u".into(), 4), ("v".into(), 7)]).unwrap();
    let u = Polynomial::generator(base_ctx.clone(), 0);
    let u2 = u.mul_checked(&u).unwrap();
    let base =
        SullivanAlgebra::new(base_ctx.clone(), vec![Polynomial::zero(base_ctx), u2]).unwrap();
    // total context order: base generators first, then fiber generators
    let ctx = GradedContext::new(vec![
        ("u".into(), 4),
        ("v".into(), 7),
        ("x".into(), 2),
        ("w".into(), 3),
    ])
    .unwrap();
    let u = Polynomial::generator(ctx.clone(), 0);
    let u2 = u.mul_checked(&u).unwrap();
    let x = Polynomial::generator(ctx.clone(), 2);
    let x2 = x.mul_checked(&x).unwrap();
    let dw = x2.sub(&u);
    let total_diff = vec![Polynomial::zero(ctx.clone()), u2, Polynomial::zero(ctx), dw];
    RelativeModel::assemble(base, vec![("x".into(), 2), ("w".into(), 3)], total_diff, 12).unwrap()
}

/// Twisted S^2-fibration over S^2 with a small degree gap: fiber (f2, g3),
/// dg = f^2 + x*f. Purely quadratic total differential.
pub fn s2_fiber_gap_model() -> RelativeModel {
    let base_ctx = GradedContext::new(vec![("x".into(), 2), ("y".into(), 3)]).unwrap();
    let bx = Polynomial::generator(base_ctx.clone(), 0);
    let base = SullivanAlgebra::new(
        base_ctx.clone(),
        vec![Polynomial::zero(base_ctx), bx.mul_checked(&bx).unwrap()],
    )
    .unwrap();
    let ctx = GradedContext::new(vec![
        ("x".into(), 2),
        ("y".into(), 3),
        ("f".into(), 2),
        ("g".into(), 3),
    ])
    .unwrap();
    let x = Polynomial::generator(ctx.clone(), 0);
    let f = Polynomial::generator(ctx.clone(), 2);
    let dy = x.mul_checked(&x).unwrap();
    let dg = f.mul_checked(&f).unwrap().add_checked(&x.mul_checked(&f).unwrap()).unwrap();
    let total_diff = vec![Polynomial::zero(ctx.clone()), dy, Polynomial::zero(ctx), dg];
    RelativeModel::assemble(base, vec![("f".into(), 2), ("g".into(), 3)], total_diff, 12)
        .unwrap()
}

/// Truncated quadratic model of S^3 v S^3 (free Lie algebra on two
/// degree-2 generators), flagged with wedge provenance.
pub fn wedge_s3s3_base() -> SullivanAlgebra {
    crate::lie::wedge_of_spheres_model(&[3, 3], 8).unwrap()
}

/// Trivial odd-sphere (S^3) extension over the S^3 v S^3 wedge model:
/// TNHZ, TNCZ, fiber inclusion nontrivial on cohomology.
pub fn wedge_s3s3_odd_fiber_model() -> RelativeModel {
    let base = wedge_s3s3_base();
    let mut total_diff = base.diffs().to_vec();
    total_diff.push(Polynomial::zero(base.ctx().clone()));
    RelativeModel::assemble(base.clone(), vec![("f".into(), 3)], total_diff, 12).unwrap()
}

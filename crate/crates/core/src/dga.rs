//! Sullivan algebras (Lambda V, d): differential storage on generators,
//! derivation extension, validation, wordlength decomposition d = sum d_i,
//! quadratic part, and stock constructors.

use crate::algebra::{basis, GradedContext, Monomial, Polynomial};
use crate::error::{Error, Result};
use crate::rat::Rational;
use num_traits::One;
use std::sync::Arc;

/// A Sullivan algebra: a graded context plus the differential's values on
/// generators. All other values of d are derived by the Leibniz rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SullivanAlgebra {
    ctx: Arc<GradedContext>,
    /// d(generator i), indexed in declaration order
    diff: Vec<Polynomial>,
    /// provenance flag: this algebra is the quadratic model of a wedge of
    /// spheres (set by the free-Lie constructor, never inferred)
    pub wedge_of_spheres: Option<WedgeProvenance>,
}

/// Provenance recorded by the free-Lie constructor: the dimensions of the
/// spheres in the wedge the base models.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WedgeProvenance {
    pub sphere_dims: Vec<usize>,
}

/// Outcome of validating a Sullivan algebra up to a degree cutoff.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub degree_ok: bool,
    pub d_squared_ok: bool,
    pub cutoff: usize,
    pub minimal: bool,
    pub simply_connected: bool,
    pub finite_type: bool,
    /// (generator name, offending polynomial) pairs
    pub counterexamples: Vec<(String, Polynomial)>,
}

impl ValidationReport {
    pub fn all_ok(&self) -> bool {
        self.degree_ok && self.d_squared_ok && self.minimal && self.simply_connected && self.finite_type
    }
}

impl SullivanAlgebra {
    /// Build an algebra from a context and the differential values on
    /// generators. Degrees are checked eagerly; d^2 = 0 only by `validate`.
    pub fn new(ctx: Arc<GradedContext>, diff: Vec<Polynomial>) -> Result<Self> {
        if diff.len() != ctx.len() {
            return Err(Error::Other("differential must assign every generator".into()));
        }
        for (i, p) in diff.iter().enumerate() {
            if *p.ctx().as_ref() != *ctx {
                return Err(Error::MixedContexts);
            }
            if !p.is_zero() && p.homogeneous_degree() != Some(ctx.degree(i) + 1) {
                return Err(Error::Other(format!(
                    "d({}) must be homogeneous of degree {}",
                    ctx.name(i),
                    ctx.degree(i) + 1
                )));
            }
        }
        Ok(SullivanAlgebra { ctx, diff, wedge_of_spheres: None })
    }

    pub fn ctx(&self) -> &Arc<GradedContext> {
        &self.ctx
    }

    pub fn diff(&self, i: usize) -> &Polynomial {
        &self.diff[i]
    }

    pub fn diffs(&self) -> &[Polynomial] {
        &self.diff
    }

    pub fn max_gen_degree(&self) -> usize {
        self.ctx.gens().iter().map(|g| g.1).max().unwrap_or(0)
    }

    /// Extend d to an arbitrary polynomial by linearity and the graded
    /// Leibniz rule d(ab) = (da)b + (-1)^{|a|} a (db).
    pub fn apply_d(&self, p: &Polynomial) -> Polynomial {
        let ctx = self.ctx.clone();
        let mut out = Polynomial::zero(ctx.clone());
        for (m, c) in p.terms() {
            let word = m.word();
            for i in 0..word.len() {
                let dgi = &self.diff[word[i]];
                if dgi.is_zero() {
                    continue;
                }
                // sign: degrees of the factors to the left
                let left_deg: usize = word[..i].iter().map(|&g| ctx.degree(g)).sum();
                let sign = if left_deg % 2 == 0 { Rational::one() } else { -Rational::one() };
                let mut term = Polynomial::from_term(ctx.clone(), Monomial::one(), c * &sign);
                for &g in &word[..i] {
                    term = term.mul_checked(&Polynomial::generator(ctx.clone(), g)).unwrap();
                }
                term = term.mul_checked(dgi).unwrap();
                for &g in &word[i + 1..] {
                    term = term.mul_checked(&Polynomial::generator(ctx.clone(), g)).unwrap();
                }
                out = out.add_checked(&term).unwrap();
            }
        }
        out
    }

    /// Check degrees, d^2 = 0 (for generators of degree < cutoff),
    /// minimality, simple connectivity and finite type.
    pub fn validate(&self, cutoff: usize) -> ValidationReport {
        let mut counterexamples = Vec::new();
        let mut degree_ok = true;
        let mut d_squared_ok = true;
        let mut minimal = true;
        for (i, p) in self.diff.iter().enumerate() {
            if !p.is_zero() && p.homogeneous_degree() != Some(self.ctx.degree(i) + 1) {
                degree_ok = false;
                counterexamples.push((self.ctx.name(i).to_string(), p.clone()));
            }
            if !p.wordlength_part(1).is_zero() || !p.wordlength_part(0).is_zero() {
                minimal = false;
                counterexamples.push((self.ctx.name(i).to_string(), p.wordlength_part(1)));
            }
            if self.ctx.degree(i) < cutoff {
                let dd = self.apply_d(p);
                if !dd.is_zero() {
                    d_squared_ok = false;
                    counterexamples.push((self.ctx.name(i).to_string(), dd));
                }
            }
        }
        // degrees >= 2 are enforced by GradedContext; finitely many
        // generators per degree holds for any finite generator list
        ValidationReport {
            degree_ok,
            d_squared_ok,
            cutoff,
            minimal,
            simply_connected: true,
            finite_type: true,
            counterexamples,
        }
    }

    /// The Lambda^{i+1}-component of d on each generator; summing over all
    /// i reconstructs the differential.
    pub fn wordlength_part(&self, i: usize) -> Vec<Polynomial> {
        self.diff.iter().map(|p| p.wordlength_part(i + 1)).collect()
    }

    /// The same context with d replaced by its quadratic part d_1.
    pub fn quadratic_part(&self) -> Result<SullivanAlgebra> {
        for (i, p) in self.diff.iter().enumerate() {
            if !p.wordlength_part(1).is_zero() {
                return Err(Error::NotMinimal(self.ctx.name(i).to_string()));
            }
        }
        let mut out = SullivanAlgebra::new(self.ctx.clone(), self.wordlength_part(1))?;
        out.wedge_of_spheres = self.wedge_of_spheres.clone();
        Ok(out)
    }

    /// True when every differential value is purely quadratic.
    pub fn is_purely_quadratic(&self) -> bool {
        self.diff.iter().all(|p| p.wordlength_at_least(3).is_zero() && p.wordlength_part(1).is_zero() && p.wordlength_part(0).is_zero())
    }

    /// Cochain basis in the given degree.
    pub fn cochain_basis(&self, degree: usize) -> Vec<Monomial> {
        basis(&self.ctx, degree, 0, None)
    }
}

/// Minimal model of the n-sphere: one odd generator for odd n, the pair
/// (x_n, y_{2n-1}) with dy = x^2 for even n.
pub fn sphere_model(n: usize) -> SullivanAlgebra {
    assert!(n >= 2, "spheres must be simply connected");
    if n % 2 == 1 {
        let ctx = GradedContext::new(vec![(format!("x{n}"), n)]).unwrap();
        SullivanAlgebra::new(ctx.clone(), vec![Polynomial::zero(ctx)]).unwrap()
    } else {
        let ctx =
            GradedContext::new(vec![(format!("x{n}"), n), (format!("y{}", 2 * n - 1), 2 * n - 1)])
                .unwrap();
        let x = Polynomial::generator(ctx.clone(), 0);
        let x2 = x.mul_checked(&x).unwrap();
        SullivanAlgebra::new(ctx.clone(), vec![Polynomial::zero(ctx), x2]).unwrap()
    }
}

/// Tensor product of two Sullivan algebras. Clashing generator names are
/// renamed with a deterministic `'` suffix.
pub fn tensor(a: &SullivanAlgebra, b: &SullivanAlgebra) -> SullivanAlgebra {
    let mut names: Vec<String> = a.ctx().gens().iter().map(|g| g.0.clone()).collect();
    let mut gens: Vec<(String, usize)> = a.ctx().gens().to_vec();
    let mut b_names = Vec::new();
    for (name, deg) in b.ctx().gens() {
        let mut n = name.clone();
        while names.contains(&n) {
            n.push('\'');
        }
        names.push(n.clone());
        b_names.push(n.clone());
        gens.push((n, *deg));
    }
    let ctx = GradedContext::new(gens).unwrap();
    let na = a.ctx().len();
    let remap = |p: &Polynomial, offset: usize| -> Polynomial {
        let mut out = Polynomial::zero(ctx.clone());
        for (m, c) in p.terms() {
            let word: Vec<usize> = m.word().iter().map(|&g| g + offset).collect();
            let (sign, mm) = crate::algebra::normalize(&ctx, &word);
            debug_assert_eq!(sign, 1); // order is preserved by the shift
            out.add_term(mm, c.clone());
        }
        out
    };
    let mut diff: Vec<Polynomial> = a.diffs().iter().map(|p| remap(p, 0)).collect();
    diff.extend(b.diffs().iter().map(|p| remap(p, na)));
    SullivanAlgebra::new(ctx, diff).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{cp3_model, e53_model, e54_model};

    #[test]
    fn apply_d_unit_is_zero() {
        let alg = e54_model();
        assert!(alg.apply_d(&Polynomial::one(alg.ctx().clone())).is_zero());
    }

    #[test]
    fn apply_d_leibniz_e54() {
        // d(x*a) = x * x^2 = x^3 since dx = 0
        let alg = e54_model();
        let ctx = alg.ctx().clone();
        let x = Polynomial::generator(ctx.clone(), 0);
        let a = Polynomial::generator(ctx.clone(), 2);
        let xa = x.mul_checked(&a).unwrap();
        let x3 = x.mul_checked(&x).unwrap().mul_checked(&x).unwrap();
        assert_eq!(alg.apply_d(&xa), x3);
    }

    #[test]
    fn apply_d_leibniz_e53() {
        // d(u*b) = -u * a^2 since du = 0 and |u| is odd
        let alg = e53_model();
        let ctx = alg.ctx().clone();
        let u = Polynomial::generator(ctx.clone(), 0);
        let a = Polynomial::generator(ctx.clone(), 2);
        let b = Polynomial::generator(ctx.clone(), 3);
        let ub = u.mul_checked(&b).unwrap();
        let ua2 = u.mul_checked(&a).unwrap().mul_checked(&a).unwrap();
        assert_eq!(alg.apply_d(&ub), ua2.neg());
    }

    #[test]
    fn validate_sphere() {
        let alg = sphere_model(3);
        let report = alg.validate(10);
        assert!(report.all_ok());
    }

    #[test]
    fn validate_e53() {
        let report = e53_model().validate(12);
        assert!(report.all_ok(), "counterexamples: {:?}", report.counterexamples);
    }

    #[test]
    fn validate_catches_linear_term() {
        let ctx = GradedContext::new(vec![("x".into(), 2), ("y".into(), 3)]).unwrap();
        // tampered: dy = x (linear), breaks both degree and minimality
        let x = Polynomial::generator(ctx.clone(), 0);
        let alg = SullivanAlgebra {
            ctx: ctx.clone(),
            diff: vec![Polynomial::zero(ctx), x],
            wedge_of_spheres: None,
        };
        let report = alg.validate(6);
        assert!(!report.minimal);
        assert!(report.counterexamples.iter().any(|(n, _)| n == "y"));
    }

    #[test]
    fn wordlength_parts_cp3() {
        let alg = cp3_model();
        let p1 = alg.wordlength_part(1);
        let p3 = alg.wordlength_part(3);
        assert!(p1[1].is_zero());
        let ctx = alg.ctx().clone();
        let x = Polynomial::generator(ctx.clone(), 0);
        let x4 = x.mul_checked(&x).unwrap().mul_checked(&x).unwrap().mul_checked(&x).unwrap();
        assert_eq!(p3[1], x4);
        // reconstruction: sum of all parts equals the stored differential
        let mut sum = Polynomial::zero(ctx);
        for i in 0..6 {
            sum = sum.add_checked(&alg.wordlength_part(i)[1]).unwrap();
        }
        assert_eq!(sum, *alg.diff(1));
    }

    #[test]
    fn wordlength_parts_e53() {
        let alg = e53_model();
        let p1 = alg.wordlength_part(1);
        let p2 = alg.wordlength_part(2);
        assert_eq!(p1[3], alg.diff(3).clone()); // db = a^2 quadratic
        assert!(p1[4].is_zero());
        assert_eq!(p2[4], alg.diff(4).clone()); // ds = u*v*a wordlength 3
    }

    #[test]
    fn quadratic_part_idempotent() {
        let alg = e53_model();
        let q = alg.quadratic_part().unwrap();
        assert_eq!(q.quadratic_part().unwrap(), q);
        assert!(q.is_purely_quadratic());
    }

    #[test]
    fn quadratic_part_cp3_is_product_model() {
        // (Lambda(x2,y7), d1 = 0): model of S^2 x S^7
        let q = cp3_model().quadratic_part().unwrap();
        assert!(q.diff(0).is_zero());
        assert!(q.diff(1).is_zero());
    }

    #[test]
    fn quadratic_part_d1_squared_zero() {
        let q = e53_model().quadratic_part().unwrap();
        assert!(q.validate(12).d_squared_ok);
    }

    #[test]
    fn sphere_models() {
        let s3 = sphere_model(3);
        assert_eq!(s3.ctx().len(), 1);
        assert!(s3.diff(0).is_zero());
        let s2 = sphere_model(2);
        assert_eq!(s2.ctx().len(), 2);
        let x = Polynomial::generator(s2.ctx().clone(), 0);
        assert_eq!(s2.diff(1).clone(), x.mul_checked(&x).unwrap());
    }

    #[test]
    fn tensor_of_even_spheres_is_product_model() {
        let t = tensor(&sphere_model(2), &sphere_model(2));
        assert_eq!(t.ctx().len(), 4);
        let degs: Vec<usize> = t.ctx().gens().iter().map(|g| g.1).collect();
        assert_eq!(degs, vec![2, 3, 2, 3]);
        // dy = x^2 and db = a^2 in the combined context
        let x = Polynomial::generator(t.ctx().clone(), 0);
        let a = Polynomial::generator(t.ctx().clone(), 2);
        assert_eq!(t.diff(1).clone(), x.mul_checked(&x).unwrap());
        assert_eq!(t.diff(3).clone(), a.mul_checked(&a).unwrap());
        assert!(t.validate(12).all_ok());
    }

    #[test]
    fn tensor_renames_clashes() {
        let t = tensor(&sphere_model(3), &sphere_model(3));
        let names: Vec<&str> = t.ctx().gens().iter().map(|g| g.0.as_str()).collect();
        assert_eq!(names, vec!["x3", "x3'"]);
    }

    #[test]
    fn apply_d_filtration_compatible() {
        // d(Lambda^{>=k}) in Lambda^{>=k} for a minimal algebra
        let alg = e53_model();
        let ctx = alg.ctx().clone();
        let a = Polynomial::generator(ctx.clone(), 2);
        let b = Polynomial::generator(ctx.clone(), 3);
        let s = Polynomial::generator(ctx.clone(), 4);
        let p = a.mul_checked(&b).unwrap().mul_checked(&s).unwrap(); // wordlength 3
        let dp = alg.apply_d(&p);
        assert!(dp.wordlength_part(0).is_zero());
        assert!(dp.wordlength_part(1).is_zero());
        assert!(dp.wordlength_part(2).is_zero());
    }
}

//! Relative Sullivan models of fibrations: assembly and validation, the
//! fiber quotient, TNHZ/TNCZ checks, the limit fibration, the degree-gap
//! criterion, and the spherical Koszul classifier.

use crate::algebra::{GradedContext, Monomial, Polynomial};
use crate::cohomology::{find_primitive, induced_on_H};
use crate::coformal::coformalize;
use crate::dga::SullivanAlgebra;
use crate::error::{Error, Result};
use crate::morphism::DgaMorphism;
use crate::rat::Rational;
use num_traits::Zero;
use std::sync::Arc;

/// A relative minimal Sullivan model: base algebra extended by fiber
/// generators, with a validated total differential.
#[derive(Debug, Clone)]
pub struct RelativeModel {
    base: SullivanAlgebra,
    total: SullivanAlgebra,
    n_base: usize,
    cutoff: usize,
}

impl RelativeModel {
    /// Build and validate the extension. The total context is the base
    /// generators followed by `fiber_gens`; `total_diff` is indexed over
    /// all generators in that order.
    pub fn assemble(
        base: SullivanAlgebra,
        fiber_gens: Vec<(String, usize)>,
        total_diff: Vec<Polynomial>,
        cutoff: usize,
    ) -> Result<RelativeModel> {
        let n_base = base.ctx().len();
        let mut gens = base.ctx().gens().to_vec();
        gens.extend(fiber_gens);
        let total_ctx = GradedContext::new(gens)?;
        // re-express supplied polynomials in the total context
        let total_diff: Vec<Polynomial> = total_diff
            .iter()
            .map(|p| reindex(p, &total_ctx))
            .collect::<Result<_>>()?;
        let total = SullivanAlgebra::new(total_ctx.clone(), total_diff)?;

        // restriction to the base must be the base differential
        for i in 0..n_base {
            let restricted = reindex(base.diff(i), &total_ctx)?;
            if total.diff(i) != &restricted {
                return Err(Error::RestrictionMismatch(format!(
                    "d({}) differs from the base differential",
                    total_ctx.name(i)
                )));
            }
            // base differentials must stay inside the base subalgebra
            if total
                .diff(i)
                .terms()
                .any(|(m, _)| m.factors().iter().any(|(g, _)| *g >= n_base))
            {
                return Err(Error::RestrictionMismatch(format!(
                    "d({}) leaves the base subalgebra",
                    total_ctx.name(i)
                )));
            }
        }
        // relative minimality: no fiber differential has a bare fiber
        // generator as a term
        for i in n_base..total_ctx.len() {
            for (m, _) in total.diff(i).terms() {
                if m.wordlength() == 1 && m.factors()[0].0 >= n_base {
                    return Err(Error::RelativeMinimalityViolation(format!(
                        "d({}) contains the linear fiber term {}",
                        total_ctx.name(i),
                        total_ctx.name(m.factors()[0].0)
                    )));
                }
            }
        }
        let report = total.validate(cutoff);
        if !report.d_squared_ok {
            return Err(Error::DSquaredViolation(
                report
                    .counterexamples
                    .first()
                    .map(|c| c.0.clone())
                    .unwrap_or_default(),
            ));
        }
        Ok(RelativeModel { base, total, n_base, cutoff })
    }

    pub fn base(&self) -> &SullivanAlgebra {
        &self.base
    }

    pub fn total(&self) -> &SullivanAlgebra {
        &self.total
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn fiber_gens(&self) -> &[(String, usize)] {
        &self.total.ctx().gens()[self.n_base..]
    }

    /// The fiber algebra (Lambda W, d-bar): kill every monomial containing
    /// a base generator.
    pub fn fiber_quotient(&self) -> Result<SullivanAlgebra> {
        let fiber_ctx = GradedContext::new(self.fiber_gens().to_vec())?;
        let mut diff = Vec::new();
        for i in self.n_base..self.total.ctx().len() {
            let mut q = Polynomial::zero(fiber_ctx.clone());
            for (m, c) in self.total.diff(i).terms() {
                if m.factors().iter().all(|(g, _)| *g >= self.n_base) {
                    let shifted = Monomial::from_factors(
                        m.factors().iter().map(|(g, e)| (g - self.n_base, *e)).collect(),
                    );
                    q.add_term(shifted, c.clone());
                }
            }
            diff.push(q);
        }
        SullivanAlgebra::new(fiber_ctx, diff)
    }

    /// The quotient morphism total -> fiber.
    pub fn fiber_projection(&self) -> Result<DgaMorphism> {
        let fiber = self.fiber_quotient()?;
        let fctx = fiber.ctx().clone();
        let assignment: Vec<Polynomial> = (0..self.total.ctx().len())
            .map(|i| {
                if i < self.n_base {
                    Polynomial::zero(fctx.clone())
                } else {
                    Polynomial::generator(fctx.clone(), i - self.n_base)
                }
            })
            .collect();
        DgaMorphism::new(self.total.clone(), fiber, assignment)
    }

    /// TNHZ holds exactly when the total algebra is minimal.
    pub fn check_tnhz(&self) -> bool {
        self.total.validate(self.cutoff).minimal
    }

    /// TNCZ: the induced map onto the fiber cohomology is surjective in
    /// every degree <= cutoff - 1.
    pub fn check_tncz(&self, cutoff: usize) -> Result<bool> {
        if cutoff < 2 {
            return Err(Error::CutoffTooSmall { given: cutoff, needed: 2 });
        }
        let proj = self.fiber_projection()?;
        Ok(induced_on_H(&proj, cutoff)?.surjective_everywhere())
    }

    /// Replace the total differential by its quadratic part, modeling the
    /// fibration of coformal limits.
    pub fn limit_fibration(&self) -> Result<RelativeModel> {
        if !self.base.is_purely_quadratic() {
            return Err(Error::BaseNotQuadratic);
        }
        let quad_total = self.total.quadratic_part()?;
        let diff: Vec<Polynomial> = quad_total.diffs().to_vec();
        let mut base = self.base.clone();
        base.wedge_of_spheres = self.base.wedge_of_spheres.clone();
        RelativeModel::assemble(base, self.fiber_gens().to_vec(), diff, self.cutoff)
    }

    /// Degree-gap criterion: fiber of homotopy dimension n over an
    /// m-connected base with n <= m + 3 forces a purely quadratic total
    /// differential. Returns (applies, n, m).
    pub fn degree_gap_criterion(&self) -> Result<(bool, usize, usize)> {
        if !self.base.is_purely_quadratic() {
            return Err(Error::HypothesesNotMet("base is not purely quadratic".into()));
        }
        if !self.fiber_quotient()?.is_purely_quadratic() {
            return Err(Error::HypothesesNotMet("fiber quotient is not purely quadratic".into()));
        }
        if !self.total.validate(self.cutoff).minimal {
            return Err(Error::HypothesesNotMet("total model is not minimal".into()));
        }
        let n = self
            .fiber_gens()
            .iter()
            .map(|(_, d)| *d)
            .max()
            .ok_or_else(|| Error::HypothesesNotMet("no fiber generators".into()))?;
        let m = self
            .base
            .ctx()
            .gens()
            .iter()
            .map(|(_, d)| *d)
            .min()
            .ok_or_else(|| Error::HypothesesNotMet("no base generators".into()))?
            - 1;
        let applies = n <= m + 3;
        if applies {
            assert!(
                self.total.is_purely_quadratic(),
                "degree-gap criterion applies but the total differential is not quadratic"
            );
        }
        Ok((applies, n, m))
    }

    /// Classify per the spherical Koszul cases. Never claims
    /// non-Koszulness.
    pub fn spherical_koszul_classifier(&self, cutoff: usize) -> Result<KoszulVerdict> {
        let fiber = self.fiber_quotient()?;
        let n = sphere_dimension(&fiber).ok_or(Error::NotSpherical)?;
        let wedge = self
            .base
            .wedge_of_spheres
            .as_ref()
            .ok_or_else(|| {
                Error::HypothesesNotMet("base lacks wedge-of-spheres provenance".into())
            })?
            .clone();

        // case (1): odd sphere with rationally nontrivial fiber inclusion
        if n % 2 == 1 {
            let proj = self.fiber_projection()?;
            let induced = induced_on_H(&proj, cutoff)?;
            let nontrivial = induced.degrees.get(n).map_or(false, |d| {
                (0..d.matrix.rows)
                    .any(|i| (0..d.matrix.cols).any(|j| !d.matrix.at(i, j).is_zero()))
            });
            if nontrivial {
                return Ok(KoszulVerdict::KoszulByCase(1));
            }
            return Ok(KoszulVerdict::NoVerdict);
        }

        // even sphere from here on
        let tnhz = self.check_tnhz();
        let tncz = self.check_tncz(cutoff)?;

        // case (3): base a wedge of odd-dimensional spheres, TNCZ
        if wedge.sphere_dims.iter().all(|d| d % 2 == 1) && tncz {
            return Ok(KoszulVerdict::KoszulByCase(3));
        }

        // case (2): TNHZ and TNCZ, with the two claims checked exactly on
        // the limit fibration
        if tnhz && tncz {
            let limit = self.limit_fibration()?;
            let ltotal = limit.total();
            // fiber generators a (degree n) and b (degree 2n - 1)
            let a_idx = self.n_base
                + self
                    .fiber_gens()
                    .iter()
                    .position(|(_, d)| *d == n)
                    .ok_or(Error::NotSpherical)?;
            let b_idx = self.n_base
                + self
                    .fiber_gens()
                    .iter()
                    .position(|(_, d)| *d == 2 * n - 1)
                    .ok_or(Error::NotSpherical)?;
            let a = Polynomial::generator(ltotal.ctx().clone(), a_idx);
            // theta(b) = a^2 - d1(b)
            let a_sq = a.mul_checked(&a)?;
            let theta = a_sq.sub(ltotal.diff(b_idx));
            // claim A: [a] and [theta(b)] are classes and their product is 0
            if !ltotal.apply_d(&a).is_zero() || !ltotal.apply_d(&theta).is_zero() {
                return Ok(KoszulVerdict::NoVerdict);
            }
            let product = a.mul_checked(&theta)?;
            let claim_a = theta.is_zero()
                || find_primitive(ltotal, &product, 0)?.is_some();
            // claim B: cup length of the limit total is at most 2
            let claim_b =
                crate::cohomology::cup_length_evidence(ltotal, cutoff, 3)? <= 2;
            if claim_a && claim_b {
                return Ok(KoszulVerdict::KoszulByCase(2));
            }
        }
        Ok(KoszulVerdict::NoVerdict)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KoszulVerdict {
    KoszulByCase(u8),
    NoVerdict,
}

/// Is this algebra a sphere model? Returns the sphere dimension.
fn sphere_dimension(alg: &SullivanAlgebra) -> Option<usize> {
    let gens = alg.ctx().gens();
    match gens {
        [(_, n)] if n % 2 == 1 && alg.diff(0).is_zero() => Some(*n),
        [(_, n), (_, m)] if n % 2 == 0 && *m == 2 * n - 1 => {
            let x = Polynomial::generator(alg.ctx().clone(), 0);
            let x_sq = x.mul_checked(&x).ok()?;
            if alg.diff(0).is_zero() && alg.diff(1) == &x_sq {
                Some(*n)
            } else {
                None
            }
        }
        _ => None,
    }
}

/// Re-express a polynomial in a (super-)context that contains its own
/// generators, matched by name.
fn reindex(p: &Polynomial, ctx: &Arc<GradedContext>) -> Result<Polynomial> {
    let src = p.ctx();
    let map: Vec<usize> = (0..src.len())
        .map(|i| {
            ctx.index_of(src.name(i)).ok_or_else(|| {
                Error::Other(format!("generator {} missing from total context", src.name(i)))
            })
        })
        .collect::<Result<_>>()?;
    let mut out = Polynomial::zero(ctx.clone());
    for (m, c) in p.terms() {
        let factors: Vec<(usize, u32)> =
            m.factors().iter().map(|(g, e)| (map[*g], *e)).collect();
        let mut word = Vec::new();
        for (g, e) in &factors {
            for _ in 0..*e {
                word.push(*g);
            }
        }
        let (sign, mono) = crate::algebra::normalize(ctx, &word);
        if sign == 0 {
            continue;
        }
        out.add_term(mono, c * Rational::from_integer(sign.into()));
    }
    Ok(out)
}

/// Used by whole-pipeline checks: a TNHZ extension whose limit has small
/// Toomer invariant must coformalize.
pub fn coformal_pipeline_applies(rm: &RelativeModel, cutoff: usize) -> Result<bool> {
    if !rm.check_tnhz() {
        return Ok(false);
    }
    if !rm.base().is_purely_quadratic() || !rm.fiber_quotient()?.is_purely_quadratic() {
        return Ok(false);
    }
    let limit = rm.limit_fibration()?;
    let e0 = crate::cohomology::toomer(limit.total(), cutoff)?;
    if e0.value > 2 {
        return Ok(false);
    }
    Ok(coformalize(rm.total(), cutoff)?.is_certified())
}

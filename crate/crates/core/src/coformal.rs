//! The coformal limit and the coformalization algorithm: degree-ascending
//! elimination of higher-wordlength differential terms, producing either a
//! certified isomorphism onto the quadratic part or an explicit
//! obstruction class.

use crate::algebra::Polynomial;
use crate::cohomology::{find_primitive, toomer, ToomerVerdict};
use crate::dga::SullivanAlgebra;
use crate::error::{Error, Result};
use crate::morphism::{ascending_degree_order, DgaMorphism};
use crate::search::{parametrized_iso_search, SearchVerdict};

/// Outcome of the elimination.
#[derive(Debug, Clone)]
pub enum CoformalKind {
    /// A validated isomorphism onto the quadratic part, identity on linear
    /// parts.
    CertifiedCoformal(DgaMorphism),
    /// Elimination stalled at `generator`: its wordlength >= 3 tail is a
    /// nonzero class of the quadratic cohomology.
    Obstructed { generator: String, class: Polynomial },
    Inconclusive(String),
}

#[derive(Debug, Clone)]
pub struct CoformalVerdict {
    pub cutoff: usize,
    pub kind: CoformalKind,
    /// The substitutions performed, as (generator name, subtracted term).
    pub substitutions: Vec<(String, Polynomial)>,
}

impl CoformalVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self.kind, CoformalKind::CertifiedCoformal(_))
    }
}

/// The quadratic-part algebra (same generators, differential truncated to
/// wordlength 2).
pub fn coformal_limit(alg: &SullivanAlgebra) -> Result<SullivanAlgebra> {
    alg.quadratic_part()
}

/// Eliminate non-quadratic differential terms generator by generator in
/// ascending degree. Each step solves d z = theta(v) with z of wordlength
/// >= 2 against the full current differential and substitutes v -> v - z.
pub fn coformalize(alg: &SullivanAlgebra, cutoff: usize) -> Result<CoformalVerdict> {
    let report = alg.validate(cutoff + 1);
    if !report.minimal {
        return Err(Error::NotMinimal(
            report.counterexamples.first().map(|c| c.0.clone()).unwrap_or_default(),
        ));
    }
    let mut current = alg.clone();
    let mut iso = DgaMorphism::identity(alg);
    let mut substitutions = Vec::new();
    for v in ascending_degree_order(alg) {
        let degree = alg.ctx().degree(v);
        let name = alg.ctx().name(v).to_string();
        let theta = current.diff(v).wordlength_at_least(3);
        if theta.is_zero() {
            continue;
        }
        if degree > cutoff {
            return Ok(CoformalVerdict {
                cutoff,
                kind: CoformalKind::Inconclusive(format!(
                    "generator {name} of degree {degree} lies beyond the cutoff {cutoff}"
                )),
                substitutions,
            });
        }
        let quadratic = current.quadratic_part()?;
        if !quadratic.apply_d(&theta).is_zero() {
            return Err(Error::ClosednessViolation(format!(
                "residual differential of {name} is not closed under the quadratic part"
            )));
        }
        let z = match find_primitive(&current, &theta, 2) {
            Ok(z) => z,
            Err(Error::NotACocycle) => {
                return Err(Error::ClosednessViolation(format!(
                    "residual differential of {name} is not a cocycle"
                )))
            }
            Err(e) => return Err(e),
        };
        let Some(z) = z else {
            // no primitive against the full d; certify the obstruction in
            // the quadratic cohomology before reporting it
            return Ok(match find_primitive(&quadratic, &theta, 0)? {
                None => CoformalVerdict {
                    cutoff,
                    kind: CoformalKind::Obstructed { generator: name, class: theta },
                    substitutions,
                },
                Some(_) => CoformalVerdict {
                    cutoff,
                    kind: CoformalKind::Inconclusive(format!(
                        "residual differential of {name} is exact for the quadratic part \
                         but has no wordlength >= 2 primitive for the full differential"
                    )),
                    substitutions,
                },
            });
        };
        // rewrite the algebra in the generator v' = v - z (so v = v' + z)
        let ctx = current.ctx().clone();
        let mut new_diff: Vec<Polynomial> = (0..ctx.len())
            .map(|w| {
                let vz = Polynomial::generator(ctx.clone(), v).add_checked(&z).expect("same ctx");
                current.diff(w).substitute_gen(v, &vz)
            })
            .collect();
        new_diff[v] = current.diff(v).wordlength_part(2);
        let next = SullivanAlgebra::new(ctx.clone(), new_diff)?;
        debug_assert_eq!(next.diff(v), &current.diff(v).wordlength_part(2));

        // step map current -> next: v -> v + z, everything else fixed
        let mut assignment: Vec<Polynomial> =
            (0..ctx.len()).map(|w| Polynomial::generator(ctx.clone(), w)).collect();
        assignment[v] = assignment[v].add_checked(&z).expect("same ctx");
        let step = DgaMorphism::new(current.clone(), next.clone(), assignment)?;
        debug_assert!(step.validate(cutoff + 1).all_ok());
        iso = iso.compose(&step)?;
        substitutions.push((name, z));
        current = next;
    }
    if !current.is_purely_quadratic() {
        return Ok(CoformalVerdict {
            cutoff,
            kind: CoformalKind::Inconclusive(
                "non-quadratic terms remain beyond the cutoff".into(),
            ),
            substitutions,
        });
    }
    Ok(CoformalVerdict { cutoff, kind: CoformalKind::CertifiedCoformal(iso), substitutions })
}

/// Bundled coformality analysis: the limit, its Toomer invariant, the
/// elimination verdict, and (when elimination is obstructed) the
/// isomorphism search against the limit.
#[derive(Debug, Clone)]
pub struct CoformalityReport {
    pub cutoff: usize,
    pub limit: SullivanAlgebra,
    pub limit_toomer: ToomerVerdict,
    pub verdict: CoformalVerdict,
    pub search: Option<SearchVerdict>,
    /// `Some(true)` when certified, `Some(false)` when the search refutes
    /// every isomorphism, `None` otherwise.
    pub coformal: Option<bool>,
    /// cat_0 of the limit (always coformal, so e_0 = cat_0 there).
    pub cat0_limit: usize,
    /// cat_0 of the algebra itself, reported only under certification.
    pub cat0: Option<usize>,
}

pub fn coformality_report(alg: &SullivanAlgebra, cutoff: usize) -> Result<CoformalityReport> {
    let limit = coformal_limit(alg)?;
    let limit_toomer = toomer(&limit, cutoff)?;
    let verdict = coformalize(alg, cutoff)?;
    let (search, coformal) = match &verdict.kind {
        CoformalKind::CertifiedCoformal(_) => (None, Some(true)),
        CoformalKind::Obstructed { .. } => {
            let sv = parametrized_iso_search(alg, &limit, cutoff, 4);
            let answer = match &sv {
                SearchVerdict::IsoFound(_) => Some(true),
                SearchVerdict::NoIsoExists(_) => Some(false),
                SearchVerdict::Inconclusive(_) => None,
            };
            (Some(sv), answer)
        }
        CoformalKind::Inconclusive(_) => (None, None),
    };
    let cat0_limit = limit_toomer.value;
    let cat0 = if coformal == Some(true) { Some(cat0_limit) } else { None };
    Ok(CoformalityReport {
        cutoff,
        limit,
        limit_toomer,
        verdict,
        search,
        coformal,
        cat0_limit,
        cat0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dga::sphere_model;
    use crate::fixtures::{cp3_model, e53_model, e54_model};

    fn assert_identity_linear_part(phi: &DgaMorphism) {
        for i in 0..phi.source().ctx().len() {
            let lin: Vec<Polynomial> = phi.linear_part();
            assert_eq!(lin[i], Polynomial::generator(phi.target().ctx().clone(), i));
        }
    }

    #[test]
    fn limit_is_idempotent() {
        for alg in [e53_model(), e54_model(), cp3_model(), sphere_model(2)] {
            let l = coformal_limit(&alg).unwrap();
            assert_eq!(coformal_limit(&l).unwrap().diffs(), l.diffs());
            assert!(l.is_purely_quadratic());
        }
    }

    #[test]
    fn quadratic_algebra_certifies_with_identity() {
        let alg = sphere_model(2);
        let v = coformalize(&alg, 8).unwrap();
        assert!(v.substitutions.is_empty());
        match v.kind {
            CoformalKind::CertifiedCoformal(phi) => {
                assert!(phi.validate(8).all_ok());
                assert_identity_linear_part(&phi);
            }
            k => panic!("expected certification, got {k:?}"),
        }
    }

    #[test]
    fn e54_certifies_with_single_elimination() {
        let alg = e54_model();
        let v = coformalize(&alg, 10).unwrap();
        assert_eq!(v.substitutions.len(), 1);
        let (name, z) = &v.substitutions[0];
        assert_eq!(name, "y");
        // the subtracted term is x*a
        let ctx = alg.ctx().clone();
        let xa = Polynomial::generator(ctx.clone(), 0)
            .mul_checked(&Polynomial::generator(ctx, 2))
            .unwrap();
        assert_eq!(z, &xa);
        match v.kind {
            CoformalKind::CertifiedCoformal(phi) => {
                assert!(phi.validate(10).all_ok());
                assert_identity_linear_part(&phi);
                assert_eq!(phi.target().diffs(), alg.quadratic_part().unwrap().diffs());
            }
            k => panic!("expected certification, got {k:?}"),
        }
    }

    #[test]
    fn e53_obstructed_at_s() {
        let alg = e53_model();
        let v = coformalize(&alg, 12).unwrap();
        match v.kind {
            CoformalKind::Obstructed { generator, class } => {
                assert_eq!(generator, "s");
                assert_eq!(class.homogeneous_degree(), Some(10));
                assert!(class.max_wordlength() >= 3);
                // the class is genuinely nonzero in quadratic cohomology
                let quad = alg.quadratic_part().unwrap();
                assert!(find_primitive(&quad, &class, 0).unwrap().is_none());
            }
            k => panic!("expected obstruction, got {k:?}"),
        }
    }

    #[test]
    fn report_e54() {
        let r = coformality_report(&e54_model(), 10).unwrap();
        assert_eq!(r.coformal, Some(true));
        assert_eq!(r.cat0_limit, 2);
        assert_eq!(r.cat0, Some(2));
        assert!(r.search.is_none());
    }

    #[test]
    fn report_e53() {
        let r = coformality_report(&e53_model(), 14).unwrap();
        assert_eq!(r.coformal, Some(false));
        assert_eq!(r.cat0_limit, 3);
        assert_eq!(r.cat0, None);
        assert!(matches!(r.search, Some(SearchVerdict::NoIsoExists(_))));
    }

    #[test]
    fn report_cp3() {
        let r = coformality_report(&cp3_model(), 10).unwrap();
        assert_eq!(r.coformal, Some(false));
        assert_eq!(r.cat0_limit, 4);
        assert!(matches!(r.search, Some(SearchVerdict::NoIsoExists(_))));
    }

    #[test]
    fn rejects_non_minimal() {
        // d y = x is a linear differential term: not minimal
        let ctx =
            crate::algebra::GradedContext::new(vec![("y".into(), 3), ("x".into(), 4)]).unwrap();
        let alg = SullivanAlgebra::new(
            ctx.clone(),
            vec![Polynomial::generator(ctx.clone(), 1), Polynomial::zero(ctx)],
        )
        .unwrap();
        assert!(matches!(coformalize(&alg, 8), Err(Error::NotMinimal(_))));
    }
}

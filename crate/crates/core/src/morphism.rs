//! Morphisms of Sullivan algebras: validation, linear part, composition,
//! and degree-by-degree extension solving.

use crate::algebra::{basis, Polynomial};
use crate::dga::SullivanAlgebra;
use crate::error::{Error, Result};
use crate::rat::{RatMatrix, Rational};
use num_traits::Zero;

/// A morphism of Sullivan algebras, stored as the polynomial assigned to
/// each source generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DgaMorphism {
    source: SullivanAlgebra,
    target: SullivanAlgebra,
    assignment: Vec<Polynomial>,
}

/// Validation outcome for a morphism.
#[derive(Debug, Clone)]
pub struct MorphismReport {
    pub degree_ok: bool,
    pub commutes: bool,
    pub cutoff: usize,
    /// (generator name, phi(dg) - d(phi g)) for each failing generator
    pub witnesses: Vec<(String, Polynomial)>,
}

impl MorphismReport {
    pub fn all_ok(&self) -> bool {
        self.degree_ok && self.commutes
    }
}

impl DgaMorphism {
    pub fn new(
        source: SullivanAlgebra,
        target: SullivanAlgebra,
        assignment: Vec<Polynomial>,
    ) -> Result<Self> {
        if assignment.len() != source.ctx().len() {
            return Err(Error::Other("assignment must cover every source generator".into()));
        }
        for (i, p) in assignment.iter().enumerate() {
            if *p.ctx().as_ref() != *target.ctx().as_ref() {
                return Err(Error::MixedContexts);
            }
            if !p.is_zero() && p.homogeneous_degree() != Some(source.ctx().degree(i)) {
                return Err(Error::Other(format!(
                    "phi({}) must be homogeneous of degree {}",
                    source.ctx().name(i),
                    source.ctx().degree(i)
                )));
            }
        }
        Ok(DgaMorphism { source, target, assignment })
    }

    pub fn identity(alg: &SullivanAlgebra) -> Self {
        let assignment =
            (0..alg.ctx().len()).map(|i| Polynomial::generator(alg.ctx().clone(), i)).collect();
        DgaMorphism { source: alg.clone(), target: alg.clone(), assignment }
    }

    pub fn source(&self) -> &SullivanAlgebra {
        &self.source
    }

    pub fn target(&self) -> &SullivanAlgebra {
        &self.target
    }

    pub fn assignment(&self, i: usize) -> &Polynomial {
        &self.assignment[i]
    }

    pub fn assignments(&self) -> &[Polynomial] {
        &self.assignment
    }

    /// Apply the morphism multiplicatively to a source polynomial.
    pub fn apply(&self, p: &Polynomial) -> Polynomial {
        let tctx = self.target.ctx().clone();
        let mut out = Polynomial::zero(tctx.clone());
        for (m, c) in p.terms() {
            let mut acc = Polynomial::from_term(tctx.clone(), crate::algebra::Monomial::one(), c.clone());
            for g in m.word() {
                acc = acc.mul_checked(&self.assignment[g]).expect("mixed contexts");
                if acc.is_zero() {
                    break;
                }
            }
            out = out.add_checked(&acc).expect("mixed contexts");
        }
        out
    }

    /// Check degree preservation and phi(dg) = d(phi g) on generators of
    /// degree < cutoff.
    pub fn validate(&self, cutoff: usize) -> MorphismReport {
        let mut degree_ok = true;
        let mut witnesses = Vec::new();
        for (i, p) in self.assignment.iter().enumerate() {
            if !p.is_zero() && p.homogeneous_degree() != Some(self.source.ctx().degree(i)) {
                degree_ok = false;
                witnesses.push((self.source.ctx().name(i).to_string(), p.clone()));
            }
        }
        let degree_failures = witnesses.len();
        for i in 0..self.assignment.len() {
            if self.source.ctx().degree(i) >= cutoff {
                continue;
            }
            let lhs = self.apply(self.source.diff(i));
            let rhs = self.target.apply_d(&self.assignment[i]);
            let diff = lhs.sub(&rhs);
            if !diff.is_zero() {
                witnesses.push((self.source.ctx().name(i).to_string(), diff));
            }
        }
        let commutes = witnesses.len() == degree_failures;
        MorphismReport { degree_ok, commutes, cutoff, witnesses }
    }

    /// The wordlength-1 truncation of each assignment: Q(phi).
    pub fn linear_part(&self) -> Vec<Polynomial> {
        self.assignment.iter().map(|p| p.wordlength_part(1)).collect()
    }

    /// Matrix of Q(phi) in the given degree: rows indexed by target
    /// generators of that degree, columns by source generators.
    pub fn linear_part_matrix(&self, degree: usize) -> RatMatrix {
        let src: Vec<usize> = (0..self.source.ctx().len())
            .filter(|&i| self.source.ctx().degree(i) == degree)
            .collect();
        let tgt: Vec<usize> = (0..self.target.ctx().len())
            .filter(|&i| self.target.ctx().degree(i) == degree)
            .collect();
        let mut m = RatMatrix::zeros(tgt.len(), src.len());
        for (j, &sg) in src.iter().enumerate() {
            let lin = self.assignment[sg].wordlength_part(1);
            for (mono, c) in lin.terms() {
                let tg = mono.word()[0];
                if let Some(i) = tgt.iter().position(|&t| t == tg) {
                    m.set(i, j, c.clone());
                }
            }
        }
        m
    }

    /// True when the linear part is invertible in every generator degree.
    pub fn linear_part_invertible(&self) -> bool {
        let mut degrees: Vec<usize> = self
            .source
            .ctx()
            .gens()
            .iter()
            .chain(self.target.ctx().gens())
            .map(|g| g.1)
            .collect();
        degrees.sort_unstable();
        degrees.dedup();
        degrees.iter().all(|&d| {
            let m = self.linear_part_matrix(d);
            m.rows == m.cols && m.rank() == m.rows
        })
    }

    /// Lambda(Q phi): the induced morphism between the quadratic parts.
    pub fn quadratic_model_map(&self) -> Result<DgaMorphism> {
        DgaMorphism::new(
            self.source.quadratic_part()?,
            self.target.quadratic_part()?,
            self.linear_part(),
        )
    }

    /// self: A -> B composed with other: B -> C, giving A -> C.
    pub fn compose(&self, other: &DgaMorphism) -> Result<DgaMorphism> {
        if *self.target.ctx().as_ref() != *other.source.ctx().as_ref() {
            return Err(Error::MixedContexts);
        }
        let assignment = self.assignment.iter().map(|p| other.apply(p)).collect();
        DgaMorphism::new(self.source.clone(), other.target.clone(), assignment)
    }
}

/// Generator indices sorted by (degree, declaration order).
pub fn ascending_degree_order(alg: &SullivanAlgebra) -> Vec<usize> {
    let mut order: Vec<usize> = (0..alg.ctx().len()).collect();
    order.sort_by_key(|&i| (alg.ctx().degree(i), i));
    order
}

/// Extend a partial assignment to a full morphism by solving, degree by
/// degree, the linear constraint phi(dg) = d(phi g) for each unassigned
/// generator. Returns `None` when some constraint is unsolvable.
pub fn extend_degreewise(
    source: &SullivanAlgebra,
    target: &SullivanAlgebra,
    seed: &[Option<Polynomial>],
    cutoff: usize,
) -> Result<Option<DgaMorphism>> {
    assert_eq!(seed.len(), source.ctx().len());
    let mut assignment: Vec<Option<Polynomial>> = seed.to_vec();
    for &g in &ascending_degree_order(source) {
        let deg = source.ctx().degree(g);
        if deg > cutoff {
            // beyond the cutoff nothing constrains the generator; map to 0
            if assignment[g].is_none() {
                assignment[g] = Some(Polynomial::zero(target.ctx().clone()));
            }
            continue;
        }
        let dg = source.diff(g);
        // phi(dg): every generator in dg has strictly lower degree in a
        // minimal simply connected algebra, hence is already assigned
        let phi_dg = apply_partial(&assignment, target, dg).ok_or_else(|| {
            Error::SeedInvalid(format!(
                "d({}) involves a generator of the same or higher degree",
                source.ctx().name(g)
            ))
        })?;
        if let Some(p) = &assignment[g] {
            let check = target.apply_d(p).sub(&phi_dg);
            if !check.is_zero() {
                return Err(Error::SeedInvalid(format!(
                    "seed does not commute with d on {}",
                    source.ctx().name(g)
                )));
            }
            continue;
        }
        let dom = basis(target.ctx(), deg, 0, None);
        let codom = basis(target.ctx(), deg + 1, 0, None);
        let mut d_mat = RatMatrix::zeros(codom.len(), dom.len());
        for (j, m) in dom.iter().enumerate() {
            let dm = target.apply_d(&Polynomial::from_term(
                target.ctx().clone(),
                m.clone(),
                Rational::from_integer(1.into()),
            ));
            for (mono, c) in dm.terms() {
                let i = codom.iter().position(|b| b == mono).expect("degree mismatch");
                d_mat.set(i, j, c.clone());
            }
        }
        let rhs: Vec<Rational> = if phi_dg.is_zero() {
            vec![Rational::zero(); codom.len()]
        } else {
            phi_dg.coords(&codom)
        };
        match d_mat.solve_affine(&rhs) {
            Some((x, _)) => {
                assignment[g] = Some(Polynomial::from_coords(target.ctx().clone(), &dom, &x));
            }
            None => return Ok(None),
        }
    }
    let full: Vec<Polynomial> = assignment.into_iter().map(|p| p.unwrap()).collect();
    Ok(Some(DgaMorphism::new(source.clone(), target.clone(), full)?))
}

/// Apply a partial assignment to a polynomial; `None` if it touches an
/// unassigned generator (with a nonzero contribution).
fn apply_partial(
    assignment: &[Option<Polynomial>],
    target: &SullivanAlgebra,
    p: &Polynomial,
) -> Option<Polynomial> {
    let tctx = target.ctx().clone();
    let mut out = Polynomial::zero(tctx.clone());
    for (m, c) in p.terms() {
        let mut acc = Polynomial::from_term(tctx.clone(), crate::algebra::Monomial::one(), c.clone());
        for g in m.word() {
            acc = acc.mul_checked(assignment[g].as_ref()?).expect("mixed contexts");
        }
        out = out.add_checked(&acc).expect("mixed contexts");
    }
    Some(out)
}

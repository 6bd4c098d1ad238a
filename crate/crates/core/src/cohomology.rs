//! Degree-by-degree cohomology of Sullivan algebras: representatives,
//! primitive solving, induced maps, word-length quotients, the Toomer
//! invariant, and cup-length evidence.

use crate::algebra::{basis, Monomial, Polynomial};
use crate::dga::SullivanAlgebra;
use crate::error::{Error, Result};
use crate::morphism::DgaMorphism;
use crate::rat::{RatMatrix, Rational};
use num_traits::{One, Zero};

/// Cohomology of one degree: canonical representative cocycles and a
/// canonical basis of the coboundary space.
#[derive(Debug, Clone)]
pub struct DegreeCohomology {
    pub degree: usize,
    pub dim: usize,
    pub representatives: Vec<Polynomial>,
    pub coboundary_basis: Vec<Polynomial>,
}

/// Cohomology in all degrees <= cutoff - 1 (one degree of safety margin:
/// H^k needs cochains in degree k+1).
#[derive(Debug, Clone)]
pub struct CohomologyTable {
    pub cutoff: usize,
    pub degrees: Vec<DegreeCohomology>,
}

impl CohomologyTable {
    pub fn dim(&self, degree: usize) -> usize {
        self.degrees.get(degree).map_or(0, |d| d.dim)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.dim).collect()
    }
}

/// How far a Toomer verdict can be trusted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ToomerCertainty {
    ExactUpToCutoff,
    LowerBoundOnly,
}

/// e_0 verdict: the least r such that H(rho_r) is injective in all checked
/// degrees, with a non-injectivity witness at r - 1.
#[derive(Debug, Clone)]
pub struct ToomerVerdict {
    pub value: usize,
    pub cutoff: usize,
    pub certainty: ToomerCertainty,
    /// (degree, class) where injectivity of rho_{value-1} fails
    pub witness: Option<(usize, Polynomial)>,
}

/// An incremental row-echelon stack used to pick canonical complements.
struct RowStack {
    cols: usize,
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl RowStack {
    fn new(cols: usize) -> Self {
        RowStack { cols, rows: Vec::new(), pivots: Vec::new() }
    }

    fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !v[p].is_zero() {
                let f = v[p].clone();
                for j in 0..self.cols {
                    let x = &v[j] - &f * &row[j];
                    v[j] = x;
                }
            }
        }
        v
    }

    /// Reduce and, if a nonzero residue remains, normalize its leading
    /// coefficient to 1 and absorb it. Returns the residue when added.
    fn insert(&mut self, v: &[Rational]) -> Option<Vec<Rational>> {
        let mut r = self.reduce(v);
        let p = r.iter().position(|x| !x.is_zero())?;
        let lead = r[p].clone();
        for x in r.iter_mut() {
            *x = &*x / &lead;
        }
        self.rows.push(r.clone());
        self.pivots.push(p);
        Some(r)
    }
}

/// The matrix of d from degree k to degree k+1 in the monomial bases.
pub fn d_matrix(alg: &SullivanAlgebra, k: usize) -> (RatMatrix, Vec<Monomial>, Vec<Monomial>) {
    let dom = basis(alg.ctx(), k, 0, None);
    let codom = basis(alg.ctx(), k + 1, 0, None);
    let mut m = RatMatrix::zeros(codom.len(), dom.len());
    for (j, mono) in dom.iter().enumerate() {
        let dm = alg.apply_d(&Polynomial::from_term(alg.ctx().clone(), mono.clone(), Rational::one()));
        for (t, c) in dm.terms() {
            let i = codom.iter().position(|b| b == t).expect("d must raise degree by 1");
            m.set(i, j, c.clone());
        }
    }
    (m, dom, codom)
}

/// Exact cohomology dimensions and canonical representatives in degrees
/// <= cutoff - 1.
pub fn betti(alg: &SullivanAlgebra, cutoff: usize) -> Result<CohomologyTable> {
    if cutoff < 1 {
        return Err(Error::CutoffTooSmall { given: cutoff, needed: 1 });
    }
    let mut degrees = Vec::new();
    let mut prev: Option<(RatMatrix, Vec<Monomial>)> = None; // d at k-1 with its domain basis
    for k in 0..cutoff {
        let (dk, dom, _codom) = d_matrix(alg, k);
        let cocycles = dk.kernel_basis();
        // canonical coboundary basis: image of d_{k-1}
        let cobound: Vec<Vec<Rational>> = match &prev {
            Some((dk1, _)) => dk1.image_basis(),
            None => Vec::new(),
        };
        let mut stack = RowStack::new(dom.len());
        for b in &cobound {
            stack.insert(b);
        }
        let mut reps = Vec::new();
        for z in &cocycles {
            if let Some(residue) = stack.insert(z) {
                reps.push(Polynomial::from_coords(alg.ctx().clone(), &dom, &residue));
            }
        }
        degrees.push(DegreeCohomology {
            degree: k,
            dim: reps.len(),
            representatives: reps,
            coboundary_basis: cobound
                .iter()
                .map(|v| Polynomial::from_coords(alg.ctx().clone(), &dom, v))
                .collect(),
        });
        prev = Some((dk, dom));
    }
    Ok(CohomologyTable { cutoff, degrees })
}

/// Solve d(z') = z with every term of z' of wordlength >= min_wordlength.
/// The choice is RREF-canonical. `None` when no primitive exists.
pub fn find_primitive(
    alg: &SullivanAlgebra,
    z: &Polynomial,
    min_wordlength: usize,
) -> Result<Option<Polynomial>> {
    if z.is_zero() {
        return Ok(Some(Polynomial::zero(alg.ctx().clone())));
    }
    if !alg.apply_d(z).is_zero() {
        return Err(Error::NotACocycle);
    }
    let n = z.homogeneous_degree().ok_or(Error::NotACocycle)?;
    if n == 0 {
        return Ok(None);
    }
    let dom = basis(alg.ctx(), n - 1, min_wordlength, None);
    let codom = basis(alg.ctx(), n, 0, None);
    let mut m = RatMatrix::zeros(codom.len(), dom.len());
    for (j, mono) in dom.iter().enumerate() {
        let dm = alg.apply_d(&Polynomial::from_term(alg.ctx().clone(), mono.clone(), Rational::one()));
        for (t, c) in dm.terms() {
            let i = codom.iter().position(|b| b == t).expect("degree mismatch");
            m.set(i, j, c.clone());
        }
    }
    let rhs = z.coords(&codom);
    Ok(m
        .solve_affine(&rhs)
        .map(|(x, _)| Polynomial::from_coords(alg.ctx().clone(), &dom, &x)))
}

/// Express the class of a cocycle in a table's representative coordinates.
/// Returns `None` if the polynomial is not a cocycle class in that degree.
pub fn class_coords(
    alg: &SullivanAlgebra,
    table: &CohomologyTable,
    k: usize,
    p: &Polynomial,
) -> Option<Vec<Rational>> {
    let entry = table.degrees.get(k)?;
    let dom = basis(alg.ctx(), k, 0, None);
    if p.is_zero() {
        return Some(vec![Rational::zero(); entry.dim]);
    }
    // solve [coboundaries | reps] c = p
    let n_cob = entry.coboundary_basis.len();
    let n_rep = entry.representatives.len();
    let mut m = RatMatrix::zeros(dom.len(), n_cob + n_rep);
    for (j, b) in entry.coboundary_basis.iter().enumerate() {
        for (i, v) in b.coords(&dom).into_iter().enumerate() {
            m.set(i, j, v);
        }
    }
    for (j, r) in entry.representatives.iter().enumerate() {
        for (i, v) in r.coords(&dom).into_iter().enumerate() {
            m.set(i, n_cob + j, v);
        }
    }
    let (x, _) = m.solve_affine(&p.coords(&dom))?;
    Some(x[n_cob..].to_vec())
}

/// Per-degree matrix of an induced map on cohomology, with exact
/// injectivity and surjectivity flags.
#[derive(Debug, Clone)]
pub struct InducedDegree {
    pub degree: usize,
    pub matrix: RatMatrix,
    pub injective: bool,
    pub surjective: bool,
}

#[derive(Debug, Clone)]
pub struct InducedOnH {
    pub cutoff: usize,
    pub degrees: Vec<InducedDegree>,
}

impl InducedOnH {
    pub fn injective_everywhere(&self) -> bool {
        self.degrees.iter().all(|d| d.injective)
    }

    pub fn surjective_everywhere(&self) -> bool {
        self.degrees.iter().all(|d| d.surjective)
    }
}

/// The matrices of H(phi) in the two tables' representative bases.
#[allow(non_snake_case)]
pub fn induced_on_H(phi: &DgaMorphism, cutoff: usize) -> Result<InducedOnH> {
    let src_table = betti(phi.source(), cutoff)?;
    let tgt_table = betti(phi.target(), cutoff)?;
    induced_on_H_with_tables(phi, &src_table, &tgt_table)
}

#[allow(non_snake_case)]
pub fn induced_on_H_with_tables(
    phi: &DgaMorphism,
    src_table: &CohomologyTable,
    tgt_table: &CohomologyTable,
) -> Result<InducedOnH> {
    if src_table.cutoff != tgt_table.cutoff {
        return Err(Error::CutoffMismatch(src_table.cutoff, tgt_table.cutoff));
    }
    let mut degrees = Vec::new();
    for k in 0..src_table.cutoff {
        let src_dim = src_table.dim(k);
        let tgt_dim = tgt_table.dim(k);
        let mut m = RatMatrix::zeros(tgt_dim, src_dim);
        for (j, rep) in src_table.degrees[k].representatives.iter().enumerate() {
            let img = phi.apply(rep);
            let coords = class_coords(phi.target(), tgt_table, k, &img)
                .ok_or(Error::Other("image of a cocycle is not a cocycle".into()))?;
            for (i, c) in coords.into_iter().enumerate() {
                m.set(i, j, c);
            }
        }
        let rank = m.rank();
        degrees.push(InducedDegree {
            degree: k,
            injective: rank == src_dim,
            surjective: rank == tgt_dim,
            matrix: m,
        });
    }
    Ok(InducedOnH { cutoff: src_table.cutoff, degrees })
}

/// The word-length quotient complex Lambda V / Lambda^{> r} V in one
/// degree: basis and the projected differential.
fn quotient_d_matrix(
    alg: &SullivanAlgebra,
    k: usize,
    r: usize,
) -> (RatMatrix, Vec<Monomial>, Vec<Monomial>) {
    let dom = basis(alg.ctx(), k, 0, Some(r));
    let codom = basis(alg.ctx(), k + 1, 0, Some(r));
    let mut m = RatMatrix::zeros(codom.len(), dom.len());
    for (j, mono) in dom.iter().enumerate() {
        let dm = alg.apply_d(&Polynomial::from_term(alg.ctx().clone(), mono.clone(), Rational::one()));
        for (t, c) in dm.terms() {
            if t.wordlength() <= r {
                let i = codom.iter().position(|b| b == t).expect("degree mismatch");
                m.set(i, j, c.clone());
            }
        }
    }
    (m, dom, codom)
}

/// Does H(rho_r) fail to be injective in some degree <= cutoff - 1? If so,
/// return (degree, witness class).
fn rho_noninjectivity_witness(
    alg: &SullivanAlgebra,
    table: &CohomologyTable,
    r: usize,
) -> Option<(usize, Polynomial)> {
    for k in 1..table.cutoff {
        let entry = &table.degrees[k];
        if entry.dim == 0 {
            continue;
        }
        let (qd_prev, qdom_prev, _) = quotient_d_matrix(alg, k - 1, r);
        let qdom = basis(alg.ctx(), k, 0, Some(r));
        // solve: sum c_i pi(rep_i) = d_quot(w), c != 0
        let n_rep = entry.dim;
        let n_w = qdom_prev.len();
        let mut m = RatMatrix::zeros(qdom.len(), n_rep + n_w);
        for (j, rep) in entry.representatives.iter().enumerate() {
            for (t, c) in rep.terms() {
                if t.wordlength() <= r {
                    let i = qdom.iter().position(|b| b == t).expect("basis mismatch");
                    m.set(i, j, c.clone());
                }
            }
        }
        for j in 0..n_w {
            for i in 0..qdom.len() {
                m.set(i, n_rep + j, -qd_prev.at(i, j).clone());
            }
        }
        for kv in m.kernel_basis() {
            if kv[..n_rep].iter().any(|c| !c.is_zero()) {
                let mut witness = Polynomial::zero(alg.ctx().clone());
                for (c, rep) in kv[..n_rep].iter().zip(&entry.representatives) {
                    witness = witness.add_checked(&rep.scale(c)).expect("same context");
                }
                return Some((k, witness));
            }
        }
    }
    None
}

/// The Toomer invariant e_0: the least r such that the quotient by
/// Lambda^{> r} V is injective on cohomology in all degrees <= cutoff - 1.
pub fn toomer(alg: &SullivanAlgebra, cutoff: usize) -> Result<ToomerVerdict> {
    let report = alg.validate(cutoff + 1);
    if !report.minimal {
        return Err(Error::NotMinimal(
            report.counterexamples.first().map(|c| c.0.clone()).unwrap_or_default(),
        ));
    }
    let table = betti(alg, cutoff)?;
    if (1..cutoff).all(|k| table.dim(k) == 0) {
        return Ok(ToomerVerdict { value: 0, cutoff, certainty: ToomerCertainty::ExactUpToCutoff, witness: None });
    }
    // the quotient stabilizes once r reaches the maximal wordlength present
    let r_max = (0..=cutoff)
        .flat_map(|d| basis(alg.ctx(), d, 0, None))
        .map(|m| m.wordlength())
        .max()
        .unwrap_or(1);
    let mut witness = None;
    for r in 1..=r_max {
        match rho_noninjectivity_witness(alg, &table, r) {
            Some(w) => witness = Some(w),
            None => {
                // monotonicity assertion: injectivity must persist at r + 1
                if r < r_max {
                    assert!(
                        rho_noninjectivity_witness(alg, &table, r + 1).is_none(),
                        "Toomer monotonicity violated at r = {r}"
                    );
                }
                return Ok(ToomerVerdict {
                    value: r,
                    cutoff,
                    certainty: ToomerCertainty::ExactUpToCutoff,
                    witness,
                });
            }
        }
    }
    Ok(ToomerVerdict { value: r_max, cutoff, certainty: ToomerCertainty::ExactUpToCutoff, witness })
}

/// The largest k <= kmax such that some k-fold product of positive-degree
/// representative classes is nonzero in H, searched exhaustively.
pub fn cup_length_evidence(alg: &SullivanAlgebra, cutoff: usize, kmax: usize) -> Result<usize> {
    assert!(kmax <= 4, "cup-length search capped at 4");
    let table = betti(alg, cutoff)?;
    let reps: Vec<&Polynomial> = table
        .degrees
        .iter()
        .skip(1)
        .flat_map(|d| d.representatives.iter())
        .collect();
    let mut best = 0;
    let mut tuple = Vec::new();
    search_products(alg, &table, &reps, kmax, 0, &mut tuple, &mut best, cutoff);
    Ok(best)
}

#[allow(clippy::too_many_arguments)]
fn search_products(
    alg: &SullivanAlgebra,
    table: &CohomologyTable,
    reps: &[&Polynomial],
    kmax: usize,
    start: usize,
    tuple: &mut Vec<usize>,
    best: &mut usize,
    cutoff: usize,
) {
    if !tuple.is_empty() {
        let mut prod = Polynomial::one(alg.ctx().clone());
        for &i in tuple.iter() {
            prod = prod.mul_checked(reps[i]).expect("same context");
        }
        let deg = match prod.homogeneous_degree() {
            Some(d) => d,
            None => return, // zero product: no deeper tuple can revive it
        };
        if deg > cutoff - 1 {
            return;
        }
        let coords = class_coords(alg, table, deg, &prod);
        let nonzero = coords.map_or(false, |c| c.iter().any(|x| !x.is_zero()));
        if nonzero && tuple.len() > *best {
            *best = tuple.len();
        }
        if !nonzero {
            return; // a zero class stays zero under further multiplication
        }
    }
    if tuple.len() == kmax {
        return;
    }
    for i in start..reps.len() {
        tuple.push(i);
        search_products(alg, table, reps, kmax, i, tuple, best, cutoff);
        tuple.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dga::{sphere_model, tensor};
    use crate::fixtures::{cp3_model, e53_model, e54_model};

    #[test]
    fn betti_sphere2() {
        let table = betti(&sphere_model(2), 8).unwrap();
        assert_eq!(table.dims(), vec![1, 0, 1, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn betti_cp3() {
        let table = betti(&cp3_model(), 8).unwrap();
        assert_eq!(table.dims(), vec![1, 0, 1, 0, 1, 0, 1, 0]);
    }

    #[test]
    fn betti_e54_total_is_s2_x_s5() {
        let table = betti(&e54_model(), 8).unwrap();
        assert_eq!(table.dims(), vec![1, 0, 1, 0, 0, 1, 0, 1]);
    }

    #[test]
    fn representatives_are_cocycles() {
        let alg = e53_model();
        let table = betti(&alg, 11).unwrap();
        for entry in &table.degrees {
            for rep in &entry.representatives {
                assert!(alg.apply_d(rep).is_zero());
            }
        }
    }

    #[test]
    fn find_primitive_zero() {
        let alg = e54_model();
        let z = Polynomial::zero(alg.ctx().clone());
        assert_eq!(find_primitive(&alg, &z, 0).unwrap(), Some(z));
    }

    #[test]
    fn find_primitive_e54() {
        // z = x^3 has primitive x*a of wordlength 2
        let alg = e54_model();
        let ctx = alg.ctx().clone();
        let x = Polynomial::generator(ctx.clone(), 0);
        let a = Polynomial::generator(ctx.clone(), 2);
        let x3 = x.mul_checked(&x).unwrap().mul_checked(&x).unwrap();
        let z = find_primitive(&alg, &x3, 2).unwrap().unwrap();
        assert_eq!(alg.apply_d(&z), x3);
        assert_eq!(z, x.mul_checked(&a).unwrap());
    }

    #[test]
    fn find_primitive_absent_for_e53_obstruction() {
        // in the quadratic part, u*v*a has no primitive
        let alg = e53_model().quadratic_part().unwrap();
        let ctx = alg.ctx().clone();
        let u = Polynomial::generator(ctx.clone(), 0);
        let v = Polynomial::generator(ctx.clone(), 1);
        let a = Polynomial::generator(ctx, 2);
        let z = u.mul_checked(&v).unwrap().mul_checked(&a).unwrap();
        assert!(alg.apply_d(&z).is_zero());
        assert!(find_primitive(&alg, &z, 0).unwrap().is_none());
    }

    #[test]
    fn find_primitive_rejects_non_cocycle() {
        let alg = e54_model();
        let y = Polynomial::generator(alg.ctx().clone(), 1);
        assert!(matches!(find_primitive(&alg, &y, 0), Err(Error::NotACocycle)));
    }

    #[test]
    fn induced_identity() {
        let alg = e54_model();
        let id = DgaMorphism::identity(&alg);
        let ind = induced_on_H(&id, 8).unwrap();
        assert!(ind.injective_everywhere());
        assert!(ind.surjective_everywhere());
        for d in &ind.degrees {
            assert_eq!(d.matrix, RatMatrix::identity(d.matrix.rows));
        }
    }

    #[test]
    fn induced_e54_fiber_quotient_not_surjective_in_degree_3() {
        // quotient total -> (Lambda a3, 0): H^3(total) = 0, H^3(fiber) = Q
        let total = e54_model();
        let fiber_ctx = crate::algebra::GradedContext::new(vec![("a".into(), 3)]).unwrap();
        let fiber = SullivanAlgebra::new(fiber_ctx.clone(), vec![Polynomial::zero(fiber_ctx.clone())]).unwrap();
        let phi = DgaMorphism::new(
            total,
            fiber.clone(),
            vec![
                Polynomial::zero(fiber_ctx.clone()),
                Polynomial::zero(fiber_ctx),
                Polynomial::generator(fiber.ctx().clone(), 0),
            ],
        )
        .unwrap();
        let ind = induced_on_H(&phi, 8).unwrap();
        assert!(!ind.degrees[3].surjective);
        assert!(!ind.surjective_everywhere());
    }

    #[test]
    fn toomer_spheres() {
        for n in [2usize, 3, 4, 7] {
            let v = toomer(&sphere_model(n), 4 * n).unwrap();
            assert_eq!(v.value, 1, "sphere S^{n}");
        }
    }

    #[test]
    fn toomer_limit_of_e53_is_3_with_witness() {
        let alg = e53_model().quadratic_part().unwrap();
        let v = toomer(&alg, 14).unwrap();
        assert_eq!(v.value, 3);
        let (deg, w) = v.witness.unwrap();
        assert_eq!(deg, 10); // the class of u*v*a
        assert!(!w.is_zero());
        assert!(alg.apply_d(&w).is_zero());
    }

    #[test]
    fn toomer_product_of_three_spheres_witness() {
        // S^2 x S^2 x S^9: value 3, witnessed by the class of x*a*s in
        // degree 13
        let alg = tensor(&crate::fixtures::s2_x_s2_model(), &sphere_model(9));
        let v = toomer(&alg, 14).unwrap();
        assert_eq!(v.value, 3);
        let (deg, w) = v.witness.unwrap();
        assert_eq!(deg, 13);
        assert!(alg.apply_d(&w).is_zero());
    }

    #[test]
    fn toomer_limit_of_cp3() {
        // the quadratic part has zero differential, so every class
        // survives and the wordlength-4 class x^4 (degree 8) forces 4
        let alg = cp3_model().quadratic_part().unwrap();
        let v = toomer(&alg, 10).unwrap();
        assert_eq!(v.value, 4);
    }

    #[test]
    fn cup_length_wedge_like() {
        // (Lambda(x3), 0) has H+ . H+ = 0
        assert_eq!(cup_length_evidence(&sphere_model(3), 8, 4).unwrap(), 1);
    }

    #[test]
    fn cup_length_product_of_even_spheres() {
        let t = tensor(&sphere_model(2), &sphere_model(2));
        assert_eq!(cup_length_evidence(&t, 6, 4).unwrap(), 2);
    }

    #[test]
    fn cup_length_limit_of_e53() {
        let alg = e53_model().quadratic_part().unwrap();
        assert_eq!(cup_length_evidence(&alg, 14, 4).unwrap(), 3);
    }

    #[test]
    fn kunneth_on_product() {
        let a = sphere_model(2);
        let b = sphere_model(3);
        let t = tensor(&a, &b);
        let ta = betti(&a, 8).unwrap();
        let tb = betti(&b, 8).unwrap();
        let tt = betti(&t, 8).unwrap();
        for k in 0..8 {
            let expected: usize = (0..=k).map(|i| ta.dim(i) * tb.dim(k - i)).sum();
            assert_eq!(tt.dim(k), expected, "degree {k}");
        }
    }
}

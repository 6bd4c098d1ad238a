//! Graded Lie algebras over the rationals: validation, free graded Lie
//! algebras on a Lyndon-word basis, the Chevalley-Eilenberg quadratic
//! Sullivan model, and its inverse on purely quadratic algebras.
//!
//! Sign convention (fixed once, enforced by the round-trip test): with Lie
//! basis x_p of degree n_p and Sullivan generators v_p of degree n_p + 1,
//!
//!   d v_k  =  sum_{p < q} (-1)^{n_p n_q + n_p} c^k_{pq} v_p v_q
//!           + sum_{p}     (c^k_{pp} / 2)       v_p^2,
//!
//! where [x_p, x_q] = sum_k c^k_{pq} x_k for p <= q.

use crate::algebra::{normalize, GradedContext, Polynomial};
use crate::dga::SullivanAlgebra;
use crate::error::{Error, Result};
use crate::rat::{rat_i, RatMatrix, Rational};
use num_traits::Zero;
use std::collections::BTreeMap;

/// A finite-basis graded Lie algebra. Brackets are stored only for
/// ordered pairs i <= j; the other half is determined by graded
/// antisymmetry [x,y] = -(-1)^{|x||y|}[y,x].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedLieAlgebra {
    basis: Vec<(String, usize)>,
    brackets: BTreeMap<(usize, usize), Vec<(usize, Rational)>>,
}

/// Outcome of checking the graded Lie axioms on every basis pair/triple.
#[derive(Debug, Clone)]
pub struct LieReport {
    pub degrees_ok: bool,
    pub even_squares_ok: bool,
    pub jacobi_ok: bool,
    pub failures: Vec<String>,
}

impl LieReport {
    pub fn all_ok(&self) -> bool {
        self.degrees_ok && self.even_squares_ok && self.jacobi_ok
    }
}

impl GradedLieAlgebra {
    /// `brackets` maps (i, j) with i <= j to [x_i, x_j] in basis coordinates.
    /// Structural sanity (index bounds, degree >= 1, stored order) is
    /// checked here; the Lie axioms themselves are checked by
    /// [`validate_lie`].
    pub fn new(
        basis: Vec<(String, usize)>,
        brackets: BTreeMap<(usize, usize), Vec<(usize, Rational)>>,
    ) -> Result<Self> {
        let n = basis.len();
        for (name, deg) in &basis {
            if *deg < 1 {
                return Err(Error::LieInvalid(format!("basis element {name} has degree {deg} < 1")));
            }
        }
        for (&(i, j), combo) in &brackets {
            if i > j || j >= n {
                return Err(Error::LieInvalid(format!("bad bracket key ({i}, {j})")));
            }
            for &(k, _) in combo {
                if k >= n {
                    return Err(Error::LieInvalid(format!("bracket ({i}, {j}) hits bad index {k}")));
                }
            }
        }
        let mut brackets = brackets;
        for combo in brackets.values_mut() {
            combo.retain(|(_, c)| !c.is_zero());
        }
        brackets.retain(|_, combo| !combo.is_empty());
        Ok(GradedLieAlgebra { basis, brackets })
    }

    pub fn abelian(basis: Vec<(String, usize)>) -> Result<Self> {
        Self::new(basis, BTreeMap::new())
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[(String, usize)] {
        &self.basis
    }

    pub fn degree(&self, i: usize) -> usize {
        self.basis[i].1
    }

    pub fn name(&self, i: usize) -> &str {
        &self.basis[i].0
    }

    /// Dimension per degree 1..=max basis degree.
    pub fn dims_by_degree(&self) -> Vec<usize> {
        let top = self.basis.iter().map(|(_, d)| *d).max().unwrap_or(0);
        let mut dims = vec![0usize; top + 1];
        for (_, d) in &self.basis {
            dims[*d] += 1;
        }
        dims
    }

    /// Structure constants of [x_i, x_j] for arbitrary order of i and j.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<(usize, Rational)> {
        if i <= j {
            self.brackets.get(&(i, j)).cloned().unwrap_or_default()
        } else {
            let sign = if self.degree(i) % 2 == 1 && self.degree(j) % 2 == 1 {
                rat_i(1)
            } else {
                rat_i(-1)
            };
            self.brackets
                .get(&(j, i))
                .map(|combo| combo.iter().map(|(k, c)| (*k, c * &sign)).collect())
                .unwrap_or_default()
        }
    }

    /// Bilinear extension of the bracket to dense coordinate vectors.
    pub fn bracket(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim()];
        for (i, ca) in a.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (j, cb) in b.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                for (k, c) in self.bracket_basis(i, j) {
                    let x = &out[k] + ca * cb * c;
                    out[k] = x;
                }
            }
        }
        out
    }

    fn unit(&self, i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.dim()];
        v[i] = rat_i(1);
        v
    }
}

/// Check degree additivity, vanishing even squares, and the graded Jacobi
/// identity on all basis triples.
pub fn validate_lie(l: &GradedLieAlgebra) -> LieReport {
    let mut failures = Vec::new();
    let mut degrees_ok = true;
    let mut even_squares_ok = true;
    for (&(i, j), combo) in &l.brackets {
        let expected = l.degree(i) + l.degree(j);
        for (k, _) in combo {
            if l.degree(*k) != expected {
                degrees_ok = false;
                failures.push(format!(
                    "[{}, {}] hits {} of degree {} (expected {})",
                    l.name(i),
                    l.name(j),
                    l.name(*k),
                    l.degree(*k),
                    expected
                ));
            }
        }
        if i == j && l.degree(i) % 2 == 0 && !combo.is_empty() {
            even_squares_ok = false;
            failures.push(format!("[{0}, {0}] must vanish in even degree", l.name(i)));
        }
    }
    let mut jacobi_ok = true;
    let n = l.dim();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                // [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|} [y,[x,z]]
                let lhs = l.bracket(&l.unit(i), &l.bracket(&l.unit(j), &l.unit(k)));
                let t1 = l.bracket(&l.bracket(&l.unit(i), &l.unit(j)), &l.unit(k));
                let sign = if l.degree(i) % 2 == 1 && l.degree(j) % 2 == 1 { -1 } else { 1 };
                let t2 = l.bracket(&l.unit(j), &l.bracket(&l.unit(i), &l.unit(k)));
                let violated = (0..n).any(|m| {
                    let rhs = &t1[m] + rat_i(sign) * &t2[m];
                    lhs[m] != rhs
                });
                if violated {
                    jacobi_ok = false;
                    failures.push(format!(
                        "Jacobi fails on ({}, {}, {})",
                        l.name(i),
                        l.name(j),
                        l.name(k)
                    ));
                }
            }
        }
    }
    LieReport { degrees_ok, even_squares_ok, jacobi_ok, failures }
}

/// A homogeneous element of the truncated tensor algebra T(V): words over
/// generator indices with rational coefficients.
type Tensor = BTreeMap<Vec<usize>, Rational>;

fn tensor_concat(a: &Tensor, b: &Tensor) -> Tensor {
    let mut out = Tensor::new();
    for (wa, ca) in a {
        for (wb, cb) in b {
            let mut w = wa.clone();
            w.extend_from_slice(wb);
            let e = out.entry(w).or_insert_with(Rational::zero);
            *e += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn tensor_bracket(a: &Tensor, deg_a: usize, b: &Tensor, deg_b: usize) -> Tensor {
    let mut out = tensor_concat(a, b);
    let sign = if deg_a % 2 == 1 && deg_b % 2 == 1 { rat_i(1) } else { rat_i(-1) };
    for (w, c) in tensor_concat(b, a) {
        let e = out.entry(w).or_insert_with(Rational::zero);
        *e += c * &sign;
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// All Lyndon words over `0..k` of length in `1..=max_len` (Duval's
/// generation), in lexicographic order.
fn lyndon_words(k: usize, max_len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut w = vec![0usize];
    loop {
        if w.len() <= max_len {
            out.push(w.clone());
        }
        let m = w.len();
        while w.len() < max_len {
            let c = w[w.len() - m];
            w.push(c);
        }
        while let Some(&last) = w.last() {
            if last == k - 1 {
                w.pop();
            } else {
                break;
            }
        }
        match w.last_mut() {
            Some(last) => *last += 1,
            None => break,
        }
    }
    out.sort();
    out
}

/// Standard right factorization of a Lyndon word: w = uv with v the
/// longest proper suffix that is Lyndon; the bracketing is [b(u), b(v)].
fn lyndon_bracketing(w: &[usize]) -> LieWord {
    if w.len() == 1 {
        return LieWord::Gen(w[0]);
    }
    // longest proper Lyndon suffix = suffix at the smallest valid split;
    // the complementary prefix is then automatically Lyndon
    let split = (1..w.len())
        .find(|&s| is_lyndon(&w[s..]))
        .expect("every Lyndon word of length >= 2 factors");
    LieWord::Bracket(
        Box::new(lyndon_bracketing(&w[..split])),
        Box::new(lyndon_bracketing(&w[split..])),
    )
}

fn is_lyndon(w: &[usize]) -> bool {
    (1..w.len()).all(|s| w < &w[s..]) && !w.is_empty()
}

/// A formal bracketing of generators, kept for display.
#[derive(Debug, Clone)]
enum LieWord {
    Gen(usize),
    Bracket(Box<LieWord>, Box<LieWord>),
}

impl LieWord {
    fn display(&self, names: &[(String, usize)]) -> String {
        match self {
            LieWord::Gen(i) => names[*i].0.clone(),
            LieWord::Bracket(a, b) => {
                format!("[{},{}]", a.display(names), b.display(names))
            }
        }
    }

    fn to_tensor(&self, degs: &[usize]) -> (Tensor, usize) {
        match self {
            LieWord::Gen(i) => {
                let mut t = Tensor::new();
                t.insert(vec![*i], rat_i(1));
                (t, degs[*i])
            }
            LieWord::Bracket(a, b) => {
                let (ta, da) = a.to_tensor(degs);
                let (tb, db) = b.to_tensor(degs);
                (tensor_bracket(&ta, da, &tb, db), da + db)
            }
        }
    }
}

/// The free graded Lie algebra on the given generators, truncated at
/// `cutoff`: basis indexed by graded Lyndon bracketings (plus squares of
/// odd-degree ones), structure constants computed exactly in the tensor
/// algebra.
pub fn free_lie(gens: &[(String, usize)], cutoff: usize) -> Result<GradedLieAlgebra> {
    for (name, d) in gens {
        if *d < 1 {
            return Err(Error::LieInvalid(format!("generator {name} has degree {d} < 1")));
        }
    }
    let degs: Vec<usize> = gens.iter().map(|(_, d)| *d).collect();
    let word_degree = |w: &[usize]| -> usize { w.iter().map(|&i| degs[i]).sum() };

    // basis elements as (display word, tensor, degree)
    let mut elems: Vec<(String, Tensor, usize)> = Vec::new();
    for w in lyndon_words(gens.len(), cutoff) {
        let d = word_degree(&w);
        if d > cutoff {
            continue;
        }
        let bw = lyndon_bracketing(&w);
        let (t, td) = bw.to_tensor(&degs);
        debug_assert_eq!(td, d);
        if d % 2 == 1 && 2 * d <= cutoff {
            let sq = tensor_bracket(&t, d, &t, d);
            elems.push((format!("[{0},{0}]", bw.display(gens)), sq, 2 * d));
        }
        elems.push((bw.display(gens), t, d));
    }
    elems.sort_by(|a, b| (a.2, a.0.clone()).cmp(&(b.2, b.0.clone())));

    // per degree: index of words spanning that degree, and the matrix of
    // basis tensors for expressing brackets back in the basis
    let mut by_degree: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (idx, (_, _, d)) in elems.iter().enumerate() {
        by_degree.entry(*d).or_default().push(idx);
    }
    let mut degree_solvers: BTreeMap<usize, (Vec<Vec<usize>>, RatMatrix)> = BTreeMap::new();
    for (&d, idxs) in &by_degree {
        let mut words: Vec<Vec<usize>> = elems
            .iter()
            .enumerate()
            .filter(|(_, e)| e.2 == d)
            .flat_map(|(_, e)| e.1.keys().cloned())
            .collect();
        words.sort();
        words.dedup();
        let mut m = RatMatrix::zeros(words.len(), idxs.len());
        for (col, &idx) in idxs.iter().enumerate() {
            for (w, c) in &elems[idx].1 {
                let row = words.binary_search(w).expect("word collected above");
                m.set(row, col, c.clone());
            }
        }
        assert_eq!(m.rank(), idxs.len(), "Lyndon basis tensors must be independent");
        degree_solvers.insert(d, (words, m));
    }

    let mut brackets = BTreeMap::new();
    for i in 0..elems.len() {
        for j in i..elems.len() {
            let d = elems[i].2 + elems[j].2;
            if d > cutoff {
                continue; // truncated away
            }
            let t = tensor_bracket(&elems[i].1, elems[i].2, &elems[j].1, elems[j].2);
            if t.is_empty() {
                continue;
            }
            let (words, m) = degree_solvers
                .get(&d)
                .unwrap_or_else(|| panic!("no basis in degree {d} for a nonzero bracket"));
            let mut rhs = vec![Rational::zero(); words.len()];
            for (w, c) in &t {
                let row = words
                    .binary_search(w)
                    .expect("bracket of basis tensors stays in the Lie span");
                rhs[row] = c.clone();
            }
            let (x, _) = m
                .solve_affine(&rhs)
                .expect("bracket of basis elements lies in the basis span");
            let idxs = &by_degree[&d];
            let combo: Vec<(usize, Rational)> = x
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(col, c)| (idxs[col], c))
                .collect();
            if !combo.is_empty() {
                brackets.insert((i, j), combo);
            }
        }
    }
    GradedLieAlgebra::new(
        elems.into_iter().map(|(name, _, d)| (name, d)).collect(),
        brackets,
    )
}

fn ce_sign(np: usize, nq: usize) -> Rational {
    if (np * nq + np) % 2 == 0 {
        rat_i(1)
    } else {
        rat_i(-1)
    }
}

/// The Chevalley-Eilenberg quadratic model C*(L, 0) = (Lambda (sL)#, d1):
/// one generator of degree |x|+1 per Lie basis element x of degree
/// <= cutoff - 1, purely quadratic differential from the brackets.
pub fn ce_quadratic_model(l: &GradedLieAlgebra, cutoff: usize) -> Result<SullivanAlgebra> {
    let report = validate_lie(l);
    if !report.all_ok() {
        return Err(Error::LieInvalid(report.failures.join("; ")));
    }
    // keep basis order; sort by (degree, index) so context degrees ascend
    let mut kept: Vec<usize> = (0..l.dim()).filter(|&i| l.degree(i) <= cutoff - 1).collect();
    kept.sort_by_key(|&i| (l.degree(i), i));
    let gen_of_lie: BTreeMap<usize, usize> =
        kept.iter().enumerate().map(|(g, &i)| (i, g)).collect();
    let ctx = GradedContext::new(
        kept.iter().map(|&i| (l.name(i).to_string(), l.degree(i) + 1)).collect(),
    )?;
    let mut diff = vec![Polynomial::zero(ctx.clone()); kept.len()];
    for (&(p, q), combo) in &l.brackets {
        let (Some(&gp), Some(&gq)) = (gen_of_lie.get(&p), gen_of_lie.get(&q)) else {
            continue;
        };
        for (k, c) in combo {
            let Some(&gk) = gen_of_lie.get(k) else { continue };
            let coeff = if p == q {
                c / rat_i(2)
            } else {
                c * ce_sign(l.degree(p), l.degree(q))
            };
            let (sign, m) = normalize(&ctx, &[gp.min(gq), gp.max(gq)]);
            debug_assert_eq!(sign, 1);
            let term = Polynomial::from_term(ctx.clone(), m, coeff * rat_i(sign as i64));
            diff[gk] = diff[gk].add_checked(&term)?;
        }
    }
    SullivanAlgebra::new(ctx, diff)
}

/// Quadratic model of a wedge of spheres, truncated at `cutoff`: the
/// Chevalley-Eilenberg model of the free graded Lie algebra on one
/// generator of degree d-1 per sphere S^d. Carries wedge-of-spheres
/// provenance for the spherical classifier.
pub fn wedge_of_spheres_model(sphere_dims: &[usize], cutoff: usize) -> Result<SullivanAlgebra> {
    if sphere_dims.iter().any(|d| *d < 2) {
        return Err(Error::LieInvalid("sphere dimensions must be >= 2".into()));
    }
    let gens: Vec<(String, usize)> = sphere_dims
        .iter()
        .enumerate()
        .map(|(i, d)| (format!("g{i}"), d - 1))
        .collect();
    let l = free_lie(&gens, cutoff.saturating_sub(1))?;
    let mut alg = ce_quadratic_model(&l, cutoff)?;
    alg.wedge_of_spheres = Some(crate::dga::WedgeProvenance {
        sphere_dims: sphere_dims.to_vec(),
    });
    Ok(alg)
}

/// Read the homotopy Lie algebra off a purely quadratic minimal algebra:
/// the inverse of [`ce_quadratic_model`] under the fixed sign convention.
pub fn quadratic_dual(alg: &SullivanAlgebra) -> Result<GradedLieAlgebra> {
    if !alg.is_purely_quadratic() {
        return Err(Error::NotQuadratic(
            "differential has terms of wordlength other than 2".into(),
        ));
    }
    let ctx = alg.ctx();
    let basis: Vec<(String, usize)> = ctx
        .gens()
        .iter()
        .map(|(name, d)| (name.clone(), d - 1))
        .collect();
    let mut brackets: BTreeMap<(usize, usize), Vec<(usize, Rational)>> = BTreeMap::new();
    for k in 0..ctx.len() {
        for (m, a) in alg.diff(k).terms() {
            let (p, q) = match m.factors() {
                [(p, 1), (q, 1)] => (*p, *q),
                [(p, 2)] => (*p, *p),
                _ => unreachable!("quadratic monomials only"),
            };
            let c = if p == q {
                a * rat_i(2)
            } else {
                a * ce_sign(basis[p].1, basis[q].1)
            };
            brackets.entry((p, q)).or_default().push((k, c));
        }
    }
    GradedLieAlgebra::new(basis, brackets)
}

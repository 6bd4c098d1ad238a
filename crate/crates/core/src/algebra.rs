//! The free graded-commutative algebra Lambda(V): graded contexts,
//! Koszul-signed monomial normal forms, polynomials, and basis enumeration
//! under a degree cutoff.

use crate::error::{Error, Result};
use crate::rat::Rational;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// The ordered list of generators with degrees: the graded vector space V
/// of a model (Lambda V, d). Generator order is declaration order and fixes
/// all monomial normal forms and Koszul signs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedContext {
    gens: Vec<(String, usize)>,
}

impl GradedContext {
    /// Simple connectivity requires every generator degree >= 2; names must
    /// be unique.
    pub fn new(gens: Vec<(String, usize)>) -> Result<Arc<Self>> {
        for (name, deg) in &gens {
            if *deg < 2 {
                return Err(Error::Other(format!(
                    "generator {name} has degree {deg}; simple connectivity requires degree >= 2"
                )));
            }
        }
        for i in 0..gens.len() {
            for j in i + 1..gens.len() {
                if gens[i].0 == gens[j].0 {
                    return Err(Error::Other(format!("duplicate generator name {}", gens[i].0)));
                }
            }
        }
        Ok(Arc::new(GradedContext { gens }))
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.gens[i].0
    }

    pub fn degree(&self, i: usize) -> usize {
        self.gens[i].1
    }

    pub fn is_odd(&self, i: usize) -> bool {
        self.gens[i].1 % 2 == 1
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|(n, _)| n == name)
    }

    pub fn gens(&self) -> &[(String, usize)] {
        &self.gens
    }

    /// Number of generators in each degree, indexed by degree, up to the
    /// maximum generator degree.
    pub fn degree_census(&self) -> Vec<usize> {
        let max = self.gens.iter().map(|g| g.1).max().unwrap_or(0);
        let mut census = vec![0; max + 1];
        for (_, d) in &self.gens {
            census[*d] += 1;
        }
        census
    }
}

/// A normal-form monomial: factors sorted by generator order, odd
/// generators with exponent exactly 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    /// (generator index, exponent), strictly increasing in the index
    factors: Vec<(usize, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { factors: Vec::new() }
    }

    pub fn gen(i: usize) -> Self {
        Monomial { factors: vec![(i, 1)] }
    }

    /// Build from already-normal factors (strictly increasing indices,
    /// positive exponents).
    pub fn from_factors(factors: Vec<(usize, u32)>) -> Self {
        debug_assert!(factors.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(factors.iter().all(|(_, e)| *e > 0));
        Monomial { factors }
    }

    pub fn factors(&self) -> &[(usize, u32)] {
        &self.factors
    }

    pub fn degree(&self, ctx: &GradedContext) -> usize {
        self.factors.iter().map(|&(i, e)| ctx.degree(i) * e as usize).sum()
    }

    pub fn wordlength(&self) -> usize {
        self.factors.iter().map(|&(_, e)| e as usize).sum()
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// The factor sequence with multiplicity, in normal order.
    pub fn word(&self) -> Vec<usize> {
        let mut w = Vec::with_capacity(self.wordlength());
        for &(i, e) in &self.factors {
            for _ in 0..e {
                w.push(i);
            }
        }
        w
    }

    pub fn contains_gen(&self, g: usize) -> bool {
        self.factors.iter().any(|&(i, _)| i == g)
    }

    pub fn exponent(&self, g: usize) -> u32 {
        self.factors.iter().find(|&&(i, _)| i == g).map_or(0, |&(_, e)| e)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.wordlength()
            .cmp(&other.wordlength())
            .then_with(|| self.word().cmp(&other.word()))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Sort a factor sequence into normal form, tracking the Koszul sign.
/// Returns sign 0 when an odd generator repeats.
pub fn normalize(ctx: &GradedContext, factors: &[usize]) -> (i8, Monomial) {
    // count inversions between odd-degree factors: each odd-odd
    // transposition contributes a sign flip
    let mut flips = 0usize;
    for i in 0..factors.len() {
        for j in i + 1..factors.len() {
            if factors[i] > factors[j] && ctx.is_odd(factors[i]) && ctx.is_odd(factors[j]) {
                flips += 1;
            }
        }
    }
    let mut sorted = factors.to_vec();
    sorted.sort_unstable();
    let mut out: Vec<(usize, u32)> = Vec::new();
    for g in sorted {
        match out.last_mut() {
            Some((last, e)) if *last == g => {
                if ctx.is_odd(g) {
                    return (0, Monomial::one());
                }
                *e += 1;
            }
            _ => out.push((g, 1)),
        }
    }
    let sign = if flips % 2 == 0 { 1 } else { -1 };
    (sign, Monomial { factors: out })
}

/// Exact-rational linear combination of normalized monomials, bigraded by
/// degree and wordlength.
#[derive(Debug, Clone)]
pub struct Polynomial {
    ctx: Arc<GradedContext>,
    terms: BTreeMap<Monomial, Rational>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        *self.ctx == *other.ctx && self.terms == other.terms
    }
}
impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(ctx: Arc<GradedContext>) -> Self {
        Polynomial { ctx, terms: BTreeMap::new() }
    }

    pub fn one(ctx: Arc<GradedContext>) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::one(), Rational::one());
        Polynomial { ctx, terms }
    }

    pub fn generator(ctx: Arc<GradedContext>, i: usize) -> Self {
        Self::from_term(ctx, Monomial::gen(i), Rational::one())
    }

    pub fn from_term(ctx: Arc<GradedContext>, m: Monomial, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { ctx, terms }
    }

    pub fn ctx(&self) -> &Arc<GradedContext> {
        &self.ctx
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    fn check_ctx(&self, other: &Polynomial) -> Result<()> {
        if *self.ctx == *other.ctx {
            Ok(())
        } else {
            Err(Error::MixedContexts)
        }
    }

    pub fn add_checked(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ctx(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.ctx.clone());
        }
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn neg(&self) -> Polynomial {
        self.scale(&-Rational::one())
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add_checked(&other.neg()).expect("mixed contexts")
    }

    /// Bilinear, associative, graded-commutative product.
    pub fn mul_checked(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_ctx(other)?;
        let mut out = Polynomial::zero(self.ctx.clone());
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let mut word = m1.word();
                word.extend(m2.word());
                let (sign, m) = normalize(&self.ctx, &word);
                if sign != 0 {
                    let mut c = c1 * c2;
                    if sign < 0 {
                        c = -c;
                    }
                    out.add_term(m, c);
                }
            }
        }
        Ok(out)
    }

    /// Degree of a homogeneous polynomial, `None` for 0 or inhomogeneous.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(|m| m.degree(&self.ctx));
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// The component of the given degree.
    pub fn degree_part(&self, degree: usize) -> Polynomial {
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree(&self.ctx) == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// The component of the given wordlength.
    pub fn wordlength_part(&self, wl: usize) -> Polynomial {
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.wordlength() == wl)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Terms of wordlength >= wl.
    pub fn wordlength_at_least(&self, wl: usize) -> Polynomial {
        Polynomial {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.wordlength() >= wl)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn max_wordlength(&self) -> usize {
        self.terms.keys().map(|m| m.wordlength()).max().unwrap_or(0)
    }

    /// Replace the generator `g` by `replacement` everywhere (an algebra
    /// endomorphism fixing every other generator).
    pub fn substitute_gen(&self, g: usize, replacement: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.ctx.clone());
        for (m, c) in &self.terms {
            let mut acc = Polynomial::from_term(self.ctx.clone(), Monomial::one(), c.clone());
            for f in m.word() {
                let factor = if f == g {
                    replacement.clone()
                } else {
                    Polynomial::generator(self.ctx.clone(), f)
                };
                acc = acc.mul_checked(&factor).expect("mixed contexts");
            }
            out = out.add_checked(&acc).expect("mixed contexts");
        }
        out
    }

    /// Coordinates relative to an ordered monomial basis. Panics if a term
    /// falls outside the basis.
    pub fn coords(&self, basis: &[Monomial]) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); basis.len()];
        for (m, c) in &self.terms {
            let pos = basis
                .iter()
                .position(|b| b == m)
                .unwrap_or_else(|| panic!("monomial outside basis"));
            v[pos] = c.clone();
        }
        v
    }

    pub fn from_coords(ctx: Arc<GradedContext>, basis: &[Monomial], v: &[Rational]) -> Polynomial {
        let mut p = Polynomial::zero(ctx);
        for (m, c) in basis.iter().zip(v) {
            p.add_term(m.clone(), c.clone());
        }
        p
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let neg = c < &Rational::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut parts: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                parts.push(abs.to_string());
            }
            for &(i, e) in m.factors() {
                if e == 1 {
                    parts.push(self.ctx.name(i).to_string());
                } else {
                    parts.push(format!("{}^{}", self.ctx.name(i), e));
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

/// All normal-form monomials of the given degree whose wordlength lies in
/// `[wl_min, wl_max]`, in deterministic order (wordlength, then
/// lexicographic in generator order).
pub fn basis(
    ctx: &GradedContext,
    degree: usize,
    wl_min: usize,
    wl_max: Option<usize>,
) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut current: Vec<(usize, u32)> = Vec::new();
    enumerate(ctx, 0, degree, 0, wl_min, wl_max, &mut current, &mut out);
    out.sort();
    out
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    ctx: &GradedContext,
    gen: usize,
    remaining: usize,
    wl: usize,
    wl_min: usize,
    wl_max: Option<usize>,
    current: &mut Vec<(usize, u32)>,
    out: &mut Vec<Monomial>,
) {
    if remaining == 0 {
        if wl >= wl_min && wl_max.map_or(true, |m| wl <= m) {
            out.push(Monomial { factors: current.clone() });
        }
        return;
    }
    if gen == ctx.len() {
        return;
    }
    let d = ctx.degree(gen);
    let max_e = if ctx.is_odd(gen) { 1 } else { remaining / d };
    for e in 0..=(max_e as u32) {
        let used = d * e as usize;
        if used > remaining {
            break;
        }
        if let Some(m) = wl_max {
            if wl + e as usize > m {
                break;
            }
        }
        if e > 0 {
            current.push((gen, e));
        }
        enumerate(ctx, gen + 1, remaining - used, wl + e as usize, wl_min, wl_max, current, out);
        if e > 0 {
            current.pop();
        }
    }
}

/// Dimension of Lambda(V) in each degree 0..=cutoff, by expanding the
/// Hilbert series prod (1-t^|g|)^{-1} (even) * prod (1+t^|g|) (odd).
pub fn hilbert_series(ctx: &GradedContext, cutoff: usize) -> Vec<usize> {
    let mut series = vec![0i64; cutoff + 1];
    series[0] = 1;
    for (_, deg) in ctx.gens() {
        let mut next = vec![0i64; cutoff + 1];
        if deg % 2 == 1 {
            for k in 0..=cutoff {
                next[k] = series[k];
                if k >= *deg {
                    next[k] += series[k - deg];
                }
            }
        } else {
            // multiply by 1/(1 - t^deg): next[k] = series[k] + next[k - deg]
            for k in 0..=cutoff {
                next[k] = series[k];
                if k >= *deg {
                    next[k] += next[k - deg];
                }
            }
        }
        series = next;
    }
    series.into_iter().map(|x| x as usize).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat_i;

    fn ctx_xyab() -> Arc<GradedContext> {
        GradedContext::new(vec![
            ("x".into(), 2),
            ("y".into(), 3),
            ("a".into(), 2),
            ("b".into(), 3),
        ])
        .unwrap()
    }

    #[test]
    fn normalize_even_square() {
        let ctx = ctx_xyab();
        let (sign, m) = normalize(&ctx, &[0, 0]);
        assert_eq!(sign, 1);
        assert_eq!(m.factors(), &[(0, 2)]);
    }

    #[test]
    fn normalize_odd_square_vanishes() {
        let ctx = ctx_xyab();
        let (sign, _) = normalize(&ctx, &[1, 1]);
        assert_eq!(sign, 0);
    }

    #[test]
    fn normalize_odd_odd_transposition() {
        let ctx = ctx_xyab();
        // b*y with order x<y<a<b: one odd-odd swap
        let (sign, m) = normalize(&ctx, &[3, 1]);
        assert_eq!(sign, -1);
        assert_eq!(m.factors(), &[(1, 1), (3, 1)]);
    }

    #[test]
    fn multiply_unit() {
        let ctx = ctx_xyab();
        let p = Polynomial::generator(ctx.clone(), 0)
            .add_checked(&Polynomial::generator(ctx.clone(), 2))
            .unwrap();
        let one = Polynomial::one(ctx);
        assert_eq!(p.mul_checked(&one).unwrap(), p);
    }

    #[test]
    fn multiply_difference_of_squares() {
        let ctx = ctx_xyab();
        let x = Polynomial::generator(ctx.clone(), 0);
        let a = Polynomial::generator(ctx.clone(), 2);
        let lhs = x.add_checked(&a).unwrap().mul_checked(&x.sub(&a)).unwrap();
        let rhs = x.mul_checked(&x).unwrap().sub(&a.mul_checked(&a).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn multiply_sign_oracle() {
        // (x*y)*(a*b) against the exhaustive permutation-sign oracle
        let ctx = ctx_xyab();
        let xy = Polynomial::from_term(ctx.clone(), normalize(&ctx, &[0, 1]).1, rat_i(1));
        let ab = Polynomial::from_term(ctx.clone(), normalize(&ctx, &[2, 3]).1, rat_i(1));
        let prod = xy.mul_checked(&ab).unwrap();
        // oracle: sign of sorting the word [x,y,a,b] counting odd-odd
        // inversions by brute-force transpositions
        let word = [0usize, 1, 2, 3];
        let mut w = word.to_vec();
        let mut sign = 1i8;
        // bubble sort, flipping the sign whenever two odd factors swap
        loop {
            let mut swapped = false;
            for i in 0..w.len() - 1 {
                if w[i] > w[i + 1] {
                    if ctx.is_odd(w[i]) && ctx.is_odd(w[i + 1]) {
                        sign = -sign;
                    }
                    w.swap(i, i + 1);
                    swapped = true;
                }
            }
            if !swapped {
                break;
            }
        }
        let expected = Polynomial::from_term(ctx.clone(), normalize(&ctx, &w).1, rat_i(sign as i64));
        assert_eq!(prod, expected);
        assert_eq!(sign, 1); // y moves past even a only
    }

    #[test]
    fn graded_commutativity() {
        let ctx = ctx_xyab();
        let y = Polynomial::generator(ctx.clone(), 1);
        let b = Polynomial::generator(ctx.clone(), 3);
        let yb = y.mul_checked(&b).unwrap();
        let by = b.mul_checked(&y).unwrap();
        assert_eq!(yb, by.neg()); // |y||b| odd
    }

    #[test]
    fn basis_degree_zero() {
        let ctx = ctx_xyab();
        assert_eq!(basis(&ctx, 0, 0, None), vec![Monomial::one()]);
        assert!(basis(&ctx, 0, 1, None).is_empty());
    }

    #[test]
    fn basis_single_generator_power() {
        let ctx = GradedContext::new(vec![("x".into(), 2)]).unwrap();
        let b = basis(&ctx, 6, 0, None);
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].factors(), &[(0, 3)]);
    }

    #[test]
    fn basis_example_degree_nine() {
        // context of the S^9-over-S^2xS^2 total model: {x2,y3,a2,b3,s9}
        let ctx = GradedContext::new(vec![
            ("x".into(), 2),
            ("y".into(), 3),
            ("a".into(), 2),
            ("b".into(), 3),
            ("s".into(), 9),
        ])
        .unwrap();
        let b = basis(&ctx, 9, 0, None);
        let names: Vec<String> = b
            .iter()
            .map(|m| {
                m.factors()
                    .iter()
                    .map(|&(i, e)| {
                        if e == 1 {
                            ctx.name(i).to_string()
                        } else {
                            format!("{}^{}", ctx.name(i), e)
                        }
                    })
                    .collect::<Vec<_>>()
                    .join("*")
            })
            .collect();
        assert_eq!(
            names,
            vec![
                "s", "x^3*y", "x^3*b", "x^2*y*a", "x^2*a*b", "x*y*a^2", "x*a^2*b", "y*a^3",
                "a^3*b"
            ]
        );
    }

    #[test]
    fn basis_sizes_match_hilbert_series() {
        let ctx = ctx_xyab();
        let series = hilbert_series(&ctx, 12);
        for d in 0..=12 {
            assert_eq!(basis(&ctx, d, 0, None).len(), series[d], "degree {d}");
        }
    }

    #[test]
    fn mixed_contexts_rejected() {
        let c1 = ctx_xyab();
        let c2 = GradedContext::new(vec![("z".into(), 2)]).unwrap();
        let p = Polynomial::generator(c1, 0);
        let q = Polynomial::generator(c2, 0);
        assert_eq!(p.mul_checked(&q), Err(Error::MixedContexts));
    }

    #[test]
    fn degree_rejected_below_two() {
        assert!(GradedContext::new(vec![("x".into(), 1)]).is_err());
    }
}

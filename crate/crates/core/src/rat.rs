//! Exact rational arithmetic and the dense linear-algebra kernel used by
//! every other module: reduced row echelon form, affine solving, kernels,
//! and induced maps on quotient spaces.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational number, always in lowest terms with a
/// positive denominator (maintained by `num_rational`).
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_i(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Dense matrix over the rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    pub rows: usize,
    pub cols: usize,
    entries: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, entries: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RatMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: Vec<Vec<i64>>) -> Self {
        Self::from_rows(rows.into_iter().map(|r| r.into_iter().map(rat_i).collect()).collect())
    }

    pub fn at(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.at(i, j).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .fold(Rational::zero(), |s, x| s + x)
            })
            .collect()
    }

    pub fn mul_mat(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.at(i, k).is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    if other.at(k, j).is_zero() {
                        continue;
                    }
                    let v = out.at(i, j) + self.at(i, k) * other.at(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Reduced row echelon form. Returns the reduced matrix, the pivot
    /// column indices in order, and the rank.
    pub fn rref(&self) -> (RatMatrix, Vec<usize>, usize) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            // partial pivot by largest absolute value keeps entries tame
            let mut best: Option<usize> = None;
            for i in r..m.rows {
                if !m.at(i, c).is_zero()
                    && best.map_or(true, |b| m.at(i, c).abs() > m.at(b, c).abs())
                {
                    best = Some(i);
                }
            }
            let Some(p) = best else { continue };
            if p != r {
                for j in 0..m.cols {
                    let a = m.at(r, j).clone();
                    let b = m.at(p, j).clone();
                    m.set(r, j, b);
                    m.set(p, j, a);
                }
            }
            let inv = m.at(r, c).recip();
            for j in c..m.cols {
                let v = m.at(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i != r && !m.at(i, c).is_zero() {
                    let f = m.at(i, c).clone();
                    for j in c..m.cols {
                        let v = m.at(i, j) - &f * m.at(r, j);
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots, r)
    }

    pub fn rank(&self) -> usize {
        self.rref().2
    }

    /// Canonical kernel basis read off the reduced row echelon form: one
    /// vector per free column, with a 1 in the free coordinate.
    pub fn kernel_basis(&self) -> Vec<Vec<Rational>> {
        let (red, pivots, rank) = self.rref();
        let piv_set: Vec<usize> = pivots.clone();
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if piv_set.contains(&free) {
                continue;
            }
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (ri, &pc) in piv_set.iter().enumerate().take(rank) {
                v[pc] = -red.at(ri, free).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// Solve `a x = b`. Returns one particular solution together with a
    /// canonical basis of the kernel, or `None` if the system is
    /// inconsistent.
    pub fn solve_affine(&self, b: &[Rational]) -> Option<(Vec<Rational>, Vec<Vec<Rational>>)> {
        assert_eq!(b.len(), self.rows);
        let mut aug = RatMatrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.at(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (red, pivots, rank) = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // a pivot in the augmented column means inconsistency
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (ri, &pc) in pivots.iter().enumerate().take(rank) {
            x[pc] = red.at(ri, self.cols).clone();
        }
        Some((x, self.kernel_basis()))
    }

    /// Canonical basis of the row space: the nonzero rows of the RREF.
    pub fn row_space_basis(&self) -> Vec<Vec<Rational>> {
        let (red, _, rank) = self.rref();
        (0..rank).map(|i| red.row(i).to_vec()).collect()
    }

    /// Canonical basis of the column space (image).
    pub fn image_basis(&self) -> Vec<Vec<Rational>> {
        self.transpose().row_space_basis()
    }
}

/// A linear map between quotient spaces, expressed in the canonical
/// complement bases (standard basis vectors at the non-pivot coordinates
/// of the subspace RREFs).
#[derive(Debug, Clone)]
pub struct QuotientMap {
    pub matrix: RatMatrix,
    /// ambient coordinates carrying the source complement basis
    pub src_free: Vec<usize>,
    /// ambient coordinates carrying the target complement basis
    pub tgt_free: Vec<usize>,
}

/// Reduce `v` against RREF rows with the given pivot columns, in place.
fn reduce_by_rref(v: &mut [Rational], red: &RatMatrix, pivots: &[usize]) {
    for (ri, &pc) in pivots.iter().enumerate() {
        if !v[pc].is_zero() {
            let f = v[pc].clone();
            for j in 0..red.cols {
                let x = &v[j] - &f * red.at(ri, j);
                v[j] = x;
            }
        }
    }
}

/// The map induced by `a` on the quotients of its source and target by the
/// spans of `sub_src` and `sub_tgt`. Errors if `a` does not map the source
/// subspace into the target subspace.
pub fn induced_quotient_map(
    a: &RatMatrix,
    sub_src: &[Vec<Rational>],
    sub_tgt: &[Vec<Rational>],
) -> Result<QuotientMap> {
    let (_src_red, src_piv, _) = if sub_src.is_empty() {
        (RatMatrix::zeros(0, a.cols), Vec::new(), 0)
    } else {
        RatMatrix::from_rows(sub_src.to_vec()).rref()
    };
    let (tgt_red, tgt_piv, _) = if sub_tgt.is_empty() {
        (RatMatrix::zeros(0, a.rows), Vec::new(), 0)
    } else {
        RatMatrix::from_rows(sub_tgt.to_vec()).rref()
    };
    // well-definedness: a(sub_src) must reduce to zero modulo sub_tgt
    for s in sub_src {
        let mut img = a.mul_vec(s);
        reduce_by_rref(&mut img, &tgt_red, &tgt_piv);
        if img.iter().any(|x| !x.is_zero()) {
            return Err(Error::MappingNotWellDefined);
        }
    }
    let src_free: Vec<usize> = (0..a.cols).filter(|c| !src_piv.contains(c)).collect();
    let tgt_free: Vec<usize> = (0..a.rows).filter(|c| !tgt_piv.contains(c)).collect();
    let mut m = RatMatrix::zeros(tgt_free.len(), src_free.len());
    for (j, &fc) in src_free.iter().enumerate() {
        let mut e = vec![Rational::zero(); a.cols];
        e[fc] = Rational::one();
        let mut img = a.mul_vec(&e);
        reduce_by_rref(&mut img, &tgt_red, &tgt_piv);
        for (i, &tc) in tgt_free.iter().enumerate() {
            m.set(i, j, img[tc].clone());
        }
    }
    Ok(QuotientMap { matrix: m, src_free, tgt_free })
}

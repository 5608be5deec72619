use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::OracleError;
use crate::exactnum::IntPolynomial;

/// Banded `(J+1) × (J+K+1)` matrix of shifted polynomial coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsiMatrix {
    #[serde(with = "crate::exactnum::int_serde::matrix")]
    pub rows: Vec<Vec<BigInt>>,
    pub k: usize,
    pub j: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorGcd {
    #[serde(with = "crate::exactnum::int_serde")]
    pub gcd: BigInt,
    pub surjective: bool,
    pub minors_checked: usize,
}

impl PsiMatrix {
    /// Builds the banded matrix without the primitivity check.
    pub fn banded(p: &IntPolynomial, j: usize) -> Result<Self, OracleError> {
        if p.is_zero() || p.degree() == 0 {
            return Err(OracleError::InvalidArgument("polynomial degree must be at least 1".into()));
        }
        let k = p.degree();
        let cols = j + k + 1;
        let rows = (0..=j)
            .map(|r| {
                let mut row = vec![BigInt::zero(); cols];
                row[r..=r + k].clone_from_slice(p.coeffs());
                row
            })
            .collect();
        Ok(PsiMatrix { rows, k, j })
    }

    pub fn n_rows(&self) -> usize {
        self.j + 1
    }

    pub fn n_cols(&self) -> usize {
        self.j + self.k + 1
    }

    /// `M·x` in floating point.
    pub fn apply_f64(&self, x: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| row.iter().zip(x).map(|(m, v)| bigint_to_f64(m) * v).sum())
            .collect()
    }

    /// All maximal minors in lexicographic column order.
    pub fn maximal_minors(&self) -> Vec<BigInt> {
        let mut out = Vec::new();
        for_each_combination(self.n_cols(), self.n_rows(), |cols| {
            out.push(self.minor(cols));
            true
        });
        out
    }

    fn minor(&self, cols: &[usize]) -> BigInt {
        let m: Vec<Vec<BigInt>> = self.rows.iter().map(|row| cols.iter().map(|&c| row[c].clone()).collect()).collect();
        bareiss_det(m)
    }
}

pub fn psi_matrix(p: &IntPolynomial, j: usize) -> Result<PsiMatrix, OracleError> {
    if !p.is_zero() && !p.is_primitive() {
        return Err(OracleError::NotPrimitive(p.content().clone()));
    }
    PsiMatrix::banded(p, j)
}

/// Gcd of the maximal minors; stops as soon as it reaches 1.
pub fn check_minor_gcd(m: &PsiMatrix) -> MinorGcd {
    let mut gcd = BigInt::zero();
    let mut checked = 0;
    for_each_combination(m.n_cols(), m.n_rows(), |cols| {
        gcd = gcd.gcd(&m.minor(cols));
        checked += 1;
        !gcd.is_one()
    });
    MinorGcd { surjective: gcd.is_one(), gcd, minors_checked: checked }
}

/// True iff every component of `M·point` lies within `tol` of an integer.
pub fn manifold_membership(point: &[f64], m: &PsiMatrix, tol: f64) -> Result<bool, OracleError> {
    if point.len() != m.n_cols() {
        return Err(OracleError::DimensionMismatch { expected: m.n_cols(), got: point.len() });
    }
    Ok(m.apply_f64(point).iter().all(|s| (s - s.round()).abs() <= tol))
}

fn bigint_to_f64(x: &BigInt) -> f64 {
    num_traits::ToPrimitive::to_f64(x).unwrap_or(f64::NAN)
}

/// Fraction-free Gaussian elimination.
fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    if n == 0 {
        return BigInt::one();
    }
    sign * &m[n - 1][n - 1]
}

/// Visits `r`-subsets of `0..n` in lexicographic order until `f` returns false.
fn for_each_combination(n: usize, r: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if r > n {
        return;
    }
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        if !f(&idx) {
            return;
        }
        let Some(i) = (0..r).rev().find(|&i| idx[i] != i + n - r) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

//! Exact dense linear algebra over Q: fraction-free elimination, kernels,
//! characteristic polynomials and rational roots.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{Poly, Rational};
use crate::vectors::Vector;

/// Largest size accepted by [`char_poly`].
pub const CHAR_POLY_LIMIT: usize = 12;
/// Largest integer [`rational_root_candidates`] is willing to factor.
pub const FACTOR_LIMIT: u128 = 10u128.pow(16);

/// Square or rectangular matrix, stored by rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Matrix {
    rows: Vec<Vec<Rational>>,
}

impl Matrix {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self> {
        if let Some(first) = rows.first() {
            if let Some(bad) = rows.iter().find(|r| r.len() != first.len()) {
                return Err(Error::LengthMismatch {
                    left: first.len(),
                    right: bad.len(),
                });
            }
        }
        Ok(Matrix { rows })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Matrix::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| Rational::from(x)).collect())
                .collect(),
        )
    }

    pub fn zeros(n: usize, m: usize) -> Self {
        Matrix {
            rows: vec![vec![Rational::zero(); m]; n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Matrix::diagonal(&vec![Rational::one(); n])
    }

    pub fn diagonal(d: &[Rational]) -> Self {
        let mut m = Matrix::zeros(d.len(), d.len());
        for (i, x) in d.iter().enumerate() {
            m.rows[i][i] = x.clone();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Rational) {
        self.rows[i][j] = x;
    }

    pub fn diag(&self) -> Vec<Rational> {
        (0..self.nrows().min(self.ncols()))
            .map(|i| self.rows[i][i].clone())
            .collect()
    }

    pub fn trace(&self) -> Rational {
        self.diag().into_iter().sum()
    }

    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        if x.len() != self.ncols() {
            return Err(Error::LengthMismatch {
                left: self.ncols(),
                right: x.len(),
            });
        }
        Ok(Vector::new(
            self.rows
                .iter()
                .map(|r| r.iter().zip(&x.coords).map(|(a, b)| a * b).sum())
                .collect(),
        ))
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.ncols() != other.nrows() {
            return Err(Error::LengthMismatch {
                left: self.ncols(),
                right: other.nrows(),
            });
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                (0..other.ncols())
                    .map(|j| r.iter().zip(&other.rows).map(|(a, row)| a * &row[j]).sum())
                    .collect()
            })
            .collect();
        Ok(Matrix { rows })
    }

    /// `lam I - self` for a square matrix.
    pub fn shifted(&self, lam: &Rational) -> Matrix {
        let mut m = self.clone();
        for (i, row) in m.rows.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = if i == j { lam - &*x } else { -&*x };
            }
        }
        m
    }

    pub fn permuted(&self, perm: &[usize]) -> Matrix {
        Matrix {
            rows: perm
                .iter()
                .map(|&i| perm.iter().map(|&j| self.rows[i][j].clone()).collect())
                .collect(),
        }
    }
}

/// Row echelon data from [`eliminate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Elimination {
    pub rank: usize,
    pub pivot_columns: Vec<usize>,
    /// One vector per free column, with a 1 in that column.
    pub kernel_basis: Vec<Vector>,
}

impl Elimination {
    pub fn nullity(&self) -> usize {
        self.kernel_basis.len()
    }
}

/// Fraction-free (Bareiss) elimination. Each row is first cleared of
/// denominators, which changes neither rank nor kernel; the pivot is the
/// first row with a nonzero entry in the current column.
pub fn eliminate(m: &Matrix) -> Elimination {
    let (n, cols) = (m.nrows(), m.ncols());
    let mut a: Vec<Vec<BigInt>> = m.rows.iter().map(|r| integer_row(r)).collect();
    let mut prev = BigInt::one();
    let mut pivot_columns = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == n {
            break;
        }
        let Some(p) = (r..n).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in r + 1..n {
            for j in c + 1..cols {
                let num = &a[r][c] * &a[i][j] - &a[i][c] * &a[r][j];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss division must be exact");
                a[i][j] = q;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivot_columns.push(c);
        r += 1;
    }

    let rank = pivot_columns.len();
    let free: Vec<usize> = (0..cols).filter(|c| !pivot_columns.contains(c)).collect();
    let kernel_basis = free
        .iter()
        .map(|&f| {
            let mut x = vec![Rational::zero(); cols];
            x[f] = Rational::one();
            for (row, &pc) in pivot_columns.iter().enumerate().rev() {
                let s: Rational = (pc + 1..cols)
                    .map(|j| Rational::from(a[row][j].clone()) * &x[j])
                    .sum();
                x[pc] = -(s / Rational::from(a[row][pc].clone()));
            }
            Vector::new(x)
        })
        .collect();
    Elimination {
        rank,
        pivot_columns,
        kernel_basis,
    }
}

fn integer_row(row: &[Rational]) -> Vec<BigInt> {
    let l = row
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter()
        .map(|x| x.numer() * (&l / x.denom()))
        .collect()
}

/// `det(xI - m)` by the Faddeev-LeVerrier recurrence.
pub fn char_poly(m: &Matrix) -> Result<Poly> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::LengthMismatch {
            left: n,
            right: m.ncols(),
        });
    }
    if n > CHAR_POLY_LIMIT {
        return Err(Error::OracleTooLarge(n, CHAR_POLY_LIMIT));
    }
    // coeffs[k] multiplies x^k; c_n = 1
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut mk = Matrix::zeros(n, n);
    for k in 1..=n {
        let mut next = m.mul(&mk)?;
        for i in 0..n {
            next.rows[i][i] = &next.rows[i][i] + &coeffs[n - k + 1];
        }
        let am = m.mul(&next)?;
        coeffs[n - k] = -(am.trace() / Rational::from(k as i64));
        mk = next;
    }
    Ok(Poly::new(coeffs))
}

/// Every `±d/e` with `d` dividing the trailing and `e` the leading
/// coefficient of the integer-scaled polynomial, plus 0 when it is a root.
pub fn rational_root_candidates(p: &Poly) -> Result<BTreeSet<Rational>> {
    let ints = integer_row(p.coeffs());
    let Some(lead) = ints.last() else {
        return Ok(BTreeSet::new());
    };
    let mut out = BTreeSet::new();
    let Some(low) = ints.iter().position(|c| !c.is_zero()) else {
        return Ok(out);
    };
    if low > 0 {
        out.insert(Rational::zero());
    }
    let nums = divisors(&ints[low])?;
    let dens = divisors(lead)?;
    for d in &nums {
        for e in &dens {
            let r = Rational::new(*d, *e).expect("positive divisor");
            out.insert(-&r);
            out.insert(r);
        }
    }
    Ok(out)
}

/// Distinct rational roots with their multiplicities, in increasing order.
pub fn rational_roots(p: &Poly) -> Result<Vec<(Rational, u32)>> {
    if p.is_zero() {
        return Err(Error::RootSearchTooLarge("zero polynomial".into()));
    }
    let mut out = Vec::new();
    for r in rational_root_candidates(p)? {
        if p.eval(&r).is_zero() {
            let k = p.factor_multiplicity(&Poly::linear_root(&r))?;
            out.push((r, k));
        }
    }
    Ok(out)
}

fn divisors(n: &BigInt) -> Result<Vec<u128>> {
    let n = n
        .abs()
        .to_u128()
        .filter(|&n| n <= FACTOR_LIMIT)
        .ok_or_else(|| Error::RootSearchTooLarge(format!("cannot factor {n}")))?;
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u128;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Ok(small)
}

//! The space K^t with the max norm, the plain and weighted bilinear forms,
//! and coordinate subspaces (finite truncations of E_omega).

use std::collections::BTreeSet;
use std::ops::{Add, Index};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::Rational;
use crate::valuation::{abs_p, AbsValue, PAdicContext};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Vector {
    pub coords: Vec<Rational>,
}

impl Vector {
    pub fn new(coords: Vec<Rational>) -> Self {
        Vector { coords }
    }

    pub fn zeros(t: usize) -> Self {
        Vector::new(vec![Rational::zero(); t])
    }

    /// Standard basis vector `e_i` of K^t.
    pub fn basis(t: usize, i: usize) -> Self {
        let mut v = Vector::zeros(t);
        v.coords[i] = Rational::one();
        v
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Rational::is_zero)
    }

    pub fn scale(&self, c: &Rational) -> Vector {
        Vector::new(self.coords.iter().map(|x| x * c).collect())
    }

    /// Indices of nonzero coordinates.
    pub fn support(&self) -> BTreeSet<usize> {
        self.coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    /// Rebuilds a vector from `sum c_r e_r`.
    pub fn from_basis_expansion(t: usize, terms: &[(usize, Rational)]) -> Result<Vector> {
        let mut acc = Vector::zeros(t);
        for (r, c) in terms {
            if *r >= t {
                return Err(Error::IndexOutOfRange { index: *r, dim: t });
            }
            acc = &acc + &Vector::basis(t, *r).scale(c);
        }
        Ok(acc)
    }
}

impl Index<usize> for Vector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.coords[i]
    }
}

impl Add<&Vector> for &Vector {
    type Output = Vector;
    /// Panics on mismatched lengths; use [`checked_add`] otherwise.
    fn add(self, rhs: &Vector) -> Vector {
        checked_add(self, rhs).expect("vectors of equal length")
    }
}

pub fn checked_add(x: &Vector, y: &Vector) -> Result<Vector> {
    same_len(x.len(), y.len())?;
    Ok(Vector::new(
        x.coords.iter().zip(&y.coords).map(|(a, b)| a + b).collect(),
    ))
}

fn same_len(left: usize, right: usize) -> Result<()> {
    if left != right {
        return Err(Error::LengthMismatch { left, right });
    }
    Ok(())
}

/// Nonzero weights `omega_i` of the bilinear form on E_omega.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct WeightSeq {
    omega: Vec<Rational>,
}

impl WeightSeq {
    pub fn new(omega: Vec<Rational>) -> Result<Self> {
        if let Some(i) = omega.iter().position(Rational::is_zero) {
            return Err(Error::ZeroWeight(i));
        }
        Ok(WeightSeq { omega })
    }

    pub fn ones(t: usize) -> Self {
        WeightSeq {
            omega: vec![Rational::one(); t],
        }
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    pub fn values(&self) -> &[Rational] {
        &self.omega
    }

    pub fn get(&self, i: usize) -> &Rational {
        &self.omega[i]
    }
}

impl<'de> Deserialize<'de> for WeightSeq {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        WeightSeq::new(Vec::<Rational>::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

/// `||x||_t = max_r |x_r|_p`.
pub fn norm_max(ctx: &PAdicContext, x: &Vector) -> AbsValue {
    x.coords
        .iter()
        .map(|c| abs_p(ctx, c))
        .max()
        .unwrap_or(AbsValue::Zero)
}

/// `<x, y>_t = sum x_r y_r`.
pub fn inner_t(x: &Vector, y: &Vector) -> Result<Rational> {
    same_len(x.len(), y.len())?;
    Ok(x.coords.iter().zip(&y.coords).map(|(a, b)| a * b).sum())
}

/// `<u, v>_omega = sum omega_i u_i v_i`.
pub fn inner_omega(w: &WeightSeq, u: &Vector, v: &Vector) -> Result<Rational> {
    same_len(w.len(), u.len())?;
    same_len(u.len(), v.len())?;
    Ok(w.omega
        .iter()
        .zip(&u.coords)
        .zip(&v.coords)
        .map(|((o, a), b)| o * &(a * b))
        .sum())
}

/// Span of `{e_i : i in indices}` inside K^t.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct CoordSubspace {
    pub indices: BTreeSet<usize>,
}

impl CoordSubspace {
    pub fn new(indices: impl IntoIterator<Item = usize>) -> Self {
        CoordSubspace {
            indices: indices.into_iter().collect(),
        }
    }

    pub fn contains_vector(&self, v: &Vector) -> bool {
        v.support().is_subset(&self.indices)
    }
}

/// Complementary index set in `[0, t)`. With nonzero weights this is exactly
/// the orthogonal complement of the coordinate span under `inner_omega`.
pub fn coord_complement(s: &CoordSubspace, t: usize) -> Result<CoordSubspace> {
    if let Some(&i) = s.indices.iter().find(|&&i| i >= t) {
        return Err(Error::IndexOutOfRange { index: i, dim: t });
    }
    Ok(CoordSubspace::new((0..t).filter(|i| !s.indices.contains(i))))
}

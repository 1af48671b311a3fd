//! Finite-rank perturbations `T = D + u_1 (x) v_1 + ... + u_m (x) v_m` of a
//! diagonal operator, cut down to the first `t` coordinates.
//!
//! The rank-one operator acts by `(u (x) v)(x) = <x, v>_omega u`, so the
//! assembled matrix has entries `lambda_i [i = j] + sum_k u_k[i] omega_j v_k[j]`
//! and its diagonal is `theta_j = lambda_j + omega_j sum_k u_k[j] v_k[j]`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{char_poly, eliminate, rational_roots, Matrix};
use crate::numeric::{Poly, Rational};
use crate::vectors::{inner_omega, Vector, WeightSeq};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankOne {
    pub u: Vector,
    pub v: Vector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteRankPerturbation {
    weights: WeightSeq,
    pairs: Vec<RankOne>,
}

impl FiniteRankPerturbation {
    pub fn new(weights: WeightSeq, pairs: Vec<RankOne>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidProfile("perturbation needs at least one pair".into()));
        }
        let t = weights.len();
        for p in &pairs {
            for len in [p.u.len(), p.v.len()] {
                if len != t {
                    return Err(Error::LengthMismatch { left: t, right: len });
                }
            }
        }
        Ok(FiniteRankPerturbation { weights, pairs })
    }

    pub fn rank_one(weights: WeightSeq, u: Vector, v: Vector) -> Result<Self> {
        FiniteRankPerturbation::new(weights, vec![RankOne { u, v }])
    }

    pub fn weights(&self) -> &WeightSeq {
        &self.weights
    }

    pub fn pairs(&self) -> &[RankOne] {
        &self.pairs
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// The same perturbation with coordinates reordered: new index `i` is
    /// old index `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        let pick = |x: &[Rational]| perm.iter().map(|&i| x[i].clone()).collect::<Vec<_>>();
        FiniteRankPerturbation::new(
            WeightSeq::new(pick(self.weights.values()))?,
            self.pairs
                .iter()
                .map(|p| RankOne {
                    u: Vector::new(pick(&p.u.coords)),
                    v: Vector::new(pick(&p.v.coords)),
                })
                .collect(),
        )
    }

    /// `F(x) = sum_k <x, v_k>_omega u_k`.
    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        let mut out = Vector::zeros(self.dim());
        for p in &self.pairs {
            out = &out + &rank_one_apply(&self.weights, &p.u, &p.v, x)?;
        }
        Ok(out)
    }
}

/// `(u (x) v)(x) = <x, v>_omega u`.
pub fn rank_one_apply(w: &WeightSeq, u: &Vector, v: &Vector, x: &Vector) -> Result<Vector> {
    if u.len() != w.len() {
        return Err(Error::LengthMismatch {
            left: w.len(),
            right: u.len(),
        });
    }
    Ok(u.scale(&inner_omega(w, x, v)?))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TruncatedOperator {
    pub entries: Matrix,
    pub lambda: Vec<Rational>,
    pub perturbation: FiniteRankPerturbation,
}

impl TruncatedOperator {
    pub fn dim(&self) -> usize {
        self.lambda.len()
    }
}

fn check_len(lambda: &[Rational], pert: &FiniteRankPerturbation) -> Result<()> {
    if lambda.len() != pert.dim() {
        return Err(Error::LengthMismatch {
            left: lambda.len(),
            right: pert.dim(),
        });
    }
    Ok(())
}

pub fn assemble(lambda: &[Rational], pert: &FiniteRankPerturbation) -> Result<TruncatedOperator> {
    check_len(lambda, pert)?;
    let t = lambda.len();
    let w = pert.weights.values();
    let mut m = Matrix::diagonal(lambda);
    for i in 0..t {
        for j in 0..t {
            let f: Rational = pert
                .pairs
                .iter()
                .map(|p| &p.u[i] * &(&w[j] * &p.v[j]))
                .sum();
            m.set(i, j, m.get(i, j) + &f);
        }
    }
    Ok(TruncatedOperator {
        entries: m,
        lambda: lambda.to_vec(),
        perturbation: pert.clone(),
    })
}

/// `theta_j = lambda_j + omega_j sum_k u_k[j] v_k[j]`, checked against the
/// diagonal of the assembled matrix.
pub fn theta_sequence(lambda: &[Rational], pert: &FiniteRankPerturbation) -> Result<Vec<Rational>> {
    check_len(lambda, pert)?;
    let w = pert.weights.values();
    let theta: Vec<Rational> = (0..lambda.len())
        .map(|j| {
            let s: Rational = pert.pairs.iter().map(|p| &p.u[j] * &p.v[j]).sum();
            &lambda[j] + &(&w[j] * &s)
        })
        .collect();
    assert_eq!(theta, assemble(lambda, pert)?.entries.diag());
    Ok(theta)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EigenReport {
    pub lambda: Rational,
    pub is_eigenvalue: bool,
    pub rank: usize,
    pub kernel_dim: usize,
    pub kernel_basis: Vec<Vector>,
}

/// Exact rank of `lam I - T` and, when singular, a kernel basis.
pub fn is_eigenvalue(op: &TruncatedOperator, lam: &Rational) -> EigenReport {
    is_eigenvalue_of(&op.entries, lam)
}

pub fn is_eigenvalue_of(m: &Matrix, lam: &Rational) -> EigenReport {
    let e = eliminate(&m.shifted(lam));
    assert_eq!(e.rank + e.nullity(), m.ncols());
    EigenReport {
        lambda: lam.clone(),
        is_eigenvalue: e.nullity() > 0,
        rank: e.rank,
        kernel_dim: e.nullity(),
        kernel_basis: e.kernel_basis,
    }
}

/// `det(xI - T)`, independent of the elimination used by [`is_eigenvalue`].
pub fn char_poly_oracle(op: &TruncatedOperator) -> Result<Poly> {
    char_poly(&op.entries)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SetRelation {
    Equal,
    SpectrumInsideTheta,
    ThetaInsideSpectrum,
    Overlapping,
    Disjoint,
}

fn relation(spectrum: &BTreeSet<Rational>, theta: &BTreeSet<Rational>) -> SetRelation {
    if spectrum == theta {
        SetRelation::Equal
    } else if spectrum.is_subset(theta) {
        SetRelation::SpectrumInsideTheta
    } else if theta.is_subset(spectrum) {
        SetRelation::ThetaInsideSpectrum
    } else if spectrum.is_disjoint(theta) {
        SetRelation::Disjoint
    } else {
        SetRelation::Overlapping
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootMultiplicity {
    pub value: Rational,
    pub algebraic: u32,
    pub geometric: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComparisonReport {
    pub matrix: Matrix,
    pub theta: Vec<Rational>,
    pub char_poly: Poly,
    /// Rational eigenvalues of the truncated operator.
    pub point_spectrum: BTreeSet<Rational>,
    pub roots: Vec<RootMultiplicity>,
    /// Degree of the characteristic polynomial left after removing all
    /// rational roots.
    pub irrational_degree: usize,
    pub theta_set: BTreeSet<Rational>,
    pub theta_eigenvalues: BTreeSet<Rational>,
    pub theta_not_eigenvalues: BTreeSet<Rational>,
    pub eigenvalues_not_theta: BTreeSet<Rational>,
    pub relation: SetRelation,
}

/// Compares the rational point spectrum of the truncated operator with the
/// set of theta values. Only relations are reported.
pub fn spectrum_compare(lambda: &[Rational], pert: &FiniteRankPerturbation) -> Result<ComparisonReport> {
    let op = assemble(lambda, pert)?;
    let theta = theta_sequence(lambda, pert)?;
    let poly = char_poly_oracle(&op)?;
    let roots: Vec<RootMultiplicity> = rational_roots(&poly)?
        .into_iter()
        .map(|(value, algebraic)| {
            let report = is_eigenvalue(&op, &value);
            assert!(report.is_eigenvalue, "oracle root {value} is not an eigenvalue");
            RootMultiplicity {
                geometric: report.kernel_dim,
                value,
                algebraic,
            }
        })
        .collect();
    let rational_degree: usize = roots.iter().map(|r| r.algebraic as usize).sum();
    let point_spectrum: BTreeSet<Rational> = roots.iter().map(|r| r.value.clone()).collect();
    let theta_set: BTreeSet<Rational> = theta.iter().cloned().collect();
    Ok(ComparisonReport {
        irrational_degree: poly.degree().unwrap_or(0) - rational_degree,
        matrix: op.entries,
        char_poly: poly,
        theta_eigenvalues: theta_set.intersection(&point_spectrum).cloned().collect(),
        theta_not_eigenvalues: theta_set.difference(&point_spectrum).cloned().collect(),
        eigenvalues_not_theta: point_spectrum.difference(&theta_set).cloned().collect(),
        relation: relation(&point_spectrum, &theta_set),
        theta,
        theta_set,
        point_spectrum,
        roots,
    })
}

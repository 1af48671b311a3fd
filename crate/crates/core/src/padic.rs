//! Finite-precision p-adic expansions and convergence checks.
//!
//! A [`PAdicApprox`] is known modulo `p^N` (absolute precision). Sequences
//! and series are given by [`SequenceOracle`]s; a finite prefix of terms never
//! proves convergence, so certification needs a declared tail bound.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::Rational;
use crate::valuation::{vp_rat, PAdicContext, ValuationValue};

/// `sum digits[i] * p^(shift + i)`, known modulo `p^(shift + digits.len())`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PAdicApprox {
    #[serde(skip)]
    ctx: PAdicContext,
    shift: i64,
    digits: Vec<u64>,
}

impl PAdicApprox {
    pub fn ctx(&self) -> &PAdicContext {
        &self.ctx
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    /// Absolute precision `N`: the value is known modulo `p^N`.
    pub fn precision(&self) -> i64 {
        self.shift + self.digits.len() as i64
    }

    /// The rational represented by the stored digits.
    pub fn value(&self) -> Rational {
        let p = BigInt::from(self.ctx.p());
        let mut acc = BigInt::zero();
        for d in self.digits.iter().rev() {
            acc = acc * &p + BigInt::from(*d);
        }
        Rational::from_integer(acc) * self.ctx.power(self.shift)
    }

    /// Valuation of the represented value if it is resolved at this
    /// precision, `None` when every known digit is zero.
    pub fn valuation(&self) -> Option<i64> {
        self.digits
            .iter()
            .position(|&d| d != 0)
            .map(|i| self.shift + i as i64)
    }

    /// Equality modulo `p^min(N_a, N_b)`.
    pub fn congruent(&self, other: &PAdicApprox) -> Result<bool> {
        same_ctx(self, other)?;
        let n = self.precision().min(other.precision());
        Ok(vp_rat(&self.ctx, &(self.value() - other.value())) >= ValuationValue::Finite(n))
    }
}

impl fmt::Display for PAdicApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // most significant digit first, as is customary for p-adic expansions
        write!(f, "...")?;
        for (i, d) in self.digits.iter().enumerate().rev() {
            if self.shift + i as i64 == -1 {
                write!(f, "{d}.")?;
            } else {
                write!(f, "{d} ")?;
            }
        }
        write!(f, "(p={}, O(p^{}))", self.ctx.p(), self.precision())
    }
}

fn same_ctx(a: &PAdicApprox, b: &PAdicApprox) -> Result<()> {
    if a.ctx != b.ctx {
        return Err(Error::ContextMismatch(a.ctx.p(), b.ctx.p()));
    }
    Ok(())
}

/// Canonical expansion of `x` modulo `p^n`.
///
/// The shift is `min(V_p(x), 0)` so that inputs with a `p` in the
/// denominator get negative-index digits; it is clamped to `n` when `n` is
/// below the valuation.
pub fn approx_from_rational(ctx: &PAdicContext, x: &Rational, n: i64) -> PAdicApprox {
    let v = vp_rat(ctx, x).finite().unwrap_or(0);
    let shift = v.min(0).min(n);
    let len = (n - shift) as usize;
    // y = x * p^(-shift) has a denominator coprime to p
    let y = x * &ctx.power(-shift);
    let p = BigInt::from(ctx.p());
    let modulus = p.pow(len as u32);
    let inv = mod_inverse(y.denom(), &modulus).expect("denominator is a p-adic unit");
    let mut r = (y.numer() * inv).mod_floor(&modulus);
    let mut digits = Vec::with_capacity(len);
    for _ in 0..len {
        let (quot, d) = r.div_rem(&p);
        digits.push(d.to_u64().expect("digit below p"));
        r = quot;
    }
    PAdicApprox {
        ctx: *ctx,
        shift,
        digits,
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let e = a.extended_gcd(m);
    if !e.gcd.abs().is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// Sum at precision `min(N_a, N_b)`.
pub fn approx_add(a: &PAdicApprox, b: &PAdicApprox) -> Result<PAdicApprox> {
    same_ctx(a, b)?;
    let n = a.precision().min(b.precision());
    Ok(approx_from_rational(&a.ctx, &(a.value() + b.value()), n))
}

/// Product at precision `min(N_a + v_b, N_b + v_a)`, where `v_a` is the
/// resolved valuation of `a` (or `N_a` when `a` is zero at its precision).
pub fn approx_mul(a: &PAdicApprox, b: &PAdicApprox) -> Result<PAdicApprox> {
    same_ctx(a, b)?;
    let va = a.valuation().unwrap_or(a.precision());
    let vb = b.valuation().unwrap_or(b.precision());
    let n = (a.precision() + vb).min(b.precision() + va);
    Ok(approx_from_rational(&a.ctx, &(a.value() * b.value()), n))
}

type TermFn = dyn Fn(u64) -> Rational + Send + Sync;
type TailFn = dyn Fn(u64) -> i64 + Send + Sync;

/// A deterministic sequence of rationals with an optional declared bound on
/// how fast its increments vanish.
///
/// The tail bound `g` is a promise that `g` is non-decreasing and unbounded
/// and that the increment at index `n` has valuation at least `g(n)`. For
/// [`cauchy_check`] the increment is `x_{n+1} - x_n`; for [`sum_series`] it
/// is the term `x_n` itself.
#[derive(Clone)]
pub struct SequenceOracle {
    ctx: PAdicContext,
    term: Arc<TermFn>,
    tail: Option<Arc<TailFn>>,
}

impl SequenceOracle {
    pub fn new(ctx: PAdicContext, term: impl Fn(u64) -> Rational + Send + Sync + 'static) -> Self {
        SequenceOracle {
            ctx,
            term: Arc::new(term),
            tail: None,
        }
    }

    pub fn with_tail(mut self, g: impl Fn(u64) -> i64 + Send + Sync + 'static) -> Self {
        self.tail = Some(Arc::new(g));
        self
    }

    pub fn ctx(&self) -> &PAdicContext {
        &self.ctx
    }

    pub fn term(&self, n: u64) -> Rational {
        (self.term)(n)
    }

    pub fn declared_tail(&self, n: u64) -> Option<i64> {
        self.tail.as_ref().map(|g| g(n))
    }

    pub fn has_tail(&self) -> bool {
        self.tail.is_some()
    }

    /// Partial sums `s_n = sum_{k <= n} x_k` as a new sequence; the tail
    /// bound carries over to the consecutive differences `s_{n+1} - s_n`.
    pub fn partial_sums(&self) -> SequenceOracle {
        let term = self.term.clone();
        let sums = SequenceOracle::new(self.ctx, move |n| (0..=n).map(|k| term(k)).sum());
        match &self.tail {
            Some(g) => {
                let g = g.clone();
                sums.with_tail(move |n| g(n + 1))
            }
            None => sums,
        }
    }
}

impl fmt::Debug for SequenceOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SequenceOracle")
            .field("p", &self.ctx.p())
            .field("declared_tail", &self.tail.is_some())
            .finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CauchyVerdict {
    /// Declared tail present and respected by every observed difference.
    CauchyCertified,
    /// No tail declared; nothing observed contradicts convergence.
    PrefixConsistent,
    /// An observed difference violates the declared tail.
    PrefixRefuted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CauchyReport {
    /// `V_p(x_{n+1} - x_n)` for `n` in `0..prefix_len-1`.
    pub diff_valuations: Vec<ValuationValue>,
    pub verdict: CauchyVerdict,
    /// First index whose difference falls below the declared tail.
    pub violation: Option<u64>,
}

/// Inspects consecutive differences over a prefix.
///
/// A sequence is Cauchy iff `|x_{n+1} - x_n| -> 0`; only a declared tail
/// bound can certify that, and only a violation of it can refute it.
pub fn cauchy_check(seq: &SequenceOracle, prefix_len: usize) -> Result<CauchyReport> {
    if prefix_len < 2 {
        return Err(Error::InvalidProfile(
            "cauchy_check needs a prefix of at least two terms".into(),
        ));
    }
    let terms: Vec<Rational> = (0..prefix_len as u64).map(|n| seq.term(n)).collect();
    let diff_valuations: Vec<ValuationValue> = terms
        .windows(2)
        .map(|w| vp_rat(&seq.ctx, &(&w[1] - &w[0])))
        .collect();
    let violation = if seq.has_tail() {
        diff_valuations
            .iter()
            .enumerate()
            .find(|(n, v)| **v < ValuationValue::Finite(seq.declared_tail(*n as u64).unwrap()))
            .map(|(n, _)| n as u64)
    } else {
        None
    };
    let verdict = match (seq.has_tail(), violation) {
        (true, None) => CauchyVerdict::CauchyCertified,
        (true, Some(_)) => CauchyVerdict::PrefixRefuted,
        (false, _) => CauchyVerdict::PrefixConsistent,
    };
    Ok(CauchyReport {
        diff_valuations,
        verdict,
        violation,
    })
}

/// Sums `x_0 + x_1 + ...` to absolute precision `target`.
///
/// Uses the declared tail to find the first `M` with `g(M) >= target`; all
/// later terms then vanish modulo `p^target`, so the partial sum below `M` is
/// the limit at that precision. Terms before `M` are checked against the
/// tail as they are summed.
pub fn sum_series(seq: &SequenceOracle, target: i64, max_terms: u64) -> Result<PAdicApprox> {
    if max_terms == 0 || !seq.has_tail() {
        return Err(Error::ConvergenceNotCertified);
    }
    let mut acc = Rational::zero();
    for n in 0..max_terms {
        let g = seq.declared_tail(n).unwrap();
        if g >= target {
            return Ok(approx_from_rational(&seq.ctx, &acc, target));
        }
        let t = seq.term(n);
        let v = vp_rat(&seq.ctx, &t);
        if v < ValuationValue::Finite(g) {
            return Err(Error::TailViolated {
                index: n,
                observed: v.to_string(),
                declared: g,
            });
        }
        acc = acc + t;
    }
    Err(Error::ConvergenceNotCertified)
}

/// Operational stand-in for equality in the completion: the first index from
/// which `V_p(a_n - b_n) >= target` holds through the end of the prefix.
pub fn equivalent_at_precision(
    a: &SequenceOracle,
    b: &SequenceOracle,
    target: i64,
    prefix_len: u64,
) -> Option<u64> {
    let mut from = None;
    for n in 0..prefix_len {
        let close = vp_rat(&a.ctx, &(a.term(n) - b.term(n))) >= ValuationValue::Finite(target);
        match (close, from) {
            (true, None) => from = Some(n),
            (false, _) => from = None,
            _ => {}
        }
    }
    from
}

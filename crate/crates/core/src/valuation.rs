//! p-adic valuations and absolute values on Q, and the valuations of the
//! rational function field Q(x) attached to a monic polynomial or to the
//! degree.
//!
//! Absolute values are kept as exponents of `p`, so every comparison between
//! them is an integer comparison.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric::{Poly, Rational, RationalFunction};

/// A prime `p` checked at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PAdicContext {
    p: u64,
}

impl PAdicContext {
    pub fn new(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(PAdicContext { p })
        } else {
            Err(Error::NotPrime(p))
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn p_big(&self) -> BigInt {
        BigInt::from(self.p)
    }

    /// `p^k` as an exact rational.
    pub fn power(&self, k: i64) -> Rational {
        Rational::from_integer(self.p as i64)
            .pow(k)
            .expect("p is nonzero")
    }
}

/// Deterministic trial division.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Value of a valuation: an integer or `+inf` (attained only at zero).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ValuationValue {
    Finite(i64),
    Infinity,
}

impl ValuationValue {
    pub fn is_infinite(&self) -> bool {
        matches!(self, ValuationValue::Infinity)
    }

    pub fn finite(&self) -> Option<i64> {
        match *self {
            ValuationValue::Finite(e) => Some(e),
            ValuationValue::Infinity => None,
        }
    }

    /// The corresponding absolute value `p^(-v)`.
    pub fn to_abs(self) -> AbsValue {
        match self {
            ValuationValue::Finite(e) => AbsValue::PPow(-e),
            ValuationValue::Infinity => AbsValue::Zero,
        }
    }
}

impl Ord for ValuationValue {
    fn cmp(&self, other: &Self) -> Ordering {
        use ValuationValue::*;
        match (self, other) {
            (Infinity, Infinity) => Ordering::Equal,
            (Infinity, Finite(_)) => Ordering::Greater,
            (Finite(_), Infinity) => Ordering::Less,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for ValuationValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for ValuationValue {
    type Output = ValuationValue;
    fn add(self, rhs: Self) -> Self {
        match (self, rhs) {
            (ValuationValue::Finite(a), ValuationValue::Finite(b)) => ValuationValue::Finite(a + b),
            _ => ValuationValue::Infinity,
        }
    }
}

impl fmt::Display for ValuationValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValuationValue::Finite(e) => write!(f, "{e}"),
            ValuationValue::Infinity => write!(f, "inf"),
        }
    }
}

/// Serialized as a JSON integer, or the string `"inf"`.
impl Serialize for ValuationValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ValuationValue::Finite(e) => s.serialize_i64(*e),
            ValuationValue::Infinity => s.serialize_str("inf"),
        }
    }
}

/// An element of the value group `{p^k}` together with zero. Serialized in
/// its display form, `"0"` or `"p^k"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AbsValue {
    Zero,
    PPow(i64),
}

impl AbsValue {
    pub const ONE: AbsValue = AbsValue::PPow(0);

    pub fn is_zero(&self) -> bool {
        matches!(self, AbsValue::Zero)
    }

    pub fn exponent(&self) -> Option<i64> {
        match *self {
            AbsValue::PPow(k) => Some(k),
            AbsValue::Zero => None,
        }
    }

    pub fn to_valuation(self) -> ValuationValue {
        match self {
            AbsValue::PPow(k) => ValuationValue::Finite(-k),
            AbsValue::Zero => ValuationValue::Infinity,
        }
    }

    /// The exact rational value for the given prime.
    pub fn to_rational(self, ctx: &PAdicContext) -> Rational {
        match self {
            AbsValue::Zero => Rational::zero(),
            AbsValue::PPow(k) => ctx.power(k),
        }
    }

    /// Product in the value group.
    pub fn times(self, other: AbsValue) -> AbsValue {
        match (self, other) {
            (AbsValue::PPow(a), AbsValue::PPow(b)) => AbsValue::PPow(a + b),
            _ => AbsValue::Zero,
        }
    }
}

impl Ord for AbsValue {
    fn cmp(&self, other: &Self) -> Ordering {
        use AbsValue::*;
        match (self, other) {
            (Zero, Zero) => Ordering::Equal,
            (Zero, PPow(_)) => Ordering::Less,
            (PPow(_), Zero) => Ordering::Greater,
            (PPow(a), PPow(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for AbsValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for AbsValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for AbsValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbsValue::Zero => write!(f, "0"),
            AbsValue::PPow(k) => write!(f, "p^{k}"),
        }
    }
}

/// Exponent of `p` in `n`; `Infinity` for `n = 0`.
pub fn vp_int(ctx: &PAdicContext, n: &BigInt) -> ValuationValue {
    if n.is_zero() {
        return ValuationValue::Infinity;
    }
    if let Some(mut m) = n.magnitude().to_u128() {
        let p = ctx.p as u128;
        let mut e = 0;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        return ValuationValue::Finite(e);
    }
    let p = ctx.p_big();
    let mut m = n.clone();
    let mut e = 0;
    loop {
        let (quot, rem) = m.div_rem(&p);
        if !rem.is_zero() {
            return ValuationValue::Finite(e);
        }
        m = quot;
        e += 1;
    }
}

/// `V_p(t) - V_p(s)` for `x = t/s`.
pub fn vp_rat(ctx: &PAdicContext, x: &Rational) -> ValuationValue {
    match (vp_int(ctx, x.numer()), vp_int(ctx, x.denom())) {
        (ValuationValue::Finite(a), ValuationValue::Finite(b)) => ValuationValue::Finite(a - b),
        _ => ValuationValue::Infinity,
    }
}

/// `|x|_p = p^(-V_p(x))`, zero at zero.
pub fn abs_p(ctx: &PAdicContext, x: &Rational) -> AbsValue {
    vp_rat(ctx, x).to_abs()
}

/// `d(x, y) = |x - y|_p`.
pub fn dist_p(ctx: &PAdicContext, x: &Rational, y: &Rational) -> AbsValue {
    abs_p(ctx, &(x - y))
}

fn check_place_poly(p: &Poly) -> Result<()> {
    if !p.is_monic() || p.degree().unwrap_or(0) == 0 {
        return Err(Error::InvalidPlace(format!(
            "{p} must be monic of degree at least 1"
        )));
    }
    Ok(())
}

/// `V_{p(x)}(f/g) = mult_p(f) - mult_p(g)`.
///
/// `p` is assumed irreducible; that is not checked, and for reducible `p`
/// the strong triangle inequality can fail.
pub fn vfunc_px(rf: &RationalFunction, p: &Poly) -> Result<ValuationValue> {
    check_place_poly(p)?;
    if rf.is_zero() {
        return Ok(ValuationValue::Infinity);
    }
    let a = rf.num().factor_multiplicity(p)? as i64;
    let b = rf.den().factor_multiplicity(p)? as i64;
    Ok(ValuationValue::Finite(a - b))
}

/// `V_inf(f/g) = deg g - deg f`.
pub fn vfunc_inf(rf: &RationalFunction) -> ValuationValue {
    match (rf.num().degree(), rf.den().degree()) {
        (Some(dn), Some(dd)) => ValuationValue::Finite(dd as i64 - dn as i64),
        _ => ValuationValue::Infinity,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlaceSpec {
    Finite(Poly),
    Infinite,
}

impl PlaceSpec {
    pub fn valuation(&self, rf: &RationalFunction) -> Result<ValuationValue> {
        match self {
            PlaceSpec::Finite(p) => vfunc_px(rf, p),
            PlaceSpec::Infinite => Ok(vfunc_inf(rf)),
        }
    }
}

impl fmt::Display for PlaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlaceSpec::Finite(p) => write!(f, "{p}"),
            PlaceSpec::Infinite => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MembershipReport {
    pub valuation: ValuationValue,
    /// In the valuation ring O (valuation >= 0).
    pub in_ring: bool,
    /// In its maximal ideal P (valuation > 0).
    pub in_maximal_ideal: bool,
}

pub fn ring_membership(rf: &RationalFunction, place: &PlaceSpec) -> Result<MembershipReport> {
    let valuation = place.valuation(rf)?;
    Ok(MembershipReport {
        valuation,
        in_ring: valuation >= ValuationValue::Finite(0),
        in_maximal_ideal: valuation > ValuationValue::Finite(0),
    })
}

/// `V(x + y) >= min(V(x), V(y))`, with equality when the two differ.
pub fn strong_triangle_holds(vx: ValuationValue, vy: ValuationValue, vsum: ValuationValue) -> bool {
    let m = vx.min(vy);
    vsum >= m && (vx == vy || vsum == m)
}

//! Balls and spheres of (Q, |.|_p).
//!
//! Radii live in the value group `{p^k}`. Because the value group is
//! discrete, the open ball of radius `p^k` is the closed ball of radius
//! `p^(k-1)`; [`Ball::closed_exponent`] uses this to compare balls of mixed
//! kinds exactly.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::Rational;
use crate::valuation::{dist_p, AbsValue, PAdicContext};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BallKind {
    Open,
    Closed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ball {
    pub center: Rational,
    pub radius: AbsValue,
    pub kind: BallKind,
}

impl Ball {
    pub fn new(center: Rational, radius: AbsValue, kind: BallKind) -> Result<Self> {
        if radius.is_zero() {
            return Err(Error::InvalidBall("radius must be nonzero".into()));
        }
        Ok(Ball {
            center,
            radius,
            kind,
        })
    }

    pub fn closed(center: Rational, exponent: i64) -> Self {
        Ball {
            center,
            radius: AbsValue::PPow(exponent),
            kind: BallKind::Closed,
        }
    }

    pub fn open(center: Rational, exponent: i64) -> Self {
        Ball {
            center,
            radius: AbsValue::PPow(exponent),
            kind: BallKind::Open,
        }
    }

    fn exponent(&self) -> i64 {
        self.radius.exponent().expect("ball radius is nonzero")
    }

    /// Exponent `k` such that this ball equals the closed ball `B[c, p^k]`.
    pub fn closed_exponent(&self) -> i64 {
        match self.kind {
            BallKind::Closed => self.exponent(),
            BallKind::Open => self.exponent() - 1,
        }
    }

    /// Same radius and kind around a new center.
    pub fn recentered(&self, center: Rational) -> Ball {
        Ball {
            center,
            radius: self.radius,
            kind: self.kind,
        }
    }
}

pub fn ball_contains(ctx: &PAdicContext, b: &Ball, y: &Rational) -> bool {
    let d = dist_p(ctx, &b.center, y);
    match b.kind {
        BallKind::Open => d < b.radius,
        BallKind::Closed => d <= b.radius,
    }
}

/// True iff `y` lies in `b`, in which case `b.recentered(y)` is the same set.
pub fn recenter_equivalent(ctx: &PAdicContext, b: &Ball, y: &Rational) -> bool {
    ball_contains(ctx, b, y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Relation {
    Disjoint,
    LeftInsideRight,
    RightInsideLeft,
    Equal,
}

/// Two balls are either disjoint or nested.
pub fn balls_relation(ctx: &PAdicContext, a: &Ball, b: &Ball) -> Relation {
    let (ka, kb) = (a.closed_exponent(), b.closed_exponent());
    let d = dist_p(ctx, &a.center, &b.center);
    if d > AbsValue::PPow(ka.max(kb)) {
        return Relation::Disjoint;
    }
    match ka.cmp(&kb) {
        std::cmp::Ordering::Less => Relation::LeftInsideRight,
        std::cmp::Ordering::Greater => Relation::RightInsideLeft,
        std::cmp::Ordering::Equal => Relation::Equal,
    }
}

pub fn sphere_contains(
    ctx: &PAdicContext,
    center: &Rational,
    r: AbsValue,
    y: &Rational,
) -> Result<bool> {
    if r.is_zero() {
        return Err(Error::InvalidBall("sphere radius must be nonzero".into()));
    }
    Ok(dist_p(ctx, center, y) == r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    XY,
    YZ,
    XZ,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TriangleReport {
    /// `d(x,y)`, `d(y,z)`, `d(x,z)` in that order.
    pub sides: [AbsValue; 3],
    pub equal_pair: [Side; 2],
    /// The remaining side; never longer than the equal pair.
    pub third: Side,
    pub equilateral: bool,
}

pub fn isosceles_witness(
    ctx: &PAdicContext,
    x: &Rational,
    y: &Rational,
    z: &Rational,
) -> Result<TriangleReport> {
    if x == y || y == z || x == z {
        return Err(Error::NotATriangle);
    }
    let sides = [dist_p(ctx, x, y), dist_p(ctx, y, z), dist_p(ctx, x, z)];
    let names = [Side::XY, Side::YZ, Side::XZ];
    // Pick the equal pair whose common length is largest; the leftover side
    // is then the (weakly) shortest.
    let mut best: Option<(usize, usize, usize)> = None;
    for (i, j, k) in [(0, 1, 2), (0, 2, 1), (1, 2, 0)] {
        if sides[i] == sides[j] && sides[k] <= sides[i] {
            best = Some((i, j, k));
            break;
        }
    }
    let (i, j, k) = best.expect("an ultrametric triangle always has an equal pair");
    Ok(TriangleReport {
        sides,
        equal_pair: [names[i], names[j]],
        third: names[k],
        equilateral: sides[0] == sides[1] && sides[1] == sides[2],
    })
}

/// A point at distance exactly `p^exponent` from `center`: `center + p^(-exponent)*unit`.
///
/// `unit` must have valuation zero.
pub fn shell_point(ctx: &PAdicContext, center: &Rational, exponent: i64, unit: &Rational) -> Rational {
    center + &(ctx.power(-exponent) * unit)
}

//! Diagonal operators `D(u) = sum lambda_i u_i e_i` on E_omega, described by
//! their eigenvalue profile rather than by an explicit (infinite) diagonal.
//!
//! For a diagonal operator everything reduces to bookkeeping on the index
//! set: the kernel of `lambda I - D` is spanned by the `e_i` with
//! `lambda_i = lambda`, the closure of its range by the remaining `e_k`, the
//! spectrum is the closure of the eigenvalue family and the essential
//! spectrum splits into the boundary of that family (non-eigenvalue limit
//! points) and the eigenvalues of infinite multiplicity.
//!
//! Infinite index sets are never enumerated. Operations that need concrete
//! coordinates take an explicit truncation length and use
//! [`SpectralProfile::diagonal_prefix`].

use std::collections::BTreeSet;
use std::fmt;
use std::ops::Add;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numeric::Rational;
use crate::valuation::{abs_p, vp_rat, AbsValue, PAdicContext, ValuationValue};
use crate::vectors::{coord_complement, CoordSubspace};

/// Sampled prefix length used to validate declared accumulation points.
pub const ACCUMULATION_SAMPLE: usize = 256;
/// A declared accumulation point must be approached to within `p^-8`.
pub const ACCUMULATION_EXPONENT: i64 = 8;

/// Dimension count: `Finite(0)` is only ever produced by queries, never
/// stored in a profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Multiplicity {
    Finite(u64),
    Infinite,
}

impl Multiplicity {
    pub const ZERO: Multiplicity = Multiplicity::Finite(0);

    pub fn is_zero(&self) -> bool {
        *self == Multiplicity::ZERO
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Multiplicity::Finite(_))
    }
}

impl Add for Multiplicity {
    type Output = Multiplicity;
    fn add(self, rhs: Multiplicity) -> Multiplicity {
        match (self, rhs) {
            (Multiplicity::Finite(a), Multiplicity::Finite(b)) => Multiplicity::Finite(a + b),
            _ => Multiplicity::Infinite,
        }
    }
}

impl fmt::Display for Multiplicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Multiplicity::Finite(n) => write!(f, "{n}"),
            Multiplicity::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Multiplicity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Multiplicity::Finite(n) => s.serialize_u64(*n),
            Multiplicity::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Multiplicity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Count(u64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Count(n) => Ok(Multiplicity::Finite(n)),
            Repr::Text(s) if s == "inf" => Ok(Multiplicity::Infinite),
            Repr::Text(s) => Err(serde::de::Error::custom(format!(
                "multiplicity must be a count or \"inf\", got {s:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExplicitEntry {
    pub value: Rational,
    pub mult: Multiplicity,
}

impl ExplicitEntry {
    pub fn new(value: Rational, mult: Multiplicity) -> Self {
        ExplicitEntry { value, mult }
    }
}

/// Eigenvalue family `Lambda = {lambda_k}` of a diagonal operator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpectralProfile {
    /// Finitely many distinct values, each with a nonzero multiplicity.
    ExplicitFinite { entries: Vec<ExplicitEntry> },
    /// `lambda_i = c * alpha^i` for `i >= 0`, with `|alpha|_p < 1`.
    GeometricFamily {
        ctx: PAdicContext,
        c: Rational,
        alpha: Rational,
        count_hint: usize,
    },
    /// Interleaving of several families plus declared limit points.
    UnionProfile {
        parts: Vec<SpectralProfile>,
        declared_accumulation: Vec<Rational>,
    },
}

impl SpectralProfile {
    pub fn explicit(entries: Vec<ExplicitEntry>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for e in &entries {
            if e.mult.is_zero() {
                return Err(Error::InvalidProfile(format!(
                    "entry {} has multiplicity 0",
                    e.value
                )));
            }
            if !seen.insert(e.value.clone()) {
                return Err(Error::InvalidProfile(format!(
                    "value {} listed twice",
                    e.value
                )));
            }
        }
        Ok(SpectralProfile::ExplicitFinite { entries })
    }

    pub fn geometric(ctx: PAdicContext, c: Rational, alpha: Rational, count_hint: usize) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::InvalidProfile("geometric family needs c != 0".into()));
        }
        if alpha.is_zero() || abs_p(&ctx, &alpha) >= AbsValue::ONE {
            return Err(Error::InvalidProfile(format!(
                "geometric family needs 0 < |alpha|_{} < 1, got alpha = {alpha}",
                ctx.p()
            )));
        }
        Ok(SpectralProfile::GeometricFamily {
            ctx,
            c,
            alpha,
            count_hint,
        })
    }

    pub fn union(parts: Vec<SpectralProfile>, declared_accumulation: Vec<Rational>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidProfile("union needs at least one part".into()));
        }
        let profile = SpectralProfile::UnionProfile {
            parts,
            declared_accumulation,
        };
        for a in profile.accumulation_points() {
            if !profile.multiplicity(&a).is_zero() {
                return Err(Error::InvalidProfile(format!(
                    "accumulation point {a} is also an eigenvalue"
                )));
            }
        }
        Ok(profile)
    }

    /// Distinct nonzero `alpha_n`, each repeated infinitely often: the
    /// diagonal `lambda_i = alpha_n` where `(n, k)` runs over the Cantor
    /// pairing of the index `i` (see [`cantor_unpair`]).
    pub fn repeated_family(ctx: &PAdicContext, alphas: Vec<Rational>) -> Result<Self> {
        for a in &alphas {
            if a.is_zero() || abs_p(ctx, a) >= AbsValue::ONE {
                return Err(Error::InvalidProfile(format!(
                    "{a} must be nonzero with |.|_{} < 1",
                    ctx.p()
                )));
            }
        }
        SpectralProfile::explicit(
            alphas
                .into_iter()
                .map(|a| ExplicitEntry::new(a, Multiplicity::Infinite))
                .collect(),
        )
    }

    /// Number of indices `i` with `lambda_i = lam`, i.e. `dim N(lam I - D)`.
    pub fn multiplicity(&self, lam: &Rational) -> Multiplicity {
        match self {
            SpectralProfile::ExplicitFinite { entries } => entries
                .iter()
                .find(|e| &e.value == lam)
                .map_or(Multiplicity::ZERO, |e| e.mult),
            SpectralProfile::GeometricFamily { ctx, c, alpha, .. } => {
                match geometric_index_by_valuation(ctx, c, alpha, lam) {
                    Some(_) => Multiplicity::Finite(1),
                    None => Multiplicity::ZERO,
                }
            }
            SpectralProfile::UnionProfile { parts, .. } => parts
                .iter()
                .map(|p| p.multiplicity(lam))
                .fold(Multiplicity::ZERO, Add::add),
        }
    }

    /// Limit points of the family: `{0}` for a geometric family, the declared
    /// points (and those of the parts) for a union, nothing for an explicit
    /// finite list.
    pub fn accumulation_points(&self) -> BTreeSet<Rational> {
        match self {
            SpectralProfile::ExplicitFinite { .. } => BTreeSet::new(),
            SpectralProfile::GeometricFamily { .. } => BTreeSet::from([Rational::zero()]),
            SpectralProfile::UnionProfile {
                parts,
                declared_accumulation,
            } => parts
                .iter()
                .flat_map(SpectralProfile::accumulation_points)
                .chain(declared_accumulation.iter().cloned())
                .collect(),
        }
    }

    /// The eigenvalue set `Lambda` (= point spectrum).
    pub fn eigenvalues(&self) -> ValueSet {
        match self {
            SpectralProfile::ExplicitFinite { entries } => {
                ValueSet::finite(entries.iter().map(|e| e.value.clone()))
            }
            SpectralProfile::GeometricFamily { ctx, c, alpha, .. } => ValueSet::Geometric {
                ctx: *ctx,
                c: c.clone(),
                alpha: alpha.clone(),
            },
            SpectralProfile::UnionProfile { parts, .. } => {
                ValueSet::union(parts.iter().map(SpectralProfile::eigenvalues))
            }
        }
    }

    /// Eigenvalues of infinite multiplicity.
    pub fn infinite_multiplicity_values(&self) -> BTreeSet<Rational> {
        let mut candidates = BTreeSet::new();
        self.collect_explicit_values(&mut candidates);
        candidates
            .into_iter()
            .filter(|v| self.multiplicity(v) == Multiplicity::Infinite)
            .collect()
    }

    fn collect_explicit_values(&self, out: &mut BTreeSet<Rational>) {
        match self {
            SpectralProfile::ExplicitFinite { entries } => {
                out.extend(entries.iter().map(|e| e.value.clone()))
            }
            SpectralProfile::GeometricFamily { .. } => {}
            SpectralProfile::UnionProfile { parts, .. } => {
                parts.iter().for_each(|p| p.collect_explicit_values(out))
            }
        }
    }

    /// Values worth reporting individually: explicit values, accumulation
    /// points and the first `count_hint` terms of each geometric family.
    pub fn notable_values(&self) -> BTreeSet<Rational> {
        let mut out = self.accumulation_points();
        self.collect_notable(&mut out);
        out
    }

    fn collect_notable(&self, out: &mut BTreeSet<Rational>) {
        match self {
            SpectralProfile::ExplicitFinite { entries } => {
                out.extend(entries.iter().map(|e| e.value.clone()))
            }
            SpectralProfile::GeometricFamily { count_hint, .. } => {
                out.extend(self.index_stream().take(*count_hint))
            }
            SpectralProfile::UnionProfile { parts, .. } => {
                parts.iter().for_each(|p| p.collect_notable(out))
            }
        }
    }

    fn first_context(&self) -> Option<PAdicContext> {
        match self {
            SpectralProfile::ExplicitFinite { .. } => None,
            SpectralProfile::GeometricFamily { ctx, .. } => Some(*ctx),
            SpectralProfile::UnionProfile { parts, .. } => {
                parts.iter().find_map(SpectralProfile::first_context)
            }
        }
    }

    /// The diagonal `lambda_0, lambda_1, ...` in index order.
    ///
    /// Finite-multiplicity explicit entries come first, one index per copy;
    /// infinite-multiplicity entries are then interleaved through the Cantor
    /// pairing. A union interleaves its parts round-robin. The stream ends
    /// only when the underlying space is finite-dimensional.
    pub fn index_stream(&self) -> Box<dyn Iterator<Item = Rational> + '_> {
        match self {
            SpectralProfile::ExplicitFinite { entries } => {
                let finite = entries.iter().flat_map(|e| match e.mult {
                    Multiplicity::Finite(n) => {
                        std::iter::repeat_n(e.value.clone(), n as usize)
                    }
                    Multiplicity::Infinite => std::iter::repeat_n(e.value.clone(), 0),
                });
                let infinite: Vec<&Rational> = entries
                    .iter()
                    .filter(|e| e.mult == Multiplicity::Infinite)
                    .map(|e| &e.value)
                    .collect();
                let tail: Box<dyn Iterator<Item = Rational>> = if infinite.is_empty() {
                    Box::new(std::iter::empty())
                } else {
                    let m = infinite.len() as u64;
                    Box::new(
                        (0u64..)
                            .map(cantor_unpair)
                            .filter(move |(n, _)| *n < m)
                            .map(move |(n, _)| infinite[n as usize].clone()),
                    )
                };
                Box::new(finite.chain(tail))
            }
            SpectralProfile::GeometricFamily { c, alpha, .. } => {
                let (c, alpha) = (c.clone(), alpha.clone());
                Box::new(std::iter::successors(Some(c), move |x| Some(x * &alpha)))
            }
            SpectralProfile::UnionProfile { parts, .. } => {
                let mut streams: Vec<_> = parts.iter().map(|p| p.index_stream()).collect();
                let mut next = 0usize;
                Box::new(std::iter::from_fn(move || {
                    while !streams.is_empty() {
                        let k = next % streams.len();
                        match streams[k].next() {
                            Some(v) => {
                                next = k + 1;
                                return Some(v);
                            }
                            None => {
                                drop(streams.remove(k));
                                next = k;
                            }
                        }
                    }
                    None
                }))
            }
        }
    }

    /// First `t` diagonal entries (fewer if the space has lower dimension).
    pub fn diagonal_prefix(&self, t: usize) -> Vec<Rational> {
        self.index_stream().take(t).collect()
    }

    /// Checks every declared accumulation point against a sampled prefix;
    /// returns one warning per point that cannot be confirmed.
    pub fn validate_accumulation(&self) -> Vec<String> {
        let declared: Vec<&Rational> = match self {
            SpectralProfile::UnionProfile {
                declared_accumulation,
                ..
            } => declared_accumulation.iter().collect(),
            _ => return Vec::new(),
        };
        if declared.is_empty() {
            return Vec::new();
        }
        let Some(ctx) = self.first_context() else {
            return declared
                .iter()
                .map(|a| format!("accumulation point {a} not validated: no p-adic part to fix p"))
                .collect();
        };
        let sample: Vec<Rational> = self.index_stream().take(ACCUMULATION_SAMPLE).collect();
        declared
            .into_iter()
            .filter(|a| {
                !sample.iter().any(|x| {
                    x != *a && vp_rat(&ctx, &(x - *a)) >= ValuationValue::Finite(ACCUMULATION_EXPONENT)
                })
            })
            .map(|a| {
                format!(
                    "accumulation point {a} not approached within {}^-{ACCUMULATION_EXPONENT} by the first {ACCUMULATION_SAMPLE} terms",
                    ctx.p()
                )
            })
            .collect()
    }
}

/// Solves `c * alpha^i = lam` for `i >= 0` through valuations:
/// `V(lam) = V(c) + i V(alpha)` pins `i` down, which is then checked exactly.
fn geometric_index_by_valuation(
    ctx: &PAdicContext,
    c: &Rational,
    alpha: &Rational,
    lam: &Rational,
) -> Option<u64> {
    let vl = vp_rat(ctx, lam).finite()?;
    let vc = vp_rat(ctx, c).finite()?;
    let va = vp_rat(ctx, alpha).finite()?;
    let diff = vl - vc;
    if diff < 0 || diff % va != 0 {
        return None;
    }
    let i = diff / va;
    (c * &alpha.pow(i).ok()?.clone() == *lam).then_some(i as u64)
}

/// Inverse of the Cantor pairing `N -> N x N`: index `i` maps to `(n, k)`
/// with `i = (n + k)(n + k + 1)/2 + k`.
pub fn cantor_unpair(i: u64) -> (u64, u64) {
    let w = ((8 * i as u128 + 1).isqrt() as u64 - 1) / 2;
    let tri = w * (w + 1) / 2;
    let k = i - tri;
    (w - k, k)
}

/// Codimension of the closed span of the range of `lam I - D`, computed from
/// the image: `e_k` is reached exactly when `lam - lambda_k` is invertible,
/// so the cokernel counts the basis vectors where it is not.
pub fn cokernel_dim(profile: &SpectralProfile, lam: &Rational) -> Multiplicity {
    match profile {
        SpectralProfile::ExplicitFinite { entries } => entries
            .iter()
            .filter(|e| (lam - &e.value).recip().is_err())
            .map(|e| e.mult)
            .fold(Multiplicity::ZERO, Add::add),
        SpectralProfile::GeometricFamily { ctx, c, alpha, .. } => {
            if lam.is_zero() {
                // lam - c*alpha^k = -c*alpha^k is never zero
                return Multiplicity::ZERO;
            }
            // once |c alpha^k| < |lam| the coefficient has |lam - c alpha^k| = |lam|
            let target = abs_p(ctx, lam);
            let mut term = c.clone();
            let mut hits = 0;
            while abs_p(ctx, &term) >= target {
                if (lam - &term).is_zero() {
                    hits += 1;
                }
                term = &term * alpha;
            }
            Multiplicity::Finite(hits)
        }
        SpectralProfile::UnionProfile { parts, .. } => parts
            .iter()
            .map(|p| cokernel_dim(p, lam))
            .fold(Multiplicity::ZERO, Add::add),
    }
}

/// `dim N(lam I - D)`.
pub fn multiplicity(profile: &SpectralProfile, lam: &Rational) -> Multiplicity {
    profile.multiplicity(lam)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FredholmKind {
    IndexZero,
    NotFredholm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FredholmStatus {
    pub eta: Multiplicity,
    pub delta: Multiplicity,
    pub kind: FredholmKind,
    /// False at non-eigenvalue limit points of the family: there the range
    /// is dense but not closed, although no basis vector is missing from it.
    pub range_closed: bool,
    /// `lam` is outside the closure of the family, so `lam I - D` is invertible.
    pub resolvent: bool,
}

/// Fredholm classification of `lam I - D`.
pub fn fredholm_status(profile: &SpectralProfile, lam: &Rational) -> FredholmStatus {
    let eta = profile.multiplicity(lam);
    let delta = cokernel_dim(profile, lam);
    let limit_point = profile.accumulation_points().contains(lam);
    let range_closed = !limit_point;
    let kind = if eta.is_finite() && delta.is_finite() && eta == delta && range_closed {
        FredholmKind::IndexZero
    } else {
        FredholmKind::NotFredholm
    };
    FredholmStatus {
        eta,
        delta,
        kind,
        range_closed,
        resolvent: eta.is_zero() && !limit_point,
    }
}

/// A possibly infinite set of rationals in a finite description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValueSet {
    Finite(BTreeSet<Rational>),
    /// `{c * alpha^i : i >= 0}`
    Geometric {
        ctx: PAdicContext,
        c: Rational,
        alpha: Rational,
    },
    Union(Vec<ValueSet>),
}

impl ValueSet {
    pub fn finite(values: impl IntoIterator<Item = Rational>) -> Self {
        ValueSet::Finite(values.into_iter().collect())
    }

    /// Flattens nested unions and merges the finite pieces into one.
    pub fn union(parts: impl IntoIterator<Item = ValueSet>) -> Self {
        let mut finite = BTreeSet::new();
        let mut infinite = Vec::new();
        let mut stack: Vec<ValueSet> = parts.into_iter().collect();
        while let Some(part) = stack.pop() {
            match part {
                ValueSet::Finite(s) => finite.extend(s),
                ValueSet::Union(ps) => stack.extend(ps),
                g @ ValueSet::Geometric { .. } => {
                    if !infinite.contains(&g) {
                        infinite.push(g)
                    }
                }
            }
        }
        if infinite.is_empty() {
            return ValueSet::Finite(finite);
        }
        infinite.reverse();
        finite.retain(|v| !infinite.iter().any(|g| g.contains(v)));
        if !finite.is_empty() {
            infinite.push(ValueSet::Finite(finite));
        }
        if infinite.len() == 1 {
            infinite.pop().unwrap()
        } else {
            ValueSet::Union(infinite)
        }
    }

    pub fn contains(&self, v: &Rational) -> bool {
        match self {
            ValueSet::Finite(s) => s.contains(v),
            ValueSet::Geometric { ctx, c, alpha } => {
                geometric_index_by_valuation(ctx, c, alpha, v).is_some()
            }
            ValueSet::Union(parts) => parts.iter().any(|p| p.contains(v)),
        }
    }

    /// The members, when there are finitely many.
    pub fn as_finite(&self) -> Option<BTreeSet<Rational>> {
        match self {
            ValueSet::Finite(s) => Some(s.clone()),
            ValueSet::Geometric { .. } => None,
            ValueSet::Union(parts) => {
                let mut out = BTreeSet::new();
                for p in parts {
                    out.extend(p.as_finite()?);
                }
                Some(out)
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        self.as_finite().is_some()
    }
}

impl Serialize for ValueSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(rename_all = "snake_case")]
        enum Repr<'a> {
            Geometric {
                p: u64,
                c: &'a Rational,
                alpha: &'a Rational,
            },
            Union(&'a [ValueSet]),
        }
        match self {
            ValueSet::Finite(v) => v.serialize(s),
            ValueSet::Geometric { ctx, c, alpha } => Repr::Geometric {
                p: ctx.p(),
                c,
                alpha,
            }
            .serialize(s),
            ValueSet::Union(parts) => Repr::Union(parts).serialize(s),
        }
    }
}

impl fmt::Display for ValueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueSet::Finite(s) => {
                let items: Vec<String> = s.iter().map(ToString::to_string).collect();
                write!(f, "{{{}}}", items.join(", "))
            }
            ValueSet::Geometric { c, alpha, .. } => write!(f, "{{{c} * ({alpha})^i : i >= 0}}"),
            ValueSet::Union(parts) => {
                let items: Vec<String> = parts.iter().map(ToString::to_string).collect();
                write!(f, "{}", items.join(" u "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValueStatus {
    pub value: Rational,
    pub status: FredholmStatus,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectrumReport {
    pub point_spectrum: ValueSet,
    /// Limit points of the family that are not eigenvalues.
    pub sigma_e_prime: BTreeSet<Rational>,
    /// Eigenvalues of infinite multiplicity.
    pub sigma_e_double_prime: BTreeSet<Rational>,
    pub sigma_e: BTreeSet<Rational>,
    /// Closure of the eigenvalue family.
    pub sigma: ValueSet,
    pub statuses: Vec<ValueStatus>,
    pub warnings: Vec<String>,
}

/// Eigenvalues together with the limit points of the family.
pub fn closure_points(profile: &SpectralProfile) -> ValueSet {
    ValueSet::union([
        profile.eigenvalues(),
        ValueSet::Finite(profile.accumulation_points()),
    ])
}

pub fn spectrum_report(profile: &SpectralProfile) -> SpectrumReport {
    let point_spectrum = profile.eigenvalues();
    let sigma = closure_points(profile);
    let sigma_e_prime: BTreeSet<Rational> = profile
        .accumulation_points()
        .into_iter()
        .filter(|a| !point_spectrum.contains(a))
        .collect();
    let sigma_e_double_prime = profile.infinite_multiplicity_values();
    let sigma_e: BTreeSet<Rational> = sigma_e_prime
        .union(&sigma_e_double_prime)
        .cloned()
        .collect();

    let statuses: Vec<ValueStatus> = profile
        .notable_values()
        .into_iter()
        .map(|value| {
            let status = fredholm_status(profile, &value);
            ValueStatus { value, status }
        })
        .collect();

    // Every member of sigma_e fails to be Fredholm of index 0 and lies in the
    // spectrum; the two parts are disjoint with the improper part made of
    // eigenvalues.
    assert!(sigma_e_prime.is_disjoint(&sigma_e_double_prime));
    assert!(sigma_e_double_prime.iter().all(|v| point_spectrum.contains(v)));
    assert!(sigma_e.iter().all(|v| sigma.contains(v)));
    for s in &statuses {
        assert_eq!(s.status.eta, s.status.delta, "kernel and cokernel counts differ at {}", s.value);
        assert_eq!(
            s.status.kind == FredholmKind::NotFredholm,
            sigma_e.contains(&s.value),
            "Fredholm classification disagrees with the essential spectrum at {}",
            s.value
        );
    }

    SpectrumReport {
        point_spectrum,
        sigma_e_prime,
        sigma_e_double_prime,
        sigma_e,
        sigma,
        statuses,
        warnings: profile.validate_accumulation(),
    }
}

/// Report for a diagonal operator of finite rank: `(0, Infinite)` plus
/// finitely many nonzero values of finite multiplicity. Its spectrum is
/// finite and its essential spectrum is exactly `{0}`.
pub fn finite_rank_diag_report(profile: &SpectralProfile) -> Result<SpectrumReport> {
    let SpectralProfile::ExplicitFinite { entries } = profile else {
        return Err(Error::NotFiniteRank);
    };
    let has_zero_kernel = entries
        .iter()
        .any(|e| e.value.is_zero() && e.mult == Multiplicity::Infinite);
    let rest_finite = entries
        .iter()
        .filter(|e| !e.value.is_zero())
        .all(|e| e.mult.is_finite());
    if !has_zero_kernel || !rest_finite {
        return Err(Error::NotFiniteRank);
    }
    let report = spectrum_report(profile);
    assert!(report.sigma.is_finite());
    assert_eq!(report.sigma_e, BTreeSet::from([Rational::zero()]));
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KernelRangeSplit {
    pub t: usize,
    pub kernel: CoordSubspace,
    pub range: CoordSubspace,
    pub range_is_kernel_perp: bool,
}

/// Within the first `t` coordinates, the kernel of `lam I - D` is spanned by
/// `{e_i : lambda_i = lam}` and the range by the images `(lam - lambda_k) e_k`
/// that are nonzero; the range should be the orthogonal complement of the
/// kernel.
pub fn kernel_range_split(profile: &SpectralProfile, lam: &Rational, t: usize) -> Result<KernelRangeSplit> {
    let diag = profile.diagonal_prefix(t);
    let t = diag.len();
    let kernel = CoordSubspace::new((0..t).filter(|&i| &diag[i] == lam));
    let range = CoordSubspace::new((0..t).filter(|&k| !(lam - &diag[k]).is_zero()));
    let perp = coord_complement(&kernel, t)?;
    Ok(KernelRangeSplit {
        t,
        range_is_kernel_perp: range == perp,
        kernel,
        range,
    })
}

pub fn range_equals_kernel_perp(profile: &SpectralProfile, lam: &Rational, t: usize) -> bool {
    kernel_range_split(profile, lam, t).is_ok_and(|s| s.range_is_kernel_perp)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum ProfileRepr {
    Explicit {
        entries: Vec<ExplicitEntry>,
    },
    Geometric {
        p: u64,
        c: Rational,
        alpha: Rational,
        #[serde(default = "default_count_hint")]
        count_hint: usize,
    },
    Union {
        parts: Vec<ProfileRepr>,
        #[serde(default)]
        accumulation: Vec<Rational>,
    },
}

fn default_count_hint() -> usize {
    20
}

impl TryFrom<ProfileRepr> for SpectralProfile {
    type Error = Error;
    fn try_from(r: ProfileRepr) -> Result<Self> {
        match r {
            ProfileRepr::Explicit { entries } => SpectralProfile::explicit(entries),
            ProfileRepr::Geometric {
                p,
                c,
                alpha,
                count_hint,
            } => SpectralProfile::geometric(PAdicContext::new(p)?, c, alpha, count_hint),
            ProfileRepr::Union {
                parts,
                accumulation,
            } => SpectralProfile::union(
                parts
                    .into_iter()
                    .map(SpectralProfile::try_from)
                    .collect::<Result<_>>()?,
                accumulation,
            ),
        }
    }
}

impl From<&SpectralProfile> for ProfileRepr {
    fn from(p: &SpectralProfile) -> Self {
        match p {
            SpectralProfile::ExplicitFinite { entries } => ProfileRepr::Explicit {
                entries: entries.clone(),
            },
            SpectralProfile::GeometricFamily {
                ctx,
                c,
                alpha,
                count_hint,
            } => ProfileRepr::Geometric {
                p: ctx.p(),
                c: c.clone(),
                alpha: alpha.clone(),
                count_hint: *count_hint,
            },
            SpectralProfile::UnionProfile {
                parts,
                declared_accumulation,
            } => ProfileRepr::Union {
                parts: parts.iter().map(ProfileRepr::from).collect(),
                accumulation: declared_accumulation.clone(),
            },
        }
    }
}

impl Serialize for SpectralProfile {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ProfileRepr::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for SpectralProfile {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        SpectralProfile::try_from(ProfileRepr::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process
//! exits nonzero if any criterion fails.
//!
//! Expected values come from oracles written here: valuations by counting
//! prime factors of machine integers, ball membership from those valuations,
//! determinants and ranks by plain Gaussian elimination, and spectral sets
//! from the parameters each profile was built from.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use ultraspec::props::gen;
use ultraspec_core::linalg::{rational_root_candidates, Matrix};
use ultraspec_core::numeric::Rational;
use ultraspec_core::padic::{approx_from_rational, sum_series, SequenceOracle};
use ultraspec_core::perturbation::{
    assemble, char_poly_oracle, is_eigenvalue, spectrum_compare, theta_sequence, FiniteRankPerturbation, RankOne,
    SetRelation,
};
use ultraspec_core::spectral::{
    cokernel_dim, finite_rank_diag_report, fredholm_status, kernel_range_split, range_equals_kernel_perp,
    spectrum_report, ExplicitEntry, FredholmKind, Multiplicity, SpectralProfile,
};
use ultraspec_core::ultrametric::{ball_contains, balls_relation, isosceles_witness, shell_point, Ball, BallKind, Relation};
use ultraspec_core::valuation::{abs_p, vp_rat, AbsValue, PAdicContext, ValuationValue};
use ultraspec_core::vectors::{inner_t, norm_max, Vector, WeightSeq};

const SEED: u64 = 20_240_601;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(SEED);
    r.set_stream(stream);
    r
}

fn ctx(p: u64) -> PAdicContext {
    PAdicContext::new(p).expect("prime")
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d).expect("nonzero denominator")
}

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

// ---------------------------------------------------------------------------
// Valuation oracle: exponent of p in a machine or big integer.

fn ord_i128(mut n: i128, p: i128) -> i64 {
    assert!(n != 0);
    let mut k = 0;
    while n % p == 0 {
        n /= p;
        k += 1;
    }
    k
}

fn ord_big(n: &BigInt, p: u64) -> i64 {
    assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut k = 0;
    loop {
        let (quo, rem) = n.div_rem(&p);
        if !rem.is_zero() {
            return k;
        }
        n = quo;
        k += 1;
    }
}

/// `None` stands for +infinity (the valuation of 0).
fn v_frac(n: i128, d: i128, p: u64) -> Option<i64> {
    (n != 0).then(|| ord_i128(n, p as i128) - ord_i128(d, p as i128))
}

fn v_rat(x: &Rational, p: u64) -> Option<i64> {
    (!x.is_zero()).then(|| ord_big(x.numer(), p) - ord_big(x.denom(), p))
}

fn lift(v: Option<i64>) -> ValuationValue {
    v.map_or(ValuationValue::Infinity, ValuationValue::Finite)
}

fn abs_of(v: Option<i64>) -> AbsValue {
    v.map_or(AbsValue::Zero, |k| AbsValue::PPow(-k))
}

// ---------------------------------------------------------------------------
// Linear algebra oracle: Gaussian elimination on a copy of the rows.

fn shifted_rows(m: &Matrix, lam: &Rational) -> Vec<Vec<Rational>> {
    (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| {
                    let d = if i == j { lam.clone() } else { Rational::zero() };
                    &d - m.get(i, j)
                })
                .collect()
        })
        .collect()
}

/// Rank and determinant (determinant only meaningful for square input).
fn gauss(mut a: Vec<Vec<Rational>>) -> (usize, Rational) {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut det = Rational::one();
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            det = Rational::zero();
            continue;
        };
        if piv != r {
            a.swap(piv, r);
            det = -det;
        }
        det = &det * &a[r][c];
        let inv = a[r][c].recip().expect("nonzero pivot");
        for i in r + 1..rows {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] * &inv;
            for j in c..cols {
                let s = &f * &a[r][j];
                a[i][j] = &a[i][j] - &s;
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    if r < cols {
        det = Rational::zero();
    }
    (r, det)
}

// ---------------------------------------------------------------------------
// 1. Valuation axioms, exhaustive over a/b with |a|, b <= 40.

fn small_rationals() -> Vec<(i64, i64)> {
    let mut out = vec![(0, 1)];
    for b in 1..=40i64 {
        for a in -40..=40i64 {
            if a != 0 && a.gcd(&b) == 1 {
                out.push((a, b));
            }
        }
    }
    out
}

fn valuation_axioms() -> Outcome {
    let xs = small_rationals();
    let lib: Vec<Rational> = xs.iter().map(|&(a, b)| q(a, b)).collect();
    let mut checks = 0u64;
    for p in [2u64, 3, 5, 7] {
        let c = ctx(p);
        let vo: Vec<Option<i64>> = xs.iter().map(|&(a, b)| v_frac(a as i128, b as i128, p)).collect();
        for (i, x) in lib.iter().enumerate() {
            ensure!(vp_rat(&c, x) == lift(vo[i]), "p={p}: V({x}) = {} but oracle {:?}", vp_rat(&c, x), vo[i]);
        }
        let fails: Vec<String> = (0..xs.len())
            .into_par_iter()
            .filter_map(|i| {
                let (a1, b1) = xs[i];
                let x = &lib[i];
                let vx = vp_rat(&c, x);
                for (j, y) in lib.iter().enumerate() {
                    let (a2, b2) = xs[j];
                    let vy = vp_rat(&c, y);
                    let prod = vo[i].zip(vo[j]).map(|(s, t)| s + t);
                    if vp_rat(&c, &(x * y)) != lift(prod) {
                        return Some(format!("p={p}: V({x} * {y}) != V(x) + V(y)"));
                    }
                    let vsum = vp_rat(&c, &(x + y));
                    let oracle = v_frac((a1 * b2 + a2 * b1) as i128, (b1 * b2) as i128, p);
                    if vsum != lift(oracle) {
                        return Some(format!("p={p}: V({x} + {y}) = {vsum} but oracle {oracle:?}"));
                    }
                    if vsum < vx.min(vy) {
                        return Some(format!("p={p}: V({x} + {y}) = {vsum} < min({vx}, {vy})"));
                    }
                    if vx != vy && vsum != vx.min(vy) {
                        return Some(format!("p={p}: V({x} + {y}) = {vsum} != min({vx}, {vy})"));
                    }
                }
                None
            })
            .collect();
        if let Some(f) = fails.first() {
            return Err(format!("{} failing rows, first: {f}", fails.len()));
        }
        checks += 2 * (xs.len() * xs.len()) as u64;
    }
    Ok(format!("{} rationals, {checks} checks", xs.len()))
}

// ---------------------------------------------------------------------------
// 2. |n|_p <= 1 on integers.

fn integer_bound() -> Outcome {
    const N: i64 = 1_000_000;
    for p in [2u64, 3, 5, 7] {
        let c = ctx(p);
        let bad = (-N..=N).into_par_iter().find_any(|&n| {
            let a = abs_p(&c, &Rational::from(n));
            a > AbsValue::ONE || a != abs_of(v_frac(n as i128, 1, p))
        });
        if let Some(n) = bad {
            return Err(format!("p={p}: |{n}|_p = {}", abs_p(&c, &Rational::from(n))));
        }
    }
    Ok(format!("{} integers per prime", 2 * N + 1))
}

// ---------------------------------------------------------------------------
// 3. Every triangle is isosceles.

/// `a p^k / b` as a fraction of machine integers: numerator `a p^(k+3)`,
/// denominator `b p^3`.
fn padic_frac(r: &mut impl Rng, p: i128) -> (i128, i128) {
    let a = r.gen_range(-40..=40i128);
    let b = r.gen_range(1..=40i128);
    let k: u32 = r.gen_range(0..=6);
    (a * p.pow(k), b * p.pow(3))
}

fn isosceles() -> Outcome {
    const TRIPLES: usize = 10_000;
    let mut equilateral = 0;
    for (s, p) in [2u64, 3, 5].into_iter().enumerate() {
        let c = ctx(p);
        let mut r = rng(300 + s as u64);
        let mut done = 0;
        while done < TRIPLES {
            let f: Vec<(i128, i128)> = (0..3).map(|_| padic_frac(&mut r, p as i128)).collect();
            let pts: Vec<Rational> = f
                .iter()
                .map(|&(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)).unwrap())
                .collect();
            if pts[0] == pts[1] || pts[1] == pts[2] || pts[0] == pts[2] {
                continue;
            }
            done += 1;
            let dist = |i: usize, j: usize| {
                let (n1, d1) = f[i];
                let (n2, d2) = f[j];
                abs_of(v_frac(n1 * d2 - n2 * d1, d1 * d2, p))
            };
            let sides = [dist(0, 1), dist(1, 2), dist(0, 2)];
            let mut sorted = sides;
            sorted.sort();
            ensure!(
                sorted[1] == sorted[2],
                "p={p}: triangle {:?} has sides {sides:?}",
                pts
            );
            let t = isosceles_witness(&c, &pts[0], &pts[1], &pts[2]).map_err(|e| e.to_string())?;
            ensure!(t.sides == sides, "p={p}: library sides {:?} vs oracle {sides:?}", t.sides);
            let idx = |s| match s {
                ultraspec_core::ultrametric::Side::XY => 0,
                ultraspec_core::ultrametric::Side::YZ => 1,
                ultraspec_core::ultrametric::Side::XZ => 2,
            };
            let (i, j, k) = (idx(t.equal_pair[0]), idx(t.equal_pair[1]), idx(t.third));
            ensure!(
                sides[i] == sides[j] && sides[k] <= sides[i],
                "p={p}: witness {:?} inconsistent with sides {sides:?}",
                t
            );
            if t.equilateral {
                equilateral += 1;
            }
        }
    }
    Ok(format!("{} triples, {equilateral} equilateral", 3 * TRIPLES))
}

// ---------------------------------------------------------------------------
// 4. Two balls are disjoint or nested.

fn member(b: &Ball, y: &Rational, p: u64) -> bool {
    let k = b.radius.exponent().expect("nonzero radius");
    match v_rat(&(y - &b.center), p) {
        None => true,
        Some(v) => match b.kind {
            BallKind::Closed => -v <= k,
            BallKind::Open => -v < k,
        },
    }
}

fn ball_pair(r: &mut ChaCha8Rng, c: &PAdicContext) -> (Ball, Ball) {
    let a = gen::ball(r, c);
    let b = gen::ball(r, c);
    match r.gen_range(0..3) {
        0 => (a, b),
        1 => {
            let k = a.radius.exponent().unwrap() + r.gen_range(-2..=1);
            let center = shell_point(c, &a.center, k, &gen::unit(r, c, 12));
            let b = b.recentered(center);
            (a, b)
        }
        _ => {
            let b = b.recentered(a.center.clone());
            if r.gen_bool(0.5) {
                (a, b)
            } else {
                (b, a)
            }
        }
    }
}

fn ball_dichotomy() -> Outcome {
    const PAIRS: usize = 1_000;
    const PROBES: usize = 1_000;
    let mut seen = BTreeSet::new();
    for (s, p) in [2u64, 3, 5, 7].into_iter().enumerate() {
        let c = ctx(p);
        let mut r = rng(400 + s as u64);
        let cases: Vec<(Ball, Ball, Vec<Rational>)> = (0..PAIRS)
            .map(|_| {
                let (a, b) = ball_pair(&mut r, &c);
                let probes = gen::probes(&mut r, &c, &[&a, &b], PROBES);
                (a, b, probes)
            })
            .collect();
        let results: Vec<Result<Relation, String>> = cases
            .par_iter()
            .map(|(a, b, probes)| {
                let (mut both, mut a_sub_b, mut b_sub_a) = (false, true, true);
                for y in probes {
                    let (ia, ib) = (member(a, y, p), member(b, y, p));
                    if ia != ball_contains(&c, a, y) || ib != ball_contains(&c, b, y) {
                        return Err(format!("p={p}: membership of {y} disagrees for {a:?} / {b:?}"));
                    }
                    both |= ia && ib;
                    a_sub_b &= !ia || ib;
                    b_sub_a &= !ib || ia;
                }
                let sampled = match (both, a_sub_b, b_sub_a) {
                    (false, _, _) => Relation::Disjoint,
                    (true, true, true) => Relation::Equal,
                    (true, true, false) => Relation::LeftInsideRight,
                    (true, false, true) => Relation::RightInsideLeft,
                    (true, false, false) => {
                        return Err(format!("p={p}: {a:?} and {b:?} overlap without nesting"))
                    }
                };
                let lib = balls_relation(&c, a, b);
                if lib != sampled {
                    return Err(format!("p={p}: {a:?} vs {b:?}: library {lib:?}, sampling {sampled:?}"));
                }
                Ok(lib)
            })
            .collect();
        for res in results {
            seen.insert(format!("{:?}", res?));
        }
    }
    ensure!(seen.len() == 4, "battery did not reach every relation: {seen:?}");
    Ok(format!("{} pairs x {PROBES} probes, relations {seen:?}", 4 * PAIRS))
}

// ---------------------------------------------------------------------------
// 5. sum_{n<N} p^n -> 1/(1-p).

fn geometric_series() -> Outcome {
    for p in [2u64, 3, 5, 7] {
        let c = ctx(p);
        let pp = p as i64;
        let seq = SequenceOracle::new(c, move |n| Rational::from(pp).pow(n as i64).unwrap()).with_tail(|n| n as i64);
        let sums = seq.partial_sums();
        let limit = q(1, 1 - pp);
        for n in 0..=12i64 {
            let s_n = if n == 0 { Rational::zero() } else { sums.term(n as u64 - 1) };
            // closed form: s_N - 1/(1-p) = p^N / (p-1), of valuation exactly N
            let closed = (pp.pow(n as u32) as i128, (pp - 1) as i128);
            ensure!(
                &s_n - &limit == Rational::new(BigInt::from(closed.0), BigInt::from(closed.1)).unwrap(),
                "p={p}, N={n}: partial sum {s_n} off the closed form"
            );
            let a = abs_p(&c, &(&s_n - &limit));
            ensure!(a <= AbsValue::PPow(-n), "p={p}, N={n}: |s_N - 1/(1-p)| = {a}");
            ensure!(a == abs_of(v_frac(closed.0, closed.1, p)), "p={p}, N={n}: |.| = {a}, oracle p^-{n}");
            let summed = sum_series(&seq, n, 64).map_err(|e| e.to_string())?;
            ensure!(summed.value() == s_n, "p={p}, N={n}: sum_series gave {}", summed.value());
            let expansion = approx_from_rational(&c, &limit, n);
            ensure!(expansion.value() == s_n, "p={p}, N={n}: expansion of 1/(1-p) gave {}", expansion.value());
        }
    }
    Ok("p in {2,3,5,7}, N = 0..=12".into())
}

// ---------------------------------------------------------------------------
// 6. Cauchy-Schwarz in K^t.

fn cauchy_schwarz() -> Outcome {
    const PAIRS: usize = 10_000;
    let mut r = rng(600);
    let mut tight = 0;
    for i in 0..PAIRS {
        let p = [2u64, 3, 5][i % 3];
        let c = ctx(p);
        let t = r.gen_range(1..=6);
        let fx: Vec<(i128, i128)> = (0..t).map(|_| padic_frac(&mut r, p as i128)).collect();
        let fy: Vec<(i128, i128)> = (0..t).map(|_| padic_frac(&mut r, p as i128)).collect();
        let to_vec = |f: &[(i128, i128)]| {
            Vector::new(f.iter().map(|&(n, d)| Rational::new(BigInt::from(n), BigInt::from(d)).unwrap()).collect())
        };
        let (x, y) = (to_vec(&fx), to_vec(&fy));
        let ip = inner_t(&x, &y).map_err(|e| e.to_string())?;
        // oracle inner product over the common denominator prod d_x d_y
        let mut num = BigInt::zero();
        let mut den = BigInt::from(1);
        for k in 0..t {
            let (n1, d1) = fx[k];
            let (n2, d2) = fy[k];
            let dk = BigInt::from(d1 * d2);
            num = num * &dk + &den * BigInt::from(n1 * n2);
            den *= dk;
        }
        ensure!(ip == Rational::new(num.clone(), den.clone()).unwrap(), "inner product {ip} disagrees with oracle");
        let vmin = |f: &[(i128, i128)]| f.iter().filter_map(|&(n, d)| v_frac(n, d, p)).min();
        let bound = vmin(&fx).zip(vmin(&fy)).map(|(a, b)| a + b);
        let v_ip = (!num.is_zero()).then(|| ord_big(&num, p) - ord_big(&den, p));
        let (nx, ny) = (norm_max(&c, &x), norm_max(&c, &y));
        ensure!(nx == abs_of(vmin(&fx)) && ny == abs_of(vmin(&fy)), "norms disagree with oracle");
        let ok_oracle = match (v_ip, bound) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(v), Some(b)) => v >= b,
        };
        ensure!(ok_oracle, "p={p}: oracle V(<x,y>) = {v_ip:?} below {bound:?}");
        ensure!(abs_p(&c, &ip) <= nx.times(ny), "p={p}: |<x,y>| = {} > {} * {}", abs_p(&c, &ip), nx, ny);
        if v_ip.is_some() && v_ip == bound {
            tight += 1;
        }
    }
    Ok(format!("{PAIRS} pairs, {tight} with equality"))
}

// ---------------------------------------------------------------------------
// 7 and 8. Spectral battery.

#[derive(Clone)]
enum Shape {
    /// value, multiplicity (None = infinite)
    Explicit(Vec<(Rational, Option<u64>)>),
    Geo { p: u64, c: Rational, alpha: Rational, hint: usize },
    Union(Vec<Shape>, Vec<Rational>),
    Repeated { p: u64, alphas: Vec<Rational> },
}

struct Case {
    name: &'static str,
    shape: Shape,
    profile: SpectralProfile,
    finite_rank: bool,
    repeated: bool,
}

fn build(shape: &Shape) -> SpectralProfile {
    match shape {
        Shape::Explicit(e) => SpectralProfile::explicit(
            e.iter()
                .map(|(v, m)| ExplicitEntry::new(v.clone(), m.map_or(Multiplicity::Infinite, Multiplicity::Finite)))
                .collect(),
        )
        .unwrap(),
        Shape::Geo { p, c, alpha, hint } => SpectralProfile::geometric(ctx(*p), c.clone(), alpha.clone(), *hint).unwrap(),
        Shape::Union(parts, acc) => SpectralProfile::union(parts.iter().map(build).collect(), acc.clone()).unwrap(),
        Shape::Repeated { p, alphas } => SpectralProfile::repeated_family(&ctx(*p), alphas.clone()).unwrap(),
    }
}

const GEO_TERMS: i64 = 60;

fn geo_terms(c: &Rational, alpha: &Rational, n: i64) -> Vec<Rational> {
    (0..n).map(|k| c * &alpha.pow(k).unwrap()).collect()
}

/// Multiplicity from the construction parameters; `None` is infinite.
fn oracle_mult(s: &Shape, lam: &Rational) -> Option<u64> {
    match s {
        Shape::Explicit(e) => e.iter().find(|(v, _)| v == lam).map_or(Some(0), |(_, m)| *m),
        Shape::Repeated { alphas, .. } => Some(0).filter(|_| !alphas.contains(lam)),
        Shape::Geo { c, alpha, .. } => Some(geo_terms(c, alpha, GEO_TERMS).iter().filter(|t| *t == lam).count() as u64),
        Shape::Union(parts, _) => parts
            .iter()
            .map(|p| oracle_mult(p, lam))
            .try_fold(0u64, |acc, m| m.map(|m| acc + m)),
    }
}

fn oracle_acc(s: &Shape) -> BTreeSet<Rational> {
    match s {
        Shape::Explicit(_) | Shape::Repeated { .. } => BTreeSet::new(),
        Shape::Geo { .. } => BTreeSet::from([Rational::zero()]),
        Shape::Union(parts, acc) => parts.iter().flat_map(oracle_acc).chain(acc.iter().cloned()).collect(),
    }
}

/// Explicitly listed values and the first terms of every geometric family.
fn oracle_values(s: &Shape, terms: i64) -> BTreeSet<Rational> {
    match s {
        Shape::Explicit(e) => e.iter().map(|(v, _)| v.clone()).collect(),
        Shape::Repeated { alphas, .. } => alphas.iter().cloned().collect(),
        Shape::Geo { c, alpha, .. } => geo_terms(c, alpha, terms).into_iter().collect(),
        Shape::Union(parts, _) => parts.iter().flat_map(|p| oracle_values(p, terms)).collect(),
    }
}

fn oracle_sigma_e(s: &Shape) -> BTreeSet<Rational> {
    let prime: BTreeSet<Rational> = oracle_acc(s).into_iter().filter(|a| oracle_mult(s, a) == Some(0)).collect();
    let double: BTreeSet<Rational> = oracle_values(s, 0).into_iter().filter(|v| oracle_mult(s, v).is_none()).collect();
    prime.union(&double).cloned().collect()
}

fn explicit(entries: &[(i64, i64, Option<u64>)]) -> Shape {
    Shape::Explicit(entries.iter().map(|&(n, d, m)| (q(n, d), m)).collect())
}

fn geo(p: u64, c: Rational, alpha: Rational) -> Shape {
    Shape::Geo { p, c, alpha, hint: 8 }
}

fn with_hint(s: Shape, hint: usize) -> Shape {
    match s {
        Shape::Geo { p, c, alpha, .. } => Shape::Geo { p, c, alpha, hint },
        other => other,
    }
}

const INF: Option<u64> = None;

fn battery() -> Vec<Case> {
    let case = |name, shape: Shape, finite_rank, repeated| Case {
        name,
        profile: build(&shape),
        shape,
        finite_rank,
        repeated,
    };
    let mut out = vec![
        case("data/geometric", with_hint(geo(5, q(1, 1), q(5, 1)), 20), false, false),
        case("data/explicit", explicit(&[(2, 1, Some(3)), (7, 1, INF)]), false, false),
        case("data/finite_rank", explicit(&[(0, 1, INF), (2, 1, Some(1)), (3, 1, Some(2))]), true, false),
        case("data/repeated", explicit(&[(3, 1, INF), (9, 1, INF), (6, 1, INF), (3, 2, INF)]), false, true),
        case(
            "data/union",
            Shape::Union(
                vec![
                    with_hint(geo(5, q(1, 1), q(5, 1)), 6),
                    with_hint(geo(5, q(2, 1), q(25, 1)), 4),
                    explicit(&[(-1, 1, INF)]),
                ],
                vec![q(0, 1)],
            ),
            false,
            false,
        ),
        case("geometric p=2", geo(2, q(1, 1), q(2, 1)), false, false),
        case("geometric p=3", geo(3, q(-2, 5), q(9, 7)), false, false),
        case("geometric p=7", geo(7, q(3, 1), q(49, 1)), false, false),
        case("geometric p=5 c=1/3", geo(5, q(1, 3), q(10, 1)), false, false),
        case("geometric p=11", geo(11, q(1, 1), q(11, 2)), false, false),
        case("single eigenvalue", explicit(&[(1, 1, Some(1))]), false, false),
        case("zero operator", explicit(&[(0, 1, INF)]), true, false),
        case("finite rank a", explicit(&[(0, 1, INF), (5, 1, Some(2)), (-1, 2, Some(1))]), true, false),
        case("finite rank b", explicit(&[(0, 1, INF), (7, 3, Some(3))]), true, false),
        case("finite dimensional", explicit(&[(2, 1, Some(1)), (3, 1, Some(2)), (4, 1, Some(3))]), false, false),
        case("mixed multiplicities", explicit(&[(1, 1, INF), (2, 1, Some(2)), (-3, 1, INF)]), false, false),
        case(
            "geometric plus explicit",
            Shape::Union(vec![geo(3, q(1, 1), q(3, 1)), explicit(&[(5, 1, INF), (1, 2, Some(1))])], vec![]),
            false,
            false,
        ),
        case(
            "overlapping families",
            Shape::Union(vec![geo(2, q(1, 1), q(2, 1)), geo(2, q(1, 1), q(4, 1))], vec![]),
            false,
            false,
        ),
        case(
            "disjoint families",
            Shape::Union(vec![geo(2, q(1, 1), q(4, 1)), geo(2, q(3, 1), q(2, 1))], vec![]),
            false,
            false,
        ),
        case(
            "explicit union",
            Shape::Union(vec![explicit(&[(1, 1, INF)]), explicit(&[(1, 1, Some(2)), (2, 1, Some(1))])], vec![]),
            false,
            false,
        ),
        case(
            "repeated p=2",
            Shape::Repeated { p: 2, alphas: vec![q(2, 1), q(4, 1), q(8, 1), q(16, 1)] },
            false,
            true,
        ),
        case(
            "repeated p=3",
            Shape::Repeated { p: 3, alphas: vec![q(3, 1), q(9, 2), q(27, 1)] },
            false,
            true,
        ),
    ];
    // the data files must describe the same profiles
    for c in out.iter_mut().filter(|c| c.name.starts_with("data/")) {
        let path = root().join(format!("{}.json", c.name));
        let text = std::fs::read_to_string(&path).expect("data file");
        let loaded: SpectralProfile = serde_json::from_str(&text).expect("valid profile");
        assert_eq!(loaded, c.profile, "{} does not match its construction", c.name);
        c.profile = loaded;
    }
    out
}

fn probes(case: &Case, r: &mut ChaCha8Rng) -> Vec<Rational> {
    let mut out: BTreeSet<Rational> = oracle_values(&case.shape, 12);
    out.extend(oracle_acc(&case.shape));
    out.extend(case.profile.diagonal_prefix(12));
    let shifted: Vec<Rational> = out.iter().flat_map(|v| [v * &q(2, 1), -v, v + &q(1, 7)]).collect();
    out.extend(shifted);
    out.extend((0..20).map(|_| gen::rational(r, 9)));
    out.into_iter().collect()
}

fn spectral_identities() -> Outcome {
    let cases = battery();
    ensure!(cases.len() >= 20, "battery has only {} profiles", cases.len());
    let mut r = rng(700);
    let mut probed = 0;
    for case in &cases {
        let name = case.name;
        let s = &case.shape;
        let report = spectrum_report(&case.profile);
        let union: BTreeSet<Rational> = report.sigma_e_prime.union(&report.sigma_e_double_prime).cloned().collect();
        ensure!(report.sigma_e == union, "{name}: sigma_e != sigma_e' u sigma_e''");
        ensure!(report.sigma_e == oracle_sigma_e(s), "{name}: sigma_e {:?} vs oracle {:?}", report.sigma_e, oracle_sigma_e(s));

        // sigma_e' is the boundary: limit points that are not eigenvalues
        let boundary: BTreeSet<Rational> =
            oracle_acc(s).into_iter().filter(|a| oracle_mult(s, a) == Some(0)).collect();
        ensure!(report.sigma_e_prime == boundary, "{name}: sigma_e' {:?} vs boundary {boundary:?}", report.sigma_e_prime);

        for v in &report.sigma_e_double_prime {
            ensure!(report.point_spectrum.contains(v), "{name}: {v} in sigma_e'' but not an eigenvalue");
            ensure!(oracle_mult(s, v).is_none(), "{name}: {v} in sigma_e'' without infinite multiplicity");
        }

        for lam in probes(case, &mut r) {
            probed += 1;
            let m = case.profile.multiplicity(&lam);
            let d = cokernel_dim(&case.profile, &lam);
            let expected = oracle_mult(s, &lam).map_or(Multiplicity::Infinite, Multiplicity::Finite);
            ensure!(m == expected, "{name}: multiplicity at {lam} is {m}, oracle {expected}");
            ensure!(m == d, "{name}: eta = {m} but delta = {d} at {lam}");
            let st = fredholm_status(&case.profile, &lam);
            ensure!(st.eta == st.delta, "{name}: status eta != delta at {lam}");
            let essential = oracle_sigma_e(s).contains(&lam);
            ensure!(
                (st.kind == FredholmKind::NotFredholm) == essential,
                "{name}: {lam} classified {:?}, essential = {essential}",
                st.kind
            );
            let in_sigma = expected != Multiplicity::Finite(0) || oracle_acc(s).contains(&lam);
            ensure!(report.sigma.contains(&lam) == in_sigma, "{name}: sigma membership of {lam}");
            ensure!(report.point_spectrum.contains(&lam) == (expected != Multiplicity::Finite(0)), "{name}: point spectrum membership of {lam}");
        }

        let fr = finite_rank_diag_report(&case.profile);
        ensure!(fr.is_ok() == case.finite_rank, "{name}: finite-rank detection is {}", fr.is_ok());
        if let Ok(fr) = fr {
            ensure!(fr.sigma_e == BTreeSet::from([Rational::zero()]), "{name}: finite rank sigma_e = {:?}", fr.sigma_e);
            let mut values = oracle_values(s, 0);
            values.insert(Rational::zero());
            ensure!(fr.sigma.as_finite() == Some(values), "{name}: finite rank spectrum is not the listed finite set");
        }
        if case.repeated {
            ensure!(report.sigma.as_finite() == Some(report.sigma_e.clone()), "{name}: sigma_e != sigma");
            ensure!(report.sigma_e == oracle_values(s, 0), "{name}: sigma_e is not the repeated set");
        }
    }
    Ok(format!("{} profiles, {probed} probes", cases.len()))
}

fn range_is_kernel_complement() -> Outcome {
    let cases = battery();
    let mut r = rng(800);
    let mut checks = 0;
    for case in &cases {
        let name = case.name;
        let full = case.profile.diagonal_prefix(20);
        for d in &full {
            ensure!(oracle_mult(&case.shape, d) != Some(0), "{name}: diagonal entry {d} is not an eigenvalue");
        }
        for lam in probes(case, &mut r) {
            for t in 1..=20 {
                let diag = case.profile.diagonal_prefix(t);
                ensure!(diag[..] == full[..diag.len()], "{name}: prefix of length {t} is not a prefix");
                let kernel: BTreeSet<usize> = (0..diag.len()).filter(|&i| diag[i] == lam).collect();
                let range: BTreeSet<usize> = (0..diag.len()).filter(|&i| !(&lam - &diag[i]).is_zero()).collect();
                let complement: BTreeSet<usize> = (0..diag.len()).filter(|i| !kernel.contains(i)).collect();
                ensure!(range == complement, "{name}: oracle range != kernel complement at {lam}, t={t}");
                let split = kernel_range_split(&case.profile, &lam, t).map_err(|e| e.to_string())?;
                ensure!(split.kernel.indices == kernel, "{name}: kernel at {lam}, t={t}");
                ensure!(split.range.indices == range, "{name}: range at {lam}, t={t}");
                ensure!(split.range_is_kernel_perp, "{name}: split flag false at {lam}, t={t}");
                ensure!(range_equals_kernel_perp(&case.profile, &lam, t), "{name}: predicate false at {lam}, t={t}");
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} (profile, lambda, t) checks"))
}

// ---------------------------------------------------------------------------
// 9. Diagonal of the assembled matrix.

fn theta_diagonal() -> Outcome {
    const CASES: usize = 1_000;
    let mut r = rng(900);
    let mut rank_one = 0;
    for _ in 0..CASES {
        let t = r.gen_range(1..=10);
        let m = r.gen_range(1..=3);
        let (lambda, pert) = gen::perturbation(&mut r, t, m, 9);
        let op = assemble(&lambda, &pert).map_err(|e| e.to_string())?;
        let w = pert.weights().values();
        for i in 0..t {
            for j in 0..t {
                let mut e = if i == j { lambda[i].clone() } else { Rational::zero() };
                for k in pert.pairs() {
                    e = &e + &(&(&k.u.coords[i] * &w[j]) * &k.v.coords[j]);
                }
                ensure!(*op.entries.get(i, j) == e, "entry ({i},{j}) is {}, oracle {e}", op.entries.get(i, j));
            }
        }
        let theta = theta_sequence(&lambda, &pert).map_err(|e| e.to_string())?;
        ensure!(theta == op.entries.diag(), "theta differs from the matrix diagonal");
        if m == 1 {
            rank_one += 1;
            let (a, b) = (&pert.pairs()[0].u, &pert.pairs()[0].v);
            for j in 0..t {
                let expect = &lambda[j] + &(&(&w[j] * &a.coords[j]) * &b.coords[j]);
                ensure!(theta[j] == expect, "theta_{j} = {} but lambda_j + w_j a_j b_j = {expect}", theta[j]);
            }
        }
    }
    Ok(format!("{CASES} operators, {rank_one} of rank one"))
}

// ---------------------------------------------------------------------------
// 10. Elimination agrees with the characteristic polynomial.

fn eigen_oracle() -> Outcome {
    const CASES: usize = 200;
    let mut r = rng(1000);
    let mut checks = 0;
    let mut hits = 0;
    for case in 0..CASES {
        let t = r.gen_range(1..=6);
        let m = r.gen_range(1..=3);
        let (lambda, pert) = gen::perturbation(&mut r, t, m, 3);
        let op = assemble(&lambda, &pert).map_err(|e| e.to_string())?;
        let poly = char_poly_oracle(&op).map_err(|e| e.to_string())?;
        let mut cands: BTreeSet<Rational> =
            rational_root_candidates(&poly).map_err(|e| format!("case {case}: {e}"))?;
        cands.extend(lambda.iter().cloned());
        cands.extend((0..50).map(|_| gen::rational(&mut r, 6)));
        for lam in &cands {
            let rows = shifted_rows(&op.entries, lam);
            let (rank, det) = gauss(rows.clone());
            let rep = is_eigenvalue(&op, lam);
            let root = poly.eval(lam).is_zero();
            ensure!(root == det.is_zero(), "case {case}: p({lam}) = {} but det = {det}", poly.eval(lam));
            ensure!(rep.is_eigenvalue == root, "case {case}: elimination says {} at {lam}, polynomial {root}", rep.is_eigenvalue);
            ensure!(rep.rank + rep.kernel_dim == t, "case {case}: rank {} + nullity {} != {t}", rep.rank, rep.kernel_dim);
            ensure!(rep.rank == rank, "case {case}: rank {} vs oracle {rank} at {lam}", rep.rank);
            ensure!(rep.kernel_basis.len() == rep.kernel_dim, "case {case}: basis size");
            for v in &rep.kernel_basis {
                ensure!(!v.is_zero(), "case {case}: zero kernel vector");
                for row in &rows {
                    let s: Rational = row.iter().zip(&v.coords).map(|(a, b)| a * b).sum();
                    ensure!(s.is_zero(), "case {case}: kernel vector not annihilated at {lam}");
                }
            }
            checks += 1;
            hits += usize::from(root);
        }
    }
    Ok(format!("{CASES} operators, {checks} values probed, {hits} eigenvalues"))
}

// ---------------------------------------------------------------------------
// 11. The worked triangular case.

const TRIANGULAR_ARGS: [&str; 10] = [
    "perturb",
    "--lambda",
    "[1,2,3]",
    "--omega",
    "[1,1,1]",
    "--pairs",
    "data/triangular_pairs.json",
    "--check-lambda",
    "3",
    "--check-lambda",
];

fn worked_case() -> Outcome {
    let lambda = vec![q(1, 1), q(2, 1), q(3, 1)];
    let (u, v) = ([1, 1, 0], [0, 1, 1]);
    let w = WeightSeq::ones(3);
    let pert = FiniteRankPerturbation::new(
        w,
        vec![RankOne {
            u: Vector::new(u.iter().map(|&x| q(x, 1)).collect()),
            v: Vector::new(v.iter().map(|&x| q(x, 1)).collect()),
        }],
    )
    .map_err(|e| e.to_string())?;
    let cmp = spectrum_compare(&lambda, &pert).map_err(|e| e.to_string())?;

    // oracle matrix: lambda_i delta_ij + u_i omega_j v_j with omega = 1
    let oracle: Vec<Vec<i64>> = (0..3)
        .map(|i| (0..3).map(|j| if i == j { i as i64 + 1 } else { 0 } + u[i] * v[j]).collect())
        .collect();
    let rows: Vec<&[i64]> = oracle.iter().map(Vec::as_slice).collect();
    let oracle_m = Matrix::from_ints(&rows).unwrap();
    ensure!(oracle == vec![vec![1, 1, 1], vec![0, 3, 1], vec![0, 0, 3]], "oracle matrix {oracle:?}");
    ensure!(cmp.matrix == oracle_m, "matrix {:?}", cmp.matrix);
    ensure!(cmp.theta == vec![q(1, 1), q(3, 1), q(3, 1)], "theta {:?}", cmp.theta);

    // upper triangular: the eigenvalues are the diagonal entries
    let eig: BTreeSet<Rational> = (0..3).map(|i| q(oracle[i][i], 1)).collect();
    ensure!(cmp.point_spectrum == eig, "point spectrum {:?} vs {eig:?}", cmp.point_spectrum);
    for root in &cmp.roots {
        let (rank, _) = gauss(shifted_rows(&oracle_m, &root.value));
        ensure!(root.geometric == 3 - rank, "geometric multiplicity at {}", root.value);
        let alg = oracle.iter().enumerate().filter(|(i, row)| q(row[*i], 1) == root.value).count();
        ensure!(root.algebraic as usize == alg, "algebraic multiplicity at {}", root.value);
    }
    let at3 = cmp.roots.iter().find(|r| r.value == q(3, 1)).ok_or("3 missing from the roots")?;
    ensure!(at3.geometric == 1 && at3.algebraic == 2, "multiplicities at 3: {at3:?}");
    ensure!(cmp.relation == SetRelation::Equal, "relation {:?}", cmp.relation);

    // byte-stable CLI report
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_ultraspec"))
            .current_dir(root())
            .args(TRIANGULAR_ARGS)
            .arg("2")
            .output()
            .expect("binary runs")
    };
    let (a, b) = (run(), run());
    ensure!(a.status.success(), "CLI exited with {:?}", a.status.code());
    ensure!(a.stdout == b.stdout, "two runs differ");
    let golden = std::fs::read(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/triangular.json"))
        .map_err(|e| format!("golden report: {e}"))?;
    ensure!(a.stdout == golden, "report differs from tests/golden/triangular.json");
    let report: serde_json::Value = serde_json::from_slice(&a.stdout).map_err(|e| e.to_string())?;
    ensure!(report["result"]["matrix"] == serde_json::to_value(&cmp.matrix).unwrap(), "CLI matrix");
    ensure!(report["result"]["point_spectrum"] == serde_json::json!(["1", "3"]), "CLI point spectrum");
    Ok(format!("char poly {}, report {} bytes", cmp.char_poly, a.stdout.len()))
}

// ---------------------------------------------------------------------------

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("valuation axioms", valuation_axioms),
        ("integer boundedness", integer_bound),
        ("isosceles triangles", isosceles),
        ("ball dichotomy", ball_dichotomy),
        ("geometric series", geometric_series),
        ("cauchy-schwarz", cauchy_schwarz),
        ("spectral identities", spectral_identities),
        ("range is kernel complement", range_is_kernel_complement),
        ("theta diagonal", theta_diagonal),
        ("eigenvalue oracle equivalence", eigen_oracle),
        ("worked triangular case", worked_case),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}

//! Seeded property suites. Every property draws from its own ChaCha stream
//! (seed, property index), so results do not depend on scheduling.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use ultraspec_core::linalg::{char_poly, rational_root_candidates};
use ultraspec_core::numeric::{Poly, Rational, RationalFunction};
use ultraspec_core::padic::{approx_add, approx_from_rational, approx_mul, sum_series, SequenceOracle};
use ultraspec_core::perturbation::{assemble, is_eigenvalue, theta_sequence, FiniteRankPerturbation, RankOne};
use ultraspec_core::spectral::{
    cokernel_dim, finite_rank_diag_report, kernel_range_split, spectrum_report, ExplicitEntry, Multiplicity,
    SpectralProfile,
};
use ultraspec_core::ultrametric::{
    ball_contains, balls_relation, isosceles_witness, recenter_equivalent, shell_point, Ball, Relation, Side,
};
use ultraspec_core::valuation::{
    abs_p, strong_triangle_holds, vfunc_inf, vfunc_px, vp_rat, AbsValue, PAdicContext, ValuationValue,
};
use ultraspec_core::vectors::{inner_t, norm_max, Vector, WeightSeq};

use crate::{to_value, Outcome, PropsArgs};

/// Random inputs shared by the property suites and the acceptance tests.
pub mod gen {
    use super::*;

    pub const PRIMES: [u64; 5] = [2, 3, 5, 7, 11];

    pub fn ctx(rng: &mut impl Rng, primes: &[u64]) -> PAdicContext {
        PAdicContext::new(*primes.choose(rng).expect("nonempty")).expect("prime")
    }

    /// `a/b` with `|a| <= h`, `1 <= b <= h`.
    pub fn rational(rng: &mut impl Rng, h: i64) -> Rational {
        Rational::new(rng.gen_range(-h..=h), rng.gen_range(1..=h)).expect("nonzero denominator")
    }

    pub fn nonzero_rational(rng: &mut impl Rng, h: i64) -> Rational {
        loop {
            let x = rational(rng, h);
            if !x.is_zero() {
                return x;
            }
        }
    }

    /// A rational with a p-power factor, so valuations spread over `-k..=k`.
    pub fn padic_rational(rng: &mut impl Rng, ctx: &PAdicContext, h: i64, k: i64) -> Rational {
        rational(rng, h) * ctx.power(-rng.gen_range(-k..=k))
    }

    /// A rational of valuation zero.
    pub fn unit(rng: &mut impl Rng, ctx: &PAdicContext, h: i64) -> Rational {
        loop {
            let x = nonzero_rational(rng, h);
            if vp_rat(ctx, &x) == ValuationValue::Finite(0) {
                return x;
            }
        }
    }

    pub fn vector(rng: &mut impl Rng, ctx: &PAdicContext, t: usize) -> Vector {
        Vector::new((0..t).map(|_| padic_rational(rng, ctx, 20, 3)).collect())
    }

    pub fn ball(rng: &mut impl Rng, ctx: &PAdicContext) -> Ball {
        let center = padic_rational(rng, ctx, 12, 2);
        let k = rng.gen_range(-3..=3);
        if rng.gen_bool(0.5) {
            Ball::open(center, k)
        } else {
            Ball::closed(center, k)
        }
    }

    /// Centers, points on the shells around each center at and near each
    /// radius, and a few unrelated points.
    pub fn probes(rng: &mut impl Rng, ctx: &PAdicContext, balls: &[&Ball], n: usize) -> Vec<Rational> {
        let mut out: Vec<Rational> = balls.iter().map(|b| b.center.clone()).collect();
        while out.len() < n {
            if rng.gen_ratio(1, 10) {
                out.push(padic_rational(rng, ctx, 30, 4));
                continue;
            }
            let b = balls.choose(rng).expect("nonempty");
            let k = b.radius.exponent().expect("nonzero radius") + rng.gen_range(-2..=2);
            out.push(shell_point(ctx, &b.center, k, &unit(rng, ctx, 12)));
        }
        out
    }

    pub fn multiplicity(rng: &mut impl Rng) -> Multiplicity {
        if rng.gen_ratio(1, 4) {
            Multiplicity::Infinite
        } else {
            Multiplicity::Finite(rng.gen_range(1..=3))
        }
    }

    pub fn explicit(rng: &mut impl Rng, allow_infinite: bool) -> SpectralProfile {
        let n = rng.gen_range(1..=5);
        let values: BTreeSet<Rational> = (0..n).map(|_| rational(rng, 6)).collect();
        SpectralProfile::explicit(
            values
                .into_iter()
                .map(|v| {
                    let m = if allow_infinite {
                        multiplicity(rng)
                    } else {
                        Multiplicity::Finite(rng.gen_range(1..=3))
                    };
                    ExplicitEntry::new(v, m)
                })
                .collect(),
        )
        .expect("distinct values")
    }

    pub fn geometric(rng: &mut impl Rng, ctx: &PAdicContext) -> SpectralProfile {
        let c = nonzero_rational(rng, 6);
        let alpha = unit(rng, ctx, 4) * ctx.power(rng.gen_range(1..=2));
        SpectralProfile::geometric(*ctx, c, alpha, 8).expect("|alpha| < 1")
    }

    /// `(0, Infinite)` plus a few nonzero values of finite multiplicity.
    pub fn finite_rank(rng: &mut impl Rng) -> SpectralProfile {
        let n = rng.gen_range(0..=4);
        let values: BTreeSet<Rational> = (0..n).map(|_| nonzero_rational(rng, 6)).collect();
        let mut entries = vec![ExplicitEntry::new(Rational::zero(), Multiplicity::Infinite)];
        entries.extend(
            values
                .into_iter()
                .map(|v| ExplicitEntry::new(v, Multiplicity::Finite(rng.gen_range(1..=3)))),
        );
        SpectralProfile::explicit(entries).expect("distinct values")
    }

    /// Any of the above, or a union of a geometric family with explicit
    /// values kept away from its limit point.
    pub fn profile(rng: &mut impl Rng) -> SpectralProfile {
        let c = ctx(rng, &[2, 3, 5]);
        match rng.gen_range(0..4) {
            0 => explicit(rng, true),
            1 => geometric(rng, &c),
            2 => finite_rank(rng),
            _ => {
                let mut parts = vec![geometric(rng, &c)];
                if rng.gen_bool(0.5) {
                    parts.push(geometric(rng, &c));
                }
                let e = explicit(rng, true);
                let SpectralProfile::ExplicitFinite { entries } = e else { unreachable!() };
                let entries: Vec<_> = entries.into_iter().filter(|e| !e.value.is_zero()).collect();
                if !entries.is_empty() {
                    parts.push(SpectralProfile::explicit(entries).expect("subset of a valid profile"));
                }
                SpectralProfile::union(parts, vec![]).expect("0 is not an eigenvalue")
            }
        }
    }

    pub fn perturbation(rng: &mut impl Rng, t: usize, m: usize, h: i64) -> (Vec<Rational>, FiniteRankPerturbation) {
        let lambda: Vec<Rational> = (0..t).map(|_| rational(rng, h)).collect();
        let omega = (0..t).map(|_| nonzero_rational(rng, h)).collect();
        let pairs = (0..m)
            .map(|_| RankOne {
                u: Vector::new((0..t).map(|_| rational(rng, h)).collect()),
                v: Vector::new((0..t).map(|_| rational(rng, h)).collect()),
            })
            .collect();
        let pert = FiniteRankPerturbation::new(WeightSeq::new(omega).expect("nonzero weights"), pairs)
            .expect("consistent lengths");
        (lambda, pert)
    }

    /// Monic polynomial with roots drawn from `-3..=3`, times a constant.
    pub fn poly(rng: &mut impl Rng) -> Poly {
        let deg = rng.gen_range(0..=3);
        let mut p = Poly::constant(nonzero_rational(rng, 5));
        for _ in 0..deg {
            let root = Rational::from(rng.gen_range(-3i64..=3));
            p = &p * &Poly::linear_root(&root);
        }
        if rng.gen_ratio(1, 3) {
            p = &p * &Poly::from_ints(&[1, 0, 1]);
        }
        p
    }
}

type Check = fn(&mut ChaCha8Rng) -> Result<(), String>;

struct Property {
    name: &'static str,
    topic: &'static str,
    check: Check,
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

const PROPERTIES: &[Property] = &[
    Property { name: "valuation_multiplicative", topic: "p-adic valuation", check: valuation_multiplicative },
    Property { name: "strong_triangle_with_equality", topic: "p-adic valuation", check: strong_triangle },
    Property { name: "integers_have_abs_at_most_one", topic: "non-Archimedean absolute values", check: integer_bound },
    Property { name: "abs_is_p_to_minus_valuation", topic: "p-adic absolute value", check: abs_matches_valuation },
    Property { name: "function_field_valuation_axioms", topic: "valuations of Q(x)", check: funcfield_axioms },
    Property { name: "triangles_are_isosceles", topic: "ultrametric geometry", check: isosceles },
    Property { name: "balls_nested_or_disjoint", topic: "ultrametric geometry", check: balls_dichotomy },
    Property { name: "every_point_is_a_center", topic: "ultrametric geometry", check: every_point_center },
    Property { name: "geometric_series_converges", topic: "completion of Q", check: geometric_series },
    Property { name: "expansion_is_ring_homomorphism", topic: "completion of Q", check: expansion_homomorphism },
    Property { name: "cauchy_schwarz", topic: "non-Archimedean vector spaces", check: cauchy_schwarz },
    Property { name: "max_norm_ultrametric", topic: "non-Archimedean vector spaces", check: norm_ultrametric },
    Property { name: "kernel_equals_cokernel", topic: "diagonal operators", check: kernel_cokernel },
    Property { name: "essential_spectrum_decomposition", topic: "diagonal operators", check: essential_decomposition },
    Property { name: "range_is_kernel_complement", topic: "diagonal operators", check: range_kernel_perp },
    Property { name: "finite_rank_essential_is_zero", topic: "diagonal operators", check: finite_rank },
    Property { name: "theta_is_matrix_diagonal", topic: "finite-rank perturbations", check: theta_diagonal },
    Property { name: "eigenvalue_oracle_agreement", topic: "finite-rank perturbations", check: eigen_oracle },
];

pub fn property_names() -> Vec<&'static str> {
    PROPERTIES.iter().map(|p| p.name).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyResult {
    pub name: &'static str,
    pub topic: &'static str,
    pub cases: u64,
    pub passed: u64,
    pub failed: u64,
    /// Case index and message of the first failure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<(u64, String)>,
}

fn run_property(index: usize, p: &Property, seed: u64, cases: u64) -> PropertyResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let mut passed = 0;
    let mut first_failure = None;
    for case in 0..cases {
        match (p.check)(&mut rng) {
            Ok(()) => passed += 1,
            Err(msg) => {
                first_failure.get_or_insert((case, msg));
            }
        }
    }
    PropertyResult {
        name: p.name,
        topic: p.topic,
        cases,
        passed,
        failed: cases - passed,
        first_failure,
    }
}

/// Runs every property (or those matching `only`) and reports counts.
pub fn run_suites(seed: u64, cases: u64, only: Option<&str>) -> Vec<PropertyResult> {
    PROPERTIES
        .par_iter()
        .enumerate()
        .filter(|(_, p)| only.is_none_or(|f| p.name.contains(f)))
        .map(|(i, p)| run_property(i, p, seed, cases))
        .collect()
}

pub fn run(a: &PropsArgs) -> Outcome {
    let results = run_suites(a.seed, a.cases, a.only.as_deref());
    let failed: u64 = results.iter().map(|r| r.failed).sum();
    let mut warnings = Vec::new();
    if results.is_empty() {
        warnings.push("no property matched the filter".to_string());
    }
    Outcome {
        result: serde_json::json!({
            "seed": a.seed,
            "cases": a.cases,
            "all_passed": failed == 0,
            "total_failed": failed,
            "properties": to_value(&results),
        }),
        warnings,
        failed: failed > 0,
    }
}

fn valuation_multiplicative(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let ctx = gen::ctx(rng, &gen::PRIMES);
    let x = gen::padic_rational(rng, &ctx, 50, 3);
    let y = gen::padic_rational(rng, &ctx, 50, 3);
    let lhs = vp_rat(&ctx, &(&x * &y));
    let rhs = vp_rat(&ctx, &x) + vp_rat(&ctx, &y);
    ensure!(lhs == rhs, "p={}: V({x}*{y}) = {lhs} but V(x)+V(y) = {rhs}", ctx.p());
    Ok(())
}

fn strong_triangle(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let ctx = gen::ctx(rng, &gen::PRIMES);
    let x = gen::padic_rational(rng, &ctx, 50, 3);
    let y = if rng.gen_ratio(1, 4) { -&x + gen::padic_rational(rng, &ctx, 5, 5) } else { gen::padic_rational(rng, &ctx, 50, 3) };
    let (vx, vy, vs) = (vp_rat(&ctx, &x), vp_rat(&ctx, &y), vp_rat(&ctx, &(&x + &y)));
    ensure!(strong_triangle_holds(vx, vy, vs), "p={}: V({x})={vx}, V({y})={vy}, V(sum)={vs}", ctx.p());
    Ok(())
}

fn integer_bound(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let ctx = gen::ctx(rng, &gen::PRIMES);
    let n = Rational::from(rng.gen_range(-1_000_000_000i64..=1_000_000_000));
    ensure!(abs_p(&ctx, &n) <= AbsValue::ONE, "|{n}|_{} > 1", ctx.p());
    Ok(())
}

fn abs_matches_valuation(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let ctx = gen::ctx(rng, &gen::PRIMES);
    let x = gen::padic_rational(rng, &ctx, 50, 4);
    let a = abs_p(&ctx, &x);
    ensure!(a.to_valuation() == vp_rat(&ctx, &x), "|{x}| = {a} disagrees with V");
    if let Some(k) = a.exponent() {
        // x * |x|_p strips every factor of p
        let unit = &x * &a.to_rational(&ctx);
        ensure!(vp_rat(&ctx, &unit) == ValuationValue::Finite(0), "{x} * p^{k} is not a unit");
    }
    Ok(())
}

fn funcfield_axioms(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let places = [Poly::from_ints(&[-1, 1]), Poly::from_ints(&[1, 0, 1]), Poly::x(), Poly::from_ints(&[2, 1])];
    let f = RationalFunction::new(gen::poly(rng), gen::poly(rng)).expect("nonzero denominator");
    let g = RationalFunction::new(gen::poly(rng), gen::poly(rng)).expect("nonzero denominator");
    let vals = |r: &RationalFunction| -> Vec<ValuationValue> {
        let mut v: Vec<_> = places.iter().map(|p| vfunc_px(r, p).expect("monic place")).collect();
        v.push(vfunc_inf(r));
        v
    };
    let (vf, vg, vfg, vsum) = (vals(&f), vals(&g), vals(&(&f * &g)), vals(&(&f + &g)));
    for i in 0..vf.len() {
        ensure!(vfg[i] == vf[i] + vg[i], "place {i}: V(fg) = {} for f = {f:?}, g = {g:?}", vfg[i]);
        ensure!(strong_triangle_holds(vf[i], vg[i], vsum[i]), "place {i}: V(f+g) = {} for f = {f:?}, g = {g:?}", vsum[i]);
    }
    Ok(())
}

fn isosceles(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let ctx = gen::ctx(rng, &[2, 3, 5]);
    let x = gen::padic_rational(rng, &ctx, 30, 3);
    let y = gen::padic_rational(rng, &ctx, 30, 3);
    let z = gen::padic_rational(rng, &ctx, 30, 3);
    if x == y || y == z || x == z {
        return Ok(());
    }
    let t = isosceles_witness(&ctx, &x, &y, &z).map_err(|e| e.to_string())?;
    let idx = |s: Side| s as usize;
    let (a, b, c) = (t.sides[idx(t.equal_pair[0])], t.sides[idx(t.equal_pair[1])], t.sides[idx(t.third)]);
    ensure!(a == b && c <= a, "p={}: triangle {x}, {y}, {z} has sides {:?}", ctx.p(), t.sides);
    Ok(())
}

fn balls_dichotomy(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let ctx = gen::ctx(rng, &[2, 3, 5]);
    let a = gen::ball(rng, &ctx);
    let b = if rng.gen_bool(0.5) {
        // a ball centered inside a, so that nested cases are common
        let c = shell_point(&ctx, &a.center, a.closed_exponent() - rng.gen_range(0..=2), &gen::unit(rng, &ctx, 6));
        Ball::closed(c, a.closed_exponent() + rng.gen_range(-2..=2))
    } else {
        gen::ball(rng, &ctx)
    };
    let rel = balls_relation(&ctx, &a, &b);
    for y in gen::probes(rng, &ctx, &[&a, &b], 40) {
        let (ia, ib) = (ball_contains(&ctx, &a, &y), ball_contains(&ctx, &b, &y));
        let ok = match rel {
            Relation::Disjoint => !(ia && ib),
            Relation::LeftInsideRight => !ia || ib,
            Relation::RightInsideLeft => !ib || ia,
            Relation::Equal => ia == ib,
        };
        ensure!(ok, "p={}: {a:?} vs {b:?} judged {rel:?} but {y} is in a: {ia}, in b: {ib}", ctx.p());
    }
    Ok(())
}

fn every_point_center(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let ctx = gen::ctx(rng, &[2, 3, 5]);
    let b = gen::ball(rng, &ctx);
    let probes = gen::probes(rng, &ctx, &[&b], 20);
    for y in probes.iter().filter(|y| ball_contains(&ctx, &b, y)) {
        ensure!(recenter_equivalent(&ctx, &b, y), "recentering {b:?} at {y} changes the ball");
        let moved = b.recentered(y.clone());
        for z in &probes {
            ensure!(ball_contains(&ctx, &b, z) == ball_contains(&ctx, &moved, z), "{z} separates {b:?} from its recentering at {y}");
        }
    }
    Ok(())
}

fn geometric_series(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let ctx = gen::ctx(rng, &gen::PRIMES);
    let n = rng.gen_range(1..=12u64);
    let p = Rational::from(ctx.p() as i64);
    let limit = (Rational::one() - &p).recip().map_err(|e| e.to_string())?;
    let partial: Rational = (0..n).map(|i| ctx.power(i as i64)).sum();
    let gap = abs_p(&ctx, &(partial - &limit));
    ensure!(gap <= AbsValue::PPow(-(n as i64)), "p={}: |S_{n} - 1/(1-p)| = {gap}", ctx.p());
    let pp = ctx;
    let seq = SequenceOracle::new(ctx, move |i| pp.power(i as i64)).with_tail(|i| i as i64);
    let s = sum_series(&seq, n as i64, 64).map_err(|e| e.to_string())?;
    let expected = approx_from_rational(&ctx, &limit, n as i64);
    ensure!(s.congruent(&expected).map_err(|e| e.to_string())?, "p={}: series sum {s} vs {expected}", ctx.p());
    Ok(())
}

fn expansion_homomorphism(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let ctx = gen::ctx(rng, &[2, 3, 5, 7]);
    let x = gen::padic_rational(rng, &ctx, 30, 2);
    let y = gen::padic_rational(rng, &ctx, 30, 2);
    let (nx, ny) = (rng.gen_range(0..8), rng.gen_range(0..8));
    let (ax, ay) = (approx_from_rational(&ctx, &x, nx), approx_from_rational(&ctx, &y, ny));
    let sum = approx_add(&ax, &ay).map_err(|e| e.to_string())?;
    let prod = approx_mul(&ax, &ay).map_err(|e| e.to_string())?;
    let sum_ref = approx_from_rational(&ctx, &(&x + &y), sum.precision());
    let prod_ref = approx_from_rational(&ctx, &(&x * &y), prod.precision());
    ensure!(sum.congruent(&sum_ref).map_err(|e| e.to_string())?, "p={}: {x} + {y}: {sum} vs {sum_ref}", ctx.p());
    ensure!(prod.congruent(&prod_ref).map_err(|e| e.to_string())?, "p={}: {x} * {y}: {prod} vs {prod_ref}", ctx.p());
    Ok(())
}

fn cauchy_schwarz(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let ctx = gen::ctx(rng, &[2, 3, 5]);
    let t = rng.gen_range(1..=6);
    let (x, y) = (gen::vector(rng, &ctx, t), gen::vector(rng, &ctx, t));
    let ip = abs_p(&ctx, &inner_t(&x, &y).map_err(|e| e.to_string())?);
    let bound = norm_max(&ctx, &x).times(norm_max(&ctx, &y));
    ensure!(ip <= bound, "p={}: |<{x:?},{y:?}>| = {ip} > {bound}", ctx.p());
    Ok(())
}

fn norm_ultrametric(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let ctx = gen::ctx(rng, &[2, 3, 5]);
    let t = rng.gen_range(1..=6);
    let (x, y) = (gen::vector(rng, &ctx, t), gen::vector(rng, &ctx, t));
    let s = norm_max(&ctx, &(&x + &y));
    let m = norm_max(&ctx, &x).max(norm_max(&ctx, &y));
    ensure!(s <= m, "p={}: ||x+y|| = {s} > {m}", ctx.p());
    Ok(())
}

fn probe_values(rng: &mut ChaCha8Rng, profile: &SpectralProfile) -> Vec<Rational> {
    let mut v: Vec<Rational> = profile.diagonal_prefix(6);
    v.extend(profile.accumulation_points());
    v.push(gen::rational(rng, 8));
    v
}

fn kernel_cokernel(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let profile = gen::profile(rng);
    for lam in probe_values(rng, &profile) {
        let (eta, delta) = (profile.multiplicity(&lam), cokernel_dim(&profile, &lam));
        ensure!(eta == delta, "eta = {eta}, delta = {delta} at {lam} for {profile:?}");
    }
    Ok(())
}

fn essential_decomposition(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let profile = gen::profile(rng);
    let r = spectrum_report(&profile);
    let union: BTreeSet<_> = r.sigma_e_prime.union(&r.sigma_e_double_prime).cloned().collect();
    ensure!(r.sigma_e == union, "sigma_e != sigma_e' u sigma_e'' for {profile:?}");
    let boundary: BTreeSet<_> = profile
        .accumulation_points()
        .into_iter()
        .filter(|a| !r.point_spectrum.contains(a))
        .collect();
    ensure!(r.sigma_e_prime == boundary, "sigma_e' is not the boundary for {profile:?}");
    ensure!(r.sigma_e_double_prime.iter().all(|v| r.point_spectrum.contains(v)), "sigma_e'' not inside sigma_p for {profile:?}");
    Ok(())
}

fn range_kernel_perp(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let profile = gen::profile(rng);
    let t = rng.gen_range(0..=20);
    for lam in probe_values(rng, &profile) {
        let s = kernel_range_split(&profile, &lam, t).map_err(|e| e.to_string())?;
        ensure!(s.range_is_kernel_perp, "range differs from kernel complement at {lam}, t = {t}");
    }
    Ok(())
}

fn finite_rank(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let profile = gen::finite_rank(rng);
    let r = finite_rank_diag_report(&profile).map_err(|e| e.to_string())?;
    ensure!(r.sigma_e == BTreeSet::from([Rational::zero()]), "sigma_e = {:?}", r.sigma_e);
    ensure!(r.sigma.is_finite(), "infinite spectrum for {profile:?}");
    Ok(())
}

fn theta_diagonal(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let t = rng.gen_range(1..=10);
    let m = rng.gen_range(1..=3);
    let (lambda, pert) = gen::perturbation(rng, t, m, 9);
    let diag = assemble(&lambda, &pert).map_err(|e| e.to_string())?.entries.diag();
    let theta = theta_sequence(&lambda, &pert).map_err(|e| e.to_string())?;
    ensure!(diag == theta, "diagonal {diag:?} vs theta {theta:?}");
    Ok(())
}

fn eigen_oracle(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let t = rng.gen_range(1..=5);
    let m = rng.gen_range(1..=2);
    let (lambda, pert) = gen::perturbation(rng, t, m, 2);
    let op = assemble(&lambda, &pert).map_err(|e| e.to_string())?;
    let p = char_poly(&op.entries).map_err(|e| e.to_string())?;
    let mut probes: Vec<Rational> = match rational_root_candidates(&p) {
        Ok(c) => c.into_iter().collect(),
        Err(_) => Vec::new(),
    };
    probes.extend(theta_sequence(&lambda, &pert).map_err(|e| e.to_string())?);
    probes.extend((0..5).map(|_| gen::rational(rng, 4)));
    for lam in probes {
        let r = is_eigenvalue(&op, &lam);
        ensure!(r.rank + r.kernel_dim == t, "rank-nullity fails at {lam}");
        ensure!(r.is_eigenvalue == p.eval(&lam).is_zero(), "elimination and char poly disagree at {lam}");
    }
    Ok(())
}

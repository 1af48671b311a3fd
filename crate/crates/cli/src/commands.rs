//! One handler per subcommand. Each returns the `result` payload of the
//! report; the envelope is added by [`crate::run`].

use serde_json::{json, Map, Value};
use ultraspec_core::numeric::{parse_rational_function, Rational};
use ultraspec_core::padic::approx_from_rational;
use ultraspec_core::perturbation::{
    assemble, is_eigenvalue, spectrum_compare, theta_sequence, FiniteRankPerturbation, RankOne,
};
use ultraspec_core::spectral::{
    cokernel_dim, finite_rank_diag_report, fredholm_status, kernel_range_split, spectrum_report,
    SpectralProfile,
};
use ultraspec_core::ultrametric::{ball_contains, balls_relation, isosceles_witness};
use ultraspec_core::valuation::{abs_p, dist_p, ring_membership, vp_rat, AbsValue, PAdicContext};
use ultraspec_core::linalg::CHAR_POLY_LIMIT;
use ultraspec_core::vectors::{inner_omega, inner_t, norm_max, Vector, WeightSeq};

use crate::{
    parse, props, to_value, AbsValArgs, BallsArgs, CliError, Command, ExpandArgs, FuncFieldArgs,
    Outcome, PerturbArgs, SpectrumArgs, ValuationArgs, VectorsArgs,
};

pub fn dispatch(cmd: &Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::Valuation(a) => valuation(a),
        Command::AbsVal(a) => absval(a),
        Command::Expand(a) => expand(a),
        Command::Balls(a) => balls(a),
        Command::FuncField(a) => funcfield(a),
        Command::Vectors(a) => vectors(a),
        Command::Spectrum(a) => spectrum(a),
        Command::Perturb(a) => perturb(a),
        Command::Props(a) => Ok(props::run(a)),
    }
}

/// `{"exponent": k, "value": "p^k as a rational"}`; the exponent is null for 0.
fn abs_json(ctx: &PAdicContext, a: AbsValue) -> Value {
    json!({"exponent": a.exponent(), "value": a.to_rational(ctx)})
}

fn valuation(a: &ValuationArgs) -> Result<Outcome, CliError> {
    let ctx = parse::context(a.p)?;
    let x = parse::rational("x", &a.x)?;
    Outcome::ok(json!({"valuation": vp_rat(&ctx, &x)}))
}

fn absval(a: &AbsValArgs) -> Result<Outcome, CliError> {
    let ctx = parse::context(a.p)?;
    let x = parse::rational("x", &a.x)?;
    let mut out = Map::new();
    out.insert("abs".into(), abs_json(&ctx, abs_p(&ctx, &x)));
    if let Some(y) = &a.y {
        let y = parse::rational("y", y)?;
        out.insert("distance".into(), abs_json(&ctx, dist_p(&ctx, &x, &y)));
        if let Some(z) = &a.z {
            let z = parse::rational("z", z)?;
            let t = isosceles_witness(&ctx, &x, &y, &z)?;
            let mut tri = to_value(&t);
            tri["sides"] = Value::Array(t.sides.iter().map(|s| abs_json(&ctx, *s)).collect());
            out.insert("triangle".into(), tri);
        }
    }
    Outcome::ok(out)
}

fn expand(a: &ExpandArgs) -> Result<Outcome, CliError> {
    let ctx = parse::context(a.p)?;
    let x = parse::rational("x", &a.x)?;
    // the expansion starts at p^shift with shift = min(V(x), 0)
    let shift = vp_rat(&ctx, &x).finite().map_or(0, |v| v.min(0));
    let approx = approx_from_rational(&ctx, &x, i64::from(a.digits) + shift);
    Outcome::ok(json!({
        "shift": approx.shift(),
        "digits": approx.digits(),
        "precision": approx.precision(),
    }))
}

fn balls(a: &BallsArgs) -> Result<Outcome, CliError> {
    let ctx = parse::context(a.p)?;
    let ba = parse::ball(&ctx, "a", &a.a)?;
    let bb = parse::ball(&ctx, "b", &a.b)?;
    let mut out = json!({
        "relation": balls_relation(&ctx, &ba, &bb),
        "a": ba,
        "b": bb,
    });
    if !a.points.is_empty() {
        let points = a
            .points
            .iter()
            .map(|t| {
                let y = parse::rational("point", t)?;
                Ok(json!({
                    "point": y,
                    "in_a": ball_contains(&ctx, &ba, &y),
                    "in_b": ball_contains(&ctx, &bb, &y),
                }))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        out["points"] = Value::Array(points);
    }
    Outcome::ok(out)
}

fn funcfield(a: &FuncFieldArgs) -> Result<Outcome, CliError> {
    let place = parse::place(&a.place)?;
    let rf = parse_rational_function(&a.rf).map_err(|e| CliError::usage(format!("--rf: {e}")))?;
    let m = ring_membership(&rf, &place)?;
    Outcome::ok(json!({
        "valuation": m.valuation,
        "in_ring": m.in_ring,
        "in_maximal_ideal": m.in_maximal_ideal,
        "place": place.to_string(),
        "rf": rf.to_string(),
    }))
}

fn vectors(a: &VectorsArgs) -> Result<Outcome, CliError> {
    let ctx = parse::context(a.p)?;
    let x = Vector::new(parse::rational_list("x", &a.x)?);
    let y = Vector::new(parse::rational_list("y", &a.y)?);
    let w = match &a.omega {
        Some(t) => WeightSeq::new(parse::rational_list("omega", t)?)?,
        None => WeightSeq::ones(x.len()),
    };
    let ip = inner_t(&x, &y)?;
    let (nx, ny) = (norm_max(&ctx, &x), norm_max(&ctx, &y));
    let abs_ip = abs_p(&ctx, &ip);
    Outcome::ok(json!({
        "norm_x": abs_json(&ctx, nx),
        "norm_y": abs_json(&ctx, ny),
        "norm_sum": abs_json(&ctx, norm_max(&ctx, &(&x + &y))),
        "inner_t": ip,
        "abs_inner_t": abs_json(&ctx, abs_ip),
        "cauchy_schwarz": abs_ip <= nx.times(ny),
        "inner_omega": inner_omega(&w, &x, &y)?,
    }))
}

fn spectrum(a: &SpectrumArgs) -> Result<Outcome, CliError> {
    let profile: SpectralProfile = parse::read_json("profile", &a.profile)?;
    let report = spectrum_report(&profile);
    let warnings = report.warnings.clone();
    let mut out = to_value(&report);
    let obj = out.as_object_mut().expect("report is an object");
    obj.remove("warnings");
    obj.insert("accumulation_points".into(), to_value(profile.accumulation_points()));
    obj.insert("finite_rank".into(), Value::Bool(finite_rank_diag_report(&profile).is_ok()));
    if let Some(t) = a.truncate {
        obj.insert("diagonal_prefix".into(), to_value(profile.diagonal_prefix(t)));
    }
    if !a.lambdas.is_empty() {
        let probes = a
            .lambdas
            .iter()
            .map(|text| {
                let lam = parse::rational("lambda", text)?;
                let mut probe = json!({
                    "value": lam,
                    "multiplicity": profile.multiplicity(&lam),
                    "cokernel_dim": cokernel_dim(&profile, &lam),
                    "status": fredholm_status(&profile, &lam),
                });
                if let Some(t) = a.truncate {
                    probe["kernel_range"] = to_value(kernel_range_split(&profile, &lam, t)?);
                }
                Ok(probe)
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        obj.insert("probes".into(), Value::Array(probes));
    }
    Ok(Outcome {
        result: out,
        warnings,
        failed: false,
    })
}

fn perturb(a: &PerturbArgs) -> Result<Outcome, CliError> {
    let mut lambda = parse::rational_list("lambda", &a.lambda)?;
    let mut omega = match &a.omega {
        Some(t) => parse::rational_list("omega", t)?,
        None => vec![Rational::one(); lambda.len()],
    };
    let mut pairs = parse::pairs(&a.pairs)?;
    if let Some(t) = a.truncate {
        let cut = |v: &mut Vec<Rational>, what: &str| {
            if v.len() < t {
                return Err(CliError::usage(format!(
                    "--truncate {t} exceeds the length {} of {what}",
                    v.len()
                )));
            }
            v.truncate(t);
            Ok(())
        };
        cut(&mut lambda, "lambda")?;
        cut(&mut omega, "omega")?;
        for (u, v) in &mut pairs {
            cut(&mut u.coords, "a pair vector")?;
            cut(&mut v.coords, "a pair vector")?;
        }
    }
    let pert = FiniteRankPerturbation::new(
        WeightSeq::new(omega)?,
        pairs.into_iter().map(|(u, v)| RankOne { u, v }).collect(),
    )?;
    let op = assemble(&lambda, &pert)?;
    let checks = a
        .check_lambda
        .iter()
        .map(|text| Ok(is_eigenvalue(&op, &parse::rational("check-lambda", text)?)))
        .collect::<Result<Vec<_>, CliError>>()?;

    let t = lambda.len();
    let mut warnings = Vec::new();
    let mut out = if t <= CHAR_POLY_LIMIT {
        let cmp = spectrum_compare(&lambda, &pert)?;
        let mut v = to_value(&cmp);
        v["char_poly_text"] = Value::String(cmp.char_poly.to_string());
        v
    } else {
        warnings.push(format!(
            "characteristic polynomial skipped: t = {t} exceeds the oracle limit {CHAR_POLY_LIMIT}"
        ));
        json!({
            "matrix": op.entries,
            "theta": theta_sequence(&lambda, &pert)?,
        })
    };
    out["t"] = json!(t);
    out["eigen_checks"] = to_value(checks);
    Ok(Outcome {
        result: out,
        warnings,
        failed: false,
    })
}

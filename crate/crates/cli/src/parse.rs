//! Text formats accepted on the command line.

use std::path::Path;

use serde::Deserialize;
use ultraspec_core::numeric::{parse_poly, parse_rational, Rational};
use ultraspec_core::ultrametric::{Ball, BallKind};
use ultraspec_core::valuation::{vp_rat, AbsValue, PAdicContext, PlaceSpec};
use ultraspec_core::vectors::Vector;

use crate::CliError;

pub fn rational(flag: &str, text: &str) -> Result<Rational, CliError> {
    parse_rational(text).map_err(|e| CliError::usage(format!("--{flag}: {e}")))
}

pub fn context(p: u64) -> Result<PAdicContext, CliError> {
    PAdicContext::new(p).map_err(|e| CliError::usage(format!("--p: {e}")))
}

/// `"[1, -2/3, 0]"` or `"1,-2/3,0"`; `"[]"` is the empty list.
pub fn rational_list(flag: &str, text: &str) -> Result<Vec<Rational>, CliError> {
    let t = text.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .unwrap_or(t)
        .trim();
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .enumerate()
        .map(|(i, item)| {
            parse_rational(item.trim())
                .map_err(|e| CliError::usage(format!("--{flag}: item {i}: {e}")))
        })
        .collect()
}

/// A radius given as a rational must be a power of p.
pub fn radius(ctx: &PAdicContext, flag: &str, r: &Rational) -> Result<AbsValue, CliError> {
    let not_power = || {
        CliError::usage(format!(
            "--{flag}: radius {r} is not a power of {}",
            ctx.p()
        ))
    };
    if r.is_zero() || r.is_negative() {
        return Err(not_power());
    }
    let v = vp_rat(ctx, r).finite().ok_or_else(not_power)?;
    if ctx.power(v) != *r {
        return Err(not_power());
    }
    Ok(AbsValue::PPow(v))
}

/// `"center,radius,kind"` with kind `open` or `closed` (default closed).
pub fn ball(ctx: &PAdicContext, flag: &str, text: &str) -> Result<Ball, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let (center, r, kind) = match parts.as_slice() {
        [c, r] => (c, r, BallKind::Closed),
        [c, r, k] => {
            let kind = match k.to_ascii_lowercase().as_str() {
                "open" => BallKind::Open,
                "closed" => BallKind::Closed,
                other => {
                    return Err(CliError::usage(format!(
                        "--{flag}: ball kind must be open or closed, got {other:?}"
                    )))
                }
            };
            (c, r, kind)
        }
        _ => {
            return Err(CliError::usage(format!(
                "--{flag}: expected \"center,radius[,open|closed]\", got {text:?}"
            )))
        }
    };
    let center = rational(flag, center)?;
    let r = radius(ctx, flag, &rational(flag, r)?)?;
    Ball::new(center, r, kind).map_err(|e| CliError::usage(format!("--{flag}: {e}")))
}

/// `"inf"` for the place at infinity, otherwise a monic polynomial.
pub fn place(text: &str) -> Result<PlaceSpec, CliError> {
    match text.trim() {
        "inf" | "infinity" | "\u{221e}" => Ok(PlaceSpec::Infinite),
        t => parse_poly(t)
            .map(PlaceSpec::Finite)
            .map_err(|e| CliError::usage(format!("--place: {e}"))),
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(flag: &str, path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("--{flag}: cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::usage(format!("--{flag}: {}: {e}", path.display())))
}

/// A vector written either as a plain list or as `{"coords": [...]}`.
#[derive(Deserialize)]
#[serde(untagged)]
enum VectorInput {
    List(Vec<Rational>),
    Object { coords: Vec<Rational> },
}

impl From<VectorInput> for Vector {
    fn from(v: VectorInput) -> Vector {
        match v {
            VectorInput::List(c) | VectorInput::Object { coords: c } => Vector::new(c),
        }
    }
}

#[derive(Deserialize)]
struct PairInput {
    u: VectorInput,
    v: VectorInput,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum PairsFile {
    List(Vec<PairInput>),
    Object { pairs: Vec<PairInput> },
}

/// Pairs file: `[{"u": [...], "v": [...]}, ...]`, optionally wrapped as
/// `{"pairs": [...]}`.
pub fn pairs(path: &Path) -> Result<Vec<(Vector, Vector)>, CliError> {
    let file: PairsFile = read_json("pairs", path)?;
    let (PairsFile::List(p) | PairsFile::Object { pairs: p }) = file;
    Ok(p.into_iter().map(|p| (p.u.into(), p.v.into())).collect())
}

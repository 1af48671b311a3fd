use std::fmt;
use std::ops::{Add, Mul};

use serde::Serialize;

use super::poly::{parse_poly, Poly};
use crate::error::{Error, Result};

/// Element `num/den` of Q(x), stored with `gcd(num, den) = 1` and `den` monic.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RationalFunction {
                num,
                den: Poly::one(),
            });
        }
        let g = num.gcd(&den);
        let (num, _) = num.divmod(&g)?;
        let (den, _) = den.divmod(&g)?;
        let lc = den.leading().expect("nonzero").recip()?;
        Ok(RationalFunction {
            num: num.scale(&lc),
            den: den.scale(&lc),
        })
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFunction {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

/// `"[-1,1]/[2,1]"`, `"x-1"`, `"(x-1)/(x+2)"`; either side in list or
/// expression form. A missing denominator means 1.
pub fn parse_rational_function(text: &str) -> Result<RationalFunction> {
    let split = split_top_level_slash(text);
    let strip = |s: &str| {
        let t = s.trim();
        t.strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(t)
            .to_string()
    };
    match split {
        None => Ok(RationalFunction::from_poly(parse_poly(&strip(text))?)),
        Some(i) => {
            let num = parse_poly(&strip(&text[..i]))?;
            let den = parse_poly(&strip(&text[i + 1..])).map_err(|e| match e {
                Error::Parse { pos, msg } => Error::Parse {
                    pos: pos + i + 1,
                    msg,
                },
                other => other,
            })?;
            RationalFunction::new(num, den)
        }
    }
}

// The '/' that separates numerator from denominator: the first one outside
// brackets that touches a bracket or an `x`. A '/' between two digits belongs
// to a rational coefficient.
fn split_top_level_slash(text: &str) -> Option<usize> {
    let chars: Vec<(usize, char)> = text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
    let mut depth = 0i32;
    for (k, &(i, c)) in chars.iter().enumerate() {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            '/' if depth == 0 => {
                let prev = k.checked_sub(1).map(|j| chars[j].1);
                let next = chars.get(k + 1).map(|c| c.1);
                if matches!(prev, Some(']' | ')' | 'x')) || matches!(next, Some('[' | '(' | 'x')) {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Poly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num.to_list_string(), self.den.to_list_string())
    }
}

impl Mul<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den)
            .expect("product of nonzero denominators")
    }
}

impl Add<&RationalFunction> for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RationalFunction::new(num, &self.den * &rhs.den).expect("product of nonzero denominators")
    }
}

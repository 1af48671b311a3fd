//! Dense univariate polynomials over Q.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rational::{parse_rational, Rational};
use crate::error::{Error, Result};

/// Coefficients lowest degree first; the zero polynomial has no coefficients
/// and the last stored coefficient is never zero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    /// `x`
    pub fn x() -> Self {
        Poly::from_ints(&[0, 1])
    }

    /// `x - r`
    pub fn linear_root(r: &Rational) -> Self {
        Poly::new(vec![-r, Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(Rational::is_one)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Divides by the leading coefficient; the zero polynomial stays zero.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(lc) => self.scale(&lc.recip().expect("leading coefficient is nonzero")),
        }
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn pow(&self, e: u32) -> Poly {
        (0..e).fold(Poly::one(), |acc, _| &acc * self)
    }

    /// Euclidean division: `a = q*b + r` with `r = 0` or `deg r < deg b`.
    pub fn divmod(&self, b: &Poly) -> Result<(Poly, Poly)> {
        let db = b.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = b.leading().unwrap().recip()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= db {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quot = vec![Rational::zero(); rem.len() - db];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + db] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, bj) in b.coeffs.iter().enumerate() {
                rem[k + j] = &rem[k + j] - &(&c * bj);
            }
            quot[k] = c;
        }
        rem.truncate(db);
        Ok((Poly::new(quot), Poly::new(rem)))
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.divmod(&b).expect("divisor is nonzero");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Largest `m` with `p^m | self`, by repeated exact division.
    ///
    /// `p` must be monic of positive degree. Irreducibility of `p` is not
    /// checked; for reducible `p` the count is still exact but the induced
    /// map is not a valuation.
    pub fn factor_multiplicity(&self, p: &Poly) -> Result<u32> {
        if self.is_zero() {
            return Err(Error::MultiplicityOfZero);
        }
        if !p.is_monic() || p.degree() == Some(0) {
            return Err(Error::InvalidPlace(format!(
                "divisor {p} must be monic of degree at least 1"
            )));
        }
        let mut m = 0;
        let mut f = self.clone();
        loop {
            let (quot, rem) = f.divmod(p)?;
            if !rem.is_zero() {
                return Ok(m);
            }
            f = quot;
            m += 1;
        }
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from(i as i64))
                .collect(),
        )
    }

    /// Coefficient-list text, lowest degree first: `[-1, 0, 1]`.
    pub fn to_list_string(&self) -> String {
        let parts: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        format!("[{}]", parts.join(", "))
    }
}

/// Parses either a coefficient list (`[-1, 0, 1]`, lowest degree first) or a
/// sum of monomials in `x` (`x^2 - 1`, `3/2x^3 + x`, `x-1`).
pub fn parse_poly(text: &str) -> Result<Poly> {
    let body = text.trim();
    if body.starts_with('[') {
        parse_coefficient_list(text)
    } else {
        parse_expression(text)
    }
}

fn parse_coefficient_list(text: &str) -> Result<Poly> {
    let open = text.find('[').unwrap();
    let close = text.rfind(']').ok_or(Error::Parse {
        pos: text.len(),
        msg: "missing closing ']'".into(),
    })?;
    if !text[close + 1..].trim().is_empty() {
        return Err(Error::Parse {
            pos: close + 1,
            msg: "trailing characters after ']'".into(),
        });
    }
    let inner = &text[open + 1..close];
    if inner.trim().is_empty() {
        return Ok(Poly::zero());
    }
    let mut coeffs = Vec::new();
    let mut offset = open + 1;
    for piece in inner.split(',') {
        let c = parse_rational(piece).map_err(|e| shift_pos(e, offset))?;
        coeffs.push(c);
        offset += piece.len() + 1;
    }
    Ok(Poly::new(coeffs))
}

fn shift_pos(e: Error, by: usize) -> Error {
    match e {
        Error::Parse { pos, msg } => Error::Parse { pos: pos + by, msg },
        other => other,
    }
}

fn parse_expression(text: &str) -> Result<Poly> {
    let chars: Vec<(usize, char)> = text
        .char_indices()
        .map(|(i, c)| (i, if c == '\u{2212}' { '-' } else { c }))
        .filter(|(_, c)| !c.is_whitespace())
        .collect();
    if chars.is_empty() {
        return Err(Error::Parse {
            pos: 0,
            msg: "expected a polynomial".into(),
        });
    }
    let err = |k: usize, msg: &str| Error::Parse {
        pos: chars.get(k).map_or(text.len(), |c| c.0),
        msg: msg.to_string(),
    };
    let mut acc = Poly::zero();
    let mut k = 0;
    while k < chars.len() {
        let mut negative = false;
        if chars[k].1 == '+' || chars[k].1 == '-' {
            negative = chars[k].1 == '-';
            k += 1;
        } else if k > 0 {
            return Err(err(k, "expected '+' or '-'"));
        }
        let start = k;
        while k < chars.len() && (chars[k].1.is_ascii_digit() || chars[k].1 == '/') {
            k += 1;
        }
        let coeff_text: String = chars[start..k].iter().map(|c| c.1).collect();
        let mut coeff = if coeff_text.is_empty() {
            Rational::one()
        } else {
            parse_rational(&coeff_text).map_err(|_| err(start, "malformed coefficient"))?
        };
        if k < chars.len() && chars[k].1 == '*' {
            k += 1;
        }
        let mut power = 0usize;
        if k < chars.len() && chars[k].1 == 'x' {
            k += 1;
            power = 1;
            if k < chars.len() && chars[k].1 == '^' {
                k += 1;
                let s = k;
                while k < chars.len() && chars[k].1.is_ascii_digit() {
                    k += 1;
                }
                let exp: String = chars[s..k].iter().map(|c| c.1).collect();
                power = exp.parse().map_err(|_| err(s, "expected exponent"))?;
            }
        } else if coeff_text.is_empty() {
            return Err(err(k, "expected coefficient or 'x'"));
        }
        if negative {
            coeff = -coeff;
        }
        let mut mono = vec![Rational::zero(); power + 1];
        mono[power] = coeff;
        acc = &acc + &Poly::new(mono);
    }
    Ok(acc)
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if c.is_negative() { '-' } else { '+' })?;
            }
            first = false;
            match i {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if i == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({})", self.to_list_string())
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeffs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        Ok(Poly::new(Vec::<Rational>::deserialize(d)?))
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

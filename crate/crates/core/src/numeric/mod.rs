//! Exact integers, rationals and polynomials over Q.

pub mod poly;
pub mod ratfunc;
pub mod rational;

pub use num_bigint::BigInt;
pub use poly::{parse_poly, Poly};
pub use ratfunc::{parse_rational_function, RationalFunction};
pub use rational::{parse_rational, q, Rational};

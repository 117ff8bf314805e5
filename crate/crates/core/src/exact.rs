//! Rational arithmetic support for exact solves.
//!
//! Problem files carry decimal numbers. Exact-mode consumers reinterpret the
//! decimal literals as rationals (`0.25` becomes `1/4`), so LP pivoting runs
//! without rounding and equality checks can demand a gap of exactly zero.

use crate::model::ScreeningProblem;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExactError {
    #[error("cannot parse `{0}` as a decimal rational")]
    BadDecimal(String),
    #[error("non-finite number cannot be made exact")]
    NonFinite,
}

/// Parses a JSON-style decimal literal (optional sign, fraction, exponent)
/// into the rational it denotes.
pub fn rational_from_decimal(text: &str) -> Result<BigRational, ExactError> {
    let bad = || ExactError::BadDecimal(text.to_string());
    let mut s = text.trim();
    let mut negative = false;
    if let Some(rest) = s.strip_prefix('-') {
        negative = true;
        s = rest;
    } else if let Some(rest) = s.strip_prefix('+') {
        s = rest;
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = s[pos + 1..].parse().map_err(|_| bad())?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(pos) => (&mantissa[..pos], &mantissa[pos + 1..]),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let mut numer: BigInt = digits.parse().map_err(|_| bad())?;
    if negative {
        numer = -numer;
    }
    let shift = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let scale = ten.pow(shift.unsigned_abs() as u32);
    Ok(if shift >= 0 {
        BigRational::new(numer * scale, BigInt::one())
    } else {
        BigRational::new(numer, scale)
    })
}

/// Exact rational for a finite f64, read through its shortest round-trip
/// decimal. This matches what exact mode would see after a save/load cycle,
/// so in-memory and file-based exact solves agree.
pub fn rational_from_f64(v: f64) -> Result<BigRational, ExactError> {
    if !v.is_finite() {
        return Err(ExactError::NonFinite);
    }
    rational_from_decimal(&format!("{v}"))
}

/// Rational view of a problem's numeric data, for exact LP construction.
#[derive(Debug, Clone)]
pub struct ExactValues {
    pub mu: Vec<BigRational>,
    pub lambda: Vec<BigRational>,
    /// values[allocation][type]
    pub values: Vec<Vec<BigRational>>,
}

impl ExactValues {
    /// Derives rationals from the problem's floats via their decimal form.
    pub fn from_problem(problem: &ScreeningProblem) -> Result<Self, ExactError> {
        Ok(ExactValues {
            mu: problem
                .grid
                .probabilities
                .iter()
                .map(|&p| rational_from_f64(p))
                .collect::<Result<_, _>>()?,
            lambda: problem
                .grid
                .welfare_weights
                .iter()
                .map(|&w| rational_from_f64(w))
                .collect::<Result<_, _>>()?,
            values: problem
                .allocations
                .values
                .iter()
                .map(|row| row.iter().map(|&v| rational_from_f64(v)).collect())
                .collect::<Result<_, _>>()?,
        })
    }

    /// Uniform distribution with explicit rational weights and values.
    pub fn new(mu: Vec<BigRational>, lambda: Vec<BigRational>, values: Vec<Vec<BigRational>>) -> Self {
        ExactValues { mu, lambda, values }
    }

    pub fn uniform(n: usize, lambda: Vec<BigRational>, values: Vec<Vec<BigRational>>) -> Self {
        let w = BigRational::new(BigInt::one(), BigInt::from(n as i64));
        ExactValues { mu: vec![w; n], lambda, values }
    }
}

/// Convenience constructors for rational literals.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Render a rational compactly for reports.
pub fn display_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// True when `r` is zero; used by exact-mode gap checks.
pub fn is_exact_zero(r: &BigRational) -> bool {
    r.is_zero()
}

pub fn abs(r: &BigRational) -> BigRational {
    r.abs()
}

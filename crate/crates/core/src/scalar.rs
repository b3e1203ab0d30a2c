//! Scalars the evaluation routines are generic over: exact Gaussian rationals
//! for identities, `Complex<f64>` for the Monte Carlo comparison.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, BigRational, Complex, One, Signed, ToPrimitive, Zero};

pub type GaussianRational = Complex<BigRational>;
pub type Complex64 = Complex<f64>;

pub trait Scalar:
    Clone
    + Debug
    + Send
    + Sync
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_rational(q: &BigRational) -> Self;

    fn modulus(&self) -> f64;

    /// `|x| ≤ 1`, exact for exact scalars.
    fn in_unit_disc(&self) -> bool {
        self.modulus() <= 1.0 + 1e-12
    }

    fn from_int(n: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(n)))
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }
}

impl Scalar for BigRational {
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
    fn modulus(&self) -> f64 {
        rational_to_f64(&self.abs())
    }
    fn in_unit_disc(&self) -> bool {
        self.abs() <= BigRational::one()
    }
}

impl Scalar for GaussianRational {
    fn from_rational(q: &BigRational) -> Self {
        Complex::new(q.clone(), BigRational::zero())
    }
    fn modulus(&self) -> f64 {
        rational_to_f64(&self.norm_sqr()).sqrt()
    }
    fn in_unit_disc(&self) -> bool {
        self.norm_sqr() <= BigRational::one()
    }
}

impl Scalar for Complex64 {
    fn from_rational(q: &BigRational) -> Self {
        Complex::new(rational_to_f64(q), 0.0)
    }
    fn modulus(&self) -> f64 {
        self.norm()
    }
}

/// Division-safe conversion: large numerators and denominators are scaled
/// down together before forming the quotient.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
    let n = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

pub fn gaussian_to_complex(x: &GaussianRational) -> Complex64 {
    Complex::new(rational_to_f64(&x.re), rational_to_f64(&x.im))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact point on the unit circle from the Pythagorean parametrization
/// `((p^2 - q^2) + 2pq i) / (p^2 + q^2)`.
pub fn unit_gaussian(p: i64, q: i64) -> GaussianRational {
    let den = p * p + q * q;
    Complex::new(ratio(p * p - q * q, den), ratio(2 * p * q, den))
}

/// Parses `p/q`, decimals, and complex forms such as `1/10i`, `0.1i`, `3/5+4/5i`.
pub fn parse_gaussian(s: &str) -> Option<GaussianRational> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return None;
    }
    let split = s
        .char_indices()
        .skip(1)
        .filter(|&(i, c)| (c == '+' || c == '-') && !s[..i].ends_with(['e', 'E']))
        .map(|(i, _)| i)
        .last();
    let (re_part, im_part) = match split {
        Some(i) if s.ends_with('i') => (&s[..i], Some(&s[i..])),
        _ if s.ends_with('i') => ("", Some(s.as_str())),
        _ => (s.as_str(), None),
    };
    let re = if re_part.is_empty() {
        BigRational::zero()
    } else {
        parse_rational(re_part)?
    };
    let im = match im_part {
        None => BigRational::zero(),
        Some(t) => {
            let body = &t[..t.len() - 1];
            match body {
                "" | "+" => BigRational::one(),
                "-" => -BigRational::one(),
                _ => parse_rational(body)?,
            }
        }
    };
    Some(Complex::new(re, im))
}

/// Exact parse of an integer, `p/q`, or finite decimal.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim_start_matches('+').parse().ok()?;
        let d: BigInt = d.parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.trim_start_matches('+')),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let numer: BigInt = digits.parse().ok()?;
    let denom = num::pow(BigInt::from(10), frac.len());
    let q = BigRational::new(numer, denom);
    Some(if neg { -q } else { q })
}

pub fn format_rational(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_complex_forms() {
        assert_eq!(parse_gaussian("1/10"), Some(Complex::new(ratio(1, 10), ratio(0, 1))));
        assert_eq!(parse_gaussian("0.1i"), Some(Complex::new(ratio(0, 1), ratio(1, 10))));
        assert_eq!(parse_gaussian("3/5-4/5i"), Some(Complex::new(ratio(3, 5), ratio(-4, 5))));
        assert_eq!(parse_gaussian("-i"), Some(Complex::new(ratio(0, 1), ratio(-1, 1))));
        assert_eq!(parse_gaussian("-0.25"), Some(Complex::new(ratio(-1, 4), ratio(0, 1))));
        assert_eq!(parse_gaussian("abc"), None);
        assert_eq!(parse_rational("1/0"), None);
    }

    #[test]
    fn unit_points_have_modulus_one() {
        for (p, q) in [(1, 2), (2, 3), (1, 7), (5, 1)] {
            assert!(unit_gaussian(p, q).norm_sqr().is_one());
        }
    }

    #[test]
    fn huge_rationals_convert() {
        let big = num::pow(BigInt::from(10), 400);
        let q = BigRational::new(big.clone() * BigInt::from(3), big);
        assert!((rational_to_f64(&q) - 3.0).abs() < 1e-12);
    }
}

//! Coefficient fields for algebra elements.
//!
//! Two modes are supported and fixed per instance: exact Gaussian rationals
//! (bit-exact identity checking) and complex doubles with an absolute zero
//! tolerance (the numeric oracle path).

use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// Absolute zero tolerance for float-mode coefficients.
pub const FLOAT_TOLERANCE: f64 = 1e-12;

/// A coefficient field with the operations the graded algebra needs:
/// complex conjugation, inversion, and a square root of real positive
/// bodies. Implementations are exact Gaussian rationals or complex doubles.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    /// True for the bit-exact mode, false for the tolerance-based float mode.
    const EXACT: bool;

    /// Mode tag used in serialized instances.
    const MODE: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    /// The imaginary unit.
    fn i() -> Self;
    fn from_int(n: i64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;

    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;

    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Complex conjugate.
    fn conj(&self) -> Self;
    /// Multiplicative inverse; `None` for zero (float mode: modulus ≤ tolerance).
    fn inv(&self) -> Option<Self>;

    /// Square root of a body coefficient, returning a positive real root.
    ///
    /// Exact mode only admits the normalized body 1; float mode requires a
    /// real part above the tolerance and a negligible imaginary part.
    fn body_sqrt(&self) -> Option<Self>;

    /// Approximate modulus, used for float pivot selection and diagnostics.
    fn modulus(&self) -> f64;

    /// Componentwise deviation from another coefficient (max of re/im parts).
    fn deviation(&self, other: &Self) -> f64;

    /// `[re, im]` strings for the serialized term format.
    fn encode(&self) -> [String; 2];
    fn decode(re: &str, im: &str) -> Result<Self>;

    /// A small random nonzero coefficient for instance generation.
    fn random_small<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

/// Exact-mode coefficient: an element of ℚ(i) with arbitrary-precision parts.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    fn rational_from_str(s: &str) -> Result<BigRational> {
        let parse_int = |t: &str| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| Error::Malformed(format!("bad rational component {s:?}")))
        };
        match s.split_once('/') {
            Some((p, q)) => {
                let den = parse_int(q)?;
                if den.is_zero() {
                    return Err(Error::Malformed(format!("zero denominator in {s:?}")));
                }
                Ok(BigRational::new(parse_int(p)?, den))
            }
            None => Ok(BigRational::from_integer(parse_int(s)?)),
        }
    }

    fn rational_to_str(r: &BigRational) -> String {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else {
            write!(f, "({}+{}i)", self.re, self.im)
        }
    }
}

impl Scalar for GaussianRational {
    const EXACT: bool = true;
    const MODE: &'static str = "exact";

    fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }

    fn one() -> Self {
        Self::new(BigRational::from_integer(1.into()), BigRational::zero())
    }

    fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::from_integer(1.into()))
    }

    fn from_int(n: i64) -> Self {
        Self::new(BigRational::from_integer(n.into()), BigRational::zero())
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::new(
            BigRational::new(num.into(), den.into()),
            BigRational::zero(),
        )
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn is_one(&self) -> bool {
        self.im.is_zero() && self.re == BigRational::from_integer(1.into())
    }

    fn add(&self, other: &Self) -> Self {
        Self::new(&self.re + &other.re, &self.im + &other.im)
    }

    fn sub(&self, other: &Self) -> Self {
        Self::new(&self.re - &other.re, &self.im - &other.im)
    }

    fn mul(&self, other: &Self) -> Self {
        Self::new(
            &self.re * &other.re - &self.im * &other.im,
            &self.re * &other.im + &self.im * &other.re,
        )
    }

    fn neg(&self) -> Self {
        Self::new(-&self.re, -&self.im)
    }

    fn conj(&self) -> Self {
        Self::new(self.re.clone(), -&self.im)
    }

    fn inv(&self) -> Option<Self> {
        let norm = &self.re * &self.re + &self.im * &self.im;
        if norm.is_zero() {
            return None;
        }
        Some(Self::new(&self.re / &norm, -&self.im / &norm))
    }

    fn body_sqrt(&self) -> Option<Self> {
        if self.is_one() {
            Some(Self::one())
        } else {
            None
        }
    }

    fn modulus(&self) -> f64 {
        let re = self.re.to_f64().unwrap_or(f64::MAX);
        let im = self.im.to_f64().unwrap_or(f64::MAX);
        re.hypot(im)
    }

    fn deviation(&self, other: &Self) -> f64 {
        let dr = (&self.re - &other.re).abs().to_f64().unwrap_or(f64::MAX);
        let di = (&self.im - &other.im).abs().to_f64().unwrap_or(f64::MAX);
        dr.max(di)
    }

    fn encode(&self) -> [String; 2] {
        [
            Self::rational_to_str(&self.re),
            Self::rational_to_str(&self.im),
        ]
    }

    fn decode(re: &str, im: &str) -> Result<Self> {
        Ok(Self::new(
            Self::rational_from_str(re)?,
            Self::rational_from_str(im)?,
        ))
    }

    fn random_small<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let pick = |rng: &mut R| {
            let num = loop {
                let n = rng.random_range(-3i64..=3);
                if n != 0 {
                    break n;
                }
            };
            let den = rng.random_range(1i64..=2);
            BigRational::new(num.into(), den.into())
        };
        let re = pick(rng);
        let im = if rng.random_range(0u8..3) == 0 {
            pick(rng)
        } else {
            BigRational::zero()
        };
        Self::new(re, im)
    }
}

/// Float-mode coefficient: a complex double compared componentwise at the
/// absolute tolerance [`FLOAT_TOLERANCE`].
#[derive(Clone, Copy, Debug)]
pub struct ComplexF64 {
    pub re: f64,
    pub im: f64,
}

impl ComplexF64 {
    pub fn new(re: f64, im: f64) -> Self {
        ComplexF64 { re, im }
    }
}

impl PartialEq for ComplexF64 {
    fn eq(&self, other: &Self) -> bool {
        (self.re - other.re).abs() <= FLOAT_TOLERANCE
            && (self.im - other.im).abs() <= FLOAT_TOLERANCE
    }
}

impl fmt::Display for ComplexF64 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im == 0.0 {
            write!(f, "{}", self.re)
        } else {
            write!(f, "({}+{}i)", self.re, self.im)
        }
    }
}

impl Scalar for ComplexF64 {
    const EXACT: bool = false;
    const MODE: &'static str = "float";

    fn zero() -> Self {
        Self::new(0.0, 0.0)
    }

    fn one() -> Self {
        Self::new(1.0, 0.0)
    }

    fn i() -> Self {
        Self::new(0.0, 1.0)
    }

    fn from_int(n: i64) -> Self {
        Self::new(n as f64, 0.0)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::new(num as f64 / den as f64, 0.0)
    }

    fn is_zero(&self) -> bool {
        self.re.abs() <= FLOAT_TOLERANCE && self.im.abs() <= FLOAT_TOLERANCE
    }

    fn is_one(&self) -> bool {
        (self.re - 1.0).abs() <= FLOAT_TOLERANCE && self.im.abs() <= FLOAT_TOLERANCE
    }

    fn add(&self, other: &Self) -> Self {
        Self::new(self.re + other.re, self.im + other.im)
    }

    fn sub(&self, other: &Self) -> Self {
        Self::new(self.re - other.re, self.im - other.im)
    }

    fn mul(&self, other: &Self) -> Self {
        Self::new(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )
    }

    fn neg(&self) -> Self {
        Self::new(-self.re, -self.im)
    }

    fn conj(&self) -> Self {
        Self::new(self.re, -self.im)
    }

    fn inv(&self) -> Option<Self> {
        if self.modulus() <= FLOAT_TOLERANCE {
            return None;
        }
        let norm = self.re * self.re + self.im * self.im;
        Some(Self::new(self.re / norm, -self.im / norm))
    }

    fn body_sqrt(&self) -> Option<Self> {
        if self.re > FLOAT_TOLERANCE && self.im.abs() <= FLOAT_TOLERANCE {
            Some(Self::new(self.re.sqrt(), 0.0))
        } else {
            None
        }
    }

    fn modulus(&self) -> f64 {
        self.re.hypot(self.im)
    }

    fn deviation(&self, other: &Self) -> f64 {
        (self.re - other.re).abs().max((self.im - other.im).abs())
    }

    fn encode(&self) -> [String; 2] {
        [format!("{}", self.re), format!("{}", self.im)]
    }

    fn decode(re: &str, im: &str) -> Result<Self> {
        let parse = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Malformed(format!("bad float component {t:?}")))
        };
        Ok(Self::new(parse(re)?, parse(im)?))
    }

    fn random_small<R: Rng + ?Sized>(rng: &mut R) -> Self {
        // Mirrors the exact-mode distribution so float instances match.
        let pick = |rng: &mut R| {
            let num = loop {
                let n = rng.random_range(-3i64..=3);
                if n != 0 {
                    break n;
                }
            };
            let den = rng.random_range(1i64..=2);
            num as f64 / den as f64
        };
        let re = pick(rng);
        let im = if rng.random_range(0u8..3) == 0 {
            pick(rng)
        } else {
            0.0
        };
        Self::new(re, im)
    }
}

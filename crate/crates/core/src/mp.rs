//! Arbitrary-precision complex numbers on top of MPFR floats.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use rug::float::Constant;
use rug::ops::CompleteRound;
use rug::Float;

use crate::error::{Error, Result};
use crate::rational::ComplexRational;

/// `re + im·i` at an explicit working precision in bits.
#[derive(Clone, Debug, PartialEq)]
pub struct BigComplex {
    pub re: Float,
    pub im: Float,
}

impl BigComplex {
    pub fn new(re: Float, im: Float) -> Self {
        BigComplex { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        BigComplex::new(Float::new(prec), Float::new(prec))
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        BigComplex::new(Float::with_val(prec, re), Float::with_val(prec, im))
    }

    pub fn from_c64(prec: u32, z: Complex64) -> Self {
        Self::from_f64(prec, z.re, z.im)
    }

    /// Correctly rounded conversion of an exact value.
    pub fn from_rational(prec: u32, z: &ComplexRational) -> Self {
        BigComplex::new(Float::with_val(prec, &z.re), Float::with_val(prec, &z.im))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        BigComplex::new(Float::with_val(prec, &self.re), Float::with_val(prec, &self.im))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn conj(&self) -> Self {
        BigComplex::new(self.re.clone(), Float::with_val(self.prec(), -&self.im))
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        let a = Float::with_val(p, self.re.square_ref());
        a + Float::with_val(p, self.im.square_ref())
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    /// `ln |z|`.
    pub fn ln_abs(&self) -> Float {
        self.abs().ln()
    }

    /// Principal argument in `(−π, π]`.
    pub fn arg(&self) -> Float {
        Float::with_val(self.prec(), self.im.atan2_ref(&self.re))
    }

    pub fn recip(&self) -> Self {
        let p = self.prec();
        let n = self.norm_sqr();
        BigComplex::new(
            Float::with_val(p, &self.re / &n),
            Float::with_val(p, -Float::with_val(p, &self.im / &n)),
        )
    }

    pub fn mul_real(&self, s: &Float) -> Self {
        let p = self.prec();
        BigComplex::new(Float::with_val(p, &self.re * s), Float::with_val(p, &self.im * s))
    }

    /// `|self − other|`.
    pub fn dist(&self, other: &Self) -> Float {
        (self - other).abs()
    }

    /// Lexicographic order on `(re, im)`; NaN sorts last.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        self.re
            .partial_cmp(&other.re)
            .unwrap_or(Ordering::Equal)
            .then(self.im.partial_cmp(&other.im).unwrap_or(Ordering::Equal))
    }

    /// Decimal `re im` with `digits` significant digits each.
    pub fn to_decimal(&self, digits: usize) -> (String, String) {
        (
            self.re.to_string_radix(10, Some(digits)),
            self.im.to_string_radix(10, Some(digits)),
        )
    }

    pub fn parse(prec: u32, re: &str, im: &str) -> Result<Self> {
        let parse = |s: &str| {
            Float::parse(s)
                .map(|v| v.complete(prec))
                .map_err(|e| Error::Parse(format!("{s:?}: {e}")))
        };
        Ok(BigComplex::new(parse(re)?, parse(im)?))
    }
}

/// Decimal digits that faithfully represent `prec` bits.
pub fn decimal_digits(prec: u32) -> usize {
    (prec as f64 * std::f64::consts::LOG10_2).ceil() as usize + 1
}

pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// `2^e` at the given precision.
pub fn pow2(prec: u32, e: i32) -> Float {
    Float::with_val(prec, 1) << e
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let z = self.to_c64();
        write!(f, "{}{:+}i", z.re, z.im)
    }
}

impl<'a> Add<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn add(self, rhs: &BigComplex) -> BigComplex {
        let p = self.prec();
        BigComplex::new(
            Float::with_val(p, &self.re + &rhs.re),
            Float::with_val(p, &self.im + &rhs.im),
        )
    }
}

impl<'a> Sub<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn sub(self, rhs: &BigComplex) -> BigComplex {
        let p = self.prec();
        BigComplex::new(
            Float::with_val(p, &self.re - &rhs.re),
            Float::with_val(p, &self.im - &rhs.im),
        )
    }
}

impl<'a> Mul<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn mul(self, rhs: &BigComplex) -> BigComplex {
        let p = self.prec();
        let re = Float::with_val(p, &self.re * &rhs.re) - Float::with_val(p, &self.im * &rhs.im);
        let im = Float::with_val(p, &self.re * &rhs.im) + Float::with_val(p, &self.im * &rhs.re);
        BigComplex::new(re, im)
    }
}

impl<'a> Div<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn div(self, rhs: &BigComplex) -> BigComplex {
        let p = self.prec();
        let n = rhs.norm_sqr();
        let re = Float::with_val(p, &self.re * &rhs.re) + Float::with_val(p, &self.im * &rhs.im);
        let im = Float::with_val(p, &self.im * &rhs.re) - Float::with_val(p, &self.re * &rhs.im);
        BigComplex::new(re / &n, im / &n)
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        let p = self.prec();
        BigComplex::new(Float::with_val(p, -&self.re), Float::with_val(p, -&self.im))
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $m(self, rhs: BigComplex) -> BigComplex {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $m(self, rhs: &BigComplex) -> BigComplex {
                (&self).$m(rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

/// Horner evaluation of `p(z)` and `p'(z)`; coefficients low to high.
pub fn horner_with_derivative(coeffs: &[BigComplex], z: &BigComplex) -> (BigComplex, BigComplex) {
    let p = z.prec();
    let mut val = BigComplex::zero(p);
    let mut der = BigComplex::zero(p);
    for c in coeffs.iter().rev() {
        der = &(&der * z) + &val;
        val = &(&val * z) + c;
    }
    (val, der)
}

pub fn horner(coeffs: &[BigComplex], z: &BigComplex) -> BigComplex {
    let mut val = BigComplex::zero(z.prec());
    for c in coeffs.iter().rev() {
        val = &(&val * z) + c;
    }
    val
}

/// `Σ |c_k| |z|^k`, the natural scale for rounding and residual bounds.
pub fn magnitude_scale(coeffs: &[BigComplex], z: &BigComplex) -> Float {
    let p = z.prec();
    let r = z.abs();
    let mut acc = Float::new(p);
    for c in coeffs.iter().rev() {
        acc *= &r;
        acc += c.abs();
    }
    acc
}

/// `max_k |c_k| |z|^k`.
pub fn max_term(coeffs: &[BigComplex], z: &BigComplex) -> Float {
    let p = z.prec();
    let r = z.abs();
    let mut pw = Float::with_val(p, 1);
    let mut best = Float::new(p);
    for c in coeffs {
        let t = Float::with_val(p, c.abs() * &pw);
        if t > best {
            best = t;
        }
        pw *= &r;
    }
    best
}

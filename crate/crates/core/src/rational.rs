//! Exact complex rationals, `re + im·i` with `re, im ∈ ℚ`.
//!
//! Text form is `p/q+r/s*i` with positive denominators and the signs carried
//! by the numerators. Parsing also accepts shorthand: `3`, `-1/2`, `i`,
//! `1-2i`, `2+i`, `1/2 - 1*i`.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use rug::{Integer, Rational};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ComplexRational {
    pub re: Rational,
    pub im: Rational,
}

impl ComplexRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        ComplexRational { re, im }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn i() -> Self {
        ComplexRational::new(Rational::new(), Rational::from(1))
    }

    pub fn from_int(v: i64) -> Self {
        ComplexRational::new(Rational::from(v), Rational::new())
    }

    /// `num/den` on the real axis. Panics if `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        ComplexRational::new(Rational::from((num, den)), Rational::new())
    }

    pub fn from_parts(re: (i64, i64), im: (i64, i64)) -> Self {
        ComplexRational::new(Rational::from(re), Rational::from(im))
    }

    pub fn is_zero(&self) -> bool {
        self.re.cmp0().is_eq() && self.im.cmp0().is_eq()
    }

    pub fn is_real(&self) -> bool {
        self.im.cmp0().is_eq()
    }

    /// `Some(v)` when the value is an integer on the real axis.
    pub fn as_integer(&self) -> Option<Integer> {
        if self.is_real() && *self.re.denom() == 1 {
            Some(self.re.numer().clone())
        } else {
            None
        }
    }

    /// True for 0, −1, −2, …
    pub fn is_nonpositive_integer(&self) -> bool {
        self.as_integer().is_some_and(|v| v.cmp0().is_le())
    }

    pub fn conj(&self) -> Self {
        ComplexRational::new(self.re.clone(), Rational::from(-&self.im))
    }

    pub fn norm_sqr(&self) -> Rational {
        Rational::from(&self.re * &self.re) + Rational::from(&self.im * &self.im)
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        assert!(n.cmp0().is_ne(), "division by zero complex rational");
        ComplexRational::new(
            Rational::from(&self.re / &n),
            -Rational::from(&self.im / &n),
        )
    }

    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            None
        } else {
            Some(self * &rhs.recip())
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc *= self;
        }
        acc
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    pub fn to_c64(&self) -> num_complex::Complex64 {
        let (re, im) = self.to_f64_pair();
        num_complex::Complex64::new(re, im)
    }

    /// Real rational in the exact `p/q` form used by file exports.
    pub fn fmt_rational(q: &Rational) -> String {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl From<i64> for ComplexRational {
    fn from(v: i64) -> Self {
        Self::from_int(v)
    }
}

impl From<Rational> for ComplexRational {
    fn from(re: Rational) -> Self {
        ComplexRational::new(re, Rational::new())
    }
}

impl fmt::Display for ComplexRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.im.cmp0().is_lt() { "" } else { "+" };
        write!(
            f,
            "{}/{}{}{}/{}*i",
            self.re.numer(),
            self.re.denom(),
            sign,
            self.im.numer(),
            self.im.denom()
        )
    }
}

fn parse_real(s: &str, whole: &str) -> Result<Rational> {
    let s = s.trim_start_matches('+');
    if s.is_empty() {
        return Err(Error::Parse(format!("empty component in {whole:?}")));
    }
    if let Some((num, den)) = s.split_once('/') {
        let num =
            Integer::from_str(num.trim()).map_err(|_| Error::Parse(format!("bad numerator in {whole:?}")))?;
        let den = Integer::from_str(den.trim())
            .map_err(|_| Error::Parse(format!("bad denominator in {whole:?}")))?;
        if den.cmp0().is_eq() {
            return Err(Error::Parse(format!("zero denominator in {whole:?}")));
        }
        Ok(Rational::from((num, den)))
    } else {
        Integer::from_str(s.trim())
            .map(Rational::from)
            .map_err(|_| Error::Parse(format!("bad rational in {whole:?}")))
    }
}

impl FromStr for ComplexRational {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty complex rational".into()));
        }
        let Some(body) = s.strip_suffix('i') else {
            return Ok(ComplexRational::from(parse_real(&s, text)?));
        };
        let body = body.strip_suffix('*').unwrap_or(body);
        // The imaginary part starts at the last sign that is not leading.
        let split = body
            .char_indices()
            .filter(|&(k, c)| k > 0 && (c == '+' || c == '-'))
            .map(|(k, _)| k)
            .next_back();
        let (re_text, im_text) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("", body),
        };
        let re_text = re_text.strip_suffix('+').unwrap_or(re_text);
        let re = if re_text.is_empty() {
            Rational::new()
        } else {
            parse_real(re_text, text)?
        };
        let im = match im_text {
            "" | "+" => Rational::from(1),
            "-" => Rational::from(-1),
            t => parse_real(t, text)?,
        };
        Ok(ComplexRational::new(re, im))
    }
}

impl Serialize for ComplexRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ComplexRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl<'a> Add<&'a ComplexRational> for &'a ComplexRational {
    type Output = ComplexRational;
    fn add(self, rhs: &ComplexRational) -> ComplexRational {
        ComplexRational::new(
            Rational::from(&self.re + &rhs.re),
            Rational::from(&self.im + &rhs.im),
        )
    }
}

impl<'a> Sub<&'a ComplexRational> for &'a ComplexRational {
    type Output = ComplexRational;
    fn sub(self, rhs: &ComplexRational) -> ComplexRational {
        ComplexRational::new(
            Rational::from(&self.re - &rhs.re),
            Rational::from(&self.im - &rhs.im),
        )
    }
}

impl<'a> Mul<&'a ComplexRational> for &'a ComplexRational {
    type Output = ComplexRational;
    fn mul(self, rhs: &ComplexRational) -> ComplexRational {
        if self.is_real() && rhs.is_real() {
            return ComplexRational::from(Rational::from(&self.re * &rhs.re));
        }
        let re = Rational::from(&self.re * &rhs.re) - Rational::from(&self.im * &rhs.im);
        let im = Rational::from(&self.re * &rhs.im) + Rational::from(&self.im * &rhs.re);
        ComplexRational::new(re, im)
    }
}

impl<'a> Div<&'a ComplexRational> for &'a ComplexRational {
    type Output = ComplexRational;
    fn div(self, rhs: &ComplexRational) -> ComplexRational {
        if self.is_real() && rhs.is_real() {
            assert!(rhs.re.cmp0().is_ne(), "division by zero complex rational");
            return ComplexRational::from(Rational::from(&self.re / &rhs.re));
        }
        self * &rhs.recip()
    }
}

impl Neg for &ComplexRational {
    type Output = ComplexRational;
    fn neg(self) -> ComplexRational {
        ComplexRational::new(Rational::from(-&self.re), Rational::from(-&self.im))
    }
}

impl Neg for ComplexRational {
    type Output = ComplexRational;
    fn neg(self) -> ComplexRational {
        -&self
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<ComplexRational> for ComplexRational {
            type Output = ComplexRational;
            fn $m(self, rhs: ComplexRational) -> ComplexRational {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a ComplexRational> for ComplexRational {
            type Output = ComplexRational;
            fn $m(self, rhs: &ComplexRational) -> ComplexRational {
                (&self).$m(rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl AddAssign<&ComplexRational> for ComplexRational {
    fn add_assign(&mut self, rhs: &ComplexRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&ComplexRational> for ComplexRational {
    fn sub_assign(&mut self, rhs: &ComplexRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&ComplexRational> for ComplexRational {
    fn mul_assign(&mut self, rhs: &ComplexRational) {
        *self = &*self * rhs;
    }
}

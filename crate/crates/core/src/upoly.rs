//! Dense univariate polynomials over ℚ(i), coefficients low to high.

use std::ops::{Add, Mul, Sub};

use crate::rational::ComplexRational;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QPoly {
    coeffs: Vec<ComplexRational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<ComplexRational>) -> Self {
        while coeffs.last().is_some_and(ComplexRational::is_zero) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn zero() -> Self {
        QPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: ComplexRational) -> Self {
        Self::new(vec![c])
    }

    /// `z − r`
    pub fn linear_root(r: &ComplexRational) -> Self {
        Self::new(vec![-r, ComplexRational::one()])
    }

    pub fn coeffs(&self) -> &[ComplexRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&ComplexRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, z: &ComplexRational) -> ComplexRational {
        let mut acc = ComplexRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * z) + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &ComplexRational::from_int(k as i64))
                .collect(),
        )
    }

    pub fn scale(&self, s: &ComplexRational) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lc) => self.scale(&lc.recip()),
            None => Self::zero(),
        }
    }

    /// Euclidean division. Panics when `d` is zero.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let lc_inv = d.coeffs[dd].recip();
        let mut rem = self.coeffs.clone();
        let Some(sd) = self.degree().filter(|&sd| sd >= dd) else {
            return (Self::zero(), self.clone());
        };
        let mut quot = vec![ComplexRational::zero(); sd - dd + 1];
        for k in (0..=sd - dd).rev() {
            let q = &rem[k + dd] * &lc_inv;
            if !q.is_zero() {
                for (m, dc) in d.coeffs.iter().enumerate() {
                    rem[k + m] -= &(&q * dc);
                }
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Product of the distinct irreducible factors, monic.
    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Divides out `(z − r)` as often as it divides exactly; returns the
    /// quotient and the multiplicity.
    pub fn deflate(&self, r: &ComplexRational) -> (Self, usize) {
        let mut p = self.clone();
        let mut mult = 0;
        let lin = Self::linear_root(r);
        while !p.is_zero() && p.eval(r).is_zero() {
            p = p.div_rem(&lin).0;
            mult += 1;
        }
        (p, mult)
    }

    /// Newton-form interpolation through `(x_k, y_k)`; the `x_k` must be distinct.
    pub fn interpolate(xs: &[ComplexRational], ys: &[ComplexRational]) -> Self {
        assert_eq!(xs.len(), ys.len());
        let m = xs.len();
        let mut dd: Vec<ComplexRational> = ys.to_vec();
        for level in 1..m {
            for k in (level..m).rev() {
                dd[k] = &(&dd[k] - &dd[k - 1]) / &(&xs[k] - &xs[k - level]);
            }
        }
        let mut acc = Self::zero();
        for k in (0..m).rev() {
            acc = &(&acc * &Self::linear_root(&xs[k])) + &Self::constant(dd[k].clone());
        }
        acc
    }
}

impl<'a> Add<&'a QPoly> for &'a QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let zero = ComplexRational::zero();
        QPoly::new(
            (0..len)
                .map(|k| self.coeffs.get(k).unwrap_or(&zero) + rhs.coeffs.get(k).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl<'a> Sub<&'a QPoly> for &'a QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let zero = ComplexRational::zero();
        QPoly::new(
            (0..len)
                .map(|k| self.coeffs.get(k).unwrap_or(&zero) - rhs.coeffs.get(k).unwrap_or(&zero))
                .collect(),
        )
    }
}

impl<'a> Mul<&'a QPoly> for &'a QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![ComplexRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        QPoly::new(out)
    }
}

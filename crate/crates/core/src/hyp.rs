//! Exact generalized hypergeometric polynomials and their differential operator.
//!
//! Everything here is exact over ℚ(i). The operator is applied in the
//! Δ-basis: `Δ = z d/dz` multiplies the coefficient of `z^k` by `k`.

use std::fmt;

use crate::error::{Error, Result};
use crate::rational::ComplexRational;
use crate::schedule::ParameterSchedule;
use crate::upoly::QPoly;

/// Rising factorial `a(a+1)…(a+k−1)`; `1` for `k = 0`.
pub fn pochhammer(a: &ComplexRational, k: u32) -> ComplexRational {
    let mut acc = ComplexRational::one();
    let mut term = a.clone();
    let one = ComplexRational::one();
    for _ in 0..k {
        acc *= &term;
        if acc.is_zero() {
            break;
        }
        term = &term + &one;
    }
    acc
}

/// Degree lost because some `a_i(n)`, `i ≥ 2`, is a negative integer `> −n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Truncation {
    /// 1-based parameter index.
    pub index: usize,
    pub nominal_degree: u32,
    pub degree: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypPolynomial {
    /// Instantiation integer.
    pub n: u32,
    /// `coeffs[k]` is the coefficient of `z^k`; trailing zeros are trimmed.
    pub coeffs: Vec<ComplexRational>,
    pub schedule: ParameterSchedule,
    pub truncation: Option<Truncation>,
}

impl HypPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &ComplexRational {
        self.coeffs.last().expect("coeffs[0] = 1")
    }

    pub fn to_qpoly(&self) -> QPoly {
        QPoly::new(self.coeffs.clone())
    }

    /// One `k re im` record per line, rationals as `num/den`.
    pub fn export(&self) -> String {
        export_coefficients(&self.coeffs)
    }
}

pub fn export_coefficients(coeffs: &[ComplexRational]) -> String {
    let mut out = String::new();
    for (k, c) in coeffs.iter().enumerate() {
        out.push_str(&format!(
            "{} {} {}\n",
            k,
            ComplexRational::fmt_rational(&c.re),
            ComplexRational::fmt_rational(&c.im)
        ));
    }
    out
}

/// Parses the `k re im` export back into a dense coefficient list.
pub fn parse_coefficients(text: &str) -> Result<Vec<ComplexRational>> {
    let mut coeffs = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let bad = || Error::Parse(format!("line {}: expected `k re im`", line_no + 1));
        if fields.len() != 3 {
            return Err(bad());
        }
        let k: usize = fields[0].parse().map_err(|_| bad())?;
        if k != coeffs.len() {
            return Err(Error::Parse(format!(
                "line {}: index {k} out of order",
                line_no + 1
            )));
        }
        let re: ComplexRational = fields[1].parse()?;
        let im: ComplexRational = fields[2].parse()?;
        if !re.is_real() || !im.is_real() {
            return Err(bad());
        }
        coeffs.push(ComplexRational::new(re.re, im.re));
    }
    Ok(coeffs)
}

fn check_denominators(schedule: &ParameterSchedule, n: u32) -> Result<Vec<ComplexRational>> {
    let bs = schedule.denominator_params(n);
    for (j, b) in bs.iter().enumerate() {
        if b.is_nonpositive_integer() {
            return Err(Error::DenominatorParameter {
                j: j + 1,
                value: b.to_string(),
            });
        }
    }
    Ok(bs)
}

/// Builds `p_n` exactly from the term ratio
/// `c_{k+1}/c_k = ∏(a_i + k) / (∏(b_j + k)(k + 1))`.
pub fn build_polynomial(schedule: &ParameterSchedule, n: u32) -> Result<HypPolynomial> {
    let bs = check_denominators(schedule, n)?;
    let as_ = schedule.numerator_params(n);

    let mut truncation = None;
    for (i, a) in as_.iter().enumerate().skip(1) {
        if let Some(v) = a.as_integer() {
            if v.cmp0().is_le() && v > -(n as i64) {
                let degree = (-v).to_u32().expect("fits: |v| < n");
                if truncation.as_ref().is_none_or(|t: &Truncation| degree < t.degree) {
                    truncation = Some(Truncation {
                        index: i + 1,
                        nominal_degree: n,
                        degree,
                    });
                }
            }
        }
    }
    if let Some(t) = &truncation {
        log::warn!(
            "a_{}(n) = -{} truncates the series: degree {} instead of {}",
            t.index,
            t.degree,
            t.degree,
            n
        );
    }
    let degree = truncation.as_ref().map_or(n, |t| t.degree);

    let mut coeffs = Vec::with_capacity(degree as usize + 1);
    coeffs.push(ComplexRational::one());
    for k in 0..degree {
        let kk = ComplexRational::from_int(k as i64);
        let mut num = coeffs[k as usize].clone();
        for a in &as_ {
            num *= &(a + &kk);
        }
        let mut den = ComplexRational::from_int(k as i64 + 1);
        for b in &bs {
            den *= &(b + &kk);
        }
        coeffs.push(&num / &den);
    }
    Ok(HypPolynomial {
        n,
        coeffs,
        schedule: schedule.clone(),
        truncation,
    })
}

/// `c_k = ∏(a_i)_k / (∏(b_j)_k k!)` straight from Pochhammer symbols.
pub fn coefficient_from_pochhammers(
    numer: &[ComplexRational],
    denom: &[ComplexRational],
    k: u32,
) -> ComplexRational {
    let mut num = ComplexRational::one();
    for a in numer {
        num *= &pochhammer(a, k);
    }
    let mut den = pochhammer(&ComplexRational::one(), k);
    for b in denom {
        den *= &pochhammer(b, k);
    }
    &num / &den
}

/// `Δ p` for `Δ = z d/dz`.
pub fn delta(coeffs: &[ComplexRational]) -> Vec<ComplexRational> {
    shifted_delta(coeffs, &ComplexRational::zero())
}

/// `(Δ + s) p`.
fn shifted_delta(coeffs: &[ComplexRational], s: &ComplexRational) -> Vec<ComplexRational> {
    coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| c * &(&ComplexRational::from_int(k as i64) + s))
        .collect()
}

fn d_dz(coeffs: &[ComplexRational]) -> Vec<ComplexRational> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * &ComplexRational::from_int(k as i64))
        .collect()
}

/// `_AT_B = d/dz ∏_j (Δ + b_j − 1) − ∏_i (Δ + a_i)` for fixed parameter values.
#[derive(Clone, Debug)]
pub struct HypergeometricOperator {
    numer: Vec<ComplexRational>,
    denom: Vec<ComplexRational>,
}

impl HypergeometricOperator {
    pub fn new(numer: Vec<ComplexRational>, denom: Vec<ComplexRational>) -> Self {
        HypergeometricOperator { numer, denom }
    }

    pub fn for_schedule(schedule: &ParameterSchedule, n: u32) -> Self {
        Self::new(schedule.numerator_params(n), schedule.denominator_params(n))
    }

    /// Applies the operator to a coefficient list; the result is trimmed.
    pub fn apply(&self, coeffs: &[ComplexRational]) -> Vec<ComplexRational> {
        let one = ComplexRational::one();
        let mut first = coeffs.to_vec();
        for b in &self.denom {
            first = shifted_delta(&first, &(b - &one));
        }
        let first = d_dz(&first);

        let mut second = coeffs.to_vec();
        for a in &self.numer {
            second = shifted_delta(&second, a);
        }

        let len = first.len().max(second.len());
        let zero = ComplexRational::zero();
        let out: Vec<_> = (0..len)
            .map(|k| first.get(k).unwrap_or(&zero) - second.get(k).unwrap_or(&zero))
            .collect();
        QPoly::new(out).coeffs().to_vec()
    }
}

/// `(_AT_B) p` with the parameters `p` was built from; empty means zero.
pub fn apply_hypergeometric_operator(p: &HypPolynomial) -> Vec<ComplexRational> {
    HypergeometricOperator::for_schedule(&p.schedule, p.n).apply(&p.coeffs)
}

/// Roots of `∏(1 + λ α_i) = 0`: `λ_i = −1/α_i`, so `λ_1 = 1`.
pub fn characteristic_roots(schedule: &ParameterSchedule) -> Result<Vec<ComplexRational>> {
    schedule
        .alphas()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            if a.is_zero() {
                Err(Error::DegeneratePencil { i: i + 1 })
            } else {
                Ok(-a.recip())
            }
        })
        .collect()
}

/// `∏(1 + λ α_i)`.
pub fn characteristic_polynomial_at(
    schedule: &ParameterSchedule,
    lambda: &ComplexRational,
) -> ComplexRational {
    let one = ComplexRational::one();
    schedule
        .alphas()
        .iter()
        .fold(one.clone(), |acc, a| &acc * &(&one + &(lambda * a)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneralTypeViolation {
    /// `α_i = α_j` (1-based, `i < j`).
    RepeatedRoot {
        i: usize,
        j: usize,
    },
    EqualsMinusOne {
        i: usize,
    },
    /// `−α_i` is real and `≤ 1`.
    OnRealRay {
        i: usize,
        neg_alpha: ComplexRational,
    },
}

impl fmt::Display for GeneralTypeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneralTypeViolation::RepeatedRoot { i, j } => {
                write!(f, "repeated root: alpha_{i} = alpha_{j}")
            }
            GeneralTypeViolation::EqualsMinusOne { i } => {
                write!(f, "repeated root: alpha_{i} = -1 = alpha_1")
            }
            GeneralTypeViolation::OnRealRay { i, neg_alpha } => write!(
                f,
                "−α_{i} = {} ∈ (−∞,1]",
                ComplexRational::fmt_rational(&neg_alpha.re).trim_end_matches("/1")
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralType {
    pub violations: Vec<GeneralTypeViolation>,
}

impl GeneralType {
    pub fn is_general(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn diagnostic(&self) -> String {
        if self.is_general() {
            "general type".into()
        } else {
            self.violations
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join("; ")
        }
    }
}

/// Simple characteristic roots and no `−α_i` (i ≥ 2) on the real ray `(−∞, 1]`.
pub fn is_general_type(schedule: &ParameterSchedule) -> GeneralType {
    let alphas = schedule.alphas();
    let mut violations = Vec::new();
    for i in 1..alphas.len() {
        for j in i + 1..alphas.len() {
            if alphas[i] == alphas[j] {
                violations.push(GeneralTypeViolation::RepeatedRoot { i: i + 1, j: j + 1 });
            }
        }
    }
    let minus_one = ComplexRational::from_int(-1);
    for (i, a) in alphas.iter().enumerate().skip(1) {
        if *a == minus_one {
            violations.push(GeneralTypeViolation::EqualsMinusOne { i: i + 1 });
        }
        let neg = -a;
        if neg.is_real() && neg.re <= 1 {
            violations.push(GeneralTypeViolation::OnRealRay {
                i: i + 1,
                neg_alpha: neg,
            });
        }
    }
    GeneralType { violations }
}

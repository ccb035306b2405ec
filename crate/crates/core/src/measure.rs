//! Certified zeros of hypergeometric polynomials and the root-counting measure
//! `μ_n = (1/n) Σ δ_ζ`, with its Cauchy transform and logarithmic potential.
//!
//! The Cauchy transform follows `C(z) = (1/n) Σ 1/(z − ζ) = p'/(n p)`.

use rayon::prelude::*;
use rug::{Float, Rational};

use crate::aberth::{newton_polish, solve};
use crate::error::{Error, Result};
use crate::hyp::HypPolynomial;
use crate::mp::{decimal_digits, horner, horner_with_derivative, max_term, pow2, BigComplex};
use crate::rational::ComplexRational;

pub const DEFAULT_PRECISION: u32 = 512;
pub const MAX_PRECISION: u32 = 4096;

/// log2 of the certification threshold: relative residuals must stay below
/// `2^(−prec/4)`.
pub fn certification_log2(prec: u32) -> f64 {
    -(prec as f64) / 4.0
}

/// log2 of the distance below which two zeros are reported as a cluster.
pub fn cluster_log2(prec: u32) -> f64 {
    -(prec as f64) / 8.0
}

#[derive(Clone, Debug)]
pub struct RootCountingMeasure {
    /// Sorted lexicographically by `(re, im)`.
    pub roots: Vec<BigComplex>,
    /// `|p(ζ)| / max_k |c_k| |ζ|^k` per root.
    pub residuals: Vec<Float>,
    /// `deg · |p(ζ)/p'(ζ)|`: a disc of this radius around `ζ` contains a zero.
    pub radii: Vec<Float>,
    pub precision_bits: u32,
    /// Index groups of zeros closer than `2^(−prec/8)` to each other.
    pub clusters: Vec<Vec<usize>>,
    pub schedule_hash: Option<String>,
}

impl RootCountingMeasure {
    pub fn n(&self) -> usize {
        self.roots.len()
    }

    /// Mass of each atom, `1/n`, exactly.
    pub fn weight(&self) -> Rational {
        Rational::from((1, self.n() as u64))
    }

    pub fn total_mass(&self) -> Rational {
        self.weight() * Rational::from(self.n() as u64)
    }

    pub fn roots_c64(&self) -> Vec<num_complex::Complex64> {
        self.roots.iter().map(BigComplex::to_c64).collect()
    }

    pub fn worst_residual_log2(&self) -> f64 {
        self.residuals
            .iter()
            .map(float_log2)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn check_pole(&self, z: &BigComplex) -> Result<()> {
        for (r, rad) in self.roots.iter().zip(&self.radii) {
            let d = z.dist(r);
            if d.is_zero() || d <= *rad {
                return Err(Error::Pole { distance: d.to_f64() });
            }
        }
        Ok(())
    }

    /// `(1/n) Σ 1/(z − ζ_ν)`.
    pub fn cauchy_transform_at(&self, z: &BigComplex) -> Result<BigComplex> {
        self.check_pole(z)?;
        let prec = self.precision_bits.max(z.prec());
        let z = z.with_prec(prec);
        let mut acc = BigComplex::zero(prec);
        for r in &self.roots {
            acc = &acc + &(&z - &r.with_prec(prec)).recip();
        }
        let inv_n = Float::with_val(prec, 1) / self.n() as u32;
        Ok(acc.mul_real(&inv_n))
    }

    /// `(1/n) Σ log |z − ζ_ν|`.
    pub fn log_potential_at(&self, z: &BigComplex) -> Result<Float> {
        self.check_pole(z)?;
        let prec = self.precision_bits.max(z.prec());
        let z = z.with_prec(prec);
        let mut acc = Float::new(prec);
        for r in &self.roots {
            acc += (&z - &r.with_prec(prec)).ln_abs();
        }
        Ok(acc / self.n() as u32)
    }

    /// Root file: `#` header lines with `n`, precision and schedule hash, then
    /// `re im residual_bound` per root in decimal.
    pub fn export(&self) -> String {
        let digits = decimal_digits(self.precision_bits);
        let mut out = format!(
            "# n={}\n# precision={}\n# schedule_hash={}\n",
            self.n(),
            self.precision_bits,
            self.schedule_hash.as_deref().unwrap_or("-")
        );
        for (z, res) in self.roots.iter().zip(&self.residuals) {
            let (re, im) = z.to_decimal(digits);
            out.push_str(&format!("{re} {im} {}\n", res.to_string_radix(10, Some(6))));
        }
        out
    }

    /// Reads a root file written by [`RootCountingMeasure::export`]. Radii are
    /// not stored; they are set from the residual bounds' precision floor.
    pub fn parse(text: &str) -> Result<Self> {
        let mut n = None;
        let mut prec = None;
        let mut hash = None;
        let mut rows = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if let Some(h) = line.strip_prefix('#') {
                let h = h.trim();
                if let Some(v) = h.strip_prefix("n=") {
                    n = v.parse::<usize>().ok();
                } else if let Some(v) = h.strip_prefix("precision=") {
                    prec = v.parse::<u32>().ok();
                } else if let Some(v) = h.strip_prefix("schedule_hash=") {
                    hash = (v != "-").then(|| v.to_string());
                }
                continue;
            }
            if !line.is_empty() {
                rows.push(line.to_string());
            }
        }
        let prec = prec.ok_or_else(|| Error::Parse("root file lacks `# precision=`".into()))?;
        if n.is_some_and(|n| n != rows.len()) {
            return Err(Error::Parse(format!(
                "header says n={} but {} roots follow",
                n.unwrap(),
                rows.len()
            )));
        }
        let mut roots = Vec::with_capacity(rows.len());
        let mut residuals = Vec::with_capacity(rows.len());
        for row in &rows {
            let f: Vec<&str> = row.split_whitespace().collect();
            if f.len() != 3 {
                return Err(Error::Parse(format!("bad root row {row:?}")));
            }
            roots.push(BigComplex::parse(prec, f[0], f[1])?);
            residuals.push(BigComplex::parse(prec, f[2], "0")?.re);
        }
        let radius = pow2(prec, cluster_log2(prec) as i32 * 2);
        Ok(RootCountingMeasure {
            radii: vec![radius; roots.len()],
            clusters: find_clusters(&roots, prec),
            roots,
            residuals,
            precision_bits: prec,
            schedule_hash: hash,
        })
    }
}

fn float_log2(x: &Float) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let (m, e) = x.to_f64_exp();
    e as f64 + m.abs().log2()
}

fn find_clusters(roots: &[BigComplex], prec: u32) -> Vec<Vec<usize>> {
    let tol = pow2(prec, cluster_log2(prec) as i32);
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut assigned = vec![false; roots.len()];
    for i in 0..roots.len() {
        if assigned[i] {
            continue;
        }
        let mut group = vec![i];
        for j in i + 1..roots.len() {
            if !assigned[j] && roots[i].dist(&roots[j]) < tol {
                group.push(j);
                assigned[j] = true;
            }
        }
        if group.len() > 1 {
            clusters.push(group);
        }
    }
    clusters
}

/// Zeros of an exact polynomial at `precision_bits`, certified against
/// `2^(−prec/4)`.
pub fn find_roots_of(coeffs: &[ComplexRational], precision_bits: u32) -> Result<RootCountingMeasure> {
    if precision_bits < 64 {
        return Err(Error::PrecisionTooLow(precision_bits));
    }
    let trimmed = crate::upoly::QPoly::new(coeffs.to_vec());
    match trimmed.degree() {
        None | Some(0) => return Err(Error::ConstantPolynomial),
        Some(_) => {}
    }
    let prec = precision_bits;
    let big: Vec<BigComplex> = trimmed
        .coeffs()
        .iter()
        .map(|c| BigComplex::from_rational(prec, c))
        .collect();
    let outcome = solve(&big);
    let degree = big.len() - 1;

    let polished: Vec<BigComplex> = outcome
        .roots
        .par_iter()
        .map(|z| {
            let z1 = newton_polish(&big, z);
            newton_polish(&big, &z1)
        })
        .collect();
    let mut roots = polished;
    roots.sort_by(|a, b| a.lex_cmp(b));

    let diag: Vec<(Float, Float)> = roots
        .par_iter()
        .map(|z| {
            let (p, dp) = horner_with_derivative(&big, z);
            let scale = max_term(&big, z);
            let res = if scale.is_zero() {
                Float::with_val(prec, p.abs())
            } else {
                Float::with_val(prec, p.abs() / &scale)
            };
            let rad = if dp.is_zero() {
                Float::with_val(prec, pow2(prec, cluster_log2(prec) as i32))
            } else {
                Float::with_val(prec, (&p / &dp).abs() * degree as u32)
            };
            (res, rad)
        })
        .collect();
    let (residuals, radii): (Vec<Float>, Vec<Float>) = diag.into_iter().unzip();

    let threshold = certification_log2(prec);
    let worst = residuals.iter().map(float_log2).fold(f64::NEG_INFINITY, f64::max);
    if worst >= threshold {
        if !outcome.converged {
            return Err(Error::NonConvergence {
                precision: prec,
                trace: outcome.trace,
            });
        }
        return Err(Error::Uncertified {
            precision: prec,
            worst_log2: worst,
            threshold_log2: threshold,
            trace: outcome.trace,
        });
    }
    let clusters = find_clusters(&roots, prec);
    if !clusters.is_empty() {
        log::warn!(
            "{} zero clusters closer than 2^{}",
            clusters.len(),
            cluster_log2(prec)
        );
    }
    Ok(RootCountingMeasure {
        roots,
        residuals,
        radii,
        precision_bits: prec,
        clusters,
        schedule_hash: None,
    })
}

/// All zeros of `p` at `precision_bits`.
pub fn find_roots(p: &HypPolynomial, precision_bits: u32) -> Result<RootCountingMeasure> {
    let mut m = find_roots_of(&p.coeffs, precision_bits)?;
    m.schedule_hash = Some(p.schedule.hash());
    Ok(m)
}

/// [`find_roots`], doubling the precision after each failure up to 4096 bits.
pub fn find_roots_adaptive(p: &HypPolynomial, start_bits: u32) -> Result<RootCountingMeasure> {
    let mut prec = start_bits;
    loop {
        match find_roots(p, prec) {
            Ok(m) => return Ok(m),
            Err(e @ (Error::NonConvergence { .. } | Error::Uncertified { .. })) => {
                if prec * 2 > MAX_PRECISION {
                    return Err(e);
                }
                log::warn!("{e}; retrying at {} bits", prec * 2);
                prec *= 2;
            }
            Err(e) => return Err(e),
        }
    }
}

#[derive(Clone, Debug)]
pub struct VietaReport {
    pub sum: BigComplex,
    pub expected_sum: BigComplex,
    pub product: BigComplex,
    pub expected_product: BigComplex,
    /// `|Σζ − (−c_{n−1}/c_n)| / max(|c_{n−1}/c_n|, Σ|ζ|)`.
    pub sum_deviation: Float,
    /// `|Πζ − (−1)^n c_0/c_n| / |c_0/c_n|`.
    pub product_deviation: Float,
}

impl VietaReport {
    pub fn max_deviation(&self) -> Float {
        self.sum_deviation.clone().max(&self.product_deviation)
    }
}

/// Compares the zeros' sum and product with the coefficient ratios.
pub fn vieta_check(coeffs: &[ComplexRational], m: &RootCountingMeasure) -> Result<VietaReport> {
    let p = crate::upoly::QPoly::new(coeffs.to_vec());
    let n = p.degree().unwrap_or(0);
    if n != m.n() {
        return Err(Error::Invalid(format!("degree {n} but {} zeros", m.n())));
    }
    let prec = m.precision_bits;
    let c = p.coeffs();
    let lead = &c[n];
    let expected_sum = BigComplex::from_rational(prec, &-(&c[n - 1] / lead));
    let mut sign = &c[0] / lead;
    if n % 2 == 1 {
        sign = -sign;
    }
    let expected_product = BigComplex::from_rational(prec, &sign);

    let mut sum = BigComplex::zero(prec);
    let mut abs_sum = Float::new(prec);
    let mut product = BigComplex::from_f64(prec, 1.0, 0.0);
    for z in &m.roots {
        sum = &sum + z;
        abs_sum += z.abs();
        product = &product * z;
    }
    let sum_scale = expected_sum.abs().max(&abs_sum);
    let sum_deviation = if sum_scale.is_zero() {
        sum.abs()
    } else {
        sum.dist(&expected_sum) / &sum_scale
    };
    let pscale = expected_product.abs();
    let product_deviation = if pscale.is_zero() {
        product.abs()
    } else {
        product.dist(&expected_product) / &pscale
    };
    Ok(VietaReport {
        sum,
        expected_sum,
        product,
        expected_product,
        sum_deviation,
        product_deviation,
    })
}

/// `p'(z) / (n p(z))` from exact coefficients rounded to `prec`.
pub fn log_derivative_from_coeffs(coeffs: &[ComplexRational], z: &BigComplex) -> BigComplex {
    let prec = z.prec();
    let big: Vec<BigComplex> = coeffs
        .iter()
        .map(|c| BigComplex::from_rational(prec, c))
        .collect();
    let (p, dp) = horner_with_derivative(&big, z);
    let n = Float::with_val(prec, (coeffs.len() - 1) as u32);
    &dp / &p.mul_real(&n)
}

/// `p(z)` from exact coefficients rounded to `prec`.
pub fn eval_from_coeffs(coeffs: &[ComplexRational], z: &BigComplex) -> BigComplex {
    let prec = z.prec();
    let big: Vec<BigComplex> = coeffs
        .iter()
        .map(|c| BigComplex::from_rational(prec, c))
        .collect();
    horner(&big, z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyp::build_polynomial;
    use crate::schedule::ParameterSchedule;

    fn cr(s: &str) -> ComplexRational {
        s.parse().unwrap()
    }

    #[test]
    fn z_squared_minus_one() {
        let m = find_roots_of(&[cr("-1"), cr("0"), cr("1")], 128).unwrap();
        let r = m.roots_c64();
        assert!((r[0] - num_complex::Complex64::new(-1.0, 0.0)).norm() < 1e-30);
        assert!((r[1] - num_complex::Complex64::new(1.0, 0.0)).norm() < 1e-30);
        let v = vieta_check(&[cr("-1"), cr("0"), cr("1")], &m).unwrap();
        assert!(v.max_deviation() < pow2(128, -64));
        assert_eq!(m.total_mass(), 1);
    }

    #[test]
    fn linear_lemniscate_member() {
        // 2F1(-1, k+1; k+2; z) = 1 - ((k+1)/(k+2)) z with k = 3, n = 1
        let s = ParameterSchedule::lemniscate_family(cr("3"));
        let p = build_polynomial(&s, 1).unwrap();
        let m = find_roots(&p, 128).unwrap();
        let want = BigComplex::from_rational(128, &cr("5/4"));
        assert!(m.roots[0].dist(&want) < pow2(128, -120));
    }

    #[test]
    fn quadratic_roots() {
        // 1 - (4/3) z + (1/2) z^2: z = 4/3 ± (√2/3) i
        let c = [cr("1"), cr("-4/3"), cr("1/2")];
        let m = find_roots_of(&c, 256).unwrap();
        let s2 = 2f64.sqrt() / 3.0;
        let r = m.roots_c64();
        assert!((r[0] - num_complex::Complex64::new(4.0 / 3.0, -s2)).norm() < 1e-15);
        assert!((r[1] - num_complex::Complex64::new(4.0 / 3.0, s2)).norm() < 1e-15);
        let v = vieta_check(&c, &m).unwrap();
        assert!((v.expected_sum.to_c64().re - 8.0 / 3.0).abs() < 1e-15);
        assert!((v.expected_product.to_c64().re - 2.0).abs() < 1e-15);
    }

    #[test]
    fn single_atom_queries() {
        let m = find_roots_of(&[cr("-1/2-i"), cr("1")], 128).unwrap();
        let zeta = BigComplex::from_rational(128, &cr("1/2+i"));
        let z = &zeta + &BigComplex::from_f64(128, 1.0, 0.0);
        let c = m.cauchy_transform_at(&z).unwrap();
        assert!(c.dist(&BigComplex::from_f64(128, 1.0, 0.0)) < pow2(128, -120));
        assert!(m.log_potential_at(&z).unwrap().abs() < pow2(128, -120));

        let e = Float::with_val(128, 1).exp();
        let z = &zeta + &BigComplex::new(Float::new(128), e);
        let l = m.log_potential_at(&z).unwrap();
        assert!(Float::with_val(128, l - 1u32).abs() < pow2(128, -120));

        assert!(matches!(m.cauchy_transform_at(&zeta), Err(Error::Pole { .. })));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(matches!(
            find_roots_of(&[cr("1"), cr("1")], 32),
            Err(Error::PrecisionTooLow(32))
        ));
        assert!(matches!(
            find_roots_of(&[cr("1")], 128),
            Err(Error::ConstantPolynomial)
        ));
    }

    #[test]
    fn double_root_reported_as_cluster() {
        // (z - 1)^2 (z + 2)
        let c = [cr("2"), cr("-3"), cr("0"), cr("1")];
        let m = find_roots_of(&c, 256).unwrap();
        assert_eq!(m.clusters, vec![vec![1, 2]]);
        assert_eq!(m.n(), 3);
    }

    #[test]
    fn export_parse_round_trip() {
        let s = ParameterSchedule::lemniscate_family(cr("1"));
        let p = build_polynomial(&s, 12).unwrap();
        let m = find_roots(&p, 256).unwrap();
        let text = m.export();
        assert!(text.starts_with("# n=12\n# precision=256\n"));
        let back = RootCountingMeasure::parse(&text).unwrap();
        assert_eq!(back.roots, m.roots);
        assert_eq!(back.export(), text);
    }
}

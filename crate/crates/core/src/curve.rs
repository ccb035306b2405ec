//! The algebraic curve `A(z, w) = ∏(zw + α_i) − w ∏(zw + β_j) = M(zw) − w N(zw)`
//! satisfied by limits of the Cauchy transforms, its branches over a point,
//! its w-discriminant and branch points.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rug::Float;

use crate::aberth::{newton_polish, solve};
use crate::error::{Error, Result};
use crate::hyp::{is_general_type, GeneralType};
use crate::measure::{certification_log2, find_roots_of};
use crate::mp::{decimal_digits, horner, max_term, BigComplex};
use crate::rational::ComplexRational;
use crate::schedule::ParameterSchedule;
use crate::upoly::QPoly;

/// Sparse bivariate polynomial; key `(j, k)` holds the coefficient of `z^j w^k`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BiPoly {
    terms: BTreeMap<(usize, usize), ComplexRational>,
}

impl BiPoly {
    pub fn from_terms(terms: impl IntoIterator<Item = ((usize, usize), ComplexRational)>) -> Self {
        let mut p = BiPoly::default();
        for (key, c) in terms {
            p.add_term(key, &c);
        }
        p
    }

    fn add_term(&mut self, key: (usize, usize), c: &ComplexRational) {
        let entry = self.terms.entry(key).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> &BTreeMap<(usize, usize), ComplexRational> {
        &self.terms
    }

    pub fn mul(&self, other: &BiPoly) -> BiPoly {
        let mut out = BiPoly::default();
        for (&(j1, k1), a) in &self.terms {
            for (&(j2, k2), b) in &other.terms {
                out.add_term((j1 + j2, k1 + k2), &(a * b));
            }
        }
        out
    }

    pub fn sub(&self, other: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (&key, c) in &other.terms {
            out.add_term(key, &-c);
        }
        out
    }

    pub fn w_degree(&self) -> usize {
        self.terms.keys().map(|&(_, k)| k).max().unwrap_or(0)
    }
}

/// `e_0, …, e_m` of the given values.
pub fn elementary_symmetric(values: &[ComplexRational]) -> Vec<ComplexRational> {
    let mut e = vec![ComplexRational::one()];
    for v in values {
        let mut next = vec![ComplexRational::zero(); e.len() + 1];
        for (k, ek) in e.iter().enumerate() {
            next[k] += ek;
            next[k + 1] += &(ek * v);
        }
        e = next;
    }
    e
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivariateCurve {
    alphas: Vec<ComplexRational>,
    betas: Vec<ComplexRational>,
    /// `M(u) = Σ e_{A−k}^α u^k`, low to high.
    m_coeffs: Vec<ComplexRational>,
    /// `N(u) = Σ e_{B−k}^β u^k`, low to high.
    n_coeffs: Vec<ComplexRational>,
    expanded: BiPoly,
}

fn monic_from_symmetric(values: &[ComplexRational]) -> Vec<ComplexRational> {
    let e = elementary_symmetric(values);
    let m = values.len();
    (0..=m).map(|k| e[m - k].clone()).collect()
}

/// Builds `A(z, w)` exactly. Rejects `α_i = 0`.
pub fn build_curve(schedule: &ParameterSchedule) -> Result<BivariateCurve> {
    if let Some(i) = schedule.alphas().iter().position(ComplexRational::is_zero) {
        return Err(Error::DegeneratePencil { i: i + 1 });
    }
    let alphas = schedule.alphas().to_vec();
    let betas = schedule.betas().to_vec();

    let zw_plus =
        |c: &ComplexRational| BiPoly::from_terms([((1, 1), ComplexRational::one()), ((0, 0), c.clone())]);
    let one = BiPoly::from_terms([((0, 0), ComplexRational::one())]);
    let m = alphas.iter().fold(one.clone(), |acc, a| acc.mul(&zw_plus(a)));
    let n = betas.iter().fold(one, |acc, b| acc.mul(&zw_plus(b)));
    let w = BiPoly::from_terms([((0, 1), ComplexRational::one())]);
    let expanded = m.sub(&w.mul(&n));

    Ok(BivariateCurve {
        m_coeffs: monic_from_symmetric(&alphas),
        n_coeffs: monic_from_symmetric(&betas),
        alphas,
        betas,
        expanded,
    })
}

impl BivariateCurve {
    /// Number of branches, `A`.
    pub fn branch_count(&self) -> usize {
        self.alphas.len()
    }

    pub fn alphas(&self) -> &[ComplexRational] {
        &self.alphas
    }

    pub fn betas(&self) -> &[ComplexRational] {
        &self.betas
    }

    pub fn m_coeffs(&self) -> &[ComplexRational] {
        &self.m_coeffs
    }

    pub fn n_coeffs(&self) -> &[ComplexRational] {
        &self.n_coeffs
    }

    pub fn terms(&self) -> &BTreeMap<(usize, usize), ComplexRational> {
        self.expanded.terms()
    }

    pub fn is_degenerate(&self) -> bool {
        self.betas.iter().zip(&self.alphas[1..]).all(|(b, a)| a == b)
    }

    /// Re-expands the structured form `M(zw) − w N(zw)`.
    pub fn structured_expansion(&self) -> BiPoly {
        let mut terms = Vec::new();
        for (k, m) in self.m_coeffs.iter().enumerate() {
            terms.push(((k, k), m.clone()));
        }
        for (k, n) in self.n_coeffs.iter().enumerate() {
            terms.push(((k, k + 1), -n));
        }
        BiPoly::from_terms(terms)
    }

    /// Coefficient of `w^k` as a polynomial in `z`, for `k = 0..=A`.
    pub fn w_coefficient_polys(&self) -> Vec<QPoly> {
        let a = self.branch_count();
        let mut dense = vec![Vec::new(); a + 1];
        for (&(j, k), c) in self.terms() {
            let v = &mut dense[k];
            if v.len() <= j {
                v.resize(j + 1, ComplexRational::zero());
            }
            v[j] = c.clone();
        }
        dense.into_iter().map(QPoly::new).collect()
    }

    pub fn w_coefficients_exact(&self, z: &ComplexRational) -> Vec<ComplexRational> {
        self.w_coefficient_polys().iter().map(|p| p.eval(z)).collect()
    }

    pub fn w_coefficients(&self, z: &BigComplex) -> Vec<BigComplex> {
        let prec = z.prec();
        self.w_coefficient_polys()
            .iter()
            .map(|p| {
                let c: Vec<_> = p
                    .coeffs()
                    .iter()
                    .map(|c| BigComplex::from_rational(prec, c))
                    .collect();
                horner(&c, z)
            })
            .collect()
    }

    pub fn w_coefficients_c64(&self, z: Complex64) -> Vec<Complex64> {
        self.w_coefficient_polys()
            .iter()
            .map(|p| {
                p.coeffs()
                    .iter()
                    .rev()
                    .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c.to_c64())
            })
            .collect()
    }

    /// `A(z, w)` exactly.
    pub fn eval_exact(&self, z: &ComplexRational, w: &ComplexRational) -> ComplexRational {
        let mut acc = ComplexRational::zero();
        for (&(j, k), c) in self.terms() {
            acc += &(&(c * &z.pow(j as u32)) * &w.pow(k as u32));
        }
        acc
    }

    /// `(j, k, re, im)` rows, rationals as `num/den`.
    pub fn export(&self) -> String {
        let mut out = String::new();
        for (&(j, k), c) in self.terms() {
            out.push_str(&format!(
                "{j} {k} {} {}\n",
                ComplexRational::fmt_rational(&c.re),
                ComplexRational::fmt_rational(&c.im)
            ));
        }
        out
    }
}

fn reject_singular(z: &BigComplex) -> Result<()> {
    if z.is_zero() {
        return Err(Error::Singular(
            "0".into(),
            "every term carries zw, A(0, w) collapses to degree 1",
        ));
    }
    let one = BigComplex::from_f64(z.prec(), 1.0, 0.0);
    if (z - &one).is_zero() {
        return Err(Error::Singular(
            "1".into(),
            "the leading w-coefficient z^B (z - 1) vanishes",
        ));
    }
    Ok(())
}

/// The `A` roots in `w` of `A(z, ·)`, sorted lexicographically, with
/// multiplicity at branch points.
pub fn branches_at(curve: &BivariateCurve, z: &BigComplex, prec: u32) -> Result<Vec<BigComplex>> {
    if prec < 64 {
        return Err(Error::PrecisionTooLow(prec));
    }
    reject_singular(z)?;
    let z = z.with_prec(prec);
    let coeffs = curve.w_coefficients(&z);
    let outcome = solve(&coeffs);
    let mut roots: Vec<BigComplex> = outcome.roots.iter().map(|w| newton_polish(&coeffs, w)).collect();
    let threshold = certification_log2(prec);
    for w in &roots {
        let res = horner(&coeffs, w).abs() / max_term(&coeffs, w);
        let (m, e) = res.to_f64_exp();
        let l = if res.is_zero() {
            f64::NEG_INFINITY
        } else {
            e as f64 + m.log2()
        };
        if l >= threshold {
            return Err(Error::Uncertified {
                precision: prec,
                worst_log2: l,
                threshold_log2: threshold,
                trace: outcome.trace,
            });
        }
    }
    roots.sort_by(|a, b| a.lex_cmp(b));
    Ok(roots)
}

/// Determinant over ℚ(i) by Gaussian elimination.
fn determinant(mut m: Vec<Vec<ComplexRational>>) -> ComplexRational {
    let n = m.len();
    let mut det = ComplexRational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return ComplexRational::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        let inv = p.recip();
        let (upper, lower) = m.split_at_mut(col + 1);
        let pivot = &upper[col];
        for row in lower.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let f = &row[col] * &inv;
            for (x, pc) in row[col..].iter_mut().zip(&pivot[col..]) {
                let t = &f * pc;
                *x -= &t;
            }
        }
    }
    det
}

/// `Res(f, g)` through the Sylvester matrix of the formal degrees
/// `len(f) − 1` and `len(g) − 1`; coefficients low to high.
pub fn sylvester_resultant(f: &[ComplexRational], g: &[ComplexRational]) -> ComplexRational {
    let df = f.len() - 1;
    let dg = g.len() - 1;
    let size = df + dg;
    if size == 0 {
        return ComplexRational::one();
    }
    let mut rows = Vec::with_capacity(size);
    for shift in 0..dg {
        let mut row = vec![ComplexRational::zero(); size];
        for (k, c) in f.iter().rev().enumerate() {
            row[shift + k] = c.clone();
        }
        rows.push(row);
    }
    for shift in 0..df {
        let mut row = vec![ComplexRational::zero(); size];
        for (k, c) in g.iter().rev().enumerate() {
            row[shift + k] = c.clone();
        }
        rows.push(row);
    }
    determinant(rows)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discriminant {
    /// `Res_w(A, ∂A/∂w)` as a polynomial in `z`.
    pub resultant: QPoly,
    /// Multiplicities of the singular points `z = 0` and `z = 1`.
    pub zero_multiplicity: usize,
    pub one_multiplicity: usize,
    /// Square-free part of the resultant with the `z` and `z − 1` factors removed.
    pub squarefree: QPoly,
}

/// The w-discriminant of the curve, exactly: the resultant is sampled at
/// integer points and interpolated.
pub fn discriminant(curve: &BivariateCurve) -> Result<Discriminant> {
    let a = curve.branch_count();
    let polys = curve.w_coefficient_polys();
    let zdeg = polys.iter().filter_map(QPoly::degree).max().unwrap_or(0);
    let bound = zdeg * (2 * a - 1);
    let xs: Vec<ComplexRational> = (0..=bound)
        .map(|k| ComplexRational::from_int(k as i64 + 2))
        .collect();
    let ys: Vec<ComplexRational> = xs
        .iter()
        .map(|x| {
            let f: Vec<ComplexRational> = polys.iter().map(|p| p.eval(x)).collect();
            let g: Vec<ComplexRational> = f
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &ComplexRational::from_int(k as i64))
                .collect();
            sylvester_resultant(&f, &g)
        })
        .collect();
    let resultant = QPoly::interpolate(&xs, &ys);
    if resultant.is_zero() {
        return Err(Error::NonReduced);
    }
    let (rest, zero_multiplicity) = resultant.deflate(&ComplexRational::zero());
    let (rest, one_multiplicity) = rest.deflate(&ComplexRational::one());
    Ok(Discriminant {
        resultant,
        zero_multiplicity,
        one_multiplicity,
        squarefree: rest.squarefree_part(),
    })
}

/// Certified zeros of the square-free discriminant core.
pub fn discriminant_zeros(disc: &Discriminant, prec: u32) -> Result<Vec<BigComplex>> {
    match disc.squarefree.degree() {
        None | Some(0) => Ok(Vec::new()),
        Some(_) => Ok(find_roots_of(disc.squarefree.coeffs(), prec)?.roots),
    }
}

#[derive(Clone, Debug)]
pub struct BranchPoint {
    pub value: BigComplex,
    /// Known in closed form (degenerate case).
    pub exact: Option<ComplexRational>,
}

#[derive(Clone, Debug)]
pub struct BranchPointSet {
    pub points: Vec<BranchPoint>,
    pub degenerate: bool,
    pub general_type: GeneralType,
    /// Zeros of the discriminant away from `{0, 1}`.
    pub discriminant_zeros: Vec<BigComplex>,
    /// Degenerate case: largest distance between the closed-form points and
    /// the discriminant zeros (both directions).
    pub cross_check: Option<Float>,
    pub precision: u32,
}

impl BranchPointSet {
    pub fn values(&self) -> Vec<BigComplex> {
        self.points.iter().map(|p| p.value.clone()).collect()
    }

    /// `re im` per line in decimal.
    pub fn export(&self) -> String {
        let digits = decimal_digits(self.precision);
        let mut out = format!(
            "# degenerate={}\n# general_type={}\n# precision={}\n",
            self.degenerate,
            self.general_type.diagnostic(),
            self.precision
        );
        for p in &self.points {
            let (re, im) = p.value.to_decimal(digits);
            out.push_str(&format!("{re} {im}\n"));
        }
        out
    }
}

/// `p_i = α_i / (α_i + 1)` for `i = 2..A`, skipping `α_i = −1`.
pub fn closed_form_branch_points(alphas: &[ComplexRational]) -> Vec<ComplexRational> {
    let one = ComplexRational::one();
    let mut out: Vec<ComplexRational> = Vec::new();
    for a in &alphas[1..] {
        let d = a + &one;
        if d.is_zero() {
            continue;
        }
        let p = a / &d;
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

fn max_min_distance(from: &[BigComplex], to: &[BigComplex], prec: u32) -> Float {
    let mut worst = Float::new(prec);
    for a in from {
        let best = to
            .iter()
            .map(|b| a.dist(b))
            .min_by(|x, y| x.partial_cmp(y).unwrap())
            .unwrap_or_else(|| Float::with_val(prec, rug::float::Special::Infinity));
        if best > worst {
            worst = best;
        }
    }
    worst
}

/// Branch points of `A(z, w) = 0`. In the degenerate case `β_j = α_{j+1}` they
/// are the closed-form `p_i`, cross-checked against the discriminant; otherwise
/// the certified discriminant zeros.
pub fn branch_points(
    curve: &BivariateCurve,
    schedule: &ParameterSchedule,
    prec: u32,
) -> Result<BranchPointSet> {
    let general_type = is_general_type(schedule);
    let disc = discriminant(curve)?;
    let disc_zeros = discriminant_zeros(&disc, prec)?;
    let degenerate = curve.is_degenerate();
    let (points, cross_check) = if degenerate {
        let exact = closed_form_branch_points(curve.alphas());
        let values: Vec<BigComplex> = exact.iter().map(|p| BigComplex::from_rational(prec, p)).collect();
        let cc =
            max_min_distance(&values, &disc_zeros, prec).max(&max_min_distance(&disc_zeros, &values, prec));
        let points = exact
            .into_iter()
            .zip(values)
            .map(|(e, v)| BranchPoint {
                value: v,
                exact: Some(e),
            })
            .collect();
        (points, Some(cc))
    } else {
        let points = disc_zeros
            .iter()
            .map(|v| BranchPoint {
                value: v.clone(),
                exact: None,
            })
            .collect();
        (points, None)
    };
    Ok(BranchPointSet {
        points,
        degenerate,
        general_type,
        discriminant_zeros: disc_zeros,
        cross_check,
        precision: prec,
    })
}

#[derive(Clone, Debug)]
pub struct Prop3Report {
    /// Branch label and the numerator of `A(z, f(z))` after clearing denominators.
    pub residuals: Vec<(String, QPoly)>,
}

impl Prop3Report {
    pub fn all_vanish(&self) -> bool {
        self.residuals.iter().all(|(_, r)| r.is_zero())
    }
}

/// Substitutes the rational branches `w = 1/(z − 1)` and `w = −α_i/z` into the
/// expanded curve and clears denominators; every residual must vanish exactly.
pub fn verify_prop3(schedule: &ParameterSchedule) -> Result<Prop3Report> {
    if let Some(i) = schedule.first_non_degenerate() {
        return Err(Error::NotDegenerate { i });
    }
    let curve = build_curve(schedule)?;
    let a = curve.branch_count();
    let z = QPoly::new(vec![ComplexRational::zero(), ComplexRational::one()]);
    let z_minus_one = QPoly::new(vec![ComplexRational::from_int(-1), ComplexRational::one()]);
    let pow = |p: &QPoly, k: usize| (0..k).fold(QPoly::constant(ComplexRational::one()), |acc, _| &acc * p);

    let mut residuals = Vec::new();
    // w = 1/(z - 1): multiply by (z - 1)^A.
    let mut r = QPoly::zero();
    for (&(j, k), c) in curve.terms() {
        let t = &(&pow(&z, j) * &pow(&z_minus_one, a - k)).scale(c);
        r = &r + t;
    }
    residuals.push(("w = 1/(z-1)".to_string(), r));

    // w = -α_i/z: multiply by z^A.
    for (i, alpha) in curve.alphas().iter().enumerate().skip(1) {
        let neg = -alpha;
        let mut r = QPoly::zero();
        for (&(j, k), c) in curve.terms() {
            let t = pow(&z, j + a - k).scale(&(c * &neg.pow(k as u32)));
            r = &r + &t;
        }
        residuals.push((format!("w = -alpha_{}/z", i + 1), r));
    }
    Ok(Prop3Report { residuals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mp::pow2;

    fn cr(s: &str) -> ComplexRational {
        s.parse().unwrap()
    }

    fn example1(k: &str) -> ParameterSchedule {
        ParameterSchedule::lemniscate_family(cr(k))
    }

    #[test]
    fn structured_and_expanded_agree() {
        for tail in [vec!["2"], vec!["i", "1+2i"], vec!["1/2-i", "3", "-2/3+i"]] {
            let tail: Vec<_> = tail.into_iter().map(cr).collect();
            let s = ParameterSchedule::degenerate_family(&tail);
            let c = build_curve(&s).unwrap();
            assert_eq!(c.structured_expansion(), c.expanded);
            assert_eq!(c.expanded.w_degree(), c.branch_count());
        }
        let s = ParameterSchedule::new(
            vec![cr("-1"), cr("2+i"), cr("3")],
            vec![cr("0"), cr("1"), cr("0")],
            vec![cr("5"), cr("-1/2")],
            vec![cr("0"), cr("0")],
        )
        .unwrap();
        let c = build_curve(&s).unwrap();
        assert_eq!(c.structured_expansion(), c.expanded);
    }

    #[test]
    fn single_branch_curve() {
        // A = 1: (zw - 1) - w
        let s = ParameterSchedule::new(vec![cr("-1")], vec![cr("0")], vec![], vec![]).unwrap();
        let c = build_curve(&s).unwrap();
        let want = BiPoly::from_terms([((1, 1), cr("1")), ((0, 0), cr("-1")), ((0, 1), cr("-1"))]);
        assert_eq!(c.expanded, want);
        let bp = branch_points(&c, &s, 128).unwrap();
        assert!(bp.points.is_empty());
    }

    #[test]
    fn example1_factorization() {
        // (zw - 1)(zw + k) - w(zw + k) for k = 3
        let k = cr("3");
        let c = build_curve(&example1("3")).unwrap();
        let zw = |c0: &ComplexRational| BiPoly::from_terms([((1, 1), cr("1")), ((0, 0), c0.clone())]);
        let w = BiPoly::from_terms([((0, 1), cr("1"))]);
        let want = zw(&cr("-1")).mul(&zw(&k)).sub(&w.mul(&zw(&k)));
        assert_eq!(c.expanded, want);
    }

    #[test]
    fn leading_coefficient_is_z_pow_b_times_z_minus_one() {
        let s = ParameterSchedule::degenerate_family(&[cr("i"), cr("1+2i")]);
        let c = build_curve(&s).unwrap();
        let lead = c.w_coefficient_polys().pop().unwrap();
        // z^2 (z - 1) = -z^2 + z^3
        assert_eq!(lead, QPoly::new(vec![cr("0"), cr("0"), cr("-1"), cr("1")]));
    }

    #[test]
    fn zero_alpha_rejected() {
        let s = ParameterSchedule::lemniscate_family(cr("0"));
        assert!(matches!(build_curve(&s), Err(Error::DegeneratePencil { i: 2 })));
    }

    #[test]
    fn branches_of_example1() {
        let c = build_curve(&example1("1")).unwrap();
        let z = BigComplex::from_f64(256, 2.0, 0.0);
        let w = branches_at(&c, &z, 256).unwrap();
        assert!(w[0].dist(&BigComplex::from_f64(256, -0.5, 0.0)) < pow2(256, -200));
        assert!(w[1].dist(&BigComplex::from_f64(256, 1.0, 0.0)) < pow2(256, -200));

        let half = BigComplex::from_f64(256, 0.5, 0.0);
        let w = branches_at(&c, &half, 256).unwrap();
        let minus_two = BigComplex::from_f64(256, -2.0, 0.0);
        assert!(w[0].dist(&minus_two) < pow2(256, -100));
        assert!(w[1].dist(&minus_two) < pow2(256, -100));

        assert!(matches!(
            branches_at(&c, &BigComplex::zero(256), 256),
            Err(Error::Singular(..))
        ));
        assert!(matches!(
            branches_at(&c, &BigComplex::from_f64(256, 1.0, 0.0), 256),
            Err(Error::Singular(..))
        ));
    }

    #[test]
    fn example1_discriminant() {
        // disc ∝ ((k+1) z - k)^2 up to z and z - 1 factors
        for k in ["1", "2", "5/2"] {
            let kk = cr(k);
            let c = build_curve(&example1(k)).unwrap();
            let d = discriminant(&c).unwrap();
            let p = &kk / &(&kk + &cr("1"));
            assert_eq!(d.squarefree, QPoly::linear_root(&p));
        }
    }

    #[test]
    fn complex_branch_point() {
        let s = example1("1/2-i");
        let c = build_curve(&s).unwrap();
        let bp = branch_points(&c, &s, 256).unwrap();
        assert!(bp.degenerate);
        assert!(bp.general_type.is_general());
        assert_eq!(bp.points.len(), 1);
        assert_eq!(bp.points[0].exact, Some(&cr("1/2-i") / &cr("3/2-i")));
        assert!(bp.cross_check.unwrap() < pow2(256, -200));
    }

    #[test]
    fn repeated_alpha_is_non_reduced() {
        let s = ParameterSchedule::degenerate_family(&[cr("2+i"), cr("2+i")]);
        let c = build_curve(&s).unwrap();
        assert!(matches!(discriminant(&c), Err(Error::NonReduced)));
    }

    #[test]
    fn rational_branches_satisfy_curve() {
        for tail in [vec!["1"], vec!["7/3"], vec!["1/2-i", "2+i"], vec!["i", "1+2i"]] {
            let tail: Vec<_> = tail.into_iter().map(cr).collect();
            let r = verify_prop3(&ParameterSchedule::degenerate_family(&tail)).unwrap();
            assert_eq!(r.residuals.len(), tail.len() + 1);
            assert!(r.all_vanish());
        }
        let s = ParameterSchedule::new(
            vec![cr("-1"), cr("2")],
            vec![cr("0"), cr("0")],
            vec![cr("3")],
            vec![cr("0")],
        )
        .unwrap();
        assert!(matches!(verify_prop3(&s), Err(Error::NotDegenerate { i: 1 })));
    }

    #[test]
    fn resultant_of_linear_pair() {
        // Res(z - 2, z - 5) = 2 - 5 with our row convention: det [[1,-2],[1,-5]] = -3
        let r = sylvester_resultant(&[cr("-2"), cr("1")], &[cr("-5"), cr("1")]);
        assert_eq!(r, cr("-3"));
    }
}

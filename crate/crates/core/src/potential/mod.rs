//! Harmonic branches `H_i = Re ∫_p^z f_i`, their shifted versions `H̃_i`, level
//! curves of pairwise differences, the majorant `Ψ = max H̃_i` and the set `K`
//! where the maximizing branch changes.
//!
//! Everything here works in double precision; branch indices are 1-based and
//! index 1 is always `H_1`, the branch of `1/(z − 1)`.

mod quadrature;
mod regions;
mod trace;

pub use quadrature::{gauss_kronrod, harmonic_value_by_integration, QuadratureOptions};
pub use regions::{classify_regions, psi_value, PsiValue, Rect, RegionGrid};
pub use trace::{
    critical_points, seed_on_ray, trace_all, trace_from_saddle, trace_level_curve, CriticalPoint, End,
    LevelCurve, TraceOptions,
};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::aberth::roots_c64;
use crate::curve::{build_curve, closed_form_branch_points, BivariateCurve};
use crate::error::{Error, Result};
use crate::schedule::ParameterSchedule;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Degenerate schedules: every branch is rational and `H_i` has a closed form.
    ClosedForm,
    /// General schedules: `H_i` only through path integrals of tracked branches.
    PathIntegral,
}

/// Points too close to 0 or 1 for the logarithms to be meaningful.
const SINGULAR_RADIUS: f64 = 1e-14;

#[derive(Clone, Debug)]
pub struct HarmonicSystem {
    schedule: ParameterSchedule,
    curve: BivariateCurve,
    alphas: Vec<Complex64>,
    basepoint: Complex64,
    mode: Mode,
    /// `p_i` for `i ≥ 2`; `None` where `α_i = −1` or in path-integral mode.
    branch_points: Vec<Option<Complex64>>,
    /// `C_i` with `C_1 = 0`.
    offsets: Vec<f64>,
}

fn check_regular(z: Complex64) -> Result<()> {
    if z.norm() < SINGULAR_RADIUS {
        return Err(Error::Singular(format!("{z}"), "log|z| and Arg z diverge at 0"));
    }
    if (z - 1.0).norm() < SINGULAR_RADIUS {
        return Err(Error::Singular(format!("{z}"), "log|1 - z| diverges at 1"));
    }
    Ok(())
}

impl HarmonicSystem {
    /// Closed-form mode for degenerate schedules with the basepoint at `p_2`;
    /// path-integral mode otherwise with a basepoint away from branch collisions.
    pub fn new(schedule: &ParameterSchedule) -> Result<Self> {
        if schedule.is_degenerate() {
            let p = closed_form_branch_points(schedule.alphas())
                .first()
                .map(|p| p.to_c64())
                .unwrap_or(Complex64::new(2.0, 0.0));
            Self::with_basepoint(schedule, p)
        } else {
            let curve = build_curve(schedule)?;
            let candidates = [(2.0, 1.0), (-1.0, 1.0), (2.0, -1.0), (3.0, 2.0), (0.5, 2.0)];
            let p = candidates
                .iter()
                .map(|&(x, y)| Complex64::new(x, y))
                .find(|&z| min_separation(&branch_values(&curve, z)) > 1e-3)
                .ok_or_else(|| Error::Invalid("no default basepoint avoids branch collisions".into()))?;
            Self::with_basepoint(schedule, p)
        }
    }

    pub fn with_basepoint(schedule: &ParameterSchedule, basepoint: Complex64) -> Result<Self> {
        check_regular(basepoint)?;
        let curve = build_curve(schedule)?;
        let alphas: Vec<Complex64> = schedule.alphas().iter().map(|a| a.to_c64()).collect();
        let mode = if schedule.is_degenerate() {
            Mode::ClosedForm
        } else {
            Mode::PathIntegral
        };
        let mut sys = HarmonicSystem {
            schedule: schedule.clone(),
            curve,
            alphas,
            basepoint,
            mode,
            branch_points: Vec::new(),
            offsets: Vec::new(),
        };
        if mode == Mode::ClosedForm {
            sys.branch_points = sys.alphas[1..]
                .iter()
                .map(|&a| ((a + 1.0).norm() > 0.0).then(|| a / (a + 1.0)))
                .collect();
            let mut offsets = vec![0.0];
            for i in 2..=sys.branch_count() {
                let c = match sys.branch_points[i - 2] {
                    Some(p) if check_regular(p).is_ok() => sys.closed_form(1, p) - sys.closed_form(i, p),
                    _ => {
                        log::warn!("branch {i} has no usable branch point; offset set to 0");
                        0.0
                    }
                };
                offsets.push(c);
            }
            sys.offsets = offsets;
        } else {
            sys.offsets = vec![0.0; sys.branch_count()];
        }
        Ok(sys)
    }

    pub fn schedule(&self) -> &ParameterSchedule {
        &self.schedule
    }

    pub fn curve(&self) -> &BivariateCurve {
        &self.curve
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn basepoint(&self) -> Complex64 {
        self.basepoint
    }

    pub fn branch_count(&self) -> usize {
        self.alphas.len()
    }

    pub fn alpha(&self, i: usize) -> Complex64 {
        self.alphas[i - 1]
    }

    /// `p_i` for `i ≥ 2` in closed-form mode.
    pub fn branch_point(&self, i: usize) -> Option<Complex64> {
        if i < 2 {
            return None;
        }
        self.branch_points.get(i - 2).copied().flatten()
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i == 0 || i > self.branch_count() {
            return Err(Error::BranchIndex(i, self.branch_count()));
        }
        Ok(())
    }

    fn require_closed_form(&self) -> Result<()> {
        if self.mode != Mode::ClosedForm {
            return Err(Error::Invalid(
                "closed forms need a degenerate schedule; use path integration".into(),
            ));
        }
        Ok(())
    }

    fn closed_form(&self, i: usize, z: Complex64) -> f64 {
        let p = self.basepoint;
        if i == 1 {
            (1.0 - z).norm().ln() - (1.0 - p).norm().ln()
        } else {
            let a = self.alphas[i - 1];
            -a.re * z.norm().ln() + a.im * z.arg() + a.re * p.norm().ln() - a.im * p.arg()
        }
    }

    /// `H_i(z)`, closed-form mode only.
    pub fn harmonic_value(&self, i: usize, z: Complex64) -> Result<f64> {
        self.check_index(i)?;
        self.require_closed_form()?;
        check_regular(z)?;
        Ok(self.closed_form(i, z))
    }

    /// `H̃_i(z) = H_i(z) + C_i`.
    pub fn tilde_value(&self, i: usize, z: Complex64) -> Result<f64> {
        Ok(self.harmonic_value(i, z)? + self.offsets[i - 1])
    }

    /// All `H̃_1, …, H̃_A` at `z` without validation.
    pub(crate) fn tilde_values_unchecked(&self, z: Complex64) -> Vec<f64> {
        (1..=self.branch_count())
            .map(|i| self.closed_form(i, z) + self.offsets[i - 1])
            .collect()
    }

    /// The rational branch `f_i` in closed-form mode.
    pub fn branch_function(&self, i: usize, z: Complex64) -> Complex64 {
        if i == 1 {
            1.0 / (z - 1.0)
        } else {
            -self.alphas[i - 1] / z
        }
    }

    pub(crate) fn branch_derivative(&self, i: usize, z: Complex64) -> Complex64 {
        if i == 1 {
            -1.0 / ((z - 1.0) * (z - 1.0))
        } else {
            self.alphas[i - 1] / (z * z)
        }
    }

    /// Whether the pair `(i, j)` has a nonzero Arg coefficient, so the
    /// difference jumps across the negative real axis.
    pub fn pair_crosses_cut(&self, i: usize, j: usize) -> bool {
        let y = |k: usize| if k == 1 { 0.0 } else { self.alphas[k - 1].im };
        y(i) != y(j)
    }

    pub fn any_cut(&self) -> bool {
        self.alphas[1..].iter().any(|a| a.im != 0.0)
    }

    /// Labels the branches at `z` (path-integral mode: lexicographic order;
    /// closed-form mode: nearest to the rational branch).
    pub(crate) fn initial_branch(&self, i: usize, z: Complex64) -> Result<Complex64> {
        let vals = branch_values(&self.curve, z);
        if vals.len() != self.branch_count() {
            return Err(Error::Invalid(format!("branch count at {z} is {}", vals.len())));
        }
        match self.mode {
            Mode::PathIntegral => Ok(vals[i - 1]),
            Mode::ClosedForm => {
                let target = self.branch_function(i, z);
                let best = vals
                    .iter()
                    .copied()
                    .min_by(|a, b| (a - target).norm().total_cmp(&(b - target).norm()))
                    .unwrap();
                Ok(best)
            }
        }
    }
}

/// Branch values of `A(z, ·) = 0` in double precision, sorted lexicographically.
pub fn branch_values(curve: &BivariateCurve, z: Complex64) -> Vec<Complex64> {
    let mut w = roots_c64(&curve.w_coefficients_c64(z));
    w.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    w
}

pub(crate) fn min_separation(values: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for (k, a) in values.iter().enumerate() {
        for b in &values[k + 1..] {
            best = best.min((a - b).norm());
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ComplexRational;

    fn cr(s: &str) -> ComplexRational {
        s.parse().unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn h1_vanishes_at_basepoint() {
        let sys = HarmonicSystem::new(&ParameterSchedule::lemniscate_family(cr("1/2-i"))).unwrap();
        assert_eq!(sys.mode(), Mode::ClosedForm);
        assert!(sys.harmonic_value(1, sys.basepoint()).unwrap().abs() < 1e-15);
        assert!(sys.harmonic_value(2, sys.basepoint()).unwrap().abs() < 1e-15);
    }

    #[test]
    fn offsets_match_at_branch_points() {
        let s = ParameterSchedule::degenerate_family(&[cr("i"), cr("1+2i")]);
        let sys = HarmonicSystem::new(&s).unwrap();
        for i in 2..=3 {
            let p = sys.branch_point(i).unwrap();
            let d = sys.tilde_value(i, p).unwrap() - sys.harmonic_value(1, p).unwrap();
            assert!(d.abs() < 1e-14, "branch {i}: {d}");
        }
    }

    #[test]
    fn lemniscate_identity() {
        // H̃_2 − H_1 = 0  ⟺  |z^k (1 − z)| = k^k/(k+1)^(k+1)
        for (ks, k) in [("1", 1.0f64), ("2", 2.0), ("7/2", 3.5)] {
            let sys = HarmonicSystem::new(&ParameterSchedule::lemniscate_family(cr(ks))).unwrap();
            let level = k.powf(k) / (k + 1.0).powf(k + 1.0);
            for z in [c(1.3, 0.2), c(0.2, -0.7), c(2.0, 1.0)] {
                let diff = sys.tilde_value(2, z).unwrap() - sys.harmonic_value(1, z).unwrap();
                let want = (level / (z.powf(k) * (1.0 - z)).norm()).ln();
                assert!((diff - want).abs() < 1e-12, "k={k} z={z}: {diff} vs {want}");
            }
        }
    }

    #[test]
    fn complex_slope_at_two() {
        // H_2(2) = −(1/2) log 2 + const with Arg 2 = 0
        let sys = HarmonicSystem::new(&ParameterSchedule::lemniscate_family(cr("1/2-i"))).unwrap();
        let p = sys.basepoint();
        // α^x = 1/2, α^y = −1
        let constant = 0.5 * p.norm().ln() + p.arg();
        let got = sys.harmonic_value(2, c(2.0, 0.0)).unwrap();
        assert!((got - (-0.5 * 2f64.ln() + constant)).abs() < 1e-14);
    }

    #[test]
    fn singular_points_rejected() {
        let sys = HarmonicSystem::new(&ParameterSchedule::lemniscate_family(cr("1"))).unwrap();
        assert!(matches!(
            sys.harmonic_value(1, c(1.0, 0.0)),
            Err(Error::Singular(..))
        ));
        assert!(matches!(
            sys.harmonic_value(2, c(0.0, 0.0)),
            Err(Error::Singular(..))
        ));
        assert!(matches!(
            sys.harmonic_value(3, c(2.0, 0.0)),
            Err(Error::BranchIndex(3, 2))
        ));
    }

    #[test]
    fn general_schedule_uses_path_integrals() {
        let s = ParameterSchedule::new(
            vec![cr("-1"), cr("2")],
            vec![cr("0"), cr("1")],
            vec![cr("3")],
            vec![cr("1")],
        )
        .unwrap();
        let sys = HarmonicSystem::new(&s).unwrap();
        assert_eq!(sys.mode(), Mode::PathIntegral);
        assert!(sys.harmonic_value(1, c(2.0, 0.0)).is_err());
    }
}

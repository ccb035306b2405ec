//! Simultaneous (Aberth–Ehrlich) iteration for all zeros of a polynomial.
//!
//! Sweeps are Jacobi-style: every correction of a sweep is computed from the
//! positions at the start of the sweep, so the result does not depend on how
//! rayon schedules the per-root work.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use rayon::prelude::*;
use rug::Float;

use crate::error::IterationTrace;
use crate::mp::{horner_with_derivative, magnitude_scale, BigComplex};

/// Angular offset of the starting circles, breaking symmetry with the real axis.
const SEED_ANGLE: f64 = 0.7;

#[derive(Clone, Debug)]
pub struct AberthOutcome {
    pub roots: Vec<BigComplex>,
    pub converged: bool,
    pub trace: IterationTrace,
}

fn log2_abs(z: &BigComplex) -> Option<f64> {
    if z.is_zero() {
        return None;
    }
    let (m, e) = z.abs().to_f64_exp();
    Some(e as f64 + m.log2())
}

/// Starting points on circles whose radii come from the upper convex hull of
/// `(k, log2 |c_k|)`; one circle per hull edge, as many points as the edge spans.
pub fn newton_polygon_seeds(coeffs: &[BigComplex], prec: u32) -> Vec<BigComplex> {
    let pts: Vec<(usize, f64)> = coeffs
        .iter()
        .enumerate()
        .filter_map(|(k, c)| log2_abs(c).map(|l| (k, l)))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 as f64 - a.0 as f64) * (p.1 - a.1) - (b.1 - a.1) * (p.0 as f64 - a.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let degree = coeffs.len() - 1;
    let mut seeds = Vec::with_capacity(degree);
    for (edge, w) in hull.windows(2).enumerate() {
        let (ka, la) = w[0];
        let (kb, lb) = w[1];
        let m = kb - ka;
        let log2r = (la - lb) / m as f64;
        let radius = Float::with_val(prec, log2r).exp2();
        for j in 0..m {
            let theta = std::f64::consts::TAU * (j as f64 / m as f64)
                + std::f64::consts::TAU * edge as f64 / degree as f64
                + SEED_ANGLE;
            let unit = BigComplex::from_f64(prec, theta.cos(), theta.sin());
            seeds.push(unit.mul_real(&radius));
        }
    }
    seeds
}

/// Eigenvalues of the scaled companion matrix in double precision, or `None`
/// when the scaled coefficients leave the f64 range.
pub fn companion_seeds(coeffs: &[BigComplex]) -> Option<Vec<Complex64>> {
    let n = coeffs.len().checked_sub(1).filter(|&n| n > 0)?;
    let prec = coeffs[0].prec();
    let l0 = log2_abs(&coeffs[0])?;
    let ln = log2_abs(&coeffs[n])?;
    let log2s = (l0 - ln) / n as f64;
    let lead = coeffs[n].clone();
    let mut q = Vec::with_capacity(n);
    for (k, c) in coeffs[..n].iter().enumerate() {
        let shift = Float::with_val(prec, log2s * (k as f64 - n as f64)).exp2();
        let v = (c / &lead).mul_real(&shift).to_c64();
        if !(v.re.is_finite() && v.im.is_finite()) {
            return None;
        }
        q.push(v);
    }
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for j in 0..n {
        m[(0, j)] = -q[n - 1 - j];
    }
    for i in 1..n {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    let schur = Schur::try_new(m, 1e-14, 10_000)?;
    let eig = schur.eigenvalues()?;
    let s = 2f64.powf(log2s);
    if !s.is_finite() {
        return None;
    }
    Some(eig.iter().map(|z| z * s).collect())
}

/// Runs Aberth sweeps from `seeds` until every root is stationary at the
/// working precision or `max_sweeps` is reached.
pub fn aberth(coeffs: &[BigComplex], mut roots: Vec<BigComplex>, max_sweeps: usize) -> AberthOutcome {
    let n = roots.len();
    let prec = coeffs[0].prec();
    let mut active = vec![true; n];
    let mut trace = IterationTrace::default();
    // Rounding noise of Horner relative to Σ|c_k||z|^k.
    let noise = Float::with_val(prec, 1) << -(prec as i32 - 2 - (usize::BITS - n.leading_zeros()) as i32);
    let step_tol_log2 = -(prec as f64) + 6.0;

    for _ in 0..max_sweeps {
        if !active.iter().any(|&a| a) {
            break;
        }
        let snapshot = &roots;
        let corrections: Vec<Option<(BigComplex, bool)>> = (0..n)
            .into_par_iter()
            .map(|i| {
                if !active[i] {
                    return None;
                }
                let z = &snapshot[i];
                let (p, dp) = horner_with_derivative(coeffs, z);
                if p.is_zero() || p.abs() <= Float::with_val(prec, magnitude_scale(coeffs, z) * &noise) {
                    return Some((BigComplex::zero(prec), true));
                }
                let mut s = BigComplex::zero(prec);
                for (j, zj) in snapshot.iter().enumerate() {
                    if j != i {
                        let d = z - zj;
                        if !d.is_zero() {
                            s = &s + &d.recip();
                        }
                    }
                }
                let denom = &dp - &(&p * &s);
                if denom.is_zero() {
                    return Some((BigComplex::zero(prec), false));
                }
                Some((&p / &denom, false))
            })
            .collect();

        let mut max_rel = f64::NEG_INFINITY;
        for (i, c) in corrections.into_iter().enumerate() {
            let Some((w, settled)) = c else { continue };
            if settled {
                active[i] = false;
                continue;
            }
            let rel = match (log2_abs(&w), log2_abs(&roots[i])) {
                (None, _) => f64::NEG_INFINITY,
                (Some(lw), Some(lz)) => lw - lz.max(0.0),
                (Some(lw), None) => lw,
            };
            roots[i] = &roots[i] - &w;
            max_rel = max_rel.max(rel);
            if rel <= step_tol_log2 {
                active[i] = false;
            }
        }
        trace.active.push(active.iter().filter(|&&a| a).count());
        trace.max_correction_log2.push(max_rel);
    }
    let converged = !active.iter().any(|&a| a);
    AberthOutcome {
        roots,
        converged,
        trace,
    }
}

pub fn default_max_sweeps(degree: usize) -> usize {
    200 + 8 * degree
}

/// All zeros of `Σ c_k z^k`; exact zero roots are split off first. The
/// leading coefficient must be nonzero.
pub fn solve(coeffs: &[BigComplex]) -> AberthOutcome {
    assert!(
        coeffs.last().is_some_and(|c| !c.is_zero()),
        "leading coefficient must be nonzero"
    );
    let prec = coeffs[0].prec();
    let zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
    let core = &coeffs[zeros..];
    let mut out = vec![BigComplex::zero(prec); zeros];
    if core.len() <= 1 {
        return AberthOutcome {
            roots: out,
            converged: true,
            trace: IterationTrace::default(),
        };
    }
    let degree = core.len() - 1;
    let max_sweeps = default_max_sweeps(degree);
    let mut outcome = aberth(core, newton_polygon_seeds(core, prec), max_sweeps);
    if !outcome.converged {
        if let Some(seeds) = companion_seeds(core) {
            log::info!("circle seeds stalled at degree {degree}; reseeding from companion eigenvalues");
            let seeds = seeds.into_iter().map(|z| BigComplex::from_c64(prec, z)).collect();
            let retry = aberth(core, seeds, max_sweeps);
            let mut trace = outcome.trace;
            trace.active.extend(retry.trace.active);
            trace.max_correction_log2.extend(retry.trace.max_correction_log2);
            outcome = AberthOutcome {
                roots: retry.roots,
                converged: retry.converged,
                trace,
            };
        }
    }
    out.extend(outcome.roots);
    outcome.roots = out;
    outcome
}

/// One Newton step `z − p/p'`, kept only if it does not increase `|p|`.
pub fn newton_polish(coeffs: &[BigComplex], z: &BigComplex) -> BigComplex {
    let (p, dp) = horner_with_derivative(coeffs, z);
    if p.is_zero() || dp.is_zero() {
        return z.clone();
    }
    let cand = z - &(&p / &dp);
    let (pc, _) = horner_with_derivative(coeffs, &cand);
    if pc.abs() <= p.abs() {
        cand
    } else {
        z.clone()
    }
}

/// Double-precision zeros of a low-degree polynomial (used for branch values
/// along paths). Coefficients low to high, nonzero leading coefficient.
pub fn roots_c64(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c = coeffs.to_vec();
    while c.last().is_some_and(|v| *v == Complex64::new(0.0, 0.0)) {
        c.pop();
    }
    let n = c.len().saturating_sub(1);
    match n {
        0 => return Vec::new(),
        1 => return vec![-c[0] / c[1]],
        _ => {}
    }
    let eval = |z: Complex64| {
        let mut v = Complex64::new(0.0, 0.0);
        let mut d = Complex64::new(0.0, 0.0);
        for a in c.iter().rev() {
            d = d * z + v;
            v = v * z + a;
        }
        (v, d)
    };
    let r = (c[0].norm() / c[n].norm()).powf(1.0 / n as f64).max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|j| Complex64::from_polar(r, std::f64::consts::TAU * j as f64 / n as f64 + SEED_ANGLE))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        let snapshot = z.clone();
        for i in 0..n {
            let (p, dp) = eval(snapshot[i]);
            if p == Complex64::new(0.0, 0.0) {
                continue;
            }
            let s: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| 1.0 / (snapshot[i] - snapshot[j]))
                .sum();
            let w = p / (dp - p * s);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / snapshot[i].norm().max(1e-300));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..2 {
            let (p, dp) = eval(*zi);
            let step = p / dp;
            if step.is_finite() && eval(*zi - step).0.norm() <= p.norm() {
                *zi -= step;
            }
        }
    }
    z
}

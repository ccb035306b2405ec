//! `H_i(z) = Re ∫_p^z f_i(s) ds` along a polyline, with the branch `f_i`
//! continued by nearest-value tracking.

use num_complex::Complex64;

use super::{branch_values, min_separation, HarmonicSystem};
use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
/// Gauss weights for the nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// The 15 Kronrod nodes on `[-1, 1]` in increasing order with their
/// Kronrod weights and Gauss weights (zero off the Gauss subset).
fn nodes() -> [(f64, f64, f64); 15] {
    let mut out = [(0.0, 0.0, 0.0); 15];
    for k in 0..7 {
        let g = if k % 2 == 1 { WG[k / 2] } else { 0.0 };
        out[k] = (-XGK[k], WGK[k], g);
        out[14 - k] = (XGK[k], WGK[k], g);
    }
    out[7] = (0.0, WGK[7], WG[3]);
    out
}

/// Gauss–Kronrod 7/15 on `[a, b]`: the Kronrod value and `|K − G|`.
pub fn gauss_kronrod(f: impl Fn(f64) -> Complex64, a: f64, b: f64) -> (Complex64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut k = Complex64::new(0.0, 0.0);
    let mut g = Complex64::new(0.0, 0.0);
    for (x, wk, wg) in nodes() {
        let v = f(mid + half * x);
        k += v * wk;
        g += v * wg;
    }
    (k * half, ((k - g) * half).norm())
}

#[derive(Clone, Copy, Debug)]
pub struct QuadratureOptions {
    /// Absolute error accepted per subinterval.
    pub tolerance: f64,
    /// Branch separation below which the path counts as hitting a collision.
    pub collision: f64,
    /// Smallest subinterval, as a fraction of a path segment.
    pub min_step: f64,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        QuadratureOptions {
            tolerance: 1e-14,
            collision: 1e-9,
            min_step: 1e-10,
        }
    }
}

fn segment_distance(a: Complex64, b: Complex64, q: Complex64) -> f64 {
    let d = b - a;
    let t = if d.norm_sqr() == 0.0 {
        0.0
    } else {
        (((q - a) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0)
    };
    (a + d * t - q).norm()
}

/// Integrates the tracked branch `f_i` along `path` (first vertex the
/// basepoint, last vertex the target) and returns the real part.
pub fn harmonic_value_by_integration(
    sys: &HarmonicSystem,
    i: usize,
    path: &[Complex64],
    opts: &QuadratureOptions,
) -> Result<f64> {
    if i == 0 || i > sys.branch_count() {
        return Err(Error::BranchIndex(i, sys.branch_count()));
    }
    let Some(&start) = path.first() else {
        return Err(Error::InvalidPath("empty path".into()));
    };
    if (start - sys.basepoint()).norm() > 1e-12 {
        return Err(Error::InvalidPath(format!(
            "path starts at {start}, not at the basepoint {}",
            sys.basepoint()
        )));
    }
    for seg in path.windows(2) {
        for s in [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)] {
            if segment_distance(seg[0], seg[1], s) < 1e-8 {
                return Err(Error::InvalidPath(format!("path passes through {s}")));
            }
        }
    }

    let curve = sys.curve();
    let mut w = sys.initial_branch(i, start)?;
    let mut total = Complex64::new(0.0, 0.0);
    let nodes = nodes();

    for seg in path.windows(2) {
        let (a, b) = (seg[0], seg[1]);
        let d = b - a;
        if d.norm() == 0.0 {
            continue;
        }
        let mut t0 = 0.0;
        let mut h: f64 = 0.125;
        while t0 < 1.0 {
            h = h.min(1.0 - t0);
            let attempt = (|| {
                let mut cur = w;
                let mut k = Complex64::new(0.0, 0.0);
                let mut g = Complex64::new(0.0, 0.0);
                let mid = t0 + 0.5 * h;
                let ts = nodes.iter().map(|&(x, wk, wg)| (mid + 0.5 * h * x, wk, wg));
                for (t, wk, wg) in ts.chain(std::iter::once((t0 + h, 0.0, 0.0))) {
                    let s = a + d * t;
                    let vals = branch_values(curve, s);
                    let sep = min_separation(&vals);
                    if sep < opts.collision {
                        return Err(Some(Error::BranchCollision {
                            at: format!("{s}"),
                            separation: sep,
                        }));
                    }
                    let next = vals
                        .iter()
                        .copied()
                        .min_by(|x, y| (x - cur).norm().total_cmp(&(y - cur).norm()))
                        .unwrap();
                    if (next - cur).norm() >= 0.25 * sep {
                        return Err(None);
                    }
                    cur = next;
                    k += cur * wk;
                    g += cur * wg;
                }
                let scale = 0.5 * h;
                let err = ((k - g) * d * scale).norm();
                if err > opts.tolerance.max(opts.tolerance * (k * d * scale).norm()) {
                    return Err(None);
                }
                Ok((k * d * scale, cur))
            })();
            match attempt {
                Ok((piece, end)) => {
                    total += piece;
                    w = end;
                    t0 += h;
                    h *= 2.0;
                }
                Err(Some(e)) => return Err(e),
                Err(None) => {
                    h *= 0.5;
                    if h < opts.min_step {
                        let s = a + d * t0;
                        return Err(Error::BranchCollision {
                            at: format!("{s}"),
                            separation: min_separation(&branch_values(curve, s)),
                        });
                    }
                }
            }
        }
    }
    Ok(total.re)
}

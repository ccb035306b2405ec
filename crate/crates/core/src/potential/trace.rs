//! Predictor–corrector tracing of `F = H̃_i − H̃_j = 0`.
//!
//! `F` is the real part of an analytic `G` with `G' = g = f_i − f_j`, so
//! `∇F = conj(g)` as a complex vector and the tangent is `i·conj(g)`.
//! Critical points are zeros of `g`; near one, `F ≈ Re(g'(z*) (z − z*)² / 2)`
//! and the four outgoing rays have angles `(π/2 − arg g')/2 + mπ/2`.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::regions::Rect;
use super::{HarmonicSystem, Mode};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceOptions {
    pub step: f64,
    pub bbox: Rect,
    /// Corrector target for `|F|`.
    pub tolerance: f64,
    pub max_points: usize,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions {
            step: 0.01,
            bbox: Rect::new(-4.0, 4.0, -4.0, 4.0),
            tolerance: 1e-12,
            max_points: 200_000,
        }
    }
}

/// How one end of a traced polyline terminated.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum End {
    Closed,
    Saddle(Complex64),
    /// Stopped at the Arg cut on the negative real axis.
    Cut,
    BoxExit,
    Singular,
    MaxPoints,
    Stalled,
}

impl fmt::Display for End {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            End::Closed => write!(f, "closed"),
            End::Saddle(z) => write!(f, "saddle({:.17e},{:.17e})", z.re, z.im),
            End::Cut => write!(f, "cut"),
            End::BoxExit => write!(f, "box"),
            End::Singular => write!(f, "singular"),
            End::MaxPoints => write!(f, "max-points"),
            End::Stalled => write!(f, "stalled"),
        }
    }
}

impl std::str::FromStr for End {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "closed" => End::Closed,
            "cut" => End::Cut,
            "box" => End::BoxExit,
            "singular" => End::Singular,
            "max-points" => End::MaxPoints,
            "stalled" => End::Stalled,
            _ => {
                let inner = s
                    .strip_prefix("saddle(")
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| Error::Parse(format!("unknown curve end {s:?}")))?;
                let (re, im) = inner
                    .split_once(',')
                    .ok_or_else(|| Error::Parse(format!("bad saddle {s:?}")))?;
                let num = |t: &str| t.parse::<f64>().map_err(|e| Error::Parse(format!("{t:?}: {e}")));
                End::Saddle(Complex64::new(num(re)?, num(im)?))
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub z: Complex64,
    pub pair: (usize, usize),
    /// Angles of the four outgoing rays of the zero set.
    pub directions: [f64; 4],
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevelCurve {
    /// `(i, j)` for `H̃_i − H̃_j = 0`.
    pub pair: (usize, usize),
    pub points: Vec<Complex64>,
    /// `|F|` at each point.
    pub residuals: Vec<f64>,
    pub closed: bool,
    pub ends: (End, End),
}

impl LevelCurve {
    pub fn saddles(&self) -> Vec<Complex64> {
        let mut out = Vec::new();
        for e in [self.ends.0, self.ends.1] {
            if let End::Saddle(z) = e {
                if !out.iter().any(|&s: &Complex64| (s - z).norm() < 1e-12) {
                    out.push(z);
                }
            }
        }
        out
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    /// CSV with `#` header lines.
    pub fn export(&self) -> String {
        let mut out = format!(
            "# pair={},{}\n# closed={}\n# ends={};{}\nre,im,residual\n",
            self.pair.0, self.pair.1, self.closed, self.ends.0, self.ends.1
        );
        for (z, r) in self.points.iter().zip(&self.residuals) {
            out.push_str(&format!("{:.17e},{:.17e},{:.3e}\n", z.re, z.im, r));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("level curve: {m}"));
        let mut pair = None;
        let mut closed = None;
        let mut ends = None;
        let mut points = Vec::new();
        let mut residuals = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if let Some(h) = line.strip_prefix('#') {
                let (k, v) = h.trim().split_once('=').ok_or_else(|| bad(line))?;
                match k {
                    "pair" => {
                        let (a, b) = v.split_once(',').ok_or_else(|| bad(v))?;
                        pair = Some((a.parse().map_err(|_| bad(a))?, b.parse().map_err(|_| bad(b))?));
                    }
                    "closed" => closed = Some(v == "true"),
                    "ends" => {
                        let (a, b) = v.split_once(';').ok_or_else(|| bad(v))?;
                        ends = Some((a.parse()?, b.parse()?));
                    }
                    _ => {}
                }
                continue;
            }
            if line.is_empty() || line.starts_with("re,") {
                continue;
            }
            let f: Vec<f64> = line
                .split(',')
                .map(|t| t.parse::<f64>().map_err(|_| bad(t)))
                .collect::<Result<_>>()?;
            if f.len() != 3 {
                return Err(bad(line));
            }
            points.push(Complex64::new(f[0], f[1]));
            residuals.push(f[2]);
        }
        Ok(LevelCurve {
            pair: pair.ok_or_else(|| bad("missing pair"))?,
            points,
            residuals,
            closed: closed.unwrap_or(false),
            ends: ends.unwrap_or((End::Stalled, End::Stalled)),
        })
    }
}

/// Evaluation of `F` and `g` for one pair.
struct Level<'a> {
    sys: &'a HarmonicSystem,
    i: usize,
    j: usize,
    crosses_cut: bool,
    critical: Vec<CriticalPoint>,
}

impl<'a> Level<'a> {
    fn new(sys: &'a HarmonicSystem, (i, j): (usize, usize)) -> Result<Self> {
        if sys.mode() != Mode::ClosedForm {
            return Err(Error::Invalid(
                "level tracing needs closed-form harmonic branches".into(),
            ));
        }
        let a = sys.branch_count();
        for k in [i, j] {
            if k == 0 || k > a {
                return Err(Error::BranchIndex(k, a));
            }
        }
        if i == j {
            return Err(Error::Invalid(format!("pair ({i}, {j}) is not a difference")));
        }
        Ok(Level {
            sys,
            i,
            j,
            crosses_cut: sys.pair_crosses_cut(i, j),
            critical: critical_points(sys, (i, j))?,
        })
    }

    fn value(&self, z: Complex64) -> f64 {
        let t = |k: usize| self.sys.closed_form(k, z) + self.sys.offsets[k - 1];
        t(self.i) - t(self.j)
    }

    fn g(&self, z: Complex64) -> Complex64 {
        self.sys.branch_function(self.i, z) - self.sys.branch_function(self.j, z)
    }

    fn grad(&self, z: Complex64) -> Complex64 {
        self.g(z).conj()
    }

    /// Newton projection onto `F = 0`.
    fn correct(&self, mut z: Complex64, tol: f64) -> Option<Complex64> {
        for _ in 0..12 {
            let f = self.value(z);
            if f.abs() < tol {
                return Some(z);
            }
            let gr = self.grad(z);
            let n2 = gr.norm_sqr();
            if n2 == 0.0 || !n2.is_finite() {
                return None;
            }
            z -= gr * (f / n2);
        }
        (self.value(z).abs() < tol).then_some(z)
    }

    /// Critical points lying on the zero set.
    fn on_curve_critical(&self) -> impl Iterator<Item = &CriticalPoint> {
        self.critical.iter().filter(|c| self.value(c.z).abs() < 1e-9)
    }

    fn median_gradient(&self, bbox: &Rect) -> f64 {
        let n = 33;
        let mut v: Vec<f64> = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let z = bbox.point((a as f64 + 0.5) / n as f64, (b as f64 + 0.5) / n as f64);
                let g = self.grad(z).norm();
                if g.is_finite() {
                    v.push(g);
                }
            }
        }
        v.sort_by(f64::total_cmp);
        v.get(v.len() / 2).copied().unwrap_or(1.0)
    }
}

fn critical_directions(g_prime: Complex64) -> [f64; 4] {
    let base = (FRAC_PI_2 - g_prime.arg()) / 2.0;
    std::array::from_fn(|m| base + m as f64 * FRAC_PI_2)
}

/// Zeros of `g = f_i − f_j`: only pairs involving `H_1` have one, at `p_k`.
pub fn critical_points(sys: &HarmonicSystem, (i, j): (usize, usize)) -> Result<Vec<CriticalPoint>> {
    if sys.mode() != Mode::ClosedForm {
        return Err(Error::Invalid("critical points need closed-form branches".into()));
    }
    let other = match (i, j) {
        (1, k) | (k, 1) if k != 1 => k,
        _ => return Ok(Vec::new()),
    };
    let Some(z) = sys.branch_point(other) else {
        return Ok(Vec::new());
    };
    let gp = sys.branch_derivative(i, z) - sys.branch_derivative(j, z);
    Ok(vec![CriticalPoint {
        z,
        pair: (i, j),
        directions: critical_directions(gp),
    }])
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

fn crosses_negative_axis(a: Complex64, b: Complex64) -> bool {
    if (a.im >= 0.0) == (b.im >= 0.0) {
        return false;
    }
    let t = a.im / (a.im - b.im);
    a.re + t * (b.re - a.re) < 0.0
}

struct March<'a> {
    level: &'a Level<'a>,
    opts: &'a TraceOptions,
    flat: f64,
}

impl March<'_> {
    /// Extends `pts` along the initial direction `dir` until a stop condition.
    fn run(
        &self,
        mut pts: Vec<Complex64>,
        mut dir: Complex64,
        origin: Option<Complex64>,
        close_to: Option<Complex64>,
    ) -> (Vec<Complex64>, End) {
        let o = self.opts;
        let step = o.step;
        let mut h = step;
        let mut left_origin = origin.is_none();
        loop {
            if pts.len() >= o.max_points {
                return (pts, End::MaxPoints);
            }
            let z = *pts.last().unwrap();
            if !left_origin && (z - origin.unwrap()).norm() > 2.0 * step {
                left_origin = true;
            }
            for cp in self.level.on_curve_critical() {
                let skip = !left_origin && origin.is_some_and(|s| (s - cp.z).norm() < 1e-12);
                if !skip && (z - cp.z).norm() < 1.5 * step {
                    pts.push(cp.z);
                    return (pts, End::Saddle(cp.z));
                }
            }
            let gr = self.level.grad(z);
            if gr.norm() < self.flat {
                return (pts, End::Saddle(z));
            }
            let mut t = Complex64::i() * gr / gr.norm();
            if (t * dir.conj()).re < 0.0 {
                t = -t;
            }
            let next = self.level.correct(z + t * h, o.tolerance);
            let accept = next.filter(|&w| {
                let d = w - z;
                let dn = d.norm();
                dn > 0.25 * h && dn < 2.0 * h && (d / dn * t.conj()).arg().abs() < 0.3
            });
            let Some(w) = accept else {
                h *= 0.5;
                if h < step / 1024.0 {
                    return (pts, End::Stalled);
                }
                continue;
            };
            if self.level.crosses_cut && crosses_negative_axis(z, w) {
                return (pts, End::Cut);
            }
            if !o.bbox.contains(w) {
                return (pts, End::BoxExit);
            }
            if w.norm() < 1e-6 || (w - 1.0).norm() < 1e-6 {
                return (pts, End::Singular);
            }
            if let Some(s) = close_to {
                if pts.len() > 3 && segment_distance(z, w, s) < 0.5 * step {
                    pts.push(s);
                    return (pts, End::Closed);
                }
            }
            dir = w - z;
            pts.push(w);
            h = (h * 1.5).min(step);
        }
    }
}

fn finish(level: &Level, points: Vec<Complex64>, closed: bool, ends: (End, End)) -> LevelCurve {
    let residuals = points.iter().map(|&z| level.value(z).abs()).collect();
    LevelCurve {
        pair: (level.i, level.j),
        points,
        residuals,
        closed,
        ends,
    }
}

/// First zero of `H̃_i − H̃_j` along `origin + t·direction`, `0 < t ≤ length`,
/// refined by bisection.
pub fn seed_on_ray(
    sys: &HarmonicSystem,
    pair: (usize, usize),
    origin: Complex64,
    direction: Complex64,
    length: f64,
) -> Option<Complex64> {
    let level = Level::new(sys, pair).ok()?;
    let dir = direction / direction.norm();
    let samples = 4096;
    let at = |t: f64| origin + dir * t;
    let mut prev: Option<(f64, f64)> = None;
    for k in 1..=samples {
        let t = length * k as f64 / samples as f64;
        let f = level.value(at(t));
        if !f.is_finite() {
            prev = None;
            continue;
        }
        if let Some((t0, f0)) = prev {
            if (f0 < 0.0) != (f < 0.0) {
                let (mut lo, mut hi) = (t0, t);
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if (level.value(at(mid)) < 0.0) == (f0 < 0.0) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                return Some(at(0.5 * (lo + hi)));
            }
        }
        prev = Some((t, f));
    }
    None
}

/// Traces the component of `H̃_i − H̃_j = 0` through `seed` in both directions.
/// A seed on a critical point is an error carrying the four outgoing rays.
pub fn trace_level_curve(
    sys: &HarmonicSystem,
    pair: (usize, usize),
    seed: Complex64,
    opts: &TraceOptions,
) -> Result<LevelCurve> {
    let level = Level::new(sys, pair)?;
    let flat = 1e-6 * level.median_gradient(&opts.bbox);
    for cp in &level.critical {
        if (seed - cp.z).norm() < 1e-8 {
            return Err(Error::CriticalSeed(Box::new(cp.clone())));
        }
    }
    let g = level.g(seed);
    if g.norm() < flat {
        let gp = sys.branch_derivative(pair.0, seed) - sys.branch_derivative(pair.1, seed);
        return Err(Error::CriticalSeed(Box::new(CriticalPoint {
            z: seed,
            pair,
            directions: critical_directions(gp),
        })));
    }
    let start = level
        .correct(seed, opts.tolerance)
        .filter(|&z| (z - seed).norm() <= 10.0 * opts.step)
        .ok_or_else(|| Error::Trace(format!("seed {seed} does not project onto the curve")))?;

    let march = March {
        level: &level,
        opts,
        flat,
    };
    let t = Complex64::i() * level.grad(start);
    let (fwd, end_f) = march.run(vec![start], t, None, Some(start));
    if end_f == End::Closed {
        return Ok(finish(&level, fwd, true, (End::Closed, End::Closed)));
    }
    let (bwd, end_b) = march.run(vec![start], -t, None, None);
    let mut points: Vec<Complex64> = bwd.into_iter().rev().collect();
    points.extend_from_slice(&fwd[1..]);
    let closed = matches!((end_b, end_f), (End::Saddle(a), End::Saddle(b)) if (a - b).norm() < 1e-9);
    Ok(finish(&level, points, closed, (end_b, end_f)))
}

/// The arms leaving a critical point, one per outgoing ray not already
/// reached by an earlier arm returning to the same point.
pub fn trace_from_saddle(
    sys: &HarmonicSystem,
    cp: &CriticalPoint,
    opts: &TraceOptions,
) -> Result<Vec<LevelCurve>> {
    let level = Level::new(sys, cp.pair)?;
    let march = March {
        level: &level,
        opts,
        flat: 1e-6 * level.median_gradient(&opts.bbox),
    };
    let mut covered = [false; 4];
    let mut arms = Vec::new();
    for m in 0..4 {
        if covered[m] {
            continue;
        }
        covered[m] = true;
        let dir = Complex64::from_polar(1.0, cp.directions[m]);
        let Some(first) = level
            .correct(cp.z + dir * opts.step, opts.tolerance)
            .filter(|&w| (w - cp.z - dir * opts.step).norm() < 0.5 * opts.step)
        else {
            continue;
        };
        let (pts, end) = march.run(vec![cp.z, first], dir, Some(cp.z), None);
        let closed = matches!(end, End::Saddle(s) if (s - cp.z).norm() < 1e-12);
        if closed && pts.len() >= 2 {
            let back = pts[pts.len() - 2] - cp.z;
            let k = (0..4)
                .min_by(|&a, &b| {
                    let da = (back * Complex64::from_polar(1.0, -cp.directions[a])).arg().abs();
                    let db = (back * Complex64::from_polar(1.0, -cp.directions[b])).arg().abs();
                    da.total_cmp(&db)
                })
                .unwrap();
            covered[k] = true;
        }
        arms.push(finish(&level, pts, closed, (End::Saddle(cp.z), end)));
    }
    Ok(arms)
}

/// Every component of every pairwise zero set inside the box: arms from
/// on-curve critical points first, then sign-change seeds on a `grid × grid`
/// lattice that are not already covered.
pub fn trace_all(sys: &HarmonicSystem, opts: &TraceOptions, grid: usize) -> Result<Vec<LevelCurve>> {
    let a = sys.branch_count();
    let mut out = Vec::new();
    for i in 1..=a {
        for j in i + 1..=a {
            let level = Level::new(sys, (i, j))?;
            let mut curves: Vec<LevelCurve> = Vec::new();
            for cp in level.on_curve_critical() {
                if opts.bbox.contains(cp.z) {
                    curves.extend(trace_from_saddle(sys, cp, opts)?);
                }
            }
            let node = |a: usize, b: usize| opts.bbox.point(a as f64 / grid as f64, b as f64 / grid as f64);
            let mut seeds = Vec::new();
            for ia in 0..=grid {
                for ib in 0..=grid {
                    let z = node(ia, ib);
                    for (ja, jb) in [(ia + 1, ib), (ia, ib + 1)] {
                        if ja > grid || jb > grid {
                            continue;
                        }
                        let w = node(ja, jb);
                        if level.crosses_cut && crosses_negative_axis(z, w) {
                            continue;
                        }
                        let (fz, fw) = (level.value(z), level.value(w));
                        if fz.is_finite() && fw.is_finite() && (fz < 0.0) != (fw < 0.0) {
                            let (mut lo, mut hi) = (z, w);
                            for _ in 0..40 {
                                let mid = 0.5 * (lo + hi);
                                if (level.value(mid) < 0.0) == (fz < 0.0) {
                                    lo = mid;
                                } else {
                                    hi = mid;
                                }
                            }
                            seeds.push(0.5 * (lo + hi));
                        }
                    }
                }
            }
            for s in seeds {
                let near = curves
                    .iter()
                    .flat_map(|c| c.points.windows(2))
                    .any(|w| segment_distance(w[0], w[1], s) < 2.0 * opts.step);
                if near || s.norm() < 1e-6 || (s - 1.0).norm() < 1e-6 {
                    continue;
                }
                match trace_level_curve(sys, (i, j), s, opts) {
                    Ok(c) => curves.push(c),
                    Err(Error::CriticalSeed(_)) | Err(Error::Trace(_)) => continue,
                    Err(e) => return Err(e),
                }
            }
            out.extend(curves);
        }
    }
    Ok(out)
}

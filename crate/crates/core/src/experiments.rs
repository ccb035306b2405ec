//! Quantitative checks of the clustering claims: distances from zeros to a
//! traced curve, convergence of the empirical Cauchy transform to the
//! rational branches, and concentration of zeros near the set `K`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyp::build_polynomial;
use crate::measure::{find_roots_adaptive, RootCountingMeasure};
use crate::mp::BigComplex;
use crate::potential::{
    seed_on_ray, trace_level_curve, HarmonicSystem, LevelCurve, RegionGrid, TraceOptions,
};
use crate::schedule::ParameterSchedule;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "value")]
pub enum Restriction {
    None,
    /// `Re z > x`.
    ReGreater(f64),
}

impl Restriction {
    pub fn admits(&self, z: Complex64) -> bool {
        match *self {
            Restriction::None => true,
            Restriction::ReGreater(x) => z.re > x,
        }
    }

    /// `Re z > η/(η+1)` for the loop of a slope `α = η + iζ`.
    pub fn loop_half_plane(alpha: Complex64) -> Self {
        Restriction::ReGreater(alpha.re / (alpha.re + 1.0))
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

/// Distance from `q` to the polyline.
pub fn polyline_distance(points: &[Complex64], q: Complex64) -> f64 {
    match points {
        [] => f64::INFINITY,
        [p] => (p - q).norm(),
        _ => points
            .windows(2)
            .map(|w| segment_distance(w[0], w[1], q))
            .fold(f64::INFINITY, f64::min),
    }
}

/// Winding number of a closed polyline around `z`.
pub fn winding_number(points: &[Complex64], z: Complex64) -> i32 {
    let mut total = 0.0;
    let n = points.len();
    for k in 0..n {
        let a = points[k] - z;
        let b = points[(k + 1) % n] - z;
        total += (b / a).arg();
    }
    (total / std::f64::consts::TAU).round() as i32
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub n: usize,
    pub restriction: Restriction,
    pub admitted: usize,
    /// Per admitted zero, in the measure's root order.
    pub distances: Vec<f64>,
    pub max: f64,
    pub mean: f64,
    /// `(q, value)` for q in 0.5, 0.9, 0.99 (nearest rank).
    pub quantiles: Vec<(f64, f64)>,
    pub curve_pair: (usize, usize),
    pub precision: u32,
    pub schedule_hash: Option<String>,
}

/// Minimum distance of each admitted zero to the polyline, with summary
/// statistics. No admitted zero is an error.
pub fn zero_curve_distance(
    m: &RootCountingMeasure,
    curve: &LevelCurve,
    restriction: Restriction,
) -> Result<DistanceReport> {
    zero_curves_distance(m, std::slice::from_ref(curve), restriction)
}

/// As [`zero_curve_distance`], measuring to the nearest of several polylines
/// (the components of one level set). `curve_pair` is taken from the first.
pub fn zero_curves_distance(
    m: &RootCountingMeasure,
    curves: &[LevelCurve],
    restriction: Restriction,
) -> Result<DistanceReport> {
    if curves.is_empty() || curves.iter().all(|c| c.points.is_empty()) {
        return Err(Error::Invalid("empty curve".into()));
    }
    let roots: Vec<Complex64> = m
        .roots_c64()
        .into_iter()
        .filter(|&z| restriction.admits(z))
        .collect();
    if roots.is_empty() {
        return Err(Error::Vacuous);
    }
    let distances: Vec<f64> = roots
        .par_iter()
        .map(|&z| {
            curves
                .iter()
                .filter(|c| !c.points.is_empty())
                .map(|c| polyline_distance(&c.points, z))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let max = distances.iter().copied().fold(0.0, f64::max);
    let mean = distances.iter().sum::<f64>() / distances.len() as f64;
    let mut sorted = distances.clone();
    sorted.sort_by(f64::total_cmp);
    let quantiles = [0.5, 0.9, 0.99]
        .iter()
        .map(|&q| {
            let idx = ((q * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len()) - 1;
            (q, sorted[idx])
        })
        .collect();
    Ok(DistanceReport {
        n: m.n(),
        restriction,
        admitted: roots.len(),
        distances,
        max,
        mean,
        quantiles,
        curve_pair: curves[0].pair,
        precision: m.precision_bits,
        schedule_hash: m.schedule_hash.clone(),
    })
}

/// The component of `H_1 = H̃_2` that winds around `z = 1`, seeded on the real
/// ray to the right of 1.
pub fn loop_around_one(sys: &HarmonicSystem, opts: &TraceOptions) -> Result<LevelCurve> {
    let one = Complex64::new(1.0, 0.0);
    let seed = seed_on_ray(sys, (1, 2), one, one, 20.0)
        .ok_or_else(|| Error::Trace("no level crossing on the ray right of 1".into()))?;
    let curve = trace_level_curve(sys, (1, 2), seed, opts)?;
    if !curve.closed || winding_number(&curve.points, one) == 0 {
        return Err(Error::Trace(format!(
            "the component through {seed} is not a loop around 1 (ends {:?})",
            curve.ends
        )));
    }
    Ok(curve)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Inside,
    Outside,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestPoint {
    pub z: Complex64,
    pub side: Side,
    /// `-alpha_2/z` or `1/(z-1)`.
    pub branch: String,
    pub target: Complex64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: u32,
    /// `|C_n(z) − f(z)|` per test point; `None` where a zero is too close.
    pub deviations: Vec<Option<f64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub points: Vec<TestPoint>,
    pub rows: Vec<ConvergenceRow>,
    pub notes: Vec<String>,
    pub schedule_hash: String,
}

impl ConvergenceReport {
    /// Deviations strictly decrease along the `n` sequence at every point
    /// where all of them are defined.
    pub fn strictly_decreasing(&self) -> bool {
        (0..self.points.len()).all(|k| {
            let col: Vec<Option<f64>> = self.rows.iter().map(|r| r.deviations[k]).collect();
            col.iter().any(Option::is_none) || col.windows(2).all(|w| w[1].unwrap() < w[0].unwrap())
        })
    }

    /// The weaker property: last below first at every admissible point.
    pub fn endpoints_decrease(&self) -> bool {
        (0..self.points.len()).all(|k| match (self.rows.first(), self.rows.last()) {
            (Some(a), Some(b)) => match (a.deviations[k], b.deviations[k]) {
                (Some(x), Some(y)) => y < x,
                _ => true,
            },
            _ => true,
        })
    }
}

/// Labels test points by winding around the loop and assigns the branch
/// `−α_2/z` inside and `1/(z − 1)` outside. Two-branch degenerate schedules only.
pub fn label_test_points(
    sys: &HarmonicSystem,
    loop_curve: &LevelCurve,
    points: &[Complex64],
) -> Result<Vec<TestPoint>> {
    if sys.branch_count() != 2 || !sys.schedule().is_degenerate() {
        return Err(Error::Invalid(
            "inside/outside branches are defined for two-branch degenerate schedules".into(),
        ));
    }
    let alpha = sys.alpha(2);
    Ok(points
        .iter()
        .map(|&z| {
            if winding_number(&loop_curve.points, z) != 0 {
                TestPoint {
                    z,
                    side: Side::Inside,
                    branch: "-alpha_2/z".into(),
                    target: -alpha / z,
                }
            } else {
                TestPoint {
                    z,
                    side: Side::Outside,
                    branch: "1/(z-1)".into(),
                    target: 1.0 / (z - 1.0),
                }
            }
        })
        .collect())
}

/// Deviation of the empirical Cauchy transform from the designated branch for
/// precomputed measures, ordered by strictly increasing `n`.
pub fn cauchy_convergence_with(
    schedule: &ParameterSchedule,
    measures: &[(u32, &RootCountingMeasure)],
    points: &[TestPoint],
) -> Result<ConvergenceReport> {
    if measures.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(Error::Invalid("n sequence must strictly increase".into()));
    }
    let mut notes = Vec::new();
    let mut rows = Vec::new();
    for &(n, m) in measures {
        let prec = m.precision_bits;
        let mut deviations = Vec::with_capacity(points.len());
        for tp in points {
            match m.cauchy_transform_at(&BigComplex::from_c64(prec, tp.z)) {
                Ok(c) => deviations.push(Some((c.to_c64() - tp.target).norm())),
                Err(Error::Pole { distance }) => {
                    notes.push(format!(
                        "n={n}: z={} excluded, zero at distance {distance:e}",
                        tp.z
                    ));
                    deviations.push(None);
                }
                Err(e) => return Err(e),
            }
        }
        rows.push(ConvergenceRow { n, deviations });
    }
    Ok(ConvergenceReport {
        points: points.to_vec(),
        rows,
        notes,
        schedule_hash: schedule.hash(),
    })
}

/// Builds and roots each polynomial, then compares transforms.
pub fn cauchy_convergence(
    schedule: &ParameterSchedule,
    n_list: &[u32],
    points: &[Complex64],
    opts: &TraceOptions,
    precision: u32,
) -> Result<ConvergenceReport> {
    let sys = HarmonicSystem::new(schedule)?;
    let loop_curve = loop_around_one(&sys, opts)?;
    let labelled = label_test_points(&sys, &loop_curve, points)?;
    let measures: Vec<(u32, RootCountingMeasure)> = n_list
        .iter()
        .map(|&n| {
            Ok((
                n,
                find_roots_adaptive(&build_polynomial(schedule, n)?, precision)?,
            ))
        })
        .collect::<Result<_>>()?;
    let refs: Vec<(u32, &RootCountingMeasure)> = measures.iter().map(|(n, m)| (*n, m)).collect();
    cauchy_convergence_with(schedule, &refs, &labelled)
}

/// Cell-lattice lookup of "within ε of a marked cell centre".
struct CellMask<'a> {
    grid: &'a RegionGrid,
    marked: Vec<bool>,
    reach: i64,
}

impl<'a> CellMask<'a> {
    fn new(grid: &'a RegionGrid, cells: impl IntoIterator<Item = usize>, eps: f64) -> Self {
        let mut marked = vec![false; grid.resolution * grid.resolution];
        for c in cells {
            marked[c] = true;
        }
        let reach = (eps / grid.dx().min(grid.dy())).ceil() as i64 + 1;
        CellMask { grid, marked, reach }
    }

    fn near(&self, z: Complex64, eps: f64) -> bool {
        let g = self.grid;
        let n = g.resolution as i64;
        let col = ((z.re - g.bbox.x0) / g.dx()).floor() as i64;
        let row = ((z.im - g.bbox.y0) / g.dy()).floor() as i64;
        for r in (row - self.reach).max(0)..=(row + self.reach).min(n - 1) {
            for c in (col - self.reach).max(0)..=(col + self.reach).min(n - 1) {
                let idx = (r * n + c) as usize;
                if self.marked[idx] && (g.center(idx) - z).norm() <= eps {
                    return true;
                }
            }
        }
        false
    }

    fn fraction(&self, points: &[Complex64], eps: f64) -> f64 {
        if points.is_empty() {
            return 0.0;
        }
        let hits = points.par_iter().filter(|&&z| self.near(z, eps)).count();
        hits as f64 / points.len() as f64
    }
}

/// Fraction of `points` within `epsilon` of a `K` cell centre.
pub fn conjecture2_score(points: &[Complex64], grid: &RegionGrid, epsilon: f64) -> f64 {
    CellMask::new(grid, grid.k_cells.iter().copied(), epsilon).fraction(points, epsilon)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NullModel {
    pub samples: usize,
    pub seed: u64,
    pub fraction: f64,
    /// Binomial standard error of `fraction`.
    pub sigma: f64,
}

/// Uniform points in the grid box scored like the zeros.
pub fn uniform_null(grid: &RegionGrid, epsilon: f64, samples: usize, seed: u64) -> NullModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = grid.bbox;
    let pts: Vec<Complex64> = (0..samples)
        .map(|_| Complex64::new(rng.gen_range(b.x0..b.x1), rng.gen_range(b.y0..b.y1)))
        .collect();
    let fraction = conjecture2_score(&pts, grid, epsilon);
    NullModel {
        samples,
        seed,
        fraction,
        sigma: (fraction * (1.0 - fraction) / samples as f64).sqrt(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Conjecture2Report {
    pub n: usize,
    pub epsilon: f64,
    pub resolution: usize,
    pub bbox: crate::potential::Rect,
    /// Zeros within ε of `K`.
    pub score: f64,
    /// Zeros within ε of `K ∩ D`.
    pub score_in_domain: f64,
    /// Zeros outside the box (they count as misses).
    pub outside_box: usize,
    pub null: NullModel,
    pub ratio: f64,
    pub schedule_hash: Option<String>,
}

/// Default ε: three cell diagonals.
pub fn default_epsilon(grid: &RegionGrid) -> f64 {
    3.0 * grid.cell_diagonal()
}

pub fn conjecture2_report(
    m: &RootCountingMeasure,
    grid: &RegionGrid,
    epsilon: f64,
    null_samples: usize,
    seed: u64,
) -> Conjecture2Report {
    let roots = m.roots_c64();
    let score = conjecture2_score(&roots, grid, epsilon);
    let in_domain = grid.k_in_domain_cells();
    let score_in_domain = CellMask::new(grid, in_domain, epsilon).fraction(&roots, epsilon);
    let null = uniform_null(grid, epsilon, null_samples, seed);
    Conjecture2Report {
        n: m.n(),
        epsilon,
        resolution: grid.resolution,
        bbox: grid.bbox,
        score,
        score_in_domain,
        outside_box: roots.iter().filter(|&&z| !grid.bbox.contains(z)).count(),
        ratio: if null.fraction > 0.0 {
            score / null.fraction
        } else {
            f64::INFINITY
        },
        null,
        schedule_hash: m.schedule_hash.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{classify_regions, Rect};
    use crate::rational::ComplexRational;
    use rug::Float;

    fn cr(s: &str) -> ComplexRational {
        s.parse().unwrap()
    }

    fn fake_measure(roots: &[Complex64]) -> RootCountingMeasure {
        RootCountingMeasure {
            roots: roots.iter().map(|&z| BigComplex::from_c64(64, z)).collect(),
            residuals: vec![Float::new(64); roots.len()],
            radii: vec![Float::new(64); roots.len()],
            precision_bits: 64,
            clusters: Vec::new(),
            schedule_hash: None,
        }
    }

    fn square() -> LevelCurve {
        let pts = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0), (0.0, 0.0)]
            .iter()
            .map(|&(x, y)| Complex64::new(x, y))
            .collect::<Vec<_>>();
        LevelCurve {
            pair: (1, 2),
            residuals: vec![0.0; pts.len()],
            points: pts,
            closed: true,
            ends: (crate::potential::End::Closed, crate::potential::End::Closed),
        }
    }

    #[test]
    fn roots_on_vertices_have_zero_distance() {
        let c = square();
        let m = fake_measure(&c.points[..4]);
        let r = zero_curve_distance(&m, &c, Restriction::None).unwrap();
        assert_eq!(r.max, 0.0);
        assert_eq!(r.admitted, 4);
    }

    #[test]
    fn distance_statistics() {
        let c = square();
        let m = fake_measure(&[
            Complex64::new(0.5, 0.5),
            Complex64::new(2.0, 0.5),
            Complex64::new(-3.0, 0.5),
        ]);
        let r = zero_curve_distance(&m, &c, Restriction::ReGreater(0.0)).unwrap();
        assert_eq!(r.admitted, 2);
        assert_eq!(r.distances, vec![0.5, 1.0]);
        assert_eq!(r.max, 1.0);
        assert!(r.max >= r.mean);
        let none = zero_curve_distance(&m, &c, Restriction::ReGreater(10.0));
        assert!(matches!(none, Err(Error::Vacuous)));
    }

    #[test]
    fn nearest_of_several_curves() {
        let a = square();
        let mut b = square();
        for p in &mut b.points {
            *p += Complex64::new(3.0, 0.0);
        }
        let m = fake_measure(&[Complex64::new(2.0, 0.5), Complex64::new(3.25, 0.5)]);
        let r = zero_curves_distance(&m, &[a, b], Restriction::None).unwrap();
        assert_eq!(r.distances, vec![1.0, 0.25]);
        assert!(zero_curves_distance(&m, &[], Restriction::None).is_err());
    }

    #[test]
    fn densification_barely_changes_distances() {
        // refine a coarse circle; distances move by at most the chord sag
        let circle = |k: usize| -> LevelCurve {
            let pts: Vec<Complex64> = (0..=k)
                .map(|j| Complex64::from_polar(1.0, std::f64::consts::TAU * j as f64 / k as f64))
                .collect();
            LevelCurve {
                pair: (1, 2),
                residuals: vec![0.0; pts.len()],
                points: pts,
                closed: true,
                ends: (crate::potential::End::Closed, crate::potential::End::Closed),
            }
        };
        let m = fake_measure(&[
            Complex64::new(1.3, 0.2),
            Complex64::new(0.1, -0.5),
            Complex64::new(-0.9, 0.9),
        ]);
        let coarse = zero_curve_distance(&m, &circle(64), Restriction::None).unwrap();
        let fine = zero_curve_distance(&m, &circle(1024), Restriction::None).unwrap();
        let sag = 1.0 - (std::f64::consts::PI / 64.0).cos();
        for (a, b) in coarse.distances.iter().zip(&fine.distances) {
            assert!((a - b).abs() <= sag + 1e-12);
        }
    }

    #[test]
    fn winding() {
        let c = square();
        assert_eq!(winding_number(&c.points, Complex64::new(0.5, 0.5)).abs(), 1);
        assert_eq!(winding_number(&c.points, Complex64::new(1.5, 0.5)), 0);
    }

    #[test]
    fn single_atom_transform() {
        // 2F1(−1, 3; 4; z) has the single zero 4/3; C(2) = 1/(2 − 4/3) = 3/2
        let s = ParameterSchedule::new(
            vec![cr("-1"), cr("0")],
            vec![cr("0"), cr("3")],
            vec![cr("0")],
            vec![cr("3")],
        )
        .unwrap();
        let m = find_roots_adaptive(&build_polynomial(&s, 1).unwrap(), 128).unwrap();
        let tp = TestPoint {
            z: Complex64::new(2.0, 0.0),
            side: Side::Outside,
            branch: "1/(z-1)".into(),
            target: Complex64::new(1.5, 0.0),
        };
        let r = cauchy_convergence_with(&s, &[(1, &m)], &[tp]).unwrap();
        assert!(r.rows[0].deviations[0].unwrap() < 1e-15);
    }

    #[test]
    fn inside_outside_labels() {
        let sys = HarmonicSystem::new(&ParameterSchedule::lemniscate_family(cr("1"))).unwrap();
        let lp = loop_around_one(&sys, &TraceOptions::default()).unwrap();
        let pts = [Complex64::new(1.1, 0.0), Complex64::new(2.0, 0.0)];
        let t = label_test_points(&sys, &lp, &pts).unwrap();
        assert_eq!(t[0].side, Side::Inside);
        assert!((t[0].target - Complex64::new(-1.0 / 1.1, 0.0)).norm() < 1e-15);
        assert_eq!(t[1].side, Side::Outside);
        assert_eq!(t[1].target, Complex64::new(1.0, 0.0));
    }

    #[test]
    fn all_roots_on_k_scores_one() {
        let sys = HarmonicSystem::new(&ParameterSchedule::lemniscate_family(cr("1"))).unwrap();
        let grid = classify_regions(&sys, Rect::new(-1.0, 2.0, -1.5, 1.5), 60).unwrap();
        let k = grid.k_points();
        assert_eq!(conjecture2_score(&k, &grid, default_epsilon(&grid)), 1.0);
    }

    #[test]
    fn null_model_matches_area_fraction() {
        let sys = HarmonicSystem::new(&ParameterSchedule::lemniscate_family(cr("1"))).unwrap();
        let grid = classify_regions(&sys, Rect::new(-1.0, 2.0, -1.5, 1.5), 80).unwrap();
        let eps = default_epsilon(&grid);
        let null = uniform_null(&grid, eps, 20_000, 11);
        // area of the ε-neighbourhood on a fine lattice
        let fine = 600;
        let lattice: Vec<Complex64> = (0..fine * fine)
            .map(|i| {
                grid.bbox.point(
                    ((i % fine) as f64 + 0.5) / fine as f64,
                    ((i / fine) as f64 + 0.5) / fine as f64,
                )
            })
            .collect();
        let area = conjecture2_score(&lattice, &grid, eps);
        assert!(
            (null.fraction - area).abs() < 3.0 * null.sigma + 1e-3,
            "{} vs {area}",
            null.fraction
        );
        assert_eq!(null, uniform_null(&grid, eps, 20_000, 11));
    }
}

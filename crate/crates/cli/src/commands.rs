use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use hypzero::curve::{branch_points, build_curve, discriminant, verify_prop3};
use hypzero::experiments::{
    cauchy_convergence_with, conjecture2_report, default_epsilon, label_test_points, winding_number,
    zero_curves_distance,
};
use hypzero::hyp::export_coefficients;
use hypzero::potential::{
    classify_regions, trace_all, trace_from_saddle, trace_level_curve, HarmonicSystem, LevelCurve,
    RegionGrid, TraceOptions,
};
use hypzero::{build_polynomial, find_roots_adaptive, Error, ParameterSchedule, RootCountingMeasure};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::{Effective, Experiment};
use crate::error::CliError;
use crate::svg;

type Result<T> = std::result::Result<T, CliError>;

/// Records inputs and outputs of one command; written as `manifest_<cmd>.json`.
pub struct Run {
    command: &'static str,
    pub eff: Effective,
    inputs: BTreeMap<String, String>,
    outputs: BTreeMap<String, String>,
}

fn sha(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Run {
    pub fn new(command: &'static str, eff: Effective) -> Result<Self> {
        fs::create_dir_all(&eff.out).map_err(|e| CliError::io(e, &eff.out))?;
        Ok(Run {
            command,
            eff,
            inputs: BTreeMap::new(),
            outputs: BTreeMap::new(),
        })
    }

    pub fn read(&mut self, path: &Path) -> Result<String> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(e, path))?;
        self.inputs
            .insert(path.display().to_string(), sha(text.as_bytes()));
        Ok(text)
    }

    /// `name` is relative to the output directory.
    pub fn write(&mut self, name: &str, text: &str) -> Result<()> {
        self.write_at(&self.eff.out.join(name), text)
    }

    pub fn write_at(&mut self, path: &Path, text: &str) -> Result<()> {
        if let Some(dir) = path.parent() {
            fs::create_dir_all(dir).map_err(|e| CliError::io(e, dir))?;
        }
        fs::write(path, text).map_err(|e| CliError::io(e, path))?;
        let key = path
            .strip_prefix(&self.eff.out)
            .unwrap_or(path)
            .display()
            .to_string();
        log::info!("wrote {}", path.display());
        self.outputs.insert(key, sha(text.as_bytes()));
        Ok(())
    }

    fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
        text.push('\n');
        self.write(name, &text)
    }

    pub fn finish(self) -> Result<()> {
        let manifest = json!({
            "command": self.command,
            "version": env!("CARGO_PKG_VERSION"),
            "params": self.eff,
            "inputs": self.inputs,
            "outputs": self.outputs,
        });
        let path = self.eff.out.join(format!("manifest_{}.json", self.command));
        let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        text.push('\n');
        fs::write(&path, text).map_err(|e| CliError::io(e, &path))
    }

    fn schedule(&mut self) -> Result<ParameterSchedule> {
        let path = self.eff.schedule.clone().ok_or_else(|| {
            CliError::Config("no schedule given (--schedule or `schedule` in the config)".into())
        })?;
        let text = self.read(&path)?;
        Ok(ParameterSchedule::from_toml(&text)?)
    }

    fn trace_options(&self) -> TraceOptions {
        TraceOptions {
            step: self.eff.step,
            bbox: self.eff.bbox,
            ..TraceOptions::default()
        }
    }

    fn out_path(&self, name: &str) -> PathBuf {
        self.eff.out.join(name)
    }
}

pub fn poly(mut run: Run) -> Result<()> {
    let schedule = run.schedule()?;
    for n in run.eff.n.clone() {
        let p = build_polynomial(&schedule, n)?;
        let text = format!("# n={n}\n# schedule_hash={}\n{}", schedule.hash(), p.export());
        run.write(&format!("poly_n{n}.txt"), &text)?;
    }
    run.finish()
}

pub fn roots(mut run: Run) -> Result<()> {
    let schedule = run.schedule()?;
    for n in run.eff.n.clone() {
        let p = build_polynomial(&schedule, n)?;
        let m = find_roots_adaptive(&p, run.eff.precision)?;
        log::info!("n={n}: {} roots at {} bits", m.n(), m.precision_bits);
        run.write(&format!("roots_n{n}.txt"), &m.export())?;
    }
    run.finish()
}

pub fn curve(mut run: Run) -> Result<()> {
    let schedule = run.schedule()?;
    let curve = build_curve(&schedule)?;
    run.write("curve.txt", &curve.export())?;

    let bp = branch_points(&curve, &schedule, run.eff.precision)?;
    run.write("branch_points.txt", &bp.export())?;

    let disc = discriminant(&curve)?;
    let text = format!(
        "# zero_multiplicity={}\n# one_multiplicity={}\n# squarefree_degree={}\n{}",
        disc.zero_multiplicity,
        disc.one_multiplicity,
        disc.squarefree.coeffs().len().saturating_sub(1),
        export_coefficients(disc.resultant.coeffs())
    );
    run.write("discriminant.txt", &text)?;

    let text = match verify_prop3(&schedule) {
        Ok(report) => {
            let mut s = format!("# all_vanish={}\n", report.all_vanish());
            for (label, r) in &report.residuals {
                let status = if r.is_zero() {
                    "0".to_string()
                } else {
                    format!("nonzero degree {}", r.coeffs().len() - 1)
                };
                s.push_str(&format!("{label} {status}\n"));
            }
            s
        }
        Err(e @ Error::NotDegenerate { .. }) => format!("# not applicable: {e}\n"),
        Err(e) => return Err(e.into()),
    };
    run.write("rational_branches.txt", &text)?;
    run.finish()
}

pub fn levels(mut run: Run) -> Result<()> {
    let schedule = run.schedule()?;
    let sys = HarmonicSystem::new(&schedule)?;
    let opts = run.trace_options();
    let curves = if run.eff.seeds.is_empty() {
        trace_all(&sys, &opts, run.eff.grid)?
    } else {
        let mut curves = Vec::new();
        for &[re, im] in &run.eff.seeds {
            match trace_level_curve(&sys, run.eff.pair, Complex64::new(re, im), &opts) {
                Ok(c) => curves.push(c),
                Err(Error::CriticalSeed(cp)) => {
                    log::info!("seed {re},{im} is a saddle; tracing its outgoing branches");
                    curves.extend(trace_from_saddle(&sys, &cp, &opts)?);
                }
                Err(e) => return Err(e.into()),
            }
        }
        curves
    };

    let dir = run.out_path("levels");
    if dir.is_dir() {
        for entry in fs::read_dir(&dir).map_err(|e| CliError::io(e, &dir))? {
            let path = entry.map_err(|e| CliError::io(e, &dir))?.path();
            if path.extension().is_some_and(|x| x == "csv") {
                fs::remove_file(&path).map_err(|e| CliError::io(e, &path))?;
            }
        }
    }
    for (k, c) in curves.iter().enumerate() {
        log::info!(
            "curve {k}: pair {:?}, {} points, closed={}, max residual {:.1e}",
            c.pair,
            c.points.len(),
            c.closed,
            c.max_residual()
        );
        run.write(&format!("levels/curve_{k:03}.csv"), &c.export())?;
    }
    run.finish()
}

pub fn regions(mut run: Run) -> Result<()> {
    let schedule = run.schedule()?;
    let sys = HarmonicSystem::new(&schedule)?;
    let grid = classify_regions(&sys, run.eff.bbox, run.eff.resolution)?;
    run.write("regions.txt", &grid.export_raster())?;
    run.write("k_cells.txt", &grid.export_k())?;
    run.finish()
}

fn level_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| CliError::io(e, dir))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .collect();
    files.sort();
    Ok(files)
}

fn read_levels(run: &mut Run) -> Result<Vec<LevelCurve>> {
    let dir = run.out_path("levels");
    let mut curves = Vec::new();
    for path in level_files(&dir)? {
        let text = run.read(&path)?;
        curves.push(LevelCurve::parse(&text)?);
    }
    Ok(curves)
}

fn read_measures(run: &mut Run) -> Result<Vec<(u32, RootCountingMeasure)>> {
    let mut out = Vec::new();
    for n in run.eff.n.clone() {
        let path = run.out_path(&format!("roots_n{n}.txt"));
        let text = run.read(&path)?;
        out.push((n, RootCountingMeasure::parse(&text)?));
    }
    Ok(out)
}

fn vacuous_or(result: hypzero::Result<Value>) -> Result<Value> {
    match result {
        Ok(v) => Ok(v),
        Err(Error::Vacuous) => Ok(json!({ "vacuous": true })),
        Err(e) => Err(e.into()),
    }
}

pub fn verify(mut run: Run) -> Result<()> {
    let schedule = run.schedule()?;
    let sys = HarmonicSystem::new(&schedule)?;
    let measures = read_measures(&mut run)?;
    let wants = |e: Experiment| run.eff.experiments.contains(&e);
    let (distance, convergence, conj2) = (
        wants(Experiment::Distance),
        wants(Experiment::Convergence),
        wants(Experiment::Conjecture2),
    );

    let curves = if distance || convergence {
        read_levels(&mut run)?
    } else {
        Vec::new()
    };
    let pair = run.eff.pair;
    let pair_curves: Vec<LevelCurve> = curves.iter().filter(|c| c.pair == pair).cloned().collect();

    if distance {
        if pair_curves.is_empty() {
            return Err(CliError::Config(format!(
                "no level curves for pair {pair:?} in the levels directory"
            )));
        }
        let alpha2 = (sys.branch_count() == 2).then(|| sys.alpha(2));
        let restriction = run.eff.restriction.resolve(alpha2);
        let mut restricted = Vec::new();
        let mut unrestricted = Vec::new();
        for (_, m) in &measures {
            restricted.push(vacuous_or(
                zero_curves_distance(m, &pair_curves, restriction).map(|r| json!(r)),
            )?);
            unrestricted.push(vacuous_or(
                zero_curves_distance(m, &pair_curves, hypzero::experiments::Restriction::None)
                    .map(|r| json!(r)),
            )?);
        }
        run.write_json(
            "report_distance.json",
            &json!({
                "schedule_hash": schedule.hash(),
                "curves": pair_curves.len(),
                "restricted": restricted,
                "unrestricted": unrestricted,
            }),
        )?;
    }

    if convergence {
        let report = if sys.branch_count() == 2 && schedule.is_degenerate() {
            let one = Complex64::new(1.0, 0.0);
            let lp = curves
                .iter()
                .find(|c| c.pair == (1, 2) && winding_number(&c.points, one) != 0)
                .ok_or_else(|| CliError::Config("no traced (1,2) level curve winds around z = 1".into()))?;
            let points: Vec<Complex64> = run
                .eff
                .test_points
                .iter()
                .map(|&[x, y]| Complex64::new(x, y))
                .collect();
            let labelled = label_test_points(&sys, lp, &points)?;
            let refs: Vec<(u32, &RootCountingMeasure)> = measures.iter().map(|(n, m)| (*n, m)).collect();
            let r = cauchy_convergence_with(&schedule, &refs, &labelled)?;
            json!({
                "strictly_decreasing": r.strictly_decreasing(),
                "endpoints_decrease": r.endpoints_decrease(),
                "report": r,
            })
        } else {
            json!({ "not_applicable": "designated branches are defined for two-branch degenerate schedules" })
        };
        run.write_json("report_convergence.json", &report)?;
    }

    if conj2 {
        let path = run.out_path("regions.txt");
        let text = run.read(&path)?;
        let grid = RegionGrid::parse_raster(&text)?;
        let eps = run.eff.epsilon.unwrap_or_else(|| default_epsilon(&grid));
        let reports: Vec<_> = measures
            .iter()
            .map(|(_, m)| conjecture2_report(m, &grid, eps, run.eff.null_samples, run.eff.rng_seed))
            .collect();
        run.write_json("report_conjecture2.json", &reports)?;
    }
    run.finish()
}

/// Inputs for `plot`; each defaults to the standard file in the output directory.
#[derive(Debug, Default, clap::Args)]
pub struct PlotFiles {
    /// Root file to scatter.
    #[arg(long)]
    pub roots_file: Option<PathBuf>,
    /// Level-curve CSV; repeatable. Default: every file in `<out>/levels`.
    #[arg(long)]
    pub curve_file: Vec<PathBuf>,
    /// Region raster drawn as background.
    #[arg(long)]
    pub regions_file: Option<PathBuf>,
    /// Branch-point file.
    #[arg(long)]
    pub branch_points_file: Option<PathBuf>,
    /// SVG path. Default `<out>/figure_n<n>.svg` for the largest n.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Leading `re im` pairs of the non-comment lines.
fn read_points(text: &str) -> Result<Vec<Complex64>> {
    let mut out = Vec::new();
    for line in text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
    {
        let mut f = line.split_whitespace().map(str::parse::<f64>);
        match (f.next(), f.next()) {
            (Some(Ok(re)), Some(Ok(im))) => out.push(Complex64::new(re, im)),
            _ => return Err(Error::Parse(format!("expected `re im`, got {line:?}")).into()),
        }
    }
    Ok(out)
}

pub fn plot(mut run: Run, files: PlotFiles) -> Result<()> {
    let n = run.eff.n.last().copied();
    let explicit = files.roots_file.is_some();
    let roots_path = files
        .roots_file
        .or_else(|| n.map(|n| run.out_path(&format!("roots_n{n}.txt"))));
    let roots = match roots_path {
        Some(p) if explicit || p.exists() => read_points(&run.read(&p)?)?,
        _ => Vec::new(),
    };

    let curve_paths = if !files.curve_file.is_empty() {
        files.curve_file
    } else {
        let dir = run.out_path("levels");
        if dir.is_dir() {
            level_files(&dir)?
        } else {
            Vec::new()
        }
    };
    let mut curves = Vec::new();
    for p in &curve_paths {
        let text = run.read(p)?;
        curves.push(LevelCurve::parse(&text)?);
    }

    let grid = match files.regions_file {
        Some(p) => Some(RegionGrid::parse_raster(&run.read(&p)?)?),
        None => {
            let p = run.out_path("regions.txt");
            if p.exists() {
                Some(RegionGrid::parse_raster(&run.read(&p)?)?)
            } else {
                None
            }
        }
    };

    let bp = match files.branch_points_file {
        Some(p) => read_points(&run.read(&p)?)?,
        None => {
            let p = run.out_path("branch_points.txt");
            if p.exists() {
                read_points(&run.read(&p)?)?
            } else {
                Vec::new()
            }
        }
    };

    if roots.is_empty() && curves.is_empty() && grid.is_none() {
        log::warn!("nothing to draw besides the singular points");
    }
    let figure = svg::Figure {
        bbox: run.eff.bbox,
        grid: grid.as_ref(),
        curves: &curves,
        roots: &roots,
        branch_points: &bp,
    };
    let text = figure.render();
    let output = files
        .output
        .unwrap_or_else(|| run.out_path(&format!("figure_n{}.svg", n.unwrap_or(0))));
    run.write_at(&output, &text)?;
    run.finish()
}

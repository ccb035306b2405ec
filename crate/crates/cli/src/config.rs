//! Run configuration: a TOML file merged with command-line flags.
//!
//! Precedence, highest first: flag, config file, built-in default. Relative
//! paths in a config file resolve against the file's directory.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use hypzero::experiments::Restriction;
use hypzero::potential::Rect;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    Distance,
    Convergence,
    Conjecture2,
}

/// Values accepted both in the config file and as flags.
#[derive(Clone, Debug, Default, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    /// Schedule TOML file.
    #[arg(long, global = true)]
    pub schedule: Option<PathBuf>,

    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Working precision in bits for polynomial zeros.
    #[arg(long, global = true)]
    pub precision: Option<u32>,

    /// Degrees, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    pub n: Option<Vec<u32>>,

    /// Plot and grid box as x0,x1,y0,y1.
    #[arg(
        long = "box",
        global = true,
        value_delimiter = ',',
        allow_hyphen_values = true
    )]
    #[serde(rename = "box")]
    pub bbox: Option<Vec<f64>>,

    /// Region grid cells per side.
    #[arg(long, global = true)]
    pub resolution: Option<usize>,

    /// Level-curve step length.
    #[arg(long, global = true)]
    pub step: Option<f64>,

    /// Level-curve seed `re,im`; repeatable. Without seeds every component in
    /// the box is traced.
    #[arg(long = "seed-point", global = true, allow_hyphen_values = true, value_parser = parse_point)]
    pub seeds: Option<Vec<[f64; 2]>>,

    /// Level pair `i,j` for seeded traces.
    #[arg(long, global = true, value_delimiter = ',')]
    pub pair: Option<Vec<usize>>,

    /// Seed lattice size for tracing every component.
    #[arg(long, global = true)]
    pub grid: Option<usize>,

    /// Neighbourhood radius for the K score; default three cell diagonals.
    #[arg(long, global = true)]
    pub epsilon: Option<f64>,

    /// Uniform samples for the null model.
    #[arg(long, global = true)]
    pub null_samples: Option<usize>,

    /// Seed of the null-model generator.
    #[arg(long, global = true)]
    pub rng_seed: Option<u64>,

    /// Cauchy-transform test point `re,im`; repeatable.
    #[arg(long = "test-point", global = true, allow_hyphen_values = true, value_parser = parse_point)]
    pub test_points: Option<Vec<[f64; 2]>>,

    /// Experiments run by `verify`.
    #[arg(long, global = true, value_delimiter = ',')]
    pub experiments: Option<Vec<Experiment>>,

    /// Zero restriction for distances: `loop`, `none` or a number `x` for Re z > x.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub restriction: Option<String>,
}

fn parse_point(s: &str) -> Result<[f64; 2], String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected re,im, got {s:?}"))?;
    let p = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    Ok([p(a)?, p(b)?])
}

impl Settings {
    /// `self` wins where set.
    fn over(self, base: Settings) -> Settings {
        Settings {
            schedule: self.schedule.or(base.schedule),
            out: self.out.or(base.out),
            precision: self.precision.or(base.precision),
            n: self.n.or(base.n),
            bbox: self.bbox.or(base.bbox),
            resolution: self.resolution.or(base.resolution),
            step: self.step.or(base.step),
            seeds: self.seeds.filter(|v| !v.is_empty()).or(base.seeds),
            pair: self.pair.or(base.pair),
            grid: self.grid.or(base.grid),
            epsilon: self.epsilon.or(base.epsilon),
            null_samples: self.null_samples.or(base.null_samples),
            rng_seed: self.rng_seed.or(base.rng_seed),
            test_points: self.test_points.filter(|v| !v.is_empty()).or(base.test_points),
            experiments: self.experiments.or(base.experiments),
            restriction: self.restriction.or(base.restriction),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RestrictionChoice {
    /// `Re z > η/(η+1)` for the slope of a two-branch schedule.
    Loop,
    None,
    ReGreater(f64),
}

impl RestrictionChoice {
    fn parse(s: &str) -> Result<Self, CliError> {
        match s {
            "loop" => Ok(RestrictionChoice::Loop),
            "none" => Ok(RestrictionChoice::None),
            _ => s
                .parse::<f64>()
                .map(RestrictionChoice::ReGreater)
                .map_err(|_| CliError::Config(format!("restriction {s:?} is not loop, none or a number"))),
        }
    }

    pub fn resolve(&self, alpha2: Option<Complex64>) -> Restriction {
        match (*self, alpha2) {
            (RestrictionChoice::Loop, Some(a)) => Restriction::loop_half_plane(a),
            (RestrictionChoice::ReGreater(x), _) => Restriction::ReGreater(x),
            _ => Restriction::None,
        }
    }
}

/// Fully resolved parameters; serialized into every manifest.
#[derive(Clone, Debug, Serialize)]
pub struct Effective {
    pub schedule: Option<PathBuf>,
    pub out: PathBuf,
    pub precision: u32,
    pub n: Vec<u32>,
    #[serde(rename = "box")]
    pub bbox: Rect,
    pub resolution: usize,
    pub step: f64,
    pub seeds: Vec<[f64; 2]>,
    pub pair: (usize, usize),
    pub grid: usize,
    pub epsilon: Option<f64>,
    pub null_samples: usize,
    pub rng_seed: u64,
    pub test_points: Vec<[f64; 2]>,
    pub experiments: Vec<Experiment>,
    pub restriction: RestrictionChoice,
}

pub const DEFAULT_N: [u32; 4] = [10, 25, 50, 100];

fn resolve_path(p: PathBuf, base: &Path) -> PathBuf {
    if p.is_absolute() {
        p
    } else {
        base.join(p)
    }
}

pub fn load(config: Option<&Path>, flags: Settings) -> Result<Effective, CliError> {
    let file = match config {
        None => Settings::default(),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(e, path))?;
            let mut s: Settings =
                toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            let base = path.parent().unwrap_or(Path::new("."));
            s.schedule = s.schedule.map(|p| resolve_path(p, base));
            s.out = s.out.map(|p| resolve_path(p, base));
            s
        }
    };
    let s = flags.over(file);

    let bbox = match s.bbox.as_deref() {
        None => Rect::new(-1.0, 2.0, -1.5, 1.5),
        Some(&[x0, x1, y0, y1]) => Rect::new(x0, x1, y0, y1),
        Some(v) => return Err(CliError::Config(format!("box needs 4 numbers, got {}", v.len()))),
    };
    bbox.validate()?;
    let pair = match s.pair.as_deref() {
        None => (1, 2),
        Some(&[i, j]) => (i, j),
        Some(_) => return Err(CliError::Config("pair needs two indices".into())),
    };
    let mut n = s.n.unwrap_or_else(|| DEFAULT_N.to_vec());
    n.sort_unstable();
    n.dedup();
    let mut experiments = s.experiments.unwrap_or_else(|| {
        vec![
            Experiment::Distance,
            Experiment::Convergence,
            Experiment::Conjecture2,
        ]
    });
    experiments.sort();
    experiments.dedup();
    let step = s.step.unwrap_or(0.005);
    if !(step > 0.0 && step.is_finite()) {
        return Err(CliError::Config(format!("step must be positive, got {step}")));
    }
    Ok(Effective {
        schedule: s.schedule,
        out: s.out.unwrap_or_else(|| PathBuf::from("out")),
        precision: s.precision.unwrap_or(hypzero::measure::DEFAULT_PRECISION),
        n,
        bbox,
        resolution: s.resolution.unwrap_or(400),
        step,
        seeds: s.seeds.unwrap_or_default(),
        pair,
        grid: s.grid.unwrap_or(40),
        epsilon: s.epsilon,
        null_samples: s.null_samples.unwrap_or(20_000),
        rng_seed: s.rng_seed.unwrap_or(11),
        test_points: s.test_points.unwrap_or_else(|| vec![[2.0, 0.0], [1.1, 0.0]]),
        experiments,
        restriction: RestrictionChoice::parse(s.restriction.as_deref().unwrap_or("loop"))?,
    })
}

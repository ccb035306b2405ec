//! `Ψ = max(H_1, H̃_2, …, H̃_A)` pointwise and on a grid, and the discrete set
//! `K` of cells where the maximizing index changes.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{check_regular, HarmonicSystem};
use crate::error::{Error, Result};

/// Differences below this count as ties in `Ψ`.
pub const TIE_TOLERANCE: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub const fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Rect { x0, x1, y0, y1 }
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    /// The point at fractional position `(u, v)` in the box.
    pub fn point(&self, u: f64, v: f64) -> Complex64 {
        Complex64::new(self.x0 + u * self.width(), self.y0 + v * self.height())
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= self.x0 && z.re <= self.x1 && z.im >= self.y0 && z.im <= self.y1
    }

    pub fn validate(&self) -> Result<()> {
        let ok = [self.x0, self.x1, self.y0, self.y1].iter().all(|v| v.is_finite())
            && self.x1 > self.x0
            && self.y1 > self.y0;
        if ok {
            Ok(())
        } else {
            Err(Error::Invalid(format!("empty or non-finite box {self:?}")))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PsiValue {
    pub value: f64,
    /// 1-based index of the maximizing branch; the smallest on ties.
    pub argmax: usize,
    pub tie: bool,
}

fn max_of(values: &[f64]) -> PsiValue {
    let mut best = 0;
    for (k, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = k;
        }
    }
    let top = values[best];
    let mut first = best;
    for (k, v) in values.iter().enumerate() {
        if top - v < TIE_TOLERANCE {
            first = k;
            break;
        }
    }
    let tie = values
        .iter()
        .enumerate()
        .any(|(k, v)| k != best && top - v < TIE_TOLERANCE);
    PsiValue {
        value: top,
        argmax: first + 1,
        tie,
    }
}

/// `Ψ(z)` with its maximizing index.
pub fn psi_value(sys: &HarmonicSystem, z: Complex64) -> Result<PsiValue> {
    sys.require_closed_form()?;
    check_regular(z)?;
    Ok(max_of(&sys.tilde_values_unchecked(z)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct RegionGrid {
    pub bbox: Rect,
    pub resolution: usize,
    pub branch_count: usize,
    /// Row-major from the bottom row; 0 marks a cell centred on 0 or 1.
    pub labels: Vec<u8>,
    /// Indices of `K` cells, ascending.
    pub k_cells: Vec<usize>,
    /// Whether label changes across the negative real axis were ignored.
    pub cut: bool,
}

fn label_char(l: u8) -> char {
    match l {
        0 => '.',
        1..=9 => (b'0' + l) as char,
        _ => (b'a' + l - 10) as char,
    }
}

fn char_label(c: char) -> Option<u8> {
    match c {
        '.' => Some(0),
        '1'..='9' => Some(c as u8 - b'0'),
        'a'..='z' => Some(c as u8 - b'a' + 10),
        _ => None,
    }
}

impl RegionGrid {
    pub fn dx(&self) -> f64 {
        self.bbox.width() / self.resolution as f64
    }

    pub fn dy(&self) -> f64 {
        self.bbox.height() / self.resolution as f64
    }

    pub fn cell_diagonal(&self) -> f64 {
        self.dx().hypot(self.dy())
    }

    pub fn center(&self, index: usize) -> Complex64 {
        let (row, col) = (index / self.resolution, index % self.resolution);
        let n = self.resolution as f64;
        self.bbox.point((col as f64 + 0.5) / n, (row as f64 + 0.5) / n)
    }

    /// Distinct nonzero labels, ascending.
    pub fn label_set(&self) -> Vec<u8> {
        let mut seen = [false; 256];
        for &l in &self.labels {
            seen[l as usize] = true;
        }
        (1..=255u8).filter(|&l| seen[l as usize]).collect()
    }

    pub fn k_points(&self) -> Vec<Complex64> {
        self.k_cells.iter().map(|&i| self.center(i)).collect()
    }

    /// The approximate domain `D`: cells not maximized by `H_1`, plus `K`.
    pub fn domain_mask(&self) -> Vec<bool> {
        let mut d: Vec<bool> = self.labels.iter().map(|&l| l > 1).collect();
        for &k in &self.k_cells {
            d[k] = true;
        }
        d
    }

    /// `K ∩ D`: cells of `K` that are non-`H_1` or border a non-`H_1` cell.
    pub fn k_in_domain_cells(&self) -> Vec<usize> {
        let n = self.resolution;
        self.k_cells
            .iter()
            .copied()
            .filter(|&i| {
                let (r, c) = (i / n, i % n);
                self.labels[i] > 1 || neighbours(r, c, n).any(|(rr, cc)| self.labels[rr * n + cc] > 1)
            })
            .collect()
    }

    pub fn k_in_domain_points(&self) -> Vec<Complex64> {
        self.k_in_domain_cells()
            .into_iter()
            .map(|i| self.center(i))
            .collect()
    }

    /// A JSON header line followed by one text row per grid row, top row first.
    pub fn export_raster(&self) -> String {
        let legend: serde_json::Map<String, serde_json::Value> = (1..=self.branch_count as u8)
            .map(|l| {
                let name = if l == 1 {
                    "H_1".to_string()
                } else {
                    format!("H~_{l}")
                };
                (label_char(l).to_string(), serde_json::Value::String(name))
            })
            .chain(std::iter::once((".".to_string(), "singular".into())))
            .collect();
        let header = serde_json::json!({
            "box": [self.bbox.x0, self.bbox.x1, self.bbox.y0, self.bbox.y1],
            "resolution": self.resolution,
            "branches": self.branch_count,
            "cut": self.cut,
            "legend": legend,
        });
        let n = self.resolution;
        let mut out = header.to_string();
        out.push('\n');
        for row in (0..n).rev() {
            out.extend(self.labels[row * n..(row + 1) * n].iter().map(|&l| label_char(l)));
            out.push('\n');
        }
        out
    }

    pub fn parse_raster(text: &str) -> Result<Self> {
        let bad = |m: String| Error::Parse(format!("region raster: {m}"));
        let mut lines = text.lines();
        let header: serde_json::Value =
            serde_json::from_str(lines.next().unwrap_or("")).map_err(|e| bad(e.to_string()))?;
        let b: Vec<f64> = serde_json::from_value(header["box"].clone()).map_err(|e| bad(e.to_string()))?;
        if b.len() != 4 {
            return Err(bad("box needs four numbers".into()));
        }
        let n = header["resolution"]
            .as_u64()
            .ok_or_else(|| bad("resolution".into()))? as usize;
        let branch_count = header["branches"]
            .as_u64()
            .ok_or_else(|| bad("branches".into()))? as usize;
        let cut = header["cut"].as_bool().unwrap_or(false);
        let rows: Vec<&str> = lines.filter(|l| !l.is_empty()).collect();
        if rows.len() != n {
            return Err(bad(format!("{} rows, expected {n}", rows.len())));
        }
        let mut labels = vec![0u8; n * n];
        for (k, line) in rows.iter().enumerate() {
            let row = n - 1 - k;
            let chars: Vec<char> = line.chars().collect();
            if chars.len() != n {
                return Err(bad(format!("row {k} has {} cells", chars.len())));
            }
            for (col, ch) in chars.into_iter().enumerate() {
                labels[row * n + col] = char_label(ch).ok_or_else(|| bad(format!("label {ch:?}")))?;
            }
        }
        let bbox = Rect::new(b[0], b[1], b[2], b[3]);
        let k_cells = boundary_cells(&labels, n, &bbox, cut);
        Ok(RegionGrid {
            bbox,
            resolution: n,
            branch_count,
            labels,
            k_cells,
            cut,
        })
    }

    /// `re im` of each `K` cell centre.
    pub fn export_k(&self) -> String {
        let mut out = format!("# cells={}\n", self.k_cells.len());
        for z in self.k_points() {
            out.push_str(&format!("{:.17e} {:.17e}\n", z.re, z.im));
        }
        out
    }
}

fn neighbours(r: usize, c: usize, n: usize) -> impl Iterator<Item = (usize, usize)> {
    let up = (r + 1 < n).then(|| (r + 1, c));
    let down = (r > 0).then(|| (r - 1, c));
    let right = (c + 1 < n).then(|| (r, c + 1));
    let left = (c > 0).then(|| (r, c - 1));
    [up, down, right, left].into_iter().flatten()
}

fn boundary_cells(labels: &[u8], n: usize, bbox: &Rect, cut: bool) -> Vec<usize> {
    let dy = bbox.height() / n as f64;
    let dx = bbox.width() / n as f64;
    let y = |r: usize| bbox.y0 + (r as f64 + 0.5) * dy;
    let x = |c: usize| bbox.x0 + (c as f64 + 0.5) * dx;
    (0..n * n)
        .filter(|&i| {
            let (r, c) = (i / n, i % n);
            let l = labels[i];
            l != 0
                && neighbours(r, c, n).any(|(rr, cc)| {
                    let m = labels[rr * n + cc];
                    if m == 0 || m == l {
                        return false;
                    }
                    let across_cut = cut && cc == c && x(c) < 0.0 && (y(r) < 0.0) != (y(rr) < 0.0);
                    !across_cut
                })
        })
        .collect()
}

/// Labels every cell of a `resolution × resolution` grid by the index
/// maximizing `Ψ` at its centre and extracts `K`.
pub fn classify_regions(sys: &HarmonicSystem, bbox: Rect, resolution: usize) -> Result<RegionGrid> {
    sys.require_closed_form()?;
    bbox.validate()?;
    if resolution == 0 {
        return Err(Error::Invalid("resolution must be positive".into()));
    }
    let n = resolution;
    let labels: Vec<u8> = (0..n * n)
        .into_par_iter()
        .map(|i| {
            let (row, col) = (i / n, i % n);
            let z = bbox.point((col as f64 + 0.5) / n as f64, (row as f64 + 0.5) / n as f64);
            match psi_value(sys, z) {
                Ok(p) => p.argmax as u8,
                Err(_) => 0,
            }
        })
        .collect();
    let cut = sys.any_cut();
    let k_cells = boundary_cells(&labels, n, &bbox, cut);
    Ok(RegionGrid {
        bbox,
        resolution: n,
        branch_count: sys.branch_count(),
        labels,
        k_cells,
        cut,
    })
}

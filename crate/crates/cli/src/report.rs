//! Deterministic JSON output: values rounded to 12 significant digits,
//! keys in declaration order.

use std::path::Path;

use serde::Serialize;
use slidearea::solver::{CriticalPolygon, DegeneracyFlag};
use slidearea::Vec2;

use crate::CliError;

/// `x` rounded to 12 significant digits; `-0` becomes `0`.
pub fn r(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    let y: f64 = format!("{x:.11e}").parse().unwrap_or(x);
    if y == 0.0 {
        0.0
    } else {
        y
    }
}

pub fn rv(xs: &[f64]) -> Vec<f64> {
    xs.iter().copied().map(r).collect()
}

pub fn rp(p: Vec2) -> [f64; 2] {
    [r(p.x), r(p.y)]
}

pub fn flag_name(f: &DegeneracyFlag) -> String {
    match f {
        DegeneracyFlag::CoincidingNeighbors { vertex } => format!("coinciding-neighbors:{vertex}"),
        DegeneracyFlag::ZeroEigenvalues { count } => format!("zero-eigenvalues:{count}"),
    }
}

#[derive(Serialize)]
pub struct PointReport {
    pub t: Vec<f64>,
    pub area: f64,
    pub grad_norm: f64,
    pub index: usize,
    pub nullity: usize,
    pub flags: Vec<String>,
}

impl From<&CriticalPolygon> for PointReport {
    fn from(c: &CriticalPolygon) -> Self {
        Self {
            t: rv(&c.config.params()),
            area: r(c.area),
            grad_norm: r(c.grad_norm),
            index: c.morse.index,
            nullity: c.morse.nullity,
            flags: c.flags.iter().map(flag_name).collect(),
        }
    }
}

/// Counts per Morse index, keyed by index.
pub fn histogram(found: &[CriticalPolygon]) -> std::collections::BTreeMap<usize, usize> {
    let mut h = std::collections::BTreeMap::new();
    for c in found {
        *h.entry(c.morse.index).or_insert(0) += 1;
    }
    h
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Input(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

//! Scenario files: curves, vertex assignment and solver settings.

use std::path::Path;

use serde::Deserialize;
use slidearea::{Curve, CurveId, Gauge, Orientation, Problem, SolverSettings, Vec2};

use crate::CliError;

#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum CurveDesc {
    Line {
        base: [f64; 2],
        direction: [f64; 2],
    },
    Circle {
        center: [f64; 2],
        radius: f64,
        #[serde(default = "ccw")]
        orientation: i8,
    },
    Ellipse {
        center: [f64; 2],
        semi_axes: [f64; 2],
        #[serde(default)]
        rotation: f64,
        #[serde(default = "ccw")]
        orientation: i8,
    },
    Point {
        at: [f64; 2],
    },
    Polyline {
        vertices: Vec<[f64; 2]>,
        #[serde(default)]
        closed: bool,
    },
}

fn ccw() -> i8 {
    1
}

fn vec2(p: [f64; 2]) -> Vec2 {
    Vec2::new(p[0], p[1])
}

fn orientation(o: i8) -> Result<Orientation, CliError> {
    match o {
        1 => Ok(Orientation::Ccw),
        -1 => Ok(Orientation::Cw),
        _ => Err(CliError::Input(format!("orientation must be 1 or -1, got {o}"))),
    }
}

impl CurveDesc {
    pub fn build(&self) -> Result<Curve, CliError> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(v)
            } else {
                Err(CliError::Input(format!("{name} must be positive, got {v}")))
            }
        };
        Ok(match self {
            CurveDesc::Line { base, direction } => {
                let d = vec2(*direction);
                if d.norm() == 0.0 {
                    return Err(CliError::Input("line direction must be nonzero".into()));
                }
                Curve::line(vec2(*base), d)
            }
            CurveDesc::Circle { center, radius, orientation: o } => {
                Curve::Circle { center: vec2(*center), radius: positive("radius", *radius)?, orientation: orientation(*o)? }
            }
            CurveDesc::Ellipse { center, semi_axes, rotation, orientation: o } => Curve::Ellipse {
                center: vec2(*center),
                semi_axes: (positive("semi-axis", semi_axes[0])?, positive("semi-axis", semi_axes[1])?),
                rotation: *rotation,
                orientation: orientation(*o)?,
            },
            CurveDesc::Point { at } => Curve::point(vec2(*at)),
            CurveDesc::Polyline { vertices, closed } => Curve::polyline(vertices.iter().copied().map(vec2).collect(), *closed)?,
        })
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SettingsDesc {
    pub starts: Option<usize>,
    pub newton_tol: Option<f64>,
    pub max_iters: Option<usize>,
    pub dedup_tol: Option<f64>,
    pub gauge: Option<GaugeDesc>,
    pub seed: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum GaugeDesc {
    None,
    FixFirst,
}

impl From<GaugeDesc> for Gauge {
    fn from(g: GaugeDesc) -> Self {
        match g {
            GaugeDesc::None => Gauge::None,
            GaugeDesc::FixFirst => Gauge::FixFirstParameter,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub curves: Vec<CurveDesc>,
    /// Curve index of each vertex; defaults to one vertex per curve.
    pub vertices: Option<Vec<usize>>,
    #[serde(default)]
    pub settings: SettingsDesc,
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }

    pub fn curves(&self) -> Result<Vec<Curve>, CliError> {
        if self.curves.is_empty() {
            return Err(CliError::Input("scenario has no curves".into()));
        }
        self.curves.iter().map(CurveDesc::build).collect()
    }

    pub fn problem(&self) -> Result<Problem, CliError> {
        let curves = self.curves()?;
        let assignment = match &self.vertices {
            Some(v) => v.iter().map(|&k| CurveId(k)).collect(),
            None => (0..curves.len()).map(CurveId).collect(),
        };
        Ok(Problem::new(curves, assignment)?)
    }

    /// The first curve, used as a billiard table.
    pub fn table(&self) -> Result<Curve, CliError> {
        Ok(self.curves()?.swap_remove(0))
    }

    pub fn solver_settings(&self) -> Result<SolverSettings, CliError> {
        let d = SolverSettings::default();
        let s = &self.settings;
        let out = SolverSettings {
            starts: s.starts.unwrap_or(d.starts),
            newton_tol: s.newton_tol.unwrap_or(d.newton_tol),
            max_iters: s.max_iters.unwrap_or(d.max_iters),
            dedup_tol: s.dedup_tol.unwrap_or(d.dedup_tol),
            gauge: s.gauge.map(Gauge::from).unwrap_or(d.gauge),
            ..d
        };
        out.validate()?;
        Ok(out)
    }
}


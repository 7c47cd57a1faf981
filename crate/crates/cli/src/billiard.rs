//! `billiard` and `closed-orbits`.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use slidearea::billiards::{self, BilliardOrbit, BilliardState, MapKind, OrbitSearch};
use slidearea::render::{render_svg, Color, Scene};
use slidearea::solver;
use slidearea::{special, Configuration, Curve, Vec2};

use crate::report::{r, rp, rv, to_json, write_file};
use crate::scenario::Scenario;
use crate::{CliError, MapArg, Outcome, SideArg};

/// Parameter distance under which an iterate counts as a near return worth refining.
const COARSE_CLOSURE: f64 = 1e-3;

#[derive(Serialize)]
struct OrbitReport {
    map: &'static str,
    points: Vec<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    exterior: Vec<[f64; 2]>,
    closed: bool,
    period: Option<usize>,
    winding: Option<i64>,
    closure_residual: f64,
    refined: bool,
}

fn map_name(m: MapKind) -> &'static str {
    match m {
        MapKind::InnerArea => "inner-area",
        MapKind::Perimeter => "perimeter",
        MapKind::OuterArea => "outer-area",
    }
}

fn orbit_report(o: &BilliardOrbit, refined: bool) -> OrbitReport {
    OrbitReport {
        map: map_name(o.map),
        points: rv(&o.points),
        exterior: o.exterior.iter().map(|p| rp(*p)).collect(),
        closed: o.closed,
        period: o.period,
        winding: o.winding,
        closure_residual: r(o.closure_residual),
        refined,
    }
}

/// First return within [`COARSE_CLOSURE`]; the caller refines it.
fn near_return(curve: &Curve, o: &BilliardOrbit) -> Option<usize> {
    if o.map == MapKind::OuterArea {
        let p0 = o.exterior[0];
        let scale = p0.norm().max(1.0);
        return (1..o.exterior.len()).find(|&k| o.exterior[k].distance(p0) / scale < COARSE_CLOSURE);
    }
    (1..o.points.len() - 1).find(|&k| {
        curve.param_distance(o.points[k], o.points[0]) < COARSE_CLOSURE
            && curve.param_distance(o.points[k + 1], o.points[1]) < COARSE_CLOSURE
    })
}

fn csv(curve: &Curve, o: &BilliardOrbit) -> Result<String, CliError> {
    let mut s = String::from("step,t,x,y\n");
    for (k, &t) in o.points.iter().enumerate() {
        let p = if o.map == MapKind::OuterArea { o.exterior[k] } else { curve.eval(t)? };
        let _ = writeln!(s, "{k},{},{},{}", r(t), r(p.x), r(p.y));
    }
    Ok(s)
}

pub fn run(
    path: &Path,
    map: MapArg,
    start: &[f64],
    steps: usize,
    side: SideArg,
    csv_out: Option<&Path>,
    svg_out: Option<&Path>,
) -> Result<Outcome, CliError> {
    let curve = Scenario::load(path)?.table()?;
    if start.len() != 2 || start.iter().any(|v| !v.is_finite()) {
        return Err(CliError::Input("--start takes two finite numbers".into()));
    }
    if steps == 0 {
        return Err(CliError::Input("--steps must be positive".into()));
    }
    let kind = MapKind::from(map);
    let orbit = if kind == MapKind::OuterArea {
        billiards::iterate_outer(&curve, Vec2::new(start[0], start[1]), side.into(), steps)?
    } else {
        billiards::iterate(&curve, kind, BilliardState::new(start[0], start[1]), steps)?
    };
    let (orbit, refined) = match (orbit.closed, near_return(&curve, &orbit)) {
        (false, Some(n)) => {
            let refined = if kind == MapKind::OuterArea {
                billiards::refine_closed_outer(&curve, orbit.exterior[0], side.into(), n)
            } else {
                billiards::refine_closed_orbit(&curve, kind, BilliardState::new(orbit.points[0], orbit.points[1]), n)
            };
            match refined {
                Ok(o) if o.closed => (o, true),
                _ => (orbit, false),
            }
        }
        _ => (orbit, false),
    };
    if let Some(p) = csv_out {
        write_file(p, &csv(&curve, &orbit)?)?;
    }
    if let Some(p) = svg_out {
        let mut scene = Scene::new();
        scene.add_curve(&curve, Color::Gray)?;
        scene.add_orbit(&curve, &orbit, Color::Blue)?;
        write_file(p, &render_svg(&scene)?)?;
    }
    Ok(Outcome::ok(to_json(&orbit_report(&orbit, refined))?))
}

#[derive(Serialize)]
struct ClosedReport {
    map: &'static str,
    period: usize,
    winding: i64,
    orbits: Vec<ClosedOrbitReport>,
}

#[derive(Serialize)]
struct ClosedOrbitReport {
    points: Vec<f64>,
    closure_residual: f64,
    /// The vertex polygon (inner-area) or tangency polygon (outer-area) is critical.
    critical: Option<bool>,
}

/// Tolerance for the criticality of polygons read off closed orbits.
const ORBIT_CRITICAL_TOL: f64 = 1e-7;

fn orbit_critical(curve: &Curve, o: &BilliardOrbit, n: usize) -> Result<Option<bool>, CliError> {
    let curves = std::slice::from_ref(curve);
    let t = &o.points[..n];
    let config = Configuration::on_curve(0, t)?;
    Ok(match o.map {
        MapKind::InnerArea => Some(solver::check_critical_smooth(curves, &config, ORBIT_CRITICAL_TOL)?.is_critical()),
        MapKind::OuterArea => Some(special::midpoint_check(curves, &config, ORBIT_CRITICAL_TOL)?.is_critical()),
        MapKind::Perimeter => None,
    })
}

pub fn closed_orbits(path: &Path, map: MapArg, period: usize, winding: i64, grid: usize, side: SideArg) -> Result<Outcome, CliError> {
    let curve = Scenario::load(path)?.table()?;
    if period < 3 {
        return Err(CliError::Input("--period must be at least 3".into()));
    }
    if grid == 0 {
        return Err(CliError::Input("--grid must be positive".into()));
    }
    let kind = MapKind::from(map);
    let found = billiards::find_closed_orbits(&curve, OrbitSearch { map: kind, period, winding, grid, side: side.into() })?;
    let mut orbits = Vec::new();
    for o in &found {
        orbits.push(ClosedOrbitReport {
            points: rv(&o.points[..period]),
            closure_residual: r(o.closure_residual),
            critical: orbit_critical(&curve, o, period)?,
        });
    }
    let pass = orbits.iter().all(|o| o.critical != Some(false));
    let report = ClosedReport { map: map_name(kind), period, winding, orbits };
    Ok(Outcome::checked(to_json(&report)?, pass, "a closed orbit does not give a critical polygon"))
}

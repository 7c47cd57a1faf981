//! `find-critical`, `check` and `deform`.

use std::collections::BTreeMap;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use slidearea::render::{index_color, render_svg, Color, Scene};
use slidearea::solver::{self, Branch, CriticalPolygon, Problem};
use slidearea::{area, deform, Vec2};

use crate::report::{histogram, r, rv, to_json, write_file, PointReport};
use crate::scenario::{GaugeDesc, Scenario};
use crate::{CliError, DeformArgs, DeformOp, Outcome};

#[derive(Serialize)]
struct FindMeta {
    curves: usize,
    vertices: usize,
    starts: usize,
    gauge: &'static str,
    count: usize,
    index_histogram: BTreeMap<usize, usize>,
}

#[derive(Serialize)]
struct FindReport {
    critical_points: Vec<PointReport>,
    meta: FindMeta,
}

fn critical_scene(problem: &Problem, found: &[CriticalPolygon]) -> Result<Scene, CliError> {
    let mut scene = Scene::new();
    for c in &problem.curves {
        scene.add_curve(c, Color::Gray)?;
    }
    for c in found {
        scene.add_polygon(&problem.curves, &c.config, index_color(&c.morse))?;
    }
    Ok(scene)
}

pub fn find_critical(
    path: &Path,
    gauge: Option<GaugeDesc>,
    starts: Option<usize>,
    json: Option<&Path>,
    svg: Option<&Path>,
) -> Result<Outcome, CliError> {
    let scenario = Scenario::load(path)?;
    let problem = scenario.problem()?;
    let mut settings = scenario.solver_settings()?;
    if let Some(g) = gauge {
        settings.gauge = g.into();
    }
    if let Some(s) = starts {
        settings.starts = s;
    }
    settings.validate()?;
    let found = solver::find_critical(&problem, &settings)?;
    let report = FindReport {
        critical_points: found.iter().map(PointReport::from).collect(),
        meta: FindMeta {
            curves: problem.curves.len(),
            vertices: problem.n(),
            starts: settings.starts,
            gauge: match settings.gauge {
                slidearea::Gauge::None => "none",
                slidearea::Gauge::FixFirstParameter => "fix-first",
            },
            count: found.len(),
            index_histogram: histogram(&found),
        },
    };
    let text = to_json(&report)?;
    if let Some(p) = json {
        write_file(p, &text)?;
    }
    if let Some(p) = svg {
        write_file(p, &render_svg(&critical_scene(&problem, &found)?)?)?;
    }
    Ok(Outcome::ok(text))
}

#[derive(Serialize)]
struct VertexReport {
    branch: &'static str,
    residual: f64,
}

#[derive(Serialize)]
struct CheckReport {
    critical: bool,
    smooth: bool,
    area: f64,
    vertices: Vec<VertexReport>,
    gradient: Option<Vec<f64>>,
    index: Option<usize>,
    nullity: Option<usize>,
}

fn branch_name(b: Branch) -> &'static str {
    match b {
        Branch::Coincident => "coincident",
        Branch::Parallel => "parallel",
        Branch::InCone => "in-cone",
        Branch::Fixed => "fixed",
        Branch::Neither => "neither",
    }
}

fn parse_config(problem: &Problem, t: &[f64]) -> Result<(), CliError> {
    if t.len() != problem.n() {
        return Err(CliError::Input(format!("--config has {} values, scenario has {} vertices", t.len(), problem.n())));
    }
    if t.iter().any(|v| !v.is_finite()) {
        return Err(CliError::Input("--config values must be finite".into()));
    }
    Ok(())
}

pub fn check(path: &Path, t: &[f64], tol: f64) -> Result<Outcome, CliError> {
    let problem = Scenario::load(path)?.problem()?;
    parse_config(&problem, t)?;
    let config = problem.configuration(t);
    let at_breakpoint = (0..problem.n()).any(|i| problem.curve_of(i).is_breakpoint(t[i]));
    let verdict = if at_breakpoint {
        solver::check_critical_piecewise(&problem.curves, &config, tol)?
    } else {
        solver::check_critical_smooth(&problem.curves, &config, tol)?
    };
    let (gradient, morse) = if at_breakpoint {
        (None, None)
    } else {
        let g = area::gradient(&problem.curves, &config)?;
        let free = problem.free_vertices();
        let c = solver::classify_critical(&problem, t, &free)?;
        (Some(rv(&g)), Some(c.morse))
    };
    let report = CheckReport {
        critical: verdict.is_critical(),
        smooth: !at_breakpoint,
        area: r(area::signed_area(&problem.curves, &config)?),
        vertices: verdict
            .vertices
            .iter()
            .map(|v| VertexReport { branch: branch_name(v.branch), residual: r(v.residual) })
            .collect(),
        gradient,
        index: morse.as_ref().map(|m| m.index),
        nullity: morse.as_ref().map(|m| m.nullity),
    };
    Ok(Outcome::ok(to_json(&report)?))
}

#[derive(Serialize)]
struct DeformReport {
    op: &'static str,
    before: Vec<PointReport>,
    after: Vec<PointReport>,
    expected_indices: Vec<usize>,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    shifts: Option<Vec<f64>>,
}

/// Tolerance for the gradient of a deformed polygon that should stay critical.
const KEEP_CRITICAL_TOL: f64 = 1e-8;

fn starting_polygon(problem: &Problem, scenario: &Scenario, config: Option<&[f64]>) -> Result<CriticalPolygon, CliError> {
    let free = problem.free_vertices();
    match config {
        Some(t) => {
            parse_config(problem, t)?;
            let c = solver::classify_critical(problem, t, &free)?;
            if c.grad_norm > KEEP_CRITICAL_TOL {
                return Err(CliError::Input(format!("--config is not critical (|grad| = {:e})", c.grad_norm)));
            }
            Ok(c)
        }
        None => solver::find_critical(problem, &scenario.solver_settings()?)?
            .into_iter()
            .find(|c| c.is_morse())
            .ok_or_else(|| CliError::Input("no Morse critical polygon found".into())),
    }
}

pub fn deform(args: &DeformArgs) -> Result<Outcome, CliError> {
    let scenario = Scenario::load(&args.scenario)?;
    let problem = scenario.problem()?;
    if args.at >= problem.n() {
        return Err(CliError::Input(format!("--at {} out of range for {} vertices", args.at, problem.n())));
    }
    if args.op == DeformOp::Morsify {
        return morsify(args, &scenario, &problem);
    }
    let start = starting_polygon(&problem, &scenario, args.config.as_deref())?;
    let params = start.config.params();
    let mu = start.index();
    let (op, after, expected) = match args.op {
        DeformOp::Zigzag => {
            let cfg = deform::add_zigzag(&start.config, args.at)?;
            let assignment = cfg.vertices.iter().map(|v| v.curve).collect();
            let grown = Problem::new(problem.curves.clone(), assignment)?;
            let c = solver::classify_critical(&grown, &cfg.params(), &grown.free_vertices())?;
            ("zigzag", vec![c], Vec::new())
        }
        DeformOp::GrowTangent => {
            let radius = args.radius.ok_or_else(|| CliError::Input("--radius is required for grow-tangent".into()))?;
            if !problem.curve_of(args.at).is_point() {
                return Err(CliError::Input(format!("vertex {} is not on a point curve", args.at)));
            }
            let g = deform::grow_tangent_circle(&problem, &params, &[args.at], &[radius])?;
            let c = solver::classify_critical(&g.problem, &g.params, &g.problem.free_vertices())?;
            ("grow-tangent", vec![c], vec![mu + deform::tangent_birth_shift(radius)])
        }
        DeformOp::GrowCentered => {
            let pts = start.config.points(&problem.curves)?;
            let radius = args.radius.unwrap_or_else(|| deform::default_small_radius(&pts));
            let two = deform::grow_centered_circle(&problem, &params, args.at, radius)?;
            ("grow-centered", two, vec![mu, mu + 1])
        }
        DeformOp::Morsify => unreachable!(),
    };
    let pass = match args.op {
        DeformOp::Zigzag => after.iter().all(|c| c.grad_norm <= KEEP_CRITICAL_TOL),
        _ => {
            after.iter().all(|c| c.grad_norm <= KEEP_CRITICAL_TOL && c.is_morse())
                && after.iter().map(|c| c.index()).collect::<Vec<_>>() == expected
        }
    };
    let report = DeformReport {
        op,
        before: vec![PointReport::from(&start)],
        after: after.iter().map(PointReport::from).collect(),
        expected_indices: expected,
        pass,
        shifts: None,
    };
    finish(args, &report, op)
}

fn finish(args: &DeformArgs, report: &DeformReport, op: &str) -> Result<Outcome, CliError> {
    let text = to_json(report)?;
    if let Some(p) = &args.json {
        write_file(p, &text)?;
    }
    Ok(Outcome::checked(text, report.pass, &format!("{op} did not produce the expected critical polygons")))
}

/// Translate the curves at random and report the critical polygons before and after.
fn morsify(args: &DeformArgs, scenario: &Scenario, problem: &Problem) -> Result<Outcome, CliError> {
    let m = problem.curves.len();
    let dirs: Vec<Vec2> = (0..m).map(|k| Vec2::polar(std::f64::consts::PI * k as f64 / m as f64)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed.or(scenario.settings.seed).unwrap_or(0));
    let rep = deform::morsify_by_translation(problem, &dirs, args.rho, &mut rng, &scenario.solver_settings()?)?;
    let pass = !rep.after.is_empty() && rep.after.iter().all(|c| c.is_morse());
    let report = DeformReport {
        op: "morsify",
        before: rep.before.iter().map(PointReport::from).collect(),
        after: rep.after.iter().map(PointReport::from).collect(),
        expected_indices: Vec::new(),
        pass,
        shifts: Some(rv(&rep.shifts)),
    };
    finish(args, &report, "morsify")
}

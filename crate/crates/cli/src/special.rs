//! Built-in verifications of the closed-form special cases.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use slidearea::linalg::sym_eigen;
use slidearea::solver::{find_critical, CriticalPolygon};
use slidearea::special::{self, StarKind};
use slidearea::{area, morse, Configuration, Curve, Gauge, Problem, SolverSettings, Vec2};

use crate::report::{histogram, r, rv, to_json, PointReport};
use crate::{CliError, Outcome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Case {
    ThreeLines,
    ThreeCircles,
    FourCircles,
    #[value(name = "concentric-3")]
    Concentric3,
    #[value(name = "concentric-4")]
    Concentric4,
    CircleStar,
    Midpoint,
}

/// Relative tolerance for the closed-form identities.
const IDENTITY_TOL: f64 = 1e-8;
/// Frames sampled per identity.
const FRAMES: usize = 50;

pub fn run(case: Case, seed: u64) -> Result<Outcome, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match case {
        Case::ThreeLines => three_lines(),
        Case::ThreeCircles => three_circles(&mut rng),
        Case::FourCircles => four_circles(&mut rng),
        Case::Concentric3 => concentric(&[1.0, 2.0, 3.0]),
        Case::Concentric4 => concentric(&[1.0, 2.0, 3.0, 4.0]),
        Case::CircleStar => circle_star(),
        Case::Midpoint => midpoint(),
    }
}

#[derive(Serialize)]
struct ThreeLinesReport {
    critical_count: usize,
    index: usize,
    sylvester_index: usize,
    area_b: f64,
    critical_points: Vec<[f64; 2]>,
}

fn three_lines() -> Result<Outcome, CliError> {
    let b = [Vec2::new(-1.0, -0.5), Vec2::new(2.5, 0.1), Vec2::new(0.4, 2.2)];
    let lines: Vec<Curve> = (0..3)
        .map(|i| {
            let (p, q) = (b[(i + 2) % 3], b[i]);
            Curve::line(p, q - p)
        })
        .collect();
    let found = find_critical(&Problem::one_per_vertex(lines.clone())?, &SolverSettings::default())?;
    let nf = special::three_lines_normal_form(&lines)?;
    let index = found.first().map_or(usize::MAX, |c| c.index());
    let sylvester_index = found.first().map_or(usize::MAX, |c| morse::sylvester_index(&c.reduced_hessian).index);
    let report = ThreeLinesReport {
        critical_count: found.len(),
        index,
        sylvester_index,
        area_b: r(nf.area_b),
        critical_points: nf.critical_points.iter().map(|p| [r(p.x), r(p.y)]).collect(),
    };
    let pass = found.len() == 1 && index == 2 && sylvester_index == 2;
    Ok(Outcome::checked(to_json(&report)?, pass, "three lines: expected one critical point of index 2"))
}

fn random_triangle(rng: &mut ChaCha8Rng) -> [Vec2; 3] {
    loop {
        let t = [0; 3].map(|_| Vec2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)));
        if area::polygon_signed_area(&t).abs() > 0.5 {
            return t;
        }
    }
}

fn random_radius(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(0.2..3.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 }
}

#[derive(Serialize)]
struct ThreeCirclesReport {
    frames: usize,
    det_error: f64,
    equal_m_eigen_error: f64,
    bifurcation_det: f64,
}

fn three_circles(rng: &mut ChaCha8Rng) -> Result<Outcome, CliError> {
    let (mut w3, mut weq, mut wbif) = (0.0f64, 0.0f64, 0.0f64);
    let det_scale = |m: [f64; 3], s: f64| {
        (m[0] * m[1] * m[2]).abs() + (m[0].abs() + m[1].abs() + m[2].abs()) * s * s + 2.0 * s.abs().powi(3)
    };
    for _ in 0..FRAMES {
        let tri = random_triangle(rng);
        let f = special::three_circles_frame(tri, [0; 3].map(|_| random_radius(rng)))?;
        let h = area::hessian(&f.curves, &f.configuration())?.to_dense();
        w3 = w3.max((h.det() - special::three_circle_det(f.m, f.s)).abs() / det_scale(f.m, f.s));

        let diag = Configuration::small_diagonals(&tri);
        let meq = rng.gen_range(0.2..5.0) * f.s.abs() * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let f = special::three_circles_frame(tri, [0, 1, 2].map(|i| diag[i].norm().powi(3) / meq))?;
        let got = sym_eigen(&area::hessian(&f.curves, &f.configuration())?.to_dense()).values;
        let want = special::equal_m_eigenvalues(meq, f.s);
        for (a, b) in got.iter().zip(want) {
            weq = weq.max((a - b).abs() / (meq.abs() + 2.0 * f.s.abs()));
        }

        let m1 = f.s.abs() * rng.gen_range(1.5..4.0);
        let m2 = f.s.abs() * rng.gen_range(1.5..4.0);
        let m3 = special::bifurcation_m3(m1, m2, f.s)?;
        let m = [m1, m2, m3];
        let f = special::three_circles_frame(tri, [0, 1, 2].map(|i| diag[i].norm().powi(3) / m[i]))?;
        let h = area::hessian(&f.curves, &f.configuration())?.to_dense();
        wbif = wbif.max(h.det().abs() / det_scale(m, f.s));
    }
    let report = ThreeCirclesReport { frames: FRAMES, det_error: r(w3), equal_m_eigen_error: r(weq), bifurcation_det: r(wbif) };
    let pass = w3 <= IDENTITY_TOL && weq <= IDENTITY_TOL && wbif <= IDENTITY_TOL;
    Ok(Outcome::checked(to_json(&report)?, pass, "three-circle determinant identities"))
}

#[derive(Serialize)]
struct FourCirclesReport {
    frames: usize,
    det_error: f64,
}

fn four_circles(rng: &mut ChaCha8Rng) -> Result<Outcome, CliError> {
    let mut w4 = 0.0f64;
    for _ in 0..FRAMES {
        let quad = loop {
            let q: Vec<Vec2> =
                (0..4).map(|k| Vec2::polar(TAU * k as f64 / 4.0 + rng.gen_range(-0.5..0.5)) * rng.gen_range(0.7..2.0)).collect();
            if (q[2] - q[0]).normalized().cross((q[3] - q[1]).normalized()).abs() > 0.2 {
                break [q[0], q[1], q[2], q[3]];
            }
        };
        let f = special::four_circles_frame(quad, [0; 4].map(|_| random_radius(rng)))?;
        let h = area::hessian(&f.curves, &f.configuration())?.to_dense();
        let (m, s) = (f.m, f.s);
        let scale = (m[0] * m[1] * m[2] * m[3]).abs()
            + ((m[0] * m[1]).abs() + (m[1] * m[2]).abs() + (m[2] * m[3]).abs() + (m[3] * m[0]).abs()) * s * s;
        w4 = w4.max((h.det() - special::four_circle_det(m, s)).abs() / scale);
    }
    let report = FourCirclesReport { frames: FRAMES, det_error: r(w4) };
    Ok(Outcome::checked(to_json(&report)?, w4 <= IDENTITY_TOL, "four-circle determinant identity"))
}

#[derive(Serialize)]
struct ConcentricReport {
    radii: Vec<f64>,
    critical_count: usize,
    index_histogram: BTreeMap<usize, usize>,
    criterion_residual: f64,
    geometry_residual: f64,
    critical_points: Vec<PointReport>,
}

fn concentric(radii: &[f64]) -> Result<Outcome, CliError> {
    let curves: Vec<Curve> = radii.iter().map(|&r| Curve::circle(Vec2::ZERO, r)).collect();
    let p = Problem::one_per_vertex(curves.clone())?;
    let found: Vec<CriticalPolygon> = find_critical(&p, &SolverSettings { gauge: Gauge::FixFirstParameter, ..Default::default() })?;
    let (mut crit, mut geom) = (0.0f64, 0.0f64);
    for c in &found {
        let v = special::concentric_criterion(&curves, &c.config)?;
        crit = crit.max(v.equal_products_residual);
        if let Some(o) = v.orthocenter_residual {
            geom = geom.max(o);
        }
        if let Some((a, b)) = v.diagonal_residual {
            geom = geom.max(a).max(b);
        }
    }
    let hist = histogram(&found);
    // perfect Morse function on the torus of dimension n - 1: binomial counts
    let n = radii.len();
    let want: BTreeMap<usize, usize> = (0..n).map(|k| (k, binomial(n - 1, k))).collect();
    let pass = hist == want && crit < 1e-8 && geom < 1e-8;
    let report = ConcentricReport {
        radii: rv(radii),
        critical_count: found.len(),
        index_histogram: hist,
        criterion_residual: r(crit),
        geometry_residual: r(geom),
        critical_points: found.iter().map(PointReport::from).collect(),
    };
    Ok(Outcome::checked(to_json(&report)?, pass, "concentric circles: unexpected critical set"))
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Serialize)]
struct StarReport {
    polygons: usize,
    regular: usize,
    zigzag: usize,
    max_grad_norm: f64,
    all_equal_angle_critical: bool,
}

fn circle_star() -> Result<Outcome, CliError> {
    let curves = vec![Curve::unit_circle()];
    let (mut total, mut regular, mut zigzag, mut worst, mut all) = (0, 0, 0, 0.0f64, true);
    for n in 3..=9 {
        for k in 1..n {
            if gcd(n, k) != 1 {
                continue;
            }
            let cfg = Configuration::on_curve(0, &special::star_params(n, k, 0.3))?;
            let v = special::circle_star_check(&curves, &cfg, 1e-10)?;
            let g = area::gradient(&curves, &cfg)?;
            worst = worst.max(g.iter().fold(0.0f64, |m, x| m.max(x.abs())));
            all &= v.critical && matches!(v.kind, StarKind::Regular { .. });
            total += 1;
            regular += 1;
        }
        // alternating zigzag: vertices at ±θ
        let t: Vec<f64> = (0..2 * n).map(|j| if j % 2 == 0 { 0.3 } else { 0.3 + TAU / n as f64 }).collect();
        let cfg = Configuration::on_curve(0, &t)?;
        let v = special::circle_star_check(&curves, &cfg, 1e-10)?;
        let g = area::gradient(&curves, &cfg)?;
        worst = worst.max(g.iter().fold(0.0f64, |m, x| m.max(x.abs())));
        all &= v.critical && v.kind == StarKind::Zigzag;
        total += 1;
        zigzag += 1;
    }
    let pass = all && worst < 1e-12;
    let report = StarReport { polygons: total, regular, zigzag, max_grad_norm: r(worst), all_equal_angle_critical: all };
    Ok(Outcome::checked(to_json(&report)?, pass, "equal-angle polygons on a circle"))
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Serialize)]
struct MidpointReport {
    polygons: usize,
    max_midpoint_residual: f64,
    max_tangential_gradient: f64,
    tangential_areas: Vec<f64>,
}

fn midpoint() -> Result<Outcome, CliError> {
    let e = Curve::ellipse(Vec2::new(0.3, -0.2), 2.0, 1.0, 0.4);
    let curves = std::slice::from_ref(&e);
    let p = special::single_curve_problem(e.clone(), 3)?;
    let polys = special::find_midpoint_polygons(&p, 64, 1e-12);
    let (mut res, mut grad) = (0.0f64, 0.0f64);
    let mut areas = Vec::new();
    let h = 1e-5;
    for t in &polys {
        let cfg = Configuration::on_curve(0, t)?;
        let v = special::midpoint_check(curves, &cfg, 1e-8)?;
        res = res.max(v.midpoint_residuals.iter().fold(0.0f64, |m, x| m.max(*x)));
        for i in 0..3 {
            let (mut up, mut dn) = (t.clone(), t.clone());
            up[i] += h;
            dn[i] -= h;
            let d = (area::tangential_area(curves, &cfg.with_params(&up))? - area::tangential_area(curves, &cfg.with_params(&dn))?)
                / (2.0 * h);
            grad = grad.max(d.abs());
        }
        areas.push(r(area::tangential_area(curves, &cfg)?));
    }
    let pass = !polys.is_empty() && res < 1e-8 && grad < 1e-6;
    let report = MidpointReport { polygons: polys.len(), max_midpoint_residual: r(res), max_tangential_gradient: r(grad), tangential_areas: areas };
    Ok(Outcome::checked(to_json(&report)?, pass, "midpoint tangential polygons are not critical"))
}

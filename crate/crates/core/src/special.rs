//! Closed-form families: three lines, circles tangent to diagonal-parallel
//! lines (three and four of them), concentric circles, circle stars and the
//! midpoint criterion for tangential polygons.

use std::f64::consts::{PI, TAU};

use crate::area::{self, Configuration, CurveId};
use crate::curves::{Curve, Orientation};
use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::morse::{self, MorseData};
use crate::solver::{fd_jacobian, kronecker_lattice, newton_system, NewtonOptions, Problem};
use crate::vec2::{line_intersection, wrap_pi, Vec2};

/// Three lines brought to the form `Cᵢ(t) = t·Bᵢ₋₁ + (1 − t)·Bᵢ`, where
/// `Bᵢ = Lᵢ ∩ Lᵢ₊₁`. In these parameters, with `τ = t − ½`,
/// `A = (τ₁τ₂ + τ₂τ₃ + τ₃τ₁ + ¼)·A(B)`.
#[derive(Clone, Debug)]
pub struct ThreeLinesNormalForm {
    pub b: [Vec2; 3],
    /// Twice the signed area of `B₁B₂B₃`.
    pub area_b: f64,
    /// The lines in normal-form parametrization.
    pub curves: Vec<Curve>,
    /// Critical parameters in the input parametrization of each line.
    pub critical_params: [f64; 3],
    /// Midpoints of the sides of `B`.
    pub critical_points: [Vec2; 3],
    pub eigen: MorseData,
    pub sylvester: MorseData,
}

impl ThreeLinesNormalForm {
    /// Area through the normal form.
    pub fn area(&self, t: [f64; 3]) -> f64 {
        let u = t.map(|v| v - 0.5);
        (u[0] * u[1] + u[1] * u[2] + u[2] * u[0] + 0.25) * self.area_b
    }

    /// Normal-form parameter of a point of line `i`.
    pub fn normal_param(&self, i: usize, p: Vec2) -> f64 {
        let (bi, bp) = (self.b[i], self.b[(i + 2) % 3]);
        let d = bp - bi;
        (p - bi).dot(d) / d.norm_sq()
    }
}

pub fn three_lines_normal_form(lines: &[Curve]) -> Result<ThreeLinesNormalForm> {
    if lines.len() != 3 {
        return Err(Error::InvalidInput(format!("three lines expected, got {}", lines.len())));
    }
    let mut base = [Vec2::ZERO; 3];
    let mut dir = [Vec2::ZERO; 3];
    for (i, c) in lines.iter().enumerate() {
        match c {
            Curve::Line { base: b, dir: d } if d.norm() > 0.0 => {
                base[i] = *b;
                dir[i] = *d;
            }
            _ => return Err(Error::InvalidInput(format!("curve {i} is not a line"))),
        }
    }
    let mut b = [Vec2::ZERO; 3];
    for i in 0..3 {
        let j = (i + 1) % 3;
        if dir[i].normalized().cross(dir[j].normalized()).abs() < 1e-12 {
            return Err(Error::DegenerateFamily(format!("lines {i} and {j} are parallel")));
        }
        b[i] = line_intersection(base[i], dir[i], base[j], dir[j])
            .ok_or_else(|| Error::DegenerateFamily(format!("lines {i} and {j} are parallel")))?;
    }
    let area_b = area::polygon_signed_area(&b);
    let scale = b.iter().fold(1.0f64, |m, p| m.max(p.norm()));
    if area_b.abs() < 1e-12 * scale * scale {
        return Err(Error::DegenerateFamily("concurrent lines".into()));
    }
    let curves: Vec<Curve> = (0..3).map(|i| Curve::line(b[i], b[(i + 2) % 3] - b[i])).collect();
    let critical_points = [0, 1, 2].map(|i| (b[i] + b[(i + 2) % 3]) * 0.5);
    let critical_params = [0, 1, 2].map(|i| (critical_points[i] - base[i]).dot(dir[i]) / dir[i].norm_sq());
    let cfg = Configuration::one_per_curve(&critical_params)?;
    let h = area::hessian(lines, &cfg)?.to_dense();
    Ok(ThreeLinesNormalForm {
        b,
        area_b,
        curves,
        critical_params,
        critical_points,
        eigen: morse::eigen_index(&h, None),
        sylvester: morse::sylvester_index(&h),
    })
}

/// Circle through `p` with tangent direction `d̂` at `p`, centre `p + r·d̂⊥`,
/// parametrized so that `s = 0` is `p` and the speed is `speed`.
pub fn tangent_circle(p: Vec2, d: Vec2, r: f64, speed: f64) -> Result<Curve> {
    if r == 0.0 || !r.is_finite() {
        return Err(Error::InvalidInput("radius must be finite and nonzero".into()));
    }
    let center = p + d.normalized().perp() * r;
    let orientation = Orientation::from_sign(r);
    let phi = (p - center).angle();
    let c = Curve::Circle { center, radius: r.abs(), orientation };
    Ok(c.reparametrized(orientation.sign() * phi, speed / r.abs()))
}

/// Three circles tangent at the vertices of a triangle to the lines parallel
/// to the opposite small diagonals.
#[derive(Clone, Debug)]
pub struct ThreeCircleFrame {
    pub points: [Vec2; 3],
    pub centers: [Vec2; 3],
    /// Signed radii: positive when the centre is left of `Pᵢ₊₁ − Pᵢ₋₁`.
    pub radii: [f64; 3],
    /// Circles with `|Cᵢ′| = lᵢ` and `Cᵢ(0) = Pᵢ`.
    pub curves: Vec<Curve>,
    /// `mᵢ = κᵢlᵢ³`.
    pub m: [f64; 3],
    /// Twice the signed area of the triangle (half the area of the triangle of
    /// tangent lines).
    pub s: f64,
}

impl ThreeCircleFrame {
    pub fn configuration(&self) -> Configuration {
        Configuration::one_per_curve(&[0.0; 3]).expect("three vertices")
    }

    /// `[[−m₁, s, s], [s, −m₂, s], [s, s, −m₃]]`.
    pub fn model_hessian(&self) -> SymMatrix {
        let (m, s) = (self.m, self.s);
        SymMatrix::from_fn(3, |i, j| if i == j { -m[i] } else { s })
    }
}

pub fn three_circles_frame(triangle: [Vec2; 3], radii: [f64; 3]) -> Result<ThreeCircleFrame> {
    let s = area::polygon_signed_area(&triangle);
    let scale = triangle.iter().fold(1.0f64, |m, p| m.max(p.norm()));
    if s.abs() < 1e-12 * scale * scale {
        return Err(Error::DegenerateFamily("degenerate triangle".into()));
    }
    let diag = Configuration::small_diagonals(&triangle);
    let mut curves = Vec::with_capacity(3);
    let mut centers = [Vec2::ZERO; 3];
    let mut m = [0.0; 3];
    for i in 0..3 {
        let l = diag[i].norm();
        curves.push(tangent_circle(triangle[i], diag[i], radii[i], l)?);
        centers[i] = triangle[i] + diag[i].normalized().perp() * radii[i];
        m[i] = l.powi(3) / radii[i];
    }
    Ok(ThreeCircleFrame { points: triangle, centers, radii, curves, m, s })
}

/// `−m₁m₂m₃ + (m₁ + m₂ + m₃)s² + 2s³`.
pub fn three_circle_det(m: [f64; 3], s: f64) -> f64 {
    -m[0] * m[1] * m[2] + (m[0] + m[1] + m[2]) * s * s + 2.0 * s.powi(3)
}

/// Spectrum for `m₁ = m₂ = m₃ = m`: `{2s − m, −m − s, −m − s}`, ascending.
pub fn equal_m_eigenvalues(m: f64, s: f64) -> [f64; 3] {
    let mut v = [2.0 * s - m, -m - s, -m - s];
    v.sort_by(f64::total_cmp);
    v
}

/// The value of `m₃` at which the three-circle determinant vanishes.
pub fn bifurcation_m3(m1: f64, m2: f64, s: f64) -> Result<f64> {
    let den = m1 * m2 - s * s;
    if den.abs() <= 1e-14 * (m1 * m2).abs().max(s * s).max(1e-300) {
        return Err(Error::NoBifurcation);
    }
    Ok(((m1 + m2) * s * s + 2.0 * s.powi(3)) / den)
}

/// Four circles tangent at the vertices of a quadrilateral to lines parallel
/// to the diagonals, in arc-length parametrization.
#[derive(Clone, Debug)]
pub struct FourCircleFrame {
    pub points: [Vec2; 4],
    pub centers: [Vec2; 4],
    pub radii: [f64; 4],
    pub curves: Vec<Curve>,
    /// `mᵢ = κᵢlᵢ`.
    pub m: [f64; 4],
    /// Sine of the angle from the first diagonal to the second.
    pub s: f64,
}

impl FourCircleFrame {
    pub fn configuration(&self) -> Configuration {
        Configuration::one_per_curve(&[0.0; 4]).expect("four vertices")
    }

    pub fn model_hessian(&self) -> SymMatrix {
        let (m, s) = (self.m, self.s);
        SymMatrix::from_fn(4, |i, j| {
            if i == j {
                -m[i]
            } else if (i + 1) % 4 == j || (j + 1) % 4 == i {
                s
            } else {
                0.0
            }
        })
    }
}

pub fn four_circles_frame(quad: [Vec2; 4], radii: [f64; 4]) -> Result<FourCircleFrame> {
    let diag = Configuration::small_diagonals(&quad);
    if diag.iter().any(|d| d.norm() < 1e-12) {
        return Err(Error::DegenerateFamily("coinciding opposite vertices".into()));
    }
    let s = diag[0].normalized().cross(diag[1].normalized());
    if s.abs() < 1e-12 {
        return Err(Error::DegenerateFamily("parallel diagonals".into()));
    }
    let mut curves = Vec::with_capacity(4);
    let mut centers = [Vec2::ZERO; 4];
    let mut m = [0.0; 4];
    for i in 0..4 {
        curves.push(tangent_circle(quad[i], diag[i], radii[i], 1.0)?);
        centers[i] = quad[i] + diag[i].normalized().perp() * radii[i];
        m[i] = diag[i].norm() / radii[i];
    }
    Ok(FourCircleFrame { points: quad, centers, radii, curves, m, s })
}

/// `m₁m₂m₃m₄ − (m₁m₂ + m₂m₃ + m₃m₄ + m₄m₁)s²`.
pub fn four_circle_det(m: [f64; 4], s: f64) -> f64 {
    m[0] * m[1] * m[2] * m[3] - (m[0] * m[1] + m[1] * m[2] + m[2] * m[3] + m[3] * m[0]) * s * s
}

/// Angles in `[0, π]` between consecutive tangents, each oriented along its
/// small diagonal. At a critical quadrilateral they read `θ, π − θ, θ, π − θ`.
pub fn consecutive_tangent_angles(curves: &[Curve], config: &Configuration) -> Result<Vec<f64>> {
    let pts = config.points(curves)?;
    let diag = Configuration::small_diagonals(&pts);
    let n = config.len();
    let tans = (0..n)
        .map(|i| {
            let t = config.curve(curves, i)?.d1(config.vertices[i].t)?.normalized();
            Ok(if t.dot(diag[i]) >= 0.0 { t } else { -t })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((0..n)
        .map(|i| {
            let (u, v) = (tans[i], tans[(i + 1) % n]);
            u.cross(v).abs().atan2(u.dot(v))
        })
        .collect())
}

/// Common centre of a configuration on concentric circles.
pub fn concentric_center(curves: &[Curve], config: &Configuration) -> Result<Vec2> {
    let mut center: Option<Vec2> = None;
    for i in 0..config.len() {
        match config.curve(curves, i)? {
            Curve::Circle { center: c, .. } => match center {
                None => center = Some(*c),
                Some(o) if o.distance(*c) <= 1e-12 * o.norm().max(1.0) => {}
                Some(_) => return Err(Error::NotConcentric),
            },
            _ => return Err(Error::NotConcentric),
        }
    }
    center.ok_or(Error::NotConcentric)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConcentricVerdict {
    /// `pᵢ·pᵢ₊₁` relative to the centre.
    pub inner_products: Vec<f64>,
    /// `max |pᵢ·pᵢ₋₁ − pᵢ·pᵢ₊₁|`.
    pub equal_products_residual: f64,
    /// `n = 3`: distance from the centre to the orthocentre.
    pub orthocenter_residual: Option<f64>,
    /// `n = 4`: `|d̂₁·d̂₂|` and the larger distance from the centre to a diagonal.
    pub diagonal_residual: Option<(f64, f64)>,
}

impl ConcentricVerdict {
    pub fn is_critical(&self, tol: f64) -> bool {
        self.equal_products_residual <= tol
    }
}

fn orthocenter(p: [Vec2; 3]) -> Option<Vec2> {
    // altitudes from p0 and p1
    let a = (p[2] - p[1]).perp();
    let b = (p[2] - p[0]).perp();
    line_intersection(p[0], a, p[1], b)
}

pub fn concentric_criterion(curves: &[Curve], config: &Configuration) -> Result<ConcentricVerdict> {
    let o = concentric_center(curves, config)?;
    let p: Vec<Vec2> = config.points(curves)?.into_iter().map(|q| q - o).collect();
    let n = p.len();
    let inner_products: Vec<f64> = (0..n).map(|i| p[i].dot(p[(i + 1) % n])).collect();
    let equal_products_residual = (0..n)
        .map(|i| (inner_products[(i + n - 1) % n] - inner_products[i]).abs())
        .fold(0.0, f64::max);
    let orthocenter_residual = (n == 3).then(|| orthocenter([p[0], p[1], p[2]]).map_or(f64::INFINITY, |h| h.norm()));
    let diagonal_residual = (n == 4).then(|| {
        let (d1, d2) = (p[2] - p[0], p[3] - p[1]);
        let ortho = d1.normalized().dot(d2.normalized()).abs();
        let dist = |a: Vec2, d: Vec2| (-a).cross(d.normalized()).abs();
        (ortho, dist(p[0], d1).max(dist(p[1], d2)))
    });
    Ok(ConcentricVerdict { inner_products, equal_products_residual, orthocenter_residual, diagonal_residual })
}

/// `−r₁r₂r₃r₄(r₄ − r₂)(r₃ − r₁)` for a critical quadrilateral on four
/// concentric circles, with signed radii read off in the frame where `P₁` lies
/// on the positive x-axis. This is the determinant of the Hessian in the
/// angle coordinates with the first angle frozen.
pub fn concentric4_det(curves: &[Curve], config: &Configuration) -> Result<f64> {
    if config.len() != 4 {
        return Err(Error::InvalidInput("four vertices expected".into()));
    }
    let o = concentric_center(curves, config)?;
    let p: Vec<Vec2> = config.points(curves)?.into_iter().map(|q| q - o).collect();
    let t: Vec<f64> = p.iter().map(|q| q.angle()).collect();
    let r: Vec<f64> = p.iter().map(|q| q.norm()).collect();
    let rho = [r[0], r[1] * (t[1] - t[0]).sin(), r[2] * (t[2] - t[0]).cos(), r[3] * (t[3] - t[0]).sin()];
    Ok(-rho[0] * rho[1] * rho[2] * rho[3] * (rho[3] - rho[1]) * (rho[2] - rho[0]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StarKind {
    /// All central angles of one sign.
    Regular { winding: i64 },
    /// Central angles of both signs.
    Zigzag,
    /// Some adjacent vertices coincide.
    Coincident,
    Irregular,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StarVerdict {
    /// Signed central angles `∠PᵢMPᵢ₊₁` in `(−π, π]`.
    pub angles: Vec<f64>,
    pub critical: bool,
    pub kind: StarKind,
    /// Indices `i` with `Pᵢ = Pᵢ₊₁`.
    pub coincident: Vec<usize>,
}

/// Equal-angle test for polygons inscribed in one circle: the polygon is
/// critical iff all `|αᵢ|` agree (relative tolerance `tol` on the mean).
pub fn circle_star_check(curves: &[Curve], config: &Configuration, tol: f64) -> Result<StarVerdict> {
    let first = config.vertices.first().ok_or(Error::TooFewVertices(0))?.curve;
    if config.vertices.iter().any(|v| v.curve != first) {
        return Err(Error::NotOnSingleCircle);
    }
    let center = match curves.get(first.0).ok_or(Error::UnknownCurve(first.0))? {
        Curve::Circle { center, .. } => *center,
        _ => return Err(Error::NotOnSingleCircle),
    };
    let pts = config.points(curves)?;
    let n = pts.len();
    let theta: Vec<f64> = pts.iter().map(|p| (*p - center).angle()).collect();
    let angles: Vec<f64> = (0..n)
        .map(|i| {
            let a = wrap_pi(theta[(i + 1) % n] - theta[i]);
            if a <= -PI + 1e-15 { PI } else { a }
        })
        .collect();
    let mean = angles.iter().map(|a| a.abs()).sum::<f64>() / n as f64;
    let critical = angles.iter().all(|a| (a.abs() - mean).abs() <= tol * mean.max(1e-300));
    let coincident: Vec<usize> = (0..n).filter(|&i| angles[i].abs() <= 1e-12).collect();
    let kind = if !coincident.is_empty() {
        StarKind::Coincident
    } else if !critical {
        StarKind::Irregular
    } else if angles.iter().all(|&a| a > 0.0) || angles.iter().all(|&a| a < 0.0) {
        StarKind::Regular { winding: (angles.iter().sum::<f64>() / TAU).round() as i64 }
    } else {
        StarKind::Zigzag
    };
    Ok(StarVerdict { angles, critical, kind, coincident })
}

/// Parameters `phase + 2πk·j/n`, `j = 0..n`, of a regular `(n, k)` star on a
/// circle or ellipse.
pub fn star_params(n: usize, k: usize, phase: f64) -> Vec<f64> {
    (0..n).map(|j| (phase + TAU * (k * j) as f64 / n as f64).rem_euclid(TAU)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MidpointBranch {
    Midpoint,
    Flat,
    Neither,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MidpointVerdict {
    pub branches: Vec<MidpointBranch>,
    /// `|Qᵢ − ½(Pᵢ₋₁ + Pᵢ)|`.
    pub midpoint_residuals: Vec<f64>,
    pub curvatures: Vec<f64>,
}

impl MidpointVerdict {
    pub fn is_critical(&self) -> bool {
        self.branches.iter().all(|b| *b != MidpointBranch::Neither)
    }
}

/// Tangential polygon criticality: each tangency point is the midpoint of its
/// edge or has curvature below `1e-8` in absolute value.
pub fn midpoint_check(curves: &[Curve], config: &Configuration, tol: f64) -> Result<MidpointVerdict> {
    let n = config.len();
    let q = config.points(curves)?;
    let p = area::tangential_polygon(curves, config)?;
    let mut v = MidpointVerdict { branches: Vec::new(), midpoint_residuals: Vec::new(), curvatures: Vec::new() };
    for i in 0..n {
        let mid = (p[(i + n - 1) % n] + p[i]) * 0.5;
        let res = q[i].distance(mid);
        let kappa = config.curve(curves, i)?.curvature_data(config.vertices[i].t)?.kappa;
        v.branches.push(if res <= tol {
            MidpointBranch::Midpoint
        } else if kappa.abs() < 1e-8 {
            MidpointBranch::Flat
        } else {
            MidpointBranch::Neither
        });
        v.midpoint_residuals.push(res);
        v.curvatures.push(kappa);
    }
    Ok(v)
}

/// Signed offsets `(λᵢ + μᵢ)/2` of the tangential edge midpoints from the
/// tangency points along the unit tangents.
pub fn midpoint_offsets(curves: &[Curve], config: &Configuration) -> Result<Vec<f64>> {
    let n = config.len();
    let q = config.points(curves)?;
    let p = area::tangential_polygon(curves, config)?;
    (0..n)
        .map(|i| {
            let t = config.curve(curves, i)?.d1(config.vertices[i].t)?.normalized();
            Ok(((p[(i + n - 1) % n] - q[i]).dot(t) + (p[i] - q[i]).dot(t)) * 0.5)
        })
        .collect()
}

/// Tangential polygons whose tangency points are all edge midpoints, found by
/// Newton on [`midpoint_offsets`] from a lattice of starts. Results are
/// wrapped and deduplicated like the vertex solver's.
pub fn find_midpoint_polygons(problem: &Problem, starts: usize, tol: f64) -> Vec<Vec<f64>> {
    let n = problem.n();
    let residual = |x: &[f64]| -> Option<Vec<f64>> {
        let r = midpoint_offsets(&problem.curves, &problem.configuration(x)).ok()?;
        r.iter().all(|v| v.is_finite()).then_some(r)
    };
    let jacobian = |x: &[f64]| fd_jacobian(&residual, x, 1e-6);
    let ranges: Vec<(f64, f64)> = (0..n).map(|i| problem.curve_of(i).search_range()).collect();
    let mut found: Vec<Vec<f64>> = Vec::new();
    for u in kronecker_lattice(starts, n) {
        let x0: Vec<f64> = (0..n).map(|i| ranges[i].0 + (ranges[i].1 - ranges[i].0) * u[i]).collect();
        let Some(x) = newton_system(&residual, &jacobian, &x0, NewtonOptions { tol, max_iters: 60 }) else {
            continue;
        };
        let x: Vec<f64> = x.iter().enumerate().map(|(i, &t)| problem.curve_of(i).wrap(t)).collect();
        if !found.iter().any(|y| (0..n).all(|i| problem.param_distance(i, x[i], y[i]) < 1e-6)) {
            found.push(x);
        }
    }
    found.sort_by(|a, b| a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal));
    found
}

/// Convenience: the problem with all `n` vertices on curve 0.
pub fn single_curve_problem(curve: Curve, n: usize) -> Result<Problem> {
    Problem::new(vec![curve], vec![CurveId(0); n])
}

//! Area and perimeter billiards on smooth strictly convex closed curves:
//! the inner-area map (chord parallel to the tangent), the reflection
//! billiard, and the outer-area (midpoint) map, with orbit iteration,
//! closed-orbit search and caustic fitting.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::curves::{bisect, Curve};
use crate::error::{Error, Result};
use crate::linalg::{sym_eigen, SymMatrix};
use crate::solver::levenberg_marquardt;
use crate::vec2::{line_intersection, Vec2};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapKind {
    InnerArea,
    Perimeter,
    OuterArea,
}

/// Two consecutive boundary points, by parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BilliardState {
    pub prev: f64,
    pub curr: f64,
}

impl BilliardState {
    pub fn new(prev: f64, curr: f64) -> Self {
        Self { prev, curr }
    }
}

/// Which of the two tangency points an outer step reflects through.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    /// The table lies to the left of the ray from `P` to the tangency point.
    Right,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BilliardOrbit {
    pub map: MapKind,
    /// Boundary parameters: the vertices for inner maps, the tangency points
    /// for the outer map.
    pub points: Vec<f64>,
    /// Exterior points of the outer map; empty for inner maps.
    pub exterior: Vec<Vec2>,
    pub closed: bool,
    pub period: Option<usize>,
    pub winding: Option<i64>,
    /// Return distance at `period`, or after the last step if not closed.
    pub closure_residual: f64,
}

/// Closure tolerance on parameters (inner maps) or relative distance (outer map).
pub const CLOSURE_TOL: f64 = 1e-8;

fn table_period(curve: &Curve) -> Result<f64> {
    if curve.is_piecewise() {
        return Err(Error::InvalidInput("billiard tables must be smooth".into()));
    }
    curve.period().ok_or_else(|| Error::InvalidInput("billiard tables must be closed curves".into()))
}

/// Signed offset in `(−p/2, p/2]`.
fn wrap_diff(d: f64, p: f64) -> f64 {
    let r = d.rem_euclid(p);
    if r > 0.5 * p {
        r - p
    } else {
        r
    }
}

/// The intersection other than `C(t0)` of the table with the line through
/// `C(t0)` in direction `dir`.
///
/// The known root is divided out: `g(t) = dir × (C(t) − C(t0)) / sin(π(t − t0)/p)`
/// has the same sign at both ends of `(t0, t0 + p)` only when the line is
/// tangent at `C(t0)`.
pub fn second_intersection(curve: &Curve, t0: f64, dir: Vec2) -> Result<f64> {
    let per = table_period(curve)?;
    if dir.norm() == 0.0 {
        return Err(Error::DegenerateStep("zero direction".into()));
    }
    let dir = dir.normalized();
    let p0 = curve.eval(t0)?;
    let v0 = curve.d1(t0)?;
    let fp0 = dir.cross(v0);
    if fp0.abs() <= 1e-12 * v0.norm() {
        return Err(Error::DegenerateStep(format!("line tangent to the table at t = {t0}")));
    }
    let f = |t: f64| -> Result<f64> { Ok(dir.cross(curve.eval(t)? - p0)) };
    let g = |t: f64| -> Result<f64> {
        let u = t - t0;
        let s = (PI * u / per).sin();
        if s.abs() < 1e-9 {
            let sign = if u < 0.5 * per { 1.0 } else { -1.0 };
            return Ok(sign * fp0 * per / PI);
        }
        Ok(f(t)? / s)
    };
    const SAMPLES: usize = 256;
    let h = per / SAMPLES as f64;
    let mut roots = Vec::new();
    let mut a = t0;
    let mut ga = g(a)?;
    for k in 1..=SAMPLES {
        let b = if k == SAMPLES { t0 + per } else { t0 + h * k as f64 };
        let gb = g(b)?;
        if gb == 0.0 && k < SAMPLES {
            roots.push(b);
        } else if ga != 0.0 && ga.signum() != gb.signum() {
            roots.push(bisect(&g, a, b, ga)?);
        }
        a = b;
        ga = gb;
    }
    match roots.len() {
        0 => Err(Error::DegenerateStep("no second intersection".into())),
        1 => {
            let mut t = roots[0];
            for _ in 0..3 {
                let df = dir.cross(curve.d1(t)?);
                if df.abs() < 1e-12 {
                    break;
                }
                let cand = t - f(t)? / df;
                if (cand - t).abs() > 1e-6 || f(cand)?.abs() > f(t)?.abs() {
                    break;
                }
                t = cand;
            }
            Ok(curve.wrap(t))
        }
        _ => Err(Error::DegenerateStep("line meets the table more than twice (not convex)".into())),
    }
}

fn distinct(curve: &Curve, s: BilliardState) -> Result<()> {
    if curve.param_distance(s.prev, s.curr) <= 1e-12 {
        return Err(Error::DegenerateStep("coinciding consecutive points".into()));
    }
    Ok(())
}

/// Next vertex: the second intersection of the line through `C(prev)`
/// parallel to the tangent at `C(curr)`.
pub fn inner_area_step(curve: &Curve, state: BilliardState) -> Result<BilliardState> {
    distinct(curve, state)?;
    let dir = curve.d1(state.curr)?;
    let next = second_intersection(curve, state.prev, dir)?;
    Ok(BilliardState { prev: state.curr, curr: next })
}

/// Reflection billiard: the incoming chord is reflected in the tangent line.
pub fn perimeter_step(curve: &Curve, state: BilliardState) -> Result<BilliardState> {
    distinct(curve, state)?;
    let u = curve.eval(state.curr)? - curve.eval(state.prev)?;
    let t = curve.d1(state.curr)?.normalized();
    let r = t * (2.0 * u.dot(t)) - u;
    if r.normalized().cross(t).abs() <= 1e-12 {
        return Err(Error::DegenerateStep("grazing reflection".into()));
    }
    let next = second_intersection(curve, state.curr, r)?;
    Ok(BilliardState { prev: state.curr, curr: next })
}

fn interior_point(curve: &Curve, per: f64) -> Result<Vec2> {
    let mut s = Vec2::ZERO;
    for k in 0..64 {
        s += curve.eval(per * k as f64 / 64.0)?;
    }
    Ok(s / 64.0)
}

/// Parameters of the points where a tangent line of the table passes through `p`.
pub fn tangency_params(curve: &Curve, p: Vec2) -> Result<Vec<f64>> {
    let per = table_period(curve)?;
    let h = |t: f64| -> Result<f64> { Ok(curve.d1(t)?.cross(curve.eval(t)? - p)) };
    let mut roots = crate::curves::find_roots(&h, 0.0, per, 512, true)?;
    for t in roots.iter_mut() {
        for _ in 0..3 {
            let dh = curve.d2(*t)?.cross(curve.eval(*t)? - p);
            if dh.abs() < 1e-14 {
                break;
            }
            let cand = *t - h(*t)? / dh;
            if (cand - *t).abs() > 1e-6 || h(cand)?.abs() > h(*t)?.abs() {
                break;
            }
            *t = cand;
        }
        *t = curve.wrap(*t);
    }
    Ok(roots)
}

/// Outer step: reflect `p` through the chosen tangency point `Q`, giving
/// `2Q − p`. Returns the new point and the tangency parameter.
pub fn outer_area_step(curve: &Curve, p: Vec2, side: Side) -> Result<(Vec2, f64)> {
    let per = table_period(curve)?;
    let roots = tangency_params(curve, p)?;
    let scale = interior_point(curve, per)?.distance(p).max(1.0);
    for &t in &roots {
        if curve.eval(t)?.distance(p) <= 1e-9 * scale {
            return Err(Error::InsideTable);
        }
    }
    match roots.len() {
        0 | 1 => return Err(Error::InsideTable),
        2 => {}
        _ => return Err(Error::DegenerateStep("more than two tangents (not convex)".into())),
    }
    let x = interior_point(curve, per)?;
    for &t in &roots {
        let q = curve.eval(t)?;
        let right = (q - p).cross(x - p) > 0.0;
        if right == (side == Side::Right) {
            return Ok((q * 2.0 - p, t));
        }
    }
    Err(Error::DegenerateStep("tangency points on the same side".into()))
}

fn step_inner(curve: &Curve, map: MapKind, s: BilliardState) -> Result<BilliardState> {
    match map {
        MapKind::InnerArea => inner_area_step(curve, s),
        MapKind::Perimeter => perimeter_step(curve, s),
        MapKind::OuterArea => Err(Error::InvalidInput("outer map acts on exterior points".into())),
    }
}

fn winding_of(points: &[f64], per: f64, period: usize) -> i64 {
    let total: f64 = (0..period).map(|j| (points[j + 1] - points[j]).rem_euclid(per)).sum();
    (total / per).round() as i64
}

/// Iterate an inner map `steps` times; the orbit holds `steps + 2` parameters.
pub fn iterate(curve: &Curve, map: MapKind, start: BilliardState, steps: usize) -> Result<BilliardOrbit> {
    let per = table_period(curve)?;
    let mut points = vec![curve.wrap(start.prev), curve.wrap(start.curr)];
    let mut s = BilliardState::new(points[0], points[1]);
    for _ in 0..steps {
        s = step_inner(curve, map, s)?;
        points.push(s.curr);
    }
    let mut period = None;
    let mut residual = f64::INFINITY;
    for k in 1..points.len() - 1 {
        let r = curve.param_distance(points[k], points[0]).max(curve.param_distance(points[k + 1], points[1]));
        residual = r;
        if r < CLOSURE_TOL {
            period = Some(k);
            break;
        }
    }
    Ok(BilliardOrbit {
        map,
        winding: period.map(|k| winding_of(&points, per, k)),
        closed: period.is_some(),
        period,
        points,
        exterior: Vec::new(),
        closure_residual: residual,
    })
}

/// Iterate the outer map from the exterior point `p0` on a fixed side.
pub fn iterate_outer(curve: &Curve, p0: Vec2, side: Side, steps: usize) -> Result<BilliardOrbit> {
    let per = table_period(curve)?;
    let mut exterior = vec![p0];
    let mut points = Vec::with_capacity(steps);
    let mut p = p0;
    for _ in 0..steps {
        let (next, t) = outer_area_step(curve, p, side)?;
        exterior.push(next);
        points.push(t);
        p = next;
    }
    let scale = p0.norm().max(1.0);
    let mut period = None;
    let mut residual = f64::INFINITY;
    for k in 1..exterior.len() {
        residual = exterior[k].distance(p0) / scale;
        if residual < CLOSURE_TOL {
            period = Some(k);
            break;
        }
    }
    let winding = period.map(|k| {
        let mut pts = points[..k].to_vec();
        pts.push(points[0]);
        winding_of(&pts, per, k)
    });
    Ok(BilliardOrbit {
        map: MapKind::OuterArea,
        points,
        exterior,
        closed: period.is_some(),
        period,
        winding,
        closure_residual: residual,
    })
}

fn inner_return(curve: &Curve, map: MapKind, x: &[f64], n: usize, per: f64) -> Option<Vec<f64>> {
    let mut s = BilliardState::new(x[0], x[1]);
    for _ in 0..n {
        s = step_inner(curve, map, s).ok()?;
    }
    Some(vec![wrap_diff(s.prev - x[0], per), wrap_diff(s.curr - x[1], per)])
}

/// Refine an approximately closed inner orbit of period `n` by
/// Levenberg–Marquardt on the `n`-step return residual.
pub fn refine_closed_orbit(curve: &Curve, map: MapKind, start: BilliardState, n: usize) -> Result<BilliardOrbit> {
    let per = table_period(curve)?;
    let residual = |x: &[f64]| inner_return(curve, map, x, n, per);
    let x = levenberg_marquardt(&residual, &[start.prev, start.curr], 1e-12, 60, 1e-7)
        .ok_or_else(|| Error::DegenerateStep("closure refinement did not converge".into()))?;
    iterate(curve, map, BilliardState::new(x[0], x[1]), n)
}

/// Refine an approximately closed outer orbit of period `n`.
pub fn refine_closed_outer(curve: &Curve, p0: Vec2, side: Side, n: usize) -> Result<BilliardOrbit> {
    let residual = |x: &[f64]| {
        let mut p = Vec2::new(x[0], x[1]);
        for _ in 0..n {
            p = outer_area_step(curve, p, side).ok()?.0;
        }
        Some(vec![p.x - x[0], p.y - x[1]])
    };
    let x = levenberg_marquardt(&residual, &[p0.x, p0.y], 1e-12, 60, 1e-7)
        .ok_or_else(|| Error::DegenerateStep("closure refinement did not converge".into()))?;
    iterate_outer(curve, Vec2::new(x[0], x[1]), side, n)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrbitSearch {
    pub map: MapKind,
    pub period: usize,
    pub winding: i64,
    /// Grid points per search dimension.
    pub grid: usize,
    /// Side for the outer map.
    pub side: Side,
}

fn canonical_inner(curve: &Curve, o: &BilliardOrbit, n: usize) -> Result<BilliardOrbit> {
    let j = (0..n).min_by(|&a, &b| o.points[a].total_cmp(&o.points[b])).unwrap_or(0);
    let orbit = iterate(curve, o.map, BilliardState::new(o.points[j], o.points[j + 1]), n)?;
    Ok(orbit)
}

fn same_cycle(curve: &Curve, a: &[f64], b: &[f64], tol: f64) -> bool {
    a.iter().all(|s| b.iter().any(|t| curve.param_distance(*s, *t) < tol))
        && b.iter().all(|s| a.iter().any(|t| curve.param_distance(*s, *t) < tol))
}

/// Closed orbits of period `n` and winding `w`: grid of starts, closure
/// refinement, then deduplication of the vertex cycles. On integrable tables
/// (circles, ellipses) the orbits form families and several members are
/// returned.
pub fn find_closed_orbits(curve: &Curve, search: OrbitSearch) -> Result<Vec<BilliardOrbit>> {
    let per = table_period(curve)?;
    let n = search.period;
    let min_n = match search.map {
        MapKind::Perimeter => 2,
        _ => 3,
    };
    if n < min_n || search.grid == 0 {
        return Err(Error::InvalidInput(format!("period must be at least {min_n} and grid positive")));
    }
    let g = search.grid;
    let candidates: Vec<BilliardOrbit> = if search.map == MapKind::OuterArea {
        let per_len = (0..64)
            .map(|k| curve.d1(per * k as f64 / 64.0).map(|d| d.norm() * per / 64.0))
            .sum::<Result<f64>>()?;
        let starts: Vec<Vec2> = (0..g)
            .flat_map(|i| (1..=g).map(move |j| (i, j)))
            .filter_map(|(i, j)| {
                let t = per * i as f64 / g as f64;
                let q = curve.eval(t).ok()?;
                let d = curve.d1(t).ok()?.normalized();
                Some(q + d * (per_len * 0.5 * j as f64 / g as f64))
            })
            .collect();
        starts
            .par_iter()
            .filter_map(|&p| {
                let o = refine_closed_outer(curve, p, search.side, n).ok()?;
                (o.period == Some(n) && o.winding == Some(search.winding)).then_some(o)
            })
            .collect()
    } else {
        let mut starts = Vec::new();
        for i in 0..g {
            let t0 = per * i as f64 / g as f64;
            starts.push(BilliardState::new(t0, t0 + per * search.winding as f64 / n as f64));
            for j in 0..g {
                starts.push(BilliardState::new(t0, t0 + per * (j as f64 + 0.5) / g as f64));
            }
        }
        starts
            .par_iter()
            .filter_map(|&s| {
                let o = refine_closed_orbit(curve, search.map, s, n).ok()?;
                if o.period != Some(n) || o.winding != Some(search.winding) {
                    return None;
                }
                canonical_inner(curve, &o, n).ok()
            })
            .collect()
    };
    let mut out: Vec<BilliardOrbit> = Vec::new();
    for o in candidates {
        let dup = out.iter().any(|k| {
            if search.map == MapKind::OuterArea {
                o.exterior[..n].iter().all(|p| k.exterior[..n].iter().any(|q| p.distance(*q) < 1e-6))
            } else {
                same_cycle(curve, &o.points[..n], &k.points[..n], 1e-6)
            }
        });
        if !dup {
            out.push(o);
        }
    }
    out.sort_by(|a, b| a.points[0].total_cmp(&b.points[0]));
    Ok(out)
}

/// Conic `Ax² + Bxy + Cy² + Dx + Ey + F = 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Conic {
    pub coefficients: [f64; 6],
}

/// Centre, semi-axes (major first) and the angle of the major axis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EllipseParams {
    pub center: Vec2,
    pub semi_major: f64,
    pub semi_minor: f64,
    pub angle: f64,
}

impl Conic {
    fn from_matrix(m: [[f64; 3]; 3]) -> Self {
        Conic { coefficients: [m[0][0], 2.0 * m[0][1], m[1][1], 2.0 * m[0][2], 2.0 * m[1][2], m[2][2]] }
    }

    pub fn value(&self, p: Vec2) -> f64 {
        let [a, b, c, d, e, f] = self.coefficients;
        a * p.x * p.x + b * p.x * p.y + c * p.y * p.y + d * p.x + e * p.y + f
    }

    pub fn is_ellipse(&self) -> bool {
        self.ellipse().is_some()
    }

    pub fn ellipse(&self) -> Option<EllipseParams> {
        let [a, b, c, d, e, _] = self.coefficients;
        let disc = 4.0 * a * c - b * b;
        if disc <= 0.0 {
            return None;
        }
        let center = Vec2::new((b * e - 2.0 * c * d) / disc, (b * d - 2.0 * a * e) / disc);
        let f0 = self.value(center);
        let eig = sym_eigen(&SymMatrix::from_rows(&[vec![a, b / 2.0], vec![b / 2.0, c]]));
        let (l1, l2) = (eig.values[0], eig.values[1]);
        let (r1, r2) = (-f0 / l1, -f0 / l2);
        if !(r1 > 0.0 && r2 > 0.0) {
            return None;
        }
        // smaller eigenvalue ↔ longer axis (λ's share the sign of −f0)
        let (major, minor, k) = if r1 >= r2 { (r1.sqrt(), r2.sqrt(), 0) } else { (r2.sqrt(), r1.sqrt(), 1) };
        let v = &eig.vectors[k];
        let mut angle = v[1].atan2(v[0]).rem_euclid(PI);
        if angle >= PI - 1e-12 {
            angle = 0.0;
        }
        Some(EllipseParams { center, semi_major: major, semi_minor: minor, angle })
    }
}

fn adjugate(m: [[f64; 3]; 3]) -> [[f64; 3]; 3] {
    let c = |r0: usize, r1: usize, c0: usize, c1: usize| m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    [
        [c(1, 2, 1, 2), -c(0, 2, 1, 2), c(0, 1, 1, 2)],
        [-c(1, 2, 0, 2), c(0, 2, 0, 2), -c(0, 1, 0, 2)],
        [c(1, 2, 0, 1), -c(0, 2, 0, 1), c(0, 1, 0, 1)],
    ]
}

/// Line `ax + by + c = 0` with `(a, b)` a unit normal.
fn line_coords(p: Vec2, q: Vec2) -> [f64; 3] {
    let nrm = (q - p).perp().normalized();
    [nrm.x, nrm.y, -nrm.dot(p)]
}

/// Least-squares conic tangent to a family of lines: fit the dual conic
/// `lᵀC*l = 0` (smallest eigenvector of the 6×6 scatter matrix) and invert.
/// Returns the conic and `max |lᵀC*l|` for unit `C*` and unit line normals.
pub fn fit_conic_to_lines(chords: &[(Vec2, Vec2)]) -> Result<(Conic, f64)> {
    if chords.len() < 5 {
        return Err(Error::InsufficientData(format!("{} lines, need at least 5", chords.len())));
    }
    let origin = chords.iter().fold(Vec2::ZERO, |s, (p, q)| s + (*p + *q) * 0.5) / chords.len() as f64;
    let rows: Vec<[f64; 6]> = chords
        .iter()
        .map(|(p, q)| {
            let [a, b, c] = line_coords(*p - origin, *q - origin);
            [a * a, a * b, b * b, a * c, b * c, c * c]
        })
        .collect();
    let scatter = SymMatrix::from_fn(6, |i, j| rows.iter().map(|r| r[i] * r[j]).sum());
    let eig = sym_eigen(&scatter);
    let v = &eig.vectors[0];
    let residual = rows.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum::<f64>().abs()).fold(0.0, f64::max);
    let dual = [[v[0], v[1] / 2.0, v[3] / 2.0], [v[1] / 2.0, v[2], v[4] / 2.0], [v[3] / 2.0, v[4] / 2.0, v[5]]];
    let local = adjugate(dual);
    // back to the original frame: X = Y + origin
    let s = [[1.0, 0.0, -origin.x], [0.0, 1.0, -origin.y], [0.0, 0.0, 1.0]];
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = (0..3).flat_map(|k| (0..3).map(move |l| (k, l))).map(|(k, l)| s[k][i] * local[k][l] * s[l][j]).sum();
        }
    }
    let norm = m.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::DegenerateFamily("degenerate dual conic".into()));
    }
    let m = m.map(|r| r.map(|x| x / norm));
    Ok((Conic::from_matrix(m), residual))
}

#[derive(Clone, Debug)]
pub struct Caustic {
    /// Intersections of chords adjacent in direction order.
    pub samples: Vec<Vec2>,
    pub conic: Conic,
    pub residual: f64,
    pub chords: usize,
}

/// Chords of an orbit: the small diagonals `Pₖ₋₁Pₖ₊₁` for the inner-area
/// map, the edges for the reflection billiard.
pub fn orbit_chords(curve: &Curve, orbit: &BilliardOrbit) -> Result<Vec<(Vec2, Vec2)>> {
    let pts = orbit.points.iter().map(|&t| curve.eval(t)).collect::<Result<Vec<_>>>()?;
    match orbit.map {
        MapKind::InnerArea => Ok((1..pts.len().saturating_sub(1)).map(|k| (pts[k - 1], pts[k + 1])).collect()),
        MapKind::Perimeter => Ok(pts.windows(2).map(|w| (w[0], w[1])).collect()),
        MapKind::OuterArea => Err(Error::InvalidInput("outer orbits have no chord caustic".into())),
    }
}

/// Envelope of the chords of a non-closed orbit, with a fitted conic.
pub fn caustic_envelope(curve: &Curve, orbit: &BilliardOrbit) -> Result<Caustic> {
    if orbit.closed {
        return Err(Error::DegenerateFamily("closed orbit: its chords form a finite set".into()));
    }
    let chords = orbit_chords(curve, orbit)?;
    if chords.len() < 50 {
        return Err(Error::InsufficientData(format!("{} chords, need at least 50", chords.len())));
    }
    let mut lines: Vec<[f64; 3]> = Vec::new();
    for (p, q) in &chords {
        let l = line_coords(*p, *q);
        if !lines.iter().any(|m| l.iter().zip(m).all(|(a, b)| (a - b).abs() < 1e-9)) {
            lines.push(l);
        }
        if lines.len() >= 5 {
            break;
        }
    }
    if lines.len() < 5 {
        return Err(Error::DegenerateFamily("fewer than five distinct chords".into()));
    }
    let mut order: Vec<usize> = (0..chords.len()).collect();
    let dir_angle = |k: usize| (chords[k].1 - chords[k].0).angle();
    order.sort_by(|&a, &b| dir_angle(a).total_cmp(&dir_angle(b)));
    let samples = (0..order.len())
        .filter_map(|k| {
            let (a, b) = (chords[order[k]], chords[order[(k + 1) % order.len()]]);
            line_intersection(a.0, a.1 - a.0, b.0, b.1 - b.0)
        })
        .collect();
    let (conic, residual) = fit_conic_to_lines(&chords)?;
    Ok(Caustic { samples, conic, residual, chords: chords.len() })
}

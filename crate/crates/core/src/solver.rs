//! Critical configurations of the signed area: multi-start damped Newton on
//! the gradient with the exact Hessian as Jacobian, optional gauge fixing for
//! rotationally symmetric families, deduplication, and the smooth and
//! tangent-cone criticality tests.

use rayon::prelude::*;

use crate::area::{self, Configuration, CurveId, SymTridiagCorner, Vertex};
use crate::curves::Curve;
use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::morse::{self, MorseData};
use crate::vec2::Vec2;

/// Curves plus the assignment of vertices to curves.
#[derive(Clone, Debug)]
pub struct Problem {
    pub curves: Vec<Curve>,
    pub assignment: Vec<CurveId>,
}

impl Problem {
    pub fn new(curves: Vec<Curve>, assignment: Vec<CurveId>) -> Result<Self> {
        if assignment.len() < 3 {
            return Err(Error::TooFewVertices(assignment.len()));
        }
        if let Some(bad) = assignment.iter().find(|id| id.0 >= curves.len()) {
            return Err(Error::UnknownCurve(bad.0));
        }
        Ok(Self { curves, assignment })
    }

    /// Vertex `i` slides on curve `i`.
    pub fn one_per_vertex(curves: Vec<Curve>) -> Result<Self> {
        let a = (0..curves.len()).map(CurveId).collect();
        Self::new(curves, a)
    }

    /// `n` vertices on one curve.
    pub fn on_single_curve(curve: Curve, n: usize) -> Result<Self> {
        Self::new(vec![curve], vec![CurveId(0); n])
    }

    pub fn n(&self) -> usize {
        self.assignment.len()
    }

    pub fn curve_of(&self, vertex: usize) -> &Curve {
        &self.curves[self.assignment[vertex].0]
    }

    pub fn configuration(&self, params: &[f64]) -> Configuration {
        assert_eq!(params.len(), self.n());
        Configuration {
            vertices: self.assignment.iter().zip(params).map(|(&curve, &t)| Vertex { curve, t }).collect(),
        }
    }

    /// Vertices whose curve is not a point.
    pub fn free_vertices(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| !self.curve_of(i).is_point()).collect()
    }

    pub fn param_distance(&self, vertex: usize, s: f64, t: f64) -> f64 {
        self.curve_of(vertex).param_distance(s, t)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Gauge {
    #[default]
    None,
    /// Freeze the first free parameter (reduced configuration space for
    /// rotation-invariant problems).
    FixFirstParameter,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolverSettings {
    pub starts: usize,
    /// Tolerance on `|gradient|∞` over the unknowns.
    pub newton_tol: f64,
    pub max_iters: usize,
    /// Parameter distance (modulo periods) under which two results coincide.
    pub dedup_tol: f64,
    pub gauge: Gauge,
    /// Value of the frozen parameter under [`Gauge::FixFirstParameter`].
    pub gauge_value: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self { starts: 512, newton_tol: 1e-10, max_iters: 60, dedup_tol: 1e-6, gauge: Gauge::None, gauge_value: 0.0 }
    }
}

impl SolverSettings {
    pub fn validate(&self) -> Result<()> {
        if self.starts == 0 || !(self.newton_tol > 0.0) || !(self.dedup_tol > 0.0) || self.max_iters == 0 {
            return Err(Error::InvalidInput("solver tolerances must be positive and starts >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum DegeneracyFlag {
    /// `P_{i+1} = P_{i−1}` at this vertex.
    CoincidingNeighbors { vertex: usize },
    /// The reduced Hessian has this many (numerically) zero eigenvalues.
    ZeroEigenvalues { count: usize },
}

#[derive(Clone, Debug)]
pub struct CriticalPolygon {
    pub config: Configuration,
    pub area: f64,
    /// `|gradient|∞` over the unknowns.
    pub grad_norm: f64,
    pub hessian: SymTridiagCorner,
    /// Vertices whose parameters were unknowns (point curves and the gauge excluded).
    pub unknowns: Vec<usize>,
    /// Hessian restricted to the unknowns.
    pub reduced_hessian: SymMatrix,
    pub morse: MorseData,
    pub flags: Vec<DegeneracyFlag>,
}

impl CriticalPolygon {
    pub fn index(&self) -> usize {
        self.morse.index
    }

    pub fn is_morse(&self) -> bool {
        self.morse.is_morse()
    }
}

/// Options for [`newton_system`].
#[derive(Clone, Copy, Debug)]
pub struct NewtonOptions {
    pub tol: f64,
    pub max_iters: usize,
}

/// Damped Newton for a square system `F(x) = 0`.
///
/// Each step solves `J Δ = −F` and halves `Δ` until `|F|₂` decreases. When no
/// halving helps (or `J` is singular) up to five steepest-descent steps on
/// `½|F|²` are tried instead. Returns the point once `|F|∞ ≤ tol`.
pub fn newton_system(
    residual: &dyn Fn(&[f64]) -> Option<Vec<f64>>,
    jacobian: &dyn Fn(&[f64]) -> Option<SymMatrix>,
    x0: &[f64],
    opts: NewtonOptions,
) -> Option<Vec<f64>> {
    let norm2 = |v: &[f64]| v.iter().map(|a| a * a).sum::<f64>().sqrt();
    let norm_inf = |v: &[f64]| v.iter().fold(0.0f64, |m, a| m.max(a.abs()));
    let mut x = x0.to_vec();
    let mut f = residual(&x)?;
    for _ in 0..opts.max_iters {
        if norm_inf(&f) <= opts.tol {
            return Some(x);
        }
        let j = jacobian(&x)?;
        let fnorm = norm2(&f);
        let mut advanced = false;
        if let Some(step) = j.solve(&f.iter().map(|v| -v).collect::<Vec<_>>()) {
            let mut lambda = 1.0;
            for _ in 0..30 {
                let cand: Vec<f64> = x.iter().zip(&step).map(|(a, d)| a + lambda * d).collect();
                if let Some(fc) = residual(&cand) {
                    if norm2(&fc) < fnorm {
                        x = cand;
                        f = fc;
                        advanced = true;
                        break;
                    }
                }
                lambda *= 0.5;
            }
        }
        if !advanced {
            // steepest descent on ½|F|²: direction −Jᵀ F
            for _ in 0..5 {
                let j = jacobian(&x)?;
                let n = x.len();
                let g: Vec<f64> = (0..n).map(|c| (0..n).map(|r| j.get(r, c) * f[r]).sum()).collect();
                let gn = norm2(&g);
                if gn == 0.0 {
                    return None;
                }
                let fnorm = norm2(&f);
                let mut lambda = fnorm * fnorm / (gn * gn);
                let mut moved = false;
                for _ in 0..40 {
                    let cand: Vec<f64> = x.iter().zip(&g).map(|(a, d)| a - lambda * d).collect();
                    if let Some(fc) = residual(&cand) {
                        if norm2(&fc) < fnorm {
                            x = cand;
                            f = fc;
                            moved = true;
                            break;
                        }
                    }
                    lambda *= 0.5;
                }
                if !moved {
                    return None;
                }
            }
        }
    }
    (norm_inf(&f) <= opts.tol).then_some(x)
}

/// Central-difference Jacobian of a residual map.
pub fn fd_jacobian(residual: &dyn Fn(&[f64]) -> Option<Vec<f64>>, x: &[f64], h: f64) -> Option<SymMatrix> {
    let n = x.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut up = x.to_vec();
        let mut dn = x.to_vec();
        up[j] += h;
        dn[j] -= h;
        let fu = residual(&up)?;
        let fd = residual(&dn)?;
        cols.push(fu.iter().zip(&fd).map(|(a, b)| (a - b) / (2.0 * h)).collect::<Vec<f64>>());
    }
    Some(SymMatrix::from_fn(n, |i, j| cols[j][i]))
}

/// Levenberg–Marquardt for a (possibly rank-deficient or overdetermined)
/// residual `F: ℝⁿ → ℝᵐ` with a finite-difference Jacobian. Returns the point
/// once `|F|∞ ≤ tol`.
pub fn levenberg_marquardt(
    residual: &dyn Fn(&[f64]) -> Option<Vec<f64>>,
    x0: &[f64],
    tol: f64,
    max_iters: usize,
    fd_step: f64,
) -> Option<Vec<f64>> {
    let n = x0.len();
    let sq = |v: &[f64]| v.iter().map(|a| a * a).sum::<f64>();
    let mut x = x0.to_vec();
    let mut f = residual(&x)?;
    let mut lambda = 1e-6;
    for _ in 0..max_iters {
        if f.iter().all(|v| v.abs() <= tol) {
            return Some(x);
        }
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut up = x.clone();
            let mut dn = x.clone();
            up[j] += fd_step;
            dn[j] -= fd_step;
            let (fu, fd) = (residual(&up)?, residual(&dn)?);
            cols.push(fu.iter().zip(&fd).map(|(a, b)| (a - b) / (2.0 * fd_step)).collect::<Vec<f64>>());
        }
        let jtj = SymMatrix::from_fn(n, |a, b| cols[a].iter().zip(&cols[b]).map(|(u, v)| u * v).sum());
        let jtf: Vec<f64> = cols.iter().map(|c| -c.iter().zip(&f).map(|(u, v)| u * v).sum::<f64>()).collect();
        let scale = (0..n).fold(0.0f64, |m, i| m.max(jtj.get(i, i))).max(1e-300);
        let f0 = sq(&f);
        let mut improved = false;
        for _ in 0..30 {
            let step = jtj.shifted(lambda * scale).solve(&jtf);
            if let Some(step) = step {
                let cand: Vec<f64> = x.iter().zip(&step).map(|(a, d)| a + d).collect();
                if let Some(fc) = residual(&cand) {
                    if sq(&fc) < f0 {
                        x = cand;
                        f = fc;
                        lambda = (lambda * 0.1).max(1e-15);
                        improved = true;
                        break;
                    }
                }
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    f.iter().all(|v| v.abs() <= tol).then_some(x)
}

/// Deterministic low-discrepancy (Kronecker) lattice in `[0,1)^dim`.
pub fn kronecker_lattice(count: usize, dim: usize) -> Vec<Vec<f64>> {
    // generalized golden ratio: positive root of x^(d+1) = x + 1
    let mut phi = 2.0f64;
    for _ in 0..64 {
        phi = (1.0 + phi).powf(1.0 / (dim as f64 + 1.0));
    }
    let alpha: Vec<f64> = (1..=dim).map(|j| (1.0 / phi.powi(j as i32)).fract()).collect();
    (1..=count)
        .map(|k| alpha.iter().map(|a| (0.5 + a * k as f64).fract()).collect())
        .collect()
}

/// Newton solve from one start over the given unknown vertices, the others frozen.
pub fn newton_from(
    problem: &Problem,
    start: &[f64],
    unknowns: &[usize],
    tol: f64,
    max_iters: usize,
) -> Option<Vec<f64>> {
    let full = |x: &[f64]| {
        let mut p = start.to_vec();
        for (k, &i) in unknowns.iter().enumerate() {
            p[i] = x[k];
        }
        p
    };
    let residual = |x: &[f64]| {
        let g = area::gradient(&problem.curves, &problem.configuration(&full(x))).ok()?;
        let r: Vec<f64> = unknowns.iter().map(|&i| g[i]).collect();
        r.iter().all(|v| v.is_finite()).then_some(r)
    };
    let jacobian = |x: &[f64]| {
        let h = area::hessian(&problem.curves, &problem.configuration(&full(x))).ok()?;
        Some(h.to_dense().principal(unknowns))
    };
    let x0: Vec<f64> = unknowns.iter().map(|&i| start[i]).collect();
    let x = newton_system(&residual, &jacobian, &x0, NewtonOptions { tol, max_iters })?;
    Some(full(&x))
}

/// Classify a configuration whose gradient on `unknowns` vanishes.
pub fn classify_critical(problem: &Problem, params: &[f64], unknowns: &[usize]) -> Result<CriticalPolygon> {
    let config = problem.configuration(params);
    let grad = area::gradient(&problem.curves, &config)?;
    let grad_norm = unknowns.iter().fold(0.0f64, |m, &i| m.max(grad[i].abs()));
    let hessian = area::hessian(&problem.curves, &config)?;
    let reduced_hessian = hessian.to_dense().principal(unknowns);
    let morse = morse::classify(&reduced_hessian);
    let pts = config.points(&problem.curves)?;
    let scale = pts.iter().fold(1.0f64, |m, p| m.max(p.norm()));
    let mut flags: Vec<DegeneracyFlag> = Configuration::small_diagonals(&pts)
        .iter()
        .enumerate()
        .filter(|(_, d)| d.norm() <= 1e-8 * scale)
        .map(|(vertex, _)| DegeneracyFlag::CoincidingNeighbors { vertex })
        .collect();
    if morse.nullity > 0 {
        flags.push(DegeneracyFlag::ZeroEigenvalues { count: morse.nullity });
    }
    Ok(CriticalPolygon {
        area: area::polygon_signed_area(&pts),
        config,
        grad_norm,
        hessian,
        unknowns: unknowns.to_vec(),
        reduced_hessian,
        morse,
        flags,
    })
}

/// Unknown vertices under the given gauge.
pub fn unknown_vertices(problem: &Problem, gauge: Gauge) -> Vec<usize> {
    let mut free = problem.free_vertices();
    if gauge == Gauge::FixFirstParameter && !free.is_empty() {
        free.remove(0);
    }
    free
}

/// All critical polygons reachable from a deterministic lattice of starts.
///
/// Starts that fail to converge are dropped. Results are wrapped into each
/// curve's fundamental domain, deduplicated at `dedup_tol` and returned in
/// lexicographic order of their parameters, independent of scheduling.
pub fn find_critical(problem: &Problem, settings: &SolverSettings) -> Result<Vec<CriticalPolygon>> {
    settings.validate()?;
    let n = problem.n();
    if problem.free_vertices().iter().any(|&i| problem.curve_of(i).is_piecewise()) {
        return Err(Error::InvalidInput("find_critical needs smooth curves; use check_critical_piecewise".into()));
    }
    let unknowns = unknown_vertices(problem, settings.gauge);
    let mut base = vec![0.0; n];
    if settings.gauge == Gauge::FixFirstParameter {
        if let Some(&first) = problem.free_vertices().first() {
            base[first] = settings.gauge_value;
        }
    }
    if unknowns.is_empty() {
        return Ok(vec![classify_critical(problem, &base, &unknowns)?]);
    }
    let ranges: Vec<(f64, f64)> = unknowns.iter().map(|&i| problem.curve_of(i).search_range()).collect();
    let lattice = kronecker_lattice(settings.starts, unknowns.len());
    let solved: Vec<Option<Vec<f64>>> = lattice
        .par_iter()
        .map(|u| {
            let mut start = base.clone();
            for (k, &i) in unknowns.iter().enumerate() {
                let (lo, hi) = ranges[k];
                start[i] = lo + (hi - lo) * u[k];
            }
            let sol = newton_from(problem, &start, &unknowns, settings.newton_tol, settings.max_iters)?;
            let wrapped: Vec<f64> = sol.iter().enumerate().map(|(i, &t)| problem.curve_of(i).wrap(t)).collect();
            // wrapping perturbs in the last bits; polish back under the tolerance
            newton_from(problem, &wrapped, &unknowns, settings.newton_tol, 3)
        })
        .collect();
    let mut found: Vec<Vec<f64>> = solved.into_iter().flatten().collect();
    found.sort_by(|a, b| {
        a.iter().zip(b).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut kept: Vec<Vec<f64>> = Vec::new();
    for p in found {
        let dup = kept.iter().any(|q| {
            unknowns.iter().all(|&i| problem.param_distance(i, p[i], q[i]) < settings.dedup_tol)
        });
        if !dup {
            kept.push(p);
        }
    }
    kept.iter().map(|p| classify_critical(problem, p, &unknowns)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// `P_{i+1} = P_{i−1}`.
    Coincident,
    /// Tangent parallel to the small diagonal.
    Parallel,
    /// Small diagonal inside the tangent cone at a breakpoint.
    InCone,
    /// Point curve: no condition.
    Fixed,
    Neither,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VertexVerdict {
    pub branch: Branch,
    /// `|Tᵢ × D̂ᵢ|` for the parallel test, `|Dᵢ|` for coincidences, the cone
    /// violation for breakpoints.
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriticalityReport {
    pub vertices: Vec<VertexVerdict>,
}

impl CriticalityReport {
    pub fn is_critical(&self) -> bool {
        self.vertices.iter().all(|v| v.branch != Branch::Neither)
    }
}

fn coincidence(d: Vec2, scale: f64, tol: f64) -> Option<VertexVerdict> {
    (d.norm() <= tol * scale).then_some(VertexVerdict { branch: Branch::Coincident, residual: d.norm() })
}

/// Per-vertex test of the smooth criticality condition: either the two
/// neighbours coincide or the tangent is parallel to the small diagonal.
pub fn check_critical_smooth(curves: &[Curve], config: &Configuration, tol: f64) -> Result<CriticalityReport> {
    let pts = config.points(curves)?;
    let diag = Configuration::small_diagonals(&pts);
    let scale = pts.iter().fold(1.0f64, |m, p| m.max(p.norm()));
    let vertices = (0..config.len())
        .map(|i| {
            let c = config.curve(curves, i)?;
            if c.is_point() {
                return Ok(VertexVerdict { branch: Branch::Fixed, residual: 0.0 });
            }
            if let Some(v) = coincidence(diag[i], scale, tol) {
                return Ok(v);
            }
            let t = config.vertices[i].t;
            if c.is_breakpoint(t) {
                return Err(Error::Nonsmooth { vertex: i });
            }
            let tan = c.d1(t)?.normalized();
            let r = tan.cross(diag[i].normalized()).abs();
            Ok(VertexVerdict { branch: if r <= tol { Branch::Parallel } else { Branch::Neither }, residual: r })
        })
        .collect::<Result<_>>()?;
    Ok(CriticalityReport { vertices })
}

/// Criticality for piecewise smooth curves: at a breakpoint the condition is
/// `0 ∈ ch(T₋, T₊) × D`, i.e. the line of the small diagonal meets the
/// tangent cone. Smooth vertices get the parallel test.
pub fn check_critical_piecewise(curves: &[Curve], config: &Configuration, tol: f64) -> Result<CriticalityReport> {
    let pts = config.points(curves)?;
    let diag = Configuration::small_diagonals(&pts);
    let scale = pts.iter().fold(1.0f64, |m, p| m.max(p.norm()));
    let vertices = (0..config.len())
        .map(|i| {
            let c = config.curve(curves, i)?;
            if c.is_point() {
                return Ok(VertexVerdict { branch: Branch::Fixed, residual: 0.0 });
            }
            if let Some(v) = coincidence(diag[i], scale, tol) {
                return Ok(v);
            }
            let t = config.vertices[i].t;
            let cone = c.one_sided_tangents(t)?;
            let d = diag[i].normalized();
            let c1 = cone.left_tangent.cross(d);
            let c2 = cone.right_tangent.cross(d);
            // distance of 0 from the segment [c1, c2]
            let violation = if c1.min(c2) > 0.0 {
                c1.min(c2)
            } else if c1.max(c2) < 0.0 {
                -c1.max(c2)
            } else {
                0.0
            };
            let branch = if violation > tol {
                Branch::Neither
            } else if cone.is_degenerate() {
                Branch::Parallel
            } else {
                Branch::InCone
            };
            Ok(VertexVerdict { branch, residual: violation })
        })
        .collect::<Result<_>>()?;
    Ok(CriticalityReport { vertices })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    fn square() -> Curve {
        Curve::polyline(
            vec![Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(1.0, 1.0), Vec2::new(0.0, 1.0)],
            true,
        )
        .unwrap()
    }

    #[test]
    fn lattice_is_deterministic_and_in_unit_cube() {
        let a = kronecker_lattice(100, 3);
        assert_eq!(a, kronecker_lattice(100, 3));
        assert!(a.iter().flatten().all(|&v| (0.0..1.0).contains(&v)));
    }

    #[test]
    fn settings_validation() {
        let s = SolverSettings { starts: 0, ..Default::default() };
        assert!(s.validate().is_err());
        let s = SolverSettings { newton_tol: -1.0, ..Default::default() };
        assert!(s.validate().is_err());
        assert!(SolverSettings::default().validate().is_ok());
    }

    #[test]
    fn equilateral_is_parallel_everywhere() {
        let curves = vec![Curve::unit_circle()];
        let cfg = Configuration::on_curve(0, &[0.0, TAU / 3.0, 2.0 * TAU / 3.0]).unwrap();
        let r = check_critical_smooth(&curves, &cfg, 1e-9).unwrap();
        assert!(r.vertices.iter().all(|v| v.branch == Branch::Parallel));
        assert!(r.is_critical());
    }

    #[test]
    fn zigzag_pentagon_mixes_branches() {
        let curves = vec![Curve::unit_circle()];
        let (a, b, c) = (0.0, TAU / 3.0, 2.0 * TAU / 3.0);
        let cfg = Configuration::on_curve(0, &[a, b, c, b, c]).unwrap();
        let r = check_critical_smooth(&curves, &cfg, 1e-9).unwrap();
        assert!(r.is_critical());
        let branches: Vec<Branch> = r.vertices.iter().map(|v| v.branch).collect();
        assert!(branches.contains(&Branch::Coincident));
        assert!(branches.contains(&Branch::Parallel));
    }

    #[test]
    fn perturbed_vertex_is_neither() {
        let curves = vec![Curve::unit_circle()];
        let cfg = Configuration::on_curve(0, &[0.0, TAU / 3.0 + 0.1, 2.0 * TAU / 3.0]).unwrap();
        let r = check_critical_smooth(&curves, &cfg, 1e-9).unwrap();
        assert!(!r.is_critical());
        assert_eq!(r.vertices[1].branch, Branch::Neither);
    }

    #[test]
    fn corner_in_cone_is_critical() {
        // triangle (0,0),(1,0),(1,1) on the unit square: all three at corners
        let cfg = Configuration::on_curve(0, &[0.0, 1.0, 2.0]).unwrap();
        let r = check_critical_piecewise(&[square()], &cfg, 1e-12).unwrap();
        assert!(r.is_critical());
        assert!(r.vertices.iter().all(|v| v.branch == Branch::InCone));
        // moving the apex off the corner along the right edge breaks criticality there
        let cfg = Configuration::on_curve(0, &[0.0, 1.0, 1.5]).unwrap();
        let r = check_critical_piecewise(&[square()], &cfg, 1e-12).unwrap();
        assert!(!r.is_critical());
    }

    #[test]
    fn piecewise_agrees_with_smooth_at_smooth_points() {
        let curves = vec![Curve::ellipse(Vec2::ZERO, 2.0, 1.0, 0.2)];
        for params in [[0.0, TAU / 3.0, 2.0 * TAU / 3.0], [0.1, 1.9, 3.7]] {
            let cfg = Configuration::on_curve(0, &params).unwrap();
            let s = check_critical_smooth(&curves, &cfg, 1e-9).unwrap();
            let p = check_critical_piecewise(&curves, &cfg, 1e-9).unwrap();
            assert_eq!(s.is_critical(), p.is_critical());
            for (a, b) in s.vertices.iter().zip(&p.vertices) {
                assert_eq!(a.branch, b.branch);
            }
        }
    }

    #[test]
    fn solver_rejects_polylines() {
        let p = Problem::on_single_curve(square(), 3).unwrap();
        assert!(find_critical(&p, &SolverSettings::default()).is_err());
    }

    #[test]
    fn three_lines_single_critical_point() {
        let lines = vec![
            Curve::line(Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0)),
            Curve::line(Vec2::new(3.0, 0.0), Vec2::new(-1.0, 1.2)),
            Curve::line(Vec2::new(0.0, 0.0), Vec2::new(0.4, 1.0)),
        ];
        let p = Problem::one_per_vertex(lines).unwrap();
        let found = find_critical(&p, &SolverSettings { starts: 32, ..Default::default() }).unwrap();
        assert_eq!(found.len(), 1);
        assert!(found[0].grad_norm <= 1e-10);
    }

    #[test]
    fn point_curves_are_not_unknowns() {
        let curves = vec![Curve::unit_circle(), Curve::point(Vec2::new(3.0, 0.0)), Curve::circle(Vec2::new(0.0, 3.0), 1.0)];
        let p = Problem::one_per_vertex(curves).unwrap();
        assert_eq!(unknown_vertices(&p, Gauge::None), vec![0, 2]);
        assert_eq!(unknown_vertices(&p, Gauge::FixFirstParameter), vec![2]);
        let found = find_critical(&p, &SolverSettings { starts: 64, ..Default::default() }).unwrap();
        assert!(!found.is_empty());
        for c in &found {
            assert_eq!(c.reduced_hessian.dim(), 2);
            assert!(c.grad_norm <= 1e-10);
        }
    }
}

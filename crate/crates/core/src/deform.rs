//! Problem modifications with predictable index changes: zigzag insertion,
//! growing point curves into small circles, and Morsification by random
//! translations.

use rand::Rng;

use crate::area::{self, Configuration, CurveId, Vertex};
use crate::curves::Curve;
use crate::error::{Error, Result};
use crate::solver::{self, classify_critical, find_critical, newton_from, CriticalPolygon, Problem, SolverSettings};
use crate::vec2::Vec2;

/// Insert the pair `Pᵢ₋₁Pᵢ` right after `Pᵢ` (`at = i`, zero based):
/// `… Pᵢ₋₁ Pᵢ Pᵢ₋₁ Pᵢ Pᵢ₊₁ …`. The copies sit on the same curves and
/// parameters as the originals.
pub fn add_zigzag(config: &Configuration, at: usize) -> Result<Configuration> {
    let n = config.len();
    if at >= n {
        return Err(Error::InvalidInput(format!("vertex {at} out of range for {n}-gon")));
    }
    let prev = config.vertices[(at + n - 1) % n];
    let cur = config.vertices[at];
    let mut v: Vec<Vertex> = config.vertices.clone();
    v.splice(at + 1..at + 1, [prev, cur]);
    Configuration::new(v)
}

/// Circle through `p`, tangent there to `d`, centre `p + r·d̂⊥`, traversed
/// counterclockwise by angle with `C(0) = p`. The dependence on the signed
/// radius is smooth through `r = 0`: `C′(0) = r·d̂` and `C″(0) = r·d̂⊥`.
pub fn signed_radius_circle(p: Vec2, d: Vec2, r: f64) -> Result<Curve> {
    if d.norm() == 0.0 {
        return Err(Error::InvalidInput("zero tangent direction".into()));
    }
    let center = p + d.normalized().perp() * r;
    let phase = if r > 0.0 { (-d.normalized().perp()).angle() } else { d.normalized().perp().angle() };
    Ok(Curve::circle(center, r.abs()).reparametrized(phase, 1.0))
}

/// Result of replacing point curves by circles.
#[derive(Clone, Debug)]
pub struct Grown {
    pub problem: Problem,
    /// The original polygon in the new parameters.
    pub params: Vec<f64>,
}

/// Replace the point curves at vertices `at` by circles of signed radius
/// `radii`, tangent at the point to the line parallel to the small diagonal.
/// A zero radius keeps the point. The polygon stays critical; a circle with
/// its centre left of `Pᵢ₊₁ − Pᵢ₋₁` (`r > 0`) gives `aᵢ < 0`.
pub fn grow_tangent_circle(problem: &Problem, params: &[f64], at: &[usize], radii: &[f64]) -> Result<Grown> {
    if at.len() != radii.len() {
        return Err(Error::InvalidInput("one radius per grown vertex".into()));
    }
    let config = problem.configuration(params);
    let pts = config.points(&problem.curves)?;
    let diag = Configuration::small_diagonals(&pts);
    let mut curves = problem.curves.clone();
    let mut assignment = problem.assignment.clone();
    let mut params = params.to_vec();
    for (&i, &r) in at.iter().zip(radii) {
        if i >= problem.n() {
            return Err(Error::InvalidInput(format!("vertex {i} out of range")));
        }
        if !problem.curve_of(i).is_point() {
            return Err(Error::InvalidInput(format!("vertex {i} is not on a point curve")));
        }
        if r == 0.0 {
            continue;
        }
        if diag[i].norm() < 1e-12 {
            return Err(Error::ZeroDiagonal { vertex: i });
        }
        curves.push(signed_radius_circle(pts[i], diag[i], r)?);
        assignment[i] = CurveId(curves.len() - 1);
        params[i] = 0.0;
    }
    Ok(Grown { problem: Problem::new(curves, assignment)?, params })
}

/// Predicted index increase for one tangent circle of signed radius `r`.
pub fn tangent_birth_shift(r: f64) -> usize {
    usize::from(r > 0.0)
}

/// Smallest `|sin|` of the angle between `Pᵢ₋₁Pᵢ₊₁` and `PᵢPᵢ₊₂` over all `i`,
/// with the vertex where it occurs.
pub fn transversality(points: &[Vec2]) -> (usize, f64) {
    let n = points.len();
    (0..n)
        .map(|i| {
            let u = points[(i + 1) % n] - points[(i + n - 1) % n];
            let v = points[(i + 2) % n] - points[i];
            let s = if u.norm() == 0.0 || v.norm() == 0.0 { 0.0 } else { u.normalized().cross(v.normalized()).abs() };
            (i, s)
        })
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .unwrap_or((0, 0.0))
}

/// Threshold on `|sin|` for [`transversality`].
pub const TRANSVERSALITY_TOL: f64 = 1e-6;

/// Grow the point curve at vertex `at` into the circle of radius `r` centred
/// at the point, and return the two critical polygons that appear within
/// ambient distance `10r` of the original, ordered by index.
pub fn grow_centered_circle(problem: &Problem, params: &[f64], at: usize, r: f64) -> Result<Vec<CriticalPolygon>> {
    if !(r > 0.0) {
        return Err(Error::InvalidInput("radius must be positive".into()));
    }
    if at >= problem.n() || !problem.curve_of(at).is_point() {
        return Err(Error::InvalidInput(format!("vertex {at} is not on a point curve")));
    }
    let pts = problem.configuration(params).points(&problem.curves)?;
    let (vertex, sin) = transversality(&pts);
    if sin <= TRANSVERSALITY_TOL {
        return Err(Error::Transversality { vertex, sin });
    }
    let mut curves = problem.curves.clone();
    let mut assignment = problem.assignment.clone();
    curves.push(Curve::circle(pts[at], r));
    assignment[at] = CurveId(curves.len() - 1);
    let grown = Problem::new(curves, assignment)?;
    let unknowns = grown.free_vertices();
    let settings = SolverSettings::default();
    let mut found: Vec<Vec<f64>> = Vec::new();
    for k in 0..32 {
        let mut start = params.to_vec();
        start[at] = std::f64::consts::TAU * k as f64 / 32.0;
        let Some(sol) = newton_from(&grown, &start, &unknowns, settings.newton_tol, settings.max_iters) else {
            continue;
        };
        let sol: Vec<f64> = sol.iter().enumerate().map(|(i, &t)| grown.curve_of(i).wrap(t)).collect();
        let near = grown
            .configuration(&sol)
            .points(&grown.curves)?
            .iter()
            .zip(&pts)
            .all(|(p, q)| p.distance(*q) <= 10.0 * r);
        if near && !found.iter().any(|f| unknowns.iter().all(|&i| grown.param_distance(i, f[i], sol[i]) < settings.dedup_tol)) {
            found.push(sol);
        }
    }
    if found.len() != 2 {
        return Err(Error::CountMismatch { expected: 2, found: found.len() });
    }
    let mut out = found.iter().map(|p| classify_critical(&grown, p, &unknowns)).collect::<Result<Vec<_>>>()?;
    out.sort_by_key(|c| c.morse.index);
    Ok(out)
}

/// Before/after summary of a random translation.
#[derive(Clone, Debug)]
pub struct MorsifyReport {
    pub problem: Problem,
    /// Translation of curve `k` is `shifts[k]·directions[k]`.
    pub shifts: Vec<f64>,
    pub before: Vec<CriticalPolygon>,
    pub after: Vec<CriticalPolygon>,
    /// Smallest `|λ|` over all reduced Hessians found.
    pub min_eigenvalue_before: Option<f64>,
    pub min_eigenvalue_after: Option<f64>,
}

fn min_eigen(found: &[CriticalPolygon]) -> Option<f64> {
    found.iter().filter_map(|c| c.morse.min_abs_eigenvalue()).min_by(f64::total_cmp)
}

/// Translate each curve by a deterministic multiple of its direction.
pub fn translate_curves(problem: &Problem, directions: &[Vec2], shifts: &[f64]) -> Result<Problem> {
    if directions.len() != problem.curves.len() || shifts.len() != problem.curves.len() {
        return Err(Error::InvalidInput("one direction and shift per curve".into()));
    }
    let curves = problem
        .curves
        .iter()
        .zip(directions.iter().zip(shifts))
        .map(|(c, (&d, &s))| if s == 0.0 { c.clone() } else { c.translated(d * s) })
        .collect();
    Problem::new(curves, problem.assignment.clone())
}

/// Translate curve `k` by `sₖ·dₖ` with `s` uniform in the ball `|s| ≤ rho`,
/// and compare the critical points before and after.
pub fn morsify_by_translation<R: Rng>(
    problem: &Problem,
    directions: &[Vec2],
    rho: f64,
    rng: &mut R,
    settings: &SolverSettings,
) -> Result<MorsifyReport> {
    let spans = directions.iter().enumerate().any(|(i, u)| directions[i + 1..].iter().any(|v| u.cross(*v).abs() > 1e-12));
    if !spans {
        return Err(Error::InvalidInput("translation directions must span the plane".into()));
    }
    let m = problem.curves.len();
    let shifts = if rho == 0.0 {
        vec![0.0; m]
    } else {
        loop {
            let s: Vec<f64> = (0..m).map(|_| rng.gen_range(-rho..=rho)).collect();
            if s.iter().map(|v| v * v).sum::<f64>() <= rho * rho {
                break s;
            }
        }
    };
    let moved = translate_curves(problem, directions, &shifts)?;
    let before = find_critical(problem, settings)?;
    let after = if rho == 0.0 { before.clone() } else { find_critical(&moved, settings)? };
    Ok(MorsifyReport {
        problem: moved,
        shifts,
        min_eigenvalue_before: min_eigen(&before),
        min_eigenvalue_after: min_eigen(&after),
        before,
        after,
    })
}

/// `1e-3 ×` the smallest pairwise distance between vertices.
pub fn default_small_radius(points: &[Vec2]) -> f64 {
    let mut d = f64::INFINITY;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            d = d.min(points[i].distance(points[j]));
        }
    }
    1e-3 * d
}

/// Gradient of the original polygon after growth, for checking that the
/// tangency construction keeps it critical.
pub fn grown_gradient(grown: &Grown) -> Result<Vec<f64>> {
    let unknowns = solver::unknown_vertices(&grown.problem, solver::Gauge::None);
    let g = area::gradient(&grown.problem.curves, &grown.problem.configuration(&grown.params))?;
    Ok(unknowns.iter().map(|&i| g[i]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morse;
    use crate::special::star_params;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn three_circles_and_point() -> (Problem, Vec<f64>) {
        let curves = vec![
            Curve::circle(Vec2::new(0.0, 0.0), 1.0),
            Curve::circle(Vec2::new(4.0, 0.5), 1.2),
            Curve::circle(Vec2::new(2.5, 3.5), 0.8),
            Curve::point(Vec2::new(-1.5, 3.0)),
        ];
        let p = Problem::one_per_vertex(curves).unwrap();
        let found = find_critical(&p, &SolverSettings { starts: 256, ..Default::default() }).unwrap();
        let c = found
            .iter()
            .filter(|c| c.is_morse() && transversality(&c.config.points(&p.curves).unwrap()).1 > 1e-3)
            .max_by(|a, b| a.area.total_cmp(&b.area))
            .expect("a Morse critical point");
        (p.clone(), c.config.params())
    }

    #[test]
    fn zigzag_inserts_pair_and_keeps_area() {
        let curves = vec![Curve::unit_circle()];
        let cfg = Configuration::on_curve(0, &star_params(5, 2, 0.1)).unwrap();
        let z = add_zigzag(&cfg, 2).unwrap();
        assert_eq!(z.len(), 7);
        let t: Vec<f64> = z.params();
        let o = cfg.params();
        assert_eq!(t, vec![o[0], o[1], o[2], o[1], o[2], o[3], o[4]]);
        let a0 = area::signed_area(&curves, &cfg).unwrap();
        let a1 = area::signed_area(&curves, &z).unwrap();
        assert!((a0 - a1).abs() < 1e-12);
        let g = area::gradient(&curves, &z).unwrap();
        assert!(g.iter().all(|v| v.abs() < 1e-12));
        assert!(add_zigzag(&cfg, 5).is_err());
    }

    #[test]
    fn zigzag_raises_index() {
        let curves = vec![Curve::ellipse(Vec2::ZERO, 2.0, 1.0, 0.3)];
        let cfg = Configuration::on_curve(0, &star_params(5, 2, 0.4)).unwrap();
        let idx: Vec<usize> = (1..5).collect();
        let h = area::hessian(&curves, &cfg).unwrap().to_dense().principal(&idx);
        let mu = morse::eigen_index(&h, None);
        assert!(mu.is_morse());
        let z = add_zigzag(&cfg, 4).unwrap();
        let idx: Vec<usize> = (1..7).collect();
        let hz = area::hessian(&curves, &z).unwrap().to_dense().principal(&idx);
        let mz = morse::eigen_index(&hz, None);
        assert!(mz.is_morse());
        assert_eq!(mz.index, mu.index + 1);
        let zz = add_zigzag(&z, 6).unwrap();
        let idx: Vec<usize> = (1..9).collect();
        let hzz = area::hessian(&curves, &zz).unwrap().to_dense().principal(&idx);
        assert_eq!(morse::eigen_index(&hzz, None).index, mu.index + 2);
    }

    #[test]
    fn signed_radius_circle_geometry() {
        let p = Vec2::new(1.0, 2.0);
        let d = Vec2::new(3.0, 1.0);
        for r in [0.5, -0.5] {
            let c = signed_radius_circle(p, d, r).unwrap();
            assert!(c.eval(0.0).unwrap().distance(p) < 1e-12);
            let d1 = c.d1(0.0).unwrap();
            assert!((d1 - d.normalized() * r).norm() < 1e-12);
            assert!((c.d2(0.0).unwrap() - d.normalized().perp() * r).norm() < 1e-12);
        }
    }

    #[test]
    fn tangent_circles_shift_index_by_side() {
        let (p, params) = three_circles_and_point();
        let base = classify_critical(&p, &params, &p.free_vertices()).unwrap();
        for (r, shift) in [(1e-3, 1), (-1e-3, 0)] {
            let g = grow_tangent_circle(&p, &params, &[3], &[r]).unwrap();
            let grad = grown_gradient(&g).unwrap();
            assert!(grad[3].abs() < 1e-12);
            assert!(grad.iter().all(|v| v.abs() <= 1e-10));
            let c = classify_critical(&g.problem, &g.params, &g.problem.free_vertices()).unwrap();
            assert!(c.is_morse());
            assert_eq!(c.index(), base.index() + shift);
            assert_eq!(tangent_birth_shift(r), shift);
        }
        let g = grow_tangent_circle(&p, &params, &[3], &[0.0]).unwrap();
        assert!(g.problem.curve_of(3).is_point());
    }

    #[test]
    fn centered_circle_births_two() {
        let (p, params) = three_circles_and_point();
        let base = classify_critical(&p, &params, &p.free_vertices()).unwrap();
        for r in [1e-2, 1e-3] {
            let two = grow_centered_circle(&p, &params, 3, r).unwrap();
            assert_eq!(two.len(), 2);
            assert_eq!(two[0].index(), base.index());
            assert_eq!(two[1].index(), base.index() + 1);
        }
    }

    #[test]
    fn centered_circle_requires_point() {
        let (p, params) = three_circles_and_point();
        assert!(grow_centered_circle(&p, &params, 0, 1e-2).is_err());
        assert!(grow_centered_circle(&p, &params, 3, -1.0).is_err());
    }

    #[test]
    fn transversality_detects_parallel() {
        // square: P₀P₂ ∥ P₁P₃? no, diagonals are orthogonal
        let sq = [Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(1.0, 1.0), Vec2::new(0.0, 1.0)];
        assert!((transversality(&sq).1 - 1.0).abs() < 1e-12);
        let tri = [Vec2::new(0.0, 0.0), Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0)];
        // for a triangle P_{i-1}P_{i+1} and P_iP_{i+2} = P_iP_{i-1} meet at P_{i-1}
        assert!(transversality(&tri).1 > 0.5);
    }

    #[test]
    fn zero_translation_is_identity() {
        let curves = vec![Curve::unit_circle(), Curve::circle(Vec2::new(3.0, 0.0), 1.0), Curve::circle(Vec2::new(1.0, 3.0), 1.5)];
        let p = Problem::one_per_vertex(curves).unwrap();
        let dirs = [Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0), Vec2::new(1.0, 1.0)];
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let s = SolverSettings { starts: 64, ..Default::default() };
        let r = morsify_by_translation(&p, &dirs, 0.0, &mut rng, &s).unwrap();
        assert_eq!(r.shifts, vec![0.0; 3]);
        assert_eq!(r.before.len(), r.after.len());
        let bad = [Vec2::new(1.0, 0.0); 3];
        assert!(morsify_by_translation(&p, &bad, 0.1, &mut rng, &s).is_err());
    }

    #[test]
    fn default_radius() {
        let pts = [Vec2::ZERO, Vec2::new(2.0, 0.0), Vec2::new(0.0, 0.5)];
        assert!((default_small_radius(&pts) - 5e-4).abs() < 1e-15);
    }
}

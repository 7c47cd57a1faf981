use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use slidearea::area::{self, Configuration};
use slidearea::curves::{Curve, CustomCurve, Orientation};
use slidearea::deform;
use slidearea::morse;
use slidearea::solver::{self, find_critical, Problem, SolverSettings};
use slidearea::special;
use slidearea::{Mat2, Vec2};

fn random_analytic(rng: &mut ChaCha8Rng, kind: usize) -> Curve {
    let center = Vec2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
    let orientation = if rng.gen_bool(0.5) { Orientation::Ccw } else { Orientation::Cw };
    match kind {
        0 => Curve::line(center, Vec2::polar(rng.gen_range(0.0..TAU)) * rng.gen_range(0.5..2.0)),
        1 => Curve::Circle { center, radius: rng.gen_range(0.3..2.0), orientation },
        _ => {
            let a = rng.gen_range(0.5..2.5);
            Curve::Ellipse { center, semi_axes: (a, rng.gen_range(0.2..a)), rotation: rng.gen_range(0.0..TAU), orientation }
        }
    }
}

#[test]
fn derivatives_match_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let h = 1e-5;
    for kind in 0..3 {
        for _ in 0..100 {
            let c = random_analytic(&mut rng, kind);
            let t = rng.gen_range(-3.0..3.0);
            for order in 1..=3 {
                let lower = |s: f64| if order == 1 { c.eval(s).unwrap() } else { c.derivative(s, order - 1).unwrap() };
                let fd = (lower(t + h) - lower(t - h)) / (2.0 * h);
                let exact = c.derivative(t, order).unwrap();
                assert!((fd - exact).norm() <= 1e-6 * exact.norm().max(1.0), "kind {kind} order {order}");
            }
            if kind > 0 {
                let k = c.curvature_data(t).unwrap();
                assert!((k.tangent.cross(k.normal) - 1.0).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn cubic_reparametrization_of_circle() {
    let c = Curve::circle(Vec2::new(0.5, -1.0), 1.3);
    let inner = c.clone();
    let d = c.clone();
    let e = c.clone();
    let composed = Curve::custom(CustomCurve::new(
        move |s| inner.eval(s.powi(3) + s).unwrap(),
        move |s| d.d1(s.powi(3) + s).unwrap() * (3.0 * s * s + 1.0),
        move |s| {
            let t = s.powi(3) + s;
            e.d2(t).unwrap() * (3.0 * s * s + 1.0).powi(2) + e.d1(t).unwrap() * (6.0 * s)
        },
    ));
    for k in 0..50 {
        let s = -1.5 + 3.0 * k as f64 / 49.0;
        let t = s.powi(3) + s;
        assert!(composed.eval(s).unwrap().distance(c.eval(t).unwrap()) < 1e-12);
        // curvature is a geometric invariant
        let a = composed.curvature_data(s).unwrap().kappa;
        let b = c.curvature_data(t).unwrap().kappa;
        assert!((a - b).abs() < 1e-10);
    }
}

#[test]
fn line_intersections_lie_on_line() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let kind = rng.gen_range(1..3);
        let c = random_analytic(&mut rng, kind);
        let p = Vec2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let dir = Vec2::polar(rng.gen_range(0.0..TAU));
        for t in c.line_intersections(p, dir, None).unwrap() {
            assert!(dir.cross(c.eval(t).unwrap() - p).abs() < 1e-10);
        }
    }
}

/// Parameter at arc length `s` from `t0`, by Newton on a Simpson arc-length integral.
fn arc_param(c: &Curve, t0: f64, s: f64) -> f64 {
    let speed = |t: f64| c.d1(t).unwrap().norm();
    let length = |t: f64| {
        let n = 64;
        let h = (t - t0) / n as f64;
        let mut acc = speed(t0) + speed(t);
        for k in 1..n {
            acc += speed(t0 + h * k as f64) * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        acc * h / 3.0
    };
    let mut t = t0 + s / speed(t0);
    for _ in 0..30 {
        let step = (length(t) - s) / speed(t);
        t -= step;
        if step.abs() < 1e-15 {
            break;
        }
    }
    t
}

fn check_third_jet(curves: &[Curve], cfg: &Configuration, rng: &mut ChaCha8Rng) {
    let jet = area::third_jet(curves, cfg).unwrap();
    let n = cfg.len();
    let t0 = cfg.params();
    let f = |u: &[f64], h: f64| {
        let t: Vec<f64> = (0..n).map(|i| arc_param(cfg.curve(curves, i).unwrap(), t0[i], h * u[i])).collect();
        area::signed_area(curves, &cfg.with_params(&t)).unwrap()
    };
    let h = 1e-2;
    for _ in 0..5 {
        let u: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let d = |h: f64| 3.0 * (f(&u, h) - f(&u, -h)) / h.powi(3);
        // Richardson step removes the h² error term
        let fd = (4.0 * d(h / 2.0) - d(h)) / 3.0;
        let exact = jet.cubic_form(&u);
        assert!((fd - exact).abs() < 1e-3 * exact.abs().max(1.0), "fd {fd} vs jet {exact}");
    }
    let pts = cfg.points(curves).unwrap();
    let diag = Configuration::small_diagonals(&pts);
    for i in 0..n {
        let j = (i + 1) % n;
        assert!((jet.a_iii[i] + jet.eps[i] * diag[i].norm() * jet.kappa_dot[i]).abs() < 1e-9);
        // the two couplings: −κᵢ cos αᵢ and +κᵢ₊₁ cos αᵢ
        assert!((jet.a_ii_next[i] + jet.kappa[i] * jet.alpha[i].cos()).abs() < 1e-10);
        assert!((jet.a_i_next_next[i] - jet.kappa[j] * jet.alpha[i].cos()).abs() < 1e-10);
    }
}

#[test]
fn third_jet_matches_finite_differences_on_ellipses() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..10 {
        let a = rng.gen_range(1.0..2.5);
        let e = Curve::ellipse(Vec2::new(0.2, 0.1), a, rng.gen_range(0.4..a * 0.9), rng.gen_range(0.0..TAU));
        let n = rng.gen_range(3..=5);
        let cfg = Configuration::on_curve(0, &special::star_params(n, 1, rng.gen_range(0.0..TAU))).unwrap();
        check_third_jet(&[e], &cfg, &mut rng);
    }
    // three distinct ellipses at solver-found critical triangles
    let curves = vec![
        Curve::ellipse(Vec2::new(0.0, 0.0), 1.5, 0.7, 0.3),
        Curve::ellipse(Vec2::new(4.0, 0.5), 1.0, 0.6, 1.1),
        Curve::ellipse(Vec2::new(1.5, 3.5), 1.2, 0.9, 2.0),
    ];
    let p = Problem::one_per_vertex(curves.clone()).unwrap();
    let found = find_critical(&p, &SolverSettings { starts: 128, ..Default::default() }).unwrap();
    assert!(!found.is_empty());
    for c in found.iter().take(4) {
        check_third_jet(&curves, &c.config, &mut rng);
    }
}

#[test]
fn couplings_are_not_symmetric_in_general() {
    // triangle on an ellipse: κ differs between consecutive vertices, so
    // −κᵢ cos αᵢ ≠ κᵢ₊₁ cos αᵢ up to sign
    let e = Curve::ellipse(Vec2::ZERO, 2.0, 1.0, 0.0);
    let cfg = Configuration::on_curve(0, &special::star_params(3, 1, 0.4)).unwrap();
    let jet = area::third_jet(std::slice::from_ref(&e), &cfg).unwrap();
    assert!((jet.a_ii_next[0] - jet.a_i_next_next[0]).abs() > 1e-3);
}

#[test]
fn solver_results_are_rigid_motion_invariant() {
    let curves = vec![
        Curve::circle(Vec2::new(0.0, 0.0), 1.0),
        Curve::ellipse(Vec2::new(4.0, 0.5), 1.2, 0.7, 0.4),
        Curve::circle(Vec2::new(1.5, 3.5), 0.8),
    ];
    let settings = SolverSettings { starts: 256, ..Default::default() };
    let p = Problem::one_per_vertex(curves.clone()).unwrap();
    let a = find_critical(&p, &settings).unwrap();
    let rot = Mat2::rotation(0.7);
    let shift = Vec2::new(-3.0, 2.0);
    let moved: Vec<Curve> = curves.iter().map(|c| c.transformed(rot, shift)).collect();
    let q = Problem::one_per_vertex(moved.clone()).unwrap();
    let b = find_critical(&q, &settings).unwrap();
    assert_eq!(a.len(), b.len());
    for c in &a {
        assert!(b.iter().any(|d| (0..3).all(|i| curves[i].param_distance(c.config.vertices[i].t, d.config.vertices[i].t) < 1e-6)));
    }
    // re-evaluated gradients honour the tolerance
    for c in a.iter().chain(&b) {
        let cs = if a.iter().any(|x| std::ptr::eq(x, c)) { &curves } else { &moved };
        let g = area::gradient(cs, &c.config).unwrap();
        assert!(g.iter().all(|v| v.abs() <= 1e-10));
    }
}

#[test]
fn solver_is_deterministic() {
    let curves = vec![Curve::unit_circle(), Curve::circle(Vec2::new(3.0, 0.0), 1.0), Curve::circle(Vec2::new(1.0, 2.5), 0.6)];
    let p = Problem::one_per_vertex(curves).unwrap();
    let s = SolverSettings { starts: 128, ..Default::default() };
    let a: Vec<Vec<f64>> = find_critical(&p, &s).unwrap().iter().map(|c| c.config.params()).collect();
    let b: Vec<Vec<f64>> = find_critical(&p, &s).unwrap().iter().map(|c| c.config.params()).collect();
    assert_eq!(a, b);
}

#[test]
fn index_invariant_under_reparametrization() {
    let curves = vec![
        Curve::circle(Vec2::new(0.0, 0.0), 1.0),
        Curve::ellipse(Vec2::new(4.0, 0.5), 1.2, 0.7, 0.4),
        Curve::circle(Vec2::new(1.5, 3.5), 0.8),
    ];
    let p = Problem::one_per_vertex(curves.clone()).unwrap();
    let found = find_critical(&p, &SolverSettings { starts: 128, ..Default::default() }).unwrap();
    for c in &found {
        let t = c.config.params();
        // monotone affine reparametrizations with the critical point at s = 0
        let re: Vec<Curve> = curves.iter().zip(&t).zip([0.5, -2.0, 3.0]).map(|((cv, &ti), k)| cv.reparametrized(ti, k)).collect();
        let cfg = Configuration::one_per_curve(&[0.0; 3]).unwrap();
        let h = area::hessian(&re, &cfg).unwrap().to_dense();
        assert_eq!(morse::eigen_index(&h, None).index, c.index());
    }
}

#[test]
fn determinant_expansion_in_the_radius() {
    // three circles and a point; grow the point into a tangent circle
    let curves = vec![
        Curve::circle(Vec2::new(0.0, 0.0), 1.0),
        Curve::circle(Vec2::new(4.0, 0.5), 1.2),
        Curve::circle(Vec2::new(2.5, 3.5), 0.8),
        Curve::point(Vec2::new(-1.5, 3.0)),
    ];
    let p = Problem::one_per_vertex(curves).unwrap();
    let found = find_critical(&p, &SolverSettings { starts: 256, ..Default::default() }).unwrap();
    let c = found.iter().find(|c| c.is_morse()).unwrap();
    let params = c.config.params();
    let pts = c.config.points(&p.curves).unwrap();
    let diag = Configuration::small_diagonals(&pts);
    let h_prev = area::hessian(&p.curves, &c.config).unwrap().to_dense().leading(3).det();
    let a_unit = -diag[3].norm();
    let det_at = |r: f64| {
        let g = deform::grow_tangent_circle(&p, &params, &[3], &[r]).unwrap();
        area::hessian(&g.problem.curves, &g.problem.configuration(&g.params)).unwrap().to_dense().det()
    };
    for h in [1e-4, 2e-4] {
        let slope = (det_at(h) - det_at(-h)) / (2.0 * h);
        let want = a_unit * h_prev;
        assert!((slope - want).abs() <= 0.01 * want.abs(), "{slope} vs {want}");
    }
}

#[test]
fn centered_births_converge_to_original() {
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
        .find(|c| c.is_morse() && deform::transversality(&c.config.points(&p.curves).unwrap()).1 > 1e-2)
        .unwrap();
    let params = c.config.params();
    let orig = c.config.points(&p.curves).unwrap();
    let mut last = f64::INFINITY;
    for r in [1e-2, 1e-3, 1e-4] {
        let two = deform::grow_centered_circle(&p, &params, 3, r).unwrap();
        let mut dist = 0.0f64;
        for cp in &two {
            let pts = cp.config.points(&cp_curves(&p, cp, r)).unwrap();
            for (a, b) in pts.iter().zip(&orig) {
                dist = dist.max(a.distance(*b));
            }
            // tangent of the small circle parallel to the chord P₃P₁
            let circ = Curve::circle(orig[3], r);
            let t = cp.config.vertices[3].t;
            let tan = circ.d1(t).unwrap().normalized();
            let chord = (pts[0] - pts[2]).normalized();
            assert!(tan.cross(chord).abs() < 1e-8);
        }
        assert!(dist < last);
        last = dist;
    }
}

fn cp_curves(p: &Problem, _c: &solver::CriticalPolygon, r: f64) -> Vec<Curve> {
    let mut curves = p.curves.clone();
    curves.push(Curve::circle(p.curve_of(3).eval(0.0).unwrap(), r));
    curves
}

#[test]
fn morsify_removes_degeneracy_of_incircle_family() {
    // equal-m circles at m = 2s all coincide with the incircle: a degenerate family
    let tri = [0.0, TAU / 3.0, 2.0 * TAU / 3.0].map(Vec2::polar);
    let s = area::polygon_signed_area(&tri);
    let l = Configuration::small_diagonals(&tri)[0].norm();
    let f = special::three_circles_frame(tri, [l.powi(3) / (2.0 * s); 3]).unwrap();
    let p = Problem::one_per_vertex(f.curves.clone()).unwrap();
    let dirs = [Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0), Vec2::new(1.0, 1.0)];
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let settings = SolverSettings { starts: 256, ..Default::default() };
    let report = deform::morsify_by_translation(&p, &dirs, 0.5, &mut rng, &settings).unwrap();
    assert!(report.before.iter().any(|c| !c.is_morse()));
    assert!(!report.after.is_empty());
    assert!(report.after.iter().all(|c| c.is_morse()), "{:?}", report.min_eigenvalue_after);
}

#[test]
fn morse_stays_under_small_translation() {
    let curves = vec![Curve::unit_circle(), Curve::ellipse(Vec2::new(3.5, 0.0), 1.0, 0.6, 0.3), Curve::circle(Vec2::new(1.0, 3.0), 0.7)];
    let p = Problem::one_per_vertex(curves).unwrap();
    let dirs = [Vec2::new(1.0, 0.0), Vec2::new(0.0, 1.0), Vec2::new(1.0, -1.0)];
    let settings = SolverSettings { starts: 256, ..Default::default() };
    let before = find_critical(&p, &settings).unwrap();
    assert!(before.iter().all(|c| c.is_morse()));
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let report = deform::morsify_by_translation(&p, &dirs, 1e-3, &mut rng, &settings).unwrap();
    assert_eq!(report.after.len(), before.len());
    assert!(report.after.iter().all(|c| c.is_morse()));
}

//! Parametric plane curves with analytic derivatives up to order three.
//!
//! Circles and ellipses are parametrized by angle, lines affinely, polylines
//! piecewise linearly with integer breakpoints. Arc-length quantities
//! (unit tangent, curvature, its arc-length derivative) come out of
//! [`Curve::curvature_data`] rather than from the parametrization itself.

use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::vec2::{Mat2, Vec2};

/// Orientation of a closed analytic curve. Counterclockwise is positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Orientation {
    #[default]
    Ccw,
    Cw,
}

impl Orientation {
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Ccw => 1.0,
            Orientation::Cw => -1.0,
        }
    }

    pub fn from_sign(s: f64) -> Self {
        if s < 0.0 {
            Orientation::Cw
        } else {
            Orientation::Ccw
        }
    }
}

/// Piecewise linear curve; edge `k` is traversed for `t ∈ [k, k+1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Polyline {
    pub vertices: Vec<Vec2>,
    pub closed: bool,
}

impl Polyline {
    pub fn new(vertices: Vec<Vec2>, closed: bool) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::InvalidInput("polyline needs at least two vertices".into()));
        }
        Ok(Self { vertices, closed })
    }

    pub fn edge_count(&self) -> usize {
        if self.closed {
            self.vertices.len()
        } else {
            self.vertices.len() - 1
        }
    }

    fn edge(&self, k: usize) -> (Vec2, Vec2) {
        let n = self.vertices.len();
        (self.vertices[k % n], self.vertices[(k + 1) % n])
    }
}

type ScalarMap = Arc<dyn Fn(f64) -> Vec2 + Send + Sync>;

/// User-supplied smooth curve given by closures for the point and its derivatives.
/// When `d3` is absent it is obtained by central differences of `d2` with `h = 1e-4`.
#[derive(Clone)]
pub struct CustomCurve {
    pub eval: ScalarMap,
    pub d1: ScalarMap,
    pub d2: ScalarMap,
    pub d3: Option<ScalarMap>,
    /// Period for closed curves, `None` for open ones (unbounded domain).
    pub period: Option<f64>,
}

impl CustomCurve {
    pub fn new(
        eval: impl Fn(f64) -> Vec2 + Send + Sync + 'static,
        d1: impl Fn(f64) -> Vec2 + Send + Sync + 'static,
        d2: impl Fn(f64) -> Vec2 + Send + Sync + 'static,
    ) -> Self {
        Self { eval: Arc::new(eval), d1: Arc::new(d1), d2: Arc::new(d2), d3: None, period: None }
    }

    pub fn with_d3(mut self, d3: impl Fn(f64) -> Vec2 + Send + Sync + 'static) -> Self {
        self.d3 = Some(Arc::new(d3));
        self
    }

    pub fn with_period(mut self, period: f64) -> Self {
        self.period = Some(period);
        self
    }
}

impl fmt::Debug for CustomCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomCurve")
            .field("has_d3", &self.d3.is_some())
            .field("period", &self.period)
            .finish()
    }
}

/// Affine image of a curve under an affine reparametrization:
/// `s ↦ linear·inner(offset + scale·s) + shift`.
#[derive(Clone, Debug)]
pub struct MappedCurve {
    pub inner: Curve,
    pub linear: Mat2,
    pub shift: Vec2,
    pub offset: f64,
    pub scale: f64,
}

#[derive(Clone, Debug)]
pub enum Curve {
    /// `base + t·dir`.
    Line { base: Vec2, dir: Vec2 },
    /// `center + radius·(cos σt, sin σt)` with σ the orientation sign.
    Circle { center: Vec2, radius: f64, orientation: Orientation },
    /// `center + R(rotation)·(a cos σt, b sin σt)`.
    Ellipse { center: Vec2, semi_axes: (f64, f64), rotation: f64, orientation: Orientation },
    /// Constant curve; its parameter is ignored.
    Point(Vec2),
    Polyline(Polyline),
    Custom(CustomCurve),
    Mapped(Box<MappedCurve>),
}

/// Unit tangent frame and curvature at a smooth point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvatureData {
    /// Signed curvature `(C' × C'') / |C'|³`.
    pub kappa: f64,
    pub tangent: Vec2,
    /// `tangent.perp()`, so that `T × N = 1`.
    pub normal: Vec2,
    /// `dκ/ds`, derivative of curvature with respect to arc length.
    pub kappa_dot: f64,
    /// `|C'|`.
    pub speed: f64,
}

/// Closed convex cone spanned by the one-sided tangents at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TangentCone {
    pub apex: Vec2,
    /// Incoming unit tangent `T₋`.
    pub left_tangent: Vec2,
    /// Outgoing unit tangent `T₊`.
    pub right_tangent: Vec2,
}

impl TangentCone {
    pub fn is_degenerate(&self) -> bool {
        self.left_tangent.distance(self.right_tangent) < 1e-14
    }

    /// `v = α T₋ + β T₊` with `α, β ≥ -tol·|v|`.
    pub fn contains(&self, v: Vec2, tol: f64) -> bool {
        let (l, r) = (self.left_tangent, self.right_tangent);
        let vn = v.norm();
        if vn == 0.0 {
            return true;
        }
        let den = l.cross(r);
        if den.abs() < 1e-12 {
            // Ray (or a straight pass-through, where T₋ = T₊).
            return l.cross(v).abs() <= tol * vn && l.dot(v) >= -tol * vn;
        }
        let alpha = v.cross(r) / den;
        let beta = l.cross(v) / den;
        alpha >= -tol * vn && beta >= -tol * vn
    }

    /// Whether the unoriented line direction `±v` lies in the cone.
    pub fn contains_line(&self, v: Vec2, tol: f64) -> bool {
        self.contains(v, tol) || self.contains(-v, tol)
    }
}

const BREAK_EPS: f64 = 1e-12;

impl Curve {
    pub fn line(base: Vec2, dir: Vec2) -> Self {
        Curve::Line { base, dir }
    }

    pub fn circle(center: Vec2, radius: f64) -> Self {
        Curve::Circle { center, radius, orientation: Orientation::Ccw }
    }

    pub fn unit_circle() -> Self {
        Self::circle(Vec2::ZERO, 1.0)
    }

    pub fn ellipse(center: Vec2, a: f64, b: f64, rotation: f64) -> Self {
        Curve::Ellipse { center, semi_axes: (a, b), rotation, orientation: Orientation::Ccw }
    }

    pub fn point(p: Vec2) -> Self {
        Curve::Point(p)
    }

    pub fn polyline(vertices: Vec<Vec2>, closed: bool) -> Result<Self> {
        Ok(Curve::Polyline(Polyline::new(vertices, closed)?))
    }

    pub fn custom(c: CustomCurve) -> Self {
        Curve::Custom(c)
    }

    /// Affine image `linear·C + shift`, same parameter.
    pub fn transformed(&self, linear: Mat2, shift: Vec2) -> Self {
        Curve::Mapped(Box::new(MappedCurve { inner: self.clone(), linear, shift, offset: 0.0, scale: 1.0 }))
    }

    pub fn translated(&self, shift: Vec2) -> Self {
        match self {
            Curve::Line { base, dir } => Curve::Line { base: *base + shift, dir: *dir },
            Curve::Circle { center, radius, orientation } => {
                Curve::Circle { center: *center + shift, radius: *radius, orientation: *orientation }
            }
            Curve::Ellipse { center, semi_axes, rotation, orientation } => Curve::Ellipse {
                center: *center + shift,
                semi_axes: *semi_axes,
                rotation: *rotation,
                orientation: *orientation,
            },
            Curve::Point(p) => Curve::Point(*p + shift),
            _ => self.transformed(Mat2::IDENTITY, shift),
        }
    }

    /// Reparametrize by `t = offset + scale·s`.
    pub fn reparametrized(&self, offset: f64, scale: f64) -> Self {
        Curve::Mapped(Box::new(MappedCurve {
            inner: self.clone(),
            linear: Mat2::IDENTITY,
            shift: Vec2::ZERO,
            offset,
            scale,
        }))
    }

    pub fn is_point(&self) -> bool {
        match self {
            Curve::Point(_) => true,
            Curve::Mapped(m) => m.inner.is_point(),
            _ => false,
        }
    }

    pub fn is_piecewise(&self) -> bool {
        match self {
            Curve::Polyline(_) => true,
            Curve::Mapped(m) => m.inner.is_piecewise(),
            _ => false,
        }
    }

    /// Period of a closed curve.
    pub fn period(&self) -> Option<f64> {
        match self {
            Curve::Circle { .. } | Curve::Ellipse { .. } => Some(TAU),
            Curve::Polyline(p) if p.closed => Some(p.edge_count() as f64),
            Curve::Custom(c) => c.period,
            Curve::Mapped(m) => m.inner.period().map(|p| p / m.scale.abs()),
            _ => None,
        }
    }

    pub fn is_closed(&self) -> bool {
        self.period().is_some()
    }

    /// Bounded parameter domain, if any (open polylines).
    pub fn bounded_domain(&self) -> Option<(f64, f64)> {
        match self {
            Curve::Polyline(p) if !p.closed => Some((0.0, p.edge_count() as f64)),
            Curve::Mapped(m) => m.inner.bounded_domain().map(|(lo, hi)| {
                let a = (lo - m.offset) / m.scale;
                let b = (hi - m.offset) / m.scale;
                (a.min(b), a.max(b))
            }),
            _ => None,
        }
    }

    /// Parameter window used to seed searches: one period, the bounded domain,
    /// or `[-4, 4]` for unbounded curves.
    pub fn search_range(&self) -> (f64, f64) {
        if let Some(p) = self.period() {
            (0.0, p)
        } else if let Some(d) = self.bounded_domain() {
            d
        } else {
            (-4.0, 4.0)
        }
    }

    /// Canonical representative of `t` (wrapped into `[0, period)` for closed curves).
    pub fn wrap(&self, t: f64) -> f64 {
        match self.period() {
            Some(p) => t.rem_euclid(p),
            None => t,
        }
    }

    /// Distance between parameters, modulo the period when closed.
    pub fn param_distance(&self, s: f64, t: f64) -> f64 {
        match self.period() {
            Some(p) => {
                let d = (s - t).rem_euclid(p);
                d.min(p - d)
            }
            None => (s - t).abs(),
        }
    }

    fn check_domain(&self, t: f64) -> Result<()> {
        if let Some((lo, hi)) = self.bounded_domain() {
            if t < lo - BREAK_EPS || t > hi + BREAK_EPS {
                return Err(Error::Domain { t, lo, hi });
            }
        }
        Ok(())
    }

    /// Whether `t` is a breakpoint of a piecewise curve.
    pub fn is_breakpoint(&self, t: f64) -> bool {
        match self {
            Curve::Polyline(p) => {
                let r = t.round();
                if (t - r).abs() > BREAK_EPS {
                    return false;
                }
                // Endpoints of an open polyline have only one side.
                p.closed || (r > 0.0 && r < p.edge_count() as f64)
            }
            Curve::Mapped(m) => m.inner.is_breakpoint(m.offset + m.scale * t),
            _ => false,
        }
    }

    pub fn eval(&self, t: f64) -> Result<Vec2> {
        self.check_domain(t)?;
        Ok(match self {
            Curve::Line { base, dir } => *base + *dir * t,
            Curve::Circle { center, radius, orientation } => {
                let a = orientation.sign() * t;
                *center + Vec2::polar(a) * *radius
            }
            Curve::Ellipse { center, semi_axes: (a, b), rotation, orientation } => {
                let s = orientation.sign() * t;
                *center + Mat2::rotation(*rotation).apply(Vec2::new(a * s.cos(), b * s.sin()))
            }
            Curve::Point(p) => *p,
            Curve::Polyline(p) => {
                let (k, u) = self.polyline_locate(p, t);
                let (a, b) = p.edge(k);
                a + (b - a) * u
            }
            Curve::Custom(c) => (c.eval)(t),
            Curve::Mapped(m) => m.linear.apply(m.inner.eval(m.offset + m.scale * t)?) + m.shift,
        })
    }

    fn polyline_locate(&self, p: &Polyline, t: f64) -> (usize, f64) {
        let m = p.edge_count();
        let t = if p.closed { t.rem_euclid(m as f64) } else { t.clamp(0.0, m as f64) };
        let k = (t.floor() as usize).min(m - 1);
        (k, t - k as f64)
    }

    /// Exact derivative of order 1..=3 at a smooth parameter.
    pub fn derivative(&self, t: f64, order: usize) -> Result<Vec2> {
        if !(1..=3).contains(&order) {
            return Err(Error::DerivativeOrder(order));
        }
        self.check_domain(t)?;
        if self.is_breakpoint(t) {
            return Err(Error::Breakpoint { t });
        }
        Ok(match self {
            Curve::Line { dir, .. } => {
                if order == 1 {
                    *dir
                } else {
                    Vec2::ZERO
                }
            }
            Curve::Circle { radius, orientation, .. } => {
                let sg = orientation.sign();
                let a = sg * t;
                let (s, c) = a.sin_cos();
                let v = match order {
                    1 => Vec2::new(-s, c) * sg,
                    2 => Vec2::new(-c, -s),
                    _ => Vec2::new(s, -c) * sg,
                };
                v * *radius
            }
            Curve::Ellipse { semi_axes: (a, b), rotation, orientation, .. } => {
                let sg = orientation.sign();
                let u = sg * t;
                let (s, c) = u.sin_cos();
                let v = match order {
                    1 => Vec2::new(-a * s, b * c) * sg,
                    2 => Vec2::new(-a * c, -b * s),
                    _ => Vec2::new(a * s, -b * c) * sg,
                };
                Mat2::rotation(*rotation).apply(v)
            }
            Curve::Point(_) => Vec2::ZERO,
            Curve::Polyline(p) => {
                if order == 1 {
                    let (k, _) = self.polyline_locate(p, t);
                    let (a, b) = p.edge(k);
                    b - a
                } else {
                    Vec2::ZERO
                }
            }
            Curve::Custom(c) => match order {
                1 => (c.d1)(t),
                2 => (c.d2)(t),
                _ => match &c.d3 {
                    Some(d3) => d3(t),
                    None => {
                        let h = 1e-4;
                        ((c.d2)(t + h) - (c.d2)(t - h)) / (2.0 * h)
                    }
                },
            },
            Curve::Mapped(m) => {
                let inner = m.inner.derivative(m.offset + m.scale * t, order)?;
                m.linear.apply(inner) * m.scale.powi(order as i32)
            }
        })
    }

    pub fn d1(&self, t: f64) -> Result<Vec2> {
        self.derivative(t, 1)
    }

    pub fn d2(&self, t: f64) -> Result<Vec2> {
        self.derivative(t, 2)
    }

    pub fn d3(&self, t: f64) -> Result<Vec2> {
        self.derivative(t, 3)
    }

    /// Signed curvature, unit frame and `dκ/ds` at a smooth point.
    pub fn curvature_data(&self, t: f64) -> Result<CurvatureData> {
        let d1 = self.d1(t)?;
        let d2 = self.d2(t)?;
        let d3 = self.d3(t)?;
        let v = d1.norm();
        if v < 1e-12 {
            return Err(Error::SingularParametrization { t, speed: v });
        }
        let c = d1.cross(d2);
        let kappa = c / v.powi(3);
        let dv = d1.dot(d2) / v;
        let dkappa_dt = d1.cross(d3) / v.powi(3) - 3.0 * c * dv / v.powi(4);
        let tangent = d1 / v;
        Ok(CurvatureData { kappa, tangent, normal: tangent.perp(), kappa_dot: dkappa_dt / v, speed: v })
    }

    /// One-sided unit tangents. At a smooth point both sides coincide.
    pub fn one_sided_tangents(&self, t: f64) -> Result<TangentCone> {
        let apex = self.eval(t)?;
        if !self.is_breakpoint(t) {
            let d1 = self.d1(t)?;
            let v = d1.norm();
            if v < 1e-12 {
                return Err(Error::SingularParametrization { t, speed: v });
            }
            let tan = d1 / v;
            return Ok(TangentCone { apex, left_tangent: tan, right_tangent: tan });
        }
        let (tm, tp) = self.raw_one_sided(t)?;
        let (l, r) = (tm.normalized(), tp.normalized());
        if (l + r).norm() < 1e-12 {
            return Err(Error::UnsupportedCusp { t });
        }
        Ok(TangentCone { apex, left_tangent: l, right_tangent: r })
    }

    fn raw_one_sided(&self, t: f64) -> Result<(Vec2, Vec2)> {
        match self {
            Curve::Polyline(p) => {
                let m = p.edge_count() as i64;
                let r = t.round() as i64;
                let (kin, kout) = if p.closed {
                    ((r - 1).rem_euclid(m) as usize, r.rem_euclid(m) as usize)
                } else {
                    ((r - 1) as usize, r as usize)
                };
                let (a0, a1) = p.edge(kin);
                let (b0, b1) = p.edge(kout);
                Ok((a1 - a0, b1 - b0))
            }
            Curve::Mapped(m) => {
                let (a, b) = m.inner.raw_one_sided(m.offset + m.scale * t)?;
                let (a, b) = (m.linear.apply(a) * m.scale, m.linear.apply(b) * m.scale);
                Ok(if m.scale < 0.0 { (b, a) } else { (a, b) })
            }
            _ => {
                let d = self.d1(t)?;
                Ok((d, d))
            }
        }
    }

    /// Parameters where the line `p + λ·dir` meets the curve, sorted.
    ///
    /// Closed and bounded curves are sampled at 256 points; sign changes of
    /// `dir × (C(t) − p)` are bracketed and refined by bisection to `1e-12`,
    /// then polished with a few Newton steps. Roots within `1e-8` (parameter
    /// distance) of `exclude_near` are dropped.
    pub fn line_intersections(&self, p: Vec2, dir: Vec2, exclude_near: Option<f64>) -> Result<Vec<f64>> {
        if dir.norm() == 0.0 {
            return Err(Error::InvalidInput("zero line direction".into()));
        }
        let dir = dir.normalized();
        let mut roots = match self {
            Curve::Line { base, dir: d } => {
                let den = dir.cross(*d);
                if den.abs() < 1e-14 * d.norm() {
                    Vec::new()
                } else {
                    vec![-dir.cross(*base - p) / den]
                }
            }
            Curve::Point(q) => {
                if dir.cross(*q - p).abs() < 1e-12 {
                    vec![0.0]
                } else {
                    Vec::new()
                }
            }
            _ => {
                let (lo, hi) = match (self.period(), self.bounded_domain()) {
                    (Some(per), _) => (0.0, per),
                    (None, Some(d)) => d,
                    (None, None) => {
                        return Err(Error::InvalidInput("unbounded custom curve: no intersection window".into()))
                    }
                };
                let f = |t: f64| self.eval(t).map(|c| dir.cross(c - p));
                find_roots(&f, lo, hi, 256, self.period().is_some())?
                    .into_iter()
                    .map(|t| self.polish_root(&f, t, dir))
                    .collect()
            }
        };
        if let Some(t0) = exclude_near {
            roots.retain(|&t| self.param_distance(t, t0) > 1e-8);
        }
        for r in roots.iter_mut() {
            *r = self.wrap(*r);
        }
        roots.sort_by(f64::total_cmp);
        roots.dedup_by(|a, b| (*a - *b).abs() < 1e-13);
        Ok(roots)
    }

    pub(crate) fn polish_root(&self, f: &dyn Fn(f64) -> Result<f64>, t: f64, dir: Vec2) -> f64 {
        let mut t = t;
        for _ in 0..3 {
            if self.is_breakpoint(t) {
                break;
            }
            let (Ok(ft), Ok(d)) = (f(t), self.d1(t)) else { break };
            let df = dir.cross(d);
            if df.abs() < 1e-12 {
                break;
            }
            let step = ft / df;
            if step.abs() > 1e-6 {
                break;
            }
            let cand = t - step;
            match f(cand) {
                Ok(fc) if fc.abs() <= ft.abs() => t = cand,
                _ => break,
            }
        }
        t
    }
}

/// Roots of a scalar function on `[lo, hi]`: `samples` uniform brackets,
/// bisection to `1e-12`. Exact zeros at sample points are kept.
pub(crate) fn find_roots(f: &dyn Fn(f64) -> Result<f64>, lo: f64, hi: f64, samples: usize, periodic: bool) -> Result<Vec<f64>> {
    let h = (hi - lo) / samples as f64;
    let pts: Vec<f64> = (0..=samples).map(|k| if k == samples { hi } else { lo + h * k as f64 }).collect();
    let vals: Vec<f64> = pts.iter().map(|&t| f(t)).collect::<Result<_>>()?;
    let mut roots = Vec::new();
    for k in 0..samples {
        let (a, b) = (pts[k], pts[k + 1]);
        let (fa, fb) = (vals[k], vals[k + 1]);
        if fa == 0.0 {
            roots.push(a);
            continue;
        }
        if fb == 0.0 {
            if k + 1 == samples && !periodic {
                roots.push(b);
            }
            continue;
        }
        if fa.signum() != fb.signum() {
            roots.push(bisect(f, a, b, fa)?);
        }
    }
    Ok(roots)
}

pub(crate) fn bisect(f: &dyn Fn(f64) -> Result<f64>, mut a: f64, mut b: f64, mut fa: f64) -> Result<f64> {
    while b - a > 1e-12 {
        let m = 0.5 * (a + b);
        let fm = f(m)?;
        if fm == 0.0 {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: Vec2, b: Vec2, tol: f64) -> bool {
        a.distance(b) <= tol
    }

    #[test]
    fn eval_examples() {
        assert!(close(Curve::unit_circle().eval(0.0).unwrap(), Vec2::new(1.0, 0.0), 1e-15));
        let p = Curve::point(Vec2::new(2.0, 3.0));
        assert_eq!(p.eval(17.0).unwrap(), Vec2::new(2.0, 3.0));
        let l = Curve::line(Vec2::ZERO, Vec2::new(1.0, 1.0));
        assert_eq!(l.eval(2.0).unwrap(), Vec2::new(2.0, 2.0));
    }

    #[test]
    fn open_polyline_domain_error() {
        let c = Curve::polyline(vec![Vec2::ZERO, Vec2::new(1.0, 0.0)], false).unwrap();
        assert!(matches!(c.eval(1.5), Err(Error::Domain { .. })));
        assert!(c.eval(0.5).is_ok());
    }

    #[test]
    fn derivative_examples() {
        assert!(close(Curve::unit_circle().d2(0.0).unwrap(), Vec2::new(-1.0, 0.0), 1e-15));
        let l = Curve::line(Vec2::ZERO, Vec2::new(1.0, 1.0));
        assert_eq!(l.d2(0.3).unwrap(), Vec2::ZERO);
        let e = Curve::ellipse(Vec2::ZERO, 2.0, 1.0, 0.0);
        assert!(close(e.d1(PI / 2.0).unwrap(), Vec2::new(-2.0, 0.0), 1e-15));
        assert!(matches!(l.derivative(0.0, 4), Err(Error::DerivativeOrder(4))));
    }

    #[test]
    fn polyline_breakpoint_rejects_derivative() {
        let sq = Curve::polyline(
            vec![Vec2::ZERO, Vec2::new(1.0, 0.0), Vec2::new(1.0, 1.0), Vec2::new(0.0, 1.0)],
            true,
        )
        .unwrap();
        assert!(matches!(sq.d1(2.0), Err(Error::Breakpoint { .. })));
        assert_eq!(sq.d1(2.5).unwrap(), Vec2::new(-1.0, 0.0));
    }

    #[test]
    fn curvature_examples() {
        let c = Curve::circle(Vec2::new(1.0, -2.0), 0.5);
        let k = c.curvature_data(0.7).unwrap();
        assert!((k.kappa - 2.0).abs() < 1e-14);
        assert!(k.kappa_dot.abs() < 1e-12);
        let l = Curve::line(Vec2::ZERO, Vec2::new(3.0, 1.0)).curvature_data(1.0).unwrap();
        assert_eq!(l.kappa, 0.0);
        assert_eq!(l.kappa_dot, 0.0);
        let e = Curve::ellipse(Vec2::ZERO, 2.0, 1.0, 0.0).curvature_data(0.0).unwrap();
        assert!((e.kappa - 2.0).abs() < 1e-14);
        // clockwise circle has negative curvature
        let cw = Curve::Circle { center: Vec2::ZERO, radius: 2.0, orientation: Orientation::Cw };
        assert!((cw.curvature_data(0.3).unwrap().kappa + 0.5).abs() < 1e-14);
    }

    #[test]
    fn ellipse_curvature_matches_tangent_turning_rate() {
        // κ = dθ/ds where θ is the tangent angle; central difference oracle.
        let e = Curve::ellipse(Vec2::new(0.3, 0.1), 2.0, 1.0, 0.4);
        for &t in &[0.0, 0.5, 1.3, 2.9] {
            let h = 1e-5;
            let th = |t: f64| e.d1(t).unwrap().angle();
            let dtheta = crate::vec2::wrap_pi(th(t + h) - th(t - h)) / (2.0 * h);
            let k = e.curvature_data(t).unwrap();
            assert!((k.kappa - dtheta / k.speed).abs() < 1e-8);
        }
    }

    #[test]
    fn singular_parametrization() {
        let c = Curve::unit_circle().reparametrized(0.0, 0.0);
        assert!(matches!(c.curvature_data(1.0), Err(Error::SingularParametrization { .. })));
    }

    #[test]
    fn one_sided_tangents_examples() {
        let sq = Curve::polyline(
            vec![Vec2::ZERO, Vec2::new(1.0, 0.0), Vec2::new(1.0, 1.0), Vec2::new(0.0, 1.0)],
            true,
        )
        .unwrap();
        let cone = sq.one_sided_tangents(2.0).unwrap();
        assert_eq!(cone.apex, Vec2::new(1.0, 1.0));
        assert_eq!(cone.left_tangent, Vec2::new(0.0, 1.0));
        assert_eq!(cone.right_tangent, Vec2::new(-1.0, 0.0));
        // smooth point: degenerate cone
        let c = Curve::unit_circle().one_sided_tangents(0.3).unwrap();
        assert!(c.is_degenerate());
        // straight pass-through breakpoint
        let st = Curve::polyline(vec![Vec2::ZERO, Vec2::new(1.0, 0.0), Vec2::new(2.0, 0.0)], false).unwrap();
        let c = st.one_sided_tangents(1.0).unwrap();
        assert_eq!(c.left_tangent, c.right_tangent);
        assert!(c.contains(Vec2::new(3.0, 0.0), 1e-12));
        assert!(!c.contains(Vec2::new(-3.0, 0.0), 1e-12));
        // antipodal
        let cusp = Curve::polyline(vec![Vec2::ZERO, Vec2::new(1.0, 0.0), Vec2::new(0.0, 0.0)], false).unwrap();
        assert!(matches!(cusp.one_sided_tangents(1.0), Err(Error::UnsupportedCusp { .. })));
    }

    #[test]
    fn cone_membership() {
        let cone = TangentCone {
            apex: Vec2::ZERO,
            left_tangent: Vec2::new(0.0, -1.0),
            right_tangent: Vec2::new(1.0, 0.0),
        };
        assert!(cone.contains(Vec2::new(1.0, -1.0), 1e-12));
        assert!(cone.contains(Vec2::new(0.0, -2.0), 1e-12));
        assert!(!cone.contains(Vec2::new(-1.0, -1.0), 1e-12));
        assert!(cone.contains_line(Vec2::new(-1.0, 1.0), 1e-12));
        assert!(!cone.contains_line(Vec2::new(1.0, 1.0), 1e-12));
    }

    #[test]
    fn intersections_examples() {
        let c = Curve::unit_circle();
        let r = c.line_intersections(Vec2::ZERO, Vec2::new(1.0, 0.0), None).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r[0].abs() < 1e-12 || (r[0] - TAU).abs() < 1e-12);
        assert!((r[1] - PI).abs() < 1e-12);
        assert!(c.line_intersections(Vec2::new(2.0, 0.0), Vec2::new(0.0, 1.0), None).unwrap().is_empty());
        let with_excl = c.line_intersections(Vec2::ZERO, Vec2::new(1.0, 0.0), Some(PI)).unwrap();
        assert_eq!(with_excl.len(), 1);
    }

    #[test]
    fn ellipse_diagonal_intersections() {
        let e = Curve::ellipse(Vec2::ZERO, 2.0, 1.0, 0.0);
        let dir = Vec2::new(1.0, 1.0);
        let r = e.line_intersections(Vec2::ZERO, dir, None).unwrap();
        assert_eq!(r.len(), 2);
        let (p, q) = (e.eval(r[0]).unwrap(), e.eval(r[1]).unwrap());
        assert!(close(p, -q, 1e-10));
        for t in r {
            assert!(dir.cross(e.eval(t).unwrap()).abs() < 1e-10);
        }
        // Independent oracle: on the line y = x the ellipse meets x = ±2/√5.
        let x = 2.0 / 5f64.sqrt();
        assert!((p.x.abs() - x).abs() < 1e-10);
    }

    #[test]
    fn mapped_derivatives_scale() {
        let c = Curve::unit_circle().reparametrized(0.2, 3.0);
        let d = c.d1(0.1).unwrap();
        let expect = Curve::unit_circle().d1(0.5).unwrap() * 3.0;
        assert!(close(d, expect, 1e-14));
        assert!((c.period().unwrap() - TAU / 3.0).abs() < 1e-15);
    }

    #[test]
    fn custom_curve_default_d3() {
        let c = Curve::custom(CustomCurve::new(
            |t: f64| Vec2::new(t.cos(), t.sin()),
            |t: f64| Vec2::new(-t.sin(), t.cos()),
            |t: f64| Vec2::new(-t.cos(), -t.sin()),
        ));
        let d3 = c.d3(0.4).unwrap();
        assert!(close(d3, Vec2::new(0.4f64.sin(), -0.4f64.cos()), 1e-8));
    }
}

//! The signed-area objective on a configuration of sliding vertices, its exact
//! gradient and corner-tridiagonal Hessian, the third-order jet in arc-length
//! coordinates, and the area of the tangential polygon.

use crate::curves::Curve;
use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::vec2::{line_intersection, Vec2};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurveId(pub usize);

/// A vertex `P = C(t)` on a registered curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vertex {
    pub curve: CurveId,
    pub t: f64,
}

impl Vertex {
    pub fn new(curve: usize, t: f64) -> Self {
        Self { curve: CurveId(curve), t }
    }
}

/// Ordered vertices `P₁ … Pₙ`; indices are cyclic modulo `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Configuration {
    pub vertices: Vec<Vertex>,
}

impl Configuration {
    pub fn new(vertices: Vec<Vertex>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::TooFewVertices(vertices.len()));
        }
        Ok(Self { vertices })
    }

    /// Vertex `i` on curve `i`.
    pub fn one_per_curve(params: &[f64]) -> Result<Self> {
        Self::new(params.iter().enumerate().map(|(i, &t)| Vertex::new(i, t)).collect())
    }

    /// All vertices on a single curve.
    pub fn on_curve(curve: usize, params: &[f64]) -> Result<Self> {
        Self::new(params.iter().map(|&t| Vertex::new(curve, t)).collect())
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn params(&self) -> Vec<f64> {
        self.vertices.iter().map(|v| v.t).collect()
    }

    /// Same curves, new parameters.
    pub fn with_params(&self, params: &[f64]) -> Self {
        assert_eq!(params.len(), self.len());
        Self {
            vertices: self.vertices.iter().zip(params).map(|(v, &t)| Vertex { curve: v.curve, t }).collect(),
        }
    }

    /// Cyclic relabeling: vertex `i` of the result is vertex `i + k` of `self`.
    pub fn rotated(&self, k: usize) -> Self {
        let mut v = self.vertices.clone();
        v.rotate_left(k % self.len());
        Self { vertices: v }
    }

    pub fn curve<'a>(&self, curves: &'a [Curve], i: usize) -> Result<&'a Curve> {
        let id = self.vertices[i].curve.0;
        curves.get(id).ok_or(Error::UnknownCurve(id))
    }

    pub fn points(&self, curves: &[Curve]) -> Result<Vec<Vec2>> {
        (0..self.len()).map(|i| self.curve(curves, i)?.eval(self.vertices[i].t)).collect()
    }

    /// Small diagonal `P_{i+1} − P_{i−1}` for every vertex.
    pub fn small_diagonals(points: &[Vec2]) -> Vec<Vec2> {
        let n = points.len();
        (0..n).map(|i| points[(i + 1) % n] - points[(i + n - 1) % n]).collect()
    }
}

/// `Σ Pᵢ × Pᵢ₊₁`, twice the signed area of a closed polygon.
pub fn polygon_signed_area(points: &[Vec2]) -> f64 {
    let n = points.len();
    (0..n).map(|i| points[i].cross(points[(i + 1) % n])).sum()
}

/// Twice the signed area of the polygon `P₁ … Pₙ`.
pub fn signed_area(curves: &[Curve], config: &Configuration) -> Result<f64> {
    Ok(polygon_signed_area(&config.points(curves)?))
}

/// `∂A/∂tᵢ = Cᵢ′ × (Pᵢ₊₁ − Pᵢ₋₁)`. Point curves contribute zero.
pub fn gradient(curves: &[Curve], config: &Configuration) -> Result<Vec<f64>> {
    let pts = config.points(curves)?;
    let diag = Configuration::small_diagonals(&pts);
    (0..config.len())
        .map(|i| {
            let c = config.curve(curves, i)?;
            let t = config.vertices[i].t;
            if c.is_breakpoint(t) {
                return Err(Error::Nonsmooth { vertex: i });
            }
            Ok(c.d1(t)?.cross(diag[i]))
        })
        .collect()
}

/// Symmetric matrix with diagonal `a` and cyclic off-diagonal `b`, where `b[i]`
/// couples `i` and `i+1` (and `b[n-1]` couples `n-1` and `0`).
#[derive(Clone, Debug, PartialEq)]
pub struct SymTridiagCorner {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl SymTridiagCorner {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Self {
        assert_eq!(a.len(), b.len());
        Self { a, b }
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    /// Dense expansion. For `n = 3` every off-diagonal pair is adjacent, so the
    /// three `b` entries fill the whole off-diagonal part without collisions.
    pub fn to_dense(&self) -> SymMatrix {
        let n = self.dim();
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            m.set(i, i, self.a[i]);
        }
        match n {
            0 | 1 => {}
            2 => {
                // both b's couple the same pair
                m.set_sym(0, 1, self.b[0] + self.b[1]);
            }
            _ => {
                for i in 0..n {
                    m.set_sym(i, (i + 1) % n, self.b[i]);
                }
            }
        }
        m
    }
}

/// Exact Hessian of the signed area:
/// `aᵢ = Cᵢ″ × (Cᵢ₊₁ − Cᵢ₋₁)`, `bᵢ = Cᵢ′ × Cᵢ₊₁′`.
pub fn hessian(curves: &[Curve], config: &Configuration) -> Result<SymTridiagCorner> {
    let n = config.len();
    let pts = config.points(curves)?;
    let diag = Configuration::small_diagonals(&pts);
    let mut d1 = Vec::with_capacity(n);
    let mut a = Vec::with_capacity(n);
    for i in 0..n {
        let c = config.curve(curves, i)?;
        let t = config.vertices[i].t;
        if c.is_breakpoint(t) {
            return Err(Error::Nonsmooth { vertex: i });
        }
        d1.push(c.d1(t)?);
        a.push(c.d2(t)?.cross(diag[i]));
    }
    let b = (0..n).map(|i| d1[i].cross(d1[(i + 1) % n])).collect();
    Ok(SymTridiagCorner::new(a, b))
}

/// Third-order partial derivatives of the area in arc-length coordinates.
///
/// Nonzero entries are `a_iii`, `a_{i,i,i+1} = ∂³A/∂sᵢ²∂sᵢ₊₁` and
/// `a_{i,i+1,i+1} = ∂³A/∂sᵢ∂sᵢ₊₁²`; every other third partial vanishes.
#[derive(Clone, Debug, PartialEq)]
pub struct ThirdJet {
    pub a_iii: Vec<f64>,
    /// `κᵢ Nᵢ × Tᵢ₊₁ = −κᵢ cos αᵢ`.
    pub a_ii_next: Vec<f64>,
    /// `Tᵢ × κᵢ₊₁ Nᵢ₊₁ = κᵢ₊₁ cos αᵢ`.
    pub a_i_next_next: Vec<f64>,
    /// `εᵢ = sign(Tᵢ · (Pᵢ₊₁ − Pᵢ₋₁))`.
    pub eps: Vec<f64>,
    /// `lᵢ = |Pᵢ₊₁ − Pᵢ₋₁|`.
    pub l: Vec<f64>,
    pub kappa: Vec<f64>,
    pub kappa_dot: Vec<f64>,
    /// Angle from `Tᵢ` to `Tᵢ₊₁`.
    pub alpha: Vec<f64>,
}

impl ThirdJet {
    /// `Σ_{ijk} a_ijk uᵢ uⱼ uₖ`, the third directional derivative along `u`.
    pub fn cubic_form(&self, u: &[f64]) -> f64 {
        let n = self.a_iii.len();
        (0..n)
            .map(|i| {
                let j = (i + 1) % n;
                self.a_iii[i] * u[i].powi(3)
                    + 3.0 * self.a_ii_next[i] * u[i] * u[i] * u[j]
                    + 3.0 * self.a_i_next_next[i] * u[i] * u[j] * u[j]
            })
            .sum()
    }

    /// Cubic Taylor term `cubic_form(u) / 3!`.
    pub fn taylor_term(&self, u: &[f64]) -> f64 {
        self.cubic_form(u) / 6.0
    }
}

/// Third jet at a (critical) configuration of smooth curves, using the
/// arc-length normalization at every vertex. A vanishing small diagonal
/// leaves `εᵢ` undefined and is reported as an error.
pub fn third_jet(curves: &[Curve], config: &Configuration) -> Result<ThirdJet> {
    let n = config.len();
    let pts = config.points(curves)?;
    let diag = Configuration::small_diagonals(&pts);
    let mut frames = Vec::with_capacity(n);
    for i in 0..n {
        let c = config.curve(curves, i)?;
        let t = config.vertices[i].t;
        if c.is_breakpoint(t) {
            return Err(Error::Nonsmooth { vertex: i });
        }
        frames.push(c.curvature_data(t)?);
    }
    let mut jet = ThirdJet {
        a_iii: vec![0.0; n],
        a_ii_next: vec![0.0; n],
        a_i_next_next: vec![0.0; n],
        eps: vec![0.0; n],
        l: vec![0.0; n],
        kappa: frames.iter().map(|f| f.kappa).collect(),
        kappa_dot: frames.iter().map(|f| f.kappa_dot).collect(),
        alpha: vec![0.0; n],
    };
    for i in 0..n {
        let f = &frames[i];
        let g = &frames[(i + 1) % n];
        let l = diag[i].norm();
        if l < 1e-12 {
            return Err(Error::ZeroDiagonal { vertex: i });
        }
        jet.l[i] = l;
        jet.eps[i] = if f.tangent.dot(diag[i]) >= 0.0 { 1.0 } else { -1.0 };
        // C‴ = κ̇N − κ²T for unit speed
        let c3 = f.normal * f.kappa_dot - f.tangent * f.kappa.powi(2);
        jet.a_iii[i] = c3.cross(diag[i]);
        jet.a_ii_next[i] = (f.normal * f.kappa).cross(g.tangent);
        jet.a_i_next_next[i] = f.tangent.cross(g.normal * g.kappa);
        jet.alpha[i] = f.tangent.cross(g.tangent).atan2(f.tangent.dot(g.tangent));
    }
    Ok(jet)
}

/// Vertices of the tangential polygon: `Pᵢ` is the intersection of the tangent
/// lines at `Qᵢ` and `Qᵢ₊₁`.
pub fn tangential_polygon(curves: &[Curve], config: &Configuration) -> Result<Vec<Vec2>> {
    let n = config.len();
    let q = config.points(curves)?;
    let tans = (0..n)
        .map(|i| config.curve(curves, i)?.d1(config.vertices[i].t))
        .collect::<Result<Vec<_>>>()?;
    (0..n)
        .map(|i| {
            let j = (i + 1) % n;
            line_intersection(q[i], tans[i], q[j], tans[j]).ok_or(Error::ParallelTangents(i, j))
        })
        .collect()
}

/// Twice the signed area of the tangential polygon.
pub fn tangential_area(curves: &[Curve], config: &Configuration) -> Result<f64> {
    Ok(polygon_signed_area(&tangential_polygon(curves, config)?))
}

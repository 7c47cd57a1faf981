//! Critical polygons of the signed-area function for vertices sliding on plane
//! curves: gradient, corner-tridiagonal Hessian and third-order jet, a
//! multi-start Newton solver, Morse index classification, closed-form special
//! families, index-changing deformations, and the inner-area, inner-perimeter
//! and outer-area billiards whose closed orbits are those critical polygons.

pub mod area;
pub mod billiards;
pub mod curves;
pub mod deform;
pub mod error;
pub mod linalg;
pub mod morse;
pub mod render;
pub mod solver;
pub mod special;
pub mod vec2;

pub use area::{Configuration, CurveId, SymTridiagCorner, ThirdJet, Vertex};
pub use curves::{Curve, CurvatureData, CustomCurve, Orientation, TangentCone};
pub use error::{Error, Result};
pub use linalg::SymMatrix;
pub use morse::MorseData;
pub use solver::{CriticalPolygon, Gauge, Problem, SolverSettings};
pub use vec2::{Mat2, Vec2};

use thiserror::Error;

/// Errors raised by curve evaluation, area calculus and the constructions built on them.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parameter {t} outside curve domain [{lo}, {hi}]")]
    Domain { t: f64, lo: f64, hi: f64 },
    #[error("parameter {t} is a breakpoint; use one-sided tangents")]
    Breakpoint { t: f64 },
    #[error("singular parametrization at t = {t} (|C'| = {speed:e})")]
    SingularParametrization { t: f64, speed: f64 },
    #[error("antipodal one-sided tangents at t = {t} (T- + T+ = 0)")]
    UnsupportedCusp { t: f64 },
    #[error("derivative order {0} not supported (expected 1..=3)")]
    DerivativeOrder(usize),
    #[error("unknown curve id {0}")]
    UnknownCurve(usize),
    #[error("configuration needs at least 3 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertex {vertex} sits at a breakpoint; use the piecewise criticality check")]
    Nonsmooth { vertex: usize },
    #[error("small diagonal at vertex {vertex} has zero length")]
    ZeroDiagonal { vertex: usize },
    #[error("tangent lines at vertices {0} and {1} are parallel")]
    ParallelTangents(usize, usize),
    #[error("degenerate family: {0}")]
    DegenerateFamily(String),
    #[error("no bifurcation: m1*m2 equals s^2")]
    NoBifurcation,
    #[error("curves are not concentric circles")]
    NotConcentric,
    #[error("vertices do not lie on a single circle")]
    NotOnSingleCircle,
    #[error("transversality fails at vertex {vertex} (|sin| = {sin:e})")]
    Transversality { vertex: usize, sin: f64 },
    #[error("expected {expected} nearby critical polygons, found {found}")]
    CountMismatch { expected: usize, found: usize },
    #[error("degenerate billiard step: {0}")]
    DegenerateStep(String),
    #[error("point is not strictly outside the table")]
    InsideTable,
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("empty scene")]
    EmptyScene,
}

pub type Result<T> = std::result::Result<T, Error>;

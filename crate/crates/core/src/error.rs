use thiserror::Error;

/// Errors raised by the geometry kernel and the tetrahedron routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("non-finite coordinate or scalar in input")]
    NonFinite,

    #[error("matrix is singular (|det| = {det:e}, floor = {floor:e})")]
    SingularMatrix { det: f64, floor: f64 },

    #[error("tetrahedron is degenerate (6V = {six_volume:e}, floor = {floor:e})")]
    DegenerateTetrahedron { six_volume: f64, floor: f64 },

    #[error("invalid edge lengths: {0}")]
    InvalidEdgeLengths(String),

    #[error("side lengths ({0}, {1}, {2}) violate the triangle inequality")]
    InvalidTriangle(f64, f64, f64),

    #[error("normal {index} is not a unit vector (|u| = {norm})")]
    NonUnitNormal { index: usize, norm: f64 },

    #[error("facet {index} has non-positive area {area}")]
    NonPositiveArea { index: usize, area: f64 },

    #[error("facet normals do not span 3-space")]
    DegenerateNormals,

    #[error("closure residual {residual:e} exceeds the accepted bound {bound:e}")]
    ClosureViolation { residual: f64, bound: f64 },

    #[error("generator gave up after {attempts} rejected attempts")]
    GenerationFailed { attempts: usize },

    #[error("parameters are not realizable as a tetrahedron: {0}")]
    NotRealizable(String),

    #[error("transformed edge length {0} is not positive")]
    NonPositiveEdge(f64),

    #[error("invalid reversible parameters: {0}")]
    InvalidParams(String),
}

pub type Result<T> = std::result::Result<T, GeometryError>;

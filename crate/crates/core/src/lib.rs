//! Tetrahedron analysis: reconstruction from facet normals and areas,
//! classification by facet congruence, and closed-form volume formulas
//! checked against determinant oracles.
//!
//! Modules:
//!
//! - [`linalg3`]: 3-vectors and 3×3 matrices (cross products, determinants, cofactors).
//! - [`tetra`]: the tetrahedron model, facet data, volumes, edge lengths and classification.
//! - [`minkowski`]: reconstruction from facet data and paired-area generators.
//! - [`heron_forms`]: Heron-style area and volume formulas, the reversible
//!   construction and the Regge actions.
//! - [`sweep`]: seeded invariant sweeps, parallel with the `parallel` feature.

// `!(x > 0.0)` is used on purpose so that NaN takes the rejecting branch
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod heron_forms;
pub mod linalg3;
pub mod minkowski;
pub mod sampling;
pub mod sweep;
pub mod tetra;

pub use error::{GeometryError, Result};
pub use heron_forms::{
    build_reversible, build_reversible_allow_degenerate, heron_triangle_area, isosceles_volume_sq,
    perimeter_pairing_implication, realizability, regge_transform, reversible_volume_sq,
    reversible_volume_sq_expanded, DegeneracyKind, RealizabilityVerdict, ReggeAction,
    ReversibleParams,
};
pub use linalg3::{Mat3, Vec3};
pub use minkowski::{
    closure_residual, generate_equiareal, generate_paired_area, reconstruct, uniqueness_check,
    ReconstructionReport,
};
pub use tetra::{
    cayley_menger_volume_sq, classify, classify_edge_lengths, edge_lengths, facet_data,
    facet_perimeters, facets, triangles_congruent, volume_from_vertices, Classification,
    EdgeLengths, FacetData, FacetPairing, FacetRecord, OppositePair, Tetrahedron, TriangleFacet,
    Verdict,
};

//! Inline-argument and JSON-file inputs.
//!
//! A file holds one object with exactly one of the keys `vertices`, `edges`,
//! `reversible` or `facets`; other keys are ignored so that JSON written by
//! `build` and `reconstruct` can be fed back in.

use std::path::Path;

use serde::Deserialize;
use tetrakit::{
    EdgeLengths, FacetData, FacetRecord, GeometryError, ReversibleParams, Tetrahedron, Vec3,
};

use crate::Failure;

/// A parsed geometric input.
#[derive(Debug, Clone)]
pub enum Input {
    Vertices(Tetrahedron),
    Edges(EdgeLengths),
    Reversible(ReversibleParams),
    /// Opposite-edge lengths `(a, b, c)` of an isosceles tetrahedron.
    Isosceles([f64; 3]),
    Facets(FacetData),
}

#[derive(Deserialize)]
struct RawEdges {
    e01: f64,
    e02: f64,
    e03: f64,
    e12: f64,
    e13: f64,
    e23: f64,
}

#[derive(Deserialize)]
struct RawReversible {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

#[derive(Deserialize)]
struct RawFacet {
    normal: [f64; 3],
    area: f64,
}

#[derive(Deserialize)]
struct RawFile {
    vertices: Option<Vec<[f64; 3]>>,
    edges: Option<RawEdges>,
    reversible: Option<RawReversible>,
    facets: Option<Vec<RawFacet>>,
}

pub fn parse_list(s: &str, expected: usize, what: &str) -> Result<Vec<f64>, Failure> {
    let values: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| Failure::usage(format!("--{what}: {e}")))?;
    if values.len() != expected {
        return Err(Failure::usage(format!(
            "--{what} expects {expected} comma-separated numbers, got {}",
            values.len()
        )));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Failure::usage(format!("--{what}: values must be finite")));
    }
    Ok(values)
}

pub fn vertices_from_list(v: &[f64]) -> Result<Tetrahedron, Failure> {
    let points: [[f64; 3]; 4] = std::array::from_fn(|i| [v[3 * i], v[3 * i + 1], v[3 * i + 2]]);
    Ok(Tetrahedron::from_points(points)?)
}

pub fn edges_from_list(v: &[f64]) -> Result<EdgeLengths, Failure> {
    Ok(EdgeLengths::from_array([
        v[0], v[1], v[2], v[3], v[4], v[5],
    ])?)
}

pub fn reversible_from_list(v: &[f64]) -> Result<ReversibleParams, Failure> {
    Ok(ReversibleParams::new(v[0], v[1], v[2], v[3])?)
}

/// Edge set of the isosceles tetrahedron with opposite pairs `(a, a), (b, b), (c, c)`.
pub fn isosceles_edges([a, b, c]: [f64; 3]) -> Result<EdgeLengths, Failure> {
    Ok(EdgeLengths::new(a, b, c, c, b, a)?)
}

fn facets_from_records(raw: Vec<RawFacet>) -> Result<FacetData, Failure> {
    let n = raw.len();
    let records: [RawFacet; 4] = raw
        .try_into()
        .map_err(|_| Failure::usage(format!("`facets` must have 4 entries, got {n}")))?;
    let mut out = [FacetRecord {
        normal: Vec3::ZERO,
        area: 0.0,
    }; 4];
    for (dst, r) in out.iter_mut().zip(records) {
        *dst = FacetRecord {
            normal: Vec3::try_from(r.normal)?,
            area: r.area,
        };
    }
    Ok(FacetData::new(out)?)
}

pub fn read_file(path: &Path) -> Result<Input, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    parse_json(&text)
}

pub fn parse_json(text: &str) -> Result<Input, Failure> {
    let raw: RawFile = serde_json::from_str(text)
        .map_err(|e| Failure::usage(format!("invalid input JSON: {e}")))?;
    let present = [
        raw.vertices.is_some(),
        raw.edges.is_some(),
        raw.reversible.is_some(),
        raw.facets.is_some(),
    ]
    .iter()
    .filter(|&&p| p)
    .count();
    if present != 1 {
        return Err(Failure::usage(
            "input JSON must contain exactly one of `vertices`, `edges`, `reversible`, `facets`",
        ));
    }
    if let Some(v) = raw.vertices {
        let n = v.len();
        let pts: [[f64; 3]; 4] = v
            .try_into()
            .map_err(|_| Failure::usage(format!("`vertices` must have 4 points, got {n}")))?;
        return Ok(Input::Vertices(Tetrahedron::from_points(pts)?));
    }
    if let Some(e) = raw.edges {
        return Ok(Input::Edges(EdgeLengths::new(
            e.e01, e.e02, e.e03, e.e12, e.e13, e.e23,
        )?));
    }
    if let Some(r) = raw.reversible {
        return Ok(Input::Reversible(ReversibleParams::new(
            r.a, r.b, r.c, r.d,
        )?));
    }
    let f = raw.facets.unwrap_or_default();
    Ok(Input::Facets(facets_from_records(f)?))
}

impl From<GeometryError> for Failure {
    fn from(e: GeometryError) -> Self {
        Failure::geometry(e)
    }
}

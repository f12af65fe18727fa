//! Tetrahedron data model: facets, facet normal/area data, volumes, edge
//! lengths and facet-congruence classification.
//!
//! Indexing follows one convention throughout: facet `f_i` is the triangle
//! opposite vertex `v_i`, `i ∈ {0, 1, 2, 3}`.

use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::heron_forms::heron_triangle_area;
use crate::linalg3::{Mat3, Vec3};

/// A tetrahedron is non-degenerate when `6V > DEGENERACY_FLOOR · (longest edge)³`.
pub const DEGENERACY_FLOOR: f64 = 1e-10;

/// Edge-only inputs are non-degenerate when the Cayley–Menger `V²` exceeds
/// `EDGE_DEGENERACY_FLOOR · (longest edge)⁶`. Coarser than [`DEGENERACY_FLOOR`]
/// because the squared-length determinant loses about that much precision.
pub const EDGE_DEGENERACY_FLOOR: f64 = 1e-12;

/// Default relative tolerance used by [`classify`].
pub const DEFAULT_CLASSIFY_TOL: f64 = 1e-9;

/// Vertex index pairs in the canonical edge order `e01, e02, e03, e12, e13, e23`.
pub const EDGE_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

fn other_three(i: usize) -> [usize; 3] {
    match i {
        0 => [1, 2, 3],
        1 => [0, 2, 3],
        2 => [0, 1, 3],
        3 => [0, 1, 2],
        _ => panic!("facet index {i} out of range"),
    }
}

fn edge_index(i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    EDGE_PAIRS
        .iter()
        .position(|&p| p == (i, j))
        .unwrap_or_else(|| panic!("no edge between vertices {i} and {j}"))
}

/// Four vertices in 3-space with positive orientation:
/// `det(v1 − v0, v2 − v0, v3 − v0) ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[Vec3; 4]", into = "[Vec3; 4]")]
pub struct Tetrahedron {
    v: [Vec3; 4],
}

impl Tetrahedron {
    /// Builds a non-degenerate tetrahedron. A negatively oriented vertex
    /// order is repaired by swapping `v2` and `v3`.
    pub fn new(vertices: [Vec3; 4]) -> Result<Self> {
        let t = Self::new_allow_degenerate(vertices);
        t.check_non_degenerate()?;
        Ok(t)
    }

    /// Like [`Tetrahedron::new`] but admits flat (zero-volume) tetrahedra.
    pub fn new_allow_degenerate(mut vertices: [Vec3; 4]) -> Self {
        if signed_six_volume(&vertices) < 0.0 {
            vertices.swap(2, 3);
        }
        Tetrahedron { v: vertices }
    }

    pub fn from_points(points: [[f64; 3]; 4]) -> Result<Self> {
        let mut v = [Vec3::ZERO; 4];
        for (dst, p) in v.iter_mut().zip(points) {
            *dst = Vec3::try_from(p)?;
        }
        Self::new(v)
    }

    /// Embeds six edge lengths as a tetrahedron with `v0` at the origin,
    /// `v1` on the positive x-axis and `v2` in the upper xy half-plane.
    pub fn from_edge_lengths(l: &EdgeLengths) -> Result<Self> {
        let [e01, e02, e03, e12, e13, e23] = l.as_array();
        let x2 = (e01 * e01 + e02 * e02 - e12 * e12) / (2.0 * e01);
        let y2_sq = e02 * e02 - x2 * x2;
        let x3 = (e01 * e01 + e03 * e03 - e13 * e13) / (2.0 * e01);
        if !(y2_sq > 0.0) {
            return Err(GeometryError::NotRealizable("facet f3 is flat".into()));
        }
        let y2 = y2_sq.sqrt();
        let y3 = (e02 * e02 + e03 * e03 - e23 * e23 - 2.0 * x2 * x3) / (2.0 * y2);
        let z3_sq = e03 * e03 - x3 * x3 - y3 * y3;
        if !(z3_sq > 0.0) {
            return Err(GeometryError::NotRealizable(
                "edge lengths do not close up in 3-space".into(),
            ));
        }
        Self::new([
            Vec3::ZERO,
            Vec3::new(e01, 0.0, 0.0),
            Vec3::new(x2, y2, 0.0),
            Vec3::new(x3, y3, z3_sq.sqrt()),
        ])
    }

    pub fn vertices(&self) -> [Vec3; 4] {
        self.v
    }

    pub fn vertex(&self, i: usize) -> Vec3 {
        self.v[i]
    }

    /// Matrix with columns `v1 − v0, v2 − v0, v3 − v0`.
    pub fn edge_matrix(&self) -> Mat3 {
        let o = self.v[0];
        Mat3::from_cols(self.v[1] - o, self.v[2] - o, self.v[3] - o)
    }

    pub fn longest_edge(&self) -> f64 {
        EDGE_PAIRS
            .iter()
            .map(|&(i, j)| self.v[i].distance(self.v[j]))
            .fold(0.0, f64::max)
    }

    pub fn six_volume(&self) -> f64 {
        signed_six_volume(&self.v)
    }

    pub fn is_degenerate(&self) -> bool {
        self.check_non_degenerate().is_err()
    }

    fn check_non_degenerate(&self) -> Result<()> {
        let six_volume = self.six_volume();
        let floor = DEGENERACY_FLOOR * self.longest_edge().powi(3);
        if six_volume > floor {
            Ok(())
        } else {
            Err(GeometryError::DegenerateTetrahedron { six_volume, floor })
        }
    }

    pub fn centroid(&self) -> Vec3 {
        self.v.iter().copied().sum::<Vec3>() * 0.25
    }

    pub fn translated(&self, t: Vec3) -> Tetrahedron {
        Tetrahedron {
            v: self.v.map(|p| p + t),
        }
    }

    /// Copy with `v0` moved to the origin.
    pub fn at_origin(&self) -> Tetrahedron {
        self.translated(-self.v[0])
    }

    pub fn scaled(&self, s: f64) -> Tetrahedron {
        Tetrahedron::new_allow_degenerate(self.v.map(|p| p * s))
    }

    /// Applies a linear map to every vertex. Orientation is repaired if the
    /// map reverses it.
    pub fn transformed(&self, m: &Mat3) -> Tetrahedron {
        Tetrahedron::new_allow_degenerate(self.v.map(|p| *m * p))
    }
}

impl TryFrom<[Vec3; 4]> for Tetrahedron {
    type Error = GeometryError;

    fn try_from(v: [Vec3; 4]) -> Result<Self> {
        Tetrahedron::new(v)
    }
}

impl From<Tetrahedron> for [Vec3; 4] {
    fn from(t: Tetrahedron) -> Self {
        t.v
    }
}

fn signed_six_volume(v: &[Vec3; 4]) -> f64 {
    let o = v[0];
    Mat3::from_cols(v[1] - o, v[2] - o, v[3] - o).det()
}

/// A triangular facet together with its index (the opposite vertex).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleFacet {
    pub index: usize,
    pub vertices: [Vec3; 3],
}

impl TriangleFacet {
    pub fn side_lengths(&self) -> [f64; 3] {
        let [p, q, r] = self.vertices;
        [p.distance(q), p.distance(r), q.distance(r)]
    }

    pub fn perimeter(&self) -> f64 {
        self.side_lengths().iter().sum()
    }

    /// Half the norm of the cross product of two edge vectors.
    pub fn area(&self) -> f64 {
        let [p, q, r] = self.vertices;
        0.5 * (q - p).cross(r - p).norm()
    }

    pub fn centroid(&self) -> Vec3 {
        let [p, q, r] = self.vertices;
        (p + q + r) * (1.0 / 3.0)
    }
}

/// Facet `f_i` holds the three vertices other than `v_i`, in increasing index order.
pub fn facets(t: &Tetrahedron) -> [TriangleFacet; 4] {
    std::array::from_fn(|i| TriangleFacet {
        index: i,
        vertices: other_three(i).map(|k| t.v[k]),
    })
}

/// Outward unit normal and area of one facet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FacetRecord {
    pub normal: Vec3,
    pub area: f64,
}

/// Tolerance on `|u_i| = 1` accepted by [`FacetData::new`].
pub const UNIT_NORMAL_TOL: f64 = 1e-9;

/// Absolute floor on the largest `|det(u_i, u_j, u_k)|` for the normals to span.
pub const SPAN_FLOOR: f64 = 1e-9;

/// The four (outward unit normal, area) pairs of a tetrahedron, indexed by facet.
///
/// The constructor checks unit normals, positive areas and spanning. The
/// closure identity `Σ α_i u_i = 0` is not enforced here so that residuals
/// of non-closing data can still be measured; reconstruction enforces it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[FacetRecord; 4]", into = "[FacetRecord; 4]")]
pub struct FacetData {
    records: [FacetRecord; 4],
}

impl FacetData {
    pub fn new(records: [FacetRecord; 4]) -> Result<Self> {
        for (index, r) in records.iter().enumerate() {
            let norm = r.normal.norm();
            if (norm - 1.0).abs() > UNIT_NORMAL_TOL {
                return Err(GeometryError::NonUnitNormal { index, norm });
            }
            if !(r.area > 0.0) || !r.area.is_finite() {
                return Err(GeometryError::NonPositiveArea {
                    index,
                    area: r.area,
                });
            }
        }
        let normals = records.map(|r| r.normal);
        if span_measure(&normals) <= SPAN_FLOOR {
            return Err(GeometryError::DegenerateNormals);
        }
        Ok(FacetData { records })
    }

    pub fn records(&self) -> [FacetRecord; 4] {
        self.records
    }

    pub fn record(&self, i: usize) -> FacetRecord {
        self.records[i]
    }

    pub fn normals(&self) -> [Vec3; 4] {
        self.records.map(|r| r.normal)
    }

    pub fn areas(&self) -> [f64; 4] {
        self.records.map(|r| r.area)
    }

    /// `Σ α_i u_i`.
    pub fn weighted_normal_sum(&self) -> Vec3 {
        self.records.iter().map(|r| r.normal * r.area).sum()
    }

    /// Same data with facets `i` and `j` relabeled.
    pub fn swapped(&self, i: usize, j: usize) -> FacetData {
        let mut records = self.records;
        records.swap(i, j);
        FacetData { records }
    }
}

impl TryFrom<[FacetRecord; 4]> for FacetData {
    type Error = GeometryError;

    fn try_from(r: [FacetRecord; 4]) -> Result<Self> {
        FacetData::new(r)
    }
}

impl From<FacetData> for [FacetRecord; 4] {
    fn from(d: FacetData) -> Self {
        d.records
    }
}

/// Largest `|det|` over the four triples of normals.
pub(crate) fn span_measure(normals: &[Vec3; 4]) -> f64 {
    (0..4)
        .map(|skip| {
            let [a, b, c] = other_three(skip).map(|k| normals[k]);
            Mat3::from_cols(a, b, c).det().abs()
        })
        .fold(0.0, f64::max)
}

/// Outward unit normals and areas of the four facets.
pub fn facet_data(t: &Tetrahedron) -> Result<FacetData> {
    t.check_non_degenerate()?;
    let records = facets(t).map(|f| {
        let [p, q, r] = f.vertices;
        let n = (q - p).cross(r - p);
        let twice_area = n.norm();
        // point away from the opposite vertex
        let n = if n.dot(t.v[f.index] - p) > 0.0 { -n } else { n };
        FacetRecord {
            normal: n * (1.0 / twice_area),
            area: 0.5 * twice_area,
        }
    });
    FacetData::new(records)
}

/// `det(v1 − v0, v2 − v0, v3 − v0) / 6`, non-negative by the orientation invariant.
pub fn volume_from_vertices(t: &Tetrahedron) -> f64 {
    t.six_volume() / 6.0
}

/// Which of the three pairs of opposite (non-incident) edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum OppositePair {
    /// `(e01, e23)`
    #[serde(rename = "e01=e23")]
    E01E23,
    /// `(e02, e13)`
    #[serde(rename = "e02=e13")]
    E02E13,
    /// `(e03, e12)`
    #[serde(rename = "e03=e12")]
    E03E12,
}

impl OppositePair {
    pub const ALL: [OppositePair; 3] = [
        OppositePair::E01E23,
        OppositePair::E02E13,
        OppositePair::E03E12,
    ];

    /// Canonical edge indices (into `EDGE_PAIRS`) of the two edges.
    pub fn edge_indices(self) -> (usize, usize) {
        match self {
            OppositePair::E01E23 => (0, 5),
            OppositePair::E02E13 => (1, 4),
            OppositePair::E03E12 => (2, 3),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            OppositePair::E01E23 => "e01=e23",
            OppositePair::E02E13 => "e02=e13",
            OppositePair::E03E12 => "e03=e12",
        }
    }
}

/// Six positive edge lengths `e01, e02, e03, e12, e13, e23` with `e_ij = |v_i − v_j|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeLengths {
    pub e01: f64,
    pub e02: f64,
    pub e03: f64,
    pub e12: f64,
    pub e13: f64,
    pub e23: f64,
}

/// Slack allowed on the weak triangle inequality, relative to the facet's longest side.
const TRIANGLE_SLACK: f64 = 1e-12;

impl EdgeLengths {
    pub fn new(e01: f64, e02: f64, e03: f64, e12: f64, e13: f64, e23: f64) -> Result<Self> {
        Self::from_array([e01, e02, e03, e12, e13, e23])
    }

    pub fn from_array(e: [f64; 6]) -> Result<Self> {
        if let Some(bad) = e.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
            return Err(GeometryError::InvalidEdgeLengths(format!(
                "edge length {bad} is not a positive finite number"
            )));
        }
        let l = EdgeLengths {
            e01: e[0],
            e02: e[1],
            e03: e[2],
            e12: e[3],
            e13: e[4],
            e23: e[5],
        };
        for i in 0..4 {
            let mut s = l.facet_sides(i);
            s.sort_by(|a, b| b.total_cmp(a));
            if s[0] > (s[1] + s[2]) + TRIANGLE_SLACK * s[0] {
                return Err(GeometryError::InvalidEdgeLengths(format!(
                    "facet f{i} sides {s:?} violate the triangle inequality"
                )));
            }
        }
        Ok(l)
    }

    pub fn as_array(&self) -> [f64; 6] {
        [self.e01, self.e02, self.e03, self.e12, self.e13, self.e23]
    }

    /// Length of the edge between vertices `i` and `j`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.as_array()[edge_index(i, j)]
    }

    pub fn max(&self) -> f64 {
        self.as_array().into_iter().fold(0.0, f64::max)
    }

    /// Side lengths of facet `f_i`.
    pub fn facet_sides(&self, i: usize) -> [f64; 3] {
        let [p, q, r] = other_three(i);
        [self.get(p, q), self.get(p, r), self.get(q, r)]
    }

    pub fn facet_perimeter(&self, i: usize) -> f64 {
        self.facet_sides(i).iter().sum()
    }

    pub fn opposite(&self, pair: OppositePair) -> (f64, f64) {
        let (i, j) = pair.edge_indices();
        let e = self.as_array();
        (e[i], e[j])
    }

    pub fn scaled(&self, s: f64) -> Result<EdgeLengths> {
        EdgeLengths::from_array(self.as_array().map(|e| e * s))
    }
}

pub fn edge_lengths(t: &Tetrahedron) -> EdgeLengths {
    let e = EDGE_PAIRS.map(|(i, j)| t.v[i].distance(t.v[j]));
    EdgeLengths {
        e01: e[0],
        e02: e[1],
        e03: e[2],
        e12: e[3],
        e13: e[4],
        e23: e[5],
    }
}

/// Determinant of a small dense matrix by Gaussian elimination with partial pivoting.
fn det_dense<const N: usize>(mut m: [[f64; N]; N]) -> f64 {
    let mut det = 1.0;
    for col in 0..N {
        let pivot = (col..N)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .unwrap_or(col);
        if m[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        for row in col + 1..N {
            let f = m[row][col] / m[col][col];
            for k in col..N {
                m[row][k] -= f * m[col][k];
            }
        }
    }
    det
}

/// `V²` from squared edge lengths through the bordered Cayley–Menger
/// determinant, `288 V² = det CM`.
///
/// Negative results mean the lengths do not embed in 3-space.
pub fn cayley_menger_volume_sq(l: &EdgeLengths) -> f64 {
    let mut m = [[0.0f64; 5]; 5];
    for k in 1..5 {
        m[0][k] = 1.0;
        m[k][0] = 1.0;
    }
    for &(i, j) in &EDGE_PAIRS {
        let d2 = l.get(i, j).powi(2);
        m[i + 1][j + 1] = d2;
        m[j + 1][i + 1] = d2;
    }
    det_dense(m) / 288.0
}

/// True iff the sorted side triples agree entrywise within relative tolerance `tol`.
pub fn triangles_congruent(t1: [f64; 3], t2: [f64; 3], tol: f64) -> bool {
    congruence_residual(t1, t2) <= tol
}

/// Largest relative mismatch between the sorted side triples.
pub fn congruence_residual(t1: [f64; 3], t2: [f64; 3]) -> f64 {
    let (mut a, mut b) = (t1, t2);
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    a.iter()
        .zip(&b)
        .map(|(&x, &y)| rel_diff(x, y))
        .fold(0.0, f64::max)
}

pub(crate) fn rel_diff(x: f64, y: f64) -> f64 {
    let scale = x.abs().max(y.abs());
    if scale == 0.0 {
        0.0
    } else {
        (x - y).abs() / scale
    }
}

/// Symmetry verdict, ordered from least to most specific.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Verdict {
    Generic,
    Reversible,
    Isosceles,
    Regular,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Generic => "Generic",
            Verdict::Reversible => "Reversible",
            Verdict::Isosceles => "Isosceles",
            Verdict::Regular => "Regular",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One of the three ways to split the four facets into two pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FacetPairing {
    /// `{(f0, f1), (f2, f3)}`
    #[serde(rename = "(f0,f1),(f2,f3)")]
    P01_23,
    /// `{(f0, f2), (f1, f3)}`
    #[serde(rename = "(f0,f2),(f1,f3)")]
    P02_13,
    /// `{(f0, f3), (f1, f2)}`
    #[serde(rename = "(f0,f3),(f1,f2)")]
    P03_12,
}

impl FacetPairing {
    pub const ALL: [FacetPairing; 3] = [
        FacetPairing::P01_23,
        FacetPairing::P02_13,
        FacetPairing::P03_12,
    ];

    pub fn pairs(self) -> [(usize, usize); 2] {
        match self {
            FacetPairing::P01_23 => [(0, 1), (2, 3)],
            FacetPairing::P02_13 => [(0, 2), (1, 3)],
            FacetPairing::P03_12 => [(0, 3), (1, 2)],
        }
    }

    /// The opposite-edge pair left unconstrained by this pairing. For
    /// `{(f_i, f_j), (f_k, f_l)}` it is `(e_kl, e_ij)`, the edges shared within each pair.
    pub fn free_opposite_pair(self) -> OppositePair {
        match self {
            FacetPairing::P01_23 => OppositePair::E01E23,
            FacetPairing::P02_13 => OppositePair::E02E13,
            FacetPairing::P03_12 => OppositePair::E03E12,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            FacetPairing::P01_23 => "(f0,f1),(f2,f3)",
            FacetPairing::P02_13 => "(f0,f2),(f1,f3)",
            FacetPairing::P03_12 => "(f0,f3),(f1,f2)",
        }
    }
}

/// Residuals of one pairing: relative side-length and area mismatch per pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PairingCheck {
    pub pairing: FacetPairing,
    pub congruence_residuals: [f64; 2],
    pub area_residuals: [f64; 2],
    pub passes: bool,
}

impl PairingCheck {
    pub fn max_congruence_residual(&self) -> f64 {
        self.congruence_residuals[0].max(self.congruence_residuals[1])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub verdict: Verdict,
    pub tol: f64,
    /// `(max − min) / max` over all six edges.
    pub regular_residual: f64,
    /// Largest relative mismatch within an opposite-edge pair.
    pub isosceles_residual: f64,
    /// All three pairings in canonical order, passing or not.
    pub pairings: [PairingCheck; 3],
}

impl Classification {
    /// Passing pairings in lexicographic facet order.
    pub fn passing_pairings(&self) -> Vec<FacetPairing> {
        self.pairings
            .iter()
            .filter(|p| p.passes)
            .map(|p| p.pairing)
            .collect()
    }

    /// Smallest congruence residual over the pairings.
    pub fn best_congruence_residual(&self) -> f64 {
        self.pairings
            .iter()
            .map(PairingCheck::max_congruence_residual)
            .fold(f64::INFINITY, f64::min)
    }

    pub fn pairing(&self, p: FacetPairing) -> &PairingCheck {
        &self.pairings[p as usize]
    }
}

/// Classifies a non-degenerate tetrahedron by facet congruence, reporting
/// the most specific verdict.
pub fn classify(t: &Tetrahedron, tol: f64) -> Result<Classification> {
    let areas = facet_data(t)?.areas();
    Ok(classify_parts(&edge_lengths(t), areas, tol))
}

/// Classification from edge lengths alone; facet areas come from Heron's formula.
pub fn classify_edge_lengths(l: &EdgeLengths, tol: f64) -> Result<Classification> {
    check_edge_realizable(l)?;
    let mut areas = [0.0; 4];
    for (i, a) in areas.iter_mut().enumerate() {
        let [x, y, z] = l.facet_sides(i);
        *a = heron_triangle_area(x, y, z)?;
    }
    Ok(classify_parts(l, areas, tol))
}

/// Fails with `DegenerateTetrahedron` unless the Cayley–Menger volume clears
/// [`EDGE_DEGENERACY_FLOOR`].
pub fn check_edge_realizable(l: &EdgeLengths) -> Result<f64> {
    let v2 = cayley_menger_volume_sq(l);
    let floor = EDGE_DEGENERACY_FLOOR * l.max().powi(6);
    if v2 > floor {
        Ok(v2)
    } else {
        Err(GeometryError::DegenerateTetrahedron {
            six_volume: 6.0 * v2.max(0.0).sqrt(),
            floor: 6.0 * floor.sqrt(),
        })
    }
}

fn classify_parts(l: &EdgeLengths, areas: [f64; 4], tol: f64) -> Classification {
    let e = l.as_array();
    let max = l.max();
    let min = e.iter().copied().fold(f64::INFINITY, f64::min);
    let regular_residual = (max - min) / max;
    let isosceles_residual = OppositePair::ALL
        .iter()
        .map(|&p| {
            let (x, y) = l.opposite(p);
            rel_diff(x, y)
        })
        .fold(0.0, f64::max);

    let pairings = FacetPairing::ALL.map(|pairing| {
        let [(i, j), (k, m)] = pairing.pairs();
        let congruence_residuals = [
            congruence_residual(l.facet_sides(i), l.facet_sides(j)),
            congruence_residual(l.facet_sides(k), l.facet_sides(m)),
        ];
        let area_residuals = [rel_diff(areas[i], areas[j]), rel_diff(areas[k], areas[m])];
        PairingCheck {
            pairing,
            congruence_residuals,
            area_residuals,
            passes: congruence_residuals.iter().all(|&r| r <= tol),
        }
    });

    let verdict = if regular_residual <= tol {
        Verdict::Regular
    } else if isosceles_residual <= tol {
        Verdict::Isosceles
    } else if pairings.iter().any(|p| p.passes) {
        Verdict::Reversible
    } else {
        Verdict::Generic
    };

    Classification {
        verdict,
        tol,
        regular_residual,
        isosceles_residual,
        pairings,
    }
}

/// Perimeters of `f0..f3`.
pub fn facet_perimeters(t: &Tetrahedron) -> [f64; 4] {
    facets(t).map(|f| f.perimeter())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: f64, y: f64, z: f64) -> Vec3 {
        Vec3::new(x, y, z)
    }

    pub(crate) fn corner() -> Tetrahedron {
        Tetrahedron::new([v(0., 0., 0.), v(1., 0., 0.), v(0., 1., 0.), v(0., 0., 1.)]).unwrap()
    }

    fn regular_on_cube() -> Tetrahedron {
        Tetrahedron::new([v(0., 0., 0.), v(1., 1., 0.), v(1., 0., 1.), v(0., 1., 1.)]).unwrap()
    }

    fn regular_unit() -> Tetrahedron {
        regular_on_cube().scaled(1.0 / 2f64.sqrt())
    }

    #[test]
    fn orientation_is_repaired() {
        let t = regular_on_cube();
        // the cube tetrahedron is given in negative order
        assert_eq!(t.vertex(2), v(0., 1., 1.));
        assert!(t.six_volume() > 0.0);
        assert!((volume_from_vertices(&t) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_rejected_unless_allowed() {
        let flat = [v(0., 0., 0.), v(1., 0., 0.), v(0., 1., 0.), v(1., 1., 0.)];
        assert!(matches!(
            Tetrahedron::new(flat),
            Err(GeometryError::DegenerateTetrahedron { .. })
        ));
        let t = Tetrahedron::new_allow_degenerate(flat);
        assert!(volume_from_vertices(&t).abs() <= 1e-14);
        assert!(facet_data(&t).is_err());
    }

    #[test]
    fn facets_follow_opposite_vertex_convention() {
        let t = corner();
        let f = facets(&t);
        assert_eq!(f[0].vertices, [v(1., 0., 0.), v(0., 1., 0.), v(0., 0., 1.)]);
        for (i, facet) in f.iter().enumerate() {
            assert_eq!(facet.index, i);
            assert!(!facet.vertices.contains(&t.vertex(i)));
        }
        for p in t.vertices() {
            assert_eq!(f.iter().filter(|fa| fa.vertices.contains(&p)).count(), 3);
        }
        for facet in facets(&regular_unit()) {
            for s in facet.side_lengths() {
                assert!((s - 1.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn corner_facet_data() {
        let d = facet_data(&corner()).unwrap();
        let r3 = d.record(3);
        assert!((r3.normal - v(0., 0., -1.)).norm() < 1e-15);
        assert!((r3.area - 0.5).abs() < 1e-15);
        assert!(d.weighted_normal_sum().norm() <= 1e-14);
        assert!((d.record(0).area - 3f64.sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn regular_facet_areas_match_heron() {
        let d = facet_data(&regular_on_cube()).unwrap();
        let s = 2f64.sqrt();
        let heron = heron_triangle_area(s, s, s).unwrap();
        assert!((heron - 3f64.sqrt() / 2.0).abs() < 1e-15);
        for a in d.areas() {
            assert!((a - heron).abs() < 1e-15);
        }
    }

    #[test]
    fn volumes() {
        assert!((volume_from_vertices(&corner()) - 1.0 / 6.0).abs() < 1e-16);
        assert!((volume_from_vertices(&regular_unit()) - 0.1178511301977579).abs() < 1e-15);
    }

    #[test]
    fn edge_length_examples() {
        let s = 2f64.sqrt();
        let l = edge_lengths(&corner());
        assert_eq!(l.as_array(), [1., 1., 1., s, s, s]);
        for e in edge_lengths(&regular_unit()).as_array() {
            assert!((e - 1.0).abs() < 1e-15);
        }
        let big = edge_lengths(&corner().scaled(3.0));
        for (a, b) in big.as_array().iter().zip(l.as_array()) {
            assert!((a - 3.0 * b).abs() < 1e-15);
        }
    }

    #[test]
    fn cayley_menger_examples() {
        let ones = EdgeLengths::from_array([1.0; 6]).unwrap();
        assert!((cayley_menger_volume_sq(&ones) - 1.0 / 72.0).abs() < 1e-15);
        let s = 2f64.sqrt();
        let c = EdgeLengths::new(1., 1., 1., s, s, s).unwrap();
        assert!((cayley_menger_volume_sq(&c) - 1.0 / 36.0).abs() < 1e-15);
        let twos = EdgeLengths::from_array([2.0; 6]).unwrap();
        assert!((cayley_menger_volume_sq(&twos) - 8.0 / 9.0).abs() < 1e-13);
    }

    #[test]
    fn cayley_menger_negative_for_non_embeddable() {
        // four facets each valid, but too long an opposite edge
        let l = EdgeLengths::new(1., 1., 1., 1., 1., 1.99).unwrap();
        assert!(cayley_menger_volume_sq(&l) < 0.0);
        assert!(check_edge_realizable(&l).is_err());
        assert!(Tetrahedron::from_edge_lengths(&l).is_err());
    }

    #[test]
    fn edge_lengths_validation() {
        assert!(EdgeLengths::new(1., 1., 1., 1., 1., 0.).is_err());
        assert!(EdgeLengths::new(1., 1., 1., 1., 1., -1.).is_err());
        assert!(EdgeLengths::new(1., 1., 5., 1., 1., 1.).is_err());
        // weak inequality: flat facets (1, 1, 2) are admitted
        assert!(EdgeLengths::new(1., 1., 2., 1., 1., 1.).is_ok());
        assert!(EdgeLengths::new(2., 1., 1., 1., 1., 1.).is_ok());
    }

    #[test]
    fn from_edge_lengths_reproduces_lengths() {
        let t = Tetrahedron::new([
            v(0.3, -1., 2.),
            v(1., 0.5, 0.),
            v(-1., 1., 0.2),
            v(0., 0., -1.),
        ])
        .unwrap();
        let l = edge_lengths(&t);
        let back = edge_lengths(&Tetrahedron::from_edge_lengths(&l).unwrap());
        for (a, b) in l.as_array().iter().zip(back.as_array()) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn congruence_examples() {
        assert!(triangles_congruent([3., 4., 5.], [5., 3., 4.], 1e-9));
        assert!(!triangles_congruent([3., 4., 5.], [3., 4., 5.001], 1e-9));
        assert!(triangles_congruent([1., 1., 1.], [1., 1., 1.], 1e-9));
    }

    #[test]
    fn classify_examples() {
        let c = classify(&regular_unit(), DEFAULT_CLASSIFY_TOL).unwrap();
        assert_eq!(c.verdict, Verdict::Regular);
        assert_eq!(c.passing_pairings(), FacetPairing::ALL.to_vec());

        let t =
            Tetrahedron::new([v(0., 0., 0.), v(1., 0., 0.), v(0., 1., 0.), v(0., 0., 2.)]).unwrap();
        // e = (1, 1, 2, √2, √5, √5): f1 ≅ f2 but f0 ≇ f3
        let c = classify(&t, DEFAULT_CLASSIFY_TOL).unwrap();
        assert_eq!(c.verdict, Verdict::Generic);
        assert!(c.pairing(FacetPairing::P03_12).congruence_residuals[1] < 1e-15);
        assert!(c.passing_pairings().is_empty());

        assert_eq!(
            classify(&corner(), DEFAULT_CLASSIFY_TOL).unwrap().verdict,
            Verdict::Generic
        );
    }

    #[test]
    fn classify_isosceles() {
        // disphenoid: opposite edges (2,2), (3,3), (√7.. ) via box diagonals
        let (p, q, r) = (1.0, 1.5, 2.0);
        let t = Tetrahedron::new([v(p, q, r), v(p, -q, -r), v(-p, q, -r), v(-p, -q, r)]).unwrap();
        let c = classify(&t, DEFAULT_CLASSIFY_TOL).unwrap();
        assert_eq!(c.verdict, Verdict::Isosceles);
        assert_eq!(c.passing_pairings().len(), 3);
        for pc in c.pairings {
            assert!(pc.area_residuals.iter().all(|&r| r < 1e-12));
        }
    }

    #[test]
    fn classify_degenerate_errors() {
        let flat = Tetrahedron::new_allow_degenerate([
            v(0., 0., 0.),
            v(1., 0., 0.),
            v(0., 1., 0.),
            v(1., 1., 0.),
        ]);
        assert!(matches!(
            classify(&flat, 1e-9),
            Err(GeometryError::DegenerateTetrahedron { .. })
        ));
    }

    #[test]
    fn classify_from_edges_matches_vertices() {
        let t =
            Tetrahedron::new([v(0., 0., 0.), v(1., 0., 0.), v(0., 1., 0.), v(0., 0., 2.)]).unwrap();
        let a = classify(&t, 1e-9).unwrap();
        let b = classify_edge_lengths(&edge_lengths(&t), 1e-9).unwrap();
        assert_eq!(a.verdict, b.verdict);
        let ones = EdgeLengths::from_array([1.0; 6]).unwrap();
        assert_eq!(
            classify_edge_lengths(&ones, 1e-9).unwrap().verdict,
            Verdict::Regular
        );
    }

    #[test]
    fn perimeters() {
        for p in facet_perimeters(&regular_unit()) {
            assert!((p - 3.0).abs() < 1e-14);
        }
        let p = facet_perimeters(&corner());
        assert!((p[3] - (2.0 + 2f64.sqrt())).abs() < 1e-15);
    }
}

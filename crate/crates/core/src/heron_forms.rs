//! Heron-style closed forms for triangle area and tetrahedron volume.
//!
//! A reversible tetrahedron has edge lengths `a, a, b, b, c, d`: opposite
//! pairs `(a, a)`, `(b, b)` and `(c, d)`. Two facets have sides `(a, b, c)`
//! and two have sides `(a, b, d)`. Its squared volume factors as
//!
//! ```text
//! 72 V² = (c²d² − (a² − b²)²) · (a² + b² − (c² + d²)/2)
//!       = (cd + a² − b²) · (cd − a² + b²) · (a² + b² − (c² + d²)/2)
//! ```
//!
//! which for `c = d` is the isosceles formula
//! `72 V² = (a² + b² − c²)(a² − b² + c²)(−a² + b² + c²)`.
//!
//! The two flat limits are the parallelogram law `2a² + 2b² = c² + d²`
//! (second factor vanishes) and the trapezoid law `|b² − a²| = cd` (first
//! factor vanishes).

use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::linalg3::Vec3;
use crate::tetra::{rel_diff, EdgeLengths, FacetPairing, OppositePair, Tetrahedron};

/// Relative slack on the weak triangle inequality before a triple is rejected.
pub const TRIANGLE_TOL: f64 = 1e-12;

/// A factor of degree `k` is treated as zero when `|factor| ≤ DEGENERACY_FLOOR · Lᵏ`,
/// `L` the longest of `a, b, c, d`.
pub const DEGENERACY_FLOOR: f64 = 1e-10;

/// Area of a triangle with sides `a, b, c` by Heron's formula.
///
/// Sides are sorted so that `a ≥ b ≥ c` and the product is evaluated as
/// `¼ √((a + (b + c)) (c − (a − b)) (c + (a − b)) (a + (b − c)))`. Each
/// parenthesised difference is then exact or benign, which keeps needle
/// triangles accurate. Flat triples give exactly zero.
pub fn heron_triangle_area(a: f64, b: f64, c: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0 && c > 0.0) || !(a.is_finite() && b.is_finite() && c.is_finite()) {
        return Err(GeometryError::InvalidTriangle(a, b, c));
    }
    let mut s = [a, b, c];
    s.sort_by(|x, y| y.total_cmp(x));
    let [a, b, c] = s;
    let slack = c - (a - b);
    if slack < -TRIANGLE_TOL * a {
        return Err(GeometryError::InvalidTriangle(a, b, c));
    }
    if slack <= 0.0 {
        return Ok(0.0);
    }
    let p = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
    Ok(0.25 * p.sqrt())
}

/// `72 V² = (a² + b² − c²)(a² − b² + c²)(−a² + b² + c²)` for the isosceles
/// tetrahedron with opposite-edge lengths `a, b, c`. Negative for data that
/// is not realizable.
pub fn isosceles_volume_sq(a: f64, b: f64, c: f64) -> f64 {
    let f1 = dot2(&[(a, a), (b, b), (-c, c)]);
    let f2 = dot2(&[(a, a), (-b, b), (c, c)]);
    let f3 = dot2(&[(-a, a), (b, b), (c, c)]);
    f1 * f2 * f3 / 72.0
}

/// `Σ xᵢ·yᵢ` in compensated arithmetic: as accurate as evaluating in twice
/// the working precision and rounding once. The volume factors are
/// differences of squares and lose every digit to cancellation near a flat
/// configuration when summed naively.
fn dot2(terms: &[(f64, f64)]) -> f64 {
    let (x0, y0) = terms[0];
    let mut p = x0 * y0;
    let mut s = x0.mul_add(y0, -p);
    for &(x, y) in &terms[1..] {
        let h = x * y;
        let r = x.mul_add(y, -h);
        let sum = p + h;
        let z = sum - p;
        let q = (p - (sum - z)) + (h - z);
        p = sum;
        s += q + r;
    }
    p + s
}

/// Edge lengths `(a, b, c, d)` of a reversible tetrahedron.
///
/// Opposite pairs are `(a, a)`, `(b, b)`, `(c, d)`. In the vertex labelling
/// used by [`build_reversible`], `e01 = c`, `e23 = d`, `e02 = e13 = a` and
/// `e03 = e12 = b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct ReversibleParams {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl TryFrom<RawParams> for ReversibleParams {
    type Error = GeometryError;

    fn try_from(r: RawParams) -> Result<Self> {
        ReversibleParams::new(r.a, r.b, r.c, r.d)
    }
}

impl From<ReversibleParams> for RawParams {
    fn from(p: ReversibleParams) -> Self {
        RawParams {
            a: p.a,
            b: p.b,
            c: p.c,
            d: p.d,
        }
    }
}

fn weak_triangle(x: f64, y: f64, z: f64) -> bool {
    let mut s = [x, y, z];
    s.sort_by(|p, q| q.total_cmp(p));
    s[0] <= (s[1] + s[2]) + TRIANGLE_TOL * s[0]
}

impl ReversibleParams {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        for (name, v) in [("a", a), ("b", b), ("c", c), ("d", d)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(GeometryError::InvalidParams(format!(
                    "{name} = {v} is not positive"
                )));
            }
        }
        if !weak_triangle(a, b, c) {
            return Err(GeometryError::InvalidParams(format!(
                "({a}, {b}, {c}) is not a triangle"
            )));
        }
        if !weak_triangle(a, b, d) {
            return Err(GeometryError::InvalidParams(format!(
                "({a}, {b}, {d}) is not a triangle"
            )));
        }
        Ok(ReversibleParams { a, b, c, d })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn max_length(&self) -> f64 {
        self.a.max(self.b).max(self.c).max(self.d)
    }

    /// Six edge lengths in the labelling of [`build_reversible`].
    pub fn edge_lengths(&self) -> Result<EdgeLengths> {
        let ReversibleParams { a, b, c, d } = *self;
        EdgeLengths::new(c, a, b, b, a, d)
    }

    pub fn scaled(&self, s: f64) -> Result<ReversibleParams> {
        ReversibleParams::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }
}

/// `72 V² = (c²d² − (a² − b²)²)(a² + b² − (c² + d²)/2)`, evaluated as the
/// product of [`reversible_factors`].
pub fn reversible_volume_sq(p: &ReversibleParams) -> f64 {
    let [f1, f2, f3] = reversible_factors(p);
    f1 * f2 * f3 / 72.0
}

/// The same polynomial in its unfactored shape
/// `72 V² = (c²d² − (a² − b²)²)(a² + b² − (c² + d²)/2)`, summed naively.
/// Independent of [`reversible_factors`]; loses relative accuracy near
/// flat parameters where `c²d² ≈ (a² − b²)²`.
pub fn reversible_volume_sq_expanded(p: &ReversibleParams) -> f64 {
    let (a2, b2, c2, d2) = (p.a * p.a, p.b * p.b, p.c * p.c, p.d * p.d);
    let diff = a2 - b2;
    (c2 * d2 - diff * diff) * (a2 + b2 - (c2 + d2) / 2.0) / 72.0
}

/// The three factors `cd + a² − b²`, `cd − a² + b²`, `a² + b² − (c² + d²)/2`
/// whose product is `72 V²`, each accurate to about one rounding.
pub fn reversible_factors(p: &ReversibleParams) -> [f64; 3] {
    let (a, b, c, d) = (p.a, p.b, p.c, p.d);
    [
        dot2(&[(c, d), (a, a), (-b, b)]),
        dot2(&[(c, d), (-a, a), (b, b)]),
        dot2(&[(a, a), (b, b), (-c, c / 2.0), (-d, d / 2.0)]),
    ]
}

/// Which flat limit a parameter set sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DegeneracyKind {
    None,
    Parallelogram,
    Trapezoid,
    Both,
}

impl DegeneracyKind {
    fn from_flags(parallelogram: bool, trapezoid: bool) -> Self {
        match (parallelogram, trapezoid) {
            (false, false) => DegeneracyKind::None,
            (true, false) => DegeneracyKind::Parallelogram,
            (false, true) => DegeneracyKind::Trapezoid,
            (true, true) => DegeneracyKind::Both,
        }
    }

    pub fn is_parallelogram(self) -> bool {
        matches!(self, DegeneracyKind::Parallelogram | DegeneracyKind::Both)
    }

    pub fn is_trapezoid(self) -> bool {
        matches!(self, DegeneracyKind::Trapezoid | DegeneracyKind::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealizabilityVerdict {
    /// `c²d² − (a² − b²)²`
    pub factor1: f64,
    /// `a² + b² − (c² + d²)/2`
    pub factor2: f64,
    pub realizable: bool,
    pub degeneracy_kind: DegeneracyKind,
}

/// Evaluates both factors of the reversible volume formula and flags the
/// flat limits. A factor within [`DEGENERACY_FLOOR`] (scaled by its degree)
/// counts as zero, so points on either manifold are realizable and flat.
pub fn realizability(p: &ReversibleParams) -> RealizabilityVerdict {
    let (a2, b2, c2, d2) = (p.a * p.a, p.b * p.b, p.c * p.c, p.d * p.d);
    let [g1, g2, factor2] = reversible_factors(p);
    let factor1 = g1 * g2;
    let l2 = p.max_length().powi(2);
    let floor2 = DEGENERACY_FLOOR * l2;
    let floor4 = DEGENERACY_FLOOR * l2 * l2;
    // |2a² + 2b² − c² − d²| and |c²d² − (b² − a²)²|
    let parallelogram = (2.0 * (a2 + b2) - (c2 + d2)).abs() <= 2.0 * floor2;
    let trapezoid = factor1.abs() <= floor4;
    let realizable = (factor1 >= 0.0 || trapezoid) && (factor2 >= 0.0 || parallelogram);
    RealizabilityVerdict {
        factor1,
        factor2,
        realizable,
        degeneracy_kind: DegeneracyKind::from_flags(parallelogram, trapezoid),
    }
}

/// Builds the reversible tetrahedron with half-turn symmetry about the z-axis:
///
/// ```text
/// v0 = ( c/2, 0, 0)    v2 = ( x, −y, h)
/// v1 = (−c/2, 0, 0)    v3 = (−x,  y, h)
/// ```
///
/// with `x = (b² − a²)/2c`, `y = √(d²/4 − x²)` and
/// `h = √((a² + b²)/2 − (c² + d²)/4)`. The sign of `y` makes the vertex
/// order positively oriented (`6V = 2cyh`), so the labels survive the
/// orientation invariant. Requires both volume factors to be strictly positive.
pub fn build_reversible(p: &ReversibleParams) -> Result<Tetrahedron> {
    let r = realizability(p);
    if !r.realizable || r.degeneracy_kind != DegeneracyKind::None {
        return Err(GeometryError::NotRealizable(format!(
            "volume factors ({:e}, {:e}) are not both positive",
            r.factor1, r.factor2
        )));
    }
    let t = Tetrahedron::new(reversible_vertices(p, &r))
        .map_err(|e| GeometryError::NotRealizable(e.to_string()))?;
    Ok(t)
}

/// Variant of [`build_reversible`] that admits the flat limits; a square root
/// argument within the degeneracy floor is clamped to zero.
pub fn build_reversible_allow_degenerate(p: &ReversibleParams) -> Result<Tetrahedron> {
    let r = realizability(p);
    if !r.realizable {
        return Err(GeometryError::NotRealizable(format!(
            "volume factors ({:e}, {:e}) are not both non-negative",
            r.factor1, r.factor2
        )));
    }
    Ok(Tetrahedron::new_allow_degenerate(reversible_vertices(
        p, &r,
    )))
}

fn reversible_vertices(p: &ReversibleParams, r: &RealizabilityVerdict) -> [Vec3; 4] {
    let ReversibleParams { a, b, c, d } = *p;
    let x = (b - a) * (b + a) / (2.0 * c);
    let half_d = d / 2.0;
    let y = if r.degeneracy_kind.is_trapezoid() {
        0.0
    } else {
        ((half_d - x) * (half_d + x)).max(0.0).sqrt()
    };
    let h = if r.degeneracy_kind.is_parallelogram() {
        0.0
    } else {
        (r.factor2 / 2.0).max(0.0).sqrt()
    };
    [
        Vec3::new(c / 2.0, 0.0, 0.0),
        Vec3::new(-c / 2.0, 0.0, 0.0),
        Vec3::new(x, -y, h),
        Vec3::new(-x, y, h),
    ]
}

/// The three Regge actions on a reversible tetrahedron. Each fixes one
/// opposite-edge pair and maps the other four lengths `l ↦ s − l`, with `s`
/// half their sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ReggeAction {
    /// Fixes `(c, d)`; on this family it swaps `a` and `b`.
    FixCD,
    /// Fixes the `(a, a)` pair: `s = b + (c + d)/2`, `(b, c, d) ↦ (s − b, s − c, s − d)`.
    FixAA,
    /// Fixes the `(b, b)` pair: `s = a + (c + d)/2`, `(a, c, d) ↦ (s − a, s − c, s − d)`.
    FixBB,
}

impl ReggeAction {
    pub const ALL: [ReggeAction; 3] = [ReggeAction::FixCD, ReggeAction::FixAA, ReggeAction::FixBB];

    pub fn name(self) -> &'static str {
        match self {
            ReggeAction::FixCD => "fix-cd",
            ReggeAction::FixAA => "fix-aa",
            ReggeAction::FixBB => "fix-bb",
        }
    }
}

pub fn regge_transform(p: &ReversibleParams, action: ReggeAction) -> Result<ReversibleParams> {
    let ReversibleParams { a, b, c, d } = *p;
    let out = match action {
        ReggeAction::FixCD => {
            let s = a + b;
            [s - a, s - b, c, d]
        }
        ReggeAction::FixAA => {
            let s = (2.0 * b + c + d) / 2.0;
            [a, s - b, s - c, s - d]
        }
        ReggeAction::FixBB => {
            let s = (2.0 * a + c + d) / 2.0;
            [s - a, b, s - c, s - d]
        }
    };
    if let Some(&bad) = out.iter().find(|&&l| !(l > 0.0)) {
        return Err(GeometryError::NonPositiveEdge(bad));
    }
    ReversibleParams::new(out[0], out[1], out[2], out[3])
}

/// What the two perimeter equations of a facet pairing force on the edges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerimeterImplication {
    pub pairing: FacetPairing,
    /// Opposite-edge equalities implied by the perimeter equations, derived
    /// from the linear system itself.
    pub implied: Vec<OppositePair>,
    /// Opposite pairs the equations leave free.
    pub unconstrained: Vec<OppositePair>,
    /// Relative perimeter mismatch for each of the two facet pairs.
    pub perimeter_residuals: [f64; 2],
    pub perimeters_match: bool,
    /// Relative mismatch of each implied equality, in the order of `implied`.
    pub implied_residuals: Vec<f64>,
    /// `Some(all implied equalities hold)` when the perimeters match, `None` otherwise.
    pub implied_hold: Option<bool>,
}

/// Row of the linear system `per(f_i) − per(f_j) = 0` over the six edges.
fn perimeter_row(i: usize, j: usize) -> [f64; 6] {
    let mut row = [0.0; 6];
    for (k, &(p, q)) in crate::tetra::EDGE_PAIRS.iter().enumerate() {
        let in_i = p != i && q != i;
        let in_j = p != j && q != j;
        row[k] = f64::from(u8::from(in_i)) - f64::from(u8::from(in_j));
    }
    row
}

/// Rank of a small integer matrix by exact elimination (entries stay small integers).
fn rank<const N: usize>(mut rows: Vec<[f64; N]>) -> usize {
    let mut rank = 0;
    for col in 0..N {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0.0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let p = rows[rank];
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0.0 {
                let f = rows[r][col];
                for k in 0..N {
                    rows[r][k] = rows[r][k] * p[col] - f * p[k];
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Opposite-edge equalities that follow from the pairing's perimeter equations.
///
/// An equality `e_p = e_q` is implied exactly when the row `e_p − e_q` lies
/// in the span of the two perimeter-difference rows.
pub fn implied_equalities(pairing: FacetPairing) -> Vec<OppositePair> {
    let [(i, j), (k, l)] = pairing.pairs();
    let system = vec![perimeter_row(i, j), perimeter_row(k, l)];
    let base = rank(system.clone());
    OppositePair::ALL
        .into_iter()
        .filter(|&op| {
            let (p, q) = op.edge_indices();
            let mut row = [0.0; 6];
            row[p] = 1.0;
            row[q] = -1.0;
            let mut extended = system.clone();
            extended.push(row);
            rank(extended) == base
        })
        .collect()
}

/// Checks a facet pairing's perimeter equations on `l` and, when they hold
/// within `tol`, whether the implied opposite-edge equalities hold too.
pub fn perimeter_pairing_implication(
    l: &EdgeLengths,
    pairing: FacetPairing,
    tol: f64,
) -> PerimeterImplication {
    let implied = implied_equalities(pairing);
    let unconstrained = OppositePair::ALL
        .into_iter()
        .filter(|op| !implied.contains(op))
        .collect();
    let [(i, j), (k, m)] = pairing.pairs();
    let perimeter_residuals = [
        rel_diff(l.facet_perimeter(i), l.facet_perimeter(j)),
        rel_diff(l.facet_perimeter(k), l.facet_perimeter(m)),
    ];
    let perimeters_match = perimeter_residuals.iter().all(|&r| r <= tol);
    let implied_residuals: Vec<f64> = implied
        .iter()
        .map(|&op| {
            let (x, y) = l.opposite(op);
            rel_diff(x, y)
        })
        .collect();
    let implied_hold = perimeters_match.then(|| implied_residuals.iter().all(|&r| r <= tol));
    PerimeterImplication {
        pairing,
        implied,
        unconstrained,
        perimeter_residuals,
        perimeters_match,
        implied_residuals,
        implied_hold,
    }
}

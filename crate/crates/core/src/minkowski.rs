//! Reconstruction of a tetrahedron from its facet normals and areas, and
//! generators of tetrahedra with prescribed facet-area pairings.
//!
//! With `v0` at the origin and `A = [v1 v2 v3]` positively oriented, column
//! `i` of the cofactor matrix of `A` is `−2 α_i u_i` for `i = 1, 2, 3`.
//! Since `cofactor(A) = det(A) A⁻ᵗ` and `det(cofactor(A)) = det(A)²`,
//!
//! ```text
//! A = det(C)^½ · C⁻ᵗ,   C = [−2α₁u₁  −2α₂u₂  −2α₃u₃]
//! ```
//!
//! recovers the tetrahedron uniquely up to translation. Facet 0 is implied
//! by the closure identity `Σ α_i u_i = 0` and only used for verification.

use rand::Rng;
use serde::Serialize;

use crate::error::{GeometryError, Result};
use crate::linalg3::{Mat3, Vec3};
use crate::sampling::{sample_rng, unit_vector};
use crate::tetra::{facet_data, FacetData, FacetRecord, Tetrahedron};

/// Relative closure residual accepted without repair.
pub const CLOSURE_TOL: f64 = 1e-8;
/// Relative closure residual above which input is rejected outright.
pub const CLOSURE_REPAIR_LIMIT: f64 = 1e-5;
/// Rejection rounds per generated sample.
pub const MAX_GENERATION_ATTEMPTS: usize = 1000;
/// Relative tolerance of [`uniqueness_check`].
pub const UNIQUENESS_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReconstructionReport {
    pub tetrahedron: Tetrahedron,
    /// `|Σ α_i u_i| / Σ α_i` of the input.
    pub input_closure_residual: f64,
    /// Areas were projected onto the closure subspace before reconstruction.
    pub closure_repaired: bool,
    /// The input's facets 2 and 3 had to be exchanged to give `det C > 0`;
    /// the tetrahedron's vertex labels follow the exchanged order.
    pub relabeled: bool,
    /// Largest angle (radians) between an input normal and the reconstructed one.
    pub roundtrip_normal_error: f64,
    /// Largest relative difference between an input area and the reconstructed one.
    pub roundtrip_area_error: f64,
}

/// `|Σ α_i u_i| / Σ α_i`.
pub fn closure_residual(d: &FacetData) -> f64 {
    let total: f64 = d.areas().iter().sum();
    d.weighted_normal_sum().norm() / total
}

/// Least-squares correction of the areas onto `Σ α_i u_i = 0`: with `N` the
/// 3×4 matrix of normals, `α' = α − Nᵀ (N Nᵀ)⁻¹ N α`.
fn repair_closure(d: &FacetData) -> Result<FacetData> {
    let normals = d.normals();
    let gram = normals.iter().fold(
        Mat3::from_cols(Vec3::ZERO, Vec3::ZERO, Vec3::ZERO),
        |m, u| {
            let outer = Mat3::from_cols(*u * u.x(), *u * u.y(), *u * u.z());
            Mat3::from_cols(
                m.col(0) + outer.col(0),
                m.col(1) + outer.col(1),
                m.col(2) + outer.col(2),
            )
        },
    );
    let lambda = gram
        .inverse()
        .map_err(|_| GeometryError::DegenerateNormals)?
        * d.weighted_normal_sum();
    let records = d.records().map(|r| FacetRecord {
        normal: r.normal,
        area: r.area - r.normal.dot(lambda),
    });
    FacetData::new(records)
}

fn angle_between(u: Vec3, v: Vec3) -> f64 {
    u.cross(v).norm().atan2(u.dot(v))
}

/// Rebuilds the tetrahedron with `v0` at the origin from facet data.
pub fn reconstruct(d: &FacetData) -> Result<ReconstructionReport> {
    let input_closure_residual = closure_residual(d);
    if !(input_closure_residual <= CLOSURE_REPAIR_LIMIT) {
        return Err(GeometryError::ClosureViolation {
            residual: input_closure_residual,
            bound: CLOSURE_REPAIR_LIMIT,
        });
    }
    let closure_repaired = input_closure_residual > CLOSURE_TOL;
    let mut data = if closure_repaired {
        repair_closure(d).map_err(|_| GeometryError::ClosureViolation {
            residual: input_closure_residual,
            bound: CLOSURE_TOL,
        })?
    } else {
        *d
    };

    let column = |r: FacetRecord| r.normal * (-2.0 * r.area);
    let mut c = Mat3::from_cols(
        column(data.record(1)),
        column(data.record(2)),
        column(data.record(3)),
    );
    let relabeled = c.det() < 0.0;
    if relabeled {
        c.swap_cols(1, 2);
        data = data.swapped(2, 3);
    }
    let det_c = c.det();
    let a = c
        .solve_inverse_transpose()
        .map_err(|_| GeometryError::DegenerateNormals)?
        * det_c.sqrt();
    let tetrahedron = Tetrahedron::new([Vec3::ZERO, a.col(0), a.col(1), a.col(2)])
        .map_err(|_| GeometryError::DegenerateNormals)?;

    let back = facet_data(&tetrahedron)?;
    let mut roundtrip_normal_error = 0.0f64;
    let mut roundtrip_area_error = 0.0f64;
    for (want, got) in data.records().iter().zip(back.records()) {
        roundtrip_normal_error = roundtrip_normal_error.max(angle_between(want.normal, got.normal));
        roundtrip_area_error = roundtrip_area_error.max((want.area - got.area).abs() / want.area);
    }

    Ok(ReconstructionReport {
        tetrahedron,
        input_closure_residual,
        closure_repaired,
        relabeled,
        roundtrip_normal_error,
        roundtrip_area_error,
    })
}

/// True iff `t1` and `t2` are translates of each other under the
/// index-preserving vertex correspondence and both carry the facet data `d`.
pub fn uniqueness_check(d: &FacetData, t1: &Tetrahedron, t2: &Tetrahedron) -> bool {
    uniqueness_check_with_tol(d, t1, t2, UNIQUENESS_TOL)
}

pub fn uniqueness_check_with_tol(
    d: &FacetData,
    t1: &Tetrahedron,
    t2: &Tetrahedron,
    tol: f64,
) -> bool {
    let matches_data = |t: &Tetrahedron| match facet_data(t) {
        Ok(f) => d.records().iter().zip(f.records()).all(|(want, got)| {
            angle_between(want.normal, got.normal) <= tol
                && (want.area - got.area).abs() <= tol * want.area
        }),
        Err(_) => false,
    };
    if !matches_data(t1) || !matches_data(t2) {
        return false;
    }
    let (a, b) = (t1.at_origin(), t2.at_origin());
    let scale = t1.longest_edge().max(t2.longest_edge());
    a.vertices()
        .iter()
        .zip(b.vertices())
        .all(|(p, q)| (*p - q).norm() <= tol * scale)
}

/// Smallest strictly positive root of `q r² + 2 p r + k = 0`, if any.
fn smallest_positive_root(q: f64, p: f64, k: f64) -> Option<f64> {
    let disc = p * p - q * k;
    if !(disc >= 0.0) || q == 0.0 {
        return None;
    }
    // cancellation-free pair of roots
    let s = -(p + p.signum() * disc.sqrt());
    let roots = [s / q, if s != 0.0 { k / s } else { 0.0 }];
    roots
        .into_iter()
        .filter(|&r| r > 1e-12 && r.is_finite())
        .reduce(f64::min)
}

fn finish_sample(records: [FacetRecord; 4], scale: f64) -> Option<Tetrahedron> {
    let d = FacetData::new(records).ok()?;
    let report = reconstruct(&d).ok()?;
    if report.relabeled {
        return None;
    }
    let t = report.tetrahedron;
    Tetrahedron::new(t.vertices().map(|v| v * (scale / t.longest_edge()))).ok()
}

/// Random tetrahedron with `area(f0) = area(f1)` and `area(f2) = area(f3)`,
/// scaled so its longest edge equals `scale`.
///
/// Normals `u0, u1, u2` are drawn uniformly from the sphere. Closure then
/// needs `u3 = −(α/β)(u0 + u1) − u2` to be a unit vector, a quadratic in
/// the ratio `α/β`; samples without a positive root are redrawn.
pub fn generate_paired_area(rng_seed: u64, scale: f64) -> Result<Tetrahedron> {
    assert!(scale > 0.0, "scale must be positive");
    let mut rng = sample_rng(rng_seed, 0);
    for _ in 0..MAX_GENERATION_ATTEMPTS {
        if let Some(t) = paired_area_attempt(&mut rng, scale) {
            return Ok(t);
        }
    }
    Err(GeometryError::GenerationFailed {
        attempts: MAX_GENERATION_ATTEMPTS,
    })
}

fn paired_area_attempt<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> Option<Tetrahedron> {
    let (u0, u1, u2) = (unit_vector(rng), unit_vector(rng), unit_vector(rng));
    let w = u0 + u1;
    // |r w + u2|² = 1
    let ratio = smallest_positive_root(w.norm_squared(), w.dot(u2), u2.norm_squared() - 1.0)?;
    let u3 = (-(w * ratio) - u2).normalized()?;
    let (alpha, beta) = (ratio, 1.0);
    finish_sample(
        [
            FacetRecord {
                normal: u0,
                area: alpha,
            },
            FacetRecord {
                normal: u1,
                area: alpha,
            },
            FacetRecord {
                normal: u2,
                area: beta,
            },
            FacetRecord {
                normal: u3,
                area: beta,
            },
        ],
        scale,
    )
}

/// Random tetrahedron with all four facet areas equal, scaled so its
/// longest edge equals `scale`.
///
/// With `w = u0 + u1`, closure asks for `|w + u2| = 1`; for a unit `u2`
/// this fixes its component along `w` at `−|w|/2`, and the remaining
/// component is drawn uniformly around the circle.
pub fn generate_equiareal(rng_seed: u64, scale: f64) -> Result<Tetrahedron> {
    assert!(scale > 0.0, "scale must be positive");
    let mut rng = sample_rng(rng_seed, 0);
    for _ in 0..MAX_GENERATION_ATTEMPTS {
        if let Some(t) = equiareal_attempt(&mut rng, scale) {
            return Ok(t);
        }
    }
    Err(GeometryError::GenerationFailed {
        attempts: MAX_GENERATION_ATTEMPTS,
    })
}

fn equiareal_attempt<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> Option<Tetrahedron> {
    let (u0, u1) = (unit_vector(rng), unit_vector(rng));
    let w = u0 + u1;
    let len = w.norm();
    let axis = w.normalized()?;
    let helper = if axis.x().abs() < 0.9 {
        Vec3::new(1.0, 0.0, 0.0)
    } else {
        Vec3::new(0.0, 1.0, 0.0)
    };
    let e1 = axis.cross(helper).normalized()?;
    let e2 = axis.cross(e1);
    let along = -len / 2.0;
    let across = (1.0 - along * along).max(0.0).sqrt();
    let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let u2 = (axis * along + (e1 * theta.cos() + e2 * theta.sin()) * across).normalized()?;
    let u3 = (-(w + u2)).normalized()?;
    finish_sample(
        [u0, u1, u2, u3].map(|normal| FacetRecord { normal, area: 1.0 }),
        scale,
    )
}

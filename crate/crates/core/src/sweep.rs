//! Seeded invariant sweeps.
//!
//! A sweep evaluates `n` independent samples and aggregates one residual
//! per invariant per sample. Sample `i` draws from stream `i` of the seed
//! (see [`crate::sampling::sample_rng`]) and results are reduced in index
//! order, so parallel and sequential runs produce bit-identical reports.

use std::time::Instant;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::heron_forms::{
    build_reversible, isosceles_volume_sq, perimeter_pairing_implication, realizability,
    regge_transform, reversible_volume_sq, reversible_volume_sq_expanded, DegeneracyKind,
    ReggeAction, ReversibleParams,
};
use crate::minkowski::{generate_equiareal, generate_paired_area, reconstruct, uniqueness_check};
use crate::sampling::{log_uniform, sample_rng, tetrahedron_in_cube};
use crate::tetra::{
    cayley_menger_volume_sq, classify, congruence_residual, facet_data, facets, rel_diff,
    volume_from_vertices, EdgeLengths, FacetPairing, Verdict,
};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How the per-sample work is scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Falls back to sequential when the `parallel` feature is disabled.
    #[default]
    Parallel,
}

/// Evaluates `f(0), …, f(n − 1)` and returns the results in index order.
pub fn map_indexed<T, F>(n: usize, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Execution::Parallel => (0..n).into_par_iter().map(f).collect(),
        _ => (0..n).map(f).collect(),
    }
}

/// Names accepted by [`run_sweep`].
pub const SWEEP_NAMES: [&str; 7] = [
    "theorem2",
    "corollary3",
    "volume-formula",
    "regge",
    "degeneracy",
    "roundtrip",
    "perimeter",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub samples: usize,
    pub seed: u64,
    /// Multiplies every residual bound.
    pub tol_scale: f64,
    pub execution: Execution,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            samples: 1000,
            seed: 7,
            tol_scale: 1.0,
            execution: Execution::default(),
        }
    }
}

/// Aggregate of one invariant over a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InvariantSummary {
    pub name: String,
    pub bound: f64,
    pub count: usize,
    pub max: f64,
    pub mean: f64,
    pub failures: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub sweep: String,
    pub seed: u64,
    pub samples_attempted: usize,
    pub samples_accepted: usize,
    pub invariants: Vec<InvariantSummary>,
    pub pass: bool,
    /// Not serialized: reports must be byte-identical across runs.
    #[serde(skip)]
    pub wall_time_secs: f64,
}

impl SweepReport {
    pub fn invariant(&self, name: &str) -> Option<&InvariantSummary> {
        self.invariants.iter().find(|i| i.name == name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown sweep `{0}` (expected one of: {list})", list = SWEEP_NAMES.join(", "))]
pub struct UnknownSweep(pub String);

/// One residual for one invariant in one sample. `None` means the
/// invariant did not apply to this sample.
type Residuals = Vec<Option<f64>>;

struct Outcome {
    attempts: usize,
    residuals: Option<Residuals>,
}

impl Outcome {
    fn accepted(attempts: usize, residuals: Residuals) -> Self {
        Outcome {
            attempts,
            residuals: Some(residuals),
        }
    }

    fn rejected(attempts: usize) -> Self {
        Outcome {
            attempts,
            residuals: None,
        }
    }
}

struct SweepDef {
    invariants: &'static [(&'static str, f64)],
    sample: fn(u64, usize) -> Outcome,
}

fn definition(name: &str) -> Option<SweepDef> {
    Some(match name {
        "theorem2" => SweepDef {
            invariants: &[
                ("paired-area", 1e-10),
                ("congruence", 1e-7),
                ("verdict-reversible", 0.0),
            ],
            sample: theorem2_sample,
        },
        "corollary3" => SweepDef {
            invariants: &[
                ("equal-area", 1e-10),
                ("congruence", 1e-7),
                ("verdict-isosceles", 0.0),
            ],
            sample: corollary3_sample,
        },
        "volume-formula" => SweepDef {
            invariants: &[
                ("formula-vs-vertices", 1e-9),
                ("formula-vs-cayley-menger", 1e-9),
                ("vertices-vs-cayley-menger", 1e-9),
                ("factorizations", 1e-12),
                ("isosceles-reduction", 1e-13),
            ],
            sample: volume_formula_sample,
        },
        "regge" => SweepDef {
            invariants: &[
                ("cayley-menger-preserved", 1e-9),
                ("reversible-preserved", 0.0),
                ("involution", 1e-12),
            ],
            sample: regge_sample,
        },
        "degeneracy" => SweepDef {
            invariants: &[
                ("parallelogram-volume", 1e-12),
                ("parallelogram-flag", 0.0),
                ("trapezoid-volume", 1e-12),
                ("trapezoid-flag", 0.0),
            ],
            sample: degeneracy_sample,
        },
        "roundtrip" => SweepDef {
            invariants: &[("normal-angle", 1e-8), ("area", 1e-8), ("uniqueness", 0.0)],
            sample: roundtrip_sample,
        },
        "perimeter" => SweepDef {
            invariants: &[("perimeters-match", 1e-12), ("implied-equalities", 1e-12)],
            sample: perimeter_sample,
        },
        _ => return None,
    })
}

/// Runs a named sweep.
pub fn run_sweep(name: &str, cfg: &SweepConfig) -> Result<SweepReport, UnknownSweep> {
    let def = definition(name).ok_or_else(|| UnknownSweep(name.to_string()))?;
    let start = Instant::now();
    let seed = cfg.seed;
    let sample = def.sample;
    let outcomes = map_indexed(cfg.samples, cfg.execution, |i| sample(seed, i));

    let samples_attempted = outcomes.iter().map(|o| o.attempts).sum();
    let accepted: Vec<&Residuals> = outcomes
        .iter()
        .filter_map(|o| o.residuals.as_ref())
        .collect();
    let invariants: Vec<InvariantSummary> = def
        .invariants
        .iter()
        .enumerate()
        .map(|(k, &(name, bound))| {
            let bound = bound * cfg.tol_scale;
            let values: Vec<f64> = accepted.iter().filter_map(|r| r[k]).collect();
            let count = values.len();
            let max = values.iter().copied().fold(0.0, f64::max);
            let mean = if count == 0 {
                0.0
            } else {
                values.iter().sum::<f64>() / count as f64
            };
            // NaN residuals count as failures
            let failures = values.iter().filter(|&&v| !(v <= bound)).count();
            InvariantSummary {
                name: name.to_string(),
                bound,
                count,
                max,
                mean,
                failures,
                pass: failures == 0,
            }
        })
        .collect();
    let pass = accepted.len() == cfg.samples && invariants.iter().all(|i| i.pass);
    Ok(SweepReport {
        sweep: name.to_string(),
        seed,
        samples_attempted,
        samples_accepted: accepted.len(),
        invariants,
        pass,
        wall_time_secs: start.elapsed().as_secs_f64(),
    })
}

/// 0 when the condition holds, 1 otherwise; paired with a bound of 0.
fn flag(ok: bool) -> f64 {
    if ok {
        0.0
    } else {
        1.0
    }
}

const MAX_REJECTIONS: usize = 10_000;

/// Draws realizable, strictly non-flat parameters log-uniformly in `[0.1, 10]`.
pub fn realizable_params(rng: &mut ChaCha8Rng) -> Option<(ReversibleParams, usize)> {
    for attempt in 1..=MAX_REJECTIONS {
        let [a, b, c, d] = std::array::from_fn(|_| log_uniform(rng, 0.1, 10.0));
        let Ok(p) = ReversibleParams::new(a, b, c, d) else {
            continue;
        };
        let r = realizability(&p);
        if r.realizable && r.degeneracy_kind == DegeneracyKind::None {
            return Some((p, attempt));
        }
    }
    None
}

fn theorem2_sample(seed: u64, i: usize) -> Outcome {
    let Ok(t) = generate_paired_area(seed_for(seed, i), 1.0) else {
        return Outcome::rejected(1);
    };
    let Ok(d) = facet_data(&t) else {
        return Outcome::rejected(1);
    };
    let Ok(c) = classify(&t, 1e-7) else {
        return Outcome::rejected(1);
    };
    let a = d.areas();
    let paired = rel_diff(a[0], a[1]).max(rel_diff(a[2], a[3]));
    Outcome::accepted(
        1,
        vec![
            Some(paired),
            Some(c.pairing(FacetPairing::P01_23).max_congruence_residual()),
            Some(flag(c.verdict >= Verdict::Reversible)),
        ],
    )
}

fn corollary3_sample(seed: u64, i: usize) -> Outcome {
    let Ok(t) = generate_equiareal(seed_for(seed, i), 1.0) else {
        return Outcome::rejected(1);
    };
    let Ok(d) = facet_data(&t) else {
        return Outcome::rejected(1);
    };
    let Ok(c) = classify(&t, 1e-7) else {
        return Outcome::rejected(1);
    };
    let a = d.areas();
    let amax = a.iter().copied().fold(0.0, f64::max);
    let amin = a.iter().copied().fold(f64::INFINITY, f64::min);
    let sides = facets(&t).map(|f| f.side_lengths());
    let mut cong = 0.0f64;
    for x in 0..4 {
        for y in x + 1..4 {
            cong = cong.max(congruence_residual(sides[x], sides[y]));
        }
    }
    Outcome::accepted(
        1,
        vec![
            Some((amax - amin) / amax),
            Some(cong),
            Some(flag(c.verdict >= Verdict::Isosceles)),
        ],
    )
}

/// Derives a generator seed for sample `i`. Generators take a plain seed, so
/// the per-sample stream is folded into it through one draw.
fn seed_for(seed: u64, i: usize) -> u64 {
    sample_rng(seed, i as u64).random()
}

fn volume_formula_sample(seed: u64, i: usize) -> Outcome {
    let mut rng = sample_rng(seed, i as u64);
    let Some((p, attempts)) = realizable_params(&mut rng) else {
        return Outcome::rejected(MAX_REJECTIONS);
    };
    let Ok(t) = build_reversible(&p) else {
        return Outcome::rejected(attempts);
    };
    let Ok(l) = p.edge_lengths() else {
        return Outcome::rejected(attempts);
    };
    let formula = reversible_volume_sq(&p);
    let vert = volume_from_vertices(&t).powi(2);
    let cm = cayley_menger_volume_sq(&l);

    let (a, b, c) = (
        log_uniform(&mut rng, 0.1, 10.0),
        log_uniform(&mut rng, 0.1, 10.0),
        log_uniform(&mut rng, 0.1, 10.0),
    );
    let iso = ReversibleParams::new(a, b, c, c)
        .ok()
        .map(|q| rel_diff(reversible_volume_sq(&q), isosceles_volume_sq(a, b, c)));

    Outcome::accepted(
        attempts,
        vec![
            Some(rel_diff(formula, vert)),
            Some(rel_diff(formula, cm)),
            Some(rel_diff(vert, cm)),
            // the expanded form carries absolute error ~ eps·L⁶, so near-flat
            // samples are measured against that scale
            Some(
                (formula - reversible_volume_sq_expanded(&p)).abs()
                    / formula.abs().max(p.max_length().powi(6) / 72.0),
            ),
            iso,
        ],
    )
}

fn regge_sample(seed: u64, i: usize) -> Outcome {
    let mut rng = sample_rng(seed, i as u64);
    let Some((p, attempts)) = realizable_params(&mut rng) else {
        return Outcome::rejected(MAX_REJECTIONS);
    };
    let Ok(l) = p.edge_lengths() else {
        return Outcome::rejected(attempts);
    };
    let cm = cayley_menger_volume_sq(&l);
    let mut preserved = None::<f64>;
    let mut reversible = None::<f64>;
    let mut involution = None::<f64>;
    for action in ReggeAction::ALL {
        let Ok(q) = regge_transform(&p, action) else {
            continue;
        };
        let cm_q = q
            .edge_lengths()
            .map(|l| cayley_menger_volume_sq(&l))
            .unwrap_or(f64::NAN);
        preserved = Some(preserved.unwrap_or(0.0).max(rel_diff(cm, cm_q)));
        let keeps = build_reversible(&q)
            .and_then(|t| classify(&t, 1e-9))
            .map(|c| c.verdict >= Verdict::Reversible)
            .unwrap_or(false);
        reversible = Some(reversible.unwrap_or(0.0).max(flag(keeps)));
        let back = regge_transform(&q, action)
            .map(|r| {
                r.as_array()
                    .iter()
                    .zip(p.as_array())
                    .map(|(x, y)| rel_diff(*x, y))
                    .fold(0.0, f64::max)
            })
            .unwrap_or(f64::NAN);
        involution = Some(involution.unwrap_or(0.0).max(back));
    }
    Outcome::accepted(attempts, vec![preserved, reversible, involution])
}

/// Parameters on the parallelogram manifold `2a² + 2b² = c² + d²`.
pub fn parallelogram_params(rng: &mut ChaCha8Rng) -> Option<ReversibleParams> {
    let a = log_uniform(rng, 0.1, 10.0);
    let b = log_uniform(rng, 0.1, 10.0);
    let c = rng.random_range((a - b).abs()..=(a + b));
    let d = (2.0 * a * a + 2.0 * b * b - c * c).sqrt();
    ReversibleParams::new(a, b, c, d).ok()
}

/// Parameters on the trapezoid manifold `b² − a² = cd`.
pub fn trapezoid_params(rng: &mut ChaCha8Rng) -> Option<ReversibleParams> {
    let x = log_uniform(rng, 0.1, 10.0);
    let y = log_uniform(rng, 0.1, 10.0);
    let (a, b) = if x < y { (x, y) } else { (y, x) };
    let c = rng.random_range((b - a)..=(a + b));
    let d = (b - a) * (b + a) / c;
    ReversibleParams::new(a, b, c, d).ok()
}

fn degeneracy_sample(seed: u64, i: usize) -> Outcome {
    let mut rng = sample_rng(seed, i as u64);
    let mut attempts = 0;
    let mut draw = |gen: fn(&mut ChaCha8Rng) -> Option<ReversibleParams>| {
        for _ in 0..MAX_REJECTIONS {
            attempts += 1;
            if let Some(p) = gen(&mut rng) {
                return Some(p);
            }
        }
        None
    };
    let (Some(par), Some(trap)) = (draw(parallelogram_params), draw(trapezoid_params)) else {
        return Outcome::rejected(attempts);
    };
    let vol = |p: &ReversibleParams| reversible_volume_sq(p).abs() / p.max_length().powi(6);
    Outcome::accepted(
        attempts,
        vec![
            Some(vol(&par)),
            Some(flag(realizability(&par).degeneracy_kind.is_parallelogram())),
            Some(vol(&trap)),
            Some(flag(realizability(&trap).degeneracy_kind.is_trapezoid())),
        ],
    )
}

fn roundtrip_sample(seed: u64, i: usize) -> Outcome {
    let mut rng = sample_rng(seed, i as u64);
    let t = tetrahedron_in_cube(&mut rng, 10.0);
    let Ok(d) = facet_data(&t) else {
        return Outcome::rejected(1);
    };
    match reconstruct(&d) {
        Ok(r) => Outcome::accepted(
            1,
            vec![
                Some(r.roundtrip_normal_error),
                Some(r.roundtrip_area_error),
                Some(flag(uniqueness_check(&d, &r.tetrahedron, &t.at_origin()))),
            ],
        ),
        // a failed reconstruction of valid data is a failure, not a rejection
        Err(_) => Outcome::accepted(1, vec![Some(f64::INFINITY), Some(f64::INFINITY), Some(1.0)]),
    }
}

/// Edge lengths satisfying the perimeter equations of `pairing`: four edges
/// are drawn in `[1, 2]` and the two remaining ones solved for.
pub fn paired_perimeter_edges(rng: &mut ChaCha8Rng, pairing: FacetPairing) -> Option<EdgeLengths> {
    let mut e: [f64; 6] = std::array::from_fn(|_| rng.random_range(1.0..=2.0));
    // For {(f_i, f_j), (f_k, f_l)} the free pair (e_ij, e_kl) stays as drawn. Of
    // the other two opposite pairs, (p, p') and (q, q'), the unknowns are p' and
    // q'. Subtracting the perimeter equations gives
    //   per(f_i) − per(f_j) = (e_jk + e_jl) − (e_ik + e_il) = 0
    //   per(f_k) − per(f_l) = (e_li + e_lj) − (e_ki + e_kj) = 0
    // a 2×2 linear system in the unknowns, solved by Cramer's rule below.
    let [(i, j), (k, l)] = pairing.pairs();
    let idx = |a: usize, b: usize| {
        crate::tetra::EDGE_PAIRS
            .iter()
            .position(|&p| p == (a.min(b), a.max(b)))
            .unwrap()
    };
    let unknowns = [idx(j, l), idx(j, k)];
    let eqs: [[(usize, f64); 4]; 2] = [
        [
            (idx(j, k), 1.0),
            (idx(j, l), 1.0),
            (idx(i, k), -1.0),
            (idx(i, l), -1.0),
        ],
        [
            (idx(l, i), 1.0),
            (idx(l, j), 1.0),
            (idx(k, i), -1.0),
            (idx(k, j), -1.0),
        ],
    ];
    // coefficient matrix on the unknowns and right-hand side from the knowns
    let mut m = [[0.0; 2]; 2];
    let mut rhs = [0.0; 2];
    for (r, eq) in eqs.iter().enumerate() {
        for &(edge, coef) in eq {
            match unknowns.iter().position(|&u| u == edge) {
                Some(c) => m[r][c] += coef,
                None => rhs[r] -= coef * e[edge],
            }
        }
    }
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det == 0.0 {
        return None;
    }
    e[unknowns[0]] = (rhs[0] * m[1][1] - m[0][1] * rhs[1]) / det;
    e[unknowns[1]] = (m[0][0] * rhs[1] - rhs[0] * m[1][0]) / det;
    EdgeLengths::from_array(e).ok()
}

fn perimeter_sample(seed: u64, i: usize) -> Outcome {
    let mut rng = sample_rng(seed, i as u64);
    let pairing = FacetPairing::ALL[i % 3];
    for attempt in 1..=MAX_REJECTIONS {
        if let Some(l) = paired_perimeter_edges(&mut rng, pairing) {
            let imp = perimeter_pairing_implication(&l, pairing, 1e-12);
            let per = imp.perimeter_residuals[0].max(imp.perimeter_residuals[1]);
            let implied = imp.implied_residuals.iter().copied().fold(0.0, f64::max);
            return Outcome::accepted(attempt, vec![Some(per), Some(implied)]);
        }
    }
    Outcome::rejected(MAX_REJECTIONS)
}

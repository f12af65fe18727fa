use std::fmt::Write as _;

use serde::Serialize;
use tetrakit::heron_forms::reversible_factors;
use tetrakit::sweep::{run_sweep, Execution, SweepConfig};
use tetrakit::tetra::DEFAULT_CLASSIFY_TOL;
use tetrakit::{
    build_reversible, build_reversible_allow_degenerate, cayley_menger_volume_sq,
    classify_edge_lengths, edge_lengths, isosceles_volume_sq, realizability, reversible_volume_sq,
    reversible_volume_sq_expanded, Classification, DegeneracyKind, EdgeLengths, FacetPairing,
    GeometryError, RealizabilityVerdict, ReconstructionReport, Tetrahedron, Vec3, Verdict,
};

use crate::input::{self, Input};
use crate::{CommonArgs, Failure, InputArgs};

pub struct Output {
    pub text: String,
    pub code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output is always serializable");
    s.push('\n');
    s
}

/// 17 significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn resolve(args: &InputArgs) -> Result<Input, Failure> {
    let given = [
        args.vertices.is_some(),
        args.edges.is_some(),
        args.reversible.is_some(),
        args.isosceles.is_some(),
        args.facets.is_some(),
        args.input.is_some(),
    ]
    .iter()
    .filter(|&&g| g)
    .count();
    if given != 1 {
        return Err(Failure::usage(
            "give exactly one of --vertices, --edges, --reversible, --isosceles, --facets, --input",
        ));
    }
    if let Some(s) = &args.vertices {
        return Ok(Input::Vertices(input::vertices_from_list(
            &input::parse_list(s, 12, "vertices")?,
        )?));
    }
    if let Some(s) = &args.edges {
        return Ok(Input::Edges(input::edges_from_list(&input::parse_list(
            s, 6, "edges",
        )?)?));
    }
    if let Some(s) = &args.reversible {
        return Ok(Input::Reversible(input::reversible_from_list(
            &input::parse_list(s, 4, "reversible")?,
        )?));
    }
    if let Some(s) = &args.isosceles {
        let v = input::parse_list(s, 3, "isosceles")?;
        if v.iter().any(|&x| !(x > 0.0)) {
            return Err(Failure::usage("--isosceles lengths must be positive"));
        }
        return Ok(Input::Isosceles([v[0], v[1], v[2]]));
    }
    if let Some(p) = &args.facets {
        return match input::read_file(p)? {
            f @ Input::Facets(_) => Ok(f),
            _ => Err(Failure::usage(
                "--facets file must contain a `facets` array",
            )),
        };
    }
    input::read_file(args.input.as_ref().expect("counted above"))
}

/// Tetrahedron for inputs that determine one, rejecting flat or impossible data.
fn tetrahedron_for(input: &Input) -> Result<Tetrahedron, Failure> {
    match input {
        Input::Vertices(t) => Ok(*t),
        Input::Reversible(p) => {
            let r = realizability(p);
            if !r.realizable {
                return Err(GeometryError::NotRealizable(format!(
                    "volume factors ({}, {}) include a negative",
                    r.factor1, r.factor2
                ))
                .into());
            }
            if r.degeneracy_kind != DegeneracyKind::None {
                return Err(GeometryError::DegenerateTetrahedron {
                    six_volume: 0.0,
                    floor: 0.0,
                }
                .into());
            }
            Ok(build_reversible(p)?)
        }
        Input::Edges(l) => tetra_from_edges(l),
        Input::Isosceles(abc) => tetra_from_edges(&input::isosceles_edges(*abc)?),
        Input::Facets(d) => Ok(tetrakit::reconstruct(d)?.tetrahedron),
    }
}

fn tetra_from_edges(l: &EdgeLengths) -> Result<Tetrahedron, Failure> {
    let v2 = cayley_menger_volume_sq(l);
    if v2 < 0.0 {
        return Err(GeometryError::NotRealizable(format!("Cayley–Menger V² = {v2:e} < 0")).into());
    }
    tetrakit::tetra::check_edge_realizable(l)?;
    Ok(Tetrahedron::from_edge_lengths(l)?)
}

#[derive(Serialize)]
struct ClassifyOut<'a> {
    verdict: Verdict,
    passing_pairings: Vec<FacetPairing>,
    #[serde(flatten)]
    classification: &'a Classification,
}

pub fn classify(args: &InputArgs, common: CommonArgs) -> Result<Output, Failure> {
    let tol = DEFAULT_CLASSIFY_TOL * common.tol;
    let input = resolve(args)?;
    let c = match &input {
        Input::Edges(l) => {
            reject_non_embeddable(l)?;
            classify_edge_lengths(l, tol)?
        }
        Input::Isosceles(abc) => {
            let l = input::isosceles_edges(*abc)?;
            reject_non_embeddable(&l)?;
            classify_edge_lengths(&l, tol)?
        }
        other => tetrakit::classify(&tetrahedron_for(other)?, tol)?,
    };
    if common.json {
        return Ok(Output::ok(json(&ClassifyOut {
            verdict: c.verdict,
            passing_pairings: c.passing_pairings(),
            classification: &c,
        })));
    }
    let mut s = String::new();
    writeln!(s, "verdict: {}", c.verdict).unwrap();
    writeln!(s, "tolerance: {}", num(c.tol)).unwrap();
    writeln!(s, "regular residual: {}", num(c.regular_residual)).unwrap();
    writeln!(s, "isosceles residual: {}", num(c.isosceles_residual)).unwrap();
    for p in &c.pairings {
        writeln!(
            s,
            "pairing {}: {}  congruence [{}, {}]  area [{}, {}]",
            p.pairing.label(),
            if p.passes { "pass" } else { "fail" },
            num(p.congruence_residuals[0]),
            num(p.congruence_residuals[1]),
            num(p.area_residuals[0]),
            num(p.area_residuals[1]),
        )
        .unwrap();
    }
    let passing: Vec<&str> = c.passing_pairings().iter().map(|p| p.label()).collect();
    writeln!(
        s,
        "passing pairings: {}",
        if passing.is_empty() {
            "none".into()
        } else {
            passing.join("; ")
        }
    )
    .unwrap();
    Ok(Output::ok(s))
}

fn reject_non_embeddable(l: &EdgeLengths) -> Result<(), Failure> {
    let v2 = cayley_menger_volume_sq(l);
    if v2 < 0.0 && tetrakit::tetra::check_edge_realizable(l).is_err() {
        let floor = tetrakit::tetra::EDGE_DEGENERACY_FLOOR * l.max().powi(6);
        if -v2 > floor {
            return Err(
                GeometryError::NotRealizable(format!("Cayley–Menger V² = {v2:e} < 0")).into(),
            );
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct MethodResult {
    method: &'static str,
    volume_sq: f64,
    volume: f64,
}

#[derive(Serialize)]
struct ClosedForm {
    formula: &'static str,
    volume_sq: f64,
    /// Unfactored `(c²d² − (a²−b²)²)·(a²+b²−(c²+d²)/2)/72`, reversible input only.
    #[serde(skip_serializing_if = "Option::is_none")]
    volume_sq_expanded: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    factors: Option<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    realizability: Option<RealizabilityVerdict>,
}

#[derive(Serialize)]
struct VolumeOut {
    methods: Vec<MethodResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    closed_form: Option<ClosedForm>,
    /// Largest relative difference of V² between any two methods.
    max_cross_residual: f64,
}

fn method(name: &'static str, v2: f64) -> MethodResult {
    MethodResult {
        method: name,
        volume_sq: v2,
        volume: v2.max(0.0).sqrt(),
    }
}

fn rel(x: f64, y: f64) -> f64 {
    let s = x.abs().max(y.abs());
    if s == 0.0 {
        0.0
    } else {
        (x - y).abs() / s
    }
}

pub fn volume(args: &InputArgs, common: CommonArgs) -> Result<Output, Failure> {
    let input = resolve(args)?;
    let mut methods = Vec::new();
    let mut closed_form = None;

    let edges: EdgeLengths = match &input {
        Input::Vertices(t) => {
            methods.push(method(
                "vertex-determinant",
                tetrakit::volume_from_vertices(t).powi(2),
            ));
            edge_lengths(t)
        }
        Input::Facets(d) => {
            let t = tetrakit::reconstruct(d)?.tetrahedron;
            methods.push(method(
                "vertex-determinant",
                tetrakit::volume_from_vertices(&t).powi(2),
            ));
            edge_lengths(&t)
        }
        Input::Reversible(p) => {
            let r = realizability(p);
            if !r.realizable {
                return Err(GeometryError::NotRealizable(format!(
                    "closed-form V² = {:e} with factors ({:e}, {:e})",
                    reversible_volume_sq(p),
                    r.factor1,
                    r.factor2
                ))
                .into());
            }
            let t = build_reversible_allow_degenerate(p)?;
            methods.push(method(
                "vertex-determinant",
                tetrakit::volume_from_vertices(&t).powi(2),
            ));
            closed_form = Some(ClosedForm {
                formula: "reversible",
                volume_sq: reversible_volume_sq(p),
                volume_sq_expanded: Some(reversible_volume_sq_expanded(p)),
                factors: Some(reversible_factors(p)),
                realizability: Some(r),
            });
            p.edge_lengths()?
        }
        Input::Isosceles([a, b, c]) => {
            let v2 = isosceles_volume_sq(*a, *b, *c);
            if v2 < 0.0 {
                return Err(
                    GeometryError::NotRealizable(format!("closed-form V² = {v2:e} < 0")).into(),
                );
            }
            closed_form = Some(ClosedForm {
                formula: "isosceles",
                volume_sq: v2,
                volume_sq_expanded: None,
                factors: None,
                realizability: None,
            });
            input::isosceles_edges([*a, *b, *c])?
        }
        Input::Edges(l) => *l,
    };

    let cm = cayley_menger_volume_sq(&edges);
    if methods.is_empty() && closed_form.is_none() {
        // edge-only input: the embedding gives the vertex path when it exists
        if cm < 0.0 {
            return Err(
                GeometryError::NotRealizable(format!("Cayley–Menger V² = {cm:e} < 0")).into(),
            );
        }
        if let Ok(t) = Tetrahedron::from_edge_lengths(&edges) {
            methods.push(method(
                "vertex-determinant",
                tetrakit::volume_from_vertices(&t).powi(2),
            ));
        }
    }
    if let (Some(cf), true) = (&closed_form, methods.is_empty()) {
        if let Ok(t) = Tetrahedron::from_edge_lengths(&edges) {
            methods.push(method(
                "vertex-determinant",
                tetrakit::volume_from_vertices(&t).powi(2),
            ));
        } else if cf.volume_sq == 0.0 {
            methods.push(method("vertex-determinant", 0.0));
        }
    }
    methods.push(method("cayley-menger", cm));
    if let Some(cf) = &closed_form {
        methods.push(method("closed-form", cf.volume_sq));
    }

    let mut max_cross_residual = 0.0f64;
    for i in 0..methods.len() {
        for j in i + 1..methods.len() {
            max_cross_residual =
                max_cross_residual.max(rel(methods[i].volume_sq, methods[j].volume_sq));
        }
    }
    let out = VolumeOut {
        methods,
        closed_form,
        max_cross_residual,
    };
    if common.json {
        return Ok(Output::ok(json(&out)));
    }

    let mut s = String::new();
    for m in &out.methods {
        writeln!(
            s,
            "{:<20} V = {}   V² = {}",
            m.method,
            num(m.volume),
            num(m.volume_sq)
        )
        .unwrap();
    }
    if let Some(cf) = &out.closed_form {
        if let (Some(exp), Some(f)) = (cf.volume_sq_expanded, cf.factors) {
            writeln!(
                s,
                "72·V² = (c²d² − (a²−b²)²)·(a²+b² − (c²+d²)/2)   = {}",
                num(72.0 * exp)
            )
            .unwrap();
            writeln!(
                s,
                "72·V² = (cd+a²−b²)·(cd−a²+b²)·(a²+b²−(c²+d²)/2) = {} · {} · {} = {}",
                num(f[0]),
                num(f[1]),
                num(f[2]),
                num(72.0 * cf.volume_sq)
            )
            .unwrap();
        }
        if let Some(r) = &cf.realizability {
            writeln!(
                s,
                "realizable: {}   degeneracy: {}",
                r.realizable,
                match r.degeneracy_kind {
                    DegeneracyKind::None => "none",
                    DegeneracyKind::Parallelogram => "parallelogram",
                    DegeneracyKind::Trapezoid => "trapezoid",
                    DegeneracyKind::Both => "parallelogram+trapezoid",
                }
            )
            .unwrap();
        }
    }
    writeln!(
        s,
        "max cross-method residual: {}",
        num(out.max_cross_residual)
    )
    .unwrap();
    Ok(Output::ok(s))
}

#[derive(Serialize)]
struct VerticesOut {
    vertices: [Vec3; 4],
    volume: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    report: Option<ReportOut>,
}

#[derive(Serialize)]
struct ReportOut {
    input_closure_residual: f64,
    closure_repaired: bool,
    relabeled: bool,
    roundtrip_normal_error: f64,
    roundtrip_area_error: f64,
}

impl From<&ReconstructionReport> for ReportOut {
    fn from(r: &ReconstructionReport) -> Self {
        ReportOut {
            input_closure_residual: r.input_closure_residual,
            closure_repaired: r.closure_repaired,
            relabeled: r.relabeled,
            roundtrip_normal_error: r.roundtrip_normal_error,
            roundtrip_area_error: r.roundtrip_area_error,
        }
    }
}

fn render_vertices(out: &VerticesOut) -> String {
    let mut s = String::new();
    for (i, v) in out.vertices.iter().enumerate() {
        writeln!(s, "v{i} = ({}, {}, {})", num(v.x()), num(v.y()), num(v.z())).unwrap();
    }
    writeln!(s, "volume = {}", num(out.volume)).unwrap();
    if let Some(r) = &out.report {
        writeln!(
            s,
            "input closure residual: {}",
            num(r.input_closure_residual)
        )
        .unwrap();
        writeln!(s, "closure repaired: {}", r.closure_repaired).unwrap();
        writeln!(s, "relabeled facets 2,3: {}", r.relabeled).unwrap();
        writeln!(
            s,
            "round-trip normal error (rad): {}",
            num(r.roundtrip_normal_error)
        )
        .unwrap();
        writeln!(
            s,
            "round-trip area error (rel): {}",
            num(r.roundtrip_area_error)
        )
        .unwrap();
    }
    s
}

pub fn reconstruct(args: &InputArgs, common: CommonArgs) -> Result<Output, Failure> {
    let Input::Facets(d) = resolve(args)? else {
        return Err(Failure::usage(
            "reconstruct needs facet data (--facets or an --input file with `facets`)",
        ));
    };
    let r = tetrakit::reconstruct(&d)?;
    let out = VerticesOut {
        vertices: r.tetrahedron.vertices(),
        volume: tetrakit::volume_from_vertices(&r.tetrahedron),
        report: Some((&r).into()),
    };
    Ok(Output::ok(if common.json {
        json(&out)
    } else {
        render_vertices(&out)
    }))
}

pub fn build(args: &InputArgs, common: CommonArgs) -> Result<Output, Failure> {
    let input = resolve(args)?;
    let report = match &input {
        Input::Facets(d) => Some(tetrakit::reconstruct(d)?),
        _ => None,
    };
    let t = match &report {
        Some(r) => r.tetrahedron,
        None => tetrahedron_for(&input)?,
    };
    let out = VerticesOut {
        vertices: t.vertices(),
        volume: tetrakit::volume_from_vertices(&t),
        report: report.as_ref().map(Into::into),
    };
    Ok(Output::ok(if common.json {
        json(&out)
    } else {
        render_vertices(&out)
    }))
}

pub fn sweep(
    name: &str,
    samples: usize,
    seed: u64,
    sequential: bool,
    common: CommonArgs,
) -> Result<Output, Failure> {
    if samples == 0 {
        return Err(Failure::usage("--samples must be at least 1"));
    }
    if !(common.tol > 0.0) {
        return Err(Failure::usage("--tol must be positive"));
    }
    let cfg = SweepConfig {
        samples,
        seed,
        tol_scale: common.tol,
        execution: if sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        },
    };
    let report = run_sweep(name, &cfg).map_err(|e| Failure::usage(e.to_string()))?;
    let code = if report.pass { 0 } else { 6 };
    if common.json {
        return Ok(Output {
            text: json(&report),
            code,
        });
    }
    let mut s = String::new();
    writeln!(
        s,
        "sweep {}  seed {}  accepted {}/{}  attempted {}  ({:.2} s)",
        report.sweep,
        report.seed,
        report.samples_accepted,
        samples,
        report.samples_attempted,
        report.wall_time_secs
    )
    .unwrap();
    for inv in &report.invariants {
        writeln!(
            s,
            "  {:<28} {}  max {}  mean {}  bound {}  n={} failures={}",
            inv.name,
            if inv.pass { "PASS" } else { "FAIL" },
            num(inv.max),
            num(inv.mean),
            num(inv.bound),
            inv.count,
            inv.failures
        )
        .unwrap();
    }
    writeln!(s, "result: {}", if report.pass { "PASS" } else { "FAIL" }).unwrap();
    Ok(Output { text: s, code })
}

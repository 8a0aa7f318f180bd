//! Command dispatch and deterministic reports for the `gkz` binary.
//!
//! Reports are JSON values with rationals as `"p/q"` strings and 1-based
//! column indices. Object keys are sorted, so output is byte-identical
//! across runs and thread counts.

pub mod problem;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::dmodule::{self, AnnihilationReport};
use crate::error::{GkzError, Result};
use crate::lattice::{self, IntegerMatrix};
use crate::nilsson::{self, BasisElement, GevreyDiagnostic, SolutionBasis, Window};
use crate::rational::{self, q, Q};
use crate::series::{self, Term};
use crate::triangulation::{self, CoveringStatus};
use crate::weight::WeightVector;

pub use problem::{parse_problem, serialize_problem, ProblemFile};

pub const DEFAULT_MIN_TERMS: usize = 30;
pub const GEVREY_DEFAULT_MIN_TERMS: usize = 200;

const FAN_CAVEAT: &str = "membership is tested for the secondary cone C(T_w); whether w lies in the interior of a cone of the finer A-hypergeometric fan is not decided";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Triangulate,
    Cone,
    Volume,
    Exponents,
    Series,
    Verify,
    Nilsson,
    Gevrey,
    Repro,
}

impl Command {
    pub const ALL: [Command; 9] = [
        Command::Triangulate,
        Command::Cone,
        Command::Volume,
        Command::Exponents,
        Command::Series,
        Command::Verify,
        Command::Nilsson,
        Command::Gevrey,
        Command::Repro,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Triangulate => "triangulate",
            Command::Cone => "cone",
            Command::Volume => "volume",
            Command::Exponents => "exponents",
            Command::Series => "series",
            Command::Verify => "verify",
            Command::Nilsson => "nilsson",
            Command::Gevrey => "gevrey",
            Command::Repro => "repro",
        }
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Command::ALL.into_iter().find(|c| c.name() == s).ok_or_else(|| format!("unknown command {s:?}"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    /// Overrides the problem window with `weight_hi = W`.
    pub window: Option<Q>,
    pub support_bound: Option<u64>,
    pub golden_dir: Option<PathBuf>,
    /// For `repro`: write the current output as the new golden files.
    pub bless: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: Value,
    /// False when a check inside the report failed (exit code 1).
    pub passed: bool,
}

/// Exit code for an error: 2 for bad input or unmet preconditions, 1 otherwise.
pub fn exit_code(err: &GkzError) -> i32 {
    match err {
        GkzError::CoveringFailed(_)
        | GkzError::GevreyDimensionMismatch { .. }
        | GkzError::Internal(_)
        | GkzError::ExtensionFailed(_)
        | GkzError::EmptyTriangulation => 1,
        _ => 2,
    }
}

fn require<'a, T>(value: &'a Option<T>, field: &str, command: Command) -> Result<&'a T> {
    value.as_ref().ok_or_else(|| GkzError::Input {
        field: field.to_string(),
        message: format!("required by `{}`", command.name()),
    })
}

fn strs(v: &[Q]) -> Value {
    Value::from(rational::fmt_vec(v))
}

fn ints(v: &[BigInt]) -> Value {
    Value::from(v.iter().map(|x| x.to_string()).collect::<Vec<_>>())
}

fn one_based(set: &[usize]) -> Value {
    Value::from(set.iter().map(|j| j + 1).collect::<Vec<_>>())
}

fn sets(simplices: &[Vec<usize>]) -> Value {
    Value::Array(simplices.iter().map(|s| one_based(s)).collect())
}

fn covering(c: CoveringStatus) -> Value {
    match c {
        CoveringStatus::Verified => Value::from("verified"),
        CoveringStatus::Sampled(k) => Value::from(format!("sampled({k})")),
        CoveringStatus::Unverified => Value::from("unverified"),
    }
}

fn float(x: f64) -> Value {
    Value::from(format!("{x:.6}"))
}

fn window_for(problem: &ProblemFile, opts: &Options, default_terms: usize) -> Window {
    match (&opts.window, &problem.window) {
        (Some(hi), _) => Window::WeightBound(hi.clone()),
        (None, Some(w)) => w.clone(),
        (None, None) => Window::MinTerms(default_terms),
    }
}

fn term_value(base: &[Q], t: &Term) -> Value {
    let e: Vec<Q> = base.iter().zip(&t.offset).map(|(x, u)| x + rational::qi(u)).collect();
    json!({
        "offset": ints(&t.offset),
        "exponent": strs(&e),
        "coefficient": rational::fmt_rational(&t.coefficient),
        "weight": rational::fmt_rational(&t.weight),
    })
}

fn element_summary(e: &BasisElement) -> Value {
    let s = &e.series;
    let init: Vec<Value> = e.initial_form.terms.iter().map(|t| term_value(&s.base.v, t)).collect();
    json!({
        "sigma": one_based(&e.sigma),
        "k": e.k,
        "exponent": strs(&s.base.v),
        "nsupp": one_based(&s.base.nsupp()),
        "terms": s.len(),
        "weight_hi": rational::fmt_rational(&s.weight_hi),
        "convergent": e.convergent,
        "initial_form": {
            "terms": init,
            "weight": rational::fmt_rational(&e.initial_form.weight.base()),
            "trustworthy": e.initial_form.trustworthy,
        },
    })
}

fn basis_header(b: &SolutionBasis) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("direction".into(), problem::weight_value(&b.direction));
    m.insert("realized_weight".into(), strs(&b.realized));
    m.insert("simplices".into(), sets(&b.simplices));
    m.insert("covering".into(), covering(b.covering));
    m.insert("dimension".into(), Value::from(b.dimension));
    m.insert("genericity".into(), json!({ "ok": b.genericity.ok(), "violations": b.genericity.violations }));
    m
}

fn annihilation_value(r: &AnnihilationReport) -> Value {
    let failures: Vec<Value> = r
        .failures()
        .iter()
        .map(|c| json!({ "u": ints(&c.binomial.u), "first_residual_offset": c.failure.as_ref().map(|f| ints(f)) }))
        .collect();
    json!({
        "passed": r.passed(),
        "euler_ok": r.euler_ok,
        "support_bound": r.support_bound,
        "binomials_checked": r.binomials_checked.len(),
        "binomials_vacuous": r.vacuous,
        "terms_compared": r.binomials_checked.iter().map(|c| c.compared_terms).sum::<usize>(),
        "failures": failures,
        "frontier_excluded_weight": rational::fmt_rational(&r.frontier_excluded_weight),
        "caveats": r.caveats,
    })
}

fn triangulate_report(p: &ProblemFile) -> Result<Outcome> {
    let w = require(&p.weight, "weight", Command::Triangulate)?;
    let t = triangulation::triangulate(&p.matrix, w)?;
    let volumes: Vec<u64> = t.simplices.iter().map(|s| triangulation::simplex_volume(&p.matrix, s)).collect();
    let report = json!({
        "command": "triangulate",
        "weight": problem::weight_value(w),
        "simplices": sets(&t.simplices),
        "volumes": volumes,
        "total_volume": t.volume(&p.matrix),
        "covering": covering(t.covering),
        "caveats": [FAN_CAVEAT],
    });
    Ok(Outcome { report, passed: true })
}

fn cone_report(p: &ProblemFile) -> Result<Outcome> {
    let w = require(&p.weight, "weight", Command::Cone)?;
    let t = triangulation::triangulate(&p.matrix, w)?;
    let raw = triangulation::secondary_cone(&p.matrix, &t, false)?;
    let cone = triangulation::secondary_cone(&p.matrix, &t, true)?;
    let report = json!({
        "command": "cone",
        "simplices": sets(&t.simplices),
        "inequalities": cone.inequalities.iter().map(|b| ints(b)).collect::<Vec<_>>(),
        "inequalities_before_reduction": raw.inequalities.len(),
        "meaning": "w·b > 0 for every listed b",
        "contains_weight": cone.contains(w),
        "caveats": [FAN_CAVEAT],
    });
    Ok(Outcome { report, passed: cone.contains(w) })
}

fn volume_report(p: &ProblemFile) -> Result<Outcome> {
    let a = &p.matrix;
    let all: Vec<usize> = (0..a.n()).collect();
    let kernel = lattice::kernel_basis(a)?;
    let pointed = lattice::is_pointed(a);
    let mut m = Map::new();
    m.insert("command".into(), Value::from("volume"));
    m.insert("d".into(), Value::from(a.d()));
    m.insert("n".into(), Value::from(a.n()));
    m.insert("kernel_basis".into(), Value::Array(kernel.vectors.iter().map(|v| ints(v)).collect()));
    m.insert("pointed".into(), Value::from(pointed.pointed));
    m.insert("pointed_certificate".into(), pointed.certificate.as_ref().map_or(Value::Null, |c| ints(c)));
    m.insert("homogeneous".into(), Value::from(a.is_homogeneous()));
    m.insert("normalized_volume".into(), Value::from(lattice::normalized_volume(a, &all)));
    m.insert("degree_bound".into(), Value::from(dmodule::degree_bound(a).to_string()));
    m.insert("rho".into(), serde_json::to_value(lattice::rho_homogenize(a).rows()).unwrap());
    let mut passed = true;
    if let Some(tau) = &p.tau {
        m.insert("tau".into(), one_based(tau));
        m.insert("tau_volume".into(), Value::from(lattice::normalized_volume(a, tau)));
    }
    if let Some(w) = &p.weight {
        let t = triangulation::triangulate(a, w)?;
        let sum = t.volume(a);
        m.insert("triangulation_volume".into(), Value::from(sum));
        if a.is_homogeneous() {
            let agrees = sum == lattice::normalized_volume(a, &all);
            m.insert("triangulation_volume_matches".into(), Value::from(agrees));
            passed &= agrees;
        }
    }
    Ok(Outcome { report: Value::Object(m), passed })
}

fn exponents_report(p: &ProblemFile) -> Result<Outcome> {
    let a = &p.matrix;
    let w = require(&p.weight, "weight", Command::Exponents)?;
    let beta = require(&p.beta, "beta", Command::Exponents)?;
    let t = triangulation::triangulate(a, w)?;
    let mut simplices = Vec::new();
    let mut all = Vec::new();
    for sigma in &t.simplices {
        let om = series::omega_representatives(a, sigma, w)?;
        let mut reps = Vec::new();
        for (k, label) in om.representatives.iter().zip(&om.class_labels) {
            let e = series::exponent_v(a, sigma, k, beta)?;
            let ns = series::negative_support(&e.v, a, p.nsupp_radius)?;
            reps.push(json!({
                "k": k,
                "class": ints(label),
                "exponent": strs(&e.v),
                "nsupp": one_based(&ns.nsupp),
                "minimal_negative_support": ns.minimal,
                "witness": ns.witness.as_ref().map(|u| ints(u)),
            }));
            all.push(e);
        }
        simplices.push(json!({
            "sigma": one_based(sigma),
            "volume": triangulation::simplex_volume(a, sigma),
            "quotient_moduli": ints(&om.moduli),
            "representatives": reps,
        }));
    }
    let g = series::genericity_certificate(&all);
    let report = json!({
        "command": "exponents",
        "beta": strs(beta),
        "simplices": simplices,
        "nsupp_radius": p.nsupp_radius,
        "genericity": { "ok": g.ok(), "violations": g.violations },
    });
    Ok(Outcome { report, passed: true })
}

fn nilsson_for(p: &ProblemFile, opts: &Options, command: Command) -> Result<SolutionBasis> {
    let w = require(&p.weight, "weight", command)?;
    let beta = require(&p.beta, "beta", command)?;
    nilsson::nilsson_basis(&p.matrix, beta, w, &window_for(p, opts, DEFAULT_MIN_TERMS))
}

fn series_report(p: &ProblemFile, opts: &Options) -> Result<Outcome> {
    let b = nilsson_for(p, opts, Command::Series)?;
    let series: Vec<Value> = b
        .elements
        .iter()
        .map(|e| {
            let mut v = element_summary(e);
            let terms: Vec<Value> = e.series.terms.iter().map(|t| term_value(&e.series.base.v, t)).collect();
            v.as_object_mut().unwrap().insert("term_list".into(), Value::Array(terms));
            v
        })
        .collect();
    let mut m = basis_header(&b);
    m.insert("command".into(), Value::from("series"));
    m.insert("series".into(), Value::Array(series));
    Ok(Outcome { report: Value::Object(m), passed: true })
}

fn verify_report(p: &ProblemFile, opts: &Options) -> Result<Outcome> {
    let b = nilsson_for(p, opts, Command::Verify)?;
    let beta = p.beta.as_ref().unwrap();
    let bound = opts.support_bound.unwrap_or(p.support_bound);
    let mut passed = true;
    let mut results = Vec::new();
    for e in &b.elements {
        let r = dmodule::verify_annihilation(&e.series, &p.matrix, beta, bound)?;
        passed &= r.passed();
        results.push(json!({
            "sigma": one_based(&e.sigma),
            "k": e.k,
            "terms": e.series.len(),
            "annihilation": annihilation_value(&r),
        }));
    }
    let mut m = basis_header(&b);
    m.insert("command".into(), Value::from("verify"));
    m.insert("passed".into(), Value::from(passed));
    m.insert("series".into(), Value::Array(results));
    Ok(Outcome { report: Value::Object(m), passed })
}

fn nilsson_report(p: &ProblemFile, opts: &Options) -> Result<Outcome> {
    let b = nilsson_for(p, opts, Command::Nilsson)?;
    let conv = nilsson::convergent_subbasis(&b);
    let mut m = basis_header(&b);
    m.insert("command".into(), Value::from("nilsson"));
    m.insert("volume_sum".into(), Value::from(b.simplices.iter().map(|s| triangulation::simplex_volume(&p.matrix, s)).sum::<u64>()));
    m.insert("series".into(), Value::Array(b.elements.iter().map(element_summary).collect()));
    m.insert(
        "convergent".into(),
        json!({ "dimension": conv.dimension, "simplices": sets(&conv.simplices) }),
    );
    m.insert("caveats".into(), json!([FAN_CAVEAT]));
    Ok(Outcome { report: Value::Object(m), passed: true })
}

/// `(1,…,1) + ε (0, 1, 4, 9, …)`: a perturbation of the all-ones weight.
pub fn default_w_tau(len: usize) -> WeightVector {
    WeightVector::with_eps(vec![q(1); len], (0..len).map(|i| q((i * i) as i64)).collect())
}

fn gevrey_value(b: &SolutionBasis, diag: &GevreyDiagnostic) -> Vec<Value> {
    b.elements
        .iter()
        .enumerate()
        .map(|(i, e)| {
            let mut v = element_summary(e);
            let order = match &diag.estimated_order[i] {
                Ok(est) => json!({
                    "order": float(est.order),
                    "interval": [float(est.lower), float(est.upper)],
                    "terms_used": est.terms_used,
                    "degrees": est.degrees,
                }),
                Err(msg) => json!({ "error": msg }),
            };
            let obj = v.as_object_mut().unwrap();
            obj.insert("estimated_order".into(), order);
            obj.insert("contained_in_nilsson".into(), Value::from(diag.contained_in_nilsson[i]));
            v
        })
        .collect()
}

fn gevrey_report(p: &ProblemFile, opts: &Options) -> Result<Outcome> {
    let beta = require(&p.beta, "beta", Command::Gevrey)?;
    let tau = require(&p.tau, "tau", Command::Gevrey)?;
    let w_tau = p.w_tau.clone().unwrap_or_else(|| default_w_tau(tau.len()));
    let window = window_for(p, opts, GEVREY_DEFAULT_MIN_TERMS);
    let (b, diag) = nilsson::gevrey_basis(&p.matrix, beta, tau, &w_tau, &window)?;
    let passed = diag.contained_in_nilsson.iter().all(|&c| c) && diag.equals_nilsson != Some(false);
    let mut m = basis_header(&b);
    m.insert("command".into(), Value::from("gevrey"));
    m.insert("tau".into(), one_based(tau));
    m.insert("w_tau".into(), problem::weight_value(&w_tau));
    m.insert("tau_volume".into(), Value::from(diag.volume));
    m.insert("pos_equal".into(), Value::from(diag.pos_equal));
    m.insert("equals_nilsson".into(), diag.equals_nilsson.map_or(Value::Null, Value::from));
    m.insert("passed".into(), Value::from(passed));
    m.insert("series".into(), Value::Array(gevrey_value(&b, &diag)));
    m.insert(
        "caveats".into(),
        json!(["the Gevrey order is a least-squares estimate from the stored coefficients, not an exact invariant"]),
    );
    Ok(Outcome { report: Value::Object(m), passed })
}

/// Built-in problems exercised by `repro`, with their committed golden output.
pub const BUILTIN: [(&str, &str, &str); 2] = [
    (
        "twisted_cubic",
        include_str!("../../problems/twisted_cubic.json"),
        include_str!("../../golden/twisted_cubic.json"),
    ),
    (
        "outer_facet_example",
        include_str!("../../problems/outer_facet_example.json"),
        include_str!("../../golden/outer_facet_example.json"),
    ),
];

const REPRO_COMMANDS: [Command; 8] = [
    Command::Triangulate,
    Command::Cone,
    Command::Volume,
    Command::Exponents,
    Command::Series,
    Command::Verify,
    Command::Nilsson,
    Command::Gevrey,
];

/// Output of every command on a built-in problem, as the golden document.
pub fn golden_document(problem: &ProblemFile) -> Result<String> {
    let opts = Options::default();
    let mut m = Map::new();
    for c in REPRO_COMMANDS {
        let out = run(c, Some(problem), &opts)?;
        m.insert(c.name().to_string(), out.report);
    }
    Ok(render(&Value::Object(m), Format::Json))
}

fn first_difference(expected: &str, actual: &str) -> Option<Value> {
    let mut e = expected.lines();
    let mut a = actual.lines();
    let mut line = 1;
    loop {
        match (e.next(), a.next()) {
            (None, None) => return None,
            (x, y) if x == y => line += 1,
            (x, y) => return Some(json!({ "line": line, "expected": x, "actual": y })),
        }
    }
}

fn repro_report(opts: &Options) -> Result<Outcome> {
    let mut passed = true;
    let mut results = Vec::new();
    for (name, text, embedded) in BUILTIN {
        let problem = parse_problem(text)?;
        let actual = golden_document(&problem)?;
        let path = opts.golden_dir.as_ref().map(|d| d.join(format!("{name}.json")));
        if opts.bless {
            let path = path.as_ref().ok_or_else(|| GkzError::Input {
                field: "--golden-dir".into(),
                message: "required with --bless".into(),
            })?;
            std::fs::write(path, &actual)
                .map_err(|e| GkzError::Input { field: "--golden-dir".into(), message: e.to_string() })?;
        }
        let expected = match &path {
            Some(p) => std::fs::read_to_string(p)
                .map_err(|e| GkzError::Input { field: "--golden-dir".into(), message: format!("{}: {e}", p.display()) })?,
            None => embedded.to_string(),
        };
        let diff = first_difference(&expected, &actual);
        passed &= diff.is_none();
        results.push(json!({
            "problem": name,
            "matches": diff.is_none(),
            "first_difference": diff,
        }));
    }
    Ok(Outcome { report: json!({ "command": "repro", "passed": passed, "problems": results }), passed })
}

/// Runs one command. `problem` may be `None` only for `repro`.
pub fn run(command: Command, problem: Option<&ProblemFile>, opts: &Options) -> Result<Outcome> {
    if command == Command::Repro {
        return repro_report(opts);
    }
    let p = problem.ok_or_else(|| GkzError::Input {
        field: "--input".into(),
        message: format!("required by `{}`", command.name()),
    })?;
    let a: &IntegerMatrix = &p.matrix;
    a.check_full_rank()?;
    a.check_generates_lattice()?;
    match command {
        Command::Triangulate => triangulate_report(p),
        Command::Cone => cone_report(p),
        Command::Volume => volume_report(p),
        Command::Exponents => exponents_report(p),
        Command::Series => series_report(p, opts),
        Command::Verify => verify_report(p, opts),
        Command::Nilsson => nilsson_report(p, opts),
        Command::Gevrey => gevrey_report(p, opts),
        Command::Repro => unreachable!(),
    }
}

pub fn error_report(err: &GkzError) -> Value {
    json!({ "error": err.to_string(), "exit_code": exit_code(err) })
}

pub fn render(report: &Value, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).unwrap() + "\n",
        Format::Text => {
            let mut out = String::new();
            text(report, 0, &mut out);
            out
        }
    }
}

fn is_flat(v: &Value) -> bool {
    match v {
        Value::Array(items) => items.iter().all(|x| !x.is_object() && is_flat(x)),
        Value::Object(_) => false,
        _ => true,
    }
}

fn inline(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => format!("[{}]", items.iter().map(inline).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

fn text(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                if is_flat(x) {
                    let _ = writeln!(out, "{pad}{k}: {}", inline(x));
                } else {
                    let _ = writeln!(out, "{pad}{k}:");
                    text(x, indent + 1, out);
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                if is_flat(x) {
                    let _ = writeln!(out, "{pad}- {}", inline(x));
                } else {
                    let _ = writeln!(out, "{pad}-");
                    text(x, indent + 1, out);
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", inline(other));
        }
    }
}

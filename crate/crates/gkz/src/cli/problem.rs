//! Problem files: a JSON document with exact rationals written as strings.
//!
//! ```json
//! {
//!   "matrix": [[1, 0, 3], [0, 1, -1]],
//!   "beta": ["7/5", "11/7"],
//!   "weight": {"base": ["0", "0", "1"], "eps": ["1", "11/10", "0"]},
//!   "tau": [1, 2],
//!   "w_tau": ["1", "1"],
//!   "window": {"weight_hi": "20"},
//!   "bounds": {"support_bound": 5, "nsupp_radius": 10}
//! }
//! ```
//!
//! Column indices are 1-based. A weight is either a plain array or an object
//! with `base` and optional `eps` (further levels in `levels`).

use serde_json::{Map, Value};

use crate::error::{GkzError, Result};
use crate::lattice::IntegerMatrix;
use crate::nilsson::Window;
use crate::rational::{self, Q};
use crate::series::DEFAULT_NSUPP_RADIUS;
use crate::weight::WeightVector;

pub const DEFAULT_SUPPORT_BOUND: u64 = 6;

#[derive(Clone, Debug, PartialEq)]
pub struct ProblemFile {
    pub matrix: IntegerMatrix,
    pub beta: Option<Vec<Q>>,
    pub weight: Option<WeightVector>,
    /// 0-based, sorted.
    pub tau: Option<Vec<usize>>,
    pub w_tau: Option<WeightVector>,
    pub window: Option<Window>,
    pub support_bound: u64,
    pub nsupp_radius: u64,
}

fn input(field: &str, message: impl Into<String>) -> GkzError {
    GkzError::Input { field: field.to_string(), message: message.into() }
}

fn parse_q(field: &str, v: &Value) -> Result<Q> {
    match v {
        Value::String(s) => rational::parse_rational(s)
            .ok_or_else(|| input(field, format!("malformed rational {s:?} (expected \"p/q\" or an integer)"))),
        Value::Number(n) if n.is_i64() => Ok(rational::q(n.as_i64().unwrap())),
        other => Err(input(field, format!("expected a rational string, found {other}"))),
    }
}

fn parse_q_vec(field: &str, v: &Value) -> Result<Vec<Q>> {
    let Value::Array(items) = v else {
        return Err(input(field, "expected an array"));
    };
    items.iter().enumerate().map(|(i, x)| parse_q(&format!("{field}[{i}]"), x)).collect()
}

fn parse_weight(field: &str, v: &Value, n: usize) -> Result<WeightVector> {
    let levels = match v {
        Value::Array(_) => vec![parse_q_vec(field, v)?],
        Value::Object(m) => {
            let base = m.get("base").ok_or_else(|| input(field, "missing \"base\""))?;
            let mut levels = vec![parse_q_vec(&format!("{field}.base"), base)?];
            if let Some(eps) = m.get("eps") {
                levels.push(parse_q_vec(&format!("{field}.eps"), eps)?);
            }
            if let Some(Value::Array(more)) = m.get("levels") {
                for (i, l) in more.iter().enumerate() {
                    levels.push(parse_q_vec(&format!("{field}.levels[{i}]"), l)?);
                }
            }
            for key in m.keys() {
                if !["base", "eps", "levels"].contains(&key.as_str()) {
                    return Err(input(field, format!("unknown key {key:?}")));
                }
            }
            levels
        }
        _ => return Err(input(field, "expected an array or {\"base\", \"eps\"}")),
    };
    for (i, l) in levels.iter().enumerate() {
        if l.len() != n {
            let name = if i == 0 { "base".to_string() } else { format!("level {i}") };
            return Err(input(field, format!("{name} has length {}, expected {n}", l.len())));
        }
    }
    Ok(WeightVector::from_levels(levels))
}

fn parse_u64(field: &str, v: &Value) -> Result<u64> {
    v.as_u64().ok_or_else(|| input(field, format!("expected a natural number, found {v}")))
}

fn parse_matrix(v: &Value) -> Result<IntegerMatrix> {
    let Value::Array(rows) = v else {
        return Err(input("matrix", "expected an array of rows"));
    };
    let mut out = Vec::with_capacity(rows.len());
    for (i, r) in rows.iter().enumerate() {
        let Value::Array(entries) = r else {
            return Err(input(&format!("matrix[{i}]"), "expected an array of integers"));
        };
        let row = entries
            .iter()
            .enumerate()
            .map(|(j, x)| x.as_i64().ok_or_else(|| input(&format!("matrix[{i}][{j}]"), format!("expected an integer, found {x}"))))
            .collect::<Result<Vec<i64>>>()?;
        out.push(row);
    }
    IntegerMatrix::new(out).map_err(|e| input("matrix", e.to_string()))
}

pub fn parse_problem(text: &str) -> Result<ProblemFile> {
    let doc: Value = serde_json::from_str(text)
        .map_err(|e| input("document", format!("line {} column {}: {e}", e.line(), e.column())))?;
    let Value::Object(obj) = doc else {
        return Err(input("document", "expected a JSON object"));
    };
    from_object(&obj)
}

fn from_object(obj: &Map<String, Value>) -> Result<ProblemFile> {
    const KEYS: [&str; 7] = ["matrix", "beta", "weight", "tau", "w_tau", "window", "bounds"];
    if let Some(k) = obj.keys().find(|k| !KEYS.contains(&k.as_str())) {
        return Err(input(k, "unknown field"));
    }
    let matrix = parse_matrix(obj.get("matrix").ok_or_else(|| input("matrix", "missing"))?)?;
    let (d, n) = (matrix.d(), matrix.n());
    let beta = obj.get("beta").map(|v| parse_q_vec("beta", v)).transpose()?;
    if let Some(b) = &beta {
        if b.len() != d {
            return Err(input("beta", format!("has length {}, expected d = {d}", b.len())));
        }
    }
    let weight = obj.get("weight").map(|v| parse_weight("weight", v, n)).transpose()?;
    let tau = match obj.get("tau") {
        None => None,
        Some(Value::Array(items)) => {
            let mut t = Vec::with_capacity(items.len());
            for (i, x) in items.iter().enumerate() {
                let j = parse_u64(&format!("tau[{i}]"), x)? as usize;
                if j == 0 || j > n {
                    return Err(input(&format!("tau[{i}]"), format!("index {j} out of range 1..={n}")));
                }
                t.push(j - 1);
            }
            t.sort_unstable();
            t.dedup();
            Some(t)
        }
        Some(_) => return Err(input("tau", "expected an array of 1-based indices")),
    };
    let w_tau = match (obj.get("w_tau"), &tau) {
        (None, _) => None,
        (Some(_), None) => return Err(input("w_tau", "given without tau")),
        (Some(v), Some(t)) => Some(parse_weight("w_tau", v, t.len())?),
    };
    let window = match obj.get("window") {
        None => None,
        Some(Value::Object(m)) => match (m.get("weight_hi"), m.get("min_terms")) {
            (Some(hi), None) => Some(Window::WeightBound(parse_q("window.weight_hi", hi)?)),
            (None, Some(c)) => Some(Window::MinTerms(parse_u64("window.min_terms", c)? as usize)),
            _ => return Err(input("window", "give exactly one of weight_hi, min_terms")),
        },
        Some(_) => return Err(input("window", "expected an object")),
    };
    let mut support_bound = DEFAULT_SUPPORT_BOUND;
    let mut nsupp_radius = DEFAULT_NSUPP_RADIUS;
    match obj.get("bounds") {
        None => {}
        Some(Value::Object(m)) => {
            if let Some(v) = m.get("support_bound") {
                support_bound = parse_u64("bounds.support_bound", v)?;
            }
            if let Some(v) = m.get("nsupp_radius") {
                nsupp_radius = parse_u64("bounds.nsupp_radius", v)?;
            }
        }
        Some(_) => return Err(input("bounds", "expected an object")),
    }
    Ok(ProblemFile { matrix, beta, weight, tau, w_tau, window, support_bound, nsupp_radius })
}

pub(crate) fn weight_value(w: &WeightVector) -> Value {
    let strs = |l: &[Q]| Value::from(rational::fmt_vec(l));
    if w.is_concrete() {
        return strs(w.base());
    }
    let mut m = Map::new();
    m.insert("base".into(), strs(w.base()));
    m.insert("eps".into(), strs(&w.levels()[1]));
    if w.levels().len() > 2 {
        m.insert("levels".into(), Value::Array(w.levels()[2..].iter().map(|l| strs(l)).collect()));
    }
    Value::Object(m)
}

/// Canonical document for a problem; `parse_problem(serialize_problem(p)) == p`.
pub fn serialize_problem(p: &ProblemFile) -> String {
    let mut m = Map::new();
    m.insert("matrix".into(), serde_json::to_value(p.matrix.rows()).unwrap());
    if let Some(b) = &p.beta {
        m.insert("beta".into(), Value::from(rational::fmt_vec(b)));
    }
    if let Some(w) = &p.weight {
        m.insert("weight".into(), weight_value(w));
    }
    if let Some(t) = &p.tau {
        m.insert("tau".into(), Value::from(t.iter().map(|j| j + 1).collect::<Vec<_>>()));
    }
    if let Some(w) = &p.w_tau {
        m.insert("w_tau".into(), weight_value(w));
    }
    if let Some(win) = &p.window {
        let mut wm = Map::new();
        match win {
            Window::WeightBound(hi) => wm.insert("weight_hi".into(), Value::from(rational::fmt_rational(hi))),
            Window::MinTerms(c) => wm.insert("min_terms".into(), Value::from(*c)),
        };
        m.insert("window".into(), Value::Object(wm));
    }
    let mut bm = Map::new();
    bm.insert("support_bound".into(), Value::from(p.support_bound));
    bm.insert("nsupp_radius".into(), Value::from(p.nsupp_radius));
    m.insert("bounds".into(), Value::Object(bm));
    serde_json::to_string_pretty(&Value::Object(m)).unwrap() + "\n"
}

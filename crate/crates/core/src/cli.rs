//! Command implementations behind the `tropicount` binary. Each command
//! takes the input text and returns a JSON value; rendering and exit codes
//! live in the binary.

use crate::combinatorics::{enumerate_types, validate_degree, CombinatoricsError};
use crate::constraints::AffineConstraint;
use crate::count::{count_tropical, CountError, CountOptions, CountResult};
use crate::io::{
    count_result_json, int_value, point_value, ComplexJson, DecomposeJson, DegreeJson, IoError,
    ProblemJson,
};
use crate::linalg::Rational;
use crate::multiplicity::{check_2d_equivalence, kontsevich_oracle, MultiplicityError};
use crate::polyhedral::{
    adapted_decomposition, asymptotic_fan, check_complex, contains_in_one_skeleton, integral_rescale, Piece,
    PlacedCurve, PolyError,
};
use serde_json::{json, Value};
use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Count(#[from] CountError),
    #[error(transparent)]
    Degree(#[from] CombinatoricsError),
    #[error(transparent)]
    Multiplicity(#[from] MultiplicityError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// 2 for constraints that stayed special after all retries, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Count(CountError::NonGenericConstraints { .. }) => 2,
            _ => 1,
        }
    }
}

/// Command-line settings layered over the options in a problem file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub box_bound: Option<u64>,
    pub no_resample: bool,
    pub max_retries: Option<u32>,
    pub threads: Option<usize>,
    pub params: BTreeMap<String, i64>,
}

impl Overrides {
    pub fn apply(&self, o: &mut CountOptions) {
        if let Some(s) = self.seed {
            o.seed = s;
        }
        if let Some(b) = self.box_bound {
            o.box_bound = b;
        }
        if self.no_resample {
            o.allow_resample = false;
        }
        if let Some(r) = self.max_retries {
            o.max_retries = r;
        }
        if let Some(t) = self.threads {
            o.threads = t;
        }
    }
}

fn run_problem(p: &ProblemJson, ov: &Overrides) -> Result<(CountResult, Vec<AffineConstraint>), CliError> {
    let mut prob = p.resolve(&ov.params)?;
    ov.apply(&mut prob.options);
    let r = count_tropical(&prob.degree, &prob.constraints, &prob.options)?;
    Ok((r, prob.constraints))
}

pub fn cmd_count(text: &str, ov: &Overrides) -> Result<Value, CliError> {
    let p = ProblemJson::parse(text)?;
    let (r, _) = run_problem(&p, ov)?;
    let mut v = count_result_json(&r);
    if let Some(name) = &p.name {
        v["name"] = json!(name);
    }
    Ok(v)
}

/// Accepts a bare degree or a problem file.
pub fn cmd_types(text: &str) -> Result<Value, CliError> {
    let v: Value = serde_json::from_str(text).map_err(IoError::from)?;
    let dj: DegreeJson = match v.get("degree") {
        Some(d) => serde_json::from_value(d.clone()),
        None => serde_json::from_value(v),
    }
    .map_err(IoError::from)?;
    let d = dj.to_degree()?;
    validate_degree(&d)?;
    let types = enumerate_types(&d)?;
    let e = d.num_ends();
    let rows: Vec<Value> = types
        .iter()
        .map(|t| {
            let bounded = t.bounded_edges().len();
            let weights: Vec<u64> = t.edges.iter().map(|x| x.weight).collect();
            json!({
                "code": t.canonical_code(),
                "bounded_edges": bounded,
                "inner_weight": t.inner_weight(),
                "weights": weights,
            })
        })
        .collect();
    Ok(json!({
        "n": d.n,
        "e": e,
        "bounded_edges": e - 3,
        "count": types.len(),
        "types": rows,
    }))
}

/// Returns the table and whether every row balanced.
pub fn cmd_check2d(text: &str, ov: &Overrides) -> Result<(Value, bool), CliError> {
    let p = ProblemJson::parse(text)?;
    let prob = p.resolve(&ov.params)?;
    if prob.degree.n != 2 {
        return Err(MultiplicityError::WrongDimension(prob.degree.n).into());
    }
    if prob.constraints.iter().any(|c| c.codim() != 1) {
        return Err(CliError::Usage("check2d needs point constraints".into()));
    }
    let (r, _) = run_problem(&p, ov)?;
    let mut all = true;
    let mut rows = Vec::new();
    for c in &r.curves {
        let chk = check_2d_equivalence(&c.ty, &r.constraints_used)?;
        all &= chk.equal;
        rows.push(json!({
            "code": c.code,
            "lhs": int_value(&chk.lhs),
            "rhs": int_value(&chk.rhs),
            "equal": chk.equal,
            "contribution": int_value(&c.record.contribution),
        }));
    }
    Ok((
        json!({"total": int_value(&r.total), "all_equal": all, "rows": rows}),
        all,
    ))
}

pub fn cmd_decompose(text: &str, ov: &Overrides) -> Result<Value, CliError> {
    let input: DecomposeJson = serde_json::from_str(text).map_err(IoError::from)?;
    let fan = input.fan.to_fan()?;
    let mut curves: Vec<PlacedCurve> = input.curves.iter().map(|c| c.to_curve()).collect::<Result<_, _>>()?;
    let mut extra: Vec<Vec<Rational>> = input
        .extra_points
        .iter()
        .map(|p| p.iter().map(|q| q.value()).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()?;
    if let Some(p) = &input.problem {
        let (r, used) = run_problem(p, ov)?;
        curves.extend(r.curves.iter().map(|c| PlacedCurve::from(&c.solution)));
        if input.include_constraint_points {
            extra.extend(used.iter().filter(|c| c.codim() + 1 == c.n()).map(|c| c.base.clone()));
        }
    }
    if curves.iter().flat_map(|c| &c.vertices).any(|v| v.len() != fan.n) {
        return Err(CliError::Usage(format!("curve vertices must lie in dimension {}", fan.n)));
    }
    let complex = adapted_decomposition(&curves, &fan, &extra)?;
    let report = check_complex(&complex);
    let fan_ok = asymptotic_fan(&complex).map(|f| f.same_as(&fan)).unwrap_or(false);
    let mut skeleton = Vec::new();
    for (i, c) in curves.iter().enumerate() {
        for (j, e) in c.edges.iter().enumerate() {
            let start = c.vertices[e.tail].clone();
            let piece = match e.head {
                Some(h) => Piece::segment(start, c.vertices[h].clone()),
                None => Piece::ray(start, e.dir.iter().map(|&x| Rational::from_integer(x.into())).collect()),
            };
            skeleton.push(json!({"curve": i, "edge": j, "in_skeleton": contains_in_one_skeleton(&complex, &piece)}));
        }
    }
    let all_in = skeleton.iter().all(|s| s["in_skeleton"] == json!(true));
    let k = integral_rescale(&complex, &curves);
    let cj = ComplexJson::of(&complex);
    Ok(json!({
        "n": cj.n,
        "cells": cj.cells,
        "checks": {
            "face_fitting": report.face_fitting,
            "complete": report.complete,
            "issues": report.issues,
            "asymptotic_fan_matches": fan_ok,
            "skeleton_contains_curves": all_in,
            "edges": skeleton,
        },
        "rescale": int_value(&k),
        "vertices": complex_vertices(&complex),
    }))
}

fn complex_vertices(p: &crate::polyhedral::PolyhedralComplex) -> Vec<Value> {
    let mut pts: Vec<Vec<Rational>> = p.cells.iter().flat_map(|c| c.vertices()).collect();
    pts.sort();
    pts.dedup();
    pts.iter().map(|x| point_value(x)).collect()
}

pub fn cmd_oracle(dmax: usize) -> Result<Value, CliError> {
    if dmax == 0 {
        return Err(CliError::Usage("dmax must be at least 1".into()));
    }
    Ok(Value::Array(kontsevich_oracle(dmax).iter().map(int_value).collect()))
}

/// Plain-text rendering of a command result.
pub fn render_pretty(command: &str, v: &Value) -> String {
    let mut out = String::new();
    let s = |x: &Value| match x {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    match command {
        "count" => {
            out += &format!("total: {}\n", s(&v["total"]));
            for c in v["curves"].as_array().into_iter().flatten() {
                let deltas: Vec<String> = c["deltas"].as_array().into_iter().flatten().map(s).collect();
                out += &format!(
                    "{}  w={} D={} deltas=[{}] contribution={}\n",
                    s(&c["code"]),
                    s(&c["w"]),
                    s(&c["D"]),
                    deltas.join(","),
                    s(&c["contribution"])
                );
            }
            for w in v["warnings"].as_array().into_iter().flatten() {
                out += &format!("warning: {}\n", s(w));
            }
        }
        "types" => {
            out += &format!("{} types, e = {}, {} bounded edges each\n", s(&v["count"]), s(&v["e"]), s(&v["bounded_edges"]));
            for t in v["types"].as_array().into_iter().flatten() {
                out += &format!("{}  inner weight {}\n", s(&t["code"]), s(&t["inner_weight"]));
            }
        }
        "check2d" => {
            out += "lhs\trhs\tequal\tcode\n";
            for r in v["rows"].as_array().into_iter().flatten() {
                out += &format!("{}\t{}\t{}\t{}\n", s(&r["lhs"]), s(&r["rhs"]), s(&r["equal"]), s(&r["code"]));
            }
            out += &format!("total: {}\n", s(&v["total"]));
        }
        "decompose" => {
            let ch = &v["checks"];
            out += &format!("{} cells in dimension {}\n", v["cells"].as_array().map_or(0, Vec::len), s(&v["n"]));
            out += &format!("face fitting: {}\ncomplete: {}\n", s(&ch["face_fitting"]), s(&ch["complete"]));
            out += &format!("asymptotic fan matches: {}\n", s(&ch["asymptotic_fan_matches"]));
            out += &format!("curves in 1-skeleton: {}\n", s(&ch["skeleton_contains_curves"]));
            out += &format!("rescale factor: {}\n", s(&v["rescale"]));
        }
        _ => {
            for x in v.as_array().into_iter().flatten() {
                out += &format!("{}\n", s(x));
            }
        }
    }
    out
}

/// Parses `name=value` parameter assignments.
pub fn parse_param(s: &str) -> Result<(String, i64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected name=value, got {s:?}"))?;
    let v: i64 = v.trim().parse().map_err(|_| format!("parameter {k} needs an integer value"))?;
    Ok((k.trim().to_string(), v))
}

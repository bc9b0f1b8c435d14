//! JSON formats. Rationals are written as `"p/q"` strings.

use crate::combinatorics::Degree;
use crate::constraints::AffineConstraint;
use crate::count::{CountOptions, CountResult, DEFAULT_BOX, DEFAULT_MAX_RETRIES};
use crate::linalg::{LatticeBasis, Rational};
use crate::polyhedral::{Fan, HPolyhedron, Ineq, PlacedCurve, PlacedEdge, PolyhedralComplex};
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("bad rational {0:?}")]
    Rational(String),
    #[error("unknown parameter {0:?}")]
    UnknownParam(String),
    #[error("{0}")]
    Invalid(String),
}

pub fn parse_rational(s: &str) -> Result<Rational, IoError> {
    let bad = || IoError::Rational(s.to_string());
    let t = s.trim();
    match t.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// A rational given either as a string or as a JSON integer.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RatJson {
    Int(i64),
    Str(String),
}

impl RatJson {
    pub fn value(&self) -> Result<Rational, IoError> {
        match self {
            RatJson::Int(x) => Ok(Rational::from_integer(BigInt::from(*x))),
            RatJson::Str(s) => parse_rational(s),
        }
    }

    pub fn of(q: &Rational) -> Self {
        RatJson::Str(format_rational(q))
    }
}

/// An integer or a parameter name, optionally negated (`"nu"`, `"-la"`).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntOrParam {
    Int(i64),
    Param(String),
}

impl IntOrParam {
    pub fn value(&self, params: &BTreeMap<String, i64>) -> Result<i64, IoError> {
        match self {
            IntOrParam::Int(x) => Ok(*x),
            IntOrParam::Param(s) => {
                let t = s.trim();
                let (sign, name) = match t.strip_prefix('-') {
                    Some(rest) => (-1, rest.trim()),
                    None => (1, t),
                };
                if let Ok(x) = name.parse::<i64>() {
                    return Ok(sign * x);
                }
                params
                    .get(name)
                    .map(|v| sign * v)
                    .ok_or_else(|| IoError::UnknownParam(name.to_string()))
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RayJson {
    pub v: Vec<i64>,
    pub count: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DegreeJson {
    pub n: usize,
    pub rays: Vec<RayJson>,
}

impl DegreeJson {
    pub fn to_degree(&self) -> Result<Degree, IoError> {
        for r in &self.rays {
            if r.v.len() != self.n {
                return Err(IoError::Invalid(format!("ray {:?} is not in rank {}", r.v, self.n)));
            }
        }
        let entries: Vec<(Vec<i64>, usize)> = self.rays.iter().map(|r| (r.v.clone(), r.count)).collect();
        Ok(Degree::new(self.n, &entries))
    }

    pub fn of(d: &Degree) -> Self {
        DegreeJson {
            n: d.n,
            rays: d
                .entries
                .iter()
                .map(|(v, c)| RayJson { v: v.clone(), count: *c })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstraintJson {
    pub base: Vec<RatJson>,
    #[serde(default)]
    pub directions: Vec<Vec<IntOrParam>>,
}

impl ConstraintJson {
    pub fn to_constraint(&self, params: &BTreeMap<String, i64>) -> Result<AffineConstraint, IoError> {
        let base = self.base.iter().map(RatJson::value).collect::<Result<Vec<_>, _>>()?;
        let n = base.len();
        let mut dirs = Vec::new();
        for d in &self.directions {
            let v = d.iter().map(|x| x.value(params)).collect::<Result<Vec<_>, _>>()?;
            if v.len() != n {
                return Err(IoError::Invalid(format!("direction {v:?} is not in rank {n}")));
            }
            dirs.push(v.into_iter().map(BigInt::from).collect::<Vec<_>>());
        }
        if !dirs.is_empty() && crate::linalg::IntegerMatrix::from_rows(&dirs).rank() < dirs.len() {
            return Err(IoError::Invalid("constraint directions are linearly dependent".into()));
        }
        Ok(AffineConstraint::new(base, LatticeBasis::new(n, dirs)))
    }

    pub fn of(c: &AffineConstraint) -> Self {
        ConstraintJson {
            base: c.base.iter().map(RatJson::of).collect(),
            directions: c
                .directions
                .vectors()
                .iter()
                .map(|v| v.iter().map(|x| IntOrParam::Int(x.to_i64().expect("small direction entries"))).collect())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct OptionsJson {
    pub seed: Option<u64>,
    #[serde(rename = "box")]
    pub box_bound: Option<u64>,
    pub allow_resample: Option<bool>,
    pub max_retries: Option<u32>,
    pub threads: Option<usize>,
    pub perturb: Option<bool>,
    pub relaxed_audit: Option<bool>,
}

impl OptionsJson {
    pub fn to_options(&self) -> CountOptions {
        CountOptions {
            seed: self.seed.unwrap_or(0),
            box_bound: self.box_bound.unwrap_or(DEFAULT_BOX),
            allow_resample: self.allow_resample.unwrap_or(true),
            max_retries: self.max_retries.unwrap_or(DEFAULT_MAX_RETRIES),
            threads: self.threads.unwrap_or(0),
            perturb: self.perturb.unwrap_or(false),
            relaxed_audit: self.relaxed_audit.unwrap_or(false),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProblemJson {
    #[serde(default)]
    pub name: Option<String>,
    pub degree: DegreeJson,
    pub constraints: Vec<ConstraintJson>,
    #[serde(default)]
    pub options: OptionsJson,
    #[serde(default)]
    pub params: BTreeMap<String, i64>,
}

/// A parsed problem with parameters substituted.
#[derive(Debug, Clone)]
pub struct Problem {
    pub name: Option<String>,
    pub degree: Degree,
    pub constraints: Vec<AffineConstraint>,
    pub options: CountOptions,
    pub params: BTreeMap<String, i64>,
}

impl ProblemJson {
    pub fn parse(text: &str) -> Result<Self, IoError> {
        Ok(serde_json::from_str(text)?)
    }

    /// Resolves the problem, with `overrides` replacing stored parameters.
    pub fn resolve(&self, overrides: &BTreeMap<String, i64>) -> Result<Problem, IoError> {
        let mut params = self.params.clone();
        params.extend(overrides.iter().map(|(k, v)| (k.clone(), *v)));
        let degree = self.degree.to_degree()?;
        let constraints = self
            .constraints
            .iter()
            .map(|c| c.to_constraint(&params))
            .collect::<Result<Vec<_>, _>>()?;
        for c in &constraints {
            if c.n() != degree.n {
                return Err(IoError::Invalid(format!("constraint in rank {} for a degree in rank {}", c.n(), degree.n)));
            }
        }
        Ok(Problem {
            name: self.name.clone(),
            degree,
            constraints,
            options: self.options.to_options(),
            params,
        })
    }
}

pub fn int_value(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

pub fn point_value(p: &[Rational]) -> Value {
    Value::Array(p.iter().map(|q| json!(format_rational(q))).collect())
}

/// `{"total", "curves": [{"code", "w", "D", "deltas", "contribution", "vertices", ...}]}`.
pub fn count_result_json(r: &CountResult) -> Value {
    let curves: Vec<Value> = r
        .curves
        .iter()
        .map(|c| {
            let mut vertices = Map::new();
            for (i, p) in c.solution.vertices.iter().enumerate() {
                vertices.insert(i.to_string(), point_value(p));
            }
            let edges: Vec<Value> = c
                .ty
                .edges
                .iter()
                .map(|e| json!({"tail": e.tail, "head": e.head, "dir": e.dir, "weight": e.weight}))
                .collect();
            json!({
                "code": c.code,
                "w": int_value(&c.record.marked_weight),
                "D": int_value(&c.record.d_index),
                "deltas": c.record.deltas.iter().map(int_value).collect::<Vec<_>>(),
                "D_tilde": int_value(&c.record.d_tilde),
                "contribution": int_value(&c.record.contribution),
                "vertices": vertices,
                "edges": edges,
                "markings": c.ty.markings,
            })
        })
        .collect();
    json!({
        "total": int_value(&r.total),
        "curves": curves,
        "attempts": r.attempts,
        "constraints_used": r.constraints_used.iter().map(ConstraintJson::of).collect::<Vec<_>>(),
        "warnings": r.warnings,
    })
}

fn value_int(v: &Value) -> Result<BigInt, IoError> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| IoError::Invalid(format!("not an integer: {n}"))),
        Value::String(s) => s.parse().map_err(|_| IoError::Invalid(format!("not an integer: {s}"))),
        _ => Err(IoError::Invalid(format!("not an integer: {v}"))),
    }
}

/// Re-reads a count result and returns (stated total, sum of contributions).
pub fn resum_count_json(text: &str) -> Result<(BigInt, BigInt), IoError> {
    let v: Value = serde_json::from_str(text)?;
    let total = value_int(&v["total"])?;
    let mut sum = BigInt::zero();
    for c in v["curves"].as_array().ok_or_else(|| IoError::Invalid("missing curves".into()))? {
        sum += value_int(&c["contribution"])?;
    }
    Ok((total, sum))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IneqJson {
    pub m: Vec<RatJson>,
    pub c: RatJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellJson {
    pub ineqs: Vec<IneqJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComplexJson {
    pub n: usize,
    pub cells: Vec<CellJson>,
}

impl ComplexJson {
    pub fn of(p: &PolyhedralComplex) -> Self {
        ComplexJson {
            n: p.n,
            cells: p
                .cells
                .iter()
                .map(|c| CellJson {
                    ineqs: c
                        .ineqs
                        .iter()
                        .map(|q| IneqJson {
                            m: q.m.iter().map(RatJson::of).collect(),
                            c: RatJson::of(&q.c),
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    pub fn to_complex(&self) -> Result<PolyhedralComplex, IoError> {
        let mut cells = Vec::new();
        for cell in &self.cells {
            let mut ineqs = Vec::new();
            for q in &cell.ineqs {
                let m = q.m.iter().map(RatJson::value).collect::<Result<Vec<_>, _>>()?;
                ineqs.push(Ineq::new(m, q.c.value()?));
            }
            cells.push(HPolyhedron::new(self.n, ineqs).map_err(|e| IoError::Invalid(e.to_string()))?);
        }
        Ok(PolyhedralComplex { n: self.n, cells })
    }
}

/// A fan given by name, by simplicial cones over rays, or by H-cells.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FanJson {
    Preset { preset: String, n: usize },
    Rays { n: usize, rays: Vec<Vec<i64>>, cones: Vec<Vec<usize>> },
    Cells(ComplexJson),
}

impl FanJson {
    pub fn to_fan(&self) -> Result<Fan, IoError> {
        match self {
            FanJson::Preset { preset, n } => match preset.as_str() {
                "projective" => Ok(Fan::projective(*n)),
                "lines" => Ok(Fan::product_of_lines(*n)),
                other => Err(IoError::Invalid(format!("unknown fan preset {other:?}"))),
            },
            FanJson::Rays { n, rays, cones } => Fan::from_rays(*n, rays, cones).map_err(|e| IoError::Invalid(e.to_string())),
            FanJson::Cells(c) => {
                let p = c.to_complex()?;
                Ok(Fan { n: p.n, cones: p.cells })
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlacedEdgeJson {
    pub tail: usize,
    pub head: Option<usize>,
    pub dir: Vec<i64>,
    #[serde(default = "one")]
    pub weight: u64,
}

fn one() -> u64 {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlacedCurveJson {
    pub vertices: Vec<Vec<RatJson>>,
    pub edges: Vec<PlacedEdgeJson>,
}

impl PlacedCurveJson {
    pub fn to_curve(&self) -> Result<PlacedCurve, IoError> {
        let vertices = self
            .vertices
            .iter()
            .map(|p| p.iter().map(RatJson::value).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        for e in &self.edges {
            if e.tail >= vertices.len() || e.head.is_some_and(|h| h >= vertices.len()) {
                return Err(IoError::Invalid("edge refers to a missing vertex".into()));
            }
        }
        Ok(PlacedCurve {
            vertices,
            edges: self
                .edges
                .iter()
                .map(|e| PlacedEdge {
                    tail: e.tail,
                    head: e.head,
                    dir: e.dir.clone(),
                    weight: e.weight,
                })
                .collect(),
        })
    }
}

/// Input of the decomposition command: explicit curves, or a problem whose
/// solutions are used as curves.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DecomposeJson {
    pub fan: FanJson,
    #[serde(default)]
    pub curves: Vec<PlacedCurveJson>,
    #[serde(default)]
    pub problem: Option<ProblemJson>,
    #[serde(default)]
    pub extra_points: Vec<Vec<RatJson>>,
    /// Add the base points of point constraints as extra points.
    #[serde(default)]
    pub include_constraint_points: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    #[test]
    fn rationals_round_trip() {
        for (s, q) in [("3/4", rat(3, 4)), ("-6/8", rat(-3, 4)), ("5", rat(5, 1)), (" 7 / 1 ", rat(7, 1))] {
            assert_eq!(parse_rational(s).unwrap(), q);
            assert_eq!(parse_rational(&format_rational(&q)).unwrap(), q);
        }
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn parameters_substitute() {
        let text = r#"{"degree": {"n": 2, "rays": [{"v": [1, 0], "count": 1}]},
            "constraints": [{"base": ["1/2", 0], "directions": [["-nu", 1]]}],
            "params": {"nu": 3}}"#;
        let p = ProblemJson::parse(text).unwrap();
        let r = p.resolve(&BTreeMap::new()).unwrap();
        assert_eq!(r.constraints[0].directions.vectors()[0], vec![BigInt::from(-3), BigInt::from(1)]);
        let r = p.resolve(&BTreeMap::from([("nu".to_string(), 5)])).unwrap();
        assert_eq!(r.constraints[0].directions.vectors()[0], vec![BigInt::from(-5), BigInt::from(1)]);
        assert!(matches!(
            ProblemJson::parse(&text.replace("\"nu\": 3", "\"mu\": 3")).unwrap().resolve(&BTreeMap::new()),
            Err(IoError::UnknownParam(_))
        ));
    }
}

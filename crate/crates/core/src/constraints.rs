//! Affine constraints and the matching system of a marked type.

use crate::combinatorics::{Degree, TropicalType};
use crate::linalg::{
    integer_kernel, solve_rational, LatticeBasis, LinearSolution, Rational, RationalMatrix,
};
use crate::lp::{LinCon, LpOutcome, System};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Denominator of random translation vectors.
pub const TRANSLATION_DENOMINATOR: i64 = 1009;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConstraintError {
    #[error("codimensions sum to {got}, expected e+n-3 = {want}")]
    CodimensionSum { got: usize, want: usize },
    #[error("constraint {0} has an unsaturated direction basis")]
    UnsaturatedBasis(usize),
    #[error("constraint {0} lives in the wrong ambient rank")]
    RankMismatch(usize),
    #[error("constraint {0} has codimension below 1")]
    BadCodimension(usize),
}

/// Rational affine subspace `base + span(directions)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineConstraint {
    pub base: Vec<Rational>,
    pub directions: LatticeBasis,
}

impl AffineConstraint {
    pub fn new(base: Vec<Rational>, directions: LatticeBasis) -> Self {
        assert_eq!(base.len(), directions.ambient_rank(), "base length mismatch");
        AffineConstraint { base, directions }
    }

    pub fn point(base: Vec<Rational>) -> Self {
        let n = base.len();
        Self::new(base, LatticeBasis::empty(n))
    }

    pub fn n(&self) -> usize {
        self.base.len()
    }

    /// `d` with `dim A = n − d − 1`.
    pub fn codim(&self) -> usize {
        self.n().saturating_sub(1 + self.directions.rank())
    }

    /// Integer covectors cutting out the direction space.
    pub fn annihilator(&self) -> Vec<Vec<BigInt>> {
        integer_kernel(self.directions.vectors(), self.n())
    }

    pub fn contains(&self, p: &[Rational]) -> bool {
        let diff: Vec<Rational> = p.iter().zip(&self.base).map(|(a, b)| a - b).collect();
        self.annihilator()
            .iter()
            .all(|m| dot_int(m, &diff).is_zero())
    }

    /// Translated copy.
    pub fn translated(&self, w: &[Rational]) -> Self {
        AffineConstraint {
            base: self.base.iter().zip(w).map(|(a, b)| a + b).collect(),
            directions: self.directions.clone(),
        }
    }

    /// Linear system (in `n` variables) describing the subspace.
    pub fn as_system(&self) -> System {
        let n = self.n();
        let cons = self
            .annihilator()
            .iter()
            .map(|m| {
                let a: Vec<Rational> = m.iter().map(|x| Rational::from_integer(x.clone())).collect();
                let b = dot_int(m, &self.base);
                LinCon::eq(a, b)
            })
            .collect();
        System::with(n, cons)
    }
}

pub fn dot_int(m: &[BigInt], x: &[Rational]) -> Rational {
    m.iter()
        .zip(x)
        .fold(Rational::zero(), |acc, (a, b)| acc + b * Rational::from_integer(a.clone()))
}

pub fn dot_i64(u: &[i64], x: &[BigInt]) -> BigInt {
    u.iter().zip(x).fold(BigInt::zero(), |acc, (a, b)| acc + b * BigInt::from(*a))
}

pub fn validate_constraints(d: &Degree, a: &[AffineConstraint]) -> Result<(), ConstraintError> {
    for (i, c) in a.iter().enumerate() {
        if c.n() != d.n {
            return Err(ConstraintError::RankMismatch(i));
        }
        if c.directions.rank() + 1 > c.n() {
            return Err(ConstraintError::BadCodimension(i));
        }
        if !c.directions.is_saturated() {
            return Err(ConstraintError::UnsaturatedBasis(i));
        }
    }
    let got: usize = a.iter().map(AffineConstraint::codim).sum();
    let want = d.num_ends() + d.n - 3;
    if got != want {
        return Err(ConstraintError::CodimensionSum { got, want });
    }
    Ok(())
}

/// Vertex positions, edge lengths and marking parameters of a matched curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveSolution {
    pub ty: TropicalType,
    pub vertices: Vec<Vec<Rational>>,
    /// `Some(λ)` for bounded edges.
    pub lengths: Vec<Option<Rational>>,
    /// (t, s) per marking: the marked point is `h(tail) + t·u = base + Σ s_j·dir_j`.
    pub params: Vec<(Rational, Vec<Rational>)>,
}

impl CurveSolution {
    pub fn marked_point(&self, i: usize) -> Vec<Rational> {
        let e = &self.ty.edges[self.ty.markings[i]];
        let t = &self.params[i].0;
        self.vertices[e.tail]
            .iter()
            .zip(&e.dir)
            .map(|(p, u)| p + t * Rational::from_integer(BigInt::from(*u)))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoSolutionReason {
    PositivityFail,
    SegmentFail,
    Inconsistent,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatchResult {
    Matched(CurveSolution),
    NoSolution(NoSolutionReason),
    Degenerate,
}

fn q(x: i64) -> Rational {
    Rational::from_integer(BigInt::from(x))
}

/// Solves the matching system of a marked type.
pub fn match_type(t: &TropicalType, a: &[AffineConstraint]) -> MatchResult {
    assert_eq!(t.markings.len(), a.len(), "one constraint per marking");
    let n = t.n;
    let bounded = t.bounded_edges();
    let nv = t.vertices;
    let lam0 = n * nv;
    let t0 = lam0 + bounded.len();
    let cols = t0 + a.len();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut rhs: Vec<Rational> = Vec::new();
    for (k, &e) in bounded.iter().enumerate() {
        let edge = &t.edges[e];
        let head = edge.head.unwrap();
        for c in 0..n {
            let mut row = vec![Rational::zero(); cols];
            row[head * n + c] = q(1);
            row[edge.tail * n + c] = q(-1);
            row[lam0 + k] = q(-edge.dir[c]);
            rows.push(row);
            rhs.push(Rational::zero());
        }
    }
    let annihilators: Vec<Vec<Vec<BigInt>>> = a.iter().map(AffineConstraint::annihilator).collect();
    for (i, &e) in t.markings.iter().enumerate() {
        let edge = &t.edges[e];
        for m in &annihilators[i] {
            let mut row = vec![Rational::zero(); cols];
            for c in 0..n {
                row[edge.tail * n + c] = Rational::from_integer(m[c].clone());
            }
            row[t0 + i] = Rational::from_integer(dot_i64(&edge.dir, m));
            rows.push(row);
            rhs.push(dot_int(m, &a[i].base));
        }
    }
    let mat = RationalMatrix::from_rows(rows);
    let x = match solve_rational(&mat, &rhs) {
        LinearSolution::Unique(x) => x,
        LinearSolution::None => return MatchResult::NoSolution(NoSolutionReason::Inconsistent),
        LinearSolution::Underdetermined => return MatchResult::Degenerate,
    };
    let vertices: Vec<Vec<Rational>> = (0..nv).map(|v| x[v * n..(v + 1) * n].to_vec()).collect();
    let mut lengths = vec![None; t.edges.len()];
    for (k, &e) in bounded.iter().enumerate() {
        let lam = x[lam0 + k].clone();
        if !lam.is_positive() {
            return MatchResult::NoSolution(NoSolutionReason::PositivityFail);
        }
        lengths[e] = Some(lam);
    }
    let mut params = Vec::with_capacity(a.len());
    for (i, &e) in t.markings.iter().enumerate() {
        let ti = x[t0 + i].clone();
        if ti.is_negative() {
            return MatchResult::NoSolution(NoSolutionReason::SegmentFail);
        }
        if let Some(lam) = &lengths[e] {
            if ti > *lam {
                return MatchResult::NoSolution(NoSolutionReason::SegmentFail);
            }
        }
        let edge = &t.edges[e];
        let p: Vec<Rational> = (0..n)
            .map(|c| &vertices[edge.tail][c] + &ti * q(edge.dir[c]))
            .collect();
        params.push((ti, direction_coordinates(&a[i], &p)));
    }
    MatchResult::Matched(CurveSolution {
        ty: t.clone(),
        vertices,
        lengths,
        params,
    })
}

/// Coordinates `s` with `p = base + Σ s_j dir_j`.
fn direction_coordinates(c: &AffineConstraint, p: &[Rational]) -> Vec<Rational> {
    let k = c.directions.rank();
    if k == 0 {
        return Vec::new();
    }
    let n = c.n();
    let mut rows = vec![vec![Rational::zero(); k]; n];
    for (j, v) in c.directions.vectors().iter().enumerate() {
        for r in 0..n {
            rows[r][j] = Rational::from_integer(v[r].clone());
        }
    }
    let rhs: Vec<Rational> = p.iter().zip(&c.base).map(|(x, b)| x - b).collect();
    match solve_rational(&RationalMatrix::from_rows(rows), &rhs) {
        LinearSolution::Unique(s) => s,
        other => panic!("marked point off its constraint: {other:?}"),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    TrivalenceFail { vertex: usize },
    VertexOnConstraint { vertex: usize, constraint: usize },
    NonInjectiveVertices { first: usize, second: usize },
    NonInjectiveMap { first: usize, second: usize },
    MarkedPointAtVertex { marking: usize },
}

impl Violation {
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::TrivalenceFail { .. } => "TrivalenceFail",
            Violation::VertexOnConstraint { .. } => "VertexOnConstraint",
            Violation::NonInjectiveVertices { .. } => "NonInjectiveVertices",
            Violation::NonInjectiveMap { .. } => "NonInjectiveMap",
            Violation::MarkedPointAtVertex { .. } => "MarkedPointAtVertex",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GenericityReport {
    pub violations: Vec<Violation>,
    /// Plane edge crossings (pairs of edges meeting in isolated points);
    /// informational only.
    pub crossings: Vec<(usize, usize)>,
}

impl GenericityReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn kinds(&self) -> Vec<&'static str> {
        let mut k: Vec<&'static str> = self.violations.iter().map(Violation::kind).collect();
        k.dedup();
        k
    }
}

/// Image of an edge as `start + s·dir`, `s ∈ [0, len]` (or `[0, ∞)`).
fn edge_image(sol: &CurveSolution, e: usize) -> (Vec<Rational>, Vec<Rational>, Option<Rational>) {
    let edge = &sol.ty.edges[e];
    let dir: Vec<Rational> = edge.dir.iter().map(|&x| q(x)).collect();
    (sol.vertices[edge.tail].clone(), dir, sol.lengths[e].clone())
}

/// Parameter interval (on the first edge) of the intersection of two edge
/// images; `None` if disjoint.
fn intersection_range(
    a: &(Vec<Rational>, Vec<Rational>, Option<Rational>),
    b: &(Vec<Rational>, Vec<Rational>, Option<Rational>),
) -> Option<(Rational, Option<Rational>)> {
    let n = a.0.len();
    // variables (s, r): a.0 + s a.1 = b.0 + r b.1
    let mut sys = System::new(2);
    for c in 0..n {
        sys.push(LinCon::eq(vec![a.1[c].clone(), -b.1[c].clone()], &b.0[c] - &a.0[c]));
    }
    sys.push(LinCon::ge(vec![q(1), q(0)], q(0)));
    sys.push(LinCon::ge(vec![q(0), q(1)], q(0)));
    if let Some(l) = &a.2 {
        sys.push(LinCon::ge(vec![q(-1), q(0)], -l.clone()));
    }
    if let Some(l) = &b.2 {
        sys.push(LinCon::ge(vec![q(0), q(-1)], -l.clone()));
    }
    let lo = match sys.maximize(&[q(-1), q(0)]) {
        LpOutcome::Infeasible => return None,
        LpOutcome::Optimal { value, .. } => -value,
        LpOutcome::Unbounded => unreachable!("s is bounded below"),
    };
    let hi = match sys.maximize(&[q(1), q(0)]) {
        LpOutcome::Optimal { value, .. } => Some(value),
        _ => None,
    };
    Some((lo, hi))
}

/// Checks the general-position requirements on a matched curve.
pub fn genericity_audit(sol: &CurveSolution, a: &[AffineConstraint]) -> GenericityReport {
    let t = &sol.ty;
    let mut report = GenericityReport::default();
    let adj = t.adjacency();
    for (v, es) in adj.iter().enumerate() {
        if es.len() != 3 {
            report.violations.push(Violation::TrivalenceFail { vertex: v });
        }
    }
    for v in 0..t.vertices {
        for (i, c) in a.iter().enumerate() {
            if c.contains(&sol.vertices[v]) {
                report
                    .violations
                    .push(Violation::VertexOnConstraint { vertex: v, constraint: i });
            }
        }
    }
    for v in 0..t.vertices {
        for w in v + 1..t.vertices {
            if sol.vertices[v] == sol.vertices[w] {
                report
                    .violations
                    .push(Violation::NonInjectiveVertices { first: v, second: w });
            }
        }
    }
    let images: Vec<_> = (0..t.edges.len()).map(|e| edge_image(sol, e)).collect();
    for e in 0..t.edges.len() {
        for f in e + 1..t.edges.len() {
            let ends_e = [Some(t.edges[e].tail), t.edges[e].head];
            let ends_f = [Some(t.edges[f].tail), t.edges[f].head];
            let adjacent = ends_e.iter().flatten().any(|v| ends_f.contains(&Some(*v)));
            let Some((lo, hi)) = intersection_range(&images[e], &images[f]) else {
                continue;
            };
            let overlap = hi.as_ref().is_none_or(|h| *h > lo);
            if overlap {
                report
                    .violations
                    .push(Violation::NonInjectiveMap { first: e, second: f });
            } else if !adjacent {
                if t.n > 2 {
                    report
                        .violations
                        .push(Violation::NonInjectiveMap { first: e, second: f });
                } else {
                    report.crossings.push((e, f));
                }
            }
        }
    }
    for (i, &e) in t.markings.iter().enumerate() {
        let ti = &sol.params[i].0;
        if ti.is_zero() || sol.lengths[e].as_ref() == Some(ti) {
            report.violations.push(Violation::MarkedPointAtVertex { marking: i });
        }
    }
    report
}

/// Translates every base point by an independent random vector with
/// numerators in `[−box, box]` over a fixed denominator.
pub fn random_generic_translation(a: &[AffineConstraint], seed: u64, bound: u64) -> Vec<AffineConstraint> {
    if bound == 0 {
        return a.to_vec();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = bound as i64;
    a.iter()
        .map(|c| {
            let w: Vec<Rational> = (0..c.n())
                .map(|_| Rational::new(BigInt::from(rng.gen_range(-b..=b)), BigInt::from(TRANSLATION_DENOMINATOR)))
                .collect();
            c.translated(&w)
        })
        .collect()
}

/// Random rational points with numerators in `[−bound, bound]` and the
/// given denominator.
pub fn random_points(n: usize, count: usize, seed: u64, bound: i64, denom: i64) -> Vec<AffineConstraint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            AffineConstraint::point(
                (0..n)
                    .map(|_| Rational::new(BigInt::from(rng.gen_range(-bound..=bound)), BigInt::from(denom)))
                    .collect(),
            )
        })
        .collect()
}

/// `base + span(dirs)` from small integers.
pub fn constraint_from(base: Vec<Rational>, dirs: &[Vec<i64>]) -> AffineConstraint {
    let n = base.len();
    AffineConstraint::new(base, LatticeBasis::from_i64(n, dirs))
}

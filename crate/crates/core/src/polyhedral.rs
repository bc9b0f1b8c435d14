//! Polyhedral decompositions of ℚⁿ in H-representation: asymptotic fans,
//! cones over cells, edge-adapted decompositions and refinement.

use crate::constraints::CurveSolution;
use crate::linalg::{Rational, RationalMatrix};
use crate::lp::{dot, LinCon, LpOutcome, Rel, System};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("polyhedron is empty")]
    Empty,
    #[error("complex is not complete: {0}")]
    IncompleteComplex(String),
    #[error("direction {0} does not span a ray of the fan")]
    RayNotInFan(String),
    #[error("segment endpoints coincide")]
    DegenerateEdge,
    #[error("expected rank {want}, got {got}")]
    DimensionMismatch { got: usize, want: usize },
}

/// `⟨m, x⟩ ≥ c`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ineq {
    pub m: Vec<Rational>,
    pub c: Rational,
}

impl Ineq {
    pub fn new(m: Vec<Rational>, c: Rational) -> Self {
        Ineq { m, c }
    }

    fn as_con(&self) -> LinCon {
        LinCon::ge(self.m.clone(), self.c.clone())
    }

    fn value(&self, x: &[Rational]) -> Rational {
        dot(&self.m, x)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HPolyhedron {
    pub n: usize,
    pub ineqs: Vec<Ineq>,
}

pub type Cone = HPolyhedron;

fn neg(v: &[Rational]) -> Vec<Rational> {
    v.iter().map(|x| -x).collect()
}

impl HPolyhedron {
    /// Normalizes and drops redundant inequalities; fails on empty input.
    pub fn new(n: usize, ineqs: Vec<Ineq>) -> Result<Self, PolyError> {
        for q in &ineqs {
            if q.m.len() != n {
                return Err(PolyError::DimensionMismatch { got: q.m.len(), want: n });
            }
        }
        let sys = System::with(n, ineqs.iter().map(Ineq::as_con).collect());
        let sys = sys.without_redundant().ok_or(PolyError::Empty)?;
        Ok(Self::from_system(&sys))
    }

    /// All of ℚⁿ.
    pub fn whole(n: usize) -> Self {
        HPolyhedron { n, ineqs: Vec::new() }
    }

    fn from_system(sys: &System) -> Self {
        let mut ineqs = Vec::new();
        for c in &sys.cons {
            match c.rel {
                Rel::Eq => {
                    ineqs.push(Ineq::new(c.a.clone(), c.b.clone()));
                    ineqs.push(Ineq::new(neg(&c.a), -c.b.clone()));
                }
                _ => ineqs.push(Ineq::new(c.a.clone(), c.b.clone())),
            }
        }
        ineqs.sort();
        HPolyhedron { n: sys.dim, ineqs }
    }

    pub fn system(&self) -> System {
        System::with(self.n, self.ineqs.iter().map(Ineq::as_con).collect())
    }

    pub fn contains_point(&self, x: &[Rational]) -> bool {
        self.ineqs.iter().all(|q| q.value(x) >= q.c)
    }

    /// Indices of inequalities that hold with equality on all of the set.
    pub fn implicit_equalities(&self) -> Vec<usize> {
        let sys = self.system();
        (0..self.ineqs.len())
            .filter(|&i| {
                let q = &self.ineqs[i];
                matches!(sys.maximize(&q.m), LpOutcome::Optimal { value, .. } if value == q.c)
            })
            .collect()
    }

    pub fn dim(&self) -> usize {
        let eq = self.implicit_equalities();
        if eq.is_empty() {
            return self.n;
        }
        let rows: Vec<Vec<Rational>> = eq.iter().map(|&i| self.ineqs[i].m.clone()).collect();
        self.n - RationalMatrix::from_rows(rows).rank()
    }

    pub fn is_full_dimensional(&self) -> bool {
        System::with(
            self.n,
            self.ineqs.iter().map(|q| LinCon::gt(q.m.clone(), q.c.clone())).collect(),
        )
        .is_feasible_fast()
    }

    /// A point in the relative interior.
    pub fn relint_point(&self) -> Vec<Rational> {
        let eq = self.implicit_equalities();
        let cons = self
            .ineqs
            .iter()
            .enumerate()
            .map(|(i, q)| {
                let rel = if eq.contains(&i) { Rel::Eq } else { Rel::Gt };
                LinCon::new(q.m.clone(), rel, q.c.clone())
            })
            .collect();
        System::with(self.n, cons)
            .find_point()
            .expect("relative interior of a nonempty polyhedron")
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &HPolyhedron) -> bool {
        let sys = other.system();
        self.ineqs.iter().all(|q| match sys.maximize(&neg(&q.m)) {
            LpOutcome::Infeasible => true,
            LpOutcome::Unbounded => false,
            LpOutcome::Optimal { value, .. } => -value >= q.c,
        })
    }

    pub fn same_set(&self, other: &HPolyhedron) -> bool {
        self.contains(other) && other.contains(self)
    }

    pub fn intersect(&self, other: &HPolyhedron) -> Option<HPolyhedron> {
        let mut ineqs = self.ineqs.clone();
        ineqs.extend(other.ineqs.iter().cloned());
        HPolyhedron::new(self.n, ineqs).ok()
    }

    /// The face on which exactly the inequalities active at `p` are tight.
    pub fn face_at(&self, p: &[Rational]) -> HPolyhedron {
        let mut ineqs = self.ineqs.clone();
        for q in &self.ineqs {
            if q.value(p) == q.c {
                ineqs.push(Ineq::new(neg(&q.m), -q.c.clone()));
            }
        }
        HPolyhedron::new(self.n, ineqs).expect("face through a point of the set")
    }

    pub fn translated(&self, v: &[Rational]) -> HPolyhedron {
        let ineqs = self
            .ineqs
            .iter()
            .map(|q| Ineq::new(q.m.clone(), &q.c + q.value(v)))
            .collect();
        HPolyhedron { n: self.n, ineqs }
    }

    /// `a·Ξ` for `a > 0`.
    pub fn scaled(&self, a: &Rational) -> HPolyhedron {
        assert!(a.is_positive(), "scale factor must be positive");
        let ineqs = self.ineqs.iter().map(|q| Ineq::new(q.m.clone(), &q.c * a)).collect();
        HPolyhedron { n: self.n, ineqs }
    }

    /// Vertices, found by solving every `n`-subset of inequalities.
    pub fn vertices(&self) -> Vec<Vec<Rational>> {
        let mut out: Vec<Vec<Rational>> = Vec::new();
        let k = self.ineqs.len();
        let n = self.n;
        if k < n {
            return out;
        }
        let mut idx: Vec<usize> = (0..n).collect();
        loop {
            let rows: Vec<Vec<Rational>> = idx.iter().map(|&i| self.ineqs[i].m.clone()).collect();
            let rhs: Vec<Rational> = idx.iter().map(|&i| self.ineqs[i].c.clone()).collect();
            if let crate::linalg::LinearSolution::Unique(x) =
                crate::linalg::solve_rational(&RationalMatrix::from_rows(rows), &rhs)
            {
                if self.contains_point(&x) && !out.contains(&x) {
                    out.push(x);
                }
            }
            // next n-subset
            let mut j = n;
            loop {
                if j == 0 {
                    out.sort();
                    return out;
                }
                j -= 1;
                if idx[j] < k - n + j {
                    idx[j] += 1;
                    for t in j + 1..n {
                        idx[t] = idx[t - 1] + 1;
                    }
                    break;
                }
            }
        }
    }
}

/// The recession cone: constants dropped.
pub fn asymptotic_cone(p: &HPolyhedron) -> Cone {
    let ineqs = p.ineqs.iter().map(|q| Ineq::new(q.m.clone(), Rational::zero())).collect();
    HPolyhedron::new(p.n, ineqs).expect("cones contain the origin")
}

/// `C(Ξ) = {(x, b) : b ≥ 0, ⟨m, x⟩ − b·c ≥ 0}` in rank `n + 1`.
pub fn cone_over_cell(p: &HPolyhedron) -> Cone {
    let n = p.n;
    let mut ineqs: Vec<Ineq> = p
        .ineqs
        .iter()
        .map(|q| {
            let mut m = q.m.clone();
            m.push(-q.c.clone());
            Ineq::new(m, Rational::zero())
        })
        .collect();
    let mut last = vec![Rational::zero(); n + 1];
    last[n] = Rational::one();
    ineqs.push(Ineq::new(last, Rational::zero()));
    HPolyhedron::new(n + 1, ineqs).expect("cones contain the origin")
}

#[derive(Debug, Clone)]
pub struct PolyhedralComplex {
    pub n: usize,
    pub cells: Vec<HPolyhedron>,
}

#[derive(Debug, Clone)]
pub struct Fan {
    pub n: usize,
    pub cones: Vec<Cone>,
}

impl Fan {
    pub fn as_complex(&self) -> PolyhedralComplex {
        PolyhedralComplex {
            n: self.n,
            cells: self.cones.clone(),
        }
    }

    /// Same maximal cones, in any order.
    pub fn same_as(&self, other: &Fan) -> bool {
        self.n == other.n
            && self.cones.len() == other.cones.len()
            && self.cones.iter().all(|c| other.cones.iter().any(|d| c.same_set(d)))
    }

    /// Whether `ℚ≥0·u` is a one-dimensional cone of the fan.
    pub fn has_ray(&self, u: &[Rational]) -> bool {
        if u.iter().all(Zero::is_zero) {
            return false;
        }
        self.cones
            .iter()
            .any(|c| c.contains_point(u) && c.face_at(u).dim() == 1)
    }

    /// Fan of simplicial full-dimensional cones given by generators.
    pub fn from_rays(n: usize, rays: &[Vec<i64>], cones: &[Vec<usize>]) -> Result<Fan, PolyError> {
        let mut out = Vec::new();
        for gens in cones {
            if gens.len() != n {
                return Err(PolyError::DimensionMismatch { got: gens.len(), want: n });
            }
            // inequalities are the rows of the inverse generator matrix
            let mut ineqs = Vec::new();
            for k in 0..n {
                let rows: Vec<Vec<Rational>> = (0..n)
                    .map(|r| gens.iter().map(|&g| Rational::from_integer(BigInt::from(rays[g][r]))).collect())
                    .collect();
                // solve Gᵀ y = e_k to get row k of G⁻¹
                let gt: Vec<Vec<Rational>> = (0..n).map(|i| (0..n).map(|j| rows[j][i].clone()).collect()).collect();
                let mut e = vec![Rational::zero(); n];
                e[k] = Rational::one();
                match crate::linalg::solve_rational(&RationalMatrix::from_rows(gt), &e) {
                    crate::linalg::LinearSolution::Unique(y) => ineqs.push(Ineq::new(y, Rational::zero())),
                    _ => return Err(PolyError::DimensionMismatch { got: n - 1, want: n }),
                }
            }
            out.push(HPolyhedron::new(n, ineqs)?);
        }
        Ok(Fan { n, cones: out })
    }

    /// The fan of projective space ℙⁿ.
    pub fn projective(n: usize) -> Fan {
        let mut rays: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        rays.push(vec![-1; n]);
        let cones: Vec<Vec<usize>> = (0..=n).map(|skip| (0..=n).filter(|&r| r != skip).collect()).collect();
        Fan::from_rays(n, &rays, &cones).expect("simplicial fan")
    }

    /// The fan of (ℙ¹)ⁿ: the coordinate orthants.
    pub fn product_of_lines(n: usize) -> Fan {
        let mut cones = Vec::new();
        for signs in 0..(1usize << n) {
            let ineqs = (0..n)
                .map(|i| {
                    let mut m = vec![Rational::zero(); n];
                    m[i] = if signs & (1 << i) == 0 { Rational::one() } else { -Rational::one() };
                    Ineq::new(m, Rational::zero())
                })
                .collect();
            cones.push(HPolyhedron { n, ineqs });
        }
        Fan { n, cones }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexReport {
    pub face_fitting: bool,
    pub complete: bool,
    pub issues: Vec<String>,
}

impl ComplexReport {
    pub fn ok(&self) -> bool {
        self.face_fitting && self.complete
    }
}

/// Checks that pairwise intersections are common faces and that every
/// facet is shared by exactly one other cell.
pub fn check_complex(p: &PolyhedralComplex) -> ComplexReport {
    let mut issues = Vec::new();
    let mut face_fitting = true;
    let mut complete = !p.cells.is_empty();
    if p.cells.is_empty() {
        issues.push("no cells".to_string());
    }
    for (i, c) in p.cells.iter().enumerate() {
        if !c.is_full_dimensional() {
            complete = false;
            issues.push(format!("cell {i} is not full-dimensional"));
        }
    }
    for i in 0..p.cells.len() {
        for j in i + 1..p.cells.len() {
            let Some(inter) = p.cells[i].intersect(&p.cells[j]) else {
                continue;
            };
            let x = inter.relint_point();
            for (k, cell) in [(i, &p.cells[i]), (j, &p.cells[j])] {
                if !cell.face_at(&x).same_set(&inter) {
                    face_fitting = false;
                    issues.push(format!("cells {i} and {j} meet outside a common face of cell {k}"));
                }
            }
        }
    }
    for (i, cell) in p.cells.iter().enumerate() {
        for (k, q) in cell.ineqs.iter().enumerate() {
            let mut f = cell.ineqs.clone();
            f.push(Ineq::new(neg(&q.m), -q.c.clone()));
            let Ok(facet) = HPolyhedron::new(p.n, f) else {
                continue;
            };
            if facet.dim() + 1 != p.n {
                continue;
            }
            let sharing = p
                .cells
                .iter()
                .enumerate()
                .filter(|&(j, other)| j != i && other.intersect(&facet).is_some_and(|x| x.dim() + 1 == p.n))
                .count();
            if sharing != 1 {
                complete = false;
                issues.push(format!("facet {k} of cell {i} is shared by {sharing} other cells"));
            }
        }
    }
    ComplexReport {
        face_fitting,
        complete,
        issues,
    }
}

fn require_complete(p: &PolyhedralComplex) -> Result<(), PolyError> {
    let r = check_complex(p);
    if r.ok() {
        Ok(())
    } else {
        Err(PolyError::IncompleteComplex(r.issues.join("; ")))
    }
}

/// The fan of asymptotic cones of the cells.
pub fn asymptotic_fan(p: &PolyhedralComplex) -> Result<Fan, PolyError> {
    require_complete(p)?;
    let mut cones: Vec<Cone> = Vec::new();
    for c in &p.cells {
        let a = asymptotic_cone(c);
        if a.is_full_dimensional() && !cones.iter().any(|d| d.same_set(&a)) {
            cones.push(a);
        }
    }
    let fan = Fan { n: p.n, cones };
    require_complete(&fan.as_complex())?;
    Ok(fan)
}

/// `p + Σ`.
pub fn vertex_star(fan: &Fan, p: &[Rational]) -> PolyhedralComplex {
    PolyhedralComplex {
        n: fan.n,
        cells: fan.cones.iter().map(|c| c.translated(p)).collect(),
    }
}

/// A complete decomposition whose 1-skeleton contains the segment `[v1, v2]`
/// and whose asymptotic fan is `fan`. Maximal cones containing the segment
/// direction are moved to `v2`, the others stay at `v1`, and the gap is
/// filled by the segment swept along the cones separating the two groups.
pub fn edge_decomposition(fan: &Fan, v1: &[Rational], v2: &[Rational]) -> Result<PolyhedralComplex, PolyError> {
    let n = fan.n;
    let d: Vec<Rational> = v2.iter().zip(v1).map(|(a, b)| a - b).collect();
    if d.iter().all(Zero::is_zero) {
        return Err(PolyError::DegenerateEdge);
    }
    let inside: Vec<bool> = fan.cones.iter().map(|c| c.contains_point(&d)).collect();
    if !inside.iter().any(|&b| b) {
        return Err(PolyError::RayNotInFan(fmt_vec(&d)));
    }
    let mut cells = Vec::new();
    for (c, &ins) in fan.cones.iter().zip(&inside) {
        cells.push(c.translated(if ins { v2 } else { v1 }));
    }
    for (i, a) in fan.cones.iter().enumerate() {
        for (j, b) in fan.cones.iter().enumerate() {
            if !inside[i] || inside[j] {
                continue;
            }
            let Some(tau) = a.intersect(b) else {
                continue;
            };
            if tau.dim() + 1 != n {
                continue;
            }
            // {x : x − v1 − s·d ∈ τ, 0 ≤ s ≤ 1}
            let mut sys = System::new(n + 1);
            for q in &tau.ineqs {
                let mut m = q.m.clone();
                m.push(-dot(&q.m, &d));
                sys.push(LinCon::ge(m, &q.c + dot(&q.m, v1)));
            }
            let mut s = vec![Rational::zero(); n + 1];
            s[n] = Rational::one();
            sys.push(LinCon::ge(s.clone(), Rational::zero()));
            sys.push(LinCon::ge(neg(&s), -Rational::one()));
            let Some(proj) = sys.project_prefix(n).and_then(|p| p.without_redundant()) else {
                continue;
            };
            let strip = HPolyhedron::from_system(&proj);
            if strip.is_full_dimensional() {
                cells.push(strip);
            }
        }
    }
    Ok(PolyhedralComplex { n, cells })
}

fn refine(p1: &PolyhedralComplex, p2: &PolyhedralComplex) -> PolyhedralComplex {
    let mut cells = Vec::new();
    for a in &p1.cells {
        for b in &p2.cells {
            if let Some(c) = a.intersect(b) {
                if c.is_full_dimensional() {
                    cells.push(c);
                }
            }
        }
    }
    PolyhedralComplex { n: p1.n, cells }
}

/// Full-dimensional pairwise intersections.
pub fn common_refinement(p1: &PolyhedralComplex, p2: &PolyhedralComplex) -> Result<PolyhedralComplex, PolyError> {
    require_complete(p1)?;
    require_complete(p2)?;
    Ok(refine(p1, p2))
}

/// An edge of a placed curve; `head = None` for unbounded edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlacedEdge {
    pub tail: usize,
    pub head: Option<usize>,
    pub dir: Vec<i64>,
    pub weight: u64,
}

/// Vertex positions and edges of a curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlacedCurve {
    pub vertices: Vec<Vec<Rational>>,
    pub edges: Vec<PlacedEdge>,
}

impl From<&CurveSolution> for PlacedCurve {
    fn from(s: &CurveSolution) -> Self {
        PlacedCurve {
            vertices: s.vertices.clone(),
            edges: s
                .ty
                .edges
                .iter()
                .map(|e| PlacedEdge {
                    tail: e.tail,
                    head: e.head,
                    dir: e.dir.clone(),
                    weight: e.weight,
                })
                .collect(),
        }
    }
}

fn rat_i64(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect()
}

fn fmt_vec(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

/// Common refinement of vertex stars and edge decompositions: the curves
/// lie in the 1-skeleton, their vertices and `extra_points` are 0-cells.
pub fn adapted_decomposition(
    curves: &[PlacedCurve],
    fan: &Fan,
    extra_points: &[Vec<Rational>],
) -> Result<PolyhedralComplex, PolyError> {
    require_complete(&fan.as_complex())?;
    let mut points: Vec<Vec<Rational>> = Vec::new();
    let mut segments: Vec<(Vec<Rational>, Vec<Rational>)> = Vec::new();
    for c in curves {
        for e in &c.edges {
            match e.head {
                None => {
                    let u = rat_i64(&e.dir);
                    if !fan.has_ray(&u) {
                        return Err(PolyError::RayNotInFan(fmt_vec(&u)));
                    }
                }
                Some(h) => segments.push((c.vertices[e.tail].clone(), c.vertices[h].clone())),
            }
        }
        points.extend(c.vertices.iter().cloned());
    }
    points.extend(extra_points.iter().cloned());
    points.sort();
    points.dedup();
    let mut p = PolyhedralComplex {
        n: fan.n,
        cells: vec![HPolyhedron::whole(fan.n)],
    };
    for x in &points {
        p = refine(&p, &vertex_star(fan, x));
    }
    for (a, b) in &segments {
        p = refine(&p, &edge_decomposition(fan, a, b)?);
    }
    Ok(p)
}

/// A segment `[start, start + dir]` or a ray `start + ℚ≥0·dir`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Piece {
    pub start: Vec<Rational>,
    pub dir: Vec<Rational>,
    pub bounded: bool,
}

impl Piece {
    pub fn segment(a: Vec<Rational>, b: Vec<Rational>) -> Piece {
        let dir = b.iter().zip(&a).map(|(x, y)| x - y).collect();
        Piece {
            start: a,
            dir,
            bounded: true,
        }
    }

    pub fn ray(a: Vec<Rational>, dir: Vec<Rational>) -> Piece {
        Piece {
            start: a,
            dir,
            bounded: false,
        }
    }

    fn at(&self, t: &Rational) -> Vec<Rational> {
        self.start.iter().zip(&self.dir).map(|(a, d)| a + t * d).collect()
    }
}

/// Whether every point of `piece` lies in a face of dimension ≤ 1.
pub fn contains_in_one_skeleton(p: &PolyhedralComplex, piece: &Piece) -> bool {
    let mut ts = vec![Rational::zero()];
    if piece.bounded {
        ts.push(Rational::one());
    }
    for cell in &p.cells {
        for q in &cell.ineqs {
            let md = dot(&q.m, &piece.dir);
            if md.is_zero() {
                continue;
            }
            let t = (&q.c - dot(&q.m, &piece.start)) / md;
            if t.is_negative() || (piece.bounded && t > Rational::one()) {
                continue;
            }
            ts.push(t);
        }
    }
    ts.sort();
    ts.dedup();
    let mut samples = ts.clone();
    let two = Rational::from_integer(BigInt::from(2));
    for w in ts.windows(2) {
        samples.push((&w[0] + &w[1]) / &two);
    }
    if !piece.bounded {
        samples.push(ts.last().unwrap() + Rational::one());
    }
    samples.iter().all(|t| {
        let x = piece.at(t);
        p.cells
            .iter()
            .any(|c| c.contains_point(&x) && c.face_at(&x).dim() <= 1)
    })
}

/// Smallest `k` making all 0-cells integral and every bounded edge's
/// integral length a multiple of its weight.
pub fn integral_rescale(p: &PolyhedralComplex, curves: &[PlacedCurve]) -> BigInt {
    let mut k = BigInt::one();
    for cell in &p.cells {
        for v in cell.vertices() {
            for x in &v {
                k = k.lcm(x.denom());
            }
        }
    }
    for c in curves {
        for e in &c.edges {
            let Some(h) = e.head else {
                continue;
            };
            let j = e.dir.iter().position(|&x| x != 0).expect("nonzero direction");
            let len = (&c.vertices[h][j] - &c.vertices[e.tail][j]) / Rational::from_integer(BigInt::from(e.dir[j]));
            k = k.lcm(&edge_factor(&len, e.weight));
        }
    }
    k
}

/// Least `k` with `k·len ∈ w·ℤ`.
fn edge_factor(len: &Rational, w: u64) -> BigInt {
    let qw = len.denom() * BigInt::from(w);
    let g = qw.gcd(len.numer());
    if g.is_zero() {
        return BigInt::one();
    }
    qw / g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, rat_vec};

    fn h(n: usize, rows: &[(&[i64], i64)]) -> HPolyhedron {
        HPolyhedron::new(n, rows.iter().map(|(m, c)| Ineq::new(rat_vec(m), rat(*c, 1))).collect()).unwrap()
    }

    #[test]
    fn asymptotic_cones() {
        let a = asymptotic_cone(&h(2, &[(&[1, 0], 1), (&[0, 1], 2)]));
        assert!(a.same_set(&h(2, &[(&[1, 0], 0), (&[0, 1], 0)])));
        let square = h(2, &[(&[1, 0], 0), (&[-1, 0], -1), (&[0, 1], 0), (&[0, -1], -1)]);
        let z = asymptotic_cone(&square);
        assert_eq!(z.dim(), 0);
        assert!(z.contains_point(&rat_vec(&[0, 0])));
        assert!(asymptotic_cone(&h(1, &[(&[1], -1)])).same_set(&h(1, &[(&[1], 0)])));
        let scaled = square.scaled(&rat(7, 3));
        assert!(asymptotic_cone(&scaled).same_set(&z));
    }

    #[test]
    fn cones_over_cells() {
        let c = cone_over_cell(&h(1, &[(&[1], 1)]));
        assert!(c.same_set(&h(2, &[(&[1, -1], 0), (&[0, 1], 0)])));
        let pt = cone_over_cell(&h(1, &[(&[1], 0), (&[-1], 0)]));
        assert_eq!(pt.dim(), 1);
        assert!(pt.contains_point(&rat_vec(&[0, 1])));
        let seg = cone_over_cell(&h(1, &[(&[1], 0), (&[-1], -1)]));
        assert!(seg.same_set(&h(2, &[(&[1, 0], 0), (&[-1, 1], 0)])));
        // restriction to b = 0 is the asymptotic cone
        let xi = h(2, &[(&[1, 0], 1), (&[1, 1], -3)]);
        let c = cone_over_cell(&xi);
        let slice = c.intersect(&h(3, &[(&[0, 0, -1], 0)])).unwrap();
        let asym = asymptotic_cone(&xi);
        let lifted = HPolyhedron::new(
            3,
            asym.ineqs
                .iter()
                .map(|q| {
                    let mut m = q.m.clone();
                    m.push(Rational::zero());
                    Ineq::new(m, Rational::zero())
                })
                .chain([Ineq::new(rat_vec(&[0, 0, 1]), rat(0, 1)), Ineq::new(rat_vec(&[0, 0, -1]), rat(0, 1))])
                .collect(),
        )
        .unwrap();
        assert!(slice.same_set(&lifted));
    }

    #[test]
    fn edge_decomposition_cell_counts() {
        let p2 = Fan::projective(2);
        let dec = edge_decomposition(&p2, &rat_vec(&[0, 0]), &rat_vec(&[1, 1])).unwrap();
        assert_eq!(dec.cells.len(), 5);
        assert!(check_complex(&dec).ok());
        assert!(asymptotic_fan(&dec).unwrap().same_as(&p2));
        assert!(contains_in_one_skeleton(&dec, &Piece::segment(rat_vec(&[0, 0]), rat_vec(&[1, 1]))));
        assert!(!contains_in_one_skeleton(&p2.as_complex(), &Piece::segment(rat_vec(&[0, 0]), rat_vec(&[1, 2]))));
        let p1p1 = Fan::product_of_lines(2);
        let dec = edge_decomposition(&p1p1, &rat_vec(&[0, 0]), &rat_vec(&[2, 0])).unwrap();
        assert_eq!(dec.cells.len(), 6);
        assert!(check_complex(&dec).ok());
        assert!(asymptotic_fan(&dec).unwrap().same_as(&p1p1));
        assert!(contains_in_one_skeleton(&dec, &Piece::segment(rat_vec(&[0, 0]), rat_vec(&[2, 0]))));
    }

    #[test]
    fn refinement_of_translates() {
        let p2 = Fan::projective(2);
        let a = p2.as_complex();
        // the two lines share the horizontal ray direction: 5 regions
        let b = vertex_star(&p2, &rat_vec(&[1, 0]));
        let r = common_refinement(&a, &b).unwrap();
        assert_eq!(r.cells.len(), 5);
        assert!(check_complex(&r).ok());
        // generic translate: one crossing, V=4 (with ∞), E=8, F=E−V+2=6
        let b = vertex_star(&p2, &rat_vec(&[1, 2]));
        let r = common_refinement(&a, &b).unwrap();
        assert_eq!(r.cells.len(), 6);
        assert!(check_complex(&r).ok());
        assert!(asymptotic_fan(&r).unwrap().same_as(&p2));
        let same = common_refinement(&a, &a).unwrap();
        assert_eq!(same.cells.len(), 3);
        let whole = PolyhedralComplex {
            n: 2,
            cells: vec![HPolyhedron::whole(2)],
        };
        assert_eq!(common_refinement(&a, &whole).unwrap().cells.len(), 3);
    }

    #[test]
    fn incomplete_grid_is_rejected() {
        let mut cells = Vec::new();
        for i in 0..2 {
            for j in 0..2 {
                cells.push(h(2, &[(&[1, 0], i), (&[-1, 0], -i - 1), (&[0, 1], j), (&[0, -1], -j - 1)]));
            }
        }
        let grid = PolyhedralComplex { n: 2, cells };
        assert!(matches!(asymptotic_fan(&grid), Err(PolyError::IncompleteComplex(_))));
    }

    #[test]
    fn rescale_factors() {
        assert_eq!(edge_factor(&rat(3, 1), 2), BigInt::from(2));
        assert_eq!(edge_factor(&rat(2, 1), 2), BigInt::from(1));
        assert_eq!(edge_factor(&rat(1, 2), 1), BigInt::from(2));
        let half = vertex_star(&Fan::projective(2), &[rat(1, 2), rat(1, 2)]);
        assert_eq!(integral_rescale(&half, &[]), BigInt::from(2));
    }

    #[test]
    fn line_star_is_adapted() {
        let line = PlacedCurve {
            vertices: vec![rat_vec(&[1, 2])],
            edges: vec![
                PlacedEdge { tail: 0, head: None, dir: vec![1, 0], weight: 1 },
                PlacedEdge { tail: 0, head: None, dir: vec![0, 1], weight: 1 },
                PlacedEdge { tail: 0, head: None, dir: vec![-1, -1], weight: 1 },
            ],
        };
        let p2 = Fan::projective(2);
        let dec = adapted_decomposition(&[line.clone()], &p2, &[]).unwrap();
        assert_eq!(dec.cells.len(), 3);
        for e in &line.edges {
            assert!(contains_in_one_skeleton(&dec, &Piece::ray(rat_vec(&[1, 2]), rat_i64(&e.dir))));
        }
        assert_eq!(integral_rescale(&dec, &[line.clone()]), BigInt::one());
        let bad = Fan::product_of_lines(2);
        assert!(matches!(adapted_decomposition(&[line], &bad, &[]), Err(PolyError::RayNotInFan(_))));
    }
}

//! Exact linear inequality systems: Fourier–Motzkin projection, feasibility,
//! point finding and a Bland-rule simplex.

use crate::linalg::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;

mod small;

/// Largest dimension for which the machine-integer elimination is tried first.
const SMALL_DIM: usize = 5;

/// Relation of a linear constraint `a·x rel b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rel {
    Ge,
    Gt,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinCon {
    pub a: Vec<Rational>,
    pub rel: Rel,
    pub b: Rational,
}

impl LinCon {
    pub fn new(a: Vec<Rational>, rel: Rel, b: Rational) -> Self {
        LinCon { a, rel, b }
    }

    pub fn ge(a: Vec<Rational>, b: Rational) -> Self {
        Self::new(a, Rel::Ge, b)
    }

    pub fn gt(a: Vec<Rational>, b: Rational) -> Self {
        Self::new(a, Rel::Gt, b)
    }

    pub fn eq(a: Vec<Rational>, b: Rational) -> Self {
        Self::new(a, Rel::Eq, b)
    }

    pub fn is_trivial(&self) -> bool {
        self.a.iter().all(Zero::is_zero)
    }

    /// For a constraint with zero covector: does `0 rel b` hold?
    pub fn trivially_true(&self) -> bool {
        let z = Rational::zero();
        match self.rel {
            Rel::Ge => z >= self.b,
            Rel::Gt => z > self.b,
            Rel::Eq => z == self.b,
        }
    }

    pub fn holds_at(&self, x: &[Rational]) -> bool {
        let v = dot(&self.a, x);
        match self.rel {
            Rel::Ge => v >= self.b,
            Rel::Gt => v > self.b,
            Rel::Eq => v == self.b,
        }
    }

    /// Scales to a primitive integer covector (with `b` alongside), keeping
    /// the sense; equalities get a positive leading coefficient.
    pub fn normalized(&self) -> LinCon {
        let mut den = BigInt::one();
        for q in self.a.iter().chain(std::iter::once(&self.b)) {
            den = den.lcm(q.denom());
        }
        let ints: Vec<BigInt> = self
            .a
            .iter()
            .map(|q| q.numer() * (&den / q.denom()))
            .collect();
        let bint = self.b.numer() * (&den / self.b.denom());
        let mut g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if g.is_zero() {
            return self.clone();
        }
        if self.rel == Rel::Eq {
            g = g.gcd(&bint);
            let lead = ints.iter().find(|x| !x.is_zero()).unwrap();
            if lead.is_negative() {
                g = -g;
            }
        }
        let a = ints
            .iter()
            .map(|x| Rational::from_integer(x / &g))
            .collect();
        LinCon {
            a,
            rel: self.rel,
            b: Rational::new(bint, g),
        }
    }

    /// Extends the covector with zeros up to `dim` entries, placing the old
    /// coordinates at `offset`.
    pub fn embed(&self, dim: usize, offset: usize) -> LinCon {
        let mut a = vec![Rational::zero(); dim];
        for (i, q) in self.a.iter().enumerate() {
            a[offset + i] = q.clone();
        }
        LinCon {
            a,
            rel: self.rel,
            b: self.b.clone(),
        }
    }
}

pub fn dot(a: &[Rational], x: &[Rational]) -> Rational {
    a.iter()
        .zip(x)
        .filter(|(p, _)| !p.is_zero())
        .fold(Rational::zero(), |acc, (p, q)| acc + p * q)
}

/// Outcome of maximizing a linear functional.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    /// Supremum value; `attained` is false when a strict inequality keeps
    /// the optimum out of reach.
    Optimal { value: Rational, attained: bool },
}

/// A conjunction of linear constraints in `dim` variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct System {
    pub dim: usize,
    pub cons: Vec<LinCon>,
}

impl System {
    pub fn new(dim: usize) -> Self {
        System {
            dim,
            cons: Vec::new(),
        }
    }

    pub fn with(dim: usize, cons: Vec<LinCon>) -> Self {
        for c in &cons {
            assert_eq!(c.a.len(), dim, "constraint width mismatch");
        }
        System { dim, cons }
    }

    pub fn push(&mut self, c: LinCon) {
        assert_eq!(c.a.len(), self.dim, "constraint width mismatch");
        self.cons.push(c);
    }

    pub fn intersect(&self, other: &System) -> System {
        assert_eq!(self.dim, other.dim);
        let mut cons = self.cons.clone();
        cons.extend(other.cons.iter().cloned());
        System {
            dim: self.dim,
            cons,
        }
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.cons.iter().all(|c| c.holds_at(x))
    }

    /// Normalizes, drops tautologies and syntactic duplicates, keeps the
    /// tightest of parallel inequalities. Returns `None` if a constraint is
    /// visibly contradictory.
    pub fn tidy(&self) -> Option<System> {
        let mut eqs: Vec<LinCon> = Vec::new();
        let mut best: HashMap<Vec<Rational>, (Rational, Rel)> = HashMap::new();
        let mut order: Vec<Vec<Rational>> = Vec::new();
        for c in &self.cons {
            if c.is_trivial() {
                if !c.trivially_true() {
                    return None;
                }
                continue;
            }
            let c = c.normalized();
            if c.rel == Rel::Eq {
                if !eqs.contains(&c) {
                    if eqs.iter().any(|e| e.a == c.a) {
                        return None;
                    }
                    eqs.push(c);
                }
                continue;
            }
            match best.get_mut(&c.a) {
                None => {
                    order.push(c.a.clone());
                    best.insert(c.a.clone(), (c.b.clone(), c.rel));
                }
                Some(entry) => {
                    if c.b > entry.0 || (c.b == entry.0 && c.rel == Rel::Gt) {
                        *entry = (c.b.clone(), c.rel);
                    }
                }
            }
        }
        // opposite parallel pairs: a·x ≥ b and −a·x ≥ b' need b ≤ −b'
        for a in &order {
            let neg: Vec<Rational> = a.iter().map(|q| -q).collect();
            if let (Some((b1, r1)), Some((b2, r2))) = (best.get(a), best.get(&neg)) {
                let lo = b1.clone();
                let hi = -b2.clone();
                if lo > hi || (lo == hi && (*r1 == Rel::Gt || *r2 == Rel::Gt)) {
                    return None;
                }
            }
        }
        let mut cons = eqs;
        for a in order {
            let (b, rel) = best.remove(&a).unwrap();
            cons.push(LinCon { a, rel, b });
        }
        Some(System { dim: self.dim, cons })
    }

    /// Eliminates variable `k` by Fourier–Motzkin; the result still has
    /// `dim` columns with column `k` identically zero.
    pub fn eliminate(&self, k: usize) -> Option<System> {
        let sys = self.tidy()?;
        if let Some(e) = sys.cons.iter().find(|c| c.rel == Rel::Eq && !c.a[k].is_zero()) {
            let e = e.clone();
            let cons = sys
                .cons
                .iter()
                .filter(|c| **c != e)
                .map(|c| substitute(c, &e, k))
                .collect();
            return System { dim: sys.dim, cons }.tidy();
        }
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        let mut rest = Vec::new();
        for c in sys.cons {
            if c.a[k].is_positive() {
                pos.push(c);
            } else if c.a[k].is_negative() {
                neg.push(c);
            } else {
                rest.push(c);
            }
        }
        for p in &pos {
            for q in &neg {
                let fp = -q.a[k].clone();
                let fq = p.a[k].clone();
                let a: Vec<Rational> = p
                    .a
                    .iter()
                    .zip(&q.a)
                    .map(|(x, y)| x * &fp + y * &fq)
                    .collect();
                let b = &p.b * &fp + &q.b * &fq;
                let rel = if p.rel == Rel::Gt || q.rel == Rel::Gt {
                    Rel::Gt
                } else {
                    Rel::Ge
                };
                let mut c = LinCon { a, rel, b };
                c.a[k] = Rational::zero();
                rest.push(c);
            }
        }
        System {
            dim: sys.dim,
            cons: rest,
        }
        .tidy()
    }

    /// Projects onto the first `keep` coordinates.
    pub fn project_prefix(&self, keep: usize) -> Option<System> {
        if let Some(r) = small::project_prefix(self, keep) {
            return r;
        }
        let mut sys = self.tidy()?;
        for k in (keep..self.dim).rev() {
            sys = sys.eliminate(k)?;
            if sys.cons.len() > 24 {
                sys = sys.without_redundant()?;
            }
        }
        let cons = sys
            .cons
            .into_iter()
            .map(|c| LinCon {
                a: c.a[..keep].to_vec(),
                rel: c.rel,
                b: c.b,
            })
            .collect();
        System { dim: keep, cons }.tidy()
    }

    pub fn is_feasible(&self) -> bool {
        self.find_point().is_some()
    }

    /// Some point satisfying every constraint, by FM elimination followed
    /// by back substitution.
    pub fn find_point(&self) -> Option<Vec<Rational>> {
        let mut stages = Vec::with_capacity(self.dim + 1);
        let mut sys = self.tidy()?;
        stages.push(sys.clone());
        for k in (0..self.dim).rev() {
            sys = sys.eliminate(k)?;
            if sys.cons.len() > 40 {
                sys = sys.without_redundant_fm(k)?;
            }
            stages.push(sys.clone());
        }
        // stages[j] involves variables 0..dim-j
        let mut x = vec![Rational::zero(); self.dim];
        for k in 0..self.dim {
            let stage = &stages[self.dim - 1 - k];
            x[k] = choose_value(stage, &x, k)?;
        }
        debug_assert!(self.contains(&x));
        Some(x)
    }

    /// Same as [`System::without_redundant`] but only used mid-elimination,
    /// where variables `k..` are already gone.
    fn without_redundant_fm(&self, _k: usize) -> Option<System> {
        self.without_redundant()
    }

    /// Removes inequalities implied by the others.
    pub fn without_redundant(&self) -> Option<System> {
        if self.dim <= SMALL_DIM {
            if let Some(r) = small::without_redundant(self) {
                return r;
            }
        }
        let sys = self.tidy()?;
        if !sys.is_feasible_fast() {
            return None;
        }
        let mut keep: Vec<LinCon> = sys.cons.clone();
        let mut i = 0;
        while i < keep.len() {
            if keep[i].rel == Rel::Eq {
                i += 1;
                continue;
            }
            let mut test = keep.clone();
            let c = test.remove(i);
            // c is redundant iff the rest together with its negation is empty
            let neg_rel = if c.rel == Rel::Gt { Rel::Ge } else { Rel::Gt };
            let neg = LinCon {
                a: c.a.iter().map(|q| -q).collect(),
                rel: neg_rel,
                b: -c.b.clone(),
            };
            test.push(neg);
            if (System { dim: sys.dim, cons: test }).is_feasible_fast() {
                i += 1;
            } else {
                keep.remove(i);
            }
        }
        Some(System {
            dim: sys.dim,
            cons: keep,
        })
    }

    /// Feasibility test choosing FM or simplex by dimension.
    pub fn is_feasible_fast(&self) -> bool {
        if self.dim <= SMALL_DIM {
            if let Some(r) = small::feasible(self) {
                return r;
            }
        }
        if self.dim <= 3 {
            fm_feasible(self)
        } else {
            simplex_feasible(self)
        }
    }

    /// Supremum of `obj·x` over the system.
    pub fn maximize(&self, obj: &[Rational]) -> LpOutcome {
        if self.dim <= 3 {
            maximize_fm(self, obj)
        } else {
            maximize_simplex(self, obj)
        }
    }
}

fn fm_feasible(sys: &System) -> bool {
    let Some(mut s) = sys.tidy() else {
        return false;
    };
    for k in (0..sys.dim).rev() {
        match s.eliminate(k) {
            Some(t) => s = t,
            None => return false,
        }
    }
    s.cons.iter().all(LinCon::trivially_true)
}

/// Replace variable `k` in `c` using the equality `e` (which has e.a[k] ≠ 0).
fn substitute(c: &LinCon, e: &LinCon, k: usize) -> LinCon {
    if c.a[k].is_zero() {
        return c.clone();
    }
    let f = &c.a[k] / &e.a[k];
    let a: Vec<Rational> = c.a.iter().zip(&e.a).map(|(x, y)| x - &f * y).collect();
    let b = &c.b - &f * &e.b;
    let mut out = LinCon { a, rel: c.rel, b };
    out.a[k] = Rational::zero();
    out
}

fn choose_value(stage: &System, x: &[Rational], k: usize) -> Option<Rational> {
    let mut lo: Option<(Rational, bool)> = None;
    let mut hi: Option<(Rational, bool)> = None;
    for c in &stage.cons {
        let coef = &c.a[k];
        if coef.is_zero() {
            continue;
        }
        let rest = dot(&c.a[..k], &x[..k]);
        let bound = (&c.b - rest) / coef;
        let strict = c.rel == Rel::Gt;
        match c.rel {
            Rel::Eq => return Some(bound),
            _ if coef.is_positive() => {
                if lo.as_ref().is_none_or(|(v, s)| bound > *v || (bound == *v && strict && !s)) {
                    lo = Some((bound, strict));
                }
            }
            _ => {
                if hi.as_ref().is_none_or(|(v, s)| bound < *v || (bound == *v && strict && !s)) {
                    hi = Some((bound, strict));
                }
            }
        }
    }
    let two = Rational::from_integer(2.into());
    Some(match (lo, hi) {
        (None, None) => Rational::zero(),
        (Some((l, _)), None) => l + Rational::one(),
        (None, Some((h, _))) => h - Rational::one(),
        (Some((l, ls)), Some((h, hs))) => {
            if l > h || (l == h && (ls || hs)) {
                return None;
            }
            (l + h) / two
        }
    })
}

fn maximize_fm(sys: &System, obj: &[Rational]) -> LpOutcome {
    // variable 0 is z = obj·x; eliminate the rest
    let n = sys.dim;
    let mut cons: Vec<LinCon> = sys.cons.iter().map(|c| c.embed(n + 1, 1)).collect();
    let mut a = vec![Rational::one()];
    a.extend(obj.iter().map(|q| -q));
    cons.push(LinCon::eq(a, Rational::zero()));
    let Some(proj) = System::with(n + 1, cons).project_prefix(1) else {
        return LpOutcome::Infeasible;
    };
    if !proj.cons.iter().filter(|c| c.is_trivial()).all(LinCon::trivially_true) {
        return LpOutcome::Infeasible;
    }
    let mut upper: Option<(Rational, bool)> = None;
    for c in &proj.cons {
        let coef = &c.a[0];
        if coef.is_zero() {
            continue;
        }
        let v = &c.b / coef;
        let strict = c.rel == Rel::Gt;
        if c.rel == Rel::Eq {
            return LpOutcome::Optimal {
                value: v,
                attained: true,
            };
        }
        if coef.is_negative() && upper.as_ref().is_none_or(|(u, s)| v < *u || (v == *u && strict && !s)) {
            upper = Some((v, strict));
        }
    }
    if !fm_feasible(&proj) {
        return LpOutcome::Infeasible;
    }
    match upper {
        None => LpOutcome::Unbounded,
        Some((value, strict)) => LpOutcome::Optimal {
            value,
            attained: !strict,
        },
    }
}

/// Dense tableau for `max c·y, A y = b, y ≥ 0` with `b ≥ 0`.
struct Tableau {
    m: usize,
    ncols: usize,
    t: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.t[r][c].clone();
        for j in 0..self.ncols {
            if !self.t[r][j].is_zero() {
                self.t[r][j] = &self.t[r][j] / &p;
            }
        }
        self.rhs[r] = &self.rhs[r] / &p;
        for i in 0..self.m {
            if i == r || self.t[i][c].is_zero() {
                continue;
            }
            let f = self.t[i][c].clone();
            for j in 0..self.ncols {
                if !self.t[r][j].is_zero() {
                    let v = &self.t[i][j] - &f * &self.t[r][j];
                    self.t[i][j] = v;
                }
            }
            let v = &self.rhs[i] - &f * &self.rhs[r];
            self.rhs[i] = v;
        }
        self.basis[r] = c;
    }

    /// Runs Bland's rule maximizing `c` over allowed columns. Returns false
    /// on unboundedness.
    fn optimize(&mut self, c: &[Rational], allowed: &[bool]) -> bool {
        loop {
            let mut entering = None;
            for j in 0..self.ncols {
                if !allowed[j] || self.basis.contains(&j) {
                    continue;
                }
                // reduced cost c_j − c_B·col_j
                let mut red = c[j].clone();
                for i in 0..self.m {
                    if !self.t[i][j].is_zero() {
                        red -= &c[self.basis[i]] * &self.t[i][j];
                    }
                }
                if red.is_positive() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(j) = entering else {
                return true;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.m {
                if self.t[i][j].is_positive() {
                    let ratio = &self.rhs[i] / &self.t[i][j];
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((r, _)) = leave else {
                return false;
            };
            self.pivot(r, j);
        }
    }

    fn value(&self, c: &[Rational]) -> Rational {
        (0..self.m).fold(Rational::zero(), |acc, i| acc + &c[self.basis[i]] * &self.rhs[i])
    }
}

/// Two-phase simplex for `max c·x` subject to non-strict constraints with
/// free variables. Returns the outcome and an optimal point when one exists.
pub fn simplex_max(sys: &System, obj: &[Rational]) -> (LpOutcome, Option<Vec<Rational>>) {
    assert!(sys.cons.iter().all(|c| c.rel != Rel::Gt), "simplex takes closed systems");
    let n = sys.dim;
    let m = sys.cons.len();
    let slack_count = sys.cons.iter().filter(|c| c.rel == Rel::Ge).count();
    // columns: x+ (n), x- (n), slacks, artificials (m)
    let art0 = 2 * n + slack_count;
    let ncols = art0 + m;
    let mut t = vec![vec![Rational::zero(); ncols]; m];
    let mut rhs = vec![Rational::zero(); m];
    let mut s = 0;
    for (i, c) in sys.cons.iter().enumerate() {
        for j in 0..n {
            t[i][j] = c.a[j].clone();
            t[i][n + j] = -c.a[j].clone();
        }
        if c.rel == Rel::Ge {
            t[i][2 * n + s] = -Rational::one();
            s += 1;
        }
        rhs[i] = c.b.clone();
        if rhs[i].is_negative() {
            for v in t[i].iter_mut() {
                *v = -v.clone();
            }
            rhs[i] = -rhs[i].clone();
        }
        t[i][art0 + i] = Rational::one();
    }
    let mut tab = Tableau {
        m,
        ncols,
        t,
        rhs,
        basis: (art0..art0 + m).collect(),
    };
    let mut phase1 = vec![Rational::zero(); ncols];
    for v in phase1.iter_mut().skip(art0) {
        *v = -Rational::one();
    }
    let all = vec![true; ncols];
    tab.optimize(&phase1, &all);
    if tab.value(&phase1).is_negative() {
        return (LpOutcome::Infeasible, None);
    }
    // drive artificials out of the basis
    let mut r = 0;
    while r < tab.m {
        if tab.basis[r] >= art0 {
            if let Some(j) = (0..art0).find(|&j| !tab.t[r][j].is_zero()) {
                tab.pivot(r, j);
            } else {
                tab.t.remove(r);
                tab.rhs.remove(r);
                tab.basis.remove(r);
                tab.m -= 1;
                continue;
            }
        }
        r += 1;
    }
    let mut c = vec![Rational::zero(); ncols];
    for j in 0..n {
        c[j] = obj[j].clone();
        c[n + j] = -obj[j].clone();
    }
    let allowed: Vec<bool> = (0..ncols).map(|j| j < art0).collect();
    if !tab.optimize(&c, &allowed) {
        return (LpOutcome::Unbounded, None);
    }
    let mut y = vec![Rational::zero(); ncols];
    for i in 0..tab.m {
        y[tab.basis[i]] = tab.rhs[i].clone();
    }
    let x: Vec<Rational> = (0..n).map(|j| &y[j] - &y[n + j]).collect();
    (
        LpOutcome::Optimal {
            value: tab.value(&c),
            attained: true,
        },
        Some(x),
    )
}

/// Strict inequalities become `a·x − ε ≥ b` with `0 ≤ ε ≤ 1`; the system is
/// feasible iff the best ε is positive.
fn strict_lift(sys: &System) -> System {
    let n = sys.dim;
    let mut cons: Vec<LinCon> = Vec::new();
    for c in &sys.cons {
        let mut a = c.a.clone();
        a.push(if c.rel == Rel::Gt {
            -Rational::one()
        } else {
            Rational::zero()
        });
        let rel = if c.rel == Rel::Gt { Rel::Ge } else { c.rel };
        cons.push(LinCon { a, rel, b: c.b.clone() });
    }
    let mut e = vec![Rational::zero(); n + 1];
    e[n] = -Rational::one();
    cons.push(LinCon::ge(e.clone(), -Rational::one()));
    e[n] = Rational::one();
    cons.push(LinCon::ge(e, Rational::zero()));
    System::with(n + 1, cons)
}

fn simplex_feasible(sys: &System) -> bool {
    let Some(sys) = sys.tidy() else {
        return false;
    };
    if sys.cons.iter().all(|c| c.rel != Rel::Gt) {
        return !matches!(simplex_max(&sys, &vec![Rational::zero(); sys.dim]).0, LpOutcome::Infeasible);
    }
    let lifted = strict_lift(&sys);
    let mut obj = vec![Rational::zero(); sys.dim + 1];
    obj[sys.dim] = Rational::one();
    match simplex_max(&lifted, &obj).0 {
        LpOutcome::Optimal { value, .. } => value.is_positive(),
        _ => false,
    }
}

fn maximize_simplex(sys: &System, obj: &[Rational]) -> LpOutcome {
    let Some(sys) = sys.tidy() else {
        return LpOutcome::Infeasible;
    };
    if !simplex_feasible(&sys) {
        return LpOutcome::Infeasible;
    }
    // optimum over the closure; attained iff the optimal face meets the
    // strict region
    let closed = System {
        dim: sys.dim,
        cons: sys
            .cons
            .iter()
            .map(|c| LinCon {
                rel: if c.rel == Rel::Gt { Rel::Ge } else { c.rel },
                ..c.clone()
            })
            .collect(),
    };
    match simplex_max(&closed, obj).0 {
        LpOutcome::Optimal { value, .. } => {
            let mut face = sys.clone();
            face.push(LinCon::eq(obj.to_vec(), value.clone()));
            LpOutcome::Optimal {
                attained: simplex_feasible(&face),
                value,
            }
        }
        other => other,
    }
}

/// A system prepared for many feasibility tests against others of the same
/// dimension. Falls back to exact arithmetic when machine integers overflow.
#[derive(Clone)]
pub struct Compiled {
    parts: Vec<std::sync::Arc<System>>,
    small: Option<small::Sys>,
}

impl Compiled {
    pub fn new(sys: &System) -> Compiled {
        let small = if sys.dim <= SMALL_DIM { small::compile(sys) } else { None };
        Compiled {
            parts: vec![std::sync::Arc::new(sys.clone())],
            small,
        }
    }

    pub fn intersect(&self, other: &Compiled) -> Compiled {
        let small = match (&self.small, &other.small) {
            (Some(a), Some(b)) => Some(small::join(a, b)),
            _ => None,
        };
        let mut parts = self.parts.clone();
        parts.extend(other.parts.iter().cloned());
        Compiled { parts, small }
    }

    pub fn is_feasible(&self) -> bool {
        if let Some(r) = self.small.as_ref().and_then(small::feasible_compiled) {
            return r;
        }
        let mut all = System::new(self.parts[0].dim);
        for p in &self.parts {
            all.cons.extend(p.cons.iter().cloned());
        }
        all.is_feasible_fast()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{rat, rat_vec};

    fn q(n: i64) -> Rational {
        rat(n, 1)
    }

    fn square() -> System {
        // 0 ≤ x ≤ 1, 0 ≤ y ≤ 1
        System::with(
            2,
            vec![
                LinCon::ge(rat_vec(&[1, 0]), q(0)),
                LinCon::ge(rat_vec(&[-1, 0]), q(-1)),
                LinCon::ge(rat_vec(&[0, 1]), q(0)),
                LinCon::ge(rat_vec(&[0, -1]), q(-1)),
            ],
        )
    }

    #[test]
    fn feasibility_and_points() {
        let s = square();
        let p = s.find_point().unwrap();
        assert!(s.contains(&p));
        let mut t = s.clone();
        t.push(LinCon::gt(rat_vec(&[1, 1]), q(2)));
        assert!(!t.is_feasible());
        assert!(!t.is_feasible_fast());
        let mut u = s.clone();
        u.push(LinCon::ge(rat_vec(&[1, 1]), q(2)));
        assert_eq!(u.find_point().unwrap(), rat_vec(&[1, 1]));
    }

    #[test]
    fn maximize_square() {
        let s = square();
        assert_eq!(
            s.maximize(&rat_vec(&[1, 1])),
            LpOutcome::Optimal {
                value: q(2),
                attained: true
            }
        );
        let mut open = s.clone();
        open.push(LinCon::gt(rat_vec(&[-1, 0]), q(-1)));
        assert_eq!(
            open.maximize(&rat_vec(&[1, 0])),
            LpOutcome::Optimal {
                value: q(1),
                attained: false
            }
        );
        let half = System::with(1, vec![LinCon::ge(rat_vec(&[1]), q(0))]);
        assert_eq!(half.maximize(&rat_vec(&[1])), LpOutcome::Unbounded);
    }

    #[test]
    fn redundancy_removal() {
        let mut s = square();
        s.push(LinCon::ge(rat_vec(&[1, 1]), q(-5)));
        s.push(LinCon::ge(rat_vec(&[2, 0]), q(-1)));
        let r = s.without_redundant().unwrap();
        assert_eq!(r.cons.len(), 4);
    }

    #[test]
    fn projection_of_triangle() {
        // x ≥ 0, y ≥ 0, x + y ≤ 2 projected to x gives 0 ≤ x ≤ 2
        let s = System::with(
            2,
            vec![
                LinCon::ge(rat_vec(&[1, 0]), q(0)),
                LinCon::ge(rat_vec(&[0, 1]), q(0)),
                LinCon::ge(rat_vec(&[-1, -1]), q(-2)),
            ],
        );
        let p = s.project_prefix(1).unwrap();
        assert!(p.contains(&[q(2)]));
        assert!(!p.contains(&[rat(5, 2)]));
        assert!(!p.contains(&[q(-1)]));
    }

    #[test]
    fn simplex_matches_fm_in_four_dims() {
        // box [0,1]^4 cut by sum ≤ 3/2
        let mut cons = Vec::new();
        for i in 0..4 {
            let mut e = vec![0; 4];
            e[i] = 1;
            cons.push(LinCon::ge(rat_vec(&e), q(0)));
            e[i] = -1;
            cons.push(LinCon::ge(rat_vec(&e), q(-1)));
        }
        cons.push(LinCon::ge(rat_vec(&[-1, -1, -1, -1]), rat(-3, 2)));
        let s = System::with(4, cons);
        let obj = rat_vec(&[1, 2, 0, 0]);
        assert_eq!(maximize_simplex(&s, &obj), maximize_fm(&s, &obj));
        assert_eq!(
            maximize_simplex(&s, &obj),
            LpOutcome::Optimal {
                value: rat(5, 2),
                attained: true
            }
        );
    }
}

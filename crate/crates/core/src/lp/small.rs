//! Fourier–Motzkin on machine integers. Every entry point returns `None`
//! when an intermediate value does not fit, so callers can fall back to the
//! big-rational implementation.

use super::{LinCon, Rel, System};
use crate::linalg::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use std::collections::HashMap;

/// Small rational with positive denominator, kept reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Q {
    n: i128,
    d: i128,
}

const LIMIT: i128 = 1 << 60;

impl Q {
    fn new(n: i128, d: i128) -> Option<Q> {
        if d == 0 {
            return None;
        }
        let g = n.gcd(&d);
        let (mut n, mut d) = if g == 0 { (0, 1) } else { (n / g, d / g) };
        if d < 0 {
            n = -n;
            d = -d;
        }
        if n.abs() > LIMIT || d > LIMIT {
            return None;
        }
        Some(Q { n, d })
    }

    fn add(self, o: Q) -> Option<Q> {
        let n = self.n.checked_mul(o.d)?.checked_add(o.n.checked_mul(self.d)?)?;
        Q::new(n, self.d.checked_mul(o.d)?)
    }

    fn scale(self, k: i128) -> Option<Q> {
        Q::new(self.n.checked_mul(k)?, self.d)
    }

    fn div_int(self, k: i128) -> Option<Q> {
        Q::new(self.n, self.d.checked_mul(k)?)
    }

    fn cmp(self, o: Q) -> Option<std::cmp::Ordering> {
        Some(self.n.checked_mul(o.d)?.cmp(&o.n.checked_mul(self.d)?))
    }

    fn sign(self) -> i128 {
        self.n.signum()
    }

    fn from_big(q: &Rational) -> Option<Q> {
        Q::new(q.numer().to_i128()?, q.denom().to_i128()?)
    }

    fn to_big(self) -> Rational {
        Rational::new(BigInt::from(self.n), BigInt::from(self.d))
    }
}

/// `a·x rel b` with `a` primitive (or zero).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Con {
    a: Vec<i64>,
    b: Q,
    rel: Rel,
}

impl Con {
    fn is_trivial(&self) -> bool {
        self.a.iter().all(|&x| x == 0)
    }

    fn trivially_true(&self) -> bool {
        match self.rel {
            Rel::Ge => self.b.sign() <= 0,
            Rel::Gt => self.b.sign() < 0,
            Rel::Eq => self.b.sign() == 0,
        }
    }

    /// From integer coefficients and rational right side, dividing out the
    /// content; equalities get a positive leading coefficient.
    fn build(a: &[i128], b: Q, rel: Rel) -> Option<Con> {
        let mut g: i128 = 0;
        for &x in a {
            g = g.gcd(&x);
        }
        if g == 0 {
            return Some(Con {
                a: vec![0; a.len()],
                b,
                rel,
            });
        }
        if rel == Rel::Eq && a.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
            g = -g;
        }
        let mut out = Vec::with_capacity(a.len());
        for &x in a {
            out.push(i64::try_from(x / g).ok()?);
        }
        Some(Con {
            a: out,
            b: b.div_int(g)?,
            rel,
        })
    }

    fn from_lin(c: &LinCon) -> Option<Con> {
        let mut den = BigInt::from(1);
        for q in &c.a {
            den = den.lcm(q.denom());
        }
        let den_i = den.to_i128()?;
        let mut a = Vec::with_capacity(c.a.len());
        for q in &c.a {
            a.push((q.numer() * (&den / q.denom())).to_i128()?);
        }
        let b = Q::from_big(&c.b)?.scale(den_i)?;
        Con::build(&a, b, c.rel)
    }

    fn to_lin(&self) -> LinCon {
        LinCon {
            a: self.a.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect(),
            rel: self.rel,
            b: self.b.to_big(),
        }
    }
}

#[derive(Clone)]
pub(super) struct Sys {
    dim: usize,
    cons: Vec<Con>,
}

fn convert(sys: &System) -> Option<Sys> {
    let cons = sys.cons.iter().map(Con::from_lin).collect::<Option<Vec<_>>>()?;
    Some(Sys { dim: sys.dim, cons })
}

fn back(sys: &Sys) -> System {
    System {
        dim: sys.dim,
        cons: sys.cons.iter().map(Con::to_lin).collect(),
    }
}

/// Outcome of a fallible step: `Err(())` means overflow.
type Step<T> = Result<Option<T>, ()>;

fn tidy(cons: Vec<Con>, dim: usize) -> Step<Sys> {
    let mut eqs: Vec<Con> = Vec::new();
    let mut best: HashMap<Vec<i64>, (Q, Rel)> = HashMap::new();
    let mut order: Vec<Vec<i64>> = Vec::new();
    for c in cons {
        if c.is_trivial() {
            if !c.trivially_true() {
                return Ok(None);
            }
            continue;
        }
        if c.rel == Rel::Eq {
            if let Some(e) = eqs.iter().find(|e| e.a == c.a) {
                if e.b != c.b {
                    return Ok(None);
                }
                continue;
            }
            eqs.push(c);
            continue;
        }
        match best.get_mut(&c.a) {
            None => {
                order.push(c.a.clone());
                best.insert(c.a, (c.b, c.rel));
            }
            Some(entry) => {
                let o = c.b.cmp(entry.0).ok_or(())?;
                if o.is_gt() || (o.is_eq() && c.rel == Rel::Gt) {
                    *entry = (c.b, c.rel);
                }
            }
        }
    }
    for a in &order {
        let neg: Vec<i64> = a.iter().map(|x| -x).collect();
        if let (Some((b1, r1)), Some((b2, r2))) = (best.get(a), best.get(&neg)) {
            // b1 ≤ a·x ≤ −b2
            let hi = Q { n: -b2.n, d: b2.d };
            let o = b1.cmp(hi).ok_or(())?;
            if o.is_gt() || (o.is_eq() && (*r1 == Rel::Gt || *r2 == Rel::Gt)) {
                return Ok(None);
            }
        }
    }
    let mut out = eqs;
    for a in order {
        let (b, rel) = best.remove(&a).unwrap();
        out.push(Con { a, b, rel });
    }
    Ok(Some(Sys { dim, cons: out }))
}

fn eliminate(sys: Sys, k: usize) -> Step<Sys> {
    if let Some(pos) = sys.cons.iter().position(|c| c.rel == Rel::Eq && c.a[k] != 0) {
        let e = sys.cons[pos].clone();
        let ek = e.a[k] as i128;
        let s = ek.signum();
        let mut out = Vec::with_capacity(sys.cons.len());
        for (i, c) in sys.cons.into_iter().enumerate() {
            if i == pos {
                continue;
            }
            if c.a[k] == 0 {
                out.push(c);
                continue;
            }
            // c·|e_k| − c_k·s·e
            let ck = c.a[k] as i128;
            let mut a = Vec::with_capacity(c.a.len());
            for (x, y) in c.a.iter().zip(&e.a) {
                let v = (*x as i128).checked_mul(ek.abs()).ok_or(())?.checked_sub((ck * s).checked_mul(*y as i128).ok_or(())?).ok_or(())?;
                a.push(v);
            }
            a[k] = 0;
            let b = c.b.scale(ek.abs()).and_then(|x| x.add(e.b.scale(-ck * s)?)).ok_or(())?;
            out.push(Con::build(&a, b, c.rel).ok_or(())?);
        }
        return tidy(out, sys.dim);
    }
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut rest = Vec::new();
    for c in sys.cons {
        match c.a[k].signum() {
            1 => pos.push(c),
            -1 => neg.push(c),
            _ => rest.push(c),
        }
    }
    for p in &pos {
        for q in &neg {
            let fp = -(q.a[k] as i128);
            let fq = p.a[k] as i128;
            let mut a = Vec::with_capacity(p.a.len());
            for (x, y) in p.a.iter().zip(&q.a) {
                let v = (*x as i128).checked_mul(fp).ok_or(())?.checked_add((*y as i128).checked_mul(fq).ok_or(())?).ok_or(())?;
                a.push(v);
            }
            a[k] = 0;
            let b = p.b.scale(fp).and_then(|x| x.add(q.b.scale(fq)?)).ok_or(())?;
            let rel = if p.rel == Rel::Gt || q.rel == Rel::Gt { Rel::Gt } else { Rel::Ge };
            rest.push(Con::build(&a, b, rel).ok_or(())?);
        }
    }
    tidy(rest, sys.dim)
}

/// Eliminates the last variable and drops its column.
fn eliminate_last(sys: Sys) -> Step<Sys> {
    let k = sys.dim - 1;
    let Some(s) = eliminate(sys, k)? else {
        return Ok(None);
    };
    let cons = s
        .cons
        .into_iter()
        .map(|mut c| {
            c.a.truncate(k);
            c
        })
        .collect();
    Ok(Some(Sys { dim: k, cons }))
}

fn feasible_sys(sys: Sys) -> Result<bool, ()> {
    let Some(mut s) = tidy(sys.cons, sys.dim)? else {
        return Ok(false);
    };
    while s.dim > 0 {
        match eliminate_last(s)? {
            Some(t) => s = t,
            None => return Ok(false),
        }
        if s.cons.len() > 40 {
            match reduce(s)? {
                Some(t) => s = t,
                None => return Ok(false),
            }
        }
    }
    Ok(s.cons.iter().all(Con::trivially_true))
}

fn reduce(sys: Sys) -> Step<Sys> {
    let Some(sys) = tidy(sys.cons, sys.dim)? else {
        return Ok(None);
    };
    let dim = sys.dim;
    if !feasible_sys(Sys { dim, cons: sys.cons.clone() })? {
        return Ok(None);
    }
    let mut keep = sys.cons;
    let mut i = 0;
    while i < keep.len() {
        if keep[i].rel == Rel::Eq {
            i += 1;
            continue;
        }
        let mut test = keep.clone();
        let c = test.remove(i);
        test.push(Con {
            a: c.a.iter().map(|x| -x).collect(),
            b: Q { n: -c.b.n, d: c.b.d },
            rel: if c.rel == Rel::Gt { Rel::Ge } else { Rel::Gt },
        });
        if feasible_sys(Sys { dim, cons: test })? {
            i += 1;
        } else {
            keep.remove(i);
        }
    }
    Ok(Some(Sys { dim, cons: keep }))
}

pub(super) fn compile(sys: &System) -> Option<Sys> {
    convert(sys)
}

pub(super) fn join(a: &Sys, b: &Sys) -> Sys {
    let mut cons = a.cons.clone();
    cons.extend(b.cons.iter().cloned());
    Sys { dim: a.dim, cons }
}

pub(super) fn feasible_compiled(sys: &Sys) -> Option<bool> {
    feasible_sys(sys.clone()).ok()
}

pub(super) fn feasible(sys: &System) -> Option<bool> {
    feasible_sys(convert(sys)?).ok()
}

pub(super) fn without_redundant(sys: &System) -> Option<Option<System>> {
    reduce(convert(sys)?).ok().map(|r| r.map(|s| back(&s)))
}

pub(super) fn project_prefix(sys: &System, keep: usize) -> Option<Option<System>> {
    let s = convert(sys)?;
    let run = || -> Step<System> {
        let Some(mut s) = tidy(s.cons, s.dim)? else {
            return Ok(None);
        };
        while s.dim > keep {
            match eliminate_last(s)? {
                Some(t) => s = t,
                None => return Ok(None),
            }
            if s.cons.len() > 24 {
                match reduce(s)? {
                    Some(t) => s = t,
                    None => return Ok(None),
                }
            }
        }
        Ok(Some(back(&s)))
    };
    run().ok()
}

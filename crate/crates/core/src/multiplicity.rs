//! Lattice-index multiplicities, plane vertex multiplicities and the
//! Kontsevich recursion.

use crate::combinatorics::TropicalType;
use crate::constraints::AffineConstraint;
use crate::linalg::{cokernel_order, hermite_rows, lattice_index, saturate, CokernelOrder, IntegerMatrix, LatticeBasis};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MultiplicityError {
    #[error("the lattice map has infinite cokernel")]
    InfiniteIndex,
    #[error("vertex multiplicities need rank 2, got {0}")]
    WrongDimension(usize),
    #[error("vertex {0} is not trivalent")]
    NotTrivalent(usize),
    #[error("lattice error: {0}")]
    Lattice(#[from] crate::linalg::LinalgError),
}

/// The summands of the tropical count for one curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiplicityRecord {
    pub marked_weight: BigInt,
    pub d_index: BigInt,
    pub deltas: Vec<BigInt>,
    pub d_tilde: BigInt,
    pub contribution: BigInt,
}

pub fn total_marked_weight(t: &TropicalType) -> BigInt {
    BigInt::from(t.marked_weight())
}

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Generators of `ℤu + L(A)∩N` for marking `i`.
fn marking_generators(t: &TropicalType, a: &[AffineConstraint], i: usize) -> Vec<Vec<BigInt>> {
    let u = &t.edges[t.markings[i]].dir;
    let mut g = vec![big(u)];
    g.extend(a[i].directions.vectors().iter().cloned());
    g
}

/// Presentation of the target of the lattice map with the marking blocks
/// divided by `relations(i)`.
fn presentation(
    t: &TropicalType,
    _a: &[AffineConstraint],
    relations: impl Fn(usize) -> Vec<Vec<BigInt>>,
) -> IntegerMatrix {
    let n = t.n;
    let bounded = t.bounded_edges();
    let rows = n * bounded.len() + n * t.markings.len();
    let mut columns: Vec<Vec<BigInt>> = Vec::new();
    for v in 0..t.vertices {
        for c in 0..n {
            let mut col = vec![BigInt::zero(); rows];
            for (k, &e) in bounded.iter().enumerate() {
                let edge = &t.edges[e];
                if edge.head == Some(v) {
                    col[k * n + c] += 1;
                }
                if edge.tail == v {
                    col[k * n + c] -= 1;
                }
            }
            for (i, &e) in t.markings.iter().enumerate() {
                if t.edges[e].tail == v {
                    col[n * bounded.len() + i * n + c] += 1;
                }
            }
            columns.push(col);
        }
    }
    for (k, &e) in bounded.iter().enumerate() {
        let mut col = vec![BigInt::zero(); rows];
        for c in 0..n {
            col[k * n + c] = BigInt::from(t.edges[e].dir[c]);
        }
        columns.push(col);
    }
    for i in 0..t.markings.len() {
        for r in relations(i) {
            let mut col = vec![BigInt::zero(); rows];
            for c in 0..n {
                col[n * bounded.len() + i * n + c] = r[c].clone();
            }
            columns.push(col);
        }
    }
    IntegerMatrix::from_columns(rows, &columns)
}

/// Presentation matrix of the cokernel of the integral matching map.
pub fn lattice_map_matrix(t: &TropicalType, a: &[AffineConstraint]) -> IntegerMatrix {
    presentation(t, a, |i| saturate(&marking_generators(t, a, i), t.n).vectors().to_vec())
}

/// Same map with unsaturated marking relations `{u_i} ∪ L(A_i)`; its
/// cokernel order is the product of the lattice index with all δ_i.
pub fn lattice_map_matrix_unsaturated(t: &TropicalType, a: &[AffineConstraint]) -> IntegerMatrix {
    presentation(t, a, |i| marking_generators(t, a, i))
}

pub fn curve_index_d(t: &TropicalType, a: &[AffineConstraint]) -> Result<BigInt, MultiplicityError> {
    match cokernel_order(&lattice_map_matrix(t, a)) {
        CokernelOrder::Finite(d) => Ok(d),
        CokernelOrder::Infinite => Err(MultiplicityError::InfiniteIndex),
    }
}

pub fn delta_indices(t: &TropicalType, a: &[AffineConstraint]) -> Result<Vec<BigInt>, MultiplicityError> {
    (0..t.markings.len())
        .map(|i| {
            let gens = marking_generators(t, a, i);
            let sub = LatticeBasis::new(t.n, hermite_rows(&gens, t.n));
            let sup = saturate(&gens, t.n);
            Ok(lattice_index(&sub, &sup)?)
        })
        .collect()
}

pub fn multiplicity_record(t: &TropicalType, a: &[AffineConstraint]) -> Result<MultiplicityRecord, MultiplicityError> {
    let d_index = curve_index_d(t, a)?;
    let deltas = delta_indices(t, a)?;
    let d_tilde = deltas.iter().fold(d_index.clone(), |acc, x| acc * x);
    let marked_weight = total_marked_weight(t);
    Ok(MultiplicityRecord {
        contribution: &marked_weight * &d_tilde,
        marked_weight,
        d_index,
        deltas,
        d_tilde,
    })
}

/// `w(E1) w(E2) |det(u1, u2)|` at a trivalent plane vertex.
pub fn mikhalkin_vertex_mult(t: &TropicalType, v: usize) -> Result<BigInt, MultiplicityError> {
    if t.n != 2 {
        return Err(MultiplicityError::WrongDimension(t.n));
    }
    let adj = t.adjacency();
    if adj[v].len() != 3 {
        return Err(MultiplicityError::NotTrivalent(v));
    }
    let pair = |e: usize, f: usize| {
        let u = t.flag_direction(v, e);
        let w = t.flag_direction(v, f);
        let det = (u[0] * w[1] - u[1] * w[0]).abs();
        BigInt::from(t.edges[e].weight) * BigInt::from(t.edges[f].weight) * BigInt::from(det)
    };
    let m = pair(adj[v][0], adj[v][1]);
    debug_assert_eq!(m, pair(adj[v][1], adj[v][2]));
    debug_assert_eq!(m, pair(adj[v][0], adj[v][2]));
    Ok(m)
}

/// Both sides of the plane identity relating the lattice index to vertex
/// multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneCheck {
    /// Inner weight (bounded edges only) times the lattice index.
    pub lhs: BigInt,
    /// Total marked weight times the lattice index.
    pub lhs_marked: BigInt,
    /// Product of vertex multiplicities.
    pub rhs: BigInt,
    pub equal: bool,
}

pub fn check_2d_equivalence(t: &TropicalType, a: &[AffineConstraint]) -> Result<PlaneCheck, MultiplicityError> {
    if t.n != 2 {
        return Err(MultiplicityError::WrongDimension(t.n));
    }
    let d = curve_index_d(t, a)?;
    let lhs = BigInt::from(t.inner_weight()) * &d;
    let lhs_marked = total_marked_weight(t) * &d;
    let mut rhs = BigInt::one();
    for v in 0..t.vertices {
        rhs *= mikhalkin_vertex_mult(t, v)?;
    }
    Ok(PlaneCheck {
        equal: lhs == rhs,
        lhs,
        lhs_marked,
        rhs,
    })
}

fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// Numbers of rational plane curves of degree `1..=dmax` through `3d−1`
/// general points.
pub fn kontsevich_oracle(dmax: usize) -> Vec<BigInt> {
    let mut n: Vec<BigInt> = vec![BigInt::zero(), BigInt::one()];
    for d in 2..=dmax as u64 {
        let mut total = BigInt::zero();
        for da in 1..d {
            let db = d - da;
            let term = BigInt::from(da * da * db * db) * binomial(3 * d - 4, 3 * da - 2)
                - BigInt::from(da * da * da * db) * binomial(3 * d - 4, 3 * da - 1);
            total += &n[da as usize] * &n[db as usize] * term;
        }
        n.push(total);
    }
    n.into_iter().skip(1).take(dmax).collect()
}

/// Order of `ℤ^m / colspan(M)` by walking the subgroup generated by the
/// columns inside `(ℤ/D)^m`, where `D` is a nonzero maximal minor.
pub fn coset_oracle(m: &IntegerMatrix) -> Option<BigInt> {
    let rows = m.rows();
    if rows == 0 {
        return Some(BigInt::one());
    }
    if m.rank() < rows {
        return None;
    }
    // D·ℤ^m lies in the column span whenever D is a nonzero maximal minor
    let cols = m.cols();
    let mut d = BigInt::zero();
    let mut chosen = Vec::new();
    fn pick(start: usize, cols: usize, k: usize, chosen: &mut Vec<usize>, m: &IntegerMatrix, out: &mut BigInt) {
        if !out.is_zero() {
            return;
        }
        if chosen.len() == k {
            let sub: Vec<Vec<BigInt>> = chosen.iter().map(|&j| m.column(j)).collect();
            let det = IntegerMatrix::from_columns(k, &sub).determinant();
            if !det.is_zero() {
                *out = det.abs();
            }
            return;
        }
        for j in start..cols {
            chosen.push(j);
            pick(j + 1, cols, k, chosen, m, out);
            chosen.pop();
        }
    }
    pick(0, cols, rows, &mut chosen, m, &mut d);
    let dd: i64 = i64::try_from(&d).ok()?;
    let gens: Vec<Vec<i64>> = (0..cols)
        .map(|j| m.column(j).iter().map(|x| i64::try_from(&x.mod_floor(&d)).unwrap()).collect())
        .collect();
    let mut seen = std::collections::HashSet::new();
    let start = vec![0i64; rows];
    seen.insert(start.clone());
    let mut queue = vec![start];
    while let Some(x) = queue.pop() {
        for g in &gens {
            let y: Vec<i64> = x.iter().zip(g).map(|(a, b)| (a + b).rem_euclid(dd)).collect();
            if seen.insert(y.clone()) {
                queue.push(y);
            }
        }
    }
    let total = BigInt::from(dd).pow(rows as u32);
    Some(total / BigInt::from(seen.len()))
}

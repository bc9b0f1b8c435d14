//! Candidate search for curves matching a constraint set.
//!
//! Every rooted branch carries the polyhedron of parent-vertex positions it
//! can be attached to. Branches with at most half of the ends are merged
//! bottom-up, keeping only the rigid ones with non-empty families; triples
//! of branches meeting at a common vertex become marked types, which are
//! then solved exactly by the caller.

use crate::combinatorics::{derive_type, primitive_i64, Degree, LeafTree, TropicalType};
use crate::constraints::AffineConstraint;
use crate::linalg::Rational;
use crate::lp::{Compiled, LinCon, Rel, System};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex};

fn q(x: i64) -> Rational {
    Rational::from_integer(BigInt::from(x))
}

struct ConsData {
    /// Integer covectors cutting out the constraint, as rationals.
    ann: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    codim: usize,
}

enum BranchKind {
    Leaf(usize),
    Inner(Arc<VertexPiece>),
}

struct Branch {
    id: usize,
    /// All constraints used in the branch, its own edge included.
    mask: u32,
    edge_mask: u32,
    kind: BranchKind,
    family: System,
}

struct VertexPiece {
    left: Arc<Branch>,
    right: Arc<Branch>,
    family: System,
}

struct Ctx {
    n: usize,
    distinct: Vec<Vec<i64>>,
    counts: Vec<usize>,
    cons: Vec<ConsData>,
    /// Per (direction, constraint): the set of (x, λ) [or x for ends] such
    /// that the edge meets the constraint.
    leaf_cache: Mutex<HashMap<(Vec<i64>, usize), Option<System>>>,
    inner_cache: Mutex<HashMap<(Vec<i64>, usize), Option<System>>>,
}

impl Ctx {
    fn encode(&self, ms: &[usize]) -> usize {
        let mut idx = 0;
        for (j, &c) in ms.iter().enumerate() {
            idx = idx * (self.counts[j] + 1) + c;
        }
        idx
    }

    fn decode(&self, mut idx: usize) -> Vec<usize> {
        let mut ms = vec![0; self.counts.len()];
        for j in (0..self.counts.len()).rev() {
            ms[j] = idx % (self.counts[j] + 1);
            idx /= self.counts[j] + 1;
        }
        ms
    }

    fn weighted_sum(&self, ms: &[usize]) -> Vec<i64> {
        let mut s = vec![0i64; self.n];
        for (j, &c) in ms.iter().enumerate() {
            for (a, b) in s.iter_mut().zip(&self.distinct[j]) {
                *a += b * c as i64;
            }
        }
        s
    }

    fn codim(&self, mask: u32) -> usize {
        (0..self.cons.len()).filter(|&i| mask & (1 << i) != 0).map(|i| self.cons[i].codim).sum()
    }

    fn is_parallel(&self, u: &[i64], j: usize) -> bool {
        self.cons[j].ann.iter().all(|m| {
            m.iter().zip(u).fold(Rational::zero(), |acc, (a, b)| acc + a * q(*b)).is_zero()
        })
    }

    /// `{x : ∃ t ≥ 0, x + t u ∈ A_j}`.
    fn leaf_condition(&self, u: &[i64], j: usize) -> Option<System> {
        let key = (u.to_vec(), j);
        if let Some(s) = self.leaf_cache.lock().unwrap().get(&key) {
            return s.clone();
        }
        let n = self.n;
        let mut sys = System::new(n + 1);
        let mut t = vec![Rational::zero(); n + 1];
        t[n] = Rational::one();
        sys.push(LinCon::ge(t, Rational::zero()));
        for (m, b) in self.cons[j].ann.iter().zip(&self.cons[j].rhs) {
            let mut a: Vec<Rational> = m.clone();
            a.push(m.iter().zip(u).fold(Rational::zero(), |acc, (x, y)| acc + x * q(*y)));
            sys.push(LinCon::eq(a, b.clone()));
        }
        let out = sys.project_prefix(n).and_then(|s| s.without_redundant());
        self.leaf_cache.lock().unwrap().insert(key, out.clone());
        out
    }

    /// `{(x, λ) : ∃ t ∈ [0, λ], x + t u ∈ A_j}`.
    fn inner_condition(&self, u: &[i64], j: usize) -> Option<System> {
        let key = (u.to_vec(), j);
        if let Some(s) = self.inner_cache.lock().unwrap().get(&key) {
            return s.clone();
        }
        let n = self.n;
        // variables x (n), λ, t
        let mut sys = System::new(n + 2);
        let mut a = vec![Rational::zero(); n + 2];
        a[n + 1] = Rational::one();
        sys.push(LinCon::ge(a.clone(), Rational::zero()));
        a[n] = Rational::one();
        a[n + 1] = -Rational::one();
        sys.push(LinCon::ge(a, Rational::zero()));
        for (m, b) in self.cons[j].ann.iter().zip(&self.cons[j].rhs) {
            let mut a: Vec<Rational> = m.clone();
            a.push(Rational::zero());
            a.push(m.iter().zip(u).fold(Rational::zero(), |acc, (x, y)| acc + x * q(*y)));
            sys.push(LinCon::eq(a, b.clone()));
        }
        let out = sys.project_prefix(n + 1);
        self.inner_cache.lock().unwrap().insert(key, out.clone());
        out
    }
}

/// Search output: marked types that admit a matching curve according to the
/// polyhedral families.
pub struct SearchOutcome {
    pub candidates: Vec<TropicalType>,
    pub branches: usize,
}

pub fn candidate_types(d: &Degree, a: &[AffineConstraint]) -> SearchOutcome {
    let vectors = d.leaf_vectors();
    let mut distinct: Vec<Vec<i64>> = Vec::new();
    let mut counts: Vec<usize> = Vec::new();
    for v in &vectors {
        if distinct.last() == Some(v) {
            *counts.last_mut().unwrap() += 1;
        } else {
            distinct.push(v.clone());
            counts.push(1);
        }
    }
    let cons: Vec<ConsData> = a
        .iter()
        .map(|c| {
            let ann: Vec<Vec<Rational>> = c
                .annihilator()
                .iter()
                .map(|m| m.iter().map(|x| Rational::from_integer(x.clone())).collect())
                .collect();
            let rhs = ann
                .iter()
                .map(|m| m.iter().zip(&c.base).fold(Rational::zero(), |acc, (x, y)| acc + x * y))
                .collect();
            ConsData {
                ann,
                rhs,
                codim: c.codim(),
            }
        })
        .collect();
    let ctx = Ctx {
        n: d.n,
        distinct,
        counts,
        cons,
        leaf_cache: Mutex::new(HashMap::new()),
        inner_cache: Mutex::new(HashMap::new()),
    };
    run(&ctx)
}

fn run(ctx: &Ctx) -> SearchOutcome {
    let n = ctx.n;
    let l = ctx.cons.len();
    let e: usize = ctx.counts.iter().sum();
    let half = e / 2;
    let limit = ctx.counts.clone();
    let total_ms = ctx.encode(&limit) + 1;
    let size_of = |ms: &[usize]| ms.iter().sum::<usize>();

    // branches indexed by multiset code
    let mut by_ms: Vec<Vec<Arc<Branch>>> = (0..total_ms).map(|_| Vec::new()).collect();
    let mut next_id = 0usize;

    // ends
    for j in 0..ctx.distinct.len() {
        let mut ms = vec![0; ctx.counts.len()];
        ms[j] = 1;
        let (u, _) = primitive_i64(&ctx.distinct[j]);
        let avail: Vec<usize> = (0..l).filter(|&i| !ctx.is_parallel(&u, i)).collect();
        let mut found: Vec<(u32, System)> = Vec::new();
        leaf_subsets(ctx, &u, &avail, 0, 0, 0, &System::new(n), &mut found);
        let code = ctx.encode(&ms);
        for (mask, family) in found {
            by_ms[code].push(Arc::new(Branch {
                id: next_id,
                mask,
                edge_mask: mask,
                kind: BranchKind::Leaf(j),
                family,
            }));
            next_id += 1;
        }
    }

    let mut codes_by_size: Vec<Vec<usize>> = vec![Vec::new(); e + 1];
    for code in 0..total_ms {
        codes_by_size[size_of(&ctx.decode(code))].push(code);
    }
    let trace = std::env::var_os("TROPICOUNT_TRACE").is_some();
    let clock = std::time::Instant::now();
    for s in 2..=half {
        // a multiset summing to zero would need a stem of weight zero
        let produced: Vec<(usize, Vec<VertexPiece>)> = codes_by_size[s]
            .par_iter()
            .filter(|&&code| ctx.weighted_sum(&ctx.decode(code)).iter().any(|&x| x != 0))
            .map(|&code| (code, vertex_pieces(ctx, code, s, &by_ms)))
            .collect();
        let new_branches: Vec<(usize, Vec<(u32, u32, System, Arc<VertexPiece>)>)> = produced
            .into_par_iter()
            .map(|(code, pieces)| {
                let ms = ctx.decode(code);
                let (u, _) = primitive_i64(&ctx.weighted_sum(&ms));
                let mut out = Vec::new();
                for piece in pieces {
                    let piece = Arc::new(piece);
                    let inner_mask = mask_of(&piece);
                    let avail: Vec<usize> = (0..l)
                        .filter(|&i| inner_mask & (1 << i) == 0 && !ctx.is_parallel(&u, i))
                        .collect();
                    let base = lifted_base(ctx, &u, &piece.family);
                    let b = s - 1;
                    let c0 = ctx.codim(inner_mask);
                    let mut found = Vec::new();
                    inner_subsets(ctx, &u, &avail, 0, 0, c0, n + b, &base, &mut found);
                    for (edge_mask, lifted) in found {
                        let c = ctx.codim(inner_mask | edge_mask);
                        if b > c || c > n + b {
                            continue;
                        }
                        let Some(family) = lifted.project_prefix(n).and_then(|f| f.without_redundant()) else {
                            continue;
                        };
                        out.push((inner_mask | edge_mask, edge_mask, family, piece.clone()));
                    }
                }
                (code, out)
            })
            .collect();
        for (code, list) in new_branches {
            for (mask, edge_mask, family, piece) in list {
                by_ms[code].push(Arc::new(Branch {
                    id: next_id,
                    mask,
                    edge_mask,
                    kind: BranchKind::Inner(piece),
                    family,
                }));
                next_id += 1;
            }
        }
        if trace {
            eprintln!("size {s}: {next_id} branches, {:?}", clock.elapsed());
        }
    }

    // Every curve has a vertex whose three branches each carry at most half
    // of the ends; join three branches there, using every constraint once.
    let full: u32 = if l == 0 { 0 } else { ((1u64 << l) - 1) as u32 };
    let mut groups: HashMap<(usize, u32), Vec<(Arc<Branch>, Compiled)>> = HashMap::new();
    for (code, list) in by_ms.iter().enumerate() {
        for b in list {
            groups.entry((code, b.mask)).or_default().push((b.clone(), Compiled::new(&b.family)));
        }
    }
    let mut keys: Vec<(usize, u32)> = groups.keys().copied().collect();
    keys.sort_unstable();
    let key_ms: Vec<Vec<usize>> = keys.iter().map(|k| ctx.decode(k.0)).collect();
    let found: Vec<Vec<TropicalType>> = (0..keys.len())
        .into_par_iter()
        .map(|i| {
            let (_, m1) = keys[i];
            let ms1 = &key_ms[i];
            let mut out = Vec::new();
            for j in i..keys.len() {
                let (_, m2) = keys[j];
                if m1 & m2 != 0 {
                    continue;
                }
                let ms2 = &key_ms[j];
                let ms3: Option<Vec<usize>> = (0..limit.len())
                    .map(|t| limit[t].checked_sub(ms1[t] + ms2[t]))
                    .collect();
                let Some(ms3) = ms3 else { continue };
                let s3 = size_of(&ms3);
                if s3 == 0 || s3 > half {
                    continue;
                }
                let k3 = (ctx.encode(&ms3), full & !(m1 | m2));
                if k3 < keys[j] {
                    continue;
                }
                let Some(g3) = groups.get(&k3) else { continue };
                let (g1, g2) = (&groups[&keys[i]], &groups[&keys[j]]);
                for (b1, c1) in g1 {
                    for (b2, c2) in g2 {
                        if i == j && b2.id <= b1.id {
                            continue;
                        }
                        let f12 = c1.intersect(c2);
                        if !f12.is_feasible() {
                            continue;
                        }
                        for (b3, c3) in g3 {
                            if k3 == keys[j] && b3.id <= b2.id {
                                continue;
                            }
                            if f12.intersect(c3).is_feasible() {
                                out.push(reconstruct(ctx, [b1, b2, b3]));
                            }
                        }
                    }
                }
            }
            out
        })
        .collect();
    if trace {
        eprintln!("joined: {:?}", clock.elapsed());
    }
    let mut candidates = Vec::new();
    let mut seen = BTreeSet::new();
    for ty in found.into_iter().flatten() {
        if seen.insert(ty.canonical_code()) {
            candidates.push(ty);
        }
    }
    SearchOutcome {
        candidates,
        branches: next_id,
    }
}

fn mask_of(p: &VertexPiece) -> u32 {
    p.left.mask | p.right.mask
}

fn leaf_subsets(ctx: &Ctx, u: &[i64], avail: &[usize], start: usize, mask: u32, codim: usize, sys: &System, out: &mut Vec<(u32, System)>) {
    if codim <= ctx.n {
        out.push((mask, sys.clone()));
    }
    for k in start..avail.len() {
        let j = avail[k];
        let c = codim + ctx.cons[j].codim;
        if c > ctx.n {
            continue;
        }
        let Some(cond) = ctx.leaf_condition(u, j) else {
            continue;
        };
        let Some(next) = sys.intersect(&cond).without_redundant() else {
            continue;
        };
        leaf_subsets(ctx, u, avail, k + 1, mask | (1 << j), c, &next, out);
    }
}

/// `{(x, λ) : λ > 0, x + λ u ∈ F}`.
fn lifted_base(ctx: &Ctx, u: &[i64], family: &System) -> System {
    let n = ctx.n;
    let mut sys = System::new(n + 1);
    let mut a = vec![Rational::zero(); n + 1];
    a[n] = Rational::one();
    sys.push(LinCon::new(a, Rel::Gt, Rational::zero()));
    for c in &family.cons {
        let mut a = c.a.clone();
        a.push(c.a.iter().zip(u).fold(Rational::zero(), |acc, (x, y)| acc + x * q(*y)));
        sys.push(LinCon::new(a, c.rel, c.b.clone()));
    }
    sys
}

#[allow(clippy::too_many_arguments)]
fn inner_subsets(
    ctx: &Ctx,
    u: &[i64],
    avail: &[usize],
    start: usize,
    mask: u32,
    codim: usize,
    max_codim: usize,
    sys: &System,
    out: &mut Vec<(u32, System)>,
) {
    out.push((mask, sys.clone()));
    for k in start..avail.len() {
        let j = avail[k];
        let c = codim + ctx.cons[j].codim;
        if c > max_codim {
            continue;
        }
        let Some(cond) = ctx.inner_condition(u, j) else {
            continue;
        };
        let next = sys.intersect(&cond);
        let Some(next) = next.tidy() else {
            continue;
        };
        if !next.is_feasible_fast() {
            continue;
        }
        inner_subsets(ctx, u, avail, k + 1, mask | (1 << j), c, max_codim, &next, out);
    }
}

/// All rigid vertex pieces for multiset `code` of size `s`.
fn vertex_pieces(ctx: &Ctx, code: usize, s: usize, by_ms: &[Vec<Arc<Branch>>]) -> Vec<VertexPiece> {
    let ms = ctx.decode(code);
    let n = ctx.n;
    let b = s - 2;
    let mut out = Vec::new();
    // split ms = ms1 + ms2 with code1 ≤ code2
    let mut ms1 = vec![0usize; ms.len()];
    loop {
        let size1: usize = ms1.iter().sum();
        if size1 >= 1 && size1 < s {
            let ms2: Vec<usize> = ms.iter().zip(&ms1).map(|(a, b)| a - b).collect();
            let c1 = ctx.encode(&ms1);
            let c2 = ctx.encode(&ms2);
            if c1 <= c2 {
                for b1 in &by_ms[c1] {
                    for b2 in &by_ms[c2] {
                        if b1.mask & b2.mask != 0 || (c1 == c2 && b1.id > b2.id) {
                            continue;
                        }
                        if b1.id == b2.id && b1.mask != 0 {
                            continue;
                        }
                        let c = ctx.codim(b1.mask | b2.mask);
                        if b > c || c > n + b {
                            continue;
                        }
                        let Some(family) = b1.family.intersect(&b2.family).without_redundant() else {
                            continue;
                        };
                        out.push(VertexPiece {
                            left: b1.clone(),
                            right: b2.clone(),
                            family,
                        });
                    }
                }
            }
        }
        // next ms1 ≤ ms
        let mut k = 0;
        loop {
            if k == ms.len() {
                return out;
            }
            if ms1[k] < ms[k] {
                ms1[k] += 1;
                break;
            }
            ms1[k] = 0;
            k += 1;
        }
    }
}

/// Builds the marked type of three branches meeting at one vertex.
fn reconstruct(ctx: &Ctx, parts: [&Arc<Branch>; 3]) -> TropicalType {
    let mut tree = LeafTree {
        vertices: 1,
        edges: Vec::new(),
        leaf_edge: Vec::new(),
    };
    let mut leaf_vectors: Vec<Vec<i64>> = Vec::new();
    let mut edge_marks: Vec<u32> = Vec::new();
    fn attach(
        ctx: &Ctx,
        b: &Branch,
        parent: usize,
        tree: &mut LeafTree,
        leaf_vectors: &mut Vec<Vec<i64>>,
        edge_marks: &mut Vec<u32>,
    ) {
        match &b.kind {
            BranchKind::Leaf(j) => {
                tree.edges.push((parent, None));
                tree.leaf_edge.push(tree.edges.len() - 1);
                leaf_vectors.push(ctx.distinct[*j].clone());
                edge_marks.push(b.edge_mask);
            }
            BranchKind::Inner(piece) => {
                let v = tree.vertices;
                tree.vertices += 1;
                tree.edges.push((parent, Some(v)));
                edge_marks.push(b.edge_mask);
                attach(ctx, &piece.left, v, tree, leaf_vectors, edge_marks);
                attach(ctx, &piece.right, v, tree, leaf_vectors, edge_marks);
            }
        }
    }
    for b in parts {
        attach(ctx, b, 0, &mut tree, &mut leaf_vectors, &mut edge_marks);
    }
    let ty = derive_type(&tree, &leaf_vectors).expect("search only builds uncontracted edges");
    let l = ctx.cons.len();
    let mut markings = vec![usize::MAX; l];
    for (e, &m) in edge_marks.iter().enumerate() {
        for (i, slot) in markings.iter_mut().enumerate() {
            if m & (1 << i) != 0 {
                *slot = e;
            }
        }
    }
    debug_assert!(markings.iter().all(|&e| e != usize::MAX));
    ty.with_markings(markings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::enumerate_marked_types;
    use crate::constraints::{match_type, random_points, MatchResult};

    /// Brute-force list of matched marked types for comparison.
    fn brute(d: &Degree, a: &[AffineConstraint]) -> BTreeSet<String> {
        let codims: Vec<usize> = a.iter().map(|c| c.codim()).collect();
        enumerate_marked_types(d, &codims)
            .unwrap()
            .into_iter()
            .filter(|t| matches!(match_type(t, a), MatchResult::Matched(_)))
            .map(|t| t.canonical_code())
            .collect()
    }

    fn searched(d: &Degree, a: &[AffineConstraint]) -> BTreeSet<String> {
        candidate_types(d, a)
            .candidates
            .into_iter()
            .filter(|t| matches!(match_type(t, a), MatchResult::Matched(_)))
            .map(|t| t.canonical_code())
            .collect()
    }

    #[test]
    fn search_matches_brute_force_on_lines_and_conics() {
        for seed in 0..4 {
            let a = random_points(2, 2, seed, 50, 7);
            assert_eq!(searched(&Degree::plane(1), &a), brute(&Degree::plane(1), &a));
        }
        let a = random_points(2, 5, 100, 50, 7);
        let s = searched(&Degree::plane(2), &a);
        assert_eq!(s, brute(&Degree::plane(2), &a));
        assert_eq!(s.len(), 1);
    }
}

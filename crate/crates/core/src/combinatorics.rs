//! Degrees, trivalent trees and tropical types.

use num_integer::Integer;
use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CombinatoricsError {
    #[error("invalid degree: {0}")]
    InvalidDegree(String),
    #[error("need at least 3 leaves, got {0}")]
    TooFewLeaves(usize),
    #[error("codimension sum {got} differs from e+n-3 = {want}")]
    CodimensionMismatch { got: usize, want: usize },
}

/// Multiset of weighted directions of the unbounded ends.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Degree {
    pub n: usize,
    pub entries: BTreeMap<Vec<i64>, usize>,
}

impl Degree {
    pub fn new(n: usize, rays: &[(Vec<i64>, usize)]) -> Self {
        let mut entries = BTreeMap::new();
        for (v, c) in rays {
            if *c > 0 {
                *entries.entry(v.clone()).or_insert(0) += c;
            }
        }
        Degree { n, entries }
    }

    /// Every ray once per unit of count, in sorted order.
    pub fn leaf_vectors(&self) -> Vec<Vec<i64>> {
        self.entries
            .iter()
            .flat_map(|(v, &c)| std::iter::repeat_n(v.clone(), c))
            .collect()
    }

    pub fn num_ends(&self) -> usize {
        self.entries.values().sum()
    }

    pub fn total_vector(&self) -> Vec<i64> {
        let mut s = vec![0; self.n];
        for (v, &c) in &self.entries {
            for (a, b) in s.iter_mut().zip(v) {
                *a += b * c as i64;
            }
        }
        s
    }

    /// The plane degree-`d` curves: `d` ends each of (−1,0), (0,−1), (1,1).
    pub fn plane(d: usize) -> Self {
        Degree::new(2, &[(vec![-1, 0], d), (vec![0, -1], d), (vec![1, 1], d)])
    }
}

pub fn validate_degree(d: &Degree) -> Result<(), CombinatoricsError> {
    if d.entries.is_empty() {
        return Err(CombinatoricsError::InvalidDegree("empty support".into()));
    }
    for v in d.entries.keys() {
        if v.len() != d.n {
            return Err(CombinatoricsError::InvalidDegree(format!(
                "vector {v:?} has length {} in rank {}",
                v.len(),
                d.n
            )));
        }
        if v.iter().all(|&x| x == 0) {
            return Err(CombinatoricsError::InvalidDegree("zero vector in support".into()));
        }
    }
    let s = d.total_vector();
    if s.iter().any(|&x| x != 0) {
        return Err(CombinatoricsError::InvalidDegree(format!("sum={s:?}")));
    }
    Ok(())
}

pub fn primitive_i64(v: &[i64]) -> (Vec<i64>, u64) {
    let g = v.iter().fold(0i64, |acc, &x| acc.gcd(&x));
    assert!(g != 0, "primitive part of zero vector");
    (v.iter().map(|x| x / g).collect(), g as u64)
}

/// A tree with labeled leaves. Leaf `i` is the unbounded edge `leaf_edge[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafTree {
    pub vertices: usize,
    /// (tail, head); head is `None` for leaves.
    pub edges: Vec<(usize, Option<usize>)>,
    pub leaf_edge: Vec<usize>,
}

impl LeafTree {
    pub fn tripod() -> Self {
        LeafTree {
            vertices: 1,
            edges: vec![(0, None), (0, None), (0, None)],
            leaf_edge: vec![0, 1, 2],
        }
    }

    pub fn num_leaves(&self) -> usize {
        self.leaf_edge.len()
    }

    /// Subdivides edge `e` by a new vertex carrying a new last leaf.
    pub fn insert_leaf(&self, e: usize) -> LeafTree {
        let mut t = self.clone();
        let w = t.vertices;
        t.vertices += 1;
        let (a, b) = t.edges[e];
        match b {
            None => {
                // a — w — (old leaf)
                t.edges[e] = (w, None);
                t.edges.push((a, Some(w)));
            }
            Some(b) => {
                t.edges[e] = (a, Some(w));
                t.edges.push((w, Some(b)));
            }
        }
        t.edges.push((w, None));
        t.leaf_edge.push(t.edges.len() - 1);
        t
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices];
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            adj[a].push(i);
            if let Some(b) = b {
                adj[b].push(i);
            }
        }
        adj
    }

    /// Code of the tree with leaves labeled by `labels` (leaf index order);
    /// equal labels may be permuted by isomorphisms.
    pub fn labeled_code(&self, labels: &[String]) -> String {
        let mut leaf_label = vec![None; self.edges.len()];
        for (i, &e) in self.leaf_edge.iter().enumerate() {
            leaf_label[e] = Some(labels[i].clone());
        }
        let g = NodeGraph::build(self.vertices, &self.edges, |e, _from_tail| {
            leaf_label[e].clone().unwrap_or_default()
        });
        g.canonical()
    }
}

/// Node graph used for canonical codes: internal vertices plus one node per
/// unbounded edge.
struct NodeGraph {
    /// adjacency: (neighbour, edge index, traversed from tail?)
    adj: Vec<Vec<(usize, usize, bool)>>,
    labels: Vec<[String; 2]>,
}

impl NodeGraph {
    fn build(
        vertices: usize,
        edges: &[(usize, Option<usize>)],
        label: impl Fn(usize, bool) -> String,
    ) -> Self {
        let leaves = edges.iter().filter(|e| e.1.is_none()).count();
        let mut adj = vec![Vec::new(); vertices + leaves];
        let mut labels = Vec::with_capacity(edges.len());
        let mut next = vertices;
        for (i, &(a, b)) in edges.iter().enumerate() {
            let b = b.unwrap_or_else(|| {
                next += 1;
                next - 1
            });
            adj[a].push((b, i, true));
            adj[b].push((a, i, false));
            labels.push([label(i, true), label(i, false)]);
        }
        NodeGraph { adj, labels }
    }

    fn rooted(&self, node: usize, parent: Option<usize>) -> String {
        let mut parts: Vec<String> = self.adj[node]
            .iter()
            .filter(|(nb, _, _)| Some(*nb) != parent)
            .map(|&(nb, e, fwd)| {
                let l = &self.labels[e][if fwd { 0 } else { 1 }];
                format!("{l}{}", self.rooted(nb, Some(node)))
            })
            .collect();
        parts.sort();
        format!("({})", parts.concat())
    }

    fn centres(&self) -> Vec<usize> {
        let n = self.adj.len();
        if n <= 2 {
            return (0..n).collect();
        }
        let mut deg: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        let mut layer: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
        let mut remaining = n;
        while remaining > 2 {
            remaining -= layer.len();
            let mut next = Vec::new();
            for &v in &layer {
                for &(nb, _, _) in &self.adj[v] {
                    deg[nb] -= 1;
                    if deg[nb] == 1 {
                        next.push(nb);
                    }
                }
            }
            layer = next;
        }
        layer
    }

    fn canonical(&self) -> String {
        self.centres()
            .into_iter()
            .map(|c| self.rooted(c, None))
            .min()
            .unwrap_or_default()
    }
}

pub fn enumerate_leaf_trees(e: usize) -> Result<Vec<LeafTree>, CombinatoricsError> {
    if e < 3 {
        return Err(CombinatoricsError::TooFewLeaves(e));
    }
    let mut level = vec![LeafTree::tripod()];
    for _ in 3..e {
        level = level
            .iter()
            .flat_map(|t| (0..t.edges.len()).map(move |i| t.insert_leaf(i)))
            .collect();
    }
    Ok(level)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeEdge {
    pub tail: usize,
    pub head: Option<usize>,
    pub weight: u64,
    /// Primitive direction of the flag at `tail`.
    pub dir: Vec<i64>,
}

impl TypeEdge {
    pub fn is_bounded(&self) -> bool {
        self.head.is_some()
    }

    pub fn weighted(&self) -> Vec<i64> {
        self.dir.iter().map(|x| x * self.weight as i64).collect()
    }
}

/// A genus-0 tropical type, optionally with an ordered tuple of markings.
/// Bounded edges are oriented from the smaller to the larger vertex id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropicalType {
    pub n: usize,
    pub vertices: usize,
    pub edges: Vec<TypeEdge>,
    /// Unbounded edge for each leaf label.
    pub leaves: Vec<usize>,
    /// Edge index of each marking, in tuple order.
    pub markings: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rejected {
    ContractedEdge(usize),
}

/// Computes weights and directions on a labeled tree from leaf vectors.
pub fn derive_type(tree: &LeafTree, leaf_vectors: &[Vec<i64>]) -> Result<TropicalType, Rejected> {
    assert_eq!(tree.num_leaves(), leaf_vectors.len(), "one vector per leaf");
    let n = leaf_vectors.first().map_or(0, Vec::len);
    let adj = tree.adjacency();
    let mut vec_of_edge: Vec<Option<&Vec<i64>>> = vec![None; tree.edges.len()];
    for (i, &e) in tree.leaf_edge.iter().enumerate() {
        vec_of_edge[e] = Some(&leaf_vectors[i]);
    }
    // sum of leaf vectors reachable from `v` without crossing edge `skip`
    fn side_sum(
        v: usize,
        skip: usize,
        tree: &LeafTree,
        adj: &[Vec<usize>],
        vec_of_edge: &[Option<&Vec<i64>>],
        acc: &mut [i64],
    ) {
        for &e in &adj[v] {
            if e == skip {
                continue;
            }
            match tree.edges[e] {
                (_, None) => {
                    for (a, b) in acc.iter_mut().zip(vec_of_edge[e].unwrap()) {
                        *a += b;
                    }
                }
                (a, Some(b)) => {
                    let other = if a == v { b } else { a };
                    side_sum(other, e, tree, adj, vec_of_edge, acc);
                }
            }
        }
    }
    let mut edges = Vec::with_capacity(tree.edges.len());
    for (i, &(a, b)) in tree.edges.iter().enumerate() {
        match b {
            None => {
                let (dir, weight) = primitive_i64(vec_of_edge[i].unwrap());
                edges.push(TypeEdge {
                    tail: a,
                    head: None,
                    weight,
                    dir,
                });
            }
            Some(b) => {
                let (tail, head) = (a.min(b), a.max(b));
                let mut m = vec![0i64; n];
                side_sum(head, i, tree, &adj, &vec_of_edge, &mut m);
                if m.iter().all(|&x| x == 0) {
                    return Err(Rejected::ContractedEdge(i));
                }
                let (dir, weight) = primitive_i64(&m);
                edges.push(TypeEdge {
                    tail,
                    head: Some(head),
                    weight,
                    dir,
                });
            }
        }
    }
    let t = TropicalType {
        n,
        vertices: tree.vertices,
        edges,
        leaves: tree.leaf_edge.clone(),
        markings: Vec::new(),
    };
    assert!(t.is_balanced(), "derived type must balance");
    Ok(t)
}

impl TropicalType {
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices];
        for (i, e) in self.edges.iter().enumerate() {
            adj[e.tail].push(i);
            if let Some(h) = e.head {
                adj[h].push(i);
            }
        }
        adj
    }

    /// Primitive direction of the flag (v, e).
    pub fn flag_direction(&self, v: usize, e: usize) -> Vec<i64> {
        let edge = &self.edges[e];
        if edge.tail == v {
            edge.dir.clone()
        } else {
            assert_eq!(edge.head, Some(v), "vertex not on edge");
            edge.dir.iter().map(|x| -x).collect()
        }
    }

    pub fn is_balanced(&self) -> bool {
        let adj = self.adjacency();
        adj.iter().enumerate().all(|(v, es)| {
            let mut s = vec![0i64; self.n];
            for &e in es {
                let u = self.flag_direction(v, e);
                for (a, b) in s.iter_mut().zip(u) {
                    *a += b * self.edges[e].weight as i64;
                }
            }
            s.iter().all(|&x| x == 0)
        })
    }

    pub fn bounded_edges(&self) -> Vec<usize> {
        (0..self.edges.len()).filter(|&i| self.edges[i].is_bounded()).collect()
    }

    pub fn num_ends(&self) -> usize {
        self.leaves.len()
    }

    pub fn overvalence(&self) -> usize {
        self.adjacency().iter().map(|a| a.len().saturating_sub(3)).sum()
    }

    pub fn degree(&self) -> Degree {
        let rays: Vec<(Vec<i64>, usize)> = self
            .leaves
            .iter()
            .map(|&e| (self.edges[e].weighted(), 1))
            .collect();
        Degree::new(self.n, &rays)
    }

    /// Product of bounded edge weights.
    pub fn inner_weight(&self) -> u64 {
        self.edges.iter().filter(|e| e.is_bounded()).map(|e| e.weight).product()
    }

    pub fn with_markings(&self, markings: Vec<usize>) -> TropicalType {
        TropicalType {
            markings,
            ..self.clone()
        }
    }

    /// Canonical code; markings are part of the code.
    pub fn canonical_code(&self) -> String {
        let mut marks: Vec<Vec<usize>> = vec![Vec::new(); self.edges.len()];
        for (i, &e) in self.markings.iter().enumerate() {
            marks[e].push(i + 1);
        }
        let raw: Vec<(usize, Option<usize>)> = self.edges.iter().map(|e| (e.tail, e.head)).collect();
        let g = NodeGraph::build(self.vertices, &raw, |e, from_tail| {
            let edge = &self.edges[e];
            let sign = if from_tail { 1 } else { -1 };
            let mut s = String::from("<");
            for (k, x) in edge.dir.iter().enumerate() {
                if k > 0 {
                    s.push(',');
                }
                let _ = write!(s, "{}", x * sign * edge.weight as i64);
            }
            if !marks[e].is_empty() {
                s.push('|');
                let m: Vec<String> = marks[e].iter().map(|x| x.to_string()).collect();
                s.push_str(&m.join(","));
            }
            s.push('>');
            s
        });
        let mut code = g.canonical();
        if !self.markings.is_empty() {
            code.insert_str(0, &format!("m{}", self.markings.len()));
        }
        code
    }

    /// Edge distances: number of other edges on a shortest connecting path.
    /// An edge has distance −1 to itself.
    pub fn edge_distances(&self) -> Vec<Vec<i64>> {
        let m = self.edges.len();
        let adj = self.adjacency();
        let mut out = vec![vec![0i64; m]; m];
        for s in 0..m {
            let mut dist = vec![i64::MAX; m];
            dist[s] = -1;
            let mut q = VecDeque::from([s]);
            while let Some(e) = q.pop_front() {
                let ends = [Some(self.edges[e].tail), self.edges[e].head];
                for v in ends.into_iter().flatten() {
                    for &f in &adj[v] {
                        if dist[f] == i64::MAX {
                            dist[f] = if dist[e] < 0 { 0 } else { dist[e] + 1 };
                            q.push_back(f);
                        }
                    }
                }
            }
            out[s] = dist;
        }
        out
    }

    /// Total marked weight: bounded edge weights times marked edge weights.
    pub fn marked_weight(&self) -> u64 {
        self.inner_weight() * self.markings.iter().map(|&e| self.edges[e].weight).product::<u64>()
    }
}

/// All genus-0 trivalent types of degree `d`, one per isomorphism class.
pub fn enumerate_types(d: &Degree) -> Result<Vec<TropicalType>, CombinatoricsError> {
    validate_degree(d)?;
    let vectors = d.leaf_vectors();
    let e = vectors.len();
    if e < 3 {
        return Err(CombinatoricsError::TooFewLeaves(e));
    }
    let names: Vec<String> = vectors.iter().map(|v| format!("{v:?}")).collect();
    let mut level = vec![LeafTree::tripod()];
    for k in 3..e {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for t in &level {
            for i in 0..t.edges.len() {
                let c = t.insert_leaf(i);
                if seen.insert(c.labeled_code(&names[..=k])) {
                    next.push(c);
                }
            }
        }
        level = next;
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for t in &level {
        if let Ok(ty) = derive_type(t, &vectors) {
            if seen.insert(ty.canonical_code()) {
                out.push(ty);
            }
        }
    }
    out.sort_by_cached_key(|t| t.canonical_code());
    Ok(out)
}

/// Marked types: every ordered placement of `codims.len()` markings on
/// edges, pruned by the distance bound and deduplicated.
pub fn enumerate_marked_types(
    d: &Degree,
    codims: &[usize],
) -> Result<Vec<TropicalType>, CombinatoricsError> {
    let types = enumerate_types(d)?;
    let want = d.num_ends() + d.n - 3;
    let got: usize = codims.iter().sum();
    if got != want {
        return Err(CombinatoricsError::CodimensionMismatch { got, want });
    }
    let n = d.n as i64;
    let l = codims.len();
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for t in &types {
        let dist = t.edge_distances();
        let m = t.edges.len();
        let mut assign = vec![0usize; l];
        fn rec(
            i: usize,
            assign: &mut Vec<usize>,
            m: usize,
            codims: &[usize],
            n: i64,
            dist: &[Vec<i64>],
            t: &TropicalType,
            out: &mut Vec<TropicalType>,
            seen: &mut BTreeSet<String>,
        ) {
            if i == assign.len() {
                let mt = t.with_markings(assign.clone());
                if seen.insert(mt.canonical_code()) {
                    out.push(mt);
                }
                return;
            }
            for e in 0..m {
                let ok = (0..i).all(|j| {
                    dist[assign[j]][e] >= codims[i] as i64 + codims[j] as i64 - n
                });
                if ok {
                    assign[i] = e;
                    rec(i + 1, assign, m, codims, n, dist, t, out, seen);
                }
            }
        }
        rec(0, &mut assign, m, codims, n, &dist, t, &mut out, &mut seen);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn double_factorial(k: usize) -> usize {
        (1..=k).rev().step_by(2).product()
    }

    #[test]
    fn degree_validation() {
        assert!(validate_degree(&Degree::plane(1)).is_ok());
        let bad = Degree::new(2, &[(vec![1, 0], 1), (vec![0, 1], 1)]);
        assert_eq!(
            validate_degree(&bad),
            Err(CombinatoricsError::InvalidDegree("sum=[1, 1]".into()))
        );
        let quadric = Degree::new(
            3,
            &[
                (vec![-1, 0, 0], 2),
                (vec![0, -1, 0], 2),
                (vec![0, 0, -1], 2),
                (vec![1, 1, 1], 2),
            ],
        );
        assert!(validate_degree(&quadric).is_ok());
    }

    #[test]
    fn leaf_tree_counts() {
        for e in 3..=8 {
            assert_eq!(enumerate_leaf_trees(e).unwrap().len(), double_factorial(2 * e - 5));
        }
        assert_eq!(enumerate_leaf_trees(2), Err(CombinatoricsError::TooFewLeaves(2)));
    }

    #[test]
    fn leaf_trees_are_distinct() {
        let trees = enumerate_leaf_trees(6).unwrap();
        let names: Vec<String> = (0..6).map(|i| i.to_string()).collect();
        let codes: HashSet<String> = trees.iter().map(|t| t.labeled_code(&names)).collect();
        assert_eq!(codes.len(), trees.len());
    }

    #[test]
    fn derive_examples() {
        let t = derive_type(&LeafTree::tripod(), &[vec![-1, 0], vec![0, -1], vec![1, 1]]).unwrap();
        assert_eq!(t.bounded_edges().len(), 0);
        // four leaves: leaves 0,1 on one side, 2,3 on the other
        let four = LeafTree::tripod().insert_leaf(2);
        let vs = [vec![-1, 0], vec![0, -1], vec![1, 0], vec![0, 1]];
        let t = derive_type(&four, &vs).unwrap();
        let b = t.bounded_edges();
        assert_eq!(b.len(), 1);
        let e = &t.edges[b[0]];
        assert_eq!(e.weight, 1);
        // flag at the vertex holding leaves 0,1 points along (1,1)
        let v0 = t.edges[t.leaves[0]].tail;
        assert_eq!(t.flag_direction(v0, b[0]), vec![1, 1]);
        let cancel = [vec![-1, 0], vec![1, 0], vec![-1, 0], vec![1, 0]];
        assert!(matches!(derive_type(&four, &cancel), Err(Rejected::ContractedEdge(_))));
    }

    /// Brute force over all labeled trees and all orderings of the leaf
    /// vectors, deduplicating by an explicit isomorphism search.
    fn brute_force_type_count(d: &Degree) -> usize {
        let vectors = d.leaf_vectors();
        let e = vectors.len();
        let trees = enumerate_leaf_trees(e).unwrap();
        let mut reps: Vec<TropicalType> = Vec::new();
        let perms = permutations(e);
        for t in &trees {
            for p in &perms {
                let vs: Vec<Vec<i64>> = p.iter().map(|&i| vectors[i].clone()).collect();
                if let Ok(ty) = derive_type(t, &vs) {
                    if !reps.iter().any(|r| isomorphic(r, &ty)) {
                        reps.push(ty);
                    }
                }
            }
        }
        reps.len()
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for i in 0..=p.len() {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }

    /// Exhaustive vertex-bijection search respecting flags and markings.
    pub(crate) fn isomorphic(a: &TropicalType, b: &TropicalType) -> bool {
        if a.vertices != b.vertices || a.edges.len() != b.edges.len() || a.markings.len() != b.markings.len() {
            return false;
        }
        let adj_a = a.adjacency();
        let adj_b = b.adjacency();
        let mut map = vec![usize::MAX; a.vertices];
        let mut used = vec![false; b.vertices];
        fn flags(t: &TropicalType, adj: &[Vec<usize>], v: usize) -> Vec<(Vec<i64>, Vec<usize>, bool)> {
            let mut f: Vec<_> = adj[v]
                .iter()
                .map(|&e| {
                    let w: Vec<i64> = t.flag_direction(v, e).iter().map(|x| x * t.edges[e].weight as i64).collect();
                    let marks: Vec<usize> = (0..t.markings.len()).filter(|&i| t.markings[i] == e).collect();
                    (w, marks, t.edges[e].is_bounded())
                })
                .collect();
            f.sort();
            f
        }
        fn go(
            i: usize,
            a: &TropicalType,
            b: &TropicalType,
            adj_a: &[Vec<usize>],
            adj_b: &[Vec<usize>],
            map: &mut Vec<usize>,
            used: &mut Vec<bool>,
        ) -> bool {
            if i == a.vertices {
                // bounded edges must correspond with equal data
                return a.edges.iter().enumerate().filter(|(_, e)| e.is_bounded()).all(|(ei, e)| {
                    let (x, y) = (map[e.tail], map[e.head.unwrap()]);
                    let ma: Vec<usize> = (0..a.markings.len()).filter(|&k| a.markings[k] == ei).collect();
                    b.edges.iter().enumerate().any(|(fi, f)| {
                        let mb: Vec<usize> = (0..b.markings.len()).filter(|&k| b.markings[k] == fi).collect();
                        f.is_bounded()
                            && ((f.tail == x && f.head == Some(y) && f.dir == e.dir)
                                || (f.tail == y && f.head == Some(x) && f.dir.iter().zip(&e.dir).all(|(p, q)| *p == -q)))
                            && f.weight == e.weight
                            && ma == mb
                    })
                });
            }
            for j in 0..b.vertices {
                if used[j] || flags(a, adj_a, i) != flags(b, adj_b, j) {
                    continue;
                }
                map[i] = j;
                used[j] = true;
                if go(i + 1, a, b, adj_a, adj_b, map, used) {
                    return true;
                }
                used[j] = false;
            }
            false
        }
        go(0, a, b, &adj_a, &adj_b, &mut map, &mut used)
    }

    #[test]
    fn plane_type_censuses() {
        assert_eq!(enumerate_types(&Degree::plane(1)).unwrap().len(), 1);
        let two = enumerate_types(&Degree::plane(2)).unwrap();
        assert_eq!(two.len(), brute_force_type_count(&Degree::plane(2)));
        for t in &two {
            assert!(t.is_balanced());
            assert_eq!(t.overvalence(), 0);
            assert_eq!(t.degree(), Degree::plane(2));
            assert_eq!(t.bounded_edges().len(), t.num_ends() - 3);
        }
    }

    #[test]
    fn codes_match_explicit_isomorphism() {
        let d = Degree::new(2, &[(vec![-1, 0], 2), (vec![0, -1], 2), (vec![1, 1], 1), (vec![1, 0], 1), (vec![0, 1], 1)]);
        let vectors = d.leaf_vectors();
        assert!(validate_degree(&d).is_ok());
        let trees = enumerate_leaf_trees(vectors.len()).unwrap();
        let mut sample = Vec::new();
        for t in trees.iter().step_by(7) {
            if let Ok(ty) = derive_type(t, &vectors) {
                sample.push(ty);
            }
        }
        for a in &sample {
            for b in &sample {
                assert_eq!(a.canonical_code() == b.canonical_code(), isomorphic(a, b));
            }
        }
    }

    #[test]
    fn code_properties() {
        let vs = [vec![-1, 0], vec![-1, 0], vec![2, 0]];
        let a = derive_type(&LeafTree::tripod(), &vs).unwrap();
        let swapped = [vs[1].clone(), vs[0].clone(), vs[2].clone()];
        let b = derive_type(&LeafTree::tripod(), &swapped).unwrap();
        assert_eq!(a.canonical_code(), b.canonical_code());
        let c = derive_type(&LeafTree::tripod(), &[vec![-1, 0], vec![0, -1], vec![1, 1]]).unwrap();
        let d = derive_type(&LeafTree::tripod(), &[vec![1, 0], vec![0, 1], vec![-1, -1]]).unwrap();
        assert_ne!(c.canonical_code(), d.canonical_code());
        assert_ne!(c.canonical_code(), c.with_markings(vec![0]).canonical_code());
    }

    #[test]
    fn marked_line_types() {
        let marked = enumerate_marked_types(&Degree::plane(1), &[1, 1]).unwrap();
        // ordered pairs of distinct ends
        assert_eq!(marked.len(), 6);
        let unmarked = enumerate_marked_types(&Degree::plane(1), &[]);
        assert!(matches!(unmarked, Err(CombinatoricsError::CodimensionMismatch { .. })));
        assert!(enumerate_marked_types(&Degree::plane(1), &[1, 1, 1]).is_err());
    }

    #[test]
    fn weights() {
        let four = LeafTree::tripod().insert_leaf(2);
        let t = derive_type(&four, &[vec![-1, 0], vec![-1, 0], vec![1, 1], vec![1, -1]]).unwrap();
        assert_eq!(t.inner_weight(), 2);
        let b = t.bounded_edges()[0];
        assert_eq!(t.with_markings(vec![b]).marked_weight(), 4);
        assert_eq!(t.with_markings(vec![t.leaves[0]]).marked_weight(), 2);
    }
}

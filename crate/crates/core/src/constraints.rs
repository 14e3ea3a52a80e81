//! Constraint graphs and hypergraphs, clique enumeration, and the
//! verification of "every clique (hyperedge) reduces to a multiple of the
//! identity".
//!
//! Vertices are the tensor's leg positions `0..n`. Only subsets of size at
//! most `n/2` are checked; a larger kept side has the same nonzero spectrum
//! as its complement and can never be proportional to the identity.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{GrtError, Result};
use crate::tensor::{proportional_to_identity, reduce_to, DenseTensor};

/// Largest order accepted by `faithful_hypergraph`.
pub const FAITHFUL_ORDER_LIMIT: usize = 12;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintGraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl ConstraintGraph {
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut set = BTreeSet::new();
        for &(a, b) in edges {
            if a == b {
                return Err(GrtError::InvalidGraph(format!("self-loop at {a}")));
            }
            if a >= n || b >= n {
                return Err(GrtError::InvalidGraph(format!(
                    "edge ({a},{b}) outside 0..{n}"
                )));
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(Self { n, edges: set })
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n,
            edges: BTreeSet::new(),
        }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .collect();
        Self { n, edges }
    }

    /// Cycle `0-1-...-(n-1)-0`.
    pub fn cycle(n: usize) -> Self {
        let edges = (0..n).map(|i| (i.min((i + 1) % n), i.max((i + 1) % n))).collect();
        Self { n, edges }
    }

    /// Hub `0` joined to every rim vertex `1..=rim`, rim vertices in a cycle.
    pub fn wheel(rim: usize) -> Self {
        let mut edges = BTreeSet::new();
        for i in 1..=rim {
            edges.insert((0, i));
            let j = i % rim + 1;
            edges.insert((i.min(j), i.max(j)));
        }
        Self { n: rim + 1, edges }
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn neighbors(&self, v: usize) -> BTreeSet<usize> {
        (0..self.n).filter(|&u| u != v && self.has_edge(u, v)).collect()
    }

    pub fn is_clique(&self, set: &[usize]) -> bool {
        set.iter().all(|&v| v < self.n)
            && set
                .iter()
                .enumerate()
                .all(|(i, &a)| set[i + 1..].iter().all(|&b| a != b && self.has_edge(a, b)))
    }

    /// All cliques with `1 <= size <= max_size`, sorted by (size, lexicographic).
    pub fn cliques_up_to(&self, max_size: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut stack = Vec::new();
        self.extend_cliques(0, &mut stack, max_size, &mut out);
        sort_canonical(&mut out);
        out
    }

    fn extend_cliques(&self, start: usize, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == max {
            return;
        }
        for v in start..self.n {
            if cur.iter().all(|&u| self.has_edge(u, v)) {
                cur.push(v);
                out.push(cur.clone());
                self.extend_cliques(v + 1, cur, max, out);
                cur.pop();
            }
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let raw = GraphJson {
            n: self.n,
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
        };
        Ok(serde_json::to_string(&raw)?)
    }
}

/// Pivoting Bron-Kerbosch; output sorted by (size, lexicographic).
pub fn maximal_cliques(g: &ConstraintGraph) -> Vec<Vec<usize>> {
    let adj: Vec<BTreeSet<usize>> = (0..g.n).map(|v| g.neighbors(v)).collect();
    let mut out = Vec::new();
    let p: BTreeSet<usize> = (0..g.n).collect();
    bron_kerbosch(&adj, &mut Vec::new(), p, BTreeSet::new(), &mut out);
    sort_canonical(&mut out);
    out
}

fn bron_kerbosch(
    adj: &[BTreeSet<usize>],
    r: &mut Vec<usize>,
    mut p: BTreeSet<usize>,
    mut x: BTreeSet<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if p.is_empty() {
        if x.is_empty() {
            let mut c = r.clone();
            c.sort_unstable();
            out.push(c);
        }
        return;
    }
    let pivot = *p
        .union(&x)
        .max_by_key(|&&u| adj[u].intersection(&p).count())
        .expect("p is nonempty");
    let candidates: Vec<usize> = p.difference(&adj[pivot]).copied().collect();
    for v in candidates {
        r.push(v);
        let np = p.intersection(&adj[v]).copied().collect();
        let nx = x.intersection(&adj[v]).copied().collect();
        bron_kerbosch(adj, r, np, nx, out);
        r.pop();
        p.remove(&v);
        x.insert(v);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintHypergraph {
    n: usize,
    hyperedges: BTreeSet<Vec<usize>>,
}

impl ConstraintHypergraph {
    pub fn new(n: usize, hyperedges: &[Vec<usize>]) -> Result<Self> {
        let mut set = BTreeSet::new();
        for e in hyperedges {
            let mut e = e.clone();
            e.sort_unstable();
            e.dedup();
            if e.is_empty() {
                return Err(GrtError::InvalidGraph("empty hyperedge".into()));
            }
            if let Some(&bad) = e.iter().find(|&&v| v >= n) {
                return Err(GrtError::InvalidGraph(format!("vertex {bad} outside 0..{n}")));
            }
            set.insert(e);
        }
        Ok(Self { n, hyperedges: set })
    }

    /// Every clique of `g` as a hyperedge.
    pub fn from_cliques(g: &ConstraintGraph) -> Self {
        Self {
            n: g.n,
            hyperedges: g.cliques_up_to(g.n).into_iter().collect(),
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn hyperedges(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.hyperedges.iter()
    }

    pub fn len(&self) -> usize {
        self.hyperedges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperedges.is_empty()
    }

    pub fn contains(&self, e: &[usize]) -> bool {
        self.hyperedges.contains(e)
    }

    pub fn insert(&mut self, e: &[usize]) -> Result<()> {
        let mut all: Vec<Vec<usize>> = self.hyperedges.iter().cloned().collect();
        all.push(e.to_vec());
        *self = Self::new(self.n, &all)?;
        Ok(())
    }

    /// True when `set` lies inside some hyperedge.
    pub fn covers(&self, set: &[usize]) -> bool {
        self.hyperedges.iter().any(|e| is_subset(set, e))
    }

    /// Every nonempty subset of a hyperedge with size at most `max_size`.
    pub fn downward_closure(&self, max_size: usize) -> BTreeSet<Vec<usize>> {
        let mut out = BTreeSet::new();
        for e in &self.hyperedges {
            for s in subsets_up_to(e, max_size) {
                out.insert(s);
            }
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        let raw = HypergraphJson {
            n: self.n,
            hyperedges: self.hyperedges.iter().cloned().collect(),
        };
        Ok(serde_json::to_string(&raw)?)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HypergraphJson {
    pub n: usize,
    pub hyperedges: Vec<Vec<usize>>,
}

/// Either constraint structure, as read from JSON.
#[derive(Clone, Debug)]
pub enum Constraint {
    Graph(ConstraintGraph),
    Hypergraph(ConstraintHypergraph),
}

impl Constraint {
    /// Accepts `{"n", "edges"}` or `{"n", "hyperedges"}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        if value.get("hyperedges").is_some() {
            let raw: HypergraphJson = serde_json::from_value(value)?;
            Ok(Self::Hypergraph(ConstraintHypergraph::new(raw.n, &raw.hyperedges)?))
        } else {
            let raw: GraphJson = serde_json::from_value(value)?;
            let edges: Vec<(usize, usize)> = raw.edges.iter().map(|e| (e[0], e[1])).collect();
            Ok(Self::Graph(ConstraintGraph::new(raw.n, &edges)?))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubsetCheck {
    pub subset: Vec<usize>,
    pub proportional: bool,
    pub constant: f64,
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstraintReport {
    pub checks: Vec<SubsetCheck>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub faithful: Option<bool>,
}

impl ConstraintReport {
    pub fn failures(&self) -> impl Iterator<Item = &SubsetCheck> {
        self.checks.iter().filter(|c| !c.proportional)
    }

    pub fn max_deviation(&self) -> f64 {
        self.checks.iter().map(|c| c.deviation).fold(0.0, f64::max)
    }
}

fn check_subset(t: &DenseTensor, subset: &[usize], tol: f64) -> Result<SubsetCheck> {
    let rho = reduce_to(t, subset)?;
    let id = proportional_to_identity(&rho.entries, tol)?;
    Ok(SubsetCheck {
        subset: subset.to_vec(),
        proportional: id.proportional,
        constant: id.constant,
        deviation: id.deviation,
    })
}

/// Checks `candidates` largest first, skipping any subset of a set that has
/// already passed; the report is sorted canonically.
fn check_sets(t: &DenseTensor, mut candidates: Vec<Vec<usize>>, tol: f64) -> Result<ConstraintReport> {
    candidates.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
    let mut passed: Vec<Vec<usize>> = Vec::new();
    let mut checks = Vec::new();
    for c in candidates {
        if passed.iter().any(|p| is_subset(&c, p)) {
            continue;
        }
        let rec = check_subset(t, &c, tol)?;
        if rec.proportional {
            passed.push(c);
        }
        checks.push(rec);
    }
    checks.sort_by(|a, b| a.subset.len().cmp(&b.subset.len()).then(a.subset.cmp(&b.subset)));
    let pass = checks.iter().all(|c| c.proportional);
    Ok(ConstraintReport {
        checks,
        pass,
        faithful: None,
    })
}

fn check_order(t: &DenseTensor, n: usize) -> Result<()> {
    if t.order() != n {
        return Err(GrtError::OrderMismatch {
            vertices: n,
            order: t.order(),
        });
    }
    Ok(())
}

pub fn check_graph_constrained(t: &DenseTensor, g: &ConstraintGraph, tol: f64) -> Result<ConstraintReport> {
    check_order(t, g.n)?;
    check_sets(t, g.cliques_up_to(g.n / 2), tol)
}

pub fn check_hypergraph_constrained(
    t: &DenseTensor,
    h: &ConstraintHypergraph,
    tol: f64,
) -> Result<ConstraintReport> {
    check_order(t, h.n)?;
    let candidates = h
        .hyperedges
        .iter()
        .filter(|e| e.len() <= h.n / 2)
        .cloned()
        .collect();
    check_sets(t, candidates, tol)
}

/// Hypergraph of every subset (size at most `n/2`) whose reduction is
/// proportional to the identity.
pub fn faithful_hypergraph(t: &DenseTensor, tol: f64) -> Result<ConstraintHypergraph> {
    let n = t.order();
    if n > FAITHFUL_ORDER_LIMIT {
        return Err(GrtError::OrderTooLarge {
            order: n,
            limit: FAITHFUL_ORDER_LIMIT,
        });
    }
    let all: Vec<usize> = (0..n).collect();
    let mut edges = Vec::new();
    for s in subsets_up_to(&all, n / 2) {
        if check_subset(t, &s, tol)?.proportional {
            edges.push(s);
        }
    }
    ConstraintHypergraph::new(n, &edges)
}

/// True when the identity-proportional subsets of `t` (size at most `n/2`)
/// are exactly the subsets covered by `h`.
pub fn is_faithful(t: &DenseTensor, h: &ConstraintHypergraph, tol: f64) -> Result<bool> {
    check_order(t, h.n)?;
    let found = faithful_hypergraph(t, tol)?;
    let expected = h.downward_closure(h.n / 2);
    Ok(found.hyperedges == expected)
}

fn survivors(n: usize, removed: &[usize]) -> Vec<usize> {
    (0..n).filter(|v| !removed.contains(v)).collect()
}

fn check_pairing(c1: &[usize], c2: &[usize], pairing: &[(usize, usize)]) -> Result<()> {
    let mut a: Vec<usize> = pairing.iter().map(|p| p.0).collect();
    let mut b: Vec<usize> = pairing.iter().map(|p| p.1).collect();
    a.sort_unstable();
    b.sort_unstable();
    let mut s1 = c1.to_vec();
    let mut s2 = c2.to_vec();
    s1.sort_unstable();
    s2.sort_unstable();
    if a != s1 || b != s2 || a.windows(2).any(|w| w[0] == w[1]) || b.windows(2).any(|w| w[0] == w[1]) {
        return Err(GrtError::InvalidGraph("pairing is not a bijection between the cliques".into()));
    }
    Ok(())
}

/// Graph of the tensor obtained by contracting `clique1` of the first tensor
/// with `clique2` of the second. Surviving vertices are renumbered with the
/// first graph's survivors first, matching the leg order of `contract`.
pub fn compose_graphs(
    g1: &ConstraintGraph,
    g2: &ConstraintGraph,
    clique1: &[usize],
    clique2: &[usize],
    pairing: &[(usize, usize)],
) -> Result<ConstraintGraph> {
    if !g1.is_clique(clique1) {
        return Err(GrtError::NotAClique(clique1.to_vec()));
    }
    if !g2.is_clique(clique2) {
        return Err(GrtError::NotAClique(clique2.to_vec()));
    }
    check_pairing(clique1, clique2, pairing)?;
    let s1 = survivors(g1.n, clique1);
    let s2 = survivors(g2.n, clique2);
    let off = s1.len();
    let mut edges = Vec::new();
    for (i, &a) in s1.iter().enumerate() {
        for (j, &b) in s1.iter().enumerate().skip(i + 1) {
            if g1.has_edge(a, b) {
                edges.push((i, j));
            }
        }
    }
    for (i, &a) in s2.iter().enumerate() {
        for (j, &b) in s2.iter().enumerate().skip(i + 1) {
            if g2.has_edge(a, b) {
                edges.push((off + i, off + j));
            }
        }
    }
    ConstraintGraph::new(off + s2.len(), &edges)
}

/// Hypergraph analogue of `compose_graphs`. Each hyperedge loses the
/// contracted vertices; in addition, for every hyperedge containing the
/// first contracted set and every hyperedge containing the second, the union
/// of their survivors becomes a new hyperedge.
pub fn compose_hypergraphs(
    h1: &ConstraintHypergraph,
    h2: &ConstraintHypergraph,
    e1: &[usize],
    e2: &[usize],
    pairing: &[(usize, usize)],
) -> Result<ConstraintHypergraph> {
    if !h1.covers(e1) {
        return Err(GrtError::NotAClique(e1.to_vec()));
    }
    if !h2.covers(e2) {
        return Err(GrtError::NotAClique(e2.to_vec()));
    }
    check_pairing(e1, e2, pairing)?;
    let s1 = survivors(h1.n, e1);
    let s2 = survivors(h2.n, e2);
    let off = s1.len();
    let map1: BTreeMap<usize, usize> = s1.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let map2: BTreeMap<usize, usize> = s2.iter().enumerate().map(|(i, &v)| (v, off + i)).collect();
    let shrink1 = |e: &Vec<usize>| -> Vec<usize> { e.iter().filter_map(|v| map1.get(v).copied()).collect() };
    let shrink2 = |e: &Vec<usize>| -> Vec<usize> { e.iter().filter_map(|v| map2.get(v).copied()).collect() };

    let mut edges: Vec<Vec<usize>> = Vec::new();
    edges.extend(h1.hyperedges.iter().map(shrink1));
    edges.extend(h2.hyperedges.iter().map(shrink2));
    let sup1: Vec<Vec<usize>> = h1.hyperedges.iter().filter(|e| is_subset(e1, e)).map(shrink1).collect();
    let sup2: Vec<Vec<usize>> = h2.hyperedges.iter().filter(|e| is_subset(e2, e)).map(shrink2).collect();
    for a in &sup1 {
        for b in &sup2 {
            edges.push(a.iter().chain(b).copied().collect());
        }
    }
    edges.retain(|e| !e.is_empty());
    ConstraintHypergraph::new(off + s2.len(), &edges)
}

pub(crate) fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.contains(x))
}

/// Nonempty subsets of `items` with at most `max` elements, each sorted.
pub fn subsets_up_to(items: &[usize], max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(items: &[usize], start: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == max {
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            let mut s = cur.clone();
            s.sort_unstable();
            out.push(s);
            rec(items, i + 1, max, cur, out);
            cur.pop();
        }
    }
    rec(items, 0, max, &mut cur, &mut out);
    sort_canonical(&mut out);
    out
}

fn sort_canonical(sets: &mut [Vec<usize>]) {
    sets.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::C64;

    fn ghz(n: usize) -> DenseTensor {
        let mut c = vec![C64::new(0.0, 0.0); 1 << n];
        c[0] = C64::new(1.0, 0.0);
        c[(1 << n) - 1] = C64::new(1.0, 0.0);
        DenseTensor::new(vec![2; n], c).unwrap()
    }

    #[test]
    fn pentagon_maximal_cliques_are_edges() {
        let c = maximal_cliques(&ConstraintGraph::cycle(5));
        assert_eq!(c, vec![vec![0, 1], vec![0, 4], vec![1, 2], vec![2, 3], vec![3, 4]]);
    }

    #[test]
    fn hexagon_wheel_maximal_cliques_are_triangles() {
        let c = maximal_cliques(&ConstraintGraph::wheel(6));
        assert_eq!(c.len(), 6);
        for i in 1..=6 {
            let mut t = vec![0, i, i % 6 + 1];
            t.sort_unstable();
            assert!(c.contains(&t));
        }
    }

    #[test]
    fn empty_graph_has_singleton_cliques() {
        let c = maximal_cliques(&ConstraintGraph::empty(4));
        assert_eq!(c, vec![vec![0], vec![1], vec![2], vec![3]]);
    }

    #[test]
    fn ghz4_square_fails_on_an_edge() {
        let r = check_graph_constrained(&ghz(4), &ConstraintGraph::cycle(4), 1e-12).unwrap();
        assert!(!r.pass);
        assert!(r.failures().any(|c| c.subset == vec![0, 1]));
        let r = check_graph_constrained(&ghz(4), &ConstraintGraph::empty(4), 1e-12).unwrap();
        assert!(r.pass);
    }

    #[test]
    fn product_state_fails_one_uniform() {
        let mut t = DenseTensor::qubits(4).into_coeffs();
        t[0] = C64::new(1.0, 0.0);
        let t = DenseTensor::new(vec![2; 4], t).unwrap();
        assert!(!check_graph_constrained(&t, &ConstraintGraph::empty(4), 1e-12).unwrap().pass);
        assert!(faithful_hypergraph(&t, 1e-12).unwrap().is_empty());
    }

    #[test]
    fn subsets_of_passing_cliques_are_skipped() {
        let r = check_graph_constrained(&ghz(4), &ConstraintGraph::complete(4), 1e-12).unwrap();
        // every pair fails, so every singleton is still checked
        assert_eq!(r.checks.len(), 6 + 4);
    }

    #[test]
    fn order_mismatch_is_reported() {
        assert!(matches!(
            check_graph_constrained(&ghz(3), &ConstraintGraph::cycle(4), 1e-12),
            Err(GrtError::OrderMismatch { .. })
        ));
    }

    #[test]
    fn cube_faces_create_a_clique_outside_every_face() {
        // vertices are 3-bit strings; faces fix one coordinate
        let mut edges = Vec::new();
        let mut faces = Vec::new();
        for axis in 0..3 {
            for val in 0..2 {
                let face: Vec<usize> = (0..8).filter(|v| (v >> axis) & 1 == val).collect();
                for (i, &a) in face.iter().enumerate() {
                    for &b in &face[i + 1..] {
                        edges.push((a, b));
                    }
                }
                faces.push(face);
            }
        }
        let g = ConstraintGraph::new(8, &edges).unwrap();
        let cliques = maximal_cliques(&g);
        let stray = vec![0b000, 0b011, 0b101, 0b110];
        assert!(cliques.contains(&stray));
        assert!(faces.iter().all(|f| !is_subset(&stray, f)));
    }

    #[test]
    fn compose_two_pentagons() {
        let c5 = ConstraintGraph::cycle(5);
        let g = compose_graphs(&c5, &c5, &[0, 1], &[0, 1], &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(g.n_vertices(), 6);
        let e: Vec<_> = g.edges().collect();
        assert_eq!(e, vec![(0, 1), (1, 2), (3, 4), (4, 5)]);
        assert!(matches!(
            compose_graphs(&c5, &c5, &[0, 2], &[0, 1], &[(0, 0), (2, 1)]),
            Err(GrtError::NotAClique(_))
        ));
    }

    #[test]
    fn compose_hypergraph_adds_super_edges() {
        let h = ConstraintHypergraph::new(4, &[vec![0, 1, 2], vec![2, 3]]).unwrap();
        let out = compose_hypergraphs(&h, &h, &[2], &[2], &[(2, 2)]).unwrap();
        // survivors: 0,1,3 -> 0,1,2 ; 0,1,3 -> 3,4,5
        assert!(out.contains(&[0, 1, 3, 4]));
        assert!(out.contains(&[0, 1]) && out.contains(&[5]));
        assert!(out.contains(&[0, 1, 5]));
        assert!(out.contains(&[2, 3, 4]));
        assert!(out.contains(&[2, 5]));
    }

    #[test]
    fn json_round_trip() {
        let g = ConstraintGraph::wheel(6);
        match Constraint::from_json(&g.to_json().unwrap()).unwrap() {
            Constraint::Graph(back) => assert_eq!(back, g),
            _ => panic!("expected graph"),
        }
        let h = ConstraintHypergraph::new(3, &[vec![0, 2], vec![1]]).unwrap();
        match Constraint::from_json(&h.to_json().unwrap()).unwrap() {
            Constraint::Hypergraph(back) => assert_eq!(back, h),
            _ => panic!("expected hypergraph"),
        }
    }
}

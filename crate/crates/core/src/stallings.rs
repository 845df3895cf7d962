//! Stallings subgroup graphs.
//!
//! A subgroup `⟨h_1, ..., h_k⟩` of a free group is represented by the folded
//! core graph obtained from a wedge of circles labelled `h_i`. A reduced word
//! lies in the subgroup exactly when it can be read as a closed path at the
//! base vertex.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;

use crate::words::Word;

pub type VertexId = usize;

/// Positive-label edge `origin --label--> terminus`; the inverse edge is implicit.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Edge {
    pub origin: VertexId,
    pub label: u32,
    pub terminus: VertexId,
}

#[derive(Clone, Debug)]
pub struct StallingsGraph {
    rank: u32,
    base: VertexId,
    vertices: BTreeSet<VertexId>,
    /// Edge multiplicities; a wedge may contain parallel copies before folding.
    edges: BTreeMap<Edge, usize>,
    next_id: VertexId,
}

impl StallingsGraph {
    /// Wedge of circles spelling the given words at a common base vertex.
    pub fn wedge(rank: u32, generators: &[Word]) -> Self {
        let mut g = StallingsGraph {
            rank,
            base: 0,
            vertices: BTreeSet::from([0]),
            edges: BTreeMap::new(),
            next_id: 1,
        };
        for w in generators {
            debug_assert_eq!(w.rank(), rank);
            let n = w.len();
            if n == 0 {
                continue;
            }
            let mut prev = g.base;
            for (i, &x) in w.letters().iter().enumerate() {
                let next = if i + 1 == n { g.base } else { g.fresh_vertex() };
                g.add_letter_edge(prev, x, next);
                prev = next;
            }
        }
        g
    }

    fn fresh_vertex(&mut self) -> VertexId {
        let v = self.next_id;
        self.next_id += 1;
        self.vertices.insert(v);
        v
    }

    fn add_letter_edge(&mut self, from: VertexId, x: i32, to: VertexId) {
        let label = x.unsigned_abs();
        let e = if x > 0 {
            Edge { origin: from, label, terminus: to }
        } else {
            Edge { origin: to, label, terminus: from }
        };
        *self.edges.entry(e).or_insert(0) += 1;
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn base(&self) -> VertexId {
        self.base
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().copied()
    }

    /// Distinct edges; parallel copies are reported once.
    pub fn edges(&self) -> impl Iterator<Item = &Edge> + '_ {
        self.edges.keys()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Number of edges counted with multiplicity.
    pub fn edge_count(&self) -> usize {
        self.edges.values().sum()
    }

    /// Targets reachable from `v` reading the signed letter `x`.
    pub fn targets(&self, v: VertexId, x: i32) -> Vec<VertexId> {
        let label = x.unsigned_abs();
        self.edges
            .keys()
            .filter_map(|e| {
                if e.label != label {
                    None
                } else if x > 0 && e.origin == v {
                    Some(e.terminus)
                } else if x < 0 && e.terminus == v {
                    Some(e.origin)
                } else {
                    None
                }
            })
            .collect()
    }

    /// Performs at most one folding. Returns whether a fold happened.
    ///
    /// Two edges with the same origin and label (or the same terminus and
    /// label) are identified together with their other endpoints.
    pub fn fold_step(&mut self) -> bool {
        if let Some((_, m)) = self.edges.iter_mut().find(|(_, m)| **m > 1) {
            *m -= 1;
            return true;
        }
        let mut out: BTreeMap<(VertexId, u32), Edge> = BTreeMap::new();
        let mut inc: BTreeMap<(VertexId, u32), Edge> = BTreeMap::new();
        let mut collision = None;
        for &e in self.edges.keys() {
            if let Some(&f) = out.get(&(e.origin, e.label)) {
                collision = Some((f, e, f.terminus, e.terminus));
                break;
            }
            if let Some(&f) = inc.get(&(e.terminus, e.label)) {
                collision = Some((f, e, f.origin, e.origin));
                break;
            }
            out.insert((e.origin, e.label), e);
            inc.insert((e.terminus, e.label), e);
        }
        let Some((_keep, drop, v1, v2)) = collision else {
            return false;
        };
        self.edges.remove(&drop);
        if v1 != v2 {
            self.merge_vertices(v1.min(v2), v1.max(v2));
        }
        true
    }

    /// Replaces `gone` by `kept` everywhere.
    fn merge_vertices(&mut self, kept: VertexId, gone: VertexId) {
        let edges = std::mem::take(&mut self.edges);
        for (mut e, m) in edges {
            if e.origin == gone {
                e.origin = kept;
            }
            if e.terminus == gone {
                e.terminus = kept;
            }
            *self.edges.entry(e).or_insert(0) += m;
        }
        self.vertices.remove(&gone);
        if self.base == gone {
            self.base = kept;
        }
    }

    /// Folds until no collision remains, returning the number of folds.
    pub fn fold_all(&mut self) -> usize {
        let mut steps = 0;
        while self.fold_step() {
            steps += 1;
        }
        steps
    }

    /// Removes non-base vertices of degree at most one until none remain.
    pub fn trim_to_core(&mut self) {
        loop {
            let hair = self.vertices.iter().copied().find(|&v| {
                v != self.base && self.degree(v) <= 1
            });
            let Some(v) = hair else { break };
            self.edges.retain(|e, _| e.origin != v && e.terminus != v);
            self.vertices.remove(&v);
        }
    }

    fn degree(&self, v: VertexId) -> usize {
        self.edges
            .iter()
            .map(|(e, m)| m * (usize::from(e.origin == v) + usize::from(e.terminus == v)))
            .sum()
    }

    /// Checks that each vertex has at most one outgoing and one incoming edge per label.
    pub fn is_folded(&self) -> bool {
        let mut out = BTreeSet::new();
        let mut inc = BTreeSet::new();
        self.edges.values().all(|&m| m == 1)
            && self
                .edges
                .keys()
                .all(|e| out.insert((e.origin, e.label)) && inc.insert((e.terminus, e.label)))
    }

    /// Follows the path labelled `w` from `start`; `None` once an edge is missing.
    pub fn trace(&self, start: VertexId, w: &Word) -> Option<VertexId> {
        let mut v = start;
        for &x in w.letters() {
            v = *self.targets(v, x).first()?;
        }
        Some(v)
    }

    /// Membership of a reduced word in the subgroup.
    pub fn is_member(&self, w: &Word) -> bool {
        w.rank() == self.rank && self.trace(self.base, w) == Some(self.base)
    }

    /// DOT rendering; the base vertex is drawn as a double circle.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph stallings {\n");
        for &v in &self.vertices {
            let shape = if v == self.base { "doublecircle" } else { "circle" };
            let _ = writeln!(s, "  v{v} [shape={shape}];");
        }
        for e in self.edges.keys() {
            let label = Word::from_reduced(vec![e.label as i32], self.rank);
            let _ = writeln!(s, "  v{} -> v{} [label=\"{}\"];", e.origin, e.terminus, label);
        }
        s.push_str("}\n");
        s
    }
}

/// Builds the folded core graph of the subgroup generated by `generators`.
pub fn build_subgroup_graph(rank: u32, generators: &[Word]) -> StallingsGraph {
    let mut g = StallingsGraph::wedge(rank, generators);
    g.fold_all();
    g.trim_to_core();
    g
}

/// Searches the subgroup graph for a `z`-loop reachable from the base
/// without reading `z`, where `z` is the highest generator.
///
/// Returns the shortest such path label `g` (ties broken by generator
/// order), so that `g⁻¹ z g` lies in the subgroup.
pub fn find_z_conjugator(rank: u32, fix_generators: &[Word]) -> Option<Word> {
    let graph = build_subgroup_graph(rank, fix_generators);
    let z = rank as i32;
    let has_z_loop = |v: VertexId| graph.targets(v, z).contains(&v);

    let alphabet: Vec<i32> = (1..z).flat_map(|i| [i, -i]).collect();
    let mut parent: BTreeMap<VertexId, (VertexId, i32)> = BTreeMap::new();
    let mut seen = BTreeSet::from([graph.base]);
    let mut queue = VecDeque::from([graph.base]);
    while let Some(v) = queue.pop_front() {
        if has_z_loop(v) {
            let mut path = Vec::new();
            let mut cur = v;
            while cur != graph.base {
                let (p, x) = parent[&cur];
                path.push(x);
                cur = p;
            }
            path.reverse();
            // p leads from the base to v, so p z p⁻¹ is a closed path: g = p⁻¹.
            let p = Word::from_reduced(path, rank);
            return Some(p.inverse());
        }
        for &x in &alphabet {
            for t in graph.targets(v, x) {
                if seen.insert(t) {
                    parent.insert(t, (v, x));
                    queue.push_back(t);
                }
            }
        }
    }
    None
}

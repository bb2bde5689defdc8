//! Graphs on reduced words with typed edges, their contractions, distances
//! and diameters.

use std::collections::{HashMap, VecDeque};
use std::fmt::Write as _;
use std::hash::Hash;

use rayon::prelude::*;
use serde_json::json;

use crate::error::{Error, Result};
use crate::perm::{Permutation, Symmetry};
use crate::unionfind::UnionFind;
use crate::word::{enumerate_capped, ReducedWord, DEFAULT_WORD_CAP};

/// Default vertex cap for all-pairs diameter computations.
pub const DEFAULT_VERTEX_CAP: usize = 200_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeKind {
    Commutation,
    LongBraid,
}

impl EdgeKind {
    pub fn code(self) -> &'static str {
        match self {
            EdgeKind::Commutation => "C",
            EdgeKind::LongBraid => "B",
        }
    }

    pub fn other(self) -> EdgeKind {
        match self {
            EdgeKind::Commutation => EdgeKind::LongBraid,
            EdgeKind::LongBraid => EdgeKind::Commutation,
        }
    }
}

/// An undirected edge with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub u: u32,
    pub v: u32,
    pub kind: EdgeKind,
}

/// How a vertex payload is printed in DOT, JSON and text reports.
pub trait VertexLabel {
    fn label(&self) -> String;
}

impl VertexLabel for ReducedWord {
    fn label(&self) -> String {
        self.to_string()
    }
}

impl<T: VertexLabel> VertexLabel for Vec<T> {
    fn label(&self) -> String {
        let parts: Vec<String> = self.iter().map(VertexLabel::label).collect();
        format!("{{{}}}", parts.join(","))
    }
}

/// A simple undirected graph whose edges carry an [`EdgeKind`].
///
/// Adjacency is kept in compressed form, sorted by neighbor id. Vertex
/// permutations recorded in `automorphisms` must preserve edges and kinds;
/// they are used to skip redundant BFS sources.
#[derive(Clone, Debug)]
pub struct LabeledGraph<T> {
    vertices: Vec<T>,
    index: HashMap<T, u32>,
    edges: Vec<Edge>,
    offsets: Vec<u32>,
    neighbors: Vec<u32>,
    neighbor_kinds: Vec<EdgeKind>,
    automorphisms: Vec<Vec<u32>>,
}

/// `G_π`: vertices are reduced words.
pub type WordGraph = LabeledGraph<ReducedWord>;
/// `C_π` or `B_π`: vertices are classes of reduced words.
pub type ClassGraph = LabeledGraph<Vec<ReducedWord>>;

impl<T: Clone + Eq + Hash> LabeledGraph<T> {
    /// Builds a graph, rejecting loops and duplicate payloads and merging
    /// repeated edges.
    pub fn from_edges(vertices: Vec<T>, edges: impl IntoIterator<Item = (u32, u32, EdgeKind)>) -> Result<Self> {
        let n = vertices.len();
        let mut index = HashMap::with_capacity(n);
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), i as u32).is_some() {
                return Err(Error::Precondition("duplicate vertex payload".into()));
            }
        }
        let mut list = Vec::new();
        for (a, b, kind) in edges {
            if a == b {
                return Err(Error::Precondition("graph would contain a loop".into()));
            }
            if a as usize >= n || b as usize >= n {
                return Err(Error::VertexNotFound(format!("vertex id {}", a.max(b))));
            }
            list.push(Edge {
                u: a.min(b),
                v: a.max(b),
                kind,
            });
        }
        list.sort_unstable();
        list.dedup_by(|x, y| x.u == y.u && x.v == y.v);
        Ok(Self::assemble(vertices, index, list))
    }

    fn assemble(vertices: Vec<T>, index: HashMap<T, u32>, edges: Vec<Edge>) -> Self {
        let n = vertices.len();
        let mut degree = vec![0u32; n + 1];
        for e in &edges {
            degree[e.u as usize] += 1;
            degree[e.v as usize] += 1;
        }
        let mut offsets = vec![0u32; n + 1];
        for i in 0..n {
            offsets[i + 1] = offsets[i] + degree[i];
        }
        let mut fill = offsets.clone();
        let mut neighbors = vec![0u32; 2 * edges.len()];
        let mut neighbor_kinds = vec![EdgeKind::Commutation; 2 * edges.len()];
        for e in &edges {
            for (a, b) in [(e.u, e.v), (e.v, e.u)] {
                let slot = fill[a as usize] as usize;
                neighbors[slot] = b;
                neighbor_kinds[slot] = e.kind;
                fill[a as usize] += 1;
            }
        }
        for i in 0..n {
            let (lo, hi) = (offsets[i] as usize, offsets[i + 1] as usize);
            let mut pairs: Vec<(u32, EdgeKind)> =
                neighbors[lo..hi].iter().copied().zip(neighbor_kinds[lo..hi].iter().copied()).collect();
            pairs.sort_unstable();
            for (slot, (b, k)) in pairs.into_iter().enumerate() {
                neighbors[lo + slot] = b;
                neighbor_kinds[lo + slot] = k;
            }
        }
        LabeledGraph {
            vertices,
            index,
            edges,
            offsets,
            neighbors,
            neighbor_kinds,
            automorphisms: Vec::new(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge_count_of(&self, kind: EdgeKind) -> usize {
        self.edges.iter().filter(|e| e.kind == kind).count()
    }

    pub fn vertices(&self) -> &[T] {
        &self.vertices
    }

    pub fn vertex(&self, id: u32) -> &T {
        &self.vertices[id as usize]
    }

    pub fn id_of(&self, payload: &T) -> Option<u32> {
        self.index.get(payload).copied()
    }

    /// Edges sorted by `(u, v)`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, id: u32) -> impl Iterator<Item = (u32, EdgeKind)> + '_ {
        let (lo, hi) = (self.offsets[id as usize] as usize, self.offsets[id as usize + 1] as usize);
        self.neighbors[lo..hi].iter().copied().zip(self.neighbor_kinds[lo..hi].iter().copied())
    }

    pub fn edge_between(&self, a: u32, b: u32) -> Option<EdgeKind> {
        self.neighbors(a).find(|&(x, _)| x == b).map(|(_, k)| k)
    }

    pub fn automorphisms(&self) -> &[Vec<u32>] {
        &self.automorphisms
    }

    /// Records a vertex permutation as an automorphism if it preserves every
    /// edge together with its kind. Returns whether it was accepted.
    pub fn add_automorphism(&mut self, map: Vec<u32>) -> bool {
        if map.len() != self.vertex_count() {
            return false;
        }
        let mut seen = vec![false; map.len()];
        for &m in &map {
            if m as usize >= map.len() || std::mem::replace(&mut seen[m as usize], true) {
                return false;
            }
        }
        let preserved = self
            .edges
            .iter()
            .all(|e| self.edge_between(map[e.u as usize], map[e.v as usize]) == Some(e.kind));
        if preserved {
            self.automorphisms.push(map);
        }
        preserved
    }

    /// Contracts every edge of `kind`. Vertices of the result are the
    /// connected components of the `kind`-subgraph, each payload the sorted
    /// list of members; the surviving edges are those of the other kind,
    /// deduplicated and with loops removed.
    pub fn contract(&self, kind: EdgeKind) -> LabeledGraph<Vec<T>>
    where
        T: Ord,
    {
        let n = self.vertex_count();
        let mut uf = UnionFind::new(n);
        for e in self.edges.iter().filter(|e| e.kind == kind) {
            uf.union(e.u, e.v);
        }
        let mut members: HashMap<u32, Vec<u32>> = HashMap::new();
        for v in 0..n as u32 {
            members.entry(uf.find(v)).or_default().push(v);
        }
        let mut classes: Vec<Vec<u32>> = members.into_values().collect();
        for c in &mut classes {
            c.sort_unstable_by(|&a, &b| self.vertices[a as usize].cmp(&self.vertices[b as usize]));
        }
        classes.sort_by(|a, b| {
            let pa = a.iter().map(|&i| &self.vertices[i as usize]);
            let pb = b.iter().map(|&i| &self.vertices[i as usize]);
            pa.cmp(pb)
        });
        let mut class_of = vec![0u32; n];
        for (ci, c) in classes.iter().enumerate() {
            for &v in c {
                class_of[v as usize] = ci as u32;
            }
        }
        let mut list: Vec<Edge> = self
            .edges
            .iter()
            .filter(|e| e.kind != kind)
            .filter_map(|e| {
                let (a, b) = (class_of[e.u as usize], class_of[e.v as usize]);
                (a != b).then(|| Edge {
                    u: a.min(b),
                    v: a.max(b),
                    kind: e.kind,
                })
            })
            .collect();
        list.sort_unstable();
        list.dedup();
        let payloads: Vec<Vec<T>> = classes
            .iter()
            .map(|c| c.iter().map(|&i| self.vertices[i as usize].clone()).collect())
            .collect();
        let index = payloads.iter().enumerate().map(|(i, p)| (p.clone(), i as u32)).collect();
        let mut out = LabeledGraph::assemble(payloads, index, list);
        for map in &self.automorphisms {
            let induced: Vec<u32> = classes.iter().map(|c| class_of[map[c[0] as usize] as usize]).collect();
            out.add_automorphism(induced);
        }
        out
    }

    /// Number of edges of the other kind whose endpoints fall in the same
    /// `kind`-class; contraction drops these as loops.
    pub fn loops_after_contracting(&self, kind: EdgeKind) -> usize {
        let mut uf = UnionFind::new(self.vertex_count());
        for e in self.edges.iter().filter(|e| e.kind == kind) {
            uf.union(e.u, e.v);
        }
        self.edges
            .iter()
            .filter(|e| e.kind != kind && uf.find(e.u) == uf.find(e.v))
            .count()
    }

    /// Single-source BFS distances; `u32::MAX` marks unreachable vertices.
    pub fn distances_from(&self, source: u32) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.vertex_count()];
        let mut queue = VecDeque::new();
        dist[source as usize] = 0;
        queue.push_back(source);
        while let Some(x) = queue.pop_front() {
            for (y, _) in self.neighbors(x) {
                if dist[y as usize] == u32::MAX {
                    dist[y as usize] = dist[x as usize] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() == 0 || self.distances_from(0).iter().all(|&d| d != u32::MAX)
    }

    /// Per-kind edge counts along one shortest path from `from` to `to`.
    /// Walking back from `to`, the predecessor is always the lowest-id
    /// neighbor one step closer to `from`.
    pub fn move_counts_along(&self, from: &T, to: &T) -> Result<(usize, usize)> {
        let a = self.id_of(from).ok_or_else(|| Error::VertexNotFound("source vertex".into()))?;
        let b = self.id_of(to).ok_or_else(|| Error::VertexNotFound("target vertex".into()))?;
        let path = self.shortest_path(a, b)?;
        let comm = path.iter().filter(|(_, k)| *k == EdgeKind::Commutation).count();
        Ok((comm, path.len() - comm))
    }

    /// Steps of the deterministic shortest path from `a` to `b`, as
    /// `(vertex reached, kind of edge used)`.
    pub fn shortest_path(&self, a: u32, b: u32) -> Result<Vec<(u32, EdgeKind)>> {
        let dist = self.distances_from(a);
        if dist[b as usize] == u32::MAX {
            return Err(Error::NotConnected);
        }
        let mut steps = Vec::with_capacity(dist[b as usize] as usize);
        let mut x = b;
        while x != a {
            let (prev, kind) = self
                .neighbors(x)
                .find(|&(y, _)| dist[y as usize] + 1 == dist[x as usize])
                .expect("BFS predecessor exists");
            steps.push((x, kind));
            x = prev;
        }
        steps.reverse();
        Ok(steps)
    }

    /// Checks that each cycle has an even number of edges of each kind, via a
    /// BFS labelling of vertices by `(commutation parity, braid parity)`.
    pub fn kind_parity_consistent(&self) -> bool {
        let n = self.vertex_count();
        let mut label: Vec<Option<(bool, bool)>> = vec![None; n];
        for start in 0..n as u32 {
            if label[start as usize].is_some() {
                continue;
            }
            label[start as usize] = Some((false, false));
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                let (c, b) = label[x as usize].unwrap();
                for (y, kind) in self.neighbors(x) {
                    let want = match kind {
                        EdgeKind::Commutation => (!c, b),
                        EdgeKind::LongBraid => (c, !b),
                    };
                    match label[y as usize] {
                        None => {
                            label[y as usize] = Some(want);
                            queue.push_back(y);
                        }
                        Some(have) if have != want => return false,
                        Some(_) => {}
                    }
                }
            }
        }
        true
    }

    pub fn is_bipartite(&self) -> bool {
        let n = self.vertex_count();
        let mut side: Vec<Option<bool>> = vec![None; n];
        for start in 0..n as u32 {
            if side[start as usize].is_some() {
                continue;
            }
            side[start as usize] = Some(false);
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                let s = side[x as usize].unwrap();
                for (y, _) in self.neighbors(x) {
                    match side[y as usize] {
                        None => {
                            side[y as usize] = Some(!s);
                            queue.push_back(y);
                        }
                        Some(t) if t == s => return false,
                        Some(_) => {}
                    }
                }
            }
        }
        true
    }

    /// Exact diameter with the default vertex cap.
    pub fn diameter(&self) -> Result<usize> {
        self.diameter_capped(DEFAULT_VERTEX_CAP)
    }

    /// Exact diameter: the largest eccentricity over BFS runs from every
    /// vertex, skipping sources equivalent under a recorded automorphism.
    pub fn diameter_capped(&self, vertex_cap: usize) -> Result<usize> {
        let n = self.vertex_count();
        if n > vertex_cap {
            return Err(Error::TooLarge {
                what: "vertex count for diameter",
                size: n,
                cap: vertex_cap,
            });
        }
        if n == 0 {
            return Ok(0);
        }
        let sources = self.orbit_representatives();
        let ecc = self.eccentricities_of(&sources)?;
        Ok(ecc.into_iter().max().unwrap_or(0) as usize)
    }

    /// Smallest vertex id of every orbit under the recorded automorphisms.
    pub fn orbit_representatives(&self) -> Vec<u32> {
        let n = self.vertex_count();
        if self.automorphisms.is_empty() {
            return (0..n as u32).collect();
        }
        let mut uf = UnionFind::new(n);
        for map in &self.automorphisms {
            for (v, &image) in map.iter().enumerate() {
                uf.union(v as u32, image);
            }
        }
        let mut seen = vec![false; n];
        let mut reps = Vec::new();
        for v in 0..n as u32 {
            let root = uf.find(v) as usize;
            if !seen[root] {
                seen[root] = true;
                reps.push(v);
            }
        }
        reps
    }

    /// Eccentricities of the given sources, computed by bit-parallel BFS in
    /// batches of `BATCH` sources. Fails if the graph is disconnected.
    pub fn eccentricities_of(&self, sources: &[u32]) -> Result<Vec<u32>> {
        let (offsets, neighbors) = (&self.offsets, &self.neighbors);
        let per_batch: Vec<Result<Vec<u32>>> = sources
            .par_chunks(BATCH)
            .map(|chunk| batch_eccentricities(offsets, neighbors, chunk))
            .collect();
        let mut out = Vec::with_capacity(sources.len());
        for r in per_batch {
            out.extend(r?);
        }
        Ok(out)
    }
}

impl<T: VertexLabel> LabeledGraph<T> {
    /// Graphviz DOT text. Long braid edges are drawn double.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "graph \"{}\" {{", escape(name));
        for v in &self.vertices {
            let _ = writeln!(out, "  \"{}\";", escape(&v.label()));
        }
        for e in &self.edges {
            let (a, b) = (self.vertices[e.u as usize].label(), self.vertices[e.v as usize].label());
            match e.kind {
                EdgeKind::Commutation => {
                    let _ = writeln!(out, "  \"{}\" -- \"{}\";", escape(&a), escape(&b));
                }
                EdgeKind::LongBraid => {
                    let _ = writeln!(
                        out,
                        "  \"{}\" -- \"{}\" [color=\"black:invis:black\", penwidth=2];",
                        escape(&a),
                        escape(&b)
                    );
                }
            }
        }
        out.push_str("}\n");
        out
    }

    /// `{"vertices": [...], "edges": [[u, v, "C"|"B"], ...]}` in id order.
    pub fn to_json(&self) -> serde_json::Value {
        let vertices: Vec<String> = self.vertices.iter().map(VertexLabel::label).collect();
        let edges: Vec<serde_json::Value> = self.edges.iter().map(|e| json!([e.u, e.v, e.kind.code()])).collect();
        json!({ "vertices": vertices, "edges": edges })
    }

    /// Line-oriented listing used by golden files: vertices, then edges by
    /// label, both sorted.
    pub fn to_listing(&self) -> String {
        let mut vertex_lines: Vec<String> = self.vertices.iter().map(|v| format!("vertex {}", v.label())).collect();
        vertex_lines.sort();
        let mut edge_lines: Vec<String> = self
            .edges
            .iter()
            .map(|e| {
                let (mut a, mut b) = (self.vertices[e.u as usize].label(), self.vertices[e.v as usize].label());
                if a > b {
                    std::mem::swap(&mut a, &mut b);
                }
                format!("edge {a} {b} {}", e.kind.code())
            })
            .collect();
        edge_lines.sort();
        let mut out = String::new();
        for l in vertex_lines.into_iter().chain(edge_lines) {
            out.push_str(&l);
            out.push('\n');
        }
        out
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// `G_π` with the default enumeration cap.
pub fn build_g(pi: &Permutation) -> Result<WordGraph> {
    build_g_capped(pi, DEFAULT_WORD_CAP)
}

/// `G_π`: reduced words joined by single commutation or long braid moves.
/// Symmetries of the square fixing `π` are recorded as automorphisms.
pub fn build_g_capped(pi: &Permutation, word_cap: usize) -> Result<WordGraph> {
    let words = enumerate_capped(pi, word_cap)?;
    let index: HashMap<ReducedWord, u32> = words.iter().enumerate().map(|(i, w)| (w.clone(), i as u32)).collect();
    let mut edges = Vec::new();
    let mut scratch = Vec::new();
    for (id, w) in words.iter().enumerate() {
        let id = id as u32;
        let l = w.letters();
        for i in 0..l.len().saturating_sub(1) {
            if l[i].abs_diff(l[i + 1]) > 1 {
                scratch.clear();
                scratch.extend_from_slice(l);
                scratch.swap(i, i + 1);
                if let Some(&other) = index.get(scratch.as_slice()) {
                    if id < other {
                        edges.push(Edge {
                            u: id,
                            v: other,
                            kind: EdgeKind::Commutation,
                        });
                    }
                }
            }
        }
        for i in 0..l.len().saturating_sub(2) {
            if l[i] == l[i + 2] && l[i].abs_diff(l[i + 1]) == 1 {
                scratch.clear();
                scratch.extend_from_slice(l);
                scratch[i] = l[i + 1];
                scratch[i + 1] = l[i];
                scratch[i + 2] = l[i + 1];
                if let Some(&other) = index.get(scratch.as_slice()) {
                    if id < other {
                        edges.push(Edge {
                            u: id,
                            v: other,
                            kind: EdgeKind::LongBraid,
                        });
                    }
                }
            }
        }
    }
    edges.sort_unstable();
    let mut graph = LabeledGraph::assemble(words, index, edges);
    let n = pi.size();
    for op in Symmetry::ALL {
        if pi.symmetry(op) != *pi {
            continue;
        }
        let map: Option<Vec<u32>> = graph
            .vertices
            .iter()
            .map(|w| graph.id_of(&ReducedWord(op.map_word(w.letters(), n))))
            .collect();
        if let Some(map) = map {
            graph.add_automorphism(map);
        }
    }
    Ok(graph)
}

impl std::borrow::Borrow<[u8]> for ReducedWord {
    fn borrow(&self) -> &[u8] {
        &self.0
    }
}

const LANES: usize = 8;
const BATCH: usize = LANES * 64;

#[derive(Clone, Copy, PartialEq, Eq)]
#[repr(align(64))]
struct Lanes([u64; LANES]);

impl Lanes {
    const ZERO: Lanes = Lanes([0; LANES]);

    #[inline(always)]
    fn or_assign(&mut self, other: &Lanes) {
        for i in 0..LANES {
            self.0[i] |= other.0[i];
        }
    }

    #[inline(always)]
    fn and_not(&self, other: &Lanes) -> Lanes {
        let mut out = Lanes::ZERO;
        for i in 0..LANES {
            out.0[i] = self.0[i] & !other.0[i];
        }
        out
    }

    fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

// Multi-source BFS: bit b of a vertex's lanes tracks source b. Each level
// pulls the frontier bits of all neighbors; vertices already reached from
// every source in the batch are skipped.
fn batch_eccentricities(offsets: &[u32], neighbors: &[u32], sources: &[u32]) -> Result<Vec<u32>> {
    let n = offsets.len() - 1;
    let k = sources.len();
    debug_assert!(k <= BATCH);
    let mut full = Lanes::ZERO;
    for b in 0..k {
        full.0[b / 64] |= 1 << (b % 64);
    }
    let mut visited = vec![Lanes::ZERO; n];
    let mut frontier = vec![Lanes::ZERO; n];
    let mut next = vec![Lanes::ZERO; n];
    for (b, &s) in sources.iter().enumerate() {
        visited[s as usize].0[b / 64] |= 1 << (b % 64);
        frontier[s as usize].0[b / 64] |= 1 << (b % 64);
    }
    let mut ecc = vec![0u32; k];
    let mut level = 0u32;
    loop {
        level += 1;
        let mut grown = Lanes::ZERO;
        for v in 0..n {
            let seen = visited[v];
            if seen == full {
                next[v] = Lanes::ZERO;
                continue;
            }
            let mut acc = Lanes::ZERO;
            for &u in &neighbors[offsets[v] as usize..offsets[v + 1] as usize] {
                acc.or_assign(&frontier[u as usize]);
            }
            let fresh = acc.and_not(&seen);
            next[v] = fresh;
            visited[v].or_assign(&fresh);
            grown.or_assign(&fresh);
        }
        if grown.is_zero() {
            break;
        }
        for (lane, &word) in grown.0.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let b = bits.trailing_zeros() as usize;
                ecc[lane * 64 + b] = level;
                bits &= bits - 1;
            }
        }
        std::mem::swap(&mut frontier, &mut next);
    }
    if visited.iter().any(|x| *x != full) {
        return Err(Error::NotConnected);
    }
    Ok(ecc)
}

//! Weighted leaf-labeled multigraphs.
//!
//! A [`WeightedGraph`] has a finite vertex set with nonnegative integer
//! weights, a multiset of edges (loops and parallel edges allowed) with
//! stable string identifiers, and `n` leaves labeled `1..=n`. Leaves are
//! exterior half-edges: they count toward degree but never toward the Betti
//! number, and they are never contracted.
//!
//! Vertices and edges are stored sorted by identifier in natural order
//! (`e2` before `e10`), so two graphs built from the same data compare equal
//! regardless of input order.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Hard ceiling on edges per graph; edge subsets are 64-bit masks.
pub const MAX_EDGES: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub id: String,
    pub weight: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: String,
    /// Endpoint vertex indices, `ends[0] <= ends[1]`. Equal ends form a loop.
    pub ends: [usize; 2],
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.ends[0] == self.ends[1]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightedGraph {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    /// `leaves[i]` is the vertex index carrying leaf label `i + 1`.
    leaves: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GraphStats {
    pub num_vertices: usize,
    pub num_edges: usize,
    pub num_leaves: usize,
    pub num_components: usize,
    pub betti: usize,
    pub genus: usize,
}

/// Checks the hyperbolicity condition `2 - 2g - n < 0`.
pub fn check_stable_range(genus: u32, leaves: u32) -> Result<()> {
    if 2 * u64::from(genus) + u64::from(leaves) > 2 {
        Ok(())
    } else {
        Err(Error::UnstableRange { genus, leaves })
    }
}

/// Natural ordering of identifiers: digit runs compare numerically.
pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (ab, bb) = (a.as_bytes(), b.as_bytes());
    let (mut i, mut j) = (0, 0);
    while i < ab.len() && j < bb.len() {
        if ab[i].is_ascii_digit() && bb[j].is_ascii_digit() {
            let si = i;
            while i < ab.len() && ab[i].is_ascii_digit() {
                i += 1;
            }
            let sj = j;
            while j < bb.len() && bb[j].is_ascii_digit() {
                j += 1;
            }
            let ra = trim_zeros(&a[si..i]);
            let rb = trim_zeros(&b[sj..j]);
            let ord = ra.len().cmp(&rb.len()).then_with(|| ra.cmp(rb));
            if ord != Ordering::Equal {
                return ord;
            }
        } else {
            let ord = ab[i].cmp(&bb[j]);
            if ord != Ordering::Equal {
                return ord;
            }
            i += 1;
            j += 1;
        }
    }
    (ab.len() - i)
        .cmp(&(bb.len() - j))
        .then_with(|| a.cmp(b))
}

fn trim_zeros(s: &str) -> &str {
    let t = s.trim_start_matches('0');
    if t.is_empty() {
        "0"
    } else {
        t
    }
}

/// A subset of the edges of one graph, as a bitmask over edge indices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSet(pub u64);

impl EdgeSet {
    pub const EMPTY: EdgeSet = EdgeSet(0);

    pub fn full(num_edges: usize) -> Self {
        if num_edges >= 64 {
            EdgeSet(u64::MAX)
        } else {
            EdgeSet((1u64 << num_edges) - 1)
        }
    }

    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = EdgeSet::EMPTY;
        for i in indices {
            s.insert(i);
        }
        s
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    pub fn insert(&mut self, i: usize) {
        self.0 |= 1 << i;
    }

    pub fn with(self, i: usize) -> Self {
        EdgeSet(self.0 | 1 << i)
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: EdgeSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: EdgeSet) -> Self {
        EdgeSet(self.0 | other.0)
    }

    pub fn difference(self, other: EdgeSet) -> Self {
        EdgeSet(self.0 & !other.0)
    }

    pub fn complement(self, num_edges: usize) -> Self {
        EdgeSet(!self.0 & EdgeSet::full(num_edges).0)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.contains(i))
    }

    /// Order used for witness lists: by size, then lexicographically by
    /// ascending edge indices.
    pub fn canonical_cmp(self, other: EdgeSet) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.iter().cmp(other.iter()))
    }

    /// All subsets of `0..num_edges` with exactly `k` elements, in
    /// [`EdgeSet::canonical_cmp`] order.
    pub fn subsets_of_size(num_edges: usize, k: usize) -> Vec<EdgeSet> {
        fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<EdgeSet>) {
            if cur.len() == k {
                out.push(EdgeSet::from_indices(cur.iter().copied()));
                return;
            }
            for i in start..n {
                if n - i < k - cur.len() {
                    break;
                }
                cur.push(i);
                rec(i + 1, n, k, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if k <= num_edges {
            rec(0, num_edges, k, &mut Vec::with_capacity(k), &mut out);
        }
        out
    }
}

/// Disjoint-set forest over `0..n`.
#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    /// Dense component labels `0..k`, numbered by smallest member.
    pub(crate) fn labels(&mut self) -> (usize, Vec<usize>) {
        let n = self.parent.len();
        let mut label = vec![usize::MAX; n];
        let mut out = vec![0; n];
        let mut count = 0;
        for v in 0..n {
            let r = self.find(v);
            if label[r] == usize::MAX {
                label[r] = count;
                count += 1;
            }
            out[v] = label[r];
        }
        (count, out)
    }
}

/// Assembles a [`WeightedGraph`] from identifiers.
#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    vertices: Vec<(String, u32)>,
    edges: Vec<(String, String, String)>,
    leaves: Vec<(u32, String)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(mut self, id: impl Into<String>, weight: u32) -> Self {
        self.vertices.push((id.into(), weight));
        self
    }

    pub fn edge(mut self, id: impl Into<String>, a: impl Into<String>, b: impl Into<String>) -> Self {
        self.edges.push((id.into(), a.into(), b.into()));
        self
    }

    pub fn leaf(mut self, label: u32, at: impl Into<String>) -> Self {
        self.leaves.push((label, at.into()));
        self
    }

    pub fn build(self) -> Result<WeightedGraph> {
        let vertices: Vec<Vertex> = self
            .vertices
            .into_iter()
            .map(|(id, weight)| Vertex { id, weight })
            .collect();
        let lookup = |id: &str| -> Result<usize> {
            vertices
                .iter()
                .position(|v| v.id == id)
                .ok_or_else(|| Error::UnknownVertex(id.to_string()))
        };
        let mut edges = Vec::with_capacity(self.edges.len());
        for (id, a, b) in self.edges {
            edges.push((id, lookup(&a)?, lookup(&b)?));
        }
        let n = self.leaves.len();
        let mut labels: Vec<u32> = self.leaves.iter().map(|(l, _)| *l).collect();
        labels.sort_unstable();
        if labels.iter().enumerate().any(|(i, &l)| l as usize != i + 1) {
            return Err(Error::LeafLabels {
                expected: n,
                found: labels,
            });
        }
        let mut leaves = vec![0; n];
        for (label, at) in self.leaves {
            leaves[label as usize - 1] = lookup(&at)?;
        }
        WeightedGraph::from_parts(vertices, edges, leaves)
    }
}

impl WeightedGraph {
    /// Builds a graph from vertices, edges given as `(id, end, end)` over
    /// indices into `vertices`, and leaf attachments (label `i + 1` at
    /// `leaves[i]`). Vertices and edges are re-sorted by identifier.
    pub fn from_parts(
        vertices: Vec<Vertex>,
        edges: Vec<(String, usize, usize)>,
        leaves: Vec<usize>,
    ) -> Result<Self> {
        if edges.len() > MAX_EDGES {
            return Err(Error::TooManyEdges(edges.len()));
        }
        let nv = vertices.len();
        for &(ref id, a, b) in &edges {
            if a >= nv || b >= nv {
                return Err(Error::Integrity(format!("edge `{id}` references a missing vertex")));
            }
        }
        if leaves.iter().any(|&v| v >= nv) {
            return Err(Error::Integrity("leaf references a missing vertex".into()));
        }

        let mut order: Vec<usize> = (0..nv).collect();
        order.sort_by(|&x, &y| natural_cmp(&vertices[x].id, &vertices[y].id));
        for w in order.windows(2) {
            if vertices[w[0]].id == vertices[w[1]].id {
                return Err(Error::DuplicateVertex(vertices[w[0]].id.clone()));
            }
        }
        let mut new_index = vec![0; nv];
        for (pos, &old) in order.iter().enumerate() {
            new_index[old] = pos;
        }
        let mut sorted_vertices: Vec<Option<Vertex>> = vertices.into_iter().map(Some).collect();
        let vertices: Vec<Vertex> = order
            .iter()
            .map(|&old| sorted_vertices[old].take().expect("each index taken once"))
            .collect();

        let mut edges: Vec<Edge> = edges
            .into_iter()
            .map(|(id, a, b)| {
                let (a, b) = (new_index[a], new_index[b]);
                Edge {
                    id,
                    ends: [a.min(b), a.max(b)],
                }
            })
            .collect();
        edges.sort_by(|x, y| natural_cmp(&x.id, &y.id));
        for w in edges.windows(2) {
            if w[0].id == w[1].id {
                return Err(Error::DuplicateEdge(w[0].id.clone()));
            }
        }
        let leaves = leaves.into_iter().map(|v| new_index[v]).collect();
        Ok(WeightedGraph {
            vertices,
            edges,
            leaves,
        })
    }

    /// Graph with generated identifiers `v1..` and `e1..`.
    pub fn from_indices(weights: &[u32], edges: &[(usize, usize)], leaves: &[usize]) -> Result<Self> {
        let vertices = weights
            .iter()
            .enumerate()
            .map(|(i, &weight)| Vertex {
                id: format!("v{}", i + 1),
                weight,
            })
            .collect();
        let edges = edges
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| (format!("e{}", i + 1), a, b))
            .collect();
        Self::from_parts(vertices, edges, leaves.to_vec())
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Vertex index per leaf; label `i + 1` sits at `leaves()[i]`.
    pub fn leaves(&self) -> &[usize] {
        &self.leaves
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_leaves(&self) -> usize {
        self.leaves.len()
    }

    pub fn weight(&self, v: usize) -> u32 {
        self.vertices[v].weight
    }

    pub fn total_weight(&self) -> usize {
        self.vertices.iter().map(|v| v.weight as usize).sum()
    }

    pub fn all_edges(&self) -> EdgeSet {
        EdgeSet::full(self.edges.len())
    }

    pub fn vertex_index(&self, id: &str) -> Result<usize> {
        self.vertices
            .iter()
            .position(|v| v.id == id)
            .ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    pub fn edge_index(&self, id: &str) -> Result<usize> {
        self.edges
            .iter()
            .position(|e| e.id == id)
            .ok_or_else(|| Error::UnknownEdge(id.to_string()))
    }

    /// Resolves edge identifiers into an [`EdgeSet`].
    pub fn edge_set<S: AsRef<str>>(&self, ids: &[S]) -> Result<EdgeSet> {
        let mut set = EdgeSet::EMPTY;
        for id in ids {
            set.insert(self.edge_index(id.as_ref())?);
        }
        Ok(set)
    }

    pub fn edge_ids(&self, set: EdgeSet) -> Vec<&str> {
        set.iter().map(|i| self.edges[i].id.as_str()).collect()
    }

    /// Leaf labels attached at vertex `v`, ascending.
    pub fn leaves_at(&self, v: usize) -> Vec<u32> {
        self.leaves
            .iter()
            .enumerate()
            .filter(|&(_, &at)| at == v)
            .map(|(i, _)| i as u32 + 1)
            .collect()
    }

    /// Degrees of all vertices: non-loop incidences, plus two per loop,
    /// plus one per leaf.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices.len()];
        for e in &self.edges {
            deg[e.ends[0]] += 1;
            deg[e.ends[1]] += 1;
        }
        for &v in &self.leaves {
            deg[v] += 1;
        }
        deg
    }

    pub fn degree(&self, id: &str) -> Result<usize> {
        let v = self.vertex_index(id)?;
        Ok(self.degrees()[v])
    }

    /// Connected components of the spanning subgraph `(V, edges)`.
    pub fn components_of(&self, edges: EdgeSet) -> (usize, Vec<usize>) {
        let mut uf = UnionFind::new(self.vertices.len());
        for i in edges.iter() {
            let [a, b] = self.edges[i].ends;
            uf.union(a, b);
        }
        uf.labels()
    }

    /// First Betti number of the spanning subgraph `(V, edges)`.
    pub fn betti_of(&self, edges: EdgeSet) -> usize {
        let (k, _) = self.components_of(edges);
        edges.len() + k - self.vertices.len()
    }

    pub fn stats(&self) -> GraphStats {
        let (num_components, _) = self.components_of(self.all_edges());
        let betti = self.edges.len() + num_components - self.vertices.len();
        GraphStats {
            num_vertices: self.vertices.len(),
            num_edges: self.edges.len(),
            num_leaves: self.leaves.len(),
            num_components,
            betti,
            genus: betti + self.total_weight(),
        }
    }

    pub fn betti(&self) -> usize {
        self.stats().betti
    }

    pub fn genus(&self) -> usize {
        self.stats().genus
    }

    pub fn is_connected(&self) -> bool {
        self.stats().num_components <= 1
    }

    /// Stability: weight-0 vertices need degree at least 3, weight-1
    /// vertices degree at least 1.
    pub fn is_stable(&self) -> bool {
        self.degrees()
            .iter()
            .zip(&self.vertices)
            .all(|(&d, v)| match v.weight {
                0 => d >= 3,
                1 => d >= 1,
                _ => true,
            })
    }

    /// Connected, trivalent, 0-weighted, of the given genus with `leaves`
    /// leaves.
    pub fn is_regular_tropicalization(&self, genus: u32, leaves: u32) -> Result<bool> {
        check_stable_range(genus, leaves)?;
        let stats = self.stats();
        let ok = stats.num_components == 1
            && self.vertices.iter().all(|v| v.weight == 0)
            && self.degrees().iter().all(|&d| d == 3)
            && stats.genus == genus as usize
            && stats.num_leaves == leaves as usize;
        if ok {
            let (g, n) = (genus as usize, leaves as usize);
            if stats.num_vertices != 2 * g + n - 2 || stats.num_edges != 3 * g + n - 3 {
                return Err(Error::Integrity(format!(
                    "trivalent genus-{g} graph with {n} leaves has {} vertices and {} edges",
                    stats.num_vertices, stats.num_edges
                )));
            }
        }
        Ok(ok)
    }

    /// [`Self::is_regular_tropicalization`] at this graph's own genus and
    /// leaf count; false outside the stable range.
    pub fn is_regular(&self) -> bool {
        let (g, n) = (self.genus() as u32, self.num_leaves() as u32);
        self.is_regular_tropicalization(g, n).unwrap_or(false)
    }

    /// Multiplicity of edges between `a` and `b` (loops when `a == b`).
    pub fn multiplicity(&self, a: usize, b: usize) -> usize {
        let key = [a.min(b), a.max(b)];
        self.edges.iter().filter(|e| e.ends == key).count()
    }

}

impl fmt::Display for WeightedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vs: Vec<String> = self
            .vertices
            .iter()
            .map(|v| format!("{}:{}", v.id, v.weight))
            .collect();
        let es: Vec<String> = self
            .edges
            .iter()
            .map(|e| {
                format!(
                    "{}={}-{}",
                    e.id, self.vertices[e.ends[0]].id, self.vertices[e.ends[1]].id
                )
            })
            .collect();
        let ls: Vec<String> = self
            .leaves
            .iter()
            .enumerate()
            .map(|(i, &v)| format!("{}@{}", i + 1, self.vertices[v].id))
            .collect();
        write!(f, "V[{}] E[{}] L[{}]", vs.join(" "), es.join(" "), ls.join(" "))
    }
}

/// Small named graphs used throughout tests and examples.
pub mod samples {
    use super::{GraphBuilder, WeightedGraph};

    /// Two vertices joined by three parallel edges `e1, e2, e3`.
    pub fn theta() -> WeightedGraph {
        GraphBuilder::new()
            .vertex("a", 0)
            .vertex("b", 0)
            .edge("e1", "a", "b")
            .edge("e2", "a", "b")
            .edge("e3", "a", "b")
            .build()
            .expect("theta is well formed")
    }

    /// Loops `la` at `a` and `lb` at `b`, joined by the bridge `br`.
    pub fn dumbbell() -> WeightedGraph {
        GraphBuilder::new()
            .vertex("a", 0)
            .vertex("b", 0)
            .edge("la", "a", "a")
            .edge("lb", "b", "b")
            .edge("br", "a", "b")
            .build()
            .expect("dumbbell is well formed")
    }

    /// A single vertex of the given weight with no edges or leaves.
    pub fn point(weight: u32) -> WeightedGraph {
        GraphBuilder::new()
            .vertex("v", weight)
            .build()
            .expect("point is well formed")
    }
}

#[cfg(test)]
mod tests {
    use super::samples::{dumbbell, point, theta};
    use super::*;

    #[test]
    fn degrees_of_named_graphs() {
        let t = theta();
        assert_eq!(t.degree("a").unwrap(), 3);
        assert_eq!(t.degree("b").unwrap(), 3);
        let d = dumbbell();
        assert_eq!(d.degree("a").unwrap(), 3);
        assert_eq!(d.degree("b").unwrap(), 3);
        let tripod = GraphBuilder::new()
            .vertex("v", 0)
            .leaf(1, "v")
            .leaf(2, "v")
            .leaf(3, "v")
            .build()
            .unwrap();
        assert_eq!(tripod.degree("v").unwrap(), 3);
        assert!(matches!(t.degree("zz"), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn stats_examples() {
        let s = theta().stats();
        assert_eq!((s.betti, s.genus), (2, 2));
        let s = dumbbell().stats();
        assert_eq!((s.betti, s.genus), (2, 2));
        let s = point(2).stats();
        assert_eq!((s.betti, s.genus, s.num_components), (0, 2, 1));
    }

    #[test]
    fn regular_tropicalization_examples() {
        assert!(theta().is_regular_tropicalization(2, 0).unwrap());
        assert!(!point(2).is_regular_tropicalization(2, 0).unwrap());
        let one_loop = GraphBuilder::new()
            .vertex("a", 0)
            .vertex("b", 0)
            .edge("la", "a", "a")
            .edge("br", "a", "b")
            .build()
            .unwrap();
        assert_eq!(one_loop.genus(), 1);
        assert!(!one_loop.is_regular_tropicalization(2, 0).unwrap());
        assert!(matches!(
            theta().is_regular_tropicalization(1, 0),
            Err(Error::UnstableRange { .. })
        ));
        assert!(matches!(
            theta().is_regular_tropicalization(0, 2),
            Err(Error::UnstableRange { .. })
        ));
    }

    #[test]
    fn stability_examples() {
        assert!(theta().is_stable());
        assert!(!point(1).is_stable());
        assert!(point(2).is_stable());
        assert!(!point(0).is_stable());
    }

    #[test]
    fn builder_rejects_bad_input() {
        let dup = GraphBuilder::new().vertex("a", 0).vertex("a", 1).build();
        assert!(matches!(dup, Err(Error::DuplicateVertex(_))));
        let dup = GraphBuilder::new()
            .vertex("a", 0)
            .edge("e", "a", "a")
            .edge("e", "a", "a")
            .build();
        assert!(matches!(dup, Err(Error::DuplicateEdge(_))));
        let missing = GraphBuilder::new().vertex("a", 0).edge("e", "a", "b").build();
        assert!(matches!(missing, Err(Error::UnknownVertex(_))));
        let labels = GraphBuilder::new().vertex("a", 0).leaf(2, "a").build();
        assert!(matches!(labels, Err(Error::LeafLabels { .. })));
        let labels = GraphBuilder::new()
            .vertex("a", 0)
            .leaf(1, "a")
            .leaf(1, "a")
            .build();
        assert!(matches!(labels, Err(Error::LeafLabels { .. })));
    }

    #[test]
    fn input_order_does_not_matter() {
        let a = GraphBuilder::new()
            .vertex("b", 0)
            .vertex("a", 0)
            .edge("e3", "b", "a")
            .edge("e1", "a", "b")
            .edge("e2", "a", "b")
            .build()
            .unwrap();
        assert_eq!(a, theta());
    }

    #[test]
    fn natural_order() {
        let mut ids = vec!["e10", "e2", "e1", "a", "e02"];
        ids.sort_by(|a, b| natural_cmp(a, b));
        assert_eq!(ids, vec!["a", "e1", "e02", "e2", "e10"]);
    }

    #[test]
    fn edge_set_helpers() {
        let s = EdgeSet::from_indices([0, 2]);
        assert_eq!(s.len(), 2);
        assert!(s.contains(2) && !s.contains(1));
        assert!(s.is_subset(EdgeSet::full(3)));
        assert_eq!(s.complement(3), EdgeSet::from_indices([1]));
        let all = EdgeSet::subsets_of_size(4, 2);
        assert_eq!(all.len(), 6);
        assert!(all.windows(2).all(|w| w[0].canonical_cmp(w[1]) == Ordering::Less));
    }
}

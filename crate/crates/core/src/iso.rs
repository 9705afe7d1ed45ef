//! Canonical forms, isomorphisms and automorphism groups.
//!
//! Isomorphisms fix leaf labels pointwise and preserve vertex weights. Since
//! edges carry no data beyond their endpoints, a graph up to isomorphism is
//! determined by its vertex weights, leaf attachments and the matrix of edge
//! multiplicities between vertex pairs (loops on the diagonal). The
//! canonical form is the lexicographically least encoding of that data over
//! all vertex orderings reachable by individualization-refinement; every
//! such ordering is explored, so keys are exact invariants.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// Largest vertex count accepted by the isomorphism search.
pub const MAX_ISO_VERTICES: usize = 16;

/// Upper bound on the number of automorphisms materialized as a list.
pub const MAX_LISTED_AUTOMORPHISMS: u128 = 1_000_000;

/// Isomorphism-invariant key of a weighted leaf-labeled multigraph.
///
/// The text form is `W:<weights>/L:<leaf positions>/E:<i-jxm ...>` in
/// canonical vertex order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(String);

impl CanonicalKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn as_bytes(&self) -> &[u8] {
        self.0.as_bytes()
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A leaf-preserving isomorphism between two graphs, by index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Isomorphism {
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
}

impl Isomorphism {
    pub fn identity(g: &WeightedGraph) -> Self {
        Isomorphism {
            vertex_map: (0..g.num_vertices()).collect(),
            edge_map: (0..g.num_edges()).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        is_identity_perm(&self.vertex_map) && is_identity_perm(&self.edge_map)
    }

    /// `self` followed by `then`.
    pub fn compose(&self, then: &Isomorphism) -> Isomorphism {
        Isomorphism {
            vertex_map: self.vertex_map.iter().map(|&v| then.vertex_map[v]).collect(),
            edge_map: self.edge_map.iter().map(|&e| then.edge_map[e]).collect(),
        }
    }

    pub fn inverse(&self) -> Isomorphism {
        Isomorphism {
            vertex_map: invert(&self.vertex_map),
            edge_map: invert(&self.edge_map),
        }
    }

    /// Checks bijectivity, weights, leaf labels and the endpoint condition
    /// `ends(f(e)) = f(ends(e))` edge by edge.
    pub fn verify(&self, a: &WeightedGraph, b: &WeightedGraph) -> bool {
        if self.vertex_map.len() != a.num_vertices()
            || self.edge_map.len() != a.num_edges()
            || a.num_vertices() != b.num_vertices()
            || a.num_edges() != b.num_edges()
            || a.num_leaves() != b.num_leaves()
            || !is_permutation(&self.vertex_map)
            || !is_permutation(&self.edge_map)
        {
            return false;
        }
        let weights = (0..a.num_vertices()).all(|v| a.weight(v) == b.weight(self.vertex_map[v]));
        let leaves = a
            .leaves()
            .iter()
            .zip(b.leaves())
            .all(|(&va, &vb)| self.vertex_map[va] == vb);
        let ends = a.edges().iter().enumerate().all(|(i, e)| {
            let [x, y] = e.ends.map(|v| self.vertex_map[v]);
            b.edges()[self.edge_map[i]].ends == [x.min(y), x.max(y)]
        });
        weights && leaves && ends
    }

    /// Cycle notation over vertex and edge identifiers, e.g. `(a b)(e1 e2)`.
    pub fn cycle_notation(&self, g: &WeightedGraph) -> String {
        let mut out = String::new();
        let vids: Vec<&str> = g.vertices().iter().map(|v| v.id.as_str()).collect();
        let eids: Vec<&str> = g.edges().iter().map(|e| e.id.as_str()).collect();
        write_cycles(&mut out, &self.vertex_map, &vids);
        write_cycles(&mut out, &self.edge_map, &eids);
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

fn write_cycles(out: &mut String, perm: &[usize], names: &[&str]) {
    let mut seen = vec![false; perm.len()];
    for start in 0..perm.len() {
        if seen[start] || perm[start] == start {
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cycle.push(names[x]);
            x = perm[x];
        }
        out.push('(');
        out.push_str(&cycle.join(" "));
        out.push(')');
    }
}

fn is_identity_perm(p: &[usize]) -> bool {
    p.iter().enumerate().all(|(i, &x)| i == x)
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&x| x < p.len() && !std::mem::replace(&mut seen[x], true))
}

fn invert(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

/// Result of the canonical search: the minimal code and every vertex
/// ordering attaining it. `orders[k][i]` is the vertex at position `i`.
#[derive(Clone, Debug)]
struct Labeling {
    code: Vec<u32>,
    orders: Vec<Vec<usize>>,
}

struct Prepared {
    n: usize,
    weights: Vec<u32>,
    /// Edge multiplicities, loops on the diagonal.
    mult: Vec<Vec<u32>>,
    leaves: Vec<usize>,
}

impl Prepared {
    fn new(g: &WeightedGraph) -> Result<Self> {
        let n = g.num_vertices();
        if n > MAX_ISO_VERTICES {
            return Err(Error::TooManyVertices(n));
        }
        let mut mult = vec![vec![0u32; n]; n];
        for e in g.edges() {
            let [a, b] = e.ends;
            mult[a][b] += 1;
            if a != b {
                mult[b][a] += 1;
            }
        }
        Ok(Prepared {
            n,
            weights: g.vertices().iter().map(|v| v.weight).collect(),
            mult,
            leaves: g.leaves().to_vec(),
        })
    }

    fn initial_colors(&self) -> Vec<u32> {
        let sigs: Vec<(u32, u32, u32, Vec<u32>)> = (0..self.n)
            .map(|v| {
                let loops = self.mult[v][v];
                let degree: u32 = self.mult[v].iter().sum::<u32>() + loops;
                let labels: Vec<u32> = self
                    .leaves
                    .iter()
                    .enumerate()
                    .filter(|&(_, &at)| at == v)
                    .map(|(i, _)| i as u32 + 1)
                    .collect();
                (self.weights[v], loops, degree + labels.len() as u32, labels)
            })
            .collect();
        rank(&sigs)
    }

    /// Color refinement to the coarsest equitable partition finer than
    /// `colors`. Cell order is derived from signatures only, so it is
    /// isomorphism invariant.
    fn refine(&self, mut colors: Vec<u32>) -> Vec<u32> {
        let mut classes = count_distinct(&colors);
        loop {
            let sigs: Vec<(u32, Vec<(u32, u32)>)> = (0..self.n)
                .map(|v| {
                    let mut nb: Vec<(u32, u32)> = (0..self.n)
                        .filter(|&u| u != v && self.mult[v][u] > 0)
                        .map(|u| (colors[u], self.mult[v][u]))
                        .collect();
                    nb.sort_unstable();
                    (colors[v], nb)
                })
                .collect();
            let next = rank(&sigs);
            let next_classes = count_distinct(&next);
            if next_classes == classes {
                return next;
            }
            colors = next;
            classes = next_classes;
        }
    }

    fn encode(&self, order: &[usize]) -> Vec<u32> {
        let n = self.n;
        let mut pos = vec![0u32; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i as u32;
        }
        let mut code = Vec::with_capacity(2 + 2 * n + self.leaves.len() + n * (n + 1) / 2);
        code.push(n as u32);
        code.extend(order.iter().map(|&v| self.weights[v]));
        code.push(self.leaves.len() as u32);
        code.extend(self.leaves.iter().map(|&v| pos[v]));
        for i in 0..n {
            for j in i..n {
                code.push(self.mult[order[i]][order[j]]);
            }
        }
        code
    }

    fn search(&self) -> Labeling {
        let mut best = Labeling {
            code: Vec::new(),
            orders: Vec::new(),
        };
        if self.n == 0 {
            best.code = self.encode(&[]);
            best.orders.push(Vec::new());
            return best;
        }
        self.descend(self.initial_colors(), &mut best);
        best
    }

    fn descend(&self, colors: Vec<u32>, best: &mut Labeling) {
        let colors = self.refine(colors);
        let mut counts = vec![0usize; self.n];
        for &c in &colors {
            counts[c as usize] += 1;
        }
        match (0..self.n).find(|&c| counts[c] > 1) {
            None => {
                let mut order = vec![0; self.n];
                for (v, &c) in colors.iter().enumerate() {
                    order[c as usize] = v;
                }
                let code = self.encode(&order);
                if best.orders.is_empty() || code < best.code {
                    best.code = code;
                    best.orders = vec![order];
                } else if code == best.code {
                    best.orders.push(order);
                }
            }
            Some(target) => {
                let target = target as u32;
                for v in (0..self.n).filter(|&v| colors[v] == target) {
                    let split: Vec<u32> = colors
                        .iter()
                        .enumerate()
                        .map(|(x, &c)| 2 * c + u32::from(c == target && x != v))
                        .collect();
                    self.descend(split, best);
                }
            }
        }
    }
}

fn rank<T: Ord + Clone>(sigs: &[T]) -> Vec<u32> {
    let distinct: BTreeSet<&T> = sigs.iter().collect();
    let index: BTreeMap<&T, u32> = distinct
        .into_iter()
        .enumerate()
        .map(|(i, s)| (s, i as u32))
        .collect();
    sigs.iter().map(|s| index[s]).collect()
}

fn count_distinct(colors: &[u32]) -> usize {
    colors.iter().collect::<HashSet<_>>().len()
}

fn render_key(code: &[u32]) -> CanonicalKey {
    let n = code[0] as usize;
    let weights = &code[1..1 + n];
    let nl = code[1 + n] as usize;
    let leaves = &code[2 + n..2 + n + nl];
    let mut rest = code[2 + n + nl..].iter();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i..n {
            let m = *rest.next().expect("code holds the full upper triangle");
            if m > 0 {
                edges.push(format!("{i}-{j}x{m}"));
            }
        }
    }
    let join = |xs: &[u32]| xs.iter().map(u32::to_string).collect::<Vec<_>>().join(".");
    CanonicalKey(format!("W:{}/L:{}/E:{}", join(weights), join(leaves), edges.join(".")))
}

fn labeling(g: &WeightedGraph) -> Result<Labeling> {
    Ok(Prepared::new(g)?.search())
}

pub fn canonical_form(g: &WeightedGraph) -> Result<CanonicalKey> {
    Ok(render_key(&labeling(g)?.code))
}

/// Relabels `g` into canonical position: vertex `vK` is the `K`th vertex of
/// the canonical order and edges `e1..` are sorted by endpoint positions.
/// Isomorphic inputs give identical outputs.
pub fn canonical_graph(g: &WeightedGraph) -> Result<WeightedGraph> {
    let lab = labeling(g)?;
    let order = &lab.orders[0];
    let mut pos = vec![0; g.num_vertices()];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    let weights: Vec<u32> = order.iter().map(|&v| g.weight(v)).collect();
    let mut edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|e| {
            let (a, b) = (pos[e.ends[0]], pos[e.ends[1]]);
            (a.min(b), a.max(b))
        })
        .collect();
    edges.sort_unstable();
    let leaves: Vec<usize> = g.leaves().iter().map(|&v| pos[v]).collect();
    WeightedGraph::from_indices(&weights, &edges, &leaves)
}

fn same_shape(a: &WeightedGraph, b: &WeightedGraph) -> bool {
    let sorted_weights = |g: &WeightedGraph| {
        let mut w: Vec<u32> = g.vertices().iter().map(|v| v.weight).collect();
        w.sort_unstable();
        w
    };
    a.num_vertices() == b.num_vertices()
        && a.num_edges() == b.num_edges()
        && a.num_leaves() == b.num_leaves()
        && sorted_weights(a) == sorted_weights(b)
}

/// Edges grouped by endpoint pair.
fn edge_classes(g: &WeightedGraph) -> BTreeMap<[usize; 2], Vec<usize>> {
    let mut classes: BTreeMap<[usize; 2], Vec<usize>> = BTreeMap::new();
    for (i, e) in g.edges().iter().enumerate() {
        classes.entry(e.ends).or_default().push(i);
    }
    classes
}

/// Extends a vertex bijection to an edge bijection by matching parallel
/// classes in index order.
fn extend_to_edges(a: &WeightedGraph, b: &WeightedGraph, vertex_map: &[usize]) -> Option<Vec<usize>> {
    let target = edge_classes(b);
    let mut edge_map = vec![usize::MAX; a.num_edges()];
    for (ends, members) in edge_classes(a) {
        let [x, y] = ends.map(|v| vertex_map[v]);
        let image = target.get(&[x.min(y), x.max(y)])?;
        if image.len() != members.len() {
            return None;
        }
        for (&e, &f) in members.iter().zip(image) {
            edge_map[e] = f;
        }
    }
    Some(edge_map)
}

/// Some isomorphism `a -> b`, verified before it is returned.
pub fn are_isomorphic(a: &WeightedGraph, b: &WeightedGraph) -> Result<Option<Isomorphism>> {
    if !same_shape(a, b) {
        return Ok(None);
    }
    let (la, lb) = (labeling(a)?, labeling(b)?);
    if la.code != lb.code {
        return Ok(None);
    }
    let (oa, ob) = (&la.orders[0], &lb.orders[0]);
    let mut vertex_map = vec![0; a.num_vertices()];
    for (&va, &vb) in oa.iter().zip(ob) {
        vertex_map[va] = vb;
    }
    let edge_map = extend_to_edges(a, b, &vertex_map)
        .ok_or_else(|| Error::Integrity("equal canonical codes but edge classes differ".into()))?;
    let iso = Isomorphism { vertex_map, edge_map };
    if !iso.verify(a, b) {
        return Err(Error::Integrity("constructed isomorphism fails the endpoint check".into()));
    }
    Ok(Some(iso))
}

/// Vertex permutations that extend to automorphisms, sorted.
fn vertex_automorphisms(g: &WeightedGraph) -> Result<Vec<Vec<usize>>> {
    let lab = labeling(g)?;
    let base = &lab.orders[0];
    let mut perms: Vec<Vec<usize>> = lab
        .orders
        .iter()
        .map(|order| {
            let mut sigma = vec![0; g.num_vertices()];
            for (&from, &to) in base.iter().zip(order) {
                sigma[from] = to;
            }
            sigma
        })
        .collect();
    perms.sort();
    perms.dedup();
    Ok(perms)
}

/// Group orders without listing elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AutCounts {
    pub order: u128,
    pub edge_action_order: u128,
    pub kernel_size: u128,
}

fn factorial(k: usize) -> u128 {
    (1..=k as u128).product()
}

pub fn aut_counts(g: &WeightedGraph) -> Result<AutCounts> {
    let sigmas = vertex_automorphisms(g)?;
    let classes = edge_classes(g);
    let per_sigma: u128 = classes.values().map(|m| factorial(m.len())).product();
    let kernel = sigmas
        .iter()
        .filter(|sigma| {
            classes.keys().all(|&[a, b]| {
                let (x, y) = (sigma[a], sigma[b]);
                [x.min(y), x.max(y)] == [a, b]
            })
        })
        .count() as u128;
    let order = sigmas.len() as u128 * per_sigma;
    Ok(AutCounts {
        order,
        edge_action_order: order / kernel,
        kernel_size: kernel,
    })
}

/// Every bijection of `items` onto `image`, as lists aligned with `items`.
fn bijections(image: &[usize]) -> Vec<Vec<usize>> {
    fn rec(rest: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            cur.push(x);
            rec(rest, cur, out);
            cur.pop();
            rest.insert(i, x);
        }
    }
    let mut out = Vec::new();
    rec(&mut image.to_vec(), &mut Vec::new(), &mut out);
    out
}

/// All automorphisms lying over the vertex permutation `sigma`.
fn lifts(g: &WeightedGraph, sigma: &[usize], classes: &BTreeMap<[usize; 2], Vec<usize>>) -> Vec<Isomorphism> {
    let mut partial = vec![vec![usize::MAX; g.num_edges()]];
    for (&[a, b], members) in classes {
        let (x, y) = (sigma[a], sigma[b]);
        let image = &classes[&[x.min(y), x.max(y)]];
        let choices = bijections(image);
        partial = partial
            .into_iter()
            .flat_map(|em| {
                choices.iter().map(move |choice| {
                    let mut em = em.clone();
                    for (&e, &f) in members.iter().zip(choice) {
                        em[e] = f;
                    }
                    em
                })
            })
            .collect();
    }
    partial
        .into_iter()
        .map(|edge_map| Isomorphism {
            vertex_map: sigma.to_vec(),
            edge_map,
        })
        .collect()
}

/// The automorphism group with its induced action on edges.
#[derive(Clone, Debug)]
pub struct AutGroup {
    /// All automorphisms, sorted.
    pub elements: Vec<Isomorphism>,
    /// Distinct edge permutations induced by the elements, sorted.
    pub edge_action: Vec<Vec<usize>>,
    /// Number of elements inducing the identity on edges.
    pub kernel_size: usize,
}

impl AutGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// A generating set, chosen greedily in element order.
    pub fn generators(&self) -> Vec<Isomorphism> {
        let mut gens: Vec<Isomorphism> = Vec::new();
        let mut span: HashSet<Isomorphism> = HashSet::new();
        if let Some(id) = self.elements.iter().find(|e| e.is_identity()) {
            span.insert(id.clone());
        }
        for el in &self.elements {
            if span.contains(el) {
                continue;
            }
            gens.push(el.clone());
            let mut queue: VecDeque<Isomorphism> = span.iter().cloned().collect();
            while let Some(x) = queue.pop_front() {
                for gen in &gens {
                    let y = x.compose(gen);
                    if span.insert(y.clone()) {
                        queue.push_back(y);
                    }
                }
            }
        }
        gens
    }
}

pub fn automorphisms(g: &WeightedGraph) -> Result<AutGroup> {
    let counts = aut_counts(g)?;
    if counts.order > MAX_LISTED_AUTOMORPHISMS {
        return Err(Error::GroupTooLarge(counts.order));
    }
    let classes = edge_classes(g);
    let mut elements: Vec<Isomorphism> = vertex_automorphisms(g)?
        .iter()
        .flat_map(|sigma| lifts(g, sigma, &classes))
        .collect();
    elements.sort();
    if let Some(bad) = elements.iter().find(|el| !el.verify(g, g)) {
        return Err(Error::Integrity(format!("non-automorphism produced: {bad:?}")));
    }
    let edge_action: BTreeSet<Vec<usize>> = elements.iter().map(|el| el.edge_map.clone()).collect();
    let kernel_size = elements.iter().filter(|el| is_identity_perm(&el.edge_map)).count();
    let group = AutGroup {
        edge_action: edge_action.into_iter().collect(),
        kernel_size,
        elements,
    };
    if group.order() as u128 != counts.order || group.edge_action.len() * kernel_size != group.order() {
        return Err(Error::Integrity("automorphism counts disagree".into()));
    }
    Ok(group)
}

/// Distinct edge bijections `E(a) -> E(b)` induced by isomorphisms `a -> b`,
/// sorted. Empty when the graphs are not isomorphic.
pub fn edge_isomorphisms(a: &WeightedGraph, b: &WeightedGraph) -> Result<Vec<Vec<usize>>> {
    let Some(iso) = are_isomorphic(a, b)? else {
        return Ok(Vec::new());
    };
    let classes = edge_classes(a);
    let mut out: BTreeSet<Vec<usize>> = BTreeSet::new();
    for sigma in vertex_automorphisms(a)? {
        for aut in lifts(a, &sigma, &classes) {
            out.insert(aut.compose(&iso).edge_map);
        }
    }
    Ok(out.into_iter().collect())
}

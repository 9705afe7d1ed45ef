//! Independent oracles. Nothing here calls the library's isomorphism,
//! canonical form or generator code.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap, HashSet};

use itertools::Itertools;
use num_rational::BigRational;
use tropmod_core::graph::samples::{dumbbell, theta};
use tropmod_core::WeightedGraph;

/// Upper-triangle multiplicity matrix, weights and leaf attachments under a
/// vertex relabeling `perm` (old index to new index).
fn encode(g: &WeightedGraph, perm: &[usize]) -> Vec<u32> {
    let v = g.num_vertices();
    let mut weights = vec![0; v];
    for (old, &new) in perm.iter().enumerate() {
        weights[new] = g.weight(old);
    }
    let mut mult = vec![0u32; v * v];
    for e in g.edges() {
        let (a, b) = (perm[e.ends[0]], perm[e.ends[1]]);
        mult[a.min(b) * v + a.max(b)] += 1;
    }
    let mut code = weights;
    code.extend(g.leaves().iter().map(|&l| perm[l] as u32));
    code.extend(mult);
    code
}

/// Minimum encoding over all `|V|!` relabelings.
pub fn brute_canonical(g: &WeightedGraph) -> Vec<u32> {
    let v = g.num_vertices();
    let mut head = vec![v as u32, g.num_edges() as u32, g.num_leaves() as u32];
    let best = (0..v)
        .permutations(v)
        .map(|perm| encode(g, &perm))
        .min()
        .unwrap_or_default();
    head.extend(best);
    head
}

/// Isomorphism by exhaustive search over vertex bijections; edges are then
/// matched class by class, so equal multiplicities suffice.
pub fn brute_isomorphic(a: &WeightedGraph, b: &WeightedGraph) -> bool {
    if (a.num_vertices(), a.num_edges(), a.num_leaves()) != (b.num_vertices(), b.num_edges(), b.num_leaves()) {
        return false;
    }
    let identity: Vec<usize> = (0..b.num_vertices()).collect();
    let target = encode(b, &identity);
    (0..a.num_vertices())
        .permutations(a.num_vertices())
        .any(|perm| encode(a, &perm) == target)
}

/// Every `(vertex bijection, edge bijection)` pair commuting with endpoints,
/// weights and leaves. Edge bijections range over all of `S_E`.
pub fn brute_automorphisms(g: &WeightedGraph) -> Vec<(Vec<usize>, Vec<usize>)> {
    let (v, m) = (g.num_vertices(), g.num_edges());
    let mut out = Vec::new();
    for sigma in (0..v).permutations(v) {
        let fixes = (0..v).all(|x| g.weight(x) == g.weight(sigma[x]))
            && g.leaves().iter().all(|&l| sigma[l] == l);
        if !fixes {
            continue;
        }
        for tau in (0..m).permutations(m) {
            let ok = g.edges().iter().enumerate().all(|(i, e)| {
                let [x, y] = e.ends.map(|p| sigma[p]);
                g.edges()[tau[i]].ends == [x.min(y), x.max(y)]
            });
            if ok {
                out.push((sigma.clone(), tau));
            }
        }
    }
    out
}

/// Genus recomputed from scratch: `|E| - |V| + components + Σ w`.
pub fn scratch_genus(g: &WeightedGraph) -> usize {
    let v = g.num_vertices();
    let mut parent: Vec<usize> = (0..v).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for e in g.edges() {
        let (a, b) = (find(&mut parent, e.ends[0]), find(&mut parent, e.ends[1]));
        parent[a] = b;
    }
    let comps = (0..v).filter(|&x| find(&mut parent, x) == x).count();
    let w: u32 = g.vertices().iter().map(|x| x.weight).sum();
    g.num_edges() + comps - v + w as usize
}

fn connected(v: usize, edges: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; v];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &(a, b) in edges {
            for (p, q) in [(a, b), (b, a)] {
                if p == x && !seen[q] {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Set partitions of `0..n` into blocks of size at most `cap`, as restricted
/// growth strings with at most `max_blocks` blocks.
fn leaf_partitions(n: usize, cap: usize, max_blocks: usize) -> Vec<Vec<usize>> {
    fn rec(i: usize, n: usize, cap: usize, max: usize, cur: &mut Vec<usize>, sizes: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..=sizes.len() {
            if b == sizes.len() {
                if b == max {
                    continue;
                }
                sizes.push(0);
            }
            if sizes[b] < cap {
                sizes[b] += 1;
                cur.push(b);
                rec(i + 1, n, cap, max, cur, sizes, out);
                cur.pop();
                sizes[b] -= 1;
            }
            if sizes[b] == 0 {
                sizes.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(0, n, cap, max_blocks, &mut Vec::new(), &mut Vec::new(), &mut out);
    out
}

fn matchings(slots: &[usize], cur: &mut Vec<(usize, usize)>, out: &mut HashSet<Vec<(usize, usize)>>) {
    if slots.is_empty() {
        let mut edges = cur.clone();
        edges.sort_unstable();
        out.insert(edges);
        return;
    }
    let first = slots[0];
    for j in 1..slots.len() {
        let other = slots[j];
        let rest: Vec<usize> = slots[1..].iter().enumerate().filter(|&(k, _)| k + 1 != j).map(|(_, &s)| s).collect();
        cur.push((first.min(other), first.max(other)));
        matchings(&rest, cur, out);
        cur.pop();
    }
}

/// Raw pairing-model census of regular graphs of type `(g, n)`.
///
/// Vertices are unlabeled, so leaves are distributed as a set partition
/// over the first vertices; then every perfect matching of the remaining
/// `3V - n` half-edges is formed, connected results are kept, and classes
/// are separated by [`brute_canonical`]. Returns `None` above `budget`
/// raw matchings.
pub fn pairing_census(genus: usize, leaves: usize, budget: u64) -> Option<usize> {
    let v = 2 * genus + leaves - 2;
    let cap = if v == 1 { 3 } else { 2 };
    let parts = leaf_partitions(leaves, cap, v);
    let slots = 3 * v - leaves;
    let per_part: u64 = (1..slots as u64).step_by(2).product();
    if per_part.saturating_mul(parts.len() as u64) > budget {
        return None;
    }
    let mut classes: HashSet<Vec<u32>> = HashSet::new();
    for part in parts {
        let mut free = vec![3; v];
        for &b in &part {
            free[b] -= 1;
        }
        let half_edges: Vec<usize> = (0..v).flat_map(|x| std::iter::repeat_n(x, free[x])).collect();
        let mut labeled = HashSet::new();
        matchings(&half_edges, &mut Vec::new(), &mut labeled);
        for edges in labeled {
            if !connected(v, &edges) {
                continue;
            }
            let g = WeightedGraph::from_indices(&vec![0; v], &edges, &part).unwrap();
            classes.insert(brute_canonical(&g));
        }
    }
    Some(classes.len())
}

/// `(2n - 5)!!`, the number of trivalent trees with `n` labeled leaves.
pub fn tree_count(n: usize) -> u64 {
    (1..=(2 * n as u64 - 5)).step_by(2).product()
}

/// Stable weighted graphs of type `(g, n)` by direct exhaustive
/// generation: weight vectors, multisets of vertex pairs, leaf placements.
pub fn direct_stable_census(genus: usize, leaves: usize) -> usize {
    let mut classes: HashSet<Vec<u32>> = HashSet::new();
    for v in 1..=(2 * genus + leaves - 2) {
        for weights in weight_vectors(v, genus) {
            let total: usize = weights.iter().map(|&w| w as usize).sum();
            let e = genus - total + v - 1;
            if e > 3 * genus + leaves - 3 {
                continue;
            }
            let pairs: Vec<(usize, usize)> = (0..v).flat_map(|a| (a..v).map(move |b| (a, b))).collect();
            for edges in pairs.iter().copied().combinations_with_replacement(e) {
                if !connected(v, &edges) {
                    continue;
                }
                for at in (0..leaves).map(|_| 0..v).multi_cartesian_product() {
                    let g = WeightedGraph::from_indices(&weights, &edges, &at).unwrap();
                    if g.is_stable() {
                        classes.insert(brute_canonical(&g));
                    }
                }
                if leaves == 0 {
                    let g = WeightedGraph::from_indices(&weights, &edges, &[]).unwrap();
                    if g.is_stable() {
                        classes.insert(brute_canonical(&g));
                    }
                }
            }
        }
    }
    classes.len()
}

fn weight_vectors(v: usize, max_total: usize) -> Vec<Vec<u32>> {
    (0..v)
        .map(|_| 0..=max_total as u32)
        .multi_cartesian_product()
        .filter(|w| w.windows(2).all(|p| p[0] >= p[1]) && w.iter().sum::<u32>() as usize <= max_total)
        .collect()
}

/// Whether two metric graphs, each with lengths indexed by edge, admit a
/// weight-, leaf- and length-preserving isomorphism.
pub fn metric_isomorphic(a: &WeightedGraph, la: &[BigRational], b: &WeightedGraph, lb: &[BigRational]) -> bool {
    if (a.num_vertices(), a.num_edges(), a.num_leaves()) != (b.num_vertices(), b.num_edges(), b.num_leaves()) {
        return false;
    }
    let classes = |g: &WeightedGraph, l: &[BigRational], perm: &[usize]| {
        let mut out: BTreeMap<(usize, usize), Vec<BigRational>> = BTreeMap::new();
        for (i, e) in g.edges().iter().enumerate() {
            let (x, y) = (perm[e.ends[0]], perm[e.ends[1]]);
            out.entry((x.min(y), x.max(y))).or_default().push(l[i].clone());
        }
        for v in out.values_mut() {
            v.sort();
        }
        out
    };
    let identity: Vec<usize> = (0..b.num_vertices()).collect();
    let target = classes(b, lb, &identity);
    (0..a.num_vertices()).permutations(a.num_vertices()).any(|perm| {
        (0..a.num_vertices()).all(|x| a.weight(x) == b.weight(perm[x]))
            && a.leaves().iter().zip(b.leaves()).all(|(&x, &y)| perm[x] == y)
            && classes(a, la, &perm) == target
    })
}

/// Small corpus used by several suites: every regular graph up to six edges
/// plus assorted weighted and disconnected graphs.
pub fn corpus() -> Vec<WeightedGraph> {
    let mut out = vec![theta(), dumbbell()];
    let extra: &[(&[u32], &[(usize, usize)], &[usize])] = &[
        (&[2], &[], &[]),
        (&[1], &[(0, 0)], &[0]),
        (&[0, 1], &[(0, 1), (0, 0)], &[0]),
        (&[1, 1], &[(0, 1)], &[]),
        (&[0, 0, 1], &[(0, 1), (1, 2), (0, 2), (0, 0)], &[1, 2]),
        (&[0, 0], &[(0, 1), (0, 1)], &[0, 1]),
        (&[0, 0], &[(0, 0), (0, 1)], &[1, 1]),
        (&[0, 0, 0], &[(0, 1), (1, 2)], &[0, 0, 2, 2]),
        (&[1, 0, 0], &[(0, 1), (1, 2), (2, 2)], &[1]),
        (&[0, 0, 0, 0], &[(0, 1), (0, 1), (2, 3), (2, 3)], &[]),
    ];
    for (w, e, l) in extra {
        out.push(WeightedGraph::from_indices(w, e, l).unwrap());
    }
    out
}

/// Relabels a graph by a vertex permutation and reverses its edge order.
pub fn shuffled(g: &WeightedGraph, perm: &[usize]) -> WeightedGraph {
    let weights: Vec<u32> = {
        let mut w = vec![0; g.num_vertices()];
        for (old, &new) in perm.iter().enumerate() {
            w[new] = g.weight(old);
        }
        w
    };
    let edges: Vec<(usize, usize)> = g.edges().iter().rev().map(|e| (perm[e.ends[1]], perm[e.ends[0]])).collect();
    let leaves: Vec<usize> = g.leaves().iter().map(|&l| perm[l]).collect();
    WeightedGraph::from_indices(&weights, &edges, &leaves).unwrap()
}

/// Graphs grouped by a cheap invariant, to keep pairwise oracles small.
pub fn bucket(graphs: &[WeightedGraph]) -> HashMap<(usize, usize, usize, usize), Vec<&WeightedGraph>> {
    let mut out: HashMap<_, Vec<_>> = HashMap::new();
    for g in graphs {
        out.entry((g.num_vertices(), g.num_edges(), g.num_leaves(), g.genus())).or_default().push(g);
    }
    out
}

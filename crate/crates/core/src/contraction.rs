//! Weighted contraction of edge sets.
//!
//! Contracting `Q` removes its edges and identifies their endpoints. Each
//! vertex of the result stands for one connected component of the spanning
//! subgraph `(V, Q)` and receives the Betti number of that component plus the
//! weights collapsed into it, which keeps the genus unchanged. A loop in `Q`
//! is simply deleted and adds one to the weight of its vertex.

use crate::error::{Error, Result};
use crate::graph::{EdgeSet, Vertex, WeightedGraph};
use crate::iso::{are_isomorphic, canonical_form, Isomorphism};

/// A contraction together with its witnessing maps.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub source: WeightedGraph,
    pub q: EdgeSet,
    pub result: WeightedGraph,
    /// Source vertex index to result vertex index (surjective).
    pub vertex_map: Vec<usize>,
    /// Source edge index to result edge index; `None` exactly on `q`.
    pub edge_map: Vec<Option<usize>>,
    /// First Betti number of the preimage of each result vertex.
    pub preimage_betti: Vec<usize>,
}

/// Betti numbers on both sides of a contraction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiDecomposition {
    /// `b1` of the contracted graph.
    pub contracted: usize,
    /// `b1` of the subgraph formed by the contracted edges.
    pub removed: usize,
    /// `b1` of the preimage of each result vertex, by result vertex index.
    pub per_vertex: Vec<usize>,
}

pub fn contract(g: &WeightedGraph, q: EdgeSet) -> Result<Contraction> {
    if !q.is_subset(g.all_edges()) {
        let stray = q.difference(g.all_edges()).iter().next().unwrap_or(0);
        return Err(Error::UnknownEdge(format!("#{stray}")));
    }
    let (k, comp) = g.components_of(q);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (v, &c) in comp.iter().enumerate() {
        members[c].push(v);
    }
    let mut internal = vec![0usize; k];
    for i in q.iter() {
        internal[comp[g.edges()[i].ends[0]]] += 1;
    }
    let betti: Vec<usize> = (0..k).map(|c| internal[c] + 1 - members[c].len()).collect();

    let vertices: Vec<Vertex> = (0..k)
        .map(|c| {
            let ids: Vec<&str> = members[c].iter().map(|&v| g.vertices()[v].id.as_str()).collect();
            let collapsed: u32 = members[c].iter().map(|&v| g.weight(v)).sum();
            Vertex {
                id: ids.join("+"),
                weight: collapsed + betti[c] as u32,
            }
        })
        .collect();
    let ids: Vec<String> = vertices.iter().map(|v| v.id.clone()).collect();
    let edges: Vec<(String, usize, usize)> = g
        .edges()
        .iter()
        .enumerate()
        .filter(|&(i, _)| !q.contains(i))
        .map(|(_, e)| (e.id.clone(), comp[e.ends[0]], comp[e.ends[1]]))
        .collect();
    let leaves: Vec<usize> = g.leaves().iter().map(|&v| comp[v]).collect();
    let result = WeightedGraph::from_parts(vertices, edges, leaves)?;

    let position: Vec<usize> = ids
        .iter()
        .map(|id| result.vertex_index(id))
        .collect::<Result<_>>()?;
    let vertex_map: Vec<usize> = comp.iter().map(|&c| position[c]).collect();
    let mut preimage_betti = vec![0; k];
    for c in 0..k {
        preimage_betti[position[c]] = betti[c];
    }
    let edge_map: Vec<Option<usize>> = g
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| {
            if q.contains(i) {
                Ok(None)
            } else {
                result.edge_index(&e.id).map(Some)
            }
        })
        .collect::<Result<_>>()?;

    let c = Contraction {
        source: g.clone(),
        q,
        result,
        vertex_map,
        edge_map,
        preimage_betti,
    };
    if c.result.genus() != g.genus() {
        return Err(Error::Integrity(format!(
            "contraction changed genus from {} to {}",
            g.genus(),
            c.result.genus()
        )));
    }
    betti_decomposition(&c)?;
    Ok(c)
}

/// [`contract`] with edges named by identifier.
pub fn contract_ids<S: AsRef<str>>(g: &WeightedGraph, ids: &[S]) -> Result<Contraction> {
    contract(g, g.edge_set(ids)?)
}

impl Contraction {
    /// Image in the result of a set of surviving source edges.
    pub fn image_of(&self, r: EdgeSet) -> EdgeSet {
        EdgeSet::from_indices(r.iter().filter_map(|i| self.edge_map.get(i).copied().flatten()))
    }

    /// Leaf labels are carried over unchanged.
    pub fn leaf_map(&self) -> Vec<(u32, u32)> {
        (1..=self.source.num_leaves() as u32).map(|l| (l, l)).collect()
    }
}

/// Checks both Betti identities of a contraction: the per-vertex
/// decomposition of the contracted subgraph, and additivity
/// `b1(source) = b1(result) + b1(contracted subgraph)`.
pub fn betti_decomposition(c: &Contraction) -> Result<BettiDecomposition> {
    let removed = c.source.betti_of(c.q);
    let per_vertex_sum: usize = c.preimage_betti.iter().sum();
    if removed != per_vertex_sum {
        return Err(Error::Integrity(format!(
            "contracted subgraph has b1 = {removed} but preimages sum to {per_vertex_sum}"
        )));
    }
    let contracted = c.result.betti();
    if c.source.betti() != contracted + removed {
        return Err(Error::Integrity(format!(
            "b1 not additive: {} != {} + {}",
            c.source.betti(),
            contracted,
            removed
        )));
    }
    Ok(BettiDecomposition {
        contracted,
        removed,
        per_vertex: c.preimage_betti.clone(),
    })
}

/// Finds `q` with `contract(b, q).result` isomorphic to `a`, if `a ⪯ b`.
///
/// A witness must remove exactly `|E(b)| - |E(a)|` edges, so only subsets of
/// that size are scanned, in ascending order of their sorted edge ids. The
/// isomorphism maps the contracted graph onto `a`.
pub fn is_weighted_contraction_of(
    a: &WeightedGraph,
    b: &WeightedGraph,
) -> Result<Option<(EdgeSet, Isomorphism)>> {
    if a.num_leaves() != b.num_leaves() || a.num_edges() > b.num_edges() || a.genus() != b.genus() {
        return Ok(None);
    }
    let target = canonical_form(a)?;
    for q in EdgeSet::subsets_of_size(b.num_edges(), b.num_edges() - a.num_edges()) {
        let c = contract(b, q)?;
        if c.result.num_vertices() != a.num_vertices() || canonical_form(&c.result)? != target {
            continue;
        }
        let iso = are_isomorphic(&c.result, a)?
            .ok_or_else(|| Error::Integrity("equal canonical keys without an isomorphism".into()))?;
        return Ok(Some((q, iso)));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::samples::{dumbbell, point, theta};

    #[test]
    fn contract_one_theta_edge() {
        let c = contract_ids(&theta(), &["e1"]).unwrap();
        let r = &c.result;
        assert_eq!(r.num_vertices(), 1);
        assert_eq!(r.num_edges(), 2);
        assert!(r.edges().iter().all(|e| e.is_loop()));
        assert_eq!(r.weight(0), 0);
        assert_eq!(r.vertices()[0].id, "a+b");
    }

    #[test]
    fn contract_two_theta_edges() {
        let c = contract_ids(&theta(), &["e1", "e2"]).unwrap();
        assert_eq!(c.result.num_vertices(), 1);
        assert_eq!(c.result.num_edges(), 1);
        assert_eq!(c.result.weight(0), 1);
        let d = betti_decomposition(&c).unwrap();
        assert_eq!(d, BettiDecomposition { contracted: 1, removed: 1, per_vertex: vec![1] });
    }

    #[test]
    fn empty_contraction_is_identity() {
        for g in [theta(), dumbbell()] {
            let c = contract(&g, EdgeSet::EMPTY).unwrap();
            assert_eq!(c.result, g);
            assert_eq!(c.vertex_map, vec![0, 1]);
        }
    }

    #[test]
    fn dumbbell_bridge_and_full() {
        let c = contract_ids(&dumbbell(), &["br"]).unwrap();
        let d = betti_decomposition(&c).unwrap();
        assert_eq!((d.contracted, d.removed), (2, 0));
        let full = contract(&dumbbell(), dumbbell().all_edges()).unwrap();
        let d = betti_decomposition(&full).unwrap();
        assert_eq!((d.contracted, d.removed), (0, 2));
        assert_eq!(full.result.weight(0), 2);
    }

    #[test]
    fn loop_contraction_adds_weight() {
        let c = contract_ids(&dumbbell(), &["la"]).unwrap();
        let a = c.result.vertex_index("a").unwrap();
        assert_eq!(c.result.weight(a), 1);
        assert_eq!(c.result.num_edges(), 2);
    }

    #[test]
    fn unknown_edge_is_rejected() {
        assert!(matches!(contract_ids(&theta(), &["nope"]), Err(Error::UnknownEdge(_))));
        assert!(matches!(contract(&theta(), EdgeSet::from_indices([5])), Err(Error::UnknownEdge(_))));
    }

    #[test]
    fn contraction_order_examples() {
        let (q, _) = is_weighted_contraction_of(&point(2), &theta()).unwrap().unwrap();
        assert_eq!(q, theta().all_edges());
        assert!(is_weighted_contraction_of(&theta(), &dumbbell()).unwrap().is_none());
        let (q, iso) = is_weighted_contraction_of(&theta(), &theta()).unwrap().unwrap();
        assert!(q.is_empty());
        assert!(iso.verify(&theta(), &theta()));
    }

    #[test]
    fn maps_are_consistent() {
        let g = dumbbell();
        for mask in 0..8u64 {
            let c = contract(&g, EdgeSet(mask)).unwrap();
            for (i, e) in g.edges().iter().enumerate() {
                match c.edge_map[i] {
                    None => assert!(c.q.contains(i)),
                    Some(j) => {
                        let [x, y] = e.ends.map(|v| c.vertex_map[v]);
                        assert_eq!(c.result.edges()[j].ends, [x.min(y), x.max(y)]);
                    }
                }
            }
            for (l, &v) in g.leaves().iter().enumerate() {
                assert_eq!(c.result.leaves()[l], c.vertex_map[v]);
            }
        }
    }
}

//! Generation of regular tropicalizations and stable weighted graphs.
//!
//! Regular graphs of type `(g, n)` have `2g - 2 + n` trivalent vertices and
//! `3g - 3 + n` edges. Two independent generators are provided: a half-edge
//! pairing with symmetry breaking, and a growth procedure that builds each
//! graph from smaller types. Stable weighted graphs are exactly the weighted
//! contractions of regular ones, and are generated that way.
//!
//! All results are one representative per isomorphism class, relabeled into
//! canonical position and sorted by canonical key.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::contraction::contract;
use crate::error::{Error, Result};
use crate::graph::{check_stable_range, EdgeSet, WeightedGraph};
use crate::iso::{canonical_form, canonical_graph, CanonicalKey};
use crate::limits::Limits;

/// `(vertices, edges)` of a regular graph of type `(g, n)`.
pub fn regular_shape(genus: u32, leaves: u32) -> Result<(usize, usize)> {
    check_stable_range(genus, leaves)?;
    let (g, n) = (genus as usize, leaves as usize);
    Ok((2 * g + n - 2, 3 * g + n - 3))
}

type Classes = BTreeMap<CanonicalKey, WeightedGraph>;

fn insert_class(out: &mut Classes, g: WeightedGraph) -> Result<()> {
    let key = canonical_form(&g)?;
    if let Entry::Vacant(slot) = out.entry(key) {
        slot.insert(canonical_graph(&g)?);
    }
    Ok(())
}

fn check_all_regular(classes: &Classes, genus: u32, leaves: u32) -> Result<()> {
    for g in classes.values() {
        if !g.is_regular_tropicalization(genus, leaves)? {
            return Err(Error::Integrity(format!("generated a non-regular graph:\n{g}")));
        }
    }
    Ok(())
}

/// [`enumerate_regular_with`] under [`Limits::from_env`].
pub fn enumerate_regular(genus: u32, leaves: u32) -> Result<Vec<WeightedGraph>> {
    enumerate_regular_with(genus, leaves, &Limits::from_env())
}

/// All regular tropicalizations of type `(g, n)` by half-edge pairing.
pub fn enumerate_regular_with(genus: u32, leaves: u32, limits: &Limits) -> Result<Vec<WeightedGraph>> {
    let (v, e) = regular_shape(genus, leaves)?;
    limits.check_generation(e)?;
    let mut state = Pairing {
        num_vertices: v,
        num_leaves: leaves as usize,
        free: vec![3; v],
        leaf_count: vec![0; v],
        touched: 0,
        edges: Vec::with_capacity(e),
        leaves: Vec::with_capacity(leaves as usize),
    };
    let mut out = Classes::new();
    state.place_leaves(&mut out)?;
    check_all_regular(&out, genus, leaves)?;
    Ok(out.into_values().collect())
}

/// Partial pairing. Vertices `0..touched` have been used; the rest are
/// interchangeable, so only the first of them is ever chosen.
struct Pairing {
    num_vertices: usize,
    num_leaves: usize,
    free: Vec<u8>,
    leaf_count: Vec<u8>,
    touched: usize,
    edges: Vec<(usize, usize)>,
    leaves: Vec<usize>,
}

impl Pairing {
    fn place_leaves(&mut self, out: &mut Classes) -> Result<()> {
        if self.leaves.len() == self.num_leaves {
            return self.pair_edges(out);
        }
        let fresh = (self.touched < self.num_vertices).then_some(self.touched);
        for v in (0..self.touched).chain(fresh) {
            if self.free[v] == 0 || (self.leaf_count[v] == 2 && self.num_vertices > 1) {
                continue;
            }
            let old_touched = self.touched;
            self.touched = self.touched.max(v + 1);
            self.free[v] -= 1;
            self.leaf_count[v] += 1;
            self.leaves.push(v);
            self.place_leaves(out)?;
            self.leaves.pop();
            self.leaf_count[v] -= 1;
            self.free[v] += 1;
            self.touched = old_touched;
        }
        Ok(())
    }

    fn pair_edges(&mut self, out: &mut Classes) -> Result<()> {
        let Some(u) = (0..self.num_vertices).find(|&v| self.free[v] > 0) else {
            let g = WeightedGraph::from_indices(&vec![0; self.num_vertices], &self.edges, &self.leaves)?;
            if g.is_connected() {
                insert_class(out, g)?;
            }
            return Ok(());
        };
        if u >= self.touched && self.touched > 0 {
            // everything touched so far is saturated: the result is disconnected
            return Ok(());
        }
        let old_touched = self.touched;
        self.touched = self.touched.max(u + 1);
        let fresh = (self.touched < self.num_vertices).then_some(self.touched);
        let partners: Vec<usize> = (u..self.touched)
            .filter(|&v| if v == u { self.free[u] >= 2 } else { self.free[v] > 0 })
            .chain(fresh)
            .collect();
        for v in partners {
            let inner_touched = self.touched;
            self.touched = self.touched.max(v + 1);
            self.free[u] -= 1;
            self.free[v] -= 1;
            self.edges.push((u, v));
            self.pair_edges(out)?;
            self.edges.pop();
            self.free[v] += 1;
            self.free[u] += 1;
            self.touched = inner_touched;
        }
        self.touched = old_touched;
        Ok(())
    }
}

/// Regular graph under construction in the growth generator.
#[derive(Clone)]
struct Skeleton {
    num_vertices: usize,
    edges: Vec<(usize, usize)>,
    leaves: Vec<usize>,
}

impl Skeleton {
    fn from_graph(g: &WeightedGraph) -> Self {
        Skeleton {
            num_vertices: g.num_vertices(),
            edges: g.edges().iter().map(|e| (e.ends[0], e.ends[1])).collect(),
            leaves: g.leaves().to_vec(),
        }
    }

    fn build(&self) -> Result<WeightedGraph> {
        WeightedGraph::from_indices(&vec![0; self.num_vertices], &self.edges, &self.leaves)
    }
}

/// [`enumerate_regular_by_growth_with`] under [`Limits::from_env`].
pub fn enumerate_regular_by_growth(genus: u32, leaves: u32) -> Result<Vec<WeightedGraph>> {
    enumerate_regular_by_growth_with(genus, leaves, &Limits::from_env())
}

/// All regular tropicalizations of type `(g, n)`, grown from smaller types.
///
/// A new last leaf is attached by subdividing an edge or by sprouting it
/// next to an existing leaf. Types that cannot be reached that way are made
/// from type `(g - 1, n + 2)` by joining its last two leaves into an edge.
pub fn enumerate_regular_by_growth_with(genus: u32, leaves: u32, limits: &Limits) -> Result<Vec<WeightedGraph>> {
    let (_, e) = regular_shape(genus, leaves)?;
    limits.check_generation(e)?;
    let out = grow(genus, leaves)?;
    check_all_regular(&out, genus, leaves)?;
    Ok(out.into_values().collect())
}

fn grow(genus: u32, leaves: u32) -> Result<Classes> {
    let mut out = Classes::new();
    if (genus, leaves) == (0, 3) {
        insert_class(&mut out, WeightedGraph::from_indices(&[0], &[], &[0, 0, 0])?)?;
        return Ok(out);
    }
    let smaller_stable = leaves > 0 && check_stable_range(genus, leaves - 1).is_ok();
    if smaller_stable {
        for g in grow(genus, leaves - 1)?.values() {
            let s = Skeleton::from_graph(g);
            let c = s.num_vertices;
            for (i, &(a, b)) in s.edges.iter().enumerate() {
                let mut t = s.clone();
                t.num_vertices += 1;
                t.edges[i] = (a, c);
                t.edges.push((c, b));
                t.leaves.push(c);
                insert_class(&mut out, t.build()?)?;
            }
            for i in 0..s.leaves.len() {
                let mut t = s.clone();
                t.num_vertices += 1;
                t.edges.push((t.leaves[i], c));
                t.leaves[i] = c;
                t.leaves.push(c);
                insert_class(&mut out, t.build()?)?;
            }
        }
    } else {
        for g in grow(genus - 1, leaves + 2)?.values() {
            let mut t = Skeleton::from_graph(g);
            let b = t.leaves.pop().expect("at least two leaves");
            let a = t.leaves.pop().expect("at least two leaves");
            t.edges.push((a, b));
            insert_class(&mut out, t.build()?)?;
        }
    }
    Ok(out)
}

/// [`enumerate_stable_weighted_with`] under [`Limits::from_env`].
pub fn enumerate_stable_weighted(genus: u32, leaves: u32) -> Result<Vec<WeightedGraph>> {
    enumerate_stable_weighted_with(genus, leaves, &Limits::from_env())
}

/// All stable weighted graphs of genus `g` with `n` leaves.
///
/// Every stable weighted graph is a weighted contraction of a regular one:
/// a vertex of weight `w` and degree `d` can be opened up into a trivalent
/// genus-`w` piece with `d` legs, since `2w - 2 + d > 0`. So the classes are
/// the contractions of all regular graphs of the same type.
pub fn enumerate_stable_weighted_with(genus: u32, leaves: u32, limits: &Limits) -> Result<Vec<WeightedGraph>> {
    let regular = enumerate_regular_with(genus, leaves, limits)?;
    let found: Vec<Classes> = regular
        .par_iter()
        .map(|base| {
            let mut out = Classes::new();
            for mask in 0..1u64 << base.num_edges() {
                insert_class(&mut out, contract(base, EdgeSet(mask))?.result)?;
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut out = Classes::new();
    for classes in found {
        for (key, g) in classes {
            out.entry(key).or_insert(g);
        }
    }
    for g in out.values() {
        if !g.is_stable() || !g.is_connected() || g.genus() != genus as usize || g.num_leaves() != leaves as usize {
            return Err(Error::Integrity(format!("generated an unstable graph:\n{g}")));
        }
    }
    Ok(out.into_values().collect())
}

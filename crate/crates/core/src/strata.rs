//! The stratification of the compactified moduli space over a fixed base.
//!
//! Every edge subset `q` of the base contracts to a weighted graph; subsets
//! with isomorphic contractions index the same stratum. Strata are ordered by
//! `⪯`: `S ⪯ T` when some witness of `S` contains some witness of `T`, which
//! is the same as the representative of `S` being a weighted contraction of
//! that of `T`.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::contraction::contract;
use crate::error::{Error, Result};
use crate::graph::{EdgeSet, WeightedGraph};
use crate::iso::{aut_counts, canonical_form, CanonicalKey};
use crate::limits::Limits;

#[derive(Clone, Debug)]
pub struct Stratum {
    pub key: CanonicalKey,
    /// Contraction of the base by the first witness.
    pub representative: WeightedGraph,
    /// Number of surviving edges.
    pub dimension: usize,
    /// Edge subsets of the base realizing this stratum, in canonical order.
    pub witnesses: Vec<EdgeSet>,
    /// Order of the automorphism group's action on the representative's edges.
    pub aut_edge_action_order: u128,
}

#[derive(Clone, Debug)]
pub struct StrataPoset {
    pub base: WeightedGraph,
    /// Sorted by dimension (descending), then by key.
    pub strata: Vec<Stratum>,
    /// Strict relations `(i, j)` meaning `strata[i] ⪯ strata[j]`.
    pub order: BTreeSet<(usize, usize)>,
    /// Covering relations of `order`.
    pub hasse: Vec<(usize, usize)>,
    by_mask: Vec<u32>,
}

impl StrataPoset {
    pub fn leq(&self, i: usize, j: usize) -> bool {
        i == j || self.order.contains(&(i, j))
    }

    /// Index of the stratum realized by contracting `q`.
    pub fn index_of(&self, q: EdgeSet) -> usize {
        self.by_mask[q.0 as usize] as usize
    }

    /// The open stratum, `q = ∅`.
    pub fn top(&self) -> usize {
        self.index_of(EdgeSet::EMPTY)
    }

    /// The point stratum, every edge contracted.
    pub fn bottom(&self) -> usize {
        self.index_of(self.base.all_edges())
    }

    pub fn total_witnesses(&self) -> usize {
        self.strata.iter().map(|s| s.witnesses.len()).sum()
    }

    pub fn dimensions(&self) -> Vec<usize> {
        self.strata.iter().map(|s| s.dimension).collect()
    }
}

/// [`strata_of_with`] under [`Limits::from_env`].
pub fn strata_of(base: &WeightedGraph) -> Result<StrataPoset> {
    strata_of_with(base, &Limits::from_env())
}

pub fn strata_of_with(base: &WeightedGraph, limits: &Limits) -> Result<StrataPoset> {
    if !base.is_connected() {
        return Err(Error::Disconnected);
    }
    let m = base.num_edges();
    limits.check_strata(m)?;

    let keys: Vec<CanonicalKey> = (0..1u64 << m)
        .into_par_iter()
        .map(|mask| canonical_form(&contract(base, EdgeSet(mask))?.result))
        .collect::<Result<_>>()?;

    let mut groups: BTreeMap<&CanonicalKey, Vec<EdgeSet>> = BTreeMap::new();
    for (mask, key) in keys.iter().enumerate() {
        groups.entry(key).or_default().push(EdgeSet(mask as u64));
    }
    let mut strata: Vec<Stratum> = groups
        .into_par_iter()
        .map(|(key, mut witnesses)| {
            witnesses.sort_by(|a, b| a.canonical_cmp(*b));
            let representative = contract(base, witnesses[0])?.result;
            let dimension = representative.num_edges();
            if witnesses.iter().any(|q| m - q.len() != dimension) {
                return Err(Error::Integrity(format!("stratum {key} has witnesses of mixed size")));
            }
            Ok(Stratum {
                key: key.clone(),
                aut_edge_action_order: aut_counts(&representative)?.edge_action_order,
                representative,
                dimension,
                witnesses,
            })
        })
        .collect::<Result<_>>()?;
    strata.sort_by(|a, b| b.dimension.cmp(&a.dimension).then_with(|| a.key.cmp(&b.key)));

    let mut by_mask = vec![0u32; 1 << m];
    for (i, s) in strata.iter().enumerate() {
        for q in &s.witnesses {
            by_mask[q.0 as usize] = i as u32;
        }
    }

    let k = strata.len();
    let mut reach = vec![vec![false; k]; k];
    for mask in 0..1usize << m {
        let upper = by_mask[mask] as usize;
        for bit in 0..m {
            if mask >> bit & 1 == 0 {
                let lower = by_mask[mask | 1 << bit] as usize;
                reach[lower][upper] = true;
            }
        }
    }
    // strata are sorted by dimension, so `reach` is strictly triangular
    for via in 0..k {
        for i in 0..k {
            if reach[i][via] {
                let row = reach[via].clone();
                for (r, &x) in reach[i].iter_mut().zip(&row) {
                    *r |= x;
                }
            }
        }
    }
    let mut order = BTreeSet::new();
    for (i, row) in reach.iter().enumerate() {
        for (j, &r) in row.iter().enumerate() {
            if r {
                if i == j || strata[i].dimension >= strata[j].dimension {
                    return Err(Error::Integrity("contraction order is not strict".into()));
                }
                order.insert((i, j));
            }
        }
    }
    let hasse: Vec<(usize, usize)> = order
        .iter()
        .copied()
        .filter(|&(i, j)| !(0..k).any(|via| order.contains(&(i, via)) && order.contains(&(via, j))))
        .collect();
    if hasse
        .iter()
        .any(|&(i, j)| strata[j].dimension != strata[i].dimension + 1)
    {
        return Err(Error::Integrity("covering relation skips a dimension".into()));
    }

    let poset = StrataPoset {
        base: base.clone(),
        strata,
        order,
        hasse,
        by_mask,
    };
    let (top, bottom) = (poset.top(), poset.bottom());
    if poset.total_witnesses() != 1 << m || (0..k).any(|i| !poset.leq(i, top) || !poset.leq(bottom, i)) {
        return Err(Error::Integrity("strata do not form a bounded partition".into()));
    }
    Ok(poset)
}

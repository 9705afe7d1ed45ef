//! Nodal types of contractions and the map to the stratification of the
//! moduli of stable curves.
//!
//! Contracting `q` in a regular base corresponds to shrinking the curves of
//! `q` to nodes. The resulting nodal surface has one irreducible component
//! per connected component of `(V, E \ q)`, of genus equal to that
//! component's Betti number, and one node per edge of `q`. Its dual graph is
//! the weighted contraction of the base by the complement `E \ q`.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use crate::contraction::contract;
use crate::enumerate::{enumerate_regular_with, enumerate_stable_weighted_with};
use crate::error::{Error, Result};
use crate::graph::{EdgeSet, WeightedGraph};
use crate::iso::{canonical_form, CanonicalKey};
use crate::limits::Limits;
use crate::strata::{strata_of_with, StrataPoset};

/// `(g_i, n_i, d_i)` of one irreducible component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ComponentData {
    pub genus: usize,
    pub leaves: usize,
    /// Node branches on the component; a self-node counts twice.
    pub nodes: usize,
}

#[derive(Clone, Debug)]
pub struct NodalType {
    /// Vertices are components, edges are nodes (named after the shrunk base
    /// edges), leaves are the marked points.
    pub dual: WeightedGraph,
    /// Indexed like the vertices of `dual`.
    pub components: Vec<ComponentData>,
}

impl NodalType {
    /// Number of irreducible components.
    pub fn k(&self) -> usize {
        self.components.len()
    }

    /// Number of nodes.
    pub fn d(&self) -> usize {
        self.dual.num_edges()
    }

    pub fn key(&self) -> Result<CanonicalKey> {
        canonical_form(&self.dual)
    }
}

/// The dual graph of the nodal surface obtained by shrinking the curves `q`.
pub fn dual_type(base: &WeightedGraph, q: EdgeSet) -> Result<NodalType> {
    if !base.is_regular() {
        return Err(Error::NotRegular);
    }
    let m = base.num_edges();
    if !q.is_subset(base.all_edges()) {
        return Err(Error::UnknownEdge(format!("#{}", q.difference(base.all_edges()).iter().next().unwrap_or(0))));
    }
    let dual = contract(base, q.complement(m))?.result;
    let degrees = dual.degrees();
    let components: Vec<ComponentData> = (0..dual.num_vertices())
        .map(|v| {
            let leaves = dual.leaves_at(v).len();
            ComponentData {
                genus: dual.weight(v) as usize,
                leaves,
                nodes: degrees[v] - leaves,
            }
        })
        .collect();
    let t = NodalType { dual, components };
    check_nodal_identities(&t, base.genus())?;
    Ok(t)
}

fn check_nodal_identities(t: &NodalType, genus: usize) -> Result<()> {
    let (k, d) = (t.k(), t.d());
    let branches: usize = t.components.iter().map(|c| c.nodes).sum();
    let genera: usize = t.components.iter().map(|c| c.genus).sum();
    if branches != 2 * d {
        return Err(Error::Integrity(format!("{branches} node branches for {d} nodes")));
    }
    if genera + d + 1 != genus + k {
        return Err(Error::Integrity(format!(
            "component genera {genera}, {d} nodes and {k} components do not give genus {genus}"
        )));
    }
    if t.dual.genus() != genus || !t.dual.is_stable() {
        return Err(Error::Integrity(format!("dual graph is not a stable genus-{genus} graph")));
    }
    Ok(())
}

/// Both sides of the dimension count of a boundary stratum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DimensionReport {
    /// `Σ (3 g_i - 3 + n_i + d_i)`.
    pub component_sum: i64,
    pub stratum_edges: usize,
    pub nodes: usize,
    /// `3g - 3 + n - stratum_edges`.
    pub expected_nodes: i64,
}

pub fn dimension_identity(t: &NodalType, stratum_edges: usize) -> Result<DimensionReport> {
    let component_sum: i64 = t
        .components
        .iter()
        .map(|c| 3 * c.genus as i64 - 3 + c.leaves as i64 + c.nodes as i64)
        .sum();
    let (g, n) = (t.dual.genus() as i64, t.dual.num_leaves() as i64);
    let report = DimensionReport {
        component_sum,
        stratum_edges,
        nodes: t.d(),
        expected_nodes: 3 * g - 3 + n - stratum_edges as i64,
    };
    if report.component_sum != stratum_edges as i64 || report.expected_nodes != report.nodes as i64 {
        return Err(Error::Integrity(format!("dimension identity fails: {report:?}")));
    }
    Ok(report)
}

/// Two witnesses of one stratum with non-isomorphic nodal types.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub stratum: usize,
    pub first: (EdgeSet, CanonicalKey),
    pub second: (EdgeSet, CanonicalKey),
}

#[derive(Clone, Debug)]
pub struct MapEntry {
    pub stratum: usize,
    pub nodal: NodalType,
    pub nodal_key: CanonicalKey,
    pub dimension: DimensionReport,
}

/// Stratum to nodal class, one entry per stratum in poset order.
#[derive(Clone, Debug)]
pub struct StratificationMap {
    pub entries: Vec<MapEntry>,
    pub violations: Vec<Violation>,
}

impl StratificationMap {
    pub fn is_well_defined(&self) -> bool {
        self.violations.is_empty()
    }

    /// Every class reached by some witness of some stratum.
    pub fn image(&self) -> BTreeSet<CanonicalKey> {
        self.reached().into_keys().collect()
    }

    /// Classes reached from more than one stratum, through any witnesses.
    pub fn collisions(&self) -> BTreeMap<CanonicalKey, Vec<usize>> {
        let mut by_class = self.reached();
        by_class.retain(|_, strata| strata.len() > 1);
        by_class
    }

    fn reached(&self) -> BTreeMap<CanonicalKey, Vec<usize>> {
        let mut by_class: BTreeMap<CanonicalKey, BTreeSet<usize>> = BTreeMap::new();
        let pairs = self.entries.iter().map(|e| (&e.nodal_key, e.stratum));
        for (key, stratum) in pairs.chain(self.violations.iter().map(|v| (&v.second.1, v.stratum))) {
            by_class.entry(key.clone()).or_default().insert(stratum);
        }
        by_class.into_iter().map(|(k, v)| (k, v.into_iter().collect())).collect()
    }
}

pub fn stratification_map(poset: &StrataPoset) -> Result<StratificationMap> {
    let base = &poset.base;
    let per_stratum: Vec<(MapEntry, Vec<Violation>)> = poset
        .strata
        .par_iter()
        .enumerate()
        .map(|(i, s)| {
            let first = s.witnesses[0];
            let nodal = dual_type(base, first)?;
            let nodal_key = nodal.key()?;
            let dimension = dimension_identity(&nodal, s.dimension)?;
            let mut violations = Vec::new();
            for &q in &s.witnesses[1..] {
                let other = dual_type(base, q)?.key()?;
                if other != nodal_key {
                    violations.push(Violation {
                        stratum: i,
                        first: (first, nodal_key.clone()),
                        second: (q, other),
                    });
                }
            }
            Ok((
                MapEntry {
                    stratum: i,
                    nodal,
                    nodal_key,
                    dimension,
                },
                violations,
            ))
        })
        .collect::<Result<_>>()?;
    let mut entries = Vec::with_capacity(per_stratum.len());
    let mut violations = Vec::new();
    for (entry, v) in per_stratum {
        entries.push(entry);
        violations.extend(v);
    }
    Ok(StratificationMap { entries, violations })
}

/// Outcome of checking that nested witnesses give nested nodal types.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OrderReport {
    pub pairs_checked: u64,
    /// Pairs `q ⊆ q''` where contracting the nodes `q'' \ q` of the deeper
    /// type does not give the type of `q`.
    pub failures: Vec<(EdgeSet, EdgeSet)>,
}

impl OrderReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks every nested witness pair `q ⊆ q''` of the base.
pub fn order_preservation(poset: &StrataPoset) -> Result<OrderReport> {
    let base = &poset.base;
    let m = base.num_edges();
    let full = base.all_edges();
    let duals: Vec<(WeightedGraph, Vec<Option<usize>>, CanonicalKey)> = (0..1u64 << m)
        .into_par_iter()
        .map(|mask| {
            let c = contract(base, EdgeSet(mask).complement(m))?;
            let key = canonical_form(&c.result)?;
            dual_type(base, EdgeSet(mask))?;
            Ok((c.result, c.edge_map, key))
        })
        .collect::<Result<_>>()?;
    let per_deep: Vec<OrderReport> = (0..1u64 << m)
        .into_par_iter()
        .map(|deep| {
            let (dual, edge_map, _) = &duals[deep as usize];
            let mut report = OrderReport::default();
            // every submask of `deep`, including `deep` itself and the empty set
            let mut q = deep;
            loop {
                let shrink = EdgeSet(deep & !q);
                let image = EdgeSet::from_indices(shrink.iter().filter_map(|i| edge_map[i]));
                if image.len() != shrink.len() || !shrink.is_subset(full) {
                    return Err(Error::Integrity("node edges missing from the dual graph".into()));
                }
                let got = canonical_form(&contract(dual, image)?.result)?;
                report.pairs_checked += 1;
                if got != duals[q as usize].2 {
                    report.failures.push((EdgeSet(q), EdgeSet(deep)));
                }
                if q == 0 {
                    break;
                }
                q = (q - 1) & deep;
            }
            Ok(report)
        })
        .collect::<Result<_>>()?;
    let mut report = OrderReport::default();
    for r in per_deep {
        report.pairs_checked += r.pairs_checked;
        report.failures.extend(r.failures);
    }
    report.failures.sort_by(|a, b| a.1.canonical_cmp(b.1).then_with(|| a.0.canonical_cmp(b.0)));
    Ok(report)
}

/// Coverage of the stable classes by one regular base.
#[derive(Clone, Debug)]
pub struct BaseCoverage {
    pub base_key: CanonicalKey,
    pub poset: StrataPoset,
    pub map: StratificationMap,
    pub hit: BTreeSet<CanonicalKey>,
    /// Stable classes not in the image.
    pub missing: Vec<CanonicalKey>,
}

#[derive(Clone, Debug)]
pub struct CoverageReport {
    pub genus: u32,
    pub leaves: u32,
    /// Every stable class of this type, by key.
    pub stable: BTreeMap<CanonicalKey, WeightedGraph>,
    pub bases: Vec<BaseCoverage>,
    pub union: BTreeSet<CanonicalKey>,
    pub uncovered: Vec<CanonicalKey>,
}

/// [`coverage_with`] under [`Limits::from_env`].
pub fn coverage(genus: u32, leaves: u32) -> Result<CoverageReport> {
    coverage_with(genus, leaves, &Limits::from_env())
}

pub fn coverage_with(genus: u32, leaves: u32, limits: &Limits) -> Result<CoverageReport> {
    let stable: BTreeMap<CanonicalKey, WeightedGraph> = enumerate_stable_weighted_with(genus, leaves, limits)?
        .into_iter()
        .map(|g| Ok((canonical_form(&g)?, g)))
        .collect::<Result<_>>()?;
    let mut bases = Vec::new();
    for base in enumerate_regular_with(genus, leaves, limits)? {
        let poset = strata_of_with(&base, limits)?;
        let map = stratification_map(&poset)?;
        let hit = map.image();
        if let Some(stray) = hit.iter().find(|k| !stable.contains_key(*k)) {
            return Err(Error::Integrity(format!("nodal class {stray} is not a stable class")));
        }
        let missing = stable.keys().filter(|k| !hit.contains(*k)).cloned().collect();
        bases.push(BaseCoverage {
            base_key: canonical_form(&base)?,
            poset,
            map,
            hit,
            missing,
        });
    }
    let union: BTreeSet<CanonicalKey> = bases.iter().flat_map(|b| b.hit.iter().cloned()).collect();
    let uncovered = stable.keys().filter(|k| !union.contains(*k)).cloned().collect();
    Ok(CoverageReport {
        genus,
        leaves,
        stable,
        bases,
        union,
        uncovered,
    })
}

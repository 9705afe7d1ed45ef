//! Output renderers. Every renderer is a pure function of its input, so
//! identical inputs give byte-identical text.

use std::collections::BTreeMap;
use std::fmt::Write;

use serde_json::{json, Value};
use tropmod_core::compare::{CoverageReport, StratificationMap};
use tropmod_core::cone::{ExtendedPoint, PointStratum};
use tropmod_core::contraction::{BettiDecomposition, Contraction};
use tropmod_core::io::{GraphFile, PointFile};
use tropmod_core::iso::{AutCounts, AutGroup, CanonicalKey};
use tropmod_core::strata::StrataPoset;
use tropmod_core::WeightedGraph;

pub fn graph_value(g: &WeightedGraph) -> Value {
    serde_json::to_value(GraphFile::from(g)).expect("graph records serialize")
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

pub fn graph_dot(g: &WeightedGraph) -> String {
    let mut out = String::from("graph G {\n");
    for v in g.vertices() {
        let _ = writeln!(out, "  {} [label={}];", quote(&v.id), quote(&format!("{} w={}", v.id, v.weight)));
    }
    for e in g.edges() {
        let [a, b] = e.ends.map(|i| quote(&g.vertices()[i].id));
        let _ = writeln!(out, "  {a} -- {b} [label={}];", quote(&e.id));
    }
    for (i, &v) in g.leaves().iter().enumerate() {
        let leaf = quote(&format!("leaf {}", i + 1));
        let _ = writeln!(out, "  {leaf} [shape=plaintext, label=\"{}\"];", i + 1);
        let _ = writeln!(out, "  {} -- {leaf} [style=dashed];", quote(&g.vertices()[v].id));
    }
    out.push_str("}\n");
    out
}

fn summary_row(g: &WeightedGraph) -> (String, String) {
    let weights: Vec<String> = g.vertices().iter().map(|v| v.weight.to_string()).collect();
    let edges: Vec<String> = g
        .edges()
        .iter()
        .map(|e| format!("{}-{}", g.vertices()[e.ends[0]].id, g.vertices()[e.ends[1]].id))
        .collect();
    (weights.join(" "), edges.join(" "))
}

pub fn graph_list_json(keys: &[CanonicalKey], graphs: &[WeightedGraph], genus: u32, leaves: u32) -> String {
    let items: Vec<Value> = keys
        .iter()
        .zip(graphs)
        .map(|(k, g)| json!({"key": k.as_str(), "graph": graph_value(g)}))
        .collect();
    pretty(&json!({"genus": genus, "leaves": leaves, "count": graphs.len(), "graphs": items}))
}

pub fn graph_list_csv(keys: &[CanonicalKey], graphs: &[WeightedGraph]) -> String {
    let mut out = String::from("index,key,vertices,edges,weights,edge_list\n");
    for (i, (k, g)) in keys.iter().zip(graphs).enumerate() {
        let (w, e) = summary_row(g);
        let _ = writeln!(out, "{},{},{},{},{},{}", i + 1, k, g.num_vertices(), g.num_edges(), w, e);
    }
    out
}

pub fn graph_list_md(title: &str, keys: &[CanonicalKey], graphs: &[WeightedGraph]) -> String {
    let mut out = format!("# {title}\n\n{} classes\n\n| # | key | V | E | weights | edges |\n|---|---|---|---|---|---|\n", graphs.len());
    for (i, (k, g)) in keys.iter().zip(graphs).enumerate() {
        let (w, e) = summary_row(g);
        let _ = writeln!(out, "| {} | `{}` | {} | {} | {} | {} |", i + 1, k, g.num_vertices(), g.num_edges(), w, e);
    }
    out
}

pub fn contraction_json(c: &Contraction, d: &BettiDecomposition) -> String {
    let src = &c.source;
    let res = &c.result;
    let vertex_map: BTreeMap<&str, &str> = src
        .vertices()
        .iter()
        .zip(&c.vertex_map)
        .map(|(v, &r)| (v.id.as_str(), res.vertices()[r].id.as_str()))
        .collect();
    let edge_map: BTreeMap<&str, Option<&str>> = src
        .edges()
        .iter()
        .zip(&c.edge_map)
        .map(|(e, r)| (e.id.as_str(), r.map(|r| res.edges()[r].id.as_str())))
        .collect();
    let per_vertex: BTreeMap<&str, usize> = res
        .vertices()
        .iter()
        .zip(&d.per_vertex)
        .map(|(v, &b)| (v.id.as_str(), b))
        .collect();
    pretty(&json!({
        "contracted": src.edge_ids(c.q),
        "graph": graph_value(res),
        "witness": {
            "vertexMap": vertex_map,
            "edgeMap": edge_map,
            "perVertexBetti": per_vertex,
            "b1Contracted": d.contracted,
            "b1Removed": d.removed,
        },
    }))
}

pub fn aut_json(counts: &AutCounts, group: Option<&AutGroup>, g: &WeightedGraph) -> String {
    let generators: Option<Vec<String>> = group.map(|gr| gr.generators().iter().map(|x| x.cycle_notation(g)).collect());
    pretty(&json!({
        "order": counts.order.to_string(),
        "edgeActionOrder": counts.edge_action_order.to_string(),
        "kernelSize": counts.kernel_size.to_string(),
        "generators": generators,
    }))
}

pub fn aut_md(counts: &AutCounts, group: Option<&AutGroup>, g: &WeightedGraph) -> String {
    let mut out = format!(
        "| quantity | value |\n|---|---|\n| order | {} |\n| edge action order | {} |\n| kernel size | {} |\n",
        counts.order, counts.edge_action_order, counts.kernel_size
    );
    match group {
        Some(gr) => {
            out.push_str("\ngenerators:\n\n");
            let gens = gr.generators();
            if gens.is_empty() {
                out.push_str("- ()\n");
            }
            for x in gens {
                let _ = writeln!(out, "- `{}`", x.cycle_notation(g));
            }
        }
        None => out.push_str("\ngenerators: group too large to list\n"),
    }
    out
}

pub fn strata_json(p: &StrataPoset) -> String {
    let strata: Vec<Value> = p
        .strata
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let witnesses: Vec<Vec<&str>> = s.witnesses.iter().map(|q| p.base.edge_ids(*q)).collect();
            json!({
                "index": i,
                "key": s.key.as_str(),
                "dimension": s.dimension,
                "autEdgeActionOrder": s.aut_edge_action_order.to_string(),
                "representative": graph_value(&s.representative),
                "witnesses": witnesses,
            })
        })
        .collect();
    pretty(&json!({
        "base": graph_value(&p.base),
        "strata": strata,
        "order": p.order.iter().map(|&(i, j)| [i, j]).collect::<Vec<_>>(),
        "hasse": p.hasse.iter().map(|&(i, j)| [i, j]).collect::<Vec<_>>(),
    }))
}

/// Hasse diagram, edges pointing from a stratum to the smaller strata in
/// its closure.
pub fn strata_dot(p: &StrataPoset) -> String {
    let mut out = String::from("digraph strata {\n  rankdir=TB;\n");
    for (i, s) in p.strata.iter().enumerate() {
        let label = format!("dim={}, |witnesses|={}, |AutE|={}", s.dimension, s.witnesses.len(), s.aut_edge_action_order);
        let _ = writeln!(out, "  s{i} [label={}, tooltip={}];", quote(&label), quote(s.key.as_str()));
    }
    for &(lower, upper) in &p.hasse {
        let _ = writeln!(out, "  s{upper} -> s{lower};");
    }
    out.push_str("}\n");
    out
}

pub fn strata_csv(p: &StrataPoset) -> String {
    let mut out = String::from("index,dim,witnesses,aut_edge_action,key\n");
    for (i, s) in p.strata.iter().enumerate() {
        let _ = writeln!(out, "{i},{},{},{},{}", s.dimension, s.witnesses.len(), s.aut_edge_action_order, s.key);
    }
    out
}

pub fn strata_md(p: &StrataPoset) -> String {
    let mut out = format!(
        "{} strata, {} covering relations\n\n| # | dim | witnesses | AutE | key |\n|---|---|---|---|---|\n",
        p.strata.len(),
        p.hasse.len()
    );
    for (i, s) in p.strata.iter().enumerate() {
        let _ = writeln!(out, "| {i} | {} | {} | {} | `{}` |", s.dimension, s.witnesses.len(), s.aut_edge_action_order, s.key);
    }
    out
}

fn lengths_value(p: &ExtendedPoint) -> Value {
    serde_json::to_value(PointFile::from(p).coords).expect("coordinates serialize")
}

pub fn classify_json(s: &PointStratum, base: &WeightedGraph, key: &CanonicalKey) -> String {
    let g = s.graph();
    let lengths: BTreeMap<&str, String> = g
        .edges()
        .iter()
        .zip(&s.lengths)
        .map(|(e, x)| (e.id.as_str(), x.to_string()))
        .collect();
    pretty(&json!({
        "contracted": base.edge_ids(s.q),
        "dimension": g.num_edges(),
        "stratumKey": key.as_str(),
        "graph": graph_value(g),
        "lengths": lengths,
    }))
}

pub fn fiber_json(points: &[ExtendedPoint]) -> String {
    let items: Vec<Value> = points.iter().map(lengths_value).collect();
    pretty(&json!({"size": points.len(), "points": items}))
}

pub fn fiber_csv(points: &[ExtendedPoint]) -> String {
    let Some(first) = points.first() else {
        return String::new();
    };
    let ids: Vec<&str> = first.base().edges().iter().map(|e| e.id.as_str()).collect();
    let mut out = ids.join(",");
    out.push('\n');
    for p in points {
        let row: Vec<String> = p.lengths().into_values().map(|x| x.to_string()).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn nodal_dim(c: &CoverageReport, key: &CanonicalKey) -> usize {
    let nodes = c.stable[key].num_edges();
    (3 * c.genus as usize + c.leaves as usize - 3) - nodes
}

pub fn coverage_csv(c: &CoverageReport) -> String {
    let mut out = String::from("base_key,stratum_key,dim,nodal_class_key,covered\n");
    for b in &c.bases {
        for e in &b.map.entries {
            let s = &b.poset.strata[e.stratum];
            let _ = writeln!(out, "{},{},{},{},true", b.base_key, s.key, s.dimension, e.nodal_key);
        }
        for k in &b.missing {
            let _ = writeln!(out, "{},,{},{},false", b.base_key, nodal_dim(c, k), k);
        }
    }
    out
}

fn violations_value(map: &StratificationMap, p: &StrataPoset) -> Vec<Value> {
    map.violations
        .iter()
        .map(|v| {
            json!({
                "stratum": v.stratum,
                "first": {"witness": p.base.edge_ids(v.first.0), "nodalKey": v.first.1.as_str()},
                "second": {"witness": p.base.edge_ids(v.second.0), "nodalKey": v.second.1.as_str()},
            })
        })
        .collect()
}

pub fn coverage_json(c: &CoverageReport) -> String {
    let bases: Vec<Value> = c
        .bases
        .iter()
        .map(|b| {
            let map: Vec<Value> = b
                .map
                .entries
                .iter()
                .map(|e| {
                    json!({
                        "stratum": e.stratum,
                        "stratumKey": b.poset.strata[e.stratum].key.as_str(),
                        "dim": b.poset.strata[e.stratum].dimension,
                        "nodalKey": e.nodal_key.as_str(),
                        "components": e.nodal.components.iter().map(|x| [x.genus, x.leaves, x.nodes]).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let collisions: BTreeMap<String, Vec<usize>> =
                b.map.collisions().into_iter().map(|(k, v)| (k.to_string(), v)).collect();
            json!({
                "baseKey": b.base_key.as_str(),
                "base": graph_value(&b.poset.base),
                "hit": b.hit.len(),
                "missing": b.missing.iter().map(|k| k.as_str()).collect::<Vec<_>>(),
                "collisions": collisions,
                "violations": violations_value(&b.map, &b.poset),
                "map": map,
            })
        })
        .collect();
    pretty(&json!({
        "genus": c.genus,
        "leaves": c.leaves,
        "stableClasses": c.stable.keys().map(|k| k.as_str()).collect::<Vec<_>>(),
        "bases": bases,
        "unionCovered": c.union.len(),
        "uncovered": c.uncovered.iter().map(|k| k.as_str()).collect::<Vec<_>>(),
    }))
}

/// Bipartite map from strata (one cluster per base) to nodal classes.
pub fn coverage_dot(c: &CoverageReport) -> String {
    let mut out = String::from("digraph map {\n  rankdir=LR;\n");
    let class_index: BTreeMap<&CanonicalKey, usize> = c.stable.keys().enumerate().map(|(i, k)| (k, i)).collect();
    for (bi, b) in c.bases.iter().enumerate() {
        let _ = writeln!(out, "  subgraph cluster_b{bi} {{\n    label={};", quote(b.base_key.as_str()));
        for (i, s) in b.poset.strata.iter().enumerate() {
            let _ = writeln!(out, "    b{bi}s{i} [label={}];", quote(&format!("dim={} {}", s.dimension, s.key)));
        }
        out.push_str("  }\n");
    }
    for (k, &i) in &class_index {
        let style = if c.union.contains(*k) { "" } else { ", style=dashed" };
        let _ = writeln!(out, "  c{i} [shape=box, label={}{style}];", quote(k.as_str()));
    }
    for (bi, b) in c.bases.iter().enumerate() {
        for e in &b.map.entries {
            let _ = writeln!(out, "  b{bi}s{} -> c{};", e.stratum, class_index[&e.nodal_key]);
        }
    }
    out.push_str("}\n");
    out
}

pub fn coverage_md(c: &CoverageReport) -> String {
    let mut out = format!(
        "## Coverage of nodal classes, (g, n) = ({}, {})\n\n{} stable classes; union over {} regular bases covers {}\n\n",
        c.genus,
        c.leaves,
        c.stable.len(),
        c.bases.len(),
        c.union.len()
    );
    out.push_str("| base | strata | classes hit | missing | colliding classes | witness-dependent strata |\n|---|---|---|---|---|---|\n");
    for b in &c.bases {
        let mut dependent: Vec<usize> = b.map.violations.iter().map(|v| v.stratum).collect();
        dependent.dedup();
        let _ = writeln!(
            out,
            "| `{}` | {} | {} | {} | {} | {} |",
            b.base_key,
            b.poset.strata.len(),
            b.hit.len(),
            b.missing.len(),
            b.map.collisions().len(),
            dependent.len()
        );
    }
    if !c.uncovered.is_empty() {
        out.push_str("\nnever covered:\n\n");
        for k in &c.uncovered {
            let _ = writeln!(out, "- `{k}`");
        }
    }
    out
}

//! JSON graph files, reports and DOT output.
//!
//! A graph file looks like
//!
//! ```json
//! { "vertices": ["v0"],
//!   "edges": [ { "id": "e0",
//!                "ends": [ {"vertex": "v0", "label": 1},
//!                          {"vertex": "v0", "label": 6} ] } ] }
//! ```
//!
//! Names of the form `v<n>` and `e<n>` become ids `n` when all names of that
//! kind have this form; otherwise ids are assigned in order of appearance.
//! Labels are JSON integers, or decimal strings when they do not fit in 64
//! bits.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::canon::CanonicalForm;
use crate::graph::{EdgeEnd, EdgeId, OrientedEdge, VertexId};
use crate::model::{Diagnostic, EdgeSpec, GbsGraph, InvalidGraph};
use crate::modulus::{has_integer_modulus, modular_image, IntegerModulus};
use crate::moves::{is_reduced, MoveTrace};
use crate::search::{Classification, SpaceReport};
use crate::shelters::{
    is_in_spine, is_in_spine_by_reduction, labeling_of, strict_ascending_loops, Mark, Shelter, ShelterReport,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GbsFile {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub id: String,
    pub ends: [EndRecord; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndRecord {
    pub vertex: String,
    pub label: Value,
}

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("{0}")]
    Invalid(String),
}

impl FormatError {
    fn from_json(e: serde_json::Error) -> Self {
        FormatError::Parse { line: e.line(), column: e.column(), message: e.to_string() }
    }
}

fn numbered(names: &[&str], prefix: char) -> Option<Vec<u32>> {
    let ids: Option<Vec<u32>> = names
        .iter()
        .map(|n| n.strip_prefix(prefix).filter(|d| !d.is_empty() && (d == &"0" || !d.starts_with('0'))))
        .map(|d| d.and_then(|d| d.parse().ok()))
        .collect();
    let ids = ids?;
    let mut sorted = ids.clone();
    sorted.sort_unstable();
    sorted.dedup();
    (sorted.len() == ids.len()).then_some(ids)
}

fn id_map(names: &[&str], prefix: char) -> Vec<u32> {
    numbered(names, prefix).unwrap_or_else(|| (0..names.len() as u32).collect())
}

fn label_of(v: &Value, context: &str) -> Result<BigInt, FormatError> {
    let parsed = match v {
        Value::Number(n) => n.as_i64().map(BigInt::from),
        Value::String(s) => s.parse::<BigInt>().ok(),
        _ => None,
    };
    parsed.ok_or_else(|| FormatError::Invalid(format!("{context}: label must be an integer")))
}

fn label_value(l: &BigInt) -> Value {
    match l.to_i64() {
        Some(x) => json!(x),
        None => json!(l.to_string()),
    }
}

/// Graph ids plus the original names.
#[derive(Debug, Clone)]
pub struct Parsed {
    pub graph: GbsGraph,
    pub vertex_names: BTreeMap<VertexId, String>,
    pub edge_names: BTreeMap<EdgeId, String>,
}

pub fn parse_str(text: &str) -> Result<Parsed, FormatError> {
    let file: GbsFile = serde_json::from_str(text).map_err(FormatError::from_json)?;
    from_file(&file)
}

pub fn from_file(file: &GbsFile) -> Result<Parsed, FormatError> {
    let vnames: Vec<&str> = file.vertices.iter().map(String::as_str).collect();
    let enames: Vec<&str> = file.edges.iter().map(|e| e.id.as_str()).collect();
    let mut by_name: HashMap<&str, VertexId> = HashMap::new();
    for (name, id) in vnames.iter().zip(id_map(&vnames, 'v')) {
        if by_name.insert(name, VertexId(id)).is_some() {
            return Err(FormatError::Invalid(format!("duplicate vertex {name:?}")));
        }
    }
    let eids = id_map(&enames, 'e');
    let mut specs: Vec<EdgeSpec> = Vec::new();
    for (i, (rec, id)) in file.edges.iter().zip(&eids).enumerate() {
        let mut ends = Vec::new();
        for (side, end) in rec.ends.iter().enumerate() {
            let context = format!("edges[{i}].ends[{side}]");
            let v = by_name
                .get(end.vertex.as_str())
                .copied()
                .ok_or_else(|| FormatError::Invalid(format!("{context}: unknown vertex {:?}", end.vertex)))?;
            ends.push((v, label_of(&end.label, &context)?));
        }
        let [a, b]: [(VertexId, BigInt); 2] = ends.try_into().expect("two ends");
        specs.push((EdgeId(*id), [a, b]));
    }
    let vertices: Vec<VertexId> = by_name.values().copied().collect();
    let vertex_names: BTreeMap<VertexId, String> = by_name.iter().map(|(n, v)| (*v, n.to_string())).collect();
    let edge_names: BTreeMap<EdgeId, String> =
        eids.iter().zip(&enames).map(|(id, n)| (EdgeId(*id), n.to_string())).collect();
    let graph = GbsGraph::new(&vertices, &specs).map_err(|e| describe_invalid(&e, &edge_names))?;
    Ok(Parsed { graph, vertex_names, edge_names })
}

fn describe_invalid(e: &InvalidGraph, enames: &BTreeMap<EdgeId, String>) -> FormatError {
    let lines: Vec<String> =
        e.0.iter()
            .map(|d| match d {
                Diagnostic::ZeroLabel(end) => {
                    let name = enames.get(&end.edge).cloned().unwrap_or_else(|| end.edge.to_string());
                    format!("ZeroLabel: edge {name:?} end {}", end.side)
                }
                Diagnostic::Structure(s) => format!("{s}"),
                other => format!("{other}"),
            })
            .collect();
    FormatError::Invalid(lines.join("; "))
}

pub fn to_file(g: &GbsGraph) -> GbsFile {
    GbsFile {
        vertices: g.vertices().iter().map(|v| v.to_string()).collect(),
        edges: g
            .edge_specs()
            .into_iter()
            .map(|(id, ends)| EdgeRecord {
                id: id.to_string(),
                ends: ends.map(|(v, l)| EndRecord { vertex: v.to_string(), label: label_value(&l) }),
            })
            .collect(),
    }
}

pub fn to_json(g: &GbsGraph) -> String {
    serde_json::to_string_pretty(&to_file(g)).expect("graph files serialize")
}

/// Renames vertices and edges to `v<n>`/`e<n>` ids, sorts both lists by id
/// and writes labels canonically, without validating the graph.
pub fn normalize(file: &GbsFile) -> Result<GbsFile, FormatError> {
    let vnames: Vec<&str> = file.vertices.iter().map(String::as_str).collect();
    let enames: Vec<&str> = file.edges.iter().map(|e| e.id.as_str()).collect();
    let vmap: HashMap<&str, u32> = vnames.iter().copied().zip(id_map(&vnames, 'v')).collect();
    let mut vids: Vec<u32> = vmap.values().copied().collect();
    vids.sort_unstable();
    let mut edges = Vec::new();
    for ((i, rec), id) in file.edges.iter().enumerate().zip(id_map(&enames, 'e')) {
        let mut ends = Vec::new();
        for (side, end) in rec.ends.iter().enumerate() {
            let context = format!("edges[{i}].ends[{side}]");
            let v = vmap
                .get(end.vertex.as_str())
                .ok_or_else(|| FormatError::Invalid(format!("{context}: unknown vertex {:?}", end.vertex)))?;
            ends.push(EndRecord { vertex: format!("v{v}"), label: label_value(&label_of(&end.label, &context)?) });
        }
        let ends: [EndRecord; 2] = ends.try_into().expect("two ends");
        edges.push((id, EdgeRecord { id: format!("e{id}"), ends }));
    }
    edges.sort_by_key(|(id, _)| *id);
    Ok(GbsFile {
        vertices: vids.iter().map(|v| format!("v{v}")).collect(),
        edges: edges.into_iter().map(|(_, r)| r).collect(),
    })
}

fn oriented(oe: &OrientedEdge) -> String {
    oe.to_string()
}

pub fn trace_json(trace: &MoveTrace) -> Value {
    json!({
        "length": trace.len(),
        "moves": trace.moves().map(|m| m.to_string()).collect::<Vec<_>>(),
        "forms": trace.steps.iter().map(|s| s.form.to_hex()).collect::<Vec<_>>(),
    })
}

fn form_hex(f: &CanonicalForm) -> Value {
    json!(f.to_hex())
}

pub fn invariants_json(g: &GbsGraph) -> Value {
    let lattice = modular_image(g);
    let witness = match has_integer_modulus(&lattice) {
        IntegerModulus::Yes { value, .. } => json!(value.to_string()),
        IntegerModulus::No => Value::Null,
    };
    let strict: Vec<String> = strict_ascending_loops(&labeling_of(g)).iter().map(|e| e.to_string()).collect();
    let spine = is_in_spine(g).unwrap_or_else(|_| is_in_spine_by_reduction(g));
    json!({
        "b1": g.betti(),
        "reduced": is_reduced(g),
        "strict_ascending_loops": strict,
        "modulus": {
            "primes": lattice.primes.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "generators": lattice.basis,
            "integer_witness": witness,
        },
        "spine_member": spine,
    })
}

pub fn shelter_json(s: &Shelter) -> Value {
    match s {
        Shelter::Path(p) => json!({
            "type": "path",
            "edges": p.iter().map(oriented).collect::<Vec<_>>(),
            "special_vertex": Value::Null,
        }),
        Shelter::Circle { edges, special } => json!({
            "type": "circle",
            "edges": edges.iter().map(oriented).collect::<Vec<_>>(),
            "special_vertex": special.map(|v| v.to_string()),
        }),
    }
}

pub fn shelters_json(r: &ShelterReport) -> Value {
    json!({
        "ascending_context": r.ascending_context.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
        "shelters": r.shelters.iter().map(shelter_json).collect::<Vec<_>>(),
    })
}

pub fn classification_json(c: &Classification) -> Value {
    match c {
        Classification::NonAscending { certificate } => json!({
            "kind": "non-ascending",
            "certificate": { "primes": certificate.primes.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
                             "generators": certificate.basis },
        }),
        Classification::Ascending { witness, strict_loop, trace } => json!({
            "kind": "ascending",
            "witness": to_file(witness),
            "strict_loop": strict_loop.to_string(),
            "trace": trace_json(trace),
        }),
        Classification::Unknown { bounds } => json!({ "kind": "unknown", "bounds": bounds }),
    }
}

pub fn space_report_json(r: &SpaceReport) -> Value {
    json!({
        "reduced_forms": r.reduced_forms.iter().map(form_hex).collect::<Vec<_>>(),
        "reduced_graphs": r.reduced_graphs.iter().map(to_file).collect::<Vec<_>>(),
        "vertex_counts": r.vertex_counts.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>(),
        "b1": r.b1,
        "classification": classification_json(&r.classification),
        "spine_max_edges": r.spine_max_edges,
        "spine_graphs": r.spine_graphs,
        "states": r.states,
        "exhausted": r.exhausted,
        "pruned": r.pruned,
        "bounds": r.bounds,
    })
}

/// DOT digraph: one node per vertex, one arrow per edge from end 0 to end 1
/// labelled with both end labels. Ends with a unit label get a dot arrowhead.
pub fn dot(g: &GbsGraph) -> String {
    let l = labeling_of(g);
    let mut out = String::from("digraph gbs {\n");
    for v in g.vertices() {
        let _ = writeln!(out, "  {v};");
    }
    for e in g.edge_ids() {
        let [a, b] = g.graph().endpoints(e);
        let [la, lb] = g.labels_of(e);
        let head = |side| if l.mark(EdgeEnd::new(e, side)) == Mark::Eq { "dot" } else { "none" };
        let _ = writeln!(
            out,
            "  {a} -> {b} [label=\"{e}: {la},{lb}\", taillabel=\"{la}\", headlabel=\"{lb}\", dir=both, arrowtail={}, arrowhead={}];",
            head(0),
            if head(1) == "dot" { "dot" } else { "normal" },
        );
    }
    out.push_str("}\n");
    out
}

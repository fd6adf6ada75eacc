//! Graphs of groups whose vertex and edge groups are all infinite cyclic.
//!
//! Each edge end carries a nonzero integer label: the edge generator maps to
//! the `label`-th power of the generator of the vertex group at that end.
//! Labels are arbitrary-precision since collapses multiply them.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::graph::{EdgeEnd, EdgeId, GraphError, MultiGraph, OrientedEdge, VertexId};

pub type Label = BigInt;

/// One violated invariant, naming the offending id where there is one.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Diagnostic {
    #[error("end {0} has label 0")]
    ZeroLabel(EdgeEnd),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has no edges")]
    NoEdges,
    #[error("{0}")]
    Structure(GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid graph: {}", display_list(.0))]
pub struct InvalidGraph(pub Vec<Diagnostic>);

fn display_list(d: &[Diagnostic]) -> String {
    d.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

/// Raw edge description: id plus `(vertex, label)` for each end.
pub type EdgeSpec = (EdgeId, [(VertexId, Label); 2]);

/// Checks every structural invariant of a candidate graph and reports all
/// violations found.
pub fn validate(vertices: &[VertexId], edges: &[EdgeSpec]) -> Result<(), Vec<Diagnostic>> {
    let mut diags = Vec::new();
    for (id, ends) in edges {
        for (side, (_, l)) in ends.iter().enumerate() {
            if l.is_zero() {
                diags.push(Diagnostic::ZeroLabel(EdgeEnd::new(*id, side as u8)));
            }
        }
    }
    if edges.is_empty() {
        diags.push(Diagnostic::NoEdges);
    }
    match MultiGraph::new_unchecked(
        vertices.iter().copied(),
        edges.iter().map(|(id, ends)| (*id, [ends[0].0, ends[1].0])),
    ) {
        Ok(g) => {
            if !g.is_connected() {
                diags.push(Diagnostic::Disconnected);
            }
        }
        Err(e) => diags.push(Diagnostic::Structure(e)),
    }
    if diags.is_empty() {
        Ok(())
    } else {
        Err(diags)
    }
}

/// A connected graph of infinite cyclic groups with at least one edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GbsGraph {
    graph: MultiGraph,
    /// Parallel to the graph's edges in id order.
    labels: Vec<[Label; 2]>,
}

impl GbsGraph {
    pub fn new(vertices: &[VertexId], edges: &[EdgeSpec]) -> Result<Self, InvalidGraph> {
        validate(vertices, edges).map_err(InvalidGraph)?;
        Ok(Self::assemble(vertices.iter().copied(), edges.iter().cloned()))
    }

    /// Builds from trusted parts. Callers guarantee every invariant.
    pub(crate) fn assemble(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = EdgeSpec>,
    ) -> Self {
        let mut edges: Vec<EdgeSpec> = edges.into_iter().collect();
        edges.sort_by_key(|e| e.0);
        let graph = MultiGraph::new_unchecked(vertices, edges.iter().map(|(id, ends)| (*id, [ends[0].0, ends[1].0])))
            .expect("trusted graph parts");
        debug_assert!(graph.is_connected());
        debug_assert!(!edges.is_empty());
        let labels = edges
            .into_iter()
            .map(|(_, [(_, a), (_, b)])| {
                debug_assert!(!a.is_zero() && !b.is_zero());
                [a, b]
            })
            .collect();
        GbsGraph { graph, labels }
    }

    /// Convenience constructor: edge `i` gets id `i` and runs from
    /// `(origin, label)` to `(terminus, label)`; vertices are those mentioned.
    pub fn from_edges(edges: &[(u32, i64, u32, i64)]) -> Result<Self, InvalidGraph> {
        let mut vs: Vec<VertexId> = edges.iter().flat_map(|&(a, _, b, _)| [VertexId(a), VertexId(b)]).collect();
        vs.sort_unstable();
        vs.dedup();
        let specs: Vec<EdgeSpec> = edges
            .iter()
            .enumerate()
            .map(|(i, &(a, la, b, lb))| {
                (EdgeId(i as u32), [(VertexId(a), BigInt::from(la)), (VertexId(b), BigInt::from(lb))])
            })
            .collect();
        Self::new(&vs, &specs)
    }

    pub fn graph(&self) -> &MultiGraph {
        &self.graph
    }

    pub fn vertices(&self) -> &[VertexId] {
        self.graph.vertices()
    }

    pub fn edge_ids(&self) -> impl ExactSizeIterator<Item = EdgeId> + '_ {
        self.graph.edge_ids()
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn label(&self, end: EdgeEnd) -> &Label {
        let i = self.graph.edge_index(end.edge).expect("unknown edge");
        &self.labels[i][end.side as usize]
    }

    pub fn labels_of(&self, e: EdgeId) -> &[Label; 2] {
        &self.labels[self.graph.edge_index(e).expect("unknown edge")]
    }

    pub fn end_vertex(&self, end: EdgeEnd) -> VertexId {
        self.graph.end_vertex(end)
    }

    pub fn is_unit(&self, end: EdgeEnd) -> bool {
        self.label(end).abs().is_one()
    }

    /// Every edge as `(id, [(vertex, label); 2])`, in id order.
    pub fn edge_specs(&self) -> Vec<EdgeSpec> {
        self.graph
            .edge_ids()
            .zip(&self.labels)
            .map(|(id, [a, b])| {
                let [va, vb] = self.graph.endpoints(id);
                (id, [(va, a.clone()), (vb, b.clone())])
            })
            .collect()
    }

    pub fn max_abs_label(&self) -> Label {
        self.labels.iter().flat_map(|l| l.iter()).map(|l| l.abs()).max().unwrap_or_else(BigInt::one)
    }

    /// First Betti number of the underlying graph.
    pub fn betti(&self) -> usize {
        self.graph.betti()
    }

    /// False when some vertex has a single incident end and that end's label
    /// is ±1 (the Bass–Serre tree would then have a vertex of degree one).
    pub fn is_minimal(&self) -> bool {
        self.vertices().iter().all(|&v| {
            let ends = self.graph.ends_at(v);
            !(ends.len() == 1 && self.is_unit(ends[0]))
        })
    }

    /// Bass–Serre presentation relative to the breadth-first spanning tree.
    ///
    /// Generators: one letter per vertex (in id order) and one stable letter
    /// per edge outside the tree. A tree edge `e` gives `a^λ(e) = b^λ(ē)`; any
    /// other edge gives `t a^λ(e) t⁻¹ = b^λ(ē)`, oriented from end 0.
    pub fn presentation(&self) -> String {
        let names = vertex_names(self.vertex_count());
        let vname: BTreeMap<VertexId, &str> =
            self.vertices().iter().copied().zip(names.iter().map(String::as_str)).collect();
        let tree = self.graph.spanning_tree();
        let stable: Vec<EdgeId> = self.edge_ids().filter(|e| !tree.contains(e)).collect();
        let stable_names: Vec<String> = if stable.len() == 1 {
            vec!["t".to_string()]
        } else {
            (1..=stable.len()).map(|i| format!("t{}", subscript(i))).collect()
        };
        let mut gens: Vec<String> = names.clone();
        gens.extend(stable_names.iter().cloned());
        let mut rels = Vec::new();
        for e in self.edge_ids().filter(|e| tree.contains(e)) {
            let oe = OrientedEdge::forward(e);
            let [l, m] = self.labels_of(e);
            rels.push(format!(
                "{} = {}",
                power(vname[&self.graph.origin(oe)], l),
                power(vname[&self.graph.terminus(oe)], m)
            ));
        }
        for (e, t) in stable.iter().zip(&stable_names) {
            let oe = OrientedEdge::forward(*e);
            let [l, m] = self.labels_of(*e);
            rels.push(format!(
                "{t} {} {t}⁻¹ = {}",
                power(vname[&self.graph.origin(oe)], l),
                power(vname[&self.graph.terminus(oe)], m)
            ));
        }
        format!("⟨{} ∣ {}⟩", gens.join(","), rels.join(", "))
    }
}

impl fmt::Display for GbsGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (id, [(a, la), (b, lb)]) in self.edge_specs() {
            parts.push(format!("{id}: {a}({la})-{b}({lb})"));
        }
        write!(f, "{{{}}}", parts.join("; "))
    }
}

fn vertex_names(n: usize) -> Vec<String> {
    const LETTERS: &[u8] = b"abcdefghijklmnopqrs";
    if n <= LETTERS.len() {
        LETTERS[..n].iter().map(|&c| (c as char).to_string()).collect()
    } else {
        (1..=n).map(|i| format!("a{}", subscript(i))).collect()
    }
}

fn subscript(i: usize) -> String {
    i.to_string().chars().map(|c| char::from_u32('₀' as u32 + c.to_digit(10).unwrap()).unwrap()).collect()
}

fn superscript(n: &BigInt) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    let mut s = String::new();
    if n.is_negative() {
        s.push('⁻');
    }
    for c in n.abs().to_string().chars() {
        s.push(DIGITS[c.to_digit(10).unwrap() as usize]);
    }
    s
}

fn power(base: &str, exp: &BigInt) -> String {
    let mut s = String::from(base);
    if !exp.is_one() {
        let _ = write!(s, "{}", superscript(exp));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs24_two_vertex() -> GbsGraph {
        GbsGraph::from_edges(&[(0, 2, 1, 2), (1, 1, 1, 2)]).unwrap()
    }

    #[test]
    fn validate_reports_each_violation() {
        assert!(GbsGraph::from_edges(&[(0, 1, 0, 6)]).is_ok());
        let err = GbsGraph::from_edges(&[(0, 0, 0, 6)]).unwrap_err();
        assert_eq!(err.0, vec![Diagnostic::ZeroLabel(EdgeEnd::new(EdgeId(0), 0))]);
        let err = GbsGraph::from_edges(&[(0, 1, 0, 1), (1, 2, 1, 3)]).unwrap_err();
        assert_eq!(err.0, vec![Diagnostic::Disconnected]);
        let err = GbsGraph::new(&[VertexId(0)], &[]).unwrap_err();
        assert_eq!(err.0, vec![Diagnostic::NoEdges]);
    }

    #[test]
    fn betti_numbers() {
        assert_eq!(GbsGraph::from_edges(&[(0, 1, 0, 6)]).unwrap().betti(), 1);
        assert_eq!(bs24_two_vertex().betti(), 1);
        let tri = GbsGraph::from_edges(&[(0, 2, 1, 3), (1, 2, 2, 3), (2, 2, 0, 3)]).unwrap();
        assert_eq!(tri.betti(), 1);
        assert_eq!(GbsGraph::from_edges(&[(0, 2, 1, 3)]).unwrap().betti(), 0);
    }

    #[test]
    fn presentations() {
        let bs16 = GbsGraph::from_edges(&[(0, 1, 0, 6)]).unwrap();
        assert_eq!(bs16.presentation(), "⟨a,t ∣ t a t⁻¹ = a⁶⟩");
        assert_eq!(bs24_two_vertex().presentation(), "⟨a,b,t ∣ a² = b², t b t⁻¹ = b²⟩");
        let seg = GbsGraph::from_edges(&[(0, 2, 1, 3)]).unwrap();
        assert_eq!(seg.presentation(), "⟨a,b ∣ a² = b³⟩");
        let neg = GbsGraph::from_edges(&[(0, -2, 1, 3), (0, 1, 0, 1), (0, 1, 0, 1)]).unwrap();
        assert_eq!(neg.presentation(), "⟨a,b,t₁,t₂ ∣ a⁻² = b³, t₁ a t₁⁻¹ = a, t₂ a t₂⁻¹ = a⟩");
    }

    #[test]
    fn minimality() {
        assert!(GbsGraph::from_edges(&[(0, 2, 1, 3)]).unwrap().is_minimal());
        assert!(!GbsGraph::from_edges(&[(0, 1, 0, 6), (0, 2, 1, 1)]).unwrap().is_minimal());
    }
}

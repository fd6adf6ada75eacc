//! `=`/`≠` labelings: ascending loops and circles, shelters, surviving edges
//! and the retraction onto the spine.
//!
//! An end is marked `Eq` when its edge group maps onto the vertex group
//! (label ±1) and `Neq` otherwise. Everything here depends on the marks only,
//! so [`EqNeqLabeling`] can be built directly for purely combinatorial tests.
//!
//! A shelter is either an embedded path whose interior marks are all `Eq` and
//! whose two extremal marks are `Neq`, or an embedded circle all of whose
//! marks are `Eq` except possibly both marks at one special vertex, which are
//! then `Neq`. Outside ascending contexts, an edge survives some reduction
//! exactly when it lies in a shelter.

use std::collections::{BTreeSet, HashSet};

use thiserror::Error;

use crate::graph::{EdgeEnd, EdgeId, MultiGraph, OrientedEdge, VertexId, Walk};
use crate::model::GbsGraph;
use crate::moves::{collapse, MoveError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mark {
    Eq,
    Neq,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShelterError {
    /// The graph has a strict ascending loop, or collapses to one, so the
    /// shelter description of surviving edges does not apply.
    #[error("ascending context: edges {0:?}")]
    AscendingContext(Vec<EdgeId>),
    #[error("edge {0} is not collapsible")]
    NotCollapsible(EdgeId),
    #[error(transparent)]
    Move(#[from] MoveError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EqNeqLabeling {
    graph: MultiGraph,
    /// Parallel to the graph's edges in id order.
    marks: Vec<[Mark; 2]>,
}

impl EqNeqLabeling {
    /// `marks` lists the two marks of each edge in id order.
    pub fn new(graph: MultiGraph, marks: Vec<[Mark; 2]>) -> Self {
        assert_eq!(graph.edge_count(), marks.len(), "one mark pair per edge");
        EqNeqLabeling { graph, marks }
    }

    pub fn graph(&self) -> &MultiGraph {
        &self.graph
    }

    pub fn mark(&self, end: EdgeEnd) -> Mark {
        let i = self.graph.edge_index(end.edge).expect("unknown edge");
        self.marks[i][end.side as usize]
    }

    pub fn is_collapsible(&self, e: EdgeId) -> bool {
        !self.graph.is_loop(e)
            && (self.mark(EdgeEnd::new(e, 0)) == Mark::Eq || self.mark(EdgeEnd::new(e, 1)) == Mark::Eq)
    }

    pub fn collapsible_edges(&self) -> BTreeSet<EdgeId> {
        self.graph.edge_ids().filter(|&e| self.is_collapsible(e)).collect()
    }

    pub fn is_reduced(&self) -> bool {
        self.collapsible_edges().is_empty()
    }

    /// Mark-level collapse of `e`: the endpoint of its first `Eq` end merges
    /// into the other one; `Neq` marks there stay `Neq` and `Eq` marks take
    /// the mark of `e` at the surviving endpoint.
    pub fn collapse(&self, e: EdgeId) -> Option<EqNeqLabeling> {
        if !self.is_collapsible(e) || self.graph.edge_count() == 1 {
            return None;
        }
        let side = if self.mark(EdgeEnd::new(e, 0)) == Mark::Eq { 0 } else { 1 };
        let unit = EdgeEnd::new(e, side);
        let v = self.graph.end_vertex(unit);
        let w = self.graph.end_vertex(unit.opposite());
        let inherited = self.mark(unit.opposite());
        let mut edges = Vec::new();
        let mut marks = Vec::new();
        for id in self.graph.edge_ids().filter(|&x| x != e) {
            let mut ends = self.graph.endpoints(id);
            let mut m = [self.mark(EdgeEnd::new(id, 0)), self.mark(EdgeEnd::new(id, 1))];
            for s in 0..2 {
                if ends[s] == v {
                    ends[s] = w;
                    if m[s] == Mark::Eq {
                        m[s] = inherited;
                    }
                }
            }
            edges.push((id, ends));
            marks.push(m);
        }
        let graph = MultiGraph::new(self.graph.vertices().iter().copied().filter(|&x| x != v), edges)
            .expect("collapse keeps the graph connected");
        Some(EqNeqLabeling { graph, marks })
    }
}

pub fn labeling_of(g: &GbsGraph) -> EqNeqLabeling {
    let marks = g
        .edge_ids()
        .map(|e| {
            let m = |side| if g.is_unit(EdgeEnd::new(e, side)) { Mark::Eq } else { Mark::Neq };
            [m(0), m(1)]
        })
        .collect();
    EqNeqLabeling { graph: g.graph().clone(), marks }
}

/// Loops carrying exactly one `Eq` and one `Neq`.
pub fn strict_ascending_loops(l: &EqNeqLabeling) -> BTreeSet<EdgeId> {
    l.graph
        .edge_ids()
        .filter(|&e| l.graph.is_loop(e) && l.mark(EdgeEnd::new(e, 0)) != l.mark(EdgeEnd::new(e, 1)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AscendingCircle {
    /// Oriented so that every edge is `Eq` at its origin.
    pub edges: Vec<OrientedEdge>,
    /// Whether every edge is also `Eq` at its terminus. When false, collapsing
    /// all edges but one yields a strict ascending loop.
    pub terminus_all_eq: bool,
}

/// Embedded circles that can be oriented with an `Eq` mark at every origin.
pub fn ascending_circles(l: &EqNeqLabeling, max_len: usize) -> Vec<AscendingCircle> {
    let mut out = Vec::new();
    for walk in l.graph.simple_paths_and_cycles(max_len) {
        let Walk::Circle(edges) = walk else { continue };
        let reversed: Vec<OrientedEdge> = edges.iter().rev().map(|oe| oe.reversed()).collect();
        for cand in [edges, reversed] {
            if cand.iter().all(|oe| l.mark(oe.origin_end()) == Mark::Eq) {
                let terminus_all_eq = cand.iter().all(|oe| l.mark(oe.terminus_end()) == Mark::Eq);
                out.push(AscendingCircle { edges: cand, terminus_all_eq });
                break;
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Shelter {
    Path(Vec<OrientedEdge>),
    Circle { edges: Vec<OrientedEdge>, special: Option<VertexId> },
}

impl Shelter {
    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        let oes = match self {
            Shelter::Path(p) => p,
            Shelter::Circle { edges, .. } => edges,
        };
        oes.iter().map(|oe| oe.edge)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShelterReport {
    pub shelters: Vec<Shelter>,
    /// Strict ascending loops present; the shelter theory assumes none.
    pub ascending_context: Vec<EdgeId>,
}

/// Every shelter with at most `max_len` edges.
pub fn shelters(l: &EqNeqLabeling, max_len: usize) -> ShelterReport {
    let mut out = Vec::new();
    for walk in l.graph.simple_paths_and_cycles(max_len) {
        match walk {
            Walk::Path(p) => {
                let ends_ok =
                    l.mark(p[0].origin_end()) == Mark::Neq && l.mark(p[p.len() - 1].terminus_end()) == Mark::Neq;
                let interior_ok = p
                    .windows(2)
                    .all(|w| l.mark(w[0].terminus_end()) == Mark::Eq && l.mark(w[1].origin_end()) == Mark::Eq);
                if ends_ok && interior_ok {
                    out.push(Shelter::Path(p));
                }
            }
            Walk::Circle(c) => {
                // marks at each vertex of the circle: (incoming terminus, outgoing origin)
                let k = c.len();
                let mut special = None;
                let mut ok = true;
                for i in 0..k {
                    let incoming = l.mark(c[(i + k - 1) % k].terminus_end());
                    let outgoing = l.mark(c[i].origin_end());
                    match (incoming, outgoing) {
                        (Mark::Eq, Mark::Eq) => {}
                        (Mark::Neq, Mark::Neq) if special.is_none() => {
                            special = Some(l.graph.origin(c[i]));
                        }
                        _ => ok = false,
                    }
                }
                if ok {
                    out.push(Shelter::Circle { edges: c, special });
                }
            }
        }
    }
    ShelterReport { shelters: out, ascending_context: strict_ascending_loops(l).into_iter().collect() }
}

/// Edges contained in some shelter.
///
/// Refuses labelings with a strict ascending loop, and labelings with an
/// ascending circle that is not `Eq` at every terminus, since collapsing such
/// a circle down to one edge produces a strict ascending loop.
pub fn surviving_edges(l: &EqNeqLabeling) -> Result<BTreeSet<EdgeId>, ShelterError> {
    let report = shelters(l, l.graph.edge_count());
    if !report.ascending_context.is_empty() {
        return Err(ShelterError::AscendingContext(report.ascending_context));
    }
    if let Some(c) = ascending_circles(l, l.graph.edge_count()).into_iter().find(|c| !c.terminus_all_eq) {
        return Err(ShelterError::AscendingContext(c.edges.iter().map(|oe| oe.edge).collect()));
    }
    Ok(report.shelters.iter().flat_map(|s| s.edges()).collect())
}

/// Surviving edges straight from the definition: `e` survives when some
/// sequence of collapses avoiding `e` reaches a reduced labeling. A tree
/// that collapses to a point keeps nothing. Valid in any context,
/// exponential in the number of edges.
pub fn surviving_edges_by_reduction(l: &EqNeqLabeling) -> BTreeSet<EdgeId> {
    // Explore all collapse sequences once and record, for every reduced
    // endpoint, which original edges are still present.
    let mut reached: HashSet<BTreeSet<EdgeId>> = HashSet::new();
    let mut seen: HashSet<EqNeqLabeling> = HashSet::new();
    let mut stack = vec![l.clone()];
    while let Some(cur) = stack.pop() {
        if !seen.insert(cur.clone()) {
            continue;
        }
        let coll = cur.collapsible_edges();
        if coll.is_empty() {
            reached.insert(cur.graph.edge_ids().collect());
            continue;
        }
        if cur.graph.edge_count() == 1 {
            // collapsing the last edge leaves a point, where nothing survives
            continue;
        }
        for e in coll {
            if let Some(next) = cur.collapse(e) {
                stack.push(next);
            }
        }
    }
    reached.into_iter().flatten().collect()
}

pub fn is_in_spine(g: &GbsGraph) -> Result<bool, ShelterError> {
    Ok(surviving_edges(&labeling_of(g))?.len() == g.edge_count())
}

/// Whether every edge survives, by the definition (works in ascending contexts).
pub fn is_in_spine_by_reduction(g: &GbsGraph) -> bool {
    surviving_edges_by_reduction(&labeling_of(g)).len() == g.edge_count()
}

/// Collapses non-surviving edges, lowest id first, until every edge survives.
pub fn retract_to_spine(g: &GbsGraph) -> Result<GbsGraph, ShelterError> {
    let mut cur = g.clone();
    loop {
        let alive = surviving_edges(&labeling_of(&cur))?;
        let Some(dead) = cur.edge_ids().find(|e| !alive.contains(e)) else {
            return Ok(cur);
        };
        if !crate::moves::is_collapsible(&cur, dead) {
            return Err(ShelterError::NotCollapsible(dead));
        }
        cur = collapse(&cur, dead)?.graph;
    }
}

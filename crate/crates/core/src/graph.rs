//! Connected multigraphs with half-edge incidence.
//!
//! Every edge has two ends, `end(e, 0)` and `end(e, 1)`. Loops and parallel
//! edges are allowed; a loop has two distinct ends attached to the same
//! vertex. Ids are plain integers assigned by the caller and never renumbered
//! by read operations.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// One end of an edge. `side` is 0 or 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeEnd {
    pub edge: EdgeId,
    pub side: u8,
}

impl EdgeEnd {
    pub fn new(edge: EdgeId, side: u8) -> Self {
        debug_assert!(side < 2);
        EdgeEnd { edge, side }
    }

    pub fn opposite(self) -> Self {
        EdgeEnd { edge: self.edge, side: 1 - self.side }
    }
}

impl fmt::Display for EdgeEnd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.edge, self.side)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    /// From end 0 to end 1.
    Forward,
    Backward,
}

/// An edge with a chosen orientation. The origin of a forward edge is its end 0.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrientedEdge {
    pub edge: EdgeId,
    pub direction: Direction,
}

impl OrientedEdge {
    pub fn forward(edge: EdgeId) -> Self {
        OrientedEdge { edge, direction: Direction::Forward }
    }

    pub fn backward(edge: EdgeId) -> Self {
        OrientedEdge { edge, direction: Direction::Backward }
    }

    pub fn reversed(self) -> Self {
        let direction = match self.direction {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        };
        OrientedEdge { edge: self.edge, direction }
    }

    /// The end at the origin.
    pub fn origin_end(self) -> EdgeEnd {
        match self.direction {
            Direction::Forward => EdgeEnd::new(self.edge, 0),
            Direction::Backward => EdgeEnd::new(self.edge, 1),
        }
    }

    /// The end at the terminus.
    pub fn terminus_end(self) -> EdgeEnd {
        self.origin_end().opposite()
    }

    /// The orientation whose origin is `end`.
    pub fn from_origin_end(end: EdgeEnd) -> Self {
        if end.side == 0 {
            OrientedEdge::forward(end.edge)
        } else {
            OrientedEdge::backward(end.edge)
        }
    }
}

impl fmt::Display for OrientedEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = match self.direction {
            Direction::Forward => '+',
            Direction::Backward => '-',
        };
        write!(f, "{}{}", self.edge, sign)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(VertexId),
    #[error("duplicate edge id {0}")]
    DuplicateEdge(EdgeId),
    #[error("end {end} refers to unknown vertex {vertex}")]
    UnknownVertex { end: EdgeEnd, vertex: VertexId },
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has no vertices")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct EdgeRecord {
    id: EdgeId,
    ends: [VertexId; 2],
}

/// A connected multigraph. Vertices and edges are kept sorted by id.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiGraph {
    vertices: Vec<VertexId>,
    edges: Vec<EdgeRecord>,
}

impl MultiGraph {
    pub fn new(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = (EdgeId, [VertexId; 2])>,
    ) -> Result<Self, GraphError> {
        let g = Self::new_unchecked(vertices, edges)?;
        if !g.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    /// Builds the graph checking ids and incidence but not connectivity.
    pub(crate) fn new_unchecked(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: impl IntoIterator<Item = (EdgeId, [VertexId; 2])>,
    ) -> Result<Self, GraphError> {
        let mut vs: Vec<VertexId> = vertices.into_iter().collect();
        vs.sort_unstable();
        if let Some(w) = vs.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::DuplicateVertex(w[0]));
        }
        if vs.is_empty() {
            return Err(GraphError::Empty);
        }
        let mut es: Vec<EdgeRecord> = edges.into_iter().map(|(id, ends)| EdgeRecord { id, ends }).collect();
        es.sort_unstable_by_key(|e| e.id);
        if let Some(w) = es.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(GraphError::DuplicateEdge(w[0].id));
        }
        for e in &es {
            for (side, v) in e.ends.iter().enumerate() {
                if vs.binary_search(v).is_err() {
                    return Err(GraphError::UnknownVertex { end: EdgeEnd::new(e.id, side as u8), vertex: *v });
                }
            }
        }
        Ok(MultiGraph { vertices: vs, edges: es })
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edge_ids(&self) -> impl ExactSizeIterator<Item = EdgeId> + '_ {
        self.edges.iter().map(|e| e.id)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edge_index(e).is_some()
    }

    /// Position of `e` in id order.
    pub fn edge_index(&self, e: EdgeId) -> Option<usize> {
        self.edges.binary_search_by_key(&e, |r| r.id).ok()
    }

    /// Position of `v` in id order.
    pub fn vertex_index(&self, v: VertexId) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }

    /// The two endpoints of `e`. Panics on an unknown edge.
    pub fn endpoints(&self, e: EdgeId) -> [VertexId; 2] {
        self.edges[self.edge_index(e).expect("unknown edge")].ends
    }

    pub fn end_vertex(&self, end: EdgeEnd) -> VertexId {
        self.endpoints(end.edge)[end.side as usize]
    }

    pub fn origin(&self, oe: OrientedEdge) -> VertexId {
        self.end_vertex(oe.origin_end())
    }

    pub fn terminus(&self, oe: OrientedEdge) -> VertexId {
        self.end_vertex(oe.terminus_end())
    }

    pub fn is_loop(&self, e: EdgeId) -> bool {
        let [a, b] = self.endpoints(e);
        a == b
    }

    /// All ends attached to `v`, in (edge id, side) order.
    pub fn ends_at(&self, v: VertexId) -> Vec<EdgeEnd> {
        let mut out = Vec::new();
        for e in &self.edges {
            for side in 0..2u8 {
                if e.ends[side as usize] == v {
                    out.push(EdgeEnd::new(e.id, side));
                }
            }
        }
        out
    }

    pub fn all_ends(&self) -> impl Iterator<Item = EdgeEnd> + '_ {
        self.edges.iter().flat_map(|e| [EdgeEnd::new(e.id, 0), EdgeEnd::new(e.id, 1)])
    }

    /// Number of edge ends at `v` (a loop counts twice).
    pub fn valence(&self, v: VertexId) -> usize {
        self.edges.iter().map(|e| e.ends.iter().filter(|&&w| w == v).count()).sum()
    }

    pub fn max_vertex_id(&self) -> VertexId {
        *self.vertices.last().expect("graph has a vertex")
    }

    pub fn max_edge_id(&self) -> Option<EdgeId> {
        self.edges.last().map(|e| e.id)
    }

    pub fn is_connected(&self) -> bool {
        self.components_of(self.edges.iter().map(|e| e.id)).len() == 1
    }

    /// Connected components of the spanning subgraph with edge set `edges`.
    pub fn components_of(&self, edges: impl IntoIterator<Item = EdgeId>) -> Vec<BTreeSet<VertexId>> {
        let mut parent: BTreeMap<VertexId, VertexId> = self.vertices.iter().map(|&v| (v, v)).collect();
        fn find(parent: &mut BTreeMap<VertexId, VertexId>, v: VertexId) -> VertexId {
            let p = parent[&v];
            if p == v {
                return v;
            }
            let r = find(parent, p);
            parent.insert(v, r);
            r
        }
        for e in edges {
            let [a, b] = self.endpoints(e);
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra != rb {
                parent.insert(ra.max(rb), ra.min(rb));
            }
        }
        let mut comps: BTreeMap<VertexId, BTreeSet<VertexId>> = BTreeMap::new();
        for &v in &self.vertices {
            let r = find(&mut parent, v);
            comps.entry(r).or_default().insert(v);
        }
        comps.into_values().collect()
    }

    /// First Betti number `|E| - |V| + 1`.
    pub fn betti(&self) -> usize {
        self.edges.len() + 1 - self.vertices.len()
    }

    /// Breadth-first spanning tree rooted at the lowest vertex, scanning edges
    /// in id order. Returns the tree edges.
    pub fn spanning_tree(&self) -> BTreeSet<EdgeId> {
        let root = self.vertices[0];
        let mut seen: BTreeSet<VertexId> = BTreeSet::from([root]);
        let mut tree = BTreeSet::new();
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for e in &self.edges {
                let [a, b] = e.ends;
                let other = if a == v {
                    b
                } else if b == v {
                    a
                } else {
                    continue;
                };
                if seen.insert(other) {
                    tree.insert(e.id);
                    queue.push_back(other);
                }
            }
        }
        tree
    }

    /// Oriented path inside `tree` from `from` to `to`.
    fn tree_path(&self, tree: &BTreeSet<EdgeId>, from: VertexId, to: VertexId) -> Vec<OrientedEdge> {
        let mut prev: BTreeMap<VertexId, OrientedEdge> = BTreeMap::new();
        let mut queue = VecDeque::from([from]);
        let mut seen = BTreeSet::from([from]);
        while let Some(v) = queue.pop_front() {
            if v == to {
                break;
            }
            for &e in tree {
                for oe in [OrientedEdge::forward(e), OrientedEdge::backward(e)] {
                    if self.origin(oe) == v {
                        let w = self.terminus(oe);
                        if seen.insert(w) {
                            prev.insert(w, oe);
                            queue.push_back(w);
                        }
                    }
                }
            }
        }
        let mut path = Vec::new();
        let mut cur = to;
        while cur != from {
            let oe = prev[&cur];
            path.push(oe);
            cur = self.origin(oe);
        }
        path.reverse();
        path
    }

    /// A fundamental system of cycles with respect to [`Self::spanning_tree`].
    ///
    /// Each cycle is a closed oriented walk starting with its unique non-tree
    /// edge (traversed forward) followed by the tree path back to its origin.
    pub fn cycle_basis(&self) -> Vec<Vec<OrientedEdge>> {
        let tree = self.spanning_tree();
        self.edges
            .iter()
            .filter(|e| !tree.contains(&e.id))
            .map(|e| {
                let oe = OrientedEdge::forward(e.id);
                let mut walk = vec![oe];
                walk.extend(self.tree_path(&tree, self.terminus(oe), self.origin(oe)));
                walk
            })
            .collect()
    }

    /// Embedded edge-paths and embedded circles with at most `max_len` edges.
    ///
    /// Each path is reported once up to reversal (oriented so that its first
    /// vertex is lower than its last one); each circle once up to reversal and
    /// rotation (starting at its lowest vertex; for length ≥ 2 oriented so the
    /// first edge id is lower than the last).
    pub fn simple_paths_and_cycles(&self, max_len: usize) -> Vec<Walk> {
        let mut out = Vec::new();
        let mut oriented: Vec<OrientedEdge> = Vec::with_capacity(self.edges.len() * 2);
        for e in &self.edges {
            oriented.push(OrientedEdge::forward(e.id));
            oriented.push(OrientedEdge::backward(e.id));
        }
        for &start in &self.vertices {
            let mut path = Vec::new();
            let mut visited = vec![start];
            self.extend_walks(start, start, max_len, &oriented, &mut path, &mut visited, &mut out);
        }
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn extend_walks(
        &self,
        start: VertexId,
        at: VertexId,
        max_len: usize,
        oriented: &[OrientedEdge],
        path: &mut Vec<OrientedEdge>,
        visited: &mut Vec<VertexId>,
        out: &mut Vec<Walk>,
    ) {
        if path.len() >= max_len {
            return;
        }
        for &oe in oriented {
            if self.origin(oe) != at || path.iter().any(|p| p.edge == oe.edge) {
                continue;
            }
            // A loop traversed backward is the same circle as forward.
            if self.is_loop(oe.edge) && oe.direction == Direction::Backward {
                continue;
            }
            let next = self.terminus(oe);
            path.push(oe);
            if next == start {
                let canonical = if path.len() == 1 { true } else { path[0].edge < path[path.len() - 1].edge };
                let lowest = visited.iter().all(|&v| v >= start);
                if canonical && lowest {
                    out.push(Walk::Circle(path.clone()));
                }
            } else if !visited.contains(&next) {
                if start < next {
                    out.push(Walk::Path(path.clone()));
                }
                visited.push(next);
                self.extend_walks(start, next, max_len, oriented, path, visited, out);
                visited.pop();
            }
            path.pop();
        }
    }
}

/// An embedded edge-path or an embedded circle, as an oriented edge sequence.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Walk {
    Path(Vec<OrientedEdge>),
    Circle(Vec<OrientedEdge>),
}

impl Walk {
    pub fn edges(&self) -> &[OrientedEdge] {
        match self {
            Walk::Path(p) | Walk::Circle(p) => p,
        }
    }

    pub fn is_circle(&self) -> bool {
        matches!(self, Walk::Circle(_))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(nv: u32, edges: &[(u32, u32)]) -> MultiGraph {
        MultiGraph::new(
            (0..nv).map(VertexId),
            edges.iter().enumerate().map(|(i, &(a, b))| (EdgeId(i as u32), [VertexId(a), VertexId(b)])),
        )
        .unwrap()
    }

    fn counts(walks: &[Walk]) -> (usize, usize) {
        let circles = walks.iter().filter(|w| w.is_circle()).count();
        (walks.len() - circles, circles)
    }

    #[test]
    fn cycle_basis_sizes() {
        assert_eq!(graph(1, &[(0, 0)]).cycle_basis().len(), 1);
        let tri = graph(3, &[(0, 1), (1, 2), (2, 0)]);
        let basis = tri.cycle_basis();
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0].len(), 3);
        assert_eq!(graph(2, &[(0, 1), (0, 1), (0, 0)]).cycle_basis().len(), 2);
    }

    #[test]
    fn cycle_basis_walks_are_closed() {
        let g = graph(3, &[(0, 1), (1, 2), (2, 0), (1, 1), (2, 1)]);
        for cyc in g.cycle_basis() {
            for w in cyc.windows(2) {
                assert_eq!(g.terminus(w[0]), g.origin(w[1]));
            }
            assert_eq!(g.terminus(*cyc.last().unwrap()), g.origin(cyc[0]));
        }
    }

    #[test]
    fn triangle_walks() {
        let tri = graph(3, &[(0, 1), (1, 2), (2, 0)]);
        let walks = tri.simple_paths_and_cycles(3);
        let lens: Vec<usize> = walks.iter().filter(|w| !w.is_circle()).map(|w| w.edges().len()).collect();
        assert_eq!(lens.iter().filter(|&&l| l == 1).count(), 3);
        assert_eq!(lens.iter().filter(|&&l| l == 2).count(), 3);
        assert_eq!(counts(&walks), (6, 1));
    }

    #[test]
    fn loop_and_segment_walks() {
        assert_eq!(counts(&graph(1, &[(0, 0)]).simple_paths_and_cycles(4)), (0, 1));
        assert_eq!(counts(&graph(2, &[(0, 1)]).simple_paths_and_cycles(4)), (1, 0));
        // two parallel segments: 2 paths, 1 circle of length 2
        assert_eq!(counts(&graph(2, &[(0, 1), (1, 0)]).simple_paths_and_cycles(4)), (2, 1));
    }

    #[test]
    fn rejects_disconnected() {
        let r = MultiGraph::new(
            [VertexId(0), VertexId(1)],
            [(EdgeId(0), [VertexId(0), VertexId(0)]), (EdgeId(1), [VertexId(1), VertexId(1)])],
        );
        assert_eq!(r.unwrap_err(), GraphError::Disconnected);
    }

    #[test]
    fn oriented_edge_reversal() {
        let g = graph(2, &[(0, 1)]);
        let oe = OrientedEdge::forward(EdgeId(0));
        assert_eq!(oe.reversed().reversed(), oe);
        assert_eq!(g.origin(oe.reversed()), g.terminus(oe));
    }
}

//! Elementary collapses and expansions, slides, redundant-vertex removal.
//!
//! Label rules, with `a_v` the generator at `v` and `x_e` that of edge `e`:
//!
//! * collapse of `e` with unit end `(v, ε)` and other end `(w, m)`: then
//!   `a_v = x_e^ε = a_w^{εm}`, so every other end `(v, k)` becomes `(w, kεm)`;
//! * expansion at `v` with divisor `d` and unit sign `s`: a new edge
//!   `(v, d)`–`(w, s)` gives `a_w = a_v^{ds}`, so each moved end `(v, k)`
//!   becomes `(w, ks/d)`; collapsing the new edge restores the input exactly;
//! * slide of an end `(v, k)` across `e` from `(v, l)` to `(w, m)` with
//!   `l | k`: `a_v^k = x_e^{k/l} = a_w^{mk/l}`, so the end becomes `(w, mk/l)`.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::canon::{canonical_form, CanonError, CanonicalForm};
use crate::graph::{Direction, EdgeEnd, EdgeId, OrientedEdge, VertexId};
use crate::model::{EdgeSpec, GbsGraph, Label};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Move {
    Collapse(EdgeId),
    Expand { vertex: VertexId, divisor: Label, ends: Vec<EdgeEnd>, unit_sign: i8 },
    Slide { end: EdgeEnd, across: OrientedEdge },
    RemoveRedundant(VertexId),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoveError {
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("end {0} is not attached at the expanded vertex")]
    UnknownEnd(EdgeEnd),
    #[error("edge {0} is not collapsible")]
    NotCollapsible(EdgeId),
    #[error("collapse would leave a graph without edges")]
    NoEdges,
    #[error("divisor does not divide the label of {0}")]
    DivisorMismatch(EdgeEnd),
    #[error("divisor must be nonzero")]
    ZeroDivisor,
    #[error("unit sign must be +1 or -1")]
    BadSign,
    #[error("end {end} is not at the origin of {across}")]
    NotAdjacent { end: EdgeEnd, across: OrientedEdge },
    #[error("an end cannot slide across its own edge")]
    SameEdge,
    #[error("label {k} is not divisible by {l}")]
    NotDivisible { k: Label, l: Label },
    #[error("vertex {0} is not redundant")]
    NotRedundant(VertexId),
}

/// Result of applying a move: the new graph and a move undoing it.
#[derive(Debug, Clone)]
pub struct Applied {
    pub graph: GbsGraph,
    pub inverse: Move,
}

impl Move {
    pub fn apply(&self, g: &GbsGraph) -> Result<Applied, MoveError> {
        match self {
            Move::Collapse(e) => collapse(g, *e),
            Move::Expand { vertex, divisor, ends, unit_sign } => expand(g, *vertex, divisor, ends, *unit_sign),
            Move::Slide { end, across } => slide(g, *end, *across),
            Move::RemoveRedundant(v) => remove_redundant(g, *v),
        }
    }

    pub fn is_slide(&self) -> bool {
        matches!(self, Move::Slide { .. })
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Collapse(e) => write!(f, "collapse {e}"),
            Move::Expand { vertex, divisor, ends, unit_sign } => {
                let ends: Vec<String> = ends.iter().map(|e| e.to_string()).collect();
                let sign = if *unit_sign < 0 { '-' } else { '+' };
                write!(f, "expand {vertex} d={divisor} ends=[{}] sign={sign}", ends.join(","))
            }
            Move::Slide { end, across } => write!(f, "slide {end} across {across}"),
            Move::RemoveRedundant(v) => write!(f, "remove-redundant {v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot parse move: {0}")]
pub struct ParseMoveError(String);

fn parse_id(s: &str, prefix: char) -> Result<u32, ParseMoveError> {
    s.strip_prefix(prefix)
        .and_then(|n| n.parse().ok())
        .ok_or_else(|| ParseMoveError(format!("expected {prefix}<number>, got {s:?}")))
}

fn parse_end(s: &str) -> Result<EdgeEnd, ParseMoveError> {
    let (e, side) = s.split_once('.').ok_or_else(|| ParseMoveError(format!("expected e<id>.<side>, got {s:?}")))?;
    let side: u8 = match side {
        "0" => 0,
        "1" => 1,
        _ => return Err(ParseMoveError(format!("bad side in {s:?}"))),
    };
    Ok(EdgeEnd::new(EdgeId(parse_id(e, 'e')?), side))
}

impl FromStr for Move {
    type Err = ParseMoveError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let words: Vec<&str> = s.split_whitespace().collect();
        match words.as_slice() {
            ["collapse", e] => Ok(Move::Collapse(EdgeId(parse_id(e, 'e')?))),
            ["remove-redundant", v] => Ok(Move::RemoveRedundant(VertexId(parse_id(v, 'v')?))),
            ["slide", end, "across", oe] => {
                let end = parse_end(end)?;
                let (edge, dir) = if let Some(x) = oe.strip_suffix('+') {
                    (x, Direction::Forward)
                } else if let Some(x) = oe.strip_suffix('-') {
                    (x, Direction::Backward)
                } else {
                    return Err(ParseMoveError(format!("orientation suffix missing in {oe:?}")));
                };
                let across = OrientedEdge { edge: EdgeId(parse_id(edge, 'e')?), direction: dir };
                Ok(Move::Slide { end, across })
            }
            ["expand", v, d, ends, sign] => {
                let vertex = VertexId(parse_id(v, 'v')?);
                let divisor: Label = d
                    .strip_prefix("d=")
                    .and_then(|x| x.parse().ok())
                    .ok_or_else(|| ParseMoveError(format!("bad divisor {d:?}")))?;
                let list = ends
                    .strip_prefix("ends=[")
                    .and_then(|x| x.strip_suffix(']'))
                    .ok_or_else(|| ParseMoveError(format!("bad end list {ends:?}")))?;
                let ends = if list.is_empty() {
                    Vec::new()
                } else {
                    list.split(',').map(parse_end).collect::<Result<_, _>>()?
                };
                let unit_sign = match *sign {
                    "sign=+" => 1,
                    "sign=-" => -1,
                    _ => return Err(ParseMoveError(format!("bad sign {sign:?}"))),
                };
                Ok(Move::Expand { vertex, divisor, ends, unit_sign })
            }
            _ => Err(ParseMoveError(s.to_string())),
        }
    }
}

/// Segments carrying at least one ±1 label.
pub fn collapsible_edges(g: &GbsGraph) -> BTreeSet<EdgeId> {
    g.edge_ids().filter(|&e| is_collapsible(g, e)).collect()
}

pub fn is_collapsible(g: &GbsGraph, e: EdgeId) -> bool {
    !g.graph().is_loop(e) && (g.is_unit(EdgeEnd::new(e, 0)) || g.is_unit(EdgeEnd::new(e, 1)))
}

pub fn is_reduced(g: &GbsGraph) -> bool {
    g.edge_ids().all(|e| !is_collapsible(g, e))
}

/// Collapses `e`, merging the endpoint of its first unit end into the other.
pub fn collapse(g: &GbsGraph, e: EdgeId) -> Result<Applied, MoveError> {
    if !g.graph().contains_edge(e) {
        return Err(MoveError::UnknownEdge(e));
    }
    if !is_collapsible(g, e) {
        return Err(MoveError::NotCollapsible(e));
    }
    let side = if g.is_unit(EdgeEnd::new(e, 0)) { 0 } else { 1 };
    collapse_at(g, EdgeEnd::new(e, side))
}

/// Collapses the edge of `unit_end`, which must carry a ±1 label, merging the
/// vertex at `unit_end` into the other endpoint.
pub(crate) fn collapse_at(g: &GbsGraph, unit_end: EdgeEnd) -> Result<Applied, MoveError> {
    let e = unit_end.edge;
    let v = g.end_vertex(unit_end);
    let w = g.end_vertex(unit_end.opposite());
    let eps = g.label(unit_end).clone();
    let m = g.label(unit_end.opposite()).clone();
    let factor = &eps * &m;
    let mut moved = Vec::new();
    let specs: Vec<EdgeSpec> = g
        .edge_specs()
        .into_iter()
        .filter(|(id, _)| *id != e)
        .map(|(id, mut ends)| {
            for (side, (vert, label)) in ends.iter_mut().enumerate() {
                if *vert == v {
                    *vert = w;
                    *label *= &factor;
                    moved.push(EdgeEnd::new(id, side as u8));
                }
            }
            (id, ends)
        })
        .collect();
    if specs.is_empty() {
        return Err(MoveError::NoEdges);
    }
    let graph = GbsGraph::assemble(g.vertices().iter().copied().filter(|&x| x != v), specs);
    let unit_sign = if eps.is_positive() { 1 } else { -1 };
    Ok(Applied { graph, inverse: Move::Expand { vertex: w, divisor: m, ends: moved, unit_sign } })
}

/// Elementary expansion at `v`: a new vertex and a new edge `(v, d)`–(new, s)`
/// with the ends in `ends` moved to the new vertex.
pub fn expand(g: &GbsGraph, v: VertexId, d: &Label, ends: &[EdgeEnd], unit_sign: i8) -> Result<Applied, MoveError> {
    if !g.graph().contains_vertex(v) {
        return Err(MoveError::UnknownVertex(v));
    }
    if d.is_zero() {
        return Err(MoveError::ZeroDivisor);
    }
    if unit_sign != 1 && unit_sign != -1 {
        return Err(MoveError::BadSign);
    }
    let ends: BTreeSet<EdgeEnd> = ends.iter().copied().collect();
    for &end in &ends {
        if !g.graph().contains_edge(end.edge) || g.end_vertex(end) != v {
            return Err(MoveError::UnknownEnd(end));
        }
        if !g.label(end).is_multiple_of(d) {
            return Err(MoveError::DivisorMismatch(end));
        }
    }
    let w = VertexId(g.graph().max_vertex_id().0 + 1);
    let f = EdgeId(g.graph().max_edge_id().map_or(0, |x| x.0 + 1));
    let s = BigInt::from(unit_sign);
    let mut specs: Vec<EdgeSpec> = g
        .edge_specs()
        .into_iter()
        .map(|(id, mut pair)| {
            for (side, (vert, label)) in pair.iter_mut().enumerate() {
                if ends.contains(&EdgeEnd::new(id, side as u8)) {
                    *vert = w;
                    *label = &*label * &s / d;
                }
            }
            (id, pair)
        })
        .collect();
    specs.push((f, [(v, d.clone()), (w, s)]));
    let graph = GbsGraph::assemble(g.vertices().iter().copied().chain([w]), specs);
    Ok(Applied { graph, inverse: Move::Collapse(f) })
}

/// Moves `end` across `across`, from the origin of `across` to its terminus.
pub fn slide(g: &GbsGraph, end: EdgeEnd, across: OrientedEdge) -> Result<Applied, MoveError> {
    for e in [end.edge, across.edge] {
        if !g.graph().contains_edge(e) {
            return Err(MoveError::UnknownEdge(e));
        }
    }
    if end.edge == across.edge {
        return Err(MoveError::SameEdge);
    }
    let v = g.end_vertex(end);
    if g.graph().origin(across) != v {
        return Err(MoveError::NotAdjacent { end, across });
    }
    let l = g.label(across.origin_end());
    let m = g.label(across.terminus_end());
    let k = g.label(end);
    if !k.is_multiple_of(l) {
        return Err(MoveError::NotDivisible { k: k.clone(), l: l.clone() });
    }
    let new_label = m * (k / l);
    let target = g.graph().terminus(across);
    let specs: Vec<EdgeSpec> = g
        .edge_specs()
        .into_iter()
        .map(|(id, mut pair)| {
            if id == end.edge {
                pair[end.side as usize] = (target, new_label.clone());
            }
            (id, pair)
        })
        .collect();
    let graph = GbsGraph::assemble(g.vertices().iter().copied(), specs);
    Ok(Applied { graph, inverse: Move::Slide { end, across: across.reversed() } })
}

/// Every legal single-end slide of `g`, in (end, across) order.
pub fn legal_slides(g: &GbsGraph) -> Vec<Move> {
    let graph = g.graph();
    let mut out = Vec::new();
    for end in graph.all_ends() {
        let v = graph.end_vertex(end);
        for across_end in graph.ends_at(v) {
            if across_end.edge == end.edge {
                continue;
            }
            if g.label(end).is_multiple_of(g.label(across_end)) {
                out.push(Move::Slide { end, across: OrientedEdge::from_origin_end(across_end) });
            }
        }
    }
    out
}

/// Vertices with exactly two incident ends, on distinct edges, both ±1.
pub fn redundant_vertices(g: &GbsGraph) -> BTreeSet<VertexId> {
    g.vertices().iter().copied().filter(|&v| redundant_pair(g, v).is_some()).collect()
}

fn redundant_pair(g: &GbsGraph, v: VertexId) -> Option<[EdgeEnd; 2]> {
    let ends = g.graph().ends_at(v);
    match ends.as_slice() {
        [a, b] if a.edge != b.edge && g.is_unit(*a) && g.is_unit(*b) => Some([*a, *b]),
        _ => None,
    }
}

/// Fuses the two edges at a redundant vertex into the lower-id one.
pub fn remove_redundant(g: &GbsGraph, v: VertexId) -> Result<Applied, MoveError> {
    if !g.graph().contains_vertex(v) {
        return Err(MoveError::UnknownVertex(v));
    }
    let [_, b] = redundant_pair(g, v).ok_or(MoveError::NotRedundant(v))?;
    collapse_at(g, b)
}

/// All reduced graphs reachable by sequences of collapses.
///
/// With `dedup`, results are distinct up to canonical form; otherwise they
/// are distinct as labeled graphs with ids.
pub fn all_reductions(g: &GbsGraph, dedup: bool) -> Result<Vec<GbsGraph>, CanonError> {
    let mut seen: HashSet<GbsGraph> = HashSet::new();
    let mut out: Vec<GbsGraph> = Vec::new();
    let mut forms: HashSet<CanonicalForm> = HashSet::new();
    let mut stack = vec![g.clone()];
    while let Some(cur) = stack.pop() {
        if !seen.insert(cur.clone()) {
            continue;
        }
        let next: Vec<GbsGraph> =
            collapsible_edges(&cur).into_iter().filter_map(|e| collapse(&cur, e).ok()).map(|a| a.graph).collect();
        if next.is_empty() {
            if !dedup || forms.insert(canonical_form(&cur)?) {
                out.push(cur);
            }
            continue;
        }
        stack.extend(next);
    }
    Ok(out)
}

/// Collapses the edges of `forest` one at a time, always taking the lowest
/// id that is currently collapsible. Fails if some edge never becomes
/// collapsible.
pub fn collapse_all(g: &GbsGraph, forest: &BTreeSet<EdgeId>) -> Result<(GbsGraph, Vec<Move>), MoveError> {
    let mut cur = g.clone();
    let mut left = forest.clone();
    let mut moves = Vec::new();
    while let Some(&e) = left.iter().find(|&&e| is_collapsible(&cur, e)) {
        cur = collapse(&cur, e)?.graph;
        moves.push(Move::Collapse(e));
        left.remove(&e);
    }
    match left.first() {
        Some(&e) => Err(MoveError::NotCollapsible(e)),
        None => Ok((cur, moves)),
    }
}

/// Deterministic reduction: repeatedly collapse the lowest-id collapsible edge.
pub fn reduce(g: &GbsGraph) -> (GbsGraph, Vec<Move>) {
    let mut cur = g.clone();
    let mut moves = Vec::new();
    while let Some(e) = collapsible_edges(&cur).first().copied() {
        match collapse(&cur, e) {
            Ok(a) => {
                cur = a.graph;
                moves.push(Move::Collapse(e));
            }
            Err(_) => break,
        }
    }
    (cur, moves)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub mv: Move,
    pub form: CanonicalForm,
}

/// A sequence of moves with the canonical form reached after each one.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MoveTrace {
    pub steps: Vec<TraceStep>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("step {step}: {source}")]
    Move { step: usize, source: MoveError },
    #[error("step {step}: reached a different canonical form than recorded")]
    Mismatch { step: usize },
    #[error(transparent)]
    Canon(#[from] CanonError),
}

impl MoveTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn moves(&self) -> impl Iterator<Item = &Move> {
        self.steps.iter().map(|s| &s.mv)
    }

    /// Applies `mv` to `g`, appending the step. Returns the new graph.
    pub fn push(&mut self, g: &GbsGraph, mv: Move) -> Result<GbsGraph, ReplayError> {
        let step = self.steps.len();
        let a = mv.apply(g).map_err(|source| ReplayError::Move { step, source })?;
        self.steps.push(TraceStep { mv, form: canonical_form(&a.graph)? });
        Ok(a.graph)
    }

    /// Replays from `start`, checking every recorded canonical form.
    pub fn replay(&self, start: &GbsGraph) -> Result<GbsGraph, ReplayError> {
        let mut cur = start.clone();
        for (step, s) in self.steps.iter().enumerate() {
            cur = s.mv.apply(&cur).map_err(|source| ReplayError::Move { step, source })?.graph;
            if canonical_form(&cur)? != s.form {
                return Err(ReplayError::Mismatch { step });
            }
        }
        Ok(cur)
    }

    pub fn is_pure_slides(&self) -> bool {
        self.steps.iter().all(|s| s.mv.is_slide())
    }
}

/// `gcd` of the labels of `ends`, positive.
pub(crate) fn gcd_of(g: &GbsGraph, ends: &[EdgeEnd]) -> Label {
    ends.iter().fold(BigInt::zero(), |acc, &e| acc.gcd(g.label(e)))
}

/// Positive divisors `> 1` of `n`.
pub(crate) fn divisors_above_one(n: &Label) -> Vec<Label> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::from(2);
    while d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
        }
        d += BigInt::one();
    }
    out
}

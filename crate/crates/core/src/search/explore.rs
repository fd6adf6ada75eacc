//! Breadth-first closures, bidirectional connection and classification.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;

use super::neighbors::{collapse_moves, elementary_moves, expansion_candidates, slide_moves, ExpansionRange, Neighbor};
use super::{Classification, MoveSet, SearchBounds, SearchError, SpaceReport};
use crate::canon::{canonical_form, CanonError, CanonicalForm};
use crate::model::GbsGraph;
use crate::modulus::{has_integer_modulus, modular_image, IntegerModulus};
use crate::moves::{is_reduced, redundant_vertices, Move, MoveTrace};
use crate::shelters::{is_in_spine, is_in_spine_by_reduction, labeling_of, strict_ascending_loops};

struct Node {
    graph: GbsGraph,
    parent: Option<(usize, Move)>,
    depth: usize,
}

/// A frontier node, its new neighbours with their forms, and whether any were pruned.
type Expansion = (usize, Vec<(Neighbor, CanonicalForm)>, bool);

/// A breadth-first tree of canonical forms rooted at one graph. Each node's
/// graph is obtained from its parent's graph by the recorded move, so paths
/// from the root replay exactly.
struct Closure {
    nodes: Vec<Node>,
    index: HashMap<CanonicalForm, usize>,
    frontier: Vec<usize>,
    capped: bool,
    pruned: bool,
}

fn step(g: &GbsGraph, b: &SearchBounds, set: MoveSet) -> (Vec<Neighbor>, bool) {
    let slides = slide_moves(g);
    let (mut out, mut pruned) = match set {
        MoveSet::Slides => (Vec::new(), false),
        MoveSet::All { negative } => elementary_moves(g, b, negative),
    };
    for n in slides {
        if b.admits(&n.graph) {
            out.push(n);
        } else {
            pruned = true;
        }
    }
    (out, pruned)
}

impl Closure {
    fn new(root: &GbsGraph) -> Result<Self, CanonError> {
        let form = canonical_form(root)?;
        Ok(Closure {
            nodes: vec![Node { graph: root.clone(), parent: None, depth: 0 }],
            index: HashMap::from([(form, 0)]),
            frontier: vec![0],
            capped: false,
            pruned: false,
        })
    }

    fn done(&self) -> bool {
        self.frontier.is_empty() || self.capped
    }

    /// Expands the whole frontier by one level and returns the new nodes.
    /// Neighbourhoods are computed in parallel and merged in frontier order,
    /// so the result does not depend on scheduling.
    fn expand_level(&mut self, b: &SearchBounds, set: MoveSet, budget: usize) -> Result<Vec<usize>, CanonError> {
        let frontier = std::mem::take(&mut self.frontier);
        if frontier.iter().any(|&i| self.nodes[i].depth >= b.max_depth) {
            self.capped = true;
            return Ok(Vec::new());
        }
        let expanded: Vec<Expansion> = frontier
            .par_iter()
            .map(|&i| {
                let (ns, pruned) = step(&self.nodes[i].graph, b, set);
                let with_forms =
                    ns.into_iter().map(|n| canonical_form(&n.graph).map(|f| (n, f))).collect::<Result<Vec<_>, _>>()?;
                Ok((i, with_forms, pruned))
            })
            .collect::<Result<_, CanonError>>()?;
        let mut added = Vec::new();
        'merge: for (parent, ns, pruned) in expanded {
            self.pruned |= pruned;
            for (n, form) in ns {
                if self.index.contains_key(&form) {
                    continue;
                }
                if self.nodes.len() >= budget {
                    self.capped = true;
                    break 'merge;
                }
                let id = self.nodes.len();
                let depth = self.nodes[parent].depth + 1;
                self.nodes.push(Node { graph: n.graph, parent: Some((parent, n.mv)), depth });
                self.index.insert(form, id);
                added.push(id);
            }
        }
        self.frontier = added.clone();
        Ok(added)
    }

    fn path_moves(&self, mut i: usize) -> Vec<Move> {
        let mut moves = Vec::new();
        while let Some((p, mv)) = &self.nodes[i].parent {
            moves.push(mv.clone());
            i = *p;
        }
        moves.reverse();
        moves
    }

    fn trace_to(&self, i: usize) -> Result<MoveTrace, SearchError> {
        let mut trace = MoveTrace::default();
        let mut cur = self.nodes[0].graph.clone();
        for mv in self.path_moves(i) {
            cur = trace.push(&cur, mv)?;
        }
        Ok(trace)
    }

    fn run(&mut self, b: &SearchBounds, set: MoveSet) -> Result<(), CanonError> {
        while !self.done() {
            self.expand_level(b, set, b.max_states)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub enum SameSpace {
    Connected {
        trace: MoveTrace,
        states: usize,
    },
    /// Inconclusive: nothing is claimed about the two graphs.
    NotFoundWithin {
        bounds: SearchBounds,
        states: usize,
        exhausted: bool,
    },
}

/// Bidirectional search for a move sequence from `g1` to `g2`.
///
/// The half of the path grown from `g2` is turned around by finding, on the
/// current concrete graph, a move of the inverse kind that reaches the next
/// canonical form.
pub fn same_space(g1: &GbsGraph, g2: &GbsGraph, b: &SearchBounds, set: MoveSet) -> Result<SameSpace, SearchError> {
    let mut fwd = Closure::new(g1)?;
    let mut bwd = Closure::new(g2)?;
    let mut meet = bwd.index.get(&canonical_form(g1)?).map(|&j| (0, j));
    while meet.is_none() && !(fwd.done() && bwd.done()) {
        let grow_fwd = !fwd.done() && (bwd.done() || fwd.frontier.len() <= bwd.frontier.len());
        let (this, other) = if grow_fwd { (&mut fwd, &bwd) } else { (&mut bwd, &fwd) };
        let budget = b.max_states.saturating_sub(other.nodes.len());
        let added = this.expand_level(b, set, budget)?;
        for i in added {
            let form = canonical_form(&this.nodes[i].graph)?;
            if let Some(&j) = other.index.get(&form) {
                meet = Some(if grow_fwd { (i, j) } else { (j, i) });
                break;
            }
        }
        if fwd.capped || bwd.capped {
            fwd.capped = true;
            bwd.capped = true;
        }
    }
    let states = fwd.nodes.len() + bwd.nodes.len();
    let Some((i, j)) = meet else {
        return Ok(SameSpace::NotFoundWithin { bounds: *b, states, exhausted: !fwd.capped });
    };
    let mut trace = fwd.trace_to(i)?;
    let mut cur = fwd.nodes[i].graph.clone();
    let mut k = j;
    while let Some((p, mv)) = &bwd.nodes[k].parent {
        let target = canonical_form(&bwd.nodes[*p].graph)?;
        let inverse = realize(&cur, mv, &target)?.ok_or(SearchError::Realize(trace.len()))?;
        cur = trace.push(&cur, inverse)?;
        k = *p;
    }
    Ok(SameSpace::Connected { trace, states })
}

/// A move on `g` of the kind inverse to `forward` reaching `target`.
fn realize(g: &GbsGraph, forward: &Move, target: &CanonicalForm) -> Result<Option<Move>, CanonError> {
    let candidates: Vec<Move> = match forward {
        Move::Slide { .. } => slide_moves(g).into_iter().map(|n| n.mv).collect(),
        Move::Expand { .. } | Move::RemoveRedundant(_) => collapse_moves(g).into_iter().map(|n| n.mv).collect(),
        Move::Collapse(_) => expansion_candidates(g, ExpansionRange { trivial: true, negative_sign: true }),
    };
    for mv in candidates {
        if let Ok(a) = mv.apply(g) {
            if canonical_form(&a.graph)? == *target {
                return Ok(Some(mv));
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone)]
pub enum Found {
    Yes { graph: GbsGraph, trace: MoveTrace, states: usize },
    No { states: usize, exhausted: bool },
}

/// Breadth-first search for a graph satisfying `pred`; the first match in
/// discovery order is returned with a trace from `g`.
pub fn find_in_space(
    g: &GbsGraph,
    b: &SearchBounds,
    set: MoveSet,
    pred: impl Fn(&GbsGraph) -> bool,
) -> Result<Found, SearchError> {
    let mut c = Closure::new(g)?;
    if pred(g) {
        return Ok(Found::Yes { graph: g.clone(), trace: MoveTrace::default(), states: 1 });
    }
    while !c.done() {
        let added = c.expand_level(b, set, b.max_states)?;
        if let Some(&i) = added.iter().find(|&&i| pred(&c.nodes[i].graph)) {
            let trace = c.trace_to(i)?;
            return Ok(Found::Yes { graph: c.nodes[i].graph.clone(), trace, states: c.nodes.len() });
        }
    }
    Ok(Found::No { states: c.nodes.len(), exhausted: !c.capped })
}

/// Spine membership for the statistics: every edge survives and no vertex is
/// redundant, since subdividing an edge does not give a new tree. Survival is
/// decided from the definition where shelters do not apply.
fn counts_as_spine(g: &GbsGraph) -> bool {
    redundant_vertices(g).is_empty() && is_in_spine(g).unwrap_or_else(|_| is_in_spine_by_reduction(g))
}

/// Closure of `g` under `set` inside `b`, summarized.
pub fn enumerate_space(g: &GbsGraph, b: &SearchBounds, set: MoveSet) -> Result<SpaceReport, SearchError> {
    let mut c = Closure::new(g)?;
    c.run(b, set)?;

    let mut reduced_forms = BTreeSet::new();
    let mut reduced_graphs = Vec::new();
    let mut reduced_nodes = Vec::new();
    let mut vertex_counts = BTreeMap::new();
    for (i, node) in c.nodes.iter().enumerate() {
        if is_reduced(&node.graph) {
            reduced_forms.insert(canonical_form(&node.graph)?);
            reduced_graphs.push(node.graph.clone());
            reduced_nodes.push(i);
            *vertex_counts.entry(node.graph.vertex_count()).or_insert(0) += 1;
        }
    }
    let spine: Vec<usize> =
        c.nodes.par_iter().filter(|n| counts_as_spine(&n.graph)).map(|n| n.graph.edge_count()).collect();

    let lattice = modular_image(g);
    let classification = if has_integer_modulus(&lattice) == IntegerModulus::No {
        Classification::NonAscending { certificate: lattice }
    } else {
        let witness = reduced_nodes
            .iter()
            .find_map(|&i| strict_ascending_loops(&labeling_of(&c.nodes[i].graph)).first().map(|&e| (i, e)));
        match witness {
            Some((i, e)) => {
                Classification::Ascending { witness: c.nodes[i].graph.clone(), strict_loop: e, trace: c.trace_to(i)? }
            }
            None => Classification::Unknown { bounds: *b },
        }
    };

    Ok(SpaceReport {
        reduced_forms,
        reduced_graphs,
        vertex_counts,
        b1: g.betti(),
        classification,
        spine_max_edges: spine.iter().copied().max().unwrap_or(0),
        spine_graphs: spine.len(),
        states: c.nodes.len(),
        exhausted: !c.capped,
        pruned: c.pruned,
        bounds: *b,
    })
}

/// Slide closure of a reduced graph.
pub fn enumerate_reduced_by_slides(g: &GbsGraph, b: &SearchBounds) -> Result<SpaceReport, SearchError> {
    if !is_reduced(g) {
        return Err(SearchError::NotReduced);
    }
    enumerate_space(g, b, MoveSet::Slides)
}

/// Certificate, witness or unknown, with statistics of the bounded closure
/// under all moves.
pub fn classify_space(g: &GbsGraph, b: &SearchBounds) -> Result<SpaceReport, SearchError> {
    enumerate_space(g, b, MoveSet::All { negative: false })
}

//! Bounded searches over deformation spaces.
//!
//! States are deduplicated by canonical form. Every search is bounded by a
//! [`SearchBounds`] and says whether it ran to completion; a search that
//! stops early never claims a negative answer.

mod explore;
mod neighbors;
mod refine;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::canon::{CanonError, CanonicalForm, DEFAULT_MAX_VERTICES};
use crate::graph::EdgeId;
use crate::model::GbsGraph;
use crate::modulus::ModulusLattice;
use crate::moves::{MoveError, MoveTrace, ReplayError};

pub use explore::{
    classify_space, enumerate_reduced_by_slides, enumerate_space, find_in_space, same_space, Found, SameSpace,
};
pub use neighbors::{
    collapse_moves, elementary_moves, elementary_neighbors, expansion_moves, slide_moves, slide_neighbors, Neighbor,
};
pub use refine::{slide_path_via_refinement, RefineError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBounds {
    pub max_abs_label: u64,
    pub max_edges: usize,
    /// Capped at the canonical-form limit.
    pub max_vertices: usize,
    pub max_states: usize,
    pub max_depth: usize,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds { max_abs_label: 64, max_edges: 6, max_vertices: 6, max_states: 200_000, max_depth: 64 }
    }
}

impl SearchBounds {
    pub fn admits(&self, g: &GbsGraph) -> bool {
        g.edge_count() <= self.max_edges
            && g.vertex_count() <= self.max_vertices.min(DEFAULT_MAX_VERTICES)
            && g.max_abs_label() <= self.max_abs_label.into()
    }
}

/// Which moves a search may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum MoveSet {
    Slides,
    /// Collapses, expansions and slides. `negative` also tries expansions
    /// with unit sign `-1`, which only produce sign-equivalent graphs.
    All {
        negative: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("graph is not reduced")]
    NotReduced,
    #[error(transparent)]
    Canon(#[from] CanonError),
    #[error(transparent)]
    Move(#[from] MoveError),
    #[error(transparent)]
    Replay(#[from] ReplayError),
    #[error("could not realize a trace step {0}")]
    Realize(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Classification {
    /// The modular image contains no integer `> 1`, so no graph in the space
    /// has a strict ascending loop.
    NonAscending { certificate: ModulusLattice },
    /// A reachable reduced graph with a strict ascending loop.
    Ascending { witness: GbsGraph, strict_loop: EdgeId, trace: MoveTrace },
    /// Neither a certificate nor a witness within the bounds.
    Unknown { bounds: SearchBounds },
}

#[derive(Debug, Clone)]
pub struct SpaceReport {
    pub reduced_forms: BTreeSet<CanonicalForm>,
    /// One representative per reduced form, in discovery order.
    pub reduced_graphs: Vec<GbsGraph>,
    /// Number of reduced forms with a given vertex count.
    pub vertex_counts: BTreeMap<usize, usize>,
    pub b1: usize,
    pub classification: Classification,
    /// Largest edge count among visited graphs without redundant vertices all
    /// of whose edges survive.
    pub spine_max_edges: usize,
    pub spine_graphs: usize,
    pub states: usize,
    /// No state or depth cap was hit: the closure inside the label, edge and
    /// vertex bounds is complete.
    pub exhausted: bool,
    /// Some neighbour was dropped for exceeding the label, edge or vertex bounds.
    pub pruned: bool,
    pub bounds: SearchBounds,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HarnessOutcome {
    Pass { bound: usize },
    Violation { vertices: usize, bound: usize },
}

impl HarnessOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, HarnessOutcome::Pass { .. })
    }
}

/// Checks `s ≤ 2m + 2b₁ - 2` for every vertex count `s` in `vertex_counts`.
///
/// Without `m`, the smallest vertex count is used: the number of vertices of
/// a reduced graph is at least `m`, so the check is implied by the exact one.
/// With `m`, every `s` must also be at least `m`.
pub fn vertex_count_bound(vertex_counts: &BTreeMap<usize, usize>, b1: usize, m: Option<usize>) -> HarnessOutcome {
    let Some(&s_min) = vertex_counts.keys().next() else {
        return HarnessOutcome::Pass { bound: 0 };
    };
    let m = m.unwrap_or(s_min);
    let bound = (2 * m + 2 * b1).saturating_sub(2);
    match vertex_counts.keys().find(|&&s| s > bound || s < m) {
        Some(&s) => HarnessOutcome::Violation { vertices: s, bound },
        None => HarnessOutcome::Pass { bound },
    }
}

pub fn vertex_bound_harness(report: &SpaceReport, m: Option<usize>) -> HarnessOutcome {
    vertex_count_bound(&report.vertex_counts, report.b1, m)
}

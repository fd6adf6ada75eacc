//! Workloads shared by the benchmarks.

use gbs_core::fixtures::{bs24_loop, na3, two_loops};
use gbs_core::{GbsGraph, SearchBounds};

/// Named start graphs with the bounds they are explored under.
pub fn workloads() -> Vec<(&'static str, GbsGraph, SearchBounds)> {
    let small = SearchBounds { max_abs_label: 24, max_edges: 3, max_vertices: 3, ..Default::default() };
    vec![
        ("bs24", bs24_loop(), small),
        ("na3", na3(), SearchBounds { max_abs_label: 54, max_edges: 4, max_vertices: 4, ..Default::default() }),
        ("two-loops", two_loops(), small),
    ]
}

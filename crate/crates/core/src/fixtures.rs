//! Named example graphs.

use std::collections::BTreeSet;

use crate::graph::EdgeId;
use crate::model::GbsGraph;

fn build(edges: &[(u32, i64, u32, i64)]) -> GbsGraph {
    GbsGraph::from_edges(edges).expect("fixture is valid")
}

/// `⟨a,t ∣ t a t⁻¹ = a⁶⟩`: one vertex, loop `(1,6)`.
pub fn bs16() -> GbsGraph {
    build(&[(0, 1, 0, 6)])
}

/// `⟨a,t ∣ t a² t⁻¹ = a⁴⟩`: one vertex, loop `(2,4)`.
pub fn bs24_loop() -> GbsGraph {
    build(&[(0, 2, 0, 4)])
}

/// `⟨a,b,t ∣ a² = b², t b t⁻¹ = b²⟩`: segment `a(2)-b(2)` and loop `(1,2)` at `b`.
pub fn bs24_two_vertex() -> GbsGraph {
    build(&[(0, 2, 1, 2), (1, 1, 1, 2)])
}

/// `⟨a,b,c,t ∣ a² = b⁶, b² = c², t c³ t⁻¹ = b⁹⟩`.
pub fn na3() -> GbsGraph {
    build(&[(0, 2, 1, 6), (1, 2, 2, 2), (2, 3, 1, 9)])
}

/// `⟨a,s,t ∣ s a s⁻¹ = a², t a t⁻¹ = a²⟩`: one vertex, two loops `(1,2)`.
pub fn two_loops() -> GbsGraph {
    build(&[(0, 1, 0, 2), (0, 1, 0, 2)])
}

/// Segment `u(1)-v(1)` with loops `(2,3)` at `u` and `(4,5)` at `v`.
pub fn unit_segment_loops() -> GbsGraph {
    build(&[(0, 1, 1, 1), (0, 2, 0, 3), (1, 4, 1, 5)])
}

#[derive(Debug, Clone)]
pub struct RefinementFixture {
    pub name: &'static str,
    pub theta: GbsGraph,
    pub f1: BTreeSet<EdgeId>,
    pub f2: BTreeSet<EdgeId>,
}

fn forest(ids: &[u32]) -> BTreeSet<EdgeId> {
    ids.iter().map(|&i| EdgeId(i)).collect()
}

/// Graphs with two disjoint forests that both collapse to reduced graphs.
pub fn refinement_fixtures() -> Vec<RefinementFixture> {
    vec![
        RefinementFixture {
            name: "unit-path",
            theta: build(&[(0, 2, 1, 1), (1, 1, 2, 3), (0, 5, 2, 7)]),
            f1: forest(&[0]),
            f2: forest(&[1]),
        },
        // NA3 expanded at b with divisor 2 around the ends towards a and c
        RefinementFixture {
            name: "na3-split",
            theta: build(&[(0, 2, 3, 3), (3, 1, 2, 2), (2, 3, 1, 9), (1, 2, 3, 1)]),
            f1: forest(&[3]),
            f2: forest(&[1]),
        },
        // NA3 with the a–b edge subdivided by a vertex carrying two unit ends
        RefinementFixture {
            name: "na3-subdivided",
            theta: build(&[(0, 2, 3, 1), (1, 2, 2, 2), (2, 3, 1, 9), (3, 1, 1, 6)]),
            f1: forest(&[0]),
            f2: forest(&[3]),
        },
        // a pentagon with two vertices carrying two unit ends each
        RefinementFixture {
            name: "two-steps",
            theta: build(&[(0, 2, 1, 1), (1, 1, 2, 3), (2, 5, 3, 1), (3, 1, 4, 7), (4, 2, 0, 3)]),
            f1: forest(&[0, 2]),
            f2: forest(&[1, 3]),
        },
    ]
}

/// Refinement of the `(2,4)` space collapsing both to the loop `(4,2)` and
/// to the two-vertex graph: `b(2)-c(1)`, `a(2)-c(1)`, `b(1)-c(1)`.
pub fn bs24_refinement() -> RefinementFixture {
    RefinementFixture {
        name: "bs24",
        theta: build(&[(1, 2, 2, 1), (0, 2, 2, 1), (1, 1, 2, 1)]),
        f1: forest(&[1, 2]),
        f2: forest(&[0]),
    }
}

//! Slide paths between two reductions of a common refinement.
//!
//! Given `Θ` and disjoint forests `F`, `F′` whose collapses reduce it, find
//! edges `e ∈ F′` and `e′ ∈ F` both carrying a unit label at a common vertex
//! `v`. Expanding `v` with divisor 1 into `v`–`w`, with the `F′` ends moved
//! to `w`, gives `Θ₀`. Collapsing `F` then the new edge gives back `Θ/F`;
//! collapsing `F` then `e` instead gives a graph that differs by sliding the
//! former `w` ends across `e`. The same holds on the `F′` side with `e′`, and
//! both middle graphs are reductions of `Θ₀/{e,e′}`, which has one edge fewer
//! than `Θ`, so the construction recurses.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use super::neighbors::slide_moves;
use crate::canon::{canonical_form, CanonError};
use crate::graph::{EdgeEnd, EdgeId, OrientedEdge, VertexId};
use crate::model::GbsGraph;
use crate::moves::{collapse_all, collapse_at, expand, is_reduced, MoveError, MoveTrace, ReplayError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RefineError {
    #[error("forests share edge {0}")]
    ForestsOverlap(EdgeId),
    #[error("collapsing the forest does not give a reduced graph")]
    NotReducing,
    #[error("no pair of edges with unit labels at a common vertex")]
    AscendingContext,
    #[error("no slide realizes step {0}")]
    NoSlide(usize),
    #[error(transparent)]
    Move(#[from] MoveError),
    #[error(transparent)]
    Canon(#[from] CanonError),
    #[error(transparent)]
    Replay(#[from] ReplayError),
}

/// A pure slide trace from `collapse_all(theta, f1)` to a graph with the
/// canonical form of `collapse_all(theta, f2)`.
pub fn slide_path_via_refinement(
    theta: &GbsGraph,
    f1: &BTreeSet<EdgeId>,
    f2: &BTreeSet<EdgeId>,
) -> Result<MoveTrace, RefineError> {
    if let Some(&e) = f1.intersection(f2).next() {
        return Err(RefineError::ForestsOverlap(e));
    }
    let start = reduction(theta, f1)?;
    let end = reduction(theta, f2)?;
    let mut chain = Vec::new();
    chain_of(theta, f1, f2, &mut chain)?;

    let mut trace = MoveTrace::default();
    let mut cur = start;
    let mut form = canonical_form(&cur)?;
    for next in chain {
        let target = canonical_form(&next)?;
        if target == form {
            continue;
        }
        let mv = slide_moves(&cur)
            .into_iter()
            .find(|n| canonical_form(&n.graph).is_ok_and(|f| f == target))
            .ok_or(RefineError::NoSlide(trace.len()))?
            .mv;
        cur = trace.push(&cur, mv)?;
        form = target;
    }
    if form != canonical_form(&end)? {
        return Err(RefineError::NoSlide(trace.len()));
    }
    Ok(trace)
}

fn reduction(theta: &GbsGraph, forest: &BTreeSet<EdgeId>) -> Result<GbsGraph, RefineError> {
    let (g, _) = collapse_all(theta, forest).map_err(|_| RefineError::NotReducing)?;
    if !is_reduced(&g) {
        return Err(RefineError::NotReducing);
    }
    Ok(g)
}

/// Appends graphs from `Θ/F` to `Θ/F′`, consecutive ones a slide apart up to
/// isomorphism.
fn chain_of(
    theta: &GbsGraph,
    f: &BTreeSet<EdgeId>,
    f_prime: &BTreeSet<EdgeId>,
    out: &mut Vec<GbsGraph>,
) -> Result<(), RefineError> {
    if f.is_empty() && f_prime.is_empty() {
        out.push(reduction(theta, f)?);
        return Ok(());
    }
    if f.is_empty() || f_prime.is_empty() {
        return Err(RefineError::NotReducing);
    }
    let (v, e, e_prime) = unit_pair(theta, f, f_prime).ok_or(RefineError::AscendingContext)?;

    let moved: Vec<EdgeEnd> = theta.graph().ends_at(v).into_iter().filter(|end| f_prime.contains(&end.edge)).collect();
    let theta0 = expand(theta, v, &BigInt::one(), &moved, 1)?.graph;
    let new_edge = theta0.edge_ids().max().expect("expanded graph has edges");
    // end 0 of the new edge sits at v, end 1 at the new vertex w
    let at_w = EdgeEnd::new(new_edge, 1);
    let at_v = EdgeEnd::new(new_edge, 0);

    let side_f = slid_side(&theta0, f, at_w, e, &moved)?;
    let kept: Vec<EdgeEnd> = theta.graph().ends_at(v).into_iter().filter(|end| !f_prime.contains(&end.edge)).collect();
    let side_f_prime = slid_side(&theta0, f_prime, at_v, e_prime, &kept)?;

    let (theta1, _) = collapse_all(&theta0, &BTreeSet::from([e, e_prime]))?;
    let mut f1 = f.clone();
    f1.remove(&e_prime);
    let mut f1_prime = f_prime.clone();
    f1_prime.remove(&e);

    out.extend(side_f);
    chain_of(&theta1, &f1, &f1_prime, out)?;
    out.extend(side_f_prime.into_iter().rev());
    Ok(())
}

/// Starting from `Θ₀/(forest ∪ new edge)`, slides the ends that sat at the
/// far side of the new edge across `pivot`, one at a time.
fn slid_side(
    theta0: &GbsGraph,
    forest: &BTreeSet<EdgeId>,
    new_edge_far_end: EdgeEnd,
    pivot: EdgeId,
    far_ends: &[EdgeEnd],
) -> Result<Vec<GbsGraph>, RefineError> {
    let (middle, _) = collapse_all(theta0, forest)?;
    let mut cur = collapse_at(&middle, new_edge_far_end)?.graph;
    let pivot_end = *far_ends.iter().find(|end| end.edge == pivot).expect("pivot end is on the far side");
    let mut out = vec![cur.clone()];
    for &end in far_ends.iter().filter(|end| end.edge != pivot) {
        cur = crate::moves::slide(&cur, end, OrientedEdge::from_origin_end(pivot_end))?.graph;
        out.push(cur.clone());
    }
    Ok(out)
}

/// Lowest `(v, e, e′)` with `e ∈ F′`, `e′ ∈ F`, both carrying a unit label at `v`.
fn unit_pair(theta: &GbsGraph, f: &BTreeSet<EdgeId>, f_prime: &BTreeSet<EdgeId>) -> Option<(VertexId, EdgeId, EdgeId)> {
    for &v in theta.vertices() {
        let units: Vec<EdgeEnd> = theta.graph().ends_at(v).into_iter().filter(|&end| theta.is_unit(end)).collect();
        let e = units.iter().find(|end| f_prime.contains(&end.edge));
        let e_prime = units.iter().find(|end| f.contains(&end.edge));
        if let (Some(e), Some(e_prime)) = (e, e_prime) {
            return Some((v, e.edge, e_prime.edge));
        }
    }
    None
}

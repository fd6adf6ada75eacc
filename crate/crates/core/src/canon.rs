//! Canonical forms of labeled graphs up to isomorphism, end swaps and sign moves.
//!
//! Two graphs get the same form exactly when one is obtained from the other
//! by renaming vertices and edges, swapping the two ends of edges, negating
//! both labels of an edge, and negating every label at a vertex.
//!
//! After fixing the absolute values, what remains of the signs is one bit per
//! edge, the product of its two label signs. Vertex negations add coboundaries
//! to that bit vector (loops are untouched), so the sign data is a coset of a
//! binary linear code and is normalized to its lexicographically least member.
//! Edges sharing endpoints and absolute labels are interchangeable; they are
//! handled as one coordinate recording how many of them are negative.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::hash::{Hash, Hasher};

use num_bigint::BigUint;
use num_traits::Signed;
use thiserror::Error;

use crate::graph::VertexId;
use crate::model::GbsGraph;

pub const DEFAULT_MAX_VERTICES: usize = 10;
const MAX_EDGES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CanonError {
    #[error("graph too large to canonicalize: {vertices} vertices, {edges} edges")]
    TooLarge { vertices: usize, edges: usize },
}

/// Opaque canonical byte string plus the vertex order that produced it.
///
/// Equality, ordering and hashing look at the bytes only.
#[derive(Debug, Clone)]
pub struct CanonicalForm {
    bytes: Vec<u8>,
    ordering: Vec<VertexId>,
}

impl CanonicalForm {
    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    /// Vertices listed in canonical position order.
    pub fn ordering(&self) -> &[VertexId] {
        &self.ordering
    }

    /// Lowercase hex rendering of the bytes.
    pub fn to_hex(&self) -> String {
        self.bytes.iter().map(|b| format!("{b:02x}")).collect()
    }
}

impl PartialEq for CanonicalForm {
    fn eq(&self, other: &Self) -> bool {
        self.bytes == other.bytes
    }
}

impl Eq for CanonicalForm {}

impl Hash for CanonicalForm {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.bytes.hash(state);
    }
}

impl PartialOrd for CanonicalForm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CanonicalForm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bytes.cmp(&other.bytes)
    }
}

pub fn canonical_form(g: &GbsGraph) -> Result<CanonicalForm, CanonError> {
    canonical_form_bounded(g, DEFAULT_MAX_VERTICES)
}

/// Same as [`canonical_form`] with an explicit vertex bound.
pub fn canonical_form_bounded(g: &GbsGraph, max_vertices: usize) -> Result<CanonicalForm, CanonError> {
    let nv = g.vertex_count();
    let ne = g.edge_count();
    if nv > max_vertices || ne > MAX_EDGES {
        return Err(CanonError::TooLarge { vertices: nv, edges: ne });
    }
    let data = Prepared::new(g);
    let classes = data.refined_classes();
    let mut best: Option<(Vec<u32>, Vec<usize>)> = None;
    let mut order: Vec<usize> = Vec::with_capacity(nv);
    data.search(&classes, 0, &mut order, &mut best);
    let (words, ordering) = best.expect("at least one ordering");

    let mut bytes = Vec::with_capacity(words.len() * 4 + data.label_values.len() * 4);
    for w in &words {
        bytes.extend_from_slice(&w.to_le_bytes());
    }
    for value in &data.label_values {
        let b = value.to_bytes_be();
        bytes.extend_from_slice(&(b.len() as u32).to_le_bytes());
        bytes.extend_from_slice(&b);
    }
    Ok(CanonicalForm { bytes, ordering: ordering.into_iter().map(|i| g.vertices()[i]).collect() })
}

/// Sorted `(own label class, far label class, far colour)` per incident end.
type Signature = Vec<(u32, u32, u32)>;

/// Graph data reduced to small integers: vertex indices, label ranks, signs.
struct Prepared {
    nv: usize,
    /// (vertex index, |label| rank) for end 0 and end 1, plus the sign bit.
    edges: Vec<([(usize, u32); 2], bool)>,
    label_values: Vec<BigUint>,
}

impl Prepared {
    fn new(g: &GbsGraph) -> Self {
        let mut values: Vec<BigUint> =
            g.edge_ids().flat_map(|e| g.labels_of(e).iter().map(|l| l.abs().to_biguint().unwrap())).collect();
        values.sort();
        values.dedup();
        let rank =
            |l: &num_bigint::BigInt| -> u32 { values.binary_search(&l.abs().to_biguint().unwrap()).unwrap() as u32 };
        let graph = g.graph();
        let edges = g
            .edge_ids()
            .map(|e| {
                let [va, vb] = graph.endpoints(e);
                let [la, lb] = g.labels_of(e);
                let ia = graph.vertex_index(va).unwrap();
                let ib = graph.vertex_index(vb).unwrap();
                let negative = la.is_negative() != lb.is_negative();
                ([(ia, rank(la)), (ib, rank(lb))], negative)
            })
            .collect();
        Prepared { nv: g.vertex_count(), edges, label_values: values }
    }

    /// Isomorphism-invariant partition of the vertices by colour refinement,
    /// returned as classes sorted by colour.
    fn refined_classes(&self) -> Vec<Vec<usize>> {
        let mut colour = vec![0u32; self.nv];
        let mut n_colours = 1usize;
        loop {
            let mut sigs: Vec<Signature> = vec![Vec::new(); self.nv];
            for ([(a, ra), (b, rb)], _) in &self.edges {
                sigs[*a].push((*ra, *rb, colour[*b]));
                sigs[*b].push((*rb, *ra, colour[*a]));
            }
            let keyed: Vec<(u32, Signature)> = sigs
                .into_iter()
                .enumerate()
                .map(|(v, mut s)| {
                    s.sort_unstable();
                    (colour[v], s)
                })
                .collect();
            let mut distinct: Vec<&(u32, Signature)> = keyed.iter().collect();
            distinct.sort();
            distinct.dedup();
            let next: Vec<u32> = keyed.iter().map(|k| distinct.binary_search(&k).unwrap() as u32).collect();
            let changed = distinct.len() != n_colours;
            colour = next;
            n_colours = distinct.len();
            if !changed {
                break;
            }
        }
        let mut classes: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
        for (v, c) in colour.iter().enumerate() {
            classes.entry(*c).or_default().push(v);
        }
        classes.into_values().collect()
    }

    /// Enumerates every ordering that lists the classes in colour order and
    /// keeps the least encoding.
    fn search(
        &self,
        classes: &[Vec<usize>],
        class_idx: usize,
        order: &mut Vec<usize>,
        best: &mut Option<(Vec<u32>, Vec<usize>)>,
    ) {
        if class_idx == classes.len() {
            let words = self.encode(order);
            if best.as_ref().is_none_or(|(b, _)| words < *b) {
                *best = Some((words, order.clone()));
            }
            return;
        }
        let mut members = classes[class_idx].clone();
        permute(&mut members, 0, &mut |perm| {
            let len = order.len();
            order.extend_from_slice(perm);
            self.search(classes, class_idx + 1, order, best);
            order.truncate(len);
        });
    }

    /// Encoding for one vertex order (`order[position] = vertex index`).
    fn encode(&self, order: &[usize]) -> Vec<u32> {
        let mut position = vec![0u32; self.nv];
        for (p, &v) in order.iter().enumerate() {
            position[v] = p as u32;
        }
        let mut keyed: Vec<([u32; 4], bool)> = self
            .edges
            .iter()
            .map(|([(a, ra), (b, rb)], neg)| {
                let x = (position[*a], *ra);
                let y = (position[*b], *rb);
                let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
                ([lo.0, lo.1, hi.0, hi.1], *neg)
            })
            .collect();
        keyed.sort_unstable();

        // Groups of interchangeable edges: (key, size, negative count).
        let mut groups: Vec<([u32; 4], u32, u32)> = Vec::new();
        for (key, neg) in &keyed {
            match groups.last_mut() {
                Some(g) if g.0 == *key => {
                    g.1 += 1;
                    g.2 += *neg as u32;
                }
                _ => groups.push((*key, 1, *neg as u32)),
            }
        }

        // Coordinates of the sign code: non-loop groups whose count can change.
        let coords: Vec<usize> = (0..groups.len())
            .filter(|&i| {
                let (k, n, neg) = groups[i];
                k[0] != k[2] && 2 * neg != n
            })
            .collect();
        let mut target: u64 = 0;
        for (c, &gi) in coords.iter().enumerate() {
            let (_, n, neg) = groups[gi];
            if 2 * neg > n {
                target |= bit(c);
            }
        }
        let rows: Vec<u64> = (0..self.nv as u32)
            .map(|p| {
                coords
                    .iter()
                    .enumerate()
                    .filter(|(_, &gi)| groups[gi].0[0] == p || groups[gi].0[2] == p)
                    .fold(0u64, |acc, (c, _)| acc | bit(c))
            })
            .filter(|&r| r != 0)
            .collect();
        let reduced = lex_min_in_coset(target, rows, coords.len());

        let mut words = Vec::with_capacity(2 + keyed.len() * 4 + groups.len());
        words.push(self.nv as u32);
        words.push(self.edges.len() as u32);
        for (key, _) in &keyed {
            words.extend_from_slice(key);
        }
        let mut coord_iter = coords.iter().enumerate().peekable();
        for (gi, (_, n, neg)) in groups.iter().enumerate() {
            let count = match coord_iter.peek() {
                Some(&(c, &cg)) if cg == gi => {
                    coord_iter.next();
                    let lo = (*neg).min(n - neg);
                    if reduced & bit(c) != 0 {
                        n - lo
                    } else {
                        lo
                    }
                }
                _ => *neg,
            };
            words.push(count);
        }
        words
    }
}

/// Coordinate `c` as a bit, with coordinate 0 most significant so that
/// integer comparison is lexicographic comparison.
fn bit(c: usize) -> u64 {
    1u64 << (63 - c)
}

/// Least element of `x + span(rows)` over GF(2), coordinates ordered as by [`bit`].
fn lex_min_in_coset(mut x: u64, mut rows: Vec<u64>, width: usize) -> u64 {
    let mut basis: Vec<u64> = Vec::new();
    for c in 0..width {
        let b = bit(c);
        if let Some(i) = rows.iter().position(|r| r & b != 0) {
            let pivot = rows.swap_remove(i);
            for r in rows.iter_mut() {
                if *r & b != 0 {
                    *r ^= pivot;
                }
            }
            basis.push(pivot);
        }
    }
    for p in basis {
        // leading bit of p
        let lead = 1u64 << (63 - p.leading_zeros());
        if x & lead != 0 {
            x ^= p;
        }
    }
    x
}

/// Heap's algorithm, calling `f` on every permutation of `items`.
fn permute(items: &mut [usize], k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, f);
        items.swap(k, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cf(edges: &[(u32, i64, u32, i64)]) -> CanonicalForm {
        canonical_form(&GbsGraph::from_edges(edges).unwrap()).unwrap()
    }

    #[test]
    fn end_swap_and_sign_moves() {
        assert_eq!(cf(&[(0, 2, 0, 4)]), cf(&[(0, 4, 0, 2)]));
        // vertex flips negate both ends of a loop, so its sign product stays
        assert_ne!(cf(&[(0, 2, 0, 4)]), cf(&[(0, -2, 0, 4)]));
        assert_eq!(cf(&[(0, 2, 0, 4)]), cf(&[(0, -2, 0, -4)]));
        assert_ne!(cf(&[(0, 2, 0, 4)]), cf(&[(0, 2, 0, 6)]));
    }

    #[test]
    fn segment_signs_are_free_but_loop_signs_are_not_on_trees() {
        assert_eq!(cf(&[(0, 2, 1, 3)]), cf(&[(0, -2, 1, 3)]));
        // a single loop's sign product survives vertex flips
        assert_ne!(cf(&[(0, 2, 0, 3)]), cf(&[(0, -2, 0, 3)]));
    }

    #[test]
    fn circle_sign_parity() {
        // product of sign bits around a circle of segments is invariant
        let a = cf(&[(0, 2, 1, 3), (1, 5, 0, 7)]);
        let b = cf(&[(0, -2, 1, 3), (1, -5, 0, 7)]);
        let c = cf(&[(0, -2, 1, 3), (1, 5, 0, 7)]);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn parallel_identical_edges() {
        let a = cf(&[(0, 2, 1, 3), (0, 2, 1, 3), (0, 2, 1, 3)]);
        let b = cf(&[(0, -2, 1, 3), (0, 2, 1, 3), (0, 2, 1, 3)]);
        let c = cf(&[(0, -2, 1, 3), (0, -2, 1, 3), (0, 2, 1, 3)]);
        let d = cf(&[(0, 2, 1, 3), (1, 3, 0, -2), (0, 2, 1, 3)]);
        // a vertex flip negates all three at once: {0,3} and {1,2} negatives
        assert_eq!(b, c);
        assert_eq!(b, d);
        assert_ne!(a, b);
    }

    #[test]
    fn renaming_vertices() {
        let a = cf(&[(0, 2, 1, 6), (1, 2, 2, 2), (2, 3, 1, 9)]);
        let b = cf(&[(5, 2, 3, 6), (3, 2, 1, 2), (1, 3, 3, 9)]);
        let c = cf(&[(0, 2, 1, 6), (1, 2, 2, 2), (2, 9, 1, 3)]);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn too_large() {
        let edges: Vec<(u32, i64, u32, i64)> = (0..11).map(|i| (i, 2, i + 1, 3)).collect();
        let g = GbsGraph::from_edges(&edges).unwrap();
        assert!(matches!(canonical_form(&g), Err(CanonError::TooLarge { vertices: 12, .. })));
    }
}

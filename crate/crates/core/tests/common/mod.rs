//! Generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use gbs_core::model::EdgeSpec;
use gbs_core::moves::{is_collapsible, legal_slides};
use gbs_core::{EdgeEnd, EdgeId, GbsGraph, Mark, Move, MultiGraph, VertexId};
use num_bigint::BigInt;
use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::Rng;

/// Random connected graph: a random spanning tree on `n` vertices plus extra
/// edges, labels drawn from `labels` with random signs.
pub fn random_graph(rng: &mut impl Rng, max_vertices: u32, max_edges: usize, labels: &[i64]) -> GbsGraph {
    let n = rng.gen_range(1..=max_vertices);
    let min_edges = (n as usize).saturating_sub(1).max(1);
    let m = rng.gen_range(min_edges..=max_edges.max(min_edges));
    let label = |rng: &mut _| -> i64 {
        let x = *labels.choose(rng).unwrap();
        if Rng::gen_bool(rng, 0.3) {
            -x
        } else {
            x
        }
    };
    let mut edges = Vec::new();
    for i in 0..m as u32 {
        let (a, b) = if i + 1 < n { (rng.gen_range(0..=i), i + 1) } else { (rng.gen_range(0..n), rng.gen_range(0..n)) };
        let (a, b) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
        edges.push((a, label(rng), b, label(rng)));
    }
    GbsGraph::from_edges(&edges).unwrap()
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.magnitude().clone();
    let mut out = Vec::new();
    let mut d = num_bigint::BigUint::from(1u32);
    while &d * &d <= n {
        if (&n % &d) == num_bigint::BigUint::from(0u32) {
            out.push(BigInt::from(d.clone()));
            out.push(BigInt::from(&n / &d));
        }
        d += 1u32;
    }
    out.sort();
    out.dedup();
    out
}

/// A random legal expansion: a random vertex, a random subset of its ends,
/// a random (signed) divisor of their gcd and a random unit sign.
pub fn random_expand(rng: &mut impl Rng, g: &GbsGraph) -> Move {
    let v = *g.vertices().choose(rng).unwrap();
    let ends: Vec<EdgeEnd> = g.graph().ends_at(v).into_iter().filter(|_| rng.gen_bool(0.5)).collect();
    let gcd = ends.iter().fold(BigInt::from(0), |acc, &e| acc.gcd(g.label(e)));
    let mut d = if gcd == BigInt::from(0) {
        BigInt::from(rng.gen_range(1..=6))
    } else {
        divisors(&gcd).choose(rng).unwrap().clone()
    };
    if rng.gen_bool(0.3) {
        d = -d;
    }
    let unit_sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    Move::Expand { vertex: v, divisor: d, ends, unit_sign }
}

pub fn random_collapse(rng: &mut impl Rng, g: &GbsGraph) -> Option<Move> {
    if g.edge_count() < 2 {
        return None;
    }
    let c: Vec<EdgeId> = g.edge_ids().filter(|&e| is_collapsible(g, e)).collect();
    c.choose(rng).map(|&e| Move::Collapse(e))
}

pub fn random_slide(rng: &mut impl Rng, g: &GbsGraph) -> Option<Move> {
    legal_slides(g).choose(rng).cloned()
}

/// An `=`/`≠` labelled multigraph on vertices `0..n`; edge `i` is
/// `(a, b, a-side is =, b-side is =)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MarkGraph {
    pub n: usize,
    pub edges: Vec<(usize, usize, bool, bool)>,
}

impl MarkGraph {
    pub fn labeling(&self) -> gbs_core::EqNeqLabeling {
        let graph = MultiGraph::new(
            (0..self.n as u32).map(VertexId),
            self.edges
                .iter()
                .enumerate()
                .map(|(i, &(a, b, _, _))| (EdgeId(i as u32), [VertexId(a as u32), VertexId(b as u32)])),
        )
        .unwrap();
        let mark = |eq: bool| if eq { Mark::Eq } else { Mark::Neq };
        gbs_core::EqNeqLabeling::new(graph, self.edges.iter().map(|&(_, _, x, y)| [mark(x), mark(y)]).collect())
    }

    /// A concrete graph with these marks: `=` ends get `±1`, `≠` ends a
    /// random label of absolute value at least 2.
    pub fn lift(&self, rng: &mut impl Rng) -> GbsGraph {
        let mut label = |eq: bool| -> i64 {
            let x = if eq { 1 } else { *[2, 3, 4, 6].choose(rng).unwrap() };
            if rng.gen_bool(0.3) {
                -x
            } else {
                x
            }
        };
        let specs: Vec<EdgeSpec> = self
            .edges
            .iter()
            .enumerate()
            .map(|(i, &(a, b, x, y))| {
                let (la, lb) = (label(x), label(y));
                (EdgeId(i as u32), [(VertexId(a as u32), BigInt::from(la)), (VertexId(b as u32), BigInt::from(lb))])
            })
            .collect();
        let vs: Vec<VertexId> = (0..self.n as u32).map(VertexId).collect();
        GbsGraph::new(&vs, &specs).unwrap()
    }

    fn key(&self) -> Vec<(usize, bool, usize, bool)> {
        let mut perm: Vec<usize> = (0..self.n).collect();
        let mut best: Option<Vec<(usize, bool, usize, bool)>> = None;
        permute(&mut perm, 0, &mut |p| {
            let mut k: Vec<(usize, bool, usize, bool)> = self
                .edges
                .iter()
                .map(|&(a, b, x, y)| {
                    let (l, r) = ((p[a], x), (p[b], y));
                    let (l, r) = if l <= r { (l, r) } else { (r, l) };
                    (l.0, l.1, r.0, r.1)
                })
                .collect();
            k.sort();
            if best.as_ref().is_none_or(|b| k < *b) {
                best = Some(k);
            }
        });
        best.unwrap()
    }
}

fn permute(p: &mut Vec<usize>, i: usize, f: &mut impl FnMut(&[usize])) {
    if i == p.len() {
        f(p);
        return;
    }
    for j in i..p.len() {
        p.swap(i, j);
        permute(p, i + 1, f);
        p.swap(i, j);
    }
}

fn connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &(a, b) in edges {
            for (x, y) in [(a, b), (b, a)] {
                if x == v && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// Every connected `=`/`≠` labelled multigraph with at most `max_edges`
/// edges, up to isomorphism.
pub fn mark_corpus(max_edges: usize) -> Vec<MarkGraph> {
    let mut keys = HashSet::new();
    let mut out = Vec::new();
    for m in 1..=max_edges {
        for n in 1..=m + 1 {
            let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect();
            let mut chosen = Vec::new();
            multisets(&pairs, m, 0, &mut chosen, &mut |edges| {
                if !connected(n, edges) {
                    return;
                }
                for bits in 0..(1u32 << (2 * m)) {
                    let g = MarkGraph {
                        n,
                        edges: edges
                            .iter()
                            .enumerate()
                            .map(|(i, &(a, b))| (a, b, bits >> (2 * i) & 1 == 1, bits >> (2 * i + 1) & 1 == 1))
                            .collect(),
                    };
                    if keys.insert(g.key()) {
                        out.push(g);
                    }
                }
            });
        }
    }
    out
}

fn multisets<T: Copy>(items: &[T], k: usize, from: usize, cur: &mut Vec<T>, f: &mut impl FnMut(&[T])) {
    if cur.len() == k {
        f(cur);
        return;
    }
    for i in from..items.len() {
        cur.push(items[i]);
        multisets(items, k, i, cur, f);
        cur.pop();
    }
}

/// A mark graph with edges removed by collapses; vertices merge by relabelling.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct State(Vec<Option<(usize, usize, bool, bool)>>);

impl State {
    fn live(&self) -> impl Iterator<Item = (usize, (usize, usize, bool, bool))> + '_ {
        self.0.iter().enumerate().filter_map(|(i, e)| e.map(|e| (i, e)))
    }

    fn collapsible(&self) -> Vec<usize> {
        self.live().filter(|(_, (a, b, x, y))| a != b && (*x || *y)).map(|(i, _)| i).collect()
    }

    fn has_strict_loop(&self) -> bool {
        self.live().any(|(_, (a, b, x, y))| a == b && x != y)
    }

    /// Collapses edge `i`, merging its `=` endpoint into the other one. An
    /// end at the merged vertex keeps `≠`; an `=` end becomes whatever the
    /// collapsed edge carries at the surviving vertex.
    fn collapse(&self, i: usize) -> State {
        let (a, b, x, y) = self.0[i].unwrap();
        let (gone, keep, far) = if x { (a, b, y) } else { (b, a, x) };
        let mut next = self.0.clone();
        next[i] = None;
        for e in next.iter_mut().flatten() {
            if e.0 == gone {
                e.0 = keep;
                e.2 = e.2 && far;
            }
            if e.1 == gone {
                e.1 = keep;
                e.3 = e.3 && far;
            }
        }
        State(next)
    }
}

fn explore(g: &MarkGraph) -> Vec<State> {
    let mut seen = HashSet::new();
    let mut stack = vec![State(g.edges.iter().map(|&e| Some(e)).collect())];
    let mut out = Vec::new();
    while let Some(s) = stack.pop() {
        if !seen.insert(s.clone()) {
            continue;
        }
        out.push(s.clone());
        for i in s.collapsible() {
            stack.push(s.collapse(i));
        }
    }
    out
}

/// Whether some sequence of collapses reaches a strict ascending loop.
pub fn reaches_strict_loop(g: &MarkGraph) -> bool {
    explore(g).iter().any(State::has_strict_loop)
}

/// Edges kept by at least one reduction: a sequence of collapses ending at a
/// graph with no collapsible edge. Collapsing the last edge of a tree leaves
/// a point, where nothing survives.
pub fn oracle_surviving(g: &MarkGraph) -> BTreeSet<EdgeId> {
    explore(g)
        .iter()
        .filter(|s| s.collapsible().is_empty())
        .flat_map(|s| s.live().map(|(i, _)| EdgeId(i as u32)).collect::<Vec<_>>())
        .collect()
}

/// The mark graph of a concrete graph whose edge ids are `0..m`.
pub fn mark_graph_of(g: &GbsGraph) -> MarkGraph {
    let index = |v: VertexId| g.vertices().iter().position(|&x| x == v).unwrap();
    MarkGraph {
        n: g.vertex_count(),
        edges: g
            .edge_ids()
            .map(|e| {
                let [a, b] = g.graph().endpoints(e);
                (index(a), index(b), g.is_unit(EdgeEnd::new(e, 0)), g.is_unit(EdgeEnd::new(e, 1)))
            })
            .collect(),
    }
}

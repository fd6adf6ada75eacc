//! The modular homomorphism and the integer-modulus decision.
//!
//! On a closed walk `γ = (e₁,…,e_k)` the modulus is `∏ |λ(eⱼ)| / |λ(ēⱼ)|`, the
//! ratio of the indices at origin and terminus. Its image is a subgroup of
//! the positive rationals; writing rationals as exponent vectors over the
//! primes that occur in labels turns it into an integer lattice `L`.
//!
//! An integer `n > 1` lies in the image iff `L` contains a nonzero vector in
//! the nonnegative orthant. Because `L` has full rank in its rational span
//! `V`, this happens iff the cone `V ∩ ℚ^n_{≥0}` is nonzero, and that cone is
//! pointed, so it is nonzero iff it has an extreme ray. Extreme rays are the
//! one-dimensional solutions of `dim V - 1` independent coordinate equations,
//! which are enumerated exactly over the rationals.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::graph::OrientedEdge;
use crate::model::GbsGraph;

/// Exponent-vector lattice spanned by the modulus of a cycle basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModulusLattice {
    pub primes: Vec<BigUint>,
    /// One vector per basis cycle; entry `i` is the exponent of `primes[i]`.
    pub basis: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IntegerModulus {
    /// `value = ∏ primes[i]^exponents[i]` is an integer `> 1` in the image.
    Yes {
        value: BigUint,
        exponents: Vec<i64>,
    },
    No,
}

impl IntegerModulus {
    pub fn is_yes(&self) -> bool {
        matches!(self, IntegerModulus::Yes { .. })
    }
}

/// Prime factorization of a nonzero integer's absolute value by trial division.
pub fn factorize(n: &BigInt) -> Vec<(BigUint, u32)> {
    let mut n = n.abs().to_biguint().expect("absolute value");
    assert!(!n.is_zero(), "factorize(0)");
    let mut out = Vec::new();
    if let Some(small) = n.to_u64() {
        let mut m = small;
        let mut p = 2u64;
        while p.saturating_mul(p) <= m {
            let mut k = 0;
            while m % p == 0 {
                m /= p;
                k += 1;
            }
            if k > 0 {
                out.push((BigUint::from(p), k));
            }
            p += if p == 2 { 1 } else { 2 };
        }
        if m > 1 {
            out.push((BigUint::from(m), 1));
        }
        return out;
    }
    let mut p = BigUint::from(2u32);
    while &p * &p <= n {
        let mut k = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            k += 1;
        }
        if k > 0 {
            out.push((p.clone(), k));
        }
        p += 1u32;
    }
    if n > BigUint::one() {
        out.push((n, 1));
    }
    out
}

fn valuation(n: &BigInt, p: &BigUint) -> i64 {
    let p = BigInt::from(p.clone());
    let mut n = n.abs();
    let mut k = 0;
    while (&n % &p).is_zero() {
        n /= &p;
        k += 1;
    }
    k
}

/// Exponent lattice of the modulus evaluated on the cycle basis of `g`.
///
/// Each basis vector is the value on the stable letter of the cycle's
/// non-tree edge `e`: since `t a^λ(e) t⁻¹ = b^λ(ē)`, that is `τ` of the basis
/// cycle traversed against `e`. For the loop `(1, 6)` this gives `6`.
pub fn modular_image(g: &GbsGraph) -> ModulusLattice {
    let primes: BTreeSet<BigUint> =
        g.edge_ids().flat_map(|e| g.labels_of(e).iter().flat_map(factorize).map(|(p, _)| p)).collect();
    let primes: Vec<BigUint> = primes.into_iter().collect();
    let basis = g
        .graph()
        .cycle_basis()
        .iter()
        .map(|cycle| walk_exponents(g, cycle, &primes).into_iter().map(|x| -x).collect())
        .collect();
    ModulusLattice { primes, basis }
}

/// Exponent vector of the modulus along a closed oriented walk.
pub fn walk_exponents(g: &GbsGraph, walk: &[OrientedEdge], primes: &[BigUint]) -> Vec<i64> {
    let mut v = vec![0i64; primes.len()];
    for oe in walk {
        let up = g.label(oe.origin_end());
        let down = g.label(oe.terminus_end());
        for (i, p) in primes.iter().enumerate() {
            v[i] += valuation(up, p) - valuation(down, p);
        }
    }
    v
}

impl ModulusLattice {
    /// Hermite normal form of the basis rows (zero rows dropped).
    pub fn hermite_normal_form(&self) -> Vec<Vec<BigInt>> {
        hermite_normal_form(
            self.basis.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
            self.primes.len(),
        )
    }

    /// Re-expresses the lattice over a larger, sorted prime list.
    pub fn over_primes(&self, primes: &[BigUint]) -> ModulusLattice {
        let basis = self
            .basis
            .iter()
            .map(|row| {
                primes
                    .iter()
                    .map(|p| match self.primes.binary_search(p) {
                        Ok(i) => row[i],
                        Err(_) => 0,
                    })
                    .collect()
            })
            .collect();
        ModulusLattice { primes: primes.to_vec(), basis }
    }

    /// Whether both lattices describe the same subgroup of `ℚ⁺*`.
    pub fn same_subgroup(&self, other: &ModulusLattice) -> bool {
        let all: BTreeSet<BigUint> = self.primes.iter().chain(&other.primes).cloned().collect();
        let all: Vec<BigUint> = all.into_iter().collect();
        self.over_primes(&all).hermite_normal_form() == other.over_primes(&all).hermite_normal_form()
    }

    /// Membership of an exponent vector in the lattice.
    pub fn contains(&self, v: &[i64]) -> bool {
        let v: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        reduce_by_hnf(&self.hermite_normal_form(), v).iter().all(Zero::is_zero)
    }

    pub fn rational_of(&self, v: &[i64]) -> BigRational {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (p, &e) in self.primes.iter().zip(v) {
            let pw = num_traits::pow(BigInt::from(p.clone()), e.unsigned_abs() as usize);
            if e >= 0 {
                num *= pw;
            } else {
                den *= pw;
            }
        }
        BigRational::new(num, den)
    }
}

/// Row-style Hermite normal form: upper echelon, positive pivots, entries
/// above each pivot reduced into `[0, pivot)`.
pub fn hermite_normal_form(mut rows: Vec<Vec<BigInt>>, width: usize) -> Vec<Vec<BigInt>> {
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    for col in 0..width {
        // Euclid on column `col` among the remaining rows.
        loop {
            rows.retain(|r| r.iter().any(|x| !x.is_zero()));
            let nonzero: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i][col].is_zero()).collect();
            if nonzero.len() <= 1 {
                break;
            }
            let pivot = *nonzero.iter().min_by_key(|&&i| rows[i][col].abs()).unwrap();
            for &i in &nonzero {
                if i != pivot {
                    let q = rows[i][col].div_floor(&rows[pivot][col]);
                    let prow = rows[pivot].clone();
                    for (x, y) in rows[i].iter_mut().zip(&prow) {
                        *x -= &q * y;
                    }
                }
            }
        }
        if let Some(i) = rows.iter().position(|r| !r[col].is_zero()) {
            let mut r = rows.swap_remove(i);
            if r[col].is_negative() {
                r.iter_mut().for_each(|x| *x = -x.clone());
            }
            out.push(r);
        }
    }
    // Reduce above pivots.
    for i in 0..out.len() {
        let col = out[i].iter().position(|x| !x.is_zero()).unwrap();
        for j in 0..i {
            let q = out[j][col].div_floor(&out[i][col]);
            if !q.is_zero() {
                let pr = out[i].clone();
                for (x, y) in out[j].iter_mut().zip(&pr) {
                    *x -= &q * y;
                }
            }
        }
    }
    out
}

fn reduce_by_hnf(hnf: &[Vec<BigInt>], mut v: Vec<BigInt>) -> Vec<BigInt> {
    for row in hnf {
        let col = row.iter().position(|x| !x.is_zero()).unwrap();
        if !v[col].is_zero() {
            let (q, r) = v[col].div_mod_floor(&row[col]);
            if !r.is_zero() {
                return v;
            }
            for (x, y) in v.iter_mut().zip(row) {
                *x -= &q * y;
            }
        }
    }
    v
}

/// Rational reduced row echelon form; returns the nonzero rows.
fn rref(mut rows: Vec<Vec<BigRational>>, width: usize) -> Vec<Vec<BigRational>> {
    let mut r = 0;
    for col in 0..width {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        rows[r].iter_mut().for_each(|x| *x *= &inv);
        let pr = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pr) {
                    *x -= &f * y;
                }
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

/// A basis of the left null space `{y : y·M = 0}` of an `r × c` matrix.
fn left_null_space(m: &[Vec<BigRational>], r: usize, c: usize) -> Vec<Vec<BigRational>> {
    // Transpose: solve Mᵀ y = 0.
    let t: Vec<Vec<BigRational>> = (0..c).map(|j| (0..r).map(|i| m[i][j].clone()).collect()).collect();
    let red = rref(t, r);
    let pivots: Vec<usize> = red.iter().map(|row| row.iter().position(|x| !x.is_zero()).unwrap()).collect();
    (0..r)
        .filter(|j| !pivots.contains(j))
        .map(|free| {
            let mut y = vec![BigRational::zero(); r];
            y[free] = BigRational::one();
            for (row, &p) in red.iter().zip(&pivots) {
                y[p] = -row[free].clone();
            }
            y
        })
        .collect()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Extreme rays of the cone `span(basis) ∩ ℚ^n_{≥0}`, each scaled to a
/// primitive integer vector.
pub fn nonnegative_extreme_rays(m: &ModulusLattice) -> Vec<Vec<BigInt>> {
    let n = m.primes.len();
    let rows: Vec<Vec<BigRational>> =
        m.basis.iter().map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect()).collect();
    let w = rref(rows, n);
    let rank = w.len();
    if rank == 0 {
        return Vec::new();
    }
    let mut rays: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    for s in subsets(n, rank - 1) {
        let sub: Vec<Vec<BigRational>> = w.iter().map(|row| s.iter().map(|&j| row[j].clone()).collect()).collect();
        let null = left_null_space(&sub, rank, s.len());
        if null.len() != 1 {
            continue;
        }
        let y = &null[0];
        let u: Vec<BigRational> = (0..n).map(|j| y.iter().zip(&w).map(|(yi, row)| yi * &row[j]).sum()).collect();
        let sign = if u.iter().all(|x| !x.is_negative()) {
            1
        } else if u.iter().all(|x| !x.is_positive()) {
            -1
        } else {
            continue;
        };
        rays.insert(primitive(&u, sign));
    }
    rays.into_iter().collect()
}

fn primitive(u: &[BigRational], sign: i32) -> Vec<BigInt> {
    let den = u.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> =
        u.iter().map(|x| (x * BigRational::from_integer(den.clone())).to_integer() * sign).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    ints.into_iter().map(|x| x / &g).collect()
}

/// Decides whether the image contains an integer `n > 1`.
///
/// The witness is the least such integer found on an extreme ray of the
/// nonnegative cone: the smallest positive lattice multiple of each ray's
/// primitive vector is formed and the least resulting integer is returned.
pub fn has_integer_modulus(m: &ModulusLattice) -> IntegerModulus {
    let hnf = m.hermite_normal_form();
    let mut best: Option<(BigUint, Vec<i64>)> = None;
    for ray in nonnegative_extreme_rays(m) {
        let mut j = BigInt::one();
        let point = loop {
            let cand: Vec<BigInt> = ray.iter().map(|x| x * &j).collect();
            if reduce_by_hnf(&hnf, cand.clone()).iter().all(Zero::is_zero) {
                break cand;
            }
            j += 1;
        };
        let exps: Vec<i64> = point.iter().map(|x| x.to_i64().expect("small exponent")).collect();
        let value = m.rational_of(&exps).to_integer().to_biguint().unwrap();
        if best.as_ref().is_none_or(|(b, _)| value < *b) {
            best = Some((value, exps));
        }
    }
    match best {
        Some((value, exponents)) => IntegerModulus::Yes { value, exponents },
        None => IntegerModulus::No,
    }
}

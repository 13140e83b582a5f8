//! Integral lattices, discriminant forms and Nikulin's uniqueness criterion.

pub mod matrix;

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Rat;
use matrix::{det, qbilinear, signature, smith, IMat};

/// Free ℤ-module with a symmetric nondegenerate Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntLattice {
    pub gram: IMat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Invariants {
    pub rank: usize,
    pub det: BigInt,
    pub signature: (usize, usize),
    pub even: bool,
}

impl IntLattice {
    pub fn new(gram: IMat) -> Result<Self> {
        let n = gram.len();
        if gram.iter().any(|r| r.len() != n) {
            return Err(Error::Precondition("Gram matrix is not square".into()));
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::Precondition("Gram matrix is not symmetric".into()));
                }
            }
        }
        if det(&gram).is_zero() {
            return Err(Error::Degenerate);
        }
        Ok(IntLattice { gram })
    }

    pub fn from_i64(gram: &[Vec<i64>]) -> Result<Self> {
        Self::new(matrix::to_imat(gram))
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn det(&self) -> BigInt {
        det(&self.gram)
    }

    pub fn is_even(&self) -> bool {
        self.gram.iter().enumerate().all(|(i, r)| r[i].is_even())
    }

    pub fn signature(&self) -> (usize, usize) {
        signature(&self.gram)
    }

    pub fn invariants(&self) -> Invariants {
        Invariants { rank: self.rank(), det: self.det(), signature: self.signature(), even: self.is_even() }
    }

    pub fn is_indefinite(&self) -> bool {
        let (p, n) = self.signature();
        p > 0 && n > 0
    }

    pub fn scaled(&self, m: i64) -> Self {
        let m = BigInt::from(m);
        IntLattice { gram: self.gram.iter().map(|r| r.iter().map(|x| x * &m).collect()).collect() }
    }

    pub fn discriminant_group(&self) -> DiscGroup {
        let (d, _, v) = smith(&self.gram);
        let n = self.rank();
        let mut orders = vec![];
        let mut gens = vec![];
        for (i, di) in d.iter().enumerate() {
            if di.is_one() {
                continue;
            }
            orders.push(di.clone());
            gens.push((0..n).map(|r| Rat::new(v[r][i].clone(), di.clone())).collect());
        }
        DiscGroup { orders, gens }
    }

    pub fn discriminant_form(&self) -> Result<DiscForm> {
        if !self.is_even() {
            return Err(Error::NotEven);
        }
        let grp = self.discriminant_group();
        let k = grp.gens.len();
        let q = (0..k).map(|i| mod_rat(&qbilinear(&self.gram, &grp.gens[i], &grp.gens[i]), 2)).collect();
        let b = (0..k)
            .map(|i| (0..k).map(|j| mod_rat(&qbilinear(&self.gram, &grp.gens[i], &grp.gens[j]), 1)).collect())
            .collect();
        Ok(DiscForm { orders: grp.orders, q, b })
    }
}

/// `x mod m` in `[0, m)`.
pub fn mod_rat(x: &Rat, m: i64) -> Rat {
    let m = Rat::from_integer(m.into());
    let k = (x / &m).floor();
    x - k * m
}

/// The standard named lattices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Named {
    U,
    A(usize, i64),
    E8(i64),
}

pub fn named_lattice(n: Named) -> Result<IntLattice> {
    let g: Vec<Vec<i64>> = match n {
        Named::U => vec![vec![0, 1], vec![1, 0]],
        Named::A(k, m) => {
            if k == 0 || m == 0 {
                return Err(Error::Precondition("A_n(m) needs n ≥ 1 and m ≠ 0".into()));
            }
            (0..k)
                .map(|i| {
                    (0..k)
                        .map(|j| match i.abs_diff(j) {
                            0 => 2 * m,
                            1 => -m,
                            _ => 0,
                        })
                        .collect()
                })
                .collect()
        }
        Named::E8(m) => {
            if m == 0 {
                return Err(Error::Precondition("E8(m) needs m ≠ 0".into()));
            }
            // chain 0-1-2-3-4-5-6 with node 7 attached to node 4
            let mut g = vec![vec![0i64; 8]; 8];
            for i in 0..8 {
                g[i][i] = 2 * m;
            }
            let mut edge = |a: usize, b: usize| {
                g[a][b] = -m;
                g[b][a] = -m;
            };
            for i in 0..6 {
                edge(i, i + 1);
            }
            edge(4, 7);
            g
        }
    };
    IntLattice::from_i64(&g)
}

pub fn direct_sum(a: &IntLattice, b: &IntLattice) -> IntLattice {
    let (n, m) = (a.rank(), b.rank());
    let mut g = vec![vec![BigInt::zero(); n + m]; n + m];
    for i in 0..n {
        for j in 0..n {
            g[i][j] = a.gram[i][j].clone();
        }
    }
    for i in 0..m {
        for j in 0..m {
            g[n + i][n + j] = b.gram[i][j].clone();
        }
    }
    IntLattice { gram: g }
}

/// U ⊕ E8(−1) ⊕ A5(−1) ⊕ A2(−1) ⊕ A2(−4).
pub fn target_lattice() -> IntLattice {
    let parts = [Named::U, Named::E8(-1), Named::A(5, -1), Named::A(2, -1), Named::A(2, -4)];
    parts
        .iter()
        .map(|&p| named_lattice(p).expect("valid parameters"))
        .reduce(|a, b| direct_sum(&a, &b))
        .unwrap()
}

/// L*/L with generators as rational vectors in the lattice basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscGroup {
    pub orders: Vec<BigInt>,
    pub gens: Vec<Vec<Rat>>,
}

impl DiscGroup {
    pub fn size(&self) -> BigInt {
        self.orders.iter().product()
    }

    /// Minimal number of generators ℓ(A).
    pub fn length(&self) -> usize {
        self.orders.len()
    }
}

/// Discriminant quadratic form on the generators: `q` in ℚ/2ℤ, `b` in ℚ/ℤ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscForm {
    pub orders: Vec<BigInt>,
    pub q: Vec<Rat>,
    pub b: Vec<Vec<Rat>>,
}

impl DiscForm {
    pub fn size(&self) -> BigInt {
        self.orders.iter().product()
    }

    /// `q(Σ xᵢ gᵢ)` in ℚ/2ℤ.
    pub fn q_of(&self, x: &[i64]) -> Rat {
        let mut acc = Rat::zero();
        for i in 0..x.len() {
            if x[i] == 0 {
                continue;
            }
            let xi = Rat::from_integer(x[i].into());
            acc += &xi * &xi * &self.q[i];
            for j in i + 1..x.len() {
                if x[j] != 0 {
                    acc += Rat::from_integer((2 * x[i] * x[j]).into()) * &self.b[i][j];
                }
            }
        }
        mod_rat(&acc, 2)
    }

    /// `b(Σ xᵢ gᵢ, Σ yⱼ gⱼ)` in ℚ/ℤ.
    pub fn b_of(&self, x: &[i64], y: &[i64]) -> Rat {
        let mut acc = Rat::zero();
        for i in 0..x.len() {
            for j in 0..y.len() {
                if x[i] != 0 && y[j] != 0 {
                    acc += Rat::from_integer((x[i] * y[j]).into()) * &self.b[i][j];
                }
            }
        }
        mod_rat(&acc, 1)
    }

    fn small_orders(&self) -> Result<Vec<i64>> {
        self.orders
            .iter()
            .map(|o| o.to_i64().ok_or_else(|| Error::TooLarge("discriminant group".into())))
            .collect()
    }

    /// All elements as coordinate vectors.
    pub fn elements(&self) -> Result<Vec<Vec<i64>>> {
        let ords = self.small_orders()?;
        let total: i64 = ords.iter().product();
        if total > 100_000 {
            return Err(Error::TooLarge(format!("discriminant group of order {total}")));
        }
        let mut out = vec![vec![]];
        for &o in &ords {
            out = out.into_iter().flat_map(|v: Vec<i64>| (0..o).map(move |k| {
                let mut w = v.clone();
                w.push(k);
                w
            })).collect();
        }
        Ok(out)
    }

    /// Order of an element given by coordinates.
    pub fn element_order(&self, x: &[i64]) -> i64 {
        let ords = self.small_orders().unwrap_or_default();
        x.iter().zip(&ords).fold(1i64, |acc, (&xi, &o)| acc.lcm(&(o / xi.gcd(&o))))
    }
}

/// Brute-force search for an isometry of finite quadratic forms.
pub fn finite_qform_isomorphic(q1: &DiscForm, q2: &DiscForm) -> Result<bool> {
    if q1.size() != q2.size() {
        return Ok(false);
    }
    let els2 = q2.elements()?;
    let ords1 = q1.small_orders()?;
    let k = ords1.len();
    // abelian group invariants must agree
    if invariant_factors(&ords1) != invariant_factors(&q2.small_orders()?) {
        return Ok(false);
    }
    let q2vals: Vec<Rat> = els2.iter().map(|x| q2.q_of(x)).collect();
    let cands: Vec<Vec<usize>> = (0..k)
        .map(|i| {
            (0..els2.len())
                .filter(|&e| q2vals[e] == q1.q[i] && ords1[i] % q2.element_order(&els2[e]) == 0)
                .collect()
        })
        .collect();
    let mut chosen: Vec<usize> = vec![];
    Ok(search_iso(q1, q2, &els2, &cands, &ords1, &mut chosen))
}

fn search_iso(q1: &DiscForm, q2: &DiscForm, els2: &[Vec<i64>], cands: &[Vec<usize>], ords1: &[i64], chosen: &mut Vec<usize>) -> bool {
    let i = chosen.len();
    if i == cands.len() {
        return is_injective(q2, els2, chosen, ords1);
    }
    for &c in &cands[i] {
        let ok = chosen.iter().enumerate().all(|(j, &cj)| q2.b_of(&els2[c], &els2[cj]) == q1.b[i][j]);
        if ok {
            chosen.push(c);
            if search_iso(q1, q2, els2, cands, ords1, chosen) {
                return true;
            }
            chosen.pop();
        }
    }
    false
}

fn is_injective(q2: &DiscForm, els2: &[Vec<i64>], chosen: &[usize], ords1: &[i64]) -> bool {
    let ords2 = q2.small_orders().unwrap_or_default();
    let total: i64 = ords1.iter().product();
    let mut seen = std::collections::HashSet::new();
    let mut x = vec![0i64; ords1.len()];
    loop {
        let mut img = vec![0i64; ords2.len()];
        for (i, &xi) in x.iter().enumerate() {
            for (t, v) in img.iter_mut().enumerate() {
                *v = (*v + xi * els2[chosen[i]][t]).rem_euclid(ords2[t]);
            }
        }
        if !seen.insert(img) {
            return false;
        }
        let mut i = 0;
        loop {
            if i == x.len() {
                return seen.len() as i64 == total;
            }
            x[i] += 1;
            if x[i] < ords1[i] {
                break;
            }
            x[i] = 0;
            i += 1;
        }
    }
}

/// Invariant factors of ⊕ ℤ/oᵢ.
pub fn invariant_factors(orders: &[i64]) -> Vec<i64> {
    let m: IMat = (0..orders.len())
        .map(|i| (0..orders.len()).map(|j| BigInt::from(if i == j { orders[i] } else { 0 })).collect())
        .collect();
    smith(&m).0.into_iter().filter_map(|d| d.to_i64()).filter(|&d| d != 1).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NikulinResult {
    Certified(bool),
    CriterionInapplicable(String),
}

/// Decides isometry of two lattices by Nikulin's criterion where it applies.
pub fn nikulin_equivalent(l1: &IntLattice, l2: &IntLattice) -> Result<NikulinResult> {
    if l1.gram == l2.gram {
        return Ok(NikulinResult::Certified(true));
    }
    let (i1, i2) = (l1.invariants(), l2.invariants());
    if i1.rank != i2.rank || i1.signature != i2.signature || i1.det != i2.det || i1.even != i2.even {
        return Ok(NikulinResult::Certified(false));
    }
    let (g1, g2) = (l1.discriminant_group(), l2.discriminant_group());
    if g1.orders != g2.orders {
        return Ok(NikulinResult::Certified(false));
    }
    if !i1.even {
        return Ok(NikulinResult::CriterionInapplicable("lattices are odd".into()));
    }
    if !l1.is_indefinite() {
        return Ok(NikulinResult::CriterionInapplicable("lattices are definite".into()));
    }
    if i1.rank < g1.length() + 3 {
        return Ok(NikulinResult::CriterionInapplicable(format!(
            "rank {} is not larger than ℓ(A) + 2 = {}",
            i1.rank,
            g1.length() + 2
        )));
    }
    let iso = finite_qform_isomorphic(&l1.discriminant_form()?, &l2.discriminant_form()?)?;
    Ok(NikulinResult::Certified(iso))
}

/// Index of the sublattice spanned by the rows of `basis` (coordinates in
/// the lattice basis), checked against disc(sub) = index² · disc(L).
pub fn index_relation(l: &IntLattice, basis: &IMat) -> Result<BigInt> {
    if basis.len() != l.rank() || matrix::rank(basis) != l.rank() {
        return Err(Error::NotFullRank);
    }
    let idx = det(basis).abs();
    let sub = matrix::mat_mul(&matrix::mat_mul(basis, &l.gram), &matrix::transpose(basis));
    if det(&sub) != &idx * &idx * l.det() {
        return Err(Error::VerificationFailed("index–determinant law fails".into()));
    }
    Ok(idx)
}

/// Primes p with p² | det: the only primes that can divide the index of
/// an integral overlattice.
pub fn trivial_primes_bound(det: &BigInt) -> Vec<u64> {
    let mut n = det.abs();
    let mut out = vec![];
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        let mut e = 0;
        while (&n % &p).is_zero() {
            n /= &p;
            e += 1;
        }
        if e >= 2 {
            out.push(p.to_u64().expect("small prime"));
        }
        p += 1;
    }
    out
}

/// Exponent of `p` in `n`.
pub fn valuation(n: &BigInt, p: u64) -> u32 {
    let p = BigInt::from(p);
    let mut n = n.abs();
    if n.is_zero() {
        return u32::MAX;
    }
    let mut e = 0;
    while (&n % &p).is_zero() {
        n /= &p;
        e += 1;
    }
    e
}

/// Frequency table helper for reports.
pub fn count_values(m: &IMat) -> HashMap<BigInt, usize> {
    let mut h = HashMap::new();
    for r in m {
        for x in r {
            *h.entry(x.clone()).or_insert(0) += 1;
        }
    }
    h
}

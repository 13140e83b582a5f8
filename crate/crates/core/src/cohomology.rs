//! Cohomology of a finite group acting on ℤ^d through integer matrices.
//!
//! H¹ is the torsion of ℤ^N / B¹, where N = d·(number of generators) and
//! cocycles are recorded by their values on the generators.  This is valid
//! because Z¹ is saturated in ℤ^N and Z¹/B¹ is finite; the rank equality
//! rank Z¹ = rank B¹ is certified by a modular rank bound.  H² comes from the
//! Bockstein sequence for 0 → M → M → M/n → 0, with |Z¹(M/n)| read off from
//! a Smith form over ℤ/p^k.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, Mask};
use crate::indexcheck::rref_mod;
use crate::latbuild::{identity_small, mat_mul_small, IsometryRep, SmallMat};
use crate::lattice::matrix::{integer_kernel, smith, to_imat, transpose};
use crate::pipeline::SubgroupMode;

const RANK_PRIME: u64 = 2_147_483_647;
/// Bound on |G| · rank for the cocycle system.
const ORDER_CAP: usize = 96 * 19 * 4;

/// A finite group with an integer matrix for every element.
#[derive(Clone, Debug)]
pub struct GroupRep {
    pub group: FiniteGroup,
    pub mats: Vec<SmallMat>,
    /// Words in the ambient generators, for reporting.
    pub words: Vec<Vec<usize>>,
    /// Element indices of a generating set.
    pub gens: Vec<usize>,
}

impl GroupRep {
    /// Closure of `gens`; every element must preserve `gram` when given.
    pub fn generate(gens: &[IsometryRep], gram: Option<&SmallMat>, cap: usize) -> Result<Self> {
        let c = crate::latbuild::matrix_group_closure(gens, cap)?;
        if let Some(g) = gram {
            for (m, w) in c.elements.iter().zip(&c.words) {
                if &mat_mul_small(&transpose(m), &mat_mul_small(g, m)) != g {
                    return Err(Error::NotIsometry(format!("element with word {w:?}")));
                }
            }
        }
        let gens = c.group.gens.iter().map(|&g| g as usize).collect();
        Ok(GroupRep { group: c.group, mats: c.elements, words: c.words, gens })
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn dim(&self) -> usize {
        self.mats[0].len()
    }

    /// The matrices multiply as the group does.
    pub fn is_homomorphism(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| mat_mul_small(&self.mats[a], &self.mats[b]) == self.mats[self.group.mul(a, b)]))
    }

    /// Distinct elements act by distinct matrices.
    pub fn is_faithful(&self) -> bool {
        self.mats.iter().collect::<BTreeSet<_>>().len() == self.order()
    }

    /// The subgroup `s` as a representation in its own right.
    pub fn subgroup(&self, s: &Mask) -> GroupRep {
        let els: Vec<usize> = std::iter::once(0).chain(s.iter().filter(|&x| x != 0)).collect();
        let group = self.group.restrict(s);
        let gens = group.gens.iter().map(|&g| g as usize).collect();
        GroupRep {
            mats: els.iter().map(|&e| self.mats[e].clone()).collect(),
            words: els.iter().map(|&e| self.words[e].clone()).collect(),
            group,
            gens,
        }
    }

    /// The cyclic subgroup generated by element `g`.
    pub fn cyclic_subgroup(&self, g: usize) -> GroupRep {
        self.subgroup(&self.group.closure([g]))
    }
}

fn minus_identity(m: &SmallMat) -> SmallMat {
    let mut r = m.clone();
    for (i, row) in r.iter_mut().enumerate() {
        row[i] -= 1;
    }
    r
}

fn small_from_big(m: &[Vec<BigInt>]) -> Result<SmallMat> {
    m.iter()
        .map(|r| r.iter().map(|x| x.to_i64().ok_or_else(|| Error::TooLarge("matrix entry".into()))).collect())
        .collect()
}

/// Stacked `M_s − I` over the generators.
fn fixed_point_system(rep: &GroupRep) -> SmallMat {
    rep.gens.iter().flat_map(|&s| minus_identity(&rep.mats[s])).collect()
}

/// Saturated basis (rows) of the fixed sublattice.
pub fn fixed_sublattice(rep: &GroupRep) -> Result<SmallMat> {
    let d = rep.dim();
    if rep.gens.is_empty() {
        return Ok(identity_small(d));
    }
    let k = integer_kernel(&to_imat(&fixed_point_system(rep)));
    let mut basis = small_from_big(&k)?;
    for v in basis.iter_mut() {
        if v.iter().find(|x| **x != 0).is_some_and(|x| *x < 0) {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
    Ok(basis)
}

/// Invariant factors greater than one of an integer matrix, and its rank.
fn torsion_and_rank(m: &SmallMat) -> (Vec<u64>, usize) {
    if m.is_empty() {
        return (vec![], 0);
    }
    let (d, _, _) = smith(&to_imat(m));
    let rank = d.iter().filter(|x| !x.is_zero()).count();
    let tors = d.iter().filter(|x| !x.is_zero() && !x.is_one()).map(|x| x.abs().to_u64().unwrap_or(u64::MAX)).collect();
    (tors, rank)
}

/// Torsion of the cokernel of the lattice spanned by `rows` inside its
/// saturation, as invariant factors.
fn torsion_of_span(rows: &SmallMat) -> Vec<u64> {
    torsion_and_rank(rows).0
}

/// The linear system cutting out cocycles, in the values on the generators.
struct CocycleSystem {
    /// Affine map from generator values to c(x): a d × N matrix per element.
    paths: Vec<SmallMat>,
    rows: SmallMat,
    n: usize,
}

fn cocycle_system(rep: &GroupRep) -> Result<CocycleSystem> {
    let d = rep.dim();
    let k = rep.gens.len();
    let n = d * k;
    let order = rep.order();
    let mut paths: Vec<Option<SmallMat>> = vec![None; order];
    paths[0] = Some(vec![vec![0; n]; d]);
    let mut queue = VecDeque::from([0usize]);
    let mut rows: SmallMat = vec![];
    // c(x s) = c(x) + x · c(s)
    let step = |px: &SmallMat, x: usize, si: usize| -> SmallMat {
        let mut t = px.clone();
        for (i, row) in t.iter_mut().enumerate() {
            for j in 0..d {
                row[si * d + j] += rep.mats[x][i][j];
            }
        }
        t
    };
    while let Some(x) = queue.pop_front() {
        let px = paths[x].clone().ok_or_else(|| Error::StructureMismatch("cocycle tree".into()))?;
        for (si, &s) in rep.gens.iter().enumerate() {
            let y = rep.group.mul(x, s);
            let t = step(&px, x, si);
            match &paths[y] {
                None => {
                    paths[y] = Some(t);
                    queue.push_back(y);
                }
                Some(py) => {
                    for (a, b) in py.iter().zip(&t) {
                        let r: Vec<i64> = a.iter().zip(b).map(|(u, v)| u - v).collect();
                        if r.iter().any(|&v| v != 0) {
                            rows.push(r);
                        }
                    }
                }
            }
        }
    }
    let paths = paths.into_iter().collect::<Option<Vec<_>>>().ok_or_else(|| Error::StructureMismatch("generators do not generate".into()))?;
    Ok(CocycleSystem { paths, rows, n })
}

fn modular_rank(rows: &SmallMat) -> usize {
    let m: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&x| x.rem_euclid(RANK_PRIME as i64) as u64).collect()).collect();
    rref_mod(m, RANK_PRIME).1.len()
}

/// Coboundaries of the basis vectors, as rows of length N.
fn coboundary_rows(rep: &GroupRep) -> SmallMat {
    let d = rep.dim();
    (0..d)
        .map(|j| rep.gens.iter().flat_map(|&s| (0..d).map(move |i| rep.mats[s][i][j] - i64::from(i == j))).collect())
        .collect()
}

fn dot(a: &[i64], b: &[i64]) -> i128 {
    a.iter().zip(b).map(|(x, y)| *x as i128 * *y as i128).sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct H1Data {
    pub invariants: Vec<u64>,
    pub cocycle_rank: usize,
    pub unknowns: usize,
}

/// H¹ as abelian invariants.
pub fn h1(rep: &GroupRep) -> Result<H1Data> {
    h1_with_system(rep).map(|(h, _)| h)
}

fn h1_with_system(rep: &GroupRep) -> Result<(H1Data, CocycleSystem)> {
    if rep.order() * rep.dim() > ORDER_CAP {
        return Err(Error::TooLarge(format!("group of order {} on rank {}", rep.order(), rep.dim())));
    }
    let sys = cocycle_system(rep)?;
    let b = coboundary_rows(rep);
    for r in &sys.rows {
        if b.iter().any(|v| dot(r, v) != 0) {
            return Err(Error::VerificationFailed("a coboundary violates the cocycle relations".into()));
        }
    }
    let (invariants, b_rank) = torsion_and_rank(&b);
    let a_rank = modular_rank(&sys.rows);
    // rank_p(A) ≤ rank(A) ≤ N − rank(B¹); equality certifies Z¹ ⊗ ℚ = B¹ ⊗ ℚ.
    if a_rank + b_rank != sys.n {
        return Err(Error::VerificationFailed(format!("cocycle rank bound not tight: {a_rank} + {b_rank} != {}", sys.n)));
    }
    Ok((H1Data { invariants, cocycle_rank: b_rank, unknowns: sys.n }, sys))
}

/// Valuations of the Smith form of `rows` over ℤ/p^k, one per column;
/// columns beyond the rank get k.
pub fn local_valuations(rows: &SmallMat, cols: usize, p: u64, k: u32) -> Vec<u32> {
    let q = p.pow(k);
    let mut a: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|&x| x.rem_euclid(q as i64) as u64).collect()).collect();
    let val = |x: u64| -> u32 {
        if x == 0 {
            return k;
        }
        let (mut x, mut v) = (x, 0);
        while x % p == 0 {
            x /= p;
            v += 1;
        }
        v
    };
    let mut active_rows: Vec<usize> = (0..a.len()).collect();
    let mut active_cols: Vec<usize> = (0..cols).collect();
    let mut out = vec![];
    loop {
        let mut best: Option<(u32, usize, usize)> = None;
        for (ri, &r) in active_rows.iter().enumerate() {
            for (ci, &c) in active_cols.iter().enumerate() {
                let v = val(a[r][c]);
                if v < k && best.is_none_or(|b| v < b.0) {
                    best = Some((v, ri, ci));
                }
            }
            if best.is_some_and(|b| b.0 == 0) {
                break;
            }
        }
        let Some((v, ri, ci)) = best else { break };
        let (r, c) = (active_rows[ri], active_cols[ci]);
        let pv = p.pow(v);
        let unit_inv = inv_unit(a[r][c] / pv, q);
        let pivot_row = a[r].clone();
        for &o in &active_rows {
            if o != r && a[o][c] != 0 {
                let f = (a[o][c] / pv) % q * unit_inv % q;
                for &j in &active_cols {
                    a[o][j] = (a[o][j] + q * q - f * pivot_row[j] % q) % q;
                }
            }
        }
        out.push(v);
        active_rows.swap_remove(ri);
        active_cols.swap_remove(ci);
    }
    out.extend(std::iter::repeat_n(k, active_cols.len()));
    out
}

fn inv_unit(u: u64, q: u64) -> u64 {
    if q == 1 {
        return 0;
    }
    let (mut t, mut nt, mut r, mut nr) = (0i64, 1i64, q as i64, (u % q) as i64);
    while nr != 0 {
        let qq = r / nr;
        (t, nt) = (nt, t - qq * nt);
        (r, nr) = (nr, r - qq * nr);
    }
    t.rem_euclid(q as i64) as u64
}

/// log_p |ker(A mod p^j)| from local valuations.
fn log_kernel(vals: &[u32], j: u32) -> u32 {
    vals.iter().map(|&v| v.min(j)).sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct H2Data {
    pub invariants: Vec<u64>,
    pub method: String,
    /// For each prime, log_p |H²[p^j]| for j = 1, 2, ….
    pub torsion_profile: BTreeMap<u64, Vec<u32>>,
}

fn prime_powers(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = vec![];
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// H² through |H²[n]| = |H¹(M/n)| / |H¹(M)/n| for prime powers n dividing
/// a power of the group order.
pub fn h2_bockstein(rep: &GroupRep) -> Result<H2Data> {
    let (h1m, sys) = h1_with_system(rep)?;
    let d = rep.dim() as u32;
    let fix = fixed_point_system(rep);
    let mut invariants = vec![];
    let mut profile = BTreeMap::new();
    for (p, e) in prime_powers(rep.order() as u64) {
        let k = e + 1;
        let za = local_valuations(&sys.rows, sys.n, p, k);
        let h0 = local_valuations(&fix, d as usize, p, k);
        let mut logs = vec![0u32];
        for j in 1..=k {
            // |H¹(M/p^j)| = |Z¹| · |H⁰(M/p^j)| / p^{j d}
            let h1_mod = log_kernel(&za, j) + if rep.gens.is_empty() { d * j } else { log_kernel(&h0, j) } - j * d;
            let h1_over = h1m.invariants.iter().map(|&f| crate::lattice::valuation(&BigInt::from(f), p).min(j)).sum::<u32>();
            logs.push(h1_mod - h1_over);
        }
        // c_j = number of cyclic factors of order ≥ p^j
        let c: Vec<u32> = (1..=k as usize).map(|j| logs[j] - logs[j - 1]).collect();
        if c[k as usize - 1] != 0 {
            return Err(Error::VerificationFailed(format!("H^2 has {p}-torsion beyond the group order")));
        }
        for j in 1..=e as usize {
            let exact = c[j - 1] - c.get(j).copied().unwrap_or(0);
            invariants.extend(std::iter::repeat_n(p.pow(j as u32), exact as usize));
        }
        profile.insert(p, logs[1..].to_vec());
    }
    let orders: Vec<i64> = invariants.iter().map(|&x| x as i64).collect();
    let invariants = crate::lattice::invariant_factors(&orders).into_iter().map(|x| x as u64).collect();
    Ok(H2Data { invariants, method: "bockstein".into(), torsion_profile: profile })
}

fn power(rep: &GroupRep, g: usize) -> (SmallMat, SmallMat) {
    let d = rep.dim();
    let mut norm = vec![vec![0; d]; d];
    let mut x = 0;
    loop {
        for (r, row) in norm.iter_mut().zip(&rep.mats[x]) {
            for (a, b) in r.iter_mut().zip(row) {
                *a += b;
            }
        }
        x = rep.group.mul(x, g);
        if x == 0 {
            break;
        }
    }
    (minus_identity(&rep.mats[g]), norm)
}

/// `ker(a) / im(b)` for commuting endomorphisms with `a b = 0`.
fn homology(a: &SmallMat, b: &SmallMat) -> Result<Vec<u64>> {
    let ker = small_from_big(&integer_kernel(&to_imat(a)))?;
    if ker.is_empty() {
        return Ok(vec![]);
    }
    // columns of b in the kernel basis
    let kt = to_imat(&transpose(&ker));
    let d = b.len();
    let mut coords = vec![];
    let pivots = pivot_rows(&ker);
    let sub: Vec<Vec<BigInt>> = pivots.iter().map(|&i| kt[i].clone()).collect();
    for j in 0..d {
        let col: Vec<i64> = b.iter().map(|r| r[j]).collect();
        let rhs: Vec<crate::field::Rat> = pivots.iter().map(|&i| crate::field::Rat::from_integer(col[i].into())).collect();
        let x = crate::lattice::matrix::solve_rational(&sub, &rhs).ok_or_else(|| Error::VerificationFailed("kernel basis".into()))?;
        let x: Vec<i64> = x
            .iter()
            .map(|v| if v.is_integer() { v.to_integer().to_i64() } else { None })
            .collect::<Option<_>>()
            .ok_or_else(|| Error::VerificationFailed("image is not in the kernel lattice".into()))?;
        let back: Vec<i64> = (0..d).map(|i| ker.iter().zip(&x).map(|(k, c)| k[i] * c).sum()).collect();
        if back != col {
            return Err(Error::VerificationFailed("image is not in the kernel".into()));
        }
        coords.push(x);
    }
    let (mut tors, rank) = torsion_and_rank(&coords);
    if rank < ker.len() {
        return Err(Error::VerificationFailed("homology has a free part".into()));
    }
    tors.sort();
    Ok(tors)
}

/// Coordinates where the rows of `basis` are independent.
fn pivot_rows(basis: &SmallMat) -> Vec<usize> {
    let m: Vec<Vec<u64>> = basis.iter().map(|r| r.iter().map(|&x| x.rem_euclid(RANK_PRIME as i64) as u64).collect()).collect();
    rref_mod(m, RANK_PRIME).1
}

/// H¹ of a cyclic group ⟨g⟩: ker(N) / im(g − 1).
pub fn h1_cyclic(rep: &GroupRep, g: usize) -> Result<Vec<u64>> {
    let (gm1, norm) = power(rep, g);
    homology(&norm, &gm1)
}

/// H² of a cyclic group ⟨g⟩: ker(g − 1) / im(N).
pub fn h2_cyclic(rep: &GroupRep, g: usize) -> Result<Vec<u64>> {
    let (gm1, norm) = power(rep, g);
    homology(&gm1, &norm)
}

/// The coinduced module Maps(G, ℤ^d) with (g f)(x) = f(x g); its positive
/// degree cohomology vanishes.
pub fn coinduced(rep: &GroupRep) -> GroupRep {
    let d = rep.dim();
    let n = rep.order();
    let mats = (0..n)
        .map(|g| {
            let mut m = vec![vec![0i64; d * n]; d * n];
            for y in 0..n {
                let x = rep.group.mul(y, g);
                for j in 0..d {
                    m[y * d + j][x * d + j] = 1;
                }
            }
            m
        })
        .collect();
    GroupRep { group: rep.group.clone(), mats, words: rep.words.clone(), gens: rep.gens.clone() }
}

/// The module Maps(G, M) / M for a dimension shift, where G acts on maps by
/// (g f)(x) = f(x g) and m ↦ (x ↦ x m).  Its H¹ is H²(G, M).
pub fn coinduced_quotient(rep: &GroupRep) -> GroupRep {
    let d = rep.dim();
    let n = rep.order();
    let dq = d * (n - 1);
    // basis: f supported at x ≠ e with value e_j, index (x − 1) d + j
    let mats = (0..n)
        .map(|g| {
            let mut m = vec![vec![0i64; dq]; dq];
            for x in 1..n {
                for j in 0..d {
                    let col = (x - 1) * d + j;
                    // (g f)(y) = f(y g) is nonzero at y = x g⁻¹
                    let y = rep.group.mul(x, rep.group.inv(g));
                    // project: f' − (y ↦ y · f'(e))
                    if y == 0 {
                        for z in 1..n {
                            for i in 0..d {
                                m[(z - 1) * d + i][col] -= rep.mats[z][i][j];
                            }
                        }
                    } else {
                        m[(y - 1) * d + j][col] += 1;
                    }
                }
            }
            m
        })
        .collect();
    GroupRep { group: rep.group.clone(), mats, words: rep.words.clone(), gens: rep.gens.clone() }
}

/// Whether restriction H¹(G, M) → H¹(P, M) is injective.
pub fn restriction_injective(rep: &GroupRep, p: &Mask) -> Result<bool> {
    let (hg, sys) = h1_with_system(rep)?;
    let sub = rep.subgroup(p);
    let els: Vec<usize> = std::iter::once(0).chain(p.iter().filter(|&x| x != 0)).collect();
    // Z¹ is the saturation of B¹ (ranks agree, certified in h1_with_system).
    let b_g = coboundary_rows(rep);
    let z1 = small_from_big(&integer_kernel(&integer_kernel(&to_imat(&b_g))))?;
    let b_p = coboundary_rows(&sub);
    let restricted: SmallMat = z1
        .iter()
        .map(|z| {
            sub.gens
                .iter()
                .flat_map(|&s| {
                    let path = &sys.paths[els[s]];
                    path.iter().map(|row| row.iter().zip(z).map(|(a, b)| a * b).sum::<i64>()).collect::<Vec<_>>()
                })
                .collect()
        })
        .collect();
    let mut joined = b_p.clone();
    joined.extend(restricted);
    let order = |v: &[u64]| v.iter().map(|&x| BigInt::from(x)).product::<BigInt>();
    let image = order(&torsion_of_span(&b_p)) / order(&torsion_of_span(&joined));
    Ok(image == order(&hg.invariants))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyReport {
    pub order: usize,
    pub normal: bool,
    pub generator_words: Vec<Vec<usize>>,
    pub h0_rank: usize,
    pub h0_basis: SmallMat,
    pub h1_invariants: Vec<u64>,
    pub h2_invariants: Option<Vec<u64>>,
    pub methods: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub mode: SubgroupMode,
    pub subgroups: Vec<CohomologyReport>,
    /// Non-trivial subgroups with H¹ = 0.
    pub trivial_h1: usize,
    pub nontrivial_h1: usize,
    /// i such that some H¹ is (ℤ/2)^i.
    pub elementary_two_exponents: BTreeSet<usize>,
    /// Whether every H¹ is an elementary abelian 2-group.
    pub all_elementary_two: bool,
}

pub fn report_for(rep: &GroupRep, s: &Mask, normal: bool) -> Result<CohomologyReport> {
    let sub = rep.subgroup(s);
    let h0 = fixed_sublattice(&sub)?;
    let h1 = h1(&sub)?;
    for f in &h1.invariants {
        if sub.order() as u64 % f != 0 {
            return Err(Error::VerificationFailed(format!("H^1 factor {f} does not divide {}", sub.order())));
        }
    }
    Ok(CohomologyReport {
        order: sub.order(),
        normal,
        generator_words: sub.gens.iter().map(|&g| sub.words[g].clone()).collect(),
        h0_rank: h0.len(),
        h0_basis: h0,
        h1_invariants: h1.invariants,
        h2_invariants: None,
        methods: vec!["fixed: integer kernel".into(), "h1: coboundary torsion".into()],
    })
}

/// H⁰, H¹ (and H² for the whole group) of every subgroup in the mode.
pub fn subgroup_sweep(rep: &GroupRep, mode: SubgroupMode) -> Result<SweepReport> {
    let subs = rep.group.subgroups(10_000)?;
    let chosen: Vec<(Mask, bool)> = subs
        .into_iter()
        .map(|s| {
            let n = rep.group.is_normal(&s);
            (s, n)
        })
        .filter(|(_, n)| mode == SubgroupMode::All || *n)
        .collect();
    let mut reports = chosen.par_iter().map(|(s, n)| report_for(rep, s, *n)).collect::<Result<Vec<_>>>()?;
    if let Some(full) = reports.iter_mut().find(|r| r.order == rep.order()) {
        let h2 = h2_bockstein(rep)?;
        full.h2_invariants = Some(h2.invariants);
        full.methods.push("h2: bockstein".into());
    }
    // counts are over non-trivial subgroups
    let trivial_h1 = reports.iter().filter(|r| r.order > 1 && r.h1_invariants.is_empty()).count();
    let all_elementary_two = reports.iter().all(|r| r.h1_invariants.iter().all(|&f| f == 2));
    let elementary_two_exponents = reports.iter().filter(|r| r.h1_invariants.iter().all(|&f| f == 2)).map(|r| r.h1_invariants.len()).collect();
    Ok(SweepReport {
        mode,
        trivial_h1,
        nontrivial_h1: reports.iter().filter(|r| !r.h1_invariants.is_empty()).count(),
        subgroups: reports,
        elementary_two_exponents,
        all_elementary_two,
    })
}

/// Count of elements by order, used to pick small test subgroups.
pub fn elements_of_order(rep: &GroupRep, k: usize) -> Vec<usize> {
    (0..rep.order()).filter(|&g| rep.group.element_order(g) == k).collect()
}

/// A subgroup of the given order, if any.
pub fn subgroup_of_order(rep: &GroupRep, order: usize) -> Result<Option<Mask>> {
    Ok(rep.group.subgroups(10_000)?.into_iter().find(|s| s.len() == order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::cyclic;

    fn rep_from(group: FiniteGroup, mats: Vec<SmallMat>) -> GroupRep {
        let gens = group.gens.iter().map(|&g| g as usize).collect();
        let words = vec![vec![]; mats.len()];
        GroupRep { group, mats, words, gens }
    }

    /// ℤ/2 acting on ℤ by −1: H¹ = ℤ/2, H² = 0.
    fn sign_rep() -> GroupRep {
        rep_from(cyclic(2), vec![vec![vec![1]], vec![vec![-1]]])
    }

    #[test]
    fn sign_module() {
        let r = sign_rep();
        assert!(r.is_homomorphism());
        assert_eq!(h1(&r).unwrap().invariants, vec![2]);
        assert_eq!(h1_cyclic(&r, 1).unwrap(), vec![2]);
        assert_eq!(h2_cyclic(&r, 1).unwrap(), Vec::<u64>::new());
        assert_eq!(h2_bockstein(&r).unwrap().invariants, Vec::<u64>::new());
        assert!(fixed_sublattice(&r).unwrap().is_empty());
    }

    /// Trivial action of ℤ/n on ℤ: H¹ = 0, H² = ℤ/n.
    #[test]
    fn trivial_module() {
        for n in [2usize, 3, 4, 6] {
            let r = rep_from(cyclic(n), vec![vec![vec![1]]; n]);
            assert!(h1(&r).unwrap().invariants.is_empty());
            assert_eq!(h2_bockstein(&r).unwrap().invariants, vec![n as u64]);
            assert_eq!(h2_cyclic(&r, 1).unwrap(), vec![n as u64]);
        }
    }


    #[test]
    fn coinduced_quotient_shifts_degree() {
        let r = sign_rep();
        let q = coinduced_quotient(&r);
        assert!(q.is_homomorphism());
        assert_eq!(h1(&q).unwrap().invariants, h2_cyclic(&r, 1).unwrap());
        let t = rep_from(cyclic(3), vec![vec![vec![1]]; 3]);
        assert_eq!(h1(&coinduced_quotient(&t)).unwrap().invariants, vec![3]);
    }

    #[test]
    fn local_smith_counts_kernel() {
        // diag(2, 4) mod 8: kernel has 2 · 4 elements
        let m = vec![vec![2, 0], vec![0, 4]];
        let v = local_valuations(&m, 2, 2, 3);
        assert_eq!(log_kernel(&v, 3), 3);
        assert_eq!(local_valuations(&vec![vec![6, 4]], 2, 2, 3), vec![1, 3]);
    }
}

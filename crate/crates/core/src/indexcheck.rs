//! Certifying that no overlattice of Λ is spanned by divisor classes.
//!
//! For a prime p let k_p be the kernel of the pairing on Λ/pΛ and M_p ⊆ k_p
//! the classes whose lifts have norm divisible by 2p².  The kernel Λ_p of
//! Λ/pΛ → Pic/pPic lies in M_p, is stable under every symmetry, and has
//! dimension at most ⌊v_p(det)/2⌋.  Each candidate surviving these
//! constraints is refuted by a difference of two curves E ≡ v mod pΛ with
//! E² = −8 and ℓ·E = 0: if E were 2C then ±C would be effective with
//! ℓ·C = 0, impossible for the ample class ℓ.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::latbuild::{apply, IsometryRep, OrbitLattice, SmallMat};
use crate::lattice::matrix::{det, to_imat};
use crate::lattice::{trivial_primes_bound, valuation};

pub type ModVec = Vec<u8>;

/// Kernel of the Gram matrix mod p, as a basis in reduced echelon form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModpKernel {
    pub p: u64,
    pub basis: Vec<ModVec>,
}

fn modp(x: i64, p: u64) -> u64 {
    x.rem_euclid(p as i64) as u64
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    // p is prime
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Reduced row echelon form mod p; returns (rows, pivot columns).
pub(crate) fn rref_mod(mut a: Vec<Vec<u64>>, p: u64) -> (Vec<Vec<u64>>, Vec<usize>) {
    let cols = a.first().map_or(0, |r| r.len());
    let mut pivots = vec![];
    let mut r = 0;
    for c in 0..cols {
        let Some(i) = (r..a.len()).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, i);
        let inv = inv_mod(a[r][c], p);
        for x in a[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..a.len() {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..cols {
                    a[i][j] = (a[i][j] + p * p - f * a[r][j] % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

pub fn rank_mod(rows: &[Vec<u64>], p: u64) -> usize {
    rref_mod(rows.to_vec(), p).1.len()
}

pub fn kernel_mod_p(gram: &SmallMat, p: u64) -> ModpKernel {
    let n = gram.len();
    let a: Vec<Vec<u64>> = gram.iter().map(|r| r.iter().map(|&x| modp(x, p)).collect()).collect();
    let (rows, piv) = rref_mod(a, p);
    let free: Vec<usize> = (0..n).filter(|c| !piv.contains(c)).collect();
    let basis = free
        .iter()
        .map(|&f| {
            let mut v = vec![0u64; n];
            v[f] = 1;
            for (row, &pc) in rows.iter().zip(&piv) {
                v[pc] = (p - row[f]) % p;
            }
            v.into_iter().map(|x| x as u8).collect()
        })
        .collect();
    ModpKernel { p, basis }
}

fn lift_norm(gram: &SmallMat, v: &ModVec) -> i64 {
    let v: Vec<i64> = v.iter().map(|&x| x as i64).collect();
    let gv = apply(gram, &v);
    v.iter().zip(&gv).map(|(a, b)| a * b).sum()
}

/// All nonzero elements of k_p whose lift (entries in [0, p)) has norm ≡ 0
/// mod 2p².  For an even lattice the condition does not depend on the lift.
pub fn mp_set(gram: &SmallMat, k: &ModpKernel) -> Result<Vec<ModVec>> {
    let p = k.p;
    let dim = k.basis.len() as u32;
    let total = p.checked_pow(dim).filter(|&t| t <= 1_000_000).ok_or_else(|| Error::EnumerationTooLarge(format!("{p}^{dim}")))?;
    let n = gram.len();
    let mut out = vec![];
    for idx in 1..total {
        let mut v = vec![0u64; n];
        let mut c = idx;
        for b in &k.basis {
            let a = c % p;
            c /= p;
            for (x, &y) in v.iter_mut().zip(b) {
                *x = (*x + a * y as u64) % p;
            }
        }
        let v: ModVec = v.into_iter().map(|x| x as u8).collect();
        if lift_norm(gram, &v).rem_euclid(2 * (p * p) as i64) == 0 {
            out.push(v);
        }
    }
    out.sort();
    Ok(out)
}

pub fn act_mod(m: &SmallMat, v: &ModVec, p: u64) -> ModVec {
    let vi: Vec<i64> = v.iter().map(|&x| x as i64).collect();
    apply(m, &vi).into_iter().map(|x| modp(x, p) as u8).collect()
}

/// Orbit of v under the group generated by `gens` acting mod p.
pub fn orbit_mod(gens: &[SmallMat], v: &ModVec, p: u64) -> Vec<ModVec> {
    let mut seen = BTreeSet::from([v.clone()]);
    let mut queue = VecDeque::from([v.clone()]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = act_mod(g, &x, p);
            if seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen.into_iter().collect()
}

pub fn span_dim(vs: &[ModVec], p: u64) -> usize {
    rank_mod(&vs.iter().map(|v| v.iter().map(|&x| x as u64).collect()).collect::<Vec<_>>(), p)
}

/// Elements of the span of `vs` (all of them, including 0).
pub fn span_elements(vs: &[ModVec], p: u64) -> Vec<ModVec> {
    let (basis, _) = rref_mod(vs.iter().map(|v| v.iter().map(|&x| x as u64).collect()).collect(), p);
    let n = vs.first().map_or(0, |v| v.len());
    let total = p.pow(basis.len() as u32);
    (0..total)
        .map(|idx| {
            let mut v = vec![0u64; n];
            let mut c = idx;
            for b in &basis {
                let a = c % p;
                c /= p;
                for (x, &y) in v.iter_mut().zip(b) {
                    *x = (*x + a * y) % p;
                }
            }
            v.into_iter().map(|x| x as u8).collect()
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitInfo {
    pub size: usize,
    pub span_dim: usize,
    pub representative: ModVec,
}

/// Partition of M_p into orbits under `gens`.
pub fn orbit_partition(m: &[ModVec], gens: &[SmallMat], p: u64) -> Vec<OrbitInfo> {
    let mut left: BTreeSet<ModVec> = m.iter().cloned().collect();
    let mut out = vec![];
    while let Some(v) = left.iter().next().cloned() {
        let orb = orbit_mod(gens, &v, p);
        for x in &orb {
            left.remove(x);
        }
        out.push(OrbitInfo { size: orb.len(), span_dim: span_dim(&orb, p), representative: v });
    }
    out
}

/// Elements of M whose orbit spans a space of dimension ≤ dmax.
pub fn orbit_span_filter(m: &[ModVec], gens: &[SmallMat], p: u64, dmax: usize) -> Vec<ModVec> {
    m.iter().filter(|v| span_dim(&orbit_mod(gens, v, p), p) <= dmax).cloned().collect()
}

/// E = class(D₁) − class(D₂) for two curves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub target: ModVec,
    pub labels: (String, String),
    pub classes: (Vec<i64>, Vec<i64>),
    pub pairing: i64,
    pub e_vector: Vec<i64>,
    pub e_norm: i64,
    pub l_dot_e: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Obstruction {
    Obstructed(Witness),
    Inconclusive(ModVec),
}

/// A curve available as half of a witness.
#[derive(Clone, Debug)]
pub struct Curve {
    pub label: String,
    pub class: Vec<i64>,
}

fn witness_from(ol: &OrbitLattice, l: &[i64], target: &ModVec, a: &Curve, b: &Curve) -> Option<Witness> {
    let e: Vec<i64> = a.class.iter().zip(&b.class).map(|(x, y)| x - y).collect();
    if e.iter().zip(target).any(|(x, &t)| x.rem_euclid(2) as u8 != t) {
        return None;
    }
    let norm = ol.norm(&e).to_i64()?;
    let ldot = ol.dot(l, &e).to_i64()?;
    if norm != -8 || ldot != 0 {
        return None;
    }
    Some(Witness {
        target: target.clone(),
        labels: (a.label.clone(), b.label.clone()),
        classes: (a.class.clone(), b.class.clone()),
        pairing: ol.dot(&a.class, &b.class).to_i64()?,
        e_vector: e,
        e_norm: norm,
        l_dot_e: ldot,
    })
}

/// Searches the preferred pairs first, then all pairs of `curves`.
pub fn divisibility_obstruction(v: &ModVec, ol: &OrbitLattice, l: &[i64], preferred: &[(Curve, Curve)], curves: &[Curve]) -> Obstruction {
    for (a, b) in preferred {
        if let Some(w) = witness_from(ol, l, v, a, b) {
            return Obstruction::Obstructed(w);
        }
    }
    for a in curves {
        for b in curves {
            if a.label != b.label {
                if let Some(w) = witness_from(ol, l, v, a, b) {
                    return Obstruction::Obstructed(w);
                }
            }
        }
    }
    Obstruction::Inconclusive(v.clone())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeReport {
    pub p: u64,
    pub valuation: u32,
    pub dmax: usize,
    pub kernel: Vec<ModVec>,
    pub mp_set: Vec<ModVec>,
    pub h_orbits: Vec<OrbitInfo>,
    /// Elements of M_p whose G-orbit spans at most `dmax` dimensions.
    pub candidates: Vec<ModVec>,
    /// Nonzero elements of the span of the candidates.
    pub span: Vec<ModVec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub gram_hash: String,
    pub gram: SmallMat,
    pub hyperplane: Vec<i64>,
    pub generators: Vec<IsometryRep>,
    pub h_generator_count: usize,
    pub primes_checked: Vec<u64>,
    pub primes: Vec<PrimeReport>,
    pub witnesses: Vec<Witness>,
    pub notes: Vec<String>,
    pub verdict: String,
}

pub const VERDICT: &str = "Pic = Lambda";

pub fn gram_hash(gram: &SmallMat) -> String {
    let s = serde_json::to_string(gram).expect("serializable");
    hex::encode(Sha256::digest(s.as_bytes()))
}

pub fn prime_report(gram: &SmallMat, p: u64, h_gens: &[SmallMat], g_gens: &[SmallMat]) -> Result<PrimeReport> {
    let d = det(&to_imat(gram));
    let val = valuation(&d, p);
    let dmax = (val / 2) as usize;
    let k = kernel_mod_p(gram, p);
    let m = mp_set(gram, &k)?;
    for v in &m {
        for g in g_gens {
            if m.binary_search(&act_mod(g, v, p)).is_err() {
                return Err(Error::VerificationFailed(format!("M_{p} is not stable under the symmetry group")));
            }
        }
    }
    let h_orbits = orbit_partition(&m, h_gens, p);
    let candidates = orbit_span_filter(&m, g_gens, p, dmax);
    let span = if candidates.is_empty() { vec![] } else { span_elements(&candidates, p).into_iter().filter(|v| v.iter().any(|&x| x != 0)).collect() };
    Ok(PrimeReport { p, valuation: val, dmax, kernel: k.basis, mp_set: m, h_orbits, candidates, span })
}

/// Runs the whole index check and assembles the certificate.
pub fn verdict(
    ol: &OrbitLattice,
    l: &[i64],
    h_gens: &[IsometryRep],
    gal_gens: &[IsometryRep],
    preferred: &[(Curve, Curve)],
    curves: &[Curve],
    notes: Vec<String>,
) -> Result<Certificate> {
    let gram: SmallMat = ol.gram.iter().map(|r| r.iter().map(|x| x.to_i64().expect("small Gram")).collect()).collect();
    let d = det(&ol.gram);
    let primes = trivial_primes_bound(&d);
    let hm: Vec<SmallMat> = h_gens.iter().map(|g| g.matrix.clone()).collect();
    let gm: Vec<SmallMat> = h_gens.iter().chain(gal_gens).map(|g| g.matrix.clone()).collect();
    let mut reports = vec![];
    let mut witnesses = vec![];
    for &p in &primes {
        let rep = prime_report(&gram, p, &hm, &gm)?;
        if !rep.span.is_empty() {
            if p != 2 {
                return Err(Error::VerificationFailed(format!("candidate {:?} at p = {p}", rep.span[0])));
            }
            for v in &rep.span {
                match divisibility_obstruction(v, ol, l, preferred, curves) {
                    Obstruction::Obstructed(w) => witnesses.push(w),
                    Obstruction::Inconclusive(v) => {
                        return Err(Error::VerificationFailed(format!("no witness for {v:?} at p = 2")));
                    }
                }
            }
        }
        reports.push(rep);
    }
    Ok(Certificate {
        gram_hash: gram_hash(&gram),
        gram,
        hyperplane: l.to_vec(),
        generators: h_gens.iter().chain(gal_gens).cloned().collect(),
        h_generator_count: h_gens.len(),
        primes_checked: primes,
        primes: reports,
        witnesses,
        notes,
        verdict: VERDICT.into(),
    })
}

fn dot(g: &SmallMat, a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(apply(g, b)).map(|(x, y)| x * y).sum()
}

/// Re-checks a certificate with integer arithmetic only.
pub fn verify_certificate(c: &Certificate) -> Result<()> {
    let fail = |m: String| Err(Error::VerificationFailed(m));
    let g = &c.gram;
    let n = g.len();
    if gram_hash(g) != c.gram_hash {
        return fail("Gram hash mismatch".into());
    }
    if (0..n).any(|i| g[i].len() != n || (0..n).any(|j| g[i][j] != g[j][i])) || (0..n).any(|i| g[i][i] % 2 != 0) {
        return fail("Gram matrix is not symmetric and even".into());
    }
    let d = det(&to_imat(g));
    if d.is_zero() {
        return fail("degenerate Gram matrix".into());
    }
    if trivial_primes_bound(&d) != c.primes_checked {
        return fail("primes checked differ from the primes whose square divides det".into());
    }
    let l = &c.hyperplane;
    if dot(g, l, l) != 2 {
        return fail("ℓ² ≠ 2".into());
    }
    let gt = to_imat(g);
    for s in &c.generators {
        let m = to_imat(&s.matrix);
        let mt = crate::lattice::matrix::transpose(&m);
        let prod = crate::lattice::matrix::mat_mul(&crate::lattice::matrix::mat_mul(&mt, &gt), &m);
        if prod != gt || det(&m).abs() != BigInt::from(1) {
            return fail(format!("{} is not an isometry", s.name));
        }
        if apply(&s.matrix, l) != *l {
            return fail(format!("{} moves ℓ", s.name));
        }
    }
    let hm: Vec<SmallMat> = c.generators[..c.h_generator_count].iter().map(|s| s.matrix.clone()).collect();
    let gm: Vec<SmallMat> = c.generators.iter().map(|s| s.matrix.clone()).collect();
    if c.primes.iter().map(|r| r.p).collect::<Vec<_>>() != c.primes_checked {
        return fail("prime reports do not match the primes checked".into());
    }
    let mut covered: BTreeMap<ModVec, &Witness> = BTreeMap::new();
    for w in &c.witnesses {
        let (a, b) = &w.classes;
        let e: Vec<i64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        if e != w.e_vector {
            return fail(format!("witness {:?}: E is not the difference of its classes", w.labels));
        }
        let (na, nb, ab) = (dot(g, a, a), dot(g, b, b), dot(g, a, b));
        if na != -2 || nb != -2 || ab != w.pairing || ab != 2 {
            return fail(format!("witness {:?}: curve classes or pairing wrong", w.labels));
        }
        if dot(g, l, a) != 2 || dot(g, l, b) != 2 {
            return fail(format!("witness {:?}: curves are not conic halves", w.labels));
        }
        // −8 = (−2) + (−2) − 2(D·D′)
        let en = dot(g, &e, &e);
        if en != w.e_norm || en != na + nb - 2 * ab || en != -8 || dot(g, l, &e) != 0 || w.l_dot_e != 0 {
            return fail(format!("witness {:?}: E² or ℓ·E wrong", w.labels));
        }
        if e.iter().zip(&w.target).any(|(x, &t)| x.rem_euclid(2) as u8 != t) {
            return fail(format!("witness {:?}: E is not congruent to its target", w.labels));
        }
        covered.insert(w.target.clone(), w);
    }
    for r in &c.primes {
        let recomputed = prime_report(g, r.p, &hm, &gm)?;
        if recomputed.kernel.len() != n - rank_mod(&g.iter().map(|row| row.iter().map(|&x| modp(x, r.p)).collect()).collect::<Vec<_>>(), r.p) {
            return fail(format!("kernel dimension at p = {}", r.p));
        }
        if &recomputed != r {
            return fail(format!("report for p = {} does not match recomputation", r.p));
        }
        if r.p != 2 && !r.span.is_empty() {
            return fail(format!("unrefuted candidates at p = {}", r.p));
        }
        if r.p == 2 {
            if let Some(v) = r.span.iter().find(|v| !covered.contains_key(*v)) {
                return fail(format!("candidate {v:?} at p = 2 has no witness"));
            }
        }
    }
    if c.verdict != VERDICT {
        return fail("verdict string".into());
    }
    Ok(())
}

/// Exponent of 2 and 3 in |det|, for reports.
pub fn det_valuations(gram: &SmallMat) -> (u32, u32) {
    let d = det(&to_imat(gram));
    (valuation(&d, 2), valuation(&d, 3))
}

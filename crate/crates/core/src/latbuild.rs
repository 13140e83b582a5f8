//! The lattice Λ spanned by the orbit divisors, its hyperplane class, and
//! the action of H and of the Galois group on it.
//!
//! Classes are handled in two coordinate systems: rational coordinates
//! `y` over 19 independent orbit divisors D_S, and integral coordinates
//! `x` over a ℤ-basis of Λ, related by `y = P x`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{EmbedCtx, Embedding, GenImages, Rat, GEN_BETA, GEN_C0, GEN_ZETA12};
use crate::group::Concrete;
use crate::intersect::{intersection_number_embedded, XYZ};
use crate::lattice::matrix::{self, det, hnf_rows, inverse_rational, mat_mul, transpose, IMat, QMat};
use crate::lattice::IntLattice;
use crate::surface::{galois_generators, h_generators, DivisorCurve, EmbeddedCurve, Orbit, Psi};

pub type SmallMat = Vec<Vec<i64>>;

/// Λ with a chosen ℤ-basis.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrbitLattice {
    pub labels: Vec<String>,
    /// Full intersection matrix of the orbit divisors.
    pub matrix: SmallMat,
    /// Indices of the independent divisors D_S.
    pub selected: Vec<usize>,
    /// Columns: basis vectors of Λ in D_S coordinates, times `den`.
    pub basis_num: IMat,
    pub den: BigInt,
    pub gram: IMat,
    /// Coordinates of every orbit divisor in the Λ basis.
    pub coords: SmallMat,
    #[serde(skip)]
    p_inv: QMat,
    #[serde(skip)]
    gram_s_inv: QMat,
}

/// An isometry of Λ in the Λ basis, acting on column vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsometryRep {
    pub name: String,
    pub matrix: SmallMat,
}

fn q(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

fn qmat_vec(a: &QMat, v: &[Rat]) -> Vec<Rat> {
    a.iter().map(|r| r.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
}

fn to_small(v: &[Rat], what: &str) -> Result<Vec<i64>> {
    v.iter()
        .map(|x| {
            if x.is_integer() {
                x.to_integer().to_i64().ok_or_else(|| Error::TooLarge(what.into()))
            } else {
                Err(Error::NonIntegralClass(what.into()))
            }
        })
        .collect()
}

/// Indices of a maximal set of linearly independent rows, chosen greedily.
fn independent_rows(m: &SmallMat) -> Vec<usize> {
    let mut echelon: Vec<(usize, Vec<Rat>)> = vec![];
    let mut chosen = vec![];
    for (i, row) in m.iter().enumerate() {
        let mut v: Vec<Rat> = row.iter().map(|&x| q(x)).collect();
        for (p, e) in &echelon {
            if !v[*p].is_zero() {
                let f = v[*p].clone() / &e[*p];
                for (a, b) in v.iter_mut().zip(e) {
                    *a -= &f * b;
                }
            }
        }
        if let Some(p) = v.iter().position(|x| !x.is_zero()) {
            echelon.push((p, v));
            chosen.push(i);
        }
    }
    chosen
}

/// Builds Λ from the intersection matrix of its generators.
pub fn quotient_by_radical(labels: Vec<String>, m: SmallMat, expected_rank: usize) -> Result<OrbitLattice> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) || (0..n).any(|i| (0..i).any(|j| m[i][j] != m[j][i])) {
        return Err(Error::Precondition("intersection matrix is not symmetric".into()));
    }
    let sel = independent_rows(&m);
    if sel.len() != expected_rank {
        return Err(Error::RankMismatch { expected: expected_rank, found: sel.len() });
    }
    let r = sel.len();
    let gram_s: IMat = sel.iter().map(|&i| sel.iter().map(|&j| BigInt::from(m[i][j])).collect()).collect();
    let gram_s_inv = inverse_rational(&gram_s).ok_or(Error::Degenerate)?;
    // D_S coordinates of every divisor
    let ys: Vec<Vec<Rat>> = (0..n).map(|i| qmat_vec(&gram_s_inv, &sel.iter().map(|&s| q(m[s][i])).collect::<Vec<_>>())).collect();
    let den = ys.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled: IMat = ys.iter().map(|y| y.iter().map(|x| (x * Rat::from_integer(den.clone())).to_integer()).collect()).collect();
    let h = hnf_rows(&scaled);
    if h.len() != r {
        return Err(Error::RankMismatch { expected: r, found: h.len() });
    }
    let basis_num = transpose(&h);
    let p_inv: QMat = inverse_rational(&basis_num)
        .ok_or(Error::Degenerate)?
        .into_iter()
        .map(|row| row.into_iter().map(|x| x * Rat::from_integer(den.clone())).collect())
        .collect();
    let coords = ys.iter().map(|y| to_small(&qmat_vec(&p_inv, y), "orbit divisor")).collect::<Result<Vec<_>>>()?;
    // gram = Pᵀ G_S P with P = basis_num / den
    let g = mat_mul(&mat_mul(&transpose(&basis_num), &gram_s), &basis_num);
    let d2 = &den * &den;
    let gram: IMat = g
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|x| if (&x % &d2).is_zero() { Ok(x / &d2) } else { Err(Error::NonIntegralClass("Gram entry".into())) })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    Ok(OrbitLattice { labels, matrix: m, selected: sel, basis_num, den, gram, coords, p_inv, gram_s_inv })
}

impl OrbitLattice {
    pub fn rank(&self) -> usize {
        self.selected.len()
    }

    pub fn lattice(&self) -> Result<IntLattice> {
        IntLattice::new(self.gram.clone())
    }

    /// Λ coordinates of the class with intersection numbers `w` against D_S.
    pub fn class_from_pairings(&self, w: &[i64], what: &str) -> Result<Vec<i64>> {
        let y = qmat_vec(&self.gram_s_inv, &w.iter().map(|&x| q(x)).collect::<Vec<_>>());
        to_small(&qmat_vec(&self.p_inv, &y), what)
    }

    /// Pairing of two classes given in Λ coordinates.
    pub fn dot(&self, a: &[i64], b: &[i64]) -> BigInt {
        let a: Vec<BigInt> = a.iter().map(|&x| x.into()).collect();
        let b: Vec<BigInt> = b.iter().map(|&x| x.into()).collect();
        matrix::bilinear(&self.gram, &a, &b)
    }

    pub fn norm(&self, a: &[i64]) -> BigInt {
        self.dot(a, a)
    }

    /// The map with D_S coordinates of the images of D_S as columns `y_img`
    /// (column s = image of D_s), in the Λ basis.
    fn map_from_selected_images(&self, y_img: &[Vec<Rat>], name: &str) -> Result<SmallMat> {
        let r = self.rank();
        let den = Rat::from_integer(self.den.clone());
        // columns of P: basis vectors in D_S coordinates
        let mut out = vec![vec![0i64; r]; r];
        for k in 0..r {
            let mut y = vec![Rat::zero(); r];
            for s in 0..r {
                let c = Rat::from_integer(self.basis_num[s][k].clone()) / &den;
                if c.is_zero() {
                    continue;
                }
                for (a, b) in y.iter_mut().zip(&y_img[s]) {
                    *a += &c * b;
                }
            }
            let x = to_small(&qmat_vec(&self.p_inv, &y), name)?;
            for i in 0..r {
                out[i][k] = x[i];
            }
        }
        Ok(out)
    }
}

/// Class of an embedded curve, from its intersections with D_S.
pub fn class_of_embedded(ol: &OrbitLattice, orbit: &Orbit, fq_ctx: &EmbedCtx, e: &EmbeddedCurve) -> Result<Vec<i64>> {
    let w = ol
        .selected
        .iter()
        .map(|&s| intersection_number_embedded(&fq_ctx.fq, &orbit.embedded[s], e, XYZ).map(|r| r.0))
        .collect::<Result<Vec<_>>>()?;
    ol.class_from_pairings(&w, &e.label)
}

/// Class of a curve in Λ coordinates.
pub fn class_of_divisor(d: &DivisorCurve, ol: &OrbitLattice, orbit: &Orbit, ctx: &EmbedCtx) -> Result<Vec<i64>> {
    class_of_embedded(ol, orbit, ctx, &d.embed(ctx)?)
}

/// The hyperplane class: every orbit divisor maps isomorphically onto a
/// conic, so ℓ·D = 2.
pub fn hyperplane_class(ol: &OrbitLattice) -> Result<Vec<i64>> {
    let l = ol
        .class_from_pairings(&vec![2; ol.rank()], "hyperplane class")
        .map_err(|_| Error::NoSolution("hyperplane class is not integral".into()))?;
    if ol.norm(&l) != BigInt::from(2) {
        return Err(Error::NoSolution(format!("ℓ² = {}", ol.norm(&l))));
    }
    for (i, c) in ol.coords.iter().enumerate() {
        if ol.dot(&l, c) != BigInt::from(2) {
            return Err(Error::NoSolution(format!("ℓ·{} ≠ 2", ol.labels[i])));
        }
    }
    Ok(l)
}

/// The embedding ι ∘ τ for an automorphism τ of L.
pub fn twisted_embedding(ctx: &EmbedCtx, tau: &GenImages) -> Result<EmbedCtx> {
    let mut images = [0u32; 5];
    images[GEN_ZETA12] = ctx.embed(&tau.zeta12)?;
    for i in 0..3 {
        images[GEN_BETA[i]] = ctx.embed(&tau.beta[i])?;
    }
    images[GEN_C0] = ctx.embed(&tau.c0)?;
    let emb = Embedding { field: ctx.emb.field.clone(), t0: ctx.emb.t0.clone(), images: images.map(|x| ctx.fq.index(x)) };
    emb.verify()?;
    emb.context()
}

/// Permutation of the orbit induced by ψ.
pub fn psi_permutation(psi: &Psi, orbit: &Orbit, ctx: &EmbedCtx) -> Result<Vec<usize>> {
    orbit
        .embedded
        .iter()
        .map(|e| {
            orbit
                .find(&psi.apply_embedded(ctx, e))
                .ok_or_else(|| Error::VerificationFailed(format!("{psi} moves {} out of the orbit", e.label)))
        })
        .collect()
}

fn check_isometry(ol: &OrbitLattice, m: &SmallMat, name: &str) -> Result<()> {
    let mb: IMat = matrix::to_imat(m);
    if mat_mul(&mat_mul(&transpose(&mb), &ol.gram), &mb) != ol.gram {
        return Err(Error::NotIsometry(name.into()));
    }
    if det(&mb).abs() != BigInt::one() {
        return Err(Error::NotIsometry(format!("{name} is not invertible over ℤ")));
    }
    Ok(())
}

pub fn psi_isometry(psi: &Psi, ol: &OrbitLattice, orbit: &Orbit, ctx: &EmbedCtx) -> Result<IsometryRep> {
    let perm = psi_permutation(psi, orbit, ctx)?;
    let y_img: Vec<Vec<Rat>> = ol
        .selected
        .iter()
        .map(|&s| {
            let w: Vec<Rat> = ol.selected.iter().map(|&t| q(ol.matrix[t][perm[s]])).collect();
            qmat_vec(&ol.gram_s_inv, &w)
        })
        .collect();
    let name = psi.to_string();
    let m = ol.map_from_selected_images(&y_img, &name)?;
    check_isometry(ol, &m, &name)?;
    Ok(IsometryRep { name, matrix: m })
}

/// Intersection numbers of D_S with the Galois images of the curves `idx`.
fn galois_pairings(orbit: &Orbit, ol: &OrbitLattice, ctx: &EmbedCtx, tw: &EmbedCtx, idx: &[usize]) -> Result<Vec<Vec<i64>>> {
    idx.par_iter()
        .map(|&i| {
            let e = orbit.curves[i].embed(tw)?;
            ol.selected
                .iter()
                .map(|&s| intersection_number_embedded(&ctx.fq, &orbit.embedded[s], &e, XYZ).map(|r| r.0))
                .collect()
        })
        .collect()
}

pub fn tau_isometry(k: usize, ol: &OrbitLattice, orbit: &Orbit, ctx: &EmbedCtx) -> Result<IsometryRep> {
    let tw = twisted_embedding(ctx, &galois_generators()[k - 1])?;
    let w = galois_pairings(orbit, ol, ctx, &tw, &ol.selected)?;
    let y_img: Vec<Vec<Rat>> = w.iter().map(|w| qmat_vec(&ol.gram_s_inv, &w.iter().map(|&x| q(x)).collect::<Vec<_>>())).collect();
    let name = format!("tau{k}");
    let m = ol.map_from_selected_images(&y_img, &name)?;
    check_isometry(ol, &m, &name)?;
    Ok(IsometryRep { name, matrix: m })
}

/// Checks that τ_k maps every orbit divisor to an integral class of norm
/// −2 agreeing with the matrix action.
pub fn verify_galois_images(k: usize, rep: &IsometryRep, ol: &OrbitLattice, orbit: &Orbit, ctx: &EmbedCtx) -> Result<()> {
    let tw = twisted_embedding(ctx, &galois_generators()[k - 1])?;
    let all: Vec<usize> = (0..orbit.len()).collect();
    let w = galois_pairings(orbit, ol, ctx, &tw, &all)?;
    for (i, w) in w.iter().enumerate() {
        let what = format!("tau{k}*{}", ol.labels[i]);
        let x = ol.class_from_pairings(w, &what)?;
        if ol.norm(&x) != BigInt::from(-2) {
            return Err(Error::VerificationFailed(format!("{what} has norm {}", ol.norm(&x))));
        }
        if apply(&rep.matrix, &ol.coords[i]) != x {
            return Err(Error::VerificationFailed(format!("{what} disagrees with the matrix action")));
        }
    }
    Ok(())
}

pub fn apply(m: &SmallMat, v: &[i64]) -> Vec<i64> {
    m.iter().map(|r| r.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

pub fn mat_mul_small(a: &SmallMat, b: &SmallMat) -> SmallMat {
    let n = a.len();
    let m = b[0].len();
    let mut out = vec![vec![0i64; m]; n];
    for i in 0..n {
        for (k, &aik) in a[i].iter().enumerate() {
            if aik != 0 {
                for j in 0..m {
                    out[i][j] += aik * b[k][j];
                }
            }
        }
    }
    out
}

pub fn identity_small(n: usize) -> SmallMat {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

/// Generators of H followed by τ₁…τ₅.
pub fn generator_isometries(ol: &OrbitLattice, orbit: &Orbit, ctx: &EmbedCtx) -> Result<(Vec<IsometryRep>, Vec<IsometryRep>)> {
    let psis = h_generators().iter().map(|p| psi_isometry(p, ol, orbit, ctx)).collect::<Result<Vec<_>>>()?;
    let taus = (1..=5).map(|k| tau_isometry(k, ol, orbit, ctx)).collect::<Result<Vec<_>>>()?;
    Ok((psis, taus))
}

/// Closure of a set of isometries with Cayley table; words index `gens`.
pub fn matrix_group_closure(gens: &[IsometryRep], cap: usize) -> Result<Concrete<SmallMat>> {
    let n = gens.first().map_or(0, |g| g.matrix.len());
    let mats: Vec<SmallMat> = gens.iter().map(|g| g.matrix.clone()).collect();
    Concrete::generate(identity_small(n), &mats, mat_mul_small, cap)
}

/// Order of the group generated, without building a Cayley table.
pub fn matrix_group_order(gens: &[IsometryRep], cap: usize) -> Result<usize> {
    let n = gens.first().map_or(0, |g| g.matrix.len());
    let mut seen = std::collections::HashSet::from([identity_small(n)]);
    let mut queue = vec![identity_small(n)];
    while let Some(x) = queue.pop() {
        for g in gens {
            let y = mat_mul_small(&x, &g.matrix);
            if seen.insert(y.clone()) {
                if seen.len() > cap {
                    return Err(Error::ClosureBudgetExceeded(cap));
                }
                queue.push(y);
            }
        }
    }
    Ok(seen.len())
}

/// Everything downstream stages need, as one JSON document.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LatticeBundle {
    pub embedding: Embedding,
    pub lattice: OrbitLattice,
    pub hyperplane: Vec<i64>,
    pub h_generators: Vec<IsometryRep>,
    pub galois_generators: Vec<IsometryRep>,
}

impl LatticeBundle {
    pub fn all_generators(&self) -> Vec<IsometryRep> {
        self.h_generators.iter().chain(&self.galois_generators).cloned().collect()
    }

    /// Reattaches the derived matrices dropped from the JSON form.
    pub fn rebuild(mut self) -> Result<Self> {
        let ol = quotient_by_radical(self.lattice.labels.clone(), self.lattice.matrix.clone(), self.lattice.rank())?;
        if ol.gram != self.lattice.gram {
            return Err(Error::VerificationFailed("bundle Gram matrix does not match its intersection matrix".into()));
        }
        self.lattice = ol;
        Ok(self)
    }
}

/// Matrix of ψ given only by the permutation of orbit divisors; used by
/// tests as an independent route.
pub fn permutation_action_consistent(rep: &IsometryRep, perm: &[usize], ol: &OrbitLattice) -> bool {
    ol.coords.iter().enumerate().all(|(i, c)| apply(&rep.matrix, c) == ol.coords[perm[i]])
}

/// Field used in the bundle, for reports.
pub fn describe(ctx: &EmbedCtx) -> String {
    format!("{} (t0 = {}, images {:?}, ζ₁₂ ↦ {})", ctx.emb.field, ctx.emb.t0, ctx.emb.images, ctx.fq.fmt_elem(ctx.image(GEN_ZETA12)))
}

//! Reduction of L into finite fields.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::finite::divides;
use super::sym::{basis_exponents, SymElem, SYM_DIM};
use super::{ff_make, is_prime, poly_roots, FieldDesc, Field, Fq, FqPoly, Rat};
use crate::error::{Error, Result};

pub const GEN_ZETA12: usize = 0;
pub const GEN_BETA: [usize; 3] = [1, 2, 3];
pub const GEN_C0: usize = 4;

/// A ring map L → F_{p^m} with t ↦ t₀.  Images are stored as element
/// encodings so the value is independent of any table layout.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub field: FieldDesc,
    pub t0: Rat,
    /// Encodings of the images of ζ₁₂, β₀, β₁, β₂, c₀ in that order.
    pub images: [u32; 5],
}

/// Arithmetic context for an [`Embedding`].
#[derive(Clone, Debug)]
pub struct EmbedCtx {
    pub fq: Fq,
    pub emb: Embedding,
    pub t0: u32,
    monomials: Vec<u32>,
}

impl Embedding {
    pub fn context(&self) -> Result<EmbedCtx> {
        let fq = Fq::new(&self.field)?;
        let t0 = fq
            .from_rat(&self.t0)
            .ok_or_else(|| Error::BadReduction(format!("t0 = {} has denominator divisible by {}", self.t0, self.field.p)))?;
        let g: Vec<u32> = self.images.iter().map(|&e| fq.from_index(e)).collect();
        let monomials = (0..SYM_DIM)
            .map(|i| {
                let [a, b0, b1, b2, e] = basis_exponents(i);
                let mut v = fq.pow(&g[GEN_ZETA12], a as u64);
                for (k, b) in [b0, b1, b2].into_iter().enumerate() {
                    if b == 1 {
                        v = fq.mul(&v, &g[GEN_BETA[k]]);
                    }
                }
                fq.mul(&v, &fq.pow(&g[GEN_C0], e as u64))
            })
            .collect();
        Ok(EmbedCtx { fq, emb: self.clone(), t0, monomials })
    }

    /// Checks the defining relations on the stored images.
    pub fn verify(&self) -> Result<()> {
        let ctx = self.context()?;
        let f = &ctx.fq;
        let g: Vec<u32> = self.images.iter().map(|&e| f.from_index(e)).collect();
        let z = g[GEN_ZETA12];
        if z == 0 || f.mult_order(z) != 12 {
            return Err(Error::VerificationFailed("image of ζ₁₂ does not have order 12".into()));
        }
        let z3 = f.pow(&z, 4);
        for i in 0..3 {
            let b = g[GEN_BETA[i]];
            let rhs = f.add(&ctx.t0, &f.mul(&f.from_i64(3), &f.pow(&z3, i as u64)));
            if f.mul(&b, &b) != rhs {
                return Err(Error::VerificationFailed(format!("β{i}² ≠ t0 + 3ζ₃^{i}")));
            }
        }
        let c = g[GEN_C0];
        let h = f.add(&f.add(&f.pow(&c, 3), &f.mul(&ctx.t0, &f.mul(&c, &c))), &f.from_i64(4));
        if h != 0 {
            return Err(Error::VerificationFailed("c0 is not a root of x³ + t0 x² + 4".into()));
        }
        Ok(())
    }
}

impl EmbedCtx {
    pub fn image(&self, gen: usize) -> u32 {
        self.fq.from_index(self.emb.images[gen])
    }

    /// Evaluates a rational function of `t` at `t₀`.
    pub fn embed_qpoly(&self, p: &super::QPoly) -> Result<u32> {
        p.eval_in(&self.fq, &self.t0, |c| self.fq.from_rat(c))
            .ok_or_else(|| Error::BadReduction("coefficient denominator divisible by p".into()))
    }

    pub fn embed_rat(&self, r: &Rat) -> Result<u32> {
        self.fq.from_rat(r).ok_or_else(|| Error::BadReduction(format!("{r} mod {}", self.fq.p())))
    }

    /// The ring homomorphism L → F_{p^m}.
    pub fn embed(&self, e: &SymElem) -> Result<u32> {
        let f = &self.fq;
        let d = self.embed_qpoly(e.den())?;
        let di = f.inv(&d).ok_or_else(|| Error::BadReduction(format!("denominator {} vanishes at t0", e.den())))?;
        let mut acc = 0;
        for i in e.support() {
            let c = self.embed_qpoly(&e.numerators()[i])?;
            acc = f.add(&acc, &f.mul(&c, &self.monomials[i]));
        }
        Ok(f.mul(&acc, &di))
    }
}

/// Free function form of [`EmbedCtx::embed`].
pub fn sym_embed(e: &SymElem, ctx: &EmbedCtx) -> Result<u32> {
    ctx.embed(e)
}

/// Primes that must be avoided for `t₀`: 2, 3, and divisors of the
/// denominator of `t₀`, of `t₀³ + 27` and of the discriminant of
/// x³ + t₀x² + 4 (both cleared of denominators).
pub fn is_bad_prime(t0: &Rat, p: u64) -> bool {
    if p == 2 || p == 3 {
        return true;
    }
    let (n, d) = (t0.numer().clone(), t0.denom().clone());
    if divides(p, &d) {
        return true;
    }
    let n3 = &n * &n * &n;
    let d3 = &d * &d * &d;
    let s = &n3 + BigInt::from(27) * &d3;
    // disc(x³ + t x² + 4) = -16 t³ - 432
    let disc = BigInt::from(-16) * &n3 - BigInt::from(432) * &d3;
    s.is_zero() || disc.is_zero() || divides(p, &s) || divides(p, &disc)
}

/// Tries to embed L into F_{p^m}; picks the smallest root (by encoding) at
/// every step.  `None` when some generator has no image.
pub fn embedding_at(t0: &Rat, desc: &FieldDesc) -> Result<Option<Embedding>> {
    let f = Fq::new(desc)?;
    let q = desc.order();
    if (q - 1) % 12 != 0 {
        return Ok(None);
    }
    let t = match f.from_rat(t0) {
        Some(t) => t,
        None => return Err(Error::BadReduction(format!("t0 = {t0} mod {}", desc.p))),
    };
    let phi12 = FqPoly::from_i64s(&f, &[1, 0, -1, 0, 1]);
    let zr = poly_roots(&f, &phi12)?;
    let Some(&z) = zr.first() else { return Ok(None) };
    let z3 = f.pow(&z, 4);
    let mut betas = [0u32; 3];
    for (i, b) in betas.iter_mut().enumerate() {
        let rhs = f.add(&t, &f.mul(&f.from_i64(3), &f.pow(&z3, i as u64)));
        let poly = FqPoly::new(vec![f.neg(&rhs), 0, 1]);
        match poly_roots(&f, &poly)?.first() {
            Some(&r) => *b = r,
            None => return Ok(None),
        }
    }
    let h = FqPoly::new(vec![f.from_i64(4), 0, t, 1]);
    let Some(&c0) = poly_roots(&f, &h)?.first() else { return Ok(None) };
    let emb = Embedding {
        field: desc.clone(),
        t0: t0.clone(),
        images: [f.index(z), f.index(betas[0]), f.index(betas[1]), f.index(betas[2]), f.index(c0)],
    };
    emb.verify()?;
    Ok(Some(emb))
}

/// Smallest good prime `p ≥ p_min` (and smallest `m ≤ 2`) admitting an
/// embedding of L with `t ↦ t₀`.
pub fn embedding_search(t0: &Rat, p_min: u64) -> Result<(FieldDesc, Embedding)> {
    embedding_search_bounded(t0, p_min, 10_000)
}

pub fn embedding_search_bounded(t0: &Rat, p_min: u64, bound: u64) -> Result<(FieldDesc, Embedding)> {
    let n = t0.numer();
    let d = t0.denom();
    if n * n * n + BigInt::from(27) * d * d * d == BigInt::zero() {
        return Err(Error::Precondition(format!("t0 = {t0} gives a singular fiber")));
    }
    for p in p_min.max(2)..=bound {
        if !is_prime(p) || is_bad_prime(t0, p) {
            continue;
        }
        for m in 1..=2 {
            let desc = ff_make(p, m)?;
            if let Some(e) = embedding_at(t0, &desc)? {
                return Ok((desc, e));
            }
        }
    }
    Err(Error::NoPrimeFound { bound })
}

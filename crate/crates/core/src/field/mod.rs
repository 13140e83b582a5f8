//! Exact coefficient fields.
//!
//! Every algorithm that is generic over its coefficients (Gröbner bases,
//! polynomial division, small linear systems) takes a field *context*
//! implementing [`Field`] together with plain element values.  This keeps
//! finite-field elements as bare integers while the modulus and lookup
//! tables live in the context.

use std::fmt::Debug;
use std::hash::Hash;

mod embed;
mod finite;
mod rat;
mod sym;

pub use embed::{
    embedding_at, embedding_search, embedding_search_bounded, is_bad_prime, sym_embed, EmbedCtx, Embedding, GEN_BETA,
    GEN_C0, GEN_ZETA12,
};
pub use finite::{ff_make, is_prime, poly_roots, rat_mod_p, FieldDesc, Fq, FqPoly};
pub use rat::{rat, QPoly, Rat, RatFunc, RatFuncField, RationalField};
pub use sym::{basis_exponents, basis_index, Gen, GenImages, SymElem, SymExpr, SymField, SYM_DIM};

pub trait Field: Clone + Send + Sync {
    type Elem: Clone + PartialEq + Eq + Hash + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// `None` exactly for zero.
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, n: i64) -> Self::Elem;

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }
}

/// Solves `m * x = rhs` for a square system; `None` if singular.
pub fn solve_linear<F: Field>(
    field: &F,
    m: &[Vec<F::Elem>],
    rhs: &[F::Elem],
) -> Option<Vec<F::Elem>> {
    let n = m.len();
    let mut a: Vec<Vec<F::Elem>> = m
        .iter()
        .zip(rhs)
        .map(|(row, r)| {
            let mut row = row.clone();
            row.push(r.clone());
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !field.is_zero(&a[r][col]))?;
        a.swap(col, piv);
        let inv = field.inv(&a[col][col])?;
        for j in col..=n {
            a[col][j] = field.mul(&a[col][j], &inv);
        }
        for r in 0..n {
            if r != col && !field.is_zero(&a[r][col]) {
                let f = a[r][col].clone();
                for j in col..=n {
                    let t = field.mul(&f, &a[col][j]);
                    a[r][j] = field.sub(&a[r][j], &t);
                }
            }
        }
    }
    Some(a.into_iter().map(|mut row| row.pop().unwrap()).collect())
}

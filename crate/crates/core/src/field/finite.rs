//! Prime fields and their small extensions.
//!
//! Elements of F_q are stored as `u32` in logarithmic form: `0` is zero and
//! `k + 1` stands for `g^k` with `g` a fixed primitive element.  Products are
//! index additions and sums go through a Zech logarithm table, so both are a
//! single lookup.  The *encoding* of an element is the integer
//! `c_0 + c_1 p + ... + c_{m-1} p^{m-1}` of its coefficient vector in the
//! polynomial basis; it fixes the total order used for deterministic choices.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{Field, Rat};
use crate::error::{Error, Result};

/// Largest field for which arithmetic tables are built.
pub const MAX_TABLE_SIZE: u64 = 1 << 24;

/// Deterministic Miller–Rabin for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        r
    };
    'outer: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// F_{p^m} as F_p[x]/(modulus).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldDesc {
    pub p: u64,
    pub m: u32,
    /// Monic, lowest degree first, length `m + 1`.
    pub modulus: Vec<u64>,
}

impl FieldDesc {
    pub fn order(&self) -> u64 {
        self.p.pow(self.m)
    }
}

impl fmt::Display for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)?;
        if self.m > 1 {
            write!(f, "^{} (mod ", self.m)?;
            let mut first = true;
            for (i, &c) in self.modulus.iter().enumerate().rev() {
                if c == 0 {
                    continue;
                }
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                match (i, c) {
                    (0, _) => write!(f, "{c}")?,
                    (1, 1) => write!(f, "x")?,
                    (1, _) => write!(f, "{c}x")?,
                    (_, 1) => write!(f, "x^{i}")?,
                    _ => write!(f, "{c}x^{i}")?,
                }
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

// ---- dense polynomials over F_p (u64 coefficients, lowest first) ----

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let e = BigInt::from(a).extended_gcd(&BigInt::from(p));
    let x = e.x.mod_floor(&BigInt::from(p));
    x.to_u64().unwrap()
}

fn fp_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let li = inv_mod(b[db], p);
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = r[r.len() - 1] * li % p;
        for (j, &bc) in b.iter().enumerate() {
            r[k + j] = (r[k + j] + p - c * bc % p) % p;
        }
        trim(&mut r);
    }
    r
}

fn fp_mulmod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut c = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            c[i + j] = (c[i + j] + x * y) % p;
        }
    }
    fp_rem(&c, f, p)
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = fp_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Rabin-style test: no factor of degree ≤ m/2.
fn fp_irreducible(f: &[u64], p: u64) -> bool {
    let m = f.len() - 1;
    if m <= 1 {
        return m == 1;
    }
    let x = vec![0u64, 1];
    let mut xp = x.clone();
    for _ in 0..m / 2 {
        // xp <- xp^p mod f
        let mut acc = vec![1u64];
        let mut base = xp.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = fp_mulmod(&acc, &base, f, p);
            }
            base = fp_mulmod(&base, &base, f, p);
            e >>= 1;
        }
        xp = acc;
        let mut d = xp.clone();
        d.resize(d.len().max(2), 0);
        d[1] = (d[1] + p - 1) % p;
        trim(&mut d);
        if fp_gcd(f, &d, p).len() > 1 {
            return false;
        }
    }
    true
}

/// Builds F_{p^m} with the smallest monic irreducible modulus, ordering
/// candidates by their coefficient vectors read from the top coefficient
/// down.  For `m = 1` the modulus is `x`.
pub fn ff_make(p: u64, m: u32) -> Result<FieldDesc> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if m == 0 {
        return Err(Error::Precondition("extension degree must be at least 1".into()));
    }
    let q = p
        .checked_pow(m)
        .filter(|&q| q <= 1u64 << 32)
        .ok_or_else(|| Error::TooLarge(format!("{p}^{m} exceeds 2^32")))?;
    if m == 1 {
        return Ok(FieldDesc { p, m, modulus: vec![0, 1] });
    }
    for n in 0..q {
        let mut f = Vec::with_capacity(m as usize + 1);
        let mut k = n;
        for _ in 0..m {
            f.push(k % p);
            k /= p;
        }
        f.push(1);
        if f[0] != 0 && fp_irreducible(&f, p) {
            return Ok(FieldDesc { p, m, modulus: f });
        }
    }
    Err(Error::NoIrreducibleFound { p, m })
}

struct FqInner {
    desc: FieldDesc,
    q: u32,
    /// exp[k] = encoding of g^k, for k in 0..q-1.
    exp: Vec<u32>,
    /// log[enc] = k with g^k = enc; undefined at 0.
    log: Vec<u32>,
    /// zech[k] = repr of 1 + g^k.
    zech: Vec<u32>,
    /// repr of -1.
    minus_one: u32,
}

/// Arithmetic context for F_{p^m}; cheap to clone.
#[derive(Clone)]
pub struct Fq {
    inner: Arc<FqInner>,
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Fq({})", self.inner.desc)
    }
}

impl Fq {
    pub fn new(desc: &FieldDesc) -> Result<Self> {
        let (p, m) = (desc.p, desc.m as usize);
        let q64 = desc.order();
        if q64 > MAX_TABLE_SIZE {
            return Err(Error::TooLarge(format!("field of order {q64} is too large for table arithmetic")));
        }
        let q = q64 as u32;
        let digits = |mut e: u64| {
            let mut v = Vec::with_capacity(m);
            for _ in 0..m {
                v.push(e % p);
                e /= p;
            }
            v
        };
        let undigits = |v: &[u64]| v.iter().rev().fold(0u64, |acc, &c| acc * p + c) as u32;
        let mulenc = |a: u32, b: u32| {
            let mut r = fp_mulmod(&digits(a as u64), &digits(b as u64), &desc.modulus, p);
            r.resize(m, 0);
            undigits(&r)
        };
        // Smallest primitive element in encoding order.
        let mut exp = Vec::with_capacity(q as usize - 1);
        'search: for g in 1..q {
            exp.clear();
            let mut cur = 1u32;
            for k in 0..q - 1 {
                if k > 0 && cur == 1 {
                    continue 'search;
                }
                exp.push(cur);
                cur = mulenc(cur, g);
            }
            if cur == 1 {
                break;
            }
        }
        debug_assert_eq!(exp.len(), q as usize - 1);
        let mut log = vec![0u32; q as usize];
        for (k, &e) in exp.iter().enumerate() {
            log[e as usize] = k as u32;
        }
        let mut zech = vec![0u32; q as usize - 1];
        for k in 0..q as usize - 1 {
            let mut d = digits(exp[k] as u64);
            d[0] = (d[0] + 1) % p;
            let e = undigits(&d);
            zech[k] = if e == 0 { 0 } else { log[e as usize] + 1 };
        }
        let minus_one = if p == 2 { 1 } else { (q - 1) / 2 + 1 };
        Ok(Fq { inner: Arc::new(FqInner { desc: desc.clone(), q, exp, log, zech, minus_one }) })
    }

    pub fn desc(&self) -> &FieldDesc {
        &self.inner.desc
    }

    pub fn p(&self) -> u64 {
        self.inner.desc.p
    }

    pub fn order(&self) -> u32 {
        self.inner.q
    }

    pub fn from_index(&self, enc: u32) -> u32 {
        assert!(enc < self.inner.q);
        if enc == 0 {
            0
        } else {
            self.inner.log[enc as usize] + 1
        }
    }

    /// Encoding of an element, used for ordering and serialization.
    pub fn index(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.inner.exp[a as usize - 1]
        }
    }

    /// Coefficients in the polynomial basis, lowest first.
    pub fn digits(&self, a: u32) -> Vec<u64> {
        let p = self.p();
        let mut e = self.index(a) as u64;
        (0..self.inner.desc.m)
            .map(|_| {
                let d = e % p;
                e /= p;
                d
            })
            .collect()
    }

    /// The fixed primitive element.
    pub fn primitive(&self) -> u32 {
        if self.order() == 2 {
            1
        } else {
            2
        }
    }

    /// The class of `x` in F_p[x]/(modulus).
    pub fn generator_x(&self) -> u32 {
        if self.inner.desc.m == 1 {
            // modulus x: x ≡ 0
            0
        } else {
            self.from_index(self.p() as u32)
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> u32 {
        let r = n.mod_floor(&BigInt::from(self.p())).to_u32().unwrap();
        self.from_index(r)
    }

    /// Reduction of a rational; `None` if the denominator vanishes.
    pub fn from_rat(&self, r: &Rat) -> Option<u32> {
        let d = self.from_bigint(r.denom());
        if d == 0 {
            return None;
        }
        Some(self.mul(&self.from_bigint(r.numer()), &self.inv(&d)?))
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.inner.q).map(|e| self.from_index(e))
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: u32) -> u64 {
        assert!(a != 0);
        let n = (self.inner.q - 1) as u64;
        let k = (a - 1) as u64;
        n / k.gcd(&n)
    }

    /// Compares two elements by encoding.
    pub fn cmp_elems(&self, a: u32, b: u32) -> std::cmp::Ordering {
        self.index(a).cmp(&self.index(b))
    }

    pub fn fmt_elem(&self, a: u32) -> String {
        let d = self.digits(a);
        if self.inner.desc.m == 1 {
            return d[0].to_string();
        }
        let mut parts = vec![];
        for (i, &c) in d.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            parts.push(match (i, c) {
                (0, _) => c.to_string(),
                (1, 1) => "x".into(),
                (1, _) => format!("{c}x"),
                (_, 1) => format!("x^{i}"),
                _ => format!("{c}x^{i}"),
            });
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("+")
        }
    }

    #[inline]
    fn add_repr(&self, a: u32, b: u32) -> u32 {
        if a == 0 {
            return b;
        }
        if b == 0 {
            return a;
        }
        let n = self.inner.q - 1;
        let (i, j) = (a - 1, b - 1);
        let d = if j >= i { j - i } else { j + n - i };
        let z = self.inner.zech[d as usize];
        if z == 0 {
            0
        } else {
            let s = i + z - 1;
            (if s >= n { s - n } else { s }) + 1
        }
    }
}

impl Field for Fq {
    type Elem = u32;

    #[inline]
    fn zero(&self) -> u32 {
        0
    }
    #[inline]
    fn one(&self) -> u32 {
        1
    }
    #[inline]
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    #[inline]
    fn add(&self, a: &u32, b: &u32) -> u32 {
        self.add_repr(*a, *b)
    }
    #[inline]
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        self.add_repr(*a, self.neg(b))
    }
    #[inline]
    fn neg(&self, a: &u32) -> u32 {
        if *a == 0 {
            0
        } else {
            self.mul(a, &self.inner.minus_one)
        }
    }
    #[inline]
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        if *a == 0 || *b == 0 {
            return 0;
        }
        let n = self.inner.q - 1;
        let s = (a - 1) + (b - 1);
        (if s >= n { s - n } else { s }) + 1
    }
    #[inline]
    fn inv(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            return None;
        }
        let n = self.inner.q - 1;
        let k = a - 1;
        Some(if k == 0 { 1 } else { n - k + 1 })
    }
    fn from_i64(&self, n: i64) -> u32 {
        self.from_bigint(&BigInt::from(n))
    }
    fn pow(&self, a: &u32, e: u64) -> u32 {
        if *a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let n = (self.inner.q - 1) as u64;
        ((((a - 1) as u64) * (e % n)) % n) as u32 + 1
    }
}

/// Univariate polynomial over an [`Fq`], lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FqPoly {
    pub coeffs: Vec<u32>,
}

impl FqPoly {
    pub fn new(mut coeffs: Vec<u32>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FqPoly { coeffs }
    }

    pub fn from_i64s(f: &Fq, cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| f.from_i64(c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, f: &Fq, x: u32) -> u32 {
        self.coeffs.iter().rev().fold(0, |acc, c| f.add(&f.mul(&acc, &x), c))
    }

    /// Quotient by `(X - r)` assuming `r` is a root.
    fn deflate(&self, f: &Fq, r: u32) -> Self {
        let n = self.coeffs.len();
        let mut q = vec![0u32; n - 1];
        let mut carry = 0u32;
        for i in (1..n).rev() {
            carry = f.add(&self.coeffs[i], &f.mul(&carry, &r));
            q[i - 1] = carry;
        }
        Self::new(q)
    }
}

/// All roots in the field with multiplicity, ascending by encoding.
pub fn poly_roots(f: &Fq, poly: &FqPoly) -> Result<Vec<u32>> {
    if poly.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = vec![];
    let mut g = poly.clone();
    for x in f.elements() {
        if g.degree() == Some(0) {
            break;
        }
        while g.degree().unwrap_or(0) > 0 && g.eval(f, x) == 0 {
            out.push(x);
            g = g.deflate(f, x);
        }
    }
    Ok(out)
}

/// Rational reduction helper: `None` when `p` divides the denominator.
pub fn rat_mod_p(r: &Rat, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let d = r.denom().mod_floor(&pb);
    if d.is_zero() {
        return None;
    }
    let n = r.numer().mod_floor(&pb);
    let di = inv_mod(d.to_u64()?, p);
    Some((n.to_u64()? as u128 * di as u128 % p as u128) as u64)
}

/// Whether `p` divides the integer `n`.
pub fn divides(p: u64, n: &BigInt) -> bool {
    (n.abs() % BigInt::from(p)).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let small: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn field_axioms_small() {
        for (p, m) in [(2, 1), (2, 3), (3, 2), (5, 2), (7, 1)] {
            let d = ff_make(p, m).unwrap();
            let f = Fq::new(&d).unwrap();
            let els: Vec<u32> = f.elements().collect();
            assert_eq!(els.len() as u64, d.order());
            for &a in &els {
                assert_eq!(f.add(&a, &f.neg(&a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
                }
                for &b in &els {
                    // distributivity against digitwise addition
                    let s = f.add(&a, &b);
                    let da = f.digits(a);
                    let db = f.digits(b);
                    let ds: Vec<u64> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                    assert_eq!(f.digits(s), ds);
                }
            }
        }
    }

    #[test]
    fn x_satisfies_modulus() {
        let d = ff_make(79, 2).unwrap();
        assert_eq!(d.modulus, vec![1, 0, 1]);
        let f = Fq::new(&d).unwrap();
        let x = f.generator_x();
        let v = f.add(&f.mul(&x, &x), &1);
        assert_eq!(v, 0);
    }
}

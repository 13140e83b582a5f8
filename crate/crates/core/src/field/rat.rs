//! ℚ, ℚ[t] and ℚ(t).

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::Field;

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Clone, Debug, Default)]
pub struct RationalField;

impl Field for RationalField {
    type Elem = Rat;
    fn zero(&self) -> Rat {
        Rat::zero()
    }
    fn one(&self) -> Rat {
        Rat::one()
    }
    fn is_zero(&self, a: &Rat) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Rat, b: &Rat) -> Rat {
        a + b
    }
    fn sub(&self, a: &Rat, b: &Rat) -> Rat {
        a - b
    }
    fn neg(&self, a: &Rat) -> Rat {
        -a
    }
    fn mul(&self, a: &Rat, b: &Rat) -> Rat {
        a * b
    }
    fn inv(&self, a: &Rat) -> Option<Rat> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn from_i64(&self, n: i64) -> Rat {
        Rat::from_integer(n.into())
    }
}

/// Dense univariate polynomial in `t` over ℚ, lowest degree first, no
/// trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    coeffs: Vec<Rat>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn t() -> Self {
        QPoly { coeffs: vec![Rat::zero(), Rat::one()] }
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn from_i64s(cs: &[i64]) -> Self {
        Self::from_coeffs(cs.iter().map(|&c| Rat::from_integer(c.into())).collect())
    }

    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lc(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn as_constant(&self) -> Option<Rat> {
        match self.coeffs.len() {
            0 => Some(Rat::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i);
            let b = o.coeffs.get(i);
            c.push(match (a, b) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Self::from_coeffs(c)
    }

    pub fn neg(&self) -> Self {
        QPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut c = vec![Rat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::from_coeffs(c)
    }

    pub fn scale(&self, s: &Rat) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        QPoly { coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let lc_inv = d.lc().recip();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![Rat::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &lc_inv;
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[k + j] -= &c * dc;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Self::from_coeffs(q), Self::from_coeffs(r))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(&self.lc().recip())
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rat::from_integer((i as i64).into()))
                .collect(),
        )
    }

    /// Evaluate in an arbitrary field through a coefficient map.
    pub fn eval_in<F: Field>(
        &self,
        field: &F,
        x: &F::Elem,
        coerce: impl Fn(&Rat) -> Option<F::Elem>,
    ) -> Option<F::Elem> {
        let mut acc = field.zero();
        for c in self.coeffs.iter().rev() {
            acc = field.add(&field.mul(&acc, x), &coerce(c)?);
        }
        Some(acc)
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => {}
                (_, false) => write!(f, "{a}*")?,
            }
            match i {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{i}")?,
            }
        }
        Ok(())
    }
}

/// Element of ℚ(t): coprime numerator and monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: QPoly,
    den: QPoly,
}

impl RatFunc {
    pub fn new(num: QPoly, den: QPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = (num.divrem(&g).0, den.divrem(&g).0);
        let lc = d.lc();
        if !lc.is_one() {
            let s = lc.recip();
            n = n.scale(&s);
            d = d.scale(&s);
        }
        RatFunc { num: n, den: d }
    }

    pub fn zero() -> Self {
        RatFunc { num: QPoly::zero(), den: QPoly::one() }
    }

    pub fn one() -> Self {
        Self::from_poly(QPoly::one())
    }

    pub fn t() -> Self {
        Self::from_poly(QPoly::t())
    }

    pub fn from_poly(p: QPoly) -> Self {
        RatFunc { num: p, den: QPoly::one() }
    }

    pub fn from_rat(c: Rat) -> Self {
        Self::from_poly(QPoly::constant(c))
    }

    pub fn num(&self) -> &QPoly {
        &self.num
    }

    pub fn den(&self) -> &QPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::new(self.num.add(&o.num), self.den.clone());
        }
        Self::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn neg(&self) -> Self {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| Self::new(self.den.clone(), self.num.clone()))
    }

    pub fn eval(&self, x: &Rat) -> Option<Rat> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct RatFuncField;

impl Field for RatFuncField {
    type Elem = RatFunc;
    fn zero(&self) -> RatFunc {
        RatFunc::zero()
    }
    fn one(&self) -> RatFunc {
        RatFunc::one()
    }
    fn is_zero(&self, a: &RatFunc) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.add(b)
    }
    fn sub(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.sub(b)
    }
    fn neg(&self, a: &RatFunc) -> RatFunc {
        a.neg()
    }
    fn mul(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.mul(b)
    }
    fn inv(&self, a: &RatFunc) -> Option<RatFunc> {
        a.inv()
    }
    fn from_i64(&self, n: i64) -> RatFunc {
        RatFunc::from_rat(Rat::from_integer(n.into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_and_division() {
        // (t-1)(t+2) and (t-1)(t+5)
        let a = QPoly::from_i64s(&[-2, 1, 1]);
        let b = QPoly::from_i64s(&[-5, 4, 1]);
        assert_eq!(a.gcd(&b), QPoly::from_i64s(&[-1, 1]));
        let (q, r) = a.divrem(&QPoly::from_i64s(&[-1, 1]));
        assert_eq!(q, QPoly::from_i64s(&[2, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn ratfunc_normal_form() {
        let f = RatFunc::new(QPoly::from_i64s(&[-2, 2]), QPoly::from_i64s(&[-3, 3, 0]));
        assert_eq!(f, RatFunc::from_rat(rat(2, 3)));
        let g = RatFunc::new(QPoly::one(), QPoly::from_i64s(&[27, 0, 0, 2]));
        assert_eq!(g.den().lc(), Rat::one());
        assert_eq!(g.mul(&g.inv().unwrap()), RatFunc::one());
        assert_eq!(g.eval(&rat(1, 1)), Some(rat(1, 29)));
    }
}

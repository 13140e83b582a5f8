//! Sparse multivariate polynomials over a [`Field`] context.

use std::cmp::Ordering;
use std::fmt;

use crate::field::Field;

mod groebner;

pub use groebner::{groebner, normal_form, zerodim_degree, Ideal, ZeroDim};

/// Maximum number of variables in one ring.
pub const MAXV: usize = 8;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Mono {
    e: [u16; MAXV],
    deg: u32,
}

impl Mono {
    pub fn one() -> Self {
        Mono::default()
    }

    pub fn from_exps(exps: &[u32]) -> Self {
        assert!(exps.len() <= MAXV);
        let mut e = [0u16; MAXV];
        for (i, &x) in exps.iter().enumerate() {
            e[i] = u16::try_from(x).expect("exponent overflow");
        }
        Mono { e, deg: exps.iter().sum() }
    }

    pub fn var(i: usize, k: u32) -> Self {
        let mut e = [0u32; MAXV];
        e[i] = k;
        Self::from_exps(&e)
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.e[i] as u32
    }

    pub fn exps(&self, n: usize) -> Vec<u32> {
        self.e[..n].iter().map(|&x| x as u32).collect()
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let mut e = self.e;
        for i in 0..MAXV {
            e[i] += o.e[i];
        }
        Mono { e, deg: self.deg + o.deg }
    }

    pub fn divides(&self, o: &Mono) -> bool {
        self.deg <= o.deg && (0..MAXV).all(|i| self.e[i] <= o.e[i])
    }

    /// `o / self`, assuming divisibility.
    pub fn div_into(&self, o: &Mono) -> Mono {
        let mut e = o.e;
        for i in 0..MAXV {
            e[i] -= self.e[i];
        }
        Mono { e, deg: o.deg - self.deg }
    }

    pub fn lcm(&self, o: &Mono) -> Mono {
        let mut e = [0u16; MAXV];
        let mut deg = 0;
        for i in 0..MAXV {
            e[i] = self.e[i].max(o.e[i]);
            deg += e[i] as u32;
        }
        Mono { e, deg }
    }

    pub fn coprime(&self, o: &Mono) -> bool {
        (0..MAXV).all(|i| self.e[i] == 0 || o.e[i] == 0)
    }

    /// Index of the only variable occurring, if the monomial is a pure power.
    pub fn pure_power(&self) -> Option<usize> {
        let nz: Vec<usize> = (0..MAXV).filter(|&i| self.e[i] > 0).collect();
        (nz.len() == 1).then(|| nz[0])
    }
}

impl fmt::Debug for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &self.e)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MonoOrder {
    Grevlex,
    Lex,
}

impl MonoOrder {
    pub fn cmp(&self, a: &Mono, b: &Mono) -> Ordering {
        match self {
            MonoOrder::Lex => a.e.cmp(&b.e),
            MonoOrder::Grevlex => a.deg.cmp(&b.deg).then_with(|| {
                for i in (0..MAXV).rev() {
                    match a.e[i].cmp(&b.e[i]) {
                        Ordering::Equal => continue,
                        o => return o.reverse(),
                    }
                }
                Ordering::Equal
            }),
        }
    }
}

/// Terms sorted strictly descending in the ring's order, no zero
/// coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPoly<E> {
    pub terms: Vec<(Mono, E)>,
}

impl<E: fmt::Debug> fmt::Debug for MPoly<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c:?}*{m:?}")?;
        }
        Ok(())
    }
}

impl<E> MPoly<E> {
    pub fn zero() -> Self {
        MPoly { terms: vec![] }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lm(&self) -> &Mono {
        &self.terms[0].0
    }

    pub fn lc(&self) -> &E {
        &self.terms[0].1
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.terms.windows(2).all(|w| w[0].0.degree() == w[1].0.degree())
    }
}

/// Polynomial ring F[x_0, …, x_{n-1}] with a fixed monomial order.
#[derive(Clone, Debug)]
pub struct PolyRing<F: Field> {
    pub field: F,
    pub nvars: usize,
    pub order: MonoOrder,
}

impl<F: Field> PolyRing<F> {
    pub fn new(field: F, nvars: usize, order: MonoOrder) -> Self {
        assert!(nvars <= MAXV);
        PolyRing { field, nvars, order }
    }

    pub fn grevlex(field: F, nvars: usize) -> Self {
        Self::new(field, nvars, MonoOrder::Grevlex)
    }

    pub fn zero(&self) -> MPoly<F::Elem> {
        MPoly::zero()
    }

    pub fn constant(&self, c: F::Elem) -> MPoly<F::Elem> {
        self.monomial(Mono::one(), c)
    }

    pub fn one(&self) -> MPoly<F::Elem> {
        self.constant(self.field.one())
    }

    pub fn int(&self, n: i64) -> MPoly<F::Elem> {
        self.constant(self.field.from_i64(n))
    }

    pub fn monomial(&self, m: Mono, c: F::Elem) -> MPoly<F::Elem> {
        if self.field.is_zero(&c) {
            MPoly::zero()
        } else {
            MPoly { terms: vec![(m, c)] }
        }
    }

    pub fn var(&self, i: usize) -> MPoly<F::Elem> {
        assert!(i < self.nvars);
        self.monomial(Mono::var(i, 1), self.field.one())
    }

    pub fn vars(&self) -> Vec<MPoly<F::Elem>> {
        (0..self.nvars).map(|i| self.var(i)).collect()
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates.
    pub fn from_terms(&self, mut terms: Vec<(Mono, F::Elem)>) -> MPoly<F::Elem> {
        terms.sort_by(|a, b| self.order.cmp(&b.0, &a.0));
        let mut out: Vec<(Mono, F::Elem)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc = self.field.add(lc, &c),
                _ => {
                    if let Some((_, lc)) = out.last() {
                        if self.field.is_zero(lc) {
                            out.pop();
                        }
                    }
                    out.push((m, c));
                }
            }
        }
        out.retain(|(_, c)| !self.field.is_zero(c));
        MPoly { terms: out }
    }

    /// `a + s·m·b` by merging.
    pub fn add_scaled(&self, a: &MPoly<F::Elem>, s: &F::Elem, m: &Mono, b: &MPoly<F::Elem>) -> MPoly<F::Elem> {
        let f = &self.field;
        let mut out = Vec::with_capacity(a.terms.len() + b.terms.len());
        let mut i = 0;
        let mut bi = b.terms.iter().map(|(bm, bc)| (bm.mul(m), f.mul(bc, s))).peekable();
        while i < a.terms.len() || bi.peek().is_some() {
            match (a.terms.get(i), bi.peek()) {
                (Some(x), Some(y)) => match self.order.cmp(&x.0, &y.0) {
                    Ordering::Greater => {
                        out.push(x.clone());
                        i += 1;
                    }
                    Ordering::Less => out.push(bi.next().unwrap()),
                    Ordering::Equal => {
                        let c = f.add(&x.1, &y.1);
                        if !f.is_zero(&c) {
                            out.push((x.0, c));
                        }
                        i += 1;
                        bi.next();
                    }
                },
                (Some(x), None) => {
                    out.push(x.clone());
                    i += 1;
                }
                (None, Some(_)) => out.push(bi.next().unwrap()),
                (None, None) => unreachable!(),
            }
        }
        MPoly { terms: out }
    }

    pub fn add(&self, a: &MPoly<F::Elem>, b: &MPoly<F::Elem>) -> MPoly<F::Elem> {
        self.add_scaled(a, &self.field.one(), &Mono::one(), b)
    }

    pub fn sub(&self, a: &MPoly<F::Elem>, b: &MPoly<F::Elem>) -> MPoly<F::Elem> {
        self.add_scaled(a, &self.field.neg(&self.field.one()), &Mono::one(), b)
    }

    pub fn neg(&self, a: &MPoly<F::Elem>) -> MPoly<F::Elem> {
        MPoly { terms: a.terms.iter().map(|(m, c)| (*m, self.field.neg(c))).collect() }
    }

    pub fn scale(&self, a: &MPoly<F::Elem>, s: &F::Elem) -> MPoly<F::Elem> {
        if self.field.is_zero(s) {
            return MPoly::zero();
        }
        MPoly { terms: a.terms.iter().map(|(m, c)| (*m, self.field.mul(c, s))).collect() }
    }

    pub fn mul_term(&self, a: &MPoly<F::Elem>, m: &Mono, s: &F::Elem) -> MPoly<F::Elem> {
        if self.field.is_zero(s) {
            return MPoly::zero();
        }
        MPoly { terms: a.terms.iter().map(|(am, c)| (am.mul(m), self.field.mul(c, s))).collect() }
    }

    pub fn mul(&self, a: &MPoly<F::Elem>, b: &MPoly<F::Elem>) -> MPoly<F::Elem> {
        if a.is_zero() || b.is_zero() {
            return MPoly::zero();
        }
        let mut terms = Vec::with_capacity(a.len() * b.len());
        for (am, ac) in &a.terms {
            for (bm, bc) in &b.terms {
                terms.push((am.mul(bm), self.field.mul(ac, bc)));
            }
        }
        self.from_terms(terms)
    }

    pub fn pow(&self, a: &MPoly<F::Elem>, e: u32) -> MPoly<F::Elem> {
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    pub fn sum(&self, items: &[MPoly<F::Elem>]) -> MPoly<F::Elem> {
        items.iter().fold(self.zero(), |acc, p| self.add(&acc, p))
    }

    pub fn monic(&self, a: &MPoly<F::Elem>) -> MPoly<F::Elem> {
        if a.is_zero() {
            return a.clone();
        }
        let inv = self.field.inv(a.lc()).expect("nonzero leading coefficient");
        self.scale(a, &inv)
    }

    /// Substitutes `subs[i]` (a polynomial in `target`) for variable `i`.
    pub fn substitute<G: Field<Elem = F::Elem>>(
        &self,
        a: &MPoly<F::Elem>,
        target: &PolyRing<G>,
        subs: &[MPoly<F::Elem>],
    ) -> MPoly<F::Elem> {
        assert_eq!(subs.len(), self.nvars);
        let mut powers: Vec<Vec<MPoly<F::Elem>>> = vec![vec![target.one()]; self.nvars];
        let mut acc = target.zero();
        for (m, c) in &a.terms {
            let mut t = target.constant(c.clone());
            for i in 0..self.nvars {
                let k = m.exp(i) as usize;
                while powers[i].len() <= k {
                    let next = target.mul(powers[i].last().unwrap(), &subs[i]);
                    powers[i].push(next);
                }
                if k > 0 {
                    t = target.mul(&t, &powers[i][k]);
                }
            }
            acc = target.add(&acc, &t);
        }
        acc
    }

    /// Evaluates at a point.
    pub fn eval(&self, a: &MPoly<F::Elem>, pt: &[F::Elem]) -> F::Elem {
        let f = &self.field;
        let mut acc = f.zero();
        for (m, c) in &a.terms {
            let mut t = c.clone();
            for (i, x) in pt.iter().enumerate().take(self.nvars) {
                let k = m.exp(i);
                if k > 0 {
                    t = f.mul(&t, &f.pow(x, k as u64));
                }
            }
            acc = f.add(&acc, &t);
        }
        acc
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, a: &MPoly<F::Elem>, i: usize) -> MPoly<F::Elem> {
        let terms = a
            .terms
            .iter()
            .filter(|(m, _)| m.exp(i) > 0)
            .map(|(m, c)| {
                let k = m.exp(i);
                let mut e = m.exps(MAXV);
                e[i] -= 1;
                (Mono::from_exps(&e), self.field.mul(c, &self.field.from_i64(k as i64)))
            })
            .collect();
        self.from_terms(terms)
    }

    /// Re-sorts a polynomial produced under another order.
    pub fn reorder(&self, a: &MPoly<F::Elem>) -> MPoly<F::Elem> {
        self.from_terms(a.terms.clone())
    }

    /// Maps coefficients into another ring with the same variables.
    pub fn map_into<G: Field, Err>(
        &self,
        a: &MPoly<F::Elem>,
        target: &PolyRing<G>,
        mut f: impl FnMut(&F::Elem) -> Result<G::Elem, Err>,
    ) -> Result<MPoly<G::Elem>, Err> {
        let mut terms = Vec::with_capacity(a.len());
        for (m, c) in &a.terms {
            terms.push((*m, f(c)?));
        }
        Ok(target.from_terms(terms))
    }

    /// Division of `a` by a single polynomial: `(quotient, remainder)`.
    pub fn divrem(&self, a: &MPoly<F::Elem>, d: &MPoly<F::Elem>) -> (MPoly<F::Elem>, MPoly<F::Elem>) {
        let f = &self.field;
        let li = f.inv(d.lc()).expect("nonzero divisor");
        let mut q = vec![];
        let mut r = vec![];
        let mut p = a.clone();
        while !p.is_zero() {
            let (m, c) = p.terms[0].clone();
            if d.lm().divides(&m) {
                let qm = d.lm().div_into(&m);
                let qc = f.mul(&c, &li);
                p = self.add_scaled(&p, &f.neg(&qc), &qm, d);
                q.push((qm, qc));
            } else {
                r.push(p.terms.remove(0));
            }
        }
        (self.from_terms(q), self.from_terms(r))
    }

    /// Sets variable `i` to the constant `c`.
    pub fn specialize(&self, a: &MPoly<F::Elem>, i: usize, c: &F::Elem) -> MPoly<F::Elem> {
        let f = &self.field;
        let terms = a
            .terms
            .iter()
            .map(|(m, coef)| {
                let k = m.exp(i);
                let mut e = m.exps(MAXV);
                e[i] = 0;
                (Mono::from_exps(&e), f.mul(coef, &f.pow(c, k as u64)))
            })
            .collect();
        self.from_terms(terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, RationalField};

    #[test]
    fn grevlex_order() {
        let o = MonoOrder::Grevlex;
        // x^2 > xy > y^2 > xz > yz > z^2
        let ms = [[2, 0, 0], [1, 1, 0], [0, 2, 0], [1, 0, 1], [0, 1, 1], [0, 0, 2]];
        for w in ms.windows(2) {
            assert_eq!(o.cmp(&Mono::from_exps(&w[0]), &Mono::from_exps(&w[1])), Ordering::Greater);
        }
    }

    #[test]
    fn arithmetic() {
        let r = PolyRing::grevlex(RationalField, 2);
        let x = r.var(0);
        let y = r.var(1);
        let s = r.add(&x, &y);
        let d = r.sub(&x, &y);
        let p = r.mul(&s, &d);
        let expect = r.sub(&r.mul(&x, &x), &r.mul(&y, &y));
        assert_eq!(p, expect);
        let (q, rem) = r.divrem(&p, &s);
        assert_eq!(q, d);
        assert!(rem.is_zero());
        assert_eq!(r.eval(&p, &[rat(3, 1), rat(1, 1)]), rat(8, 1));
    }
}

//! The degree-96 field L = ℚ(t)(ζ₁₂, β₀, β₁, β₂, c₀).
//!
//! Relations: ζ₁₂⁴ = ζ₁₂² − 1, βᵢ² = t + 3ζ₃^i with ζ₃ = ζ₁₂⁴, and
//! c₀³ = −t c₀² − 4.  Elements are stored over the basis of monomials
//! ζ₁₂^a β₀^b β₁^c β₂^d c₀^e (a < 4, b, c, d < 2, e < 3), basis index
//! `a + 4(b + 2(c + 2(d + 2e)))`, as polynomial numerators over one monic
//! common denominator.

use std::fmt;
use std::sync::OnceLock;

use num_traits::{One, Zero};

use super::rat::{QPoly, Rat, RatFunc};
use super::Field;
use crate::error::{Error, Result};

pub const SYM_DIM: usize = 96;

/// Generators of L over ℚ(t).  `Delta` is the abbreviation 4ζ₄β₀β₁β₂.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gen {
    Zeta12,
    Beta(u8),
    C0,
    Delta,
}

pub fn basis_index(a: usize, b0: usize, b1: usize, b2: usize, e: usize) -> usize {
    a + 4 * (b0 + 2 * (b1 + 2 * (b2 + 2 * e)))
}

/// Exponents `(a, b0, b1, b2, e)` of basis monomial `i`.
pub fn basis_exponents(i: usize) -> [usize; 5] {
    [i % 4, (i / 4) % 2, (i / 8) % 2, (i / 16) % 2, i / 32]
}

type ProductTable = Vec<Vec<Vec<(usize, QPoly)>>>;

fn product_table() -> &'static ProductTable {
    static TABLE: OnceLock<ProductTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let t = QPoly::t();
        // c₀^k for k ≤ 4 in the basis 1, c₀, c₀².
        let cpow: [[QPoly; 3]; 5] = [
            [QPoly::one(), QPoly::zero(), QPoly::zero()],
            [QPoly::zero(), QPoly::one(), QPoly::zero()],
            [QPoly::zero(), QPoly::zero(), QPoly::one()],
            [QPoly::from_i64s(&[-4]), QPoly::zero(), t.neg()],
            [QPoly::from_i64s(&[0, 4]), QPoly::from_i64s(&[-4]), t.mul(&t)],
        ];
        let mut tab = vec![vec![vec![]; SYM_DIM]; SYM_DIM];
        for i in 0..SYM_DIM {
            for j in 0..SYM_DIM {
                let ei = basis_exponents(i);
                let ej = basis_exponents(j);
                // ζ part as a dense polynomial in ζ₁₂.
                let mut z = vec![QPoly::zero(); ei[0] + ej[0] + 1];
                z[ei[0] + ej[0]] = QPoly::one();
                let mut bits = [0usize; 3];
                for k in 0..3 {
                    let s = ei[1 + k] + ej[1 + k];
                    bits[k] = s % 2;
                    if s == 2 {
                        // multiply by t + 3ζ₁₂^{4k}
                        let mut nz = vec![QPoly::zero(); z.len() + 4 * k];
                        for (d, c) in z.iter().enumerate() {
                            nz[d] = nz[d].add(&c.mul(&t));
                            nz[d + 4 * k] = nz[d + 4 * k].add(&c.scale(&Rat::from_integer(3.into())));
                        }
                        z = nz;
                    }
                }
                // reduce ζ^n = ζ^{n-2} − ζ^{n-4}
                for n in (4..z.len()).rev() {
                    let c = std::mem::take(&mut z[n]);
                    if !c.is_zero() {
                        z[n - 2] = z[n - 2].add(&c);
                        z[n - 4] = z[n - 4].sub(&c);
                    }
                }
                z.resize(4, QPoly::zero());
                let cp = &cpow[ei[4] + ej[4]];
                let mut out = vec![];
                for (a, za) in z.iter().enumerate().take(4) {
                    if za.is_zero() {
                        continue;
                    }
                    for (e, ce) in cp.iter().enumerate() {
                        if ce.is_zero() {
                            continue;
                        }
                        out.push((basis_index(a, bits[0], bits[1], bits[2], e), za.mul(ce)));
                    }
                }
                tab[i][j] = out;
            }
        }
        tab
    })
}

/// Element of L in normal form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SymElem {
    num: Vec<QPoly>,
    den: QPoly,
}

impl SymElem {
    pub fn zero() -> Self {
        SymElem { num: vec![QPoly::zero(); SYM_DIM], den: QPoly::one() }
    }

    pub fn one() -> Self {
        Self::from_ratfunc(&RatFunc::one())
    }

    pub fn t() -> Self {
        Self::from_ratfunc(&RatFunc::t())
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_rat(Rat::from_integer(n.into()))
    }

    pub fn from_rat(r: Rat) -> Self {
        Self::from_ratfunc(&RatFunc::from_rat(r))
    }

    pub fn from_ratfunc(r: &RatFunc) -> Self {
        let mut e = Self::zero();
        e.num[0] = r.num().clone();
        e.den = r.den().clone();
        e
    }

    /// Coefficient vector over ℚ(t); reduced to lowest terms.
    pub fn from_coeffs(coeffs: &[RatFunc]) -> Self {
        assert_eq!(coeffs.len(), SYM_DIM);
        let mut den = QPoly::one();
        for c in coeffs {
            if !c.is_zero() {
                let g = den.gcd(c.den());
                den = den.mul(&c.den().divrem(&g).0);
            }
        }
        let num = coeffs
            .iter()
            .map(|c| if c.is_zero() { QPoly::zero() } else { c.num().mul(&den.divrem(c.den()).0) })
            .collect();
        Self::reduce(num, den)
    }

    /// Basis monomial `i`.
    pub fn basis(i: usize) -> Self {
        let mut e = Self::zero();
        e.num[i] = QPoly::one();
        e
    }

    pub fn gen(g: Gen) -> Self {
        match g {
            Gen::Zeta12 => Self::basis(1),
            Gen::Beta(k) => Self::basis(basis_index(0, (k == 0) as usize, (k == 1) as usize, (k == 2) as usize, 0)),
            Gen::C0 => Self::basis(32),
            Gen::Delta => Self::delta(),
        }
    }

    /// ζ_n^k as a power of ζ₁₂; `n` must divide 12.
    pub fn zeta(n: u32, k: i64) -> Self {
        assert!(12 % n == 0, "ζ_{n} is not in L");
        let e = (k * (12 / n) as i64).rem_euclid(12) as u64;
        Self::pow(&Self::gen(Gen::Zeta12), e)
    }

    pub fn beta(k: u8) -> Self {
        Self::gen(Gen::Beta(k))
    }

    pub fn c0() -> Self {
        Self::gen(Gen::C0)
    }

    /// δ = 4ζ₄β₀β₁β₂.
    pub fn delta() -> Self {
        Self::zeta(4, 1).mul(&Self::beta(0)).mul(&Self::beta(1)).mul(&Self::beta(2)).scale_i64(4)
    }

    /// ε = δ / (c₀(3c₀ + 2t)).
    pub fn epsilon() -> Self {
        static E: OnceLock<SymElem> = OnceLock::new();
        E.get_or_init(|| {
            let c0 = Self::c0();
            let d = c0.mul(&c0.scale_i64(3).add(&Self::t().scale_i64(2)));
            Self::delta().mul(&d.invert().expect("c0(3c0+2t) is nonzero"))
        })
        .clone()
    }

    /// c₁ = (−t − c₀ + ε)/2.
    pub fn c1() -> Self {
        Self::t().neg().sub(&Self::c0()).add(&Self::epsilon()).scale(&Rat::new(1.into(), 2.into()))
    }

    /// c₂ = (−t − c₀ − ε)/2.
    pub fn c2() -> Self {
        Self::t().neg().sub(&Self::c0()).sub(&Self::epsilon()).scale(&Rat::new(1.into(), 2.into()))
    }

    /// `c_k` for k = 0, 1, 2.
    pub fn c(k: usize) -> Self {
        match k {
            0 => Self::c0(),
            1 => Self::c1(),
            2 => Self::c2(),
            _ => panic!("c_{k} is not defined"),
        }
    }

    pub fn den(&self) -> &QPoly {
        &self.den
    }

    pub fn numerators(&self) -> &[QPoly] {
        &self.num
    }

    pub fn coeff(&self, i: usize) -> RatFunc {
        if self.num[i].is_zero() {
            RatFunc::zero()
        } else {
            RatFunc::new(self.num[i].clone(), self.den.clone())
        }
    }

    pub fn coeffs(&self) -> Vec<RatFunc> {
        (0..SYM_DIM).map(|i| self.coeff(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num[0].is_one() && self.num[1..].iter().all(|c| c.is_zero())
    }

    /// The value as an element of ℚ(t), if it lies there.
    pub fn as_ratfunc(&self) -> Option<RatFunc> {
        self.num[1..].iter().all(|c| c.is_zero()).then(|| self.coeff(0))
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        (0..SYM_DIM).filter(|&i| !self.num[i].is_zero())
    }

    fn reduce(num: Vec<QPoly>, den: QPoly) -> Self {
        if num.iter().all(|c| c.is_zero()) {
            return Self::zero();
        }
        let mut den = den;
        let mut num = num;
        if den.degree() != Some(0) {
            let mut g = den.clone();
            for c in &num {
                if g.degree() == Some(0) {
                    break;
                }
                if !c.is_zero() {
                    g = g.gcd(c);
                }
            }
            if g.degree().unwrap_or(0) > 0 {
                den = den.divrem(&g).0;
                for c in &mut num {
                    if !c.is_zero() {
                        *c = c.divrem(&g).0;
                    }
                }
            }
        }
        let lc = den.lc();
        if !lc.is_one() {
            let s = lc.recip();
            den = den.scale(&s);
            for c in &mut num {
                *c = c.scale(&s);
            }
        }
        SymElem { num, den }
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            let num = self.num.iter().zip(&o.num).map(|(a, b)| a.add(b)).collect();
            return Self::reduce(num, self.den.clone());
        }
        let g = self.den.gcd(&o.den);
        let fa = o.den.divrem(&g).0;
        let fb = self.den.divrem(&g).0;
        let num = self.num.iter().zip(&o.num).map(|(a, b)| a.mul(&fa).add(&b.mul(&fb))).collect();
        Self::reduce(num, self.den.mul(&fa))
    }

    pub fn neg(&self) -> Self {
        SymElem { num: self.num.iter().map(|c| c.neg()).collect(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &Rat) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        SymElem { num: self.num.iter().map(|c| c.scale(s)).collect(), den: self.den.clone() }
    }

    pub fn scale_i64(&self, s: i64) -> Self {
        self.scale(&Rat::from_integer(s.into()))
    }

    pub fn scale_ratfunc(&self, r: &RatFunc) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        let num = self.num.iter().map(|c| c.mul(r.num())).collect();
        Self::reduce(num, self.den.mul(r.den()))
    }

    pub fn mul(&self, o: &Self) -> Self {
        let tab = product_table();
        let mut out = vec![QPoly::zero(); SYM_DIM];
        let sa: Vec<usize> = self.support().collect();
        let sb: Vec<usize> = o.support().collect();
        for &i in &sa {
            for &j in &sb {
                let p = self.num[i].mul(&o.num[j]);
                for (k, c) in &tab[i][j] {
                    out[*k] = out[*k].add(&p.mul(c));
                }
            }
        }
        Self::reduce(out, self.den.mul(&o.den))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Highest tower level present: 0 for ℚ(t), 1 adds ζ₁₂, 2..=4 add
    /// β₀..β₂, 5 adds c₀.
    fn level(&self) -> usize {
        match self.support().max() {
            None | Some(0) => 0,
            Some(i) if i < 4 => 1,
            Some(i) if i < 8 => 2,
            Some(i) if i < 16 => 3,
            Some(i) if i < 32 => 4,
            _ => 5,
        }
    }

    /// Splits along generator `level` into the coefficient blocks of its
    /// powers; block `k` is shifted to the bottom of the basis.
    fn split(&self, level: usize) -> Vec<Self> {
        let (stride, parts) = match level {
            2 => (4, 2),
            3 => (8, 2),
            4 => (16, 2),
            5 => (32, 3),
            _ => unreachable!(),
        };
        (0..parts)
            .map(|k| {
                let mut num = vec![QPoly::zero(); SYM_DIM];
                for i in 0..stride {
                    num[i] = self.num[k * stride + i].clone();
                }
                Self::reduce(num, self.den.clone())
            })
            .collect()
    }

    /// Multiplicative inverse by descending the tower: quadratic levels use
    /// the conjugate, the cubic level uses the adjugate of multiplication by
    /// the element, and ℚ(t)(ζ₁₂) uses a 4×4 solve.
    pub fn invert(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NotInvertible("zero element of L".into()));
        }
        let inv = self.invert_level(self.level())?;
        if !self.mul(&inv).is_one() {
            return Err(Error::NotInvertible("inverse check failed".into()));
        }
        Ok(inv)
    }

    fn invert_level(&self, level: usize) -> Result<Self> {
        match level {
            0 => {
                let r = self.coeff(0).inv().ok_or_else(|| Error::NotInvertible("zero".into()))?;
                Ok(Self::from_ratfunc(&r))
            }
            1 => {
                // columns: self·ζ^j in the basis 1, ζ, ζ², ζ³
                let f = super::rat::RatFuncField;
                let z = Self::gen(Gen::Zeta12);
                let mut cols = vec![];
                let mut cur = self.clone();
                for _ in 0..4 {
                    cols.push((0..4).map(|i| cur.coeff(i)).collect::<Vec<_>>());
                    cur = cur.mul(&z);
                }
                let m: Vec<Vec<RatFunc>> = (0..4).map(|i| (0..4).map(|j| cols[j][i].clone()).collect()).collect();
                let mut rhs = vec![RatFunc::zero(); 4];
                rhs[0] = RatFunc::one();
                let x = super::solve_linear(&f, &m, &rhs).ok_or_else(|| Error::NotInvertible("singular ζ-block".into()))?;
                let mut coeffs = vec![RatFunc::zero(); SYM_DIM];
                coeffs[..4].clone_from_slice(&x);
                Ok(Self::from_coeffs(&coeffs))
            }
            2..=4 => {
                let parts = self.split(level);
                let g = Self::beta((level - 2) as u8);
                if parts[1].is_zero() {
                    return parts[0].invert_level(parts[0].level());
                }
                let conj = parts[0].sub(&parts[1].mul(&g));
                let norm = self.mul(&conj);
                let ni = norm.invert_level(norm.level().min(level - 1))?;
                Ok(conj.mul(&ni))
            }
            5 => {
                let c = Self::c0();
                let mut cols = vec![];
                let mut cur = self.clone();
                for _ in 0..3 {
                    cols.push(cur.split(5));
                    cur = cur.mul(&c);
                }
                // m[i][j] = coefficient of c^i in self·c^j
                let m = |i: usize, j: usize| &cols[j][i];
                let det2 = |a: &Self, b: &Self, c: &Self, d: &Self| a.mul(d).sub(&b.mul(c));
                let a0 = det2(m(1, 1), m(1, 2), m(2, 1), m(2, 2));
                let a1 = det2(m(1, 0), m(1, 2), m(2, 0), m(2, 2)).neg();
                let a2 = det2(m(1, 0), m(1, 1), m(2, 0), m(2, 1));
                // first column of the adjugate: cofactors of row 0
                let det = m(0, 0).mul(&a0).add(&m(0, 1).mul(&a1)).add(&m(0, 2).mul(&a2));
                let di = det.invert_level(det.level().min(4))?;
                Ok(a0.add(&a1.mul(&c)).add(&a2.mul(&c.mul(&c))).mul(&di))
            }
            _ => unreachable!(),
        }
    }

    /// Inverse by solving the full 96×96 system over ℚ(t); slow, used as an
    /// independent check of [`SymElem::invert`].
    pub fn invert_dense(&self) -> Result<Self> {
        let f = super::rat::RatFuncField;
        let cols: Vec<Vec<RatFunc>> = (0..SYM_DIM).map(|j| self.mul(&Self::basis(j)).coeffs()).collect();
        let m: Vec<Vec<RatFunc>> = (0..SYM_DIM).map(|i| (0..SYM_DIM).map(|j| cols[j][i].clone()).collect()).collect();
        let mut rhs = vec![RatFunc::zero(); SYM_DIM];
        rhs[0] = RatFunc::one();
        let x = super::solve_linear(&f, &m, &rhs).ok_or_else(|| Error::NotInvertible("singular multiplication map".into()))?;
        Ok(Self::from_coeffs(&x))
    }

    /// Image under the field automorphism sending ζ₁₂, β₀, β₁, β₂, c₀ to
    /// the given elements, which must satisfy the defining relations.
    pub fn apply_automorphism(&self, images: &GenImages) -> Self {
        let mut acc = vec![QPoly::zero(); SYM_DIM];
        let mut den = QPoly::one();
        let mut parts: Vec<(usize, SymElem)> = vec![];
        for i in self.support() {
            parts.push((i, images.monomial(i).clone()));
        }
        // common denominator of all monomial images
        for (_, m) in &parts {
            let g = den.gcd(&m.den);
            den = den.mul(&m.den.divrem(&g).0);
        }
        for (i, m) in &parts {
            let f = den.divrem(&m.den).0.mul(&self.num[*i]);
            for k in m.support() {
                acc[k] = acc[k].add(&m.num[k].mul(&f));
            }
        }
        Self::reduce(acc, den.mul(&self.den))
    }

    /// Substitutes a value for `t`; `None` when a denominator vanishes.
    pub fn specialize_t(&self, t0: &Rat) -> Option<Vec<Rat>> {
        let d = self.den.eval(t0);
        if d.is_zero() {
            return None;
        }
        Some(self.num.iter().map(|c| c.eval(t0) / &d).collect())
    }
}

/// Images of the generators under an automorphism, with the images of all
/// 96 basis monomials cached.
#[derive(Clone, Debug)]
pub struct GenImages {
    pub zeta12: SymElem,
    pub beta: [SymElem; 3],
    pub c0: SymElem,
    monomials: Vec<SymElem>,
}

impl GenImages {
    pub fn new(zeta12: SymElem, beta: [SymElem; 3], c0: SymElem) -> Self {
        let zp: Vec<SymElem> = (0..4).map(|a| zeta12.pow(a)).collect();
        let cp: Vec<SymElem> = (0..3).map(|e| c0.pow(e)).collect();
        let mut monomials = Vec::with_capacity(SYM_DIM);
        for i in 0..SYM_DIM {
            let [a, b0, b1, b2, e] = basis_exponents(i);
            let mut m = zp[a].clone();
            for (k, &b) in [b0, b1, b2].iter().enumerate() {
                if b == 1 {
                    m = m.mul(&beta[k]);
                }
            }
            monomials.push(m.mul(&cp[e]));
        }
        GenImages { zeta12, beta, c0, monomials }
    }

    pub fn identity() -> Self {
        Self::new(SymElem::gen(Gen::Zeta12), [SymElem::beta(0), SymElem::beta(1), SymElem::beta(2)], SymElem::c0())
    }

    pub fn monomial(&self, i: usize) -> &SymElem {
        &self.monomials[i]
    }

    /// Checks that the images satisfy the defining relations of L.
    pub fn respects_relations(&self) -> bool {
        let z = &self.zeta12;
        let z2 = z.mul(z);
        let t = SymElem::t();
        let ok_z = z2.mul(&z2).sub(&z2).add(&SymElem::one()).is_zero();
        let z3 = z2.mul(&z2);
        let ok_b = (0..3).all(|k| {
            let rhs = t.add(&z3.pow(k as u64).scale_i64(3));
            self.beta[k].mul(&self.beta[k]).sub(&rhs).is_zero()
        });
        let c = &self.c0;
        let c2 = c.mul(c);
        let ok_c = c2.mul(c).add(&c2.mul(&t)).add(&SymElem::from_i64(4)).is_zero();
        ok_z && ok_b && ok_c
    }

    /// Composition: `(self ∘ other)(x) = self(other(x))`.
    pub fn compose(&self, other: &GenImages) -> Self {
        Self::new(
            other.zeta12.apply_automorphism(self),
            [
                other.beta[0].apply_automorphism(self),
                other.beta[1].apply_automorphism(self),
                other.beta[2].apply_automorphism(self),
            ],
            other.c0.apply_automorphism(self),
        )
    }
}

impl PartialEq for GenImages {
    fn eq(&self, o: &Self) -> bool {
        self.zeta12 == o.zeta12 && self.beta == o.beta && self.c0 == o.c0
    }
}
impl Eq for GenImages {}

impl std::hash::Hash for GenImages {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.zeta12.hash(h);
        self.beta.hash(h);
        self.c0.hash(h);
    }
}

fn monomial_name(i: usize) -> String {
    let [a, b0, b1, b2, e] = basis_exponents(i);
    let mut parts = vec![];
    match a {
        0 => {}
        1 => parts.push("z12".to_string()),
        _ => parts.push(format!("z12^{a}")),
    }
    for (k, b) in [b0, b1, b2].iter().enumerate() {
        if *b == 1 {
            parts.push(format!("b{k}"));
        }
    }
    match e {
        0 => {}
        1 => parts.push("c0".to_string()),
        _ => parts.push(format!("c0^{e}")),
    }
    parts.join("*")
}

impl fmt::Display for SymElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .support()
            .map(|i| {
                let m = monomial_name(i);
                let c = &self.num[i];
                match (m.is_empty(), c.is_one()) {
                    (true, _) => format!("({c})"),
                    (false, true) => m,
                    (false, false) => format!("({c})*{m}"),
                }
            })
            .collect();
        if self.den.is_one() {
            write!(f, "{}", terms.join(" + "))
        } else {
            write!(f, "[{}]/({})", terms.join(" + "), self.den)
        }
    }
}

impl Default for SymElem {
    fn default() -> Self {
        Self::zero()
    }
}

impl fmt::Debug for SymElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Expression trees over the generators, reduced by [`SymExpr::normalize`].
#[derive(Clone, Debug)]
pub enum SymExpr {
    Gen(Gen),
    Scalar(RatFunc),
    Add(Box<SymExpr>, Box<SymExpr>),
    Sub(Box<SymExpr>, Box<SymExpr>),
    Mul(Box<SymExpr>, Box<SymExpr>),
    Neg(Box<SymExpr>),
    Pow(Box<SymExpr>, u32),
    Div(Box<SymExpr>, Box<SymExpr>),
}

impl SymExpr {
    pub fn gen(g: Gen) -> Self {
        SymExpr::Gen(g)
    }

    pub fn t() -> Self {
        SymExpr::Scalar(RatFunc::t())
    }

    pub fn int(n: i64) -> Self {
        SymExpr::Scalar(RatFunc::from_rat(Rat::from_integer(n.into())))
    }

    pub fn pow(self, e: u32) -> Self {
        SymExpr::Pow(Box::new(self), e)
    }

    /// Rewrites to the unique normal form.  Division is rejected; use
    /// [`SymElem::invert`] explicitly.
    pub fn normalize(&self) -> Result<SymElem> {
        Ok(match self {
            SymExpr::Gen(g) => SymElem::gen(*g),
            SymExpr::Scalar(r) => SymElem::from_ratfunc(r),
            SymExpr::Add(a, b) => a.normalize()?.add(&b.normalize()?),
            SymExpr::Sub(a, b) => a.normalize()?.sub(&b.normalize()?),
            SymExpr::Mul(a, b) => a.normalize()?.mul(&b.normalize()?),
            SymExpr::Neg(a) => a.normalize()?.neg(),
            SymExpr::Pow(a, e) => a.normalize()?.pow(*e as u64),
            SymExpr::Div(_, _) => return Err(Error::DivisionRequested),
        })
    }
}

macro_rules! expr_binop {
    ($tr:ident, $m:ident, $v:ident) => {
        impl std::ops::$tr for SymExpr {
            type Output = SymExpr;
            fn $m(self, o: SymExpr) -> SymExpr {
                SymExpr::$v(Box::new(self), Box::new(o))
            }
        }
    };
}
expr_binop!(Add, add, Add);
expr_binop!(Sub, sub, Sub);
expr_binop!(Mul, mul, Mul);
expr_binop!(Div, div, Div);

impl std::ops::Neg for SymExpr {
    type Output = SymExpr;
    fn neg(self) -> SymExpr {
        SymExpr::Neg(Box::new(self))
    }
}

/// L as a [`Field`] context.
#[derive(Clone, Debug, Default)]
pub struct SymField;

impl Field for SymField {
    type Elem = SymElem;
    fn zero(&self) -> SymElem {
        SymElem::zero()
    }
    fn one(&self) -> SymElem {
        SymElem::one()
    }
    fn is_zero(&self, a: &SymElem) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &SymElem, b: &SymElem) -> SymElem {
        a.add(b)
    }
    fn sub(&self, a: &SymElem, b: &SymElem) -> SymElem {
        a.sub(b)
    }
    fn neg(&self, a: &SymElem) -> SymElem {
        a.neg()
    }
    fn mul(&self, a: &SymElem, b: &SymElem) -> SymElem {
        a.mul(b)
    }
    fn inv(&self, a: &SymElem) -> Option<SymElem> {
        a.invert().ok()
    }
    fn from_i64(&self, n: i64) -> SymElem {
        SymElem::from_i64(n)
    }
    fn is_one(&self, a: &SymElem) -> bool {
        a.is_one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relations() {
        let z = SymElem::gen(Gen::Zeta12);
        assert!(z.pow(12).is_one());
        assert!(!z.pow(6).is_one());
        assert!(!z.pow(4).is_one());
        let b0 = SymElem::beta(0);
        assert_eq!(b0.mul(&b0), SymElem::t().add(&SymElem::from_i64(3)));
        let d = SymElem::delta();
        let t = SymElem::t();
        let rhs = t.pow(3).add(&SymElem::from_i64(27)).scale_i64(-16);
        assert_eq!(d.mul(&d), rhs);
        assert!(GenImages::identity().respects_relations());
    }

    #[test]
    fn small_inverses() {
        let z = SymElem::gen(Gen::Zeta12);
        let zi = z.invert().unwrap();
        assert_eq!(zi, z.sub(&z.pow(3)));
        let c0 = SymElem::c0();
        let expect = c0.mul(&c0).add(&c0.mul(&SymElem::t())).scale(&Rat::new((-1).into(), 4.into()));
        assert_eq!(c0.invert().unwrap(), expect);
    }

    #[test]
    fn cubic_roots() {
        // c0, c1, c2 all satisfy h and sum to -t
        let t = SymElem::t();
        for k in 0..3 {
            let c = SymElem::c(k);
            let h = c.pow(3).add(&t.mul(&c.pow(2))).add(&SymElem::from_i64(4));
            assert!(h.is_zero(), "h(c{k}) != 0");
        }
        let s = SymElem::c0().add(&SymElem::c1()).add(&SymElem::c2());
        assert_eq!(s, t.neg());
    }
}

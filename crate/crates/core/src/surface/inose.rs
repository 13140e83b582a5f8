//! Polynomial identities relating the family to an Inose fibration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{rat, QPoly, Rat, RatFunc, RationalField};
use crate::poly::{MPoly, PolyRing};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InoseReport {
    pub checks: Vec<(String, bool)>,
}

impl InoseReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|(_, ok)| *ok)
    }
}

type P = MPoly<Rat>;

struct Q {
    r: PolyRing<RationalField>,
}

impl Q {
    fn v(&self, i: usize) -> P {
        self.r.var(i)
    }
    fn c(&self, n: i64, d: i64) -> P {
        self.r.constant(rat(n, d))
    }
    fn pw(&self, a: &P, e: u32) -> P {
        self.r.pow(a, e)
    }
    fn mul(&self, xs: &[&P]) -> P {
        xs.iter().fold(self.r.one(), |acc, x| self.r.mul(&acc, x))
    }
    fn add(&self, xs: &[&P]) -> P {
        xs.iter().fold(self.r.zero(), |acc, x| self.r.add(&acc, x))
    }
}

// variable indices
const X: usize = 0;
const Y: usize = 1;
const Z: usize = 2;
const W: usize = 3;
const T: usize = 4;
const R: usize = 5;
const U: usize = 6;
const S: usize = 7;

/// (YZ)³ + (XZ)³ + (XY)³ + t(XYZ)².
fn cremona_target(q: &Q, x: &P, y: &P, z: &P) -> P {
    let t = q.v(T);
    let xyz = q.mul(&[x, y, z]);
    q.add(&[
        &q.pw(&q.mul(&[y, z]), 3),
        &q.pw(&q.mul(&[x, z]), 3),
        &q.pw(&q.mul(&[x, y]), 3),
        &q.mul(&[&t, &q.pw(&xyz, 2)]),
    ])
}

/// u³ + t s² u² + s⁵(1 + s)².
fn almost_inose_rhs(q: &Q, u: &P) -> P {
    let (t, s) = (q.v(T), q.v(S));
    let one_s = q.add(&[&q.r.one(), &s]);
    q.add(&[
        &q.pw(u, 3),
        &q.mul(&[&t, &q.pw(&s, 2), &q.pw(u, 2)]),
        &q.mul(&[&q.pw(&s, 5), &q.pw(&one_s, 2)]),
    ])
}

fn cremona_identity(q: &Q) -> bool {
    let (x, y, z, t) = (q.v(X), q.v(Y), q.v(Z), q.v(T));
    let (x2, y2, z2) = (q.pw(&x, 2), q.pw(&y, 2), q.pw(&z, 2));
    let lhs = cremona_target(q, &q.mul(&[&y2, &z2]), &q.mul(&[&x2, &z2]), &q.mul(&[&x2, &y2]));
    let f = q.add(&[&q.pw(&x, 6), &q.pw(&y, 6), &q.pw(&z, 6), &q.mul(&[&t, &x2, &y2, &z2])]);
    let rhs = q.mul(&[&q.pw(&q.mul(&[&x, &y, &z]), 6), &f]);
    lhs == rhs
}

/// Affine model after z = r y, y = 1.
fn chart_model(q: &Q) -> P {
    let (x, t, r) = (q.v(X), q.v(T), q.v(R));
    let r3p1 = q.add(&[&q.pw(&r, 3), &q.r.one()]);
    q.add(&[&q.mul(&[&r3p1, &q.pw(&x, 3)]), &q.mul(&[&q.pw(&r, 2), &t, &q.pw(&x, 2)]), &q.pw(&r, 3)])
}

fn chart_identity(q: &Q) -> bool {
    let (x, r) = (q.v(X), q.v(R));
    cremona_target(q, &x, &q.r.one(), &r) == chart_model(q)
}

/// The 3:1 map (x, w, r) ↦ (x r⁴(r³+1), w r⁶(r³+1), r³) pulls back
/// v² − (u³ + t s²u² + s⁵(1+s)²) to r¹²(r³+1)² (w² − model).
fn base_change_identity(q: &Q) -> bool {
    let (x, w, r) = (q.v(X), q.v(W), q.v(R));
    let r3p1 = q.add(&[&q.pw(&r, 3), &q.r.one()]);
    let u = q.mul(&[&x, &q.pw(&r, 4), &r3p1]);
    let v = q.mul(&[&w, &q.pw(&r, 6), &r3p1]);
    let s = q.pw(&r, 3);
    let mut subs = q.r.vars();
    subs[U] = u;
    subs[S] = s;
    let rhs = q.r.substitute(&almost_inose_rhs(q, &q.v(U)), &q.r, &subs);
    let lhs = q.r.sub(&q.pw(&v, 2), &rhs);
    let expected = q.mul(&[&q.pw(&r, 12), &q.pw(&r3p1, 2), &q.r.sub(&q.pw(&w, 2), &chart_model(q))]);
    lhs == expected
}

/// u ↦ u − s²t/3 removes the quadratic term, giving the Inose form
/// u³ − 3A s⁴ u + s⁵(s² − 2B s + 1) with A = t²/9, B = −(t³ + 27)/27.
fn shift_identity(q: &Q) -> (bool, bool) {
    let (u, s, t) = (q.v(U), q.v(S), q.v(T));
    let a = q.mul(&[&q.c(1, 3), &q.pw(&s, 2), &t]);
    let mut subs = q.r.vars();
    subs[U] = q.r.sub(&u, &a);
    let shifted = q.r.substitute(&almost_inose_rhs(q, &u), &q.r, &subs);
    let t3p27 = q.add(&[&q.pw(&t, 3), &q.c(27, 1)]);
    let stated = q.add(&[
        &q.pw(&u, 3),
        &q.mul(&[&q.c(-1, 3), &q.pw(&s, 4), &q.pw(&t, 2), &u]),
        &q.mul(&[
            &q.pw(&s, 5),
            &q.add(&[&q.pw(&s, 2), &q.mul(&[&q.c(2, 27), &s, &t3p27]), &q.r.one()]),
        ]),
    ]);
    let big_a = q.mul(&[&q.c(1, 9), &q.pw(&t, 2)]);
    let big_b = q.mul(&[&q.c(-1, 27), &t3p27]);
    let inose = q.add(&[
        &q.pw(&u, 3),
        &q.mul(&[&q.c(-3, 1), &big_a, &q.pw(&s, 4), &u]),
        &q.mul(&[&q.pw(&s, 5), &q.add(&[&q.pw(&s, 2), &q.mul(&[&q.c(-2, 1), &big_b, &s]), &q.r.one()])]),
    ]);
    (shifted == stated, stated == inose)
}

/// A³ = j²/12⁶ and B² = (1 − j/12³)² for j = −(4t)³.
fn j_invariant_identity() -> bool {
    let t = QPoly::t();
    let a = t.pow(2).scale(&rat(1, 9));
    let b = t.pow(3).add(&QPoly::constant(rat(27, 1))).scale(&rat(-1, 27));
    let j = t.pow(3).scale(&rat(-64, 1));
    let lhs1 = a.pow(3);
    let rhs1 = j.pow(2).scale(&rat(1, 12i64.pow(6)));
    let one_minus = QPoly::one().sub(&j.scale(&rat(1, 1728)));
    lhs1 == rhs1 && b.pow(2) == one_minus.pow(2)
}

/// j-invariant of y² + xy = x³ + 36/D x + 1/D with D = 1728 + (4t)³.
pub fn elliptic_curve_j() -> RatFunc {
    let t = RatFunc::t();
    let c = |n: i64| RatFunc::from_rat(rat(n, 1));
    let d = c(1728).add(&t.mul(&t).mul(&t).mul(&c(64)));
    let dinv = d.inv().expect("nonzero");
    let (a1, a4, a6) = (c(1), c(36).mul(&dinv), dinv.clone());
    let b2 = a1.mul(&a1);
    let b4 = a4.mul(&c(2));
    let b6 = a6.mul(&c(4));
    let b8 = a1.mul(&a1).mul(&a6).sub(&a4.mul(&a4));
    let c4 = b2.mul(&b2).sub(&b4.mul(&c(24)));
    let disc = b2
        .mul(&b2)
        .mul(&b8)
        .neg()
        .sub(&b4.mul(&b4).mul(&b4).mul(&c(8)))
        .sub(&b6.mul(&b6).mul(&c(27)))
        .add(&b2.mul(&b4).mul(&b6).mul(&c(9)));
    c4.mul(&c4).mul(&c4).mul(&disc.inv().expect("nonsingular curve"))
}

pub fn inose_report() -> InoseReport {
    let q = Q { r: PolyRing::grevlex(RationalField, 8) };
    let (shift, matches) = shift_identity(&q);
    let j = elliptic_curve_j();
    let j_expected = RatFunc::from_poly(QPoly::t().pow(3).scale(&rat(-64, 1)));
    InoseReport {
        checks: vec![
            ("cremona".into(), cremona_identity(&q)),
            ("chart".into(), chart_identity(&q)),
            ("base change".into(), base_change_identity(&q)),
            ("shift".into(), shift),
            ("inose form".into(), matches),
            ("j relations".into(), j_invariant_identity()),
            ("elliptic curve j".into(), j == j_expected),
        ],
    }
}

/// All identities hold, or the first failing one is reported.
pub fn verify_inose() -> Result<bool> {
    let rep = inose_report();
    match rep.checks.iter().find(|(_, ok)| !ok) {
        Some((name, _)) => Err(Error::IdentityFails(name.clone())),
        None => Ok(true),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identities_hold() {
        let rep = inose_report();
        for (name, ok) in &rep.checks {
            assert!(ok, "{name}");
        }
    }
}

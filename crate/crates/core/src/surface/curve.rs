use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{EmbedCtx, Field, Fq, Gen, Rat, SymElem, SymField, SYM_DIM};
use crate::poly::{MPoly, Mono, PolyRing};

/// The symbolic coordinate ring L[x, y, z].
pub fn xyz_ring() -> PolyRing<SymField> {
    PolyRing::grevlex(SymField, 3)
}

fn term<F: Field>(r: &PolyRing<F>, c: F::Elem, e: [u32; 3]) -> MPoly<F::Elem> {
    r.monomial(Mono::from_exps(&e), c)
}

/// x⁶ + y⁶ + z⁶ + t·x²y²z² with `t` given as a field element.
pub fn sextic<F: Field>(r: &PolyRing<F>, t: F::Elem) -> MPoly<F::Elem> {
    let one = r.field.one();
    r.sum(&[
        term(r, one.clone(), [6, 0, 0]),
        term(r, one.clone(), [0, 6, 0]),
        term(r, one, [0, 0, 6]),
        term(r, t, [2, 2, 2]),
    ])
}

/// A fiber of the family, or the generic member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyEquation {
    pub t0: Option<Rat>,
}

impl FamilyEquation {
    pub fn generic() -> Self {
        FamilyEquation { t0: None }
    }

    pub fn fiber(t0: Rat) -> Self {
        FamilyEquation { t0: Some(t0) }
    }

    /// Weights of (x, y, z, w).
    pub fn weights(&self) -> [u32; 4] {
        [1, 1, 1, 3]
    }

    /// The branch sextic over L (or over ℚ ⊂ L when specialized).
    pub fn branch_sextic(&self) -> MPoly<SymElem> {
        let t = match &self.t0 {
            None => SymElem::t(),
            Some(t0) => SymElem::from_rat(t0.clone()),
        };
        sextic(&xyz_ring(), t)
    }

    pub fn is_smooth(&self) -> bool {
        match &self.t0 {
            None => true,
            Some(t0) => t0 * t0 * t0 != Rat::from_integer((-27).into()),
        }
    }
}

impl fmt::Display for FamilyEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.t0 {
            None => write!(f, "w^2 = x^6 + y^6 + z^6 + t*x^2*y^2*z^2"),
            Some(t) if t.is_integer() && *t.numer() == 0.into() => write!(f, "w^2 = x^6 + y^6 + z^6"),
            Some(t) => write!(f, "w^2 = x^6 + y^6 + z^6 + {t}*x^2*y^2*z^2"),
        }
    }
}

/// Component {q = 0, w = g} of the pullback of a conic tangent to the
/// branch curve at every intersection point.
#[derive(Clone, Debug)]
pub struct DivisorCurve {
    pub q: MPoly<SymElem>,
    pub g: MPoly<SymElem>,
    pub label: String,
}

impl DivisorCurve {
    pub fn new(q: MPoly<SymElem>, g: MPoly<SymElem>, label: impl Into<String>) -> Self {
        DivisorCurve { q, g, label: label.into() }
    }

    /// f − g² ∈ (q) over L(t).
    pub fn is_bitangent(&self) -> bool {
        let r = xyz_ring();
        let f = FamilyEquation::generic().branch_sextic();
        let h = r.sub(&f, &r.mul(&self.g, &self.g));
        r.divrem(&h, &self.q).1.is_zero()
    }

    /// Symmetric 3×3 matrix of the conic.
    pub fn conic_matrix(&self) -> [[SymElem; 3]; 3] {
        let mut m: [[SymElem; 3]; 3] = Default::default();
        for row in m.iter_mut() {
            for e in row.iter_mut() {
                *e = SymElem::zero();
            }
        }
        let half = Rat::new(1.into(), 2.into());
        for (mono, c) in &self.q.terms {
            let idx: Vec<usize> = (0..3).flat_map(|i| std::iter::repeat(i).take(mono.exp(i) as usize)).collect();
            if idx[0] == idx[1] {
                m[idx[0]][idx[0]] = c.clone();
            } else {
                let h = c.scale(&half);
                m[idx[0]][idx[1]] = h.clone();
                m[idx[1]][idx[0]] = h;
            }
        }
        m
    }

    pub fn conic_is_smooth(&self) -> bool {
        let m = self.conic_matrix();
        let det2 = |a: &SymElem, b: &SymElem, c: &SymElem, d: &SymElem| a.mul(d).sub(&b.mul(c));
        let d = m[0][0]
            .mul(&det2(&m[1][1], &m[1][2], &m[2][1], &m[2][2]))
            .sub(&m[0][1].mul(&det2(&m[1][0], &m[1][2], &m[2][0], &m[2][2])))
            .add(&m[0][2].mul(&det2(&m[1][0], &m[1][1], &m[2][0], &m[2][1])));
        !d.is_zero()
    }

    /// Canonical form: q monic, g reduced modulo q.
    pub fn normalized(&self) -> (MPoly<SymElem>, MPoly<SymElem>) {
        let r = xyz_ring();
        let q = r.monic(&self.q);
        let g = r.divrem(&self.g, &q).1;
        (q, g)
    }

    /// Exact equality of the underlying curves.
    pub fn same_curve(&self, o: &DivisorCurve) -> bool {
        self.normalized() == o.normalized()
    }

    pub fn embed(&self, ctx: &EmbedCtx) -> Result<EmbeddedCurve> {
        let r = PolyRing::grevlex(ctx.fq.clone(), 3);
        let sr = xyz_ring();
        let q = sr.map_into(&self.q, &r, |c| ctx.embed(c))?;
        let g = sr.map_into(&self.g, &r, |c| ctx.embed(c))?;
        if q.is_zero() || q.total_degree() != Some(2) || !q.is_homogeneous() {
            return Err(Error::BadReduction(format!("conic of {} degenerates mod p", self.label)));
        }
        Ok(EmbeddedCurve::new(&r, q, g, self.label.clone()))
    }

    /// Coefficients over the 96-element basis, as exact rational strings.
    pub fn to_json(&self) -> Value {
        let enc = |p: &MPoly<SymElem>| -> Value {
            Value::Array(
                p.terms
                    .iter()
                    .map(|(m, c)| {
                        let coeffs: Vec<Value> = (0..SYM_DIM)
                            .filter(|&i| !c.numerators()[i].is_zero())
                            .map(|i| json!({"basis": i, "value": c.coeff(i).to_string()}))
                            .collect();
                        json!({"monomial": m.exps(3), "coefficient": coeffs})
                    })
                    .collect(),
            )
        };
        json!({"label": self.label, "q": enc(&self.q), "g": enc(&self.g)})
    }
}

/// A divisor reduced into F_q[x, y, z], in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EmbeddedCurve {
    pub q: MPoly<u32>,
    pub g: MPoly<u32>,
    pub label: String,
}

impl EmbeddedCurve {
    pub fn new(r: &PolyRing<Fq>, q: MPoly<u32>, g: MPoly<u32>, label: String) -> Self {
        let q = r.monic(&q);
        let g = r.divrem(&g, &q).1;
        EmbeddedCurve { q, g, label }
    }

    /// Key identifying the curve independent of its label.
    pub fn key(&self) -> (MPoly<u32>, MPoly<u32>) {
        (self.q.clone(), self.g.clone())
    }

    pub fn same_curve(&self, o: &EmbeddedCurve) -> bool {
        self.q == o.q && self.g == o.g
    }
}

fn lin(parts: &[(SymElem, [u32; 3])]) -> MPoly<SymElem> {
    let r = xyz_ring();
    r.sum(&parts.iter().map(|(c, e)| term(&r, c.clone(), *e)).collect::<Vec<_>>())
}

fn int(n: i64) -> SymElem {
    SymElem::from_i64(n)
}

fn frac(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

/// t³ + 27.
fn t3_27() -> SymElem {
    SymElem::t().pow(3).add(&int(27))
}

fn b1() -> DivisorCurve {
    let q = lin(&[(int(1), [2, 0, 0]), (int(1), [0, 2, 0]), (SymElem::zeta(3, 1), [0, 0, 2])]);
    let g = lin(&[(SymElem::beta(1), [1, 1, 1])]);
    DivisorCurve::new(q, g, "B1")
}

fn b2() -> DivisorCurve {
    let q = lin(&[(int(1), [2, 0, 0]), (SymElem::zeta(3, 1), [0, 2, 0]), (SymElem::zeta(3, 2), [0, 0, 2])]);
    let g = lin(&[(SymElem::beta(0), [1, 1, 1])]);
    DivisorCurve::new(q, g, "B2")
}

fn b3() -> DivisorCurve {
    let q = lin(&[(int(2), [1, 1, 0]), (SymElem::c1().neg(), [0, 0, 2])]);
    let g = lin(&[(int(1), [3, 0, 0]), (int(-1), [0, 3, 0])]);
    DivisorCurve::new(q, g, "B3")
}

fn b4_conic() -> MPoly<SymElem> {
    let (t, c0, d) = (SymElem::t(), SymElem::c0(), SymElem::delta());
    let xy = c0.mul(&c0).scale_i64(9).add(&t.mul(&c0).scale_i64(3)).sub(&t.mul(&t).scale_i64(2)).scale_i64(-2);
    lin(&[(c0.mul(&d), [2, 0, 0]), (xy, [1, 1, 0]), (d.scale_i64(2), [0, 2, 0]), (d.neg(), [0, 0, 2])])
}

fn b4_sheet(scale: &SymElem, c4: &SymElem) -> MPoly<SymElem> {
    let (t, c0, d) = (SymElem::t(), SymElem::c0(), SymElem::delta());
    let inv = t3_27().invert().expect("t^3+27 is nonzero");
    let a4 = c0.scale_i64(9).add(&t.scale_i64(6)).mul(&d).mul(&inv).scale(&frac(1, 4));
    let b4 = c0.mul(&c0).add(&t.mul(&c0)).neg();
    lin(&[
        (scale.clone(), [3, 0, 0]),
        (scale.mul(&a4), [2, 1, 0]),
        (scale.mul(&b4), [1, 2, 0]),
        (scale.mul(c4), [0, 3, 0]),
    ])
}

fn c4_numerator() -> SymElem {
    let (t, c0) = (SymElem::t(), SymElem::c0());
    int(18).sub(&t.mul(&t).mul(&c0).scale_i64(3)).sub(&t.mul(&c0).mul(&c0).scale_i64(3))
}

fn b4() -> DivisorCurve {
    let (c0, c1) = (SymElem::c0(), SymElem::c1());
    let inv = t3_27().invert().expect("t^3+27 is nonzero");
    let c4 = SymElem::delta().mul(&c4_numerator()).mul(&inv).scale(&frac(1, 8));
    let scale = c0.mul(&c0).mul(&c1).sub(&int(2)).scale(&frac(1, 2));
    DivisorCurve::new(b4_conic(), b4_sheet(&scale, &c4), "B4")
}

/// The fourth catalog curve with the printed sheet constants, which do not
/// give a bitangent conic; kept for regression tests.
pub fn b4_as_printed() -> DivisorCurve {
    let (c0, c1) = (SymElem::c0(), SymElem::c1());
    let inv = t3_27().invert().expect("t^3+27 is nonzero");
    let c4 = c4_numerator().mul(&inv).scale(&frac(1, 8));
    let scale = c0.mul(&c0).mul(&c1).add(&int(2)).scale(&frac(1, 2));
    DivisorCurve::new(b4_conic(), b4_sheet(&scale, &c4), "B4(printed)")
}

fn b5() -> DivisorCurve {
    let t = SymElem::t();
    let (z12, z6, z3) = (SymElem::gen(Gen::Zeta12), SymElem::zeta(6, 1), SymElem::zeta(3, 1));
    let (b0, b1, b2) = (SymElem::beta(0), SymElem::beta(1), SymElem::beta(2));
    let base = z12.mul(&z6.sub(&int(2)));
    let a5 = base.neg().scale(&frac(1, 9)).mul(&b0.mul(&b1).add(&b0.mul(&b2)).add(&b1.mul(&b2)).add(&t));
    let c5 = base.scale(&frac(1, 3));
    let r5 = base.scale(&frac(1, 9)).mul(
        &b0.mul(&b1).mul(&b2).scale_i64(2)
            .add(&t.scale_i64(2).sub(&int(3)).mul(&b0))
            .add(&t.scale_i64(2).sub(&z3.scale_i64(3)).mul(&b1))
            .add(&t.scale_i64(2).add(&z6.scale_i64(3)).mul(&b2)),
    );
    let v5 = b0.add(&b1).add(&b2).neg();
    let q = lin(&[(a5, [2, 0, 0]), (c5.clone(), [0, 2, 0]), (c5, [0, 0, 2]), (int(1), [0, 1, 1])]);
    let g = lin(&[(r5, [3, 0, 0]), (v5, [1, 1, 1])]);
    DivisorCurve::new(q, g, "B5")
}

/// The five generating curves B1, …, B5.
pub fn divisor_catalog() -> Vec<DivisorCurve> {
    vec![b1(), b2(), b3(), b4(), b5()]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_is_bitangent() {
        for d in divisor_catalog() {
            assert!(d.is_bitangent(), "{} is not bitangent", d.label);
            assert!(d.conic_is_smooth(), "{} has a singular conic", d.label);
        }
    }

    #[test]
    fn printed_fourth_curve_is_not_bitangent() {
        assert!(!b4_as_printed().is_bitangent());
    }
}

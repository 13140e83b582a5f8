//! Singular fibers: the singular locus of the branch sextic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldDesc, Fq, Rat, RationalField};
use crate::intersect::{stratified_degree, XYZ};
use crate::poly::{MPoly, PolyRing};
use crate::surface::sextic;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FiberKind {
    Smooth,
    /// Every singular point is a node and all of them were located.
    Nodal,
    /// Singular, but not certified as nodal over the working field.
    Singular,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberReport {
    pub t0: String,
    pub kind: FiberKind,
    /// Length of the Jacobian scheme of the sextic.
    pub singular_length: usize,
    /// Whether `singular_length` was computed over ℚ.
    pub exact: bool,
    pub field: String,
    /// Singular points with first nonzero coordinate 1, as field encodings.
    pub points: Vec<[u32; 3]>,
    pub nodes: usize,
}

fn jacobian<F: Field>(r: &PolyRing<F>, t: F::Elem) -> (MPoly<F::Elem>, Vec<MPoly<F::Elem>>) {
    let f = sextic(r, t);
    let grads = (0..3).map(|i| r.derivative(&f, i)).collect();
    (f, grads)
}

/// Rank of a small matrix over any field.
pub fn rank_over<F: Field>(field: &F, mut m: Vec<Vec<F::Elem>>) -> usize {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !field.is_zero(&m[i][c])) else { continue };
        m.swap(r, p);
        let inv = field.inv(&m[r][c]).expect("nonzero pivot");
        for i in 0..rows {
            if i != r && !field.is_zero(&m[i][c]) {
                let f = field.mul(&m[i][c], &inv);
                for j in c..cols {
                    let s = field.mul(&f, &m[r][j]);
                    m[i][j] = field.sub(&m[i][j], &s);
                }
            }
        }
        r += 1;
    }
    r
}

/// Singular points of the sextic over the field itself, by exhaustion.
fn rational_singular_points(fq: &Fq, f: &MPoly<u32>, grads: &[MPoly<u32>]) -> Vec<[u32; 3]> {
    let r = PolyRing::grevlex(fq.clone(), 3);
    let (zero, one) = (fq.zero(), fq.one());
    let mut pts = vec![];
    let mut consider = |pt: [u32; 3]| {
        if fq.is_zero(&r.eval(f, &pt)) && grads.iter().all(|g| fq.is_zero(&r.eval(g, &pt))) {
            pts.push(pt);
        }
    };
    for a in fq.elements() {
        for b in fq.elements() {
            consider([one, a, b]);
        }
    }
    for b in fq.elements() {
        consider([zero, one, b]);
    }
    consider([zero, zero, one]);
    pts
}

/// A singular point of the sextic gives an ordinary double point of the
/// double cover iff the projective Hessian has rank 2 there.
pub fn is_node(fq: &Fq, f: &MPoly<u32>, pt: &[u32; 3]) -> bool {
    let r = PolyRing::grevlex(fq.clone(), 3);
    let h: Vec<Vec<u32>> = (0..3)
        .map(|i| {
            let di = r.derivative(f, i);
            (0..3).map(|j| r.eval(&r.derivative(&di, j), pt)).collect()
        })
        .collect();
    rank_over(fq, h) == 2
}

fn locate(fq: &Fq, t: u32, length: usize, exact: bool, t0: String) -> FiberReport {
    let r = PolyRing::grevlex(fq.clone(), 3);
    let (f, grads) = jacobian(&r, t);
    let points = if length == 0 { vec![] } else { rational_singular_points(fq, &f, &grads) };
    let nodes = points.iter().filter(|p| is_node(fq, &f, p)).count();
    let kind = if length == 0 {
        FiberKind::Smooth
    } else if nodes == points.len() && points.len() == length {
        FiberKind::Nodal
    } else {
        FiberKind::Singular
    };
    FiberReport { t0, kind, singular_length: length, exact, field: fq.desc().to_string(), points, nodes }
}

/// Classifies the fiber over t₀ ∈ ℚ.  The length of the singular scheme is
/// computed over ℚ; points and node certificates over `desc`.
pub fn classify_fiber(t0: &Rat, desc: &FieldDesc) -> Result<FiberReport> {
    let r = PolyRing::grevlex(RationalField, 3);
    let (_, grads) = jacobian(&r, t0.clone());
    let s = stratified_degree(&RationalField, &grads, XYZ)
        .map_err(|_| Error::VerificationFailed("singular locus is not finite".into()))?;
    let length = s.iter().sum();
    let fq = Fq::new(desc)?;
    let t = fq
        .from_rat(t0)
        .ok_or_else(|| Error::BadReduction(format!("{t0} does not reduce mod {}", desc.p)))?;
    Ok(locate(&fq, t, length, true, t0.to_string()))
}

/// Classifies the fiber at a parameter given directly in a finite field.
pub fn classify_fiber_fq(fq: &Fq, t: u32) -> Result<FiberReport> {
    let r = PolyRing::grevlex(fq.clone(), 3);
    let (_, grads) = jacobian(&r, t);
    let s = stratified_degree(fq, &grads, XYZ)
        .map_err(|_| Error::VerificationFailed("singular locus is not finite".into()))?;
    Ok(locate(fq, t, s.iter().sum(), false, fq.fmt_elem(t)))
}

/// A primitive sixth root of unity in `fq`.
pub fn zeta6(fq: &Fq) -> Result<u32> {
    let q = fq.order() as u64;
    if (q - 1) % 6 != 0 {
        return Err(Error::Precondition(format!("no sixth roots of unity in {}", fq.desc())));
    }
    Ok(fq.pow(&fq.primitive(), (q - 1) / 6))
}

/// The points (1 : ζ₆ʲ : ζ₆ᵏ) with j + k ≡ `residue` mod 3.
pub fn node_candidates(fq: &Fq, residue: u32) -> Result<Vec<[u32; 3]>> {
    let z = zeta6(fq)?;
    let mut out = vec![];
    for j in 0..6u64 {
        for k in 0..6u64 {
            if (j + k) % 3 == residue as u64 % 3 {
                out.push([fq.one(), fq.pow(&z, j), fq.pow(&z, k)]);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{ff_make, rat};

    #[test]
    fn smooth_and_nodal() {
        let desc = ff_make(79, 1).unwrap();
        let r = classify_fiber(&rat(7, 1), &desc).unwrap();
        assert_eq!(r.kind, FiberKind::Smooth);
        let r = classify_fiber(&rat(-3, 1), &desc).unwrap();
        assert_eq!(r.kind, FiberKind::Nodal);
        assert_eq!(r.singular_length, 12);
        let fq = Fq::new(&desc).unwrap();
        let mut want = node_candidates(&fq, 0).unwrap();
        want.sort();
        let mut got = r.points.clone();
        got.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn twisted_nodal_fiber() {
        let desc = ff_make(79, 1).unwrap();
        let fq = Fq::new(&desc).unwrap();
        let z3 = fq.pow(&zeta6(&fq).unwrap(), 2);
        let t = fq.mul(&fq.from_i64(-3), &z3);
        let r = classify_fiber_fq(&fq, t).unwrap();
        assert_eq!(r.kind, FiberKind::Nodal);
        let mut want = node_candidates(&fq, 2).unwrap();
        want.sort();
        let mut got = r.points.clone();
        got.sort();
        assert_eq!(got, want);
    }
}

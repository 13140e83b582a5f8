//! Lines meeting the branch sextic with even multiplicity everywhere.
//!
//! A line ℓ is tritangent iff f|ℓ is the square of a binary cubic.  Lines
//! are split into three charts: z = ax + by; y = ax; x = 0.  In each chart
//! the unknowns are the line coefficients and the cubic c₀…c₃, and the
//! solution count is twice the number of lines (the cubic is defined up
//! to sign).

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldDesc, Fq, Rat};
use crate::poly::{groebner, zerodim_degree, MPoly, Mono, PolyRing, ZeroDim};
use crate::surface::sextic;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TritangentReport {
    pub t0: String,
    pub field: String,
    /// Solution counts (with multiplicity) per chart.
    pub charts: [usize; 3],
    /// Number of tritangent lines over the algebraic closure, with multiplicity.
    pub lines: usize,
}

// unknowns a, b, c0..c3 are variables 0..5; line parameters are 6, 7
const NU: usize = 6;

fn chart_count(fq: &Fq, t: u32, chart: usize) -> Result<usize> {
    let r8 = PolyRing::grevlex(fq.clone(), 8);
    let r3 = PolyRing::grevlex(fq.clone(), 3);
    let f = sextic(&r3, t);
    let v = r8.vars();
    let (s, u) = (v[6].clone(), v[7].clone());
    let point = match chart {
        0 => [s.clone(), u.clone(), r8.add(&r8.mul(&v[0], &s), &r8.mul(&v[1], &u))],
        1 => [s.clone(), r8.mul(&v[0], &s), u.clone()],
        _ => [r8.zero(), s.clone(), u.clone()],
    };
    let restricted = r3.substitute(&f, &r8, &point);
    let one = fq.one();
    let cubic = r8.sum(
        &(0..4)
            .map(|i| r8.mul_term(&v[2 + i], &Mono::from_exps(&[0, 0, 0, 0, 0, 0, 3 - i as u32, i as u32]), &one))
            .collect::<Vec<_>>(),
    );
    let diff = r8.sub(&restricted, &r8.mul(&cubic, &cubic));
    let mut coeffs: BTreeMap<(u32, u32), Vec<(Mono, u32)>> = BTreeMap::new();
    for (m, c) in &diff.terms {
        let e = m.exps(8);
        coeffs.entry((e[6], e[7])).or_default().push((Mono::from_exps(&e[..NU]), *c));
    }
    let r6 = PolyRing::grevlex(fq.clone(), NU);
    let mut gens: Vec<MPoly<u32>> = coeffs.into_values().map(|ts| r6.from_terms(ts)).collect();
    match chart {
        0 => {}
        1 => gens.push(r6.var(1)),
        _ => {
            gens.push(r6.var(0));
            gens.push(r6.var(1));
        }
    }
    match zerodim_degree(&r6, &groebner(&r6, &gens)) {
        ZeroDim::Degree(d) => Ok(d),
        ZeroDim::NotZeroDimensional => Err(Error::BadReduction("tritangent system is not zero-dimensional".into())),
    }
}

/// Counts tritangent lines of the fiber over t₀ after reduction to `desc`.
pub fn tritangent_check(t0: &Rat, desc: &FieldDesc) -> Result<TritangentReport> {
    if desc.p <= 3 {
        return Err(Error::BadReduction(format!("characteristic {}", desc.p)));
    }
    let fq = Fq::new(desc)?;
    let t = fq
        .from_rat(t0)
        .ok_or_else(|| Error::BadReduction(format!("{t0} does not reduce mod {}", desc.p)))?;
    let c = fq.add(&fq.pow(&t, 3), &fq.from_i64(27));
    if fq.is_zero(&c) {
        return Err(Error::BadReduction("singular fiber".into()));
    }
    let mut charts = [0; 3];
    for (k, slot) in charts.iter_mut().enumerate() {
        *slot = chart_count(&fq, t, k)?;
    }
    let total: usize = charts.iter().sum();
    if total % 2 != 0 {
        return Err(Error::VerificationFailed("odd tritangent solution count".into()));
    }
    Ok(TritangentReport { t0: t0.to_string(), field: desc.to_string(), charts, lines: total / 2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{ff_make, rat};

    #[test]
    fn counts() {
        let desc = ff_make(79, 1).unwrap();
        for (t, positive) in [(7, false), (0, true), (-5, true)] {
            let r = tritangent_check(&rat(t, 1), &desc).unwrap();
            eprintln!("{t}: {:?}", r);
            assert_eq!(r.lines > 0, positive, "t = {t}");
        }
    }
}

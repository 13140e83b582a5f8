//! Reduction of w² = ax⁶ + by⁶ + cz⁶ + dx²y²z² to a member of the family.
//!
//! Scaling x, y, z by sixth roots of a, b, c turns the equation into
//! w² = x⁶ + y⁶ + z⁶ + (d/ε) x²y²z² with ε³ = abc.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{rat, Rat};

/// The parameter e of the family member isomorphic to the given surface.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FamilyParameter {
    Rational(Rat),
    /// e = d/ε where ε³ = `cube`; e is a root of x³ − `e_cubed`.
    Algebraic { d: Rat, cube: Rat, e_cubed: Rat },
}

impl FamilyParameter {
    pub fn e_cubed(&self) -> Rat {
        match self {
            FamilyParameter::Rational(e) => e * e * e,
            FamilyParameter::Algebraic { e_cubed, .. } => e_cubed.clone(),
        }
    }

    /// Minimal polynomial over ℚ, lowest degree first.
    pub fn minimal_polynomial(&self) -> Vec<Rat> {
        match self {
            FamilyParameter::Rational(e) => vec![-e.clone(), rat(1, 1)],
            FamilyParameter::Algebraic { e_cubed, .. } => vec![-e_cubed.clone(), rat(0, 1), rat(0, 1), rat(1, 1)],
        }
    }
}

impl std::fmt::Display for FamilyParameter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FamilyParameter::Rational(e) => write!(f, "{e}"),
            FamilyParameter::Algebraic { d, cube, .. } => write!(f, "({d})/ε, ε³ = {cube}"),
        }
    }
}

fn int_cbrt(n: &BigInt) -> Option<BigInt> {
    let r = n.abs().cbrt();
    if &(&r * &r * &r) == &n.abs() {
        Some(if n.is_negative() { -r } else { r })
    } else {
        None
    }
}

/// Exact rational cube root, if there is one.
pub fn rat_cbrt(x: &Rat) -> Option<Rat> {
    Some(Rat::new(int_cbrt(x.numer())?, int_cbrt(x.denom())?))
}

pub fn normalize_family_member(a: &Rat, b: &Rat, c: &Rat, d: &Rat) -> Result<FamilyParameter> {
    let abc = a * b * c;
    if abc.is_zero() {
        return Err(Error::Precondition("a·b·c must be nonzero".into()));
    }
    let e_cubed = d * d * d / &abc;
    if e_cubed == rat(-27, 1) {
        return Err(Error::SingularMember);
    }
    Ok(match rat_cbrt(&abc) {
        Some(eps) => FamilyParameter::Rational(d / eps),
        None => FamilyParameter::Algebraic { d: d.clone(), cube: abc, e_cubed },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_members() {
        let one = rat(1, 1);
        let e = normalize_family_member(&one, &one, &one, &rat(7, 1)).unwrap();
        assert_eq!(e, FamilyParameter::Rational(rat(7, 1)));
        let e = normalize_family_member(&rat(8, 1), &one, &one, &rat(5, 1)).unwrap();
        assert_eq!(e, FamilyParameter::Rational(rat(5, 2)));
    }

    #[test]
    fn singular_member() {
        let one = rat(1, 1);
        assert!(matches!(normalize_family_member(&one, &one, &one, &rat(-3, 1)), Err(Error::SingularMember)));
        assert!(matches!(normalize_family_member(&rat(8, 1), &one, &one, &rat(-6, 1)), Err(Error::SingularMember)));
    }

    #[test]
    fn algebraic_member() {
        let one = rat(1, 1);
        let e = normalize_family_member(&rat(2, 1), &one, &one, &rat(3, 1)).unwrap();
        assert_eq!(e.e_cubed(), rat(27, 2));
        assert!(matches!(e, FamilyParameter::Algebraic { .. }));
    }
}

//! Automorphisms acting on divisor curves: the monomial maps ψ and the
//! Galois automorphisms τ₁, …, τ₅.

use std::fmt;
use std::sync::OnceLock;

use super::curve::{xyz_ring, DivisorCurve, EmbeddedCurve};
use crate::error::{Error, Result};
use crate::field::{EmbedCtx, Field, Gen, GenImages, SymElem, GEN_ZETA12};
use crate::poly::{MPoly, Mono, PolyRing};

/// The projective map `P ↦ (ζ₆^{e₀} P_{π(0)} : ζ₆^{e₁} P_{π(1)} : ζ₆^{e₂} P_{π(2)} : w)`.
/// Exponents are normalized modulo the diagonal (2,2,2) so that `e₀ ∈ {0,1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Psi {
    pub perm: [u8; 3],
    pub exps: [u8; 3],
}

const VARS: [char; 3] = ['x', 'y', 'z'];

impl Psi {
    pub fn new(perm: [u8; 3], exps: [u8; 3]) -> Self {
        let e = exps.map(|e| e % 6);
        let l = e[0] / 2;
        Psi { perm, exps: e.map(|x| (x + 6 - 2 * l) % 6) }
    }

    pub fn identity() -> Self {
        Psi::new([0, 1, 2], [0, 0, 0])
    }

    /// ψ_{i,j,k}; requires i + j + k ≡ 0 mod 3.
    pub fn diag(i: u8, j: u8, k: u8) -> Result<Self> {
        if (i as u32 + j as u32 + k as u32) % 3 != 0 {
            return Err(Error::Precondition(format!("psi({i},{j},{k}) does not preserve the sextic")));
        }
        Ok(Psi::new([0, 1, 2], [i % 6, j % 6, k % 6]))
    }

    /// ψ_σ for σ given by the images of x, y, z (`images[i] = σ(var i)`).
    pub fn perm(images: [u8; 3]) -> Self {
        Psi::new(images, [0, 0, 0])
    }

    /// `self ∘ o`.
    pub fn compose(&self, o: &Psi) -> Psi {
        let mut perm = [0u8; 3];
        let mut exps = [0u8; 3];
        for i in 0..3 {
            let pa = self.perm[i] as usize;
            perm[i] = o.perm[pa];
            exps[i] = (self.exps[i] + o.exps[pa]) % 6;
        }
        Psi::new(perm, exps)
    }

    pub fn inverse(&self) -> Psi {
        let mut perm = [0u8; 3];
        for i in 0..3 {
            perm[self.perm[i] as usize] = i as u8;
        }
        let exps = [0, 1, 2].map(|j| (6 - self.exps[perm[j] as usize]) % 6);
        Psi::new(perm, exps)
    }

    pub fn is_identity(&self) -> bool {
        *self == Psi::identity()
    }

    pub fn diagonal_part(&self) -> Psi {
        Psi::new([0, 1, 2], self.exps)
    }

    pub fn perm_part(&self) -> Psi {
        Psi::perm(self.perm)
    }

    /// `p ∘ self⁻¹`, the equation of the image of `{p = 0}`.
    pub fn pull_poly<F: Field>(&self, ring: &PolyRing<F>, p: &MPoly<F::Elem>, zeta6_pows: &[F::Elem; 6]) -> MPoly<F::Elem> {
        let inv = self.inverse();
        let terms = p
            .terms
            .iter()
            .map(|(m, c)| {
                let mut e = [0u32; 3];
                let mut z = 0u32;
                for i in 0..3 {
                    e[inv.perm[i] as usize] += m.exp(i);
                    z += inv.exps[i] as u32 * m.exp(i);
                }
                (Mono::from_exps(&e), ring.field.mul(c, &zeta6_pows[(z % 6) as usize]))
            })
            .collect();
        ring.from_terms(terms)
    }

    pub fn apply(&self, d: &DivisorCurve) -> DivisorCurve {
        let r = xyz_ring();
        let z = sym_zeta6_powers();
        DivisorCurve::new(self.pull_poly(&r, &d.q, z), self.pull_poly(&r, &d.g, z), format!("{self}*{}", d.label))
    }

    pub fn apply_embedded(&self, ctx: &EmbedCtx, d: &EmbeddedCurve) -> EmbeddedCurve {
        let f = &ctx.fq;
        let r = PolyRing::grevlex(f.clone(), 3);
        let z6 = f.pow(&ctx.image(GEN_ZETA12), 2);
        let pows = [0, 1, 2, 3, 4, 5].map(|k| f.pow(&z6, k));
        EmbeddedCurve::new(&r, self.pull_poly(&r, &d.q, &pows), self.pull_poly(&r, &d.g, &pows), format!("{self}*{}", d.label))
    }

    fn perm_name(&self) -> String {
        // cycle notation of σ with σ(var i) = var perm[i]
        let mut seen = [false; 3];
        let mut cycles = vec![];
        for s in 0..3 {
            if seen[s] || self.perm[s] as usize == s {
                continue;
            }
            let mut c = vec![];
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                c.push(VARS[i].to_string());
                i = self.perm[i] as usize;
            }
            cycles.push(format!("psi({})", c.join(",")));
        }
        cycles.join("*")
    }
}

fn sym_zeta6_powers() -> &'static [SymElem; 6] {
    static P: OnceLock<[SymElem; 6]> = OnceLock::new();
    P.get_or_init(|| [0, 1, 2, 3, 4, 5].map(|k| SymElem::zeta(6, k)))
}

impl fmt::Display for Psi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.exps != [0, 0, 0];
        let p = self.perm != [0, 1, 2];
        let dn = format!("psi({},{},{})", self.exps[0], self.exps[1], self.exps[2]);
        match (d, p) {
            (false, false) => write!(f, "id"),
            (true, false) => write!(f, "{dn}"),
            (false, true) => write!(f, "{}", self.perm_name()),
            (true, true) => write!(f, "{dn}*{}", self.perm_name()),
        }
    }
}

impl fmt::Debug for Psi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Images of the generators under τ₁, …, τ₅.
pub fn galois_generators() -> &'static [GenImages; 5] {
    static T: OnceLock<[GenImages; 5]> = OnceLock::new();
    T.get_or_init(|| {
        let z = SymElem::gen(Gen::Zeta12);
        let b = [SymElem::beta(0), SymElem::beta(1), SymElem::beta(2)];
        let c0 = SymElem::c0();
        [
            GenImages::new(z.pow(7), b.clone(), c0.clone()),
            GenImages::new(z.clone(), b.clone(), SymElem::c1()),
            GenImages::new(z.pow(7), [b[0].neg(), b[1].clone(), b[2].clone()], c0.clone()),
            GenImages::new(z.pow(11), [b[0].clone(), b[2].neg(), b[1].clone()], c0.clone()),
            GenImages::new(z.pow(7), [b[0].clone(), b[1].clone(), b[2].neg()], c0),
        ]
    })
}

/// The ψ generators of H: ψ_(x,y), ψ_(x,y,z), ψ_{0,3,0}, ψ_{0,2,4}.
pub fn h_generators() -> Vec<Psi> {
    vec![Psi::perm([1, 0, 2]), Psi::perm([1, 2, 0]), Psi::diag(0, 3, 0).unwrap(), Psi::diag(0, 2, 4).unwrap()]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    Psi(Psi),
    /// τ_k, k = 1..=5.
    Tau(u8),
}

impl Atom {
    pub fn apply(&self, d: &DivisorCurve) -> DivisorCurve {
        match self {
            Atom::Psi(p) => p.apply(d),
            Atom::Tau(k) => {
                let im = &galois_generators()[*k as usize - 1];
                let r = xyz_ring();
                let map = |p: &MPoly<SymElem>| {
                    r.from_terms(p.terms.iter().map(|(m, c)| (*m, c.apply_automorphism(im))).collect())
                };
                DivisorCurve::new(map(&d.q), map(&d.g), format!("tau{k}*{}", d.label))
            }
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Psi(p) => write!(f, "{p}"),
            Atom::Tau(k) => write!(f, "tau{k}"),
        }
    }
}

/// A word in ψ's and τ's, applied right to left.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SurfAut {
    pub atoms: Vec<Atom>,
}

impl SurfAut {
    pub fn identity() -> Self {
        SurfAut { atoms: vec![] }
    }

    pub fn psi(p: Psi) -> Self {
        SurfAut { atoms: vec![Atom::Psi(p)] }
    }

    pub fn tau(k: u8) -> Self {
        assert!((1..=5).contains(&k));
        SurfAut { atoms: vec![Atom::Tau(k)] }
    }

    /// `self ∘ o`.
    pub fn then_after(&self, o: &SurfAut) -> SurfAut {
        let mut atoms = self.atoms.clone();
        atoms.extend(o.atoms.iter().cloned());
        SurfAut { atoms }
    }

    /// Applies the word; the label becomes `word*label`.
    pub fn apply(&self, d: &DivisorCurve) -> DivisorCurve {
        let mut cur = d.clone();
        for a in self.atoms.iter().rev() {
            cur = a.apply(&cur);
        }
        let mut out = cur;
        out.label = if self.atoms.is_empty() { d.label.clone() } else { format!("{self}*{}", d.label) };
        out
    }
}

impl fmt::Display for SurfAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.is_empty() {
            return write!(f, "id");
        }
        // collapse runs of equal atoms into powers
        let mut parts = vec![];
        let mut i = 0;
        while i < self.atoms.len() {
            let mut j = i;
            while j < self.atoms.len() && self.atoms[j] == self.atoms[i] {
                j += 1;
            }
            let n = j - i;
            let s = self.atoms[i].to_string();
            parts.push(if n == 1 { s } else if s.contains('*') { format!("({s})^{n}") } else { format!("{s}^{n}") });
            i = j;
        }
        write!(f, "{}", parts.join("*"))
    }
}

fn parse_atom(tok: &str) -> Result<Vec<Atom>> {
    let bad = || Error::Config(format!("cannot parse automorphism '{tok}'"));
    let (base, pow) = match tok.rsplit_once('^') {
        Some((b, e)) if !b.ends_with(')') || b.starts_with("psi") || b.starts_with("tau") => {
            (b, e.parse::<usize>().map_err(|_| bad())?)
        }
        _ => (tok, 1),
    };
    let atom = if let Some(k) = base.strip_prefix("tau") {
        let k: u8 = k.parse().map_err(|_| bad())?;
        if !(1..=5).contains(&k) {
            return Err(bad());
        }
        Atom::Tau(k)
    } else if let Some(inner) = base.strip_prefix("psi(").and_then(|s| s.strip_suffix(')')) {
        let items: Vec<&str> = inner.split(',').map(str::trim).collect();
        if items.iter().all(|s| s.parse::<u8>().is_ok()) {
            if items.len() != 3 {
                return Err(bad());
            }
            let v: Vec<u8> = items.iter().map(|s| s.parse().unwrap()).collect();
            Atom::Psi(Psi::diag(v[0], v[1], v[2])?)
        } else {
            let idx: Vec<usize> = items
                .iter()
                .map(|s| VARS.iter().position(|v| s.len() == 1 && s.starts_with(*v)).ok_or_else(bad))
                .collect::<Result<_>>()?;
            if idx.len() < 2 || idx.len() > 3 {
                return Err(bad());
            }
            let mut perm = [0u8, 1, 2];
            for k in 0..idx.len() {
                perm[idx[k]] = idx[(k + 1) % idx.len()] as u8;
            }
            Atom::Psi(Psi::perm(perm))
        }
    } else if base == "id" {
        return Ok(vec![]);
    } else {
        return Err(bad());
    };
    Ok(vec![atom; pow])
}

/// Parses words such as `tau2^2*psi(x,y)*B1`; returns the word and the
/// catalog index of the trailing curve, if any.
pub fn parse_word(s: &str) -> Result<(SurfAut, Option<usize>)> {
    let toks: Vec<&str> = s.split('*').map(str::trim).filter(|t| !t.is_empty()).collect();
    let mut atoms = vec![];
    let mut base = None;
    for (i, t) in toks.iter().enumerate() {
        if let Some(n) = t.strip_prefix('B') {
            let k: usize = n.parse().map_err(|_| Error::Config(format!("bad curve name '{t}'")))?;
            if i != toks.len() - 1 || !(1..=5).contains(&k) {
                return Err(Error::Config(format!("bad curve name '{t}'")));
            }
            base = Some(k - 1);
        } else {
            atoms.extend(parse_atom(t)?);
        }
    }
    Ok((SurfAut { atoms }, base))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psi_group_laws() {
        let gens = h_generators();
        for a in &gens {
            assert!(a.compose(&a.inverse()).is_identity());
            for b in &gens {
                for c in &gens {
                    assert_eq!(a.compose(&b.compose(c)), a.compose(b).compose(c));
                }
            }
        }
        assert_eq!(Psi::diag(2, 2, 2).unwrap(), Psi::identity());
        assert_eq!(Psi::diag(1, 1, 1).unwrap(), Psi::diag(3, 3, 3).unwrap());
    }

    #[test]
    fn names_round_trip() {
        for s in ["psi(x,y)", "psi(x,y,z)", "psi(0,3,0)", "tau2"] {
            let (w, b) = parse_word(s).unwrap();
            assert_eq!(b, None);
            assert_eq!(w.to_string(), s);
        }
        let (w, b) = parse_word("tau2^2*psi(x,y)*B1").unwrap();
        assert_eq!(b, Some(0));
        assert_eq!(w.atoms.len(), 3);
        assert_eq!(w.to_string(), "tau2^2*psi(x,y)");
    }

    #[test]
    fn tau_images_are_automorphisms() {
        for g in galois_generators() {
            assert!(g.respects_relations());
        }
    }
}

//! Buchberger's algorithm with the Gebauer–Möller pair criteria.

use std::collections::HashSet;

use super::{MPoly, Mono, PolyRing};
use crate::field::Field;

/// Generators together with their ring.
#[derive(Clone, Debug)]
pub struct Ideal<F: Field> {
    pub ring: PolyRing<F>,
    pub gens: Vec<MPoly<F::Elem>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroDim {
    Degree(usize),
    NotZeroDimensional,
}

impl<F: Field> Ideal<F> {
    pub fn new(ring: PolyRing<F>, gens: Vec<MPoly<F::Elem>>) -> Self {
        let gens = gens.into_iter().filter(|g| !g.is_zero()).collect();
        Ideal { ring, gens }
    }

    pub fn groebner(&self) -> Vec<MPoly<F::Elem>> {
        groebner(&self.ring, &self.gens)
    }

    pub fn degree(&self) -> ZeroDim {
        zerodim_degree(&self.ring, &self.groebner())
    }

    pub fn is_unit(&self) -> bool {
        let gb = self.groebner();
        gb.len() == 1 && gb[0].lm().degree() == 0
    }

    pub fn contains(&self, f: &MPoly<F::Elem>) -> bool {
        normal_form(&self.ring, f, &self.groebner()).is_zero()
    }
}

/// Full reduction of `f` modulo `g` (any set of nonzero polynomials).
pub fn normal_form<F: Field>(ring: &PolyRing<F>, f: &MPoly<F::Elem>, g: &[MPoly<F::Elem>]) -> MPoly<F::Elem> {
    let fld = &ring.field;
    let inv: Vec<F::Elem> = g.iter().map(|p| fld.inv(p.lc()).expect("nonzero lc")).collect();
    let mut p = f.clone();
    let mut rem: Vec<(Mono, F::Elem)> = vec![];
    while !p.is_zero() {
        let (m, c) = p.terms[0].clone();
        match g.iter().position(|h| h.lm().divides(&m)) {
            Some(k) => {
                let q = g[k].lm().div_into(&m);
                let s = fld.neg(&fld.mul(&c, &inv[k]));
                p = ring.add_scaled(&p, &s, &q, &g[k]);
            }
            None => {
                rem.push((m, c));
                p.terms.remove(0);
            }
        }
    }
    MPoly { terms: rem }
}

fn spoly<F: Field>(ring: &PolyRing<F>, a: &MPoly<F::Elem>, b: &MPoly<F::Elem>) -> MPoly<F::Elem> {
    let l = a.lm().lcm(b.lm());
    let fa = a.lm().div_into(&l);
    let fb = b.lm().div_into(&l);
    let f = &ring.field;
    let ta = ring.mul_term(a, &fa, &f.inv(a.lc()).unwrap());
    let sb = f.neg(&f.inv(b.lc()).unwrap());
    ring.add_scaled(&ta, &sb, &fb, b)
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Mono,
}

fn update<F: Field>(
    ring: &PolyRing<F>,
    polys: &[MPoly<F::Elem>],
    active: &mut Vec<usize>,
    pairs: &mut Vec<Pair>,
    h: usize,
) {
    let hm = *polys[h].lm();
    let cand: Vec<(usize, Mono)> = active.iter().map(|&g| (g, hm.lcm(polys[g].lm()))).collect();
    let mut keep: Vec<(usize, Mono)> = vec![];
    for (k, (g1, l1)) in cand.iter().enumerate() {
        let coprime = hm.coprime(polys[*g1].lm());
        let dominated = cand
            .iter()
            .enumerate()
            .skip(k + 1)
            .map(|(_, x)| x)
            .chain(keep.iter())
            .any(|(_, l2)| l2.divides(l1));
        if coprime || !dominated {
            keep.push((*g1, *l1));
        }
    }
    let new_pairs: Vec<Pair> = keep
        .into_iter()
        .filter(|(g, _)| !hm.coprime(polys[*g].lm()))
        .map(|(g, l)| Pair { i: g, j: h, lcm: l })
        .collect();
    pairs.retain(|p| {
        !(hm.divides(&p.lcm)
            && hm.lcm(polys[p.i].lm()) != p.lcm
            && hm.lcm(polys[p.j].lm()) != p.lcm)
    });
    pairs.extend(new_pairs);
    active.retain(|&g| !hm.divides(polys[g].lm()));
    active.push(h);
    let _ = ring;
}

/// Reduced, monic Gröbner basis, sorted descending by leading monomial.
pub fn groebner<F: Field>(ring: &PolyRing<F>, gens: &[MPoly<F::Elem>]) -> Vec<MPoly<F::Elem>> {
    let mut polys: Vec<MPoly<F::Elem>> = vec![];
    let mut active: Vec<usize> = vec![];
    let mut pairs: Vec<Pair> = vec![];
    let mut seen: HashSet<Vec<(Mono, F::Elem)>> = HashSet::new();
    for g in gens {
        let r = normal_form(ring, g, &active.iter().map(|&i| polys[i].clone()).collect::<Vec<_>>());
        if r.is_zero() {
            continue;
        }
        let r = ring.monic(&r);
        if r.lm().degree() == 0 {
            return vec![ring.one()];
        }
        if !seen.insert(r.terms.clone()) {
            continue;
        }
        polys.push(r);
        let h = polys.len() - 1;
        update(ring, &polys, &mut active, &mut pairs, h);
    }
    while !pairs.is_empty() {
        // normal selection strategy
        let k = (0..pairs.len())
            .min_by(|&a, &b| ring.order.cmp(&pairs[a].lcm, &pairs[b].lcm))
            .unwrap();
        let p = pairs.swap_remove(k);
        let s = spoly(ring, &polys[p.i], &polys[p.j]);
        let basis: Vec<MPoly<F::Elem>> = active.iter().map(|&i| polys[i].clone()).collect();
        let r = normal_form(ring, &s, &basis);
        if r.is_zero() {
            continue;
        }
        let r = ring.monic(&r);
        if r.lm().degree() == 0 {
            return vec![ring.one()];
        }
        polys.push(r);
        let h = polys.len() - 1;
        update(ring, &polys, &mut active, &mut pairs, h);
    }
    // minimal basis, then interreduce
    let mut basis: Vec<MPoly<F::Elem>> = active.iter().map(|&i| polys[i].clone()).collect();
    basis.sort_by(|a, b| ring.order.cmp(b.lm(), a.lm()));
    let mut minimal: Vec<MPoly<F::Elem>> = vec![];
    for (k, g) in basis.iter().enumerate() {
        let redundant = basis
            .iter()
            .enumerate()
            .any(|(j, h)| j != k && h.lm().divides(g.lm()) && (h.lm() != g.lm() || j > k));
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut reduced = vec![];
    for k in 0..minimal.len() {
        let others: Vec<MPoly<F::Elem>> = minimal.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, p)| p.clone()).collect();
        let lead = MPoly { terms: vec![minimal[k].terms[0].clone()] };
        let tail = MPoly { terms: minimal[k].terms[1..].to_vec() };
        let r = normal_form(ring, &tail, &others);
        reduced.push(ring.monic(&ring.add(&lead, &r)));
    }
    reduced.sort_by(|a, b| ring.order.cmp(b.lm(), a.lm()));
    reduced
}

/// Dimension of the quotient ring for a Gröbner basis `gb`.
pub fn zerodim_degree<F: Field>(ring: &PolyRing<F>, gb: &[MPoly<F::Elem>]) -> ZeroDim {
    if gb.is_empty() {
        return if ring.nvars == 0 { ZeroDim::Degree(1) } else { ZeroDim::NotZeroDimensional };
    }
    let n = ring.nvars;
    let lms: Vec<Mono> = gb.iter().map(|g| *g.lm()).collect();
    if lms.iter().any(|m| m.degree() == 0) {
        return ZeroDim::Degree(0);
    }
    let mut bound = vec![u32::MAX; n];
    for m in &lms {
        if let Some(i) = m.pure_power() {
            bound[i] = bound[i].min(m.exp(i));
        }
    }
    if bound.iter().any(|&b| b == u32::MAX) {
        return ZeroDim::NotZeroDimensional;
    }
    // count standard monomials inside the box
    let mut count = 0usize;
    let mut e = vec![0u32; n];
    loop {
        let m = Mono::from_exps(&e);
        if !lms.iter().any(|l| l.divides(&m)) {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == n {
                return ZeroDim::Degree(count);
            }
            e[i] += 1;
            if e[i] < bound[i] {
                break;
            }
            e[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{ff_make, Fq, RationalField};

    #[test]
    fn trivial_bases() {
        let r = PolyRing::grevlex(RationalField, 2);
        let (x, y) = (r.var(0), r.var(1));
        let gb = groebner(&r, &[x.clone(), y.clone()]);
        assert_eq!(gb, vec![x.clone(), y.clone()]);
        let gb = groebner(&r, &[x.clone(), r.sub(&x, &r.one())]);
        assert_eq!(gb, vec![r.one()]);
        assert_eq!(zerodim_degree(&r, &gb), ZeroDim::Degree(0));
        let gb = groebner(&r, &[r.mul(&x, &x), y.clone()]);
        assert_eq!(zerodim_degree(&r, &gb), ZeroDim::Degree(2));
        let gb = groebner(&r, &[r.mul(&x, &y)]);
        assert_eq!(zerodim_degree(&r, &gb), ZeroDim::NotZeroDimensional);
    }

    #[test]
    fn four_points_over_f79() {
        let f = Fq::new(&ff_make(79, 1).unwrap()).unwrap();
        let r = PolyRing::grevlex(f, 2);
        let (x, y) = (r.var(0), r.var(1));
        let a = r.sub(&r.mul(&x, &x), &r.one());
        let b = r.sub(&r.mul(&y, &y), &x);
        let gb = groebner(&r, &[a, b]);
        assert_eq!(zerodim_degree(&r, &gb), ZeroDim::Degree(4));
    }
}

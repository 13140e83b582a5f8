//! Small finite groups given by Cayley tables: closure, subgroups,
//! isomorphism search and abelian invariants.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Subset of a group, as a bitmask over element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mask(Vec<u64>);

impl Mask {
    pub fn empty(n: usize) -> Self {
        Mask(vec![0; n.div_ceil(64)])
    }
    pub fn insert(&mut self, i: usize) -> bool {
        let (w, b) = (i / 64, 1u64 << (i % 64));
        let fresh = self.0[w] & b == 0;
        self.0[w] |= b;
        fresh
    }
    pub fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(w, &bits)| (0..64).filter(move |b| bits >> b & 1 == 1).map(move |b| w * 64 + b))
    }
    pub fn is_subset(&self, o: &Mask) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & !b == 0)
    }
}

/// A finite group on {0, …, n−1} with identity 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    pub table: Vec<Vec<u32>>,
    pub inverse: Vec<u32>,
    /// Indices of the generators used to build the group, if any.
    pub gens: Vec<u32>,
}

/// A group realized by concrete elements together with its Cayley table.
#[derive(Clone, Debug)]
pub struct Concrete<T> {
    pub elements: Vec<T>,
    pub group: FiniteGroup,
    /// For each element, a shortest word in the generators (generator indices,
    /// applied left to right as a product g_{w0} g_{w1} …).
    pub words: Vec<Vec<usize>>,
}

impl<T: Clone + Eq + Hash> Concrete<T> {
    /// Closure of `gens` under `mul`; element 0 is `identity`.
    pub fn generate(identity: T, gens: &[T], mul: impl Fn(&T, &T) -> T, cap: usize) -> Result<Self> {
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<T, usize> = HashMap::from([(identity, 0)]);
        let mut words = vec![vec![]];
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for (k, g) in gens.iter().enumerate() {
                let y = mul(&elements[i], g);
                if !index.contains_key(&y) {
                    if elements.len() >= cap {
                        return Err(Error::ClosureBudgetExceeded(cap));
                    }
                    index.insert(y.clone(), elements.len());
                    let mut w = words[i].clone();
                    w.push(k);
                    words.push(w);
                    elements.push(y);
                    queue.push_back(elements.len() - 1);
                }
            }
        }
        let n = elements.len();
        let table: Vec<Vec<u32>> = elements
            .iter()
            .map(|a| {
                elements
                    .iter()
                    .map(|b| {
                        index
                            .get(&mul(a, b))
                            .map(|&i| i as u32)
                            .ok_or_else(|| Error::StructureMismatch("product left the closure".into()))
                    })
                    .collect::<Result<Vec<u32>>>()
            })
            .collect::<Result<_>>()?;
        let inverse = (0..n)
            .map(|i| (0..n).find(|&j| table[i][j] == 0).map(|j| j as u32))
            .collect::<Option<Vec<u32>>>()
            .ok_or_else(|| Error::StructureMismatch("missing inverse".into()))?;
        let gens = gens.iter().map(|g| index[g] as u32).collect();
        Ok(Concrete { elements, group: FiniteGroup { table, inverse, gens }, words })
    }

    pub fn index_of(&self, x: &T) -> Option<usize> {
        self.elements.iter().position(|y| y == x)
    }
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.table.len()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(0, |acc, _| self.mul(acc, a))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Subgroup generated by a set of elements.
    pub fn closure(&self, gens: impl IntoIterator<Item = usize>) -> Mask {
        let mut m = Mask::empty(self.order());
        m.insert(0);
        let gens: Vec<usize> = gens.into_iter().collect();
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for &g in &gens {
                let y = self.mul(x, g);
                if m.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        m
    }

    pub fn join(&self, a: &Mask, b: &Mask) -> Mask {
        if b.is_subset(a) {
            return a.clone();
        }
        if a.is_subset(b) {
            return b.clone();
        }
        self.closure(a.iter().chain(b.iter()))
    }

    pub fn is_normal(&self, s: &Mask) -> bool {
        let gens: Vec<usize> = if self.gens.is_empty() { (0..self.order()).collect() } else { self.gens.iter().map(|&g| g as usize).collect() };
        gens.iter().all(|&g| s.iter().all(|h| s.contains(self.mul(self.mul(self.inv(g), h), g))))
    }

    pub fn conjugate(&self, s: &Mask, g: usize) -> Mask {
        let mut m = Mask::empty(self.order());
        for h in s.iter() {
            m.insert(self.mul(self.mul(self.inv(g), h), g));
        }
        m
    }

    /// All subgroups, by joining cyclic subgroups until stable.
    pub fn subgroups(&self, cap: usize) -> Result<Vec<Mask>> {
        let mut cyclic: Vec<Mask> = (0..self.order()).map(|a| self.closure([a])).collect();
        cyclic.sort();
        cyclic.dedup();
        let mut all: std::collections::BTreeSet<Mask> = cyclic.iter().cloned().collect();
        let mut frontier: Vec<Mask> = cyclic.clone();
        while !frontier.is_empty() {
            let mut next = vec![];
            for s in &frontier {
                for c in &cyclic {
                    if c.is_subset(s) {
                        continue;
                    }
                    let j = self.join(s, c);
                    if all.insert(j.clone()) {
                        if all.len() > cap {
                            return Err(Error::EnumerationTooLarge(format!("more than {cap} subgroups")));
                        }
                        next.push(j);
                    }
                }
            }
            frontier = next;
        }
        let mut v: Vec<Mask> = all.into_iter().collect();
        v.sort_by_key(|m| (m.len(), m.clone()));
        Ok(v)
    }

    /// A small generating set of a subgroup, chosen greedily.
    pub fn generators_of(&self, s: &Mask) -> Vec<usize> {
        let mut els: Vec<usize> = s.iter().collect();
        els.sort_by_key(|&a| std::cmp::Reverse(self.element_order(a)));
        let mut gens = vec![];
        let mut cur = self.closure([]);
        for a in els {
            if cur.len() == s.len() {
                break;
            }
            if !cur.contains(a) {
                gens.push(a);
                cur = self.closure(gens.iter().copied());
            }
        }
        gens
    }

    /// The subgroup as a group in its own right.
    pub fn restrict(&self, s: &Mask) -> FiniteGroup {
        let els: Vec<usize> = std::iter::once(0).chain(s.iter().filter(|&x| x != 0)).collect();
        let pos: HashMap<usize, usize> = els.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let table = els.iter().map(|&a| els.iter().map(|&b| pos[&self.mul(a, b)] as u32).collect()).collect();
        let inverse = els.iter().map(|&a| pos[&self.inv(a)] as u32).collect();
        let gens = self.generators_of(s).into_iter().map(|g| pos[&g] as u32).collect();
        FiniteGroup { table, inverse, gens }
    }

    pub fn commutator_subgroup(&self) -> Mask {
        let n = self.order();
        let comms = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).map(|(a, b)| {
            self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
        });
        self.closure(comms.collect::<Vec<_>>())
    }

    /// Quotient by a normal subgroup.
    pub fn quotient(&self, s: &Mask) -> FiniteGroup {
        let n = self.order();
        let mut coset = vec![usize::MAX; n];
        let mut reps = vec![];
        for a in 0..n {
            if coset[a] == usize::MAX {
                for h in s.iter() {
                    coset[self.mul(a, h)] = reps.len();
                }
                reps.push(a);
            }
        }
        let table = reps.iter().map(|&a| reps.iter().map(|&b| coset[self.mul(a, b)] as u32).collect()).collect();
        let inverse = reps.iter().map(|&a| coset[self.inv(a)] as u32).collect();
        FiniteGroup { table, inverse, gens: vec![] }
    }

    /// Invariant factors of an abelian group (1 is omitted).
    pub fn abelian_invariants(&self) -> Result<Vec<u64>> {
        if !self.is_abelian() {
            return Err(Error::StructureMismatch("group is not abelian".into()));
        }
        let n = self.order() as u64;
        let mut primes = vec![];
        let mut m = n;
        let mut p = 2;
        while m > 1 {
            if m % p == 0 {
                primes.push(p);
                while m % p == 0 {
                    m /= p;
                }
            }
            p += 1;
        }
        // elementary divisors from counts of elements killed by p^k
        let mut elem: Vec<Vec<u64>> = vec![];
        for &p in &primes {
            let mut counts = vec![1u64];
            let mut pk = 1u64;
            loop {
                pk *= p;
                let c = (0..self.order()).filter(|&a| self.pow(a, pk as usize) == 0).count() as u64;
                counts.push(c);
                if c == counts[counts.len() - 2] {
                    break;
                }
            }
            // r_k = log_p(c_k / c_{k-1}) = number of cyclic factors of order ≥ p^k
            let ge: Vec<u32> = counts.windows(2).map(|w| (w[1] / w[0]).ilog(p)).collect();
            let mut factors = vec![];
            for k in 0..ge.len() {
                let exactly = ge[k] - ge.get(k + 1).copied().unwrap_or(0);
                for _ in 0..exactly {
                    factors.push(p.pow(k as u32 + 1));
                }
            }
            factors.sort_unstable_by(|a, b| b.cmp(a));
            elem.push(factors);
        }
        // combine into invariant factors d1 | d2 | …
        let len = elem.iter().map(|v| v.len()).max().unwrap_or(0);
        let mut inv: Vec<u64> = (0..len).map(|i| elem.iter().map(|v| v.get(i).copied().unwrap_or(1)).product()).collect();
        inv.reverse();
        Ok(inv)
    }

    pub fn abelianization(&self) -> Result<Vec<u64>> {
        self.quotient(&self.commutator_subgroup()).abelian_invariants()
    }

    /// Extends `gens ↦ images` to a map, checking it is a well-defined
    /// injective homomorphism into `target`.
    pub fn extend_hom(&self, gens: &[usize], images: &[usize], target: &FiniteGroup) -> Option<Vec<usize>> {
        let n = self.order();
        let mut map = vec![usize::MAX; n];
        map[0] = 0;
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (&g, &h) in gens.iter().zip(images) {
                let y = self.mul(x, g);
                let img = target.mul(map[x], h);
                if map[y] == usize::MAX {
                    map[y] = img;
                    queue.push_back(y);
                } else if map[y] != img {
                    return None;
                }
            }
        }
        if map.contains(&usize::MAX) {
            return None;
        }
        let mut seen = vec![false; target.order()];
        for &m in &map {
            if std::mem::replace(&mut seen[m], true) {
                return None;
            }
        }
        Some(map)
    }

    /// An isomorphism `self → other`, found by backtracking over generator images.
    pub fn isomorphism(&self, other: &FiniteGroup) -> Option<Vec<usize>> {
        if self.order() != other.order() || self.order_profile() != other.order_profile() {
            return None;
        }
        let gens = self.generators_of(&self.closure(0..self.order()));
        let cands: Vec<Vec<usize>> = gens
            .iter()
            .map(|&g| {
                let o = self.element_order(g);
                (0..other.order()).filter(|&h| other.element_order(h) == o).collect()
            })
            .collect();
        let mut chosen = vec![];
        self.iso_search(other, &gens, &cands, &mut chosen)
    }

    fn iso_search(&self, other: &FiniteGroup, gens: &[usize], cands: &[Vec<usize>], chosen: &mut Vec<usize>) -> Option<Vec<usize>> {
        if chosen.len() == gens.len() {
            return self.extend_hom(gens, chosen, other);
        }
        let k = chosen.len();
        for &h in &cands[k] {
            // partial check: the subgroup generated so far must map consistently
            chosen.push(h);
            let sub = self.restrict_check(gens, chosen, other);
            if sub {
                if let Some(m) = self.iso_search(other, gens, cands, chosen) {
                    return Some(m);
                }
            }
            chosen.pop();
        }
        None
    }

    /// Consistency of the partial assignment on ⟨g₁, …, g_k⟩.
    fn restrict_check(&self, gens: &[usize], images: &[usize], other: &FiniteGroup) -> bool {
        let k = images.len();
        let sub = self.closure(gens[..k].iter().copied());
        let mut map: HashMap<usize, usize> = HashMap::from([(0, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (&g, &h) in gens[..k].iter().zip(images) {
                let y = self.mul(x, g);
                let img = other.mul(map[&x], h);
                match map.get(&y) {
                    None => {
                        map.insert(y, img);
                        queue.push_back(y);
                    }
                    Some(&v) if v != img => return false,
                    _ => {}
                }
            }
        }
        let mut imgs: Vec<usize> = map.values().copied().collect();
        imgs.sort_unstable();
        imgs.dedup();
        imgs.len() == sub.len()
    }

    /// Sorted multiset of element orders.
    pub fn order_profile(&self) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.order()).map(|a| self.element_order(a)).collect();
        v.sort_unstable();
        v
    }
}

/// Permutations of {0..k} composed as functions: (a·b)(i) = a(b(i)).
fn perm_group(gens: &[Vec<u8>]) -> FiniteGroup {
    let k = gens[0].len();
    let id: Vec<u8> = (0..k as u8).collect();
    Concrete::generate(id, gens, |a, b| b.iter().map(|&i| a[i as usize]).collect(), 100_000)
        .expect("small permutation group")
        .group
}

pub fn cyclic(n: usize) -> FiniteGroup {
    let g: Vec<u8> = (0..n).map(|i| ((i + 1) % n) as u8).collect();
    perm_group(&[g])
}

pub fn symmetric3() -> FiniteGroup {
    perm_group(&[vec![1, 0, 2], vec![1, 2, 0]])
}

/// Dihedral group of order 2n.
pub fn dihedral(n: usize) -> FiniteGroup {
    let rot: Vec<u8> = (0..n).map(|i| ((i + 1) % n) as u8).collect();
    let refl: Vec<u8> = (0..n).map(|i| ((n - i) % n) as u8).collect();
    perm_group(&[rot, refl])
}

pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> FiniteGroup {
    let (n, m) = (a.order(), b.order());
    let table = (0..n * m)
        .map(|x| (0..n * m).map(|y| (a.mul(x / m, y / m) * m + b.mul(x % m, y % m)) as u32).collect())
        .collect();
    let inverse = (0..n * m).map(|x| (a.inv(x / m) * m + b.inv(x % m)) as u32).collect();
    FiniteGroup { table, inverse, gens: vec![] }
}

pub fn product_of(parts: &[FiniteGroup]) -> FiniteGroup {
    parts[1..].iter().fold(parts[0].clone(), |acc, p| direct_product(&acc, p))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_and_invariants() {
        assert_eq!(symmetric3().order(), 6);
        assert_eq!(dihedral(4).order(), 8);
        let g = product_of(&[cyclic(2), cyclic(2), cyclic(6)]);
        assert_eq!(g.abelian_invariants().unwrap(), vec![2, 2, 6]);
        assert_eq!(product_of(&[cyclic(4), cyclic(6)]).abelian_invariants().unwrap(), vec![2, 12]);
        assert_eq!(symmetric3().abelianization().unwrap(), vec![2]);
        assert_eq!(dihedral(4).abelianization().unwrap(), vec![2, 2]);
    }

    #[test]
    fn isomorphisms() {
        assert!(cyclic(6).isomorphism(&direct_product(&cyclic(2), &cyclic(3))).is_some());
        assert!(cyclic(4).isomorphism(&direct_product(&cyclic(2), &cyclic(2))).is_none());
        assert!(cyclic(6).isomorphism(&symmetric3()).is_none());
        // D4 and the quaternion-free order-8 groups with equal order profiles
        let d4 = dihedral(4);
        assert!(d4.isomorphism(&d4).is_some());
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(symmetric3().subgroups(100).unwrap().len(), 6);
        assert_eq!(dihedral(4).subgroups(100).unwrap().len(), 10);
        let s3 = symmetric3();
        let normal = s3.subgroups(100).unwrap().into_iter().filter(|s| s3.is_normal(s)).count();
        assert_eq!(normal, 3);
    }
}

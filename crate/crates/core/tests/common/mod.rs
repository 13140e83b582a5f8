#![allow(dead_code)]

use std::sync::OnceLock;

use k3pic::cohomology::GroupRep;
use k3pic::field::{QPoly, RatFunc, SymElem, SYM_DIM};
use k3pic::indexcheck::Certificate;
use k3pic::latbuild::SmallMat;
use k3pic::pipeline::{build_lattice, LatticeBuild, RunConfig};
use k3pic::stages::small_gram;
use rand::Rng;

pub fn build() -> &'static LatticeBuild {
    static B: OnceLock<LatticeBuild> = OnceLock::new();
    B.get_or_init(|| build_lattice(&RunConfig::default()).expect("lattice build"))
}

pub fn certificate() -> &'static Certificate {
    static C: OnceLock<Certificate> = OnceLock::new();
    C.get_or_init(|| build().index_certificate().expect("certificate"))
}

pub fn gram() -> SmallMat {
    small_gram(build()).expect("small gram")
}

pub fn galois() -> &'static GroupRep {
    static G: OnceLock<GroupRep> = OnceLock::new();
    G.get_or_init(|| GroupRep::generate(&build().gal_gens, Some(&gram()), 10_000).expect("galois image"))
}

/// A sparse element of L with small coefficients in ℚ[t].
pub fn random_sym(rng: &mut impl Rng) -> SymElem {
    let mut e = SymElem::zero();
    for _ in 0..3 {
        let i = rng.gen_range(0..SYM_DIM);
        let num: Vec<i64> = (0..3).map(|_| rng.gen_range(-5..=5)).collect();
        let den = rng.gen_range(1..=5);
        let c = RatFunc::new(QPoly::from_i64s(&num), QPoly::from_i64s(&[den]));
        e = e.add(&SymElem::basis(i).scale_ratfunc(&c));
    }
    e
}

/// A random symmetric nondegenerate integer matrix.
pub fn random_symmetric(rng: &mut impl Rng, n: usize) -> SmallMat {
    loop {
        let mut m = vec![vec![0i64; n]; n];
        for i in 0..n {
            for j in i..n {
                let v = rng.gen_range(-4..=4);
                m[i][j] = v;
                m[j][i] = v;
            }
        }
        if !k3pic::lattice::matrix::det(&k3pic::lattice::matrix::to_imat(&m)).eq(&0.into()) {
            return m;
        }
    }
}

/// A random unimodular matrix as a product of elementary operations.
pub fn random_unimodular(rng: &mut impl Rng, n: usize) -> SmallMat {
    let mut u = k3pic::latbuild::identity_small(n);
    for _ in 0..3 * n {
        let (i, j) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if i == j {
            u[i].iter_mut().for_each(|x| *x = -*x);
            continue;
        }
        let f = rng.gen_range(-2..=2);
        let rj = u[j].clone();
        for (a, b) in u[i].iter_mut().zip(rj) {
            *a += f * b;
        }
    }
    u
}

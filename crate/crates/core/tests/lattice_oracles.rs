mod common;

use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use k3pic::field::Rat;
use k3pic::latbuild::{mat_mul_small, SmallMat};
use k3pic::lattice::matrix::{det, signature, smith, to_imat, transpose};
use k3pic::lattice::{
    direct_sum, finite_qform_isomorphic, index_relation, mod_rat, named_lattice, nikulin_equivalent, IntLattice, Named, NikulinResult,
};

fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| x.into()).collect()
}

fn congruent(l: &IntLattice, u: &SmallMat) -> IntLattice {
    let g: SmallMat = l.gram.iter().map(|r| r.iter().map(|x| i64::try_from(x).unwrap()).collect()).collect();
    IntLattice::from_i64(&mat_mul_small(&transpose(u), &mat_mul_small(&g, u))).unwrap()
}

#[test]
fn named_determinants() {
    assert_eq!(named_lattice(Named::E8(1)).unwrap().det(), 1.into());
    assert_eq!(named_lattice(Named::E8(-1)).unwrap().signature(), (0, 8));
    assert_eq!(named_lattice(Named::U).unwrap().det(), (-1).into());
    for n in 1..8 {
        let a = named_lattice(Named::A(n, 1)).unwrap();
        assert_eq!(a.det(), BigInt::from(n as i64 + 1));
        assert_eq!(a.signature(), (n, 0));
        assert!(a.is_even());
    }
}

#[test]
fn scaled_a2_discriminant() {
    let l = named_lattice(Named::A(2, -4)).unwrap();
    assert_eq!(l.det(), 48.into());
    assert_eq!(l.discriminant_group().orders, big(&[4, 12]));
    assert_eq!(smith(&l.gram).0, big(&[4, 12]));
}

#[test]
fn a2_forms_of_opposite_sign_differ() {
    let a = named_lattice(Named::A(2, 1)).unwrap().discriminant_form().unwrap();
    let b = named_lattice(Named::A(2, -1)).unwrap().discriminant_form().unwrap();
    assert_eq!(a.orders, b.orders);
    assert!(!finite_qform_isomorphic(&a, &b).unwrap());
    assert!(finite_qform_isomorphic(&a, &a).unwrap());
}

#[test]
fn unimodular_change_of_basis_is_recognized() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let l = [Named::U, Named::E8(-1), Named::A(2, -1), Named::A(3, -1)]
        .iter()
        .map(|&n| named_lattice(n).unwrap())
        .reduce(|a, b| direct_sum(&a, &b))
        .unwrap();
    for _ in 0..3 {
        let u = common::random_unimodular(&mut rng, l.rank());
        let m = congruent(&l, &u);
        assert_ne!(m.gram, l.gram);
        assert_eq!(nikulin_equivalent(&l, &m).unwrap(), NikulinResult::Certified(true));
    }
}

#[test]
fn criterion_outside_its_range() {
    let a = named_lattice(Named::A(2, 1)).unwrap();
    assert!(matches!(nikulin_equivalent(&a, &congruent(&a, &vec![vec![1, 1], vec![0, 1]])).unwrap(), NikulinResult::CriterionInapplicable(_)));
    let u = named_lattice(Named::U).unwrap();
    let x = direct_sum(&u, &named_lattice(Named::A(2, 1)).unwrap());
    let y = direct_sum(&u, &named_lattice(Named::A(2, -1)).unwrap());
    assert_eq!(nikulin_equivalent(&x, &y).unwrap(), NikulinResult::Certified(false));
}

/// q on A ⊕ B takes the values q_A(a) + q_B(b) mod 2.
#[test]
fn discriminant_form_is_additive() {
    let a = named_lattice(Named::A(2, -1)).unwrap();
    let b = named_lattice(Named::A(3, 1)).unwrap();
    let values = |l: &IntLattice| -> Vec<Rat> {
        let f = l.discriminant_form().unwrap();
        let mut v: Vec<Rat> = f.elements().unwrap().iter().map(|x| mod_rat(&f.q_of(x), 2)).collect();
        v.sort();
        v
    };
    let (va, vb) = (values(&a), values(&b));
    let mut sums: Vec<Rat> = va.iter().flat_map(|x| vb.iter().map(move |y| mod_rat(&(x + y), 2))).collect();
    sums.sort();
    assert_eq!(values(&direct_sum(&a, &b)), sums);
}

#[test]
fn index_of_sublattice() {
    let e8 = named_lattice(Named::E8(1)).unwrap();
    let mut basis = k3pic::lattice::matrix::identity(8);
    basis[0][0] = 3.into();
    basis[1][1] = 2.into();
    basis[1][0] = 1.into();
    assert_eq!(index_relation(&e8, &basis).unwrap(), 6.into());
}

fn symmetric(n: usize) -> impl Strategy<Value = SmallMat> {
    proptest::collection::vec(-4i64..=4, n * (n + 1) / 2).prop_map(move |e| {
        let mut m = vec![vec![0; n]; n];
        let mut k = 0;
        for i in 0..n {
            for j in i..n {
                m[i][j] = e[k];
                m[j][i] = e[k];
                k += 1;
            }
        }
        m
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_product_is_det(m in (2usize..6).prop_flat_map(symmetric)) {
        let d = det(&to_imat(&m));
        let prod: BigInt = smith(&to_imat(&m)).0.iter().product();
        prop_assert_eq!(prod.abs(), d.abs());
    }

    #[test]
    fn invariants_under_congruence(m in (2usize..6).prop_flat_map(symmetric), seed in any::<u64>()) {
        prop_assume!(det(&to_imat(&m)) != BigInt::from(0));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = common::random_unimodular(&mut rng, m.len());
        let l = IntLattice::from_i64(&m).unwrap();
        let c = congruent(&l, &u);
        prop_assert_eq!(c.det(), l.det());
        prop_assert_eq!(c.signature(), l.signature());
        prop_assert_eq!(signature(&to_imat(&m)).0 + signature(&to_imat(&m)).1, m.len());
        prop_assert_eq!(c.discriminant_group().orders, l.discriminant_group().orders);
        prop_assert_eq!(l.discriminant_group().size(), l.det().abs());
    }
}

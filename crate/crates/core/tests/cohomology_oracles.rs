mod common;

use k3pic::cohomology::{
    coinduced, coinduced_quotient, fixed_sublattice, h1, h1_cyclic, h2_bockstein, h2_cyclic, restriction_injective, subgroup_of_order,
};

fn order(v: &[u64]) -> u64 {
    v.iter().product()
}

#[test]
fn cyclic_formulas_on_every_cyclic_subgroup() {
    let gal = common::galois();
    for g in 1..gal.order() {
        let c = gal.cyclic_subgroup(g);
        let gen = c.gens[0];
        assert_eq!(h1(&c).unwrap().invariants, h1_cyclic(&c, gen).unwrap(), "element {g}");
        assert_eq!(h2_bockstein(&c).unwrap().invariants, h2_cyclic(&c, gen).unwrap(), "element {g}");
    }
}

#[test]
fn dimension_shift_matches_bockstein() {
    let gal = common::galois();
    for n in [4, 6, 8] {
        let s = subgroup_of_order(gal, n).unwrap().expect("subgroup exists");
        let sub = gal.subgroup(&s);
        let shifted = coinduced_quotient(&sub);
        assert!(shifted.is_homomorphism());
        assert_eq!(h1(&shifted).unwrap().invariants, h2_bockstein(&sub).unwrap().invariants, "order {n}");
    }
}

#[test]
fn coinduced_module_is_acyclic() {
    let gal = common::galois();
    let s = subgroup_of_order(gal, 8).unwrap().unwrap();
    let c = coinduced(&gal.subgroup(&s));
    assert!(c.is_homomorphism());
    assert!(h1(&c).unwrap().invariants.is_empty());
    assert!(h2_bockstein(&c).unwrap().invariants.is_empty());
}

#[test]
fn restriction_to_sylow_subgroups() {
    let gal = common::galois();
    let p2 = subgroup_of_order(gal, 32).unwrap().unwrap();
    assert!(restriction_injective(gal, &p2).unwrap());
    let p3 = subgroup_of_order(gal, 3).unwrap().unwrap();
    assert!(!restriction_injective(gal, &p3).unwrap());
    assert!(h1(&gal.subgroup(&p3)).unwrap().invariants.is_empty());
}

#[test]
fn subgroups_fix_more_and_annihilate_cohomology() {
    let gal = common::galois();
    let full = fixed_sublattice(gal).unwrap().len();
    for s in gal.group.subgroups(10_000).unwrap().iter().filter(|s| s.len() <= 16) {
        let sub = gal.subgroup(s);
        assert!(fixed_sublattice(&sub).unwrap().len() >= full);
        let n = s.len() as u64;
        for f in h1(&sub).unwrap().invariants {
            assert_eq!(n % f, 0);
        }
        for f in h2_bockstein(&sub).unwrap().invariants {
            assert_eq!(n % f, 0);
        }
    }
}

#[test]
fn whole_group() {
    let gal = common::galois();
    assert_eq!(order(&h1(gal).unwrap().invariants), 8);
    assert_eq!(order(&h2_bockstein(gal).unwrap().invariants), 1024);
}

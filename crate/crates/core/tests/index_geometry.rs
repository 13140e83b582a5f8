mod common;

use k3pic::indexcheck::verify_certificate;
use k3pic::latbuild::apply;

fn diff(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn mod2(v: &[i64]) -> Vec<i64> {
    v.iter().map(|x| x.rem_euclid(2)).collect()
}

const PAIRS: [(&str, &str); 3] = [
    ("psi(0,3,0)*B3", "B3"),
    ("psi(0,3,0)*B4", "B4"),
    ("tau2^2*psi(x,y)*psi(0,3,0)*B4", "tau2^2*psi(x,y)*B4"),
];

#[test]
fn witness_differences_have_norm_minus_eight() {
    let b = common::build();
    for (x, y) in PAIRS {
        let e = diff(&b.class_of_word(x).unwrap().class, &b.class_of_word(y).unwrap().class);
        assert_eq!(b.lattice.norm(&e), (-8).into(), "{x} - {y}");
        assert_eq!(b.lattice.dot(&b.hyperplane, &e), 0.into());
        assert!(e.iter().any(|v| v % 2 != 0));
    }
}

#[test]
fn third_witness_is_sum_of_first_two_mod_two() {
    let b = common::build();
    let es: Vec<Vec<i64>> = PAIRS
        .iter()
        .map(|(x, y)| diff(&b.class_of_word(x).unwrap().class, &b.class_of_word(y).unwrap().class))
        .collect();
    let s: Vec<i64> = es[0].iter().zip(&es[1]).map(|(a, c)| a + c).collect();
    assert_eq!(mod2(&s), mod2(&es[2]));
    assert_ne!(mod2(&es[0]), mod2(&es[1]));
}

/// Moving each witness curve by an automorphism and recomputing its class from
/// the moved curve agrees with the generator matrix.
#[test]
fn automorphisms_act_on_witnesses_as_their_matrices() {
    let b = common::build();
    for g in b.all_gens() {
        for (x, y) in PAIRS {
            let gx = b.class_of_word(&format!("{}*{x}", g.name)).unwrap().class;
            let gy = b.class_of_word(&format!("{}*{y}", g.name)).unwrap().class;
            let e = diff(&b.class_of_word(x).unwrap().class, &b.class_of_word(y).unwrap().class);
            assert_eq!(diff(&gx, &gy), apply(&g.matrix, &e), "{} on {x} - {y}", g.name);
        }
    }
}

/// H fixes each witness class mod 2; Galois elements permute them.
#[test]
fn h_fixes_two_torsion_classes_and_galois_moves_them() {
    let b = common::build();
    let es: Vec<Vec<i64>> = PAIRS
        .iter()
        .map(|(x, y)| diff(&b.class_of_word(x).unwrap().class, &b.class_of_word(y).unwrap().class))
        .collect();
    for g in &b.h_gens {
        for e in &es {
            assert_eq!(mod2(&apply(&g.matrix, e)), mod2(e), "{}", g.name);
        }
    }
    let moved = b.gal_gens.iter().any(|g| es.iter().any(|e| mod2(&apply(&g.matrix, e)) != mod2(e)));
    assert!(moved);
}

#[test]
fn certificate_rejects_tampering() {
    let cert = common::certificate();
    assert!(verify_certificate(cert).is_ok());

    let mut c = cert.clone();
    c.gram[2][2] = -4;
    assert!(verify_certificate(&c).is_err());

    let mut c = cert.clone();
    c.witnesses[1].e_norm = -6;
    assert!(verify_certificate(&c).is_err());

    let mut c = cert.clone();
    c.verdict = "index 2".into();
    assert!(verify_certificate(&c).is_err());

    let mut c = cert.clone();
    c.witnesses.clear();
    let err = verify_certificate(&c).unwrap_err().to_string();
    assert!(err.contains("candidate"), "{err}");
}

//! One line per acceptance criterion; exits non-zero if any fails.

mod common;

use std::collections::BTreeSet;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use k3pic::cohomology::{fixed_sublattice, h1, h1_cyclic, h2_bockstein, h2_cyclic, subgroup_sweep};
use k3pic::field::{embedding_search, ff_make, rat, sym_embed, Field, Fq};
use k3pic::indexcheck::{verify_certificate, Certificate, VERDICT};
use k3pic::intersect::intersection_number;
use k3pic::latbuild::{mat_mul_small, SmallMat};
use k3pic::lattice::matrix::{det, signature, smith, to_imat, transpose};
use k3pic::lattice::{nikulin_equivalent, target_lattice, IntLattice, NikulinResult};
use k3pic::pipeline::SubgroupMode;
use k3pic::stages::{index_summary, second_prime_pairs};
use k3pic::surface::fibers::{classify_fiber, node_candidates, FiberKind};
use k3pic::surface::inose::verify_inose;
use k3pic::surface::structure::{galois_group, group_abstract_check, h_group};
use k3pic::surface::tritangent::tritangent_check;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(checks: Vec<(&str, bool, String)>) -> Outcome {
    let pass = checks.iter().all(|c| c.1);
    let detail = checks
        .iter()
        .map(|(n, ok, d)| format!("{}{n}{}", if *ok { "" } else { "NOT " }, if d.is_empty() { String::new() } else { format!(" [{d}]") }))
        .collect::<Vec<_>>()
        .join("; ");
    Outcome { pass, detail }
}

fn main_invariants() -> Outcome {
    let b = common::build();
    let lat = b.lattice.lattice().unwrap();
    let inv = lat.invariants();
    let orders: Vec<i64> = lat.discriminant_group().orders.iter().map(|x| x.to_i64().unwrap()).collect();
    let t: f64 = b.timings.iter().map(|x| x.1).sum();
    outcome(vec![
        ("rank 19", inv.rank == 19, inv.rank.to_string()),
        ("signature (1,18)", inv.signature == (1, 18), format!("{:?}", inv.signature)),
        ("|det| = 864", inv.det.abs() == BigInt::from(864), inv.det.to_string()),
        ("Z/6 x Z/12 x Z/12", orders == [6, 12, 12], format!("{orders:?}")),
        ("within 30 min", t < 1800.0, format!("{t:.1} s for orbit, intersections and isometries")),
    ])
}

fn nikulin() -> Outcome {
    let lat = common::build().lattice.lattice().unwrap();
    let res = nikulin_equivalent(&lat, &target_lattice()).unwrap();
    let len = lat.discriminant_group().length();
    let margin = format!("{len}<{}={}-2", lat.rank() - 2, lat.rank());
    outcome(vec![
        ("Certified(true)", res == NikulinResult::Certified(true), format!("{res:?}")),
        ("l(A) = 3", len == 3, len.to_string()),
        ("3<17=19-2", margin == "3<17=19-2", margin),
    ])
}

fn index() -> Outcome {
    let b = common::build();
    let cert = common::certificate();
    let s = index_summary(b, cert);
    let h2 = s.h_orbits.get(&2).cloned().unwrap_or_default();
    let g2 = s.g_orbits.get(&2).cloned().unwrap_or_default();
    let p2 = cert.primes.iter().find(|r| r.p == 2).unwrap();
    let covered = p2.span.iter().all(|v| {
        cert.witnesses.iter().any(|w| {
            let e: Vec<i64> = w.classes.0.iter().zip(&w.classes.1).map(|(a, c)| a - c).collect();
            let reduces = e.iter().zip(v).all(|(x, y)| x.rem_euclid(2) as u8 == *y);
            &w.target == v && reduces && b.lattice.norm(&e) == BigInt::from(-8) && b.lattice.dot(&b.hyperplane, &e) == BigInt::from(0)
        })
    });
    outcome(vec![
        (
            "p=2: exactly one nontrivial H-orbit in M2, spanning dimension 2",
            h2.len() == 1 && h2[0].1 == 2,
            format!("H-orbits (size, span) {h2:?}; G-orbits {g2:?}"),
        ),
        ("witnesses with E^2 = -8, l.E = 0 obstruct every nonzero element", covered, format!("{} elements, {} witnesses", p2.span.len(), cert.witnesses.len())),
        ("p=3: no candidate with orbit span <= 1", s.candidates.get(&3) == Some(&0), format!("|M3| = {:?}", s.mp_sizes.get(&3))),
        ("verdict Pic = Lambda", cert.verdict == VERDICT && verify_certificate(cert).is_ok(), cert.verdict.clone()),
    ])
}

fn galois() -> Outcome {
    let st = group_abstract_check().unwrap();
    let b = common::build();
    let gal = common::galois();
    let perm = galois_group().unwrap();
    let hg = h_group().unwrap();
    let h_img = k3pic::cohomology::GroupRep::generate(&b.h_gens, Some(&common::gram()), 10_000).unwrap();
    let iso = |a: &k3pic::group::FiniteGroup, t: &k3pic::cohomology::GroupRep| {
        let gens: Vec<usize> = a.gens.iter().map(|&x| x as usize).collect();
        a.order() == t.order()
            && a.extend_hom(&gens, &t.gens, &t.group).is_some_and(|m| m.iter().collect::<BTreeSet<_>>().len() == m.len())
    };
    outcome(vec![
        ("|Gal image| = 96", gal.order() == 96 && st.gal_order == 96, gal.order().to_string()),
        ("Gal = S3 x Z/2 x D4", st.gal_is_s3_c2_d4, String::new()),
        ("|H image| = 144", h_img.order() == 144 && st.h_order == 144, h_img.order().to_string()),
        ("H = S3 x| ((Z/2)^2 x Z/6)", st.semidirect && st.n_invariants == [2, 2, 6], format!("{:?}", st.n_invariants)),
        ("Gal faithful", iso(&perm.group, gal) && gal.is_homomorphism(), String::new()),
        ("H faithful", iso(&hg.group, &h_img) && h_img.is_homomorphism(), String::new()),
    ])
}

fn cohomology() -> Outcome {
    let b = common::build();
    let gal = common::galois();
    let h0 = fixed_sublattice(gal).unwrap();
    let h1g = h1(gal).unwrap().invariants;
    let h2g = h2_bockstein(gal).unwrap().invariants;
    let normal = subgroup_sweep(gal, SubgroupMode::Normal).unwrap();
    let all = subgroup_sweep(gal, SubgroupMode::All).unwrap();
    let allowed: BTreeSet<usize> = [0, 1, 2, 3, 4, 5, 6, 8, 10, 12].into();
    let exps = &all.elementary_two_exponents;
    let neg_l: Vec<i64> = b.hyperplane.iter().map(|x| -x).collect();
    outcome(vec![
        ("H0 = Z.l", h0.len() == 1 && (h0[0] == b.hyperplane || h0[0] == neg_l), String::new()),
        ("H1 = (Z/2)^3", h1g == [2, 2, 2], format!("{h1g:?}")),
        ("H2 = (Z/2)^10", h2g == [2; 10], format!("{h2g:?}")),
        (
            "49 trivial / 47 nontrivial H1",
            normal.trivial_h1 == 49 && normal.nontrivial_h1 == 47,
            format!("{} / {} over non-trivial normal subgroups", normal.trivial_h1, normal.nontrivial_h1),
        ),
        (
            "every H1 is (Z/2)^i, i in {0,1,2,3,4,5,6,8,10,12}",
            all.all_elementary_two && exps.is_subset(&allowed),
            format!("{} subgroups, i in {exps:?}", all.subgroups.len()),
        ),
    ])
}

fn geometry() -> Outcome {
    let f79 = ff_make(79, 1).unwrap();
    let fq = Fq::new(&f79).unwrap();
    let m3 = classify_fiber(&rat(-3, 1), &f79).unwrap();
    let expected: BTreeSet<[u32; 3]> = node_candidates(&fq, 0).unwrap().into_iter().collect();
    let found: BTreeSet<[u32; 3]> = m3.points.iter().copied().collect();
    let s7 = classify_fiber(&rat(7, 1), &f79).unwrap();
    let lines = |t: i64| tritangent_check(&rat(t, 1), &f79).unwrap().lines;
    let (l0, l5, l7) = (lines(0), lines(-5), lines(7));
    outcome(vec![
        ("t=-3: 12 nodes at the stated points", m3.kind == FiberKind::Nodal && m3.nodes == 12 && found == expected, format!("{} nodes", m3.nodes)),
        ("t=7 smooth", s7.kind == FiberKind::Smooth, format!("{:?}", s7.kind)),
        ("tritangents at t in {0,-5}, none at 7", l0 > 0 && l5 > 0 && l7 == 0, format!("{l0}, {l5}, {l7} lines")),
        ("Inose identities", verify_inose().unwrap_or(false), String::new()),
    ])
}

fn properties() -> Outcome {
    let b = common::build();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let bitangent = b.orbit.curves.iter().all(|c| c.is_bitangent());

    let f = &b.ctx.fq;
    let mut hom = true;
    for _ in 0..100 {
        let (x, y) = (common::random_sym(&mut rng), common::random_sym(&mut rng));
        let (ex, ey) = (sym_embed(&x, &b.ctx).unwrap(), sym_embed(&y, &b.ctx).unwrap());
        hom &= sym_embed(&x.mul(&y), &b.ctx).unwrap() == f.mul(&ex, &ey);
        hom &= sym_embed(&x.add(&y), &b.ctx).unwrap() == f.add(&ex, &ey);
    }

    let g = common::gram();
    let isometries = b.all_gens().iter().all(|r| mat_mul_small(&transpose(&r.matrix), &mat_mul_small(&g, &r.matrix)) == g);

    let h = h_group().unwrap();
    let n = b.orbit.len();
    let mut sym_inv = true;
    for _ in 0..20 {
        let ij = sample(&mut rng, n, 2);
        let (c1, c2) = (&b.orbit.curves[ij.index(0)], &b.orbit.curves[ij.index(1)]);
        let psi = &h.elements[rng.gen_range(0..h.elements.len())];
        let v = intersection_number(c1, c2, &b.ctx).unwrap();
        sym_inv &= v == intersection_number(c2, c1, &b.ctx).unwrap();
        sym_inv &= v == intersection_number(&psi.apply(c1), &psi.apply(c2), &b.ctx).unwrap();
        sym_inv &= v == b.lattice.matrix[ij.index(0)][ij.index(1)];
    }

    let (q_desc, _) = embedding_search(&rat(7, 1), 80).unwrap();
    let pairs = second_prime_pairs(b, &rat(7, 1), q_desc.p, 10, 7).unwrap();
    let second = pairs.iter().all(|p| p.2 == p.3);

    let mut lattices = true;
    for k in 0..50 {
        let n = 2 + k % 5;
        let m = common::random_symmetric(&mut rng, n);
        let u = common::random_unimodular(&mut rng, n);
        let mu: SmallMat = mat_mul_small(&transpose(&u), &mat_mul_small(&m, &u));
        let (d, _, _) = smith(&to_imat(&m));
        let prod: BigInt = d.iter().product();
        let dm = det(&to_imat(&m));
        let (pos, neg) = signature(&to_imat(&m));
        lattices &= prod == dm.abs();
        lattices &= smith(&to_imat(&mu)).0 == d && det(&to_imat(&mu)) == dm;
        lattices &= signature(&to_imat(&mu)) == (pos, neg) && pos + neg == n;
        lattices &= (neg % 2 == 1) == dm.is_negative();
        lattices &= IntLattice::from_i64(&m).unwrap().discriminant_group().size() == dm.abs();
    }

    let gal = common::galois();
    let mut cyclic = true;
    let mut seen = BTreeSet::new();
    for e in 1..gal.order() {
        let c = gal.group.closure([e]);
        if !seen.insert(c.clone()) {
            continue;
        }
        let sub = gal.subgroup(&c);
        let gen = sub.gens[0];
        cyclic &= h1(&sub).unwrap().invariants == h1_cyclic(&sub, gen).unwrap();
        cyclic &= h2_bockstein(&sub).unwrap().invariants == h2_cyclic(&sub, gen).unwrap();
    }

    outcome(vec![
        ("orbit divisors bitangent", bitangent, format!("{n} divisors")),
        ("embedding is a ring map", hom, "100 random pairs".into()),
        ("generators are isometries", isometries, String::new()),
        ("intersections symmetric and H-invariant", sym_inv, "20 random pairs".into()),
        ("second-prime agreement", second, format!("10 pairs at p = {}", q_desc.p)),
        ("SNF/det/signature consistency", lattices, "50 random lattices".into()),
        ("cyclic cohomology formulas", cyclic, format!("{} cyclic subgroups", seen.len())),
    ])
}

fn round_trip() -> Outcome {
    let cert = common::certificate();
    let text = serde_json::to_string(cert).unwrap();
    let fresh: Certificate = serde_json::from_str(&text).unwrap();

    let mut flipped = fresh.clone();
    flipped.gram[0][1] += 1;
    flipped.gram[1][0] += 1;

    let mut removed = fresh.clone();
    removed.witnesses.pop();
    let removed_err = verify_certificate(&removed).err().map(|e| e.to_string()).unwrap_or_default();

    let mut pairing = fresh.clone();
    pairing.witnesses[0].pairing = 1;

    outcome(vec![
        ("fresh accepted", verify_certificate(&fresh).is_ok(), String::new()),
        ("flipped intersection value rejected", verify_certificate(&flipped).is_err(), String::new()),
        ("removed witness rejected, candidate named", removed_err.contains("candidate"), removed_err),
        ("altered witness pairing rejected", verify_certificate(&pairing).is_err(), String::new()),
    ])
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("main theorem invariants", main_invariants),
        ("Nikulin classification", nikulin),
        ("index verification", index),
        ("Galois structure", galois),
        ("cohomology", cohomology),
        ("geometry checks", geometry),
        ("property suites", properties),
        ("certificate round-trip", round_trip),
    ];
    let mut failed = vec![];
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = f();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {} {verdict} {name} ({:.1} s): {}", k + 1, start.elapsed().as_secs_f64(), o.detail);
        if !o.pass {
            failed.push(k + 1);
        }
    }
    if !failed.is_empty() {
        println!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}

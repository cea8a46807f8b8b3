use moufang::burnside::build_burnside;
use moufang::loop_core::{
    associator, check_loop_axioms_sampled, commutative_center, commutator, is_normal, is_normal_with, nucleus,
    quotient, subloop_closure, CertificateRecord, ElementaryAbelian, FiniteLoop, NormalityMethod, NormalityOptions,
    Subloop, TableLoop,
};
use moufang::poly_loop::{PolyLoop, Vec11};
use moufang::triplication::build_triplication;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_loops() -> Vec<TableLoop> {
    let b32 = build_burnside(2).unwrap();
    vec![
        TableLoop::from_loop(&ElementaryAbelian::new(3)).unwrap(),
        TableLoop::from_loop(&b32).unwrap(),
        TableLoop::from_loop(&build_triplication(ElementaryAbelian::new(2)).unwrap()).unwrap(),
        TableLoop::from_loop(&build_triplication(b32).unwrap()).unwrap(),
    ]
}

/// Centers plus subloops generated by a few seeded pairs.
fn candidate_subloops(l: &TableLoop) -> Vec<Subloop<u32>> {
    let mut out = vec![commutative_center(l).unwrap(), nucleus(l).unwrap()];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..6 {
        let gens: Vec<u32> = (0..rng.gen_range(1..3)).map(|_| rng.gen_range(0..l.order() as u32)).collect();
        out.push(subloop_closure(l, &gens));
    }
    out
}

#[test]
fn complete_strategies_agree() {
    let opts = NormalityOptions { samples: 2_000, seed: 11 };
    for l in small_loops() {
        for s in candidate_subloops(&l) {
            let congruence = is_normal_with(&l, &s, NormalityMethod::Congruence, opts).unwrap();
            let scan = is_normal_with(&l, &s, NormalityMethod::InnerMapScan, opts).unwrap();
            let default = is_normal(&l, &s, opts).unwrap();
            assert_eq!(congruence.normal, scan.normal, "{} in {}", s.label(), l.describe());
            assert_eq!(congruence.normal, default.normal, "{} in {}", s.label(), l.describe());
            for partial in [NormalityMethod::Probe, NormalityMethod::Randomized] {
                let v = is_normal_with(&l, &s, partial, opts).unwrap();
                assert!(v.normal || !congruence.normal, "{partial} refuted a normal subloop");
            }
        }
    }
}

#[test]
fn certificates_reverify_and_roundtrip() {
    let opts = NormalityOptions::default();
    let mut seen = 0;
    for l in small_loops() {
        for s in candidate_subloops(&l) {
            let v = is_normal(&l, &s, opts).unwrap();
            let Some(cert) = v.certificate else { continue };
            seen += 1;
            assert!(cert.verify(&l, &s));
            assert!(!s.contains(&cert.image));
            let json = serde_json::to_string(&cert.record(&l)).unwrap();
            let back: CertificateRecord = serde_json::from_str(&json).unwrap();
            assert!(back.verify(&l, &s).unwrap());
        }
    }
    assert!(seen > 0, "no non-normal subloop among the candidates");
}

#[test]
fn tampered_certificate_is_rejected() {
    let l = PolyLoop::new();
    let c = l.span("C", &[1, 5, 6, 7, 11]);
    let mut cert = is_normal(&l, &c, NormalityOptions::default()).unwrap().certificate.unwrap();
    cert.image = Vec11::e(1);
    assert!(!cert.verify(&l, &c));
}

#[test]
fn quotients_have_the_right_order() {
    let opts = NormalityOptions::default();
    for l in small_loops() {
        for s in candidate_subloops(&l) {
            if !is_normal(&l, &s, opts).unwrap().normal {
                assert!(quotient(&l, &s, opts).is_err());
                continue;
            }
            let q = quotient(&l, &s, opts).unwrap();
            assert_eq!(q.order() * s.len(), l.order());
            assert!(check_loop_axioms_sampled(&q, 2_000, 1).passed);
        }
    }
}

/// If C(M) is normal then [(a,b,c),d] = 1 for a in C(M).
#[test]
fn normal_commutative_center_kills_associator_commutators() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for l in small_loops() {
        let c = commutative_center(&l).unwrap();
        if !is_normal(&l, &c, NormalityOptions::default()).unwrap().normal {
            continue;
        }
        for a in c.members() {
            for _ in 0..500 {
                let [b, x, d] = [0; 3].map(|_| rng.gen_range(0..l.order() as u32));
                let t = associator(&l, a, &b, &x);
                assert!(l.is_identity(&commutator(&l, &t, &d)));
            }
        }
    }
}

#[test]
fn poly_loop_violates_the_consequence() {
    let l = PolyLoop::new();
    let [a, b, c, d] = [1, 2, 3, 4].map(Vec11::e);
    assert!(l.span("C", &[1, 5, 6, 7, 11]).contains(&a));
    assert!(!l.is_identity(&commutator(&l, &associator(&l, &a, &b, &c), &d)));
}

#[test]
fn csv_export_matches_multiplication() {
    let l = TableLoop::from_loop(&build_triplication(build_burnside(2).unwrap()).unwrap()).unwrap();
    let mut buf = Vec::new();
    l.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("order=81"));
    for (i, line) in lines.enumerate() {
        let row: Vec<u32> = line.split(',').map(|t| t.parse().unwrap()).collect();
        assert_eq!(row.len(), 81);
        for (j, v) in row.into_iter().enumerate() {
            assert_eq!(v, l.mul(&(i as u32), &(j as u32)));
        }
    }
}

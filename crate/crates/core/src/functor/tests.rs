use std::sync::Arc;

use super::*;
use crate::biset::BisetRegistry;
use crate::group::{build_group, FiniteGroup, GroupSpec};
use crate::linalg::FieldSpec;

fn grp(s: &str) -> Arc<FiniteGroup> {
    Arc::new(build_group(&s.parse::<GroupSpec>().unwrap()).unwrap())
}

fn field(c: u64) -> FieldSpec {
    FieldSpec::new(c).unwrap()
}

#[test]
fn klein_four_does_not_generate_a4() {
    let reg = BisetRegistry::default();
    for c in [0, 2, 3] {
        let r = generates(&grp("C2^2"), &grp("A4"), field(c), &reg).unwrap();
        assert_eq!(r.verdict, Verdict::False, "char {c}");
        assert_eq!(r.method, Method::Span);
        assert!(r.rank_reached < r.target_dim);
    }
}

#[test]
fn quotients_generate_with_one_term() {
    let reg = BisetRegistry::default();
    let r = generates(&grp("C3"), &grp("A4"), field(0), &reg).unwrap();
    assert_eq!((r.verdict, r.method), (Verdict::True, Method::Quotient));
    let cert = r.certificate.unwrap();
    assert_eq!(cert.terms.len(), 1);
    assert!(cert.verify(&reg).unwrap());

    let r = generates(&grp("C2"), &grp("C2"), field(5), &reg).unwrap();
    assert_eq!(r.verdict, Verdict::True);
}

#[test]
fn span_search_finds_reflexive_certificates() {
    let reg = BisetRegistry::default();
    let opts = SearchOptions { force_span: true, ..Default::default() };
    for (h, g, c) in [("C2", "C2", 0), ("S3", "S3", 3), ("C2", "C4", 2), ("C2", "S3", 0)] {
        let r = generates_with(&grp(h), &grp(g), field(c), &reg, &opts).unwrap();
        assert_eq!(r.verdict, Verdict::True, "{h} {g} {c}");
        assert!(r.certificate.unwrap().verify(&reg).unwrap());
    }
}

#[test]
fn normal_subgroup_with_sign_action_is_not_generated() {
    // N(C3) = S3 acts on C3 through all of Out(C3) = C2; the sign module
    // (trivial in characteristic 2) has vanishing trace in every characteristic.
    let reg = BisetRegistry::default();
    for c in [0, 2, 3, 5] {
        let r = generates(&grp("C3"), &grp("S3"), field(c), &reg).unwrap();
        assert_eq!(r.verdict, Verdict::False, "char {c}");
    }
}

#[test]
fn non_subquotients_are_rejected_early() {
    let reg = BisetRegistry::default();
    for (h, g) in [("C4", "C2^2"), ("C3", "D8"), ("S3", "C6"), ("C2^2", "C8")] {
        let r = generates(&grp(h), &grp(g), field(0), &reg).unwrap();
        assert_eq!((r.verdict, r.method), (Verdict::False, Method::NotSubquotient));
    }
}

#[test]
fn certificates_chain_through_an_intermediate_group() {
    let reg = BisetRegistry::default();
    let (k, h, g) = (grp("C2"), grp("C2^2"), grp("C2^2xC3"));
    let opts = SearchOptions { force_span: true, ..Default::default() };
    let kh = generates_with(&k, &h, field(0), &reg, &opts).unwrap().certificate.unwrap();
    let hg = generates(&h, &g, field(0), &reg).unwrap().certificate.unwrap();
    let kg = Certificate::chain(&kh, &hg, &reg).unwrap();
    assert!(kg.verify(&reg).unwrap());
}

#[test]
fn certificate_records_round_trip() {
    let reg = BisetRegistry::default();
    let opts = SearchOptions { force_span: true, ..Default::default() };
    let r = generates_with(&grp("C2"), &grp("S3"), field(0), &reg, &opts).unwrap();
    let cert = r.certificate.unwrap();
    let rec = cert.to_record();
    let json = serde_json::to_string(&rec).unwrap();
    let back: CertificateRecord = serde_json::from_str(&json).unwrap();
    assert_eq!(back, rec);
    let fresh = BisetRegistry::default();
    let cert2 = Certificate::from_record(&back, &fresh).unwrap();
    assert!(cert2.verify(&fresh).unwrap());

    let mut bad = rec.clone();
    bad.terms[0].coefficient = "7".into();
    assert!(!Certificate::from_record(&bad, &fresh).unwrap().verify(&fresh).unwrap());
    let mut bad = rec;
    bad.h.table[1] = 0;
    assert!(Certificate::from_record(&bad, &fresh).is_err());
}

#[test]
fn abelian_groups_are_nv() {
    let reg = BisetRegistry::default();
    for s in ["C2^2", "C4xC2", "C6", "C3^2"] {
        let r = is_nv(&grp(s), field(2), &reg).unwrap();
        assert_eq!(r.overall, Verdict::True, "{s}");
        assert!(r.entries.iter().all(|e| matches!(e.method, NvMethod::Quotient)));
    }
}

#[test]
fn a4_is_vanishing() {
    let reg = BisetRegistry::default();
    for c in [0, 2, 3] {
        let r = is_nv(&grp("A4"), field(c), &reg).unwrap();
        assert_eq!(r.overall, Verdict::False);
        let failing: Vec<usize> = r.failures().map(|e| e.group.order()).collect();
        assert!(failing.contains(&4), "char {c}: {failing:?}");
        for e in &r.entries {
            if let Some(cert) = &e.certificate {
                assert!(cert.verify(&reg).unwrap());
            }
        }
    }
}

#[test]
fn s_self_dual_group_needs_no_search() {
    let reg = BisetRegistry::default();
    let r = is_nv(&grp("M(2,2)"), field(0), &reg).unwrap();
    assert_eq!(r.overall, Verdict::True);
    assert!(r.entries.iter().all(|e| matches!(e.method, NvMethod::Quotient)));
}

#[test]
fn transitivity_is_used_when_available() {
    // D8 is a self-normalizing Sylow subgroup of S4, so D8 ⊢ S4; the Klein
    // four group is a quotient of D8 and inherits a chained certificate.
    let reg = BisetRegistry::default();
    let r = is_nv(&grp("S4"), field(0), &reg).unwrap();
    assert_eq!(r.overall, Verdict::False);
    let d8 = r.entries.iter().position(|e| e.group.order() == 8).unwrap();
    assert_eq!(r.entries[d8].verdict, Verdict::True);
    let chained: Vec<_> =
        r.entries.iter().filter(|e| matches!(e.method, NvMethod::Transitive { via } if via == d8)).collect();
    assert!(!chained.is_empty());
    for e in r.entries.iter().filter(|e| e.verdict == Verdict::True) {
        assert!(e.certificate.as_ref().unwrap().verify(&reg).unwrap());
    }
}

mod common;

use common::*;
use mtroot::pipeline::io::{parse_curve, read_cache, CacheEntry};
use mtroot::pipeline::{analyze, analyze_curve, analyze_lattice, predict_invariants, scan_curve, AnalysisConfig, PipelineError};
use mtroot::pointcount::frobenius_polynomial_of_curve;

fn elliptic_config() -> AnalysisConfig {
    AnalysisConfig { primes: (5, 40), ..AnalysisConfig::default() }
}

#[test]
fn elliptic_curve_end_to_end() {
    let curve = parse_curve(r#"{"model":"hyperelliptic","f":[1,1,0,1]}"#).unwrap();
    let rep = analyze_curve(&curve, &elliptic_config()).unwrap();
    let pred = rep.prediction.as_ref().unwrap();
    assert_eq!((pred.rank, pred.weyl_order.as_str()), (2, "2"));
    let r = &rep.result;
    assert_eq!(r.root_datum.components.len(), 1);
    assert_eq!(r.root_datum.components[0].lie_type, "A1");
    assert_eq!((r.hodge.ns_rank.as_str(), r.hodge.endo_rank.as_str()), ("1", "1"));
    // self-consistency of the report
    assert_eq!(r.weyl_order, pred.weyl_order);
    assert_eq!(r.lattice.rank, pred.rank);
    assert_eq!(r.hodge.rank + 1, r.lattice.rank);
    assert_eq!(r.endo.len(), 1);
}

#[test]
fn reports_are_deterministic() {
    let curve = parse_curve(r#"{"model":"hyperelliptic","f":[1,1,0,1]}"#).unwrap();
    let a = analyze_curve(&curve, &elliptic_config()).unwrap().to_json();
    let b = analyze_curve(&curve, &elliptic_config()).unwrap().to_json();
    assert_eq!(a, b);
}

#[test]
fn cache_feeds_prediction() {
    let curve = parse_curve(r#"{"model":"hyperelliptic","f":[1,1,0,1]}"#).unwrap();
    let cfg = elliptic_config();
    let polys = scan_curve(&curve, &cfg).unwrap();
    let text: String = polys.iter().map(|(p, w)| CacheEntry::from_poly(*p, w).to_line() + "\n").collect();
    let back: Vec<_> = read_cache(&text).unwrap().iter().map(|e| (e.p, e.to_poly().unwrap())).collect();
    let a = predict_invariants(&polys, &cfg).unwrap();
    let b = predict_invariants(&back, &cfg).unwrap();
    assert_eq!((a.q_prime, a.p_prime, a.rank, a.weyl_order), (b.q_prime, b.p_prime, b.rank, b.weyl_order));
}

#[test]
fn cm_pair_in_both_orders() {
    let curve = parse_curve(include_str!("../../../fixtures/cm9.json")).unwrap();
    let cfg = AnalysisConfig::default();
    let p19 = frobenius_polynomial_of_curve(&curve, 19, cfg.max_enumeration).unwrap();
    let p37 = frobenius_polynomial_of_curve(&curve, 37, cfg.max_enumeration).unwrap();
    let a = analyze(&p19, &p37, &cfg).unwrap();
    let b = analyze(&p37, &p19, &cfg).unwrap();
    for r in [&a.result, &b.result] {
        assert_eq!(r.lattice.rank, 4);
        assert!(r.root_datum.roots.is_empty());
        assert_eq!(r.weyl_order, "1");
        assert_eq!(r.hodge.hodge_classes, vec!["1", "4", "8", "4", "1"]);
        let mut f: Vec<(String, usize)> = r.endo.iter().map(|e| (e.center_degree.clone(), e.m)).collect();
        f.sort();
        assert_eq!(f, vec![("2".to_string(), 1), ("6".to_string(), 1)]);
    }
}

#[test]
fn genus10_lattice_report() {
    let rep = analyze_lattice(&genus10(), 2).unwrap();
    assert_eq!(rep.root_datum.components[0].lie_type, "D5");
    assert_eq!(rep.gamma_order, "3840");
    assert_eq!(rep.weyl_order, "1920");
    assert_eq!(rep.outer_action.order, 2);
    assert_eq!(rep.hodge.rank, 5);
    assert_eq!(rep.hodge.endo_rank, "4");
    assert_eq!(rep.endo.len(), 1);
    assert_eq!((rep.endo[0].center_degree.as_str(), rep.endo[0].m), ("1", 2));
}

#[test]
fn mismatched_ranks_are_reported() {
    let cfg = AnalysisConfig::default();
    // an elliptic curve against a product of two: ranks 2 and 3
    let e = weil(&[5, -1, 1], 5);
    let prod = weil(&[49, 7, 12, 1, 1], 7);
    match analyze(&prod, &e, &cfg) {
        Err(PipelineError::RankMismatch { q: 3, p: 2 }) => {}
        other => panic!("expected a rank mismatch, got {other:?}"),
    }
}

#[test]
fn bad_configuration() {
    let cfg = AnalysisConfig { primes: (50, 10), ..AnalysisConfig::default() };
    assert!(matches!(cfg.validate(), Err(PipelineError::Config(_))));
    let mut cfg = AnalysisConfig::default();
    cfg.galois.aux.min = 0;
    assert!(cfg.validate().is_err());
}

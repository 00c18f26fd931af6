//! Printed sets and critical sets extracted from generated masters.

mod common;

use common::*;
use ksvec::iso::{are_isomorphic, canonical_form};
use ksvec::ks::*;
use ksvec::mmp::{parse_hypergraph, serialize_hypergraph};
use ksvec::pipeline::minimize_to_critical;
use ksvec::solver::{SubsetSolver, Value};

#[test]
fn printed_sets_verify() {
    for name in PRINTED {
        let h = fixture(name);
        assert_eq!(pipeline_tag(&h), name);
        assert_eq!(verify_coordinatization(&h), Ok(true), "{name}");
        assert!(is_ks(&h), "{name}");
        assert!(is_critical(&h), "{name}");
    }
}

fn pipeline_tag(h: &ksvec::hypergraph::Hypergraph) -> String {
    ksvec::pipeline::size_tag(h)
}

#[test]
fn printed_21_11_edges_round_trip() {
    let text = fixture_text("21-11");
    let edges = text.split('{').next().unwrap();
    assert_eq!(edges, "1234,1567,2589,A3BC,ADE4,F6GC,F7DH,IJ89,IJKL,IKGB,ILEH.");
    let h = fixture("21-11");
    assert_eq!(serialize_hypergraph(&h, false), edges);
    assert_eq!(parse_hypergraph(&serialize_hypergraph(&h, true)).unwrap(), h);
}

#[test]
fn delta_feature() {
    let h = fixture("21-11");
    assert!(has_delta_feature(&h));
    // IJ89 and IJKL share I and J
    let shared: Vec<_> = h.edges()[7].iter().filter(|v| h.edges()[8].contains(v)).collect();
    assert_eq!(shared.len(), 2);
    assert!(!has_delta_feature(&fixture("18-9")));
    assert!(!has_delta_feature(&fixture("21-7")));
}

#[test]
fn parity_of_18_9() {
    let h = fixture("18-9");
    assert_eq!(h.size(), (18, 9));
    let p = find_parity_proof(&h).expect("18-9 has a parity proof");
    assert_eq!(p.edges.len(), 9);
    let mut deg = vec![0; h.vertex_count()];
    for &e in &p.edges {
        for &v in &h.edges()[e] {
            deg[v as usize] += 1;
        }
    }
    assert!(deg.iter().all(|&d| d == 2));
}

#[test]
fn parity_proofs_refute_states() {
    for name in PRINTED.iter().chain(&["18-9", "21-7", "27-9", "33-11", "60-23"]) {
        let h = fixture(name);
        if let Some(p) = find_parity_proof(&h) {
            assert_eq!(p.edges.len() % 2, 1);
            assert!(find_01_state(&h).is_none(), "{name}");
            let sub = h.sub_hypergraph(&p.edges).unwrap();
            assert!(find_01_state(&sub).is_none(), "{name}");
        }
    }
}

#[test]
fn extracted_criticals_verify() {
    for name in ["18-9", "21-7", "27-9", "33-11", "60-23"] {
        let h = fixture(name);
        assert_eq!(pipeline_tag(&h), name);
        assert_eq!(verify_coordinatization(&h), Ok(true), "{name}");
        assert!(is_critical(&h), "{name}");
    }
}

/// Criticality with explicit witnesses: one admissible 01-state per removed edge.
#[test]
fn sixty_twenty_three_has_state_witnesses() {
    let h = fixture("60-23");
    let p = find_parity_proof(&h).unwrap();
    assert_eq!(p.edges.len(), 23);
    let s = SubsetSolver::new(&h);
    for e in 0..h.edge_count() {
        let mut rest = s.all_edges();
        rest.remove(e);
        let a = s.find_state(&rest).expect("single removal leaves a state");
        for (i, edge) in h.edges().iter().enumerate() {
            if i != e {
                let ones = edge.iter().filter(|&&v| a.values()[v as usize] == Value::One);
                assert_eq!(ones.count(), 1);
            }
        }
    }
}

#[test]
fn star_is_the_pair_construction() {
    let star = fixture("21-7");
    let k7 = k7_pairs();
    let map = are_isomorphic(&star, &k7).expect("21-7 is the K7 pair set");
    assert_eq!(map.len(), 21);
    assert_eq!(canonical_form(&star), canonical_form(&star));
    assert_eq!(
        canonical_form(&star).canonical_string,
        canonical_form(&k7).canonical_string
    );
    assert!(is_critical(&k7));
}

#[test]
fn critical_input_minimizes_to_itself() {
    let h = fixture("18-9");
    for seed in 0..5 {
        let r = minimize_to_critical(&h, seed).unwrap();
        assert_eq!(r.size, (18, 9));
        assert_eq!(r.master_edges, (0..9).collect::<Vec<_>>());
    }
}

#[test]
fn corrupted_fixtures_are_rejected() {
    // '0' is outside the label alphabet and whitespace is only allowed
    // between coordinate tokens, so these substitutions always break the grammar
    for name in PRINTED {
        let text = fixture_text(name);
        let text = text.trim();
        let block = text.find('{').unwrap();
        for (i, c) in text.char_indices() {
            // leading whitespace is trimmed, so byte 0 only takes '0'
            let subs: &[char] = if i == 0 {
                &['0']
            } else if i < block {
                &['0', ' ']
            } else if "{}=,".contains(c) {
                &[' ']
            } else {
                &[]
            };
            for &bad in subs {
                let mut s = text.to_string();
                s.replace_range(i..i + 1, &bad.to_string());
                assert!(parse_hypergraph(&s).is_err(), "{name}: byte {i} -> {bad:?}");
            }
        }
        for cut in [1, 10, block - 1, block + 5, text.len() - 1] {
            assert!(parse_hypergraph(&text[..cut]).is_err(), "{name}: prefix {cut}");
        }
    }
}

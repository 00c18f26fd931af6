//! Shared fixtures, generators and brute-force oracles for the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use fixedbitset::FixedBitSet;
use ksvec::hypergraph::Hypergraph;
use ksvec::mmp::parse_hypergraph;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(format!("{name}.mmp"))
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap()
}

pub fn fixture(name: &str) -> Hypergraph {
    parse_hypergraph(&fixture_text(name)).unwrap()
}

/// The sets printed with coordinatizations.
pub const PRINTED: [&str; 4] = ["21-11", "22-11", "23-13", "26-13"];

/// Random hypergraph with uniform edge size `k` (so the MMP rule always
/// holds), about `m` distinct edges over at most `n` vertex ids.
pub fn random_uniform<R: Rng>(rng: &mut R, n: usize, m: usize, k: usize) -> Hypergraph {
    let ids: Vec<usize> = (0..n).collect();
    let mut edges: BTreeSet<Vec<usize>> = BTreeSet::new();
    for _ in 0..m * 4 {
        if edges.len() == m {
            break;
        }
        let mut e: Vec<usize> = ids.choose_multiple(rng, k).copied().collect();
        e.sort_unstable();
        edges.insert(e);
    }
    let mut edges: Vec<Vec<usize>> = edges.into_iter().collect();
    edges.shuffle(rng);
    Hypergraph::from_edges(edges).unwrap()
}

/// Random hypergraph with up to `m` distinct edges of sizes in `2..=4`,
/// redrawn until the MMP rule holds.
pub fn random_mixed<R: Rng>(rng: &mut R, n: usize, m: usize) -> Hypergraph {
    let ids: Vec<usize> = (0..n).collect();
    loop {
        let mut edges: BTreeSet<Vec<usize>> = BTreeSet::new();
        for _ in 0..m {
            let k = rng.gen_range(2..=4.min(n));
            let mut e: Vec<usize> = ids.choose_multiple(rng, k).copied().collect();
            e.sort_unstable();
            edges.insert(e);
        }
        if let Ok(h) = Hypergraph::from_edges(edges) {
            return h;
        }
    }
}

/// Relabel vertices by a random permutation and shuffle the edge list.
pub fn shuffled<R: Rng>(rng: &mut R, h: &Hypergraph) -> Hypergraph {
    let mut perm: Vec<usize> = (0..h.vertex_count()).collect();
    perm.shuffle(rng);
    let mut edges: Vec<Vec<u32>> = h
        .edges()
        .iter()
        .map(|e| {
            let mut e: Vec<u32> = e.iter().map(|&v| perm[v as usize] as u32).collect();
            e.shuffle(rng);
            e
        })
        .collect();
    edges.shuffle(rng);
    Hypergraph::new(h.vertex_count(), edges).unwrap()
}

/// Exhaustive 01-state search over all `2^v` assignments of the vertices
/// touched by `active`.
pub fn brute_has_state(h: &Hypergraph, active: &[usize]) -> bool {
    let mut verts: Vec<u32> = active.iter().flat_map(|&e| h.edges()[e].clone()).collect();
    verts.sort_unstable();
    verts.dedup();
    assert!(verts.len() <= 20);
    let masks: Vec<u32> = active
        .iter()
        .map(|&e| {
            h.edges()[e]
                .iter()
                .map(|v| 1u32 << verts.binary_search(v).unwrap())
                .fold(0, |a, b| a | b)
        })
        .collect();
    (0u32..1 << verts.len()).any(|a| masks.iter().all(|&m| (a & m).count_ones() == 1))
}

pub fn brute_is_ks(h: &Hypergraph) -> bool {
    let all: Vec<usize> = (0..h.edge_count()).collect();
    !brute_has_state(h, &all)
}

/// Odd edge subsets covering every vertex an even number of times, by enumeration.
pub fn brute_parity_exists(h: &Hypergraph) -> bool {
    let m = h.edge_count();
    assert!(m <= 20);
    (1u32..1 << m).any(|s| s.count_ones() % 2 == 1 && covers_evenly(h, s))
}

pub fn covers_evenly(h: &Hypergraph, subset: u32) -> bool {
    let mut deg = vec![0u32; h.vertex_count()];
    for (i, e) in h.edges().iter().enumerate() {
        if subset >> i & 1 == 1 {
            for &v in e {
                deg[v as usize] += 1;
            }
        }
    }
    deg.iter().all(|d| d % 2 == 0)
}

/// Least sorted edge list over all `n!` relabelings.
pub fn brute_canonical(h: &Hypergraph) -> Vec<Vec<u32>> {
    let n = h.vertex_count();
    assert!(n <= 9);
    let mut perm: Vec<u32> = (0..n as u32).collect();
    let mut best: Option<Vec<Vec<u32>>> = None;
    loop {
        let mut edges: Vec<Vec<u32>> = h
            .edges()
            .iter()
            .map(|e| {
                let mut e: Vec<u32> = e.iter().map(|&v| perm[v as usize]).collect();
                e.sort_unstable();
                e
            })
            .collect();
        edges.sort();
        if best.as_ref().map_or(true, |b| edges < *b) {
            best = Some(edges);
        }
        if !next_permutation(&mut perm) {
            return best.unwrap();
        }
    }
}

fn next_permutation(p: &mut [u32]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Critical edge subsets by checking every subset, no pruning.
pub fn brute_criticals(h: &Hypergraph) -> (Vec<FixedBitSet>, usize) {
    let m = h.edge_count();
    assert!(m <= 14);
    let ks: Vec<bool> = (0u32..1 << m)
        .map(|s| {
            let active: Vec<usize> = (0..m).filter(|&i| s >> i & 1 == 1).collect();
            !active.is_empty() && !brute_has_state(h, &active)
        })
        .collect();
    let mut crit = Vec::new();
    for s in 0u32..1 << m {
        if ks[s as usize] && (0..m).all(|i| s >> i & 1 == 0 || !ks[(s & !(1 << i)) as usize]) {
            let mut b = FixedBitSet::with_capacity(m);
            b.extend((0..m).filter(|&i| s >> i & 1 == 1));
            crit.push(b);
        }
    }
    (crit, ks.iter().filter(|&&k| k).count())
}

/// The 21-7 "star" built from scratch: vertices are the 21 pairs of a
/// 7-set, edge `i` holds the six pairs containing `i`.
pub fn k7_pairs() -> Hypergraph {
    let pairs: Vec<(usize, usize)> = (0..7)
        .flat_map(|a| ((a + 1)..7).map(move |b| (a, b)))
        .collect();
    let edges: Vec<Vec<usize>> = (0..7)
        .map(|i| {
            pairs
                .iter()
                .enumerate()
                .filter(|(_, &(a, b))| a == i || b == i)
                .map(|(k, _)| k)
                .collect()
        })
        .collect();
    Hypergraph::from_edges(edges).unwrap()
}

pub mod suites;

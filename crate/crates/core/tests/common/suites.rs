//! The three oracle suites, each returning (instances, disagreements).

use std::collections::BTreeMap;

use fixedbitset::FixedBitSet;
use ksvec::error::Error;
use ksvec::hypergraph::Hypergraph;
use ksvec::iso::{are_isomorphic, canonical_form, is_isomorphism};
use ksvec::ks::{find_01_state, is_ks};
use ksvec::pipeline::{exhaustive_criticals, DEFAULT_BUDGET};
use ksvec::solver::{BranchHeuristic, SubsetSolver};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;

pub fn small_instance(rng: &mut ChaCha8Rng, max_vertices: usize) -> Hypergraph {
    let n = rng.gen_range(3..=max_vertices);
    let m = rng.gen_range(1..=10);
    if rng.gen_bool(0.25) {
        random_mixed(rng, n, m)
    } else {
        let k = rng.gen_range(2..=4.min(n));
        random_uniform(rng, n, m, k)
    }
}

/// Solver verdicts and states against enumeration of all assignments, on
/// whole instances (learning engine) and random edge subsets (backtracking).
pub fn solver_vs_enumeration(instances: usize, seed: u64) -> (usize, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut disagreements = 0;
    let mut ks_seen = 0;
    for _ in 0..instances {
        let h = small_instance(&mut rng, 12);
        assert!(h.vertex_count() <= 12);
        let expect = brute_is_ks(&h);
        ks_seen += expect as usize;
        if is_ks(&h) != expect {
            disagreements += 1;
        }
        match find_01_state(&h) {
            Some(a) if !expect && a.is_total() && a.is_admissible(&h) => {}
            None if expect => {}
            _ => disagreements += 1,
        }
        let plain = SubsetSolver::new(&h)
            .with_learning(false)
            .with_heuristic(BranchHeuristic::FirstUnassigned);
        let mut active = FixedBitSet::with_capacity(h.edge_count());
        active.extend((0..h.edge_count()).filter(|_| rng.gen_bool(0.7)));
        let on: Vec<usize> = active.ones().collect();
        if plain.is_ks(&active) == brute_has_state(&h, &on) && !on.is_empty() {
            disagreements += 1;
        }
    }
    assert!(ks_seen * 20 > instances, "too few KS instances ({ks_seen})");
    (instances, disagreements)
}

/// Canonical-form equality against least relabeling over all permutations;
/// half the pairs are relabeled copies, half independent draws.
pub fn canonical_vs_permutations(instances: usize, seed: u64) -> (usize, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut disagreements = 0;
    for i in 0..instances {
        let n = rng.gen_range(3..=8);
        let m = rng.gen_range(1..=8);
        let k = rng.gen_range(2..=3);
        let a = random_uniform(&mut rng, n, m, k);
        let b = if i % 2 == 0 {
            shuffled(&mut rng, &a)
        } else {
            random_uniform(&mut rng, n, m, k)
        };
        let brute = brute_canonical(&a) == brute_canonical(&b);
        let fast = canonical_form(&a).canonical_string == canonical_form(&b).canonical_string;
        let witness = match are_isomorphic(&a, &b) {
            Some(map) => is_isomorphism(&a, &b, &map),
            None => false,
        };
        if brute != fast || brute != witness {
            disagreements += 1;
        }
    }
    (instances, disagreements)
}

fn classes(h: &Hypergraph, sets: &[FixedBitSet]) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for s in sets {
        let sub = h.sub_hypergraph(&s.ones().collect::<Vec<_>>()).unwrap();
        *out.entry(canonical_form(&sub).canonical_string).or_default() += 1;
    }
    out
}

/// Pruned exhaustive stripping against checking every edge subset, on
/// random KS masters of at most 12 edges. Compares labeled critical counts
/// per isomorphism class and the number of KS subsets.
pub fn pruned_vs_unpruned(masters: usize, seed: u64) -> (usize, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut done = 0;
    let mut disagreements = 0;
    while done < masters {
        let k = rng.gen_range(2..=3);
        let n = rng.gen_range(4..=9);
        let m = rng.gen_range(3..=12);
        let h = random_uniform(&mut rng, n, m, k);
        let (crit, ks_count) = brute_criticals(&h);
        match exhaustive_criticals(&h, DEFAULT_BUDGET) {
            Err(Error::NotKs) => {
                if !crit.is_empty() {
                    disagreements += 1;
                    done += 1;
                }
            }
            Err(e) => panic!("{e}"),
            Ok(r) => {
                done += 1;
                if r.truncated
                    || r.family.labeled != classes(&h, &crit)
                    || r.ks_subsets != ks_count
                {
                    disagreements += 1;
                }
            }
        }
    }
    (masters, disagreements)
}

//! Edge stripping: from a KS master down to critical KS subsets.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;
use crate::iso::canonical_form;
use crate::ks::is_critical_subset;
use crate::solver::{Outcome, SubsetSolver};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StripMode {
    Random,
    Exhaustive,
}

impl fmt::Display for StripMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StripMode::Random => "random",
            StripMode::Exhaustive => "exhaustive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Provenance {
    pub master: String,
    pub mode: StripMode,
    pub seed: Option<u64>,
}

/// A critical KS subset of a master.
#[derive(Clone, Debug)]
pub struct CriticalRecord {
    pub hypergraph: Hypergraph,
    pub canonical: String,
    pub size: (usize, usize),
    pub provenance: Provenance,
    /// Indices of the master edges that make up this critical.
    pub master_edges: Vec<usize>,
}

impl CriticalRecord {
    fn from_subset(master: &Hypergraph, subset: &FixedBitSet, provenance: Provenance) -> Self {
        let master_edges: Vec<usize> = subset.ones().collect();
        let hypergraph = master
            .sub_hypergraph(&master_edges)
            .expect("nonempty edge subset of a valid hypergraph");
        let canonical = canonical_form(&hypergraph).canonical_string;
        CriticalRecord {
            size: hypergraph.size(),
            hypergraph,
            canonical,
            provenance,
            master_edges,
        }
    }
}

/// Short identifier for a master, e.g. `40-32`.
pub fn size_tag(h: &Hypergraph) -> String {
    format!("{}-{}", h.vertex_count(), h.edge_count())
}

/// Remove edge `e`, dropping vertices left isolated and recompacting labels.
pub fn strip_edge(h: &Hypergraph, e: usize) -> Result<Hypergraph> {
    if e >= h.edge_count() {
        return Err(Error::EdgeOutOfRange(e, h.edge_count()));
    }
    let keep: Vec<usize> = (0..h.edge_count()).filter(|&i| i != e).collect();
    h.sub_hypergraph(&keep)
}

/// Tuning for greedy minimization.
#[derive(Clone, Copy, Debug, Default)]
pub struct MinimizeOptions {
    /// After every successful removal (and once up front), keep only the
    /// edges the refutation actually used. Much faster on large masters but
    /// biased toward small criticals.
    pub core_trimming: bool,
}

/// Greedy remove-if-still-KS over `order`, starting from `start`.
///
/// An edge whose removal destroys the KS property stays necessary in every
/// subset, so one pass over the order already ends at a critical set. Edges
/// outside the latest refutation core are dropped without a solver call: the
/// core alone is still KS.
pub fn minimize_subset(
    solver: &SubsetSolver<'_>,
    start: &FixedBitSet,
    order: &[usize],
    opts: MinimizeOptions,
) -> Option<FixedBitSet> {
    let mut current = start.clone();
    let mut core = match solver.solve(&current) {
        Outcome::State(_) => return None,
        Outcome::Refuted { core } => core,
    };
    if opts.core_trimming {
        current.intersect_with(&core);
    }
    for &e in order {
        if !current.contains(e) {
            continue;
        }
        current.remove(e);
        if !core.contains(e) {
            continue;
        }
        match solver.solve(&current) {
            Outcome::Refuted { core: c } => {
                core = c;
                if opts.core_trimming {
                    current.intersect_with(&core);
                }
            }
            Outcome::State(_) => {
                current.insert(e);
            }
        }
    }
    Some(current)
}

/// Derive the seed of run `run` from the campaign seed (SplitMix64 finalizer).
pub fn run_seed(seed: u64, run: u64) -> u64 {
    let mut z = seed ^ run.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn shuffled_edges(m: usize, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    order
}

/// Random downward generation of one critical; `None` when `h` is not KS.
pub fn minimize_to_critical(h: &Hypergraph, rng_seed: u64) -> Option<CriticalRecord> {
    minimize_to_critical_with(h, rng_seed, MinimizeOptions::default())
}

pub fn minimize_to_critical_with(
    h: &Hypergraph,
    rng_seed: u64,
    opts: MinimizeOptions,
) -> Option<CriticalRecord> {
    let solver = SubsetSolver::new(h);
    let order = shuffled_edges(h.edge_count(), rng_seed);
    let subset = minimize_subset(&solver, &solver.all_edges(), &order, opts)?;
    debug_assert!(is_critical_subset(&solver, &subset));
    Some(CriticalRecord::from_subset(
        h,
        &subset,
        Provenance {
            master: size_tag(h),
            mode: StripMode::Random,
            seed: Some(rng_seed),
        },
    ))
}

/// Critical classes found by a search, deduplicated by canonical form.
#[derive(Clone, Debug, Default)]
pub struct CriticalFamily {
    /// One representative per isomorphism class, ordered by (edges, vertices, canonical).
    pub records: Vec<CriticalRecord>,
    /// Number of distinct labeled critical subsets of the master behind each class.
    pub labeled: BTreeMap<String, usize>,
}

impl CriticalFamily {
    fn from_subsets(master: &Hypergraph, subsets: Vec<(FixedBitSet, Provenance)>) -> Self {
        let mut by_canon: HashMap<String, CriticalRecord> = HashMap::new();
        let mut labeled: BTreeMap<String, usize> = BTreeMap::new();
        for (s, prov) in subsets {
            let rec = CriticalRecord::from_subset(master, &s, prov);
            *labeled.entry(rec.canonical.clone()).or_default() += 1;
            match by_canon.get(&rec.canonical) {
                Some(old) if old.master_edges <= rec.master_edges => {}
                _ => {
                    by_canon.insert(rec.canonical.clone(), rec);
                }
            }
        }
        let mut records: Vec<CriticalRecord> = by_canon.into_values().collect();
        records.sort_by(|a, b| {
            (a.size.1, a.size.0, &a.canonical).cmp(&(b.size.1, b.size.0, &b.canonical))
        });
        CriticalFamily { records, labeled }
    }

    pub fn sizes(&self) -> Vec<(usize, usize)> {
        self.records.iter().map(|r| r.size).collect()
    }

    pub fn labeled_total(&self) -> usize {
        self.labeled.values().sum()
    }
}

#[derive(Clone, Debug)]
pub struct ExhaustiveResult {
    pub family: CriticalFamily,
    /// KS edge subsets of the master visited (all of them unless truncated).
    pub ks_subsets: usize,
    pub solver_calls: u64,
    pub truncated: bool,
}

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Every critical KS subset of `h`, by depth-first edge removal.
///
/// Branches below a non-KS subset are never entered (subsets of non-KS sets
/// are non-KS), an edge found necessary stays necessary for all descendants,
/// and visited subsets are memoized by their edge bitset. `budget` caps the
/// number of solver calls; hitting it returns what was found so far with
/// `truncated` set.
pub fn exhaustive_criticals(h: &Hypergraph, budget: u64) -> Result<ExhaustiveResult> {
    let walk = walk_ks_subsets(h, budget)?;
    let prov = Provenance {
        master: size_tag(h),
        mode: StripMode::Exhaustive,
        seed: None,
    };
    let family = CriticalFamily::from_subsets(
        h,
        walk.criticals.into_iter().map(|s| (s, prov.clone())).collect(),
    );
    Ok(ExhaustiveResult {
        family,
        ks_subsets: walk.visited.len(),
        solver_calls: walk.calls,
        truncated: walk.truncated,
    })
}

/// Isomorphism classes of all KS edge subsets of `h`, `h` itself included.
#[derive(Clone, Debug)]
pub struct KsSubsetClasses {
    /// Canonical string of each class with the number of labeled subsets in it.
    pub classes: BTreeMap<String, usize>,
    pub ks_subsets: usize,
    pub truncated: bool,
}

/// Same walk as [`exhaustive_criticals`], but classifies every KS subset
/// visited rather than only the critical ones.
pub fn ks_subset_classes(h: &Hypergraph, budget: u64) -> Result<KsSubsetClasses> {
    let walk = walk_ks_subsets(h, budget)?;
    let visited: Vec<FixedBitSet> = walk.visited.into_iter().collect();
    let canon: Vec<String> = visited
        .par_iter()
        .map(|s| {
            let edges: Vec<usize> = s.ones().collect();
            canonical_form(&h.sub_hypergraph(&edges).expect("nonempty KS subset")).canonical_string
        })
        .collect();
    let mut classes = BTreeMap::new();
    for c in canon {
        *classes.entry(c).or_default() += 1;
    }
    Ok(KsSubsetClasses {
        classes,
        ks_subsets: visited.len(),
        truncated: walk.truncated,
    })
}

struct Walk {
    criticals: Vec<FixedBitSet>,
    visited: HashSet<FixedBitSet>,
    calls: u64,
    truncated: bool,
}

fn walk_ks_subsets(h: &Hypergraph, budget: u64) -> Result<Walk> {
    let solver = SubsetSolver::new(h);
    let full = solver.all_edges();
    if !solver.is_ks(&full) {
        return Err(Error::NotKs);
    }
    let mut calls = 1u64;
    let mut visited: HashSet<FixedBitSet> = HashSet::new();
    let mut non_ks: HashSet<FixedBitSet> = HashSet::new();
    let mut found: Vec<FixedBitSet> = Vec::new();
    let mut stack: Vec<(FixedBitSet, FixedBitSet)> =
        vec![(full.clone(), FixedBitSet::with_capacity(h.edge_count()))];
    visited.insert(full);
    let mut truncated = false;

    'outer: while let Some((set, inherited)) = stack.pop() {
        let mut necessary = inherited;
        let mut has_ks_child = false;
        let mut ks_children = Vec::new();
        for e in set.ones() {
            if necessary.contains(e) {
                continue;
            }
            let mut child = set.clone();
            child.remove(e);
            if visited.contains(&child) {
                has_ks_child = true;
                continue;
            }
            if non_ks.contains(&child) {
                necessary.insert(e);
                continue;
            }
            if calls >= budget {
                truncated = true;
                break 'outer;
            }
            calls += 1;
            if solver.is_ks(&child) {
                has_ks_child = true;
                visited.insert(child.clone());
                ks_children.push(child);
            } else {
                necessary.insert(e);
                non_ks.insert(child);
            }
        }
        if !has_ks_child {
            found.push(set);
        }
        for child in ks_children {
            stack.push((child, necessary.clone()));
        }
    }
    found.sort();
    Ok(Walk {
        criticals: found,
        visited,
        calls,
        truncated,
    })
}

/// Result of a seeded random campaign.
#[derive(Clone, Debug)]
pub struct Campaign {
    pub family: CriticalFamily,
    pub runs: u64,
    pub seed: u64,
    /// How many runs ended in each isomorphism class.
    pub hits: BTreeMap<String, u64>,
}

/// `runs` independent greedy minimizations with per-run seeds derived from
/// `seed`; the result does not depend on scheduling.
pub fn random_campaign(h: &Hypergraph, runs: u64, seed: u64) -> Result<Campaign> {
    random_campaign_with(h, runs, seed, MinimizeOptions::default())
}

pub fn random_campaign_with(
    h: &Hypergraph,
    runs: u64,
    seed: u64,
    opts: MinimizeOptions,
) -> Result<Campaign> {
    let solver = SubsetSolver::new(h);
    let full = solver.all_edges();
    if runs > 0 && !solver.is_ks(&full) {
        return Err(Error::NotKs);
    }
    let subsets: Vec<(u64, FixedBitSet)> = (0..runs)
        .into_par_iter()
        .map(|run| {
            let s = run_seed(seed, run);
            let order = shuffled_edges(h.edge_count(), s);
            let sub = minimize_subset(&solver, &full, &order, opts)
                .expect("master was checked to be KS");
            (s, sub)
        })
        .collect();

    // one record per distinct labeled subset, provenance from its first run
    let mut first_seed: HashMap<FixedBitSet, u64> = HashMap::new();
    let mut run_counts: HashMap<FixedBitSet, u64> = HashMap::new();
    for (s, sub) in &subsets {
        first_seed.entry(sub.clone()).or_insert(*s);
        *run_counts.entry(sub.clone()).or_default() += 1;
    }
    let mut distinct: Vec<(FixedBitSet, u64)> = first_seed.into_iter().collect();
    distinct.sort();
    for (sub, _) in &distinct {
        assert!(
            is_critical_subset(&solver, sub),
            "minimization produced a non-critical subset"
        );
    }
    let tag = size_tag(h);
    let family = CriticalFamily::from_subsets(
        h,
        distinct
            .iter()
            .map(|(sub, s)| {
                (
                    sub.clone(),
                    Provenance {
                        master: tag.clone(),
                        mode: StripMode::Random,
                        seed: Some(*s),
                    },
                )
            })
            .collect(),
    );
    let mut hits: BTreeMap<String, u64> = BTreeMap::new();
    let canon_of: HashMap<Vec<usize>, &str> = family
        .records
        .iter()
        .map(|r| (r.master_edges.clone(), r.canonical.as_str()))
        .collect();
    // map every labeled subset to its class via a fresh canonical form only when needed
    for (sub, n) in run_counts {
        let edges: Vec<usize> = sub.ones().collect();
        let canon = match canon_of.get(&edges) {
            Some(c) => c.to_string(),
            None => canonical_form(&h.sub_hypergraph(&edges).expect("valid subset")).canonical_string,
        };
        *hits.entry(canon).or_default() += n;
    }
    Ok(Campaign {
        family,
        runs,
        seed,
        hits,
    })
}

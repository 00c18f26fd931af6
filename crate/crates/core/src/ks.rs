//! KS decisions and structural features of MMP hypergraphs.

use std::cmp::Ordering;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf2::{Insert, XorSystem};
use crate::hypergraph::{intersection_size, Hypergraph};
use crate::iso::canonical_form;
use crate::solver::{Assignment, SubsetSolver};

pub fn find_01_state(h: &Hypergraph) -> Option<Assignment> {
    let s = SubsetSolver::new(h);
    s.find_state(&s.all_edges())
}

pub fn is_ks(h: &Hypergraph) -> bool {
    let s = SubsetSolver::new(h);
    s.is_ks(&s.all_edges())
}

/// KS, and every single-edge removal leaves a set with a 01-state.
pub fn is_critical(h: &Hypergraph) -> bool {
    let s = SubsetSolver::new(h);
    let all = s.all_edges();
    is_critical_subset(&s, &all)
}

/// Criticality of the sub-hypergraph spanned by `active` within the solver's host.
pub fn is_critical_subset(s: &SubsetSolver<'_>, active: &FixedBitSet) -> bool {
    if !s.is_ks(active) {
        return false;
    }
    let edges: Vec<usize> = active.ones().collect();
    edges.par_iter().all(|&e| {
        let mut rest = active.clone();
        rest.remove(e);
        !s.is_ks(&rest)
    })
}

/// Every edge is an orthogonal basis of the rays' common dimension.
pub fn verify_coordinatization(h: &Hypergraph) -> Result<bool> {
    let coords = h.coordinatization().ok_or(Error::MissingCoordinatization)?;
    let mut dim = None;
    for (v, r) in coords.iter().enumerate() {
        let r = r
            .as_ref()
            .ok_or_else(|| Error::MissingRay(h.label(v).to_string()))?;
        match dim {
            None => dim = Some(r.dim()),
            Some(d) if d != r.dim() => return Ok(false),
            _ => {}
        }
    }
    let dim = dim.unwrap_or(0);
    for e in h.edges() {
        if e.len() != dim {
            return Ok(false);
        }
        for (i, &a) in e.iter().enumerate() {
            for &b in &e[i + 1..] {
                let ra = coords[a as usize].as_ref().unwrap();
                let rb = coords[b as usize].as_ref().unwrap();
                if !ra.is_orthogonal(rb)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// An odd set of edges covering every vertex an even number of times.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityProof {
    pub edges: Vec<usize>,
}

/// Odd-weight vector in the GF(2) kernel of the vertex-by-edge incidence matrix.
pub fn find_parity_proof(h: &Hypergraph) -> Option<ParityProof> {
    let mut all = FixedBitSet::with_capacity(h.edge_count());
    all.insert_range(..);
    parity_proof_within(h, &all)
}

/// Parity proof using only the edges in `active`; indices refer to `h`.
///
/// Such a set exists iff the system "each edge's vertices sum to 1" is
/// inconsistent over GF(2); the rows combined into `0 = 1` form the proof.
pub fn parity_proof_within(h: &Hypergraph, active: &FixedBitSet) -> Option<ParityProof> {
    let cols: Vec<usize> = active.ones().filter(|&e| e < h.edge_count()).collect();
    let mut sys = XorSystem::new(h.vertex_count(), cols.len());
    for (j, &e) in cols.iter().enumerate() {
        if let Insert::Conflict(tags) = sys.insert(&h.edges()[e], true, Some(j)) {
            return Some(ParityProof {
                edges: tags.into_iter().map(|t| cols[t]).collect(),
            });
        }
    }
    None
}

/// Some pair of edges shares at least two vertices.
pub fn has_delta_feature(h: &Hypergraph) -> bool {
    let sorted = h.sorted_edges();
    (0..sorted.len()).any(|i| {
        ((i + 1)..sorted.len()).any(|j| intersection_size(&sorted[i], &sorted[j]) >= 2)
    })
}

/// Edge indices of each connected component, in order of first edge.
pub fn component_edge_sets(h: &Hypergraph) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..h.vertex_count()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for e in h.edges() {
        let a = find(&mut parent, e[0] as usize);
        for &v in &e[1..] {
            let b = find(&mut parent, v as usize);
            if a != b {
                parent[b] = a;
            }
        }
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for (i, e) in h.edges().iter().enumerate() {
        let root = find(&mut parent, e[0] as usize);
        match groups.iter_mut().find(|(r, _)| *r == root) {
            Some((_, g)) => g.push(i),
            None => groups.push((root, vec![i])),
        }
    }
    groups.into_iter().map(|(_, g)| g).collect()
}

/// Connected components, largest first: vertex count, then edge count
/// (both descending), then canonical form.
pub fn connected_components(h: &Hypergraph) -> Vec<Hypergraph> {
    let mut comps: Vec<(Hypergraph, Option<String>)> = component_edge_sets(h)
        .into_iter()
        .map(|g| {
            (
                h.sub_hypergraph(&g).expect("component of a valid hypergraph"),
                None,
            )
        })
        .collect();
    // canonical forms only matter for ties, so compute them lazily
    let n = comps.len();
    for i in 0..n {
        for j in (i + 1)..n {
            if comps[i].0.size() == comps[j].0.size() {
                for k in [i, j] {
                    if comps[k].1.is_none() {
                        comps[k].1 = Some(canonical_form(&comps[k].0).canonical_string);
                    }
                }
            }
        }
    }
    comps.sort_by(|a, b| {
        let (av, ae) = a.0.size();
        let (bv, be) = b.0.size();
        bv.cmp(&av)
            .then(be.cmp(&ae))
            .then_with(|| a.1.cmp(&b.1))
            .then(Ordering::Equal)
    });
    comps.into_iter().map(|(h, _)| h).collect()
}

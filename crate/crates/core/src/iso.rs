//! Canonical labeling of hypergraphs by colour refinement and individualization.
//!
//! Vertex colours are refined until stable; the search then individualizes one
//! vertex of the first smallest non-singleton cell at a time and keeps the
//! least relabeled edge list over all leaves. Automorphisms found along the
//! way (two leaves with the same edge list) prune children that lie in the
//! same orbit under the stabilizer of the current prefix.

use std::collections::HashSet;

use crate::hypergraph::Hypergraph;
use crate::mmp::label_for;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalForm {
    /// Edge list under the canonical relabeling, vertices and edges sorted.
    pub canonical_string: String,
    /// `relabeling[v]` is the canonical index of vertex `v`.
    pub relabeling: Vec<usize>,
}

pub fn canonical_form(h: &Hypergraph) -> CanonicalForm {
    let n = h.vertex_count();
    let edges = h.sorted_edges();
    let mut incidence = vec![Vec::new(); n];
    for (i, e) in edges.iter().enumerate() {
        for &v in e {
            incidence[v as usize].push(i);
        }
    }
    let mut search = Search {
        edges: &edges,
        incidence: &incidence,
        best: None,
        automorphisms: Vec::new(),
    };
    let initial = initial_colors(&edges, &incidence);
    let mut prefix = Vec::new();
    search.explore(initial, &mut prefix);
    let (cert, colors) = search.best.expect("search visits at least one leaf");
    CanonicalForm {
        canonical_string: certificate_string(&cert),
        relabeling: colors.into_iter().map(|c| c as usize).collect(),
    }
}

/// Vertex bijection `a -> b` mapping the edges of `a` exactly onto those of `b`.
pub fn are_isomorphic(a: &Hypergraph, b: &Hypergraph) -> Option<Vec<usize>> {
    if a.size() != b.size() {
        return None;
    }
    let mut da = a.degrees();
    let mut db = b.degrees();
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return None;
    }
    let ca = canonical_form(a);
    let cb = canonical_form(b);
    if ca.canonical_string != cb.canonical_string {
        return None;
    }
    let mut inv_b = vec![0; b.vertex_count()];
    for (v, &c) in cb.relabeling.iter().enumerate() {
        inv_b[c] = v;
    }
    let map: Vec<usize> = ca.relabeling.iter().map(|&c| inv_b[c]).collect();
    assert!(
        is_isomorphism(a, b, &map),
        "canonical forms agree but the induced map is not an isomorphism"
    );
    Some(map)
}

/// True iff `map` sends the edge set of `a` exactly onto the edge set of `b`.
pub fn is_isomorphism(a: &Hypergraph, b: &Hypergraph, map: &[usize]) -> bool {
    if a.size() != b.size() || map.len() != a.vertex_count() {
        return false;
    }
    let target: HashSet<Vec<u32>> = b.sorted_edges().into_iter().collect();
    let mut hit = HashSet::new();
    for e in a.edges() {
        let mut img: Vec<u32> = e.iter().map(|&v| map[v as usize] as u32).collect();
        img.sort_unstable();
        if !target.contains(&img) || !hit.insert(img) {
            return false;
        }
    }
    true
}

fn certificate_string(cert: &[Vec<u32>]) -> String {
    let mut s = String::new();
    for (i, e) in cert.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        for &v in e {
            s.push_str(&label_for(v as usize));
        }
    }
    s.push('.');
    s
}

/// Replace each vertex's colour by its rank under `key`, ties sharing a rank.
fn rank_by<K: Ord>(keys: Vec<K>) -> Vec<u32> {
    let n = keys.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let mut out = vec![0u32; n];
    let mut rank = 0u32;
    for w in 0..n {
        if w > 0 && keys[idx[w]] != keys[idx[w - 1]] {
            rank = w as u32;
        }
        out[idx[w]] = rank;
    }
    out
}

fn initial_colors(edges: &[Vec<u32>], incidence: &[Vec<usize>]) -> Vec<u32> {
    let keys: Vec<(usize, Vec<usize>)> = incidence
        .iter()
        .map(|inc| {
            let mut sizes: Vec<usize> = inc.iter().map(|&e| edges[e].len()).collect();
            sizes.sort_unstable();
            (inc.len(), sizes)
        })
        .collect();
    rank_by(keys)
}

fn cell_count(colors: &[u32]) -> usize {
    let mut seen: Vec<u32> = colors.to_vec();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

struct Search<'a> {
    edges: &'a [Vec<u32>],
    incidence: &'a [Vec<usize>],
    best: Option<(Vec<Vec<u32>>, Vec<u32>)>,
    automorphisms: Vec<Vec<u32>>,
}

impl<'a> Search<'a> {
    /// Split cells by the multiset of co-edge colours until nothing changes.
    /// Ranks keep the old colour as the primary key, so cells only split and
    /// keep their relative order.
    fn refine(&self, mut colors: Vec<u32>) -> Vec<u32> {
        let mut cells = cell_count(&colors);
        loop {
            let edge_sigs: Vec<Vec<u32>> = self
                .edges
                .iter()
                .map(|e| {
                    let mut s: Vec<u32> = e.iter().map(|&v| colors[v as usize]).collect();
                    s.sort_unstable();
                    s
                })
                .collect();
            let keys: Vec<(u32, Vec<&Vec<u32>>)> = (0..colors.len())
                .map(|v| {
                    let mut sig: Vec<&Vec<u32>> =
                        self.incidence[v].iter().map(|&e| &edge_sigs[e]).collect();
                    sig.sort_unstable();
                    (colors[v], sig)
                })
                .collect();
            colors = rank_by(keys);
            let now = cell_count(&colors);
            if now == cells {
                return colors;
            }
            cells = now;
        }
    }

    fn explore(&mut self, colors: Vec<u32>, prefix: &mut Vec<u32>) {
        let colors = self.refine(colors);
        let n = colors.len();
        // cell sizes by colour (colours are ranks, so a cell of colour c spans c..c+size)
        let mut size = vec![0usize; n];
        for &c in &colors {
            size[c as usize] += 1;
        }
        let target = (0..n)
            .filter(|&c| size[c] > 1)
            .min_by_key(|&c| (size[c], c));
        let Some(target) = target else {
            self.leaf(colors);
            return;
        };
        let cell: Vec<u32> = (0..n as u32)
            .filter(|&v| colors[v as usize] == target as u32)
            .collect();
        let mut explored: Vec<u32> = Vec::new();
        for &v in &cell {
            if !explored.is_empty() && self.same_orbit(prefix, &explored, v) {
                continue;
            }
            explored.push(v);
            let child: Vec<u32> = colors
                .iter()
                .enumerate()
                .map(|(u, &c)| {
                    if c as usize == target && u as u32 != v {
                        c + 1
                    } else {
                        c
                    }
                })
                .collect();
            prefix.push(v);
            self.explore(child, prefix);
            prefix.pop();
        }
    }

    /// Is `v` in the orbit of an explored vertex under the automorphisms found
    /// so far that fix `prefix` pointwise?
    fn same_orbit(&self, prefix: &[u32], explored: &[u32], v: u32) -> bool {
        let gens: Vec<&Vec<u32>> = self
            .automorphisms
            .iter()
            .filter(|g| prefix.iter().all(|&p| g[p as usize] == p))
            .collect();
        if gens.is_empty() {
            return false;
        }
        let n = self.incidence.len();
        let mut parent: Vec<u32> = (0..n as u32).collect();
        fn find(p: &mut [u32], mut x: u32) -> u32 {
            while p[x as usize] != x {
                p[x as usize] = p[p[x as usize] as usize];
                x = p[x as usize];
            }
            x
        }
        for g in gens {
            for x in 0..n as u32 {
                let a = find(&mut parent, x);
                let b = find(&mut parent, g[x as usize]);
                if a != b {
                    parent[a as usize] = b;
                }
            }
        }
        let rv = find(&mut parent, v);
        explored.iter().any(|&u| find(&mut parent, u) == rv)
    }

    fn leaf(&mut self, colors: Vec<u32>) {
        let mut cert: Vec<Vec<u32>> = self
            .edges
            .iter()
            .map(|e| {
                let mut m: Vec<u32> = e.iter().map(|&v| colors[v as usize]).collect();
                m.sort_unstable();
                m
            })
            .collect();
        cert.sort_unstable();
        match &self.best {
            None => self.best = Some((cert, colors)),
            Some((best, best_colors)) => match cert.cmp(best) {
                std::cmp::Ordering::Less => self.best = Some((cert, colors)),
                std::cmp::Ordering::Equal => {
                    // colors^-1 . best_colors maps one labeling onto the other
                    let mut inv = vec![0u32; colors.len()];
                    for (v, &c) in colors.iter().enumerate() {
                        inv[c as usize] = v as u32;
                    }
                    let gamma: Vec<u32> =
                        best_colors.iter().map(|&c| inv[c as usize]).collect();
                    if gamma.iter().enumerate().any(|(v, &g)| v as u32 != g) {
                        self.automorphisms.push(gamma);
                    }
                }
                std::cmp::Ordering::Greater => {}
            },
        }
    }
}

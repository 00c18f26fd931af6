use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::mmp::label_for;
use crate::ray::Ray;

/// An MMP hypergraph: vertices are rays, edges are orthogonal tuples.
///
/// Vertex order within an edge is kept for serialization only; everything
/// else treats edges as sets.
#[derive(Clone, Debug, PartialEq)]
pub struct Hypergraph {
    vertex_count: usize,
    edges: Vec<Vec<u32>>,
    labels: Vec<String>,
    coords: Option<Vec<Option<Ray>>>,
}

impl Hypergraph {
    /// Build with standard labels, validating every structural invariant.
    pub fn new(vertex_count: usize, edges: Vec<Vec<u32>>) -> Result<Hypergraph> {
        let labels = (0..vertex_count).map(label_for).collect();
        Self::with_labels(vertex_count, edges, labels)
    }

    pub fn with_labels(
        vertex_count: usize,
        edges: Vec<Vec<u32>>,
        labels: Vec<String>,
    ) -> Result<Hypergraph> {
        let h = Hypergraph {
            vertex_count,
            edges,
            labels,
            coords: None,
        };
        h.validate()?;
        Ok(h)
    }

    /// Build from edges over arbitrary vertex ids, numbering vertices by first
    /// appearance and assigning standard labels.
    pub fn from_edges<I, E>(edges: I) -> Result<Hypergraph>
    where
        I: IntoIterator<Item = E>,
        E: IntoIterator<Item = usize>,
    {
        let mut ids: HashMap<usize, u32> = HashMap::new();
        let edges: Vec<Vec<u32>> = edges
            .into_iter()
            .map(|e| {
                e.into_iter()
                    .map(|v| {
                        let next = ids.len() as u32;
                        *ids.entry(v).or_insert(next)
                    })
                    .collect()
            })
            .collect();
        Hypergraph::new(ids.len(), edges)
    }

    fn validate(&self) -> Result<()> {
        if self.edges.is_empty() {
            return Err(Error::NoEdges);
        }
        if self.labels.len() != self.vertex_count {
            return Err(Error::BadCoordinates(format!(
                "{} labels for {} vertices",
                self.labels.len(),
                self.vertex_count
            )));
        }
        let mut covered = vec![false; self.vertex_count];
        let mut seen: HashMap<Vec<u32>, usize> = HashMap::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.is_empty() {
                return Err(Error::EmptyEdge(i));
            }
            let mut sorted = e.clone();
            sorted.sort_unstable();
            for w in sorted.windows(2) {
                if w[0] == w[1] {
                    return Err(Error::DuplicateVertex {
                        label: self.labels[w[0] as usize].clone(),
                        edge: i,
                    });
                }
            }
            for &v in &sorted {
                let slot = covered
                    .get_mut(v as usize)
                    .ok_or(Error::VertexOutOfRange(v))?;
                *slot = true;
            }
            if let Some(&j) = seen.get(&sorted) {
                return Err(Error::DuplicateEdge(j, i));
            }
            seen.insert(sorted, i);
        }
        if let Some(v) = covered.iter().position(|c| !c) {
            return Err(Error::IsolatedVertex(self.labels[v].clone()));
        }
        let mut label_set = HashMap::new();
        for (i, l) in self.labels.iter().enumerate() {
            if label_set.insert(l.as_str(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let bad = mmp_violations(self);
        if !bad.is_empty() {
            return Err(Error::MmpViolation(bad));
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// `(vertices, edges)`, the usual "v-e" size signature.
    pub fn size(&self) -> (usize, usize) {
        (self.vertex_count, self.edges.len())
    }

    pub fn edges(&self) -> &[Vec<u32>] {
        &self.edges
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    /// Largest edge size; the dimension the hypergraph lives in.
    pub fn dimension(&self) -> usize {
        self.edges.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn coordinatization(&self) -> Option<&[Option<Ray>]> {
        self.coords.as_deref()
    }

    pub fn ray(&self, v: usize) -> Option<&Ray> {
        self.coords.as_ref().and_then(|c| c[v].as_ref())
    }

    pub fn set_coordinatization(&mut self, coords: Vec<Option<Ray>>) {
        assert_eq!(coords.len(), self.vertex_count);
        self.coords = Some(coords);
    }

    pub fn clear_coordinatization(&mut self) {
        self.coords = None;
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count];
        for e in &self.edges {
            for &v in e {
                deg[v as usize] += 1;
            }
        }
        deg
    }

    /// Keep only the listed edges (in the given order), drop vertices that
    /// become isolated and renumber the rest by first appearance. Labels are
    /// reassigned from the standard alphabet; rays travel with their vertices.
    pub fn sub_hypergraph(&self, keep: &[usize]) -> Result<Hypergraph> {
        for &e in keep {
            if e >= self.edges.len() {
                return Err(Error::EdgeOutOfRange(e, self.edges.len()));
            }
        }
        let mut map = vec![u32::MAX; self.vertex_count];
        let mut order = Vec::new();
        let edges: Vec<Vec<u32>> = keep
            .iter()
            .map(|&e| {
                self.edges[e]
                    .iter()
                    .map(|&v| {
                        if map[v as usize] == u32::MAX {
                            map[v as usize] = order.len() as u32;
                            order.push(v as usize);
                        }
                        map[v as usize]
                    })
                    .collect()
            })
            .collect();
        let mut h = Hypergraph::new(order.len(), edges)?;
        if let Some(coords) = &self.coords {
            h.coords = Some(order.iter().map(|&v| coords[v].clone()).collect());
        }
        Ok(h)
    }

    /// Apply a vertex permutation (`perm[old] = new`), keeping edge order.
    pub fn relabeled(&self, perm: &[usize]) -> Result<Hypergraph> {
        let edges = self
            .edges
            .iter()
            .map(|e| e.iter().map(|&v| perm[v as usize] as u32).collect())
            .collect();
        let mut h = Hypergraph::new(self.vertex_count, edges)?;
        if let Some(coords) = &self.coords {
            let mut moved = vec![None; self.vertex_count];
            for (old, r) in coords.iter().enumerate() {
                moved[perm[old]] = r.clone();
            }
            h.coords = Some(moved);
        }
        Ok(h)
    }

    /// Edges as sorted vertex sets.
    pub fn sorted_edges(&self) -> Vec<Vec<u32>> {
        self.edges
            .iter()
            .map(|e| {
                let mut s = e.clone();
                s.sort_unstable();
                s
            })
            .collect()
    }
}

/// Edge pairs breaking the MMP rule: with `n` the hypergraph dimension
/// (largest edge size), two edges meeting in exactly `n - 2` vertices must
/// both have at least `n` vertices.
pub fn mmp_violations(h: &Hypergraph) -> Vec<(usize, usize)> {
    let n = h.dimension();
    if n < 2 {
        return Vec::new();
    }
    let target = n - 2;
    let sorted = h.sorted_edges();
    let mut out = Vec::new();
    for i in 0..sorted.len() {
        for j in (i + 1)..sorted.len() {
            if sorted[i].len() >= n && sorted[j].len() >= n {
                continue;
            }
            if intersection_size(&sorted[i], &sorted[j]) == target {
                out.push((i, j));
            }
        }
    }
    out
}

pub(crate) fn intersection_size(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut k) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                k += 1;
                i += 1;
                j += 1;
            }
        }
    }
    k
}

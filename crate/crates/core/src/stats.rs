//! Size distributions of critical sets: CSV and a text histogram.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write;

use crate::hypergraph::Hypergraph;
use crate::iso::canonical_form;

/// How repeated isomorphic inputs are counted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountMode {
    /// One count per isomorphism class.
    Dedup,
    /// One count per input.
    Raw,
}

/// Counts per (vertices, edges), ordered by edges, then vertices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Distribution {
    // keyed (edges, vertices) so iteration order is the report order
    bins: BTreeMap<(usize, usize), u64>,
}

impl Distribution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, vertices: usize, edges: usize, count: u64) {
        *self.bins.entry((edges, vertices)).or_default() += count;
    }

    /// Bins as `(vertices, edges, count)`, sorted by (edges, vertices).
    pub fn bins(&self) -> Vec<(usize, usize, u64)> {
        self.bins.iter().map(|(&(e, v), &c)| (v, e, c)).collect()
    }

    pub fn total(&self) -> u64 {
        self.bins.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("vertices,edges,count\n");
        for (v, e, c) in self.bins() {
            writeln!(out, "{v},{e},{c}").unwrap();
        }
        out
    }

    /// One bar per bin, scaled so the largest bin is `width` characters.
    pub fn histogram(&self, width: usize) -> String {
        let max = self.bins.values().copied().max().unwrap_or(0);
        let tags: Vec<String> = self.bins().iter().map(|(v, e, _)| format!("{v}-{e}")).collect();
        let pad = tags.iter().map(String::len).max().unwrap_or(0);
        let mut out = String::new();
        for (tag, (_, _, c)) in tags.iter().zip(self.bins()) {
            // nonzero bins always get at least one mark
            let bar = ((c as u128 * width as u128).div_ceil(max as u128)) as usize;
            writeln!(out, "{tag:>pad$} | {} {c}", "#".repeat(bar)).unwrap();
        }
        out
    }
}

/// Accumulates hypergraphs one at a time.
#[derive(Debug)]
pub struct DistributionBuilder {
    mode: CountMode,
    seen: HashSet<String>,
    dist: Distribution,
}

impl DistributionBuilder {
    pub fn new(mode: CountMode) -> Self {
        DistributionBuilder {
            mode,
            seen: HashSet::new(),
            dist: Distribution::new(),
        }
    }

    pub fn push(&mut self, h: &Hypergraph) {
        if self.mode == CountMode::Dedup && !self.seen.insert(canonical_form(h).canonical_string) {
            return;
        }
        let (v, e) = h.size();
        self.dist.add(v, e, 1);
    }

    pub fn finish(self) -> Distribution {
        self.dist
    }
}

pub fn distribution<'a, I>(items: I, mode: CountMode) -> Distribution
where
    I: IntoIterator<Item = &'a Hypergraph>,
{
    let mut b = DistributionBuilder::new(mode);
    for h in items {
        b.push(h);
    }
    b.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mmp::parse_hypergraph;

    #[test]
    fn sorted_by_edges_then_vertices() {
        let mut d = Distribution::new();
        d.add(33, 11, 1);
        d.add(21, 7, 1);
        d.add(20, 11, 2);
        assert_eq!(d.bins(), [(21, 7, 1), (20, 11, 2), (33, 11, 1)]);
        assert_eq!(
            d.to_csv(),
            "vertices,edges,count\n21,7,1\n20,11,2\n33,11,1\n"
        );
        assert_eq!(d.total(), 4);
    }

    #[test]
    fn dedup_and_raw() {
        let a = parse_hypergraph("12,23,31.").unwrap();
        let b = parse_hypergraph("AB,BC,CA.").unwrap();
        let c = parse_hypergraph("12,23.").unwrap();
        let all = [a, b, c];
        assert_eq!(distribution(&all, CountMode::Dedup).bins(), [(3, 2, 1), (3, 3, 1)]);
        assert_eq!(distribution(&all, CountMode::Raw).bins(), [(3, 2, 1), (3, 3, 2)]);
    }

    #[test]
    fn histogram_bars() {
        let mut d = Distribution::new();
        d.add(18, 9, 1);
        d.add(120, 64, 40);
        let h = d.histogram(20);
        assert_eq!(h, "  18-9 | # 1\n120-64 | #################### 40\n");
        assert_eq!(Distribution::new().histogram(10), "");
    }
}

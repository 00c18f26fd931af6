//! 01-state search: backtracking with exactly-one propagation.
//!
//! A ONE on a vertex forces ZERO on every co-edge vertex, an edge with all but
//! one vertex at ZERO forces ONE on the last, and an edge with two ONEs or no
//! free vertex left is a conflict.
//!
//! On top of that every edge also says "the sum of my vertices is odd". Those
//! equations, plus one unit equation per assigned vertex, are kept in an
//! incremental GF(2) system; an inconsistency prunes the node. This catches
//! parity contradictions (odd edge sets covering every free vertex an even
//! number of times) that plain backtracking can only refute exponentially.

use fixedbitset::FixedBitSet;

use crate::hypergraph::Hypergraph;
use crate::cdcl;
use crate::gf2::{Insert, XorSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Zero,
    One,
    Unassigned,
}

/// Per-vertex values of a (possibly partial) 01-assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment(pub Vec<Value>);

impl Assignment {
    pub fn values(&self) -> &[Value] {
        &self.0
    }

    pub fn is_total(&self) -> bool {
        self.0.iter().all(|&v| v != Value::Unassigned)
    }

    /// True iff total and every edge holds exactly one ONE.
    pub fn is_admissible(&self, h: &Hypergraph) -> bool {
        self.is_total()
            && h.edges().iter().all(|e| {
                e.iter()
                    .filter(|&&v| self.0[v as usize] == Value::One)
                    .count()
                    == 1
            })
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BranchHeuristic {
    /// Unassigned vertex of largest degree, ties to the lowest index.
    #[default]
    MaxDegree,
    /// Lowest-indexed unassigned vertex.
    FirstUnassigned,
}

/// Result of a search over a subset of edges.
#[derive(Clone, Debug)]
pub enum Outcome {
    /// A 01-state of the active edges, indexed by the host's vertices;
    /// vertices outside the active edges stay `Unassigned`.
    State(Assignment),
    /// No 01-state. `core` holds every active edge the refutation used; the
    /// core alone is already unsatisfiable.
    Refuted { core: FixedBitSet },
}

impl Outcome {
    pub fn is_refuted(&self) -> bool {
        matches!(self, Outcome::Refuted { .. })
    }
}

/// Answers 01-state queries for edge subsets of one host hypergraph.
pub struct SubsetSolver<'a> {
    host: &'a Hypergraph,
    heuristic: BranchHeuristic,
    parity: bool,
    learning: bool,
}

impl<'a> SubsetSolver<'a> {
    pub fn new(host: &'a Hypergraph) -> Self {
        SubsetSolver {
            host,
            heuristic: BranchHeuristic::default(),
            parity: true,
            learning: true,
        }
    }

    /// Toggle clause learning (on by default). Without it the search is the
    /// plain depth-first backtracking over the branch heuristic's order;
    /// verdicts are the same, only the running time differs.
    pub fn with_learning(mut self, on: bool) -> Self {
        self.learning = on;
        self
    }

    /// Toggle the GF(2) reasoning (on by default). Without it the search is
    /// plain backtracking, exact but exponential on parity-type instances.
    pub fn with_parity(mut self, on: bool) -> Self {
        self.parity = on;
        self
    }

    pub fn with_heuristic(mut self, heuristic: BranchHeuristic) -> Self {
        self.heuristic = heuristic;
        self
    }

    pub fn host(&self) -> &'a Hypergraph {
        self.host
    }

    pub fn all_edges(&self) -> FixedBitSet {
        let mut s = FixedBitSet::with_capacity(self.host.edge_count());
        s.insert_range(..);
        s
    }

    /// True iff the active edges admit no 01-state.
    pub fn is_ks(&self, active: &FixedBitSet) -> bool {
        self.search(active, false).is_refuted()
    }

    pub fn find_state(&self, active: &FixedBitSet) -> Option<Assignment> {
        match self.search(active, false) {
            Outcome::State(a) => Some(a),
            Outcome::Refuted { .. } => None,
        }
    }

    /// Like [`find_state`](Self::find_state) but also reports the refutation core.
    pub fn solve(&self, active: &FixedBitSet) -> Outcome {
        self.search(active, true)
    }

    fn search(&self, active: &FixedBitSet, track_core: bool) -> Outcome {
        // the learning search keeps its own parity system
        let backtrack_parity = self.parity && !self.learning;
        let mut inst = Instance::build(self.host, active, self.heuristic, backtrack_parity, track_core);
        let found = if self.learning {
            let priority = inst.priorities();
            let opts = cdcl::Options {
                parity: self.parity,
                track_core,
                priority,
            };
            match cdcl::solve(&inst.edges, inst.vertex_ids.len(), opts) {
                cdcl::Verdict::State(values) => {
                    inst.values = values;
                    true
                }
                cdcl::Verdict::Refuted(core) => {
                    inst.used = FixedBitSet::with_capacity(inst.edges.len());
                    inst.used.extend(core);
                    false
                }
            }
        } else {
            inst.run()
        };
        if found {
            let mut values = vec![Value::Unassigned; self.host.vertex_count()];
            for (local, &global) in inst.vertex_ids.iter().enumerate() {
                values[global as usize] = match inst.values[local] {
                    1 => Value::One,
                    0 => Value::Zero,
                    _ => Value::Unassigned,
                };
            }
            Outcome::State(Assignment(values))
        } else {
            let mut core = FixedBitSet::with_capacity(self.host.edge_count());
            for (local, &global) in inst.edge_ids.iter().enumerate() {
                if !track_core || inst.used.contains(local) {
                    core.insert(global);
                }
            }
            Outcome::Refuted { core }
        }
    }
}

const FREE: i8 = -1;

/// Compact copy of the active sub-hypergraph plus search state.
struct Instance {
    edge_ids: Vec<usize>,
    vertex_ids: Vec<u32>,
    edges: Vec<Vec<u32>>,
    incidence: Vec<Vec<u32>>,
    branch_order: Vec<u32>,
    values: Vec<i8>,
    ones: Vec<u32>,
    zeros: Vec<u32>,
    trail: Vec<u32>,
    queue_head: usize,
    xor: Option<XorSystem>,
    /// GF(2) system size before each trail entry was assigned.
    xor_marks: Vec<usize>,
    /// Conflict found while loading the edge equations.
    root_conflict: bool,
    track_core: bool,
    used: FixedBitSet,
}

impl Instance {
    fn build(
        host: &Hypergraph,
        active: &FixedBitSet,
        heuristic: BranchHeuristic,
        parity: bool,
        track_core: bool,
    ) -> Instance {
        let mut local = vec![u32::MAX; host.vertex_count()];
        let mut vertex_ids = Vec::new();
        let mut edge_ids = Vec::new();
        let mut edges = Vec::new();
        for e in active.ones() {
            let Some(verts) = host.edges().get(e) else {
                continue;
            };
            edge_ids.push(e);
            edges.push(
                verts
                    .iter()
                    .map(|&v| {
                        if local[v as usize] == u32::MAX {
                            local[v as usize] = vertex_ids.len() as u32;
                            vertex_ids.push(v);
                        }
                        local[v as usize]
                    })
                    .collect::<Vec<u32>>(),
            );
        }
        let n = vertex_ids.len();
        let mut incidence = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            for &v in e {
                incidence[v as usize].push(i as u32);
            }
        }
        let mut branch_order: Vec<u32> = (0..n as u32).collect();
        match heuristic {
            BranchHeuristic::MaxDegree => branch_order.sort_by(|&a, &b| {
                incidence[b as usize]
                    .len()
                    .cmp(&incidence[a as usize].len())
                    .then(vertex_ids[a as usize].cmp(&vertex_ids[b as usize]))
            }),
            BranchHeuristic::FirstUnassigned => {
                branch_order.sort_by_key(|&a| vertex_ids[a as usize])
            }
        }
        let m = edges.len();
        let mut used = FixedBitSet::with_capacity(if track_core { m } else { 0 });
        let mut root_conflict = false;
        let xor = parity.then(|| {
            let mut xor = XorSystem::new(n, if track_core { m } else { 0 });
            for (i, e) in edges.iter().enumerate() {
                if let Insert::Conflict(tags) = xor.insert(e, true, Some(i)) {
                    root_conflict = true;
                    used.extend(tags);
                    break;
                }
            }
            xor
        });
        Instance {
            edge_ids,
            vertex_ids,
            edges,
            incidence,
            branch_order,
            values: vec![FREE; n],
            ones: vec![0; m],
            zeros: vec![0; m],
            trail: Vec::with_capacity(n),
            queue_head: 0,
            xor,
            xor_marks: Vec::with_capacity(n),
            root_conflict,
            track_core,
            used,
        }
    }

    /// Branching priority for the learning search: the branch order's rank,
    /// so learning starts out exactly where backtracking would.
    fn priorities(&self) -> Vec<f64> {
        let n = self.branch_order.len();
        let mut p = vec![0.0; n];
        for (rank, &v) in self.branch_order.iter().enumerate() {
            p[v as usize] = (n - rank) as f64 / n as f64 * 1e-3;
        }
        p
    }

    fn mark(&mut self, e: u32) {
        if self.track_core {
            self.used.insert(e as usize);
        }
    }

    /// Record `v := val`; returns false on an immediate conflict.
    fn assign(&mut self, v: u32, val: i8) -> bool {
        self.values[v as usize] = val;
        self.trail.push(v);
        let mut ok = true;
        for &e in &self.incidence[v as usize] {
            if val == 1 {
                self.ones[e as usize] += 1;
            } else {
                self.zeros[e as usize] += 1;
            }
        }
        for k in 0..self.incidence[v as usize].len() {
            let e = self.incidence[v as usize][k] as usize;
            if self.ones[e] > 1 || self.zeros[e] as usize == self.edges[e].len() {
                self.mark(e as u32);
                ok = false;
            }
        }
        let Some(xor) = self.xor.as_mut() else {
            return ok;
        };
        self.xor_marks.push(xor.len());
        if ok {
            if let Insert::Conflict(tags) = xor.insert_unit(v, val == 1) {
                // the unit rows stand for assignments whose reasons are marked
                // already; only the edge equations need recording
                if self.track_core {
                    self.used.extend(tags);
                }
                ok = false;
            }
        }
        ok
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let v = self.trail.pop().unwrap();
            let val = self.values[v as usize];
            for &e in &self.incidence[v as usize] {
                if val == 1 {
                    self.ones[e as usize] -= 1;
                } else {
                    self.zeros[e as usize] -= 1;
                }
            }
            self.values[v as usize] = FREE;
            if let Some(xor) = self.xor.as_mut() {
                xor.truncate(self.xor_marks.pop().unwrap());
            }
        }
        self.queue_head = self.queue_head.min(len);
    }

    fn propagate(&mut self) -> bool {
        while self.queue_head < self.trail.len() {
            let v = self.trail[self.queue_head];
            self.queue_head += 1;
            let val = self.values[v as usize];
            for k in 0..self.incidence[v as usize].len() {
                let e = self.incidence[v as usize][k];
                let eu = e as usize;
                if val == 1 {
                    // everything else in e must be ZERO
                    let mut forced = false;
                    for j in 0..self.edges[eu].len() {
                        let u = self.edges[eu][j];
                        if self.values[u as usize] == FREE {
                            forced = true;
                            if !self.assign(u, 0) {
                                self.mark(e);
                                return false;
                            }
                        }
                    }
                    if forced {
                        self.mark(e);
                    }
                } else if self.ones[eu] == 0 && self.zeros[eu] as usize + 1 == self.edges[eu].len() {
                    let u = self.edges[eu]
                        .iter()
                        .copied()
                        .find(|&u| self.values[u as usize] == FREE);
                    if let Some(u) = u {
                        self.mark(e);
                        if !self.assign(u, 1) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn run(&mut self) -> bool {
        !self.root_conflict && self.branch(0)
    }

    fn branch(&mut self, scan_from: usize) -> bool {
        if !self.propagate() {
            return false;
        }
        let mut pos = scan_from;
        while pos < self.branch_order.len() && self.values[self.branch_order[pos] as usize] != FREE
        {
            pos += 1;
        }
        if pos == self.branch_order.len() {
            return true;
        }
        let v = self.branch_order[pos];
        let mark = self.trail.len();
        if self.assign(v, 1) && self.branch(pos + 1) {
            return true;
        }
        self.undo_to(mark);
        if self.assign(v, 0) && self.branch(pos + 1) {
            return true;
        }
        self.undo_to(mark);
        false
    }
}

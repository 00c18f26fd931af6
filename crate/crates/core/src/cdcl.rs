//! Conflict-driven 01-state search.
//!
//! Exactly-one propagation on the edges, conflict analysis to the first unique
//! implication point, learned clauses with two watched literals, activity
//! based branching seeded by vertex degree, ONE-first phase saving and Luby
//! restarts. Parity contradictions found by the GF(2) system are turned into
//! ordinary conflict clauses over the assignments they depend on.
//!
//! Literal `2v` reads "v is ONE", `2v + 1` reads "v is ZERO".

use crate::gf2::{Insert, XorSystem};

const FREE: i8 = -1;

fn lit(v: u32, one: bool) -> u32 {
    2 * v + u32::from(!one)
}

fn var(l: u32) -> u32 {
    l >> 1
}

#[derive(Clone, Copy)]
enum Reason {
    Decision,
    /// Forced ZERO: `by` is ONE in the same edge.
    AtMostOne { edge: u32, by: u32 },
    /// Forced ONE: every other vertex of the edge is ZERO.
    AtLeastOne { edge: u32 },
    Learned(u32),
}

struct Clause {
    lits: Vec<u32>,
    /// Edges this clause was derived from (empty unless cores are tracked).
    deps: Vec<u64>,
}

struct Conflict {
    lits: Vec<u32>,
    deps: Vec<u64>,
}

pub(crate) enum Verdict {
    /// Values per vertex, 1 for ONE.
    State(Vec<i8>),
    /// Indices of the edges the refutation depends on (all edges unless
    /// cores are tracked).
    Refuted(Vec<usize>),
}

pub(crate) struct Options {
    pub parity: bool,
    pub track_core: bool,
    /// Initial branching priority per vertex; higher goes first.
    pub priority: Vec<f64>,
}

pub(crate) fn solve(edges: &[Vec<u32>], n: usize, opts: Options) -> Verdict {
    let mut s = Search::new(edges, n, opts);
    s.run()
}

struct Search<'a> {
    edges: &'a [Vec<u32>],
    incidence: Vec<Vec<u32>>,
    value: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<Reason>,
    trail: Vec<u32>,
    trail_lim: Vec<usize>,
    qhead: usize,
    ones: Vec<u32>,
    zeros: Vec<u32>,
    xor: Option<XorSystem>,
    xor_marks: Vec<usize>,
    clauses: Vec<Clause>,
    watches: Vec<Vec<u32>>,
    activity: Vec<f64>,
    var_inc: f64,
    phase: Vec<bool>,
    seen: Vec<bool>,
    track: bool,
    dep_words: usize,
    /// Dependencies of level-0 assignments, for core extraction.
    unit_deps: Vec<Vec<u64>>,
}

impl<'a> Search<'a> {
    fn new(edges: &'a [Vec<u32>], n: usize, opts: Options) -> Self {
        let m = edges.len();
        let mut incidence = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            for &v in e {
                incidence[v as usize].push(i as u32);
            }
        }
        let dep_words = if opts.track_core { m.div_ceil(64) } else { 0 };
        Search {
            edges,
            incidence,
            value: vec![FREE; n],
            level: vec![0; n],
            reason: vec![Reason::Decision; n],
            trail: Vec::with_capacity(n),
            trail_lim: Vec::new(),
            qhead: 0,
            ones: vec![0; m],
            zeros: vec![0; m],
            // tags are needed to explain parity conflicts, cores or not
            xor: opts.parity.then(|| XorSystem::new(n, m)),
            xor_marks: Vec::with_capacity(n),
            clauses: Vec::new(),
            watches: vec![Vec::new(); 2 * n],
            activity: opts.priority,
            var_inc: 1.0,
            phase: vec![true; n],
            seen: vec![false; n],
            track: opts.track_core,
            dep_words,
            unit_deps: vec![Vec::new(); if opts.track_core { n } else { 0 }],
        }
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn lit_true(&self, l: u32) -> bool {
        let v = self.value[var(l) as usize];
        v != FREE && (v == 1) == (l & 1 == 0)
    }

    fn lit_false(&self, l: u32) -> bool {
        let v = self.value[var(l) as usize];
        v != FREE && (v == 1) != (l & 1 == 0)
    }

    fn edge_deps(&self, edges: impl IntoIterator<Item = usize>) -> Vec<u64> {
        let mut d = vec![0u64; self.dep_words];
        if self.track {
            for e in edges {
                d[e / 64] |= 1 << (e % 64);
            }
        }
        d
    }

    fn all_edges(&self) -> Vec<usize> {
        (0..self.edges.len()).collect()
    }

    fn run(&mut self) -> Verdict {
        if let Some(xor) = self.xor.as_mut() {
            for (i, e) in self.edges.iter().enumerate() {
                if let Insert::Conflict(tags) = xor.insert(e, true, Some(i)) {
                    return Verdict::Refuted(tags);
                }
            }
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.len() == 1 && self.value[e[0] as usize] == FREE {
                if let Some(c) = self.assign(lit(e[0], true), Reason::AtLeastOne { edge: i as u32 }) {
                    return self.refuted(c);
                }
            }
        }
        let mut restart = 0u32;
        loop {
            let budget = 64 * luby(restart);
            restart += 1;
            match self.search(budget) {
                Some(v) => return v,
                None => self.backjump(0),
            }
        }
    }

    /// Search until a verdict or until `budget` conflicts have been analyzed.
    fn search(&mut self, budget: u64) -> Option<Verdict> {
        let mut conflicts = 0u64;
        let mut pending: Option<Conflict> = None;
        loop {
            if let Some(mut c) = pending.take().or_else(|| self.propagate()) {
                loop {
                    if self.decision_level() == 0 {
                        return Some(self.refuted(c));
                    }
                    conflicts += 1;
                    let (learnt, back, deps) = self.analyze(c);
                    self.backjump(back);
                    // asserting the learned literal can only clash through
                    // the parity system, which detects but never propagates
                    match self.learn(learnt, deps) {
                        Some(next) => c = next,
                        None => break,
                    }
                }
                self.var_inc /= 0.95;
                continue;
            }
            if conflicts >= budget {
                return None;
            }
            let Some(v) = self.pick() else {
                return Some(Verdict::State(self.value.clone()));
            };
            self.trail_lim.push(self.trail.len());
            pending = self.assign(lit(v, self.phase[v as usize]), Reason::Decision);
        }
    }

    fn pick(&self) -> Option<u32> {
        let mut best: Option<u32> = None;
        for v in 0..self.value.len() {
            if self.value[v] == FREE
                && best.map_or(true, |b| self.activity[v] > self.activity[b as usize])
            {
                best = Some(v as u32);
            }
        }
        best
    }

    /// Make `l` true. Returns a conflict if an edge or the parity system
    /// breaks; the assignment stays on the trail either way.
    fn assign(&mut self, l: u32, reason: Reason) -> Option<Conflict> {
        let v = var(l);
        let one = l & 1 == 0;
        self.value[v as usize] = i8::from(one);
        self.level[v as usize] = self.decision_level();
        self.reason[v as usize] = reason;
        self.trail.push(v);
        if self.track && self.decision_level() == 0 {
            self.unit_deps[v as usize] = self.unit_dependency(v);
        }
        for &e in &self.incidence[v as usize] {
            if one {
                self.ones[e as usize] += 1;
            } else {
                self.zeros[e as usize] += 1;
            }
        }
        for &e in &self.incidence[v as usize] {
            let eu = e as usize;
            if self.ones[eu] > 1 {
                let other = self.edges[eu]
                    .iter()
                    .copied()
                    .find(|&u| u != v && self.value[u as usize] == 1)
                    .expect("a second ONE in the edge");
                let deps = self.edge_deps([eu]);
                self.xor_marks.push(self.xor.as_ref().map_or(0, XorSystem::len));
                return Some(Conflict {
                    lits: vec![lit(v, false), lit(other, false)],
                    deps,
                });
            }
            if self.zeros[eu] as usize == self.edges[eu].len() {
                let deps = self.edge_deps([eu]);
                self.xor_marks.push(self.xor.as_ref().map_or(0, XorSystem::len));
                return Some(Conflict {
                    lits: self.edges[eu].iter().map(|&u| lit(u, true)).collect(),
                    deps,
                });
            }
        }
        let Some(xor) = self.xor.as_mut() else {
            self.xor_marks.push(0);
            return None;
        };
        self.xor_marks.push(xor.len());
        match xor.insert_unit(v, one) {
            Insert::Conflict(tags) => Some(self.parity_conflict(tags)),
            _ => None,
        }
    }

    /// The combined edges cover the vertices of `u` an odd number of times and
    /// all others evenly; those vertices cannot keep their current values.
    fn parity_conflict(&self, tags: Vec<usize>) -> Conflict {
        let mut odd = vec![false; self.value.len()];
        for &e in &tags {
            for &u in &self.edges[e] {
                odd[u as usize] ^= true;
            }
        }
        let lits = (0..self.value.len() as u32)
            .filter(|&u| odd[u as usize])
            .map(|u| {
                debug_assert!(self.value[u as usize] != FREE);
                lit(u, self.value[u as usize] != 1)
            })
            .collect();
        Conflict {
            lits,
            deps: self.edge_deps(tags),
        }
    }

    fn reason_clause(&self, v: u32) -> (Vec<u32>, Vec<u64>) {
        match self.reason[v as usize] {
            Reason::Decision => unreachable!("decisions have no reason clause"),
            Reason::AtMostOne { edge, by } => (
                vec![lit(v, false), lit(by, false)],
                self.edge_deps([edge as usize]),
            ),
            Reason::AtLeastOne { edge } => {
                let mut lits = vec![lit(v, true)];
                lits.extend(
                    self.edges[edge as usize]
                        .iter()
                        .filter(|&&u| u != v)
                        .map(|&u| lit(u, true)),
                );
                (lits, self.edge_deps([edge as usize]))
            }
            Reason::Learned(c) => {
                let c = &self.clauses[c as usize];
                (c.lits.clone(), c.deps.clone())
            }
        }
    }

    /// Edges behind a level-0 assignment, closing over earlier level-0 ones.
    fn unit_dependency(&self, v: u32) -> Vec<u64> {
        if let Reason::Decision = self.reason[v as usize] {
            return vec![0; self.dep_words];
        }
        let (lits, mut deps) = self.reason_clause(v);
        for l in lits {
            let u = var(l);
            if u != v {
                or_into(&mut deps, &self.unit_deps[u as usize]);
            }
        }
        deps
    }

    fn refuted(&self, c: Conflict) -> Verdict {
        if !self.track {
            return Verdict::Refuted(self.all_edges());
        }
        let mut deps = c.deps;
        for l in c.lits {
            or_into(&mut deps, &self.unit_deps[var(l) as usize]);
        }
        let mut out = Vec::new();
        for (i, &w) in deps.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                out.push(i * 64 + w.trailing_zeros() as usize);
                w &= w - 1;
            }
        }
        Verdict::Refuted(out)
    }

    fn propagate(&mut self) -> Option<Conflict> {
        while self.qhead < self.trail.len() {
            let v = self.trail[self.qhead];
            self.qhead += 1;
            let one = self.value[v as usize] == 1;
            for k in 0..self.incidence[v as usize].len() {
                let e = self.incidence[v as usize][k];
                let eu = e as usize;
                if one {
                    for j in 0..self.edges[eu].len() {
                        let u = self.edges[eu][j];
                        if self.value[u as usize] == FREE {
                            let r = Reason::AtMostOne { edge: e, by: v };
                            if let Some(c) = self.assign(lit(u, false), r) {
                                return Some(c);
                            }
                        }
                    }
                } else if self.ones[eu] == 0 && self.zeros[eu] as usize + 1 == self.edges[eu].len()
                {
                    let u = self.edges[eu]
                        .iter()
                        .copied()
                        .find(|&u| self.value[u as usize] == FREE);
                    if let Some(u) = u {
                        if let Some(c) = self.assign(lit(u, true), Reason::AtLeastOne { edge: e }) {
                            return Some(c);
                        }
                    }
                }
            }
            if let Some(c) = self.propagate_clauses(lit(v, !one)) {
                return Some(c);
            }
        }
        None
    }

    /// Visit the learned clauses watching `falsified`.
    fn propagate_clauses(&mut self, falsified: u32) -> Option<Conflict> {
        let mut ws = std::mem::take(&mut self.watches[falsified as usize]);
        let mut i = 0;
        let mut conflict = None;
        while i < ws.len() {
            let ci = ws[i] as usize;
            let lits = &mut self.clauses[ci].lits;
            if lits[0] == falsified {
                lits.swap(0, 1);
            }
            let first = lits[0];
            if self.lit_true(first) {
                i += 1;
                continue;
            }
            let lits = &self.clauses[ci].lits;
            if let Some(k) = (2..lits.len()).find(|&k| !self.lit_false(lits[k])) {
                let lits = &mut self.clauses[ci].lits;
                lits.swap(1, k);
                let w = lits[1];
                self.watches[w as usize].push(ci as u32);
                ws.swap_remove(i);
                continue;
            }
            i += 1;
            if self.lit_false(first) {
                conflict = Some(Conflict {
                    lits: self.clauses[ci].lits.clone(),
                    deps: self.clauses[ci].deps.clone(),
                });
                break;
            }
            if let Some(c) = self.assign(first, Reason::Learned(ci as u32)) {
                conflict = Some(c);
                break;
            }
        }
        // keep any watches added to this list while it was taken out
        let added = std::mem::take(&mut self.watches[falsified as usize]);
        ws.extend(added);
        self.watches[falsified as usize] = ws;
        conflict
    }

    fn bump(&mut self, v: u32) {
        self.activity[v as usize] += self.var_inc;
        if self.activity[v as usize] > 1e100 {
            for a in &mut self.activity {
                *a *= 1e-100;
            }
            self.var_inc *= 1e-100;
        }
    }

    /// First-UIP analysis; returns the learned clause (asserting literal
    /// first), the level to jump back to and the clause's dependencies.
    fn analyze(&mut self, c: Conflict) -> (Vec<u32>, u32, Vec<u64>) {
        let current = self.decision_level();
        let mut learnt = vec![0u32];
        let mut deps = c.deps;
        let mut clause = c.lits;
        let mut pending = 0usize;
        let mut idx = self.trail.len();
        let mut uip;
        loop {
            for &q in &clause {
                let x = var(q) as usize;
                if self.seen[x] || self.lit_true(q) {
                    continue;
                }
                if self.level[x] == 0 {
                    if self.track {
                        let d = self.unit_deps[x].clone();
                        or_into(&mut deps, &d);
                    }
                    continue;
                }
                self.seen[x] = true;
                self.bump(x as u32);
                if self.level[x] == current {
                    pending += 1;
                } else {
                    learnt.push(q);
                }
            }
            loop {
                idx -= 1;
                if self.seen[self.trail[idx] as usize] {
                    break;
                }
            }
            uip = self.trail[idx];
            self.seen[uip as usize] = false;
            pending -= 1;
            if pending == 0 {
                break;
            }
            let (lits, d) = self.reason_clause(uip);
            or_into(&mut deps, &d);
            clause = lits;
        }
        learnt[0] = lit(uip, self.value[uip as usize] != 1);
        for &q in &learnt[1..] {
            self.seen[var(q) as usize] = false;
        }
        let mut back = 0;
        if learnt.len() > 1 {
            let (k, lv) = (1..learnt.len())
                .map(|k| (k, self.level[var(learnt[k]) as usize]))
                .max_by_key(|&(_, lv)| lv)
                .unwrap();
            learnt.swap(1, k);
            back = lv;
        }
        (learnt, back, deps)
    }

    fn learn(&mut self, lits: Vec<u32>, deps: Vec<u64>) -> Option<Conflict> {
        let ci = self.clauses.len() as u32;
        if lits.len() > 1 {
            self.watches[lits[0] as usize].push(ci);
            self.watches[lits[1] as usize].push(ci);
        }
        let first = lits[0];
        self.clauses.push(Clause { lits, deps });
        self.assign(first, Reason::Learned(ci))
    }

    fn backjump(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let target = self.trail_lim[level as usize];
        while self.trail.len() > target {
            let v = self.trail.pop().unwrap();
            let one = self.value[v as usize] == 1;
            for &e in &self.incidence[v as usize] {
                if one {
                    self.ones[e as usize] -= 1;
                } else {
                    self.zeros[e as usize] -= 1;
                }
            }
            self.phase[v as usize] = one;
            self.value[v as usize] = FREE;
            let mark = self.xor_marks.pop().unwrap();
            if let Some(xor) = self.xor.as_mut() {
                xor.truncate(mark);
            }
        }
        self.trail_lim.truncate(level as usize);
        self.qhead = self.trail.len();
    }
}

fn or_into(a: &mut [u64], b: &[u64]) {
    for (x, y) in a.iter_mut().zip(b) {
        *x |= y;
    }
}

/// 1, 1, 2, 1, 1, 2, 4, 1, 1, 2, ...
fn luby(i: u32) -> u64 {
    let mut i = u64::from(i) + 1;
    loop {
        let k = 64 - i.leading_zeros() as u64;
        if i == (1 << k) - 1 {
            return 1 << (k - 1);
        }
        i -= (1 << (k - 1)) - 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn luby_prefix() {
        let seq: Vec<u64> = (0..15).map(luby).collect();
        assert_eq!(seq, [1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]);
    }
}

//! Incremental linear systems over GF(2).
//!
//! Rows are reduced against the pivots in insertion order, so every stored
//! row lacks the leading bits of all earlier pivots and the leading bits stay
//! distinct. That makes undo a plain truncation.

const NONE: u32 = u32::MAX;

/// What happened to a row on insertion.
#[derive(Debug, PartialEq, Eq)]
pub(crate) enum Insert {
    /// Independent of the stored rows; it is now a pivot.
    Pivot,
    /// A combination of stored rows with the same right-hand side.
    Redundant,
    /// A combination of stored rows reads `0 = 1`. Holds the tags of the
    /// original rows that were combined (empty unless tags are tracked).
    Conflict(Vec<usize>),
}

pub(crate) struct XorSystem {
    words: usize,
    tag_words: usize,
    bits: Vec<u32>,
    rhs: Vec<bool>,
    rows: Vec<u64>,
    tags: Vec<u64>,
    pivot_of: Vec<u32>,
}

impl XorSystem {
    /// `vars` unknowns; `tags > 0` records which of up to `tags` tagged rows
    /// went into every pivot, so conflicts can name their sources.
    pub(crate) fn new(vars: usize, tags: usize) -> Self {
        XorSystem {
            words: vars.div_ceil(64),
            tag_words: tags.div_ceil(64),
            bits: Vec::new(),
            rhs: Vec::new(),
            rows: Vec::new(),
            tags: Vec::new(),
            pivot_of: vec![NONE; vars],
        }
    }

    pub(crate) fn len(&self) -> usize {
        self.bits.len()
    }

    pub(crate) fn truncate(&mut self, len: usize) {
        for &b in &self.bits[len..] {
            self.pivot_of[b as usize] = NONE;
        }
        self.bits.truncate(len);
        self.rhs.truncate(len);
        self.rows.truncate(len * self.words);
        self.tags.truncate(len * self.tag_words);
    }

    /// Add `sum(vars) = rhs`, optionally tagged.
    pub(crate) fn insert(&mut self, vars: &[u32], rhs: bool, tag: Option<usize>) -> Insert {
        let mut row = vec![0u64; self.words];
        for &v in vars {
            row[v as usize / 64] ^= 1 << (v % 64);
        }
        let mut tags = vec![0u64; self.tag_words];
        if let (Some(t), true) = (tag, self.tag_words > 0) {
            tags[t / 64] |= 1 << (t % 64);
        }
        self.reduce_and_store(row, rhs, tags, 0)
    }

    /// Add `x_v = value`.
    pub(crate) fn insert_unit(&mut self, v: u32, value: bool) -> Insert {
        let p = self.pivot_of[v as usize];
        if p == NONE {
            // no pivot leads with v, so no stored row can reduce a lone x_v
            return self.store(v, self.unit(v), value, vec![0u64; self.tag_words]);
        }
        let p = p as usize;
        let mut row = self.unit(v);
        let mut tags = vec![0u64; self.tag_words];
        self.xor_pivot(p, &mut row, &mut tags);
        let rhs = value ^ self.rhs[p];
        self.reduce_and_store(row, rhs, tags, p + 1)
    }

    fn unit(&self, v: u32) -> Vec<u64> {
        let mut row = vec![0u64; self.words];
        row[v as usize / 64] = 1 << (v % 64);
        row
    }

    fn xor_pivot(&self, p: usize, row: &mut [u64], tags: &mut [u64]) {
        let w = self.words;
        for (a, b) in row.iter_mut().zip(&self.rows[p * w..(p + 1) * w]) {
            *a ^= b;
        }
        let t = self.tag_words;
        for (a, b) in tags.iter_mut().zip(&self.tags[p * t..(p + 1) * t]) {
            *a ^= b;
        }
    }

    fn reduce_and_store(
        &mut self,
        mut row: Vec<u64>,
        mut rhs: bool,
        mut tags: Vec<u64>,
        from: usize,
    ) -> Insert {
        for p in from..self.bits.len() {
            let b = self.bits[p] as usize;
            if row[b / 64] >> (b % 64) & 1 == 1 {
                self.xor_pivot(p, &mut row, &mut tags);
                rhs ^= self.rhs[p];
            }
        }
        match row.iter().position(|&w| w != 0) {
            Some(i) => {
                let lead = (i * 64) as u32 + row[i].trailing_zeros();
                self.store(lead, row, rhs, tags)
            }
            None if rhs => Insert::Conflict(ones(&tags)),
            None => Insert::Redundant,
        }
    }

    fn store(&mut self, lead: u32, row: Vec<u64>, rhs: bool, tags: Vec<u64>) -> Insert {
        self.pivot_of[lead as usize] = self.bits.len() as u32;
        self.bits.push(lead);
        self.rhs.push(rhs);
        self.rows.extend(row);
        self.tags.extend(tags);
        Insert::Pivot
    }
}

fn ones(words: &[u64]) -> Vec<usize> {
    let mut out = Vec::new();
    for (i, &w) in words.iter().enumerate() {
        let mut w = w;
        while w != 0 {
            out.push(i * 64 + w.trailing_zeros() as usize);
            w &= w - 1;
        }
    }
    out
}

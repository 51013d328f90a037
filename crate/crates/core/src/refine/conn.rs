//! Vertex-to-part connectivity.
//!
//! Each vertex owns a fixed region of `min(k, degree) + slack` slots, enough
//! for every part it could ever touch. Only a prefix of the region, the row
//! capacity, is used as an open-addressing hash table keyed by part id; the
//! capacity starts slightly above the number of adjacent parts and doubles
//! (with a full recount) when an insertion finds the row full. Entries whose
//! weight drops to zero stay in place until the next recount.

use rayon::prelude::*;

use crate::graph::{Graph, Weight};
use crate::partition::PartitionState;

const EMPTY: u32 = u32::MAX;

/// Extra slots beyond `count` entries: 12.5%, at least 2.
#[inline]
fn slack(count: usize) -> usize {
    count.div_ceil(8).max(2)
}

#[inline]
fn home_slot(part: u32, cap: usize) -> usize {
    ((part as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) >> 32) as usize % cap
}

/// A single vertex move, as produced by every refinement pass.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Move {
    pub vertex: usize,
    pub to: usize,
}

#[derive(Clone, Debug)]
pub struct ConnectivityTable {
    k: usize,
    /// Region of vertex `v` is `region[v]..region[v + 1]`.
    region: Vec<usize>,
    capacity: Vec<usize>,
    keys: Vec<u32>,
    vals: Vec<Weight>,
    locks: Vec<bool>,
    rebuilds: usize,
}

/// Sums `v`'s edge weights per adjacent part, using `dense` (length k,
/// all zero on entry and exit) as scratch.
fn count_row(
    g: &Graph,
    parts: &[usize],
    v: usize,
    dense: &mut [Weight],
    touched: &mut Vec<usize>,
) -> Vec<(u32, Weight)> {
    for (u, w) in g.neighbors(v) {
        let p = parts[u];
        if dense[p] == 0 {
            touched.push(p);
        }
        dense[p] += w;
    }
    let out = touched.iter().map(|&p| (p as u32, dense[p])).collect();
    for &p in touched.iter() {
        dense[p] = 0;
    }
    touched.clear();
    out
}

/// Writes `entries` into a cleared hash row.
fn fill_row(keys: &mut [u32], vals: &mut [Weight], entries: &[(u32, Weight)]) {
    let cap = keys.len();
    keys.fill(EMPTY);
    vals.fill(0);
    for &(p, w) in entries {
        let mut s = home_slot(p, cap);
        while keys[s] != EMPTY {
            s = (s + 1) % cap;
        }
        keys[s] = p;
        vals[s] = w;
    }
}

impl ConnectivityTable {
    pub fn build(g: &Graph, p: &PartitionState) -> Self {
        let n = g.n();
        let k = p.k();
        let mut region = Vec::with_capacity(n + 1);
        region.push(0);
        for v in 0..n {
            let m = k.min(g.degree(v));
            let size = if m == 0 { 0 } else { m + slack(m) };
            region.push(region[v] + size);
        }
        let total = region[n];
        let mut keys = vec![EMPTY; total];
        let mut vals = vec![0; total];
        let mut capacity = vec![0; n];

        let mut key_rows = Vec::with_capacity(n);
        let mut val_rows = Vec::with_capacity(n);
        let (mut kr, mut vr) = (&mut keys[..], &mut vals[..]);
        for v in 0..n {
            let len = region[v + 1] - region[v];
            let (a, rest_k) = kr.split_at_mut(len);
            let (b, rest_v) = vr.split_at_mut(len);
            key_rows.push(a);
            val_rows.push(b);
            kr = rest_k;
            vr = rest_v;
        }
        key_rows
            .into_par_iter()
            .zip(val_rows)
            .zip(capacity.par_iter_mut())
            .enumerate()
            .for_each_init(
                || (vec![0 as Weight; k], Vec::new()),
                |(dense, touched), (v, ((krow, vrow), cap))| {
                    if krow.is_empty() {
                        return;
                    }
                    let entries = count_row(g, p.parts(), v, dense, touched);
                    let c = (entries.len() + slack(entries.len())).min(krow.len());
                    fill_row(&mut krow[..c], &mut vrow[..c], &entries);
                    *cap = c;
                },
            );

        ConnectivityTable {
            k,
            region,
            capacity,
            keys,
            vals,
            locks: vec![false; n],
            rebuilds: 0,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Total weight of edges from `v` into `part`.
    pub fn get(&self, v: usize, part: usize) -> Weight {
        let cap = self.capacity[v];
        if cap == 0 {
            return 0;
        }
        let base = self.region[v];
        let key = part as u32;
        let mut s = home_slot(key, cap);
        for _ in 0..cap {
            match self.keys[base + s] {
                EMPTY => return 0,
                x if x == key => return self.vals[base + s],
                _ => s = (s + 1) % cap,
            }
        }
        0
    }

    /// Adjacent parts of `v` with their positive connection weights, in slot
    /// order.
    pub fn row(&self, v: usize) -> impl Iterator<Item = (usize, Weight)> + '_ {
        let r = self.region[v]..self.region[v] + self.capacity[v];
        self.keys[r.clone()]
            .iter()
            .zip(&self.vals[r])
            .filter(|&(&p, &w)| p != EMPTY && w > 0)
            .map(|(&p, &w)| (p as usize, w))
    }

    pub fn row_capacity(&self, v: usize) -> usize {
        self.capacity[v]
    }

    /// Largest capacity row `v` can grow to.
    pub fn row_limit(&self, v: usize) -> usize {
        self.region[v + 1] - self.region[v]
    }

    pub fn allocated_slots(&self) -> usize {
        self.keys.len()
    }

    /// How many row recounts have happened since construction.
    pub fn rebuild_count(&self) -> usize {
        self.rebuilds
    }

    #[inline]
    pub fn is_locked(&self, v: usize) -> bool {
        self.locks[v]
    }

    pub fn clear_locks(&mut self) {
        self.locks.fill(false);
    }

    pub fn lock_moved(&mut self, moves: &[Move]) {
        self.clear_locks();
        for m in moves {
            self.locks[m.vertex] = true;
        }
    }

    /// Adds `delta` to `conn(v, part)`. If the row is full, it is recounted
    /// from `parts` instead, which must already reflect the change.
    fn add(&mut self, g: &Graph, parts: &[usize], v: usize, part: usize, delta: Weight) {
        let cap = self.capacity[v];
        let base = self.region[v];
        let key = part as u32;
        if cap > 0 {
            let mut s = home_slot(key, cap);
            for _ in 0..cap {
                let slot = base + s;
                if self.keys[slot] == key {
                    self.vals[slot] += delta;
                    return;
                }
                if self.keys[slot] == EMPTY {
                    debug_assert!(delta > 0, "decrement of absent part {part} at vertex {v}");
                    self.keys[slot] = key;
                    self.vals[slot] = delta;
                    return;
                }
                s = (s + 1) % cap;
            }
        }
        self.rebuild_row(g, parts, v);
    }

    /// Recounts `v`'s row from scratch, dropping zero entries, with at least
    /// double the previous capacity (bounded by the row's region).
    pub fn rebuild_row(&mut self, g: &Graph, parts: &[usize], v: usize) {
        let mut dense = vec![0; self.k];
        let entries = count_row(g, parts, v, &mut dense, &mut Vec::new());
        let limit = self.row_limit(v);
        let cap = (2 * self.capacity[v])
            .max(entries.len() + slack(entries.len()))
            .min(limit);
        debug_assert!(entries.len() <= cap);
        let r = self.region[v]..self.region[v] + cap;
        fill_row(&mut self.keys[r.clone()], &mut self.vals[r], &entries);
        self.capacity[v] = cap;
        self.rebuilds += 1;
    }

    /// Applies `moves` in order, keeping part weights, the cached cutsize and
    /// every neighbor row exact.
    pub fn apply_moves(&mut self, g: &Graph, state: &mut PartitionState, moves: &[Move]) {
        for &Move { vertex: v, to } in moves {
            let from = state.parts[v];
            if from == to {
                continue;
            }
            state.cutsize += self.get(v, from) - self.get(v, to);
            let w = g.vertex_weight(v);
            state.part_weights[from] -= w;
            state.part_weights[to] += w;
            state.parts[v] = to;
            for (u, ew) in g.neighbors(v) {
                self.add(g, &state.parts, u, from, -ew);
                self.add(g, &state.parts, u, to, ew);
            }
        }
    }

    /// Compares every row against a brute-force recount.
    pub fn check(&self, g: &Graph, p: &PartitionState) -> Result<(), String> {
        for v in 0..g.n() {
            let mut expect = vec![0; self.k];
            for (u, w) in g.neighbors(v) {
                expect[p.part(u)] += w;
            }
            for (part, &e) in expect.iter().enumerate() {
                let got = self.get(v, part);
                if got != e {
                    return Err(format!("conn({v},{part}) = {got}, expected {e}"));
                }
            }
            if self.row_capacity(v) > self.row_limit(v) {
                return Err(format!("row {v} capacity exceeds its region"));
            }
        }
        Ok(())
    }
}

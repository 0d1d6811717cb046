//! GF(2) linear algebra: dense bit-packed matrices and a sparse column
//! reducer for boundary-matrix ranks, kernel bases, and span membership.

use std::collections::HashMap;

/// A sparse GF(2) vector: strictly increasing indices of nonzero entries.
pub type SparseVec = Vec<u32>;

/// a ^= b (symmetric difference of sorted index lists).
pub fn xor_into(a: &mut SparseVec, b: &SparseVec) {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0usize, 0usize);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    *a = out;
}

/// Echelon store of sparse columns keyed by their lowest... highest nonzero
/// index ("low"), in the style of boundary-matrix reduction.
#[derive(Clone, Debug, Default)]
pub struct SparseReducer {
    cols: HashMap<u32, SparseVec>,
}

impl SparseReducer {
    pub fn new() -> SparseReducer {
        SparseReducer::default()
    }

    pub fn rank(&self) -> usize {
        self.cols.len()
    }

    /// Reduces v in place against the stored columns.
    pub fn reduce(&self, v: &mut SparseVec) {
        while let Some(&low) = v.last() {
            match self.cols.get(&low) {
                Some(c) => xor_into(v, c),
                None => break,
            }
        }
    }

    /// Reduces v and stores the remainder if nonzero. Returns whether the
    /// rank grew.
    pub fn insert(&mut self, mut v: SparseVec) -> bool {
        self.reduce(&mut v);
        match v.last() {
            Some(&low) => {
                self.cols.insert(low, v);
                true
            }
            None => false,
        }
    }

    /// Whether v lies in the span of the stored columns.
    pub fn contains(&self, v: &SparseVec) -> bool {
        let mut w = v.clone();
        self.reduce(&mut w);
        w.is_empty()
    }
}

/// Reduces v against several reducers in concert (union of their spans).
pub fn reduce_against(v: &mut SparseVec, reducers: &[&SparseReducer]) {
    'outer: while let Some(&low) = v.last() {
        for r in reducers {
            if let Some(c) = r.cols.get(&low) {
                xor_into(v, c);
                continue 'outer;
            }
        }
        break;
    }
}

/// Sparse reduction with companion tracking: feeds columns one by one and
/// reports, for each column that reduces to zero, the combination of input
/// columns that produced it (a kernel vector of the fed matrix).
#[derive(Clone, Debug, Default)]
pub struct KernelTracker {
    cols: HashMap<u32, (SparseVec, SparseVec)>,
}

impl KernelTracker {
    pub fn new() -> KernelTracker {
        KernelTracker::default()
    }

    /// Feeds column `v` with input index `idx`; returns Some(kernel vector in
    /// input-index space) when the column is dependent on earlier ones.
    pub fn feed(&mut self, mut v: SparseVec, idx: u32) -> Option<SparseVec> {
        let mut combo: SparseVec = vec![idx];
        while let Some(&low) = v.last() {
            match self.cols.get(&low) {
                Some((c, cc)) => {
                    xor_into(&mut v, c);
                    xor_into(&mut combo, cc);
                }
                None => break,
            }
        }
        match v.last() {
            Some(&low) => {
                self.cols.insert(low, (v, combo));
                None
            }
            None => Some(combo),
        }
    }

    pub fn rank(&self) -> usize {
        self.cols.len()
    }
}

/// Dense bit-packed GF(2) matrix; rows of 64-bit words.
#[derive(Clone, Debug)]
pub struct Gf2Matrix {
    pub rows: usize,
    pub cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl Gf2Matrix {
    pub fn zero(rows: usize, cols: usize) -> Gf2Matrix {
        let words = cols.div_ceil(64);
        Gf2Matrix { rows, cols, words, data: vec![0; rows * words] }
    }

    pub fn set(&mut self, r: usize, c: usize, bit: bool) {
        let w = r * self.words + c / 64;
        if bit {
            self.data[w] |= 1 << (c % 64);
        } else {
            self.data[w] &= !(1 << (c % 64));
        }
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    /// Rank by in-place Gaussian elimination (row operations).
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0usize;
        for c in 0..m.cols {
            let (w, b) = (c / 64, c % 64);
            let pivot = (rank..m.rows).find(|&r| m.data[r * m.words + w] >> b & 1 == 1);
            let Some(p) = pivot else { continue };
            m.data.swap_rows(p, rank, m.words);
            for r in 0..m.rows {
                if r != rank && m.data[r * m.words + w] >> b & 1 == 1 {
                    for k in 0..m.words {
                        let v = m.data[rank * m.words + k];
                        m.data[r * m.words + k] ^= v;
                    }
                }
            }
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        rank
    }
}

trait SwapRows {
    fn swap_rows(&mut self, a: usize, b: usize, words: usize);
}

impl SwapRows for Vec<u64> {
    fn swap_rows(&mut self, a: usize, b: usize, words: usize) {
        if a == b {
            return;
        }
        for k in 0..words {
            self.swap(a * words + k, b * words + k);
        }
    }
}

//! Linear algebra over F_p: dense matrices and an incremental echelon basis
//! for sparse vectors.

use std::collections::BTreeMap;

use crate::arith::Prime;

/// Dense row-major matrix over F_p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    prime: Prime,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Matrix {
    pub fn zeros(prime: Prime, rows: usize, cols: usize) -> Self {
        Matrix { prime, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(prime: Prime, n: usize) -> Self {
        let mut m = Self::zeros(prime, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.prime.get();
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// `self * rhs`; panics on shape mismatch.
    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix shape mismatch");
        let p = self.prime;
        let mut out = Matrix::zeros(p, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b != 0 {
                        let idx = i * out.cols + j;
                        out.data[idx] = p.add(out.data[idx], p.mul(a, b));
                    }
                }
            }
        }
        out
    }

    /// Rank by Gaussian elimination on a copy.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.row_reduce()
    }

    /// Reduces in place to row echelon form and returns the rank.
    pub fn row_reduce(&mut self) -> usize {
        let p = self.prime;
        let mut rank = 0;
        for c in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let Some(pivot) = (rank..self.rows).find(|&r| self.get(r, c) != 0) else {
                continue;
            };
            self.swap_rows(rank, pivot);
            let inv = p.inv(self.get(rank, c));
            for j in c..self.cols {
                let v = self.get(rank, j);
                self.set(rank, j, p.mul(v, inv));
            }
            for r in 0..self.rows {
                if r == rank {
                    continue;
                }
                let factor = self.get(r, c);
                if factor == 0 {
                    continue;
                }
                for j in c..self.cols {
                    let v = p.sub(self.get(r, j), p.mul(factor, self.get(rank, j)));
                    self.set(r, j, v);
                }
            }
            rank += 1;
        }
        rank
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Solves `self * x = b` for one solution, if any exists.
    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(b.len(), self.rows);
        let p = self.prime;
        let mut aug = Matrix::zeros(p, self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, self.cols, b[r]);
        }
        let rank = aug.row_reduce();
        let mut x = vec![0u32; self.cols];
        for r in 0..rank {
            let lead = (0..=self.cols).find(|&c| aug.get(r, c) != 0)?;
            if lead == self.cols {
                return None;
            }
            x[lead] = aug.get(r, self.cols);
        }
        Some(x)
    }
}

/// An echelon basis of a subspace spanned by sparse vectors indexed by `K`.
///
/// Each stored row has a distinct pivot (its largest key) and is normalized
/// so the pivot coefficient is 1.
#[derive(Debug, Clone)]
pub struct EchelonBasis<K: Ord + Clone> {
    prime: Prime,
    rows: BTreeMap<K, BTreeMap<K, u32>>,
}

impl<K: Ord + Clone> EchelonBasis<K> {
    pub fn new(prime: Prime) -> Self {
        EchelonBasis { prime, rows: BTreeMap::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis; the remainder is zero iff `v` lies in
    /// the span.
    pub fn reduce(&self, mut v: BTreeMap<K, u32>) -> BTreeMap<K, u32> {
        let p = self.prime;
        let mut out = BTreeMap::new();
        while let Some((k, c)) = v.iter().next_back().map(|(k, &c)| (k.clone(), c)) {
            match self.rows.get(&k) {
                Some(row) => {
                    for (rk, &rc) in row {
                        let slot = v.entry(rk.clone()).or_insert(0);
                        *slot = p.sub(*slot, p.mul(c, rc));
                        if *slot == 0 {
                            v.remove(rk);
                        }
                    }
                }
                None => {
                    v.remove(&k);
                    out.insert(k, c);
                }
            }
        }
        out
    }

    pub fn contains(&self, v: BTreeMap<K, u32>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v`; returns `true` when it was independent of the basis.
    pub fn insert(&mut self, v: BTreeMap<K, u32>) -> bool {
        let mut r = self.reduce(v);
        let Some((pivot, lead)) = r.iter().next_back().map(|(k, &c)| (k.clone(), c)) else {
            return false;
        };
        let inv = self.prime.inv(lead);
        for c in r.values_mut() {
            *c = self.prime.mul(*c, inv);
        }
        self.rows.insert(pivot, r);
        true
    }
}

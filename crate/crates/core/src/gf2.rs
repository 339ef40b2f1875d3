//! Square matrices over GF(2) acting on bit-vectors.
//!
//! Vectors of `Z_2^r` are packed into the low `r` bits of a `u32`, bit `i`
//! being coordinate `i`. A matrix is stored row-wise with the same packing, so
//! `(A x)_i = parity(row_i & x)`.

use std::fmt;

use serde::{Deserialize, Serialize};

pub const MAX_RANK: u32 = 16;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Gf2Matrix {
    rows: Vec<u32>,
}

impl Gf2Matrix {
    pub fn identity(r: u32) -> Self {
        Self {
            rows: (0..r).map(|i| 1 << i).collect(),
        }
    }

    /// Builds a matrix from packed rows; bits above the dimension are rejected.
    pub fn from_rows(rows: Vec<u32>) -> Option<Self> {
        let r = rows.len() as u32;
        if r == 0 || r > MAX_RANK || rows.iter().any(|&row| row >> r != 0) {
            return None;
        }
        Some(Self { rows })
    }

    /// Unpacks the `index`-th matrix in the canonical enumeration of all
    /// `2^(r*r)` matrices (row 0 in the lowest bits).
    pub fn from_index(r: u32, index: u64) -> Self {
        let mask = (1u64 << r) - 1;
        Self {
            rows: (0..r)
                .map(|i| ((index >> (i * r)) & mask) as u32)
                .collect(),
        }
    }

    /// Companion matrix of the monic polynomial `x^r + c_{r-1} x^{r-1} + ... + c_0`,
    /// with `coeffs` bit `i` holding `c_i`. It maps `e_i -> e_{i+1}` and
    /// `e_{r-1} -> sum c_i e_i`.
    pub fn companion(r: u32, coeffs: u32) -> Self {
        let mut rows = vec![0u32; r as usize];
        for (i, row) in rows.iter_mut().enumerate() {
            if i > 0 {
                *row |= 1 << (i - 1);
            }
            if coeffs >> i & 1 == 1 {
                *row |= 1 << (r - 1);
            }
        }
        Self { rows }
    }

    pub fn dim(&self) -> u32 {
        self.rows.len() as u32
    }

    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    pub fn apply(&self, x: u32) -> u32 {
        self.rows
            .iter()
            .enumerate()
            .fold(0, |acc, (i, row)| acc | (((row & x).count_ones() & 1) << i))
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        // Row i of the product is the sum of other's rows selected by row i of self.
        let rows = self
            .rows
            .iter()
            .map(|&row| {
                other
                    .rows
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| row >> k & 1 == 1)
                    .fold(0, |acc, (_, r)| acc ^ r)
            })
            .collect();
        Self { rows }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.dim());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, &row)| row == 1 << i)
    }

    pub fn rank(&self) -> u32 {
        rank_of(self.rows.clone())
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == self.dim()
    }

    /// Multiplicative order, or `None` when singular or larger than `bound`.
    pub fn order(&self, bound: u64) -> Option<u64> {
        if !self.is_invertible() {
            return None;
        }
        let mut power = self.clone();
        for e in 1..=bound {
            if power.is_identity() {
                return Some(e);
            }
            power = power.mul(self);
        }
        None
    }
}

/// Rank of the span of a list of packed vectors.
pub fn rank_of(mut vectors: Vec<u32>) -> u32 {
    let mut rank = 0;
    for bit in 0..32 {
        let Some(pivot) = (rank as usize..vectors.len()).find(|&i| vectors[i] >> bit & 1 == 1)
        else {
            continue;
        };
        vectors.swap(rank as usize, pivot);
        let p = vectors[rank as usize];
        for (i, v) in vectors.iter_mut().enumerate() {
            if i != rank as usize && *v >> bit & 1 == 1 {
                *v ^= p;
            }
        }
        rank += 1;
    }
    rank
}

/// `|GL_r(2)| = prod_{k<r} (2^r - 2^k)`.
pub fn general_linear_order(r: u32) -> u64 {
    (0..r).map(|k| (1u64 << r) - (1u64 << k)).product()
}

impl fmt::Display for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.rows.len();
        write!(f, "[")?;
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            for j in 0..r {
                write!(f, "{}", row >> j & 1)?;
            }
        }
        write!(f, "]")
    }
}

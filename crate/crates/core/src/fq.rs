//! Dense linear algebra over the prime field `F_q`.
//!
//! Rows are plain coordinate buffers; the same elimination routine serves
//! subspace bases (rows = field elements), the Zassenhaus stack and the
//! unfolded syndrome systems.

use alloc::vec;
use alloc::vec::Vec;

use crate::linalg::Solution;

/// A row buffer whose first `width` cells are the active coordinates.
pub trait Row {
    fn cells(&self) -> &[u8];
    fn cells_mut(&mut self) -> &mut [u8];
}

impl Row for Vec<u8> {
    fn cells(&self) -> &[u8] {
        self
    }
    fn cells_mut(&mut self) -> &mut [u8] {
        self
    }
}

impl<const N: usize> Row for [u8; N] {
    fn cells(&self) -> &[u8] {
        self
    }
    fn cells_mut(&mut self) -> &mut [u8] {
        self
    }
}

impl Row for crate::FieldElement {
    fn cells(&self) -> &[u8] {
        self.raw()
    }
    fn cells_mut(&mut self) -> &mut [u8] {
        self.raw_mut()
    }
}

/// `row[c..width] -= factor * pivot[c..width]`, mod q.
#[inline]
fn sub_scaled(row: &mut [u8], pivot: &[u8], factor: u8, from: usize, width: usize, q: u8) {
    let q16 = u16::from(q);
    let neg = u16::from(q - factor);
    for c in from..width {
        let p = pivot[c];
        if p != 0 {
            row[c] = ((u16::from(row[c]) + neg * u16::from(p)) % q16) as u8;
        }
    }
}

/// Reduces `rows` in place to reduced row-echelon form over the first
/// `width` columns, drops zero rows, and returns the pivot columns.
pub fn rref<R: Row>(rows: &mut Vec<R>, width: usize, q: u8, prime_inv: &[u8]) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..width {
        if rank == rows.len() {
            break;
        }
        let Some(p) = (rank..rows.len()).find(|&i| rows[i].cells()[col] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let lead = rows[rank].cells()[col];
        if lead != 1 {
            let s = u16::from(prime_inv[lead as usize]);
            for c in rows[rank].cells_mut()[col..width].iter_mut() {
                *c = ((u16::from(*c) * s) % u16::from(q)) as u8;
            }
        }
        let (before, rest) = rows.split_at_mut(rank);
        let (pivot, after) = rest.split_first_mut().expect("pivot row");
        let pivot = pivot.cells();
        for row in before.iter_mut().chain(after.iter_mut()) {
            let f = row.cells()[col];
            if f != 0 {
                sub_scaled(row.cells_mut(), pivot, f, col, width, q);
            }
        }
        pivots.push(col);
        rank += 1;
    }
    rows.truncate(rank);
    pivots
}

/// Rank of the given rows over the first `width` columns.
pub fn rank<R: Row + Clone>(rows: &[R], width: usize, q: u8, prime_inv: &[u8]) -> usize {
    let mut work = rows.to_vec();
    rref(&mut work, width, q, prime_inv).len()
}

/// Solves `A x = b` over `F_q`; `a` has `unknowns` columns.
pub fn solve(a: &[Vec<u8>], b: &[u8], unknowns: usize, q: u8, prime_inv: &[u8]) -> Solution<u8> {
    let mut aug: Vec<Vec<u8>> = a
        .iter()
        .zip(b)
        .map(|(row, &rhs)| {
            let mut r = Vec::with_capacity(unknowns + 1);
            r.extend_from_slice(&row[..unknowns]);
            r.push(rhs);
            r
        })
        .collect();
    let pivots = rref(&mut aug, unknowns + 1, q, prime_inv);
    if pivots.last() == Some(&unknowns) {
        return Solution::Inconsistent;
    }
    let mut particular = vec![0u8; unknowns];
    for (row, &p) in aug.iter().zip(&pivots) {
        particular[p] = row[unknowns];
    }
    if pivots.len() == unknowns {
        return Solution::Unique(particular);
    }
    let mut is_pivot = vec![false; unknowns];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let kernel = (0..unknowns)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![0u8; unknowns];
            v[f] = 1;
            for (row, &p) in aug.iter().zip(&pivots) {
                v[p] = (q - row[f]) % q;
            }
            v
        })
        .collect();
    Solution::Underdetermined { particular, kernel }
}

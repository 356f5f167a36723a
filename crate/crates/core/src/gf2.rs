//! Parity-matrix algebra over GF(2).
//!
//! A CNOT circuit on `n` qubits acts linearly on the computational basis, so
//! it is fully described by an invertible `n x n` matrix over GF(2). Row `i`
//! of the matrix lists which input qubits are XORed into output qubit `i`.
//! Gate `CNOT(c, t)` is the elementary row operation `row[t] ^= row[c]`.

use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::rng::substream;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("qubit index {index} out of range for {n} qubits")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("control and target are both {0}")]
    SameControlTarget(usize),
    #[error("dimension mismatch: expected {expected} columns, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix must have at least one row")]
    Empty,
}

/// A CNOT gate, `target ^= control`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cnot {
    pub control: usize,
    pub target: usize,
}

impl Cnot {
    pub fn new(control: usize, target: usize) -> Self {
        Self { control, target }
    }
}

impl fmt::Display for Cnot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CNOT({},{})", self.control, self.target)
    }
}

/// Fixed-length bit vector packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitRow {
    words: Vec<u64>,
    len: usize,
}

impl BitRow {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn unit(len: usize, index: usize) -> Self {
        let mut row = Self::zeros(len);
        row.set(index, true);
        row
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut row = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            row.set(i, b);
        }
        row
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &BitRow) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= *b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Indices of set bits, ascending.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn to_bits(&self) -> Vec<bool> {
        (0..self.len).map(|i| self.get(i)).collect()
    }
}

impl fmt::Debug for BitRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Square GF(2) matrix describing the linear action of a CNOT circuit.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ParityMatrix {
    rows: Vec<BitRow>,
}

impl ParityMatrix {
    pub fn identity(n: usize) -> Self {
        Self {
            rows: (0..n).map(|i| BitRow::unit(n, i)).collect(),
        }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            rows: (0..n).map(|_| BitRow::zeros(n)).collect(),
        }
    }

    /// Builds a matrix from nested rows. Panics if the input is not square.
    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let n = rows.len();
        let rows = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), n, "parity matrix must be square");
                BitRow::from_bits(&r.iter().map(|&b| b != 0).collect::<Vec<_>>())
            })
            .collect();
        Self { rows }
    }

    /// The matrix of a CNOT circuit: identity with `row[t] ^= row[c]` applied
    /// for every gate in temporal order.
    pub fn from_circuit(gates: &[Cnot], n: usize) -> Result<Self, Gf2Error> {
        if n == 0 {
            return Err(Gf2Error::Empty);
        }
        let mut m = Self::identity(n);
        for g in gates {
            m.apply_cnot(*g)?;
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, i: usize) -> &BitRow {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[BitRow] {
        &self.rows
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.rows[row].get(col)
    }

    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        self.rows[row].set(col, value);
    }

    fn check_index(&self, index: usize) -> Result<(), Gf2Error> {
        if index >= self.n() {
            Err(Gf2Error::IndexOutOfRange { index, n: self.n() })
        } else {
            Ok(())
        }
    }

    /// `row[dst] ^= row[src]`.
    pub fn row_xor(&mut self, src: usize, dst: usize) -> Result<(), Gf2Error> {
        self.check_index(src)?;
        self.check_index(dst)?;
        if src == dst {
            return Err(Gf2Error::SameControlTarget(src));
        }
        let (a, b) = if src < dst {
            let (lo, hi) = self.rows.split_at_mut(dst);
            (&lo[src], &mut hi[0])
        } else {
            let (lo, hi) = self.rows.split_at_mut(src);
            (&hi[0], &mut lo[dst])
        };
        b.xor_assign(a);
        Ok(())
    }

    pub fn apply_cnot(&mut self, gate: Cnot) -> Result<(), Gf2Error> {
        self.row_xor(gate.control, gate.target)
    }

    pub fn is_identity(&self) -> bool {
        let n = self.n();
        self.rows
            .iter()
            .enumerate()
            .all(|(i, r)| r.get(i) && r.count_ones() == 1 && r.len() == n)
    }

    /// Rank by Gaussian elimination on a copy.
    pub fn rank(&self) -> usize {
        rank_of(&self.rows)
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == self.n()
    }

    /// Identity followed by `5 n^2` seeded random row XORs.
    pub fn random_invertible(n: usize, seed: u64) -> Self {
        let mut m = Self::identity(n);
        if n < 2 {
            return m;
        }
        let mut rng = substream(seed, 0);
        for _ in 0..5 * n * n {
            let src = rng.gen_range(0..n);
            let mut dst = rng.gen_range(0..n - 1);
            if dst >= src {
                dst += 1;
            }
            m.row_xor(src, dst)
                .expect("indices are distinct and in range");
        }
        m
    }

    /// First row where `self` and `other` differ.
    pub fn first_mismatch(&self, other: &ParityMatrix) -> Option<usize> {
        if self.n() != other.n() {
            return Some(0);
        }
        (0..self.n()).find(|&i| self.rows[i] != other.rows[i])
    }
}

impl fmt::Debug for ParityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ParityMatrix({}) [", self.n())?;
        for r in &self.rows {
            writeln!(f, "  {r:?}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for ParityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{r:?}")?;
        }
        Ok(())
    }
}

fn rank_of(rows: &[BitRow]) -> usize {
    let mut rows: Vec<BitRow> = rows.to_vec();
    let cols = rows.first().map_or(0, BitRow::len);
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row.get(col) {
                row.xor_assign(&pivot);
            }
        }
        rank += 1;
    }
    rank
}

/// Finds `x` with `x^T A = y`, i.e. a subset of the rows of `a` whose XOR is
/// `y`. Returns `Ok(None)` when `y` is outside the row space.
///
/// Elimination keeps, for every reduced row, the set of original rows it is
/// built from; reducing `y` against the pivots then yields the selection.
pub fn solve_gf2(a: &[BitRow], y: &BitRow) -> Result<Option<Vec<bool>>, Gf2Error> {
    let Some(first) = a.first() else {
        return Err(Gf2Error::Empty);
    };
    let cols = first.len();
    if y.len() != cols {
        return Err(Gf2Error::DimensionMismatch {
            expected: cols,
            got: y.len(),
        });
    }
    if let Some(bad) = a.iter().find(|r| r.len() != cols) {
        return Err(Gf2Error::DimensionMismatch {
            expected: cols,
            got: bad.len(),
        });
    }
    let m = a.len();
    let mut work: Vec<(BitRow, BitRow)> = a
        .iter()
        .enumerate()
        .map(|(i, r)| (r.clone(), BitRow::unit(m, i)))
        .collect();

    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut next = 0;
    for col in 0..cols {
        let Some(p) = (next..m).find(|&r| work[r].0.get(col)) else {
            continue;
        };
        work.swap(next, p);
        let (pivot_row, pivot_tag) = work[next].clone();
        for (r, (row, tag)) in work.iter_mut().enumerate() {
            if r != next && row.get(col) {
                row.xor_assign(&pivot_row);
                tag.xor_assign(&pivot_tag);
            }
        }
        pivots.push((col, next));
        next += 1;
    }

    let mut residual = y.clone();
    let mut x = BitRow::zeros(m);
    for &(col, r) in &pivots {
        if residual.get(col) {
            residual.xor_assign(&work[r].0);
            x.xor_assign(&work[r].1);
        }
    }
    if residual.is_zero() {
        Ok(Some(x.to_bits()))
    } else {
        Ok(None)
    }
}

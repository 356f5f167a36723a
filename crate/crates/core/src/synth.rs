//! Layer-by-layer reduction of a parity matrix to the identity.
//!
//! Layer `i` first clears column `i` below and above the diagonal using a
//! Steiner tree over the qubits holding a one, then clears row `i` by adding
//! in the set of lower rows whose XOR equals it (found by a GF(2) solve).
//! Only physical qubits of unfinished layers are used as intermediates, and
//! each finished qubit is removed from the residual graph, so later layers
//! never disturb earlier ones.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::arch::{ArchError, CouplingGraph};
use crate::circuit::cnot_depth;
use crate::gf2::{solve_gf2, BitRow, Cnot, Gf2Error, ParityMatrix};
use crate::mapping::{kqpimo, validate_mapping, Mapping, MappingError, TabuConfig};
use crate::steiner::{mnst, SteinerError};

/// Largest matrix the exhaustive TARM oracle accepts.
pub const BRUTEFORCE_LIMIT: usize = 10;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SynthError {
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error(transparent)]
    Arch(#[from] ArchError),
    #[error(transparent)]
    Mapping(#[from] MappingError),
    #[error(transparent)]
    Steiner(#[from] SteinerError),
    #[error("parity matrix is singular")]
    Singular,
    #[error("mapping covers {mapping} qubits but the matrix has {matrix}")]
    SizeMismatch { mapping: usize, matrix: usize },
    #[error("elimination order is not a permutation of 0..{0}")]
    BadOrder(usize),
    #[error("physical qubit {0} is not in the residual graph")]
    OutsideResidual(usize),
    #[error("row {row} has no target-aided rows set")]
    NoTarmSolution { row: usize },
    #[error("{size} rows exceed the brute-force limit of {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthesisResult {
    /// Output circuit over physical qubits, in execution order.
    pub gates: Vec<Cnot>,
    pub mapping: Mapping,
    /// Row operations over logical indices, in the order they were applied.
    pub recorded_ops: Vec<Cnot>,
    pub cnot_count: usize,
    pub depth: usize,
}

fn check_order(m: &ParityMatrix, order: &[usize]) -> Result<(), SynthError> {
    let n = m.n();
    let mut seen = vec![false; n];
    if order.len() != n {
        return Err(SynthError::BadOrder(n));
    }
    for &r in order {
        if r >= n || std::mem::replace(&mut seen[r], true) {
            return Err(SynthError::BadOrder(n));
        }
    }
    Ok(())
}

/// Target-aided rows: the rows among `order[i+1..]` whose XOR equals
/// `row[order[i]] ^ e[order[i]]`, found by solving over the columns
/// `order[i..]`. Empty when the row is already a unit vector.
pub fn tarm(m: &ParityMatrix, i: usize, order: &[usize]) -> Result<BTreeSet<usize>, SynthError> {
    check_order(m, order)?;
    let n = m.n();
    let r = order[i];
    let mut target = m.row(r).clone();
    target.flip(r);
    if target.is_zero() {
        return Ok(BTreeSet::new());
    }
    let candidates = &order[i + 1..];
    if candidates.is_empty() {
        return Err(SynthError::NoTarmSolution { row: r });
    }
    let cols = &order[i..];
    let restrict =
        |row: &BitRow| BitRow::from_bits(&cols.iter().map(|&c| row.get(c)).collect::<Vec<_>>());
    let a: Vec<BitRow> = candidates.iter().map(|&k| restrict(m.row(k))).collect();
    let x = solve_gf2(&a, &restrict(&target))?.ok_or(SynthError::NoTarmSolution { row: r })?;
    let chosen: BTreeSet<usize> = candidates
        .iter()
        .zip(x)
        .filter_map(|(&k, pick)| pick.then_some(k))
        .collect();
    let mut acc = BitRow::zeros(n);
    for &k in &chosen {
        acc.xor_assign(m.row(k));
    }
    if acc != target {
        return Err(SynthError::NoTarmSolution { row: r });
    }
    Ok(chosen)
}

/// Exhaustive-search counterpart of [`tarm`] for testing; `None` when no
/// subset works. Subsets are tried in increasing bitmask order.
pub fn tarm_bruteforce(
    m: &ParityMatrix,
    i: usize,
    order: &[usize],
) -> Result<Option<BTreeSet<usize>>, SynthError> {
    check_order(m, order)?;
    let n = m.n();
    if n > BRUTEFORCE_LIMIT {
        return Err(SynthError::TooLarge {
            size: n,
            limit: BRUTEFORCE_LIMIT,
        });
    }
    let r = order[i];
    let mut target = m.row(r).clone();
    target.flip(r);
    let candidates = &order[i + 1..];
    for mask in 0u32..(1 << candidates.len()) {
        let mut acc = BitRow::zeros(n);
        for (b, &k) in candidates.iter().enumerate() {
            if mask >> b & 1 == 1 {
                acc.xor_assign(m.row(k));
            }
        }
        if acc == target {
            return Ok(Some(
                candidates
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| mask >> b & 1 == 1)
                    .map(|(_, &k)| k)
                    .collect(),
            ));
        }
    }
    Ok(None)
}

fn logical_of(inv: &[Option<usize>], p: usize) -> Result<usize, SynthError> {
    inv.get(p)
        .copied()
        .flatten()
        .ok_or(SynthError::OutsideResidual(p))
}

fn record(m: &mut ParityMatrix, ops: &mut Vec<Cnot>, control: usize, target: usize) {
    m.row_xor(control, target)
        .expect("tree edges join distinct rows");
    ops.push(Cnot::new(control, target));
}

/// Clears column `i` except the diagonal. Returns the row operations
/// (logical indices) in application order.
pub fn eliminate_column(
    m: &mut ParityMatrix,
    residual: &CouplingGraph,
    mapping: &Mapping,
    i: usize,
) -> Result<Vec<Cnot>, SynthError> {
    let n = m.n();
    if (0..n).all(|j| m.get(j, i) == (j == i)) {
        return Ok(Vec::new());
    }
    let inv = mapping.inverse(residual.num_qubits());
    let root = mapping.physical(i);
    let mut terminals = BTreeSet::new();
    for j in 0..n {
        if m.get(j, i) {
            if j < i {
                return Err(SynthError::Invariant(format!(
                    "finished row {j} has a one in column {i}"
                )));
            }
            let p = mapping.physical(j);
            if !residual.contains(p) {
                return Err(SynthError::OutsideResidual(p));
            }
            terminals.insert(p);
        }
    }
    let tree = mnst(residual, root, &terminals)?;
    let post = tree.postorder();
    let mut ops = Vec::new();

    for &c in &post {
        let Some(k) = tree.parent(c) else { continue };
        let (lc, lk) = (logical_of(&inv, c)?, logical_of(&inv, k)?);
        if !m.get(lk, i) && m.get(lc, i) {
            record(m, &mut ops, lc, lk);
        }
    }
    for &c in &post {
        let lc = logical_of(&inv, c)?;
        for &l in tree.children(c) {
            record(m, &mut ops, lc, logical_of(&inv, l)?);
        }
    }
    Ok(ops)
}

/// Clears row `i` except the diagonal; column `i` must already be a unit
/// vector.
pub fn eliminate_row(
    m: &mut ParityMatrix,
    residual: &CouplingGraph,
    mapping: &Mapping,
    i: usize,
) -> Result<Vec<Cnot>, SynthError> {
    let order: Vec<usize> = (0..m.n()).collect();
    let s = tarm(m, i, &order)?;
    if s.is_empty() {
        return Ok(Vec::new());
    }
    let inv = mapping.inverse(residual.num_qubits());
    let root = mapping.physical(i);
    let mut terminals: BTreeSet<usize> = s.iter().map(|&k| mapping.physical(k)).collect();
    terminals.insert(root);
    for &p in &terminals {
        if !residual.contains(p) {
            return Err(SynthError::OutsideResidual(p));
        }
    }
    let tree = mnst(residual, root, &terminals)?;
    let mut ops = Vec::new();

    for r in tree.preorder() {
        let Some(k) = tree.parent(r) else { continue };
        let lr = logical_of(&inv, r)?;
        if !s.contains(&lr) {
            record(m, &mut ops, lr, logical_of(&inv, k)?);
        }
    }
    for r in tree.postorder() {
        let Some(k) = tree.parent(r) else { continue };
        record(m, &mut ops, logical_of(&inv, r)?, logical_of(&inv, k)?);
    }
    Ok(ops)
}

/// Full synthesis: place with tabu search, then eliminate layer by layer.
pub fn lcnns(
    m: &ParityMatrix,
    g: &CouplingGraph,
    config: &TabuConfig,
) -> Result<SynthesisResult, SynthError> {
    if !m.is_invertible() {
        return Err(SynthError::Singular);
    }
    let mapping = kqpimo(g, m.n(), config)?;
    lcnns_with_mapping(m, g, &mapping)
}

pub fn lcnns_with_mapping(
    m: &ParityMatrix,
    g: &CouplingGraph,
    mapping: &Mapping,
) -> Result<SynthesisResult, SynthError> {
    lcnns_observed(m, g, mapping, |_, _| {})
}

/// As [`lcnns_with_mapping`], calling `observe(i, &matrix)` after each
/// finished layer.
pub fn lcnns_observed<F>(
    m: &ParityMatrix,
    g: &CouplingGraph,
    mapping: &Mapping,
    mut observe: F,
) -> Result<SynthesisResult, SynthError>
where
    F: FnMut(usize, &ParityMatrix),
{
    let n = m.n();
    if mapping.n() != n {
        return Err(SynthError::SizeMismatch {
            mapping: mapping.n(),
            matrix: n,
        });
    }
    if !m.is_invertible() {
        return Err(SynthError::Singular);
    }
    g.ensure_connected()?;
    validate_mapping(g, mapping)?;

    let mut work = m.clone();
    let mut residual = g.induced_subgraph(mapping.assign().iter().copied());
    let mut ops = Vec::new();
    for i in 0..n {
        ops.extend(eliminate_column(&mut work, &residual, mapping, i)?);
        ops.extend(eliminate_row(&mut work, &residual, mapping, i)?);
        let unit = (0..n).all(|j| work.get(i, j) == (j == i) && work.get(j, i) == (j == i));
        if !unit {
            return Err(SynthError::Invariant(format!("layer {i} did not converge")));
        }
        residual.remove_vertex_mut(mapping.physical(i))?;
        observe(i, &work);
    }
    if !work.is_identity() {
        return Err(SynthError::Invariant("matrix is not the identity".into()));
    }
    let gates: Vec<Cnot> = ops
        .iter()
        .rev()
        .map(|op| Cnot::new(mapping.physical(op.control), mapping.physical(op.target)))
        .collect();
    Ok(SynthesisResult {
        cnot_count: gates.len(),
        depth: cnot_depth(&gates),
        gates,
        mapping: mapping.clone(),
        recorded_ops: ops,
    })
}

/// Why a synthesized circuit failed verification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Mismatch {
    IllegalGate { index: usize, gate: Cnot },
    UnmappedQubit { index: usize, qubit: usize },
    Row(usize),
    Size { expected: usize, got: usize },
    Structure(String),
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mismatch::IllegalGate { index, gate } => {
                write!(f, "gate {index} {gate} is not a coupling-graph edge")
            }
            Mismatch::UnmappedQubit { index, qubit } => {
                write!(f, "gate {index} acts on unmapped physical qubit {qubit}")
            }
            Mismatch::Row(r) => write!(f, "parity matrices differ first at row {r}"),
            Mismatch::Size { expected, got } => {
                write!(f, "expected {expected} logical qubits, got {got}")
            }
            Mismatch::Structure(msg) => f.write_str(msg),
        }
    }
}

impl std::error::Error for Mismatch {}

/// Pulls physical `gates` back through `mapping` and compares the resulting
/// parity matrix with `original`. With `g` given, every gate must also be a
/// coupling-graph edge.
pub fn verify_gates(
    original: &ParityMatrix,
    gates: &[Cnot],
    mapping: &Mapping,
    g: Option<&CouplingGraph>,
) -> Result<(), Mismatch> {
    let n = original.n();
    if mapping.n() != n {
        return Err(Mismatch::Size {
            expected: n,
            got: mapping.n(),
        });
    }
    let span = gates
        .iter()
        .flat_map(|g| [g.control, g.target])
        .chain(mapping.assign().iter().copied())
        .max()
        .map_or(0, |m| m + 1);
    let inv = mapping.inverse(span);
    let mut logical = Vec::with_capacity(gates.len());
    for (index, &gate) in gates.iter().enumerate() {
        if let Some(g) = g {
            if !g.has_edge(gate.control, gate.target) {
                return Err(Mismatch::IllegalGate { index, gate });
            }
        }
        let pull = |q: usize| inv[q].ok_or(Mismatch::UnmappedQubit { index, qubit: q });
        logical.push(Cnot::new(pull(gate.control)?, pull(gate.target)?));
    }
    let rebuilt =
        ParityMatrix::from_circuit(&logical, n).map_err(|e| Mismatch::Structure(e.to_string()))?;
    match rebuilt.first_mismatch(original) {
        None => Ok(()),
        Some(r) => Err(Mismatch::Row(r)),
    }
}

pub fn verify_equivalence(
    original: &ParityMatrix,
    result: &SynthesisResult,
    g: &CouplingGraph,
) -> Result<(), Mismatch> {
    verify_gates(original, &result.gates, &result.mapping, Some(g))
}

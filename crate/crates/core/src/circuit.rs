//! Circuits, benchmark generators, fidelity metrics, and synthesis of mixed
//! circuits (CNOT blocks interleaved with single-qubit gates).

use std::fmt;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::arch::CouplingGraph;
use crate::gf2::{Cnot, ParityMatrix};
use crate::mapping::{kqpimo, Mapping, MappingError, TabuConfig};
use crate::qasm::QasmError;
use crate::rng::substream;
use crate::synth::{lcnns_with_mapping, verify_equivalence, Mismatch, SynthError, SynthesisResult};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error(transparent)]
    Qasm(#[from] QasmError),
    #[error("qubit {qubit} out of range for {n} qubits")]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("classical bit {clbit} out of range for {n} bits")]
    ClbitOutOfRange { clbit: usize, n: usize },
    #[error("CNOT control and target are both {0}")]
    SameControlTarget(usize),
    #[error("CNOT({0},{1}) is not a coupling-graph edge")]
    NotNearestNeighbor(usize, usize),
    #[error("circuit contains non-CNOT gates")]
    NotCnotOnly,
    #[error("at least one shot is required")]
    NoShots,
    #[error("random circuits need at least 2 qubits, got {0}")]
    TooFewQubits(usize),
    #[error("circuit uses {n} qubits but the device has {available}")]
    TooWide { n: usize, available: usize },
    #[error(transparent)]
    Mapping(#[from] MappingError),
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error("synthesized segment failed verification: {0}")]
    Verification(Mismatch),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OneQubitKind {
    H,
    X,
    Z,
}

impl OneQubitKind {
    pub fn name(self) -> &'static str {
        match self {
            OneQubitKind::H => "h",
            OneQubitKind::X => "x",
            OneQubitKind::Z => "z",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gate {
    Cnot(Cnot),
    One { kind: OneQubitKind, qubit: usize },
    Measure { qubit: usize, clbit: usize },
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::Cnot(c) => vec![c.control, c.target],
            Gate::One { qubit, .. } | Gate::Measure { qubit, .. } => vec![qubit],
        }
    }

    /// The same gate with every qubit index passed through `f`.
    pub fn relabel(&self, mut f: impl FnMut(usize) -> usize) -> Gate {
        match *self {
            Gate::Cnot(c) => Gate::Cnot(Cnot::new(f(c.control), f(c.target))),
            Gate::One { kind, qubit } => Gate::One {
                kind,
                qubit: f(qubit),
            },
            Gate::Measure { qubit, clbit } => Gate::Measure {
                qubit: f(qubit),
                clbit,
            },
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::Cnot(c) => write!(f, "cx q[{}],q[{}]", c.control, c.target),
            Gate::One { kind, qubit } => write!(f, "{} q[{qubit}]", kind.name()),
            Gate::Measure { qubit, clbit } => write!(f, "measure q[{qubit}] -> c[{clbit}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Circuit {
    n: usize,
    clbits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            clbits: 0,
            gates: Vec::new(),
        }
    }

    pub fn with_clbits(n: usize, clbits: usize) -> Self {
        Self {
            n,
            clbits,
            gates: Vec::new(),
        }
    }

    pub fn from_cnots(n: usize, gates: &[Cnot]) -> Result<Self, CircuitError> {
        let mut c = Self::new(n);
        for &g in gates {
            c.push(Gate::Cnot(g))?;
        }
        Ok(c)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn clbits(&self) -> usize {
        self.clbits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        for q in gate.qubits() {
            if q >= self.n {
                return Err(CircuitError::QubitOutOfRange {
                    qubit: q,
                    n: self.n,
                });
            }
        }
        match gate {
            Gate::Cnot(c) if c.control == c.target => {
                return Err(CircuitError::SameControlTarget(c.control))
            }
            Gate::Measure { clbit, .. } if clbit >= self.clbits => {
                return Err(CircuitError::ClbitOutOfRange {
                    clbit,
                    n: self.clbits,
                })
            }
            _ => {}
        }
        self.gates.push(gate);
        Ok(())
    }

    pub fn cnot_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g, Gate::Cnot(_)))
            .count()
    }

    pub fn is_cnot_only(&self) -> bool {
        self.gates.iter().all(|g| matches!(g, Gate::Cnot(_)))
    }

    /// The CNOT list of a CNOT-only circuit.
    pub fn cnots(&self) -> Result<Vec<Cnot>, CircuitError> {
        self.gates
            .iter()
            .map(|g| match g {
                Gate::Cnot(c) => Ok(*c),
                _ => Err(CircuitError::NotCnotOnly),
            })
            .collect()
    }

    pub fn parity_matrix(&self) -> Result<ParityMatrix, CircuitError> {
        Ok(ParityMatrix::from_circuit(&self.cnots()?, self.n).map_err(SynthError::from)?)
    }

    /// ASAP layering depth.
    pub fn depth(&self) -> usize {
        layered_depth(self.n, self.gates.iter().map(Gate::qubits))
    }

    pub fn parse_qasm(text: &str) -> Result<Self, CircuitError> {
        crate::qasm::parse(text)
    }

    pub fn to_qasm(&self) -> String {
        crate::qasm::write(self)
    }
}

fn layered_depth(n: usize, gates: impl Iterator<Item = Vec<usize>>) -> usize {
    let mut last = vec![0usize; n];
    let mut depth = 0;
    for qs in gates {
        let layer = 1 + qs.iter().map(|&q| last[q]).max().unwrap_or(0);
        for q in qs {
            last[q] = layer;
        }
        depth = depth.max(layer);
    }
    depth
}

pub fn cnot_depth(gates: &[Cnot]) -> usize {
    let n = gates
        .iter()
        .map(|g| g.control.max(g.target) + 1)
        .max()
        .unwrap_or(0);
    layered_depth(n, gates.iter().map(|g| vec![g.control, g.target]))
}

/// `m` CNOTs with (control, target) uniform over ordered distinct pairs.
pub fn random_cnot_circuit(n: usize, m: usize, seed: u64) -> Result<Circuit, CircuitError> {
    if n < 2 {
        return Err(CircuitError::TooFewQubits(n));
    }
    let mut rng = substream(seed, 0);
    let mut c = Circuit::new(n);
    for _ in 0..m {
        let control = rng.gen_range(0..n);
        let mut target = rng.gen_range(0..n - 1);
        if target >= control {
            target += 1;
        }
        c.gates.push(Gate::Cnot(Cnot::new(control, target)));
    }
    Ok(c)
}

/// Bernstein-Vazirani oracle circuit: `secret.len()` data qubits plus an
/// ancilla (the last qubit); data qubits are measured.
pub fn bernstein_vazirani(secret: &[bool]) -> Circuit {
    let k = secret.len();
    let anc = k;
    let mut c = Circuit::with_clbits(k + 1, k);
    let mut push = |g| c.push(g).expect("indices in range");
    push(Gate::One {
        kind: OneQubitKind::X,
        qubit: anc,
    });
    for q in 0..=k {
        push(Gate::One {
            kind: OneQubitKind::H,
            qubit: q,
        });
    }
    for (q, &bit) in secret.iter().enumerate() {
        if bit {
            push(Gate::Cnot(Cnot::new(q, anc)));
        }
    }
    for q in 0..k {
        push(Gate::One {
            kind: OneQubitKind::H,
            qubit: q,
        });
    }
    for q in 0..k {
        push(Gate::Measure { qubit: q, clbit: q });
    }
    c
}

fn edge_error(g: &CouplingGraph, c: &Cnot) -> Result<f64, CircuitError> {
    g.error(c.control, c.target)
        .ok_or(CircuitError::NotNearestNeighbor(c.control, c.target))
}

/// Estimated success probability: product of `(1 - e)` over CNOTs and of
/// `(1 - one_q_error)` over single-qubit gates. Measurements count as 1.
pub fn esp(circuit: &Circuit, g: &CouplingGraph, one_q_error: f64) -> Result<f64, CircuitError> {
    let mut p = 1.0;
    for gate in circuit.gates() {
        match gate {
            Gate::Cnot(c) => p *= 1.0 - edge_error(g, c)?,
            Gate::One { .. } => p *= 1.0 - one_q_error,
            Gate::Measure { .. } => {}
        }
    }
    Ok(p)
}

/// Fraction of noisy classical runs from `|0...0>` that end in all zeros.
///
/// Each CNOT fails with its edge error; a failure flips the control, the
/// target, or both, chosen uniformly. Shot `s` draws from substream `s`.
pub fn monte_carlo_fidelity(
    circuit: &Circuit,
    g: &CouplingGraph,
    shots: u64,
    seed: u64,
) -> Result<f64, CircuitError> {
    if shots == 0 {
        return Err(CircuitError::NoShots);
    }
    let gates: Vec<(Cnot, f64)> = circuit
        .cnots()?
        .into_iter()
        .map(|c| edge_error(g, &c).map(|e| (c, e)))
        .collect::<Result<_, _>>()?;
    let mut zero = 0u64;
    let mut bits = vec![false; circuit.n()];
    for shot in 0..shots {
        let mut rng = substream(seed, shot);
        bits.iter_mut().for_each(|b| *b = false);
        for &(c, e) in &gates {
            bits[c.target] ^= bits[c.control];
            let u: f64 = rng.gen();
            if u < e {
                match rng.gen_range(0..3) {
                    0 => bits[c.control] ^= true,
                    1 => bits[c.target] ^= true,
                    _ => {
                        bits[c.control] ^= true;
                        bits[c.target] ^= true;
                    }
                }
            }
        }
        if bits.iter().all(|&b| !b) {
            zero += 1;
        }
    }
    Ok(zero as f64 / shots as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FidelityReport {
    pub esp: f64,
    pub mc_fidelity: Option<f64>,
    pub shots: u64,
    pub seed: u64,
}

/// ESP always; the Monte-Carlo estimate only when `shots > 0`.
pub fn fidelity_report(
    circuit: &Circuit,
    g: &CouplingGraph,
    one_q_error: f64,
    shots: u64,
    seed: u64,
) -> Result<FidelityReport, CircuitError> {
    let esp = esp(circuit, g, one_q_error)?;
    let mc_fidelity = if shots > 0 {
        Some(monte_carlo_fidelity(circuit, g, shots, seed)?)
    } else {
        None
    };
    Ok(FidelityReport {
        esp,
        mc_fidelity,
        shots,
        seed,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    /// Parity matrix of the original CNOT run, over logical qubits.
    pub original: ParityMatrix,
    pub result: SynthesisResult,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Segmented {
    /// Output over physical qubits (`qreg` sized to the device).
    pub circuit: Circuit,
    pub mapping: Mapping,
    pub segments: Vec<Segment>,
}

/// Synthesizes every maximal CNOT run of `circuit` under one shared
/// placement and moves single-qubit gates and measurements to the physical
/// qubits of their logical qubits. Every segment is verified before return.
pub fn segment_and_synthesize(
    circuit: &Circuit,
    g: &CouplingGraph,
    config: &TabuConfig,
) -> Result<Segmented, CircuitError> {
    let n = circuit.n();
    let available = g.vertex_count();
    if n > available {
        return Err(CircuitError::TooWide { n, available });
    }
    g.ensure_connected().map_err(MappingError::from)?;
    let mapping = if n == 0 {
        Mapping::new(Vec::new())?
    } else {
        kqpimo(g, n, config)?
    };
    let mut out = Circuit::with_clbits(g.num_qubits(), circuit.clbits());
    let mut segments = Vec::new();
    let mut run: Vec<Cnot> = Vec::new();

    let mut flush = |run: &mut Vec<Cnot>, out: &mut Circuit| -> Result<(), CircuitError> {
        if run.is_empty() {
            return Ok(());
        }
        let original = ParityMatrix::from_circuit(run, n).map_err(SynthError::from)?;
        let result = lcnns_with_mapping(&original, g, &mapping)?;
        verify_equivalence(&original, &result, g).map_err(CircuitError::Verification)?;
        for &c in &result.gates {
            out.push(Gate::Cnot(c))?;
        }
        segments.push(Segment { original, result });
        run.clear();
        Ok(())
    };

    for gate in circuit.gates() {
        match gate {
            Gate::Cnot(c) => run.push(*c),
            other => {
                flush(&mut run, &mut out)?;
                out.push(other.relabel(|q| mapping.physical(q)))?;
            }
        }
    }
    flush(&mut run, &mut out)?;
    Ok(Segmented {
        circuit: out,
        mapping,
        segments,
    })
}

#[derive(Debug, Clone, PartialEq)]
enum Block {
    Linear(ParityMatrix),
    Other(Vec<Gate>),
}

/// Splits a logical circuit into nontrivial CNOT blocks (as parity
/// matrices) and runs of other gates; identity CNOT blocks vanish and the
/// runs around them merge.
fn blocks(n: usize, gates: &[Gate]) -> Result<Vec<Block>, Mismatch> {
    let mut out: Vec<Block> = Vec::new();
    let mut run = Vec::new();
    let flush = |run: &mut Vec<Cnot>, out: &mut Vec<Block>| -> Result<(), Mismatch> {
        if run.is_empty() {
            return Ok(());
        }
        let m = ParityMatrix::from_circuit(run, n.max(1))
            .map_err(|e| Mismatch::Structure(e.to_string()))?;
        run.clear();
        if !m.is_identity() {
            out.push(Block::Linear(m));
        }
        Ok(())
    };
    for gate in gates {
        match gate {
            Gate::Cnot(c) => run.push(*c),
            other => {
                flush(&mut run, &mut out)?;
                match out.last_mut() {
                    Some(Block::Other(list)) => list.push(*other),
                    _ => out.push(Block::Other(vec![*other])),
                }
            }
        }
    }
    flush(&mut run, &mut out)?;
    Ok(out)
}

/// Checks that `synthesized` (physical qubits) implements `original`
/// (logical qubits) under `mapping`: pulled back through the mapping, the
/// non-trivial CNOT blocks have equal parity matrices and the other gates
/// agree exactly. With `g` given, every CNOT must be a coupling-graph edge.
pub fn verify_circuits(
    original: &Circuit,
    synthesized: &Circuit,
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
    let inv = mapping.inverse(
        synthesized
            .n()
            .max(mapping.assign().iter().copied().max().map_or(0, |m| m + 1)),
    );
    let mut pulled = Vec::with_capacity(synthesized.len());
    for (index, gate) in synthesized.gates().iter().enumerate() {
        if let (Some(g), Gate::Cnot(c)) = (g, gate) {
            if !g.has_edge(c.control, c.target) {
                return Err(Mismatch::IllegalGate { index, gate: *c });
            }
        }
        let mut bad = None;
        let back = gate.relabel(|q| match inv.get(q).copied().flatten() {
            Some(l) => l,
            None => {
                bad.get_or_insert(q);
                0
            }
        });
        if let Some(qubit) = bad {
            return Err(Mismatch::UnmappedQubit { index, qubit });
        }
        pulled.push(back);
    }
    let want = blocks(n, original.gates())?;
    let got = blocks(n, &pulled)?;
    for (k, (a, b)) in want.iter().zip(&got).enumerate() {
        match (a, b) {
            (Block::Linear(x), Block::Linear(y)) => {
                if let Some(r) = y.first_mismatch(x) {
                    return Err(Mismatch::Structure(format!(
                        "CNOT block {k}: parity matrices differ first at row {r}"
                    )));
                }
            }
            (Block::Other(x), Block::Other(y)) if x == y => {}
            _ => {
                return Err(Mismatch::Structure(format!(
                    "block {k} differs between the circuits"
                )))
            }
        }
    }
    if want.len() != got.len() {
        return Err(Mismatch::Structure(format!(
            "expected {} blocks, found {}",
            want.len(),
            got.len()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(c: usize, t: usize) -> Gate {
        Gate::Cnot(Cnot::new(c, t))
    }

    #[test]
    fn depth_examples() {
        assert_eq!(Circuit::new(3).depth(), 0);
        let c = Circuit::from_cnots(4, &[Cnot::new(0, 1), Cnot::new(2, 3)]).unwrap();
        assert_eq!(c.depth(), 1);
        let c =
            Circuit::from_cnots(5, &[Cnot::new(0, 1), Cnot::new(1, 2), Cnot::new(3, 4)]).unwrap();
        assert_eq!(c.depth(), 2);
        assert_eq!(
            cnot_depth(&[Cnot::new(0, 1), Cnot::new(1, 2), Cnot::new(3, 4)]),
            2
        );
    }

    #[test]
    fn push_validates() {
        let mut c = Circuit::new(2);
        assert_eq!(c.push(cx(0, 0)), Err(CircuitError::SameControlTarget(0)));
        assert!(matches!(
            c.push(cx(0, 2)),
            Err(CircuitError::QubitOutOfRange { qubit: 2, n: 2 })
        ));
        assert!(matches!(
            c.push(Gate::Measure { qubit: 0, clbit: 0 }),
            Err(CircuitError::ClbitOutOfRange { .. })
        ));
    }

    #[test]
    fn random_circuit_examples() {
        assert!(random_cnot_circuit(4, 0, 1).unwrap().is_empty());
        assert_eq!(
            random_cnot_circuit(5, 50, 9).unwrap(),
            random_cnot_circuit(5, 50, 9).unwrap()
        );
        assert_ne!(
            random_cnot_circuit(5, 50, 9).unwrap(),
            random_cnot_circuit(5, 50, 10).unwrap()
        );
        let full = (0..20)
            .filter(|&s| {
                random_cnot_circuit(5, 1000, s)
                    .unwrap()
                    .parity_matrix()
                    .unwrap()
                    .rank()
                    == 5
            })
            .count();
        assert!(full >= 19);
        assert_eq!(
            random_cnot_circuit(1, 3, 0).unwrap_err(),
            CircuitError::TooFewQubits(1)
        );
    }

    #[test]
    fn esp_examples() {
        let q = CouplingGraph::builtin("quito").unwrap();
        assert_eq!(esp(&Circuit::new(5), &q, 0.0017).unwrap(), 1.0);
        let one = Circuit::from_cnots(5, &[Cnot::new(0, 1)]).unwrap();
        assert!((esp(&one, &q, 0.0017).unwrap() - 0.98369).abs() < 1e-12);
        assert_eq!(q.default_one_qubit_error(), 0.0017);
        let bad = Circuit::from_cnots(5, &[Cnot::new(0, 2)]).unwrap();
        assert_eq!(
            esp(&bad, &q, 0.0).unwrap_err(),
            CircuitError::NotNearestNeighbor(0, 2)
        );
        let mut h = Circuit::with_clbits(5, 1);
        h.push(Gate::One {
            kind: OneQubitKind::H,
            qubit: 0,
        })
        .unwrap();
        h.push(Gate::Measure { qubit: 0, clbit: 0 }).unwrap();
        assert!((esp(&h, &q, 0.0017).unwrap() - 0.9983).abs() < 1e-12);
    }

    #[test]
    fn monte_carlo_examples() {
        let clean = CouplingGraph::cycle(3, 0.0);
        let c = random_cnot_circuit(3, 40, 2).unwrap();
        assert_eq!(monte_carlo_fidelity(&c, &clean, 500, 1).unwrap(), 1.0);
        let noisy = CouplingGraph::cycle(3, 0.05);
        assert_eq!(
            monte_carlo_fidelity(&Circuit::new(3), &noisy, 10, 1).unwrap(),
            1.0
        );
        let a = monte_carlo_fidelity(&c, &noisy, 300, 4);
        assert_eq!(a, monte_carlo_fidelity(&c, &noisy, 300, 4));
        let one = Circuit::from_cnots(2, &[Cnot::new(0, 1)]).unwrap();
        let g = CouplingGraph::linear(2, 0.05);
        let est = monte_carlo_fidelity(&one, &g, 20_000, 3).unwrap();
        let sigma = (0.05f64 * 0.95 / 20_000.0).sqrt();
        assert!((est - 0.95).abs() <= 3.0 * sigma, "{est}");
        assert_eq!(
            monte_carlo_fidelity(&one, &g, 0, 3).unwrap_err(),
            CircuitError::NoShots
        );
        let bv = bernstein_vazirani(&[true]);
        assert_eq!(
            monte_carlo_fidelity(&bv, &g, 1, 0).unwrap_err(),
            CircuitError::NotCnotOnly
        );
    }

    #[test]
    fn bv_on_quito_respects_edges() {
        let q = CouplingGraph::builtin("quito").unwrap();
        let bv = bernstein_vazirani(&[true, false, true, true]);
        let out = segment_and_synthesize(&bv, &q, &TabuConfig::default()).unwrap();
        for gate in out.circuit.gates() {
            if let Gate::Cnot(c) = gate {
                assert!(q.has_edge(c.control, c.target));
            }
        }
        assert_eq!(out.segments.len(), 1);
        verify_circuits(&bv, &out.circuit, &out.mapping, Some(&q)).unwrap();
    }

    #[test]
    fn no_cnots_is_pure_relocation() {
        let q = CouplingGraph::builtin("quito").unwrap();
        let mut c = Circuit::with_clbits(3, 3);
        for qb in 0..3 {
            c.push(Gate::One {
                kind: OneQubitKind::Z,
                qubit: qb,
            })
            .unwrap();
        }
        let out = segment_and_synthesize(&c, &q, &TabuConfig::default()).unwrap();
        assert!(out.segments.is_empty());
        assert_eq!(out.circuit.len(), 3);
        for (k, gate) in out.circuit.gates().iter().enumerate() {
            assert_eq!(
                *gate,
                Gate::One {
                    kind: OneQubitKind::Z,
                    qubit: out.mapping.physical(k)
                }
            );
        }
    }

    #[test]
    fn single_run_matches_lcnns() {
        let g = CouplingGraph::builtin("quito").unwrap();
        let c = random_cnot_circuit(5, 30, 5).unwrap();
        let cfg = TabuConfig::default();
        let out = segment_and_synthesize(&c, &g, &cfg).unwrap();
        let direct = crate::synth::lcnns(&c.parity_matrix().unwrap(), &g, &cfg).unwrap();
        assert_eq!(out.segments.len(), 1);
        assert_eq!(out.segments[0].result, direct);
        assert_eq!(out.circuit.cnots().unwrap(), direct.gates);
    }

    #[test]
    fn verify_circuits_detects_tampering() {
        let g = CouplingGraph::builtin("quito").unwrap();
        let c = random_cnot_circuit(5, 30, 8).unwrap();
        let out = segment_and_synthesize(&c, &g, &TabuConfig::default()).unwrap();
        verify_circuits(&c, &out.circuit, &out.mapping, Some(&g)).unwrap();
        let mut gates = out.circuit.cnots().unwrap();
        gates.pop();
        let tampered = Circuit::from_cnots(out.circuit.n(), &gates).unwrap();
        assert!(verify_circuits(&c, &tampered, &out.mapping, Some(&g)).is_err());
    }
}

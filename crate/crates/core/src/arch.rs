//! Coupling graphs with per-edge CNOT error rates.
//!
//! Vertex ids are physical-qubit ids and are stable: removing a vertex keeps
//! every other id unchanged, so residual graphs produced during synthesis can
//! be indexed with the original ids.

use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

/// Largest graph the exhaustive Hamiltonian-path search accepts.
pub const HAMILTONIAN_LIMIT: usize = 32;

/// Error assumed for parametric topologies (`linear`, `grid`, ...).
pub const DEFAULT_PARAMETRIC_ERROR: f64 = 0.01;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ArchError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("error rate {rate} on edge ({u},{v}) is outside [0,1)")]
    ErrorRate { u: usize, v: usize, rate: f64 },
    #[error("vertex {v} out of range for {n} qubits")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0},{1})")]
    DuplicateEdge(usize, usize),
    #[error("vertex {0} is not in the graph")]
    AbsentVertex(usize),
    #[error("coupling graph is not connected")]
    Disconnected,
    #[error("unknown architecture '{0}'")]
    UnknownArch(String),
    #[error("graph has {size} vertices; exhaustive search is limited to {limit}")]
    TooLarge { size: usize, limit: usize },
}

/// Undirected physical-qubit graph. Edge weights are CNOT error rates.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingGraph {
    name: Option<String>,
    present: Vec<bool>,
    /// Sorted by neighbor id; only present vertices appear.
    adj: Vec<Vec<(usize, f64)>>,
}

impl CouplingGraph {
    /// `num_qubits` isolated vertices.
    pub fn new(num_qubits: usize) -> Self {
        Self {
            name: None,
            present: vec![true; num_qubits],
            adj: vec![Vec::new(); num_qubits],
        }
    }

    pub fn from_edges(num_qubits: usize, edges: &[(usize, usize, f64)]) -> Result<Self, ArchError> {
        let mut g = Self::new(num_qubits);
        for &(u, v, e) in edges {
            g.add_edge(u, v, e)?;
        }
        Ok(g)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn add_edge(&mut self, u: usize, v: usize, error: f64) -> Result<(), ArchError> {
        let n = self.present.len();
        for x in [u, v] {
            if x >= n {
                return Err(ArchError::VertexOutOfRange { v: x, n });
            }
            if !self.present[x] {
                return Err(ArchError::AbsentVertex(x));
            }
        }
        if u == v {
            return Err(ArchError::SelfLoop(u));
        }
        if !(0.0..1.0).contains(&error) {
            return Err(ArchError::ErrorRate { u, v, rate: error });
        }
        if self.has_edge(u, v) {
            return Err(ArchError::DuplicateEdge(u.min(v), u.max(v)));
        }
        for (a, b) in [(u, v), (v, u)] {
            let list = &mut self.adj[a];
            let pos = list.partition_point(|&(w, _)| w < b);
            list.insert(pos, (b, error));
        }
        Ok(())
    }

    pub fn linear(n: usize, error: f64) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i, error)).collect();
        Self::from_edges(n, &edges)
            .expect("valid chain")
            .with_name(format!("linear({n})"))
    }

    pub fn cycle(n: usize, error: f64) -> Self {
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i, error)).collect();
        if n > 2 {
            edges.push((n - 1, 0, error));
        }
        Self::from_edges(n, &edges)
            .expect("valid cycle")
            .with_name(format!("cycle({n})"))
    }

    /// Hub `0` joined to leaves `1..=leaves`.
    pub fn star(leaves: usize, error: f64) -> Self {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i, error)).collect();
        Self::from_edges(leaves + 1, &edges)
            .expect("valid star")
            .with_name(format!("star({leaves})"))
    }

    /// `rows x cols` lattice, vertex id `r * cols + c`.
    pub fn grid(rows: usize, cols: usize, error: f64) -> Self {
        let mut edges = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                let v = r * cols + c;
                if c + 1 < cols {
                    edges.push((v, v + 1, error));
                }
                if r + 1 < rows {
                    edges.push((v, v + cols, error));
                }
            }
        }
        Self::from_edges(rows * cols, &edges)
            .expect("valid grid")
            .with_name(format!("grid({rows},{cols})"))
    }

    /// Size of the id space (including removed vertices).
    pub fn num_qubits(&self) -> usize {
        self.present.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.present.iter().filter(|&&p| p).count()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.present.get(v).copied().unwrap_or(false)
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.present
            .iter()
            .enumerate()
            .filter_map(|(v, &p)| p.then_some(v))
    }

    /// All edges as `(min, max, error)`, sorted by endpoints.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for (u, list) in self.adj.iter().enumerate() {
            for &(v, e) in list {
                if u < v {
                    out.push((u, v, e));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn error(&self, u: usize, v: usize) -> Option<f64> {
        let list = self.adj.get(u)?;
        list.binary_search_by_key(&v, |&(w, _)| w)
            .ok()
            .map(|i| list[i].1)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.error(u, v).is_some()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().map(|&(w, _)| w)
    }

    pub fn weighted_neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    /// Mean error over edges incident to `v`; zero for an isolated vertex.
    pub fn mean_incident_error(&self, v: usize) -> f64 {
        let list = &self.adj[v];
        if list.is_empty() {
            0.0
        } else {
            list.iter().map(|&(_, e)| e).sum::<f64>() / list.len() as f64
        }
    }

    /// Vertices reachable from `start`, ascending.
    pub fn component_of(&self, start: usize) -> BTreeSet<usize> {
        let mut seen = BTreeSet::new();
        if !self.contains(start) {
            return seen;
        }
        let mut queue = VecDeque::from([start]);
        seen.insert(start);
        while let Some(u) = queue.pop_front() {
            for w in self.neighbors(u) {
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// Connected components, each ascending, ordered by smallest member.
    pub fn components(&self) -> Vec<BTreeSet<usize>> {
        let mut covered = vec![false; self.num_qubits()];
        let mut out = Vec::new();
        for v in self.vertices() {
            if !covered[v] {
                let comp = self.component_of(v);
                for &w in &comp {
                    covered[w] = true;
                }
                out.push(comp);
            }
        }
        out
    }

    /// True for graphs with at most one component (the empty graph counts).
    pub fn is_connected(&self) -> bool {
        match self.vertices().next() {
            None => true,
            Some(v) => self.component_of(v).len() == self.vertex_count(),
        }
    }

    pub fn ensure_connected(&self) -> Result<(), ArchError> {
        if self.is_connected() {
            Ok(())
        } else {
            Err(ArchError::Disconnected)
        }
    }

    /// Cut vertices via DFS low-link values.
    pub fn articulation_points(&self) -> Result<BTreeSet<usize>, ArchError> {
        self.ensure_connected()?;
        let n = self.num_qubits();
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut cut = BTreeSet::new();
        let mut timer = 0;
        if let Some(root) = self.vertices().next() {
            self.lowlink(root, None, &mut timer, &mut disc, &mut low, &mut cut);
        }
        Ok(cut)
    }

    fn lowlink(
        &self,
        u: usize,
        parent: Option<usize>,
        timer: &mut usize,
        disc: &mut [usize],
        low: &mut [usize],
        cut: &mut BTreeSet<usize>,
    ) {
        disc[u] = *timer;
        low[u] = *timer;
        *timer += 1;
        let mut children = 0;
        for w in self.neighbors(u) {
            if disc[w] == usize::MAX {
                children += 1;
                self.lowlink(w, Some(u), timer, disc, low, cut);
                low[u] = low[u].min(low[w]);
                if parent.is_some() && low[w] >= disc[u] {
                    cut.insert(u);
                }
            } else if Some(w) != parent {
                low[u] = low[u].min(disc[w]);
            }
        }
        if parent.is_none() && children > 1 {
            cut.insert(u);
        }
    }

    /// Non-cut vertices: the ones that can be removed without splitting the
    /// graph.
    pub fn key_qubits(&self) -> Result<BTreeSet<usize>, ArchError> {
        let cut = self.articulation_points()?;
        Ok(self.vertices().filter(|v| !cut.contains(v)).collect())
    }

    /// Exhaustive backtracking search for a path visiting every vertex once.
    ///
    /// Start vertices are tried in ascending id order and neighbors in
    /// ascending id order; the first path found is returned.
    pub fn hamiltonian_path(&self) -> Result<Option<Vec<usize>>, ArchError> {
        let size = self.vertex_count();
        if size > HAMILTONIAN_LIMIT {
            return Err(ArchError::TooLarge {
                size,
                limit: HAMILTONIAN_LIMIT,
            });
        }
        if size == 0 {
            return Ok(Some(Vec::new()));
        }
        if !self.is_connected() {
            return Ok(None);
        }
        let leaves: Vec<usize> = self.vertices().filter(|&v| self.degree(v) == 1).collect();
        if leaves.len() > 2 {
            return Ok(None);
        }
        // With two pendant vertices both must be endpoints, so no other start
        // can succeed.
        let starts: Vec<usize> = if leaves.len() == 2 {
            leaves
        } else {
            self.vertices().collect()
        };
        let mut visited = vec![false; self.num_qubits()];
        let mut path = Vec::with_capacity(size);
        for s in starts {
            visited[s] = true;
            path.push(s);
            if self.extend_path(&mut path, &mut visited, size) {
                return Ok(Some(path));
            }
            path.pop();
            visited[s] = false;
        }
        Ok(None)
    }

    fn extend_path(&self, path: &mut Vec<usize>, visited: &mut [bool], size: usize) -> bool {
        if path.len() == size {
            return true;
        }
        let u = *path.last().expect("path is nonempty");
        for i in 0..self.adj[u].len() {
            let w = self.adj[u][i].0;
            if visited[w] {
                continue;
            }
            visited[w] = true;
            path.push(w);
            if self.extend_path(path, visited, size) {
                return true;
            }
            path.pop();
            visited[w] = false;
        }
        false
    }

    /// Copy of the graph without `v` and its incident edges.
    pub fn remove_vertex(&self, v: usize) -> Result<Self, ArchError> {
        let mut g = self.clone();
        g.remove_vertex_mut(v)?;
        Ok(g)
    }

    pub fn remove_vertex_mut(&mut self, v: usize) -> Result<(), ArchError> {
        if !self.contains(v) {
            return Err(ArchError::AbsentVertex(v));
        }
        self.present[v] = false;
        for w in std::mem::take(&mut self.adj[v]) {
            self.adj[w.0].retain(|&(x, _)| x != v);
        }
        Ok(())
    }

    /// Subgraph induced by `keep`; ids outside `keep` become absent.
    pub fn induced_subgraph<I>(&self, keep: I) -> Self
    where
        I: IntoIterator<Item = usize>,
    {
        let mut mask = vec![false; self.num_qubits()];
        for v in keep {
            if self.contains(v) {
                mask[v] = true;
            }
        }
        let adj = self
            .adj
            .iter()
            .enumerate()
            .map(|(u, list)| {
                if mask[u] {
                    list.iter().copied().filter(|&(w, _)| mask[w]).collect()
                } else {
                    Vec::new()
                }
            })
            .collect();
        Self {
            name: self.name.clone(),
            present: mask,
            adj,
        }
    }

    /// Parses the architecture text format:
    ///
    /// ```text
    /// # comment
    /// qubits 5
    /// name quito          (optional)
    /// edge 0 1 1.631e-2
    /// ```
    pub fn parse(text: &str) -> Result<Self, ArchError> {
        let mut graph: Option<Self> = None;
        let mut name = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| ArchError::Parse { line: line_no, msg };
            let fields: Vec<&str> = line.split_whitespace().collect();
            match (fields[0], graph.as_mut()) {
                ("qubits", None) => {
                    if fields.len() != 2 {
                        return Err(err("expected `qubits N`".into()));
                    }
                    let n: usize = fields[1]
                        .parse()
                        .map_err(|_| err(format!("bad qubit count '{}'", fields[1])))?;
                    graph = Some(Self::new(n));
                }
                ("qubits", Some(_)) => return Err(err("duplicate `qubits` line".into())),
                (_, None) => return Err(err("first statement must be `qubits N`".into())),
                ("name", Some(_)) => {
                    if fields.len() != 2 {
                        return Err(err("expected `name LABEL`".into()));
                    }
                    name = Some(fields[1].to_string());
                }
                ("edge", Some(g)) => {
                    if fields.len() != 4 {
                        return Err(err("expected `edge U V ERR`".into()));
                    }
                    let u: usize = fields[1]
                        .parse()
                        .map_err(|_| err(format!("bad vertex '{}'", fields[1])))?;
                    let v: usize = fields[2]
                        .parse()
                        .map_err(|_| err(format!("bad vertex '{}'", fields[2])))?;
                    let e: f64 = fields[3]
                        .parse()
                        .map_err(|_| err(format!("bad error rate '{}'", fields[3])))?;
                    if !e.is_finite() {
                        return Err(err(format!("bad error rate '{}'", fields[3])));
                    }
                    g.add_edge(u, v, e).map_err(|e| match e {
                        ArchError::ErrorRate { .. } => e,
                        other => err(other.to_string()),
                    })?;
                }
                (other, Some(_)) => return Err(err(format!("unknown statement '{other}'"))),
            }
        }
        let mut g = graph.ok_or(ArchError::Parse {
            line: 0,
            msg: "missing `qubits N` line".into(),
        })?;
        g.name = name;
        Ok(g)
    }

    /// Writes the text format; edges sorted by `(min, max)` endpoint.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "qubits {}", self.num_qubits()).unwrap();
        if let Some(name) = &self.name {
            writeln!(out, "name {name}").unwrap();
        }
        for (u, v, e) in self.edges() {
            writeln!(out, "edge {u} {v} {e:e}").unwrap();
        }
        out
    }

    /// Built-in device catalog. Accepts `quito`, `guadalupe`, `manila`,
    /// `wuyuan2`, `scq10`, `tokyo`, and the parametric forms `linear(n)`,
    /// `grid(r,c)`, `cycle(n)`, `star(k)`.
    pub fn builtin(name: &str) -> Result<Self, ArchError> {
        let key: String = name
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect::<String>()
            .to_ascii_lowercase();
        let unknown = || ArchError::UnknownArch(name.to_string());
        let g = match key.as_str() {
            "quito" => Self::from_edges(5, QUITO)?.with_name("quito"),
            "guadalupe" => Self::from_edges(16, GUADALUPE)?.with_name("guadalupe"),
            "manila" => {
                let mut g = Self::linear(5, MANILA_CNOT_ERROR);
                g.name = Some("manila".into());
                g
            }
            "wuyuan2" => {
                let edges: Vec<_> = WUYUAN2_CZ_FIDELITY
                    .iter()
                    .enumerate()
                    .map(|(i, f)| (i, i + 1, round_error(1.0 - f)))
                    .collect();
                Self::from_edges(6, &edges)?.with_name("wuyuan2")
            }
            "scq10" => {
                let edges: Vec<_> = SCQ10_CZ_FIDELITY
                    .iter()
                    .enumerate()
                    .map(|(i, f)| (i, i + 1, round_error(1.0 - f)))
                    .collect();
                Self::from_edges(10, &edges)?.with_name("scq10")
            }
            "tokyo" => {
                let edges: Vec<_> = TOKYO
                    .iter()
                    .map(|&(u, v)| (u, v, TOKYO_CNOT_ERROR))
                    .collect();
                Self::from_edges(20, &edges)?.with_name("tokyo")
            }
            _ => {
                let (kind, args) = parse_call(&key).ok_or_else(unknown)?;
                match (kind, args.as_slice()) {
                    ("linear", &[n]) if n >= 1 => Self::linear(n, DEFAULT_PARAMETRIC_ERROR),
                    ("cycle", &[n]) if n >= 1 => Self::cycle(n, DEFAULT_PARAMETRIC_ERROR),
                    ("star", &[k]) => Self::star(k, DEFAULT_PARAMETRIC_ERROR),
                    ("grid", &[r, c]) if r >= 1 && c >= 1 => {
                        Self::grid(r, c, DEFAULT_PARAMETRIC_ERROR)
                    }
                    _ => return Err(unknown()),
                }
            }
        };
        Ok(g)
    }

    /// Default single-qubit gate error for a catalog device (calibration
    /// averages); zero when no data is available.
    pub fn default_one_qubit_error(&self) -> f64 {
        match self.name() {
            Some("quito") => 0.0017,
            Some("manila") => 0.0011,
            Some("guadalupe") => 0.0004,
            Some("wuyuan2") => {
                let n = WUYUAN2_1Q_FIDELITY.len() as f64;
                round_error(WUYUAN2_1Q_FIDELITY.iter().map(|f| 1.0 - f).sum::<f64>() / n)
            }
            _ => 0.0,
        }
    }
}

/// Strips float noise from `1 - fidelity` so catalog values print cleanly.
fn round_error(e: f64) -> f64 {
    (e * 1e8).round() / 1e8
}

fn parse_call(key: &str) -> Option<(&str, Vec<usize>)> {
    let open = key.find('(')?;
    let inner = key[open + 1..].strip_suffix(')')?;
    let args = inner
        .split(',')
        .map(|a| a.parse().ok())
        .collect::<Option<Vec<usize>>>()?;
    Some((&key[..open], args))
}

/// Names accepted by [`CouplingGraph::builtin`] without parameters.
pub const CATALOG: &[&str] = &["quito", "guadalupe", "manila", "wuyuan2", "scq10", "tokyo"];

const QUITO: &[(usize, usize, f64)] = &[
    (0, 1, 1.631e-2),
    (1, 2, 7.768e-3),
    (1, 3, 7.440e-3),
    (3, 4, 8.791e-3),
];

const GUADALUPE: &[(usize, usize, f64)] = &[
    (0, 1, 1.206e-2),
    (1, 2, 1.208e-2),
    (2, 3, 1.332e-2),
    (3, 5, 1.187e-2),
    (5, 8, 7.481e-3),
    (8, 9, 1.045e-2),
    (8, 11, 9.076e-3),
    (11, 14, 7.613e-3),
    (13, 14, 8.800e-3),
    (12, 13, 6.825e-3),
    (12, 15, 5.464e-3),
    (10, 12, 1.326e-2),
    (7, 10, 1.523e-2),
    (4, 7, 2.458e-2),
    (1, 4, 8.158e-3),
    (6, 7, 1.073e-2),
];

const MANILA_CNOT_ERROR: f64 = 0.0116;
const TOKYO_CNOT_ERROR: f64 = 0.0313;

const TOKYO: &[(usize, usize)] = &[
    (0, 1),
    (1, 2),
    (2, 3),
    (3, 4),
    (0, 5),
    (1, 6),
    (2, 7),
    (3, 8),
    (4, 9),
    (3, 9),
    (4, 8),
    (5, 6),
    (6, 7),
    (7, 8),
    (8, 9),
    (5, 10),
    (6, 11),
    (7, 12),
    (8, 13),
    (5, 11),
    (6, 10),
    (7, 13),
    (8, 12),
    (10, 11),
    (11, 12),
    (12, 13),
    (13, 14),
    (10, 15),
    (11, 16),
    (13, 18),
    (14, 19),
    (11, 17),
    (12, 16),
    (13, 19),
    (14, 18),
    (15, 16),
    (16, 17),
];

/// CZ fidelities along the chain Q0-Q1-...-Q5.
const WUYUAN2_CZ_FIDELITY: &[f64] = &[0.9851, 0.9619, 0.7014, 0.8256, 0.7132];
const WUYUAN2_1Q_FIDELITY: &[f64] = &[0.9989, 0.9989, 0.9961, 0.998, 0.9987, 0.9982];

/// CZ fidelities along the chain Q1-Q2-...-Q10 (relabelled from zero).
const SCQ10_CZ_FIDELITY: &[f64] = &[
    0.9787, 0.9564, 0.949, 0.963, 0.9669, 0.9663, 0.956, 0.9741, 0.9909,
];

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn parse_minimal() {
        let g = CouplingGraph::parse("qubits 2\nedge 0 1 0.01").unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.error(0, 1), Some(0.01));
        assert_eq!(g.error(1, 0), Some(0.01));
    }

    #[test]
    fn parse_quito_file_matches_builtin() {
        let text = "# IBMQ quito\nqubits 5\nname quito\n\
                    edge 1 0 1.631e-2\nedge 1 2 7.768e-3\nedge 3 1 7.440e-3\nedge 3 4 8.791e-3\n";
        assert_eq!(
            CouplingGraph::parse(text).unwrap(),
            CouplingGraph::builtin("quito").unwrap()
        );
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            CouplingGraph::parse("qubits 2\nedge 0 1"),
            Err(ArchError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            CouplingGraph::parse("edge 0 1 0.1"),
            Err(ArchError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            CouplingGraph::parse("qubits 2\nedge 0 1 1.0"),
            Err(ArchError::ErrorRate { .. })
        ));
        assert!(matches!(
            CouplingGraph::parse("qubits 2\nedge 0 1 -0.1"),
            Err(ArchError::ErrorRate { .. })
        ));
        assert!(matches!(
            CouplingGraph::parse("qubits 2\nedge 0 2 0.1"),
            Err(ArchError::Parse { line: 2, .. })
        ));
        assert!(matches!(
            CouplingGraph::parse("qubits 2\nedge 0 1 0.1\nedge 1 0 0.2"),
            Err(ArchError::Parse { line: 3, .. })
        ));
        assert!(matches!(
            CouplingGraph::parse("qubits 2\nedge 0 1 nan"),
            Err(ArchError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn disconnected_file_parses_but_is_flagged() {
        let g = CouplingGraph::parse("qubits 3\nedge 0 1 0.1").unwrap();
        assert!(!g.is_connected());
        assert_eq!(g.articulation_points(), Err(ArchError::Disconnected));
    }

    #[test]
    fn write_sorts_edges_and_round_trips() {
        let g = CouplingGraph::builtin("guadalupe").unwrap();
        let text = g.to_text();
        assert!(text.starts_with("qubits 16\nname guadalupe\nedge 0 1 1.206e-2\n"));
        assert_eq!(CouplingGraph::parse(&text).unwrap(), g);
    }

    #[test]
    fn builtin_error_values() {
        let quito = CouplingGraph::builtin("quito").unwrap();
        assert_eq!(quito.error(0, 1), Some(1.631e-2));
        let guad = CouplingGraph::builtin("guadalupe").unwrap();
        assert_eq!(guad.error(12, 15), Some(5.464e-3));
        assert_eq!(guad.edge_count(), 16);
        let lin = CouplingGraph::builtin("linear(3)").unwrap();
        assert_eq!(lin.edges(), vec![(0, 1, 0.01), (1, 2, 0.01)]);
        let tokyo = CouplingGraph::builtin("tokyo").unwrap();
        assert_eq!(tokyo.vertex_count(), 20);
        assert_eq!(tokyo.error(0, 1), Some(0.0313));
        assert_eq!(
            CouplingGraph::builtin("manila").unwrap().error(3, 4),
            Some(0.0116)
        );
        assert_eq!(
            CouplingGraph::builtin("grid(2, 3)").unwrap().edge_count(),
            7
        );
        assert!(matches!(
            CouplingGraph::builtin("nope"),
            Err(ArchError::UnknownArch(_))
        ));
        assert!(matches!(
            CouplingGraph::builtin("linear(0)"),
            Err(ArchError::UnknownArch(_))
        ));
    }

    #[test]
    fn catalog_graphs_are_connected() {
        for name in CATALOG {
            let g = CouplingGraph::builtin(name).unwrap();
            assert!(g.is_connected(), "{name}");
            for (_, _, e) in g.edges() {
                assert!((0.0..1.0).contains(&e));
            }
        }
    }

    #[test]
    fn articulation_examples() {
        let quito = CouplingGraph::builtin("quito").unwrap();
        assert_eq!(quito.articulation_points().unwrap(), set(&[1, 3]));
        assert_eq!(
            CouplingGraph::linear(4, 0.01)
                .articulation_points()
                .unwrap(),
            set(&[1, 2])
        );
        assert!(CouplingGraph::cycle(4, 0.01)
            .articulation_points()
            .unwrap()
            .is_empty());
    }

    #[test]
    fn key_qubit_examples() {
        let quito = CouplingGraph::builtin("quito").unwrap();
        assert_eq!(quito.key_qubits().unwrap(), set(&[0, 2, 4]));
        assert_eq!(
            CouplingGraph::linear(2, 0.01).key_qubits().unwrap(),
            set(&[0, 1])
        );
        assert_eq!(
            CouplingGraph::star(5, 0.01).key_qubits().unwrap(),
            set(&[1, 2, 3, 4, 5])
        );
    }

    #[test]
    fn hamiltonian_examples() {
        assert_eq!(
            CouplingGraph::linear(5, 0.01).hamiltonian_path().unwrap(),
            Some(vec![0, 1, 2, 3, 4])
        );
        assert_eq!(
            CouplingGraph::builtin("quito")
                .unwrap()
                .hamiltonian_path()
                .unwrap(),
            None
        );
        assert_eq!(
            CouplingGraph::builtin("guadalupe")
                .unwrap()
                .hamiltonian_path()
                .unwrap(),
            None
        );
        let tokyo = CouplingGraph::builtin("tokyo").unwrap();
        let path = tokyo.hamiltonian_path().unwrap().expect("tokyo has one");
        assert_eq!(path.len(), 20);
        assert!(path.windows(2).all(|w| tokyo.has_edge(w[0], w[1])));
        assert!(matches!(
            CouplingGraph::linear(33, 0.01).hamiltonian_path(),
            Err(ArchError::TooLarge { .. })
        ));
    }

    #[test]
    fn remove_vertex_examples() {
        let lin = CouplingGraph::linear(3, 0.01);
        let g = lin.remove_vertex(0).unwrap();
        assert_eq!(g.vertices().collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(g.edges(), vec![(1, 2, 0.01)]);
        assert_eq!(lin.vertex_count(), 3);

        let quito = CouplingGraph::builtin("quito").unwrap();
        let split = quito.remove_vertex(1).unwrap();
        assert_eq!(split.components(), vec![set(&[0]), set(&[2]), set(&[3, 4])]);
        assert!(quito.remove_vertex(4).unwrap().is_connected());
        assert_eq!(split.remove_vertex(1), Err(ArchError::AbsentVertex(1)));
    }

    #[test]
    fn induced_subgraph_keeps_ids() {
        let quito = CouplingGraph::builtin("quito").unwrap();
        let sub = quito.induced_subgraph([1, 3, 4]);
        assert_eq!(sub.edges(), vec![(1, 3, 7.440e-3), (3, 4, 8.791e-3)]);
        assert!(!sub.contains(0));
    }

    #[test]
    fn one_qubit_defaults() {
        assert_eq!(
            CouplingGraph::builtin("quito")
                .unwrap()
                .default_one_qubit_error(),
            0.0017
        );
        assert_eq!(
            CouplingGraph::builtin("linear(4)")
                .unwrap()
                .default_one_qubit_error(),
            0.0
        );
    }
}

//! Initial placement of logical qubits onto physical qubits.
//!
//! Placement removes qubits from the device one at a time, always choosing a
//! qubit that is not a cut point of what remains, so the unplaced part of the
//! device stays connected throughout synthesis. A tabu search then perturbs
//! the seed qubit and keeps the placements that score best under
//! [`objective`].

use std::collections::{BTreeSet, HashMap, VecDeque};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arch::{ArchError, CouplingGraph, HAMILTONIAN_LIMIT};
use crate::rng::{stream_id, substream};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MappingError {
    #[error(transparent)]
    Arch(#[from] ArchError),
    #[error("need at least one logical qubit")]
    NoQubits,
    #[error("{n} logical qubits do not fit on {available} physical qubits")]
    TooManyQubits { n: usize, available: usize },
    #[error("key-qubit list is empty")]
    EmptyKeyList,
    #[error("physical qubit {0} is a cut point, not a key qubit")]
    NotKeyQubit(usize),
    #[error("invalid mapping: {0}")]
    Invalid(String),
    #[error("tabu table length must be at least 1")]
    ZeroTabuLength,
    #[error("connectivity factor needs two distinct vertices, got {0} twice")]
    SameVertex(usize),
}

/// `assign[m]` is the physical qubit hosting logical qubit `m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mapping {
    assign: Vec<usize>,
}

impl Mapping {
    pub fn new(assign: Vec<usize>) -> Result<Self, MappingError> {
        let mut seen = BTreeSet::new();
        for &p in &assign {
            if !seen.insert(p) {
                return Err(MappingError::Invalid(format!(
                    "physical qubit {p} assigned twice"
                )));
            }
        }
        Ok(Self { assign })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            assign: (0..n).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.assign.len()
    }

    pub fn assign(&self) -> &[usize] {
        &self.assign
    }

    pub fn physical(&self, logical: usize) -> usize {
        self.assign[logical]
    }

    /// Physical-to-logical table over `num_physical` ids.
    pub fn inverse(&self, num_physical: usize) -> Vec<Option<usize>> {
        let mut inv = vec![None; num_physical];
        for (m, &p) in self.assign.iter().enumerate() {
            if p < num_physical {
                inv[p] = Some(m);
            }
        }
        inv
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TabuConfig {
    pub tabu_len: usize,
    pub iterations: usize,
    pub seed: u64,
}

impl Default for TabuConfig {
    fn default() -> Self {
        Self {
            tabu_len: 20,
            iterations: 50,
            seed: 0,
        }
    }
}

/// Checks that `mapping` is injective, lives on `g`, and that removing
/// `assign[0], assign[1], ...` in order never disconnects the subgraph
/// induced by the assigned qubits not yet removed.
pub fn validate_mapping(g: &CouplingGraph, mapping: &Mapping) -> Result<(), MappingError> {
    let assign = mapping.assign();
    Mapping::new(assign.to_vec())?;
    if let Some(&p) = assign.iter().find(|&&p| !g.contains(p)) {
        return Err(MappingError::Invalid(format!(
            "physical qubit {p} is not in the coupling graph"
        )));
    }
    for k in 0..assign.len() {
        let rest = g.induced_subgraph(assign[k..].iter().copied());
        if !rest.is_connected() {
            return Err(MappingError::Invalid(format!(
                "qubits {:?} are disconnected after removing {:?}",
                &assign[k..],
                &assign[..k]
            )));
        }
    }
    Ok(())
}

/// Memo for Hamiltonian-path queries keyed by the residual vertex set.
pub type PathCache = HashMap<Vec<usize>, Option<Vec<usize>>>;

fn check_inputs(g: &CouplingGraph, n: usize) -> Result<(), MappingError> {
    if n == 0 {
        return Err(MappingError::NoQubits);
    }
    let available = g.vertex_count();
    if n > available {
        return Err(MappingError::TooManyQubits { n, available });
    }
    g.ensure_connected()?;
    Ok(())
}

/// Key-qubit priority initial mapping.
///
/// Logical qubit 0 goes to `ikey_list[0]`; each later logical qubit goes to a
/// uniformly chosen non-cut vertex of the residual graph. As soon as the
/// residual graph has a Hamiltonian path it is used for all remaining
/// logical qubits.
///
/// When `n` is smaller than the device, placement runs on a connected
/// `n`-vertex region grown from `ikey_list[0]` (see [`placement_region`]).
pub fn kqpim<R: Rng>(
    g: &CouplingGraph,
    n: usize,
    ikey_list: &[usize],
    rng: &mut R,
) -> Result<Mapping, MappingError> {
    kqpim_cached(g, n, ikey_list, rng, &mut PathCache::new())
}

pub fn kqpim_cached<R: Rng>(
    g: &CouplingGraph,
    n: usize,
    ikey_list: &[usize],
    rng: &mut R,
    cache: &mut PathCache,
) -> Result<Mapping, MappingError> {
    check_inputs(g, n)?;
    let &start = ikey_list.first().ok_or(MappingError::EmptyKeyList)?;
    let keys = g.key_qubits()?;
    if let Some(&bad) = ikey_list.iter().find(|v| !keys.contains(v)) {
        return Err(MappingError::NotKeyQubit(bad));
    }

    let mut residual = if n < g.vertex_count() {
        g.induced_subgraph(placement_region(g, start, n))
    } else {
        g.clone()
    };
    let mut assign = Vec::with_capacity(n);
    while assign.len() < n {
        if let Some(path) = cached_path(&residual, cache) {
            assign.extend(path);
            break;
        }
        let pick = if assign.is_empty() {
            start
        } else {
            let free: Vec<usize> = residual.key_qubits()?.into_iter().collect();
            assert!(
                !free.is_empty(),
                "connected residual graph has no key qubit"
            );
            free[rng.gen_range(0..free.len())]
        };
        assign.push(pick);
        residual.remove_vertex_mut(pick)?;
    }
    debug_assert_eq!(assign.len(), n);
    Mapping::new(assign)
}

fn cached_path(residual: &CouplingGraph, cache: &mut PathCache) -> Option<Vec<usize>> {
    if residual.vertex_count() > HAMILTONIAN_LIMIT {
        return None;
    }
    let key: Vec<usize> = residual.vertices().collect();
    cache
        .entry(key)
        .or_insert_with(|| residual.hamiltonian_path().expect("size checked"))
        .clone()
}

/// A connected `n`-vertex set containing `start` in which `start` is not a
/// cut point: `start` plus a region grown inside `g - start` from the
/// lowest-error neighbor of `start`, always absorbing the lowest-error
/// frontier edge (ties by smaller vertex id).
pub fn placement_region(g: &CouplingGraph, start: usize, n: usize) -> BTreeSet<usize> {
    let mut region = BTreeSet::from([start]);
    if n <= 1 {
        return region;
    }
    let seed = g
        .weighted_neighbors(start)
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
        .map(|&(v, _)| v)
        .expect("start has a neighbor in a connected graph with n >= 2");
    region.insert(seed);
    while region.len() < n {
        let next = region
            .iter()
            .filter(|&&u| u != start)
            .flat_map(|&u| g.weighted_neighbors(u).iter().copied())
            .filter(|(v, _)| !region.contains(v))
            .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
            .map(|(v, _)| v)
            .expect("g - start is connected because start is a key qubit");
        region.insert(next);
    }
    region
}

/// Shortest-path counts from every vertex of `g` (by BFS).
struct Geodesics {
    index: Vec<Option<usize>>,
    dist: Vec<Vec<usize>>,
    sigma: Vec<Vec<f64>>,
    through: Vec<f64>,
}

impl Geodesics {
    fn new(g: &CouplingGraph) -> Self {
        let verts: Vec<usize> = g.vertices().collect();
        let k = verts.len();
        let mut index = vec![None; g.num_qubits()];
        for (i, &v) in verts.iter().enumerate() {
            index[v] = Some(i);
        }
        let mut dist = vec![vec![usize::MAX; k]; k];
        let mut sigma = vec![vec![0.0; k]; k];
        for s in 0..k {
            dist[s][s] = 0;
            sigma[s][s] = 1.0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for w in g.neighbors(verts[u]) {
                    let w = index[w].expect("neighbor is present");
                    if dist[s][w] == usize::MAX {
                        dist[s][w] = dist[s][u] + 1;
                        queue.push_back(w);
                    }
                    if dist[s][w] == dist[s][u] + 1 {
                        sigma[s][w] += sigma[s][u];
                    }
                }
            }
        }
        let mut geo = Self {
            index,
            dist,
            sigma,
            through: vec![0.0; k],
        };
        for v in 0..k {
            let mut total = 0.0;
            for s in 0..k {
                for t in s + 1..k {
                    if s != v && t != v {
                        total += geo.pair_through(s, t, v);
                    }
                }
            }
            geo.through[v] = total;
        }
        geo
    }

    /// Number of shortest `s`–`t` paths through `v` (dense indices).
    fn pair_through(&self, s: usize, t: usize, v: usize) -> f64 {
        let (dsv, dvt, dst) = (self.dist[s][v], self.dist[v][t], self.dist[s][t]);
        if dsv == usize::MAX || dvt == usize::MAX || dsv + dvt != dst {
            0.0
        } else {
            self.sigma[s][v] * self.sigma[v][t]
        }
    }

    fn factor(&self, g: &CouplingGraph, i: usize, j: usize) -> f64 {
        if g.has_edge(i, j) {
            return 1.0;
        }
        let (a, b) = (self.index[i].unwrap(), self.index[j].unwrap());
        if self.dist[a][b] == usize::MAX {
            return 0.0;
        }
        let mut sum = 0.0;
        for v in 0..self.through.len() {
            if v != a && v != b {
                let c = self.pair_through(a, b, v);
                if c > 0.0 {
                    sum += c / self.through[v];
                }
            }
        }
        (sum / self.sigma[a][b]).clamp(0.0, 1.0)
    }
}

/// Betweenness-based connectivity between `i` and `j` in `g_sub`: 1 for
/// adjacent vertices, 0 for disconnected ones, otherwise the share of
/// shortest-path traffic through intermediate vertices attributable to the
/// pair, normalised by the number of shortest `i`–`j` paths.
pub fn connectivity_factor(g_sub: &CouplingGraph, i: usize, j: usize) -> Result<f64, MappingError> {
    if i == j {
        return Err(MappingError::SameVertex(i));
    }
    for v in [i, j] {
        if !g_sub.contains(v) {
            return Err(ArchError::AbsentVertex(v).into());
        }
    }
    Ok(Geodesics::new(g_sub).factor(g_sub, i, j))
}

fn connectivity_product(g: &CouplingGraph, vertices: &[usize]) -> f64 {
    let sub = g.induced_subgraph(vertices.iter().copied());
    let geo = Geodesics::new(&sub);
    let mut product = 1.0;
    for (a, &i) in vertices.iter().enumerate() {
        for &j in &vertices[a + 1..] {
            product *= geo.factor(&sub, i, j);
        }
    }
    product
}

fn error_penalty(g: &CouplingGraph, mapping: &Mapping) -> f64 {
    mapping
        .assign()
        .iter()
        .enumerate()
        .map(|(m, &p)| (m + 1) as f64 * g.mean_incident_error(p))
        .sum()
}

/// Placement score (higher is better): product of pairwise connectivity
/// factors on the mapped subgraph minus the position-weighted mean error of
/// each mapped qubit's couplers in the full graph.
pub fn objective(g: &CouplingGraph, mapping: &Mapping) -> Result<f64, MappingError> {
    Objective::new(g).eval(mapping)
}

/// [`objective`] with the connectivity product memoised per vertex set
/// (the product does not depend on the order of assignment).
pub struct Objective<'a> {
    g: &'a CouplingGraph,
    products: HashMap<Vec<usize>, f64>,
}

impl<'a> Objective<'a> {
    pub fn new(g: &'a CouplingGraph) -> Self {
        Self {
            g,
            products: HashMap::new(),
        }
    }

    pub fn eval(&mut self, mapping: &Mapping) -> Result<f64, MappingError> {
        if let Some(&p) = mapping.assign().iter().find(|&&p| !self.g.contains(p)) {
            return Err(MappingError::Invalid(format!(
                "physical qubit {p} is not in the coupling graph"
            )));
        }
        let mut key = mapping.assign().to_vec();
        key.sort_unstable();
        let g = self.g;
        let product = *self
            .products
            .entry(key)
            .or_insert_with_key(|k| connectivity_product(g, k));
        Ok(product - error_penalty(g, mapping))
    }
}

/// Everything a tabu run produced, for inspection and testing.
#[derive(Debug, Clone)]
pub struct TabuOutcome {
    pub initial: Mapping,
    pub initial_score: f64,
    pub best: Mapping,
    pub best_score: f64,
    /// Final table, in admission order.
    pub table: Vec<(Mapping, f64)>,
}

/// Tabu-search refinement of [`kqpim`].
pub fn kqpimo(g: &CouplingGraph, n: usize, config: &TabuConfig) -> Result<Mapping, MappingError> {
    Ok(kqpimo_detailed(g, n, config)?.best)
}

/// Candidate `k` of iteration `it` draws from its own substream, so it can be
/// regenerated without replaying the others.
pub fn kqpimo_detailed(
    g: &CouplingGraph,
    n: usize,
    config: &TabuConfig,
) -> Result<TabuOutcome, MappingError> {
    if config.tabu_len == 0 {
        return Err(MappingError::ZeroTabuLength);
    }
    check_inputs(g, n)?;
    let ikey: Vec<usize> = g.key_qubits()?.into_iter().collect();
    let mut paths = PathCache::new();
    let mut score = Objective::new(g);

    let initial = kqpim_cached(g, n, &ikey, &mut substream(config.seed, 0), &mut paths)?;
    let initial_score = score.eval(&initial)?;
    let mut table = vec![(initial.clone(), initial_score)];

    for it in 0..config.iterations {
        for k in 0..config.tabu_len {
            let mut rng = substream(config.seed, stream_id(it as u64 + 1, k as u64));
            let mut rotated = ikey.clone();
            let rot = rng.gen_range(0..rotated.len());
            rotated.rotate_left(rot);
            let cand = kqpim_cached(g, n, &rotated, &mut rng, &mut paths)?;
            if table.iter().any(|(m, _)| *m == cand) {
                continue;
            }
            let f = score.eval(&cand)?;
            let mean = table.iter().map(|(_, s)| s).sum::<f64>() / table.len() as f64;
            if f >= mean {
                table.push((cand, f));
            }
            while table.len() > config.tabu_len {
                let worst = (0..table.len())
                    .rev()
                    .min_by(|&a, &b| table[a].1.total_cmp(&table[b].1))
                    .expect("table is nonempty");
                table.remove(worst);
            }
        }
    }

    let best = (0..table.len())
        .rev()
        .max_by(|&a, &b| table[a].1.total_cmp(&table[b].1))
        .expect("table is nonempty");
    Ok(TabuOutcome {
        initial,
        initial_score,
        best: table[best].0.clone(),
        best_score: table[best].1,
        table,
    })
}

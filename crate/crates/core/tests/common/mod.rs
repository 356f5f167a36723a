//! Brute-force oracles and random instance generators shared by the
//! integration tests. Everything here is deliberately naive.

#![allow(dead_code)]

use std::collections::BTreeSet;

use cnot_synth::arch::CouplingGraph;
use cnot_synth::mapping::Mapping;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random connected graph on `n` vertices: a random tree plus each other
/// pair with probability `extra`, edge errors uniform in `[0, max_err)`.
pub fn random_connected(n: usize, extra: f64, max_err: f64, seed: u64) -> CouplingGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(&mut rng);
    let mut pairs = BTreeSet::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        pairs.insert((labels[u].min(labels[v]), labels[u].max(labels[v])));
    }
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(extra) {
                pairs.insert((u, v));
            }
        }
    }
    let edges: Vec<(usize, usize, f64)> = pairs
        .into_iter()
        .map(|(u, v)| {
            (
                u,
                v,
                if max_err > 0.0 {
                    rng.gen_range(0.0..max_err)
                } else {
                    0.0
                },
            )
        })
        .collect();
    CouplingGraph::from_edges(n, &edges).unwrap()
}

/// Cut vertices by deleting each vertex and testing connectivity.
pub fn brute_cut_points(g: &CouplingGraph) -> BTreeSet<usize> {
    g.vertices()
        .filter(|&v| !g.remove_vertex(v).unwrap().is_connected())
        .collect()
}

/// Hamiltonian-path existence by dynamic programming over vertex subsets.
pub fn brute_has_hamiltonian(g: &CouplingGraph) -> bool {
    let verts: Vec<usize> = g.vertices().collect();
    let k = verts.len();
    if k <= 1 {
        return true;
    }
    let full = (1usize << k) - 1;
    let mut reach = vec![vec![false; k]; 1 << k];
    for v in 0..k {
        reach[1 << v][v] = true;
    }
    for mask in 1..=full {
        for v in 0..k {
            if !reach[mask][v] {
                continue;
            }
            for w in 0..k {
                if mask >> w & 1 == 0 && g.has_edge(verts[v], verts[w]) {
                    reach[mask | 1 << w][w] = true;
                }
            }
        }
    }
    reach[full].iter().any(|&b| b)
}

/// Every simple `s`-`t` path.
pub fn simple_paths(g: &CouplingGraph, s: usize, t: usize) -> Vec<Vec<usize>> {
    fn go(g: &CouplingGraph, t: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let u = *path.last().unwrap();
        if u == t {
            out.push(path.clone());
            return;
        }
        let next: Vec<usize> = g.neighbors(u).collect();
        for w in next {
            if !path.contains(&w) {
                path.push(w);
                go(g, t, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(g, t, &mut vec![s], &mut out);
    out
}

pub fn fidelity(g: &CouplingGraph, path: &[usize]) -> f64 {
    path.windows(2)
        .map(|w| 1.0 - g.error(w[0], w[1]).unwrap())
        .product()
}

/// All shortest (fewest-hop) `s`-`t` paths, listed explicitly.
pub fn shortest_paths(g: &CouplingGraph, s: usize, t: usize) -> Vec<Vec<usize>> {
    let all = simple_paths(g, s, t);
    let Some(best) = all.iter().map(Vec::len).min() else {
        return Vec::new();
    };
    all.into_iter().filter(|p| p.len() == best).collect()
}

/// Connectivity factor from explicit shortest-path enumeration.
pub fn brute_connectivity_factor(g: &CouplingGraph, i: usize, j: usize) -> f64 {
    if g.has_edge(i, j) {
        return 1.0;
    }
    let pij = shortest_paths(g, i, j);
    if pij.is_empty() {
        return 0.0;
    }
    let verts: Vec<usize> = g.vertices().collect();
    let mut sum = 0.0;
    for &v in &verts {
        if v == i || v == j {
            continue;
        }
        let through_ij = pij
            .iter()
            .filter(|p| p[1..p.len() - 1].contains(&v))
            .count();
        if through_ij == 0 {
            continue;
        }
        let mut through_all = 0usize;
        for (a, &s) in verts.iter().enumerate() {
            for &t in &verts[a + 1..] {
                if s == v || t == v {
                    continue;
                }
                through_all += shortest_paths(g, s, t)
                    .iter()
                    .filter(|p| p[1..p.len() - 1].contains(&v))
                    .count();
            }
        }
        sum += through_ij as f64 / through_all as f64;
    }
    (sum / pij.len() as f64).clamp(0.0, 1.0)
}

/// Placement score evaluated term by term from its definition.
pub fn brute_objective(g: &CouplingGraph, m: &Mapping) -> f64 {
    let sub = g.induced_subgraph(m.assign().iter().copied());
    let a = m.assign();
    let mut product = 1.0;
    for x in 0..a.len() {
        for y in x + 1..a.len() {
            product *= brute_connectivity_factor(&sub, a[x], a[y]);
        }
    }
    let mut penalty = 0.0;
    for (k, &p) in a.iter().enumerate() {
        let errs: Vec<f64> = g.neighbors(p).map(|w| g.error(p, w).unwrap()).collect();
        if !errs.is_empty() {
            penalty += (k + 1) as f64 * errs.iter().sum::<f64>() / errs.len() as f64;
        }
    }
    product - penalty
}

/// Replays the removal order and reports whether the remaining assigned
/// qubits stay connected at every step.
pub fn replay_ok(g: &CouplingGraph, m: &Mapping) -> bool {
    let a = m.assign();
    (0..a.len()).all(|k| {
        let rest: BTreeSet<usize> = a[k..].iter().copied().collect();
        let mut seen = BTreeSet::from([a[k]]);
        let mut stack = vec![a[k]];
        while let Some(u) = stack.pop() {
            for w in g.neighbors(u) {
                if rest.contains(&w) && seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen == rest
    })
}

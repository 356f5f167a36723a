//! Maximum-fidelity paths and minimum-noise Steiner trees.
//!
//! An edge with error `e` costs `-ln(1 - e)`, so the cheapest path is the one
//! whose product of `(1 - e)` is largest.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::arch::{ArchError, CouplingGraph};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SteinerError {
    #[error(transparent)]
    Arch(#[from] ArchError),
    #[error("({0},{1}) is not an edge of the coupling graph")]
    NotAdjacent(usize, usize),
    #[error("vertex {to} is unreachable from {from}")]
    Unreachable { from: usize, to: usize },
    #[error("terminal set is empty")]
    NoTerminals,
}

pub fn edge_weight(error: f64) -> f64 {
    -(-error).ln_1p()
}

/// Product of `(1 - e)` over consecutive pairs; 1 for paths of length < 2.
pub fn path_fidelity(g: &CouplingGraph, path: &[usize]) -> Result<f64, SteinerError> {
    let mut f = 1.0;
    for w in path.windows(2) {
        let e = g
            .error(w[0], w[1])
            .ok_or(SteinerError::NotAdjacent(w[0], w[1]))?;
        f *= 1.0 - e;
    }
    Ok(f)
}

#[derive(Debug, Clone)]
struct Label {
    cost: f64,
    hops: usize,
    seq: Vec<usize>,
}

impl Label {
    fn cmp(&self, other: &Self) -> Ordering {
        self.cost
            .total_cmp(&other.cost)
            .then(self.hops.cmp(&other.hops))
            .then_with(|| self.seq.cmp(&other.seq))
    }
}

/// Dense Dijkstra from a set of sources; returns the best label per vertex.
/// Labels compare by cost, then hop count, then vertex sequence.
fn dijkstra(g: &CouplingGraph, sources: &[usize]) -> Vec<Option<Label>> {
    let n = g.num_qubits();
    let mut best: Vec<Option<Label>> = vec![None; n];
    let mut done = vec![false; n];
    for &s in sources {
        best[s] = Some(Label {
            cost: 0.0,
            hops: 0,
            seq: vec![s],
        });
    }
    loop {
        let mut pick: Option<usize> = None;
        for v in 0..n {
            if done[v] {
                continue;
            }
            if let Some(l) = &best[v] {
                let better = match pick {
                    None => true,
                    Some(p) => l.cmp(best[p].as_ref().unwrap()) == Ordering::Less,
                };
                if better {
                    pick = Some(v);
                }
            }
        }
        let Some(u) = pick else { break };
        done[u] = true;
        let base = best[u].clone().unwrap();
        for &(w, e) in g.weighted_neighbors(u) {
            if done[w] {
                continue;
            }
            let mut seq = base.seq.clone();
            seq.push(w);
            let cand = Label {
                cost: base.cost + edge_weight(e),
                hops: base.hops + 1,
                seq,
            };
            let replace = match &best[w] {
                None => true,
                Some(cur) => cand.cmp(cur) == Ordering::Less,
            };
            if replace {
                best[w] = Some(cand);
            }
        }
    }
    best
}

fn check_vertex(g: &CouplingGraph, v: usize) -> Result<(), SteinerError> {
    if g.contains(v) {
        Ok(())
    } else {
        Err(ArchError::AbsentVertex(v).into())
    }
}

/// Highest-fidelity `s`→`t` path. Ties go to fewer hops, then to the
/// lexicographically smallest vertex sequence.
pub fn best_path(g: &CouplingGraph, s: usize, t: usize) -> Result<Vec<usize>, SteinerError> {
    check_vertex(g, s)?;
    check_vertex(g, t)?;
    dijkstra(g, &[s])[t]
        .take()
        .map(|l| l.seq)
        .ok_or(SteinerError::Unreachable { from: s, to: t })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SteinerTree {
    root: usize,
    parent: BTreeMap<usize, usize>,
    terminals: BTreeSet<usize>,
    children: BTreeMap<usize, Vec<usize>>,
}

impl SteinerTree {
    pub fn root(&self) -> usize {
        self.root
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parent.get(&v).copied()
    }

    pub fn terminals(&self) -> &BTreeSet<usize> {
        &self.terminals
    }

    /// Children of `v`, ascending.
    pub fn children(&self, v: usize) -> &[usize] {
        self.children.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn vertices(&self) -> BTreeSet<usize> {
        let mut vs: BTreeSet<usize> = self.parent.keys().copied().collect();
        vs.insert(self.root);
        vs
    }

    pub fn contains(&self, v: usize) -> bool {
        v == self.root || self.parent.contains_key(&v)
    }

    /// Tree vertices that are neither terminals nor the root.
    pub fn steiner_points(&self) -> BTreeSet<usize> {
        self.parent
            .keys()
            .copied()
            .filter(|v| !self.terminals.contains(v))
            .collect()
    }

    /// Root first, children in ascending id order.
    pub fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.parent.len() + 1);
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            out.push(v);
            stack.extend(self.children(v).iter().rev());
        }
        out
    }

    /// Every vertex after all of its descendants; children in ascending id
    /// order.
    pub fn postorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.parent.len() + 1);
        let mut stack = vec![(self.root, false)];
        while let Some((v, expanded)) = stack.pop() {
            if expanded {
                out.push(v);
            } else {
                stack.push((v, true));
                stack.extend(self.children(v).iter().rev().map(|&c| (c, false)));
            }
        }
        out
    }

    /// Checks the tree against `g`: edges exist, parent links reach the root
    /// without cycles, terminals are covered, and every leaf is a terminal.
    pub fn validate(&self, g: &CouplingGraph) -> Result<(), String> {
        for (&c, &p) in &self.parent {
            if !g.has_edge(c, p) {
                return Err(format!("tree edge ({c},{p}) is not a graph edge"));
            }
        }
        let size = self.parent.len() + 1;
        for &v in self.parent.keys() {
            let mut cur = v;
            let mut steps = 0;
            while cur != self.root {
                cur = *self
                    .parent
                    .get(&cur)
                    .ok_or_else(|| format!("vertex {cur} has no parent"))?;
                steps += 1;
                if steps > size {
                    return Err(format!("cycle through {v}"));
                }
            }
        }
        if let Some(t) = self.terminals.iter().find(|&&t| !self.contains(t)) {
            return Err(format!("terminal {t} is not in the tree"));
        }
        for &v in self.parent.keys() {
            if self.children(v).is_empty() && !self.terminals.contains(&v) {
                return Err(format!("leaf {v} is not a terminal"));
            }
        }
        Ok(())
    }
}

/// Greedy minimum-noise Steiner tree: starting from `{root}`, each terminal
/// not yet covered (ascending id) is joined by the cheapest path from any
/// tree vertex.
pub fn mnst(
    g: &CouplingGraph,
    root: usize,
    terminals: &BTreeSet<usize>,
) -> Result<SteinerTree, SteinerError> {
    if terminals.is_empty() {
        return Err(SteinerError::NoTerminals);
    }
    check_vertex(g, root)?;
    for &t in terminals {
        check_vertex(g, t)?;
    }
    let mut in_tree = vec![false; g.num_qubits()];
    in_tree[root] = true;
    let mut tree_list = vec![root];
    let mut parent = BTreeMap::new();
    for &t in terminals {
        if in_tree[t] {
            continue;
        }
        let path = dijkstra(g, &tree_list)[t]
            .take()
            .ok_or(SteinerError::Unreachable { from: root, to: t })?
            .seq;
        let anchor = path
            .iter()
            .rposition(|&v| in_tree[v])
            .expect("path starts in the tree");
        for w in path[anchor..].windows(2) {
            parent.insert(w[1], w[0]);
            in_tree[w[1]] = true;
            tree_list.push(w[1]);
        }
    }
    let mut children: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (&c, &p) in &parent {
        children.entry(p).or_default().push(c);
    }
    for list in children.values_mut() {
        list.sort_unstable();
    }
    Ok(SteinerTree {
        root,
        parent,
        terminals: terminals.clone(),
        children,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn path_fidelity_examples() {
        let q = CouplingGraph::builtin("quito").unwrap();
        assert_eq!(path_fidelity(&q, &[3]).unwrap(), 1.0);
        assert_eq!(path_fidelity(&q, &[]).unwrap(), 1.0);
        assert!((path_fidelity(&q, &[0, 1]).unwrap() - 0.98369).abs() < 1e-12);
        assert_eq!(
            path_fidelity(&q, &[0, 2]).unwrap_err(),
            SteinerError::NotAdjacent(0, 2)
        );
    }

    #[test]
    fn guadalupe_paths() {
        let g = CouplingGraph::builtin("guadalupe").unwrap();
        let p1 = [7, 4, 1, 2, 3, 5, 8, 9];
        let p2 = [7, 10, 12, 13, 14, 11, 8, 9];
        assert!(path_fidelity(&g, &p2).unwrap() > path_fidelity(&g, &p1).unwrap());
        assert_eq!(best_path(&g, 7, 9).unwrap(), p2.to_vec());
    }

    #[test]
    fn best_path_trivial_cases() {
        let g = CouplingGraph::builtin("quito").unwrap();
        assert_eq!(best_path(&g, 2, 2).unwrap(), vec![2]);
        assert_eq!(best_path(&g, 0, 4).unwrap(), vec![0, 1, 3, 4]);
        let split = g.remove_vertex(1).unwrap();
        assert_eq!(
            best_path(&split, 0, 4).unwrap_err(),
            SteinerError::Unreachable { from: 0, to: 4 }
        );
    }

    #[test]
    fn best_path_tie_breaks() {
        // Two equal-cost routes 0-1-3 and 0-2-3: the smaller sequence wins.
        let g = CouplingGraph::cycle(4, 0.01);
        assert_eq!(best_path(&g, 0, 2).unwrap(), vec![0, 1, 2]);
        // Zero-error detour has equal cost but more hops.
        let z = CouplingGraph::from_edges(3, &[(0, 1, 0.0), (1, 2, 0.0), (0, 2, 0.0)]).unwrap();
        assert_eq!(best_path(&z, 0, 2).unwrap(), vec![0, 2]);
    }

    #[test]
    fn mnst_examples() {
        let q = CouplingGraph::builtin("quito").unwrap();
        let single = mnst(&q, 0, &set(&[0])).unwrap();
        assert_eq!(single.vertices(), set(&[0]));
        assert_eq!(single.preorder(), vec![0]);
        assert_eq!(single.postorder(), vec![0]);

        let t = mnst(&q, 0, &set(&[2, 4])).unwrap();
        assert_eq!(t.vertices(), set(&[0, 1, 2, 3, 4]));
        assert_eq!(t.steiner_points(), set(&[1, 3]));
        t.validate(&q).unwrap();

        let lin = CouplingGraph::linear(4, 0.01);
        let chain = mnst(&lin, 0, &set(&[3])).unwrap();
        assert_eq!(chain.preorder(), vec![0, 1, 2, 3]);
        assert_eq!(chain.postorder(), vec![3, 2, 1, 0]);
        assert_eq!(
            mnst(&lin, 0, &set(&[])).unwrap_err(),
            SteinerError::NoTerminals
        );
    }

    #[test]
    fn traversal_visits_children_ascending() {
        let star = CouplingGraph::star(3, 0.01);
        let t = mnst(&star, 0, &set(&[3, 1, 2])).unwrap();
        assert_eq!(t.preorder(), vec![0, 1, 2, 3]);
        assert_eq!(t.postorder(), vec![1, 2, 3, 0]);
        let chain = mnst(&CouplingGraph::linear(3, 0.01), 0, &set(&[2])).unwrap();
        assert_eq!(chain.preorder(), vec![0, 1, 2]);
        assert_eq!(chain.postorder(), vec![2, 1, 0]);
    }

    #[test]
    fn mnst_reuses_tree_vertices() {
        let g = CouplingGraph::builtin("guadalupe").unwrap();
        let t = mnst(&g, 7, &set(&[9, 11, 15])).unwrap();
        t.validate(&g).unwrap();
        assert!(t.contains(9) && t.contains(11) && t.contains(15));
    }
}

//! The Markov graph of a cyclic permutation.
//!
//! Vertices are the adjacent pairs `A_1..A_{n-1}`; there is an edge
//! `A_i -> A_j` exactly when `convf(A_i) ⊇ A_j`. The shortest closed walk
//! through `A_i` has the same length as the characteristic number `m_i`.

use std::collections::VecDeque;
use std::fmt::Write as _;

use serde::Serialize;

use crate::charseq::convf;
use crate::perm::{CyclicPerm, IndexInterval};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkovGraph {
    n: usize,
    /// `adjacency[i - 1]` lists the targets of `A_i`, ascending.
    adjacency: Vec<Vec<usize>>,
}

/// Length of the shortest closed walk through a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CycleLength {
    Steps(usize),
    Unreachable,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinCycle {
    pub length: CycleLength,
    /// Closed walk `v, .., v` (length + 1 vertices), lexicographically least
    /// among the shortest ones; empty when unreachable.
    pub witness: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleReport {
    /// `cycles[v - 1]` for vertex `A_v`.
    pub cycles: Vec<MinCycle>,
}

#[derive(Serialize)]
struct AdjacencyDump {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl MarkovGraph {
    pub fn build(f: &CyclicPerm) -> Self {
        let n = f.degree();
        let adjacency = (1..n)
            .map(|i| {
                let IndexInterval { lo, hi } = convf(f, IndexInterval::pair(i));
                (lo..hi).collect()
            })
            .collect();
        MarkovGraph { n, adjacency }
    }

    /// Builds a graph from explicit adjacency lists over vertices `1..=len`.
    ///
    /// Targets are sorted and deduplicated; out-of-range targets panic.
    pub fn from_adjacency(adjacency: Vec<Vec<usize>>) -> Self {
        let count = adjacency.len();
        let adjacency = adjacency
            .into_iter()
            .map(|mut targets| {
                targets.sort_unstable();
                targets.dedup();
                assert!(targets.iter().all(|&t| t >= 1 && t <= count));
                targets
            })
            .collect();
        MarkovGraph {
            n: count + 1,
            adjacency,
        }
    }

    /// Degree of the source permutation; the graph has `degree() - 1` vertices.
    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.adjacency[v - 1]
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.successors(from).binary_search(&to).is_ok()
    }

    /// `(source, target)` pairs in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, ts)| ts.iter().map(move |&t| (i + 1, t)))
    }

    /// Shortest closed walk through `v`, by breadth-first search towards `v`.
    pub fn min_cycle_from(&self, v: usize) -> MinCycle {
        let count = self.vertex_count();
        assert!(v >= 1 && v <= count, "vertex {v} out of range");

        // dist[u] = length of the shortest path u -> v, via BFS on reversed edges.
        let mut reverse = vec![Vec::new(); count];
        for (s, t) in self.edges() {
            reverse[t - 1].push(s);
        }
        let mut dist = vec![usize::MAX; count];
        dist[v - 1] = 0;
        let mut queue = VecDeque::from([v]);
        while let Some(u) = queue.pop_front() {
            for &p in &reverse[u - 1] {
                if dist[p - 1] == usize::MAX {
                    dist[p - 1] = dist[u - 1] + 1;
                    queue.push_back(p);
                }
            }
        }

        let Some(best) = self
            .successors(v)
            .iter()
            .map(|&s| dist[s - 1])
            .filter(|&d| d != usize::MAX)
            .min()
        else {
            return MinCycle {
                length: CycleLength::Unreachable,
                witness: Vec::new(),
            };
        };
        let length = best + 1;

        // Greedy smallest successor that stays on a shortest route.
        let mut witness = vec![v];
        let mut current = v;
        for remaining in (0..length).rev() {
            let next = *self
                .successors(current)
                .iter()
                .find(|&&s| dist[s - 1] == remaining)
                .expect("shortest route continues");
            witness.push(next);
            current = next;
        }
        MinCycle {
            length: CycleLength::Steps(length),
            witness,
        }
    }

    pub fn cycle_report(&self) -> CycleReport {
        CycleReport {
            cycles: (1..=self.vertex_count())
                .map(|v| self.min_cycle_from(v))
                .collect(),
        }
    }

    /// True when `walk` is a closed walk along edges of this graph.
    pub fn is_closed_walk(&self, walk: &[usize]) -> bool {
        walk.len() >= 2
            && walk.first() == walk.last()
            && walk
                .windows(2)
                .all(|w| w[0] >= 1 && w[0] <= self.vertex_count() && self.has_edge(w[0], w[1]))
    }

    /// Deterministic Graphviz text.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph markov {\n");
        for v in 1..=self.vertex_count() {
            let _ = writeln!(out, "  A{v};");
        }
        for (s, t) in self.edges() {
            let _ = writeln!(out, "  A{s} -> A{t};");
        }
        out.push_str("}\n");
        out
    }

    /// `{"n": .., "edges": [[i, j], ..]}` with edges ascending.
    pub fn to_json(&self) -> String {
        let dump = AdjacencyDump {
            n: self.n,
            edges: self.edges().map(|(s, t)| [s, t]).collect(),
        };
        serde_json::to_string(&dump).expect("plain data serializes")
    }
}

//! Positively weighted, fully labelled simple graphs.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::FiniteMetricSpace;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: BigRational,
}

impl Edge {
    /// Builds an edge with endpoints in canonical order `u < v`.
    pub fn new(a: usize, b: usize, weight: BigRational) -> Edge {
        let (u, v) = if a <= b { (a, b) } else { (b, a) };
        Edge { u, v, weight }
    }

    pub fn endpoints(&self) -> (usize, usize) {
        (self.u, self.v)
    }
}

/// Undirected graph over labelled vertices `0..n`. Edges are kept sorted by
/// `(u, v)` with `u < v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    labels: Vec<String>,
    edges: Vec<Edge>,
}

impl WeightedGraph {
    pub fn new(labels: Vec<String>, edges: Vec<Edge>) -> Result<WeightedGraph> {
        let n = labels.len();
        let mut seen = HashSet::new();
        let mut edges: Vec<Edge> = edges
            .into_iter()
            .map(|e| Edge::new(e.u, e.v, e.weight))
            .collect();
        for e in &edges {
            if e.v >= n {
                return Err(Error::IndexOutOfRange { index: e.v, n });
            }
            if e.u == e.v {
                return Err(Error::InvalidGraph(format!("loop at {}", labels[e.u])));
            }
            if !e.weight.is_positive() {
                return Err(Error::InvalidGraph(format!(
                    "edge {}-{} has non-positive weight {}",
                    labels[e.u], labels[e.v], e.weight
                )));
            }
            if !seen.insert((e.u, e.v)) {
                return Err(Error::InvalidGraph(format!(
                    "duplicate edge {}-{}",
                    labels[e.u], labels[e.v]
                )));
            }
        }
        edges.sort_by_key(|e| (e.u, e.v));
        Ok(WeightedGraph { labels, edges })
    }

    /// The complete graph K_M with `w(i,j) = d(i,j)`.
    pub fn complete(m: &FiniteMetricSpace) -> WeightedGraph {
        let n = m.n();
        let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                edges.push(Edge::new(i, j, m.distance(i, j).clone()));
            }
        }
        WeightedGraph {
            labels: m.labels().to_vec(),
            edges,
        }
    }

    pub(crate) fn from_sorted(labels: Vec<String>, edges: Vec<Edge>) -> WeightedGraph {
        debug_assert!(edges.windows(2).all(|w| (w[0].u, w[0].v) < (w[1].u, w[1].v)));
        WeightedGraph { labels, edges }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn total_weight(&self) -> BigRational {
        self.edges
            .iter()
            .fold(BigRational::zero(), |acc, e| acc + &e.weight)
    }

    pub fn endpoint_pairs(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(Edge::endpoints).collect()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n()];
        for e in &self.edges {
            deg[e.u] += 1;
            deg[e.v] += 1;
        }
        deg
    }

    pub fn adjacency(&self) -> Vec<Vec<(usize, &BigRational)>> {
        let mut adj = vec![Vec::new(); self.n()];
        for e in &self.edges {
            adj[e.u].push((e.v, &e.weight));
            adj[e.v].push((e.u, &e.weight));
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        let n = self.n();
        if n == 0 {
            return true;
        }
        let adj = self.adjacency();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &(v, _) in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == n
    }

    pub fn is_tree(&self) -> bool {
        self.edge_count() + 1 == self.n() && self.is_connected()
    }

    /// A spanning path: a tree with every degree at most two.
    pub fn is_path(&self) -> bool {
        self.is_tree() && self.degrees().iter().all(|&d| d <= 2)
    }

    /// Shortest-path distances from `source` (Dijkstra). `None` marks
    /// unreachable vertices.
    pub fn distances_from(&self, source: usize) -> Vec<Option<BigRational>> {
        let adj = self.adjacency();
        let mut dist: Vec<Option<BigRational>> = vec![None; self.n()];
        let mut done = vec![false; self.n()];
        let mut heap = BinaryHeap::new();
        dist[source] = Some(BigRational::zero());
        heap.push(Reverse((BigRational::zero(), source)));
        while let Some(Reverse((d, u))) = heap.pop() {
            if done[u] {
                continue;
            }
            done[u] = true;
            for &(v, w) in &adj[u] {
                let candidate = &d + w;
                if dist[v].as_ref().is_none_or(|cur| candidate < *cur) {
                    dist[v] = Some(candidate.clone());
                    heap.push(Reverse((candidate, v)));
                }
            }
        }
        dist
    }
}

/// Serializable edge with labels and an exact `p/q` weight.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelledEdge {
    pub u: String,
    pub v: String,
    pub weight: String,
}

impl WeightedGraph {
    pub fn labelled_edges(&self) -> Vec<LabelledEdge> {
        self.edges
            .iter()
            .map(|e| LabelledEdge {
                u: self.labels[e.u].clone(),
                v: self.labels[e.v].clone(),
                weight: crate::rational::fraction_string(&e.weight),
            })
            .collect()
    }
}

//! Spanning tree and spanning path metric spaces.
//!
//! A space is a spanning tree metric space when its basic geodesic graph
//! G_M is a tree. G_M is always connected, so this is an edge count. When
//! all distances are distinct the same verdict must come out of the
//! fourth-point condition; `recognize` computes both and records whether
//! they agree.

use serde::{Deserialize, Serialize};

use crate::conditions::{fourth_point_condition, three_point_condition, ConditionResult};
use crate::error::{Error, Result};
use crate::geodesic::{basic_geodesic_graph, verify_realisation};
use crate::graph::{Edge, WeightedGraph};
use crate::metric::{satisfies_tie_breaking, FiniteMetricSpace};

/// Disjoint sets with path halving and union by size.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the sets of `a` and `b`; false if they were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimumSpanningTree {
    pub tree: WeightedGraph,
    /// All edge weights of the input were pairwise distinct, so no other
    /// spanning tree has the same weight.
    pub unique_certified: bool,
}

/// Kruskal's algorithm, scanning edges in `(weight, u, v)` order.
pub fn mst(graph: &WeightedGraph) -> Result<MinimumSpanningTree> {
    let mut order: Vec<&Edge> = graph.edges().iter().collect();
    order.sort_by(|a, b| a.weight.cmp(&b.weight).then((a.u, a.v).cmp(&(b.u, b.v))));
    let unique_certified = order.windows(2).all(|w| w[0].weight != w[1].weight);

    let n = graph.n();
    let mut sets = UnionFind::new(n);
    let mut chosen = Vec::with_capacity(n.saturating_sub(1));
    for e in order {
        if sets.union(e.u, e.v) {
            chosen.push(e.clone());
            if chosen.len() + 1 == n {
                break;
            }
        }
    }
    if chosen.len() + 1 < n {
        let root = sets.find(0);
        let stray = (1..n).find(|&v| sets.find(v) != root).expect("some vertex is unreached");
        return Err(Error::Disconnected {
            from: graph.labels()[0].clone(),
            to: graph.labels()[stray].clone(),
        });
    }
    chosen.sort_by_key(|e| (e.u, e.v));
    Ok(MinimumSpanningTree {
        tree: WeightedGraph::from_sorted(graph.labels().to_vec(), chosen),
        unique_certified,
    })
}

/// Internal consistency checks run alongside the main decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossCheck {
    pub fourth_point: bool,
    pub three_point: bool,
    /// Under tie-breaking: the G_M verdict equals the fourth-point verdict.
    /// Vacuously true when tie-breaking fails.
    pub tree_matches_fourth_point: bool,
    /// For spanning tree spaces: G_M equals Kruskal's tree edge for edge.
    /// Vacuously true otherwise.
    pub mst_identical: bool,
    /// For spanning tree spaces: G_M reproduces every distance.
    /// Vacuously true otherwise.
    pub realises: bool,
}

impl CrossCheck {
    pub fn consistent(&self) -> bool {
        self.tree_matches_fourth_point && self.mst_identical && self.realises
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecognitionVerdict {
    pub is_spanning_tree_metric: bool,
    pub is_spanning_path_metric: bool,
    /// G_M when it is a tree.
    pub realizing_graph: Option<WeightedGraph>,
    pub basic_graph: WeightedGraph,
    pub tie_breaking: bool,
    pub fourth_point: ConditionResult,
    pub three_point: ConditionResult,
    pub cross_check: CrossCheck,
}

pub fn recognize(m: &FiniteMetricSpace) -> RecognitionVerdict {
    recognize_with(m, fourth_point_condition(m), three_point_condition(m))
}

/// [`recognize`] with condition results computed by the caller, so reports
/// can time each scan separately.
pub fn recognize_with(
    m: &FiniteMetricSpace,
    fourth_point: ConditionResult,
    three_point: ConditionResult,
) -> RecognitionVerdict {
    let basic = basic_geodesic_graph(m);
    let tie_breaking = satisfies_tie_breaking(m);
    let is_tree = basic.edge_count() + 1 == m.n();
    let is_path = is_tree && basic.degrees().iter().all(|&d| d <= 2);

    let tree_matches_fourth_point = !tie_breaking || fourth_point.holds == is_tree;
    let (mst_identical, realises) = if is_tree {
        let kruskal = mst(&WeightedGraph::complete(m)).expect("complete graph is connected");
        let realises = verify_realisation(&basic, m)
            .map(|r| r.realises)
            .unwrap_or(false);
        (kruskal.tree == basic, realises)
    } else {
        (true, true)
    };

    let cross_check = CrossCheck {
        fourth_point: fourth_point.holds,
        three_point: three_point.holds,
        tree_matches_fourth_point,
        mst_identical,
        realises,
    };
    debug_assert!(cross_check.consistent(), "internal cross-check failed: {cross_check:?}");

    RecognitionVerdict {
        is_spanning_tree_metric: is_tree,
        is_spanning_path_metric: is_path,
        realizing_graph: is_tree.then(|| basic.clone()),
        basic_graph: basic,
        tie_breaking,
        fourth_point,
        three_point,
        cross_check,
    }
}

/// The farthest pair `(s, t)`, `s < t`, lexicographically first among ties.
pub fn farthest_pair(m: &FiniteMetricSpace) -> Option<(usize, usize)> {
    let n = m.n();
    let mut best: Option<(usize, usize)> = None;
    for i in 0..n {
        for j in i + 1..n {
            if best.is_none_or(|(a, b)| m.distance(i, j) > m.distance(a, b)) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Orders points by distance from `s`, ties by index.
fn order_from(m: &FiniteMetricSpace, s: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..m.n()).collect();
    order.sort_by(|&a, &b| m.distance(s, a).cmp(m.distance(s, b)).then(a.cmp(&b)));
    order
}

/// Builds the spanning path through the farthest pair, if the space is a
/// spanning path metric space.
///
/// Requires the three-point condition. Without tie-breaking the candidate
/// path is still built and returned only if it realises the space.
pub fn recognize_path(m: &FiniteMetricSpace) -> Option<WeightedGraph> {
    if !three_point_condition(m).holds {
        return None;
    }
    let n = m.n();
    let Some((s, _)) = farthest_pair(m) else {
        return Some(WeightedGraph::from_sorted(m.labels().to_vec(), Vec::new()));
    };
    let order = order_from(m, s);
    let mut edges: Vec<Edge> = order
        .windows(2)
        .map(|w| Edge::new(w[0], w[1], m.distance(w[0], w[1]).clone()))
        .collect();
    edges.sort_by_key(|e| (e.u, e.v));
    let path = WeightedGraph::from_sorted(m.labels().to_vec(), edges);
    debug_assert_eq!(path.edge_count() + 1, n);
    match verify_realisation(&path, m) {
        Ok(r) if r.realises => Some(path),
        _ => None,
    }
}

/// Points of a spanning path in walk order, starting at the smaller-index
/// endpoint.
pub fn path_order(path: &WeightedGraph) -> Option<Vec<usize>> {
    if !path.is_path() {
        return None;
    }
    let n = path.n();
    if n == 1 {
        return Some(vec![0]);
    }
    let deg = path.degrees();
    let start = (0..n).find(|&v| deg[v] == 1)?;
    let adj = path.adjacency();
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    while order.len() < n {
        let next = adj[cur].iter().map(|&(v, _)| v).find(|&v| v != prev)?;
        order.push(next);
        prev = cur;
        cur = next;
    }
    Some(order)
}

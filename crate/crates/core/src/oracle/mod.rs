//! Brute-force reference implementations.
//!
//! Each oracle follows its definition literally and is capped to sizes where
//! exhaustive enumeration stays cheap. They exist to check the fast paths in
//! the other modules and never call into them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graph::{Edge, WeightedGraph};
use crate::kernel::{with_lengths, Exact, Lengths};
use crate::metric::FiniteMetricSpace;

pub mod generators;
pub mod prufer;

pub use generators::{generate, Generated, GeneratorParams, GeneratorRegistry, GeneratorSpec, MetricGenerator};

pub const EDGE_CLASS_CAP: usize = 6;
pub const SPANNING_TREE_CAP: usize = 8;
pub const TSP_CAP: usize = 10;

fn cap(operation: &'static str, n: usize, cap: usize) -> Result<()> {
    if n > cap {
        Err(Error::CapExceeded { operation, cap, n })
    } else {
        Ok(())
    }
}

/// All-pairs shortest path distances by Floyd–Warshall.
pub fn apsp(g: &WeightedGraph) -> Result<Vec<Vec<BigRational>>> {
    let n = g.n();
    let mut d: Vec<Vec<Option<BigRational>>> = vec![vec![None; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = Some(BigRational::zero());
    }
    for e in g.edges() {
        d[e.u][e.v] = Some(e.weight.clone());
        d[e.v][e.u] = Some(e.weight.clone());
    }
    for k in 0..n {
        for i in 0..n {
            let Some(ik) = d[i][k].clone() else { continue };
            for j in 0..n {
                let Some(kj) = &d[k][j] else { continue };
                let through = &ik + kj;
                if d[i][j].as_ref().is_none_or(|cur| through < *cur) {
                    d[i][j] = Some(through);
                }
            }
        }
    }
    let mut out = Vec::with_capacity(n);
    for (i, row) in d.into_iter().enumerate() {
        let mut r = Vec::with_capacity(n);
        for (j, v) in row.into_iter().enumerate() {
            r.push(v.ok_or_else(|| Error::Disconnected {
                from: g.labels()[i].clone(),
                to: g.labels()[j].clone(),
            })?);
        }
        out.push(r);
    }
    Ok(out)
}

/// Literal non-basic test: some ordering of some non-empty subset of the
/// other points forms a chain from `x` to `y` of total length `d(x,y)`.
pub fn brute_force_edge_class(m: &FiniteMetricSpace, x: usize, y: usize) -> Result<bool> {
    cap("brute-force edge classification", m.n(), EDGE_CLASS_CAP)?;
    m.check_index(x)?;
    m.check_index(y)?;
    if x == y {
        return Err(Error::SamePoint(x));
    }
    let others: Vec<usize> = (0..m.n()).filter(|&i| i != x && i != y).collect();
    let target = m.distance(x, y);
    let mut chain = Vec::new();
    let mut used = vec![false; others.len()];
    Ok(!some_chain_matches(m, x, y, target, &others, &mut used, &mut chain))
}

fn some_chain_matches(
    m: &FiniteMetricSpace,
    x: usize,
    y: usize,
    target: &BigRational,
    others: &[usize],
    used: &mut [bool],
    chain: &mut Vec<usize>,
) -> bool {
    if !chain.is_empty() {
        let mut total = BigRational::zero();
        let mut prev = x;
        for &p in chain.iter() {
            total += m.distance(prev, p);
            prev = p;
        }
        total += m.distance(prev, y);
        if total == *target {
            return true;
        }
    }
    for k in 0..others.len() {
        if used[k] {
            continue;
        }
        used[k] = true;
        chain.push(others[k]);
        let found = some_chain_matches(m, x, y, target, others, used, chain);
        chain.pop();
        used[k] = false;
        if found {
            return true;
        }
    }
    false
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimumTrees {
    pub weight: BigRational,
    /// Every spanning tree of minimum weight, sorted by edge list.
    pub trees: Vec<WeightedGraph>,
}

/// Enumerates all `n^(n-2)` labelled spanning trees of K_M through their
/// Prüfer sequences and keeps the lightest ones.
pub fn enumerate_min_spanning_trees(m: &FiniteMetricSpace) -> Result<MinimumTrees> {
    let n = m.n();
    cap("spanning tree enumeration", n, SPANNING_TREE_CAP)?;
    let (best, edge_lists) = with_lengths!(m.kernel(), |d| lightest_trees(&d));
    let mut trees: Vec<WeightedGraph> = edge_lists
        .into_iter()
        .map(|pairs| {
            let edges = pairs
                .into_iter()
                .map(|(u, v)| Edge::new(u, v, m.distance(u, v).clone()))
                .collect();
            WeightedGraph::new(m.labels().to_vec(), edges).expect("decoded trees are simple")
        })
        .collect();
    trees.sort_by_key(|t| t.endpoint_pairs());
    Ok(MinimumTrees {
        weight: m.kernel().unscale(best),
        trees,
    })
}

fn lightest_trees<T: Exact>(d: &Lengths<'_, T>) -> (BigInt, Vec<Vec<(usize, usize)>>) {
    let n = d.n;
    if n <= 2 {
        let edges: Vec<(usize, usize)> = if n == 2 { vec![(0, 1)] } else { vec![] };
        let w = edges.iter().fold(T::zero(), |acc, &(u, v)| acc + d.at(u, v).clone());
        return (w.to_bigint(), vec![edges]);
    }
    let mut best: Option<T> = None;
    let mut found: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut seq = vec![0usize; n - 2];
    loop {
        let edges = prufer::decode(&seq, n);
        let w = edges.iter().fold(T::zero(), |acc, &(u, v)| acc + d.at(u, v).clone());
        match best.as_ref().map(|b| w.cmp(b)) {
            None | Some(std::cmp::Ordering::Less) => {
                best = Some(w);
                found.clear();
                found.push(edges);
            }
            Some(std::cmp::Ordering::Equal) => found.push(edges),
            Some(std::cmp::Ordering::Greater) => {}
        }
        if !prufer::advance(&mut seq, n) {
            break;
        }
    }
    for e in &mut found {
        e.sort_unstable();
    }
    (best.expect("at least one tree").to_bigint(), found)
}

/// Optimal closed tour length by enumerating every tour once (`(n-1)!/2`).
pub fn brute_force_tsp(m: &FiniteMetricSpace) -> Result<BigRational> {
    let n = m.n();
    cap("brute-force TSP", n, TSP_CAP)?;
    if n < 3 {
        return Err(Error::TooFewPoints {
            operation: "brute-force TSP",
            min: 3,
            n,
        });
    }
    let best = with_lengths!(m.kernel(), |d| shortest_tour(&d).to_bigint());
    Ok(m.kernel().unscale(best))
}

fn shortest_tour<T: Exact>(d: &Lengths<'_, T>) -> T {
    // Tours start at 0; mirror images are skipped by requiring the second
    // point to have a smaller index than the last.
    fn extend<T: Exact>(
        d: &Lengths<'_, T>,
        tour: &mut Vec<usize>,
        used: &mut [bool],
        length: T,
        best: &mut Option<T>,
    ) {
        let n = d.n;
        let last = *tour.last().expect("tour starts at 0");
        if tour.len() == n {
            if tour[1] < last {
                let closed = length + d.at(last, 0).clone();
                if best.as_ref().is_none_or(|b| closed < *b) {
                    *best = Some(closed);
                }
            }
            return;
        }
        for next in 1..n {
            if used[next] {
                continue;
            }
            used[next] = true;
            tour.push(next);
            extend(d, tour, used, length.clone() + d.at(last, next).clone(), best);
            tour.pop();
            used[next] = false;
        }
    }
    let mut used = vec![false; d.n];
    used[0] = true;
    let mut best = None;
    extend(d, &mut vec![0], &mut used, T::zero(), &mut best);
    best.expect("n >= 3 has at least one tour")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::ratio;

    #[test]
    fn apsp_examples() {
        let path = WeightedGraph::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![Edge::new(0, 1, ratio(1, 1)), Edge::new(1, 2, ratio(2, 1))],
        )
        .unwrap();
        assert_eq!(apsp(&path).unwrap()[0][2], ratio(3, 1));

        let cycle = WeightedGraph::new(
            (1..=4).map(|i| i.to_string()).collect(),
            vec![
                Edge::new(0, 1, ratio(1, 1)),
                Edge::new(1, 2, ratio(1, 1)),
                Edge::new(2, 3, ratio(1, 1)),
                Edge::new(0, 3, ratio(1, 1)),
            ],
        )
        .unwrap();
        let d = apsp(&cycle).unwrap();
        assert_eq!(d[0][2], ratio(2, 1));
        assert_eq!(d[1][3], ratio(2, 1));

        let broken = WeightedGraph::new(vec!["a".into(), "b".into()], vec![]).unwrap();
        assert!(apsp(&broken).is_err());
    }

    #[test]
    fn literal_edge_classification() {
        let p = fixtures::path_metric();
        assert!(!brute_force_edge_class(&p, 0, 2).unwrap());
        assert!(brute_force_edge_class(&p, 0, 1).unwrap());
        assert!(!brute_force_edge_class(&fixtures::unit_four_cycle(), 0, 2).unwrap());
        assert!(brute_force_edge_class(&fixtures::uniform_triangle(), 0, 1).unwrap());
    }

    #[test]
    fn minimum_trees_of_path_metric() {
        let t = enumerate_min_spanning_trees(&fixtures::path_metric()).unwrap();
        assert_eq!(t.weight, ratio(3, 1));
        assert_eq!(t.trees.len(), 1);
        assert_eq!(t.trees[0].endpoint_pairs(), vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn four_cycle_has_tied_minimum_trees() {
        let t = enumerate_min_spanning_trees(&fixtures::unit_four_cycle()).unwrap();
        assert_eq!(t.weight, ratio(3, 1));
        // any three of the four unit sides
        assert_eq!(t.trees.len(), 4);
    }

    #[test]
    fn tsp_examples() {
        assert_eq!(brute_force_tsp(&fixtures::path_metric()).unwrap(), ratio(6, 1));
        assert_eq!(brute_force_tsp(&fixtures::uniform_triangle()).unwrap(), ratio(3, 1));
        assert_eq!(brute_force_tsp(&fixtures::unit_four_cycle()).unwrap(), ratio(4, 1));
        let two = fixtures::from_integers(&["a", "b"], &[&[0, 1], &[1, 0]]);
        assert!(brute_force_tsp(&two).is_err());
    }

    #[test]
    fn caps_are_enforced() {
        let labels: Vec<String> = (0..11).map(|i| i.to_string()).collect();
        let rows: Vec<Vec<i64>> = (0..11)
            .map(|i| (0..11).map(|j| if i == j { 0 } else { 1 }).collect())
            .collect();
        let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
        let label_refs: Vec<&str> = labels.iter().map(|s| s.as_str()).collect();
        let m = fixtures::from_integers(&label_refs, &refs);
        assert!(matches!(brute_force_tsp(&m), Err(Error::CapExceeded { cap: 10, .. })));
        assert!(matches!(enumerate_min_spanning_trees(&m), Err(Error::CapExceeded { cap: 8, .. })));
        assert!(matches!(brute_force_edge_class(&m, 0, 1), Err(Error::CapExceeded { cap: 6, .. })));
    }
}

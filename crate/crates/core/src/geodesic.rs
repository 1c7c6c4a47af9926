//! Basic and non-basic edges of K_M and the basic geodesic graph G_M.
//!
//! An edge `e(x,y)` is non-basic when some chain of other points
//! `x, x1, ..., xk, y` has total length exactly `d(x,y)`. By the triangle
//! inequality `d(x,x1) + d(x1,y) <= d(x,x1) + (rest of chain) = d(x,y)`, so
//! any such chain puts its first point in the closed interval `I(x,y)`, and a
//! single intermediate point is enough to decide the question. The oracle
//! module keeps the literal chain enumeration for cross-checking.

use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Edge, WeightedGraph};
use crate::kernel::{with_lengths, Exact, Lengths};
use crate::metric::FiniteMetricSpace;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeClass {
    pub edge: (usize, usize),
    pub basic: bool,
    /// Lowest-index point `z` with `d(x,z) + d(z,y) = d(x,y)`; only set for
    /// non-basic edges.
    pub witness: Option<usize>,
}

fn lowest_witness<T: Exact>(d: &Lengths<'_, T>, x: usize, y: usize) -> Option<usize> {
    let target = d.at(x, y);
    (0..d.n).find(|&z| z != x && z != y && *target == d.at(x, z).clone() + d.at(z, y).clone())
}

pub fn classify_edge(m: &FiniteMetricSpace, x: usize, y: usize) -> Result<EdgeClass> {
    m.check_index(x)?;
    m.check_index(y)?;
    if x == y {
        return Err(Error::SamePoint(x));
    }
    let witness = with_lengths!(m.kernel(), |d| lowest_witness(&d, x, y));
    Ok(EdgeClass {
        edge: (x.min(y), x.max(y)),
        basic: witness.is_none(),
        witness,
    })
}

/// Classification of every edge of K_M, in lexicographic `(i, j)` order.
pub fn classify_all(m: &FiniteMetricSpace) -> Vec<EdgeClass> {
    let n = m.n();
    with_lengths!(m.kernel(), |d| {
        (0..n)
            .into_par_iter()
            .flat_map_iter(|i| {
                (i + 1..n).map(move |j| {
                    let witness = lowest_witness(&d, i, j);
                    EdgeClass {
                        edge: (i, j),
                        basic: witness.is_none(),
                        witness,
                    }
                })
            })
            .collect()
    })
}

/// G_M: the subgraph of K_M made of the basic edges, weighted by `d`.
pub fn basic_geodesic_graph(m: &FiniteMetricSpace) -> WeightedGraph {
    let edges = classify_all(m)
        .into_iter()
        .filter(|c| c.basic)
        .map(|c| Edge::new(c.edge.0, c.edge.1, m.distance(c.edge.0, c.edge.1).clone()))
        .collect();
    WeightedGraph::from_sorted(m.labels().to_vec(), edges)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub pair: (usize, usize),
    pub graph_distance: BigRational,
    pub metric_distance: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Realisation {
    pub realises: bool,
    pub first_mismatch: Option<Mismatch>,
}

/// Checks that the shortest-path metric of `g` equals `d_M` on every pair.
///
/// Fails with [`Error::Disconnected`] when `g` has unreachable pairs.
pub fn verify_realisation(g: &WeightedGraph, m: &FiniteMetricSpace) -> Result<Realisation> {
    if g.labels() != m.labels() {
        return Err(Error::InvalidGraph(
            "graph and metric space have different labels".into(),
        ));
    }
    let n = m.n();
    let rows: Vec<Vec<Option<BigRational>>> =
        (0..n).into_par_iter().map(|s| g.distances_from(s)).collect();
    for i in 0..n {
        for j in i + 1..n {
            match &rows[i][j] {
                None => {
                    return Err(Error::Disconnected {
                        from: m.label(i).to_string(),
                        to: m.label(j).to_string(),
                    })
                }
                Some(dg) if dg != m.distance(i, j) => {
                    return Ok(Realisation {
                        realises: false,
                        first_mismatch: Some(Mismatch {
                            pair: (i, j),
                            graph_distance: dg.clone(),
                            metric_distance: m.distance(i, j).clone(),
                        }),
                    })
                }
                Some(_) => {}
            }
        }
    }
    Ok(Realisation {
        realises: true,
        first_mismatch: None,
    })
}

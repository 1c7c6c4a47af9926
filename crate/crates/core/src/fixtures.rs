//! Small named metric spaces that show up throughout tests and docs.

use num_rational::BigRational;

use crate::metric::{validate_metric, FiniteMetricSpace};
use crate::rational::ratio;

pub fn from_integers(labels: &[&str], rows: &[&[i64]]) -> FiniteMetricSpace {
    let raw: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&v| ratio(v, 1)).collect())
        .collect();
    validate_metric(raw, labels.iter().map(|s| s.to_string()).collect())
        .expect("fixture is a metric")
}

/// a - b - c with edge lengths 1 and 2.
pub fn path_metric() -> FiniteMetricSpace {
    from_integers(&["a", "b", "c"], &[&[0, 1, 3], &[1, 0, 2], &[3, 2, 0]])
}

/// Cycle 1-2-3-4-1 with unit edges; opposite corners at distance 2.
pub fn unit_four_cycle() -> FiniteMetricSpace {
    from_integers(
        &["1", "2", "3", "4"],
        &[&[0, 1, 2, 1], &[1, 0, 1, 2], &[2, 1, 0, 1], &[1, 2, 1, 0]],
    )
}

/// Three points at mutual distance 1.
pub fn uniform_triangle() -> FiniteMetricSpace {
    from_integers(&["x", "y", "z"], &[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]])
}

/// Leaves of a star with arm lengths 1, 2, 4: d(x,y)=3, d(x,z)=5, d(y,z)=6.
pub fn star_leaves() -> FiniteMetricSpace {
    from_integers(&["x", "y", "z"], &[&[0, 3, 5], &[3, 0, 6], &[5, 6, 0]])
}

/// Corners of the unit square under the L1 norm, in cyclic order.
pub fn l1_unit_square() -> FiniteMetricSpace {
    from_integers(
        &["p", "q", "r", "s"],
        &[&[0, 1, 2, 1], &[1, 0, 1, 2], &[2, 1, 0, 1], &[1, 2, 1, 0]],
    )
}

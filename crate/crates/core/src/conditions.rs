//! Medians, the fourth-point and three-point conditions, and the measures of
//! how far a space is from satisfying them.
//!
//! Only triplets of distinct points are scanned. A triplet with a repeated
//! point always has a median (the repeated point) and its longest side is
//! always half its perimeter, so it can neither violate a condition nor
//! raise a maximum above zero.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{with_lengths, Exact, Lengths};
use crate::metric::{metric_interval, FiniteMetricSpace, PointSet};
use crate::rational::decimal_string;

pub type Triplet = (usize, usize, usize);

/// Significant digits in the human-readable renderings.
pub const DECIMAL_DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionResult {
    pub holds: bool,
    /// First violating triplet of distinct points, lexicographically.
    pub witness: Option<Triplet>,
    /// Median of the witness triplet, when it has one. Only the three-point
    /// check can produce this: its witness may still satisfy the weaker
    /// fourth-point condition.
    pub certificate: Option<usize>,
}

impl ConditionResult {
    fn from_witness(witness: Option<Triplet>, certificate: Option<usize>) -> ConditionResult {
        ConditionResult {
            holds: witness.is_none(),
            witness,
            certificate,
        }
    }
}

fn median_scan<T: Exact>(d: &Lengths<'_, T>, x: usize, y: usize, z: usize) -> Option<usize> {
    let perimeter = d.perimeter(x, y, z);
    (0..d.n).find(|&p| d.star_sum(x, y, z, p).double() == perimeter)
}

/// The point `p` minimising `d(x,p)+d(y,p)+d(z,p)` down to half the
/// perimeter, if one exists. Such a point is unique. Repeated points are
/// allowed; the repeated point is then the median.
pub fn median(m: &FiniteMetricSpace, x: usize, y: usize, z: usize) -> Result<Option<usize>> {
    for i in [x, y, z] {
        m.check_index(i)?;
    }
    if x == y || x == z {
        return Ok(Some(x));
    }
    if y == z {
        return Ok(Some(y));
    }
    Ok(with_lengths!(m.kernel(), |d| median_scan(&d, x, y, z)))
}

/// The median computed as the unique element of `I(x,y) ∩ I(y,z) ∩ I(z,x)`.
/// Returns `None` when the intersection is empty. Kept as an independent
/// route to cross-check [`median`].
pub fn median_by_intervals(m: &FiniteMetricSpace, x: usize, y: usize, z: usize) -> Result<Option<usize>> {
    for i in [x, y, z] {
        m.check_index(i)?;
    }
    let interval = |a: usize, b: usize| -> Result<PointSet> {
        if a == b {
            Ok(PointSet::from_indices(vec![a]))
        } else {
            metric_interval(m, a, b)
        }
    };
    let common = interval(x, y)?
        .intersection(&interval(y, z)?)
        .intersection(&interval(z, x)?);
    match common.as_slice() {
        [] => Ok(None),
        [p] => Ok(Some(*p)),
        more => unreachable!("metric axioms force a single median, found {more:?}"),
    }
}

fn first_distinct_triplet<T, F>(d: &Lengths<'_, T>, violates: F) -> Option<Triplet>
where
    T: Exact,
    F: Fn(usize, usize, usize) -> bool + Sync,
{
    let n = d.n;
    (0..n).into_par_iter().find_map_first(|x| {
        for y in x + 1..n {
            for z in y + 1..n {
                if violates(x, y, z) {
                    return Some((x, y, z));
                }
            }
        }
        None
    })
}

/// Every triplet of points has a median. `O(n^4)`.
pub fn fourth_point_condition(m: &FiniteMetricSpace) -> ConditionResult {
    let witness = with_lengths!(m.kernel(), |d| {
        first_distinct_triplet(&d, |x, y, z| median_scan(&d, x, y, z).is_none())
    });
    ConditionResult::from_witness(witness, None)
}

fn three_point_fails<T: Exact>(d: &Lengths<'_, T>, x: usize, y: usize, z: usize) -> bool {
    let longest = d.at(x, y).max(d.at(y, z)).max(d.at(z, x));
    longest.double() != d.perimeter(x, y, z)
}

/// In every triplet the longest side equals half the perimeter. `O(n^3)`.
pub fn three_point_condition(m: &FiniteMetricSpace) -> ConditionResult {
    let witness = with_lengths!(m.kernel(), |d| {
        first_distinct_triplet(&d, |x, y, z| three_point_fails(&d, x, y, z))
    });
    let certificate = witness.and_then(|(x, y, z)| with_lengths!(m.kernel(), |d| median_scan(&d, x, y, z)));
    ConditionResult::from_witness(witness, certificate)
}

/// A non-negative exact measure together with the triplet attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deviation {
    pub value: BigRational,
    /// Lexicographically first triplet attaining the maximum; `None` when
    /// there are fewer than three points.
    pub argmax_triplet: Option<Triplet>,
    pub decimal: String,
}

impl Deviation {
    fn new(value: BigRational, argmax_triplet: Option<Triplet>) -> Deviation {
        let decimal = decimal_string(&value, DECIMAL_DIGITS);
        Deviation {
            value,
            argmax_triplet,
            decimal,
        }
    }
}

/// `ρ` of a ρ-roundabout space.
pub type Roundaboutness = Deviation;

/// Best ratio `num/den` over distinct triplets, where `score` yields the
/// ratio for one triplet. Ties keep the lexicographically first triplet.
fn max_ratio<T, F>(d: &Lengths<'_, T>, score: F) -> Option<(T, T, Triplet)>
where
    T: Exact,
    F: Fn(usize, usize, usize) -> (T, T) + Sync,
{
    let n = d.n;
    let better = |a: &(T, T, Triplet), b: &(T, T, Triplet)| a.0.clone() * b.1.clone() > b.0.clone() * a.1.clone();
    let per_row: Vec<Option<(T, T, Triplet)>> = (0..n)
        .into_par_iter()
        .map(|x| {
            let mut best: Option<(T, T, Triplet)> = None;
            for y in x + 1..n {
                for z in y + 1..n {
                    let (num, den) = score(x, y, z);
                    let cand = (num, den, (x, y, z));
                    if best.as_ref().is_none_or(|b| better(&cand, b)) {
                        best = Some(cand);
                    }
                }
            }
            best
        })
        .collect();
    per_row.into_iter().flatten().fold(None, |acc, cand| match acc {
        Some(b) if !better(&cand, &b) => Some(b),
        _ => Some(cand),
    })
}

fn require_two(m: &FiniteMetricSpace, operation: &'static str) -> Result<()> {
    if m.n() < 2 {
        return Err(Error::TooFewPoints {
            operation,
            min: 2,
            n: m.n(),
        });
    }
    Ok(())
}

/// `ρ = max over triplets of min over i of (d(x,i)+d(y,i)+d(z,i)) / perimeter, minus 1/2`.
///
/// Zero exactly when the fourth-point condition holds.
pub fn roundaboutness(m: &FiniteMetricSpace) -> Result<Roundaboutness> {
    require_two(m, "roundaboutness")?;
    let best = with_lengths!(m.kernel(), |d| {
        max_ratio(&d, |x, y, z| {
            let least = (0..d.n)
                .map(|i| d.star_sum(x, y, z, i))
                .min()
                .expect("at least one point");
            (least, d.perimeter(x, y, z))
        })
        .map(|(a, b, t)| (a.to_bigint(), b.to_bigint(), t))
    });
    Ok(match best {
        None => Deviation::new(BigRational::zero(), None),
        Some((least, perimeter, t)) => {
            let rho = BigRational::new(least * 2 - &perimeter, perimeter * 2);
            Deviation::new(rho, Some(t))
        }
    })
}

/// Spanning path-likeness: `max over triplets of (perimeter/2 - longest side) / perimeter`.
///
/// Zero exactly when the three-point condition holds.
pub fn path_deviance(m: &FiniteMetricSpace) -> Result<Deviation> {
    require_two(m, "path deviance")?;
    let best = with_lengths!(m.kernel(), |d| {
        max_ratio(&d, |x, y, z| {
            let perimeter = d.perimeter(x, y, z);
            let longest = d.at(x, y).max(d.at(y, z)).max(d.at(z, x)).clone();
            (perimeter.clone() - longest.double(), perimeter.double())
        })
        .map(|(a, b, t)| (a.to_bigint(), b.to_bigint(), t))
    });
    Ok(match best {
        None => Deviation::new(BigRational::zero(), None),
        Some((gap, den, t)) => Deviation::new(BigRational::new(gap, den), Some(t)),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hyperbolicity {
    pub delta: BigRational,
    /// First quadruple attaining `delta`; `None` below four points.
    pub quadruple: Option<[usize; 4]>,
    pub decimal: String,
}

fn four_point_gap<T: Exact>(d: &Lengths<'_, T>, x: usize, y: usize, z: usize, w: usize) -> T {
    let mut sums = [
        d.at(x, y).clone() + d.at(z, w).clone(),
        d.at(x, z).clone() + d.at(y, w).clone(),
        d.at(x, w).clone() + d.at(y, z).clone(),
    ];
    sums.sort();
    let [_, second, largest] = sums;
    largest - second
}

/// Gromov's four-point hyperbolicity: half the largest gap between the two
/// largest pair-sums over all quadruples. Repeated points contribute zero.
pub fn hyperbolicity(m: &FiniteMetricSpace) -> Hyperbolicity {
    let n = m.n();
    let best: Option<(BigInt, [usize; 4])> = with_lengths!(m.kernel(), |d| {
        let per_row: Vec<Option<(BigInt, [usize; 4])>> = (0..n)
            .into_par_iter()
            .map(|x| {
                let mut best: Option<(_, [usize; 4])> = None;
                for y in x + 1..n {
                    for z in y + 1..n {
                        for w in z + 1..n {
                            let gap = four_point_gap(&d, x, y, z, w);
                            if best.as_ref().is_none_or(|(b, _)| gap > *b) {
                                best = Some((gap, [x, y, z, w]));
                            }
                        }
                    }
                }
                best.map(|(g, q)| (g.to_bigint(), q))
            })
            .collect();
        per_row.into_iter().flatten().fold(None, |acc, cand| match acc {
            Some(b) if cand.0 <= b.0 => Some(b),
            _ => Some(cand),
        })
    });
    let (delta, quadruple) = match best {
        None => (BigRational::zero(), None),
        Some((gap, q)) => (m.kernel().unscale(gap) / BigRational::from_integer(2.into()), Some(q)),
    };
    Hyperbolicity {
        decimal: decimal_string(&delta, DECIMAL_DIGITS),
        delta,
        quadruple,
    }
}

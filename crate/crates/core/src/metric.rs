//! Finite metric spaces with exact distances, the tie-breaking rule, and
//! closed metric intervals.

use std::collections::HashSet;
use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{with_lengths, Exact, Kernel, Lengths};
use crate::rational::plain_string;

/// `n` labelled points with an exact, validated distance matrix.
#[derive(Debug, Clone)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Vec<BigRational>,
    kernel: Kernel,
}

impl PartialEq for FiniteMetricSpace {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.dist == other.dist
    }
}

impl FiniteMetricSpace {
    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn distance(&self, i: usize, j: usize) -> &BigRational {
        &self.dist[i * self.n() + j]
    }

    pub fn rows(&self) -> Vec<Vec<BigRational>> {
        self.dist.chunks(self.n()).map(|r| r.to_vec()).collect()
    }

    /// Multiplies every distance by a positive constant.
    pub fn scaled(&self, factor: &BigRational) -> Result<FiniteMetricSpace> {
        if !factor.is_positive() {
            return Err(Error::InvalidGenerator(format!(
                "scale factor must be positive, got {factor}"
            )));
        }
        let dist: Vec<BigRational> = self.dist.iter().map(|d| d * factor).collect();
        Ok(FiniteMetricSpace::from_trusted(self.labels.clone(), dist))
    }

    /// Same distances under new labels.
    pub fn relabelled(&self, labels: Vec<String>) -> Result<FiniteMetricSpace> {
        check_labels(&labels, self.n())?;
        Ok(FiniteMetricSpace {
            labels,
            dist: self.dist.clone(),
            kernel: self.kernel.clone(),
        })
    }

    /// Reorders points: point `i` of the result is point `order[i]` of `self`.
    pub fn permuted(&self, order: &[usize]) -> FiniteMetricSpace {
        let n = self.n();
        assert_eq!(order.len(), n);
        let labels = order.iter().map(|&i| self.labels[i].clone()).collect();
        let mut dist = Vec::with_capacity(n * n);
        for &i in order {
            for &j in order {
                dist.push(self.distance(i, j).clone());
            }
        }
        FiniteMetricSpace::from_trusted(labels, dist)
    }

    fn from_trusted(labels: Vec<String>, dist: Vec<BigRational>) -> FiniteMetricSpace {
        let kernel = Kernel::new(labels.len(), &dist);
        FiniteMetricSpace {
            labels,
            dist,
            kernel,
        }
    }

    pub(crate) fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub(crate) fn check_index(&self, i: usize) -> Result<()> {
        if i < self.n() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                n: self.n(),
            })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    NonzeroDiagonal,
    Negative,
    Asymmetry,
    ZeroOffDiagonal,
    Triangle,
}

/// The first metric axiom failure found, with the offending comparison.
///
/// For a triangle violation on `(i, j, k)`, `lhs = d(i,k)` and
/// `rhs = d(i,j) + d(j,k)`. For asymmetry `lhs = d(i,j)`, `rhs = d(j,i)`.
/// The single-entry kinds compare the entry against zero.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricViolation {
    pub kind: ViolationKind,
    pub indices: Vec<usize>,
    pub lhs: BigRational,
    pub rhs: BigRational,
}

impl fmt::Display for MetricViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lhs, rhs) = (plain_string(&self.lhs), plain_string(&self.rhs));
        match self.kind {
            ViolationKind::NonzeroDiagonal => {
                write!(f, "d({0},{0}) = {lhs} is not zero", self.indices[0])
            }
            ViolationKind::Negative => write!(
                f,
                "d({},{}) = {lhs} is negative",
                self.indices[0], self.indices[1]
            ),
            ViolationKind::Asymmetry => write!(
                f,
                "d({0},{1}) = {lhs} but d({1},{0}) = {rhs}",
                self.indices[0], self.indices[1]
            ),
            ViolationKind::ZeroOffDiagonal => write!(
                f,
                "d({},{}) = 0 for distinct points",
                self.indices[0], self.indices[1]
            ),
            ViolationKind::Triangle => write!(
                f,
                "triangle inequality fails: d({0},{2}) = {lhs} > d({0},{1}) + d({1},{2}) = {rhs}",
                self.indices[0], self.indices[1], self.indices[2]
            ),
        }
    }
}

fn check_labels(labels: &[String], n: usize) -> Result<()> {
    if labels.len() != n {
        return Err(Error::LabelCount {
            labels: labels.len(),
            n,
        });
    }
    let mut seen = HashSet::new();
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

/// Checks the metric axioms and returns the validated space.
///
/// Entry checks run over `(i, j)` in lexicographic order, then the triangle
/// inequality over `(i, j, k)`; the first failure is reported as
/// [`Error::NotMetric`].
pub fn validate_metric(raw: Vec<Vec<BigRational>>, labels: Vec<String>) -> Result<FiniteMetricSpace> {
    let n = raw.len();
    if n == 0 {
        return Err(Error::Empty);
    }
    for (row, r) in raw.iter().enumerate() {
        if r.len() != n {
            return Err(Error::NotSquare {
                row,
                found: r.len(),
                expected: n,
            });
        }
    }
    check_labels(&labels, n)?;

    let zero = BigRational::zero();
    for i in 0..n {
        for j in 0..n {
            let v = &raw[i][j];
            let violation = |kind, indices: Vec<usize>, rhs: &BigRational| {
                Error::NotMetric(MetricViolation {
                    kind,
                    indices,
                    lhs: v.clone(),
                    rhs: rhs.clone(),
                })
            };
            if i == j {
                if !v.is_zero() {
                    return Err(violation(ViolationKind::NonzeroDiagonal, vec![i], &zero));
                }
                continue;
            }
            if v.is_negative() {
                return Err(violation(ViolationKind::Negative, vec![i, j], &zero));
            }
            if i < j && *v != raw[j][i] {
                return Err(violation(ViolationKind::Asymmetry, vec![i, j], &raw[j][i]));
            }
            if v.is_zero() {
                return Err(violation(ViolationKind::ZeroOffDiagonal, vec![i, j], &zero));
            }
        }
    }

    let dist: Vec<BigRational> = raw.into_iter().flatten().collect();
    let space = FiniteMetricSpace::from_trusted(labels, dist);
    if let Some((i, j, k)) = with_lengths!(space.kernel(), |d| first_triangle_violation(&d)) {
        return Err(Error::NotMetric(MetricViolation {
            kind: ViolationKind::Triangle,
            indices: vec![i, j, k],
            lhs: space.distance(i, k).clone(),
            rhs: space.distance(i, j) + space.distance(j, k),
        }));
    }
    Ok(space)
}

fn first_triangle_violation<T: Exact>(d: &Lengths<'_, T>) -> Option<(usize, usize, usize)> {
    let n = d.n;
    (0..n).into_par_iter().find_map_first(|i| {
        for j in 0..n {
            if j == i {
                continue;
            }
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                if *d.at(i, k) > d.at(i, j).clone() + d.at(j, k).clone() {
                    return Some((i, j, k));
                }
            }
        }
        None
    })
}

pub type PointPair = (usize, usize);

/// Outcome of the tie-breaking check.
///
/// `colliding_pairs` lists pairs of point-pairs `((i,j),(k,l))` with
/// `d(i,j) = d(k,l)`, `i<j`, `k<l`, `(i,j) < (k,l)`, in lexicographic order.
/// It may be truncated (see [`tie_breaking_limited`]); `collision_count` is
/// always the full count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TieBreaking {
    pub holds: bool,
    pub collision_count: u128,
    pub colliding_pairs: Vec<(PointPair, PointPair)>,
}

/// Every collision, untruncated. Quadratic in the size of the largest group
/// of equal distances.
pub fn check_tie_breaking(m: &FiniteMetricSpace) -> TieBreaking {
    tie_breaking_limited(m, None)
}

pub fn tie_breaking_limited(m: &FiniteMetricSpace, limit: Option<usize>) -> TieBreaking {
    with_lengths!(m.kernel(), |d| collisions(&d, limit))
}

/// True iff all off-diagonal distances are distinct.
pub fn satisfies_tie_breaking(m: &FiniteMetricSpace) -> bool {
    tie_breaking_limited(m, Some(0)).holds
}

fn collisions<T: Exact>(d: &Lengths<'_, T>, limit: Option<usize>) -> TieBreaking {
    let n = d.n;
    let mut pairs: Vec<PointPair> = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            pairs.push((i, j));
        }
    }
    let mut by_value = pairs.clone();
    by_value.sort_by(|a, b| d.at(a.0, a.1).cmp(d.at(b.0, b.1)).then(a.cmp(b)));

    // group id per pair, members of each group in lexicographic order
    let mut group_of = vec![0usize; n * n];
    let mut groups: Vec<Vec<PointPair>> = Vec::new();
    for (idx, &p) in by_value.iter().enumerate() {
        let fresh = idx == 0 || {
            let q = by_value[idx - 1];
            d.at(q.0, q.1) != d.at(p.0, p.1)
        };
        if fresh {
            groups.push(Vec::new());
        }
        let g = groups.len() - 1;
        groups[g].push(p);
        group_of[p.0 * n + p.1] = g;
    }

    let collision_count: u128 = groups
        .iter()
        .map(|g| {
            let s = g.len() as u128;
            s * s.saturating_sub(1) / 2
        })
        .sum();

    let cap = limit.unwrap_or(usize::MAX);
    let mut colliding_pairs = Vec::new();
    'outer: for &p in &pairs {
        if colliding_pairs.len() >= cap {
            break;
        }
        let group = &groups[group_of[p.0 * n + p.1]];
        let pos = group.binary_search(&p).expect("pair is in its own group");
        for &q in &group[pos + 1..] {
            if colliding_pairs.len() >= cap {
                break 'outer;
            }
            colliding_pairs.push((p, q));
        }
    }

    TieBreaking {
        holds: collision_count == 0,
        collision_count,
        colliding_pairs,
    }
}

/// Sorted set of distinct point indices.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PointSet(Vec<usize>);

impl PointSet {
    pub fn from_indices(mut indices: Vec<usize>) -> PointSet {
        indices.sort_unstable();
        indices.dedup();
        PointSet(indices)
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        PointSet(self.0.iter().copied().filter(|&i| other.contains(i)).collect())
    }
}

/// Closed metric interval `I(x,y) = { i : d(x,y) = d(x,i) + d(i,y) }`.
pub fn metric_interval(m: &FiniteMetricSpace, x: usize, y: usize) -> Result<PointSet> {
    m.check_index(x)?;
    m.check_index(y)?;
    if x == y {
        return Err(Error::SamePoint(x));
    }
    let members = with_lengths!(m.kernel(), |d| {
        (0..d.n)
            .filter(|&i| *d.at(x, y) == d.at(x, i).clone() + d.at(i, y).clone())
            .collect::<Vec<_>>()
    });
    Ok(PointSet(members))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::ratio;

    fn raw(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| ratio(v, 1)).collect())
            .collect()
    }

    fn abc() -> Vec<String> {
        vec!["a".into(), "b".into(), "c".into()]
    }

    #[test]
    fn degenerate_triangle_is_allowed() {
        let m = validate_metric(raw(&[&[0, 1, 3], &[1, 0, 2], &[3, 2, 0]]), abc()).unwrap();
        assert_eq!(m.n(), 3);
        assert_eq!(*m.distance(0, 2), ratio(3, 1));
    }

    #[test]
    fn triangle_violation_witness() {
        let err = validate_metric(raw(&[&[0, 1, 3], &[1, 0, 1], &[3, 1, 0]]), abc()).unwrap_err();
        let Error::NotMetric(v) = err else {
            panic!("expected a metric violation, got {err:?}")
        };
        assert_eq!(v.kind, ViolationKind::Triangle);
        assert_eq!(v.indices, vec![0, 1, 2]);
        assert_eq!(v.lhs, ratio(3, 1));
        assert_eq!(v.rhs, ratio(2, 1));
    }

    #[test]
    fn zero_off_diagonal() {
        let err = validate_metric(raw(&[&[0, 0], &[0, 0]]), vec!["a".into(), "b".into()]).unwrap_err();
        assert!(matches!(
            err,
            Error::NotMetric(MetricViolation { kind: ViolationKind::ZeroOffDiagonal, .. })
        ));
    }

    #[test]
    fn entry_level_violations() {
        let two = || vec!["a".to_string(), "b".to_string()];
        let e = validate_metric(raw(&[&[0, 1], &[2, 0]]), two()).unwrap_err();
        assert!(matches!(e, Error::NotMetric(MetricViolation { kind: ViolationKind::Asymmetry, .. })));
        let e = validate_metric(raw(&[&[1, 1], &[1, 0]]), two()).unwrap_err();
        assert!(matches!(e, Error::NotMetric(MetricViolation { kind: ViolationKind::NonzeroDiagonal, .. })));
        let neg = vec![vec![ratio(0, 1), ratio(-1, 1)], vec![ratio(-1, 1), ratio(0, 1)]];
        let e = validate_metric(neg, two()).unwrap_err();
        assert!(matches!(e, Error::NotMetric(MetricViolation { kind: ViolationKind::Negative, .. })));
    }

    #[test]
    fn shape_and_label_errors() {
        let e = validate_metric(raw(&[&[0, 1], &[1]]), vec!["a".into(), "b".into()]).unwrap_err();
        assert!(matches!(e, Error::NotSquare { row: 1, .. }));
        let e = validate_metric(raw(&[&[0, 1], &[1, 0]]), vec!["a".into()]).unwrap_err();
        assert!(matches!(e, Error::LabelCount { .. }));
        let e = validate_metric(raw(&[&[0, 1], &[1, 0]]), vec!["a".into(), "a".into()]).unwrap_err();
        assert_eq!(e, Error::DuplicateLabel("a".into()));
        assert_eq!(validate_metric(vec![], vec![]).unwrap_err(), Error::Empty);
    }

    #[test]
    fn tie_breaking_examples() {
        assert!(check_tie_breaking(&fixtures::path_metric()).holds);
        let c4 = check_tie_breaking(&fixtures::unit_four_cycle());
        assert!(!c4.holds);
        assert!(c4.colliding_pairs.contains(&((0, 1), (1, 2))));
        // four unit sides: 6 collisions; two diagonals: 1
        assert_eq!(c4.collision_count, 7);
        assert_eq!(c4.colliding_pairs.len(), 7);
        let mut sorted = c4.colliding_pairs.clone();
        sorted.sort();
        assert_eq!(sorted, c4.colliding_pairs);
        let single = validate_metric(raw(&[&[0]]), vec!["a".into()]).unwrap();
        assert!(check_tie_breaking(&single).holds);
    }

    #[test]
    fn limited_collisions_are_a_prefix() {
        let m = fixtures::uniform_triangle();
        let full = check_tie_breaking(&m);
        let first = tie_breaking_limited(&m, Some(2));
        assert_eq!(full.collision_count, 3);
        assert_eq!(first.collision_count, 3);
        assert_eq!(first.colliding_pairs, full.colliding_pairs[..2]);
    }

    #[test]
    fn interval_examples() {
        let p = fixtures::path_metric();
        assert_eq!(metric_interval(&p, 0, 2).unwrap().as_slice(), &[0, 1, 2]);
        assert_eq!(metric_interval(&p, 0, 1).unwrap().as_slice(), &[0, 1]);
        let c4 = fixtures::unit_four_cycle();
        assert_eq!(metric_interval(&c4, 0, 2).unwrap().as_slice(), &[0, 1, 2, 3]);
        assert_eq!(metric_interval(&p, 1, 1), Err(Error::SamePoint(1)));
        assert!(metric_interval(&p, 0, 7).is_err());
    }
}

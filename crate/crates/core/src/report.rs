//! The `analyze` report: every verdict and measure for one metric space,
//! with witnesses given by label.

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::conditions::{
    fourth_point_condition, hyperbolicity, path_deviance, roundaboutness, three_point_condition, ConditionResult,
    Deviation, Triplet,
};
use crate::error::{Error, Result};
use crate::geodesic::classify_all;
use crate::graph::{LabelledEdge, WeightedGraph};
use crate::metric::{tie_breaking_limited, validate_metric, FiniteMetricSpace, MetricViolation, ViolationKind};
use crate::oracle;
use crate::rational::{fraction_string, plain_string};
use crate::recognition::{mst, recognize_with, CrossCheck};

/// Colliding pairs listed in a report; the full count is always given.
pub const COLLISION_LIST_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, Default)]
pub struct AnalyzeOptions {
    /// Run the brute-force oracles where their size caps allow.
    pub verify: bool,
    /// Record wall-clock time per phase. Off by default so that reports are
    /// byte-identical across runs.
    pub timings: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub n: usize,
    pub labels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationRecord {
    pub kind: ViolationKind,
    pub points: Vec<String>,
    pub lhs: String,
    pub rhs: String,
    pub message: String,
}

impl ViolationRecord {
    pub fn new(v: &MetricViolation, labels: &[String]) -> ViolationRecord {
        ViolationRecord {
            kind: v.kind,
            points: v.indices.iter().map(|&i| labels[i].clone()).collect(),
            lhs: fraction_string(&v.lhs),
            rhs: fraction_string(&v.rhs),
            message: v.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TieBreakingRecord {
    pub holds: bool,
    /// Decimal string; may exceed 64 bits for large degenerate inputs.
    pub collision_count: String,
    /// Up to [`COLLISION_LIST_LIMIT`] colliding pairs, lexicographically first.
    pub colliding_pairs: Vec<[[String; 2]; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionRecord {
    pub holds: bool,
    pub witness: Option<[String; 3]>,
    pub certificate: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleCheck {
    /// `passed`, `failed`, or `skipped`.
    pub status: String,
    pub detail: String,
}

impl OracleCheck {
    fn passed(detail: impl Into<String>) -> OracleCheck {
        OracleCheck {
            status: "passed".into(),
            detail: detail.into(),
        }
    }

    fn failed(detail: impl Into<String>) -> OracleCheck {
        OracleCheck {
            status: "failed".into(),
            detail: detail.into(),
        }
    }

    fn skipped(detail: impl Into<String>) -> OracleCheck {
        OracleCheck {
            status: "skipped".into(),
            detail: detail.into(),
        }
    }

    fn check(ok: bool, detail: impl Into<String>) -> OracleCheck {
        if ok {
            OracleCheck::passed(detail)
        } else {
            OracleCheck::failed(detail)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub edge_classes: OracleCheck,
    pub minimum_trees: OracleCheck,
    pub tour_length: OracleCheck,
    pub shortest_paths: OracleCheck,
    pub all_passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub input: InputDigest,
    pub metric_valid: bool,
    pub violation: Option<ViolationRecord>,
    pub tie_breaking: Option<TieBreakingRecord>,
    pub fourth_point: Option<ConditionRecord>,
    pub three_point: Option<ConditionRecord>,
    /// Exact `p/q`.
    pub rho: Option<String>,
    pub rho_decimal: Option<String>,
    pub rho_triplet: Option<[String; 3]>,
    /// ρ reads as spanning tree-likeness only when distances are distinct.
    pub rho_tie_breaking_caveat: bool,
    /// `(perimeter/2 - longest side) / perimeter`, maximised over triplets.
    pub path_deviance_normalized: Option<String>,
    pub path_deviance_decimal: Option<String>,
    pub path_deviance_triplet: Option<[String; 3]>,
    pub hyperbolicity: Option<String>,
    pub hyperbolicity_decimal: Option<String>,
    pub hyperbolicity_quadruple: Option<[String; 4]>,
    pub is_spanning_tree_metric: Option<bool>,
    pub is_spanning_path_metric: Option<bool>,
    pub basic_graph_edge_count: Option<usize>,
    pub realizing_edges: Option<Vec<LabelledEdge>>,
    pub cross_check: Option<CrossCheck>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verification: Option<Verification>,
    /// Milliseconds per phase, when requested.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

impl ReportDocument {
    fn invalid(labels: &[String], v: &MetricViolation) -> ReportDocument {
        ReportDocument {
            input: InputDigest {
                n: labels.len(),
                labels: labels.to_vec(),
            },
            metric_valid: false,
            violation: Some(ViolationRecord::new(v, labels)),
            tie_breaking: None,
            fourth_point: None,
            three_point: None,
            rho: None,
            rho_decimal: None,
            rho_triplet: None,
            rho_tie_breaking_caveat: false,
            path_deviance_normalized: None,
            path_deviance_decimal: None,
            path_deviance_triplet: None,
            hyperbolicity: None,
            hyperbolicity_decimal: None,
            hyperbolicity_quadruple: None,
            is_spanning_tree_metric: None,
            is_spanning_path_metric: None,
            basic_graph_edge_count: None,
            realizing_edges: None,
            cross_check: None,
            verification: None,
            timings_ms: None,
        }
    }
}

struct Clock {
    enabled: bool,
    phases: BTreeMap<String, f64>,
}

impl Clock {
    fn time<T>(&mut self, phase: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        if self.enabled {
            self.phases
                .insert(phase.to_string(), start.elapsed().as_secs_f64() * 1e3);
        }
        out
    }
}

fn names3(m: &FiniteMetricSpace, t: Triplet) -> [String; 3] {
    [m.label(t.0).into(), m.label(t.1).into(), m.label(t.2).into()]
}

fn condition_record(m: &FiniteMetricSpace, c: &ConditionResult) -> ConditionRecord {
    ConditionRecord {
        holds: c.holds,
        witness: c.witness.map(|t| names3(m, t)),
        certificate: c.certificate.map(|p| m.label(p).to_string()),
    }
}

type DeviationFields = (Option<String>, Option<String>, Option<[String; 3]>);

fn deviation_fields(m: &FiniteMetricSpace, d: Result<Deviation>) -> DeviationFields {
    match d {
        Ok(d) => (
            Some(fraction_string(&d.value)),
            Some(d.decimal),
            d.argmax_triplet.map(|t| names3(m, t)),
        ),
        Err(_) => (None, None, None),
    }
}

/// Validates `raw` and analyses it. Non-metric input gives a report with
/// `metric_valid = false` and the violation; other input errors are returned.
pub fn analyze_raw(raw: Vec<Vec<BigRational>>, labels: Vec<String>, options: AnalyzeOptions) -> Result<ReportDocument> {
    let mut clock = Clock {
        enabled: options.timings,
        phases: BTreeMap::new(),
    };
    let validated = clock.time("validate", || validate_metric(raw, labels.clone()));
    match validated {
        Ok(m) => Ok(analyze_timed(&m, options, clock)),
        Err(Error::NotMetric(v)) => {
            let mut doc = ReportDocument::invalid(&labels, &v);
            doc.timings_ms = options.timings.then_some(clock.phases);
            Ok(doc)
        }
        Err(e) => Err(e),
    }
}

pub fn analyze(m: &FiniteMetricSpace, options: AnalyzeOptions) -> ReportDocument {
    let clock = Clock {
        enabled: options.timings,
        phases: BTreeMap::new(),
    };
    analyze_timed(m, options, clock)
}

fn analyze_timed(m: &FiniteMetricSpace, options: AnalyzeOptions, mut clock: Clock) -> ReportDocument {
    let ties = clock.time("tie_breaking", || tie_breaking_limited(m, Some(COLLISION_LIST_LIMIT)));
    let fourth = clock.time("fourth_point", || fourth_point_condition(m));
    let three = clock.time("three_point", || three_point_condition(m));
    let verdict = clock.time("recognition", || recognize_with(m, fourth, three));
    let rho = clock.time("roundaboutness", || roundaboutness(m));
    let deviance = clock.time("path_deviance", || path_deviance(m));
    let delta = clock.time("hyperbolicity", || hyperbolicity(m));
    let verification = options
        .verify
        .then(|| clock.time("verify", || verify(m, verdict.realizing_graph.as_ref())));

    let pair_names = |p: (usize, usize)| [m.label(p.0).to_string(), m.label(p.1).to_string()];
    let (rho_exact, rho_decimal, rho_triplet) = deviation_fields(m, rho);
    let (dev_exact, dev_decimal, dev_triplet) = deviation_fields(m, deviance);

    ReportDocument {
        input: InputDigest {
            n: m.n(),
            labels: m.labels().to_vec(),
        },
        metric_valid: true,
        violation: None,
        tie_breaking: Some(TieBreakingRecord {
            holds: ties.holds,
            collision_count: ties.collision_count.to_string(),
            colliding_pairs: ties
                .colliding_pairs
                .iter()
                .map(|&(a, b)| [pair_names(a), pair_names(b)])
                .collect(),
        }),
        fourth_point: Some(condition_record(m, &fourth)),
        three_point: Some(condition_record(m, &three)),
        rho: rho_exact,
        rho_decimal,
        rho_triplet,
        rho_tie_breaking_caveat: !ties.holds,
        path_deviance_normalized: dev_exact,
        path_deviance_decimal: dev_decimal,
        path_deviance_triplet: dev_triplet,
        hyperbolicity: Some(fraction_string(&delta.delta)),
        hyperbolicity_decimal: Some(delta.decimal),
        hyperbolicity_quadruple: delta.quadruple.map(|q| q.map(|i| m.label(i).to_string())),
        is_spanning_tree_metric: Some(verdict.is_spanning_tree_metric),
        is_spanning_path_metric: Some(verdict.is_spanning_path_metric),
        basic_graph_edge_count: Some(verdict.basic_graph.edge_count()),
        realizing_edges: verdict.realizing_graph.as_ref().map(WeightedGraph::labelled_edges),
        cross_check: Some(verdict.cross_check),
        verification,
        timings_ms: options.timings.then_some(clock.phases),
    }
}

/// Runs every oracle whose cap admits `m` against the fast paths.
pub fn verify(m: &FiniteMetricSpace, realizing: Option<&WeightedGraph>) -> Verification {
    let n = m.n();

    let edge_classes = if n > oracle::EDGE_CLASS_CAP {
        OracleCheck::skipped(format!("n = {n} exceeds cap {}", oracle::EDGE_CLASS_CAP))
    } else {
        let disagreements: Vec<String> = classify_all(m)
            .into_iter()
            .filter(|c| oracle::brute_force_edge_class(m, c.edge.0, c.edge.1).ok() != Some(c.basic))
            .map(|c| format!("{}-{}", m.label(c.edge.0), m.label(c.edge.1)))
            .collect();
        OracleCheck::check(
            disagreements.is_empty(),
            if disagreements.is_empty() {
                format!("{} edges agree with chain enumeration", n * n.saturating_sub(1) / 2)
            } else {
                format!("disagreement on {}", disagreements.join(", "))
            },
        )
    };

    let kruskal = mst(&crate::graph::WeightedGraph::complete(m)).expect("complete graph is connected");
    let minimum_trees = if n > oracle::SPANNING_TREE_CAP {
        OracleCheck::skipped(format!("n = {n} exceeds cap {}", oracle::SPANNING_TREE_CAP))
    } else {
        let all = oracle::enumerate_min_spanning_trees(m).expect("within cap");
        let weight_ok = all.weight == kruskal.tree.total_weight();
        let unique_ok = !kruskal.unique_certified || all.trees.len() == 1;
        let tree_ok = realizing.is_none_or(|g| all.trees.len() == 1 && all.trees[0] == *g);
        OracleCheck::check(
            weight_ok && unique_ok && tree_ok,
            format!(
                "{} minimum tree(s) of weight {}; Kruskal weight {}",
                all.trees.len(),
                plain_string(&all.weight),
                plain_string(&kruskal.tree.total_weight())
            ),
        )
    };

    let tour_length = match realizing {
        None => OracleCheck::skipped("not a spanning tree metric space"),
        Some(_) if n < 3 => OracleCheck::skipped("fewer than three points"),
        Some(_) if n > oracle::TSP_CAP => {
            OracleCheck::skipped(format!("n = {n} exceeds cap {}", oracle::TSP_CAP))
        }
        Some(tree) => {
            let tour = oracle::brute_force_tsp(m).expect("within cap");
            let twice = tree.total_weight() * BigRational::from_integer(BigInt::from(2));
            OracleCheck::check(
                tour == twice,
                format!(
                    "optimal tour {}; twice the tree weight {}",
                    plain_string(&tour),
                    plain_string(&twice)
                ),
            )
        }
    };

    let basic = crate::geodesic::basic_geodesic_graph(m);
    let shortest_paths = match oracle::apsp(&basic) {
        Ok(d) => {
            let ok = (0..n).all(|i| (0..n).all(|j| d[i][j] == *m.distance(i, j)));
            OracleCheck::check(ok, "Floyd-Warshall on the basic graph against the input matrix")
        }
        Err(e) => OracleCheck::failed(e.to_string()),
    };

    let all_passed = [&edge_classes, &minimum_trees, &tour_length, &shortest_paths]
        .iter()
        .all(|c| c.status != "failed");
    Verification {
        edge_classes,
        minimum_trees,
        tour_length,
        shortest_paths,
        all_passed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn report_for_uniform_triangle() {
        let r = analyze(&fixtures::uniform_triangle(), AnalyzeOptions::default());
        assert_eq!(r.rho.as_deref(), Some("1/6"));
        assert_eq!(r.rho_decimal.as_deref(), Some("0.166666666667"));
        assert_eq!(r.rho_triplet, Some(["x".into(), "y".into(), "z".into()]));
        assert!(r.rho_tie_breaking_caveat);
        assert_eq!(r.is_spanning_tree_metric, Some(false));
        assert_eq!(r.fourth_point.unwrap().witness, Some(["x".into(), "y".into(), "z".into()]));
        assert_eq!(r.hyperbolicity.as_deref(), Some("0/1"));
        assert!(r.timings_ms.is_none());
    }

    #[test]
    fn report_round_trips_through_json() {
        let r = analyze(
            &fixtures::path_metric(),
            AnalyzeOptions {
                verify: true,
                timings: true,
            },
        );
        assert!(r.timings_ms.as_ref().unwrap().contains_key("fourth_point"));
        let exact = ReportDocument {
            timings_ms: None,
            ..r
        };
        let text = serde_json::to_string(&exact).unwrap();
        let back: ReportDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back, exact);
        assert!(exact.verification.unwrap().all_passed);
    }

    #[test]
    fn invalid_metric_report() {
        let raw = vec![
            vec![fixtures_ratio(0), fixtures_ratio(1), fixtures_ratio(3)],
            vec![fixtures_ratio(1), fixtures_ratio(0), fixtures_ratio(1)],
            vec![fixtures_ratio(3), fixtures_ratio(1), fixtures_ratio(0)],
        ];
        let r = analyze_raw(raw, vec!["a".into(), "b".into(), "c".into()], AnalyzeOptions::default()).unwrap();
        assert!(!r.metric_valid);
        let v = r.violation.unwrap();
        assert_eq!(v.kind, ViolationKind::Triangle);
        assert_eq!(v.points, vec!["a", "b", "c"]);
        assert_eq!((v.lhs.as_str(), v.rhs.as_str()), ("3/1", "2/1"));
    }

    fn fixtures_ratio(v: i64) -> BigRational {
        crate::rational::ratio(v, 1)
    }

    #[test]
    fn verification_skips_beyond_caps() {
        let g = oracle::generate(&oracle::GeneratorSpec::new("tree", 12, 5)).unwrap();
        let v = verify(&g.space, g.tree.as_ref());
        assert_eq!(v.edge_classes.status, "skipped");
        assert_eq!(v.minimum_trees.status, "skipped");
        assert_eq!(v.tour_length.status, "skipped");
        assert_eq!(v.shortest_paths.status, "passed");
        assert!(v.all_passed);
    }
}

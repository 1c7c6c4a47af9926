//! Property tests over seeded random metrics.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use spanmetric::conditions::{
    fourth_point_condition, hyperbolicity, median, median_by_intervals, path_deviance, roundaboutness,
    three_point_condition,
};
use spanmetric::formats::FormatRegistry;
use spanmetric::geodesic::{basic_geodesic_graph, classify_edge, verify_realisation};
use spanmetric::metric::{check_tie_breaking, metric_interval, satisfies_tie_breaking, validate_metric};
use spanmetric::oracle::{apsp, brute_force_edge_class, brute_force_tsp, generate, GeneratorSpec};
use spanmetric::recognition::{mst, recognize, recognize_path};
use spanmetric::{FiniteMetricSpace, WeightedGraph};

const KINDS: [&str; 4] = ["tree", "l1", "euclidean", "perturbed-tree"];

fn space(kind: &str, n: usize, seed: u64, dim: usize) -> FiniteMetricSpace {
    let mut spec = GeneratorSpec::new(kind, n, seed);
    spec.params.dimension = dim;
    generate(&spec).unwrap().space
}

fn any_space(max_n: usize) -> impl Strategy<Value = FiniteMetricSpace> {
    (0..KINDS.len(), 2..=max_n, any::<u64>(), 1usize..=3)
        .prop_map(|(k, n, seed, dim)| space(KINDS[k], n, seed, dim))
}

fn r(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn basic_graph_is_connected_and_realises(m in any_space(9)) {
        let g = basic_geodesic_graph(&m);
        prop_assert!(g.is_connected());
        prop_assert!(verify_realisation(&g, &m).unwrap().realises);
        prop_assert_eq!(apsp(&g).unwrap(), m.rows());
    }

    #[test]
    fn edge_classes_match_chain_enumeration(m in any_space(6)) {
        for x in 0..m.n() {
            for y in x + 1..m.n() {
                let fast = classify_edge(&m, x, y).unwrap();
                prop_assert_eq!(fast.basic, brute_force_edge_class(&m, x, y).unwrap());
            }
        }
    }

    #[test]
    fn median_routes_agree(m in any_space(8)) {
        let n = m.n();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    prop_assert_eq!(median(&m, x, y, z).unwrap(), median_by_intervals(&m, x, y, z).unwrap());
                }
            }
        }
    }

    #[test]
    fn rho_vanishes_exactly_with_fourth_point(m in any_space(8)) {
        let rho = roundaboutness(&m).unwrap();
        prop_assert_eq!(rho.value.is_zero(), fourth_point_condition(&m).holds);
        prop_assert!(rho.value >= BigRational::zero());
        prop_assert!(rho.value <= r(1, 6));
    }

    #[test]
    fn three_point_implies_fourth_point(m in any_space(8)) {
        let three = three_point_condition(&m);
        if three.holds {
            prop_assert!(fourth_point_condition(&m).holds);
        }
        prop_assert_eq!(path_deviance(&m).unwrap().value.is_zero(), three.holds);
    }

    #[test]
    fn hyperbolicity_is_homogeneous(m in any_space(7), p in 1i64..20, q in 1i64..20) {
        let c = r(p, q);
        let scaled = m.scaled(&c).unwrap();
        let a = hyperbolicity(&m);
        let b = hyperbolicity(&scaled);
        prop_assert_eq!(b.delta, a.delta * c);
        prop_assert_eq!(b.quadruple, a.quadruple);
    }

    #[test]
    fn ratios_are_scale_free(m in any_space(7), p in 1i64..20, q in 1i64..20) {
        let scaled = m.scaled(&r(p, q)).unwrap();
        prop_assert_eq!(roundaboutness(&m).unwrap(), roundaboutness(&scaled).unwrap());
        prop_assert_eq!(path_deviance(&m).unwrap(), path_deviance(&scaled).unwrap());
        prop_assert_eq!(fourth_point_condition(&m), fourth_point_condition(&scaled));
        prop_assert_eq!(three_point_condition(&m), three_point_condition(&scaled));
    }

    #[test]
    fn tree_verdict_tracks_fourth_point_under_tie_breaking(m in any_space(8)) {
        let v = recognize(&m);
        prop_assert!(v.cross_check.consistent());
        if v.tie_breaking {
            prop_assert_eq!(v.is_spanning_tree_metric, v.fourth_point.holds);
        }
    }

    #[test]
    fn three_point_with_distinct_distances_gives_acyclic_graph(n in 2usize..10, seed in any::<u64>()) {
        let m = space("l1", n, seed, 1);
        prop_assume!(satisfies_tie_breaking(&m));
        prop_assert!(three_point_condition(&m).holds);
        let g = basic_geodesic_graph(&m);
        prop_assert!(g.is_tree());
        let path = recognize_path(&m).expect("a path");
        prop_assert!(path.is_path());
        prop_assert_eq!(path, g);
    }

    #[test]
    fn tours_double_the_tree(n in 3usize..9, seed in any::<u64>()) {
        let generated = generate(&GeneratorSpec::new("tree", n, seed)).unwrap();
        let m = generated.space;
        let tree = mst(&WeightedGraph::complete(&m)).unwrap().tree;
        prop_assert_eq!(Some(&tree), generated.tree.as_ref());
        prop_assert_eq!(brute_force_tsp(&m).unwrap(), tree.total_weight() * r(2, 1));
    }

    #[test]
    fn formats_round_trip(m in any_space(8)) {
        let formats = FormatRegistry::builtin();
        for name in ["csv", "lower", "json"] {
            let format = formats.get(name).unwrap();
            let raw = format.parse(&format.write(&m).unwrap()).unwrap();
            let back = validate_metric(raw.rows, raw.labels).unwrap();
            prop_assert_eq!(&back, &m, "format {}", name);
        }
    }

    #[test]
    fn tie_breaking_ignores_relabelling(m in any_space(8), rot in 0usize..8) {
        let n = m.n();
        let order: Vec<usize> = (0..n).map(|i| (i + rot) % n).collect();
        let a = check_tie_breaking(&m);
        let b = check_tie_breaking(&m.permuted(&order));
        prop_assert_eq!(a.holds, b.holds);
        prop_assert_eq!(a.collision_count, b.collision_count);
    }

    #[test]
    fn intervals_hold_endpoints_and_are_symmetric(m in any_space(8)) {
        for x in 0..m.n() {
            prop_assert!(metric_interval(&m, x, x).is_err());
            for y in x + 1..m.n() {
                let i = metric_interval(&m, x, y).unwrap();
                prop_assert!(i.contains(x) && i.contains(y));
                prop_assert_eq!(&i, &metric_interval(&m, y, x).unwrap());
            }
        }
    }
}

#[test]
fn every_kind_is_reproducible() {
    for kind in KINDS {
        assert_eq!(space(kind, 7, 42, 2), space(kind, 7, 42, 2), "{kind}");
        assert_ne!(space(kind, 7, 42, 2), space(kind, 7, 43, 2), "{kind}");
    }
}

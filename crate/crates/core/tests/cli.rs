use serde_json::Value;
use spanmetric::cli::{run, Outcome, EXIT_FAILS, EXIT_HOLDS, EXIT_USAGE};

const PATH_CSV: &str = ".,a,b,c\na,0,1,3\nb,1,0,2\nc,3,2,0\n";
const TRIANGLE_CSV: &str = ".,x,y,z\nx,0,1,1\ny,1,0,1\nz,1,1,0\n";
const CYCLE_LOWER: &str = "1\n2 1\n3 2 1\n4 1 2 1\n";

fn spanmetric(args: &[&str], stdin: &str) -> Outcome {
    let mut argv = vec!["spanmetric"];
    argv.extend_from_slice(args);
    run(argv, &mut stdin.as_bytes())
}

fn json(outcome: &Outcome) -> Value {
    serde_json::from_str(&outcome.stdout).unwrap_or_else(|e| panic!("{e}: {}", outcome.stdout))
}

#[test]
fn analyze_path_metric() {
    let out = spanmetric(&["analyze"], PATH_CSV);
    assert_eq!(out.code, EXIT_HOLDS, "{}", out.stderr);
    let v = json(&out);
    assert_eq!(v["rho"], "0/1");
    assert_eq!(v["is_spanning_tree_metric"], true);
    assert_eq!(v["is_spanning_path_metric"], true);
    assert_eq!(v["realizing_edges"][0]["weight"], "1/1");
    assert!(v.get("timings_ms").is_none());
}

#[test]
fn analyze_uniform_triangle() {
    let out = spanmetric(&["analyze"], TRIANGLE_CSV);
    assert_eq!(out.code, EXIT_FAILS);
    let v = json(&out);
    assert_eq!(v["rho"], "1/6");
    assert_eq!(v["rho_decimal"], "0.166666666667");
    assert_eq!(v["fourth_point"]["holds"], false);
    assert_eq!(v["hyperbolicity"], "0/1");
}

#[test]
fn analyze_four_cycle_from_lower_triangle() {
    let out = spanmetric(&["analyze", "--format", "lower"], CYCLE_LOWER);
    assert_eq!(out.code, EXIT_FAILS);
    let v = json(&out);
    assert_eq!(v["fourth_point"]["holds"], true);
    assert_eq!(v["tie_breaking"]["holds"], false);
    assert_eq!(v["basic_graph_edge_count"], 4);
    assert_eq!(v["hyperbolicity"], "1/1");
}

#[test]
fn mst_dot_golden() {
    let out = spanmetric(&["mst", "--out", "dot"], PATH_CSV);
    assert_eq!(out.code, EXIT_HOLDS);
    assert_eq!(out.stdout, "graph { a -- b [label=\"1\"]; b -- c [label=\"2\"]; }\n");
}

#[test]
fn basic_graph_of_cycle_is_not_a_tree() {
    let out = spanmetric(&["basic-graph", "--format", "lower"], CYCLE_LOWER);
    assert_eq!(out.code, EXIT_FAILS);
    assert_eq!(json(&out)["edges"].as_array().unwrap().len(), 4);
}

#[test]
fn path_check_and_roundabout() {
    let out = spanmetric(&["path-check"], PATH_CSV);
    assert_eq!(out.code, EXIT_HOLDS);
    assert_eq!(json(&out)["order"], serde_json::json!(["a", "b", "c"]));

    let out = spanmetric(&["path-check"], TRIANGLE_CSV);
    assert_eq!(out.code, EXIT_FAILS);
    assert_eq!(json(&out)["three_point_witness"], serde_json::json!(["x", "y", "z"]));

    let out = spanmetric(&["roundabout"], TRIANGLE_CSV);
    assert_eq!(out.code, EXIT_FAILS);
    assert_eq!(json(&out)["rho"], "1/6");
}

#[test]
fn validate_reports_triangle_violation() {
    let out = spanmetric(&["validate"], ".,a,b,c\na,0,1,5\nb,1,0,1\nc,5,1,0\n");
    assert_eq!(out.code, EXIT_FAILS);
    let v = json(&out);
    assert_eq!(v["metric_valid"], false);
    assert_eq!(v["violation"]["kind"], "triangle");
}

#[test]
fn input_errors_exit_two() {
    let ragged = spanmetric(&["analyze"], ".,a,b\na,0,1\nb,1\n");
    assert_eq!(ragged.code, EXIT_USAGE);
    assert!(ragged.stdout.is_empty());
    assert!(!ragged.stderr.is_empty());

    assert_eq!(spanmetric(&["frobnicate"], "").code, EXIT_USAGE);
    assert_eq!(spanmetric(&["analyze", "--format", "xml"], PATH_CSV).code, EXIT_USAGE);
    assert_eq!(spanmetric(&["analyze", "/no/such/file.csv"], "").code, EXIT_USAGE);
    assert_eq!(spanmetric(&["analyze", "--jobs", "0"], PATH_CSV).code, EXIT_USAGE);
    assert_eq!(spanmetric(&["analyze"], ".,a,b\na,0,-1\nb,-1,0\n").code, EXIT_USAGE);
}

#[test]
fn help_exits_zero() {
    let out = spanmetric(&["--help"], "");
    assert_eq!(out.code, EXIT_HOLDS);
    assert!(out.stdout.contains("analyze"));
}

#[test]
fn output_is_deterministic_across_runs_and_widths() {
    let generated = spanmetric(&["generate", "--kind", "perturbed-tree", "-n", "9", "--seed", "5"], "");
    assert_eq!(generated.code, EXIT_HOLDS);
    let input = generated.stdout;
    for cmd in ["analyze", "mst", "basic-graph", "roundabout", "path-check"] {
        let first = spanmetric(&[cmd], &input);
        for jobs in ["1", "1", "3", "8"] {
            assert_eq!(spanmetric(&[cmd, "--jobs", jobs], &input), first, "{cmd} --jobs {jobs}");
        }
    }
}

#[test]
fn verify_agrees_with_plain_analyze() {
    for (kind, seed) in [("tree", 1), ("l1", 2), ("euclidean", 3), ("perturbed-tree", 4)] {
        let input = spanmetric(&["generate", "--kind", kind, "-n", "7", "--seed", &seed.to_string()], "").stdout;
        let plain = json(&spanmetric(&["analyze"], &input));
        let verified = spanmetric(&["analyze", "--verify"], &input);
        let mut v = json(&verified);
        assert_eq!(v["verification"]["all_passed"], true, "{kind}: {}", verified.stdout);
        v.as_object_mut().unwrap().remove("verification");
        assert_eq!(v, plain, "{kind}");
    }
}

#[test]
fn timings_are_opt_in() {
    let v = json(&spanmetric(&["analyze", "--timings"], PATH_CSV));
    assert!(v["timings_ms"]["fourth_point"].is_number());
}

#[test]
fn generate_round_trips_through_every_format() {
    for format in ["csv", "lower", "json"] {
        let text = spanmetric(&["generate", "-n", "6", "--seed", "9", "--format", format], "").stdout;
        let out = spanmetric(&["mst", "--format", format], &text);
        assert_eq!(out.code, EXIT_HOLDS, "{format}: {}", out.stderr);
    }
}

#[test]
fn reads_named_files() {
    let dir = std::env::temp_dir().join(format!("spanmetric-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("path.csv");
    std::fs::write(&path, PATH_CSV).unwrap();
    let out = spanmetric(&["roundabout", path.to_str().unwrap()], "");
    std::fs::remove_dir_all(&dir).ok();
    assert_eq!(out.code, EXIT_HOLDS);
}

//! Seeded metric generators, selected by name through [`GeneratorRegistry`].
//!
//! Built-in kinds:
//!
//! * `tree` – path-sum metric of a uniform random labelled tree (Prüfer
//!   sequence) with pairwise distinct rational edge weights.
//! * `l1` – random rational points under the L1 norm.
//! * `euclidean` – random rational points; each distance is the square root
//!   rounded down to [`EUCLIDEAN_DENOMINATOR`]ths. The rounded matrix is what
//!   gets validated and returned.
//! * `perturbed-tree` – a `tree` metric with every distance increased by a
//!   seeded amount in `[magnitude/2, magnitude]`.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::prufer;
use crate::error::{Error, Result};
use crate::graph::{Edge, WeightedGraph};
use crate::metric::{validate_metric, FiniteMetricSpace};
use crate::rational::ratio;

/// Grid resolution for random rationals drawn from a range.
pub const DRAW_STEPS: i64 = 1_000_000;
pub const EUCLIDEAN_DENOMINATOR: i64 = 1_000_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorParams {
    /// Edge weights (tree kinds) or coordinates (point kinds) are drawn from
    /// this closed interval.
    pub weight_min: BigRational,
    pub weight_max: BigRational,
    pub dimension: usize,
    /// Perturbation size for `perturbed-tree`.
    pub magnitude: BigRational,
    /// Attempts before a rejection-sampling generator gives up.
    pub max_attempts: usize,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        GeneratorParams {
            weight_min: ratio(1, 1),
            weight_max: ratio(10, 1),
            dimension: 2,
            magnitude: ratio(1, 10),
            max_attempts: 32,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    pub kind: String,
    pub n: usize,
    pub seed: u64,
    pub params: GeneratorParams,
}

impl GeneratorSpec {
    pub fn new(kind: &str, n: usize, seed: u64) -> GeneratorSpec {
        GeneratorSpec {
            kind: kind.to_string(),
            n,
            seed,
            params: GeneratorParams::default(),
        }
    }

    fn validate(&self) -> Result<()> {
        let p = &self.params;
        let bad = |msg: String| Err(Error::InvalidGenerator(msg));
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        if !p.weight_min.is_positive() || p.weight_max < p.weight_min {
            return bad(format!(
                "weight range [{}, {}] must be positive and non-empty",
                p.weight_min, p.weight_max
            ));
        }
        if p.dimension == 0 {
            return bad("dimension must be at least 1".into());
        }
        if !p.magnitude.is_positive() {
            return bad("perturbation magnitude must be positive".into());
        }
        if p.max_attempts == 0 {
            return bad("max_attempts must be at least 1".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Generated {
    pub space: FiniteMetricSpace,
    /// The tree whose path sums produced the metric, for tree kinds.
    pub tree: Option<WeightedGraph>,
}

pub trait MetricGenerator: Send + Sync {
    fn name(&self) -> &'static str;

    fn summary(&self) -> &'static str;

    fn generate(&self, spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> Result<Generated>;
}

pub struct GeneratorRegistry {
    entries: Vec<Box<dyn MetricGenerator>>,
}

impl GeneratorRegistry {
    pub fn empty() -> GeneratorRegistry {
        GeneratorRegistry { entries: Vec::new() }
    }

    pub fn builtin() -> GeneratorRegistry {
        let mut r = GeneratorRegistry::empty();
        r.register(Box::new(TreeGenerator));
        r.register(Box::new(L1Generator));
        r.register(Box::new(EuclideanGenerator));
        r.register(Box::new(PerturbedTreeGenerator));
        r
    }

    /// Adds a generator, replacing any existing one with the same name.
    pub fn register(&mut self, generator: Box<dyn MetricGenerator>) {
        self.entries.retain(|g| g.name() != generator.name());
        self.entries.push(generator);
    }

    pub fn get(&self, name: &str) -> Result<&dyn MetricGenerator> {
        self.entries
            .iter()
            .find(|g| g.name() == name)
            .map(|g| g.as_ref())
            .ok_or_else(|| Error::Unknown {
                registry: "generator",
                name: name.to_string(),
                known: self.names().join(", "),
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|g| g.name()).collect()
    }

    pub fn generate(&self, spec: &GeneratorSpec) -> Result<Generated> {
        spec.validate()?;
        let generator = self.get(&spec.kind)?;
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        generator.generate(spec, &mut rng)
    }
}

/// Generates with the built-in registry.
pub fn generate(spec: &GeneratorSpec) -> Result<Generated> {
    GeneratorRegistry::builtin().generate(spec)
}

pub fn point_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

fn draw<R: Rng + ?Sized>(rng: &mut R, lo: &BigRational, hi: &BigRational) -> BigRational {
    let step = rng.random_range(0..=DRAW_STEPS);
    lo + (hi - lo) * ratio(step, DRAW_STEPS)
}

fn distinct_weights<R: Rng + ?Sized>(rng: &mut R, count: usize, p: &GeneratorParams) -> Result<Vec<BigRational>> {
    let available = if p.weight_min == p.weight_max { 1 } else { DRAW_STEPS as usize + 1 };
    if count > available / 2 {
        return Err(Error::InvalidGenerator(format!(
            "weight range too narrow for {count} distinct weights"
        )));
    }
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let w = draw(rng, &p.weight_min, &p.weight_max);
        if seen.insert(w.clone()) {
            out.push(w);
        }
    }
    Ok(out)
}

/// Path-sum matrix of a weighted tree.
pub fn tree_metric(tree: &WeightedGraph) -> Vec<Vec<BigRational>> {
    let n = tree.n();
    let adj = tree.adjacency();
    let mut rows = vec![vec![BigRational::zero(); n]; n];
    for (s, row) in rows.iter_mut().enumerate() {
        let mut stack = vec![(s, usize::MAX)];
        while let Some((u, parent)) = stack.pop() {
            for &(v, w) in &adj[u] {
                if v != parent {
                    row[v] = &row[u] + w;
                    stack.push((v, u));
                }
            }
        }
    }
    rows
}

fn random_weighted_tree<R: Rng + ?Sized>(spec: &GeneratorSpec, rng: &mut R) -> Result<WeightedGraph> {
    let n = spec.n;
    let pairs = if n >= 2 { prufer::random_tree(n, rng) } else { Vec::new() };
    let weights = distinct_weights(rng, pairs.len(), &spec.params)?;
    let edges = pairs
        .into_iter()
        .zip(weights)
        .map(|((u, v), w)| Edge::new(u, v, w))
        .collect();
    WeightedGraph::new(point_labels(n), edges)
}

struct TreeGenerator;

impl MetricGenerator for TreeGenerator {
    fn name(&self) -> &'static str {
        "tree"
    }

    fn summary(&self) -> &'static str {
        "path-sum metric of a uniform random labelled tree"
    }

    fn generate(&self, spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> Result<Generated> {
        let tree = random_weighted_tree(spec, rng)?;
        let space = validate_metric(tree_metric(&tree), tree.labels().to_vec())?;
        Ok(Generated {
            space,
            tree: Some(tree),
        })
    }
}

fn random_points<R: Rng + ?Sized>(spec: &GeneratorSpec, rng: &mut R) -> Vec<Vec<BigRational>> {
    let p = &spec.params;
    let mut seen = HashSet::new();
    let mut points = Vec::with_capacity(spec.n);
    while points.len() < spec.n {
        let pt: Vec<BigRational> = (0..p.dimension)
            .map(|_| draw(rng, &p.weight_min, &p.weight_max))
            .collect();
        if seen.insert(pt.clone()) {
            points.push(pt);
        }
    }
    points
}

fn pairwise<F>(n: usize, mut f: F) -> Vec<Vec<BigRational>>
where
    F: FnMut(usize, usize) -> BigRational,
{
    let mut rows = vec![vec![BigRational::zero(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = f(i, j);
            rows[j][i] = v.clone();
            rows[i][j] = v;
        }
    }
    rows
}

/// Retries `attempt` until it yields a valid metric or the budget runs out.
fn rejection_sample<R, F>(spec: &GeneratorSpec, rng: &mut R, mut attempt: F) -> Result<FiniteMetricSpace>
where
    R: Rng + ?Sized,
    F: FnMut(&mut R) -> Option<Vec<Vec<BigRational>>>,
{
    for _ in 0..spec.params.max_attempts {
        let Some(rows) = attempt(rng) else { continue };
        match validate_metric(rows, point_labels(spec.n)) {
            Ok(space) => return Ok(space),
            Err(Error::NotMetric(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::RetryBudgetExhausted {
        kind: spec.kind.clone(),
        attempts: spec.params.max_attempts,
    })
}

struct L1Generator;

impl MetricGenerator for L1Generator {
    fn name(&self) -> &'static str {
        "l1"
    }

    fn summary(&self) -> &'static str {
        "random rational points under the L1 norm"
    }

    fn generate(&self, spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> Result<Generated> {
        let points = random_points(spec, rng);
        let rows = pairwise(spec.n, |i, j| {
            points[i]
                .iter()
                .zip(&points[j])
                .fold(BigRational::zero(), |acc, (a, b)| acc + (a - b).abs())
        });
        let space = validate_metric(rows, point_labels(spec.n))?;
        Ok(Generated { space, tree: None })
    }
}

struct EuclideanGenerator;

/// `floor(sqrt(q) * D) / D` for a non-negative rational `q`.
fn sqrt_floor(q: &BigRational) -> BigRational {
    let den = BigInt::from(EUCLIDEAN_DENOMINATOR);
    let scaled = (q * BigRational::from_integer(&den * &den)).floor().to_integer();
    BigRational::new(scaled.sqrt(), den)
}

impl MetricGenerator for EuclideanGenerator {
    fn name(&self) -> &'static str {
        "euclidean"
    }

    fn summary(&self) -> &'static str {
        "random rational points, Euclidean distances rounded down to 1e-9"
    }

    fn generate(&self, spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> Result<Generated> {
        let space = rejection_sample(spec, rng, |rng| {
            let points = random_points(spec, rng);
            let rows = pairwise(spec.n, |i, j| {
                let sq = points[i]
                    .iter()
                    .zip(&points[j])
                    .fold(BigRational::zero(), |acc, (a, b)| {
                        let diff = a - b;
                        acc + &diff * &diff
                    });
                sqrt_floor(&sq)
            });
            Some(rows)
        })?;
        Ok(Generated { space, tree: None })
    }
}

struct PerturbedTreeGenerator;

impl MetricGenerator for PerturbedTreeGenerator {
    fn name(&self) -> &'static str {
        "perturbed-tree"
    }

    fn summary(&self) -> &'static str {
        "tree metric with every distance raised by a seeded amount in [magnitude/2, magnitude]"
    }

    fn generate(&self, spec: &GeneratorSpec, rng: &mut ChaCha8Rng) -> Result<Generated> {
        let tree = random_weighted_tree(spec, rng)?;
        let base = tree_metric(&tree);
        let magnitude = &spec.params.magnitude;
        let half = magnitude / BigRational::from_integer(2.into());
        let space = rejection_sample(spec, rng, |rng| {
            Some(pairwise(spec.n, |i, j| &base[i][j] + draw(rng, &half, magnitude)))
        })?;
        Ok(Generated {
            space,
            tree: Some(tree),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_lookup() {
        let r = GeneratorRegistry::builtin();
        assert_eq!(r.names(), vec!["tree", "l1", "euclidean", "perturbed-tree"]);
        assert!(matches!(r.get("nope"), Err(Error::Unknown { .. })));
    }

    #[test]
    fn same_seed_same_matrix() {
        for kind in ["tree", "l1", "euclidean", "perturbed-tree"] {
            let a = generate(&GeneratorSpec::new(kind, 5, 42)).unwrap();
            let b = generate(&GeneratorSpec::new(kind, 5, 42)).unwrap();
            assert_eq!(a, b, "{kind}");
            let c = generate(&GeneratorSpec::new(kind, 5, 43)).unwrap();
            assert_ne!(a.space, c.space, "{kind}");
        }
    }

    #[test]
    fn euclidean_is_a_certified_metric() {
        let g = generate(&GeneratorSpec {
            params: GeneratorParams {
                dimension: 2,
                ..GeneratorParams::default()
            },
            ..GeneratorSpec::new("euclidean", 4, 1)
        })
        .unwrap();
        assert_eq!(g.space.n(), 4);
        assert!(g.tree.is_none());
    }

    #[test]
    fn sqrt_rounds_down() {
        assert_eq!(sqrt_floor(&ratio(4, 1)), ratio(2, 1));
        let r2 = sqrt_floor(&ratio(2, 1));
        assert_eq!(r2, ratio(1_414_213_562, 1_000_000_000));
        assert!(&r2 * &r2 <= ratio(2, 1));
    }

    #[test]
    fn tree_kind_returns_its_tree() {
        let g = generate(&GeneratorSpec::new("tree", 6, 3)).unwrap();
        let tree = g.tree.unwrap();
        assert_eq!(tree.edge_count(), 5);
        assert!(tree.is_tree());
        let mut weights: Vec<_> = tree.edges().iter().map(|e| e.weight.clone()).collect();
        weights.sort();
        weights.dedup();
        assert_eq!(weights.len(), 5);
    }

    #[test]
    fn invalid_specs() {
        assert!(generate(&GeneratorSpec::new("tree", 0, 1)).is_err());
        let mut s = GeneratorSpec::new("tree", 5, 1);
        s.params.weight_min = ratio(0, 1);
        assert!(matches!(generate(&s), Err(Error::InvalidGenerator(_))));
        let mut s = GeneratorSpec::new("tree", 5, 1);
        s.params.weight_max = s.params.weight_min.clone();
        assert!(matches!(generate(&s), Err(Error::InvalidGenerator(_))));
        assert!(generate(&GeneratorSpec::new("tree", 1, 1)).is_ok());
    }

    #[test]
    fn retry_budget_is_reported() {
        // the first draw never validates, so a one-attempt budget is exhausted
        let spec = GeneratorSpec {
            params: GeneratorParams {
                max_attempts: 1,
                ..GeneratorParams::default()
            },
            ..GeneratorSpec::new("euclidean", 3, 9)
        };
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let r = rejection_sample(&spec, &mut rng, |_| {
            Some(vec![
                vec![ratio(0, 1), ratio(1, 1), ratio(5, 1)],
                vec![ratio(1, 1), ratio(0, 1), ratio(1, 1)],
                vec![ratio(5, 1), ratio(1, 1), ratio(0, 1)],
            ])
        });
        assert!(matches!(r, Err(Error::RetryBudgetExhausted { attempts: 1, .. })));
    }
}

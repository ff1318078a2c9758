//! Edge-reinforced random walk: simulation, exact sequential path
//! probabilities, and posterior sampling.
//!
//! The walk starts at `v0` with edge weights `a`; each step picks an
//! incident edge with probability proportional to its current weight
//! (loops enter the total once). A traversed non-loop edge then gains 1,
//! a traversed loop gains 2, so the weight total at any vertex grows by
//! exactly 2 between consecutive departures. The path law of this walk is
//! exactly the reversible-chain mixture under the conjugate prior with the
//! same parameters, which is what makes it a posterior sampler.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{EdgeId, Graph, VertexId};
use crate::logval::LogValue;
use crate::num::{cast, cast_u64, Scalar};
use crate::path::Path;
use crate::prior::PriorParams;

#[derive(Debug, Error, PartialEq)]
pub enum ErrwError {
    #[error("path starts at `{got}`, parameters require `{expected}`")]
    WrongStart { expected: String, got: String },
}

/// Deterministic pseudo-random stream with an explicit 64-bit seed,
/// splittable into independent substreams. The same seed always yields the
/// same trajectory, on any platform.
#[derive(Clone, Debug)]
pub struct RandomSource {
    seed: u64,
    stream: u64,
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn from_seed(seed: u64) -> Self {
        Self::with_stream(seed, 0)
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        RandomSource { seed, stream, rng }
    }

    /// An independent stream derived from the same seed; substreams do not
    /// depend on how much of this source has been consumed.
    pub fn substream(&self, index: u64) -> Self {
        Self::with_stream(self.seed, index)
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream(&self) -> u64 {
        self.stream
    }

    pub(crate) fn unit(&mut self) -> f64 {
        self.rng.random::<f64>()
    }
}

/// Mutable state of a single walker: current vertex, reinforced edge
/// weights, and per-vertex weight totals (loops counted once).
#[derive(Clone, Debug)]
pub struct ErrwState<T> {
    current: VertexId,
    weights: Vec<T>,
    vertex_totals: Vec<T>,
    step: u64,
}

impl<T: Scalar> ErrwState<T> {
    pub fn new(g: &Graph, params: &PriorParams<T>) -> Self {
        ErrwState {
            current: params.v0(),
            weights: params.edge_weights().to_vec(),
            vertex_totals: g.vertices().map(|v| params.vertex_weight(v)).collect(),
            step: 0,
        }
    }

    pub fn current(&self) -> VertexId {
        self.current
    }

    pub fn step_count(&self) -> u64 {
        self.step
    }

    pub fn edge_weight(&self, e: EdgeId) -> T {
        self.weights[e.index()]
    }

    /// Current weight total at `v` (the sampling denominator there).
    pub fn vertex_total(&self, v: VertexId) -> T {
        self.vertex_totals[v.index()]
    }

    /// Reinforcement applied after a traversal: +1 on a non-loop edge
    /// (adding 1 to each endpoint total), +2 on a loop.
    fn reinforce(&mut self, g: &Graph, e: EdgeId) {
        let edge = g.edge(e);
        if edge.is_loop() {
            self.weights[e.index()] += cast::<T>(2.0);
            self.vertex_totals[edge.endpoints().0.index()] += cast::<T>(2.0);
        } else {
            self.weights[e.index()] += T::one();
            let (u, v) = edge.endpoints();
            self.vertex_totals[u.index()] += T::one();
            self.vertex_totals[v.index()] += T::one();
        }
    }

    /// Samples one step; reinforcement applies after the move, so the first
    /// step uses the initial weights.
    pub fn step_sample(&mut self, g: &Graph, rng: &mut RandomSource) -> EdgeId {
        let at = self.current;
        let total = self.vertex_totals[at.index()];
        let target = cast::<T>(rng.unit()) * total;
        let adjacency = g.adjacency(at);
        let mut acc = T::zero();
        let mut chosen = *adjacency
            .last()
            .expect("connected graph has incident edges");
        for &e in adjacency {
            acc += self.weights[e.index()];
            if target < acc {
                chosen = e;
                break;
            }
        }
        self.advance(g, chosen);
        chosen
    }

    /// Follows a prescribed edge, returning the step's probability factors
    /// (chosen weight, vertex total) before reinforcement.
    pub fn step_follow(&mut self, g: &Graph, e: EdgeId) -> (T, T) {
        let at = self.current;
        debug_assert!(g.edge(e).is_incident(at));
        let factors = (self.weights[e.index()], self.vertex_totals[at.index()]);
        self.advance(g, e);
        factors
    }

    fn advance(&mut self, g: &Graph, e: EdgeId) {
        self.current = g.edge(e).other_endpoint(self.current);
        self.reinforce(g, e);
        self.step += 1;
    }
}

/// Samples a reinforced walk of `n` steps starting at the parameter's v0.
pub fn errw_sample_path<T: Scalar>(
    g: &Graph,
    params: &PriorParams<T>,
    n: u64,
    rng: &mut RandomSource,
) -> Path {
    let mut state = ErrwState::new(g, params);
    let mut vertices = Vec::with_capacity(n as usize + 1);
    vertices.push(state.current());
    for _ in 0..n {
        state.step_sample(g, rng);
        vertices.push(state.current());
    }
    Path::new(g, vertices).expect("sampled walk is admissible")
}

/// Samples a walk of `n` steps and returns only the per-edge transition
/// counts (doubled for loops), which is all the posterior samplers need.
pub fn errw_walk_edge_counts<T: Scalar>(
    g: &Graph,
    params: &PriorParams<T>,
    n: u64,
    rng: &mut RandomSource,
) -> Vec<u64> {
    let mut state = ErrwState::new(g, params);
    let mut counts = vec![0u64; g.edge_count()];
    for _ in 0..n {
        let e = state.step_sample(g, rng);
        counts[e.index()] += if g.edge(e).is_loop() { 2 } else { 1 };
    }
    counts
}

/// Exact probability that the reinforced walk traverses `p`, by sequential
/// replay of the weight evolution.
///
/// The per-step log factors are accumulated in sorted order: equivalent
/// paths produce the same factor multiset, so this keeps their
/// probabilities identical rather than merely close.
pub fn errw_path_log_prob<T: Scalar>(
    g: &Graph,
    params: &PriorParams<T>,
    p: &Path,
) -> Result<LogValue<T>, ErrwError> {
    if p.start() != params.v0() {
        return Err(ErrwError::WrongStart {
            expected: g.label(params.v0()).to_string(),
            got: g.label(p.start()).to_string(),
        });
    }
    let mut state = ErrwState::new(g, params);
    let mut terms = Vec::with_capacity(2 * p.len());
    for &e in p.steps() {
        let (weight, total) = state.step_follow(g, e);
        terms.push(weight.ln());
        terms.push(-total.ln());
    }
    terms.sort_by(|a, b| a.partial_cmp(b).expect("finite log factors"));
    Ok(LogValue::from_ln(terms.into_iter().sum()))
}

/// Per-walker edge transition counts from independent reinforced walks;
/// the empirical law of `k_e/n` across walkers approximates the prior (or
/// posterior) distribution of the edge weight `x_e`.
#[derive(Clone, Debug)]
pub struct FrequencySamples {
    steps: u64,
    per_walker: Vec<Vec<u64>>,
}

impl FrequencySamples {
    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn walker_count(&self) -> usize {
        self.per_walker.len()
    }

    /// Raw edge counts of one walker (loops doubled).
    pub fn walker_counts(&self, walker: usize) -> &[u64] {
        &self.per_walker[walker]
    }

    /// The `k_e/n` samples for one edge across all walkers.
    pub fn frequencies<T: Scalar>(&self, e: EdgeId) -> Vec<T> {
        let n = cast_u64::<T>(self.steps);
        self.per_walker
            .iter()
            .map(|counts| cast_u64::<T>(counts[e.index()]) / n)
            .collect()
    }

    pub fn mean_frequency<T: Scalar>(&self, e: EdgeId) -> T {
        let samples = self.frequencies::<T>(e);
        samples.iter().copied().sum::<T>() / cast_u64::<T>(samples.len() as u64)
    }

    /// Standard error of the mean frequency for one edge.
    pub fn frequency_std_error<T: Scalar>(&self, e: EdgeId) -> T {
        let samples = self.frequencies::<T>(e);
        let m = cast_u64::<T>(samples.len() as u64);
        let mean = samples.iter().copied().sum::<T>() / m;
        let var = samples.iter().map(|&s| (s - mean) * (s - mean)).sum::<T>() / (m - T::one());
        (var / m).sqrt()
    }

    /// Empirical probability that `k_e/n` lands in `[lo, hi]`.
    pub fn interval_probability<T: Scalar>(&self, e: EdgeId, lo: T, hi: T) -> T {
        let samples = self.frequencies::<T>(e);
        let hits = samples.iter().filter(|&&s| s >= lo && s <= hi).count();
        cast_u64::<T>(hits as u64) / cast_u64::<T>(samples.len() as u64)
    }

    /// One walker's stationary-distribution estimate
    /// `nu(v) = (1/2) sum_{e at v} k_e / n`, loops entering once.
    pub fn stationary_for_walker<T: Scalar>(&self, g: &Graph, walker: usize) -> Vec<T> {
        let counts = &self.per_walker[walker];
        let denom = cast::<T>(2.0) * cast_u64::<T>(self.steps);
        g.vertices()
            .map(|v| {
                let slots: u64 = g.adjacency(v).iter().map(|&e| counts[e.index()]).sum();
                cast_u64::<T>(slots) / denom
            })
            .collect()
    }

    /// Integer form of the per-walker stationary identity: the vertex count
    /// sums and their expected total `2n`. The sums always add to exactly
    /// `2n` because every step contributes two visit slots.
    pub fn stationary_slots(&self, g: &Graph, walker: usize) -> (Vec<u64>, u64) {
        let counts = &self.per_walker[walker];
        let sums: Vec<u64> = g
            .vertices()
            .map(|v| g.adjacency(v).iter().map(|&e| counts[e.index()]).sum())
            .collect();
        (sums, 2 * self.steps)
    }
}

/// Runs `walkers` independent reinforced walks of `steps` steps each and
/// collects their edge counts. Walker `i` draws from substream `i + 1` of
/// the master source, so results are identical no matter how the walkers
/// are scheduled across threads.
pub fn posterior_edge_frequency_samples<T: Scalar>(
    g: &Graph,
    params: &PriorParams<T>,
    steps: u64,
    walkers: u64,
    rng: &RandomSource,
) -> FrequencySamples {
    let per_walker: Vec<Vec<u64>> = (0..walkers)
        .into_par_iter()
        .map(|i| {
            let mut sub = rng.substream(i + 1);
            errw_walk_edge_counts(g, params, steps, &mut sub)
        })
        .collect();
    FrequencySamples { steps, per_walker }
}

/// Posterior-mean estimate of the stationary distribution: the average of
/// `(1/2) sum_{e at v} k_e/n` across walkers.
pub fn estimate_stationary<T: Scalar>(
    g: &Graph,
    params: &PriorParams<T>,
    steps: u64,
    walkers: u64,
    rng: &RandomSource,
) -> Vec<T> {
    let samples = posterior_edge_frequency_samples(g, params, steps, walkers, rng);
    let mut means = vec![T::zero(); g.vertex_count()];
    for w in 0..samples.walker_count() {
        for (m, s) in means
            .iter_mut()
            .zip(samples.stationary_for_walker::<T>(g, w))
        {
            *m += s;
        }
    }
    let count = cast_u64::<T>(walkers);
    for m in &mut means {
        *m /= count;
    }
    means
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path::TransitionCounts;

    fn triangle() -> Graph {
        Graph::from_labeled_edges(&["1", "2", "3"], &[("1", "2"), ("2", "3"), ("1", "3")]).unwrap()
    }

    fn triangle_with_loops() -> Graph {
        Graph::complete_with_loops(&["1", "2", "3"]).unwrap()
    }

    #[test]
    fn zero_steps_yields_the_start_vertex() {
        let g = triangle();
        let params = PriorParams::constant(&g, VertexId::new(0), 1.0).unwrap();
        let mut rng = RandomSource::from_seed(1);
        let p = errw_sample_path(&g, &params, 0, &mut rng);
        assert_eq!(p.vertices(), &[VertexId::new(0)]);
    }

    #[test]
    fn first_step_probability_is_half() {
        // P(1 -> 2) with equal weights on two incident edges
        let g = triangle();
        let params = PriorParams::constant(&g, VertexId::new(0), 1.0_f64).unwrap();
        let p = Path::from_labels(&g, &["1", "2"]).unwrap();
        let lp = errw_path_log_prob(&g, &params, &p).unwrap();
        assert!((lp.value() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn two_step_back_and_forth_is_one_third() {
        // (1/2) * (2/3): edge weight 2 after reinforcement, total 3 at vertex 2
        let g = triangle();
        let params = PriorParams::constant(&g, VertexId::new(0), 1.0_f64).unwrap();
        let p = Path::from_labels(&g, &["1", "2", "1"]).unwrap();
        let lp = errw_path_log_prob(&g, &params, &p).unwrap();
        assert!((lp.value() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn loop_twice_is_one_fifth() {
        // (1/3) * (3/5): loop weight 1 -> 3, vertex total 3 -> 5
        let g = triangle_with_loops();
        let params = PriorParams::constant(&g, VertexId::new(0), 1.0_f64).unwrap();
        let p = Path::from_labels(&g, &["1", "1", "1"]).unwrap();
        let lp = errw_path_log_prob(&g, &params, &p).unwrap();
        assert!((lp.value() - 0.2).abs() < 1e-15);
    }

    #[test]
    fn wrong_start_is_rejected() {
        let g = triangle();
        let params = PriorParams::constant(&g, VertexId::new(0), 1.0_f64).unwrap();
        let p = Path::from_labels(&g, &["2", "1"]).unwrap();
        assert_eq!(
            errw_path_log_prob(&g, &params, &p).unwrap_err(),
            ErrwError::WrongStart {
                expected: "1".to_string(),
                got: "2".to_string()
            }
        );
    }

    #[test]
    fn fixed_seed_reproduces_the_path() {
        let g = Graph::complete_with_loops(&["a", "c", "g", "t"]).unwrap();
        let params = PriorParams::constant(&g, VertexId::new(0), 1.0).unwrap();
        let p1 = errw_sample_path(&g, &params, 200, &mut RandomSource::from_seed(42));
        let p2 = errw_sample_path(&g, &params, 200, &mut RandomSource::from_seed(42));
        assert_eq!(p1, p2);
        let p3 = errw_sample_path(&g, &params, 200, &mut RandomSource::from_seed(43));
        assert_ne!(p1, p3);
    }

    #[test]
    fn substreams_do_not_depend_on_consumption() {
        let master = RandomSource::from_seed(9);
        let mut consumed = RandomSource::from_seed(9);
        for _ in 0..100 {
            consumed.unit();
        }
        let mut a = master.substream(3);
        let mut b = consumed.substream(3);
        for _ in 0..10 {
            assert_eq!(a.unit(), b.unit());
        }
    }

    /// Every traversal of the loop-expanded path gets the same factors, so
    /// path probabilities are preserved by the loop transform.
    #[test]
    fn loop_transform_preserves_path_probabilities() {
        use crate::graph::loop_transform;
        let g = triangle_with_loops();
        let params = PriorParams::new(
            &g,
            VertexId::new(0),
            vec![0.5_f64, 1.5, 2.0, 1.0, 3.0, 0.25],
        )
        .unwrap();
        let transform = loop_transform(&g);
        let params_t = PriorParams::new(
            &transform.graph,
            VertexId::new(0),
            params.edge_weights().to_vec(),
        )
        .unwrap();
        for labels in [
            vec!["1", "1", "2", "3", "1"],
            vec!["1", "2", "2", "3", "3", "1", "1"],
            vec!["1", "3", "2", "1", "1", "2"],
        ] {
            let p = Path::from_labels(&g, &labels).unwrap();
            // expand loop traversals into pendant round trips
            let mut expanded = vec![p.vertices()[0]];
            for (i, &e) in p.steps().iter().enumerate() {
                let from = p.vertices()[i];
                if g.edge(e).is_loop() {
                    let pendant = transform.pendant_vertex[e.index()].unwrap();
                    expanded.push(pendant);
                    expanded.push(from);
                } else {
                    expanded.push(p.vertices()[i + 1]);
                }
            }
            let p_t = Path::new(&transform.graph, expanded).unwrap();
            let lp = errw_path_log_prob(&g, &params, &p).unwrap().ln().unwrap();
            let lp_t = errw_path_log_prob(&transform.graph, &params_t, &p_t)
                .unwrap()
                .ln()
                .unwrap();
            assert!((lp - lp_t).abs() < 1e-12, "path {labels:?}: {lp} vs {lp_t}");
        }
    }

    /// Equivalent paths have the same factor multiset; with half-integer
    /// weights every factor is exact in binary, so the sequential replay
    /// must agree bitwise across each equivalence class.
    #[test]
    fn equivalent_paths_get_identical_probabilities() {
        use crate::path::enumerate_equivalent_paths;
        let g = triangle_with_loops();
        let params =
            PriorParams::new(&g, VertexId::new(0), vec![0.5, 1.0, 2.5, 1.5, 3.0, 2.0]).unwrap();
        for labels in [
            vec!["1", "1", "2", "1", "3", "1"],
            vec!["1", "2", "3", "1", "2", "2"],
        ] {
            let p = Path::from_labels(&g, &labels).unwrap();
            let reference = errw_path_log_prob(&g, &params, &p).unwrap();
            for q in enumerate_equivalent_paths(&g, &p, 12).unwrap() {
                let lq = errw_path_log_prob(&g, &params, &q).unwrap();
                assert_eq!(reference, lq, "path {labels:?} vs {:?}", q.vertices());
            }
        }
    }

    #[test]
    fn single_walker_single_step_hits_one_edge() {
        let g = triangle();
        let params = PriorParams::constant(&g, VertexId::new(0), 1.0).unwrap();
        let samples =
            posterior_edge_frequency_samples(&g, &params, 1, 1, &RandomSource::from_seed(5));
        let freqs: Vec<f64> = g
            .edges()
            .iter()
            .map(|e| samples.mean_frequency::<f64>(e.id()))
            .collect();
        assert_eq!(freqs.iter().filter(|&&f| f == 1.0).count(), 1);
        assert_eq!(freqs.iter().filter(|&&f| f == 0.0).count(), 2);
    }

    #[test]
    fn walker_counts_sum_to_steps() {
        let g = triangle_with_loops();
        let params = PriorParams::constant(&g, VertexId::new(1), 1.0).unwrap();
        let samples =
            posterior_edge_frequency_samples(&g, &params, 500, 8, &RandomSource::from_seed(17));
        for w in 0..8 {
            let counts = samples.walker_counts(w);
            let steps: u64 = g
                .edges()
                .iter()
                .map(|e| {
                    let k = counts[e.id().index()];
                    if e.is_loop() {
                        k / 2
                    } else {
                        k
                    }
                })
                .sum();
            assert_eq!(steps, 500);
            // integer identity behind "stationary estimates sum to one"
            let (sums, total) = samples.stationary_slots(&g, w);
            assert_eq!(sums.iter().sum::<u64>(), total);
        }
    }

    /// Independent oracle for the prior mean of each edge weight:
    /// Monte Carlo integration of `x_e * phi(x)` against the uniform
    /// measure on the simplex.
    fn prior_edge_means(g: &Graph, params: &PriorParams<f64>, samples: u64, seed: u64) -> Vec<f64> {
        use crate::path::SimplexPoint;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut sums = vec![0.0; g.edge_count()];
        let mut used = 0u64;
        for _ in 0..samples {
            let raw: Vec<f64> = (0..g.edge_count())
                .map(|_| -rng.random::<f64>().ln())
                .collect();
            let total: f64 = raw.iter().sum();
            let Ok(x) = SimplexPoint::new(g, raw.iter().map(|&r| r / total).collect()) else {
                continue;
            };
            let Ok(phi) = crate::prior::log_density(g, params, &x) else {
                continue;
            };
            let weight = phi.value();
            for (s, e) in sums.iter_mut().zip(g.edges()) {
                *s += weight * x.edge_weight(e.id());
            }
            used += 1;
        }
        sums.into_iter().map(|s| s / used as f64).collect()
    }

    /// The mixing measure is anchored at v0, so the limiting mean of
    /// `k_e/n` is not uniform across edges (the v0-incident edges keep
    /// their early advantage forever); the sampler must match the density
    /// oracle, not 1/3.
    #[test]
    fn edge_frequency_means_match_density_oracle() {
        let g = triangle();
        let params = PriorParams::constant(&g, VertexId::new(0), 1.0_f64).unwrap();
        let oracle = prior_edge_means(&g, &params, 200_000, 314);
        // for the record: approximately (0.368, 0.261, 0.370), not 1/3
        assert!(oracle[0] > 0.36 && oracle[0] < 0.38);
        assert!(oracle[1] > 0.25 && oracle[1] < 0.27);
        let samples = posterior_edge_frequency_samples(
            &g,
            &params,
            2_000,
            2_000,
            &RandomSource::from_seed(7),
        );
        for e in g.edges() {
            let mean = samples.mean_frequency::<f64>(e.id());
            let se = samples.frequency_std_error::<f64>(e.id());
            let target = oracle[e.id().index()];
            assert!(
                (mean - target).abs() < 5.0 * se,
                "edge {:?}: mean {mean}, oracle {target}, se {se}",
                e.id()
            );
        }
    }

    #[test]
    fn stationary_estimates_match_density_oracle() {
        let g = triangle();
        let params = PriorParams::constant(&g, VertexId::new(0), 1.0_f64).unwrap();
        let edge_means = prior_edge_means(&g, &params, 200_000, 271);
        // nu(v) = E[x_v] / 2 with x_v the incident edge weight sum
        let oracle: Vec<f64> = g
            .vertices()
            .map(|v| {
                g.adjacency(v)
                    .iter()
                    .map(|&e| edge_means[e.index()])
                    .sum::<f64>()
                    / 2.0
            })
            .collect();
        let nu = estimate_stationary::<f64>(&g, &params, 2_000, 2_000, &RandomSource::from_seed(3));
        for (got, want) in nu.iter().zip(&oracle) {
            assert!((got - want).abs() < 0.02, "nu {got} vs oracle {want}");
        }
    }

    /// Two independent estimators of P(x_12 <= 1/2): the empirical law of
    /// k_e/n across walkers, and Monte Carlo integration of the density
    /// over that region.
    #[test]
    fn interval_probability_matches_density_integral() {
        use crate::path::SimplexPoint;
        use rand::{Rng, SeedableRng};
        let g = triangle();
        let params = PriorParams::constant(&g, VertexId::new(0), 1.0_f64).unwrap();
        let e12 = g.edge_between(VertexId::new(0), VertexId::new(1)).unwrap();

        let walkers = 4_000u64;
        let samples = posterior_edge_frequency_samples(
            &g,
            &params,
            5_000,
            walkers,
            &RandomSource::from_seed(12),
        );
        let by_walkers = samples.interval_probability::<f64>(e12, 0.0, 0.5);
        let se_walkers = (by_walkers * (1.0 - by_walkers) / walkers as f64).sqrt();

        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        let draws = 100_000u64;
        let mut sum = 0.0;
        let mut sq = 0.0;
        for _ in 0..draws {
            let raw: [f64; 3] = std::array::from_fn(|_| -rng.random::<f64>().ln());
            let total: f64 = raw.iter().sum();
            let Ok(x) = SimplexPoint::new(&g, raw.iter().map(|&r| r / total).collect()) else {
                continue;
            };
            let Ok(phi) = crate::prior::log_density(&g, &params, &x) else {
                continue;
            };
            let v = if x.edge_weight(e12) <= 0.5 {
                phi.value()
            } else {
                0.0
            };
            sum += v;
            sq += v * v;
        }
        let by_integral = sum / draws as f64;
        let se_integral = ((sq / draws as f64 - by_integral * by_integral) / draws as f64).sqrt();
        let combined = (se_walkers * se_walkers + se_integral * se_integral).sqrt();
        assert!(
            (by_walkers - by_integral).abs() < 4.0 * combined + 0.01,
            "{by_walkers} vs {by_integral} (combined se {combined})"
        );
    }

    #[test]
    fn degenerate_loop_graph_has_unit_stationary() {
        let g = Graph::from_labeled_edges(&["x"], &[("x", "x")]).unwrap();
        let params = PriorParams::constant(&g, VertexId::new(0), 1.0).unwrap();
        let nu = estimate_stationary::<f64>(&g, &params, 50, 4, &RandomSource::from_seed(2));
        assert_eq!(nu, vec![1.0]);
    }

    #[test]
    fn replay_matches_sampled_counts() {
        // the sampler and the replay walk the same weight evolution
        let g = triangle_with_loops();
        let params = PriorParams::constant(&g, VertexId::new(2), 1.0).unwrap();
        let mut rng = RandomSource::from_seed(99);
        let p = errw_sample_path(&g, &params, 60, &mut rng);
        let counts = TransitionCounts::from_path(&g, &p);
        let mut rng2 = RandomSource::from_seed(99);
        let counted = errw_walk_edge_counts(&g, &params, 60, &mut rng2);
        assert_eq!(counts.edge_counts(), counted.as_slice());
    }
}

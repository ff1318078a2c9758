//! Admissible paths, the minimal sufficient statistic of transition counts,
//! and the reversible-chain path likelihood.
//!
//! Counting convention: a loop traversal counts twice toward its edge count
//! (it touches its vertex at both ends), so for every path
//! `sum_{non-loop} k_e + sum_{loop} k_e / 2 = n`, the number of steps.

use thiserror::Error;

use crate::graph::{EdgeId, Graph, VertexId};
use crate::logval::LogValue;
use crate::num::{cast, cast_u64, Scalar};

#[derive(Debug, Error, PartialEq)]
pub enum PathError {
    #[error("a path needs at least one vertex")]
    Empty,
    #[error("step {step}: no edge between `{from}` and `{to}`")]
    NotAdmissible {
        step: usize,
        from: String,
        to: String,
    },
    #[error("path start `{got}` does not match required vertex `{expected}`")]
    WrongStart { expected: String, got: String },
    #[error("enumeration capped at path length {cap}, got {len}")]
    EnumerationCap { cap: usize, len: usize },
    #[error("edge counts are not the counts of any path: {0}")]
    CountsNotRealizable(String),
    #[error("weight vector has {got} entries, graph has {expected} edges")]
    WeightLengthMismatch { expected: usize, got: usize },
    #[error("edge weight {index} is not strictly positive")]
    NonPositiveWeight { index: usize },
    #[error("weights sum to {sum}, not 1 within tolerance")]
    NotNormalized { sum: f64 },
}

/// An admissible path: consecutive vertices joined by an edge of the graph.
/// Equal consecutive vertices require a loop at that vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path {
    vertices: Vec<VertexId>,
    steps: Vec<EdgeId>,
}

impl Path {
    pub fn new(g: &Graph, vertices: Vec<VertexId>) -> Result<Path, PathError> {
        if vertices.is_empty() {
            return Err(PathError::Empty);
        }
        let mut steps = Vec::with_capacity(vertices.len() - 1);
        for (i, pair) in vertices.windows(2).enumerate() {
            match g.edge_between(pair[0], pair[1]) {
                Some(e) => steps.push(e),
                None => {
                    return Err(PathError::NotAdmissible {
                        step: i + 1,
                        from: g.label(pair[0]).to_string(),
                        to: g.label(pair[1]).to_string(),
                    })
                }
            }
        }
        Ok(Path { vertices, steps })
    }

    pub fn from_labels(g: &Graph, labels: &[&str]) -> Result<Path, PathError> {
        let vertices = labels
            .iter()
            .map(|l| {
                g.vertex_by_label(l)
                    .ok_or_else(|| PathError::NotAdmissible {
                        step: 0,
                        from: l.to_string(),
                        to: l.to_string(),
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Path::new(g, vertices)
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    /// Edge ids of the successive steps; `len` is the number of steps.
    pub fn steps(&self) -> &[EdgeId] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn start(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn end(&self) -> VertexId {
        *self.vertices.last().unwrap()
    }
}

/// The sufficient statistic of a path: per-edge traversal counts (doubled
/// for loops), per-vertex departure counts, and the endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionCounts {
    edge_counts: Vec<u64>,
    vertex_counts: Vec<u64>,
    start: VertexId,
    end: VertexId,
    steps: u64,
}

impl TransitionCounts {
    /// Counts of an admissible path.
    pub fn from_path(g: &Graph, p: &Path) -> TransitionCounts {
        let mut edge_counts = vec![0u64; g.edge_count()];
        let mut vertex_counts = vec![0u64; g.vertex_count()];
        for (i, &e) in p.steps().iter().enumerate() {
            edge_counts[e.index()] += if g.edge(e).is_loop() { 2 } else { 1 };
            vertex_counts[p.vertices()[i].index()] += 1;
        }
        TransitionCounts {
            edge_counts,
            vertex_counts,
            start: p.start(),
            end: p.end(),
            steps: p.len() as u64,
        }
    }

    /// Reconstructs the full statistic from edge counts and the start vertex.
    ///
    /// The end vertex is pinned by parity (the unique other vertex with odd
    /// non-loop count, or the start itself), and departures follow from
    /// `k_v = (sum_{e at v, non-loop} k_e + sum_{e at v, loop} k_e
    ///         + [v = start] - [v = end]) / 2`.
    pub fn from_edge_counts(
        g: &Graph,
        edge_counts: Vec<u64>,
        start: VertexId,
    ) -> Result<TransitionCounts, PathError> {
        if edge_counts.len() != g.edge_count() {
            return Err(PathError::CountsNotRealizable(format!(
                "{} counts for {} edges",
                edge_counts.len(),
                g.edge_count()
            )));
        }
        for (i, &k) in edge_counts.iter().enumerate() {
            if g.edge(EdgeId::new(i)).is_loop() && k % 2 != 0 {
                return Err(PathError::CountsNotRealizable(format!(
                    "odd count {k} on a loop edge"
                )));
            }
        }
        // parity of the non-loop count sum at each vertex
        let mut odd: Vec<VertexId> = Vec::new();
        for v in g.vertices() {
            let s: u64 = g
                .adjacency(v)
                .iter()
                .filter(|&&e| !g.edge(e).is_loop())
                .map(|&e| edge_counts[e.index()])
                .sum();
            if s % 2 == 1 {
                odd.push(v);
            }
        }
        let end = match odd.len() {
            0 => start,
            2 if odd.contains(&start) => {
                if odd[0] == start {
                    odd[1]
                } else {
                    odd[0]
                }
            }
            _ => {
                return Err(PathError::CountsNotRealizable(
                    "odd-degree vertices do not match the start vertex".to_string(),
                ))
            }
        };
        // support must be connected and reachable from the start
        let mut seen = vec![false; g.vertex_count()];
        seen[start.index()] = true;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &e in g.adjacency(v) {
                if edge_counts[e.index()] == 0 {
                    continue;
                }
                let w = g.edge(e).other_endpoint(v);
                if !seen[w.index()] {
                    seen[w.index()] = true;
                    stack.push(w);
                }
            }
        }
        for (i, &k) in edge_counts.iter().enumerate() {
            let (u, v) = g.edge(EdgeId::new(i)).endpoints();
            if k > 0 && !(seen[u.index()] && seen[v.index()]) {
                return Err(PathError::CountsNotRealizable(
                    "traversed edges are not connected to the start".to_string(),
                ));
            }
        }

        let mut vertex_counts = vec![0u64; g.vertex_count()];
        let mut steps = 0u64;
        for v in g.vertices() {
            let mut slots = 0u64;
            for &e in g.adjacency(v) {
                slots += edge_counts[e.index()];
            }
            let adjust = u64::from(v == start);
            let drop = u64::from(v == end);
            vertex_counts[v.index()] = (slots + adjust - drop) / 2;
        }
        for (i, &k) in edge_counts.iter().enumerate() {
            steps += if g.edge(EdgeId::new(i)).is_loop() {
                k / 2
            } else {
                k
            };
        }
        Ok(TransitionCounts {
            edge_counts,
            vertex_counts,
            start,
            end,
            steps,
        })
    }

    pub fn edge_count(&self, e: EdgeId) -> u64 {
        self.edge_counts[e.index()]
    }

    pub fn edge_counts(&self) -> &[u64] {
        &self.edge_counts
    }

    /// Departures from `v` (visits among all but the final position).
    pub fn vertex_count(&self, v: VertexId) -> u64 {
        self.vertex_counts[v.index()]
    }

    pub fn vertex_counts(&self) -> &[u64] {
        &self.vertex_counts
    }

    pub fn start(&self) -> VertexId {
        self.start
    }

    pub fn end(&self) -> VertexId {
        self.end
    }

    /// Path length `n` (number of steps).
    pub fn num_steps(&self) -> u64 {
        self.steps
    }

    pub fn is_empty(&self) -> bool {
        self.steps == 0
    }
}

/// Tolerance for the simplex normalization check, widened for scalars whose
/// epsilon exceeds it.
pub(crate) fn simplex_tolerance<T: Scalar>() -> T {
    cast::<T>(1e-12).max(T::epsilon() * cast::<T>(16.0))
}

/// A point of the open edge-weight simplex: strictly positive weights
/// summing to one. Per-vertex sums (loops once) are precomputed.
#[derive(Clone, Debug, PartialEq)]
pub struct SimplexPoint<T> {
    weights: Vec<T>,
    vertex_weights: Vec<T>,
}

impl<T: Scalar> SimplexPoint<T> {
    /// Validates positivity and normalization; out-of-tolerance input is
    /// rejected rather than silently renormalized.
    pub fn new(g: &Graph, weights: Vec<T>) -> Result<SimplexPoint<T>, PathError> {
        if weights.len() != g.edge_count() {
            return Err(PathError::WeightLengthMismatch {
                expected: g.edge_count(),
                got: weights.len(),
            });
        }
        for (i, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w <= T::zero() {
                return Err(PathError::NonPositiveWeight { index: i });
            }
        }
        let sum: T = weights.iter().copied().sum();
        if (sum - T::one()).abs() > simplex_tolerance::<T>() {
            return Err(PathError::NotNormalized {
                sum: sum.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(SimplexPoint {
            vertex_weights: vertex_sums(g, &weights),
            weights,
        })
    }

    /// The barycenter: every edge weight `1/m`.
    pub fn uniform(g: &Graph) -> SimplexPoint<T> {
        let w = T::one() / cast_u64::<T>(g.edge_count() as u64);
        SimplexPoint::new(g, vec![w; g.edge_count()]).expect("uniform point is valid")
    }

    pub fn edge_weight(&self, e: EdgeId) -> T {
        self.weights[e.index()]
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// `x_v`: the sum of incident edge weights, loops counted once.
    pub fn vertex_weight(&self, v: VertexId) -> T {
        self.vertex_weights[v.index()]
    }
}

/// Per-vertex sums of incident edge values, loops counted once.
pub(crate) fn vertex_sums<T: Scalar>(g: &Graph, values: &[T]) -> Vec<T> {
    let mut sums = vec![T::zero(); g.vertex_count()];
    for v in g.vertices() {
        for &e in g.adjacency(v) {
            sums[v.index()] += values[e.index()];
        }
    }
    sums
}

/// Probability of a path under the reversible chain with weights `x`,
/// computed from its transition counts:
/// `prod x_e^{k_e} prod_loop x_e^{k_e/2} / prod_v x_v^{k_v}`.
///
/// Depends on the path only through its counts, so equivalent paths get
/// bitwise-identical results.
pub fn markov_counts_log_prob<T: Scalar>(
    g: &Graph,
    x: &SimplexPoint<T>,
    counts: &TransitionCounts,
) -> LogValue<T> {
    let mut ln = T::zero();
    for edge in g.edges() {
        let k = counts.edge_count(edge.id());
        if k == 0 {
            continue;
        }
        let exponent = if edge.is_loop() { k / 2 } else { k };
        ln += cast_u64::<T>(exponent) * x.edge_weight(edge.id()).ln();
    }
    for v in g.vertices() {
        let k = counts.vertex_count(v);
        if k > 0 {
            ln -= cast_u64::<T>(k) * x.vertex_weight(v).ln();
        }
    }
    LogValue::from_ln(ln)
}

/// Probability of an admissible path under the reversible chain with
/// weights `x`; the empty path has probability one.
pub fn markov_path_log_prob<T: Scalar>(g: &Graph, x: &SimplexPoint<T>, p: &Path) -> LogValue<T> {
    markov_counts_log_prob(g, x, &TransitionCounts::from_path(g, p))
}

/// Default length cap for equivalent-path enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 12;

/// All admissible paths with the same start, length, and edge-count vector
/// as `p` (including `p` itself), in depth-first order.
pub fn enumerate_equivalent_paths(g: &Graph, p: &Path, cap: usize) -> Result<Vec<Path>, PathError> {
    if p.len() > cap {
        return Err(PathError::EnumerationCap { cap, len: p.len() });
    }
    let counts = TransitionCounts::from_path(g, p);
    // remaining traversals per edge (loops stored as traversals, not slots)
    let mut remaining: Vec<u64> = g
        .edges()
        .iter()
        .map(|e| {
            let k = counts.edge_count(e.id());
            if e.is_loop() {
                k / 2
            } else {
                k
            }
        })
        .collect();
    let total: u64 = remaining.iter().sum();
    let mut current = vec![p.start()];
    let mut out = Vec::new();
    dfs_equivalent(g, &mut remaining, total, &mut current, &mut out);
    Ok(out)
}

fn dfs_equivalent(
    g: &Graph,
    remaining: &mut [u64],
    left: u64,
    current: &mut Vec<VertexId>,
    out: &mut Vec<Path>,
) {
    if left == 0 {
        out.push(Path::new(g, current.clone()).expect("constructed path is admissible"));
        return;
    }
    let at = *current.last().unwrap();
    for &e in g.adjacency(at) {
        if remaining[e.index()] == 0 {
            continue;
        }
        remaining[e.index()] -= 1;
        current.push(g.edge(e).other_endpoint(at));
        dfs_equivalent(g, remaining, left - 1, current, out);
        current.pop();
        remaining[e.index()] += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn triangle() -> Graph {
        Graph::from_labeled_edges(&["1", "2", "3"], &[("1", "2"), ("2", "3"), ("1", "3")]).unwrap()
    }

    fn triangle_with_loops() -> Graph {
        Graph::from_labeled_edges(
            &["1", "2", "3"],
            &[
                ("1", "1"),
                ("2", "2"),
                ("3", "3"),
                ("1", "2"),
                ("2", "3"),
                ("1", "3"),
            ],
        )
        .unwrap()
    }

    #[test]
    fn counts_on_triangle_tour() {
        let g = triangle();
        let p = Path::from_labels(&g, &["1", "2", "3", "1"]).unwrap();
        let c = TransitionCounts::from_path(&g, &p);
        assert_eq!(c.edge_counts(), &[1, 1, 1]);
        assert_eq!(c.vertex_counts(), &[1, 1, 1]);
        assert_eq!(c.num_steps(), 3);
    }

    #[test]
    fn loop_traversal_counts_double() {
        let g = triangle_with_loops();
        let p = Path::from_labels(&g, &["1", "1"]).unwrap();
        let c = TransitionCounts::from_path(&g, &p);
        let loop1 = g.edge_between(VertexId::new(0), VertexId::new(0)).unwrap();
        assert_eq!(c.edge_count(loop1), 2);
        assert_eq!(c.vertex_count(VertexId::new(0)), 1);
    }

    #[test]
    fn inadmissible_step_is_located() {
        let g = Graph::from_labeled_edges(&["1", "2", "3"], &[("1", "2"), ("2", "3")]).unwrap();
        let err = Path::from_labels(&g, &["1", "2", "3", "1"]).unwrap_err();
        assert_eq!(
            err,
            PathError::NotAdmissible {
                step: 3,
                from: "3".to_string(),
                to: "1".to_string()
            }
        );
    }

    #[test]
    fn uniform_tour_probability() {
        let g = triangle();
        let x = SimplexPoint::<f64>::uniform(&g);
        let p = Path::from_labels(&g, &["1", "2", "3", "1"]).unwrap();
        let lp = markov_path_log_prob(&g, &x, &p);
        assert!((lp.ln().unwrap() - 0.125_f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn uniform_loop_step_probability() {
        let g = triangle_with_loops();
        let x = SimplexPoint::<f64>::uniform(&g);
        let p = Path::from_labels(&g, &["1", "1"]).unwrap();
        let lp = markov_path_log_prob(&g, &x, &p);
        // x_loop / x_1 = (1/6) / (1/2)
        assert!((lp.ln().unwrap() - (1.0_f64 / 3.0).ln()).abs() < 1e-12);
    }

    #[test]
    fn empty_path_has_probability_one() {
        let g = triangle();
        let x = SimplexPoint::<f64>::uniform(&g);
        let p = Path::from_labels(&g, &["2"]).unwrap();
        assert_eq!(markov_path_log_prob(&g, &x, &p), LogValue::one());
    }

    #[test]
    fn sequential_product_matches_count_formula() {
        // step-by-step product of x_e / x_v factors
        let g = triangle_with_loops();
        let weights = vec![0.05_f64, 0.1, 0.2, 0.25, 0.15, 0.25];
        let x = SimplexPoint::new(&g, weights).unwrap();
        for labels in [
            vec!["1", "2", "3", "1", "1"],
            vec!["2", "3", "3", "2", "1", "3"],
            vec!["3", "1", "2", "2", "2", "3", "1"],
        ] {
            let p = Path::from_labels(&g, &labels).unwrap();
            let mut seq = 0.0;
            for (i, &e) in p.steps().iter().enumerate() {
                let v = p.vertices()[i];
                seq += (x.edge_weight(e) / x.vertex_weight(v)).ln();
            }
            let lp = markov_path_log_prob(&g, &x, &p).ln().unwrap();
            assert!((lp - seq).abs() < 1e-12, "path {labels:?}: {lp} vs {seq}");
        }
    }

    #[test]
    fn equivalent_paths_of_triangle_tour() {
        let g = triangle();
        let p = Path::from_labels(&g, &["1", "2", "3", "1"]).unwrap();
        let all = enumerate_equivalent_paths(&g, &p, DEFAULT_ENUMERATION_CAP).unwrap();
        let mut seqs: Vec<Vec<&str>> = all
            .iter()
            .map(|q| q.vertices().iter().map(|&v| g.label(v)).collect())
            .collect();
        seqs.sort();
        assert_eq!(
            seqs,
            vec![vec!["1", "2", "3", "1"], vec!["1", "3", "2", "1"]]
        );
    }

    /// Independent oracle: brute-force all length-4 vertex sequences.
    #[test]
    fn equivalent_paths_match_brute_force() {
        let g = triangle();
        let p = Path::from_labels(&g, &["1", "2", "1", "3", "1"]).unwrap();
        let want = TransitionCounts::from_path(&g, &p);
        let mut expected = Vec::new();
        let n = p.len();
        let mut stack = vec![vec![VertexId::new(0)]];
        while let Some(seq) = stack.pop() {
            if seq.len() == n + 1 {
                if let Ok(q) = Path::new(&g, seq.clone()) {
                    if TransitionCounts::from_path(&g, &q) == want {
                        expected.push(seq);
                    }
                }
                continue;
            }
            for v in g.vertices() {
                let mut next = seq.clone();
                next.push(v);
                // only extend along edges
                if g.edge_between(*seq.last().unwrap(), v).is_some() {
                    stack.push(next);
                }
            }
        }
        expected.sort();
        let mut got: Vec<_> = enumerate_equivalent_paths(&g, &p, 12)
            .unwrap()
            .into_iter()
            .map(|q| q.vertices().to_vec())
            .collect();
        got.sort();
        assert_eq!(got, expected);
        assert_eq!(got.len(), 2); // (1,2,1,3,1) and (1,3,1,2,1)
    }

    #[test]
    fn single_step_is_its_own_class() {
        let g = triangle();
        let p = Path::from_labels(&g, &["1", "2"]).unwrap();
        let all = enumerate_equivalent_paths(&g, &p, 12).unwrap();
        assert_eq!(all.len(), 1);
    }

    #[test]
    fn enumeration_cap_enforced() {
        let g = triangle();
        let p = Path::from_labels(&g, &["1", "2", "3", "1", "2", "3", "1"]).unwrap();
        let err = enumerate_equivalent_paths(&g, &p, 3).unwrap_err();
        assert_eq!(err, PathError::EnumerationCap { cap: 3, len: 6 });
    }

    #[test]
    fn counts_reconstruction_from_edges_and_start() {
        let g = triangle_with_loops();
        for labels in [
            vec!["1", "1", "2", "3", "1", "3"],
            vec!["2", "3", "2", "2", "1"],
            vec!["3", "3"],
            vec!["1", "2", "3", "1"],
        ] {
            let p = Path::from_labels(&g, &labels).unwrap();
            let direct = TransitionCounts::from_path(&g, &p);
            let rebuilt =
                TransitionCounts::from_edge_counts(&g, direct.edge_counts().to_vec(), p.start())
                    .unwrap();
            assert_eq!(direct, rebuilt, "path {labels:?}");
        }
    }

    #[test]
    fn unrealizable_counts_are_rejected() {
        let g = triangle_with_loops();
        // odd loop count
        let err = TransitionCounts::from_edge_counts(&g, vec![1, 0, 0, 0, 0, 0], VertexId::new(0));
        assert!(matches!(
            err.unwrap_err(),
            PathError::CountsNotRealizable(_)
        ));
        // start not among odd-degree vertices
        let err = TransitionCounts::from_edge_counts(&g, vec![0, 0, 0, 1, 0, 0], VertexId::new(2));
        assert!(matches!(
            err.unwrap_err(),
            PathError::CountsNotRealizable(_)
        ));
        // disconnected support: loop at 2 plus separate loop at 3
        let err = TransitionCounts::from_edge_counts(&g, vec![0, 2, 2, 0, 0, 0], VertexId::new(1));
        assert!(matches!(
            err.unwrap_err(),
            PathError::CountsNotRealizable(_)
        ));
    }

    #[test]
    fn simplex_point_validation() {
        let g = triangle();
        assert!(SimplexPoint::new(&g, vec![0.5, 0.25, 0.25]).is_ok());
        let err = SimplexPoint::new(&g, vec![0.5, 0.25, 0.2]).unwrap_err();
        assert!(matches!(err, PathError::NotNormalized { .. }));
        let err = SimplexPoint::new(&g, vec![1.0, 0.5, -0.5]).unwrap_err();
        assert!(matches!(err, PathError::NonPositiveWeight { index: 2 }));
        let err = SimplexPoint::<f64>::new(&g, vec![0.5, 0.5]).unwrap_err();
        assert!(matches!(err, PathError::WeightLengthMismatch { .. }));
    }

    #[test]
    fn vertex_weights_count_loops_once() {
        let g = triangle_with_loops();
        let x = SimplexPoint::new(&g, vec![0.1_f64, 0.1, 0.1, 0.2, 0.3, 0.2]).unwrap();
        // edges: loops 1,2,3 then 1-2, 2-3, 1-3
        assert!((x.vertex_weight(VertexId::new(0)) - 0.5).abs() < 1e-15);
        assert!((x.vertex_weight(VertexId::new(1)) - 0.6).abs() < 1e-15);
        assert!((x.vertex_weight(VertexId::new(2)) - 0.6).abs() < 1e-15);
    }
}

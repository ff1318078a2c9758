//! The conjugate prior density on the edge-weight simplex: cycle matrix,
//! determinant identities, closed-form normalizing constant, and the
//! specialized densities for lines, trees with loops, triangles with
//! loops, and complete graphs.
//!
//! With `l = |V| + |E_loop|` and `m = |E|`, the density at an interior
//! point `x` is
//!
//! ```text
//! phi(x) = Z^-1 * prod_{e non-loop} x_e^(a_e - 1/2)
//!               * prod_{e loop}     x_e^(a_e/2 - 1)
//!               / ( x_{v0}^(a_{v0}/2) * prod_{v != v0} x_v^((a_v + 1)/2) )
//!               * sqrt(det A(x))
//! ```
//!
//! where `A(x)` is the cycle matrix over an oriented cycle basis and the
//! partition constant `Z` is a pure gamma-function expression. `det A(x)`
//! equals the sum over spanning trees of the inverse weights of the omitted
//! non-loop edges, which makes the density independent of the basis choice
//! and gives the test oracle for the determinant.

use thiserror::Error;

use crate::graph::{
    bfs_spanning_tree, cycle_basis, enumerate_spanning_trees, CycleStep, EdgeId, Graph, GraphError,
    OrientedCycle, VertexId, DEFAULT_TREE_CAP,
};
use crate::logval::LogValue;
use crate::num::{cast, cast_u64, ln_gamma, Scalar};
use crate::path::{simplex_tolerance, vertex_sums, SimplexPoint};

/// Weights below this are treated as boundary points and rejected instead
/// of propagating infinities.
const BOUNDARY_FLOOR: f64 = 1e-300;

#[derive(Debug, Error, PartialEq)]
pub enum PriorError {
    #[error("parameter vector has {got} entries, graph has {expected} edges")]
    WeightLengthMismatch { expected: usize, got: usize },
    #[error("edge parameter {index} is not strictly positive")]
    NonPositiveWeight { index: usize },
    #[error("weight {index} is at the simplex boundary; the density is evaluated only at interior points")]
    BoundaryPoint { index: usize },
    #[error("cycle matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("graph does not match the requested specialized form: {0}")]
    KindMismatch(String),
    #[error("specialized coordinates are invalid: {0}")]
    CoordsInvalid(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Parameters of the conjugate family: a starting vertex and a positive
/// weight per edge. Doubles as prior and posterior parameterization.
#[derive(Clone, Debug, PartialEq)]
pub struct PriorParams<T> {
    v0: VertexId,
    edge_weights: Vec<T>,
    vertex_weights: Vec<T>,
}

impl<T: Scalar> PriorParams<T> {
    pub fn new(g: &Graph, v0: VertexId, edge_weights: Vec<T>) -> Result<Self, PriorError> {
        if edge_weights.len() != g.edge_count() {
            return Err(PriorError::WeightLengthMismatch {
                expected: g.edge_count(),
                got: edge_weights.len(),
            });
        }
        for (i, &w) in edge_weights.iter().enumerate() {
            if !w.is_finite() || w <= T::zero() {
                return Err(PriorError::NonPositiveWeight { index: i });
            }
        }
        Ok(PriorParams {
            v0,
            vertex_weights: vertex_sums(g, &edge_weights),
            edge_weights,
        })
    }

    /// Every edge weight equal to `c` (`c = 1` is the flat default).
    pub fn constant(g: &Graph, v0: VertexId, c: T) -> Result<Self, PriorError> {
        PriorParams::new(g, v0, vec![c; g.edge_count()])
    }

    pub fn v0(&self) -> VertexId {
        self.v0
    }

    pub fn edge_weight(&self, e: EdgeId) -> T {
        self.edge_weights[e.index()]
    }

    pub fn edge_weights(&self) -> &[T] {
        &self.edge_weights
    }

    /// `a_v`: sum of incident edge weights, loops counted once.
    pub fn vertex_weight(&self, v: VertexId) -> T {
        self.vertex_weights[v.index()]
    }

    /// Total weight `sum_e a_e`.
    pub fn total(&self) -> T {
        self.edge_weights.iter().copied().sum()
    }
}

/// The cycle matrix `A(x)`: symmetric, positive definite on the open
/// simplex, of dimension `m - l + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct CycleMatrix<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Scalar> CycleMatrix<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> T {
        self.data[i * self.dim + j]
    }

    /// Log-determinant via Cholesky; the empty matrix has determinant one.
    pub fn ln_det(&self) -> Result<T, PriorError> {
        let n = self.dim;
        if n == 0 {
            return Ok(T::zero());
        }
        let mut l = vec![T::zero(); n * n];
        let mut ln_det = T::zero();
        for k in 0..n {
            let mut d = self.entry(k, k);
            for j in 0..k {
                d -= l[k * n + j] * l[k * n + j];
            }
            if d.is_nan() || d <= T::zero() {
                return Err(PriorError::NotPositiveDefinite);
            }
            let root = d.sqrt();
            l[k * n + k] = root;
            ln_det += root.ln();
            for i in k + 1..n {
                let mut s = self.entry(i, k);
                for j in 0..k {
                    s -= l[i * n + j] * l[k * n + j];
                }
                l[i * n + k] = s / root;
            }
        }
        Ok(ln_det + ln_det)
    }

    pub fn det(&self) -> Result<T, PriorError> {
        self.ln_det().map(|l| l.exp())
    }
}

/// Builds `A(x)` over the given oriented cycle basis: diagonal entries sum
/// `1/x_e` over each cycle, off-diagonal entries sum `±1/x_e` over shared
/// edges with sign `+` exactly when the two cycles traverse the edge in the
/// same direction.
pub fn cycle_matrix<T: Scalar>(
    _g: &Graph,
    basis: &[OrientedCycle],
    x: &SimplexPoint<T>,
) -> CycleMatrix<T> {
    let dim = basis.len();
    let mut data = vec![T::zero(); dim * dim];
    for (i, ci) in basis.iter().enumerate() {
        let mut diag = T::zero();
        for step in ci.steps() {
            diag += x.edge_weight(step.edge).recip();
        }
        data[i * dim + i] = diag;
        for (j, cj) in basis.iter().enumerate().skip(i + 1) {
            let mut off = T::zero();
            for step in ci.steps() {
                if let Some(dir) = cj.orientation(step.edge) {
                    let term = x.edge_weight(step.edge).recip();
                    if dir == step.forward {
                        off += term;
                    } else {
                        off -= term;
                    }
                }
            }
            data[i * dim + j] = off;
            data[j * dim + i] = off;
        }
    }
    CycleMatrix { dim, data }
}

/// How to evaluate `det A(x)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetMethod {
    /// Cholesky factorization of the cycle matrix over the default basis.
    CycleMatrix,
    /// Sum over enumerated spanning trees of `prod_{e not in T, non-loop} 1/x_e`
    /// (the identity's right-hand side; capped, test-oracle grade).
    SpanningTrees,
}

/// `ln det A(x)` by either route. Loops never contribute to either side.
pub fn ln_det_cycle_matrix<T: Scalar>(
    g: &Graph,
    x: &SimplexPoint<T>,
    method: DetMethod,
) -> Result<T, PriorError> {
    match method {
        DetMethod::CycleMatrix => {
            let basis = cycle_basis(g, &bfs_spanning_tree(g))?;
            cycle_matrix(g, &basis, x).ln_det()
        }
        DetMethod::SpanningTrees => {
            let trees = enumerate_spanning_trees(g, DEFAULT_TREE_CAP)?;
            // log-sum-exp over per-tree log products
            let mut terms = Vec::with_capacity(trees.len());
            for t in &trees {
                let mut ln_term = T::zero();
                for edge in g.edges() {
                    if !edge.is_loop() && !t.contains(edge.id()) {
                        ln_term -= x.edge_weight(edge.id()).ln();
                    }
                }
                terms.push(ln_term);
            }
            let hi = terms
                .iter()
                .copied()
                .fold(T::neg_infinity(), |a, b| a.max(b));
            let sum: T = terms.iter().map(|&t| (t - hi).exp()).sum();
            Ok(hi + sum.ln())
        }
    }
}

/// `det A(x)`; may overflow to infinity near the boundary, where the log
/// form stays finite.
pub fn det_cycle_matrix<T: Scalar>(
    g: &Graph,
    x: &SimplexPoint<T>,
    method: DetMethod,
) -> Result<T, PriorError> {
    ln_det_cycle_matrix(g, x, method).map(|l| l.exp())
}

/// Log of the partition constant `Z_{v0,a}`:
///
/// ```text
/// Z = prod_e Gamma(a_e)
///     / ( Gamma(a_{v0}/2) prod_{v != v0} Gamma((a_v+1)/2)
///         prod_{e loop} Gamma((a_e+1)/2) )
///     * (m-1)! * pi^((l-1)/2) / 2^(1 - l + sum_e a_e)
/// ```
pub fn log_partition<T: Scalar>(g: &Graph, params: &PriorParams<T>) -> LogValue<T> {
    let two = cast::<T>(2.0);
    let half = cast::<T>(0.5);
    let mut ln = T::zero();
    for edge in g.edges() {
        ln += ln_gamma(params.edge_weight(edge.id()));
    }
    for v in g.vertices() {
        let a_v = params.vertex_weight(v);
        if v == params.v0() {
            ln -= ln_gamma(a_v / two);
        } else {
            ln -= ln_gamma((a_v + T::one()) / two);
        }
    }
    for &l in g.loop_edges() {
        ln -= ln_gamma((params.edge_weight(l) + T::one()) / two);
    }
    let m = g.edge_count() as u64;
    let l_count = (g.vertex_count() + g.loop_count()) as u64;
    ln += ln_gamma(cast_u64::<T>(m)); // ln (m-1)!
    ln += (cast_u64::<T>(l_count) - T::one()) * half * T::PI().ln();
    ln -= (T::one() - cast_u64::<T>(l_count) + params.total()) * T::LN_2();
    LogValue::from_ln(ln)
}

fn check_interior<T: Scalar>(x: &SimplexPoint<T>) -> Result<(), PriorError> {
    let floor = cast::<T>(BOUNDARY_FLOOR);
    for (i, &w) in x.weights().iter().enumerate() {
        if w <= floor {
            return Err(PriorError::BoundaryPoint { index: i });
        }
    }
    Ok(())
}

/// Log of the prior density at an interior simplex point.
pub fn log_density<T: Scalar>(
    g: &Graph,
    params: &PriorParams<T>,
    x: &SimplexPoint<T>,
) -> Result<LogValue<T>, PriorError> {
    check_interior(x)?;
    let two = cast::<T>(2.0);
    let half = cast::<T>(0.5);
    let mut ln = -log_partition(g, params).ln().expect("Z is positive");
    for edge in g.edges() {
        let a_e = params.edge_weight(edge.id());
        let exponent = if edge.is_loop() {
            a_e / two - T::one()
        } else {
            a_e - half
        };
        ln += exponent * x.edge_weight(edge.id()).ln();
    }
    for v in g.vertices() {
        let a_v = params.vertex_weight(v);
        let exponent = if v == params.v0() {
            a_v / two
        } else {
            (a_v + T::one()) / two
        };
        ln -= exponent * x.vertex_weight(v).ln();
    }
    let basis = cycle_basis(g, &bfs_spanning_tree(g))?;
    ln += half * cycle_matrix(g, &basis, x).ln_det()?;
    Ok(LogValue::from_ln(ln))
}

/// Graph families with closed-form densities in transformed coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecializedKind {
    /// A path graph (birth-and-death chain); the transformed density is a
    /// product of beta densities in the downward crossing probabilities.
    Line,
    /// A tree with a loop at every vertex; the transformed density is a
    /// product of per-vertex Dirichlet densities.
    TreeWithLoops,
    /// The triangle with loops at all three vertices, in plain simplex
    /// coordinates.
    TriangleWithLoops,
    /// The complete graph with loops at all vertices, in plain simplex
    /// coordinates.
    CompleteWithLoops,
}

/// Evaluation coordinates for [`specialized_log_density`].
#[derive(Clone, Debug)]
pub enum SpecializedCoords<T> {
    /// `p_i` for each interior vertex along the line, in line order: the
    /// probability of stepping back toward the lower end.
    Line(Vec<T>),
    /// One simplex block per vertex, aligned with that vertex's adjacency
    /// order: `p_e = x_e / x_v`.
    TreeBlocks(Vec<Vec<T>>),
    /// A full edge-weight simplex point.
    Point(SimplexPoint<T>),
}

fn ln_beta_density<T: Scalar>(b1: T, b2: T, p: T) -> T {
    ln_gamma(b1 + b2) - ln_gamma(b1) - ln_gamma(b2)
        + (b1 - T::one()) * p.ln()
        + (b2 - T::one()) * (T::one() - p).ln()
}

fn ln_dirichlet_density<T: Scalar>(b: &[T], p: &[T]) -> T {
    let total: T = b.iter().copied().sum();
    let mut ln = ln_gamma(total);
    for (&bi, &pi) in b.iter().zip(p) {
        ln += (bi - T::one()) * pi.ln() - ln_gamma(bi);
    }
    ln
}

/// Vertex order along a path graph, lower-index endpoint first.
fn line_order(g: &Graph) -> Result<Vec<VertexId>, PriorError> {
    if g.loop_count() != 0
        || g.edge_count() != g.vertex_count() - 1
        || g.vertices().any(|v| g.degree(v) > 2)
        || g.vertex_count() < 2
    {
        return Err(PriorError::KindMismatch(
            "not a loop-free path graph".to_string(),
        ));
    }
    let start = g
        .vertices()
        .filter(|&v| g.degree(v) == 1)
        .min()
        .expect("a path graph has endpoints");
    let mut order = vec![start];
    let mut prev = None;
    let mut at = start;
    while order.len() < g.vertex_count() {
        let next = g
            .adjacency(at)
            .iter()
            .map(|&e| g.edge(e).other_endpoint(at))
            .find(|&w| Some(w) != prev)
            .expect("interior vertices have two neighbors");
        order.push(next);
        prev = Some(at);
        at = next;
    }
    Ok(order)
}

fn line_log_density<T: Scalar>(
    g: &Graph,
    params: &PriorParams<T>,
    p: &[T],
) -> Result<LogValue<T>, PriorError> {
    let order = line_order(g)?;
    let n = g.vertex_count() - 1; // number of edges
    if p.len() != n.saturating_sub(1) {
        return Err(PriorError::CoordsInvalid(format!(
            "{} interior coordinates for {} interior vertices",
            p.len(),
            n.saturating_sub(1)
        )));
    }
    for (i, &pi) in p.iter().enumerate() {
        if pi.is_nan() || pi <= T::zero() || pi >= T::one() {
            return Err(PriorError::CoordsInvalid(format!(
                "p[{i}] must lie strictly inside (0, 1)"
            )));
        }
    }
    // b[i] = weight of the i-th edge along the line, 1-based
    let b = |i: usize| -> T {
        let e = g
            .edge_between(order[i - 1], order[i])
            .expect("consecutive line vertices are adjacent");
        params.edge_weight(e)
    };
    let v0_pos = order
        .iter()
        .position(|&v| v == params.v0())
        .expect("v0 is a graph vertex");
    let two = cast::<T>(2.0);
    let one = T::one();
    let mut ln = T::zero();
    for i in 1..n {
        let pi = p[i - 1];
        // the +1 lands on the edge-end pointing back toward v0; the
        // factor at v0 itself carries no +1 on either side
        let (lhs, rhs) = if i < v0_pos {
            (b(i) / two, (b(i + 1) + one) / two)
        } else if i == v0_pos {
            (b(i) / two, b(i + 1) / two)
        } else {
            ((b(i) + one) / two, b(i + 1) / two)
        };
        ln += ln_beta_density(lhs, rhs, pi);
    }
    Ok(LogValue::from_ln(ln))
}

fn tree_with_loops_log_density<T: Scalar>(
    g: &Graph,
    params: &PriorParams<T>,
    blocks: &[Vec<T>],
) -> Result<LogValue<T>, PriorError> {
    let n = g.vertex_count();
    if g.loop_count() != n || g.edge_count() != 2 * n - 1 {
        return Err(PriorError::KindMismatch(
            "needs a tree skeleton with a loop at every vertex".to_string(),
        ));
    }
    for v in g.vertices() {
        if g.edge_between(v, v).is_none() {
            return Err(PriorError::KindMismatch(format!(
                "vertex `{}` has no loop",
                g.label(v)
            )));
        }
    }
    if blocks.len() != n {
        return Err(PriorError::CoordsInvalid(format!(
            "{} blocks for {n} vertices",
            blocks.len()
        )));
    }
    // parent edge toward v0 via BFS
    let mut parent_edge: Vec<Option<EdgeId>> = vec![None; n];
    let mut seen = vec![false; n];
    let mut queue = std::collections::VecDeque::new();
    seen[params.v0().index()] = true;
    queue.push_back(params.v0());
    while let Some(v) = queue.pop_front() {
        for &e in g.adjacency(v) {
            if g.edge(e).is_loop() {
                continue;
            }
            let w = g.edge(e).other_endpoint(v);
            if !seen[w.index()] {
                seen[w.index()] = true;
                parent_edge[w.index()] = Some(e);
                queue.push_back(w);
            }
        }
    }
    let two = cast::<T>(2.0);
    let mut ln = T::zero();
    for v in g.vertices() {
        let adjacency = g.adjacency(v);
        let block = &blocks[v.index()];
        if block.len() != adjacency.len() {
            return Err(PriorError::CoordsInvalid(format!(
                "block for `{}` has {} entries, vertex degree is {}",
                g.label(v),
                block.len(),
                adjacency.len()
            )));
        }
        let sum: T = block.iter().copied().sum();
        if (sum - T::one()).abs() > simplex_tolerance::<T>()
            || block.iter().any(|&p| p.is_nan() || p <= T::zero())
        {
            return Err(PriorError::CoordsInvalid(format!(
                "block for `{}` is not an interior simplex point",
                g.label(v)
            )));
        }
        let b: Vec<T> = adjacency
            .iter()
            .map(|&e| {
                let a_e = params.edge_weight(e);
                if v != params.v0() && parent_edge[v.index()] == Some(e) {
                    (a_e + T::one()) / two
                } else {
                    a_e / two
                }
            })
            .collect();
        ln += ln_dirichlet_density(&b, block);
    }
    Ok(LogValue::from_ln(ln))
}

fn triangle_with_loops_log_density<T: Scalar>(
    g: &Graph,
    params: &PriorParams<T>,
    x: &SimplexPoint<T>,
) -> Result<LogValue<T>, PriorError> {
    if g.vertex_count() != 3 || g.edge_count() != 6 || g.loop_count() != 3 {
        return Err(PriorError::KindMismatch(
            "needs the triangle with loops at all three vertices".to_string(),
        ));
    }
    check_interior(x)?;
    let v0 = params.v0();
    let mut others: Vec<VertexId> = g.vertices().filter(|&v| v != v0).collect();
    others.sort();
    let (w1, w2) = (others[0], others[1]);
    let loop_at = |v: VertexId| g.edge_between(v, v).expect("all loops present");
    let side = |u: VertexId, v: VertexId| g.edge_between(u, v).expect("triangle side");

    // role order: vertex 1 = v0; y_i loop weights, z_i opposite sides
    let b1 = params.edge_weight(loop_at(v0));
    let b2 = params.edge_weight(loop_at(w1));
    let b3 = params.edge_weight(loop_at(w2));
    let c1 = params.edge_weight(side(w1, w2));
    let c2 = params.edge_weight(side(v0, w2));
    let c3 = params.edge_weight(side(v0, w1));
    let y1 = x.edge_weight(loop_at(v0));
    let y2 = x.edge_weight(loop_at(w1));
    let y3 = x.edge_weight(loop_at(w2));
    let z1 = x.edge_weight(side(w1, w2));
    let z2 = x.edge_weight(side(v0, w2));
    let z3 = x.edge_weight(side(v0, w1));

    let two = cast::<T>(2.0);
    let one = T::one();
    let half = cast::<T>(0.5);
    let ln_z = ln_gamma(c1)
        + ln_gamma(c2)
        + ln_gamma(c3)
        + ln_gamma(b1 / two)
        + ln_gamma(b2 / two)
        + ln_gamma(b3 / two)
        - ln_gamma((b1 + c2 + c3) / two)
        - ln_gamma((b2 + c1 + c3 + one) / two)
        - ln_gamma((b3 + c1 + c2 + one) / two)
        + cast::<T>(480.0).ln()
        + T::PI().ln()
        - (c1 + c2 + c3) * T::LN_2();
    let ln = -ln_z
        + (b1 / two - one) * y1.ln()
        + (b2 / two - one) * y2.ln()
        + (b3 / two - one) * y3.ln()
        + (c1 - one) * z1.ln()
        + (c2 - one) * z2.ln()
        + (c3 - one) * z3.ln()
        + half * (z1 * z2 + z1 * z3 + z2 * z3).ln()
        - (b1 + c2 + c3) / two * (y1 + z2 + z3).ln()
        - (b2 + c1 + c3 + one) / two * (y2 + z1 + z3).ln()
        - (b3 + c1 + c2 + one) / two * (y3 + z1 + z2).ln();
    Ok(LogValue::from_ln(ln))
}

fn complete_with_loops_log_density<T: Scalar>(
    g: &Graph,
    params: &PriorParams<T>,
    x: &SimplexPoint<T>,
) -> Result<LogValue<T>, PriorError> {
    let n = g.vertex_count();
    if n < 2 || g.loop_count() != n || g.edge_count() != n * (n + 1) / 2 {
        return Err(PriorError::KindMismatch(
            "needs the complete graph with a loop at every vertex".to_string(),
        ));
    }
    check_interior(x)?;
    let two = cast::<T>(2.0);
    let one = T::one();
    let half = cast::<T>(0.5);
    let v0 = params.v0();

    let mut ln_z = T::zero();
    for edge in g.edges() {
        ln_z += ln_gamma(params.edge_weight(edge.id()));
    }
    for v in g.vertices() {
        let a_v = params.vertex_weight(v);
        if v == v0 {
            ln_z -= ln_gamma(a_v / two);
        } else {
            ln_z -= ln_gamma((a_v + one) / two);
        }
        let loop_e = g.edge_between(v, v).expect("all loops present");
        ln_z -= ln_gamma((params.edge_weight(loop_e) + one) / two);
    }
    let m = (n * (n + 1) / 2) as u64;
    ln_z += ln_gamma(cast_u64::<T>(m)); // ln (m-1)!
    ln_z += (cast_u64::<T>(n as u64) - half) * T::PI().ln();
    ln_z -= (one - two * cast_u64::<T>(n as u64) + params.total()) * T::LN_2();

    let mut ln = -ln_z;
    for edge in g.edges() {
        let a_e = params.edge_weight(edge.id());
        let exponent = if edge.is_loop() {
            a_e / two - one
        } else {
            a_e - half
        };
        ln += exponent * x.edge_weight(edge.id()).ln();
    }
    for v in g.vertices() {
        let a_v = params.vertex_weight(v);
        let exponent = if v == v0 {
            a_v / two
        } else {
            (a_v + one) / two
        };
        ln -= exponent * x.vertex_weight(v).ln();
    }
    // explicit triangle basis (v0, i, j) from the star tree at v0
    let mut non_v0: Vec<VertexId> = g.vertices().filter(|&v| v != v0).collect();
    non_v0.sort();
    let mut basis = Vec::new();
    for (idx, &i) in non_v0.iter().enumerate() {
        for &j in &non_v0[idx + 1..] {
            let steps = vec![
                CycleStep {
                    edge: g.edge_between(v0, i).expect("complete"),
                    forward: v0 < i,
                },
                CycleStep {
                    edge: g.edge_between(i, j).expect("complete"),
                    forward: i < j,
                },
                CycleStep {
                    edge: g.edge_between(j, v0).expect("complete"),
                    forward: j < v0,
                },
            ];
            basis.push(OrientedCycle::from_steps(steps));
        }
    }
    ln += half * cycle_matrix(g, &basis, x).ln_det()?;
    Ok(LogValue::from_ln(ln))
}

/// Closed-form density of a specialized graph family, evaluated in the
/// family's own coordinates (see [`SpecializedCoords`]).
pub fn specialized_log_density<T: Scalar>(
    g: &Graph,
    kind: SpecializedKind,
    params: &PriorParams<T>,
    coords: &SpecializedCoords<T>,
) -> Result<LogValue<T>, PriorError> {
    match (kind, coords) {
        (SpecializedKind::Line, SpecializedCoords::Line(p)) => line_log_density(g, params, p),
        (SpecializedKind::TreeWithLoops, SpecializedCoords::TreeBlocks(blocks)) => {
            tree_with_loops_log_density(g, params, blocks)
        }
        (SpecializedKind::TriangleWithLoops, SpecializedCoords::Point(x)) => {
            triangle_with_loops_log_density(g, params, x)
        }
        (SpecializedKind::CompleteWithLoops, SpecializedCoords::Point(x)) => {
            complete_with_loops_log_density(g, params, x)
        }
        _ => Err(PriorError::CoordsInvalid(
            "coordinate variant does not match the kind".to_string(),
        )),
    }
}

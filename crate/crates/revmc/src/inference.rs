//! Posterior updates, closed-form marginal likelihoods, Bayes-factor model
//! comparison, and reversibility diagnostics.
//!
//! The conjugate family is closed under sampling: observing a path updates
//! each edge weight by its transition count and moves the starting vertex
//! to the path's end. The marginal likelihood of a path has a closed form
//! in rising products, evaluated here exclusively through log-gamma sums so
//! that thousand-step counts retain full precision.

use thiserror::Error;

use crate::graph::{EdgeId, Graph, VertexId};
use crate::logval::LogValue;
use crate::num::{cast_u64, ln_gamma, ln_rising, ln_rising_step2, Scalar};
use crate::path::TransitionCounts;
use crate::prior::{PriorError, PriorParams};

#[derive(Debug, Error, PartialEq)]
pub enum InferenceError {
    #[error("observation starts at `{got}` but the prior's v0 is `{expected}`")]
    StartMismatch { expected: String, got: String },
    #[error("the flagged marginal needs a closed path avoiding v0: {0}")]
    NotAClosedCycleAvoidingV0(String),
    #[error("count table is malformed: {0}")]
    MalformedTable(String),
    #[error("start/end symbols are required but neither given nor inferable")]
    EndpointsRequired,
    #[error("total length {given} does not match the table's {expected} symbols")]
    LengthMismatch { expected: u64, given: u64 },
    #[error("hyperparameters are invalid: {0}")]
    BadHyperparameters(String),
    #[error("the reversible model is not a competitor model; use the reversible marginal")]
    ModelNotCompetitor,
    #[error("Bayes factor of an exactly zero marginal is undefined")]
    ZeroMarginal,
    #[error(transparent)]
    Prior(#[from] PriorError),
}

/// Conjugate update: add each edge's transition count to its weight and
/// restart at the observed path's end vertex.
pub fn posterior_update<T: Scalar>(
    g: &Graph,
    params: &PriorParams<T>,
    counts: &TransitionCounts,
) -> Result<PriorParams<T>, InferenceError> {
    if counts.start() != params.v0() {
        return Err(InferenceError::StartMismatch {
            expected: g.label(params.v0()).to_string(),
            got: g.label(counts.start()).to_string(),
        });
    }
    let weights: Vec<T> = g
        .edges()
        .iter()
        .map(|e| params.edge_weight(e.id()) + cast_u64::<T>(counts.edge_count(e.id())))
        .collect();
    Ok(PriorParams::new(g, counts.end(), weights)?)
}

/// Closed-form marginal likelihood of a path under the reversible-chain
/// mixture:
///
/// ```text
/// prod_{e non-loop} (a_e)(a_e+1)...(a_e+k_e-1)
/// * prod_{e loop}   (a_e)(a_e+2)...(a_e+k_e-2)
/// / ( prod_{i<k_v0} (a_v0 + 2i) * prod_{v != v0} prod_{i<k_v} (a_v+1+2i) )
/// ```
///
/// With `closed_cycle_avoiding_v0` set, the variant for a closed path that
/// never touches v0 applies: every vertex, v0 included, uses the
/// `(a_v + 1 + 2i)` form. Empty products are one.
pub fn log_marginal_reversible<T: Scalar>(
    g: &Graph,
    params: &PriorParams<T>,
    counts: &TransitionCounts,
    closed_cycle_avoiding_v0: bool,
) -> Result<LogValue<T>, InferenceError> {
    let v0 = params.v0();
    if closed_cycle_avoiding_v0 {
        if counts.start() != counts.end() {
            return Err(InferenceError::NotAClosedCycleAvoidingV0(
                "start and end differ".to_string(),
            ));
        }
        if counts.start() == v0 || counts.vertex_count(v0) != 0 {
            return Err(InferenceError::NotAClosedCycleAvoidingV0(format!(
                "path touches v0 = `{}`",
                g.label(v0)
            )));
        }
    } else if counts.start() != v0 {
        return Err(InferenceError::StartMismatch {
            expected: g.label(v0).to_string(),
            got: g.label(counts.start()).to_string(),
        });
    }

    let mut ln = T::zero();
    for edge in g.edges() {
        let k = counts.edge_count(edge.id());
        if k == 0 {
            continue;
        }
        let a_e = params.edge_weight(edge.id());
        if edge.is_loop() {
            ln += ln_rising_step2(a_e, k / 2);
        } else {
            ln += ln_rising(a_e, k);
        }
    }
    for v in g.vertices() {
        let k = counts.vertex_count(v);
        if k == 0 {
            continue;
        }
        let a_v = params.vertex_weight(v);
        if v == v0 && !closed_cycle_avoiding_v0 {
            ln -= ln_rising_step2(a_v, k);
        } else {
            ln -= ln_rising_step2(a_v + T::one(), k);
        }
    }
    Ok(LogValue::from_ln(ln))
}

/// Prior expectation of traversing `e0` back and forth (for a loop, of
/// one traversal): the moment `E[x_e^2 / (x_v x_v')]`, respectively
/// `E[x_e / x_v]`, in closed form.
pub fn moment_back_forth<T: Scalar>(g: &Graph, params: &PriorParams<T>, e0: EdgeId) -> T {
    let edge = g.edge(e0);
    let a_e = params.edge_weight(e0);
    let one = T::one();
    if edge.is_loop() {
        let v = edge.endpoints().0;
        let a_v = params.vertex_weight(v);
        if v == params.v0() {
            a_e / a_v
        } else {
            a_e / (a_v + one)
        }
    } else {
        let (u, v) = edge.endpoints();
        let (a_u, a_v) = (params.vertex_weight(u), params.vertex_weight(v));
        let num = a_e * (a_e + one);
        if params.v0() == u {
            num / (a_u * (a_v + one))
        } else if params.v0() == v {
            num / (a_v * (a_u + one))
        } else {
            num / ((a_u + one) * (a_v + one))
        }
    }
}

/// Directed bigram counts over a symbol alphabet, with optional start/end
/// symbols of the underlying sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTable {
    labels: Vec<String>,
    counts: Vec<Vec<u64>>,
    start: Option<usize>,
    end: Option<usize>,
}

impl CountTable {
    pub fn new(labels: Vec<String>, counts: Vec<Vec<u64>>) -> Result<CountTable, InferenceError> {
        if labels.is_empty() {
            return Err(InferenceError::MalformedTable("no symbols".to_string()));
        }
        let n = labels.len();
        if counts.len() != n || counts.iter().any(|row| row.len() != n) {
            return Err(InferenceError::MalformedTable(format!(
                "need a square {n}x{n} matrix"
            )));
        }
        let mut unique = labels.clone();
        unique.sort();
        unique.dedup();
        if unique.len() != n {
            return Err(InferenceError::MalformedTable(
                "duplicate symbol label".to_string(),
            ));
        }
        Ok(CountTable {
            labels,
            counts,
            start: None,
            end: None,
        })
    }

    pub fn with_endpoints(mut self, start: &str, end: &str) -> Result<CountTable, InferenceError> {
        let s = self
            .label_index(start)
            .ok_or_else(|| InferenceError::MalformedTable(format!("unknown symbol `{start}`")))?;
        let e = self
            .label_index(end)
            .ok_or_else(|| InferenceError::MalformedTable(format!("unknown symbol `{end}`")))?;
        self.start = Some(s);
        self.end = Some(e);
        self.validate_path_consistency()?;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn count(&self, from: usize, to: usize) -> u64 {
        self.counts[from][to]
    }

    pub fn row_sum(&self, i: usize) -> u64 {
        self.counts[i].iter().sum()
    }

    pub fn col_sum(&self, j: usize) -> u64 {
        self.counts.iter().map(|row| row[j]).sum()
    }

    pub fn total_transitions(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    pub fn start(&self) -> Option<usize> {
        self.start
    }

    pub fn end(&self) -> Option<usize> {
        self.end
    }

    /// Declared endpoints, or the unique pair implied by the row/column
    /// imbalance. A balanced table (a closed path) has no recoverable
    /// endpoints and requires them to be declared.
    pub fn endpoints(&self) -> Result<(usize, usize), InferenceError> {
        if let (Some(s), Some(e)) = (self.start, self.end) {
            return Ok((s, e));
        }
        let mut start = None;
        let mut end = None;
        for i in 0..self.dim() {
            let diff = self.row_sum(i) as i64 - self.col_sum(i) as i64;
            match diff {
                0 => {}
                1 if start.is_none() => start = Some(i),
                -1 if end.is_none() => end = Some(i),
                _ => {
                    return Err(InferenceError::MalformedTable(format!(
                        "row/column sums are inconsistent with a single path at `{}`",
                        self.labels[i]
                    )))
                }
            }
        }
        match (start, end) {
            (Some(s), Some(e)) => Ok((s, e)),
            (None, None) => Err(InferenceError::EndpointsRequired),
            _ => Err(InferenceError::MalformedTable(
                "row/column sums are inconsistent with a single path".to_string(),
            )),
        }
    }

    /// Row and column sums must differ only at the start/end symbols.
    pub fn validate_path_consistency(&self) -> Result<(), InferenceError> {
        let (start, end) = self.endpoints()?;
        for i in 0..self.dim() {
            let expected = i64::from(i == start) - i64::from(i == end);
            let diff = self.row_sum(i) as i64 - self.col_sum(i) as i64;
            if diff != expected {
                return Err(InferenceError::MalformedTable(format!(
                    "row/column sums at `{}` differ by {diff}, expected {expected}",
                    self.labels[i]
                )));
            }
        }
        Ok(())
    }

    /// Symbol occurrence counts of the underlying sequence: departures plus
    /// one for the end symbol.
    pub fn symbol_counts(&self) -> Result<Vec<u64>, InferenceError> {
        let (_, end) = self.endpoints()?;
        Ok((0..self.dim())
            .map(|i| self.row_sum(i) + u64::from(i == end))
            .collect())
    }

    /// Total sequence length (symbols, not transitions).
    pub fn sequence_length(&self) -> u64 {
        self.total_transitions() + 1
    }

    /// The undirected view: the complete graph with loops over the alphabet
    /// and the transition counts `k_{{i,j}} = N_ij + N_ji`, `k_{{i}} = 2 N_ii`.
    pub fn to_graph_and_counts(&self) -> Result<(Graph, TransitionCounts), InferenceError> {
        let (start, end) = self.endpoints()?;
        self.validate_path_consistency()?;
        let labels: Vec<&str> = self.labels.iter().map(|s| s.as_str()).collect();
        let g = Graph::complete_with_loops(&labels)
            .map_err(|e| InferenceError::MalformedTable(e.to_string()))?;
        let mut edge_counts = vec![0u64; g.edge_count()];
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let e = g
                    .edge_between(VertexId::new(i), VertexId::new(j))
                    .expect("complete graph");
                edge_counts[e.index()] += self.counts[i][j];
                if i == j {
                    edge_counts[e.index()] += self.counts[i][j]; // loops doubled
                }
            }
        }
        let counts = TransitionCounts::from_edge_counts(&g, edge_counts, VertexId::new(start))
            .map_err(|e| InferenceError::MalformedTable(e.to_string()))?;
        if counts.end() != VertexId::new(end) {
            return Err(InferenceError::MalformedTable(format!(
                "declared end `{}` is inconsistent with the counts",
                self.labels[end]
            )));
        }
        Ok((g, counts))
    }
}

/// Competing sequence models for Bayes tests.
#[derive(Clone, Debug, PartialEq)]
pub enum ModelSpec<T> {
    /// Every symbol uniform over the alphabet.
    IidUniform,
    /// Exchangeable symbols with a Dirichlet prior on the frequencies,
    /// one hyperparameter per symbol.
    IidDirichlet(Vec<T>),
    /// Reversible Markov chain with the conjugate prior.
    Reversible(PriorParams<T>),
    /// Unconstrained Markov chain, product-Dirichlet prior on the rows,
    /// one hyperparameter per row cell.
    FullMarkov(Vec<Vec<T>>),
}

/// Marginal likelihood of the data under a competitor (non-reversible)
/// model. `n` is the sequence length in symbols; the first symbol is
/// modeled by the iid variants and conditioned on by the Markov one.
pub fn log_marginal_competitor<T: Scalar>(
    model: &ModelSpec<T>,
    table: &CountTable,
    n: u64,
) -> Result<LogValue<T>, InferenceError> {
    if n != table.sequence_length() {
        return Err(InferenceError::LengthMismatch {
            expected: table.sequence_length(),
            given: n,
        });
    }
    match model {
        ModelSpec::IidUniform => {
            let dim = cast_u64::<T>(table.dim() as u64);
            Ok(LogValue::from_ln(-cast_u64::<T>(n) * dim.ln()))
        }
        ModelSpec::IidDirichlet(alpha) => {
            if alpha.len() != table.dim() {
                return Err(InferenceError::BadHyperparameters(format!(
                    "{} Dirichlet parameters for {} symbols",
                    alpha.len(),
                    table.dim()
                )));
            }
            if alpha.iter().any(|&a| a.is_nan() || a <= T::zero()) {
                return Err(InferenceError::BadHyperparameters(
                    "Dirichlet parameters must be positive".to_string(),
                ));
            }
            let counts = table.symbol_counts()?;
            let alpha_total: T = alpha.iter().copied().sum();
            let mut ln = ln_gamma(alpha_total) - ln_gamma(alpha_total + cast_u64::<T>(n));
            for (&a, &k) in alpha.iter().zip(&counts) {
                ln += ln_gamma(a + cast_u64::<T>(k)) - ln_gamma(a);
            }
            Ok(LogValue::from_ln(ln))
        }
        ModelSpec::FullMarkov(alpha) => {
            let dim = table.dim();
            if alpha.len() != dim || alpha.iter().any(|row| row.len() != dim) {
                return Err(InferenceError::BadHyperparameters(format!(
                    "row hyperparameters must form a {dim}x{dim} matrix"
                )));
            }
            if alpha
                .iter()
                .flatten()
                .any(|&a| a.is_nan() || a <= T::zero())
            {
                return Err(InferenceError::BadHyperparameters(
                    "row hyperparameters must be positive".to_string(),
                ));
            }
            let mut ln = T::zero();
            for (i, row) in alpha.iter().enumerate() {
                let row_alpha: T = row.iter().copied().sum();
                let k_i = table.row_sum(i);
                ln += ln_gamma(row_alpha) - ln_gamma(row_alpha + cast_u64::<T>(k_i));
                for (j, &a_ij) in row.iter().enumerate() {
                    ln += ln_gamma(a_ij + cast_u64::<T>(table.count(i, j))) - ln_gamma(a_ij);
                }
            }
            Ok(LogValue::from_ln(ln))
        }
        ModelSpec::Reversible(_) => Err(InferenceError::ModelNotCompetitor),
    }
}

/// A Bayes factor: its base-10 logarithm and the mantissa-exponent decimal
/// rendering at six significant digits.
#[derive(Clone, Debug, PartialEq)]
pub struct BayesFactor<T> {
    pub log10: T,
    pub decimal: String,
}

/// The ratio of two marginal likelihoods.
pub fn bayes_factor<T: Scalar>(
    h0: &LogValue<T>,
    h1: &LogValue<T>,
) -> Result<BayesFactor<T>, InferenceError> {
    let (l0, l1) = match (h0.ln(), h1.ln()) {
        (Some(l0), Some(l1)) => (l0, l1),
        _ => return Err(InferenceError::ZeroMarginal),
    };
    let ratio = LogValue::from_ln(l0 - l1);
    Ok(BayesFactor {
        log10: (l0 - l1) / T::LN_10(),
        decimal: crate::io::format_log10(&ratio, 6),
    })
}

/// Marginal likelihoods of several models plus all pairwise Bayes factors
/// in listing order.
#[derive(Clone, Debug)]
pub struct BayesTestReport<T> {
    marginals: Vec<(String, LogValue<T>)>,
    factors: Vec<(String, String, BayesFactor<T>)>,
}

impl<T: Scalar> BayesTestReport<T> {
    pub fn new(marginals: Vec<(String, LogValue<T>)>) -> Result<Self, InferenceError> {
        let mut factors = Vec::new();
        for i in 0..marginals.len() {
            for j in i + 1..marginals.len() {
                factors.push((
                    marginals[i].0.clone(),
                    marginals[j].0.clone(),
                    bayes_factor(&marginals[i].1, &marginals[j].1)?,
                ));
            }
        }
        Ok(BayesTestReport { marginals, factors })
    }

    pub fn marginals(&self) -> &[(String, LogValue<T>)] {
        &self.marginals
    }

    pub fn factors(&self) -> &[(String, String, BayesFactor<T>)] {
        &self.factors
    }

    pub fn marginal(&self, model: &str) -> Option<&LogValue<T>> {
        self.marginals
            .iter()
            .find(|(name, _)| name == model)
            .map(|(_, v)| v)
    }

    pub fn factor(&self, h0: &str, h1: &str) -> Option<&BayesFactor<T>> {
        self.factors
            .iter()
            .find(|(a, b, _)| a == h0 && b == h1)
            .map(|(_, _, f)| f)
    }
}

/// Reversibility diagnostics for one unordered symbol pair.
#[derive(Clone, Debug, PartialEq)]
pub struct PairDiagnostic<T> {
    /// Lower label index of the pair.
    pub from: usize,
    /// Higher label index of the pair.
    pub to: usize,
    /// `N[from][to]`.
    pub forward: u64,
    /// `N[to][from]`.
    pub backward: u64,
    /// `forward - backward`.
    pub difference: i64,
    /// `nu_hat(from) * k_hat(from, to)`.
    pub balance_forward: T,
    /// `nu_hat(to) * k_hat(to, from)`.
    pub balance_backward: T,
}

impl<T> PairDiagnostic<T> {
    /// The count ratio as an exact pair, `None` when the denominator is 0.
    pub fn ratio(&self) -> Option<(u64, u64)> {
        (self.backward != 0).then_some((self.forward, self.backward))
    }
}

/// Reversibility diagnostics of a count table.
#[derive(Clone, Debug)]
pub struct DiagnosticsReport<T> {
    pub labels: Vec<String>,
    pub pairs: Vec<PairDiagnostic<T>>,
    /// Method-of-moments estimate of the stationary distribution: symbol
    /// occurrence frequencies when the endpoints are known, departure
    /// frequencies otherwise.
    pub stationary: Vec<T>,
}

/// Under reversibility the expected counts of `v -> v'` and `v' -> v`
/// transitions agree; this reports the observed ratios and differences per
/// unordered pair, plus the detailed-balance products
/// `nu_hat(v) k_hat(v, v')` against `nu_hat(v') k_hat(v', v)`.
pub fn reversibility_diagnostics<T: Scalar>(table: &CountTable) -> DiagnosticsReport<T> {
    let dim = table.dim();
    let stationary: Vec<T> = match table.symbol_counts() {
        Ok(counts) => {
            let total = cast_u64::<T>(table.sequence_length());
            counts.iter().map(|&c| cast_u64::<T>(c) / total).collect()
        }
        Err(_) => {
            let total = cast_u64::<T>(table.total_transitions().max(1));
            (0..dim)
                .map(|i| cast_u64::<T>(table.row_sum(i)) / total)
                .collect()
        }
    };
    let k_hat = |i: usize, j: usize| -> T {
        let row = table.row_sum(i);
        if row == 0 {
            T::zero()
        } else {
            cast_u64::<T>(table.count(i, j)) / cast_u64::<T>(row)
        }
    };
    let mut pairs = Vec::new();
    for i in 0..dim {
        for j in i + 1..dim {
            pairs.push(PairDiagnostic {
                from: i,
                to: j,
                forward: table.count(i, j),
                backward: table.count(j, i),
                difference: table.count(i, j) as i64 - table.count(j, i) as i64,
                balance_forward: stationary[i] * k_hat(i, j),
                balance_backward: stationary[j] * k_hat(j, i),
            });
        }
    }
    DiagnosticsReport {
        labels: table.labels().to_vec(),
        pairs,
        stationary,
    }
}

//! Text ingestion and file formats: symbol sequences, count tables, graph
//! specs, edge-weight files, and mantissa-exponent decimal formatting for
//! values far outside `f64` range.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeId, Graph, GraphError};
use crate::inference::{CountTable, InferenceError};
use crate::logval::LogValue;
use crate::num::Scalar;
use crate::path::{PathError, SimplexPoint, TransitionCounts};
use crate::prior::{PriorError, PriorParams};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("alphabet is empty")]
    EmptyAlphabet,
    #[error("line {line}, column {column}: character `{ch}` is not in the alphabet")]
    ForeignCharacter {
        line: usize,
        column: usize,
        ch: char,
    },
    #[error("sequence contains no symbols")]
    EmptySequence,
    #[error("count table: {0}")]
    MalformedTable(String),
    #[error("graph spec: {0}")]
    MalformedGraphSpec(String),
    #[error("weight file: {0}")]
    MalformedWeights(String),
    #[error("not a mantissa-exponent decimal: `{0}`")]
    MalformedNumber(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Inference(#[from] InferenceError),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Prior(#[from] PriorError),
}

/// A parsed symbol sequence with its alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequenceDocument {
    symbols: Vec<char>,
    alphabet: Vec<char>,
}

impl SequenceDocument {
    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn symbol_string(&self) -> String {
        self.symbols.iter().collect()
    }

    /// Sorted, deduplicated alphabet.
    pub fn alphabet(&self) -> &[char] {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }
}

/// The distinct symbol characters of a raw sequence text, sorted; digits
/// and whitespace are layout, not symbols.
pub fn observed_alphabet(text: &str) -> Vec<char> {
    let mut chars: Vec<char> = text
        .chars()
        .filter(|c| !c.is_whitespace() && !c.is_ascii_digit())
        .collect();
    chars.sort();
    chars.dedup();
    chars
}

/// Parses a sequence file: whitespace, digits, and line-position indices
/// are stripped; any residual character outside the alphabet is an error
/// reported with its position.
pub fn parse_sequence(text: &str, alphabet: &[char]) -> Result<SequenceDocument, ParseError> {
    if alphabet.is_empty() {
        return Err(ParseError::EmptyAlphabet);
    }
    let mut sorted = alphabet.to_vec();
    sorted.sort();
    sorted.dedup();
    let mut symbols = Vec::new();
    for (line_idx, line) in text.lines().enumerate() {
        for (col_idx, ch) in line.chars().enumerate() {
            if ch.is_whitespace() || ch.is_ascii_digit() {
                continue;
            }
            if sorted.binary_search(&ch).is_ok() {
                symbols.push(ch);
            } else {
                return Err(ParseError::ForeignCharacter {
                    line: line_idx + 1,
                    column: col_idx + 1,
                    ch,
                });
            }
        }
    }
    Ok(SequenceDocument {
        symbols,
        alphabet: sorted,
    })
}

/// Directed bigram counts, the undirected transition counts, and the
/// complete-graph-with-loops over the document's alphabet.
pub fn sequence_to_counts(
    doc: &SequenceDocument,
) -> Result<(CountTable, TransitionCounts, Graph), ParseError> {
    if doc.is_empty() {
        return Err(ParseError::EmptySequence);
    }
    let labels: Vec<String> = doc.alphabet().iter().map(|c| c.to_string()).collect();
    let index = |c: char| -> usize {
        doc.alphabet()
            .binary_search(&c)
            .expect("parsed symbols are in the alphabet")
    };
    let dim = labels.len();
    let mut counts = vec![vec![0u64; dim]; dim];
    for pair in doc.symbols().windows(2) {
        counts[index(pair[0])][index(pair[1])] += 1;
    }
    let start = labels[index(doc.symbols()[0])].clone();
    let end = labels[index(*doc.symbols().last().unwrap())].clone();
    let table = CountTable::new(labels, counts)?.with_endpoints(&start, &end)?;
    let (graph, transition_counts) = table.to_graph_and_counts()?;
    Ok((table, transition_counts, graph))
}

fn split_cells(line: &str) -> Vec<&str> {
    line.split([',', '\t', ' '])
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect()
}

/// Parses a labeled square count table (tab, space, or comma delimited):
/// a header row of symbol labels, then one labeled row of nonnegative
/// integers per symbol. The diagonal holds directed self-transition counts
/// (undoubled).
pub fn parse_count_table(text: &str) -> Result<CountTable, ParseError> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| ParseError::MalformedTable("empty input".to_string()))?;
    let labels: Vec<String> = split_cells(header).into_iter().map(String::from).collect();
    if labels.is_empty() {
        return Err(ParseError::MalformedTable("empty header".to_string()));
    }
    let mut counts = Vec::with_capacity(labels.len());
    for (i, line) in lines.enumerate() {
        let cells = split_cells(line);
        if cells.len() != labels.len() + 1 {
            return Err(ParseError::MalformedTable(format!(
                "row {} has {} cells, expected {}",
                i + 1,
                cells.len(),
                labels.len() + 1
            )));
        }
        if cells[0] != labels[i] {
            return Err(ParseError::MalformedTable(format!(
                "row {} is labeled `{}`, expected `{}`",
                i + 1,
                cells[0],
                labels[i]
            )));
        }
        let row: Result<Vec<u64>, _> = cells[1..].iter().map(|c| c.parse::<u64>()).collect();
        counts.push(row.map_err(|e| ParseError::MalformedTable(format!("row {}: {e}", i + 1)))?);
    }
    if counts.len() != labels.len() {
        return Err(ParseError::MalformedTable(format!(
            "{} rows for {} labels",
            counts.len(),
            labels.len()
        )));
    }
    Ok(CountTable::new(labels, counts)?)
}

/// Renders a count table in the same shape [`parse_count_table`] reads.
pub fn format_count_table(table: &CountTable) -> String {
    let mut out = String::new();
    for label in table.labels() {
        out.push('\t');
        out.push_str(label);
    }
    out.push('\n');
    for (i, label) in table.labels().iter().enumerate() {
        out.push_str(label);
        for j in 0..table.dim() {
            out.push('\t');
            out.push_str(&table.count(i, j).to_string());
        }
        out.push('\n');
    }
    out
}

#[derive(Serialize, Deserialize)]
struct GraphSpecFile {
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
}

/// Parses the graph spec format: a TOML document with `vertices` (labels)
/// and `edges` (unordered label pairs).
pub fn parse_graph_spec(text: &str) -> Result<Graph, ParseError> {
    let spec: GraphSpecFile =
        toml::from_str(text).map_err(|e| ParseError::MalformedGraphSpec(e.to_string()))?;
    let labels: Vec<&str> = spec.vertices.iter().map(String::as_str).collect();
    let pairs: Vec<(&str, &str)> = spec
        .edges
        .iter()
        .map(|(a, b)| (a.as_str(), b.as_str()))
        .collect();
    Ok(Graph::from_labeled_edges(&labels, &pairs)?)
}

/// Renders a graph in the spec format parsed by [`parse_graph_spec`].
pub fn format_graph_spec(g: &Graph) -> String {
    let spec = GraphSpecFile {
        vertices: g.labels().map(String::from).collect(),
        edges: g
            .edges()
            .iter()
            .map(|e| {
                let (u, v) = e.endpoints();
                (g.label(u).to_string(), g.label(v).to_string())
            })
            .collect(),
    };
    toml::to_string(&spec).expect("graph spec serializes")
}

/// Canonical label of an edge: endpoint labels joined by `-`, lower vertex
/// index first (loops repeat the label).
pub fn edge_label(g: &Graph, e: EdgeId) -> String {
    let (u, v) = g.edge(e).endpoints();
    format!("{}-{}", g.label(u), g.label(v))
}

fn parse_edge_value_map<T: Scalar>(
    map: &BTreeMap<String, f64>,
    g: &Graph,
) -> Result<Vec<T>, ParseError> {
    let mut values: Vec<Option<T>> = vec![None; g.edge_count()];
    let labels: BTreeMap<String, EdgeId> = g
        .edges()
        .iter()
        .map(|e| (edge_label(g, e.id()), e.id()))
        .collect();
    for (key, &value) in map {
        let Some(&e) = labels.get(key) else {
            return Err(ParseError::MalformedWeights(format!(
                "`{key}` is not an edge of the graph"
            )));
        };
        values[e.index()] = Some(T::from_f64(value).ok_or_else(|| {
            ParseError::MalformedWeights(format!("`{key}` value does not fit the scalar type"))
        })?);
    }
    values
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            v.ok_or_else(|| {
                ParseError::MalformedWeights(format!(
                    "missing weight for edge `{}`",
                    edge_label(g, EdgeId::new(i))
                ))
            })
        })
        .collect()
}

/// Parses a flat TOML map from edge labels (`u-v`) to numbers; every edge
/// of the graph must appear exactly once.
pub fn parse_edge_values<T: Scalar>(text: &str, g: &Graph) -> Result<Vec<T>, ParseError> {
    let map: BTreeMap<String, f64> =
        toml::from_str(text).map_err(|e| ParseError::MalformedWeights(e.to_string()))?;
    parse_edge_value_map(&map, g)
}

/// Renders per-edge values as the flat TOML map read by
/// [`parse_edge_values`].
pub fn format_edge_values<T: Scalar>(g: &Graph, values: &[T]) -> String {
    let map: BTreeMap<String, f64> = g
        .edges()
        .iter()
        .map(|e| {
            (
                edge_label(g, e.id()),
                values[e.id().index()].to_f64().unwrap_or(f64::NAN),
            )
        })
        .collect();
    toml::to_string(&map).expect("weight map serializes")
}

/// Parses a simplex-point file: an edge-value map that must sum to one.
pub fn parse_simplex_point<T: Scalar>(
    text: &str,
    g: &Graph,
) -> Result<SimplexPoint<T>, ParseError> {
    let values = parse_edge_values(text, g)?;
    Ok(SimplexPoint::new(g, values)?)
}

#[derive(Serialize, Deserialize)]
struct PriorParamsFile {
    v0: String,
    weights: BTreeMap<String, f64>,
}

/// Parses a prior-parameter file: `v0 = "label"` plus a `[weights]` table
/// keyed by edge label.
pub fn parse_prior_params<T: Scalar>(text: &str, g: &Graph) -> Result<PriorParams<T>, ParseError> {
    let file: PriorParamsFile =
        toml::from_str(text).map_err(|e| ParseError::MalformedWeights(e.to_string()))?;
    let v0 = g
        .vertex_by_label(&file.v0)
        .ok_or_else(|| ParseError::MalformedWeights(format!("v0 `{}` is not a vertex", file.v0)))?;
    let weights = parse_edge_value_map::<T>(&file.weights, g)?;
    Ok(PriorParams::new(g, v0, weights)?)
}

/// Renders prior parameters in the format read by [`parse_prior_params`].
pub fn format_prior_params<T: Scalar>(g: &Graph, params: &PriorParams<T>) -> String {
    let file = PriorParamsFile {
        v0: g.label(params.v0()).to_string(),
        weights: g
            .edges()
            .iter()
            .map(|e| {
                (
                    edge_label(g, e.id()),
                    params.edge_weight(e.id()).to_f64().unwrap_or(f64::NAN),
                )
            })
            .collect(),
    };
    toml::to_string(&file).expect("prior params serialize")
}

/// Renders a log-domain value as `m.mmm...e<exp>` with `sig` significant
/// digits (round-half-even on the mantissa); the exact zero prints as `0`.
///
/// The rendering is faithful to the stored logarithm. An `f64` log near
/// magnitude 5000 pins the value to about 12 decimal digits, so mantissa
/// digits beyond that reflect storage precision, not the abstract value.
pub fn format_log10<T: Scalar>(v: &LogValue<T>, sig: usize) -> String {
    assert!((1..=17).contains(&sig), "sig must be within 1..=17");
    let Some(l10) = v.log10() else {
        return "0".to_string();
    };
    let l10 = l10.to_f64().expect("log10 converts to f64");
    let mut exponent = l10.floor() as i64;
    let mut mantissa = 10f64.powf(l10 - exponent as f64);
    if mantissa >= 10.0 {
        mantissa /= 10.0;
        exponent += 1;
    }
    if mantissa < 1.0 {
        mantissa *= 10.0;
        exponent -= 1;
    }
    let rendered = format!("{:.*e}", sig - 1, mantissa);
    let (digits, bump) = rendered.split_once('e').expect("float exp form");
    let bump: i64 = bump.parse().expect("float exponent parses");
    format!("{digits}e{}", exponent + bump)
}

/// Parses the output of [`format_log10`] (or any `<mantissa>e<exp>`
/// decimal) back into a log-domain value.
pub fn parse_log10(text: &str) -> Result<LogValue<f64>, ParseError> {
    let t = text.trim();
    if t == "0" {
        return Ok(LogValue::zero());
    }
    let (mantissa_str, exp_str) = t
        .split_once(['e', 'E'])
        .ok_or_else(|| ParseError::MalformedNumber(t.to_string()))?;
    let mantissa: f64 = mantissa_str
        .parse()
        .map_err(|_| ParseError::MalformedNumber(t.to_string()))?;
    let expo: i64 = exp_str
        .parse()
        .map_err(|_| ParseError::MalformedNumber(t.to_string()))?;
    if mantissa < 0.0 {
        return Err(ParseError::MalformedNumber(t.to_string()));
    }
    if mantissa == 0.0 {
        return Ok(LogValue::zero());
    }
    Ok(LogValue::from_ln(
        mantissa.ln() + expo as f64 * std::f64::consts::LN_10,
    ))
}

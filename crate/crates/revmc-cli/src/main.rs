//! `revmc`: Bayesian analysis of reversible Markov chains on finite graphs.
//!
//! Subcommands map one-to-one onto the library's capabilities: `counts`
//! (sequence ingestion), `test` (Bayes-factor model comparison plus
//! reversibility diagnostics), `simulate` (edge-reinforced random walk
//! dumps), `posterior` (conjugate update), and `density` (prior density
//! evaluation). Every report carries the tool version, the seed, and a
//! digest of each input for reproducibility.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sha2::{Digest, Sha256};

use revmc::errw::{posterior_edge_frequency_samples, RandomSource};
use revmc::graph::{Graph, VertexId};
use revmc::inference::{
    log_marginal_competitor, log_marginal_reversible, posterior_update, reversibility_diagnostics,
    BayesTestReport, InferenceError, ModelSpec,
};
use revmc::io;
use revmc::prior::{log_density, PriorError, PriorParams};
use revmc::LogValue;

/// Environment variable consulted for the default seed.
const SEED_ENV: &str = "REVMC_SEED";

#[derive(Parser)]
#[command(
    name = "revmc",
    version,
    about = "Bayesian analysis of reversible Markov chains"
)]
struct Cli {
    /// Seed for every randomized operation (default: $REVMC_SEED, then 0).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ingest a sequence file and print its bigram and transition counts.
    Counts {
        /// Sequence file (whitespace, digits, and line indices are layout).
        input: PathBuf,
        /// Alphabet as a string of symbols; default: the observed symbols.
        #[arg(long)]
        alphabet: Option<String>,
    },
    /// Bayes-factor comparison of sequence models, with diagnostics.
    Test {
        /// Sequence file or labeled count table.
        input: PathBuf,
        /// Comma-separated models: iid-uniform, iid, rev, markov.
        #[arg(long, value_delimiter = ',', required = true)]
        models: Vec<String>,
        /// Start symbol (required for `rev` with a count-table input).
        #[arg(long)]
        start: Option<String>,
        /// End symbol (required for `rev` with a count-table input).
        #[arg(long)]
        end: Option<String>,
        /// Alphabet override for sequence inputs.
        #[arg(long)]
        alphabet: Option<String>,
        /// Prior for `rev`: `uniform:<c>` or a prior-params TOML file.
        #[arg(long, default_value = "uniform:1")]
        prior: String,
        /// Dirichlet hyperparameter for `iid` (one value for all symbols).
        #[arg(long, default_value_t = 1.0)]
        dirichlet: f64,
        /// Per-cell Dirichlet hyperparameter for `markov` rows.
        #[arg(long, default_value_t = 1.0)]
        markov_alpha: f64,
    },
    /// Run edge-reinforced random walkers and dump per-edge frequencies.
    Simulate {
        /// Graph spec file (TOML: vertices, edges).
        #[arg(long)]
        graph: PathBuf,
        /// Initial weights: prior-params TOML file (v0 plus `[weights]`).
        #[arg(long)]
        weights: Option<PathBuf>,
        /// Starting vertex label (overrides the weights file's v0).
        #[arg(long)]
        v0: Option<String>,
        /// Steps per walker.
        #[arg(long)]
        steps: u64,
        /// Number of independent walkers.
        #[arg(long)]
        walkers: u64,
        /// Write the dump here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Conjugate posterior update from an observed sequence.
    Posterior {
        /// Sequence file.
        input: PathBuf,
        /// Prior: `uniform:<c>` or a prior-params TOML file.
        #[arg(long, default_value = "uniform:1")]
        prior: String,
        /// Alphabet override.
        #[arg(long)]
        alphabet: Option<String>,
        /// Also write the posterior as a prior-params TOML file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the prior density at a point of the edge-weight simplex.
    Density {
        /// Graph spec file.
        #[arg(long)]
        graph: PathBuf,
        /// Simplex point file (edge-label = weight map summing to 1).
        #[arg(long)]
        at: PathBuf,
        /// Prior: `uniform:<c>` or a prior-params TOML file.
        #[arg(long, default_value = "uniform:1")]
        prior: String,
        /// Starting vertex label (required with a `uniform:` prior).
        #[arg(long)]
        v0: Option<String>,
    },
}

/// Input errors exit with 2, numerical-domain errors with 3.
enum CliError {
    Input(String),
    Numeric(String),
}

impl CliError {
    fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Input(_) => ExitCode::from(2),
            CliError::Numeric(_) => ExitCode::from(3),
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Numeric(m) => m,
        }
    }
}

impl From<io::ParseError> for CliError {
    fn from(e: io::ParseError) -> Self {
        match e {
            io::ParseError::Prior(p) => p.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<PriorError> for CliError {
    fn from(e: PriorError) -> Self {
        match e {
            PriorError::BoundaryPoint { .. } | PriorError::NotPositiveDefinite => {
                CliError::Numeric(e.to_string())
            }
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<InferenceError> for CliError {
    fn from(e: InferenceError) -> Self {
        match e {
            InferenceError::ZeroMarginal => CliError::Numeric(e.to_string()),
            InferenceError::Prior(p) => p.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(value) => value
            .parse()
            .map_err(|_| CliError::Input(format!("{SEED_ENV} is not a valid u64: `{value}`"))),
        Err(_) => Ok(0),
    }
}

fn read_input(path: &Path) -> Result<(String, String), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let digest = hex::encode(Sha256::digest(text.as_bytes()));
    Ok((text, digest))
}

/// Writes a report to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(report: &str) {
    use std::io::Write;
    let mut stdout = std::io::stdout().lock();
    if let Err(e) = stdout.write_all(report.as_bytes()) {
        if e.kind() != std::io::ErrorKind::BrokenPipe {
            eprintln!("error: cannot write to stdout: {e}");
        }
    }
}

fn header(seed: u64, inputs: &[(&Path, &str)]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "tool: revmc {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, "seed: {seed}");
    for (path, digest) in inputs {
        let _ = writeln!(out, "input: {} sha256:{digest}", path.display());
    }
    out
}

/// `uniform:<c>` or a prior-params file; returns the weights and, for a
/// file, its v0.
fn resolve_prior(spec: &str, g: &Graph) -> Result<(Vec<f64>, Option<VertexId>), CliError> {
    if let Some(c) = spec.strip_prefix("uniform:") {
        let c: f64 = c
            .parse()
            .map_err(|_| CliError::Input(format!("bad uniform prior constant `{c}`")))?;
        if c.is_nan() || c <= 0.0 {
            return Err(CliError::Input(
                "prior constant must be positive".to_string(),
            ));
        }
        return Ok((vec![c; g.edge_count()], None));
    }
    let (text, _) = read_input(Path::new(spec))?;
    let params = io::parse_prior_params::<f64>(&text, g)?;
    Ok((params.edge_weights().to_vec(), Some(params.v0())))
}

fn parse_alphabet(text: &str, flag: &Option<String>) -> Vec<char> {
    match flag {
        Some(s) => {
            let mut chars: Vec<char> = s.chars().collect();
            chars.sort();
            chars.dedup();
            chars
        }
        None => io::observed_alphabet(text),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let seed = resolve_seed(cli.seed)?;
    match cli.command {
        Command::Counts { input, alphabet } => counts_cmd(seed, &input, &alphabet),
        Command::Test {
            input,
            models,
            start,
            end,
            alphabet,
            prior,
            dirichlet,
            markov_alpha,
        } => test_cmd(
            seed,
            &input,
            &models,
            start.as_deref(),
            end.as_deref(),
            &alphabet,
            &prior,
            dirichlet,
            markov_alpha,
        ),
        Command::Simulate {
            graph,
            weights,
            v0,
            steps,
            walkers,
            out,
        } => simulate_cmd(
            seed,
            &graph,
            weights.as_deref(),
            v0.as_deref(),
            steps,
            walkers,
            out.as_deref(),
        ),
        Command::Posterior {
            input,
            prior,
            alphabet,
            out,
        } => posterior_cmd(seed, &input, &prior, &alphabet, out.as_deref()),
        Command::Density {
            graph,
            at,
            prior,
            v0,
        } => density_cmd(seed, &graph, &at, &prior, v0.as_deref()),
    }
}

fn counts_cmd(seed: u64, input: &Path, alphabet: &Option<String>) -> Result<(), CliError> {
    let (text, digest) = read_input(input)?;
    let alphabet = parse_alphabet(&text, alphabet);
    let doc = io::parse_sequence(&text, &alphabet)?;
    let (table, counts, g) = io::sequence_to_counts(&doc)?;
    let mut r = header(seed, &[(input, &digest)]);
    let _ = writeln!(r, "n: {}", doc.len());
    let _ = writeln!(r, "start: {}", g.label(counts.start()));
    let _ = writeln!(r, "end: {}", g.label(counts.end()));
    for (label, k) in table.labels().iter().zip(table.symbol_counts()?) {
        let _ = writeln!(r, "count.{label}: {k}");
    }
    let _ = writeln!(r);
    let _ = writeln!(r, "directed bigram counts:");
    r.push_str(&io::format_count_table(&table));
    let _ = writeln!(r);
    let _ = writeln!(r, "undirected transition counts (loops doubled):");
    let labels = table.labels();
    let _ = writeln!(r, "\t{}", labels.join("\t"));
    for (i, row_label) in labels.iter().enumerate() {
        let _ = write!(r, "{row_label}");
        for j in 0..labels.len() {
            let e = g
                .edge_between(VertexId::new(i), VertexId::new(j))
                .expect("complete graph");
            let _ = write!(r, "\t{}", counts.edge_count(e));
        }
        let _ = writeln!(r);
    }
    emit(&r);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn test_cmd(
    seed: u64,
    input: &Path,
    models: &[String],
    start: Option<&str>,
    end: Option<&str>,
    alphabet: &Option<String>,
    prior: &str,
    dirichlet: f64,
    markov_alpha: f64,
) -> Result<(), CliError> {
    let (text, digest) = read_input(input)?;

    // a count table parses as a labeled integer matrix; anything else is
    // treated as a sequence
    let (table, from_table) = match io::parse_count_table(&text) {
        Ok(t) => (t, true),
        Err(_) => {
            let alphabet = parse_alphabet(&text, alphabet);
            let doc = io::parse_sequence(&text, &alphabet)?;
            let (table, _, _) = io::sequence_to_counts(&doc)?;
            (table, false)
        }
    };
    let table = match (start, end) {
        (Some(s), Some(e)) => table.with_endpoints(s, e)?,
        (None, None) => table,
        _ => {
            return Err(CliError::Input(
                "--start and --end must be given together".to_string(),
            ))
        }
    };
    let n = table.sequence_length();

    let mut marginals: Vec<(String, LogValue)> = Vec::new();
    for model in models {
        let value = match model.as_str() {
            "iid-uniform" => log_marginal_competitor(&ModelSpec::IidUniform, &table, n)?,
            "iid" => log_marginal_competitor(
                &ModelSpec::IidDirichlet(vec![dirichlet; table.dim()]),
                &table,
                n,
            )?,
            "markov" => log_marginal_competitor(
                &ModelSpec::FullMarkov(vec![vec![markov_alpha; table.dim()]; table.dim()]),
                &table,
                n,
            )?,
            "rev" => {
                if from_table && (start.is_none() || end.is_none()) {
                    return Err(CliError::Input(
                        "the reversible model needs --start and --end with a count-table input"
                            .to_string(),
                    ));
                }
                let (g, counts) = table.to_graph_and_counts()?;
                let (weights, file_v0) = resolve_prior(prior, &g)?;
                if let Some(v0) = file_v0 {
                    if v0 != counts.start() {
                        return Err(CliError::Input(format!(
                            "prior file v0 `{}` conflicts with the data start `{}`",
                            g.label(v0),
                            g.label(counts.start())
                        )));
                    }
                }
                let params = PriorParams::new(&g, counts.start(), weights)?;
                log_marginal_reversible(&g, &params, &counts, false)?
            }
            other => {
                return Err(CliError::Input(format!(
                    "unknown model `{other}` (expected iid-uniform, iid, rev, markov)"
                )))
            }
        };
        marginals.push((model.clone(), value));
    }

    let report = BayesTestReport::new(marginals)?;
    let mut r = header(seed, &[(input, &digest)]);
    let _ = writeln!(r, "n: {n}");
    if let Ok((s, e)) = table.endpoints() {
        let _ = writeln!(r, "start: {}", table.labels()[s]);
        let _ = writeln!(r, "end: {}", table.labels()[e]);
    }
    for (name, value) in report.marginals() {
        let _ = writeln!(r, "logml.{name}: {}", io::format_log10(value, 16));
    }
    for (h0, h1, bf) in report.factors() {
        let _ = writeln!(r, "bf.{h0}_vs_{h1}: {}", bf.decimal);
    }
    let diag = reversibility_diagnostics::<f64>(&table);
    for pair in &diag.pairs {
        let key = format!("{}{}", diag.labels[pair.from], diag.labels[pair.to]);
        match pair.ratio() {
            Some((num, den)) => {
                let _ = writeln!(r, "diag.ratio.{key}: {num}/{den}");
            }
            None => {
                let _ = writeln!(r, "diag.ratio.{key}: {}/0 (undefined)", pair.forward);
            }
        }
        let _ = writeln!(r, "diag.diff.{key}: {}", pair.difference);
        let _ = writeln!(
            r,
            "diag.balance.{key}: {:.6} vs {:.6}",
            pair.balance_forward, pair.balance_backward
        );
    }
    for (label, nu) in diag.labels.iter().zip(&diag.stationary) {
        let _ = writeln!(r, "diag.nu.{label}: {nu:.6}");
    }
    emit(&r);
    Ok(())
}

fn simulate_cmd(
    seed: u64,
    graph: &Path,
    weights: Option<&Path>,
    v0: Option<&str>,
    steps: u64,
    walkers: u64,
    out: Option<&Path>,
) -> Result<(), CliError> {
    if steps == 0 || walkers == 0 {
        return Err(CliError::Input(
            "--steps and --walkers must be at least 1".to_string(),
        ));
    }
    let (graph_text, graph_digest) = read_input(graph)?;
    let g = io::parse_graph_spec(&graph_text)?;
    let mut inputs = vec![(graph, graph_digest.clone())];
    let params = match weights {
        Some(path) => {
            let (text, digest) = read_input(path)?;
            inputs.push((path, digest));
            let file_params = io::parse_prior_params::<f64>(&text, &g)?;
            match v0 {
                Some(label) => {
                    let v = g
                        .vertex_by_label(label)
                        .ok_or_else(|| CliError::Input(format!("unknown vertex `{label}`")))?;
                    PriorParams::new(&g, v, file_params.edge_weights().to_vec())?
                }
                None => file_params,
            }
        }
        None => {
            let label = v0.ok_or_else(|| {
                CliError::Input("either --weights or --v0 is required".to_string())
            })?;
            let v = g
                .vertex_by_label(label)
                .ok_or_else(|| CliError::Input(format!("unknown vertex `{label}`")))?;
            PriorParams::constant(&g, v, 1.0)?
        }
    };

    let rng = RandomSource::from_seed(seed);
    let samples = posterior_edge_frequency_samples(&g, &params, steps, walkers, &rng);

    let mut dump = String::new();
    let _ = writeln!(dump, "# revmc {} simulate", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(dump, "# seed: {seed}");
    let _ = writeln!(dump, "# steps: {steps}");
    let _ = writeln!(dump, "# walkers: {walkers}");
    let edge_labels: Vec<String> = g
        .edges()
        .iter()
        .map(|e| io::edge_label(&g, e.id()))
        .collect();
    let _ = writeln!(dump, "# columns: {}", edge_labels.join(" "));
    for w in 0..samples.walker_count() {
        let row: Vec<String> = samples
            .walker_counts(w)
            .iter()
            .map(|&k| format!("{}", k as f64 / steps as f64))
            .collect();
        let _ = writeln!(dump, "{}", row.join(" "));
    }

    let input_refs: Vec<(&Path, &str)> = inputs.iter().map(|(p, d)| (*p, d.as_str())).collect();
    let mut r = header(seed, &input_refs);
    let _ = writeln!(r, "v0: {}", g.label(params.v0()));
    let _ = writeln!(r, "steps: {steps}");
    let _ = writeln!(r, "walkers: {walkers}");
    for e in g.edges() {
        let _ = writeln!(
            r,
            "frequency.mean.{}: {:.6}",
            io::edge_label(&g, e.id()),
            samples.mean_frequency::<f64>(e.id())
        );
    }
    let mut nu = vec![0.0_f64; g.vertex_count()];
    for w in 0..samples.walker_count() {
        for (acc, v) in nu
            .iter_mut()
            .zip(samples.stationary_for_walker::<f64>(&g, w))
        {
            *acc += v;
        }
    }
    for (v, acc) in nu.iter_mut().enumerate() {
        *acc /= walkers as f64;
        let _ = writeln!(
            r,
            "stationary.mean.{}: {:.6}",
            g.label(VertexId::new(v)),
            acc
        );
    }
    match out {
        Some(path) => std::fs::write(path, dump)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?,
        None => r.push_str(&dump),
    }
    emit(&r);
    Ok(())
}

fn posterior_cmd(
    seed: u64,
    input: &Path,
    prior: &str,
    alphabet: &Option<String>,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let (text, digest) = read_input(input)?;
    let alphabet = parse_alphabet(&text, alphabet);
    let doc = io::parse_sequence(&text, &alphabet)?;
    let (_, counts, g) = io::sequence_to_counts(&doc)?;
    let (weights, file_v0) = resolve_prior(prior, &g)?;
    if let Some(v0) = file_v0 {
        if v0 != counts.start() {
            return Err(CliError::Input(format!(
                "prior file v0 `{}` conflicts with the data start `{}`",
                g.label(v0),
                g.label(counts.start())
            )));
        }
    }
    let params = PriorParams::new(&g, counts.start(), weights)?;
    let updated = posterior_update(&g, &params, &counts)?;
    let mut r = header(seed, &[(input, &digest)]);
    let _ = writeln!(r, "n: {}", doc.len());
    let _ = writeln!(r, "posterior.v0: {}", g.label(updated.v0()));
    for e in g.edges() {
        let _ = writeln!(
            r,
            "posterior.a.{}: {}",
            io::edge_label(&g, e.id()),
            updated.edge_weight(e.id())
        );
    }
    if let Some(path) = out {
        std::fs::write(path, io::format_prior_params(&g, &updated))
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    }
    emit(&r);
    Ok(())
}

fn density_cmd(
    seed: u64,
    graph: &Path,
    at: &Path,
    prior: &str,
    v0: Option<&str>,
) -> Result<(), CliError> {
    let (graph_text, graph_digest) = read_input(graph)?;
    let g = io::parse_graph_spec(&graph_text)?;
    let (point_text, point_digest) = read_input(at)?;
    let x = io::parse_simplex_point::<f64>(&point_text, &g)?;
    let (weights, file_v0) = resolve_prior(prior, &g)?;
    let v0 = match (v0, file_v0) {
        (Some(label), _) => g
            .vertex_by_label(label)
            .ok_or_else(|| CliError::Input(format!("unknown vertex `{label}`")))?,
        (None, Some(v)) => v,
        (None, None) => {
            return Err(CliError::Input(
                "--v0 is required with a uniform prior".to_string(),
            ))
        }
    };
    let params = PriorParams::new(&g, v0, weights)?;
    let phi = log_density(&g, &params, &x)?;
    let mut r = header(seed, &[(graph, &graph_digest), (at, &point_digest)]);
    let _ = writeln!(r, "v0: {}", g.label(params.v0()));
    let _ = writeln!(r, "density.value: {}", io::format_log10(&phi, 6));
    let _ = writeln!(r, "density.ln: {}", phi.ln_or_neg_inf());
    let _ = writeln!(
        r,
        "density.log10: {}",
        phi.log10().map_or("-inf".to_string(), |l| l.to_string())
    );
    emit(&r);
    Ok(())
}

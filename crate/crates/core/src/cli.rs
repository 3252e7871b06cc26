//! The `signet` command line.
//!
//! Exit codes: 0 on success, 2 for usage errors (bad or conflicting flags,
//! detected before any work starts), 1 when a run fails.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::eval::{
    distance_stats, edge_sign_experiment, node_label_experiment, partial_info_experiment, EdgeFeatureOp, EvalError,
    ExperimentConfig, ResultTable,
};
use crate::graph::{
    generate_er_signed, load_edge_list, load_edge_list_remapped, load_labels, two_community, write_edge_list,
    write_labels, ErConfig, GraphError, IdMap, NodeLabels, SignedGraph, TwoCommunityConfig,
};
use crate::sampler::{build_cache, SamplerError, WalkConfig};
use crate::trainer::{fit, FinalEmbedding, SamplingMode, TrainConfig, TrainError};

#[derive(Debug, Parser)]
#[command(name = "signet", version, about = "Signed network embeddings with targeted node sampling")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Learn an embedding and write it to a file.
    Train(TrainCmd),
    /// Edge-sign prediction over repeated 50/50 edge splits.
    EvalEdges(EvalEdgesCmd),
    /// Node-label prediction over repeated 50/50 node splits.
    EvalNodes(EvalNodesCmd),
    /// Label prediction for nodes whose out-edges were removed.
    Partial(PartialCmd),
    /// Graph statistics, and edge distance statistics given an embedding.
    Stats(StatsCmd),
    /// Generate a synthetic signed graph.
    Gen(GenCmd),
    /// Write the walk caches of every node.
    DumpCache(DumpCacheCmd),
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Edge list with `src dst weight` rows.
    #[arg(long)]
    pub input: PathBuf,
    /// Treat rows as arcs.
    #[arg(long, conflicts_with = "undirected")]
    pub directed: bool,
    /// Treat rows as undirected edges.
    #[arg(long)]
    pub undirected: bool,
    /// Renumber arbitrary node ids densely; output files use the original ids.
    #[arg(long)]
    pub remap_ids: bool,
}

impl GraphArgs {
    fn is_directed(&self, default: bool) -> bool {
        if self.directed {
            true
        } else if self.undirected {
            false
        } else {
            default
        }
    }
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Embedding dimension K (x and φ get K/2 each in directed mode).
    #[arg(long, default_value_t = 40)]
    pub dim: usize,
    /// Number of edge samples T.
    #[arg(long, default_value_t = 100_000_000)]
    pub samples: u64,
    /// Extra examples per edge, N.
    #[arg(long, default_value_t = 5)]
    pub neg_samples: usize,
    /// Walk length l.
    #[arg(long, default_value_t = 50)]
    pub walk_len: usize,
    /// Walks per node r.
    #[arg(long, default_value_t = 1)]
    pub walks_per_node: usize,
    /// `targeted` (walk caches) or `ns` (uniform negative sampling).
    #[arg(long, default_value = "targeted")]
    pub mode: SamplingMode,
    /// Initial learning rate.
    #[arg(long, default_value_t = 0.025)]
    pub lr: f64,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl TrainArgs {
    fn configs(&self) -> (WalkConfig, TrainConfig) {
        let walk = WalkConfig {
            walk_length: self.walk_len,
            walks_per_node: self.walks_per_node,
            seed: self.seed,
            threads: self.threads,
        };
        let train = TrainConfig {
            dim: self.dim,
            total_samples: self.samples,
            neg_samples: self.neg_samples,
            learning_rate: self.lr,
            mode: self.mode,
            threads: self.threads,
            seed: self.seed,
            ..TrainConfig::default()
        };
        (walk, train)
    }

    fn validated(&self, directed: bool) -> Result<(WalkConfig, TrainConfig), CliError> {
        let (walk, train) = self.configs();
        train.validate(directed).map_err(|e| CliError::Usage(e.to_string()))?;
        if train.mode == SamplingMode::Targeted {
            walk.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        }
        Ok((walk, train))
    }
}

#[derive(Debug, Args)]
pub struct TrainCmd {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub train: TrainArgs,
    /// Embedding output path.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvalEdgesCmd {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub train: TrainArgs,
    #[arg(long, default_value = "hadamard")]
    pub op: EdgeFeatureOp,
    #[arg(long, default_value_t = 5)]
    pub repeats: usize,
    /// CSV output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalNodesCmd {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub train: TrainArgs,
    /// `node label` rows.
    #[arg(long)]
    pub labels: PathBuf,
    #[arg(long, default_value_t = 5)]
    pub repeats: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PartialCmd {
    /// The graph is read as directed unless `--undirected` is given, which is
    /// rejected.
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub train: TrainArgs,
    #[arg(long)]
    pub labels: PathBuf,
    /// Shares of nodes whose out-edges are removed.
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.2,0.3,0.4,0.5", value_parser = parse_fraction)]
    pub fractions: Vec<f64>,
    #[arg(long, default_value_t = 1)]
    pub repeats: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StatsCmd {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Embedding file to compute edge distance statistics for.
    #[arg(long)]
    pub embedding: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum GraphModel {
    /// Erdős–Rényi with random signs.
    Er,
    /// Two equal communities, positive inside and negative across.
    TwoCommunity,
}

#[derive(Debug, Args)]
pub struct GenCmd {
    #[arg(long, value_enum, default_value = "er")]
    pub model: GraphModel,
    #[arg(long)]
    pub nodes: usize,
    /// Expected degree (ER only).
    #[arg(long, default_value_t = 10.0)]
    pub avg_degree: f64,
    /// Share of negative edges (ER only).
    #[arg(long, default_value_t = 0.2, value_parser = parse_fraction)]
    pub neg: f64,
    /// Expected same-community degree (two-community only).
    #[arg(long, default_value_t = 8.0)]
    pub intra_degree: f64,
    /// Expected cross-community degree (two-community only).
    #[arg(long, default_value_t = 4.0)]
    pub inter_degree: f64,
    #[arg(long)]
    pub directed: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// Community labels output (two-community only).
    #[arg(long)]
    pub labels_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DumpCacheCmd {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, default_value_t = 50)]
    pub walk_len: usize,
    #[arg(long, default_value_t = 1)]
    pub walks_per_node: usize,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn parse_fraction(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is outside [0, 1]"))
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    File { path: PathBuf, source: io::Error },
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Sampler(#[from] SamplerError),
    #[error(transparent)]
    Train(#[from] TrainError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path).map(BufReader::new).map_err(|source| CliError::File { path: path.to_owned(), source })
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(|source| CliError::File { path: path.to_owned(), source })
}

/// Writes through `f` to `path`, or to stdout when there is none.
fn emit(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let mut w = create(p)?;
            f(&mut w).and_then(|()| w.flush()).map_err(|source| CliError::File { path: p.to_owned(), source })
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            Ok(f(&mut lock)?)
        }
    }
}

struct Loaded {
    graph: SignedGraph,
    ids: Option<IdMap>,
}

fn load_graph(args: &GraphArgs, directed: bool) -> Result<Loaded, CliError> {
    let reader = open(&args.input)?;
    if args.remap_ids {
        let (graph, ids) = load_edge_list_remapped(reader, directed)?;
        Ok(Loaded { graph, ids: Some(ids) })
    } else {
        Ok(Loaded { graph: load_edge_list(reader, directed)?, ids: None })
    }
}

fn read_labels(path: &Path, loaded: &Loaded) -> Result<NodeLabels, CliError> {
    Ok(load_labels(open(path)?, loaded.graph.node_count(), loaded.ids.as_ref())?)
}

fn experiment_config(train: &TrainArgs, directed: bool, repeats: usize) -> Result<ExperimentConfig, CliError> {
    let (walk, train_cfg) = train.validated(directed)?;
    if repeats == 0 {
        return Err(CliError::Usage("--repeats must be positive".into()));
    }
    Ok(ExperimentConfig { walk, train: train_cfg, repeats, seed: train.seed, ..ExperimentConfig::default() })
}

fn report(table: &ResultTable, out: Option<&Path>) -> Result<(), CliError> {
    emit(out, |w| table.write_csv(w))?;
    let summary = table.summary();
    if out.is_some() {
        print!("{summary}");
    } else {
        eprint!("{summary}");
    }
    Ok(())
}

fn cmd_train(cmd: &TrainCmd) -> Result<(), CliError> {
    let directed = cmd.graph.is_directed(false);
    let (walk, train) = cmd.train.validated(directed)?;
    let loaded = load_graph(&cmd.graph, directed)?;
    let fitted = fit(&loaded.graph, &walk, &train)?;
    let emb = fitted.run.embedding.final_embedding();
    emit(Some(&cmd.out), |w| emb.write(loaded.ids.as_ref(), w))?;
    eprintln!(
        "nodes {}, edges {}, cache entries {}, conflicts {}, fallback draws {}",
        loaded.graph.node_count(),
        loaded.graph.edge_count(),
        fitted.cache_entries,
        fitted.conflicts,
        fitted.run.fallback_draws
    );
    eprintln!("sampling time: {:.3}s", fitted.cache_time.as_secs_f64());
    eprintln!("optimization time: {:.3}s", fitted.run.optimization_time.as_secs_f64());
    Ok(())
}

fn cmd_eval_edges(cmd: &EvalEdgesCmd) -> Result<(), CliError> {
    let directed = cmd.graph.is_directed(false);
    let cfg = experiment_config(&cmd.train, directed, cmd.repeats)?;
    let loaded = load_graph(&cmd.graph, directed)?;
    let table = edge_sign_experiment(&loaded.graph, &cfg, cmd.op)?;
    report(&table, cmd.out.as_deref())
}

fn cmd_eval_nodes(cmd: &EvalNodesCmd) -> Result<(), CliError> {
    let directed = cmd.graph.is_directed(false);
    let cfg = experiment_config(&cmd.train, directed, cmd.repeats)?;
    let loaded = load_graph(&cmd.graph, directed)?;
    let labels = read_labels(&cmd.labels, &loaded)?;
    let table = node_label_experiment(&loaded.graph, &labels, &cfg)?;
    report(&table, cmd.out.as_deref())
}

fn cmd_partial(cmd: &PartialCmd) -> Result<(), CliError> {
    if cmd.graph.undirected {
        return Err(CliError::Usage("partial needs a directed graph".into()));
    }
    if cmd.fractions.iter().any(|&f| f >= 1.0) {
        return Err(CliError::Usage("fractions must be below 1".into()));
    }
    let mut cfg = experiment_config(&cmd.train, true, cmd.repeats)?;
    // Both modes run; make sure the walk settings are usable either way.
    cfg.walk.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    cfg.train.mode = SamplingMode::Targeted;
    let loaded = load_graph(&cmd.graph, true)?;
    let labels = read_labels(&cmd.labels, &loaded)?;
    let table = partial_info_experiment(&loaded.graph, &labels, &cfg, &cmd.fractions)?;
    report(&table, cmd.out.as_deref())
}

fn cmd_stats(cmd: &StatsCmd) -> Result<(), CliError> {
    let directed = cmd.graph.is_directed(false);
    let loaded = load_graph(&cmd.graph, directed)?;
    let g = &loaded.graph;
    let mut text = String::new();
    let negative = g.negative_edge_count();
    let pct = if g.edge_count() == 0 { 0.0 } else { 100.0 * negative as f64 / g.edge_count() as f64 };
    text.push_str(&format!(
        "nodes {}\nedges {}\nnegative edges {negative}\n% negative edges {pct:.3}\n",
        g.node_count(),
        g.edge_count()
    ));
    if let Some(path) = &cmd.embedding {
        let (raw, ids) = FinalEmbedding::read(open(path)?)?;
        let emb = align_embedding(raw, &ids, &loaded)?;
        let stats = distance_stats(&emb, g.edges())?;
        let fmt = |m: Option<crate::eval::Moments>| match m {
            Some(m) => format!("{} {:.4} {:.4}", m.count, m.mean, m.sd),
            None => "0 - -".to_string(),
        };
        text.push_str("sign count mean sd\n");
        text.push_str(&format!("+ {}\n- {}\n", fmt(stats.positive), fmt(stats.negative)));
        match stats.ratio() {
            Some(r) => text.push_str(&format!("ratio {r:.4}\n")),
            None => text.push_str("ratio absent\n"),
        }
    }
    emit(cmd.out.as_deref(), |w| w.write_all(text.as_bytes()))
}

/// Reorders embedding rows so that row `i` belongs to graph node `i`.
fn align_embedding(raw: FinalEmbedding, ids: &[u64], loaded: &Loaded) -> Result<FinalEmbedding, CliError> {
    let n = loaded.graph.node_count();
    if ids.len() != n {
        return Err(EvalError::NodeCountMismatch { embedding: ids.len(), node: n.saturating_sub(1) }.into());
    }
    let mut rows: Vec<Option<Vec<f64>>> = vec![None; n];
    for (k, &id) in ids.iter().enumerate() {
        let node = match &loaded.ids {
            Some(map) => map.dense(id),
            None => Some(id as usize).filter(|&v| v < n),
        };
        let node = node.ok_or(GraphError::UnknownLabelNode(id))?;
        rows[node] = Some(raw.row(k).to_vec());
    }
    let rows: Option<Vec<Vec<f64>>> = rows.into_iter().collect();
    let rows = rows.ok_or_else(|| TrainError::Format("embedding does not cover every graph node".into()))?;
    Ok(FinalEmbedding::from_rows(rows)?)
}

fn cmd_gen(cmd: &GenCmd) -> Result<(), CliError> {
    let usage = |e: GraphError| CliError::Usage(e.to_string());
    match cmd.model {
        GraphModel::Er => {
            if cmd.labels_out.is_some() {
                return Err(CliError::Usage("--labels-out applies to the two-community model".into()));
            }
            let cfg = ErConfig {
                nodes: cmd.nodes,
                avg_degree: cmd.avg_degree,
                negative_fraction: cmd.neg,
                directed: cmd.directed,
                seed: cmd.seed,
            };
            let g = generate_er_signed(&cfg).map_err(usage)?;
            emit(Some(&cmd.out), |w| write_edge_list(&g, w))
        }
        GraphModel::TwoCommunity => {
            let cfg = TwoCommunityConfig {
                nodes: cmd.nodes,
                intra_degree: cmd.intra_degree,
                inter_degree: cmd.inter_degree,
                directed: cmd.directed,
                seed: cmd.seed,
            };
            let (g, labels) = two_community(&cfg).map_err(usage)?;
            emit(Some(&cmd.out), |w| write_edge_list(&g, w))?;
            match &cmd.labels_out {
                Some(p) => emit(Some(p), |w| write_labels(&labels, None, w)),
                None => Ok(()),
            }
        }
    }
}

fn cmd_dump_cache(cmd: &DumpCacheCmd) -> Result<(), CliError> {
    let walk = WalkConfig {
        walk_length: cmd.walk_len,
        walks_per_node: cmd.walks_per_node,
        seed: cmd.seed,
        threads: cmd.threads,
    };
    walk.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    if cmd.graph.remap_ids {
        return Err(CliError::Usage("dump-cache writes dense node ids; drop --remap-ids".into()));
    }
    let directed = cmd.graph.is_directed(false);
    let loaded = load_graph(&cmd.graph, directed)?;
    let started = Instant::now();
    let cache = build_cache(&loaded.graph, &walk)?;
    emit(cmd.out.as_deref(), |w| cache.write_dump(w))?;
    eprintln!(
        "entries {}, conflicts {}, sampling time: {:.3}s",
        cache.total_entries(),
        cache.conflict_count(),
        started.elapsed().as_secs_f64()
    );
    Ok(())
}

fn threads_ok(train: &TrainArgs) -> Result<(), CliError> {
    if train.threads == 0 {
        return Err(CliError::Usage("--threads must be positive".into()));
    }
    Ok(())
}

/// Runs a parsed command.
pub fn execute(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Train(c) => threads_ok(&c.train).and_then(|()| cmd_train(c)),
        Command::EvalEdges(c) => threads_ok(&c.train).and_then(|()| cmd_eval_edges(c)),
        Command::EvalNodes(c) => threads_ok(&c.train).and_then(|()| cmd_eval_nodes(c)),
        Command::Partial(c) => threads_ok(&c.train).and_then(|()| cmd_partial(c)),
        Command::Stats(c) => cmd_stats(c),
        Command::Gen(c) => cmd_gen(c),
        Command::DumpCache(c) => cmd_dump_cache(c),
    }
}

/// Parses `args` (program name first), runs, and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            match &e {
                CliError::Usage(_) => eprintln!("usage error: {e}"),
                _ => eprintln!("error: {e}"),
            }
            e.exit_code()
        }
    }
}

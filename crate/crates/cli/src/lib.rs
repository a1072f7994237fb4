//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on usage errors (bad flags, missing seed,
//! out-of-range arguments), 2 on data errors (unreadable or malformed input,
//! undefined statistics).

use std::ffi::OsString;
use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use glyphnet_core::cores::{self, core_profile, lexicon_sets, randomized_core_profile};
use glyphnet_core::ensemble::{
    classify_positions, never_random_roles, randomized_metric, randomized_positional_distribution,
    NamedMetric, Role, ShufflePlan,
};
use glyphnet_core::network::{top_q_connectivity, top_q_curve};
use glyphnet_core::powerfit::{fit_power_law, frequency_cdf};
use glyphnet_core::segment::parse_long_sequences;
use glyphnet_core::significance::{
    pair_zscores_with, significant_network, zscore_cdf, ZScoreTable,
};
use glyphnet_core::synthgen::{
    generate_grammar_corpus, generate_null_corpus, FrequencySpec, LengthSpec, PhraseGrammar,
};
use glyphnet_core::{CoreMode, Corpus, Direction, SignNetwork};

/// Parsed command line; every stochastic subcommand carries its seed.
#[derive(Debug, Parser)]
#[command(
    name = "glyphnet",
    version,
    about = "Network analysis of sign-sequence corpora"
)]
pub struct RunConfig {
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Write output here instead of standard output.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,

    /// Analyse the corpus as read, without dropping repeated sequences.
    #[arg(long, global = true)]
    pub keep_duplicates: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Corpus summary (counts, lengths, inventory size) as JSON.
    Stats(InputArg),
    /// Corpus summaries and tables.
    #[command(subcommand)]
    Corpus(CorpusCommand),
    /// Adjacency network statistics and exports.
    #[command(subcommand)]
    Network(NetworkCommand),
    /// Shuffle-ensemble comparisons.
    #[command(subcommand)]
    Ensemble(EnsembleCommand),
    /// Solo / beginner / ender / dual / medial-only sign lists as JSON.
    Classify(InputArg),
    /// k-core or s-core profile.
    Cores(CoresArgs),
    /// Pair z-scores against the shuffle null, as CSV.
    Zscore(ZscoreArgs),
    /// Network of pairs above a z threshold, as DOT with component listing.
    Signet(SignetArgs),
    /// Segmentation trees of long sequences.
    Parse(ParseArgs),
    /// Power-law fit of sign frequencies.
    Fit(FitArgs),
    /// Synthetic corpora.
    #[command(subcommand)]
    Synth(SynthCommand),
}

#[derive(Debug, Args)]
pub struct InputArg {
    pub file: PathBuf,
}

#[derive(Debug, Args)]
pub struct EnsembleArgs {
    /// Number of shuffled realizations.
    #[arg(long = "n")]
    pub realizations: Option<usize>,
    /// Master seed (required).
    #[arg(long)]
    pub seed: Option<u64>,
}

impl EnsembleArgs {
    fn plan(&self, default_n: usize) -> Result<ShufflePlan, CliError> {
        let seed = self.seed.ok_or_else(|| {
            CliError::Usage("--seed is required for stochastic subcommands".into())
        })?;
        ShufflePlan::new(seed, self.realizations.unwrap_or(default_n)).map_err(CliError::usage)
    }

    fn requested(&self) -> bool {
        self.realizations.is_some() || self.seed.is_some()
    }
}

#[derive(Debug, Subcommand)]
pub enum CorpusCommand {
    /// Same as `stats`.
    Stats(InputArg),
    /// Length histogram as CSV (length,count).
    Lengths(InputArg),
    /// Sign frequencies as CSV (sign,count), most frequent first.
    Freqs(InputArg),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DistKind {
    Degree,
    Strength,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Dir {
    In,
    Out,
}

impl From<Dir> for Direction {
    fn from(d: Dir) -> Direction {
        match d {
            Dir::In => Direction::In,
            Dir::Out => Direction::Out,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Mode {
    Degree,
    Strength,
}

impl From<Mode> for CoreMode {
    fn from(m: Mode) -> CoreMode {
        match m {
            Mode::Degree => CoreMode::Degree,
            Mode::Strength => CoreMode::Strength,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum NetworkCommand {
    /// Node/edge counts, reciprocity and connectivity as JSON.
    Summary(InputArg),
    /// Export the network as DOT (default) or CSV edge list.
    Export {
        #[arg(long, conflicts_with = "csv")]
        dot: bool,
        #[arg(long)]
        csv: bool,
        file: PathBuf,
    },
    /// Complementary CDF of degrees or strengths as CSV.
    Cdf {
        #[arg(long, value_enum, default_value = "degree")]
        kind: DistKind,
        #[arg(long, value_enum, default_value = "in")]
        direction: Dir,
        file: PathBuf,
    },
    /// Connectivity of the q most frequent signs as CSV (all q when omitted).
    Topq {
        #[arg(long)]
        q: Option<usize>,
        file: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum RoleArg {
    Beginner,
    Ender,
}

#[derive(Debug, Subcommand)]
pub enum EnsembleCommand {
    /// Empirical value of a metric next to its ensemble mean and std, as JSON.
    Metric {
        /// reciprocity, connectivity, pairs, bigrams, solos, beginners or enders.
        #[arg(long)]
        name: String,
        #[command(flatten)]
        ensemble: EnsembleArgs,
        file: PathBuf,
    },
    /// Beginner/ender positional histogram against the ensemble, as CSV.
    Positional {
        #[arg(long, value_enum, default_value = "beginner")]
        role: RoleArg,
        #[command(flatten)]
        ensemble: EnsembleArgs,
        file: PathBuf,
    },
    /// Empirical beginners/enders that never hold the role in any realization.
    NeverRandom {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        file: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct CoresArgs {
    #[arg(long, value_enum, default_value = "degree")]
    pub mode: Mode,
    #[arg(long, value_enum, default_value = "in")]
    pub direction: Dir,
    /// Print the innermost core as a sorted sign list.
    #[arg(long, conflicts_with_all = ["lexicon", "realizations", "seed"])]
    pub innermost: bool,
    /// Print medial / preceder / follower sets for the mode as JSON.
    #[arg(long, conflicts_with_all = ["realizations", "seed"])]
    pub lexicon: bool,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: TableFormat,
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    pub file: PathBuf,
}

#[derive(Debug, Args)]
pub struct ZscoreArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    /// Also score pairs never observed but producible by shuffling.
    #[arg(long)]
    pub include_absent: bool,
    /// Emit the complementary CDF of z instead of the table.
    #[arg(long)]
    pub cdf: bool,
    pub file: PathBuf,
}

#[derive(Debug, Args)]
pub struct SignetArgs {
    #[arg(long, default_value_t = 8.0)]
    pub zc: f64,
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    pub file: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
pub enum TreeFormat {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct ParseArgs {
    #[arg(long, default_value_t = 10)]
    pub min_len: usize,
    #[arg(long, value_enum, default_value = "text")]
    pub format: TreeFormat,
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    pub file: PathBuf,
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long, default_value_t = 1)]
    pub fmin: u64,
    #[arg(long, default_value_t = 30)]
    pub fmax: u64,
    /// Emit the frequency complementary CDF as CSV instead of the fit.
    #[arg(long)]
    pub cdf: bool,
    pub file: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum SynthCommand {
    /// Sequences of independently drawn signs.
    Null {
        #[arg(long, default_value_t = 50)]
        signs: usize,
        /// Mass exponent of the sign-frequency distribution.
        #[arg(long, default_value_t = 1.66, conflicts_with = "uniform")]
        gamma: f64,
        /// Equiprobable signs instead of a power law.
        #[arg(long)]
        uniform: bool,
        #[arg(long, default_value_t = 1800)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        min_len: usize,
        #[arg(long, default_value_t = 9)]
        max_len: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Sequences expanded from a phrase grammar (TOML).
    Grammar {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// Write ground-truth phrase boundaries to this sidecar file.
        #[arg(long)]
        truth: Option<PathBuf>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
}

impl CliError {
    fn usage(e: impl Display) -> Self {
        CliError::Usage(e.to_string())
    }

    fn data(e: impl Display) -> Self {
        CliError::Data(e.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

impl From<glyphnet_core::Error> for CliError {
    fn from(e: glyphnet_core::Error) -> Self {
        match e {
            glyphnet_core::Error::InvalidArgument(_) => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Data(m) => f.write_str(m),
        }
    }
}

const DEFAULT_ENSEMBLE_N: usize = 100;
const DEFAULT_ZSCORE_N: usize = 10_000;

/// Runs one invocation; returns the process exit code.
pub fn main_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let _ = writeln!(stderr, "{}", one_line(&e.to_string()));
            return 1;
        }
    };
    match run(&config, stderr) {
        Ok(out) => {
            let written = match &config.output {
                Some(path) => fs::write(path, &out)
                    .map_err(|e| CliError::Data(format!("{}: {e}", path.display()))),
                None => stdout.write_all(&out).map_err(CliError::data),
            };
            match written {
                Ok(()) => 0,
                Err(e) => {
                    let _ = writeln!(stderr, "error: {e}");
                    e.exit_code()
                }
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn one_line(message: &str) -> String {
    message
        .lines()
        .map(str::trim)
        .take_while(|l| !l.starts_with("Usage:") && !l.starts_with("For more information"))
        .filter(|l| !l.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
}

/// Executes the configured subcommand and returns the output document.
pub fn run(config: &RunConfig, log: &mut dyn Write) -> Result<Vec<u8>, CliError> {
    let mut notes = Vec::new();
    let result = match config.threads {
        Some(0) => Err(CliError::Usage("--threads must be at least 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(CliError::data)
            .and_then(|pool| pool.install(|| dispatch(config, &mut notes))),
        None => dispatch(config, &mut notes),
    };
    let _ = log.write_all(&notes);
    result
}

fn load(config: &RunConfig, path: &Path, log: &mut dyn Write) -> Result<Corpus, CliError> {
    let text =
        fs::read_to_string(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    let corpus =
        Corpus::parse(&text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    if config.keep_duplicates {
        return Ok(corpus);
    }
    let corpus = corpus.dedup();
    for d in corpus.dropped_duplicates() {
        let _ = writeln!(
            log,
            "{}: line {} duplicates line {}, dropped",
            path.display(),
            d.line,
            d.first_line
        );
    }
    Ok(corpus)
}

fn json<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut out = serde_json::to_vec_pretty(value).map_err(CliError::data)?;
    out.push(b'\n');
    Ok(out)
}

fn csv_doc<H, R>(header: &[H], rows: R) -> Result<Vec<u8>, CliError>
where
    H: AsRef<[u8]>,
    R: IntoIterator<Item = Vec<String>>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(CliError::data)?;
    for row in rows {
        w.write_record(&row).map_err(CliError::data)?;
    }
    w.into_inner().map_err(CliError::data)
}

fn num(x: f64) -> String {
    if x == f64::INFINITY {
        "inf".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{x}")
    }
}

fn lines<T: Display>(items: &[T]) -> Vec<u8> {
    let mut out = String::new();
    for item in items {
        out.push_str(&item.to_string());
        out.push('\n');
    }
    out.into_bytes()
}

#[derive(Serialize)]
struct NetworkSummary {
    nodes: usize,
    edges: usize,
    self_loops: usize,
    total_weight: u64,
    reciprocity: Option<f64>,
    connectivity: Option<f64>,
}

#[derive(Serialize)]
struct MetricReport<'a> {
    metric: &'a str,
    realizations: usize,
    seed: u64,
    empirical: f64,
    mean: f64,
    std: f64,
    values: Vec<f64>,
}

#[derive(Serialize)]
struct FitReport<'a> {
    #[serde(flatten)]
    fit: &'a glyphnet_core::PowerLawFit,
    signs: usize,
}

fn dispatch(config: &RunConfig, log: &mut dyn Write) -> Result<Vec<u8>, CliError> {
    match &config.command {
        Command::Stats(a) | Command::Corpus(CorpusCommand::Stats(a)) => {
            json(&load(config, &a.file, log)?.summary()?)
        }
        Command::Corpus(CorpusCommand::Lengths(a)) => {
            let dist = load(config, &a.file, log)?.length_distribution()?;
            csv_doc(
                &["length", "count"],
                dist.counts
                    .iter()
                    .map(|(n, c)| vec![n.to_string(), c.to_string()]),
            )
        }
        Command::Corpus(CorpusCommand::Freqs(a)) => {
            let corpus = load(config, &a.file, log)?;
            csv_doc(
                &["sign", "count"],
                corpus
                    .sign_frequencies()
                    .into_iter()
                    .map(|(s, f)| vec![s.to_string(), f.to_string()]),
            )
        }
        Command::Network(cmd) => network(config, cmd, log),
        Command::Ensemble(cmd) => ensemble(config, cmd, log),
        Command::Classify(a) => json(&classify_positions(&load(config, &a.file, log)?)),
        Command::Cores(a) => cores_cmd(config, a, log),
        Command::Zscore(a) => {
            let plan = a.ensemble.plan(DEFAULT_ZSCORE_N)?;
            let corpus = load(config, &a.file, log)?;
            let table = pair_zscores_with(&corpus, &plan, a.include_absent)?;
            if a.cdf {
                let cdf = zscore_cdf(&table);
                let mut rows: Vec<Vec<String>> = cdf
                    .points
                    .iter()
                    .map(|&(z, p)| vec![num(z), num(p)])
                    .collect();
                if cdf.positive_infinite > 0 {
                    rows.push(vec![
                        "inf".into(),
                        format!("count={}", cdf.positive_infinite),
                    ]);
                }
                if cdf.negative_infinite > 0 {
                    rows.push(vec![
                        "-inf".into(),
                        format!("count={}", cdf.negative_infinite),
                    ]);
                }
                csv_doc(&["z", "p_c"], rows)
            } else {
                zscore_csv(&table)
            }
        }
        Command::Signet(a) => {
            let plan = a.ensemble.plan(DEFAULT_ZSCORE_N)?;
            let corpus = load(config, &a.file, log)?;
            let table = pair_zscores_with(&corpus, &plan, false)?;
            let sig = significant_network(&table, a.zc)?;
            let mut out = String::new();
            out.push_str(&format!(
                "// {} significant pairs with z > {}, {} signs, {} components\n",
                sig.network.edge_count(),
                a.zc,
                sig.network.node_count(),
                sig.components.len()
            ));
            for (i, comp) in sig.components.iter().enumerate() {
                let names: Vec<String> = comp.iter().map(ToString::to_string).collect();
                out.push_str(&format!("// component {}: {}\n", i + 1, names.join(" ")));
            }
            out.push_str(&sig.network.to_dot("significant"));
            Ok(out.into_bytes())
        }
        Command::Parse(a) => {
            let plan = a.ensemble.plan(DEFAULT_ZSCORE_N)?;
            let corpus = load(config, &a.file, log)?;
            let table = pair_zscores_with(&corpus, &plan, false)?;
            let report = parse_long_sequences(&corpus, a.min_len, &table)?;
            match a.format {
                TreeFormat::Json => json(&report),
                TreeFormat::Text => {
                    let mut out = String::new();
                    for t in &report.trees {
                        let label = match &t.source {
                            Some(s) => s.clone(),
                            None => format!("#{}", corpus.lines()[t.index]),
                        };
                        out.push_str(&format!("{label}\t{}\t{}\n", t.height, t.text));
                    }
                    out.push_str(&format!(
                        "# trees={} mean_height={} std_height={}\n",
                        report.trees.len(),
                        report.mean_height.map_or("NA".into(), num),
                        report.std_height.map_or("NA".into(), num)
                    ));
                    Ok(out.into_bytes())
                }
            }
        }
        Command::Fit(a) => {
            let corpus = load(config, &a.file, log)?;
            let freqs = corpus.frequency_counts();
            if a.cdf {
                let cdf = frequency_cdf(freqs)?;
                csv_doc(
                    &["f", "p_c"],
                    cdf.into_iter().map(|(f, p)| vec![f.to_string(), num(p)]),
                )
            } else {
                let fit = fit_power_law(freqs, a.fmin, a.fmax)?;
                json(&FitReport {
                    fit: &fit,
                    signs: freqs.len(),
                })
            }
        }
        Command::Synth(cmd) => synth(cmd),
    }
}

fn zscore_csv(table: &ZScoreTable) -> Result<Vec<u8>, CliError> {
    csv_doc(
        &["i", "j", "count", "p_emp", "mean", "std", "z", "flag"],
        table.rows().iter().map(|r| {
            vec![
                r.from.to_string(),
                r.to.to_string(),
                r.count.to_string(),
                num(r.p_emp),
                num(r.mean),
                num(r.std),
                num(r.z),
                r.flag().to_string(),
            ]
        }),
    )
}

fn network(
    config: &RunConfig,
    cmd: &NetworkCommand,
    log: &mut dyn Write,
) -> Result<Vec<u8>, CliError> {
    match cmd {
        NetworkCommand::Summary(a) => {
            let net = SignNetwork::build(&load(config, &a.file, log)?);
            json(&NetworkSummary {
                nodes: net.node_count(),
                edges: net.edge_count(),
                self_loops: net.loop_count(),
                total_weight: net.total_weight(),
                reciprocity: net.reciprocity().ok(),
                connectivity: net.connectivity().ok(),
            })
        }
        NetworkCommand::Export { csv, file, .. } => {
            let net = SignNetwork::build(&load(config, file, log)?);
            if *csv {
                let nodes = net.nodes();
                csv_doc(
                    &["source", "target", "weight"],
                    net.edges().iter().map(|(&(a, b), &w)| {
                        vec![
                            nodes[a as usize].to_string(),
                            nodes[b as usize].to_string(),
                            w.to_string(),
                        ]
                    }),
                )
            } else {
                Ok(net.to_dot("signs").into_bytes())
            }
        }
        NetworkCommand::Cdf {
            kind,
            direction,
            file,
        } => {
            let net = SignNetwork::build(&load(config, file, log)?);
            let (label, points) = match kind {
                DistKind::Degree => ("k", net.degree_distribution((*direction).into())),
                DistKind::Strength => ("s", net.strength_distribution((*direction).into())),
            };
            csv_doc(
                &[label, "p_c"],
                points.into_iter().map(|(v, p)| vec![v.to_string(), num(p)]),
            )
        }
        NetworkCommand::Topq { q, file } => {
            let corpus = load(config, file, log)?;
            let rows = match q {
                Some(q) => vec![(*q, top_q_connectivity(&corpus, *q)?)],
                None => top_q_curve(&corpus, &SignNetwork::build(&corpus)),
            };
            csv_doc(
                &["q", "connectivity"],
                rows.into_iter().map(|(q, c)| vec![q.to_string(), num(c)]),
            )
        }
    }
}

fn ensemble(
    config: &RunConfig,
    cmd: &EnsembleCommand,
    log: &mut dyn Write,
) -> Result<Vec<u8>, CliError> {
    match cmd {
        EnsembleCommand::Metric {
            name,
            ensemble,
            file,
        } => {
            let metric: NamedMetric = name.parse().map_err(CliError::usage)?;
            let plan = ensemble.plan(DEFAULT_ENSEMBLE_N)?;
            let corpus = load(config, file, log)?;
            let empirical = metric.evaluate(&corpus)?;
            let stats = randomized_metric(&corpus, |c| metric.evaluate(c), &plan)?;
            json(&MetricReport {
                metric: metric.name(),
                realizations: plan.realizations,
                seed: plan.master_seed,
                empirical,
                mean: stats.mean,
                std: stats.std,
                values: stats.values,
            })
        }
        EnsembleCommand::Positional {
            role,
            ensemble,
            file,
        } => {
            let plan = ensemble.plan(DEFAULT_ENSEMBLE_N)?;
            let corpus = load(config, file, log)?;
            let role = match role {
                RoleArg::Beginner => Role::Beginner,
                RoleArg::Ender => Role::Ender,
            };
            let bins = randomized_positional_distribution(&corpus, role, &plan)?;
            csv_doc(
                &["sequences", "empirical", "random_mean", "random_std"],
                bins.into_iter().map(|b| {
                    vec![
                        b.sequences.to_string(),
                        b.empirical.to_string(),
                        num(b.random_mean),
                        num(b.random_std),
                    ]
                }),
            )
        }
        EnsembleCommand::NeverRandom { ensemble, file } => {
            let plan = ensemble.plan(DEFAULT_ENSEMBLE_N)?;
            let corpus = load(config, file, log)?;
            json(&never_random_roles(&corpus, &plan))
        }
    }
}

fn cores_cmd(config: &RunConfig, a: &CoresArgs, log: &mut dyn Write) -> Result<Vec<u8>, CliError> {
    let corpus = load(config, &a.file, log)?;
    let net = SignNetwork::build(&corpus);
    let mode: CoreMode = a.mode.into();
    let direction: Direction = a.direction.into();
    if a.lexicon {
        return json(&lexicon_sets(&net, mode));
    }
    if a.innermost {
        return Ok(lines(&core_profile(&net, direction, mode).innermost_set));
    }
    if a.ensemble.requested() {
        let plan = a.ensemble.plan(DEFAULT_ENSEMBLE_N)?;
        let r = randomized_core_profile(&corpus, direction, mode, &plan)?;
        return match a.format {
            TableFormat::Json => json(&r),
            TableFormat::Csv => csv_doc(
                &["order", "size", "random_mean", "random_std"],
                r.sizes.iter().map(|s| {
                    vec![
                        s.order.to_string(),
                        s.empirical.to_string(),
                        num(s.random_mean),
                        num(s.random_std),
                    ]
                }),
            ),
        };
    }
    let profile = cores::core_profile(&net, direction, mode);
    match a.format {
        TableFormat::Json => json(&profile),
        TableFormat::Csv => csv_doc(
            &["order", "size"],
            profile
                .entries
                .iter()
                .map(|(o, s)| vec![o.to_string(), s.to_string()]),
        ),
    }
}

fn synth(cmd: &SynthCommand) -> Result<Vec<u8>, CliError> {
    let need_seed = |seed: Option<u64>| {
        seed.ok_or_else(|| CliError::Usage("--seed is required for stochastic subcommands".into()))
    };
    match cmd {
        SynthCommand::Null {
            signs,
            gamma,
            uniform,
            count,
            min_len,
            max_len,
            seed,
        } => {
            let seed = need_seed(*seed)?;
            let freq = if *uniform {
                FrequencySpec::uniform(*signs)?
            } else {
                FrequencySpec::power_law(*signs, *gamma)?
            };
            let lengths = LengthSpec::uniform(*min_len, *max_len)?;
            let corpus = generate_null_corpus(&freq, &lengths, *count, seed)?;
            Ok(corpus.to_text().into_bytes())
        }
        SynthCommand::Grammar {
            spec,
            count,
            seed,
            truth,
        } => {
            let seed = need_seed(*seed)?;
            let text = fs::read_to_string(spec)
                .map_err(|e| CliError::Data(format!("{}: {e}", spec.display())))?;
            let grammar = PhraseGrammar::from_toml(&text)
                .map_err(|e| CliError::Data(format!("{}: {e}", spec.display())))?;
            let generated = generate_grammar_corpus(&grammar, *count, seed)?;
            if let Some(path) = truth {
                fs::write(path, generated.truth_to_text())
                    .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
            }
            Ok(generated.corpus.to_text().into_bytes())
        }
    }
}

//! The `zipfsem` command line.
//!
//! Every subcommand writes its data files and a `manifest.json` into the
//! output directory. Exit status: 0 on success, 1 on a usage error, 2 when
//! the computation fails.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use zipfsem_core::baselines::{new_word_rate, random_typing, simon_process, tokenize_text, word_length_distribution, TokenStream};
use zipfsem_core::covering::{geometric_ranks, hierarchical_covering, layer_diagnostics, Covering, RhoMode, Topology};
use zipfsem_core::evolution::{
    default_delta, lengths_to_rank_freq, run_generalization, run_specialization, saturated_fit_range, GenParams,
    SimResult, SpecParams,
};
use zipfsem_core::lexsem::{
    hyponym_sum_check_with, pca_classify_with, positive_weight_frequency_sum, CompatibilityMatrix, HyponymSet,
    HyponymTable, PcaMethod, Polarity,
};
use zipfsem_core::mandelbrot::{
    implied_exponent, run_local_dynamics, solve_selfconsistent_pmf, zipf_mandelbrot_pmf, CostModel, DynamicsConfig,
    FrequencyVector, StopReason,
};
use zipfsem_core::powerlaw::{
    default_fit_range, fit_zipf_exponent, frequency_spectrum, rank_frequency, spectrum_exponent, RankFrequencyTable,
};
use zipfsem_core::special::solve_exponent;

use crate::error::{Error, Result};
use crate::fixtures::{self, FixtureCatalog, FixtureKind};
use crate::io;
use crate::manifest::RunManifest;

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 42;
/// Environment variable that sets the output directory when `--out` is absent.
pub const OUT_ENV: &str = "ZIPFSEM_OUT";
pub const DEFAULT_OUT: &str = "zipfsem-out";

#[derive(Parser, Debug)]
#[command(
    name = "zipfsem",
    version,
    about = "Coverings of semantic space, Zipf-Mandelbrot dynamics and word-frequency baselines",
    long_about = "Coverings of semantic space, Zipf-Mandelbrot dynamics and word-frequency baselines.\n\n\
        Semantic space is the unit interval (or circle) with total measure 1; interval lengths are \
        measures in those units. Frequencies of bundled fixtures are per million words. Every \
        subcommand writes CSV files and manifest.json to the output directory. Exit status: 0 \
        success, 1 usage error, 2 computation error."
)]
pub struct Cli {
    /// Seed of the random generator (replicate r uses seed + r)
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Worker threads for independent replicates and sweep points
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    pub jobs: u32,
    /// Output directory (created if missing)
    #[arg(long, global = true, env = OUT_ENV, default_value = DEFAULT_OUT)]
    pub out: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Meaning-evolution simulators
    #[command(subcommand)]
    Sim(SimCmd),
    /// Layer diagnostics of coverings
    #[command(subcommand)]
    Covering(CoveringCmd),
    /// Zipf-Mandelbrot exponent, pmf and local cost-ratio dynamics
    #[command(subcommand)]
    Mandelbrot(MandelbrotCmd),
    /// Null models: random typing and Simon's process
    #[command(subcommand)]
    Baseline(BaselineCmd),
    /// Measurements on a text file
    #[command(subcommand)]
    Corpus(CorpusCmd),
    /// Hyponym sums and compatibility-matrix PCA
    #[command(subcommand)]
    Lex(LexCmd),
    /// Fit the rank exponent B (or spectrum exponent beta) of a rank-frequency CSV
    Fit(FitArgs),
}

#[derive(Subcommand, Debug)]
pub enum SimCmd {
    /// Generalization: intervals grow by delta per step until they touch a growing neighbour
    Gen(GenArgs),
    /// Specialization: of two overlapping intervals within length ratio gamma the smaller loses the intersection
    Spec(SpecArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct GenArgs {
    /// Number of words (intervals)
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    /// Growth per step, in units of the space measure [default: 1e-3/n]
    #[arg(long)]
    pub delta: Option<f64>,
    /// Use the segment [0,1] instead of the circle
    #[arg(long)]
    pub linear: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub rep: Replicates,
    /// First rank of the exponent fit
    #[arg(long, default_value_t = 10)]
    pub fit_lo: usize,
    /// Last rank of the exponent fit (clipped to the number of intervals)
    #[arg(long, default_value_t = 1000)]
    pub fit_hi: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct SpecArgs {
    /// Number of initial intervals (lengths uniform on [0,1])
    #[arg(long, default_value_t = 10_000)]
    pub n: usize,
    /// Length ratio within which two overlapping intervals interact (> 1)
    #[arg(long, default_value_t = 2.0)]
    pub gamma: f64,
    /// Intervals shorter than this (space-measure units) are dropped
    #[arg(long, default_value_t = 1e-12)]
    pub eps: f64,
    /// Use the segment [0,1] instead of the circle
    #[arg(long)]
    pub linear: bool,
    #[command(flatten)]
    #[serde(flatten)]
    pub rep: Replicates,
    /// First rank of the exponent fit [default: 1]
    #[arg(long)]
    pub fit_lo: Option<usize>,
    /// Last rank of the exponent fit [default: number of intervals of length >= n^-1/2]
    #[arg(long)]
    pub fit_hi: Option<usize>,
}

#[derive(Args, Debug, Serialize, Clone, Copy)]
pub struct Replicates {
    /// Independent runs with seeds seed, seed+1, ...
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub replicates: u64,
}

#[derive(Subcommand, Debug)]
pub enum CoveringCmd {
    /// Gap and overlap of (rho,k)-layers of a covering CSV (rank,lo,hi,length)
    Diag(DiagArgs),
    /// The dyadic covering with lengths 1, 1/2, 1/2, 1/4 x4, ...
    Hier(HierArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct DiagArgs {
    /// Covering CSV with header rank,lo,hi,length
    #[arg(long)]
    pub input: PathBuf,
    /// The covering lies on the segment [0,1] rather than the circle
    #[arg(long)]
    pub linear: bool,
    /// Layer start ranks, comma separated [default: geometric spread]
    #[arg(long, value_delimiter = ',')]
    pub k: Vec<usize>,
    /// Number of geometrically spaced ranks when --k is not given
    #[arg(long, default_value_t = 20)]
    pub count: usize,
    /// Fixed layer ratio rho (> 1) [default: per k, the smallest rho whose layer has total length >= 1]
    #[arg(long)]
    pub rho: Option<f64>,
}

#[derive(Args, Debug, Serialize)]
pub struct HierArgs {
    /// Deepest dyadic level; the covering has 2^(depth+1) - 1 intervals (max 20)
    #[arg(long, default_value_t = 11)]
    pub depth: u32,
}

#[derive(Subcommand, Debug)]
pub enum MandelbrotCmd {
    /// Solve zeta(B, 1+k0) = 1 for the exponent B
    Solve(SolveArgs),
    /// Local cost-ratio dynamics with costs c0*log2(k+k0) bits
    Dynamics(DynamicsArgs),
    /// Zipf-Mandelbrot pmf p_k ~ (k+k0)^-B truncated to n words
    Pmf(PmfArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct SolveArgs {
    /// Rank offset(s), comma separated
    #[arg(long, value_delimiter = ',', default_value = "10")]
    pub k0: Vec<f64>,
    /// Absolute tolerance on B
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct DynamicsArgs {
    /// Vocabulary size
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    /// Rank offset of the cost model
    #[arg(long, default_value_t = 10.0)]
    pub k0: f64,
    /// Cost scale, bits per log2 rank
    #[arg(long, default_value_t = 1.0)]
    pub c0: f64,
    /// Relative half-width of the tolerated band around C* = C/H
    #[arg(long, default_value_t = 0.05)]
    pub band: f64,
    /// Multiplicative step applied to a word outside the band (> 1)
    #[arg(long, default_value_t = 1.05)]
    pub step: f64,
    /// Iteration cap
    #[arg(long, default_value_t = 100_000)]
    pub max_iters: usize,
    /// Frequency at which a word is extinct
    #[arg(long, default_value_t = 1e-15)]
    pub p_floor: f64,
    /// Record every stride-th iteration in the trajectory
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
}

#[derive(Args, Debug, Serialize)]
pub struct PmfArgs {
    /// Rank offset
    #[arg(long, default_value_t = 10.0)]
    pub k0: f64,
    /// Number of words
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    /// Exponent [default: root of zeta(B, 1+k0) = 1]
    #[arg(long)]
    pub b: Option<f64>,
    /// Iterate p = normalize(2^(-beta*cost)) to the finite-n optimum instead
    #[arg(long)]
    pub selfconsistent: bool,
    /// Cost scale for --selfconsistent, bits per log2 rank
    #[arg(long, default_value_t = 1.0)]
    pub c0: f64,
    /// Max-norm residual tolerance for --selfconsistent
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Iteration cap for --selfconsistent
    #[arg(long, default_value_t = 100_000)]
    pub max_iters: usize,
}

#[derive(Subcommand, Debug)]
pub enum BaselineCmd {
    /// Uniform random letters and a space; writes the rank-frequency table
    Typing(TypingArgs),
    /// Simon's process: new word with probability p, else copy a past token
    Simon(SimonArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct TypingArgs {
    /// Letters a.. (1 to 26), the space is extra
    #[arg(long, default_value_t = 26)]
    pub alphabet: usize,
    /// Characters typed, spaces included
    #[arg(long, default_value_t = 10_000_000)]
    pub chars: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub rep: Replicates,
    /// Also write the token stream as text
    #[arg(long)]
    pub write_tokens: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct SimonArgs {
    /// Probability that a token is a new word
    #[arg(long, default_value_t = 0.1)]
    pub p: f64,
    /// Stream length in tokens
    #[arg(long, default_value_t = 1_000_000)]
    pub tokens: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub rep: Replicates,
    /// Window for the new-word rate, in tokens
    #[arg(long, default_value_t = 10_000)]
    pub window: usize,
    /// Also write the token stream as text
    #[arg(long)]
    pub write_tokens: bool,
}

#[derive(Subcommand, Debug)]
pub enum CorpusCmd {
    /// Number of distinct words of each length (characters)
    Wordlen(CorpusArgs),
    /// Share of first occurrences per window of tokens
    Newrate(NewrateArgs),
    /// Rank-frequency table with words
    Rankfreq(CorpusArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct CorpusArgs {
    /// UTF-8 text file
    #[arg(long)]
    pub input: PathBuf,
    /// Tokenize as raw text (lowercase, split on non-letters) instead of whitespace
    #[arg(long)]
    pub raw: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct NewrateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub corpus: CorpusArgs,
    /// Window length in tokens (>= 100)
    #[arg(long, default_value_t = 10_000)]
    pub window: usize,
}

#[derive(Subcommand, Debug)]
pub enum LexCmd {
    /// Compare the head word's frequency with the sum of its hyponyms
    Sum(SumArgs),
    /// Leading principal axis of an adjective x noun compatibility matrix
    Pca(PcaArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct SumArgs {
    /// Bundled fixture id [default: every hyponym fixture]
    #[arg(long, conflicts_with = "input")]
    pub fixture: Option<String>,
    /// Hyponym CSV (role,word,freq_per_million) instead of a fixture
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Allowed relative deviation |hyponyms/head - 1|
    #[arg(long, default_value_t = 0.20)]
    pub tolerance: f64,
    /// Count excluded hyponyms too
    #[arg(long)]
    pub all_listed: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PcaMethodArg {
    /// Correlation between noun columns of the raw counts
    Column,
    /// Rows standardized before the column correlation
    Row,
}

#[derive(Args, Debug, Serialize)]
pub struct PcaArgs {
    /// Bundled matrix fixture id
    #[arg(long, default_value = "table12_bad_matrix", conflicts_with = "input")]
    pub fixture: String,
    /// Matrix CSV (adjective,freq_per_million,noun(+|-)...) instead of a fixture
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = PcaMethodArg::Column)]
    pub method: PcaMethodArg,
}

#[derive(Args, Debug, Serialize)]
pub struct FitArgs {
    /// Rank-frequency CSV with header rank,frequency[,word]
    #[arg(long)]
    pub input: PathBuf,
    /// First rank of the fit [default: 10]
    #[arg(long)]
    pub lo: Option<usize>,
    /// Last rank of the fit [default: n/10]
    #[arg(long)]
    pub hi: Option<usize>,
    /// Fit the frequency-spectrum exponent beta instead of B
    #[arg(long)]
    pub spectrum: bool,
    /// Logarithmic bins of the spectrum
    #[arg(long, default_value_t = 40)]
    pub bins: usize,
    /// Lowest bin centre used by the spectrum fit (frequency units of the input)
    #[arg(long, default_value_t = 10.0)]
    pub fmin: f64,
    /// Highest bin centre used by the spectrum fit
    #[arg(long, default_value_t = 1000.0)]
    pub fmax: f64,
    /// Bins holding fewer words are skipped
    #[arg(long, default_value_t = 5)]
    pub min_words: usize,
}

/// Parse `args` (program name first), run, and return the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(Failure::Compute(e)) => {
            eprintln!("error: {e}");
            2
        }
    }
}

enum Failure {
    Usage(String),
    Compute(Error),
}

macro_rules! compute_error {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                Failure::Compute(e.into())
            }
        }
    )*};
}

compute_error!(Error, zipfsem_core::Error, std::io::Error, csv::Error, serde_json::Error);

type Outcome<T> = std::result::Result<T, Failure>;

fn usage<T>(msg: impl Into<String>) -> Outcome<T> {
    Err(Failure::Usage(msg.into()))
}

/// Output directory, file list and manifest of one invocation.
struct Run<'a> {
    cli: &'a Cli,
    manifest: RunManifest,
}

impl<'a> Run<'a> {
    fn new(cli: &'a Cli, name: &str, args: &impl Serialize) -> Self {
        let parameters = match serde_json::to_value(args) {
            Ok(Value::Object(m)) => m.into_iter().collect(),
            _ => BTreeMap::new(),
        };
        let mut parameters: BTreeMap<String, Value> = parameters;
        parameters.insert("jobs".into(), json!(cli.jobs));
        Run { cli, manifest: RunManifest::new(name, parameters, cli.seed) }
    }

    fn param(&mut self, key: &str, v: Value) {
        self.manifest.parameters.insert(key.into(), v);
    }

    fn result(&mut self, key: impl Into<String>, v: Value) {
        self.manifest.results.insert(key.into(), v);
    }

    fn path(&mut self, name: &str) -> PathBuf {
        self.manifest.output_paths.push(name.to_string());
        self.cli.out.join(name)
    }

    fn create(&mut self, name: &str) -> Result<fs::File> {
        let p = self.path(name);
        io::create(&p)
    }

    fn finish(mut self) -> Result<()> {
        let p = self.cli.out.join("manifest.json");
        self.manifest.output_paths.push("manifest.json".into());
        self.manifest.write(&p)
    }
}

fn pool(jobs: u32) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs as usize)
        .build()
        .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))
}

/// Run `f` for each replicate seed on `jobs` threads; results keep seed order.
fn replicate<T: Send>(cli: &Cli, rep: Replicates, f: impl Fn(u64) -> Result<T> + Sync) -> Result<Vec<(u64, T)>> {
    let seeds: Vec<u64> = (0..rep.replicates).map(|r| cli.seed.wrapping_add(r)).collect();
    pool(cli.jobs)?.install(|| seeds.par_iter().map(|&s| f(s).map(|v| (s, v))).collect())
}

fn per_seed(name: &str, ext: &str, seed: u64, many: bool) -> String {
    if many {
        format!("{name}_seed{seed}.{ext}")
    } else {
        format!("{name}.{ext}")
    }
}

fn topology(linear: bool) -> Topology {
    if linear {
        Topology::Linear
    } else {
        Topology::Circular
    }
}

fn execute(cli: &Cli) -> Outcome<()> {
    match &cli.command {
        Command::Sim(SimCmd::Gen(a)) => sim_gen(cli, a),
        Command::Sim(SimCmd::Spec(a)) => sim_spec(cli, a),
        Command::Covering(CoveringCmd::Diag(a)) => covering_diag(cli, a),
        Command::Covering(CoveringCmd::Hier(a)) => covering_hier(cli, a),
        Command::Mandelbrot(MandelbrotCmd::Solve(a)) => mandelbrot_solve(cli, a),
        Command::Mandelbrot(MandelbrotCmd::Dynamics(a)) => mandelbrot_dynamics(cli, a),
        Command::Mandelbrot(MandelbrotCmd::Pmf(a)) => mandelbrot_pmf(cli, a),
        Command::Baseline(BaselineCmd::Typing(a)) => baseline_typing(cli, a),
        Command::Baseline(BaselineCmd::Simon(a)) => baseline_simon(cli, a),
        Command::Corpus(CorpusCmd::Wordlen(a)) => corpus_wordlen(cli, a),
        Command::Corpus(CorpusCmd::Newrate(a)) => corpus_newrate(cli, a),
        Command::Corpus(CorpusCmd::Rankfreq(a)) => corpus_rankfreq(cli, a),
        Command::Lex(LexCmd::Sum(a)) => lex_sum(cli, a),
        Command::Lex(LexCmd::Pca(a)) => lex_pca(cli, a),
        Command::Fit(a) => fit(cli, a),
    }
}

fn sim_outputs(
    run: &mut Run,
    results: Vec<(u64, SimResult)>,
    fit_range: impl Fn(&RankFrequencyTable) -> (usize, usize),
) -> Outcome<()> {
    let many = results.len() > 1;
    for (seed, r) in results {
        let table = lengths_to_rank_freq(&r.covering)?;
        let range = fit_range(&table);
        let b = fit_zipf_exponent(&table, range).map(|f| f.b);
        let name = per_seed("covering", "csv", seed, many);
        io::write_covering(run.create(&name)?, &r.covering)?;
        match b {
            Ok(b) => println!("seed {seed}: {} intervals, {} iterations, B = {b:.4} on ranks {range:?}", r.covering.len(), r.iterations),
            Err(ref e) => println!("seed {seed}: {} intervals, {} iterations, no fit ({e})", r.covering.len(), r.iterations),
        }
        for w in &r.warnings {
            eprintln!("warning: {w}");
        }
        run.result(
            format!("seed{seed}"),
            json!({
                "intervals": r.covering.len(),
                "iterations": r.iterations,
                "rng_trace_hash": format!("{:016x}", r.rng_trace_hash),
                "fit_range": [range.0, range.1],
                "B": b.ok(),
                "warnings": r.warnings,
            }),
        );
    }
    Ok(())
}

fn sim_gen(cli: &Cli, a: &GenArgs) -> Outcome<()> {
    let mut run = Run::new(cli, "sim gen", a);
    let delta = a.delta.unwrap_or_else(|| default_delta(a.n));
    run.param("delta", json!(delta));
    let results = replicate(cli, a.rep, |seed| {
        Ok(run_generalization(&GenParams { n: a.n, delta, seed, topology: topology(a.linear) })?)
    })?;
    sim_outputs(&mut run, results, |_| (a.fit_lo, a.fit_hi))?;
    Ok(run.finish()?)
}

fn sim_spec(cli: &Cli, a: &SpecArgs) -> Outcome<()> {
    let mut run = Run::new(cli, "sim spec", a);
    let results = replicate(cli, a.rep, |seed| {
        Ok(run_specialization(&SpecParams {
            n: a.n,
            gamma: a.gamma,
            seed,
            fixpoint_eps: a.eps,
            topology: topology(a.linear),
        })?)
    })?;
    sim_outputs(&mut run, results, |t| {
        let (lo, hi) = saturated_fit_range(t, a.n);
        (a.fit_lo.unwrap_or(lo), a.fit_hi.unwrap_or(hi))
    })?;
    Ok(run.finish()?)
}

/// Largest start rank whose tail still carries total length 1.
fn max_layer_start(c: &Covering) -> usize {
    let mut tail = 0.0;
    let lengths = c.lengths();
    let mut best = 0;
    for k in (1..=lengths.len()).rev() {
        tail += lengths[k - 1];
        if tail >= 1.0 - 1e-12 {
            best = k;
            break;
        }
    }
    best
}

fn covering_diag(cli: &Cli, a: &DiagArgs) -> Outcome<()> {
    let mut run = Run::new(cli, "covering diag", a);
    let c = io::read_covering(fs::File::open(&a.input)?, topology(a.linear))?;
    let mode = match a.rho {
        Some(r) if r > 1.0 => RhoMode::Fixed(r),
        Some(_) => return usage("--rho must exceed 1"),
        None => RhoMode::PerK,
    };
    let ks = if a.k.is_empty() {
        let max_k = if a.rho.is_some() { c.len() } else { max_layer_start(&c) };
        if max_k == 0 {
            return Err(Error::Core(zipfsem_core::Error::InsufficientMass { k: 1, mass: c.lengths().iter().sum() }).into());
        }
        geometric_ranks(max_k, a.count)
    } else {
        a.k.clone()
    };
    let d = layer_diagnostics(&c, &ks, mode)?;
    io::write_layers(run.create("layers.csv")?, &d)?;
    for r in &d.rows {
        println!("k = {:6}  rho = {:.6}  gap = {:.6}  overlap = {:.6}", r.k, r.rho, r.gap, r.overlap);
    }
    Ok(run.finish()?)
}

fn covering_hier(cli: &Cli, a: &HierArgs) -> Outcome<()> {
    let mut run = Run::new(cli, "covering hier", a);
    let c = hierarchical_covering(a.depth)?;
    let ks: Vec<usize> = (0..=a.depth).map(|j| 1usize << j).collect();
    let d = layer_diagnostics(&c, &ks, RhoMode::PerK)?;
    io::write_covering(run.create("covering.csv")?, &c)?;
    io::write_layers(run.create("layers.csv")?, &d)?;
    let table = lengths_to_rank_freq(&c)?;
    let b = fit_zipf_exponent(&table, (1, c.len())).map(|f| f.b);
    match b {
        Ok(b) => println!("{} intervals, B = {b:.4} over all ranks", c.len()),
        Err(ref e) => println!("{} intervals, no fit ({e})", c.len()),
    }
    run.result("B", json!(b.ok()));
    Ok(run.finish()?)
}

fn mandelbrot_solve(cli: &Cli, a: &SolveArgs) -> Outcome<()> {
    let mut run = Run::new(cli, "mandelbrot solve", a);
    let solved: Vec<_> = pool(cli.jobs)?.install(|| a.k0.par_iter().map(|&k0| (k0, solve_exponent(k0, a.tol))).collect());
    let mut failed = None;
    let rows: Vec<[String; 3]> = solved
        .iter()
        .map(|(k0, r)| match r {
            Ok(b) => {
                println!("k0 = {k0}: B = {b:.10}");
                [k0.to_string(), b.to_string(), "ok".into()]
            }
            Err(e) => {
                eprintln!("k0 = {k0}: {e}");
                failed = Some(e.clone());
                let status = match e {
                    zipfsem_core::Error::NoRoot { .. } => "no_root",
                    _ => "error",
                };
                [k0.to_string(), String::new(), status.into()]
            }
        })
        .collect();
    io::write_rows(run.create("exponents.csv")?, &["k0", "B", "status"], rows)?;
    run.finish()?;
    match failed {
        Some(e) => Err(e.into()),
        None => Ok(()),
    }
}

fn mandelbrot_dynamics(cli: &Cli, a: &DynamicsArgs) -> Outcome<()> {
    let mut run = Run::new(cli, "mandelbrot dynamics", a);
    let cm = CostModel::new(a.c0, a.k0)?;
    let cfg = DynamicsConfig {
        n_words: a.n,
        cost_model: cm,
        band_gamma: a.band,
        step_factor: a.step,
        max_iters: a.max_iters,
        p_floor: a.p_floor,
        stride: a.stride,
    };
    let r = run_local_dynamics(&cfg, cli.seed)?;
    io::write_trajectory(run.create("trajectory.csv")?, &r.trajectory)?;
    let table = RankFrequencyTable::from_unsorted(r.p.as_slice())?;
    io::write_rank_frequency(run.create("rankfreq.csv")?, &table)?;
    let stop = match r.stop {
        StopReason::Stationary => "stationary",
        StopReason::MaxIters => "max_iters",
    };
    let implied = implied_exponent(&r.p, &cm).ok();
    let tail = fit_zipf_exponent(&table, (100, a.n)).map(|f| f.b).ok();
    println!("{} iterations ({stop}), {} extinct, max p = {:.6}", r.iterations, r.extinct, table.frequencies()[0]);
    if let Some(b) = tail {
        println!("tail B over ranks >= 100: {b:.4}");
    }
    run.result(
        "summary",
        json!({
            "iterations": r.iterations,
            "stop": stop,
            "extinct": r.extinct,
            "implied_exponent": implied,
            "tail_B": tail,
            "rng_trace_hash": format!("{:016x}", r.rng_trace_hash),
        }),
    );
    Ok(run.finish()?)
}

fn mandelbrot_pmf(cli: &Cli, a: &PmfArgs) -> Outcome<()> {
    let mut run = Run::new(cli, "mandelbrot pmf", a);
    let p: FrequencyVector = if a.selfconsistent {
        let cm = CostModel::new(a.c0, a.k0)?;
        solve_selfconsistent_pmf(&cm.costs(a.n), a.tol, a.max_iters)?
    } else {
        let b = match a.b {
            Some(b) => b,
            None => solve_exponent(a.k0, 1e-12)?,
        };
        run.param("b", json!(b));
        println!("B = {b:.10}");
        zipf_mandelbrot_pmf(b, a.k0, a.n)?
    };
    let table = RankFrequencyTable::from_unsorted(p.as_slice())?;
    io::write_rank_frequency(run.create("pmf.csv")?, &table)?;
    Ok(run.finish()?)
}

fn write_spectrum(run: &mut Run, name: &str, t: &RankFrequencyTable, bins: usize) -> Result<()> {
    let s = frequency_spectrum(t, bins)?;
    io::write_rows(
        run.create(name)?,
        &["lo", "hi", "center", "words", "fraction", "density"],
        s.bins.iter().map(|b| {
            [b.lo.to_string(), b.hi.to_string(), b.center.to_string(), b.words.to_string(), b.fraction.to_string(), b.density.to_string()]
        }),
    )
}

fn baseline_typing(cli: &Cli, a: &TypingArgs) -> Outcome<()> {
    let mut run = Run::new(cli, "baseline typing", a);
    let results = replicate(cli, a.rep, |seed| Ok(random_typing(a.alphabet, a.chars, seed)?))?;
    let many = results.len() > 1;
    for (seed, s) in results {
        let table = rank_frequency(&s)?;
        io::write_rank_frequency(run.create(&per_seed("rankfreq", "csv", seed, many))?, &table)?;
        if a.write_tokens {
            io::write_token_stream(run.create(&per_seed("tokens", "txt", seed, many))?, &s)?;
        }
        let range = default_fit_range(table.len());
        let b = fit_zipf_exponent(&table, range).map(|f| f.b).ok();
        println!("seed {seed}: {} tokens, {} types, B = {b:?} on ranks {range:?}", s.len(), table.len());
        run.result(
            format!("seed{seed}"),
            json!({"tokens": s.len(), "types": table.len(), "B": b, "fit_range": [range.0, range.1],
                   "rng_trace_hash": s.rng_trace_hash.map(|h| format!("{h:016x}"))}),
        );
    }
    Ok(run.finish()?)
}

fn baseline_simon(cli: &Cli, a: &SimonArgs) -> Outcome<()> {
    let mut run = Run::new(cli, "baseline simon", a);
    let results = replicate(cli, a.rep, |seed| Ok(simon_process(a.p, a.tokens, seed)?))?;
    let many = results.len() > 1;
    for (seed, s) in results {
        let table = rank_frequency(&s)?;
        io::write_rank_frequency(run.create(&per_seed("rankfreq", "csv", seed, many))?, &table)?;
        write_spectrum(&mut run, &per_seed("spectrum", "csv", seed, many), &table, 40)?;
        if a.write_tokens {
            io::write_token_stream(run.create(&per_seed("tokens", "txt", seed, many))?, &s)?;
        }
        let beta = frequency_spectrum(&table, 40).and_then(|sp| spectrum_exponent(&sp, (10.0, 1000.0), 5)).map(|f| f.beta).ok();
        let rate = new_word_rate(&s, a.window).map(|r| r.fitted_decay_exponent).ok();
        println!("seed {seed}: {} tokens, {} types, beta = {beta:?}, rate decay = {rate:?}", s.len(), table.len());
        run.result(
            format!("seed{seed}"),
            json!({"tokens": s.len(), "types": table.len(), "beta": beta, "rate_decay": rate,
                   "rng_trace_hash": s.rng_trace_hash.map(|h| format!("{h:016x}"))}),
        );
    }
    Ok(run.finish()?)
}

fn read_corpus(a: &CorpusArgs) -> Result<TokenStream> {
    if a.raw {
        Ok(tokenize_text(&fs::read_to_string(&a.input)?))
    } else {
        io::read_token_stream(&a.input)
    }
}

fn corpus_wordlen(cli: &Cli, a: &CorpusArgs) -> Outcome<()> {
    let mut run = Run::new(cli, "corpus wordlen", a);
    let s = read_corpus(a)?;
    let h = word_length_distribution(&s);
    io::write_rows(run.create("wordlen.csv")?, &["length", "types"], h.iter().map(|(l, c)| [l.to_string(), c.to_string()]))?;
    println!("{} tokens, {} types", s.len(), s.vocab().len());
    Ok(run.finish()?)
}

fn corpus_newrate(cli: &Cli, a: &NewrateArgs) -> Outcome<()> {
    let mut run = Run::new(cli, "corpus newrate", a);
    let s = read_corpus(&a.corpus)?;
    let r = new_word_rate(&s, a.window)?;
    io::write_rows(run.create("newrate.csv")?, &["tokens", "rate"], r.points.iter().map(|(n, x)| [n.to_string(), x.to_string()]))?;
    println!("decay exponent = {:.4}", r.fitted_decay_exponent);
    run.result("decay_exponent", json!(r.fitted_decay_exponent));
    Ok(run.finish()?)
}

fn corpus_rankfreq(cli: &Cli, a: &CorpusArgs) -> Outcome<()> {
    let mut run = Run::new(cli, "corpus rankfreq", a);
    let s = read_corpus(a)?;
    let table = rank_frequency(&s)?;
    io::write_rank_frequency(run.create("rankfreq.csv")?, &table)?;
    let b = fit_zipf_exponent(&table, default_fit_range(table.len())).map(|f| f.b).ok();
    println!("{} tokens, {} types, B = {b:?}", s.len(), table.len());
    run.result("B", json!(b));
    Ok(run.finish()?)
}

fn lex_sum(cli: &Cli, a: &SumArgs) -> Outcome<()> {
    let mut run = Run::new(cli, "lex sum", a);
    let set = if a.all_listed { HyponymSet::AllListed } else { HyponymSet::Retained };
    let tables: Vec<(String, HyponymTable)> = if let Some(path) = &a.input {
        let name = path.display().to_string();
        let rows = fixtures::parse_hyponym_rows(&name, &fs::read(path)?)?;
        vec![(name.clone(), fixtures::hyponym_table(&name, &rows)?)]
    } else {
        let ids: Vec<String> = match &a.fixture {
            Some(id) => vec![id.clone()],
            None => FixtureCatalog::embedded()
                .fixtures
                .iter()
                .filter(|e| e.kind == FixtureKind::Hyponym)
                .map(|e| e.id.clone())
                .collect(),
        };
        let mut v = Vec::new();
        for id in ids {
            match fixtures::load_fixture(&id) {
                Ok(crate::Fixture::Hyponym(h)) => v.push((id, h.table)),
                Ok(_) => return usage(format!("`{id}` is not a hyponym table")),
                Err(Error::UnknownFixture(id)) => return usage(format!("unknown fixture `{id}`")),
                Err(e) => return Err(e.into()),
            }
        }
        v
    };
    let mut rows = Vec::new();
    for (name, t) in &tables {
        let r = hyponym_sum_check_with(t, a.tolerance, set)?;
        println!(
            "{name}: head {:.2}, hyponyms {:.2}, ratio {:.4} {}",
            r.head_sum,
            r.hyponym_sum,
            r.ratio,
            if r.pass { "pass" } else { "FAIL" }
        );
        rows.push([name.clone(), format!("{:.2}", r.head_sum), format!("{:.2}", r.hyponym_sum), r.ratio.to_string(), r.pass.to_string()]);
    }
    io::write_rows(run.create("sums.csv")?, &["table", "head_sum", "hyponym_sum", "ratio", "pass"], rows)?;
    Ok(run.finish()?)
}

fn lex_pca(cli: &Cli, a: &PcaArgs) -> Outcome<()> {
    let mut run = Run::new(cli, "lex pca", a);
    let m: CompatibilityMatrix = if let Some(path) = &a.input {
        fixtures::parse_matrix(&path.display().to_string(), &fs::read(path)?)?.0
    } else {
        match fixtures::load_fixture(&a.fixture) {
            Ok(crate::Fixture::Matrix(m)) => m.matrix,
            Ok(_) => return usage(format!("`{}` is not a compatibility matrix", a.fixture)),
            Err(Error::UnknownFixture(id)) => return usage(format!("unknown fixture `{id}`")),
            Err(e) => return Err(e.into()),
        }
    };
    let method = match a.method {
        PcaMethodArg::Column => PcaMethod::ColumnCorrelation,
        PcaMethodArg::Row => PcaMethod::RowNormalized,
    };
    let r = pca_classify_with(&m, method)?;
    io::write_rows(
        run.create("eigenvector.csv")?,
        &["noun", "polarity", "component"],
        m.cols.iter().zip(&r.eigenvector).map(|((n, p), x)| {
            let sign = if *p == Polarity::Positive { "+" } else { "-" };
            [n.clone(), sign.to_string(), x.to_string()]
        }),
    )?;
    let mut weight: Vec<Option<f64>> = vec![None; m.rows.len()];
    for (&i, &w) in r.retained.iter().zip(&r.weights) {
        weight[i] = Some(w);
    }
    io::write_rows(
        run.create("weights.csv")?,
        &["adjective", "freq_per_million", "weight", "positive"],
        m.rows.iter().zip(&weight).map(|(e, w)| {
            [
                e.word.clone(),
                format!("{:.2}", e.freq),
                w.map(|w| w.to_string()).unwrap_or_default(),
                w.map(|w| (w > 0.0).to_string()).unwrap_or_default(),
            ]
        }),
    )?;
    let sum = positive_weight_frequency_sum(&r, &m);
    let ev: Vec<String> = r.eigenvector.iter().map(|x| format!("{x:.3}")).collect();
    println!("eigenvector: ({})", ev.join(", "));
    println!("dropped rows: {}", r.dropped_rows.join(", "));
    println!("positive-weight frequency sum: {sum:.2}");
    run.result("positive_frequency_sum", json!(sum));
    run.result("eigenvalue", json!(r.eigenvalue));
    Ok(run.finish()?)
}

fn fit(cli: &Cli, a: &FitArgs) -> Outcome<()> {
    let mut run = Run::new(cli, "fit", a);
    let table = io::read_rank_frequency(fs::File::open(&a.input)?)?;
    let out = if a.spectrum {
        let s = frequency_spectrum(&table, a.bins)?;
        let f = spectrum_exponent(&s, (a.fmin, a.fmax), a.min_words)?;
        println!("beta = {:.4} (R^2 = {:.4}, {} bins)", f.beta, f.r_squared, f.bins_used);
        json!({"beta": f.beta, "intercept": f.intercept, "r_squared": f.r_squared, "bins_used": f.bins_used})
    } else {
        let (dlo, dhi) = default_fit_range(table.len());
        let range = (a.lo.unwrap_or(dlo), a.hi.unwrap_or(dhi));
        let f = fit_zipf_exponent(&table, range)?;
        println!("B = {:.4} (R^2 = {:.4}, ranks {:?})", f.b, f.r_squared, f.fit_range);
        json!({"B": f.b, "intercept": f.intercept, "r_squared": f.r_squared,
               "fit_range": [f.fit_range.0, f.fit_range.1], "n_points": f.n_points})
    };
    serde_json::to_writer_pretty(run.create("fit.json")?, &out)?;
    run.result("fit", out);
    Ok(run.finish()?)
}

/// Path of the manifest written by a run into `out`.
pub fn manifest_path(out: &Path) -> PathBuf {
    out.join("manifest.json")
}

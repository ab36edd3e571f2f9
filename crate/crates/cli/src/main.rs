//! `vilmap` command-line tool.

mod config;
mod experiments;
mod inputs;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use vilmap::cluster::{assignments_to_tsv, cluster_batch, extract_motifs, motifs_to_text};
use vilmap::data::text_to_phonemes;
use vilmap::data::PronouncingDictionary;
use vilmap::eval::lhs::{lhs_sample, LhsSpec};
use vilmap::eval::report::params_to_tsv;
use vilmap::organize::{MapState, TrainOptions};
use vilmap::{persist, Params};

use config::{require_file, resolve, write_atomic, Manifest, Outputs};
use experiments::Experiment;
use inputs::{CorpusArgs, SeriesArgs};

#[derive(Debug, Parser)]
#[command(name = "vilmap", version, about = "Variable input length self-organizing map")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Parameter sources, applied in order: built-in preset, `--config`,
/// `--set`.
#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// File of `key=value` lines (parameter names and `seed`).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Override one parameter, e.g. `--set a_t=0.9`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
    /// Seed for every sampler of the run (recorded in the manifest).
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Train a map in one pass over a series file.
    Train {
        #[command(flatten)]
        series: SeriesArgs,
        #[command(flatten)]
        params: ParamArgs,
        /// Skip series outside the length bounds instead of failing.
        #[arg(long)]
        skip_invalid: bool,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Assign series to the nodes of a trained map.
    Cluster {
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        series: SeriesArgs,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Write the prototypes of a trained map.
    Motifs {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run one of the evaluation pipelines.
    #[command(subcommand)]
    Experiment(Experiment),
    /// Draw parameter sets by Latin hypercube sampling.
    SampleParams {
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Convert a transcript to the phoneme corpus layout.
    Phonemize {
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long)]
        out: PathBuf,
    },
}

fn train(series: &SeriesArgs, params: &ParamArgs, skip_invalid: bool, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let cfg = resolve(Params::default(), params.config.as_deref(), &params.set, params.seed)?;
    let patterns = series.load()?;
    let mut map = MapState::new(cfg.params)?;
    let options = TrainOptions {
        skip_invalid,
        pruning: None,
    };
    let summary = map.train_stream(patterns.iter().map(|p| p.values.as_slice()), &options)?;
    let mut manifest = Manifest::new("train", cfg.seed);
    series.record(&mut manifest);
    manifest.params("", &cfg.params);
    manifest.warnings(&cfg.warnings);
    manifest.add("patterns", patterns.len());
    manifest.add("inserted", summary.inserted);
    manifest.add("adapted", summary.adapted);
    manifest.add("grown", summary.grown);
    manifest.add("dropped", summary.dropped);
    manifest.add("skipped", summary.skipped);
    manifest.add("nodes", map.len());
    manifest.add("edges", map.connections().edge_count());
    let mut out = Outputs::new(out_dir);
    out.add("model.txt", persist::to_string(&map));
    out.add("manifest.txt", manifest.render());
    out.commit()
}

fn cluster(model: &Path, series: &SeriesArgs, out_dir: &Path) -> Result<Vec<PathBuf>> {
    require_file(model, "model file")?;
    let map = persist::load(model)?;
    let patterns = series.load()?;
    let values: Vec<&[f64]> = patterns.iter().map(|p| p.values.as_slice()).collect();
    let assignments = cluster_batch(&map, &values)?;
    let mut manifest = Manifest::new("cluster", 0);
    manifest.path("model", model);
    series.record(&mut manifest);
    manifest.add("patterns", patterns.len());
    manifest.add("assigned", assignments.iter().filter(|a| a.is_assigned()).count());
    let mut out = Outputs::new(out_dir);
    out.add("assignments.tsv", assignments_to_tsv(&assignments));
    out.add("motifs.txt", motifs_to_text(&extract_motifs(&map)));
    out.add("manifest.txt", manifest.render());
    out.commit()
}

fn phonemize(corpus: &CorpusArgs, out: &Path) -> Result<Vec<PathBuf>> {
    match &corpus.transcript {
        Some(t) => {
            require_file(t, "transcript")?;
            require_file(&corpus.dict, "dictionary")?;
            let dict = PronouncingDictionary::load(&corpus.dict)?;
            let text = fs::read_to_string(t).with_context(|| format!("reading {}", t.display()))?;
            let mut lines = String::new();
            for line in text.lines() {
                let ph = text_to_phonemes(line, &dict, corpus.strict)?;
                for w in &ph.oov {
                    log::warn!("not in dictionary: {w}");
                }
                if !ph.words.is_empty() {
                    let words: Vec<String> = ph.words.iter().map(|w| w.join(" ")).collect();
                    let _ = writeln!(lines, "{}", words.join(" ; "));
                }
            }
            write_atomic(out, &lines)?;
        }
        None => {
            let (c, table, _) = corpus.load()?;
            write_atomic(out, &c.to_text(&table))?;
        }
    }
    Ok(vec![out.to_path_buf()])
}

fn run(cli: Cli) -> Result<Vec<PathBuf>> {
    match &cli.command {
        Command::Train {
            series,
            params,
            skip_invalid,
            out_dir,
        } => train(series, params, *skip_invalid, out_dir),
        Command::Cluster { model, series, out_dir } => cluster(model, series, out_dir),
        Command::Motifs { model, out } => {
            require_file(model, "model file")?;
            let map = persist::load(model)?;
            write_atomic(out, &motifs_to_text(&extract_motifs(&map)))?;
            Ok(vec![out.clone()])
        }
        Command::Experiment(e) => experiments::run(e),
        Command::SampleParams { samples, params, out } => {
            let cfg = resolve(Params::default(), params.config.as_deref(), &params.set, params.seed)?;
            let sets = lhs_sample(&LhsSpec::table(*samples, cfg.seed, cfg.params))?;
            let mut text = format!("# seed={} samples={samples}\n", cfg.seed);
            text.push_str(&params_to_tsv(&sets));
            write_atomic(out, &text)?;
            Ok(vec![out.clone()])
        }
        Command::Phonemize { corpus, out } => phonemize(corpus, out),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

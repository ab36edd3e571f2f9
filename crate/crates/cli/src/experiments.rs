//! The `experiment` subcommands.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Subcommand};
use vilmap::cluster::{assignments_to_tsv, motifs_to_text};
use vilmap::data::load_ucr_split;
use vilmap::eval::forgetting::{build_size_sets, forgetting_sweep, Procedure};
use vilmap::eval::lhs::{lhs_sample, LhsSpec};
use vilmap::eval::motif::motif_discovery;
use vilmap::eval::report::{params_from_tsv, params_to_tsv, reports_to_tsv, segmentation_table};
use vilmap::eval::search::{median, run_all, summarize};
use vilmap::eval::segmentation::{build_segmentation_data, segmentation_eval_data, SegmentationConfig};
use vilmap::eval::EvalReport;
use vilmap::persist;
use vilmap::Params;

use crate::config::{require_file, resolve, Manifest, Outputs};
use crate::inputs::CorpusArgs;
use crate::ParamArgs;

#[derive(Debug, Subcommand)]
pub enum Experiment {
    /// Motif discovery on a labeled train/test pair of series files.
    Gunpoint(GunpointArgs),
    /// Procedures A and B over phoneme windows of increasing size.
    Forgetting(ForgettingArgs),
    /// Word recognition on displacement windows of a phoneme stream.
    Segmentation(SegmentationArgs),
}

#[derive(Debug, Args)]
pub struct GunpointArgs {
    #[arg(long, default_value = "data/external/ucr/GunPoint/GunPoint_TRAIN.txt")]
    pub train: PathBuf,
    #[arg(long, default_value = "data/external/ucr/GunPoint/GunPoint_TEST.txt")]
    pub test: PathBuf,
    /// Envelope half-width in standard deviations.
    #[arg(long, default_value_t = 2.0)]
    pub envelope_k: f64,
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long)]
    pub out_dir: PathBuf,
}

/// Where the parameter sets of a sweep come from.
#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Latin hypercube sample size.
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    /// Parameter list written by `sample-params` (overrides --samples).
    #[arg(long)]
    pub params_file: Option<PathBuf>,
    /// Run only the configured parameters, no sampling.
    #[arg(long, conflicts_with = "params_file")]
    pub single: bool,
}

impl SweepArgs {
    fn paramsets(&self, base: Params, seed: u64, manifest: &mut Manifest) -> Result<Vec<Params>> {
        if let Some(path) = &self.params_file {
            require_file(path, "params file")?;
            manifest.path("params_file", path);
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            return Ok(params_from_tsv(&text, base, path)?);
        }
        if self.single {
            manifest.add("sampling", "single");
            return Ok(vec![base]);
        }
        manifest.add("sampling", "lhs");
        manifest.add("samples", self.samples);
        Ok(lhs_sample(&LhsSpec::table(self.samples, seed, base))?)
    }
}

#[derive(Debug, Args)]
pub struct ForgettingArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    /// Input sizes in dimensions (multiples of 12), trained in this order.
    #[arg(long, value_delimiter = ',', default_value = "24,36,48,60,72")]
    pub sizes: Vec<usize>,
    #[command(flatten)]
    pub sweep: SweepArgs,
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct SegmentationArgs {
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[arg(long, default_value_t = SegmentationConfig::default().k_min)]
    pub k_min: usize,
    #[arg(long, default_value_t = SegmentationConfig::default().k_max)]
    pub k_max: usize,
    #[arg(long, default_value_t = SegmentationConfig::default().stride)]
    pub stride: usize,
    /// Non-word test windows drawn per gold word token.
    #[arg(long, default_value_t = SegmentationConfig::default().negative_ratio)]
    pub negative_ratio: f64,
    #[command(flatten)]
    pub sweep: SweepArgs,
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long)]
    pub out_dir: PathBuf,
}

pub fn run(experiment: &Experiment) -> Result<Vec<PathBuf>> {
    match experiment {
        Experiment::Gunpoint(a) => gunpoint(a),
        Experiment::Forgetting(a) => forgetting(a),
        Experiment::Segmentation(a) => segmentation(a),
    }
}

fn report_line(label: &str, r: &EvalReport) -> String {
    format!("{label}: {r}\n")
}

fn gunpoint(args: &GunpointArgs) -> Result<Vec<PathBuf>> {
    require_file(&args.train, "training file")?;
    require_file(&args.test, "test file")?;
    let cfg = resolve(
        Params::gunpoint(),
        args.params.config.as_deref(),
        &args.params.set,
        args.params.seed,
    )?;
    let (train, test) = load_ucr_split(&args.train, &args.test)?;
    let run = motif_discovery(&train, &test, cfg.params, args.envelope_k)?;

    let mut manifest = Manifest::new("experiment gunpoint", cfg.seed);
    manifest.path("train", &args.train);
    manifest.path("test", &args.test);
    manifest.add("envelope_k", args.envelope_k);
    manifest.params("", &cfg.params);
    manifest.warnings(&cfg.warnings);
    manifest.add("train_patterns", train.len());
    manifest.add("test_patterns", test.len());
    manifest.add("nodes", run.map.len());

    let mut summary = String::new();
    let _ = writeln!(summary, "training patterns: {}", train.len());
    let _ = writeln!(
        summary,
        "inserted {} adapted {} grown {} dropped {}",
        run.summary.inserted, run.summary.adapted, run.summary.grown, run.summary.dropped
    );
    let _ = writeln!(summary, "nodes: {}", run.map.len());
    for fit in &run.fits {
        let _ = writeln!(
            summary,
            "motif node {} support {}: closest class {} with {:.1}% of points within mean +- {} std",
            fit.motif.node_id,
            fit.motif.support,
            fit.class,
            100.0 * fit.coverage,
            args.envelope_k
        );
    }
    let assigned = run.assignments.iter().filter(|a| a.is_assigned()).count();
    let _ = writeln!(summary, "test patterns assigned: {assigned} of {}", test.len());

    // plot-ready columns: point, per-class mean and std, each prototype
    let mut env = String::from("point");
    for e in &run.envelopes {
        let _ = write!(env, "\tclass{}_mean\tclass{}_std", e.label, e.label);
    }
    for f in &run.fits {
        let _ = write!(env, "\tmotif{}", f.motif.node_id);
    }
    env.push('\n');
    let len = run.envelopes.iter().map(|e| e.mean.len()).max().unwrap_or(0);
    for i in 0..len {
        let _ = write!(env, "{i}");
        for e in &run.envelopes {
            let _ = write!(
                env,
                "\t{:.6}\t{:.6}",
                e.mean.get(i).unwrap_or(&f64::NAN),
                e.std.get(i).unwrap_or(&f64::NAN)
            );
        }
        for f in &run.fits {
            let _ = write!(env, "\t{:.6}", f.motif.prototype.get(i).unwrap_or(&f64::NAN));
        }
        env.push('\n');
    }

    let motifs: Vec<_> = run.fits.iter().map(|f| f.motif.clone()).collect();
    let mut out = Outputs::new(&args.out_dir);
    out.add("model.txt", persist::to_string(&run.map));
    out.add("motifs.txt", motifs_to_text(&motifs));
    out.add("assignments.tsv", assignments_to_tsv(&run.assignments));
    out.add("envelope.tsv", env);
    out.add("summary.txt", summary);
    out.add("manifest.txt", manifest.render());
    out.commit()
}

fn forgetting(args: &ForgettingArgs) -> Result<Vec<PathBuf>> {
    let cfg = resolve(
        Params::default(),
        args.params.config.as_deref(),
        &args.params.set,
        args.params.seed,
    )?;
    let (corpus, table, oov) = args.corpus.load()?;
    let mut manifest = Manifest::new("experiment forgetting", cfg.seed);
    args.corpus.record(&mut manifest);
    manifest.add(
        "sizes",
        args.sizes.iter().map(ToString::to_string).collect::<Vec<_>>().join(","),
    );
    manifest.params("base.", &cfg.params);
    manifest.warnings(&cfg.warnings);
    manifest.add("utterances", corpus.utterances.len());
    manifest.add("phonemes", corpus.phoneme_count());
    manifest.add("oov_words", oov.len());
    let paramsets = args.sweep.paramsets(cfg.params, cfg.seed, &mut manifest)?;
    let sets = build_size_sets(&corpus, &table, &args.sizes, cfg.seed)?;
    log::info!("running {} parameter sets over {} sizes", paramsets.len(), sets.len());
    let sweep = forgetting_sweep(&sets, &paramsets)?;

    let mut rows = Vec::new();
    for (i, (a, b)) in sweep.a.iter().zip(&sweep.b).enumerate() {
        for (s, dims) in sweep.sizes.iter().enumerate() {
            rows.push((format!("{i}\tA\t{dims}"), a[s]));
            rows.push((format!("{i}\tB\t{dims}"), b[s]));
        }
    }
    let runs = reports_to_tsv(&rows).replacen("label", "index\tprocedure\tsize", 1);

    let best_a = sweep.best_per_size(Procedure::A);
    let best_b = sweep.best_per_size(Procedure::B);
    let med_a = sweep.median_per_size(Procedure::A);
    let med_b = sweep.median_per_size(Procedure::B);
    let mut series = String::from(
        "size\ta_best_f\ta_best_precision\ta_best_recall\ta_median_f\tb_best_f\tb_best_precision\tb_best_recall\tb_median_f\n",
    );
    for (s, dims) in sweep.sizes.iter().enumerate() {
        let (a, b) = (best_a[s].1, best_b[s].1);
        let _ = writeln!(
            series,
            "{dims}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{:.6}\t{:.6}",
            a.f_measure, a.precision, a.recall, med_a[s], b.f_measure, b.precision, b.recall, med_b[s]
        );
    }

    let mut summary = String::new();
    let _ = writeln!(
        summary,
        "corpus: {} utterances, {} phonemes; {} parameter sets",
        corpus.utterances.len(),
        corpus.phoneme_count(),
        paramsets.len()
    );
    for (proc, name) in [(Procedure::A, "A"), (Procedure::B, "B")] {
        if let Some((i, r)) = sweep.best_pooled(proc) {
            summary.push_str(&report_line(&format!("procedure {name} best pooled (set {i})"), &r));
        }
        let pooled_f: Vec<f64> = sweep.pooled(proc).iter().map(|r| r.f_measure).collect();
        let _ = writeln!(
            summary,
            "procedure {name} median pooled F={:.3}",
            median(&pooled_f).unwrap_or(0.0)
        );
    }
    summary.push_str("best per size:\n");
    for (s, dims) in sweep.sizes.iter().enumerate() {
        let _ = writeln!(
            summary,
            "  {dims:>3}  A F={:.3} (set {})  B F={:.3} (set {})",
            best_a[s].1.f_measure, best_a[s].0, best_b[s].1.f_measure, best_b[s].0
        );
    }

    let mut out = Outputs::new(&args.out_dir);
    out.add("params.tsv", params_to_tsv(&paramsets));
    out.add("runs.tsv", runs);
    out.add("series.tsv", series);
    out.add("summary.txt", summary);
    out.add("manifest.txt", manifest.render());
    out.commit()
}

fn segmentation(args: &SegmentationArgs) -> Result<Vec<PathBuf>> {
    let cfg = resolve(
        Params::default(),
        args.params.config.as_deref(),
        &args.params.set,
        args.params.seed,
    )?;
    let (corpus, table, oov) = args.corpus.load()?;
    let seg = SegmentationConfig {
        k_min: args.k_min,
        k_max: args.k_max,
        stride: args.stride,
        negative_ratio: args.negative_ratio,
        seed: cfg.seed,
    };
    let mut manifest = Manifest::new("experiment segmentation", cfg.seed);
    args.corpus.record(&mut manifest);
    manifest.add("k_min", seg.k_min);
    manifest.add("k_max", seg.k_max);
    manifest.add("stride", seg.stride);
    manifest.add("negative_ratio", seg.negative_ratio);
    manifest.params("base.", &cfg.params);
    manifest.warnings(&cfg.warnings);
    manifest.add("utterances", corpus.utterances.len());
    manifest.add("oov_words", oov.len());
    let paramsets = args.sweep.paramsets(cfg.params, cfg.seed, &mut manifest)?;
    let data = build_segmentation_data(&corpus, &table, &seg)?;
    manifest.add("train_windows", data.train.len());
    manifest.add("positives", data.positives.len());
    manifest.add("negatives", data.negatives.len());
    log::info!("running {} parameter sets", paramsets.len());
    let reports = run_all(&paramsets, |p| segmentation_eval_data(&data, *p))?;
    let result = summarize(&paramsets, reports)?;

    let rows: Vec<(String, EvalReport)> = result
        .reports
        .iter()
        .enumerate()
        .map(|(i, r)| (i.to_string(), *r))
        .collect();
    let mut summary = String::new();
    let _ = writeln!(
        summary,
        "corpus: {} utterances, {} word tokens; {} training windows; {} positives, {} negatives",
        corpus.utterances.len(),
        corpus.word_tokens().count(),
        data.train.len(),
        data.positives.len(),
        data.negatives.len()
    );
    summary.push_str(&report_line(&format!("best (set {})", result.best_index), &result.best));
    let _ = writeln!(
        summary,
        "median F={:.3} over {} parameter sets",
        result.median_f,
        paramsets.len()
    );

    let mut out = Outputs::new(&args.out_dir);
    out.add("params.tsv", params_to_tsv(&paramsets));
    out.add("runs.tsv", reports_to_tsv(&rows).replacen("label", "index", 1));
    out.add("table.tsv", segmentation_table(&result.best));
    out.add("summary.txt", summary);
    out.add("manifest.txt", manifest.render());
    out.commit()
}

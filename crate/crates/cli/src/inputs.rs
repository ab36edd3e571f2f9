//! Loading series and phoneme corpora from the paths given on the command
//! line.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use vilmap::data::ucr::{normalize, parse_ucr, value_bounds, RawSeries};
use vilmap::data::{Corpus, PhonemeTable, PronouncingDictionary};
use vilmap::Pattern;

use crate::config::{require_file, Manifest};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeriesFormat {
    /// Class label in the first column, then the values.
    Ucr,
    /// Values only.
    Plain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scaling {
    /// Rescale to [0, 1] with the file's global minimum and maximum.
    Minmax,
    None,
}

#[derive(Debug, Clone, Args)]
pub struct SeriesArgs {
    /// Series file, one series per line.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "ucr")]
    pub format: SeriesFormat,
    #[arg(long, value_enum, default_value = "minmax")]
    pub scaling: Scaling,
}

fn parse_plain(text: &str, origin: &Path) -> Result<Vec<RawSeries>> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        let values = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .with_context(|| format!("{}:{}: bad value `{t}`", origin.display(), i + 1))
            })
            .collect::<Result<Vec<f64>>>()?;
        if !values.is_empty() {
            rows.push(RawSeries {
                label: String::new(),
                values,
            });
        }
    }
    Ok(rows)
}

impl SeriesArgs {
    pub fn load(&self) -> Result<Vec<Pattern>> {
        require_file(&self.input, "input file")?;
        let text = fs::read_to_string(&self.input).with_context(|| format!("reading {}", self.input.display()))?;
        let rows = match self.format {
            SeriesFormat::Ucr => parse_ucr(&text, &self.input)?,
            SeriesFormat::Plain => parse_plain(&text, &self.input)?,
        };
        Ok(match (self.scaling, value_bounds(&rows)) {
            (Scaling::Minmax, Some(bounds)) => normalize(&rows, bounds),
            _ => rows
                .into_iter()
                .map(|r| Pattern {
                    values: r.values,
                    label: (!r.label.is_empty()).then_some(r.label),
                })
                .collect(),
        })
    }

    pub fn record(&self, manifest: &mut Manifest) {
        manifest.path("input", &self.input);
        manifest.add("format", format!("{:?}", self.format).to_lowercase());
        manifest.add("scaling", format!("{:?}", self.scaling).to_lowercase());
    }
}

#[derive(Debug, Clone, Args)]
pub struct CorpusArgs {
    /// Orthographic transcript, one utterance per line (needs --dict).
    #[arg(long, conflicts_with = "corpus", required_unless_present = "corpus")]
    pub transcript: Option<PathBuf>,
    /// Pre-phonemized corpus: phoneme symbols, words separated by `;`.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Pronouncing dictionary in the CMU layout.
    #[arg(long, default_value = "data/dict/cmudict-subset.dict")]
    pub dict: PathBuf,
    /// Phoneme feature table.
    #[arg(long, default_value = "data/phoneme_features.csv")]
    pub features: PathBuf,
    /// Reject transcripts containing words missing from the dictionary.
    #[arg(long)]
    pub strict: bool,
}

impl CorpusArgs {
    /// The corpus, its feature table and the out-of-vocabulary words.
    pub fn load(&self) -> Result<(Corpus, PhonemeTable, Vec<String>)> {
        require_file(&self.features, "feature table")?;
        let table = PhonemeTable::load(&self.features)?;
        match (&self.transcript, &self.corpus) {
            (Some(t), _) => {
                require_file(t, "transcript")?;
                require_file(&self.dict, "dictionary")?;
                let dict = PronouncingDictionary::load(&self.dict)?;
                let text = fs::read_to_string(t).with_context(|| format!("reading {}", t.display()))?;
                let (corpus, oov) = Corpus::from_transcript(&text, &dict, &table, self.strict)?;
                for w in &oov {
                    log::warn!("not in dictionary: {w}");
                }
                Ok((corpus, table, oov))
            }
            (None, Some(c)) => {
                require_file(c, "corpus")?;
                Ok((Corpus::load(c, &table)?, table, Vec::new()))
            }
            (None, None) => bail!("one of --transcript or --corpus is required"),
        }
    }

    pub fn record(&self, manifest: &mut Manifest) {
        if let Some(t) = &self.transcript {
            manifest.path("transcript", t);
            manifest.path("dict", &self.dict);
        }
        if let Some(c) = &self.corpus {
            manifest.path("corpus", c);
        }
        manifest.path("features", &self.features);
    }
}

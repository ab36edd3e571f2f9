//! Word recognition on an unsegmented phoneme stream.
//!
//! The map is trained online on displacement windows: at every start
//! position of every utterance, windows of `k_min..=k_max` phonemes are
//! presented in ascending length. Windows that are not a word of the lexicon
//! are the non-words. After training, gold word tokens are the positives and
//! a seeded draw of distinct non-word windows the negatives.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::metrics::{recognition_eval, EvalReport};
use crate::data::{Corpus, PhonemeId, PhonemeTable};
use crate::error::{Error, Result};
use crate::model::Params;
use crate::organize::{MapState, TrainOptions};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentationConfig {
    /// Shortest window, in phonemes.
    pub k_min: usize,
    /// Longest window, in phonemes.
    pub k_max: usize,
    pub stride: usize,
    /// Negatives drawn per positive (capped by the distinct non-words).
    pub negative_ratio: f64,
    pub seed: u64,
}

impl Default for SegmentationConfig {
    fn default() -> Self {
        SegmentationConfig {
            k_min: 1,
            k_max: 6,
            stride: 1,
            negative_ratio: 1.0,
            seed: 0,
        }
    }
}

impl SegmentationConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k_min == 0 || self.k_min > self.k_max {
            return Err(Error::InvalidArgument(format!(
                "window lengths must satisfy 1 <= k_min <= k_max, got {}..={}",
                self.k_min, self.k_max
            )));
        }
        if self.stride == 0 {
            return Err(Error::InvalidArgument("stride must be positive".into()));
        }
        if !(self.negative_ratio >= 0.0 && self.negative_ratio.is_finite()) {
            return Err(Error::InvalidArgument(
                "negative_ratio must be a non-negative number".into(),
            ));
        }
        Ok(())
    }
}

/// Featurized training stream and test sets.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentationData {
    pub train: Vec<Vec<f64>>,
    pub positives: Vec<Vec<f64>>,
    pub negatives: Vec<Vec<f64>>,
}

pub fn build_segmentation_data(
    corpus: &Corpus,
    table: &PhonemeTable,
    config: &SegmentationConfig,
) -> Result<SegmentationData> {
    config.validate()?;
    if corpus.is_empty() {
        return Err(Error::Degenerate("empty corpus".into()));
    }
    let mut train = Vec::new();
    let mut non_words: BTreeSet<&[PhonemeId]> = BTreeSet::new();
    let streams: Vec<Vec<PhonemeId>> = corpus.utterances.iter().map(|u| u.phonemes()).collect();
    for seq in &streams {
        for start in (0..seq.len()).step_by(config.stride) {
            for k in config.k_min..=config.k_max {
                let Some(window) = seq.get(start..start + k) else {
                    break;
                };
                train.push(table.featurize(window));
                if !corpus.lexicon.contains(window) {
                    non_words.insert(window);
                }
            }
        }
    }
    let positives: Vec<Vec<f64>> = corpus.word_tokens().map(|w| table.featurize(w)).collect();
    let mut pool: Vec<&[PhonemeId]> = non_words.into_iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    pool.shuffle(&mut rng);
    let want = (positives.len() as f64 * config.negative_ratio).round() as usize;
    pool.truncate(want);
    Ok(SegmentationData {
        train,
        positives,
        negatives: pool.into_iter().map(|w| table.featurize(w)).collect(),
    })
}

pub fn train_segmentation_map(data: &SegmentationData, params: Params) -> Result<MapState> {
    let mut map = MapState::new(params)?;
    map.train_stream(data.train.iter().map(Vec::as_slice), &TrainOptions::default())?;
    Ok(map)
}

pub fn segmentation_eval_data(data: &SegmentationData, params: Params) -> Result<EvalReport> {
    let map = train_segmentation_map(data, params)?;
    recognition_eval(&map, &data.positives, &data.negatives)
}

pub fn segmentation_eval(
    corpus: &Corpus,
    table: &PhonemeTable,
    params: Params,
    config: &SegmentationConfig,
) -> Result<EvalReport> {
    segmentation_eval_data(&build_segmentation_data(corpus, table, config)?, params)
}

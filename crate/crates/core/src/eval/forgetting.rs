//! Train/test protocols over phoneme windows of increasing size.
//!
//! For a window of `k` phonemes (`12 k` dimensions) the true set is every
//! `k`-phoneme window of every utterance (stride 1, corpus order), and the
//! false set holds as many random `k`-phoneme strings over the corpus
//! alphabet that never occur as a window.

use std::collections::BTreeSet;

use super::metrics::{recognition_eval, EvalReport};
use super::search::{best_index, median, run_all};
use crate::data::{generate_negatives, Corpus, PhonemeId, PhonemeTable, FEATURE_DIM};
use crate::error::{Error, Result};
use crate::model::Params;
use crate::organize::{MapState, TrainOptions};

pub const DEFAULT_SIZES: [usize; 5] = [24, 36, 48, 60, 72];

/// Featurized true and false sets for one input size.
#[derive(Debug, Clone, PartialEq)]
pub struct SizeSet {
    pub dims: usize,
    /// The true set, in corpus order. Used for training and as positives.
    pub positives: Vec<Vec<f64>>,
    pub negatives: Vec<Vec<f64>>,
}

/// Builds the sets for every size. Negatives for size index `i` are drawn
/// with seed `seed + i`.
pub fn build_size_sets(corpus: &Corpus, table: &PhonemeTable, sizes: &[usize], seed: u64) -> Result<Vec<SizeSet>> {
    if corpus.is_empty() {
        return Err(Error::Degenerate("empty corpus".into()));
    }
    let alphabet = corpus.alphabet();
    sizes
        .iter()
        .enumerate()
        .map(|(i, &dims)| {
            if dims == 0 || dims % FEATURE_DIM != 0 {
                return Err(Error::InvalidArgument(format!(
                    "size {dims} is not a positive multiple of {FEATURE_DIM}"
                )));
            }
            let k = dims / FEATURE_DIM;
            let windows: Vec<Vec<PhonemeId>> = corpus.windows(k, 1).into_iter().map(|w| w.phonemes).collect();
            if windows.is_empty() {
                return Err(Error::Degenerate(format!("no utterance has {k} phonemes")));
            }
            let distinct: Vec<Vec<PhonemeId>> = windows.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
            let negatives = generate_negatives(&distinct, &alphabet, windows.len(), seed.wrapping_add(i as u64))?;
            Ok(SizeSet {
                dims,
                positives: windows.iter().map(|w| table.featurize(w)).collect(),
                negatives: negatives.iter().map(|w| table.featurize(w)).collect(),
            })
        })
        .collect()
}

fn train_on(map: &mut MapState, set: &SizeSet) -> Result<()> {
    map.train_stream(set.positives.iter().map(Vec::as_slice), &TrainOptions::default())?;
    Ok(())
}

fn test_on(map: &MapState, set: &SizeSet) -> Result<EvalReport> {
    recognition_eval(map, &set.positives, &set.negatives)
}

/// A fresh map per size, trained on that size then tested on it.
pub fn procedure_a(sets: &[SizeSet], params: Params) -> Result<Vec<EvalReport>> {
    sets.iter()
        .map(|set| {
            let mut map = MapState::new(params)?;
            train_on(&mut map, set)?;
            test_on(&map, set)
        })
        .collect()
}

/// One map trained on every size in the given order, then tested on each.
pub fn procedure_b(sets: &[SizeSet], params: Params) -> Result<Vec<EvalReport>> {
    let map = procedure_b_map(sets, params)?;
    sets.iter().map(|set| test_on(&map, set)).collect()
}

/// The map procedure B tests.
pub fn procedure_b_map(sets: &[SizeSet], params: Params) -> Result<MapState> {
    let mut map = MapState::new(params)?;
    for set in sets {
        train_on(&mut map, set)?;
    }
    Ok(map)
}

/// Both procedures run for every parameter set; reports indexed
/// `[parameter set][size]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ForgettingSweep {
    pub sizes: Vec<usize>,
    pub a: Vec<Vec<EvalReport>>,
    pub b: Vec<Vec<EvalReport>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Procedure {
    A,
    B,
}

impl ForgettingSweep {
    pub fn reports(&self, procedure: Procedure) -> &[Vec<EvalReport>] {
        match procedure {
            Procedure::A => &self.a,
            Procedure::B => &self.b,
        }
    }

    /// Counts pooled over all sizes, one report per parameter set.
    pub fn pooled(&self, procedure: Procedure) -> Vec<EvalReport> {
        self.reports(procedure)
            .iter()
            .map(|per_size| per_size.iter().fold(EvalReport::default(), |acc, r| acc + *r))
            .collect()
    }

    /// Best parameter set by pooled score: `(index, pooled report)`.
    pub fn best_pooled(&self, procedure: Procedure) -> Option<(usize, EvalReport)> {
        let pooled = self.pooled(procedure);
        best_index(&pooled).map(|i| (i, pooled[i]))
    }

    /// For each size, the best parameter set at that size alone.
    pub fn best_per_size(&self, procedure: Procedure) -> Vec<(usize, EvalReport)> {
        let runs = self.reports(procedure);
        (0..self.sizes.len())
            .filter_map(|s| {
                let column: Vec<EvalReport> = runs.iter().map(|r| r[s]).collect();
                best_index(&column).map(|i| (i, column[i]))
            })
            .collect()
    }

    /// Median F-measure per size over all parameter sets.
    pub fn median_per_size(&self, procedure: Procedure) -> Vec<f64> {
        let runs = self.reports(procedure);
        (0..self.sizes.len())
            .map(|s| median(&runs.iter().map(|r| r[s].f_measure).collect::<Vec<_>>()).unwrap_or(0.0))
            .collect()
    }
}

/// Runs both procedures for every parameter set, concurrently.
pub fn forgetting_sweep(sets: &[SizeSet], paramsets: &[Params]) -> Result<ForgettingSweep> {
    let runs = run_all(paramsets, |p| Ok((procedure_a(sets, *p)?, procedure_b(sets, *p)?)))?;
    let (a, b) = runs.into_iter().unzip();
    Ok(ForgettingSweep {
        sizes: sets.iter().map(|s| s.dims).collect(),
        a,
        b,
    })
}

#[cfg(test)]
mod tests {
    use std::path::Path;

    use super::*;

    fn table() -> PhonemeTable {
        let mut csv = String::new();
        for (i, s) in ["A", "B", "C", "D", "E", "F"].iter().enumerate() {
            let mut row = ["0"; 12];
            row[i] = "1";
            row[11 - i] = "0.5";
            csv.push_str(&format!("{s},{}\n", row.join(",")));
        }
        PhonemeTable::parse(&csv, Path::new("t")).unwrap()
    }

    fn corpus(t: &PhonemeTable) -> Corpus {
        Corpus::parse("A B ; C D\nB C ; D ; E A\nF A ; B\n", t, Path::new("c")).unwrap()
    }

    #[test]
    fn set_sizes_and_counts() {
        let t = table();
        let sets = build_size_sets(&corpus(&t), &t, &[24, 36], 1).unwrap();
        assert_eq!(sets[0].positives.len(), 3 + 4 + 2);
        assert_eq!(sets[1].positives.len(), 2 + 3 + 1);
        for s in &sets {
            assert_eq!(s.positives.len(), s.negatives.len());
            assert!(s.positives.iter().chain(&s.negatives).all(|p| p.len() == s.dims));
            for n in &s.negatives {
                assert!(!s.positives.contains(n));
            }
        }
        assert!(build_size_sets(&corpus(&t), &t, &[30], 1).is_err());
        assert!(build_size_sets(&corpus(&t), &t, &[12 * 9], 1).is_err());
        assert!(build_size_sets(&Corpus::new(vec![]), &t, &[24], 1).is_err());
    }

    #[test]
    fn single_size_protocols_coincide() {
        let t = table();
        let sets = build_size_sets(&corpus(&t), &t, &[24], 3).unwrap();
        let p = Params {
            a_t: 0.9,
            ..Params::default()
        };
        assert_eq!(procedure_a(&sets, p).unwrap(), procedure_b(&sets, p).unwrap());
    }

    #[test]
    fn sweep_selection() {
        let t = table();
        let sets = build_size_sets(&corpus(&t), &t, &[24, 36], 3).unwrap();
        let ps: Vec<Params> = [0.8, 0.97, 0.999]
            .iter()
            .map(|&a_t| Params {
                a_t,
                ..Params::default()
            })
            .collect();
        let sweep = forgetting_sweep(&sets, &ps).unwrap();
        assert_eq!(sweep.a.len(), 3);
        assert_eq!(sweep.a[1], procedure_a(&sets, ps[1]).unwrap());
        let per_size = sweep.best_per_size(Procedure::B);
        assert_eq!(per_size.len(), 2);
        for (s, (i, r)) in per_size.iter().enumerate() {
            assert_eq!(sweep.b[*i][s], *r);
            assert!(sweep.b.iter().all(|run| run[s].f_measure <= r.f_measure));
        }
        let (i, pooled) = sweep.best_pooled(Procedure::A).unwrap();
        assert_eq!(pooled, sweep.a[i][0] + sweep.a[i][1]);
    }

    #[test]
    fn counts_partition_the_sets() {
        let t = table();
        let sets = build_size_sets(&corpus(&t), &t, &DEFAULT_SIZES[..3], 3).unwrap();
        let p = Params {
            a_t: 0.95,
            ..Params::default()
        };
        for reports in [procedure_a(&sets, p).unwrap(), procedure_b(&sets, p).unwrap()] {
            for (r, s) in reports.iter().zip(&sets) {
                assert_eq!(r.tp + r.fn_, s.positives.len() as u64);
                assert_eq!(r.fp + r.tn, s.negatives.len() as u64);
            }
        }
    }
}

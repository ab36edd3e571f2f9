//! Recognition counts and precision / recall / F-measure.

use std::collections::HashMap;
use std::fmt;
use std::ops::Add;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::organize::MapState;

/// Confusion counts for a word / non-word recognition test, with the derived
/// scores. Zero denominators give zero scores.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EvalReport {
    pub tp: u64,
    pub fp: u64,
    pub fn_: u64,
    pub tn: u64,
    pub precision: f64,
    pub recall: f64,
    pub f_measure: f64,
}

fn ratio(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Harmonic mean of precision and recall, 0 when both are 0.
pub fn f_measure(precision: f64, recall: f64) -> f64 {
    if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    }
}

impl EvalReport {
    pub fn from_counts(tp: u64, fp: u64, fn_: u64, tn: u64) -> Self {
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        EvalReport {
            tp,
            fp,
            fn_,
            tn,
            precision,
            recall,
            f_measure: f_measure(precision, recall),
        }
    }
}

/// Pools counts (and recomputes the scores).
impl Add for EvalReport {
    type Output = EvalReport;

    fn add(self, rhs: Self) -> Self {
        EvalReport::from_counts(self.tp + rhs.tp, self.fp + rhs.fp, self.fn_ + rhs.fn_, self.tn + rhs.tn)
    }
}

impl fmt::Display for EvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "F={:.3} P={:.3} R={:.3} (tp={} fp={} fn={} tn={})",
            self.f_measure, self.precision, self.recall, self.tp, self.fp, self.fn_, self.tn
        )
    }
}

/// Applies the clustering-phase decision to both sets: an assigned positive
/// is a true positive, an assigned negative a false positive.
pub fn recognition_eval<P>(map: &MapState, positives: &[P], negatives: &[P]) -> Result<EvalReport>
where
    P: AsRef<[f64]> + Sync,
{
    if map.is_empty() && !(positives.is_empty() && negatives.is_empty()) {
        return Err(Error::EmptyMap);
    }
    let accepted = |set: &[P]| -> u64 {
        // repeated patterns get the same decision; decide each distinct one once
        let mut counts: HashMap<Vec<u64>, (usize, u64)> = HashMap::new();
        for (i, p) in set.iter().enumerate() {
            let key = p.as_ref().iter().map(|v| v.to_bits()).collect();
            counts.entry(key).or_insert((i, 0)).1 += 1;
        }
        let distinct: Vec<(usize, u64)> = counts.into_values().collect();
        distinct
            .par_iter()
            .filter(|(i, _)| map.accepts(set[*i].as_ref()))
            .map(|(_, n)| n)
            .sum()
    };
    let tp = accepted(positives);
    let fp = accepted(negatives);
    Ok(EvalReport::from_counts(
        tp,
        fp,
        positives.len() as u64 - tp,
        negatives.len() as u64 - fp,
    ))
}

/// Published word-segmentation scores of other learners, `(name, F, P, R)`.
/// Quoted for comparison only.
pub const SEGMENTATION_BASELINES: [(&str, f64, f64, f64); 4] = [
    ("PUDDLE", 0.706, 0.682, 0.733),
    ("DiBS", 0.236, 0.234, 0.240),
    ("AGu", 0.782, 0.787, 0.777),
    ("TPs", 0.468, 0.432, 0.512),
];

/// Published score of this model on the same task, `(F, P, R)`.
pub const SEGMENTATION_REFERENCE: (f64, f64, f64) = (0.750, 0.856, 0.667);

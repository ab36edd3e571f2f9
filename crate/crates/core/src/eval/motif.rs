//! Motif discovery on labeled series: train once over the training split,
//! then compare every learned prototype with the per-class mean and spread
//! of the test split.

use std::collections::BTreeMap;

use crate::cluster::{cluster_batch, extract_motifs, ClusterAssignment, Motif};
use crate::error::{Error, Result};
use crate::model::{Params, Pattern};
use crate::organize::{MapState, TrainOptions, TrainSummary};

/// Per-point mean and population standard deviation of one class.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassEnvelope {
    pub label: String,
    pub count: usize,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

/// One envelope per label, in label order. Series of a class must share a
/// length.
pub fn class_envelopes(patterns: &[Pattern]) -> Result<Vec<ClassEnvelope>> {
    let mut groups: BTreeMap<String, Vec<&[f64]>> = BTreeMap::new();
    for p in patterns {
        let label = p.label.clone().unwrap_or_default();
        groups.entry(label).or_default().push(&p.values);
    }
    groups
        .into_iter()
        .map(|(label, rows)| {
            let len = rows[0].len();
            if rows.iter().any(|r| r.len() != len) {
                return Err(Error::InvalidArgument(format!("class `{label}` mixes series lengths")));
            }
            let n = rows.len() as f64;
            let mean: Vec<f64> = (0..len).map(|i| rows.iter().map(|r| r[i]).sum::<f64>() / n).collect();
            let std = (0..len)
                .map(|i| (rows.iter().map(|r| (r[i] - mean[i]).powi(2)).sum::<f64>() / n).sqrt())
                .collect();
            Ok(ClassEnvelope {
                label,
                count: rows.len(),
                mean,
                std,
            })
        })
        .collect()
}

/// Share of the prototype's points inside `mean ± k·std`, compared point by
/// point over the common prefix (0 when either is empty).
pub fn envelope_coverage(prototype: &[f64], envelope: &ClassEnvelope, k: f64) -> f64 {
    let n = prototype.len().min(envelope.mean.len());
    if n == 0 {
        return 0.0;
    }
    let inside = (0..n)
        .filter(|&i| (prototype[i] - envelope.mean[i]).abs() <= k * envelope.std[i])
        .count();
    inside as f64 / n as f64
}

/// A learned motif matched to the class whose envelope it fits best.
#[derive(Debug, Clone, PartialEq)]
pub struct MotifFit {
    pub motif: Motif,
    pub class: String,
    pub coverage: f64,
}

#[derive(Debug, Clone)]
pub struct MotifRun {
    pub map: MapState,
    pub summary: TrainSummary,
    pub envelopes: Vec<ClassEnvelope>,
    pub fits: Vec<MotifFit>,
    pub assignments: Vec<ClusterAssignment>,
}

/// One training pass over `train`, then motif extraction, clustering of
/// `test`, and envelope fits at `k` standard deviations.
pub fn motif_discovery(train: &[Pattern], test: &[Pattern], params: Params, k: f64) -> Result<MotifRun> {
    let mut map = MapState::new(params)?;
    let summary = map.train_stream(train.iter().map(|p| p.values.as_slice()), &TrainOptions::default())?;
    let envelopes = class_envelopes(test)?;
    let fits = extract_motifs(&map)
        .into_iter()
        .map(|motif| {
            let (class, coverage) = envelopes
                .iter()
                .map(|e| (e.label.clone(), envelope_coverage(&motif.prototype, e, k)))
                .fold((String::new(), f64::NEG_INFINITY), |best, cur| {
                    if cur.1 > best.1 {
                        cur
                    } else {
                        best
                    }
                });
            MotifFit {
                motif,
                class,
                coverage: coverage.max(0.0),
            }
        })
        .collect();
    let tests: Vec<&[f64]> = test.iter().map(|p| p.values.as_slice()).collect();
    let assignments = cluster_batch(&map, &tests)?;
    Ok(MotifRun {
        map,
        summary,
        envelopes,
        fits,
        assignments,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn envelope_statistics() {
        let pats = vec![
            Pattern::labeled(vec![0.0, 1.0], "a"),
            Pattern::labeled(vec![2.0, 1.0], "a"),
            Pattern::labeled(vec![5.0, 5.0], "b"),
        ];
        let env = class_envelopes(&pats).unwrap();
        assert_eq!(env.len(), 2);
        assert_eq!(env[0].mean, vec![1.0, 1.0]);
        assert_eq!(env[0].std, vec![1.0, 0.0]);
        assert_eq!(env[1].count, 1);
        assert_eq!(envelope_coverage(&[2.9, 1.0], &env[0], 2.0), 1.0);
        assert_eq!(envelope_coverage(&[3.1, 1.1], &env[0], 2.0), 0.0);
        assert_eq!(envelope_coverage(&[], &env[0], 2.0), 0.0);
    }

    #[test]
    fn two_shapes_two_motifs() {
        let up: Vec<f64> = (0..20).map(|i| i as f64 / 19.0).collect();
        let down: Vec<f64> = up.iter().rev().copied().collect();
        let jitter = |v: &[f64], s: f64| v.iter().map(|x| (x + s).clamp(0.0, 1.0)).collect::<Vec<_>>();
        let mut train = Vec::new();
        let mut test = Vec::new();
        for i in 0..10 {
            let s = (i as f64 - 5.0) * 0.002;
            train.push(Pattern::labeled(jitter(&up, s), "1"));
            train.push(Pattern::labeled(jitter(&down, s), "2"));
            test.push(Pattern::labeled(jitter(&up, -s), "1"));
            test.push(Pattern::labeled(jitter(&down, -s), "2"));
        }
        let p = Params {
            a_t: 0.9,
            e_b: 0.1,
            e_n: 0.0,
            ..Params::default()
        };
        let run = motif_discovery(&train, &test, p, 2.0).unwrap();
        assert_eq!(run.map.len(), 2);
        let mut classes: Vec<&str> = run.fits.iter().map(|f| f.class.as_str()).collect();
        classes.sort();
        assert_eq!(classes, ["1", "2"]);
        assert!(run.fits.iter().all(|f| f.coverage >= 0.9));
        assert!(run.assignments.iter().all(|a| a.is_assigned()));
    }
}

//! Best-of-sample parameter search.

use rayon::prelude::*;

use super::metrics::EvalReport;
use crate::error::{Error, Result};
use crate::model::Params;

/// Outcome of running one experiment over a list of parameter sets.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub best_index: usize,
    pub best_params: Params,
    pub best: EvalReport,
    /// Median F-measure over all sets (mean of the middle two for even n).
    pub median_f: f64,
    /// Every report, in parameter-set order.
    pub reports: Vec<EvalReport>,
}

/// Runs `experiment` for every parameter set concurrently, keeping input
/// order. The first error aborts the whole run.
pub fn run_all<T, F>(paramsets: &[Params], experiment: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&Params) -> Result<T> + Sync,
{
    paramsets.par_iter().map(&experiment).collect()
}

/// Index of the best report: highest F, then highest precision, then lowest
/// index.
pub fn best_index(reports: &[EvalReport]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, r) in reports.iter().enumerate() {
        let better = match best {
            None => true,
            Some(b) => {
                let cur = &reports[b];
                r.f_measure > cur.f_measure || (r.f_measure == cur.f_measure && r.precision > cur.precision)
            }
        };
        if better {
            best = Some(i);
        }
    }
    best
}

pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    Some(if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) / 2.0
    })
}

pub fn summarize(paramsets: &[Params], reports: Vec<EvalReport>) -> Result<SearchResult> {
    if paramsets.len() != reports.len() {
        return Err(Error::InvalidArgument(format!(
            "{} parameter sets but {} reports",
            paramsets.len(),
            reports.len()
        )));
    }
    let best_index = best_index(&reports).ok_or_else(|| Error::InvalidArgument("no parameter sets".into()))?;
    let fs: Vec<f64> = reports.iter().map(|r| r.f_measure).collect();
    Ok(SearchResult {
        best_index,
        best_params: paramsets[best_index],
        best: reports[best_index],
        median_f: median(&fs).unwrap_or(0.0),
        reports,
    })
}

pub fn search_best<F>(paramsets: &[Params], experiment: F) -> Result<SearchResult>
where
    F: Fn(&Params) -> Result<EvalReport> + Sync,
{
    if paramsets.is_empty() {
        return Err(Error::InvalidArgument("no parameter sets".into()));
    }
    let reports = run_all(paramsets, experiment)?;
    summarize(paramsets, reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(tp: u64, fp: u64, fn_: u64) -> EvalReport {
        EvalReport::from_counts(tp, fp, fn_, 0)
    }

    #[test]
    fn tie_breaks() {
        // same F (0.5), second has higher precision
        let a = report(1, 1, 1);
        let b = EvalReport { precision: 0.6, ..a };
        assert_eq!(best_index(&[a, b, b]), Some(1));
        assert_eq!(best_index(&[a, a]), Some(0));
        assert_eq!(best_index(&[]), None);
        assert_eq!(best_index(&[report(0, 1, 1), report(3, 0, 0)]), Some(1));
    }

    #[test]
    fn medians() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), Some(2.0));
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), Some(2.5));
        assert_eq!(median(&[]), None);
    }

    #[test]
    fn search_keeps_order() {
        let sets: Vec<Params> = (1..=9)
            .map(|i| Params {
                a_t: 0.7 + 0.01 * i as f64,
                ..Params::default()
            })
            .collect();
        let r = search_best(&sets, |p| {
            let tp = (p.a_t * 100.0).round() as u64 % 5;
            Ok(report(tp, 1, 1))
        })
        .unwrap();
        assert_eq!(r.reports.len(), 9);
        // a_t = 0.74 and 0.79 give tp = 4; the earlier wins
        assert_eq!(r.best_index, 3);
        assert_eq!(r.best_params, sets[3]);
        assert!(search_best(&[], |_| Ok(report(1, 0, 0))).is_err());
        assert!(search_best(&sets, |_| Err(Error::Degenerate("x".into()))).is_err());
    }
}

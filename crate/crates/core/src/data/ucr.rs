//! UCR archive text files: one series per row, class label in the first
//! column, values separated by whitespace, commas or tabs.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::Pattern;

/// A labeled series before normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct RawSeries {
    pub label: String,
    pub values: Vec<f64>,
}

fn split_fields(line: &str) -> impl Iterator<Item = &str> {
    line.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
}

pub fn parse_ucr(text: &str, origin: &Path) -> Result<Vec<RawSeries>> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let mut fields = split_fields(line);
        let Some(first) = fields.next() else {
            continue;
        };
        let label_value: f64 = first
            .parse()
            .map_err(|_| Error::parse(origin, line_no, format!("row {line_no}: bad class label `{first}`")))?;
        if label_value.fract() != 0.0 || !label_value.is_finite() {
            return Err(Error::parse(
                origin,
                line_no,
                format!("row {line_no}: class label `{first}` is not an integer"),
            ));
        }
        let mut values = fields
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| Error::parse(origin, line_no, format!("row {line_no}: non-numeric value `{t}`")))
            })
            .collect::<Result<Vec<f64>>>()?;
        // variable-length datasets pad with trailing NaN
        while values.last().is_some_and(|v| v.is_nan()) {
            values.pop();
        }
        if values.is_empty() {
            return Err(Error::parse(origin, line_no, format!("row {line_no}: no values")));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::parse(
                origin,
                line_no,
                format!("row {line_no}: non-finite value"),
            ));
        }
        rows.push(RawSeries {
            label: format!("{}", label_value as i64),
            values,
        });
    }
    Ok(rows)
}

pub fn read_ucr(path: &Path) -> Result<Vec<RawSeries>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_ucr(&text, path)
}

/// Global minimum and maximum over every value of every series.
pub fn value_bounds<'a>(series: impl IntoIterator<Item = &'a RawSeries>) -> Option<(f64, f64)> {
    series
        .into_iter()
        .flat_map(|s| s.values.iter().copied())
        .fold(None, |acc, v| match acc {
            None => Some((v, v)),
            Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
        })
}

/// Rescales into `[0, 1]` with the given bounds (clamped, so values from
/// another split never leave the unit interval).
pub fn normalize(series: &[RawSeries], (lo, hi): (f64, f64)) -> Vec<Pattern> {
    let span = hi - lo;
    series
        .iter()
        .map(|s| {
            let values = s
                .values
                .iter()
                .map(|&v| {
                    if span > 0.0 {
                        ((v - lo) / span).clamp(0.0, 1.0)
                    } else {
                        0.0
                    }
                })
                .collect();
            Pattern::labeled(values, s.label.clone())
        })
        .collect()
}

/// Loads one UCR file, min-max normalized over the file.
pub fn load_ucr(path: &Path) -> Result<Vec<Pattern>> {
    let rows = read_ucr(path)?;
    Ok(match value_bounds(&rows) {
        Some(bounds) => normalize(&rows, bounds),
        None => Vec::new(),
    })
}

/// Loads a train/test pair normalized with the bounds of both files together.
pub fn load_ucr_split(train: &Path, test: &Path) -> Result<(Vec<Pattern>, Vec<Pattern>)> {
    let train_rows = read_ucr(train)?;
    let test_rows = read_ucr(test)?;
    let Some(bounds) = value_bounds(train_rows.iter().chain(&test_rows)) else {
        return Ok((Vec::new(), Vec::new()));
    };
    Ok((normalize(&train_rows, bounds), normalize(&test_rows, bounds)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_whitespace_and_commas() {
        let text = "  2.0000000e+00  -1.0  0.5 3.0\n1,0,1,2\n\n";
        let rows = parse_ucr(text, Path::new("x")).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].label, "2");
        assert_eq!(rows[0].values, vec![-1.0, 0.5, 3.0]);
        assert_eq!(rows[1].label, "1");
    }

    #[test]
    fn empty_file() {
        assert!(parse_ucr("", Path::new("x")).unwrap().is_empty());
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("empty.txt");
        std::fs::write(&p, "").unwrap();
        assert!(load_ucr(&p).unwrap().is_empty());
    }

    #[test]
    fn bad_token_names_row() {
        let err = parse_ucr("1 0.1 0.2\n2 0.3 abc\n", Path::new("f.tsv")).unwrap_err();
        match err {
            Error::Parse { line, message, .. } => {
                assert_eq!(line, 2);
                assert!(message.contains("row 2"));
                assert!(message.contains("abc"));
            }
            other => panic!("{other:?}"),
        }
        assert!(parse_ucr("1.5 0.1\n", Path::new("f")).is_err());
    }

    #[test]
    fn trailing_nan_padding_is_dropped() {
        let rows = parse_ucr("1 0.1 0.2 NaN NaN\n", Path::new("x")).unwrap();
        assert_eq!(rows[0].values, vec![0.1, 0.2]);
    }

    #[test]
    fn minmax_to_unit_interval() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("d.txt");
        std::fs::write(&p, "1 -2 0 2\n2 1 1 -1\n").unwrap();
        let pats = load_ucr(&p).unwrap();
        assert_eq!(pats[0].values, vec![0.0, 0.5, 1.0]);
        assert_eq!(pats[1].values, vec![0.75, 0.75, 0.25]);
        assert_eq!(pats[1].label.as_deref(), Some("2"));
    }
}

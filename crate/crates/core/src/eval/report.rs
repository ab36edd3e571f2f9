//! Tab-separated report and parameter-list formats.

use std::fmt::Write as _;
use std::path::Path;

use super::metrics::{EvalReport, SEGMENTATION_BASELINES, SEGMENTATION_REFERENCE};
use crate::error::{Error, Result};
use crate::model::Params;
use crate::persist::{fmt_f64, set_param};

const PARAM_COLUMNS: [&str; 10] = [
    "a_t", "e_b", "e_n", "beta", "eps_ds", "n_max", "d_min", "d_max", "minwd", "epsilon",
];

/// One row per parameter set, preceded by a header row.
pub fn params_to_tsv(sets: &[Params]) -> String {
    let mut out = format!("index\t{}\n", PARAM_COLUMNS.join("\t"));
    for (i, p) in sets.iter().enumerate() {
        let _ = writeln!(
            out,
            "{i}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            fmt_f64(p.a_t),
            fmt_f64(p.e_b),
            fmt_f64(p.e_n),
            fmt_f64(p.beta),
            fmt_f64(p.eps_ds),
            p.n_max,
            p.d_min,
            p.d_max,
            fmt_f64(p.minwd),
            fmt_f64(p.epsilon),
        );
    }
    out
}

/// Reads a list written by [`params_to_tsv`]. Columns may appear in any
/// order and any subset; missing ones come from `base`.
pub fn params_from_tsv(text: &str, base: Params, origin: &Path) -> Result<Vec<Params>> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'));
    let Some((_, header)) = lines.next() else {
        return Ok(Vec::new());
    };
    let columns: Vec<&str> = header.split('\t').map(str::trim).collect();
    let mut out = Vec::new();
    for (i, line) in lines {
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != columns.len() {
            return Err(Error::parse(
                origin,
                i + 1,
                format!("expected {} fields, found {}", columns.len(), fields.len()),
            ));
        }
        let mut p = base;
        for (name, value) in columns.iter().zip(fields) {
            if *name == "index" {
                continue;
            }
            match set_param(&mut p, name, value) {
                Ok(true) => {}
                Ok(false) => return Err(Error::parse(origin, 1, format!("unknown column `{name}`"))),
                Err(e) => return Err(Error::parse(origin, i + 1, format!("{name}: {e}"))),
            }
        }
        p.validate().map_err(|e| Error::parse(origin, i + 1, e.to_string()))?;
        out.push(p);
    }
    Ok(out)
}

pub const REPORT_HEADER: &str = "label\ttp\tfp\tfn\ttn\tprecision\trecall\tf_measure";

fn report_row(out: &mut String, label: &str, r: &EvalReport) {
    let _ = writeln!(
        out,
        "{label}\t{}\t{}\t{}\t{}\t{:.6}\t{:.6}\t{:.6}",
        r.tp, r.fp, r.fn_, r.tn, r.precision, r.recall, r.f_measure
    );
}

/// Labeled reports, one per row.
pub fn reports_to_tsv<S: AsRef<str>>(rows: &[(S, EvalReport)]) -> String {
    let mut out = format!("{REPORT_HEADER}\n");
    for (label, r) in rows {
        report_row(&mut out, label.as_ref(), r);
    }
    out
}

/// Comparison table: this run's row, the published row for this model, and
/// the quoted baselines (`label F P R`).
pub fn segmentation_table(run: &EvalReport) -> String {
    let mut out = String::from("method\tf_measure\tprecision\trecall\n");
    let _ = writeln!(
        out,
        "this run\t{:.3}\t{:.3}\t{:.3}",
        run.f_measure, run.precision, run.recall
    );
    let (f, p, r) = SEGMENTATION_REFERENCE;
    let _ = writeln!(out, "VILMAP (published)\t{f:.3}\t{p:.3}\t{r:.3}");
    for (name, f, p, r) in SEGMENTATION_BASELINES {
        let _ = writeln!(out, "{name} (published)\t{f:.3}\t{p:.3}\t{r:.3}");
    }
    out
}

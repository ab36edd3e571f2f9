//! Plain-text model format.
//!
//! ```text
//! VILMAP 1
//! a_t=0.702
//! ...                      one `name=value` line per parameter
//! next_id=2
//! patterns_seen=50
//! node <id> <len> <wins>
//! <center values>
//! <relevance values>
//! <distance_avg values>
//! ...
//! edges
//! <a> <b>
//! ```
//!
//! Floats are written with 17 significant digits, so a save/load round trip
//! reproduces every value bit for bit.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{Node, NodeId, Params};
use crate::organize::MapState;

pub const MAGIC: &str = "VILMAP 1";

/// Shortest text that parses back to the same bits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

fn write_vector(out: &mut String, values: &[f64]) {
    let mut first = true;
    for v in values {
        if !first {
            out.push(' ');
        }
        first = false;
        out.push_str(&fmt_f64(*v));
    }
    out.push('\n');
}

pub(crate) fn write_params(out: &mut String, p: &Params) {
    let _ = writeln!(out, "a_t={}", fmt_f64(p.a_t));
    let _ = writeln!(out, "e_b={}", fmt_f64(p.e_b));
    let _ = writeln!(out, "e_n={}", fmt_f64(p.e_n));
    let _ = writeln!(out, "beta={}", fmt_f64(p.beta));
    let _ = writeln!(out, "eps_ds={}", fmt_f64(p.eps_ds));
    let _ = writeln!(out, "n_max={}", p.n_max);
    let _ = writeln!(out, "d_min={}", p.d_min);
    let _ = writeln!(out, "d_max={}", p.d_max);
    let _ = writeln!(out, "minwd={}", fmt_f64(p.minwd));
    let _ = writeln!(out, "epsilon={}", fmt_f64(p.epsilon));
}

/// Sets one `name=value` parameter. Returns `Ok(false)` for unknown names.
pub fn set_param(p: &mut Params, name: &str, value: &str) -> std::result::Result<bool, String> {
    fn float(v: &str) -> std::result::Result<f64, String> {
        v.trim().parse::<f64>().map_err(|e| format!("`{v}`: {e}"))
    }
    fn int(v: &str) -> std::result::Result<usize, String> {
        v.trim().parse::<usize>().map_err(|e| format!("`{v}`: {e}"))
    }
    match name.trim() {
        "a_t" => p.a_t = float(value)?,
        "e_b" => p.e_b = float(value)?,
        "e_n" => p.e_n = float(value)?,
        "beta" => p.beta = float(value)?,
        "eps_ds" => p.eps_ds = float(value)?,
        "n_max" => p.n_max = int(value)?,
        "d_min" => p.d_min = int(value)?,
        "d_max" => p.d_max = int(value)?,
        "minwd" => p.minwd = float(value)?,
        "epsilon" => p.epsilon = float(value)?,
        _ => return Ok(false),
    }
    Ok(true)
}

/// Serializes a map to the text format.
pub fn to_string(map: &MapState) -> String {
    let mut out = String::new();
    out.push_str(MAGIC);
    out.push('\n');
    write_params(&mut out, map.params());
    let _ = writeln!(out, "next_id={}", map.next_id());
    let _ = writeln!(out, "patterns_seen={}", map.patterns_seen());
    for node in map.nodes() {
        let _ = writeln!(out, "node {} {} {}", node.id, node.len(), node.wins);
        write_vector(&mut out, &node.center);
        write_vector(&mut out, &node.relevance);
        write_vector(&mut out, &node.distance_avg);
    }
    out.push_str("edges\n");
    for (a, b) in map.connections().edges() {
        let _ = writeln!(out, "{a} {b}");
    }
    out
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    path: &'a Path,
    last: usize,
}

impl<'a> Lines<'a> {
    fn next(&mut self) -> Option<&'a str> {
        self.inner.next().map(|(i, l)| {
            self.last = i + 1;
            l
        })
    }

    fn expect(&mut self, what: &str) -> Result<&'a str> {
        self.next()
            .ok_or_else(|| Error::parse(self.path, self.last + 1, format!("expected {what}")))
    }

    fn err(&self, message: impl Into<String>) -> Error {
        Error::parse(self.path, self.last, message)
    }
}

fn parse_vector(lines: &mut Lines<'_>, len: usize, what: &str) -> Result<Vec<f64>> {
    let line = lines.expect(what)?;
    let values = line
        .split_whitespace()
        .map(|t| t.parse::<f64>().map_err(|e| lines.err(format!("{what}: `{t}`: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    if values.len() != len {
        return Err(lines.err(format!("{what}: expected {len} values, found {}", values.len())));
    }
    Ok(values)
}

/// Parses a map from the text format. `origin` is only used in error messages.
pub fn from_str(text: &str, origin: &Path) -> Result<MapState> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
        path: origin,
        last: 0,
    };
    if lines.expect("header")?.trim() != MAGIC {
        return Err(lines.err(format!("missing `{MAGIC}` header")));
    }
    let mut params = Params::default();
    let mut next_id = None;
    let mut patterns_seen = 0;
    let mut nodes = Vec::new();
    let mut edges = Vec::new();

    let mut line = lines.expect("parameters")?;
    while let Some((name, value)) = line.split_once('=') {
        match name.trim() {
            "next_id" => next_id = Some(value.trim().parse().map_err(|e| lines.err(format!("next_id: {e}")))?),
            "patterns_seen" => {
                patterns_seen = value
                    .trim()
                    .parse()
                    .map_err(|e| lines.err(format!("patterns_seen: {e}")))?
            }
            other => {
                if !set_param(&mut params, other, value).map_err(|e| lines.err(e))? {
                    return Err(lines.err(format!("unknown parameter `{other}`")));
                }
            }
        }
        line = lines.expect("node or edges")?;
    }

    loop {
        let mut fields = line.split_whitespace();
        match fields.next() {
            Some("node") => {
                let nums: Vec<u64> = fields
                    .map(|t| t.parse::<u64>().map_err(|e| lines.err(format!("node header: {e}"))))
                    .collect::<Result<_>>()?;
                let [id, len, wins] = nums[..] else {
                    return Err(lines.err("node header needs `node <id> <len> <wins>`"));
                };
                let len = len as usize;
                let center = parse_vector(&mut lines, len, "center")?;
                let relevance = parse_vector(&mut lines, len, "relevance")?;
                let distance_avg = parse_vector(&mut lines, len, "distance_avg")?;
                nodes.push(Node {
                    id: id as NodeId,
                    center,
                    relevance,
                    distance_avg,
                    wins,
                });
            }
            Some("edges") => break,
            Some(other) => return Err(lines.err(format!("unexpected `{other}`"))),
            None => {}
        }
        line = lines.expect("node or edges")?;
    }

    while let Some(line) = lines.next() {
        if line.trim().is_empty() {
            continue;
        }
        let pair: Vec<NodeId> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|e| lines.err(format!("edge: {e}"))))
            .collect::<Result<_>>()?;
        let [a, b] = pair[..] else {
            return Err(lines.err("edge needs two node ids"));
        };
        edges.push((a, b));
    }

    MapState::from_parts(params, nodes, edges, next_id, patterns_seen)
        .map_err(|e| Error::parse(origin, 0, e.to_string()))
}

pub fn save(map: &MapState, path: &Path) -> Result<()> {
    fs::write(path, to_string(map)).map_err(|e| Error::io(path, e))
}

pub fn load(path: &Path) -> Result<MapState> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    from_str(&text, path)
}

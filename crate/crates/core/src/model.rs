//! Domain types and the stateless math of the map: relevance-weighted
//! distance, node activation, variable-length alignment and winner selection.
//!
//! Everything here is a pure function of its arguments.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Default division guard used by [`activation`].
pub const DEFAULT_EPSILON: f64 = 1e-9;

/// Identifier of a node. Ids are handed out in creation order and never reused.
pub type NodeId = usize;

/// A variable-length input vector, optionally tagged with a class or word label.
#[derive(Debug, Clone, PartialEq)]
pub struct Pattern {
    pub values: Vec<f64>,
    pub label: Option<String>,
}

impl Pattern {
    pub fn new(values: Vec<f64>) -> Self {
        Pattern { values, label: None }
    }

    pub fn labeled(values: Vec<f64>, label: impl Into<String>) -> Self {
        Pattern {
            values,
            label: Some(label.into()),
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.values.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl From<Vec<f64>> for Pattern {
    fn from(values: Vec<f64>) -> Self {
        Pattern::new(values)
    }
}

/// A cluster prototype.
///
/// `center`, `relevance` and `distance_avg` always have the same length, which
/// only ever grows. Relevances stay in `[0, 1]`, distance averages stay
/// non-negative.
#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub id: NodeId,
    pub center: Vec<f64>,
    pub relevance: Vec<f64>,
    pub distance_avg: Vec<f64>,
    pub wins: u64,
}

impl Node {
    /// A fresh node centered on `values`, with full relevance and zero
    /// distance averages.
    pub fn new(id: NodeId, values: &[f64]) -> Self {
        Node {
            id,
            center: values.to_vec(),
            relevance: vec![1.0; values.len()],
            distance_avg: vec![0.0; values.len()],
            wins: 0,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.center.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.center.is_empty()
    }

    /// Checks the vector-length and value-range invariants.
    pub fn check_invariants(&self) -> Result<()> {
        let m = self.center.len();
        if self.relevance.len() != m || self.distance_avg.len() != m {
            return Err(Error::InvalidArgument(format!(
                "node {}: vector lengths differ (c={}, w={}, d={})",
                self.id,
                m,
                self.relevance.len(),
                self.distance_avg.len()
            )));
        }
        if let Some(w) = self.relevance.iter().find(|w| !(0.0..=1.0).contains(*w)) {
            return Err(Error::InvalidArgument(format!(
                "node {}: relevance {w} outside [0, 1]",
                self.id
            )));
        }
        if let Some(d) = self.distance_avg.iter().find(|d| !(**d >= 0.0)) {
            return Err(Error::InvalidArgument(format!(
                "node {}: negative distance average {d}",
                self.id
            )));
        }
        Ok(())
    }
}

/// Map hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Params {
    /// Activation threshold.
    pub a_t: f64,
    /// Winner learning rate.
    pub e_b: f64,
    /// Neighbor learning rate.
    pub e_n: f64,
    /// Relevance (distance moving-average) rate.
    pub beta: f64,
    /// Relevance smoothness.
    pub eps_ds: f64,
    /// Maximum node count.
    pub n_max: usize,
    /// Shortest accepted pattern.
    pub d_min: usize,
    /// Longest accepted pattern.
    pub d_max: usize,
    /// Connection threshold on relevance similarity.
    pub minwd: f64,
    /// Division guard inside the activation.
    pub epsilon: f64,
}

/// Ranges the parameter sampler draws from. `e_n` is sampled as a fraction
/// of `e_b`, see [`crate::eval::lhs`].
pub mod table_ranges {
    pub const A_T: (f64, f64) = (0.70, 0.999);
    pub const BETA: (f64, f64) = (0.001, 0.5);
    pub const E_B: (f64, f64) = (0.0001, 0.01);
    pub const E_N_FRACTION: (f64, f64) = (0.002, 1.0);
    pub const MINWD: (f64, f64) = (0.001, 0.5);
    pub const EPS_DS: (f64, f64) = (0.01, 0.1);
}

impl Default for Params {
    fn default() -> Self {
        Params {
            a_t: 0.95,
            e_b: 0.005,
            e_n: 0.0025,
            beta: 0.1,
            eps_ds: 0.05,
            n_max: 10_000,
            d_min: 1,
            d_max: usize::MAX,
            minwd: 0.25,
            epsilon: DEFAULT_EPSILON,
        }
    }
}

impl Params {
    /// The hand-tuned GunPoint setting (150-point series).
    pub fn gunpoint() -> Self {
        Params {
            a_t: 0.702,
            e_b: 0.060,
            e_n: 0.247,
            beta: 0.092,
            eps_ds: 0.070,
            n_max: 10_000,
            d_min: 150,
            d_max: 150,
            minwd: 0.223,
            epsilon: DEFAULT_EPSILON,
        }
    }

    /// Hard validity: values outside these make the update rules ill-defined.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidArgument(msg));
        if !(self.a_t > 0.0 && self.a_t < 1.0) {
            return bad(format!("a_t={} must lie in (0, 1)", self.a_t));
        }
        for (name, v) in [("e_b", self.e_b), ("e_n", self.e_n), ("beta", self.beta)] {
            if !(0.0..=1.0).contains(&v) {
                return bad(format!("{name}={v} must lie in [0, 1]"));
            }
        }
        if !(self.eps_ds > 0.0) {
            return bad(format!("eps_ds={} must be positive", self.eps_ds));
        }
        if !(self.epsilon > 0.0) {
            return bad(format!("epsilon={} must be positive", self.epsilon));
        }
        if self.n_max == 0 {
            return bad("n_max must be at least 1".into());
        }
        if self.d_min == 0 || self.d_min > self.d_max {
            return bad(format!(
                "length bounds must satisfy 1 <= d_min <= d_max (got {}..{})",
                self.d_min, self.d_max
            ));
        }
        if !(0.0..=1.0).contains(&self.minwd) {
            return bad(format!("minwd={} must lie in [0, 1]", self.minwd));
        }
        Ok(())
    }

    /// Soft check against the sampler ranges. Returns one message per field
    /// outside its range; explicit settings are still accepted.
    pub fn range_warnings(&self) -> Vec<String> {
        use table_ranges::*;
        let mut out = Vec::new();
        let mut check = |name: &str, v: f64, (lo, hi): (f64, f64)| {
            if v < lo || v > hi {
                out.push(format!("{name}={v} outside sampler range [{lo}, {hi}]"));
            }
        };
        check("a_t", self.a_t, A_T);
        check("beta", self.beta, BETA);
        check("e_b", self.e_b, E_B);
        check("minwd", self.minwd, MINWD);
        check("eps_ds", self.eps_ds, EPS_DS);
        if self.e_n > self.e_b {
            out.push(format!(
                "e_n={} exceeds e_b={} (neighbors learn faster than the winner)",
                self.e_n, self.e_b
            ));
        }
        out
    }

    pub fn check_length(&self, len: usize) -> Result<()> {
        if len < self.d_min || len > self.d_max || len == 0 {
            return Err(Error::LengthBounds {
                len,
                min: self.d_min,
                max: self.d_max,
            });
        }
        Ok(())
    }
}

/// How a pattern was lined up against a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Comparison {
    /// Same length, fully aligned.
    Regular,
    /// Pattern shorter than the node; the pattern slides along the node.
    Sliding,
    /// Pattern longer than the node; only the pattern's prefix is compared.
    Truncated,
}

impl Comparison {
    pub fn as_str(self) -> &'static str {
        match self {
            Comparison::Regular => "regular",
            Comparison::Sliding => "sliding",
            Comparison::Truncated => "truncated",
        }
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Comparison {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "regular" => Ok(Comparison::Regular),
            "sliding" => Ok(Comparison::Sliding),
            "truncated" => Ok(Comparison::Truncated),
            other => Err(Error::InvalidArgument(format!("unknown comparison `{other}`"))),
        }
    }
}

/// Outcome of comparing one pattern against one node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchResult {
    pub activation: f64,
    /// Start of the compared window inside the node (sliding mode only).
    pub offset: usize,
    pub mode: Comparison,
    /// Number of compared dimensions.
    pub overlap_len: usize,
}

impl MatchResult {
    /// Node-side index range the pattern was compared against.
    #[inline]
    pub fn node_range(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + self.overlap_len
    }
}

fn check_lengths(x: &[f64], c: &[f64], w: &[f64]) -> Result<()> {
    if x.len() != c.len() || x.len() != w.len() {
        return Err(Error::InvalidArgument(format!(
            "vector lengths differ: x={}, c={}, w={}",
            x.len(),
            c.len(),
            w.len()
        )));
    }
    Ok(())
}

/// Relevance-weighted Euclidean distance `sqrt(sum_i w_i (x_i - c_i)^2)`.
pub fn weighted_distance(x: &[f64], c: &[f64], w: &[f64]) -> Result<f64> {
    check_lengths(x, c, w)?;
    Ok(weighted_sums(x, c, w).1.sqrt())
}

/// Node activation `sum(w) / (sum(w) + D_w(x, c) + epsilon)`.
pub fn activation(x: &[f64], c: &[f64], w: &[f64], epsilon: f64) -> Result<f64> {
    check_lengths(x, c, w)?;
    Ok(activation_unchecked(x, c, w, epsilon))
}

/// `(sum w_i, sum w_i (x_i - c_i)^2)`, accumulated left to right.
#[inline]
fn weighted_sums(x: &[f64], c: &[f64], w: &[f64]) -> (f64, f64) {
    let mut sum_w = 0.0;
    let mut sq = 0.0;
    for ((&xi, &ci), &wi) in x.iter().zip(c).zip(w) {
        let d = xi - ci;
        sum_w += wi;
        sq += wi * d * d;
    }
    (sum_w, sq)
}

#[inline]
pub(crate) fn activation_unchecked(x: &[f64], c: &[f64], w: &[f64], epsilon: f64) -> f64 {
    let (sum_w, sq) = weighted_sums(x, c, w);
    sum_w / (sum_w + sq.sqrt() + epsilon)
}

/// The activation a candidate has to beat: strictly greater than `value`, or
/// equal when `ties_win` is set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Floor {
    pub value: f64,
    pub ties_win: bool,
}

impl Floor {
    pub const NONE: Floor = Floor {
        value: f64::NEG_INFINITY,
        ties_win: true,
    };

    #[inline]
    fn beaten_by(self, a: f64) -> bool {
        a > self.value || (self.ties_win && a == self.value)
    }
}

const BOUND_CHUNK: usize = 4;

/// Relative slack on early rejections, far above the rounding error of the
/// bound so that only candidates that clearly lose are skipped.
const BOUND_SLACK: f64 = 1e-9;

/// Same value as [`activation_unchecked`], or `None` when the result cannot
/// beat `floor`. `sum_w_hi` must not be below the relevance sum of `w`.
///
/// With `S <= sum_w_hi`, the activation `S / (S + sqrt(sq) + epsilon)` is
/// under the floor once `sqrt(sq) > sum_w_hi / floor - sum_w_hi - epsilon`.
/// The partial sum of squares only grows, so the scan stops as soon as it
/// passes that limit (widened by a relative slack).
#[inline]
fn activation_above(x: &[f64], c: &[f64], w: &[f64], epsilon: f64, floor: Floor, sum_w_hi: f64) -> Option<f64> {
    let limit = if floor.value > 0.0 {
        let r = sum_w_hi * (1.0 + BOUND_SLACK) / floor.value - sum_w_hi - epsilon;
        if r < 0.0 {
            return None;
        }
        r * r * (1.0 + BOUND_SLACK)
    } else {
        f64::INFINITY
    };
    let mut sq = 0.0;
    let n = x.len();
    let mut i = 0;
    while i < n {
        let end = (i + BOUND_CHUNK).min(n);
        for j in i..end {
            let d = x[j] - c[j];
            sq += w[j] * d * d;
        }
        if sq > limit {
            return None;
        }
        i = end;
    }
    let sum_w = exact_sum(w);
    let a = sum_w / (sum_w + sq.sqrt() + epsilon);
    floor.beaten_by(a).then_some(a)
}

fn exact_sum(w: &[f64]) -> f64 {
    w.iter().fold(0.0, |acc, &wi| acc + wi)
}

/// Best way to line `pattern` up against `node`.
///
/// Equal lengths compare directly. A shorter pattern is tried at every offset
/// inside the node, one dimension at a time, and the highest activation wins
/// (earliest offset on ties); only the overlapped relevances enter the sum.
/// A longer pattern is cut to the node's length and compared by its prefix.
pub fn best_alignment(node: &Node, pattern: &[f64], epsilon: f64) -> MatchResult {
    best_alignment_above(node, pattern, epsilon, Floor::NONE).expect("any activation beats -inf")
}

/// [`best_alignment`] restricted to results that beat `floor`.
pub(crate) fn best_alignment_above(node: &Node, pattern: &[f64], epsilon: f64, floor: Floor) -> Option<MatchResult> {
    let n = node.len();
    let m = pattern.len();
    if n == m {
        let hi = exact_sum(&node.relevance);
        activation_above(pattern, &node.center, &node.relevance, epsilon, floor, hi).map(|a| MatchResult {
            activation: a,
            offset: 0,
            mode: Comparison::Regular,
            overlap_len: m,
        })
    } else if n > m {
        // running window sums, padded past their accumulated rounding error
        let total = exact_sum(&node.relevance);
        let pad = 4.0 * total * (n as f64) * f64::EPSILON + f64::MIN_POSITIVE;
        let mut window = exact_sum(&node.relevance[..m]);
        let mut floor = floor;
        let mut best = None;
        for offset in 0..=n - m {
            if offset > 0 {
                window += node.relevance[offset + m - 1] - node.relevance[offset - 1];
            }
            let range = offset..offset + m;
            let hi = window.max(0.0) + pad;
            if let Some(a) = activation_above(
                pattern,
                &node.center[range.clone()],
                &node.relevance[range],
                epsilon,
                floor,
                hi,
            ) {
                best = Some(MatchResult {
                    activation: a,
                    offset,
                    mode: Comparison::Sliding,
                    overlap_len: m,
                });
                floor = Floor {
                    value: a,
                    ties_win: false,
                };
            }
        }
        best
    } else {
        let hi = exact_sum(&node.relevance);
        activation_above(&pattern[..n], &node.center, &node.relevance, epsilon, floor, hi).map(|a| MatchResult {
            activation: a,
            offset: 0,
            mode: Comparison::Truncated,
            overlap_len: n,
        })
    }
}

/// The most active node for `pattern`; ties go to the lowest id.
pub fn winner<'a, I>(nodes: I, pattern: &[f64], epsilon: f64) -> Result<(NodeId, MatchResult)>
where
    I: IntoIterator<Item = &'a Node>,
{
    let mut best: Option<(NodeId, MatchResult)> = None;
    for node in nodes {
        let floor = match &best {
            None => Floor::NONE,
            Some((id, b)) => Floor {
                value: b.activation,
                ties_win: node.id < *id,
            },
        };
        if let Some(m) = best_alignment_above(node, pattern, epsilon, floor) {
            best = Some((node.id, m));
        }
    }
    best.ok_or(Error::EmptyMap)
}

/// Whether some node reaches `threshold` (the clustering-phase acceptance
/// test), stopping at the first one that does.
pub fn any_reaches<'a, I>(nodes: I, pattern: &[f64], epsilon: f64, threshold: f64) -> bool
where
    I: IntoIterator<Item = &'a Node>,
{
    let floor = Floor {
        value: threshold,
        ties_win: true,
    };
    nodes
        .into_iter()
        .any(|node| best_alignment_above(node, pattern, epsilon, floor).is_some())
}

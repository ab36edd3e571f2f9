//! Clustering phase: each pattern goes to its single most active node, or is
//! rejected when that activation is below the threshold.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::Result;
use crate::model::{Comparison, NodeId};
use crate::organize::MapState;
use crate::persist::fmt_f64;

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterAssignment {
    pub pattern_index: usize,
    /// `None` when the pattern was rejected.
    pub node_id: Option<NodeId>,
    /// Winner activation, reported for rejected patterns too.
    pub activation: f64,
    pub offset: usize,
    pub mode: Comparison,
}

impl ClusterAssignment {
    pub fn is_assigned(&self) -> bool {
        self.node_id.is_some()
    }
}

/// A learned prototype.
#[derive(Debug, Clone, PartialEq)]
pub struct Motif {
    pub node_id: NodeId,
    pub prototype: Vec<f64>,
    pub relevance: Vec<f64>,
    pub support: u64,
}

pub fn assign(map: &MapState, pattern: &[f64]) -> Result<ClusterAssignment> {
    assign_indexed(map, 0, pattern)
}

fn assign_indexed(map: &MapState, index: usize, pattern: &[f64]) -> Result<ClusterAssignment> {
    let (id, m) = map.best_match(pattern)?;
    Ok(ClusterAssignment {
        pattern_index: index,
        node_id: (m.activation >= map.params().a_t).then_some(id),
        activation: m.activation,
        offset: m.offset,
        mode: m.mode,
    })
}

/// Assigns every pattern, in order. Runs in parallel; the map is only read.
pub fn cluster_batch<P>(map: &MapState, patterns: &[P]) -> Result<Vec<ClusterAssignment>>
where
    P: AsRef<[f64]> + Sync,
{
    patterns
        .par_iter()
        .enumerate()
        .map(|(i, p)| assign_indexed(map, i, p.as_ref()))
        .collect()
}

/// One motif per node, most supported first (ties by id).
pub fn extract_motifs(map: &MapState) -> Vec<Motif> {
    let mut motifs: Vec<Motif> = map
        .nodes()
        .iter()
        .map(|n| Motif {
            node_id: n.id,
            prototype: n.center.clone(),
            relevance: n.relevance.clone(),
            support: n.wins,
        })
        .collect();
    motifs.sort_by(|a, b| b.support.cmp(&a.support).then(a.node_id.cmp(&b.node_id)));
    motifs
}

/// Tab-separated assignment table with a header row.
pub fn assignments_to_tsv(assignments: &[ClusterAssignment]) -> String {
    let mut out = String::from("index\tnode\tactivation\toffset\tmode\n");
    for a in assignments {
        let node = a.node_id.map_or_else(|| "-".to_string(), |id| id.to_string());
        let _ = writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}",
            a.pattern_index,
            node,
            fmt_f64(a.activation),
            a.offset,
            a.mode
        );
    }
    out
}

/// Motifs in the node block layout of the model format (prototype line then
/// relevance line; support in place of wins).
pub fn motifs_to_text(motifs: &[Motif]) -> String {
    let mut out = String::from("VILMAP-MOTIFS 1\n");
    for m in motifs {
        let _ = writeln!(out, "node {} {} {}", m.node_id, m.prototype.len(), m.support);
        for values in [&m.prototype, &m.relevance] {
            let line: Vec<String> = values.iter().map(|v| fmt_f64(*v)).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
    }
    out
}

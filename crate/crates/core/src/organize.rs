//! Online self-organization: node insertion, dimension growth, winner and
//! neighbor adaptation, and connection maintenance.
//!
//! Training is a single ordered pass. There is no convergence phase and no
//! node removal unless [`Pruning`] is switched on explicitly.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::model::{any_reaches, best_alignment, winner, MatchResult, Node, NodeId, Params};

/// Symmetric adjacency over node ids, one bit row per id.
#[derive(Debug, Clone, Default)]
pub struct Connections {
    rows: Vec<FixedBitSet>,
}

impl Connections {
    fn row_mut(&mut self, id: NodeId) -> &mut FixedBitSet {
        if self.rows.len() <= id {
            self.rows.resize_with(id + 1, FixedBitSet::new);
        }
        &mut self.rows[id]
    }

    pub fn connect(&mut self, a: NodeId, b: NodeId) {
        if a == b {
            return;
        }
        for (from, to) in [(a, b), (b, a)] {
            let row = self.row_mut(from);
            row.grow(to + 1);
            row.insert(to);
        }
    }

    pub fn disconnect(&mut self, a: NodeId, b: NodeId) {
        for (from, to) in [(a, b), (b, a)] {
            if let Some(row) = self.rows.get_mut(from) {
                if to < row.len() {
                    row.set(to, false);
                }
            }
        }
    }

    pub fn contains(&self, a: NodeId, b: NodeId) -> bool {
        self.rows.get(a).is_some_and(|row| row.contains(b))
    }

    pub fn neighbors(&self, id: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.rows.get(id).into_iter().flat_map(|row| row.ones())
    }

    pub fn degree(&self, id: NodeId) -> usize {
        self.rows.get(id).map_or(0, |row| row.count_ones(..))
    }

    /// Drops every edge touching `id`.
    pub fn isolate(&mut self, id: NodeId) {
        let others: Vec<NodeId> = self.neighbors(id).collect();
        for other in others {
            self.disconnect(id, other);
        }
    }

    /// Each undirected edge once, as `(low, high)`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(a, row)| row.ones().filter(move |&b| b > a).map(move |b| (a, b)))
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }
}

/// Equal when the edge sets are equal, whatever the row capacities.
impl PartialEq for Connections {
    fn eq(&self, other: &Self) -> bool {
        self.edges().eq(other.edges())
    }
}

impl Eq for Connections {}

/// Periodic removal of nodes that win too small a share of the stream.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pruning {
    /// Run every this many presented patterns.
    pub interval: u64,
    /// Nodes with `wins / patterns_seen` below this are removed.
    pub min_share: f64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct TrainOptions {
    /// Skip patterns that fail the length bounds instead of aborting.
    pub skip_invalid: bool,
    pub pruning: Option<Pruning>,
}

/// What a single training step did.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepOutcome {
    /// A new node was created at the pattern.
    Inserted(NodeId),
    /// The winner (and its neighbors) moved toward the pattern.
    Adapted {
        winner: NodeId,
        activation: f64,
        grew: bool,
    },
    /// Below threshold with the map full: nothing changed.
    Dropped { winner: NodeId, activation: f64 },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TrainSummary {
    pub inserted: usize,
    pub adapted: usize,
    pub grown: usize,
    pub dropped: usize,
    pub skipped: usize,
    pub pruned: usize,
}

impl TrainSummary {
    fn record(&mut self, outcome: &StepOutcome) {
        match outcome {
            StepOutcome::Inserted(_) => self.inserted += 1,
            StepOutcome::Adapted { grew, .. } => {
                self.adapted += 1;
                if *grew {
                    self.grown += 1;
                }
            }
            StepOutcome::Dropped { .. } => self.dropped += 1,
        }
    }
}

/// The trained map: nodes ordered by id, their connections, and the
/// hyperparameters that govern them.
#[derive(Debug, Clone, PartialEq)]
pub struct MapState {
    nodes: Vec<Node>,
    connections: Connections,
    params: Params,
    next_id: NodeId,
    patterns_seen: u64,
}

/// Creates a map holding one node centered on `first`.
pub fn init_map(first: &[f64], params: Params) -> Result<MapState> {
    let mut map = MapState::new(params)?;
    params.check_length(first.len())?;
    map.insert_node(first);
    map.patterns_seen = 1;
    Ok(map)
}

impl MapState {
    /// An empty map; the first trained pattern becomes its first node.
    pub fn new(params: Params) -> Result<Self> {
        params.validate()?;
        Ok(MapState {
            nodes: Vec::new(),
            connections: Connections::default(),
            params,
            next_id: 0,
            patterns_seen: 0,
        })
    }

    /// Reassembles a map from stored parts, checking every invariant.
    pub fn from_parts(
        params: Params,
        mut nodes: Vec<Node>,
        edges: impl IntoIterator<Item = (NodeId, NodeId)>,
        next_id: Option<NodeId>,
        patterns_seen: u64,
    ) -> Result<Self> {
        params.validate()?;
        nodes.sort_by_key(|n| n.id);
        if nodes.windows(2).any(|w| w[0].id == w[1].id) {
            return Err(Error::InvalidArgument("duplicate node id".into()));
        }
        if nodes.len() > params.n_max {
            return Err(Error::InvalidArgument(format!(
                "{} nodes exceed n_max={}",
                nodes.len(),
                params.n_max
            )));
        }
        for node in &nodes {
            node.check_invariants()?;
            params.check_length(node.len())?;
        }
        let min_next = nodes.last().map_or(0, |n| n.id + 1);
        let next_id = next_id.unwrap_or(min_next);
        if next_id < min_next {
            return Err(Error::InvalidArgument(format!(
                "next_id {next_id} does not exceed the largest node id"
            )));
        }
        let mut map = MapState {
            nodes,
            connections: Connections::default(),
            params,
            next_id,
            patterns_seen,
        };
        for (a, b) in edges {
            if a == b || map.position(a).is_none() || map.position(b).is_none() {
                return Err(Error::InvalidArgument(format!("invalid edge {a}-{b}")));
            }
            map.connections.connect(a, b);
        }
        Ok(map)
    }

    pub fn params(&self) -> &Params {
        &self.params
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn connections(&self) -> &Connections {
        &self.connections
    }

    pub fn next_id(&self) -> NodeId {
        self.next_id
    }

    pub fn patterns_seen(&self) -> u64 {
        self.patterns_seen
    }

    fn position(&self, id: NodeId) -> Option<usize> {
        self.nodes.binary_search_by_key(&id, |n| n.id).ok()
    }

    pub fn node(&self, id: NodeId) -> Option<&Node> {
        self.position(id).map(|i| &self.nodes[i])
    }

    /// Winner of the competition for `pattern`, without touching the map.
    pub fn best_match(&self, pattern: &[f64]) -> Result<(NodeId, MatchResult)> {
        winner(&self.nodes, pattern, self.params.epsilon)
    }

    /// Whether the clustering phase would assign `pattern` to some node,
    /// without searching for the winner.
    pub fn accepts(&self, pattern: &[f64]) -> bool {
        any_reaches(&self.nodes, pattern, self.params.epsilon, self.params.a_t)
    }

    /// Checks every structural invariant of the map.
    pub fn check_invariants(&self) -> Result<()> {
        if self.nodes.len() > self.params.n_max {
            return Err(Error::InvalidArgument("node count exceeds n_max".into()));
        }
        for node in &self.nodes {
            node.check_invariants()?;
            self.params.check_length(node.len())?;
        }
        for (a, b) in self.connections.edges() {
            if self.position(a).is_none() || self.position(b).is_none() {
                return Err(Error::InvalidArgument(format!("dangling edge {a}-{b}")));
            }
            if !self.connections.contains(b, a) {
                return Err(Error::InvalidArgument(format!("asymmetric edge {a}-{b}")));
            }
        }
        Ok(())
    }

    fn insert_node(&mut self, values: &[f64]) -> NodeId {
        let id = self.next_id;
        self.next_id += 1;
        for other in &self.nodes {
            self.connections.connect(id, other.id);
        }
        self.nodes.push(Node::new(id, values));
        id
    }

    /// Presents one pattern to the map.
    ///
    /// Below the activation threshold a new node is created at the pattern
    /// (or the pattern is dropped when the map is full). Otherwise the winner
    /// grows to the pattern's length if it is shorter, then the winner and its
    /// connected neighbors are adapted (distance averages, relevances, centers,
    /// in that order), and the winner's connections are recomputed.
    pub fn train_step(&mut self, pattern: &[f64]) -> Result<StepOutcome> {
        self.params.check_length(pattern.len())?;
        self.patterns_seen += 1;
        if self.nodes.is_empty() {
            return Ok(StepOutcome::Inserted(self.insert_node(pattern)));
        }

        let (winner_id, matched) = self.best_match(pattern)?;
        if matched.activation < self.params.a_t {
            if self.nodes.len() < self.params.n_max {
                return Ok(StepOutcome::Inserted(self.insert_node(pattern)));
            }
            return Ok(StepOutcome::Dropped {
                winner: winner_id,
                activation: matched.activation,
            });
        }

        let pos = self.position(winner_id).ok_or(Error::UnknownNode(winner_id))?;
        let grew = self.nodes[pos].len() < pattern.len();
        let matched = if grew {
            grow_node(&mut self.nodes[pos], pattern)?;
            best_alignment(&self.nodes[pos], pattern, self.params.epsilon)
        } else {
            matched
        };
        self.nodes[pos].wins += 1;
        self.update_winner_and_neighbors(winner_id, pattern, &matched)?;
        self.recompute_connections(winner_id)?;
        Ok(StepOutcome::Adapted {
            winner: winner_id,
            activation: matched.activation,
            grew,
        })
    }

    /// Moves the winner (rate `e_b`) and every connected neighbor (rate
    /// `e_n`) toward the pattern over their aligned overlap. Neighbors are
    /// aligned on their own best offset and are never grown.
    pub fn update_winner_and_neighbors(
        &mut self,
        winner_id: NodeId,
        pattern: &[f64],
        matched: &MatchResult,
    ) -> Result<()> {
        let p = self.params;
        let pos = self.position(winner_id).ok_or(Error::UnknownNode(winner_id))?;
        adapt_node(&mut self.nodes[pos], pattern, matched, p.e_b, p.beta, p.eps_ds);

        let neighbors: Vec<NodeId> = self.connections.neighbors(winner_id).collect();
        for id in neighbors {
            let pos = self.position(id).ok_or(Error::UnknownNode(id))?;
            let node = &mut self.nodes[pos];
            let m = best_alignment(node, pattern, p.epsilon);
            adapt_node(node, pattern, &m, p.e_n, p.beta, p.eps_ds);
        }
        Ok(())
    }

    /// Reconnects `id` to exactly the nodes whose relevance similarity to it
    /// exceeds `minwd`.
    pub fn recompute_connections(&mut self, id: NodeId) -> Result<()> {
        let pos = self.position(id).ok_or(Error::UnknownNode(id))?;
        let minwd = self.params.minwd;
        for (i, other) in self.nodes.iter().enumerate() {
            if i == pos {
                continue;
            }
            if relevance_similarity(&self.nodes[pos].relevance, &other.relevance) > minwd {
                self.connections.connect(id, other.id);
            } else {
                self.connections.disconnect(id, other.id);
            }
        }
        Ok(())
    }

    /// Folds [`MapState::train_step`] over `patterns` in order.
    pub fn train_stream<'a, I>(&mut self, patterns: I, options: &TrainOptions) -> Result<TrainSummary>
    where
        I: IntoIterator<Item = &'a [f64]>,
    {
        let mut summary = TrainSummary::default();
        for pattern in patterns {
            match self.train_step(pattern) {
                Ok(outcome) => summary.record(&outcome),
                Err(Error::LengthBounds { .. }) if options.skip_invalid => {
                    summary.skipped += 1;
                    continue;
                }
                Err(e) => return Err(e),
            }
            if let Some(pruning) = options.pruning {
                if pruning.interval > 0 && self.patterns_seen.is_multiple_of(pruning.interval) {
                    summary.pruned += self.prune(pruning.min_share);
                }
            }
        }
        Ok(summary)
    }

    /// Removes nodes whose lifetime win share is below `min_share`, always
    /// keeping at least one node. Returns how many were removed.
    pub fn prune(&mut self, min_share: f64) -> usize {
        if self.patterns_seen == 0 {
            return 0;
        }
        let seen = self.patterns_seen as f64;
        let doomed: Vec<NodeId> = self
            .nodes
            .iter()
            .filter(|n| (n.wins as f64) / seen < min_share)
            .map(|n| n.id)
            .collect();
        let doomed = if doomed.len() == self.nodes.len() {
            // keep the strongest node
            let keep = self
                .nodes
                .iter()
                .max_by(|a, b| a.wins.cmp(&b.wins).then(b.id.cmp(&a.id)))
                .map(|n| n.id);
            doomed.into_iter().filter(|&id| Some(id) != keep).collect()
        } else {
            doomed
        };
        for &id in &doomed {
            self.connections.isolate(id);
        }
        self.nodes.retain(|n| !doomed.contains(&n.id));
        doomed.len()
    }
}

/// Extends a node to the pattern's length. New center entries copy the
/// pattern, new distance averages start at 0.0 and new relevances at 0.5.
pub fn grow_node(node: &mut Node, pattern: &[f64]) -> Result<()> {
    let old = node.len();
    if old >= pattern.len() {
        return Err(Error::InvalidArgument(format!(
            "node {} (len {old}) is not shorter than the pattern (len {})",
            node.id,
            pattern.len()
        )));
    }
    node.center.extend_from_slice(&pattern[old..]);
    node.distance_avg.resize(pattern.len(), 0.0);
    node.relevance.resize(pattern.len(), 0.5);
    Ok(())
}

fn adapt_node(node: &mut Node, pattern: &[f64], m: &MatchResult, rate: f64, beta: f64, eps_ds: f64) {
    let range = m.node_range();
    let x = &pattern[..m.overlap_len];
    let eb = rate * beta;
    for (d, (&xi, &ci)) in node.distance_avg[range.clone()]
        .iter_mut()
        .zip(x.iter().zip(&node.center[range.clone()]))
    {
        *d = (1.0 - eb) * *d + eb * (xi - ci).abs();
    }
    relevances_from(
        &node.distance_avg[range.clone()],
        eps_ds,
        &mut node.relevance[range.clone()],
    );
    for (c, &xi) in node.center[range].iter_mut().zip(x) {
        *c += rate * (xi - *c);
    }
}

/// Recomputes a node's whole relevance vector from its distance averages.
pub fn update_relevances(node: &mut Node, eps_ds: f64) {
    relevances_from(&node.distance_avg, eps_ds, &mut node.relevance);
}

/// Logistic relevance: dimensions whose distance average sits below the mean
/// get relevance near 1, those above it near 0. A flat distance profile
/// yields all ones.
fn relevances_from(delta: &[f64], eps_ds: f64, out: &mut [f64]) {
    if delta.is_empty() {
        return;
    }
    let (min, max, sum) = delta
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY, 0.0), |(lo, hi, s), &d| {
            (lo.min(d), hi.max(d), s + d)
        });
    if max == min {
        out.fill(1.0);
        return;
    }
    let mean = sum / delta.len() as f64;
    let scale = eps_ds * (max - min);
    for (w, &d) in out.iter_mut().zip(delta) {
        *w = 1.0 / (1.0 + ((d - mean) / scale).exp());
    }
}

/// `1 - mean |w_a - w_b|` over the common prefix of two relevance vectors.
pub fn relevance_similarity(a: &[f64], b: &[f64]) -> f64 {
    let m = a.len().min(b.len());
    if m == 0 {
        return 0.0;
    }
    let diff: f64 = a[..m].iter().zip(&b[..m]).map(|(x, y)| (x - y).abs()).sum();
    1.0 - diff / m as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Comparison;

    fn params() -> Params {
        Params {
            a_t: 0.9,
            e_b: 0.1,
            e_n: 0.01,
            beta: 0.5,
            eps_ds: 0.1,
            n_max: 10,
            d_min: 1,
            d_max: 10,
            minwd: 0.5,
            epsilon: 1e-9,
        }
    }

    #[test]
    fn init_map_single_node() {
        let map = init_map(&[0.2, 0.8], params()).unwrap();
        assert_eq!(map.len(), 1);
        let n = &map.nodes()[0];
        assert_eq!(n.center, vec![0.2, 0.8]);
        assert_eq!(n.distance_avg, vec![0.0, 0.0]);
        assert_eq!(n.relevance, vec![1.0, 1.0]);
        assert_eq!(map.patterns_seen(), 1);
    }

    #[test]
    fn init_map_length_bounds() {
        let p = Params {
            d_min: 2,
            d_max: 4,
            ..params()
        };
        assert!(init_map(&[0.1, 0.2], p).is_ok());
        assert!(matches!(
            init_map(&[0.1; 5], p),
            Err(Error::LengthBounds { len: 5, .. })
        ));
        assert!(init_map(&[0.1], p).is_err());
    }

    #[test]
    fn exact_pattern_is_a_fixed_point() {
        let mut map = init_map(&[0.3, 0.6, 0.9], params()).unwrap();
        let out = map.train_step(&[0.3, 0.6, 0.9]).unwrap();
        assert!(matches!(
            out,
            StepOutcome::Adapted {
                winner: 0,
                grew: false,
                ..
            }
        ));
        assert_eq!(map.nodes()[0].center, vec![0.3, 0.6, 0.9]);
        assert_eq!(map.nodes()[0].wins, 1);
    }

    #[test]
    fn distant_pattern_inserts_node() {
        let mut map = init_map(&[0.0, 0.0], params()).unwrap();
        let out = map.train_step(&[1.0, 1.0]).unwrap();
        assert_eq!(out, StepOutcome::Inserted(1));
        assert_eq!(map.len(), 2);
        assert_eq!(map.node(1).unwrap().center, vec![1.0, 1.0]);
        // new nodes start connected to everything
        assert!(map.connections().contains(0, 1));
    }

    #[test]
    fn full_map_drops_pattern() {
        let p = Params { n_max: 1, ..params() };
        let mut map = init_map(&[0.0, 0.0], p).unwrap();
        let before = map.clone();
        let out = map.train_step(&[1.0, 1.0]).unwrap();
        assert!(matches!(out, StepOutcome::Dropped { winner: 0, .. }));
        assert_eq!(map.nodes(), before.nodes());
        assert_eq!(map.patterns_seen(), 2);
    }

    #[test]
    fn winner_update_rule() {
        // c=[0,0], x=[1,1]: activation 2/(2+sqrt 2) ~ 0.586, so use a low threshold
        let p = Params {
            a_t: 0.5,
            e_b: 0.1,
            ..params()
        };
        let mut map = init_map(&[0.0, 0.0], p).unwrap();
        map.train_step(&[1.0, 1.0]).unwrap();
        let n = &map.nodes()[0];
        for c in &n.center {
            assert!((c - 0.1).abs() < 1e-15);
        }
        // delta = e*beta*|x-c| with c taken before the move
        for d in &n.distance_avg {
            assert!((d - 0.05).abs() < 1e-15);
        }
        assert_eq!(n.relevance, vec![1.0, 1.0]);
    }

    #[test]
    fn full_rate_update() {
        let mut node = Node::new(0, &[0.2, 0.9, 0.4]);
        let m = MatchResult {
            activation: 1.0,
            offset: 0,
            mode: Comparison::Regular,
            overlap_len: 3,
        };
        adapt_node(&mut node, &[0.7, 0.1, 0.4], &m, 1.0, 1.0, 0.1);
        for (c, e) in node.center.iter().zip([0.7, 0.1, 0.4]) {
            assert!((c - e).abs() < 1e-15);
        }
        let expect = [0.5, 0.8, 0.0];
        for (d, e) in node.distance_avg.iter().zip(expect) {
            assert!((d - e).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_rate_update_leaves_node() {
        let mut node = Node::new(0, &[0.2, 0.9]);
        node.distance_avg = vec![0.1, 0.3];
        node.relevance = vec![0.9, 0.2];
        let before = node.clone();
        let m = MatchResult {
            activation: 1.0,
            offset: 0,
            mode: Comparison::Regular,
            overlap_len: 2,
        };
        adapt_node(&mut node, &[1.0, 0.0], &m, 0.0, 0.5, 0.1);
        assert_eq!(node.center, before.center);
        assert_eq!(node.distance_avg, before.distance_avg);
    }

    #[test]
    fn sliding_update_touches_only_overlap() {
        let mut node = Node::new(0, &[0.1, 0.2, 0.3, 0.4, 0.5]);
        node.distance_avg = vec![0.3, 0.1, 0.2, 0.0, 0.4];
        node.relevance = vec![0.25, 0.9, 0.5, 1.0, 0.1];
        let before = node.clone();
        let m = MatchResult {
            activation: 0.95,
            offset: 1,
            mode: Comparison::Sliding,
            overlap_len: 4,
        };
        adapt_node(&mut node, &[0.9, 0.9, 0.9, 0.9], &m, 0.5, 0.5, 0.1);
        assert_eq!(node.center[0].to_bits(), before.center[0].to_bits());
        assert_eq!(node.relevance[0].to_bits(), before.relevance[0].to_bits());
        assert_eq!(node.distance_avg[0].to_bits(), before.distance_avg[0].to_bits());
        for i in 1..5 {
            assert_ne!(node.center[i], before.center[i]);
        }
    }

    #[test]
    fn grow_node_fills_tail() {
        let mut node = Node::new(3, &[0.1, 0.2, 0.3]);
        node.distance_avg = vec![0.05, 0.1, 0.2];
        node.relevance = vec![0.9, 0.7, 0.3];
        let before = node.clone();
        grow_node(&mut node, &[0.1, 0.2, 0.3, 0.4, 0.5]).unwrap();
        assert_eq!(node.len(), 5);
        assert_eq!(&node.center[3..], &[0.4, 0.5]);
        assert_eq!(&node.distance_avg[3..], &[0.0, 0.0]);
        assert_eq!(&node.relevance[3..], &[0.5, 0.5]);
        assert_eq!(&node.center[..3], &before.center[..]);
        assert_eq!(&node.relevance[..3], &before.relevance[..]);
        assert_eq!(&node.distance_avg[..3], &before.distance_avg[..]);
        assert!(grow_node(&mut node, &[0.0; 5]).is_err());
        assert!(grow_node(&mut node, &[0.0; 2]).is_err());
    }

    #[test]
    fn growth_raises_activation() {
        // uniform relevances (0.8) over a 3-long node, pattern of 5 whose
        // prefix differs from the center by 0.1 in one place
        let mut node = Node::new(0, &[0.1, 0.2, 0.3]);
        node.relevance = vec![0.8; 3];
        let pattern = [0.2, 0.2, 0.3, 0.4, 0.5];
        let before = best_alignment(&node, &pattern, 1e-9);
        assert_eq!(before.mode, Comparison::Truncated);
        grow_node(&mut node, &pattern).unwrap();
        let after = best_alignment(&node, &pattern, 1e-9);
        assert_eq!(after.mode, Comparison::Regular);
        // oracle: before = 2.4/(2.4 + sqrt(0.8*0.01)), after = 3.4/(3.4 + same)
        let d = (0.8f64 * 0.01).sqrt();
        assert!((before.activation - 2.4 / (2.4 + d + 1e-9)).abs() < 1e-12);
        assert!((after.activation - 3.4 / (3.4 + d + 1e-9)).abs() < 1e-12);
        assert!(after.activation > before.activation);
    }

    #[test]
    fn truncated_winner_grows_on_adaptation() {
        let mut map = init_map(&[0.5, 0.5], params()).unwrap();
        let out = map.train_step(&[0.5, 0.5, 0.1, 0.9]).unwrap();
        assert!(matches!(out, StepOutcome::Adapted { grew: true, .. }));
        let n = &map.nodes()[0];
        assert_eq!(n.len(), 4);
        assert_eq!(&n.center[2..], &[0.1, 0.9]);
    }

    #[test]
    fn truncated_loser_is_not_grown() {
        let mut map = init_map(&[0.0, 0.0], params()).unwrap();
        let out = map.train_step(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(out, StepOutcome::Inserted(1));
        assert_eq!(map.node(0).unwrap().len(), 2);
    }

    #[test]
    fn relevance_examples() {
        let mut node = Node::new(0, &[0.0, 0.0, 0.0]);
        update_relevances(&mut node, 0.1);
        assert_eq!(node.relevance, vec![1.0; 3]);
        node.distance_avg = vec![0.4; 3];
        update_relevances(&mut node, 0.1);
        assert_eq!(node.relevance, vec![1.0; 3]);

        let mut node = Node::new(0, &[0.0, 0.0]);
        node.distance_avg = vec![0.0, 1.0];
        update_relevances(&mut node, 0.1);
        // independent evaluation of 1/(1+exp(-+5))
        assert!((node.relevance[0] - 0.993_307_149_075_715_2).abs() < 1e-12);
        assert!((node.relevance[1] - 0.006_692_850_924_284_856).abs() < 1e-12);
    }

    #[test]
    fn relevance_monotone_in_distance() {
        let mut node = Node::new(0, &[0.0; 5]);
        node.distance_avg = vec![0.3, 0.1, 0.5, 0.2, 0.05];
        update_relevances(&mut node, 0.07);
        for i in 0..5 {
            for j in 0..5 {
                if node.distance_avg[i] > node.distance_avg[j] {
                    assert!(node.relevance[i] < node.relevance[j]);
                }
            }
            assert!(node.relevance[i] > 0.0 && node.relevance[i] <= 1.0);
        }
    }

    #[test]
    fn similarity_examples() {
        assert_eq!(relevance_similarity(&[0.3, 0.7], &[0.3, 0.7]), 1.0);
        assert_eq!(relevance_similarity(&[1.0, 1.0], &[0.0, 0.0]), 0.0);
        assert!((relevance_similarity(&[1.0, 0.5], &[0.5, 0.5]) - 0.75).abs() < 1e-15);
        // common prefix only
        assert_eq!(relevance_similarity(&[1.0, 1.0, 0.0], &[1.0, 1.0]), 1.0);
    }

    fn two_node_map(w0: Vec<f64>, w1: Vec<f64>, minwd: f64) -> MapState {
        let p = Params { minwd, ..params() };
        let mut a = Node::new(0, &[0.0, 0.0]);
        a.relevance = w0;
        let mut b = Node::new(1, &[1.0, 1.0]);
        b.relevance = w1;
        MapState::from_parts(p, vec![a, b], [], None, 0).unwrap()
    }

    #[test]
    fn connection_rule() {
        let mut map = two_node_map(vec![0.4, 0.6], vec![0.4, 0.6], 0.99);
        map.recompute_connections(0).unwrap();
        assert!(map.connections().contains(0, 1));

        let mut map = two_node_map(vec![1.0, 1.0], vec![0.0, 0.0], 0.001);
        map.recompute_connections(0).unwrap();
        assert!(!map.connections().contains(0, 1));

        for (minwd, connected) in [(0.74, true), (0.75, false), (0.8, false)] {
            let mut map = two_node_map(vec![1.0, 0.5], vec![0.5, 0.5], minwd);
            map.recompute_connections(1).unwrap();
            assert_eq!(map.connections().contains(0, 1), connected, "minwd={minwd}");
            assert_eq!(map.connections().contains(1, 0), connected);
        }
    }

    #[test]
    fn stream_of_identical_patterns_keeps_one_node() {
        let mut map = MapState::new(params()).unwrap();
        let x = [0.4, 0.5, 0.6];
        let s = map
            .train_stream(std::iter::repeat_n(&x[..], 50), &TrainOptions::default())
            .unwrap();
        assert_eq!(map.len(), 1);
        assert_eq!((s.inserted, s.adapted), (1, 49));
    }

    #[test]
    fn empty_stream_is_identity() {
        let mut map = init_map(&[0.1, 0.2], params()).unwrap();
        let before = map.clone();
        let s = map.train_stream(std::iter::empty(), &TrainOptions::default()).unwrap();
        assert_eq!(s, TrainSummary::default());
        assert_eq!(map, before);
    }

    #[test]
    fn skip_invalid_mode() {
        let mut map = MapState::new(Params { d_max: 3, ..params() }).unwrap();
        let long = [0.0; 4];
        let ok = [0.1, 0.2];
        let stream: Vec<&[f64]> = vec![&ok, &long, &ok];
        assert!(map
            .clone()
            .train_stream(stream.clone(), &TrainOptions::default())
            .is_err());
        let s = map
            .train_stream(
                stream,
                &TrainOptions {
                    skip_invalid: true,
                    ..Default::default()
                },
            )
            .unwrap();
        assert_eq!(s.skipped, 1);
    }

    #[test]
    fn pruning_removes_rare_nodes() {
        let mut map = MapState::new(Params { a_t: 0.99, ..params() }).unwrap();
        let common = [0.5, 0.5];
        let rare = [0.0, 1.0];
        let mut stream: Vec<&[f64]> = vec![&common; 19];
        stream.insert(5, &rare);
        let s = map
            .train_stream(
                stream,
                &TrainOptions {
                    skip_invalid: false,
                    pruning: Some(Pruning {
                        interval: 20,
                        min_share: 0.1,
                    }),
                },
            )
            .unwrap();
        assert_eq!(s.pruned, 1);
        assert_eq!(map.len(), 1);
        assert_eq!(map.nodes()[0].center, vec![0.5, 0.5]);
        assert_eq!(map.connections().edge_count(), 0);
        map.check_invariants().unwrap();
    }

    #[test]
    fn from_parts_rejects_bad_edges() {
        let p = params();
        let nodes = vec![Node::new(0, &[0.1]), Node::new(2, &[0.3])];
        assert!(MapState::from_parts(p, nodes.clone(), [(0, 1)], None, 0).is_err());
        assert!(MapState::from_parts(p, nodes.clone(), [(2, 2)], None, 0).is_err());
        let map = MapState::from_parts(p, nodes, [(0, 2)], None, 5).unwrap();
        assert_eq!(map.next_id(), 3);
        assert_eq!(map.connections().edges().collect::<Vec<_>>(), vec![(0, 2)]);
    }
}

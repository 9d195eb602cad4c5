//! Nondeterministic constraint logic: AND/OR constraint graphs, legal
//! orientations and the single-edge-flip move relation.
//!
//! Every node has weight 2. Red edges weigh 1 and blue edges weigh 2. An
//! orientation is legal when each node receives incoming weight at least 2.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::statespace::{encoding, ReconfigurationSpace};

pub const NODE_WEIGHT: u32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeKind {
    And,
    Or,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeColor {
    Red,
    Blue,
}

impl EdgeColor {
    pub fn weight(self) -> u32 {
        match self {
            EdgeColor::Red => 1,
            EdgeColor::Blue => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Node {
    pub id: String,
    pub kind: NodeKind,
}

/// An edge between node indices `u` and `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub u: usize,
    pub v: usize,
    pub color: EdgeColor,
}

impl Edge {
    pub fn other(&self, node: usize) -> usize {
        if node == self.u {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NclError {
    #[error("duplicate node id `{0}`")]
    DuplicateNodeId(String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdgeId(String),
    #[error("edge `{edge}` references unknown node `{node}`")]
    UnknownEndpoint { edge: String, node: String },
    #[error("orientation does not match the edge set: {0}")]
    EdgeSetMismatch(String),
    #[error("start orientation is not legal")]
    IllegalStart,
}

/// A constraint graph. Parallel edges are allowed; self-loops are accepted
/// by the constructor but reported by [`ConstraintGraph::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintGraph {
    nodes: Vec<Node>,
    edges: Vec<Edge>,
    incident: Vec<Vec<usize>>,
}

impl ConstraintGraph {
    pub fn new(nodes: Vec<Node>, edges: Vec<Edge>) -> Result<Self, NclError> {
        let mut node_ids = HashMap::new();
        for (i, n) in nodes.iter().enumerate() {
            if node_ids.insert(n.id.as_str(), i).is_some() {
                return Err(NclError::DuplicateNodeId(n.id.clone()));
            }
        }
        let mut edge_ids = HashMap::new();
        let mut incident = vec![Vec::new(); nodes.len()];
        for (i, e) in edges.iter().enumerate() {
            if edge_ids.insert(e.id.as_str(), i).is_some() {
                return Err(NclError::DuplicateEdgeId(e.id.clone()));
            }
            for end in [e.u, e.v] {
                if end >= nodes.len() {
                    return Err(NclError::UnknownEndpoint { edge: e.id.clone(), node: end.to_string() });
                }
            }
            incident[e.u].push(i);
            if e.v != e.u {
                incident[e.v].push(i);
            }
        }
        Ok(ConstraintGraph { nodes, edges, incident })
    }

    /// Builds a graph from string ids: `edges` are `(id, u, v, color)`.
    pub fn from_ids(nodes: &[(&str, NodeKind)], edges: &[(&str, &str, &str, EdgeColor)]) -> Result<Self, NclError> {
        let node_list: Vec<Node> = nodes.iter().map(|(id, kind)| Node { id: id.to_string(), kind: *kind }).collect();
        let lookup = |edge: &str, id: &str| {
            node_list
                .iter()
                .position(|n| n.id == id)
                .ok_or_else(|| NclError::UnknownEndpoint { edge: edge.to_string(), node: id.to_string() })
        };
        let mut edge_list = Vec::with_capacity(edges.len());
        for (id, u, v, color) in edges {
            edge_list.push(Edge { id: id.to_string(), u: lookup(id, u)?, v: lookup(id, v)?, color: *color });
        }
        ConstraintGraph::new(node_list, edge_list)
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Edge indices incident to `node`, in edge order.
    pub fn incident(&self, node: usize) -> &[usize] {
        &self.incident[node]
    }

    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.id == id)
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    /// The endpoint of `edge` with the lexicographically smaller node id.
    pub fn lower_endpoint(&self, edge: usize) -> usize {
        let e = &self.edges[edge];
        if self.nodes[e.u].id <= self.nodes[e.v].id {
            e.u
        } else {
            e.v
        }
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.u == e.v {
                violations.push(Violation::SelfLoop { edge: i });
            }
        }
        for (i, node) in self.nodes.iter().enumerate() {
            let blue = self.incident[i].iter().filter(|&&e| self.edges[e].color == EdgeColor::Blue).count();
            let red = self.incident[i].len() - blue;
            let ok = match node.kind {
                NodeKind::And => blue == 1 && red == 2,
                NodeKind::Or => blue == 3 && red == 0,
            };
            if !ok {
                violations.push(Violation::Degree { node: i, kind: node.kind, blue, red });
            }
        }
        ValidationReport { violations }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    SelfLoop { edge: usize },
    Degree { node: usize, kind: NodeKind, blue: usize, red: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    /// Node indices with a degree violation.
    pub fn violating_nodes(&self) -> Vec<usize> {
        self.violations
            .iter()
            .filter_map(|v| match v {
                Violation::Degree { node, .. } => Some(*node),
                Violation::SelfLoop { .. } => None,
            })
            .collect()
    }

    pub fn describe(&self, g: &ConstraintGraph) -> Vec<String> {
        self.violations
            .iter()
            .map(|v| match v {
                Violation::SelfLoop { edge } => format!("edge `{}` is a self-loop", g.edges[*edge].id),
                Violation::Degree { node, kind, blue, red } => {
                    format!("{:?} node `{}` has {blue} blue and {red} red incident edges", kind, g.nodes[*node].id)
                }
            })
            .collect()
    }
}

pub fn validate_constraint_graph(g: &ConstraintGraph) -> ValidationReport {
    g.validate()
}

/// The head (target node index) of every edge.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Orientation(Vec<usize>);

impl Orientation {
    pub fn new(g: &ConstraintGraph, heads: Vec<usize>) -> Result<Self, NclError> {
        let o = Orientation(heads);
        o.check(g)?;
        Ok(o)
    }

    /// Builds an orientation from `(edge id, head node id)` pairs.
    pub fn from_ids<'a>(
        g: &ConstraintGraph,
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self, NclError> {
        let mut heads = vec![usize::MAX; g.edges.len()];
        for (edge, head) in pairs {
            let e = g.edge_index(edge).ok_or_else(|| NclError::EdgeSetMismatch(format!("unknown edge `{edge}`")))?;
            let h = g.node_index(head).ok_or_else(|| NclError::EdgeSetMismatch(format!("unknown node `{head}`")))?;
            heads[e] = h;
        }
        Orientation::new(g, heads)
    }

    pub fn heads(&self) -> &[usize] {
        &self.0
    }

    pub fn head(&self, edge: usize) -> usize {
        self.0[edge]
    }

    pub fn flipped(&self, g: &ConstraintGraph, edge: usize) -> Orientation {
        let mut heads = self.0.clone();
        heads[edge] = g.edges[edge].other(heads[edge]);
        Orientation(heads)
    }

    fn check(&self, g: &ConstraintGraph) -> Result<(), NclError> {
        if self.0.len() != g.edges.len() {
            return Err(NclError::EdgeSetMismatch(format!("{} directions for {} edges", self.0.len(), g.edges.len())));
        }
        for (i, (&h, e)) in self.0.iter().zip(&g.edges).enumerate() {
            if h != e.u && h != e.v {
                return Err(NclError::EdgeSetMismatch(format!("edge `{}` has no head (index {i})", e.id)));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

pub fn incoming_weight(g: &ConstraintGraph, o: &Orientation, node: usize) -> u32 {
    g.incident[node].iter().filter(|&&e| o.0[e] == node).map(|&e| g.edges[e].color.weight()).sum()
}

fn legal_unchecked(g: &ConstraintGraph, o: &Orientation) -> bool {
    (0..g.nodes.len()).all(|n| incoming_weight(g, o, n) >= NODE_WEIGHT)
}

pub fn is_legal_orientation(g: &ConstraintGraph, o: &Orientation) -> Result<bool, NclError> {
    o.check(g)?;
    Ok(legal_unchecked(g, o))
}

/// Edges whose single reversal keeps a legal orientation legal.
pub fn legal_flips(g: &ConstraintGraph, o: &Orientation) -> Result<Vec<usize>, NclError> {
    if !is_legal_orientation(g, o)? {
        return Err(NclError::IllegalStart);
    }
    Ok((0..g.edges.len()).filter(|&e| flip_keeps_legal(g, o, e)).collect())
}

/// Only the edge's old head loses weight when it is reversed.
fn flip_keeps_legal(g: &ConstraintGraph, o: &Orientation, edge: usize) -> bool {
    let e = &g.edges[edge];
    if e.u == e.v {
        return true;
    }
    let old_head = o.0[edge];
    incoming_weight(g, o, old_head) - e.color.weight() >= NODE_WEIGHT
}

/// Configuration-to-configuration binding for the search engine.
pub struct C2cSpace<'a> {
    graph: &'a ConstraintGraph,
}

impl<'a> C2cSpace<'a> {
    pub fn new(graph: &'a ConstraintGraph) -> Self {
        C2cSpace { graph }
    }
}

impl ReconfigurationSpace for C2cSpace<'_> {
    type Config = Orientation;

    fn is_feasible(&self, o: &Orientation) -> bool {
        matches!(is_legal_orientation(self.graph, o), Ok(true))
    }

    fn neighbors(&self, o: &Orientation) -> Vec<Orientation> {
        match legal_flips(self.graph, o) {
            Ok(flips) => flips.into_iter().map(|e| o.flipped(self.graph, e)).collect(),
            Err(_) => Vec::new(),
        }
    }

    /// One byte per edge: 0 when the head is `u`, 1 when it is `v`.
    fn encode(&self, o: &Orientation) -> Vec<u8> {
        encoding::bits(o.0.iter().zip(&self.graph.edges).map(|(&h, e)| h != e.u || e.u == e.v))
    }

    fn is_move(&self, from: &Orientation, to: &Orientation) -> bool {
        if from.check(self.graph).is_err() || to.check(self.graph).is_err() {
            return false;
        }
        let diff: Vec<usize> = (0..from.0.len()).filter(|&e| from.0[e] != to.0[e]).collect();
        diff.len() == 1 && legal_unchecked(self.graph, from) && legal_unchecked(self.graph, to)
    }
}

/// Small graphs used throughout tests and fixtures.
pub mod samples {
    use super::*;

    /// Two OR nodes `A`, `B` joined by three parallel blue edges `e1..e3`.
    pub fn parallel_or_pair() -> ConstraintGraph {
        ConstraintGraph::from_ids(
            &[("A", NodeKind::Or), ("B", NodeKind::Or)],
            &[("e1", "A", "B", EdgeColor::Blue), ("e2", "A", "B", EdgeColor::Blue), ("e3", "A", "B", EdgeColor::Blue)],
        )
        .expect("well-formed sample")
    }

    /// Two AND nodes joined by one blue and two red parallel edges.
    pub fn parallel_and_pair() -> ConstraintGraph {
        ConstraintGraph::from_ids(
            &[("A", NodeKind::And), ("B", NodeKind::And)],
            &[("b", "A", "B", EdgeColor::Blue), ("r1", "A", "B", EdgeColor::Red), ("r2", "A", "B", EdgeColor::Red)],
        )
        .expect("well-formed sample")
    }

    /// AND nodes `a`, `b`, `c` in a red triangle, each with a blue edge to
    /// the OR node `d`.
    pub fn and_triangle_or_hub() -> ConstraintGraph {
        ConstraintGraph::from_ids(
            &[("a", NodeKind::And), ("b", NodeKind::And), ("c", NodeKind::And), ("d", NodeKind::Or)],
            &[
                ("ad", "a", "d", EdgeColor::Blue),
                ("bd", "b", "d", EdgeColor::Blue),
                ("cd", "c", "d", EdgeColor::Blue),
                ("ab", "a", "b", EdgeColor::Red),
                ("bc", "b", "c", EdgeColor::Red),
                ("ca", "c", "a", EdgeColor::Red),
            ],
        )
        .expect("well-formed sample")
    }
}

#[cfg(test)]
mod tests {
    use super::samples::*;
    use super::*;

    fn all_orientations(g: &ConstraintGraph) -> Vec<Orientation> {
        let m = g.edges().len();
        (0..1u32 << m)
            .map(|mask| {
                let heads = (0..m).map(|e| if mask >> e & 1 == 1 { g.edges()[e].v } else { g.edges()[e].u }).collect();
                Orientation(heads)
            })
            .collect()
    }

    #[test]
    fn validation_examples() {
        assert!(parallel_or_pair().validate().is_valid());
        assert!(and_triangle_or_hub().validate().is_valid());

        let two_blue = ConstraintGraph::from_ids(
            &[("A", NodeKind::And), ("B", NodeKind::Or)],
            &[("e1", "A", "B", EdgeColor::Blue), ("e2", "A", "B", EdgeColor::Blue), ("e3", "A", "B", EdgeColor::Red)],
        )
        .unwrap();
        let report = two_blue.validate();
        assert!(!report.is_valid());
        assert!(report.violating_nodes().contains(&0));

        let looped = ConstraintGraph::from_ids(&[("A", NodeKind::Or)], &[("e1", "A", "A", EdgeColor::Blue)]).unwrap();
        let report = looped.validate();
        assert!(report.violations.contains(&Violation::SelfLoop { edge: 0 }));
    }

    #[test]
    fn constructor_errors() {
        assert_eq!(
            ConstraintGraph::from_ids(&[("A", NodeKind::Or), ("A", NodeKind::Or)], &[]),
            Err(NclError::DuplicateNodeId("A".into()))
        );
        assert!(matches!(
            ConstraintGraph::from_ids(&[("A", NodeKind::Or)], &[("e", "A", "Z", EdgeColor::Red)]),
            Err(NclError::UnknownEndpoint { .. })
        ));
    }

    #[test]
    fn local_legality() {
        let g = and_triangle_or_hub();
        let a = g.node_index("a").unwrap();
        // both red edges incoming, blue outgoing
        let o =
            Orientation::from_ids(&g, [("ad", "d"), ("ab", "a"), ("ca", "a"), ("bd", "b"), ("cd", "c"), ("bc", "b")])
                .unwrap();
        assert_eq!(incoming_weight(&g, &o, a), 2);
        assert!(is_legal_orientation(&g, &o).unwrap());

        let or = parallel_or_pair();
        let all_out = Orientation::from_ids(&or, [("e1", "B"), ("e2", "B"), ("e3", "B")]).unwrap();
        assert_eq!(incoming_weight(&or, &all_out, 0), 0);
        assert!(!is_legal_orientation(&or, &all_out).unwrap());
    }

    #[test]
    fn parallel_or_pair_has_six_legal_orientations() {
        let g = parallel_or_pair();
        let legal = all_orientations(&g).into_iter().filter(|o| is_legal_orientation(&g, o).unwrap()).count();
        assert_eq!(legal, 6);
        let all_a = Orientation::from_ids(&g, [("e1", "A"), ("e2", "A"), ("e3", "A")]).unwrap();
        assert!(!is_legal_orientation(&g, &all_a).unwrap());
    }

    #[test]
    fn flips_from_mixed_orientation() {
        let g = parallel_or_pair();
        let o = Orientation::from_ids(&g, [("e1", "A"), ("e2", "A"), ("e3", "B")]).unwrap();
        assert_eq!(legal_flips(&g, &o).unwrap(), vec![0, 1]);
    }

    #[test]
    fn edgeless_graph_has_no_flips() {
        let g = ConstraintGraph::new(vec![], vec![]).unwrap();
        let o = Orientation::new(&g, vec![]).unwrap();
        assert!(legal_flips(&g, &o).unwrap().is_empty());
    }

    #[test]
    fn mismatch_and_illegal_start() {
        let g = parallel_or_pair();
        assert!(matches!(Orientation::new(&g, vec![0, 0]), Err(NclError::EdgeSetMismatch(_))));
        let bad = Orientation(vec![0, 0, 0]);
        assert_eq!(legal_flips(&g, &bad), Err(NclError::IllegalStart));
    }

    #[test]
    fn flips_are_reversible_and_local() {
        for g in [parallel_or_pair(), parallel_and_pair(), and_triangle_or_hub()] {
            for o in all_orientations(&g) {
                if !is_legal_orientation(&g, &o).unwrap() {
                    continue;
                }
                let flips = legal_flips(&g, &o).unwrap();
                for e in 0..g.edges().len() {
                    let flipped = o.flipped(&g, e);
                    // recomputation agrees with the endpoint-only shortcut
                    assert_eq!(flips.contains(&e), is_legal_orientation(&g, &flipped).unwrap());
                    if flips.contains(&e) {
                        assert!(legal_flips(&g, &flipped).unwrap().contains(&e));
                    }
                }
            }
        }
    }
}

//! Explicit-state reachability over reconfiguration graphs.
//!
//! A [`ReconfigurationSpace`] binds a problem model to the engine: a
//! feasibility predicate, a neighbor generator and a canonical byte encoding.
//! The engine runs breadth-first search from the start configuration,
//! expanding neighbors in lexicographic order of their encodings, so that a
//! returned certificate is a shortest path and is identical across runs.

use std::collections::VecDeque;
use std::fmt::{self, Debug};
use std::hash::Hash;

use indexmap::IndexSet;
use thiserror::Error;

pub const DEFAULT_MAX_STATES: usize = 10_000_000;
pub const DEFAULT_MAX_MOVES: usize = 1_000_000;

/// A problem binding for the search engine.
///
/// Implementations must keep the move relation symmetric and must only
/// return feasible configurations from [`neighbors`](Self::neighbors).
pub trait ReconfigurationSpace {
    type Config: Clone + Eq + Hash + Debug;

    fn is_feasible(&self, config: &Self::Config) -> bool;

    /// All configurations one legal move away from a feasible `config`.
    fn neighbors(&self, config: &Self::Config) -> Vec<Self::Config>;

    /// Canonical, length-prefixed encoding; defines the visit order.
    fn encode(&self, config: &Self::Config) -> Vec<u8>;

    /// Whether `to` is one legal move away from `from`.
    fn is_move(&self, from: &Self::Config, to: &Self::Config) -> bool {
        self.neighbors(from).iter().any(|c| c == to)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    max_states: usize,
    max_moves: usize,
}

impl SearchLimits {
    pub fn new(max_states: usize, max_moves: usize) -> Result<Self, SearchError> {
        if max_states == 0 || max_moves == 0 {
            return Err(SearchError::InvalidLimits);
        }
        Ok(SearchLimits { max_states, max_moves })
    }

    pub fn max_states(&self) -> usize {
        self.max_states
    }

    pub fn max_moves(&self) -> usize {
        self.max_moves
    }

    pub fn with_max_states(self, max_states: usize) -> Result<Self, SearchError> {
        SearchLimits::new(max_states, self.max_moves)
    }
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { max_states: DEFAULT_MAX_STATES, max_moves: DEFAULT_MAX_MOVES }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Start,
    Goal,
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Endpoint::Start => f.write_str("start"),
            Endpoint::Goal => f.write_str("goal"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitKind {
    States,
    Moves,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("{0} configuration is infeasible")]
    InfeasibleEndpoint(Endpoint),
    #[error("search exceeded its {kind:?} limit after exploring {states_explored} states")]
    ResourceCapExceeded { kind: LimitKind, states_explored: usize },
    #[error("search limits must be strictly positive")]
    InvalidLimits,
}

/// Outcome of a completed search.
///
/// A search that hits a limit never produces a result (it returns
/// [`SearchError::ResourceCapExceeded`]), so `capped` is only ever set on
/// results reconstructed from external data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachabilityResult<C> {
    pub reachable: bool,
    pub certificate: Option<Vec<C>>,
    pub states_explored: usize,
    pub capped: bool,
}

/// The connected component of a configuration: configurations in BFS
/// discovery order and every edge among them as `(i, j)` with `i < j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component<C> {
    pub configs: Vec<C>,
    pub edges: Vec<(usize, usize)>,
}

impl<C: Eq + Hash> Component<C> {
    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    pub fn contains(&self, config: &C) -> bool {
        self.configs.contains(config)
    }
}

fn sorted_neighbors<S: ReconfigurationSpace>(space: &S, config: &S::Config) -> Vec<S::Config> {
    let mut keyed: Vec<(Vec<u8>, S::Config)> =
        space.neighbors(config).into_iter().map(|c| (space.encode(&c), c)).collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    keyed.dedup_by(|a, b| a.0 == b.0);
    keyed.into_iter().map(|(_, c)| c).collect()
}

/// Breadth-first reachability from `start` to `goal`.
pub fn reachable<S: ReconfigurationSpace>(
    space: &S,
    start: &S::Config,
    goal: &S::Config,
    limits: SearchLimits,
) -> Result<ReachabilityResult<S::Config>, SearchError> {
    if !space.is_feasible(start) {
        return Err(SearchError::InfeasibleEndpoint(Endpoint::Start));
    }
    if !space.is_feasible(goal) {
        return Err(SearchError::InfeasibleEndpoint(Endpoint::Goal));
    }
    if start == goal {
        return Ok(ReachabilityResult {
            reachable: true,
            certificate: Some(vec![start.clone()]),
            states_explored: 1,
            capped: false,
        });
    }

    let mut seen: IndexSet<S::Config> = IndexSet::new();
    let mut parent: Vec<usize> = vec![usize::MAX];
    seen.insert(start.clone());

    let mut level_start = 0;
    let mut depth = 0;
    while level_start < seen.len() {
        let level_end = seen.len();
        if depth + 1 > limits.max_moves {
            return Err(SearchError::ResourceCapExceeded { kind: LimitKind::Moves, states_explored: seen.len() });
        }
        for idx in level_start..level_end {
            let current = seen[idx].clone();
            for next in sorted_neighbors(space, &current) {
                if seen.contains(&next) {
                    continue;
                }
                let found = next == *goal;
                seen.insert(next);
                parent.push(idx);
                if found {
                    let certificate = trace_back(&seen, &parent, seen.len() - 1);
                    return Ok(ReachabilityResult {
                        reachable: true,
                        certificate: Some(certificate),
                        states_explored: seen.len(),
                        capped: false,
                    });
                }
                if seen.len() > limits.max_states {
                    return Err(SearchError::ResourceCapExceeded {
                        kind: LimitKind::States,
                        states_explored: seen.len(),
                    });
                }
            }
        }
        level_start = level_end;
        depth += 1;
    }

    Ok(ReachabilityResult { reachable: false, certificate: None, states_explored: seen.len(), capped: false })
}

fn trace_back<C: Clone + Eq + Hash>(seen: &IndexSet<C>, parent: &[usize], mut idx: usize) -> Vec<C> {
    let mut path = Vec::new();
    loop {
        path.push(seen[idx].clone());
        if parent[idx] == usize::MAX {
            break;
        }
        idx = parent[idx];
    }
    path.reverse();
    path
}

/// Every configuration reachable from `start`, with all edges among them.
pub fn explore_component<S: ReconfigurationSpace>(
    space: &S,
    start: &S::Config,
    limits: SearchLimits,
) -> Result<Component<S::Config>, SearchError> {
    if !space.is_feasible(start) {
        return Err(SearchError::InfeasibleEndpoint(Endpoint::Start));
    }
    let mut seen: IndexSet<S::Config> = IndexSet::new();
    seen.insert(start.clone());
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(idx) = queue.pop_front() {
        let current = seen[idx].clone();
        for next in sorted_neighbors(space, &current) {
            let (j, fresh) = seen.insert_full(next);
            if fresh {
                if seen.len() > limits.max_states {
                    return Err(SearchError::ResourceCapExceeded {
                        kind: LimitKind::States,
                        states_explored: seen.len(),
                    });
                }
                queue.push_back(j);
            }
            if idx < j {
                edges.push((idx, j));
            }
        }
    }
    edges.sort_unstable();
    Ok(Component { configs: seen.into_iter().collect(), edges })
}

/// Every configuration reachable from `start`, in no particular order.
/// Cheaper than [`explore_component`] on large components: no edge list,
/// no canonical neighbor ordering.
pub fn reachable_set<S: ReconfigurationSpace>(
    space: &S,
    start: &S::Config,
    limits: SearchLimits,
) -> Result<Vec<S::Config>, SearchError> {
    if !space.is_feasible(start) {
        return Err(SearchError::InfeasibleEndpoint(Endpoint::Start));
    }
    let mut seen: IndexSet<S::Config> = IndexSet::new();
    seen.insert(start.clone());
    let mut idx = 0;
    while idx < seen.len() {
        for next in space.neighbors(&seen[idx]) {
            if seen.insert(next) && seen.len() > limits.max_states {
                return Err(SearchError::ResourceCapExceeded { kind: LimitKind::States, states_explored: seen.len() });
            }
        }
        idx += 1;
    }
    Ok(seen.into_iter().collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertificateCheck {
    Valid,
    Empty,
    Infeasible { step: usize },
    IllegalMove { step: usize },
}

impl CertificateCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, CertificateCheck::Valid)
    }
}

impl fmt::Display for CertificateCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CertificateCheck::Valid => f.write_str("certificate is valid"),
            CertificateCheck::Empty => f.write_str("certificate is empty"),
            CertificateCheck::Infeasible { step } => {
                write!(f, "configuration at step {step} is infeasible")
            }
            CertificateCheck::IllegalMove { step } => {
                write!(f, "step {} -> {} is not a legal move", step - 1, step)
            }
        }
    }
}

/// Replays a certificate: every entry feasible, consecutive entries one move apart.
pub fn check_certificate<S: ReconfigurationSpace>(space: &S, certificate: &[S::Config]) -> CertificateCheck {
    if certificate.is_empty() {
        return CertificateCheck::Empty;
    }
    for (step, config) in certificate.iter().enumerate() {
        if !space.is_feasible(config) {
            return CertificateCheck::Infeasible { step };
        }
        if step > 0 && !space.is_move(&certificate[step - 1], config) {
            return CertificateCheck::IllegalMove { step };
        }
    }
    CertificateCheck::Valid
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymmetryViolation<C> {
    /// A neighbor that fails the feasibility predicate.
    InfeasibleNeighbor { from: C, to: C },
    /// `to` is a neighbor of `from` but not vice versa.
    OneWay { from: C, to: C },
}

/// Checks closure and symmetry of the move relation at the given configurations.
pub fn audit_symmetry<S: ReconfigurationSpace>(
    space: &S,
    configs: &[S::Config],
) -> Result<(), SymmetryViolation<S::Config>> {
    for c in configs {
        for n in space.neighbors(c) {
            if !space.is_feasible(&n) {
                return Err(SymmetryViolation::InfeasibleNeighbor { from: c.clone(), to: n });
            }
            if !space.neighbors(&n).contains(c) {
                return Err(SymmetryViolation::OneWay { from: c.clone(), to: n });
            }
        }
    }
    Ok(())
}

/// Length-prefixed encoding helpers shared by the model bindings.
pub mod encoding {
    pub fn push_len(out: &mut Vec<u8>, len: usize) {
        out.extend_from_slice(&(len as u32).to_be_bytes());
    }

    pub fn push_index(out: &mut Vec<u8>, idx: usize) {
        out.extend_from_slice(&(idx as u32).to_be_bytes());
    }

    /// Sorted index set, length-prefixed.
    pub fn index_set(indices: &[usize]) -> Vec<u8> {
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        let mut out = Vec::with_capacity(4 + 4 * sorted.len());
        push_len(&mut out, sorted.len());
        for i in sorted {
            push_index(&mut out, i);
        }
        out
    }

    /// Bit vector, length-prefixed, one byte per bit.
    pub fn bits(values: impl ExactSizeIterator<Item = bool>) -> Vec<u8> {
        let mut out = Vec::with_capacity(4 + values.len());
        push_len(&mut out, values.len());
        out.extend(values.map(u8::from));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Path graph 0 - 1 - ... - (n-1) with some vertices blocked.
    struct Line {
        n: usize,
        blocked: Vec<usize>,
    }

    impl ReconfigurationSpace for Line {
        type Config = usize;

        fn is_feasible(&self, c: &usize) -> bool {
            *c < self.n && !self.blocked.contains(c)
        }

        fn neighbors(&self, c: &usize) -> Vec<usize> {
            let mut out = Vec::new();
            if *c > 0 {
                out.push(c - 1);
            }
            out.push(c + 1);
            out.retain(|x| self.is_feasible(x));
            out
        }

        fn encode(&self, c: &usize) -> Vec<u8> {
            encoding::index_set(&[*c])
        }
    }

    #[test]
    fn identity_case() {
        let line = Line { n: 3, blocked: vec![] };
        let r = reachable(&line, &1, &1, SearchLimits::default()).unwrap();
        assert!(r.reachable);
        assert_eq!(r.certificate, Some(vec![1]));
    }

    #[test]
    fn shortest_path_on_line() {
        let line = Line { n: 6, blocked: vec![] };
        let r = reachable(&line, &0, &5, SearchLimits::default()).unwrap();
        assert_eq!(r.certificate, Some(vec![0, 1, 2, 3, 4, 5]));
        assert!(check_certificate(&line, r.certificate.as_ref().unwrap()).is_valid());
    }

    #[test]
    fn blocked_means_unreachable() {
        let line = Line { n: 6, blocked: vec![3] };
        let r = reachable(&line, &0, &5, SearchLimits::default()).unwrap();
        assert!(!r.reachable);
        assert_eq!(r.states_explored, 3);
    }

    #[test]
    fn infeasible_endpoints() {
        let line = Line { n: 6, blocked: vec![3] };
        assert_eq!(
            reachable(&line, &3, &0, SearchLimits::default()).unwrap_err(),
            SearchError::InfeasibleEndpoint(Endpoint::Start)
        );
        assert_eq!(
            reachable(&line, &0, &9, SearchLimits::default()).unwrap_err(),
            SearchError::InfeasibleEndpoint(Endpoint::Goal)
        );
    }

    #[test]
    fn caps_are_errors() {
        let line = Line { n: 100, blocked: vec![] };
        let limits = SearchLimits::new(1, 1000).unwrap();
        assert!(matches!(
            reachable(&line, &0, &50, limits),
            Err(SearchError::ResourceCapExceeded { kind: LimitKind::States, .. })
        ));
        let limits = SearchLimits::new(1000, 10).unwrap();
        assert!(matches!(
            reachable(&line, &0, &50, limits),
            Err(SearchError::ResourceCapExceeded { kind: LimitKind::Moves, .. })
        ));
        assert!(matches!(
            explore_component(&line, &0, SearchLimits::new(5, 5).unwrap()),
            Err(SearchError::ResourceCapExceeded { .. })
        ));
        assert_eq!(SearchLimits::new(0, 1), Err(SearchError::InvalidLimits));
    }

    #[test]
    fn component_edges_are_listed_once() {
        let line = Line { n: 4, blocked: vec![] };
        let comp = explore_component(&line, &2, SearchLimits::default()).unwrap();
        assert_eq!(comp.len(), 4);
        assert_eq!(comp.edges.len(), 3);
    }

    #[test]
    fn reachable_set_matches_component() {
        let line = Line { n: 8, blocked: vec![5] };
        let mut set = reachable_set(&line, &2, SearchLimits::default()).unwrap();
        set.sort_unstable();
        assert_eq!(set, vec![0, 1, 2, 3, 4]);
        assert!(reachable_set(&line, &0, SearchLimits::new(2, 10).unwrap()).is_err());
    }

    #[test]
    fn certificate_diagnostics() {
        let line = Line { n: 6, blocked: vec![3] };
        assert_eq!(check_certificate(&line, &[]), CertificateCheck::Empty);
        assert_eq!(check_certificate(&line, &[2, 3, 4]), CertificateCheck::Infeasible { step: 1 });
        assert_eq!(check_certificate(&line, &[0, 2]), CertificateCheck::IllegalMove { step: 1 });
        assert!(check_certificate(&line, &[4]).is_valid());
    }
}

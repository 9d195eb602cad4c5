//! Labeled sliding tokens: tokens sit on an independent set and move one at
//! a time along an edge, keeping the occupied set independent.

use thiserror::Error;

use crate::graph::SimpleGraph;
use crate::statespace::{encoding, Endpoint, ReconfigurationSpace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TokenError {
    #[error("two tokens share vertex {0}")]
    NonInjectivePlacement(usize),
    #[error("vertex index {0} out of range")]
    UnknownVertex(usize),
    #[error("placement has {got} tokens, expected {expected}")]
    WrongTokenCount { expected: usize, got: usize },
    #[error("duplicate token label `{0}`")]
    DuplicateToken(String),
    #[error("placement is not independent")]
    DependentStart,
    #[error("{0} placement is not independent")]
    DependentPlacement(Endpoint),
}

/// Vertex of each token, indexed by token.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Placement(pub Vec<usize>);

impl Placement {
    pub fn vertex(&self, token: usize) -> usize {
        self.0[token]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn token_at(&self, v: usize) -> Option<usize> {
        self.0.iter().position(|&x| x == v)
    }

    pub fn slid(&self, token: usize, to: usize) -> Placement {
        let mut p = self.clone();
        p.0[token] = to;
        p
    }
}

fn check_injective(g: &SimpleGraph, p: &Placement) -> Result<(), TokenError> {
    let mut used = vec![false; g.len()];
    for &v in &p.0 {
        if v >= g.len() {
            return Err(TokenError::UnknownVertex(v));
        }
        if std::mem::replace(&mut used[v], true) {
            return Err(TokenError::NonInjectivePlacement(v));
        }
    }
    Ok(())
}

/// True iff no two occupied vertices are adjacent.
pub fn is_independent_placement(g: &SimpleGraph, p: &Placement) -> Result<bool, TokenError> {
    check_injective(g, p)?;
    Ok(p.0.iter().enumerate().all(|(i, &u)| p.0[i + 1..].iter().all(|&v| !g.has_edge(u, v))))
}

/// `(token, target)` pairs whose slide keeps the placement independent.
pub fn legal_slides(g: &SimpleGraph, p: &Placement) -> Result<Vec<(usize, usize)>, TokenError> {
    if !is_independent_placement(g, p)? {
        return Err(TokenError::DependentStart);
    }
    let mut occupied = vec![false; g.len()];
    p.0.iter().for_each(|&v| occupied[v] = true);
    let mut out = Vec::new();
    for (t, &from) in p.0.iter().enumerate() {
        for &to in g.neighbors(from) {
            // `to` is free since `from` is occupied and the placement independent;
            // the only occupied neighbor `to` may have is `from`
            if g.neighbors(to).iter().all(|&w| w == from || !occupied[w]) {
                out.push((t, to));
            }
        }
    }
    Ok(out)
}

/// All independent placements of `k` labeled tokens, in lexicographic order.
pub fn independent_placements(g: &SimpleGraph, k: usize) -> Vec<Placement> {
    fn go(g: &SimpleGraph, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Placement>) {
        if cur.len() == k {
            out.push(Placement(cur.clone()));
            return;
        }
        for v in 0..g.len() {
            if cur.iter().all(|&u| u != v && !g.has_edge(u, v)) {
                cur.push(v);
                go(g, k, cur, out);
                cur.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(g, k, &mut Vec::new(), &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenInstance {
    pub graph: SimpleGraph,
    pub tokens: Vec<String>,
    pub start: Placement,
    pub goal: Placement,
}

impl TokenInstance {
    pub fn new(graph: SimpleGraph, tokens: Vec<String>, start: Placement, goal: Placement) -> Result<Self, TokenError> {
        for (i, t) in tokens.iter().enumerate() {
            if tokens[..i].contains(t) {
                return Err(TokenError::DuplicateToken(t.clone()));
            }
        }
        for (p, which) in [(&start, Endpoint::Start), (&goal, Endpoint::Goal)] {
            if p.len() != tokens.len() {
                return Err(TokenError::WrongTokenCount { expected: tokens.len(), got: p.len() });
            }
            if !is_independent_placement(&graph, p)? {
                return Err(TokenError::DependentPlacement(which));
            }
        }
        Ok(TokenInstance { graph, tokens, start, goal })
    }
}

pub struct TokenSlideSpace<'a> {
    graph: &'a SimpleGraph,
}

impl<'a> TokenSlideSpace<'a> {
    pub fn new(graph: &'a SimpleGraph) -> Self {
        TokenSlideSpace { graph }
    }
}

impl ReconfigurationSpace for TokenSlideSpace<'_> {
    type Config = Placement;

    fn is_feasible(&self, p: &Placement) -> bool {
        matches!(is_independent_placement(self.graph, p), Ok(true))
    }

    fn neighbors(&self, p: &Placement) -> Vec<Placement> {
        match legal_slides(self.graph, p) {
            Ok(slides) => slides.into_iter().map(|(t, v)| p.slid(t, v)).collect(),
            Err(_) => Vec::new(),
        }
    }

    fn encode(&self, p: &Placement) -> Vec<u8> {
        let mut out = Vec::with_capacity(4 * p.len() + 4);
        encoding::push_len(&mut out, p.len());
        p.0.iter().for_each(|&v| encoding::push_index(&mut out, v));
        out
    }

    fn is_move(&self, from: &Placement, to: &Placement) -> bool {
        if from.len() != to.len() || !self.is_feasible(from) || !self.is_feasible(to) {
            return false;
        }
        let diff: Vec<usize> = (0..from.len()).filter(|&t| from.0[t] != to.0[t]).collect();
        matches!(diff[..], [t] if self.graph.has_edge(from.0[t], to.0[t]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn independence_examples() {
        let p3 = SimpleGraph::path(3);
        assert!(is_independent_placement(&p3, &Placement(vec![0, 2])).unwrap());
        let edge = SimpleGraph::path(2);
        assert!(!is_independent_placement(&edge, &Placement(vec![0, 1])).unwrap());
        assert_eq!(is_independent_placement(&p3, &Placement(vec![1, 1])), Err(TokenError::NonInjectivePlacement(1)));
    }

    #[test]
    fn cube_antipodal_pair_is_independent() {
        let q = SimpleGraph::cube();
        let p = Placement(vec![0, 7]);
        // oracle: scan all 12 edges
        let clash = q.edges().iter().any(|&(u, v)| p.0.contains(&u) && p.0.contains(&v));
        assert!(!clash);
        assert!(is_independent_placement(&q, &p).unwrap());
    }

    #[test]
    fn slide_examples() {
        let p3 = SimpleGraph::path(3);
        assert_eq!(legal_slides(&p3, &Placement(vec![0])).unwrap(), vec![(0, 1)]);
        assert!(legal_slides(&p3, &Placement(vec![0, 2])).unwrap().is_empty());
        let prism = SimpleGraph::prism();
        let slides = legal_slides(&prism, &Placement(vec![0])).unwrap();
        assert_eq!(slides.iter().map(|s| s.1).collect::<Vec<_>>(), prism.neighbors(0).to_vec());
        assert_eq!(legal_slides(&p3, &Placement(vec![0, 1])), Err(TokenError::DependentStart));
    }

    /// Brute-force oracle: every single-token move to a neighbor, kept iff independent.
    fn slides_oracle(g: &SimpleGraph, p: &Placement) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for t in 0..p.len() {
            for &to in g.neighbors(p.0[t]) {
                if is_independent_placement(g, &p.slid(t, to)).unwrap_or(false) {
                    out.push((t, to));
                }
            }
        }
        out
    }

    proptest! {
        #[test]
        fn slides_match_oracle_and_reverse(pick in 0usize..4, k in 1usize..=2, seed in any::<u64>()) {
            let g = [SimpleGraph::k4(), SimpleGraph::k33(), SimpleGraph::prism(), SimpleGraph::cube()][pick].clone();
            let all = independent_placements(&g, k);
            prop_assume!(!all.is_empty());
            let p = &all[(seed % all.len() as u64) as usize];
            let slides = legal_slides(&g, p).unwrap();
            prop_assert_eq!(&slides, &slides_oracle(&g, p));
            for (t, v) in slides {
                let q = p.slid(t, v);
                prop_assert!(legal_slides(&g, &q).unwrap().contains(&(t, p.0[t])));
            }
        }

        #[test]
        fn relabeling_keeps_target_vertices(seed in any::<u64>()) {
            let g = SimpleGraph::cube();
            let all = independent_placements(&g, 2);
            let p = &all[(seed % all.len() as u64) as usize];
            let swapped = Placement(vec![p.0[1], p.0[0]]);
            let mut a: Vec<usize> = legal_slides(&g, p).unwrap().into_iter().map(|s| s.1).collect();
            let mut b: Vec<usize> = legal_slides(&g, &swapped).unwrap().into_iter().map(|s| s.1).collect();
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn instance_validation() {
        let g = SimpleGraph::path(3);
        let ok = TokenInstance::new(g.clone(), vec!["t".into()], Placement(vec![0]), Placement(vec![2]));
        assert!(ok.is_ok());
        let bad =
            TokenInstance::new(g.clone(), vec!["t".into(), "u".into()], Placement(vec![0, 1]), Placement(vec![0, 2]));
        assert_eq!(bad, Err(TokenError::DependentPlacement(Endpoint::Start)));
    }
}

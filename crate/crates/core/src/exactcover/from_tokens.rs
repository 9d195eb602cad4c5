//! From labeled sliding tokens on a 3-regular graph to exact cover with
//! split/merge moves.
//!
//! Universe: the vertices, then the tokens. For every edge `(v_i, v_j)` the
//! slide set `S` is the union of both closed neighborhoods; the family gets
//! every non-empty subset of `S − {v_i}` and of `S − {v_j}`, and for every
//! token `t` the sets `{v_i, t}`, `{v_j, t}` and `S ∪ {t}`. A placement maps
//! to the cover of singletons `{v}` and pairs `{v, t}` for occupied `v`.

use std::collections::BTreeSet;

use thiserror::Error;

use super::{Cover, ExactCoverError, ExactCoverInstance};
use crate::graph::SimpleGraph;
use crate::tokens::{is_independent_placement, Placement, TokenError, TokenInstance};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TokenReductionError {
    #[error("graph is not 3-regular")]
    NotThreeRegular,
    #[error("placement is not independent")]
    DependentPlacement,
    #[error("cover is not maximally split")]
    NotMaximallySplit,
    #[error("token and vertex names collide: `{0}`")]
    NameClash(String),
    #[error(transparent)]
    Tokens(#[from] TokenError),
    #[error(transparent)]
    Cover(#[from] ExactCoverError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlideSet {
    pub edge: (usize, usize),
    /// Closed neighborhoods of both endpoints, sorted.
    pub vertices: Vec<usize>,
}

pub fn slide_set(g: &SimpleGraph, u: usize, v: usize) -> SlideSet {
    let mut s: BTreeSet<usize> = g.closed_neighborhood(u).into_iter().collect();
    s.extend(g.closed_neighborhood(v));
    SlideSet { edge: (u.min(v), u.max(v)), vertices: s.into_iter().collect() }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenReduction {
    pub instance: ExactCoverInstance,
    pub slide_sets: Vec<SlideSet>,
    pub vertices: usize,
    pub tokens: usize,
}

fn nonempty_subsets(base: &[usize], out: &mut BTreeSet<Vec<usize>>) {
    for mask in 1u32..1 << base.len() {
        out.insert((0..base.len()).filter(|i| mask >> i & 1 == 1).map(|i| base[i]).collect());
    }
}

pub fn reduce_tokens_to_exactcover(tok: &TokenInstance) -> Result<TokenReduction, TokenReductionError> {
    let g = &tok.graph;
    if !g.is_regular(3) {
        return Err(TokenReductionError::NotThreeRegular);
    }
    for p in [&tok.start, &tok.goal] {
        if !is_independent_placement(g, p)? {
            return Err(TokenReductionError::DependentPlacement);
        }
    }
    let n = g.len();
    let k = tok.tokens.len();
    if let Some(t) = tok.tokens.iter().find(|t| g.names().contains(t)) {
        return Err(TokenReductionError::NameClash(t.clone()));
    }

    let slide_sets: Vec<SlideSet> = g.edges().into_iter().map(|(u, v)| slide_set(g, u, v)).collect();
    let mut family = BTreeSet::new();
    for s in &slide_sets {
        let (i, j) = s.edge;
        for drop in [i, j] {
            let rest: Vec<usize> = s.vertices.iter().copied().filter(|&x| x != drop).collect();
            nonempty_subsets(&rest, &mut family);
        }
        for t in n..n + k {
            family.insert(vec![i, t]);
            family.insert(vec![j, t]);
            let mut whole = s.vertices.clone();
            whole.push(t);
            family.insert(whole);
        }
    }
    let mut family: Vec<Vec<usize>> = family.into_iter().collect();
    family.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));

    let mut universe: Vec<String> = g.names().to_vec();
    universe.extend(tok.tokens.iter().cloned());
    let instance = ExactCoverInstance::without_endpoints(universe, family)?;
    let mut out = TokenReduction { instance, slide_sets, vertices: n, tokens: k };
    let start = out.f_red(&tok.start)?;
    let goal = out.f_red(&tok.goal)?;
    out.instance = out.instance.with_endpoints(start, goal)?;
    Ok(out)
}

impl TokenReduction {
    pub fn token_element(&self, token: usize) -> usize {
        self.vertices + token
    }

    /// `{v}` for each empty vertex, `{v, t}` for each token `t` at `v`.
    pub fn f_red(&self, p: &Placement) -> Result<Cover, TokenReductionError> {
        let mut sets = Vec::with_capacity(self.vertices);
        for v in 0..self.vertices {
            let set = match p.token_at(v) {
                Some(t) => vec![v, self.token_element(t)],
                None => vec![v],
            };
            sets.push(self.instance.set_index(&set).ok_or(TokenReductionError::NotMaximallySplit)?);
        }
        Ok(Cover::new(sets)?)
    }

    /// Each set holds exactly one vertex and at most one token.
    pub fn is_maximally_split(&self, c: &Cover) -> bool {
        matches!(super::is_exact_cover(&self.instance, c), Ok(true))
            && c.sets().iter().all(|&s| {
                let set = &self.instance.family()[s];
                let vs = set.iter().filter(|&&e| e < self.vertices).count();
                vs == 1 && set.len() - vs <= 1
            })
    }

    pub fn f_red_inverse(&self, c: &Cover) -> Result<Placement, TokenReductionError> {
        if !self.is_maximally_split(c) {
            return Err(TokenReductionError::NotMaximallySplit);
        }
        let mut at = vec![usize::MAX; self.tokens];
        for &s in c.sets() {
            if let [v, t] = self.instance.family()[s][..] {
                at[t - self.vertices] = v;
            }
        }
        Ok(Placement(at))
    }
}

#[cfg(test)]
mod tests {
    use super::super::{color_hypergraph, split_merge_neighbors};
    use super::*;
    use crate::tokens::independent_placements;

    fn instance(g: SimpleGraph, start: Vec<usize>, goal: Vec<usize>) -> TokenInstance {
        let tokens = (1..=start.len()).map(|i| format!("t{i}")).collect();
        TokenInstance::new(g, tokens, Placement(start), Placement(goal)).unwrap()
    }

    #[test]
    fn k4_one_token() {
        let r = reduce_tokens_to_exactcover(&instance(SimpleGraph::k4(), vec![0], vec![3])).unwrap();
        assert_eq!(r.instance.universe().len(), 4 + 1);
        for s in &r.slide_sets {
            assert_eq!(s.vertices, vec![0, 1, 2, 3]);
        }
        for s in &r.slide_sets {
            let mut whole = s.vertices.clone();
            whole.push(4);
            assert!(r.instance.set_index(&whole).is_some());
        }
        let col = color_hypergraph(&r.instance);
        assert!(col.count() <= 23);
        assert_eq!(col.conflict(&r.instance), None);
    }

    #[test]
    fn f_red_shape() {
        let r = reduce_tokens_to_exactcover(&instance(SimpleGraph::prism(), vec![0, 4], vec![1, 5])).unwrap();
        let c = &r.instance.start;
        assert!(c.sets().contains(&r.instance.set_index(&[0, 6]).unwrap()));
        assert!(c.sets().contains(&r.instance.set_index(&[4, 7]).unwrap()));
        assert!(c.sets().contains(&r.instance.set_index(&[2]).unwrap()));
        assert_eq!(c.len(), 6);
    }

    #[test]
    fn f_red_round_trip_on_prism() {
        let g = SimpleGraph::prism();
        let tok = instance(g.clone(), vec![0, 4], vec![0, 4]);
        let r = reduce_tokens_to_exactcover(&tok).unwrap();
        for p in independent_placements(&g, 2) {
            let c = r.f_red(&p).unwrap();
            assert!(r.is_maximally_split(&c));
            assert_eq!(r.f_red_inverse(&c).unwrap(), p);
        }
        let merged = r.instance.set_index(&[0, 1]).unwrap();
        let rest: Vec<usize> = (2..6).map(|v| r.instance.set_index(&[v]).unwrap()).collect();
        let mut sets = vec![merged];
        sets.extend(rest);
        let c = Cover::new(sets).unwrap();
        assert_eq!(r.f_red_inverse(&c), Err(TokenReductionError::NotMaximallySplit));
    }

    #[test]
    fn rejects_non_cubic_graphs() {
        let tok = instance(SimpleGraph::path(3), vec![0], vec![2]);
        assert_eq!(reduce_tokens_to_exactcover(&tok), Err(TokenReductionError::NotThreeRegular));
    }

    /// Oracle: neighbors by testing every pair/triple of family sets against the definition.
    #[test]
    fn k4_neighbors_of_start_match_definition() {
        let r = reduce_tokens_to_exactcover(&instance(SimpleGraph::k4(), vec![0], vec![1])).unwrap();
        let inst = &r.instance;
        let c = &inst.start;
        let f = inst.family();
        let mut expected = Vec::new();
        let m = f.len();
        let disjoint_union = |a: &Vec<usize>, b: &Vec<usize>| {
            let mut u = a.clone();
            u.extend(b);
            u.sort();
            let n = u.len();
            u.dedup();
            (u.len() == n).then_some(u)
        };
        for a in 0..m {
            for b in a + 1..m {
                let Some(u) = disjoint_union(&f[a], &f[b]) else { continue };
                for s in (0..m).filter(|&s| f[s] == u) {
                    if c.contains(s) && !c.contains(a) && !c.contains(b) {
                        expected.push(c.replaced(&[s], &[a, b]));
                    }
                    if !c.contains(s) && c.contains(a) && c.contains(b) {
                        expected.push(c.replaced(&[a, b], &[s]));
                    }
                }
            }
        }
        expected.sort();
        expected.dedup();
        assert_eq!(split_merge_neighbors(inst, c).unwrap(), expected);
        assert!(!expected.is_empty());
    }
}

//! Simple undirected graphs with named vertices, and a few named families.

use std::collections::HashMap;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("self-loop at `{0}`")]
    SelfLoop(String),
    #[error("parallel edge {0}-{1}")]
    ParallelEdge(String, String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    names: Vec<String>,
    adj: Vec<Vec<usize>>,
}

impl SimpleGraph {
    pub fn new(names: Vec<String>, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut seen = HashMap::new();
        for (i, n) in names.iter().enumerate() {
            if seen.insert(n.as_str(), i).is_some() {
                return Err(GraphError::DuplicateVertex(n.clone()));
            }
        }
        let mut adj = vec![Vec::new(); names.len()];
        for &(u, v) in edges {
            let name = |x: usize| names.get(x).cloned().unwrap_or_else(|| format!("#{x}"));
            if u >= names.len() {
                return Err(GraphError::UnknownVertex(name(u)));
            }
            if v >= names.len() {
                return Err(GraphError::UnknownVertex(name(v)));
            }
            if u == v {
                return Err(GraphError::SelfLoop(name(u)));
            }
            if adj[u].contains(&v) {
                return Err(GraphError::ParallelEdge(name(u), name(v)));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        adj.iter_mut().for_each(|a| a.sort_unstable());
        Ok(SimpleGraph { names, adj })
    }

    pub fn from_names(names: &[&str], edges: &[(&str, &str)]) -> Result<Self, GraphError> {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let idx = |s: &str| names.iter().position(|n| n == s).ok_or_else(|| GraphError::UnknownVertex(s.into()));
        let edges = edges.iter().map(|(a, b)| Ok((idx(a)?, idx(b)?))).collect::<Result<Vec<_>, GraphError>>()?;
        SimpleGraph::new(names, &edges)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.len()).flat_map(|u| self.adj[u].iter().filter(move |&&v| v > u).map(move |&v| (u, v))).collect()
    }

    pub fn is_regular(&self, d: usize) -> bool {
        self.adj.iter().all(|a| a.len() == d)
    }

    /// `v` and its neighbors, sorted.
    pub fn closed_neighborhood(&self, v: usize) -> Vec<usize> {
        let mut out = self.adj[v].clone();
        out.push(v);
        out.sort_unstable();
        out
    }

    fn numbered(prefix: &str, n: usize, edges: &[(usize, usize)]) -> Self {
        let names = (1..=n).map(|i| format!("{prefix}{i}")).collect();
        SimpleGraph::new(names, edges).expect("generated graph is simple")
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        Self::numbered("v", n, &edges)
    }

    pub fn cycle(n: usize) -> Self {
        let mut edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        if n > 2 {
            edges.push((n - 1, 0));
        }
        Self::numbered("v", n, &edges)
    }

    pub fn complete(n: usize) -> Self {
        let edges: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Self::numbered("v", n, &edges)
    }

    pub fn k4() -> Self {
        Self::complete(4)
    }

    /// K_{3,3} with sides `a1..a3` and `b1..b3`.
    pub fn k33() -> Self {
        let names = ["a1", "a2", "a3", "b1", "b2", "b3"].map(String::from).to_vec();
        let edges: Vec<(usize, usize)> = (0..3).flat_map(|a| (3..6).map(move |b| (a, b))).collect();
        SimpleGraph::new(names, &edges).expect("simple")
    }

    /// Triangular prism: triangles `v1 v2 v3` and `v4 v5 v6` joined by `v_i v_{i+3}`.
    pub fn prism() -> Self {
        Self::numbered("v", 6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)])
    }

    /// The 3-cube; vertex `q{b}` is the bit string `b`.
    pub fn cube() -> Self {
        let names = (0..8).map(|i| format!("q{i:03b}")).collect();
        let edges: Vec<(usize, usize)> =
            (0..8).flat_map(|u| (0..3).map(move |b| (u, u ^ 1 << b))).filter(|(u, v)| u < v).collect();
        SimpleGraph::new(names, &edges).expect("simple")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families() {
        for (g, n, m) in [
            (SimpleGraph::k4(), 4, 6),
            (SimpleGraph::k33(), 6, 9),
            (SimpleGraph::prism(), 6, 9),
            (SimpleGraph::cube(), 8, 12),
        ] {
            assert_eq!((g.len(), g.edges().len()), (n, m));
            assert!(g.is_regular(3));
        }
        assert_eq!(SimpleGraph::path(3).edges(), vec![(0, 1), (1, 2)]);
        assert_eq!(SimpleGraph::cycle(4).edges().len(), 4);
    }

    #[test]
    fn rejects_non_simple() {
        let names = vec!["a".to_string(), "b".to_string()];
        assert!(matches!(SimpleGraph::new(names.clone(), &[(0, 0)]), Err(GraphError::SelfLoop(_))));
        assert!(matches!(SimpleGraph::new(names.clone(), &[(0, 1), (1, 0)]), Err(GraphError::ParallelEdge(..))));
        assert!(matches!(SimpleGraph::new(names, &[(0, 5)]), Err(GraphError::UnknownVertex(_))));
    }

    #[test]
    fn closed_neighborhoods() {
        let k4 = SimpleGraph::k4();
        assert_eq!(k4.closed_neighborhood(2), vec![0, 1, 2, 3]);
        let q = SimpleGraph::cube();
        assert_eq!(q.closed_neighborhood(0), vec![0, 1, 2, 4]);
    }
}

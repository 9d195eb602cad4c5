use thiserror::Error;

use super::ExactCoverInstance;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ColoringError {
    #[error("coloring has {got} entries for {expected} elements")]
    WrongLength { expected: usize, got: usize },
    #[error("elements {a} and {b} share set {set} and color {color}")]
    Conflict { set: usize, a: usize, b: usize, color: usize },
}

/// A color per universe element, numbered from 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    colors: Vec<usize>,
    count: usize,
}

impl Coloring {
    /// Checks that no family set holds two elements of one color.
    pub fn new(inst: &ExactCoverInstance, colors: Vec<usize>) -> Result<Self, ColoringError> {
        if colors.len() != inst.universe().len() {
            return Err(ColoringError::WrongLength { expected: inst.universe().len(), got: colors.len() });
        }
        let count = colors.iter().map(|&c| c + 1).max().unwrap_or(0);
        let out = Coloring { colors, count };
        match out.conflict(inst) {
            Some((set, a, b)) => Err(ColoringError::Conflict { set, a, b, color: out.colors[a] }),
            None => Ok(out),
        }
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn color(&self, element: usize) -> usize {
        self.colors[element]
    }

    /// Number of colors, counting unused ones below the largest.
    pub fn count(&self) -> usize {
        self.count
    }

    /// First `(set, a, b)` with two same-colored elements in one set.
    pub fn conflict(&self, inst: &ExactCoverInstance) -> Option<(usize, usize, usize)> {
        for (s, set) in inst.family().iter().enumerate() {
            for (i, &a) in set.iter().enumerate() {
                for &b in &set[i + 1..] {
                    if self.colors[a] == self.colors[b] {
                        return Some((s, a, b));
                    }
                }
            }
        }
        None
    }

    /// Labels `1..=|U|` assigned in order of (color, element index).
    pub fn labels(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.colors.len()).collect();
        order.sort_by_key(|&e| (self.colors[e], e));
        let mut labels = vec![0; self.colors.len()];
        for (rank, e) in order.into_iter().enumerate() {
            labels[e] = rank + 1;
        }
        labels
    }

    /// Elements of each color.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.count];
        for (e, &c) in self.colors.iter().enumerate() {
            out[c].push(e);
        }
        out
    }
}

/// Greedy coloring of the conflict graph (elements adjacent iff they share a
/// family set), elements taken in index order, smallest free color first.
pub fn color_hypergraph(inst: &ExactCoverInstance) -> Coloring {
    let n = inst.universe().len();
    let mut adj = vec![Vec::new(); n];
    for set in inst.family() {
        for (i, &a) in set.iter().enumerate() {
            for &b in &set[i + 1..] {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
    }
    let mut colors = vec![usize::MAX; n];
    for e in 0..n {
        let mut used: Vec<usize> = adj[e].iter().map(|&x| colors[x]).filter(|&c| c != usize::MAX).collect();
        used.sort_unstable();
        used.dedup();
        colors[e] = (0..).find(|c| used.binary_search(c).is_err()).expect("unbounded");
    }
    let count = colors.iter().map(|&c| c + 1).max().unwrap_or(0);
    Coloring { colors, count }
}

#[cfg(test)]
mod tests {
    use super::super::Cover;
    use super::*;

    #[test]
    fn single_triple_needs_three_colors() {
        let c = Cover::new(vec![0]).unwrap();
        let inst = ExactCoverInstance::new(vec!["a".into(), "b".into(), "c".into()], vec![vec![0, 1, 2]], c.clone(), c)
            .unwrap();
        let col = color_hypergraph(&inst);
        assert_eq!(col.count(), 3);
        assert_eq!(col.conflict(&inst), None);
        assert_eq!(col.labels(), vec![1, 2, 3]);
        assert!(matches!(Coloring::new(&inst, vec![0, 0, 1]), Err(ColoringError::Conflict { set: 0, a: 0, b: 1, .. })));
    }

    #[test]
    fn labels_group_by_color() {
        let c = Cover::new(vec![0, 1]).unwrap();
        let inst = ExactCoverInstance::new(
            vec!["a".into(), "b".into(), "c".into(), "d".into()],
            vec![vec![0, 1], vec![2, 3]],
            c.clone(),
            c,
        )
        .unwrap();
        let col = color_hypergraph(&inst);
        assert_eq!(col.colors(), &[0, 1, 0, 1]);
        assert_eq!(col.labels(), vec![1, 3, 2, 4]);
        assert_eq!(col.classes(), vec![vec![0, 2], vec![1, 3]]);
    }
}

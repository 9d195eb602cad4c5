//! Paths on the hypercube `{0,1}^n` restricted to an integer polytope
//! `lower ≤ A·x ≤ upper`, and the tuple construction from many-way exact
//! cover.

use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

use crate::exactcover::{Coloring, Cover, ExactCoverInstance};
use crate::statespace::{encoding, Endpoint, ReconfigurationSpace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HypercubeError {
    #[error("expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("start vertex lies outside the polytope")]
    OutsideStart,
    #[error("{0} vertex lies outside the polytope")]
    OutsideEndpoint(Endpoint),
    #[error("row {0} has lower bound above upper bound")]
    EmptyRow(usize),
    #[error("row {0} sum overflows")]
    Overflow(usize),
    #[error("index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("coloring is invalid for the instance")]
    InvalidColoring,
    #[error("sets {0} and {1} produce the same tuple")]
    DuplicateTuple(usize, usize),
}

/// A 0/1 vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex(FixedBitSet);

impl Vertex {
    pub fn zeros(n: usize) -> Self {
        Vertex(FixedBitSet::with_capacity(n))
    }

    pub fn from_ones(n: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut b = FixedBitSet::with_capacity(n);
        ones.into_iter().for_each(|i| b.insert(i));
        Vertex(b)
    }

    /// Parses a string of `0`/`1` characters.
    pub fn from_bits(s: &str) -> Option<Self> {
        let mut b = FixedBitSet::with_capacity(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => b.insert(i),
                _ => return None,
            }
        }
        Some(Vertex(b))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.0.contains(i)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn flipped(&self, i: usize) -> Vertex {
        let mut b = self.0.clone();
        b.toggle(i);
        Vertex(b)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolytopeInstance {
    rows: usize,
    /// Nonzero `(row, value)` entries of each column.
    columns: Vec<Vec<(usize, u64)>>,
    lower: Vec<u64>,
    upper: Vec<u64>,
    pub start: Vertex,
    pub goal: Vertex,
}

impl PolytopeInstance {
    /// `columns[i]` is the dense `d`-vector of item `i`.
    pub fn new(
        columns: Vec<Vec<u64>>,
        lower: Vec<u64>,
        upper: Vec<u64>,
        start: Vertex,
        goal: Vertex,
    ) -> Result<Self, HypercubeError> {
        let rows = lower.len();
        if upper.len() != rows {
            return Err(HypercubeError::DimensionMismatch { expected: rows, got: upper.len() });
        }
        if let Some(r) = (0..rows).find(|&r| lower[r] > upper[r]) {
            return Err(HypercubeError::EmptyRow(r));
        }
        let mut sparse = Vec::with_capacity(columns.len());
        let mut totals = vec![0u64; rows];
        for col in columns {
            if col.len() != rows {
                return Err(HypercubeError::DimensionMismatch { expected: rows, got: col.len() });
            }
            let entries: Vec<(usize, u64)> = col.into_iter().enumerate().filter(|&(_, v)| v != 0).collect();
            for &(r, v) in &entries {
                totals[r] = totals[r].checked_add(v).ok_or(HypercubeError::Overflow(r))?;
            }
            sparse.push(entries);
        }
        // rows whose upper bound can bind go first so additions fail fast
        for col in &mut sparse {
            col.sort_by_key(|&(r, _)| (upper[r] >= totals[r], r));
        }
        let p = PolytopeInstance { rows, columns: sparse, lower, upper, start, goal };
        for (v, which) in [(&p.start, Endpoint::Start), (&p.goal, Endpoint::Goal)] {
            if !is_inside(&p, v)? {
                return Err(HypercubeError::OutsideEndpoint(which));
            }
        }
        Ok(p)
    }

    /// Number of items, the hypercube dimension.
    pub fn n(&self) -> usize {
        self.columns.len()
    }

    /// Number of constraint rows.
    pub fn d(&self) -> usize {
        self.rows
    }

    pub fn lower(&self) -> &[u64] {
        &self.lower
    }

    pub fn upper(&self) -> &[u64] {
        &self.upper
    }

    pub fn column(&self, i: usize) -> Vec<u64> {
        let mut dense = vec![0; self.rows];
        self.columns[i].iter().for_each(|&(r, v)| dense[r] = v);
        dense
    }

    /// `Σ` of each row over all items, the attainable maximum.
    pub fn row_totals(&self) -> Vec<u64> {
        let mut t = vec![0u64; self.rows];
        self.columns.iter().flatten().for_each(|&(r, v)| t[r] += v);
        t
    }

    fn check_len(&self, v: &Vertex) -> Result<(), HypercubeError> {
        if v.len() != self.n() {
            return Err(HypercubeError::DimensionMismatch { expected: self.n(), got: v.len() });
        }
        Ok(())
    }

    pub fn row_sums(&self, v: &Vertex) -> Result<Vec<u64>, HypercubeError> {
        self.check_len(v)?;
        let mut s = vec![0u64; self.rows];
        for i in v.ones() {
            self.columns[i].iter().for_each(|&(r, x)| s[r] += x);
        }
        Ok(s)
    }

    fn within(&self, sums: &[u64]) -> bool {
        sums.iter().zip(&self.lower).zip(&self.upper).all(|((s, lo), hi)| lo <= s && s <= hi)
    }
}

pub fn is_inside(p: &PolytopeInstance, v: &Vertex) -> Result<bool, HypercubeError> {
    let sums = p.row_sums(v)?;
    Ok(p.within(&sums))
}

/// Single-coordinate flips of `v` that stay inside the polytope.
pub fn cube_neighbors(p: &PolytopeInstance, v: &Vertex) -> Result<Vec<usize>, HypercubeError> {
    let sums = p.row_sums(v)?;
    if !p.within(&sums) {
        return Err(HypercubeError::OutsideStart);
    }
    Ok((0..p.n())
        .filter(|&i| {
            let adding = !v.get(i);
            p.columns[i].iter().all(|&(r, x)| {
                let s = if adding { sums[r] + x } else { sums[r] - x };
                p.lower[r] <= s && s <= p.upper[r]
            })
        })
        .collect())
}

pub struct HypercubeSpace<'a> {
    p: &'a PolytopeInstance,
}

impl<'a> HypercubeSpace<'a> {
    pub fn new(p: &'a PolytopeInstance) -> Self {
        HypercubeSpace { p }
    }
}

impl ReconfigurationSpace for HypercubeSpace<'_> {
    type Config = Vertex;

    fn is_feasible(&self, v: &Vertex) -> bool {
        matches!(is_inside(self.p, v), Ok(true))
    }

    fn neighbors(&self, v: &Vertex) -> Vec<Vertex> {
        match cube_neighbors(self.p, v) {
            Ok(flips) => flips.into_iter().map(|i| v.flipped(i)).collect(),
            Err(_) => Vec::new(),
        }
    }

    fn encode(&self, v: &Vertex) -> Vec<u8> {
        encoding::bits((0..v.len()).map(|i| v.get(i)))
    }

    fn is_move(&self, from: &Vertex, to: &Vertex) -> bool {
        from.len() == to.len()
            && (0..from.len()).filter(|&i| from.get(i) != to.get(i)).count() == 1
            && self.is_feasible(from)
            && self.is_feasible(to)
    }
}

/// `A·x ≤ b` with each two-sided row split into `A_r·x ≤ upper_r` and
/// `−A_r·x ≤ −lower_r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxbForm {
    pub a: Vec<Vec<i128>>,
    pub b: Vec<i128>,
}

pub fn to_axb(p: &PolytopeInstance) -> AxbForm {
    let mut a = Vec::with_capacity(2 * p.d());
    let mut b = Vec::with_capacity(2 * p.d());
    for r in 0..p.d() {
        let row: Vec<i128> =
            (0..p.n()).map(|i| p.columns[i].iter().find(|e| e.0 == r).map_or(0, |e| e.1 as i128)).collect();
        b.push(p.upper[r] as i128);
        b.push(-(p.lower[r] as i128));
        a.push(row.clone());
        a.push(row.into_iter().map(|x| -x).collect());
    }
    AxbForm { a, b }
}

/// Dimension indices for `c` colors (0-based color `j`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DimensionLayout {
    pub colors: usize,
}

impl DimensionLayout {
    pub fn plus(&self, j: usize) -> usize {
        3 * j
    }

    pub fn minus(&self, j: usize) -> usize {
        3 * j + 1
    }

    pub fn count(&self, j: usize) -> usize {
        3 * j + 2
    }

    pub fn key(&self) -> usize {
        3 * self.colors
    }

    pub fn dims(&self) -> usize {
        3 * self.colors + 1
    }
}

/// Vector of element with 1-based label `i` and 1-based color `j`:
/// `i` in `plus_j`, `|U|+1−i` in `minus_j`, 1 in `count_j`.
pub fn f_uni(i: usize, j: usize, universe: usize, colors: usize) -> Result<Vec<u64>, HypercubeError> {
    if i == 0 || i > universe {
        return Err(HypercubeError::IndexOutOfRange(i));
    }
    if j == 0 || j > colors {
        return Err(HypercubeError::IndexOutOfRange(j));
    }
    let l = DimensionLayout { colors };
    let mut v = vec![0u64; l.dims()];
    v[l.plus(j - 1)] = i as u64;
    v[l.minus(j - 1)] = (universe + 1 - i) as u64;
    v[l.count(j - 1)] = 1;
    Ok(v)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypercubeReduction {
    pub polytope: PolytopeInstance,
    pub layout: DimensionLayout,
    /// Number of family sets; items `0..m` are set tuples, `m..2m` key tuples.
    pub sets: usize,
    pub labels: Vec<usize>,
}

impl HypercubeReduction {
    pub fn set_item(&self, s: usize) -> usize {
        s
    }

    pub fn key_item(&self, s: usize) -> usize {
        self.sets + s
    }

    /// Characteristic vector of the set tuples of `c`.
    pub fn f_fig(&self, c: &Cover) -> Vertex {
        Vertex::from_ones(2 * self.sets, c.sets().iter().copied())
    }

    /// Selected set tuples and selected key tuples, as family indices.
    pub fn decode(&self, v: &Vertex) -> (Vec<usize>, Vec<usize>) {
        let (sets, keys): (Vec<usize>, Vec<usize>) = v.ones().partition(|&i| i < self.sets);
        (sets, keys.into_iter().map(|i| i - self.sets).collect())
    }

    pub fn key_count(&self, v: &Vertex) -> usize {
        v.ones().filter(|&i| i >= self.sets).count()
    }

    /// The cover selected by a vertex without key tuples.
    pub fn cover_of(&self, v: &Vertex) -> Option<Cover> {
        let (sets, keys) = self.decode(v);
        keys.is_empty().then(|| Cover::new(sets).expect("distinct"))
    }
}

pub fn reduce_manyway_to_hypercube(
    inst: &ExactCoverInstance,
    coloring: &Coloring,
) -> Result<HypercubeReduction, HypercubeError> {
    if coloring.colors().len() != inst.universe().len() || coloring.conflict(inst).is_some() {
        return Err(HypercubeError::InvalidColoring);
    }
    let u = inst.universe().len();
    let c = coloring.count();
    let layout = DimensionLayout { colors: c };
    let labels = coloring.labels();
    let uni: Vec<Vec<u64>> = (0..u).map(|a| f_uni(labels[a], coloring.color(a) + 1, u, c)).collect::<Result<_, _>>()?;

    let m = inst.family().len();
    let set_tuples: Vec<Vec<u64>> = inst
        .family()
        .iter()
        .map(|s| {
            let mut t = vec![0u64; layout.dims()];
            for &a in s {
                t.iter_mut().zip(&uni[a]).for_each(|(x, y)| *x += y);
            }
            t
        })
        .collect();
    for i in 0..m {
        for j in i + 1..m {
            if set_tuples[i] == set_tuples[j] {
                return Err(HypercubeError::DuplicateTuple(i, j));
            }
        }
    }
    let key_tuples: Vec<Vec<u64>> = set_tuples
        .iter()
        .map(|t| {
            let mut k = t.clone();
            (0..c).for_each(|j| k[layout.count(j)] = 0);
            k[layout.key()] = 1;
            k
        })
        .collect();

    let mut lower = vec![0u64; layout.dims()];
    let mut upper = vec![0u64; layout.dims()];
    for (j, class) in coloring.classes().iter().enumerate() {
        lower[layout.plus(j)] = class.iter().map(|&a| labels[a] as u64).sum();
        lower[layout.minus(j)] = class.iter().map(|&a| (u + 1 - labels[a]) as u64).sum();
        upper[layout.count(j)] = class.len() as u64;
    }
    upper[layout.key()] = 1;
    // rows bounded only below get the attainable maximum as their upper bound
    let mut columns = set_tuples;
    columns.extend(key_tuples);
    for j in 0..c {
        for r in [layout.plus(j), layout.minus(j)] {
            upper[r] = columns.iter().map(|col| col[r]).sum::<u64>().max(lower[r]);
        }
    }
    let n = 2 * m;
    let start = Vertex::from_ones(n, inst.start.sets().iter().copied());
    let goal = Vertex::from_ones(n, inst.goal.sets().iter().copied());
    let polytope = PolytopeInstance::new(columns, lower, upper, start, goal)?;
    Ok(HypercubeReduction { polytope, layout, sets: m, labels })
}

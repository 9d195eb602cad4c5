//! Subset sum reconfiguration under k-moves, and the big-integer encoding of
//! exact cover into it.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::Zero;
use thiserror::Error;

use crate::exactcover::{Coloring, Cover, ExactCoverInstance};
use crate::statespace::{encoding, Endpoint, ReconfigurationSpace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubsetSumError {
    #[error("index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("selection lists index {0} twice")]
    RepeatedIndex(usize),
    #[error("{0} selection does not sum to the target")]
    WrongSum(Endpoint),
    #[error("selection does not sum to the target")]
    WrongStartSum,
    #[error("k must be at least 1")]
    ZeroK,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("coloring is invalid for the instance")]
    InvalidColoring,
    #[error("sets {0} and {1} encode to the same value")]
    NotInjective(usize, usize),
}

/// Sorted, distinct item indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Selection(Vec<usize>);

impl Selection {
    pub fn new(mut items: Vec<usize>) -> Result<Self, SubsetSumError> {
        items.sort_unstable();
        if let Some(w) = items.windows(2).find(|w| w[0] == w[1]) {
            return Err(SubsetSumError::RepeatedIndex(w[0]));
        }
        Ok(Selection(items))
    }

    pub fn items(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetSumInstance {
    values: Vec<BigUint>,
    target: BigUint,
    pub start: Selection,
    pub goal: Selection,
    by_value: HashMap<BigUint, Vec<usize>>,
}

impl SubsetSumInstance {
    pub fn new(
        values: Vec<BigUint>,
        target: BigUint,
        start: Selection,
        goal: Selection,
    ) -> Result<Self, SubsetSumError> {
        let mut by_value: HashMap<BigUint, Vec<usize>> = HashMap::new();
        for (i, v) in values.iter().enumerate() {
            by_value.entry(v.clone()).or_default().push(i);
        }
        let inst = SubsetSumInstance { values, target, start, goal, by_value };
        for (s, which) in [(&inst.start, Endpoint::Start), (&inst.goal, Endpoint::Goal)] {
            if inst.sum(s)? != inst.target {
                return Err(SubsetSumError::WrongSum(which));
            }
        }
        Ok(inst)
    }

    pub fn values(&self) -> &[BigUint] {
        &self.values
    }

    pub fn target(&self) -> &BigUint {
        &self.target
    }

    pub fn sum(&self, s: &Selection) -> Result<BigUint, SubsetSumError> {
        let mut total = BigUint::zero();
        for &i in &s.0 {
            total += self.values.get(i).ok_or(SubsetSumError::IndexOutOfRange(i))?;
        }
        Ok(total)
    }

    /// Total length of all values and the target written in unary.
    pub fn unary_size(&self) -> BigUint {
        self.values.iter().sum::<BigUint>() + &self.target
    }

    /// Largest bit length among values and target.
    pub fn max_bits(&self) -> u64 {
        self.values.iter().chain([&self.target]).map(|v| v.bits()).max().unwrap_or(0)
    }
}

/// Index sets at symmetric difference at most `k` from `a` with the same sum.
pub fn k_move_neighbors(inst: &SubsetSumInstance, a: &Selection, k: usize) -> Result<Vec<Selection>, SubsetSumError> {
    if k == 0 {
        return Err(SubsetSumError::ZeroK);
    }
    if inst.sum(a)? != inst.target {
        return Err(SubsetSumError::WrongStartSum);
    }
    let outside: Vec<usize> = (0..inst.values.len()).filter(|&i| !a.contains(i)).collect();
    let mut out = Vec::new();
    let mut removed = Vec::new();
    for r in 0..=k.min(a.len()) {
        for_each_combination(&a.0, r, &mut removed, &mut |rem| {
            let s: BigUint = rem.iter().map(|&i| &inst.values[i]).sum();
            for d in 0..=k - r {
                if r + d == 0 {
                    continue;
                }
                let mut added = Vec::new();
                additions_summing(inst, a, &outside, d, &s, &mut added, &mut |add| {
                    let mut b: Vec<usize> = a.0.iter().copied().filter(|i| !rem.contains(i)).collect();
                    b.extend_from_slice(add);
                    b.sort_unstable();
                    out.push(Selection(b));
                });
            }
        });
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn for_each_combination(items: &[usize], size: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
    if cur.len() == size {
        f(cur);
        return;
    }
    let start = match cur.last() {
        Some(&last) => items.partition_point(|&x| x <= last),
        None => 0,
    };
    for i in start..items.len() {
        if items.len() - i < size - cur.len() {
            break;
        }
        cur.push(items[i]);
        for_each_combination(items, size, cur, f);
        cur.pop();
    }
}

/// Increasing index tuples of size `d` from `outside` with sum `s`; the last
/// index is found through the value table.
fn additions_summing(
    inst: &SubsetSumInstance,
    a: &Selection,
    outside: &[usize],
    d: usize,
    s: &BigUint,
    cur: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]),
) {
    if d == 0 {
        if s.is_zero() {
            f(cur);
        }
        return;
    }
    if cur.len() + 1 == d {
        let partial: BigUint = cur.iter().map(|&i| &inst.values[i]).sum();
        if partial > *s {
            return;
        }
        let rest = s - partial;
        let after = cur.last().copied();
        if let Some(idx) = inst.by_value.get(&rest) {
            for &j in idx {
                if after.is_none_or(|l| j > l) && !a.contains(j) {
                    cur.push(j);
                    f(cur);
                    cur.pop();
                }
            }
        }
        return;
    }
    let partial: BigUint = cur.iter().map(|&i| &inst.values[i]).sum();
    let start = match cur.last() {
        Some(&last) => outside.partition_point(|&x| x <= last),
        None => 0,
    };
    for &j in &outside[start..] {
        if &partial + &inst.values[j] > *s {
            continue;
        }
        cur.push(j);
        additions_summing(inst, a, outside, d, s, cur, f);
        cur.pop();
    }
}

pub struct KMoveSpace<'a> {
    inst: &'a SubsetSumInstance,
    k: usize,
}

impl<'a> KMoveSpace<'a> {
    pub fn new(inst: &'a SubsetSumInstance, k: usize) -> Result<Self, SubsetSumError> {
        if k == 0 {
            return Err(SubsetSumError::ZeroK);
        }
        Ok(KMoveSpace { inst, k })
    }
}

impl ReconfigurationSpace for KMoveSpace<'_> {
    type Config = Selection;

    fn is_feasible(&self, s: &Selection) -> bool {
        self.inst.sum(s).is_ok_and(|v| v == self.inst.target)
    }

    fn neighbors(&self, s: &Selection) -> Vec<Selection> {
        k_move_neighbors(self.inst, s, self.k).unwrap_or_default()
    }

    fn encode(&self, s: &Selection) -> Vec<u8> {
        encoding::index_set(&s.0)
    }

    fn is_move(&self, from: &Selection, to: &Selection) -> bool {
        let diff =
            from.0.iter().filter(|i| !to.contains(**i)).count() + to.0.iter().filter(|i| !from.contains(**i)).count();
        (1..=self.k).contains(&diff) && self.is_feasible(from) && self.is_feasible(to)
    }
}

/// Per-color shift `p`: color `j` (1-based) element with label `i` encodes
/// to `i · 2^{j·p}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EncodingParams {
    pub universe: usize,
    pub colors: usize,
    pub padding: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EncodingMode {
    /// `p = 100·⌈log₂|U|⌉`.
    Wide,
    /// User-chosen `p`, checked for injectivity before use.
    Compact(u64),
}

fn ceil_log2(n: usize) -> u64 {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as u64
    }
}

impl EncodingParams {
    pub fn wide(universe: usize, colors: usize) -> Self {
        EncodingParams { universe, colors, padding: 100 * ceil_log2(universe) }
    }

    pub fn compact(universe: usize, colors: usize, padding: u64) -> Self {
        EncodingParams { universe, colors, padding }
    }

    pub fn for_mode(mode: EncodingMode, universe: usize, colors: usize) -> Self {
        match mode {
            EncodingMode::Wide => Self::wide(universe, colors),
            EncodingMode::Compact(p) => Self::compact(universe, colors, p),
        }
    }
}

/// `i · 2^{j·p}` for 1-based label `i` and color `j`.
pub fn encode_element(i: usize, j: usize, params: &EncodingParams) -> Result<BigUint, SubsetSumError> {
    if i == 0 || i > params.universe {
        return Err(SubsetSumError::IndexOutOfRange(i));
    }
    if j == 0 || j > params.colors {
        return Err(SubsetSumError::IndexOutOfRange(j));
    }
    Ok(BigUint::from(i) << (j as u64 * params.padding))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InjectivityCheck {
    pub injective: bool,
    /// Two family indices with equal encodings.
    pub witness: Option<(usize, usize)>,
}

/// Compares `g(S) = Σ_{a∈S} f(a)` over all family pairs.
pub fn verify_injectivity(family: &[Vec<usize>], f: impl Fn(usize) -> BigUint) -> InjectivityCheck {
    let g: Vec<BigUint> = family.iter().map(|s| s.iter().map(|&a| f(a)).sum()).collect();
    for i in 0..g.len() {
        for j in i + 1..g.len() {
            if g[i] == g[j] {
                return InjectivityCheck { injective: false, witness: Some((i, j)) };
            }
        }
    }
    InjectivityCheck { injective: true, witness: None }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetSumReduction {
    pub instance: SubsetSumInstance,
    pub params: EncodingParams,
    /// `f(a)` per universe element.
    pub element_values: Vec<BigUint>,
    pub labels: Vec<usize>,
    /// Color of each element, 1-based.
    pub colors: Vec<usize>,
}

impl SubsetSumReduction {
    /// Item `i` of the output is family set `i`, so covers and selections share indices.
    pub fn selection_of(&self, c: &Cover) -> Selection {
        Selection(c.sets().to_vec())
    }

    pub fn cover_of(&self, s: &Selection) -> Cover {
        Cover::new(s.0.clone()).expect("selection indices are distinct")
    }

    /// For every color `j`, the sum of all lower-color element values is
    /// below the smallest color-`j` value.
    pub fn color_separation_holds(&self) -> bool {
        let top = self.colors.iter().copied().max().unwrap_or(0);
        (1..=top).all(|j| {
            let below: BigUint =
                (0..self.colors.len()).filter(|&a| self.colors[a] < j).map(|a| &self.element_values[a]).sum();
            (0..self.colors.len()).filter(|&a| self.colors[a] == j).all(|a| below < self.element_values[a])
        })
    }
}

/// Element values `f(a)` and set values `g(S)` for the given 1-based labels
/// and colors, without checking the coloring.
pub fn encode_family(
    family: &[Vec<usize>],
    labels: &[usize],
    colors: &[usize],
    params: &EncodingParams,
) -> Result<(Vec<BigUint>, Vec<BigUint>), SubsetSumError> {
    let element_values =
        labels.iter().zip(colors).map(|(&i, &j)| encode_element(i, j, params)).collect::<Result<Vec<_>, _>>()?;
    let set_values = family.iter().map(|s| s.iter().map(|&a| &element_values[a]).sum()).collect();
    Ok((element_values, set_values))
}

pub fn reduce_exactcover_to_subsetsum(
    inst: &ExactCoverInstance,
    coloring: &Coloring,
    mode: EncodingMode,
) -> Result<SubsetSumReduction, SubsetSumError> {
    if inst.family().is_empty() {
        return Err(SubsetSumError::InvalidInput("empty family".into()));
    }
    if coloring.colors().len() != inst.universe().len() || coloring.conflict(inst).is_some() {
        return Err(SubsetSumError::InvalidColoring);
    }
    let params = EncodingParams::for_mode(mode, inst.universe().len(), coloring.count());
    let labels = coloring.labels();
    let colors: Vec<usize> = coloring.colors().iter().map(|c| c + 1).collect();
    let (element_values, values) = encode_family(inst.family(), &labels, &colors, &params)?;
    let check = verify_injectivity(inst.family(), |a| element_values[a].clone());
    if let Some((i, j)) = check.witness {
        return Err(SubsetSumError::NotInjective(i, j));
    }
    let target: BigUint = element_values.iter().sum();
    let instance = SubsetSumInstance::new(
        values,
        target,
        Selection(inst.start.sets().to_vec()),
        Selection(inst.goal.sets().to_vec()),
    )?;
    Ok(SubsetSumReduction { instance, params, element_values, labels, colors })
}

/// Smallest padding for which compact mode is injective on this family.
pub fn minimal_compact_padding(inst: &ExactCoverInstance, coloring: &Coloring) -> u64 {
    let labels = coloring.labels();
    (0..)
        .find(|&p| {
            let params = EncodingParams::compact(inst.universe().len(), coloring.count(), p);
            verify_injectivity(inst.family(), |a| {
                encode_element(labels[a], coloring.color(a) + 1, &params).expect("in range")
            })
            .injective
        })
        .expect("large padding is injective")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pow2(n: u64) -> BigUint {
        BigUint::from(1u32) << n
    }

    fn big(v: &[u64]) -> Vec<BigUint> {
        v.iter().map(|&x| BigUint::from(x)).collect()
    }

    fn sel(v: &[usize]) -> Selection {
        Selection::new(v.to_vec()).unwrap()
    }

    #[test]
    fn three_move_examples() {
        let inst = SubsetSumInstance::new(big(&[1, 2, 3]), 3u32.into(), sel(&[2]), sel(&[2])).unwrap();
        assert_eq!(k_move_neighbors(&inst, &sel(&[2]), 3).unwrap(), vec![sel(&[0, 1])]);
        let inst = SubsetSumInstance::new(big(&[1, 1, 2]), 2u32.into(), sel(&[2]), sel(&[2])).unwrap();
        assert!(k_move_neighbors(&inst, &sel(&[2]), 3).unwrap().contains(&sel(&[0, 1])));
        assert_eq!(k_move_neighbors(&inst, &sel(&[0]), 3), Err(SubsetSumError::WrongStartSum));
    }

    #[test]
    fn two_moves_only_swap_equal_values() {
        let inst = SubsetSumInstance::new(big(&[1, 1, 2]), 2u32.into(), sel(&[2]), sel(&[2])).unwrap();
        assert!(k_move_neighbors(&inst, &sel(&[2]), 2).unwrap().is_empty());
        let inst = SubsetSumInstance::new(big(&[5, 5, 3]), 8u32.into(), sel(&[0, 2]), sel(&[0, 2])).unwrap();
        assert_eq!(k_move_neighbors(&inst, &sel(&[0, 2]), 2).unwrap(), vec![sel(&[1, 2])]);
    }

    #[test]
    fn encoding_examples() {
        let p = EncodingParams::wide(2, 1);
        assert_eq!(p.padding, 100);
        assert_eq!(encode_element(1, 1, &p).unwrap(), pow2(100));
        assert_eq!(encode_element(2, 1, &p).unwrap(), pow2(101));
        let c = EncodingParams::compact(3, 2, 8);
        assert_eq!(encode_element(3, 2, &c).unwrap(), BigUint::from(3u32) << 16u32);
        assert_eq!(encode_element(0, 1, &p), Err(SubsetSumError::IndexOutOfRange(0)));
        assert_eq!(encode_element(1, 2, &p), Err(SubsetSumError::IndexOutOfRange(2)));
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(5), 3);
        assert_eq!(ceil_log2(8), 3);
    }

    #[test]
    fn constant_encoding_collides() {
        let r = verify_injectivity(&[vec![0], vec![1]], |_| BigUint::from(1u32));
        assert_eq!(r, InjectivityCheck { injective: false, witness: Some((0, 1)) });
    }

    #[test]
    fn two_element_encoding() {
        use crate::exactcover::{Coloring, ExactCoverInstance};
        let family = vec![vec![0], vec![1], vec![0, 1]];
        let params = EncodingParams::wide(2, 1);
        let (f, g) = encode_family(&family, &[1, 2], &[1, 1], &params).unwrap();
        assert_eq!(g, vec![pow2(100), pow2(101), BigUint::from(3u32) << 100u32]);
        assert_eq!(f.iter().sum::<BigUint>(), BigUint::from(3u32) << 100u32);

        // one color for both is not a proper coloring here, so the reduction refuses it
        let c = Cover::new(vec![2]).unwrap();
        let inst = ExactCoverInstance::new(vec!["a1".into(), "a2".into()], family, c.clone(), c).unwrap();
        assert!(Coloring::new(&inst, vec![0, 0]).is_err());
        let greedy = crate::exactcover::color_hypergraph(&inst);
        let r = reduce_exactcover_to_subsetsum(&inst, &greedy, EncodingMode::Wide).unwrap();
        assert_eq!(r.instance.values().len(), 3);
        assert!(r.color_separation_holds());
        assert_eq!(r.instance.sum(&r.instance.start).unwrap(), *r.instance.target());
    }

    #[test]
    fn empty_family_is_rejected() {
        use crate::exactcover::{color_hypergraph, ExactCoverInstance};
        let e = Cover::new(vec![]).unwrap();
        let inst = ExactCoverInstance::new(vec![], vec![], e.clone(), e).unwrap();
        let col = color_hypergraph(&inst);
        assert!(matches!(
            reduce_exactcover_to_subsetsum(&inst, &col, EncodingMode::Wide),
            Err(SubsetSumError::InvalidInput(_))
        ));
    }

    proptest! {
        #[test]
        fn moves_conserve_sum_and_reverse(values in prop::collection::vec(1u64..6, 1..8), mask in any::<u16>(), k in 1usize..=4) {
            let n = values.len();
            let a: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let target: u64 = a.iter().map(|&i| values[i]).sum();
            let inst = SubsetSumInstance::new(big(&values), target.into(), sel(&a), sel(&a)).unwrap();
            let nb = k_move_neighbors(&inst, &sel(&a), k).unwrap();
            // oracle: every subset with the right sum and symmetric difference ≤ k
            let mut expected = Vec::new();
            for m in 0u32..1 << n {
                let b: Vec<usize> = (0..n).filter(|i| m >> i & 1 == 1).collect();
                let diff = b.iter().filter(|i| !a.contains(i)).count() + a.iter().filter(|i| !b.contains(i)).count();
                let s: u64 = b.iter().map(|&i| values[i]).sum();
                if diff >= 1 && diff <= k && s == target {
                    expected.push(sel(&b));
                }
            }
            expected.sort();
            prop_assert_eq!(&nb, &expected);
            for b in &nb {
                prop_assert!(k_move_neighbors(&inst, b, k).unwrap().contains(&sel(&a)));
            }
        }
    }
}

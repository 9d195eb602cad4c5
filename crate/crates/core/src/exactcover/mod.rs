//! Exact covers reconfigured by split/merge (two-way) or partition/union
//! (many-way) moves.

mod coloring;
mod from_tokens;

use std::collections::{BTreeSet, HashMap};
use std::sync::OnceLock;

use thiserror::Error;

use crate::statespace::{encoding, Endpoint, ReconfigurationSpace};

pub use coloring::{color_hypergraph, Coloring, ColoringError};
pub use from_tokens::{reduce_tokens_to_exactcover, slide_set, SlideSet, TokenReduction, TokenReductionError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactCoverError {
    #[error("set {0} is empty")]
    EmptySet(usize),
    #[error("sets {0} and {1} are equal")]
    DuplicateSet(usize, usize),
    #[error("set {set} references unknown element {element}")]
    UnknownElement { set: usize, element: usize },
    #[error("duplicate element name `{0}`")]
    DuplicateElementName(String),
    #[error("unknown set reference {0}")]
    UnknownSetReference(usize),
    #[error("cover lists set {0} twice")]
    RepeatedSet(usize),
    #[error("configuration is not an exact cover")]
    NotExactCover,
    #[error("{0} cover is not exact")]
    InexactEndpoint(Endpoint),
}

/// Family indices, sorted and distinct.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cover(Vec<usize>);

impl Cover {
    pub fn new(mut sets: Vec<usize>) -> Result<Self, ExactCoverError> {
        sets.sort_unstable();
        if let Some(w) = sets.windows(2).find(|w| w[0] == w[1]) {
            return Err(ExactCoverError::RepeatedSet(w[0]));
        }
        Ok(Cover(sets))
    }

    pub fn sets(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, set: usize) -> bool {
        self.0.binary_search(&set).is_ok()
    }

    /// Replaces `removed` by `added`.
    fn replaced(&self, removed: &[usize], added: &[usize]) -> Cover {
        let mut v: Vec<usize> = self.0.iter().copied().filter(|s| !removed.contains(s)).collect();
        v.extend_from_slice(added);
        v.sort_unstable();
        Cover(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MoveKind {
    /// One set replaced by two, or two by one.
    SplitMerge,
    /// One set replaced by any number ≥ 2 of sets, or the inverse.
    PartitionUnion,
}

#[derive(Debug, Clone)]
pub struct ExactCoverInstance {
    universe: Vec<String>,
    family: Vec<Vec<usize>>,
    pub start: Cover,
    pub goal: Cover,
    index: HashMap<Vec<usize>, usize>,
    containing: Vec<Vec<usize>>,
    partitions: OnceLock<Vec<Vec<Vec<usize>>>>,
}

impl PartialEq for ExactCoverInstance {
    fn eq(&self, other: &Self) -> bool {
        (&self.universe, &self.family, &self.start, &self.goal)
            == (&other.universe, &other.family, &other.start, &other.goal)
    }
}

impl Eq for ExactCoverInstance {}

impl ExactCoverInstance {
    pub fn new(
        universe: Vec<String>,
        family: Vec<Vec<usize>>,
        start: Cover,
        goal: Cover,
    ) -> Result<Self, ExactCoverError> {
        Self::without_endpoints(universe, family)?.with_endpoints(start, goal)
    }

    /// Validated universe and family; both endpoints are the empty cover.
    pub(crate) fn without_endpoints(universe: Vec<String>, family: Vec<Vec<usize>>) -> Result<Self, ExactCoverError> {
        for (i, n) in universe.iter().enumerate() {
            if universe[..i].contains(n) {
                return Err(ExactCoverError::DuplicateElementName(n.clone()));
            }
        }
        let mut index = HashMap::with_capacity(family.len());
        let mut containing = vec![Vec::new(); universe.len()];
        let mut sorted = Vec::with_capacity(family.len());
        for (i, s) in family.into_iter().enumerate() {
            let set: Vec<usize> = s.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
            if set.is_empty() {
                return Err(ExactCoverError::EmptySet(i));
            }
            if let Some(&e) = set.iter().find(|&&e| e >= universe.len()) {
                return Err(ExactCoverError::UnknownElement { set: i, element: e });
            }
            if let Some(&j) = index.get(&set) {
                return Err(ExactCoverError::DuplicateSet(j, i));
            }
            set.iter().for_each(|&e| containing[e].push(i));
            index.insert(set.clone(), i);
            sorted.push(set);
        }
        Ok(ExactCoverInstance {
            universe,
            family: sorted,
            start: Cover(vec![]),
            goal: Cover(vec![]),
            index,
            containing,
            partitions: OnceLock::new(),
        })
    }

    /// Same universe and family with different endpoints.
    pub fn with_endpoints(&self, start: Cover, goal: Cover) -> Result<Self, ExactCoverError> {
        for (c, which) in [(&start, Endpoint::Start), (&goal, Endpoint::Goal)] {
            if !is_exact_cover(self, c)? {
                return Err(ExactCoverError::InexactEndpoint(which));
            }
        }
        Ok(ExactCoverInstance {
            universe: self.universe.clone(),
            family: self.family.clone(),
            start,
            goal,
            index: self.index.clone(),
            containing: self.containing.clone(),
            partitions: self.partitions.clone(),
        })
    }

    pub fn universe(&self) -> &[String] {
        &self.universe
    }

    pub fn family(&self) -> &[Vec<usize>] {
        &self.family
    }

    pub fn set_index(&self, elements: &[usize]) -> Option<usize> {
        let key: Vec<usize> = elements.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
        self.index.get(&key).copied()
    }

    /// Family sets containing element `e`.
    pub fn sets_containing(&self, e: usize) -> &[usize] {
        &self.containing[e]
    }

    /// For each family set, every way to partition it into at least two
    /// other family sets (each partition sorted).
    pub fn partitions(&self) -> &[Vec<Vec<usize>>] {
        self.partitions.get_or_init(|| (0..self.family.len()).map(|s| self.partitions_of(s)).collect())
    }

    fn partitions_of(&self, s: usize) -> Vec<Vec<usize>> {
        let mut remaining = vec![false; self.universe.len()];
        self.family[s].iter().for_each(|&e| remaining[e] = true);
        let mut out = Vec::new();
        let mut parts = Vec::new();
        self.partition_rec(s, &mut remaining, self.family[s].len(), &mut parts, &mut out);
        out
    }

    fn partition_rec(
        &self,
        whole: usize,
        remaining: &mut [bool],
        left: usize,
        parts: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let Some(e) = remaining.iter().position(|&b| b) else {
            let mut p = parts.clone();
            p.sort_unstable();
            out.push(p);
            return;
        };
        for &f in &self.containing[e] {
            let set = &self.family[f];
            if f == whole || set.len() > left || !set.iter().all(|&x| remaining[x]) {
                continue;
            }
            set.iter().for_each(|&x| remaining[x] = false);
            parts.push(f);
            self.partition_rec(whole, remaining, left - set.len(), parts, out);
            parts.pop();
            set.iter().for_each(|&x| remaining[x] = true);
        }
    }

    /// Cover index (position in `c`) owning each element; `None` if `c` is not exact.
    fn owners(&self, c: &Cover) -> Option<Vec<usize>> {
        let mut owner = vec![usize::MAX; self.universe.len()];
        for (pos, &s) in c.0.iter().enumerate() {
            for &e in self.family.get(s)? {
                if owner[e] != usize::MAX {
                    return None;
                }
                owner[e] = pos;
            }
        }
        owner.iter().all(|&o| o != usize::MAX).then_some(owner)
    }
}

pub fn is_exact_cover(inst: &ExactCoverInstance, c: &Cover) -> Result<bool, ExactCoverError> {
    if let Some(&s) = c.0.iter().find(|&&s| s >= inst.family.len()) {
        return Err(ExactCoverError::UnknownSetReference(s));
    }
    Ok(inst.owners(c).is_some())
}

/// Covers one move away; `max_parts` bounds the number of sets on the many side.
fn neighbors_bounded(inst: &ExactCoverInstance, c: &Cover, max_parts: usize) -> Result<Vec<Cover>, ExactCoverError> {
    if !is_exact_cover(inst, c)? {
        return Err(ExactCoverError::NotExactCover);
    }
    let owner = inst.owners(c).expect("exact");
    let mut out = Vec::new();
    // partitions of a member
    for &s in &c.0 {
        for p in &inst.partitions()[s] {
            if p.len() <= max_parts {
                out.push(c.replaced(&[s], p));
            }
        }
    }
    // unions: a family set outside the cover that is exactly a union of members
    for (t, set) in inst.family.iter().enumerate() {
        if c.contains(t) {
            continue;
        }
        let mut parts: Vec<usize> = set.iter().map(|&e| owner[e]).collect();
        parts.sort_unstable();
        parts.dedup();
        if parts.len() > max_parts {
            continue;
        }
        let covered: usize = parts.iter().map(|&p| inst.family[c.0[p]].len()).sum();
        if covered == set.len() {
            let removed: Vec<usize> = parts.iter().map(|&p| c.0[p]).collect();
            out.push(c.replaced(&removed, &[t]));
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

pub fn split_merge_neighbors(inst: &ExactCoverInstance, c: &Cover) -> Result<Vec<Cover>, ExactCoverError> {
    neighbors_bounded(inst, c, 2)
}

pub fn manyway_neighbors(inst: &ExactCoverInstance, c: &Cover) -> Result<Vec<Cover>, ExactCoverError> {
    neighbors_bounded(inst, c, usize::MAX)
}

pub struct CoverSpace<'a> {
    inst: &'a ExactCoverInstance,
    kind: MoveKind,
}

impl<'a> CoverSpace<'a> {
    pub fn new(inst: &'a ExactCoverInstance, kind: MoveKind) -> Self {
        CoverSpace { inst, kind }
    }

    pub fn kind(&self) -> MoveKind {
        self.kind
    }
}

impl ReconfigurationSpace for CoverSpace<'_> {
    type Config = Cover;

    fn is_feasible(&self, c: &Cover) -> bool {
        matches!(is_exact_cover(self.inst, c), Ok(true))
    }

    fn neighbors(&self, c: &Cover) -> Vec<Cover> {
        let r = match self.kind {
            MoveKind::SplitMerge => split_merge_neighbors(self.inst, c),
            MoveKind::PartitionUnion => manyway_neighbors(self.inst, c),
        };
        r.unwrap_or_default()
    }

    fn encode(&self, c: &Cover) -> Vec<u8> {
        encoding::index_set(&c.0)
    }

    fn is_move(&self, from: &Cover, to: &Cover) -> bool {
        if !self.is_feasible(from) || !self.is_feasible(to) {
            return false;
        }
        let removed: Vec<usize> = from.0.iter().copied().filter(|s| !to.contains(*s)).collect();
        let added: Vec<usize> = to.0.iter().copied().filter(|s| !from.contains(*s)).collect();
        // both covers are exact, so removed and added sets cover the same elements
        let many = match (removed.len(), added.len()) {
            (1, n) | (n, 1) if n >= 2 => n,
            _ => return false,
        };
        match self.kind {
            MoveKind::SplitMerge => many == 2,
            MoveKind::PartitionUnion => true,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: usize) -> Vec<String> {
        (1..=n).map(|i| i.to_string()).collect()
    }

    /// U={1,2}, S={{1},{2},{1,2}}.
    fn tiny() -> ExactCoverInstance {
        let c = Cover::new(vec![2]).unwrap();
        ExactCoverInstance::new(names(2), vec![vec![0], vec![1], vec![0, 1]], c.clone(), c).unwrap()
    }

    #[test]
    fn exactness_examples() {
        let inst = tiny();
        assert!(is_exact_cover(&inst, &Cover::new(vec![0, 1]).unwrap()).unwrap());
        assert!(!is_exact_cover(&inst, &Cover::new(vec![0, 2]).unwrap()).unwrap());
        assert!(!is_exact_cover(&inst, &Cover::new(vec![0]).unwrap()).unwrap());
        assert_eq!(is_exact_cover(&inst, &Cover::new(vec![9]).unwrap()), Err(ExactCoverError::UnknownSetReference(9)));
    }

    #[test]
    fn split_and_merge_examples() {
        let inst = tiny();
        assert_eq!(
            split_merge_neighbors(&inst, &Cover::new(vec![2]).unwrap()).unwrap(),
            vec![Cover::new(vec![0, 1]).unwrap()]
        );
        assert_eq!(
            split_merge_neighbors(&inst, &Cover::new(vec![0, 1]).unwrap()).unwrap(),
            vec![Cover::new(vec![2]).unwrap()]
        );
        assert_eq!(split_merge_neighbors(&inst, &Cover::new(vec![0]).unwrap()), Err(ExactCoverError::NotExactCover));
    }

    #[test]
    fn three_way_partition_without_splits() {
        let whole = Cover::new(vec![3]).unwrap();
        let inst = ExactCoverInstance::new(
            names(3),
            vec![vec![0], vec![1], vec![2], vec![0, 1, 2]],
            whole.clone(),
            whole.clone(),
        )
        .unwrap();
        assert!(split_merge_neighbors(&inst, &whole).unwrap().is_empty());
        let singles = Cover::new(vec![0, 1, 2]).unwrap();
        assert_eq!(manyway_neighbors(&inst, &whole).unwrap(), vec![singles.clone()]);
        assert_eq!(manyway_neighbors(&inst, &singles).unwrap(), vec![whole]);
    }

    #[test]
    fn construction_checks() {
        let c = Cover::new(vec![0]).unwrap();
        assert_eq!(
            ExactCoverInstance::new(names(1), vec![vec![]], c.clone(), c.clone()),
            Err(ExactCoverError::EmptySet(0))
        );
        assert_eq!(
            ExactCoverInstance::new(names(1), vec![vec![0], vec![0]], c.clone(), c.clone()),
            Err(ExactCoverError::DuplicateSet(0, 1))
        );
        assert_eq!(
            ExactCoverInstance::new(names(2), vec![vec![0]], c.clone(), c.clone()),
            Err(ExactCoverError::InexactEndpoint(Endpoint::Start))
        );
        assert_eq!(Cover::new(vec![1, 1]), Err(ExactCoverError::RepeatedSet(1)));
    }

    /// Oracle for the relations: enumerate pairs (two-way) or all subfamilies
    /// (many-way) of the family and test the definitions directly.
    fn oracle(inst: &ExactCoverInstance, c: &Cover, kind: MoveKind) -> Vec<Cover> {
        let f = inst.family();
        let union = |sets: &[usize]| -> Option<Vec<usize>> {
            let mut all: Vec<usize> = sets.iter().flat_map(|&s| f[s].clone()).collect();
            let n = all.len();
            all.sort();
            all.dedup();
            (all.len() == n).then_some(all)
        };
        let mut out = Vec::new();
        let m = f.len();
        for mask in 1u64..1 << m {
            let group: Vec<usize> = (0..m).filter(|i| mask >> i & 1 == 1).collect();
            if group.len() < 2 || (kind == MoveKind::SplitMerge && group.len() != 2) {
                continue;
            }
            let Some(u) = union(&group) else { continue };
            let Some(t) = inst.set_index(&u) else { continue };
            // partition: t in cover, group replaces it; union: group in cover, t replaces it
            if c.contains(t) && group.iter().all(|s| !c.contains(*s)) {
                out.push(c.replaced(&[t], &group));
            }
            if !c.contains(t) && group.iter().all(|s| c.contains(*s)) {
                out.push(c.replaced(&group, &[t]));
            }
        }
        out.sort();
        out.dedup();
        out
    }

    #[test]
    fn neighbors_match_oracle_on_random_families() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut checked = 0;
        while checked < 60 {
            let n = rng.gen_range(2..=5);
            let mut family: Vec<Vec<usize>> = (0..n).map(|e| vec![e]).collect();
            for _ in 0..rng.gen_range(1..8) {
                let s: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
                if s.len() >= 2 && !family.contains(&s) {
                    family.push(s);
                }
            }
            let singles = Cover::new((0..n).collect()).unwrap();
            let inst = ExactCoverInstance::new(names(n), family, singles.clone(), singles.clone()).unwrap();
            let comp = crate::statespace::explore_component(
                &CoverSpace::new(&inst, MoveKind::PartitionUnion),
                &singles,
                crate::statespace::SearchLimits::default(),
            )
            .unwrap();
            for c in &comp.configs {
                let two = split_merge_neighbors(&inst, c).unwrap();
                let many = manyway_neighbors(&inst, c).unwrap();
                assert_eq!(two, oracle(&inst, c, MoveKind::SplitMerge));
                assert_eq!(many, oracle(&inst, c, MoveKind::PartitionUnion));
                assert!(two.iter().all(|x| many.contains(x)));
                for d in &many {
                    assert!(is_exact_cover(&inst, d).unwrap());
                    assert!(manyway_neighbors(&inst, d).unwrap().contains(c));
                    assert!(CoverSpace::new(&inst, MoveKind::PartitionUnion).is_move(c, d));
                }
            }
            checked += 1;
        }
    }
}

//! Not-all-equal 3-SAT with single-variable-flip reconfiguration, and the
//! compilers that turn constraint graphs into NAE and plain CNF formulas.

mod audit;
mod cnf;
mod gadgets;
mod reduction;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::statespace::{encoding, ReconfigurationSpace};

pub use audit::{audit_templates, gadget_audit, node_accepts, AuditCheck, AuditFailure, AuditReport, AuditRow};
pub use cnf::{reduce_ncl_to_3sat, CnfFlipSpace, CnfFormula, NclSatReduction};
pub use gadgets::{
    compile_and_gadget, compile_or_gadget, compile_rigid_gadget, EdgeRole, GadgetError, GadgetPlan, GadgetTemplate,
    GadgetVariant, RigidGadget, Sense, Slot, RIGID_CANONICAL,
};
pub use reduction::{reduce_ncl_to_naesat, EdgeVar, NclNaeReduction, NodeGadget, ReduceOptions, ReductionError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal { var, negated: false }
    }

    pub fn neg(var: usize) -> Self {
        Literal { var, negated: true }
    }

    pub fn value(self, a: &Assignment) -> bool {
        a.0[self.var] != self.negated
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Clause(pub [Literal; 3]);

impl Clause {
    pub fn positive(a: usize, b: usize, c: usize) -> Self {
        Clause([Literal::pos(a), Literal::pos(b), Literal::pos(c)])
    }

    pub fn nae_holds(&self, a: &Assignment) -> bool {
        let [x, y, z] = self.0.map(|l| l.value(a));
        !(x == y && y == z)
    }

    pub fn vars(&self) -> [usize; 3] {
        self.0.map(|l| l.var)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NaeError {
    #[error("clause {clause} repeats variable {var}")]
    RepeatedVariable { clause: usize, var: usize },
    #[error("clause {clause} references unknown variable {var}")]
    UnknownVariable { clause: usize, var: usize },
    #[error("duplicate variable name `{0}`")]
    DuplicateName(String),
    #[error("assignment has {got} values for {expected} variables")]
    PartialAssignment { expected: usize, got: usize },
    #[error("start assignment does not satisfy the formula")]
    UnsatisfiedStart,
}

/// A formula of exactly-three-literal clauses over distinct variables,
/// interpreted with not-all-equal semantics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NaeFormula {
    names: Vec<String>,
    clauses: Vec<Clause>,
    occurrences: Vec<Vec<usize>>,
}

impl NaeFormula {
    pub fn new(names: Vec<String>, clauses: Vec<Clause>) -> Result<Self, NaeError> {
        let mut seen = HashMap::new();
        for n in &names {
            if seen.insert(n.as_str(), ()).is_some() {
                return Err(NaeError::DuplicateName(n.clone()));
            }
        }
        let mut occurrences = vec![Vec::new(); names.len()];
        for (ci, c) in clauses.iter().enumerate() {
            let [a, b, d] = c.vars();
            for v in [a, b, d] {
                if v >= names.len() {
                    return Err(NaeError::UnknownVariable { clause: ci, var: v });
                }
            }
            if a == b || b == d || a == d {
                let var = if a == b || a == d { a } else { b };
                return Err(NaeError::RepeatedVariable { clause: ci, var });
            }
            for v in [a, b, d] {
                occurrences[v].push(ci);
            }
        }
        Ok(NaeFormula { names, clauses, occurrences })
    }

    pub fn num_vars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// True iff no clause contains a negated literal.
    pub fn is_monotone(&self) -> bool {
        self.clauses.iter().all(|c| c.0.iter().all(|l| !l.negated))
    }

    /// Clause indices mentioning `var`.
    pub fn occurrences(&self, var: usize) -> &[usize] {
        &self.occurrences[var]
    }

    fn check_len(&self, a: &Assignment) -> Result<(), NaeError> {
        if a.0.len() != self.names.len() {
            return Err(NaeError::PartialAssignment { expected: self.names.len(), got: a.0.len() });
        }
        Ok(())
    }

    fn satisfied_unchecked(&self, a: &Assignment) -> bool {
        self.clauses.iter().all(|c| c.nae_holds(a))
    }

    fn flip_ok(&self, a: &mut Assignment, var: usize) -> bool {
        a.flip(var);
        let ok = self.occurrences[var].iter().all(|&ci| self.clauses[ci].nae_holds(a));
        a.flip(var);
        ok
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment(pub Vec<bool>);

impl Assignment {
    pub fn all_false(n: usize) -> Self {
        Assignment(vec![false; n])
    }

    /// Parses a string of `0`/`1` characters.
    pub fn from_bits(bits: &str) -> Option<Self> {
        bits.chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(Assignment)
    }

    pub fn from_mask(n: usize, mask: u64) -> Self {
        Assignment((0..n).map(|i| mask >> i & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, var: usize) -> bool {
        self.0[var]
    }

    pub fn set(&mut self, var: usize, value: bool) {
        self.0[var] = value;
    }

    pub fn flip(&mut self, var: usize) {
        self.0[var] = !self.0[var];
    }

    pub fn flipped(&self, var: usize) -> Assignment {
        let mut a = self.clone();
        a.flip(var);
        a
    }

    pub fn complement(&self) -> Assignment {
        Assignment(self.0.iter().map(|b| !b).collect())
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

pub fn nae_satisfies(f: &NaeFormula, a: &Assignment) -> Result<bool, NaeError> {
    f.check_len(a)?;
    Ok(f.satisfied_unchecked(a))
}

/// Variables whose single flip keeps a satisfying assignment satisfying.
pub fn flip_neighbors(f: &NaeFormula, a: &Assignment) -> Result<Vec<usize>, NaeError> {
    if !nae_satisfies(f, a)? {
        return Err(NaeError::UnsatisfiedStart);
    }
    let mut scratch = a.clone();
    Ok((0..f.num_vars()).filter(|&v| f.flip_ok(&mut scratch, v)).collect())
}

pub struct NaeFlipSpace<'a> {
    formula: &'a NaeFormula,
}

impl<'a> NaeFlipSpace<'a> {
    pub fn new(formula: &'a NaeFormula) -> Self {
        NaeFlipSpace { formula }
    }
}

impl ReconfigurationSpace for NaeFlipSpace<'_> {
    type Config = Assignment;

    fn is_feasible(&self, a: &Assignment) -> bool {
        matches!(nae_satisfies(self.formula, a), Ok(true))
    }

    fn neighbors(&self, a: &Assignment) -> Vec<Assignment> {
        match flip_neighbors(self.formula, a) {
            Ok(vars) => vars.into_iter().map(|v| a.flipped(v)).collect(),
            Err(_) => Vec::new(),
        }
    }

    fn encode(&self, a: &Assignment) -> Vec<u8> {
        encoding::bits(a.0.iter().copied())
    }

    fn is_move(&self, from: &Assignment, to: &Assignment) -> bool {
        from.len() == to.len()
            && from.0.iter().zip(&to.0).filter(|(x, y)| x != y).count() == 1
            && self.is_feasible(from)
            && self.is_feasible(to)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("v{i}")).collect()
    }

    fn single_clause() -> NaeFormula {
        NaeFormula::new(names(3), vec![Clause::positive(0, 1, 2)]).unwrap()
    }

    #[test]
    fn clause_semantics() {
        let f = single_clause();
        assert!(!nae_satisfies(&f, &Assignment(vec![true, true, true])).unwrap());
        assert!(nae_satisfies(&f, &Assignment(vec![true, false, false])).unwrap());
        assert_eq!(
            nae_satisfies(&f, &Assignment(vec![true])),
            Err(NaeError::PartialAssignment { expected: 3, got: 1 })
        );
    }

    #[test]
    fn flips_of_single_clause() {
        let f = single_clause();
        assert_eq!(flip_neighbors(&f, &Assignment(vec![true, false, false])).unwrap(), vec![1, 2]);
        assert_eq!(flip_neighbors(&f, &Assignment(vec![false; 3])), Err(NaeError::UnsatisfiedStart));
    }

    #[test]
    fn empty_formula_allows_every_flip() {
        let f = NaeFormula::new(names(4), vec![]).unwrap();
        assert_eq!(flip_neighbors(&f, &Assignment::all_false(4)).unwrap(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn construction_rejects_repeats() {
        assert!(matches!(
            NaeFormula::new(names(3), vec![Clause::positive(0, 1, 0)]),
            Err(NaeError::RepeatedVariable { clause: 0, var: 0 })
        ));
        assert!(matches!(
            NaeFormula::new(names(3), vec![Clause::positive(0, 1, 7)]),
            Err(NaeError::UnknownVariable { .. })
        ));
        assert!(NaeFormula::new(vec!["a".into(), "a".into()], vec![]).is_err());
    }

    #[test]
    fn monotone_flag() {
        assert!(single_clause().is_monotone());
        let f = NaeFormula::new(names(3), vec![Clause([Literal::pos(0), Literal::neg(1), Literal::pos(2)])]).unwrap();
        assert!(!f.is_monotone());
    }

    /// Exhaustive complement symmetry on random formulas up to 12 variables.
    #[test]
    fn complement_symmetry_exhaustive() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let n = rng.gen_range(3..=12);
            let m = rng.gen_range(0..=8);
            let clauses = (0..m)
                .map(|_| {
                    let mut vars = rand::seq::index::sample(&mut rng, n, 3).into_vec();
                    vars.sort();
                    Clause(vars.map_to_lits(&mut rng))
                })
                .collect();
            let f = NaeFormula::new(names(n), clauses).unwrap();
            for mask in 0..1u64 << n {
                let a = Assignment::from_mask(n, mask);
                assert_eq!(nae_satisfies(&f, &a).unwrap(), nae_satisfies(&f, &a.complement()).unwrap());
            }
        }
    }

    trait MapToLits {
        fn map_to_lits(self, rng: &mut impl rand::Rng) -> [Literal; 3];
    }

    impl MapToLits for Vec<usize> {
        fn map_to_lits(self, rng: &mut impl rand::Rng) -> [Literal; 3] {
            [0, 1, 2].map(|i| Literal { var: self[i], negated: rng.gen_bool(0.5) })
        }
    }
}

//! Plain CNF satisfiability reconfiguration and the direct compiler from
//! constraint graphs: one variable per edge, `(x_in ∨ y_in)(x_in ∨ z_in)` per
//! AND node and `(x_in ∨ y_in ∨ z_in)` per OR node.

use super::reduction::{actual_sense, EdgeVar, ReductionError};
use super::{Assignment, Literal, NaeError, Sense};
use crate::ncl::{is_legal_orientation, ConstraintGraph, EdgeColor, NodeKind, Orientation};
use crate::statespace::{encoding, Endpoint, ReconfigurationSpace};

/// Clauses of one to three literals with ordinary OR semantics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    names: Vec<String>,
    clauses: Vec<Vec<Literal>>,
    occurrences: Vec<Vec<usize>>,
}

impl CnfFormula {
    pub fn new(names: Vec<String>, clauses: Vec<Vec<Literal>>) -> Result<Self, NaeError> {
        let mut occurrences = vec![Vec::new(); names.len()];
        for (ci, c) in clauses.iter().enumerate() {
            for (i, l) in c.iter().enumerate() {
                if l.var >= names.len() {
                    return Err(NaeError::UnknownVariable { clause: ci, var: l.var });
                }
                if c[..i].iter().any(|o| o.var == l.var) {
                    return Err(NaeError::RepeatedVariable { clause: ci, var: l.var });
                }
                occurrences[l.var].push(ci);
            }
        }
        Ok(CnfFormula { names, clauses, occurrences })
    }

    pub fn num_vars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn clauses(&self) -> &[Vec<Literal>] {
        &self.clauses
    }

    fn clause_holds(&self, ci: usize, a: &Assignment) -> bool {
        self.clauses[ci].iter().any(|l| l.value(a))
    }

    pub fn satisfies(&self, a: &Assignment) -> Result<bool, NaeError> {
        if a.len() != self.names.len() {
            return Err(NaeError::PartialAssignment { expected: self.names.len(), got: a.len() });
        }
        Ok((0..self.clauses.len()).all(|ci| self.clause_holds(ci, a)))
    }

    pub fn flip_neighbors(&self, a: &Assignment) -> Result<Vec<usize>, NaeError> {
        if !self.satisfies(a)? {
            return Err(NaeError::UnsatisfiedStart);
        }
        let mut scratch = a.clone();
        Ok((0..self.num_vars())
            .filter(|&v| {
                scratch.flip(v);
                let ok = self.occurrences[v].iter().all(|&ci| self.clause_holds(ci, &scratch));
                scratch.flip(v);
                ok
            })
            .collect())
    }
}

pub struct CnfFlipSpace<'a> {
    formula: &'a CnfFormula,
}

impl<'a> CnfFlipSpace<'a> {
    pub fn new(formula: &'a CnfFormula) -> Self {
        CnfFlipSpace { formula }
    }
}

impl ReconfigurationSpace for CnfFlipSpace<'_> {
    type Config = Assignment;

    fn is_feasible(&self, a: &Assignment) -> bool {
        matches!(self.formula.satisfies(a), Ok(true))
    }

    fn neighbors(&self, a: &Assignment) -> Vec<Assignment> {
        match self.formula.flip_neighbors(a) {
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

#[derive(Debug, Clone)]
pub struct NclSatReduction {
    pub formula: CnfFormula,
    pub start: Assignment,
    pub goal: Assignment,
    pub edge_vars: Vec<EdgeVar>,
}

impl NclSatReduction {
    pub fn assignment_of(&self, o: &Orientation) -> Assignment {
        Assignment(self.edge_vars.iter().enumerate().map(|(e, ev)| o.head(e) == ev.toward).collect())
    }

    pub fn project_assignment(&self, g: &ConstraintGraph, a: &Assignment) -> Result<Orientation, ReductionError> {
        if !self.formula.satisfies(a)? {
            return Err(ReductionError::UnsatisfiedAssignment);
        }
        let heads = self
            .edge_vars
            .iter()
            .enumerate()
            .map(|(e, ev)| if a.get(ev.var) { ev.toward } else { g.edges()[e].other(ev.toward) })
            .collect();
        Ok(Orientation::new(g, heads)?)
    }
}

/// The literal "edge points into `node`".
fn in_literal(ev: &EdgeVar, node: usize) -> Literal {
    match actual_sense(ev, node) {
        Sense::In => Literal::pos(ev.var),
        Sense::Out => Literal::neg(ev.var),
    }
}

pub fn reduce_ncl_to_3sat(
    g: &ConstraintGraph,
    c1: &Orientation,
    c2: &Orientation,
) -> Result<NclSatReduction, ReductionError> {
    let report = g.validate();
    if !report.is_valid() {
        return Err(ReductionError::InvalidGraph(report.describe(g)));
    }
    for (o, which) in [(c1, Endpoint::Start), (c2, Endpoint::Goal)] {
        if !is_legal_orientation(g, o)? {
            return Err(ReductionError::IllegalInputConfiguration(which));
        }
    }
    let edge_vars: Vec<EdgeVar> =
        (0..g.edges().len()).map(|e| EdgeVar { var: e, toward: g.lower_endpoint(e) }).collect();
    let names = g.edges().iter().map(|e| format!("e.{}", e.id)).collect();
    let mut clauses = Vec::new();
    for (node, info) in g.nodes().iter().enumerate() {
        let inc = g.incident(node);
        let lit = |e: usize| in_literal(&edge_vars[e], node);
        match info.kind {
            NodeKind::And => {
                let x = inc.iter().copied().find(|&e| g.edges()[e].color == EdgeColor::Blue).expect("validated");
                for &r in inc.iter().filter(|&&e| g.edges()[e].color == EdgeColor::Red) {
                    clauses.push(vec![lit(x), lit(r)]);
                }
            }
            NodeKind::Or => clauses.push(inc.iter().map(|&e| lit(e)).collect()),
        }
    }
    let formula = CnfFormula::new(names, clauses)?;
    let mut out = NclSatReduction { formula, start: Assignment(vec![]), goal: Assignment(vec![]), edge_vars };
    out.start = out.assignment_of(c1);
    out.goal = out.assignment_of(c2);
    Ok(out)
}

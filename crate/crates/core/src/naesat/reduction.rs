//! Compiles a constraint graph and two legal orientations into a monotone
//! NAE 3-SAT reconfiguration instance.
//!
//! Each edge gets one variable, true iff the edge points toward its
//! endpoint with the lexicographically smaller id. Each node gets a gadget.
//! When the node's `x` edge variable is out-positive, the gadget is emitted
//! for the complemented variables: slot senses flip and true terminals are
//! exchanged for false ones, which keeps every clause positive.

use std::collections::VecDeque;
use std::ops::Range;

use thiserror::Error;

use super::gadgets::{emit_rigid, FormulaBuilder};
use super::{
    compile_and_gadget, compile_or_gadget, Assignment, EdgeRole, GadgetVariant, NaeError, NaeFormula, RigidGadget,
    Sense, Slot, RIGID_CANONICAL,
};
use crate::ncl::{legal_flips, ConstraintGraph, EdgeColor, NclError, NodeKind, Orientation};
use crate::statespace::Endpoint;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ReduceOptions {
    /// Reuse one global rigid gadget for every terminal.
    pub share_rigid: bool,
}

/// The variable of an edge: true iff the edge points toward `toward`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeVar {
    pub var: usize,
    pub toward: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeGadget {
    pub node: usize,
    pub variant: GadgetVariant,
    /// Emitted over complemented variables.
    pub negated: bool,
    /// Edges filling slots `EdgeX`, `EdgeY`, `EdgeZ`.
    pub edges: [usize; 3],
    pub aux: Vec<usize>,
    /// Variables filling the template's `True(k)` slots, then its `False(k)` slots.
    pub terminals: Vec<usize>,
    pub clauses: Range<usize>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("constraint graph is invalid: {}", .0.join("; "))]
    InvalidGraph(Vec<String>),
    #[error("{0} orientation is not legal")]
    IllegalInputConfiguration(Endpoint),
    #[error("assignment does not satisfy the compiled formula")]
    UnsatisfiedAssignment,
    #[error("edge {0} is not a legal flip")]
    IllegalFlip(usize),
    #[error("no satisfying aux values for node {0}")]
    NoAuxAssignment(usize),
    #[error("gadget of node {node} cannot absorb a flip of edge {edge}")]
    LiftFailed { node: usize, edge: usize },
    #[error(transparent)]
    Ncl(#[from] NclError),
    #[error(transparent)]
    Formula(#[from] NaeError),
}

#[derive(Debug, Clone)]
pub struct NclNaeReduction {
    pub formula: NaeFormula,
    pub start: Assignment,
    pub goal: Assignment,
    pub edge_vars: Vec<EdgeVar>,
    pub gadgets: Vec<NodeGadget>,
    pub rigid: Vec<RigidGadget>,
    edge_gadgets: Vec<Vec<usize>>,
}

pub(crate) fn actual_sense(edge_var: &EdgeVar, node: usize) -> Sense {
    if edge_var.toward == node {
        Sense::In
    } else {
        Sense::Out
    }
}

struct TerminalSupply {
    share: bool,
    shared: Option<RigidGadget>,
    next_true: usize,
    next_false: usize,
    emitted: Vec<RigidGadget>,
}

impl TerminalSupply {
    /// Returns `(trues, falses)` actual terminal variables.
    fn take(&mut self, b: &mut FormulaBuilder, owner: &str, trues: usize, falses: usize) -> (Vec<usize>, Vec<usize>) {
        if trues + falses == 0 {
            return (vec![], vec![]);
        }
        if self.share {
            let g = *self.shared.get_or_insert_with(|| {
                let g = emit_rigid(b, "rigid");
                self.emitted.push(g);
                g
            });
            let t = (0..trues).map(|_| {
                self.next_true += 1;
                g.trues()[(self.next_true - 1) % 2]
            });
            let t: Vec<usize> = t.collect();
            let f: Vec<usize> = (0..falses)
                .map(|_| {
                    self.next_false += 1;
                    g.falses()[(self.next_false - 1) % 2]
                })
                .collect();
            return (t, f);
        }
        let count = trues.div_ceil(2).max(falses.div_ceil(2));
        let gadgets: Vec<RigidGadget> = (0..count).map(|k| emit_rigid(b, &format!("{owner}.rigid{k}"))).collect();
        self.emitted.extend(&gadgets);
        let t = gadgets.iter().flat_map(|g| g.trues()).take(trues).collect();
        let f = gadgets.iter().flat_map(|g| g.falses()).take(falses).collect();
        (t, f)
    }
}

/// Compiles `g` with orientations `c1`, `c2` into a monotone NAE instance.
pub fn reduce_ncl_to_naesat(
    g: &ConstraintGraph,
    c1: &Orientation,
    c2: &Orientation,
    options: ReduceOptions,
) -> Result<NclNaeReduction, ReductionError> {
    let report = g.validate();
    if !report.is_valid() {
        return Err(ReductionError::InvalidGraph(report.describe(g)));
    }
    for (o, which) in [(c1, Endpoint::Start), (c2, Endpoint::Goal)] {
        if !crate::ncl::is_legal_orientation(g, o)? {
            return Err(ReductionError::IllegalInputConfiguration(which));
        }
    }

    let mut b = FormulaBuilder::default();
    let edge_vars: Vec<EdgeVar> = g
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| EdgeVar { var: b.fresh(format!("e.{}", e.id)), toward: g.lower_endpoint(i) })
        .collect();

    let mut supply =
        TerminalSupply { share: options.share_rigid, shared: None, next_true: 0, next_false: 0, emitted: vec![] };
    let mut gadgets = Vec::with_capacity(g.nodes().len());
    let mut edge_gadgets = vec![Vec::new(); g.edges().len()];

    for (node, info) in g.nodes().iter().enumerate() {
        let incident = g.incident(node);
        let (x, y, z) = match info.kind {
            NodeKind::And => {
                let blue = incident.iter().copied().find(|&e| g.edges()[e].color == EdgeColor::Blue);
                let reds: Vec<usize> =
                    incident.iter().copied().filter(|&e| g.edges()[e].color == EdgeColor::Red).collect();
                (blue.expect("validated AND node"), reds[0], reds[1])
            }
            NodeKind::Or => (incident[0], incident[1], incident[2]),
        };
        let negated = actual_sense(&edge_vars[x], node) == Sense::Out;
        let normalize = |e: usize| {
            let s = actual_sense(&edge_vars[e], node);
            if negated {
                s.flip()
            } else {
                s
            }
        };
        let plan = match info.kind {
            NodeKind::And => compile_and_gadget(Sense::In, normalize(y), normalize(z)),
            NodeKind::Or => compile_or_gadget(Sense::In, normalize(y), normalize(z)),
        }
        .expect("x is normalized");
        let role_edge = |r: EdgeRole| match r {
            EdgeRole::X => x,
            EdgeRole::Y => y,
            EdgeRole::Z => z,
        };
        let edges = plan.binding.map(role_edge);
        let t = &plan.template;

        // Under complementation a symbolic true terminal is an actual false one.
        let (actual_trues, actual_falses) = if negated { (t.falses, t.trues) } else { (t.trues, t.falses) };
        let (tv, fv) = supply.take(&mut b, &info.id, actual_trues, actual_falses);
        let (sym_true, sym_false) = if negated { (fv, tv) } else { (tv, fv) };
        let aux: Vec<usize> = (0..t.aux).map(|k| b.fresh(format!("{}.aux{k}", info.id))).collect();

        let first = b.clauses.len();
        for clause in &t.clauses {
            let vars = clause.map(|slot| match slot {
                Slot::EdgeX => edge_vars[edges[0]].var,
                Slot::EdgeY => edge_vars[edges[1]].var,
                Slot::EdgeZ => edge_vars[edges[2]].var,
                Slot::True(k) => sym_true[k as usize],
                Slot::False(k) => sym_false[k as usize],
                Slot::Aux(k) => aux[k as usize],
            });
            b.clauses.push(super::Clause::positive(vars[0], vars[1], vars[2]));
        }
        let mut terminals = sym_true;
        terminals.extend(sym_false);
        for e in [x, y, z] {
            edge_gadgets[e].push(gadgets.len());
        }
        gadgets.push(NodeGadget {
            node,
            variant: t.variant,
            negated,
            edges,
            aux,
            terminals,
            clauses: first..b.clauses.len(),
        });
    }

    let formula = b.build()?;
    let mut out = NclNaeReduction {
        start: Assignment::all_false(formula.num_vars()),
        goal: Assignment::all_false(formula.num_vars()),
        formula,
        edge_vars,
        gadgets,
        rigid: supply.emitted,
        edge_gadgets,
    };
    out.start = out.canonical_assignment(g, c1)?;
    out.goal = out.canonical_assignment(g, c2)?;
    Ok(out)
}

impl NclNaeReduction {
    /// Gadgets (indices into `gadgets`) that mention `edge`.
    pub fn gadgets_of_edge(&self, edge: usize) -> &[usize] {
        &self.edge_gadgets[edge]
    }

    fn gadget_satisfied(&self, gadget: &NodeGadget, a: &Assignment) -> bool {
        self.formula.clauses()[gadget.clauses.clone()].iter().all(|c| c.nae_holds(a))
    }

    /// Aux values by increasing number of symbolically-true aux variables,
    /// then by mask: aux variables stay false unless a clause forces them.
    fn choose_aux(&self, gadget: &NodeGadget, a: &mut Assignment) -> bool {
        let k = gadget.aux.len();
        let mut masks: Vec<u32> = (0..1u32 << k).collect();
        masks.sort_by_key(|m| (m.count_ones(), *m));
        for m in masks {
            for (i, &v) in gadget.aux.iter().enumerate() {
                a.set(v, (m >> i & 1 == 1) != gadget.negated);
            }
            if self.gadget_satisfied(gadget, a) {
                return true;
            }
        }
        false
    }

    /// The assignment extending a legal orientation: edge variables read off
    /// the orientation, rigid gadgets canonical, aux values by the default rule.
    pub fn canonical_assignment(&self, g: &ConstraintGraph, o: &Orientation) -> Result<Assignment, ReductionError> {
        let mut a = Assignment::all_false(self.formula.num_vars());
        for (e, ev) in self.edge_vars.iter().enumerate() {
            a.set(ev.var, o.head(e) == ev.toward);
        }
        for r in &self.rigid {
            for (v, val) in r.vars.iter().zip(RIGID_CANONICAL) {
                a.set(*v, val);
            }
        }
        for gadget in &self.gadgets {
            if !self.choose_aux(gadget, &mut a) {
                return Err(ReductionError::NoAuxAssignment(gadget.node));
            }
        }
        debug_assert!(g.edges().len() == self.edge_vars.len());
        Ok(a)
    }

    /// Reads the orientation encoded by a satisfying assignment.
    pub fn project_assignment(&self, g: &ConstraintGraph, a: &Assignment) -> Result<Orientation, ReductionError> {
        if !super::nae_satisfies(&self.formula, a)? {
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

    /// Variable flips that take `canonical_assignment(o)` to
    /// `canonical_assignment(o with edge flipped)`, satisfying at every step.
    ///
    /// Each gadget touching the edge first adjusts its aux variables, then the
    /// edge variable flips once, then each gadget settles its aux variables.
    pub fn lift_flip(&self, g: &ConstraintGraph, o: &Orientation, edge: usize) -> Result<Vec<usize>, ReductionError> {
        if edge >= g.edges().len() || !legal_flips(g, o)?.contains(&edge) {
            return Err(ReductionError::IllegalFlip(edge));
        }
        let from = self.canonical_assignment(g, o)?;
        let to = self.canonical_assignment(g, &o.flipped(g, edge))?;
        let edge_var = self.edge_vars[edge].var;

        let mut pre = Vec::new();
        let mut post = Vec::new();
        for &gi in &self.edge_gadgets[edge] {
            let gadget = &self.gadgets[gi];
            let (p, q) = self
                .local_lift(gadget, &from, &to, edge_var)
                .ok_or(ReductionError::LiftFailed { node: gadget.node, edge })?;
            pre.extend(p);
            post.extend(q);
        }
        let mut flips = pre;
        flips.push(edge_var);
        flips.extend(post);
        Ok(flips)
    }

    /// Shortest aux-flip path inside one gadget, split at the edge flip.
    fn local_lift(
        &self,
        gadget: &NodeGadget,
        from: &Assignment,
        to: &Assignment,
        edge_var: usize,
    ) -> Option<(Vec<usize>, Vec<usize>)> {
        let aux = &gadget.aux;
        let mask_of = |a: &Assignment| aux.iter().enumerate().fold(0u32, |m, (i, &v)| m | (a.get(v) as u32) << i);
        let start = (false, mask_of(from));
        let goal = (true, mask_of(to));
        let mut scratch = from.clone();
        let mut ok = |phase: bool, mask: u32| {
            scratch.set(edge_var, if phase { to.get(edge_var) } else { from.get(edge_var) });
            for (i, &v) in aux.iter().enumerate() {
                scratch.set(v, mask >> i & 1 == 1);
            }
            self.gadget_satisfied(gadget, &scratch)
        };
        let path = layered_bfs(aux.len(), start, goal, &mut ok)?;
        let mut pre = Vec::new();
        let mut post = Vec::new();
        for step in path {
            match step {
                LocalStep::Aux { index, after_edge } => {
                    if after_edge {
                        post.push(aux[index]);
                    } else {
                        pre.push(aux[index]);
                    }
                }
                LocalStep::Edge => {}
            }
        }
        Some((pre, post))
    }

    /// Lifts a whole orientation sequence (consecutive entries one flip apart).
    pub fn lift_certificate(
        &self,
        g: &ConstraintGraph,
        orientations: &[Orientation],
    ) -> Result<Vec<Assignment>, ReductionError> {
        let Some(first) = orientations.first() else {
            return Ok(vec![]);
        };
        let mut current = self.canonical_assignment(g, first)?;
        let mut out = vec![current.clone()];
        for pair in orientations.windows(2) {
            let diff: Vec<usize> = (0..g.edges().len()).filter(|&e| pair[0].head(e) != pair[1].head(e)).collect();
            let [edge] = diff[..] else {
                return Err(ReductionError::IllegalFlip(diff.first().copied().unwrap_or(usize::MAX)));
            };
            for v in self.lift_flip(g, &pair[0], edge)? {
                current.flip(v);
                out.push(current.clone());
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum LocalStep {
    Aux { index: usize, after_edge: bool },
    Edge,
}

/// BFS over `(edge flipped?, aux mask)` where the edge may flip only once.
pub(crate) fn layered_bfs(
    aux_count: usize,
    start: (bool, u32),
    goal: (bool, u32),
    ok: &mut impl FnMut(bool, u32) -> bool,
) -> Option<Vec<LocalStep>> {
    let states = 2usize << aux_count;
    let id = |(p, m): (bool, u32)| (p as usize) << aux_count | m as usize;
    if !ok(start.0, start.1) {
        return None;
    }
    let mut prev: Vec<Option<(usize, LocalStep)>> = vec![None; states];
    let mut seen = vec![false; states];
    seen[id(start)] = true;
    let mut queue = VecDeque::from([start]);
    while let Some((phase, mask)) = queue.pop_front() {
        if (phase, mask) == goal {
            let mut steps = Vec::new();
            let mut cur = id(goal);
            while let Some((p, step)) = prev[cur] {
                steps.push(step);
                cur = p;
            }
            steps.reverse();
            return Some(steps);
        }
        let mut next: Vec<((bool, u32), LocalStep)> =
            (0..aux_count).map(|i| ((phase, mask ^ 1 << i), LocalStep::Aux { index: i, after_edge: phase })).collect();
        if !phase {
            next.push(((true, mask), LocalStep::Edge));
        }
        for (s, step) in next {
            if !seen[id(s)] && ok(s.0, s.1) {
                seen[id(s)] = true;
                prev[id(s)] = Some((id((phase, mask)), step));
                queue.push_back(s);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::naesat::{nae_satisfies, NaeFlipSpace};
    use crate::ncl::samples::*;
    use crate::ncl::{C2cSpace, Orientation};
    use crate::statespace::{explore_component, reachable, SearchLimits};

    fn legal_orientations(g: &ConstraintGraph) -> Vec<Orientation> {
        let m = g.edges().len();
        (0..1u32 << m)
            .filter_map(|mask| {
                let heads = (0..m).map(|e| if mask >> e & 1 == 1 { g.edges()[e].v } else { g.edges()[e].u }).collect();
                let o = Orientation::new(g, heads).ok()?;
                crate::ncl::is_legal_orientation(g, &o).unwrap().then_some(o)
            })
            .collect()
    }

    #[test]
    fn output_is_monotone_and_endpoints_satisfy() {
        for g in [parallel_or_pair(), parallel_and_pair(), and_triangle_or_hub()] {
            let os = legal_orientations(&g);
            for share in [false, true] {
                let r =
                    reduce_ncl_to_naesat(&g, &os[0], os.last().unwrap(), ReduceOptions { share_rigid: share }).unwrap();
                assert!(r.formula.is_monotone());
                assert!(nae_satisfies(&r.formula, &r.start).unwrap());
                assert!(nae_satisfies(&r.formula, &r.goal).unwrap());
                assert_eq!(r.project_assignment(&g, &r.start).unwrap(), os[0]);
                assert_eq!(&r.project_assignment(&g, &r.goal).unwrap(), os.last().unwrap());
            }
        }
    }

    #[test]
    fn edge_vars_are_a_bijection() {
        let g = and_triangle_or_hub();
        let o = &legal_orientations(&g)[0];
        let r = reduce_ncl_to_naesat(&g, o, o, ReduceOptions::default()).unwrap();
        let mut vars: Vec<usize> = r.edge_vars.iter().map(|e| e.var).collect();
        vars.sort();
        vars.dedup();
        assert_eq!(vars.len(), g.edges().len());
    }

    #[test]
    fn and_node_with_incoming_literals_gets_two_clauses() {
        // `a` is the smallest id, so all its edge variables are in-positive.
        let g = and_triangle_or_hub();
        let o = &legal_orientations(&g)[0];
        let r = reduce_ncl_to_naesat(&g, o, o, ReduceOptions::default()).unwrap();
        let a = &r.gadgets[g.node_index("a").unwrap()];
        assert_eq!(a.variant, GadgetVariant::AndInIn);
        assert!(!a.negated);
        assert_eq!(a.clauses.len(), 2);
    }

    #[test]
    fn empty_graph() {
        let g = ConstraintGraph::new(vec![], vec![]).unwrap();
        let o = Orientation::new(&g, vec![]).unwrap();
        for share in [false, true] {
            let r = reduce_ncl_to_naesat(&g, &o, &o, ReduceOptions { share_rigid: share }).unwrap();
            assert_eq!(r.formula.clauses().len(), 0);
            assert!(r.start.is_empty() && r.goal.is_empty());
            let res = reachable(&NaeFlipSpace::new(&r.formula), &r.start, &r.goal, SearchLimits::default()).unwrap();
            assert!(res.reachable);
        }
    }

    #[test]
    fn terminals_are_distinct_without_sharing() {
        let g = and_triangle_or_hub();
        let o = &legal_orientations(&g)[0];
        let r = reduce_ncl_to_naesat(&g, o, o, ReduceOptions::default()).unwrap();
        let mut all: Vec<usize> = r.gadgets.iter().flat_map(|gd| gd.terminals.clone()).collect();
        let n = all.len();
        all.sort();
        all.dedup();
        assert_eq!(all.len(), n);
        // each terminal belongs to exactly one rigid gadget
        for t in all {
            assert_eq!(r.rigid.iter().filter(|rg| rg.vars.contains(&t)).count(), 1);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let g = parallel_or_pair();
        let bad = Orientation::from_ids(&g, [("e1", "A"), ("e2", "A"), ("e3", "A")]).unwrap();
        let good = legal_orientations(&g)[0].clone();
        assert_eq!(
            reduce_ncl_to_naesat(&g, &bad, &good, ReduceOptions::default()).unwrap_err(),
            ReductionError::IllegalInputConfiguration(Endpoint::Start)
        );
        let invalid = ConstraintGraph::from_ids(&[("A", crate::ncl::NodeKind::Or)], &[]).unwrap();
        let empty = Orientation::new(&invalid, vec![]).unwrap();
        assert!(matches!(
            reduce_ncl_to_naesat(&invalid, &empty, &empty, ReduceOptions::default()),
            Err(ReductionError::InvalidGraph(_))
        ));
    }

    #[test]
    fn reachability_matches_on_parallel_or_pair() {
        let g = parallel_or_pair();
        let start = Orientation::from_ids(&g, [("e1", "A"), ("e2", "A"), ("e3", "B")]).unwrap();
        let goal = Orientation::from_ids(&g, [("e1", "B"), ("e2", "B"), ("e3", "A")]).unwrap();
        let c2c = reachable(&C2cSpace::new(&g), &start, &goal, SearchLimits::default()).unwrap();
        assert!(c2c.reachable);
        let r = reduce_ncl_to_naesat(&g, &start, &goal, ReduceOptions { share_rigid: true }).unwrap();
        let nae = reachable(&NaeFlipSpace::new(&r.formula), &r.start, &r.goal, SearchLimits::default()).unwrap();
        assert!(nae.reachable);
    }

    /// Every satisfying assignment reachable from the start projects to a legal orientation.
    #[test]
    fn reachable_component_projects_to_legal_orientations() {
        for g in [parallel_or_pair(), parallel_and_pair()] {
            for o in legal_orientations(&g) {
                let r = reduce_ncl_to_naesat(&g, &o, &o, ReduceOptions::default()).unwrap();
                let comp =
                    explore_component(&NaeFlipSpace::new(&r.formula), &r.start, SearchLimits::default()).unwrap();
                for a in &comp.configs {
                    let p = r.project_assignment(&g, a).unwrap();
                    assert!(crate::ncl::is_legal_orientation(&g, &p).unwrap());
                }
            }
        }
    }

    #[test]
    fn lifted_flips_replay() {
        for g in [parallel_or_pair(), parallel_and_pair(), and_triangle_or_hub()] {
            for share in [false, true] {
                for o in legal_orientations(&g) {
                    let r = reduce_ncl_to_naesat(&g, &o, &o, ReduceOptions { share_rigid: share }).unwrap();
                    for e in legal_flips(&g, &o).unwrap() {
                        let flips = r.lift_flip(&g, &o, e).unwrap();
                        let mut a = r.canonical_assignment(&g, &o).unwrap();
                        for v in &flips {
                            a.flip(*v);
                            assert!(nae_satisfies(&r.formula, &a).unwrap());
                        }
                        assert_eq!(a, r.canonical_assignment(&g, &o.flipped(&g, e)).unwrap());
                        assert_eq!(flips.iter().filter(|&&v| v == r.edge_vars[e].var).count(), 1);
                    }
                    let illegal: Vec<usize> =
                        (0..g.edges().len()).filter(|e| !legal_flips(&g, &o).unwrap().contains(e)).collect();
                    for e in illegal {
                        assert_eq!(r.lift_flip(&g, &o, e), Err(ReductionError::IllegalFlip(e)));
                    }
                }
            }
        }
    }

    #[test]
    fn red_edge_flip_under_incoming_blue_is_a_single_flip() {
        let g = and_triangle_or_hub();
        // blue edge into `a`, so its red edge `ca` is free; `c` keeps its blue edge
        let o =
            Orientation::from_ids(&g, [("ad", "a"), ("bd", "d"), ("cd", "c"), ("ab", "b"), ("bc", "b"), ("ca", "c")])
                .unwrap();
        let r = reduce_ncl_to_naesat(&g, &o, &o, ReduceOptions::default()).unwrap();
        let ca = g.edge_index("ca").unwrap();
        assert_eq!(r.lift_flip(&g, &o, ca).unwrap(), vec![r.edge_vars[ca].var]);
    }

    #[test]
    fn certificate_lifting() {
        let g = parallel_or_pair();
        let start = Orientation::from_ids(&g, [("e1", "A"), ("e2", "A"), ("e3", "B")]).unwrap();
        let goal = Orientation::from_ids(&g, [("e1", "B"), ("e2", "B"), ("e3", "A")]).unwrap();
        let cert = reachable(&C2cSpace::new(&g), &start, &goal, SearchLimits::default()).unwrap().certificate.unwrap();
        let r = reduce_ncl_to_naesat(&g, &start, &goal, ReduceOptions::default()).unwrap();
        let lifted = r.lift_certificate(&g, &cert).unwrap();
        assert_eq!(lifted.first(), Some(&r.start));
        assert_eq!(lifted.last(), Some(&r.goal));
        let check = crate::statespace::check_certificate(&NaeFlipSpace::new(&r.formula), &lifted);
        assert!(check.is_valid(), "{check}");
    }
}

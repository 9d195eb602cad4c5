//! Monotone NAE clause gadgets for AND and OR nodes, and the rigid gadget
//! that pins terminal variables to constants.
//!
//! Templates are written over symbolic slots. `EdgeX` always stands for the
//! literal "x points into the node"; the senses of `EdgeY` and `EdgeZ` are
//! recorded per template. `True(k)`/`False(k)` are distinct terminals pinned
//! by rigid gadgets, `Aux(k)` are fresh per-gadget variables.

use thiserror::Error;

use super::{Clause, NaeError, NaeFormula};

/// Which orientation of an edge the positive literal of its variable means,
/// relative to a given node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sense {
    In,
    Out,
}

impl Sense {
    pub fn flip(self) -> Sense {
        match self {
            Sense::In => Sense::Out,
            Sense::Out => Sense::In,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Slot {
    EdgeX,
    EdgeY,
    EdgeZ,
    True(u8),
    False(u8),
    Aux(u8),
}

/// The six node gadgets, named by node kind and the senses of `y` and `z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GadgetVariant {
    AndInIn,
    AndOutIn,
    AndOutOut,
    OrOutOut,
    OrInIn,
    OrInOut,
}

impl GadgetVariant {
    pub const ALL: [GadgetVariant; 6] = [
        GadgetVariant::AndInIn,
        GadgetVariant::AndOutIn,
        GadgetVariant::AndOutOut,
        GadgetVariant::OrOutOut,
        GadgetVariant::OrInIn,
        GadgetVariant::OrInOut,
    ];

    pub fn is_and(self) -> bool {
        matches!(self, GadgetVariant::AndInIn | GadgetVariant::AndOutIn | GadgetVariant::AndOutOut)
    }

    pub fn name(self) -> &'static str {
        match self {
            GadgetVariant::AndInIn => "and/y-in/z-in",
            GadgetVariant::AndOutIn => "and/y-out/z-in",
            GadgetVariant::AndOutOut => "and/y-out/z-out",
            GadgetVariant::OrOutOut => "or/y-out/z-out",
            GadgetVariant::OrInIn => "or/y-in/z-in",
            GadgetVariant::OrInOut => "or/y-in/z-out",
        }
    }

    pub fn template(self) -> GadgetTemplate {
        use Slot::*;
        let (y, z, clauses): (Sense, Sense, Vec<[Slot; 3]>) = match self {
            GadgetVariant::AndInIn => (Sense::In, Sense::In, vec![[EdgeY, EdgeX, False(0)], [EdgeZ, EdgeX, False(1)]]),
            GadgetVariant::AndOutIn => (
                Sense::Out,
                Sense::In,
                vec![[EdgeY, True(0), Aux(0)], [EdgeZ, False(0), EdgeX], [Aux(0), False(1), EdgeX]],
            ),
            GadgetVariant::AndOutOut => (
                Sense::Out,
                Sense::Out,
                vec![
                    [EdgeY, True(0), Aux(0)],
                    [EdgeZ, True(1), Aux(1)],
                    [Aux(0), False(0), EdgeX],
                    [Aux(1), False(1), EdgeX],
                ],
            ),
            GadgetVariant::OrOutOut => (
                Sense::Out,
                Sense::Out,
                vec![[EdgeY, True(0), Aux(0)], [EdgeZ, True(1), Aux(1)], [Aux(0), Aux(1), EdgeX]],
            ),
            // Aux(0), Aux(1), Aux(2) play t, t', t''.
            GadgetVariant::OrInIn => (
                Sense::In,
                Sense::In,
                vec![
                    [EdgeX, False(0), Aux(2)],
                    [EdgeY, False(1), Aux(1)],
                    [EdgeZ, False(2), Aux(0)],
                    [Aux(0), Aux(1), Aux(2)],
                ],
            ),
            GadgetVariant::OrInOut => (Sense::In, Sense::Out, vec![[EdgeZ, True(0), Aux(0)], [EdgeY, Aux(0), EdgeX]]),
        };
        GadgetTemplate::new(self, y, z, clauses)
    }
}

/// A gadget's clause list over symbolic slots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetTemplate {
    pub variant: GadgetVariant,
    pub y: Sense,
    pub z: Sense,
    pub clauses: Vec<[Slot; 3]>,
    pub aux: usize,
    pub trues: usize,
    pub falses: usize,
}

impl GadgetTemplate {
    /// Builds a template and derives its aux and terminal counts from the clauses.
    pub fn new(variant: GadgetVariant, y: Sense, z: Sense, clauses: Vec<[Slot; 3]>) -> Self {
        let mut aux = 0;
        let mut trues = 0;
        let mut falses = 0;
        for slot in clauses.iter().flatten() {
            match *slot {
                Slot::Aux(k) => aux = aux.max(k as usize + 1),
                Slot::True(k) => trues = trues.max(k as usize + 1),
                Slot::False(k) => falses = falses.max(k as usize + 1),
                _ => {}
            }
        }
        GadgetTemplate { variant, y, z, clauses, aux, trues, falses }
    }

    pub fn edge_sense(&self, slot: Slot) -> Option<Sense> {
        match slot {
            Slot::EdgeX => Some(Sense::In),
            Slot::EdgeY => Some(self.y),
            Slot::EdgeZ => Some(self.z),
            _ => None,
        }
    }

    /// Local variable numbering used by audits and forest checks:
    /// edges 0..3, then true terminals, false terminals, aux.
    pub fn local_index(&self, slot: Slot) -> usize {
        match slot {
            Slot::EdgeX => 0,
            Slot::EdgeY => 1,
            Slot::EdgeZ => 2,
            Slot::True(k) => 3 + k as usize,
            Slot::False(k) => 3 + self.trues + k as usize,
            Slot::Aux(k) => 3 + self.trues + self.falses + k as usize,
        }
    }

    pub fn local_vars(&self) -> usize {
        3 + self.trues + self.falses + self.aux
    }

    /// Whether the variable-clause incidence graph is acyclic.
    pub fn incidence_is_forest(&self) -> bool {
        let n = self.local_vars() + self.clauses.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn root(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for (ci, clause) in self.clauses.iter().enumerate() {
            let c = self.local_vars() + ci;
            for &slot in clause {
                let v = self.local_index(slot);
                let (a, b) = (root(&mut parent, v), root(&mut parent, c));
                if a == b {
                    return false;
                }
                parent[a] = b;
            }
        }
        true
    }
}

/// Which actual edge of the node fills a template's edge slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeRole {
    X,
    Y,
    Z,
}

/// A template chosen for concrete edge senses, with the edge binding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GadgetPlan {
    pub template: GadgetTemplate,
    /// Roles filling slots `EdgeX`, `EdgeY`, `EdgeZ`.
    pub binding: [EdgeRole; 3],
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GadgetError {
    #[error("x must be normalized to the in-positive sense before compiling")]
    InvalidPolarityCombination,
}

fn plan(template: GadgetVariant, swap: bool) -> GadgetPlan {
    let binding = if swap { [EdgeRole::X, EdgeRole::Z, EdgeRole::Y] } else { [EdgeRole::X, EdgeRole::Y, EdgeRole::Z] };
    GadgetPlan { template: template.template(), binding }
}

/// AND gadget for blue edge `x` and red edges `y`, `z`.
pub fn compile_and_gadget(x: Sense, y: Sense, z: Sense) -> Result<GadgetPlan, GadgetError> {
    if x != Sense::In {
        return Err(GadgetError::InvalidPolarityCombination);
    }
    Ok(match (y, z) {
        (Sense::In, Sense::In) => plan(GadgetVariant::AndInIn, false),
        (Sense::Out, Sense::In) => plan(GadgetVariant::AndOutIn, false),
        (Sense::In, Sense::Out) => plan(GadgetVariant::AndOutIn, true),
        (Sense::Out, Sense::Out) => plan(GadgetVariant::AndOutOut, false),
    })
}

/// OR gadget for blue edges `x`, `y`, `z`.
pub fn compile_or_gadget(x: Sense, y: Sense, z: Sense) -> Result<GadgetPlan, GadgetError> {
    if x != Sense::In {
        return Err(GadgetError::InvalidPolarityCombination);
    }
    Ok(match (y, z) {
        (Sense::Out, Sense::Out) => plan(GadgetVariant::OrOutOut, false),
        (Sense::In, Sense::In) => plan(GadgetVariant::OrInIn, false),
        (Sense::In, Sense::Out) => plan(GadgetVariant::OrInOut, false),
        (Sense::Out, Sense::In) => plan(GadgetVariant::OrInOut, true),
    })
}

/// Canonical values of the rigid gadget's variables `(t, x, y, z)`.
pub const RIGID_CANONICAL: [bool; 4] = [true, false, false, true];

/// Variables of one rigid gadget, in `(t, x, y, z)` order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RigidGadget {
    pub vars: [usize; 4],
}

impl RigidGadget {
    pub fn trues(&self) -> [usize; 2] {
        [self.vars[0], self.vars[3]]
    }

    pub fn falses(&self) -> [usize; 2] {
        [self.vars[1], self.vars[2]]
    }

    /// `(t∨x∨z)(t∨y∨z)(t∨x∨y)(x∨y∨z)`.
    pub fn clauses(&self) -> [Clause; 4] {
        let [t, x, y, z] = self.vars;
        [Clause::positive(t, x, z), Clause::positive(t, y, z), Clause::positive(t, x, y), Clause::positive(x, y, z)]
    }
}

/// Accumulates variables and clauses while compiling.
#[derive(Debug, Default, Clone)]
pub(crate) struct FormulaBuilder {
    pub names: Vec<String>,
    pub clauses: Vec<Clause>,
}

impl FormulaBuilder {
    pub fn fresh(&mut self, name: String) -> usize {
        self.names.push(name);
        self.names.len() - 1
    }

    pub fn build(self) -> Result<NaeFormula, NaeError> {
        NaeFormula::new(self.names, self.clauses)
    }
}

/// Emits a rigid gadget over four fresh variables named `{prefix}.t` etc.
pub(crate) fn emit_rigid(builder: &mut FormulaBuilder, prefix: &str) -> RigidGadget {
    let vars = ["t", "x", "y", "z"].map(|s| builder.fresh(format!("{prefix}.{s}")));
    let gadget = RigidGadget { vars };
    builder.clauses.extend(gadget.clauses());
    gadget
}

/// A standalone rigid gadget: its formula and canonical assignment.
pub fn compile_rigid_gadget(prefix: &str) -> (NaeFormula, RigidGadget, super::Assignment) {
    let mut builder = FormulaBuilder::default();
    let gadget = emit_rigid(&mut builder, prefix);
    let formula = builder.build().expect("rigid gadget clauses are well-formed");
    (formula, gadget, super::Assignment(RIGID_CANONICAL.to_vec()))
}

#[cfg(test)]
mod tests {
    use super::super::{flip_neighbors, nae_satisfies, Assignment};
    use super::*;

    #[test]
    fn template_sizes() {
        let sizes: Vec<(usize, usize, usize, usize)> = GadgetVariant::ALL
            .iter()
            .map(|v| {
                let t = v.template();
                (t.clauses.len(), t.aux, t.trues, t.falses)
            })
            .collect();
        assert_eq!(sizes, vec![(2, 0, 0, 2), (3, 1, 1, 2), (4, 2, 2, 2), (3, 2, 2, 0), (4, 3, 0, 3), (2, 1, 1, 0)]);
    }

    #[test]
    fn and_selection() {
        use Sense::*;
        let p = compile_and_gadget(In, In, In).unwrap();
        assert_eq!(p.template.variant, GadgetVariant::AndInIn);
        assert_eq!(
            p.template.clauses,
            vec![[Slot::EdgeY, Slot::EdgeX, Slot::False(0)], [Slot::EdgeZ, Slot::EdgeX, Slot::False(1)]]
        );
        let p = compile_and_gadget(In, Out, In).unwrap();
        assert_eq!(p.template.clauses.len(), 3);
        assert!(p.template.clauses.contains(&[Slot::EdgeY, Slot::True(0), Slot::Aux(0)]));
        let p = compile_and_gadget(In, In, Out).unwrap();
        assert_eq!(p.binding, [EdgeRole::X, EdgeRole::Z, EdgeRole::Y]);
        let p = compile_and_gadget(In, Out, Out).unwrap();
        assert_eq!((p.template.clauses.len(), p.template.aux), (4, 2));
        assert_eq!(compile_and_gadget(Out, In, In), Err(GadgetError::InvalidPolarityCombination));
    }

    #[test]
    fn or_selection() {
        use Sense::*;
        let p = compile_or_gadget(In, Out, Out).unwrap();
        assert!(p.template.clauses.contains(&[Slot::Aux(0), Slot::Aux(1), Slot::EdgeX]));
        let p = compile_or_gadget(In, In, In).unwrap();
        assert!(p.template.clauses.contains(&[Slot::Aux(0), Slot::Aux(1), Slot::Aux(2)]));
        let p = compile_or_gadget(In, In, Out).unwrap();
        assert_eq!(p.template.clauses.len(), 2);
        assert_eq!(compile_or_gadget(In, Out, In).unwrap().binding[1], EdgeRole::Z);
        assert!(compile_or_gadget(Out, Out, Out).is_err());
    }

    #[test]
    fn every_template_is_a_forest() {
        for v in GadgetVariant::ALL {
            assert!(v.template().incidence_is_forest(), "{}", v.name());
        }
        // sharing one false terminal across the two clauses closes a cycle
        use Slot::*;
        let shared = GadgetTemplate::new(
            GadgetVariant::AndInIn,
            Sense::In,
            Sense::In,
            vec![[EdgeY, EdgeX, False(0)], [EdgeZ, EdgeX, False(0)]],
        );
        assert!(!shared.incidence_is_forest());
    }

    #[test]
    fn rigid_gadget_is_isolated() {
        let (f, _, canon) = compile_rigid_gadget("r");
        assert_eq!((f.clauses().len(), f.num_vars()), (4, 4));
        assert!(nae_satisfies(&f, &canon).unwrap());
        assert!(flip_neighbors(&f, &canon).unwrap().is_empty());
    }

    /// Oracle: enumerate all 16 assignments of the rigid gadget.
    #[test]
    fn rigid_gadget_satisfying_set() {
        let (f, _, canon) = compile_rigid_gadget("r");
        let sat: Vec<Assignment> =
            (0..16).map(|m| Assignment::from_mask(4, m)).filter(|a| nae_satisfies(&f, a).unwrap()).collect();
        // the clauses are all four triples, so exactly the two-true assignments satisfy
        assert_eq!(sat.len(), 6);
        assert!(sat.contains(&canon));
        assert!(sat.iter().all(|a| a.0.iter().filter(|&&b| b).count() == 2));
        for a in &sat {
            for v in 0..4 {
                assert!(!nae_satisfies(&f, &a.flipped(v)).unwrap());
            }
        }
    }
}

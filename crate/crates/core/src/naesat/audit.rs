//! Exhaustive checks of the node gadgets against the NCL node constraints.

use std::fmt;

use super::gadgets::{GadgetTemplate, GadgetVariant, Sense, Slot};
use super::reduction::{layered_bfs, LocalStep};
use super::{compile_rigid_gadget, flip_neighbors, nae_satisfies, Assignment};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuditCheck {
    Projection,
    Lift,
    Forest,
    RigidIsolation,
}

impl fmt::Display for AuditCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AuditCheck::Projection => "projection",
            AuditCheck::Lift => "lift",
            AuditCheck::Forest => "forest",
            AuditCheck::RigidIsolation => "rigid-isolation",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditFailure {
    pub variant: String,
    pub check: AuditCheck,
    pub witness: String,
}

impl fmt::Display for AuditFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} failed {}: {}", self.variant, self.check, self.witness)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditRow {
    pub variant: GadgetVariant,
    pub negated: bool,
    pub clauses: usize,
    pub aux: usize,
    pub trues: usize,
    pub falses: usize,
    /// Local orientations `(x_in, y_in, z_in)` with some satisfying extension.
    pub projection: Vec<[bool; 3]>,
    pub projection_ok: bool,
    /// Number of (orientation, flip, aux start) triples checked.
    pub lifts_checked: usize,
    pub longest_lift: usize,
    pub lifts_ok: bool,
    pub forest_ok: bool,
}

impl AuditRow {
    pub fn label(&self) -> String {
        format!("{}{}", self.variant.name(), if self.negated { " (negated)" } else { "" })
    }

    pub fn passed(&self) -> bool {
        self.projection_ok && self.lifts_ok && self.forest_ok
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    pub rows: Vec<AuditRow>,
    pub rigid_isolated: bool,
    pub failures: Vec<AuditFailure>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Fixed-width table, one line per variant.
    pub fn table(&self) -> String {
        let mut out = format!(
            "{:<28} {:>7} {:>3} {:>2} {:>2} {:>10} {:>6} {:>6}\n",
            "variant", "clauses", "aux", "T", "F", "projection", "lifts", "forest"
        );
        let mark = |b: bool| if b { "ok" } else { "FAIL" };
        for r in &self.rows {
            out.push_str(&format!(
                "{:<28} {:>7} {:>3} {:>2} {:>2} {:>10} {:>6} {:>6}\n",
                r.label(),
                r.clauses,
                r.aux,
                r.trues,
                r.falses,
                mark(r.projection_ok),
                mark(r.lifts_ok),
                mark(r.forest_ok)
            ));
        }
        out.push_str(&format!("rigid gadget isolated: {}\n", mark(self.rigid_isolated)));
        out
    }
}

/// Whether the node accepts the local orientation `(x_in, y_in, z_in)`.
/// AND: blue `x` in, or both red edges in. OR: any edge in.
pub fn node_accepts(is_and: bool, ins: [bool; 3]) -> bool {
    if is_and {
        ins[0] || (ins[1] && ins[2])
    } else {
        ins.iter().any(|&b| b)
    }
}

/// A template evaluated over actual variable values. When `negated`, every
/// variable holds the complement of its symbolic value.
struct LocalGadget<'a> {
    t: &'a GadgetTemplate,
    negated: bool,
}

impl LocalGadget<'_> {
    fn values(&self, ins: [bool; 3], aux_mask: u32) -> Vec<bool> {
        let t = self.t;
        let mut v = vec![false; t.local_vars()];
        for (i, slot) in [Slot::EdgeX, Slot::EdgeY, Slot::EdgeZ].into_iter().enumerate() {
            let sense = t.edge_sense(slot).expect("edge slot");
            v[i] = (sense == Sense::In) == ins[i];
        }
        for k in 0..t.trues {
            v[t.local_index(Slot::True(k as u8))] = true;
        }
        for k in 0..t.falses {
            v[t.local_index(Slot::False(k as u8))] = false;
        }
        for k in 0..t.aux {
            v[t.local_index(Slot::Aux(k as u8))] = aux_mask >> k & 1 == 1;
        }
        if self.negated {
            v.iter_mut().for_each(|b| *b = !*b);
        }
        v
    }

    fn sat(&self, v: &[bool]) -> bool {
        self.t.clauses.iter().all(|c| {
            let [a, b, d] = c.map(|s| v[self.t.local_index(s)]);
            !(a == b && b == d)
        })
    }

    /// Actual aux mask read from actual values.
    fn aux_of(&self, v: &[bool]) -> u32 {
        (0..self.t.aux).fold(0, |m, k| m | (v[self.t.local_index(Slot::Aux(k as u8))] as u32) << k)
    }

    fn sat_at(&self, ins: [bool; 3], actual_aux: u32) -> bool {
        let sym = if self.negated { !actual_aux & self.full() } else { actual_aux };
        self.sat(&self.values(ins, sym))
    }

    fn full(&self) -> u32 {
        (1u32 << self.t.aux) - 1
    }

    /// Actual aux mask chosen by the default rule, if any aux values work.
    fn canonical_aux(&self, ins: [bool; 3]) -> Option<u32> {
        let mut masks: Vec<u32> = (0..=self.full()).collect();
        masks.sort_by_key(|m| (m.count_ones(), *m));
        masks.into_iter().find(|&m| self.sat(&self.values(ins, m))).map(|m| self.aux_of(&self.values(ins, m)))
    }

    fn describe(&self, ins: [bool; 3], actual_aux: u32) -> String {
        let io = |b: bool| if b { "in" } else { "out" };
        let aux: String = (0..self.t.aux).map(|k| if actual_aux >> k & 1 == 1 { '1' } else { '0' }).collect();
        format!("x:{} y:{} z:{} aux={}", io(ins[0]), io(ins[1]), io(ins[2]), if aux.is_empty() { "-" } else { &aux })
    }
}

fn all_ins() -> impl Iterator<Item = [bool; 3]> {
    (0..8u32).map(|m| [m & 1 == 1, m & 2 == 2, m & 4 == 4])
}

fn audit_one(t: &GadgetTemplate, negated: bool, failures: &mut Vec<AuditFailure>) -> AuditRow {
    let g = LocalGadget { t, negated };
    let is_and = t.variant.is_and();
    let mut row = AuditRow {
        variant: t.variant,
        negated,
        clauses: t.clauses.len(),
        aux: t.aux,
        trues: t.trues,
        falses: t.falses,
        projection: vec![],
        projection_ok: true,
        lifts_checked: 0,
        longest_lift: 0,
        lifts_ok: true,
        forest_ok: t.incidence_is_forest(),
    };
    let label = row.label();
    let fail = |failures: &mut Vec<AuditFailure>, check, witness| {
        failures.push(AuditFailure { variant: label.clone(), check, witness })
    };

    // (a) projection of satisfying assignments equals the legal set
    for ins in all_ins() {
        let witness = (0..=g.full()).find(|&m| g.sat_at(ins, m));
        if witness.is_some() {
            row.projection.push(ins);
        }
        match (witness, node_accepts(is_and, ins)) {
            (Some(m), false) => {
                row.projection_ok = false;
                fail(
                    failures,
                    AuditCheck::Projection,
                    format!("illegal orientation satisfied: {}", g.describe(ins, m)),
                );
            }
            (None, true) => {
                row.projection_ok = false;
                fail(
                    failures,
                    AuditCheck::Projection,
                    format!("legal orientation unsatisfiable: {}", g.describe(ins, 0)),
                );
            }
            _ => {}
        }
    }

    // (b) every legal flip lifts from every satisfying aux state to the default aux state
    for ins in all_ins().filter(|&i| node_accepts(is_and, i)) {
        for e in 0..3 {
            let mut next = ins;
            next[e] = !next[e];
            if !node_accepts(is_and, next) {
                continue;
            }
            let Some(goal) = g.canonical_aux(next) else { continue };
            for m in (0..=g.full()).filter(|&m| g.sat_at(ins, m)) {
                row.lifts_checked += 1;
                let mut ok = |phase: bool, mask: u32| g.sat_at(if phase { next } else { ins }, mask);
                match layered_bfs(t.aux, (false, m), (true, goal), &mut ok) {
                    Some(path) => {
                        debug_assert_eq!(path.iter().filter(|s| **s == LocalStep::Edge).count(), 1);
                        row.longest_lift = row.longest_lift.max(path.len());
                    }
                    None => {
                        row.lifts_ok = false;
                        fail(
                            failures,
                            AuditCheck::Lift,
                            format!("no path flipping {} from {}", ["x", "y", "z"][e], g.describe(ins, m)),
                        );
                    }
                }
            }
        }
    }

    if !row.forest_ok {
        fail(failures, AuditCheck::Forest, "variable-clause incidence graph has a cycle".into());
    }
    row
}

fn rigid_isolated(failures: &mut Vec<AuditFailure>) -> bool {
    let (f, _, canon) = compile_rigid_gadget("rigid");
    let mut ok = nae_satisfies(&f, &canon).unwrap_or(false);
    for m in 0..16 {
        let a = Assignment::from_mask(4, m);
        if !nae_satisfies(&f, &a).unwrap_or(false) {
            continue;
        }
        if !flip_neighbors(&f, &a).map(|n| n.is_empty()).unwrap_or(false) {
            ok = false;
            failures.push(AuditFailure {
                variant: "rigid".into(),
                check: AuditCheck::RigidIsolation,
                witness: format!("flippable satisfying assignment t,x,y,z={a}"),
            });
        }
    }
    ok
}

/// Audits the given templates, each in plain and negated form, plus the rigid gadget.
pub fn audit_templates(templates: &[GadgetTemplate]) -> AuditReport {
    let mut failures = Vec::new();
    let mut rows = Vec::new();
    for t in templates {
        for negated in [false, true] {
            rows.push(audit_one(t, negated, &mut failures));
        }
    }
    let rigid_isolated = rigid_isolated(&mut failures);
    AuditReport { rows, rigid_isolated, failures }
}

/// Audits all six gadget variants.
pub fn gadget_audit() -> AuditReport {
    let templates: Vec<GadgetTemplate> = GadgetVariant::ALL.iter().map(|v| v.template()).collect();
    audit_templates(&templates)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_variants_pass() {
        let r = gadget_audit();
        assert!(r.passed(), "{:?}", r.failures);
        assert_eq!(r.rows.len(), 12);
        assert!(r.rigid_isolated);
    }

    #[test]
    fn and_in_in_projection() {
        let r = gadget_audit();
        let row = r.rows.iter().find(|r| r.variant == GadgetVariant::AndInIn && !r.negated).unwrap();
        // {x_in=1, any y,z} ∪ {x_in=0, y_in=z_in=1}
        let mut expected: Vec<[bool; 3]> = all_ins().filter(|i| i[0] || (i[1] && i[2])).collect();
        expected.sort();
        let mut got = row.projection.clone();
        got.sort();
        assert_eq!(got, expected);
        assert_eq!(got.len(), 5);
    }

    #[test]
    fn or_variants_forbid_only_all_outgoing() {
        for row in gadget_audit().rows.iter().filter(|r| !r.variant.is_and()) {
            assert_eq!(row.projection.len(), 7);
            assert!(!row.projection.contains(&[false, false, false]));
        }
    }

    #[test]
    fn shared_false_terminal_in_and_gadget() {
        // a single false terminal for both clauses keeps the semantics but not the forest
        use Slot::*;
        let t = GadgetTemplate::new(
            GadgetVariant::AndInIn,
            Sense::In,
            Sense::In,
            vec![[EdgeY, EdgeX, False(0)], [EdgeZ, EdgeX, False(0)]],
        );
        let r = audit_templates(&[t]);
        assert!(r.rows.iter().all(|r| r.projection_ok && r.lifts_ok && !r.forest_ok));
    }

    #[test]
    fn broken_or_gadget_is_caught() {
        use Slot::*;
        let mut t = GadgetVariant::OrOutOut.template();
        t.clauses[2] = [Aux(0), Aux(1), True(0)];
        let r = audit_templates(&[t]);
        assert!(!r.passed());
        assert!(r
            .failures
            .iter()
            .any(|f| f.check == AuditCheck::Projection && f.witness.contains("x:out y:out z:out")));
    }

    #[test]
    fn or_in_in_lift_is_short() {
        // flipping x_in to true from the all-but-x state: flip x, then release the forced aux
        let r = gadget_audit();
        let row = r.rows.iter().find(|r| r.variant == GadgetVariant::OrInIn && !r.negated).unwrap();
        assert!(row.longest_lift >= 2);
    }
}

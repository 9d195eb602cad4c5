//! Subcommands that work on a single instance file.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use reconfig_core::naesat::{audit_templates, gadget_audit, GadgetVariant, Slot};
use reconfig_core::statespace::{check_certificate, explore_component, reachable, SearchError, SearchLimits};
use reconfig_core::ReconfigurationSpace;

use crate::error::{invalid, CliError, Result};
use crate::model::{canonical_json, digest, load_instance, read_json, write_json, Codec, Instance, Problem, Visitor};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateFile {
    pub problem: Problem,
    pub instance_digest: String,
    pub configurations: Vec<Value>,
    /// `moves[i]` describes the step from configuration `i` to `i + 1`.
    pub moves: Vec<String>,
}

/// Digest of the normalized envelope, so whitespace and key order do not matter.
pub fn instance_digest(inst: &Instance) -> String {
    digest(&serde_json::to_value(inst.to_envelope()).expect("serializable"))
}

fn search_error(e: SearchError) -> CliError {
    match e {
        SearchError::ResourceCapExceeded { .. } => CliError::Cap(e.to_string()),
        SearchError::InfeasibleEndpoint(_) | SearchError::InvalidLimits => invalid(e),
    }
}

pub fn certificate_file<C: Codec>(problem: Problem, digest: String, codec: &C, path: &[C::Config]) -> CertificateFile {
    CertificateFile {
        problem,
        instance_digest: digest,
        configurations: path.iter().map(|c| codec.to_json(c)).collect(),
        moves: path.windows(2).map(|w| codec.describe(&w[0], &w[1])).collect(),
    }
}

pub fn verify(path: &Path) -> Result<()> {
    let (_, inst) = load_instance(path)?;
    println!("ok: valid {} instance, digest {}", inst.problem(), instance_digest(&inst));
    Ok(())
}

struct Solve<'a> {
    problem: Problem,
    digest: String,
    limits: SearchLimits,
    emit: Option<&'a Path>,
}

impl Visitor for Solve<'_> {
    type Output = Result<bool>;

    fn visit<S, C>(self, space: &S, codec: &C, start: &S::Config, goal: &S::Config) -> Result<bool>
    where
        S: ReconfigurationSpace,
        C: Codec<Config = S::Config>,
    {
        let result = reachable(space, start, goal, self.limits).map_err(search_error)?;
        match &result.certificate {
            Some(path) => {
                println!("reachable in {} moves ({} states explored)", path.len() - 1, result.states_explored);
                if let Some(out) = self.emit {
                    write_json(out, &certificate_file(self.problem, self.digest, codec, path))?;
                }
            }
            None => println!("unreachable ({} states explored)", result.states_explored),
        }
        Ok(result.reachable)
    }
}

pub fn solve(path: &Path, limits: SearchLimits, emit: Option<&Path>) -> Result<bool> {
    let (_, inst) = load_instance(path)?;
    inst.visit(Solve { problem: inst.problem(), digest: instance_digest(&inst), limits, emit })
}

struct Replay<'a> {
    cert: &'a CertificateFile,
}

impl Visitor for Replay<'_> {
    type Output = Result<()>;

    fn visit<S, C>(self, space: &S, codec: &C, start: &S::Config, goal: &S::Config) -> Result<()>
    where
        S: ReconfigurationSpace,
        C: Codec<Config = S::Config>,
    {
        let path = self
            .cert
            .configurations
            .iter()
            .enumerate()
            .map(|(i, v)| codec.parse_json(v).map_err(|e| invalid(format!("configuration {i}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        let check = check_certificate(space, &path);
        if !check.is_valid() {
            return Err(invalid(check));
        }
        if path.first() != Some(start) {
            return Err(invalid("certificate does not begin at the instance start"));
        }
        if path.last() != Some(goal) {
            return Err(invalid("certificate does not end at the instance goal"));
        }
        Ok(())
    }
}

pub fn check_cert(instance: &Path, cert: &Path) -> Result<()> {
    let (_, inst) = load_instance(instance)?;
    let cert: CertificateFile =
        serde_json::from_value(read_json(cert)?).map_err(|e| invalid(format!("certificate: {e}")))?;
    if cert.problem != inst.problem() {
        return Err(invalid(format!("certificate is for a {} instance, not {}", cert.problem, inst.problem())));
    }
    let expected = instance_digest(&inst);
    if cert.instance_digest != expected {
        return Err(invalid(format!(
            "digest mismatch: certificate has {}, instance is {expected}",
            cert.instance_digest
        )));
    }
    inst.visit(Replay { cert: &cert })?;
    println!("ok: {} configurations, {} moves", cert.configurations.len(), cert.configurations.len() - 1);
    Ok(())
}

/// Runs the gadget audit. `inject_fault` swaps one clause of the OR gadget
/// with both edges outgoing, to exercise the failure path.
pub fn gadget_audit_cmd(inject_fault: bool) -> Result<()> {
    let report = if inject_fault {
        let templates: Vec<_> = GadgetVariant::ALL
            .iter()
            .map(|v| {
                let mut t = v.template();
                if *v == GadgetVariant::OrOutOut {
                    t.clauses[2] = [Slot::Aux(0), Slot::Aux(1), Slot::True(0)];
                }
                t
            })
            .collect();
        audit_templates(&templates)
    } else {
        gadget_audit()
    };
    print!("{}", report.table());
    if report.passed() {
        return Ok(());
    }
    for f in &report.failures {
        eprintln!("{f}");
    }
    Err(CliError::Audit)
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

const LABEL_LIMIT: usize = 24;

struct ConfigGraph {
    cap: usize,
}

impl Visitor for ConfigGraph {
    type Output = Result<String>;

    fn visit<S, C>(self, space: &S, codec: &C, start: &S::Config, _goal: &S::Config) -> Result<String>
    where
        S: ReconfigurationSpace,
        C: Codec<Config = S::Config>,
    {
        let limits = SearchLimits::default().with_max_states(self.cap).map_err(invalid)?;
        let comp = explore_component(space, start, limits).map_err(search_error)?;
        let mut out = String::from("digraph component {\n  edge [dir=none];\n");
        for (i, c) in comp.configs.iter().enumerate() {
            let full = match codec.to_json(c) {
                Value::String(s) => s,
                other => canonical_json(&other),
            };
            let label = match full.char_indices().nth(LABEL_LIMIT) {
                Some((cut, _)) => format!("{}...", &full[..cut]),
                None => full.clone(),
            };
            writeln!(out, "  n{i} [label=\"{}\", tooltip=\"{}\"];", dot_escape(&label), dot_escape(&full)).unwrap();
        }
        for (i, j) in &comp.edges {
            writeln!(out, "  n{i} -> n{j};").unwrap();
        }
        out.push_str("}\n");
        Ok(out)
    }
}

fn structure_dot(inst: &Instance) -> Result<String> {
    let mut out = String::new();
    match inst {
        Instance::Ncl { graph, start, .. } => {
            out.push_str("digraph ncl {\n");
            for n in graph.nodes() {
                let shape = if n.kind == reconfig_core::ncl::NodeKind::And { "box" } else { "ellipse" };
                writeln!(out, "  \"{}\" [shape={shape}];", dot_escape(&n.id)).unwrap();
            }
            for (i, e) in graph.edges().iter().enumerate() {
                let head = start.head(i);
                let tail = e.other(head);
                let color = if e.color == reconfig_core::ncl::EdgeColor::Red { "red" } else { "blue" };
                let width = if color == "blue" { 2 } else { 1 };
                writeln!(
                    out,
                    "  \"{}\" -> \"{}\" [label=\"{}\", color={color}, penwidth={width}];",
                    dot_escape(&graph.nodes()[tail].id),
                    dot_escape(&graph.nodes()[head].id),
                    dot_escape(&e.id)
                )
                .unwrap();
            }
        }
        Instance::Nae { formula, .. } => {
            let clauses: Vec<Vec<_>> = formula.clauses().iter().map(|c| c.0.to_vec()).collect();
            incidence_dot(&mut out, "naesat", formula.names(), &clauses);
        }
        Instance::Sat { formula, .. } => incidence_dot(&mut out, "sat", formula.names(), formula.clauses()),
        Instance::Tokens(t) => {
            out.push_str("graph tokens {\n");
            let names = t.graph.names();
            for (v, name) in names.iter().enumerate() {
                match t.start.token_at(v) {
                    Some(k) => writeln!(
                        out,
                        "  \"{}\" [label=\"{}\\n{}\", style=filled];",
                        dot_escape(name),
                        dot_escape(name),
                        dot_escape(&t.tokens[k])
                    ),
                    None => writeln!(out, "  \"{}\";", dot_escape(name)),
                }
                .unwrap();
            }
            for (u, v) in t.graph.edges() {
                writeln!(out, "  \"{}\" -- \"{}\";", dot_escape(&names[u]), dot_escape(&names[v])).unwrap();
            }
        }
        Instance::ExactCover { instance, .. } => {
            out.push_str("graph exactcover {\n");
            for (e, name) in instance.universe().iter().enumerate() {
                writeln!(out, "  e{e} [label=\"{}\"];", dot_escape(name)).unwrap();
            }
            for (s, set) in instance.family().iter().enumerate() {
                let style = if instance.start.contains(s) { ", style=filled" } else { "" };
                writeln!(out, "  s{s} [label=\"S{s}\", shape=box{style}];").unwrap();
                for e in set {
                    writeln!(out, "  s{s} -- e{e};").unwrap();
                }
            }
        }
        Instance::SubsetSum { .. } | Instance::Hypercube(_) => {
            return Err(CliError::Unsupported(format!(
                "{} instances have no structure graph; use --config-graph",
                inst.problem()
            )))
        }
    }
    out.push_str("}\n");
    Ok(out)
}

fn incidence_dot(out: &mut String, name: &str, vars: &[String], clauses: &[Vec<reconfig_core::naesat::Literal>]) {
    writeln!(out, "graph {name} {{").unwrap();
    for (v, n) in vars.iter().enumerate() {
        writeln!(out, "  x{v} [label=\"{}\"];", dot_escape(n)).unwrap();
    }
    for (c, lits) in clauses.iter().enumerate() {
        writeln!(out, "  c{c} [label=\"C{c}\", shape=box];").unwrap();
        for l in lits {
            let style = if l.negated { " [style=dashed]" } else { "" };
            writeln!(out, "  c{c} -- x{}{style};", l.var).unwrap();
        }
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Write { path: p.into(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn export_dot(path: &Path, config_graph: bool, cap: usize, out: Option<&Path>) -> Result<()> {
    let (_, inst) = load_instance(path)?;
    let text = if config_graph { inst.visit(ConfigGraph { cap })? } else { structure_dot(&inst)? };
    emit(&text, out)
}

pub fn export_dimacs(path: &Path, out: Option<&Path>) -> Result<()> {
    let (_, inst) = load_instance(path)?;
    let (semantics, names, clauses): (&str, &[String], Vec<Vec<_>>) = match &inst {
        Instance::Nae { formula, .. } => {
            ("not-all-equal", formula.names(), formula.clauses().iter().map(|c| c.0.to_vec()).collect())
        }
        Instance::Sat { formula, .. } => ("cnf", formula.names(), formula.clauses().to_vec()),
        other => return Err(CliError::Unsupported(format!("DIMACS export of {} instances", other.problem()))),
    };
    let mut text = String::new();
    writeln!(text, "c semantics: {semantics}").unwrap();
    if semantics == "not-all-equal" {
        text.push_str("c each clause needs at least one true and one false literal\n");
    }
    for (i, n) in names.iter().enumerate() {
        writeln!(text, "c var {} {n}", i + 1).unwrap();
    }
    writeln!(text, "p cnf {} {}", names.len(), clauses.len()).unwrap();
    for c in &clauses {
        for l in c {
            let v = l.var as i64 + 1;
            write!(text, "{} ", if l.negated { -v } else { v }).unwrap();
        }
        text.push_str("0\n");
    }
    emit(&text, out)
}

pub fn export_axb(path: &Path, out: Option<&Path>) -> Result<()> {
    let (_, inst) = load_instance(path)?;
    let Instance::Hypercube(p) = &inst else {
        return Err(CliError::Unsupported(format!("Ax <= b export of {} instances", inst.problem())));
    };
    let form = reconfig_core::hypercube::to_axb(p);
    let doc = serde_json::json!({ "a": form.a, "b": form.b });
    let mut text = serde_json::to_string_pretty(&doc).expect("json");
    text.push('\n');
    emit(&text, out)
}

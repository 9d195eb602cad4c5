//! JSON envelopes and the typed instances behind them.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::path::Path;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use reconfig_core::exactcover::{Cover, CoverSpace, ExactCoverInstance, MoveKind};
use reconfig_core::graph::SimpleGraph;
use reconfig_core::hypercube::{HypercubeSpace, PolytopeInstance, Vertex};
use reconfig_core::naesat::{Assignment, Clause, CnfFlipSpace, CnfFormula, Literal, NaeFlipSpace, NaeFormula};
use reconfig_core::ncl::{C2cSpace, ConstraintGraph, EdgeColor, NodeKind, Orientation};
use reconfig_core::subsetsum::{KMoveSpace, Selection, SubsetSumInstance};
use reconfig_core::tokens::{Placement, TokenInstance, TokenSlideSpace};
use reconfig_core::ReconfigurationSpace;

use crate::error::{invalid, CliError, Result};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    Ncl,
    Naesat,
    #[serde(rename = "3sat")]
    #[value(name = "3sat")]
    Sat,
    Tokens,
    Exactcover,
    Subsetsum,
    Hypercube,
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().expect("string"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Envelope {
    pub problem: Problem,
    pub version: u32,
    pub data: Value,
    pub start: Value,
    pub goal: Value,
}

/// Serializes with object keys sorted at every level and no whitespace.
pub fn canonical_json(v: &Value) -> String {
    fn write(v: &Value, out: &mut String) {
        match v {
            Value::Object(map) => {
                let mut keys: Vec<&String> = map.keys().collect();
                keys.sort();
                out.push('{');
                for (i, k) in keys.into_iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    out.push_str(&Value::String(k.clone()).to_string());
                    out.push(':');
                    write(&map[k], out);
                }
                out.push('}');
            }
            Value::Array(items) => {
                out.push('[');
                for (i, x) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    write(x, out);
                }
                out.push(']');
            }
            other => out.push_str(&other.to_string()),
        }
    }
    let mut out = String::new();
    write(v, &mut out);
    out
}

pub fn digest(v: &Value) -> String {
    hex::encode(Sha256::digest(canonical_json(v).as_bytes()))
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read { path: path.into(), source })?;
    serde_json::from_str(&text).map_err(|source| CliError::Parse { path: path.into(), source })
}

pub fn write_json(path: &Path, v: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(v).expect("serializable");
    text.push('\n');
    std::fs::write(path, text).map_err(|source| CliError::Write { path: path.into(), source })
}

/// Reads an envelope file; returns the raw JSON (for digests) and the parsed instance.
pub fn load_instance(path: &Path) -> Result<(Value, Instance)> {
    let raw = read_json(path)?;
    let inst = Instance::from_value(&raw)?;
    Ok((raw, inst))
}

fn from_value<T: for<'de> Deserialize<'de>>(what: &str, v: &Value) -> Result<T> {
    serde_json::from_value(v.clone()).map_err(|e| invalid(format!("{what}: {e}")))
}

// ------------------------------------------------------------------ data blocks

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum KindTag {
    And,
    Or,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum ColorTag {
    Red,
    Blue,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NclNode {
    id: String,
    kind: KindTag,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NclEdge {
    id: String,
    u: String,
    v: String,
    color: ColorTag,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NclData {
    nodes: Vec<NclNode>,
    edges: Vec<NclEdge>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FormulaData {
    variables: Vec<String>,
    /// Literals are variable names, negated with a leading `-`.
    clauses: Vec<Vec<String>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TokensData {
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
    tokens: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum MovesTag {
    SplitMerge,
    ManyWay,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExactCoverData {
    universe: Vec<String>,
    family: Vec<Vec<String>>,
    moves: MovesTag,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SubsetSumData {
    values: Vec<String>,
    target: String,
    k: usize,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HypercubeData {
    n: usize,
    d: usize,
    columns: Vec<Vec<u64>>,
    lower: Vec<u64>,
    upper: Vec<u64>,
}

// ------------------------------------------------------------------ instances

#[derive(Debug, Clone)]
pub enum Instance {
    Ncl { graph: ConstraintGraph, start: Orientation, goal: Orientation },
    Nae { formula: NaeFormula, start: Assignment, goal: Assignment },
    Sat { formula: CnfFormula, start: Assignment, goal: Assignment },
    Tokens(TokenInstance),
    ExactCover { instance: ExactCoverInstance, moves: MoveKind },
    SubsetSum { instance: SubsetSumInstance, k: usize },
    Hypercube(PolytopeInstance),
}

fn parse_literal(s: &str, names: &HashMap<&str, usize>) -> Result<Literal> {
    let (neg, name) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let var = *names.get(name).ok_or_else(|| invalid(format!("unknown variable `{name}`")))?;
    Ok(if neg { Literal::neg(var) } else { Literal::pos(var) })
}

fn literal_name(l: &Literal, names: &[String]) -> String {
    if l.negated {
        format!("-{}", names[l.var])
    } else {
        names[l.var].clone()
    }
}

fn biguint(s: &str) -> Result<BigUint> {
    s.parse().map_err(|_| invalid(format!("`{s}` is not a non-negative decimal integer")))
}

impl Instance {
    pub fn problem(&self) -> Problem {
        match self {
            Instance::Ncl { .. } => Problem::Ncl,
            Instance::Nae { .. } => Problem::Naesat,
            Instance::Sat { .. } => Problem::Sat,
            Instance::Tokens(_) => Problem::Tokens,
            Instance::ExactCover { .. } => Problem::Exactcover,
            Instance::SubsetSum { .. } => Problem::Subsetsum,
            Instance::Hypercube(_) => Problem::Hypercube,
        }
    }

    pub fn from_value(raw: &Value) -> Result<Instance> {
        let env: Envelope = from_value("envelope", raw)?;
        if env.version != FORMAT_VERSION {
            return Err(invalid(format!("unsupported format version {} (expected {FORMAT_VERSION})", env.version)));
        }
        Instance::from_envelope(&env)
    }

    pub fn from_envelope(env: &Envelope) -> Result<Instance> {
        match env.problem {
            Problem::Ncl => {
                let d: NclData = from_value("ncl data", &env.data)?;
                let nodes: Vec<(&str, NodeKind)> = d
                    .nodes
                    .iter()
                    .map(|n| (n.id.as_str(), if n.kind == KindTag::And { NodeKind::And } else { NodeKind::Or }))
                    .collect();
                let edges: Vec<(&str, &str, &str, EdgeColor)> = d
                    .edges
                    .iter()
                    .map(|e| {
                        let c = if e.color == ColorTag::Red { EdgeColor::Red } else { EdgeColor::Blue };
                        (e.id.as_str(), e.u.as_str(), e.v.as_str(), c)
                    })
                    .collect();
                let graph = ConstraintGraph::from_ids(&nodes, &edges).map_err(invalid)?;
                let report = graph.validate();
                if !report.is_valid() {
                    return Err(invalid(format!("invalid constraint graph: {}", report.describe(&graph).join("; "))));
                }
                let codec = NclCodec { graph: &graph };
                let start = codec.parse_json(&env.start)?;
                let goal = codec.parse_json(&env.goal)?;
                for (o, which) in [(&start, "start"), (&goal, "goal")] {
                    if !C2cSpace::new(&graph).is_feasible(o) {
                        return Err(invalid(format!("{which} orientation is not legal")));
                    }
                }
                Ok(Instance::Ncl { graph, start, goal })
            }
            Problem::Naesat | Problem::Sat => {
                let d: FormulaData = from_value("formula data", &env.data)?;
                let index: HashMap<&str, usize> =
                    d.variables.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
                let clauses: Vec<Vec<Literal>> = d
                    .clauses
                    .iter()
                    .map(|c| c.iter().map(|l| parse_literal(l, &index)).collect::<Result<Vec<_>>>())
                    .collect::<Result<_>>()?;
                let codec = AssignmentCodec { names: &d.variables };
                let start = codec.parse_json(&env.start)?;
                let goal = codec.parse_json(&env.goal)?;
                if env.problem == Problem::Naesat {
                    let clauses = clauses
                        .into_iter()
                        .enumerate()
                        .map(|(i, c)| {
                            <[Literal; 3]>::try_from(c)
                                .map(Clause)
                                .map_err(|c| invalid(format!("clause {i} has {} literals, expected 3", c.len())))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    let formula = NaeFormula::new(d.variables.clone(), clauses).map_err(invalid)?;
                    for (a, which) in [(&start, "start"), (&goal, "goal")] {
                        if let Some(i) = formula.clauses().iter().position(|c| !c.nae_holds(a)) {
                            return Err(invalid(format!("{which} assignment violates clause {i}")));
                        }
                    }
                    Ok(Instance::Nae { formula, start, goal })
                } else {
                    let formula = CnfFormula::new(d.variables.clone(), clauses).map_err(invalid)?;
                    for (a, which) in [(&start, "start"), (&goal, "goal")] {
                        if let Some(i) = formula.clauses().iter().position(|c| !c.iter().any(|l| l.value(a))) {
                            return Err(invalid(format!("{which} assignment violates clause {i}")));
                        }
                    }
                    Ok(Instance::Sat { formula, start, goal })
                }
            }
            Problem::Tokens => {
                let d: TokensData = from_value("tokens data", &env.data)?;
                let names: Vec<&str> = d.vertices.iter().map(String::as_str).collect();
                let edges: Vec<(&str, &str)> = d.edges.iter().map(|(u, v)| (u.as_str(), v.as_str())).collect();
                let graph = SimpleGraph::from_names(&names, &edges).map_err(invalid)?;
                let codec = TokenCodec { graph: &graph, tokens: &d.tokens };
                let start = codec.parse_json(&env.start)?;
                let goal = codec.parse_json(&env.goal)?;
                Ok(Instance::Tokens(TokenInstance::new(graph, d.tokens, start, goal).map_err(invalid)?))
            }
            Problem::Exactcover => {
                let d: ExactCoverData = from_value("exactcover data", &env.data)?;
                let index: HashMap<&str, usize> = d.universe.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
                let family = d.family.iter().map(|s| element_indices(s, &index)).collect::<Result<Vec<_>>>()?;
                let start = cover_from_json(&env.start, &index, &d.universe, &family)?;
                let goal = cover_from_json(&env.goal, &index, &d.universe, &family)?;
                let moves = match d.moves {
                    MovesTag::SplitMerge => MoveKind::SplitMerge,
                    MovesTag::ManyWay => MoveKind::PartitionUnion,
                };
                let instance = ExactCoverInstance::new(d.universe.clone(), family, start, goal).map_err(invalid)?;
                Ok(Instance::ExactCover { instance, moves })
            }
            Problem::Subsetsum => {
                let d: SubsetSumData = from_value("subsetsum data", &env.data)?;
                let values = d.values.iter().map(|v| biguint(v)).collect::<Result<Vec<_>>>()?;
                let start = Selection::new(from_value("start", &env.start)?).map_err(invalid)?;
                let goal = Selection::new(from_value("goal", &env.goal)?).map_err(invalid)?;
                if d.k == 0 {
                    return Err(invalid("k must be at least 1"));
                }
                let instance = SubsetSumInstance::new(values, biguint(&d.target)?, start, goal).map_err(invalid)?;
                Ok(Instance::SubsetSum { instance, k: d.k })
            }
            Problem::Hypercube => {
                let d: HypercubeData = from_value("hypercube data", &env.data)?;
                if d.columns.len() != d.n {
                    return Err(invalid(format!("n = {} but {} columns given", d.n, d.columns.len())));
                }
                if d.lower.len() != d.d {
                    return Err(invalid(format!("d = {} but {} row bounds given", d.d, d.lower.len())));
                }
                let codec = VertexCodec { n: d.n };
                let start = codec.parse_json(&env.start)?;
                let goal = codec.parse_json(&env.goal)?;
                Ok(Instance::Hypercube(
                    PolytopeInstance::new(d.columns, d.lower, d.upper, start, goal).map_err(invalid)?,
                ))
            }
        }
    }

    pub fn to_envelope(&self) -> Envelope {
        let (data, start, goal) = match self {
            Instance::Ncl { graph, start, goal } => {
                let data = NclData {
                    nodes: graph
                        .nodes()
                        .iter()
                        .map(|n| NclNode {
                            id: n.id.clone(),
                            kind: if n.kind == NodeKind::And { KindTag::And } else { KindTag::Or },
                        })
                        .collect(),
                    edges: graph
                        .edges()
                        .iter()
                        .map(|e| NclEdge {
                            id: e.id.clone(),
                            u: graph.nodes()[e.u].id.clone(),
                            v: graph.nodes()[e.v].id.clone(),
                            color: if e.color == EdgeColor::Red { ColorTag::Red } else { ColorTag::Blue },
                        })
                        .collect(),
                };
                let c = NclCodec { graph };
                (serde_json::to_value(data), c.to_json(start), c.to_json(goal))
            }
            Instance::Nae { formula, start, goal } => {
                let names = formula.names();
                let data = FormulaData {
                    variables: names.to_vec(),
                    clauses: formula
                        .clauses()
                        .iter()
                        .map(|c| c.0.iter().map(|l| literal_name(l, names)).collect())
                        .collect(),
                };
                let c = AssignmentCodec { names };
                (serde_json::to_value(data), c.to_json(start), c.to_json(goal))
            }
            Instance::Sat { formula, start, goal } => {
                let names = formula.names();
                let data = FormulaData {
                    variables: names.to_vec(),
                    clauses: formula
                        .clauses()
                        .iter()
                        .map(|c| c.iter().map(|l| literal_name(l, names)).collect())
                        .collect(),
                };
                let c = AssignmentCodec { names };
                (serde_json::to_value(data), c.to_json(start), c.to_json(goal))
            }
            Instance::Tokens(t) => {
                let g = &t.graph;
                let data = TokensData {
                    vertices: g.names().to_vec(),
                    edges: g.edges().into_iter().map(|(u, v)| (g.names()[u].clone(), g.names()[v].clone())).collect(),
                    tokens: t.tokens.clone(),
                };
                let c = TokenCodec { graph: g, tokens: &t.tokens };
                (serde_json::to_value(data), c.to_json(&t.start), c.to_json(&t.goal))
            }
            Instance::ExactCover { instance, moves } => {
                let u = instance.universe();
                let data = ExactCoverData {
                    universe: u.to_vec(),
                    family: instance.family().iter().map(|s| s.iter().map(|&e| u[e].clone()).collect()).collect(),
                    moves: if *moves == MoveKind::SplitMerge { MovesTag::SplitMerge } else { MovesTag::ManyWay },
                };
                let c = CoverCodec { instance };
                (serde_json::to_value(data), c.to_json(&instance.start), c.to_json(&instance.goal))
            }
            Instance::SubsetSum { instance, k } => {
                let data = SubsetSumData {
                    values: instance.values().iter().map(|v| v.to_string()).collect(),
                    target: instance.target().to_string(),
                    k: *k,
                };
                let c = SelectionCodec;
                (serde_json::to_value(data), c.to_json(&instance.start), c.to_json(&instance.goal))
            }
            Instance::Hypercube(p) => {
                let data = HypercubeData {
                    n: p.n(),
                    d: p.d(),
                    columns: (0..p.n()).map(|i| p.column(i)).collect(),
                    lower: p.lower().to_vec(),
                    upper: p.upper().to_vec(),
                };
                let c = VertexCodec { n: p.n() };
                (serde_json::to_value(data), c.to_json(&p.start), c.to_json(&p.goal))
            }
        };
        Envelope { problem: self.problem(), version: FORMAT_VERSION, data: data.expect("serializable"), start, goal }
    }

    pub fn visit<V: Visitor>(&self, v: V) -> V::Output {
        match self {
            Instance::Ncl { graph, start, goal } => v.visit(&C2cSpace::new(graph), &NclCodec { graph }, start, goal),
            Instance::Nae { formula, start, goal } => {
                v.visit(&NaeFlipSpace::new(formula), &AssignmentCodec { names: formula.names() }, start, goal)
            }
            Instance::Sat { formula, start, goal } => {
                v.visit(&CnfFlipSpace::new(formula), &AssignmentCodec { names: formula.names() }, start, goal)
            }
            Instance::Tokens(t) => v.visit(
                &TokenSlideSpace::new(&t.graph),
                &TokenCodec { graph: &t.graph, tokens: &t.tokens },
                &t.start,
                &t.goal,
            ),
            Instance::ExactCover { instance, moves } => {
                v.visit(&CoverSpace::new(instance, *moves), &CoverCodec { instance }, &instance.start, &instance.goal)
            }
            Instance::SubsetSum { instance, k } => v.visit(
                &KMoveSpace::new(instance, *k).expect("k validated on load"),
                &SelectionCodec,
                &instance.start,
                &instance.goal,
            ),
            Instance::Hypercube(p) => v.visit(&HypercubeSpace::new(p), &VertexCodec { n: p.n() }, &p.start, &p.goal),
        }
    }
}

/// Work that runs against any model's configuration space.
pub trait Visitor {
    type Output;
    fn visit<S, C>(self, space: &S, codec: &C, start: &S::Config, goal: &S::Config) -> Self::Output
    where
        S: ReconfigurationSpace,
        C: Codec<Config = S::Config>;
}

/// JSON form of one model's configurations.
pub trait Codec {
    type Config;
    fn to_json(&self, c: &Self::Config) -> Value;
    fn parse_json(&self, v: &Value) -> Result<Self::Config>;
    /// Human-readable description of a single move.
    fn describe(&self, from: &Self::Config, to: &Self::Config) -> String;
}

pub struct NclCodec<'a> {
    pub graph: &'a ConstraintGraph,
}

impl Codec for NclCodec<'_> {
    type Config = Orientation;

    fn to_json(&self, o: &Orientation) -> Value {
        let g = self.graph;
        let map: BTreeMap<&str, &str> =
            g.edges().iter().enumerate().map(|(i, e)| (e.id.as_str(), g.nodes()[o.head(i)].id.as_str())).collect();
        serde_json::to_value(map).expect("string map")
    }

    fn parse_json(&self, v: &Value) -> Result<Orientation> {
        let map: BTreeMap<String, String> = from_value("orientation", v)?;
        if map.len() != self.graph.edges().len() {
            return Err(invalid(format!(
                "orientation lists {} edges, graph has {}",
                map.len(),
                self.graph.edges().len()
            )));
        }
        Orientation::from_ids(self.graph, map.iter().map(|(e, h)| (e.as_str(), h.as_str()))).map_err(invalid)
    }

    fn describe(&self, from: &Orientation, to: &Orientation) -> String {
        let g = self.graph;
        match (0..g.edges().len()).find(|&i| from.head(i) != to.head(i)) {
            Some(i) => format!("reverse {} toward {}", g.edges()[i].id, g.nodes()[to.head(i)].id),
            None => "no change".into(),
        }
    }
}

pub struct AssignmentCodec<'a> {
    pub names: &'a [String],
}

impl Codec for AssignmentCodec<'_> {
    type Config = Assignment;

    fn to_json(&self, a: &Assignment) -> Value {
        Value::String(a.to_string())
    }

    fn parse_json(&self, v: &Value) -> Result<Assignment> {
        let s = v.as_str().ok_or_else(|| invalid("assignment must be a 0/1 string"))?;
        let a = Assignment::from_bits(s).ok_or_else(|| invalid(format!("`{s}` is not a 0/1 string")))?;
        if a.len() != self.names.len() {
            return Err(invalid(format!(
                "assignment has {} bits, formula has {} variables",
                a.len(),
                self.names.len()
            )));
        }
        Ok(a)
    }

    fn describe(&self, from: &Assignment, to: &Assignment) -> String {
        match (0..from.len()).find(|&i| from.get(i) != to.get(i)) {
            Some(i) => format!("set {} = {}", self.names[i], to.get(i) as u8),
            None => "no change".into(),
        }
    }
}

pub struct TokenCodec<'a> {
    pub graph: &'a SimpleGraph,
    pub tokens: &'a [String],
}

impl Codec for TokenCodec<'_> {
    type Config = Placement;

    fn to_json(&self, p: &Placement) -> Value {
        let map: BTreeMap<&str, &str> = self
            .tokens
            .iter()
            .enumerate()
            .map(|(t, name)| (name.as_str(), self.graph.names()[p.vertex(t)].as_str()))
            .collect();
        serde_json::to_value(map).expect("string map")
    }

    fn parse_json(&self, v: &Value) -> Result<Placement> {
        let map: BTreeMap<String, String> = from_value("placement", v)?;
        if map.len() != self.tokens.len() {
            return Err(invalid(format!("placement lists {} tokens, instance has {}", map.len(), self.tokens.len())));
        }
        let vertices = self
            .tokens
            .iter()
            .map(|t| {
                let at = map.get(t).ok_or_else(|| invalid(format!("token `{t}` is not placed")))?;
                self.graph.vertex_index(at).ok_or_else(|| invalid(format!("unknown vertex `{at}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Placement(vertices))
    }

    fn describe(&self, from: &Placement, to: &Placement) -> String {
        let names = self.graph.names();
        match (0..from.len()).find(|&t| from.vertex(t) != to.vertex(t)) {
            Some(t) => format!("slide {} {} -> {}", self.tokens[t], names[from.vertex(t)], names[to.vertex(t)]),
            None => "no change".into(),
        }
    }
}

fn element_indices(set: &[String], index: &HashMap<&str, usize>) -> Result<Vec<usize>> {
    set.iter()
        .map(|e| index.get(e.as_str()).copied().ok_or_else(|| invalid(format!("unknown element `{e}`"))))
        .collect()
}

fn cover_from_json(
    v: &Value,
    index: &HashMap<&str, usize>,
    universe: &[String],
    family: &[Vec<usize>],
) -> Result<Cover> {
    let sets: Vec<Vec<String>> = from_value("cover", v)?;
    let lookup: HashMap<Vec<usize>, usize> = family
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let mut s = s.clone();
            s.sort_unstable();
            (s, i)
        })
        .collect();
    let idx = sets
        .iter()
        .map(|s| {
            let mut e = element_indices(s, index)?;
            e.sort_unstable();
            lookup.get(&e).copied().ok_or_else(|| {
                invalid(format!(
                    "{{{}}} is not a family set",
                    e.iter().map(|&x| universe[x].as_str()).collect::<Vec<_>>().join(",")
                ))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Cover::new(idx).map_err(invalid)
}

pub struct CoverCodec<'a> {
    pub instance: &'a ExactCoverInstance,
}

impl CoverCodec<'_> {
    fn set_names(&self, s: usize) -> Vec<&str> {
        self.instance.family()[s].iter().map(|&e| self.instance.universe()[e].as_str()).collect()
    }

    fn braces(&self, s: usize) -> String {
        format!("{{{}}}", self.set_names(s).join(","))
    }
}

impl Codec for CoverCodec<'_> {
    type Config = Cover;

    fn to_json(&self, c: &Cover) -> Value {
        serde_json::to_value(c.sets().iter().map(|&s| self.set_names(s)).collect::<Vec<_>>()).expect("nested strings")
    }

    fn parse_json(&self, v: &Value) -> Result<Cover> {
        let index: HashMap<&str, usize> =
            self.instance.universe().iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        cover_from_json(v, &index, self.instance.universe(), self.instance.family())
    }

    fn describe(&self, from: &Cover, to: &Cover) -> String {
        let gone: Vec<String> = from.sets().iter().filter(|&&s| !to.contains(s)).map(|&s| self.braces(s)).collect();
        let new: Vec<String> = to.sets().iter().filter(|&&s| !from.contains(s)).map(|&s| self.braces(s)).collect();
        match (gone.len(), new.len()) {
            (1, _) => format!("split {} into {}", gone[0], new.join(" + ")),
            (_, 1) => format!("merge {} into {}", gone.join(" + "), new[0]),
            _ => format!("replace {} with {}", gone.join(" + "), new.join(" + ")),
        }
    }
}

pub struct SelectionCodec;

impl Codec for SelectionCodec {
    type Config = Selection;

    fn to_json(&self, s: &Selection) -> Value {
        serde_json::to_value(s.items()).expect("indices")
    }

    fn parse_json(&self, v: &Value) -> Result<Selection> {
        Selection::new(from_value("selection", v)?).map_err(invalid)
    }

    fn describe(&self, from: &Selection, to: &Selection) -> String {
        let gone: Vec<usize> = from.items().iter().copied().filter(|&i| !to.contains(i)).collect();
        let new: Vec<usize> = to.items().iter().copied().filter(|&i| !from.contains(i)).collect();
        format!("remove {gone:?} add {new:?}")
    }
}

pub struct VertexCodec {
    pub n: usize,
}

impl Codec for VertexCodec {
    type Config = Vertex;

    fn to_json(&self, v: &Vertex) -> Value {
        Value::String(v.to_string())
    }

    fn parse_json(&self, v: &Value) -> Result<Vertex> {
        let s = v.as_str().ok_or_else(|| invalid("vertex must be a 0/1 string"))?;
        let x = Vertex::from_bits(s).ok_or_else(|| invalid(format!("`{s}` is not a 0/1 string")))?;
        if x.len() != self.n {
            return Err(invalid(format!("vertex has {} bits, instance has {} items", x.len(), self.n)));
        }
        Ok(x)
    }

    fn describe(&self, from: &Vertex, to: &Vertex) -> String {
        match (0..from.len()).find(|&i| from.get(i) != to.get(i)) {
            Some(i) if to.get(i) => format!("add item {i}"),
            Some(i) => format!("remove item {i}"),
            None => "no change".into(),
        }
    }
}

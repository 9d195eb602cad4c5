//! `reduce` and `project-cert`: reductions between models, with a sidecar map
//! that lets target certificates be carried back to the source.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use reconfig_core::exactcover::{
    color_hypergraph, is_exact_cover, reduce_tokens_to_exactcover, Cover, CoverSpace, ExactCoverInstance, MoveKind,
    TokenReduction,
};
use reconfig_core::hypercube::{reduce_manyway_to_hypercube, HypercubeReduction, Vertex};
use reconfig_core::naesat::{
    reduce_ncl_to_3sat, reduce_ncl_to_naesat, Assignment, NclNaeReduction, NclSatReduction, ReduceOptions,
};
use reconfig_core::ncl::{C2cSpace, ConstraintGraph};
use reconfig_core::statespace::{check_certificate, reachable, SearchLimits};
use reconfig_core::subsetsum::{reduce_exactcover_to_subsetsum, EncodingMode, Selection, SubsetSumReduction};
use reconfig_core::tokens::{TokenInstance, TokenSlideSpace};
use reconfig_core::ReconfigurationSpace;

use crate::commands::{certificate_file, instance_digest, CertificateFile};
use crate::error::{invalid, CliError, Result};
use crate::model::{
    load_instance, read_json, write_json, AssignmentCodec, Codec, CoverCodec, Envelope, Instance, NclCodec, Problem,
    SelectionCodec, TokenCodec, VertexCodec,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Encoding {
    Wide,
    Compact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default)]
    pub share_rigid: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub encoding: Option<Encoding>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub padding: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    pub from: Problem,
    pub to: Problem,
    pub options: Options,
    pub source: Envelope,
    pub source_digest: String,
    pub target_digest: String,
    /// Human-readable correspondence; `project-cert` rebuilds it from `source`.
    pub map: Value,
}

/// A reduction output, able to map target configurations back to the source.
enum Built {
    Nae { graph: ConstraintGraph, red: NclNaeReduction },
    Sat { graph: ConstraintGraph, red: NclSatReduction },
    Tokens { source: TokenInstance, red: TokenReduction },
    SubsetSum { source: ExactCoverInstance, red: SubsetSumReduction },
    Hypercube { source: ExactCoverInstance, red: HypercubeReduction },
}

fn unsupported(from: Problem, to: Problem) -> CliError {
    CliError::Unsupported(format!(
        "no reduction from {from} to {to}; supported: ncl->naesat, ncl->3sat, tokens->exactcover, \
         exactcover->subsetsum, exactcover->hypercube"
    ))
}

fn build(source: &Instance, to: Problem, opts: Options) -> Result<Built> {
    let pair = (source.problem(), to);
    match (source, to) {
        (Instance::Ncl { graph, start, goal }, Problem::Naesat) => {
            let red = reduce_ncl_to_naesat(graph, start, goal, ReduceOptions { share_rigid: opts.share_rigid })
                .map_err(invalid)?;
            Ok(Built::Nae { graph: graph.clone(), red })
        }
        (Instance::Ncl { graph, start, goal }, Problem::Sat) => {
            let red = reduce_ncl_to_3sat(graph, start, goal).map_err(invalid)?;
            Ok(Built::Sat { graph: graph.clone(), red })
        }
        (Instance::Tokens(t), Problem::Exactcover) => {
            let red = reduce_tokens_to_exactcover(t).map_err(invalid)?;
            Ok(Built::Tokens { source: t.clone(), red })
        }
        (Instance::ExactCover { instance, moves }, Problem::Subsetsum) => {
            if *moves != MoveKind::SplitMerge {
                return Err(invalid("exactcover -> subsetsum needs a split-merge source instance"));
            }
            let mode = match (opts.encoding.unwrap_or(Encoding::Wide), opts.padding) {
                (Encoding::Wide, None) => EncodingMode::Wide,
                (Encoding::Wide, Some(_)) => return Err(invalid("--padding only applies to the compact encoding")),
                (Encoding::Compact, Some(p)) => EncodingMode::Compact(p),
                (Encoding::Compact, None) => EncodingMode::Compact(reconfig_core::subsetsum::minimal_compact_padding(
                    instance,
                    &color_hypergraph(instance),
                )),
            };
            let red = reduce_exactcover_to_subsetsum(instance, &color_hypergraph(instance), mode).map_err(invalid)?;
            Ok(Built::SubsetSum { source: instance.clone(), red })
        }
        (Instance::ExactCover { instance, moves }, Problem::Hypercube) => {
            if *moves != MoveKind::PartitionUnion {
                return Err(invalid("exactcover -> hypercube needs a many-way source instance"));
            }
            let red = reduce_manyway_to_hypercube(instance, &color_hypergraph(instance)).map_err(invalid)?;
            Ok(Built::Hypercube { source: instance.clone(), red })
        }
        _ => Err(unsupported(pair.0, pair.1)),
    }
}

/// Resolves the compact padding actually used, so the map records a fixed value.
fn resolved_options(built: &Built, mut opts: Options) -> Options {
    if let Built::SubsetSum { red, .. } = built {
        opts.encoding = Some(opts.encoding.unwrap_or(Encoding::Wide));
        if opts.encoding == Some(Encoding::Compact) {
            opts.padding = Some(red.params.padding);
        }
    }
    opts
}

impl Built {
    fn target(&self) -> Instance {
        match self {
            Built::Nae { red, .. } => {
                Instance::Nae { formula: red.formula.clone(), start: red.start.clone(), goal: red.goal.clone() }
            }
            Built::Sat { red, .. } => {
                Instance::Sat { formula: red.formula.clone(), start: red.start.clone(), goal: red.goal.clone() }
            }
            Built::Tokens { red, .. } => {
                Instance::ExactCover { instance: red.instance.clone(), moves: MoveKind::SplitMerge }
            }
            Built::SubsetSum { red, .. } => Instance::SubsetSum { instance: red.instance.clone(), k: 3 },
            Built::Hypercube { red, .. } => Instance::Hypercube(red.polytope.clone()),
        }
    }

    fn map(&self) -> Value {
        match self {
            Built::Nae { graph, red } => json!({
                "edge_vars": edge_vars(graph, red.formula.names(), red.edge_vars.iter().map(|e| (e.var, e.toward))),
                "gadgets": red.gadgets.iter().map(|g| json!({
                    "node": graph.nodes()[g.node].id,
                    "variant": g.variant.name(),
                    "negated": g.negated,
                    "aux": g.aux.iter().map(|&v| red.formula.names()[v].clone()).collect::<Vec<_>>(),
                    "terminals": g.terminals.iter().map(|&v| red.formula.names()[v].clone()).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
            }),
            Built::Sat { graph, red } => json!({
                "edge_vars": edge_vars(graph, red.formula.names(), red.edge_vars.iter().map(|e| (e.var, e.toward))),
            }),
            Built::Tokens { source, red } => {
                let names = source.graph.names();
                let elements: Vec<Value> = (0..red.vertices)
                    .map(|v| json!({ "element": red.instance.universe()[v], "vertex": names[v] }))
                    .chain((0..red.tokens).map(|t| {
                        json!({ "element": red.instance.universe()[red.token_element(t)], "token": source.tokens[t] })
                    }))
                    .collect();
                let slide_sets: Vec<Value> = red
                    .slide_sets
                    .iter()
                    .map(|s| {
                        json!({
                            "edge": [names[s.edge.0], names[s.edge.1]],
                            "vertices": s.vertices.iter().map(|&v| names[v].clone()).collect::<Vec<_>>(),
                        })
                    })
                    .collect();
                json!({ "elements": elements, "slide_sets": slide_sets })
            }
            Built::SubsetSum { source, red } => json!({
                "padding": red.params.padding,
                "colors": color_classes(source, &red.colors, &red.labels),
                "items": source.family().iter().enumerate().map(|(i, s)| json!({
                    "item": i,
                    "set": s.iter().map(|&e| source.universe()[e].clone()).collect::<Vec<_>>(),
                    "value": red.instance.values()[i].to_string(),
                })).collect::<Vec<_>>(),
            }),
            Built::Hypercube { source, red } => {
                let colors: Vec<usize> = color_hypergraph(source).colors().iter().map(|c| c + 1).collect();
                let set_names =
                    |s: usize| source.family()[s].iter().map(|&e| source.universe()[e].clone()).collect::<Vec<_>>();
                json!({
                    "dimensions": red.layout.dims(),
                    "colors": color_classes(source, &colors, &red.labels),
                    "items": (0..red.sets).map(|s| json!({ "item": red.set_item(s), "kind": "set", "set": set_names(s) }))
                        .chain((0..red.sets).map(|s| json!({ "item": red.key_item(s), "kind": "key", "set": set_names(s) })))
                        .collect::<Vec<_>>(),
                })
            }
        }
    }
}

fn edge_vars(graph: &ConstraintGraph, names: &[String], vars: impl Iterator<Item = (usize, usize)>) -> Vec<Value> {
    vars.zip(graph.edges())
        .map(|((var, toward), e)| json!({ "edge": e.id, "variable": names[var], "true_means_toward": graph.nodes()[toward].id }))
        .collect()
}

fn color_classes(inst: &ExactCoverInstance, colors: &[usize], labels: &[usize]) -> Vec<Value> {
    (0..inst.universe().len())
        .map(|a| json!({ "element": inst.universe()[a], "color": colors[a], "label": labels[a] }))
        .collect()
}

pub fn reduce(from: Problem, to: Problem, input: &Path, output: &Path, opts: Options) -> Result<PathBuf> {
    let (_, source) = load_instance(input)?;
    if source.problem() != from {
        return Err(invalid(format!("`{}` holds a {} instance, not {from}", input.display(), source.problem())));
    }
    let built = build(&source, to, opts)?;
    let target = built.target();
    write_json(output, &target.to_envelope())?;
    let map = MapFile {
        from,
        to,
        options: resolved_options(&built, opts),
        source: source.to_envelope(),
        source_digest: instance_digest(&source),
        target_digest: instance_digest(&target),
        map: built.map(),
    };
    let map_path = sidecar_path(output);
    write_json(&map_path, &map)?;
    match &target {
        Instance::Hypercube(p) => println!("wrote {to} instance with n = {} items, d = {} dimensions", p.n(), p.d()),
        _ => println!("wrote {to} instance"),
    }
    println!("map: {}", map_path.display());
    Ok(map_path)
}

pub fn sidecar_path(output: &Path) -> PathBuf {
    let mut s = output.as_os_str().to_owned();
    s.push(".map.json");
    PathBuf::from(s)
}

/// Target configurations projected into the source, with unmappable ones
/// (intermediate gadget states, partly merged covers, keyed vertices) dropped.
fn project_all<C, D: PartialEq>(target: &[C], project: impl Fn(&C) -> Option<D>) -> Vec<D> {
    let mut out: Vec<D> = Vec::new();
    for p in target.iter().filter_map(project) {
        if out.last() != Some(&p) {
            out.push(p);
        }
    }
    out
}

/// Joins projected configurations into a source certificate, bridging
/// non-adjacent neighbors with a source-side search.
fn stitch<S: ReconfigurationSpace>(
    space: &S,
    start: &S::Config,
    goal: &S::Config,
    projected: Vec<S::Config>,
    limits: SearchLimits,
) -> Result<(Vec<S::Config>, usize)> {
    let mut waypoints = vec![start.clone()];
    waypoints.extend(projected.into_iter().filter(|c| space.is_feasible(c)));
    waypoints.push(goal.clone());
    let mut path = vec![start.clone()];
    let mut bridged = 0;
    for next in waypoints.into_iter().skip(1) {
        let last = path.last().expect("nonempty");
        if *last == next {
            continue;
        }
        if space.is_move(last, &next) {
            path.push(next);
            continue;
        }
        let found = reachable(space, last, &next, limits).map_err(|e| match e {
            reconfig_core::SearchError::ResourceCapExceeded { .. } => CliError::Cap(e.to_string()),
            other => invalid(other),
        })?;
        let Some(bridge) = found.certificate else {
            return Err(invalid("projected configurations are not connected in the source"));
        };
        bridged += 1;
        path.extend(bridge.into_iter().skip(1));
    }
    Ok((path, bridged))
}

struct Side<'a, S, C> {
    space: &'a S,
    codec: &'a C,
}

#[allow(clippy::too_many_arguments)]
fn carry<TS, TC, SS, SC>(
    cert: &CertificateFile,
    target: Side<'_, TS, TC>,
    source: Side<'_, SS, SC>,
    source_problem: Problem,
    source_digest: String,
    start: &SS::Config,
    goal: &SS::Config,
    limits: SearchLimits,
    project: impl Fn(&TS::Config) -> Option<SS::Config>,
) -> Result<CertificateFile>
where
    TS: ReconfigurationSpace,
    TC: Codec<Config = TS::Config>,
    SS: ReconfigurationSpace,
    SC: Codec<Config = SS::Config>,
{
    let tpath = cert
        .configurations
        .iter()
        .enumerate()
        .map(|(i, v)| target.codec.parse_json(v).map_err(|e| invalid(format!("configuration {i}: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    let check = check_certificate(target.space, &tpath);
    if !check.is_valid() {
        return Err(invalid(format!("target certificate: {check}")));
    }
    let projected = project_all(&tpath, project);
    let (path, bridged) = stitch(source.space, start, goal, projected, limits)?;
    let check = check_certificate(source.space, &path);
    if !check.is_valid() {
        return Err(invalid(format!("projected certificate: {check}")));
    }
    println!(
        "projected {} target configurations to {} source configurations ({bridged} gaps bridged)",
        tpath.len(),
        path.len()
    );
    Ok(certificate_file(source_problem, source_digest, source.codec, &path))
}

pub fn project_cert(map_path: &Path, cert_path: &Path, output: &Path, limits: SearchLimits) -> Result<()> {
    let map: MapFile = serde_json::from_value(read_json(map_path)?).map_err(|e| invalid(format!("map: {e}")))?;
    let cert: CertificateFile =
        serde_json::from_value(read_json(cert_path)?).map_err(|e| invalid(format!("certificate: {e}")))?;
    let source = Instance::from_envelope(&map.source)?;
    let source_digest = instance_digest(&source);
    if source_digest != map.source_digest {
        return Err(invalid("map source does not match its recorded digest"));
    }
    let built = build(&source, map.to, map.options)?;
    let target = built.target();
    let target_digest = instance_digest(&target);
    if target_digest != map.target_digest {
        return Err(invalid("rebuilding the reduction gives a different target instance"));
    }
    if cert.instance_digest != target_digest {
        return Err(invalid(format!(
            "digest mismatch: certificate has {}, mapped target is {target_digest}",
            cert.instance_digest
        )));
    }
    let sp = map.from;
    let out = match (&built, &target, &source) {
        (Built::Nae { graph, red }, Instance::Nae { formula, .. }, Instance::Ncl { start, goal, .. }) => carry(
            &cert,
            Side {
                space: &reconfig_core::naesat::NaeFlipSpace::new(formula),
                codec: &AssignmentCodec { names: formula.names() },
            },
            Side { space: &C2cSpace::new(graph), codec: &NclCodec { graph } },
            sp,
            source_digest,
            start,
            goal,
            limits,
            |a: &Assignment| red.project_assignment(graph, a).ok(),
        )?,
        (Built::Sat { graph, red }, Instance::Sat { formula, .. }, Instance::Ncl { start, goal, .. }) => carry(
            &cert,
            Side {
                space: &reconfig_core::naesat::CnfFlipSpace::new(formula),
                codec: &AssignmentCodec { names: formula.names() },
            },
            Side { space: &C2cSpace::new(graph), codec: &NclCodec { graph } },
            sp,
            source_digest,
            start,
            goal,
            limits,
            |a: &Assignment| red.project_assignment(graph, a).ok(),
        )?,
        (Built::Tokens { source: tok, red }, _, _) => carry(
            &cert,
            Side {
                space: &CoverSpace::new(&red.instance, MoveKind::SplitMerge),
                codec: &CoverCodec { instance: &red.instance },
            },
            Side {
                space: &TokenSlideSpace::new(&tok.graph),
                codec: &TokenCodec { graph: &tok.graph, tokens: &tok.tokens },
            },
            sp,
            source_digest,
            &tok.start,
            &tok.goal,
            limits,
            |c: &Cover| red.f_red_inverse(c).ok(),
        )?,
        (Built::SubsetSum { source: ec, red }, Instance::SubsetSum { instance, k }, _) => carry(
            &cert,
            Side {
                space: &reconfig_core::subsetsum::KMoveSpace::new(instance, *k).map_err(invalid)?,
                codec: &SelectionCodec,
            },
            Side { space: &CoverSpace::new(ec, MoveKind::SplitMerge), codec: &CoverCodec { instance: ec } },
            sp,
            source_digest,
            &ec.start,
            &ec.goal,
            limits,
            |s: &Selection| exact_cover(ec, red.cover_of(s)),
        )?,
        (Built::Hypercube { source: ec, red }, Instance::Hypercube(p), _) => carry(
            &cert,
            Side { space: &reconfig_core::hypercube::HypercubeSpace::new(p), codec: &VertexCodec { n: p.n() } },
            Side { space: &CoverSpace::new(ec, MoveKind::PartitionUnion), codec: &CoverCodec { instance: ec } },
            sp,
            source_digest,
            &ec.start,
            &ec.goal,
            limits,
            |v: &Vertex| red.cover_of(v).and_then(|c| exact_cover(ec, c)),
        )?,
        _ => unreachable!("build returns the variant matching its target"),
    };
    write_json(output, &out)
}

fn exact_cover(inst: &ExactCoverInstance, c: Cover) -> Option<Cover> {
    matches!(is_exact_cover(inst, &c), Ok(true)).then_some(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sidecar_name() {
        assert_eq!(sidecar_path(Path::new("out/x.json")), PathBuf::from("out/x.json.map.json"));
    }

    #[test]
    fn projection_drops_repeats_and_gaps() {
        let got = project_all(&[1, 2, 3, 4, 5, 6], |&x| (x % 3 != 0).then_some(x / 2));
        assert_eq!(got, vec![0, 1, 2]);
    }

    #[test]
    fn options_omit_unset_fields() {
        let v = serde_json::to_value(Options::default()).unwrap();
        assert_eq!(v, json!({ "share_rigid": false }));
    }
}

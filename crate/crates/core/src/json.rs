//! JSON documents: `gbs-graph.v1` (marked graphs), `tt-map.v1` (train
//! track map inputs) and `report.v1` (command results).
//!
//! Serialization is canonical: maps are ordered by key, edges by id, and
//! parsing then writing a document reproduces it.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{GbsError, Result};
use crate::graph::{Edge, EdgeId, GbsGraph, VertexId};
use crate::marked::{Automorphism, MarkedGraph, Presentation};
use crate::traintrack::{MapSpec, VertexRule};
use crate::word::GroupWord;

pub const GRAPH_SCHEMA: &str = "gbs-graph.v1";
pub const MAP_SCHEMA: &str = "tt-map.v1";
pub const REPORT_SCHEMA: &str = "report.v1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub id: String,
    pub rev: String,
    pub o: String,
    pub t: String,
    pub label_at_t: i64,
    pub len: f64,
}

/// A graph of groups with a base vertex and a spanning tree, which together
/// fix a presentation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresentationDoc {
    pub vertices: Vec<String>,
    pub edges: Vec<EdgeDoc>,
    pub base: String,
    /// One orientation of each tree edge.
    pub spanning_tree: Vec<String>,
}

/// `gbs-graph.v1`. Without `reference` the graph is marked by the identity
/// of its own presentation; otherwise `marking` sends each reference
/// generator to a closed word at `base`, and `inverse` sends each own
/// generator to a reference word.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphDoc {
    pub schema: String,
    #[serde(flatten)]
    pub graph: PresentationDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<PresentationDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub marking: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub inverse: BTreeMap<String, Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexRuleDoc {
    pub vertex: String,
    /// Reference word `h_w`.
    pub conj: Vec<String>,
    pub target: String,
    pub mult: i64,
}

/// `tt-map.v1`: the domain marked graph, images of one orientation of each
/// edge, vertex rules and the automorphism with its inverse on reference
/// generators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub schema: String,
    pub graph: GraphDoc,
    pub edge_images: BTreeMap<String, Vec<String>>,
    pub vertex_rules: Vec<VertexRuleDoc>,
    pub phi: BTreeMap<String, Vec<String>>,
    pub phi_inverse: BTreeMap<String, Vec<String>>,
}

/// `report.v1`: a command name and its JSON payload.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDoc {
    pub schema: String,
    pub kind: String,
    pub data: serde_json::Value,
}

impl ReportDoc {
    pub fn new(kind: &str, data: impl Serialize) -> Result<ReportDoc> {
        Ok(ReportDoc { schema: REPORT_SCHEMA.into(), kind: kind.into(), data: serde_json::to_value(data)? })
    }
}

fn check_schema(found: &str, want: &str) -> Result<()> {
    if found != want {
        return Err(GbsError::BadParameter(format!("expected schema {want}, found {found}")));
    }
    Ok(())
}

pub fn graph_to_edges(g: &GbsGraph) -> Vec<EdgeDoc> {
    g.edges()
        .map(|e| EdgeDoc {
            id: g.edge_name(e).into(),
            rev: g.edge_name(g.rev(e)).into(),
            o: g.vertex_name(g.origin(e)).into(),
            t: g.vertex_name(g.terminus(e)).into(),
            label_at_t: g.label(e),
            len: g.length(e),
        })
        .collect()
}

pub fn graph_from_edges(vertices: &[String], edges: &[EdgeDoc]) -> Result<GbsGraph> {
    GbsGraph::from_parts(vertices.to_vec(), edges_from_docs(vertices, edges)?)
}

/// Resolves names without checking the graph invariants.
pub fn edges_from_docs(vertices: &[String], edges: &[EdgeDoc]) -> Result<Vec<Edge>> {
    let vid = |n: &str| {
        vertices.iter().position(|v| v == n).map(VertexId).ok_or_else(|| GbsError::UnknownName(n.into()))
    };
    let eid = |n: &str| edges.iter().position(|e| e.id == n).map(EdgeId).ok_or_else(|| GbsError::UnknownName(n.into()));
    let parsed = edges
        .iter()
        .map(|e| {
            Ok(Edge {
                name: e.id.clone(),
                rev: eid(&e.rev)?,
                origin: vid(&e.o)?,
                terminus: vid(&e.t)?,
                label: e.label_at_t,
                length: e.len,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(parsed)
}

pub fn presentation_to_doc(p: &Presentation) -> PresentationDoc {
    let g = p.graph();
    let tree: Vec<EdgeId> = p.tree_edges().into_iter().filter(|&e| e <= g.rev(e)).collect();
    PresentationDoc {
        vertices: g.vertices().map(|v| g.vertex_name(v).to_string()).collect(),
        edges: graph_to_edges(g),
        base: g.vertex_name(p.base()).into(),
        spanning_tree: tree.into_iter().map(|e| g.edge_name(e).to_string()).collect(),
    }
}

pub fn presentation_from_doc(d: &PresentationDoc) -> Result<Presentation> {
    let g = graph_from_edges(&d.vertices, &d.edges)?;
    let base = g.vertex_by_name(&d.base).ok_or_else(|| GbsError::UnknownName(d.base.clone()))?;
    let tree = d
        .spanning_tree
        .iter()
        .map(|n| g.edge_by_name(n).ok_or_else(|| GbsError::UnknownName(n.clone())))
        .collect::<Result<Vec<_>>>()?;
    Presentation::new(g, base, Some(&tree))
}

fn word_map(p: &Presentation, words: &[GroupWord], g: &GbsGraph) -> BTreeMap<String, Vec<String>> {
    words.iter().enumerate().map(|(i, w)| (p.generator_name(i).to_string(), w.tokens(g))).collect()
}

fn words_from_map(
    p: &Presentation,
    target: &GbsGraph,
    base: VertexId,
    map: &BTreeMap<String, Vec<String>>,
    what: &str,
) -> Result<Vec<GroupWord>> {
    if map.len() != p.generators().len() {
        return Err(GbsError::BadParameter(format!(
            "{what} has {} entries for {} generators",
            map.len(),
            p.generators().len()
        )));
    }
    (0..p.generators().len())
        .map(|i| {
            let name = p.generator_name(i);
            let toks = map.get(name).ok_or_else(|| GbsError::BadParameter(format!("{what} lacks generator {name}")))?;
            GroupWord::parse(target, base, toks)
        })
        .collect()
}

pub fn marked_to_doc(m: &MarkedGraph) -> GraphDoc {
    let own = presentation_to_doc(m.presentation());
    if is_reference_point(m, &own) {
        return GraphDoc {
            schema: GRAPH_SCHEMA.into(),
            graph: own,
            reference: None,
            marking: BTreeMap::new(),
            inverse: BTreeMap::new(),
        };
    }
    let r = m.reference();
    GraphDoc {
        schema: GRAPH_SCHEMA.into(),
        graph: own,
        reference: Some(presentation_to_doc(r)),
        marking: word_map(r, m.marking().images(), m.graph()),
        inverse: word_map(m.presentation(), m.inverse_marking().images(), r.graph()),
    }
}

/// Same presentation and lengths as the reference, with identity marking.
fn is_reference_point(m: &MarkedGraph, own: &PresentationDoc) -> bool {
    if Arc::ptr_eq(m.reference(), m.presentation_arc()) {
        return true;
    }
    let r = m.reference();
    let p = m.presentation();
    presentation_to_doc(r) == *own
        && (0..p.generators().len()).all(|i| {
            m.marking().image(i) == &p.generator_word(i) && m.inverse_marking().image(i) == &r.generator_word(i)
        })
}

pub fn marked_from_doc(d: &GraphDoc) -> Result<MarkedGraph> {
    check_schema(&d.schema, GRAPH_SCHEMA)?;
    let pres = presentation_from_doc(&d.graph)?;
    match &d.reference {
        None => {
            if !d.marking.is_empty() || !d.inverse.is_empty() {
                return Err(GbsError::BadParameter("marking given without a reference".into()));
            }
            MarkedGraph::reference_point(Arc::new(pres))
        }
        Some(r) => {
            let reference = Arc::new(presentation_from_doc(r)?);
            let marking = words_from_map(&reference, pres.graph(), pres.base(), &d.marking, "marking")?;
            let inverse = words_from_map(&pres, reference.graph(), reference.base(), &d.inverse, "inverse")?;
            MarkedGraph::new(pres, reference, marking, inverse)
        }
    }
}

pub fn spec_to_doc(s: &MapSpec) -> MapDoc {
    let g = s.domain.graph();
    let r = s.domain.reference();
    MapDoc {
        schema: MAP_SCHEMA.into(),
        graph: marked_to_doc(&s.domain),
        edge_images: s.edge_images.iter().map(|(e, w)| (g.edge_name(*e).to_string(), w.tokens(g))).collect(),
        vertex_rules: s
            .vertex_rules
            .iter()
            .enumerate()
            .map(|(i, v)| VertexRuleDoc {
                vertex: g.vertex_name(VertexId(i)).into(),
                conj: v.conj.tokens(r.graph()),
                target: g.vertex_name(v.target).into(),
                mult: v.mult.to_i64().expect("vertex multiplier fits in i64"),
            })
            .collect(),
        phi: word_map(r, s.phi.forward().images(), r.graph()),
        phi_inverse: word_map(r, s.phi.backward().images(), r.graph()),
    }
}

pub fn spec_from_doc(d: &MapDoc) -> Result<MapSpec> {
    check_schema(&d.schema, MAP_SCHEMA)?;
    let domain = marked_from_doc(&d.graph)?;
    let g = domain.graph().clone();
    let reference = domain.reference().clone();
    let rg = reference.graph().clone();
    let fwd = words_from_map(&reference, &rg, reference.base(), &d.phi, "phi")?;
    let bwd = words_from_map(&reference, &rg, reference.base(), &d.phi_inverse, "phi_inverse")?;
    let phi = Automorphism::new(reference.clone(), fwd, bwd)?;
    let mut edge_images = Vec::new();
    for (name, toks) in &d.edge_images {
        let e = g.edge_by_name(name).ok_or_else(|| GbsError::UnknownName(name.clone()))?;
        edge_images.push((e, GroupWord::parse(&g, g.origin(e), toks)?));
    }
    edge_images.sort_by_key(|p| p.0);
    let mut rules: Vec<Option<VertexRule>> = vec![None; g.vertex_count()];
    for v in &d.vertex_rules {
        let w = g.vertex_by_name(&v.vertex).ok_or_else(|| GbsError::UnknownName(v.vertex.clone()))?;
        let target = g.vertex_by_name(&v.target).ok_or_else(|| GbsError::UnknownName(v.target.clone()))?;
        let conj = GroupWord::parse(&rg, reference.base(), &v.conj)?;
        rules[w.0] = Some(VertexRule { conj, target, mult: BigInt::from(v.mult) });
    }
    let vertex_rules = rules
        .into_iter()
        .enumerate()
        .map(|(i, r)| r.ok_or_else(|| GbsError::BadParameter(format!("no rule for vertex {}", g.vertex_name(VertexId(i))))))
        .collect::<Result<Vec<_>>>()?;
    Ok(MapSpec { domain, phi, edge_images, vertex_rules })
}

pub fn to_string<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

pub fn parse_graph(s: &str) -> Result<MarkedGraph> {
    marked_from_doc(&serde_json::from_str(s)?)
}

pub fn parse_map(s: &str) -> Result<MapSpec> {
    spec_from_doc(&serde_json::from_str(s)?)
}

pub fn graph_json(m: &MarkedGraph) -> Result<String> {
    to_string(&marked_to_doc(m))
}

pub fn map_json(s: &MapSpec) -> Result<String> {
    to_string(&spec_to_doc(s))
}

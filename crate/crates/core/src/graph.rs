//! Finite graphs of infinite cyclic groups with a metric.
//!
//! Every unoriented edge is stored as two oriented edges paired by `rev`.
//! `label` of an oriented edge is the index of the edge group in the vertex
//! group at its terminus, so the label seen at the origin is `label(rev(e))`.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{GbsError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeId(pub usize);

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub name: String,
    pub rev: EdgeId,
    pub origin: VertexId,
    pub terminus: VertexId,
    pub label: i64,
    pub length: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GbsGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    Empty,
    DuplicateName,
    BadVertex,
    BadInvolution,
    IncidenceMismatch,
    ZeroLabel,
    NonPositiveLength,
    AsymmetricLength,
    Disconnected,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub edge: Option<String>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.edge {
            Some(e) => write!(f, "{} (edge {})", self.message, e),
            None => write!(f, "{}", self.message),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub violations: Vec<Violation>,
    pub warnings: Vec<String>,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GraphStats {
    pub volume: f64,
    pub big_vertex_count: usize,
    pub collapsible_edges: Vec<String>,
}

impl GbsGraph {
    /// Builds a graph without checking it; see [`validate_graph`].
    pub fn from_parts_unchecked(vertices: Vec<String>, edges: Vec<Edge>) -> Self {
        GbsGraph { vertices, edges }
    }

    pub fn from_parts(vertices: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        let g = Self::from_parts_unchecked(vertices, edges);
        let report = validate_graph(&g);
        if report.is_valid() {
            Ok(g)
        } else {
            Err(GbsError::InvalidGraph(report.violations))
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len()).map(EdgeId)
    }

    /// One representative per unoriented edge (the smaller id of the pair).
    pub fn unoriented_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges().filter(move |&e| e <= self.rev(e))
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn vertex_name(&self, v: VertexId) -> &str {
        &self.vertices[v.0]
    }

    pub fn edge_name(&self, e: EdgeId) -> &str {
        &self.edges[e.0].name
    }

    pub fn vertex_by_name(&self, name: &str) -> Option<VertexId> {
        self.vertices.iter().position(|v| v == name).map(VertexId)
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        self.edges.iter().position(|e| e.name == name).map(EdgeId)
    }

    pub fn rev(&self, e: EdgeId) -> EdgeId {
        self.edges[e.0].rev
    }

    pub fn origin(&self, e: EdgeId) -> VertexId {
        self.edges[e.0].origin
    }

    pub fn terminus(&self, e: EdgeId) -> VertexId {
        self.edges[e.0].terminus
    }

    /// Label at the terminus of `e`.
    pub fn label(&self, e: EdgeId) -> i64 {
        self.edges[e.0].label
    }

    /// Label at the origin of `e`, i.e. the label of its reverse.
    pub fn origin_label(&self, e: EdgeId) -> i64 {
        self.label(self.rev(e))
    }

    pub fn length(&self, e: EdgeId) -> f64 {
        self.edges[e.0].length
    }

    /// Representative of the unoriented edge containing `e`.
    pub fn unoriented(&self, e: EdgeId) -> EdgeId {
        e.min(self.rev(e))
    }

    pub fn is_loop(&self, e: EdgeId) -> bool {
        self.origin(e) == self.terminus(e)
    }

    /// Oriented edges with origin `v`, i.e. the edge ends at `v`.
    pub fn out_edges(&self, v: VertexId) -> Vec<EdgeId> {
        self.edges().filter(|&e| self.origin(e) == v).collect()
    }

    pub fn volume(&self) -> f64 {
        self.unoriented_edges().map(|e| self.length(e)).sum()
    }

    pub fn is_collapsible(&self, e: EdgeId) -> bool {
        !self.is_loop(e) && (self.label(e).abs() == 1 || self.origin_label(e).abs() == 1)
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut queue = VecDeque::from([VertexId(0)]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for e in self.out_edges(v) {
                let w = self.terminus(e);
                if !seen[w.0] {
                    seen[w.0] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn betti_number(&self) -> Result<usize> {
        if !self.is_connected() {
            return Err(GbsError::Disconnected);
        }
        Ok(self.unoriented_edges().count() + 1 - self.vertices.len())
    }

    pub fn stats(&self) -> GraphStats {
        let big_vertex_count = self
            .vertices()
            .filter(|&v| {
                let ends = self.out_edges(v);
                !ends.is_empty() && ends.iter().all(|&e| self.origin_label(e).abs() > 1)
            })
            .count();
        GraphStats {
            volume: self.volume(),
            big_vertex_count,
            collapsible_edges: self
                .unoriented_edges()
                .filter(|&e| self.is_collapsible(e))
                .map(|e| self.edge_name(e).to_string())
                .collect(),
        }
    }

    /// Multiplies every length by `factor`.
    pub fn scaled(&self, factor: f64) -> GbsGraph {
        let mut g = self.clone();
        for e in &mut g.edges {
            e.length *= factor;
        }
        g
    }

    /// Replaces the lengths, indexed by unoriented representative.
    pub fn with_lengths(&self, len: impl Fn(EdgeId) -> f64) -> GbsGraph {
        let mut g = self.clone();
        for i in 0..g.edges.len() {
            let e = EdgeId(i);
            g.edges[i].length = len(self.unoriented(e));
        }
        g
    }

    pub fn normalized(&self) -> GbsGraph {
        let vol = self.volume();
        if vol == 1.0 {
            self.clone()
        } else {
            self.scaled(1.0 / vol)
        }
    }
}

pub fn validate_graph(g: &GbsGraph) -> ValidityReport {
    let mut report = ValidityReport::default();
    let mut push = |kind, edge: Option<&str>, message: String| {
        report.violations.push(Violation { kind, edge: edge.map(str::to_string), message });
    };
    if g.vertices.is_empty() {
        push(ViolationKind::Empty, None, "graph has no vertex".into());
        return report;
    }
    let mut names = HashSet::new();
    for v in &g.vertices {
        if !names.insert(v.as_str()) {
            push(ViolationKind::DuplicateName, None, format!("duplicate name {v}"));
        }
    }
    for e in &g.edges {
        if !names.insert(e.name.as_str()) {
            push(ViolationKind::DuplicateName, Some(&e.name), format!("duplicate name {}", e.name));
        }
    }
    let nv = g.vertices.len();
    let ne = g.edges.len();
    let mut structural = true;
    for (i, e) in g.edges.iter().enumerate() {
        let name = Some(e.name.as_str());
        if e.origin.0 >= nv || e.terminus.0 >= nv {
            push(ViolationKind::BadVertex, name, "endpoint is not a vertex".into());
            structural = false;
            continue;
        }
        if e.rev.0 >= ne || e.rev.0 == i || g.edges[e.rev.0].rev.0 != i {
            push(ViolationKind::BadInvolution, name, "reverse is not a fixed-point-free involution".into());
            structural = false;
            continue;
        }
        let r = &g.edges[e.rev.0];
        if r.origin != e.terminus || r.terminus != e.origin {
            push(ViolationKind::IncidenceMismatch, name, "origin(e) differs from terminus(reverse(e))".into());
            structural = false;
        }
        if e.label == 0 {
            push(ViolationKind::ZeroLabel, name, "zero label".into());
        }
        if e.length.is_nan() || e.length <= 0.0 || !e.length.is_finite() {
            push(ViolationKind::NonPositiveLength, name, "non-positive length".into());
        }
        if e.length != r.length && i < e.rev.0 {
            push(ViolationKind::AsymmetricLength, name, "asymmetric length".into());
        }
    }
    if structural && !g.is_connected() {
        push(ViolationKind::Disconnected, None, "graph is disconnected".into());
    }
    if report.violations.is_empty() && matches!(g.betti_number(), Ok(1)) {
        if let Some(w) = solvable_warning(g) {
            report.warnings.push(w);
        }
    }
    report
}

/// Flags circles on which every edge carries a ±1 label.
fn solvable_warning(g: &GbsGraph) -> Option<String> {
    let mut h = g.clone();
    // Prune leaves until only the circle is left.
    loop {
        let leaf = h.vertices().find(|&v| h.out_edges(v).len() == 1);
        match leaf {
            Some(v) => h = remove_vertex(&h, v),
            None => break,
        }
    }
    let all_unit = h.unoriented_edges().all(|e| h.label(e).abs() == 1 || h.origin_label(e).abs() == 1);
    all_unit.then(|| "possibly solvable: the circle carries a ±1 label on every edge".to_string())
}

fn remove_vertex(g: &GbsGraph, v: VertexId) -> GbsGraph {
    let keep: Vec<usize> = (0..g.vertices.len()).filter(|&i| i != v.0).collect();
    let vmap = |w: VertexId| VertexId(keep.iter().position(|&i| i == w.0).unwrap());
    let kept: Vec<usize> =
        (0..g.edges.len()).filter(|&i| g.edges[i].origin != v && g.edges[i].terminus != v).collect();
    let emap = |e: EdgeId| EdgeId(kept.iter().position(|&i| i == e.0).unwrap());
    let edges = kept
        .iter()
        .map(|&i| {
            let e = &g.edges[i];
            Edge {
                name: e.name.clone(),
                rev: emap(e.rev),
                origin: vmap(e.origin),
                terminus: vmap(e.terminus),
                label: e.label,
                length: e.length,
            }
        })
        .collect();
    GbsGraph { vertices: keep.iter().map(|&i| g.vertices[i].clone()).collect(), edges }
}

/// Incremental construction of a graph, adding edges in pairs.
#[derive(Clone, Debug, Default)]
pub struct GraphBuilder {
    vertices: Vec<String>,
    edges: Vec<Edge>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, name: impl Into<String>) -> VertexId {
        self.vertices.push(name.into());
        VertexId(self.vertices.len() - 1)
    }

    /// Adds `e: o -> t` and its reverse. `label_o` is the label at `o`,
    /// `label_t` the label at `t`. Returns `(e, rev e)`.
    #[allow(clippy::too_many_arguments)]
    pub fn edge(
        &mut self,
        name: impl Into<String>,
        rev_name: impl Into<String>,
        o: VertexId,
        t: VertexId,
        label_o: i64,
        label_t: i64,
        length: f64,
    ) -> (EdgeId, EdgeId) {
        let e = EdgeId(self.edges.len());
        let r = EdgeId(e.0 + 1);
        self.edges.push(Edge { name: name.into(), rev: r, origin: o, terminus: t, label: label_t, length });
        self.edges.push(Edge { name: rev_name.into(), rev: e, origin: t, terminus: o, label: label_o, length });
        (e, r)
    }

    pub fn build(self) -> Result<GbsGraph> {
        GbsGraph::from_parts(self.vertices, self.edges)
    }

    pub fn build_unchecked(self) -> GbsGraph {
        GbsGraph::from_parts_unchecked(self.vertices, self.edges)
    }
}

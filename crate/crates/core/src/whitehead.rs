//! Whitehead graphs at vertices and their cut structure.

use std::collections::BTreeSet;
use std::fmt::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cyclic::{cyclic_reduce, directions_at, turn_at, Direction, TurnKey};
use crate::error::{GbsError, Result};
use crate::exec::Exec;
use crate::graph::{GbsGraph, VertexId};
use crate::lamination::LeafLibrary;
use crate::marked::MarkedGraph;
use crate::moves::random_deform;
use crate::word::GroupWord;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WhiteheadGraph {
    pub vertex: VertexId,
    pub directions: Vec<Direction>,
    /// Index pairs `i < j` into `directions`.
    pub edges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CutAnalysis {
    pub connected: bool,
    pub cut_vertices: Vec<usize>,
}

impl CutAnalysis {
    pub fn is_simple_obstruction(&self) -> bool {
        self.connected && self.cut_vertices.is_empty()
    }
}

/// Turns crossed by the axes of closed words of `g` (not necessarily
/// cyclically reduced).
pub fn axis_turn_set(g: &GbsGraph, words: &[GroupWord]) -> Result<BTreeSet<TurnKey>> {
    let mut out = BTreeSet::new();
    for w in words {
        let (c, _) = cyclic_reduce(g, &crate::word::britton_reduce(g, w))?;
        out.extend(c.turns(g)?);
    }
    Ok(out)
}

/// Turns crossed by the interiors of all library words.
pub fn leaf_turn_set(g: &GbsGraph, lib: &LeafLibrary) -> BTreeSet<TurnKey> {
    let mut out = BTreeSet::new();
    for w in lib.generations.iter().flatten() {
        let e = w.edges();
        let s = w.syllables();
        for i in 1..e.len() {
            out.insert(turn_at(g, e[i - 1], &s[i], e[i]));
        }
    }
    out
}

pub fn whitehead_graph(g: &GbsGraph, turns: &BTreeSet<TurnKey>, v: VertexId) -> WhiteheadGraph {
    let directions = directions_at(g, v);
    let idx = |d: Direction| directions.iter().position(|&x| x == d).expect("direction at v");
    let mut edges = BTreeSet::new();
    for t in turns.iter().filter(|t| t.vertex == v && !t.is_degenerate()) {
        for (a, b) in t.expand(g) {
            let (i, j) = (idx(a), idx(b));
            if i != j {
                edges.insert((i.min(j), i.max(j)));
            }
        }
    }
    WhiteheadGraph { vertex: v, directions, edges: edges.into_iter().collect() }
}

/// Connectivity and articulation points of a simple undirected graph.
pub fn cut_analysis_raw(n: usize, edges: &[(usize, usize)]) -> CutAnalysis {
    if n == 0 {
        return CutAnalysis { connected: true, cut_vertices: Vec::new() };
    }
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut cut = vec![false; n];
    let mut time = 0;
    let mut components = 0;
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        components += 1;
        // Iterative DFS: (vertex, parent, next neighbour index).
        let mut stack = vec![(root, usize::MAX, 0usize)];
        disc[root] = time;
        low[root] = time;
        time += 1;
        let mut root_children = 0;
        while let Some(&mut (u, parent, ref mut k)) = stack.last_mut() {
            if *k < adj[u].len() {
                let w = adj[u][*k];
                *k += 1;
                if disc[w] == usize::MAX {
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    if u == root {
                        root_children += 1;
                    }
                    stack.push((w, u, 0));
                } else if w != parent {
                    low[u] = low[u].min(disc[w]);
                }
            } else {
                stack.pop();
                if parent != usize::MAX {
                    low[parent] = low[parent].min(low[u]);
                    if parent != root && low[u] >= disc[parent] {
                        cut[parent] = true;
                    }
                }
            }
        }
        if root_children > 1 {
            cut[root] = true;
        }
    }
    CutAnalysis { connected: components == 1, cut_vertices: (0..n).filter(|&i| cut[i]).collect() }
}

pub fn cut_analysis(w: &WhiteheadGraph) -> CutAnalysis {
    cut_analysis_raw(w.directions.len(), &w.edges)
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    /// Per vertex: name, direction count, edge count.
    pub vertices: Vec<(String, usize, usize)>,
}

/// Whitehead graphs of the targets (reference words) at every vertex of
/// `m`. A certificate is returned when all of them are connected without
/// cut vertex, which proves the targets are not simple.
pub fn nonsimplicity_certificate(m: &MarkedGraph, targets: &[GroupWord]) -> Result<Option<Certificate>> {
    let g = m.graph();
    let mut words = Vec::new();
    for t in targets {
        let w = m.realize(t)?;
        if cyclic_reduce(g, &w)?.0.is_elliptic() {
            return Err(GbsError::Elliptic);
        }
        words.push(w);
    }
    let turns = axis_turn_set(g, &words)?;
    let mut vertices = Vec::new();
    for v in g.vertices() {
        let wh = whitehead_graph(g, &turns, v);
        if !cut_analysis(&wh).is_simple_obstruction() {
            return Ok(None);
        }
        vertices.push((g.vertex_name(v).to_string(), wh.directions.len(), wh.edges.len()));
    }
    Ok(Some(Certificate { vertices }))
}

/// Heuristic: looks among random deformations of `m` for a tree where some
/// Whitehead graph of the targets is disconnected or has a cut vertex.
/// Returns the seed and vertex name found. Finding nothing decides nothing.
pub fn search_splitting_tree(
    m: &MarkedGraph,
    targets: &[GroupWord],
    tries: usize,
    seed: u64,
    exec: Exec,
) -> Result<Option<(u64, String)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let seeds: Vec<u64> = (0..tries).map(|_| rng.random()).collect();
    let found = exec.map(&seeds, |&s| -> Result<Option<(u64, String)>> {
        let x = random_deform(m, 6, s);
        let g = x.graph();
        let words = targets.iter().map(|t| x.realize(t)).collect::<Result<Vec<_>>>()?;
        let turns = axis_turn_set(g, &words)?;
        for v in g.vertices() {
            if !cut_analysis(&whitehead_graph(g, &turns, v)).is_simple_obstruction() {
                return Ok(Some((s, g.vertex_name(v).to_string())));
            }
        }
        Ok(None)
    });
    for f in found {
        if let Some(hit) = f? {
            return Ok(Some(hit));
        }
    }
    Ok(None)
}

/// DOT rendering; vertices are named `edge.residue`.
pub fn to_dot(g: &GbsGraph, w: &WhiteheadGraph) -> String {
    let mut s = String::new();
    let name = |d: &Direction| format!("\"{}.{}\"", g.edge_name(d.edge), d.residue);
    writeln!(s, "graph \"Wh_{}\" {{", g.vertex_name(w.vertex)).unwrap();
    for d in &w.directions {
        writeln!(s, "  {};", name(d)).unwrap();
    }
    for &(a, b) in &w.edges {
        writeln!(s, "  {} -- {};", name(&w.directions[a]), name(&w.directions[b])).unwrap();
    }
    s.push_str("}\n");
    s
}

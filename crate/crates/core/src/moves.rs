//! Moves inside the deformation space: subdivision, collapse, expansion
//! and rescaling, each carrying the marking along.

use num_bigint::BigInt;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{GbsError, Result};
use crate::graph::{EdgeId, GbsGraph, GraphBuilder, VertexId};
use crate::marked::{GraphMorphism, MarkedGraph, Presentation};
use crate::word::GroupWord;

fn fresh_name(g: &GbsGraph, taken: &[String], stem: &str) -> String {
    let used = |s: &str| g.vertex_by_name(s).is_some() || g.edge_by_name(s).is_some() || taken.iter().any(|t| t == s);
    let mut k = 1;
    loop {
        let name = format!("{stem}~{k}");
        if !used(&name) {
            return name;
        }
        k += 1;
    }
}

fn single(g: &GbsGraph, e: EdgeId) -> GroupWord {
    GroupWord::from_edges(g, g.origin(e), &[e]).expect("an edge is a path")
}

fn path(g: &GbsGraph, start: VertexId, edges: &[EdgeId]) -> GroupWord {
    GroupWord::from_edges(g, start, edges).expect("consecutive edges")
}

fn ones(n: usize) -> Vec<BigInt> {
    vec![BigInt::one(); n]
}

/// Splits `e` into two edges through a new vertex; `split.0` is the length
/// of the half at `origin(e)`.
pub fn subdivide(m: &MarkedGraph, e: EdgeId, split: (f64, f64)) -> Result<MarkedGraph> {
    let g = m.graph();
    if e.0 >= g.edge_count() {
        return Err(GbsError::BadMove("no such edge".into()));
    }
    let (l1, l2) = split;
    if !(l1 > 0.0 && l2 > 0.0) || ((l1 + l2) - g.length(e)).abs() > 1e-9 * g.length(e).max(1.0) {
        return Err(GbsError::BadMove(format!(
            "split ({l1}, {l2}) must be positive and sum to the length {}",
            g.length(e)
        )));
    }
    let u = g.unoriented(e);
    let (l1, l2) = if u == e { (l1, l2) } else { (l2, l1) };
    let (o, t) = (g.origin(u), g.terminus(u));
    let mut b = GraphBuilder::new();
    for v in g.vertices() {
        b.vertex(g.vertex_name(v));
    }
    let mut taken = Vec::new();
    let wname = fresh_name(g, &taken, g.edge_name(u));
    taken.push(wname.clone());
    let w = b.vertex(wname);
    let mut map = vec![EdgeId(0); g.edge_count()];
    let mut e1 = (EdgeId(0), EdgeId(0));
    for d in g.unoriented_edges() {
        if d == u {
            let n1 = fresh_name(g, &taken, g.edge_name(u));
            taken.push(n1.clone());
            let r1 = fresh_name(g, &taken, g.edge_name(g.rev(u)));
            taken.push(r1.clone());
            e1 = b.edge(n1, r1, o, w, g.origin_label(u), 1, l1);
        } else {
            let (x, y) = b.edge(
                g.edge_name(d),
                g.edge_name(g.rev(d)),
                g.origin(d),
                g.terminus(d),
                g.origin_label(d),
                g.label(d),
                g.length(d),
            );
            map[d.0] = x;
            map[g.rev(d).0] = y;
        }
    }
    let n2 = fresh_name(g, &taken, g.edge_name(u));
    taken.push(n2.clone());
    let r2 = fresh_name(g, &taken, g.edge_name(g.rev(u)));
    let e2 = b.edge(n2, r2, w, t, 1, g.label(u), l2);
    let ng = b.build()?;

    let nv = g.vertex_count();
    let fwd_imgs: Vec<(EdgeId, GroupWord)> = g
        .unoriented_edges()
        .map(|d| {
            if d == u {
                (d, path(&ng, o, &[e1.0, e2.0]))
            } else {
                (d, single(&ng, map[d.0]))
            }
        })
        .collect();
    let fwd = GraphMorphism::from_half(g, &ng, (0..nv).map(VertexId).collect(), ones(nv), &fwd_imgs)?;
    let mut vmap: Vec<VertexId> = (0..nv).map(VertexId).collect();
    vmap.push(t);
    let mut mult = ones(nv);
    mult.push(BigInt::from(g.label(u)));
    let mut bwd_imgs: Vec<(EdgeId, GroupWord)> =
        g.unoriented_edges().filter(|&d| d != u).map(|d| (map[d.0], single(g, d))).collect();
    bwd_imgs.push((e1.0, single(g, u)));
    bwd_imgs.push((e2.0, GroupWord::identity(t)));
    let bwd = GraphMorphism::from_half(&ng, g, vmap, mult, &bwd_imgs)?;
    let pres = Presentation::new(ng, m.base(), None)?;
    m.rebuild(pres, &fwd, &bwd, &GroupWord::identity(m.base()))
}

/// Collapses a non-loop edge with a label ±1 at one of its ends, merging
/// that end into the other.
pub fn collapse(m: &MarkedGraph, e: EdgeId) -> Result<MarkedGraph> {
    let g = m.graph();
    if e.0 >= g.edge_count() {
        return Err(GbsError::BadMove("no such edge".into()));
    }
    if !g.is_collapsible(e) {
        return Err(GbsError::BadMove(format!(
            "edge {} is not collapsible (loop or no ±1 label)",
            g.edge_name(e)
        )));
    }
    // Orient e so that its origin label is ±1; the origin disappears.
    let e = if g.origin_label(e).abs() == 1 { e } else { g.rev(e) };
    let eps = g.origin_label(e);
    let (o, t) = (g.origin(e), g.terminus(e));
    let new_id = |v: VertexId| if v == o { None } else { Some(VertexId(if v.0 > o.0 { v.0 - 1 } else { v.0 })) };
    let merged = |v: VertexId| new_id(if v == o { t } else { v }).unwrap();
    let mut b = GraphBuilder::new();
    for v in g.vertices().filter(|&v| v != o) {
        b.vertex(g.vertex_name(v));
    }
    let mut map = vec![None; g.edge_count()];
    for d in g.unoriented_edges().filter(|&d| d != g.unoriented(e)) {
        let lo = if g.origin(d) == o { eps * g.label(e) * g.origin_label(d) } else { g.origin_label(d) };
        let lt = if g.terminus(d) == o { eps * g.label(e) * g.label(d) } else { g.label(d) };
        let (x, y) = b.edge(
            g.edge_name(d),
            g.edge_name(g.rev(d)),
            merged(g.origin(d)),
            merged(g.terminus(d)),
            lo,
            lt,
            g.length(d),
        );
        map[d.0] = Some(x);
        map[g.rev(d).0] = Some(y);
    }
    let ng = b.build()?;
    let vmap: Vec<VertexId> = g.vertices().map(merged).collect();
    let mult: Vec<BigInt> =
        g.vertices().map(|v| if v == o { BigInt::from(eps * g.label(e)) } else { BigInt::one() }).collect();
    let mut fwd_imgs: Vec<(EdgeId, GroupWord)> = g
        .unoriented_edges()
        .filter(|&d| d != g.unoriented(e))
        .map(|d| (d, single(&ng, map[d.0].unwrap())))
        .collect();
    fwd_imgs.push((e, GroupWord::identity(merged(t))));
    let fwd = GraphMorphism::from_half(g, &ng, vmap, mult, &fwd_imgs)?;
    let bwd_imgs: Vec<(EdgeId, GroupWord)> = g
        .unoriented_edges()
        .filter(|&d| d != g.unoriented(e))
        .map(|d| {
            let mut edges = Vec::new();
            if g.origin(d) == o {
                edges.push(g.rev(e));
            }
            edges.push(d);
            if g.terminus(d) == o {
                edges.push(e);
            }
            let start = if g.origin(d) == o { t } else { g.origin(d) };
            (map[d.0].unwrap(), path(g, start, &edges))
        })
        .collect();
    let bvmap: Vec<VertexId> = g.vertices().filter(|&v| v != o).collect();
    let bwd = GraphMorphism::from_half(&ng, g, bvmap, ones(ng.vertex_count()), &bwd_imgs)?;
    let (base, back) = if m.base() == o {
        (merged(t), single(g, e))
    } else {
        (merged(m.base()), GroupWord::identity(m.base()))
    };
    let pres = Presentation::new(ng, base, None)?;
    m.rebuild(pres, &fwd, &bwd, &back)
}

/// Pulls the edge ends `dirs` (oriented edges starting at `v`) onto a new
/// vertex `w` joined to `v` by an edge of length `len` with labels `d` at
/// `v` and 1 at `w`. Moved ends have their labels at `v` divided by `d`.
pub fn expand(m: &MarkedGraph, v: VertexId, dirs: &[EdgeId], d: i64, len: f64) -> Result<MarkedGraph> {
    let g = m.graph();
    if v.0 >= g.vertex_count() {
        return Err(GbsError::BadMove("no such vertex".into()));
    }
    if d < 2 {
        return Err(GbsError::BadMove(format!("expansion index {d} must be at least 2")));
    }
    if len.is_nan() || len <= 0.0 {
        return Err(GbsError::BadMove("new edge needs a positive length".into()));
    }
    let ends = g.out_edges(v);
    let mut moved = vec![false; g.edge_count()];
    for &e in dirs {
        if e.0 >= g.edge_count() || g.origin(e) != v {
            return Err(GbsError::BadMove(format!("edge end {} is not at {}", e.0, g.vertex_name(v))));
        }
        if g.origin_label(e) % d != 0 {
            return Err(GbsError::BadMove(format!(
                "label {} of {} at {} is not divisible by {d}",
                g.origin_label(e),
                g.edge_name(e),
                g.vertex_name(v)
            )));
        }
        moved[e.0] = true;
    }
    let count = ends.iter().filter(|e| moved[e.0]).count();
    if count == 0 || count == ends.len() {
        return Err(GbsError::BadMove("expansion must move some but not all edge ends".into()));
    }
    let mut b = GraphBuilder::new();
    for x in g.vertices() {
        b.vertex(g.vertex_name(x));
    }
    let mut taken = Vec::new();
    let wname = fresh_name(g, &taken, g.vertex_name(v));
    taken.push(wname.clone());
    let w = b.vertex(wname);
    let mut map = vec![EdgeId(0); g.edge_count()];
    for e in g.unoriented_edges() {
        let r = g.rev(e);
        let (o, lo) = if moved[e.0] { (w, g.origin_label(e) / d) } else { (g.origin(e), g.origin_label(e)) };
        let (t, lt) = if moved[r.0] { (w, g.label(e) / d) } else { (g.terminus(e), g.label(e)) };
        let (x, y) = b.edge(g.edge_name(e), g.edge_name(r), o, t, lo, lt, g.length(e));
        map[e.0] = x;
        map[r.0] = y;
    }
    let en = fresh_name(g, &taken, g.vertex_name(v));
    taken.push(en.clone());
    let er = fresh_name(g, &taken, g.vertex_name(v));
    let (eps, _) = b.edge(en, er, v, w, d, 1, len);
    let ng = b.build()?;
    let nv = g.vertex_count();
    let fwd_imgs: Vec<(EdgeId, GroupWord)> = g
        .unoriented_edges()
        .map(|e| {
            let mut edges = Vec::new();
            if moved[e.0] {
                edges.push(eps);
            }
            edges.push(map[e.0]);
            if moved[g.rev(e).0] {
                edges.push(ng.rev(eps));
            }
            (e, path(&ng, g.origin(e), &edges))
        })
        .collect();
    let fwd = GraphMorphism::from_half(g, &ng, (0..nv).map(VertexId).collect(), ones(nv), &fwd_imgs)?;
    let mut vmap: Vec<VertexId> = (0..nv).map(VertexId).collect();
    vmap.push(v);
    let mut mult = ones(nv);
    mult.push(BigInt::from(d));
    let mut bwd_imgs: Vec<(EdgeId, GroupWord)> = g.unoriented_edges().map(|e| (map[e.0], single(g, e))).collect();
    bwd_imgs.push((eps, GroupWord::identity(v)));
    let bwd = GraphMorphism::from_half(&ng, g, vmap, mult, &bwd_imgs)?;
    let pres = Presentation::new(ng, m.base(), None)?;
    m.rebuild(pres, &fwd, &bwd, &GroupWord::identity(m.base()))
}

/// Multiplies the length of each unoriented edge by `factor(e)`.
pub fn rescale(m: &MarkedGraph, factor: impl Fn(EdgeId) -> f64) -> Result<MarkedGraph> {
    let g = m.graph();
    let ng = g.with_lengths(|e| g.length(e) * factor(g.unoriented(e)));
    if ng.edges().any(|e| !(ng.length(e) > 0.0 && ng.length(e).is_finite())) {
        return Err(GbsError::BadMove("rescaled lengths must be positive".into()));
    }
    Ok(m.with_metric(ng))
}

#[derive(Clone, Debug)]
pub struct DeformParams {
    /// Relative weights of subdivide, collapse, expand and rescale.
    pub weights: [f64; 4],
    /// Subdivisions and expansions are skipped above this many edges.
    pub max_edges: usize,
    /// Per-edge rescale factors are drawn log-uniformly in `[1/r, r]`.
    pub rescale_range: f64,
}

impl Default for DeformParams {
    fn default() -> Self {
        DeformParams { weights: [1.0, 1.0, 1.0, 2.0], max_edges: 12, rescale_range: 2.0 }
    }
}

pub fn random_deform(m: &MarkedGraph, steps: usize, seed: u64) -> MarkedGraph {
    random_deform_with(m, steps, seed, &DeformParams::default())
}

/// A seeded random walk of moves, renormalized to volume 1. Moves that do
/// not apply are skipped.
pub fn random_deform_with(m: &MarkedGraph, steps: usize, seed: u64, p: &DeformParams) -> MarkedGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = m.normalize_volume();
    let total: f64 = p.weights.iter().sum();
    for _ in 0..steps {
        let mut x = rng.random::<f64>() * total;
        let mut kind = 0;
        while kind < 3 && x >= p.weights[kind] {
            x -= p.weights[kind];
            kind += 1;
        }
        let next = match kind {
            0 => random_subdivide(&cur, &mut rng, p),
            1 => random_collapse(&cur, &mut rng),
            2 => random_expand(&cur, &mut rng, p),
            _ => random_rescale(&cur, &mut rng, p.rescale_range),
        };
        if let Some(n) = next {
            cur = n.normalize_volume();
        }
    }
    cur
}

fn random_subdivide(m: &MarkedGraph, rng: &mut ChaCha8Rng, p: &DeformParams) -> Option<MarkedGraph> {
    let g = m.graph();
    if g.edge_count() / 2 >= p.max_edges {
        return None;
    }
    let edges: Vec<EdgeId> = g.unoriented_edges().collect();
    let e = edges[rng.random_range(0..edges.len())];
    let s = rng.random_range(0.2..0.8);
    let l = g.length(e);
    subdivide(m, e, (l * s, l - l * s)).ok()
}

fn random_collapse(m: &MarkedGraph, rng: &mut ChaCha8Rng) -> Option<MarkedGraph> {
    let g = m.graph();
    let edges: Vec<EdgeId> = g.unoriented_edges().filter(|&e| g.is_collapsible(e)).collect();
    if edges.is_empty() {
        return None;
    }
    collapse(m, edges[rng.random_range(0..edges.len())]).ok()
}

fn random_expand(m: &MarkedGraph, rng: &mut ChaCha8Rng, p: &DeformParams) -> Option<MarkedGraph> {
    let g = m.graph();
    if g.edge_count() / 2 >= p.max_edges {
        return None;
    }
    let mut options: Vec<(VertexId, i64)> = Vec::new();
    for v in g.vertices() {
        let ends = g.out_edges(v);
        for d in divisors(&ends.iter().map(|&e| g.origin_label(e)).collect::<Vec<_>>()) {
            let k = ends.iter().filter(|&&e| g.origin_label(e) % d == 0).count();
            if k >= 1 && ends.len() >= 2 {
                options.push((v, d));
            }
        }
    }
    if options.is_empty() {
        return None;
    }
    let (v, d) = options[rng.random_range(0..options.len())];
    let ends = g.out_edges(v);
    let mut eligible: Vec<EdgeId> = ends.iter().cloned().filter(|&e| g.origin_label(e) % d == 0).collect();
    eligible.shuffle(rng);
    let max = if eligible.len() == ends.len() { eligible.len() - 1 } else { eligible.len() };
    if max == 0 {
        return None;
    }
    let k = rng.random_range(1..=max);
    let len = rng.random_range(0.1..0.5) * g.volume() / (g.edge_count() / 2) as f64;
    expand(m, v, &eligible[..k], d, len).ok()
}

/// Divisors ≥ 2 of any of the labels.
fn divisors(labels: &[i64]) -> Vec<i64> {
    let mut out: Vec<i64> = Vec::new();
    for &l in labels {
        let l = l.abs();
        for d in 2..=l {
            if l % d == 0 && !out.contains(&d) {
                out.push(d);
            }
        }
    }
    out.sort();
    out
}

fn random_rescale(m: &MarkedGraph, rng: &mut ChaCha8Rng, range: f64) -> Option<MarkedGraph> {
    let g = m.graph();
    let lr = range.ln();
    let factors: Vec<f64> = (0..g.edge_count()).map(|_| (rng.random_range(-lr..=lr)).exp()).collect();
    rescale(m, |e| factors[e.0]).ok()
}

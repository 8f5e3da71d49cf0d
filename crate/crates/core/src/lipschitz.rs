//! Candidates and the Lipschitz distance between marked graphs.
//!
//! The stretch factor between two trees is realized on a finite set of
//! candidate conjugacy classes whose axes project to small subgraphs of
//! the quotient: embedded loops, figure-eights, barbells and barbells
//! with one or two ends replaced by a turn around a vertex group.

use std::collections::HashSet;

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cyclic::{cyclic_reduce, CyclicWord};
use crate::error::{GbsError, Result};
use crate::exec::Exec;
use crate::graph::{EdgeId, GbsGraph, VertexId};
use crate::marked::{MarkedGraph, Transport};
use crate::sample::random_loxodromic;
use crate::word::{GroupWord, Reducer};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    Loop,
    FigureEight,
    Barbell,
    SinglyDegenerateBarbell,
    DoublyDegenerateBarbell,
}

#[derive(Clone, Debug)]
pub struct Candidate {
    pub shape: Shape,
    /// Cyclic word in the graph it was enumerated in.
    pub cyclic: CyclicWord,
    /// A closed word at the base in the same graph.
    pub word: GroupWord,
    /// Unoriented edges crossed, with multiplicity.
    pub support: Vec<EdgeId>,
}

#[derive(Clone, Debug)]
pub struct CandidateLimits {
    pub max_cycles: usize,
    pub max_paths: usize,
    pub max_candidates: usize,
}

impl Default for CandidateLimits {
    fn default() -> Self {
        CandidateLimits { max_cycles: 5_000, max_paths: 20_000, max_candidates: 200_000 }
    }
}

/// An edge cycle with a set of allowed syllables at each junction;
/// junction `i` follows edge `i`.
struct Skeleton {
    shape: Shape,
    edges: Vec<EdgeId>,
}

fn modulus_at(g: &GbsGraph, next: EdgeId) -> u64 {
    g.origin_label(next).unsigned_abs()
}

impl Skeleton {
    fn residues(&self, g: &GbsGraph) -> Vec<Vec<u64>> {
        let n = self.edges.len();
        (0..n)
            .map(|i| {
                let (e, next) = (self.edges[i], self.edges[(i + 1) % n]);
                let m = modulus_at(g, next);
                if next == g.rev(e) {
                    (1..m).collect()
                } else {
                    (0..m).collect()
                }
            })
            .collect()
    }

    fn decoration_count(&self, g: &GbsGraph) -> u128 {
        self.residues(g).iter().map(|r| r.len() as u128).product()
    }
}

/// Simple cycles, each once (one orientation), as edge sequences.
pub fn simple_cycles(g: &GbsGraph, cap: usize) -> Result<Vec<Vec<EdgeId>>> {
    let mut out = Vec::new();
    let mut seen: HashSet<Vec<EdgeId>> = HashSet::new();
    for s in g.vertices() {
        let mut path: Vec<EdgeId> = Vec::new();
        let mut on = vec![false; g.vertex_count()];
        on[s.0] = true;
        cycles_from(g, s, s, &mut on, &mut path, &mut out, &mut seen, cap)?;
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn cycles_from(
    g: &GbsGraph,
    s: VertexId,
    at: VertexId,
    on: &mut [bool],
    path: &mut Vec<EdgeId>,
    out: &mut Vec<Vec<EdgeId>>,
    seen: &mut HashSet<Vec<EdgeId>>,
    cap: usize,
) -> Result<()> {
    for e in g.out_edges(at) {
        let w = g.terminus(e);
        if w.0 < s.0 {
            continue;
        }
        if path.last() == Some(&g.rev(e)) {
            continue;
        }
        if w == s {
            path.push(e);
            let rev: Vec<EdgeId> = path.iter().rev().map(|&d| g.rev(d)).collect();
            let key = std::cmp::min(path.clone(), rev);
            if seen.insert(key.clone()) {
                if out.len() >= cap {
                    return Err(GbsError::TooManyCandidates(cap));
                }
                out.push(key);
            }
            path.pop();
        } else if !on[w.0] {
            on[w.0] = true;
            path.push(e);
            cycles_from(g, s, w, on, path, out, seen, cap)?;
            path.pop();
            on[w.0] = false;
        }
    }
    Ok(())
}

fn cycle_vertices(g: &GbsGraph, c: &[EdgeId]) -> Vec<VertexId> {
    c.iter().map(|&e| g.origin(e)).collect()
}

/// Rotation of a cycle starting at vertex `p`.
fn rotate_to(g: &GbsGraph, c: &[EdgeId], p: VertexId) -> Vec<EdgeId> {
    let i = c.iter().position(|&e| g.origin(e) == p).expect("vertex on cycle");
    let mut r = c.to_vec();
    r.rotate_left(i);
    r
}

fn reversed(g: &GbsGraph, c: &[EdgeId]) -> Vec<EdgeId> {
    c.iter().rev().map(|&e| g.rev(e)).collect()
}

/// Vertex-simple paths with at least one edge from `p`, avoiding
/// `forbidden` vertices after the start (the end may be in `allowed_end`).
fn simple_paths(
    g: &GbsGraph,
    p: VertexId,
    forbidden: &[bool],
    cap: usize,
    out: &mut Vec<Vec<EdgeId>>,
) -> Result<()> {
    let mut on = forbidden.to_vec();
    on[p.0] = true;
    let mut path = Vec::new();
    paths_from(g, p, &mut on, &mut path, out, cap)
}

fn paths_from(
    g: &GbsGraph,
    at: VertexId,
    on: &mut [bool],
    path: &mut Vec<EdgeId>,
    out: &mut Vec<Vec<EdgeId>>,
    cap: usize,
) -> Result<()> {
    for e in g.out_edges(at) {
        let w = g.terminus(e);
        if on[w.0] {
            continue;
        }
        path.push(e);
        if out.len() >= cap {
            return Err(GbsError::TooManyCandidates(cap));
        }
        out.push(path.clone());
        on[w.0] = true;
        paths_from(g, w, on, path, out, cap)?;
        on[w.0] = false;
        path.pop();
    }
    Ok(())
}

fn skeletons(g: &GbsGraph, lim: &CandidateLimits) -> Result<Vec<Skeleton>> {
    let cycles = simple_cycles(g, lim.max_cycles)?;
    let mut out: Vec<Skeleton> = Vec::new();
    let nv = g.vertex_count();
    let vsets: Vec<Vec<bool>> = cycles
        .iter()
        .map(|c| {
            let mut s = vec![false; nv];
            for v in cycle_vertices(g, c) {
                s[v.0] = true;
            }
            s
        })
        .collect();
    for c in &cycles {
        out.push(Skeleton { shape: Shape::Loop, edges: c.clone() });
    }
    // Figure-eights and barbells.
    for i in 0..cycles.len() {
        for j in i + 1..cycles.len() {
            let shared: Vec<usize> = (0..nv).filter(|&v| vsets[i][v] && vsets[j][v]).collect();
            if shared.len() == 1 {
                let p = VertexId(shared[0]);
                let a = rotate_to(g, &cycles[i], p);
                let b = rotate_to(g, &cycles[j], p);
                for b in [b.clone(), reversed(g, &b)] {
                    let mut edges = a.clone();
                    edges.extend(b);
                    out.push(Skeleton { shape: Shape::FigureEight, edges });
                }
            } else if shared.is_empty() {
                // Connecting paths from cycle i to cycle j, internally
                // disjoint from both.
                for p in cycle_vertices(g, &cycles[i]) {
                    let mut forbidden = vsets[i].clone();
                    for v in 0..nv {
                        forbidden[v] |= vsets[j][v];
                    }
                    for v in cycle_vertices(g, &cycles[j]) {
                        forbidden[v.0] = false;
                    }
                    let mut paths = Vec::new();
                    simple_paths(g, p, &forbidden, lim.max_paths, &mut paths)?;
                    for path in paths {
                        let q = g.terminus(*path.last().unwrap());
                        if !vsets[j][q.0] || path[..path.len() - 1].iter().any(|&e| vsets[j][g.terminus(e).0]) {
                            continue;
                        }
                        let a = rotate_to(g, &cycles[i], p);
                        let b = rotate_to(g, &cycles[j], q);
                        for a in [a.clone(), reversed(g, &a)] {
                            for b in [b.clone(), reversed(g, &b)] {
                                let mut edges = a.clone();
                                edges.extend(path.iter().cloned());
                                edges.extend(b.iter().cloned());
                                edges.extend(reversed(g, &path));
                                out.push(Skeleton { shape: Shape::Barbell, edges });
                            }
                        }
                    }
                }
            }
        }
    }
    // Singly degenerate: a cycle, then a path out to a vertex group and back.
    for (i, c) in cycles.iter().enumerate() {
        for p in cycle_vertices(g, c) {
            let mut forbidden = vsets[i].clone();
            forbidden[p.0] = false;
            let mut paths = Vec::new();
            simple_paths(g, p, &forbidden, lim.max_paths, &mut paths)?;
            // A path that comes back to p is also allowed.
            for e in g.out_edges(p) {
                if g.terminus(e) == p && !c.contains(&e) && !c.contains(&g.rev(e)) {
                    paths.push(vec![e]);
                }
            }
            for path in paths {
                let last = *path.last().unwrap();
                if g.label(last).abs() < 2 {
                    continue;
                }
                let a = rotate_to(g, c, p);
                let mut edges = a;
                edges.extend(path.iter().cloned());
                edges.extend(reversed(g, &path));
                out.push(Skeleton { shape: Shape::SinglyDegenerateBarbell, edges });
            }
        }
    }
    // Doubly degenerate: a simple path or cycle, there and back.
    let mut segs: Vec<Vec<EdgeId>> = Vec::new();
    for p in g.vertices() {
        simple_paths(g, p, &vec![false; nv], lim.max_paths, &mut segs)?;
    }
    for c in &cycles {
        for p in cycle_vertices(g, c) {
            segs.push(rotate_to(g, c, p));
            segs.push(reversed(g, &rotate_to(g, c, p)));
        }
    }
    let mut seen: HashSet<Vec<EdgeId>> = HashSet::new();
    for s in segs {
        let first = s[0];
        let last = *s.last().unwrap();
        if g.origin_label(first).abs() < 2 || g.label(last).abs() < 2 {
            continue;
        }
        let r = reversed(g, &s);
        if !seen.insert(std::cmp::min(s.clone(), r.clone())) {
            continue;
        }
        let mut edges = s;
        edges.extend(r);
        out.push(Skeleton { shape: Shape::DoublyDegenerateBarbell, edges });
    }
    Ok(out)
}

/// Enumerates candidates of `m`, deduplicated by conjugacy class.
pub fn enumerate_candidates(m: &MarkedGraph) -> Result<Vec<Candidate>> {
    enumerate_candidates_with(m, &CandidateLimits::default())
}

pub fn enumerate_candidates_with(m: &MarkedGraph, lim: &CandidateLimits) -> Result<Vec<Candidate>> {
    let g = m.graph();
    let sks = skeletons(g, lim)?;
    let total: u128 = sks.iter().map(|s| s.decoration_count(g)).sum();
    if total > lim.max_candidates as u128 {
        return Err(GbsError::TooManyCandidates(lim.max_candidates));
    }
    let mut seen: HashSet<CyclicWord> = HashSet::new();
    let mut out = Vec::new();
    let pres = m.presentation();
    for sk in &sks {
        let res = sk.residues(g);
        if res.iter().any(|r| r.is_empty()) {
            continue;
        }
        let n = sk.edges.len();
        let mut idx = vec![0usize; n];
        loop {
            let start = g.origin(sk.edges[0]);
            let mut syl = Vec::with_capacity(n + 1);
            syl.push(BigInt::from(0));
            for (i, r) in res.iter().enumerate() {
                syl.push(BigInt::from(r[idx[i]]));
            }
            let w = GroupWord::from_raw(start, sk.edges.clone(), syl);
            let mut r = Reducer::new(g, start);
            r.push_word(&w)?;
            let w = r.finish();
            let (c, _) = cyclic_reduce(g, &w)?;
            if !c.is_elliptic() && seen.insert(c.clone()) {
                let mut rb = Reducer::new(g, m.base());
                rb.push_word(pres.path_to(start))?;
                rb.push_word(&w)?;
                rb.push_inverse(pres.path_to(start))?;
                let mut support: Vec<EdgeId> = sk.edges.iter().map(|&e| g.unoriented(e)).collect();
                support.sort();
                out.push(Candidate { shape: sk.shape, cyclic: c, word: rb.finish(), support });
            }
            // Next decoration.
            let mut k = 0;
            while k < n {
                idx[k] += 1;
                if idx[k] < res[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct LipschitzResult {
    pub lip: f64,
    pub d_lip: f64,
    pub witness: Candidate,
}

/// Stretch of each candidate from `a` to `b`.
pub fn candidate_ratios(cands: &[Candidate], a: &MarkedGraph, t: &Transport, exec: Exec) -> Result<Vec<f64>> {
    let ga = a.graph();
    let ratios = exec.map(cands, |c| -> Result<f64> {
        let la = c.cyclic.translation_length(ga);
        let wb = t.apply(&c.word)?;
        let (cb, _) = cyclic_reduce(t.target().graph(), &wb)?;
        if cb.is_elliptic() {
            return Err(GbsError::EllipticCandidate(c.word.display(ga).to_string()));
        }
        Ok(cb.translation_length(t.target().graph()) / la)
    });
    ratios.into_iter().collect()
}

pub fn lipschitz_distance(a: &MarkedGraph, b: &MarkedGraph) -> Result<LipschitzResult> {
    lipschitz_distance_with(a, b, Exec::default())
}

pub fn lipschitz_distance_with(a: &MarkedGraph, b: &MarkedGraph, exec: Exec) -> Result<LipschitzResult> {
    let cands = enumerate_candidates(a)?;
    lipschitz_from_candidates(&cands, a, b, exec)
}

/// Same as [`lipschitz_distance`] with a precomputed candidate list of `a`.
pub fn lipschitz_from_candidates(cands: &[Candidate], a: &MarkedGraph, b: &MarkedGraph, exec: Exec) -> Result<LipschitzResult> {
    if cands.is_empty() {
        return Err(GbsError::BadParameter("no candidates".into()));
    }
    let t = a.transport_to(b)?;
    let ratios = candidate_ratios(cands, a, &t, exec)?;
    let (i, lip) = ratios
        .iter()
        .cloned()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, r)| if r > acc.1 { (i, r) } else { acc });
    let d_lip = (lip * a.volume() / b.volume()).ln();
    Ok(LipschitzResult { lip, d_lip, witness: cands[i].clone() })
}

/// Largest stretch `‖g‖_b / ‖g‖_a` over `n` random loxodromic classes.
pub fn sup_check_random(a: &MarkedGraph, b: &MarkedGraph, n: usize, seed: u64) -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let words: Vec<GroupWord> = (0..n).filter_map(|_| random_loxodromic(&mut rng, a, 6, 3)).collect();
    let mut best: f64 = 0.0;
    for w in words {
        let la = a.length_of(&w)?;
        let lb = b.length_of(&w)?;
        best = best.max(lb / la);
    }
    Ok(best)
}

//! Leaf segment libraries of the attracting laminations, piece detection
//! on axes and the lamination ratio.
//!
//! Paths are coded by their interior: the edge sequence interleaved with
//! the junction residues. Two paths in the tree are translates of each
//! other exactly when their codes agree.

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::cyclic::{cyclic_reduce, CyclicWord, Direction};
use crate::error::{GbsError, Result};
use crate::exec::Exec;
use crate::graph::{EdgeId, GbsGraph};
use crate::marked::{GraphMorphism, MarkedGraph};
use crate::traintrack::TrainTrackMap;
use crate::word::{GroupWord, Reducer};

pub const DEFAULT_K_MAX: usize = 8;

const RESIDUE_TAG: u64 = 1 << 62;
const SEPARATOR_TAG: u64 = 1 << 63;

/// Interior code of a path word: `e0, r1, e1, r2, ..., e(n-1)`.
pub fn interior_tokens(g: &GbsGraph, w: &GroupWord) -> Vec<u64> {
    let e = w.edges();
    let s = w.syllables();
    let mut out = Vec::with_capacity(2 * e.len());
    for i in 0..e.len() {
        if i > 0 {
            out.push(RESIDUE_TAG | Direction::new(g, e[i], &s[i]).residue);
        }
        out.push(e[i].0 as u64);
    }
    out
}

/// Suffix automaton over `u64` tokens.
#[derive(Clone, Debug, Default)]
pub struct SuffixAutomaton {
    next: Vec<HashMap<u64, usize>>,
    link: Vec<Option<usize>>,
    len: Vec<usize>,
    last: usize,
}

impl SuffixAutomaton {
    pub fn new() -> Self {
        SuffixAutomaton { next: vec![HashMap::new()], link: vec![None], len: vec![0], last: 0 }
    }

    pub fn extend(&mut self, c: u64) {
        let cur = self.next.len();
        self.next.push(HashMap::new());
        self.len.push(self.len[self.last] + 1);
        self.link.push(None);
        let mut p = Some(self.last);
        while let Some(q) = p {
            if self.next[q].contains_key(&c) {
                break;
            }
            self.next[q].insert(c, cur);
            p = self.link[q];
        }
        match p {
            None => self.link[cur] = Some(0),
            Some(p) => {
                let q = self.next[p][&c];
                if self.len[p] + 1 == self.len[q] {
                    self.link[cur] = Some(q);
                } else {
                    let clone = self.next.len();
                    self.next.push(self.next[q].clone());
                    self.len.push(self.len[p] + 1);
                    self.link.push(self.link[q]);
                    let mut pp = Some(p);
                    while let Some(x) = pp {
                        if self.next[x].get(&c) != Some(&q) {
                            break;
                        }
                        self.next[x].insert(c, clone);
                        pp = self.link[x];
                    }
                    self.link[q] = Some(clone);
                    self.link[cur] = Some(clone);
                }
            }
        }
        self.last = cur;
    }

    /// Starts a new independent string: matches never span the break.
    pub fn separate(&mut self, id: u64) {
        self.extend(SEPARATOR_TAG | id);
    }

    pub fn contains(&self, s: &[u64]) -> bool {
        let mut st = 0;
        for c in s {
            match self.next[st].get(c) {
                Some(&n) => st = n,
                None => return false,
            }
        }
        true
    }

    /// `out[i]` is the length of the longest suffix of `s[..=i]` occurring
    /// in the indexed text.
    pub fn matching_statistics(&self, s: &[u64]) -> Vec<usize> {
        let mut st = 0;
        let mut l = 0;
        let mut out = Vec::with_capacity(s.len());
        for c in s {
            loop {
                if let Some(&n) = self.next[st].get(c) {
                    st = n;
                    l += 1;
                    break;
                }
                match self.link[st] {
                    Some(p) => {
                        st = p;
                        l = self.len[st];
                    }
                    None => {
                        l = 0;
                        break;
                    }
                }
            }
            out.push(l);
        }
        out
    }

    pub fn state_count(&self) -> usize {
        self.len.len()
    }
}

#[derive(Clone, Debug)]
pub struct LeafLibrary {
    /// `generations[k]` lists `[fᵏ(e)]` for every oriented edge `e`.
    pub generations: Vec<Vec<GroupWord>>,
    index: SuffixAutomaton,
}

impl LeafLibrary {
    pub fn from_words(g: &GbsGraph, generations: Vec<Vec<GroupWord>>) -> LeafLibrary {
        let mut index = SuffixAutomaton::new();
        for (id, w) in generations.iter().flatten().enumerate() {
            for t in interior_tokens(g, w) {
                index.extend(t);
            }
            index.separate(id as u64);
        }
        LeafLibrary { generations, index }
    }

    pub fn k_max(&self) -> usize {
        self.generations.len() - 1
    }

    pub fn index(&self) -> &SuffixAutomaton {
        &self.index
    }

    /// Whether the reduced path `w` is a leaf segment in the library.
    pub fn contains(&self, g: &GbsGraph, w: &GroupWord) -> bool {
        self.index.contains(&interior_tokens(g, w))
    }

    /// Pairs `(i, j)` where generation-`k` entry `i` contains no translate
    /// of generation-`(k − gap)` entry `j`.
    pub fn quasi_periodicity_failures(&self, g: &GbsGraph, k: usize, gap: usize) -> Vec<(usize, usize)> {
        if gap == 0 || k < gap || k >= self.generations.len() {
            return Vec::new();
        }
        let mut out = Vec::new();
        for (i, big) in self.generations[k].iter().enumerate() {
            let mut sa = SuffixAutomaton::new();
            for t in interior_tokens(g, big) {
                sa.extend(t);
            }
            for (j, small) in self.generations[k - gap].iter().enumerate() {
                if !sa.contains(&interior_tokens(g, small)) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Smallest gap for which generation `k` passes the containment check.
    pub fn quasi_periodicity_gap(&self, g: &GbsGraph, k: usize) -> Option<usize> {
        (1..=k).find(|&gap| self.quasi_periodicity_failures(g, k, gap).is_empty())
    }

    /// Compact binary form: generation and word counts, then for each
    /// word its base, edges and syllables.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        let put = |out: &mut Vec<u8>, x: u64| out.extend_from_slice(&x.to_le_bytes());
        out.extend_from_slice(b"GBSLIB01");
        put(&mut out, self.generations.len() as u64);
        for gen in &self.generations {
            put(&mut out, gen.len() as u64);
            for w in gen {
                put(&mut out, w.base().0 as u64);
                put(&mut out, w.edges().len() as u64);
                for e in w.edges() {
                    put(&mut out, e.0 as u64);
                }
                for s in w.syllables() {
                    let b = s.to_signed_bytes_le();
                    put(&mut out, b.len() as u64);
                    out.extend_from_slice(&b);
                }
            }
        }
        out
    }

    pub fn from_bytes(g: &GbsGraph, bytes: &[u8]) -> Result<LeafLibrary> {
        if bytes.len() < 8 || &bytes[..8] != b"GBSLIB01" {
            return Err(corrupt());
        }
        let mut cur = Cursor { bytes, pos: 8 };
        let mut generations = Vec::new();
        for _ in 0..cur.u64()? {
            let mut gen = Vec::new();
            for _ in 0..cur.u64()? {
                let base = cur.u64()? as usize;
                let ne = cur.u64()? as usize;
                if base >= g.vertex_count() {
                    return Err(corrupt());
                }
                let mut edges = Vec::with_capacity(ne);
                for _ in 0..ne {
                    let e = cur.u64()? as usize;
                    if e >= g.edge_count() {
                        return Err(corrupt());
                    }
                    edges.push(EdgeId(e));
                }
                let mut syl = Vec::with_capacity(ne + 1);
                for _ in 0..=ne {
                    let n = cur.u64()? as usize;
                    syl.push(BigInt::from_signed_bytes_le(cur.take(n)?));
                }
                gen.push(GroupWord::from_raw(crate::graph::VertexId(base), edges, syl));
            }
            generations.push(gen);
        }
        Ok(LeafLibrary::from_words(g, generations))
    }
}

fn corrupt() -> GbsError {
    GbsError::BadParameter("corrupt library cache".into())
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let s = self.bytes.get(self.pos..self.pos + n).ok_or_else(corrupt)?;
        self.pos += n;
        Ok(s)
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }
}

/// `[fᵏ(e)]` for all oriented edges and `k ≤ k_max`.
pub fn leaf_library(tt: &TrainTrackMap, k_max: usize) -> Result<LeafLibrary> {
    leaf_library_with(tt, k_max, Exec::default())
}

pub fn leaf_library_with(tt: &TrainTrackMap, k_max: usize, exec: Exec) -> Result<LeafLibrary> {
    if k_max < 2 {
        return Err(GbsError::BadParameter(format!("library depth {k_max} must be at least 2")));
    }
    let g = tt.graph();
    let edges: Vec<EdgeId> = g.edges().collect();
    // Each edge's orbit is built sequentially; edges run in parallel.
    let per_edge: Vec<Result<Vec<GroupWord>>> = exec.map(&edges, |&e| {
        let mut cur = GroupWord::from_edges(g, g.origin(e), &[e])?;
        let mut out = vec![cur.clone()];
        for _ in 0..k_max {
            cur = tt.iterate(&cur, 1)?;
            out.push(cur.clone());
        }
        Ok(out)
    });
    let per_edge = per_edge.into_iter().collect::<Result<Vec<_>>>()?;
    let generations = (0..=k_max).map(|k| per_edge.iter().map(|v| v[k].clone()).collect()).collect();
    Ok(LeafLibrary::from_words(g, generations))
}

/// An equivariant map between two marked graphs inducing the identity on
/// the group, as a groupoid morphism from `src` to `dst`.
pub fn transport_morphism(src: &MarkedGraph, dst: &MarkedGraph) -> Result<GraphMorphism> {
    let sg = src.graph();
    let dg = dst.graph();
    let spres = src.presentation();
    let mut vertex_map = Vec::new();
    let mut mult = Vec::new();
    let mut frames = Vec::new();
    for w in sg.vertices() {
        let mut r = Reducer::new(sg, src.base());
        r.push_word(spres.path_to(w))?;
        r.push_syllable(&BigInt::from(1));
        r.push_inverse(spres.path_to(w))?;
        let img = dst.realize(&src.to_reference(&r.finish())?)?;
        let (c, conj) = cyclic_reduce(dg, &img)?;
        if !c.is_elliptic() {
            return Err(GbsError::BadMarking(format!(
                "vertex group of {} is not elliptic in the target",
                sg.vertex_name(w)
            )));
        }
        vertex_map.push(c.start());
        mult.push(c.syllables()[0].clone());
        frames.push(conj);
    }
    let mut images = vec![GroupWord::identity(crate::graph::VertexId(0)); sg.edge_count()];
    for e in sg.unoriented_edges() {
        let (o, t) = (sg.origin(e), sg.terminus(e));
        let mut r = Reducer::new(sg, src.base());
        r.push_word(spres.path_to(o))?;
        r.push_edge(e)?;
        r.push_inverse(spres.path_to(t))?;
        let gamma = dst.realize(&src.to_reference(&r.finish())?)?;
        let mut r = Reducer::new(dg, vertex_map[o.0]);
        r.push_inverse(&frames[o.0])?;
        r.push_word(&gamma)?;
        r.push_word(&frames[t.0])?;
        let w = r.finish();
        images[sg.rev(e).0] = w.inverse(dg);
        images[e.0] = w;
    }
    let m = GraphMorphism { vertex_map, mult, edge_images: images };
    let bad = m.relation_violations(sg, dg);
    if !bad.is_empty() {
        return Err(GbsError::BadMarking(bad.join("; ")));
    }
    Ok(m)
}

/// Moves a library along an equivariant map and trims `trim` edges at
/// each end of every image to stay inside the image leaf.
pub fn transport_library(
    lib: &LeafLibrary,
    src: &GbsGraph,
    dst: &GbsGraph,
    h: &GraphMorphism,
    trim: usize,
) -> Result<LeafLibrary> {
    let mut gens = Vec::new();
    for gen in &lib.generations {
        let mut out = Vec::new();
        for w in gen {
            let img = h.apply(src, dst, w)?;
            if img.edge_count() > 2 * trim {
                out.push(subpath(dst, &img, trim, img.edge_count() - trim));
            }
        }
        gens.push(out);
    }
    Ok(LeafLibrary::from_words(dst, gens))
}

/// Edges `i..j` of a reduced path with their interior junctions.
pub fn subpath(g: &GbsGraph, w: &GroupWord, i: usize, j: usize) -> GroupWord {
    let e = w.edges()[i..j].to_vec();
    let mut syl = vec![BigInt::from(0)];
    syl.extend(w.syllables()[i + 1..j].iter().cloned());
    syl.push(BigInt::from(0));
    GroupWord::from_raw(g.origin(e[0]), e, syl)
}

/// Edge count of the longest path whose translates lie in both libraries.
pub fn common_leaf_edges(g: &GbsGraph, a: &LeafLibrary, b: &LeafLibrary) -> usize {
    let mut best = 0;
    for w in b.generations.iter().flatten() {
        let toks = interior_tokens(g, w);
        let ms = a.index.matching_statistics(&toks);
        for (p, &l) in ms.iter().enumerate() {
            if p % 2 == 0 && l > 0 {
                best = best.max(l.div_ceil(2));
            }
        }
    }
    best
}

/// A maximal leaf segment on the axis: edges `start .. start + len`
/// (indices modulo the period), with its metric length.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct Piece {
    pub start: usize,
    pub edges: usize,
    pub length: f64,
}

fn axis_tokens(g: &GbsGraph, c: &CyclicWord, copies: usize) -> Vec<u64> {
    let n = c.edge_count();
    let mut out = Vec::with_capacity(2 * n * copies);
    for k in 0..n * copies {
        let i = k % n;
        if k > 0 {
            let prev = (i + n - 1) % n;
            out.push(RESIDUE_TAG | Direction::new(g, c.edges()[i], &c.syllables()[prev]).residue);
        }
        out.push(c.edges()[i].0 as u64);
    }
    out
}

/// Maximal matches of library words along the axis with length at least
/// `l`, one per period (they may overlap each other).
pub fn detect_pieces(g: &GbsGraph, axis: &CyclicWord, lib: &LeafLibrary, l: f64) -> Vec<Piece> {
    let n = axis.edge_count();
    if n == 0 {
        return Vec::new();
    }
    let toks = axis_tokens(g, axis, 3);
    let ms = lib.index.matching_statistics(&toks);
    // start[j]: first edge of the longest match ending at edge j.
    let m = 3 * n;
    let start: Vec<usize> = (0..m)
        .map(|j| {
            let p = 2 * j;
            let l = ms[p];
            if l == 0 {
                j + 1
            } else {
                (p + 1 - l).div_ceil(2)
            }
        })
        .collect();
    let len = |i: usize| g.length(axis.edges()[i % n]);
    let mut prefix = vec![0.0; m + 1];
    for i in 0..m {
        prefix[i + 1] = prefix[i] + len(i);
    }
    let mut out = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for j in 0..m {
        if start[j] > j {
            continue;
        }
        // Right-maximal: the match ending at j+1 does not contain it.
        if j + 1 < m && start[j + 1] <= start[j] {
            continue;
        }
        let s = start[j];
        let edges = (j + 1 - s).min(n);
        // Short pieces reappear one period later; keep the middle copy.
        if !(n..2 * n).contains(&s) && edges < n {
            continue;
        }
        let length = prefix[s + edges] - prefix[s];
        if length + 1e-12 >= l && seen.insert((s % n, edges)) {
            out.push(Piece { start: s % n, edges, length });
        }
    }
    out.sort_by_key(|p| (p.start, p.edges));
    out
}

/// Max-range query tree.
struct MaxTree {
    n: usize,
    t: Vec<f64>,
}

impl MaxTree {
    fn new(n: usize) -> Self {
        MaxTree { n, t: vec![f64::NEG_INFINITY; 2 * n.max(1)] }
    }

    fn set(&mut self, i: usize, v: f64) {
        let mut p = i + self.n;
        self.t[p] = v;
        while p > 1 {
            p /= 2;
            self.t[p] = self.t[2 * p].max(self.t[2 * p + 1]);
        }
    }

    fn max(&self, lo: usize, hi: usize) -> f64 {
        let (mut l, mut r) = (lo + self.n, hi + 1 + self.n);
        let mut best = f64::NEG_INFINITY;
        while l < r {
            if l & 1 == 1 {
                best = best.max(self.t[l]);
                l += 1;
            }
            if r & 1 == 1 {
                r -= 1;
                best = best.max(self.t[r]);
            }
            l /= 2;
            r /= 2;
        }
        best
    }
}

/// Best disjoint coverage of `0..n` by sub-intervals of length at least
/// `l` of the given intervals `(start, end)`.
fn linear_coverage(lens: &[f64], intervals: &[(usize, usize)], l: f64) -> f64 {
    let n = lens.len();
    let mut prefix = vec![0.0; n + 1];
    for i in 0..n {
        prefix[i + 1] = prefix[i] + lens[i];
    }
    // cover_from[i]: earliest start of an interval containing edge i.
    let mut cover_from = vec![usize::MAX; n];
    for &(s, e) in intervals {
        for slot in cover_from.iter_mut().take(e).skip(s) {
            *slot = (*slot).min(s);
        }
    }
    let mut dp: Vec<f64> = vec![0.0; n + 1];
    let mut tree = MaxTree::new(n + 1);
    tree.set(0, 0.0);
    for i in 1..=n {
        dp[i] = dp[i - 1];
        let s = cover_from[i - 1];
        if s != usize::MAX {
            // Largest j with prefix[i] - prefix[j] ≥ l.
            let mut hi = None;
            let (mut a, mut b) = (s, i);
            while a < b {
                let mid = (a + b) / 2;
                if prefix[i] - prefix[mid] + 1e-12 >= l {
                    hi = Some(mid);
                    a = mid + 1;
                } else {
                    b = mid;
                }
            }
            if let Some(j) = hi {
                let best = tree.max(s, j);
                dp[i] = dp[i].max(best + prefix[i]);
            }
        }
        tree.set(i, dp[i] - prefix[i]);
    }
    dp[n]
}

/// Fraction of a fundamental domain covered by disjoint leaf segments of
/// length at least `l`. When every cut point lies inside some piece, the
/// best of several cuts is returned, which is a lower bound.
pub fn lamination_ratio(g: &GbsGraph, axis: &CyclicWord, lib: &LeafLibrary, l: f64) -> f64 {
    let n = axis.edge_count();
    if n == 0 {
        return 0.0;
    }
    let pieces = detect_pieces(g, axis, lib, l);
    if pieces.is_empty() {
        return 0.0;
    }
    let total = axis.translation_length(g);
    if pieces.iter().any(|p| p.edges >= n) {
        return 1.0;
    }
    // Boundary b sits before edge b; it is free if no piece strictly spans it.
    let spans = |p: &Piece, b: usize| {
        let off = (b + n - p.start) % n;
        off > 0 && off < p.edges
    };
    let free: Vec<usize> = (0..n).filter(|&b| !pieces.iter().any(|p| spans(p, b))).collect();
    let cuts: Vec<usize> = if let Some(&b) = free.first() {
        vec![b]
    } else {
        let step = n.div_ceil(16).max(1);
        (0..n).step_by(step).collect()
    };
    let mut best: f64 = 0.0;
    for c in cuts {
        let lens: Vec<f64> = (0..n).map(|i| g.length(axis.edges()[(c + i) % n])).collect();
        let mut iv = Vec::new();
        for p in &pieces {
            let s = (p.start + n - c) % n;
            let e = s + p.edges;
            if e <= n {
                iv.push((s, e));
            } else {
                iv.push((s, n));
                iv.push((0, e - n));
            }
        }
        best = best.max(linear_coverage(&lens, &iv, l));
    }
    (best / total).min(1.0)
}

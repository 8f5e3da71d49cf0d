//! Test-side oracles written independently of the library algorithms.
#![allow(dead_code)]

use gbs_core::graph::{EdgeId, GbsGraph, VertexId};
use gbs_core::word::{GroupWord, Letter};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rand::Rng;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Syl(VertexId, i64),
    Edge(EdgeId),
}

/// Normal form by rewriting a letter list to a fixpoint with the rules
/// `x^a x^b → x^{a+b}`, `x^0 → 1`, `e x^{zλ(e)} ē → x^{zλ(ē)}`, and
/// `x^{qλ(ē)+r} e → x^r e x^{qλ(e)}` for `0 ≤ r < |λ(ē)|`, applied
/// leftmost-first. Returns `(edges, syllables)` in the stored layout.
pub fn naive_normal_form(g: &GbsGraph, base: VertexId, letters: &[Letter]) -> (Vec<EdgeId>, Vec<i64>) {
    let mut at = base;
    let mut w: Vec<Tok> = Vec::new();
    for l in letters {
        match l {
            Letter::Syl(k) => w.push(Tok::Syl(at, i64::try_from(k).unwrap())),
            Letter::Edge(e) => {
                w.push(Tok::Edge(*e));
                at = g.terminus(*e);
            }
        }
    }
    loop {
        if !rewrite_once(g, &mut w) {
            break;
        }
    }
    let mut edges = Vec::new();
    let mut syl = vec![0];
    for t in w {
        match t {
            Tok::Syl(_, k) => *syl.last_mut().unwrap() += k,
            Tok::Edge(e) => {
                edges.push(e);
                syl.push(0);
            }
        }
    }
    (edges, syl)
}

fn rewrite_once(g: &GbsGraph, w: &mut Vec<Tok>) -> bool {
    for i in 0..w.len() {
        if let Tok::Syl(_, 0) = w[i] {
            w.remove(i);
            return true;
        }
        if i + 1 < w.len() {
            if let (Tok::Syl(v, a), Tok::Syl(_, b)) = (&w[i], &w[i + 1]) {
                let t = Tok::Syl(*v, a + b);
                w.splice(i..i + 2, [t]);
                return true;
            }
            if let (Tok::Edge(e), Tok::Edge(f)) = (&w[i], &w[i + 1]) {
                if *f == g.rev(*e) {
                    w.drain(i..i + 2);
                    return true;
                }
            }
        }
        if i + 2 < w.len() {
            if let (Tok::Edge(e), Tok::Syl(_, k), Tok::Edge(f)) = (&w[i], &w[i + 1], &w[i + 2]) {
                if *f == g.rev(*e) && k % g.label(*e) == 0 {
                    let t = Tok::Syl(g.origin(*e), k / g.label(*e) * g.origin_label(*e));
                    w.splice(i..i + 3, [t]);
                    return true;
                }
            }
        }
        if i + 1 < w.len() {
            if let (Tok::Syl(v, k), Tok::Edge(e)) = (&w[i], &w[i + 1]) {
                let m = g.origin_label(*e);
                let r = k.mod_floor(&m.abs());
                if r != *k {
                    let q = (k - r) / m;
                    let (v, e) = (*v, *e);
                    w.splice(i..i + 2, [Tok::Syl(v, r), Tok::Edge(e), Tok::Syl(g.terminus(e), q * g.label(e))]);
                    return true;
                }
            }
        }
    }
    false
}

pub fn layout(w: &GroupWord) -> (Vec<EdgeId>, Vec<i64>) {
    (w.edges().to_vec(), w.syllables().iter().map(|s| i64::try_from(s).unwrap()).collect())
}

/// Random letters along a walk (backtracking allowed) from `base`.
pub fn random_letters<R: Rng>(rng: &mut R, g: &GbsGraph, base: VertexId, len: usize, max_exp: i64) -> Vec<Letter> {
    let mut at = base;
    let mut out = Vec::new();
    for _ in 0..len {
        if rng.random_bool(0.4) {
            out.push(Letter::Syl(BigInt::from(rng.random_range(-max_exp..=max_exp))));
        } else {
            let es = g.out_edges(at);
            let e = es[rng.random_range(0..es.len())];
            out.push(Letter::Edge(e));
            at = g.terminus(e);
        }
    }
    out
}

/// Random closed letters at `base`: a walk followed by a path back.
pub fn random_closed_letters<R: Rng>(rng: &mut R, g: &GbsGraph, base: VertexId, len: usize, max_exp: i64) -> Vec<Letter> {
    let mut l = random_letters(rng, g, base, len, max_exp);
    let mut at = base;
    for x in &l {
        if let Letter::Edge(e) = x {
            at = g.terminus(*e);
        }
    }
    // Walk back along a BFS tree.
    let back = path_between(g, at, base);
    l.extend(back.into_iter().map(Letter::Edge));
    l
}

pub fn path_between(g: &GbsGraph, from: VertexId, to: VertexId) -> Vec<EdgeId> {
    let mut prev: Vec<Option<EdgeId>> = vec![None; g.vertex_count()];
    let mut seen = vec![false; g.vertex_count()];
    seen[from.0] = true;
    let mut q = std::collections::VecDeque::from([from]);
    while let Some(v) = q.pop_front() {
        for e in g.out_edges(v) {
            let t = g.terminus(e);
            if !seen[t.0] {
                seen[t.0] = true;
                prev[t.0] = Some(e);
                q.push_back(t);
            }
        }
    }
    let mut path = Vec::new();
    let mut v = to;
    while v != from {
        let e = prev[v.0].unwrap();
        path.push(e);
        v = g.origin(e);
    }
    path.reverse();
    path
}

/// Articulation points by deleting each vertex and counting components.
pub fn brute_cut_vertices(n: usize, edges: &[(usize, usize)]) -> (bool, Vec<usize>) {
    let comps = |skip: Option<usize>| {
        let mut seen = vec![false; n];
        let mut count = 0;
        for s in 0..n {
            if Some(s) == skip || seen[s] {
                continue;
            }
            count += 1;
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(u) = stack.pop() {
                for &(a, b) in edges {
                    for (x, y) in [(a, b), (b, a)] {
                        if x == u && Some(y) != skip && !seen[y] {
                            seen[y] = true;
                            stack.push(y);
                        }
                    }
                }
            }
        }
        count
    };
    let base = comps(None);
    let cuts = (0..n).filter(|&v| comps(Some(v)) > base).collect();
    (base <= 1, cuts)
}

/// Whether `needle` occurs in `hay` as a contiguous block.
pub fn naive_contains(hay: &[u64], needle: &[u64]) -> bool {
    needle.is_empty() || hay.windows(needle.len()).any(|w| w == needle)
}

pub fn is_zero_syllables(w: &GroupWord) -> bool {
    w.syllables().iter().all(|s| s.is_zero())
}

//! Path words `x^{s0} e1 x^{s1} ... en x^{sn}` in the fundamental groupoid
//! of a graph of cyclic groups, and their Britton normal form.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{GbsError, Result};
use crate::graph::{EdgeId, GbsGraph, VertexId};

/// One letter of a word as written: a syllable `x_v^k` at the current
/// vertex, or an oriented edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    Syl(BigInt),
    Edge(EdgeId),
}

/// A path word. Adjacent syllables are always merged, so the word is
/// stored as `syl[0] e[0] syl[1] ... e[n-1] syl[n]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupWord {
    base: VertexId,
    edges: Vec<EdgeId>,
    syl: Vec<BigInt>,
}

impl GroupWord {
    pub fn identity(base: VertexId) -> Self {
        GroupWord { base, edges: Vec::new(), syl: vec![BigInt::zero()] }
    }

    pub fn syllable(base: VertexId, k: impl Into<BigInt>) -> Self {
        GroupWord { base, edges: Vec::new(), syl: vec![k.into()] }
    }

    /// Builds a word from edges alone, checking adjacency.
    pub fn from_edges(g: &GbsGraph, base: VertexId, edges: &[EdgeId]) -> Result<Self> {
        Self::from_letters(g, base, edges.iter().map(|&e| Letter::Edge(e)))
    }

    pub fn from_letters(g: &GbsGraph, base: VertexId, letters: impl IntoIterator<Item = Letter>) -> Result<Self> {
        let mut w = GroupWord::identity(base);
        let mut at = base;
        for l in letters {
            match l {
                Letter::Syl(k) => *w.syl.last_mut().unwrap() += k,
                Letter::Edge(e) => {
                    if e.0 >= g.edge_count() {
                        return Err(GbsError::MalformedWord(format!("unknown edge #{}", e.0)));
                    }
                    if g.origin(e) != at {
                        return Err(GbsError::MalformedWord(format!(
                            "edge {} does not start at {}",
                            g.edge_name(e),
                            g.vertex_name(at)
                        )));
                    }
                    at = g.terminus(e);
                    w.edges.push(e);
                    w.syl.push(BigInt::zero());
                }
            }
        }
        Ok(w)
    }

    /// Raw constructor; `syl.len()` must be `edges.len() + 1`.
    pub fn from_raw(base: VertexId, edges: Vec<EdgeId>, syl: Vec<BigInt>) -> Self {
        assert_eq!(syl.len(), edges.len() + 1, "syllable count mismatch");
        GroupWord { base, edges, syl }
    }

    pub fn base(&self) -> VertexId {
        self.base
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    /// `syllables()[i]` sits before `edges()[i]`; the last one ends the word.
    pub fn syllables(&self) -> &[BigInt] {
        &self.syl
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_identity(&self) -> bool {
        self.edges.is_empty() && self.syl[0].is_zero()
    }

    pub fn end(&self, g: &GbsGraph) -> VertexId {
        self.edges.last().map_or(self.base, |&e| g.terminus(e))
    }

    pub fn is_closed(&self, g: &GbsGraph) -> bool {
        self.end(g) == self.base
    }

    pub fn letters(&self) -> Vec<Letter> {
        let mut out = Vec::with_capacity(2 * self.edges.len() + 1);
        for (i, s) in self.syl.iter().enumerate() {
            if !s.is_zero() {
                out.push(Letter::Syl(s.clone()));
            }
            if i < self.edges.len() {
                out.push(Letter::Edge(self.edges[i]));
            }
        }
        out
    }

    /// Concatenation without reduction.
    pub fn concat(&self, g: &GbsGraph, other: &GroupWord) -> Result<GroupWord> {
        if self.end(g) != other.base {
            return Err(GbsError::MalformedWord(format!(
                "cannot append a word based at {} after one ending at {}",
                g.vertex_name(other.base),
                g.vertex_name(self.end(g))
            )));
        }
        let mut w = self.clone();
        *w.syl.last_mut().unwrap() += &other.syl[0];
        w.edges.extend_from_slice(&other.edges);
        w.syl.extend(other.syl[1..].iter().cloned());
        Ok(w)
    }

    pub fn inverse(&self, g: &GbsGraph) -> GroupWord {
        GroupWord {
            base: self.end(g),
            edges: self.edges.iter().rev().map(|&e| g.rev(e)).collect(),
            syl: self.syl.iter().rev().map(|s| -s).collect(),
        }
    }

    pub fn length(&self, g: &GbsGraph) -> f64 {
        self.edges.iter().map(|&e| g.length(e)).sum()
    }

    pub fn display<'a>(&'a self, g: &'a GbsGraph) -> WordDisplay<'a> {
        WordDisplay { w: self, g }
    }

    /// Tokens in the text syntax: `v^k` syllables and edge names.
    pub fn tokens(&self, g: &GbsGraph) -> Vec<String> {
        let mut out = Vec::new();
        let mut at = self.base;
        for (i, s) in self.syl.iter().enumerate() {
            if !s.is_zero() {
                if s.is_one() {
                    out.push(g.vertex_name(at).to_string());
                } else {
                    out.push(format!("{}^{}", g.vertex_name(at), s));
                }
            }
            if i < self.edges.len() {
                out.push(g.edge_name(self.edges[i]).to_string());
                at = g.terminus(self.edges[i]);
            }
        }
        out
    }

    /// Parses tokens `v`, `v^k`, `e`, `e^-1` (reverse edge). Tokens may
    /// also be separated by whitespace inside a single string.
    pub fn parse<S: AsRef<str>>(g: &GbsGraph, base: VertexId, tokens: &[S]) -> Result<GroupWord> {
        let mut letters = Vec::new();
        for tok in tokens.iter().flat_map(|t| t.as_ref().split_whitespace()) {
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => {
                    let k: BigInt = e
                        .parse()
                        .map_err(|_| GbsError::MalformedWord(format!("bad exponent in {tok}")))?;
                    (n, Some(k))
                }
                None => (tok, None),
            };
            if g.vertex_by_name(name).is_some() {
                letters.push((Some(name), Letter::Syl(exp.unwrap_or_else(BigInt::one))));
            } else if let Some(e) = g.edge_by_name(name) {
                match exp {
                    None => letters.push((None, Letter::Edge(e))),
                    Some(k) if k == BigInt::from(-1) => letters.push((None, Letter::Edge(g.rev(e)))),
                    Some(k) if k.is_one() => letters.push((None, Letter::Edge(e))),
                    Some(_) => {
                        return Err(GbsError::MalformedWord(format!("edge exponent must be ±1 in {tok}")));
                    }
                }
            } else {
                return Err(GbsError::UnknownName(name.to_string()));
            }
        }
        // Syllables must name the current vertex.
        let mut at = base;
        let mut checked = Vec::with_capacity(letters.len());
        for (name, l) in letters {
            match &l {
                Letter::Syl(_) => {
                    let name = name.unwrap();
                    if g.vertex_name(at) != name {
                        return Err(GbsError::MalformedWord(format!(
                            "syllable {name} written at vertex {}",
                            g.vertex_name(at)
                        )));
                    }
                }
                Letter::Edge(e) => {
                    if g.origin(*e) != at {
                        return Err(GbsError::MalformedWord(format!(
                            "edge {} does not start at {}",
                            g.edge_name(*e),
                            g.vertex_name(at)
                        )));
                    }
                    at = g.terminus(*e);
                }
            }
            checked.push(l);
        }
        GroupWord::from_letters(g, base, checked)
    }
}

pub struct WordDisplay<'a> {
    w: &'a GroupWord,
    g: &'a GbsGraph,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let toks = self.w.tokens(self.g);
        if toks.is_empty() {
            write!(f, "1@{}", self.g.vertex_name(self.w.base))
        } else {
            write!(f, "{}", toks.join(" "))
        }
    }
}

/// Stack machine producing the normal form of everything pushed into it.
///
/// Invariant: every syllable below the top is a coset representative in
/// `[0, |label at origin of the next edge|)`, and no `e x^k ē` with
/// `label(e) | k` occurs.
#[derive(Clone, Debug)]
pub struct Reducer<'g> {
    g: &'g GbsGraph,
    base: VertexId,
    edges: Vec<EdgeId>,
    syl: Vec<BigInt>,
}

impl<'g> Reducer<'g> {
    pub fn new(g: &'g GbsGraph, base: VertexId) -> Self {
        Reducer { g, base, edges: Vec::new(), syl: vec![BigInt::zero()] }
    }

    pub fn current(&self) -> VertexId {
        self.edges.last().map_or(self.base, |&e| self.g.terminus(e))
    }

    pub fn push_syllable(&mut self, k: &BigInt) {
        *self.syl.last_mut().unwrap() += k;
    }

    pub fn push_edge(&mut self, e: EdgeId) -> Result<()> {
        let g = self.g;
        if g.origin(e) != self.current() {
            return Err(GbsError::MalformedWord(format!(
                "edge {} does not start at {}",
                g.edge_name(e),
                g.vertex_name(self.current())
            )));
        }
        self.push_edge_unchecked(e);
        Ok(())
    }

    fn push_edge_unchecked(&mut self, e: EdgeId) {
        let g = self.g;
        if let Some(&top) = self.edges.last() {
            if top == g.rev(e) {
                let lam = BigInt::from(g.label(top));
                let (z, r) = self.syl.last().unwrap().div_rem(&lam);
                if r.is_zero() {
                    self.edges.pop();
                    self.syl.pop();
                    *self.syl.last_mut().unwrap() += z * g.origin_label(top);
                    return;
                }
            }
        }
        let lam_o = BigInt::from(g.origin_label(e));
        let last = self.syl.last_mut().unwrap();
        let r = last.mod_floor(&lam_o.abs());
        let q = (&*last - &r) / &lam_o;
        *last = r;
        self.edges.push(e);
        self.syl.push(q * g.label(e));
    }

    pub fn push_word(&mut self, w: &GroupWord) -> Result<()> {
        if w.base != self.current() {
            return Err(GbsError::MalformedWord(format!(
                "cannot append a word based at {} at vertex {}",
                self.g.vertex_name(w.base),
                self.g.vertex_name(self.current())
            )));
        }
        self.push_syllable(&w.syl[0]);
        for (e, s) in w.edges.iter().zip(&w.syl[1..]) {
            self.push_edge_unchecked(*e);
            self.push_syllable(s);
        }
        Ok(())
    }

    /// Pushes `w^{-1}`.
    pub fn push_inverse(&mut self, w: &GroupWord) -> Result<()> {
        if w.end(self.g) != self.current() {
            return Err(GbsError::MalformedWord("inverse word does not start at the current vertex".into()));
        }
        let n = w.edges.len();
        self.push_syllable(&-&w.syl[n]);
        for i in (0..n).rev() {
            self.push_edge_unchecked(self.g.rev(w.edges[i]));
            self.push_syllable(&-&w.syl[i]);
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn finish(self) -> GroupWord {
        GroupWord { base: self.base, edges: self.edges, syl: self.syl }
    }
}

/// Britton normal form of `w`.
pub fn britton_reduce(g: &GbsGraph, w: &GroupWord) -> GroupWord {
    let mut r = Reducer::new(g, w.base);
    r.push_word(w).expect("a word is always adjacent to itself");
    r.finish()
}

/// Reduced product `a · b`.
pub fn multiply(g: &GbsGraph, a: &GroupWord, b: &GroupWord) -> Result<GroupWord> {
    let mut r = Reducer::new(g, a.base);
    r.push_word(a)?;
    r.push_word(b)?;
    Ok(r.finish())
}

/// Reduced `c · w · c⁻¹`.
pub fn conjugate(g: &GbsGraph, c: &GroupWord, w: &GroupWord) -> Result<GroupWord> {
    let mut r = Reducer::new(g, c.base);
    r.push_word(c)?;
    r.push_word(w)?;
    r.push_inverse(c)?;
    Ok(r.finish())
}

pub fn is_reduced(g: &GbsGraph, w: &GroupWord) -> bool {
    britton_reduce(g, w) == *w
}

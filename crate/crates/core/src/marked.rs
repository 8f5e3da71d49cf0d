//! Presentations, markings, substitutions and groupoid morphisms.
//!
//! A [`Presentation`] is a graph with a base vertex and a spanning tree.
//! Its generators are one `x̂_w` per vertex (the tree conjugate of `x_w`)
//! and one `γ_e` per non-tree unoriented edge. The group `G` itself is
//! fixed by a reference presentation; a [`MarkedGraph`] stores the images
//! of the reference generators in its own graph and the inverse images of
//! its own generators as reference words.

use std::collections::VecDeque;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::cyclic::{cyclic_reduce, translation_length};
use crate::error::{GbsError, Result};
use crate::graph::{EdgeId, GbsGraph, VertexId};
use crate::word::{britton_reduce, GroupWord, Reducer};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    Vertex(VertexId),
    Edge(EdgeId),
}

/// A word in the generators of a presentation: `(generator, exponent)`.
pub type GenWord = Vec<(usize, BigInt)>;

#[derive(Clone, Debug)]
pub struct Presentation {
    graph: GbsGraph,
    base: VertexId,
    in_tree: Vec<bool>,
    to_vertex: Vec<GroupWord>,
    gens: Vec<Generator>,
    vertex_gen: Vec<usize>,
    edge_gen: Vec<Option<(usize, bool)>>,
}

impl Presentation {
    /// `tree` lists one orientation of each tree edge; `None` picks a BFS tree.
    pub fn new(graph: GbsGraph, base: VertexId, tree: Option<&[EdgeId]>) -> Result<Self> {
        if base.0 >= graph.vertex_count() {
            return Err(GbsError::BadTree("base vertex out of range".into()));
        }
        let mut in_tree = vec![false; graph.edge_count()];
        match tree {
            Some(t) => {
                for &e in t {
                    in_tree[e.0] = true;
                    in_tree[graph.rev(e).0] = true;
                }
            }
            None => {
                let mut seen = vec![false; graph.vertex_count()];
                seen[base.0] = true;
                let mut queue = VecDeque::from([base]);
                while let Some(v) = queue.pop_front() {
                    for e in graph.out_edges(v) {
                        let w = graph.terminus(e);
                        if !seen[w.0] {
                            seen[w.0] = true;
                            in_tree[e.0] = true;
                            in_tree[graph.rev(e).0] = true;
                            queue.push_back(w);
                        }
                    }
                }
            }
        }
        // Tree paths from the base; checks that the tree spans and is acyclic.
        let mut to_vertex: Vec<Option<GroupWord>> = vec![None; graph.vertex_count()];
        to_vertex[base.0] = Some(GroupWord::identity(base));
        let mut queue = VecDeque::from([base]);
        let mut used = 0usize;
        while let Some(v) = queue.pop_front() {
            for e in graph.out_edges(v) {
                if !in_tree[e.0] {
                    continue;
                }
                let w = graph.terminus(e);
                if to_vertex[w.0].is_none() {
                    let mut r = Reducer::new(&graph, base);
                    r.push_word(to_vertex[v.0].as_ref().unwrap())?;
                    r.push_edge(e)?;
                    to_vertex[w.0] = Some(r.finish());
                    used += 1;
                    queue.push_back(w);
                }
            }
        }
        let tree_edges = in_tree.iter().filter(|&&b| b).count() / 2;
        if to_vertex.iter().any(Option::is_none) {
            return Err(GbsError::BadTree("tree does not span the graph".into()));
        }
        if tree_edges != used || graph.edges().any(|e| in_tree[e.0] && graph.is_loop(e)) {
            return Err(GbsError::BadTree("tree contains a cycle".into()));
        }
        let mut gens = Vec::new();
        let mut vertex_gen = vec![0; graph.vertex_count()];
        for v in graph.vertices() {
            vertex_gen[v.0] = gens.len();
            gens.push(Generator::Vertex(v));
        }
        let mut edge_gen = vec![None; graph.edge_count()];
        for e in graph.unoriented_edges() {
            if !in_tree[e.0] {
                edge_gen[e.0] = Some((gens.len(), true));
                edge_gen[graph.rev(e).0] = Some((gens.len(), false));
                gens.push(Generator::Edge(e));
            }
        }
        Ok(Presentation {
            to_vertex: to_vertex.into_iter().map(Option::unwrap).collect(),
            graph,
            base,
            in_tree,
            gens,
            vertex_gen,
            edge_gen,
        })
    }

    pub fn graph(&self) -> &GbsGraph {
        &self.graph
    }

    pub fn base(&self) -> VertexId {
        self.base
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn tree_edges(&self) -> Vec<EdgeId> {
        self.graph.unoriented_edges().filter(|e| self.in_tree[e.0]).collect()
    }

    pub fn in_tree(&self, e: EdgeId) -> bool {
        self.in_tree[e.0]
    }

    pub fn generator_name(&self, i: usize) -> &str {
        match self.gens[i] {
            Generator::Vertex(v) => self.graph.vertex_name(v),
            Generator::Edge(e) => self.graph.edge_name(e),
        }
    }

    pub fn generator_by_name(&self, name: &str) -> Option<usize> {
        (0..self.gens.len()).find(|&i| self.generator_name(i) == name)
    }

    /// Tree path from the base to `v`.
    pub fn path_to(&self, v: VertexId) -> &GroupWord {
        &self.to_vertex[v.0]
    }

    /// Closed word at the base representing generator `i`.
    pub fn generator_word(&self, i: usize) -> GroupWord {
        let g = &self.graph;
        let mut r = Reducer::new(g, self.base);
        match self.gens[i] {
            Generator::Vertex(v) => {
                r.push_word(&self.to_vertex[v.0]).unwrap();
                r.push_syllable(&BigInt::one());
                r.push_inverse(&self.to_vertex[v.0]).unwrap();
            }
            Generator::Edge(e) => {
                r.push_word(&self.to_vertex[g.origin(e).0]).unwrap();
                r.push_edge(e).unwrap();
                r.push_inverse(&self.to_vertex[g.terminus(e).0]).unwrap();
            }
        }
        r.finish()
    }

    /// Rewrites a path word as a generator word. For a closed word at the
    /// base this is an equality in the group.
    pub fn decompose(&self, w: &GroupWord) -> GenWord {
        let g = &self.graph;
        let mut out: GenWord = Vec::new();
        let mut push = |i: usize, k: BigInt| {
            if k.is_zero() {
                return;
            }
            if let Some(last) = out.last_mut() {
                if last.0 == i {
                    last.1 += k;
                    if last.1.is_zero() {
                        out.pop();
                    }
                    return;
                }
            }
            out.push((i, k));
        };
        let mut at = w.base();
        let syl = w.syllables();
        for (i, &e) in w.edges().iter().enumerate() {
            push(self.vertex_gen[at.0], syl[i].clone());
            if let Some((gi, pos)) = self.edge_gen[e.0] {
                push(gi, if pos { BigInt::one() } else { -BigInt::one() });
            }
            at = g.terminus(e);
        }
        push(self.vertex_gen[at.0], syl[syl.len() - 1].clone());
        out
    }

    /// One relator per unoriented edge: `e x_t^{λ(e)} ē x_o^{-λ(ē)}`.
    pub fn relators(&self) -> Vec<GenWord> {
        let g = &self.graph;
        g.unoriented_edges()
            .map(|e| {
                let xo = self.vertex_gen[g.origin(e).0];
                let xt = self.vertex_gen[g.terminus(e).0];
                let lt = BigInt::from(g.label(e));
                let lo = BigInt::from(-g.origin_label(e));
                match self.edge_gen[e.0] {
                    None => vec![(xt, lt), (xo, lo)],
                    Some((gi, _)) => vec![(gi, BigInt::one()), (xt, lt), (gi, -BigInt::one()), (xo, lo)],
                }
            })
            .collect()
    }

    pub fn relator_names(&self) -> Vec<String> {
        self.graph.unoriented_edges().map(|e| self.graph.edge_name(e).to_string()).collect()
    }

    /// Same combinatorics with a different metric.
    pub fn with_graph(&self, graph: GbsGraph) -> Presentation {
        Presentation { graph, ..self.clone() }
    }
}

#[derive(Clone, Debug)]
enum PowerForm {
    Elliptic { conj: GroupWord, exp: BigInt },
    Other,
}

/// Images of the generators of some presentation as closed words at the
/// base of a target graph.
#[derive(Clone, Debug)]
pub struct Substitution {
    images: Vec<GroupWord>,
    powers: Vec<PowerForm>,
}

impl Substitution {
    pub fn new(target: &GbsGraph, images: Vec<GroupWord>) -> Result<Self> {
        let mut reduced = Vec::with_capacity(images.len());
        let mut powers = Vec::with_capacity(images.len());
        for w in images {
            if !w.is_closed(target) {
                return Err(GbsError::NotClosed {
                    start: target.vertex_name(w.base()).into(),
                    end: target.vertex_name(w.end(target)).into(),
                });
            }
            let w = britton_reduce(target, &w);
            let (c, conj) = cyclic_reduce(target, &w)?;
            powers.push(if c.is_elliptic() {
                PowerForm::Elliptic { conj, exp: c.syllables()[0].clone() }
            } else {
                PowerForm::Other
            });
            reduced.push(w);
        }
        Ok(Substitution { images: reduced, powers })
    }

    pub fn images(&self) -> &[GroupWord] {
        &self.images
    }

    pub fn image(&self, i: usize) -> &GroupWord {
        &self.images[i]
    }

    pub fn push_into(&self, r: &mut Reducer<'_>, w: &GenWord) -> Result<()> {
        for (i, k) in w {
            let img = &self.images[*i];
            if k.is_one() {
                r.push_word(img)?;
            } else if *k == -BigInt::one() {
                r.push_inverse(img)?;
            } else {
                match &self.powers[*i] {
                    PowerForm::Elliptic { conj, exp } => {
                        r.push_word(conj)?;
                        r.push_syllable(&(exp * k));
                        r.push_inverse(conj)?;
                    }
                    PowerForm::Other => {
                        let n: u64 = num_traits::ToPrimitive::to_u64(&num_traits::Signed::abs(k))
                            .filter(|&n| n <= 1 << 20)
                            .ok_or_else(|| GbsError::BadParameter("huge power of a loxodromic image".into()))?;
                        for _ in 0..n {
                            if k > &BigInt::zero() {
                                r.push_word(img)?;
                            } else {
                                r.push_inverse(img)?;
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn apply(&self, target: &GbsGraph, base: VertexId, w: &GenWord) -> Result<GroupWord> {
        let mut r = Reducer::new(target, base);
        self.push_into(&mut r, w)?;
        Ok(r.finish())
    }
}

/// Checks that every relator of `source` maps to the identity.
pub fn check_relators(source: &Presentation, sub: &Substitution, target: &GbsGraph, base: VertexId) -> Result<()> {
    for (rel, name) in source.relators().iter().zip(source.relator_names()) {
        let w = sub.apply(target, base, rel)?;
        if !w.is_identity() {
            return Err(GbsError::RelationViolated(format!(
                "relator of edge {name} maps to {}",
                w.display(target)
            )));
        }
    }
    Ok(())
}

/// A point of the deformation space: a graph with a marking.
#[derive(Clone, Debug)]
pub struct MarkedGraph {
    pres: Arc<Presentation>,
    reference: Arc<Presentation>,
    marking: Arc<Substitution>,
    inverse: Arc<Substitution>,
}

impl MarkedGraph {
    /// The reference presentation marked by the identity.
    pub fn reference_point(reference: Arc<Presentation>) -> Result<Self> {
        let images: Vec<GroupWord> = (0..reference.gens.len()).map(|i| reference.generator_word(i)).collect();
        let sub = Arc::new(Substitution::new(&reference.graph, images)?);
        Ok(MarkedGraph { pres: reference.clone(), reference, marking: sub.clone(), inverse: sub })
    }

    /// `marking[i]` is the image of reference generator `i`; `inverse[j]`
    /// the reference word of generator `j` of `pres`.
    pub fn new(
        pres: Presentation,
        reference: Arc<Presentation>,
        marking: Vec<GroupWord>,
        inverse: Vec<GroupWord>,
    ) -> Result<Self> {
        if marking.len() != reference.gens.len() {
            return Err(GbsError::BadMarking(format!(
                "expected {} marking images, got {}",
                reference.gens.len(),
                marking.len()
            )));
        }
        if inverse.len() != pres.gens.len() {
            return Err(GbsError::BadMarking(format!(
                "expected {} inverse images, got {}",
                pres.gens.len(),
                inverse.len()
            )));
        }
        let marking = Substitution::new(&pres.graph, marking)?;
        let inverse = Substitution::new(&reference.graph, inverse)?;
        let m = MarkedGraph {
            pres: Arc::new(pres),
            reference,
            marking: Arc::new(marking),
            inverse: Arc::new(inverse),
        };
        m.validate_marking()?;
        Ok(m)
    }

    pub fn graph(&self) -> &GbsGraph {
        &self.pres.graph
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn presentation_arc(&self) -> &Arc<Presentation> {
        &self.pres
    }

    pub fn reference(&self) -> &Arc<Presentation> {
        &self.reference
    }

    pub fn base(&self) -> VertexId {
        self.pres.base
    }

    pub fn marking(&self) -> &Substitution {
        &self.marking
    }

    pub fn inverse_marking(&self) -> &Substitution {
        &self.inverse
    }

    /// Relations hold in both directions and the two maps are inverse.
    pub fn validate_marking(&self) -> Result<()> {
        let g = &self.pres.graph;
        let rg = &self.reference.graph;
        check_relators(&self.reference, &self.marking, g, self.pres.base)
            .map_err(|e| GbsError::BadMarking(format!("marking: {e}")))?;
        check_relators(&self.pres, &self.inverse, rg, self.reference.base)
            .map_err(|e| GbsError::BadMarking(format!("inverse: {e}")))?;
        for i in 0..self.reference.gens.len() {
            let back = self.to_reference(self.marking.image(i))?;
            if back != self.reference.generator_word(i) {
                return Err(GbsError::BadMarking(format!(
                    "inverse(marking({})) = {}",
                    self.reference.generator_name(i),
                    back.display(rg)
                )));
            }
        }
        for j in 0..self.pres.gens.len() {
            let there = self.realize(self.inverse.image(j))?;
            if there != self.pres.generator_word(j) {
                return Err(GbsError::BadMarking(format!(
                    "marking(inverse({})) = {}",
                    self.pres.generator_name(j),
                    there.display(g)
                )));
            }
        }
        Ok(())
    }

    /// Image in this graph of a closed reference word.
    pub fn realize(&self, reference_word: &GroupWord) -> Result<GroupWord> {
        check_closed_at(&self.reference.graph, reference_word, self.reference.base)?;
        let gw = self.reference.decompose(reference_word);
        self.marking.apply(&self.pres.graph, self.pres.base, &gw)
    }

    /// Reference word of a closed word at this graph's base.
    pub fn to_reference(&self, w: &GroupWord) -> Result<GroupWord> {
        check_closed_at(&self.pres.graph, w, self.pres.base)?;
        let gw = self.pres.decompose(w);
        self.inverse.apply(&self.reference.graph, self.reference.base, &gw)
    }

    /// Translation length of a reference element in this tree.
    pub fn length_of(&self, reference_word: &GroupWord) -> Result<f64> {
        translation_length(&self.pres.graph, &self.realize(reference_word)?)
    }

    pub fn volume(&self) -> f64 {
        self.pres.graph.volume()
    }

    /// Same marking, metric replaced by `graph` (which must have the same
    /// combinatorics).
    pub fn with_metric(&self, graph: GbsGraph) -> MarkedGraph {
        MarkedGraph { pres: Arc::new(self.pres.with_graph(graph)), ..self.clone() }
    }

    pub fn normalize_volume(&self) -> MarkedGraph {
        self.with_metric(self.pres.graph.normalized())
    }

    pub fn scaled(&self, factor: f64) -> MarkedGraph {
        self.with_metric(self.pres.graph.scaled(factor))
    }

    /// Substitution sending this graph's generators to words in `other`.
    pub fn transport_to(&self, other: &MarkedGraph) -> Result<Transport> {
        let images = self.inverse.images().iter().map(|w| other.realize(w)).collect::<Result<Vec<_>>>()?;
        Ok(Transport {
            source: self.pres.clone(),
            target: other.pres.clone(),
            sub: Substitution::new(&other.pres.graph, images)?,
        })
    }

    /// The marked graph `M · φ^k`: reference element `g` acts as `φ^k(g)`.
    pub fn twist(&self, phi: &Automorphism, k: i64) -> Result<MarkedGraph> {
        let marking = (0..self.reference.gens.len())
            .map(|i| self.realize(&phi.power(&self.reference.generator_word(i), k)?))
            .collect::<Result<Vec<_>>>()?;
        let inverse = self.inverse.images().iter().map(|w| phi.power(w, -k)).collect::<Result<Vec<_>>>()?;
        MarkedGraph::new((*self.pres).clone(), self.reference.clone(), marking, inverse)
    }

    /// Rebuilds the marking across a pair of groupoid morphisms between
    /// this graph and `pres`. `fwd` must send the old base to the new base;
    /// `back_path` runs in the old graph from the old base to `bwd(new base)`.
    pub fn rebuild(
        &self,
        pres: Presentation,
        fwd: &GraphMorphism,
        bwd: &GraphMorphism,
        back_path: &GroupWord,
    ) -> Result<MarkedGraph> {
        let old = &self.pres.graph;
        let new = &pres.graph;
        if fwd.vertex_map[self.pres.base.0] != pres.base {
            return Err(GbsError::BadMove("forward map moves the base vertex".into()));
        }
        let marking = self.marking.images().iter().map(|w| fwd.apply(old, new, w)).collect::<Result<Vec<_>>>()?;
        let inverse = (0..pres.gens.len())
            .map(|j| {
                let img = bwd.apply(new, old, &pres.generator_word(j))?;
                let mut r = Reducer::new(old, self.pres.base);
                r.push_word(back_path)?;
                r.push_word(&img)?;
                r.push_inverse(back_path)?;
                self.to_reference(&r.finish())
            })
            .collect::<Result<Vec<_>>>()?;
        MarkedGraph::new(pres, self.reference.clone(), marking, inverse)
    }
}

fn check_closed_at(g: &GbsGraph, w: &GroupWord, base: VertexId) -> Result<()> {
    if w.base() != base || !w.is_closed(g) {
        return Err(GbsError::NotClosed { start: g.vertex_name(w.base()).into(), end: g.vertex_name(w.end(g)).into() });
    }
    Ok(())
}

/// Rewrites closed words of one marked graph as closed words of another.
#[derive(Clone, Debug)]
pub struct Transport {
    source: Arc<Presentation>,
    target: Arc<Presentation>,
    sub: Substitution,
}

impl Transport {
    pub fn apply(&self, w: &GroupWord) -> Result<GroupWord> {
        check_closed_at(&self.source.graph, w, self.source.base)?;
        self.sub.apply(&self.target.graph, self.target.base, &self.source.decompose(w))
    }

    pub fn length(&self, w: &GroupWord) -> Result<f64> {
        translation_length(&self.target.graph, &self.apply(w)?)
    }

    pub fn target(&self) -> &Presentation {
        &self.target
    }
}

/// An automorphism of the reference group, with its inverse.
#[derive(Clone, Debug)]
pub struct Automorphism {
    pres: Arc<Presentation>,
    forward: Substitution,
    backward: Substitution,
}

impl Automorphism {
    pub fn new(pres: Arc<Presentation>, forward: Vec<GroupWord>, backward: Vec<GroupWord>) -> Result<Self> {
        let g = &pres.graph;
        let n = pres.gens.len();
        if forward.len() != n || backward.len() != n {
            return Err(GbsError::BadParameter(format!("automorphism needs {n} images")));
        }
        let forward = Substitution::new(g, forward)?;
        let backward = Substitution::new(g, backward)?;
        check_relators(&pres, &forward, g, pres.base)?;
        check_relators(&pres, &backward, g, pres.base)?;
        let a = Automorphism { pres, forward, backward };
        for i in 0..n {
            let gw = a.pres.generator_word(i);
            if a.apply_inverse(&a.apply(&gw)?)? != gw || a.apply(&a.apply_inverse(&gw)?)? != gw {
                return Err(GbsError::RelationViolated(format!(
                    "the two substitutions are not inverse on {}",
                    a.pres.generator_name(i)
                )));
            }
        }
        Ok(a)
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.pres
    }

    pub fn forward(&self) -> &Substitution {
        &self.forward
    }

    pub fn backward(&self) -> &Substitution {
        &self.backward
    }

    pub fn inverse(&self) -> Automorphism {
        Automorphism { pres: self.pres.clone(), forward: self.backward.clone(), backward: self.forward.clone() }
    }

    pub fn apply(&self, w: &GroupWord) -> Result<GroupWord> {
        check_closed_at(&self.pres.graph, w, self.pres.base)?;
        self.forward.apply(&self.pres.graph, self.pres.base, &self.pres.decompose(w))
    }

    pub fn apply_inverse(&self, w: &GroupWord) -> Result<GroupWord> {
        check_closed_at(&self.pres.graph, w, self.pres.base)?;
        self.backward.apply(&self.pres.graph, self.pres.base, &self.pres.decompose(w))
    }

    /// `φ^k(w)` for any integer k.
    pub fn power(&self, w: &GroupWord, k: i64) -> Result<GroupWord> {
        let mut cur = britton_reduce(&self.pres.graph, w);
        for _ in 0..k.unsigned_abs() {
            cur = if k > 0 { self.apply(&cur)? } else { self.apply_inverse(&cur)? };
        }
        Ok(cur)
    }
}

/// A morphism of fundamental groupoids: vertex `w` goes to `vertex_map[w]`,
/// `x_w^k` to `x^{mult[w]·k}` and oriented edge `e` to `edge_images[e]`.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphMorphism {
    pub vertex_map: Vec<VertexId>,
    pub mult: Vec<BigInt>,
    pub edge_images: Vec<GroupWord>,
}

impl GraphMorphism {
    /// Fills in reverse edges from the images of the listed orientations.
    pub fn from_half(
        src: &GbsGraph,
        dst: &GbsGraph,
        vertex_map: Vec<VertexId>,
        mult: Vec<BigInt>,
        half: &[(EdgeId, GroupWord)],
    ) -> Result<Self> {
        let mut images: Vec<Option<GroupWord>> = vec![None; src.edge_count()];
        for (e, w) in half {
            images[src.rev(*e).0] = Some(w.inverse(dst));
            images[e.0] = Some(w.clone());
        }
        let edge_images = images
            .into_iter()
            .enumerate()
            .map(|(i, w)| w.ok_or_else(|| GbsError::BadParameter(format!("no image for edge {}", src.edge_name(EdgeId(i))))))
            .collect::<Result<Vec<_>>>()?;
        let m = GraphMorphism { vertex_map, mult, edge_images };
        m.check_endpoints(src, dst)?;
        Ok(m)
    }

    pub fn check_endpoints(&self, src: &GbsGraph, dst: &GbsGraph) -> Result<()> {
        for e in src.edges() {
            let w = &self.edge_images[e.0];
            if w.base() != self.vertex_map[src.origin(e).0] || w.end(dst) != self.vertex_map[src.terminus(e).0] {
                return Err(GbsError::InvalidMap(vec![format!(
                    "image of edge {} does not join the images of its endpoints",
                    src.edge_name(e)
                )]));
            }
        }
        Ok(())
    }

    pub fn push_into(&self, src: &GbsGraph, r: &mut Reducer<'_>, w: &GroupWord) -> Result<()> {
        let mut at = w.base();
        let syl = w.syllables();
        for (i, &e) in w.edges().iter().enumerate() {
            if !syl[i].is_zero() {
                r.push_syllable(&(&self.mult[at.0] * &syl[i]));
            }
            r.push_word(&self.edge_images[e.0])?;
            at = src.terminus(e);
        }
        let last = &syl[syl.len() - 1];
        if !last.is_zero() {
            r.push_syllable(&(&self.mult[at.0] * last));
        }
        Ok(())
    }

    pub fn apply(&self, src: &GbsGraph, dst: &GbsGraph, w: &GroupWord) -> Result<GroupWord> {
        let mut r = Reducer::new(dst, self.vertex_map[w.base().0]);
        self.push_into(src, &mut r, w)?;
        Ok(r.finish())
    }

    /// Violated relations `F(e) x^{μ_t λ(e)} F(e)⁻¹ = x^{μ_o λ(ē)}`.
    pub fn relation_violations(&self, src: &GbsGraph, dst: &GbsGraph) -> Vec<String> {
        let mut out = Vec::new();
        for e in src.unoriented_edges() {
            let o = src.origin(e);
            let t = src.terminus(e);
            let mut r = Reducer::new(dst, self.vertex_map[o.0]);
            let img = &self.edge_images[e.0];
            let ok = r.push_word(img).is_ok() && {
                r.push_syllable(&(&self.mult[t.0] * src.label(e)));
                r.push_inverse(img).is_ok()
            };
            r.push_syllable(&-(&self.mult[o.0] * src.origin_label(e)));
            if !ok || !r.finish().is_identity() {
                out.push(format!("relation of edge {} is not preserved", src.edge_name(e)));
            }
        }
        out
    }
}

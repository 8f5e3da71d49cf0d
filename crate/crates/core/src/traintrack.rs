//! Train track representatives of automorphisms.
//!
//! A map is given on the domain graph by per-vertex rules
//! `φ(x̂_w) = h_w · x̂_{F(w)}^{μ_w} · h_w⁻¹` and edge images `F(e)`, paths
//! from `F(o(e))` to `F(t(e))` read in the frame at `h_{o(e)}`. The
//! elliptic correction that makes the endpoint of `F(e)` land on the right
//! lift is computed and absorbed into the stored image.

use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::cyclic::{cyclic_reduce, directions_at, turn_at, CyclicWord, Direction, TurnKey};
use crate::error::{GbsError, Result};
use crate::graph::{EdgeId, GbsGraph, VertexId};
use crate::marked::{Automorphism, GraphMorphism, MarkedGraph};
use crate::pf;
use crate::word::{britton_reduce, GroupWord, Reducer};

#[derive(Clone, Debug, PartialEq)]
pub struct VertexRule {
    /// `h_w`, a closed reference word.
    pub conj: GroupWord,
    pub target: VertexId,
    pub mult: BigInt,
}

/// Unvalidated input of a train track map.
#[derive(Clone, Debug)]
pub struct MapSpec {
    pub domain: MarkedGraph,
    pub phi: Automorphism,
    /// Images of one orientation of each edge.
    pub edge_images: Vec<(EdgeId, GroupWord)>,
    pub vertex_rules: Vec<VertexRule>,
}

#[derive(Clone, Debug)]
pub struct TrainTrackMap {
    domain: MarkedGraph,
    phi: Automorphism,
    rules: Vec<VertexRule>,
    /// Corrected images for every oriented edge.
    morphism: GraphMorphism,
    corrections: Vec<BigInt>,
    dirs: DirectionTable,
}

#[derive(Clone, Debug, Default)]
struct DirectionTable {
    offset: Vec<usize>,
    all: Vec<Direction>,
    df: Vec<usize>,
    /// `Df^N` with N the number of directions: equal iff same gate.
    gate_of: Vec<usize>,
}

impl DirectionTable {
    fn index(&self, d: Direction) -> usize {
        self.offset[d.edge.0] + d.residue as usize
    }
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct Constants {
    pub lambda: f64,
    pub bcc: f64,
    pub c_f: f64,
    pub kappa: f64,
}

impl Constants {
    pub fn from_bcc(lambda: f64, bcc: f64) -> Constants {
        let c_f = 2.0 * bcc / (lambda - 1.0);
        Constants { lambda, bcc, c_f, kappa: 2.0 * c_f }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PfData {
    /// `matrix[i][j]` counts occurrences of unoriented edge i in F(edge j).
    pub matrix: Vec<Vec<u64>>,
    pub edges: Vec<EdgeId>,
    pub lambda: f64,
    /// Lengths indexed like `edges`, summing to 1.
    pub lengths: Vec<f64>,
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct GateStructure {
    /// Per vertex, gates as lists of directions.
    pub gates: Vec<Vec<Vec<Direction>>>,
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub is_train_track: bool,
    pub gates: GateStructure,
    /// Turns taken by edge images and their forward orbits.
    pub taken_turns: Vec<TurnKey>,
    pub illegal_taken: Vec<TurnKey>,
    pub vertices_with_one_gate: Vec<VertexId>,
}

/// Violations of a map specification, empty when valid.
pub fn validate_map(spec: &MapSpec) -> Vec<String> {
    match build(spec) {
        Ok(_) => Vec::new(),
        Err(GbsError::InvalidMap(v)) => v,
        Err(e) => vec![e.to_string()],
    }
}

fn build(spec: &MapSpec) -> Result<TrainTrackMap> {
    let m = &spec.domain;
    let g = m.graph();
    let pres = m.presentation();
    let rpres = m.reference().clone();
    let phi = &spec.phi;
    let mut errs = Vec::new();
    if spec.vertex_rules.len() != g.vertex_count() {
        return Err(GbsError::InvalidMap(vec![format!(
            "expected {} vertex rules, got {}",
            g.vertex_count(),
            spec.vertex_rules.len()
        )]));
    }
    // Vertex rules, checked in the reference group.
    let mut h_dom = Vec::new();
    for w in g.vertices() {
        let rule = &spec.vertex_rules[w.0];
        let xw = m.inverse_marking().image(pres_gen_of_vertex(pres, w)).clone();
        let xt = m.inverse_marking().image(pres_gen_of_vertex(pres, rule.target)).clone();
        let lhs = phi.apply(&xw)?;
        let rg = rpres.graph();
        let mut r = Reducer::new(rg, rpres.base());
        r.push_word(&rule.conj)?;
        let (c, conj) = cyclic_reduce(rg, &xt)?;
        // x̂_target is elliptic: conj · x^k · conj⁻¹.
        let k = c.syllables()[0].clone();
        r.push_word(&conj)?;
        r.push_syllable(&(k * &rule.mult));
        r.push_inverse(&conj)?;
        r.push_inverse(&rule.conj)?;
        if r.finish() != lhs {
            errs.push(format!("vertex rule at {} does not match φ", g.vertex_name(w)));
        }
        h_dom.push(m.realize(&rule.conj)?);
    }
    let mut raw: Vec<Option<GroupWord>> = vec![None; g.edge_count()];
    for (e, w) in &spec.edge_images {
        let w = britton_reduce(g, w);
        let (o, t) = (g.origin(*e), g.terminus(*e));
        if w.base() != spec.vertex_rules[o.0].target || w.end(g) != spec.vertex_rules[t.0].target {
            errs.push(format!("image of {} does not join the images of its endpoints", g.edge_name(*e)));
            continue;
        }
        if w.edge_count() == 0 {
            errs.push(format!("image of {} is degenerate (empty path)", g.edge_name(*e)));
            continue;
        }
        raw[g.rev(*e).0] = Some(w.inverse(g));
        raw[e.0] = Some(w);
    }
    if errs.is_empty() {
        for e in g.unoriented_edges() {
            if raw[e.0].is_none() {
                errs.push(format!("edge {} has no image", g.edge_name(e)));
            }
        }
    }
    if !errs.is_empty() {
        return Err(GbsError::InvalidMap(errs));
    }
    let vertex_map: Vec<VertexId> = spec.vertex_rules.iter().map(|r| r.target).collect();
    let mult: Vec<BigInt> = spec.vertex_rules.iter().map(|r| r.mult.clone()).collect();
    // Corrections: h_o · close(W_e) · x̂^{c} = φ(γ_e) · h_t.
    let mut corrections = vec![BigInt::zero(); g.edge_count()];
    let mut images: Vec<GroupWord> = raw.iter().map(|w| w.clone().unwrap()).collect();
    for e in g.unoriented_edges() {
        let (o, t) = (g.origin(e), g.terminus(e));
        let (fo, ft) = (vertex_map[o.0], vertex_map[t.0]);
        let w = raw[e.0].as_ref().unwrap();
        let gamma = gamma_word(m, e)?;
        let phi_gamma = m.realize(&phi.apply(&m.to_reference(&gamma)?)?)?;
        let mut r = Reducer::new(g, ft);
        r.push_inverse(w)?;
        r.push_inverse(pres.path_to(fo))?;
        r.push_inverse(&h_dom[o.0])?;
        r.push_word(&phi_gamma)?;
        r.push_word(&h_dom[t.0])?;
        r.push_word(pres.path_to(ft))?;
        let q = r.finish();
        if q.edge_count() != 0 {
            errs.push(format!(
                "image of {} ends on the wrong lift (off by {})",
                g.edge_name(e),
                q.display(g)
            ));
            continue;
        }
        let c = q.syllables()[0].clone();
        let mut img = Reducer::new(g, fo);
        img.push_word(w)?;
        img.push_syllable(&c);
        let img = img.finish();
        images[g.rev(e).0] = img.inverse(g);
        images[e.0] = img;
        corrections[e.0] = c.clone();
        corrections[g.rev(e).0] = -c;
    }
    if !errs.is_empty() {
        return Err(GbsError::InvalidMap(errs));
    }
    let morphism = GraphMorphism { vertex_map, mult, edge_images: images };
    let rel = morphism.relation_violations(g, g);
    if !rel.is_empty() {
        return Err(GbsError::InvalidMap(rel));
    }
    let mut tt = TrainTrackMap {
        domain: m.clone(),
        phi: phi.clone(),
        rules: spec.vertex_rules.clone(),
        morphism,
        corrections,
        dirs: DirectionTable::default(),
    };
    // F induces φ on every generator of the domain.
    for j in 0..pres.generators().len() {
        let gw = pres.generator_word(j);
        let lhs = tt.phi_domain(&gw)?;
        let rhs = m.realize(&phi.apply(m.inverse_marking().image(j))?)?;
        if lhs != rhs {
            errs.push(format!("edge and vertex images do not induce φ on {}", pres.generator_name(j)));
        }
    }
    if !errs.is_empty() {
        return Err(GbsError::InvalidMap(errs));
    }
    tt.dirs = tt.direction_table();
    Ok(tt)
}

fn pres_gen_of_vertex(pres: &crate::marked::Presentation, v: VertexId) -> usize {
    pres.generators()
        .iter()
        .position(|g| *g == crate::marked::Generator::Vertex(v))
        .expect("every vertex is a generator")
}

/// `tree(b→o(e)) · e · tree(t(e)→b)`.
fn gamma_word(m: &MarkedGraph, e: EdgeId) -> Result<GroupWord> {
    let g = m.graph();
    let pres = m.presentation();
    let mut r = Reducer::new(g, m.base());
    r.push_word(pres.path_to(g.origin(e)))?;
    r.push_edge(e)?;
    r.push_inverse(pres.path_to(g.terminus(e)))?;
    Ok(r.finish())
}

impl TrainTrackMap {
    pub fn new(spec: &MapSpec) -> Result<TrainTrackMap> {
        build(spec)
    }

    pub fn domain(&self) -> &MarkedGraph {
        &self.domain
    }

    pub fn graph(&self) -> &GbsGraph {
        self.domain.graph()
    }

    pub fn phi(&self) -> &Automorphism {
        &self.phi
    }

    pub fn vertex_rules(&self) -> &[VertexRule] {
        &self.rules
    }

    pub fn morphism(&self) -> &GraphMorphism {
        &self.morphism
    }

    /// Corrected image of an oriented edge.
    pub fn edge_image(&self, e: EdgeId) -> &GroupWord {
        &self.morphism.edge_images[e.0]
    }

    pub fn correction(&self, e: EdgeId) -> &BigInt {
        &self.corrections[e.0]
    }

    /// Same map with the domain metric replaced.
    pub fn with_domain_metric(&self, graph: GbsGraph) -> TrainTrackMap {
        TrainTrackMap { domain: self.domain.with_metric(graph), ..self.clone() }
    }

    /// `φ(g)` as a domain word, for `g` closed at the base.
    pub fn phi_domain(&self, w: &GroupWord) -> Result<GroupWord> {
        let g = self.graph();
        let b = self.domain.base();
        let fb = self.morphism.vertex_map[b.0];
        let pres = self.domain.presentation();
        let h = self.domain.realize(&self.rules[b.0].conj)?;
        let mut r = Reducer::new(g, b);
        r.push_word(&h)?;
        r.push_word(pres.path_to(fb))?;
        self.morphism.push_into(g, &mut r, w)?;
        r.push_inverse(pres.path_to(fb))?;
        r.push_inverse(&h)?;
        Ok(r.finish())
    }

    /// `[F^n(path)]`.
    pub fn iterate(&self, path: &GroupWord, n: usize) -> Result<GroupWord> {
        let g = self.graph();
        let mut cur = britton_reduce(g, path);
        for _ in 0..n {
            cur = self.morphism.apply(g, g, &cur)?;
        }
        Ok(cur)
    }

    /// Cyclic word of `φ^n(g)`, iterating on the cyclic representative.
    pub fn iterate_cyclic(&self, c: &CyclicWord, n: usize) -> Result<CyclicWord> {
        let g = self.graph();
        let mut cur = c.clone();
        for _ in 0..n {
            let w = self.morphism.apply(g, g, &cur.to_word())?;
            cur = cyclic_reduce(g, &w)?.0;
        }
        Ok(cur)
    }

    /// Transition matrix on unoriented edges.
    pub fn transition_matrix(&self) -> (Vec<EdgeId>, Vec<Vec<u64>>) {
        let g = self.graph();
        let edges: Vec<EdgeId> = g.unoriented_edges().collect();
        let idx: HashMap<EdgeId, usize> = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let n = edges.len();
        let mut a = vec![vec![0u64; n]; n];
        for (j, &e) in edges.iter().enumerate() {
            for &f in self.edge_image(e).edges() {
                a[idx[&g.unoriented(f)]][j] += 1;
            }
        }
        (edges, a)
    }

    pub fn pf_metric(&self, tol: f64) -> Result<PfData> {
        let (edges, a) = self.transition_matrix();
        let (lambda, v) = pf::perron_frobenius(&a, tol)?;
        let residual = pf::left_residual(&a, lambda, &v);
        Ok(PfData { matrix: a, edges, lambda, lengths: v, residual })
    }

    /// The map with its domain carrying the normalized PF metric.
    pub fn with_pf_metric(&self, tol: f64) -> Result<(TrainTrackMap, PfData)> {
        let pfd = self.pf_metric(tol)?;
        let idx: HashMap<EdgeId, usize> = pfd.edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let graph = self.graph().with_lengths(|e| pfd.lengths[idx[&e]]);
        Ok((self.with_domain_metric(graph), pfd))
    }

    fn direction_table(&self) -> DirectionTable {
        let g = self.graph();
        let mut offset = vec![0; g.edge_count()];
        let mut all = Vec::new();
        for v in g.vertices() {
            for d in directions_at(g, v) {
                if d.residue == 0 {
                    offset[d.edge.0] = all.len();
                }
                all.push(d);
            }
        }
        let mut t = DirectionTable { offset, all, df: Vec::new(), gate_of: Vec::new() };
        t.df = t.all.iter().map(|&d| t.index(self.df(d))).collect();
        let n = t.all.len();
        t.gate_of = (0..n)
            .map(|mut i| {
                for _ in 0..n {
                    i = t.df[i];
                }
                i
            })
            .collect();
        t
    }

    /// Image direction: first edge of `x^{μ·j} F(e)`.
    pub fn df(&self, d: Direction) -> Direction {
        let g = self.graph();
        let w = g.origin(d.edge);
        let img = self.edge_image(d.edge);
        let s = &img.syllables()[0] + &self.morphism.mult[w.0] * BigInt::from(d.residue);
        Direction::new(g, img.edges()[0], &s)
    }

    pub fn df_turn(&self, t: &TurnKey) -> TurnKey {
        TurnKey::new(self.graph(), self.df(t.a), self.df(t.b))
    }

    pub fn same_gate(&self, a: Direction, b: Direction) -> bool {
        self.dirs.gate_of[self.dirs.index(a)] == self.dirs.gate_of[self.dirs.index(b)]
    }

    pub fn is_legal(&self, t: &TurnKey) -> bool {
        !self.same_gate(t.a, t.b)
    }

    pub fn gates(&self) -> GateStructure {
        let g = self.graph();
        let gates = g
            .vertices()
            .map(|v| {
                let mut classes: Vec<(usize, Vec<Direction>)> = Vec::new();
                for d in directions_at(g, v) {
                    let key = self.dirs.gate_of[self.dirs.index(d)];
                    match classes.iter_mut().find(|(k, _)| *k == key) {
                        Some((_, c)) => c.push(d),
                        None => classes.push((key, vec![d])),
                    }
                }
                classes.into_iter().map(|(_, c)| c).collect()
            })
            .collect();
        GateStructure { gates }
    }

    /// Interior turns of a path word.
    pub fn path_turns(&self, w: &GroupWord) -> Vec<TurnKey> {
        let g = self.graph();
        let e = w.edges();
        let s = w.syllables();
        (1..e.len()).map(|i| turn_at(g, e[i - 1], &s[i], e[i])).collect()
    }

    pub fn illegal_turn_count(&self, w: &GroupWord) -> usize {
        self.path_turns(w).iter().filter(|t| !self.is_legal(t)).count()
    }

    pub fn cyclic_illegal_turn_count(&self, c: &CyclicWord) -> Result<usize> {
        Ok(c.turns(self.graph())?.iter().filter(|t| !self.is_legal(t)).count())
    }

    /// Forward orbit of a turn under Df until it repeats. Returns the
    /// distinct turns and the index where the orbit re-enters.
    pub fn turn_trace(&self, start: TurnKey) -> (Vec<TurnKey>, usize) {
        let mut seen: HashMap<TurnKey, usize> = HashMap::new();
        let mut out = Vec::new();
        let mut cur = start;
        loop {
            if let Some(&i) = seen.get(&cur) {
                return (out, i);
            }
            seen.insert(cur, out.len());
            out.push(cur);
            cur = self.df_turn(&cur);
        }
    }

    pub fn verdict(&self) -> Verdict {
        let g = self.graph();
        let mut taken: HashSet<TurnKey> = HashSet::new();
        let mut stack: Vec<TurnKey> = Vec::new();
        for e in g.edges() {
            for t in self.path_turns(self.edge_image(e)) {
                if taken.insert(t) {
                    stack.push(t);
                }
            }
        }
        while let Some(t) = stack.pop() {
            let next = self.df_turn(&t);
            if taken.insert(next) {
                stack.push(next);
            }
        }
        let mut taken: Vec<TurnKey> = taken.into_iter().collect();
        taken.sort();
        let illegal_taken: Vec<TurnKey> = taken.iter().filter(|t| !self.is_legal(t)).cloned().collect();
        let gates = self.gates();
        let vertices_with_one_gate: Vec<VertexId> =
            g.vertices().filter(|v| gates.gates[v.0].len() < 2).collect();
        Verdict {
            is_train_track: illegal_taken.is_empty() && vertices_with_one_gate.is_empty(),
            gates,
            taken_turns: taken,
            illegal_taken,
            vertices_with_one_gate,
        }
    }

    /// All turn orbits at every vertex, degenerate ones excluded.
    pub fn all_turns(&self) -> Vec<TurnKey> {
        let g = self.graph();
        let mut out: HashSet<TurnKey> = HashSet::new();
        for v in g.vertices() {
            let ds = directions_at(g, v);
            for (i, &a) in ds.iter().enumerate() {
                for &b in &ds[i + 1..] {
                    out.insert(TurnKey::new(g, a, b));
                }
            }
        }
        let mut out: Vec<TurnKey> = out.into_iter().collect();
        out.sort();
        out
    }

    /// Reduced `x^{μ·j} F(e)` for a direction `(e, j)`.
    pub fn direction_image(&self, d: Direction) -> GroupWord {
        let g = self.graph();
        let w = g.origin(d.edge);
        let mut r = Reducer::new(g, self.morphism.vertex_map[w.0]);
        r.push_syllable(&(&self.morphism.mult[w.0] * BigInt::from(d.residue)));
        r.push_word(self.edge_image(d.edge)).expect("image starts at F(w)");
        r.finish()
    }

    /// Length of the common initial segment of the images of a turn.
    pub fn turn_cancellation(&self, t: &TurnKey) -> f64 {
        let g = self.graph();
        let p = self.direction_image(t.a);
        let q = self.direction_image(t.b);
        common_prefix_length(g, &p, &q)
    }

    /// Constants from the current domain metric and a given λ.
    pub fn constants(&self, lambda: f64) -> Constants {
        let bcc = self.all_turns().iter().map(|t| self.turn_cancellation(t)).fold(0.0, f64::max);
        Constants::from_bcc(lambda, bcc)
    }

    /// LEG of a loxodromic class in the domain metric.
    pub fn legality_ratio(&self, c: &CyclicWord, kappa: f64) -> Result<f64> {
        let g = self.graph();
        let turns = c.turns(g)?;
        let n = c.edge_count();
        let illegal: Vec<usize> = (0..n).filter(|&i| !self.is_legal(&turns[i])).collect();
        if illegal.is_empty() {
            return Ok(1.0);
        }
        let total = c.translation_length(g);
        let mut good = 0.0;
        // Segment after illegal turn i: edges i+1 ..= next illegal turn.
        for (k, &i) in illegal.iter().enumerate() {
            let j = illegal[(k + 1) % illegal.len()];
            let mut len = 0.0;
            let mut p = (i + 1) % n;
            loop {
                len += g.length(c.edges()[p]);
                if p == j {
                    break;
                }
                p = (p + 1) % n;
            }
            if len >= kappa {
                good += len;
            }
        }
        Ok(good / total)
    }
}

/// Length of the longest common prefix of two reduced paths from the same
/// vertex, as paths in the tree.
pub fn common_prefix_length(g: &GbsGraph, p: &GroupWord, q: &GroupWord) -> f64 {
    debug_assert_eq!(p.base(), q.base());
    let mut len = 0.0;
    for i in 0..p.edge_count().min(q.edge_count()) {
        if p.edges()[i] != q.edges()[i] || p.syllables()[i] != q.syllables()[i] {
            break;
        }
        len += g.length(p.edges()[i]);
    }
    len
}

/// Whether a reduced path word is legal (all interior turns legal).
pub fn is_legal_path(tt: &TrainTrackMap, w: &GroupWord) -> bool {
    tt.illegal_turn_count(w) == 0
}

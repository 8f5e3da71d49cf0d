//! Bundled examples: BS(2,4), the three-loop rose
//! `⟨u, r, s, t | r uⁿ r⁻¹ = s uⁿ s⁻¹ = t uⁿ t⁻¹ = u⟩`, the automorphism
//! `φ: r ↦ s, s ↦ t, t ↦ r s t s⁻¹ t⁻¹` and its train track
//! representatives on a two-vertex tree.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::error::Result;
use crate::graph::{GbsGraph, GraphBuilder};
use crate::marked::{Automorphism, MarkedGraph, Presentation};
use crate::traintrack::{MapSpec, TrainTrackMap, VertexRule};
use crate::word::GroupWord;

pub const DEFAULT_N: i64 = 2;

/// `⟨a, t | t a² t⁻¹ = a⁴⟩`: one vertex, one loop `t` with label 4 at its
/// origin and 2 at its terminus.
pub fn bs24() -> GbsGraph {
    let mut b = GraphBuilder::new();
    let a = b.vertex("a");
    b.edge("t", "T", a, a, 4, 2, 1.0);
    b.build().expect("bs24 is valid")
}

/// Three loops at `u`, each with label 1 at its origin and `n` at its end.
pub fn rose3(n: i64) -> GbsGraph {
    let mut b = GraphBuilder::new();
    let u = b.vertex("u");
    for (e, r) in [("r", "R"), ("s", "S"), ("t", "T")] {
        b.edge(e, r, u, u, 1, n, 1.0);
    }
    b.build().expect("rose3 is valid")
}

/// The two-vertex quotient of the train track tree. `ee` is the tree edge.
pub fn traintrack_graph(n: i64) -> GbsGraph {
    let mut b = GraphBuilder::new();
    let v = b.vertex("v");
    let x = b.vertex("x");
    b.edge("ea", "Ea", v, v, 1, n, 1.0);
    b.edge("eb", "Eb", v, x, 1, n, 1.0);
    b.edge("ee", "Ee", v, x, 1, 1, 1.0);
    b.edge("ef", "Ef", v, x, n, 1, 1.0);
    b.build().expect("train track graph is valid")
}

pub fn reference_point(g: GbsGraph) -> Result<MarkedGraph> {
    let base = crate::graph::VertexId(0);
    MarkedGraph::reference_point(Arc::new(Presentation::new(g, base, None)?))
}

pub fn bs24_marked() -> MarkedGraph {
    reference_point(bs24()).expect("bs24 presentation")
}

pub fn rose3_reference(n: i64) -> Arc<Presentation> {
    Arc::new(Presentation::new(rose3(n), crate::graph::VertexId(0), None).expect("rose3 presentation"))
}

fn words(g: &GbsGraph, list: &[&str]) -> Vec<GroupWord> {
    list.iter()
        .map(|s| GroupWord::parse(g, crate::graph::VertexId(0), &[*s]).expect("bundled word parses"))
        .collect()
}

// Reference generators are ordered u, r, s, t.
const PHI: [&str; 4] = ["u", "s", "t", "r s t s^-1 t^-1"];
const PHI_INV: [&str; 4] = ["u", "t s r s^-1 r^-1", "r", "s"];

pub fn phi(n: i64) -> Automorphism {
    phi_on(rose3_reference(n))
}

fn tree_presentation(n: i64) -> Presentation {
    let g = traintrack_graph(n);
    let ee = g.edge_by_name("ee").unwrap();
    Presentation::new(g, crate::graph::VertexId(0), Some(&[ee])).expect("tree presentation")
}

/// `reference` must be [`rose3_reference`] with the same `n`. With `swap`
/// the roles of `r` and `t` are exchanged, which conjugates `φ` to `φ⁻¹`.
fn marked_tree(reference: Arc<Presentation>, n: i64, swap: bool) -> Result<MarkedGraph> {
    let pres = tree_presentation(n);
    let g = pres.graph().clone();
    let rg = reference.graph().clone();
    // Reference generators u, r, s, t.
    let (r_img, t_img) = if swap { ("eb ee^-1", "ea") } else { ("ea", "eb ee^-1") };
    let marking = words(&g, &["v", r_img, "ee ef^-1", t_img]);
    // Own generators x̂_v, x̂_x, γ_ea, γ_eb, γ_ef.
    let (ga, gb) = if swap { ("t", "r") } else { ("r", "t") };
    let inverse = words(&rg, &["u", "u", ga, gb, "s^-1"]);
    MarkedGraph::new(pres, reference, marking, inverse)
}

/// The train track tree `T`, marked over the rose.
pub fn traintrack_tree(n: i64) -> MarkedGraph {
    marked_tree(rose3_reference(n), n, false).expect("T is a marked graph")
}

/// The tree carrying the representative of `φ⁻¹`.
pub fn traintrack_tree_minus(n: i64) -> MarkedGraph {
    marked_tree(rose3_reference(n), n, true).expect("T₋ is a marked graph")
}

const EDGE_IMAGES: [(&str, &str); 4] = [
    ("ea", "ee ef^-1"),
    ("eb", "ea ee ef^-1 eb ee^-1 ef"),
    ("ee", "eb"),
    ("ef", "ee"),
];

fn spec(domain: MarkedGraph, phi: Automorphism, h_x: &str, n: i64) -> MapSpec {
    let g = domain.graph().clone();
    let rg = domain.reference().graph().clone();
    let edge_images = EDGE_IMAGES
        .iter()
        .map(|(e, w)| {
            let e = g.edge_by_name(e).unwrap();
            let w = GroupWord::parse(&g, g.origin(e), &[*w]).expect("bundled image parses");
            (e, w)
        })
        .collect();
    let v = g.vertex_by_name("v").unwrap();
    let x = g.vertex_by_name("x").unwrap();
    let vertex_rules = vec![
        VertexRule { conj: GroupWord::identity(crate::graph::VertexId(0)), target: v, mult: BigInt::from(1) },
        VertexRule { conj: words(&rg, &[h_x]).remove(0), target: x, mult: BigInt::from(n) },
    ];
    MapSpec { domain, phi, edge_images, vertex_rules }
}

/// Input of the representative `f` of `φ` on `T`.
pub fn traintrack_spec(n: i64) -> MapSpec {
    let reference = rose3_reference(n);
    let domain = marked_tree(reference.clone(), n, false).expect("T");
    let p = phi_on(reference);
    spec(domain, p, "t", n)
}

/// Input of the representative `f₋` of `φ⁻¹` on `T₋`.
pub fn traintrack_spec_minus(n: i64) -> MapSpec {
    let reference = rose3_reference(n);
    let domain = marked_tree(reference.clone(), n, true).expect("T₋");
    let p = phi_on(reference).inverse();
    spec(domain, p, "r", n)
}

fn phi_on(reference: Arc<Presentation>) -> Automorphism {
    let g = reference.graph().clone();
    Automorphism::new(reference, words(&g, &PHI), words(&g, &PHI_INV)).expect("φ is an automorphism")
}

pub fn traintrack_map(n: i64) -> TrainTrackMap {
    TrainTrackMap::new(&traintrack_spec(n)).expect("f is a valid map")
}

pub fn traintrack_map_minus(n: i64) -> TrainTrackMap {
    TrainTrackMap::new(&traintrack_spec_minus(n)).expect("f₋ is a valid map")
}

/// Both representatives sharing one reference presentation, so their
/// markings can be compared.
pub fn traintrack_pair(n: i64) -> (TrainTrackMap, TrainTrackMap) {
    let reference = rose3_reference(n);
    let p = phi_on(reference.clone());
    let t = marked_tree(reference.clone(), n, false).expect("T");
    let tm = marked_tree(reference, n, true).expect("T₋");
    let f = TrainTrackMap::new(&spec(t, p.clone(), "t", n)).expect("f");
    let fm = TrainTrackMap::new(&spec(tm, p.inverse(), "r", n)).expect("f₋");
    (f, fm)
}

pub const NAMES: [&str; 4] = ["bs24", "rose3", "traintrack-ex", "traintrack-inverse"];

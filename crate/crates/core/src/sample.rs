//! Seeded random words and paths.

use num_bigint::BigInt;
use rand::Rng;

use crate::cyclic::cyclic_reduce;
use crate::graph::{EdgeId, GbsGraph, VertexId};
use crate::marked::{GenWord, MarkedGraph};
use crate::word::{GroupWord, Reducer};

/// A random generator word with `len` letters and exponents in `±1..=±max_exp`.
pub fn random_gen_word<R: Rng>(rng: &mut R, gens: usize, len: usize, max_exp: i64) -> GenWord {
    (0..len)
        .map(|_| {
            let k = rng.random_range(1..=max_exp);
            let k = if rng.random_bool(0.5) { k } else { -k };
            (rng.random_range(0..gens), BigInt::from(k))
        })
        .collect()
}

/// A random closed word at the base of `m`.
pub fn random_closed_word<R: Rng>(rng: &mut R, m: &MarkedGraph, len: usize, max_exp: i64) -> GroupWord {
    let pres = m.presentation();
    let g = m.graph();
    let gw = random_gen_word(rng, pres.generators().len(), len, max_exp);
    let mut r = Reducer::new(g, m.base());
    for (i, k) in gw {
        let w = pres.generator_word(i);
        let k = num_traits::ToPrimitive::to_i64(&k).expect("small exponent");
        for _ in 0..k.unsigned_abs() {
            if k < 0 {
                r.push_inverse(&w).expect("closed at the base");
            } else {
                r.push_word(&w).expect("closed at the base");
            }
        }
    }
    r.finish()
}

/// A random loxodromic closed word at the base, as a reference word.
/// Gives up after a bounded number of tries.
pub fn random_loxodromic<R: Rng>(rng: &mut R, m: &MarkedGraph, max_len: usize, max_exp: i64) -> Option<GroupWord> {
    for _ in 0..200 {
        let len = rng.random_range(1..=max_len.max(1));
        let w = random_closed_word(rng, m, len, max_exp);
        if !cyclic_reduce(m.graph(), &w).ok()?.0.is_elliptic() {
            return m.to_reference(&w).ok();
        }
    }
    None
}

/// A random reduced edge path with `len` edges from `start`, with syllables
/// in `-max_exp..=max_exp` at interior junctions.
pub fn random_path<R: Rng>(rng: &mut R, g: &GbsGraph, start: VertexId, len: usize, max_exp: i64) -> GroupWord {
    let mut r = Reducer::new(g, start);
    let mut at = start;
    let mut last: Option<EdgeId> = None;
    let mut count = 0;
    let mut guard = 0;
    while count < len && guard < 10 * len + 10 {
        guard += 1;
        let out = g.out_edges(at);
        let e = out[rng.random_range(0..out.len())];
        let s = if count == 0 { 0 } else { rng.random_range(-max_exp..=max_exp) };
        if let Some(p) = last {
            if crate::cyclic::is_backtrack(g, p, &BigInt::from(s), e) {
                continue;
            }
        }
        if s != 0 {
            r.push_syllable(&BigInt::from(s));
        }
        r.push_edge(e).expect("edge starts at the current vertex");
        at = g.terminus(e);
        last = Some(e);
        count += 1;
    }
    r.finish()
}

//! Cyclic reduction, translation lengths, directions and turns.

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{GbsError, Result};
use crate::graph::{EdgeId, GbsGraph, VertexId};
use crate::word::{GroupWord, Reducer};

/// An edge germ at `origin(edge)`: the edge `x^residue · ẽ` in local
/// coordinates. The residue lives modulo `|label at origin(edge)|`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Direction {
    pub edge: EdgeId,
    pub residue: u64,
}

impl Direction {
    pub fn new(g: &GbsGraph, edge: EdgeId, residue: &BigInt) -> Direction {
        let m = modulus(g, edge);
        let r = residue.mod_floor(&BigInt::from(m)).to_u64().unwrap();
        Direction { edge, residue: r }
    }

    pub fn shifted(self, g: &GbsGraph, s: u64) -> Direction {
        let m = modulus(g, self.edge);
        Direction { edge: self.edge, residue: (self.residue + s % m) % m }
    }
}

/// Number of directions at `origin(e)` lying over the edge `e`.
pub fn modulus(g: &GbsGraph, e: EdgeId) -> u64 {
    g.origin_label(e).unsigned_abs()
}

/// All directions at `v`, edge-major.
pub fn directions_at(g: &GbsGraph, v: VertexId) -> Vec<Direction> {
    g.out_edges(v)
        .into_iter()
        .flat_map(|e| (0..modulus(g, e)).map(move |r| Direction { edge: e, residue: r }))
        .collect()
}

/// A turn up to the diagonal action of the vertex group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TurnKey {
    pub vertex: VertexId,
    pub a: Direction,
    pub b: Direction,
}

impl TurnKey {
    /// Canonical representative: the smaller edge gets residue 0 and the
    /// other residue is reduced modulo the gcd of the two moduli.
    pub fn new(g: &GbsGraph, d1: Direction, d2: Direction) -> TurnKey {
        let vertex = g.origin(d1.edge);
        debug_assert_eq!(vertex, g.origin(d2.edge));
        let (p, q) = if d1.edge <= d2.edge { (d1, d2) } else { (d2, d1) };
        let mp = modulus(g, p.edge) as i128;
        let mq = modulus(g, q.edge) as i128;
        let (a, b) = if p.edge == q.edge {
            let d1 = (q.residue as i128 - p.residue as i128).rem_euclid(mp);
            let d2 = (p.residue as i128 - q.residue as i128).rem_euclid(mp);
            (Direction { edge: p.edge, residue: 0 }, Direction { edge: q.edge, residue: d1.min(d2) as u64 })
        } else {
            let gcd = mp.gcd(&mq);
            let d = (q.residue as i128 - p.residue as i128).rem_euclid(gcd);
            (Direction { edge: p.edge, residue: 0 }, Direction { edge: q.edge, residue: d as u64 })
        };
        TurnKey { vertex, a, b }
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }

    /// All turns in the orbit, as unordered pairs of directions.
    pub fn expand(&self, g: &GbsGraph) -> Vec<(Direction, Direction)> {
        let ma = modulus(g, self.a.edge);
        let mb = modulus(g, self.b.edge);
        let l = ma.lcm(&mb);
        let mut out: Vec<(Direction, Direction)> = (0..l)
            .map(|s| {
                let x = self.a.shifted(g, s);
                let y = self.b.shifted(g, s);
                if x <= y {
                    (x, y)
                } else {
                    (y, x)
                }
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

/// The turn crossed between `prev` and `next` with syllable `s` in
/// between: `{(ē_prev, 0), (next, s)}` at `terminus(prev)`.
pub fn turn_at(g: &GbsGraph, prev: EdgeId, s: &BigInt, next: EdgeId) -> TurnKey {
    let back = Direction { edge: g.rev(prev), residue: 0 };
    let fwd = Direction::new(g, next, s);
    TurnKey::new(g, back, fwd)
}

/// True when `prev x^s next` is a backtrack that Britton reduction removes.
pub fn is_backtrack(g: &GbsGraph, prev: EdgeId, s: &BigInt, next: EdgeId) -> bool {
    next == g.rev(prev) && (s % g.label(prev)).is_zero()
}

/// A cyclically reduced conjugacy-class representative. The linear word
/// `e0 x^{syl0} e1 x^{syl1} ... e(n-1) x^{syl(n-1)}` is closed at
/// `origin(e0)`. With no edges, the class is elliptic, `x_start^{syl0}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicWord {
    start: VertexId,
    edges: Vec<EdgeId>,
    syl: Vec<BigInt>,
}

impl CyclicWord {
    pub fn start(&self) -> VertexId {
        self.start
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    /// `syllables()[i]` follows `edges()[i]`.
    pub fn syllables(&self) -> &[BigInt] {
        &self.syl
    }

    pub fn is_elliptic(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn translation_length(&self, g: &GbsGraph) -> f64 {
        self.edges.iter().fold(0.0, |acc, &e| acc + g.length(e))
    }

    /// The linear word, closed at `start`.
    pub fn to_word(&self) -> GroupWord {
        if self.edges.is_empty() {
            return GroupWord::syllable(self.start, self.syl[0].clone());
        }
        let mut syl = Vec::with_capacity(self.syl.len() + 1);
        syl.push(BigInt::zero());
        syl.extend(self.syl.iter().cloned());
        GroupWord::from_raw(self.start, self.edges.clone(), syl)
    }

    /// Turn `i` sits between `edges[i]` and `edges[i+1]` (cyclically).
    pub fn turns(&self, g: &GbsGraph) -> Result<Vec<TurnKey>> {
        if self.is_elliptic() {
            return Err(GbsError::Elliptic);
        }
        let n = self.edges.len();
        Ok((0..n).map(|i| turn_at(g, self.edges[i], &self.syl[i], self.edges[(i + 1) % n])).collect())
    }

    /// Directions of turn `i` as an ordered pair (back, forward).
    pub fn turn_directions(&self, g: &GbsGraph, i: usize) -> (Direction, Direction) {
        let n = self.edges.len();
        let back = Direction { edge: g.rev(self.edges[i]), residue: 0 };
        (back, Direction::new(g, self.edges[(i + 1) % n], &self.syl[i]))
    }

    /// The class of `g^k`, k ≥ 1.
    pub fn power(&self, g: &GbsGraph, k: usize) -> CyclicWord {
        assert!(k >= 1);
        if self.is_elliptic() {
            return CyclicWord { start: self.start, edges: vec![], syl: vec![&self.syl[0] * k] };
        }
        let mut w = CyclicWord {
            start: self.start,
            edges: self.edges.repeat(k),
            syl: std::iter::repeat_n(self.syl.iter().cloned(), k).flatten().collect(),
        };
        w.canonicalize(g);
        w
    }

    /// Rotates to the least rotation of the (edge, turn) sequence and
    /// normalizes syllables left to right. Returns the rotation offset.
    fn canonicalize(&mut self, g: &GbsGraph) -> usize {
        let n = self.edges.len();
        if n == 0 {
            return 0;
        }
        let tokens: Vec<(EdgeId, TurnKey)> =
            (0..n).map(|i| (self.edges[i], turn_at(g, self.edges[i], &self.syl[i], self.edges[(i + 1) % n]))).collect();
        let k = least_rotation(&tokens);
        self.edges.rotate_left(k);
        self.syl.rotate_left(k);
        self.start = g.origin(self.edges[0]);
        // Normalize: push carries forward; the final syllable absorbs them.
        for i in 0..n - 1 {
            let next = self.edges[i + 1];
            let lam_o = BigInt::from(g.origin_label(next));
            let r = self.syl[i].mod_floor(&lam_o.abs());
            if r != self.syl[i] {
                let q = (&self.syl[i] - &r) / &lam_o;
                self.syl[i] = r;
                self.syl[i + 1] += q * g.label(next);
            }
        }
        k
    }
}

/// Booth's least-rotation algorithm.
pub fn least_rotation<T: Ord>(s: &[T]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let at = |i: usize| &s[i % n];
    let mut f = vec![usize::MAX; 2 * n];
    let mut k = 0usize;
    for j in 1..2 * n {
        let mut i = f[j - k - 1];
        while i != usize::MAX && at(j) != at(k + i + 1) {
            if at(j) < at(k + i + 1) {
                k = j - i - 1;
            }
            i = f[i];
        }
        if i == usize::MAX && at(j) != at(k + i.wrapping_add(1)) {
            if at(j) < at(k) {
                k = j;
            }
            f[j - k] = usize::MAX;
        } else {
            f[j - k] = i.wrapping_add(1);
        }
    }
    k % n
}

/// Cyclic reduction of a reduced closed word. Returns `(c, conj)` with
/// `w = conj · c · conj⁻¹`.
pub fn cyclic_reduce(g: &GbsGraph, w: &GroupWord) -> Result<(CyclicWord, GroupWord)> {
    if !w.is_closed(g) {
        return Err(GbsError::NotClosed {
            start: g.vertex_name(w.base()).into(),
            end: g.vertex_name(w.end(g)).into(),
        });
    }
    let edges = w.edges();
    let syl = w.syllables();
    let n = edges.len();
    if n == 0 {
        return Ok((
            CyclicWord { start: w.base(), edges: vec![], syl: vec![syl[0].clone()] },
            GroupWord::identity(w.base()),
        ));
    }
    // Conjugate the head syllable around to the end.
    let mut conj = Reducer::new(g, w.base());
    conj.push_syllable(&syl[0]);
    let mut dq: VecDeque<(EdgeId, BigInt)> = edges.iter().cloned().zip(syl[1..].iter().cloned()).collect();
    dq.back_mut().unwrap().1 += &syl[0];
    loop {
        let (first, last) = (dq.front().unwrap().0, dq.back().unwrap());
        if !is_backtrack(g, last.0, &last.1, first) {
            break;
        }
        let (en, s_wrap) = dq.pop_back().unwrap();
        let z = &s_wrap / g.label(en);
        let (e1, s1) = dq.pop_front().unwrap();
        conj.push_edge(e1)?;
        if dq.is_empty() {
            // w ~ e1 x^{s1 + z λ(ē_n)} ē1
            let k = s1 + z * g.origin_label(en);
            let c = CyclicWord { start: g.terminus(e1), edges: vec![], syl: vec![k] };
            return Ok((c, conj.finish()));
        }
        conj.push_syllable(&s1);
        let back = dq.back_mut().unwrap();
        back.1 += z * g.origin_label(en) + s1;
    }
    let (edges, syl): (Vec<_>, Vec<_>) = dq.into_iter().unzip();
    let mut c = CyclicWord { start: g.origin(edges[0]), edges, syl };
    let before = c.clone();
    let k = c.canonicalize(g);
    // The rotation conjugates by the prefix e0 x^{s0} ... e(k-1) x^{s(k-1)}.
    for i in 0..k {
        conj.push_edge(before.edges[i])?;
        conj.push_syllable(&before.syl[i]);
    }
    Ok((c, conj.finish()))
}

/// ‖w‖ for a closed word in `g`.
pub fn translation_length(g: &GbsGraph, w: &GroupWord) -> Result<f64> {
    let reduced = crate::word::britton_reduce(g, w);
    Ok(cyclic_reduce(g, &reduced)?.0.translation_length(g))
}

/// One turn key per junction of the cyclic word of `w`.
pub fn axis_turns(g: &GbsGraph, w: &GroupWord) -> Result<Vec<TurnKey>> {
    let reduced = crate::word::britton_reduce(g, w);
    let (c, _) = cyclic_reduce(g, &reduced)?;
    c.turns(g)
}

/// Exponent of an elliptic class, as an i64 when it fits.
pub fn elliptic_exponent(c: &CyclicWord) -> Option<i64> {
    if c.is_elliptic() {
        c.syl[0].to_i64()
    } else {
        None
    }
}

/// Whether `k` is nonzero modulo `|m|`.
pub fn nonzero_mod(k: &BigInt, m: i64) -> bool {
    !(k.abs() % m.abs()).is_zero()
}

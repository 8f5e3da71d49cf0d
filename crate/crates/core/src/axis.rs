//! The discrete axis `t ↦ T_t` of an automorphism with train track
//! representatives on both sides, legality exponents, projections of
//! elements and trees onto the axis, and the contraction experiment.
//!
//! Lengths on the axis use the identity `‖g‖_{T·φⁿ} = ‖φⁿ(g)‖_T`: forward
//! powers iterate the train track map on cyclic words, backward powers
//! apply the inverse substitution in the reference presentation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cyclic::{cyclic_reduce, CyclicWord};
use crate::error::{GbsError, Result};
use crate::exec::Exec;
use crate::lipschitz::{enumerate_candidates, lipschitz_distance_with};
use crate::marked::{Automorphism, MarkedGraph};
use crate::moves::random_deform;
use crate::sample::random_loxodromic;
use crate::traintrack::{PfData, TrainTrackMap};
use crate::word::GroupWord;

const PF_TOL: f64 = 1e-13;

/// One train track representative with its PF metric and constants.
#[derive(Clone, Debug)]
pub struct Side {
    pub tt: TrainTrackMap,
    pub pf: PfData,
    pub lambda: f64,
    pub kappa: f64,
    pub min_edge: f64,
}

impl Side {
    pub fn new(tt: &TrainTrackMap) -> Result<Side> {
        let (tt, pf) = tt.with_pf_metric(PF_TOL)?;
        let lambda = pf.lambda;
        let kappa = tt.constants(lambda).kappa;
        let min_edge = pf.lengths.iter().cloned().fold(f64::INFINITY, f64::min);
        Ok(Side { tt, pf, lambda, kappa, min_edge })
    }

    /// Lazily computed orbit of a reference element under the map's outer
    /// class `ψ`: index `j` holds the cyclic word of `ψ^j(g)`.
    pub fn orbit(&self, g: &GroupWord, max_edges: usize) -> Result<Orbit<'_>> {
        let c0 = cyclic_reduce(self.tt.graph(), &self.tt.domain().realize(g)?)?.0;
        if c0.is_elliptic() {
            return Err(GbsError::Elliptic);
        }
        let rg = self.tt.phi().presentation().graph();
        let g0 = cyclic_reduce(rg, g)?.0.to_word();
        Ok(Orbit { side: self, pos: vec![c0.clone()], neg_ref: vec![g0], neg: vec![c0], max_edges })
    }
}

pub struct Orbit<'a> {
    side: &'a Side,
    pos: Vec<CyclicWord>,
    neg_ref: Vec<GroupWord>,
    neg: Vec<CyclicWord>,
    max_edges: usize,
}

impl Orbit<'_> {
    pub fn cyclic(&mut self, j: i64) -> Result<&CyclicWord> {
        let tt = &self.side.tt;
        if j >= 0 {
            while self.pos.len() <= j as usize {
                let next = tt.iterate_cyclic(self.pos.last().unwrap(), 1)?;
                self.guard(next.edge_count(), j)?;
                self.pos.push(next);
            }
            Ok(&self.pos[j as usize])
        } else {
            let m = j.unsigned_abs() as usize;
            let rg = tt.phi().presentation().graph();
            while self.neg.len() <= m {
                let w = tt.phi().apply_inverse(self.neg_ref.last().unwrap())?;
                let w = cyclic_reduce(rg, &w)?.0.to_word();
                self.guard(w.edge_count(), j)?;
                let c = cyclic_reduce(tt.graph(), &tt.domain().realize(&w)?)?.0;
                self.guard(c.edge_count(), j)?;
                self.neg_ref.push(w);
                self.neg.push(c);
            }
            Ok(&self.neg[m])
        }
    }

    fn guard(&self, edges: usize, j: i64) -> Result<()> {
        if edges > self.max_edges {
            return Err(GbsError::BadParameter(format!(
                "power {j} has more than {} edges; lower the window",
                self.max_edges
            )));
        }
        Ok(())
    }

    pub fn norm(&mut self, j: i64) -> Result<f64> {
        let g = self.side.tt.graph().clone();
        Ok(self.cyclic(j)?.translation_length(&g))
    }

    pub fn leg(&mut self, j: i64) -> Result<f64> {
        let kappa = self.side.kappa;
        let c = self.cyclic(j)?.clone();
        self.side.tt.legality_ratio(&c, kappa)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct ProjectionConfig {
    pub epsilon0: f64,
    /// Grid step; `0` means `log λ / 8`.
    pub delta: f64,
    pub k_min: i64,
    pub k_max: i64,
    /// Half-width, in powers of φ, of the scans around a seed exponent.
    pub span: i64,
    pub samples: usize,
    pub seed: u64,
    /// Words longer than this abort a computation.
    pub max_edges: usize,
}

impl Default for ProjectionConfig {
    fn default() -> Self {
        ProjectionConfig {
            epsilon0: 0.5,
            delta: 0.0,
            k_min: -24,
            k_max: 24,
            span: 6,
            samples: 50,
            seed: 1,
            max_edges: 2_000_000,
        }
    }
}

impl ProjectionConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon0 > 0.0 && self.epsilon0 <= 1.0) {
            return Err(GbsError::BadParameter(format!("epsilon0 = {} is not in (0, 1]", self.epsilon0)));
        }
        if self.k_min > 0 || self.k_max < 0 {
            return Err(GbsError::BadParameter("window must contain 0".into()));
        }
        if self.delta < 0.0 || self.span < 1 {
            return Err(GbsError::BadParameter("delta must be >= 0 and span >= 1".into()));
        }
        Ok(())
    }
}

/// The axis of `φ` through the train track tree `T`, with the
/// representative of `φ⁻¹` on `T₋`.
#[derive(Clone, Debug)]
pub struct Axis {
    pub plus: Side,
    pub minus: Side,
    /// Reference words of the candidates of `T`.
    tree_candidates: Vec<GroupWord>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxisPoint {
    pub t: f64,
    pub n: i64,
    #[serde(skip)]
    pub realization: MarkedGraph,
}

impl Axis {
    /// `f` represents `φ` and `fm` represents `φ⁻¹`, over one reference.
    pub fn new(f: &TrainTrackMap, fm: &TrainTrackMap) -> Result<Axis> {
        let plus = Side::new(f)?;
        let minus = Side::new(fm)?;
        let t = plus.tt.domain();
        let tree_candidates =
            enumerate_candidates(t)?.iter().map(|c| t.to_reference(&c.word)).collect::<Result<Vec<_>>>()?;
        Ok(Axis { plus, minus, tree_candidates })
    }

    pub fn bundled(n: i64) -> Result<Axis> {
        let (f, fm) = crate::corpus::traintrack_pair(n);
        Axis::new(&f, &fm)
    }

    pub fn phi(&self) -> &Automorphism {
        self.plus.tt.phi()
    }

    pub fn tree(&self) -> &MarkedGraph {
        self.plus.tt.domain()
    }

    pub fn log_lambda(&self) -> f64 {
        self.plus.lambda.ln()
    }

    pub fn delta(&self, cfg: &ProjectionConfig) -> f64 {
        if cfg.delta > 0.0 {
            cfg.delta
        } else {
            self.log_lambda() / 8.0
        }
    }

    /// Step of the axis carrying grid parameter `t`.
    pub fn step_of(&self, t: f64) -> i64 {
        (t / self.log_lambda()).round() as i64
    }

    /// `T_t`, realized as `T·φⁿ` with `n` the nearest step.
    pub fn point(&self, t: f64) -> Result<AxisPoint> {
        let n = self.step_of(t);
        Ok(AxisPoint { t, n, realization: self.tree().twist(self.phi(), n)? })
    }

    /// `d_lip(T, T·φᵐ)` from the candidates of `T`.
    pub fn step_distance(&self, m: i64, max_edges: usize) -> Result<f64> {
        let mut best = f64::NEG_INFINITY;
        for c in &self.tree_candidates {
            let mut o = self.plus.orbit(c, max_edges)?;
            best = best.max((o.norm(m)? / o.norm(0)?).ln());
        }
        Ok(best)
    }

    /// Samples loxodromic reference words from short words in `T`.
    pub fn sample_loxodromics(&self, count: usize, seed: u64) -> Vec<GroupWord> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count * 4)
            .filter_map(|_| random_loxodromic(&mut rng, self.tree(), 4, 2))
            .take(count)
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Exponents {
    pub k_plus: i64,
    pub k_minus: i64,
    pub t0: f64,
}

/// Least `j ≥ lower bound` with `LEG(ψ^j g) ≥ ε₀` on one side. Below the
/// bound `‖g‖ ≥ (ε₀/2)·λ^{-j}·min_edge` would fail, so no smaller exponent
/// can qualify.
fn least_legal_exponent(side: &Side, g: &GroupWord, cfg: &ProjectionConfig, what: &str) -> Result<i64> {
    let mut o = side.orbit(g, cfg.max_edges)?;
    let len = o.norm(0)?;
    let bound = ((len / (cfg.epsilon0 / 2.0 * side.min_edge)).ln() / side.lambda.ln()).floor() as i64;
    let lo = cfg.k_min.max(-bound.max(0));
    for j in lo..=cfg.k_max {
        if o.leg(j)? >= cfg.epsilon0 {
            return Ok(j);
        }
    }
    Err(GbsError::WindowExhausted { lo: cfg.k_min, hi: cfg.k_max, what: what.into() })
}

pub fn legality_exponents(axis: &Axis, g: &GroupWord, cfg: &ProjectionConfig) -> Result<Exponents> {
    let k_plus = least_legal_exponent(&axis.plus, g, cfg, "k_plus")?;
    let k_minus = -least_legal_exponent(&axis.minus, g, cfg, "k_minus")?;
    Ok(Exponents { k_plus, k_minus, t0: k_plus as f64 * axis.log_lambda() })
}

/// Grid minimizers of `t ↦ ‖g‖_{T_t}`.
#[derive(Clone, Debug, Serialize)]
pub struct Theta {
    pub exponents: Exponents,
    /// Minimizing steps, contiguous or not.
    pub steps: Vec<i64>,
    pub t_lo: f64,
    pub t_hi: f64,
    pub diameter: f64,
    /// Distance from `t₀` to the farthest minimizer.
    pub offset: f64,
    pub norms: Vec<(i64, f64)>,
}

/// Grid interval covered by steps `lo..=hi`.
fn grid_interval(axis: &Axis, cfg: &ProjectionConfig, lo: i64, hi: i64) -> (f64, f64) {
    let l = axis.log_lambda();
    let d = axis.delta(cfg);
    let first = ((lo as f64 - 0.5) * l / d).ceil() * d;
    let last = ((hi as f64 + 0.5) * l / d).ceil() * d - d;
    (first, last)
}

fn argmin_steps(curve: &[(i64, f64)]) -> Vec<i64> {
    let best = curve.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let tol = 1e-9 * best.abs().max(1.0);
    curve.iter().filter(|p| p.1 <= best + tol).map(|p| p.0).collect()
}

pub fn theta_of_element(axis: &Axis, g: &GroupWord, cfg: &ProjectionConfig) -> Result<Theta> {
    let exponents = legality_exponents(axis, g, cfg)?;
    let k = exponents.k_plus;
    let mut o = axis.plus.orbit(g, cfg.max_edges)?;
    let lo = (k - cfg.span).max(cfg.k_min);
    let mut norms = Vec::new();
    for j in lo..=k {
        norms.push((j, o.norm(j)?));
    }
    // Past k the norm grows at least like (ε₀/2)λ^{j-k}‖φᵏg‖.
    let base = o.norm(k)?;
    let mut best = norms.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    for j in k + 1..=(k + cfg.span).min(cfg.k_max) {
        if cfg.epsilon0 / 2.0 * axis.plus.lambda.powi((j - k) as i32) * base > best {
            break;
        }
        let v = o.norm(j)?;
        best = best.min(v);
        norms.push((j, v));
    }
    let steps = argmin_steps(&norms);
    let (t_lo, _) = grid_interval(axis, cfg, steps[0], steps[0]);
    let (_, t_hi) = grid_interval(axis, cfg, *steps.last().unwrap(), *steps.last().unwrap());
    let offset = steps.iter().map(|&j| ((j - k) as f64 * axis.log_lambda()).abs()).fold(0.0, f64::max);
    Ok(Theta { exponents, steps, t_lo, t_hi, diameter: t_hi - t_lo, offset, norms })
}

#[derive(Clone, Debug, Serialize)]
pub struct Projection {
    pub t_x: f64,
    pub n_x: i64,
    pub steps: Vec<i64>,
    pub diameter: f64,
    /// `(n, d_lip(X, T·φⁿ))` over the scanned steps.
    pub curve: Vec<(i64, f64)>,
    pub point: AxisPoint,
}

/// Scans `n ↦ d_lip(X, T·φⁿ)` with the candidates of `X`.
pub fn project_tree(axis: &Axis, x: &MarkedGraph, cfg: &ProjectionConfig, exec: Exec) -> Result<Projection> {
    let cands = enumerate_candidates(x)?;
    if cands.is_empty() {
        return Err(GbsError::BadParameter("no candidates".into()));
    }
    let refs = cands.iter().map(|c| x.to_reference(&c.word)).collect::<Result<Vec<_>>>()?;
    let xl: Vec<f64> = cands.iter().map(|c| c.cyclic.translation_length(x.graph())).collect();
    // Seed at the shortest candidate's exponent.
    let seed_idx = (0..refs.len()).min_by(|&a, &b| xl[a].total_cmp(&xl[b])).unwrap();
    let seed = legality_exponents(axis, &refs[seed_idx], cfg)?.k_plus;
    let scale = x.volume() / axis.tree().volume();
    let mut lo = (seed - cfg.span).max(cfg.k_min);
    let mut hi = (seed + cfg.span).min(cfg.k_max);
    let eval = |a: i64, b: i64| -> Result<Vec<(i64, f64)>> {
        let per = exec.map(&refs, |r| -> Result<Vec<f64>> {
            let mut o = axis.plus.orbit(r, cfg.max_edges)?;
            (a..=b).map(|j| o.norm(j)).collect()
        });
        let per = per.into_iter().collect::<Result<Vec<_>>>()?;
        Ok((a..=b)
            .enumerate()
            .map(|(i, j)| {
                let lip = per.iter().zip(&xl).map(|(v, l)| v[i] / l).fold(f64::NEG_INFINITY, f64::max);
                (j, (lip * scale).ln())
            })
            .collect())
    };
    let mut curve = eval(lo, hi)?;
    // Widen while the minimum sits on a boundary that can still move.
    loop {
        let steps = argmin_steps(&curve);
        if steps[0] == lo && lo > cfg.k_min {
            lo -= 1;
            let mut c = eval(lo, lo)?;
            c.extend(curve);
            curve = c;
        } else if *steps.last().unwrap() == hi && hi < cfg.k_max {
            hi += 1;
            curve.extend(eval(hi, hi)?);
        } else {
            break;
        }
    }
    let steps = argmin_steps(&curve);
    let n_x = steps[(steps.len() - 1) / 2];
    let (t_lo, _) = grid_interval(axis, cfg, steps[0], steps[0]);
    let (_, t_hi) = grid_interval(axis, cfg, *steps.last().unwrap(), *steps.last().unwrap());
    let t_x = n_x as f64 * axis.log_lambda();
    Ok(Projection { t_x, n_x, diameter: t_hi - t_lo, steps, curve, point: axis.point(t_x)? })
}

#[derive(Clone, Debug, Serialize)]
pub struct Epsilon0 {
    pub epsilon0: f64,
    pub n: u32,
    /// `min_g max(LEG_f(φᴺg), LEG_{f₋}(φ⁻ᴺg))` for each swept N.
    pub per_n: Vec<f64>,
}

pub fn estimate_epsilon0(axis: &Axis, sample: &[GroupWord], n_max: u32, max_edges: usize, exec: Exec) -> Result<Epsilon0> {
    let rows = exec.map(sample, |g| -> Result<Vec<f64>> {
        let mut op = axis.plus.orbit(g, max_edges)?;
        let mut om = axis.minus.orbit(g, max_edges)?;
        (0..=n_max as i64).map(|n| Ok(op.leg(n)?.max(om.leg(n)?))).collect()
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let per_n: Vec<f64> =
        (0..=n_max as usize).map(|n| rows.iter().map(|r| r[n]).fold(1.0, f64::min)).collect();
    let mut n = 0;
    for (i, &e) in per_n.iter().enumerate() {
        if e > per_n[n] {
            n = i;
        }
    }
    Ok(Epsilon0 { epsilon0: per_n[n], n: n as u32, per_n })
}

#[derive(Clone, Debug, Serialize)]
pub struct ExponentReport {
    pub exponents: Vec<Exponents>,
    /// `max |k_plus − k_minus|`.
    pub n: i64,
}

pub fn exponent_coherence(axis: &Axis, sample: &[GroupWord], cfg: &ProjectionConfig, exec: Exec) -> Result<ExponentReport> {
    let ex = exec.map(sample, |g| legality_exponents(axis, g, cfg));
    let exponents = ex.into_iter().collect::<Result<Vec<_>>>()?;
    let n = exponents.iter().map(|e| (e.k_plus - e.k_minus).abs()).max().unwrap_or(0);
    Ok(ExponentReport { exponents, n })
}

#[derive(Clone, Debug, Serialize)]
pub struct SandwichReport {
    /// Smallest `C` making both inequalities hold on every sampled point.
    pub c: f64,
    /// Per element: largest `|log(‖g‖_{T_t} / (λ^m‖g‖_{T_{t₀}}))|`.
    pub residuals: Vec<f64>,
    pub points: usize,
}

/// Fits the constant of `C⁻¹λ^m‖g‖_{T₀} ≤ ‖g‖_{T_t} ≤ Cλ^m‖g‖_{T₀}` with
/// `m = ⌊|t − t₀|/log λ⌋`, over grid points `t ∈ t₀ ± span·log λ`.
pub fn sandwich_fit(axis: &Axis, sample: &[GroupWord], cfg: &ProjectionConfig, exec: Exec) -> Result<SandwichReport> {
    let l = axis.log_lambda();
    let d = axis.delta(cfg);
    let per = exec.map(sample, |g| -> Result<(f64, usize)> {
        let k = legality_exponents(axis, g, cfg)?.k_plus;
        let t0 = k as f64 * l;
        let mut o = axis.plus.orbit(g, cfg.max_edges)?;
        let base = o.norm(k)?;
        let grid = (cfg.span as f64 * l / d).floor() as i64;
        let mut worst: f64 = 0.0;
        let mut count = 0;
        for i in -grid..=grid {
            let t = t0 + i as f64 * d;
            let n = axis.step_of(t);
            let v = o.norm(n)?;
            let (lam, m) = if t >= t0 {
                (axis.plus.lambda, ((t - t0) / l + 1e-9).floor())
            } else {
                (axis.minus.lambda, ((t0 - t) / l + 1e-9).floor())
            };
            worst = worst.max((v / (lam.powf(m) * base)).ln().abs());
            count += 1;
        }
        Ok((worst, count))
    });
    let per = per.into_iter().collect::<Result<Vec<_>>>()?;
    let residuals: Vec<f64> = per.iter().map(|p| p.0).collect();
    let c = residuals.iter().cloned().fold(0.0, f64::max).exp();
    Ok(SandwichReport { c, residuals, points: per.iter().map(|p| p.1).sum() })
}

/// Probes whose `‖φⁿg‖ + ‖φ⁻ⁿg‖` fails to increase strictly for some
/// `n_from ≤ n < n_to`; returns `(index, n)` per failure.
pub fn pseudo_atoroidality(axis: &Axis, probes: &[GroupWord], n_from: i64, n_to: i64, max_edges: usize) -> Result<Vec<(usize, i64)>> {
    let mut out = Vec::new();
    for (i, g) in probes.iter().enumerate() {
        let mut o = axis.plus.orbit(g, max_edges)?;
        let mut prev = o.norm(n_from)? + o.norm(-n_from)?;
        for n in n_from + 1..=n_to {
            let cur = o.norm(n)? + o.norm(-n)?;
            if cur <= prev {
                out.push((i, n));
            }
            prev = cur;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default)]
pub struct ExperimentConfig {
    pub projection: ProjectionConfig,
    /// Number of balls; centers are drawn until this many are recorded.
    pub balls: usize,
    /// Radii as fractions of the center's distance to the axis.
    pub radius_fractions: Vec<f64>,
    /// Deformed trees sampled around each center.
    pub samples_per_center: usize,
    /// Extra trees near a distant axis translate, used only for the
    /// defect constants.
    pub far_samples: usize,
    pub center_steps: usize,
    pub max_sample_steps: usize,
    /// Separation used for the projection inequalities.
    pub s: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            projection: ProjectionConfig::default(),
            balls: 200,
            radius_fractions: vec![0.25, 0.5, 0.75, 1.0],
            samples_per_center: 8,
            far_samples: 2,
            center_steps: 4,
            max_sample_steps: 4,
            s: 1.0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BallRow {
    pub center: usize,
    pub center_t: f64,
    pub axis_distance: f64,
    pub radius: f64,
    pub members: usize,
    pub projected_diameter: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ContractionReport {
    pub rows: Vec<BallRow>,
    /// Largest `d(X, π X) + d(π X, T_t) − d(X, T_t)` with `|t − t_X| > s`.
    pub c_projections1: Option<f64>,
    /// Largest `d(Y, π X) − d(Y, X)` with `|t_X − t_Y| > s`.
    pub c_projections2: Option<f64>,
    pub pairs_projections2: usize,
    /// Least-squares slopes of diameter against radius below and above the
    /// median radius.
    pub slopes: (f64, f64),
    pub skipped_centers: usize,
}

impl ContractionReport {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("center,center_t,axis_distance,radius,members,projected_diameter\n");
        for r in &self.rows {
            s.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.center, r.center_t, r.axis_distance, r.radius, r.members, r.projected_diameter
            ));
        }
        s
    }
}

struct CenterResult {
    rows: Vec<BallRow>,
    c1: f64,
    c2: f64,
    pairs2: usize,
}

fn run_center(axis: &Axis, cfg: &ExperimentConfig, id: usize, seed: u64) -> Result<CenterResult> {
    let pc = &cfg.projection;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = rng.random_range(-2..=2);
    let y = random_deform(&axis.tree().twist(axis.phi(), k)?, cfg.center_steps, rng.random());
    let py = project_tree(axis, &y, pc, Exec::Sequential)?;
    let dist_axis = py.curve.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let l = axis.log_lambda();
    let mut members = Vec::new();
    let mut c1 = f64::NEG_INFINITY;
    let mut c2 = f64::NEG_INFINITY;
    let mut pairs2 = 0;
    for i in 0..cfg.samples_per_center + cfg.far_samples {
        let steps = rng.random_range(1..=cfg.max_sample_steps);
        let near = i < cfg.samples_per_center;
        let x = if near {
            random_deform(&y, steps, rng.random())
        } else {
            // Far samples only feed the defect constants.
            let m = rng.random_range(2..=3) * if rng.random_bool(0.5) { 1 } else { -1 };
            random_deform(&axis.tree().twist(axis.phi(), k + m)?, steps, rng.random())
        };
        let d_yx = lipschitz_distance_with(&y, &x, Exec::Sequential)?.d_lip;
        let px = project_tree(axis, &x, pc, Exec::Sequential)?;
        let d_x_pi = px.curve.iter().find(|p| p.0 == px.n_x).unwrap().1;
        for &(n, d) in &px.curve {
            if ((n - px.n_x) as f64 * l).abs() > cfg.s {
                let d_pi_t = axis.step_distance(n - px.n_x, pc.max_edges)?;
                c1 = c1.max(d_x_pi + d_pi_t - d);
            }
        }
        if ((px.n_x - py.n_x) as f64 * l).abs() > cfg.s {
            let d_y_pi = lipschitz_distance_with(&y, &px.point.realization, Exec::Sequential)?.d_lip;
            c2 = c2.max(d_y_pi - d_yx);
            pairs2 += 1;
        }
        if near {
            members.push((d_yx, px.t_x));
        }
    }
    let rows = cfg
        .radius_fractions
        .iter()
        .map(|&f| {
            let r = f * dist_axis;
            let ts: Vec<f64> =
                std::iter::once(py.t_x).chain(members.iter().filter(|m| m.0 < r).map(|m| m.1)).collect();
            let lo = ts.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = ts.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            BallRow {
                center: id,
                center_t: py.t_x,
                axis_distance: dist_axis,
                radius: r,
                members: ts.len(),
                projected_diameter: hi - lo,
            }
        })
        .collect();
    Ok(CenterResult { rows, c1, c2, pairs2 })
}

fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    if points.len() < 2 {
        return 0.0;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

/// Projected diameters of outward balls around off-axis centers. Balls
/// have radius at most the center's distance to the axis, so they miss it.
/// Centers whose computation fails (e.g. a word cap) are skipped and
/// counted.
pub fn contraction_experiment(axis: &Axis, cfg: &ExperimentConfig, exec: Exec) -> Result<ContractionReport> {
    cfg.projection.validate()?;
    if cfg.radius_fractions.is_empty() || cfg.radius_fractions.iter().any(|&f| !(f > 0.0 && f <= 1.0)) {
        return Err(GbsError::BadParameter("radius fractions must lie in (0, 1]".into()));
    }
    let per_center = cfg.radius_fractions.len();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.projection.seed);
    let mut rows = Vec::new();
    let (mut c1, mut c2, mut pairs2, mut skipped) = (f64::NEG_INFINITY, f64::NEG_INFINITY, 0, 0);
    let mut next_id = 0;
    while rows.len() < cfg.balls {
        let want = (cfg.balls - rows.len()).div_ceil(per_center);
        let jobs: Vec<(usize, u64)> = (0..want).map(|i| (next_id + i, rng.random())).collect();
        next_id += want;
        let results = exec.map(&jobs, |&(id, s)| run_center(axis, cfg, id, s));
        let mut progressed = false;
        for r in results {
            match r {
                Ok(r) if r.rows[0].axis_distance > 0.0 => {
                    rows.extend(r.rows);
                    c1 = c1.max(r.c1);
                    c2 = c2.max(r.c2);
                    pairs2 += r.pairs2;
                    progressed = true;
                }
                _ => skipped += 1,
            }
        }
        if !progressed && skipped > 10 * cfg.balls {
            return Err(GbsError::BadParameter("no usable centers".into()));
        }
    }
    let mut pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.radius, r.projected_diameter)).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (low, high) = pts.split_at(pts.len() / 2);
    let slopes = (slope(low), slope(high));
    Ok(ContractionReport {
        rows,
        c_projections1: c1.is_finite().then_some(c1),
        c_projections2: c2.is_finite().then_some(c2),
        pairs_projections2: pairs2,
        slopes,
        skipped_centers: skipped,
    })
}

//! Cost/information optimality: the cost and entropy functionals, the
//! Zipf–Mandelbrot law, the self-consistent optimum and the local
//! cost-ratio dynamics.
//!
//! Words are ranked `k = 1..N`; a word of rank `k` costs
//! `C_k = c0·log₂(k + k0)` and carries `H_k = −log₂ p_k` bits.

use alloc::vec::Vec;

use rand::Rng;

use crate::math::{exp2, log2, powf};
use crate::rng::TracedRng;
use crate::{Error, Result};

/// `C_k = c0·log₂(k + k0)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CostModel {
    pub c0: f64,
    pub k0: f64,
}

impl CostModel {
    pub fn new(c0: f64, k0: f64) -> Result<Self> {
        if !(c0 > 0.0 && c0.is_finite()) {
            return Err(Error::Domain("c0 must be positive"));
        }
        if !(k0 >= 0.0 && k0.is_finite()) {
            return Err(Error::Domain("k0 must be non-negative"));
        }
        Ok(CostModel { c0, k0 })
    }

    /// Cost of rank `k` (1-based).
    pub fn cost(&self, k: usize) -> f64 {
        self.c0 * log2(k as f64 + self.k0)
    }

    pub fn costs(&self, n: usize) -> Vec<f64> {
        (1..=n).map(|k| self.cost(k)).collect()
    }
}

/// Tolerance on `Σ p_k = 1`.
pub const NORM_TOL: f64 = 1e-12;

/// Non-negative frequencies summing to one, indexed by rank.
#[derive(Clone, Debug, PartialEq)]
pub struct FrequencyVector {
    p: Vec<f64>,
}

impl FrequencyVector {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::EmptyInput);
        }
        if p.iter().any(|&x| !(x >= 0.0 && x.is_finite())) {
            return Err(Error::Domain("frequencies must be finite and non-negative"));
        }
        let s: f64 = p.iter().sum();
        if (s - 1.0).abs() > NORM_TOL {
            return Err(Error::Domain("frequencies must sum to 1"));
        }
        Ok(FrequencyVector { p })
    }

    /// Scale non-negative weights to unit sum.
    pub fn from_weights(mut w: Vec<f64>) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::EmptyInput);
        }
        if w.iter().any(|&x| !(x >= 0.0 && x.is_finite())) {
            return Err(Error::Domain("weights must be finite and non-negative"));
        }
        let s: f64 = w.iter().sum();
        if s <= 0.0 {
            return Err(Error::DegenerateDistribution);
        }
        w.iter_mut().for_each(|x| *x /= s);
        Ok(FrequencyVector { p: w })
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.p
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.p
    }

    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }
}

fn cost_sum(p: &[f64], costs: impl Iterator<Item = f64>) -> f64 {
    p.iter().zip(costs).map(|(&p, c)| p * c).sum()
}

fn entropy_of(p: &[f64]) -> f64 {
    -p.iter().filter(|&&x| x > 0.0).map(|&x| x * log2(x)).sum::<f64>()
}

/// `C = Σ p_k C_k`.
pub fn average_cost(p: &FrequencyVector, cm: &CostModel) -> f64 {
    cost_sum(&p.p, (1..).map(|k| cm.cost(k)))
}

/// `H = −Σ p_k log₂ p_k` in bits.
pub fn entropy(p: &FrequencyVector) -> f64 {
    entropy_of(&p.p)
}

/// `C* = C/H`.
pub fn cost_ratio(p: &FrequencyVector, cm: &CostModel) -> Result<f64> {
    let h = entropy(p);
    if h <= 0.0 {
        return Err(Error::DegenerateDistribution);
    }
    Ok(average_cost(p, cm) / h)
}

/// `p_k ∝ (k + k0)^−B` for `k = 1..n`, normalized over the truncation.
pub fn zipf_mandelbrot_pmf(b: f64, k0: f64, n: usize) -> Result<FrequencyVector> {
    if !(b > 1.0 && b.is_finite()) {
        return Err(Error::Domain("B must exceed 1"));
    }
    if !(k0 >= 0.0 && k0.is_finite()) {
        return Err(Error::Domain("k0 must be non-negative"));
    }
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    FrequencyVector::from_weights((1..=n).map(|k| powf(k as f64 + k0, -b)).collect())
}

// p ↦ normalize(2^{−H·C_k/C}); weights shifted by the cheapest cost so the
// largest is exactly 1 and nothing underflows as a whole.
fn optimum_map(p: &[f64], costs: &[f64]) -> Result<Vec<f64>> {
    let c = cost_sum(p, costs.iter().copied());
    let h = entropy_of(p);
    let cmin = costs.iter().copied().fold(f64::INFINITY, f64::min);
    let cmax = costs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if cmax == cmin {
        return Ok(alloc::vec![1.0 / p.len() as f64; p.len()]);
    }
    if !(c > 0.0) {
        return Err(Error::DegenerateDistribution);
    }
    let beta = h / c;
    let w: Vec<f64> = costs.iter().map(|&ck| exp2(-beta * (ck - cmin))).collect();
    Ok(FrequencyVector::from_weights(w)?.p)
}

/// `max_k |p_k − λ′·2^{−H·C_k/C}|` with `λ′` normalizing the right side.
pub fn selfconsistent_residual(p: &FrequencyVector, costs: &[f64]) -> Result<f64> {
    if costs.len() != p.len() {
        return Err(Error::Domain("costs and frequencies differ in length"));
    }
    let q = optimum_map(&p.p, costs)?;
    Ok(p.p.iter().zip(&q).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
}

/// Fixed point of `p ← normalize(2^{−H(p)·C_k/C(p)})`, iterated from the
/// uniform distribution. The returned `p` has residual below `tol`.
pub fn solve_selfconsistent_pmf(costs: &[f64], tol: f64, max_iters: usize) -> Result<FrequencyVector> {
    if costs.is_empty() {
        return Err(Error::EmptyInput);
    }
    if costs.iter().any(|c| !c.is_finite()) {
        return Err(Error::Domain("costs must be finite"));
    }
    if costs.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::Domain("costs must be non-decreasing"));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain("tol must be positive"));
    }
    let mut p = alloc::vec![1.0 / costs.len() as f64; costs.len()];
    let mut residual = f64::INFINITY;
    for _ in 0..max_iters {
        let q = optimum_map(&p, costs)?;
        residual = p.iter().zip(&q).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if residual < tol {
            return Ok(FrequencyVector { p });
        }
        p = q;
    }
    Err(Error::NoConvergence { iterations: max_iters, residual })
}

/// Parameters of the local cost-ratio dynamics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DynamicsConfig {
    pub n_words: usize,
    pub cost_model: CostModel,
    /// Half-width of the tolerated band around the global `C*`, relative.
    pub band_gamma: f64,
    /// Multiplicative adjustment applied to a word outside the band.
    pub step_factor: f64,
    pub max_iters: usize,
    /// Frequencies at or below this are extinct.
    pub p_floor: f64,
    /// Record a trajectory point every `stride` iterations.
    pub stride: usize,
}

impl DynamicsConfig {
    pub fn new(n_words: usize, cost_model: CostModel) -> Self {
        DynamicsConfig {
            n_words,
            cost_model,
            band_gamma: 0.05,
            step_factor: 1.05,
            max_iters: 100_000,
            p_floor: 1e-15,
            stride: 1,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_words < 2 {
            return Err(Error::Domain("need at least two words"));
        }
        if !(self.band_gamma > 0.0 && self.band_gamma <= 1.0) {
            return Err(Error::Domain("band_gamma must lie in (0, 1]"));
        }
        if !(self.step_factor > 1.0 && self.step_factor.is_finite()) {
            return Err(Error::Domain("step_factor must exceed 1"));
        }
        if !(self.p_floor > 0.0 && self.p_floor < 1.0 / self.n_words as f64) {
            return Err(Error::Domain("p_floor must lie in (0, 1/n_words)"));
        }
        if self.stride == 0 {
            return Err(Error::Domain("stride must be positive"));
        }
        CostModel::new(self.cost_model.c0, self.cost_model.k0).map(|_| ())
    }
}

/// One trajectory sample, taken before the update of iteration `iter`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectoryPoint {
    pub iter: usize,
    pub c: f64,
    pub h: f64,
    pub c_star: f64,
    pub n_changed: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    /// An iteration left every frequency unchanged.
    Stationary,
    MaxIters,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DynamicsResult {
    /// Final frequencies by rank. Sorted unless the very first iteration
    /// was already stationary, in which case this is the initial state.
    pub p: FrequencyVector,
    pub trajectory: Vec<TrajectoryPoint>,
    pub iterations: usize,
    pub stop: StopReason,
    pub extinct: usize,
    pub rng_trace_hash: u64,
}

/// Step-by-step driver of the local dynamics.
///
/// Each [`step`](LocalDynamics::step): compute `C`, `H` and `C* = C/H`; give
/// every living word its own ratio `C*_k = C_k/H_k`; lower `p_k` by the step
/// factor if `C*_k` is above `[(1−γ)C*, (1+γ)C*]`, raise it if below; rerank
/// by frequency (stable) and renormalize the living words. A word pushed to
/// `p_floor` is extinct and stays there. An iteration that adjusts nothing,
/// or whose adjustments are undone by renormalization, is stationary.
#[derive(Clone, Debug)]
pub struct LocalDynamics {
    cfg: DynamicsConfig,
    p: Vec<f64>,
    iter: usize,
    trace_hash: u64,
}

/// Outcome of one iteration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepSummary {
    pub c: f64,
    pub h: f64,
    pub c_star: f64,
    pub n_changed: usize,
}

const CHANGE_EPS: f64 = 1e-12;

impl LocalDynamics {
    /// Random `U(0,1)` frequencies, normalized, in draw order.
    pub fn new(cfg: DynamicsConfig, seed: u64) -> Result<Self> {
        cfg.validate()?;
        let mut rng = TracedRng::seed_from_u64(seed);
        let w: Vec<f64> = (0..cfg.n_words).map(|_| rng.gen::<f64>().max(f64::MIN_POSITIVE)).collect();
        let p = FrequencyVector::from_weights(w)?.p;
        let p = p.into_iter().map(|x| x.max(cfg.p_floor)).collect();
        let mut d = LocalDynamics { cfg, p, iter: 0, trace_hash: rng.trace_hash() };
        d.renormalize();
        Ok(d)
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.p
    }

    pub fn iterations(&self) -> usize {
        self.iter
    }

    pub fn extinct(&self) -> usize {
        self.p.iter().filter(|&&x| x <= self.cfg.p_floor).count()
    }

    fn renormalize(&mut self) {
        let floor = self.cfg.p_floor;
        let (mut live, mut dead) = (0.0, 0usize);
        for &x in &self.p {
            if x <= floor {
                dead += 1;
            } else {
                live += x;
            }
        }
        if live > 0.0 {
            let s = (1.0 - dead as f64 * floor) / live;
            for x in self.p.iter_mut().filter(|x| **x > floor) {
                *x = (*x * s).max(floor);
            }
        }
    }

    /// Global `(C, H, C*)` of the current state.
    pub fn summary(&self) -> (f64, f64, f64) {
        let cm = self.cfg.cost_model;
        let c = cost_sum(&self.p, (1..).map(|k| cm.cost(k)));
        let h = entropy_of(&self.p);
        (c, h, if h > 0.0 { c / h } else { f64::INFINITY })
    }

    /// Whether every living word's ratio lies in the band.
    pub fn in_band(&self) -> bool {
        let (_, _, cs) = self.summary();
        let g = self.cfg.band_gamma;
        self.p.iter().enumerate().filter(|(_, &x)| x > self.cfg.p_floor).all(|(i, &x)| {
            let r = self.cfg.cost_model.cost(i + 1) / -log2(x);
            r >= (1.0 - g) * cs && r <= (1.0 + g) * cs
        })
    }

    pub fn step(&mut self) -> StepSummary {
        let DynamicsConfig { cost_model: cm, band_gamma: g, step_factor: f, p_floor, .. } = self.cfg;
        let (c, h, cs) = self.summary();
        let before = self.p.clone();
        let (lo, hi) = ((1.0 - g) * cs, (1.0 + g) * cs);
        let mut adjusted = 0usize;
        for (i, x) in self.p.iter_mut().enumerate() {
            if *x <= p_floor {
                continue;
            }
            // a lone survivor has H_k = 0; its ratio is unbounded
            let hk = -log2(*x);
            let r = if hk > 0.0 { cm.cost(i + 1) / hk } else { f64::INFINITY };
            if r > hi {
                *x = (*x / f).max(p_floor);
                adjusted += 1;
            } else if r < lo {
                *x *= f;
                adjusted += 1;
            }
        }
        self.iter += 1;
        if adjusted == 0 {
            return StepSummary { c, h, c_star: cs, n_changed: 0 };
        }
        // stable sort keyed on frequency; the previous rank breaks ties
        let mut idx: Vec<usize> = (0..self.p.len()).collect();
        idx.sort_by(|&a, &b| self.p[b].total_cmp(&self.p[a]));
        let p: Vec<f64> = idx.iter().map(|&i| self.p[i]).collect();
        let before: Vec<f64> = idx.iter().map(|&i| before[i]).collect();
        self.p = p;
        self.renormalize();
        let n_changed = self
            .p
            .iter()
            .zip(&before)
            .filter(|(a, b)| (*a - *b).abs() > CHANGE_EPS * b.abs())
            .count();
        StepSummary { c, h, c_star: cs, n_changed }
    }

    pub fn run(mut self) -> Result<DynamicsResult> {
        let mut trajectory = Vec::new();
        let stop = loop {
            if self.iter >= self.cfg.max_iters {
                break StopReason::MaxIters;
            }
            let it = self.iter;
            let s = self.step();
            if it % self.cfg.stride == 0 || s.n_changed == 0 {
                trajectory.push(TrajectoryPoint { iter: it, c: s.c, h: s.h, c_star: s.c_star, n_changed: s.n_changed });
            }
            if s.n_changed == 0 {
                break StopReason::Stationary;
            }
        };
        let extinct = self.extinct();
        Ok(DynamicsResult {
            p: FrequencyVector { p: self.p },
            trajectory,
            iterations: self.iter,
            stop,
            extinct,
            rng_trace_hash: self.trace_hash,
        })
    }
}

/// Run the local dynamics to a stationary state or `max_iters`.
pub fn run_local_dynamics(cfg: &DynamicsConfig, seed: u64) -> Result<DynamicsResult> {
    LocalDynamics::new(*cfg, seed)?.run()
}

/// Exponent of the pure power law `p_k ∝ (k+k0)^-B` implied by a
/// self-consistent state: `B = H·c0/C`.
pub fn implied_exponent(p: &FrequencyVector, cm: &CostModel) -> Result<f64> {
    let c = average_cost(p, cm);
    if !(c > 0.0) {
        return Err(Error::DegenerateDistribution);
    }
    Ok(entropy(p) * cm.c0 / c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{hurwitz_zeta, hurwitz_zeta_ds, solve_exponent};
    use crate::math::ln;
    use alloc::vec;

    fn fv(p: &[f64]) -> FrequencyVector {
        FrequencyVector::new(p.to_vec()).unwrap()
    }

    #[test]
    fn cost_and_entropy_examples() {
        let cm = CostModel::new(1.0, 0.0).unwrap();
        assert_eq!(average_cost(&fv(&[0.5, 0.5]), &cm), 0.5);
        assert_eq!(average_cost(&fv(&[1.0, 0.0, 0.0]), &cm), 0.0);
        assert_eq!(entropy(&fv(&[0.25; 4])), 2.0);
        assert_eq!(entropy(&fv(&[1.0, 0.0])), 0.0);
        assert_eq!(entropy(&fv(&[0.5, 0.25, 0.25])), 1.5);
        assert_eq!(cost_ratio(&fv(&[0.5, 0.5]), &cm).unwrap(), 0.5);
        assert_eq!(cost_ratio(&fv(&[1.0, 0.0]), &cm), Err(Error::DegenerateDistribution));
    }

    #[test]
    fn validation() {
        assert!(FrequencyVector::new(vec![0.5, 0.4]).is_err());
        assert!(FrequencyVector::new(vec![1.5, -0.5]).is_err());
        assert!(CostModel::new(0.0, 1.0).is_err());
        assert!(CostModel::new(1.0, -1.0).is_err());
        assert!(zipf_mandelbrot_pmf(1.0, 0.0, 10).is_err());
    }

    #[test]
    fn zm_two_words() {
        let p = zipf_mandelbrot_pmf(2.0, 0.0, 2).unwrap();
        assert!((p.as_slice()[0] - 0.8).abs() < 1e-15);
        assert!((p.as_slice()[1] - 0.2).abs() < 1e-15);
    }

    #[test]
    fn zm_tail_slope() {
        let p = zipf_mandelbrot_pmf(1.4, 10.0, 10_000).unwrap();
        let xs: Vec<f64> = (100..=10_000).map(|k| ln(k as f64)).collect();
        let ys: Vec<f64> = (100..=10_000).map(|k| ln(p.as_slice()[k - 1])).collect();
        let (_, b, _) = crate::math::ols(&xs, &ys);
        assert!((b + 1.4).abs() < 0.02, "{b}");
    }

    #[test]
    fn truncated_closed_forms() {
        // Σ_{k=1}^{N} (k+k0)^-s = ζ(s,1+k0) − ζ(s,N+1+k0), same for the derivative
        let (k0, n) = (10.0, 10_000usize);
        let b = solve_exponent(k0, 1e-12).unwrap();
        let z = |q: f64| hurwitz_zeta(b, q, 1e-13).unwrap().value;
        let dz = |q: f64| hurwitz_zeta_ds(b, q, 1e-13).unwrap().value;
        let zn = z(1.0 + k0) - z(n as f64 + 1.0 + k0);
        let dzn = dz(1.0 + k0) - dz(n as f64 + 1.0 + k0);
        let cm = CostModel::new(1.0, k0).unwrap();
        let p = zipf_mandelbrot_pmf(b, k0, n).unwrap();
        let c_closed = -dzn / zn / ln(2.0);
        let h_closed = log2(zn) + b * c_closed;
        assert!((average_cost(&p, &cm) - c_closed).abs() < 1e-10);
        assert!((entropy(&p) - h_closed).abs() < 1e-10);
    }

    #[test]
    fn selfconsistent_constant_costs_uniform() {
        let p = solve_selfconsistent_pmf(&[3.0; 5], 1e-14, 10).unwrap();
        assert!(p.as_slice().iter().all(|&x| (x - 0.2).abs() < 1e-15));
    }

    #[test]
    fn selfconsistent_two_words() {
        // oracle: with p = (1−x, x) and costs (1, 2), x = w/(1+w) where w = 2^{−H(x)/C(x)}, C = 1 + x
        let g = |x: f64| {
            let h = -(x * log2(x) + (1.0 - x) * log2(1.0 - x));
            let w = exp2(-h / (1.0 + x));
            w / (1.0 + w) - x
        };
        let (mut a, mut b) = (1e-9, 0.5);
        assert!(g(a) > 0.0 && g(b) < 0.0);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if g(m) > 0.0 { a = m } else { b = m }
        }
        let p = solve_selfconsistent_pmf(&[1.0, 2.0], 1e-13, 10_000).unwrap();
        assert!((p.as_slice()[1] - a).abs() < 1e-10, "{:?} vs {a}", p);
        assert!(selfconsistent_residual(&p, &[1.0, 2.0]).unwrap() < 1e-13);
    }

    #[test]
    fn selfconsistent_zero_cost_word_degenerates() {
        // costs (0, 1): g(x) < 0 on (0, ½], so the only fixed point is (1, 0)
        let p = solve_selfconsistent_pmf(&[0.0, 1.0], 1e-13, 10_000).unwrap();
        assert!(p.as_slice()[1] < 1e-12);
        assert!(selfconsistent_residual(&p, &[0.0, 1.0]).unwrap() < 1e-13);
    }

    #[test]
    fn selfconsistent_matches_zm_law() {
        let (k0, n) = (10.0, 1000);
        let cm = CostModel::new(1.0, k0).unwrap();
        let costs = cm.costs(n);
        let p = solve_selfconsistent_pmf(&costs, 1e-14, 10_000).unwrap();
        let b = implied_exponent(&p, &cm).unwrap();
        let zm = zipf_mandelbrot_pmf(b, k0, n).unwrap();
        for k in 100..=n {
            let (x, y) = (p.as_slice()[k - 1], zm.as_slice()[k - 1]);
            assert!((x / y - 1.0).abs() < 0.02);
        }
        // the truncated optimum is steeper than the infinite one, but close
        let binf = solve_exponent(k0, 1e-12).unwrap();
        assert!((b - binf).abs() < 0.15, "{b} vs {binf}");
    }

    #[test]
    fn selfconsistent_rejects_bad_costs() {
        assert!(solve_selfconsistent_pmf(&[1.0, 0.5], 1e-10, 10).is_err());
        assert!(solve_selfconsistent_pmf(&[], 1e-10, 10).is_err());
        assert!(matches!(
            solve_selfconsistent_pmf(&CostModel::new(1.0, 0.0).unwrap().costs(50), 1e-14, 5),
            Err(Error::NoConvergence { iterations: 5, .. })
        ));
    }

    #[test]
    fn dynamics_config_validation() {
        let cm = CostModel::new(1.0, 10.0).unwrap();
        let ok = DynamicsConfig::new(100, cm);
        assert!(run_local_dynamics(&DynamicsConfig { band_gamma: 0.0, ..ok }, 1).is_err());
        assert!(run_local_dynamics(&DynamicsConfig { step_factor: 1.0, ..ok }, 1).is_err());
        assert!(run_local_dynamics(&DynamicsConfig { p_floor: 0.02, ..ok }, 1).is_err());
    }

    #[test]
    fn dynamics_keeps_normalization() {
        let cfg = DynamicsConfig::new(200, CostModel::new(1.0, 10.0).unwrap());
        let mut d = LocalDynamics::new(cfg, 3).unwrap();
        for _ in 0..500 {
            let s = d.step();
            let sum: f64 = d.frequencies().iter().sum();
            assert!((sum - 1.0).abs() < NORM_TOL);
            assert!(d.frequencies().windows(2).all(|w| w[0] >= w[1]));
            if s.n_changed == 0 {
                break;
            }
        }
    }

    #[test]
    fn dynamics_stationary_state_is_in_band() {
        let cfg = DynamicsConfig::new(300, CostModel::new(1.0, 10.0).unwrap());
        let d = LocalDynamics::new(cfg, 5).unwrap();
        let r = d.clone().run().unwrap();
        assert_eq!(r.stop, StopReason::Stationary);
        let mut e = d;
        while e.step().n_changed > 0 {}
        assert!(e.in_band());
        assert_eq!(e.frequencies(), r.p.as_slice());
    }

    #[test]
    fn full_band_returns_initial_state() {
        let cfg = DynamicsConfig { band_gamma: 1.0, ..DynamicsConfig::new(100, CostModel::new(1.0, 10.0).unwrap()) };
        let d = LocalDynamics::new(cfg, 4).unwrap();
        let init = d.frequencies().to_vec();
        let r = d.run().unwrap();
        assert_eq!(r.iterations, 1);
        assert_eq!(r.trajectory[0].n_changed, 0);
        assert_eq!(r.p.as_slice(), init.as_slice());
    }

    #[test]
    fn dynamics_deterministic() {
        let cfg = DynamicsConfig { max_iters: 200, ..DynamicsConfig::new(100, CostModel::new(1.0, 2.0).unwrap()) };
        assert_eq!(run_local_dynamics(&cfg, 9).unwrap(), run_local_dynamics(&cfg, 9).unwrap());
    }

    #[test]
    fn dynamics_degenerates_without_offset() {
        let cfg = DynamicsConfig::new(100, CostModel::new(1.0, 0.0).unwrap());
        let r = run_local_dynamics(&cfg, 1).unwrap();
        assert_eq!(r.stop, StopReason::Stationary);
        let p = r.p.as_slice();
        assert!(p[0] > 1.0 - 1e-10);
        assert!(p[1..].iter().all(|&x| x < 1e-10));
        assert!(r.extinct >= 98);
    }
}

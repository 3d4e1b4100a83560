//! Two stochastic models of meaning evolution that produce Zipfian coverings.
//!
//! *Generalization*: `n` point meanings at random centres grow in lockstep by
//! `delta` per step. When two growing intervals meet, one of them (chosen at
//! random) is frozen; the other keeps growing and may swallow frozen ones.
//!
//! *Specialization*: `n` random intervals compete. Whenever two intersect and
//! their lengths are within a factor `gamma` of each other, the smaller loses
//! the intersection. Repeated to a fixpoint.
//!
//! Both run on the circle by default.

use alloc::collections::BinaryHeap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use rand::Rng;

use crate::covering::{Covering, Interval, Topology};
use crate::math::ceil;
use crate::powerlaw::RankFrequencyTable;
use crate::rng::TracedRng;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenParams {
    pub n: usize,
    pub delta: f64,
    pub seed: u64,
    pub topology: Topology,
}

impl GenParams {
    /// `delta = 1e-3 / n` on the circle.
    pub fn new(n: usize, seed: u64) -> Self {
        GenParams { n, delta: default_delta(n), seed, topology: Topology::Circular }
    }
}

pub fn default_delta(n: usize) -> f64 {
    1e-3 / n.max(1) as f64
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpecParams {
    pub n: usize,
    pub gamma: f64,
    pub seed: u64,
    pub fixpoint_eps: f64,
    pub topology: Topology,
}

impl SpecParams {
    /// `gamma = 2`, `fixpoint_eps = 1e-12`, on the circle.
    pub fn new(n: usize, seed: u64) -> Self {
        SpecParams { n, gamma: 2.0, seed, fixpoint_eps: 1e-12, topology: Topology::Circular }
    }
}

/// Range of `gamma` in which the specialization model has been exercised.
pub const TESTED_GAMMA: (f64, f64) = (1.1, 10.0);

#[derive(Clone, Debug, PartialEq)]
pub struct SimResult {
    pub covering: Covering,
    /// Growth steps (generalization) or sweeps (specialization).
    pub iterations: u64,
    pub rng_trace_hash: u64,
    pub warnings: Vec<&'static str>,
}

fn centred(topology: Topology, c: f64, len: f64) -> Interval {
    match topology {
        Topology::Circular => Interval::arc(c - len / 2.0, len),
        // clipped to S
        Topology::Linear => Interval { lo: (c - len / 2.0).max(0.0), hi: (c + len / 2.0).min(1.0), wraps: false },
    }
}

/// Run the grow-and-freeze model.
///
/// All unfrozen intervals share the length `t·delta` at step `t`, so two
/// neighbouring unfrozen centres at distance `d` meet at step `ceil(d/delta)`.
/// The run jumps from one meeting step to the next. Pairs meeting in the same
/// step are resolved in random order; after each freeze the survivor's new
/// neighbour is checked at once, since it may already be touching.
pub fn run_generalization(params: &GenParams) -> Result<SimResult> {
    let GenParams { n, delta, seed, topology } = *params;
    if n == 0 {
        return Err(Error::Domain("n must be at least 1"));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain("delta must lie in (0, 1)"));
    }
    let mut rng = TracedRng::seed_from_u64(seed);
    let centres: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    let (intervals, t) = generalize(centres, delta, topology, &mut rng);
    Ok(SimResult {
        covering: Covering::new(intervals, topology)?,
        iterations: t,
        rng_trace_hash: rng.trace_hash(),
        warnings: Vec::new(),
    })
}

fn generalize(mut centres: Vec<f64>, delta: f64, topology: Topology, rng: &mut TracedRng) -> (Vec<Interval>, u64) {
    let n = centres.len();
    centres.sort_by(f64::total_cmp);
    let circular = topology == Topology::Circular;
    let none = usize::MAX;
    let mut next: Vec<usize> = (0..n).map(|i| if i + 1 < n { i + 1 } else if circular { 0 } else { none }).collect();
    let mut prev: Vec<usize> = (0..n).map(|i| if i > 0 { i - 1 } else if circular { n - 1 } else { none }).collect();
    let mut frozen_len: Vec<Option<f64>> = vec![None; n];
    let mut unfrozen = n;

    let meet_step = |i: usize, j: usize| -> u64 {
        let mut d = centres[j] - centres[i];
        if d < 0.0 {
            d += 1.0;
        }
        (ceil(d / delta) as u64).max(1)
    };

    let mut heap = BinaryHeap::new();
    if n > 1 {
        for i in 0..n {
            if next[i] != none {
                heap.push(Reverse((meet_step(i, next[i]), i, next[i])));
            }
        }
    }

    let mut t: u64 = 1;
    let mut pending: Vec<(usize, usize)> = Vec::new();
    while unfrozen > 1 {
        let Some(&Reverse((step, _, _))) = heap.peek() else { break };
        t = step.max(t);
        while let Some(&Reverse((s, i, j))) = heap.peek() {
            if s > t {
                break;
            }
            heap.pop();
            pending.push((i, j));
        }
        while !pending.is_empty() && unfrozen > 1 {
            let k = rng.gen_range(0..pending.len());
            let (i, j) = pending.swap_remove(k);
            if frozen_len[i].is_some() || frozen_len[j].is_some() || next[i] != j {
                continue;
            }
            let victim = if rng.gen::<bool>() { i } else { j };
            frozen_len[victim] = Some(t as f64 * delta);
            unfrozen -= 1;
            let (p, q) = (prev[victim], next[victim]);
            if p != none {
                next[p] = q;
            }
            if q != none {
                prev[q] = p;
            }
            if unfrozen > 1 && p != none && q != none && p != q {
                let s = meet_step(p, q);
                if s <= t {
                    pending.push((p, q));
                } else {
                    heap.push(Reverse((s, p, q)));
                }
            }
        }
        pending.clear();
    }

    let final_len = t as f64 * delta;
    let intervals = (0..n)
        .map(|i| centred(topology, centres[i], frozen_len[i].unwrap_or(final_len).min(1.0)))
        .collect();
    (intervals, t)
}

/// Length of `a ∩ b` and the part of `a` left after removing `b`, assuming
/// `len(a) ≤ len(b)` so that the remainder is a single interval.
fn subtract(topology: Topology, a: Interval, b: Interval) -> (f64, Interval) {
    match topology {
        Topology::Linear => {
            let lo = a.lo.max(b.lo);
            let hi = a.hi.min(b.hi);
            let inter = (hi - lo).max(0.0);
            if inter == 0.0 {
                (0.0, a)
            } else if b.lo <= a.lo && b.hi >= a.hi {
                (inter, Interval { lo: a.lo, hi: a.lo, wraps: false })
            } else if b.lo <= a.lo {
                (inter, Interval { lo: b.hi, hi: a.hi, wraps: false })
            } else {
                (inter, Interval { lo: a.lo, hi: b.lo, wraps: false })
            }
        }
        Topology::Circular => {
            let la = a.length();
            // complement of b, as an arc
            let (cs, lc) = (b.lo + b.length(), 1.0 - b.length());
            let mut o = (cs - a.lo) % 1.0;
            if o < 0.0 {
                o += 1.0;
            }
            let rest = if o < la {
                Interval::arc(cs, (la - o).min(lc))
            } else if o + lc > 1.0 {
                Interval::arc(a.lo, la.min(o + lc - 1.0))
            } else {
                Interval::arc(a.lo, 0.0)
            };
            ((la - rest.length()).max(0.0), rest)
        }
    }
}

/// Run the shrink-on-collision model.
///
/// Each sweep visits intervals in decreasing order of their length at the
/// start of the sweep and pairs each with the shorter ones still within a
/// factor `gamma`. Sweeps repeat until one makes no change. Intervals shrunk
/// to `fixpoint_eps` or below are dropped.
pub fn run_specialization(params: &SpecParams) -> Result<SimResult> {
    let SpecParams { n, gamma, seed, fixpoint_eps, topology } = *params;
    if n < 2 {
        return Err(Error::Domain("n must be at least 2"));
    }
    if !(gamma > 1.0) {
        return Err(Error::Domain("gamma must exceed 1"));
    }
    if !(fixpoint_eps > 0.0) {
        return Err(Error::Domain("fixpoint_eps must be positive"));
    }
    let mut warnings = Vec::new();
    if gamma < TESTED_GAMMA.0 || gamma > TESTED_GAMMA.1 {
        warnings.push("gamma outside the tested range [1.1, 10]");
    }
    let mut rng = TracedRng::seed_from_u64(seed);
    let mut iv: Vec<Interval> = (0..n)
        .map(|_| {
            let c = rng.gen::<f64>();
            let l = rng.gen::<f64>();
            centred(topology, c, l)
        })
        .collect();
    let (iv, sweeps) = specialize(&mut iv, gamma, fixpoint_eps, topology);
    Ok(SimResult {
        covering: Covering::new(iv, topology)?,
        iterations: sweeps,
        rng_trace_hash: rng.trace_hash(),
        warnings,
    })
}

/// Apply specialization sweeps to `iv` until a fixpoint. Returns the
/// surviving intervals and the number of sweeps that changed something.
pub fn specialize(iv: &mut [Interval], gamma: f64, eps: f64, topology: Topology) -> (Vec<Interval>, u64) {
    let mut alive: Vec<bool> = iv.iter().map(|i| i.length() > eps).collect();
    let mut sweeps = 0u64;
    loop {
        let mut order: Vec<usize> = (0..iv.len()).filter(|&i| alive[i]).collect();
        order.sort_by(|&a, &b| iv[b].length().total_cmp(&iv[a].length()));
        let snap: Vec<f64> = order.iter().map(|&i| iv[i].length()).collect();
        let mut changed = false;
        for x in 0..order.len() {
            let i = order[x];
            for y in x + 1..order.len() {
                if !alive[i] {
                    break;
                }
                if snap[y] * gamma <= iv[i].length() {
                    break;
                }
                let j = order[y];
                if !alive[j] {
                    continue;
                }
                let (li, lj) = (iv[i].length(), iv[j].length());
                let (s, l) = if lj <= li { (j, i) } else { (i, j) };
                let (ls, ll) = (li.min(lj), li.max(lj));
                if !(ll < gamma * ls) {
                    continue;
                }
                let (inter, rest) = subtract(topology, iv[s], iv[l]);
                if inter <= eps {
                    continue;
                }
                iv[s] = rest;
                changed = true;
                if rest.length() <= eps {
                    alive[s] = false;
                }
            }
        }
        if !changed {
            break;
        }
        sweeps += 1;
    }
    let out = iv.iter().zip(&alive).filter(|(_, &a)| a).map(|(i, _)| *i).collect();
    (out, sweeps)
}

/// Interval lengths as rank frequencies (proportionality constant 1).
pub fn lengths_to_rank_freq(covering: &Covering) -> Result<RankFrequencyTable> {
    let f: Vec<f64> = covering.lengths().into_iter().filter(|&l| l > 0.0).collect();
    if f.is_empty() {
        return Err(Error::EmptyCovering);
    }
    RankFrequencyTable::new(f, None)
}

/// Ranks `[1, k_sat]` where `k_sat` counts intervals of length at least
/// `n^{-1/2}`.
///
/// A specialization run starts with `n` lengths drawn from `U[0,1]`, so about
/// `n·l` of them are shorter than `l`, while a layer of length scale `l` holds
/// about `1/l` intervals. Below `l ≈ n^{-1/2}` the supply cannot fill the
/// layers and the rank curve falls off; the power law is measured above it.
pub fn saturated_fit_range(table: &RankFrequencyTable, n_initial: usize) -> (usize, usize) {
    let lmin = 1.0 / libm::sqrt(n_initial as f64);
    (1, table.frequencies().iter().take_while(|&&l| l >= lmin).count())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::hierarchical_covering;
    use rand::seq::SliceRandom;

    fn approx(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn single_interval_grows_once() {
        let r = run_generalization(&GenParams { n: 1, delta: 0.01, seed: 3, topology: Topology::Circular }).unwrap();
        assert_eq!(r.iterations, 1);
        let l = r.covering.lengths();
        assert_eq!(l.len(), 1);
        assert!(approx(l[0], 0.01, 1e-15));
    }

    #[test]
    fn generalization_two_intervals() {
        // centres at 0.2 and 0.8: on the circle the 0.4 gap closes first; on the
        // segment only the 0.6 gap exists and both length-0.6 intervals are clipped to S
        for (topology, want) in [(Topology::Circular, 0.4), (Topology::Linear, 0.5)] {
            let delta = 1e-4;
            for seed in 0..4 {
                let mut rng = TracedRng::seed_from_u64(seed);
                let (iv, _) = generalize(vec![0.2, 0.8], delta, topology, &mut rng);
                let r = gen_with_centres(&[0.2, 0.8], delta, topology, seed);
                for l in [r.covering.lengths(), iv.iter().map(Interval::length).collect()] {
                    assert_eq!(l.len(), 2);
                    assert!(l.iter().all(|&x| approx(x, want, 2.0 * delta)), "{l:?}");
                }
            }
        }
    }

    // Reference implementation stepping every `delta`, checking all unfrozen
    // pairs each step; used as an oracle for small inputs.
    fn gen_with_centres(c: &[f64], delta: f64, topology: Topology, seed: u64) -> SimResult {
        let n = c.len();
        let mut rng = TracedRng::seed_from_u64(seed);
        let mut frozen: Vec<Option<f64>> = vec![None; n];
        let mut t = 0u64;
        let dist = |a: f64, b: f64| {
            let d = (a - b).abs();
            if topology == Topology::Circular { d.min(1.0 - d) } else { d }
        };
        loop {
            t += 1;
            let len = t as f64 * delta;
            if frozen.iter().filter(|f| f.is_none()).count() <= 1 {
                break;
            }
            let mut pairs = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if frozen[i].is_none() && frozen[j].is_none() && dist(c[i], c[j]) <= len + 1e-12 {
                        pairs.push((i, j));
                    }
                }
            }
            pairs.shuffle(&mut rng);
            for (i, j) in pairs {
                if frozen[i].is_none() && frozen[j].is_none() && frozen.iter().filter(|f| f.is_none()).count() > 1 {
                    let v = if rng.gen::<bool>() { i } else { j };
                    frozen[v] = Some(len);
                }
            }
            if frozen.iter().filter(|f| f.is_none()).count() <= 1 {
                break;
            }
        }
        let iv = (0..n).map(|i| centred(topology, c[i], frozen[i].unwrap_or(t as f64 * delta).min(1.0))).collect();
        SimResult { covering: Covering::new(iv, topology).unwrap(), iterations: t, rng_trace_hash: 0, warnings: Vec::new() }
    }

    #[test]
    fn generalization_count_and_sorted() {
        let r = run_generalization(&GenParams::new(500, 1)).unwrap();
        assert_eq!(r.covering.len(), 500);
        let l = r.covering.lengths();
        assert!(l.windows(2).all(|w| w[0] >= w[1]));
        // every length is a multiple of delta
        let d = default_delta(500);
        assert!(l.iter().all(|&x| approx(x / d, libm::round(x / d), 1e-6)));
    }

    #[test]
    fn generalization_length_multiset_shape() {
        // the largest frozen length equals the final step times delta
        let p = GenParams::new(300, 4);
        let r = run_generalization(&p).unwrap();
        let l = r.covering.lengths();
        assert!(approx(l[0], r.iterations as f64 * p.delta, 1e-12));
        assert!(l[1] <= l[0]);
    }

    #[test]
    fn generalization_deterministic() {
        let p = GenParams::new(1000, 77);
        let a = run_generalization(&p).unwrap();
        let b = run_generalization(&p).unwrap();
        assert_eq!(a, b);
        let c = run_generalization(&GenParams::new(1000, 78)).unwrap();
        assert_ne!(a.rng_trace_hash, c.rng_trace_hash);
    }

    #[test]
    fn generalization_rejects_bad_params() {
        assert!(run_generalization(&GenParams { n: 0, delta: 0.1, seed: 0, topology: Topology::Circular }).is_err());
        assert!(run_generalization(&GenParams { n: 3, delta: 1.0, seed: 0, topology: Topology::Circular }).is_err());
    }

    #[test]
    fn subtract_linear_rule() {
        let a = Interval::new(0.3, 0.8).unwrap();
        let b = Interval::new(0.0, 0.6).unwrap();
        let (inter, rest) = subtract(Topology::Linear, a, b);
        assert!(approx(inter, 0.3, 1e-15));
        assert!(approx(rest.lo, 0.6, 1e-15) && approx(rest.hi, 0.8, 1e-15));
        let (inter, rest) = subtract(Topology::Linear, Interval::new(0.1, 0.2).unwrap(), b);
        assert!(approx(inter, 0.1, 1e-15));
        assert_eq!(rest.length(), 0.0);
    }

    #[test]
    fn subtract_circular_matches_linear_away_from_seam() {
        let a = Interval::arc(0.3, 0.5);
        let b = Interval::arc(0.0, 0.6);
        let (inter, rest) = subtract(Topology::Circular, a, b);
        assert!(approx(inter, 0.3, 1e-12));
        assert!(approx(rest.lo, 0.6, 1e-12) && approx(rest.length(), 0.2, 1e-12));
        // across the seam
        let a = Interval::arc(0.95, 0.2);
        let b = Interval::arc(0.1, 0.5);
        let (inter, rest) = subtract(Topology::Circular, a, b);
        assert!(approx(inter, 0.05, 1e-12));
        assert!(approx(rest.lo, 0.95, 1e-12) && approx(rest.length(), 0.15, 1e-12));
        // other side
        let (inter, rest) = subtract(Topology::Circular, Interval::arc(0.5, 0.3), Interval::arc(0.7, 0.5));
        assert!(approx(inter, 0.1, 1e-12));
        assert!(approx(rest.lo, 0.5, 1e-12) && approx(rest.length(), 0.2, 1e-12));
    }

    #[test]
    fn specialization_one_rule_application() {
        let mut iv = [Interval::new(0.0, 0.6).unwrap(), Interval::new(0.3, 0.8).unwrap()];
        let (out, sweeps) = specialize(&mut iv, 2.0, 1e-12, Topology::Linear);
        assert_eq!(sweeps, 1);
        assert_eq!(out.len(), 2);
        assert!(approx(out[1].lo, 0.6, 1e-15) && approx(out[1].hi, 0.8, 1e-15));
    }

    #[test]
    fn specialization_disjoint_unchanged() {
        let mut iv = [Interval::new(0.0, 0.2).unwrap(), Interval::new(0.5, 0.7).unwrap()];
        let before = iv;
        let (out, sweeps) = specialize(&mut iv, 2.0, 1e-12, Topology::Linear);
        assert_eq!(sweeps, 0);
        assert_eq!(out, before);
    }

    #[test]
    fn specialization_fixpoint_holds() {
        let p = SpecParams { n: 400, ..SpecParams::new(400, 5) };
        let r = run_specialization(&p).unwrap();
        let iv = r.covering.intervals();
        for i in 0..iv.len() {
            for j in i + 1..iv.len() {
                let (a, b) = (iv[i], iv[j]);
                let (s, l) = if a.length() <= b.length() { (a, b) } else { (b, a) };
                if l.length() < p.gamma * s.length() {
                    let (inter, _) = subtract(Topology::Circular, s, l);
                    assert!(inter <= p.fixpoint_eps, "pair {i},{j} still competing");
                }
            }
        }
        assert!(iv.iter().all(|x| x.length() > p.fixpoint_eps));
    }

    #[test]
    fn specialization_warns_outside_tested_gamma() {
        let r = run_specialization(&SpecParams { gamma: 20.0, ..SpecParams::new(50, 1) }).unwrap();
        assert_eq!(r.warnings.len(), 1);
        assert!(run_specialization(&SpecParams { gamma: 1.0, ..SpecParams::new(50, 1) }).is_err());
        assert!(run_specialization(&SpecParams::new(1, 1)).is_err());
    }

    #[test]
    fn specialization_deterministic() {
        let p = SpecParams::new(300, 12);
        assert_eq!(run_specialization(&p).unwrap(), run_specialization(&p).unwrap());
    }

    #[test]
    fn saturated_range_counts_long_intervals() {
        let t = RankFrequencyTable::new(vec![0.9, 0.5, 0.1, 0.09, 0.01], None).unwrap();
        assert_eq!(saturated_fit_range(&t, 100), (1, 3));
        assert_eq!(saturated_fit_range(&t, 10_000), (1, 5));
    }

    #[test]
    fn rank_freq_from_hierarchical() {
        let t = lengths_to_rank_freq(&hierarchical_covering(2).unwrap()).unwrap();
        assert_eq!(t.frequencies(), [1.0, 0.5, 0.5, 0.25, 0.25, 0.25, 0.25]);
        let empty = Covering::new(Vec::new(), Topology::Linear).unwrap();
        assert_eq!(lengths_to_rank_freq(&empty), Err(Error::EmptyCovering));
    }
}

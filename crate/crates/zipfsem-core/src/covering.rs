//! Coverings of the unit space `S = [0,1]` by intervals, and their measures.
//!
//! Gap, single coverage and overlap are computed exactly with one endpoint
//! sweep. On the circle an interval may wrap past 1; it is then split into
//! two linear pieces before sweeping.

use alloc::vec::Vec;

use crate::math::floor;
use crate::{Error, Result};

/// Whether `S` is the segment `[0,1]` or the circle `ℝ/ℤ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Topology {
    Linear,
    Circular,
}

/// A subinterval of `S`. When `wraps` is set the interval is
/// `[lo, 1) ∪ [0, hi]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub wraps: bool,
}

impl Interval {
    /// Linear interval `[lo, hi]` with `0 ≤ lo ≤ hi ≤ 1`.
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(0.0 <= lo && lo <= hi && hi <= 1.0) {
            return Err(Error::Domain("interval needs 0 <= lo <= hi <= 1"));
        }
        Ok(Interval { lo, hi, wraps: false })
    }

    /// Arc of the circle starting at `start` (taken mod 1) with length
    /// `len ∈ [0, 1]`.
    pub fn arc(start: f64, len: f64) -> Self {
        let len = len.clamp(0.0, 1.0);
        let lo = start - floor(start);
        let end = lo + len;
        if end > 1.0 || len == 1.0 {
            Interval { lo, hi: end - 1.0, wraps: true }
        } else {
            Interval { lo, hi: end, wraps: false }
        }
    }

    pub fn length(&self) -> f64 {
        if self.wraps {
            1.0 - self.lo + self.hi
        } else {
            self.hi - self.lo
        }
    }

    /// Linear pieces making up the interval.
    pub fn pieces(&self) -> ([f64; 2], Option<[f64; 2]>) {
        if self.wraps {
            ([self.lo, 1.0], Some([0.0, self.hi]))
        } else {
            ([self.lo, self.hi], None)
        }
    }
}

/// Intervals sorted by non-increasing length; rank `i` is position `i−1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Covering {
    intervals: Vec<Interval>,
    topology: Topology,
}

/// The measure of `S`.
pub const SPACE_MEASURE: f64 = 1.0;

impl Covering {
    /// Sort (stably) by decreasing length.
    pub fn new(mut intervals: Vec<Interval>, topology: Topology) -> Result<Self> {
        if topology == Topology::Linear && intervals.iter().any(|i| i.wraps) {
            return Err(Error::Domain("wrapping interval in a linear covering"));
        }
        intervals.sort_by(|a, b| b.length().total_cmp(&a.length()));
        Ok(Covering { intervals, topology })
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn topology(&self) -> Topology {
        self.topology
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn lengths(&self) -> Vec<f64> {
        self.intervals.iter().map(Interval::length).collect()
    }

    /// Gap, single and multiple coverage in one sweep.
    pub fn measures(&self) -> SweepMeasures {
        sweep(&self.intervals)
    }
}

/// Partition of `S` by coverage depth.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepMeasures {
    /// Depth 0.
    pub gap: f64,
    /// Depth exactly 1.
    pub single: f64,
    /// Depth ≥ 2.
    pub overlap: f64,
}

fn sweep(intervals: &[Interval]) -> SweepMeasures {
    let mut events: Vec<(f64, i32)> = Vec::with_capacity(2 * intervals.len() + 2);
    for iv in intervals {
        let (a, b) = iv.pieces();
        for p in core::iter::once(a).chain(b) {
            if p[1] > p[0] {
                events.push((p[0], 1));
                events.push((p[1], -1));
            }
        }
    }
    events.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut m = SweepMeasures { gap: 0.0, single: 0.0, overlap: 0.0 };
    let (mut x, mut depth) = (0.0, 0i32);
    let mut add = |depth: i32, dx: f64| match depth {
        0 => m.gap += dx,
        1 => m.single += dx,
        _ => m.overlap += dx,
    };
    for (pos, d) in events {
        add(depth, pos - x);
        x = pos;
        depth += d;
    }
    add(depth, SPACE_MEASURE - x);
    m
}

/// Measure of `S` not covered.
pub fn gap(c: &Covering) -> f64 {
    c.measures().gap
}

/// Measure of `S` covered at least twice.
pub fn overlap(c: &Covering) -> f64 {
    c.measures().overlap
}

/// Intervals of ranks `k ..= floor(k·rho)` (upper end clipped to the
/// covering), order preserved.
pub fn layer(c: &Covering, k: usize, rho: f64) -> Result<Covering> {
    if k == 0 || k > c.len() {
        return Err(Error::RankOutOfRange { k, n: c.len() });
    }
    if !(rho > 1.0) {
        return Err(Error::Domain("rho must exceed 1"));
    }
    let hi = (floor(k as f64 * rho) as usize).min(c.len());
    Ok(Covering { intervals: c.intervals[k - 1..hi].to_vec(), topology: c.topology })
}

/// Lengths `μ_k = 2^-floor(log₂ k)`: rank 1 is `S`, ranks 2–3 its halves,
/// ranks 4–7 the quarters, and so on down to level `depth`.
pub fn hierarchical_covering(depth: u32) -> Result<Covering> {
    if depth > 20 {
        return Err(Error::DepthTooLarge(depth));
    }
    let mut v = Vec::with_capacity((1usize << (depth + 1)) - 1);
    for d in 0..=depth {
        let parts = 1u32 << d;
        let w = 1.0 / parts as f64;
        for j in 0..parts {
            v.push(Interval { lo: j as f64 * w, hi: (j + 1) as f64 * w, wraps: false });
        }
    }
    Covering::new(v, Topology::Linear)
}

/// Resolution by which [`choose_rho`] undercuts the next rank.
pub const RHO_EPS: f64 = 1e-9;

/// Smallest `rho` (to resolution [`RHO_EPS`]) for which ranks
/// `k ..= floor(k·rho)` have total length at least 1.
///
/// With `m` the first rank where the running sum reaches 1, the result is
/// `(m+1)/k − RHO_EPS`, so that `floor(k·rho) = m`.
pub fn choose_rho(c: &Covering, k: usize) -> Result<f64> {
    if k == 0 || k > c.len() {
        return Err(Error::RankOutOfRange { k, n: c.len() });
    }
    let mut mass = 0.0;
    for (i, iv) in c.intervals[k - 1..].iter().enumerate() {
        mass += iv.length();
        if mass >= SPACE_MEASURE - 1e-12 {
            let m = k + i;
            return Ok((m + 1) as f64 / k as f64 - RHO_EPS);
        }
    }
    Err(Error::InsufficientMass { k, mass })
}

/// How `rho` is set for each layer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RhoMode {
    Fixed(f64),
    /// [`choose_rho`] at every `k`.
    PerK,
}

/// One row of a layer sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LayerRow {
    pub k: usize,
    pub rho: f64,
    pub gap: f64,
    pub overlap: f64,
    pub length_sum: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LayerDiagnostics {
    pub rows: Vec<LayerRow>,
}

impl LayerDiagnostics {
    pub fn row(&self, k: usize) -> Option<&LayerRow> {
        self.rows.iter().find(|r| r.k == k)
    }
}

/// Gap and overlap of the `(ρ,k)`-layer for each requested `k`.
pub fn layer_diagnostics(c: &Covering, k_values: &[usize], mode: RhoMode) -> Result<LayerDiagnostics> {
    let mut rows = Vec::with_capacity(k_values.len());
    for &k in k_values {
        let rho = match mode {
            RhoMode::Fixed(r) => r,
            RhoMode::PerK => choose_rho(c, k)?,
        };
        let l = layer(c, k, rho)?;
        let m = l.measures();
        let length_sum = l.intervals.iter().map(Interval::length).sum();
        rows.push(LayerRow { k, rho, gap: m.gap, overlap: m.overlap, length_sum });
    }
    Ok(LayerDiagnostics { rows })
}

/// `count` ranks spread geometrically over `1..=max_k`, deduplicated.
pub fn geometric_ranks(max_k: usize, count: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..count)
        .map(|i| {
            let t = if count > 1 { i as f64 / (count - 1) as f64 } else { 1.0 };
            libm::round(libm::pow(max_k as f64, t)) as usize
        })
        .collect();
    v.dedup();
    v
}

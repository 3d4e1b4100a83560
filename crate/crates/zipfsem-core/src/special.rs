//! Riemann and Hurwitz zeta functions on `s > 1` and the exponent
//! constraint `ζ(B, 1+k0) = 1`.
//!
//! Evaluation is a direct sum of the first `N` terms followed by an
//! Euler–Maclaurin tail at `a = N + q` carried through the `B4` term:
//!
//! ```text
//! ζ(s, q) = Σ_{n<N} (n+q)^-s + a^(1-s)/(s-1) + a^-s/2
//!           + s a^(-s-1)/12 − s(s+1)(s+2) a^(-s-3)/720 + R
//! ```
//!
//! For `x^-s` every derivative has fixed sign, so `|R|` is bounded by the
//! first omitted (`B6`) term `s(s+1)(s+2)(s+3)(s+4) a^(-s-5)/30240`.
//! `N` is doubled until that bound is below half the requested tolerance.

use crate::math::{exp, ln, powf};
use crate::{Error, Result};

/// Distance from the pole at `s = 1` below which evaluation is refused.
pub const EPS_POLE: f64 = 1e-9;
/// Default ceiling of the exponent search.
pub const B_MAX: f64 = 64.0;
/// Lower end of the exponent bracket.
pub const B_FLOOR: f64 = 1.0 + 1e-6;

const MAX_TERMS: usize = 1 << 26;

/// A value together with a rigorous (truncation + rounding) error bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZetaEval {
    pub value: f64,
    pub abs_error_bound: f64,
}

fn check_args(s: f64, q: f64, tol: f64) -> Result<()> {
    if !s.is_finite() || s <= 1.0 + EPS_POLE {
        return Err(Error::Domain("s must exceed 1 + 1e-9"));
    }
    if !q.is_finite() || q <= 0.0 {
        return Err(Error::Domain("q must be positive"));
    }
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::Domain("tol must be positive"));
    }
    Ok(())
}

// (s)_5 a^(-s-5) / 30240
fn b6_term(s: f64, a: f64) -> f64 {
    s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * powf(a, -s - 5.0) / 30240.0
}

fn terms_for(s: f64, q: f64, target: f64, deriv: bool) -> usize {
    let mut n = 0usize;
    loop {
        let a = n as f64 + q;
        let mut bound = b6_term(s, a);
        if deriv {
            let poch: f64 = (0..5).map(|i| 1.0 / (s + i as f64)).sum();
            bound *= 2.0 * (ln(a).abs() + poch);
        }
        // a ≥ s keeps the asymptotic tail terms decreasing, so the tail is
        // accurate relative to the value and not just in absolute terms.
        if (a >= s.max(1.0) && bound <= target) || n >= MAX_TERMS {
            return n;
        }
        n = if n == 0 { 4 } else { n * 2 };
    }
}

// Neumaier compensated sum, so rounding stays O(ε·|sum|) whatever N is.
#[derive(Default)]
struct Compensated {
    sum: f64,
    c: f64,
}

impl Compensated {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.c
    }
}

/// ζ(s, q) truncation parts: `(value, truncation_bound, terms)`.
fn hurwitz_parts(s: f64, q: f64, target: f64) -> (f64, f64, usize) {
    let n = terms_for(s, q, target, false);
    let mut head = Compensated::default();
    for j in (0..n).rev() {
        head.add(powf(j as f64 + q, -s));
    }
    let head = head.value();
    let a = n as f64 + q;
    let la = ln(a);
    let am = exp(-s * la);
    let tail = a * am / (s - 1.0) + am / 2.0 + s * am / a / 12.0
        - s * (s + 1.0) * (s + 2.0) * am / (a * a * a) / 720.0;
    (head + tail, b6_term(s, a), n)
}

// Each term carries about one ulp from `powf`/`ln`; compensated summation
// adds a couple more. 8ε·|value| covers both.
fn finish(value: f64, trunc: f64, tol: f64) -> Result<ZetaEval> {
    let rounding = 8.0 * f64::EPSILON * value.abs();
    let bound = trunc + rounding;
    if bound > tol {
        return Err(Error::ToleranceUnreachable { tol, bound });
    }
    Ok(ZetaEval { value, abs_error_bound: bound })
}

/// Hurwitz zeta `ζ(s, q) = Σ_{n≥0} (n+q)^-s` with `|error| ≤ tol`.
pub fn hurwitz_zeta(s: f64, q: f64, tol: f64) -> Result<ZetaEval> {
    check_args(s, q, tol)?;
    let (v, trunc, _) = hurwitz_parts(s, q, tol / 2.0);
    finish(v, trunc, tol)
}

/// Riemann zeta `ζ(s) = ζ(s, 1)`.
pub fn riemann_zeta(s: f64, tol: f64) -> Result<ZetaEval> {
    hurwitz_zeta(s, 1.0, tol)
}

/// `∂ζ(s, q)/∂s = −Σ (n+q)^-s ln(n+q)`.
///
/// The tail is the s-derivative of the Euler–Maclaurin tail above; the
/// remainder bound is the derivative of the `B6` term with a factor-two
/// margin.
pub fn hurwitz_zeta_ds(s: f64, q: f64, tol: f64) -> Result<ZetaEval> {
    check_args(s, q, tol)?;
    let n = terms_for(s, q, tol / 2.0, true);
    let mut head = Compensated::default();
    for j in (0..n).rev() {
        let x = j as f64 + q;
        head.add(-ln(x) * powf(x, -s));
    }
    let head = head.value();
    let a = n as f64 + q;
    let la = ln(a);
    let am = exp(-s * la);
    let s1 = s - 1.0;
    let poly = s * (s + 1.0) * (s + 2.0);
    let dpoly = 3.0 * s * s + 6.0 * s + 2.0;
    let tail = -la * a * am / s1 - a * am / (s1 * s1) - la * am / 2.0
        + am / a * (1.0 - s * la) / 12.0
        - am / (a * a * a) * (dpoly - poly * la) / 720.0;
    let poch: f64 = (0..5).map(|i| 1.0 / (s + i as f64)).sum();
    let trunc = 2.0 * b6_term(s, a) * (la.abs() + poch);
    finish(head + tail, trunc, tol)
}

/// Solve `ζ(B, 1+k0) = 1` for `B` with the default ceiling [`B_MAX`].
pub fn solve_exponent(k0: f64, tol: f64) -> Result<f64> {
    solve_exponent_with(k0, tol, B_MAX)
}

/// `ζ(B, q) − 1`, written as `(q^-B − 1) + ζ(B, q+1)` so that the sign stays
/// exact when `q → 1` and `B` is large.
fn excess(b: f64, q: f64, tol: f64) -> f64 {
    let (z, _, _) = hurwitz_parts(b, q + 1.0, tol);
    libm::expm1(-b * ln(q)) + z
}

/// Bisection on `(1 + 1e-6, b_max]`, bracket found by doubling from 2.
///
/// Returns [`Error::NoRoot`] when `ζ(b_max, 1+k0) > 1`, the `k0 → 0`
/// degeneracy where the exponent runs off to infinity.
pub fn solve_exponent_with(k0: f64, tol: f64, b_max: f64) -> Result<f64> {
    if !k0.is_finite() || k0 < 0.0 {
        return Err(Error::Domain("k0 must be a finite non-negative number"));
    }
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::Domain("tol must be positive"));
    }
    if !(b_max > B_FLOOR) {
        return Err(Error::Domain("b_max must exceed 1 + 1e-6"));
    }
    let q = 1.0 + k0;
    let etol = tol / 8.0;
    let mut lo = B_FLOOR;
    if excess(lo, q, etol) <= 0.0 {
        return Err(Error::Domain("k0 too large: root lies below 1 + 1e-6"));
    }
    let mut hi = 2.0f64.min(b_max);
    loop {
        if excess(hi, q, etol) <= 0.0 {
            break;
        }
        if hi >= b_max {
            return Err(Error::NoRoot { k0, b_max });
        }
        lo = hi;
        hi = (hi * 2.0).min(b_max);
    }
    loop {
        let mid = 0.5 * (lo + hi);
        let f = excess(mid, q, etol);
        if f.abs() <= tol / 2.0 || hi - lo <= 4.0 * f64::EPSILON * mid {
            return Ok(mid);
        }
        if f > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

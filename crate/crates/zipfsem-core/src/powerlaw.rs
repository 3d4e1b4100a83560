//! Rank-frequency tables, exponent fits and frequency spectra.

use alloc::string::String;
use alloc::vec::Vec;

use crate::baselines::TokenStream;
use crate::math::{ceil, exp, floor, ln, ols};
use crate::{Error, Result};

/// Frequencies indexed by rank `1..=n`, non-increasing, strictly positive.
#[derive(Clone, Debug, PartialEq)]
pub struct RankFrequencyTable {
    freqs: Vec<f64>,
    labels: Option<Vec<String>>,
}

impl RankFrequencyTable {
    /// Build from frequencies already in rank order.
    pub fn new(freqs: Vec<f64>, labels: Option<Vec<String>>) -> Result<Self> {
        if freqs.iter().any(|f| !(f.is_finite() && *f > 0.0)) {
            return Err(Error::Domain("frequencies must be finite and positive"));
        }
        if freqs.windows(2).any(|w| w[1] > w[0]) {
            return Err(Error::Domain("frequencies must be non-increasing in rank"));
        }
        if let Some(l) = &labels {
            if l.len() != freqs.len() {
                return Err(Error::Domain("one label per rank required"));
            }
        }
        Ok(RankFrequencyTable { freqs, labels })
    }

    /// Sort arbitrary positive values into rank order (stable, so equal values
    /// keep their input order). Zeros are dropped.
    pub fn from_unsorted(values: &[f64]) -> Result<Self> {
        let mut v: Vec<f64> = values.iter().copied().filter(|&x| x > 0.0).collect();
        v.sort_by(|a, b| b.total_cmp(a));
        RankFrequencyTable::new(v, None)
    }

    pub fn len(&self) -> usize {
        self.freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs.is_empty()
    }

    /// Frequency at `rank` (1-based).
    pub fn frequency(&self, rank: usize) -> Option<f64> {
        rank.checked_sub(1).and_then(|i| self.freqs.get(i).copied())
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.freqs
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn total(&self) -> f64 {
        self.freqs.iter().sum()
    }

    /// `(rank, frequency)` pairs.
    pub fn entries(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.freqs.iter().enumerate().map(|(i, &f)| (i + 1, f))
    }
}

/// Count tokens; ties in count are broken by first occurrence.
pub fn rank_frequency(tokens: &TokenStream) -> Result<RankFrequencyTable> {
    if tokens.is_empty() {
        return Err(Error::EmptyInput);
    }
    // ids are assigned in order of first occurrence, so a stable sort on
    // count alone gives the required tie-break.
    let counts = tokens.counts();
    let mut order: Vec<usize> = (0..counts.len()).collect();
    order.sort_by(|&a, &b| counts[b].cmp(&counts[a]));
    let freqs = order.iter().map(|&i| counts[i] as f64).collect();
    let labels = order.iter().map(|&i| tokens.vocab()[i].clone()).collect();
    RankFrequencyTable::new(freqs, Some(labels))
}

/// Result of a log-log least-squares fit `ln f = intercept − B ln k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerLawFit {
    pub b: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub fit_range: (usize, usize),
    pub n_points: usize,
}

/// Ranks `[10, n/10]`.
pub fn default_fit_range(n: usize) -> (usize, usize) {
    (10, n / 10)
}

/// OLS of `ln f_k` on `ln k` over ranks `fit_range.0 ..= fit_range.1`
/// (clipped to the table), one point per rank.
pub fn fit_zipf_exponent(table: &RankFrequencyTable, fit_range: (usize, usize)) -> Result<PowerLawFit> {
    let (lo, hi) = (fit_range.0.max(1), fit_range.1.min(table.len()));
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for k in lo..=hi {
        let f = table.freqs[k - 1];
        xs.push(ln(k as f64));
        ys.push(ln(f));
    }
    if xs.len() < 10 {
        return Err(Error::InsufficientData { needed: 10, got: xs.len() });
    }
    let (a, slope, r2) = ols(&xs, &ys);
    Ok(PowerLawFit { b: -slope, intercept: a, r_squared: r2, fit_range: (lo, hi), n_points: xs.len() })
}

/// One logarithmic bin of a [`FrequencySpectrum`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumBin {
    pub lo: f64,
    pub hi: f64,
    /// Geometric centre.
    pub center: f64,
    /// Fraction of all words whose frequency falls in the bin.
    pub fraction: f64,
    pub words: usize,
    /// `fraction` per unit frequency; for integer counts the unit is the
    /// number of integers the bin contains.
    pub density: f64,
}

/// Distribution of words over frequency, `P(f)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FrequencySpectrum {
    pub bins: Vec<SpectrumBin>,
    pub integer_valued: bool,
}

/// Log-spaced histogram of the table's frequencies over `[f_min, f_max]`.
pub fn frequency_spectrum(table: &RankFrequencyTable, n_bins: usize) -> Result<FrequencySpectrum> {
    if table.is_empty() {
        return Err(Error::EmptyInput);
    }
    if n_bins == 0 {
        return Err(Error::Domain("n_bins must be positive"));
    }
    let f = table.frequencies();
    let (fmax, fmin) = (f[0], f[f.len() - 1]);
    let integer_valued = f.iter().all(|&x| x == floor(x));
    let total = f.len() as f64;
    if fmin == fmax {
        // zero-width bin; density is reported per single value
        let bin = SpectrumBin { lo: fmin, hi: fmax, center: fmin, fraction: 1.0, words: f.len(), density: 1.0 };
        return Ok(FrequencySpectrum { bins: alloc::vec![bin], integer_valued });
    }
    let span = ln(fmax / fmin);
    let edge = |i: usize| fmin * exp(span * i as f64 / n_bins as f64);
    let mut counts = alloc::vec![0usize; n_bins];
    for &x in f {
        let idx = (floor(n_bins as f64 * ln(x / fmin) / span) as usize).min(n_bins - 1);
        counts[idx] += 1;
    }
    let bins = (0..n_bins)
        .map(|i| {
            let (lo, hi) = (edge(i), if i + 1 == n_bins { fmax } else { edge(i + 1) });
            let fraction = counts[i] as f64 / total;
            let support = if integer_valued {
                // integers in [lo, hi), or [lo, hi] for the last bin
                let last = if i + 1 == n_bins { floor(hi) } else { ceil(hi) - 1.0 };
                (last - ceil(lo) + 1.0).max(0.0)
            } else {
                hi - lo
            };
            let density = if support > 0.0 { fraction / support } else { 0.0 };
            SpectrumBin { lo, hi, center: libm::sqrt(lo * hi), fraction, words: counts[i], density }
        })
        .collect();
    Ok(FrequencySpectrum { bins, integer_valued })
}

/// Fit of `P(f) ∝ f^-β` over spectrum bins.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumFit {
    pub beta: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub bins_used: usize,
}

/// OLS of `ln density` on `ln center` over bins whose centre lies in
/// `f_range` and which hold at least `min_words` words.
pub fn spectrum_exponent(spec: &FrequencySpectrum, f_range: (f64, f64), min_words: usize) -> Result<SpectrumFit> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for b in &spec.bins {
        if b.center >= f_range.0 && b.center <= f_range.1 && b.words >= min_words.max(1) && b.density > 0.0 {
            xs.push(ln(b.center));
            ys.push(ln(b.density));
        }
    }
    if xs.len() < 3 {
        return Err(Error::InsufficientData { needed: 3, got: xs.len() });
    }
    let (a, slope, r2) = ols(&xs, &ys);
    Ok(SpectrumFit { beta: -slope, intercept: a, r_squared: r2, bins_used: xs.len() })
}

/// `ln(n/k) < Σ_{j=k}^{n} 1/j < ln(n/(k−1))`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HarmonicBounds {
    pub lower: f64,
    pub sum: f64,
    pub upper: f64,
}

/// Integral bounds on a harmonic segment.
///
/// The upper bound is `∫_{k−1}^{n} dx/x`, the right-endpoint comparison for
/// the full segment `k..=n`. (`ln((n−1)/(k−1))` bounds only `k..n−1` and is
/// violated by the full segment once `n ≲ 3k`.)
pub fn harmonic_sum_bounds(k: u64, n: u64) -> Result<HarmonicBounds> {
    if k < 2 {
        return Err(Error::Domain("k must be at least 2"));
    }
    if n <= k {
        return Err(Error::Domain("n must exceed k"));
    }
    let mut sum = 0.0;
    for j in (k..=n).rev() {
        sum += 1.0 / j as f64;
    }
    let (kf, nf) = (k as f64, n as f64);
    Ok(HarmonicBounds { lower: ln(nf / kf), sum, upper: ln(nf / (kf - 1.0)) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baselines::{simon_process, TokenStream};
    use crate::math::powf;
    use alloc::vec;

    fn exact(b: f64, n: usize) -> RankFrequencyTable {
        RankFrequencyTable::new((1..=n).map(|k| powf(k as f64, -b)).collect(), None).unwrap()
    }

    #[test]
    fn counts_and_tie_break() {
        let t = rank_frequency(&TokenStream::from_words(["a", "b", "a"])).unwrap();
        assert_eq!(t.frequencies(), &[2.0, 1.0]);
        assert_eq!(t.labels().unwrap(), &["a", "b"]);
        let t = rank_frequency(&TokenStream::from_words(["x", "y", "z", "y", "x"])).unwrap();
        assert_eq!(t.labels().unwrap(), &["x", "y", "z"]);
    }

    #[test]
    fn single_token_repeated() {
        let t = rank_frequency(&TokenStream::from_words(["w"; 7])).unwrap();
        assert_eq!(t.frequencies(), &[7.0]);
    }

    #[test]
    fn simon_all_new_gives_unit_frequencies() {
        let s = simon_process(1.0, 500, 3).unwrap();
        let t = rank_frequency(&s).unwrap();
        assert_eq!(t.len(), 500);
        assert!(t.frequencies().iter().all(|&f| f == 1.0));
    }

    #[test]
    fn empty_stream_rejected() {
        assert_eq!(rank_frequency(&TokenStream::from_words::<&str>([])), Err(Error::EmptyInput));
    }

    #[test]
    fn table_validation() {
        assert!(RankFrequencyTable::new(vec![1.0, 2.0], None).is_err());
        assert!(RankFrequencyTable::new(vec![1.0, 0.0], None).is_err());
        assert!(RankFrequencyTable::new(vec![2.0, 1.0], Some(vec![String::from("a")])).is_err());
    }

    #[test]
    fn exact_power_laws_recovered() {
        for &b in &[0.5, 1.0, 1.5, 2.0] {
            let fit = fit_zipf_exponent(&exact(b, 1000), (1, 1000)).unwrap();
            assert!((fit.b - b).abs() < 1e-9);
            assert!((fit.r_squared - 1.0).abs() < 1e-12);
        }
        let fit = fit_zipf_exponent(&exact(1.0, 1000), default_fit_range(1000)).unwrap();
        assert_eq!(fit.fit_range, (10, 100));
        assert_eq!(fit.n_points, 91);
    }

    #[test]
    fn fit_needs_ten_points() {
        let r = fit_zipf_exponent(&exact(1.0, 50), (45, 60));
        assert_eq!(r, Err(Error::InsufficientData { needed: 10, got: 6 }));
    }

    #[test]
    fn spectrum_of_equal_frequencies() {
        let t = RankFrequencyTable::new(vec![3.0; 10], None).unwrap();
        let s = frequency_spectrum(&t, 20).unwrap();
        assert_eq!(s.bins.len(), 1);
        assert_eq!(s.bins[0].fraction, 1.0);
    }

    #[test]
    fn spectrum_of_inverse_rank_has_slope_two() {
        let t = exact(1.0, 10_000);
        let s = frequency_spectrum(&t, 40).unwrap();
        let total: f64 = s.bins.iter().map(|b| b.fraction).sum();
        assert!((total - 1.0).abs() < 1e-9);
        // brute-force oracle: count k with 1/k in each bin directly
        for b in &s.bins {
            let n = (1..=10_000usize)
                .filter(|&k| {
                    let f = 1.0 / k as f64;
                    f >= b.lo && (f < b.hi || b.hi == 1.0)
                })
                .count();
            assert!((n as isize - b.words as isize).abs() <= 1);
        }
        let fit = spectrum_exponent(&s, (0.0, f64::INFINITY), 10).unwrap();
        assert!((fit.beta - 2.0).abs() < 0.05, "beta = {}", fit.beta);
    }

    #[test]
    fn spectrum_integer_support() {
        let t = RankFrequencyTable::new(vec![7.0, 5.0, 3.0, 1.0, 1.0], None).unwrap();
        let s = frequency_spectrum(&t, 3).unwrap();
        assert!(s.integer_valued);
        let words: Vec<usize> = s.bins.iter().map(|b| b.words).collect();
        assert_eq!(words, [2, 1, 2]);
        // edges 1, 7^(1/3), 7^(2/3), 7 hold the integers {1}, {2,3}, {4..7}
        assert!((s.bins[0].density - 0.4).abs() < 1e-15);
        assert!((s.bins[1].density - 0.1).abs() < 1e-15);
        assert!((s.bins[2].density - 0.1).abs() < 1e-15);
    }

    #[test]
    fn harmonic_examples() {
        let h = harmonic_sum_bounds(2, 10).unwrap();
        assert!((h.lower - 1.609_437_912).abs() < 1e-9);
        assert!((h.sum - 1.928_968_254).abs() < 1e-9);
        assert!((h.upper - 2.302_585_093).abs() < 1e-9);
        let h = harmonic_sum_bounds(100, 200).unwrap();
        assert!(h.lower < h.sum && h.sum < h.upper);
        assert!(h.upper - h.lower < 0.02);
        assert!(matches!(harmonic_sum_bounds(1, 10), Err(Error::Domain(_))));
        assert!(matches!(harmonic_sum_bounds(5, 5), Err(Error::Domain(_))));
    }

    #[test]
    fn shifted_upper_bound_fails_on_narrow_segments() {
        // ln((n−1)/(k−1)) is below the full segment sum here
        let h = harmonic_sum_bounds(100, 200).unwrap();
        assert!(ln(199.0 / 99.0) < h.sum);
        let h = harmonic_sum_bounds(10, 20).unwrap();
        assert!(ln(19.0 / 9.0) < h.sum);
    }
}

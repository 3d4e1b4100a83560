//! Lexical-semantic checks: hyponym frequency sums against their head word,
//! and principal-component classification of adjectives from a
//! noun-compatibility count matrix.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::math::sqrt;
use crate::{Error, Result};

/// A word with its frequency per million.
#[derive(Clone, Debug, PartialEq)]
pub struct Entry {
    pub word: String,
    pub freq: f64,
}

impl Entry {
    pub fn new(word: impl Into<String>, freq: f64) -> Self {
        Entry { word: word.into(), freq }
    }
}

/// A listed hyponym left out of the retained sum, with the reason.
#[derive(Clone, Debug, PartialEq)]
pub struct Excluded {
    pub word: String,
    pub freq: f64,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HyponymTable {
    pub name: String,
    pub head: Vec<Entry>,
    /// Retained hyponyms.
    pub hyponyms: Vec<Entry>,
    pub exclusions: Vec<Excluded>,
}

impl HyponymTable {
    pub fn new(name: impl Into<String>, head: Vec<Entry>, hyponyms: Vec<Entry>, exclusions: Vec<Excluded>) -> Result<Self> {
        let all = || {
            head.iter()
                .chain(&hyponyms)
                .map(|e| (&e.word, e.freq))
                .chain(exclusions.iter().map(|e| (&e.word, e.freq)))
        };
        if all().any(|(_, f)| !(f >= 0.0 && f.is_finite())) {
            return Err(Error::Domain("frequencies must be finite and non-negative"));
        }
        let mut words: Vec<&String> = all().map(|(w, _)| w).collect();
        words.sort();
        if words.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Domain("duplicate word in table"));
        }
        Ok(HyponymTable { name: name.into(), head, hyponyms, exclusions })
    }

    pub fn head_sum(&self) -> f64 {
        self.head.iter().map(|e| e.freq).sum()
    }

    pub fn hyponym_sum(&self) -> f64 {
        self.hyponyms.iter().map(|e| e.freq).sum()
    }

    /// Retained plus excluded hyponyms.
    pub fn all_listed_sum(&self) -> f64 {
        self.hyponym_sum() + self.exclusions.iter().map(|e| e.freq).sum::<f64>()
    }
}

/// Default relative tolerance of the sum check.
pub const SUM_TOLERANCE: f64 = 0.20;

/// Which hyponyms count towards the sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HyponymSet {
    Retained,
    AllListed,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SumReport {
    pub head_sum: f64,
    pub hyponym_sum: f64,
    pub ratio: f64,
    pub pass: bool,
}

/// Compare retained hyponyms with the head: passes iff
/// `|hyponym_sum/head_sum − 1| ≤ tolerance`.
pub fn hyponym_sum_check(table: &HyponymTable, tolerance: f64) -> Result<SumReport> {
    hyponym_sum_check_with(table, tolerance, HyponymSet::Retained)
}

pub fn hyponym_sum_check_with(table: &HyponymTable, tolerance: f64, set: HyponymSet) -> Result<SumReport> {
    if table.head.is_empty() || table.hyponyms.is_empty() {
        return Err(Error::EmptyTable);
    }
    let head_sum = table.head_sum();
    if head_sum <= 0.0 {
        return Err(Error::EmptyTable);
    }
    let hyponym_sum = match set {
        HyponymSet::Retained => table.hyponym_sum(),
        HyponymSet::AllListed => table.all_listed_sum(),
    };
    let ratio = hyponym_sum / head_sum;
    Ok(SumReport { head_sum, hyponym_sum, ratio, pass: (ratio - 1.0).abs() <= tolerance })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Polarity {
    Positive,
    Negative,
}

/// Counts of adjective (row) × test noun (column) co-occurrences.
#[derive(Clone, Debug, PartialEq)]
pub struct CompatibilityMatrix {
    pub rows: Vec<Entry>,
    pub cols: Vec<(String, Polarity)>,
    pub counts: Vec<Vec<u64>>,
}

impl CompatibilityMatrix {
    pub fn new(rows: Vec<Entry>, cols: Vec<(String, Polarity)>, counts: Vec<Vec<u64>>) -> Result<Self> {
        if counts.len() != rows.len() || counts.iter().any(|r| r.len() != cols.len()) {
            return Err(Error::Domain("count matrix does not match labels"));
        }
        Ok(CompatibilityMatrix { rows, cols, counts })
    }
}

/// How the principal axis is extracted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PcaMethod {
    /// Pearson correlation between noun columns of the raw counts; weights
    /// project column-standardized rows onto the axis.
    #[default]
    ColumnCorrelation,
    /// Each row standardized first, then column correlation of the
    /// standardized matrix; weights project standardized rows.
    RowNormalized,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PcaResult {
    /// Leading eigenvector over columns, unit norm, component sum ≥ 0.
    pub eigenvector: Vec<f64>,
    pub eigenvalue: f64,
    /// Indices of retained rows in the input matrix.
    pub retained: Vec<usize>,
    /// Weights of the retained rows.
    pub weights: Vec<f64>,
    pub dropped_rows: Vec<String>,
    /// Positive weight, per retained row.
    pub positive: Vec<bool>,
    pub method: PcaMethod,
}

/// Rows with raw-count variance below this are dropped.
pub const ZERO_VARIANCE: f64 = 1e-12;

fn mean_std(v: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = v.clone().count() as f64;
    let m = v.clone().sum::<f64>() / n;
    let var = v.map(|x| (x - m) * (x - m)).sum::<f64>() / n;
    (m, sqrt(var))
}

fn standardize_columns(x: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let (r, c) = (x.len(), x[0].len());
    let mut z = vec![vec![0.0; c]; r];
    for j in 0..c {
        let (m, s) = mean_std(x.iter().map(|row| row[j]));
        if !(s > 0.0) {
            return Err(Error::DegenerateMatrix);
        }
        for i in 0..r {
            z[i][j] = (x[i][j] - m) / s;
        }
    }
    Ok(z)
}

fn correlation(z: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let (r, c) = (z.len(), z[0].len());
    let mut corr = vec![vec![0.0; c]; c];
    for a in 0..c {
        for b in a..c {
            let v = z.iter().map(|row| row[a] * row[b]).sum::<f64>() / r as f64;
            corr[a][b] = v;
            corr[b][a] = v;
        }
    }
    corr
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns eigenvalues and the eigenvectors as columns.
pub fn symmetric_eigen(a: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut a: Vec<Vec<f64>> = a.to_vec();
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _ in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        let scale: f64 = (0..n).map(|i| a[i][i] * a[i][i]).sum::<f64>().max(f64::MIN_POSITIVE);
        if off <= 1e-30 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + sqrt(theta * theta + 1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let (vkp, vkq) = (row[p], row[q]);
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| a[i][i]).collect(), v)
}

fn leading_axis(corr: &[Vec<f64>]) -> (f64, Vec<f64>) {
    let (vals, vecs) = symmetric_eigen(corr);
    let k = (0..vals.len()).fold(0, |best, i| if vals[i] > vals[best] { i } else { best });
    let mut e: Vec<f64> = vecs.iter().map(|row| row[k]).collect();
    let norm = sqrt(e.iter().map(|x| x * x).sum());
    e.iter_mut().for_each(|x| *x /= norm);
    let sum: f64 = e.iter().sum();
    let flip = if sum.abs() > 1e-12 { sum < 0.0 } else { e.iter().find(|x| x.abs() > 1e-12).is_some_and(|&x| x < 0.0) };
    if flip {
        e.iter_mut().for_each(|x| *x = -*x);
    }
    (vals[k], e)
}

/// Classify the rows of `m` by the sign of their weight on the leading
/// principal axis (default method).
pub fn pca_classify(m: &CompatibilityMatrix) -> Result<PcaResult> {
    pca_classify_with(m, PcaMethod::default())
}

pub fn pca_classify_with(m: &CompatibilityMatrix, method: PcaMethod) -> Result<PcaResult> {
    if m.cols.len() < 2 {
        return Err(Error::DegenerateMatrix);
    }
    let mut retained = Vec::new();
    let mut dropped_rows = Vec::new();
    for (i, row) in m.counts.iter().enumerate() {
        let (_, s) = mean_std(row.iter().map(|&c| c as f64));
        if s * s < ZERO_VARIANCE {
            dropped_rows.push(m.rows[i].word.clone());
        } else {
            retained.push(i);
        }
    }
    if retained.len() < 2 {
        return Err(Error::DegenerateMatrix);
    }
    let x: Vec<Vec<f64>> = retained.iter().map(|&i| m.counts[i].iter().map(|&c| c as f64).collect()).collect();
    let z = match method {
        PcaMethod::ColumnCorrelation => standardize_columns(&x)?,
        PcaMethod::RowNormalized => x
            .iter()
            .map(|r| {
                let (mu, s) = mean_std(r.iter().copied());
                r.iter().map(|v| (v - mu) / s).collect()
            })
            .collect(),
    };
    let (eigenvalue, e) = match method {
        PcaMethod::ColumnCorrelation => leading_axis(&correlation(&z)),
        PcaMethod::RowNormalized => leading_axis(&correlation(&standardize_columns(&z)?)),
    };
    let weights: Vec<f64> = z.iter().map(|row| row.iter().zip(&e).map(|(a, b)| a * b).sum()).collect();
    let positive = weights.iter().map(|&w| w > 0.0).collect();
    Ok(PcaResult { eigenvector: e, eigenvalue, retained, weights, dropped_rows, positive, method })
}

/// Total frequency of the rows with positive weight.
pub fn positive_weight_frequency_sum(pca: &PcaResult, m: &CompatibilityMatrix) -> f64 {
    pca.retained.iter().zip(&pca.positive).filter(|(_, &p)| p).map(|(&i, _)| m.rows[i].freq).sum()
}

//! Reference text processes and stream measurements: random typing,
//! Simon's cumulative-advantage process, n-word statistics, the new-word
//! rate and the word-length distribution.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::Rng;

use crate::math::{ln, ols};
use crate::rng::TracedRng;
use crate::{Error, Result};

/// Where a token stream came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TokenSource {
    RandomTyping,
    Simon,
    File,
}

/// An interned sequence of word tokens.
///
/// Word ids are assigned in order of first occurrence. Empty tokens are never
/// stored.
#[derive(Clone, Debug, PartialEq)]
pub struct TokenStream {
    vocab: Vec<String>,
    ids: Vec<u32>,
    source: TokenSource,
    /// Fingerprint of the random stream that produced the tokens, if any.
    pub rng_trace_hash: Option<u64>,
}

#[derive(Default)]
struct Interner {
    index: BTreeMap<String, u32>,
    vocab: Vec<String>,
    ids: Vec<u32>,
}

impl Interner {
    fn push(&mut self, word: &str) {
        if word.is_empty() {
            return;
        }
        let id = match self.index.get(word) {
            Some(&id) => id,
            None => {
                let id = self.vocab.len() as u32;
                self.index.insert(String::from(word), id);
                self.vocab.push(String::from(word));
                id
            }
        };
        self.ids.push(id);
    }

    fn finish(self, source: TokenSource, rng_trace_hash: Option<u64>) -> TokenStream {
        TokenStream { vocab: self.vocab, ids: self.ids, source, rng_trace_hash }
    }
}

impl TokenStream {
    /// Stream from words given in order; empty strings are skipped.
    pub fn from_words<S: AsRef<str>>(words: impl IntoIterator<Item = S>) -> Self {
        let mut it = Interner::default();
        for w in words {
            it.push(w.as_ref());
        }
        it.finish(TokenSource::File, None)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn source(&self) -> TokenSource {
        self.source
    }

    /// Distinct words in order of first occurrence.
    pub fn vocab(&self) -> &[String] {
        &self.vocab
    }

    /// Token ids, indices into [`TokenStream::vocab`].
    pub fn ids(&self) -> &[u32] {
        &self.ids
    }

    pub fn token(&self, i: usize) -> &str {
        &self.vocab[self.ids[i] as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> + '_ {
        self.ids.iter().map(move |&id| self.vocab[id as usize].as_str())
    }

    /// Occurrence count per word id.
    pub fn counts(&self) -> Vec<u64> {
        let mut c = alloc::vec![0u64; self.vocab.len()];
        for &id in &self.ids {
            c[id as usize] += 1;
        }
        c
    }
}

/// Lowercase, split on every non-alphabetic character, drop empties.
pub fn tokenize_text(text: &str) -> TokenStream {
    let mut it = Interner::default();
    let mut word = String::new();
    for ch in text.chars() {
        if ch.is_alphabetic() {
            word.extend(ch.to_lowercase());
        } else if !word.is_empty() {
            it.push(&word);
            word.clear();
        }
    }
    it.push(&word);
    it.finish(TokenSource::File, None)
}

/// Uniform characters from `alphabet_size` letters plus a space; the text is
/// split on spaces and empty words are discarded.
///
/// Letters are `a`, `b`, … so at most 26 are supported.
pub fn random_typing(alphabet_size: usize, n_chars: usize, seed: u64) -> Result<TokenStream> {
    if !(1..=26).contains(&alphabet_size) {
        return Err(Error::Domain("alphabet_size must be in 1..=26"));
    }
    if n_chars == 0 {
        return Err(Error::Domain("n_chars must be positive"));
    }
    let mut rng = TracedRng::seed_from_u64(seed);
    let space = alphabet_size as u8;
    let mut it = Interner::default();
    let mut word = String::new();
    for _ in 0..n_chars {
        let c = rng.gen_range(0..=space);
        if c == space {
            it.push(&word);
            word.clear();
        } else {
            word.push((b'a' + c) as char);
        }
    }
    it.push(&word);
    Ok(it.finish(TokenSource::RandomTyping, Some(rng.trace_hash())))
}

/// Simon's process: the first token is new; afterwards each token is new with
/// probability `p_new`, otherwise a copy of a uniformly chosen earlier token.
///
/// New words are named `w1`, `w2`, … in order of introduction.
pub fn simon_process(p_new: f64, n_tokens: usize, seed: u64) -> Result<TokenStream> {
    if !(0.0..=1.0).contains(&p_new) {
        return Err(Error::Domain("p_new must lie in [0, 1]"));
    }
    if n_tokens == 0 {
        return Err(Error::Domain("n_tokens must be positive"));
    }
    let mut rng = TracedRng::seed_from_u64(seed);
    let mut ids: Vec<u32> = Vec::with_capacity(n_tokens);
    let mut vocab: Vec<String> = Vec::new();
    for t in 0..n_tokens {
        let fresh = t == 0 || rng.gen::<f64>() < p_new;
        if fresh {
            ids.push(vocab.len() as u32);
            vocab.push(format!("w{}", vocab.len() + 1));
        } else {
            let j = rng.gen_range(0..t);
            ids.push(ids[j]);
        }
    }
    Ok(TokenStream { vocab, ids, source: TokenSource::Simon, rng_trace_hash: Some(rng.trace_hash()) })
}

/// Per-position n-word statistics of a stream.
///
/// At position `t`, `is_n_word[t]` says whether token `t` had occurred
/// exactly `n` times among tokens `0..t`, and `n_word_fraction[t]` is the
/// share of those `t` tokens that belong to words seen exactly `n` times
/// (zero at `t = 0`). `is_new[t]` marks first occurrences.
#[derive(Clone, Debug, PartialEq)]
pub struct NWordSeries {
    pub n: u64,
    pub is_n_word: Vec<bool>,
    pub n_word_fraction: Vec<f64>,
    pub is_new: Vec<bool>,
}

impl NWordSeries {
    /// Mean of the indicator and of the fraction over positions selected by
    /// `keep`.
    pub fn means(&self, keep: impl Fn(usize) -> bool) -> (f64, f64) {
        let (mut a, mut b, mut m) = (0.0, 0.0, 0usize);
        for t in 0..self.is_n_word.len() {
            if keep(t) {
                a += self.is_n_word[t] as u8 as f64;
                b += self.n_word_fraction[t];
                m += 1;
            }
        }
        if m == 0 {
            (0.0, 0.0)
        } else {
            (a / m as f64, b / m as f64)
        }
    }
}

/// Paired series for testing "the next token is an n-word with probability
/// equal to the share of n-word tokens so far".
pub fn n_word_selection_probability(stream: &TokenStream, n: u64) -> Result<NWordSeries> {
    if stream.is_empty() {
        return Err(Error::EmptyInput);
    }
    let len = stream.len();
    let mut count = alloc::vec![0u64; stream.vocab().len()];
    // words_with[c] = number of distinct words seen exactly c times
    let mut words_with: Vec<u64> = alloc::vec![0; 2];
    let mut out = NWordSeries {
        n,
        is_n_word: Vec::with_capacity(len),
        n_word_fraction: Vec::with_capacity(len),
        is_new: Vec::with_capacity(len),
    };
    for (t, &id) in stream.ids().iter().enumerate() {
        let c = count[id as usize];
        let with_n = words_with.get(n as usize).copied().unwrap_or(0);
        out.is_n_word.push(c == n);
        out.n_word_fraction.push(if t == 0 || n == 0 { 0.0 } else { (n * with_n) as f64 / t as f64 });
        out.is_new.push(c == 0);
        if c > 0 {
            words_with[c as usize] -= 1;
        }
        if words_with.len() <= c as usize + 1 {
            words_with.resize(c as usize + 2, 0);
        }
        words_with[c as usize + 1] += 1;
        count[id as usize] = c + 1;
    }
    Ok(out)
}

/// Windowed share of first occurrences and its log-log decay exponent.
#[derive(Clone, Debug, PartialEq)]
pub struct NewWordRateSeries {
    /// `(tokens seen at the end of the window, new-word share in the window)`.
    pub points: Vec<(usize, f64)>,
    /// `−slope` of `ln rate` on `ln n`; windows with zero rate are skipped.
    pub fitted_decay_exponent: f64,
}

/// New-word rate over consecutive non-overlapping windows.
pub fn new_word_rate(stream: &TokenStream, window: usize) -> Result<NewWordRateSeries> {
    if window < 100 {
        return Err(Error::Domain("window must be at least 100 tokens"));
    }
    if stream.len() < 2 * window {
        return Err(Error::StreamTooShort { len: stream.len(), window });
    }
    let mut seen = alloc::vec![false; stream.vocab().len()];
    let mut points = Vec::new();
    let mut fresh = 0usize;
    for (t, &id) in stream.ids().iter().enumerate() {
        if !seen[id as usize] {
            seen[id as usize] = true;
            fresh += 1;
        }
        if (t + 1) % window == 0 {
            points.push((t + 1, fresh as f64 / window as f64));
            fresh = 0;
        }
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) =
        points.iter().filter(|p| p.1 > 0.0).map(|&(n, r)| (ln(n as f64), ln(r))).unzip();
    let fitted_decay_exponent = if xs.len() >= 2 { -ols(&xs, &ys).1 } else { 0.0 };
    Ok(NewWordRateSeries { points, fitted_decay_exponent })
}

/// Number of distinct words of each length (in characters).
pub fn word_length_distribution(stream: &TokenStream) -> BTreeMap<usize, usize> {
    let mut h = BTreeMap::new();
    for w in stream.vocab() {
        *h.entry(w.chars().count()).or_insert(0) += 1;
    }
    h
}

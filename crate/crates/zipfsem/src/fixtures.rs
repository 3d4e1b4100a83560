//! Frequency tables bundled with the crate.
//!
//! Each fixture is a CSV file under `data/v1`, listed in `catalog.json` with
//! its table number, caption, printed sums and SHA-256. Files are embedded at
//! compile time and verified against the catalog on every load.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use zipfsem_core::lexsem::{CompatibilityMatrix, Entry, Excluded, HyponymTable, Polarity};

use crate::error::{Error, Result};

const CATALOG_JSON: &str = include_str!("../data/v1/catalog.json");

macro_rules! embed {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_bytes!(concat!("../data/v1/", $name)) as &[u8])),*]
    };
}

static FILES: &[(&str, &[u8])] = embed!(
    "table01_tree.csv",
    "table02_flower.csv",
    "table03_berry.csv",
    "table04_meat.csv",
    "table05_human.csv",
    "table06_fish.csv",
    "table07_fence.csv",
    "table08_old.csv",
    "table09_red.csv",
    "table10_big.csv",
    "table11_bad.csv",
    "table12_bad_matrix.csv",
    "table13_small.csv",
    "table14_say.csv",
    "table15_think.csv",
    "table16_rise.csv",
    "table16_grow.csv",
    "table17_shout.csv",
    "table17_cry.csv",
    "table18_good.csv",
);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FixtureKind {
    Hyponym,
    Matrix,
}

/// Sums (or the eigenvector) as printed alongside the source table.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PrintedSums {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub head: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hyponyms: Option<f64>,
    /// Retained plus excluded hyponyms.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hyponyms_all: Option<f64>,
    /// Rows flagged emphatic.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub emphatic: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigenvector: Option<Vec<f64>>,
}

/// A printed sum that disagrees with the sum of the printed rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub sum: String,
    pub printed: f64,
    pub recomputed: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub id: String,
    pub file: String,
    pub kind: FixtureKind,
    /// Number of the source table.
    pub table: u32,
    pub caption: String,
    pub sha256: String,
    pub printed: PrintedSums,
    pub discrepancies: Vec<Discrepancy>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixtureCatalog {
    pub version: String,
    pub fixtures: Vec<CatalogEntry>,
}

impl FixtureCatalog {
    /// The catalog compiled into the crate.
    pub fn embedded() -> &'static FixtureCatalog {
        static CATALOG: OnceLock<FixtureCatalog> = OnceLock::new();
        CATALOG.get_or_init(|| serde_json::from_str(CATALOG_JSON).expect("embedded catalog is valid JSON"))
    }

    pub fn get(&self, id: &str) -> Option<&CatalogEntry> {
        self.fixtures.iter().find(|e| e.id == id)
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.fixtures.iter().map(|e| e.id.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Head,
    Hyponym,
    Excluded,
}

/// One line of a hyponym table file.
#[derive(Clone, Debug, PartialEq)]
pub struct FixtureRow {
    pub role: Role,
    pub word: String,
    pub freq: f64,
    pub gloss: String,
    pub translit: String,
    /// Listed as missing from the dictionary; stored with frequency 0.
    pub absent: bool,
    pub reason: String,
    pub emphatic: bool,
    /// Printed PCA weight, where the table has one.
    pub weight: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HyponymFixture {
    pub entry: CatalogEntry,
    pub rows: Vec<FixtureRow>,
    pub table: HyponymTable,
}

impl HyponymFixture {
    pub fn emphatic_sum(&self) -> f64 {
        self.rows.iter().filter(|r| r.emphatic).map(|r| r.freq).sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MatrixFixture {
    pub entry: CatalogEntry,
    pub matrix: CompatibilityMatrix,
    pub translit: Vec<String>,
    /// `(row, column)` cells printed with a question mark.
    pub uncertain: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Fixture {
    Hyponym(HyponymFixture),
    Matrix(MatrixFixture),
}

impl Fixture {
    pub fn entry(&self) -> &CatalogEntry {
        match self {
            Fixture::Hyponym(h) => &h.entry,
            Fixture::Matrix(m) => &m.entry,
        }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// Raw bytes of an embedded file.
pub fn fixture_bytes(file: &str) -> Option<&'static [u8]> {
    FILES.iter().find(|(name, _)| *name == file).map(|(_, b)| *b)
}

/// Load, verify and parse a bundled fixture.
pub fn load_fixture(id: &str) -> Result<Fixture> {
    let entry = FixtureCatalog::embedded().get(id).ok_or_else(|| Error::UnknownFixture(id.to_string()))?;
    let bytes = fixture_bytes(&entry.file).ok_or_else(|| Error::UnknownFixture(id.to_string()))?;
    parse_fixture(entry, bytes)
}

pub fn load_hyponym_fixture(id: &str) -> Result<HyponymFixture> {
    match load_fixture(id)? {
        Fixture::Hyponym(h) => Ok(h),
        Fixture::Matrix(_) => Err(Error::parse(id, None, "not a hyponym table")),
    }
}

pub fn load_matrix_fixture(id: &str) -> Result<MatrixFixture> {
    match load_fixture(id)? {
        Fixture::Matrix(m) => Ok(m),
        Fixture::Hyponym(_) => Err(Error::parse(id, None, "not a compatibility matrix")),
    }
}

/// Verify `bytes` against the entry's checksum and parse them.
pub fn parse_fixture(entry: &CatalogEntry, bytes: &[u8]) -> Result<Fixture> {
    let actual = sha256_hex(bytes);
    if actual != entry.sha256 {
        return Err(Error::ChecksumMismatch { id: entry.id.clone(), expected: entry.sha256.clone(), actual });
    }
    match entry.kind {
        FixtureKind::Hyponym => {
            let rows = parse_hyponym_rows(&entry.id, bytes)?;
            let table = hyponym_table(&entry.id, &rows)?;
            Ok(Fixture::Hyponym(HyponymFixture { entry: entry.clone(), rows, table }))
        }
        FixtureKind::Matrix => {
            let (matrix, translit, uncertain) = parse_matrix(&entry.id, bytes)?;
            Ok(Fixture::Matrix(MatrixFixture { entry: entry.clone(), matrix, translit, uncertain }))
        }
    }
}

fn reader(bytes: &[u8]) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new().comment(Some(b'#')).flexible(false).from_reader(bytes)
}

struct Columns(BTreeMap<String, usize>);

impl Columns {
    fn new(headers: &csv::StringRecord) -> Self {
        Columns(headers.iter().enumerate().map(|(i, h)| (h.trim().to_string(), i)).collect())
    }

    fn required(&self, src: &str, name: &str) -> Result<usize> {
        self.0.get(name).copied().ok_or_else(|| Error::parse(src, Some(1), format!("missing column `{name}`")))
    }

    fn get<'r>(&self, rec: &'r csv::StringRecord, name: &str) -> &'r str {
        self.0.get(name).and_then(|&i| rec.get(i)).map(str::trim).unwrap_or("")
    }
}

fn line_of(rec: &csv::StringRecord) -> Option<u64> {
    rec.position().map(|p| p.line())
}

fn number(src: &str, rec: &csv::StringRecord, field: &str, what: &str) -> Result<f64> {
    field
        .parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| Error::parse(src, line_of(rec), format!("bad {what} `{field}`")))
}

fn flag(src: &str, rec: &csv::StringRecord, field: &str) -> Result<bool> {
    match field {
        "" | "0" => Ok(false),
        "1" => Ok(true),
        other => Err(Error::parse(src, line_of(rec), format!("bad flag `{other}`"))),
    }
}

/// Rows of a `role,word,freq_per_million[,...]` file.
pub fn parse_hyponym_rows(src: &str, bytes: &[u8]) -> Result<Vec<FixtureRow>> {
    let mut rdr = reader(bytes);
    let cols = Columns::new(rdr.headers()?);
    let (role_i, word_i, freq_i) =
        (cols.required(src, "role")?, cols.required(src, "word")?, cols.required(src, "freq_per_million")?);
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let role = match &rec[role_i] {
            "head" => Role::Head,
            "hyponym" => Role::Hyponym,
            "excluded" => Role::Excluded,
            other => return Err(Error::parse(src, line_of(&rec), format!("unknown role `{other}`"))),
        };
        let word = rec[word_i].trim().to_string();
        if word.is_empty() {
            return Err(Error::parse(src, line_of(&rec), "empty word"));
        }
        let freq = number(src, &rec, rec[freq_i].trim(), "frequency")?;
        let weight = match cols.get(&rec, "weight") {
            "" => None,
            w => Some(number(src, &rec, w, "weight")?),
        };
        rows.push(FixtureRow {
            role,
            word,
            freq,
            gloss: cols.get(&rec, "gloss").to_string(),
            translit: cols.get(&rec, "translit").to_string(),
            absent: flag(src, &rec, cols.get(&rec, "absent"))?,
            reason: cols.get(&rec, "reason").to_string(),
            emphatic: flag(src, &rec, cols.get(&rec, "emphatic"))?,
            weight,
        });
    }
    Ok(rows)
}

pub fn hyponym_table(name: &str, rows: &[FixtureRow]) -> Result<HyponymTable> {
    let pick = |role| rows.iter().filter(move |r| r.role == role);
    let head = pick(Role::Head).map(|r| Entry::new(r.word.clone(), r.freq)).collect();
    let hyponyms = pick(Role::Hyponym).map(|r| Entry::new(r.word.clone(), r.freq)).collect();
    let exclusions = pick(Role::Excluded)
        .map(|r| Excluded { word: r.word.clone(), freq: r.freq, reason: r.reason.clone() })
        .collect();
    HyponymTable::new(name, head, hyponyms, exclusions).map_err(|e| Error::parse(name, None, e.to_string()))
}

fn noun_label(h: &str) -> Option<(String, Polarity)> {
    let h = h.trim();
    let body = h.strip_suffix(')')?;
    let open = body.rfind('(')?;
    let pol = match &body[open + 1..] {
        "+" => Polarity::Positive,
        "-" | "\u{2212}" => Polarity::Negative,
        _ => return None,
    };
    Some((body[..open].trim().to_string(), pol))
}

type ParsedMatrix = (CompatibilityMatrix, Vec<String>, Vec<(usize, usize)>);

/// A compatibility matrix file: `adjective,freq_per_million,noun(±)...`,
/// with optional `translit` and `note` columns. A note `uncertain:<noun>`
/// marks a doubtful cell.
pub fn parse_matrix(src: &str, bytes: &[u8]) -> Result<ParsedMatrix> {
    let mut rdr = reader(bytes);
    let headers = rdr.headers()?.clone();
    let cols = Columns::new(&headers);
    let (adj_i, freq_i) = (cols.required(src, "adjective")?, cols.required(src, "freq_per_million")?);
    let nouns: Vec<(usize, (String, Polarity))> =
        headers.iter().enumerate().filter_map(|(i, h)| noun_label(h).map(|l| (i, l))).collect();
    if nouns.is_empty() {
        return Err(Error::parse(src, Some(1), "no noun columns"));
    }
    let (mut rows, mut counts, mut translit, mut uncertain) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for rec in rdr.records() {
        let rec = rec?;
        let r = rows.len();
        let freq = number(src, &rec, rec[freq_i].trim(), "frequency")?;
        rows.push(Entry::new(rec[adj_i].trim(), freq));
        let mut line = Vec::with_capacity(nouns.len());
        for (i, _) in &nouns {
            let cell = rec[*i].trim();
            let v = cell
                .parse::<u64>()
                .map_err(|_| Error::parse(src, line_of(&rec), format!("bad count `{cell}`")))?;
            line.push(v);
        }
        counts.push(line);
        translit.push(cols.get(&rec, "translit").to_string());
        for note in cols.get(&rec, "note").split(';').filter(|s| !s.is_empty()) {
            let noun = note
                .strip_prefix("uncertain:")
                .ok_or_else(|| Error::parse(src, line_of(&rec), format!("unknown note `{note}`")))?;
            let c = nouns
                .iter()
                .position(|(_, (n, _))| n == noun)
                .ok_or_else(|| Error::parse(src, line_of(&rec), format!("note names unknown noun `{noun}`")))?;
            uncertain.push((r, c));
        }
    }
    let m = CompatibilityMatrix::new(rows, nouns.into_iter().map(|(_, l)| l).collect(), counts)
        .map_err(|e| Error::parse(src, None, e.to_string()))?;
    Ok((m, translit, uncertain))
}

//! CSV and plain-text formats.
//!
//! Numbers are written with Rust's shortest round-trip formatting, so a file
//! read back reproduces the values bit for bit.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use zipfsem_core::baselines::TokenStream;
use zipfsem_core::covering::{Covering, Interval, LayerDiagnostics, Topology};
use zipfsem_core::mandelbrot::TrajectoryPoint;
use zipfsem_core::powerlaw::RankFrequencyTable;

use crate::error::{Error, Result};

pub const COVERING_HEADER: [&str; 4] = ["rank", "lo", "hi", "length"];
pub const LAYER_HEADER: [&str; 5] = ["k", "rho", "gap", "overlap", "length_sum"];
pub const TRAJECTORY_HEADER: [&str; 5] = ["iter", "C", "H", "Cstar", "n_changed"];

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w)
}

/// Write a header and rows of already formatted cells.
pub fn write_rows<W: Write, R, I>(w: W, header: &[&str], rows: R) -> Result<()>
where
    R: IntoIterator<Item = I>,
    I: IntoIterator<Item = String>,
{
    let mut wr = writer(w);
    wr.write_record(header)?;
    for row in rows {
        wr.write_record(row)?;
    }
    wr.flush()?;
    Ok(())
}

/// `rank,lo,hi,length`, one row per interval in rank order. A wrapping arc
/// has `hi < lo`.
pub fn write_covering<W: Write>(w: W, c: &Covering) -> Result<()> {
    write_rows(
        w,
        &COVERING_HEADER,
        c.intervals().iter().enumerate().map(|(i, iv)| {
            [(i + 1).to_string(), iv.lo.to_string(), iv.hi.to_string(), iv.length().to_string()]
        }),
    )
}

pub fn read_covering<R: Read>(r: R, topology: Topology) -> Result<Covering> {
    let mut rdr = csv::Reader::from_reader(r);
    check_header(rdr.headers()?, &COVERING_HEADER, "covering")?;
    let mut iv = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map(|p| p.line());
        let field = |i: usize| -> Result<f64> {
            rec[i].trim().parse().map_err(|_| Error::parse("covering", line, format!("bad number `{}`", &rec[i])))
        };
        let (lo, hi, len) = (field(1)?, field(2)?, field(3)?);
        // a full circle has lo == hi
        let interval = if hi < lo || (hi == lo && len > 0.5) {
            if topology == Topology::Linear {
                return Err(Error::parse("covering", line, "wrapping interval in a linear covering"));
            }
            Interval { lo, hi, wraps: true }
        } else {
            Interval::new(lo, hi).map_err(|e| Error::parse("covering", line, e.to_string()))?
        };
        iv.push(interval);
    }
    Ok(Covering::new(iv, topology)?)
}

pub fn write_layers<W: Write>(w: W, d: &LayerDiagnostics) -> Result<()> {
    write_rows(
        w,
        &LAYER_HEADER,
        d.rows.iter().map(|r| {
            [r.k.to_string(), r.rho.to_string(), r.gap.to_string(), r.overlap.to_string(), r.length_sum.to_string()]
        }),
    )
}

pub fn write_trajectory<W: Write>(w: W, t: &[TrajectoryPoint]) -> Result<()> {
    write_rows(
        w,
        &TRAJECTORY_HEADER,
        t.iter().map(|p| {
            [p.iter.to_string(), p.c.to_string(), p.h.to_string(), p.c_star.to_string(), p.n_changed.to_string()]
        }),
    )
}

/// `rank,frequency[,word]`.
pub fn write_rank_frequency<W: Write>(w: W, t: &RankFrequencyTable) -> Result<()> {
    let labels = t.labels();
    let header: &[&str] = if labels.is_some() { &["rank", "frequency", "word"] } else { &["rank", "frequency"] };
    write_rows(
        w,
        header,
        t.entries().map(|(k, f)| {
            let mut row = vec![k.to_string(), f.to_string()];
            if let Some(l) = labels {
                row.push(l[k - 1].clone());
            }
            row
        }),
    )
}

pub fn read_rank_frequency<R: Read>(r: R) -> Result<RankFrequencyTable> {
    let mut rdr = csv::Reader::from_reader(r);
    let headers = rdr.headers()?.clone();
    if headers.len() < 2 || &headers[0] != "rank" || &headers[1] != "frequency" {
        return Err(Error::parse("rank-frequency", Some(1), "expected header `rank,frequency[,word]`"));
    }
    let with_words = headers.get(2) == Some("word");
    let (mut freqs, mut words) = (Vec::new(), Vec::new());
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map(|p| p.line());
        let rank: usize =
            rec[0].trim().parse().map_err(|_| Error::parse("rank-frequency", line, "bad rank"))?;
        if rank != freqs.len() + 1 {
            return Err(Error::parse("rank-frequency", line, "ranks must be 1, 2, 3, ..."));
        }
        freqs.push(rec[1].trim().parse().map_err(|_| Error::parse("rank-frequency", line, "bad frequency"))?);
        if with_words {
            words.push(rec.get(2).unwrap_or("").to_string());
        }
    }
    let labels = if with_words { Some(words) } else { None };
    RankFrequencyTable::new(freqs, labels).map_err(|e| Error::parse("rank-frequency", None, e.to_string()))
}

/// Whitespace-separated words.
pub fn read_token_stream(path: &Path) -> Result<TokenStream> {
    let text = fs::read_to_string(path)?;
    Ok(TokenStream::from_words(text.split_whitespace()))
}

/// One line of space-separated tokens, newline every 20 words.
pub fn write_token_stream<W: Write>(mut w: W, s: &TokenStream) -> Result<()> {
    let mut buf = std::io::BufWriter::new(&mut w);
    for (i, t) in s.iter().enumerate() {
        let sep = if i == 0 {
            ""
        } else if i % 20 == 0 {
            "\n"
        } else {
            " "
        };
        write!(buf, "{sep}{t}")?;
    }
    if !s.is_empty() {
        writeln!(buf)?;
    }
    buf.flush()?;
    Ok(())
}

fn check_header(h: &csv::StringRecord, want: &[&str], what: &str) -> Result<()> {
    if h.iter().map(str::trim).eq(want.iter().copied()) {
        Ok(())
    } else {
        Err(Error::parse(what, Some(1), format!("expected header `{}`", want.join(","))))
    }
}

/// Create `path`'s parent directories and open it for writing.
pub fn create(path: &Path) -> Result<fs::File> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    Ok(fs::File::create(path)?)
}

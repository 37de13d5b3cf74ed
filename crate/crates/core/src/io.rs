//! Vector and band-payload file formats.
//!
//! Text vectors hold one decimal real per line with 17 significant digits.
//! Binary vectors are the magic `TTZVEC01`, a little-endian `u64` length and
//! that many little-endian binary64 values. Band files are the magic
//! `TTZBND01`, a header `a, b` (binary64) and `n, delta, bandwidth,
//! corrections` (`u64`), the band values, then the row-major correction block.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::inverse::CompressedInverse;

pub const VECTOR_MAGIC: &[u8; 8] = b"TTZVEC01";
pub const BAND_MAGIC: &[u8; 8] = b"TTZBND01";

/// Byte offset of the informational `n` field in a binary band file.
pub const BAND_N_OFFSET: usize = 8 + 8 + 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Binary,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "binary" => Ok(Format::Binary),
            other => Err(Error::InvalidOption(format!("unknown format {other:?}"))),
        }
    }
}

pub fn write_vector<W: Write>(mut w: W, values: &[f64], format: Format) -> Result<()> {
    match format {
        Format::Text => {
            for v in values {
                writeln!(w, "{v:.16e}")?;
            }
        }
        Format::Binary => {
            w.write_all(VECTOR_MAGIC)?;
            w.write_all(&(values.len() as u64).to_le_bytes())?;
            for v in values {
                w.write_all(&v.to_le_bytes())?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Reads either format; binary is recognised by its magic.
pub fn read_vector<R: Read>(r: R) -> Result<Vec<f64>> {
    let mut r = BufReader::new(r);
    let head = r.fill_buf()?;
    if head.starts_with(VECTOR_MAGIC) {
        read_binary_vector(r)
    } else {
        read_text_vector(r)
    }
}

fn read_binary_vector<R: Read>(mut r: R) -> Result<Vec<f64>> {
    let mut word = [0u8; 8];
    r.read_exact(&mut word)?;
    r.read_exact(&mut word)?;
    let len = u64::from_le_bytes(word);
    let len = usize::try_from(len).map_err(|_| Error::Format(format!("length {len} too large")))?;
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    if bytes.len() != len * 8 {
        return Err(Error::Format(format!(
            "header announces {len} values, payload holds {} bytes",
            bytes.len()
        )));
    }
    Ok(bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
        .collect())
}

fn read_text_vector<R: BufRead>(r: R) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (k, line) in r.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        out.push(
            t.parse::<f64>()
                .map_err(|e| Error::Format(format!("line {}: {e}: {t:?}", k + 1)))?,
        );
    }
    Ok(out)
}

pub fn write_vector_file(path: &Path, values: &[f64], format: Format) -> Result<()> {
    write_vector(BufWriter::new(fs::File::create(path)?), values, format)
}

pub fn read_vector_file(path: &Path) -> Result<Vec<f64>> {
    read_vector(fs::File::open(path)?)
}

/// Band payload of `inv` in the chosen format.
pub fn write_band<W: Write>(mut w: W, inv: &CompressedInverse, format: Format) -> Result<()> {
    let m = inv.matrix();
    let p = inv.profile();
    match format {
        Format::Binary => {
            w.write_all(BAND_MAGIC)?;
            w.write_all(&m.a().to_le_bytes())?;
            w.write_all(&m.b().to_le_bytes())?;
            for h in [inv.order(), p.delta as usize, p.bandwidth, p.corrections] {
                w.write_all(&(h as u64).to_le_bytes())?;
            }
            for v in inv.band_values().iter().chain(inv.correction_block()) {
                w.write_all(&v.to_le_bytes())?;
            }
        }
        Format::Text => {
            writeln!(w, "a={:.16e}", m.a())?;
            writeln!(w, "b={:.16e}", m.b())?;
            writeln!(w, "n={}", inv.order())?;
            writeln!(w, "delta={}", p.delta)?;
            writeln!(w, "bandwidth={}", p.bandwidth)?;
            writeln!(w, "corrections={}", p.corrections)?;
            for v in inv.band_values().iter().chain(inv.correction_block()) {
                writeln!(w, "{v:.16e}")?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Decoded binary band file.
#[derive(Debug, Clone, PartialEq)]
pub struct BandFile {
    pub a: f64,
    pub b: f64,
    pub n: u64,
    pub delta: u64,
    pub bandwidth: usize,
    pub corrections: usize,
    pub band_values: Vec<f64>,
    pub correction_block: Vec<f64>,
}

pub fn read_band<R: Read>(mut r: R) -> Result<BandFile> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes)?;
    if bytes.len() < 56 || &bytes[..8] != BAND_MAGIC {
        return Err(Error::Format("not a TTZBND01 band file".into()));
    }
    let word = |k: usize| -> [u8; 8] { bytes[8 + 8 * k..16 + 8 * k].try_into().expect("8 bytes") };
    let a = f64::from_le_bytes(word(0));
    let b = f64::from_le_bytes(word(1));
    let n = u64::from_le_bytes(word(2));
    let delta = u64::from_le_bytes(word(3));
    let bandwidth = u64::from_le_bytes(word(4)) as usize;
    let corrections = u64::from_le_bytes(word(5)) as usize;
    let payload = &bytes[56..];
    let expected = bandwidth
        .checked_add(corrections.saturating_mul(bandwidth))
        .and_then(|c| c.checked_mul(8));
    if expected != Some(payload.len()) {
        return Err(Error::Format("band payload length does not match header".into()));
    }
    let values: Vec<f64> = payload
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
        .collect();
    let (band, block) = values.split_at(bandwidth);
    Ok(BandFile {
        a,
        b,
        n,
        delta,
        bandwidth,
        corrections,
        band_values: band.to_vec(),
        correction_block: block.to_vec(),
    })
}

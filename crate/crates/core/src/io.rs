//! Series files and synthetic data.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::rng;
use crate::series::TimeSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum SeriesFormat {
    /// Packed little-endian `f64`s, no header.
    RawF64Le,
    /// Comma-separated values, read row by row, left to right.
    Csv,
    /// One value per line; blank lines are skipped.
    #[default]
    Text,
}

impl SeriesFormat {
    /// Guess from a file extension, falling back to text.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
            Some("bin" | "f64" | "raw") => SeriesFormat::RawF64Le,
            Some("csv") => SeriesFormat::Csv,
            _ => SeriesFormat::Text,
        }
    }
}

impl FromStr for SeriesFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "raw-f64-le" | "raw" => Ok(SeriesFormat::RawF64Le),
            "csv" => Ok(SeriesFormat::Csv),
            "text" | "txt" => Ok(SeriesFormat::Text),
            other => Err(Error::invalid(format!("unknown series format `{other}`"))),
        }
    }
}

impl fmt::Display for SeriesFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SeriesFormat::RawF64Le => "raw-f64-le",
            SeriesFormat::Csv => "csv",
            SeriesFormat::Text => "text",
        })
    }
}

fn parse_err(location: String, message: impl Into<String>) -> Error {
    Error::Parse { location, message: message.into() }
}

fn finite(v: f64, location: impl FnOnce() -> String) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(parse_err(location(), format!("non-finite value {v}")))
    }
}

/// Decode a series from bytes already in memory.
pub fn decode_series(bytes: &[u8], format: SeriesFormat) -> Result<Vec<f64>> {
    match format {
        SeriesFormat::RawF64Le => {
            if !bytes.len().is_multiple_of(8) {
                return Err(parse_err(
                    format!("byte offset {}", bytes.len() - bytes.len() % 8),
                    "trailing partial value",
                ));
            }
            bytes
                .chunks_exact(8)
                .enumerate()
                .map(|(i, c)| {
                    let v = f64::from_le_bytes(c.try_into().expect("chunk of 8"));
                    finite(v, || format!("byte offset {}", i * 8))
                })
                .collect()
        }
        SeriesFormat::Text => {
            let text = std::str::from_utf8(bytes).map_err(|e| parse_err("input".into(), e.to_string()))?;
            let mut out = Vec::new();
            for (i, line) in text.lines().enumerate() {
                let tok = line.trim();
                if tok.is_empty() {
                    continue;
                }
                let v: f64 =
                    tok.parse().map_err(|_| parse_err(format!("line {}", i + 1), format!("not a number: `{tok}`")))?;
                out.push(finite(v, || format!("line {}", i + 1))?);
            }
            Ok(out)
        }
        SeriesFormat::Csv => {
            let mut reader = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(bytes);
            let mut out = Vec::new();
            for (row, record) in reader.records().enumerate() {
                let record = record.map_err(|e| parse_err(format!("row {}", row + 1), e.to_string()))?;
                for (col, field) in record.iter().enumerate() {
                    let tok = field.trim();
                    if tok.is_empty() {
                        continue;
                    }
                    let at = || format!("row {}, column {}", row + 1, col + 1);
                    let v: f64 = tok.parse().map_err(|_| parse_err(at(), format!("not a number: `{tok}`")))?;
                    out.push(finite(v, at)?);
                }
            }
            Ok(out)
        }
    }
}

pub fn encode_series(values: &[f64], format: SeriesFormat) -> Vec<u8> {
    match format {
        SeriesFormat::RawF64Le => values.iter().flat_map(|v| v.to_le_bytes()).collect(),
        // `{}` on f64 prints the shortest string that parses back to the same bits
        SeriesFormat::Text | SeriesFormat::Csv => {
            values.iter().map(|v| format!("{v}\n")).collect::<String>().into_bytes()
        }
    }
}

pub fn load_series(path: impl AsRef<Path>, format: SeriesFormat) -> Result<TimeSeries<f64>> {
    let path = path.as_ref();
    let bytes = fs::read(path)?;
    let values = decode_series(&bytes, format).map_err(|e| match e {
        Error::Parse { location, message } => {
            Error::Parse { location: format!("{}: {location}", path.display()), message }
        }
        other => other,
    })?;
    Ok(TimeSeries::new(values).with_source(path.display().to_string()))
}

pub fn save_series(path: impl AsRef<Path>, values: &[f64], format: SeriesFormat) -> Result<()> {
    fs::write(path, encode_series(values, format))?;
    Ok(())
}

/// Gaussian random walk: t₁ = g₁, tᵢ = tᵢ₋₁ + gᵢ with gᵢ ~ N(0, 1).
pub fn gen_random_walk(m: usize, seed: u64) -> Result<TimeSeries<f64>> {
    random_walk_stream(m, seed, rng::SERIES_STREAM)
}

/// [`gen_random_walk`] drawn from an explicit stream of the seed, so a query
/// and a series generated from one seed stay independent.
pub fn random_walk_stream(m: usize, seed: u64, stream: u64) -> Result<TimeSeries<f64>> {
    if m == 0 {
        return Err(Error::invalid("random walk length must be at least 1"));
    }
    let mut rng = rng::generator(seed, stream);
    let mut acc = 0.0;
    let values = (0..m)
        .map(|_| {
            let g: f64 = StandardNormal.sample(&mut rng);
            acc += g;
            acc
        })
        .collect();
    Ok(TimeSeries::new(values).with_source(format!("random-walk(m={m}, seed={seed}, stream={stream})")))
}

/// Overwrite `series[at..at + pattern.len()]` (1-based `at`) with `pattern`
/// plus uniform noise in `[-amplitude, amplitude]` drawn from the noise stream.
pub fn plant_pattern(series: &mut [f64], pattern: &[f64], at: usize, amplitude: f64, seed: u64) -> Result<()> {
    if at == 0 || at - 1 + pattern.len() > series.len() {
        return Err(Error::invalid(format!(
            "pattern of length {} does not fit at position {at} of a series of length {}",
            pattern.len(),
            series.len()
        )));
    }
    if !(amplitude >= 0.0 && amplitude.is_finite()) {
        return Err(Error::invalid("noise amplitude must be finite and non-negative"));
    }
    let mut rng = rng::generator(seed, rng::NOISE_STREAM);
    for (dst, &v) in series[at - 1..].iter_mut().zip(pattern) {
        let e = if amplitude > 0.0 { rng.gen_range(-amplitude..=amplitude) } else { 0.0 };
        *dst = v + e;
    }
    Ok(())
}

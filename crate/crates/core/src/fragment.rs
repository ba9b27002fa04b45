//! Overlapping partition of a series into F fragments.
//!
//! With N = m − n + 1 subsequences, fragment k starts at k·⌊N/F⌋ + 1 and
//! carries n − 1 extra trailing samples so the subsequences starting near
//! its end are complete. The last fragment also takes the N mod F leftovers.
//! Every subsequence start belongs to exactly one fragment.

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FragmentSpec {
    pub id: usize,
    /// 1-based position of the first sample.
    pub start: u64,
    /// Samples in the fragment, overlap included.
    pub len: usize,
}

impl FragmentSpec {
    /// Number of subsequences owned.
    pub fn rows(&self, n: usize) -> usize {
        self.len + 1 - n
    }

    /// Global start positions this fragment owns.
    pub fn owned(&self, n: usize) -> RangeInclusive<u64> {
        self.start..=self.start + self.rows(n) as u64 - 1
    }

    /// 0-based sample range inside the full series.
    pub fn sample_range(&self) -> std::ops::Range<usize> {
        let lo = self.start as usize - 1;
        lo..lo + self.len
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FragmentPlan {
    pub m: usize,
    pub n: usize,
    pub fragments: Vec<FragmentSpec>,
}

pub fn partition_overlap(m: usize, n: usize, fragments: usize) -> Result<FragmentPlan> {
    if n == 0 {
        return Err(Error::invalid("query length must be at least 1"));
    }
    if fragments == 0 {
        return Err(Error::invalid("fragment count must be at least 1"));
    }
    if m < n {
        return Err(Error::SeriesTooShort { len: m, n });
    }
    let total = m - n + 1;
    if fragments > total {
        return Err(Error::invalid(format!(
            "{fragments} fragments for {total} subsequences would leave some fragment empty"
        )));
    }
    let base = total / fragments;
    let extra = total % fragments;
    let specs = (0..fragments)
        .map(|k| {
            let owned = if k == fragments - 1 { base + extra } else { base };
            FragmentSpec { id: k, start: (k * base) as u64 + 1, len: owned + n - 1 }
        })
        .collect();
    Ok(FragmentPlan { m, n, fragments: specs })
}

impl FragmentPlan {
    pub fn subsequences(&self) -> usize {
        self.m - self.n + 1
    }

    pub fn len(&self) -> usize {
        self.fragments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fragments.is_empty()
    }

    /// Global start of local row `row` (1-based) of fragment `k`.
    pub fn to_global_index(&self, k: usize, row: usize) -> Result<u64> {
        let spec = self
            .fragments
            .get(k)
            .ok_or_else(|| Error::invalid(format!("no fragment {k} in a plan of {}", self.len())))?;
        if row == 0 || row > spec.rows(self.n) {
            return Err(Error::invalid(format!("row {row} outside fragment {k} (1..={})", spec.rows(self.n))));
        }
        Ok(spec.start + row as u64 - 1)
    }

    /// Owning fragment and its 1-based local row for a global start position.
    pub fn locate(&self, global: u64) -> Option<(usize, usize)> {
        self.fragments
            .iter()
            .find_map(|f| f.owned(self.n).contains(&global).then(|| (f.id, (global - f.start) as usize + 1)))
    }

    /// Tab-separated manifest, one fragment per line. `elem_size` is the
    /// on-disk bytes per sample used for the byte offsets.
    pub fn to_manifest(&self, elem_size: usize) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# m={} n={} fragments={}", self.m, self.n, self.len());
        let _ = writeln!(out, "# id\tstart\tlen\tbyte_offset\telements");
        for f in &self.fragments {
            let offset = (f.start - 1) * elem_size as u64;
            let _ = writeln!(out, "{}\t{}\t{}\t{}\t{}", f.id, f.start, f.len, offset, f.len);
        }
        out
    }

    pub fn from_manifest(text: &str) -> Result<Self> {
        let bad =
            |line: usize, msg: &str| Error::Parse { location: format!("manifest line {line}"), message: msg.into() };
        let mut header: Option<(usize, usize)> = None;
        let mut fragments = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let mut m = None;
                let mut n = None;
                for tok in rest.split_whitespace() {
                    if let Some(v) = tok.strip_prefix("m=") {
                        m = v.parse().ok();
                    } else if let Some(v) = tok.strip_prefix("n=") {
                        n = v.parse().ok();
                    }
                }
                if let (Some(m), Some(n)) = (m, n) {
                    header = Some((m, n));
                }
                continue;
            }
            let cols: Vec<u64> = line
                .split('\t')
                .map(|c| c.trim().parse::<u64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| bad(line_no, "expected five integer columns"))?;
            if cols.len() != 5 {
                return Err(bad(line_no, "expected five integer columns"));
            }
            fragments.push(FragmentSpec { id: cols[0] as usize, start: cols[1], len: cols[2] as usize });
        }
        let (m, n) = header.ok_or_else(|| bad(1, "missing `# m=.. n=..` header"))?;
        Ok(Self { m, n, fragments })
    }
}

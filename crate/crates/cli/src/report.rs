//! What the commands print.

use std::fmt;

use serde::Serialize;

/// One search result. Field order is the JSON key order; `wall_ms` is the
/// only timing field.
#[derive(Debug, Clone, Serialize)]
pub struct SearchReport {
    pub index: u64,
    pub distance_squared: f64,
    pub m: usize,
    pub n: usize,
    pub r: usize,
    pub fragments: usize,
    pub threads: usize,
    pub segment: usize,
    pub width: usize,
    pub seed: u64,
    pub early_abandon: bool,
    pub transport: &'static str,
    pub rows: u64,
    pub dtw_evals: u64,
    pub pruning_ratio: f64,
    pub rounds: u64,
    pub wall_ms: f64,
}

impl fmt::Display for SearchReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "best match     index {} (1-based), squared DTW distance {}", self.index, self.distance_squared)?;
        writeln!(f, "input          m={} n={} r={}", self.m, self.n, self.r)?;
        writeln!(
            f,
            "run            fragments={} ({}) threads={} segment={} width={} seed={}",
            self.fragments, self.transport, self.threads, self.segment, self.width, self.seed
        )?;
        writeln!(
            f,
            "pruning        {} DTW evaluations over {} rows, ratio {:.4}, {} rounds",
            self.dtw_evals, self.rows, self.pruning_ratio, self.rounds
        )?;
        write!(f, "wall time      {:.3} ms", self.wall_ms)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PathResult {
    pub path: &'static str,
    pub index: u64,
    pub distance_squared: f64,
    pub agrees: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub agree: bool,
    pub m: usize,
    pub n: usize,
    pub r: usize,
    pub fragments: usize,
    pub threads: usize,
    pub paths: Vec<PathResult>,
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "m={} n={} r={} fragments={} threads={}", self.m, self.n, self.r, self.fragments, self.threads)?;
        for p in &self.paths {
            let mark = if p.agrees { "ok" } else { "MISMATCH" };
            writeln!(f, "{:<12} index {:>10}  distance {:<24} {mark}", p.path, p.index, p.distance_squared)?;
        }
        write!(f, "{}", if self.agree { "all paths agree" } else { "paths disagree" })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub r: usize,
    pub threads: usize,
    pub wall_ms: f64,
    pub speedup: f64,
    pub efficiency: f64,
    pub dtw_evals: u64,
    pub pruning_ratio: f64,
    pub index: u64,
    pub distance_squared: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoordinateReport {
    pub index: u64,
    pub distance_squared: f64,
    pub workers: usize,
    pub rounds: u32,
    pub wall_ms: f64,
}

impl fmt::Display for CoordinateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "best match     index {}, squared DTW distance {}", self.index, self.distance_squared)?;
        write!(f, "cluster        {} workers, {} reductions, {:.3} ms", self.workers, self.rounds, self.wall_ms)
    }
}

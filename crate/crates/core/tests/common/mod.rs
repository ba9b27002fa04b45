//! Oracles shared by the integration suites. Written without touching the
//! crate's kernels so they stay independent of the code under test.
#![allow(dead_code)]

use subseq_dtw::io::{gen_random_walk, random_walk_stream};

pub fn znorm(x: &[f64]) -> Vec<f64> {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let sd = (x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
    if x.iter().all(|&v| v == x[0]) || sd < 1e-12 {
        return vec![0.0; x.len()];
    }
    x.iter().map(|v| (v - mean) / sd).collect()
}

/// Full (n+1)² cost table with the band applied as a mask.
pub fn dtw_full(x: &[f64], y: &[f64], r: usize) -> f64 {
    let n = x.len();
    let mut d = vec![vec![f64::INFINITY; n + 1]; n + 1];
    d[0][0] = 0.0;
    for i in 1..=n {
        for j in 1..=n {
            if i.abs_diff(j) <= r {
                let m = d[i - 1][j].min(d[i][j - 1]).min(d[i - 1][j - 1]);
                d[i][j] = (x[i - 1] - y[j - 1]).powi(2) + m;
            }
        }
    }
    d[n][n]
}

/// Exhaustive scan with the full-table DP. Returns (distance, 1-based index).
pub fn naive_best(series: &[f64], query: &[f64], r: usize) -> (f64, u64) {
    let n = query.len();
    let q = znorm(query);
    let mut best = (f64::INFINITY, 0u64);
    for i in 0..=series.len() - n {
        let d = dtw_full(&q, &znorm(&series[i..i + n]), r);
        if d < best.0 {
            best = (d, i as u64 + 1);
        }
    }
    best
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    a == b || (a - b).abs() <= tol * a.abs().max(b.abs())
}

/// Random-walk series and an independent random-walk query.
pub fn instance(m: usize, n: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let series = gen_random_walk(m, seed).unwrap().into_values();
    let query = random_walk_stream(n, seed, 1).unwrap().into_values();
    (series, query)
}

/// Tiny deterministic generator for test inputs (SplitMix64).
pub struct Mix(pub u64);

impl Mix {
    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn below(&mut self, k: usize) -> usize {
        (self.next_u64() % k as u64) as usize
    }
}

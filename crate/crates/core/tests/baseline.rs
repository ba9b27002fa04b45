mod common;

use common::{dtw_full, instance, naive_best, rel_close, znorm};
use subseq_dtw::math::{dtw_banded, znormalize, BandRadius};
use subseq_dtw::{brute_force_search, ucr_dtw_search, Error, SearchParams};

#[test]
fn brute_force_agrees_with_full_table_oracle() {
    for seed in 0..20u64 {
        let n = [8, 16, 24, 32][seed as usize % 4];
        let r = [0, 2, n / 2, n][seed as usize % 4];
        let (series, query) = instance(400, n, seed);
        let got = brute_force_search(&series, &query, BandRadius::new(r), 1e-12).unwrap();
        let (d, i) = naive_best(&series, &query, r);
        assert_eq!(got.index, i, "seed {seed}");
        assert!(rel_close(got.distance, d, 1e-9), "seed {seed}: {} vs {d}", got.distance);
    }
}

#[test]
fn ucr_matches_brute_force() {
    for k in 0..50u64 {
        let n = if k % 2 == 0 { 64 } else { 128 };
        let r = [0, n / 4, n][(k / 2) as usize % 3];
        let (series, query) = instance(10_000, n, 1000 + k);
        let mut params = SearchParams::new(BandRadius::new(r));
        params.early_abandon = k % 5 != 0;
        let (ucr, stats) = ucr_dtw_search(&series, &query, &params).unwrap();
        let brute = brute_force_search(&series, &query, BandRadius::new(r), 1e-12).unwrap();
        assert_eq!(ucr.index, brute.index, "instance {k}");
        assert!(rel_close(ucr.distance, brute.distance, 1e-9));
        assert_eq!(stats.total(), (series.len() - n + 1) as u64);
    }
}

#[test]
fn cascade_is_lazy() {
    let (series, query) = instance(5_000, 64, 7);
    for order in ["kim,ec,eq", "eq,ec,kim", "ec,kim,eq"] {
        let mut params = SearchParams::new(BandRadius::new(8));
        params.cascade = order.parse().unwrap();
        let (_, s) = ucr_dtw_search(&series, &query, &params).unwrap();
        let rows = (series.len() - 63) as u64;
        assert_eq!(s.computed[0], rows);
        assert_eq!(s.computed[1], rows - s.rejected[0]);
        assert_eq!(s.computed[2], rows - s.rejected[0] - s.rejected[1]);
        assert_eq!(s.dtw_evals, rows - s.rejected.iter().sum::<u64>());
        assert!(s.dtw_evals < rows);
    }
}

#[test]
fn verbatim_query_found_at_first_occurrence() {
    let (mut series, _) = instance(3_000, 50, 3);
    let q: Vec<f64> = series[1200..1250].to_vec();
    // a second, shifted-and-scaled copy later on normalizes identically
    for (k, v) in q.iter().enumerate() {
        series[2500 + k] = 3.0 * v + 10.0;
    }
    let params = SearchParams::new(BandRadius::new(5));
    let (found, _) = ucr_dtw_search(&series, &q, &params).unwrap();
    assert_eq!(found.index, 1201);
    assert!(found.distance < 1e-20);
    let brute = brute_force_search(&series, &q, BandRadius::new(5), 1e-12).unwrap();
    assert_eq!(brute.index, 1201);
}

#[test]
fn single_candidate_and_constant_series() {
    let (series, query) = instance(32, 32, 1);
    let got = brute_force_search(&series, &query, BandRadius::new(4), 1e-12).unwrap();
    assert_eq!(got.index, 1);
    let expect = dtw_full(&znorm(&query), &znorm(&series), 4);
    assert!(rel_close(got.distance, expect, 1e-12));

    let flat = vec![2.5; 200];
    let got = brute_force_search(&flat, &query[..16], BandRadius::new(3), 1e-12).unwrap();
    assert_eq!(got.index, 1);
    let zq = znormalize(&query[..16], 1e-12, 1).unwrap();
    let zero = znormalize(&[0.0; 16], 1e-12, 1).unwrap();
    let d = dtw_banded(&zq, &zero, BandRadius::new(3), f64::INFINITY).unwrap().unwrap();
    assert_eq!(got.distance, d);
    let (ucr, _) = ucr_dtw_search(&flat, &query[..16], &SearchParams::new(BandRadius::new(3))).unwrap();
    assert_eq!(ucr, got);
}

#[test]
fn short_series_is_an_error() {
    let (series, query) = instance(10, 20, 1);
    assert!(matches!(
        brute_force_search(&series, &query, BandRadius::new(2), 1e-12),
        Err(Error::SeriesTooShort { len: 10, n: 20 })
    ));
    assert!(ucr_dtw_search(&series, &query, &SearchParams::new(BandRadius::new(2))).is_err());
}

mod common;

use common::{instance, naive_best, rel_close, Mix};
use proptest::prelude::*;
use subseq_dtw::math::BandRadius;
use subseq_dtw::{brute_force_search, local_best_match, Error, Fragment, NodeState, SearchParams};

fn params(r: usize) -> SearchParams {
    SearchParams::new(BandRadius::new(r))
}

#[test]
fn matches_full_table_oracle() {
    let (series, query) = instance(1000, 64, 11);
    let (got, stats) = local_best_match(Fragment::whole(&series), &query, &params(16)).unwrap();
    let (d, i) = naive_best(&series, &query, 16);
    assert_eq!(got.index, i);
    assert!(rel_close(got.distance, d, 1e-9));
    assert_eq!(stats.rows, 937);
    assert!(stats.dtw_evals <= stats.rows);
}

#[test]
fn matches_brute_force_on_random_instances() {
    for k in 0..30u64 {
        let n = [32, 64, 128][k as usize % 3];
        let r = [0, n / 10, n / 2, n][(k / 3) as usize % 4];
        let (series, query) = instance(5000, n, 500 + k);
        let mut p = params(r);
        p.lanes = 1 + (k as usize % 3);
        p.segment = [1, 7, 100][(k / 2) as usize % 3];
        let (got, _) = local_best_match(Fragment::whole(&series), &query, &p).unwrap();
        let brute = brute_force_search(&series, &query, BandRadius::new(r), 1e-12).unwrap();
        assert_eq!(got.index, brute.index, "instance {k}");
        assert!(rel_close(got.distance, brute.distance, 1e-9));
    }
}

#[test]
fn result_independent_of_tuning_knobs() {
    let (series, query) = instance(4000, 48, 77);
    let base = local_best_match(Fragment::whole(&series), &query, &params(6)).unwrap().0;
    let mut rng = Mix(5);
    for _ in 0..24 {
        let mut p = params(6);
        p.lanes = 1 + rng.below(4);
        p.segment = 1 + rng.below(300);
        p.width = [1, 4, 8, 16][rng.below(4)];
        p.seed = rng.next_u64();
        p.early_abandon = rng.below(2) == 0;
        p.cascade = ["kim,ec,eq", "eq,kim,ec", "ec,eq,kim"][rng.below(3)].parse().unwrap();
        let got = local_best_match(Fragment::whole(&series), &query, &p).unwrap().0;
        assert_eq!(got.index, base.index, "{p:?}");
        assert!(rel_close(got.distance, base.distance, 1e-12));
    }
}

#[test]
fn prepare_and_rounds_are_deterministic() {
    let (series, query) = instance(3000, 32, 9);
    let mut p = params(4);
    p.lanes = 3;
    p.segment = 20;
    let run = || {
        let mut st = NodeState::prepare(Fragment::whole(&series), &query, &p, 16).unwrap();
        let mut trace = vec![(st.seed_index(), st.best())];
        loop {
            let rep = st.improve_round();
            if rep.done {
                break;
            }
            trace.push((0, st.best()));
        }
        (trace, st.stats())
    };
    assert_eq!(run(), run());
}

#[test]
fn threshold_never_increases_and_work_is_bounded() {
    let (series, query) = instance(6000, 64, 21);
    let mut p = params(8);
    p.lanes = 2;
    p.segment = 50;
    let mut st = NodeState::prepare(Fragment::whole(&series), &query, &p, 16).unwrap();
    let rows = st.remaining();
    let per_round = 2 * 50;
    let mut last = st.best().distance;
    let mut rounds = 0;
    loop {
        let before = st.remaining();
        let rep = st.improve_round();
        assert!(rep.bsf <= last);
        assert!(rep.evaluated <= per_round);
        assert!(st.remaining() < before || rep.done);
        last = rep.bsf;
        if rep.done {
            break;
        }
        rounds += 1;
    }
    assert!(st.is_exhausted());
    assert!(rounds <= rows.div_ceil(per_round));
    assert!(st.stats().dtw_evals <= rows as u64);
    let brute = brute_force_search(&series, &query, BandRadius::new(8), 1e-12).unwrap();
    assert_eq!(st.best().index, brute.index);
}

#[test]
fn adopted_champion_is_kept_when_better() {
    let (series, query) = instance(2000, 32, 4);
    let mut st = NodeState::prepare(Fragment::whole(&series), &query, &params(4), 16).unwrap();
    let own = st.run_to_completion();
    st.adopt(subseq_dtw::MatchResult::new(own.distance * 2.0, 1));
    assert_eq!(st.best(), own);
    st.adopt(subseq_dtw::MatchResult::new(0.0, 999_999));
    assert_eq!(st.best().index, 999_999);
}

#[test]
fn corrupted_bound_hides_the_best_row() {
    let (series, query) = instance(2000, 32, 8);
    let truth = brute_force_search(&series, &query, BandRadius::new(4), 1e-12).unwrap();
    let mut st = NodeState::prepare(Fragment::whole(&series), &query, &params(4), 16).unwrap();
    st.corrupt_lower_bound(truth.index);
    assert_ne!(st.run_to_completion().index, truth.index);
}

#[test]
fn constant_series_reports_first_row() {
    let flat = vec![-1.25; 500];
    let (_, query) = instance(10, 40, 2);
    let mut p = params(5);
    p.lanes = 3;
    p.segment = 9;
    let (got, _) = local_best_match(Fragment::whole(&flat), &query, &p).unwrap();
    assert_eq!(got.index, 1);
}

#[test]
fn fragment_offsets_are_global() {
    let (series, query) = instance(3000, 32, 12);
    let truth = brute_force_search(&series, &query, BandRadius::new(3), 1e-12).unwrap();
    let lo = (truth.index as usize - 1).saturating_sub(100).min(3000 - 400);
    let frag = Fragment { start: lo as u64 + 1, values: &series[lo..lo + 400] };
    let (got, _) = local_best_match(frag, &query, &params(3)).unwrap();
    assert_eq!(got.index, truth.index);
}

#[test]
fn float32_agrees_on_index() {
    let (series, query) = instance(3000, 64, 30);
    let s32: Vec<f32> = series.iter().map(|&v| v as f32).collect();
    let q32: Vec<f32> = query.iter().map(|&v| v as f32).collect();
    let mut p = params(8);
    p.epsilon = 1e-6;
    let (a, _) = local_best_match(Fragment::whole(&s32), &q32, &p).unwrap();
    let b = brute_force_search(&s32, &q32, BandRadius::new(8), 1e-6).unwrap();
    assert_eq!(a, b);
}

#[test]
fn invalid_inputs() {
    let (series, query) = instance(100, 32, 1);
    let mut p = params(3);
    p.lanes = 0;
    assert!(matches!(local_best_match(Fragment::whole(&series), &query, &p), Err(Error::InvalidArgument(_))));
    assert!(matches!(
        local_best_match(Fragment::whole(&series[..20]), &query, &params(3)),
        Err(Error::SeriesTooShort { .. })
    ));
    let mut bad = query.clone();
    bad[3] = f64::NAN;
    assert!(local_best_match(Fragment::whole(&series), &bad, &params(3)).is_err());
    let mut p = params(3);
    p.memory_budget = Some(1024);
    assert!(matches!(local_best_match(Fragment::whole(&series), &query, &p), Err(Error::MemoryBudget { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn never_misses_the_brute_force_answer(
        seed in any::<u64>(),
        m in 40usize..400,
        n in 2usize..40,
        r in 0usize..40,
        lanes in 1usize..4,
        segment in 1usize..50,
    ) {
        prop_assume!(n <= m);
        let (series, query) = instance(m, n, seed);
        let mut p = params(r);
        p.lanes = lanes;
        p.segment = segment;
        p.seed = seed;
        let (got, _) = local_best_match(Fragment::whole(&series), &query, &p).unwrap();
        let brute = brute_force_search(&series, &query, BandRadius::new(r), 1e-12).unwrap();
        prop_assert_eq!(got.index, brute.index);
        prop_assert!(rel_close(got.distance, brute.distance, 1e-9));
    }
}

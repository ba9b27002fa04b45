use std::fs::File;
use std::io::{self, Write};
use std::path::Path;
use std::time::{Duration, Instant};

use serde::Serialize;
use subseq_dtw::comms::{run_worker, Coordinator, TcpReducer};
use subseq_dtw::io::{load_series, plant_pattern, random_walk_stream, save_series, SeriesFormat};
use subseq_dtw::{
    brute_force_search, local_best_match, partition_overlap, rng, run_distributed, ucr_dtw_search, BandRadius,
    ClusterConfig, Error, Fragment, MatchResult, NodeState, SearchParams, SearchStats, Transport,
};

use crate::config::*;
use crate::report::*;

const DEFAULT_N: usize = 128;
const ELEMENT_BYTES: usize = 8;

/// Why a command failed; each kind has its own exit status.
#[derive(Debug)]
pub enum Failure {
    Config(String),
    Transport(String),
    Mismatch(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Transport(_) => 3,
            Failure::Mismatch(_) => 4,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Config(m) | Failure::Transport(m) | Failure::Mismatch(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_transport() {
            Failure::Transport(e.to_string())
        } else {
            Failure::Config(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn config(msg: impl Into<String>) -> Failure {
    Failure::Config(msg.into())
}

fn format_for(path: &Path, format: Option<SeriesFormat>) -> SeriesFormat {
    format.unwrap_or_else(|| SeriesFormat::from_path(path))
}

fn timeout(secs: f64) -> Result<Duration, Failure> {
    Duration::try_from_secs_f64(secs).map_err(|_| config(format!("bad timeout {secs}")))
}

struct Inputs {
    series: Vec<f64>,
    query: Vec<f64>,
}

fn load_inputs(args: &InputArgs) -> Result<Inputs, Failure> {
    let series = match &args.series {
        Some(p) => load_series(p, format_for(p, args.format))?.into_values(),
        None => random_walk_stream(args.m, args.seed, rng::SERIES_STREAM)?.into_values(),
    };
    let query = match &args.query {
        Some(p) => {
            let q = load_series(p, format_for(p, args.format))?.into_values();
            if let Some(n) = args.n.filter(|&n| n != q.len()) {
                return Err(config(format!("--n {n} does not match the query file length {}", q.len())));
            }
            q
        }
        None => random_walk_stream(args.n.unwrap_or(DEFAULT_N), args.seed, rng::QUERY_STREAM)?.into_values(),
    };
    if query.is_empty() {
        return Err(config("query is empty"));
    }
    if series.len() < query.len() {
        return Err(config(format!("series length {} is shorter than the query length {}", series.len(), query.len())));
    }
    Ok(Inputs { series, query })
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn search_params(t: &TuningArgs, n: usize, seed: u64) -> Result<SearchParams, Failure> {
    let mut p = SearchParams::new(BandRadius::new(t.r.resolve(n)));
    p.lanes = t.threads.unwrap_or_else(default_threads);
    p.segment = t.segment;
    p.width = t.width;
    p.seed = seed;
    p.early_abandon = t.early_abandon;
    p.epsilon = t.epsilon;
    if let Some(c) = &t.cascade {
        p.cascade = *c;
    }
    p.memory_budget = t.memory_budget;
    p.validate()?;
    Ok(p)
}

fn transport(c: &ClusterArgs) -> Transport {
    match c.transport {
        TransportKind::Inproc => Transport::InProcess,
        TransportKind::Tcp => Transport::Tcp { bind: c.coordinator },
    }
}

fn cluster_config(c: &ClusterArgs) -> Result<ClusterConfig, Failure> {
    let mut cfg = ClusterConfig::new(c.fragments, transport(c));
    cfg.timeout = timeout(c.timeout)?;
    cfg.rounds_per_reduction = c.rounds_per_reduction;
    Ok(cfg)
}

fn emit<T: Serialize + std::fmt::Display>(value: &T, output: OutputKind) -> Outcome {
    let mut out = io::stdout().lock();
    match output {
        OutputKind::Human => writeln!(out, "{value}")?,
        OutputKind::Json => {
            serde_json::to_writer(&mut out, value).map_err(|e| config(e.to_string()))?;
            writeln!(out)?;
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn search_report(
    series_len: usize,
    n: usize,
    p: &SearchParams,
    fragments: usize,
    transport: &'static str,
    result: MatchResult<f64>,
    stats: SearchStats,
    wall: Duration,
) -> SearchReport {
    SearchReport {
        index: result.index,
        distance_squared: result.distance,
        m: series_len,
        n,
        r: p.radius.get(),
        fragments,
        threads: p.lanes,
        segment: p.segment,
        width: p.width,
        seed: p.seed,
        early_abandon: p.early_abandon,
        transport,
        rows: stats.rows,
        dtw_evals: stats.dtw_evals,
        pruning_ratio: stats.pruning_ratio(),
        rounds: stats.rounds,
        wall_ms: wall.as_secs_f64() * 1e3,
    }
}

fn transport_name(c: &ClusterArgs) -> &'static str {
    match c.transport {
        TransportKind::Inproc => "inproc",
        TransportKind::Tcp => "tcp",
    }
}

pub fn search(args: &SearchArgs) -> Outcome {
    let inputs = load_inputs(&args.input)?;
    let n = inputs.query.len();
    let p = search_params(&args.tuning, n, args.input.seed)?;
    let started = Instant::now();
    let (result, stats) = if args.cluster.fragments == 1 && args.cluster.transport == TransportKind::Inproc {
        local_best_match(Fragment::whole(&inputs.series), &inputs.query, &p)?
    } else {
        let out = run_distributed(&inputs.series, &inputs.query, &p, &cluster_config(&args.cluster)?)?;
        (out.result, out.stats)
    };
    let report = search_report(
        inputs.series.len(),
        n,
        &p,
        args.cluster.fragments,
        transport_name(&args.cluster),
        result,
        stats,
        started.elapsed(),
    );
    emit(&report, args.output)
}

fn agrees(a: MatchResult<f64>, b: MatchResult<f64>) -> bool {
    let scale = a.distance.abs().max(b.distance.abs());
    a.index == b.index && (a.distance == b.distance || (a.distance - b.distance).abs() <= 1e-9 * scale)
}

pub fn verify(args: &VerifyArgs) -> Outcome {
    let s = &args.search;
    let inputs = load_inputs(&s.input)?;
    let n = inputs.query.len();
    let p = search_params(&s.tuning, n, s.input.seed)?;
    let (series, query) = (&inputs.series[..], &inputs.query[..]);

    let brute = brute_force_search(series, query, p.radius, p.epsilon)?;
    let (ucr, _) = ucr_dtw_search(series, query, &p)?;
    let mut node = NodeState::prepare(Fragment::whole(series), query, &p, rng::worker_stream(0))?;
    if args.inject_fault {
        node.corrupt_lower_bound(brute.index);
    }
    let local = node.run_to_completion();
    let dist = run_distributed(series, query, &p, &cluster_config(&s.cluster)?)?.result;

    let paths: Vec<PathResult> = [("brute-force", brute), ("ucr-dtw", ucr), ("local", local), ("distributed", dist)]
        .into_iter()
        .map(|(path, r)| PathResult { path, index: r.index, distance_squared: r.distance, agrees: agrees(r, brute) })
        .collect();
    let report = VerifyReport {
        agree: paths.iter().all(|p| p.agrees),
        m: series.len(),
        n,
        r: p.radius.get(),
        fragments: s.cluster.fragments,
        threads: p.lanes,
        paths,
    };
    emit(&report, s.output)?;
    if report.agree {
        Ok(())
    } else {
        Err(Failure::Mismatch("search paths disagree".into()))
    }
}

pub fn bench(args: &BenchArgs) -> Outcome {
    if args.sweep_threads.is_empty() || args.sweep_threads.contains(&0) {
        return Err(config("--sweep-threads needs positive thread counts"));
    }
    if args.repeat == 0 {
        return Err(config("--repeat must be at least 1"));
    }
    let lengths = match (&args.input.query, args.sweep_n.is_empty()) {
        (Some(_), false) => return Err(config("--sweep-n cannot be combined with --query")),
        (Some(_), true) => vec![None],
        (None, true) => vec![Some(args.input.n.unwrap_or(DEFAULT_N))],
        (None, false) => args.sweep_n.iter().map(|&n| Some(n)).collect(),
    };
    let mut rows = Vec::new();
    for len in lengths {
        let mut input = args.input.clone();
        input.n = len.or(input.n);
        let inputs = load_inputs(&input)?;
        let n = inputs.query.len();
        for &r in &args.sweep_r {
            let mut tuning = args.tuning.clone();
            tuning.r = r;
            let mut timed = |lanes: usize| -> Result<(f64, MatchResult<f64>, SearchStats), Failure> {
                tuning.threads = Some(lanes);
                let p = search_params(&tuning, n, input.seed)?;
                let mut best_ms = f64::INFINITY;
                let mut last = None;
                for _ in 0..args.repeat {
                    let started = Instant::now();
                    let out = local_best_match(Fragment::whole(&inputs.series), &inputs.query, &p)?;
                    best_ms = best_ms.min(started.elapsed().as_secs_f64() * 1e3);
                    last = Some(out);
                }
                let (res, stats) = last.expect("repeat is at least 1");
                Ok((best_ms, res, stats))
            };
            let base = timed(1)?;
            for &lanes in &args.sweep_threads {
                let (ms, res, stats) = if lanes == 1 { base } else { timed(lanes)? };
                let speedup = base.0 / ms;
                rows.push(BenchRow {
                    n,
                    r: r.resolve(n),
                    threads: lanes,
                    wall_ms: ms,
                    speedup,
                    efficiency: speedup / lanes as f64,
                    dtw_evals: stats.dtw_evals,
                    pruning_ratio: stats.pruning_ratio(),
                    index: res.index,
                    distance_squared: res.distance,
                });
            }
        }
    }
    let sink: Box<dyn Write> = match &args.csv {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    let mut w = csv::Writer::from_writer(sink);
    for row in &rows {
        w.serialize(row).map_err(|e| config(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

pub fn generate(args: &GenerateArgs) -> Outcome {
    let mut series = random_walk_stream(args.m, args.seed, rng::SERIES_STREAM)?.into_values();
    if let Some(path) = &args.query_out {
        let query = random_walk_stream(args.n, args.seed, rng::QUERY_STREAM)?.into_values();
        if let Some(at) = args.plant_at {
            plant_pattern(&mut series, &query, at, args.noise, args.seed)?;
        }
        save_series(path, &query, format_for(path, args.format))?;
    }
    save_series(&args.out, &series, format_for(&args.out, args.format))?;
    Ok(())
}

pub fn partition(args: &PartitionArgs) -> Outcome {
    let m = match &args.series {
        Some(p) => load_series(p, format_for(p, args.format))?.len(),
        None => args.m,
    };
    let plan = partition_overlap(m, args.n, args.fragments)?;
    print!("{}", plan.to_manifest(ELEMENT_BYTES));
    Ok(())
}

pub fn worker(args: &WorkerArgs) -> Outcome {
    let inputs = load_inputs(&args.input)?;
    let n = inputs.query.len();
    let p = search_params(&args.tuning, n, args.input.seed)?;
    let plan = partition_overlap(inputs.series.len(), n, args.fragments)?;
    let spec = *plan
        .fragments
        .get(args.worker)
        .ok_or_else(|| config(format!("worker {} out of range for {} fragments", args.worker, plan.len())))?;
    let started = Instant::now();
    let mut reducer = TcpReducer::connect(args.coordinator.as_str(), timeout(args.timeout)?)?;
    let frag = Fragment { start: spec.start, values: &inputs.series[spec.sample_range()] };
    let out = run_worker(args.worker, frag, &inputs.query, &p, args.rounds_per_reduction, &mut reducer)?;
    let report = search_report(inputs.series.len(), n, &p, plan.len(), "tcp", out.result, out.stats, started.elapsed());
    emit(&report, args.output)
}

pub fn coordinate(args: &CoordinateArgs) -> Outcome {
    let coordinator = Coordinator::bind(args.coordinator, args.fragments, timeout(args.timeout)?)?;
    eprintln!("listening on {}", coordinator.local_addr()?);
    let started = Instant::now();
    let served = coordinator.run()?;
    let report = CoordinateReport {
        index: served.result.index,
        distance_squared: served.result.distance,
        workers: args.fragments,
        rounds: served.rounds,
        wall_ms: started.elapsed().as_secs_f64() * 1e3,
    };
    emit(&report, args.output)
}

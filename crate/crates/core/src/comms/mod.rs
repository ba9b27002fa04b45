//! Cross-fragment coordination.
//!
//! Every worker owns one fragment and alternates local improve rounds with
//! two all-reductions: the lexicographic minimum of (distance, index) and the
//! conjunction of the workers' done flags. A worker that runs out of rows
//! keeps joining the reductions, contributing `done = true` and its frozen
//! champion, until all workers are done.

mod inproc;
mod tcp;
pub mod wire;

pub use inproc::{in_process_group, InProcessReducer};
pub use tcp::{Coordinator, CoordinatorReport, TcpReducer};

use std::net::SocketAddr;
use std::thread;
use std::time::Duration;

use crate::error::{Error, Result};
use crate::fragment::{partition_overlap, FragmentPlan};
use crate::result::MatchResult;
use crate::rng;
use crate::scalar::Scalar;
use crate::search::{Fragment, NodeState, SearchParams, SearchStats};

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(30);

/// Barrier-style collective operations. Every worker must call both methods
/// exactly once per round, in the same order.
pub trait Reducer {
    fn allreduce_min_pair(&mut self, round: u32, pair: MatchResult<f64>) -> Result<MatchResult<f64>>;

    fn allreduce_and(&mut self, round: u32, flag: bool) -> Result<bool>;

    /// Give up and release any peers blocked on this worker.
    fn abort(&mut self) {}
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Transport {
    /// Workers are threads of this process sharing one reducer.
    InProcess,
    /// Workers talk to a coordinator over TCP. `run_distributed` hosts the
    /// coordinator itself on this address (port 0 picks a free one).
    Tcp { bind: SocketAddr },
}

impl Transport {
    pub fn tcp_loopback() -> Self {
        Transport::Tcp { bind: SocketAddr::from(([127, 0, 0, 1], 0)) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterConfig {
    pub fragments: usize,
    pub transport: Transport,
    pub timeout: Duration,
    /// Local improve rounds between two reductions.
    pub rounds_per_reduction: u32,
}

impl ClusterConfig {
    pub fn new(fragments: usize, transport: Transport) -> Self {
        Self { fragments, transport, timeout: DEFAULT_TIMEOUT, rounds_per_reduction: 1 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorkerOutcome<T> {
    pub worker: usize,
    pub result: MatchResult<T>,
    pub stats: SearchStats,
    /// Reductions performed.
    pub rounds: u32,
    /// Reduced distance after each round.
    pub bsf_trace: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistributedOutcome<T> {
    pub result: MatchResult<T>,
    pub stats: SearchStats,
    pub rounds: u32,
    pub workers: Vec<WorkerOutcome<T>>,
}

/// The per-worker loop: prepare, then improve and reduce until global stop.
pub fn run_worker<T: Scalar, R: Reducer>(
    worker: usize,
    fragment: Fragment<'_, T>,
    query: &[T],
    params: &SearchParams,
    rounds_per_reduction: u32,
    reducer: &mut R,
) -> Result<WorkerOutcome<T>> {
    let mut state = match NodeState::prepare(fragment, query, params, rng::worker_stream(worker)) {
        Ok(s) => s,
        Err(e) => {
            reducer.abort();
            return Err(e);
        }
    };
    let mut round = 0u32;
    let mut trace = Vec::new();
    loop {
        for _ in 0..rounds_per_reduction.max(1) {
            if state.is_exhausted() {
                break;
            }
            state.improve_round();
        }
        let reduced = reducer.allreduce_min_pair(round, state.best().to_f64())?;
        state.adopt(MatchResult::from_f64(reduced));
        trace.push(reduced.distance);
        let stop = reducer.allreduce_and(round, state.is_exhausted())?;
        round += 1;
        if stop {
            break;
        }
    }
    Ok(WorkerOutcome { worker, result: state.best(), stats: state.stats(), rounds: round, bsf_trace: trace })
}

fn fragment_of<'a, T>(series: &'a [T], plan: &FragmentPlan, k: usize) -> Fragment<'a, T> {
    let spec = plan.fragments[k];
    Fragment { start: spec.start, values: &series[spec.sample_range()] }
}

/// Root cause first: an input or resource error beats the transport errors
/// it induces in the other workers.
fn first_error(errors: Vec<Error>) -> Error {
    let mut errors = errors;
    let pos = errors.iter().position(|e| !e.is_transport()).unwrap_or(0);
    errors.swap_remove(pos)
}

fn collect<T: Scalar>(results: Vec<Result<WorkerOutcome<T>>>, extra: Option<Error>) -> Result<DistributedOutcome<T>> {
    let mut workers = Vec::new();
    let mut errors: Vec<Error> = extra.into_iter().collect();
    for r in results {
        match r {
            Ok(w) => workers.push(w),
            Err(e) => errors.push(e),
        }
    }
    if !errors.is_empty() {
        return Err(first_error(errors));
    }
    let result = workers[0].result;
    if workers.iter().any(|w| w.result != result) {
        return Err(Error::Transport("workers disagree on the reduced result".into()));
    }
    let mut stats = SearchStats::default();
    for w in &workers {
        stats.merge(&w.stats);
    }
    let rounds = workers[0].rounds;
    Ok(DistributedOutcome { result, stats, rounds, workers })
}

/// Split `series` into `cluster.fragments` overlapping fragments and search
/// them with one worker each over the configured transport.
pub fn run_distributed<T: Scalar>(
    series: &[T],
    query: &[T],
    params: &SearchParams,
    cluster: &ClusterConfig,
) -> Result<DistributedOutcome<T>> {
    params.validate()?;
    let plan = partition_overlap(series.len(), query.len(), cluster.fragments)?;
    let f = plan.len();
    let rpr = cluster.rounds_per_reduction;
    match &cluster.transport {
        Transport::InProcess => {
            let reducers = in_process_group(f, cluster.timeout);
            let results = thread::scope(|scope| {
                let handles: Vec<_> = reducers
                    .into_iter()
                    .enumerate()
                    .map(|(k, mut reducer)| {
                        let frag = fragment_of(series, &plan, k);
                        scope.spawn(move || run_worker(k, frag, query, params, rpr, &mut reducer))
                    })
                    .collect();
                handles.into_iter().map(|h| h.join().expect("worker thread panicked")).collect::<Vec<_>>()
            });
            collect(results, None)
        }
        Transport::Tcp { bind } => {
            let coordinator = Coordinator::bind(bind, f, cluster.timeout)?;
            let addr = coordinator.local_addr()?;
            let timeout = cluster.timeout;
            let (results, served) = thread::scope(|scope| {
                let coord = scope.spawn(move || coordinator.run());
                let handles: Vec<_> = (0..f)
                    .map(|k| {
                        let frag = fragment_of(series, &plan, k);
                        scope.spawn(move || {
                            let mut reducer = TcpReducer::connect(addr, timeout)?;
                            run_worker(k, frag, query, params, rpr, &mut reducer)
                        })
                    })
                    .collect();
                let results: Vec<_> = handles.into_iter().map(|h| h.join().expect("worker thread panicked")).collect();
                (results, coord.join().expect("coordinator thread panicked"))
            });
            let outcome = collect(results, served.as_ref().err().map(|e| Error::Transport(e.to_string())))?;
            let report = served?;
            if report.result != outcome.result.to_f64() {
                return Err(Error::Transport("coordinator and workers disagree".into()));
            }
            Ok(outcome)
        }
    }
}

use std::sync::{Arc, Condvar, Mutex, MutexGuard};
use std::time::Duration;

use super::Reducer;
use crate::error::{Error, Result};
use crate::result::MatchResult;

struct Slot {
    generation: u64,
    arrived: usize,
    round: u32,
    pair: MatchResult<f64>,
    flag: bool,
    result_pair: MatchResult<f64>,
    result_flag: bool,
    aborted: bool,
}

struct Shared {
    slot: Mutex<Slot>,
    cv: Condvar,
    size: usize,
    timeout: Duration,
}

/// One worker's handle on a group of in-process reducers sharing a barrier.
pub struct InProcessReducer {
    shared: Arc<Shared>,
}

/// Handles for `size` workers that reduce with each other.
pub fn in_process_group(size: usize, timeout: Duration) -> Vec<InProcessReducer> {
    let shared = Arc::new(Shared {
        slot: Mutex::new(Slot {
            generation: 0,
            arrived: 0,
            round: 0,
            pair: MatchResult::unset(),
            flag: true,
            result_pair: MatchResult::unset(),
            result_flag: true,
            aborted: false,
        }),
        cv: Condvar::new(),
        size,
        timeout,
    });
    (0..size).map(|_| InProcessReducer { shared: Arc::clone(&shared) }).collect()
}

impl InProcessReducer {
    fn lock(&self) -> MutexGuard<'_, Slot> {
        self.shared.slot.lock().unwrap_or_else(|p| p.into_inner())
    }

    fn rendezvous<R>(&self, round: u32, contribute: impl FnOnce(&mut Slot), read: impl Fn(&Slot) -> R) -> Result<R> {
        let mut g = self.lock();
        if g.aborted {
            return Err(Error::Transport("a peer worker aborted".into()));
        }
        if g.arrived == 0 {
            g.round = round;
        } else if g.round != round {
            g.aborted = true;
            self.shared.cv.notify_all();
            return Err(Error::Transport(format!("round mismatch: {} vs {round}", g.round)));
        }
        contribute(&mut g);
        g.arrived += 1;
        if g.arrived == self.shared.size {
            g.result_pair = g.pair;
            g.result_flag = g.flag;
            g.pair = MatchResult::unset();
            g.flag = true;
            g.arrived = 0;
            g.generation += 1;
            self.shared.cv.notify_all();
            return Ok(read(&g));
        }
        let generation = g.generation;
        let (mut g, wait) = self
            .shared
            .cv
            .wait_timeout_while(g, self.shared.timeout, |s| s.generation == generation && !s.aborted)
            .unwrap_or_else(|p| p.into_inner());
        if g.generation != generation {
            return Ok(read(&g));
        }
        if wait.timed_out() {
            g.aborted = true;
            self.shared.cv.notify_all();
            return Err(Error::Timeout { round });
        }
        Err(Error::Transport("a peer worker aborted".into()))
    }
}

impl Reducer for InProcessReducer {
    fn allreduce_min_pair(&mut self, round: u32, pair: MatchResult<f64>) -> Result<MatchResult<f64>> {
        self.rendezvous(round, |s| s.pair = s.pair.min(pair), |s| s.result_pair)
    }

    fn allreduce_and(&mut self, round: u32, flag: bool) -> Result<bool> {
        self.rendezvous(round, |s| s.flag &= flag, |s| s.result_flag)
    }

    fn abort(&mut self) {
        let mut g = self.lock();
        g.aborted = true;
        self.shared.cv.notify_all();
    }
}

//! Star topology: one coordinator collects a contribution from every worker,
//! reduces, and sends the result back to all of them.

use std::io;
use std::net::{SocketAddr, TcpListener, TcpStream, ToSocketAddrs};
use std::thread;
use std::time::{Duration, Instant};

use super::wire::{read_frame, write_frame, Frame};
use super::Reducer;
use crate::error::{Error, Result};
use crate::result::MatchResult;

fn io_to_error(e: io::Error, round: u32) -> Error {
    match e.kind() {
        io::ErrorKind::WouldBlock | io::ErrorKind::TimedOut => Error::Timeout { round },
        _ => Error::Transport(e.to_string()),
    }
}

fn recv(stream: &mut TcpStream, round: u32) -> Result<Frame> {
    let frame = read_frame(stream).map_err(|e| match e {
        Ok(io) => io_to_error(io, round),
        Err(err) => err,
    })?;
    if frame.round() != round {
        return Err(Error::Transport(format!("expected round {round}, got {}", frame.round())));
    }
    Ok(frame)
}

fn send(stream: &mut TcpStream, frame: &Frame) -> Result<()> {
    write_frame(stream, frame).map_err(|e| io_to_error(e, frame.round()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoordinatorReport {
    pub result: MatchResult<f64>,
    pub rounds: u32,
}

pub struct Coordinator {
    listener: TcpListener,
    workers: usize,
    timeout: Duration,
}

impl Coordinator {
    pub fn bind(addr: impl ToSocketAddrs, workers: usize, timeout: Duration) -> Result<Self> {
        if workers == 0 {
            return Err(Error::invalid("coordinator needs at least one worker"));
        }
        let listener = TcpListener::bind(addr).map_err(|e| Error::Transport(format!("bind: {e}")))?;
        Ok(Self { listener, workers, timeout })
    }

    pub fn local_addr(&self) -> Result<SocketAddr> {
        self.listener.local_addr().map_err(|e| Error::Transport(e.to_string()))
    }

    fn accept_all(&self) -> Result<Vec<TcpStream>> {
        self.listener.set_nonblocking(true).map_err(|e| Error::Transport(e.to_string()))?;
        let deadline = Instant::now() + self.timeout;
        let mut streams = Vec::with_capacity(self.workers);
        while streams.len() < self.workers {
            match self.listener.accept() {
                Ok((s, _)) => {
                    s.set_nonblocking(false).map_err(|e| Error::Transport(e.to_string()))?;
                    s.set_read_timeout(Some(self.timeout)).map_err(|e| Error::Transport(e.to_string()))?;
                    s.set_write_timeout(Some(self.timeout)).map_err(|e| Error::Transport(e.to_string()))?;
                    let _ = s.set_nodelay(true);
                    streams.push(s);
                }
                Err(e) if e.kind() == io::ErrorKind::WouldBlock => {
                    if Instant::now() >= deadline {
                        return Err(Error::Transport(format!(
                            "only {} of {} workers connected",
                            streams.len(),
                            self.workers
                        )));
                    }
                    thread::sleep(Duration::from_millis(5));
                }
                Err(e) => return Err(Error::Transport(e.to_string())),
            }
        }
        Ok(streams)
    }

    /// Serve reduction rounds until every worker reports done.
    pub fn run(self) -> Result<CoordinatorReport> {
        let mut streams = self.accept_all()?;
        let mut round = 0u32;
        loop {
            let mut pair = MatchResult::unset();
            for s in &mut streams {
                match recv(s, round)? {
                    Frame::ContribPair { pair: p, .. } => pair = pair.min(p),
                    other => return Err(Error::Transport(format!("expected pair contribution, got {other:?}"))),
                }
            }
            for s in &mut streams {
                send(s, &Frame::ResultPair { round, pair })?;
            }
            let mut stop = true;
            for s in &mut streams {
                match recv(s, round)? {
                    Frame::ContribFlag { flag, .. } => stop &= flag,
                    other => return Err(Error::Transport(format!("expected flag contribution, got {other:?}"))),
                }
            }
            for s in &mut streams {
                send(s, &Frame::ResultFlag { round, flag: stop })?;
            }
            round += 1;
            if stop {
                return Ok(CoordinatorReport { result: pair, rounds: round });
            }
        }
    }
}

/// Worker side of the star.
pub struct TcpReducer {
    stream: TcpStream,
}

impl TcpReducer {
    /// Connect, retrying until `timeout` elapses so workers may start before
    /// the coordinator.
    pub fn connect(addr: impl ToSocketAddrs, timeout: Duration) -> Result<Self> {
        let addrs: Vec<SocketAddr> =
            addr.to_socket_addrs().map_err(|e| Error::Transport(format!("resolve coordinator: {e}")))?.collect();
        let deadline = Instant::now() + timeout;
        loop {
            let attempt = addrs.iter().find_map(|a| TcpStream::connect_timeout(a, Duration::from_secs(1)).ok());
            if let Some(stream) = attempt {
                stream.set_read_timeout(Some(timeout)).map_err(|e| Error::Transport(e.to_string()))?;
                stream.set_write_timeout(Some(timeout)).map_err(|e| Error::Transport(e.to_string()))?;
                let _ = stream.set_nodelay(true);
                return Ok(Self { stream });
            }
            if Instant::now() >= deadline {
                return Err(Error::Transport(format!("cannot reach coordinator at {addrs:?}")));
            }
            thread::sleep(Duration::from_millis(20));
        }
    }
}

impl Reducer for TcpReducer {
    fn allreduce_min_pair(&mut self, round: u32, pair: MatchResult<f64>) -> Result<MatchResult<f64>> {
        send(&mut self.stream, &Frame::ContribPair { round, pair })?;
        match recv(&mut self.stream, round)? {
            Frame::ResultPair { pair, .. } => Ok(pair),
            other => Err(Error::Transport(format!("expected pair result, got {other:?}"))),
        }
    }

    fn allreduce_and(&mut self, round: u32, flag: bool) -> Result<bool> {
        send(&mut self.stream, &Frame::ContribFlag { round, flag })?;
        match recv(&mut self.stream, round)? {
            Frame::ResultFlag { flag, .. } => Ok(flag),
            other => Err(Error::Transport(format!("expected flag result, got {other:?}"))),
        }
    }

    fn abort(&mut self) {
        let _ = self.stream.shutdown(std::net::Shutdown::Both);
    }
}

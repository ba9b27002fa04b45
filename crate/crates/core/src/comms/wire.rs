//! Length-prefixed binary frames for the TCP transport.
//!
//! ```text
//! u32 LE  length of everything after this field
//! u8      frame type
//! u32 LE  round number
//! ...     payload: f64 LE distance + u64 LE index (pair frames)
//!                  or one byte, 0 or 1 (flag frames)
//! ```

use std::io::{self, Read, Write};

use crate::error::{Error, Result};
use crate::result::MatchResult;

pub const CONTRIB_PAIR: u8 = 0x01;
pub const CONTRIB_FLAG: u8 = 0x02;
pub const RESULT_PAIR: u8 = 0x81;
pub const RESULT_FLAG: u8 = 0x82;

const MAX_FRAME: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Frame {
    ContribPair { round: u32, pair: MatchResult<f64> },
    ContribFlag { round: u32, flag: bool },
    ResultPair { round: u32, pair: MatchResult<f64> },
    ResultFlag { round: u32, flag: bool },
}

impl Frame {
    pub fn round(&self) -> u32 {
        match *self {
            Frame::ContribPair { round, .. }
            | Frame::ContribFlag { round, .. }
            | Frame::ResultPair { round, .. }
            | Frame::ResultFlag { round, .. } => round,
        }
    }

    pub fn kind(&self) -> u8 {
        match self {
            Frame::ContribPair { .. } => CONTRIB_PAIR,
            Frame::ContribFlag { .. } => CONTRIB_FLAG,
            Frame::ResultPair { .. } => RESULT_PAIR,
            Frame::ResultFlag { .. } => RESULT_FLAG,
        }
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut body = Vec::with_capacity(21);
        body.push(self.kind());
        body.extend_from_slice(&self.round().to_le_bytes());
        match *self {
            Frame::ContribPair { pair, .. } | Frame::ResultPair { pair, .. } => {
                body.extend_from_slice(&pair.distance.to_le_bytes());
                body.extend_from_slice(&pair.index.to_le_bytes());
            }
            Frame::ContribFlag { flag, .. } | Frame::ResultFlag { flag, .. } => body.push(flag as u8),
        }
        let mut out = Vec::with_capacity(4 + body.len());
        out.extend_from_slice(&(body.len() as u32).to_le_bytes());
        out.extend_from_slice(&body);
        out
    }

    /// Decode one frame body (the bytes after the length prefix).
    pub fn decode(body: &[u8]) -> Result<Self> {
        let bad = |m: &str| Error::Transport(format!("malformed frame: {m}"));
        if body.len() < 5 {
            return Err(bad("too short"));
        }
        let kind = body[0];
        let round = u32::from_le_bytes(body[1..5].try_into().expect("4 bytes"));
        let payload = &body[5..];
        let pair = || -> Result<MatchResult<f64>> {
            if payload.len() != 16 {
                return Err(bad("pair payload must be 16 bytes"));
            }
            Ok(MatchResult {
                distance: f64::from_le_bytes(payload[..8].try_into().expect("8 bytes")),
                index: u64::from_le_bytes(payload[8..].try_into().expect("8 bytes")),
            })
        };
        let flag = || -> Result<bool> {
            match payload {
                [0] => Ok(false),
                [1] => Ok(true),
                _ => Err(bad("flag payload must be a single 0 or 1 byte")),
            }
        };
        match kind {
            CONTRIB_PAIR => Ok(Frame::ContribPair { round, pair: pair()? }),
            CONTRIB_FLAG => Ok(Frame::ContribFlag { round, flag: flag()? }),
            RESULT_PAIR => Ok(Frame::ResultPair { round, pair: pair()? }),
            RESULT_FLAG => Ok(Frame::ResultFlag { round, flag: flag()? }),
            other => Err(bad(&format!("unknown frame type {other:#04x}"))),
        }
    }
}

pub fn write_frame(w: &mut impl Write, frame: &Frame) -> io::Result<()> {
    w.write_all(&frame.encode())?;
    w.flush()
}

/// Read one frame. I/O failures come back as `Err(Ok(io_error))` so callers
/// can tell timeouts apart from protocol violations (`Err(Err(..))`).
pub fn read_frame(r: &mut impl Read) -> std::result::Result<Frame, std::result::Result<io::Error, Error>> {
    let mut len = [0u8; 4];
    r.read_exact(&mut len).map_err(Ok)?;
    let len = u32::from_le_bytes(len);
    if len > MAX_FRAME {
        return Err(Err(Error::Transport(format!("frame length {len} exceeds {MAX_FRAME}"))));
    }
    let mut body = vec![0u8; len as usize];
    r.read_exact(&mut body).map_err(Ok)?;
    Frame::decode(&body).map_err(Err)
}

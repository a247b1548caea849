//! Online players. Each one serves requests strictly in order, looking only at
//! the graph, the requests served so far, and the advice bits it reads.

mod fpa;
mod greedy;
mod hex43;
mod trivial;

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::PlayerError;
use crate::graph::Graph;
use crate::instance::{Action, Request};
use crate::tape::AdviceTape;

pub use fpa::{Fpa, FpaMode};
pub use greedy::{GreedyCancel, GreedyOpt};
pub use hex43::Hex43;
pub use trivial::Trivial;

/// A deterministic online multi-coloring algorithm with access to advice.
pub trait OnlinePlayer {
    fn serve(
        &mut self,
        step: usize,
        request: &Request,
        tape: &mut AdviceTape,
    ) -> Result<Action, PlayerError>;
}

/// Identity of a shipped player.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    GreedyOpt,
    GreedyTruncated { b: u32 },
    GreedyCancel,
    Trivial,
    Fpa,
    Hex43,
}

impl Algorithm {
    pub const NAMES: [&'static str; 6] = [
        "greedy_opt",
        "greedy_truncated",
        "greedy_cancel",
        "trivial",
        "fpa",
        "hex43",
    ];

    pub fn id(&self) -> &'static str {
        match self {
            Algorithm::GreedyOpt => "greedy_opt",
            Algorithm::GreedyTruncated { .. } => "greedy_truncated",
            Algorithm::GreedyCancel => "greedy_cancel",
            Algorithm::Trivial => "trivial",
            Algorithm::Fpa => "fpa",
            Algorithm::Hex43 => "hex43",
        }
    }

    /// Parses an algorithm id; `b` is required only by `greedy_truncated`.
    pub fn parse(id: &str, b: Option<u32>) -> Result<Self, UnknownAlgorithm> {
        Ok(match id {
            "greedy_opt" => Algorithm::GreedyOpt,
            "greedy_truncated" => Algorithm::GreedyTruncated {
                b: b.ok_or_else(|| UnknownAlgorithm(format!("{id} needs a truncation width b")))?,
            },
            "greedy_cancel" => Algorithm::GreedyCancel,
            "trivial" => Algorithm::Trivial,
            "fpa" => Algorithm::Fpa,
            "hex43" => Algorithm::Hex43,
            other => return Err(UnknownAlgorithm(format!("unknown algorithm `{other}`"))),
        })
    }

    /// Reads the up-front advice and returns a ready player.
    pub fn player(
        &self,
        graph: Arc<Graph>,
        tape: &mut AdviceTape,
    ) -> Result<Box<dyn OnlinePlayer>, PlayerError> {
        Ok(match *self {
            Algorithm::GreedyOpt => Box::new(GreedyOpt::new(graph, tape)?),
            Algorithm::GreedyTruncated { b } => Box::new(GreedyOpt::truncated(graph, tape, b)?),
            Algorithm::GreedyCancel => Box::new(GreedyCancel::new(graph, tape)?),
            Algorithm::Trivial => Box::new(Trivial::new(graph, tape)?),
            Algorithm::Fpa => Box::new(Fpa::new(graph, tape, FpaMode::Literal)?),
            Algorithm::Hex43 => Box::new(Hex43::new(graph)),
        })
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algorithm::GreedyTruncated { b } => write!(f, "greedy_truncated:{b}"),
            other => f.write_str(other.id()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{0}")]
pub struct UnknownAlgorithm(pub String);

impl FromStr for Algorithm {
    type Err = UnknownAlgorithm;

    /// Accepts `greedy_truncated:<b>` for the truncated variant.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split_once(':') {
            Some((id, b)) => {
                let b = b
                    .parse()
                    .map_err(|_| UnknownAlgorithm(format!("bad truncation width `{b}`")))?;
                Algorithm::parse(id, Some(b))
            }
            None => Algorithm::parse(s, None),
        }
    }
}

/// Runs `algorithm` over `requests`, consuming advice from `tape`.
pub fn run_online(
    algorithm: Algorithm,
    graph: &Arc<Graph>,
    requests: &[Request],
    tape: &mut AdviceTape,
) -> Result<Vec<Action>, PlayerError> {
    let mut player = algorithm.player(Arc::clone(graph), tape)?;
    requests
        .iter()
        .enumerate()
        .map(|(step, r)| player.serve(step, r, tape))
        .collect()
}

fn unsupported_cancel(algo: &'static str) -> PlayerError {
    PlayerError::Unsupported {
        algo,
        what: "cancellations".into(),
    }
}

fn advice_u32(value: u64, step: usize, what: &str) -> Result<u32, PlayerError> {
    u32::try_from(value).map_err(|_| PlayerError::InconsistentAdvice {
        step,
        reason: format!("{what} {value} does not fit a color index"),
    })
}

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::PlayerError;
use crate::graph::{Graph, Side};
use crate::instance::{Action, Color, Op, Request};
use crate::tape::AdviceTape;

use super::{advice_u32, unsupported_cancel, OnlinePlayer};

/// Palette state shared by the two greedy players: `L` nodes fill `1, 2, …`
/// bottom-up and `U` nodes fill `m, m−1, …` top-down.
#[derive(Debug, Clone)]
struct TwoSided {
    graph: Arc<Graph>,
    m: Color,
    f: Vec<BTreeSet<Color>>,
}

impl TwoSided {
    fn new(graph: Arc<Graph>, m: Color) -> Result<Self, PlayerError> {
        if graph.nodes().any(|v| graph.side(v).is_none()) {
            return Err(PlayerError::Unsupported {
                algo: "greedy",
                what: format!("{} graphs", graph.kind()),
            });
        }
        let f = vec![BTreeSet::new(); graph.len()];
        Ok(Self { graph, m, f })
    }

    fn side(&self, r: &Request) -> Side {
        self.graph.side(r.node).expect("checked in new")
    }

    fn color(&mut self, step: usize, r: &Request) -> Result<Color, PlayerError> {
        let f = &self.f[r.node.0];
        let c = match self.side(r) {
            Side::U => match f.first() {
                None => self.m,
                Some(&min) => min - 1,
            },
            Side::L => f.last().map_or(1, |&max| max + 1),
        };
        if c < 1 {
            return Err(PlayerError::CapacityExceeded {
                step,
                node: self.graph.name(r.node).to_owned(),
            });
        }
        self.f[r.node.0].insert(c);
        Ok(c)
    }
}

/// Colors a bipartite graph with exactly `m` colors when `m ≥ Opt`.
#[derive(Debug, Clone)]
pub struct GreedyOpt {
    inner: TwoSided,
}

impl GreedyOpt {
    /// Reads `m = dec(tape)`.
    pub fn new(graph: Arc<Graph>, tape: &mut AdviceTape) -> Result<Self, PlayerError> {
        let m = advice_u32(tape.read_enc()?, 0, "palette size")?;
        Self::with_palette(graph, m)
    }

    /// Reads `b` high-order bits of Opt and `enc(a)`. With `a > 0` the palette
    /// becomes `m = 2^a·high + 2^a − 1`, the largest value with that prefix.
    pub fn truncated(
        graph: Arc<Graph>,
        tape: &mut AdviceTape,
        b: u32,
    ) -> Result<Self, PlayerError> {
        if b == 0 || b > 63 {
            return Err(PlayerError::InconsistentAdvice {
                step: 0,
                reason: format!("truncation width {b} outside 1..=63"),
            });
        }
        let high = tape.read_fixed(b)?;
        let a = tape.read_enc()?;
        let m = if a == 0 {
            high
        } else if a >= 64 {
            u64::MAX
        } else {
            let m = ((u128::from(high) + 1) << a) - 1;
            u64::try_from(m).unwrap_or(u64::MAX)
        };
        Self::with_palette(graph, advice_u32(m, 0, "palette size")?)
    }

    pub fn with_palette(graph: Arc<Graph>, m: Color) -> Result<Self, PlayerError> {
        Ok(Self {
            inner: TwoSided::new(graph, m)?,
        })
    }

    pub fn palette(&self) -> Color {
        self.inner.m
    }
}

impl OnlinePlayer for GreedyOpt {
    fn serve(
        &mut self,
        step: usize,
        r: &Request,
        _tape: &mut AdviceTape,
    ) -> Result<Action, PlayerError> {
        match r.op {
            Op::Color => self.inner.color(step, r).map(Action::Color),
            Op::Cancel(_) => Err(unsupported_cancel("greedy_opt")),
        }
    }
}

/// [`GreedyOpt`] with cancellations: recolors at most one request at the
/// cancelling node so every node's colors stay one consecutive run.
#[derive(Debug, Clone)]
pub struct GreedyCancel {
    inner: TwoSided,
}

impl GreedyCancel {
    pub fn new(graph: Arc<Graph>, tape: &mut AdviceTape) -> Result<Self, PlayerError> {
        let m = advice_u32(tape.read_enc()?, 0, "palette size")?;
        Ok(Self {
            inner: TwoSided::new(graph, m)?,
        })
    }

    pub fn palette(&self) -> Color {
        self.inner.m
    }

    /// Live colors at a node.
    pub fn colors(&self, v: crate::graph::NodeId) -> &BTreeSet<Color> {
        &self.inner.f[v.0]
    }
}

impl OnlinePlayer for GreedyCancel {
    fn serve(
        &mut self,
        step: usize,
        r: &Request,
        _tape: &mut AdviceTape,
    ) -> Result<Action, PlayerError> {
        let c = match r.op {
            Op::Color => return self.inner.color(step, r).map(Action::Color),
            Op::Cancel(c) => c,
        };
        let side = self.inner.side(r);
        let f = &mut self.inner.f[r.node.0];
        if !f.contains(&c) {
            return Err(PlayerError::BadCancel {
                step,
                node: self.inner.graph.name(r.node).to_owned(),
                color: c,
            });
        }
        let edge = match side {
            Side::U => *f.first().expect("contains c"),
            Side::L => *f.last().expect("contains c"),
        };
        // the request at the run's open end takes over the cancelled color
        f.remove(&edge);
        Ok(Action::Cancel {
            recolor: (edge != c).then_some(edge),
        })
    }
}

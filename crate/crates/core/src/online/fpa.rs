use std::collections::BTreeSet;
use std::ops::RangeInclusive;
use std::sync::Arc;

use crate::error::PlayerError;
use crate::graph::{ColorClass, Graph, NodeId};
use crate::instance::{Action, Color, Op, Request};
use crate::tape::AdviceTape;

use super::{advice_u32, unsupported_cancel, OnlinePlayer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FpaMode {
    /// Candidates exclude only the node's own colors.
    #[default]
    Literal,
    /// Candidates also exclude every color live at a neighbor.
    NeighborSafe,
}

/// Fixed preference allocation: each class owns a block of `c = ⌈ω/2⌉`
/// colors. A node uses its own block bottom-up, then borrows from the top of
/// the next class's block (R from G, G from B, B from R).
#[derive(Debug, Clone)]
pub struct Fpa {
    graph: Arc<Graph>,
    block: Color,
    mode: FpaMode,
    f: Vec<BTreeSet<Color>>,
}

impl Fpa {
    pub fn new(
        graph: Arc<Graph>,
        tape: &mut AdviceTape,
        mode: FpaMode,
    ) -> Result<Self, PlayerError> {
        if graph.nodes().any(|v| graph.class(v).is_none()) {
            return Err(PlayerError::Unsupported {
                algo: "fpa",
                what: format!("{} graphs", graph.kind()),
            });
        }
        let block = advice_u32(tape.read_enc()?, 0, "block size")?;
        if block.checked_mul(3).is_none() {
            return Err(PlayerError::InconsistentAdvice {
                step: 0,
                reason: format!("block size {block} overflows the palette"),
            });
        }
        let f = vec![BTreeSet::new(); graph.len()];
        Ok(Self {
            graph,
            block,
            mode,
            f,
        })
    }

    pub fn block(&self) -> Color {
        self.block
    }

    /// Private colors of a class.
    pub fn palette(&self, class: ColorClass) -> RangeInclusive<Color> {
        let k = class.index() as Color;
        k * self.block + 1..=(k + 1) * self.block
    }

    fn free(&self, v: NodeId, c: Color) -> bool {
        if self.f[v.0].contains(&c) {
            return false;
        }
        match self.mode {
            FpaMode::Literal => true,
            FpaMode::NeighborSafe => self
                .graph
                .neighbors(v)
                .iter()
                .all(|w| !self.f[w.0].contains(&c)),
        }
    }
}

impl OnlinePlayer for Fpa {
    fn serve(
        &mut self,
        step: usize,
        r: &Request,
        _tape: &mut AdviceTape,
    ) -> Result<Action, PlayerError> {
        if let Op::Cancel(_) = r.op {
            return Err(unsupported_cancel("fpa"));
        }
        let v = r.node;
        let class = self.graph.class(v).expect("checked in new");
        let pick = if (self.f[v.0].len() as Color) < self.block {
            self.palette(class).find(|&c| self.free(v, c))
        } else {
            self.palette(class.borrows_from())
                .rev()
                .find(|&c| self.free(v, c))
        };
        let c = pick.ok_or_else(|| PlayerError::CapacityExceeded {
            step,
            node: self.graph.name(v).to_owned(),
        })?;
        self.f[v.0].insert(c);
        Ok(Action::Color(c))
    }
}

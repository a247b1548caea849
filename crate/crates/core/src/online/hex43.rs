use std::collections::BTreeSet;
use std::sync::Arc;

use crate::error::PlayerError;
use crate::graph::{ColorClass, Graph, NodeId};
use crate::instance::{Action, Color, Op, Request};
use crate::tape::AdviceTape;

use super::{unsupported_cancel, OnlinePlayer};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Phase {
    /// Using the node's private colors.
    Private,
    /// Borrowing from the next class.
    Borrow,
    /// Greedy coloring of the leftover bipartite part, inside `[lo, hi]`.
    Split { upper: bool, lo: Color, hi: Color },
}

/// Online 4/3 player for hexagonal graphs driven by per-request advice bits.
///
/// Private palettes are interleaved by residue: after `s` growth steps R owns
/// `{1, 4, …, 3s−2}`, G owns `{2, 5, …, 3s−1}` and B owns `{3, 6, …, 3s}`.
/// Growing all three sets by one therefore keeps every private color at most
/// `3s`, so the Phase-3 window `[3s+1, 4s+1]` never overlaps them.
#[derive(Debug, Clone)]
pub struct Hex43 {
    graph: Arc<Graph>,
    private_size: Color,
    frozen: bool,
    phase: Vec<Phase>,
    f: Vec<BTreeSet<Color>>,
}

impl Hex43 {
    pub fn new(graph: Arc<Graph>) -> Self {
        let n = graph.len();
        Self {
            graph,
            private_size: 0,
            frozen: false,
            phase: vec![Phase::Private; n],
            f: vec![BTreeSet::new(); n],
        }
    }

    /// Current size of each private palette.
    pub fn private_size(&self) -> Color {
        self.private_size
    }

    fn palette(&self, class: ColorClass) -> impl DoubleEndedIterator<Item = Color> {
        let offset = class.index() as Color + 1;
        (0..self.private_size).map(move |i| 3 * i + offset)
    }

    fn class(&self, v: NodeId) -> ColorClass {
        self.graph.class(v).expect("checked on first request")
    }

    fn capacity(&self, step: usize, v: NodeId) -> PlayerError {
        PlayerError::CapacityExceeded {
            step,
            node: self.graph.name(v).to_owned(),
        }
    }

    fn private(&mut self, step: usize, v: NodeId) -> Result<Color, PlayerError> {
        let class = self.class(v);
        let own = &self.f[v.0];
        let mut pick = self.palette(class).find(|c| !own.contains(c));
        if pick.is_none() {
            if self.frozen {
                return Err(PlayerError::InconsistentAdvice {
                    step,
                    reason: format!(
                        "private palettes are final at size {} but `{}` asks for more",
                        self.private_size,
                        self.graph.name(v)
                    ),
                });
            }
            self.private_size += 1;
            pick = Some(3 * (self.private_size - 1) + class.index() as Color + 1);
        }
        Ok(pick.expect("set above"))
    }

    fn borrow(&self, step: usize, v: NodeId) -> Result<Color, PlayerError> {
        let lender = self.class(v).borrows_from();
        let taken = |c: &Color| {
            self.f[v.0].contains(c)
                || self
                    .graph
                    .neighbors(v)
                    .iter()
                    .any(|w| self.f[w.0].contains(c))
        };
        self.palette(lender)
            .rev()
            .find(|c| !taken(c))
            .ok_or_else(|| self.capacity(step, v))
    }
}

impl OnlinePlayer for Hex43 {
    fn serve(
        &mut self,
        step: usize,
        r: &Request,
        tape: &mut AdviceTape,
    ) -> Result<Action, PlayerError> {
        if let Op::Cancel(_) = r.op {
            return Err(unsupported_cancel("hex43"));
        }
        let v = r.node;
        if self.graph.class(v).is_none() {
            return Err(PlayerError::Unsupported {
                algo: "hex43",
                what: format!("{} graphs", self.graph.kind()),
            });
        }
        if self.phase[v.0] == Phase::Private {
            if !tape.read_bit()? {
                let c = self.private(step, v)?;
                self.f[v.0].insert(c);
                return Ok(Action::Color(c));
            }
            self.frozen = true;
            self.phase[v.0] = Phase::Borrow;
        }
        if self.phase[v.0] == Phase::Borrow {
            if !tape.read_bit()? {
                let c = self.borrow(step, v)?;
                self.f[v.0].insert(c);
                return Ok(Action::Color(c));
            }
            let upper = tape.read_bit()?;
            // every node leaving Phase 1 has used exactly the final private size
            let s = self.private_size;
            self.phase[v.0] = Phase::Split {
                upper,
                lo: 3 * s + 1,
                hi: 4 * s + 1,
            };
        }
        let Phase::Split { upper, lo, hi } = self.phase[v.0] else {
            unreachable!("phases 1 and 2 return or fall through to 3")
        };
        let own = &self.f[v.0];
        let pick = if upper {
            (lo..=hi).rev().find(|c| !own.contains(c))
        } else {
            (lo..=hi).find(|c| !own.contains(c))
        };
        let c = pick.ok_or_else(|| self.capacity(step, v))?;
        self.f[v.0].insert(c);
        Ok(Action::Color(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_hexagonal_ordered, CellCoord};

    fn hex(cells: &[(&str, i32, i32)]) -> Arc<Graph> {
        let names = cells.iter().map(|c| c.0.to_string()).collect();
        let coords = cells.iter().map(|c| CellCoord::new(c.1, c.2)).collect();
        Arc::new(build_hexagonal_ordered(names, coords).unwrap())
    }

    fn run(g: &Arc<Graph>, tape: &str, seq: &[&str]) -> (Vec<Action>, AdviceTape) {
        let mut tape: AdviceTape = tape.parse().unwrap();
        let mut p = Hex43::new(g.clone());
        let out = seq
            .iter()
            .enumerate()
            .map(|(i, n)| {
                p.serve(i, &Request::color(g.node(n).unwrap()), &mut tape)
                    .unwrap()
            })
            .collect();
        (out, tape)
    }

    #[test]
    fn edge_trace() {
        let g = hex(&[("u", 0, 0), ("v", 1, 0)]);
        let (out, tape) = run(&g, "00110", &["u", "v", "u"]);
        assert_eq!(
            out,
            vec![Action::Color(1), Action::Color(2), Action::Color(4)]
        );
        assert!(tape.is_exhausted());
        assert_eq!(tape.high_water(), 5);
    }

    #[test]
    fn private_palettes_grow_together() {
        let g = hex(&[("r", 0, 0), ("g", 1, 0), ("b", 0, 1)]);
        let (out, _) = run(&g, "0000", &["r", "r", "g", "b"]);
        assert_eq!(
            out,
            vec![
                Action::Color(1),
                Action::Color(4),
                Action::Color(2),
                Action::Color(3)
            ]
        );
    }

    #[test]
    fn upper_side_colors_top_down() {
        let g = hex(&[("u", 0, 0)]);
        // one private color, stop, stop, upper: window [4, 5]
        let (out, _) = run(&g, "01110", &["u", "u", "u"]);
        assert_eq!(
            out,
            vec![Action::Color(1), Action::Color(5), Action::Color(4)]
        );
    }

    #[test]
    fn growth_after_freeze_is_inconsistent() {
        let g = hex(&[("a", 0, 0), ("b", 2, 0)]);
        let mut tape: AdviceTape = "0110000".parse().unwrap();
        let mut p = Hex43::new(g.clone());
        let a = Request::color(NodeId(0));
        let b = Request::color(NodeId(1));
        p.serve(0, &a, &mut tape).unwrap();
        p.serve(1, &a, &mut tape).unwrap();
        p.serve(2, &b, &mut tape).unwrap();
        let err = p.serve(3, &b, &mut tape).unwrap_err();
        assert!(matches!(
            err,
            PlayerError::InconsistentAdvice { step: 3, .. }
        ));
    }

    #[test]
    fn upper_window_can_pass_the_offline_palette() {
        use crate::instance::{validate_full, Instance};
        use crate::oracle::{advice_43, plan_43};

        // path R - G - B with three requests each: ω = 6, q = 2
        let g = hex(&[("u", 0, 0), ("w", 1, 0), ("x", 2, 0)]);
        let order = [0, 0, 0, 1, 1, 1, 2, 2, 2].map(NodeId);
        let inst = Instance::from_nodes(g.clone(), order).unwrap();
        let plan = plan_43(&inst).unwrap();
        assert_eq!((plan.omega, plan.q), (6, 2));
        let mut tape = advice_43(&inst).unwrap();
        let mut p = Hex43::new(g);
        let out: Vec<_> = inst
            .requests
            .iter()
            .enumerate()
            .map(|(i, r)| p.serve(i, r, &mut tape).unwrap())
            .collect();
        assert!(validate_full(&inst, &out).unwrap().is_ok());
        let max = out
            .iter()
            .map(|a| match a {
                Action::Color(c) => *c,
                _ => 0,
            })
            .max()
            .unwrap();
        assert_eq!(max, plan.online_palette_bound());
        assert!(max > plan.palette_bound());
    }
}

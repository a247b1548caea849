//! Request sequences, the evolving multi-coloring, and replay validation.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::InstanceError;
use crate::graph::{maximal_cliques, Graph, NodeId};

/// Colors are positive integers; `0` is never a legal color.
pub type Color = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Op {
    Color,
    /// Removes the given color from the node.
    Cancel(Color),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Request {
    pub node: NodeId,
    pub op: Op,
}

impl Request {
    pub fn color(node: NodeId) -> Self {
        Self {
            node,
            op: Op::Color,
        }
    }

    pub fn cancel(node: NodeId, color: Color) -> Self {
        Self {
            node,
            op: Op::Cancel(color),
        }
    }

    pub fn is_cancel(&self) -> bool {
        matches!(self.op, Op::Cancel(_))
    }
}

/// What a player did with one request.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Action {
    /// Serve a color request with this color.
    Color(Color),
    /// Serve a cancellation. With `recolor: Some(c)` the request holding
    /// color `c` at the same node takes over the cancelled color.
    Cancel { recolor: Option<Color> },
}

/// A graph together with an ordered request sequence.
#[derive(Debug, Clone)]
pub struct Instance {
    pub graph: Arc<Graph>,
    pub requests: Vec<Request>,
}

impl Instance {
    pub fn new(graph: Arc<Graph>, requests: Vec<Request>) -> Result<Self, InstanceError> {
        if let Some((step, r)) = requests
            .iter()
            .enumerate()
            .find(|(_, r)| r.node.0 >= graph.len())
        {
            return Err(InstanceError::UnknownNode {
                step,
                node: r.node.0,
            });
        }
        Ok(Self { graph, requests })
    }

    /// Builds an instance of color requests only.
    pub fn from_nodes(
        graph: Arc<Graph>,
        nodes: impl IntoIterator<Item = NodeId>,
    ) -> Result<Self, InstanceError> {
        Self::new(graph, nodes.into_iter().map(Request::color).collect())
    }

    /// Number of requests, cancellations included.
    pub fn n(&self) -> usize {
        self.requests.len()
    }

    pub fn has_cancellations(&self) -> bool {
        self.requests.iter().any(Request::is_cancel)
    }

    /// The first `len` requests on the same graph.
    pub fn prefix(&self, len: usize) -> Instance {
        Instance {
            graph: Arc::clone(&self.graph),
            requests: self.requests[..len].to_vec(),
        }
    }
}

/// `n_v`: number of color requests per node. Cancellations do not count.
pub fn demand(instance: &Instance) -> Vec<u32> {
    let mut d = vec![0u32; instance.graph.len()];
    for r in &instance.requests {
        if r.op == Op::Color {
            d[r.node.0] += 1;
        }
    }
    d
}

/// Largest number of simultaneously live requests inside one maximal clique.
pub fn peak_clique_load(instance: &Instance) -> Result<u32, InstanceError> {
    let g = &instance.graph;
    let cliques = maximal_cliques(g);
    let mut member_of: Vec<Vec<usize>> = vec![Vec::new(); g.len()];
    for (ci, c) in cliques.iter().enumerate() {
        for v in c {
            member_of[v.0].push(ci);
        }
    }
    let mut live = vec![0u32; g.len()];
    let mut load = vec![0u32; cliques.len()];
    let mut peak = 0;
    for (step, r) in instance.requests.iter().enumerate() {
        let v = r.node.0;
        match r.op {
            Op::Color => {
                live[v] += 1;
                for &ci in &member_of[v] {
                    load[ci] += 1;
                    peak = peak.max(load[ci]);
                }
            }
            Op::Cancel(_) => {
                if live[v] == 0 {
                    return Err(InstanceError::CancelWithoutLive {
                        step,
                        node: g.name(r.node).to_owned(),
                    });
                }
                live[v] -= 1;
                for &ci in &member_of[v] {
                    load[ci] -= 1;
                }
            }
        }
    }
    Ok(peak)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ViolationKind {
    /// `color` is in use at both `node` and its neighbor.
    EdgeConflict {
        node: NodeId,
        neighbor: NodeId,
        color: Color,
    },
    /// `color` is already in use at `node`.
    NodeDuplicate { node: NodeId, color: Color },
    /// Color 0 was assigned.
    InvalidColor { node: NodeId },
    /// The cancelled color is not live at the node.
    BadCancel { node: NodeId, color: Color },
    /// The recolor source is not live at the node after the cancellation.
    BadRecolor { node: NodeId, color: Color },
    /// A color action answered a cancellation or vice versa.
    ActionMismatch { node: NodeId },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub step: usize,
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {}: ", self.step)?;
        match &self.kind {
            ViolationKind::EdgeConflict {
                node,
                neighbor,
                color,
            } => write!(
                f,
                "color {color} used at adjacent nodes #{} and #{}",
                node.0, neighbor.0
            ),
            ViolationKind::NodeDuplicate { node, color } => {
                write!(f, "color {color} already used at node #{}", node.0)
            }
            ViolationKind::InvalidColor { node } => {
                write!(f, "color 0 assigned at node #{}", node.0)
            }
            ViolationKind::BadCancel { node, color } => {
                write!(f, "cancelled color {color} is not live at node #{}", node.0)
            }
            ViolationKind::BadRecolor { node, color } => {
                write!(f, "recolor source {color} is not live at node #{}", node.0)
            }
            ViolationKind::ActionMismatch { node } => {
                write!(f, "action does not match request type at node #{}", node.0)
            }
        }
    }
}

impl std::error::Error for Violation {}

/// The live multi-coloring `f(v)` during a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringState {
    f: Vec<BTreeSet<Color>>,
}

impl ColoringState {
    pub fn new(graph: &Graph) -> Self {
        Self {
            f: vec![BTreeSet::new(); graph.len()],
        }
    }

    pub fn colors(&self, v: NodeId) -> &BTreeSet<Color> {
        &self.f[v.0]
    }

    /// Live color count at `v`.
    pub fn live(&self, v: NodeId) -> usize {
        self.f[v.0].len()
    }

    fn conflict(&self, g: &Graph, v: NodeId, color: Color) -> Option<ViolationKind> {
        if color == 0 {
            return Some(ViolationKind::InvalidColor { node: v });
        }
        if self.f[v.0].contains(&color) {
            return Some(ViolationKind::NodeDuplicate { node: v, color });
        }
        g.neighbors(v)
            .iter()
            .find(|w| self.f[w.0].contains(&color))
            .map(|&w| ViolationKind::EdgeConflict {
                node: v,
                neighbor: w,
                color,
            })
    }

    /// Serves `request` with `action`. On a violation the state is unchanged.
    pub fn apply(
        &mut self,
        g: &Graph,
        step: usize,
        request: &Request,
        action: Action,
    ) -> Result<(), Violation> {
        let v = request.node;
        let fail = |kind| Err(Violation { step, kind });
        match (request.op, action) {
            (Op::Color, Action::Color(c)) => {
                if let Some(kind) = self.conflict(g, v, c) {
                    return fail(kind);
                }
                self.f[v.0].insert(c);
            }
            (Op::Cancel(c), Action::Cancel { recolor }) => {
                if !self.f[v.0].contains(&c) {
                    return fail(ViolationKind::BadCancel { node: v, color: c });
                }
                if let Some(src) = recolor {
                    if src == c || !self.f[v.0].contains(&src) {
                        return fail(ViolationKind::BadRecolor {
                            node: v,
                            color: src,
                        });
                    }
                    // `c` was live at `v`, so no neighbor holds it
                    self.f[v.0].remove(&src);
                } else {
                    self.f[v.0].remove(&c);
                }
            }
            _ => return fail(ViolationKind::ActionMismatch { node: v }),
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Ok,
    Violation(Violation),
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        matches!(self, Verdict::Ok)
    }
}

/// Replays every action from scratch and reports the first violation.
pub fn validate_full(instance: &Instance, log: &[Action]) -> Result<Verdict, InstanceError> {
    if log.len() != instance.n() {
        return Err(InstanceError::LogLength {
            expected: instance.n(),
            got: log.len(),
        });
    }
    let g = &instance.graph;
    let mut state = ColoringState::new(g);
    for (step, (r, &a)) in instance.requests.iter().zip(log).enumerate() {
        if let Err(v) = state.apply(g, step, r, a) {
            return Ok(Verdict::Violation(v));
        }
    }
    Ok(Verdict::Ok)
}

//! The offline 4/3-approximation for hexagonal graphs, evaluated symbolically.
//!
//! Phase 1 colors up to `q = ⌊(ω+1)/3⌋` requests per node from its private
//! colors. Phase 2 lets a node with more requests borrow up to `b_v` colors
//! from the class it borrows from. Whatever is left forms `G2`, which must be
//! bipartite; Phase 3 colors it greedily from the two sides.

use std::collections::VecDeque;

use crate::error::OracleError;
use crate::graph::{clique_weight, Graph, GraphKind, NodeId};
use crate::instance::{demand, Instance};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlanNode {
    pub demand: u32,
    pub phase1: u32,
    /// Largest demand among neighbors in the class this node borrows from.
    pub n_prime: u32,
    /// Most colors this node may borrow, `max{0, q − n'_v}`.
    pub b: u32,
    pub borrow: u32,
    /// Requests left for Phase 3.
    pub pending: u32,
    /// Side in the Phase-3 bipartition; `Some` iff the node is in `G2`.
    pub upper: Option<bool>,
}

impl PlanNode {
    pub fn in_g2(&self) -> bool {
        self.pending > 0
    }

    pub fn leaves_phase1(&self) -> bool {
        self.demand > self.phase1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plan43 {
    pub omega: u32,
    pub q: u32,
    pub nodes: Vec<PlanNode>,
}

impl Plan43 {
    /// Palette of the offline algorithm: `3q` private colors plus `ω − 2q`.
    pub fn palette_bound(&self) -> u32 {
        self.q + self.omega
    }

    /// Largest color the online reader can assign, `4q + 1`.
    pub fn online_palette_bound(&self) -> u32 {
        4 * self.q + 1
    }

    pub fn g2(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, p)| p.in_g2())
            .map(|(i, _)| NodeId(i))
    }
}

pub fn plan_43(instance: &Instance) -> Result<Plan43, OracleError> {
    let g = &instance.graph;
    if g.kind() != GraphKind::Hexagonal {
        return Err(OracleError::WrongKind {
            expected: "hexagonal",
            got: g.kind(),
        });
    }
    if instance.has_cancellations() {
        return Err(OracleError::HasCancellations);
    }
    let d = demand(instance);
    let omega = clique_weight(g, &d);
    let q = (omega + 1) / 3;

    let mut nodes: Vec<PlanNode> = g
        .nodes()
        .map(|v| {
            let n_v = d[v.0];
            let lender = g.class(v).expect("hexagonal").borrows_from();
            let n_prime = g
                .neighbors(v)
                .iter()
                .filter(|w| g.class(**w) == Some(lender))
                .map(|w| d[w.0])
                .max()
                .unwrap_or(0);
            let b = q.saturating_sub(n_prime);
            let phase1 = n_v.min(q);
            let borrow = if n_v > q { (n_v - q).min(b) } else { 0 };
            PlanNode {
                demand: n_v,
                phase1,
                n_prime,
                b,
                borrow,
                pending: n_v - phase1 - borrow,
                upper: None,
            }
        })
        .collect();

    check_g2(g, &nodes, omega, q)?;
    orient_g2(g, &mut nodes)?;
    Ok(Plan43 { omega, q, nodes })
}

fn check_g2(g: &Graph, nodes: &[PlanNode], omega: u32, q: u32) -> Result<(), OracleError> {
    let span = omega - 2 * q;
    if omega > 0 && span > q + 1 {
        return Err(OracleError::Inconsistent(format!(
            "ω − 2q = {span} exceeds q + 1 = {}",
            q + 1
        )));
    }
    for (a, b) in g.edges() {
        let (pa, pb) = (&nodes[a.0], &nodes[b.0]);
        if !(pa.in_g2() && pb.in_g2()) {
            continue;
        }
        if pa.pending + pb.pending > span {
            return Err(OracleError::Inconsistent(format!(
                "G2 edge {}-{} has {} pending requests, more than ω − 2q = {span}",
                g.name(a),
                g.name(b),
                pa.pending + pb.pending
            )));
        }
        if let Some(c) = g
            .neighbors(a)
            .iter()
            .find(|c| nodes[c.0].in_g2() && g.is_adjacent(b, **c))
        {
            return Err(OracleError::Inconsistent(format!(
                "G2 contains triangle {}, {}, {}",
                g.name(a),
                g.name(b),
                g.name(*c)
            )));
        }
    }
    Ok(())
}

/// Two-colors every component of `G2`; the smallest name in a component is lower.
fn orient_g2(g: &Graph, nodes: &mut [PlanNode]) -> Result<(), OracleError> {
    let mut order: Vec<NodeId> = g.nodes().filter(|v| nodes[v.0].in_g2()).collect();
    order.sort_by(|&a, &b| g.name_order(a, b));
    for root in order {
        if nodes[root.0].upper.is_some() {
            continue;
        }
        nodes[root.0].upper = Some(false);
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            let side = nodes[v.0].upper.expect("visited");
            for &w in g.neighbors(v) {
                if !nodes[w.0].in_g2() {
                    continue;
                }
                match nodes[w.0].upper {
                    None => {
                        nodes[w.0].upper = Some(!side);
                        queue.push_back(w);
                    }
                    Some(s) if s == side => {
                        return Err(OracleError::Inconsistent(format!(
                            "G2 is not bipartite at edge {}-{}",
                            g.name(v),
                            g.name(w)
                        )));
                    }
                    Some(_) => {}
                }
            }
        }
    }
    Ok(())
}

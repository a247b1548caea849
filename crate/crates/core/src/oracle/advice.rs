//! Advice tapes written by the oracle, one generator per online player.

use std::collections::VecDeque;

use crate::error::OracleError;
use crate::graph::{clique_weight, GraphKind};
use crate::instance::{demand, peak_clique_load, Instance};
use crate::tape::{bit_len, AdviceTape};

use super::exact::{opt_exact, Budget};
use super::plan43::plan_43;

fn require_bipartite(instance: &Instance) -> Result<(), OracleError> {
    match instance.graph.kind() {
        GraphKind::Path | GraphKind::Bipartite => Ok(()),
        got => Err(OracleError::WrongKind {
            expected: "path or bipartite",
            got,
        }),
    }
}

fn require_hexagonal(instance: &Instance) -> Result<(), OracleError> {
    match instance.graph.kind() {
        GraphKind::Hexagonal => Ok(()),
        got => Err(OracleError::WrongKind {
            expected: "hexagonal",
            got,
        }),
    }
}

/// Opt of a bipartite instance: the heaviest edge or node.
pub fn opt_bipartite(instance: &Instance) -> Result<u32, OracleError> {
    require_bipartite(instance)?;
    if instance.has_cancellations() {
        return Err(OracleError::HasCancellations);
    }
    Ok(clique_weight(&instance.graph, &demand(instance)))
}

/// `enc(Opt)`.
pub fn advice_greedyopt(instance: &Instance) -> Result<AdviceTape, OracleError> {
    let opt = opt_bipartite(instance)?;
    let mut tape = AdviceTape::new();
    tape.push_enc(u64::from(opt));
    Ok(tape)
}

/// Splits `opt` into its `b` high-order bits and the count `a` of dropped low bits.
pub fn truncate_opt(opt: u64, b: u32) -> (u64, u32) {
    let len = bit_len(opt);
    if len <= b {
        (opt, 0)
    } else {
        let a = len - b;
        (opt >> a, a)
    }
}

/// The `b` high-order bits of Opt (zero-padded), then `enc(a)`.
pub fn advice_truncated(instance: &Instance, b: u32) -> Result<AdviceTape, OracleError> {
    if b == 0 {
        return Err(OracleError::ZeroWidth);
    }
    let opt = opt_bipartite(instance)?;
    let (high, a) = truncate_opt(u64::from(opt), b);
    let mut tape = AdviceTape::new();
    tape.push_fixed(high, b);
    tape.push_enc(u64::from(a));
    Ok(tape)
}

/// `enc(peak clique load)`: enough for the cancellation-aware greedy player.
pub fn advice_cancel(instance: &Instance) -> Result<AdviceTape, OracleError> {
    require_bipartite(instance)?;
    let peak = peak_clique_load(instance)?;
    let mut tape = AdviceTape::new();
    tape.push_enc(u64::from(peak));
    Ok(tape)
}

/// `enc(w)` followed by one `w`-bit field `color − 1` per request, where
/// `w = ⌈log(Opt+1)⌉` and the colors replay an optimal witness.
pub fn advice_trivial(instance: &Instance, budget: &Budget) -> Result<AdviceTape, OracleError> {
    let witness = opt_exact(instance, budget)?;
    let w = bit_len(u64::from(witness.value));
    let mut queues: Vec<VecDeque<u32>> = witness.coloring.into_iter().map(VecDeque::from).collect();
    let mut tape = AdviceTape::new();
    tape.push_enc(u64::from(w));
    for r in &instance.requests {
        let c = queues[r.node.0]
            .pop_front()
            .expect("witness covers every request");
        tape.push_fixed(u64::from(c - 1), w);
    }
    Ok(tape)
}

/// `enc(⌈ω/2⌉)`.
pub fn advice_fpa(instance: &Instance) -> Result<AdviceTape, OracleError> {
    require_hexagonal(instance)?;
    let omega = clique_weight(&instance.graph, &demand(instance));
    let mut tape = AdviceTape::new();
    tape.push_enc(u64::from(omega.div_ceil(2)));
    Ok(tape)
}

/// Exactly the bits the 4/3 reader consumes, request by request.
///
/// Per node: one `0` per Phase-1 request; on the first request past Phase 1 a
/// stop bit `1`; one `0` per borrowed color; and on the first Phase-3 request
/// a second stop bit `1` followed by the node's partition bit.
pub fn advice_43(instance: &Instance) -> Result<AdviceTape, OracleError> {
    let plan = plan_43(instance)?;
    let mut served = vec![0u32; instance.graph.len()];
    let mut tape = AdviceTape::new();
    for r in &instance.requests {
        let p = &plan.nodes[r.node.0];
        let k = served[r.node.0];
        served[r.node.0] += 1;
        if k < p.phase1 {
            tape.push_bit(false);
            continue;
        }
        if k == p.phase1 {
            tape.push_bit(true);
        }
        if k < p.phase1 + p.borrow {
            tape.push_bit(false);
        } else if k == p.phase1 + p.borrow {
            let upper = p.upper.ok_or_else(|| {
                OracleError::Inconsistent(format!(
                    "node {} reaches Phase 3 outside G2",
                    instance.graph.name(r.node)
                ))
            })?;
            tape.push_bit(true);
            tape.push_bit(upper);
        }
    }
    Ok(tape)
}

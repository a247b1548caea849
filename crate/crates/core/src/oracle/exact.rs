//! Exact offline optimum for small cancellation-free instances.
//!
//! A multi-coloring with `C` colors is a sequence of `C` independent sets that
//! covers every node `v` exactly `n_v` times. The search repeatedly takes the
//! needy node with the largest residual demand and branches over the maximal
//! independent sets (among still-needy nodes) that contain it. Any optimal
//! solution has a color class through that node, and enlarging a class to a
//! maximal one never hurts, so the branching is complete. Residual clique
//! weight prunes, and residual vectors that already failed are memoized.

use std::collections::HashMap;

use crate::error::OracleError;
use crate::graph::{maximal_cliques, NodeId};
use crate::instance::{demand, Color, Instance};

/// Size caps for the exact search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Nodes with non-zero demand.
    pub max_nodes: usize,
    pub max_requests: usize,
    /// Search-tree nodes visited across all palette sizes.
    pub max_steps: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_nodes: 16,
            max_requests: 48,
            max_steps: 2_000_000,
        }
    }
}

/// An optimal palette size and a coloring that realizes it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptWitness {
    pub value: u32,
    /// Sorted colors per node, indexed by node.
    pub coloring: Vec<Vec<Color>>,
}

struct Search {
    adj: Vec<u64>,
    cliques: Vec<u64>,
    steps: u64,
    max_steps: u64,
    failed: HashMap<Vec<u16>, u32>,
    chosen: Vec<u64>,
}

impl Search {
    fn clique_bound(&self, residual: &[u16]) -> u32 {
        self.cliques
            .iter()
            .map(|&c| iter_bits(c).map(|i| u32::from(residual[i])).sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    /// Maximal independent subsets of `cand` (Bron–Kerbosch on the complement).
    fn independent_sets(&self, r: u64, p: u64, x: u64, out: &mut Vec<u64>) {
        if p == 0 {
            if x == 0 {
                out.push(r);
            }
            return;
        }
        let pivot = iter_bits(p | x)
            .max_by_key(|&u| (p & !self.adj[u] & !(1 << u)).count_ones())
            .expect("p | x is non-empty");
        let mut p = p;
        let mut x = x;
        // branch on vertices that are adjacent to the pivot (non-neighbors in the complement)
        let branch = p & (self.adj[pivot] | (1 << pivot));
        for v in iter_bits(branch) {
            let keep = !self.adj[v] & !(1 << v);
            self.independent_sets(r | (1 << v), p & keep, x & keep, out);
            p &= !(1 << v);
            x |= 1 << v;
        }
    }

    fn feasible(&mut self, residual: &mut Vec<u16>, remaining: u32) -> Result<bool, ()> {
        self.steps += 1;
        if self.steps > self.max_steps {
            return Err(());
        }
        let needy: u64 = residual
            .iter()
            .enumerate()
            .filter(|(_, &d)| d > 0)
            .fold(0, |m, (i, _)| m | (1 << i));
        if needy == 0 {
            return Ok(true);
        }
        if remaining == 0 || self.clique_bound(residual) > remaining {
            return Ok(false);
        }
        if let Some(&worst) = self.failed.get(residual.as_slice()) {
            if remaining <= worst {
                return Ok(false);
            }
        }
        // largest residual first; ties by local index (already name-ordered)
        let pick = iter_bits(needy)
            .max_by(|&a, &b| residual[a].cmp(&residual[b]).then(b.cmp(&a)))
            .expect("needy is non-empty");
        let cand = needy & !self.adj[pick] & !(1 << pick);
        let mut sets = Vec::new();
        self.independent_sets(1 << pick, cand, 0, &mut sets);
        sets.sort_by(|a, b| b.count_ones().cmp(&a.count_ones()).then(a.cmp(b)));
        for s in sets {
            for i in iter_bits(s) {
                residual[i] -= 1;
            }
            self.chosen.push(s);
            let found = self.feasible(residual, remaining - 1)?;
            if found {
                return Ok(true);
            }
            self.chosen.pop();
            for i in iter_bits(s) {
                residual[i] += 1;
            }
        }
        let entry = self.failed.entry(residual.clone()).or_insert(0);
        *entry = (*entry).max(remaining);
        Ok(false)
    }
}

fn iter_bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

/// Colors used by first-fit in request order: a quick upper bound on Opt.
pub fn first_fit_colors(instance: &Instance) -> u32 {
    let g = &instance.graph;
    let mut f: Vec<Vec<Color>> = vec![Vec::new(); g.len()];
    let mut max = 0;
    for r in instance.requests.iter().filter(|r| !r.is_cancel()) {
        let v = r.node;
        let taken =
            |c: Color| f[v.0].contains(&c) || g.neighbors(v).iter().any(|w| f[w.0].contains(&c));
        let c = (1..).find(|&c| !taken(c)).expect("colors are unbounded");
        f[v.0].push(c);
        max = max.max(c);
    }
    max
}

/// Minimum number of colors for a cancellation-free instance, with a witness.
pub fn opt_exact(instance: &Instance, budget: &Budget) -> Result<OptWitness, OracleError> {
    if instance.has_cancellations() {
        return Err(OracleError::HasCancellations);
    }
    let g = &instance.graph;
    let d = demand(instance);
    let mut active: Vec<NodeId> = g.nodes().filter(|v| d[v.0] > 0).collect();
    let requests = instance.n();
    if active.len() > budget.max_nodes.min(64) || requests > budget.max_requests {
        return Err(OracleError::TooLarge {
            nodes: active.len(),
            requests,
        });
    }
    active.sort_by(|&a, &b| d[b.0].cmp(&d[a.0]).then(g.name_order(a, b)));
    let local: HashMap<NodeId, usize> = active.iter().enumerate().map(|(i, &v)| (v, i)).collect();

    let adj: Vec<u64> = active
        .iter()
        .map(|&v| {
            g.neighbors(v)
                .iter()
                .filter_map(|w| local.get(w))
                .fold(0u64, |m, &j| m | (1 << j))
        })
        .collect();
    let mut cliques: Vec<u64> = maximal_cliques(g)
        .iter()
        .map(|c| {
            c.iter()
                .filter_map(|v| local.get(v))
                .fold(0u64, |m, &j| m | (1 << j))
        })
        .filter(|&m| m != 0)
        .collect();
    cliques.sort_unstable();
    cliques.dedup();

    let mut residual: Vec<u16> = active.iter().map(|v| d[v.0] as u16).collect();
    let mut search = Search {
        adj,
        cliques,
        steps: 0,
        max_steps: budget.max_steps,
        failed: HashMap::new(),
        chosen: Vec::new(),
    };
    let lower = search.clique_bound(&residual);
    let upper = first_fit_colors(instance);
    let mut c = lower;
    while c < upper {
        search.failed.clear();
        search.chosen.clear();
        match search.feasible(&mut residual, c) {
            Ok(true) => {
                let mut coloring: Vec<Vec<Color>> = vec![Vec::new(); g.len()];
                for (i, &set) in search.chosen.iter().enumerate() {
                    for j in iter_bits(set) {
                        coloring[active[j].0].push(i as Color + 1);
                    }
                }
                return Ok(OptWitness { value: c, coloring });
            }
            Ok(false) => c += 1,
            Err(()) => return Err(OracleError::BudgetExceeded { lower: c, upper }),
        }
    }
    // every smaller palette failed (or ω already matches): first-fit is optimal
    let coloring = first_fit_coloring(instance);
    Ok(OptWitness {
        value: upper,
        coloring,
    })
}

fn first_fit_coloring(instance: &Instance) -> Vec<Vec<Color>> {
    let g = &instance.graph;
    let mut f: Vec<Vec<Color>> = vec![Vec::new(); g.len()];
    for r in &instance.requests {
        let v = r.node;
        let taken =
            |c: Color| f[v.0].contains(&c) || g.neighbors(v).iter().any(|w| f[w.0].contains(&c));
        let c = (1..).find(|&c| !taken(c)).expect("colors are unbounded");
        f[v.0].push(c);
    }
    for cs in &mut f {
        cs.sort_unstable();
    }
    f
}

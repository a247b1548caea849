//! Lower-bound instance families and seeded random corpora.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::GenError;
use crate::graph::{
    build_bipartite, build_hexagonal_ordered, build_path, CellCoord, Graph, GraphKind, NodeId, Side,
};
use crate::instance::{peak_clique_load, Instance, Request};
use crate::online::{GreedyCancel, OnlinePlayer};
use crate::tape::AdviceTape;

/// Number of path nodes used by [`path_family`].
pub const PATH_FAMILY_NODES: usize = 10;

/// `I_0, …, I_m` with `m = ⌊n/4⌋` on a 10-node path.
///
/// `I_i` sends `m` requests to each of `v1`, `v4`, then `i` to each of `v2`,
/// `v3`, then spreads the remaining `n − 2m − 2i` over `v6`, `v8`, `v10`.
/// Every member has length `n` and they all share the first `2m` requests.
pub fn path_family(n: usize) -> Result<Vec<Instance>, GenError> {
    if n < 40 {
        return Err(GenError::SequenceTooShort(n));
    }
    let graph = Arc::new(build_path(PATH_FAMILY_NODES)?);
    let v = |i: usize| NodeId(i - 1);
    let m = n / 4;
    let family = (0..=m)
        .map(|i| {
            let t = n - 2 * m - 2 * i;
            let f6 = t.div_ceil(3);
            let f8 = (t - f6).div_ceil(2);
            let f10 = t - f6 - f8;
            let counts = [(1, m), (4, m), (2, i), (3, i), (6, f6), (8, f8), (10, f10)];
            let nodes = counts
                .iter()
                .flat_map(|&(k, c)| std::iter::repeat_n(v(k), c));
            Instance::from_nodes(Arc::clone(&graph), nodes).expect("nodes are on the path")
        })
        .collect();
    Ok(family)
}

/// Node ids of a chain gadget, indexed by the names used in the construction.
#[derive(Debug, Clone)]
pub struct Chain {
    pub instance: Instance,
    /// `O_0..=O_k`.
    pub o: Vec<NodeId>,
    /// Per unit `j` (index `j − 1`): the D pair.
    pub d: Vec<[NodeId; 2]>,
    /// Per unit: `S_{2j−1}` (shares both O-neighbors) and the isolated `S_{2j}`.
    pub s: Vec<[NodeId; 2]>,
    pub r: NodeId,
}

/// Graph, O nodes, D pairs, S pairs and R.
type ChainParts = (
    Arc<Graph>,
    Vec<NodeId>,
    Vec<[NodeId; 2]>,
    Vec<[NodeId; 2]>,
    NodeId,
);

fn chain_graph(k: usize) -> Result<ChainParts, GenError> {
    let mut names = Vec::new();
    let mut coords = Vec::new();
    let mut put = |name: String, q: usize, r: i32| {
        names.push(name);
        coords.push(CellCoord::new(q as i32, r));
        NodeId(names.len() - 1)
    };
    let o: Vec<_> = (0..=k).map(|j| put(format!("O{j}"), 2 * j, 0)).collect();
    let mut d = Vec::with_capacity(k);
    let mut s = Vec::with_capacity(k);
    for j in 1..=k {
        // D pairs alternate above and below the O row
        let pair = if j % 2 == 1 {
            [
                put(format!("D{}", 2 * j - 1), 2 * j - 2, 1),
                put(format!("D{}", 2 * j), 2 * j - 1, 1),
            ]
        } else {
            [
                put(format!("D{}", 2 * j - 1), 2 * j - 1, -1),
                put(format!("D{}", 2 * j), 2 * j, -1),
            ]
        };
        d.push(pair);
        s.push([
            put(format!("S{}", 2 * j - 1), 2 * j - 1, 0),
            put(format!("S{}", 2 * j), 2 * j, -3),
        ]);
    }
    let r = put("R".to_owned(), 2 * k + 4, 0);
    let graph = build_hexagonal_ordered(names, coords)?;
    Ok((Arc::new(graph), o, d, s, r))
}

/// The repeated two-way gadget: one request per `O_j`, then per unit either
/// the D pair (`branch = true`, forcing `O_{j−1} ≠ O_j` in a 2-coloring) or
/// `S_{2j−1}, S_{2j}` (forcing `O_{j−1} = O_j`), then `padding` requests to `R`.
pub fn hex_chain(k: usize, branch: &[bool], padding: usize) -> Result<Chain, GenError> {
    if k == 0 {
        return Err(GenError::NoUnits);
    }
    if branch.len() != k {
        return Err(GenError::BranchLength {
            k,
            got: branch.len(),
        });
    }
    let (graph, o, d, s, r) = chain_graph(k)?;
    let mut requests: Vec<Request> = o.iter().map(|&v| Request::color(v)).collect();
    for (j, &bit) in branch.iter().enumerate() {
        let pair = if bit { d[j] } else { s[j] };
        requests.extend(pair.iter().map(|&v| Request::color(v)));
    }
    requests.extend(std::iter::repeat_n(Request::color(r), padding));
    let instance = Instance::new(graph, requests).expect("gadget nodes exist");
    Ok(Chain {
        instance,
        o,
        d,
        s,
        r,
    })
}

/// One chain unit scaled up: `p/4` requests to each of `O_0`, `O_1`, then
/// `p/4` to each node of the chosen pair. Opt is `p/2` for both branches.
pub fn hex_54(p: u32, branch: bool) -> Result<Chain, GenError> {
    if p == 0 || !p.is_multiple_of(4) {
        return Err(GenError::GadgetSize(p));
    }
    let (graph, o, d, s, r) = chain_graph(1)?;
    let each = (p / 4) as usize;
    let pair = if branch { d[0] } else { s[0] };
    let nodes = [o[0], o[1], pair[0], pair[1]]
        .into_iter()
        .flat_map(|v| std::iter::repeat_n(v, each));
    let instance = Instance::from_nodes(graph, nodes).expect("gadget nodes exist");
    Ok(Chain {
        instance,
        o,
        d,
        s,
        r,
    })
}

/// Size of a random instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SizeParams {
    pub nodes: usize,
    pub requests: usize,
    /// Edge probability in percent (bipartite only).
    pub density: u32,
}

impl SizeParams {
    pub fn new(nodes: usize, requests: usize) -> Self {
        Self {
            nodes,
            requests,
            density: 50,
        }
    }
}

fn random_graph(
    kind: GraphKind,
    nodes: usize,
    density: u32,
    rng: &mut ChaCha8Rng,
) -> Result<Graph, GenError> {
    if nodes == 0 {
        return Err(GenError::NoNodes);
    }
    match kind {
        GraphKind::Path => Ok(build_path(nodes)?),
        GraphKind::Bipartite => {
            let names: Vec<String> = (0..nodes).map(|i| format!("n{i}")).collect();
            let sides: BTreeMap<String, Side> = names
                .iter()
                .map(|n| (n.clone(), if rng.gen_bool(0.5) { Side::L } else { Side::U }))
                .collect();
            let p = f64::from(density.min(100)) / 100.0;
            let mut edges = Vec::new();
            for a in 0..nodes {
                for b in a + 1..nodes {
                    if sides[&names[a]] != sides[&names[b]] && rng.gen_bool(p) {
                        edges.push((names[a].as_str(), names[b].as_str()));
                    }
                }
            }
            Ok(build_bipartite(
                &names.iter().map(String::as_str).collect::<Vec<_>>(),
                &edges,
                &sides,
            )?)
        }
        GraphKind::Hexagonal => {
            // random cells of a square patch with ~2x spare room
            let side = ((2 * nodes) as f64).sqrt().ceil() as i32;
            let mut cells: Vec<CellCoord> = (0..side)
                .flat_map(|q| (0..side).map(move |r| CellCoord::new(q, r)))
                .collect();
            cells.shuffle(rng);
            cells.truncate(nodes);
            cells.sort();
            let names = (0..nodes).map(|i| format!("c{i}")).collect();
            Ok(build_hexagonal_ordered(names, cells)?)
        }
    }
}

/// A reproducible random instance: random graph of the given kind, then
/// `requests` color requests with skewed multiplicities in random order.
pub fn random_instance(kind: GraphKind, size: SizeParams, seed: u64) -> Result<Instance, GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let graph = Arc::new(random_graph(kind, size.nodes, size.density, &mut rng)?);
    // per-node weights make heavy and idle nodes both likely
    let weights: Vec<u32> = (0..size.nodes).map(|_| rng.gen_range(0..=4)).collect();
    let total: u32 = weights.iter().sum();
    let mut nodes: Vec<NodeId> = (0..size.requests)
        .map(|_| {
            if total == 0 {
                return NodeId(rng.gen_range(0..size.nodes));
            }
            let mut x = rng.gen_range(0..total);
            let i = weights.iter().position(|&w| {
                if x < w {
                    true
                } else {
                    x -= w;
                    false
                }
            });
            NodeId(i.expect("x < total"))
        })
        .collect();
    nodes.shuffle(&mut rng);
    Ok(Instance::from_nodes(graph, nodes).expect("nodes are in range"))
}

/// Corpus member `seed`: sizes drawn uniformly up to the caps, then
/// [`random_instance`].
pub fn random_corpus_instance(
    kind: GraphKind,
    max_nodes: usize,
    max_requests: usize,
    seed: u64,
) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let nodes = rng.gen_range(1..=max_nodes.max(1));
    let requests = rng.gen_range(0..=max_requests);
    let density = rng.gen_range(20..=80);
    random_instance(
        kind,
        SizeParams {
            nodes,
            requests,
            density,
        },
        seed,
    )
    .expect("nodes >= 1")
}

/// A bipartite instance with interleaved cancellations.
///
/// Cancellations name a concrete color, so the sequence is fixed by driving
/// the cancellation-aware greedy player on it with `m` equal to the peak
/// clique load and cancelling a uniformly random live color at the node.
pub fn random_cancel_instance(
    size: SizeParams,
    cancel_percent: u32,
    seed: u64,
) -> Result<Instance, GenError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let graph = Arc::new(random_graph(
        GraphKind::Bipartite,
        size.nodes,
        size.density,
        &mut rng,
    )?);
    let mut live = vec![0u32; size.nodes];
    let mut skeleton = Vec::with_capacity(size.requests);
    for _ in 0..size.requests {
        let v = rng.gen_range(0..size.nodes);
        if live[v] > 0 && rng.gen_range(0..100) < cancel_percent {
            live[v] -= 1;
            // placeholder color, resolved below
            skeleton.push(Request::cancel(NodeId(v), 0));
        } else {
            live[v] += 1;
            skeleton.push(Request::color(NodeId(v)));
        }
    }
    let draft = Instance::new(Arc::clone(&graph), skeleton).expect("nodes are in range");
    let peak = peak_clique_load(&draft).expect("cancels only hit live nodes");

    let mut tape = AdviceTape::new();
    tape.push_enc(u64::from(peak));
    let mut player = GreedyCancel::new(Arc::clone(&graph), &mut tape).expect("bipartite graph");
    let mut requests = draft.requests;
    for (step, r) in requests.iter_mut().enumerate() {
        if r.is_cancel() {
            let live: Vec<_> = player.colors(r.node).iter().copied().collect();
            *r = Request::cancel(r.node, *live.choose(&mut rng).expect("node is live"));
        }
        player
            .serve(step, r, &mut tape)
            .expect("peak load suffices for the greedy player");
    }
    Ok(Instance::new(graph, requests).expect("nodes are in range"))
}

//! Experiment plumbing: JSON instance files, single runs with oracle-written
//! tapes, and order-preserving CSV batches.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{GraphError, InstanceError, OracleError, PlayerError, TapeError};
use crate::graph::{
    build_bipartite, build_hexagonal_ordered, build_path_named, clique_weight, GraphKind, Side,
};
use crate::instance::{
    demand, peak_clique_load, validate_full, Action, Color, Instance, Op, Request, Verdict,
};
use crate::online::{run_online, Algorithm, GreedyOpt, UnknownAlgorithm};
use crate::oracle::{
    advice_43, advice_cancel, advice_fpa, advice_greedyopt, advice_trivial, advice_truncated,
    opt_bipartite, opt_exact, truncate_opt, Budget, OptWitness,
};
use crate::tape::{bit_len, enc_len, AdviceTape};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed instance: {0}")]
    Format(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Tape(#[from] TapeError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Player(#[from] PlayerError),
    #[error(transparent)]
    Algorithm(#[from] UnknownAlgorithm),
    #[error("CSV output failed: {0}")]
    Csv(#[from] csv::Error),
}

fn read(path: &Path) -> Result<String, HarnessError> {
    std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
        path: path.to_owned(),
        source,
    })
}

// ---------------------------------------------------------------------------
// instance files

#[derive(Debug, Clone, Serialize, Deserialize)]
struct GraphFile {
    kind: GraphKind,
    nodes: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    edges: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    partition: BTreeMap<String, Side>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    cells: BTreeMap<String, (i32, i32)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum OpName {
    Color,
    Cancel,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RequestFile {
    node: String,
    op: OpName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    color: Option<Color>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct InstanceFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    id: Option<String>,
    graph: GraphFile,
    requests: Vec<RequestFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tape: Option<String>,
}

/// An instance as read from disk, with its optional id and golden tape.
#[derive(Debug, Clone)]
pub struct LoadedInstance {
    pub id: Option<String>,
    pub instance: Instance,
    pub tape: Option<AdviceTape>,
}

fn bad(msg: impl Into<String>) -> HarnessError {
    HarnessError::Format(msg.into())
}

/// Parses the JSON instance format.
pub fn parse_instance(json: &str) -> Result<LoadedInstance, HarnessError> {
    let file: InstanceFile = serde_json::from_str(json)?;
    let g = file.graph;
    let graph = match g.kind {
        GraphKind::Path => {
            let graph = build_path_named(g.nodes)?;
            if !g.edges.is_empty() {
                let want: BTreeSet<_> = graph
                    .edges()
                    .map(|(a, b)| sorted_pair(graph.name(a), graph.name(b)))
                    .collect();
                let got: BTreeSet<_> = g.edges.iter().map(|(a, b)| sorted_pair(a, b)).collect();
                if want != got {
                    return Err(bad(
                        "path edges must join consecutive nodes in `nodes` order",
                    ));
                }
            }
            graph
        }
        GraphKind::Bipartite => build_bipartite(&g.nodes, &g.edges, &g.partition)?,
        GraphKind::Hexagonal => {
            if !g.edges.is_empty() {
                return Err(bad(
                    "hexagonal adjacency is derived from `cells`; drop `edges`",
                ));
            }
            let coords = g
                .nodes
                .iter()
                .map(|n| {
                    g.cells
                        .get(n)
                        .map(|&(q, r)| crate::graph::CellCoord::new(q, r))
                        .ok_or_else(|| bad(format!("node `{n}` has no cell")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            if let Some(extra) = g.cells.keys().find(|k| !g.nodes.contains(k)) {
                return Err(GraphError::UnknownNode(extra.clone()).into());
            }
            build_hexagonal_ordered(g.nodes, coords)?
        }
    };
    let graph = Arc::new(graph);
    let requests = file
        .requests
        .iter()
        .enumerate()
        .map(|(step, r)| {
            let node = graph
                .node(&r.node)
                .ok_or_else(|| bad(format!("request {step} names unknown node `{}`", r.node)))?;
            match (r.op, r.color) {
                (OpName::Color, None) => Ok(Request::color(node)),
                (OpName::Cancel, Some(c)) => Ok(Request::cancel(node, c)),
                (OpName::Color, Some(_)) => Err(bad(format!(
                    "request {step}: color requests take no `color`"
                ))),
                (OpName::Cancel, None) => {
                    Err(bad(format!("request {step}: cancel needs a `color`")))
                }
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    let tape = file.tape.as_deref().map(str::parse).transpose()?;
    Ok(LoadedInstance {
        id: file.id,
        instance: Instance::new(graph, requests)?,
        tape,
    })
}

fn sorted_pair(a: &str, b: &str) -> (String, String) {
    if a <= b {
        (a.to_owned(), b.to_owned())
    } else {
        (b.to_owned(), a.to_owned())
    }
}

pub fn load_instance(path: &Path) -> Result<LoadedInstance, HarnessError> {
    parse_instance(&read(path)?)
}

/// Renders an instance in the JSON file format.
pub fn instance_to_json(instance: &Instance, id: Option<&str>) -> String {
    let g = &instance.graph;
    let name = |v| g.name(v).to_owned();
    let mut file = GraphFile {
        kind: g.kind(),
        nodes: g.names().to_vec(),
        edges: Vec::new(),
        partition: BTreeMap::new(),
        cells: BTreeMap::new(),
    };
    match g.kind() {
        GraphKind::Path | GraphKind::Bipartite => {
            file.edges = g.edges().map(|(a, b)| (name(a), name(b))).collect();
            if g.kind() == GraphKind::Bipartite {
                file.partition = g
                    .nodes()
                    .map(|v| (name(v), g.side(v).expect("bipartite")))
                    .collect();
            }
        }
        GraphKind::Hexagonal => {
            file.cells = g
                .nodes()
                .map(|v| {
                    let c = g.cell(v).expect("hexagonal");
                    (name(v), (c.q, c.r))
                })
                .collect();
        }
    }
    let requests = instance
        .requests
        .iter()
        .map(|r| RequestFile {
            node: name(r.node),
            op: if r.is_cancel() {
                OpName::Cancel
            } else {
                OpName::Color
            },
            color: match r.op {
                Op::Cancel(c) => Some(c),
                Op::Color => None,
            },
        })
        .collect();
    let file = InstanceFile {
        id: id.map(str::to_owned),
        graph: file,
        requests,
        tape: None,
    };
    serde_json::to_string_pretty(&file).expect("plain data serializes")
}

/// Parses an assignment log: a JSON array of actions such as `{"color":3}`
/// or `{"cancel":{"recolor":null}}`.
pub fn parse_log(json: &str) -> Result<Vec<Action>, HarnessError> {
    Ok(serde_json::from_str(json)?)
}

/// Replays an assignment log against an instance.
pub fn verify(instance: &Instance, log: &[Action]) -> Result<Verdict, HarnessError> {
    Ok(validate_full(instance, log)?)
}

// ---------------------------------------------------------------------------
// optimum

/// Optimal value with a witness coloring.
///
/// Path and bipartite graphs use the closed form and the greedy player
/// (which is exact with `m = Opt`) for the witness, so they have no size cap.
pub fn optimum(instance: &Instance, budget: &Budget) -> Result<OptWitness, HarnessError> {
    match instance.graph.kind() {
        GraphKind::Path | GraphKind::Bipartite => {
            let value = opt_bipartite(instance)?;
            let mut player = GreedyOpt::with_palette(Arc::clone(&instance.graph), value)?;
            let mut coloring = vec![Vec::new(); instance.graph.len()];
            let mut tape = AdviceTape::new();
            for (step, r) in instance.requests.iter().enumerate() {
                if let Action::Color(c) =
                    crate::online::OnlinePlayer::serve(&mut player, step, r, &mut tape)?
                {
                    coloring[r.node.0].push(c);
                }
            }
            coloring.iter_mut().for_each(|c| c.sort_unstable());
            Ok(OptWitness { value, coloring })
        }
        GraphKind::Hexagonal => Ok(opt_exact(instance, budget)?),
    }
}

/// Renders a witness as `{"value": …, "coloring": {"node": [colors…]}}`.
pub fn witness_to_json(instance: &Instance, w: &OptWitness) -> String {
    let coloring: BTreeMap<&str, &Vec<Color>> = instance
        .graph
        .nodes()
        .map(|v| (instance.graph.name(v), &w.coloring[v.0]))
        .collect();
    serde_json::to_string_pretty(&serde_json::json!({ "value": w.value, "coloring": coloring }))
        .expect("plain data serializes")
}

// ---------------------------------------------------------------------------
// runs

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    pub budget: Budget,
    /// Record wall-clock time. Off by default so reports are reproducible.
    pub timing: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub algorithm: String,
    pub instance: String,
    pub max_color: Color,
    pub distinct_colors: usize,
    pub advice_bits_read: usize,
    pub opt_value: Option<u32>,
    pub strict_ratio: Option<f64>,
    pub valid: bool,
    pub color_bound: Option<u32>,
    pub bits_bound: Option<usize>,
    pub within_bounds: bool,
    pub runtime_ms: Option<f64>,
    /// `ok`, or the reason the run could not complete.
    pub status: String,
    #[serde(skip)]
    pub actions: Vec<Action>,
}

impl RunReport {
    fn failed(algorithm: String, instance: String, err: &dyn std::fmt::Display) -> Self {
        Self {
            algorithm,
            instance,
            max_color: 0,
            distinct_colors: 0,
            advice_bits_read: 0,
            opt_value: None,
            strict_ratio: None,
            valid: false,
            color_bound: None,
            bits_bound: None,
            within_bounds: false,
            runtime_ms: None,
            status: format!("error: {err}"),
            actions: Vec::new(),
        }
    }

    pub fn is_ok(&self) -> bool {
        self.valid && self.within_bounds
    }
}

/// The tape the oracle writes for `algorithm` on `instance`.
pub fn oracle_tape(
    algorithm: Algorithm,
    instance: &Instance,
    budget: &Budget,
) -> Result<AdviceTape, OracleError> {
    match algorithm {
        Algorithm::GreedyOpt => advice_greedyopt(instance),
        Algorithm::GreedyTruncated { b } => advice_truncated(instance, b),
        Algorithm::GreedyCancel => advice_cancel(instance),
        Algorithm::Trivial => advice_trivial(instance, budget),
        Algorithm::Fpa => advice_fpa(instance),
        Algorithm::Hex43 => advice_43(instance),
    }
}

/// Declared worst-case palette and advice size of `algorithm` on `instance`.
/// `opt` is the reference optimum (peak load for cancellation sequences).
pub fn declared_bounds(
    algorithm: Algorithm,
    instance: &Instance,
    opt: Option<u32>,
) -> (Option<u32>, Option<usize>) {
    let omega = || clique_weight(&instance.graph, &demand(instance));
    let n = instance.n();
    match algorithm {
        Algorithm::GreedyOpt | Algorithm::GreedyCancel => (opt, opt.map(|o| enc_len(u64::from(o)))),
        Algorithm::GreedyTruncated { b } => {
            let Some(o) = opt else { return (None, None) };
            let (_, a) = truncate_opt(u64::from(o), b);
            // ⌊(1 + 2^{1−b})·Opt⌋
            let half = 1u64 << (b - 1).min(40);
            let colors = (u64::from(o) * (half + 1) / half) as u32;
            (Some(colors), Some(b as usize + enc_len(u64::from(a))))
        }
        Algorithm::Trivial => {
            let Some(o) = opt else { return (None, None) };
            let w = bit_len(u64::from(o));
            (Some(o), Some(enc_len(u64::from(w)) + n * w as usize))
        }
        Algorithm::Fpa => {
            let c = omega().div_ceil(2);
            (Some(3 * c), Some(enc_len(u64::from(c))))
        }
        Algorithm::Hex43 => (
            (Some((4 * omega() + 1) / 3)),
            Some(n + 2 * instance.graph.len()),
        ),
    }
}

/// Reference optimum reported next to the run.
fn reference_opt(algorithm: Algorithm, instance: &Instance, budget: &Budget) -> Option<u32> {
    if instance.has_cancellations() {
        return match algorithm {
            Algorithm::GreedyCancel => peak_clique_load(instance).ok(),
            _ => None,
        };
    }
    match instance.graph.kind() {
        GraphKind::Path | GraphKind::Bipartite => opt_bipartite(instance).ok(),
        GraphKind::Hexagonal => opt_exact(instance, budget).ok().map(|w| w.value),
    }
}

/// Generates the oracle tape, runs the player, validates and measures.
pub fn run(instance: &Instance, id: &str, algorithm: Algorithm, opts: &RunOptions) -> RunReport {
    match oracle_tape(algorithm, instance, &opts.budget) {
        Ok(tape) => run_with_tape(instance, id, algorithm, tape, opts),
        Err(e) => RunReport::failed(algorithm.to_string(), id.to_owned(), &e),
    }
}

/// Like [`run`] with an externally supplied tape.
pub fn run_with_tape(
    instance: &Instance,
    id: &str,
    algorithm: Algorithm,
    mut tape: AdviceTape,
    opts: &RunOptions,
) -> RunReport {
    let start = Instant::now();
    let actions = match run_online(algorithm, &instance.graph, &instance.requests, &mut tape) {
        Ok(a) => a,
        Err(e) => return RunReport::failed(algorithm.to_string(), id.to_owned(), &e),
    };
    let runtime_ms = opts.timing.then(|| start.elapsed().as_secs_f64() * 1e3);
    let valid = matches!(validate_full(instance, &actions), Ok(Verdict::Ok));
    let colors: BTreeSet<Color> = actions
        .iter()
        .filter_map(|a| match a {
            Action::Color(c) => Some(*c),
            Action::Cancel { .. } => None,
        })
        .collect();
    let max_color = colors.last().copied().unwrap_or(0);
    let opt_value = reference_opt(algorithm, instance, &opts.budget);
    let strict_ratio = opt_value
        .filter(|&o| o > 0)
        .map(|o| f64::from(max_color) / f64::from(o));
    let (color_bound, bits_bound) = declared_bounds(algorithm, instance, opt_value);
    let bits = tape.high_water();
    let within_bounds = valid
        && color_bound.is_some_and(|c| max_color <= c)
        && bits_bound.is_some_and(|b| bits <= b);
    RunReport {
        algorithm: algorithm.to_string(),
        instance: id.to_owned(),
        max_color,
        distinct_colors: colors.len(),
        advice_bits_read: bits,
        opt_value,
        strict_ratio,
        valid,
        color_bound,
        bits_bound,
        within_bounds,
        runtime_ms,
        status: if valid {
            "ok".into()
        } else {
            "error: invalid coloring".into()
        },
        actions,
    }
}

// ---------------------------------------------------------------------------
// batches

/// One manifest entry: an instance file (relative to the manifest) and an
/// algorithm id such as `fpa` or `greedy_truncated:3`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub instance: PathBuf,
    pub algo: String,
}

pub fn load_manifest(path: &Path) -> Result<Vec<ManifestEntry>, HarnessError> {
    let mut entries: Vec<ManifestEntry> = serde_json::from_str(&read(path)?)?;
    let base = path.parent().unwrap_or(Path::new("."));
    for e in &mut entries {
        if e.instance.is_relative() {
            e.instance = base.join(&e.instance);
        }
    }
    Ok(entries)
}

fn batch_one(entry: &ManifestEntry, opts: &RunOptions) -> RunReport {
    let id = entry.instance.display().to_string();
    let algorithm: Algorithm = match entry.algo.parse() {
        Ok(a) => a,
        Err(e) => return RunReport::failed(entry.algo.clone(), id, &e),
    };
    match load_instance(&entry.instance) {
        Ok(loaded) => {
            let id = loaded.id.unwrap_or(id);
            run(&loaded.instance, &id, algorithm, opts)
        }
        Err(e) => RunReport::failed(algorithm.to_string(), id, &e),
    }
}

/// Runs every entry (in parallel) and returns reports in manifest order.
pub fn batch(entries: &[ManifestEntry], opts: &RunOptions) -> Vec<RunReport> {
    entries.par_iter().map(|e| batch_one(e, opts)).collect()
}

/// Writes reports as CSV with a header row.
pub fn write_csv<W: std::io::Write>(reports: &[RunReport], out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    for r in reports {
        w.serialize(r)?;
    }
    w.flush().map_err(|source| HarnessError::Io {
        path: PathBuf::from("<csv>"),
        source,
    })?;
    Ok(())
}

pub fn reports_to_csv(reports: &[RunReport]) -> Result<String, HarnessError> {
    let mut buf = Vec::new();
    write_csv(reports, &mut buf)?;
    Ok(String::from_utf8(buf).expect("CSV output is UTF-8"))
}

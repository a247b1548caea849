//! Acceptance criteria. Each test writes one `[PASS]`/`[FAIL]` line to stderr
//! (bypassing output capture) and then asserts.

use std::collections::BTreeSet;
use std::io::Write;
use std::sync::Arc;

use mcadvice::adversary::{
    hex_54, hex_chain, path_family, random_cancel_instance, random_corpus_instance, SizeParams,
};
use mcadvice::graph::{clique_weight, GraphKind, Side};
use mcadvice::instance::{demand, peak_clique_load, ColoringState};
use mcadvice::online::{run_online, Algorithm};
use mcadvice::oracle::{
    advice_43, advice_cancel, advice_fpa, advice_greedyopt, advice_trivial, advice_truncated,
    opt_bipartite, opt_exact, truncate_opt, Budget,
};
use mcadvice::tape::{bit_len, dec, enc, enc_len, AdviceTape};
use mcadvice::{Action, Color, Instance, NodeId, Op};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BIPARTITE_SEEDS: u64 = 500;
const HEX_SEEDS: u64 = 200;

fn verdict(id: &str, what: &str, failures: &[String]) {
    let line = if failures.is_empty() {
        format!("[PASS] {id}: {what}\n")
    } else {
        let shown: Vec<_> = failures.iter().take(3).map(String::as_str).collect();
        format!(
            "[FAIL] {id}: {what} — {} failure(s), e.g. {}\n",
            failures.len(),
            shown.join("; ")
        )
    };
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(failures.is_empty(), "{line}");
}

fn bipartite_corpus() -> Vec<Instance> {
    (0..BIPARTITE_SEEDS)
        .map(|s| random_corpus_instance(GraphKind::Bipartite, 10, 30, s))
        .collect()
}

fn hex_corpus() -> Vec<Instance> {
    (0..HEX_SEEDS)
        .map(|s| random_corpus_instance(GraphKind::Hexagonal, 12, 36, 10_000 + s))
        .collect()
}

fn max_color(actions: &[Action]) -> Color {
    actions
        .iter()
        .filter_map(|a| match a {
            Action::Color(c) => Some(*c),
            _ => None,
        })
        .max()
        .unwrap_or(0)
}

fn valid(instance: &Instance, actions: &[Action]) -> bool {
    mcadvice::instance::validate_full(instance, actions).is_ok_and(|v| v.is_ok())
}

fn exact(instance: &Instance) -> u32 {
    opt_exact(instance, &Budget::default())
        .expect("corpus fits the oracle")
        .value
}

#[test]
fn ac01_greedy_opt_is_optimal() {
    let mut failures = Vec::new();
    let family = path_family(40).unwrap();
    for (k, inst) in bipartite_corpus().iter().chain(&family).enumerate() {
        let mut tape = advice_greedyopt(inst).unwrap();
        let out = run_online(Algorithm::GreedyOpt, &inst.graph, &inst.requests, &mut tape).unwrap();
        let (got, opt) = (max_color(&out), exact(inst));
        if got != opt || !valid(inst, &out) {
            failures.push(format!("#{k}: maxColor {got} vs Opt {opt}"));
        }
    }
    verdict(
        "AC-1",
        "greedy_opt maxColor = opt_exact on 500 bipartite + path family",
        &failures,
    );
}

#[test]
fn ac02_bipartite_closed_form() {
    let failures: Vec<_> = bipartite_corpus()
        .iter()
        .enumerate()
        .filter_map(|(s, inst)| {
            let (a, b) = (opt_bipartite(inst).unwrap(), exact(inst));
            (a != b).then(|| format!("seed {s}: closed form {a}, exact {b}"))
        })
        .collect();
    verdict(
        "AC-2",
        "opt_bipartite = opt_exact on 500 instances",
        &failures,
    );
}

#[test]
fn ac03_path_family_values() {
    let family = path_family(40).unwrap();
    let mut failures = Vec::new();
    if family.len() != 11 {
        failures.push(format!("{} members, expected 11", family.len()));
    }
    for (i, inst) in family.iter().enumerate() {
        let opt = exact(inst);
        if opt != 10 + i as u32 {
            failures.push(format!("I_{i}: Opt {opt}"));
        }
    }
    verdict("AC-3", "opt_exact(I_i) = 10 + i for n = 40", &failures);
}

#[test]
fn ac04_truncated_advice() {
    let mut failures = Vec::new();
    for inst in bipartite_corpus() {
        let opt = u64::from(opt_bipartite(&inst).unwrap());
        for b in 1..=6u32 {
            let mut tape = advice_truncated(&inst, b).unwrap();
            let out = run_online(
                Algorithm::GreedyTruncated { b },
                &inst.graph,
                &inst.requests,
                &mut tape,
            )
            .unwrap();
            let got = u64::from(max_color(&out));
            let half = 1u64 << (b - 1);
            // maxColor ≤ (1 + 1/2^{b−1})·Opt, multiplied through by 2^{b−1}
            if !valid(&inst, &out) || got * half > (half + 1) * opt {
                failures.push(format!("b={b}: maxColor {got}, Opt {opt}"));
            }
            let (_, a) = truncate_opt(opt, b);
            let want = b as usize + enc_len(u64::from(a));
            if tape.high_water() != want {
                failures.push(format!(
                    "b={b}: read {} bits, expected {want}",
                    tape.high_water()
                ));
            }
        }
    }
    verdict(
        "AC-4",
        "truncated advice within (1+2^(1-b))·Opt, bits = b + enc_len(a)",
        &failures,
    );
}

#[test]
fn ac05_advice_accounting() {
    let mut failures = Vec::new();
    for (x, want) in [(0u64, 1usize), (5, 8)] {
        if enc_len(x) != want || enc(x).len() != want {
            failures.push(format!("enc_len({x}) = {}, expected {want}", enc_len(x)));
        }
    }
    for inst in bipartite_corpus() {
        let opt = opt_bipartite(&inst).unwrap();
        let mut tape = advice_greedyopt(&inst).unwrap();
        run_online(Algorithm::GreedyOpt, &inst.graph, &inst.requests, &mut tape).unwrap();
        if tape.high_water() != enc_len(u64::from(opt)) {
            failures.push(format!("Opt {opt}: read {} bits", tape.high_water()));
        }
    }
    verdict(
        "AC-5",
        "greedy_opt reads exactly enc_len(Opt) bits",
        &failures,
    );
}

#[test]
fn ac06_trivial() {
    let mut failures = Vec::new();
    let kinds = [GraphKind::Path, GraphKind::Bipartite, GraphKind::Hexagonal];
    for s in 0..100u64 {
        let kind = kinds[(s % 3) as usize];
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let size = SizeParams::new(rng.gen_range(1..=10), rng.gen_range(1..=24));
        let inst = mcadvice::adversary::random_instance(kind, size, 20_000 + s).unwrap();
        let opt = exact(&inst);
        let w = bit_len(u64::from(opt)) as usize;
        let n = inst.n();
        let mut tape = advice_trivial(&inst, &Budget::default()).unwrap();
        let out = run_online(Algorithm::Trivial, &inst.graph, &inst.requests, &mut tape).unwrap();
        let bits = tape.high_water();
        if !valid(&inst, &out) || max_color(&out) != opt {
            failures.push(format!(
                "seed {s}: maxColor {} vs Opt {opt}",
                max_color(&out)
            ));
        }
        if bits != enc_len(w as u64) + n * w {
            failures.push(format!(
                "seed {s}: read {bits} bits, expected enc_len({w}) + {n}·{w}"
            ));
        }
        if bits >= (n + 1) * w + enc_len(w as u64) {
            failures.push(format!(
                "seed {s}: {bits} bits not below (n+1)·w + overhead"
            ));
        }
    }
    verdict(
        "AC-6",
        "trivial: maxColor = Opt, bits = enc_len(w) + n·w on 100 instances",
        &failures,
    );
}

#[test]
fn ac07_fpa() {
    let mut failures = Vec::new();
    for (s, inst) in hex_corpus().iter().enumerate() {
        let omega = clique_weight(&inst.graph, &demand(inst));
        let mut tape = advice_fpa(inst).unwrap();
        let out = run_online(Algorithm::Fpa, &inst.graph, &inst.requests, &mut tape).unwrap();
        let got = max_color(&out);
        let opt = exact(inst);
        if !valid(inst, &out) {
            failures.push(format!("seed {s}: invalid output"));
        }
        if got > 3 * omega.div_ceil(2) || 2 * got > 3 * opt + 3 {
            failures.push(format!("seed {s}: maxColor {got}, ω {omega}, Opt {opt}"));
        }
    }
    verdict(
        "AC-7",
        "fpa valid, maxColor ≤ 3·⌈ω/2⌉ ≤ 1.5·Opt + 1.5 on 200 hex instances",
        &failures,
    );
}

#[test]
fn ac08_hex43() {
    let mut failures = Vec::new();
    for (s, inst) in hex_corpus().iter().enumerate() {
        let omega = clique_weight(&inst.graph, &demand(inst));
        let mut tape = match advice_43(inst) {
            Ok(t) => t,
            Err(e) => {
                failures.push(format!("seed {s}: oracle: {e}"));
                continue;
            }
        };
        let written = tape.len();
        let out = match run_online(Algorithm::Hex43, &inst.graph, &inst.requests, &mut tape) {
            Ok(o) => o,
            Err(e) => {
                failures.push(format!("seed {s}: player: {e}"));
                continue;
            }
        };
        let got = max_color(&out);
        let opt = exact(inst);
        if !valid(inst, &out) {
            failures.push(format!("seed {s}: invalid output"));
        }
        if got > (4 * omega + 1) / 3 || 3 * got > 4 * opt + 1 {
            failures.push(format!(
                "seed {s}: maxColor {got} > ⌊(4ω+1)/3⌋ with ω {omega}"
            ));
        }
        if tape.high_water() > inst.n() + 2 * inst.graph.len() {
            failures.push(format!("seed {s}: {} bits read", tape.high_water()));
        }
        if tape.high_water() != written {
            failures.push(format!(
                "seed {s}: consumed {} of {written} bits",
                tape.high_water()
            ));
        }
    }
    verdict(
        "AC-8",
        "hex43 valid, maxColor ≤ ⌊(4ω+1)/3⌋, bits ≤ n + 2|V|, tape consumed",
        &failures,
    );
}

/// Live demand at the moment the peak clique load is first reached.
fn peak_snapshot(inst: &Instance, peak: u32) -> Instance {
    for len in 0..=inst.n() {
        let prefix = inst.prefix(len);
        if peak_clique_load(&prefix).unwrap() == peak {
            let mut live = vec![0usize; inst.graph.len()];
            for r in &prefix.requests {
                match r.op {
                    Op::Color => live[r.node.0] += 1,
                    Op::Cancel(_) => live[r.node.0] -= 1,
                }
            }
            let nodes = live
                .iter()
                .enumerate()
                .flat_map(|(v, &k)| std::iter::repeat_n(NodeId(v), k));
            return Instance::from_nodes(Arc::clone(&inst.graph), nodes).unwrap();
        }
    }
    unreachable!("the full sequence reaches its own peak")
}

#[test]
fn ac09_cancellations() {
    let mut failures = Vec::new();
    for s in 0..200u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let size = SizeParams {
            nodes: rng.gen_range(2..=8),
            requests: rng.gen_range(10..=40),
            density: 50,
        };
        let inst = random_cancel_instance(size, 35, 30_000 + s).unwrap();
        let peak = peak_clique_load(&inst).unwrap();
        let mut tape = advice_cancel(&inst).unwrap();
        let out = run_online(
            Algorithm::GreedyCancel,
            &inst.graph,
            &inst.requests,
            &mut tape,
        )
        .unwrap();
        let g = &inst.graph;
        let mut state = ColoringState::new(g);
        for (step, (r, &a)) in inst.requests.iter().zip(&out).enumerate() {
            if let Err(v) = state.apply(g, step, r, a) {
                failures.push(format!("seed {s}: {v}"));
                break;
            }
            // one run per node: L holds 1..=k, U holds peak−k+1..=peak
            for v in g.nodes() {
                let f: Vec<Color> = state.colors(v).iter().copied().collect();
                let k = f.len() as Color;
                let want: Vec<Color> = match g.side(v).unwrap() {
                    Side::L => (1..=k).collect(),
                    Side::U => (peak + 1 - k..=peak).collect(),
                };
                if f != want {
                    failures.push(format!("seed {s} step {step}: {} holds {f:?}", g.name(v)));
                }
            }
        }
        let got = max_color(&out);
        let witness = exact(&peak_snapshot(&inst, peak));
        if got > peak || peak > witness {
            failures.push(format!(
                "seed {s}: maxColor {got}, peak {peak}, snapshot Opt {witness}"
            ));
        }
    }
    verdict(
        "AC-9",
        "greedy_cancel valid, run-shaped, maxColor ≤ peak ≤ Opt(peak snapshot)",
        &failures,
    );
}

fn proper_two_colorings(inst: &Instance) -> Vec<Vec<Option<u8>>> {
    let nodes: Vec<NodeId> = inst
        .requests
        .iter()
        .map(|r| r.node)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let g = &inst.graph;
    (0u32..1 << nodes.len())
        .filter_map(|mask| {
            let mut c = vec![None; g.len()];
            for (i, v) in nodes.iter().enumerate() {
                c[v.0] = Some((mask >> i & 1) as u8);
            }
            g.edges()
                .all(|(a, b)| c[a.0].is_none() || c[a.0] != c[b.0])
                .then_some(c)
        })
        .collect()
}

#[test]
fn ac10_hex_families() {
    let mut failures = Vec::new();
    for k in 1..=3usize {
        for bits in 0u32..1 << k {
            let branch: Vec<bool> = (0..k).map(|j| bits >> j & 1 == 1).collect();
            let chain = hex_chain(k, &branch, 0).unwrap();
            let opt = exact(&chain.instance);
            if opt != 2 {
                failures.push(format!("{branch:?}: Opt {opt}"));
            }
            let colorings = proper_two_colorings(&chain.instance);
            if colorings.is_empty() {
                failures.push(format!("{branch:?}: no 2-coloring"));
            }
            for c in &colorings {
                for (j, &bit) in branch.iter().enumerate() {
                    let same = c[chain.o[j].0] == c[chain.o[j + 1].0];
                    if same == bit {
                        failures.push(format!("{branch:?}: unit {} relation broken", j + 1));
                    }
                }
            }
        }
    }
    for p in [4u32, 8] {
        for branch in [false, true] {
            let opt = exact(&hex_54(p, branch).unwrap().instance);
            if opt != p / 2 {
                failures.push(format!("hex_54({p}, {branch}): Opt {opt}"));
            }
        }
    }
    verdict(
        "AC-10",
        "chain Opt = 2 with forced O relations; gadget Opt = p/2",
        &failures,
    );
}

#[test]
fn ac11_codec() {
    const MAX: u64 = 1 << 14;
    let mut failures = Vec::new();
    let mut words: Vec<Vec<bool>> = Vec::with_capacity(MAX as usize + 1);
    for x in 0..=MAX {
        let w = enc(x);
        let mut tape = AdviceTape::from_bits(w.clone());
        match dec(&mut tape) {
            Ok(y) if y == x && tape.is_exhausted() => {}
            other => failures.push(format!("dec(enc({x})) = {other:?}")),
        }
        words.push(w);
    }
    // in lexicographic order a prefix sorts directly before some extension of it
    words.sort();
    for pair in words.windows(2) {
        if pair[1].starts_with(&pair[0]) {
            failures.push(format!(
                "{} is a prefix of {}",
                bits(&pair[0]),
                bits(&pair[1])
            ));
        }
    }
    verdict(
        "AC-11",
        "enc is prefix-free and dec∘enc = id for x ≤ 2^14",
        &failures,
    );
}

fn bits(b: &[bool]) -> String {
    mcadvice::tape::bits_to_string(b)
}

#[test]
fn ac12_online_prefix_replay() {
    let mut failures = Vec::new();
    let cases: Vec<(Algorithm, GraphKind)> = vec![
        (Algorithm::GreedyOpt, GraphKind::Bipartite),
        (Algorithm::GreedyTruncated { b: 2 }, GraphKind::Bipartite),
        (Algorithm::GreedyCancel, GraphKind::Bipartite),
        (Algorithm::Trivial, GraphKind::Hexagonal),
        (Algorithm::Fpa, GraphKind::Hexagonal),
        (Algorithm::Hex43, GraphKind::Hexagonal),
    ];
    for (algo, kind) in cases {
        for s in 0..50u64 {
            let seed = 40_000 + s;
            let inst = match algo {
                Algorithm::GreedyCancel => {
                    random_cancel_instance(SizeParams::new(6, 30), 30, seed).unwrap()
                }
                _ => random_corpus_instance(kind, 10, 30, seed),
            };
            let tape = mcadvice::harness::oracle_tape(algo, &inst, &Budget::default()).unwrap();
            let full = run_online(algo, &inst.graph, &inst.requests, &mut tape.clone()).unwrap();
            let len = ChaCha8Rng::seed_from_u64(seed).gen_range(0..=inst.n());
            let part =
                run_online(algo, &inst.graph, &inst.requests[..len], &mut tape.clone()).unwrap();
            if part[..] != full[..len] {
                failures.push(format!("{algo} seed {seed}: prefix {len} diverges"));
            }
        }
    }
    verdict(
        "AC-12",
        "50 prefix replays per algorithm reproduce the full-run prefix",
        &failures,
    );
}

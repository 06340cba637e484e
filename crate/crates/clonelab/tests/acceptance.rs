//! The fourteen acceptance criteria, one pass/fail line each.
//!
//! Every criterion drives the same code path as the command-line tool and, where
//! the tool compares two library routes, adds an oracle written here.

use std::time::{Duration, Instant};

use clap::Parser;
use clonelab::{Cli, Report};
use clonelab_core::games::SaltedOverlapConfig;
use clonelab_core::matcore::random::ginibre;
use clonelab_core::matcore::ComplexMatrix;
use clonelab_core::rng::rng_from_seed;
use clonelab_core::typesys::{phase_twirl, realizable_types, FunctionFamily, IndexSpace};

const TFKW_BB84: f64 = 0.8535533906;
const OVERLAP_BB84: f64 = 0.7071067812;
const TOL_CONST: f64 = 1e-9;
const TOL_INEQ: f64 = 1e-9;
const TOL_IDENT: f64 = 1e-12;
const TOL_CHOI_MARGINAL: f64 = 1e-11;
const TOL_WC2AC: f64 = 1e-10;
const CONTROL_GAP: f64 = 1e-3;
const SALTED_FRACTION: f64 = 0.9;
const MC_SIGMAS: f64 = 5.0;

fn run(args: &str) -> Report {
    let cli = Cli::try_parse_from(std::iter::once("clonelab").chain(args.split_whitespace()))
        .unwrap_or_else(|e| panic!("bad arguments {args:?}: {e}"));
    clonelab::run(&cli).unwrap_or_else(|e| panic!("{args}: {e:#}"))
}

fn max_of(v: Vec<Option<f64>>) -> f64 {
    v.into_iter().map(|x| x.expect("numeric column")).fold(f64::NEG_INFINITY, f64::max)
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let now = Instant::now();
    let out = f();
    (out, now.elapsed())
}

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict { passed, detail: detail.into() }
}

fn bb84_constants() -> Verdict {
    let (rep, dt) = timed(|| run("bb84"));
    let tfkw = rep.table.floats("tfkw_bound")[0].unwrap();
    let ov = rep.table.floats("overlap")[0].unwrap();
    // 1/2 + 1/(2√2) and 1/√2, evaluated independently of the library.
    let closed = (0.5 + 0.5 / 2f64.sqrt(), 1.0 / 2f64.sqrt());
    let ok = (tfkw - TFKW_BB84).abs() <= TOL_CONST
        && (ov - OVERLAP_BB84).abs() <= TOL_CONST
        && (tfkw - closed.0).abs() <= TOL_IDENT
        && (ov - closed.1).abs() <= TOL_IDENT
        && rep.passed()
        && dt < Duration::from_secs(1);
    verdict(ok, format!("tfkw {tfkw:.10}, overlap {ov:.10}, {dt:.2?}"))
}

fn parity_set(x: &[usize], alphabet: usize) -> Vec<usize> {
    (0..alphabet).filter(|&i| x.iter().filter(|&&v| v == i).count() % 2 == 1).collect()
}

/// `Σ_λ Π_λ O Π_λ` with each projector built from the parity rule.
fn projector_sum(o: &ComplexMatrix, space: IndexSpace) -> ComplexMatrix {
    let label: Vec<Vec<usize>> =
        (0..space.dim()).map(|i| parity_set(&space.query_digits(i / space.aux), space.alphabet)).collect();
    ComplexMatrix::from_fn(o.rows(), o.cols(), |i, j| if label[i] == label[j] { o.get(i, j) } else { Default::default() })
}

fn phase_twirl_identity() -> Verdict {
    let ((worst_cli, worst_oracle), dt) = timed(|| {
        let mut worst_cli: f64 = 0.0;
        let mut worst_oracle: f64 = 0.0;
        let mut rng = rng_from_seed(2);
        for r in 1..=3 {
            let rep = run(&format!("twirl-check --n 2 --r {r} --trials 100"));
            worst_cli = worst_cli.max(max_of(rep.table.floats("residual")));
            let space = IndexSpace::new(4, r, 2).unwrap();
            let family = FunctionFamily::exhaustive(2);
            for _ in 0..100 {
                let o = ginibre(space.dim(), space.dim(), &mut rng);
                let tw = phase_twirl(&o, space, &family).unwrap();
                worst_oracle = worst_oracle.max(tw.max_abs_diff(&projector_sum(&o, space)));
            }
            // Two-letter alphabet as well.
            let space = IndexSpace::new(2, r, 2).unwrap();
            for _ in 0..100 {
                let o = ginibre(space.dim(), space.dim(), &mut rng);
                let tw = phase_twirl(&o, space, &FunctionFamily::exhaustive(1)).unwrap();
                worst_oracle = worst_oracle.max(tw.max_abs_diff(&projector_sum(&o, space)));
            }
        }
        (worst_cli, worst_oracle)
    });
    let ok = worst_cli <= TOL_IDENT && worst_oracle <= TOL_IDENT && dt < Duration::from_secs(10);
    verdict(ok, format!("max residual {worst_cli:.2e} (tool), {worst_oracle:.2e} (parity oracle), {dt:.2?}"))
}

fn block_tensor() -> Verdict {
    let (rep, dt) = timed(|| run("blocknorm-check --trials 1000"));
    let kinds = rep.table.texts("kind");
    let norms = rep.table.floats("op_norm");
    let mut worst: f64 = 0.0;
    let mut violation = None;
    for (k, n) in kinds.iter().zip(&norms) {
        match k.as_str() {
            "random" => worst = worst.max(n.unwrap()),
            "violation" => violation = *n,
            _ => {}
        }
    }
    let random = kinds.iter().filter(|k| *k == "random").count();
    let v = violation.unwrap_or(0.0);
    let ok = random == 1000
        && worst <= 1.0 + TOL_INEQ
        && (v - 2f64.sqrt()).abs() <= TOL_IDENT
        && rep.passed()
        && dt < Duration::from_secs(30);
    verdict(ok, format!("{random} instances, max norm {worst:.6}, violating instance norm {v:.6}, {dt:.2?}"))
}

fn subtype_audit() -> Verdict {
    let (rep, dt) = timed(|| run("subtype-audit --max-alphabet 4 --max-r 5 --trials 100"));
    let t = &rep.table;
    let (kinds, rs) = (t.texts("kind"), t.floats("r"));
    let (values, bounds, passes) = (t.floats("value"), t.floats("bound"), t.bools("pass"));
    let mut audited = 0;
    let mut ok = true;
    for i in 0..t.rows.len() {
        if kinds[i] == "audit" {
            audited += 1;
            let r = rs[i].unwrap() as i32;
            ok &= bounds[i].unwrap() == (2.0 * r as f64).powi(r) && values[i].unwrap() <= bounds[i].unwrap();
        } else {
            ok &= values[i].unwrap() <= bounds[i].unwrap() + TOL_INEQ;
        }
        ok &= passes[i] == Some(true);
    }
    let expected: usize = (1..=4).flat_map(|a| (1..=5).map(move |r| realizable_types(a, r).len())).sum();
    let trials: std::collections::BTreeSet<i64> = kinds
        .iter()
        .zip(t.floats("index"))
        .filter(|(k, _)| *k == "reduction")
        .map(|(_, i)| i.unwrap() as i64)
        .collect();
    ok &= audited == expected && trials.len() == 100 && dt < Duration::from_secs(20);
    verdict(ok, format!("{audited} types audited, {} reduction instances, {dt:.2?}", trials.len()))
}

fn choi_equivalence() -> Verdict {
    let (rep, dt) = timed(|| run("equiv-check --n-max 2 --t-max 2 --trials 200"));
    let direct = rep.table.floats("direct");
    let form = rep.table.floats("monogamy_form");
    let worst = direct.iter().zip(&form).map(|(a, b)| (a.unwrap() - b.unwrap()).abs()).fold(0.0, f64::max);
    let ok = rep.table.rows.len() == 200 && worst <= TOL_INEQ && dt < Duration::from_secs(60);
    verdict(ok, format!("200 instances, max |direct - monogamy form| {worst:.2e}, {dt:.2?}"))
}

fn restricted_identity() -> Verdict {
    let rep = run("tcopy-chain --n-max 2 --t-max 1 --a-max 1 --value-only --trials 200");
    let worst = max_of(rep.table.floats("residual"));
    let shapes: std::collections::BTreeSet<(i64, i64)> = rep
        .table
        .floats("n")
        .iter()
        .zip(rep.table.floats("a"))
        .map(|(n, a)| (n.unwrap() as i64, a.unwrap() as i64))
        .collect();
    let ok = worst <= TOL_INEQ && shapes.len() == 4 && rep.passed();
    verdict(ok, format!("50 strategies for each of {} (n, a) shapes, max residual {worst:.2e}", shapes.len()))
}

fn tcopy_chain() -> Verdict {
    let (rep, dt) = timed(|| run("tcopy-chain --n-max 2 --t-max 2 --a-max 1 --heavy 2 --trials 200"));
    let t = &rep.table;
    let norm = max_of(t.floats("subtype_norm_excess"));
    let gamma = max_of(t.floats("gamma_trace_excess"));
    let marginal = max_of(t.floats("choi_marginal_deviation"));
    let diag = max_of(t.floats("diagonal_gap"));
    let ok = t.rows.len() == 200
        && norm <= TOL_INEQ
        && gamma <= TOL_INEQ
        && marginal <= TOL_CHOI_MARGINAL
        && diag <= TOL_INEQ
        && rep.passed();
    verdict(
        ok,
        format!("norm excess {norm:.2e}, trace excess {gamma:.2e}, marginal {marginal:.2e}, diagonal gap {diag:.2e}, {dt:.2?}"),
    )
}

fn counterexample() -> Verdict {
    let rep = run("counterexample --n-max 2 --t 2");
    let t = &rep.table;
    let mut ok = t.rows.len() == 6;
    for i in 0..t.rows.len() {
        let x = 2f64.powi(t.floats("n")[i].unwrap() as i32);
        // |X|^{⌊t/2⌋ - t} and |X|^{⌊t/2⌋ - 1} with t = 2.
        let (trace, floor) = (x.powi(-1), 1.0);
        ok &= t.floats("max_trace_deviation")[i].unwrap() <= TOL_IDENT
            && (t.floats("expected_trace")[i].unwrap() - trace).abs() <= TOL_IDENT
            && t.floats("norm_expression")[i].unwrap() >= floor - TOL_INEQ;
    }
    let least = t.floats("norm_expression").into_iter().flatten().fold(f64::INFINITY, f64::min);
    verdict(ok && rep.passed(), format!("n = 1, 2 with every answer y, smallest norm expression {least:.6}"))
}

fn overlap_floor() -> Verdict {
    let rep = run("bb84 --trials 100");
    let t = &rep.table;
    let mut ok = true;
    let mut margin = f64::INFINITY;
    for i in 1..t.rows.len() {
        let answers = t.floats("answers")[i].unwrap();
        let questions = t.floats("questions")[i].unwrap();
        let gap = t.floats("overlap")[i].unwrap() - answers.powf(-0.5);
        margin = margin.min(gap);
        ok &= answers <= 8.0 && questions >= 2.0 && gap >= -TOL_INEQ;
    }
    verdict(ok && t.rows.len() == 101, format!("100 families, smallest overlap minus floor {margin:.3e}"))
}

/// Permutations of `0..t` without a decreasing subsequence of length `d + 1`.
/// By RSK this is `Σ_{λ ⊢ t, ℓ(λ) ≤ d} (f^λ)²`.
fn avoiding_permutations(t: usize, d: usize) -> usize {
    fn longest_decreasing(p: &[usize]) -> usize {
        let mut best = vec![1; p.len()];
        for i in 0..p.len() {
            for j in 0..i {
                if p[j] > p[i] {
                    best[i] = best[i].max(best[j] + 1);
                }
            }
        }
        best.into_iter().max().unwrap_or(0)
    }
    fn go(cur: &mut Vec<usize>, t: usize, d: usize) -> usize {
        if cur.len() == t {
            return (longest_decreasing(cur) <= d) as usize;
        }
        let mut count = 0;
        for v in 0..t {
            if !cur.contains(&v) {
                cur.push(v);
                count += go(cur, t, d);
                cur.pop();
            }
        }
        count
    }
    go(&mut Vec::new(), t, d)
}

fn designs() -> Verdict {
    let ((cl, pauli, mixed), dt) =
        timed(|| (run("design-check --ensemble clifford --n 1"), run("design-check --ensemble pauli --n 1"), run("design-check --mixed --n 1 --trials 20")));
    let size = cl.table.floats("size")[0].unwrap() as usize;
    let mut ok = size == 24;
    let mut worst: f64 = 0.0;
    for (i, fp) in cl.table.floats("frame_potential").into_iter().enumerate() {
        let oracle = avoiding_permutations(i + 1, 2) as f64;
        worst = worst.max((fp.unwrap() - oracle).abs());
    }
    ok &= worst <= TOL_INEQ;
    let pauli_t2 = pauli.table.floats("frame_potential")[1].unwrap();
    ok &= (pauli_t2 - avoiding_permutations(2, 2) as f64).abs() > TOL_INEQ;
    let mixed_worst = max_of(mixed.table.floats("max_deviation"));
    let pairs: std::collections::BTreeSet<(i64, i64)> = mixed
        .table
        .floats("p")
        .iter()
        .zip(mixed.table.floats("q"))
        .map(|(p, q)| (p.unwrap() as i64, q.unwrap() as i64))
        .collect();
    ok &= mixed.table.rows.len() == 40 && pairs.len() == 2 && mixed_worst <= TOL_IDENT && dt < Duration::from_secs(30);
    verdict(
        ok,
        format!(
            "clifford(1) has {size} elements, frame potential error {worst:.1e}, pauli t=2 potential {pauli_t2}, mixed identity {mixed_worst:.1e}, {dt:.2?}"
        ),
    )
}

fn worst_to_average() -> Verdict {
    let rep = run("wc2ac --n 1 --trials 20");
    let worst = max_of(rep.table.floats("residual"));
    let control = max_of(rep.table.floats("control_deviation"));
    let ok = rep.table.rows.len() == 20 && worst <= TOL_WC2AC && control > CONTROL_GAP;
    verdict(ok, format!("max |wst - avg| {worst:.2e}, identity-twirl control deviates by up to {control:.3e}"))
}

fn black_hole() -> Verdict {
    let trivial = run("blackhole --n 2 --k 1 --channel identity");
    let value = trivial.table.floats("value")[0].unwrap();
    let (exact, dt_exact) = timed(|| run("blackhole --n 2 --k 1 --channel random --ensemble clifford --trials 20"));
    let (mc, dt_mc) = timed(|| run("blackhole --n 2 --k 1 --channel random --ensemble haar-mc --samples 2000 --trials 20"));
    let residual = max_of(exact.table.floats("max_residual"));
    let moe = max_of(exact.table.floats("moe_gap"));
    // The random instances coincide between modes; only the scrambler differs.
    let mut worst_z: f64 = 0.0;
    let mut se_ok = true;
    for ((a, b), se) in exact.table.floats("value").iter().zip(mc.table.floats("value")).zip(mc.table.floats("std_error")) {
        let se = se.unwrap();
        se_ok &= se > 0.0;
        worst_z = worst_z.max((a.unwrap() - b.unwrap()).abs() / se);
    }
    let members = exact.table.floats("members")[0].unwrap() as usize;
    let ok = (value - 0.5).abs() <= TOL_IDENT
        && members == 11520
        && residual <= TOL_INEQ
        && moe <= TOL_INEQ
        && exact.passed()
        && mc.passed()
        && se_ok
        && worst_z <= MC_SIGMAS
        && dt_exact <= Duration::from_secs(600)
        && dt_mc <= Duration::from_secs(30);
    verdict(
        ok,
        format!(
            "trivial value {value}, chain residual {residual:.2e}, moe gap {moe:.2e}, exact {dt_exact:.2?}, Monte-Carlo {dt_mc:.2?} (max |z| {worst_z:.2})"
        ),
    )
}

/// Largest `|2^{-n} Σ_u (-1)^{w·u ⊕ F(s,u) ⊕ F(s',u)}|` over `s ≠ s'` and `w`.
fn salted_oracle(table: &[bool], m: usize, n: usize) -> f64 {
    let size = 1usize << n;
    let mut best: f64 = 0.0;
    for s in 0..1usize << m {
        for s2 in s + 1..1usize << m {
            let diff: Vec<bool> = (0..size).map(|u| table[s * size + u] ^ table[s2 * size + u]).collect();
            for w in 0..size {
                let sum: i64 =
                    (0..size).map(|u| if ((w & u).count_ones() % 2 == 1) ^ diff[u] { -1 } else { 1 }).sum();
                best = best.max((sum as f64 / size as f64).abs());
            }
        }
    }
    best
}

fn salted_overlaps() -> Verdict {
    let (rep, dt) = timed(|| run("salted-overlap --m 4 --n 10 --trials 200"));
    let bound = rep.table.floats("bound")[0].unwrap();
    let maxima = rep.table.floats("max_overlap");
    let below = maxima.iter().filter(|v| v.unwrap() <= bound).count();
    let frac = below as f64 / maxima.len() as f64;
    let closed = 2.0 * 2f64.powi(-5) * 14f64.sqrt();
    let cfg = SaltedOverlapConfig { m: 4, n: 10, trials: 200, seed: rep.seed };
    let oracle = salted_oracle(&cfg.table(0), 4, 10);
    let ok = (bound - closed).abs() <= TOL_IDENT
        && frac >= SALTED_FRACTION
        && (oracle - maxima[0].unwrap()).abs() <= TOL_IDENT
        && dt < Duration::from_secs(120);
    verdict(ok, format!("bound {bound:.5}, {below}/200 trials at or under it, trial 0 matches the direct sum, {dt:.2?}"))
}

const DETERMINISM_RUNS: &[&str] = &[
    "bb84 --trials 5",
    "twirl-check --n 1 --r 2 --trials 5",
    "blocknorm-check --trials 20",
    "subtype-audit --max-alphabet 2 --max-r 3 --trials 5",
    "equiv-check --trials 8",
    "tcopy-chain --heavy 0 --trials 8",
    "design-check --ensemble haar --samples 200",
    "design-check --mixed --trials 4",
    "wc2ac --trials 4",
    "blackhole --channel random --ensemble haar-mc --samples 40 --trials 3",
    "salted-overlap --m 2 --n 6 --trials 10",
    "counterexample --trials 3",
];

fn determinism() -> Verdict {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    let mut bad = Vec::new();
    for args in DETERMINISM_RUNS {
        let seeded = format!("{args} --seed 12345");
        let serial = run(&format!("{seeded} --serial"));
        let parallel = pool.install(|| run(&seeded));
        let again = pool.install(|| run(&seeded));
        let same = serial.table.to_csv() == parallel.table.to_csv()
            && parallel.table.to_csv() == again.table.to_csv()
            && serial.summary_json() == parallel.summary_json();
        if !same {
            bad.push(*args);
        }
    }
    let covered: std::collections::BTreeSet<&str> =
        DETERMINISM_RUNS.iter().map(|a| a.split_whitespace().next().unwrap()).collect();
    verdict(
        bad.is_empty() && covered.len() == 11,
        format!("{} runs over {} subcommands, mismatches {bad:?}", DETERMINISM_RUNS.len(), covered.len()),
    )
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Verdict); 14] = [
        ("BB84 constants", bb84_constants),
        ("phase-twirl identity", phase_twirl_identity),
        ("block-tensor norm bound", block_tensor),
        ("subtype audit", subtype_audit),
        ("Choi equivalence", choi_equivalence),
        ("restricted-value identity", restricted_identity),
        ("t-copy chain", tcopy_chain),
        ("real-basis counterexample", counterexample),
        ("overlap floor", overlap_floor),
        ("designs", designs),
        ("worst-to-average", worst_to_average),
        ("black hole", black_hole),
        ("salted overlaps", salted_overlaps),
        ("determinism", determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        println!("criterion {:>2} {:<26} {}  {}", i + 1, name, if v.passed { "PASS" } else { "FAIL" }, v.detail);
        if !v.passed {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

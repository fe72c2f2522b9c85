//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero when any fails. Runs without the libtest harness so the
//! lines always show up in `cargo test` output.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tbflab::decoder::{exhaustive_weight_sweep, run_fer, FerConfig, FerReport, ParallelDecoder, StopRule};
use tbflab::profiles::{
    build_profile, check_sufficient_condition, enumerate_inducing_sets, InducingSet, ProfileConfig, TrappingSetProfile,
};
use tbflab::selection::{search_corrector, upper_bound_exponent, CorrectorSearch, SearchOutcome};
use tbflab::tanner::{
    canonical_form, colored_canonical_form, gf2_rank, load_alist, load_qc, parse_graph, tanner_155_64,
    CanonicalCode, CodeEnsembleParams, TannerGraph,
};
use tbflab::tbf::{
    check_update, decode, enumerate_xi, ladder_rule, CheckState, RuleConstraint, RuleFamily, TbfAlgorithm,
};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

// ---------------------------------------------------------------- fixtures

fn monotone() -> RuleFamily {
    RuleFamily::new(3, &[RuleConstraint::Monotone]).unwrap()
}

/// Five rules of different character: three threshold ladders, a weight-3
/// corrector on the Tanner code, and a short-horizon family member.
fn fixture_rules() -> Vec<(String, TbfAlgorithm)> {
    let fam = monotone();
    let mut out = Vec::new();
    for t in 1..=3 {
        out.push((format!("ladder-{t}"), TbfAlgorithm::with_defaults(ladder_rule(3, t), 10).unwrap()));
    }
    let id = 547886887214171133951u128;
    out.push((format!("monotone-{id}"), TbfAlgorithm::with_defaults(fam.rule_from_id(id).unwrap(), 30).unwrap()));
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    loop {
        let id = rng.random_range(0..fam.size());
        if let Ok(a) = TbfAlgorithm::with_defaults(fam.rule_from_id(id).unwrap(), 5) {
            out.push((format!("monotone-{id}/5"), a));
            break;
        }
    }
    out
}

fn k33() -> TannerGraph {
    parse_graph("graph 6 9\n1 2 3\n1 4 5\n2 6 7\n3 8 9\n4 6 8\n5 7 9\nend\n").unwrap()
}

// ------------------------------------------------------ brute-force oracles

fn subsets(m: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for c in 0..m {
        let mut add = Vec::new();
        for s in &out {
            if s.len() < max {
                let mut t = s.clone();
                t.push(c);
                add.push(t);
            }
        }
        out.extend(add);
    }
    out
}

fn girth_legal(g: &TannerGraph, p: &CodeEnsembleParams) -> bool {
    g.max_check_degree() <= p.d_c_max && g.girth().is_none_or(|x| x >= p.girth_min)
}

/// Every graph reachable by adding variables with arbitrary attachments,
/// filtered by failure and by exhaustive minimality over subsets.
fn oracle_profile(alg: &TbfAlgorithm, i: &InducingSet, n_max: usize, p: &CodeEnsembleParams) -> BTreeSet<CanonicalCode> {
    let k = i.size();
    let colors = |n: usize| (0..n).map(|v| (v < k) as u32).collect::<Vec<_>>();
    let mut level = vec![i.graph.clone()];
    let mut all = level.clone();
    for _ in k..n_max {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for g in &level {
            for a in subsets(g.num_checks(), p.d_v) {
                let u = g.with_new_variable(&a, p.d_v - a.len());
                if girth_legal(&u, p) && seen.insert(colored_canonical_form(&u, &colors(u.num_variables()))) {
                    next.push(u);
                }
            }
        }
        all.extend(next.iter().cloned());
        level = next;
    }
    let j: Vec<usize> = (0..k).collect();
    let fails = |g: &TannerGraph| !decode(alg, g, &j).converged;
    let mut out = BTreeSet::new();
    for u in &all {
        if !fails(u) {
            continue;
        }
        let extra: Vec<usize> = (k..u.num_variables()).collect();
        let minimal = (0..(1u32 << extra.len()) - 1).all(|mask| {
            let mut w = j.clone();
            w.extend(extra.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &v)| v));
            !fails(&u.induced_subgraph(&w).unwrap())
        });
        if minimal {
            out.insert(canonical_form(u));
        }
    }
    out
}

/// Graphs on `k` variables of degree three by trying every check choice.
fn brute_inducing_count(k: usize, p: &CodeEnsembleParams) -> usize {
    let m = 3 * k;
    let triples: Vec<Vec<usize>> = subsets(m, 3).into_iter().filter(|s| s.len() == 3).collect();
    let mut seen = HashSet::new();
    fn go(adj: &mut Vec<Vec<usize>>, seen: &mut HashSet<CanonicalCode>, k: usize, triples: &[Vec<usize>], p: &CodeEnsembleParams) {
        if adj.len() == k {
            let used: BTreeSet<usize> = adj.iter().flatten().copied().collect();
            let relabel: BTreeMap<usize, usize> = used.iter().enumerate().map(|(i, &c)| (c, i)).collect();
            let va: Vec<Vec<usize>> = adj.iter().map(|cs| cs.iter().map(|c| relabel[c]).collect()).collect();
            let g = TannerGraph::from_var_adjacency(used.len(), va).unwrap();
            if girth_legal(&g, p) {
                seen.insert(canonical_form(&g));
            }
            return;
        }
        // The first variable's checks can be fixed by symmetry.
        let choices: &[Vec<usize>] = if adj.is_empty() { &triples[..1] } else { triples };
        for t in choices {
            adj.push(t.clone());
            go(adj, seen, k, triples, p);
            adj.pop();
        }
    }
    go(&mut Vec::new(), &mut seen, k, &triples, p);
    seen.len()
}

// ---------------------------------------------------------------- criteria

fn c1() -> Outcome {
    let (a, b) = (enumerate_xi(3).len(), enumerate_xi(4).len());
    let (e3, e4) = (upper_bound_exponent(3).map_err(|e| e.to_string())?, upper_bound_exponent(4).map_err(|e| e.to_string())?);
    ensure(a == 20 && b == 35, format!("xi sizes {a}, {b}"))?;
    ensure(e3 == 81 && e4 == 141, format!("exponents {e3}, {e4}"))?;
    Ok(format!("|xi| = {a}, {b}; bound exponents {e3}, {e4}"))
}

fn c2() -> Outcome {
    let p = CodeEnsembleParams::tanner_like();
    let n4 = enumerate_inducing_sets(4, &p).len();
    let n5 = enumerate_inducing_sets(5, &p).len();
    let n3 = enumerate_inducing_sets(3, &p).len();
    let b3 = brute_inducing_count(3, &p);
    ensure(n4 == 10 && n5 == 24, format!("k=4: {n4}, k=5: {n5}"))?;
    ensure(n3 == b3, format!("k=3: {n3} vs brute force {b3}"))?;
    Ok(format!("k=4: {n4}, k=5: {n5}, k=3: {n3} (brute force {b3})"))
}

fn c3() -> Outcome {
    use CheckState::*;
    let got = [check_update(0, 0), check_update(0, 1), check_update(1, 0), check_update(1, 1)];
    ensure(got == [PrevSat, NewUnsat, NewSat, PrevUnsat], format!("{got:?}"))?;
    Ok("0p 1n 0n 1p".into())
}

/// Criteria 4 and 5 share the profiles.
fn c4(rules: &[(String, TbfAlgorithm)], built: &mut Vec<(TbfAlgorithm, TrappingSetProfile)>) -> Outcome {
    let p = CodeEnsembleParams::tanner_like();
    let mut checked = 0;
    let mut members = 0;
    for (name, alg) in rules {
        for k in 1..=3 {
            for i in enumerate_inducing_sets(k, &p) {
                let prof = build_profile(alg, &i, &ProfileConfig::new(k + 2, p)).map_err(|e| e.to_string())?;
                let got: BTreeSet<CanonicalCode> = prof.members.keys().cloned().collect();
                let want = oracle_profile(alg, &i, k + 2, &p);
                ensure(prof.complete, format!("{name}, k={k}: incomplete"))?;
                ensure(got == want, format!("{name}, k={k}: {} members, oracle {}", got.len(), want.len()))?;
                checked += 1;
                members += got.len();
                built.push((alg.clone(), prof));
            }
        }
    }
    Ok(format!("{checked} profiles over {} rules equal the oracle ({members} members)", rules.len()))
}

fn c5(built: &[(TbfAlgorithm, TrappingSetProfile)]) -> Outcome {
    let mut n = 0;
    for (alg, prof) in built {
        for m in prof.members.values() {
            let out = decode(alg, &m.graph, &m.witness_set);
            ensure(!out.converged, "witness subset converges")?;
            ensure(out.corruption_history == m.witness, "stored witness differs from a fresh decode")?;
            ensure(
                m.witness_covers_all() && m.witness.iter().flatten().all(|&l| l <= alg.max_iters()),
                "a variable is never corrupt",
            )?;
            n += 1;
        }
    }
    ensure(n > 0, "no trapping sets to check")?;
    Ok(format!("{n} trapping sets, every variable corrupt at some iteration"))
}

/// A random graph of the ensemble, grown one variable at a time.
fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: &CodeEnsembleParams) -> TannerGraph {
    let mut g = TannerGraph::empty();
    while g.num_variables() < n {
        let m = g.num_checks();
        let mut picks = Vec::new();
        for _ in 0..p.d_v {
            if m > 0 && rng.random_bool(0.75) {
                let c = rng.random_range(0..m);
                if !picks.contains(&c) {
                    picks.push(c);
                }
            }
        }
        picks.sort_unstable();
        let h = g.with_new_variable(&picks, p.d_v - picks.len());
        if girth_legal(&h, p) {
            g = h;
        }
    }
    g
}

fn c6() -> Outcome {
    let p = CodeEnsembleParams::tanner_like();
    let fam = monotone();
    let algs = vec![
        TbfAlgorithm::with_defaults(ladder_rule(3, 2), 30).unwrap(),
        TbfAlgorithm::with_defaults(ladder_rule(3, 3), 30).unwrap(),
        TbfAlgorithm::with_defaults(fam.rule_from_id(547886887214171133951).unwrap(), 30).unwrap(),
    ];
    let mut profiles: Vec<BTreeMap<CanonicalCode, TrappingSetProfile>> = Vec::new();
    for alg in &algs {
        let mut map = BTreeMap::new();
        for k in 1..=3 {
            for i in enumerate_inducing_sets(k, &p) {
                let prof = build_profile(alg, &i, &ProfileConfig::new(14, p)).map_err(|e| e.to_string())?;
                ensure(prof.complete && prof.closed, "fixture profile not closed")?;
                map.insert(i.code.clone(), prof);
            }
        }
        profiles.push(map);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut yes, mut no, mut tries) = (0, 0, 0);
    while yes < 500 {
        tries += 1;
        ensure(tries < 200_000, format!("only {yes} positive cases found"))?;
        let a = rng.random_range(0..algs.len());
        let n = rng.random_range(4..=24);
        let g = random_graph(&mut rng, n, &p);
        let k = rng.random_range(1..=3);
        let mut j: Vec<usize> = rand::seq::index::sample(&mut rng, g.num_variables(), k).into_vec();
        j.sort_unstable();
        let code = canonical_form(&g.induced_subgraph(&j).unwrap());
        let prof = &profiles[a][&code];
        if check_sufficient_condition(&g, &j, prof).map_err(|e| e.to_string())? {
            yes += 1;
            ensure(decode(&algs[a], &g, &j).converged, format!("condition held but decoding failed, case {tries}"))?;
        } else {
            no += 1;
        }
    }
    Ok(format!("{yes} positive cases all converge ({no} negative cases skipped)"))
}

/// Returns the corrector used by criteria 9 and 10.
fn c7() -> Result<(String, Option<TbfAlgorithm>), String> {
    // Plain girth-8 ensemble: three errors on one side of K3,3 (edges as
    // degree-two checks) never converge under any 0/1 symmetric rule, since
    // the two sides stay complementary and every check stays unsatisfied.
    let fam = monotone();
    let side = [0, 1, 2];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut tried = 0;
    while tried < 50 {
        let Ok(a) = TbfAlgorithm::with_defaults(fam.rule_from_id(rng.random_range(0..fam.size())).unwrap(), 30) else {
            continue;
        };
        tried += 1;
        ensure(!decode(&a, &k33(), &side).converged, "a rule corrected the K3,3 side")?;
    }
    // Restricted to codes with minimum distance at least 7, which every
    // weight-3 correcting code has.
    let params = CodeEnsembleParams::tanner_like().with_min_distance(7);
    let cfg = CorrectorSearch {
        family: fam.clone(),
        t: 3,
        params,
        n_max: 9,
        lmax: 30,
        seed: 2,
        guide_steps: 3000,
        profile_steps: 2000,
        guide: Some(tanner_155_64()),
        max_candidates: Some(200_000),
    };
    let (id, alg) = match search_corrector(&cfg).map_err(|e| e.to_string())? {
        SearchOutcome::Found { id, algorithm, .. } => (id, algorithm),
        SearchOutcome::Exhausted { best_id, penalty, .. } => {
            return Err(format!("search exhausted, best {best_id} penalty {penalty}"));
        }
    };
    // Re-verify independently of the search, with a larger n_max.
    let mut sizes = Vec::new();
    for k in 1..=3 {
        for i in enumerate_inducing_sets(k, &params) {
            let prof = build_profile(&alg, &i, &ProfileConfig::new(12, params)).map_err(|e| e.to_string())?;
            ensure(prof.is_empty() && prof.complete && prof.closed, format!("k={k} profile not empty and closed"))?;
        }
        sizes.push(enumerate_inducing_sets(k, &params).len());
    }
    let msg = format!(
        "monotone id {id}: all {} inducing sets of size <= 3 have empty, complete, closed profiles (min distance >= 7); \
         without the distance restriction K3,3 defeats all {tried} sampled rules",
        sizes.iter().sum::<usize>()
    );
    Ok((msg, Some(alg)))
}

fn c8() -> Outcome {
    let built = tanner_155_64().graph;
    let qc = load_qc(include_str!("data/tanner_155_64.qc")).map_err(|e| e.to_string())?;
    let al = load_alist(include_str!("data/tanner_155_64.alist")).map_err(|e| e.to_string())?;
    ensure(qc.graph == built && al == built, "loaders disagree with the built-in code")?;
    let g = &built;
    let (n, m) = (g.num_variables(), g.num_checks());
    let dv = g.regular_var_degree();
    let dc: BTreeSet<usize> = (0..m).map(|c| g.check_degree(c)).collect();
    let girth = g.girth();
    let rank = gf2_rank(g);
    ensure(n == 155 && m == 93, format!("n={n} m={m}"))?;
    ensure(dv == Some(3) && dc == BTreeSet::from([5]), format!("degrees {dv:?} {dc:?}"))?;
    ensure(girth == Some(8), format!("girth {girth:?}"))?;
    ensure(rank == 91 && n - rank == 64, format!("rank {rank}"))?;
    Ok(format!("n={n} m={m} d_v=3 d_c=5 girth 8 rank {rank} dimension {}", n - rank))
}

fn c9(alg: &TbfAlgorithm) -> Outcome {
    let qc = tanner_155_64();
    let d = ParallelDecoder::new(vec![alg.clone()]).map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    for w in 1..=3 {
        let r = exhaustive_weight_sweep(&qc.graph, &d, w, Some(&qc), u128::MAX).map_err(|e| e.to_string())?;
        ensure(r.failures.is_empty(), format!("weight {w}: {} failing orbits", r.failures.len()))?;
        parts.push(format!("w={w}: {} orbits, {} patterns", r.decoded, r.covered));
    }
    Ok(format!("zero failures; {}", parts.join("; ")))
}

fn tail_at_least(n: u64, w: u64, a: f64) -> f64 {
    // 1 - sum_{i<w} C(n,i) a^i (1-a)^(n-i)
    let mut head = 0.0;
    let mut c = 1.0;
    for i in 0..w {
        head += c * a.powi(i as i32) * (1.0 - a).powi((n - i) as i32);
        c = c * (n - i) as f64 / (i + 1) as f64;
    }
    1.0 - head
}

fn c10(alg: &TbfAlgorithm) -> Outcome {
    let g = tanner_155_64().graph;
    let d = ParallelDecoder::new(vec![alg.clone()]).map_err(|e| e.to_string())?;
    let cfg = FerConfig {
        alphas: vec![0.005, 0.01, 0.02],
        stop: StopRule {
            min_frame_errors: 100,
            max_trials: 10_000_000,
        },
        seed: 7,
        codewords: Default::default(),
    };
    let report = run_fer(&g, &d, &cfg);
    let pts = &report.points;
    for p in pts {
        ensure(p.frame_errors >= 100 || p.trials == 10_000_000, format!("alpha {}: stopped early", p.alpha))?;
    }
    ensure(pts.windows(2).all(|w| w[0].fer <= w[1].fer), "FER not monotone in alpha")?;
    for p in pts {
        let tail = tail_at_least(155, 4, p.alpha);
        ensure(p.ci_low <= tail, format!("alpha {}: FER {} above the weight>=4 tail {tail}", p.alpha, p.fer))?;
    }
    // Byte-identical across worker counts, stopping rule included.
    let small = FerConfig {
        alphas: vec![0.02, 0.03],
        stop: StopRule {
            min_frame_errors: 30,
            max_trials: 200_000,
        },
        ..cfg.clone()
    };
    let run_with = |threads: usize| -> FerReport {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| run_fer(&g, &d, &small))
    };
    let r1 = run_with(1);
    for t in [2, 4] {
        let rt = run_with(t);
        ensure(rt.to_csv() == r1.to_csv() && rt.failure_log() == r1.failure_log(), format!("{t} workers differ"))?;
    }
    let slope = |a: usize, b: usize| (pts[b].fer / pts[a].fer).ln() / (pts[b].alpha / pts[a].alpha).ln();
    let s1 = slope(0, 1);
    let s2 = slope(1, 2);
    let table: Vec<String> = pts
        .iter()
        .map(|p| format!("{}: {}/{} = {:.3e}", p.alpha, p.frame_errors, p.trials, p.fer))
        .collect();
    Ok(format!(
        "{}; monotone, within the weight>=4 tail, identical for 1/2/4 workers; log-log slopes {s1:.2}, {s2:.2} (>= 4 {})",
        table.join(", "),
        if s1 >= 4.0 && s2 >= 4.0 { "holds" } else { "does not hold at these alphas" }
    ))
}

fn main() -> ExitCode {
    let mut failed = 0;
    let mut report = |n: usize, r: Outcome, t: Instant| {
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(msg) => println!("criterion {n:>2}: PASS ({secs:.1} s) {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {n:>2}: FAIL ({secs:.1} s) {msg}");
            }
        }
    };
    let t = Instant::now();
    report(1, c1(), t);
    let t = Instant::now();
    report(2, c2(), t);
    let t = Instant::now();
    report(3, c3(), t);
    let rules = fixture_rules();
    let mut built = Vec::new();
    let t = Instant::now();
    report(4, c4(&rules, &mut built), t);
    let t = Instant::now();
    report(5, c5(&built), t);
    let t = Instant::now();
    report(6, c6(), t);
    let t = Instant::now();
    let (r7, corrector) = match c7() {
        Ok((m, a)) => (Ok(m), a),
        Err(e) => (Err(e), None),
    };
    report(7, r7, t);
    let t = Instant::now();
    report(8, c8(), t);
    let t = Instant::now();
    match &corrector {
        Some(a) => {
            report(9, c9(a), t);
            let t = Instant::now();
            report(10, c10(a), t);
        }
        None => {
            report(9, Err("no corrector from criterion 7".into()), t);
            report(10, Err("no corrector from criterion 7".into()), t);
        }
    }
    if failed == 0 {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} criteria failed");
        ExitCode::FAILURE
    }
}

use std::fmt::Write as _;
use std::path::Path;

use tbflab::decoder::{
    exhaustive_weight_sweep, run_fer, sweep_pattern_count, CodewordMode, FerConfig, ParallelDecoder, StopRule,
    SweepError,
};
use tbflab::profiles::{
    build_profile, enumerate_inducing_sets, filter_profile_by_code, joint_profile, parse_inducing_sets,
    write_inducing_sets, write_profiles, InducingSet, ProfileConfig, TrappingSetProfile,
};
use tbflab::selection::{score_all, select_parallel, SelectionConfig, SelectionMode};
use tbflab::tanner::{load_alist, load_qc, tanner_155_64, CodeEnsembleParams, QcCode, TannerGraph};
use tbflab::tbf::{self, parse_algorithms, parse_constraints, write_algorithms, FlipRule, RuleFamily, TbfAlgorithm};

use crate::stanza::Stanza;
use crate::{CodeArgs, EnsembleArgs, InducingArgs, ProfileArgs, SelectArgs, SimulateArgs, SweepArgs, ValidateArgs};

/// Exit code for a run that worked but found a negative answer (trapping
/// sets present, sweep failures, invalid rule).
pub const NEGATIVE: u8 = 1;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Budget(String),
    #[error("{0}")]
    Refused(String),
    #[error("{0}")]
    Input(String),
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
            CliError::Budget(_) => 4,
            CliError::Refused(_) => 5,
            CliError::Input(_) => 6,
        }
    }
}

fn read(path: &str) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("cannot read {path}: {e}")))
}

fn emit(out: Option<&str>, text: &str) -> Result<(), CliError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("cannot write {p}: {e}"))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn input_err(path: &str) -> impl Fn(tbflab::tanner::ParseError) -> CliError + '_ {
    move |e| CliError::Input(format!("{path}: {e}"))
}

fn params(e: &EnsembleArgs, st: &mut Stanza) -> Result<CodeEnsembleParams, CliError> {
    st.set("d-v", e.d_v).set("d-c-max", e.d_c_max).set("girth", e.girth).set("min-distance", e.min_distance);
    Ok(CodeEnsembleParams::new(e.d_v, e.d_c_max, e.girth).map_err(CliError::Config)?.with_min_distance(e.min_distance))
}

fn algorithms(path: &str, st: &mut Stanza, key: &str) -> Result<Vec<TbfAlgorithm>, CliError> {
    let text = read(path)?;
    st.input(key, &text);
    let algs = parse_algorithms(&text).map_err(input_err(path))?;
    if algs.is_empty() {
        return Err(CliError::Input(format!("{path}: no algorithms")));
    }
    Ok(algs)
}

/// The graph, and its circulant structure when loaded from a `qc` file.
fn load_code(path: &str, format: Option<&str>, st: &mut Stanza) -> Result<(TannerGraph, Option<QcCode>), CliError> {
    if path == "tanner-155" {
        st.set("code", "tanner-155");
        let qc = tanner_155_64();
        return Ok((qc.graph.clone(), Some(qc)));
    }
    let text = read(path)?;
    st.input("code", &text);
    let fmt = match format {
        Some(f) => f.to_string(),
        None => Path::new(path).extension().and_then(|e| e.to_str()).unwrap_or("alist").to_string(),
    };
    match fmt.as_str() {
        "qc" => {
            let qc = load_qc(&text).map_err(input_err(path))?;
            Ok((qc.graph.clone(), Some(qc)))
        }
        "alist" => Ok((load_alist(&text).map_err(input_err(path))?, None)),
        other if format.is_some() => Err(CliError::Config(format!("unknown code format {other:?}"))),
        _ => Ok((load_alist(&text).map_err(input_err(path))?, None)),
    }
}

fn decoder_for(code: &CodeArgs, st: &mut Stanza) -> Result<(TannerGraph, Option<QcCode>, ParallelDecoder), CliError> {
    let (g, qc) = load_code(&code.code, code.code_format.as_deref(), st)?;
    let algs = algorithms(&code.decoder, st, "decoder")?;
    if let Some(a) = algs.iter().find(|a| g.regular_var_degree() != Some(a.d_v())) {
        return Err(CliError::Input(format!(
            "decoder expects variable degree {} but the code is not regular of that degree",
            a.d_v()
        )));
    }
    let d = ParallelDecoder::new(algs).map_err(|e| CliError::Input(e.to_string()))?;
    Ok((g, qc, d))
}

pub fn inducing(a: InducingArgs) -> Result<u8, CliError> {
    let mut st = Stanza::new("inducing");
    let p = params(&a.ensemble, &mut st)?;
    st.set("k", a.k);
    if a.k == 0 {
        return Err(CliError::Config("--k must be at least 1".into()));
    }
    let sets = enumerate_inducing_sets(a.k, &p);
    let mut text = st.render();
    text.push_str(&write_inducing_sets(&sets));
    emit(a.out.as_deref(), &text)?;
    eprintln!("{} inducing sets with {} variables", sets.len(), a.k);
    Ok(0)
}

fn inducing_sets(file: Option<&str>, k: Option<usize>, p: &CodeEnsembleParams, st: &mut Stanza) -> Result<Vec<InducingSet>, CliError> {
    match (file, k) {
        (Some(f), _) => {
            let text = read(f)?;
            st.input("inducing", &text);
            let sets = parse_inducing_sets(&text).map_err(input_err(f))?;
            if sets.is_empty() {
                return Err(CliError::Input(format!("{f}: no inducing sets")));
            }
            Ok(sets)
        }
        (None, Some(k)) if k > 0 => {
            st.set("k", k);
            Ok(enumerate_inducing_sets(k, p))
        }
        _ => Err(CliError::Config("give --inducing FILE or --k K (at least 1)".into())),
    }
}

fn profile_config(n_max: usize, p: CodeEnsembleParams, max_candidates: Option<usize>, max_rounds: Option<usize>, st: &mut Stanza) -> ProfileConfig {
    st.set("n-max", n_max);
    if let Some(m) = max_candidates {
        st.set("max-candidates", m);
    }
    if let Some(m) = max_rounds {
        st.set("max-rounds", m);
    }
    let mut cfg = ProfileConfig::new(n_max, p);
    cfg.max_candidates = max_candidates;
    cfg.max_rounds = max_rounds;
    cfg
}

pub fn profile(a: ProfileArgs) -> Result<u8, CliError> {
    let mut st = Stanza::new("profile");
    let p = params(&a.ensemble, &mut st)?;
    let algs = algorithms(&a.rule, &mut st, "rule")?;
    let sets = inducing_sets(a.inducing.as_deref(), a.k, &p, &mut st)?;
    let cfg = profile_config(a.n_max, p, a.max_candidates, a.max_rounds, &mut st);
    let code = match &a.code {
        Some(c) => Some(load_code(c, None, &mut st)?.0),
        None => None,
    };
    let mut profiles: Vec<TrappingSetProfile> = Vec::with_capacity(sets.len());
    for i in &sets {
        let prof = if algs.len() == 1 {
            build_profile(&algs[0], i, &cfg)
        } else {
            joint_profile(&algs, i, &cfg)
        }
        .map_err(|e| CliError::Config(e.to_string()))?;
        profiles.push(match &code {
            Some(g) => filter_profile_by_code(&prof, g),
            None => prof,
        });
    }
    let mut text = st.render();
    text.push_str(&write_profiles(&profiles));
    emit(a.out.as_deref(), &text)?;
    let mut summary = String::new();
    for pr in &profiles {
        let _ = writeln!(
            summary,
            "inducing {} members {} hist {:?} complete {} closed {}",
            pr.inducing.code,
            pr.len(),
            pr.size_histogram(),
            pr.complete,
            pr.closed
        );
    }
    eprint!("{summary}");
    if profiles.iter().any(|p| !p.is_empty()) {
        Ok(NEGATIVE)
    } else if profiles.iter().any(|p| !p.complete || !p.closed) {
        Err(CliError::Budget("profiles are empty so far but incomplete; raise --n-max or the budgets".into()))
    } else {
        Ok(0)
    }
}

fn parse_range(s: &str) -> Result<(u128, u128), CliError> {
    let bad = || CliError::Config(format!("bad id range {s:?}; expected a..b"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: u128 = a.trim().parse().map_err(|_| bad())?;
    let b: u128 = b.trim().parse().map_err(|_| bad())?;
    if a >= b {
        return Err(bad());
    }
    Ok((a, b))
}

const MAX_POOL: u128 = 100_000;

pub fn select(a: SelectArgs) -> Result<u8, CliError> {
    let mut st = Stanza::new("select");
    let p = params(&a.ensemble, &mut st)?;
    let pool: Vec<TbfAlgorithm> = match (&a.pool, &a.family, &a.ids) {
        (Some(path), _, _) => algorithms(path, &mut st, "pool")?,
        (None, Some(fam), Some(ids)) => {
            let cs = parse_constraints(fam).map_err(|e| CliError::Config(e.to_string()))?;
            let family = RuleFamily::new(p.d_v, &cs).map_err(|e| CliError::Config(e.to_string()))?;
            let (lo, hi) = parse_range(ids)?;
            if hi - lo > MAX_POOL {
                return Err(CliError::Refused(format!("id range holds {} rules; the limit is {MAX_POOL}", hi - lo)));
            }
            st.set("family", fam).set("ids", ids).set("lmax", a.lmax);
            let mut v = Vec::new();
            for id in lo..hi {
                let rule = family.rule_from_id(id).map_err(|e| CliError::Config(e.to_string()))?;
                // Family members that fail validation are skipped.
                if let Ok(alg) = TbfAlgorithm::with_defaults(rule, a.lmax) {
                    v.push(alg);
                }
            }
            v
        }
        _ => return Err(CliError::Config("give --pool FILE or --family F --ids a..b".into())),
    };
    if pool.is_empty() {
        return Err(CliError::Config("the candidate pool is empty".into()));
    }
    let ks: Vec<usize> = a
        .k
        .split(',')
        .map(|s| s.trim().parse::<usize>().ok().filter(|&k| k > 0))
        .collect::<Option<_>>()
        .ok_or_else(|| CliError::Config(format!("bad --k list {:?}", a.k)))?;
    st.set("k", &a.k).set("p", a.p);
    let inducing: Vec<InducingSet> = ks.iter().flat_map(|&k| enumerate_inducing_sets(k, &p)).collect();
    let profile = profile_config(a.n_max, p, a.max_candidates, None, &mut st);
    let code = match &a.code {
        Some(c) => Some(load_code(c, None, &mut st)?.0),
        None => None,
    };
    let scores = score_all(&pool, &inducing, &profile).map_err(|e| CliError::Config(e.to_string()))?;
    let cfg = SelectionConfig {
        inducing,
        profile,
        mode: SelectionMode::GreedyJointProfile,
        code: code.as_ref(),
    };
    let cands: Vec<(TbfAlgorithm, _)> = pool.into_iter().zip(scores).collect();
    let result = select_parallel(&cands, a.p, &cfg).map_err(|e| match e {
        tbflab::selection::SelectionError::PoolTooSmall { .. } => CliError::Config(e.to_string()),
        other => CliError::Config(other.to_string()),
    })?;
    let mut sorted: Vec<&(TbfAlgorithm, _)> = cands.iter().collect();
    sorted.sort_by(|x, y| x.1.compare(&y.1));
    let mut text = st.render();
    text.push_str("scores\n");
    for (_, s) in &sorted {
        text.push_str(&s.to_text());
    }
    text.push_str("selection\n");
    text.push_str(&result.to_text());
    emit(a.out.as_deref(), &text)?;
    if let Some(j) = &a.json {
        emit(Some(j), &(result.to_json() + "\n"))?;
    }
    if let Some(d) = &a.decoder_out {
        let chosen: Vec<TbfAlgorithm> = result.indices.iter().map(|&i| cands[i].0.clone()).collect();
        emit(Some(d), &write_algorithms(&chosen))?;
    }
    Ok(0)
}

pub fn simulate(a: SimulateArgs) -> Result<u8, CliError> {
    let mut st = Stanza::new("simulate");
    let (g, _, d) = decoder_for(&a.code, &mut st)?;
    let alphas: Vec<f64> = a
        .alphas
        .split(',')
        .map(|s| s.trim().parse::<f64>().ok().filter(|x| (0.0..=1.0).contains(x)))
        .collect::<Option<_>>()
        .ok_or_else(|| CliError::Config(format!("bad --alphas {:?}; expected numbers in [0, 1]", a.alphas)))?;
    if a.max_trials == 0 {
        return Err(CliError::Config("--max-trials must be at least 1".into()));
    }
    st.set("alphas", &a.alphas)
        .set("min-errors", a.min_errors)
        .set("max-trials", a.max_trials)
        .set("random-codewords", a.random_codewords)
        .seed(a.seed);
    let cfg = FerConfig {
        alphas,
        stop: StopRule {
            min_frame_errors: a.min_errors,
            max_trials: a.max_trials,
        },
        seed: a.seed,
        codewords: if a.random_codewords { CodewordMode::Random } else { CodewordMode::AllZero },
    };
    let report = run_fer(&g, &d, &cfg);
    let header = st.render();
    emit(a.out.as_deref(), &(header.clone() + &report.to_csv()))?;
    if let Some(f) = &a.failures {
        emit(Some(f), &(header + &report.failure_log()))?;
    }
    Ok(0)
}

pub fn sweep(a: SweepArgs) -> Result<u8, CliError> {
    let mut st = Stanza::new("sweep");
    let (g, qc, d) = decoder_for(&a.code, &mut st)?;
    let orbits = if a.no_orbits { None } else { qc.as_ref() };
    st.set("weight", a.weight).set("budget", a.budget).set("orbits", orbits.is_some());
    let report = exhaustive_weight_sweep(&g, &d, a.weight, orbits, a.budget).map_err(|e| match e {
        SweepError::Budget { .. } => {
            let full = sweep_pattern_count(g.num_variables(), a.weight, None);
            CliError::Refused(format!("{e} (all patterns: {full}); raise --budget or use a quasi-cyclic code file"))
        }
        SweepError::Shift(m) => CliError::Input(m),
    })?;
    let mut text = st.render();
    let _ = writeln!(
        text,
        "weight {} decoded {} covered {} orbit_reduced {} failures {} failing_patterns {}",
        report.weight,
        report.decoded,
        report.covered,
        report.orbit_reduced,
        report.failures.len(),
        report.failing_patterns
    );
    for f in &report.failures {
        let pos: Vec<String> = f.positions.iter().map(|p| (p + 1).to_string()).collect();
        let kind = if f.is_decoding_failure() { "failure" } else { "miscorrection" };
        let _ = writeln!(text, "{kind} positions={} converged={} code={}", pos.join(","), f.flags(), f.code);
    }
    emit(a.out.as_deref(), &text)?;
    eprintln!("decoded {} patterns, {} failures", report.decoded, report.failures.len());
    Ok(if report.failures.is_empty() { 0 } else { NEGATIVE })
}

/// Rule texts found in a file of rules or algorithm blocks: each starts at a
/// `dv=` line and runs until the next rule or algorithm header.
fn rule_texts(text: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    let mut open = false;
    for line in text.lines() {
        let t = line.trim();
        if t.starts_with("dv=") {
            out.push(String::new());
            open = true;
        } else if ["lmax=", "delta_v=", "delta_c="].iter().any(|k| t.starts_with(k)) {
            open = false;
            continue;
        }
        if open {
            let cur = out.last_mut().expect("a block is open");
            cur.push_str(line);
            cur.push('\n');
        }
    }
    out
}

pub fn validate_rule(a: ValidateArgs) -> Result<u8, CliError> {
    let mut st = Stanza::new("validate-rule");
    let rules: Vec<FlipRule> = match (&a.rule, &a.family, a.id) {
        (Some(path), _, _) => {
            let text = read(path)?;
            st.input("rule", &text);
            let texts = rule_texts(&text);
            if texts.is_empty() {
                return Err(CliError::Input(format!("{path}: no rule found")));
            }
            texts
                .iter()
                .map(|t| FlipRule::from_text(t).map_err(input_err(path)))
                .collect::<Result<_, _>>()?
        }
        (None, fam, Some(id)) => {
            let fam = fam.as_deref().unwrap_or("none");
            let cs = parse_constraints(fam).map_err(|e| CliError::Config(e.to_string()))?;
            st.set("family", fam).set("id", id).set("d-v", a.d_v);
            let family = RuleFamily::new(a.d_v, &cs).map_err(|e| CliError::Config(e.to_string()))?;
            vec![family.rule_from_id(id).map_err(|e| CliError::Config(e.to_string()))?]
        }
        _ => return Err(CliError::Config("give --rule FILE or --family F --id N".into())),
    };
    st.set("lmax", a.lmax);
    let mut text = st.render();
    let mut all_valid = true;
    let mut algs = Vec::new();
    for (i, r) in rules.iter().enumerate() {
        let rep = tbf::validate_rule(r);
        all_valid &= rep.is_valid();
        let _ = writeln!(
            text,
            "rule {} valid {} symmetry_violations {} irreducible {}",
            i + 1,
            rep.is_valid(),
            rep.symmetry_violations.len(),
            rep.irreducible
        );
        for (w, xi) in &rep.symmetry_violations {
            let _ = writeln!(text, "  asymmetric at {w} {xi}");
        }
        if rep.is_valid() {
            if let Ok(alg) = TbfAlgorithm::with_defaults(r.clone(), a.lmax) {
                let _ = writeln!(text, "  id {}", alg.id());
                algs.push(alg);
            }
        }
    }
    print!("{text}");
    if let Some(out) = &a.out {
        if !all_valid {
            return Ok(NEGATIVE);
        }
        emit(Some(out), &write_algorithms(&algs))?;
    }
    Ok(if all_valid { 0 } else { NEGATIVE })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_texts_from_algorithm_blocks() {
        let alg = TbfAlgorithm::with_defaults(tbflab::tbf::ladder_rule(3, 2), 7).unwrap();
        let two = write_algorithms(&[alg.clone(), alg.clone()]);
        let texts = rule_texts(&two);
        assert_eq!(texts.len(), 2);
        assert_eq!(&FlipRule::from_text(&texts[1]).unwrap(), alg.rule());
        assert_eq!(rule_texts(&alg.rule().to_text()).len(), 1);
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("3..10").unwrap(), (3, 10));
        assert!(parse_range("10..3").is_err());
        assert!(parse_range("x").is_err());
    }
}

use tbflab::decoder::{
    decode_parallel, exhaustive_weight_sweep, run_fer, CodewordMode, FerConfig, ParallelDecoder, StopRule,
};
use tbflab::profiles::{
    build_profile, enumerate_inducing_sets, filter_profile_by_code, parse_profile, parse_profiles, write_profile,
    write_profiles, ProfileConfig,
};
use tbflab::tanner::{load_alist, load_qc, tanner_155_64, CodeEnsembleParams};
use tbflab::tbf::{ladder_rule, TbfAlgorithm};

fn ladder(t: usize, lmax: usize) -> TbfAlgorithm {
    TbfAlgorithm::with_defaults(ladder_rule(3, t), lmax).unwrap()
}

#[test]
fn fixture_files_load() {
    let qc = load_qc(include_str!("data/tanner_155_64.qc")).unwrap();
    let al = load_alist(include_str!("data/tanner_155_64.alist")).unwrap();
    assert_eq!(qc.graph, al);
    assert_eq!(qc.circulant, 31);
}

#[test]
fn orbit_sweep_agrees_with_full_sweep() {
    let qc = tanner_155_64();
    let d = ParallelDecoder::new(vec![ladder(2, 10)]).unwrap();
    let full = exhaustive_weight_sweep(&qc.graph, &d, 2, None, u128::MAX).unwrap();
    let orb = exhaustive_weight_sweep(&qc.graph, &d, 2, Some(&qc), u128::MAX).unwrap();
    assert_eq!(full.covered, 11935);
    assert_eq!(full.covered, orb.covered);
    assert_eq!(full.failing_patterns, orb.failing_patterns);
    assert!(orb.decoded < full.decoded);
}

#[test]
fn parallel_decoder_prefers_first_success() {
    let g = tanner_155_64().graph;
    let d = ParallelDecoder::new(vec![ladder(1, 2), ladder(2, 30)]).unwrap();
    let out = decode_parallel(&d, &g, &[0, 40]);
    assert_eq!(out.per_algorithm.len(), 2);
    if let Some(w) = out.winner {
        assert!(out.per_algorithm[w].converged);
        assert!(out.per_algorithm[..w].iter().all(|r| !r.converged));
    }
}

#[test]
fn fer_is_seeded_and_codeword_independent() {
    let g = tanner_155_64().graph;
    let d = ParallelDecoder::new(vec![ladder(2, 30)]).unwrap();
    let cfg = FerConfig {
        alphas: vec![0.01, 0.03],
        stop: StopRule {
            min_frame_errors: 25,
            max_trials: 50_000,
        },
        seed: 3,
        codewords: CodewordMode::AllZero,
    };
    let a = run_fer(&g, &d, &cfg);
    assert_eq!(a.to_csv(), run_fer(&g, &d, &cfg).to_csv());
    assert_ne!(a.to_csv(), run_fer(&g, &d, &FerConfig { seed: 4, ..cfg.clone() }).to_csv());
    assert!(a.points[0].fer <= a.points[1].fer);
    assert_eq!(a.failures.len() as u64, a.points.iter().map(|p| p.frame_errors).sum::<u64>());
    // The decoder treats every codeword alike, so random codewords see the
    // same error patterns fail.
    let r = run_fer(&g, &d, &FerConfig { codewords: CodewordMode::Random, ..cfg });
    for (p, q) in a.points.iter().zip(&r.points) {
        assert_eq!((p.trials, p.frame_errors), (q.trials, q.frame_errors));
    }
}

#[test]
fn profiles_round_trip_and_filter() {
    let p = CodeEnsembleParams::tanner_like();
    let alg = ladder(2, 30);
    let profiles: Vec<_> = enumerate_inducing_sets(3, &p)
        .iter()
        .map(|i| build_profile(&alg, i, &ProfileConfig::new(8, p)).unwrap())
        .collect();
    assert!(profiles.iter().any(|x| !x.is_empty()));
    for x in &profiles {
        assert_eq!(&parse_profile(&write_profile(x)).unwrap(), x);
    }
    assert_eq!(parse_profiles(&write_profiles(&profiles)).unwrap(), profiles);
    let restricted = build_profile(&alg, &enumerate_inducing_sets(2, &p)[0], &ProfileConfig::new(8, p.with_min_distance(7))).unwrap();
    assert_eq!(parse_profile(&write_profile(&restricted)).unwrap(), restricted);
    // The Tanner code has girth 8 and no short codewords; filtering can only drop members.
    let code = tanner_155_64().graph;
    for x in &profiles {
        let f = filter_profile_by_code(x, &code);
        assert!(f.len() <= x.len());
        assert!(f.members.keys().all(|k| x.members.contains_key(k)));
    }
}

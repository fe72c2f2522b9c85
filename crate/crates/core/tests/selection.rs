use tbflab::profiles::{build_profile, enumerate_inducing_sets, joint_profile, InducingSet, ProfileConfig};
use tbflab::selection::{
    corrects_all_weight, score_all, select_parallel, AlgorithmScore, Correction, JointScore, SelectionConfig,
    SelectionMode,
};
use tbflab::tanner::{embeds, CodeEnsembleParams};
use tbflab::tbf::{ladder_rule, RuleConstraint, RuleFamily, TbfAlgorithm};

fn pool() -> Vec<TbfAlgorithm> {
    let fam = RuleFamily::new(3, &[RuleConstraint::Monotone]).unwrap();
    let mut out: Vec<TbfAlgorithm> = (1..=3)
        .flat_map(|t| [5, 30].map(|l| TbfAlgorithm::with_defaults(ladder_rule(3, t), l).unwrap()))
        .collect();
    for id in [547886887214171133951u128, 3363362245643801485019] {
        out.push(TbfAlgorithm::with_defaults(fam.rule_from_id(id).unwrap(), 30).unwrap());
    }
    out
}

fn sets() -> Vec<InducingSet> {
    let p = CodeEnsembleParams::tanner_like();
    (2..=3).flat_map(|k| enumerate_inducing_sets(k, &p)).collect()
}

fn config() -> SelectionConfig<'static> {
    SelectionConfig {
        inducing: sets(),
        profile: ProfileConfig::new(7, CodeEnsembleParams::tanner_like()),
        mode: SelectionMode::GreedyJointProfile,
        code: None,
    }
}

fn scored(algs: &[TbfAlgorithm], cfg: &SelectionConfig<'_>) -> Vec<(TbfAlgorithm, AlgorithmScore)> {
    let scores = score_all(algs, &cfg.inducing, &cfg.profile).unwrap();
    algs.iter().cloned().zip(scores).collect()
}

#[test]
fn greedy_pair_matches_brute_force_over_pairs_with_the_top() {
    let cfg = config();
    let cands = scored(&pool(), &cfg);
    let sel = select_parallel(&cands, 2, &cfg).unwrap();
    let top = cands
        .iter()
        .min_by(|a, b| a.1.compare(&b.1))
        .map(|(a, _)| a.clone())
        .unwrap();
    assert_eq!(sel.ids[0], top.id());
    let best: JointScore = cands
        .iter()
        .filter(|(a, _)| a.id() != top.id())
        .map(|(a, _)| tbflab::selection::joint_score(&[top.clone(), a.clone()], &cfg).unwrap())
        .min_by(|a, b| a.compare(b))
        .unwrap();
    assert_eq!(sel.final_joint().unwrap().compare(&best), std::cmp::Ordering::Equal);
    assert_eq!(sel.rounds.len(), 2);
}

#[test]
fn selection_ignores_candidate_order() {
    let cfg = config();
    let mut cands = scored(&pool(), &cfg);
    let a = select_parallel(&cands, 3, &cfg).unwrap();
    cands.reverse();
    let dup = cands[2].clone();
    cands.push(dup);
    let b = select_parallel(&cands, 3, &cfg).unwrap();
    assert_eq!(a.ids, b.ids);
    assert_eq!(a.rounds, b.rounds);
}

#[test]
fn joint_members_contain_a_member_of_every_part() {
    let p = CodeEnsembleParams::tanner_like();
    let cfg = ProfileConfig::new(8, p);
    let algs = [
        TbfAlgorithm::with_defaults(ladder_rule(3, 2), 30).unwrap(),
        TbfAlgorithm::with_defaults(ladder_rule(3, 3), 30).unwrap(),
    ];
    let mut checked = 0;
    for i in sets() {
        let joint = joint_profile(&algs, &i, &cfg).unwrap();
        let rev = joint_profile(&[algs[1].clone(), algs[0].clone()], &i, &cfg).unwrap();
        assert_eq!(joint.members.keys().collect::<Vec<_>>(), rev.members.keys().collect::<Vec<_>>());
        for a in &algs {
            let single = build_profile(a, &i, &cfg).unwrap();
            assert!(single.complete);
            for s in joint.members.values() {
                for j in &s.inducing_embeddings {
                    let covered = single.members.values().any(|m| {
                        m.inducing_embeddings.iter().any(|jm| embeds(&m.graph, jm, &s.graph, j, false))
                    });
                    assert!(covered, "joint member without a single-algorithm member inside");
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 0);
}

#[test]
fn weight_guarantee_answers() {
    let p = CodeEnsembleParams::tanner_like();
    let weak = TbfAlgorithm::with_defaults(ladder_rule(3, 1), 5).unwrap();
    assert!(matches!(corrects_all_weight(&weak, 1, &p, 6).unwrap(), Correction::Fails { .. }));
    let fam = RuleFamily::new(3, &[RuleConstraint::Monotone]).unwrap();
    let good = TbfAlgorithm::with_defaults(fam.rule_from_id(547886887214171133951).unwrap(), 30).unwrap();
    // Only the six-variable codeword defeats it, and only from three errors.
    assert_eq!(corrects_all_weight(&good, 2, &p, 10).unwrap(), Correction::Corrects);
    assert!(matches!(corrects_all_weight(&good, 3, &p, 10).unwrap(), Correction::Fails { n_min: 6, .. }));
    assert_eq!(corrects_all_weight(&good, 3, &p.with_min_distance(7), 10).unwrap(), Correction::Corrects);
}

use ftrl_bandits::harness::run_single;
use ftrl_bandits::policies::{GrowthSpec, RateSpec};
use ftrl_bandits::schedules::chopped_floor;
use ftrl_bandits::{Environment, EnvironmentConfig, Policy, PolicyConfig};
use proptest::prelude::*;

fn ftrl_configs() -> Vec<PolicyConfig> {
    vec![
        PolicyConfig::Exp3Fixed { eta: RateSpec::Fixed(0.3) },
        PolicyConfig::InfFixed { eta: RateSpec::Fixed(0.3) },
        PolicyConfig::LogbarrierFixed { eta: RateSpec::Fixed(0.3) },
        PolicyConfig::HybridInfAnytime { q: 1.0 },
        PolicyConfig::HybridInfKnownHorizon,
        PolicyConfig::ExploredInf,
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Relabelling the arms relabels the distributions when the played
    /// actions (drawn from the first copy) are relabelled the same way.
    #[test]
    fn permutation_equivariance(
        losses in prop::collection::vec(prop::collection::vec(0.0f64..1.0, 3), 40),
        uniforms in prop::collection::vec(0.0f64..1.0, 40),
        rotate in 1usize..3,
        which in 0usize..6,
    ) {
        let config = &ftrl_configs()[which];
        let perm = |i: usize| (i + rotate) % 3;
        let mut a = Policy::new(config, 3, 40, 0).unwrap();
        let mut b = Policy::new(config, 3, 40, 0).unwrap();
        for (loss, &u) in losses.iter().zip(&uniforms) {
            let pa = a.next_distribution().unwrap().as_slice().to_vec();
            let pb = b.next_distribution().unwrap().as_slice().to_vec();
            for i in 0..3 {
                prop_assert!((pa[i] - pb[perm(i)]).abs() < 1e-9, "{:?} vs {:?}", pa, pb);
            }
            let act = a.next_distribution().unwrap().sample(u);
            a.observe(act, loss[act]).unwrap();
            b.observe(perm(act), loss[act]).unwrap();
        }
    }

    /// Every emitted distribution is on the simplex and respects the floor.
    #[test]
    fn distributions_stay_feasible(
        losses in prop::collection::vec(prop::collection::vec(0.0f64..1.0, 4), 60),
        uniforms in prop::collection::vec(0.0f64..1.0, 60),
        which in 0usize..6,
    ) {
        let config = &ftrl_configs()[which];
        let n = 60;
        let mut p = Policy::new(config, 4, n, 0).unwrap();
        for (t, (loss, &u)) in losses.iter().zip(&uniforms).enumerate() {
            let t = t as u64 + 1;
            let d = p.next_distribution().unwrap().clone();
            let sum: f64 = d.as_slice().iter().sum();
            prop_assert!((sum - 1.0).abs() < 1e-10);
            let floor = match config {
                PolicyConfig::HybridInfAnytime { .. } => chopped_floor(t, 4, None),
                PolicyConfig::HybridInfKnownHorizon => chopped_floor(t, 4, Some(n)),
                _ => 0.0,
            };
            prop_assert!(d.min_entry() >= floor - 1e-12);
            let a = d.sample(u);
            prop_assert!(d.as_slice()[a] > 0.0);
            p.observe(a, loss[a]).unwrap();
        }
        let (_, violations) = p.gap_bound_counts();
        prop_assert_eq!(violations, 0);
    }
}

#[test]
fn environments_are_oblivious() {
    let env = Environment::new(
        &EnvironmentConfig::LinearlySeparable { gaps: vec![0.2, 0.4], noise: true },
        None,
        9,
    )
    .unwrap();
    let before: Vec<_> = (1..=200).map(|t| env.loss_at(t).unwrap()).collect();
    let exp3 = PolicyConfig::Exp3Fixed { eta: RateSpec::default() }.prepare().unwrap();
    let hybrid = PolicyConfig::HybridInfAnytime { q: 1.0 }.prepare().unwrap();
    let ra = run_single(&exp3, &env, 200, true).unwrap();
    let rb = run_single(&hybrid, &env, 200, true).unwrap();
    let after: Vec<_> = (1..=200).map(|t| env.loss_at(t).unwrap()).collect();
    assert_eq!(before, after);
    assert_eq!(ra.best_arm_loss, rb.best_arm_loss);
    for (t, (a, b)) in ra.trace.unwrap().iter().zip(rb.trace.unwrap().iter()).enumerate() {
        assert_eq!(a.loss_incurred, before[t].as_slice()[a.action]);
        assert_eq!(b.loss_incurred, before[t].as_slice()[b.action]);
    }
}

#[test]
fn runs_replay_exactly() {
    let env = Environment::new(
        &EnvironmentConfig::StochasticBernoulli { means: vec![0.2, 0.5, 0.7] },
        None,
        4,
    )
    .unwrap();
    let mut configs = ftrl_configs();
    configs.push(PolicyConfig::SlowExplorer { growth: GrowthSpec::LogLog });
    for config in configs {
        let prepared = config.prepare().unwrap();
        let a = run_single(&prepared, &env, 500, true).unwrap();
        let b = run_single(&prepared, &env, 500, true).unwrap();
        assert_eq!(a, b, "{}", config.name());
        let c = run_single(&prepared, &env.reseeded(5), 500, true).unwrap();
        assert_ne!(a.trace, c.trace, "{}", config.name());
    }
}

#[test]
fn zero_replay_file_gives_zero_regret() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zeros.csv");
    let mut text = String::from("a,b,c\n");
    for _ in 0..50 {
        text.push_str("0,0,0\n");
    }
    std::fs::write(&path, text).unwrap();
    let env = Environment::new(&EnvironmentConfig::FileReplay { path }, None, 1).unwrap();
    assert_eq!(env.best_arm_cumulative(50).unwrap(), (0, 0.0));
    let prepared = PolicyConfig::HybridInfAnytime { q: 1.0 }.prepare().unwrap();
    let run = run_single(&prepared, &env, 50, false).unwrap();
    assert_eq!(run.random_regret, 0.0);
    assert!(run_single(&prepared, &env, 51, false).is_err());
}

#[test]
fn slow_explorer_commits_to_the_best_arm() {
    let env = Environment::new(
        &EnvironmentConfig::LinearlySeparable { gaps: vec![0.3, 0.5], noise: false },
        None,
        2,
    )
    .unwrap();
    let prepared = PolicyConfig::SlowExplorer { growth: GrowthSpec::LogLog }.prepare().unwrap();
    let run = run_single(&prepared, &env, 5000, true).unwrap();
    let trace = run.trace.unwrap();
    let explorations = run.diagnostics.exploration_rounds as usize;
    let off_leader = trace.iter().filter(|r| r.action != 0).count();
    // Only exploration rounds and the first round can leave the best arm.
    assert!(off_leader <= explorations + 1, "{off_leader} > {explorations} + 1");
    assert_eq!(run.diagnostics.last_wrong_leader, 0);
}

use fogflow_core::baselines::run_episode;
use fogflow_core::ddpg::{DdpgPolicy, Hyperparams, PolicyBundle, Trainer};
use fogflow_core::model::{Infrastructure, Level};
use fogflow_core::sim::validate_trace;
use fogflow_core::workload::{generate_corpus, mixed_level_workflow, GenSpec};

fn short_run() -> (Infrastructure, Hyperparams, PolicyBundle) {
    let infra = Infrastructure::reference();
    let hp = Hyperparams { hidden: [32, 32], batch_size: 64, episodes: 40, ..Default::default() };
    let mut trainer = Trainer::new(PolicyBundle::new(&infra, &hp, 8), hp.clone(), 8).unwrap();
    let template = GenSpec::new(Level::L1, 8, 1);
    let logs = trainer.train(&infra, |e| mixed_level_workflow(&template, e)).unwrap();
    assert_eq!(logs.len(), 40);
    (infra, hp, trainer.bundle)
}

#[test]
fn trained_policy_only_emits_feasible_actions() {
    let (infra, hp, bundle) = short_run();
    let mut decisions = 0;
    for level in Level::ALL {
        for w in generate_corpus(&GenSpec::new(level, 1042, 200)).unwrap() {
            let r = run_episode(&mut DdpgPolicy::new(&bundle), &w, &infra, hp.env).unwrap();
            validate_trace(&r.trace, &w, &infra, hp.env.memory_mode).unwrap();
            decisions += r.trace.len();
        }
    }
    assert!(decisions >= 10_000, "{decisions}");
}

#[test]
fn evaluation_is_noise_free() {
    let (infra, hp, bundle) = short_run();
    for w in generate_corpus(&GenSpec::new(Level::L3, 3, 10)).unwrap() {
        let a = run_episode(&mut DdpgPolicy::new(&bundle), &w, &infra, hp.env).unwrap();
        let b = run_episode(&mut DdpgPolicy::new(&bundle), &w, &infra, hp.env).unwrap();
        assert_eq!(a, b);
    }
}

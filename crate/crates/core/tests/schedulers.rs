use fogflow_core::baselines::{heft_schedule, oracle_optimal, run_episode, FcfsPolicy, GreedyPolicy, Policy, RandomPolicy};
use fogflow_core::model::{Infrastructure, Level};
use fogflow_core::sim::{makespan, validate_trace, EnvConfig, MemoryMode};
use fogflow_core::workload::{generate_corpus, generate_workflow, GenSpec};
use proptest::prelude::*;

fn env(mode: MemoryMode) -> EnvConfig {
    EnvConfig { memory_mode: mode, ..Default::default() }
}

#[test]
fn persistent_optimum_bounds_every_baseline() {
    let infra = Infrastructure::reference();
    let corpus = generate_corpus(&GenSpec::new(Level::L1, 77, 100)).unwrap();
    let e = env(MemoryMode::Persistent);
    for (i, w) in corpus.iter().enumerate() {
        let (trace, best) = oracle_optimal(w, &infra, MemoryMode::Persistent).unwrap();
        validate_trace(&trace, w, &infra, MemoryMode::Persistent).unwrap();
        assert_eq!(makespan(&trace, w).unwrap(), best);
        let mut policies: Vec<Box<dyn Policy>> =
            vec![Box::new(GreedyPolicy), Box::new(FcfsPolicy::default()), Box::new(RandomPolicy::new(i as u64))];
        for p in &mut policies {
            let r = run_episode(p.as_mut(), w, &infra, e).unwrap();
            assert!(best <= r.makespan_s, "{}: {} beat the optimum on {}", p.name(), r.makespan_s, w.id);
        }
        let heft = heft_schedule(w, &infra, MemoryMode::Persistent).unwrap();
        assert!(best <= makespan(&heft, w).unwrap());
    }
}

#[test]
fn heft_beats_fcfs_on_most_l1_workflows() {
    let infra = Infrastructure::reference();
    let corpus = generate_corpus(&GenSpec::new(Level::L1, 5, 100)).unwrap();
    let wins = corpus
        .iter()
        .filter(|w| {
            let heft = makespan(&heft_schedule(w, &infra, MemoryMode::Persistent).unwrap(), w).unwrap();
            let fcfs = run_episode(&mut FcfsPolicy::default(), w, &infra, env(MemoryMode::Persistent)).unwrap();
            heft <= fcfs.makespan_s
        })
        .count();
    assert!(wins >= 95, "{wins}");
}

#[test]
fn heft_and_greedy_coincide_on_chains_in_transient_mode() {
    let infra = Infrastructure::reference();
    for level in Level::ALL {
        for w in generate_corpus(&GenSpec::new(level, 9, 20)).unwrap() {
            let heft = heft_schedule(&w, &infra, MemoryMode::Transient).unwrap();
            let greedy = run_episode(&mut GreedyPolicy, &w, &infra, env(MemoryMode::Transient)).unwrap();
            assert_eq!(heft, greedy.trace);
        }
    }
}

proptest! {
    #[test]
    fn baseline_traces_replay_cleanly(seed in any::<u64>(), level in 0usize..4, index in 0usize..50, persistent in any::<bool>()) {
        let infra = Infrastructure::reference();
        let mode = if persistent { MemoryMode::Persistent } else { MemoryMode::Transient };
        let w = generate_workflow(&GenSpec::new(Level::ALL[level], seed, 50), index).unwrap();
        let mut policies: Vec<Box<dyn Policy>> =
            vec![Box::new(GreedyPolicy), Box::new(FcfsPolicy::default()), Box::new(RandomPolicy::new(seed))];
        for p in &mut policies {
            let r = run_episode(p.as_mut(), &w, &infra, env(mode)).unwrap();
            prop_assert!(validate_trace(&r.trace, &w, &infra, mode).is_ok());
            prop_assert_eq!(r.makespan_s, makespan(&r.trace, &w).unwrap());
        }
        let heft = heft_schedule(&w, &infra, mode).unwrap();
        prop_assert!(validate_trace(&heft, &w, &infra, mode).is_ok());
    }
}

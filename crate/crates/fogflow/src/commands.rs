//! The five harness commands as library calls. The binary is a thin clap
//! wrapper around these.

use std::fmt;
use std::path::{Path, PathBuf};

use fogflow_core::baselines::{
    heft_schedule, oracle_optimal, run_episode, FcfsPolicy, GreedyPolicy, RandomPolicy, MAX_ORACLE_TASKS,
};
use fogflow_core::ddpg::{DdpgPolicy, EpisodeLog, PolicyBundle, Trainer};
use fogflow_core::model::{Infrastructure, Level, Workflow};
use fogflow_core::rng::SplitMix64;
use fogflow_core::sim::{makespan, validate_trace, EnvConfig, ScheduleTrace};
use fogflow_core::workload::{generate_corpus, mixed_level_workflow};

use crate::config::ExperimentConfig;
use crate::formats::{self, EvalRow, SummaryRow};
use crate::{checkpoint, Error, Result};

pub const LEARNING_CURVE_FILE: &str = "learning_curve.csv";
pub const CHECKPOINT_FILE: &str = "checkpoint.txt";
pub const CONFIG_FILE: &str = "config.toml";
/// Window of the moving averages reported after training.
pub const MOVING_AVERAGE_WINDOW: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolicyKind {
    Random,
    Fcfs,
    Greedy,
    Heft,
    Ddpg,
    Oracle,
}

impl PolicyKind {
    pub const BASELINES: [PolicyKind; 4] = [PolicyKind::Random, PolicyKind::Fcfs, PolicyKind::Greedy, PolicyKind::Heft];

    pub fn as_str(self) -> &'static str {
        match self {
            PolicyKind::Random => "random",
            PolicyKind::Fcfs => "fcfs",
            PolicyKind::Greedy => "greedy",
            PolicyKind::Heft => "heft",
            PolicyKind::Ddpg => "ddpg",
            PolicyKind::Oracle => "oracle",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [Self::Random, Self::Fcfs, Self::Greedy, Self::Heft, Self::Ddpg, Self::Oracle]
            .into_iter()
            .find(|p| p.as_str().eq_ignore_ascii_case(s.trim()))
    }

    /// Parses a comma-separated list, rejecting unknown names and repeats.
    pub fn parse_list(s: &str) -> Result<Vec<Self>> {
        let mut out = Vec::new();
        for name in s.split(',').filter(|n| !n.trim().is_empty()) {
            let p = Self::parse(name).ok_or_else(|| Error::Usage(format!("--policies: unknown policy {name:?}")))?;
            if out.contains(&p) {
                return Err(Error::Usage(format!("--policies: {name} listed twice")));
            }
            out.push(p);
        }
        if out.is_empty() {
            return Err(Error::Usage("--policies: empty list".into()));
        }
        Ok(out)
    }
}

impl fmt::Display for PolicyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn level_label(w: &Workflow) -> String {
    w.level().map_or("none", Level::as_str).to_string()
}

/// Writes the resolved configuration next to an output file as
/// `<stem>.config.toml`.
fn echo_config_for(out: &Path, cfg: &ExperimentConfig) -> Result<PathBuf> {
    let stem = out.file_stem().map_or("output".into(), |s| s.to_string_lossy().into_owned());
    let path = out.with_file_name(format!("{stem}.config.toml"));
    formats::write_text(&path, &cfg.to_toml())?;
    Ok(path)
}

/// Generates one corpus per requested level (all four when `level` is
/// `None`) from `cfg.eval_seed` and `cfg.eval_count`.
pub fn generate(cfg: &ExperimentConfig, level: Option<Level>, out: &Path) -> Result<Vec<Workflow>> {
    cfg.resolve()?;
    let levels = level.map_or(Level::ALL.to_vec(), |l| vec![l]);
    let mut corpus = Vec::new();
    for l in levels {
        corpus.extend(generate_corpus(&cfg.workload.gen_spec(l, cfg.eval_seed, cfg.eval_count))?);
    }
    formats::write_corpus(out, &corpus)?;
    echo_config_for(out, cfg)?;
    Ok(corpus)
}

#[derive(Debug, Clone)]
pub struct TrainReport {
    pub logs: Vec<EpisodeLog>,
    pub bundle: PolicyBundle,
    /// Means over the last [`MOVING_AVERAGE_WINDOW`] episodes (fewer if the
    /// run is shorter).
    pub final_reward_ma: f64,
    pub final_makespan_ma: f64,
}

/// Trailing moving average ending at 1-based `episode`.
pub fn moving_average(values: &[f64], episode: usize, window: usize) -> f64 {
    let end = episode.min(values.len());
    let start = end.saturating_sub(window);
    let slice = &values[start..end];
    slice.iter().sum::<f64>() / slice.len().max(1) as f64
}

/// Trains on workflows drawn uniformly across L1–L4 from `cfg.seed` and
/// writes the learning curve, checkpoint and configuration into `out_dir`.
pub fn train(cfg: &ExperimentConfig, out_dir: &Path) -> Result<TrainReport> {
    let r = cfg.resolve()?;
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let template = cfg.workload.gen_spec(Level::L1, cfg.seed, 1);
    let bundle = PolicyBundle::new(&r.infra, &r.hp, cfg.seed);
    let mut trainer = Trainer::new(bundle, r.hp.clone(), cfg.seed)?;
    let logs = trainer.train(&r.infra, |e| mixed_level_workflow(&template, e))?;

    formats::write_learning_curve(&out_dir.join(LEARNING_CURVE_FILE), &logs)?;
    checkpoint::save(&out_dir.join(CHECKPOINT_FILE), &trainer.bundle)?;
    formats::write_text(&out_dir.join(CONFIG_FILE), &cfg.to_toml())?;

    let rewards: Vec<f64> = logs.iter().map(|l| l.reward_sum).collect();
    let spans: Vec<f64> = logs.iter().map(|l| l.makespan_s).collect();
    Ok(TrainReport {
        final_reward_ma: moving_average(&rewards, logs.len(), MOVING_AVERAGE_WINDOW),
        final_makespan_ma: moving_average(&spans, logs.len(), MOVING_AVERAGE_WINDOW),
        logs,
        bundle: trainer.bundle,
    })
}

/// One policy run on one workflow, with its replay-validated trace.
#[derive(Debug, Clone)]
pub struct Evaluated {
    pub row: EvalRow,
    pub trace: Option<ScheduleTrace>,
}

/// Runs `policy` on `workflow`. A scheduling failure yields an infeasible
/// row; any other error aborts. Every completed trace is replayed against
/// the memory ledger and a violation is an error.
pub fn run_policy(
    policy: PolicyKind,
    bundle: Option<&PolicyBundle>,
    workflow: &Workflow,
    index: usize,
    infra: &Infrastructure,
    env: EnvConfig,
    seed: u64,
) -> Result<Evaluated> {
    use fogflow_core::Error as C;
    let result: fogflow_core::Result<ScheduleTrace> = match policy {
        PolicyKind::Random => {
            let s = SplitMix64::derive(seed, index as u64).next_u64();
            run_episode(&mut RandomPolicy::new(s), workflow, infra, env).map(|r| r.trace)
        }
        PolicyKind::Fcfs => run_episode(&mut FcfsPolicy::default(), workflow, infra, env).map(|r| r.trace),
        PolicyKind::Greedy => run_episode(&mut GreedyPolicy, workflow, infra, env).map(|r| r.trace),
        PolicyKind::Heft => heft_schedule(workflow, infra, env.memory_mode),
        PolicyKind::Oracle => oracle_optimal(workflow, infra, env.memory_mode).map(|(t, _)| t),
        PolicyKind::Ddpg => {
            let b = bundle.ok_or_else(|| Error::Usage("the ddpg policy needs --checkpoint".into()))?;
            run_episode(&mut DdpgPolicy::new(b), workflow, infra, env).map(|r| r.trace)
        }
    };
    let trace = match result {
        Ok(t) => Some(t),
        Err(C::SchedulingFailure { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    if let Some(t) = &trace {
        validate_trace(t, workflow, infra, env.memory_mode).map_err(|v| Error::Violation {
            workflow: workflow.id.clone(),
            policy: policy.to_string(),
            detail: format!("{v:?}"),
        })?;
    }
    let makespan_s = match &trace {
        Some(t) => Some(makespan(t, workflow)?),
        None => None,
    };
    Ok(Evaluated {
        row: EvalRow {
            workflow_id: workflow.id.clone(),
            level: level_label(workflow),
            policy: policy.to_string(),
            makespan_s,
        },
        trace,
    })
}

/// Inputs shared by `evaluate`, `compare` and `oracle`.
#[derive(Debug, Clone, Default)]
pub struct CorpusRun {
    pub corpus: PathBuf,
    pub checkpoint: Option<PathBuf>,
    pub policies: Vec<PolicyKind>,
    /// Keep only workflows of this level.
    pub level: Option<Level>,
}

fn load_inputs(cfg: &ExperimentConfig, run: &CorpusRun) -> Result<(Infrastructure, EnvConfig, Vec<Workflow>, Option<PolicyBundle>)> {
    let r = cfg.resolve()?;
    let mut corpus = formats::read_corpus(&run.corpus)?;
    if let Some(l) = run.level {
        corpus.retain(|w| w.level() == Some(l));
    }
    let bundle = match (&run.checkpoint, run.policies.contains(&PolicyKind::Ddpg)) {
        (Some(p), true) => Some(checkpoint::load(p, &r.infra, r.hp.learning_rate)?),
        (None, true) => return Err(Error::Usage("the ddpg policy needs --checkpoint".into())),
        _ => None,
    };
    Ok((r.infra, r.env, corpus, bundle))
}

/// Every policy on every workflow, workflow-major. Traces, if requested,
/// go to `<dir>/<workflow_id>.<policy>.csv`.
pub fn evaluate_all(cfg: &ExperimentConfig, run: &CorpusRun, traces: Option<&Path>) -> Result<Vec<Evaluated>> {
    let (infra, env, corpus, bundle) = load_inputs(cfg, run)?;
    let mut out = Vec::with_capacity(corpus.len() * run.policies.len());
    for (i, w) in corpus.iter().enumerate() {
        for &p in &run.policies {
            let ev = run_policy(p, bundle.as_ref(), w, i, &infra, env, cfg.seed)?;
            if let (Some(dir), Some(t)) = (traces, &ev.trace) {
                formats::write_trace(&dir.join(format!("{}.{}.csv", w.id, p)), t)?;
            }
            out.push(ev);
        }
    }
    Ok(out)
}

pub fn evaluate(cfg: &ExperimentConfig, run: &CorpusRun, out: &Path, traces: Option<&Path>) -> Result<Vec<Evaluated>> {
    let all = evaluate_all(cfg, run, traces)?;
    let rows: Vec<EvalRow> = all.iter().map(|e| e.row.clone()).collect();
    formats::write_eval(out, &rows)?;
    echo_config_for(out, cfg)?;
    Ok(all)
}

/// Exact optimum for every workflow; refuses corpora with a workflow above
/// the size limit.
pub fn oracle(cfg: &ExperimentConfig, run: &CorpusRun, out: &Path) -> Result<Vec<Evaluated>> {
    let run = CorpusRun { policies: vec![PolicyKind::Oracle], checkpoint: None, ..run.clone() };
    let (_, _, corpus, _) = load_inputs(cfg, &run)?;
    if let Some(w) = corpus.iter().find(|w| w.len() > MAX_ORACLE_TASKS) {
        return Err(Error::TooLarge { workflow: w.id.clone(), tasks: w.len(), limit: MAX_ORACLE_TASKS });
    }
    evaluate(cfg, &run, out, None)
}

fn level_order(label: &str) -> usize {
    Level::parse(label).map_or(Level::ALL.len(), Level::index)
}

/// Per-level means of `rows`, in level order then policy order of
/// `policies`. Adds `(p - ddpg) / p * 100` when ddpg is among them.
pub fn summarize(rows: &[EvalRow], policies: &[PolicyKind]) -> Vec<SummaryRow> {
    let mut levels: Vec<&str> = Vec::new();
    for r in rows {
        if !levels.contains(&r.level.as_str()) {
            levels.push(&r.level);
        }
    }
    levels.sort_by_key(|l| level_order(l));

    let mut out = Vec::new();
    for level in levels {
        let stats = |p: PolicyKind| {
            let mut n = 0;
            let mut ok = 0;
            let mut sum = 0.0;
            for r in rows.iter().filter(|r| r.level == level && r.policy == p.as_str()) {
                n += 1;
                if let Some(m) = r.makespan_s {
                    ok += 1;
                    sum += m;
                }
            }
            (n, ok, (ok > 0).then(|| sum / ok as f64))
        };
        let ddpg = stats(PolicyKind::Ddpg).2;
        for &p in policies {
            let (n, ok, mean) = stats(p);
            if n == 0 {
                continue;
            }
            let gap = match (mean, ddpg) {
                (Some(m), Some(d)) => Some((m - d) / m * 100.0),
                _ => None,
            };
            out.push(SummaryRow {
                level: level.to_string(),
                policy: p.to_string(),
                workflows: n,
                feasible: ok,
                mean_makespan_s: mean,
                gap_pct: gap,
            });
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct CompareReport {
    pub evaluated: Vec<Evaluated>,
    pub summary: Vec<SummaryRow>,
}

/// Mean makespan per level and policy, plus an oracle row for every level
/// whose workflows all fit the exact solver.
pub fn compare(cfg: &ExperimentConfig, run: &CorpusRun, out: &Path) -> Result<CompareReport> {
    let mut evaluated = evaluate_all(cfg, run, None)?;
    let (infra, env, corpus, _) = load_inputs(cfg, &CorpusRun { policies: vec![], ..run.clone() })?;
    let mut policies = run.policies.clone();
    if !policies.contains(&PolicyKind::Oracle) {
        let mut too_big: Vec<String> = Vec::new();
        for w in &corpus {
            if w.len() > MAX_ORACLE_TASKS && !too_big.contains(&level_label(w)) {
                too_big.push(level_label(w));
            }
        }
        let mut any = false;
        for (i, w) in corpus.iter().enumerate() {
            if !too_big.contains(&level_label(w)) {
                evaluated.push(run_policy(PolicyKind::Oracle, None, w, i, &infra, env, cfg.seed)?);
                any = true;
            }
        }
        if any {
            policies.push(PolicyKind::Oracle);
        }
    }
    let rows: Vec<EvalRow> = evaluated.iter().map(|e| e.row.clone()).collect();
    let summary = summarize(&rows, &policies);
    formats::write_summary(out, &summary)?;
    echo_config_for(out, cfg)?;
    Ok(CompareReport { evaluated, summary })
}

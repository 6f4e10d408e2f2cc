use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fogflow::commands::{self, CorpusRun, PolicyKind};
use fogflow::config::{ExperimentConfig, Mode};
use fogflow::{Error, Result};
use fogflow_core::model::Level;

#[derive(Parser)]
#[command(name = "fogflow", version, about = "Two-tier DDPG and baseline schedulers for edge/fog/cloud workflow chains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Experiment configuration (TOML); defaults apply to missing keys.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Output file, or directory for `train`.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long, value_name = "L1..L4", value_parser = parse_level)]
    level: Option<Level>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Persistent,
    Transient,
}

fn parse_level(s: &str) -> std::result::Result<Level, String> {
    Level::parse(s).ok_or_else(|| format!("expected L1, L2, L3 or L4, got {s:?}"))
}

#[derive(Subcommand)]
enum Command {
    /// Write a workflow corpus (all four levels unless --level is given).
    Generate {
        #[command(flatten)]
        common: Common,
        /// Workflows per level.
        #[arg(long)]
        count: Option<usize>,
    },
    /// Train the two-tier agent; writes learning_curve.csv, checkpoint.txt and config.toml into --out.
    Train {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        episodes: Option<usize>,
    },
    /// Per-workflow makespans of the chosen policies.
    Evaluate {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "PATH")]
        corpus: PathBuf,
        #[arg(long, value_name = "PATH")]
        checkpoint: Option<PathBuf>,
        #[arg(long, default_value = "ddpg")]
        policies: String,
        /// Also write one trace CSV per workflow and policy into this directory.
        #[arg(long, value_name = "DIR")]
        traces: Option<PathBuf>,
    },
    /// Mean makespan per level and policy, with gaps against ddpg and an oracle row where it applies.
    Compare {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "PATH")]
        corpus: PathBuf,
        #[arg(long, value_name = "PATH")]
        checkpoint: Option<PathBuf>,
        #[arg(long, default_value = "random,fcfs,greedy,heft,ddpg")]
        policies: String,
    },
    /// Exact optimum per workflow (at most 9 tasks each).
    Oracle {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_name = "PATH")]
        corpus: PathBuf,
    },
}

fn load_config(common: &Common) -> Result<ExperimentConfig> {
    let mut cfg = match &common.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(m) = common.mode {
        cfg.memory_mode = match m {
            ModeArg::Persistent => Mode::Persistent,
            ModeArg::Transient => Mode::Transient,
        };
    }
    if let Some(out) = &common.out {
        cfg.output_dir = Some(out.clone());
    }
    Ok(cfg)
}

fn out_path(cfg: &ExperimentConfig) -> Result<PathBuf> {
    cfg.output_dir.clone().ok_or_else(|| Error::Usage("--out is required (or output_dir in the config)".into()))
}

fn corpus_run(common: &Common, corpus: PathBuf, checkpoint: Option<PathBuf>, policies: &str) -> Result<CorpusRun> {
    Ok(CorpusRun { corpus, checkpoint, policies: PolicyKind::parse_list(policies)?, level: common.level })
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Generate { common, count } => {
            let mut cfg = load_config(&common)?;
            if let Some(s) = common.seed {
                cfg.eval_seed = s;
            }
            if let Some(c) = count {
                cfg.eval_count = c;
            }
            let out = out_path(&cfg)?;
            let corpus = commands::generate(&cfg, common.level, &out)?;
            println!("workflows={} out={}", corpus.len(), out.display());
        }
        Command::Train { common, episodes } => {
            let mut cfg = load_config(&common)?;
            if let Some(s) = common.seed {
                cfg.seed = s;
            }
            if let Some(e) = episodes {
                cfg.training.episodes = e;
            }
            let out = out_path(&cfg)?;
            let report = commands::train(&cfg, &out)?;
            let failed = report.logs.iter().filter(|l| l.failed).count();
            println!(
                "episodes={} final_ma_reward={} final_ma_makespan_s={} failed_episodes={} out={}",
                report.logs.len(),
                report.final_reward_ma,
                report.final_makespan_ma,
                failed,
                out.display()
            );
        }
        Command::Evaluate { common, corpus, checkpoint, policies, traces } => {
            let mut cfg = load_config(&common)?;
            if let Some(s) = common.seed {
                cfg.seed = s;
            }
            let out = out_path(&cfg)?;
            let run = corpus_run(&common, corpus, checkpoint, &policies)?;
            let rows = commands::evaluate(&cfg, &run, &out, traces.as_deref())?;
            let infeasible = rows.iter().filter(|r| r.row.makespan_s.is_none()).count();
            println!("rows={} infeasible={} out={}", rows.len(), infeasible, out.display());
        }
        Command::Compare { common, corpus, checkpoint, policies } => {
            let mut cfg = load_config(&common)?;
            if let Some(s) = common.seed {
                cfg.seed = s;
            }
            let out = out_path(&cfg)?;
            let run = corpus_run(&common, corpus, checkpoint, &policies)?;
            let report = commands::compare(&cfg, &run, &out)?;
            print_summary(&report.summary, &out);
        }
        Command::Oracle { common, corpus } => {
            let cfg = load_config(&common)?;
            let out = out_path(&cfg)?;
            let run = CorpusRun { corpus, level: common.level, ..Default::default() };
            let rows = commands::oracle(&cfg, &run, &out)?;
            println!("rows={} out={}", rows.len(), out.display());
        }
    }
    Ok(())
}

fn print_summary(rows: &[fogflow::formats::SummaryRow], out: &Path) {
    for r in rows {
        let mean = r.mean_makespan_s.map_or("-".into(), |m| format!("{m:.4}"));
        let gap = r.gap_pct.map_or("-".into(), |g| format!("{g:.2}"));
        println!("{:5} {:7} n={:3} mean_makespan_s={mean} gap_pct={gap}", r.level, r.policy, r.workflows);
    }
    println!("out={}", out.display());
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let first = e.to_string().lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ").to_string();
            eprintln!("{}", Error::Usage(first).one_line());
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.one_line());
            ExitCode::FAILURE
        }
    }
}

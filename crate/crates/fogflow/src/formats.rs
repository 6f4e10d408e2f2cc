//! CSV files read and written by the harness.
//!
//! Floats are written with Rust's shortest round-trip formatting, so a value
//! read back parses to the same bits.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use fogflow_core::ddpg::EpisodeLog;
use fogflow_core::model::{Task, Workflow};
use fogflow_core::sim::ScheduleTrace;

use crate::{Error, Result};

pub const CORPUS_HEADER: [&str; 5] = ["workflow_id", "task_id", "workload_mi", "memory_mb", "output_mb"];
pub const TRACE_HEADER: [&str; 5] = ["task_id", "layer", "node_id", "cost_s", "cum_makespan_s"];
pub const CURVE_HEADER: [&str; 9] = [
    "episode",
    "reward_sum",
    "makespan_s",
    "noise_std",
    "critic_loss_g",
    "critic_loss_edge",
    "critic_loss_fog",
    "critic_loss_cloud",
    "actor_steps",
];
pub const EVAL_HEADER: [&str; 5] = ["workflow_id", "level", "policy", "makespan_s", "feasible"];
pub const GAP_COLUMN: &str = "gap_pct=(policy-ddpg)/policy*100";
pub const SUMMARY_HEADER: [&str; 6] = ["level", "policy", "workflows", "feasible", "mean_makespan_s", GAP_COLUMN];

fn writer(path: &Path) -> Result<csv::Writer<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::WriterBuilder::new().has_headers(false).from_writer(file))
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::io(path, std::io::Error::other(format!("{other:?}"))),
    }
}

fn write_rows<const N: usize>(path: &Path, header: [&str; N], rows: impl IntoIterator<Item = [String; N]>) -> Result<()> {
    let mut w = writer(path)?;
    w.write_record(header).map_err(|e| csv_err(path, e))?;
    for row in rows {
        w.write_record(&row).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_corpus(path: &Path, corpus: &[Workflow]) -> Result<()> {
    for w in corpus {
        if w.id.is_empty() || w.id.contains([',', '"', '\n', '\r']) {
            return Err(Error::Config(format!("workflow id {:?} cannot be stored in a corpus file", w.id)));
        }
    }
    let rows = corpus.iter().flat_map(|w| {
        w.tasks.iter().map(|t| {
            [w.id.clone(), t.id.to_string(), t.workload_mi.to_string(), t.memory_mb.to_string(), t.output_mb.to_string()]
        })
    });
    write_rows(path, CORPUS_HEADER, rows)
}

/// Reads a corpus. Rows of one workflow must be contiguous with task ids
/// 1..=T in order.
pub fn read_corpus(path: &Path) -> Result<Vec<Workflow>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(file);
    let parse_err = |line: u64, field: &str, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        field: field.to_string(),
        message,
    };

    let mut records = r.records();
    match records.next() {
        None => return Err(parse_err(1, "header", "missing header row".into())),
        Some(rec) => {
            let rec = rec.map_err(|e| parse_err(1, "header", e.to_string()))?;
            let got: Vec<&str> = rec.iter().map(str::trim).collect();
            if got != CORPUS_HEADER {
                return Err(parse_err(1, "header", format!("expected {}, got {}", CORPUS_HEADER.join(","), got.join(","))));
            }
        }
    }

    let mut corpus: Vec<Workflow> = Vec::new();
    let mut current: Option<(String, Vec<Task>, u64)> = None;
    let mut seen = std::collections::HashSet::new();
    let finish = |(id, tasks, line): (String, Vec<Task>, u64), corpus: &mut Vec<Workflow>| -> Result<()> {
        let wf = Workflow::new(id, tasks).map_err(|e| parse_err(line, "task_id", e.to_string()))?;
        corpus.push(wf);
        Ok(())
    };
    for rec in records {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(line, "record", e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line());
        if rec.len() != CORPUS_HEADER.len() {
            return Err(parse_err(line, "record", format!("expected {} fields, got {}", CORPUS_HEADER.len(), rec.len())));
        }
        let id = rec[0].trim();
        if id.is_empty() {
            return Err(parse_err(line, "workflow_id", "empty".into()));
        }
        let task_id: usize =
            rec[1].trim().parse().map_err(|_| parse_err(line, "task_id", format!("not an integer: {:?}", &rec[1])))?;
        let num = |i: usize, positive: bool| -> Result<f64> {
            let name = CORPUS_HEADER[i];
            let v: f64 = rec[i].trim().parse().map_err(|_| parse_err(line, name, format!("not a number: {:?}", &rec[i])))?;
            let ok = v.is_finite() && if positive { v > 0.0 } else { v >= 0.0 };
            if !ok {
                let rule = if positive { "must be > 0" } else { "must be >= 0" };
                return Err(parse_err(line, name, format!("{v} {rule}")));
            }
            Ok(v)
        };
        let task = Task { id: task_id, workload_mi: num(2, true)?, memory_mb: num(3, true)?, output_mb: num(4, false)? };

        match &mut current {
            Some((cur, tasks, _)) if cur == id => tasks.push(task),
            _ => {
                if let Some(done) = current.take() {
                    finish(done, &mut corpus)?;
                }
                if !seen.insert(id.to_string()) {
                    return Err(parse_err(line, "workflow_id", format!("rows for {id} are not contiguous")));
                }
                current = Some((id.to_string(), vec![task], line));
            }
        }
    }
    if let Some(done) = current.take() {
        finish(done, &mut corpus)?;
    }
    Ok(corpus)
}

pub fn write_trace(path: &Path, trace: &ScheduleTrace) -> Result<()> {
    let mut cum = 0.0;
    let rows: Vec<[String; 5]> = trace
        .entries
        .iter()
        .map(|e| {
            cum += e.cost_s;
            [e.task_id.to_string(), e.layer.to_string(), e.node.to_string(), e.cost_s.to_string(), cum.to_string()]
        })
        .collect();
    write_rows(path, TRACE_HEADER, rows)
}

/// Episodes are numbered from 1.
pub fn write_learning_curve(path: &Path, logs: &[EpisodeLog]) -> Result<()> {
    let rows = logs.iter().map(|l| {
        [
            (l.episode + 1).to_string(),
            l.reward_sum.to_string(),
            l.makespan_s.to_string(),
            l.noise_std.to_string(),
            l.critic_loss_global.to_string(),
            l.critic_loss_local[0].to_string(),
            l.critic_loss_local[1].to_string(),
            l.critic_loss_local[2].to_string(),
            l.actor_steps.to_string(),
        ]
    });
    write_rows(path, CURVE_HEADER, rows)
}

/// One evaluated workflow.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalRow {
    pub workflow_id: String,
    /// Empty when the task count is outside every level band.
    pub level: String,
    pub policy: String,
    /// `None` when the policy could not place every task.
    pub makespan_s: Option<f64>,
}

pub fn write_eval(path: &Path, rows: &[EvalRow]) -> Result<()> {
    let rows = rows.iter().map(|r| {
        [
            r.workflow_id.clone(),
            r.level.clone(),
            r.policy.clone(),
            r.makespan_s.map_or(String::new(), |m| m.to_string()),
            r.makespan_s.is_some().to_string(),
        ]
    });
    write_rows(path, EVAL_HEADER, rows)
}

pub fn read_eval(path: &Path) -> Result<Vec<EvalRow>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = csv::Reader::from_reader(file);
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        let line = rec.position().map_or(0, |p| p.line());
        let makespan_s = if rec[3].is_empty() {
            None
        } else {
            Some(rec[3].parse().map_err(|_| Error::Parse {
                path: path.to_path_buf(),
                line,
                field: "makespan_s".into(),
                message: format!("not a number: {:?}", &rec[3]),
            })?)
        };
        out.push(EvalRow { workflow_id: rec[0].into(), level: rec[1].into(), policy: rec[2].into(), makespan_s });
    }
    Ok(out)
}

/// Mean makespan of one policy on one level.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub level: String,
    pub policy: String,
    pub workflows: usize,
    pub feasible: usize,
    /// Mean over feasible workflows.
    pub mean_makespan_s: Option<f64>,
    /// `(policy - ddpg) / policy * 100`, when both means exist.
    pub gap_pct: Option<f64>,
}

pub fn write_summary(path: &Path, rows: &[SummaryRow]) -> Result<()> {
    let opt = |v: Option<f64>| v.map_or(String::new(), |x| x.to_string());
    let rows = rows.iter().map(|r| {
        [
            r.level.clone(),
            r.policy.clone(),
            r.workflows.to_string(),
            r.feasible.to_string(),
            opt(r.mean_makespan_s),
            opt(r.gap_pct),
        ]
    });
    write_rows(path, SUMMARY_HEADER, rows)
}

pub fn read_summary(path: &Path) -> Result<Vec<SummaryRow>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = csv::Reader::from_reader(file);
    let mut out = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        let line = rec.position().map_or(0, |p| p.line());
        let bad = |field: &str| Error::Parse { path: path.to_path_buf(), line, field: field.into(), message: "invalid".into() };
        let opt = |i: usize, name: &str| -> Result<Option<f64>> {
            if rec[i].is_empty() {
                Ok(None)
            } else {
                rec[i].parse().map(Some).map_err(|_| bad(name))
            }
        };
        out.push(SummaryRow {
            level: rec[0].into(),
            policy: rec[1].into(),
            workflows: rec[2].parse().map_err(|_| bad("workflows"))?,
            feasible: rec[3].parse().map_err(|_| bad("feasible"))?,
            mean_makespan_s: opt(4, "mean_makespan_s")?,
            gap_pct: opt(5, GAP_COLUMN)?,
        });
    }
    Ok(out)
}

/// Writes `text` to `path`, creating parent directories.
pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let mut f = File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(text.as_bytes()).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use fogflow_core::model::Level;
    use fogflow_core::workload::{generate_corpus, GenSpec};

    #[test]
    fn corpus_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.csv");
        let mut corpus = generate_corpus(&GenSpec::new(Level::L2, 3, 7)).unwrap();
        corpus.extend(generate_corpus(&GenSpec::new(Level::L4, 3, 2)).unwrap());
        write_corpus(&p, &corpus).unwrap();
        assert_eq!(read_corpus(&p).unwrap(), corpus);

        write_corpus(&p, &[]).unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "workflow_id,task_id,workload_mi,memory_mb,output_mb\n");
        assert!(read_corpus(&p).unwrap().is_empty());
    }

    fn parse(text: &str) -> Result<Vec<Workflow>> {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.csv");
        std::fs::write(&p, text).unwrap();
        read_corpus(&p)
    }

    #[test]
    fn corpus_errors_name_field_and_line() {
        let h = "workflow_id,task_id,workload_mi,memory_mb,output_mb\n";
        let e = parse(&format!("{h}w,1,100,10,1\nw,2,-5,10,1\n")).unwrap_err();
        assert!(matches!(&e, Error::Parse { line: 3, field, .. } if field == "workload_mi"), "{e}");
        let e = parse(&format!("{h}w,1,100,abc,1\n")).unwrap_err();
        assert!(matches!(&e, Error::Parse { line: 2, field, .. } if field == "memory_mb"), "{e}");
        let e = parse(&format!("{h}w,1,100,10\n")).unwrap_err();
        assert!(matches!(&e, Error::Parse { line: 2, .. }), "{e}");
        let e = parse(&format!("{h}a,1,100,10,1\nb,1,100,10,1\na,2,100,10,1\n")).unwrap_err();
        assert!(matches!(&e, Error::Parse { line: 4, field, .. } if field == "workflow_id"), "{e}");
        let e = parse(&format!("{h}a,1,100,10,1\na,3,100,10,1\n")).unwrap_err();
        assert!(matches!(&e, Error::Parse { field, .. } if field == "task_id"), "{e}");
        let e = parse("id,task,w,m,o\n").unwrap_err();
        assert!(matches!(&e, Error::Parse { line: 1, field, .. } if field == "header"), "{e}");
        assert!(parse("").is_err());
    }

    #[test]
    fn trace_cumulates() {
        use fogflow_core::baselines::{run_episode, GreedyPolicy};
        use fogflow_core::model::Infrastructure;
        use fogflow_core::sim::EnvConfig;
        let infra = Infrastructure::reference();
        let w = &generate_corpus(&GenSpec::new(Level::L1, 1, 1)).unwrap()[0];
        let r = run_episode(&mut GreedyPolicy, w, &infra, EnvConfig::default()).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.csv");
        write_trace(&p, &r.trace).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        let last = text.lines().last().unwrap();
        let cum: f64 = last.rsplit(',').next().unwrap().parse().unwrap();
        assert_eq!(cum, r.makespan_s);
        assert_eq!(text.lines().count(), w.len() + 1);
    }
}

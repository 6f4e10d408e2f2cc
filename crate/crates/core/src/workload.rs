//! Seeded synthetic workflows.
//!
//! Workflow `index` of a [`GenSpec`] is drawn from its own SplitMix64 stream,
//! keyed by `(seed, level, index)`, so any single workflow can be regenerated
//! without producing the ones before it. Draw order within a stream: task
//! count, then for each task workload, memory, output.

use alloc::format;
use alloc::vec::Vec;

use crate::model::{Level, Task, Workflow};
use crate::rng::SplitMix64;
use crate::{Error, Result};

/// Largest memory demand the generator may emit: the smallest reference
/// node, so every task fits on at least one node of every layer.
pub const MAX_TASK_MEMORY_MB: f64 = 2048.0;

pub const DEFAULT_WORKLOAD_RANGE_MI: (f64, f64) = (200.0, 4000.0);
pub const DEFAULT_MEMORY_RANGE_MB: (f64, f64) = (128.0, 2048.0);
pub const DEFAULT_OUTPUT_RANGE_MB: (f64, f64) = (1.0, 50.0);

#[derive(Debug, Clone, PartialEq)]
pub struct GenSpec {
    pub level: Level,
    pub seed: u64,
    pub count: usize,
    pub workload_range_mi: (f64, f64),
    pub memory_range_mb: (f64, f64),
    pub output_range_mb: (f64, f64),
}

impl GenSpec {
    pub fn new(level: Level, seed: u64, count: usize) -> Self {
        Self {
            level,
            seed,
            count,
            workload_range_mi: DEFAULT_WORKLOAD_RANGE_MI,
            memory_range_mb: DEFAULT_MEMORY_RANGE_MB,
            output_range_mb: DEFAULT_OUTPUT_RANGE_MB,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::Config("count must be positive".into()));
        }
        let check = |name: &str, (lo, hi): (f64, f64), allow_zero: bool| -> Result<()> {
            let lo_ok = if allow_zero { lo >= 0.0 } else { lo > 0.0 };
            if !(lo.is_finite() && hi.is_finite() && lo_ok && lo <= hi) {
                return Err(Error::Config(format!("{name}: invalid range [{lo}, {hi}]")));
            }
            Ok(())
        };
        check("workload_range_mi", self.workload_range_mi, false)?;
        check("memory_range_mb", self.memory_range_mb, false)?;
        check("output_range_mb", self.output_range_mb, true)?;
        if self.memory_range_mb.1 > MAX_TASK_MEMORY_MB {
            return Err(Error::Config(format!(
                "memory_range_mb: upper bound {} exceeds {MAX_TASK_MEMORY_MB}",
                self.memory_range_mb.1
            )));
        }
        Ok(())
    }

    fn stream(&self, index: usize) -> SplitMix64 {
        let key = ((self.level.index() as u64 + 1) << 56) ^ index as u64;
        SplitMix64::derive(self.seed, key)
    }
}

pub fn generate_workflow(spec: &GenSpec, index: usize) -> Result<Workflow> {
    spec.validate()?;
    if index >= spec.count {
        return Err(Error::Config(format!("index {index} out of range for count {}", spec.count)));
    }
    let mut rng = spec.stream(index);
    let (lo, hi) = spec.level.band();
    let n = rng.range_inclusive(lo, hi);
    let tasks = (1..=n)
        .map(|id| {
            let w = rng.uniform(spec.workload_range_mi.0, spec.workload_range_mi.1);
            let m = rng.uniform(spec.memory_range_mb.0, spec.memory_range_mb.1);
            let d = rng.uniform(spec.output_range_mb.0, spec.output_range_mb.1);
            Task { id, workload_mi: w, memory_mb: m, output_mb: d }
        })
        .collect();
    Workflow::new(format!("{}-{:05}", spec.level, index), tasks)
}

pub fn generate_corpus(spec: &GenSpec) -> Result<Vec<Workflow>> {
    (0..spec.count).map(|i| generate_workflow(spec, i)).collect()
}

/// Training workflow for `episode`: level uniform over L1–L4, then the
/// workflow at index `episode` of that level's stream.
pub fn mixed_level_workflow(template: &GenSpec, episode: usize) -> Result<Workflow> {
    let mut pick = SplitMix64::derive(template.seed, 0xC0FF_EE00 ^ episode as u64);
    let level = Level::ALL[pick.below(4) as usize];
    let spec = GenSpec { level, count: episode + 1, ..template.clone() };
    generate_workflow(&spec, episode)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_deterministic() {
        let spec = GenSpec::new(Level::L1, 42, 10);
        assert_eq!(generate_workflow(&spec, 0).unwrap(), generate_workflow(&spec, 0).unwrap());
        assert_ne!(generate_workflow(&spec, 0).unwrap(), generate_workflow(&spec, 1).unwrap());
    }

    #[test]
    fn l4_counts_in_band() {
        let spec = GenSpec::new(Level::L4, 42, 200);
        for w in generate_corpus(&spec).unwrap() {
            assert!((19..=25).contains(&w.len()));
            assert_eq!(w.level(), Some(Level::L4));
        }
    }

    #[test]
    fn l2_corpus_respects_band_and_memory_cap() {
        let spec = GenSpec::new(Level::L2, 7, 1000);
        let corpus = generate_corpus(&spec).unwrap();
        let mut seen = [false; 4];
        for w in &corpus {
            assert!((9..=12).contains(&w.len()));
            seen[w.len() - 9] = true;
            for t in &w.tasks {
                assert!(t.memory_mb <= MAX_TASK_MEMORY_MB);
                assert!((200.0..=4000.0).contains(&t.workload_mi));
                assert!((1.0..=50.0).contains(&t.output_mb));
            }
        }
        assert!(seen.iter().all(|&s| s), "every band value should occur");
    }

    #[test]
    fn invalid_specs_rejected() {
        let mut spec = GenSpec::new(Level::L1, 1, 1);
        spec.memory_range_mb = (128.0, 4096.0);
        assert!(generate_workflow(&spec, 0).is_err());
        let mut spec = GenSpec::new(Level::L1, 1, 1);
        spec.workload_range_mi = (10.0, 5.0);
        assert!(generate_workflow(&spec, 0).is_err());
        let mut spec = GenSpec::new(Level::L1, 1, 1);
        spec.workload_range_mi = (0.0, 5.0);
        assert!(generate_workflow(&spec, 0).is_err());
        let spec = GenSpec::new(Level::L1, 1, 1);
        assert!(generate_workflow(&spec, 1).is_err());
    }

    #[test]
    fn mixed_levels_cover_all_bands() {
        let spec = GenSpec::new(Level::L1, 3, 1);
        let mut seen = [0usize; 4];
        for e in 0..400 {
            let w = mixed_level_workflow(&spec, e).unwrap();
            seen[w.level().unwrap().index()] += 1;
        }
        assert!(seen.iter().all(|&c| c > 60), "{seen:?}");
    }
}

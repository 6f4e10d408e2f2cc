//! Experiment configuration in TOML.
//!
//! Every field has a default, so an empty file (or no file) describes the
//! reference setup. Unknown keys are rejected.

use std::path::{Path, PathBuf};

use fogflow_core::ddpg::{Hyperparams, NoiseConfig};
use fogflow_core::model::{Infrastructure, Layer, Level, LinkSpec, Node};
use fogflow_core::sim::{EnvConfig, MemoryMode, Normalization, RewardConfig};
use fogflow_core::workload::{GenSpec, DEFAULT_MEMORY_RANGE_MB, DEFAULT_OUTPUT_RANGE_MB, DEFAULT_WORKLOAD_RANGE_MI};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Persistent,
    Transient,
}

impl From<Mode> for MemoryMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Persistent => MemoryMode::Persistent,
            Mode::Transient => MemoryMode::Transient,
        }
    }
}

impl From<MemoryMode> for Mode {
    fn from(m: MemoryMode) -> Self {
        match m {
            MemoryMode::Persistent => Mode::Persistent,
            MemoryMode::Transient => Mode::Transient,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkConfig {
    pub latency_s: f64,
    pub bandwidth_mbps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeConfig {
    pub id: u32,
    pub layer: String,
    pub capacity_mips: f64,
    pub memory_mb: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InfraConfig {
    pub edge_fog: LinkConfig,
    pub fog_cloud: LinkConfig,
    pub nodes: Vec<NodeConfig>,
}

impl Default for InfraConfig {
    fn default() -> Self {
        let infra = Infrastructure::reference();
        let link = |l: &LinkSpec| LinkConfig { latency_s: l.latency_s, bandwidth_mbps: l.bandwidth_mbps };
        Self {
            edge_fog: link(infra.edge_fog()),
            fog_cloud: link(infra.fog_cloud()),
            nodes: infra
                .nodes()
                .iter()
                .map(|n| NodeConfig {
                    id: n.id.0,
                    layer: n.layer.as_str().to_string(),
                    capacity_mips: n.capacity_mips,
                    memory_mb: n.memory_mb,
                })
                .collect(),
        }
    }
}

impl InfraConfig {
    pub fn build(&self) -> Result<Infrastructure> {
        let mut nodes = Vec::with_capacity(self.nodes.len());
        for (i, n) in self.nodes.iter().enumerate() {
            let layer = Layer::parse(&n.layer).ok_or_else(|| {
                Error::Config(format!("infrastructure.nodes[{i}].layer: unknown layer {:?}", n.layer))
            })?;
            nodes.push(Node::new(n.id, layer, n.capacity_mips, n.memory_mb));
        }
        let link = |from, to, c: &LinkConfig| LinkSpec { from, to, latency_s: c.latency_s, bandwidth_mbps: c.bandwidth_mbps };
        Ok(Infrastructure::new(
            nodes,
            link(Layer::Edge, Layer::Fog, &self.edge_fog),
            link(Layer::Fog, Layer::Cloud, &self.fog_cloud),
        )?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WorkloadConfig {
    pub workload_range_mi: [f64; 2],
    pub memory_range_mb: [f64; 2],
    pub output_range_mb: [f64; 2],
}

impl Default for WorkloadConfig {
    fn default() -> Self {
        let arr = |(a, b): (f64, f64)| [a, b];
        Self {
            workload_range_mi: arr(DEFAULT_WORKLOAD_RANGE_MI),
            memory_range_mb: arr(DEFAULT_MEMORY_RANGE_MB),
            output_range_mb: arr(DEFAULT_OUTPUT_RANGE_MB),
        }
    }
}

impl WorkloadConfig {
    pub fn gen_spec(&self, level: Level, seed: u64, count: usize) -> GenSpec {
        let pair = |a: [f64; 2]| (a[0], a[1]);
        GenSpec {
            workload_range_mi: pair(self.workload_range_mi),
            memory_range_mb: pair(self.memory_range_mb),
            output_range_mb: pair(self.output_range_mb),
            ..GenSpec::new(level, seed, count)
        }
    }

    /// State normalization follows the upper end of each attribute range.
    pub fn normalization(&self) -> Normalization {
        Normalization {
            workload_mi: self.workload_range_mi[1],
            memory_mb: self.memory_range_mb[1],
            output_mb: self.output_range_mb[1],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainingConfig {
    pub episodes: usize,
    pub gamma: f64,
    pub tau: f64,
    pub batch_size: usize,
    pub buffer_capacity: usize,
    pub learning_rate: f64,
    pub clip_norm: f64,
    pub hidden: [usize; 2],
    pub noise_initial_std: f64,
    pub noise_decay: f64,
    pub noise_floor: f64,
}

impl Default for TrainingConfig {
    fn default() -> Self {
        let hp = Hyperparams::default();
        Self {
            episodes: hp.episodes,
            gamma: hp.gamma,
            tau: hp.tau,
            batch_size: hp.batch_size,
            buffer_capacity: hp.buffer_capacity,
            learning_rate: hp.learning_rate,
            clip_norm: hp.clip_norm,
            hidden: hp.hidden,
            noise_initial_std: hp.noise.initial_std,
            noise_decay: hp.noise.decay,
            noise_floor: hp.noise.floor,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RewardToml {
    pub makespan_weight: f64,
    pub makespan_target_s: f64,
    pub beta1: f64,
    pub beta2: f64,
}

impl Default for RewardToml {
    fn default() -> Self {
        let r = RewardConfig::default();
        Self { makespan_weight: r.makespan_weight, makespan_target_s: r.makespan_target_s, beta1: r.beta1, beta2: r.beta2 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    /// Seed for network initialization, exploration and the training stream.
    pub seed: u64,
    /// Seed for generated evaluation corpora; keep it apart from `seed`.
    pub eval_seed: u64,
    /// Workflows per level in generated evaluation corpora.
    pub eval_count: usize,
    pub memory_mode: Mode,
    pub output_dir: Option<PathBuf>,
    pub workload: WorkloadConfig,
    pub training: TrainingConfig,
    pub reward: RewardToml,
    pub infrastructure: InfraConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            seed: 42,
            eval_seed: 1042,
            eval_count: 50,
            memory_mode: Mode::Persistent,
            output_dir: None,
            workload: WorkloadConfig::default(),
            training: TrainingConfig::default(),
            reward: RewardToml::default(),
            infrastructure: InfraConfig::default(),
        }
    }
}

/// Everything an experiment needs, built from an [`ExperimentConfig`].
#[derive(Debug, Clone)]
pub struct Resolved {
    pub infra: Infrastructure,
    pub hp: Hyperparams,
    pub env: EnvConfig,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn env_config(&self) -> EnvConfig {
        let r = &self.reward;
        EnvConfig {
            memory_mode: self.memory_mode.into(),
            reward: RewardConfig {
                makespan_weight: r.makespan_weight,
                makespan_target_s: r.makespan_target_s,
                beta1: r.beta1,
                beta2: r.beta2,
            },
            norm: self.workload.normalization(),
        }
    }

    pub fn hyperparams(&self) -> Hyperparams {
        let t = &self.training;
        Hyperparams {
            gamma: t.gamma,
            tau: t.tau,
            batch_size: t.batch_size,
            buffer_capacity: t.buffer_capacity,
            learning_rate: t.learning_rate,
            clip_norm: t.clip_norm,
            episodes: t.episodes,
            hidden: t.hidden,
            noise: NoiseConfig { initial_std: t.noise_initial_std, decay: t.noise_decay, floor: t.noise_floor },
            env: self.env_config(),
        }
    }

    /// Validates every section and builds the runtime objects.
    pub fn resolve(&self) -> Result<Resolved> {
        let named = |section: &str, e: fogflow_core::Error| Error::Config(format!("{section}: {e}"));
        let infra = self.infrastructure.build().map_err(|e| match e {
            Error::Core(c) => named("infrastructure", c),
            other => other,
        })?;
        self.workload.gen_spec(Level::L1, self.seed, 1).validate().map_err(|e| named("workload", e))?;
        let hp = self.hyperparams();
        hp.validate().map_err(|e| named("training", e))?;
        if self.eval_count == 0 {
            return Err(Error::Config("eval_count: must be positive".into()));
        }
        let env = hp.env;
        Ok(Resolved { infra, hp, env })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip_and_resolve() {
        let cfg = ExperimentConfig::default();
        let back = ExperimentConfig::from_toml(&cfg.to_toml()).unwrap();
        assert_eq!(back, cfg);
        let r = cfg.resolve().unwrap();
        assert_eq!(r.infra, Infrastructure::reference());
        assert_eq!(r.hp, Hyperparams::default());
        assert_eq!(r.env, EnvConfig::default());
    }

    #[test]
    fn empty_file_is_default() {
        assert_eq!(ExperimentConfig::from_toml("").unwrap(), ExperimentConfig::default());
    }

    #[test]
    fn partial_override() {
        let cfg = ExperimentConfig::from_toml("seed = 7\nmemory_mode = \"transient\"\n[training]\nepisodes = 5\n").unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.training.episodes, 5);
        assert_eq!(cfg.training.gamma, 0.99);
        assert_eq!(cfg.env_config().memory_mode, MemoryMode::Transient);
    }

    #[test]
    fn bad_fields_are_named() {
        let e = ExperimentConfig::from_toml("[training]\nepisodez = 5\n").unwrap_err().to_string();
        assert!(e.contains("episodez"), "{e}");
        let cfg = ExperimentConfig::from_toml("[training]\ngamma = 1.5\n").unwrap();
        let e = cfg.resolve().unwrap_err().to_string();
        assert!(e.contains("training") && e.contains("gamma"), "{e}");
        let cfg = ExperimentConfig::from_toml("[workload]\nmemory_range_mb = [128.0, 4096.0]\n").unwrap();
        let e = cfg.resolve().unwrap_err().to_string();
        assert!(e.contains("memory_range_mb"), "{e}");
    }
}

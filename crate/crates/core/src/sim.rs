//! The scheduling environment: one workflow per episode, one task per step.
//!
//! A step assigns the current task to a node, charges its cost to the
//! node's availability and to the running makespan, reserves the task's
//! memory on the node, and advances to the next task. Masks must be applied
//! by the caller; [`EnvState::step`] rejects infeasible nodes.

use alloc::vec;
use alloc::vec::Vec;

use crate::model::{cost_breakdown, Infrastructure, Layer, NodeId, Task, Workflow};
use crate::{Error, Result};

/// Whether a task's memory stays reserved after it finishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MemoryMode {
    /// Reservations accumulate until the end of the episode.
    #[default]
    Persistent,
    /// Each task only needs `m_v <= M_n`; nothing is held afterwards.
    Transient,
}

impl MemoryMode {
    pub fn as_str(self) -> &'static str {
        match self {
            MemoryMode::Persistent => "persistent",
            MemoryMode::Transient => "transient",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "persistent" => Some(Self::Persistent),
            "transient" => Some(Self::Transient),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RewardConfig {
    pub makespan_weight: f64,
    pub makespan_target_s: f64,
    /// Weight of the completion bonus.
    pub beta1: f64,
    /// Weight of the compute-efficiency term `exec / cost`.
    pub beta2: f64,
}

impl Default for RewardConfig {
    fn default() -> Self {
        Self { makespan_weight: 0.98, makespan_target_s: 1.3, beta1: 0.5, beta2: 0.1 }
    }
}

impl RewardConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.makespan_weight > 0.0 && self.makespan_weight <= 1.0) {
            return Err(Error::Config("makespan_weight must be in (0, 1]".into()));
        }
        if !(self.makespan_target_s > 0.0 && self.makespan_target_s.is_finite()) {
            return Err(Error::Config("makespan_target_s must be > 0".into()));
        }
        if !(self.beta1 >= 0.0 && self.beta2 >= 0.0) {
            return Err(Error::Config("beta1 and beta2 must be >= 0".into()));
        }
        Ok(())
    }

    /// The part of the reward that penalizes the assignment's cost.
    pub fn cost_term(&self, cost_s: f64) -> f64 {
        -self.makespan_weight * (cost_s / self.makespan_target_s)
    }
}

/// Per-step reward: scaled cost penalty, completion bonus and the share of
/// the cost spent computing rather than transferring.
pub fn reward(cost_s: f64, exec_s: f64, done: bool, cfg: &RewardConfig) -> f64 {
    let efficiency = if cost_s > 0.0 { exec_s / cost_s } else { 1.0 };
    let bonus = if done { 1.0 } else { 0.0 };
    cfg.cost_term(cost_s) + cfg.beta1 * bonus + cfg.beta2 * efficiency
}

/// Scales used to map task attributes into `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normalization {
    pub workload_mi: f64,
    pub memory_mb: f64,
    pub output_mb: f64,
}

impl Default for Normalization {
    fn default() -> Self {
        Self {
            workload_mi: crate::workload::DEFAULT_WORKLOAD_RANGE_MI.1,
            memory_mb: crate::workload::MAX_TASK_MEMORY_MB,
            output_mb: crate::workload::DEFAULT_OUTPUT_RANGE_MB.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EnvConfig {
    pub memory_mode: MemoryMode,
    pub reward: RewardConfig,
    pub norm: Normalization,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Action {
    pub layer: Layer,
    pub node: NodeId,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceEntry {
    pub task_id: usize,
    pub layer: Layer,
    pub node: NodeId,
    pub cost_s: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ScheduleTrace {
    pub entries: Vec<TraceEntry>,
}

impl ScheduleTrace {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_cost(&self) -> f64 {
        self.entries.iter().map(|e| e.cost_s).sum()
    }
}

/// Sum of task costs of a complete trace.
pub fn makespan(trace: &ScheduleTrace, workflow: &Workflow) -> Result<f64> {
    if trace.len() != workflow.len() {
        return Err(Error::IncompleteTrace { assigned: trace.len(), expected: workflow.len() });
    }
    Ok(trace.total_cost())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepOutcome {
    pub reward: f64,
    pub cost_s: f64,
    pub exec_s: f64,
    pub done: bool,
}

pub const GLOBAL_STATE_DIM: usize = 12;

/// Width of a layer's local state: three features per node plus the task.
pub fn local_state_dim(layer_nodes: usize) -> usize {
    3 * layer_nodes + 3
}

#[derive(Debug, Clone)]
pub struct EnvState<'a> {
    infra: &'a Infrastructure,
    workflow: &'a Workflow,
    config: EnvConfig,
    residual_memory_mb: Vec<f64>,
    available_at_s: Vec<f64>,
    /// Cumulative MB shipped over edge→fog and fog→cloud.
    traffic_mb: [f64; 2],
    index: usize,
    elapsed_s: f64,
    trace: ScheduleTrace,
}

impl<'a> EnvState<'a> {
    pub fn reset(workflow: &'a Workflow, infra: &'a Infrastructure, config: EnvConfig) -> Self {
        Self {
            infra,
            workflow,
            config,
            residual_memory_mb: infra.nodes().iter().map(|n| n.memory_mb).collect(),
            available_at_s: vec![0.0; infra.len()],
            traffic_mb: [0.0; 2],
            index: 0,
            elapsed_s: 0.0,
            trace: ScheduleTrace::default(),
        }
    }

    pub fn infra(&self) -> &'a Infrastructure {
        self.infra
    }

    pub fn workflow(&self) -> &'a Workflow {
        self.workflow
    }

    pub fn config(&self) -> &EnvConfig {
        &self.config
    }

    pub fn current_task(&self) -> Option<&'a Task> {
        self.workflow.tasks.get(self.index)
    }

    pub fn task_index(&self) -> usize {
        self.index
    }

    pub fn is_done(&self) -> bool {
        self.index >= self.workflow.len()
    }

    pub fn elapsed_makespan_s(&self) -> f64 {
        self.elapsed_s
    }

    pub fn residual_memory_mb(&self) -> &[f64] {
        &self.residual_memory_mb
    }

    pub fn available_at_s(&self) -> &[f64] {
        &self.available_at_s
    }

    pub fn traffic_mb(&self) -> [f64; 2] {
        self.traffic_mb
    }

    pub fn trace(&self) -> &ScheduleTrace {
        &self.trace
    }

    pub fn into_trace(self) -> ScheduleTrace {
        self.trace
    }

    fn fits(&self, pos: usize, task: &Task) -> bool {
        task.memory_mb <= self.residual_memory_mb[pos]
    }

    /// Feasibility of each node of `layer`, in layer order. All false once
    /// the episode is over.
    pub fn layer_mask(&self, layer: Layer) -> Vec<bool> {
        let range = self.infra.layer_range(layer);
        match self.current_task() {
            Some(task) => range.map(|p| self.fits(p, task)).collect(),
            None => vec![false; range.len()],
        }
    }

    /// Nodes of `layer` whose residual memory admits the current task.
    pub fn feasible_nodes(&self, layer: Layer) -> Vec<NodeId> {
        let Some(task) = self.current_task() else { return Vec::new() };
        self.infra
            .layer_range(layer)
            .filter(|&p| self.fits(p, task))
            .map(|p| self.infra.nodes()[p].id)
            .collect()
    }

    /// Which layers contain at least one feasible node.
    pub fn layer_availability(&self) -> [bool; 3] {
        Layer::ALL.map(|l| self.layer_mask(l).iter().any(|&f| f))
    }

    pub fn step(&mut self, action: Action) -> Result<StepOutcome> {
        let task = self.current_task().ok_or(Error::EpisodeDone)?;
        let infeasible = Error::InfeasibleAction { task: task.id, layer: action.layer, node: action.node };
        let pos = self.infra.position(action.node).ok_or(infeasible.clone())?;
        let node = &self.infra.nodes()[pos];
        if node.layer != action.layer || !self.fits(pos, task) {
            return Err(infeasible);
        }

        let cost = cost_breakdown(task, node, self.infra);
        let cost_s = cost.total();
        self.available_at_s[pos] += cost_s;
        if self.config.memory_mode == MemoryMode::Persistent {
            self.residual_memory_mb[pos] -= task.memory_mb;
        }
        match node.layer {
            Layer::Edge => {}
            Layer::Fog => self.traffic_mb[0] += task.output_mb,
            Layer::Cloud => {
                self.traffic_mb[0] += task.output_mb;
                self.traffic_mb[1] += task.output_mb;
            }
        }
        self.elapsed_s += cost_s;
        self.trace.entries.push(TraceEntry { task_id: task.id, layer: node.layer, node: node.id, cost_s });
        self.index += 1;
        let done = self.is_done();
        Ok(StepOutcome {
            reward: reward(cost_s, cost.exec_s, done, &self.config.reward),
            cost_s,
            exec_s: cost.exec_s,
            done,
        })
    }

    fn task_features(&self) -> [f64; 3] {
        let n = &self.config.norm;
        match self.current_task() {
            Some(t) => [
                unit(t.workload_mi / n.workload_mi),
                unit(t.memory_mb / n.memory_mb),
                unit(t.output_mb / n.output_mb),
            ],
            None => [0.0; 3],
        }
    }

    fn load_scale(&self) -> f64 {
        self.config.reward.makespan_target_s * self.workflow.len().max(1) as f64
    }

    /// Layer-level summary: mean load ×3, free-memory fraction ×3, link
    /// traffic ×2, task features ×3, fraction of tasks remaining.
    pub fn global_state(&self) -> Vec<f64> {
        let mut s = Vec::with_capacity(GLOBAL_STATE_DIM);
        let scale = self.load_scale();
        for layer in Layer::ALL {
            let r = self.infra.layer_range(layer);
            let n = r.len() as f64;
            let load: f64 = self.available_at_s[r].iter().map(|a| a / scale).sum();
            s.push(unit(load / n));
        }
        for layer in Layer::ALL {
            let r = self.infra.layer_range(layer);
            let free: f64 = self.residual_memory_mb[r.clone()].iter().sum();
            let total: f64 = self.infra.nodes()[r].iter().map(|n| n.memory_mb).sum();
            s.push(unit(free / total));
        }
        let traffic_scale = self.config.norm.output_mb * self.workflow.len().max(1) as f64;
        for t in self.traffic_mb {
            s.push(unit(t / traffic_scale));
        }
        s.extend(self.task_features());
        let total = self.workflow.len().max(1) as f64;
        s.push(unit((self.workflow.len() - self.index.min(self.workflow.len())) as f64 / total));
        s
    }

    /// Node-level view of `layer`: per node free-memory fraction, normalized
    /// availability and relative capacity, then task features.
    pub fn local_state(&self, layer: Layer) -> Vec<f64> {
        let r = self.infra.layer_range(layer);
        let mut s = Vec::with_capacity(local_state_dim(r.len()));
        let scale = self.load_scale();
        let cmax = self.infra.max_capacity_mips();
        for p in r {
            let node = &self.infra.nodes()[p];
            s.push(unit(self.residual_memory_mb[p] / node.memory_mb));
            s.push(unit(self.available_at_s[p] / scale));
            s.push(unit(node.capacity_mips / cmax));
        }
        s.extend(self.task_features());
        s
    }
}

fn unit(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

/// What a replayed trace got wrong.
#[derive(Debug, Clone, PartialEq)]
pub enum TraceViolation {
    /// Entry count differs from the workflow length.
    WrongLength { expected: usize, actual: usize },
    /// Entry `position` names the wrong task.
    OutOfOrder { position: usize, task_id: usize },
    UnknownNode { task_id: usize, node: NodeId },
    /// The node's layer does not match the recorded layer.
    LayerMismatch { task_id: usize, node: NodeId },
    /// Memory constraint broken at assignment time.
    MemoryInfeasible { task_id: usize, node: NodeId },
    /// Recorded cost differs from the cost model.
    CostMismatch { task_id: usize, recorded: f64, expected: f64 },
}

/// Replays `trace` against a fresh memory ledger and checks that every task
/// is assigned exactly once, in order, to a node that could hold it.
pub fn validate_trace(
    trace: &ScheduleTrace,
    workflow: &Workflow,
    infra: &Infrastructure,
    mode: MemoryMode,
) -> core::result::Result<(), TraceViolation> {
    if trace.len() != workflow.len() {
        return Err(TraceViolation::WrongLength { expected: workflow.len(), actual: trace.len() });
    }
    let mut residual: Vec<f64> = infra.nodes().iter().map(|n| n.memory_mb).collect();
    for (i, (entry, task)) in trace.entries.iter().zip(&workflow.tasks).enumerate() {
        if entry.task_id != task.id {
            return Err(TraceViolation::OutOfOrder { position: i, task_id: entry.task_id });
        }
        let pos = infra
            .position(entry.node)
            .ok_or(TraceViolation::UnknownNode { task_id: task.id, node: entry.node })?;
        let node = &infra.nodes()[pos];
        if node.layer != entry.layer {
            return Err(TraceViolation::LayerMismatch { task_id: task.id, node: entry.node });
        }
        if task.memory_mb > residual[pos] {
            return Err(TraceViolation::MemoryInfeasible { task_id: task.id, node: entry.node });
        }
        if mode == MemoryMode::Persistent {
            residual[pos] -= task.memory_mb;
        }
        let expected = cost_breakdown(task, node, infra).total();
        if entry.cost_s != expected {
            return Err(TraceViolation::CostMismatch { task_id: task.id, recorded: entry.cost_s, expected });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Task;
    use proptest::prelude::*;

    fn wf(tasks: &[(f64, f64, f64)]) -> Workflow {
        let tasks = tasks
            .iter()
            .enumerate()
            .map(|(i, &(w, m, d))| Task::new(i + 1, w, m, d).unwrap())
            .collect();
        Workflow::new("t", tasks).unwrap()
    }

    #[test]
    fn reset_state() {
        let infra = Infrastructure::reference();
        let w = wf(&[(1000.0, 512.0, 5.0)]);
        let s = EnvState::reset(&w, &infra, EnvConfig::default());
        assert_eq!(s.elapsed_makespan_s(), 0.0);
        let cloud = infra.position(NodeId(8)).unwrap();
        assert_eq!(s.residual_memory_mb()[cloud], 32768.0);
        let g = s.global_state();
        assert_eq!(g.len(), GLOBAL_STATE_DIM);
        assert_eq!(&g[3..6], &[1.0, 1.0, 1.0]);
        assert_eq!(&g[0..3], &[0.0, 0.0, 0.0]);
        assert_eq!(g[11], 1.0);
    }

    #[test]
    fn feasibility_masks() {
        let infra = Infrastructure::reference();
        let w = wf(&[(1000.0, 512.0, 5.0)]);
        let s = EnvState::reset(&w, &infra, EnvConfig::default());
        assert_eq!(s.feasible_nodes(Layer::Edge), vec![NodeId(1), NodeId(2), NodeId(3), NodeId(4)]);

        let w = wf(&[(1000.0, 4096.0, 5.0)]);
        let s = EnvState::reset(&w, &infra, EnvConfig::default());
        assert!(s.feasible_nodes(Layer::Edge).is_empty());
        assert_eq!(s.feasible_nodes(Layer::Fog).len(), 3);
        assert_eq!(s.layer_availability(), [false, true, true]);

        // Inclusive boundary.
        let w = wf(&[(1000.0, 2048.0, 5.0)]);
        let s = EnvState::reset(&w, &infra, EnvConfig::default());
        assert_eq!(s.feasible_nodes(Layer::Edge).len(), 4);
    }

    #[test]
    fn step_to_fastest_fog() {
        let infra = Infrastructure::reference();
        let w = wf(&[(1000.0, 512.0, 5.0), (500.0, 100.0, 1.0)]);
        let mut s = EnvState::reset(&w, &infra, EnvConfig::default());
        let fog_before = s.global_state()[4];
        let out = s.step(Action { layer: Layer::Fog, node: NodeId(7) }).unwrap();
        assert!((out.cost_s - (0.010 + 0.2 + 1000.0 / 3000.0)).abs() < 1e-12);
        assert!(!out.done);
        let p = infra.position(NodeId(7)).unwrap();
        assert_eq!(s.residual_memory_mb()[p], 8192.0 - 512.0);
        assert_eq!(s.available_at_s()[p], out.cost_s);
        assert_eq!(s.traffic_mb(), [5.0, 0.0]);
        let fog_total = 6144.0 + 7168.0 + 8192.0;
        assert!((fog_before - s.global_state()[4] - 512.0 / fog_total).abs() < 1e-12);

        let last = s.step(Action { layer: Layer::Edge, node: NodeId(1) }).unwrap();
        assert!(last.done);
        let cfg = RewardConfig::default();
        assert!((last.reward - (cfg.cost_term(last.cost_s) + cfg.beta1 + cfg.beta2)).abs() < 1e-12);
        assert_eq!(s.step(Action { layer: Layer::Edge, node: NodeId(1) }), Err(Error::EpisodeDone));
        assert_eq!(makespan(s.trace(), &w).unwrap(), out.cost_s + last.cost_s);
    }

    #[test]
    fn step_rejects_infeasible_and_wrong_layer() {
        let infra = Infrastructure::reference();
        let w = wf(&[(1000.0, 1500.0, 5.0), (1000.0, 1500.0, 5.0)]);
        let mut s = EnvState::reset(&w, &infra, EnvConfig::default());
        assert!(s.step(Action { layer: Layer::Fog, node: NodeId(1) }).is_err());
        assert!(s.step(Action { layer: Layer::Edge, node: NodeId(99) }).is_err());
        s.step(Action { layer: Layer::Edge, node: NodeId(1) }).unwrap();
        // 548 MB left on node 1.
        assert!(matches!(
            s.step(Action { layer: Layer::Edge, node: NodeId(1) }),
            Err(Error::InfeasibleAction { task: 2, .. })
        ));
        assert_eq!(s.task_index(), 1);
    }

    #[test]
    fn transient_mode_holds_nothing() {
        let infra = Infrastructure::reference();
        let w = wf(&[(1000.0, 1500.0, 5.0), (1000.0, 1500.0, 5.0)]);
        let cfg = EnvConfig { memory_mode: MemoryMode::Transient, ..Default::default() };
        let mut s = EnvState::reset(&w, &infra, cfg);
        s.step(Action { layer: Layer::Edge, node: NodeId(1) }).unwrap();
        s.step(Action { layer: Layer::Edge, node: NodeId(1) }).unwrap();
        assert_eq!(s.residual_memory_mb()[0], 2048.0);
        assert!(validate_trace(s.trace(), &w, &infra, MemoryMode::Transient).is_ok());
        assert!(matches!(
            validate_trace(s.trace(), &w, &infra, MemoryMode::Persistent),
            Err(TraceViolation::MemoryInfeasible { task_id: 2, .. })
        ));
    }

    #[test]
    fn reward_examples() {
        let cfg = RewardConfig::default();
        assert!((reward(1.3, 1.3, false, &cfg) - (-0.88)).abs() < 1e-12);
        let expected = -0.98 * (0.5 / 1.3) + 0.5 + 0.1 * 0.5;
        assert!((reward(0.5, 0.25, true, &cfg) - expected).abs() < 1e-12);
        assert!((expected - 0.1731).abs() < 1e-4);
        assert!(reward(1.0, 0.5, false, &cfg) < reward(0.8, 0.5, false, &cfg));
        assert_eq!(reward(0.0, 0.0, false, &cfg), 0.1);
    }

    #[test]
    fn makespan_requires_complete_trace() {
        let w = wf(&[(1.0, 1.0, 1.0), (1.0, 1.0, 1.0)]);
        assert!(matches!(
            makespan(&ScheduleTrace::default(), &w),
            Err(Error::IncompleteTrace { assigned: 0, expected: 2 })
        ));
        let empty = Workflow::new("e", Vec::new()).unwrap();
        assert_eq!(makespan(&ScheduleTrace::default(), &empty).unwrap(), 0.0);
    }

    #[test]
    fn validate_trace_catches_tampering() {
        let infra = Infrastructure::reference();
        let w = wf(&[(1000.0, 100.0, 5.0), (1000.0, 100.0, 5.0)]);
        let mut s = EnvState::reset(&w, &infra, EnvConfig::default());
        s.step(Action { layer: Layer::Fog, node: NodeId(5) }).unwrap();
        s.step(Action { layer: Layer::Cloud, node: NodeId(8) }).unwrap();
        let trace = s.into_trace();
        assert!(validate_trace(&trace, &w, &infra, MemoryMode::Persistent).is_ok());

        let mut t = trace.clone();
        t.entries.pop();
        assert!(matches!(validate_trace(&t, &w, &infra, MemoryMode::Persistent), Err(TraceViolation::WrongLength { .. })));
        let mut t = trace.clone();
        t.entries.swap(0, 1);
        assert!(matches!(validate_trace(&t, &w, &infra, MemoryMode::Persistent), Err(TraceViolation::OutOfOrder { .. })));
        let mut t = trace.clone();
        t.entries[1].layer = Layer::Fog;
        assert!(matches!(validate_trace(&t, &w, &infra, MemoryMode::Persistent), Err(TraceViolation::LayerMismatch { .. })));
        let mut t = trace;
        t.entries[0].cost_s += 1e-9;
        assert!(matches!(validate_trace(&t, &w, &infra, MemoryMode::Persistent), Err(TraceViolation::CostMismatch { .. })));
    }

    fn arb_workflow() -> impl Strategy<Value = Workflow> {
        prop::collection::vec((200.0f64..4000.0, 128.0f64..2048.0, 1.0f64..50.0), 1..20).prop_map(|v| wf(&v))
    }

    proptest! {
        #[test]
        fn episode_invariants(w in arb_workflow(), choices in prop::collection::vec(0usize..64, 20)) {
            let infra = Infrastructure::reference();
            let cfg = EnvConfig::default();
            let mut s = EnvState::reset(&w, &infra, cfg);
            let mut step_costs = 0.0;
            let mut cost_terms = 0.0;
            let mut assigned = vec![0.0; infra.len()];
            let mut t = 0;
            while !s.is_done() {
                let feasible: Vec<NodeId> = Layer::ALL.iter().flat_map(|&l| s.feasible_nodes(l)).collect();
                prop_assert!(!feasible.is_empty());
                let node = feasible[choices[t] % feasible.len()];
                let layer = infra.node(node).unwrap().layer;
                let out = s.step(Action { layer, node }).unwrap();
                assigned[infra.position(node).unwrap()] += w.tasks[t].memory_mb;
                step_costs += out.cost_s;
                cost_terms += cfg.reward.cost_term(out.cost_s);
                t += 1;
                for v in s.global_state() { prop_assert!((0.0..=1.0).contains(&v)); }
                for l in Layer::ALL {
                    let ls = s.local_state(l);
                    prop_assert_eq!(ls.len(), local_state_dim(infra.layer_size(l)));
                    for v in ls { prop_assert!((0.0..=1.0).contains(&v)); }
                }
            }
            // Memory conservation.
            for (p, n) in infra.nodes().iter().enumerate() {
                prop_assert!(s.residual_memory_mb()[p] >= 0.0);
                prop_assert!((n.memory_mb - s.residual_memory_mb()[p] - assigned[p]).abs() < 1e-9);
            }
            let ms = makespan(s.trace(), &w).unwrap();
            prop_assert_eq!(ms, step_costs);
            prop_assert_eq!(ms, s.elapsed_makespan_s());
            let from_rewards = -cost_terms * cfg.reward.makespan_target_s / cfg.reward.makespan_weight;
            prop_assert!((from_rewards - ms).abs() < 1e-9);
            prop_assert_eq!(s.trace().len(), w.len());
            for (i, e) in s.trace().entries.iter().enumerate() { prop_assert_eq!(e.task_id, i + 1); }
            prop_assert!(validate_trace(s.trace(), &w, &infra, MemoryMode::Persistent).is_ok());
        }
    }
}

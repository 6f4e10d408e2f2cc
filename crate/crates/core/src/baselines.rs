//! Comparison schedulers and an exact solver for small instances.

use alloc::vec;
use alloc::vec::Vec;

use crate::model::{task_cost, Infrastructure, Layer, NodeId, Workflow};
use crate::rng::SplitMix64;
use crate::sim::{Action, EnvConfig, EnvState, MemoryMode, ScheduleTrace, TraceEntry};
use crate::{Error, Result};

/// A scheduling policy queried once per task.
pub trait Policy {
    fn name(&self) -> &str;

    /// Called before the first task of every workflow.
    fn begin_episode(&mut self) {}

    fn select(&mut self, state: &EnvState<'_>) -> Result<Action>;
}

fn action_at(state: &EnvState<'_>, pos: usize) -> Action {
    let node = &state.infra().nodes()[pos];
    Action { layer: node.layer, node: node.id }
}

fn no_feasible(state: &EnvState<'_>) -> Error {
    Error::SchedulingFailure { task: state.current_task().map_or(0, |t| t.id) }
}

fn feasible_positions(state: &EnvState<'_>) -> Vec<usize> {
    let mut out = Vec::new();
    for layer in Layer::ALL {
        let range = state.infra().layer_range(layer);
        for (p, ok) in range.zip(state.layer_mask(layer)) {
            if ok {
                out.push(p);
            }
        }
    }
    out
}

/// Uniform choice over every feasible node of every layer.
pub fn random_select(state: &EnvState<'_>, rng: &mut SplitMix64) -> Result<Action> {
    let feasible = feasible_positions(state);
    if feasible.is_empty() {
        return Err(no_feasible(state));
    }
    let k = rng.below(feasible.len() as u64) as usize;
    Ok(action_at(state, feasible[k]))
}

/// Round robin over all nodes (edge, fog, cloud; ascending id within a
/// layer), skipping nodes that cannot hold the task. `cursor` is the
/// position to try first and is left just past the chosen node.
pub fn fcfs_select(state: &EnvState<'_>, cursor: &mut usize) -> Result<Action> {
    let task = state.current_task().ok_or(Error::EpisodeDone)?;
    let n = state.infra().len();
    for k in 0..n {
        let p = (*cursor + k) % n;
        if task.memory_mb <= state.residual_memory_mb()[p] {
            *cursor = (p + 1) % n;
            return Ok(action_at(state, p));
        }
    }
    Err(no_feasible(state))
}

/// Cheapest feasible node for the current task; ties go to the lowest id.
pub fn greedy_select(state: &EnvState<'_>) -> Result<Action> {
    let task = state.current_task().ok_or(Error::EpisodeDone)?;
    let infra = state.infra();
    let mut best: Option<(f64, NodeId, usize)> = None;
    for p in feasible_positions(state) {
        let node = &infra.nodes()[p];
        let c = task_cost(task, node, infra);
        let better = match best {
            None => true,
            Some((bc, bid, _)) => c < bc || (c == bc && node.id < bid),
        };
        if better {
            best = Some((c, node.id, p));
        }
    }
    best.map(|(_, _, p)| action_at(state, p)).ok_or_else(|| no_feasible(state))
}

#[derive(Debug, Clone)]
pub struct RandomPolicy {
    rng: SplitMix64,
}

impl RandomPolicy {
    pub fn new(seed: u64) -> Self {
        Self { rng: SplitMix64::new(seed) }
    }
}

impl Policy for RandomPolicy {
    fn name(&self) -> &str {
        "random"
    }

    fn select(&mut self, state: &EnvState<'_>) -> Result<Action> {
        random_select(state, &mut self.rng)
    }
}

#[derive(Debug, Clone, Default)]
pub struct FcfsPolicy {
    cursor: usize,
}

impl Policy for FcfsPolicy {
    fn name(&self) -> &str {
        "fcfs"
    }

    fn begin_episode(&mut self) {
        self.cursor = 0;
    }

    fn select(&mut self, state: &EnvState<'_>) -> Result<Action> {
        fcfs_select(state, &mut self.cursor)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct GreedyPolicy;

impl Policy for GreedyPolicy {
    fn name(&self) -> &str {
        "greedy"
    }

    fn select(&mut self, state: &EnvState<'_>) -> Result<Action> {
        greedy_select(state)
    }
}

/// Result of driving one workflow through the environment.
#[derive(Debug, Clone, PartialEq)]
pub struct Rollout {
    pub trace: ScheduleTrace,
    pub makespan_s: f64,
    pub reward_sum: f64,
}

pub fn run_episode<P: Policy + ?Sized>(
    policy: &mut P,
    workflow: &Workflow,
    infra: &Infrastructure,
    config: EnvConfig,
) -> Result<Rollout> {
    policy.begin_episode();
    let mut state = EnvState::reset(workflow, infra, config);
    let mut reward_sum = 0.0;
    while !state.is_done() {
        let action = policy.select(&state)?;
        reward_sum += state.step(action)?.reward;
    }
    let makespan_s = state.elapsed_makespan_s();
    Ok(Rollout { trace: state.into_trace(), makespan_s, reward_sum })
}

/// HEFT upward ranks for a chain: mean execution time over all nodes, plus
/// the mean transfer cost over the three placement paths, plus the rank of
/// the successor.
pub fn upward_ranks(workflow: &Workflow, infra: &Infrastructure) -> Vec<f64> {
    let n_nodes = infra.len() as f64;
    let mut ranks = vec![0.0; workflow.len()];
    let mut next = 0.0;
    for (i, task) in workflow.tasks.iter().enumerate().rev() {
        let mean_exec = infra.nodes().iter().map(|n| task.workload_mi / n.capacity_mips).sum::<f64>() / n_nodes;
        let mean_comm = Layer::ALL
            .iter()
            .map(|&l| crate::model::path_comm_time(l, task.output_mb, infra))
            .sum::<f64>()
            / 3.0;
        ranks[i] = mean_exec + mean_comm + next;
        next = ranks[i];
    }
    ranks
}

/// Offline HEFT: tasks in decreasing upward rank, each on the feasible node
/// with the earliest finish time. Start times respect both the node's busy
/// horizon and the predecessor's finish.
pub fn heft_schedule(workflow: &Workflow, infra: &Infrastructure, mode: MemoryMode) -> Result<ScheduleTrace> {
    let ranks = upward_ranks(workflow, infra);
    let mut order: Vec<usize> = (0..workflow.len()).collect();
    order.sort_by(|&a, &b| ranks[b].total_cmp(&ranks[a]).then(a.cmp(&b)));
    // A chain's ranks strictly decrease along it, so this is chain order.
    debug_assert!(order.windows(2).all(|w| w[0] < w[1]));

    let mut residual: Vec<f64> = infra.nodes().iter().map(|n| n.memory_mb).collect();
    let mut node_free = vec![0.0f64; infra.len()];
    let mut finish = vec![0.0f64; workflow.len()];
    let mut entries: Vec<Option<TraceEntry>> = vec![None; workflow.len()];
    for &i in &order {
        let task = &workflow.tasks[i];
        let ready = if i == 0 { 0.0 } else { finish[i - 1] };
        let mut best: Option<(f64, NodeId, usize, f64)> = None;
        for (p, node) in infra.nodes().iter().enumerate() {
            if task.memory_mb > residual[p] {
                continue;
            }
            let cost = task_cost(task, node, infra);
            let eft = ready.max(node_free[p]) + cost;
            let better = match best {
                None => true,
                Some((be, bid, _, _)) => eft < be || (eft == be && node.id < bid),
            };
            if better {
                best = Some((eft, node.id, p, cost));
            }
        }
        let (eft, _, p, cost) = best.ok_or(Error::SchedulingFailure { task: task.id })?;
        if mode == MemoryMode::Persistent {
            residual[p] -= task.memory_mb;
        }
        node_free[p] = eft;
        finish[i] = eft;
        let node = &infra.nodes()[p];
        entries[i] = Some(TraceEntry { task_id: task.id, layer: node.layer, node: node.id, cost_s: cost });
    }
    Ok(ScheduleTrace { entries: entries.into_iter().map(|e| e.expect("every task placed")).collect() })
}

/// Largest workflow [`oracle_optimal`] accepts.
pub const MAX_ORACLE_TASKS: usize = 9;

struct Search<'a> {
    costs: Vec<Vec<f64>>,
    /// Per task, candidate node positions by ascending cost then id.
    candidates: Vec<Vec<usize>>,
    /// `suffix_bound[t]`: sum over tasks `t..` of their cheapest statically
    /// feasible cost.
    suffix_bound: Vec<f64>,
    memory: Vec<f64>,
    mode: MemoryMode,
    residual: Vec<f64>,
    current: Vec<usize>,
    best: Option<(f64, Vec<usize>)>,
    infra: &'a Infrastructure,
}

impl Search<'_> {
    fn dfs(&mut self, t: usize, partial: f64) {
        if t == self.costs.len() {
            if self.best.as_ref().is_none_or(|(b, _)| partial < *b) {
                self.best = Some((partial, self.current.clone()));
            }
            return;
        }
        if let Some((b, _)) = &self.best {
            if partial + self.suffix_bound[t] >= *b {
                return;
            }
        }
        for k in 0..self.candidates[t].len() {
            let p = self.candidates[t][k];
            let m = self.memory[t];
            if m > self.residual[p] {
                continue;
            }
            if self.mode == MemoryMode::Persistent {
                self.residual[p] -= m;
            }
            self.current.push(p);
            self.dfs(t + 1, partial + self.costs[t][p]);
            self.current.pop();
            if self.mode == MemoryMode::Persistent {
                self.residual[p] += m;
            }
        }
    }
}

/// Exact minimum-makespan assignment by depth-first branch and bound.
///
/// The bound adds, for every unassigned task, its cheapest cost over nodes
/// whose full capacity could hold it; this never exceeds the true remaining
/// cost, so the search is exact.
pub fn oracle_optimal(workflow: &Workflow, infra: &Infrastructure, mode: MemoryMode) -> Result<(ScheduleTrace, f64)> {
    if workflow.len() > MAX_ORACLE_TASKS {
        return Err(Error::InstanceTooLarge { tasks: workflow.len(), limit: MAX_ORACLE_TASKS });
    }
    let nodes = infra.nodes();
    let costs: Vec<Vec<f64>> =
        workflow.tasks.iter().map(|t| nodes.iter().map(|n| task_cost(t, n, infra)).collect()).collect();
    let mut candidates = Vec::with_capacity(workflow.len());
    let mut cheapest = Vec::with_capacity(workflow.len());
    for (t, task) in workflow.tasks.iter().enumerate() {
        let mut c: Vec<usize> = (0..nodes.len()).filter(|&p| task.memory_mb <= nodes[p].memory_mb).collect();
        if c.is_empty() {
            return Err(Error::SchedulingFailure { task: task.id });
        }
        c.sort_by(|&a, &b| costs[t][a].total_cmp(&costs[t][b]).then(nodes[a].id.cmp(&nodes[b].id)));
        cheapest.push(costs[t][c[0]]);
        candidates.push(c);
    }
    let mut suffix_bound = vec![0.0; workflow.len() + 1];
    for t in (0..workflow.len()).rev() {
        suffix_bound[t] = suffix_bound[t + 1] + cheapest[t];
    }
    let mut search = Search {
        costs,
        candidates,
        suffix_bound,
        memory: workflow.tasks.iter().map(|t| t.memory_mb).collect(),
        mode,
        residual: nodes.iter().map(|n| n.memory_mb).collect(),
        current: Vec::with_capacity(workflow.len()),
        best: None,
        infra,
    };
    search.dfs(0, 0.0);
    let Some((_, assignment)) = search.best else {
        return Err(Error::SchedulingFailure { task: workflow.tasks.first().map_or(0, |t| t.id) });
    };
    let entries: Vec<TraceEntry> = assignment
        .iter()
        .enumerate()
        .map(|(t, &p)| {
            let node = &search.infra.nodes()[p];
            TraceEntry { task_id: t + 1, layer: node.layer, node: node.id, cost_s: search.costs[t][p] }
        })
        .collect();
    let trace = ScheduleTrace { entries };
    let total = trace.total_cost();
    Ok((trace, total))
}

//! Two-tier DDPG scheduler.
//!
//! A global controller picks the layer for the current task; the local
//! controller of that layer picks the node. Each controller is an
//! actor/critic pair with target copies. Actors emit a softmax over their
//! discrete choices; exploration adds Gaussian noise to those scores before
//! a masked argmax. Critics score `state ⊕ one_hot(choice)` and, for the
//! policy gradient, `state ⊕ actor_output`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::baselines::Policy;
use crate::model::{Infrastructure, Layer, Workflow};
use crate::nn::{clip_global_norm, polyak_update, Adam, Head, Mlp};
use crate::rng::SplitMix64;
use crate::sim::{local_state_dim, Action, EnvConfig, EnvState, GLOBAL_STATE_DIM};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseConfig {
    pub initial_std: f64,
    /// Multiplier applied after every episode.
    pub decay: f64,
    pub floor: f64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self { initial_std: 0.3, decay: 0.995, floor: 0.01 }
    }
}

/// Annealed Gaussian exploration for one controller.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseProcess {
    std: f64,
    decay: f64,
    floor: f64,
}

impl NoiseProcess {
    pub fn new(cfg: NoiseConfig) -> Self {
        Self { std: cfg.initial_std.max(cfg.floor), decay: cfg.decay, floor: cfg.floor }
    }

    pub fn std(&self) -> f64 {
        self.std
    }

    pub fn decay_episode(&mut self) {
        self.std = (self.std * self.decay).max(self.floor);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hyperparams {
    pub gamma: f64,
    pub tau: f64,
    pub batch_size: usize,
    pub buffer_capacity: usize,
    pub learning_rate: f64,
    pub clip_norm: f64,
    pub episodes: usize,
    pub hidden: [usize; 2],
    pub noise: NoiseConfig,
    pub env: EnvConfig,
}

impl Default for Hyperparams {
    fn default() -> Self {
        Self {
            gamma: 0.99,
            tau: 0.005,
            batch_size: 256,
            buffer_capacity: 100_000,
            learning_rate: 1.7e-4,
            clip_norm: 0.8,
            episodes: 700,
            hidden: [128, 128],
            noise: NoiseConfig::default(),
            env: EnvConfig::default(),
        }
    }
}

impl Hyperparams {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.into()));
        if !(0.0..=1.0).contains(&self.gamma) {
            return bad("gamma must be in [0, 1]");
        }
        if !(self.tau > 0.0 && self.tau <= 1.0) {
            return bad("tau must be in (0, 1]");
        }
        if self.batch_size == 0 || self.buffer_capacity < self.batch_size {
            return bad("batch_size must be positive and no larger than buffer_capacity");
        }
        if !(self.learning_rate > 0.0 && self.clip_norm > 0.0) {
            return bad("learning_rate and clip_norm must be positive");
        }
        if self.hidden.contains(&0) {
            return bad("hidden sizes must be positive");
        }
        if !(self.noise.initial_std >= 0.0 && self.noise.floor >= 0.0 && self.noise.decay > 0.0 && self.noise.decay <= 1.0)
        {
            return bad("noise: std and floor must be >= 0, decay in (0, 1]");
        }
        self.env.reward.validate()
    }
}

/// Actor/critic pair with target copies and their optimizers.
#[derive(Debug, Clone)]
pub struct Controller {
    pub actor: Mlp,
    pub critic: Mlp,
    pub actor_target: Mlp,
    pub critic_target: Mlp,
    actor_opt: Adam,
    critic_opt: Adam,
}

impl Controller {
    pub fn new(state_dim: usize, action_dim: usize, hidden: [usize; 2], lr: f64, rng: &mut SplitMix64) -> Self {
        let actor = Mlp::new(&[state_dim, hidden[0], hidden[1], action_dim], Head::Softmax, rng);
        let critic = Mlp::new(&[state_dim + action_dim, hidden[0], hidden[1], 1], Head::Identity, rng);
        Self::from_networks(actor.clone(), critic.clone(), actor, critic, lr)
    }

    pub fn from_networks(actor: Mlp, critic: Mlp, actor_target: Mlp, critic_target: Mlp, lr: f64) -> Self {
        let actor_opt = Adam::new(actor.num_params(), lr);
        let critic_opt = Adam::new(critic.num_params(), lr);
        Self { actor, critic, actor_target, critic_target, actor_opt, critic_opt }
    }

    pub fn state_dim(&self) -> usize {
        self.actor.input_dim()
    }

    pub fn action_dim(&self) -> usize {
        self.actor.output_dim()
    }

    fn validate(&self, name: &str, state_dim: usize, action_dim: usize) -> Result<()> {
        let shape_err = |what: &str, net: &Mlp| {
            Err(Error::ShapeMismatch(format!(
                "{name}.{what}: sizes {:?} do not fit state dim {state_dim} and action dim {action_dim}",
                net.sizes()
            )))
        };
        if self.actor.input_dim() != state_dim || self.actor.output_dim() != action_dim || self.actor.head() != Head::Softmax
        {
            return shape_err("actor", &self.actor);
        }
        if self.critic.input_dim() != state_dim + action_dim
            || self.critic.output_dim() != 1
            || self.critic.head() != Head::Identity
        {
            return shape_err("critic", &self.critic);
        }
        if !self.actor_target.same_shape(&self.actor) {
            return shape_err("actor_target", &self.actor_target);
        }
        if !self.critic_target.same_shape(&self.critic) {
            return shape_err("critic_target", &self.critic_target);
        }
        Ok(())
    }

    fn soft_update(&mut self, tau: f64) -> Result<()> {
        polyak_update(&mut self.actor_target, &self.actor, tau)?;
        polyak_update(&mut self.critic_target, &self.critic, tau)
    }
}

/// The global controller plus one local controller per layer.
#[derive(Debug, Clone)]
pub struct PolicyBundle {
    pub global: Controller,
    pub local: [Controller; 3],
}

pub const CONTROLLER_NAMES: [&str; 4] = ["global", "edge", "fog", "cloud"];

impl PolicyBundle {
    /// Fresh networks for `infra`, initialized from `seed`.
    pub fn new(infra: &Infrastructure, hp: &Hyperparams, seed: u64) -> Self {
        let mut rng = SplitMix64::derive(seed, 0x1417);
        let global = Controller::new(GLOBAL_STATE_DIM, 3, hp.hidden, hp.learning_rate, &mut rng);
        let local = Layer::ALL.map(|l| {
            let n = infra.layer_size(l);
            Controller::new(local_state_dim(n), n, hp.hidden, hp.learning_rate, &mut rng)
        });
        Self { global, local }
    }

    pub fn local(&self, layer: Layer) -> &Controller {
        &self.local[layer.index()]
    }

    pub fn controllers(&self) -> [&Controller; 4] {
        [&self.global, &self.local[0], &self.local[1], &self.local[2]]
    }

    /// Checks every network against the state and action sizes `infra` implies.
    pub fn check_compatible(&self, infra: &Infrastructure) -> Result<()> {
        self.global.validate("global", GLOBAL_STATE_DIM, 3)?;
        for l in Layer::ALL {
            let n = infra.layer_size(l);
            self.local[l.index()].validate(l.as_str(), local_state_dim(n), n)?;
        }
        Ok(())
    }

    fn soft_update(&mut self, tau: f64) -> Result<()> {
        self.global.soft_update(tau)?;
        for c in &mut self.local {
            c.soft_update(tau)?;
        }
        Ok(())
    }
}

/// Index of the largest unmasked score; ties go to the lowest index.
pub fn masked_argmax(scores: &[f64], mask: &[bool]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, (&s, &ok)) in scores.iter().zip(mask).enumerate() {
        if ok && best.is_none_or(|b| s > scores[b]) {
            best = Some(i);
        }
    }
    best
}

fn noisy(scores: &[f64], std: f64, rng: &mut SplitMix64) -> Vec<f64> {
    if std == 0.0 {
        return scores.to_vec();
    }
    scores.iter().map(|&s| s + std * rng.gaussian()).collect()
}

/// Noisy masked argmax over the global actor's layer scores. Returns the
/// layer and the un-noised actor output.
pub fn select_layer(
    bundle: &PolicyBundle,
    global_state: &[f64],
    layer_mask: [bool; 3],
    noise_std: f64,
    rng: &mut SplitMix64,
) -> Result<(Layer, Vec<f64>)> {
    let scores = bundle.global.actor.forward(global_state)?;
    let perturbed = noisy(&scores, noise_std, rng);
    let i = masked_argmax(&perturbed, &layer_mask).ok_or(Error::SchedulingFailure { task: 0 })?;
    Ok((Layer::ALL[i], scores))
}

/// Noisy masked argmax over the layer's local actor. Returns the node's
/// position within the layer and the un-noised actor output.
pub fn select_node(
    bundle: &PolicyBundle,
    layer: Layer,
    local_state: &[f64],
    mask: &[bool],
    noise_std: f64,
    rng: &mut SplitMix64,
) -> Result<(usize, Vec<f64>)> {
    let scores = bundle.local(layer).actor.forward(local_state)?;
    if mask.len() != scores.len() {
        return Err(Error::DimensionMismatch { expected: scores.len(), actual: mask.len() });
    }
    let perturbed = noisy(&scores, noise_std, rng);
    let i = masked_argmax(&perturbed, mask).ok_or(Error::SchedulingFailure { task: 0 })?;
    Ok((i, scores))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub global: Vec<f64>,
    pub local: [Vec<f64>; 3],
    pub layer: Layer,
    /// Node position within `layer`.
    pub node: usize,
    /// Actor outputs before noise.
    pub action_global: Vec<f64>,
    pub action_local: Vec<f64>,
    pub reward: f64,
    pub next_global: Vec<f64>,
    pub next_local: [Vec<f64>; 3],
    pub done: bool,
    /// Per layer, which nodes could hold the next task.
    pub next_masks: [Vec<bool>; 3],
}

/// Fixed-capacity FIFO replay memory.
#[derive(Debug, Clone)]
pub struct ReplayBuffer {
    capacity: usize,
    items: Vec<Transition>,
    next: usize,
}

impl ReplayBuffer {
    pub fn new(capacity: usize) -> Self {
        assert!(capacity > 0);
        Self { capacity, items: Vec::new(), next: 0 }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Appends, overwriting the oldest entry once full.
    pub fn push(&mut self, t: Transition) {
        if self.items.len() < self.capacity {
            self.items.push(t);
        } else {
            self.items[self.next] = t;
        }
        self.next = (self.next + 1) % self.capacity;
    }

    pub fn get(&self, i: usize) -> Option<&Transition> {
        self.items.get(i)
    }

    /// `n` indices drawn uniformly with replacement.
    pub fn sample_indices(&self, n: usize, rng: &mut SplitMix64) -> Vec<usize> {
        (0..n).map(|_| rng.below(self.items.len() as u64) as usize).collect()
    }

    pub fn sample(&self, n: usize, rng: &mut SplitMix64) -> Vec<&Transition> {
        self.sample_indices(n, rng).into_iter().map(|i| &self.items[i]).collect()
    }
}

fn one_hot(n: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[i] = 1.0;
    v
}

fn concat(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut v = Vec::with_capacity(a.len() + b.len());
    v.extend_from_slice(a);
    v.extend_from_slice(b);
    v
}

#[derive(Debug, Clone, PartialEq)]
pub struct TdTargets {
    pub global: Vec<f64>,
    pub local: Vec<f64>,
}

/// One-step targets. The target global actor proposes the next layer
/// (restricted to layers with a feasible node), the target local actor of
/// that layer proposes the next node within the stored mask, and the
/// matching target critics bootstrap. Terminal transitions use `r` alone.
pub fn build_td_targets(bundle: &PolicyBundle, batch: &[&Transition], gamma: f64) -> Result<TdTargets> {
    let mut global = Vec::with_capacity(batch.len());
    let mut local = Vec::with_capacity(batch.len());
    for t in batch {
        let layer_mask = t.next_masks.each_ref().map(|m| m.iter().any(|&f| f));
        if t.done || gamma == 0.0 {
            global.push(t.reward);
            local.push(t.reward);
            continue;
        }
        let layer_scores = bundle.global.actor_target.forward(&t.next_global)?;
        let Some(li) = masked_argmax(&layer_scores, &layer_mask) else {
            global.push(t.reward);
            local.push(t.reward);
            continue;
        };
        let ctrl = &bundle.local[li];
        let node_scores = ctrl.actor_target.forward(&t.next_local[li])?;
        let ni = masked_argmax(&node_scores, &t.next_masks[li]).expect("layer mask implies a feasible node");
        let qg = bundle.global.critic_target.forward(&concat(&t.next_global, &one_hot(3, li)))?[0];
        let ql = ctrl.critic_target.forward(&concat(&t.next_local[li], &one_hot(ctrl.action_dim(), ni)))?[0];
        global.push(t.reward + gamma * qg);
        local.push(t.reward + gamma * ql);
    }
    Ok(TdTargets { global, local })
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CriticLosses {
    pub global: f64,
    pub local: [f64; 3],
}

fn apply(opt: &mut Adam, net: &mut Mlp, grads: &mut [f64], clip: f64, what: &'static str) -> Result<f64> {
    if grads.iter().any(|g| !g.is_finite()) {
        return Err(Error::NonFinite(what));
    }
    let norm = clip_global_norm(grads, clip);
    opt.step(net, grads)?;
    Ok(norm)
}

/// Mean-squared TD error for the global critic over the whole batch and for
/// each local critic over the elements that chose its layer (still divided
/// by the batch size). A local critic with no elements is left untouched.
pub fn update_critics(
    bundle: &mut PolicyBundle,
    batch: &[&Transition],
    targets: &TdTargets,
    clip: f64,
) -> Result<CriticLosses> {
    let b = batch.len() as f64;
    let mut losses = CriticLosses::default();

    let critic = &bundle.global.critic;
    let mut grads = vec![0.0; critic.num_params()];
    for (t, &y) in batch.iter().zip(&targets.global) {
        let cache = critic.forward_cached(&concat(&t.global, &one_hot(3, t.layer.index())))?;
        let err = cache.output()[0] - y;
        losses.global += err * err / b;
        critic.backward_into(&cache, &[2.0 * err / b], &mut grads)?;
    }
    if !losses.global.is_finite() {
        return Err(Error::NonFinite("global critic loss"));
    }
    let g = &mut bundle.global;
    apply(&mut g.critic_opt, &mut g.critic, &mut grads, clip, "global critic gradient")?;

    for l in Layer::ALL {
        let ctrl = &mut bundle.local[l.index()];
        let mut grads = vec![0.0; ctrl.critic.num_params()];
        let mut count = 0;
        let mut loss = 0.0;
        for (t, &y) in batch.iter().zip(&targets.local) {
            if t.layer != l {
                continue;
            }
            count += 1;
            let x = concat(&t.local[l.index()], &one_hot(ctrl.action_dim(), t.node));
            let cache = ctrl.critic.forward_cached(&x)?;
            let err = cache.output()[0] - y;
            loss += err * err / b;
            ctrl.critic.backward_into(&cache, &[2.0 * err / b], &mut grads)?;
        }
        if count == 0 {
            continue;
        }
        if !loss.is_finite() {
            return Err(Error::NonFinite("local critic loss"));
        }
        apply(&mut ctrl.critic_opt, &mut ctrl.critic, &mut grads, clip, "local critic gradient")?;
        losses.local[l.index()] = loss;
    }
    Ok(losses)
}

/// Deterministic policy gradient of the mean Q under the actor, for the
/// states in `states`, divided by `batch`. Returns the ascent direction's
/// negation (a loss gradient) in parameter space.
fn policy_gradient(ctrl: &Controller, states: &[&[f64]], batch: f64) -> Result<Vec<f64>> {
    let mut grads = vec![0.0; ctrl.actor.num_params()];
    let sd = ctrl.state_dim();
    for s in states {
        let a_cache = ctrl.actor.forward_cached(s)?;
        let q_cache = ctrl.critic.forward_cached(&concat(s, a_cache.output()))?;
        let dq = ctrl.critic.input_gradient(&q_cache, &[1.0])?;
        let upstream: Vec<f64> = dq[sd..].iter().map(|g| -g / batch).collect();
        ctrl.actor.backward_into(&a_cache, &upstream, &mut grads)?;
    }
    Ok(grads)
}

/// Gradient of `-(1/B) Σ Q(s, μ(s))` with respect to the global actor.
pub fn global_actor_gradient(bundle: &PolicyBundle, batch: &[&Transition]) -> Result<Vec<f64>> {
    let states: Vec<&[f64]> = batch.iter().map(|t| t.global.as_slice()).collect();
    policy_gradient(&bundle.global, &states, batch.len() as f64)
}

/// Same for the local actor of `layer`, over the elements that chose it.
pub fn local_actor_gradient(bundle: &PolicyBundle, layer: Layer, batch: &[&Transition]) -> Result<Vec<f64>> {
    let states: Vec<&[f64]> =
        batch.iter().filter(|t| t.layer == layer).map(|t| t.local[layer.index()].as_slice()).collect();
    policy_gradient(bundle.local(layer), &states, batch.len() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ActorStats {
    /// Gradient norms before clipping.
    pub global_grad_norm: f64,
    pub local_grad_norm: [f64; 3],
}

/// One ascent step of every actor on its critic's Q. Local actors only step
/// when the batch contains their layer.
pub fn update_actors(bundle: &mut PolicyBundle, batch: &[&Transition], clip: f64) -> Result<ActorStats> {
    let mut stats = ActorStats::default();
    let mut grads = global_actor_gradient(bundle, batch)?;
    let g = &mut bundle.global;
    stats.global_grad_norm = apply(&mut g.actor_opt, &mut g.actor, &mut grads, clip, "global actor gradient")?;
    for l in Layer::ALL {
        if !batch.iter().any(|t| t.layer == l) {
            continue;
        }
        let mut grads = local_actor_gradient(bundle, l, batch)?;
        let c = &mut bundle.local[l.index()];
        stats.local_grad_norm[l.index()] = apply(&mut c.actor_opt, &mut c.actor, &mut grads, clip, "local actor gradient")?;
    }
    Ok(stats)
}

/// One full update: targets, critics, actors, then Polyak averaging of
/// every target network.
pub fn gradient_step(bundle: &mut PolicyBundle, batch: &[&Transition], hp: &Hyperparams) -> Result<CriticLosses> {
    let targets = build_td_targets(bundle, batch, hp.gamma)?;
    let losses = update_critics(bundle, batch, &targets, hp.clip_norm)?;
    update_actors(bundle, batch, hp.clip_norm)?;
    bundle.soft_update(hp.tau)?;
    Ok(losses)
}

/// Per-episode training record.
#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeLog {
    pub episode: usize,
    pub reward_sum: f64,
    pub makespan_s: f64,
    pub noise_std: f64,
    /// Mean critic losses over the episode's gradient steps (0 without any).
    pub critic_loss_global: f64,
    pub critic_loss_local: [f64; 3],
    /// Gradient steps taken during the episode.
    pub actor_steps: usize,
    pub tasks: usize,
    /// The episode ended early because no node could hold a task.
    pub failed: bool,
}

/// Replay memory, exploration state and the update schedule around a bundle.
#[derive(Debug, Clone)]
pub struct Trainer {
    pub bundle: PolicyBundle,
    pub hp: Hyperparams,
    buffer: ReplayBuffer,
    global_noise: NoiseProcess,
    local_noise: [NoiseProcess; 3],
    rng: SplitMix64,
    episode: usize,
}

impl Trainer {
    pub fn new(bundle: PolicyBundle, hp: Hyperparams, seed: u64) -> Result<Self> {
        hp.validate()?;
        Ok(Self {
            buffer: ReplayBuffer::new(hp.buffer_capacity),
            global_noise: NoiseProcess::new(hp.noise),
            local_noise: [(); 3].map(|_| NoiseProcess::new(hp.noise)),
            rng: SplitMix64::derive(seed, 0x7EA1),
            episode: 0,
            bundle,
            hp,
        })
    }

    pub fn buffer(&self) -> &ReplayBuffer {
        &self.buffer
    }

    pub fn noise_std(&self) -> f64 {
        self.global_noise.std()
    }

    /// Plays one workflow with exploration, storing every transition and
    /// taking one gradient step per environment step once the buffer holds
    /// a full batch.
    pub fn run_episode(&mut self, workflow: &Workflow, infra: &Infrastructure) -> Result<EpisodeLog> {
        let mut state = EnvState::reset(workflow, infra, self.hp.env);
        let mut log = EpisodeLog {
            episode: self.episode,
            reward_sum: 0.0,
            makespan_s: 0.0,
            noise_std: self.global_noise.std(),
            critic_loss_global: 0.0,
            critic_loss_local: [0.0; 3],
            actor_steps: 0,
            tasks: workflow.len(),
            failed: false,
        };
        let mut global = state.global_state();
        let mut local = Layer::ALL.map(|l| state.local_state(l));
        while !state.is_done() {
            let availability = state.layer_availability();
            if !availability.iter().any(|&a| a) {
                log.failed = true;
                break;
            }
            let (layer, action_global) =
                select_layer(&self.bundle, &global, availability, self.global_noise.std(), &mut self.rng)?;
            let mask = state.layer_mask(layer);
            let (node, action_local) = select_node(
                &self.bundle,
                layer,
                &local[layer.index()],
                &mask,
                self.local_noise[layer.index()].std(),
                &mut self.rng,
            )?;
            let id = infra.layer_nodes(layer)[node].id;
            let out = state.step(Action { layer, node: id })?;
            log.reward_sum += out.reward;

            let next_global = state.global_state();
            let next_local = Layer::ALL.map(|l| state.local_state(l));
            let next_masks = Layer::ALL.map(|l| state.layer_mask(l));
            self.buffer.push(Transition {
                global: core::mem::replace(&mut global, next_global.clone()),
                local: core::mem::replace(&mut local, next_local.clone()),
                layer,
                node,
                action_global,
                action_local,
                reward: out.reward,
                next_global,
                next_local,
                done: out.done,
                next_masks,
            });

            if self.buffer.len() >= self.hp.batch_size {
                let idx = self.buffer.sample_indices(self.hp.batch_size, &mut self.rng);
                let batch: Vec<&Transition> = idx.iter().map(|&i| &self.buffer.items[i]).collect();
                let losses = gradient_step(&mut self.bundle, &batch, &self.hp)?;
                log.critic_loss_global += losses.global;
                for i in 0..3 {
                    log.critic_loss_local[i] += losses.local[i];
                }
                log.actor_steps += 1;
            }
        }
        if log.actor_steps > 0 {
            let n = log.actor_steps as f64;
            log.critic_loss_global /= n;
            for l in &mut log.critic_loss_local {
                *l /= n;
            }
        }
        log.makespan_s = state.elapsed_makespan_s();
        self.global_noise.decay_episode();
        for n in &mut self.local_noise {
            n.decay_episode();
        }
        self.episode += 1;
        Ok(log)
    }

    /// Runs `hp.episodes` episodes, drawing the workflow for each from
    /// `next_workflow`.
    pub fn train<F>(&mut self, infra: &Infrastructure, mut next_workflow: F) -> Result<Vec<EpisodeLog>>
    where
        F: FnMut(usize) -> Result<Workflow>,
    {
        let mut logs = Vec::with_capacity(self.hp.episodes);
        for e in 0..self.hp.episodes {
            let w = next_workflow(e)?;
            logs.push(self.run_episode(&w, infra)?);
        }
        Ok(logs)
    }
}

/// Noise-free argmax rollout of a trained bundle.
#[derive(Debug, Clone, Copy)]
pub struct DdpgPolicy<'a> {
    bundle: &'a PolicyBundle,
}

impl<'a> DdpgPolicy<'a> {
    pub fn new(bundle: &'a PolicyBundle) -> Self {
        Self { bundle }
    }
}

impl Policy for DdpgPolicy<'_> {
    fn name(&self) -> &str {
        "ddpg"
    }

    fn select(&mut self, state: &EnvState<'_>) -> Result<Action> {
        let task = state.current_task().ok_or(Error::EpisodeDone)?;
        let fail = Error::SchedulingFailure { task: task.id };
        let mut rng = SplitMix64::new(0);
        let (layer, _) = select_layer(self.bundle, &state.global_state(), state.layer_availability(), 0.0, &mut rng)
            .map_err(|_| fail.clone())?;
        let mask = state.layer_mask(layer);
        let (node, _) = select_node(self.bundle, layer, &state.local_state(layer), &mask, 0.0, &mut rng)
            .map_err(|_| fail)?;
        Ok(Action { layer, node: state.infra().layer_nodes(layer)[node].id })
    }
}

//! Scheduling core for sequential workflows on a three-layer edge/fog/cloud
//! infrastructure.
//!
//! The crate is `no_std` (it needs `alloc`) and carries no IO. It provides:
//!
//! - [`model`]: tasks, nodes, links and the closed-form per-assignment cost model.
//! - [`workload`]: seeded synthetic generation of L1–L4 workflows.
//! - [`sim`]: the scheduling environment (state vectors, feasibility masks,
//!   transitions, reward, makespan accounting and trace replay).
//! - [`baselines`]: Random, round-robin FCFS, Greedy, HEFT and an exact
//!   branch-and-bound oracle.
//! - [`nn`]: a small feed-forward network engine with backpropagation,
//!   Adam, global-norm clipping and Polyak averaging.
//! - [`ddpg`]: the two-tier agent (layer controller plus one node
//!   controller per layer), replay buffer and training loop.
//!
//! File formats, configuration and the command-line harness live in the
//! companion `fogflow` crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod baselines;
pub mod ddpg;
mod error;
pub mod model;
pub mod nn;
pub mod rng;
pub mod sim;
pub mod workload;

pub use error::{Error, Result};

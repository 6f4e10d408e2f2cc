//! Tasks, workflows, nodes, links and the per-assignment cost model.
//!
//! Units: workloads in MI, capacities in MIPS, memory and data in MB,
//! bandwidth in Mbit/s, times in seconds. One MB is 8 Mbit (decimal units).

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;

use crate::{Error, Result};

/// Mbit per MB.
pub const MBIT_PER_MB: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Layer {
    Edge,
    Fog,
    Cloud,
}

impl Layer {
    pub const ALL: [Layer; 3] = [Layer::Edge, Layer::Fog, Layer::Cloud];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Layer> {
        Self::ALL.get(i).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Layer::Edge => "edge",
            Layer::Fog => "fog",
            Layer::Cloud => "cloud",
        }
    }

    pub fn parse(s: &str) -> Option<Layer> {
        match s.trim().to_ascii_lowercase().as_str() {
            "edge" => Some(Layer::Edge),
            "fog" => Some(Layer::Fog),
            "cloud" => Some(Layer::Cloud),
            _ => None,
        }
    }
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Workflow difficulty level, defined by its task-count band.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    L1,
    L2,
    L3,
    L4,
}

impl Level {
    pub const ALL: [Level; 4] = [Level::L1, Level::L2, Level::L3, Level::L4];

    /// Inclusive task-count band.
    pub fn band(self) -> (usize, usize) {
        match self {
            Level::L1 => (5, 8),
            Level::L2 => (9, 12),
            Level::L3 => (13, 18),
            Level::L4 => (19, 25),
        }
    }

    /// The level whose band contains `n`. The bands are disjoint.
    pub fn for_task_count(n: usize) -> Option<Level> {
        Self::ALL.into_iter().find(|l| {
            let (lo, hi) = l.band();
            (lo..=hi).contains(&n)
        })
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Level::L1 => "L1",
            Level::L2 => "L2",
            Level::L3 => "L3",
            Level::L4 => "L4",
        }
    }

    pub fn parse(s: &str) -> Option<Level> {
        match s.trim().to_ascii_uppercase().as_str() {
            "L1" => Some(Level::L1),
            "L2" => Some(Level::L2),
            "L3" => Some(Level::L3),
            "L4" => Some(Level::L4),
            _ => None,
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Task {
    /// 1-based position in the workflow.
    pub id: usize,
    pub workload_mi: f64,
    pub memory_mb: f64,
    pub output_mb: f64,
}

impl Task {
    pub fn new(id: usize, workload_mi: f64, memory_mb: f64, output_mb: f64) -> Result<Self> {
        let task = Self { id, workload_mi, memory_mb, output_mb };
        task.validate()?;
        Ok(task)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.workload_mi.is_finite() && self.workload_mi > 0.0) {
            return Err(Error::Config(format!("task {}: workload_mi must be > 0", self.id)));
        }
        if !(self.memory_mb.is_finite() && self.memory_mb > 0.0) {
            return Err(Error::Config(format!("task {}: memory_mb must be > 0", self.id)));
        }
        if !(self.output_mb.is_finite() && self.output_mb >= 0.0) {
            return Err(Error::Config(format!("task {}: output_mb must be >= 0", self.id)));
        }
        Ok(())
    }
}

/// An ordered chain of tasks; task `i` may start only after task `i - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Workflow {
    pub id: String,
    pub tasks: Vec<Task>,
}

impl Workflow {
    /// Checks that task ids run 1..=T in order and every task is valid.
    pub fn new(id: impl Into<String>, tasks: Vec<Task>) -> Result<Self> {
        let id = id.into();
        for (i, t) in tasks.iter().enumerate() {
            if t.id != i + 1 {
                return Err(Error::Config(format!(
                    "workflow {id}: task at position {} has id {}",
                    i + 1,
                    t.id
                )));
            }
            t.validate()?;
        }
        Ok(Self { id, tasks })
    }

    pub fn len(&self) -> usize {
        self.tasks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tasks.is_empty()
    }

    /// Level implied by the task count, if it falls into one of the bands.
    pub fn level(&self) -> Option<Level> {
        Level::for_task_count(self.tasks.len())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub id: NodeId,
    pub layer: Layer,
    pub capacity_mips: f64,
    pub memory_mb: f64,
}

impl Node {
    pub fn new(id: u32, layer: Layer, capacity_mips: f64, memory_mb: f64) -> Self {
        Self { id: NodeId(id), layer, capacity_mips, memory_mb }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkSpec {
    pub from: Layer,
    pub to: Layer,
    pub latency_s: f64,
    pub bandwidth_mbps: f64,
}

/// Nodes grouped edge, fog, cloud plus the two inter-layer links.
///
/// Node positions (`0..len`) index every per-node array in the simulator;
/// [`NodeId`]s are the external names.
#[derive(Debug, Clone, PartialEq)]
pub struct Infrastructure {
    nodes: Vec<Node>,
    layer_ranges: [Range<usize>; 3],
    edge_fog: LinkSpec,
    fog_cloud: LinkSpec,
}

impl Infrastructure {
    /// Builds and validates an infrastructure. Nodes may be given in any
    /// order; they are regrouped by layer, ascending id within a layer.
    pub fn new(mut nodes: Vec<Node>, edge_fog: LinkSpec, fog_cloud: LinkSpec) -> Result<Self> {
        nodes.sort_by_key(|n| (n.layer, n.id));
        let mut ranges: [Range<usize>; 3] = [0..0, 0..0, 0..0];
        for layer in Layer::ALL {
            let start = nodes.iter().position(|n| n.layer == layer);
            let Some(start) = start else {
                return Err(Error::Infrastructure(format!("layer {layer} has no nodes")));
            };
            let end = start + nodes[start..].iter().take_while(|n| n.layer == layer).count();
            ranges[layer.index()] = start..end;
        }
        for (i, n) in nodes.iter().enumerate() {
            if !(n.capacity_mips.is_finite() && n.capacity_mips > 0.0) {
                return Err(Error::Infrastructure(format!("node {}: capacity_mips must be > 0", n.id)));
            }
            if !(n.memory_mb.is_finite() && n.memory_mb > 0.0) {
                return Err(Error::Infrastructure(format!("node {}: memory_mb must be > 0", n.id)));
            }
            if nodes[..i].iter().any(|m| m.id == n.id) {
                return Err(Error::Infrastructure(format!("duplicate node id {}", n.id)));
            }
        }
        for (link, from, to) in [(&edge_fog, Layer::Edge, Layer::Fog), (&fog_cloud, Layer::Fog, Layer::Cloud)] {
            if link.from != from || link.to != to {
                return Err(Error::Infrastructure(format!(
                    "expected a {from}->{to} link, got {}->{}",
                    link.from, link.to
                )));
            }
            if !(link.latency_s.is_finite() && link.latency_s >= 0.0) {
                return Err(Error::Infrastructure(format!("{from}->{to} latency must be >= 0")));
            }
            if !(link.bandwidth_mbps.is_finite() && link.bandwidth_mbps > 0.0) {
                return Err(Error::Infrastructure(format!("{from}->{to} bandwidth must be > 0")));
            }
        }
        Ok(Self { nodes, layer_ranges: ranges, edge_fog, fog_cloud })
    }

    /// Four edge nodes (800–1200 MIPS, 2048 MB), three fog nodes
    /// (2500–3000 MIPS, 6144–8192 MB), one cloud node (8000 MIPS, 32768 MB);
    /// edge→fog 10 ms / 200 Mbit/s, fog→cloud 40 ms / 100 Mbit/s.
    pub fn reference() -> Self {
        let nodes = alloc::vec![
            Node::new(1, Layer::Edge, 800.0, 2048.0),
            Node::new(2, Layer::Edge, 900.0, 2048.0),
            Node::new(3, Layer::Edge, 1100.0, 2048.0),
            Node::new(4, Layer::Edge, 1200.0, 2048.0),
            Node::new(5, Layer::Fog, 2500.0, 6144.0),
            Node::new(6, Layer::Fog, 2750.0, 7168.0),
            Node::new(7, Layer::Fog, 3000.0, 8192.0),
            Node::new(8, Layer::Cloud, 8000.0, 32768.0),
        ];
        let edge_fog = LinkSpec { from: Layer::Edge, to: Layer::Fog, latency_s: 0.010, bandwidth_mbps: 200.0 };
        let fog_cloud = LinkSpec { from: Layer::Fog, to: Layer::Cloud, latency_s: 0.040, bandwidth_mbps: 100.0 };
        Self::new(nodes, edge_fog, fog_cloud).expect("reference infrastructure is valid")
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Positions of the nodes of `layer`.
    pub fn layer_range(&self, layer: Layer) -> Range<usize> {
        self.layer_ranges[layer.index()].clone()
    }

    pub fn layer_nodes(&self, layer: Layer) -> &[Node] {
        &self.nodes[self.layer_range(layer)]
    }

    pub fn layer_size(&self, layer: Layer) -> usize {
        self.layer_ranges[layer.index()].len()
    }

    pub fn position(&self, id: NodeId) -> Option<usize> {
        self.nodes.iter().position(|n| n.id == id)
    }

    pub fn node(&self, id: NodeId) -> Option<&Node> {
        self.nodes.iter().find(|n| n.id == id)
    }

    pub fn edge_fog(&self) -> &LinkSpec {
        &self.edge_fog
    }

    pub fn fog_cloud(&self) -> &LinkSpec {
        &self.fog_cloud
    }

    pub fn max_capacity_mips(&self) -> f64 {
        self.nodes.iter().map(|n| n.capacity_mips).fold(0.0, f64::max)
    }

    pub fn max_memory_mb(&self) -> f64 {
        self.nodes.iter().map(|n| n.memory_mb).fold(0.0, f64::max)
    }
}

/// Link latency plus serialization time for `data_mb`.
pub fn comm_time(link: &LinkSpec, data_mb: f64) -> f64 {
    link.latency_s + MBIT_PER_MB * data_mb / link.bandwidth_mbps
}

pub fn exec_time(task: &Task, node: &Node) -> f64 {
    task.workload_mi / node.capacity_mips
}

/// Split of an assignment's cost into transfer and execution time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cost {
    pub comm_s: f64,
    pub exec_s: f64,
}

impl Cost {
    pub fn total(self) -> f64 {
        self.comm_s + self.exec_s
    }
}

/// Communication part of the cost: nothing on the edge, one hop to fog,
/// two hops to the cloud. The output is always shipped from the edge,
/// independent of where the predecessor ran.
pub fn path_comm_time(layer: Layer, output_mb: f64, infra: &Infrastructure) -> f64 {
    match layer {
        Layer::Edge => 0.0,
        Layer::Fog => comm_time(infra.edge_fog(), output_mb),
        Layer::Cloud => comm_time(infra.edge_fog(), output_mb) + comm_time(infra.fog_cloud(), output_mb),
    }
}

pub fn cost_breakdown(task: &Task, node: &Node, infra: &Infrastructure) -> Cost {
    Cost { comm_s: path_comm_time(node.layer, task.output_mb, infra), exec_s: exec_time(task, node) }
}

/// Total time for running `task` on `node`.
pub fn task_cost(task: &Task, node: &Node, infra: &Infrastructure) -> f64 {
    cost_breakdown(task, node, infra).total()
}

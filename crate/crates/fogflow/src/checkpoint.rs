//! Plain-text checkpoint of a [`PolicyBundle`].
//!
//! ```text
//! fogflow-checkpoint 1
//! net global.actor softmax 12 128 128 3
//! <all parameters of that net, space separated>
//! net global.critic identity 15 128 128 1
//! ...
//! ```
//!
//! Sixteen networks in fixed order: for each of global, edge, fog, cloud the
//! actor, critic, actor target and critic target.

use std::fmt::Write as _;
use std::path::Path;

use fogflow_core::ddpg::{Controller, PolicyBundle, CONTROLLER_NAMES};
use fogflow_core::model::Infrastructure;
use fogflow_core::nn::{Head, Mlp};

use crate::{Error, Result};

pub const MAGIC: &str = "fogflow-checkpoint";
pub const VERSION: u32 = 1;
const ROLES: [&str; 4] = ["actor", "critic", "actor_target", "critic_target"];

fn nets(c: &Controller) -> [&Mlp; 4] {
    [&c.actor, &c.critic, &c.actor_target, &c.critic_target]
}

pub fn to_text(bundle: &PolicyBundle) -> String {
    let mut out = format!("{MAGIC} {VERSION}\n");
    for (name, ctrl) in CONTROLLER_NAMES.iter().zip(bundle.controllers()) {
        for (role, net) in ROLES.iter().zip(nets(ctrl)) {
            let sizes: Vec<String> = net.sizes().iter().map(ToString::to_string).collect();
            writeln!(out, "net {name}.{role} {} {}", net.head().as_str(), sizes.join(" ")).unwrap();
            let params: Vec<String> = net.params().iter().map(ToString::to_string).collect();
            out.push_str(&params.join(" "));
            out.push('\n');
        }
    }
    out
}

pub fn save(path: &Path, bundle: &PolicyBundle) -> Result<()> {
    crate::formats::write_text(path, &to_text(bundle))
}

/// Parses a checkpoint and checks it against `infra`. `lr` seeds the fresh
/// optimizers of the rebuilt controllers.
pub fn from_text(text: &str, infra: &Infrastructure, lr: f64, path: &Path) -> Result<PolicyBundle> {
    let err = |line: usize, message: String| Error::Checkpoint {
        path: path.to_path_buf(),
        message: format!("line {line}: {message}"),
    };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, first) = lines.next().ok_or_else(|| err(1, "empty file".into()))?;
    let mut head = first.split_whitespace();
    if head.next() != Some(MAGIC) {
        return Err(err(1, format!("not a checkpoint (expected {MAGIC:?})")));
    }
    match head.next().and_then(|v| v.parse::<u32>().ok()) {
        Some(VERSION) => {}
        other => return Err(err(1, format!("unsupported version {other:?}, expected {VERSION}"))),
    }

    let mut read_net = |expect: &str| -> Result<Mlp> {
        let (n, header) = lines.next().ok_or_else(|| err(0, format!("missing network {expect}")))?;
        let mut f = header.split_whitespace();
        if f.next() != Some("net") {
            return Err(err(n, format!("expected `net {expect} ...`")));
        }
        let name = f.next().unwrap_or("");
        if name != expect {
            return Err(err(n, format!("expected network {expect}, found {name}")));
        }
        let head = f.next().and_then(Head::parse).ok_or_else(|| err(n, "unknown head".into()))?;
        let sizes: Vec<usize> = f
            .map(|s| s.parse().map_err(|_| err(n, format!("bad layer size {s:?}"))))
            .collect::<Result<_>>()?;
        let (n, body) = lines.next().ok_or_else(|| err(n + 1, format!("missing parameters for {expect}")))?;
        let params: Vec<f64> = body
            .split_whitespace()
            .map(|s| s.parse().map_err(|_| err(n, format!("bad parameter {s:?}"))))
            .collect::<Result<_>>()?;
        Mlp::from_params(&sizes, head, params).map_err(|e| err(n, format!("{expect}: {e}")))
    };

    let mut ctrls = Vec::with_capacity(4);
    for name in CONTROLLER_NAMES {
        let [a, c, at, ct] = ROLES.map(|r| format!("{name}.{r}"));
        let actor = read_net(&a)?;
        let critic = read_net(&c)?;
        let actor_target = read_net(&at)?;
        let critic_target = read_net(&ct)?;
        ctrls.push(Controller::from_networks(actor, critic, actor_target, critic_target, lr));
    }
    if let Some((n, extra)) = lines.find(|(_, l)| !l.trim().is_empty()) {
        return Err(err(n, format!("unexpected trailing content {:?}", extra.chars().take(40).collect::<String>())));
    }
    let mut it = ctrls.into_iter();
    let global = it.next().unwrap();
    let local = [it.next().unwrap(), it.next().unwrap(), it.next().unwrap()];
    let bundle = PolicyBundle { global, local };
    bundle.check_compatible(infra).map_err(|e| Error::Shape { path: path.to_path_buf(), message: e.to_string() })?;
    Ok(bundle)
}

pub fn load(path: &Path, infra: &Infrastructure, lr: f64) -> Result<PolicyBundle> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    from_text(&text, infra, lr, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use fogflow_core::ddpg::Hyperparams;
    use fogflow_core::model::{Layer, Node};

    fn small() -> Hyperparams {
        Hyperparams { hidden: [6, 5], ..Default::default() }
    }

    #[test]
    fn round_trip_is_exact() {
        let infra = Infrastructure::reference();
        let b = PolicyBundle::new(&infra, &small(), 3);
        let p = Path::new("mem");
        let back = from_text(&to_text(&b), &infra, 1e-3, p).unwrap();
        for (x, y) in b.controllers().iter().zip(back.controllers()) {
            for (a, c) in nets(x).iter().zip(nets(y)) {
                assert_eq!(a.sizes(), c.sizes());
                assert_eq!(a.params(), c.params());
            }
        }
        assert_eq!(to_text(&back), to_text(&b));
    }

    #[test]
    fn rejects_other_infrastructure_with_dims() {
        let infra = Infrastructure::reference();
        let b = PolicyBundle::new(&infra, &small(), 3);
        let mut nodes = infra.nodes().to_vec();
        nodes.push(Node::new(9, Layer::Fog, 2000.0, 4096.0));
        let bigger = Infrastructure::new(nodes, infra.edge_fog().clone(), infra.fog_cloud().clone()).unwrap();
        let e = from_text(&to_text(&b), &bigger, 1e-3, Path::new("x")).unwrap_err().to_string();
        assert!(e.contains("fog") && e.contains("15") && e.contains("4"), "{e}");
    }

    #[test]
    fn rejects_corruption() {
        let infra = Infrastructure::reference();
        let text = to_text(&PolicyBundle::new(&infra, &small(), 3));
        let p = Path::new("x");
        // Drop one parameter from the first network.
        let mut lines: Vec<String> = text.lines().map(String::from).collect();
        let trimmed: Vec<&str> = lines[2].split(' ').collect();
        lines[2] = trimmed[..trimmed.len() - 1].join(" ");
        let e = from_text(&lines.join("\n"), &infra, 1e-3, p).unwrap_err().to_string();
        assert!(e.contains("line 3"), "{e}");
        // Wrong header sizes.
        let bad = text.replacen("net global.actor softmax 12 6 5 3", "net global.actor softmax 12 6 5 4", 1);
        assert!(from_text(&bad, &infra, 1e-3, p).is_err());
        assert!(from_text(&text.replacen("fogflow-checkpoint 1", "fogflow-checkpoint 2", 1), &infra, 1e-3, p).is_err());
        assert!(from_text("", &infra, 1e-3, p).is_err());
        let truncated: String = text.lines().take(10).collect::<Vec<_>>().join("\n");
        assert!(from_text(&truncated, &infra, 1e-3, p).is_err());
    }
}

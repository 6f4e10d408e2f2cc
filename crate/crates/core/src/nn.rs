//! Fully connected networks with rectifier hidden layers, trained by
//! explicit backpropagation.
//!
//! Parameters live in one flat vector, layer by layer: the weight matrix
//! (row-major, `out × in`) followed by the bias. Gradients, optimizer moments
//! and target networks share that layout, so clipping and Polyak averaging
//! are plain slice operations.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::rng::SplitMix64;
use crate::{Error, Result};

/// Output transformation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Head {
    Identity,
    Softmax,
}

impl Head {
    pub fn as_str(self) -> &'static str {
        match self {
            Head::Identity => "identity",
            Head::Softmax => "softmax",
        }
    }

    pub fn parse(s: &str) -> Option<Head> {
        match s {
            "identity" => Some(Head::Identity),
            "softmax" => Some(Head::Softmax),
            _ => None,
        }
    }
}

/// Half-width of the uniform init range of the output layer.
pub const OUTPUT_INIT_SCALE: f64 = 3e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    sizes: Vec<usize>,
    head: Head,
    params: Vec<f64>,
    generation: u64,
}

fn param_count(sizes: &[usize]) -> usize {
    sizes.windows(2).map(|w| w[1] * w[0] + w[1]).sum()
}

/// Dot product with four interleaved accumulators; the summation order is
/// fixed so results are reproducible.
#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 4];
    let ca = a.chunks_exact(4);
    let cb = b.chunks_exact(4);
    let (ra, rb) = (ca.remainder(), cb.remainder());
    for (x, y) in ca.zip(cb) {
        acc[0] += x[0] * y[0];
        acc[1] += x[1] * y[1];
        acc[2] += x[2] * y[2];
        acc[3] += x[3] * y[3];
    }
    let mut s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for (x, y) in ra.iter().zip(rb) {
        s += x * y;
    }
    s
}

#[inline]
fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn softmax(z: &mut [f64]) {
    let max = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for v in z.iter_mut() {
        *v = libm::exp(*v - max);
        sum += *v;
    }
    for v in z.iter_mut() {
        *v /= sum;
    }
}

/// Activations recorded by [`Mlp::forward_cached`].
#[derive(Debug, Clone)]
pub struct ForwardCache {
    generation: u64,
    /// Input followed by every hidden activation (after the rectifier).
    activations: Vec<Vec<f64>>,
    output: Vec<f64>,
}

impl ForwardCache {
    pub fn output(&self) -> &[f64] {
        &self.output
    }

    pub fn input(&self) -> &[f64] {
        &self.activations[0]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub params: Vec<f64>,
    pub input: Vec<f64>,
}

impl Mlp {
    /// Hidden layers drawn from `U(-1/sqrt(fan_in), 1/sqrt(fan_in))` (weights
    /// and biases), output layer from `U(-3e-3, 3e-3)`.
    pub fn new(sizes: &[usize], head: Head, rng: &mut SplitMix64) -> Self {
        assert!(sizes.len() >= 2 && sizes.iter().all(|&s| s > 0), "invalid layer sizes");
        let mut params = Vec::with_capacity(param_count(sizes));
        let layers = sizes.len() - 1;
        for (k, w) in sizes.windows(2).enumerate() {
            let bound = if k + 1 == layers { OUTPUT_INIT_SCALE } else { 1.0 / libm::sqrt(w[0] as f64) };
            for _ in 0..(w[1] * w[0] + w[1]) {
                params.push(rng.uniform(-bound, bound));
            }
        }
        Self { sizes: sizes.to_vec(), head, params, generation: 0 }
    }

    pub fn zeros(sizes: &[usize], head: Head) -> Self {
        assert!(sizes.len() >= 2 && sizes.iter().all(|&s| s > 0), "invalid layer sizes");
        Self { sizes: sizes.to_vec(), head, params: vec![0.0; param_count(sizes)], generation: 0 }
    }

    pub fn from_params(sizes: &[usize], head: Head, params: Vec<f64>) -> Result<Self> {
        if sizes.len() < 2 || sizes.contains(&0) {
            return Err(Error::ShapeMismatch(format!("invalid layer sizes {sizes:?}")));
        }
        let expected = param_count(sizes);
        if params.len() != expected {
            return Err(Error::ShapeMismatch(format!(
                "{} parameters for sizes {sizes:?}, expected {expected}",
                params.len()
            )));
        }
        if params.iter().any(|p| !p.is_finite()) {
            return Err(Error::NonFinite("parameters"));
        }
        Ok(Self { sizes: sizes.to_vec(), head, params, generation: 0 })
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn head(&self) -> Head {
        self.head
    }

    pub fn input_dim(&self) -> usize {
        self.sizes[0]
    }

    pub fn output_dim(&self) -> usize {
        *self.sizes.last().expect("at least two sizes")
    }

    pub fn num_params(&self) -> usize {
        self.params.len()
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    /// Mutable parameter access; invalidates outstanding forward caches.
    pub fn params_mut(&mut self) -> &mut [f64] {
        self.generation += 1;
        &mut self.params
    }

    pub fn same_shape(&self, other: &Mlp) -> bool {
        self.sizes == other.sizes && self.head == other.head
    }

    fn check_input(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.input_dim() {
            return Err(Error::DimensionMismatch { expected: self.input_dim(), actual: x.len() });
        }
        Ok(())
    }

    /// Runs the net, returning the hidden activations and the output.
    fn run(&self, x: &[f64], keep: bool) -> (Vec<Vec<f64>>, Vec<f64>) {
        let layers = self.sizes.len() - 1;
        let mut acts: Vec<Vec<f64>> = Vec::with_capacity(if keep { layers } else { 0 });
        let mut cur = x.to_vec();
        let mut off = 0;
        for k in 0..layers {
            let (n_in, n_out) = (self.sizes[k], self.sizes[k + 1]);
            let w = &self.params[off..off + n_in * n_out];
            let b = &self.params[off + n_in * n_out..off + n_in * n_out + n_out];
            off += n_in * n_out + n_out;
            let mut next: Vec<f64> = (0..n_out).map(|o| dot(&w[o * n_in..(o + 1) * n_in], &cur) + b[o]).collect();
            if k + 1 < layers {
                for v in &mut next {
                    if *v < 0.0 {
                        *v = 0.0;
                    }
                }
            }
            if keep {
                acts.push(cur);
            }
            cur = next;
        }
        if self.head == Head::Softmax {
            softmax(&mut cur);
        }
        (acts, cur)
    }

    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_input(x)?;
        Ok(self.run(x, false).1)
    }

    pub fn forward_cached(&self, x: &[f64]) -> Result<ForwardCache> {
        self.check_input(x)?;
        let (activations, output) = self.run(x, true);
        Ok(ForwardCache { generation: self.generation, activations, output })
    }

    /// Adds `dL/dθ` into `param_grads` and returns `dL/dx`, given
    /// `upstream = dL/dy` for the cached forward pass.
    pub fn backward_into(&self, cache: &ForwardCache, upstream: &[f64], param_grads: &mut [f64]) -> Result<Vec<f64>> {
        if cache.generation != self.generation || cache.activations.len() + 1 != self.sizes.len() {
            return Err(Error::StaleCache);
        }
        if upstream.len() != self.output_dim() {
            return Err(Error::DimensionMismatch { expected: self.output_dim(), actual: upstream.len() });
        }
        if param_grads.len() != self.params.len() {
            return Err(Error::DimensionMismatch { expected: self.params.len(), actual: param_grads.len() });
        }
        let mut delta: Vec<f64> = match self.head {
            Head::Identity => upstream.to_vec(),
            Head::Softmax => {
                let y = &cache.output;
                let gy = dot(upstream, y);
                y.iter().zip(upstream).map(|(yi, gi)| yi * (gi - gy)).collect()
            }
        };
        let layers = self.sizes.len() - 1;
        let mut off = self.params.len();
        for k in (0..layers).rev() {
            let (n_in, n_out) = (self.sizes[k], self.sizes[k + 1]);
            off -= n_in * n_out + n_out;
            let a = &cache.activations[k];
            let w = &self.params[off..off + n_in * n_out];
            let (gw, gb) = param_grads[off..off + n_in * n_out + n_out].split_at_mut(n_in * n_out);
            let mut prev = vec![0.0; n_in];
            for o in 0..n_out {
                let d = delta[o];
                if d == 0.0 {
                    continue;
                }
                gb[o] += d;
                axpy(d, a, &mut gw[o * n_in..(o + 1) * n_in]);
                axpy(d, &w[o * n_in..(o + 1) * n_in], &mut prev);
            }
            if k > 0 {
                for (p, &ai) in prev.iter_mut().zip(a) {
                    if ai <= 0.0 {
                        *p = 0.0;
                    }
                }
            }
            delta = prev;
        }
        Ok(delta)
    }

    /// `dL/dx` only, skipping the parameter gradients.
    pub fn input_gradient(&self, cache: &ForwardCache, upstream: &[f64]) -> Result<Vec<f64>> {
        if cache.generation != self.generation || cache.activations.len() + 1 != self.sizes.len() {
            return Err(Error::StaleCache);
        }
        if upstream.len() != self.output_dim() {
            return Err(Error::DimensionMismatch { expected: self.output_dim(), actual: upstream.len() });
        }
        let mut delta: Vec<f64> = match self.head {
            Head::Identity => upstream.to_vec(),
            Head::Softmax => {
                let y = &cache.output;
                let gy = dot(upstream, y);
                y.iter().zip(upstream).map(|(yi, gi)| yi * (gi - gy)).collect()
            }
        };
        let layers = self.sizes.len() - 1;
        let mut off = self.params.len();
        for k in (0..layers).rev() {
            let (n_in, n_out) = (self.sizes[k], self.sizes[k + 1]);
            off -= n_in * n_out + n_out;
            let w = &self.params[off..off + n_in * n_out];
            let mut prev = vec![0.0; n_in];
            for (o, &d) in delta.iter().enumerate() {
                if d != 0.0 {
                    axpy(d, &w[o * n_in..(o + 1) * n_in], &mut prev);
                }
            }
            if k > 0 {
                for (p, &ai) in prev.iter_mut().zip(&cache.activations[k]) {
                    if ai <= 0.0 {
                        *p = 0.0;
                    }
                }
            }
            delta = prev;
        }
        Ok(delta)
    }

    pub fn backward(&self, cache: &ForwardCache, upstream: &[f64]) -> Result<Gradients> {
        let mut params = vec![0.0; self.params.len()];
        let input = self.backward_into(cache, upstream, &mut params)?;
        Ok(Gradients { params, input })
    }
}

/// Adam with bias correction.
#[derive(Debug, Clone, PartialEq)]
pub struct Adam {
    pub lr: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    m: Vec<f64>,
    v: Vec<f64>,
    step: u64,
}

impl Adam {
    pub fn new(num_params: usize, lr: f64) -> Self {
        Self { lr, beta1: 0.9, beta2: 0.999, eps: 1e-8, m: vec![0.0; num_params], v: vec![0.0; num_params], step: 0 }
    }

    pub fn steps(&self) -> u64 {
        self.step
    }

    /// One update of `net` along `-grads`. Non-finite gradients are
    /// rejected and leave both the net and the moments untouched.
    pub fn step(&mut self, net: &mut Mlp, grads: &[f64]) -> Result<()> {
        if grads.len() != self.m.len() || net.num_params() != self.m.len() {
            return Err(Error::DimensionMismatch { expected: self.m.len(), actual: grads.len() });
        }
        if grads.iter().any(|g| !g.is_finite()) {
            return Err(Error::NonFinite("gradient"));
        }
        self.step += 1;
        let t = self.step as i32;
        let bc1 = 1.0 - libm::pow(self.beta1, t as f64);
        let bc2 = 1.0 - libm::pow(self.beta2, t as f64);
        let params = net.params_mut();
        for i in 0..grads.len() {
            let g = grads[i];
            self.m[i] = self.beta1 * self.m[i] + (1.0 - self.beta1) * g;
            self.v[i] = self.beta2 * self.v[i] + (1.0 - self.beta2) * g * g;
            let m_hat = self.m[i] / bc1;
            let v_hat = self.v[i] / bc2;
            params[i] -= self.lr * m_hat / (libm::sqrt(v_hat) + self.eps);
        }
        Ok(())
    }
}

pub fn l2_norm(v: &[f64]) -> f64 {
    libm::sqrt(v.iter().map(|x| x * x).sum())
}

/// Rescales `grads` in place so their L2 norm is at most `max_norm`;
/// returns the norm before clipping.
pub fn clip_global_norm(grads: &mut [f64], max_norm: f64) -> f64 {
    let norm = l2_norm(grads);
    if norm > max_norm {
        let scale = max_norm / norm;
        for g in grads.iter_mut() {
            *g *= scale;
        }
    }
    norm
}

/// `target ← τ·online + (1 − τ)·target`, elementwise.
pub fn polyak_update(target: &mut Mlp, online: &Mlp, tau: f64) -> Result<()> {
    if !target.same_shape(online) {
        return Err(Error::ShapeMismatch(format!("target {:?} vs online {:?}", target.sizes, online.sizes)));
    }
    for (t, &o) in target.params_mut().iter_mut().zip(&online.params) {
        *t = tau * o + (1.0 - tau) * *t;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel_err(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(1e-6)
    }

    /// Central differences of `L = c · net(x)` over a sample of parameters.
    fn check_gradients(sizes: &[usize], head: Head, seed: u64) {
        let mut rng = SplitMix64::new(seed);
        let mut net = Mlp::new(sizes, head, &mut rng);
        // Larger output weights so the softmax is far from uniform.
        let n = net.num_params();
        let out_len = sizes[sizes.len() - 1] * (sizes[sizes.len() - 2] + 1);
        for p in &mut net.params_mut()[n - out_len..] {
            *p *= 100.0;
        }
        let x: Vec<f64> = (0..sizes[0]).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let c: Vec<f64> = (0..net.output_dim()).map(|_| rng.uniform(-1.0, 1.0)).collect();
        let loss = |net: &Mlp, x: &[f64]| dot(&net.forward(x).unwrap(), &c);
        let cache = net.forward_cached(&x).unwrap();
        let g = net.backward(&cache, &c).unwrap();
        assert_eq!(net.input_gradient(&cache, &c).unwrap(), g.input);
        let h = 1e-5;
        for _ in 0..300 {
            let i = rng.below(n as u64) as usize;
            let orig = net.params()[i];
            net.params_mut()[i] = orig + h;
            let up = loss(&net, &x);
            net.params_mut()[i] = orig - h;
            let down = loss(&net, &x);
            net.params_mut()[i] = orig;
            let fd = (up - down) / (2.0 * h);
            assert!(rel_err(g.params[i], fd) < 1e-4, "param {i}: {} vs {fd}", g.params[i]);
        }
        for j in 0..x.len() {
            let mut xp = x.clone();
            xp[j] += h;
            let up = loss(&net, &xp);
            xp[j] -= 2.0 * h;
            let down = loss(&net, &xp);
            let fd = (up - down) / (2.0 * h);
            assert!(rel_err(g.input[j], fd) < 1e-4, "input {j}: {} vs {fd}", g.input[j]);
        }
    }

    #[test]
    fn gradients_match_finite_differences() {
        check_gradients(&[5, 16, 16, 3], Head::Softmax, 1);
        check_gradients(&[7, 16, 16, 1], Head::Identity, 2);
        check_gradients(&[4, 8, 2], Head::Softmax, 3);
        check_gradients(&[3, 2], Head::Identity, 4);
    }

    #[test]
    fn zero_weights_softmax_is_uniform() {
        let net = Mlp::zeros(&[4, 8, 8, 3], Head::Softmax);
        let y = net.forward(&[0.3, -2.0, 5.0, 1.0]).unwrap();
        for v in y {
            assert!((v - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn softmax_sums_to_one() {
        let mut rng = SplitMix64::new(5);
        for seed in 0..20 {
            let mut r = SplitMix64::new(seed);
            let net = Mlp::new(&[6, 32, 32, 5], Head::Softmax, &mut r);
            let x: Vec<f64> = (0..6).map(|_| rng.uniform(-3.0, 3.0)).collect();
            let s: f64 = net.forward(&x).unwrap().iter().sum();
            assert!((s - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn single_linear_unit() {
        let net = Mlp::from_params(&[1, 1], Head::Identity, vec![2.5, -0.5]).unwrap();
        assert_eq!(net.forward(&[3.0]).unwrap(), vec![7.0]);
        assert!(matches!(net.forward(&[1.0, 2.0]), Err(Error::DimensionMismatch { expected: 1, actual: 2 })));
    }

    #[test]
    fn zero_upstream_gives_zero_gradient() {
        let mut rng = SplitMix64::new(9);
        let net = Mlp::new(&[4, 8, 2], Head::Identity, &mut rng);
        let cache = net.forward_cached(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        let g = net.backward(&cache, &[0.0, 0.0]).unwrap();
        assert!(g.params.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn stale_cache_rejected() {
        let mut rng = SplitMix64::new(9);
        let mut net = Mlp::new(&[2, 4, 1], Head::Identity, &mut rng);
        let cache = net.forward_cached(&[1.0, 2.0]).unwrap();
        net.params_mut()[0] += 1.0;
        assert_eq!(net.backward(&cache, &[1.0]), Err(Error::StaleCache));
    }

    #[test]
    fn from_params_validates_shape() {
        assert!(Mlp::from_params(&[2, 3], Head::Identity, vec![0.0; 8]).is_err());
        assert!(Mlp::from_params(&[2, 3], Head::Identity, vec![0.0; 9]).is_ok());
        assert!(Mlp::from_params(&[2, 3], Head::Identity, vec![f64::NAN; 9]).is_err());
    }

    #[test]
    fn adam_zero_gradient_is_noop() {
        let mut rng = SplitMix64::new(1);
        let mut net = Mlp::new(&[2, 3, 1], Head::Identity, &mut rng);
        let before = net.params().to_vec();
        let mut opt = Adam::new(net.num_params(), 1.7e-4);
        for _ in 0..10 {
            opt.step(&mut net, &vec![0.0; before.len()]).unwrap();
        }
        assert_eq!(net.params(), &before[..]);
    }

    #[test]
    fn adam_constant_gradient_steps_lr_times_sign() {
        let mut net = Mlp::zeros(&[1, 1], Head::Identity);
        let lr = 1.7e-4;
        let mut opt = Adam::new(2, lr);
        let mut prev = net.params().to_vec();
        let mut last_step = [0.0; 2];
        for _ in 0..5000 {
            opt.step(&mut net, &[0.3, -2.0]).unwrap();
            let now = net.params();
            last_step = [now[0] - prev[0], now[1] - prev[1]];
            prev = now.to_vec();
        }
        // With m and v converged, each step is lr * g / (|g| + eps).
        assert!((last_step[0] + lr).abs() < 1e-9, "{last_step:?}");
        assert!((last_step[1] - lr).abs() < 1e-9, "{last_step:?}");
    }

    #[test]
    fn adam_descends_quadratic() {
        // f(a, b) = (a - 3)^2 + 10 (b + 1)^2 on the params of a 1x1 net.
        let mut net = Mlp::zeros(&[1, 1], Head::Identity);
        let mut opt = Adam::new(2, 0.01);
        let f = |p: &[f64]| (p[0] - 3.0).powi(2) + 10.0 * (p[1] + 1.0).powi(2);
        let mut prev = f(net.params());
        for i in 0..80 {
            let p = net.params().to_vec();
            opt.step(&mut net, &[2.0 * (p[0] - 3.0), 20.0 * (p[1] + 1.0)]).unwrap();
            let now = f(net.params());
            if i >= 5 {
                assert!(now < prev, "step {i}: {now} >= {prev}");
            }
            prev = now;
        }
        assert!(prev < 0.5 * 19.0, "{prev}");
    }

    #[test]
    fn adam_rejects_nan() {
        let mut net = Mlp::zeros(&[1, 1], Head::Identity);
        let mut opt = Adam::new(2, 0.1);
        assert_eq!(opt.step(&mut net, &[f64::NAN, 0.0]), Err(Error::NonFinite("gradient")));
        assert_eq!(net.params(), &[0.0, 0.0]);
        assert_eq!(opt.steps(), 0);
    }

    #[test]
    fn clipping() {
        let mut g = vec![0.3, 0.4];
        assert_eq!(clip_global_norm(&mut g, 0.8), 0.5);
        assert_eq!(g, vec![0.3, 0.4]);
        let mut g = vec![0.0; 5];
        clip_global_norm(&mut g, 0.8);
        assert!(g.iter().all(|&v| v == 0.0));
        let mut g = vec![4.8, 6.4];
        assert!((clip_global_norm(&mut g, 0.8) - 8.0).abs() < 1e-12);
        assert!((g[0] - 0.48).abs() < 1e-12 && (g[1] - 0.64).abs() < 1e-12);
        assert!((l2_norm(&g) - 0.8).abs() < 1e-9);
    }

    #[test]
    fn polyak() {
        let online = Mlp::from_params(&[1, 1], Head::Identity, vec![1.0, 1.0]).unwrap();
        let mut target = Mlp::zeros(&[1, 1], Head::Identity);
        polyak_update(&mut target, &online, 0.005).unwrap();
        assert!((target.params()[0] - 0.005).abs() < 1e-15);
        for k in 2..=100 {
            polyak_update(&mut target, &online, 0.005).unwrap();
            let expected = 1.0 - libm::pow(0.995, k as f64);
            assert!((target.params()[0] - expected).abs() < 1e-12);
        }
        polyak_update(&mut target, &online, 1.0).unwrap();
        assert_eq!(target.params(), online.params());
        let mut other = Mlp::zeros(&[2, 1], Head::Identity);
        assert!(polyak_update(&mut other, &online, 0.5).is_err());
    }
}

use std::sync::Mutex;

use rand_distr::{Distribution, Normal};

use crate::error::{invalid, Result};
use crate::model::{ChainRng, Potential};

/// Adds fresh zero-mean Gaussian noise to every gradient call of `inner`.
///
/// The wrapper owns its generator, so each chain needs its own instance.
pub struct NoisyGradient<T> {
    inner: T,
    noise_scale: f64,
    rng: Mutex<ChainRng>,
}

pub fn wrap_noisy<T: Potential>(inner: T, noise_scale: f64, rng: ChainRng) -> Result<NoisyGradient<T>> {
    if !(noise_scale.is_finite() && noise_scale >= 0.0) {
        return Err(invalid(format!("noise scale must be non-negative, got {noise_scale}")));
    }
    Ok(NoisyGradient { inner, noise_scale, rng: Mutex::new(rng) })
}

impl<T> NoisyGradient<T> {
    pub fn inner(&self) -> &T {
        &self.inner
    }

    pub fn noise_scale(&self) -> f64 {
        self.noise_scale
    }
}

impl<T: Potential> Potential for NoisyGradient<T> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn value(&self, x: &[f64]) -> f64 {
        self.inner.value(x)
    }

    fn gradient_into(&self, x: &[f64], out: &mut [f64]) {
        self.inner.gradient_into(x, out);
        if self.noise_scale == 0.0 {
            return;
        }
        let normal = Normal::new(0.0, self.noise_scale).expect("scale validated at construction");
        let mut rng = self.rng.lock().unwrap_or_else(|e| e.into_inner());
        for o in out.iter_mut() {
            *o += normal.sample(&mut *rng);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::chain_rng;
    use crate::targets::{ExpPowerTarget, FunnelTarget};

    #[test]
    fn zero_noise_is_exact() {
        let inner = ExpPowerTarget::new(3, 1.5).unwrap();
        let noisy = wrap_noisy(inner.clone(), 0.0, chain_rng(1, 0)).unwrap();
        let x = [0.3, -2.0, 1.1];
        assert_eq!(noisy.gradient(&x), inner.gradient(&x));
    }

    #[test]
    fn noise_has_zero_mean() {
        let noisy = wrap_noisy(FunnelTarget, 0.5, chain_rng(2, 0)).unwrap();
        let x = [0.2, -0.1, 0.4, 0.0, 1.0, -1.0, 0.5, 0.3, 0.2, 0.7];
        let exact = FunnelTarget.gradient(&x);
        let n = 100_000;
        let mut acc = [0.0; 10];
        for _ in 0..n {
            for (a, g) in acc.iter_mut().zip(noisy.gradient(&x)) {
                *a += g;
            }
        }
        let bound = 4.0 * 0.5 / (n as f64).sqrt();
        for (a, e) in acc.iter().zip(&exact) {
            assert!((a / n as f64 - e).abs() < bound);
        }
    }

    #[test]
    fn value_ignores_noise() {
        let noisy = wrap_noisy(FunnelTarget, 10.0, chain_rng(3, 0)).unwrap();
        let x = [0.5; 10];
        assert_eq!(noisy.value(&x), FunnelTarget.value(&x));
        assert!(wrap_noisy(FunnelTarget, -1.0, chain_rng(3, 0)).is_err());
    }
}

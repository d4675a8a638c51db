//! Shared state types and the two interfaces every sampler component is
//! written against: a target potential `U(x)` and a kinetic energy `K(p)`.
//!
//! Random streams come from ChaCha8 (`rand_chacha`). A chain's stream is
//! the generator seeded from the 64-bit master seed with the stream id set
//! to the chain index, so replicate chains never share randomness and the
//! whole run is reproducible from one integer.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Per-chain random generator.
pub type ChainRng = ChaCha8Rng;

/// Generator for chain `chain` of a run seeded with `master_seed`.
pub fn chain_rng(master_seed: u64, chain: u64) -> ChainRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(chain);
    rng
}

/// Position/momentum pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasePoint {
    x: Vec<f64>,
    p: Vec<f64>,
}

impl PhasePoint {
    pub fn new(x: Vec<f64>, p: Vec<f64>) -> Result<Self> {
        if x.len() != p.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                got: p.len(),
            });
        }
        if x.iter().chain(p.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("phase point"));
        }
        Ok(Self { x, p })
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn position(&self) -> &[f64] {
        &self.x
    }

    pub fn momentum(&self) -> &[f64] {
        &self.p
    }

    pub fn into_parts(self) -> (Vec<f64>, Vec<f64>) {
        (self.x, self.p)
    }

    /// The same point with momentum negated.
    pub fn flipped(&self) -> Self {
        Self {
            x: self.x.clone(),
            p: self.p.iter().map(|v| -v).collect(),
        }
    }
}

/// Negative log-density (up to a constant) of the distribution being sampled.
///
/// Implementations are immutable after construction and may be shared
/// between threads. Gradients are analytic.
pub trait Potential: Send + Sync {
    fn dim(&self) -> usize;

    fn value(&self, x: &[f64]) -> f64;

    /// Writes `∇U(x)` into `out`, which has length `dim()`.
    fn gradient_into(&self, x: &[f64], out: &mut [f64]);

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; x.len()];
        self.gradient_into(x, &mut out);
        out
    }
}

/// Kinetic energy `K(p)`, which doubles as the negative log-density of the
/// momentum distribution.
///
/// Every implementation is even in `p`, so its gradient is odd.
pub trait KineticEnergy: Send + Sync {
    fn dim(&self) -> usize;

    fn value(&self, p: &[f64]) -> f64;

    fn gradient_into(&self, p: &[f64], out: &mut [f64]);

    fn gradient(&self, p: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; p.len()];
        self.gradient_into(p, &mut out);
        out
    }

    /// Exact draw from the density proportional to `exp(-K(p))`.
    fn sample_into(&self, rng: &mut dyn RngCore, out: &mut [f64]) -> Result<()>;

    fn sample(&self, rng: &mut dyn RngCore) -> Result<Vec<f64>> {
        let mut out = vec![0.0; self.dim()];
        self.sample_into(rng, &mut out)?;
        Ok(out)
    }
}

impl<T: Potential + ?Sized> Potential for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn value(&self, x: &[f64]) -> f64 {
        (**self).value(x)
    }
    fn gradient_into(&self, x: &[f64], out: &mut [f64]) {
        (**self).gradient_into(x, out)
    }
}

impl<T: Potential + ?Sized> Potential for Box<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn value(&self, x: &[f64]) -> f64 {
        (**self).value(x)
    }
    fn gradient_into(&self, x: &[f64], out: &mut [f64]) {
        (**self).gradient_into(x, out)
    }
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

/// `U(x)` with dimension and finiteness checks.
pub fn potential_eval(target: &dyn Potential, x: &[f64]) -> Result<f64> {
    check_dim(target.dim(), x.len())?;
    let u = target.value(x);
    if !u.is_finite() {
        return Err(Error::NonFinite("potential"));
    }
    Ok(u)
}

/// `∇U(x)` with dimension and finiteness checks.
pub fn potential_grad(target: &dyn Potential, x: &[f64]) -> Result<Vec<f64>> {
    check_dim(target.dim(), x.len())?;
    let g = target.gradient(x);
    if g.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("potential gradient"));
    }
    Ok(g)
}

/// `H(x, p) = U(x) + K(p)`.
pub fn hamiltonian(target: &dyn Potential, kinetic: &dyn KineticEnergy, s: &PhasePoint) -> Result<f64> {
    check_dim(target.dim(), s.dim())?;
    check_dim(kinetic.dim(), s.dim())?;
    let h = target.value(s.position()) + kinetic.value(s.momentum());
    if !h.is_finite() {
        return Err(Error::NonFinite("hamiltonian"));
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinetics::Kinetic;
    use crate::targets::{ExpPowerTarget, GaussianTarget};
    use rand::Rng;

    #[test]
    fn phase_point_rejects_bad_input() {
        assert!(matches!(
            PhasePoint::new(vec![0.0], vec![0.0, 1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            PhasePoint::new(vec![f64::NAN], vec![0.0]),
            Err(Error::NonFinite(_))
        ));
        assert!(PhasePoint::new(vec![0.0], vec![f64::INFINITY]).is_err());
    }

    #[test]
    fn hamiltonian_examples() {
        let u = GaussianTarget::standard(1);
        let k = Kinetic::gaussian(1);
        let h0 = hamiltonian(&u, &k, &PhasePoint::new(vec![0.0], vec![0.0]).unwrap()).unwrap();
        assert_eq!(h0, 0.0);
        let h = hamiltonian(&u, &k, &PhasePoint::new(vec![3.0], vec![4.0]).unwrap()).unwrap();
        assert!((h - 12.5).abs() < 1e-12);

        let u = ExpPowerTarget::new(1, 1.5).unwrap();
        let h = hamiltonian(&u, &k, &PhasePoint::new(vec![1.0], vec![1.0]).unwrap()).unwrap();
        assert!((h - (1.0 / 1.5 + 0.5)).abs() < 1e-12);
    }

    #[test]
    fn hamiltonian_dimension_mismatch() {
        let u = GaussianTarget::standard(2);
        let k = Kinetic::gaussian(1);
        let s = PhasePoint::new(vec![0.0], vec![0.0]).unwrap();
        assert!(matches!(hamiltonian(&u, &k, &s), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn hamiltonian_even_in_momentum() {
        let u = GaussianTarget::standard(3);
        let mut rng = chain_rng(3, 0);
        for k in crate::kinetics::tests::all_families(3) {
            for _ in 0..20 {
                let x: Vec<f64> = (0..3).map(|_| rng.random_range(-3.0..3.0)).collect();
                let p: Vec<f64> = (0..3).map(|_| rng.random_range(-3.0..3.0)).collect();
                let s = PhasePoint::new(x, p).unwrap();
                assert_eq!(
                    hamiltonian(&u, &k, &s).unwrap(),
                    hamiltonian(&u, &k, &s.flipped()).unwrap()
                );
            }
        }
    }

    #[test]
    fn chain_streams_are_reproducible_and_distinct() {
        let mut a = chain_rng(42, 0);
        let mut b = chain_rng(42, 0);
        let mut c = chain_rng(42, 1);
        let xa: Vec<u64> = (0..8).map(|_| a.next_u64()).collect();
        let xb: Vec<u64> = (0..8).map(|_| b.next_u64()).collect();
        let xc: Vec<u64> = (0..8).map(|_| c.next_u64()).collect();
        assert_eq!(xa, xb);
        assert_ne!(xa, xc);
    }
}

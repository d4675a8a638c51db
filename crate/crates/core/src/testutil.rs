use rand::{Rng, RngCore};

use crate::gradcheck::check_gradient;

pub fn random_vec(rng: &mut dyn RngCore, dim: usize, half_width: f64) -> Vec<f64> {
    (0..dim).map(|_| rng.random_range(-half_width..half_width)).collect()
}

pub fn assert_gradient_matches<F>(f: F, analytic: &[f64], x: &[f64], label: &str)
where
    F: Fn(&[f64]) -> f64,
{
    let check = check_gradient(f, analytic, x);
    assert!(
        check.passes(1e-5, 1e-8),
        "{label}: gradient mismatch at {x:?}: analytic {:?} numeric {:?}",
        check.analytic,
        check.numeric
    );
}

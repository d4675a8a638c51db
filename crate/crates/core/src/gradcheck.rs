//! Finite-difference gradient verification. Used by tests only; the
//! samplers always call analytic gradients.

/// Fourth-order central-difference gradient of `f` at `x`.
pub fn finite_difference_gradient<F>(f: F, x: &[f64]) -> Vec<f64>
where
    F: Fn(&[f64]) -> f64,
{
    let mut work = x.to_vec();
    (0..x.len())
        .map(|i| {
            let h = 1e-5 * x[i].abs().max(1.0);
            let mut at = |offset: f64| {
                work[i] = x[i] + offset;
                let v = f(&work);
                work[i] = x[i];
                v
            };
            let (p2, p1, m1, m2) = (at(2.0 * h), at(h), at(-h), at(-2.0 * h));
            (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * h)
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct GradientCheck {
    pub analytic: Vec<f64>,
    pub numeric: Vec<f64>,
    /// Largest coordinate error, relative where the gradient is not tiny.
    pub max_error: f64,
}

impl GradientCheck {
    /// Relative error at most `rel`, or absolute error at most `abs` for
    /// coordinates whose gradient is near zero.
    pub fn passes(&self, rel: f64, abs: f64) -> bool {
        self.analytic.iter().zip(&self.numeric).all(|(a, n)| {
            let err = (a - n).abs();
            err <= abs || err <= rel * a.abs().max(n.abs())
        })
    }
}

pub fn check_gradient<F>(f: F, analytic: &[f64], x: &[f64]) -> GradientCheck
where
    F: Fn(&[f64]) -> f64,
{
    let numeric = finite_difference_gradient(f, x);
    let max_error = analytic
        .iter()
        .zip(&numeric)
        .map(|(a, n)| (a - n).abs() / a.abs().max(n.abs()).max(1e-3))
        .fold(0.0, f64::max);
    GradientCheck {
        analytic: analytic.to_vec(),
        numeric,
        max_error,
    }
}

use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use statrs::function::gamma::ln_gamma;

use crate::error::{invalid, Error, Result};
use crate::model::Potential;

/// `log(1 + e^z)` without overflow.
fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

fn check_loss_params(tau: f64, sigma: f64, xi: f64) -> Result<()> {
    if !(tau > 0.0 && tau < 1.0) {
        return Err(invalid(format!("tau must lie in (0, 1), got {tau}")));
    }
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(invalid(format!("sigma must be positive, got {sigma}")));
    }
    if !(xi.is_finite() && xi > 0.0) {
        return Err(invalid(format!("xi must be positive, got {xi}")));
    }
    Ok(())
}

/// `log(ξσ · B(ξ(1−τ), ξτ))`.
fn loss_offset(tau: f64, sigma: f64, xi: f64) -> f64 {
    let (a, b) = (xi * (1.0 - tau), xi * tau);
    (xi * sigma).ln() + ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// Smoothed pinball loss for a response `y` with linear predictor `mu`.
///
/// Tends to the ordinary pinball loss (plus the additive offset) as `xi`
/// goes to zero.
pub fn smoothed_pinball_loss(y: f64, mu: f64, tau: f64, sigma: f64, xi: f64) -> Result<f64> {
    check_loss_params(tau, sigma, xi)?;
    let u = (y - mu) / sigma;
    Ok((tau - 1.0) * u + xi * softplus(u / xi) + loss_offset(tau, sigma, xi))
}

/// Covariate rows and responses.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantileData {
    pub covariates: Vec<Vec<f64>>,
    pub responses: Vec<f64>,
}

impl QuantileData {
    /// Standard normal covariates, `y = xᵀβ* + N(0, 1)` noise.
    pub fn simulate(n: usize, true_beta: &[f64], seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut covariates = Vec::with_capacity(n);
        let mut responses = Vec::with_capacity(n);
        for _ in 0..n {
            let row: Vec<f64> = true_beta.iter().map(|_| StandardNormal.sample(&mut rng)).collect();
            let mu: f64 = row.iter().zip(true_beta).map(|(a, b)| a * b).sum();
            let noise: f64 = StandardNormal.sample(&mut rng);
            responses.push(mu + noise);
            covariates.push(row);
        }
        Self { covariates, responses }
    }

    /// Reads a CSV with header `y,x1,...,xm`.
    pub fn from_csv(path: &Path) -> Result<Self> {
        let mut reader = csv::Reader::from_path(path).map_err(|e| Error::Data(e.to_string()))?;
        let headers = reader.headers().map_err(|e| Error::Data(e.to_string()))?.clone();
        if headers.len() < 2 || &headers[0] != "y" {
            return Err(Error::Data("header must be y,x1,...,xm".into()));
        }
        for (j, h) in headers.iter().enumerate().skip(1) {
            if h != format!("x{j}") {
                return Err(Error::Data(format!("unexpected column {h:?}, expected x{j}")));
            }
        }
        let mut covariates = Vec::new();
        let mut responses = Vec::new();
        for (line, record) in reader.records().enumerate() {
            let record = record.map_err(|e| Error::Data(e.to_string()))?;
            let values: Vec<f64> = record
                .iter()
                .map(|s| s.trim().parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Data(format!("row {}: {e}", line + 2)))?;
            responses.push(values[0]);
            covariates.push(values[1..].to_vec());
        }
        if responses.is_empty() {
            return Err(Error::Data("no data rows".into()));
        }
        Ok(Self { covariates, responses })
    }

    pub fn n_covariates(&self) -> usize {
        self.covariates.first().map_or(0, Vec::len)
    }
}

/// Bayesian quantile regression with smoothed pinball loss and an `L_q`
/// (bridge) prior: `U(β) = Σ_i L(β, x_i, y_i) + λ Σ_j |β_j|^q`.
#[derive(Debug, Clone)]
pub struct QuantileRegressionTarget {
    data: QuantileData,
    tau: f64,
    sigma: f64,
    xi: f64,
    lambda: f64,
    q: f64,
    offset: f64,
}

impl QuantileRegressionTarget {
    pub fn new(data: QuantileData, tau: f64, sigma: f64, xi: f64, lambda: f64, q: f64) -> Result<Self> {
        check_loss_params(tau, sigma, xi)?;
        if data.responses.is_empty() || data.covariates.len() != data.responses.len() {
            return Err(invalid("need at least one (x, y) pair and matching lengths"));
        }
        let m = data.n_covariates();
        if m == 0 || data.covariates.iter().any(|r| r.len() != m) {
            return Err(invalid("covariate rows must share a positive length"));
        }
        if !(lambda.is_finite() && lambda > 0.0) {
            return Err(invalid(format!("lambda must be positive, got {lambda}")));
        }
        if !(q > 1.0 && q <= 2.0) {
            return Err(invalid(format!("q must lie in (1, 2], got {q}")));
        }
        let offset = loss_offset(tau, sigma, xi);
        Ok(Self { data, tau, sigma, xi, lambda, q, offset })
    }

    pub fn data(&self) -> &QuantileData {
        &self.data
    }

    pub fn q(&self) -> f64 {
        self.q
    }
}

impl Potential for QuantileRegressionTarget {
    fn dim(&self) -> usize {
        self.data.n_covariates()
    }

    fn value(&self, beta: &[f64]) -> f64 {
        let mut total = 0.0;
        for (row, &y) in self.data.covariates.iter().zip(&self.data.responses) {
            let mu: f64 = row.iter().zip(beta).map(|(a, b)| a * b).sum();
            let u = (y - mu) / self.sigma;
            total += (self.tau - 1.0) * u + self.xi * softplus(u / self.xi) + self.offset;
        }
        total + self.lambda * beta.iter().map(|b| b.abs().powf(self.q)).sum::<f64>()
    }

    fn gradient_into(&self, beta: &[f64], out: &mut [f64]) {
        for (o, &b) in out.iter_mut().zip(beta) {
            *o = if b == 0.0 {
                0.0
            } else {
                self.lambda * self.q * b.signum() * b.abs().powf(self.q - 1.0)
            };
        }
        for (row, &y) in self.data.covariates.iter().zip(&self.data.responses) {
            let mu: f64 = row.iter().zip(beta).map(|(a, b)| a * b).sum();
            let u = (y - mu) / self.sigma;
            // dL/dmu
            let dmu = -((self.tau - 1.0) + sigmoid(u / self.xi)) / self.sigma;
            for (o, x) in out.iter_mut().zip(row) {
                *o += dmu * x;
            }
        }
    }
}

//! Probes of sampler behaviour: composite-gradient growth, negligible moves,
//! the period law of the exponential-power Hamiltonian, and the usual chain
//! summaries (ESS, ESJD, time to reach a region, step-size tuning).

use rand::RngCore;
use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{invalid, Error, Result};
use crate::hmc::{run_chain, ChainConfig, ChainOutput};
use crate::integrator::{leapfrog_step, leapfrog_trajectory};
use crate::model::{check_dim, KineticEnergy, PhasePoint, Potential};
use crate::stats::{mean, norm, ols_slope, sup_norm};

/// `∇K(∇U(x))`.
pub fn composite_gradient(target: &dyn Potential, kinetic: &dyn KineticEnergy, x: &[f64]) -> Result<Vec<f64>> {
    check_dim(target.dim(), x.len())?;
    check_dim(kinetic.dim(), x.len())?;
    Ok(kinetic.gradient(&target.gradient(x)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthClass {
    Sublinear,
    Linear,
    Superlinear,
}

impl GrowthClass {
    /// Threshold on the fitted slope of `log(‖∇K∘∇U‖/‖x‖)`.
    pub const TOLERANCE: f64 = 0.1;

    pub fn from_slope(slope: f64) -> Self {
        if slope < -Self::TOLERANCE {
            Self::Sublinear
        } else if slope > Self::TOLERANCE {
            Self::Superlinear
        } else {
            Self::Linear
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Sublinear => "sublinear",
            Self::Linear => "linear",
            Self::Superlinear => "superlinear",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthProbeResult {
    pub radii: Vec<f64>,
    /// `‖∇K∘∇U(r·u)‖ / r` for each radius.
    pub ratios: Vec<f64>,
    pub slope: f64,
    pub classification: GrowthClass,
}

/// Fits the growth rate of the composite gradient along the ray `r·direction`.
pub fn growth_probe(
    target: &dyn Potential,
    kinetic: &dyn KineticEnergy,
    direction: &[f64],
    radii: &[f64],
) -> Result<GrowthProbeResult> {
    check_dim(target.dim(), direction.len())?;
    if (norm(direction) - 1.0).abs() > 1e-9 {
        return Err(invalid("direction must be a unit vector"));
    }
    if radii.len() < 4 || radii.iter().any(|&r| !(r.is_finite() && r > 0.0)) {
        return Err(invalid("need at least four positive radii"));
    }
    let (lo, hi) = radii.iter().fold((f64::INFINITY, 0.0f64), |(l, h), &r| (l.min(r), h.max(r)));
    if hi / lo < 1e3 * (1.0 - 1e-12) {
        return Err(invalid("radii must span at least three decades"));
    }
    let mut log_r = Vec::with_capacity(radii.len());
    let mut log_ratio = Vec::with_capacity(radii.len());
    let mut ratios = Vec::with_capacity(radii.len());
    for &r in radii {
        let x: Vec<f64> = direction.iter().map(|u| u * r).collect();
        let c = norm(&composite_gradient(target, kinetic, &x)?);
        if !(c.is_finite() && c > 0.0) {
            return Err(Error::VanishingCompositeGradient(r));
        }
        ratios.push(c / r);
        log_r.push(r.ln());
        log_ratio.push((c / r).ln());
    }
    let slope = ols_slope(&log_r, &log_ratio);
    Ok(GrowthProbeResult { radii: radii.to_vec(), ratios, slope, classification: GrowthClass::from_slope(slope) })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegligibleMoveEstimate {
    /// Fraction of proposals landing in the ball; divergent proposals
    /// count as outside.
    pub proposal: f64,
    pub proposal_std_error: f64,
    /// Fraction of full HMC transitions ending in the ball, rejections
    /// included.
    pub kernel: f64,
    pub kernel_std_error: f64,
}

fn binomial_se(p: f64, n: usize) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

/// Monte Carlo estimate of the probability that one HMC iteration from a
/// fixed `x` stays within distance `delta`.
pub fn negligible_move_probability(
    target: &dyn Potential,
    kinetic: &dyn KineticEnergy,
    x: &[f64],
    delta: f64,
    cfg: &ChainConfig,
    n_trials: usize,
    rng: &mut dyn RngCore,
) -> Result<NegligibleMoveEstimate> {
    if !(delta > 0.0) {
        return Err(invalid("delta must be positive"));
    }
    if n_trials < 100 {
        return Err(invalid("need at least 100 trials"));
    }
    check_dim(target.dim(), x.len())?;
    check_dim(kinetic.dim(), x.len())?;
    cfg.steps.validate()?;
    let (mut inside_prop, mut inside_kernel) = (0usize, 0usize);
    for _ in 0..n_trials {
        let p = kinetic.sample(rng)?;
        let steps = cfg.steps.draw(rng);
        let t = leapfrog_trajectory(target, kinetic, &PhasePoint::new(x.to_vec(), p)?, cfg.step_size, steps)?;
        let dist: f64 = t.end.position().iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        let prop_in = !t.diverged() && dist <= delta;
        inside_prop += usize::from(prop_in);
        let accepted = !t.diverged() && {
            let u: f64 = rand::Rng::random(rng);
            t.delta_h <= 0.0 || u.ln() < -t.delta_h
        };
        inside_kernel += usize::from(!accepted || dist <= delta);
    }
    let n = n_trials as f64;
    let (proposal, kernel) = (inside_prop as f64 / n, inside_kernel as f64 / n);
    Ok(NegligibleMoveEstimate {
        proposal,
        proposal_std_error: binomial_se(proposal, n_trials),
        kernel,
        kernel_std_error: binomial_se(kernel, n_trials),
    })
}

/// Spread of the one-step position `x_ε` over fresh momentum draws at fixed
/// `x`: the square root of the summed coordinate variances.
pub fn one_step_spread(
    target: &dyn Potential,
    kinetic: &dyn KineticEnergy,
    x: &[f64],
    eps: f64,
    n_draws: usize,
    rng: &mut dyn RngCore,
) -> Result<f64> {
    if n_draws < 2 {
        return Err(invalid("need at least two draws"));
    }
    let d = x.len();
    let mut ends = Vec::with_capacity(n_draws);
    for _ in 0..n_draws {
        let p = kinetic.sample(rng)?;
        let s = leapfrog_step(target, kinetic, &PhasePoint::new(x.to_vec(), p)?, eps)?;
        ends.push(s.into_parts().0);
    }
    let total: f64 = (0..d)
        .map(|i| {
            let col: Vec<f64> = ends.iter().map(|e| e[i] - x[i]).collect();
            crate::stats::variance(&col)
        })
        .sum();
    Ok(total.sqrt())
}

fn check_period_params(alpha: f64, beta: f64) -> Result<()> {
    if !(alpha.is_finite() && alpha > 1.0 && beta.is_finite() && beta > 1.0) {
        return Err(invalid(format!("need alpha > 1 and beta > 1, got ({alpha}, {beta})")));
    }
    Ok(())
}

/// `η = (1 − (β−1)(α−1)) / (αβ)`.
pub fn period_exponent(alpha: f64, beta: f64) -> f64 {
    (1.0 - (beta - 1.0) * (alpha - 1.0)) / (alpha * beta)
}

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728,
];
const GAUSS_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Kronrod estimate and error estimate on `[a, b]`.
fn gk15(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = GK_WEIGHTS[7] * fc;
    let mut gauss = GAUSS_WEIGHTS[3] * fc;
    for i in 0..7 {
        let dx = h * GK_NODES[i];
        let s = f(c - dx) + f(c + dx);
        kronrod += GK_WEIGHTS[i] * s;
        if i % 2 == 1 {
            gauss += GAUSS_WEIGHTS[i / 2] * s;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

fn adaptive_gk(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (value, err) = gk15(f, a, b);
    if err <= tol || depth == 0 {
        return value;
    }
    let m = 0.5 * (a + b);
    adaptive_gk(f, a, m, 0.5 * tol, depth - 1) + adaptive_gk(f, m, b, 0.5 * tol, depth - 1)
}

/// `∫₀¹ (1 − y^α)^b dy` with `b = (1−β)/β`.
///
/// The substitution `y = 1 − u^{2β}` turns the endpoint singularity at
/// `y = 1` into a zero of the integrand.
fn period_integral(alpha: f64, beta: f64) -> f64 {
    let b = (1.0 - beta) / beta;
    let k = 2.0 * beta;
    let f = move |u: f64| {
        let t = u.powf(k);
        if t == 0.0 {
            return 0.0;
        }
        // 1 − (1 − t)^α, accurate for small t
        let w = -(alpha * (-t).ln_1p()).exp_m1();
        w.powf(b) * k * u.powf(k - 1.0)
    };
    adaptive_gk(&f, 0.0, 1.0, 1e-14, 40)
}

/// Period of the orbit with energy `e` under `H = |x|^α/α + |p|^β/β`.
pub fn period_length(alpha: f64, beta: f64, e: f64) -> Result<f64> {
    check_period_params(alpha, beta)?;
    if !(e.is_finite() && e > 0.0) {
        return Err(invalid(format!("energy must be positive, got {e}")));
    }
    let b = (1.0 - beta) / beta;
    Ok(4.0 * beta.powf(b) * alpha.powf(1.0 / alpha) * e.powf(b + 1.0 / alpha) * period_integral(alpha, beta))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeriodResult {
    pub alpha: f64,
    pub beta: f64,
    pub energies: Vec<f64>,
    pub periods: Vec<f64>,
    pub fitted_exponent: f64,
    pub analytic_exponent: f64,
}

/// Log-log slope of the period against energy.
pub fn period_exponent_fit(alpha: f64, beta: f64, energies: &[f64]) -> Result<PeriodResult> {
    check_period_params(alpha, beta)?;
    if energies.len() < 4 {
        return Err(invalid("need at least four energies"));
    }
    let (lo, hi) = energies.iter().fold((f64::INFINITY, 0.0f64), |(l, h), &e| (l.min(e), h.max(e)));
    if !(lo > 0.0) || hi / lo < 1e3 * (1.0 - 1e-12) {
        return Err(invalid("energies must be positive and span at least three decades"));
    }
    let periods = energies.iter().map(|&e| period_length(alpha, beta, e)).collect::<Result<Vec<_>>>()?;
    let log_e: Vec<f64> = energies.iter().map(|e| e.ln()).collect();
    let log_p: Vec<f64> = periods.iter().map(|p| p.ln()).collect();
    Ok(PeriodResult {
        alpha,
        beta,
        energies: energies.to_vec(),
        periods,
        fitted_exponent: ols_slope(&log_e, &log_p),
        analytic_exponent: period_exponent(alpha, beta),
    })
}

/// Empirical autocovariances at lags `0..n`, normalised by `n`.
fn autocovariance(series: &[f64]) -> Vec<f64> {
    let n = series.len();
    let m = mean(series);
    let size = (2 * n).next_power_of_two();
    let mut buf: Vec<Complex<f64>> = series.iter().map(|&x| Complex::new(x - m, 0.0)).collect();
    buf.resize(size, Complex::new(0.0, 0.0));
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(size).process(&mut buf);
    for z in &mut buf {
        *z = Complex::new(z.norm_sqr(), 0.0);
    }
    planner.plan_fft_inverse(size).process(&mut buf);
    buf[..n].iter().map(|z| z.re / (size as f64 * n as f64)).collect()
}

/// Effective sample size with Geyer's initial monotone sequence estimator.
pub fn effective_sample_size(series: &[f64]) -> Result<f64> {
    let n = series.len();
    if n < 100 {
        return Err(invalid(format!("need at least 100 values, got {n}")));
    }
    if series.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("series"));
    }
    let acov = autocovariance(series);
    if !(acov[0] > 0.0) {
        return Err(Error::ZeroVariance);
    }
    let rho: Vec<f64> = acov.iter().map(|c| c / acov[0]).collect();
    let mut sum = 0.0;
    let mut prev = f64::INFINITY;
    let mut k = 0;
    while k + 1 < n {
        let pair = rho[k] + rho[k + 1];
        if pair <= 0.0 {
            break;
        }
        let pair = pair.min(prev);
        sum += pair;
        prev = pair;
        k += 2;
    }
    let tau = 2.0 * sum - 1.0;
    Ok((n as f64 / tau).clamp(1.0, n as f64))
}

/// ESS of each coordinate of a chain.
pub fn coordinate_ess(chain: &ChainOutput) -> Result<Vec<f64>> {
    let d = chain.samples.first().map_or(0, Vec::len);
    (0..d).map(|i| effective_sample_size(&chain.coordinate(i))).collect()
}

/// Mean of `‖x^i − x^{i−1}‖²` over consecutive samples.
pub fn squared_jump_mean(samples: &[Vec<f64>]) -> Result<f64> {
    if samples.len() < 2 {
        return Err(invalid("need at least two samples"));
    }
    let total: f64 = samples
        .windows(2)
        .map(|w| w[1].iter().zip(&w[0]).map(|(a, b)| (a - b) * (a - b)).sum::<f64>())
        .sum();
    Ok(total / (samples.len() - 1) as f64)
}

/// Expected squared jump distance of an unthinned chain.
pub fn expected_squared_jump_distance(chain: &ChainOutput) -> Result<f64> {
    if chain.is_thinned() {
        return Err(Error::ThinnedChain(chain.record_every));
    }
    squared_jump_mean(&chain.samples)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Norm {
    Sup,
    Euclidean,
}

impl Norm {
    pub fn of(&self, v: &[f64]) -> f64 {
        match self {
            Self::Sup => sup_norm(v),
            Self::Euclidean => norm(v),
        }
    }
}

/// First iteration whose stored position has norm at most `threshold`, or
/// `None` when the chain never gets there.
pub fn iterations_to_region(chain: &ChainOutput, norm: Norm, threshold: f64) -> Result<Option<usize>> {
    if !(threshold > 0.0) {
        return Err(invalid("threshold must be positive"));
    }
    Ok(chain.samples.iter().position(|s| norm.of(s) <= threshold).map(|i| i * chain.record_every))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TuneSettings {
    pub window: (f64, f64),
    pub pilot_iterations: usize,
}

impl Default for TuneSettings {
    fn default() -> Self {
        Self { window: (0.65, 0.75), pilot_iterations: 2000 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pilot {
    pub step_size: f64,
    pub acceptance_rate: f64,
    pub esjd: f64,
    pub n_divergences: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TuneResult {
    pub step_size: f64,
    /// False when no pilot's acceptance fell inside the window.
    pub window_hit: bool,
    pub pilots: Vec<Pilot>,
}

fn run_pilots(
    target: &dyn Potential,
    kinetic: &dyn KineticEnergy,
    template: &ChainConfig,
    grid: &[f64],
    iterations: usize,
) -> Result<Vec<Pilot>> {
    if grid.is_empty() {
        return Err(invalid("step-size grid is empty"));
    }
    let pilots: Vec<Pilot> = grid
        .par_iter()
        .map(|&eps| {
            let cfg = ChainConfig {
                step_size: eps,
                n_iterations: iterations,
                record_every: 1,
                ..template.clone()
            };
            let out = run_chain(target, kinetic, &cfg)?;
            Ok(Pilot {
                step_size: eps,
                acceptance_rate: out.acceptance_rate,
                esjd: squared_jump_mean(&out.samples)?,
                n_divergences: out.n_divergences,
            })
        })
        .collect::<Result<_>>()?;
    if pilots.iter().all(|p| p.n_divergences == iterations) {
        return Err(Error::AllPilotsDiverged);
    }
    Ok(pilots)
}

/// Largest grid step size whose pilot acceptance lies in the window, else
/// the one with acceptance closest to the window midpoint.
pub fn step_size_grid_tune(
    target: &dyn Potential,
    kinetic: &dyn KineticEnergy,
    template: &ChainConfig,
    grid: &[f64],
    settings: &TuneSettings,
) -> Result<TuneResult> {
    let (lo, hi) = settings.window;
    if !(0.0 < lo && lo < hi && hi < 1.0) {
        return Err(invalid("acceptance window must lie inside (0, 1)"));
    }
    let pilots = run_pilots(target, kinetic, template, grid, settings.pilot_iterations)?;
    let in_window = pilots
        .iter()
        .filter(|p| (lo..=hi).contains(&p.acceptance_rate))
        .map(|p| p.step_size)
        .fold(None, |best: Option<f64>, e| Some(best.map_or(e, |b| b.max(e))));
    let (step_size, window_hit) = match in_window {
        Some(e) => (e, true),
        None => {
            let mid = 0.5 * (lo + hi);
            let best = pilots
                .iter()
                .min_by(|a, b| (a.acceptance_rate - mid).abs().total_cmp(&(b.acceptance_rate - mid).abs()))
                .expect("grid is nonempty");
            (best.step_size, false)
        }
    };
    Ok(TuneResult { step_size, window_hit, pilots })
}

/// Grid step size with the largest pilot ESJD.
pub fn step_size_esjd_tune(
    target: &dyn Potential,
    kinetic: &dyn KineticEnergy,
    template: &ChainConfig,
    grid: &[f64],
    pilot_iterations: usize,
) -> Result<TuneResult> {
    let pilots = run_pilots(target, kinetic, template, grid, pilot_iterations)?;
    let best = pilots.iter().max_by(|a, b| a.esjd.total_cmp(&b.esjd)).expect("grid is nonempty");
    Ok(TuneResult { step_size: best.step_size, window_hit: true, pilots })
}

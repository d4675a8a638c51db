//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use kinetic_hmc::diagnostics::{growth_probe, period_exponent, period_exponent_fit, period_length, GrowthClass};
use kinetic_hmc::gradcheck::check_gradient;
use kinetic_hmc::integrator::{leapfrog_step, leapfrog_trajectory};
use kinetic_hmc::kinetics::ars_sample;
use kinetic_hmc::stats::{ecdf, ks_two_sample, mean, sup_norm, variance};
use kinetic_hmc::targets::{
    wrap_noisy, DoubleWellTarget, ExpPowerTarget, FunnelTarget, GaussianTarget, GinzburgLandauTarget, QuantileData,
    QuantileRegressionTarget,
};
use kinetic_hmc::{
    chain_rng, run_chain, ArsError, ChainConfig, Kinetic, KineticEnergy, KineticFamily, PhasePoint, Potential,
    SpdMatrix, StepsDistribution,
};
use kinetic_hmc_cli::config::{
    GinzburgExperimentConfig, KineticSpec, NegligibleProbeConfig, QuantileExperimentConfig, TradeoffExperimentConfig,
};
use kinetic_hmc_cli::experiments::ginzburg::{run_ginzburg, GinzburgRow};
use kinetic_hmc_cli::experiments::probe::probe_negligible;
use kinetic_hmc_cli::experiments::quantile::run_quantile;
use kinetic_hmc_cli::experiments::tradeoff::run_tradeoff;
use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

type Check = fn() -> Outcome;

fn normal_vec(rng: &mut impl Rng, d: usize, scale: f64) -> Vec<f64> {
    (0..d).map(|_| scale * Distribution::<f64>::sample(&StandardNormal, rng)).collect()
}

/// Counts booleans and reports a majority.
fn majority(votes: &[bool]) -> bool {
    2 * votes.iter().filter(|&&v| v).count() > votes.len()
}

fn tally(votes: &[bool]) -> String {
    format!("{}/{}", votes.iter().filter(|&&v| v).count(), votes.len())
}

fn period_law() -> Outcome {
    let pairs = [(2.0, 2.0), (3.0, 1.5), (4.0, 4.0 / 3.0), (2.0, 3.0), (3.0, 3.0), (1.5, 1.5)];
    let energies = [0.1, 1.0, 10.0, 100.0, 1000.0];
    let mut worst_fit: f64 = 0.0;
    for (a, b) in pairs {
        let fit = match period_exponent_fit(a, b, &energies) {
            Ok(f) => f,
            Err(e) => return Outcome::new(false, format!("fit failed at ({a}, {b}): {e}")),
        };
        worst_fit = worst_fit.max((fit.fitted_exponent - period_exponent(a, b)).abs());
    }
    let mut worst_oracle: f64 = 0.0;
    for a in [2.0, 3.0] {
        for b in [2.0, 3.0] {
            for e in [1.0, 10.0] {
                let want = return_time(a, b, e, 2e-5);
                let got = period_length(a, b, e).unwrap_or(f64::NAN);
                worst_oracle = worst_oracle.max((got - want).abs() / want);
            }
        }
    }
    Outcome::new(
        worst_fit <= 1e-6 && worst_oracle <= 1e-4,
        format!("max |fit - analytic| = {worst_fit:.2e} (<= 1e-6), max rel. oracle gap = {worst_oracle:.2e} (<= 1e-4)"),
    )
}

/// Full period from kick-drift-kick integration of the separable
/// exponential-power Hamiltonian, starting at `x = 0`.
fn return_time(alpha: f64, beta: f64, e: f64, dt: f64) -> f64 {
    let force = |x: f64| -x.signum() * x.abs().powf(alpha - 1.0);
    let velocity = |p: f64| p.signum() * p.abs().powf(beta - 1.0);
    let (mut x, mut p) = (0.0f64, (beta * e).powf(1.0 / beta));
    let (mut t, mut downward_seen) = (0.0, false);
    while t < 1e3 {
        p += 0.5 * dt * force(x);
        let x_new = x + dt * velocity(p);
        p += 0.5 * dt * force(x_new);
        if x > 0.0 && x_new <= 0.0 {
            downward_seen = true;
        }
        if downward_seen && x < 0.0 && x_new >= 0.0 {
            return t + dt * (-x) / (x_new - x);
        }
        x = x_new;
        t += dt;
    }
    f64::NAN
}

fn shipped_kinetics(dim: usize) -> Vec<(Kinetic, f64)> {
    vec![
        (Kinetic::gaussian(dim), 0.0),
        (Kinetic::laplace(dim, 1.0).unwrap(), 0.5),
        (Kinetic::exponential_power(dim, 3.0).unwrap(), 0.0),
        (Kinetic::student_t(dim, 4.0).unwrap(), 0.0),
        (Kinetic::relativistic(dim, 1.0, 1.0).unwrap(), 0.0),
        (Kinetic::relativistic_power(dim, 4.0 / 3.0, 1.0).unwrap(), 0.0),
    ]
}

fn sampler_exactness() -> Outcome {
    let target = GaussianTarget::standard(1);
    let normal = Normal::standard();
    let points = [-1.5, -0.5, 0.0, 0.5, 1.5];
    let want: Vec<f64> = points.iter().map(|&t| normal.cdf(t)).collect();
    let results: Vec<(String, f64, f64, f64)> = shipped_kinetics(1)
        .into_par_iter()
        .enumerate()
        .map(|(i, (k, jitter))| {
            let cfg = ChainConfig {
                step_jitter: jitter,
                ..ChainConfig::new(0.6, StepsDistribution::UniformInt { lo: 1, hi: 5 }, 200_000, 500 + i as u64, vec![0.0])
            };
            let out = run_chain(&target, &k, &cfg).unwrap();
            let xs = out.coordinate(0);
            let gap = points.iter().zip(&want).map(|(&t, &w)| (ecdf(&xs, t) - w).abs()).fold(0.0, f64::max);
            (k.name().to_string(), mean(&xs), variance(&xs), gap)
        })
        .collect();
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, m, v, gap) in &results {
        let ok = m.abs() < 0.05 && *v > 0.9 && *v < 1.1 && *gap <= 0.02;
        pass &= ok;
        parts.push(format!("{name}: mean {m:+.3} var {v:.3} cdf gap {gap:.3}{}", if ok { "" } else { " !" }));
    }
    Outcome::new(pass, parts.join("; "))
}

fn families(dim: usize) -> Vec<Kinetic> {
    let dense = if dim == 1 {
        SpdMatrix::diagonal(vec![1.7]).unwrap()
    } else {
        let rows: Vec<Vec<f64>> =
            (0..dim).map(|i| (0..dim).map(|j| if i == j { 2.0 } else { 0.3 }).collect()).collect();
        SpdMatrix::dense(&rows).unwrap()
    };
    vec![
        Kinetic::gaussian(dim),
        Kinetic::gaussian_with_inverse_mass(dense),
        Kinetic::laplace(dim, 1.0).unwrap(),
        Kinetic::exponential_power(dim, 3.0).unwrap(),
        Kinetic::exponential_power(dim, 4.0 / 3.0).unwrap(),
        Kinetic::student_t(dim, 4.0).unwrap(),
        Kinetic::relativistic(dim, 1.0, 1.0).unwrap(),
        Kinetic::new(
            dim,
            KineticFamily::Relativistic { mass: (0..dim).map(|i| 0.5 + i as f64).collect(), speed: vec![2.0; dim] },
        )
        .unwrap(),
        Kinetic::relativistic_power(dim, 4.0 / 3.0, 1.0).unwrap(),
        Kinetic::relativistic_power(dim, 3.0, 2.5).unwrap(),
    ]
}

fn integrator_matrix() -> Vec<(&'static str, Box<dyn Potential>)> {
    vec![
        ("gaussian", Box::new(GaussianTarget::standard(2))),
        ("exp_power", Box::new(ExpPowerTarget::new(3, 1.5).unwrap())),
        ("double_well", Box::new(DoubleWellTarget::new(1.0, 1.0, 1.0).unwrap())),
        ("funnel", Box::new(FunnelTarget)),
        ("ginzburg", Box::new(GinzburgLandauTarget::new(2, 2.0, 0.1, 0.5).unwrap())),
    ]
}

fn step_jacobian_det(u: &dyn Potential, k: &Kinetic, z: &[f64], eps: f64) -> f64 {
    let d = z.len() / 2;
    let map = |z: &[f64]| {
        let s = leapfrog_step(u, k, &PhasePoint::new(z[..d].to_vec(), z[d..].to_vec()).unwrap(), eps).unwrap();
        let (x, p) = s.into_parts();
        [x, p].concat()
    };
    let h = 1e-6;
    let mut jac = DMatrix::zeros(2 * d, 2 * d);
    let mut work = z.to_vec();
    for j in 0..2 * d {
        work[j] = z[j] + h;
        let plus = map(&work);
        work[j] = z[j] - h;
        let minus = map(&work);
        work[j] = z[j];
        for i in 0..2 * d {
            jac[(i, j)] = (plus[i] - minus[i]) / (2.0 * h);
        }
    }
    jac.determinant()
}

fn integrator_invariants() -> Outcome {
    let mut rng = chain_rng(71, 0);
    let (mut worst_rev, mut worst_det): (f64, f64) = (0.0, 0.0);
    let mut cases = 0;
    for (name, u) in integrator_matrix() {
        let d = u.dim();
        for k in families(d) {
            for eps in [0.01, 0.1] {
                for steps in [1, 5, 20] {
                    let x = normal_vec(&mut rng, d, 1.0);
                    let p = normal_vec(&mut rng, d, 1.0);
                    let s0 = PhasePoint::new(x.clone(), p.clone()).unwrap();
                    let fwd = leapfrog_trajectory(&u, &k, &s0, eps, steps).unwrap();
                    if fwd.diverged() {
                        return Outcome::new(false, format!("{name}/{} diverged", k.name()));
                    }
                    let back = leapfrog_trajectory(&u, &k, &fwd.end.flipped(), eps, steps).unwrap();
                    let dx: Vec<f64> = back.end.position().iter().zip(&x).map(|(a, b)| a - b).collect();
                    let dp: Vec<f64> = back.end.momentum().iter().zip(&p).map(|(a, b)| a + b).collect();
                    worst_rev = worst_rev.max(sup_norm(&dx).max(sup_norm(&dp)));
                    cases += 1;
                }
            }
            if d <= 3 {
                for _ in 0..5 {
                    let x = normal_vec(&mut rng, d, 1.0);
                    // Momenta stay clear of the Laplace kink.
                    let p: Vec<f64> = normal_vec(&mut rng, d, 1.0).into_iter().map(|v| v + 3.0 * v.signum()).collect();
                    let det = step_jacobian_det(&u, &k, &[x, p].concat(), 0.1);
                    worst_det = worst_det.max((det - 1.0).abs());
                }
            }
        }
    }
    let u = GaussianTarget::standard(1);
    let k = Kinetic::gaussian(1);
    let s0 = PhasePoint::new(vec![1.0], vec![0.0]).unwrap();
    let coarse = leapfrog_trajectory(&u, &k, &s0, 0.1, 10).unwrap().delta_h.abs();
    let fine = leapfrog_trajectory(&u, &k, &s0, 0.05, 20).unwrap().delta_h.abs();
    let ratio = coarse / fine;
    Outcome::new(
        worst_rev <= 1e-10 && worst_det <= 1e-5 && (3.5..=4.5).contains(&ratio),
        format!(
            "{cases} reversals, max error {worst_rev:.2e} (<= 1e-10); max |det - 1| {worst_det:.2e} (<= 1e-5); energy ratio {ratio:.3} in [3.5, 4.5]"
        ),
    )
}

fn gradient_correctness() -> Outcome {
    let mut rng = chain_rng(72, 0);
    let data = QuantileData::simulate(20, &[1.0, -1.0], 2017);
    let dense = SpdMatrix::dense(&[vec![2.0, 0.5, 0.1], vec![0.5, 1.5, 0.2], vec![0.1, 0.2, 1.0]]).unwrap();
    let targets: Vec<(&str, Box<dyn Potential>)> = vec![
        ("gaussian", Box::new(GaussianTarget::new(dense))),
        ("exp_power", Box::new(ExpPowerTarget::new(3, 1.5).unwrap())),
        ("double_well", Box::new(DoubleWellTarget::new(1.0, 1.0, 1.0).unwrap())),
        ("funnel", Box::new(FunnelTarget)),
        ("quantile", Box::new(QuantileRegressionTarget::new(data, 0.5, 1.0, 0.01, 1.0, 1.5).unwrap())),
        ("ginzburg", Box::new(GinzburgLandauTarget::new(4, 2.0, 0.1, 0.5).unwrap())),
        ("noisy_gaussian", Box::new(wrap_noisy(GaussianTarget::standard(3), 0.0, chain_rng(73, 0)).unwrap())),
    ];
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for (name, u) in &targets {
        for _ in 0..100 {
            let x = normal_vec(&mut rng, u.dim(), 1.0);
            let check = check_gradient(|x| u.value(x), &u.gradient(&x), &x);
            worst = worst.max(check.max_error);
            if !check.passes(1e-5, 1e-8) {
                failures.push(name.to_string());
                break;
            }
        }
    }
    let kinetics = [
        Kinetic::gaussian_with_inverse_mass(
            SpdMatrix::dense(&[vec![2.0, 0.3, 0.0], vec![0.3, 1.0, 0.1], vec![0.0, 0.1, 0.5]]).unwrap(),
        ),
        Kinetic::laplace(3, 0.7).unwrap(),
        Kinetic::exponential_power(3, 3.0).unwrap(),
        Kinetic::student_t(3, 4.0).unwrap(),
        Kinetic::relativistic(3, 0.8, 1.3).unwrap(),
        Kinetic::relativistic_power(3, 4.0 / 3.0, 2.0).unwrap(),
    ];
    for k in &kinetics {
        for _ in 0..100 {
            let p = normal_vec(&mut rng, 3, 1.5);
            let check = check_gradient(|p| k.value(p), &k.gradient(&p), &p);
            worst = worst.max(check.max_error);
            if !check.passes(1e-5, 1e-8) {
                failures.push(k.name().to_string());
                break;
            }
        }
    }
    Outcome::new(
        failures.is_empty(),
        format!("7 targets and 6 kinetics at 100 points, max rel. error {worst:.2e} (<= 1e-5){}", if failures.is_empty() { String::new() } else { format!(", failed: {failures:?}") }),
    )
}

fn stability_dichotomy() -> Outcome {
    let u = ExpPowerTarget::new(1, 4.0).unwrap();
    let light = Kinetic::exponential_power(1, 4.0 / 3.0).unwrap();
    let gaussian = Kinetic::gaussian(1);
    let mut rng = chain_rng(74, 0);
    let mut worst: f64 = 0.0;
    let mut diverged = false;
    for r in [10.0, 100.0, 1000.0] {
        for _ in 0..50 {
            let p = light.sample(&mut rng).unwrap();
            let t = leapfrog_trajectory(&u, &light, &PhasePoint::new(vec![r], p).unwrap(), 0.1, 10).unwrap();
            diverged |= t.diverged();
            worst = worst.max(t.end.position()[0].abs() / r);
        }
    }
    let p = gaussian.sample(&mut rng).unwrap();
    let g = leapfrog_trajectory(&u, &gaussian, &PhasePoint::new(vec![1000.0], p).unwrap(), 0.1, 10).unwrap();
    Outcome::new(
        !diverged && worst < 2.0 && g.diverged(),
        format!(
            "heavy-tailed momentum: max |x_L|/|x_0| = {worst:.3} (< 2){}; gaussian momentum from 1e3 diverged: {}",
            if diverged { " with divergences" } else { "" },
            g.diverged()
        ),
    )
}

fn negligible_moves() -> Outcome {
    let student = NegligibleProbeConfig::default();
    let gaussian = NegligibleProbeConfig { kinetic: KineticSpec::gaussian(), ..NegligibleProbeConfig::default() };
    let (rows, _) = probe_negligible(&student, None).unwrap();
    let (grows, _) = probe_negligible(&gaussian, None).unwrap();
    let est: Vec<f64> = rows.iter().map(|r| r.proposal).collect();
    let monotone = est.windows(2).all(|w| w[1] >= w[0]);
    let g_far = grows.last().unwrap().proposal;
    Outcome::new(
        monotone && est[2] >= 0.99 && g_far <= 0.01,
        format!("student_t(4) at |x| = 10, 100, 1000: {est:?} (monotone, last >= 0.99); gaussian at 1000: {g_far} (<= 0.01)"),
    )
}

fn momentum_samplers() -> Outcome {
    let n = 100_000;
    let mut rng = chain_rng(75, 0);
    let direct: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
    let mut pvals = Vec::new();
    for k in [Kinetic::exponential_power(1, 2.0).unwrap(), Kinetic::relativistic_power(1, 2.0, 1.0).unwrap()] {
        let draws: Vec<f64> = (0..n).map(|_| k.sample(&mut rng).unwrap()[0]).collect();
        pvals.push((k.name(), ks_two_sample(&draws, &direct).p_value));
    }
    let rejected = matches!(
        ars_sample(|t: f64| 0.5 * t * t, |t: f64| t, (-1.0, 1.0), &mut rng),
        Err(ArsError::NotConcave { .. })
    );
    Outcome::new(
        pvals.iter().all(|(_, p)| *p > 1e-3) && rejected,
        format!("KS p-values {pvals:?} (> 0.001); convex log-density rejected: {rejected}"),
    )
}

fn tradeoff() -> Outcome {
    let cfg = TradeoffExperimentConfig::default();
    let g_label = KineticSpec::gaussian().label();
    let r_label = cfg.kinetics[1].label();
    let mut optimum_votes = Vec::new();
    let mut robust_votes = Vec::new();
    let mut parts = Vec::new();
    for i in 0..5 {
        let run = run_tradeoff(&cfg, Some(cfg.seed + i)).unwrap();
        let (g, r) = (run.curve(&g_label), run.curve(&r_label));
        let max_g = g.iter().map(|p| p.esjd).fold(0.0, f64::max);
        let max_r = r.iter().map(|p| p.esjd).fold(0.0, f64::max);
        optimum_votes.push(max_g > max_r);
        let low = g.iter().rposition(|p| p.acceptance_rate < 0.05);
        match low {
            Some(j) => {
                robust_votes.push(r[j].esjd > g[j].esjd);
                parts.push(format!("max {max_g:.3} vs {max_r:.3}, at eps {:.2}: {:.3} vs {:.3}", g[j].step_size, g[j].esjd, r[j].esjd));
            }
            None => {
                robust_votes.push(false);
                let min_acc = g.iter().map(|p| p.acceptance_rate).fold(1.0, f64::min);
                parts.push(format!("max {max_g:.3} vs {max_r:.3}, no grid eps with gaussian acceptance < 0.05 (min {min_acc:.3})"));
            }
        }
    }
    let ok = |v: &[bool]| v.iter().filter(|&&b| b).count() >= 4;
    Outcome::new(
        ok(&optimum_votes) && ok(&robust_votes),
        format!(
            "gaussian optimum higher in {}, relativistic more robust in {} (each >= 4/5); {}",
            tally(&optimum_votes),
            tally(&robust_votes),
            parts.join("; ")
        ),
    )
}

fn rank(it: Option<usize>) -> f64 {
    it.map_or(f64::INFINITY, |i| i as f64)
}

fn quantile() -> Outcome {
    let cfg = QuantileExperimentConfig::default();
    let run = run_quantile(&cfg, None).unwrap();
    let labels: Vec<String> = cfg.kinetics.iter().map(KineticSpec::label).collect();
    let (exp3, gauss, laplace, student) = (&labels[0], &labels[1], &labels[2], &labels[3]);
    let (mut order, mut stall, mut heavy) = (Vec::new(), Vec::new(), Vec::new());
    let mut parts = Vec::new();
    for r in 0..cfg.replicates {
        let at = |q: f64, k: &str| run.row(q, r, k).expect("row exists");
        let (g, l, s) = (
            rank(at(2.0, gauss).iterations_to_region),
            rank(at(2.0, laplace).iterations_to_region),
            rank(at(2.0, student).iterations_to_region),
        );
        order.push(g < l && l < s);
        let acc = at(2.0, exp3).far_acceptance;
        stall.push(acc < 0.01);
        let (e15, g15) = (rank(at(1.5, exp3).iterations_to_region), rank(at(1.5, gauss).iterations_to_region));
        heavy.push(e15 < g15);
        parts.push(format!("[{g} < {l} < {s}; exp3 acc {acc:.3}; q=1.5 {e15} < {g15}]"));
    }
    Outcome::new(
        majority(&order) && majority(&stall) && majority(&heavy),
        format!(
            "q=2 gaussian < laplace < student_t {}, exp_power(3) stalls {}, q=1.5 exp_power(3) < gaussian {} (majority); {}",
            tally(&order),
            tally(&stall),
            tally(&heavy),
            parts.join(" ")
        ),
    )
}

fn ginzburg() -> Outcome {
    let cfg = GinzburgExperimentConfig::default();
    let run = run_ginzburg(&cfg, None).unwrap();
    let labels: Vec<String> = cfg.kinetics.iter().map(KineticSpec::label).collect();
    let mut ess_votes = Vec::new();
    let mut parts = Vec::new();
    for r in 0..cfg.replicates {
        let rows: Vec<&GinzburgRow> =
            labels.iter().map(|l| run.rows.iter().find(|x| x.replicate == r && &x.kinetic == l).unwrap()).collect();
        let ess: Vec<f64> = rows.iter().map(|x| x.ess_mean).collect();
        let weak = ess.windows(2).all(|w| w[0] >= w[1]);
        let strict = ess.windows(2).filter(|w| w[0] > w[1]).count();
        ess_votes.push(weak && strict >= 2);
        parts.push(format!("{:?}", ess.iter().map(|v| v.round()).collect::<Vec<_>>()));
    }
    let centre: Vec<f64> = run.summary.iter().map(|s| s.iterations_to_centre.unwrap_or(f64::INFINITY)).collect();
    let centre_ok = centre[1] <= centre[2] && centre[2] <= centre[3];
    let gaussian_na = run.summary[0].n_reached == 0;
    Outcome::new(
        majority(&ess_votes) && centre_ok && gaussian_na,
        format!(
            "ESS ranking with >= 2 strict pairs in {} replicates (majority) from mean ESS {}; iterations to centre {:?} for {:?} (ordered: {centre_ok}); gaussian not reached: {gaussian_na}",
            tally(&ess_votes),
            parts.join(" "),
            &centre[1..],
            &labels[1..]
        ),
    )
}

fn growth_classes() -> Outcome {
    let radii = [1.0, 10.0, 100.0, 1e3, 1e4];
    let mut wrong = Vec::new();
    let mut n = 0;
    for alpha in [1.5, 2.0, 3.0] {
        for beta in [1.5, 2.0, 3.0] {
            let u = ExpPowerTarget::new(1, alpha).unwrap();
            let k = Kinetic::exponential_power(1, beta).unwrap();
            let product = (alpha - 1.0) * (beta - 1.0);
            let want = if product == 1.0 {
                GrowthClass::Linear
            } else if product > 1.0 {
                GrowthClass::Superlinear
            } else {
                GrowthClass::Sublinear
            };
            let got = growth_probe(&u, &k, &[1.0], &radii).map(|r| r.classification);
            if got.as_ref().ok() != Some(&want) {
                wrong.push(format!("({alpha}, {beta}): {got:?}"));
            }
            n += 1;
        }
    }
    Outcome::new(wrong.is_empty(), format!("{n} (alpha, beta) combinations, misclassified: {wrong:?}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, Check, Duration); 11] = [
        ("period law", period_law, Duration::from_secs(10)),
        ("sampler exactness", sampler_exactness, Duration::from_secs(120)),
        ("integrator invariants", integrator_invariants, Duration::from_secs(30)),
        ("gradient correctness", gradient_correctness, Duration::from_secs(30)),
        ("stability dichotomy", stability_dichotomy, Duration::from_secs(5)),
        ("negligible moves", negligible_moves, Duration::from_secs(30)),
        ("momentum samplers", momentum_samplers, Duration::from_secs(30)),
        ("step-size trade-off", tradeoff, Duration::from_secs(300)),
        ("quantile regression orderings", quantile, Duration::from_secs(300)),
        ("ginzburg-landau orderings", ginzburg, Duration::from_secs(600)),
        ("composite-gradient classes", growth_classes, Duration::from_secs(5)),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let in_time = elapsed < *limit;
        let pass = outcome.pass && in_time;
        failed += usize::from(!pass);
        println!(
            "{} {:>2} {name}: {} [{:.1}s, limit {}s{}]",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            outcome.detail,
            elapsed.as_secs_f64(),
            limit.as_secs(),
            if in_time { "" } else { ", over time" }
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! Leapfrog integration of `H(x, p) = U(x) + K(p)`.
//!
//! A chained trajectory of `L` steps calls `∇U` exactly `L + 1` times: once
//! at the start and once per step, the last gradient of a step being the
//! first of the next.

use crate::error::{invalid, Error, Result};
use crate::model::{check_dim, KineticEnergy, PhasePoint, Potential};

/// Positions beyond this norm count as divergent.
pub const DIVERGENCE_NORM: f64 = 1e100;

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub initial: PhasePoint,
    /// Last state reached. For a divergent trajectory this is the last
    /// finite state before blow-up.
    pub end: PhasePoint,
    /// `H(end) − H(initial)`, or `+∞` when the trajectory diverged.
    pub delta_h: f64,
    pub steps: usize,
    pub step_size: f64,
    /// One-based index of the step at which the trajectory blew up.
    pub diverged_at: Option<usize>,
}

impl TrajectoryRecord {
    pub fn diverged(&self) -> bool {
        self.diverged_at.is_some()
    }
}

fn check_step_size(eps: f64) -> Result<()> {
    if eps.is_finite() && eps > 0.0 {
        Ok(())
    } else {
        Err(invalid(format!("step size must be positive, got {eps}")))
    }
}

fn is_divergent(x: &[f64], p: &[f64], grad: &[f64]) -> bool {
    let mut ss = 0.0;
    for &v in x {
        if !v.is_finite() {
            return true;
        }
        ss += v * v;
    }
    ss.sqrt() > DIVERGENCE_NORM || p.iter().chain(grad).any(|v| !v.is_finite())
}

/// Reusable buffers for repeated trajectories in dimension `d`.
#[derive(Debug, Clone)]
pub struct Leapfrog {
    x: Vec<f64>,
    p: Vec<f64>,
    grad_u: Vec<f64>,
    grad_k: Vec<f64>,
    // state at the start of the current step, kept so a divergent step
    // can report the last finite state
    x_prev: Vec<f64>,
    p_prev: Vec<f64>,
}

impl Leapfrog {
    pub fn new(dim: usize) -> Self {
        Self {
            x: vec![0.0; dim],
            p: vec![0.0; dim],
            grad_u: vec![0.0; dim],
            grad_k: vec![0.0; dim],
            x_prev: vec![0.0; dim],
            p_prev: vec![0.0; dim],
        }
    }

    /// Runs `steps` leapfrog steps from `(x, p)`.
    ///
    /// On success the end state is left in the workspace; see
    /// [`Leapfrog::position`] and [`Leapfrog::momentum`]. On divergence the
    /// returned error carries the one-based step index and the workspace
    /// holds the last finite state.
    pub fn integrate(
        &mut self,
        target: &dyn Potential,
        kinetic: &dyn KineticEnergy,
        x: &[f64],
        p: &[f64],
        eps: f64,
        steps: usize,
    ) -> Result<()> {
        self.x.copy_from_slice(x);
        self.p.copy_from_slice(p);
        target.gradient_into(&self.x, &mut self.grad_u);
        if is_divergent(&self.x, &self.p, &self.grad_u) {
            return Err(Error::Divergence { step: 1 });
        }
        let half = 0.5 * eps;
        for step in 1..=steps {
            self.x_prev.copy_from_slice(&self.x);
            self.p_prev.copy_from_slice(&self.p);
            for (p, g) in self.p.iter_mut().zip(&self.grad_u) {
                *p -= half * g;
            }
            kinetic.gradient_into(&self.p, &mut self.grad_k);
            for (x, g) in self.x.iter_mut().zip(&self.grad_k) {
                *x += eps * g;
            }
            target.gradient_into(&self.x, &mut self.grad_u);
            for (p, g) in self.p.iter_mut().zip(&self.grad_u) {
                *p -= half * g;
            }
            if is_divergent(&self.x, &self.p, &self.grad_u) {
                self.x.copy_from_slice(&self.x_prev);
                self.p.copy_from_slice(&self.p_prev);
                return Err(Error::Divergence { step });
            }
        }
        Ok(())
    }

    pub fn position(&self) -> &[f64] {
        &self.x
    }

    pub fn momentum(&self) -> &[f64] {
        &self.p
    }
}

/// One leapfrog step of size `eps`.
pub fn leapfrog_step(
    target: &dyn Potential,
    kinetic: &dyn KineticEnergy,
    s: &PhasePoint,
    eps: f64,
) -> Result<PhasePoint> {
    check_step_size(eps)?;
    check_dim(target.dim(), s.dim())?;
    check_dim(kinetic.dim(), s.dim())?;
    let mut lf = Leapfrog::new(s.dim());
    lf.integrate(target, kinetic, s.position(), s.momentum(), eps, 1)?;
    PhasePoint::new(lf.x, lf.p)
}

/// `steps` chained leapfrog steps, with the energy error of the whole
/// trajectory.
///
/// Divergence is not an error here: it is reported through
/// [`TrajectoryRecord::diverged_at`] with `delta_h = +∞`.
pub fn leapfrog_trajectory(
    target: &dyn Potential,
    kinetic: &dyn KineticEnergy,
    s: &PhasePoint,
    eps: f64,
    steps: usize,
) -> Result<TrajectoryRecord> {
    let mut lf = Leapfrog::new(s.dim());
    trajectory_with(&mut lf, target, kinetic, s, eps, steps)
}

pub(crate) fn trajectory_with(
    lf: &mut Leapfrog,
    target: &dyn Potential,
    kinetic: &dyn KineticEnergy,
    s: &PhasePoint,
    eps: f64,
    steps: usize,
) -> Result<TrajectoryRecord> {
    check_step_size(eps)?;
    if steps == 0 {
        return Err(invalid("a trajectory needs at least one step"));
    }
    check_dim(target.dim(), s.dim())?;
    check_dim(kinetic.dim(), s.dim())?;
    let h0 = target.value(s.position()) + kinetic.value(s.momentum());
    if !h0.is_finite() {
        return Err(Error::NonFinite("initial hamiltonian"));
    }
    let (diverged_at, delta_h) = match lf.integrate(target, kinetic, s.position(), s.momentum(), eps, steps) {
        Ok(()) => {
            let h1 = target.value(&lf.x) + kinetic.value(&lf.p);
            if h1.is_finite() {
                (None, h1 - h0)
            } else {
                (Some(steps), f64::INFINITY)
            }
        }
        Err(Error::Divergence { step }) => (Some(step), f64::INFINITY),
        Err(e) => return Err(e),
    };
    Ok(TrajectoryRecord {
        initial: s.clone(),
        end: PhasePoint::new(lf.x.clone(), lf.p.clone())?,
        delta_h,
        steps,
        step_size: eps,
        diverged_at,
    })
}

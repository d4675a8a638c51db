//! Adaptive rejection sampling for univariate log-concave densities,
//! using tangent-line upper hulls and chord lower hulls (squeeze).

use rand::{Rng, RngCore};

use crate::error::ArsError;

const MAX_ABSCISSAE: usize = 64;
const MAX_DOUBLINGS: usize = 60;
const HULL_TOL: f64 = 1e-9;

/// Envelope state for one log-concave density.
///
/// Each draw is exact; rejected proposals are added as new abscissae so the
/// hull tightens as sampling proceeds.
pub struct ArsEnvelope<F, G> {
    logdens: F,
    dlogdens: G,
    xs: Vec<f64>,
    hs: Vec<f64>,
    ds: Vec<f64>,
    // Intersections of consecutive tangents; `z[j]` separates segment j and j + 1.
    z: Vec<f64>,
    cum: Vec<f64>,
    proposals: u64,
    squeeze_accepts: u64,
    refinements: u64,
}

impl<F, G> ArsEnvelope<F, G>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    /// Builds an envelope from two starting abscissae. When the derivative
    /// signs at `init` do not straddle the mode the interval is doubled in
    /// width, up to 60 times.
    pub fn new(logdens: F, dlogdens: G, init: (f64, f64)) -> Result<Self, ArsError> {
        let (mut a, mut b) = if init.0 <= init.1 { init } else { (init.1, init.0) };
        if a == b {
            b = a + 1.0;
        }
        let eval = |t: f64| -> Result<(f64, f64), ArsError> {
            let h = logdens(t);
            let d = dlogdens(t);
            if h.is_finite() && d.is_finite() {
                Ok((h, d))
            } else {
                Err(ArsError::NonFinite(t))
            }
        };
        let (mut ha, mut da) = eval(a)?;
        let (mut hb, mut db) = eval(b)?;
        let mut doublings = 0;
        loop {
            check_pair_concave(a, ha, da, b, hb, db)?;
            if da > 0.0 && db < 0.0 {
                break;
            }
            if doublings == MAX_DOUBLINGS {
                return Err(ArsError::NoBracket { doublings });
            }
            let width = b - a;
            if da <= 0.0 {
                a -= width;
                (ha, da) = eval(a)?;
            }
            if db >= 0.0 {
                b += width;
                (hb, db) = eval(b)?;
            }
            doublings += 1;
        }
        let mut env = Self {
            logdens,
            dlogdens,
            xs: vec![a, b],
            hs: vec![ha, hb],
            ds: vec![da, db],
            z: Vec::new(),
            cum: Vec::new(),
            proposals: 0,
            squeeze_accepts: 0,
            refinements: 0,
        };
        env.rebuild();
        Ok(env)
    }

    pub fn abscissae(&self) -> &[f64] {
        &self.xs
    }

    /// Number of points added to the envelope after construction.
    pub fn refinements(&self) -> u64 {
        self.refinements
    }

    pub fn proposals(&self) -> u64 {
        self.proposals
    }

    /// Proposals accepted by the squeeze test without evaluating the density.
    pub fn squeeze_accepts(&self) -> u64 {
        self.squeeze_accepts
    }

    fn segment_of(&self, t: f64) -> usize {
        self.z.partition_point(|&zj| zj < t)
    }

    /// Piecewise-linear upper hull at `t`.
    pub fn upper_hull(&self, t: f64) -> f64 {
        let j = self.segment_of(t);
        self.hs[j] + (t - self.xs[j]) * self.ds[j]
    }

    /// Chord lower hull at `t`; `-inf` outside the abscissae.
    pub fn lower_hull(&self, t: f64) -> f64 {
        let k = self.xs.len();
        if t < self.xs[0] || t > self.xs[k - 1] {
            return f64::NEG_INFINITY;
        }
        let j = self.xs.partition_point(|&x| x <= t).clamp(1, k - 1) - 1;
        let (x0, x1) = (self.xs[j], self.xs[j + 1]);
        let w = (t - x0) / (x1 - x0);
        (1.0 - w) * self.hs[j] + w * self.hs[j + 1]
    }

    fn rebuild(&mut self) {
        let k = self.xs.len();
        self.z.clear();
        for j in 0..k - 1 {
            let (x0, x1) = (self.xs[j], self.xs[j + 1]);
            let (d0, d1) = (self.ds[j], self.ds[j + 1]);
            let denom = d0 - d1;
            let zj = if denom.abs() <= 1e-12 * (d0.abs() + d1.abs()).max(f64::MIN_POSITIVE) {
                0.5 * (x0 + x1)
            } else {
                (self.hs[j + 1] - self.hs[j] - x1 * d1 + x0 * d0) / denom
            };
            self.z.push(zj.clamp(x0, x1));
        }
        let log_mass: Vec<f64> = (0..k).map(|j| self.segment_log_mass(j)).collect();
        let top = log_mass.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        self.cum.clear();
        let mut acc = 0.0;
        for lm in &log_mass {
            acc += (lm - top).exp();
            self.cum.push(acc);
        }
    }

    fn bounds(&self, j: usize) -> (f64, f64) {
        let lo = if j == 0 { f64::NEG_INFINITY } else { self.z[j - 1] };
        let hi = if j + 1 == self.xs.len() { f64::INFINITY } else { self.z[j] };
        (lo, hi)
    }

    fn segment_log_mass(&self, j: usize) -> f64 {
        let (lo, hi) = self.bounds(j);
        let (h, d, x) = (self.hs[j], self.ds[j], self.xs[j]);
        if hi <= lo {
            return f64::NEG_INFINITY;
        }
        if d == 0.0 {
            return h + (hi - lo).ln();
        }
        if d > 0.0 {
            let u_hi = h + (hi - x) * d;
            u_hi + (-(d * (lo - hi)).exp_m1()).ln() - d.ln()
        } else {
            let u_lo = h + (lo - x) * d;
            u_lo + (-(d * (hi - lo)).exp_m1()).ln() - (-d).ln()
        }
    }

    fn propose(&self, rng: &mut dyn RngCore) -> f64 {
        let total = *self.cum.last().expect("envelope has segments");
        let target = rng.random::<f64>() * total;
        let j = self.cum.partition_point(|&c| c <= target).min(self.cum.len() - 1);
        let (lo, hi) = self.bounds(j);
        let d = self.ds[j];
        let u: f64 = rng.random();
        if d == 0.0 {
            lo + u * (hi - lo)
        } else if d > 0.0 {
            let s = -(u * (-d * (hi - lo)).exp_m1()).ln_1p() / d;
            hi - s
        } else {
            let s = -(u * (d * (hi - lo)).exp_m1()).ln_1p() / -d;
            lo + s
        }
    }

    /// One exact draw.
    pub fn draw(&mut self, rng: &mut dyn RngCore) -> Result<f64, ArsError> {
        loop {
            let t = self.propose(rng);
            self.proposals += 1;
            let upper = self.upper_hull(t);
            let log_w = rng.random::<f64>().ln();
            let lower = self.lower_hull(t);
            if log_w <= lower - upper {
                self.squeeze_accepts += 1;
                return Ok(t);
            }
            let h = (self.logdens)(t);
            let d = (self.dlogdens)(t);
            if !(h.is_finite() && d.is_finite()) {
                return Err(ArsError::NonFinite(t));
            }
            let tol = HULL_TOL * (1.0 + upper.abs());
            if h > upper + tol {
                return Err(ArsError::NotConcave { at: t, excess: h - upper });
            }
            if h < lower - tol {
                return Err(ArsError::NotConcave { at: t, excess: lower - h });
            }
            let accepted = log_w <= h - upper;
            self.insert(t, h, d)?;
            if accepted {
                return Ok(t);
            }
        }
    }

    fn insert(&mut self, t: f64, h: f64, d: f64) -> Result<(), ArsError> {
        if self.xs.len() >= MAX_ABSCISSAE {
            return Ok(());
        }
        let i = self.xs.partition_point(|&x| x < t);
        if (i < self.xs.len() && self.xs[i] == t) || (i > 0 && self.xs[i - 1] == t) {
            return Ok(());
        }
        let tol = HULL_TOL * (1.0 + d.abs());
        if (i > 0 && d > self.ds[i - 1] + tol) || (i < self.xs.len() && d < self.ds[i] - tol) {
            return Err(ArsError::NotConcave { at: t, excess: 0.0 });
        }
        self.xs.insert(i, t);
        self.hs.insert(i, h);
        self.ds.insert(i, d);
        self.refinements += 1;
        self.rebuild();
        Ok(())
    }
}

fn check_pair_concave(a: f64, ha: f64, da: f64, b: f64, hb: f64, db: f64) -> Result<(), ArsError> {
    // Tangent at a must dominate h(b), and vice versa.
    let excess_b = hb - (ha + (b - a) * da);
    let excess_a = ha - (hb + (a - b) * db);
    let tol_b = HULL_TOL * (1.0 + hb.abs());
    let tol_a = HULL_TOL * (1.0 + ha.abs());
    if excess_b > tol_b {
        return Err(ArsError::NotConcave { at: b, excess: excess_b });
    }
    if excess_a > tol_a {
        return Err(ArsError::NotConcave { at: a, excess: excess_a });
    }
    if da < db - HULL_TOL * (1.0 + da.abs().max(db.abs())) {
        return Err(ArsError::NotConcave { at: b, excess: db - da });
    }
    Ok(())
}

/// Single exact draw from the density proportional to `exp(logdens)`.
pub fn ars_sample<F, G>(
    logdens: F,
    dlogdens: G,
    init: (f64, f64),
    rng: &mut dyn RngCore,
) -> Result<f64, ArsError>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    ArsEnvelope::new(logdens, dlogdens, init)?.draw(rng)
}

use kinetic_hmc::diagnostics::period_length;

/// Full period of `H = |x|^α/α + |p|^β/β` at energy `e`, measured by
/// kick-drift-kick integration from `x = 0` until the second upward zero
/// crossing.
fn return_time(alpha: f64, beta: f64, e: f64, dt: f64) -> f64 {
    let force = |x: f64| -x.signum() * x.abs().powf(alpha - 1.0);
    let velocity = |p: f64| p.signum() * p.abs().powf(beta - 1.0);
    let (mut x, mut p) = (0.0f64, (beta * e).powf(1.0 / beta));
    let mut t = 0.0;
    let mut downward_seen = false;
    loop {
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
        assert!(t < 1e3, "no return");
    }
}

#[test]
fn quadrature_matches_return_time() {
    for alpha in [2.0, 3.0] {
        for beta in [2.0, 3.0] {
            for e in [1.0, 10.0] {
                let want = return_time(alpha, beta, e, 2e-5);
                let got = period_length(alpha, beta, e).unwrap();
                let rel = (got - want).abs() / want;
                assert!(rel <= 1e-4, "({alpha}, {beta}, {e}): quadrature {got}, return time {want}");
            }
        }
    }
}

#[test]
fn harmonic_return_time_is_two_pi() {
    let t = return_time(2.0, 2.0, 3.0, 1e-5);
    assert!((t - std::f64::consts::TAU).abs() < 1e-6, "{t}");
}

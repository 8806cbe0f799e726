use serde::{Deserialize, Serialize};

use super::{ode_rhs, DiseaseParams, OdeState, VaRatePolicy};
use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

/// Settings for the adaptive Dormand-Prince integrator.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default)]
pub struct IntegrateOptions {
    pub t_max: f64,
    pub rtol: f64,
    pub atol: f64,
    /// Equilibrium is declared once the max-norm of the vector field stays below this...
    pub eq_tol: f64,
    /// ...for this many consecutive accepted steps, or is below it when `t_max` is reached.
    pub eq_patience: usize,
    /// Alternative test: the state stays within `eq_tol * eq_window` of an anchor for this long.
    pub eq_window: f64,
    pub max_steps: usize,
    /// Keep every k-th accepted step in the returned path (the final point is always kept).
    pub record_every: usize,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        Self {
            t_max: 1.0e5,
            rtol: 1e-9,
            atol: 1e-12,
            eq_tol: 1e-8,
            eq_patience: 100,
            eq_window: 20.0,
            max_steps: 2_000_000,
            record_every: 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Trajectory<T> {
    pub times: Vec<T>,
    pub states: Vec<OdeState<T>>,
    /// Final state once the equilibrium test passed, `None` if `t_max` was hit first.
    pub limit: Option<OdeState<T>>,
}

impl<T: Scalar> Trajectory<T> {
    pub fn last(&self) -> &OdeState<T> {
        self.states.last().expect("trajectory holds the initial state")
    }
}

// Dormand-Prince 5(4) tableau.
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

fn axpy<T: Scalar>(x: &OdeState<T>, terms: &[(T, OdeState<T>)]) -> OdeState<T> {
    let mut y = *x;
    for (w, k) in terms {
        y.theta = y.theta + *w * k.theta;
        y.psi = y.psi + *w * k.psi;
        y.eta = y.eta + *w * k.eta;
    }
    y
}

/// Integrates the mean-field ODE from `x0` until equilibrium or `opts.t_max`.
pub fn integrate<T: Scalar>(
    x0: OdeState<T>,
    disease: &DiseaseParams<T>,
    nu: &VaRatePolicy<T>,
    beta: T,
    opts: &IntegrateOptions,
) -> Result<Trajectory<T>> {
    disease.validate()?;
    nu.validate()?;
    if !(beta > T::zero() && beta.is_finite()) {
        return Err(invalid("beta must be positive"));
    }
    if !x0.in_simplex(T::lit(1e-12)) || x0.eta <= T::zero() {
        return Err(invalid("initial state must lie in the simplex with eta > 0"));
    }
    let f = |x: &OdeState<T>| ode_rhs(x, disease, nu, beta);
    let rtol = T::lit(opts.rtol);
    let atol = T::lit(opts.atol);
    let t_max = T::lit(opts.t_max);
    let eq_tol = T::lit(opts.eq_tol);
    let every = opts.record_every.max(1);

    let mut t = T::zero();
    let mut x = x0;
    let mut k1 = f(&x);
    let mut h = T::lit(1e-3);
    let mut times = vec![t];
    let mut states = vec![x];
    let mut quiet = 0usize;
    let window = T::lit(opts.eq_window);
    let mut anchor = (t, x);
    let mut accepted = 0usize;

    for _ in 0..opts.max_steps {
        if t >= t_max {
            break;
        }
        if t + h > t_max {
            h = t_max - t;
        }
        let mut ks = [k1; 7];
        for s in 1..7 {
            let terms: Vec<(T, OdeState<T>)> =
                (0..s).map(|j| (h * T::lit(A[s][j]), ks[j])).collect();
            ks[s] = f(&axpy(&x, &terms));
        }
        let y5 = axpy(&x, &(0..7).map(|j| (h * T::lit(B5[j]), ks[j])).collect::<Vec<_>>());
        let y4 = axpy(&x, &(0..7).map(|j| (h * T::lit(B4[j]), ks[j])).collect::<Vec<_>>());
        let comp = |a: T, b: T, e: T| {
            let sc = atol + rtol * a.abs().max(b.abs());
            (e / sc) * (e / sc)
        };
        let err = ((comp(x.theta, y5.theta, y5.theta - y4.theta)
            + comp(x.psi, y5.psi, y5.psi - y4.psi)
            + comp(x.eta, y5.eta, y5.eta - y4.eta))
            / T::lit(3.0))
        .sqrt();
        if !err.is_finite() {
            h = h * T::lit(0.1);
            if h < T::lit(1e-14) {
                return Err(Error::NonConvergence(format!("step underflow at t={t}")));
            }
            continue;
        }
        if err <= T::one() {
            t = t + h;
            x = y5;
            k1 = ks[6];
            accepted += 1;
            if accepted % every == 0 {
                times.push(t);
                states.push(x);
            }
            if k1.max_norm() < eq_tol {
                quiet += 1;
                if quiet >= opts.eq_patience {
                    if accepted % every != 0 {
                        times.push(t);
                        states.push(x);
                    }
                    return Ok(Trajectory { times, states, limit: Some(x) });
                }
            } else {
                quiet = 0;
            }
            // Stiff decay makes the explicit stages chatter around the fixed point, so also
            // accept a path that stays in a small ball for a whole window.
            if x.max_abs_diff(&anchor.1) > eq_tol * window {
                anchor = (t, x);
            } else if t - anchor.0 >= window {
                if accepted % every != 0 {
                    times.push(t);
                    states.push(x);
                }
                return Ok(Trajectory { times, states, limit: Some(x) });
            }
        }
        let fac = if err == T::zero() {
            T::lit(5.0)
        } else {
            (T::lit(0.9) * err.powf(T::lit(-0.2))).max(T::lit(0.2)).min(T::lit(5.0))
        };
        h = h * fac;
        if h < T::lit(1e-14) {
            return Err(Error::NonConvergence(format!("step underflow at t={t}")));
        }
    }
    if *times.last().unwrap() != t {
        times.push(t);
        states.push(x);
    }
    // Large steps can reach t_max before the patience count fills up.
    let limit = (quiet > 0 && t >= t_max).then_some(x);
    Ok(Trajectory { times, states, limit })
}

//! Runge-Kutta-Merson time stepping with automatic step-size control.
//!
//! Stages (classical Merson coefficients):
//!
//! ```text
//! k1 = f(t,        y)
//! k2 = f(t + h/3,  y + h k1/3)
//! k3 = f(t + h/3,  y + h (k1 + k2)/6)
//! k4 = f(t + h/2,  y + h (k1 + 3 k3)/8)
//! k5 = f(t + h,    y + h (k1 - 3 k3 + 4 k4)/2)
//! y' = y + h (k1 + 4 k4 + k5)/6
//! err = h max_i |k1 - 9/2 k3 + 4 k4 - 1/2 k5|_i / 5
//! ```

use crate::error::{Error, Result};

/// ODE unknown: flattened coordinates and the current time.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationState {
    pub t: f64,
    pub y: Vec<f64>,
}

impl SimulationState {
    pub fn new(t: f64, y: Vec<f64>) -> Self {
        SimulationState { t, y }
    }
}

/// Adaptive step-size control settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl {
    pub tolerance: f64,
    pub initial_dt: f64,
    pub dt_min: f64,
    pub dt_max: f64,
    pub safety_factor: f64,
}

impl Default for StepControl {
    fn default() -> Self {
        StepControl {
            tolerance: 1e-3,
            initial_dt: 1e-4,
            dt_min: 1e-12,
            dt_max: 0.1,
            safety_factor: 0.8,
        }
    }
}

impl StepControl {
    /// Default control with the initial step `4 h^2`, `h = 1 / max_nodes`.
    pub fn for_resolution(max_nodes: usize) -> Self {
        let h = 1.0 / max_nodes as f64;
        StepControl {
            initial_dt: 4.0 * h * h,
            ..StepControl::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.tolerance > 0.0
            && self.dt_min > 0.0
            && self.dt_min <= self.initial_dt
            && self.initial_dt <= self.dt_max
            && self.safety_factor > 0.0
            && [self.tolerance, self.initial_dt, self.dt_min, self.dt_max, self.safety_factor]
                .iter()
                .all(|v| v.is_finite());
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "step control needs tolerance > 0 and 0 < dt_min <= dt_init <= dt_max, got {self:?}"
            )))
        }
    }
}

/// Information passed to the observer after each accepted step.
#[derive(Debug)]
pub struct AcceptedStep<'a> {
    pub t: f64,
    pub y: &'a [f64],
    pub dt: f64,
    pub error: f64,
}

/// Counters from an [`integrate`] call.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
}

fn check_finite(v: &[f64]) -> Result<()> {
    match v.iter().position(|x| !x.is_finite()) {
        Some(index) => Err(Error::NonFiniteDerivative { index }),
        None => Ok(()),
    }
}

fn combine(y: &[f64], h: f64, terms: &[(f64, &[f64])]) -> Vec<f64> {
    let mut out = y.to_vec();
    for (c, k) in terms {
        let s = h * c;
        for (o, ki) in out.iter_mut().zip(k.iter()) {
            *o += s * ki;
        }
    }
    out
}

/// One Merson step of size `dt`. Returns the fourth-order candidate and the
/// max-norm error estimate.
pub fn rkm_step<F>(state: &SimulationState, dt: f64, rhs: &mut F) -> Result<(SimulationState, f64)>
where
    F: FnMut(f64, &[f64]) -> Result<Vec<f64>>,
{
    let (t, y) = (state.t, &state.y[..]);
    let mut eval = |tt: f64, yy: &[f64]| -> Result<Vec<f64>> {
        let k = rhs(tt, yy)?;
        check_finite(&k)?;
        Ok(k)
    };
    let k1 = eval(t, y)?;
    let k2 = eval(t + dt / 3.0, &combine(y, dt, &[(1.0 / 3.0, &k1)]))?;
    let k3 = eval(t + dt / 3.0, &combine(y, dt, &[(1.0 / 6.0, &k1), (1.0 / 6.0, &k2)]))?;
    let k4 = eval(t + dt / 2.0, &combine(y, dt, &[(1.0 / 8.0, &k1), (3.0 / 8.0, &k3)]))?;
    let k5 = eval(
        t + dt,
        &combine(y, dt, &[(0.5, &k1), (-1.5, &k3), (2.0, &k4)]),
    )?;

    let candidate = combine(y, dt, &[(1.0 / 6.0, &k1), (4.0 / 6.0, &k4), (1.0 / 6.0, &k5)]);
    let error = (0..y.len())
        .map(|i| (k1[i] - 4.5 * k3[i] + 4.0 * k4[i] - 0.5 * k5[i]).abs())
        .fold(0.0, f64::max)
        * dt
        / 5.0;
    Ok((SimulationState::new(t + dt, candidate), error))
}

/// Integrates from `state0.t` to `t_end` with adaptive steps.
///
/// A step is accepted when its error estimate is at most the tolerance. On
/// rejection the step is halved; on acceptance it grows by
/// `min(2, safety (tol/err)^{1/5})`, capped by `dt_max`. The last step is
/// clipped so the result lands on `t_end`. `observer` sees every accepted step.
pub fn integrate<F, O>(
    state0: &SimulationState,
    t_end: f64,
    control: &StepControl,
    rhs: &mut F,
    mut observer: O,
) -> Result<(SimulationState, StepStats)>
where
    F: FnMut(f64, &[f64]) -> Result<Vec<f64>>,
    O: FnMut(&AcceptedStep<'_>),
{
    control.validate()?;
    let mut stats = StepStats::default();
    if t_end <= state0.t {
        return Ok((state0.clone(), stats));
    }
    let mut state = state0.clone();
    let mut dt = control.initial_dt;
    loop {
        if dt < control.dt_min {
            return Err(Error::StepSizeUnderflow {
                t: state.t,
                dt,
                max_curvature: None,
            });
        }
        let last = state.t + dt >= t_end;
        let h = if last { t_end - state.t } else { dt };
        let (mut candidate, err) = rkm_step(&state, h, rhs)?;
        if err <= control.tolerance {
            stats.accepted += 1;
            if last {
                candidate.t = t_end;
            }
            state = candidate;
            observer(&AcceptedStep {
                t: state.t,
                y: &state.y,
                dt: h,
                error: err,
            });
            if last {
                return Ok((state, stats));
            }
            let grow = if err > 0.0 {
                (control.safety_factor * (control.tolerance / err).powf(0.2)).min(2.0)
            } else {
                2.0
            };
            dt = (dt * grow).min(control.dt_max);
        } else {
            stats.rejected += 1;
            dt = h / 2.0;
        }
    }
}

/// Fixed-step Merson integration, ignoring the error estimate.
pub fn integrate_fixed<F>(state0: &SimulationState, t_end: f64, steps: usize, rhs: &mut F) -> Result<SimulationState>
where
    F: FnMut(f64, &[f64]) -> Result<Vec<f64>>,
{
    let dt = (t_end - state0.t) / steps as f64;
    let mut state = state0.clone();
    for _ in 0..steps {
        state = rkm_step(&state, dt, rhs)?.0;
    }
    Ok(state)
}

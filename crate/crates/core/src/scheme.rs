//! Flowing finite-volume right-hand side for one curve.
//!
//! Integrating the flow over the dual volume around node `k` gives
//!
//! ```text
//! dX_k/dt (d_k + d_{k+1})/2 = a_k ((X_{k+1}-X_k)/d_{k+1} - (X_k-X_{k-1})/d_k)
//!                           + b_k (d_k + d_{k+1})/2 kappa_k (T_k x N_k)
//!                           + F_k (d_k + d_{k+1})/2
//!                           + alpha_k (X_{k+1} - X_{k-1})/2
//! ```

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::{CurveGeometry, DiscreteCurve, Vec3};

pub type CurveVelocity = Vec<Vec3>;

/// Coefficient as a function of position and tangent.
pub type CoefficientFn = Arc<dyn Fn(&Vec3, &Vec3) -> f64 + Send + Sync>;

/// A mobility coefficient, constant or sampled at `(X_k, T_k)`.
#[derive(Clone)]
pub enum Coefficient {
    Constant(f64),
    Field(CoefficientFn),
}

impl Coefficient {
    pub fn at(&self, x: &Vec3, t: &Vec3) -> f64 {
        match self {
            Coefficient::Constant(v) => *v,
            Coefficient::Field(f) => f(x, t),
        }
    }

    pub fn as_constant(&self) -> Option<f64> {
        match self {
            Coefficient::Constant(v) => Some(*v),
            Coefficient::Field(_) => None,
        }
    }
}

impl fmt::Debug for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Constant(v) => write!(f, "Constant({v})"),
            Coefficient::Field(_) => write!(f, "Field(..)"),
        }
    }
}

impl From<f64> for Coefficient {
    fn from(v: f64) -> Self {
        Coefficient::Constant(v)
    }
}

/// Normal (`a`) and binormal (`b`) coefficients of one curve.
#[derive(Debug, Clone)]
pub struct FlowParams {
    pub a: Coefficient,
    pub b: Coefficient,
}

impl Default for FlowParams {
    fn default() -> Self {
        FlowParams::constant(1.0, 0.0)
    }
}

impl FlowParams {
    pub fn constant(a: f64, b: f64) -> Self {
        FlowParams {
            a: Coefficient::Constant(a),
            b: Coefficient::Constant(b),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(a) = self.a.as_constant() {
            if !(a >= 0.0 && a.is_finite()) {
                return Err(Error::InvalidParameter(format!("a must be finite and >= 0, got {a}")));
            }
        }
        if let Some(b) = self.b.as_constant() {
            if !b.is_finite() {
                return Err(Error::InvalidParameter(format!("b must be finite, got {b}")));
            }
        }
        Ok(())
    }

    /// `a_k` sampled at every node.
    pub fn sample_a(&self, curve: &DiscreteCurve, geom: &CurveGeometry) -> Vec<f64> {
        sample(&self.a, curve, geom)
    }

    pub fn sample_b(&self, curve: &DiscreteCurve, geom: &CurveGeometry) -> Vec<f64> {
        sample(&self.b, curve, geom)
    }
}

fn sample(c: &Coefficient, curve: &DiscreteCurve, geom: &CurveGeometry) -> Vec<f64> {
    match c {
        Coefficient::Constant(v) => vec![*v; curve.len()],
        Coefficient::Field(f) => curve
            .nodes()
            .iter()
            .zip(&geom.tangent)
            .map(|(x, t)| f(x, t))
            .collect(),
    }
}

/// Node velocities of the semi-discrete scheme. `a` and `b` are the sampled
/// coefficients, `forces` the external force and `alpha` the tangential
/// velocity at each node.
pub fn assemble_rhs(
    curve: &DiscreteCurve,
    geom: &CurveGeometry,
    a: &[f64],
    b: &[f64],
    forces: &[Vec3],
    alpha: &[f64],
) -> CurveVelocity {
    let m = curve.len();
    debug_assert!(geom.len() == m && a.len() == m && b.len() == m);
    debug_assert!(forces.len() == m && alpha.len() == m);
    (0..m)
        .map(|k| {
            let dual = geom.dual_lengths[k];
            let central = 0.5 * (curve.node(k as isize + 1) - curve.node(k as isize - 1));
            let flux = a[k] * geom.chord_turn[k]
                + b[k] * dual * geom.binormal_term(k)
                + forces[k] * dual
                + alpha[k] * central;
            flux / dual
        })
        .collect()
}

/// `dL/dt` of the polygon under node velocities `velocity`.
pub fn length_rate(curve: &DiscreteCurve, velocity: &[Vec3]) -> f64 {
    let m = curve.len();
    (0..m)
        .map(|k| {
            let seg = curve.segment(k);
            let dv = velocity[k] - velocity[(k + m - 1) % m];
            seg.dot(&dv) / seg.norm()
        })
        .sum()
}

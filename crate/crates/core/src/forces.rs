//! Regularized Biot-Savart interaction between polygonal curves.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{point_curve_distance, DiscreteCurve, Vec3};

/// Relative distance (in units of the source length) below which the
/// unregularized kernel is refused.
pub const SINGULAR_DISTANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiotSavartParams {
    /// Scale applied to the assembled interaction.
    pub delta: f64,
    /// Mollification length; zero gives the plain kernel.
    pub epsilon: f64,
}

impl Default for BiotSavartParams {
    fn default() -> Self {
        BiotSavartParams {
            delta: 0.1,
            epsilon: 1e-3,
        }
    }
}

impl BiotSavartParams {
    pub fn new(delta: f64, epsilon: f64) -> Result<Self> {
        let p = BiotSavartParams { delta, epsilon };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.delta.is_finite() {
            return Err(Error::InvalidParameter(format!("delta must be finite, got {}", self.delta)));
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must be finite and non-negative, got {}",
                self.epsilon
            )));
        }
        Ok(())
    }
}

/// Per-node external force, one vector list per curve.
#[derive(Debug, Clone, PartialEq)]
pub struct ForceField {
    pub per_curve: Vec<Vec<Vec3>>,
}

impl ForceField {
    pub fn zeros(curves: &[DiscreteCurve]) -> Self {
        ForceField {
            per_curve: curves.iter().map(|c| vec![Vec3::zeros(); c.len()]).collect(),
        }
    }

    pub fn curve(&self, i: usize) -> &[Vec3] {
        &self.per_curve[i]
    }

    pub fn max_magnitude(&self) -> f64 {
        self.per_curve
            .iter()
            .flatten()
            .map(|f| f.norm())
            .fold(0.0, f64::max)
    }
}

/// Midpoint-rule Biot-Savart integral of the polygonal `source` at `x`:
/// `sum_j (x - m_j) x (X_j - X_{j-1}) / (|x - m_j|^2 + eps^2)^{3/2}`.
///
/// The result is not scaled by `delta`.
pub fn biot_savart_at_point(x: &Vec3, source: &DiscreteCurve, epsilon: f64) -> Result<Vec3> {
    if epsilon == 0.0 {
        let dist = point_curve_distance(x, source);
        if dist < SINGULAR_DISTANCE * source.total_length() {
            return Err(Error::SingularEvaluation {
                distance: dist,
                target_curve: None,
                source_curve: None,
                node: None,
            });
        }
    }
    Ok(biot_savart_unchecked(x, source, epsilon))
}

pub(crate) fn biot_savart_unchecked(x: &Vec3, source: &DiscreteCurve, epsilon: f64) -> Vec3 {
    let eps2 = epsilon * epsilon;
    let mut acc = Vec3::zeros();
    for j in 0..source.len() {
        let r = x - source.midpoint(j);
        let denom = (r.norm_squared() + eps2).powf(1.5);
        acc += r.cross(&source.segment(j)) / denom;
    }
    acc
}

/// Force on every node of every curve: `delta` times the Biot-Savart field of
/// all the other curves. A curve does not act on itself.
pub fn assemble_forces(curves: &[DiscreteCurve], params: &BiotSavartParams) -> Result<ForceField> {
    if curves.is_empty() {
        return Err(Error::InvalidParameter("force assembly needs at least one curve".into()));
    }
    if curves.len() == 1 || params.delta == 0.0 {
        return Ok(ForceField::zeros(curves));
    }
    let per_curve = curves
        .iter()
        .enumerate()
        .map(|(i, target)| {
            target
                .nodes()
                .par_iter()
                .enumerate()
                .map(|(k, x)| {
                    let mut f = Vec3::zeros();
                    for (j, source) in curves.iter().enumerate() {
                        if j == i {
                            continue;
                        }
                        let field = biot_savart_at_point(x, source, params.epsilon).map_err(|e| match e {
                            Error::SingularEvaluation { distance, .. } => Error::SingularEvaluation {
                                distance,
                                target_curve: Some(i),
                                source_curve: Some(j),
                                node: Some(k),
                            },
                            other => other,
                        })?;
                        f += field;
                    }
                    Ok(params.delta * f)
                })
                .collect::<Result<Vec<Vec3>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ForceField { per_curve })
}

//! Tangential velocity that keeps the relative local length `g / L` of a curve
//! constant in time.
//!
//! The total tangential speed solves `d v_T / ds = kappa v_N - <kappa v_N>`,
//! where `<.>` is the length-weighted mean. It is integrated node to node with
//! the trapezoidal rule, and the free constant is fixed by requiring
//! `sum_j alpha_j d_j = 0`.

use crate::geometry::{CurveGeometry, Vec3};

/// Per-node tangential velocity `alpha_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentialVelocities {
    pub alpha: Vec<f64>,
}

impl TangentialVelocities {
    pub fn zeros(m: usize) -> Self {
        TangentialVelocities { alpha: vec![0.0; m] }
    }

    /// `sum_j alpha_j d_j`, zero up to round-off for redistributed velocities.
    pub fn weighted_sum(&self, geom: &CurveGeometry) -> f64 {
        self.alpha
            .iter()
            .zip(&geom.seg_lengths)
            .map(|(a, d)| a * d)
            .sum()
    }
}

/// Normal speed `v_N,k = a_k kappa_k + F_k . N_k`. The binormal motion has no
/// component along `N` and does not enter. `F_k . N_k` is dropped where the
/// normal is undefined.
pub fn normal_speed(geom: &CurveGeometry, a: &[f64], forces: &[Vec3]) -> Vec<f64> {
    (0..geom.len())
        .map(|k| {
            let along_normal = geom.normal[k].map_or(0.0, |n| forces[k].dot(&n));
            a[k] * geom.curvature[k] + along_normal
        })
        .collect()
}

/// Length-preserving tangential velocity for the normal speeds `normal_speed`
/// and external forces `forces` (whose tangential part is subtracted, since
/// the force already moves nodes along `T`).
pub fn compute_tangential(
    geom: &CurveGeometry,
    normal_speed: &[f64],
    forces: &[Vec3],
) -> TangentialVelocities {
    let m = geom.len();
    debug_assert_eq!(normal_speed.len(), m);
    debug_assert_eq!(forces.len(), m);

    let source: Vec<f64> = (0..m)
        .map(|k| geom.curvature[k] * normal_speed[k])
        .collect();
    let mean = source
        .iter()
        .zip(&geom.dual_lengths)
        .map(|(f, w)| f * w)
        .sum::<f64>()
        / geom.total_length;

    // Trapezoid over segment k, which joins node k-1 to node k.
    let mut alpha = Vec::with_capacity(m);
    let mut v_t = 0.0;
    alpha.push(v_t - forces[0].dot(&geom.tangent[0]));
    for k in 1..m {
        v_t += 0.5 * geom.seg_lengths[k] * ((source[k - 1] - mean) + (source[k] - mean));
        alpha.push(v_t - forces[k].dot(&geom.tangent[k]));
    }

    let shift = -alpha
        .iter()
        .zip(&geom.seg_lengths)
        .map(|(a, d)| a * d)
        .sum::<f64>()
        / geom.total_length;
    for a in &mut alpha {
        *a += shift;
    }
    TangentialVelocities { alpha }
}

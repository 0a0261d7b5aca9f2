//! Gauss linking number of two closed polygons.
//!
//! Two routes are provided: the symmetric double integral of
//! `det(dX1, dX2, X1 - X2) / |X1 - X2|^3`, and the line integral of the
//! Biot-Savart field of one curve along the other. Both use one midpoint per
//! segment.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::forces::biot_savart_unchecked;
use crate::geometry::{curve_curve_distance, DiscreteCurve};

/// Relative distance (in units of `L1 + L2`) below which the quadrature is refused.
pub const MIN_RELATIVE_DISTANCE: f64 = 1e-9;

/// Residual above which the integer snap is considered unreliable.
pub const RESIDUAL_WARNING: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkingResult {
    pub raw_value: f64,
    pub rounded: i64,
    pub residual: f64,
}

impl LinkingResult {
    pub fn from_raw(raw_value: f64) -> Self {
        let rounded = raw_value.round();
        LinkingResult {
            raw_value,
            rounded: rounded as i64,
            residual: (raw_value - rounded).abs(),
        }
    }

    /// The quadrature is too coarse to trust the rounded value.
    pub fn is_unreliable(&self) -> bool {
        self.residual >= RESIDUAL_WARNING
    }
}

fn check_separation(c1: &DiscreteCurve, c2: &DiscreteCurve) -> Result<()> {
    let distance = curve_curve_distance(c1, c2);
    if distance < MIN_RELATIVE_DISTANCE * (c1.total_length() + c2.total_length()) {
        return Err(Error::CurvesTooClose { distance });
    }
    Ok(())
}

/// Double midpoint sum `(1/4pi) sum_{j,l} det(D1_j, D2_l, m1_j - m2_l) / |m1_j - m2_l|^3`.
pub fn linking_number_gauss(c1: &DiscreteCurve, c2: &DiscreteCurve) -> Result<LinkingResult> {
    check_separation(c1, c2)?;
    let rows: Vec<f64> = (0..c1.len())
        .into_par_iter()
        .map(|j| {
            let d1 = c1.segment(j);
            let m1 = c1.midpoint(j);
            let mut acc = 0.0;
            for l in 0..c2.len() {
                let r = m1 - c2.midpoint(l);
                let det = d1.cross(&c2.segment(l)).dot(&r);
                acc += det / r.norm().powi(3);
            }
            acc
        })
        .collect();
    Ok(LinkingResult::from_raw(rows.iter().sum::<f64>() / (4.0 * PI)))
}

/// `-(1/4pi) sum_j F(m1_j, curve 2) . D1_j` with the plain Biot-Savart field.
pub fn linking_number_via_force(c1: &DiscreteCurve, c2: &DiscreteCurve) -> Result<LinkingResult> {
    check_separation(c1, c2)?;
    let rows: Vec<f64> = (0..c1.len())
        .into_par_iter()
        .map(|j| biot_savart_unchecked(&c1.midpoint(j), c2, 0.0).dot(&c1.segment(j)))
        .collect();
    Ok(LinkingResult::from_raw(-rows.iter().sum::<f64>() / (4.0 * PI)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Vec3;

    fn ring(m: usize, centre: Vec3, e1: Vec3, e2: Vec3) -> DiscreteCurve {
        DiscreteCurve::new(
            (0..m)
                .map(|k| {
                    let th = 2.0 * PI * k as f64 / m as f64;
                    centre + th.cos() * e1 + th.sin() * e2
                })
                .collect(),
        )
        .unwrap()
    }

    fn hopf(m: usize) -> (DiscreteCurve, DiscreteCurve) {
        (
            ring(m, Vec3::zeros(), Vec3::x(), Vec3::y()),
            ring(m, Vec3::x(), Vec3::x(), Vec3::z()),
        )
    }

    #[test]
    fn hopf_link_is_minus_one() {
        let (a, b) = hopf(200);
        let g = linking_number_gauss(&a, &b).unwrap();
        let f = linking_number_via_force(&a, &b).unwrap();
        assert_eq!(g.rounded, -1);
        assert!(g.residual < 0.05);
        assert!((g.raw_value - f.raw_value).abs() < 1e-6 * g.raw_value.abs());
    }

    #[test]
    fn symmetric_and_orientation_odd() {
        let (a, b) = hopf(120);
        let ab = linking_number_gauss(&a, &b).unwrap();
        let ba = linking_number_gauss(&b, &a).unwrap();
        assert_eq!(ab.rounded, ba.rounded);
        assert_eq!(linking_number_via_force(&b, &a).unwrap().rounded, ab.rounded);
        assert_eq!(linking_number_gauss(&a.reversed(), &b).unwrap().rounded, -ab.rounded);
        assert_eq!(linking_number_via_force(&a, &b.reversed()).unwrap().rounded, -ab.rounded);
    }

    #[test]
    fn far_coplanar_circles_are_unlinked() {
        let a = ring(100, Vec3::zeros(), Vec3::x(), Vec3::y());
        let b = ring(100, Vec3::new(10.0, 0.0, 0.0), Vec3::x(), Vec3::y());
        let g = linking_number_gauss(&a, &b).unwrap();
        assert_eq!(g.rounded, 0);
        assert!(g.residual < 1e-3);
    }

    #[test]
    fn touching_curves_are_refused() {
        let a = ring(50, Vec3::zeros(), Vec3::x(), Vec3::y());
        let b = ring(50, Vec3::new(2.0, 0.0, 0.0), Vec3::x(), Vec3::z());
        assert!(matches!(linking_number_gauss(&a, &b), Err(Error::CurvesTooClose { .. })));
        assert!(matches!(linking_number_via_force(&a, &b), Err(Error::CurvesTooClose { .. })));
    }

    #[test]
    fn rounding_contract() {
        let r = LinkingResult::from_raw(-1.96);
        assert_eq!(r.rounded, -2);
        assert!((r.residual - 0.04).abs() < 1e-12);
        assert!(!r.is_unreliable());
        assert!(LinkingResult::from_raw(0.3).is_unreliable());
    }
}

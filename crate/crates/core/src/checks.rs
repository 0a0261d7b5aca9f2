//! Built-in self-test suite run by `filament check`.

use std::f64::consts::PI;

use crate::config::{CurveSource, CurveSpec, SimulationConfig};
use crate::curves::{preset, PRESET_PAIRS};
use crate::error::Result;
use crate::forces::biot_savart_at_point;
use crate::geometry::{compute_geometry, DiscreteCurve, Vec3};
use crate::integrator::{integrate_fixed, SimulationState};
use crate::scheme::FlowParams;
use crate::sim::run;
use crate::topology::{linking_number_gauss, linking_number_via_force};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn new(name: impl Into<String>, passed: bool, detail: String) -> Self {
        CheckOutcome {
            name: name.into(),
            passed,
            detail,
        }
    }

    fn from_result(name: &str, r: Result<(bool, String)>) -> Self {
        match r {
            Ok((passed, detail)) => CheckOutcome::new(name, passed, detail),
            Err(e) => CheckOutcome::new(name, false, format!("error: {e}")),
        }
    }
}

fn mean_radius(c: &DiscreteCurve) -> f64 {
    let centre = c.centroid();
    c.nodes().iter().map(|p| (p - centre).norm()).sum::<f64>() / c.len() as f64
}

fn circle_config(a: f64, b: f64, m: usize, t_end: f64, dt_out: f64) -> SimulationConfig {
    let mut cfg = SimulationConfig::with_curves(
        vec![CurveSpec {
            source: CurveSource::Preset("linked-circles-neg:1".into()),
            nodes: Some(m),
            uniformize: true,
            flow: FlowParams::constant(a, b),
        }],
        t_end,
        dt_out,
    );
    cfg.biot.delta = 0.0;
    cfg
}

fn linking_presets() -> Vec<CheckOutcome> {
    PRESET_PAIRS
        .iter()
        .map(|&(name, a, b, expected)| {
            let m = if a == "eight-knot" { 400 } else { 200 };
            let r = (|| {
                let c1 = preset(a)?.sample(m, true)?;
                let c2 = preset(b)?.sample(m, true)?;
                let g = linking_number_gauss(&c1, &c2)?;
                let f = linking_number_via_force(&c1, &c2)?;
                let agree = (g.raw_value - f.raw_value).abs() <= 1e-6 * g.raw_value.abs().max(1.0);
                Ok((
                    g.rounded == expected && g.residual < 0.05 && agree,
                    format!("link {} (raw {:.6}, residual {:.2e}, via force {:.6})", g.rounded, g.raw_value, g.residual, f.raw_value),
                ))
            })();
            CheckOutcome::from_result(&format!("linking {name} = {expected}"), r)
        })
        .collect()
}

fn biot_savart_centre() -> CheckOutcome {
    let r = (|| {
        let c = preset("linked-circles-neg:1")?.sample(400, false)?;
        let f = biot_savart_at_point(&Vec3::zeros(), &c, 0.0)?;
        let err = (f - Vec3::new(0.0, 0.0, -2.0 * PI)).norm();
        Ok((err < 1e-3, format!("field {:.6} {:.6} {:.6}, error {err:.2e}", f.x, f.y, f.z)))
    })();
    CheckOutcome::from_result("Biot-Savart loop centre", r)
}

fn circle_curvature() -> CheckOutcome {
    let r = (|| {
        let mut worst = 0.0f64;
        for m in [4usize, 16, 256] {
            let c = preset("linked-circles-neg:1")?.sample(m, false)?;
            let g = compute_geometry(&c)?;
            worst = g.curvature.iter().map(|k| (k - 1.0).abs()).fold(worst, f64::max);
        }
        Ok((worst < 1e-12, format!("max |kappa - 1| = {worst:.2e}")))
    })();
    CheckOutcome::from_result("discrete circle curvature", r)
}

fn shrinking_circle() -> CheckOutcome {
    let r = (|| {
        let out = run(&circle_config(1.0, 0.0, 128, 0.3, 0.1))?;
        let mut worst = 0.0f64;
        for f in &out.frames[1..] {
            let exact = (1.0 - 2.0 * f.time).sqrt();
            worst = worst.max((mean_radius(&f.curves[0]) - exact).abs());
        }
        Ok((out.failure.is_none() && worst < 2e-3, format!("max radius error {worst:.2e}")))
    })();
    CheckOutcome::from_result("shrinking circle", r)
}

fn binormal_transport() -> CheckOutcome {
    let r = (|| {
        let out = run(&circle_config(0.0, 1.0, 128, 0.5, 0.5))?;
        let first = &out.frames[0].curves[0];
        let last = &out.frames.last().unwrap().curves[0];
        let shift = last.centroid().z - first.centroid().z;
        let drift = (mean_radius(last) - mean_radius(first)).abs();
        Ok((
            out.failure.is_none() && (shift - 0.5).abs() < 1e-2 && drift < 1e-3,
            format!("axial shift {shift:.6}, radius drift {drift:.2e}"),
        ))
    })();
    CheckOutcome::from_result("binormal transport", r)
}

fn integrator_order() -> CheckOutcome {
    let r = (|| {
        let mut decay = |_t: f64, y: &[f64]| Ok(vec![-y[0]]);
        let s = SimulationState::new(0.0, vec![1.0]);
        let mut errs = Vec::new();
        for n in [10usize, 20, 40] {
            errs.push((integrate_fixed(&s, 1.0, n, &mut decay)?.y[0] - (-1.0f64).exp()).abs());
        }
        let orders: Vec<f64> = errs.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
        let ok = orders.iter().all(|o| (3.7..=4.3).contains(o));
        Ok((ok, format!("observed orders {:.3} {:.3}", orders[0], orders[1])))
    })();
    CheckOutcome::from_result("integrator order", r)
}

/// Runs every check in order.
pub fn run_all() -> Vec<CheckOutcome> {
    let mut out = linking_presets();
    out.push(biot_savart_centre());
    out.push(circle_curvature());
    out.push(integrator_order());
    out.push(shrinking_circle());
    out.push(binormal_transport());
    out
}

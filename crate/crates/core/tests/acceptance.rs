//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails.

use std::f64::consts::PI;
use std::path::Path;
use std::time::Instant;

use filament::config::{CurveSource, CurveSpec, SimulationConfig};
use filament::curves::{preset, PRESET_PAIRS};
use filament::forces::biot_savart_at_point;
use filament::geometry::{compute_geometry, DiscreteCurve, Vec3};
use filament::integrator::{integrate_fixed, SimulationState};
use filament::scheme::FlowParams;
use filament::sim::{frame_file_name, run, write_run, RunOutput, NEAR_COLLISION_DISTANCE};
use filament::topology::{linking_number_gauss, linking_number_via_force};
use filament::Result;

type Verdict = Result<(bool, String)>;

fn mean_radius(c: &DiscreteCurve) -> f64 {
    let centre = c.centroid();
    c.nodes().iter().map(|p| (p - centre).norm()).sum::<f64>() / c.len() as f64
}

fn single_circle(a: f64, b: f64, m: usize, t_end: f64, dt_out: f64) -> SimulationConfig {
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
    cfg.step.tolerance = 1e-3;
    cfg
}

fn config_file(name: &str) -> Result<SimulationConfig> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name);
    SimulationConfig::from_file(path)
}

fn linking_values() -> Vec<(String, Verdict)> {
    PRESET_PAIRS
        .iter()
        .map(|&(name, a, b, expected)| {
            let m = if a == "eight-knot" { 400 } else { 200 };
            let verdict = (|| {
                let start = Instant::now();
                let c1 = preset(a)?.sample(m, true)?;
                let c2 = preset(b)?.sample(m, true)?;
                let lk = linking_number_gauss(&c1, &c2)?;
                let secs = start.elapsed().as_secs_f64();
                Ok((
                    lk.rounded == expected && lk.residual < 0.05 && secs < 5.0,
                    format!(
                        "M = {m}, rounded {} (expected {expected}), raw {:.6}, residual {:.2e}, {secs:.3} s",
                        lk.rounded, lk.raw_value, lk.residual
                    ),
                ))
            })();
            (format!("linking number {name}"), verdict)
        })
        .collect()
}

fn dual_formula() -> Verdict {
    let mut worst = 0.0f64;
    for &(_, a, b, _) in PRESET_PAIRS {
        let m = if a == "eight-knot" { 400 } else { 200 };
        let c1 = preset(a)?.sample(m, true)?;
        let c2 = preset(b)?.sample(m, true)?;
        let g = linking_number_gauss(&c1, &c2)?.raw_value;
        let f = linking_number_via_force(&c1, &c2)?.raw_value;
        worst = worst.max((g - f).abs() / g.abs().max(1.0));
    }
    Ok((worst <= 1e-6, format!("max relative difference {worst:.2e}")))
}

fn shrinking_circle() -> Verdict {
    let start = Instant::now();
    let out = run(&single_circle(1.0, 0.0, 128, 0.3, 0.1))?;
    let secs = start.elapsed().as_secs_f64();
    let mut r_err = 0.0f64;
    let mut l_err = 0.0f64;
    let mut times = Vec::new();
    for f in &out.frames[1..] {
        let exact = (1.0 - 2.0 * f.time).sqrt();
        let c = &f.curves[0];
        r_err = r_err.max((mean_radius(c) - exact).abs());
        l_err = l_err.max((c.total_length() / (2.0 * PI * exact) - 1.0).abs());
        times.push(f.time);
    }
    let times_ok = times.len() == 3 && times.iter().zip([0.1, 0.2, 0.3]).all(|(t, e)| (t - e).abs() < 1e-12);
    Ok((
        out.failure.is_none() && times_ok && r_err < 2e-3 && l_err < 5e-3 && secs < 10.0,
        format!("radius error {r_err:.2e}, relative length error {l_err:.2e}, {secs:.3} s"),
    ))
}

fn binormal_transport() -> Verdict {
    let out = run(&single_circle(0.0, 1.0, 128, 0.5, 0.5))?;
    let first = &out.frames[0].curves[0];
    let last = &out.frames.last().unwrap().curves[0];
    let shift = last.centroid().z - first.centroid().z;
    let r_drift = (mean_radius(last) - mean_radius(first)).abs();
    let l_drift = (last.total_length() - first.total_length()).abs();
    Ok((
        out.failure.is_none() && (shift - 0.5).abs() < 1e-2 && r_drift < 1e-3 && l_drift < 1e-3,
        format!("axial shift {shift:.6}, radius drift {r_drift:.2e}, length drift {l_drift:.2e}"),
    ))
}

fn redistribution_config() -> Result<SimulationConfig> {
    let mut cfg = config_file("linked-circles-neg.cfg")?;
    cfg.t_end = 0.1;
    cfg.dt_out = 0.01;
    Ok(cfg)
}

fn redistribution(out: &RunOutput) -> Verdict {
    let worst = out
        .frames
        .iter()
        .flat_map(|f| f.diagnostics.spacing.iter().copied())
        .fold(0.0, f64::max);
    Ok((
        out.failure.is_none() && worst < 0.02,
        format!("{} frames, max spacing non-uniformity {worst:.2e}", out.frames.len()),
    ))
}

fn topology_preservation() -> Verdict {
    let out = run(&config_file("linked-circles-neg.cfg")?)?;
    let expected = [0.0, 0.031, 0.062, 0.093, 0.124, 0.146];
    let times_ok = out.frames.len() == expected.len()
        && out.frames.iter().zip(expected).all(|(f, t)| (f.time - t).abs() < 1e-12);
    let mut checked = 0;
    let mut ok = out.failure.is_none() && times_ok;
    let mut links = Vec::new();
    for f in &out.frames {
        let p = &f.diagnostics.pairs[0];
        links.push(p.linking.map_or("-".to_string(), |l| l.rounded.to_string()));
        if p.distance > NEAR_COLLISION_DISTANCE {
            checked += 1;
            ok &= p.linking.is_some_and(|l| l.rounded == -1);
        }
    }
    Ok((
        ok,
        format!(
            "links [{}] in {checked} frames above the collision distance, min distance {:.3}",
            links.join(", "),
            out.frames.iter().filter_map(|f| f.diagnostics.min_distance()).fold(f64::INFINITY, f64::min)
        ),
    ))
}

fn integrator_order() -> Verdict {
    let mut decay = |_t: f64, y: &[f64]| Ok(vec![-y[0]]);
    let s = SimulationState::new(0.0, vec![1.0]);
    let mut errs = Vec::new();
    for steps in [10usize, 20, 40] {
        errs.push((integrate_fixed(&s, 1.0, steps, &mut decay)?.y[0] - (-1.0f64).exp()).abs());
    }
    let orders: Vec<f64> = errs.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    Ok((
        orders.iter().all(|o| (3.7..=4.3).contains(o)),
        format!("orders {:.3} {:.3}", orders[0], orders[1]),
    ))
}

fn biot_savart_oracle() -> Verdict {
    let exact = Vec3::new(0.0, 0.0, -2.0 * PI);
    let centre_error = |m: usize| -> Result<f64> {
        let c = preset("linked-circles-neg:1")?.sample(m, false)?;
        Ok((biot_savart_at_point(&Vec3::zeros(), &c, 0.0)? - exact).norm())
    };
    let e400 = centre_error(400)?;
    let errs = [centre_error(50)?, centre_error(100)?, centre_error(200)?, e400];
    let order = errs.windows(2).map(|w| (w[0] / w[1]).log2()).fold(f64::INFINITY, f64::min);
    Ok((e400 < 1e-3 && order >= 1.8, format!("error at M = 400 {e400:.2e}, min order {order:.3}")))
}

fn discrete_identities() -> Verdict {
    let mut kappa_err = 0.0f64;
    let mut dot = 0.0f64;
    for m in [4usize, 16, 256] {
        let g = compute_geometry(&preset("linked-circles-neg:1")?.sample(m, false)?)?;
        kappa_err = g.curvature.iter().map(|k| (k - 1.0).abs()).fold(kappa_err, f64::max);
    }
    for name in ["knot-ellipse", "eight-knot", "linked-circles-pos:2"] {
        let g = compute_geometry(&preset(name)?.sample(256, true)?)?;
        for (t, n) in g.tangent.iter().zip(&g.normal) {
            if let Some(n) = n {
                dot = dot.max(t.dot(n).abs());
            }
        }
    }
    Ok((
        kappa_err <= 1e-12 && dot <= 1e-12,
        format!("max |kappa - 1| {kappa_err:.2e}, max |T.N| {dot:.2e}"),
    ))
}

fn frame_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.file_name().unwrap().to_string_lossy().starts_with("frame_"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

fn determinism(cfg: &SimulationConfig, first: &RunOutput) -> Verdict {
    let second = run(cfg)?;
    let (d1, d2) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    write_run(d1.path(), cfg, first)?;
    write_run(d2.path(), cfg, &second)?;
    let (f1, f2) = (frame_files(d1.path()), frame_files(d2.path()));
    let expected = first.frames.len() * cfg.curves.len();
    let named = f1.iter().any(|(n, _)| *n == frame_file_name(0, 1));
    Ok((
        f1.len() == expected && named && f1 == f2,
        format!("{} frame files compared", f1.len()),
    ))
}

fn main() {
    let mut results: Vec<(String, Verdict)> = linking_values();
    results.push(("dual-formula agreement".into(), dual_formula()));
    results.push(("shrinking circle".into(), shrinking_circle()));
    results.push(("binormal rigid transport".into(), binormal_transport()));
    match redistribution_config().and_then(|cfg| run(&cfg).map(|out| (cfg, out))) {
        Ok((cfg, out)) => {
            results.push(("redistribution effectiveness".into(), redistribution(&out)));
            results.push(("determinism".into(), determinism(&cfg, &out)));
        }
        Err(e) => {
            results.push(("redistribution effectiveness".into(), Err(e.clone())));
            results.push(("determinism".into(), Err(e)));
        }
    }
    results.push(("topology preservation under flow".into(), topology_preservation()));
    results.push(("integrator order".into(), integrator_order()));
    results.push(("Biot-Savart oracle".into(), biot_savart_oracle()));
    results.push(("discrete-geometry identities".into(), discrete_identities()));

    let mut failed = 0;
    for (name, verdict) in &results {
        let (passed, detail) = match verdict {
            Ok((p, d)) => (*p, d.clone()),
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!passed);
        println!("{} {name}: {detail}", if passed { "PASS" } else { "FAIL" });
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

//! Multi-curve driver: couples geometry, interaction, redistribution and the
//! finite-volume scheme into one ODE right-hand side, integrates it, and
//! records frames with diagnostics.

use std::fmt::Write as _;
use std::path::Path;

use crate::config::{CurveSource, SimulationConfig};
use crate::curves::preset;
use crate::error::{Error, Result};
use crate::forces::{assemble_forces, BiotSavartParams};
use crate::geometry::{compute_geometry, curve_curve_distance, resample_uniform, CurveGeometry, DiscreteCurve, Vec3};
use crate::integrator::{integrate, SimulationState, StepStats};
use crate::io::{curve_to_csv, fmt_f64, read_curve_csv};
use crate::redistribution::{compute_tangential, normal_speed, TangentialVelocities};
use crate::scheme::{assemble_rhs, CurveVelocity, FlowParams};
use crate::topology::{linking_number_gauss, LinkingResult, MIN_RELATIVE_DISTANCE};

/// Inter-curve distance below which linking numbers are not expected to be
/// preserved by the discrete flow.
pub const NEAR_COLLISION_DISTANCE: f64 = 1e-2;

/// Builds the initial polygons described by `config`.
pub fn initial_curves(config: &SimulationConfig) -> Result<Vec<DiscreteCurve>> {
    config
        .curves
        .iter()
        .map(|spec| match &spec.source {
            CurveSource::Preset(name) => {
                let m = spec.nodes.unwrap_or(crate::config::DEFAULT_NODES);
                preset(name)?.sample(m, spec.uniformize)
            }
            CurveSource::File(path) => {
                let curve = read_curve_csv(path)?;
                match (spec.uniformize, spec.nodes) {
                    (true, m) => resample_uniform(&curve, m.unwrap_or(curve.len())),
                    (false, None) => Ok(curve),
                    (false, Some(m)) if m == curve.len() => Ok(curve),
                    (false, Some(m)) => Err(Error::InvalidParameter(format!(
                        "{} has {} nodes but {m} were requested without resampling",
                        path.display(),
                        curve.len()
                    ))),
                }
            }
        })
        .collect()
}

/// The coupled right-hand side for a fixed set of curve sizes.
#[derive(Debug, Clone)]
pub struct CoupledFlow {
    pub flows: Vec<FlowParams>,
    pub biot: BiotSavartParams,
    pub redistribution: bool,
    sizes: Vec<usize>,
}

fn annotate(err: Error, curve: usize) -> Error {
    match err {
        Error::DegenerateSegment { segment, .. } => Error::DegenerateSegment {
            curve: Some(curve),
            segment,
        },
        Error::InvalidCurve(m) => Error::InvalidCurve(format!("curve {curve}: {m}")),
        other => other,
    }
}

impl CoupledFlow {
    pub fn new(flows: Vec<FlowParams>, biot: BiotSavartParams, redistribution: bool, sizes: Vec<usize>) -> Self {
        assert_eq!(flows.len(), sizes.len());
        CoupledFlow {
            flows,
            biot,
            redistribution,
            sizes,
        }
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn pack(curves: &[DiscreteCurve]) -> Vec<f64> {
        curves
            .iter()
            .flat_map(|c| c.nodes().iter().flat_map(|p| [p.x, p.y, p.z]))
            .collect()
    }

    pub fn unpack(&self, y: &[f64]) -> Result<Vec<DiscreteCurve>> {
        let mut offset = 0;
        self.sizes
            .iter()
            .enumerate()
            .map(|(i, &m)| {
                let nodes = y[offset..offset + 3 * m]
                    .chunks_exact(3)
                    .map(|p| Vec3::new(p[0], p[1], p[2]))
                    .collect();
                offset += 3 * m;
                DiscreteCurve::new(nodes).map_err(|e| annotate(e, i))
            })
            .collect()
    }

    /// Node velocities of every curve.
    pub fn velocities(&self, curves: &[DiscreteCurve]) -> Result<Vec<CurveVelocity>> {
        let geoms: Vec<CurveGeometry> = curves
            .iter()
            .enumerate()
            .map(|(i, c)| compute_geometry(c).map_err(|e| annotate(e, i)))
            .collect::<Result<_>>()?;
        let forces = assemble_forces(curves, &self.biot)?;
        Ok(curves
            .iter()
            .zip(&geoms)
            .zip(&self.flows)
            .enumerate()
            .map(|(i, ((curve, geom), flow))| {
                let f = forces.curve(i);
                let a = flow.sample_a(curve, geom);
                let b = flow.sample_b(curve, geom);
                let alpha = if self.redistribution {
                    compute_tangential(geom, &normal_speed(geom, &a, f), f)
                } else {
                    TangentialVelocities::zeros(curve.len())
                };
                assemble_rhs(curve, geom, &a, &b, f, &alpha.alpha)
            })
            .collect())
    }

    pub fn eval(&self, y: &[f64]) -> Result<Vec<f64>> {
        let curves = self.unpack(y)?;
        Ok(self
            .velocities(&curves)?
            .iter()
            .flat_map(|v| v.iter().flat_map(|p| [p.x, p.y, p.z]))
            .collect())
    }
}

/// Right-hand side for the curves of `config`, with the given node counts.
pub fn build_rhs(config: &SimulationConfig, curves: &[DiscreteCurve]) -> CoupledFlow {
    CoupledFlow::new(
        config.curves.iter().map(|c| c.flow.clone()).collect(),
        config.biot,
        config.redistribution,
        curves.iter().map(|c| c.len()).collect(),
    )
}

/// Distance and linking number of one curve pair (0-based indices).
#[derive(Debug, Clone, PartialEq)]
pub struct PairDiagnostics {
    pub i: usize,
    pub j: usize,
    pub distance: f64,
    pub linking: Option<LinkingResult>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagnostics {
    pub lengths: Vec<f64>,
    pub max_curvature: Vec<f64>,
    /// `max_k |d_k M / L - 1|` per curve.
    pub spacing: Vec<f64>,
    pub pairs: Vec<PairDiagnostics>,
}

impl Diagnostics {
    pub fn compute(curves: &[DiscreteCurve]) -> Result<Self> {
        let geoms: Vec<CurveGeometry> = curves
            .iter()
            .enumerate()
            .map(|(i, c)| compute_geometry(c).map_err(|e| annotate(e, i)))
            .collect::<Result<_>>()?;
        let mut pairs = Vec::new();
        for i in 0..curves.len() {
            for j in i + 1..curves.len() {
                let distance = curve_curve_distance(&curves[i], &curves[j]);
                let scale = curves[i].total_length() + curves[j].total_length();
                let linking = if distance >= MIN_RELATIVE_DISTANCE * scale {
                    Some(linking_number_gauss(&curves[i], &curves[j])?)
                } else {
                    None
                };
                pairs.push(PairDiagnostics { i, j, distance, linking });
            }
        }
        Ok(Diagnostics {
            lengths: geoms.iter().map(|g| g.total_length).collect(),
            max_curvature: geoms.iter().map(|g| g.max_curvature()).collect(),
            spacing: geoms.iter().map(|g| g.spacing_nonuniformity()).collect(),
            pairs,
        })
    }

    pub fn min_distance(&self) -> Option<f64> {
        self.pairs.iter().map(|p| p.distance).reduce(f64::min)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FrameStatus {
    Ok,
    Failed(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameRecord {
    pub index: usize,
    pub time: f64,
    pub curves: Vec<DiscreteCurve>,
    pub diagnostics: Diagnostics,
    /// Accepted step sizes since the previous frame.
    pub step_sizes: Vec<f64>,
    /// Smallest inter-curve distance seen at any accepted step since the
    /// previous frame (and at this frame). `None` for a single curve.
    pub path_min_distance: Option<f64>,
    pub status: FrameStatus,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub frames: Vec<FrameRecord>,
    pub stats: StepStats,
    /// Numerical failure that ended the run early, if any.
    pub failure: Option<Error>,
}

/// Output times `0, dt_out, 2 dt_out, ...` below `t_end`, then `t_end`.
pub fn frame_times(t_end: f64, dt_out: f64) -> Vec<f64> {
    let mut times = vec![0.0];
    let mut k = 1usize;
    loop {
        let t = k as f64 * dt_out;
        if t >= t_end * (1.0 - 1e-12) {
            break;
        }
        times.push(t);
        k += 1;
    }
    times.push(t_end);
    times
}

struct Snapshot {
    time: f64,
    y: Vec<f64>,
    steps: Vec<f64>,
    path_min_distance: Option<f64>,
}

fn min_pair_distance(curves: &[DiscreteCurve]) -> Option<f64> {
    let mut best: Option<f64> = None;
    for i in 0..curves.len() {
        for j in i + 1..curves.len() {
            let d = curve_curve_distance(&curves[i], &curves[j]);
            best = Some(best.map_or(d, |b| b.min(d)));
        }
    }
    best
}

fn min_option(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// Runs the simulation, returning frames at the output times. Frames between
/// accepted steps are linearly interpolated. A numerical failure ends the run
/// with a final frame at the last accepted state carrying the error.
pub fn run(config: &SimulationConfig) -> Result<RunOutput> {
    config.validate()?;
    let curves0 = initial_curves(config)?;
    let flow = build_rhs(config, &curves0);
    let times = frame_times(config.t_end, config.dt_out);

    let y0 = CoupledFlow::pack(&curves0);
    let mut snapshots = vec![Snapshot {
        time: 0.0,
        y: y0.clone(),
        steps: Vec::new(),
        path_min_distance: min_pair_distance(&curves0),
    }];
    let mut pending_distance: Option<f64> = None;
    let mut next = 1;
    let mut prev_t = 0.0;
    let mut prev_y = y0.clone();
    let mut pending_steps = Vec::new();

    let mut rhs = |_t: f64, y: &[f64]| flow.eval(y);
    let result = integrate(
        &SimulationState::new(0.0, y0),
        config.t_end,
        &config.step,
        &mut rhs,
        |step| {
            pending_steps.push(step.dt);
            if let Ok(curves) = flow.unpack(step.y) {
                pending_distance = min_option(pending_distance, min_pair_distance(&curves));
            }
            while next < times.len() && times[next] <= step.t {
                let target = times[next];
                let y = if target == step.t {
                    step.y.to_vec()
                } else {
                    let w = (target - prev_t) / (step.t - prev_t);
                    prev_y.iter().zip(step.y).map(|(a, b)| a + w * (b - a)).collect()
                };
                let at_frame = flow.unpack(&y).ok().and_then(|c| min_pair_distance(&c));
                snapshots.push(Snapshot {
                    time: target,
                    y,
                    steps: std::mem::take(&mut pending_steps),
                    path_min_distance: min_option(pending_distance.take(), at_frame),
                });
                next += 1;
            }
            prev_t = step.t;
            prev_y.copy_from_slice(step.y);
        },
    );

    let (stats, failure) = match result {
        Ok((_, stats)) => (stats, None),
        Err(err) => {
            let err = match err {
                Error::StepSizeUnderflow { t, dt, .. } => {
                    let max_curvature = flow
                        .unpack(&prev_y)
                        .ok()
                        .map(|cs| {
                            cs.iter()
                                .filter_map(|c| compute_geometry(c).ok())
                                .map(|g| g.max_curvature())
                                .fold(0.0, f64::max)
                        });
                    Error::StepSizeUnderflow { t, dt, max_curvature }
                }
                other => other,
            };
            (StepStats::default(), Some(err))
        }
    };

    let mut frames = Vec::with_capacity(snapshots.len() + 1);
    for (index, snap) in snapshots.into_iter().enumerate() {
        let curves = flow.unpack(&snap.y)?;
        frames.push(FrameRecord {
            index,
            time: snap.time,
            diagnostics: Diagnostics::compute(&curves)?,
            curves,
            step_sizes: snap.steps,
            path_min_distance: snap.path_min_distance,
            status: FrameStatus::Ok,
        });
    }
    if let Some(err) = &failure {
        let status = FrameStatus::Failed(err.to_string());
        match flow.unpack(&prev_y).and_then(|c| Diagnostics::compute(&c).map(|d| (c, d))) {
            Ok((curves, diagnostics)) => frames.push(FrameRecord {
                index: frames.len(),
                time: prev_t,
                curves,
                diagnostics,
                step_sizes: pending_steps,
                path_min_distance: pending_distance,
                status,
            }),
            Err(_) => {
                if let Some(last) = frames.last_mut() {
                    last.status = status;
                }
            }
        }
    }
    Ok(RunOutput { frames, stats, failure })
}

pub fn frame_file_name(frame: usize, curve: usize) -> String {
    format!("frame_{frame}_curve_{curve}.csv")
}

/// Header and rows of `diagnostics.csv`. Curve indices are 1-based.
pub fn diagnostics_csv(frames: &[FrameRecord]) -> String {
    let mut out = String::new();
    let Some(first) = frames.first() else {
        return out;
    };
    let n = first.curves.len();
    let mut header = vec!["frame".to_string(), "time".into(), "status".into()];
    for prefix in ["length", "max_curvature", "spacing"] {
        header.extend((1..=n).map(|i| format!("{prefix}_{i}")));
    }
    header.push("min_distance".into());
    header.push("path_min_distance".into());
    for p in &first.diagnostics.pairs {
        let (i, j) = (p.i + 1, p.j + 1);
        header.extend([
            format!("distance_{i}_{j}"),
            format!("link_{i}_{j}"),
            format!("link_raw_{i}_{j}"),
            format!("residual_{i}_{j}"),
        ]);
    }
    header.extend(["steps".into(), "dt_min".into(), "dt_max".into()]);
    writeln!(out, "{}", header.join(",")).unwrap();

    let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
    for f in frames {
        let d = &f.diagnostics;
        let mut row = vec![
            f.index.to_string(),
            fmt_f64(f.time),
            match &f.status {
                FrameStatus::Ok => "ok".into(),
                FrameStatus::Failed(_) => "failed".into(),
            },
        ];
        row.extend(d.lengths.iter().map(|v| fmt_f64(*v)));
        row.extend(d.max_curvature.iter().map(|v| fmt_f64(*v)));
        row.extend(d.spacing.iter().map(|v| fmt_f64(*v)));
        row.push(opt(d.min_distance()));
        row.push(opt(f.path_min_distance));
        for p in &d.pairs {
            row.push(fmt_f64(p.distance));
            row.push(p.linking.map(|l| l.rounded.to_string()).unwrap_or_default());
            row.push(opt(p.linking.map(|l| l.raw_value)));
            row.push(opt(p.linking.map(|l| l.residual)));
        }
        row.push(f.step_sizes.len().to_string());
        row.push(opt(f.step_sizes.iter().copied().reduce(f64::min)));
        row.push(opt(f.step_sizes.iter().copied().reduce(f64::max)));
        writeln!(out, "{}", row.join(",")).unwrap();
    }
    out
}

/// Writes frame CSVs, `diagnostics.csv` and `manifest.cfg` into `dir`.
pub fn write_run(dir: impl AsRef<Path>, config: &SimulationConfig, output: &RunOutput) -> Result<()> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let write = |name: String, contents: String| {
        let path = dir.join(name);
        std::fs::write(&path, contents).map_err(|e| Error::io(&path, e))
    };
    for frame in &output.frames {
        for (i, curve) in frame.curves.iter().enumerate() {
            write(frame_file_name(frame.index, i + 1), curve_to_csv(curve))?;
        }
    }
    write("diagnostics.csv".into(), diagnostics_csv(&output.frames))?;
    let mut manifest = config.to_manifest();
    writeln!(manifest, "# frames = {}", output.frames.len()).unwrap();
    if let Some(err) = &output.failure {
        writeln!(manifest, "# failure = {err}").unwrap();
    }
    write("manifest.cfg".into(), manifest)
}

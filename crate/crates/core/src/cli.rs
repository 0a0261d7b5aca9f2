//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::checks;
use crate::config::RawConfig;
use crate::curves::preset;
use crate::error::{Error, Result};
use crate::forces::biot_savart_at_point;
use crate::geometry::{DiscreteCurve, Vec3};
use crate::io::{curve_to_csv, fmt_f64, read_curve_csv};
use crate::sim::{run, write_run};
use crate::topology::{linking_number_gauss, linking_number_via_force};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

const DEFAULT_OUTPUT: &str = "filament-out";

#[derive(Debug, Parser)]
#[command(name = "filament", version, about = "Evolve interacting closed space curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a simulation described by a config file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Override a config key, e.g. `--set biot.delta=0.2`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        /// Output directory (overrides `sim.output`).
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Linking number of two curves.
    Link {
        #[command(flatten)]
        a: CurveArgsA,
        #[command(flatten)]
        b: CurveArgsB,
        /// Nodes per preset curve.
        #[arg(short = 'M', long = "nodes", default_value_t = 200)]
        nodes: usize,
        /// Sample presets at u = k/M instead of equal spacing.
        #[arg(long)]
        raw_sampling: bool,
    },
    /// Sample the Biot-Savart field of a curve on a grid or at curve nodes.
    Field {
        #[arg(long, conflicts_with = "source_file", required_unless_present = "source_file")]
        source_preset: Option<String>,
        #[arg(long)]
        source_file: Option<PathBuf>,
        #[arg(short = 'M', long = "nodes", default_value_t = 200)]
        nodes: usize,
        /// Grid axes as `min:max:count`.
        #[arg(long, requires_all = ["y", "z"])]
        x: Option<String>,
        #[arg(long)]
        y: Option<String>,
        #[arg(long)]
        z: Option<String>,
        /// Evaluate at the nodes of this preset instead of a grid.
        #[arg(long, conflicts_with_all = ["x", "targets_file"])]
        targets_preset: Option<String>,
        #[arg(long, conflicts_with = "x")]
        targets_file: Option<PathBuf>,
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        /// CSV destination; stdout if omitted.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Write a preset curve as CSV.
    Preset {
        #[arg(long)]
        name: String,
        #[arg(short = 'M', long = "nodes", default_value_t = 200)]
        nodes: usize,
        #[arg(long)]
        raw_sampling: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the built-in self-test suite.
    Check,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct CurveArgsA {
    #[arg(long)]
    preset_a: Option<String>,
    #[arg(long)]
    file_a: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct CurveArgsB {
    #[arg(long)]
    preset_b: Option<String>,
    #[arg(long)]
    file_b: Option<PathBuf>,
}

fn load_curve(preset_name: &Option<String>, file: &Option<PathBuf>, m: usize, uniformize: bool) -> Result<DiscreteCurve> {
    match (preset_name, file) {
        (Some(p), _) => preset(p)?.sample(m, uniformize),
        (None, Some(f)) => read_curve_csv(f),
        (None, None) => Err(Error::InvalidParameter("no curve given".into())),
    }
}

fn parse_axis(spec: &str) -> Result<Vec<f64>> {
    let bad = || Error::InvalidParameter(format!("grid axis `{spec}` must be `min:max:count`"));
    let parts: Vec<&str> = spec.split(':').collect();
    let [lo, hi, n] = parts.as_slice() else {
        return Err(bad());
    };
    let lo: f64 = lo.parse().map_err(|_| bad())?;
    let hi: f64 = hi.parse().map_err(|_| bad())?;
    let n: usize = n.parse().map_err(|_| bad())?;
    match n {
        0 => Err(bad()),
        1 => Ok(vec![lo]),
        _ => Ok((0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()),
    }
}

fn write_output(path: &Option<PathBuf>, text: &str, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error::io(p, e)),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Error::io("<stdout>", e)),
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Run {
            config,
            overrides,
            output,
        } => {
            let text = std::fs::read_to_string(&config).map_err(|e| Error::io(&config, e))?;
            let mut raw = RawConfig::parse(&text)?;
            for o in &overrides {
                raw.set(o)?;
            }
            if let Some(dir) = &output {
                raw.set(&format!("sim.output={}", dir.display()))?;
            }
            let mut cfg = raw.resolve()?;
            let dir = cfg.output.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT));
            cfg.output = Some(dir.clone());
            let result = run(&cfg)?;
            write_run(&dir, &cfg, &result)?;
            writeln!(
                out,
                "wrote {} frames to {} ({} steps accepted, {} rejected)",
                result.frames.len(),
                dir.display(),
                result.stats.accepted,
                result.stats.rejected
            )
            .ok();
            if let Some(e) = result.failure {
                writeln!(err, "simulation stopped early: {e}").ok();
                return Ok(EXIT_NUMERICAL);
            }
            Ok(EXIT_OK)
        }
        Command::Link {
            a,
            b,
            nodes,
            raw_sampling,
        } => {
            let c1 = load_curve(&a.preset_a, &a.file_a, nodes, !raw_sampling)?;
            let c2 = load_curve(&b.preset_b, &b.file_b, nodes, !raw_sampling)?;
            let g = linking_number_gauss(&c1, &c2)?;
            let f = linking_number_via_force(&c1, &c2)?;
            writeln!(out, "raw = {}", fmt_f64(g.raw_value)).ok();
            writeln!(out, "rounded = {}", g.rounded).ok();
            writeln!(out, "residual = {}", fmt_f64(g.residual)).ok();
            writeln!(out, "raw_via_force = {}", fmt_f64(f.raw_value)).ok();
            if g.is_unreliable() {
                writeln!(err, "warning: residual {:.3} is large; increase the node count", g.residual).ok();
            }
            Ok(EXIT_OK)
        }
        Command::Field {
            source_preset,
            source_file,
            nodes,
            x,
            y,
            z,
            targets_preset,
            targets_file,
            epsilon,
            delta,
            output,
        } => {
            let source = load_curve(&source_preset, &source_file, nodes, true)?;
            let points: Vec<Vec3> = if targets_preset.is_some() || targets_file.is_some() {
                load_curve(&targets_preset, &targets_file, nodes, true)?.into_nodes()
            } else {
                let (Some(x), Some(y), Some(z)) = (x, y, z) else {
                    return Err(Error::InvalidParameter(
                        "field needs a grid (--x --y --z) or target curve".into(),
                    ));
                };
                let (xs, ys, zs) = (parse_axis(&x)?, parse_axis(&y)?, parse_axis(&z)?);
                let mut pts = Vec::with_capacity(xs.len() * ys.len() * zs.len());
                for &px in &xs {
                    for &py in &ys {
                        for &pz in &zs {
                            pts.push(Vec3::new(px, py, pz));
                        }
                    }
                }
                pts
            };
            let mut csv = String::from("x,y,z,Fx,Fy,Fz\n");
            for p in &points {
                let f = delta * biot_savart_at_point(p, &source, epsilon)?;
                csv.push_str(&[p.x, p.y, p.z, f.x, f.y, f.z].map(fmt_f64).join(","));
                csv.push('\n');
            }
            write_output(&output, &csv, out)?;
            Ok(EXIT_OK)
        }
        Command::Preset {
            name,
            nodes,
            raw_sampling,
            output,
        } => {
            let c = preset(&name)?.sample(nodes, !raw_sampling)?;
            write_output(&output, &curve_to_csv(&c), out)?;
            Ok(EXIT_OK)
        }
        Command::Check => {
            let results = checks::run_all();
            let mut all = true;
            for r in &results {
                all &= r.passed;
                writeln!(out, "{} {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.name, r.detail).ok();
            }
            Ok(if all { EXIT_OK } else { EXIT_NUMERICAL })
        }
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
/// Returns the process exit status.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                write!(err, "{rendered}").ok();
            } else {
                write!(out, "{rendered}").ok();
            }
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            writeln!(err, "error: {e}").ok();
            if e.is_numerical() {
                EXIT_NUMERICAL
            } else {
                EXIT_INVALID
            }
        }
    }
}

//! Closed Fourier curves used as initial conditions.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{DiscreteCurve, Vec3};

/// One harmonic `c cos(2 pi n u + phi) + s sin(2 pi n u + phi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierTerm {
    pub frequency: i32,
    pub cos: f64,
    pub sin: f64,
    pub phase: f64,
}

impl FourierTerm {
    pub fn cos(frequency: i32, amplitude: f64, phase: f64) -> Self {
        FourierTerm {
            frequency,
            cos: amplitude,
            sin: 0.0,
            phase,
        }
    }

    pub fn sin(frequency: i32, amplitude: f64, phase: f64) -> Self {
        FourierTerm {
            frequency,
            cos: 0.0,
            sin: amplitude,
            phase,
        }
    }

    fn eval(&self, u: f64) -> f64 {
        let arg = 2.0 * PI * self.frequency as f64 * u + self.phase;
        self.cos * arg.cos() + self.sin * arg.sin()
    }
}

/// A finite trigonometric series per coordinate.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct FourierSeries {
    pub constant: f64,
    pub terms: Vec<FourierTerm>,
}

impl FourierSeries {
    pub fn new(constant: f64, terms: Vec<FourierTerm>) -> Self {
        FourierSeries { constant, terms }
    }

    pub fn eval(&self, u: f64) -> f64 {
        self.constant + self.terms.iter().map(|t| t.eval(u)).sum::<f64>()
    }
}

/// Closed curve `u -> (x(u), y(u), z(u))`, 1-periodic in `u`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCurve {
    pub x: FourierSeries,
    pub y: FourierSeries,
    pub z: FourierSeries,
}

impl FourierCurve {
    pub fn evaluate(&self, u: f64) -> Vec3 {
        Vec3::new(self.x.eval(u), self.y.eval(u), self.z.eval(u))
    }

    /// Samples `m` nodes. With `uniformize` the nodes are equally spaced
    /// (equal chords) and lie exactly on the curve, starting at `u = 0`;
    /// otherwise they sit at `u_k = k / m`.
    pub fn sample(&self, m: usize, uniformize: bool) -> Result<DiscreteCurve> {
        if m < 3 {
            return Err(Error::InvalidCurve(format!("need at least 3 nodes, got {m}")));
        }
        if uniformize {
            uniform_nodes(|u| self.evaluate(u), m)
        } else {
            DiscreteCurve::new((0..m).map(|k| self.evaluate(k as f64 / m as f64)).collect())
        }
    }
}

/// Equal-chord nodes on a 1-periodic curve `f`. The chord length is bisected
/// until `m` chords starting at `u = 0` close up after exactly one period.
fn uniform_nodes(f: impl Fn(f64) -> Vec3, m: usize) -> Result<DiscreteCurve> {
    let dense = (16 * m).max(2048);
    let polygon_length: f64 = (0..dense)
        .map(|j| (f((j + 1) as f64 / dense as f64) - f(j as f64 / dense as f64)).norm())
        .sum();

    let walk = |chord: f64| -> Option<(f64, Vec<Vec3>)> {
        let mut u = 0.0;
        let mut centre = f(0.0);
        let mut nodes = Vec::with_capacity(m);
        nodes.push(centre);
        for step in 0..m {
            // First dense grid point outside the ball brackets the crossing.
            let mut j = (u * dense as f64).floor() as usize + 1;
            let limit = j + dense + 1;
            while (f(j as f64 / dense as f64) - centre).norm() < chord {
                j += 1;
                if j > limit {
                    return None;
                }
            }
            let mut lo = u.max((j - 1) as f64 / dense as f64);
            let mut hi = j as f64 / dense as f64;
            for _ in 0..64 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if (f(mid) - centre).norm() < chord {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            u = hi;
            centre = f(u);
            if step + 1 < m {
                nodes.push(centre);
            }
        }
        Some((u, nodes))
    };

    let mut lo = 0.0;
    let mut hi = polygon_length / m as f64 * 1.01;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match walk(mid) {
            Some((u, _)) if u < 1.0 => lo = mid,
            _ => hi = mid,
        }
    }
    let (_, nodes) = walk(if lo > 0.0 { lo } else { hi })
        .ok_or_else(|| Error::InvalidCurve("uniform sampling failed to close".into()))?;
    DiscreteCurve::new(nodes)
}

/// Names accepted by [`preset`].
pub const PRESET_NAMES: &[&str] = &[
    "linked-circles-neg:1",
    "linked-circles-neg:2",
    "linked-circles-pos:1",
    "linked-circles-pos:2",
    "eight-knot",
    "knot-circle",
    "knot-ellipse",
];

fn c(n: i32, amp: f64) -> FourierTerm {
    FourierTerm::cos(n, amp, 0.0)
}

fn s(n: i32, amp: f64) -> FourierTerm {
    FourierTerm::sin(n, amp, 0.0)
}

fn series(constant: f64, terms: Vec<FourierTerm>) -> FourierSeries {
    FourierSeries::new(constant, terms)
}

/// Built-in initial curves.
///
/// * `linked-circles-neg:1|2` - `(cos 2pi u, sin 2pi u, 0)` and `(1 + cos 2pi u, 0, sin 2pi u)`
/// * `linked-circles-pos:1|2` - `(-sin 2pi u, cos 2pi u, 0)` and `(1 + cos 2pi u, 0, -sin 2pi u)`
/// * `eight-knot` - `(3 cos 4pi u, 2 sin(6pi u + 1/2), (cos(10pi u + 1/2) + sin(6pi u + 1/2))/2)`
/// * `knot-circle` - `(cos 2pi u, 0, sin 2pi u)`
/// * `knot-ellipse` - `(cos 2pi u - 1.5, 0.5, 0.8 sin 2pi u)`
pub fn preset(name: &str) -> Result<FourierCurve> {
    let curve = match name {
        "linked-circles-neg:1" => FourierCurve {
            x: series(0.0, vec![c(1, 1.0)]),
            y: series(0.0, vec![s(1, 1.0)]),
            z: series(0.0, vec![]),
        },
        "linked-circles-neg:2" => FourierCurve {
            x: series(1.0, vec![c(1, 1.0)]),
            y: series(0.0, vec![]),
            z: series(0.0, vec![s(1, 1.0)]),
        },
        "linked-circles-pos:1" => FourierCurve {
            x: series(0.0, vec![s(1, -1.0)]),
            y: series(0.0, vec![c(1, 1.0)]),
            z: series(0.0, vec![]),
        },
        "linked-circles-pos:2" => FourierCurve {
            x: series(1.0, vec![c(1, 1.0)]),
            y: series(0.0, vec![]),
            z: series(0.0, vec![s(1, -1.0)]),
        },
        "eight-knot" => FourierCurve {
            x: series(0.0, vec![c(2, 3.0)]),
            y: series(0.0, vec![FourierTerm::sin(3, 2.0, 0.5)]),
            z: series(
                0.0,
                vec![FourierTerm::cos(5, 0.5, 0.5), FourierTerm::sin(3, 0.5, 0.5)],
            ),
        },
        "knot-circle" => FourierCurve {
            x: series(0.0, vec![c(1, 1.0)]),
            y: series(0.0, vec![]),
            z: series(0.0, vec![s(1, 1.0)]),
        },
        "knot-ellipse" => FourierCurve {
            x: series(-1.5, vec![c(1, 1.0)]),
            y: series(0.5, vec![]),
            z: series(0.0, vec![s(1, 0.8)]),
        },
        _ => return Err(Error::UnknownPreset(name.to_string())),
    };
    Ok(curve)
}

/// The curve pairs with a known linking number: `(name, first, second, link)`.
pub const PRESET_PAIRS: &[(&str, &str, &str, i64)] = &[
    ("linked-circles-neg", "linked-circles-neg:1", "linked-circles-neg:2", -1),
    ("linked-circles-pos", "linked-circles-pos:1", "linked-circles-pos:2", 1),
    ("knot-circle", "eight-knot", "knot-circle", 0),
    ("knot-ellipse", "eight-knot", "knot-ellipse", -2),
];

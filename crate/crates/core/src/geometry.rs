//! Discrete closed curves and their per-node geometry.
//!
//! Nodes are stored 0-based, `X_0 .. X_{M-1}`, with cyclic indexing. Segment
//! `k` joins `X_{k-1}` to `X_k`, so node `k` sits between the backward segment
//! of length `d_k` and the forward segment of length `d_{k+1}`.

use nalgebra::Vector3;
use rayon::prelude::*;

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;

/// Relative floor below which a discrete curvature is treated as zero.
/// Scaled by the mean inverse segment length `M / L`.
pub const CURVATURE_FLOOR: f64 = 1e-12;

/// A closed polygon in space. The last node connects back to the first.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteCurve {
    nodes: Vec<Vec3>,
}

impl DiscreteCurve {
    /// Builds a curve, checking that it has at least three finite nodes and no
    /// zero-length segment.
    pub fn new(nodes: Vec<Vec3>) -> Result<Self> {
        if nodes.len() < 3 {
            return Err(Error::InvalidCurve(format!(
                "a closed curve needs at least 3 nodes, got {}",
                nodes.len()
            )));
        }
        if let Some(k) = nodes.iter().position(|p| !p.iter().all(|c| c.is_finite())) {
            return Err(Error::InvalidCurve(format!("node {k} is not finite")));
        }
        let curve = DiscreteCurve { nodes };
        if let Some(k) = (0..curve.len()).find(|&k| curve.segment(k).norm() == 0.0) {
            return Err(Error::DegenerateSegment {
                curve: None,
                segment: k,
            });
        }
        Ok(curve)
    }

    /// Builds a curve from raw coordinate triples.
    pub fn from_points(points: &[[f64; 3]]) -> Result<Self> {
        Self::new(points.iter().map(|p| Vec3::new(p[0], p[1], p[2])).collect())
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[Vec3] {
        &self.nodes
    }

    pub fn into_nodes(self) -> Vec<Vec3> {
        self.nodes
    }

    /// Node with cyclic index, so `node(-1) == node(M - 1)` and `node(M) == node(0)`.
    pub fn node(&self, k: isize) -> Vec3 {
        self.nodes[k.rem_euclid(self.len() as isize) as usize]
    }

    /// Segment vector `X_k - X_{k-1}` (cyclic).
    pub fn segment(&self, k: usize) -> Vec3 {
        let m = self.len();
        self.nodes[k % m] - self.nodes[(k + m - 1) % m]
    }

    /// Midpoint of segment `k`.
    pub fn midpoint(&self, k: usize) -> Vec3 {
        let m = self.len();
        0.5 * (self.nodes[k % m] + self.nodes[(k + m - 1) % m])
    }

    pub fn segment_lengths(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.segment(k).norm()).collect()
    }

    pub fn total_length(&self) -> f64 {
        (0..self.len()).map(|k| self.segment(k).norm()).sum()
    }

    /// Same polygon traversed backwards, keeping node 0 in place.
    pub fn reversed(&self) -> Self {
        let m = self.len();
        let nodes = (0..m).map(|k| self.nodes[(m - k) % m]).collect();
        DiscreteCurve { nodes }
    }

    /// Applies `f` to every node. The result is re-validated.
    pub fn map_nodes(&self, f: impl Fn(&Vec3) -> Vec3) -> Result<Self> {
        Self::new(self.nodes.iter().map(f).collect())
    }

    pub fn centroid(&self) -> Vec3 {
        self.nodes.iter().sum::<Vec3>() / self.len() as f64
    }

    /// Largest distance between any two nodes.
    pub fn diameter(&self) -> f64 {
        let mut best = 0.0f64;
        for (i, p) in self.nodes.iter().enumerate() {
            for q in &self.nodes[i + 1..] {
                best = best.max((p - q).norm());
            }
        }
        best
    }
}

/// Per-node discrete geometry of a [`DiscreteCurve`].
#[derive(Debug, Clone, PartialEq)]
pub struct CurveGeometry {
    /// `d_k = |X_k - X_{k-1}|`.
    pub seg_lengths: Vec<f64>,
    /// `(d_k + d_{k+1}) / 2`, the length of the finite volume around node `k`.
    pub dual_lengths: Vec<f64>,
    /// Difference of unit chords `(X_{k+1}-X_k)/d_{k+1} - (X_k-X_{k-1})/d_k`.
    pub chord_turn: Vec<Vec3>,
    /// `kappa_k >= 0`, zero below the curvature floor.
    pub curvature: Vec<f64>,
    /// `(X_{k+1} - X_{k-1}) / (d_k + d_{k+1})`; not unit length in general.
    pub tangent: Vec<Vec3>,
    /// Unit normal, `None` where the curvature vanishes.
    pub normal: Vec<Option<Vec3>>,
    /// `T_k x N_k`, `None` where the normal is undefined.
    pub binormal: Vec<Option<Vec3>>,
    pub total_length: f64,
}

impl CurveGeometry {
    pub fn len(&self) -> usize {
        self.seg_lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seg_lengths.is_empty()
    }

    /// The curvature vector `kappa_k N_k`, zero where the normal is undefined.
    pub fn curvature_vector(&self, k: usize) -> Vec3 {
        match self.normal[k] {
            Some(n) => self.curvature[k] * n,
            None => Vec3::zeros(),
        }
    }

    /// `kappa_k (T_k x N_k)`, the binormal velocity direction scaled by curvature.
    pub fn binormal_term(&self, k: usize) -> Vec3 {
        match self.binormal[k] {
            Some(b) => self.curvature[k] * b,
            None => Vec3::zeros(),
        }
    }

    pub fn max_curvature(&self) -> f64 {
        self.curvature.iter().copied().fold(0.0, f64::max)
    }

    /// `max_k |d_k M / L - 1|`, zero for an equally spaced polygon.
    pub fn spacing_nonuniformity(&self) -> f64 {
        let m = self.len() as f64;
        self.seg_lengths
            .iter()
            .map(|d| (d * m / self.total_length - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Evaluates the finite-volume approximations of segment lengths, curvature,
/// tangent, normal and binormal at every node.
pub fn compute_geometry(curve: &DiscreteCurve) -> Result<CurveGeometry> {
    let m = curve.len();
    let nodes = curve.nodes();
    let seg_lengths = curve.segment_lengths();
    if let Some(k) = seg_lengths.iter().position(|&d| d == 0.0) {
        return Err(Error::DegenerateSegment {
            curve: None,
            segment: k,
        });
    }
    let total_length: f64 = seg_lengths.iter().sum();
    let floor = CURVATURE_FLOOR * m as f64 / total_length;

    let mut dual_lengths = Vec::with_capacity(m);
    let mut chord_turn = Vec::with_capacity(m);
    let mut curvature = Vec::with_capacity(m);
    let mut tangent = Vec::with_capacity(m);
    let mut normal = Vec::with_capacity(m);
    let mut binormal = Vec::with_capacity(m);

    for k in 0..m {
        let prev = nodes[(k + m - 1) % m];
        let next = nodes[(k + 1) % m];
        let here = nodes[k];
        let d_back = seg_lengths[k];
        let d_fwd = seg_lengths[(k + 1) % m];
        let dual = 0.5 * (d_back + d_fwd);

        let turn = (next - here) / d_fwd - (here - prev) / d_back;
        let kappa_vec = turn / dual;
        let t = (next - prev) / (d_back + d_fwd);
        let kappa = kappa_vec.norm();

        dual_lengths.push(dual);
        chord_turn.push(turn);
        tangent.push(t);
        if kappa < floor {
            curvature.push(0.0);
            normal.push(None);
            binormal.push(None);
        } else {
            let n = kappa_vec / kappa;
            curvature.push(kappa);
            normal.push(Some(n));
            binormal.push(Some(t.cross(&n)));
        }
    }

    Ok(CurveGeometry {
        seg_lengths,
        dual_lengths,
        chord_turn,
        curvature,
        tangent,
        normal,
        binormal,
        total_length,
    })
}

/// Resamples a closed polygon to `m_out` nodes with equal spacing.
///
/// The output nodes lie on the input polygon (piecewise-linear interpolation),
/// start at input node 0 and keep its orientation. The common chord length is
/// found by bisection so that `m_out` equal chords close the polygon exactly;
/// each new node is the first point along the polygon at that chord distance
/// from its predecessor.
pub fn resample_uniform(curve: &DiscreteCurve, m_out: usize) -> Result<DiscreteCurve> {
    if m_out < 3 {
        return Err(Error::InvalidCurve(format!(
            "resampling needs at least 3 output nodes, got {m_out}"
        )));
    }
    let walker = PolylineWalker::new(curve);
    let total = walker.total;

    // Arc covered by m_out chords never falls short of their total length.
    let mut lo = 0.0;
    let mut hi = total / m_out as f64;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match walker.walk(mid, m_out) {
            Some((arc, _)) if arc < total => lo = mid,
            _ => hi = mid,
        }
    }

    let chord = if lo > 0.0 { lo } else { hi };
    let (_, points) = walker
        .walk(chord, m_out)
        .ok_or_else(|| Error::InvalidCurve("uniform resampling failed to close".into()))?;
    DiscreteCurve::new(points)
}

struct PolylineWalker<'a> {
    nodes: &'a [Vec3],
    lengths: Vec<f64>,
    cumulative: Vec<f64>,
    total: f64,
}

impl<'a> PolylineWalker<'a> {
    fn new(curve: &'a DiscreteCurve) -> Self {
        let nodes = curve.nodes();
        let m = nodes.len();
        // Edge `j` runs from node j to node j + 1 here.
        let lengths: Vec<f64> = (0..m).map(|j| (nodes[(j + 1) % m] - nodes[j]).norm()).collect();
        let mut cumulative = Vec::with_capacity(m);
        let mut acc = 0.0;
        for len in &lengths {
            cumulative.push(acc);
            acc += len;
        }
        PolylineWalker {
            nodes,
            lengths,
            cumulative,
            total: acc,
        }
    }

    /// Takes `steps` chord steps of length `chord` from node 0. Returns the arc
    /// position reached after the last step and the `steps` visited points
    /// (starting with node 0), or `None` if some step never leaves the ball.
    fn walk(&self, chord: f64, steps: usize) -> Option<(f64, Vec<Vec3>)> {
        let m = self.nodes.len();
        let mut points = Vec::with_capacity(steps);
        let mut edge = 0usize; // unbounded edge counter
        let mut t = 0.0;
        let mut center = self.nodes[0];
        points.push(center);
        for step in 0..steps {
            let mut found = false;
            for _ in 0..=m {
                let j = edge % m;
                let a = self.nodes[j];
                let b = self.nodes[(j + 1) % m];
                if let Some(root) = exit_parameter(a, b, center, chord, t) {
                    t = root;
                    found = true;
                    break;
                }
                edge += 1;
                t = 0.0;
            }
            if !found {
                return None;
            }
            let j = edge % m;
            center = self.nodes[j] + t * (self.nodes[(j + 1) % m] - self.nodes[j]);
            if step + 1 < steps {
                points.push(center);
            }
        }
        let lap = (edge / m) as f64;
        let j = edge % m;
        let arc = lap * self.total + self.cumulative[j] + t * self.lengths[j];
        Some((arc, points))
    }
}

/// Largest parameter `t in [t0, 1]` where the segment `a + t (b - a)` leaves
/// the ball of radius `r` about `c`, assuming the point at `t0` is inside.
fn exit_parameter(a: Vec3, b: Vec3, c: Vec3, r: f64, t0: f64) -> Option<f64> {
    let dir = b - a;
    let off = a - c;
    let qa = dir.norm_squared();
    let qb = 2.0 * dir.dot(&off);
    let qc = off.norm_squared() - r * r;
    // Endpoint still inside: no exit on this segment.
    if (b - c).norm_squared() < r * r {
        return None;
    }
    let disc = (qb * qb - 4.0 * qa * qc).max(0.0);
    let sq = disc.sqrt();
    // Numerically stable larger root.
    let root = if qb >= 0.0 {
        let q = -0.5 * (qb + sq);
        if q == 0.0 {
            return Some(t0);
        }
        qc / q
    } else {
        let q = -0.5 * (qb - sq);
        q / qa
    };
    Some(root.clamp(t0, 1.0))
}

/// Distance from `p` to the segment `[a, b]`.
pub fn point_segment_distance(p: &Vec3, a: &Vec3, b: &Vec3) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_squared();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = ((p - a).dot(&ab) / len2).clamp(0.0, 1.0);
    (p - (a + t * ab)).norm()
}

/// Distance from `p` to the closed polygon.
pub fn point_curve_distance(p: &Vec3, curve: &DiscreteCurve) -> f64 {
    let m = curve.len();
    let nodes = curve.nodes();
    (0..m)
        .map(|k| point_segment_distance(p, &nodes[(k + m - 1) % m], &nodes[k]))
        .fold(f64::INFINITY, f64::min)
}

/// Distance between segments `[p1, q1]` and `[p2, q2]`.
pub fn segment_segment_distance(p1: &Vec3, q1: &Vec3, p2: &Vec3, q2: &Vec3) -> f64 {
    let d1 = q1 - p1;
    let d2 = q2 - p2;
    let r = p1 - p2;
    let a = d1.norm_squared();
    let e = d2.norm_squared();
    let f = d2.dot(&r);
    let (s, t);
    if a == 0.0 && e == 0.0 {
        return r.norm();
    }
    if a == 0.0 {
        s = 0.0;
        t = (f / e).clamp(0.0, 1.0);
    } else {
        let c = d1.dot(&r);
        if e == 0.0 {
            t = 0.0;
            s = (-c / a).clamp(0.0, 1.0);
        } else {
            let b = d1.dot(&d2);
            let denom = a * e - b * b;
            let mut s0 = if denom > 0.0 {
                ((b * f - c * e) / denom).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let mut t0 = (b * s0 + f) / e;
            if t0 < 0.0 {
                t0 = 0.0;
                s0 = (-c / a).clamp(0.0, 1.0);
            } else if t0 > 1.0 {
                t0 = 1.0;
                s0 = ((b - c) / a).clamp(0.0, 1.0);
            }
            s = s0;
            t = t0;
        }
    }
    ((p1 + s * d1) - (p2 + t * d2)).norm()
}

/// Minimum distance between two closed polygons.
pub fn curve_curve_distance(c1: &DiscreteCurve, c2: &DiscreteCurve) -> f64 {
    let (m1, m2) = (c1.len(), c2.len());
    let (n1, n2) = (c1.nodes(), c2.nodes());
    // Node-to-node distances bound the answer from above; segment pairs whose
    // midpoints are too far apart to beat that bound are skipped.
    let upper = n1
        .par_iter()
        .map(|p| n2.iter().map(|q| (p - q).norm_squared()).fold(f64::INFINITY, f64::min))
        .reduce(|| f64::INFINITY, f64::min)
        .sqrt();
    let half2: Vec<f64> = (0..m2).map(|l| 0.5 * c2.segment(l).norm()).collect();
    let mid2: Vec<Vec3> = (0..m2).map(|l| c2.midpoint(l)).collect();
    (0..m1)
        .into_par_iter()
        .map(|j| {
            let (a, b) = (&n1[(j + m1 - 1) % m1], &n1[j]);
            let mid1 = 0.5 * (a + b);
            let half1 = 0.5 * (b - a).norm();
            let mut best = upper;
            for l in 0..m2 {
                if (mid1 - mid2[l]).norm() - half1 - half2[l] > best {
                    continue;
                }
                let d = segment_segment_distance(a, b, &n2[(l + m2 - 1) % m2], &n2[l]);
                best = best.min(d);
            }
            best
        })
        .reduce(|| upper, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Rotation3;
    use std::f64::consts::PI;

    fn circle(m: usize, radius: f64) -> DiscreteCurve {
        let nodes = (0..m)
            .map(|k| {
                let th = 2.0 * PI * k as f64 / m as f64;
                Vec3::new(radius * th.cos(), radius * th.sin(), 0.0)
            })
            .collect();
        DiscreteCurve::new(nodes).unwrap()
    }

    // Plain-array evaluation of the discrete curvature at node k.
    fn brute_kappa(p: &[[f64; 3]], k: usize) -> f64 {
        let m = p.len();
        let prev = p[(k + m - 1) % m];
        let here = p[k];
        let next = p[(k + 1) % m];
        let dist = |a: [f64; 3], b: [f64; 3]| {
            ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
        };
        let db = dist(here, prev);
        let df = dist(next, here);
        let mut s = 0.0;
        for i in 0..3 {
            let v = 2.0 / (db + df) * ((next[i] - here[i]) / df - (here[i] - prev[i]) / db);
            s += v * v;
        }
        s.sqrt()
    }

    #[test]
    fn unit_circle_curvature_is_one() {
        for m in [3usize, 4, 16, 256] {
            let c = circle(m, 1.0);
            let g = compute_geometry(&c).unwrap();
            let pts: Vec<[f64; 3]> = c.nodes().iter().map(|v| [v.x, v.y, v.z]).collect();
            for k in 0..m {
                assert!((g.curvature[k] - 1.0).abs() < 1e-12, "m={m} k={k} {}", g.curvature[k]);
                assert!((brute_kappa(&pts, k) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn radius_two_circle_has_half_curvature() {
        let g = compute_geometry(&circle(50, 2.0)).unwrap();
        for k in 0..50 {
            assert!((g.curvature[k] - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn collinear_nodes_have_zero_curvature_and_no_normal() {
        // Thin triangle-like polygon with two collinear interior nodes.
        let c = DiscreteCurve::from_points(&[
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [2.0, 0.0, 0.0],
            [3.0, 0.0, 0.0],
            [1.5, 1.0, 0.0],
        ])
        .unwrap();
        let g = compute_geometry(&c).unwrap();
        for k in [1, 2] {
            assert_eq!(g.curvature[k], 0.0);
            assert!(g.normal[k].is_none());
            assert!(g.binormal[k].is_none());
            assert_eq!(g.binormal_term(k), Vec3::zeros());
            assert!((g.tangent[k].norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn coincident_nodes_are_rejected() {
        let err = DiscreteCurve::from_points(&[
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
        ])
        .unwrap_err();
        assert_eq!(
            err,
            Error::DegenerateSegment {
                curve: None,
                segment: 2
            }
        );
        assert!(DiscreteCurve::from_points(&[[0.0; 3], [1.0, 0.0, 0.0]]).is_err());
        assert!(DiscreteCurve::from_points(&[[0.0; 3], [1.0, 0.0, 0.0], [f64::NAN, 0.0, 0.0]]).is_err());
    }

    #[test]
    fn tangent_normal_orthogonal_under_uniform_spacing() {
        // Uniformly spaced but non-circular: equal chords around a space curve.
        let base = DiscreteCurve::new(
            (0..97)
                .map(|k| {
                    let u = k as f64 / 97.0 * 2.0 * PI;
                    Vec3::new(2.0 * u.cos(), u.sin(), 0.3 * (3.0 * u).sin())
                })
                .collect(),
        )
        .unwrap();
        let c = resample_uniform(&base, 80).unwrap();
        let g = compute_geometry(&c).unwrap();
        for k in 0..c.len() {
            let n = g.normal[k].unwrap();
            assert!(g.tangent[k].dot(&n).abs() < 1e-12, "k={k}");
            assert!((n.norm() - 1.0).abs() < 1e-12);
            assert!(g.tangent[k].norm() <= 1.0 + 1e-15);
        }
    }

    #[test]
    fn lengths_sum_to_total() {
        let c = circle(37, 1.3)
            .map_nodes(|p| Vec3::new(p.x * 1.7, p.y, 0.2 * p.x * p.y))
            .unwrap();
        let g = compute_geometry(&c).unwrap();
        let s: f64 = g.seg_lengths.iter().sum();
        let dual: f64 = g.dual_lengths.iter().sum();
        assert!((s - g.total_length).abs() < 1e-13);
        assert!((dual - g.total_length).abs() < 1e-13);
    }

    #[test]
    fn reversal_flips_tangent_and_binormal() {
        let c = circle(40, 1.0)
            .map_nodes(|p| Vec3::new(p.x, 0.5 * p.y, 0.3 * p.x * p.x))
            .unwrap();
        let r = c.reversed();
        let g = compute_geometry(&c).unwrap();
        let h = compute_geometry(&r).unwrap();
        let m = c.len();
        for k in 0..m {
            let j = (m - k) % m;
            assert!((g.curvature[k] - h.curvature[j]).abs() < 1e-12);
            assert!((g.tangent[k] + h.tangent[j]).norm() < 1e-12);
            assert!((g.normal[k].unwrap() - h.normal[j].unwrap()).norm() < 1e-12);
            assert!((g.binormal[k].unwrap() + h.binormal[j].unwrap()).norm() < 1e-12);
        }
    }

    #[test]
    fn rigid_motion_and_scaling() {
        let c = circle(33, 1.0)
            .map_nodes(|p| Vec3::new(p.x, 0.7 * p.y, 0.4 * (p.x * 2.0).sin()))
            .unwrap();
        let rot = Rotation3::from_euler_angles(0.3, -1.1, 2.0);
        let shift = Vec3::new(5.0, -2.0, 0.25);
        let moved = c.map_nodes(|p| rot * p + shift).unwrap();
        let g = compute_geometry(&c).unwrap();
        let h = compute_geometry(&moved).unwrap();
        for k in 0..c.len() {
            assert!((g.curvature[k] - h.curvature[k]).abs() < 1e-12);
            assert!((rot * g.tangent[k] - h.tangent[k]).norm() < 1e-12);
            assert!((rot * g.normal[k].unwrap() - h.normal[k].unwrap()).norm() < 1e-12);
            assert!((rot * g.binormal[k].unwrap() - h.binormal[k].unwrap()).norm() < 1e-12);
        }

        let lambda = 3.5;
        let scaled = c.map_nodes(|p| lambda * p).unwrap();
        let s = compute_geometry(&scaled).unwrap();
        for k in 0..c.len() {
            assert!((s.curvature[k] * lambda - g.curvature[k]).abs() < 1e-12);
            assert!((s.seg_lengths[k] - lambda * g.seg_lengths[k]).abs() < 1e-12);
            assert!((s.tangent[k] - g.tangent[k]).norm() < 1e-12);
            assert!((s.normal[k].unwrap() - g.normal[k].unwrap()).norm() < 1e-12);
        }
    }

    #[test]
    fn resampling_uniform_circle_is_identity() {
        let c = circle(100, 1.0);
        let r = resample_uniform(&c, 100).unwrap();
        for (p, q) in c.nodes().iter().zip(r.nodes()) {
            assert!((p - q).norm() < 1e-12, "{}", (p - q).norm());
        }
    }

    #[test]
    fn resampling_clustered_circle_equalizes_spacing() {
        let nodes = (0..90)
            .map(|k| {
                let u = k as f64 / 90.0;
                // Clustered toward u = 0.
                let th = 2.0 * PI * (u + 0.12 * (2.0 * PI * u).sin());
                Vec3::new(th.cos(), th.sin(), 0.0)
            })
            .collect();
        let c = DiscreteCurve::new(nodes).unwrap();
        assert!(compute_geometry(&c).unwrap().spacing_nonuniformity() > 0.5);
        let r = resample_uniform(&c, 64).unwrap();
        let l = r.total_length();
        for d in r.segment_lengths() {
            assert!((d - l / 64.0).abs() < 1e-10, "{}", d - l / 64.0);
        }
        assert_eq!(r.nodes()[0], c.nodes()[0]);
        // Orientation: counterclockwise about +z.
        let area_z: f64 = (0..64)
            .map(|k| r.node(k as isize - 1).cross(&r.node(k as isize)).z)
            .sum();
        assert!(area_z > 0.0);
        // Output stays on the input polygon, so length can only shrink.
        assert!(l <= c.total_length() + 1e-12);
    }

    #[test]
    fn resampling_square_walks_corners() {
        // Corners and edge midpoints of the unit square, starting at a corner.
        let sq = DiscreteCurve::from_points(&[
            [0.0, 0.0, 0.0],
            [0.5, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [1.0, 0.5, 0.0],
            [1.0, 1.0, 0.0],
            [0.5, 1.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, 0.5, 0.0],
        ])
        .unwrap();
        let r = resample_uniform(&sq, 4).unwrap();
        let expected = [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]];
        for (p, e) in r.nodes().iter().zip(expected) {
            assert!((p.x - e[0]).abs() < 1e-12 && (p.y - e[1]).abs() < 1e-12, "{p}");
        }

        // Starting at an edge midpoint instead lands on the other midpoints.
        let shifted = DiscreteCurve::new(
            (0..8).map(|k| sq.node(k + 1)).collect(),
        )
        .unwrap();
        let r = resample_uniform(&shifted, 4).unwrap();
        let expected = [[0.5, 0.0], [1.0, 0.5], [0.5, 1.0], [0.0, 0.5]];
        for (p, e) in r.nodes().iter().zip(expected) {
            assert!((p.x - e[0]).abs() < 1e-12 && (p.y - e[1]).abs() < 1e-12, "{p}");
        }
    }

    #[test]
    fn pruned_curve_distance_matches_brute_force() {
        let a = circle(57, 1.0);
        let b = circle(43, 0.8)
            .map_nodes(|p| Vec3::new(1.0 + p.x, 0.05 * p.y, p.y + 0.1))
            .unwrap();
        let mut brute = f64::INFINITY;
        for j in 0..a.len() {
            for l in 0..b.len() {
                brute = brute.min(segment_segment_distance(
                    &a.node(j as isize - 1),
                    &a.node(j as isize),
                    &b.node(l as isize - 1),
                    &b.node(l as isize),
                ));
            }
        }
        assert_eq!(curve_curve_distance(&a, &b), brute);
    }

    #[test]
    fn segment_distances() {
        let o = Vec3::zeros();
        let x = Vec3::new(1.0, 0.0, 0.0);
        assert!((point_segment_distance(&Vec3::new(0.5, 2.0, 0.0), &o, &x) - 2.0).abs() < 1e-15);
        assert!((point_segment_distance(&Vec3::new(-3.0, 0.0, 0.0), &o, &x) - 3.0).abs() < 1e-15);
        let d = segment_segment_distance(
            &o,
            &x,
            &Vec3::new(0.5, -1.0, 2.0),
            &Vec3::new(0.5, 1.0, 2.0),
        );
        assert!((d - 2.0).abs() < 1e-15);
        // Parallel segments.
        let d = segment_segment_distance(&o, &x, &Vec3::new(2.0, 1.0, 0.0), &Vec3::new(3.0, 1.0, 0.0));
        assert!((d - 2f64.sqrt()).abs() < 1e-15);
    }
}

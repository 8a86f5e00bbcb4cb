//! Classical kicked top: the stroboscopic map on the unit sphere.
//!
//! One period is a rotation by `p` about the y axis followed by a torsion
//! about z through the angle `κ Z'`. With `p = π/2` this sends
//! `(1,0,0) → (0,0,-1) → (-1,0,0) → (0,0,1) → (1,0,0)` for every `κ`, and
//! keeps `(0,1,0)` fixed.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Matrix3, Vector3};
use rayon::prelude::*;

use crate::spin_algebra::BlochAngles;
use crate::{Error, Result};

/// Tolerance on `|pt| = 1` accepted by [`SpherePoint::new`].
pub const SPHERE_TOLERANCE: f64 = 1e-9;

/// Largest per-kick Lyapunov exponent still counted as regular.
pub const CHAOS_THRESHOLD: f64 = 0.01;

/// Number of kicks used for Lyapunov classification.
pub const LYAPUNOV_KICKS: usize = 5000;

/// Orbit closure tolerance for [`orbit_stability`].
pub const ORBIT_TOLERANCE: f64 = 1e-9;

const STABILITY_SLACK: f64 = 1e-8;

/// A point `(X, Y, Z)` on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpherePoint {
    v: Vector3<f64>,
}

impl SpherePoint {
    /// Accepts points within [`SPHERE_TOLERANCE`] of the sphere and projects them onto it.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let v = Vector3::new(x, y, z);
        let norm = v.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > SPHERE_TOLERANCE {
            return Err(Error::param(format!(
                "({x}, {y}, {z}) is not on the unit sphere"
            )));
        }
        Ok(Self { v: v / norm })
    }

    pub fn from_angles(angles: BlochAngles) -> Self {
        let [x, y, z] = angles.unit_vector();
        Self {
            v: Vector3::new(x, y, z),
        }
    }

    /// Polar/azimuthal angles, with `φ = 0` exactly on the z axis.
    pub fn to_angles(&self) -> BlochAngles {
        let theta = self.v.z.clamp(-1.0, 1.0).acos();
        let phi = if self.v.x == 0.0 && self.v.y == 0.0 {
            0.0
        } else {
            self.v.y.atan2(self.v.x)
        };
        BlochAngles::new(theta, phi).expect("angles of a unit vector are in range")
    }

    pub fn x(&self) -> f64 {
        self.v.x
    }

    pub fn y(&self) -> f64 {
        self.v.y
    }

    pub fn z(&self) -> f64 {
        self.v.z
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.v.x, self.v.y, self.v.z]
    }

    pub fn vector(&self) -> Vector3<f64> {
        self.v
    }

    pub fn distance(&self, other: &SpherePoint) -> f64 {
        (self.v - other.v).norm()
    }

    /// Largest per-component difference.
    pub fn max_component_diff(&self, other: &SpherePoint) -> f64 {
        (self.v - other.v).amax()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassicalParams {
    pub kappa: f64,
    pub p: f64,
}

impl ClassicalParams {
    pub fn new(kappa: f64, p: f64) -> Self {
        Self { kappa, p }
    }
}

fn rotation_y(p: f64) -> Matrix3<f64> {
    let (s, c) = p.sin_cos();
    Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c)
}

pub fn kick_map(pt: &SpherePoint, params: ClassicalParams) -> SpherePoint {
    let r = rotation_y(params.p) * pt.v;
    let (s, c) = (params.kappa * r.z).sin_cos();
    let out = Vector3::new(r.x * c - r.y * s, r.x * s + r.y * c, r.z);
    // Rotations keep the norm to rounding; renormalise so long runs do not drift.
    SpherePoint {
        v: out / out.norm(),
    }
}

/// `[pt, F(pt), …, Fⁿ(pt)]`.
pub fn trajectory(pt: &SpherePoint, params: ClassicalParams, n: usize) -> Vec<SpherePoint> {
    let mut out = Vec::with_capacity(n + 1);
    let mut cur = *pt;
    out.push(cur);
    for _ in 0..n {
        cur = kick_map(&cur, params);
        out.push(cur);
    }
    out
}

/// Derivative of the map as a function on `R³` (restricts to the tangent planes).
pub fn map_derivative(pt: &SpherePoint, params: ClassicalParams) -> Matrix3<f64> {
    let rot = rotation_y(params.p);
    let r = rot * pt.v;
    let k = params.kappa;
    let (s, c) = (k * r.z).sin_cos();
    let torsion = Matrix3::new(
        c,
        -s,
        -k * (r.x * s + r.y * c),
        s,
        c,
        k * (r.x * c - r.y * s),
        0.0,
        0.0,
        1.0,
    );
    torsion * rot
}

/// Right-handed orthonormal pair `(e1, e2)` spanning the tangent plane, `e1 × e2 = n`.
pub fn tangent_basis(pt: &SpherePoint) -> (Vector3<f64>, Vector3<f64>) {
    let n = pt.v;
    // Reference axis least aligned with n.
    let axis = if n.x.abs() <= n.y.abs() && n.x.abs() <= n.z.abs() {
        Vector3::x()
    } else if n.y.abs() <= n.z.abs() {
        Vector3::y()
    } else {
        Vector3::z()
    };
    let e1 = axis.cross(&n).normalize();
    let e2 = n.cross(&e1);
    (e1, e2)
}

/// Tangent map in the local bases of `pt` and of its image.
pub fn jacobian(pt: &SpherePoint, params: ClassicalParams) -> Matrix2<f64> {
    let image = kick_map(pt, params);
    let df = map_derivative(pt, params);
    let (a1, a2) = tangent_basis(pt);
    let (b1, b2) = tangent_basis(&image);
    let (da1, da2) = (df * a1, df * a2);
    Matrix2::new(b1.dot(&da1), b1.dot(&da2), b2.dot(&da1), b2.dot(&da2))
}

/// Eigenvalue magnitudes of a real 2×2 matrix.
fn eigen_magnitudes(m: &Matrix2<f64>) -> [f64; 2] {
    let tr = m.trace();
    let det = m.determinant();
    let disc = tr * tr / 4.0 - det;
    if disc >= 0.0 {
        let r = disc.sqrt();
        let mut out = [(tr / 2.0 + r).abs(), (tr / 2.0 - r).abs()];
        out.sort_by(|a, b| b.total_cmp(a));
        out
    } else {
        let mag = det.abs().sqrt();
        [mag, mag]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitReport {
    pub period: usize,
    pub points: Vec<SpherePoint>,
    pub monodromy: Matrix2<f64>,
    /// Sorted, largest first.
    pub eigenvalue_magnitudes: [f64; 2],
    pub stable: bool,
}

/// Linear stability of a closed orbit from its monodromy matrix.
pub fn orbit_stability(points: &[SpherePoint], params: ClassicalParams) -> Result<OrbitReport> {
    if points.is_empty() {
        return Err(Error::InvalidOrbit("empty orbit".into()));
    }
    let period = points.len();
    let mut monodromy = Matrix2::identity();
    for (i, pt) in points.iter().enumerate() {
        let next = &points[(i + 1) % period];
        let gap = kick_map(pt, params).distance(next);
        if gap > ORBIT_TOLERANCE {
            return Err(Error::InvalidOrbit(format!(
                "point {i} maps {gap:.3e} away from point {}",
                (i + 1) % period
            )));
        }
        monodromy = jacobian(pt, params) * monodromy;
    }
    let eigenvalue_magnitudes = eigen_magnitudes(&monodromy);
    let stable = eigenvalue_magnitudes
        .iter()
        .all(|&m| m <= 1.0 + STABILITY_SLACK);
    Ok(OrbitReport {
        period,
        points: points.to_vec(),
        monodromy,
        eigenvalue_magnitudes,
        stable,
    })
}

/// Bisects `κ ∈ [lo, hi]` for the point where the orbit's stability changes.
///
/// The orbit must close for every `κ` in the bracket (true for orbits that
/// are fixed by symmetry, such as the fixed point on the y axis and the
/// period-4 cycle at `p = π/2`). Stops when the bracket is narrower than `tol`.
pub fn stability_flip(points: &[SpherePoint], p: f64, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    let stable_at = |k: f64| orbit_stability(points, ClassicalParams::new(k, p)).map(|r| r.stable);
    let (mut lo, mut hi) = (lo, hi);
    let lo_stable = stable_at(lo)?;
    if lo_stable == stable_at(hi)? {
        return Err(Error::param(format!("no stability change in [{lo}, {hi}]")));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if stable_at(mid)? == lo_stable {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Follows `pt` for up to `max_period` kicks and returns the orbit if it closes.
pub fn find_periodic_orbit(
    pt: &SpherePoint,
    params: ClassicalParams,
    max_period: usize,
) -> Option<Vec<SpherePoint>> {
    let mut points = vec![*pt];
    let mut cur = *pt;
    for _ in 0..max_period {
        cur = kick_map(&cur, params);
        if cur.distance(pt) <= ORBIT_TOLERANCE {
            return Some(points);
        }
        points.push(cur);
    }
    None
}

/// Largest Lyapunov exponent per kick (natural log), from renormalised tangent growth.
pub fn lyapunov_estimate(pt: &SpherePoint, params: ClassicalParams, n: usize) -> Result<f64> {
    if n < 100 {
        return Err(Error::param(format!(
            "Lyapunov estimate needs at least 100 kicks, got {n}"
        )));
    }
    let mut cur = *pt;
    let (e1, e2) = tangent_basis(pt);
    let mut tangent = (e1 + e2).normalize();
    let mut log_growth = 0.0;
    for _ in 0..n {
        let df = map_derivative(&cur, params);
        cur = kick_map(&cur, params);
        tangent = df * tangent;
        // keep the vector in the tangent plane of the new point
        tangent -= cur.v * cur.v.dot(&tangent);
        let norm = tangent.norm();
        log_growth += norm.ln();
        tangent /= norm;
    }
    Ok(log_growth / n as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MotionClass {
    Regular,
    Chaotic,
}

impl MotionClass {
    pub fn from_exponent(lyapunov: f64) -> Self {
        if lyapunov > CHAOS_THRESHOLD {
            MotionClass::Chaotic
        } else {
            MotionClass::Regular
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            MotionClass::Regular => "regular",
            MotionClass::Chaotic => "chaotic",
        }
    }
}

/// Initial conditions for a phase portrait.
#[derive(Debug, Clone, PartialEq)]
pub enum GridSpec {
    /// Cell-centred grid: `θ_i = (i + ½)π / n_theta`, `φ_k = -π + (k + ½)2π / n_phi`.
    Grid {
        n_theta: usize,
        n_phi: usize,
    },
    Points(Vec<BlochAngles>),
}

impl GridSpec {
    pub fn initial_conditions(&self) -> Vec<BlochAngles> {
        match self {
            GridSpec::Grid { n_theta, n_phi } => {
                let mut out = Vec::with_capacity(n_theta * n_phi);
                for i in 0..*n_theta {
                    let theta = (i as f64 + 0.5) * PI / *n_theta as f64;
                    for k in 0..*n_phi {
                        let phi = -PI + (k as f64 + 0.5) * 2.0 * PI / *n_phi as f64;
                        out.push(BlochAngles::new(theta, phi).expect("grid angles in range"));
                    }
                }
                out
            }
            GridSpec::Points(p) => p.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PortraitRow {
    pub ic_index: usize,
    pub initial: BlochAngles,
    pub step: usize,
    pub point: SpherePoint,
    pub lyapunov: f64,
    pub class: MotionClass,
}

/// Stroboscopic trajectories of every initial condition, each tagged with a
/// Lyapunov classification over `max(n_steps, LYAPUNOV_KICKS)` kicks.
///
/// Rows are ordered by initial-condition index, then step.
pub fn phase_portrait(
    grid: &GridSpec,
    params: ClassicalParams,
    n_steps: usize,
) -> Result<Vec<PortraitRow>> {
    let ics = grid.initial_conditions();
    if ics.is_empty() {
        return Err(Error::param(
            "phase portrait needs at least one initial condition",
        ));
    }
    let lyap_kicks = n_steps.max(LYAPUNOV_KICKS);
    let per_ic: Vec<Vec<PortraitRow>> = ics
        .par_iter()
        .enumerate()
        .map(|(ic_index, &initial)| {
            let start = SpherePoint::from_angles(initial);
            let lyapunov = lyapunov_estimate(&start, params, lyap_kicks)?;
            let class = MotionClass::from_exponent(lyapunov);
            Ok(trajectory(&start, params, n_steps)
                .into_iter()
                .enumerate()
                .map(|(step, point)| PortraitRow {
                    ic_index,
                    initial,
                    step,
                    point,
                    lyapunov,
                    class,
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(per_ic.into_iter().flatten().collect())
}

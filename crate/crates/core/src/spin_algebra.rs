//! Finite-dimensional angular-momentum algebra in the Dicke basis.
//!
//! Every spin-`j` vector is stored over `|j,m⟩` with `m = j, j-1, …, -j`,
//! i.e. index `n = j - m` counts excitations of the equivalent `N = 2j`
//! symmetric qubits. Units have `ħ = 1`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::combinatorics::ln_choose_row;
use crate::{Error, Result};

/// Normalisation tolerance accepted by [`SpinState::new`].
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Relative size of `⟨J⟩` below which its direction is treated as undefined.
pub const DEGENERATE_DIRECTION: f64 = 1e-9;

/// A positive half-integer spin quantum number, stored as `2j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Spin {
    twice: usize,
}

impl Spin {
    pub fn from_twice(two_j: usize) -> Result<Self> {
        if two_j == 0 {
            return Err(Error::param("spin j must be positive"));
        }
        Ok(Self { twice: two_j })
    }

    pub fn new(j: f64) -> Result<Self> {
        let two_j = 2.0 * j;
        if !two_j.is_finite() || two_j < 0.5 || (two_j - two_j.round()).abs() > 1e-12 {
            return Err(Error::param(format!(
                "j = {j} is not a positive half-integer"
            )));
        }
        Self::from_twice(two_j.round() as usize)
    }

    pub fn j(self) -> f64 {
        self.twice as f64 / 2.0
    }

    /// `N = 2j`, the number of equivalent qubits.
    pub fn qubits(self) -> usize {
        self.twice
    }

    /// Hilbert-space dimension `2j + 1`.
    pub fn dim(self) -> usize {
        self.twice + 1
    }

    /// Magnetic quantum number at Dicke index `n`.
    pub fn m(self, n: usize) -> f64 {
        self.j() - n as f64
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice.is_multiple_of(2) {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl FromStr for Spin {
    type Err = Error;

    /// Accepts `4`, `2.5` or `5/2`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((num, den)) = s.split_once('/') {
            let num: usize = num
                .trim()
                .parse()
                .map_err(|_| Error::param(format!("cannot parse spin '{s}'")))?;
            return match den.trim() {
                "2" => Self::from_twice(num),
                "1" => Self::from_twice(2 * num),
                _ => Err(Error::param(format!("spin '{s}' is not a half-integer"))),
            };
        }
        let j: f64 = s
            .parse()
            .map_err(|_| Error::param(format!("cannot parse spin '{s}'")))?;
        Self::new(j)
    }
}

/// Polar and azimuthal angles of a direction; `θ ∈ [0, π]`, `φ ∈ [-π, π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochAngles {
    theta: f64,
    phi: f64,
}

impl BlochAngles {
    /// Validates `θ` and wraps `φ` into `[-π, π)`. At the poles `φ` is set to 0.
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::param("angles must be finite"));
        }
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::param(format!("theta = {theta} outside [0, pi]")));
        }
        let phi = if theta == 0.0 || theta == PI {
            0.0
        } else {
            wrap_angle(phi)
        };
        Ok(Self { theta, phi })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `(sinθ cosφ, sinθ sinφ, cosθ)`.
    pub fn unit_vector(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }
}

/// Wraps an angle into `[-π, π)`.
pub(crate) fn wrap_angle(phi: f64) -> f64 {
    let w = (phi + PI).rem_euclid(2.0 * PI) - PI;
    if w >= PI {
        -PI
    } else {
        w
    }
}

/// A normalised pure state of a spin `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinState {
    spin: Spin,
    amplitudes: DVector<Complex64>,
}

impl SpinState {
    /// Wraps `amplitudes` (ordered `m = j … -j`); rejects wrong length or norm.
    pub fn new(spin: Spin, amplitudes: DVector<Complex64>) -> Result<Self> {
        if amplitudes.len() != spin.dim() {
            return Err(Error::param(format!(
                "spin {spin} needs {} amplitudes, got {}",
                spin.dim(),
                amplitudes.len()
            )));
        }
        let norm_sqr = amplitudes.norm_squared();
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::InvalidState(format!("squared norm {norm_sqr} != 1")));
        }
        Ok(Self { spin, amplitudes })
    }

    /// Like [`SpinState::new`] but rescales to unit norm first.
    pub fn normalized(spin: Spin, mut amplitudes: DVector<Complex64>) -> Result<Self> {
        let norm = amplitudes.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("cannot normalise a zero vector".into()));
        }
        amplitudes.unscale_mut(norm);
        Self::new(spin, amplitudes)
    }

    /// The Dicke state with `n` excitations, `|j, j-n⟩`.
    pub fn dicke(spin: Spin, n: usize) -> Result<Self> {
        if n > spin.qubits() {
            return Err(Error::param(format!(
                "excitation {n} exceeds 2j = {}",
                spin.qubits()
            )));
        }
        let mut amplitudes = DVector::zeros(spin.dim());
        amplitudes[n] = Complex64::new(1.0, 0.0);
        Ok(Self { spin, amplitudes })
    }

    pub(crate) fn from_parts_unchecked(spin: Spin, amplitudes: DVector<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), spin.dim());
        Self { spin, amplitudes }
    }

    pub fn spin(&self) -> Spin {
        self.spin
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> DVector<Complex64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }
}

/// Dense `J_x`, `J_y`, `J_z` for a given spin.
#[derive(Debug, Clone)]
pub struct AngularMomentumOps {
    pub spin: Spin,
    pub jx: DMatrix<Complex64>,
    pub jy: DMatrix<Complex64>,
    pub jz: DMatrix<Complex64>,
}

impl AngularMomentumOps {
    /// `J_x² + J_y² + J_z²`.
    pub fn casimir(&self) -> DMatrix<Complex64> {
        &self.jx * &self.jx + &self.jy * &self.jy + &self.jz * &self.jz
    }
}

/// `⟨j,m+1|J₊|j,m⟩`, the raising element out of Dicke index `n` (to `n-1`).
pub(crate) fn raising_element(spin: Spin, n: usize) -> f64 {
    let j = spin.j();
    let m = spin.m(n);
    (j * (j + 1.0) - m * (m + 1.0)).max(0.0).sqrt()
}

/// The real matrix of `J₊` in the Dicke ordering.
pub(crate) fn raising_matrix(spin: Spin) -> DMatrix<f64> {
    let d = spin.dim();
    let mut jp = DMatrix::zeros(d, d);
    for n in 1..d {
        jp[(n - 1, n)] = raising_element(spin, n);
    }
    jp
}

pub fn angular_momentum_ops(spin: Spin) -> AngularMomentumOps {
    let d = spin.dim();
    let jp = raising_matrix(spin).map(|x| Complex64::new(x, 0.0));
    let jm = jp.adjoint();
    let jx = (&jp + &jm) * Complex64::new(0.5, 0.0);
    // (J₊ - J₋) / 2i
    let jy = (&jp - &jm) * Complex64::new(0.0, -0.5);
    let jz = DMatrix::from_fn(d, d, |r, c| {
        if r == c {
            Complex64::new(spin.m(r), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    AngularMomentumOps { spin, jx, jy, jz }
}

/// Spin coherent state at `angles`, built from the closed-form Dicke expansion
///
/// `c_n = sqrt(C(2j, n)) cos(θ/2)^(2j-n) sin(θ/2)^n e^(i n φ)`.
///
/// Magnitudes are evaluated in log-space so large `j` neither overflows the
/// binomial nor underflows the powers prematurely.
pub fn scs_state(spin: Spin, angles: BlochAngles) -> SpinState {
    let n_total = spin.qubits();
    let half = angles.theta() / 2.0;
    let (s, c) = half.sin_cos();
    let ln_choose = ln_choose_row(n_total);
    let (ln_c, ln_s) = (c.ln(), s.ln());
    let amplitudes = DVector::from_fn(spin.dim(), |n, _| {
        let up = n_total - n;
        // 0^0 = 1 at the poles.
        let mut ln_mag = 0.5 * ln_choose[n];
        if up > 0 {
            ln_mag += up as f64 * ln_c;
        }
        if n > 0 {
            ln_mag += n as f64 * ln_s;
        }
        let mag = ln_mag.exp();
        if mag == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(mag, n as f64 * angles.phi())
    });
    SpinState::from_parts_unchecked(spin, amplitudes)
}

/// `(⟨J_x⟩, ⟨J_y⟩, ⟨J_z⟩)` evaluated from the tridiagonal structure.
pub fn expectation_j(state: &SpinState) -> [f64; 3] {
    let spin = state.spin();
    let c = state.amplitudes();
    let mut jz = 0.0;
    let mut jplus = Complex64::new(0.0, 0.0);
    for n in 0..spin.dim() {
        jz += c[n].norm_sqr() * spin.m(n);
        if n > 0 {
            jplus += c[n - 1].conj() * c[n] * raising_element(spin, n);
        }
    }
    [jplus.re, jplus.im, jz]
}

/// Direction extracted from an expectation vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Direction {
    Angles(BlochAngles),
    /// `|⟨J⟩|` is too small for a direction to be meaningful.
    Degenerate,
}

impl Direction {
    pub fn angles(self) -> Option<BlochAngles> {
        match self {
            Direction::Angles(a) => Some(a),
            Direction::Degenerate => None,
        }
    }
}

/// Direction of `v` as Bloch angles, normalising by `|v|` rather than by `j`.
pub fn bloch_from_expectation(v: [f64; 3], spin: Spin) -> Result<Direction> {
    let j = spin.j();
    let len = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if !len.is_finite() || len > j * (1.0 + 1e-9) {
        return Err(Error::param(format!("|<J>| = {len} exceeds j = {j}")));
    }
    if len < DEGENERATE_DIRECTION * j {
        return Ok(Direction::Degenerate);
    }
    let theta = (v[2] / len).clamp(-1.0, 1.0).acos();
    let phi = if v[0] == 0.0 && v[1] == 0.0 {
        0.0
    } else {
        v[1].atan2(v[0])
    };
    BlochAngles::new(theta, phi).map(Direction::Angles)
}

/// `⟨a|b⟩`.
pub fn state_overlap(a: &SpinState, b: &SpinState) -> Result<Complex64> {
    if a.spin() != b.spin() {
        return Err(Error::param(format!(
            "overlap of spin {} with spin {}",
            a.spin(),
            b.spin()
        )));
    }
    Ok(a.amplitudes().dotc(b.amplitudes()))
}

//! Floquet unitary of the quantum kicked top and kick-by-kick propagation.
//!
//! `U = exp(-i κ/(2j) J_z²) exp(-i p J_y)`. The torsion factor is a diagonal
//! phase. The rotation `exp(-i p J_y)` is real orthogonal in the Dicke basis
//! and is built from the eigendecomposition of the real symmetric tridiagonal
//! `J_x`, using `J_y = R J_x R†` with `R = exp(-i π/2 J_z)`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::spin_algebra::{raising_element, Spin, SpinState};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KickedTopParams {
    pub spin: Spin,
    pub kappa: f64,
    pub p: f64,
}

impl KickedTopParams {
    pub fn new(spin: Spin, kappa: f64, p: f64) -> Self {
        Self { spin, kappa, p }
    }

    pub fn classical(&self) -> crate::classical_top::ClassicalParams {
        crate::classical_top::ClassicalParams::new(self.kappa, self.p)
    }
}

/// One-period propagator, stored in factored form `U = diag(torsion) · rotation`.
#[derive(Debug, Clone)]
pub struct FloquetUnitary {
    params: KickedTopParams,
    rotation: DMatrix<f64>,
    torsion: DVector<Complex64>,
}

/// `exp(-i p J_y)` in the Dicke basis.
pub fn y_rotation(spin: Spin, p: f64) -> DMatrix<f64> {
    let d = spin.dim();
    let jx = DMatrix::from_fn(d, d, |r, c| {
        if c == r + 1 {
            0.5 * raising_element(spin, c)
        } else if r == c + 1 {
            0.5 * raising_element(spin, r)
        } else {
            0.0
        }
    });
    let eig = SymmetricEigen::new(jx);
    let v = &eig.eigenvectors;
    let scaled = |f: fn(f64) -> f64| {
        let mut w = v.clone();
        for (k, mut col) in w.column_iter_mut().enumerate() {
            col *= f(p * eig.eigenvalues[k]);
        }
        &w * v.transpose()
    };
    // exp(-i p J_x) = C - i S
    let cos_part = scaled(f64::cos);
    let sin_part = scaled(f64::sin);
    // (R M R†)_{ab} = e^{-iπ/2 (m_a - m_b)} M_{ab}, and m_a - m_b = b - a.
    DMatrix::from_fn(d, d, |a, b| {
        let (c, s) = (cos_part[(a, b)], sin_part[(a, b)]);
        // Re[(-i)^k (c - i s)]
        match (b as isize - a as isize).rem_euclid(4) {
            0 => c,
            1 => -s,
            2 => -c,
            _ => s,
        }
    })
}

pub fn build_unitary(params: KickedTopParams) -> FloquetUnitary {
    let spin = params.spin;
    let scale = params.kappa / (2.0 * spin.j());
    let torsion = DVector::from_fn(spin.dim(), |n, _| {
        let m = spin.m(n);
        Complex64::from_polar(1.0, -scale * m * m)
    });
    FloquetUnitary {
        params,
        rotation: y_rotation(spin, params.p),
        torsion,
    }
}

impl FloquetUnitary {
    pub fn params(&self) -> KickedTopParams {
        self.params
    }

    pub fn dim(&self) -> usize {
        self.torsion.len()
    }

    /// Dense `U`.
    pub fn matrix(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.dim(), self.dim(), |r, c| {
            self.torsion[r] * self.rotation[(r, c)]
        })
    }

    /// `U ψ` for a raw amplitude vector of matching length.
    pub fn apply_amplitudes(&self, psi: &DVector<Complex64>) -> DVector<Complex64> {
        let re = psi.map(|z| z.re);
        let im = psi.map(|z| z.im);
        let rot_re = &self.rotation * re;
        let rot_im = &self.rotation * im;
        DVector::from_fn(self.dim(), |n, _| {
            self.torsion[n] * Complex64::new(rot_re[n], rot_im[n])
        })
    }

    pub fn apply(&self, state: &SpinState) -> Result<SpinState> {
        self.check_spin(state)?;
        Ok(SpinState::from_parts_unchecked(
            state.spin(),
            self.apply_amplitudes(state.amplitudes()),
        ))
    }

    fn check_spin(&self, state: &SpinState) -> Result<()> {
        if state.spin() != self.params.spin {
            return Err(Error::param(format!(
                "state has spin {}, unitary is for spin {}",
                state.spin(),
                self.params.spin
            )));
        }
        Ok(())
    }

    /// Lazily yields `ψ, Uψ, U²ψ, …` without bound.
    pub fn kicks<'a>(&'a self, state: &SpinState) -> Result<Kicks<'a>> {
        self.check_spin(state)?;
        Ok(Kicks {
            unitary: self,
            next: Some(state.clone()),
        })
    }
}

/// Iterator over successive kicks; see [`FloquetUnitary::kicks`].
pub struct Kicks<'a> {
    unitary: &'a FloquetUnitary,
    next: Option<SpinState>,
}

impl Iterator for Kicks<'_> {
    type Item = SpinState;

    fn next(&mut self) -> Option<SpinState> {
        let current = self.next.take()?;
        let spin = current.spin();
        self.next = Some(SpinState::from_parts_unchecked(
            spin,
            self.unitary.apply_amplitudes(current.amplitudes()),
        ));
        Some(current)
    }
}

/// `[ψ, Uψ, …, Uⁿψ]`.
pub fn evolve(
    state: &SpinState,
    unitary: &FloquetUnitary,
    n_kicks: usize,
) -> Result<Vec<SpinState>> {
    Ok(unitary.kicks(state)?.take(n_kicks + 1).collect())
}

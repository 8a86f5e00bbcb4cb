//! Brute-force reference pipeline over the full `2^N` qubit space.
//!
//! Used only to check the symmetric-subspace shortcuts on small systems.
//! Qubit 0 is the most significant bit of a basis index, `|1⟩` counts as an
//! excitation, and partial traces keep the first `q` qubits.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::combinatorics::choose;
use crate::spin_algebra::{angular_momentum_ops, BlochAngles, Spin, SpinState};
use crate::{Error, Result};

/// Largest qubit count the oracle accepts.
pub const MAX_QUBITS: usize = 12;

/// A pure state of `N` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct FullState {
    qubits: usize,
    amplitudes: DVector<Complex64>,
}

impl FullState {
    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn inner(&self, other: &FullState) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }
}

/// Spreads Dicke amplitude `c_n` evenly over the `C(N, n)` bitstrings of weight `n`.
pub fn dicke_to_full(state: &SpinState) -> Result<FullState> {
    let n = state.spin().qubits();
    if n > MAX_QUBITS {
        return Err(Error::Capacity(format!(
            "{n} qubits exceeds oracle limit {MAX_QUBITS}"
        )));
    }
    let c = state.amplitudes();
    let scale: Vec<f64> = (0..=n).map(|k| choose(n, k).sqrt().recip()).collect();
    let amplitudes = DVector::from_fn(1 << n, |b, _| {
        let weight = b.count_ones() as usize;
        c[weight] * scale[weight]
    });
    Ok(FullState {
        qubits: n,
        amplitudes,
    })
}

/// `|a⟩^{⊗N}` for a single-qubit state `a = (a₀, a₁)`.
pub fn tensor_power(qubit: [Complex64; 2], n: usize) -> Result<FullState> {
    if n > MAX_QUBITS {
        return Err(Error::Capacity(format!(
            "{n} qubits exceeds oracle limit {MAX_QUBITS}"
        )));
    }
    let amplitudes = DVector::from_fn(1 << n, |b, _| {
        (0..n).fold(Complex64::new(1.0, 0.0), |acc, bit| {
            acc * qubit[(b >> bit) & 1]
        })
    });
    Ok(FullState {
        qubits: n,
        amplitudes,
    })
}

/// Traces out the last `N - q` qubits.
pub fn brute_partial_trace(full: &FullState, q: usize) -> Result<DMatrix<Complex64>> {
    let n = full.qubits;
    if q == 0 || q >= n {
        return Err(Error::param(format!("cannot keep {q} of {n} qubits")));
    }
    let kept = 1usize << q;
    let traced = 1usize << (n - q);
    let psi = &full.amplitudes;
    Ok(DMatrix::from_fn(kept, kept, |a, ap| {
        (0..traced)
            .map(|b| psi[a * traced + b] * psi[ap * traced + b].conj())
            .sum()
    }))
}

/// Von Neumann entropy (bits) of the first `q` qubits, from whichever side of
/// the cut has the smaller Gram matrix (both share their nonzero spectrum).
pub fn brute_entropy(full: &FullState, q: usize) -> Result<f64> {
    let n = full.qubits;
    if q == 0 || q >= n {
        return Err(Error::param(format!("cannot keep {q} of {n} qubits")));
    }
    let (rows, cols) = (1usize << q, 1usize << (n - q));
    // ψ reshaped so that M[a, b] = ψ[a·cols + b]
    let m = DMatrix::from_fn(rows, cols, |a, b| full.amplitudes[a * cols + b]);
    let gram = if rows <= cols {
        &m * m.adjoint()
    } else {
        m.adjoint() * &m
    };
    let eig = SymmetricEigen::new(gram).eigenvalues;
    Ok(eig
        .iter()
        .filter(|&&l| l > 1e-12)
        .map(|&l| -l * l.log2())
        .sum())
}

/// A `2^q` matrix restricted to the `q`-qubit symmetric subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricProjection {
    /// `(q+1) × (q+1)`, in Dicke order `r = 0..=q`.
    pub matrix: DMatrix<Complex64>,
    /// Trace carried outside the symmetric sector.
    pub residual: f64,
}

/// Changes basis to normalised `q`-qubit Dicke states and reports the leftover weight.
pub fn symmetric_project(dm: &DMatrix<Complex64>) -> Result<SymmetricProjection> {
    let dim = dm.nrows();
    if !dm.is_square() || !dim.is_power_of_two() || dim < 2 {
        return Err(Error::param(format!(
            "{dim}x{} is not a qubit operator",
            dm.ncols()
        )));
    }
    let q = dim.trailing_zeros() as usize;
    let isometry = DMatrix::from_fn(dim, q + 1, |b, r| {
        if b.count_ones() as usize == r {
            Complex64::new(choose(q, r).sqrt().recip(), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let matrix = isometry.adjoint() * dm * &isometry;
    let residual = dm.trace().re - matrix.trace().re;
    Ok(SymmetricProjection { matrix, residual })
}

/// `exp(i θ (J_x sinφ - J_y cosφ)) |j,j⟩` via Hermitian eigendecomposition.
pub fn scs_by_exponential(spin: Spin, angles: BlochAngles) -> SpinState {
    let ops = angular_momentum_ops(spin);
    let (sp, cp) = angles.phi().sin_cos();
    let generator = &ops.jx * Complex64::new(sp, 0.0) - &ops.jy * Complex64::new(cp, 0.0);
    let eig = SymmetricEigen::new(generator);
    let v = &eig.eigenvectors;
    // column 0 of V e^{iθΛ} V†
    let amplitudes = DVector::from_fn(spin.dim(), |r, _| {
        (0..spin.dim())
            .map(|k| {
                v[(r, k)]
                    * Complex64::from_polar(1.0, angles.theta() * eig.eigenvalues[k])
                    * v[(0, k)].conj()
            })
            .sum()
    });
    SpinState::normalized(spin, amplitudes).expect("unitary image of a unit vector")
}

/// Largest amplitude difference after removing the relative global phase.
pub fn phase_insensitive_distance(a: &DVector<Complex64>, b: &DVector<Complex64>) -> f64 {
    let ov = a.dotc(b);
    let phase = if ov.norm() > 0.0 {
        ov / ov.norm()
    } else {
        Complex64::new(1.0, 0.0)
    };
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x * phase - y).norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entanglement_bounds::{reduced_state, von_neumann_entropy, DensityMatrix};
    use crate::spin_algebra::scs_state;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn spin(j: f64) -> Spin {
        Spin::new(j).unwrap()
    }

    fn random_state(rng: &mut ChaCha8Rng, sp: Spin) -> SpinState {
        let amps = DVector::from_fn(sp.dim(), |_, _| {
            Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        SpinState::normalized(sp, amps).unwrap()
    }

    #[test]
    fn highest_weight_is_all_zeros() {
        let full = dicke_to_full(&SpinState::dicke(spin(2.5), 0).unwrap()).unwrap();
        assert_eq!(full.amplitudes()[0], Complex64::new(1.0, 0.0));
        assert!(full.amplitudes().iter().skip(1).all(|z| z.norm() == 0.0));
    }

    #[test]
    fn single_excitation_is_bell_like() {
        let full = dicke_to_full(&SpinState::dicke(spin(1.0), 1).unwrap()).unwrap();
        let a = full.amplitudes();
        assert!((a[1].re - FRAC_1_SQRT_2).abs() < 1e-15 && (a[2].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(a[0].norm() + a[3].norm(), 0.0);
        let rho = brute_partial_trace(&full, 1).unwrap();
        assert!((rho[(0, 0)].re - 0.5).abs() < 1e-15 && (rho[(1, 1)].re - 0.5).abs() < 1e-15);
        assert!(rho[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn capacity_is_enforced() {
        assert!(matches!(
            dicke_to_full(&SpinState::dicke(spin(6.5), 0).unwrap()),
            Err(Error::Capacity(_))
        ));
        assert!(dicke_to_full(&SpinState::dicke(spin(6.0), 0).unwrap()).is_ok());
    }

    #[test]
    fn coherent_state_is_a_tensor_power() {
        for (j, theta, phi) in [(0.5, 0.4, 1.0), (3.0, 2.1, 0.9), (5.5, 1.5, -2.7)] {
            let a = BlochAngles::new(theta, phi).unwrap();
            let full = dicke_to_full(&scs_state(spin(j), a)).unwrap();
            let qubit = [
                Complex64::new((theta / 2.0).cos(), 0.0),
                Complex64::from_polar((theta / 2.0).sin(), phi),
            ];
            let product = tensor_power(qubit, spin(j).qubits()).unwrap();
            let err = (full.amplitudes() - product.amplitudes()).camax();
            assert!(err <= 1e-12, "j={j}: {err}");
        }
    }

    #[test]
    fn product_state_reduces_to_pure() {
        let qubit = [Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)];
        let full = tensor_power(qubit, 5).unwrap();
        let rho = brute_partial_trace(&full, 2).unwrap();
        let entropy = von_neumann_entropy(&DensityMatrix::new(rho).unwrap()).unwrap();
        assert!(entropy < 1e-10);
        assert!(brute_entropy(&full, 3).unwrap() < 1e-10);
        assert!(brute_partial_trace(&full, 5).is_err());
        assert!(brute_partial_trace(&full, 0).is_err());
    }

    #[test]
    fn inner_products_are_preserved() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for two_j in 1..=10 {
            let sp = Spin::from_twice(two_j).unwrap();
            let (a, b) = (random_state(&mut rng, sp), random_state(&mut rng, sp));
            let dicke = a.amplitudes().dotc(b.amplitudes());
            let full = dicke_to_full(&a)
                .unwrap()
                .inner(&dicke_to_full(&b).unwrap());
            assert!((dicke - full).norm() <= 1e-12);
        }
    }

    #[test]
    fn maximally_mixed_pair_has_singlet_residual() {
        let dm = DMatrix::from_fn(4, 4, |r, c| {
            Complex64::new(if r == c { 0.25 } else { 0.0 }, 0.0)
        });
        let proj = symmetric_project(&dm).unwrap();
        assert_eq!(proj.matrix.nrows(), 3);
        assert!((proj.matrix.trace().re - 0.75).abs() < 1e-15);
        assert!((proj.residual - 0.25).abs() < 1e-15);
    }

    #[test]
    fn reduction_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = random_state(&mut rng, spin(3.0));
        let brute = brute_partial_trace(&dicke_to_full(&s).unwrap(), 2).unwrap();
        let proj = symmetric_project(&brute).unwrap();
        assert_eq!(proj.matrix.nrows(), 3);
        assert!(proj.residual.abs() <= 1e-10);
        let fast = reduced_state(&s, 2).unwrap();
        assert!((fast.matrix() - &proj.matrix).camax() <= 1e-10);
        let direct = von_neumann_entropy(&DensityMatrix::new(brute).unwrap()).unwrap();
        let full = dicke_to_full(&s).unwrap();
        assert!((brute_entropy(&full, 2).unwrap() - direct).abs() < 1e-12);
        assert!((brute_entropy(&full, 4).unwrap() - direct).abs() < 1e-12);
    }

    #[test]
    fn exponential_agrees_with_closed_form() {
        let a = BlochAngles::new(1.2, 2.2).unwrap();
        for j in [0.5, 1.0, 4.5] {
            let d = phase_insensitive_distance(
                scs_by_exponential(spin(j), a).amplitudes(),
                scs_state(spin(j), a).amplitudes(),
            );
            assert!(d <= 1e-10, "j={j}: {d}");
        }
    }
}

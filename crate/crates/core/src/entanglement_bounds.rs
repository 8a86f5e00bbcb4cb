//! Reduced states on the symmetric subspace, entropies, trace distances, and
//! entropy upper bounds from distances to coherent-state references.
//!
//! For a `q`-qubit block of a spin-`j` state the reduced state lives on the
//! `q+1` dimensional symmetric subspace, so the Fannes-Audenaert bound is
//! applied with `d = q + 1`. A coherent state reduces to a pure coherent
//! state of spin `q/2`, which has zero entropy; the distance of the actual
//! reduced state to it then bounds the entanglement.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::classical_top::{trajectory, SpherePoint};
use crate::combinatorics::{choose, ln_choose_row};
use crate::quantum_dynamics::FloquetUnitary;
use crate::spin_algebra::{
    bloch_from_expectation, expectation_j, scs_state, state_overlap, BlochAngles, Direction, Spin,
    SpinState,
};
use crate::{Error, Result};

pub const HERMITIAN_TOLERANCE: f64 = 1e-12;
pub const TRACE_TOLERANCE: f64 = 1e-10;
/// Eigenvalues in `[-EIGEN_CLIP, 0)` are rounding noise and treated as zero.
pub const EIGEN_CLIP: f64 = 1e-10;
/// Eigenvalues below this do not contribute to the entropy.
pub const ENTROPY_CUTOFF: f64 = 1e-12;

/// Hermitian, positive semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(Error::InvalidState(
                "density matrix must be square and non-empty".into(),
            ));
        }
        let skew = (&matrix - matrix.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if skew > HERMITIAN_TOLERANCE {
            return Err(Error::InvalidState(format!(
                "not Hermitian (deviation {skew:.3e})"
            )));
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > TRACE_TOLERANCE || trace.im.abs() > TRACE_TOLERANCE {
            return Err(Error::InvalidState(format!("trace {trace} != 1")));
        }
        let rho = Self { matrix };
        let min = rho.eigenvalues().min();
        if min < -EIGEN_CLIP {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        Ok(rho)
    }

    /// `|ψ⟩⟨ψ|` for a unit vector.
    pub fn pure(psi: &DVector<Complex64>) -> Self {
        Self {
            matrix: psi * psi.adjoint(),
        }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Result<Self> {
        let d = diag.len();
        Self::new(DMatrix::from_fn(d, d, |r, c| {
            if r == c {
                Complex64::new(diag[r], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> DVector<f64> {
        hermitian_eigenvalues(&self.matrix)
    }
}

fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> DVector<f64> {
    SymmetricEigen::new(m.clone()).eigenvalues
}

/// Precomputed Dicke-decomposition weights for reducing spin `j` to `q` qubits.
///
/// With `c_n` the Dicke amplitudes, the reduced state is
/// `ρ_{r,r'} = Σ_s A(r,s) conj(A(r',s))`, where
/// `A(r,s) = c_{r+s} sqrt(C(q,r) C(N-q,s) / C(N,r+s))`.
#[derive(Debug, Clone)]
pub struct SymmetricReducer {
    spin: Spin,
    q: usize,
    /// `(q+1) × (N-q+1)`.
    weights: DMatrix<f64>,
}

impl SymmetricReducer {
    pub fn new(spin: Spin, q: usize) -> Result<Self> {
        let n = spin.qubits();
        if q == 0 || q >= n {
            return Err(Error::param(format!("cannot keep {q} of {n} qubits")));
        }
        let rest = n - q;
        let weights = if n <= 60 {
            DMatrix::from_fn(q + 1, rest + 1, |r, s| {
                (choose(q, r) * choose(rest, s) / choose(n, r + s)).sqrt()
            })
        } else {
            let (lq, lrest, ln) = (ln_choose_row(q), ln_choose_row(rest), ln_choose_row(n));
            DMatrix::from_fn(q + 1, rest + 1, |r, s| {
                (0.5 * (lq[r] + lrest[s] - ln[r + s])).exp()
            })
        };
        Ok(Self { spin, q, weights })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn reduce(&self, state: &SpinState) -> Result<DensityMatrix> {
        if state.spin() != self.spin {
            return Err(Error::param(format!(
                "reducer built for spin {}, got spin {}",
                self.spin,
                state.spin()
            )));
        }
        let c = state.amplitudes();
        let (dq, ds) = self.weights.shape();
        let a = DMatrix::from_fn(dq, ds, |r, s| c[r + s] * self.weights[(r, s)]);
        let mut rho = DMatrix::zeros(dq, dq);
        for r in 0..dq {
            for rp in r..dq {
                let v: Complex64 = (0..ds).map(|s| a[(r, s)] * a[(rp, s)].conj()).sum();
                rho[(r, rp)] = v;
                rho[(rp, r)] = v.conj();
            }
            rho[(r, r)].im = 0.0;
        }
        Ok(DensityMatrix { matrix: rho })
    }
}

/// Reduced state of the first `q` of the `2j` symmetric qubits, on the `(q+1)`-dim symmetric subspace.
pub fn reduced_state(state: &SpinState, q: usize) -> Result<DensityMatrix> {
    SymmetricReducer::new(state.spin(), q)?.reduce(state)
}

/// `-Σ λ log₂ λ`, in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let mut s = 0.0;
    for &lambda in rho.eigenvalues().iter() {
        if lambda < -EIGEN_CLIP {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {lambda:.3e}"
            )));
        }
        if lambda > ENTROPY_CUTOFF {
            s -= lambda * lambda.log2();
        }
    }
    Ok(s.max(0.0))
}

/// `½ ‖ρ - σ‖₁`, clipped to `[0, 1]`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::param(format!(
            "trace distance between dimensions {} and {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let diff = rho.matrix() - sigma.matrix();
    let half_norm = 0.5
        * hermitian_eigenvalues(&diff)
            .iter()
            .map(|l| l.abs())
            .sum::<f64>();
    Ok(half_norm.clamp(0.0, 1.0))
}

/// Binary entropy in bits, with `h(0) = h(1) = 0`.
pub fn binary_entropy(x: f64) -> f64 {
    let term = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
    term(x) + term(1.0 - x)
}

/// Fannes-Audenaert right-hand side `D log₂(d-1) + h(D)`.
pub fn fa_rhs(distance: f64, d: usize) -> Result<f64> {
    if d < 2 {
        return Err(Error::param(format!("dimension {d} < 2")));
    }
    if !(-1e-12..=1.0 + 1e-12).contains(&distance) {
        return Err(Error::param(format!(
            "trace distance {distance} outside [0, 1]"
        )));
    }
    let distance = distance.clamp(0.0, 1.0);
    Ok(distance * ((d - 1) as f64).log2() + binary_entropy(distance))
}

/// Full-state trace distance between two pure states, `sqrt(1 - |⟨a|b⟩|²)`.
///
/// Evaluated as the norm of the part of `b` orthogonal to `a`, which stays
/// accurate when the states nearly coincide.
pub fn pure_trace_distance(a: &SpinState, b: &SpinState) -> Result<f64> {
    let ov = state_overlap(a, b)?;
    let residual = b.amplitudes() - a.amplitudes() * ov;
    Ok(residual.norm().min(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LooseBound {
    pub distance: f64,
    pub value: f64,
    /// `distance ≤ 1 - 1/d`, where the right-hand side is still monotone.
    pub valid: bool,
}

/// Cheap bound from the full-state distance to `reference`.
pub fn loose_bound(state: &SpinState, reference: &SpinState, d: usize) -> Result<LooseBound> {
    let distance = pure_trace_distance(state, reference)?;
    let value = fa_rhs(distance, d)?;
    let valid = distance <= 1.0 - 1.0 / d as f64;
    Ok(LooseBound {
        distance,
        value,
        valid,
    })
}

/// Everything computed about one `q`-qubit block at one kick.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundRecord {
    pub kick: usize,
    pub q: usize,
    /// Entropy of the reduced state, bits.
    pub entropy: f64,
    /// Distance to the reduced coherent state along `⟨J⟩`; absent when that direction is degenerate.
    pub d_re: Option<f64>,
    /// Distance to the reduced coherent state at the classical point.
    pub d_re_prime: Option<f64>,
    /// The distance actually fed into the bound.
    pub bound_distance: f64,
    pub bound: f64,
    pub loose: Option<LooseBound>,
    pub expectation: [f64; 3],
    pub classical: Option<SpherePoint>,
    pub degenerate_direction: bool,
}

impl BoundRecord {
    pub fn slack(&self) -> f64 {
        self.bound - self.entropy
    }
}

/// Builds [`BoundRecord`]s for one spin and partition; holds the reducer.
#[derive(Debug, Clone)]
pub struct BoundEvaluator {
    reducer: SymmetricReducer,
}

impl BoundEvaluator {
    pub fn new(spin: Spin, q: usize) -> Result<Self> {
        Ok(Self {
            reducer: SymmetricReducer::new(spin, q)?,
        })
    }

    pub fn q(&self) -> usize {
        self.reducer.q()
    }

    /// Entropy of the reduced state only.
    pub fn entropy(&self, state: &SpinState) -> Result<f64> {
        von_neumann_entropy(&self.reducer.reduce(state)?)
    }

    pub fn record(
        &self,
        state: &SpinState,
        classical: Option<&SpherePoint>,
        kick: usize,
    ) -> Result<BoundRecord> {
        let spin = state.spin();
        let q = self.q();
        let d = q + 1;
        let rho = self.reducer.reduce(state)?;
        let entropy = von_neumann_entropy(&rho)?;
        let expectation = expectation_j(state);
        let direction = bloch_from_expectation(expectation, spin)?;
        let small_spin = Spin::from_twice(q)?;

        let distance_to = |angles: BlochAngles| -> Result<f64> {
            let reference = DensityMatrix::pure(scs_state(small_spin, angles).amplitudes());
            trace_distance(&rho, &reference)
        };

        let ev_angles = direction.angles();
        let cl_angles = classical.map(|p| p.to_angles());
        let d_re = ev_angles.map(distance_to).transpose()?;
        let d_re_prime = cl_angles.map(distance_to).transpose()?;
        let degenerate_direction = matches!(direction, Direction::Degenerate);

        let bound_distance = match (d_re, d_re_prime) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            // Any pure reference still gives a valid bound; fall back to |j,j⟩.
            (None, None) => distance_to(BlochAngles::new(0.0, 0.0)?)?,
        };
        let bound = fa_rhs(bound_distance, d)?;

        // Loose bound against whichever full coherent state is closer.
        let loose = ev_angles
            .into_iter()
            .chain(cl_angles)
            .map(|a| loose_bound(state, &scs_state(spin, a), d))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .min_by(|a, b| a.distance.total_cmp(&b.distance));

        Ok(BoundRecord {
            kick,
            q,
            entropy,
            d_re,
            d_re_prime,
            bound_distance,
            bound,
            loose,
            expectation,
            classical: classical.copied(),
            degenerate_direction,
        })
    }
}

/// One [`BoundRecord`] for `q` at kick `kick`.
pub fn bound_record(
    state: &SpinState,
    q: usize,
    classical: Option<&SpherePoint>,
    kick: usize,
) -> Result<BoundRecord> {
    BoundEvaluator::new(state.spin(), q)?.record(state, classical, kick)
}

/// Evolves the coherent state at `start` and records bounds for every kick and partition.
///
/// The classical reference at kick `t` is the `t`-fold classical image of
/// `start`. Records are ordered by kick, then by the order of `partitions`.
pub fn bound_trajectory(
    unitary: &FloquetUnitary,
    start: BlochAngles,
    kicks: usize,
    partitions: &[usize],
) -> Result<Vec<BoundRecord>> {
    let params = unitary.params();
    let evaluators = partitions
        .iter()
        .map(|&q| BoundEvaluator::new(params.spin, q))
        .collect::<Result<Vec<_>>>()?;
    let classical = trajectory(&SpherePoint::from_angles(start), params.classical(), kicks);
    let mut out = Vec::with_capacity((kicks + 1) * partitions.len());
    for (kick, state) in unitary
        .kicks(&scs_state(params.spin, start))?
        .take(kicks + 1)
        .enumerate()
    {
        for ev in &evaluators {
            out.push(ev.record(&state, Some(&classical[kick]), kick)?);
        }
    }
    Ok(out)
}

/// Largest entropy and bound reached over a run for a single partition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunMaximum {
    pub max_entropy: f64,
    pub max_bound: f64,
    /// First kick attaining `max_entropy`.
    pub argmax_kick: usize,
}

impl RunMaximum {
    pub fn from_records<'a>(records: impl IntoIterator<Item = &'a BoundRecord>) -> Option<Self> {
        records.into_iter().fold(None, |acc, r| {
            Some(match acc {
                None => RunMaximum {
                    max_entropy: r.entropy,
                    max_bound: r.bound,
                    argmax_kick: r.kick,
                },
                Some(m) => RunMaximum {
                    max_entropy: m.max_entropy.max(r.entropy),
                    max_bound: m.max_bound.max(r.bound),
                    argmax_kick: if r.entropy > m.max_entropy {
                        r.kick
                    } else {
                        m.argmax_kick
                    },
                },
            })
        })
    }
}

/// Largest `|⟨SCS_a|SCS_b⟩|` over distinct pairs of points.
pub fn orbit_overlap_criterion(orbit: &[BlochAngles], spin: Spin) -> Result<f64> {
    if orbit.len() < 2 {
        return Err(Error::param("overlap criterion needs at least two points"));
    }
    let states: Vec<_> = orbit.iter().map(|&a| scs_state(spin, a)).collect();
    let mut worst: f64 = 0.0;
    for (i, a) in states.iter().enumerate() {
        for b in &states[i + 1..] {
            worst = worst.max(state_overlap(a, b)?.norm());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical_top::{kick_map, ClassicalParams};
    use crate::quantum_dynamics::{build_unitary, KickedTopParams};
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn spin(j: f64) -> Spin {
        Spin::new(j).unwrap()
    }

    fn angles(t: f64, p: f64) -> BlochAngles {
        BlochAngles::new(t, p).unwrap()
    }

    #[test]
    fn coherent_states_reduce_to_pure_states() {
        for (j, q) in [(4.0, 1), (4.0, 2), (50.0, 2), (400.0, 3)] {
            let s = scs_state(spin(j), angles(1.3, -0.8));
            let rho = reduced_state(&s, q).unwrap();
            assert!(von_neumann_entropy(&rho).unwrap() < 1e-10);
            let reference = DensityMatrix::pure(
                scs_state(Spin::from_twice(q).unwrap(), angles(1.3, -0.8)).amplitudes(),
            );
            assert!(trace_distance(&rho, &reference).unwrap() < 1e-7);
        }
    }

    #[test]
    fn single_excitation_of_two_qubits_is_maximally_mixed() {
        let s = SpinState::dicke(spin(1.0), 1).unwrap();
        let rho = reduced_state(&s, 1).unwrap();
        let expected = DensityMatrix::from_real_diagonal(&[0.5, 0.5]).unwrap();
        assert!((rho.matrix() - expected.matrix()).camax() < 1e-15);
        assert!((von_neumann_entropy(&rho).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn partition_range_is_checked() {
        let s = SpinState::dicke(spin(2.0), 0).unwrap();
        assert!(reduced_state(&s, 0).is_err());
        assert!(reduced_state(&s, 4).is_err());
        assert!(reduced_state(&s, 3).is_ok());
        assert!(reduced_state(&SpinState::dicke(spin(0.5), 0).unwrap(), 1).is_err());
    }

    #[test]
    fn entropy_examples() {
        let pure = DensityMatrix::from_real_diagonal(&[1.0, 0.0]).unwrap();
        assert_eq!(von_neumann_entropy(&pure).unwrap(), 0.0);
        let half = DensityMatrix::from_real_diagonal(&[0.5, 0.5]).unwrap();
        assert!((von_neumann_entropy(&half).unwrap() - 1.0).abs() < 1e-15);
        let third = DensityMatrix::from_real_diagonal(&[1.0 / 3.0; 3]).unwrap();
        assert!((von_neumann_entropy(&third).unwrap() - 1.584962500721156).abs() < 1e-12);
    }

    #[test]
    fn density_matrix_validation() {
        assert!(DensityMatrix::from_real_diagonal(&[0.6, 0.6]).is_err());
        assert!(DensityMatrix::from_real_diagonal(&[1.2, -0.2]).is_err());
        let mut m = DMatrix::from_element(2, 2, Complex64::new(0.5, 0.0));
        m[(0, 1)] = Complex64::new(0.5, 0.1);
        assert!(DensityMatrix::new(m).is_err());
        assert!(DensityMatrix::from_real_diagonal(&[1.0, -1e-11]).is_ok());
    }

    #[test]
    fn trace_distance_examples() {
        let a = DensityMatrix::from_real_diagonal(&[1.0, 0.0]).unwrap();
        let b = DensityMatrix::from_real_diagonal(&[0.0, 1.0]).unwrap();
        let mixed = DensityMatrix::from_real_diagonal(&[0.5, 0.5]).unwrap();
        assert_eq!(trace_distance(&a, &a).unwrap(), 0.0);
        assert!((trace_distance(&a, &b).unwrap() - 1.0).abs() < 1e-15);
        assert!((trace_distance(&a, &mixed).unwrap() - 0.5).abs() < 1e-15);
        let three = DensityMatrix::from_real_diagonal(&[1.0, 0.0, 0.0]).unwrap();
        assert!(trace_distance(&a, &three).is_err());
    }

    #[test]
    fn fa_rhs_examples() {
        assert_eq!(fa_rhs(0.0, 3).unwrap(), 0.0);
        assert!((fa_rhs(0.5, 2).unwrap() - 1.0).abs() < 1e-15);
        assert!((fa_rhs(0.5, 3).unwrap() - 1.5).abs() < 1e-15);
        assert_eq!(fa_rhs(1.0, 2).unwrap(), 0.0);
        assert!(fa_rhs(1.1, 3).is_err());
        assert!(fa_rhs(-0.1, 3).is_err());
        assert!(fa_rhs(0.5, 1).is_err());
    }

    #[test]
    fn fa_rhs_is_monotone_below_turning_point() {
        for d in 2..=8 {
            let top = 1.0 - 1.0 / d as f64;
            let grid: Vec<f64> = (0..=1000).map(|k| top * k as f64 / 1000.0).collect();
            let values: Vec<f64> = grid.iter().map(|&x| fa_rhs(x, d).unwrap()).collect();
            assert!(values.windows(2).all(|w| w[1] >= w[0]), "d={d}");
            // maximum value log2(d) at the turning point
            assert!((values[1000] - (d as f64).log2()).abs() < 1e-12);
        }
    }

    #[test]
    fn loose_bound_examples() {
        let sp = spin(1.0);
        let s = scs_state(sp, angles(0.7, 0.2));
        let lb = loose_bound(&s, &s, 3).unwrap();
        assert!(lb.value.abs() < 1e-7 && lb.valid);

        // |overlap| = 0.8 between two states of a spin-1
        let a = SpinState::dicke(sp, 0).unwrap();
        let b = SpinState::normalized(
            sp,
            DVector::from_vec(vec![
                Complex64::new(0.8, 0.0),
                Complex64::new(0.6, 0.0),
                Complex64::new(0.0, 0.0),
            ]),
        )
        .unwrap();
        let lb = loose_bound(&a, &b, 3).unwrap();
        assert!((lb.distance - 0.6).abs() < 1e-12);
        assert!((lb.value - 1.5709505944546684).abs() < 1e-9);
        assert!(lb.valid);

        let c = SpinState::dicke(sp, 1).unwrap();
        let lb = loose_bound(&a, &c, 2).unwrap();
        assert_eq!(lb.distance, 1.0);
        assert!(!lb.valid);

        assert!(loose_bound(&a, &SpinState::dicke(spin(2.0), 0).unwrap(), 3).is_err());
    }

    #[test]
    fn overlap_criterion_examples() {
        let sp = spin(4.0);
        let p = angles(1.0, 0.5);
        assert!((orbit_overlap_criterion(&[p, p], sp).unwrap() - 1.0).abs() < 1e-12);
        let antipodal = [angles(0.0, 0.0), angles(PI, 0.0)];
        assert!(orbit_overlap_criterion(&antipodal, sp).unwrap() < 1e-15);
        let p4 = [
            angles(FRAC_PI_2, 0.0),
            angles(PI, 0.0),
            angles(FRAC_PI_2, PI),
            angles(0.0, 0.0),
        ];
        assert!((orbit_overlap_criterion(&p4, sp).unwrap() - 0.0625).abs() < 1e-12);
        assert!(orbit_overlap_criterion(&[p], sp).is_err());
    }

    #[test]
    fn initial_coherent_state_has_zero_bound() {
        let sp = spin(4.0);
        let a = angles(2.1, 0.9);
        let s = scs_state(sp, a);
        let cl = SpherePoint::from_angles(a);
        for q in [1, 2] {
            let rec = bound_record(&s, q, Some(&cl), 0).unwrap();
            assert!(rec.entropy < 1e-10);
            assert!(rec.d_re.unwrap() < 1e-7);
            assert!(rec.bound < 1e-6);
            assert!(!rec.degenerate_direction);
        }
    }

    #[test]
    fn degenerate_direction_falls_back_to_a_valid_bound() {
        let sp = spin(2.0);
        let cat = SpinState::normalized(
            sp,
            DVector::from_fn(5, |n, _| {
                Complex64::new(if n == 0 || n == 4 { 1.0 } else { 0.0 }, 0.0)
            }),
        )
        .unwrap();
        let rec = bound_record(&cat, 1, None, 0).unwrap();
        assert!(rec.degenerate_direction);
        assert!(rec.d_re.is_none() && rec.d_re_prime.is_none() && rec.loose.is_none());
        assert!((rec.entropy - 1.0).abs() < 1e-12);
        assert!(rec.entropy <= rec.bound + 1e-9);

        let cl = SpherePoint::new(0.0, 1.0, 0.0).unwrap();
        let rec = bound_record(&cat, 1, Some(&cl), 0).unwrap();
        assert_eq!(rec.bound_distance, rec.d_re_prime.unwrap());
    }

    #[test]
    fn bound_holds_along_a_chaotic_run() {
        let sp = spin(20.0);
        let params = KickedTopParams::new(sp, 3.0, FRAC_PI_2);
        let u = build_unitary(params);
        let start = angles(1.5, 1.5);
        let mut cl = SpherePoint::from_angles(start);
        let evals = [
            BoundEvaluator::new(sp, 1).unwrap(),
            BoundEvaluator::new(sp, 2).unwrap(),
        ];
        for (kick, state) in u
            .kicks(&scs_state(sp, start))
            .unwrap()
            .take(200)
            .enumerate()
        {
            for ev in &evals {
                let rec = ev.record(&state, Some(&cl), kick).unwrap();
                assert!(rec.slack() >= -1e-9, "kick {kick}: {rec:?}");
                assert!(rec.entropy <= ((rec.q + 1) as f64).log2() + 1e-9);
            }
            cl = kick_map(&cl, ClassicalParams::new(3.0, FRAC_PI_2));
        }
    }

    fn random_state(two_j: usize, re: &[f64], im: &[f64]) -> Option<SpinState> {
        let sp = Spin::from_twice(two_j).unwrap();
        let amps = DVector::from_fn(sp.dim(), |n, _| Complex64::new(re[n], im[n]));
        (amps.norm() > 1e-3).then(|| SpinState::normalized(sp, amps).unwrap())
    }

    proptest! {
        #[test]
        fn reduced_states_are_density_matrices(
            two_j in 2usize..40,
            q_frac in 0.0f64..1.0,
            re in proptest::collection::vec(-1.0f64..1.0, 41),
            im in proptest::collection::vec(-1.0f64..1.0, 41),
        ) {
            let Some(s) = random_state(two_j, &re, &im) else { return Ok(()); };
            let q = 1 + ((two_j - 1) as f64 * q_frac) as usize;
            let q = q.min(two_j - 1);
            let rho = reduced_state(&s, q).unwrap();
            prop_assert!(DensityMatrix::new(rho.matrix().clone()).is_ok());
            let ent = von_neumann_entropy(&rho).unwrap();
            prop_assert!(ent <= ((q + 1) as f64).log2() + 1e-9);
        }

        #[test]
        fn reduced_distance_never_exceeds_full_distance(
            two_j in 2usize..30,
            theta in 0.0..PI,
            phi in -PI..PI,
            re in proptest::collection::vec(-1.0f64..1.0, 31),
            im in proptest::collection::vec(-1.0f64..1.0, 31),
        ) {
            let Some(s) = random_state(two_j, &re, &im) else { return Ok(()); };
            let sp = s.spin();
            let a = angles(theta, phi);
            let full = pure_trace_distance(&s, &scs_state(sp, a)).unwrap();
            for q in 1..two_j {
                let rho = reduced_state(&s, q).unwrap();
                let reference = DensityMatrix::pure(scs_state(Spin::from_twice(q).unwrap(), a).amplitudes());
                let reduced = trace_distance(&rho, &reference).unwrap();
                prop_assert!(reduced <= full + 1e-10);
            }
        }

        #[test]
        fn trace_distance_is_a_symmetric_bounded_metric(
            re in proptest::collection::vec(-1.0f64..1.0, 12),
            im in proptest::collection::vec(-1.0f64..1.0, 12),
        ) {
            let Some(a) = random_state(5, &re, &im) else { return Ok(()); };
            let Some(b) = random_state(5, &re[6..], &im[6..]) else { return Ok(()); };
            let ra = reduced_state(&a, 2).unwrap();
            let rb = reduced_state(&b, 2).unwrap();
            let ab = trace_distance(&ra, &rb).unwrap();
            let ba = trace_distance(&rb, &ra).unwrap();
            prop_assert!((ab - ba).abs() < 1e-12);
            prop_assert!((0.0..=1.0).contains(&ab));
            prop_assert!(trace_distance(&ra, &ra).unwrap() < 1e-12);
        }
    }
}

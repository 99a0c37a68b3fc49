//! Dense complex linear algebra for a truncated oscillator mode (the
//! "walker") tensored with a two-level system (the "coin").
//!
//! Conventions used throughout the crate:
//!
//! * Composite indices are walker-major ("walker slow, coin fast"): the
//!   amplitude of Fock level `n` and coin level `c` sits at `n * coin_dim + c`.
//! * User-facing frequencies are **linear** GHz. Hamiltonian builders return
//!   generators in **angular** units (rad/ns, i.e. linear × 2π); time is ns.
//!   [`angular`] performs the conversion.
//! * `propagator(H, t)` computes exp(−iHt) by Hermitian spectral
//!   decomposition, so segment unitaries are exact to solver precision
//!   regardless of duration.
//! * Coin basis: `|0⟩ = e₀` is the +1 eigenvector of `σ_z = diag(1, −1)`.
//!   `σ₋ = |1⟩⟨0|` lowers the +1 state, so `a†σ₋ + aσ₊` conserves excitation
//!   number.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const TWO_PI: f64 = std::f64::consts::TAU;

/// Entrywise tolerance for accepting a matrix as Hermitian or unitary.
pub const OPERATOR_TOL: f64 = 1e-12;

/// Tolerance for accepting a state vector as normalized.
pub const STATE_NORM_TOL: f64 = 1e-9;

/// Truncation leakage above which a coherent state is rejected.
pub const COHERENT_LEAKAGE_LIMIT: f64 = 1e-6;

/// Convert a linear frequency in GHz to an angular rate in rad/ns.
#[inline]
pub fn angular(f_ghz: f64) -> f64 {
    TWO_PI * f_ghz
}

/// A normalized pure state on walker ⊗ coin (walker-major layout).
///
/// Walker-only states use `coin_dim = 1`, so the same type serves both the
/// bare oscillator and the composite system.
#[derive(Debug, Clone)]
pub struct StateVector {
    amps: DVector<C64>,
    walker_dim: usize,
    coin_dim: usize,
}

impl StateVector {
    /// Wrap raw amplitudes, checking layout and normalization (‖ψ‖ within
    /// [`STATE_NORM_TOL`] of 1).
    pub fn new(amps: DVector<C64>, walker_dim: usize, coin_dim: usize) -> Result<Self> {
        if amps.len() != walker_dim * coin_dim {
            return Err(Error::Dimension {
                context: "StateVector::new",
                expected: walker_dim * coin_dim,
                got: amps.len(),
            });
        }
        let norm = amps.norm();
        if (norm - 1.0).abs() > STATE_NORM_TOL {
            return Err(Error::Config(format!(
                "state vector not normalized: ‖ψ‖ = {norm:.12}"
            )));
        }
        Ok(Self {
            amps,
            walker_dim,
            coin_dim,
        })
    }

    /// Construct without the normalization check (for trusted internal paths
    /// such as applying a unitary to an already-valid state).
    pub(crate) fn new_unchecked(amps: DVector<C64>, walker_dim: usize, coin_dim: usize) -> Self {
        debug_assert_eq!(amps.len(), walker_dim * coin_dim);
        Self {
            amps,
            walker_dim,
            coin_dim,
        }
    }

    pub fn walker_dim(&self) -> usize {
        self.walker_dim
    }

    pub fn coin_dim(&self) -> usize {
        self.coin_dim
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amps
    }

    /// Amplitude of Fock level `n`, coin level `c`.
    #[inline]
    pub fn amp(&self, n: usize, c: usize) -> C64 {
        self.amps[n * self.coin_dim + c]
    }

    pub fn norm(&self) -> f64 {
        self.amps.norm()
    }

    /// |‖ψ‖ − 1|, the deviation from exact normalization.
    pub fn norm_error(&self) -> f64 {
        (self.amps.norm() - 1.0).abs()
    }

    /// ⟨φ|ψ⟩ with `self` as φ.
    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amps.dotc(&other.amps)
    }

    /// |⟨φ|ψ⟩|², the overlap probability.
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// Mean photon number ⟨n̂⟩ over the walker factor.
    pub fn mean_photon(&self) -> f64 {
        let mut acc = 0.0;
        for n in 0..self.walker_dim {
            for c in 0..self.coin_dim {
                acc += n as f64 * self.amp(n, c).norm_sqr();
            }
        }
        acc
    }

    /// Marginal photon-number distribution p(n) = Σ_c |ψ(n,c)|².
    pub fn photon_marginal(&self) -> Vec<f64> {
        (0..self.walker_dim)
            .map(|n| (0..self.coin_dim).map(|c| self.amp(n, c).norm_sqr()).sum())
            .collect()
    }

    /// Multiply every walker-level-`n` amplitude by exp(i·angle·n).
    ///
    /// This is the exact unitary exp(i·angle·n̂) ⊗ I; it rigidly rotates the
    /// phase-space distribution by `angle` and is used to undo known frame
    /// rotations before plotting or comparing distributions.
    pub fn rotate_phase(&self, angle: f64) -> StateVector {
        let mut amps = self.amps.clone();
        for n in 0..self.walker_dim {
            let ph = C64::from_polar(1.0, angle * n as f64);
            for c in 0..self.coin_dim {
                amps[n * self.coin_dim + c] *= ph;
            }
        }
        StateVector::new_unchecked(amps, self.walker_dim, self.coin_dim)
    }

    /// Swap the two coin levels (coin relabeling |0⟩ ↔ |1⟩).
    pub fn swap_coin(&self) -> StateVector {
        assert_eq!(self.coin_dim, 2, "swap_coin requires a two-level coin");
        let mut amps = self.amps.clone();
        for n in 0..self.walker_dim {
            amps.swap_rows(2 * n, 2 * n + 1);
        }
        StateVector::new_unchecked(amps, self.walker_dim, 2)
    }
}

/// Tensor a walker-only state with a coin state into the composite layout.
pub fn tensor_state(walker: &StateVector, coin: &[C64]) -> Result<StateVector> {
    if walker.coin_dim != 1 {
        return Err(Error::Dimension {
            context: "tensor_state walker factor",
            expected: 1,
            got: walker.coin_dim,
        });
    }
    let cd = coin.len();
    let mut amps = DVector::zeros(walker.walker_dim * cd);
    for n in 0..walker.walker_dim {
        for (c, &cc) in coin.iter().enumerate() {
            amps[n * cd + c] = walker.amps[n] * cc;
        }
    }
    StateVector::new(amps, walker.walker_dim, cd)
}

/// A matrix checked to be Hermitian (entrywise within [`OPERATOR_TOL`]).
#[derive(Debug, Clone)]
pub struct HermitianOperator {
    m: DMatrix<C64>,
}

impl HermitianOperator {
    pub fn new(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::Dimension {
                context: "HermitianOperator::new",
                expected: m.nrows(),
                got: m.ncols(),
            });
        }
        let dev = hermiticity_deviation(&m);
        if dev > OPERATOR_TOL {
            return Err(Error::Config(format!(
                "matrix is not Hermitian: max |H − H†| entry = {dev:.3e}"
            )));
        }
        Ok(Self { m })
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    /// Real expectation value ⟨ψ|H|ψ⟩.
    pub fn expectation(&self, psi: &StateVector) -> Result<f64> {
        if psi.dim() != self.dim() {
            return Err(Error::Dimension {
                context: "HermitianOperator::expectation",
                expected: self.dim(),
                got: psi.dim(),
            });
        }
        let h_psi = &self.m * psi.amplitudes();
        Ok(psi.amplitudes().dotc(&h_psi).re)
    }
}

/// A matrix checked to be unitary (‖U†U − I‖_max within tolerance).
#[derive(Debug, Clone)]
pub struct UnitaryOperator {
    m: DMatrix<C64>,
}

impl UnitaryOperator {
    /// Wrap a matrix after verifying unitarity to `tol` (use
    /// [`OPERATOR_TOL`] unless a looser tolerance is justified).
    pub fn new(m: DMatrix<C64>, tol: f64) -> Result<Self> {
        let dev = unitarity_deviation(&m);
        if dev > tol {
            return Err(Error::Config(format!(
                "matrix is not unitary: max |U†U − I| entry = {dev:.3e}"
            )));
        }
        Ok(Self { m })
    }

    pub(crate) fn new_unchecked(m: DMatrix<C64>) -> Self {
        Self { m }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    /// Apply to a state, preserving its walker/coin layout.
    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.dim() != self.dim() {
            return Err(Error::Dimension {
                context: "UnitaryOperator::apply",
                expected: self.dim(),
                got: psi.dim(),
            });
        }
        Ok(StateVector::new_unchecked(
            &self.m * psi.amplitudes(),
            psi.walker_dim(),
            psi.coin_dim(),
        ))
    }

    /// Compose `self · other`.
    pub fn compose(&self, other: &UnitaryOperator) -> UnitaryOperator {
        UnitaryOperator::new_unchecked(&self.m * &other.m)
    }
}

/// Max entry of |M − M†|.
pub fn hermiticity_deviation(m: &DMatrix<C64>) -> f64 {
    let mut dev: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

/// Max entry of |U†U − I|.
pub fn unitarity_deviation(m: &DMatrix<C64>) -> f64 {
    let gram = m.adjoint() * m;
    let mut dev: f64 = 0.0;
    for i in 0..gram.nrows() {
        for j in 0..gram.ncols() {
            let target = if i == j { C64::new(1.0, 0.0) } else { C64::ZERO };
            dev = dev.max((gram[(i, j)] - target).norm());
        }
    }
    dev
}

/// A truncated coherent state together with its truncation leakage.
#[derive(Debug, Clone)]
pub struct CoherentState {
    /// Renormalized walker-only state (coin_dim = 1).
    pub state: StateVector,
    /// Probability dropped by the Fock cutoff, 1 − Σ_{n<d}|c_n|², measured
    /// *before* renormalization.
    pub leakage: f64,
}

/// Coherent state |α⟩ truncated to `fock_dim` levels and renormalized.
///
/// Amplitudes follow the stable recurrence c_{n+1} = c_n·α/√(n+1) starting
/// from c_0 = e^{−|α|²/2}, avoiding factorial overflow at any dimension.
/// Errors if the truncation leakage exceeds [`COHERENT_LEAKAGE_LIMIT`].
pub fn coherent_state(alpha: C64, fock_dim: usize) -> Result<CoherentState> {
    if fock_dim == 0 {
        return Err(Error::Dimension {
            context: "coherent_state",
            expected: 1,
            got: 0,
        });
    }
    let mut amps = DVector::zeros(fock_dim);
    let mut c = C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    let mut captured = 0.0;
    for n in 0..fock_dim {
        amps[n] = c;
        captured += c.norm_sqr();
        c *= alpha / C64::new(((n + 1) as f64).sqrt(), 0.0);
    }
    let leakage = (1.0 - captured).max(0.0);
    if leakage > COHERENT_LEAKAGE_LIMIT {
        return Err(Error::Truncation {
            leakage,
            limit: COHERENT_LEAKAGE_LIMIT,
            fock_dim,
        });
    }
    amps /= C64::new(captured.sqrt(), 0.0);
    Ok(CoherentState {
        state: StateVector::new_unchecked(amps, fock_dim, 1),
        leakage,
    })
}

/// The `s` phase states |θ_k⟩ = (1/√s)Σ_n e^{inθ_k}|n⟩ with θ_k = 2πk/s,
/// built on an `s`-dimensional walker space.
///
/// For matching `s` and walker dimension they form an orthonormal basis and
/// a resolution of identity.
pub fn phase_states(s: usize) -> Vec<StateVector> {
    (0..s).map(|k| phase_state(s, k)).collect()
}

/// Single phase state |θ_k⟩ on an `s`-dimensional walker space.
pub fn phase_state(s: usize, k: usize) -> StateVector {
    let theta = TWO_PI * k as f64 / s as f64;
    let norm = 1.0 / (s as f64).sqrt();
    let amps = DVector::from_fn(s, |n, _| C64::from_polar(norm, theta * n as f64));
    StateVector::new_unchecked(amps, s, 1)
}

/// Ladder, number, and Pauli operators sized for one walker ⊗ coin system.
///
/// Walker operators are `fock_dim`-dimensional; Pauli operators are 2×2.
/// `[a, a†] = 1` holds on all but the last diagonal entry, the unavoidable
/// artifact of truncation.
#[derive(Debug, Clone)]
pub struct OperatorSet {
    pub a: DMatrix<C64>,
    pub a_dag: DMatrix<C64>,
    pub number: DMatrix<C64>,
    pub sx: DMatrix<C64>,
    pub sy: DMatrix<C64>,
    pub sz: DMatrix<C64>,
    pub sp: DMatrix<C64>,
    pub sm: DMatrix<C64>,
}

impl OperatorSet {
    pub fn new(fock_dim: usize) -> Self {
        let a = annihilation(fock_dim);
        let a_dag = a.adjoint();
        let number = &a_dag * &a;
        Self {
            a,
            a_dag,
            number,
            sx: pauli_x(),
            sy: pauli_y(),
            sz: pauli_z(),
            sp: sigma_plus(),
            sm: sigma_minus(),
        }
    }
}

/// Annihilation operator: a|n⟩ = √n |n−1⟩.
pub fn annihilation(fock_dim: usize) -> DMatrix<C64> {
    let mut m = DMatrix::zeros(fock_dim, fock_dim);
    for n in 1..fock_dim {
        m[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    m
}

/// Number operator a†a = diag(0, 1, …, fock_dim−1).
pub fn number_operator(fock_dim: usize) -> DMatrix<C64> {
    DMatrix::from_fn(fock_dim, fock_dim, |i, j| {
        if i == j {
            C64::new(i as f64, 0.0)
        } else {
            C64::ZERO
        }
    })
}

pub fn pauli_x() -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[C64::ZERO, C64::ONE, C64::ONE, C64::ZERO])
}

pub fn pauli_y() -> DMatrix<C64> {
    let i = C64::i();
    DMatrix::from_row_slice(2, 2, &[C64::ZERO, -i, i, C64::ZERO])
}

pub fn pauli_z() -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[C64::ONE, C64::ZERO, C64::ZERO, -C64::ONE])
}

/// σ₊ = |0⟩⟨1|: raises the coin into the +1 eigenstate of σ_z.
pub fn sigma_plus() -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[C64::ZERO, C64::ONE, C64::ZERO, C64::ZERO])
}

/// σ₋ = |1⟩⟨0|: lowers the coin out of the +1 eigenstate of σ_z.
pub fn sigma_minus() -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &[C64::ZERO, C64::ZERO, C64::ONE, C64::ZERO])
}

/// 2×2 identity.
pub fn identity2() -> DMatrix<C64> {
    DMatrix::identity(2, 2)
}

/// Kronecker product in the crate's walker-major convention:
/// `tensor(W, C)[n·dc + c, m·dc + d] = W[n,m]·C[c,d]`.
pub fn tensor(walker_op: &DMatrix<C64>, coin_op: &DMatrix<C64>) -> DMatrix<C64> {
    walker_op.kronecker(coin_op)
}

/// exp(−iHt) by spectral decomposition of the Hermitian generator.
///
/// `h` is in rad/ns, `t` in ns. The result is unitary to solver precision;
/// construction fails if the eigensolver does not converge.
pub fn propagator(h: &HermitianOperator, t: f64) -> Result<UnitaryOperator> {
    let dim = h.dim();
    let eig = h
        .matrix()
        .clone()
        .try_symmetric_eigen(f64::EPSILON, 0)
        .ok_or(Error::Eigensolver {
            context: "propagator",
            dim,
        })?;
    let phases = DVector::from_fn(dim, |k, _| C64::from_polar(1.0, -eig.eigenvalues[k] * t));
    // U = V · diag(e^{−iλt}) · V†
    let mut scaled = eig.eigenvectors.clone();
    for k in 0..dim {
        let mut col = scaled.column_mut(k);
        col *= phases[k];
    }
    let u = scaled * eig.eigenvectors.adjoint();
    Ok(UnitaryOperator::new_unchecked(u))
}

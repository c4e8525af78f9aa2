//! Path density matrix and Wootters concurrence.
//!
//! The two-photon state lives on the 4-dimensional path space with ordered
//! basis `(AA, AB, BA, BB)`; the first tensor factor is the biexciton
//! photon's direction, the second the exciton photon's. The concurrence of a
//! two-qubit density matrix is
//!
//! ```text
//! C(ρ) = max(0, λ₁ - λ₂ - λ₃ - λ₄)
//! ```
//!
//! with `λ_i` the square roots of the eigenvalues of `ρ ρ~` in descending
//! order and `ρ~ = (σ_y ⊗ σ_y) ρ* (σ_y ⊗ σ_y)`. In exact arithmetic `ρ ρ~`
//! has a nonnegative real spectrum; eigenvalues are computed with the dense
//! QR solver from [`crate::linalg`], small imaginary residues are discarded
//! and negatives clamped to zero before the square root.
//!
//! For pure states the eigenproblem collapses to the closed form
//! `C = 2 |ψ_AA ψ_BB - ψ_AB ψ_BA| / N`, which [`concurrence_of_delay`] uses
//! directly (valid for any `ε`, `Φ'`); the eigensolver path handles the
//! jitter-averaged mixed states and doubles as a cross-check.

use num_complex::Complex;

use crate::amplitudes::{PathPair, TwoPhotonAmplitudes};
use crate::error::{Error, Result};
use crate::linalg::{general_eigenvalues4, hermitian_eigenvalues4, Matrix4};
use crate::params::{CouplingTable, PhysicalParams};
use crate::scalar::Scalar;

/// Validated 4x4 Hermitian unit-trace density matrix over `(AA, AB, BA, BB)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathDensityMatrix<T> {
    rho: Matrix4<T>,
}

impl<T: Scalar> PathDensityMatrix<T> {
    /// Builds the rank-1 projector of a pure state vector (need not be
    /// normalised).
    pub fn from_pure_state(psi: &[Complex<T>; 4]) -> Result<Self> {
        let norm_sq: T = psi.iter().map(|c| c.norm_sqr()).sum();
        if !(norm_sq > T::zero()) || !norm_sq.is_finite() {
            return Err(Error::DegenerateState);
        }
        let mut rho = [[Complex::new(T::zero(), T::zero()); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                rho[i][j] = psi[i] * psi[j].conj() / norm_sq;
            }
        }
        Ok(PathDensityMatrix { rho })
    }

    /// Validates and trace-normalises a Hermitian positive-semidefinite
    /// matrix (e.g. a jitter-averaged accumulation).
    pub fn from_hermitian(raw: &Matrix4<T>) -> Result<Self> {
        // Hermiticity check on the raw input.
        let mut herm_dev = T::zero();
        let mut scale = T::zero();
        for i in 0..4 {
            for j in 0..4 {
                herm_dev = herm_dev.max((raw[i][j] - raw[j][i].conj()).norm());
                scale = scale.max(raw[i][j].norm());
            }
        }
        if !scale.is_finite() {
            return Err(Error::Numeric("non-finite density matrix".into()));
        }
        if herm_dev > T::lit(1e-12) * scale.max(T::one()) {
            return Err(Error::Numeric(format!(
                "density matrix not Hermitian: deviation {herm_dev}"
            )));
        }
        let trace = raw[0][0].re + raw[1][1].re + raw[2][2].re + raw[3][3].re;
        if !(trace > T::zero()) {
            return Err(Error::DegenerateState);
        }
        let mut rho = *raw;
        let inv = T::one() / trace;
        for i in 0..4 {
            for j in 0..4 {
                rho[i][j] = rho[i][j].scale(inv);
            }
            rho[i][i] = Complex::new(rho[i][i].re, T::zero());
        }
        // Positive semidefinite up to the clamping floor (the f64 contract
        // value, widened with the scalar's epsilon for f32).
        let psd_floor = T::lit(1e-10).max(T::epsilon() * T::lit(64.0));
        let eigs = hermitian_eigenvalues4(&rho);
        if eigs.iter().any(|&l| l < -psd_floor) {
            return Err(Error::Numeric(format!(
                "density matrix not PSD: min eigenvalue {}",
                eigs[3]
            )));
        }
        Ok(PathDensityMatrix { rho })
    }

    /// Matrix entry in the `(AA, AB, BA, BB)` basis.
    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> Complex<T> {
        self.rho[i][j]
    }

    pub fn as_matrix(&self) -> &Matrix4<T> {
        &self.rho
    }

    /// Trace (1 after construction, up to rounding).
    pub fn trace(&self) -> T {
        self.rho[0][0].re + self.rho[1][1].re + self.rho[2][2].re + self.rho[3][3].re
    }

    /// Purity `tr(ρ²)`; 1 for pure states, down to 1/4 for maximal mixing.
    pub fn purity(&self) -> T {
        // For Hermitian rho, tr(rho^2) = sum |rho_ij|^2.
        self.rho.iter().flatten().map(|c| c.norm_sqr()).sum()
    }

    /// Eigenvalues in descending order (real, for the Hermitian matrix).
    pub fn eigenvalues(&self) -> [T; 4] {
        hermitian_eigenvalues4(&self.rho)
    }

    /// Spin-flipped matrix `ρ~ = (σ_y ⊗ σ_y) ρ* (σ_y ⊗ σ_y)`.
    pub fn spin_flipped(&self) -> Matrix4<T> {
        // sigma_y (x) sigma_y is the anti-diagonal (-1, 1, 1, -1); the
        // conjugation collapses to index reversal with signs.
        let sign = |k: usize| {
            if k == 0 || k == 3 {
                -T::one()
            } else {
                T::one()
            }
        };
        let mut out = [[Complex::new(T::zero(), T::zero()); 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                out[i][j] = self.rho[3 - i][3 - j].conj().scale(sign(i) * sign(j));
            }
        }
        out
    }
}

/// Projects the two-photon amplitudes onto their (pure) path density matrix
/// `ρ_(nm),(n'm') = ψ_nm ψ*_n'm' / N`.
///
/// Errors with [`Error::DegenerateState`] when all amplitudes vanish
/// (`τ < 0`).
pub fn density_from_amplitudes<T: Scalar>(
    amps: &TwoPhotonAmplitudes<T>,
) -> Result<PathDensityMatrix<T>> {
    PathDensityMatrix::from_pure_state(amps.as_array())
}

/// Wootters eigenvalue data: the concurrence and the four `λ_i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConcurrenceValue<T> {
    /// `max(0, λ₁ - λ₂ - λ₃ - λ₄)`, in `[0, 1]`.
    pub value: T,
    /// Square roots of the `ρ ρ~` spectrum, descending.
    pub lambdas: [T; 4],
}

/// Concurrence of an arbitrary (pure or mixed) path density matrix via the
/// `ρ ρ~` eigenvalue route.
pub fn wootters_concurrence<T: Scalar>(rho: &PathDensityMatrix<T>) -> Result<ConcurrenceValue<T>> {
    let flipped = rho.spin_flipped();
    let product = crate::linalg::mat_mul(rho.as_matrix(), &flipped);
    let eigs = general_eigenvalues4(&product)?;

    // Thresholds are the f64 contract values, widened in step with the
    // scalar's epsilon so the f32 instantiation stays usable.
    let eps = T::epsilon();
    let tol = T::lit(1e-8).max(eps * T::lit(64.0));
    // For pure states rho rho~ has a triple zero eigenvalue whose
    // floating-point perturbation is amplified by the near-defective zero
    // cluster; without a floor the square root injects that junk straight
    // into the concurrence. The relative part (1e-10) sits well above the
    // junk for any state with C >~ 1e-2 and well below the smallest
    // mixed-state eigenvalue ratios the jitter averaging produces at plotted
    // sigmas. The absolute part covers separable states, where the whole
    // product is rounding noise of the unit-trace input (entries ~ eps).
    let floor = (crate::linalg::frobenius_norm(&product)
        * T::lit(1e-10).max(eps * T::lit(200.0)))
    .max(T::lit(1e-14).max(eps * T::lit(50.0)));
    let mut lambdas = [T::zero(); 4];
    for (k, eig) in eigs.iter().enumerate() {
        if eig.im.abs() > tol || eig.re < -tol {
            return Err(Error::Numeric(format!(
                "rho * rho~ eigenvalue {} outside the nonnegative real axis",
                Complex::new(
                    eig.re.to_f64().unwrap_or(f64::NAN),
                    eig.im.to_f64().unwrap_or(f64::NAN)
                )
            )));
        }
        lambdas[k] = if eig.re > floor { eig.re.sqrt() } else { T::zero() };
    }
    lambdas.sort_by(|a, b| b.partial_cmp(a).unwrap());

    let value = (lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(T::zero());
    Ok(ConcurrenceValue { value, lambdas })
}

/// Symmetric-decay closed form `C(Φ, τ) = sin²Φ / (1 + cos(Sτ) cos²Φ)`,
/// valid for `ε = 0`, `Φ' = Φ`.
pub fn concurrence_closed_form<T: Scalar>(phi: T, fss: T, tau: T) -> T {
    let sin_phi = phi.sin();
    let cos_phi = phi.cos();
    sin_phi * sin_phi / (T::one() + (fss * tau).cos() * cos_phi * cos_phi)
}

/// Concurrence of the pure state at delay `τ` from the general amplitudes,
/// `C = 2 |ψ_AA ψ_BB - ψ_AB ψ_BA| / N`; valid for any `ε` and `Φ' ≠ Φ`.
pub fn concurrence_of_delay<T: Scalar>(
    tau: T,
    params: &PhysicalParams<T>,
    couplings: &CouplingTable<T>,
) -> Result<T> {
    let amps = crate::amplitudes::two_photon_amplitudes(tau, params, couplings);
    concurrence_of_amplitudes(&amps)
}

/// Pure-state concurrence straight from an amplitude set.
pub fn concurrence_of_amplitudes<T: Scalar>(amps: &TwoPhotonAmplitudes<T>) -> Result<T> {
    let n = amps.norm_sq();
    if !(n > T::zero()) {
        return Err(Error::DegenerateState);
    }
    let det = amps.psi(PathPair::AA) * amps.psi(PathPair::BB)
        - amps.psi(PathPair::AB) * amps.psi(PathPair::BA);
    Ok(T::two() * det.norm() / n)
}

//! Entanglement measures.
//!
//! The atom-field state is pure, so its entanglement is fixed by the reduced
//! atomic density matrix alone. The Wootters two-qubit concurrence and the
//! entanglement of formation are provided for 2×2 subsystems.

use nalgebra::{Matrix3, Matrix4};
use num_complex::Complex64;

use crate::dressed::JointState;
use crate::error::{Error, Result};

/// Tolerance for round-off in quantities that are non-negative in exact
/// arithmetic.
pub const RADICAND_TOLERANCE: f64 = 1e-12;

/// `ρ_ij = ⟨i|Tr_field ρ|j⟩` for the three atomic levels.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicDensity {
    pub rho: Matrix3<Complex64>,
}

impl AtomicDensity {
    pub fn trace(&self) -> f64 {
        self.rho.trace().re
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        (self.rho * self.rho).trace().re
    }

    pub fn populations(&self) -> [f64; 3] {
        [self.rho[(0, 0)].re, self.rho[(1, 1)].re, self.rho[(2, 2)].re]
    }
}

/// Traces the field out of a joint atom-field state.
pub fn reduce_atom(state: &JointState) -> AtomicDensity {
    let levels = state.levels();
    let rho = Matrix3::from_fn(|i, j| {
        levels[i]
            .iter()
            .zip(levels[j].iter())
            .map(|(a, b)| a * b.conj())
            .sum::<Complex64>()
    });
    AtomicDensity { rho }
}

/// Concurrence of the globally pure state whose atomic reduction is `rho_a`:
/// `sqrt(2 Σ_{i≠j} (ρii ρjj − ρij ρji))`.
///
/// Ranges from 0 for product states to `sqrt(4/3)` for a maximally
/// entangled atom.
pub fn pure_concurrence(rho_a: &AtomicDensity) -> Result<f64> {
    let rho = &rho_a.rho;
    let mut radicand = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            if i != j {
                radicand += (rho[(i, i)] * rho[(j, j)] - rho[(i, j)] * rho[(j, i)]).re;
            }
        }
    }
    radicand *= 2.0;
    if radicand < -RADICAND_TOLERANCE {
        return Err(Error::consistency(format!(
            "negative concurrence radicand {radicand:.3e}"
        )));
    }
    Ok(radicand.max(0.0).sqrt())
}

/// Concurrence of a joint atom-field pure state, evaluated without forming
/// `ρA`.
///
/// Each 2×2 principal minor of `ρA` is written as a sum of squared moduli,
/// `ρii ρjj − |ρij|² = Σ_{k<l} |a_ik a_jl − a_il a_jk|²`, so the radicand is
/// non-negative by construction and a product state gives zero up to
/// rounding of the amplitudes rather than of their squares. Agrees with
/// [`pure_concurrence`] of the reduced state.
pub fn concurrence(state: &JointState) -> f64 {
    let levels = state.levels();
    let mut radicand = 0.0;
    for i in 0..3 {
        for j in i + 1..3 {
            let (a, b) = (levels[i], levels[j]);
            for k in 0..a.len() {
                for l in k + 1..a.len() {
                    radicand += (a[k] * b[l] - a[l] * b[k]).norm_sqr();
                }
            }
        }
    }
    2.0 * radicand.sqrt()
}

/// Two-qubit density matrix in the basis `|00⟩, |01⟩, |10⟩, |11⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitDensity {
    rho: Matrix4<Complex64>,
}

const DENSITY_TOLERANCE: f64 = 1e-10;

impl TwoQubitDensity {
    /// Validates Hermiticity, unit trace and positivity.
    pub fn new(rho: Matrix4<Complex64>) -> Result<Self> {
        let asym = (rho - rho.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if asym > DENSITY_TOLERANCE {
            return Err(Error::domain(format!(
                "density matrix is not Hermitian (deviation {asym:.3e})"
            )));
        }
        let trace = rho.trace();
        if (trace - Complex64::new(1.0, 0.0)).norm() > DENSITY_TOLERANCE {
            return Err(Error::domain(format!("density matrix trace is {trace}")));
        }
        let min_eig = rho.symmetric_eigenvalues().min();
        if min_eig < -DENSITY_TOLERANCE {
            return Err(Error::domain(format!(
                "density matrix has negative eigenvalue {min_eig:.3e}"
            )));
        }
        Ok(TwoQubitDensity { rho })
    }

    /// `|ψ⟩⟨ψ|` for a normalized two-qubit vector.
    pub fn pure(psi: [Complex64; 4]) -> Result<Self> {
        let v = nalgebra::Vector4::from(psi);
        Self::new(v * v.adjoint())
    }

    pub fn matrix(&self) -> &Matrix4<Complex64> {
        &self.rho
    }
}

/// `σy ⊗ σy` in the computational basis.
pub fn spin_flip() -> Matrix4<Complex64> {
    let mut m = Matrix4::zeros();
    m[(0, 3)] = Complex64::new(-1.0, 0.0);
    m[(1, 2)] = Complex64::new(1.0, 0.0);
    m[(2, 1)] = Complex64::new(1.0, 0.0);
    m[(3, 0)] = Complex64::new(-1.0, 0.0);
    m
}

/// Wootters concurrence `max(0, σ1 − σ2 − σ3 − σ4)`.
///
/// The σi are the square roots of the eigenvalues of
/// `ρ (σy⊗σy) ρ* (σy⊗σy)`. They are obtained as the singular values of
/// `τ = Vᵀ (σy⊗σy) V`, where the columns of `V` are the eigenvectors of `ρ`
/// scaled by the square roots of their eigenvalues; this avoids square
/// roots of rounding noise in the small σi.
pub fn wootters_concurrence(rho: &TwoQubitDensity) -> f64 {
    let eig = rho.rho.symmetric_eigen();
    let mut v = eig.eigenvectors;
    for (mut col, &l) in v.column_iter_mut().zip(eig.eigenvalues.iter()) {
        col *= Complex64::new(l.max(0.0).sqrt(), 0.0);
    }
    let tau = v.transpose() * spin_flip() * v;
    let mut sigma: Vec<f64> = tau.singular_values().iter().copied().collect();
    sigma.sort_by(|a, b| b.total_cmp(a));
    (sigma[0] - sigma[1] - sigma[2] - sigma[3]).max(0.0)
}

/// Entanglement of formation and its binary-entropy weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementResult {
    pub concurrence: f64,
    /// In nats.
    pub eof: f64,
    pub mu_plus: f64,
    pub mu_minus: f64,
}

/// `E_f = −μ+ ln μ+ − μ− ln μ−` with `μ± = (1 ± sqrt(1 − C²)) / 2`.
pub fn entanglement_of_formation(concurrence: f64) -> Result<EntanglementResult> {
    if !(0.0..=1.0).contains(&concurrence) {
        return Err(Error::domain(format!(
            "two-qubit concurrence must lie in [0, 1], got {concurrence}"
        )));
    }
    let root = (1.0 - concurrence * concurrence).sqrt();
    let mu_plus = 0.5 * (1.0 + root);
    let mu_minus = 0.5 * (1.0 - root);
    let h = |p: f64| if p > 0.0 { -p * p.ln() } else { 0.0 };
    Ok(EntanglementResult {
        concurrence,
        eof: h(mu_plus) + h(mu_minus),
        mu_plus,
        mu_minus,
    })
}

pub fn nats_to_bits(nats: f64) -> f64 {
    nats / std::f64::consts::LN_2
}

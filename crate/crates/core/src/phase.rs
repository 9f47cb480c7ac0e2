//! Photon-number and phase statistics of the cavity field.
//!
//! The phase distribution is the continuous limit of the Pegg–Barnett
//! construction:
//!
//! ```text
//! P(θ) = (1/2π) [1 + 2 Σ_{n>m} (A_nm cos((n−m)θ) + B_nm sin((n−m)θ))]
//! ```
//!
//! with `A_nm + i B_nm` the field density matrix element `ρ_nm`, traced over
//! the atom. θ is measured from the coherent-state phase β of the initial
//! field.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::dressed::JointState;
use crate::error::{Error, Result};

/// Slack allowed below the `ln 2π` entropic bound before it is an error.
pub const BOUND_TOLERANCE: f64 = 1e-6;

/// Photon-number distribution `P_m`, `m = 0..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct NumberDistribution {
    pub probs: Vec<f64>,
}

impl NumberDistribution {
    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(m, p)| m as f64 * p)
            .sum()
    }
}

pub fn number_distribution(state: &JointState) -> NumberDistribution {
    let levels = state.levels();
    let probs = (0..=state.n_max)
        .map(|k| levels.iter().map(|amps| amps[k].norm_sqr()).sum())
        .collect();
    NumberDistribution { probs }
}

/// `P(θ)` sampled on `M` uniform points of `[−π, π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseGrid {
    pub theta: Vec<f64>,
    pub values: Vec<f64>,
    /// Phase origin; `theta[j]` is measured from it.
    pub theta0: f64,
}

impl PhaseGrid {
    pub fn step(&self) -> f64 {
        2.0 * PI / self.theta.len() as f64
    }

    /// Trapezoidal (periodic) integral of `P`.
    pub fn integral(&self) -> f64 {
        self.step() * self.values.iter().sum::<f64>()
    }

    /// Indices of circular local maxima exceeding `threshold`.
    pub fn peaks_above(&self, threshold: f64) -> Vec<usize> {
        let n = self.values.len();
        (0..n)
            .filter(|&j| {
                let p = self.values[j];
                let prev = self.values[(j + n - 1) % n];
                let next = self.values[(j + 1) % n];
                p > threshold && p > prev && p >= next
            })
            .collect()
    }
}

/// Smallest admissible grid size for a state with cutoff `n_max`.
pub fn min_grid_size(n_max: usize) -> usize {
    4 * n_max
}

/// `max(1024, 4 n_max)`, rounded up to an even count.
pub fn default_grid_size(n_max: usize) -> usize {
    let m = min_grid_size(n_max).max(1024);
    m + m % 2
}

/// Sums of the field density matrix along each off-diagonal,
/// `S_d = Σ_m ρ_{m+d, m}`, for `d = 0..=n_max`.
fn diagonal_coherences(state: &JointState) -> Vec<Complex64> {
    let levels = state.levels();
    (0..=state.n_max)
        .map(|d| {
            (0..=state.n_max - d)
                .map(|m| {
                    levels
                        .iter()
                        .map(|amps| amps[m + d] * amps[m].conj())
                        .sum::<Complex64>()
                })
                .sum()
        })
        .collect()
}

/// Continuous phase distribution on a grid of `grid_size` points.
pub fn phase_distribution(state: &JointState, grid_size: usize) -> Result<PhaseGrid> {
    let min = min_grid_size(state.n_max);
    if grid_size < min {
        return Err(Error::config(format!(
            "phase grid of {grid_size} points is below the {min} needed for n_max = {}",
            state.n_max
        )));
    }
    if grid_size % 2 != 0 {
        return Err(Error::config(format!(
            "phase grid size must be even for Simpson quadrature, got {grid_size}"
        )));
    }
    let coherences = diagonal_coherences(state);
    let theta0 = state.beta_phase;
    let step = 2.0 * PI / grid_size as f64;
    let theta: Vec<f64> = (0..grid_size).map(|j| -PI + step * j as f64).collect();
    let values = theta
        .iter()
        .map(|&th| {
            // Σ_{d≥1} S_d w^d by Horner's rule, w = e^{−i(θ+θ0)}.
            let w = Complex64::from_polar(1.0, -(th + theta0));
            let oscillating = coherences[1..]
                .iter()
                .rev()
                .fold(Complex64::new(0.0, 0.0), |acc, s| (acc + s) * w);
            (coherences[0].re + 2.0 * oscillating.re) / (2.0 * PI)
        })
        .collect();
    Ok(PhaseGrid {
        theta,
        values,
        theta0,
    })
}

fn entropy_density(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        -p * p.max(1e-300).ln()
    }
}

/// `R_N = −Σ P_m ln P_m`.
pub fn number_entropy(dist: &NumberDistribution) -> f64 {
    dist.probs.iter().map(|&p| entropy_density(p)).sum()
}

/// `R_ψ = −∫ P ln P dθ` by composite Simpson over the closed period.
pub fn phase_entropy(grid: &PhaseGrid) -> f64 {
    let n = grid.values.len();
    let h = grid.step();
    let f = |j: usize| entropy_density(grid.values[j % n]);
    // Endpoints θ = −π and θ = π carry the same sample.
    let mut sum = f(0) + f(n);
    for j in 1..n {
        sum += if j % 2 == 1 { 4.0 } else { 2.0 } * f(j);
    }
    sum * h / 3.0
}

/// Number and phase entropies with their sum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyPair {
    pub r_n: f64,
    pub r_psi: f64,
    pub sum: f64,
    /// The sum fell below `ln 2π`, within [`BOUND_TOLERANCE`].
    pub below_bound: bool,
}

/// Both entropies of the field, checked against `R_N + R_ψ ≥ ln 2π`.
pub fn entropy_pair(state: &JointState, grid_size: usize) -> Result<EntropyPair> {
    let grid = phase_distribution(state, grid_size)?;
    entropy_pair_from(&number_distribution(state), &grid)
}

pub fn entropy_pair_from(dist: &NumberDistribution, grid: &PhaseGrid) -> Result<EntropyPair> {
    let r_n = number_entropy(dist);
    let r_psi = phase_entropy(grid);
    let sum = r_n + r_psi;
    let bound = (2.0 * PI).ln();
    if sum < bound - BOUND_TOLERANCE {
        return Err(Error::consistency(format!(
            "entropic bound violated: R_N + R_psi = {sum} < ln(2 pi) = {bound}"
        )));
    }
    Ok(EntropyPair {
        r_n,
        r_psi,
        sum,
        below_bound: sum < bound,
    })
}

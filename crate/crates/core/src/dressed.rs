//! Exact dressed-state dynamics of a three-level atom coupled to one cavity
//! mode.
//!
//! The interaction only links atom-field basis states in chains of three
//! (`|1,k1⟩ ↔ |2,k2⟩ ↔ |3,k3⟩`), so the Hilbert space splits into invariant
//! 3-dimensional manifolds. Each manifold is diagonalized in closed form:
//! the eigenvalues are the roots of a real cubic, and the dressed amplitudes
//! `G = A + xB + yC` evolve as pure phases `exp(−i z t)`.
//!
//! Energies and couplings are measured in units of the reference coupling
//! λ1, and time is the scaled time λ1·t.

use nalgebra::{Matrix3, SymmetricEigen, Vector3};
use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Configuration {
    V,
    Lambda,
    Xi,
}

impl Configuration {
    /// Photon number carried by each level's slot, relative to the photon
    /// number of the level-1 slot of the same manifold.
    ///
    /// * Ξ: `|1,n⟩ ↔ |2,n+1⟩ ↔ |3,n+2⟩`
    /// * V: `|1,n⟩ ↔ |2,n+1⟩ ↔ |3,n⟩`
    /// * Λ: `|1,n⟩ ↔ |2,n−1⟩ ↔ |3,n⟩`
    pub fn photon_offsets(self) -> [i64; 3] {
        match self {
            Configuration::Xi => [0, 1, 2],
            Configuration::V => [0, 1, 0],
            Configuration::Lambda => [0, -1, 0],
        }
    }

    /// Excited level the atom starts in unless configured otherwise.
    ///
    /// For Ξ and Λ this is the middle level of the chain; for V, where the
    /// middle level is the ground state, it is level 1.
    pub fn default_start(self) -> Level {
        match self {
            Configuration::Xi | Configuration::Lambda => Level::Two,
            Configuration::V => Level::One,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Configuration::V => "V",
            Configuration::Lambda => "Lambda",
            Configuration::Xi => "Xi",
        }
    }
}

impl std::str::FromStr for Configuration {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "V" | "v" => Ok(Configuration::V),
            "Lambda" | "lambda" | "L" => Ok(Configuration::Lambda),
            "Xi" | "xi" | "cascade" | "ladder" => Ok(Configuration::Xi),
            other => Err(Error::config(format!(
                "unknown configuration `{other}` (expected V, Lambda or Xi)"
            ))),
        }
    }
}

/// Atomic level label, in chain order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    One,
    Two,
    Three,
}

impl Level {
    pub fn index(self) -> usize {
        match self {
            Level::One => 0,
            Level::Two => 1,
            Level::Three => 2,
        }
    }

    pub fn from_number(n: i64) -> Result<Self> {
        match n {
            1 => Ok(Level::One),
            2 => Ok(Level::Two),
            3 => Ok(Level::Three),
            other => Err(Error::config(format!(
                "atomic level must be 1, 2 or 3, got {other}"
            ))),
        }
    }
}

/// Atom-field parameters in units of λ1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomConfig {
    pub configuration: Configuration,
    pub delta1: f64,
    pub delta2: f64,
    /// λ2/λ1.
    pub coupling_ratio: f64,
    /// Overall scale applied to both couplings. 1 at the reference mode
    /// frequency; 0 switches the interaction off.
    pub coupling: f64,
}

impl AtomConfig {
    /// Equal detunings on both transitions, unit coupling ratio.
    pub fn new(configuration: Configuration, delta: f64) -> Self {
        AtomConfig {
            configuration,
            delta1: delta,
            delta2: delta,
            coupling_ratio: 1.0,
            coupling: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.coupling_ratio.is_finite() && self.coupling_ratio > 0.0) {
            return Err(Error::domain(format!(
                "coupling ratio must be positive, got {}",
                self.coupling_ratio
            )));
        }
        if !self.coupling.is_finite() || self.coupling < 0.0 {
            return Err(Error::domain(format!(
                "coupling scale must be finite and non-negative, got {}",
                self.coupling
            )));
        }
        if !(self.delta1.is_finite() && self.delta2.is_finite()) {
            return Err(Error::domain("detunings must be finite"));
        }
        Ok(())
    }
}

/// Real symmetric 3×3 problem of one manifold:
/// `[[r1, v1, 0], [v1, r2, v2], [0, v2, r3]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManifoldSystem {
    pub n: i64,
    pub r: [f64; 3],
    pub v: [f64; 2],
}

impl ManifoldSystem {
    pub fn matrix(&self) -> Matrix3<f64> {
        let [r1, r2, r3] = self.r;
        let [v1, v2] = self.v;
        Matrix3::new(r1, v1, 0.0, v1, r2, v2, 0.0, v2, r3)
    }

    /// Coefficients `(c2, c1, c0)` of `z³ + c2 z² + c1 z + c0`.
    pub fn characteristic(&self) -> (f64, f64, f64) {
        let [r1, r2, r3] = self.r;
        let [v1, v2] = self.v;
        let trace = r1 + r2 + r3;
        let minors = r1 * r2 + r1 * r3 + r2 * r3 - v1 * v1 - v2 * v2;
        let det = r1 * r2 * r3 - r1 * v2 * v2 - r3 * v1 * v1;
        (-trace, minors, -det)
    }

    pub fn trace(&self) -> f64 {
        self.r.iter().sum()
    }

    pub fn determinant(&self) -> f64 {
        -self.characteristic().2
    }

    fn spectral_scale(&self) -> f64 {
        self.r
            .iter()
            .chain(self.v.iter())
            .fold(0.0_f64, |acc, x| acc.max(x.abs()))
    }
}

/// Photon numbers of the three chain slots of manifold `n`, or `None` where
/// the slot lies outside `0..=n_max`.
fn slot_photons(config: Configuration, n: i64, n_max: Option<usize>) -> [Option<usize>; 3] {
    let offsets = config.photon_offsets();
    std::array::from_fn(|i| {
        let k = n + offsets[i];
        let inside = k >= 0 && n_max.is_none_or(|m| k <= m as i64);
        inside.then_some(k as usize)
    })
}

fn manifold_with_slots(
    config: &AtomConfig,
    n: i64,
    slots: &[Option<usize>; 3],
) -> ManifoldSystem {
    // The field operator connecting adjacent slots changes the photon number
    // by one; its matrix element is √(larger photon number).
    let link = |a: Option<usize>, b: Option<usize>| match (a, b) {
        (Some(ka), Some(kb)) => (ka.max(kb) as f64).sqrt(),
        _ => 0.0,
    };
    ManifoldSystem {
        n,
        r: [config.delta1, 0.0, config.delta2],
        v: [
            config.coupling * link(slots[0], slots[1]),
            config.coupling * config.coupling_ratio * link(slots[1], slots[2]),
        ],
    }
}

/// The untruncated manifold whose level-1 slot holds `n` photons.
pub fn build_manifold(config: &AtomConfig, n: usize) -> ManifoldSystem {
    let slots = slot_photons(config.configuration, n as i64, None);
    manifold_with_slots(config, n as i64, &slots)
}

/// How the dressed basis was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    /// Trigonometric cubic roots with the `G = A + xB + yC` ansatz.
    Cubic,
    /// Symmetric eigensolver fallback for degenerate or decoupled spectra.
    Eigensolver,
}

/// Dressed energies and the change of basis to dressed amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct DressedSolution {
    /// Dressed energies, ascending.
    pub z: [f64; 3],
    /// Row `j` maps bare amplitudes `(A, B, C)` to dressed amplitude `G_j`.
    pub m: Matrix3<f64>,
    pub m_inv: Matrix3<f64>,
    pub det: f64,
    pub method: SolveMethod,
}

impl DressedSolution {
    /// The `(x_j, y_j)` ansatz coefficients, when the cubic path was taken.
    pub fn xy(&self) -> Option<[(f64, f64); 3]> {
        (self.method == SolveMethod::Cubic)
            .then(|| std::array::from_fn(|j| (self.m[(j, 1)], self.m[(j, 2)])))
    }
}

const DEGENERACY_GAP: f64 = 1e-8;
/// Smallest admissible level-1 weight of a normalized dressed vector on the
/// cubic path.
const MIN_LEADING_WEIGHT: f64 = 1e-6;

/// Real roots of `z³ + c2 z² + c1 z + c0` for a polynomial known to have
/// three real roots, ascending.
pub fn cubic_roots(c2: f64, c1: f64, c0: f64) -> [f64; 3] {
    let shift = -c2 / 3.0;
    let p = c1 - c2 * c2 / 3.0;
    let q = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0;
    let mut roots = if p >= 0.0 {
        // Triple root up to rounding.
        [shift; 3]
    } else {
        let amp = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (2.0 * p) * (-3.0 / p).sqrt()).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        let third = 2.0 * std::f64::consts::PI / 3.0;
        [
            shift + amp * phi.cos(),
            shift + amp * (phi - third).cos(),
            shift + amp * (phi - 2.0 * third).cos(),
        ]
    };
    for z in roots.iter_mut() {
        *z = polish_root(*z, c2, c1, c0);
    }
    roots.sort_by(f64::total_cmp);
    roots
}

fn polish_root(mut z: f64, c2: f64, c1: f64, c0: f64) -> f64 {
    for _ in 0..2 {
        let f = ((z + c2) * z + c1) * z + c0;
        let df = (3.0 * z + 2.0 * c2) * z + c1;
        if df == 0.0 || !f.is_finite() {
            break;
        }
        let next = z - f / df;
        if (next - z).abs() > 1e-6 * (1.0 + z.abs()) {
            // Newton left the basin; keep the closed-form root.
            break;
        }
        z = next;
    }
    z
}

/// Diagonalizes one manifold.
pub fn solve_cubic(sys: &ManifoldSystem) -> DressedSolution {
    let (c2, c1, c0) = sys.characteristic();
    let z = cubic_roots(c2, c1, c0);
    let scale = sys.spectral_scale();
    let gap = (z[1] - z[0]).min(z[2] - z[1]);
    let [v1, v2] = sys.v;
    if scale == 0.0 || gap < DEGENERACY_GAP * scale || v1 == 0.0 || v2 == 0.0 {
        return eigensolver_path(sys);
    }

    let [r1, r2, _] = sys.r;
    let mut m = Matrix3::zeros();
    for (j, &zj) in z.iter().enumerate() {
        let x = (zj - r1) / v1;
        let y = ((zj - r2) * x - v1) / v2;
        if 1.0 / (1.0 + x * x + y * y).sqrt() < MIN_LEADING_WEIGHT {
            return eigensolver_path(sys);
        }
        m[(j, 0)] = 1.0;
        m[(j, 1)] = x;
        m[(j, 2)] = y;
    }
    let (x1, y1) = (m[(0, 1)], m[(0, 2)]);
    let (x2, y2) = (m[(1, 1)], m[(1, 2)]);
    let (x3, y3) = (m[(2, 1)], m[(2, 2)]);
    let det = x1 * y2 + x2 * y3 + x3 * y1 - x1 * y3 - x2 * y1 - x3 * y2;
    // Inverse from the adjugate; column j multiplies exp(−i z_j t).
    let m_inv = Matrix3::new(
        x2 * y3 - y2 * x3,
        x3 * y1 - y3 * x1,
        x1 * y2 - y1 * x2,
        y2 - y3,
        y3 - y1,
        y1 - y2,
        x3 - x2,
        x1 - x3,
        x2 - x1,
    ) / det;
    DressedSolution {
        z,
        m,
        m_inv,
        det,
        method: SolveMethod::Cubic,
    }
}

fn eigensolver_path(sys: &ManifoldSystem) -> DressedSolution {
    let eig = SymmetricEigen::new(sys.matrix());
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let z = order.map(|i| eig.eigenvalues[i]);
    let mut m = Matrix3::zeros();
    for (row, &i) in order.iter().enumerate() {
        m.set_row(row, &eig.eigenvectors.column(i).transpose());
    }
    DressedSolution {
        z,
        m_inv: m.transpose(),
        det: m.determinant(),
        m,
        method: SolveMethod::Eigensolver,
    }
}

/// Bare amplitudes after scaled time `t`.
pub fn propagate_manifold(sol: &DressedSolution, amps: [Complex64; 3], t: f64) -> [Complex64; 3] {
    let bare = Vector3::from(amps);
    let mut dressed = sol.m.map(Complex64::from) * bare;
    for (g, &z) in dressed.iter_mut().zip(sol.z.iter()) {
        *g *= Complex64::from_polar(1.0, -z * t);
    }
    let out = sol.m_inv.map(Complex64::from) * dressed;
    [out[0], out[1], out[2]]
}

/// Atom-field pure state in the product basis `|level, photons⟩`.
///
/// `amps_a[k]`, `amps_b[k]`, `amps_c[k]` are the amplitudes of levels 1, 2, 3
/// with `k` photons in the field.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    pub n_max: usize,
    pub amps_a: Vec<Complex64>,
    pub amps_b: Vec<Complex64>,
    pub amps_c: Vec<Complex64>,
    pub nbar: f64,
    pub beta_phase: f64,
    pub t: f64,
}

/// Largest coherent-state mass allowed above `n_max − 5` at `t = 0`.
pub const INITIAL_TAIL: f64 = 1e-10;
/// Largest occupation of the top five photon numbers during evolution.
pub const EVOLVED_TAIL: f64 = 1e-8;
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Default Fock cutoff `ceil(n̄ + 10√n̄ + 15)`.
pub fn default_cutoff(nbar: f64) -> usize {
    (nbar + 10.0 * nbar.sqrt() + 15.0).ceil() as usize
}

/// Poisson probabilities `P(k)` for `k = 0..=k_max`, evaluated in log space.
pub fn poisson_probabilities(nbar: f64, k_max: usize) -> Vec<f64> {
    if nbar == 0.0 {
        let mut p = vec![0.0; k_max + 1];
        p[0] = 1.0;
        return p;
    }
    let ln_nbar = nbar.ln();
    let mut ln_p = -nbar;
    (0..=k_max)
        .map(|k| {
            if k > 0 {
                ln_p += ln_nbar - (k as f64).ln();
            }
            ln_p.exp()
        })
        .collect()
}

/// Poisson mass strictly above `k`.
fn poisson_tail_above(nbar: f64, k: usize) -> f64 {
    if nbar == 0.0 {
        return 0.0;
    }
    // Sum until the terms are negligible against the threshold.
    let upper = k + 200 + (20.0 * nbar.sqrt() + nbar) as usize;
    let p = poisson_probabilities(nbar, upper);
    p[k + 1..].iter().sum()
}

impl JointState {
    pub fn levels(&self) -> [&[Complex64]; 3] {
        [&self.amps_a, &self.amps_b, &self.amps_c]
    }

    fn levels_mut(&mut self) -> [&mut Vec<Complex64>; 3] {
        [&mut self.amps_a, &mut self.amps_b, &mut self.amps_c]
    }

    /// Total probability, summed in ascending photon number.
    pub fn norm_sqr(&self) -> f64 {
        (0..=self.n_max)
            .map(|k| {
                self.levels()
                    .iter()
                    .map(|amps| amps[k].norm_sqr())
                    .sum::<f64>()
            })
            .sum()
    }

    /// Probability of finding more than `n_max − 5` photons.
    pub fn top_occupation(&self) -> f64 {
        let start = self.n_max.saturating_sub(5) + 1;
        (start..=self.n_max)
            .map(|k| self.levels().iter().map(|a| a[k].norm_sqr()).sum::<f64>())
            .sum()
    }

    /// Atomic level populations.
    pub fn populations(&self) -> [f64; 3] {
        self.levels()
            .map(|amps| amps.iter().map(|a| a.norm_sqr()).sum::<f64>())
    }

    /// Largest pointwise amplitude difference.
    pub fn max_distance(&self, other: &JointState) -> f64 {
        self.levels()
            .iter()
            .zip(other.levels().iter())
            .flat_map(|(a, b)| a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()))
            .fold(0.0, f64::max)
    }
}

/// Product of an atomic level and a coherent field `|α⟩`, `α = √n̄ e^{iβ}`.
pub fn initial_state(
    atom_start: Level,
    nbar: f64,
    beta_phase: f64,
    n_max: Option<usize>,
) -> Result<JointState> {
    if !(nbar.is_finite() && nbar >= 0.0) {
        return Err(Error::domain(format!(
            "mean photon number must be non-negative, got {nbar}"
        )));
    }
    let n_max = n_max.unwrap_or_else(|| default_cutoff(nbar));
    let tail = poisson_tail_above(nbar, n_max.saturating_sub(5));
    if tail >= INITIAL_TAIL {
        return Err(Error::Truncation { n_max, tail });
    }
    let probs = poisson_probabilities(nbar, n_max);
    let kept: f64 = probs.iter().sum();
    let field: Vec<Complex64> = probs
        .iter()
        .enumerate()
        .map(|(k, p)| Complex64::from_polar((p / kept).sqrt(), k as f64 * beta_phase))
        .collect();
    let zeros = vec![Complex64::new(0.0, 0.0); n_max + 1];
    let mut state = JointState {
        n_max,
        amps_a: zeros.clone(),
        amps_b: zeros.clone(),
        amps_c: zeros,
        nbar,
        beta_phase,
        t: 0.0,
    };
    *state.levels_mut()[atom_start.index()] = field;
    Ok(state)
}

/// Dressed solutions of every manifold of a truncated Fock space, reusable
/// across evaluation times.
#[derive(Debug, Clone)]
pub struct Evolver {
    config: AtomConfig,
    n_max: usize,
    manifolds: Vec<([Option<usize>; 3], DressedSolution)>,
}

impl Evolver {
    pub fn new(config: &AtomConfig, n_max: usize) -> Result<Self> {
        config.validate()?;
        let offsets = config.configuration.photon_offsets();
        let lowest = -offsets.iter().max().copied().unwrap_or(0);
        let highest = n_max as i64 - offsets.iter().min().copied().unwrap_or(0);
        let manifolds = (lowest..=highest)
            .map(|n| {
                let slots = slot_photons(config.configuration, n, Some(n_max));
                let sys = manifold_with_slots(config, n, &slots);
                (slots, solve_cubic(&sys))
            })
            .collect();
        Ok(Evolver {
            config: *config,
            n_max,
            manifolds,
        })
    }

    pub fn config(&self) -> &AtomConfig {
        &self.config
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// The state `t` scaled-time units after `state0`.
    pub fn evolve(&self, state0: &JointState, t: f64) -> Result<JointState> {
        if state0.n_max != self.n_max {
            return Err(Error::domain(format!(
                "state cutoff {} does not match evolver cutoff {}",
                state0.n_max, self.n_max
            )));
        }
        if t == 0.0 {
            return Ok(state0.clone());
        }
        let zero = Complex64::new(0.0, 0.0);
        let mut out = JointState {
            amps_a: vec![zero; self.n_max + 1],
            amps_b: vec![zero; self.n_max + 1],
            amps_c: vec![zero; self.n_max + 1],
            t: state0.t + t,
            ..state0.clone()
        };
        let inputs = state0.levels();
        for (slots, sol) in &self.manifolds {
            let amps: [Complex64; 3] =
                std::array::from_fn(|i| slots[i].map_or(zero, |k| inputs[i][k]));
            let evolved = propagate_manifold(sol, amps, t);
            let targets = out.levels_mut();
            for (i, target) in targets.into_iter().enumerate() {
                if let Some(k) = slots[i] {
                    target[k] = evolved[i];
                }
            }
        }

        let before = state0.norm_sqr();
        let after = out.norm_sqr();
        if (after - before).abs() > NORM_TOLERANCE {
            return Err(Error::consistency(format!(
                "norm drifted from {before} to {after} at t = {}",
                out.t
            )));
        }
        let top = out.top_occupation();
        if top >= EVOLVED_TAIL {
            return Err(Error::Truncation {
                n_max: self.n_max,
                tail: top,
            });
        }
        Ok(out)
    }
}

/// Evolves `state0` by scaled time `t` under `config`.
pub fn evolve(state0: &JointState, config: &AtomConfig, t: f64) -> Result<JointState> {
    Evolver::new(config, state0.n_max)?.evolve(state0, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn resonant_vacuum_chain() {
        let m = build_manifold(&AtomConfig::new(Configuration::Xi, 0.0), 0);
        assert_eq!(m.r, [0.0, 0.0, 0.0]);
        assert_eq!(m.v[0], 1.0);
        assert!((m.v[1] - SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn detuned_chain() {
        let m = build_manifold(&AtomConfig::new(Configuration::Xi, 5.0), 0);
        assert_eq!(m.r, [5.0, 0.0, 5.0]);
        assert_eq!(m.v[0], 1.0);
        assert!((m.v[1] - SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn ladder_matrix_elements() {
        let mut config = AtomConfig::new(Configuration::Xi, 1.5);
        config.coupling_ratio = 0.7;
        let m = build_manifold(&config, 10);
        assert!((m.v[0] - 11f64.sqrt()).abs() < 1e-15);
        assert!((m.v[1] - 0.7 * 12f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn v_and_lambda_chains() {
        let v = build_manifold(&AtomConfig::new(Configuration::V, 0.0), 3);
        assert_eq!(v.v, [2.0, 2.0]);
        let l = build_manifold(&AtomConfig::new(Configuration::Lambda, 0.0), 4);
        assert_eq!(l.v, [2.0, 2.0]);
        let l0 = build_manifold(&AtomConfig::new(Configuration::Lambda, 0.0), 0);
        assert_eq!(l0.v, [0.0, 0.0]);
    }

    #[test]
    fn diagonal_system_is_decoupled() {
        let sys = ManifoldSystem {
            n: 0,
            r: [1.0, 2.0, 3.0],
            v: [0.0, 0.0],
        };
        let sol = solve_cubic(&sys);
        assert_eq!(sol.method, SolveMethod::Eigensolver);
        for (z, want) in sol.z.iter().zip([1.0, 2.0, 3.0]) {
            assert!((z - want).abs() < 1e-14);
        }
        let prod = sol.m_inv * sol.m;
        assert!((prod - Matrix3::identity()).abs().max() < 1e-14);
        for j in 0..3 {
            assert!((sol.m[(j, j)].abs() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn symmetric_resonant_roots() {
        let sys = ManifoldSystem {
            n: 0,
            r: [0.0; 3],
            v: [1.0, 1.0],
        };
        let sol = solve_cubic(&sys);
        assert_eq!(sol.method, SolveMethod::Cubic);
        assert!((sol.z[0] + SQRT_2).abs() < 1e-14);
        assert!(sol.z[1].abs() < 1e-14);
        assert!((sol.z[2] - SQRT_2).abs() < 1e-14);
        let xy = sol.xy().unwrap();
        // Middle root: eigenvector (1, 0, -1).
        assert!(xy[1].0.abs() < 1e-14);
        assert!((xy[1].1 + 1.0).abs() < 1e-14);
    }

    #[test]
    fn ansatz_rows_are_left_eigenvectors() {
        let sys = ManifoldSystem {
            n: 3,
            r: [0.3, -1.1, 2.0],
            v: [2.0, 1.7],
        };
        let sol = solve_cubic(&sys);
        let h = sys.matrix();
        for j in 0..3 {
            let row = sol.m.row(j);
            let lhs = row * h;
            let rhs = row * sol.z[j];
            assert!((lhs - rhs).abs().max() < 1e-12);
        }
        assert!((sol.m_inv * sol.m - Matrix3::identity()).abs().max() < 1e-12);
        assert!((sol.det - sol.m.determinant()).abs() < 1e-12 * sol.det.abs());
    }

    #[test]
    fn near_degenerate_spectrum_falls_back() {
        let sys = ManifoldSystem {
            n: 0,
            r: [1.0, 1.0, 1.0],
            v: [1e-12, 0.0],
        };
        assert_eq!(solve_cubic(&sys).method, SolveMethod::Eigensolver);
    }

    #[test]
    fn propagation_at_zero_time() {
        let sys = ManifoldSystem {
            n: 0,
            r: [0.5, 0.0, -0.2],
            v: [1.0, 1.3],
        };
        let sol = solve_cubic(&sys);
        let amps = [c(0.6, 0.0), c(0.0, 0.48), c(0.64, 0.0)];
        let out = propagate_manifold(&sol, amps, 0.0);
        for (a, b) in amps.iter().zip(out.iter()) {
            assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn decoupled_phases() {
        let sys = ManifoldSystem {
            n: 0,
            r: [1.0, -2.0, 0.5],
            v: [0.0, 0.0],
        };
        let sol = solve_cubic(&sys);
        let amps = [c(0.6, 0.0), c(0.0, 0.48), c(0.64, 0.0)];
        let t = 1.7;
        let out = propagate_manifold(&sol, amps, t);
        for i in 0..3 {
            let want = amps[i] * Complex64::from_polar(1.0, -sys.r[i] * t);
            assert!((out[i] - want).norm() < 1e-14);
        }
    }

    #[test]
    fn poisson_probabilities_sum_to_one() {
        let p = poisson_probabilities(20.0, 200);
        let total: f64 = p.iter().sum();
        assert!((total - 1.0).abs() < 1e-13);
        assert_eq!(poisson_probabilities(0.0, 3), vec![1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn vacuum_initial_state() {
        let s = initial_state(Level::One, 0.0, 0.0, None).unwrap();
        assert_eq!(s.amps_a[0], c(1.0, 0.0));
        assert!(s.amps_a[1..].iter().all(|a| a.norm() == 0.0));
        assert!(s.amps_b.iter().chain(s.amps_c.iter()).all(|a| a.norm() == 0.0));
    }

    #[test]
    fn default_cutoff_for_twenty_photons() {
        assert_eq!(default_cutoff(20.0), 80);
        let s = initial_state(Level::Two, 20.0, 0.0, None).unwrap();
        assert_eq!(s.n_max, 80);
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn phase_alternates_at_pi() {
        let s = initial_state(Level::One, 10.0, std::f64::consts::PI, None).unwrap();
        for k in 0..20 {
            let a = s.amps_a[k];
            assert!(a.im.abs() < 1e-12 * a.norm().max(1e-300) + 1e-15);
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            assert!(a.re * sign > 0.0, "k = {k}: {a}");
        }
    }

    #[test]
    fn truncation_error_reports_tail() {
        match initial_state(Level::One, 20.0, 0.0, Some(30)) {
            Err(Error::Truncation { n_max, tail }) => {
                assert_eq!(n_max, 30);
                assert!(tail > 1e-3);
            }
            other => panic!("expected truncation error, got {other:?}"),
        }
    }

    #[test]
    fn evolve_at_zero_time_is_identity() {
        let s = initial_state(Level::Two, 5.0, 0.3, None).unwrap();
        let out = evolve(&s, &AtomConfig::new(Configuration::Xi, 0.0), 0.0).unwrap();
        assert_eq!(out, s);
    }

    #[test]
    fn zero_coupling_freezes_populations() {
        let mut config = AtomConfig::new(Configuration::Xi, 2.0);
        config.coupling = 0.0;
        let s = initial_state(Level::One, 4.0, 0.0, None).unwrap();
        let out = evolve(&s, &config, 13.0).unwrap();
        for (a, b) in s.populations().iter().zip(out.populations().iter()) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_coupling_ratio() {
        let mut config = AtomConfig::new(Configuration::Xi, 0.0);
        config.coupling_ratio = 0.0;
        assert!(Evolver::new(&config, 10).is_err());
    }

    #[test]
    fn cutoff_mismatch_is_rejected() {
        let s = initial_state(Level::One, 1.0, 0.0, Some(30)).unwrap();
        let ev = Evolver::new(&AtomConfig::new(Configuration::Xi, 0.0), 31).unwrap();
        assert!(ev.evolve(&s, 1.0).is_err());
    }
}

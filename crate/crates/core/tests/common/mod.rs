//! Independent reference implementations used by the integration tests.

#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use triqed::dressed::{AtomConfig, Configuration, JointState};

pub type C = Complex64;

pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

/// Sparse Hamiltonian of the truncated atom-field space in the product basis
/// `|level, k⟩ ↦ level·(n_max+1) + k`.
pub struct ProductHamiltonian {
    pub dim: usize,
    pub diag: Vec<f64>,
    /// Off-diagonal couplings `(i, j, value)`, each listed once.
    pub links: Vec<(usize, usize, f64)>,
}

impl ProductHamiltonian {
    pub fn new(config: &AtomConfig, n_max: usize) -> Self {
        let stride = n_max + 1;
        let idx = |level: usize, k: usize| level * stride + k;
        let mut diag = vec![0.0; 3 * stride];
        for k in 0..stride {
            diag[idx(0, k)] = config.delta1;
            diag[idx(2, k)] = config.delta2;
        }
        let g1 = config.coupling;
        let g2 = config.coupling * config.coupling_ratio;
        let mut links = Vec::new();
        for k in 0..n_max {
            let s = ((k + 1) as f64).sqrt();
            match config.configuration {
                // |1,k⟩–|2,k+1⟩–|3,k+2⟩
                Configuration::Xi => {
                    links.push((idx(0, k), idx(1, k + 1), g1 * s));
                    links.push((idx(1, k), idx(2, k + 1), g2 * s));
                }
                // |1,k⟩–|2,k+1⟩–|3,k⟩
                Configuration::V => {
                    links.push((idx(0, k), idx(1, k + 1), g1 * s));
                    links.push((idx(2, k), idx(1, k + 1), g2 * s));
                }
                // |1,k+1⟩–|2,k⟩–|3,k+1⟩
                Configuration::Lambda => {
                    links.push((idx(0, k + 1), idx(1, k), g1 * s));
                    links.push((idx(2, k + 1), idx(1, k), g2 * s));
                }
            }
        }
        ProductHamiltonian {
            dim: 3 * stride,
            diag,
            links,
        }
    }

    /// `−i H ψ`.
    fn derivative(&self, psi: &[C], out: &mut [C]) {
        let minus_i = c(0.0, -1.0);
        for (o, (d, p)) in out.iter_mut().zip(self.diag.iter().zip(psi)) {
            *o = minus_i * *d * p;
        }
        for &(i, j, v) in &self.links {
            out[i] += minus_i * v * psi[j];
            out[j] += minus_i * v * psi[i];
        }
    }

    fn rk4_step(&self, psi: &[C], h: f64, scratch: &mut [Vec<C>; 5]) -> Vec<C> {
        let n = psi.len();
        let [k1, k2, k3, k4, tmp] = scratch;
        self.derivative(psi, k1);
        for i in 0..n {
            tmp[i] = psi[i] + 0.5 * h * k1[i];
        }
        self.derivative(tmp, k2);
        for i in 0..n {
            tmp[i] = psi[i] + 0.5 * h * k2[i];
        }
        self.derivative(tmp, k3);
        for i in 0..n {
            tmp[i] = psi[i] + h * k3[i];
        }
        self.derivative(tmp, k4);
        (0..n)
            .map(|i| psi[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
            .collect()
    }

    /// Integrates `i dψ/dt = Hψ` with step-doubling RK4 and local
    /// extrapolation, returning ψ at each requested (ascending) time.
    pub fn integrate(&self, psi0: &[C], times: &[f64], tol: f64) -> Vec<Vec<C>> {
        let n = psi0.len();
        let mut scratch: [Vec<C>; 5] = std::array::from_fn(|_| vec![c(0.0, 0.0); n]);
        let mut psi = psi0.to_vec();
        let mut t = 0.0;
        let mut h: f64 = 1e-3;
        let mut out = Vec::with_capacity(times.len());
        for &target in times {
            while target - t > 1e-14 {
                let step = h.min(target - t);
                let full = self.rk4_step(&psi, step, &mut scratch);
                let half = self.rk4_step(&psi, 0.5 * step, &mut scratch);
                let two = self.rk4_step(&half, 0.5 * step, &mut scratch);
                let err = two
                    .iter()
                    .zip(&full)
                    .map(|(a, b)| (a - b).norm())
                    .fold(0.0, f64::max)
                    / 15.0;
                if err <= tol {
                    for i in 0..n {
                        psi[i] = two[i] + (two[i] - full[i]) / 15.0;
                    }
                    t += step;
                }
                let factor = if err == 0.0 {
                    2.0
                } else {
                    (0.9 * (tol / err).powf(0.2)).clamp(0.2, 2.0)
                };
                h = step * factor;
            }
            out.push(psi.clone());
        }
        out
    }
}

pub fn flatten(state: &JointState) -> Vec<C> {
    state
        .levels()
        .iter()
        .flat_map(|amps| amps.iter().copied())
        .collect()
}

pub fn max_norm(a: &[C], b: &[C]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn joint_state(levels: [Vec<C>; 3]) -> JointState {
    let n_max = levels[0].len() - 1;
    let [amps_a, amps_b, amps_c] = levels;
    JointState {
        n_max,
        amps_a,
        amps_b,
        amps_c,
        nbar: 0.0,
        beta_phase: 0.0,
        t: 0.0,
    }
}

/// Normalized random joint state with Gaussian-like amplitudes.
pub fn random_state<R: Rng>(rng: &mut R, n_max: usize) -> JointState {
    let mut levels: [Vec<C>; 3] = std::array::from_fn(|_| {
        (0..=n_max)
            .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect()
    });
    let norm: f64 = levels
        .iter()
        .flatten()
        .map(|z| z.norm_sqr())
        .sum::<f64>()
        .sqrt();
    for amps in levels.iter_mut() {
        for z in amps.iter_mut() {
            *z /= norm;
        }
    }
    joint_state(levels)
}

/// Cyclic Jacobi diagonalization of a real symmetric matrix. Returns
/// ascending eigenvalues and the matching eigenvectors as columns.
pub fn jacobi_eigen(a: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut a = a.to_vec();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let cs = 1.0 / (t * t + 1.0).sqrt();
                let sn = t * cs;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = cs * akp - sn * akq;
                    a[k][q] = sn * akp + cs * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = cs * apk - sn * aqk;
                    a[q][k] = sn * apk + cs * aqk;
                }
                for row in v.iter_mut() {
                    let (vp, vq) = (row[p], row[q]);
                    row[p] = cs * vp - sn * vq;
                    row[q] = sn * vp + cs * vq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i][i].total_cmp(&a[j][j]));
    let values = order.iter().map(|&i| a[i][i]).collect();
    let vectors = (0..n)
        .map(|r| order.iter().map(|&i| v[r][i]).collect())
        .collect();
    (values, vectors)
}

/// `e^{−iHt} ψ` for a real symmetric `H` via its Jacobi eigenbasis.
pub fn exp_evolve(h: &[Vec<f64>], psi: &[C], t: f64) -> Vec<C> {
    let (vals, vecs) = jacobi_eigen(h);
    let n = h.len();
    let mut out = vec![c(0.0, 0.0); n];
    for j in 0..n {
        let proj: C = (0..n).map(|i| vecs[i][j] * psi[i]).sum();
        let phase = C::from_polar(1.0, -vals[j] * t);
        for i in 0..n {
            out[i] += vecs[i][j] * phase * proj;
        }
    }
    out
}

/// Atomic reduced density matrix from the full projector `|ψ⟩⟨ψ|`.
pub fn partial_trace_atom(state: &JointState) -> [[C; 3]; 3] {
    let psi = flatten(state);
    let stride = state.n_max + 1;
    let dim = psi.len();
    let full: Vec<Vec<C>> = (0..dim)
        .map(|i| (0..dim).map(|j| psi[i] * psi[j].conj()).collect())
        .collect();
    let mut rho = [[c(0.0, 0.0); 3]; 3];
    for (i, row) in rho.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            for k in 0..stride {
                *entry += full[i * stride + k][j * stride + k];
            }
        }
    }
    rho
}

/// Phase density at `theta` from a finite Pegg–Barnett basis of dimension
/// `s + 1` whose first state sits at `theta`; the field may be entangled with
/// the atom, so the probabilities of the three atomic branches are summed.
pub fn pegg_barnett_density(state: &JointState, theta: f64, s: usize) -> f64 {
    assert!(state.n_max <= s);
    let dim = (s + 1) as f64;
    let prob: f64 = state
        .levels()
        .iter()
        .map(|amps| {
            let overlap: C = amps
                .iter()
                .enumerate()
                .map(|(n, a)| C::from_polar(1.0 / dim.sqrt(), -(n as f64) * theta) * a)
                .sum();
            overlap.norm_sqr()
        })
        .sum();
    prob * dim / (2.0 * PI)
}

/// Total probability over the whole finite Pegg–Barnett basis.
pub fn pegg_barnett_completeness(state: &JointState, theta0: f64, s: usize) -> f64 {
    let dim = (s + 1) as f64;
    (0..=s)
        .map(|m| pegg_barnett_density(state, theta0 + 2.0 * PI * m as f64 / dim, s) * 2.0 * PI / dim)
        .sum()
}

/// First strict local maximum of a sampled curve.
pub fn first_local_max(values: &[f64]) -> Option<(usize, f64)> {
    (1..values.len().saturating_sub(1))
        .find(|&i| values[i] > values[i - 1] && values[i] >= values[i + 1])
        .map(|i| (i, values[i]))
}

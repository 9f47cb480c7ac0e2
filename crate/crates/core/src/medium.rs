//! Effective-medium model of the photonic-crystal cavity.
//!
//! Each semi-infinite crystal is a periodic stack of two dielectric layers.
//! In the long-wavelength limit it behaves as a uniaxial medium with the
//! optical axis along `z`. The slab between the crystals carries the
//! interface polaritons whose frequency-dependent local field sets the
//! atom-field coupling.
//!
//! Units: lengths in Å, in-plane wavenumbers in 1/Å, angular frequencies in
//! rad/s. Frequency ratios are taken relative to the transverse optical
//! phonon frequency ωT.

use std::fmt;

use crate::error::{Error, Result};

/// Speed of light in Å/s.
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e18;

/// Reduced Planck constant in meV·s.
pub const HBAR_MEV_S: f64 = 6.582_119_569e-13;

/// Converts a photon energy in meV to an angular frequency in rad/s.
pub fn angular_frequency(energy_mev: f64) -> f64 {
    energy_mev / HBAR_MEV_S
}

/// One period of a layered photonic crystal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerPair {
    pub eta_a: f64,
    pub eta_b: f64,
    pub d_a: f64,
    pub d_b: f64,
}

impl LayerPair {
    pub fn new(eta_a: f64, d_a: f64, eta_b: f64, d_b: f64) -> Result<Self> {
        let pair = LayerPair {
            eta_a,
            eta_b,
            d_a,
            d_b,
        };
        pair.validate()?;
        Ok(pair)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.d_a) || !positive(self.d_b) {
            return Err(Error::domain(format!(
                "layer thicknesses must be positive, got d_a = {}, d_b = {}",
                self.d_a, self.d_b
            )));
        }
        if !positive(self.eta_a) || !positive(self.eta_b) {
            return Err(Error::domain(format!(
                "layer permittivities must be positive, got eta_a = {}, eta_b = {}",
                self.eta_a, self.eta_b
            )));
        }
        Ok(())
    }

    pub fn period(&self) -> f64 {
        self.d_a + self.d_b
    }
}

/// In-plane and axial relative permittivities of a uniaxial medium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniaxialTensor {
    pub eps_par: f64,
    pub eps_z: f64,
}

/// Long-wavelength permittivity tensor of a periodic two-layer stack.
///
/// The in-plane component is the thickness-weighted arithmetic mean of the
/// layer permittivities, the axial component the weighted harmonic mean.
pub fn effective_permittivity(layers: &LayerPair) -> Result<UniaxialTensor> {
    layers.validate()?;
    let LayerPair {
        eta_a,
        eta_b,
        d_a,
        d_b,
    } = *layers;
    let period = d_a + d_b;
    Ok(UniaxialTensor {
        eps_par: (eta_a * d_a + eta_b * d_b) / period,
        eps_z: eta_a * eta_b * period / (eta_a * d_b + eta_b * d_a),
    })
}

/// The dielectric cavity occupying `0 < z < slab_width`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlabGeometry {
    pub slab_width: f64,
    pub eps_slab: f64,
}

impl SlabGeometry {
    pub fn new(slab_width: f64, eps_slab: f64) -> Result<Self> {
        if !(slab_width.is_finite() && slab_width > 0.0) {
            return Err(Error::domain(format!(
                "slab width must be positive, got {slab_width}"
            )));
        }
        if !eps_slab.is_finite() || eps_slab == 0.0 {
            return Err(Error::domain(format!(
                "slab permittivity must be finite and non-zero, got {eps_slab}"
            )));
        }
        Ok(SlabGeometry {
            slab_width,
            eps_slab,
        })
    }
}

/// Frequency dependence of the slab permittivity εs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SlabPermittivity {
    /// εs independent of frequency.
    Constant(f64),
    /// Polar-crystal response εs(ω) = ε∞ (ω² − ωL²) / (ω² − ωT²), written in
    /// units of ωT.
    SingleResonance { eps_inf: f64, omega_l_ratio: f64 },
}

impl SlabPermittivity {
    /// εs at `omega_ratio` = ω/ωT. `None` at the ωT resonance.
    pub fn at(&self, omega_ratio: f64) -> Option<f64> {
        match *self {
            SlabPermittivity::Constant(eps) => Some(eps),
            SlabPermittivity::SingleResonance {
                eps_inf,
                omega_l_ratio,
            } => {
                let w2 = omega_ratio * omega_ratio;
                let denom = w2 - 1.0;
                if denom.abs() < POLE_TOLERANCE {
                    None
                } else {
                    Some(eps_inf * (w2 - omega_l_ratio * omega_l_ratio) / denom)
                }
            }
        }
    }
}

/// Distance in (ω/ωT)² below which a coupling pole is reported.
pub const POLE_TOLERANCE: f64 = 1e-9;

/// Inputs of the dimensionless atom-field coupling factor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingModel {
    pub omega_ratio: f64,
    pub omega_l_ratio: f64,
    pub eps_s: f64,
    /// Pole location η in units of ωT.
    pub pole: f64,
    /// Local-field factor Y = 3εs / (2εs + 1).
    pub local_field: f64,
}

impl CouplingModel {
    /// Derives the pole and local-field factor from εs.
    pub fn new(omega_ratio: f64, omega_l_ratio: f64, eps_s: f64) -> Result<Self> {
        let denom = 2.0 * eps_s + 1.0;
        if denom.abs() < POLE_TOLERANCE {
            return Err(Error::domain(format!(
                "local-field factor diverges at eps_s = {eps_s}"
            )));
        }
        let pole_sq = (2.0 * eps_s * omega_l_ratio * omega_l_ratio + 1.0) / denom;
        if pole_sq < 0.0 {
            return Err(Error::domain(format!(
                "eps_s = {eps_s} gives a negative squared pole {pole_sq}"
            )));
        }
        Ok(CouplingModel {
            omega_ratio,
            omega_l_ratio,
            eps_s,
            pole: pole_sq.sqrt(),
            local_field: 3.0 * eps_s / denom,
        })
    }

    /// Replaces the derived pole by an externally supplied location.
    pub fn with_pole(mut self, pole: f64) -> Self {
        self.pole = pole;
        self
    }

    pub fn at_frequency(mut self, omega_ratio: f64) -> Self {
        self.omega_ratio = omega_ratio;
        self
    }
}

/// The coupling factor sits on its pole.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pole {
    pub omega_ratio: f64,
    pub pole: f64,
}

impl fmt::Display for Pole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "coupling pole at omega/omega_T = {} (eta = {})",
            self.omega_ratio, self.pole
        )
    }
}

/// λ = Y [(ω/ωT)² − (ωL/ωT)²] / [(ω/ωT)² − η²].
pub fn coupling_lambda(model: &CouplingModel) -> std::result::Result<f64, Pole> {
    let w2 = model.omega_ratio * model.omega_ratio;
    let denom = w2 - model.pole * model.pole;
    if denom.abs() < POLE_TOLERANCE {
        return Err(Pole {
            omega_ratio: model.omega_ratio,
            pole: model.pole,
        });
    }
    let wl2 = model.omega_l_ratio * model.omega_l_ratio;
    Ok(model.local_field * (w2 - wl2) / denom)
}

/// Regions in which a field at the requested (k∥, ω) propagates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Propagating {
    pub slab: bool,
    pub crystal1: bool,
    pub crystal2: bool,
}

/// Why no bound interface mode exists at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Unbound {
    /// At least one transverse wavenumber is imaginary.
    NotEvanescent(Propagating),
    /// The inverse hyperbolic tangent is evaluated outside (−1, 1).
    OutOfBranch { argument: f64 },
}

impl fmt::Display for Unbound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Unbound::NotEvanescent(p) => write!(
                f,
                "not evanescent (slab: {}, crystal 1: {}, crystal 2: {})",
                p.slab, p.crystal1, p.crystal2
            ),
            Unbound::OutOfBranch { argument } => {
                write!(f, "arctanh argument {argument} outside (-1, 1)")
            }
        }
    }
}

/// Decay constants normal to the interfaces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransverseWavenumbers {
    pub ks: f64,
    pub k1: f64,
    pub k2: f64,
}

/// Which closed form of the slab dispersion relation to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DispersionForm {
    /// `(ks/εs) + k1 k2 / (ε1∥ ε2∥)` in the denominator.
    #[default]
    AsPrinted,
    /// `(ks/εs)² + k1 k2 / (ε1∥ ε2∥)` in the denominator. Reduces to the
    /// single-interface condition for a thick slab between identical crystals.
    Corrected,
}

/// Slab plus the two bounding crystals.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Waveguide {
    pub slab: SlabGeometry,
    pub crystal1: UniaxialTensor,
    pub crystal2: UniaxialTensor,
    pub form: DispersionForm,
}

/// Scan window for bound-mode roots in k∥.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionSearch {
    pub k_min: f64,
    pub k_max: f64,
    pub samples: usize,
}

pub const RESIDUAL_TOLERANCE: f64 = 1e-10;
const MAX_BISECTIONS: usize = 200;

impl Waveguide {
    pub fn new(slab: SlabGeometry, crystal1: UniaxialTensor, crystal2: UniaxialTensor) -> Self {
        Waveguide {
            slab,
            crystal1,
            crystal2,
            form: DispersionForm::AsPrinted,
        }
    }

    pub fn with_form(mut self, form: DispersionForm) -> Self {
        self.form = form;
        self
    }

    /// ks² = k∥² − ω²εs/c², ki² = εi∥ k∥²/εzi − ω²εi∥/c².
    pub fn transverse_wavenumbers(
        &self,
        k_par: f64,
        omega: f64,
    ) -> std::result::Result<TransverseWavenumbers, Unbound> {
        let w2c2 = (omega / SPEED_OF_LIGHT).powi(2);
        let k2 = k_par * k_par;
        let ks_sq = k2 - w2c2 * self.slab.eps_slab;
        let crystal_sq =
            |c: &UniaxialTensor| c.eps_par * k2 / c.eps_z - w2c2 * c.eps_par;
        let k1_sq = crystal_sq(&self.crystal1);
        let k2_sq = crystal_sq(&self.crystal2);
        let propagating = Propagating {
            slab: ks_sq < 0.0,
            crystal1: k1_sq < 0.0,
            crystal2: k2_sq < 0.0,
        };
        if propagating != Propagating::default() {
            return Err(Unbound::NotEvanescent(propagating));
        }
        Ok(TransverseWavenumbers {
            ks: ks_sq.sqrt(),
            k1: k1_sq.sqrt(),
            k2: k2_sq.sqrt(),
        })
    }

    /// `ks·r − arctanh(x)` where `x` is the right-hand side of the slab
    /// dispersion relation. Zero on a bound interface polariton.
    pub fn dispersion_residual(
        &self,
        k_par: f64,
        omega: f64,
    ) -> std::result::Result<f64, Unbound> {
        let TransverseWavenumbers { ks, k1, k2 } = self.transverse_wavenumbers(k_par, omega)?;
        let s = ks / self.slab.eps_slab;
        let b1 = k1 / self.crystal1.eps_par;
        let b2 = k2 / self.crystal2.eps_par;
        let atanh = match self.form {
            DispersionForm::AsPrinted => {
                let x = -s * (b1 + b2) / (s + b1 * b2);
                if !(x.abs() < 1.0) {
                    return Err(Unbound::OutOfBranch { argument: x });
                }
                x.atanh()
            }
            DispersionForm::Corrected => {
                // With a = −ks/εs: 1 ± x = (a ± b1)(a ± b2) / (a² + b1 b2).
                // The factored ratio keeps precision when x is close to 1.
                let a = -s;
                let denom = a * a + b1 * b2;
                let x = a * (b1 + b2) / denom;
                let plus = (a + b1) * (a + b2) / denom;
                let minus = (a - b1) * (a - b2) / denom;
                if !(plus > 0.0 && minus > 0.0) || !x.is_finite() {
                    return Err(Unbound::OutOfBranch { argument: x });
                }
                0.5 * (plus / minus).ln()
            }
        };
        Ok(ks * self.slab.slab_width - atanh)
    }

    /// All bound-mode wavenumbers in the search window, ascending.
    ///
    /// The window is sampled uniformly; every pair of adjacent in-branch
    /// samples with opposite residual sign is refined by bisection. Points
    /// outside the evanescent branch are skipped; where a cell straddles a
    /// branch edge, the edge is located first and the in-branch part is
    /// searched. Sign changes that do not converge to a residual below
    /// [`RESIDUAL_TOLERANCE`] (branch singularities) are discarded.
    pub fn solve_dispersion(&self, omega: f64, search: &DispersionSearch) -> Result<Vec<f64>> {
        let DispersionSearch {
            k_min,
            k_max,
            samples,
        } = *search;
        if !(k_min.is_finite() && k_max.is_finite()) || k_min < 0.0 || k_max <= k_min {
            return Err(Error::domain(format!(
                "invalid k_par bracket [{k_min}, {k_max}]"
            )));
        }
        if samples < 2 {
            return Err(Error::domain("dispersion scan needs at least 2 samples"));
        }
        let step = (k_max - k_min) / (samples - 1) as f64;
        let grid: Vec<(f64, Option<f64>)> = (0..samples)
            .map(|i| {
                let k = if i + 1 == samples {
                    k_max
                } else {
                    k_min + step * i as f64
                };
                (k, self.dispersion_residual(k, omega).ok())
            })
            .collect();

        let mut roots = Vec::new();
        for (i, &(k, f)) in grid.iter().enumerate() {
            if f == Some(0.0) {
                roots.push(k);
                continue;
            }
            let Some(&(k_next, f_next)) = grid.get(i + 1) else {
                break;
            };
            let bracket = match (f, f_next) {
                (Some(fa), Some(fb)) => (fa * fb < 0.0).then_some((k, fa, k_next)),
                (Some(fa), None) => self
                    .branch_edge(omega, k, k_next)
                    .filter(|&(_, fe)| fa * fe < 0.0)
                    .map(|(ke, _)| (k, fa, ke)),
                (None, Some(fb)) => self
                    .branch_edge(omega, k_next, k)
                    .filter(|&(_, fe)| fe * fb < 0.0)
                    .map(|(ke, fe)| (ke, fe, k_next)),
                (None, None) => None,
            };
            if let Some((lo, f_lo, hi)) = bracket {
                if let Some(root) = self.bisect(omega, lo, f_lo, hi) {
                    roots.push(root);
                }
            }
        }
        roots.sort_by(f64::total_cmp);
        roots.dedup();
        Ok(roots)
    }

    /// Last in-branch point (and its residual) between `inside`, which is
    /// in-branch, and `outside`, which is not.
    fn branch_edge(&self, omega: f64, mut inside: f64, mut outside: f64) -> Option<(f64, f64)> {
        let mut f_inside = self.dispersion_residual(inside, omega).ok()?;
        for _ in 0..MAX_BISECTIONS {
            let mid = 0.5 * (inside + outside);
            if mid == inside || mid == outside {
                break;
            }
            match self.dispersion_residual(mid, omega) {
                Ok(f) => {
                    inside = mid;
                    f_inside = f;
                }
                Err(_) => outside = mid,
            }
        }
        Some((inside, f_inside))
    }

    fn bisect(&self, omega: f64, mut lo: f64, mut f_lo: f64, mut hi: f64) -> Option<f64> {
        let mut mid = 0.5 * (lo + hi);
        let mut f_mid = f_lo;
        for _ in 0..MAX_BISECTIONS {
            mid = 0.5 * (lo + hi);
            f_mid = self.dispersion_residual(mid, omega).ok()?;
            if f_mid == 0.0 || mid <= lo || mid >= hi {
                break;
            }
            if f_lo * f_mid < 0.0 {
                hi = mid;
            } else {
                lo = mid;
                f_lo = f_mid;
            }
        }
        (f_mid.abs() < RESIDUAL_TOLERANCE).then_some(mid)
    }
}

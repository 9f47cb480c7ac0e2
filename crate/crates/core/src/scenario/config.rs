//! Scenario files.
//!
//! A scenario is a small TOML document with five sections: `[medium]`,
//! `[atom]`, `[field]`, `[sweep]` and `[output]`. Unknown keys are rejected.
//! Any key can be overridden from the command line as `section.key=value`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::dressed::{AtomConfig, Configuration, Level};
use crate::error::{Error, Result};
use crate::medium::{
    effective_permittivity, CouplingModel, DispersionForm, LayerPair, SlabPermittivity,
    UniaxialTensor,
};

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default)]
    pub medium: MediumConfig,
    #[serde(default)]
    pub atom: AtomSection,
    #[serde(default)]
    pub field: FieldConfig,
    pub sweep: SweepConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EpsModel {
    Constant,
    Resonant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormChoice {
    AsPrinted,
    Corrected,
}

impl From<FormChoice> for DispersionForm {
    fn from(f: FormChoice) -> Self {
        match f {
            FormChoice::AsPrinted => DispersionForm::AsPrinted,
            FormChoice::Corrected => DispersionForm::Corrected,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MediumConfig {
    /// Slab permittivity; ε∞ when `eps_model = "resonant"`.
    pub eps_s: f64,
    pub eps_model: EpsModel,
    /// ħωL in meV.
    pub hbar_omega_l: f64,
    /// ħωT in meV.
    pub hbar_omega_t: f64,
    /// Pole location η in units of ωT. Derived from εs when absent.
    pub eta: Option<f64>,
    /// Mode frequency ω/ωT used when it is not the sweep axis.
    pub omega_ratio: f64,
    /// Frequency at which the coupling equals the λ1 unit.
    pub omega_ref: f64,
    /// Atomic transition frequency ω0/ωT. Does not enter the scaled dynamics.
    pub omega0_ratio: f64,
    pub coupling_scale: f64,
    /// Slab width in Å.
    pub slab_width: f64,
    pub eta1: f64,
    pub d1: f64,
    pub eta2: f64,
    pub d2: f64,
    pub eta3: f64,
    pub d3: f64,
    pub eta4: f64,
    pub d4: f64,
    pub dispersion_form: FormChoice,
}

impl Default for MediumConfig {
    fn default() -> Self {
        MediumConfig {
            eps_s: 10.89,
            eps_model: EpsModel::Constant,
            hbar_omega_l: 36.29,
            hbar_omega_t: 33.25,
            eta: None,
            omega_ratio: 2.0,
            omega_ref: 2.0,
            omega0_ratio: 1.0,
            coupling_scale: 1.0,
            slab_width: 1200.0,
            eta1: 9.0,
            d1: 500.0,
            eta2: 1.3,
            d2: 300.0,
            eta3: 10.0,
            d3: 500.0,
            eta4: 1.5,
            d4: 400.0,
            dispersion_form: FormChoice::AsPrinted,
        }
    }
}

impl MediumConfig {
    pub fn omega_l_ratio(&self) -> f64 {
        self.hbar_omega_l / self.hbar_omega_t
    }

    pub fn slab_permittivity(&self) -> SlabPermittivity {
        match self.eps_model {
            EpsModel::Constant => SlabPermittivity::Constant(self.eps_s),
            EpsModel::Resonant => SlabPermittivity::SingleResonance {
                eps_inf: self.eps_s,
                omega_l_ratio: self.omega_l_ratio(),
            },
        }
    }

    /// Coupling inputs at `omega_ratio`, or `None` where εs itself is
    /// singular.
    pub fn coupling_model(&self, omega_ratio: f64) -> Option<CouplingModel> {
        let eps = self.slab_permittivity().at(omega_ratio)?;
        let model = CouplingModel::new(omega_ratio, self.omega_l_ratio(), eps).ok()?;
        Some(match self.eta {
            Some(eta) => model.with_pole(eta),
            None => model,
        })
    }

    pub fn crystals(&self) -> Result<(UniaxialTensor, UniaxialTensor)> {
        let first = LayerPair::new(self.eta1, self.d1, self.eta2, self.d2)?;
        let second = LayerPair::new(self.eta3, self.d3, self.eta4, self.d4)?;
        Ok((
            effective_permittivity(&first)?,
            effective_permittivity(&second)?,
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AtomSection {
    pub configuration: String,
    /// Common detuning, in units of λ1.
    pub delta: f64,
    pub delta1: Option<f64>,
    pub delta2: Option<f64>,
    pub coupling_ratio: f64,
    /// Initial atomic level (1, 2 or 3).
    pub atom_start: Option<i64>,
}

impl Default for AtomSection {
    fn default() -> Self {
        AtomSection {
            configuration: "Xi".to_owned(),
            delta: 0.0,
            delta1: None,
            delta2: None,
            coupling_ratio: 1.0,
            atom_start: None,
        }
    }
}

impl AtomSection {
    pub fn configuration(&self) -> Result<Configuration> {
        self.configuration.parse()
    }

    /// Atom parameters at unit coupling scale.
    pub fn atom_config(&self) -> Result<AtomConfig> {
        let mut config = AtomConfig::new(self.configuration()?, self.delta);
        config.delta1 = self.delta1.unwrap_or(self.delta);
        config.delta2 = self.delta2.unwrap_or(self.delta);
        config.coupling_ratio = self.coupling_ratio;
        Ok(config)
    }

    pub fn start_level(&self) -> Result<Level> {
        match self.atom_start {
            Some(n) => Level::from_number(n),
            None => Ok(self.configuration()?.default_start()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FieldConfig {
    pub nbar: f64,
    pub beta_phase: f64,
    pub n_max: Option<usize>,
}

impl Default for FieldConfig {
    fn default() -> Self {
        FieldConfig {
            nbar: 20.0,
            beta_phase: 0.0,
            n_max: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    Time,
    ModeFrequency,
    Nbar,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub axis: SweepAxis,
    pub low: f64,
    pub high: f64,
    /// Number of sample points, including both ends when more than one.
    pub steps: usize,
    /// Scaled time λ1·t used when time is not the sweep axis.
    #[serde(default)]
    pub time: f64,
}

impl SweepConfig {
    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.low];
        }
        let last = self.steps - 1;
        let step = (self.high - self.low) / last as f64;
        (0..self.steps)
            .map(|i| {
                if i == last {
                    self.high
                } else {
                    self.low + step * i as f64
                }
            })
            .collect()
    }

    pub fn spacing(&self) -> f64 {
        if self.steps > 1 {
            (self.high - self.low) / (self.steps - 1) as f64
        } else {
            self.high - self.low
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    Concurrence,
    RN,
    RPsi,
    EntropySum,
    Populations,
    PhaseGrid,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub directory: PathBuf,
    /// Charts drawn with `--svg`; `phase_grid` also enables phase dumps.
    pub observables: Vec<Observable>,
    /// Phase grid size; `max(1024, 4 n_max)` when absent.
    pub grid_size: Option<usize>,
    /// Dump `P(θ)` at every `phase_every`-th sweep point (0 disables).
    pub phase_every: usize,
    /// Write bound interface-mode wavenumbers for mode-frequency sweeps.
    pub dispersion: bool,
    /// Upper end of the k∥ scan in units of ω/c.
    pub dispersion_k_max: f64,
    pub dispersion_samples: usize,
    pub svg: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            directory: PathBuf::from("out"),
            observables: vec![
                Observable::Concurrence,
                Observable::RN,
                Observable::RPsi,
                Observable::EntropySum,
                Observable::Populations,
            ],
            grid_size: None,
            phase_every: 0,
            dispersion: false,
            dispersion_k_max: 50.0,
            dispersion_samples: 2000,
            svg: false,
        }
    }
}

pub const PRESET_NAMES: [&str; 10] = [
    "fig3a", "fig3b", "fig4a", "fig4b", "fig5a", "fig5b", "fig7", "fig8", "fig9", "fig10",
];

/// Source text of a bundled preset.
pub fn preset_source(name: &str) -> Option<&'static str> {
    Some(match name {
        "fig3a" => include_str!("../../presets/fig3a.toml"),
        "fig3b" => include_str!("../../presets/fig3b.toml"),
        "fig4a" => include_str!("../../presets/fig4a.toml"),
        "fig4b" => include_str!("../../presets/fig4b.toml"),
        "fig5a" => include_str!("../../presets/fig5a.toml"),
        "fig5b" => include_str!("../../presets/fig5b.toml"),
        "fig7" => include_str!("../../presets/fig7.toml"),
        "fig8" => include_str!("../../presets/fig8.toml"),
        "fig9" => include_str!("../../presets/fig9.toml"),
        "fig10" => include_str!("../../presets/fig10.toml"),
        _ => return None,
    })
}

fn line_of(source: &str, offset: usize) -> usize {
    source[..offset.min(source.len())].matches('\n').count() + 1
}

fn parse_table(source: &str) -> Result<toml::Table> {
    source.parse::<toml::Table>().map_err(|e| Error::ConfigParse {
        line: e.span().map_or(0, |s| line_of(source, s.start)),
        message: e.message().to_owned(),
    })
}

/// Applies a `section.key=value` override. The value is read as a TOML
/// literal, falling back to a bare string.
pub fn apply_override(table: &mut toml::Table, assignment: &str) -> Result<()> {
    let (key, raw) = assignment
        .split_once('=')
        .ok_or_else(|| Error::config(format!("override `{assignment}` is not key=value")))?;
    let key = key.trim();
    let raw = raw.trim();
    let (section, field) = key
        .split_once('.')
        .ok_or_else(|| Error::config(format!("override key `{key}` must be section.key")))?;
    let value = format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_owned()));
    let entry = table
        .entry(section.to_owned())
        .or_insert_with(|| toml::Value::Table(toml::Table::new()));
    match entry {
        toml::Value::Table(t) => {
            t.insert(field.to_owned(), value);
            Ok(())
        }
        _ => Err(Error::config(format!("`{section}` is not a section"))),
    }
}

/// Parses and validates scenario text with optional overrides.
pub fn parse_config(source: &str, overrides: &[String]) -> Result<ScenarioConfig> {
    let mut table = parse_table(source)?;
    for assignment in overrides {
        apply_override(&mut table, assignment)?;
    }
    let config: ScenarioConfig = table
        .try_into()
        .map_err(|e: toml::de::Error| Error::config(e.message().to_owned()))?;
    config.validate()?;
    Ok(config)
}

pub fn load_config(path: &Path) -> Result<ScenarioConfig> {
    load_config_with(path, &[])
}

pub fn load_config_with(path: &Path, overrides: &[String]) -> Result<ScenarioConfig> {
    let source = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&source, overrides)
}

pub fn load_preset(name: &str, overrides: &[String]) -> Result<ScenarioConfig> {
    let source = preset_source(name)
        .ok_or_else(|| Error::config(format!("unknown preset `{name}`")))?;
    parse_config(source, overrides)
}

fn require(cond: bool, key: &str, msg: impl std::fmt::Display) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::config(format!("`{key}`: {msg}")))
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        let s = &self.sweep;
        require(s.steps >= 1, "sweep.steps", "must be at least 1")?;
        require(
            s.low.is_finite() && s.high.is_finite() && s.low < s.high,
            "sweep.low",
            format!("range [{}, {}] must satisfy low < high", s.low, s.high),
        )?;
        require(s.time.is_finite(), "sweep.time", "must be finite")?;
        if s.axis == SweepAxis::Nbar {
            require(s.low >= 0.0, "sweep.low", "mean photon number must be >= 0")?;
        }
        if s.axis == SweepAxis::ModeFrequency {
            require(s.low > 0.0, "sweep.low", "mode frequency must be positive")?;
        }

        let m = &self.medium;
        require(
            m.hbar_omega_t > 0.0 && m.hbar_omega_l > 0.0,
            "medium.hbar_omega_t",
            "phonon energies must be positive",
        )?;
        require(m.slab_width > 0.0, "medium.slab_width", "must be positive")?;
        require(
            m.coupling_scale.is_finite() && m.coupling_scale >= 0.0,
            "medium.coupling_scale",
            "must be non-negative",
        )?;
        if let Some(eta) = m.eta {
            require(eta > 0.0, "medium.eta", "must be positive")?;
        }
        m.crystals()
            .map_err(|e| Error::config(format!("`medium` layers: {e}")))?;

        let a = &self.atom;
        a.configuration()?;
        require(a.coupling_ratio > 0.0, "atom.coupling_ratio", "must be positive")?;
        a.start_level()
            .map_err(|_| Error::config("`atom.atom_start`: must be 1, 2 or 3"))?;

        let f = &self.field;
        require(f.nbar >= 0.0 && f.nbar.is_finite(), "field.nbar", "must be >= 0")?;

        let o = &self.output;
        if let Some(g) = o.grid_size {
            require(g >= 4 && g % 2 == 0, "output.grid_size", "must be even and >= 4")?;
        }
        require(
            o.dispersion_samples >= 2,
            "output.dispersion_samples",
            "must be at least 2",
        )?;
        require(
            o.dispersion_k_max > 1.0,
            "output.dispersion_k_max",
            "must exceed 1 (units of omega/c)",
        )?;
        Ok(())
    }
}

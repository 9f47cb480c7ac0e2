//! Sweep evaluation.

use rayon::prelude::*;

use crate::dressed::{default_cutoff, initial_state, AtomConfig, Evolver, JointState, Level};
use crate::entanglement::{concurrence, pure_concurrence, reduce_atom};
use crate::error::{Error, Result};
use crate::medium::{
    angular_frequency, coupling_lambda, DispersionSearch, SlabGeometry, Waveguide,
    SPEED_OF_LIGHT,
};
use crate::phase::{default_grid_size, entropy_pair_from, number_distribution, phase_distribution, PhaseGrid};

use super::config::{Observable, ScenarioConfig, SweepAxis};

/// Observables at one sweep point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowValues {
    pub concurrence: f64,
    pub r_n: f64,
    pub r_psi: f64,
    pub entropy_sum: f64,
    pub populations: [f64; 3],
}

#[derive(Debug, Clone, PartialEq)]
pub struct ObservableRow {
    pub axis: f64,
    /// `None` where the coupling has a pole.
    pub values: Option<RowValues>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSnapshot {
    pub index: usize,
    pub axis: f64,
    pub grid: PhaseGrid,
}

/// Bound interface-mode wavenumbers (1/Å) at one mode frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct DispersionPoint {
    pub omega_ratio: f64,
    pub k_par: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioOutput {
    pub rows: Vec<ObservableRow>,
    pub phase: Vec<PhaseSnapshot>,
    pub dispersion: Vec<DispersionPoint>,
}

/// Coupling scale at `omega_ratio` relative to the reference frequency, or
/// `None` at a pole.
pub fn relative_coupling(config: &ScenarioConfig, omega_ratio: f64) -> Result<Option<f64>> {
    let m = &config.medium;
    let reference = m
        .coupling_model(m.omega_ref)
        .and_then(|c| coupling_lambda(&c).ok())
        .filter(|l| l.is_finite() && *l != 0.0)
        .ok_or_else(|| {
            Error::config(format!(
                "`medium.omega_ref`: coupling is singular or zero at {}",
                m.omega_ref
            ))
        })?;
    let Some(model) = m.coupling_model(omega_ratio) else {
        return Ok(None);
    };
    Ok(coupling_lambda(&model)
        .ok()
        .map(|l| m.coupling_scale * (l / reference).abs()))
}

/// Whether the sweep cell around `omega_ratio` contains the configured pole.
fn in_pole_cell(config: &ScenarioConfig, omega_ratio: f64) -> bool {
    let Some(model) = config.medium.coupling_model(omega_ratio) else {
        return true;
    };
    let half = 0.5 * config.sweep.spacing();
    (omega_ratio - model.pole).abs() < half
}

struct Point {
    index: usize,
    axis: f64,
    want_phase: bool,
}

struct Evaluated {
    row: ObservableRow,
    phase: Option<PhaseGrid>,
}

fn observe(
    state: &JointState,
    grid_size: Option<usize>,
    keep_phase: bool,
) -> Result<(RowValues, Option<PhaseGrid>)> {
    // The density-matrix form guards against inconsistent states; the
    // state form is the value reported.
    pure_concurrence(&reduce_atom(state))?;
    let concurrence = concurrence(state);
    let limit = (4.0f64 / 3.0).sqrt();
    if concurrence > limit + 1e-10 {
        return Err(Error::consistency(format!(
            "concurrence {concurrence} exceeds sqrt(4/3) at t = {}",
            state.t
        )));
    }
    let grid = phase_distribution(state, grid_size.unwrap_or(default_grid_size(state.n_max)))?;
    let pair = entropy_pair_from(&number_distribution(state), &grid)?;
    let values = RowValues {
        concurrence,
        r_n: pair.r_n,
        r_psi: pair.r_psi,
        entropy_sum: pair.sum,
        populations: state.populations(),
    };
    Ok((values, keep_phase.then_some(grid)))
}

/// Evaluates every sweep point. Points are computed in parallel; results
/// are returned in sweep order and do not depend on the thread count.
pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioOutput> {
    config.validate()?;
    let base: AtomConfig = config.atom.atom_config()?;
    let start: Level = config.atom.start_level()?;
    let field = &config.field;
    let grid_size = config.output.grid_size;
    let dump_phase =
        config.output.phase_every > 0 && config.output.observables.contains(&Observable::PhaseGrid);

    let points: Vec<Point> = config
        .sweep
        .points()
        .into_iter()
        .enumerate()
        .map(|(index, axis)| Point {
            index,
            axis,
            want_phase: dump_phase && index % config.output.phase_every == 0,
        })
        .collect();

    let evaluated: Vec<Evaluated> = match config.sweep.axis {
        SweepAxis::Time => {
            let coupling = relative_coupling(config, config.medium.omega_ratio)?.ok_or_else(|| {
                Error::config(format!(
                    "`medium.omega_ratio`: coupling has a pole at {}",
                    config.medium.omega_ratio
                ))
            })?;
            let atom = AtomConfig { coupling, ..base };
            let state0 = initial_state(start, field.nbar, field.beta_phase, field.n_max)?;
            let evolver = Evolver::new(&atom, state0.n_max)?;
            points
                .par_iter()
                .map(|p| {
                    let state = evolver.evolve(&state0, p.axis)?;
                    let (values, phase) = observe(&state, grid_size, p.want_phase)?;
                    Ok(Evaluated {
                        row: ObservableRow {
                            axis: p.axis,
                            values: Some(values),
                        },
                        phase,
                    })
                })
                .collect::<Result<_>>()?
        }
        SweepAxis::ModeFrequency => {
            let state0 = initial_state(start, field.nbar, field.beta_phase, field.n_max)?;
            points
                .par_iter()
                .map(|p| {
                    let coupling = if in_pole_cell(config, p.axis) {
                        None
                    } else {
                        relative_coupling(config, p.axis)?
                    };
                    let Some(coupling) = coupling else {
                        return Ok(Evaluated {
                            row: ObservableRow {
                                axis: p.axis,
                                values: None,
                            },
                            phase: None,
                        });
                    };
                    let atom = AtomConfig { coupling, ..base };
                    let state = Evolver::new(&atom, state0.n_max)?.evolve(&state0, config.sweep.time)?;
                    let (values, phase) = observe(&state, grid_size, p.want_phase)?;
                    Ok(Evaluated {
                        row: ObservableRow {
                            axis: p.axis,
                            values: Some(values),
                        },
                        phase,
                    })
                })
                .collect::<Result<_>>()?
        }
        SweepAxis::Nbar => {
            let coupling = relative_coupling(config, config.medium.omega_ratio)?.ok_or_else(|| {
                Error::config(format!(
                    "`medium.omega_ratio`: coupling has a pole at {}",
                    config.medium.omega_ratio
                ))
            })?;
            let atom = AtomConfig { coupling, ..base };
            points
                .par_iter()
                .map(|p| {
                    let n_max = field.n_max.unwrap_or_else(|| default_cutoff(p.axis));
                    let state0 = initial_state(start, p.axis, field.beta_phase, Some(n_max))?;
                    let state = Evolver::new(&atom, n_max)?.evolve(&state0, config.sweep.time)?;
                    let (values, phase) = observe(&state, grid_size, p.want_phase)?;
                    Ok(Evaluated {
                        row: ObservableRow {
                            axis: p.axis,
                            values: Some(values),
                        },
                        phase,
                    })
                })
                .collect::<Result<_>>()?
        }
    };

    let mut rows = Vec::with_capacity(evaluated.len());
    let mut phase = Vec::new();
    for (p, e) in points.iter().zip(evaluated) {
        if let Some(grid) = e.phase {
            phase.push(PhaseSnapshot {
                index: p.index,
                axis: p.axis,
                grid,
            });
        }
        rows.push(e.row);
    }
    if rows.is_empty() {
        return Err(Error::domain("sweep produced no rows"));
    }

    let dispersion = if config.output.dispersion && config.sweep.axis == SweepAxis::ModeFrequency {
        dispersion_table(config)?
    } else {
        Vec::new()
    };
    Ok(ScenarioOutput {
        rows,
        phase,
        dispersion,
    })
}

/// Bound interface modes across the mode-frequency sweep.
pub fn dispersion_table(config: &ScenarioConfig) -> Result<Vec<DispersionPoint>> {
    let m = &config.medium;
    let (crystal1, crystal2) = m.crystals()?;
    let omega_t = angular_frequency(m.hbar_omega_t);
    let eps_model = m.slab_permittivity();
    config
        .sweep
        .points()
        .par_iter()
        .map(|&ratio| {
            let k_par = match eps_model.at(ratio) {
                Some(eps) if eps != 0.0 => {
                    let slab = SlabGeometry::new(m.slab_width, eps)?;
                    let guide = Waveguide::new(slab, crystal1, crystal2)
                        .with_form(m.dispersion_form.into());
                    let omega = ratio * omega_t;
                    let search = DispersionSearch {
                        k_min: 0.0,
                        k_max: config.output.dispersion_k_max * omega / SPEED_OF_LIGHT,
                        samples: config.output.dispersion_samples,
                    };
                    guide.solve_dispersion(omega, &search)?
                }
                _ => Vec::new(),
            };
            Ok(DispersionPoint {
                omega_ratio: ratio,
                k_par,
            })
        })
        .collect()
}

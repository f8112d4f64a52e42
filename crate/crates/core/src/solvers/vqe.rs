//! Variational ground-state search: a layered rotation/entangler ansatz
//! evaluated on a statevector, minimized with a derivative-free
//! Nelder-Mead simplex.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ising::IsingModel;
use crate::solvers::{SolveReport, SolverKind};
use crate::statevector::{basis_energies, build_ansatz_state, MAX_STATEVECTOR_QUBITS};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VqeConfig {
    pub layers: usize,
    pub max_iterations: usize,
    pub tolerance: f64,
    pub seed: u64,
    /// Refuses models larger than this; capped at 24 qubits regardless.
    pub max_qubits: usize,
}

impl Default for VqeConfig {
    fn default() -> Self {
        VqeConfig {
            layers: 2,
            max_iterations: 500,
            tolerance: 1e-6,
            seed: 0,
            max_qubits: 16,
        }
    }
}

impl VqeConfig {
    pub fn with_seed(seed: u64) -> Self {
        VqeConfig { seed, ..Default::default() }
    }

    fn validate(&self) -> Result<()> {
        if self.layers == 0 || self.max_iterations == 0 || !(self.tolerance > 0.0) {
            return Err(Error::InvalidInput(
                "layers, max_iterations and tolerance must be positive".into(),
            ));
        }
        if self.max_qubits > MAX_STATEVECTOR_QUBITS {
            return Err(Error::InvalidInput(format!(
                "max_qubits cannot exceed {MAX_STATEVECTOR_QUBITS}"
            )));
        }
        Ok(())
    }
}

/// Candidate basis states are those whose probability reaches half the
/// peak; among them the classically lowest-energy state is the answer.
const TOP_PROBABILITY_FRACTION: f64 = 0.5;

/// Minimizes the energy expectation of the ansatz over its rotation angles
/// and decodes the best high-probability basis state.
pub fn solve_vqe(model: &IsingModel, config: &VqeConfig) -> Result<SolveReport> {
    config.validate()?;
    let q = model.num_spins();
    if q > config.max_qubits {
        return Err(Error::TooManyVariables { got: q, cap: config.max_qubits });
    }
    if q == 0 {
        return Ok(SolveReport {
            best: Vec::new(),
            energy: model.offset(),
            trajectory: vec![(0, model.offset())],
            solver: SolverKind::Vqe,
            seed: config.seed,
            converged: true,
        });
    }

    let table = basis_energies(model);
    let layers = config.layers;
    let objective = |params: &[f64]| -> f64 {
        let state = build_ansatz_state(q, params, layers).expect("dimensions fixed");
        state
            .amplitudes()
            .iter()
            .zip(&table)
            .map(|(a, &e)| a.norm_sqr() * e)
            .sum()
    };

    let dim = layers * q;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let start: Vec<f64> = (0..dim)
        .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
        .collect();

    let nm = nelder_mead(&objective, &start, config.max_iterations, config.tolerance);

    let state = build_ansatz_state(q, &nm.best_params, layers)?;
    let peak = (0..table.len())
        .map(|z| state.probability(z))
        .fold(0.0, f64::max);
    let threshold = peak * TOP_PROBABILITY_FRACTION;
    let mut best_state = 0usize;
    let mut best_energy = f64::INFINITY;
    for z in 0..table.len() {
        if state.probability(z) >= threshold && table[z] < best_energy {
            best_energy = table[z];
            best_state = z;
        }
    }

    Ok(SolveReport {
        best: (0..q).map(|b| best_state >> b & 1 == 1).collect(),
        energy: best_energy,
        trajectory: nm.trajectory,
        solver: SolverKind::Vqe,
        seed: config.seed,
        converged: nm.converged,
    })
}

struct NelderMeadOutcome {
    best_params: Vec<f64>,
    trajectory: Vec<(u64, f64)>,
    converged: bool,
}

/// Textbook Nelder-Mead with reflection 1, expansion 2, contraction 0.5 and
/// shrink 0.5. Deterministic for a given starting point.
fn nelder_mead(
    f: &dyn Fn(&[f64]) -> f64,
    start: &[f64],
    max_iterations: usize,
    tolerance: f64,
) -> NelderMeadOutcome {
    let dim = start.len();
    let step = 0.5;
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    simplex.push((start.to_vec(), f(start)));
    for i in 0..dim {
        let mut v = start.to_vec();
        v[i] += step;
        let fv = f(&v);
        simplex.push((v, fv));
    }

    let mut trajectory = Vec::new();
    let mut converged = false;
    let mut best_so_far = f64::INFINITY;

    for iter in 0..max_iterations {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
        if simplex[0].1 < best_so_far {
            best_so_far = simplex[0].1;
        }
        trajectory.push((iter as u64, best_so_far));

        if (simplex[dim].1 - simplex[0].1).abs() < tolerance {
            converged = true;
            break;
        }

        let centroid: Vec<f64> = (0..dim)
            .map(|k| simplex[..dim].iter().map(|(v, _)| v[k]).sum::<f64>() / dim as f64)
            .collect();
        let worst = simplex[dim].clone();
        let blend = |t: f64| -> Vec<f64> {
            (0..dim)
                .map(|k| centroid[k] + t * (centroid[k] - worst.0[k]))
                .collect()
        };

        let reflected = blend(1.0);
        let fr = f(&reflected);
        if fr < simplex[0].1 {
            let expanded = blend(2.0);
            let fe = f(&expanded);
            simplex[dim] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr < simplex[dim - 1].1 {
            simplex[dim] = (reflected, fr);
        } else {
            let contracted = blend(-0.5);
            let fc = f(&contracted);
            if fc < simplex[dim].1 {
                simplex[dim] = (contracted, fc);
            } else {
                let best = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    for k in 0..dim {
                        entry.0[k] = best[k] + 0.5 * (entry.0[k] - best[k]);
                    }
                    entry.1 = f(&entry.0);
                }
            }
        }
    }

    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    if simplex[0].1 < best_so_far {
        best_so_far = simplex[0].1;
        trajectory.push((trajectory.len() as u64, best_so_far));
    }
    NelderMeadOutcome {
        best_params: simplex[0].0.clone(),
        trajectory,
        converged,
    }
}

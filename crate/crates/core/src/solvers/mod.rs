//! Solver backends: exhaustive search, simulated annealing, and a
//! statevector-based variational eigensolver. All are pure functions of
//! (model, config including seed).

mod anneal;
mod exact;
mod vqe;

pub use anneal::{solve_anneal, AnnealConfig};
pub use exact::solve_exact;
pub use vqe::{solve_vqe, VqeConfig};

/// Which backend produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverKind {
    Exact,
    Anneal,
    Vqe,
}

impl std::fmt::Display for SolverKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SolverKind::Exact => "exact",
            SolverKind::Anneal => "anneal",
            SolverKind::Vqe => "vqe",
        })
    }
}

/// Best assignment found by a solver, with its search trace.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub best: Vec<bool>,
    pub energy: f64,
    /// (iteration, best-so-far energy); non-increasing in the second field.
    pub trajectory: Vec<(u64, f64)>,
    pub solver: SolverKind,
    pub seed: u64,
    pub converged: bool,
}

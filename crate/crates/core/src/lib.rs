//! Warehouse order picking and batching compiled to QUBO/Ising models,
//! with exact, simulated-annealing and variational statevector solvers,
//! plus an exhaustive routing oracle for ground truth.
//!
//! The pipeline: load an [`instance::Instance`], compile it with
//! [`qubo::assemble_qubo`], minimize with one of the [`solvers`], and read
//! the result back with [`decode::decode`]. [`oracle::oracle_optimum`]
//! certifies small instances by direct route search.

pub mod decode;
pub mod error;
pub mod instance;
pub mod ising;
pub mod layout;
pub mod oracle;
mod parallel;
pub mod qubo;
pub mod solvers;
pub mod statevector;

pub use decode::{decode, route_distance, validate, Solution, SolutionDocument};
pub use error::{Error, Result};
pub use instance::{build_distance_matrix, Instance, Metric, Node};
pub use ising::{bits_from_spins, spins_from_bits, to_ising, IsingModel};
pub use layout::{qubit_count, EncodingLayout, EncodingMode};
pub use oracle::{oracle_optimum, OracleResult};
pub use qubo::{assemble_qubo, build_constraints, build_objective, PenaltyWeights, PickingModel, QuboModel};
pub use solvers::{solve_anneal, solve_exact, solve_vqe, AnnealConfig, SolveReport, SolverKind, VqeConfig};
pub use statevector::{build_ansatz_state, expectation, Statevector};

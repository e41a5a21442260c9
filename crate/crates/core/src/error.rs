use std::path::PathBuf;

use thiserror::Error;

/// Physics and numerics failures. Each variant is a precondition that the
/// caller can act on; none of them are retried internally.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-relativistic beam: total energy {total_energy} eV does not exceed rest mass {rest_mass} eV")]
    NonRelativistic { total_energy: f64, rest_mass: f64 },

    #[error("empty channel: {field} must be positive (got {value})")]
    EmptyChannel { field: &'static str, value: f64 },

    #[error(
        "above-barrier incidence: |theta_in| = {theta_in} rad >= acceptance angle {psi_c} rad"
    )]
    AboveBarrier { theta_in: f64, psi_c: f64 },

    #[error("empty well: depth {well_depth} eV does not bind the ground state (Omega/2 = {half_omega} eV)")]
    EmptyWell { well_depth: f64, half_omega: f64 },

    #[error("level {n} exceeds highest bound level {n_max}")]
    LevelOutOfRange { n: usize, n_max: usize },

    #[error("grid too narrow for level {n}: boundary tail {tail:e} of peak exceeds 1e-8")]
    GridTooNarrow { n: usize, tail: f64 },

    #[error("grid too coarse: {points} points, at least {required} required")]
    GridTooCoarse { points: usize, required: usize },

    #[error("potential undefined on grid: {reason}")]
    BadPotential { reason: String },

    #[error("no bound states below the boundary potential {cutoff} eV")]
    NoBoundStates { cutoff: f64 },

    #[error("tridiagonal eigen-iteration failed to converge for eigenvalue {index}")]
    ConvergenceFailure { index: usize },

    #[error("wavefunctions live on different grids")]
    GridMismatch,

    #[error("amplitudes ({amplitudes}) and levels ({levels}) are not index-aligned")]
    Misaligned { amplitudes: usize, levels: usize },

    #[error("spectrum axis '{axis}' is empty")]
    AxisEmpty { axis: &'static str },

    #[error("spectrum axis '{axis}' is not strictly increasing")]
    AxisUnordered { axis: &'static str },

    #[error("I/O failure on {path}: {reason}")]
    IoFailure { path: PathBuf, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

//! Two-qubit entanglement generation under noisy control.
//!
//! Simulates exchange-Hamiltonian gate sequences whose control angles
//! fluctuate stochastically (Gaussian or Laplacian), averages the resulting
//! states, and tests them for entanglement via the partial-transpose
//! criterion. Closed-form inseparability predicates are provided alongside
//! the simulated pipelines so each can cross-validate the other.
//!
//! Module map:
//! - [`smallmat`]: fixed-size (2x2, 4x4) complex linear algebra kernel
//! - [`hamiltonians`]: exchange Hamiltonians, pulses, refocusing algebra
//! - [`noisechan`]: angle distributions and noise-averaged channels
//! - [`entangle`]: partial transpose, negativity, von Neumann entropy
//! - [`predicates`]: closed-form inseparability criteria
//! - [`scenarios`]: end-to-end noisy pipelines and oracle cross-checks
//! - [`sweep`]: phase-diagram grids, CSV output, run manifests

pub mod entangle;
pub mod hamiltonians;
pub mod noisechan;
pub mod predicates;
pub mod scenarios;
pub mod smallmat;
pub mod sweep;

/// Centralized numerical tolerances. Every downstream comparison threads
/// through one of these so the whole artifact has a single knob per concern.
pub mod tol {
    /// Default operator-equality tolerance (Frobenius norm of the difference).
    pub const OP_EQ: f64 = 1e-10;
    /// Hermiticity drift accepted when constructing a density matrix.
    pub const HERMITICITY: f64 = 1e-12;
    /// Trace drift accepted when constructing a density matrix.
    pub const TRACE: f64 = 1e-12;
    /// Most negative eigenvalue accepted as "positive semidefinite".
    pub const PSD_FLOOR: f64 = -1e-10;
    /// Decision tolerance for the NPT entanglement test.
    pub const NPT_DECISION: f64 = 1e-9;
    /// Band around a closed-form predicate boundary reported as `Boundary`.
    pub const BOUNDARY_EPS: f64 = 1e-12;
    /// Eigenvalues below this contribute nothing to the von Neumann entropy.
    pub const ENTROPY_CUTOFF: f64 = 1e-14;
    /// Absolute tolerance for bisection on thresholds.
    pub const BISECT: f64 = 1e-6;
}

pub use smallmat::{ComplexMatrix, DensityMatrix, Error, HermitianSpectrum};

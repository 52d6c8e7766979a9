//! Entanglement and mixedness diagnostics.
//!
//! For 2x2 systems the Peres-Horodecki criterion is exact: a state is
//! entangled iff its partial transpose has a negative eigenvalue. Negativity
//! is the quantitative measure; mixedness is the von Neumann entropy.

use crate::smallmat::{hermitian_eigensystem, ComplexMatrix, DensityMatrix, Error, Result};
use crate::tol;
use crate::hamiltonians::Qubit;

/// Outcome of the NPT test with an explicit indeterminate band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntanglementVerdict {
    /// Smallest eigenvalue of the partial transpose.
    pub min_pt_eigenvalue: f64,
    /// Sum of |negative PT eigenvalues|; 1/2 for a maximally entangled state.
    pub negativity: f64,
    pub entangled: bool,
    pub tolerance: f64,
    /// Set when the minimal PT eigenvalue is within tolerance of zero.
    pub indeterminate: bool,
}

/// Transpose the designated qubit's indices of a two-qubit state.
pub fn partial_transpose(rho: &DensityMatrix, subsystem: Qubit) -> ComplexMatrix {
    let m = rho.mat();
    let mut out = ComplexMatrix::zeros(4);
    for a in 0..2 {
        for b in 0..2 {
            for cc in 0..2 {
                for d in 0..2 {
                    let (row, col) = (2 * a + b, 2 * cc + d);
                    let v = match subsystem {
                        // transpose qubit 1: swap a <-> c
                        Qubit::One => m.get(2 * cc + b, 2 * a + d),
                        // transpose qubit 2: swap b <-> d
                        Qubit::Two => m.get(2 * a + d, 2 * cc + b),
                    };
                    out.set(row, col, v);
                }
            }
        }
    }
    out
}

/// NPT verdict at the given decision tolerance (default [`tol::NPT_DECISION`]).
///
/// The PT spectra of the two subsystem choices coincide; both are computed
/// and cross-checked before deciding.
pub fn verdict(rho: &DensityMatrix, tolerance: f64) -> Result<EntanglementVerdict> {
    if tolerance <= 0.0 {
        return Err(Error::InvalidArgument("verdict tolerance must be > 0".into()));
    }
    let spec1 = hermitian_eigensystem(&partial_transpose(rho, Qubit::One))?;
    let spec2 = hermitian_eigensystem(&partial_transpose(rho, Qubit::Two))?;
    for (a, b) in spec1.eigenvalues.iter().zip(&spec2.eigenvalues) {
        debug_assert!((a - b).abs() < 1e-10, "PT spectra differ between subsystems");
    }
    let min_pt = spec1.eigenvalues[0];
    let negativity: f64 = spec1.eigenvalues.iter().filter(|e| **e < 0.0).map(|e| -e).sum();
    Ok(EntanglementVerdict {
        min_pt_eigenvalue: min_pt,
        negativity,
        entangled: min_pt < -tolerance,
        tolerance,
        indeterminate: min_pt.abs() <= tolerance,
    })
}

pub fn default_verdict(rho: &DensityMatrix) -> Result<EntanglementVerdict> {
    verdict(rho, tol::NPT_DECISION)
}

/// Von Neumann entropy `-Tr[rho log2 rho]` in bits, in [0, 2].
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    let spec = hermitian_eigensystem(rho.mat()).expect("density matrix is Hermitian");
    spec.eigenvalues
        .iter()
        .filter(|e| **e > tol::ENTROPY_CUTOFF)
        .map(|e| -e * e.log2())
        .sum()
}

/// Entropy as a fraction of the two-qubit maximum (2 bits).
pub fn mixedness_fraction(rho: &DensityMatrix) -> f64 {
    von_neumann_entropy(rho) / 2.0
}

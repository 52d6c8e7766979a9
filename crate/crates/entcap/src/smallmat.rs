//! Exact-size complex linear algebra for 2x2 and 4x4 operators.
//!
//! Everything the rest of the crate needs from linear algebra lives here:
//! products, tensor products, a cyclic-Jacobi Hermitian eigensolver, and
//! unitary evolution. Dimensions are fixed at 2 or 4; there is deliberately
//! no general-N code path.

use crate::tol;
use num_complex::Complex64;
use thiserror::Error;

pub type C64 = Complex64;

/// Shorthand for a complex scalar with both parts finite.
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("matrix is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),
    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),
    #[error("non-finite entry at ({0},{1})")]
    NonFinite(usize, usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Dense row-major complex matrix of dimension 2 or 4.
///
/// Basis ordering is `{|0>,|1>}` for dim 2 and `{|00>,|01>,|10>,|11>}` for
/// dim 4, with qubit 1 as the left tensor factor.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim == 2 || dim == 4, "only dimensions 2 and 4 are supported");
        ComplexMatrix { dim, data: vec![C64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, c(1.0, 0.0));
        }
        m
    }

    /// Build from row-major entries, rejecting NaN/Inf.
    pub fn from_rows(dim: usize, rows: &[C64]) -> Result<Self> {
        if rows.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "expected {} entries, got {}",
                dim * dim,
                rows.len()
            )));
        }
        let m = ComplexMatrix { dim, data: rows.to_vec() };
        for i in 0..dim {
            for j in 0..dim {
                let z = m.get(i, j);
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite(i, j));
                }
            }
        }
        Ok(m)
    }

    pub fn diag(dim: usize, entries: &[C64]) -> Result<Self> {
        if entries.len() != dim {
            return Err(Error::DimensionMismatch("diagonal length".into()));
        }
        let mut m = Self::zeros(dim);
        for (i, &e) in entries.iter().enumerate() {
            m.set(i, i, e);
        }
        Ok(m)
    }

    /// Outer product `|v><w|` of two dim-length vectors.
    pub fn outer(v: &[C64], w: &[C64]) -> Result<Self> {
        if v.len() != w.len() || !(v.len() == 2 || v.len() == 4) {
            return Err(Error::DimensionMismatch("outer product vectors".into()));
        }
        let dim = v.len();
        let mut m = Self::zeros(dim);
        for (i, vi) in v.iter().enumerate() {
            for (j, wj) in w.iter().enumerate() {
                m.set(i, j, vi * wj.conj());
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        ComplexMatrix { dim: self.dim, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        ComplexMatrix { dim: self.dim, data }
    }

    pub fn scale(&self, s: C64) -> Self {
        ComplexMatrix { dim: self.dim, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix product dimension mismatch");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.get(i, k);
                if aik.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let v = out.get(i, j) + aik * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, self.get(j, i).conj());
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius distance to another matrix.
    pub fn distance(&self, other: &Self) -> f64 {
        self.sub(other).norm()
    }

    pub fn approx_eq(&self, other: &Self, tolerance: f64) -> bool {
        self.dim == other.dim && self.distance(other) <= tolerance
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.distance(&self.adjoint())
    }

    pub fn is_hermitian(&self, tolerance: f64) -> bool {
        self.hermiticity_defect() <= tolerance
    }

    pub fn unitarity_defect(&self) -> f64 {
        self.mul(&self.adjoint()).distance(&Self::identity(self.dim))
    }

    pub fn is_unitary(&self, tolerance: f64) -> bool {
        self.unitarity_defect() <= tolerance
    }
}

/// Pauli matrices and friends.
pub fn sigma_x() -> ComplexMatrix {
    ComplexMatrix::from_rows(2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)]).unwrap()
}

pub fn sigma_y() -> ComplexMatrix {
    ComplexMatrix::from_rows(2, &[c(0., 0.), c(0., -1.), c(0., 1.), c(0., 0.)]).unwrap()
}

pub fn sigma_z() -> ComplexMatrix {
    ComplexMatrix::from_rows(2, &[c(1., 0.), c(0., 0.), c(0., 0.), c(-1., 0.)]).unwrap()
}

/// Angular momentum operator S_alpha = sigma_alpha / 2.
pub fn spin_x() -> ComplexMatrix {
    sigma_x().scale(c(0.5, 0.))
}

pub fn spin_y() -> ComplexMatrix {
    sigma_y().scale(c(0.5, 0.))
}

pub fn spin_z() -> ComplexMatrix {
    sigma_z().scale(c(0.5, 0.))
}

/// Tensor product of two 2x2 matrices, qubit 1 as the left factor.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.dim() != 2 || b.dim() != 2 {
        return Err(Error::DimensionMismatch("kron expects two 2x2 matrices".into()));
    }
    let mut out = ComplexMatrix::zeros(4);
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out.set(2 * i + k, 2 * j + l, a.get(i, j) * b.get(k, l));
                }
            }
        }
    }
    Ok(out)
}

/// Eigendecomposition of a Hermitian matrix.
///
/// Eigenvalues ascending; eigenvectors orthonormal columns, phase-fixed so
/// the first component of significant magnitude is real and positive.
#[derive(Debug, Clone)]
pub struct HermitianSpectrum {
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[k]` is the eigenvector paired with `eigenvalues[k]`.
    pub eigenvectors: Vec<Vec<C64>>,
}

impl HermitianSpectrum {
    /// Reassemble `V diag(e) V^dagger`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let mut out = ComplexMatrix::zeros(n);
        for k in 0..n {
            let vk = &self.eigenvectors[k];
            for i in 0..n {
                for j in 0..n {
                    let v = out.get(i, j) + vk[i] * vk[j].conj() * self.eigenvalues[k];
                    out.set(i, j, v);
                }
            }
        }
        out
    }
}

/// Cyclic Jacobi eigensolver for Hermitian 2x2 / 4x4 matrices.
///
/// Each rotation diagonalizes one 2x2 principal block exactly; sweeps repeat
/// until the off-diagonal mass is at machine level. Unconditionally stable at
/// these sizes, and orthonormality of the accumulated rotations is automatic.
pub fn hermitian_eigensystem(h: &ComplexMatrix) -> Result<HermitianSpectrum> {
    let defect = h.hermiticity_defect();
    if defect > tol::OP_EQ {
        return Err(Error::NotHermitian(defect));
    }
    let n = h.dim();
    // Work on the Hermitian part to kill tolerated asymmetry exactly.
    let mut a = h.add(&h.adjoint()).scale(c(0.5, 0.));
    let mut v = ComplexMatrix::identity(n);
    let scale = a.norm().max(1.0);

    for _sweep in 0..60 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a.get(p, q).norm_sqr();
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                let b = apq.norm();
                if b <= 1e-18 * scale {
                    continue;
                }
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                // Phase that makes the (p,q) entry real, then a real Jacobi
                // rotation that annihilates it.
                let phase = apq / b;
                let theta = (aqq - app) / (2.0 * b);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let cth = 1.0 / (t * t + 1.0).sqrt();
                let sth = t * cth;
                let mut j = ComplexMatrix::identity(n);
                j.set(p, p, c(cth, 0.));
                j.set(p, q, phase * sth);
                j.set(q, p, c(-sth, 0.) * phase.conj());
                j.set(q, q, c(cth, 0.));
                a = j.adjoint().mul(&a).mul(&j);
                v = v.mul(&j);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(i, i).re.total_cmp(&a.get(j, j).re));

    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = Vec::with_capacity(n);
    for &k in &order {
        eigenvalues.push(a.get(k, k).re);
        let mut col: Vec<C64> = (0..n).map(|i| v.get(i, k)).collect();
        // Phase convention: first component of significant magnitude made
        // real positive, so degenerate subspaces still get a stable output.
        if let Some(lead) = col.iter().find(|z| z.norm() > 1e-8) {
            let ph = lead.conj() / lead.norm();
            for z in &mut col {
                *z *= ph;
            }
        }
        eigenvectors.push(col);
    }
    Ok(HermitianSpectrum { eigenvalues, eigenvectors })
}

/// `exp(-i * angle_scale * h)` for Hermitian `h`, via eigendecomposition.
pub fn unitary_exp(h: &ComplexMatrix, angle_scale: f64) -> Result<ComplexMatrix> {
    let spec = hermitian_eigensystem(h)?;
    let n = h.dim();
    let mut out = ComplexMatrix::zeros(n);
    for k in 0..n {
        let phase = C64::from_polar(1.0, -angle_scale * spec.eigenvalues[k]);
        let vk = &spec.eigenvectors[k];
        for i in 0..n {
            for j in 0..n {
                let v = out.get(i, j) + phase * vk[i] * vk[j].conj();
                out.set(i, j, v);
            }
        }
    }
    Ok(out)
}

/// Validated two-qubit density matrix: Hermitian, unit trace, PSD.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        if mat.dim() != 4 {
            return Err(Error::DimensionMismatch("density matrices are 4x4".into()));
        }
        let herm = mat.hermiticity_defect();
        if herm > tol::HERMITICITY {
            return Err(Error::InvalidDensity(format!("Hermiticity defect {herm:.3e}")));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > tol::TRACE || tr.im.abs() > tol::TRACE {
            return Err(Error::InvalidDensity(format!("trace {tr} != 1")));
        }
        // Symmetrize exactly before the PSD check so the eigensolver sees a
        // bona fide Hermitian input.
        let sym = mat.add(&mat.adjoint()).scale(c(0.5, 0.));
        let spec = hermitian_eigensystem(&sym)?;
        if spec.eigenvalues[0] < tol::PSD_FLOOR {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {:.3e}",
                spec.eigenvalues[0]
            )));
        }
        Ok(DensityMatrix { mat: sym })
    }

    /// Pure state `|v><v|` from a normalized 4-vector.
    pub fn pure(v: &[C64]) -> Result<Self> {
        let norm: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidDensity(format!("state norm {norm} != 1")));
        }
        Self::new(ComplexMatrix::outer(v, v)?)
    }

    /// Computational basis state `|index>` with `index` in 0..4.
    pub fn basis(index: usize) -> Self {
        let mut v = vec![c(0., 0.); 4];
        v[index] = c(1., 0.);
        Self::pure(&v).unwrap()
    }

    pub fn mat(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn purity(&self) -> f64 {
        self.mat.mul(&self.mat).trace().re
    }

    pub fn trace_distance(&self, other: &Self) -> f64 {
        let diff = self.mat.sub(&other.mat);
        let spec = hermitian_eigensystem(&diff).expect("difference of densities is Hermitian");
        0.5 * spec.eigenvalues.iter().map(|e| e.abs()).sum::<f64>()
    }
}

/// `u rho u^dagger` for unitary `u`.
pub fn evolve(rho: &DensityMatrix, u: &ComplexMatrix) -> Result<DensityMatrix> {
    let defect = u.unitarity_defect();
    if defect > tol::OP_EQ {
        return Err(Error::NotUnitary(defect));
    }
    DensityMatrix::new(u.mul(rho.mat()).mul(&u.adjoint()))
}

//! Angle-noise distributions and noise-averaged state transformations.
//!
//! A noisy gate is a unitary family `phi -> U(phi)` with `phi` drawn from a
//! Gaussian or Laplace distribution. Because every gate in this crate is
//! `exp(-i phi G)` for a fixed generator `G` (possibly composed with fixed
//! unitaries), the evolved state is a trigonometric polynomial in `phi`:
//! `rho(phi) = sum_t e^{i t phi} C_t`. Averaging then reduces to multiplying
//! each harmonic by the distribution's characteristic weight `E[e^{i t phi}]`.
//! Gauss-Hermite / two-sided Gauss-Laguerre quadrature and Monte Carlo are
//! provided as independent evaluation routes for cross-validation.

use crate::smallmat::{
    c, hermitian_eigensystem, C64, ComplexMatrix, DensityMatrix, Error, Result,
};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

/// Multipliers closer than this are merged into one harmonic.
const MULTIPLIER_EPS: f64 = 1e-9;

/// Default Gauss-Hermite node count for Gaussian averages.
pub const DEFAULT_GH_NODES: usize = 61;
/// Default node count per half-line for Laplace averages.
pub const DEFAULT_GL_NODES: usize = 63;

/// Distribution of a noisy control angle.
///
/// The Laplace `scale` is the parameter of the printed density
/// `(1/4w) exp(-|phi - mean| / 2w)`; its actual standard deviation is
/// `2 sqrt(2) w`. It is deliberately not called an s.d. anywhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AngleDistribution {
    Gaussian { mean: f64, sd: f64 },
    Laplace { mean: f64, scale: f64 },
}

impl AngleDistribution {
    pub fn gaussian(mean: f64, sd: f64) -> Result<Self> {
        if sd < 0.0 || !sd.is_finite() || !mean.is_finite() {
            return Err(Error::InvalidArgument("Gaussian sd must be finite and >= 0".into()));
        }
        Ok(AngleDistribution::Gaussian { mean, sd })
    }

    pub fn laplace(mean: f64, scale: f64) -> Result<Self> {
        if scale < 0.0 || !scale.is_finite() || !mean.is_finite() {
            return Err(Error::InvalidArgument("Laplace scale must be finite and >= 0".into()));
        }
        Ok(AngleDistribution::Laplace { mean, scale })
    }

    pub fn mean(&self) -> f64 {
        match *self {
            AngleDistribution::Gaussian { mean, .. } => mean,
            AngleDistribution::Laplace { mean, .. } => mean,
        }
    }

    /// Width parameter: Gaussian s.d. or Laplace scale. Zero means the angle
    /// is deterministic.
    pub fn width(&self) -> f64 {
        match *self {
            AngleDistribution::Gaussian { sd, .. } => sd,
            AngleDistribution::Laplace { scale, .. } => scale,
        }
    }
}

/// `E[e^{i t phi}]` under the distribution.
///
/// Gaussian: `e^{i t mean} e^{-t^2 sd^2 / 2}`;
/// Laplace:  `e^{i t mean} / (1 + 4 w^2 t^2)`.
pub fn characteristic_weight(dist: &AngleDistribution, t: f64) -> C64 {
    let phase = C64::from_polar(1.0, t * dist.mean());
    match *dist {
        AngleDistribution::Gaussian { sd, .. } => phase * (-0.5 * t * t * sd * sd).exp(),
        AngleDistribution::Laplace { scale, .. } => {
            phase * (1.0 / (1.0 + 4.0 * scale * scale * t * t))
        }
    }
}

/// Draw one angle from the exact printed density.
pub fn sample_angle<R: Rng + ?Sized>(dist: &AngleDistribution, rng: &mut R) -> f64 {
    match *dist {
        AngleDistribution::Gaussian { mean, sd } => {
            if sd == 0.0 {
                mean
            } else {
                let z: f64 = StandardNormal.sample(rng);
                mean + sd * z
            }
        }
        AngleDistribution::Laplace { mean, scale } => {
            if scale == 0.0 {
                mean
            } else {
                // Inverse CDF of the density (1/4w) exp(-|x|/2w).
                let u: f64 = rng.gen_range(-0.5..0.5);
                mean - 2.0 * scale * u.signum() * (1.0 - 2.0 * u.abs()).ln()
            }
        }
    }
}

/// How a noise average is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AveragingMethod {
    ClosedForm,
    Quadrature { nodes: usize },
    MonteCarlo { samples: usize, seed: u64 },
}

impl AveragingMethod {
    pub fn validate(&self) -> Result<()> {
        match *self {
            AveragingMethod::Quadrature { nodes } => {
                if nodes < 3 || nodes % 2 == 0 {
                    return Err(Error::InvalidArgument(format!(
                        "quadrature nodes must be odd and >= 3, got {nodes}"
                    )));
                }
            }
            AveragingMethod::MonteCarlo { samples, .. } => {
                if samples == 0 {
                    return Err(Error::InvalidArgument("Monte Carlo needs samples >= 1".into()));
                }
            }
            AveragingMethod::ClosedForm => {}
        }
        Ok(())
    }

    /// Seed for a derived substream, independent of evaluation order.
    pub fn substream(&self, task_index: u64) -> AveragingMethod {
        match *self {
            AveragingMethod::MonteCarlo { samples, seed } => AveragingMethod::MonteCarlo {
                samples,
                seed: splitmix64(seed ^ splitmix64(task_index)),
            },
            other => other,
        }
    }
}

impl std::fmt::Display for AveragingMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            AveragingMethod::ClosedForm => write!(f, "closed-form"),
            AveragingMethod::Quadrature { nodes } => write!(f, "quadrature:{nodes}"),
            AveragingMethod::MonteCarlo { samples, seed } => {
                write!(f, "monte-carlo:{samples}:{seed}")
            }
        }
    }
}

/// Accepts `closed-form`, `quadrature[:nodes]` (default 61), and
/// `monte-carlo[:samples[:seed]]` (defaults 100000 and 0).
impl std::str::FromStr for AveragingMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::InvalidArgument(format!("unknown averaging method '{s}'"));
        let method = match parts[0] {
            "closed-form" if parts.len() == 1 => AveragingMethod::ClosedForm,
            "quadrature" if parts.len() <= 2 => AveragingMethod::Quadrature {
                nodes: match parts.get(1) {
                    Some(v) => v.parse().map_err(|_| bad())?,
                    None => 61,
                },
            },
            "monte-carlo" if parts.len() <= 3 => AveragingMethod::MonteCarlo {
                samples: match parts.get(1) {
                    Some(v) => v.parse().map_err(|_| bad())?,
                    None => 100_000,
                },
                seed: match parts.get(2) {
                    Some(v) => v.parse().map_err(|_| bad())?,
                    None => 0,
                },
            },
            _ => return Err(bad()),
        };
        method.validate()?;
        Ok(method)
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Harmonic decomposition of a one-parameter unitary family:
/// `U(phi) = sum_s e^{i s phi} U_s`.
#[derive(Debug, Clone)]
pub struct UnitaryHarmonics {
    terms: Vec<(f64, ComplexMatrix)>,
    dim: usize,
}

impl UnitaryHarmonics {
    /// Decompose `U(phi) = exp(-i phi G)` via the spectral projectors of `G`:
    /// one term per distinct eigenvalue `g`, at multiplier `-g`.
    pub fn from_generator(generator: &ComplexMatrix) -> Result<Self> {
        let spec = hermitian_eigensystem(generator)?;
        let n = generator.dim();
        let mut terms: Vec<(f64, ComplexMatrix)> = Vec::new();
        for (k, &e) in spec.eigenvalues.iter().enumerate() {
            let vk = &spec.eigenvectors[k];
            let proj = ComplexMatrix::outer(vk, vk)?;
            push_term(&mut terms, -e, &proj);
        }
        Ok(UnitaryHarmonics { terms, dim: n })
    }

    pub fn terms(&self) -> &[(f64, ComplexMatrix)] {
        &self.terms
    }

    pub fn evaluate(&self, phi: f64) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim);
        for (s, m) in &self.terms {
            out = out.add(&m.scale(C64::from_polar(1.0, s * phi)));
        }
        out
    }

    /// `M * U(phi)` for a fixed matrix `M`.
    pub fn left_mul(&self, m: &ComplexMatrix) -> Self {
        let terms = self.terms.iter().map(|(s, u)| (*s, m.mul(u))).collect();
        UnitaryHarmonics { terms, dim: self.dim }
    }

    /// `U(phi) * M` for a fixed matrix `M`.
    pub fn right_mul(&self, m: &ComplexMatrix) -> Self {
        let terms = self.terms.iter().map(|(s, u)| (*s, u.mul(m))).collect();
        UnitaryHarmonics { terms, dim: self.dim }
    }

    /// Product of two families of the same angle: multiplier convolution.
    pub fn compose(&self, other: &Self) -> Self {
        let mut terms: Vec<(f64, ComplexMatrix)> = Vec::new();
        for (s1, u1) in &self.terms {
            for (s2, u2) in &other.terms {
                push_term(&mut terms, s1 + s2, &u1.mul(u2));
            }
        }
        UnitaryHarmonics { terms, dim: self.dim }
    }

    /// State family `phi -> U(phi) rho U(phi)^dagger` as harmonics in `phi`.
    pub fn conjugate_state(&self, rho: &DensityMatrix) -> HarmonicFamily {
        let mut terms: Vec<(f64, ComplexMatrix)> = Vec::new();
        for (s1, u1) in &self.terms {
            let left = u1.mul(rho.mat());
            for (s2, u2) in &self.terms {
                push_term(&mut terms, s1 - s2, &left.mul(&u2.adjoint()));
            }
        }
        HarmonicFamily { terms }
    }
}

fn push_term(terms: &mut Vec<(f64, ComplexMatrix)>, s: f64, m: &ComplexMatrix) {
    if m.norm() < 1e-16 {
        return;
    }
    for (t, existing) in terms.iter_mut() {
        if (*t - s).abs() < MULTIPLIER_EPS {
            *existing = existing.add(m);
            return;
        }
    }
    terms.push((s, m.clone()));
}

/// A state family `phi -> rho(phi) = sum_t e^{i t phi} C_t`.
///
/// Hermiticity of every evaluation requires `C_{-t} = C_t^dagger`, which the
/// constructor checks.
#[derive(Debug, Clone)]
pub struct HarmonicFamily {
    terms: Vec<(f64, ComplexMatrix)>,
}

impl HarmonicFamily {
    pub fn new(terms: Vec<(f64, ComplexMatrix)>) -> Result<Self> {
        let fam = HarmonicFamily { terms };
        fam.check_pairing()?;
        Ok(fam)
    }

    fn check_pairing(&self) -> Result<()> {
        for (t, ct) in &self.terms {
            let partner = self
                .terms
                .iter()
                .find(|(u, _)| (u + t).abs() < MULTIPLIER_EPS)
                .map(|(_, m)| m);
            let defect = match partner {
                Some(m) => m.distance(&ct.adjoint()),
                None => ct.norm(),
            };
            if defect > 1e-9 {
                return Err(Error::InvalidArgument(format!(
                    "harmonic family violates C_-t = C_t^dagger at t = {t} (defect {defect:.3e})"
                )));
            }
        }
        Ok(())
    }

    pub fn terms(&self) -> &[(f64, ComplexMatrix)] {
        &self.terms
    }

    pub fn evaluate(&self, phi: f64) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(4);
        for (t, m) in &self.terms {
            out = out.add(&m.scale(C64::from_polar(1.0, t * phi)));
        }
        out
    }
}

/// Noise-average a state family under a distribution with the chosen method.
pub fn average_state(
    family: &HarmonicFamily,
    dist: &AngleDistribution,
    method: &AveragingMethod,
) -> Result<DensityMatrix> {
    method.validate()?;
    if dist.width() == 0.0 {
        return finalize(family.evaluate(dist.mean()));
    }
    let avg = match *method {
        AveragingMethod::ClosedForm => {
            let mut out = ComplexMatrix::zeros(4);
            for (t, m) in family.terms() {
                out = out.add(&m.scale(characteristic_weight(dist, *t)));
            }
            out
        }
        AveragingMethod::Quadrature { nodes } => match *dist {
            AngleDistribution::Gaussian { mean, sd } => {
                let rule = quad::gauss_hermite(nodes);
                let norm = std::f64::consts::PI.sqrt();
                let mut out = ComplexMatrix::zeros(4);
                for (x, w) in rule {
                    let phi = mean + std::f64::consts::SQRT_2 * sd * x;
                    out = out.add(&family.evaluate(phi).scale(c(w / norm, 0.)));
                }
                out
            }
            AngleDistribution::Laplace { mean, scale } => {
                // Split at the mean: each half-line maps to int_0^inf e^{-u}
                // with phi = mean +/- 2 w u, each half carrying weight 1/2.
                let rule = quad::gauss_laguerre(nodes);
                let mut out = ComplexMatrix::zeros(4);
                for (u, w) in rule {
                    let plus = family.evaluate(mean + 2.0 * scale * u);
                    let minus = family.evaluate(mean - 2.0 * scale * u);
                    out = out.add(&plus.add(&minus).scale(c(0.5 * w, 0.)));
                }
                out
            }
        },
        AveragingMethod::MonteCarlo { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut out = ComplexMatrix::zeros(4);
            for _ in 0..samples {
                let phi = sample_angle(dist, &mut rng);
                out = out.add(&family.evaluate(phi));
            }
            out.scale(c(1.0 / samples as f64, 0.))
        }
    };
    finalize(avg)
}

/// Hermitize and renormalize within tolerated drift, then validate.
fn finalize(mat: ComplexMatrix) -> Result<DensityMatrix> {
    let tr = mat.trace();
    if (tr.re - 1.0).abs() > 1e-6 || tr.im.abs() > 1e-9 {
        return Err(Error::InvalidDensity(format!("averaged trace drifted to {tr}")));
    }
    let herm = mat.hermiticity_defect();
    if herm > 1e-9 {
        return Err(Error::InvalidDensity(format!(
            "averaged state hermiticity defect {herm:.3e}"
        )));
    }
    let sym = mat.add(&mat.adjoint()).scale(c(0.5 / tr.re, 0.));
    DensityMatrix::new(sym)
}

/// Quadrature node/weight rules, computed by Golub-Welsch on the symmetric
/// tridiagonal Jacobi matrix of the orthogonal polynomial family.
pub mod quad {
    /// Eigenvalues and first eigenvector components of a symmetric
    /// tridiagonal matrix (implicit-shift QL with eigenvector row tracking).
    fn tridiagonal_eigen(diag: &[f64], offdiag: &[f64]) -> Vec<(f64, f64)> {
        let n = diag.len();
        let mut d = diag.to_vec();
        let mut e = vec![0.0; n];
        e[..n - 1].copy_from_slice(offdiag);
        // Row 0 of the accumulated rotation matrix; squared entries become
        // the quadrature weights.
        let mut z0 = vec![0.0; n];
        z0[0] = 1.0;

        for l in 0..n {
            let mut iter = 0;
            loop {
                let mut m = l;
                while m < n - 1 {
                    let dd = d[m].abs() + d[m + 1].abs();
                    if e[m].abs() <= f64::EPSILON * dd {
                        break;
                    }
                    m += 1;
                }
                if m == l {
                    break;
                }
                iter += 1;
                assert!(iter < 60, "tridiagonal QL failed to converge");
                let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                let mut r = g.hypot(1.0);
                g = d[m] - d[l] + e[l] / (g + r.copysign(g));
                let (mut s, mut cth) = (1.0, 1.0);
                let mut p = 0.0;
                let mut underflow = false;
                for i in (l..m).rev() {
                    let mut f = s * e[i];
                    let b = cth * e[i];
                    r = f.hypot(g);
                    e[i + 1] = r;
                    if r == 0.0 {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    cth = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * cth * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = cth * r - b;
                    f = z0[i + 1];
                    z0[i + 1] = s * z0[i] + cth * f;
                    z0[i] = cth * z0[i] - s * f;
                }
                if underflow {
                    continue;
                }
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        }
        let mut pairs: Vec<(f64, f64)> = d.into_iter().zip(z0).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        pairs
    }

    /// Gauss-Hermite rule: nodes/weights for `int e^{-x^2} f(x) dx`.
    pub fn gauss_hermite(n: usize) -> Vec<(f64, f64)> {
        let diag = vec![0.0; n];
        let offdiag: Vec<f64> = (1..n).map(|k| (k as f64 / 2.0).sqrt()).collect();
        let total = std::f64::consts::PI.sqrt();
        tridiagonal_eigen(&diag, &offdiag)
            .into_iter()
            .map(|(x, z)| (x, total * z * z))
            .collect()
    }

    /// Gauss-Laguerre rule: nodes/weights for `int_0^inf e^{-x} f(x) dx`.
    ///
    /// For oscillatory `f(x) = e^{iax}` the rule is spectrally accurate only
    /// while `|a|` stays below roughly 3; past that, raise `n`.
    pub fn gauss_laguerre(n: usize) -> Vec<(f64, f64)> {
        let diag: Vec<f64> = (0..n).map(|k| 2.0 * k as f64 + 1.0).collect();
        let offdiag: Vec<f64> = (1..n).map(|k| k as f64).collect();
        tridiagonal_eigen(&diag, &offdiag)
            .into_iter()
            .map(|(x, z)| (x, z * z))
            .collect()
    }

}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonians::{pulse_generator, Axis, Qubit};
    use crate::smallmat::{kron, sigma_z};
    use rand::rngs::StdRng;
    use rand::SeedableRng;
    use std::f64::consts::PI;

    #[test]
    fn characteristic_weight_examples() {
        let g = AngleDistribution::gaussian(PI, 0.7).unwrap();
        assert!((characteristic_weight(&g, 0.0) - c(1., 0.)).norm() < 1e-15);
        let expect = -(-0.5f64 * 0.49).exp();
        assert!((characteristic_weight(&g, 1.0) - c(expect, 0.)).norm() < 1e-14);

        let l = AngleDistribution::laplace(PI, 0.8).unwrap();
        // t = 1/2: e^{i pi/2} / (1 + w^2) = i / (1 + w^2)
        let expect = c(0., 1.0 / (1.0 + 0.64));
        assert!((characteristic_weight(&l, 0.5) - expect).norm() < 1e-14);
    }

    #[test]
    fn characteristic_weight_matches_quadrature() {
        // Independent check of the Laplace weight against direct quadrature
        // of the printed density.
        let l = AngleDistribution::laplace(PI, 0.8).unwrap();
        let rule = quad::gauss_laguerre(63);
        // the Laguerre rule is spectrally accurate while the integrand's
        // oscillation rate 2*scale*t stays below ~3; degrade gracefully after
        for (t, tol) in [(0.25, 1e-12), (0.5, 1e-12), (1.0, 1e-10), (2.0, 2e-8)] {
            let mut acc = c(0., 0.);
            for (u, w) in &rule {
                let plus = C64::from_polar(1.0, t * (PI + 1.6 * u));
                let minus = C64::from_polar(1.0, t * (PI - 1.6 * u));
                acc += (plus + minus) * 0.5 * w;
            }
            assert!((acc - characteristic_weight(&l, t)).norm() < tol, "t={t}");
        }
    }

    #[test]
    fn sample_angle_moments() {
        let mut rng = StdRng::seed_from_u64(99);
        let n = 1_000_000;

        let g = AngleDistribution::gaussian(0.0, 1.0).unwrap();
        let mean: f64 = (0..n).map(|_| sample_angle(&g, &mut rng)).sum::<f64>() / n as f64;
        assert!(mean.abs() < 4.0 / (n as f64).sqrt());

        let w = 0.7;
        let l = AngleDistribution::laplace(0.0, w).unwrap();
        let draws: Vec<f64> = (0..n).map(|_| sample_angle(&l, &mut rng)).collect();
        let var: f64 = draws.iter().map(|x| x * x).sum::<f64>() / n as f64;
        // Var = 8 w^2; 4th moment of Laplace gives se of the variance.
        let se = (8.0f64).sqrt() * 8.0 * w * w / (n as f64).sqrt() * 2.0;
        assert!((var - 8.0 * w * w).abs() < 3.0 * se, "var={var}");
    }

    #[test]
    fn degenerate_width_returns_mean_point() {
        let gen = pulse_generator(Axis::Y, Qubit::One);
        let h = UnitaryHarmonics::from_generator(&gen).unwrap();
        let rho = DensityMatrix::basis(0);
        let fam = h.conjugate_state(&rho);
        let d = AngleDistribution::gaussian(1.1, 0.0).unwrap();
        for m in [
            AveragingMethod::ClosedForm,
            AveragingMethod::Quadrature { nodes: 21 },
            AveragingMethod::MonteCarlo { samples: 10, seed: 1 },
        ] {
            let avg = average_state(&fam, &d, &m).unwrap();
            assert!(avg.mat().approx_eq(&fam.evaluate(1.1), 1e-12));
        }
    }

    #[test]
    fn unitary_harmonics_reproduce_exponential() {
        let gen = kron(&sigma_z(), &sigma_z()).unwrap().scale(c(0.25, 0.));
        let h = UnitaryHarmonics::from_generator(&gen).unwrap();
        for phi in [0.0, 0.7, PI, 4.0] {
            let direct = crate::smallmat::unitary_exp(&gen, phi).unwrap();
            assert!(h.evaluate(phi).approx_eq(&direct, 1e-12));
        }
    }

    #[test]
    fn gaussian_preparation_mixture_weights() {
        // x-rotation on qubit 2 with mean pi, sd lambda applied to |00>
        // gives a diagonal mixture of |00>, |01> with weights (1 -/+ a)/2.
        let lambda = 1.0;
        let gen = pulse_generator(Axis::X, Qubit::Two);
        let fam = UnitaryHarmonics::from_generator(&gen)
            .unwrap()
            .conjugate_state(&DensityMatrix::basis(0));
        let d = AngleDistribution::gaussian(PI, lambda).unwrap();
        let avg = average_state(&fam, &d, &AveragingMethod::ClosedForm).unwrap();
        let a = (-0.5f64 * lambda * lambda).exp();
        assert!((avg.mat().get(0, 0).re - (1.0 - a) / 2.0).abs() < 1e-12);
        assert!((avg.mat().get(1, 1).re - (1.0 + a) / 2.0).abs() < 1e-12);
        assert!(avg.mat().get(2, 2).norm() < 1e-12);
        assert!(avg.mat().get(3, 3).norm() < 1e-12);
    }

    #[test]
    fn methods_agree_on_random_families() {
        let mut rng = StdRng::seed_from_u64(17);
        for trial in 0..30 {
            let axis = [Axis::X, Axis::Y, Axis::Z][trial % 3];
            let gen = pulse_generator(axis, Qubit::One);
            let fam = UnitaryHarmonics::from_generator(&gen)
                .unwrap()
                .conjugate_state(&DensityMatrix::basis(trial % 4));
            let sd = 0.7;
            use rand::Rng;
            let mean = rng.gen_range(-3.0..3.0);
            let d = AngleDistribution::gaussian(mean, sd).unwrap();
            let closed = average_state(&fam, &d, &AveragingMethod::ClosedForm).unwrap();
            let quad =
                average_state(&fam, &d, &AveragingMethod::Quadrature { nodes: 61 }).unwrap();
            assert!(closed.trace_distance(&quad) < 1e-10);
        }
    }

    #[test]
    fn monte_carlo_deterministic_given_seed() {
        let gen = pulse_generator(Axis::Y, Qubit::Two);
        let fam = UnitaryHarmonics::from_generator(&gen)
            .unwrap()
            .conjugate_state(&DensityMatrix::basis(0));
        let d = AngleDistribution::gaussian(PI / 2.0, 0.5).unwrap();
        let m = AveragingMethod::MonteCarlo { samples: 2000, seed: 7 };
        let a = average_state(&fam, &d, &m).unwrap();
        let b = average_state(&fam, &d, &m).unwrap();
        assert_eq!(a.mat(), b.mat());
    }

    #[test]
    fn purity_contraction() {
        let gen = pulse_generator(Axis::Y, Qubit::One);
        let fam = UnitaryHarmonics::from_generator(&gen)
            .unwrap()
            .conjugate_state(&DensityMatrix::basis(0));
        let d = AngleDistribution::gaussian(PI / 2.0, 0.9).unwrap();
        let avg = average_state(&fam, &d, &AveragingMethod::ClosedForm).unwrap();
        // family members are pure (purity 1); the average cannot exceed that
        assert!(avg.purity() <= 1.0 + 1e-12);
        assert!((avg.mat().trace().re - 1.0).abs() < 1e-12);
        assert!(avg.mat().hermiticity_defect() < 1e-12);
    }

    #[test]
    fn rejects_invalid_methods() {
        assert!(AveragingMethod::Quadrature { nodes: 4 }.validate().is_err());
        assert!(AveragingMethod::Quadrature { nodes: 1 }.validate().is_err());
        assert!(AveragingMethod::MonteCarlo { samples: 0, seed: 0 }.validate().is_err());
    }
}

//! Closed-form inseparability criteria for the noisy exchange pipelines.
//!
//! Each predicate returns a three-valued classification plus a continuous
//! margin (positive inside the entangled region), so sweeps can plot
//! distance-to-boundary rather than bare region membership. The boundary
//! itself classifies as `Separable` (the criteria are strict inequalities),
//! with a narrow `Boundary` band for numerically ambiguous points.

use crate::smallmat::{Error, Result};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Entangled,
    Separable,
    Boundary,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Classification::Entangled => "entangled",
            Classification::Separable => "separable",
            Classification::Boundary => "boundary",
        };
        write!(f, "{s}")
    }
}

/// Classification together with the signed margin that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredicateVerdict {
    pub class: Classification,
    /// Positive in the entangled region, negative in the separable region.
    pub margin: f64,
}

impl PredicateVerdict {
    fn from_margin(margin: f64) -> Self {
        let class = if margin > tol::BOUNDARY_EPS {
            Classification::Entangled
        } else if margin < -tol::BOUNDARY_EPS {
            Classification::Separable
        } else {
            Classification::Boundary
        };
        PredicateVerdict { class, margin }
    }
}

fn check_nonneg(name: &str, v: f64) -> Result<()> {
    if v < 0.0 || !v.is_finite() {
        return Err(Error::InvalidArgument(format!("{name} must be finite and >= 0, got {v}")));
    }
    Ok(())
}

/// Tunable Ising, Gaussian noise. Entangled iff
/// `e^{-l^2} + 2 e^{-(l^2 + O^2/4)/2} > 1`; margin is LHS - 1.
pub fn ising_gaussian_entangled(lambda: f64, omega: f64) -> Result<PredicateVerdict> {
    check_nonneg("lambda", lambda)?;
    check_nonneg("omega", omega)?;
    let lhs = (-lambda * lambda).exp()
        + 2.0 * (-0.5 * (lambda * lambda + omega * omega / 4.0)).exp();
    Ok(PredicateVerdict::from_margin(lhs - 1.0))
}

/// Largest preparation noise still generating entanglement in the Gaussian
/// Ising pipeline:
/// `lambda_max = sqrt(-2 ln[(e^{-O^2/4} + 1)^{1/2} - e^{-O^2/8}])`.
/// Strictly decreasing in omega; 1.3276 at omega = 0.
pub fn ising_lambda_max(omega: f64) -> Result<f64> {
    check_nonneg("omega", omega)?;
    let g = (-omega * omega / 8.0).exp();
    let bracket = (g * g + 1.0).sqrt() - g;
    Ok((-2.0 * bracket.ln()).sqrt())
}

/// Untunable Ising, Gaussian pulse noise: same criterion with omega = 2 Lambda.
pub fn untunable_ising_entangled(lambda: f64, capital_lambda: f64) -> Result<PredicateVerdict> {
    check_nonneg("capital_lambda", capital_lambda)?;
    ising_gaussian_entangled(lambda, 2.0 * capital_lambda)
}

/// Reduced parameters of the tunable XYZ criterion:
/// `a = e^{-l^2/2}`, `b = e^{-2 O^2}`, `z = cos(2 mean_theta_minus)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XyzReducedParams {
    pub a: f64,
    pub b: f64,
    pub z: f64,
}

impl XyzReducedParams {
    pub fn new(a: f64, b: f64, z: f64) -> Result<Self> {
        if !(a > 0.0 && a <= 1.0) || !(b > 0.0 && b <= 1.0) || z.abs() > 1.0 + 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "need a, b in (0,1] and |z| <= 1, got a={a} b={b} z={z}"
            )));
        }
        Ok(XyzReducedParams { a, b, z: z.clamp(-1.0, 1.0) })
    }

    pub fn from_widths(lambda: f64, omega: f64, mean_theta_minus: f64) -> Result<Self> {
        check_nonneg("lambda", lambda)?;
        check_nonneg("omega", omega)?;
        Self::new(
            (-0.5 * lambda * lambda).exp(),
            (-2.0 * omega * omega).exp(),
            (2.0 * mean_theta_minus).cos(),
        )
    }
}

/// Tunable XYZ criterion: entangled iff
/// `|z| > [1/b^2 - (1+a)^2/(1-a)^2]^{1/2}` (or the radicand is negative).
///
/// The margin is the polynomial form
/// `z^2 b^2 (1-a)^2 - (1-a)^2 + b^2 (1+a)^2`, which has the same sign and
/// stays finite at the perfect-preparation cut a = 1 (where the state is
/// entangled unconditionally).
pub fn xyz_entangled(p: &XyzReducedParams) -> PredicateVerdict {
    let one_minus = (1.0 - p.a) * (1.0 - p.a);
    let one_plus = (1.0 + p.a) * (1.0 + p.a);
    let margin = p.z * p.z * p.b * p.b * one_minus - one_minus + p.b * p.b * one_plus;
    PredicateVerdict::from_margin(margin)
}

/// Sufficient condition for entanglement at any z: `b > (1-a)/(1+a)`.
pub fn xyz_sufficient_entangled(a: f64, b: f64) -> bool {
    b > (1.0 - a) / (1.0 + a)
}

/// Sufficient condition for separability at any z:
/// `b < (1-a)/sqrt(2(1+a^2))`.
pub fn xyz_sufficient_separable(a: f64, b: f64) -> bool {
    b < (1.0 - a) / (2.0 * (1.0 + a * a)).sqrt()
}

/// Final-state weights of the tunable XY/XXZ/Heisenberg pipeline:
/// `(w00, w_plus, w_minus)` with
/// `w00 = (1 - e^{-l^2/2})/2`, `w_pm = (1 + e^{-l^2/2})(1 -/+ e^{-O^2/2})/4`.
/// The two entangled-block weights differ for all finite widths, which is
/// exactly the always-entangled property of this family.
pub fn xy_family_weights(lambda: f64, omega: f64) -> Result<(f64, f64, f64)> {
    check_nonneg("lambda", lambda)?;
    check_nonneg("omega", omega)?;
    let eta = (-0.5 * lambda * lambda).exp();
    let damp = (-0.5 * omega * omega).exp();
    let w00 = 0.5 * (1.0 - eta);
    let w_plus = 0.25 * (1.0 + eta) * (1.0 - damp);
    let w_minus = 0.25 * (1.0 + eta) * (1.0 + damp);
    Ok((w00, w_plus, w_minus))
}

/// XY-family verdict: entangled whenever the block weights differ.
pub fn xy_family_entangled(lambda: f64, omega: f64) -> Result<PredicateVerdict> {
    let (_, w_plus, w_minus) = xy_family_weights(lambda, omega)?;
    Ok(PredicateVerdict::from_margin(w_minus - w_plus))
}

/// Parameters of the untunable XYZ criterion: `mu = e^{-L^2/2}`,
/// `eta = e^{-l^2/2}`, `delta = (Jx - Jy)/(Jx + Jy)`. The trigonometric
/// quantities A..D are derived on demand, never stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UntunableXyzParams {
    pub mu: f64,
    pub eta: f64,
    pub delta: f64,
}

impl UntunableXyzParams {
    pub fn new(mu: f64, eta: f64, delta: f64) -> Result<Self> {
        if !(mu > 0.0 && mu <= 1.0) || !(eta > 0.0 && eta <= 1.0) || !delta.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "need mu, eta in (0,1] and finite delta, got mu={mu} eta={eta} delta={delta}"
            )));
        }
        Ok(UntunableXyzParams { mu, eta, delta })
    }

    pub fn from_widths(lambda: f64, capital_lambda: f64, delta: f64) -> Result<Self> {
        check_nonneg("lambda", lambda)?;
        check_nonneg("capital_lambda", capital_lambda)?;
        Self::new(
            (-0.5 * capital_lambda * capital_lambda).exp(),
            (-0.5 * lambda * lambda).exp(),
            delta,
        )
    }

    pub fn beta(&self) -> f64 {
        self.delta * std::f64::consts::PI / 2.0
    }

    pub fn delta_small(&self) -> f64 {
        self.delta * std::f64::consts::PI / 4.0
    }
}

/// Raw LHS of the untunable-XYZ criterion
/// `(A + B mu)^2 (1 - eta)^2 (C mu - D)^2 - mu^4 (1 + eta)^2 / 4`;
/// negative means entangled. At delta = 0 or delta = 4n the cross terms
/// vanish and the LHS is strictly negative for all valid (mu, eta).
pub fn untunable_xyz_lhs(p: &UntunableXyzParams) -> f64 {
    let (beta, delta) = (p.beta(), p.delta_small());
    let a = beta.cos() * delta.cos();
    let b = beta.sin() * delta.sin();
    let cc = beta.sin() * delta.cos();
    let d = beta.cos() * delta.sin();
    let first = (a + b * p.mu) * (1.0 - p.eta) * (cc * p.mu - d);
    first * first - 0.25 * p.mu.powi(4) * (1.0 + p.eta) * (1.0 + p.eta)
}

pub fn untunable_xyz_entangled(p: &UntunableXyzParams) -> PredicateVerdict {
    PredicateVerdict::from_margin(-untunable_xyz_lhs(p))
}

/// Tunable/untunable Ising with Laplacian noise. Entangled iff
/// `4 l^2 (O^2 + 2 l^2 + 2 l^2 O^2) < 1`; margin is 1 - LHS.
pub fn ising_laplace_entangled(lambda: f64, omega: f64) -> Result<PredicateVerdict> {
    check_nonneg("lambda", lambda)?;
    check_nonneg("omega", omega)?;
    let l2 = lambda * lambda;
    let o2 = omega * omega;
    let lhs = 4.0 * l2 * (o2 + 2.0 * l2 + 2.0 * l2 * o2);
    Ok(PredicateVerdict::from_margin(1.0 - lhs))
}

/// Closed-form Laplace threshold:
/// `lambda < (1/2) sqrt[(sqrt(1 + (1+O^2)^2) - O^2) / (1 + O^2)]`.
/// Strictly decreasing; 0.59460 at omega = 0.
pub fn laplace_lambda_bound(omega: f64) -> Result<f64> {
    check_nonneg("omega", omega)?;
    let o2 = omega * omega;
    let inner = ((1.0 + (1.0 + o2) * (1.0 + o2)).sqrt() - o2) / (1.0 + o2);
    Ok(0.5 * inner.sqrt())
}

/// Bisect a monotone margin function to [`tol::BISECT`] along one axis.
/// `lo` and `hi` must produce margins of opposite sign.
pub fn bisect_margin<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> Result<f64> {
    let (flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::InvalidArgument(format!(
            "no sign change in bracket [{lo}, {hi}] (margins {flo:.3e}, {fhi:.3e})"
        )));
    }
    while hi - lo > tol::BISECT {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

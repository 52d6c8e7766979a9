//! Exchange Hamiltonians, single-qubit pulses, and refocusing algebra.
//!
//! The diagonal exchange family is `H = sum_a J_a S_a^1 S_a^2`. Its evolution
//! never mixes the `{|00>,|11>}` and `{|01>,|10>}` parity blocks, which is
//! what makes the closed-form block unitaries below possible.

use crate::smallmat::{
    c, kron, sigma_x, sigma_y, sigma_z, spin_x, spin_y, spin_z, C64, ComplexMatrix, Error, Result,
};
use crate::tol;
use std::f64::consts::PI;

/// Diagonal exchange couplings (J_x, J_y, J_z).
///
/// Products J*tau are dimensionless angles in radians; J alone only ever
/// matters here through its sign pattern, used for model classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExchangeCouplings {
    pub jx: f64,
    pub jy: f64,
    pub jz: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelClass {
    Ising,
    Xy,
    Xxz,
    Heisenberg,
    Xyz,
}

impl ExchangeCouplings {
    pub fn new(jx: f64, jy: f64, jz: f64) -> Self {
        ExchangeCouplings { jx, jy, jz }
    }

    /// Total classification on exact equality of the stored values.
    pub fn classify(&self) -> ModelClass {
        if self.jx == 0.0 && self.jy == 0.0 && self.jz != 0.0 {
            ModelClass::Ising
        } else if self.jx == self.jy && self.jx != 0.0 {
            if self.jz == self.jx {
                ModelClass::Heisenberg
            } else if self.jz == 0.0 {
                ModelClass::Xy
            } else {
                ModelClass::Xxz
            }
        } else {
            ModelClass::Xyz
        }
    }
}

/// `H = J_x S_x S_x + J_y S_y S_y + J_z S_z S_z` on two qubits.
pub fn exchange_hamiltonian(couplings: &ExchangeCouplings) -> ComplexMatrix {
    let terms = [
        (couplings.jx, sigma_x()),
        (couplings.jy, sigma_y()),
        (couplings.jz, sigma_z()),
    ];
    let mut h = ComplexMatrix::zeros(4);
    for (j, s) in terms {
        h = h.add(&kron(&s, &s).unwrap().scale(c(j / 4.0, 0.)));
    }
    h
}

/// Block angles of the exchange unitary.
///
/// `theta_x`, `theta_y` are the effective block mixing half-angles of the
/// x/y couplings and `phi = J_z * tau` the Ising phase angle. In terms of
/// the spin-operator Hamiltonian above, `exchange_unitary(angles)` equals
/// `unitary_exp(exchange_hamiltonian(J), tau)` under the map
/// `theta_{x,y} = J_{x,y} tau / 4`, `phi = J_z tau`
/// (see [`ExchangeAngles::from_couplings`]). theta+/theta- are always
/// derived, never stored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExchangeAngles {
    pub theta_x: f64,
    pub theta_y: f64,
    pub phi: f64,
}

impl ExchangeAngles {
    pub fn new(theta_x: f64, theta_y: f64, phi: f64) -> Self {
        ExchangeAngles { theta_x, theta_y, phi }
    }

    /// Angles reproducing `exp(-i tau H)` for the given couplings.
    pub fn from_couplings(couplings: &ExchangeCouplings, tau: f64) -> Self {
        ExchangeAngles {
            theta_x: couplings.jx * tau / 4.0,
            theta_y: couplings.jy * tau / 4.0,
            phi: couplings.jz * tau,
        }
    }

    pub fn theta_plus(&self) -> f64 {
        self.theta_x + self.theta_y
    }

    pub fn theta_minus(&self) -> f64 {
        self.theta_x - self.theta_y
    }
}

/// Closed-form exchange unitary.
///
/// On `{|01>,|10>}`: phase `e^{+i phi/4}` times an x-type rotation mixing the
/// two states by angle `theta+`; on `{|00>,|11>}`: phase `e^{-i phi/4}` and
/// mixing angle `theta-`. Cross-block entries are identically zero.
pub fn exchange_unitary(angles: &ExchangeAngles) -> ComplexMatrix {
    let tp = angles.theta_plus();
    let tm = angles.theta_minus();
    let ppos = C64::from_polar(1.0, angles.phi / 4.0);
    let pneg = C64::from_polar(1.0, -angles.phi / 4.0);
    let mut u = ComplexMatrix::zeros(4);
    // {|00>, |11>} block
    u.set(0, 0, pneg * tm.cos());
    u.set(0, 3, pneg * c(0., -1.) * tm.sin());
    u.set(3, 0, pneg * c(0., -1.) * tm.sin());
    u.set(3, 3, pneg * tm.cos());
    // {|01>, |10>} block
    u.set(1, 1, ppos * tp.cos());
    u.set(1, 2, ppos * c(0., -1.) * tp.sin());
    u.set(2, 1, ppos * c(0., -1.) * tp.sin());
    u.set(2, 2, ppos * tp.cos());
    u
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub fn spin(&self) -> ComplexMatrix {
        match self {
            Axis::X => spin_x(),
            Axis::Y => spin_y(),
            Axis::Z => spin_z(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Qubit {
    One,
    Two,
}

/// Single-qubit rotation `exp(-i angle S_axis)` on the designated qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSpec {
    pub axis: Axis,
    pub qubit: Qubit,
    pub angle: f64,
}

impl PulseSpec {
    pub fn new(axis: Axis, qubit: Qubit, angle: f64) -> Result<Self> {
        if !angle.is_finite() {
            return Err(Error::InvalidArgument("pulse angle must be finite".into()));
        }
        Ok(PulseSpec { axis, qubit, angle })
    }
}

/// Two-qubit generator of a single-qubit pulse: `S_axis` on the designated
/// qubit, identity on the other.
pub fn pulse_generator(axis: Axis, qubit: Qubit) -> ComplexMatrix {
    let s = axis.spin();
    let i2 = ComplexMatrix::identity(2);
    match qubit {
        Qubit::One => kron(&s, &i2).unwrap(),
        Qubit::Two => kron(&i2, &s).unwrap(),
    }
}

/// `exp(-i angle S_axis)` on one qubit, identity on the other.
pub fn pulse_unitary(pulse: &PulseSpec) -> ComplexMatrix {
    // Closed form on the 2x2 factor: cos(a/2) I - i sin(a/2) sigma.
    let half = pulse.angle / 2.0;
    let sigma = pulse.axis.spin().scale(c(2.0, 0.));
    let u2 = ComplexMatrix::identity(2)
        .scale(c(half.cos(), 0.))
        .add(&sigma.scale(c(0., -half.sin())));
    let i2 = ComplexMatrix::identity(2);
    match pulse.qubit {
        Qubit::One => kron(&u2, &i2).unwrap(),
        Qubit::Two => kron(&i2, &u2).unwrap(),
    }
}

/// Rotate a generator by conjugation: `exp(-i phi Z) X exp(i phi Z) =
/// X cos(phi) + Y sin(phi)` for any su(2) triple with `[X,Y] = iZ` cyclically.
///
/// At `phi = pi` this is `-X`, i.e. time reversal of `exp(i theta X)`.
pub fn conjugate_generator(
    z_angle: f64,
    z: &ComplexMatrix,
    x: &ComplexMatrix,
    y: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    let check = |a: &ComplexMatrix, b: &ComplexMatrix, expect: &ComplexMatrix| -> f64 {
        a.mul(b).sub(&b.mul(a)).distance(&expect.scale(c(0., 1.)))
    };
    let worst = check(x, y, z).max(check(y, z, x)).max(check(z, x, y));
    if worst > tol::OP_EQ {
        return Err(Error::InvalidArgument(format!(
            "generators do not satisfy su(2) commutation relations (defect {worst:.3e})"
        )));
    }
    Ok(x.scale(c(z_angle.cos(), 0.)).add(&y.scale(c(z_angle.sin(), 0.))))
}

/// Refocusing schedule for the always-on Ising interaction.
///
/// The mean schedule must satisfy `J(2 tau_1 - tau_2) = pi`, and the two
/// segment angles must differ; at `j_tau1 = j_tau2` the conjugated segment
/// vanishes and the pulse angle drops out of the evolution entirely, which
/// would silently suppress all pulse noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefocusSchedule {
    j_tau1: f64,
    j_tau2: f64,
    pub pulse_angle: f64,
}

impl RefocusSchedule {
    pub fn new(j_tau1: f64, j_tau2: f64, pulse_angle: f64) -> Result<Self> {
        if (2.0 * j_tau1 - j_tau2 - PI).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "schedule violates J(2 tau1 - tau2) = pi: got {}",
                2.0 * j_tau1 - j_tau2
            )));
        }
        if j_tau1 == j_tau2 {
            return Err(Error::InvalidArgument(
                "degenerate schedule j_tau1 == j_tau2 makes the pulse angle inert".into(),
            ));
        }
        Ok(RefocusSchedule { j_tau1, j_tau2, pulse_angle })
    }

    /// Default schedule (J tau1, J tau2) = (3 pi/4, pi/2) at pulse angle pi.
    pub fn default_mean() -> Self {
        Self::new(0.75 * PI, 0.5 * PI, PI).unwrap()
    }

    /// Same segment angles, different pulse angle (noisy values allowed).
    pub fn with_pulse_angle(&self, pulse_angle: f64) -> Self {
        RefocusSchedule { pulse_angle, ..*self }
    }

    pub fn j_tau1(&self) -> f64 {
        self.j_tau1
    }

    pub fn j_tau2(&self) -> f64 {
        self.j_tau2
    }
}

/// `exp(-i a S_z S_z) = e^{-i (a/4) sigma_z sigma_z}`, diagonal.
pub fn zz_unitary(angle: f64) -> ComplexMatrix {
    let inner = C64::from_polar(1.0, angle / 4.0);
    let outer = C64::from_polar(1.0, -angle / 4.0);
    ComplexMatrix::diag(4, &[outer, inner, inner, outer]).unwrap()
}

/// Refocused evolution of the always-on Ising coupling:
///
/// `U = exp(-i theta Sx1) exp(-i (Jt2-Jt1) SzSz) exp(+i theta Sx1)
///      exp(-i Jt1 SzSz)`
///
/// At `theta = pi` this equals `exp(-i pi/4 sigma_z sigma_z)` for every valid
/// mean schedule.
pub fn refocused_unitary(schedule: &RefocusSchedule) -> ComplexMatrix {
    let px = |angle: f64| pulse_unitary(&PulseSpec::new(Axis::X, Qubit::One, angle).unwrap());
    px(schedule.pulse_angle)
        .mul(&zz_unitary(schedule.j_tau2 - schedule.j_tau1))
        .mul(&px(-schedule.pulse_angle))
        .mul(&zz_unitary(schedule.j_tau1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smallmat::{hermitian_eigensystem, unitary_exp};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    #[test]
    fn classification() {
        use ModelClass::*;
        assert_eq!(ExchangeCouplings::new(0., 0., 1.).classify(), Ising);
        assert_eq!(ExchangeCouplings::new(1., 1., 0.).classify(), Xy);
        assert_eq!(ExchangeCouplings::new(1., 1., 0.5).classify(), Xxz);
        assert_eq!(ExchangeCouplings::new(1., 1., 1.).classify(), Heisenberg);
        assert_eq!(ExchangeCouplings::new(1., 2., 3.).classify(), Xyz);
        assert_eq!(ExchangeCouplings::new(0., 0., 0.).classify(), Xyz);
    }

    #[test]
    fn ising_hamiltonian_diagonal() {
        let h = exchange_hamiltonian(&ExchangeCouplings::new(0., 0., 2.0));
        let expect =
            ComplexMatrix::diag(4, &[c(0.5, 0.), c(-0.5, 0.), c(-0.5, 0.), c(0.5, 0.)]).unwrap();
        assert!(h.approx_eq(&expect, 1e-15));
    }

    #[test]
    fn heisenberg_spectrum() {
        let h = exchange_hamiltonian(&ExchangeCouplings::new(1., 1., 1.));
        let spec = hermitian_eigensystem(&h).unwrap();
        assert!((spec.eigenvalues[0] + 0.75).abs() < 1e-12);
        for k in 1..4 {
            assert!((spec.eigenvalues[k] - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn xy_minus_coupling_block() {
        // (1,-1,0): coupling lives purely in the {|00>,|11>} block.
        let h = exchange_hamiltonian(&ExchangeCouplings::new(1., -1., 0.));
        let mut expect = ComplexMatrix::zeros(4);
        expect.set(0, 3, c(0.5, 0.));
        expect.set(3, 0, c(0.5, 0.));
        assert!(h.approx_eq(&expect, 1e-15));
    }

    #[test]
    fn exchange_unitary_ising_limit() {
        let u = exchange_unitary(&ExchangeAngles::new(0., 0., PI));
        assert!(u.approx_eq(&zz_unitary(PI), 1e-14));
    }

    #[test]
    fn exchange_unitary_prepares_xi() {
        // theta_x + theta_y = pi/4 maps |01> to an equal-magnitude
        // superposition of |01> and |10>.
        let u = exchange_unitary(&ExchangeAngles::new(PI / 8.0, PI / 8.0, 1.3));
        let out = u.apply(&[c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)]);
        assert!((out[1].norm() - (0.5f64).sqrt()).abs() < 1e-12);
        assert!((out[2].norm() - (0.5f64).sqrt()).abs() < 1e-12);
        assert!(out[0].norm() < 1e-14 && out[3].norm() < 1e-14);
    }

    #[test]
    fn exchange_unitary_matches_eigensolve() {
        let mut rng = StdRng::seed_from_u64(19);
        for _ in 0..30 {
            let couplings = ExchangeCouplings::new(
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
            );
            let tau = rng.gen_range(0.1..3.0);
            let closed = exchange_unitary(&ExchangeAngles::from_couplings(&couplings, tau));
            let brute = unitary_exp(&exchange_hamiltonian(&couplings), tau).unwrap();
            assert!(closed.approx_eq(&brute, 1e-10));
        }
    }

    #[test]
    fn exchange_unitary_parity_blocks() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..20 {
            let u = exchange_unitary(&ExchangeAngles::new(
                rng.gen_range(-3.0..3.0),
                rng.gen_range(-3.0..3.0),
                rng.gen_range(-3.0..3.0),
            ));
            // No mixing between {|00>,|11>} and {|01>,|10>}.
            for (i, j) in [(0, 1), (0, 2), (3, 1), (3, 2), (1, 0), (2, 0), (1, 3), (2, 3)] {
                assert!(u.get(i, j).norm() < 1e-14);
            }
            assert!(u.is_unitary(1e-12));
        }
    }

    #[test]
    fn pulse_unitary_cases() {
        let id = pulse_unitary(&PulseSpec::new(Axis::Y, Qubit::One, 0.0).unwrap());
        assert!(id.approx_eq(&ComplexMatrix::identity(4), 1e-15));

        // pi x-rotation on qubit 2 takes |00> to |01> up to phase
        let u = pulse_unitary(&PulseSpec::new(Axis::X, Qubit::Two, PI).unwrap());
        let out = u.apply(&[c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.)]);
        assert!((out[1].norm() - 1.0).abs() < 1e-14);

        // pi/2 y-rotation on qubit 1: |0> -> (|0>+|1>)/sqrt(2)
        let u = pulse_unitary(&PulseSpec::new(Axis::Y, Qubit::One, PI / 2.0).unwrap());
        let out = u.apply(&[c(1., 0.), c(0., 0.), c(0., 0.), c(0., 0.)]);
        let s = (0.5f64).sqrt();
        assert!((out[0] - c(s, 0.)).norm() < 1e-14);
        assert!((out[2] - c(s, 0.)).norm() < 1e-14);
    }

    #[test]
    fn conjugation_identity() {
        let (z, x, y) = (spin_z(), spin_x(), spin_y());
        assert!(conjugate_generator(0.0, &z, &x, &y).unwrap().approx_eq(&x, 1e-14));
        assert!(conjugate_generator(PI, &z, &x, &y)
            .unwrap()
            .approx_eq(&x.scale(c(-1., 0.)), 1e-14));
        assert!(conjugate_generator(PI / 2.0, &z, &x, &y).unwrap().approx_eq(&y, 1e-14));
        // matches actual conjugation exp(-i phi Z) X exp(i phi Z)
        for phi in [0.3, 1.1, 2.9] {
            let u = unitary_exp(&z, phi).unwrap();
            let direct = u.mul(&x).mul(&u.adjoint());
            assert!(conjugate_generator(phi, &z, &x, &y).unwrap().approx_eq(&direct, 1e-12));
        }
    }

    #[test]
    fn conjugation_inverse_property() {
        let (z, x, y) = (spin_z(), spin_x(), spin_y());
        for phi in [0.2, 0.9, 2.4] {
            let fwd = conjugate_generator(phi, &z, &x, &y).unwrap();
            // rotate back: X' cos(-phi) + Y' sin(-phi) with Y' = conj of y
            let y_fwd = conjugate_generator(phi, &z, &y, &x.scale(c(-1., 0.))).unwrap();
            let back = fwd
                .scale(c((-phi).cos(), 0.))
                .add(&y_fwd.scale(c((-phi).sin(), 0.)));
            assert!(back.approx_eq(&x, 1e-12));
        }
    }

    #[test]
    fn conjugation_rejects_bad_triple() {
        let bad = conjugate_generator(1.0, &spin_z(), &spin_x(), &spin_x());
        assert!(bad.is_err());
    }

    #[test]
    fn schedule_validation() {
        assert!(RefocusSchedule::new(0.75 * PI, 0.5 * PI, PI).is_ok());
        assert!(RefocusSchedule::new(0.7 * PI, 0.5 * PI, PI).is_err());
        assert!(RefocusSchedule::new(PI, PI, PI).is_err());
    }

    #[test]
    fn refocused_unitary_at_pi_is_cphase() {
        let u = refocused_unitary(&RefocusSchedule::default_mean());
        assert!(u.approx_eq(&zz_unitary(PI), 1e-12));
    }

    #[test]
    fn refocused_unitary_schedule_independent_at_pi() {
        let mut rng = StdRng::seed_from_u64(23);
        let reference = refocused_unitary(&RefocusSchedule::default_mean());
        for _ in 0..20 {
            let j_tau1 = rng.gen_range(0.1..3.0);
            let j_tau2 = 2.0 * j_tau1 - PI;
            let Ok(s) = RefocusSchedule::new(j_tau1, j_tau2, PI) else {
                continue;
            };
            assert!(refocused_unitary(&s).distance(&reference) < 1e-10);
        }
    }

    #[test]
    fn refocused_unitary_theta_zero_merges_segments() {
        let s = RefocusSchedule::default_mean().with_pulse_angle(0.0);
        assert!(refocused_unitary(&s).approx_eq(&zz_unitary(s.j_tau2()), 1e-12));
    }

    #[test]
    fn refocused_unitary_matches_brute_force() {
        let s = RefocusSchedule::default_mean().with_pulse_angle(PI / 2.0);
        let sx1 = pulse_generator(Axis::X, Qubit::One);
        let szsz = kron(&sigma_z(), &sigma_z()).unwrap().scale(c(0.25, 0.));
        let brute = unitary_exp(&sx1, s.pulse_angle)
            .unwrap()
            .mul(&unitary_exp(&szsz, s.j_tau2() - s.j_tau1()).unwrap())
            .mul(&unitary_exp(&sx1, -s.pulse_angle).unwrap())
            .mul(&unitary_exp(&szsz, s.j_tau1()).unwrap());
        assert!(refocused_unitary(&s).approx_eq(&brute, 1e-10));
    }
}

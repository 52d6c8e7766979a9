//! End-to-end noisy pipelines for the tunable/untunable exchange scenarios.
//!
//! Each scenario composes a noisy preparation stage with a noisy interaction
//! stage, averaging over every stochastic angle independently. The simulated
//! partial-transpose verdict is computed alongside the matching closed-form
//! predicate so either can serve as the other's oracle.
//!
//! Angle conventions per scenario (each pinned by the criterion it must
//! reproduce):
//! - Ising preparation: one y-rotation per qubit, mean pi/2, independent
//!   noise of width lambda on each. A single mean-pi rotation maps |0> to
//!   |1> and can never reach the entangled target state; the pi/2-per-qubit
//!   convention reproduces the Ising criterion exactly.
//! - Ising interaction: angle ~ (pi, Omega), gate `e^{-i(angle/4) zz}`.
//! - Untunable Ising: refocused sequence with pulse angle ~ (pi, Lambda)
//!   on the default schedule (J tau1, J tau2) = (3 pi/4, pi/2).
//! - XYZ: theta_x, theta_y sampled independently with width Omega/sqrt(2)
//!   each (so theta+- are independent with width Omega), gates
//!   `exp(-i theta_x XX)`, `exp(-i theta_y YY)` in the full Pauli
//!   normalization, which is the convention under which the XYZ criterion's
//!   `b = e^{-2 Omega^2}` damping arises.
//! - XY family: single angle j ~ (pi/4, Omega) evolving under the spin
//!   exchange generator `SxSx + SySy`, the convention reproducing the
//!   `e^{-Omega^2/2}` weight split of this family.

use crate::entangle::{default_verdict, von_neumann_entropy, EntanglementVerdict};
use crate::hamiltonians::{pulse_generator, zz_unitary, Axis, Qubit, RefocusSchedule};
use crate::noisechan::{average_state, AngleDistribution, AveragingMethod, UnitaryHarmonics};
use crate::predicates::{self, PredicateVerdict};
use crate::smallmat::{
    c, evolve, kron, sigma_x, sigma_y, sigma_z, ComplexMatrix, DensityMatrix, Error, Result,
};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioId {
    IsingTunable,
    IsingUntunable,
    XyzTunable,
    XyFamilyTunable,
    IsingTunableLaplace,
    IsingUntunableLaplace,
}

impl ScenarioId {
    pub const ALL: [ScenarioId; 6] = [
        ScenarioId::IsingTunable,
        ScenarioId::IsingUntunable,
        ScenarioId::XyzTunable,
        ScenarioId::XyFamilyTunable,
        ScenarioId::IsingTunableLaplace,
        ScenarioId::IsingUntunableLaplace,
    ];

    pub fn is_laplace(&self) -> bool {
        matches!(
            self,
            ScenarioId::IsingTunableLaplace | ScenarioId::IsingUntunableLaplace
        )
    }

    pub fn uses_refocus(&self) -> bool {
        matches!(
            self,
            ScenarioId::IsingUntunable | ScenarioId::IsingUntunableLaplace
        )
    }

    pub fn is_xyz(&self) -> bool {
        matches!(self, ScenarioId::XyzTunable)
    }

    fn distribution(&self, mean: f64, width: f64) -> Result<AngleDistribution> {
        if self.is_laplace() {
            AngleDistribution::laplace(mean, width)
        } else {
            AngleDistribution::gaussian(mean, width)
        }
    }
}

impl std::fmt::Display for ScenarioId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ScenarioId::IsingTunable => "ising-tunable",
            ScenarioId::IsingUntunable => "ising-untunable",
            ScenarioId::XyzTunable => "xyz-tunable",
            ScenarioId::XyFamilyTunable => "xy-family",
            ScenarioId::IsingTunableLaplace => "ising-laplace",
            ScenarioId::IsingUntunableLaplace => "ising-untunable-laplace",
        };
        write!(f, "{s}")
    }
}

impl std::str::FromStr for ScenarioId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ising-tunable" => Ok(ScenarioId::IsingTunable),
            "ising-untunable" => Ok(ScenarioId::IsingUntunable),
            "xyz-tunable" => Ok(ScenarioId::XyzTunable),
            "xy-family" => Ok(ScenarioId::XyFamilyTunable),
            "ising-laplace" => Ok(ScenarioId::IsingTunableLaplace),
            "ising-untunable-laplace" => Ok(ScenarioId::IsingUntunableLaplace),
            other => Err(Error::InvalidArgument(format!("unknown scenario '{other}'"))),
        }
    }
}

/// Full configuration of one pipeline run.
#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub id: ScenarioId,
    /// Preparation noise width (lambda).
    pub prep_width: f64,
    /// Interaction noise width (Omega, or Lambda for untunable scenarios).
    pub interaction_width: f64,
    /// Mean of theta_minus; XYZ only.
    pub mean_theta_minus: Option<f64>,
    /// phi = J_z tau; XYZ only.
    pub phi: Option<f64>,
    pub method: AveragingMethod,
    /// Refocusing schedule; untunable scenarios only.
    pub refocus: Option<RefocusSchedule>,
}

impl ScenarioConfig {
    pub fn new(id: ScenarioId, prep_width: f64, interaction_width: f64) -> Result<Self> {
        if prep_width < 0.0 || interaction_width < 0.0 {
            return Err(Error::InvalidArgument("noise widths must be >= 0".into()));
        }
        Ok(ScenarioConfig {
            id,
            prep_width,
            interaction_width,
            mean_theta_minus: None,
            phi: None,
            method: AveragingMethod::ClosedForm,
            refocus: None,
        })
    }

    pub fn with_theta_minus(mut self, v: f64) -> Result<Self> {
        if !self.id.is_xyz() {
            return Err(Error::InvalidArgument(format!(
                "mean_theta_minus only applies to xyz-tunable, not {}",
                self.id
            )));
        }
        self.mean_theta_minus = Some(v);
        Ok(self)
    }

    pub fn with_phi(mut self, v: f64) -> Result<Self> {
        if !self.id.is_xyz() {
            return Err(Error::InvalidArgument(format!(
                "phi only applies to xyz-tunable, not {}",
                self.id
            )));
        }
        self.phi = Some(v);
        Ok(self)
    }

    pub fn with_method(mut self, m: AveragingMethod) -> Self {
        self.method = m;
        self
    }

    pub fn with_refocus(mut self, s: RefocusSchedule) -> Result<Self> {
        if !self.id.uses_refocus() {
            return Err(Error::InvalidArgument(format!(
                "refocus schedule only applies to untunable scenarios, not {}",
                self.id
            )));
        }
        self.refocus = Some(s);
        Ok(self)
    }

    fn theta_minus(&self) -> f64 {
        self.mean_theta_minus.unwrap_or(0.0)
    }

    fn schedule(&self) -> RefocusSchedule {
        self.refocus.unwrap_or_else(RefocusSchedule::default_mean)
    }
}

/// Result of one pipeline run.
#[derive(Debug, Clone)]
pub struct ScenarioResult {
    pub final_state: DensityMatrix,
    pub verdict: EntanglementVerdict,
    pub predicate: PredicateVerdict,
    /// Entropy (bits) of the prepared state, before the interaction.
    pub initial_entropy_bits: f64,
    pub method: AveragingMethod,
    pub elapsed_ms: f64,
}

/// Average one noisy-rotation stage into the state.
fn noisy_stage(
    rho: &DensityMatrix,
    generator: &ComplexMatrix,
    dist: &AngleDistribution,
    method: &AveragingMethod,
    stage: u64,
) -> Result<DensityMatrix> {
    let harmonics = UnitaryHarmonics::from_generator(generator)?;
    average_state(&harmonics.conjugate_state(rho), dist, &method.substream(stage))
}

/// Noisy state preparation for the scenario family.
pub fn prepare_initial(
    id: ScenarioId,
    prep_width: f64,
    method: &AveragingMethod,
) -> Result<DensityMatrix> {
    if prep_width < 0.0 {
        return Err(Error::InvalidArgument("prep_width must be >= 0".into()));
    }
    let rho = DensityMatrix::basis(0);
    match id {
        ScenarioId::IsingTunable
        | ScenarioId::IsingUntunable
        | ScenarioId::IsingTunableLaplace
        | ScenarioId::IsingUntunableLaplace => {
            // Independent noisy y-rotations, mean pi/2, on each qubit.
            let dist = id.distribution(PI / 2.0, prep_width)?;
            let rho = noisy_stage(&rho, &pulse_generator(Axis::Y, Qubit::One), &dist, method, 0)?;
            noisy_stage(&rho, &pulse_generator(Axis::Y, Qubit::Two), &dist, method, 1)
        }
        ScenarioId::XyzTunable | ScenarioId::XyFamilyTunable => {
            // Noisy x-rotation on qubit 2, mean pi: |00> -> mixture of
            // |00>, |01> with weights (1 -/+ e^{-lambda^2/2})/2.
            let dist = id.distribution(PI, prep_width)?;
            noisy_stage(&rho, &pulse_generator(Axis::X, Qubit::Two), &dist, method, 0)
        }
    }
}

/// Apply the scenario's noisy interaction to a prepared state.
fn apply_interaction(config: &ScenarioConfig, rho: &DensityMatrix) -> Result<DensityMatrix> {
    let width = config.interaction_width;
    match config.id {
        ScenarioId::IsingTunable | ScenarioId::IsingTunableLaplace => {
            // angle ~ (pi, Omega); U = e^{-i (angle/4) sigma_z sigma_z}
            let gen = kron(&sigma_z(), &sigma_z())?.scale(c(0.25, 0.));
            let dist = config.id.distribution(PI, width)?;
            noisy_stage(rho, &gen, &dist, &config.method, 2)
        }
        ScenarioId::IsingUntunable | ScenarioId::IsingUntunableLaplace => {
            // U_R(theta) with theta ~ (pi, Lambda) on a fixed schedule.
            let s = config.schedule();
            let sx1 = pulse_generator(Axis::X, Qubit::One);
            let left = UnitaryHarmonics::from_generator(&sx1)?
                .right_mul(&zz_unitary(s.j_tau2() - s.j_tau1()));
            let right = UnitaryHarmonics::from_generator(&sx1.scale(c(-1., 0.)))?
                .right_mul(&zz_unitary(s.j_tau1()));
            let refocused = left.compose(&right);
            let dist = config.id.distribution(PI, width)?;
            average_state(
                &refocused.conjugate_state(rho),
                &dist,
                &config.method.substream(2),
            )
        }
        ScenarioId::XyzTunable => {
            // theta_x ~ ((pi/4 + tm)/2, Omega/sqrt(2)) under XX,
            // theta_y ~ ((pi/4 - tm)/2, Omega/sqrt(2)) under YY,
            // then the deterministic phi phase (which drops out of the state).
            let tm = config.theta_minus();
            let w = width / std::f64::consts::SQRT_2;
            let gx = kron(&sigma_x(), &sigma_x())?;
            let gy = kron(&sigma_y(), &sigma_y())?;
            let dx = config.id.distribution((PI / 4.0 + tm) / 2.0, w)?;
            let dy = config.id.distribution((PI / 4.0 - tm) / 2.0, w)?;
            let rho = noisy_stage(rho, &gx, &dx, &config.method, 2)?;
            let rho = noisy_stage(&rho, &gy, &dy, &config.method, 3)?;
            evolve(&rho, &zz_unitary(config.phi.unwrap_or(0.0)))
        }
        ScenarioId::XyFamilyTunable => {
            // Single angle j ~ (pi/4, Omega) under SxSx + SySy.
            let gen = kron(&sigma_x(), &sigma_x())?
                .add(&kron(&sigma_y(), &sigma_y())?)
                .scale(c(0.25, 0.));
            let dist = config.id.distribution(PI / 4.0, width)?;
            noisy_stage(rho, &gen, &dist, &config.method, 2)
        }
    }
}

/// Closed-form predicate matching the scenario's parameters.
pub fn predicate_for(config: &ScenarioConfig) -> Result<PredicateVerdict> {
    let (l, w) = (config.prep_width, config.interaction_width);
    match config.id {
        ScenarioId::IsingTunable => predicates::ising_gaussian_entangled(l, w),
        ScenarioId::IsingUntunable => predicates::untunable_ising_entangled(l, w),
        ScenarioId::XyzTunable => {
            let p = predicates::XyzReducedParams::from_widths(l, w, config.theta_minus())?;
            Ok(predicates::xyz_entangled(&p))
        }
        ScenarioId::XyFamilyTunable => predicates::xy_family_entangled(l, w),
        ScenarioId::IsingTunableLaplace | ScenarioId::IsingUntunableLaplace => {
            predicates::ising_laplace_entangled(l, w)
        }
    }
}

/// Run the full noisy pipeline: preparation, interaction, diagnostics.
pub fn run_scenario(config: &ScenarioConfig) -> Result<ScenarioResult> {
    config.method.validate()?;
    if config.refocus.is_some() && !config.id.uses_refocus() {
        return Err(Error::InvalidArgument("refocus schedule on a tunable scenario".into()));
    }
    if (config.mean_theta_minus.is_some() || config.phi.is_some()) && !config.id.is_xyz() {
        return Err(Error::InvalidArgument("XYZ-only fields set on a non-XYZ scenario".into()));
    }
    let start = std::time::Instant::now();
    let prepared = prepare_initial(config.id, config.prep_width, &config.method)?;
    let initial_entropy_bits = von_neumann_entropy(&prepared);
    let final_state = apply_interaction(config, &prepared)?;
    let verdict = default_verdict(&final_state)?;
    let predicate = predicate_for(config)?;
    Ok(ScenarioResult {
        final_state,
        verdict,
        predicate,
        initial_entropy_bits,
        method: config.method,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Axis along which a boundary is located.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    PrepWidth,
    InteractionWidth,
}

impl SweepAxis {
    fn bind(&self, template: &ScenarioConfig, v: f64) -> ScenarioConfig {
        let mut c = template.clone();
        match self {
            SweepAxis::PrepWidth => c.prep_width = v,
            SweepAxis::InteractionWidth => c.interaction_width = v,
        }
        c
    }
}

/// Simulated and closed-form thresholds along one axis.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryReport {
    /// Sign change of the simulated pipeline's minimal PT eigenvalue.
    pub simulated_threshold: f64,
    /// Sign change of the matching closed-form predicate margin, if the
    /// predicate also changes sign inside the bracket.
    pub closed_form_threshold: Option<f64>,
    pub deviation: Option<f64>,
}

/// Bisect the simulated pipeline's entanglement transition along `axis`.
///
/// The bracket endpoints must straddle a sign change of the minimal PT
/// eigenvalue; the transition is located to 1e-6.
pub fn boundary_bisect(
    template: &ScenarioConfig,
    axis: SweepAxis,
    bracket: (f64, f64),
) -> Result<BoundaryReport> {
    let simulated = |v: f64| -> f64 {
        let cfg = axis.bind(template, v);
        // Positive margin = entangled, matching the predicate orientation.
        -run_scenario(&cfg).expect("pipeline evaluation failed during bisection").verdict
            .min_pt_eigenvalue
    };
    let simulated_threshold = predicates::bisect_margin(simulated, bracket.0, bracket.1)?;
    let closed_form_threshold = predicates::bisect_margin(
        |v| {
            predicate_for(&axis.bind(template, v))
                .map(|p| p.margin)
                .unwrap_or(f64::NAN)
        },
        bracket.0,
        bracket.1,
    )
    .ok();
    let deviation = closed_form_threshold.map(|c| (c - simulated_threshold).abs());
    Ok(BoundaryReport { simulated_threshold, closed_form_threshold, deviation })
}

/// Outcome of cross-validating the closed-form predicate against the
/// simulated PPT verdict over a set of configurations.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub total: usize,
    /// Points skipped because the predicate margin was inside the guard band.
    pub excluded: usize,
    pub disagreements: usize,
    /// Largest |predicate margin| among disagreeing points.
    pub max_disagreement_margin: f64,
    pub elapsed_ms: f64,
}

impl ValidationReport {
    pub fn agreed(&self) -> bool {
        self.disagreements == 0
    }
}

/// Compare predicate vs simulated verdict at each configuration, excluding
/// points whose predicate margin lies within `guard` of the boundary.
pub fn validate(configs: &[ScenarioConfig], guard: f64) -> Result<ValidationReport> {
    let start = std::time::Instant::now();
    let mut excluded = 0;
    let mut disagreements = 0;
    let mut max_margin: f64 = 0.0;
    for cfg in configs {
        let pred = predicate_for(cfg)?;
        if pred.margin.abs() <= guard {
            excluded += 1;
            continue;
        }
        let result = run_scenario(cfg)?;
        let predicted = pred.margin > 0.0;
        if result.verdict.indeterminate {
            excluded += 1;
            continue;
        }
        if predicted != result.verdict.entangled {
            disagreements += 1;
            max_margin = max_margin.max(pred.margin.abs());
        }
    }
    Ok(ValidationReport {
        total: configs.len(),
        excluded,
        disagreements,
        max_disagreement_margin: max_margin,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Populations of the XY-family final state: `(w00, w_plus, w_minus, w11)`
/// where `w_plus <= w_minus` are the eigenvalues of the `{|01>,|10>}` block.
pub fn xy_block_populations(rho: &DensityMatrix) -> (f64, f64, f64, f64) {
    let m = rho.mat();
    let mid = (m.get(1, 1).re + m.get(2, 2).re) / 2.0;
    let half_diff = (m.get(1, 1).re - m.get(2, 2).re) / 2.0;
    let r = (half_diff * half_diff + m.get(1, 2).norm_sqr()).sqrt();
    (m.get(0, 0).re, mid - r, mid + r, m.get(3, 3).re)
}

/// Convenience: noiseless target state of the Ising pipeline,
/// `|xi> = (|00> + i|01> + i|10> + |11>)/2`.
pub fn xi_state() -> DensityMatrix {
    DensityMatrix::pure(&[c(0.5, 0.), c(0., 0.5), c(0., 0.5), c(0.5, 0.)]).unwrap()
}

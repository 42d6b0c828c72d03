//! Cycle-by-cycle density-matrix evolution of the interrogation interferometer.
//!
//! One cycle is rotate → absorb → measure {B, not B}. Two particle models are
//! provided:
//!
//! * [`ParticleModel::Coherent`]: the absorber acts through the unitary `Ab`
//!   and is watched continuously, so every cycle ends with a projective
//!   measurement onto |B⟩ or its complement.
//! * [`ParticleModel::Collapse`]: with probability `A` the particle measures
//!   which arm the photon is in (absorbing it if found there), and with
//!   probability `1 − A` it does nothing.
//!
//! [`ParticleModel::Absent`] is the coherent model at `A = 0`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::{Dim, SquareMatrix, StateVector};
use crate::operators::{
    absorption, projector, rotator3, AbsorptionProbability, Angle, BasisLabel, Subspace,
};
use crate::{HERMITIAN_TOL, PSD_TOL, TRACE_TOL};

/// Allowed deviation of `p_h + p_v + p_b` from one.
pub const PROBABILITY_SUM_TOL: f64 = 1e-10;
/// Negative probabilities down to this are floating-point dust and clamp to zero on output.
pub const PROBABILITY_DUST: f64 = 1e-12;

/// A validated 3×3 state over {H, V, B}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix(SquareMatrix);

impl DensityMatrix {
    pub fn new(m: SquareMatrix) -> Result<Self> {
        if m.dim() != Dim::Three {
            return Err(Error::InvalidState("density matrix must be 3×3".into()));
        }
        if !m.is_hermitian(HERMITIAN_TOL) {
            return Err(Error::InvalidState("not Hermitian".into()));
        }
        let tr = m.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        if !m.is_psd(PSD_TOL)? {
            return Err(Error::InvalidState("not positive semidefinite".into()));
        }
        Ok(Self(m))
    }

    /// |ψ⟩⟨ψ| for a unit-norm `psi`.
    pub fn pure(psi: &StateVector) -> Result<Self> {
        Self::new(psi.outer(psi)?)
    }

    pub fn basis(label: BasisLabel) -> Self {
        Self(projector(label))
    }

    /// Random state of random rank 1–3, built as G·G†/tr(G·G†).
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let rank = rng.random_range(1..=3);
        loop {
            let mut g = SquareMatrix::zeros(Dim::Three);
            for r in 0..3 {
                for c in 0..rank {
                    g.set(
                        r,
                        c,
                        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)),
                    );
                }
            }
            let gg = g * g.dagger();
            let tr = gg.trace().re;
            if tr > 1e-3 {
                let mut m = gg.scale(Complex64::new(1.0 / tr, 0.0));
                // exact Hermitian diagonal
                for i in 0..3 {
                    m.set(i, i, Complex64::new(m[(i, i)].re, 0.0));
                }
                return Self(m);
            }
        }
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.0
    }

    pub fn population(&self, label: BasisLabel) -> f64 {
        let i = label.index();
        self.0[(i, i)].re
    }

    /// Checks the state invariants again; used after long evolutions.
    pub fn validate(&self) -> Result<()> {
        Self::new(self.0).map(|_| ())
    }
}

impl From<DensityMatrix> for SquareMatrix {
    fn from(rho: DensityMatrix) -> Self {
        rho.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParticleModel {
    Coherent,
    Collapse,
    Absent,
}

impl ParticleModel {
    pub const ALL: [ParticleModel; 3] = [
        ParticleModel::Coherent,
        ParticleModel::Collapse,
        ParticleModel::Absent,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ParticleModel::Coherent => "coherent",
            ParticleModel::Collapse => "collapse",
            ParticleModel::Absent => "absent",
        }
    }
}

impl fmt::Display for ParticleModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ParticleModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "coherent" => Ok(ParticleModel::Coherent),
            "collapse" => Ok(ParticleModel::Collapse),
            "absent" => Ok(ParticleModel::Absent),
            other => Err(Error::Usage(format!(
                "unknown model '{other}' (expected coherent, collapse or absent)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThetaMode {
    /// θ = π/(2N).
    Auto,
    Explicit(Angle),
}

impl FromStr for ThetaMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "auto" {
            return Ok(ThetaMode::Auto);
        }
        let theta: f64 = s
            .parse()
            .map_err(|_| Error::Usage(format!("theta must be 'auto' or radians, got '{s}'")))?;
        Ok(ThetaMode::Explicit(Angle::new(theta)?))
    }
}

/// One experiment: rotation angle, absorption probability, cycle count, model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CycleConfig {
    theta: ThetaMode,
    a: AbsorptionProbability,
    n: u32,
    model: ParticleModel,
}

impl CycleConfig {
    pub fn new(
        theta: ThetaMode,
        a: AbsorptionProbability,
        n: u32,
        model: ParticleModel,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::Usage("cycle count must be at least 1".into()));
        }
        Ok(Self { theta, a, n, model })
    }

    /// Shorthand for the switching angle θ = π/(2N).
    pub fn auto(model: ParticleModel, a: f64, n: u32) -> Result<Self> {
        Self::new(ThetaMode::Auto, AbsorptionProbability::new(a)?, n, model)
    }

    pub fn theta(&self) -> Angle {
        match self.theta {
            ThetaMode::Auto => Angle::switching(self.n).expect("n >= 1 by construction"),
            ThetaMode::Explicit(t) => t,
        }
    }

    pub fn theta_mode(&self) -> ThetaMode {
        self.theta
    }

    /// Absorption probability the model actually uses (zero when absent).
    pub fn effective_absorption(&self) -> AbsorptionProbability {
        match self.model {
            ParticleModel::Absent => AbsorptionProbability::ZERO,
            _ => self.a,
        }
    }

    pub fn absorption(&self) -> AbsorptionProbability {
        self.a
    }

    pub fn cycles(&self) -> u32 {
        self.n
    }

    pub fn model(&self) -> ParticleModel {
        self.model
    }
}

/// Output-port probabilities (p_h, p_v, p_b).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Probabilities {
    pub p_h: f64,
    pub p_v: f64,
    pub p_b: f64,
}

impl Probabilities {
    pub fn get(&self, label: BasisLabel) -> f64 {
        match label {
            BasisLabel::H => self.p_h,
            BasisLabel::V => self.p_v,
            BasisLabel::B => self.p_b,
        }
    }

    pub fn sum(&self) -> f64 {
        self.p_h + self.p_v + self.p_b
    }

    pub fn max_abs_diff(&self, other: &Probabilities) -> f64 {
        BasisLabel::ALL
            .iter()
            .map(|&l| (self.get(l) - other.get(l)).abs())
            .fold(0.0, f64::max)
    }

    /// Replaces negative dust (≥ −1e-12) by zero. Larger negatives are left alone.
    pub fn clamped(&self) -> Self {
        let clamp = |p: f64| {
            if (-PROBABILITY_DUST..0.0).contains(&p) {
                0.0
            } else {
                p
            }
        };
        Self {
            p_h: clamp(self.p_h),
            p_v: clamp(self.p_v),
            p_b: clamp(self.p_b),
        }
    }

    pub fn is_valid(&self) -> bool {
        let in_range = |p: f64| (-PROBABILITY_DUST..=1.0 + PROBABILITY_DUST).contains(&p);
        in_range(self.p_h)
            && in_range(self.p_v)
            && in_range(self.p_b)
            && (self.sum() - 1.0).abs() <= PROBABILITY_SUM_TOL
    }
}

/// ρ₀ = |H⟩⟨H|.
pub fn initial_state() -> DensityMatrix {
    DensityMatrix::basis(BasisLabel::H)
}

/// Kraus operators of the coherent cycle before dephasing: {M_B, Ab·U·M_B̄}.
pub fn coherent_kraus(theta: Angle, a: AbsorptionProbability) -> [SquareMatrix; 2] {
    coherent_kraus_from(&rotator3(theta), &absorption(a))
}

/// Same as [`coherent_kraus`] with caller-supplied `U` and `Ab`.
pub fn coherent_kraus_from(u: &SquareMatrix, ab: &SquareMatrix) -> [SquareMatrix; 2] {
    [
        projector(BasisLabel::B),
        *ab * *u * projector(Subspace::NotB),
    ]
}

/// Kraus operators of the collapse cycle:
/// {M_B, √(1−A)·U·M_B̄, √A·M_H·U·M_B̄, √A·|B⟩⟨V|·U·M_B̄}.
pub fn collapse_kraus(theta: Angle, a: AbsorptionProbability) -> [SquareMatrix; 4] {
    let u_not_b = rotator3(theta) * projector(Subspace::NotB);
    let mut jump = SquareMatrix::zeros(Dim::Three);
    jump.set(2, 1, Complex64::new(1.0, 0.0));
    let keep = Complex64::new((1.0 - a.value()).sqrt(), 0.0);
    let take = Complex64::new(a.value().sqrt(), 0.0);
    [
        projector(BasisLabel::B),
        u_not_b.scale(keep),
        (projector(BasisLabel::H) * u_not_b).scale(take),
        (jump * u_not_b).scale(take),
    ]
}

/// Σ Kᵢ ρ Kᵢ†.
pub fn apply_kraus(ops: &[SquareMatrix], rho: &SquareMatrix) -> SquareMatrix {
    ops.iter()
        .map(|k| k.conjugate(rho).expect("3×3 operators"))
        .fold(SquareMatrix::zeros(Dim::Three), |acc, m| acc + m)
}

/// Σ Kᵢ† Kᵢ, which is the identity for a trace-preserving set.
pub fn kraus_completeness(ops: &[SquareMatrix]) -> SquareMatrix {
    ops.iter()
        .map(|k| k.dagger() * *k)
        .fold(SquareMatrix::zeros(Dim::Three), |acc, m| acc + m)
}

/// Projective {M_B, M_B̄} measurement without post-selection: zeroes B↔{H,V} coherences.
pub fn dephase(rho: &SquareMatrix) -> SquareMatrix {
    apply_kraus(&[projector(BasisLabel::B), projector(Subspace::NotB)], rho)
}

/// One coherent-absorber cycle:
/// ρ′ = M_B ρ M_B† + Ab U M_B̄ ρ M_B̄† U† Ab†, followed by the {B, B̄} measurement.
pub fn step_coherent(rho: &DensityMatrix, theta: Angle, a: AbsorptionProbability) -> DensityMatrix {
    let raw = apply_kraus(&coherent_kraus(theta, a), &rho.0);
    DensityMatrix(dephase(&raw))
}

/// One cycle of the "acts as a measurement with probability A" model.
pub fn step_collapse(rho: &DensityMatrix, theta: Angle, a: AbsorptionProbability) -> DensityMatrix {
    DensityMatrix(apply_kraus(&collapse_kraus(theta, a), &rho.0))
}

pub fn step(
    model: ParticleModel,
    rho: &DensityMatrix,
    theta: Angle,
    a: AbsorptionProbability,
) -> DensityMatrix {
    match model {
        ParticleModel::Coherent => step_coherent(rho, theta, a),
        ParticleModel::Collapse => step_collapse(rho, theta, a),
        ParticleModel::Absent => step_coherent(rho, theta, AbsorptionProbability::ZERO),
    }
}

/// Diagonal populations (ρ₀₀, ρ₁₁, ρ₂₂).
pub fn probabilities(rho: &DensityMatrix) -> Probabilities {
    Probabilities {
        p_h: rho.population(BasisLabel::H),
        p_v: rho.population(BasisLabel::V),
        p_b: rho.population(BasisLabel::B),
    }
}

/// Runs N cycles from |H⟩⟨H| and returns the output probabilities and ρ_N.
pub fn evolve(config: &CycleConfig) -> (Probabilities, DensityMatrix) {
    let theta = config.theta();
    let a = config.effective_absorption();
    let mut rho = initial_state();
    for _ in 0..config.cycles() {
        rho = step(config.model(), &rho, theta, a);
    }
    (probabilities(&rho), rho)
}

/// Every intermediate state ρ₁ … ρ_N of one evolution.
pub fn evolve_history(config: &CycleConfig) -> Vec<DensityMatrix> {
    let theta = config.theta();
    let a = config.effective_absorption();
    let mut rho = initial_state();
    (0..config.cycles())
        .map(|_| {
            rho = step(config.model(), &rho, theta, a);
            rho
        })
        .collect()
}

/// No particle: |H⟩ → cos(nθ)|H⟩ + sin(nθ)|V⟩.
pub fn closed_form_no_particle(theta: Angle, n: u64) -> Probabilities {
    let rot = crate::operators::rotator_power(theta, n);
    let (c, s) = (rot[(0, 0)].re, rot[(1, 0)].re);
    Probabilities {
        p_h: c * c,
        p_v: s * s,
        p_b: 0.0,
    }
}

/// Perfect absorber: survival cos^{2n}θ, explosion 1 − cos^{2n}θ.
pub fn closed_form_perfect_absorber(theta: Angle, n: u64) -> Probabilities {
    let survive = theta.radians().cos().powi(2).powf(n as f64);
    Probabilities {
        p_h: survive,
        p_v: 0.0,
        p_b: 1.0 - survive,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{FRAC_PI_4, PI};

    fn a(v: f64) -> AbsorptionProbability {
        AbsorptionProbability::new(v).unwrap()
    }

    fn t(v: f64) -> Angle {
        Angle::new(v).unwrap()
    }

    fn diff(x: &DensityMatrix, y: &DensityMatrix) -> f64 {
        x.matrix().max_abs_diff(y.matrix()).unwrap()
    }

    #[test]
    fn initial_state_cases() {
        let rho = initial_state();
        assert_eq!(rho.matrix().trace().re, 1.0);
        assert_eq!(
            probabilities(&rho),
            Probabilities {
                p_h: 1.0,
                p_v: 0.0,
                p_b: 0.0
            }
        );
        assert!(rho.matrix().is_psd(PSD_TOL).unwrap());
    }

    #[test]
    fn density_matrix_rejects_invalid_input() {
        let twice = SquareMatrix::identity(Dim::Three).scale(Complex64::new(2.0 / 3.0, 0.0));
        assert!(DensityMatrix::new(twice).is_err());
        let neg = SquareMatrix::diagonal(&[1.5, -0.5, 0.0]).unwrap();
        assert!(DensityMatrix::new(neg).is_err());
        let mut non_herm = SquareMatrix::diagonal(&[0.5, 0.5, 0.0]).unwrap();
        non_herm.set(0, 1, Complex64::new(0.1, 0.0));
        assert!(DensityMatrix::new(non_herm).is_err());
        assert!(DensityMatrix::new(SquareMatrix::identity(Dim::Two)).is_err());
    }

    #[test]
    fn coherent_without_absorption_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            // B-free pure input
            let x: f64 = rng.random_range(0.0..PI);
            let phase: f64 = rng.random_range(0.0..PI);
            let psi = StateVector::new(&[
                Complex64::new(x.cos(), 0.0),
                Complex64::from_polar(x.sin(), phase),
                Complex64::new(0.0, 0.0),
            ])
            .unwrap();
            let rho = DensityMatrix::pure(&psi).unwrap();
            let theta = t(rng.random_range(-3.0..3.0));
            let expected = rotator3(theta).conjugate(rho.matrix()).unwrap();
            let out = step_coherent(&rho, theta, AbsorptionProbability::ZERO);
            assert!(out.matrix().max_abs_diff(&expected).unwrap() < 1e-15);
        }
    }

    #[test]
    fn absorbed_state_is_fixed() {
        let b = DensityMatrix::basis(BasisLabel::B);
        for (theta, av) in [(0.0, 0.0), (0.3, 0.5), (FRAC_PI_4, 1.0), (2.0, 0.9)] {
            assert_eq!(step_coherent(&b, t(theta), a(av)), b);
            assert_eq!(step_collapse(&b, t(theta), a(av)), b);
        }
    }

    #[test]
    fn single_perfect_absorber_cycle_at_quarter_turn() {
        let out = step_coherent(&initial_state(), t(FRAC_PI_4), AbsorptionProbability::ONE);
        let expected = SquareMatrix::diagonal(&[0.5, 0.0, 0.5]).unwrap();
        assert!(out.matrix().max_abs_diff(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn models_agree_at_extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let rho = DensityMatrix::random(&mut rng);
            let theta = t(rng.random_range(-PI..PI));
            let zero = AbsorptionProbability::ZERO;
            let one = AbsorptionProbability::ONE;
            assert!(
                diff(
                    &step_collapse(&rho, theta, zero),
                    &step_coherent(&rho, theta, zero)
                ) <= 1e-13
            );
            assert!(
                diff(
                    &step_collapse(&rho, theta, one),
                    &step_coherent(&rho, theta, one)
                ) <= 1e-12
            );
        }
    }

    #[test]
    fn kraus_sets_are_complete() {
        let id = SquareMatrix::identity(Dim::Three);
        for k in 0..=10 {
            let av = a(k as f64 / 10.0);
            let theta = t(0.37 * k as f64);
            assert!(
                kraus_completeness(&coherent_kraus(theta, av))
                    .max_abs_diff(&id)
                    .unwrap()
                    < 1e-15
            );
            assert!(
                kraus_completeness(&collapse_kraus(theta, av))
                    .max_abs_diff(&id)
                    .unwrap()
                    < 1e-15
            );
        }
    }

    #[test]
    fn dephasing_leaves_populations_of_next_cycle_unchanged() {
        // the literal recursion projects the B↔{H,V} coherences away on the next cycle anyway
        let theta = t(0.21);
        let av = a(0.4);
        let mut raw = *initial_state().matrix();
        let mut rho = initial_state();
        for _ in 0..40 {
            raw = apply_kraus(&coherent_kraus(theta, av), &raw);
            rho = step_coherent(&rho, theta, av);
            for l in BasisLabel::ALL {
                let i = l.index();
                assert!((raw[(i, i)].re - rho.population(l)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn absent_reaches_v() {
        for n in [1, 2, 10, 99] {
            let (p, _) = evolve(&CycleConfig::auto(ParticleModel::Absent, 0.7, n).unwrap());
            assert!(
                p.max_abs_diff(&Probabilities {
                    p_h: 0.0,
                    p_v: 1.0,
                    p_b: 0.0
                }) < 1e-10
            );
        }
    }

    #[test]
    fn twenty_four_cycle_explosion_probability() {
        let (p, _) = evolve(&CycleConfig::auto(ParticleModel::Coherent, 1.0, 24).unwrap());
        let closed = 1.0 - (PI / 48.0).cos().powi(48);
        assert!((p.p_b - closed).abs() < 1e-12);
        assert!((p.p_b - 0.0978).abs() < 5e-5, "{}", p.p_b);
        assert!(p.p_b < 0.10);
    }

    #[test]
    fn perfect_absorber_survival_law() {
        for n in [1_u32, 3, 24, 100, 250] {
            let (p, _) = evolve(&CycleConfig::auto(ParticleModel::Coherent, 1.0, n).unwrap());
            let theta = PI / (2.0 * f64::from(n));
            let survive = theta.cos().powi(2 * n as i32);
            assert!((p.p_h - survive).abs() <= 1e-12);
            assert!(p.p_v.abs() <= 1e-12);
            assert!((p.p_b - (1.0 - survive)).abs() <= 1e-12);
        }
    }

    #[test]
    fn probabilities_cases() {
        let mixed = DensityMatrix::new(SquareMatrix::diagonal(&[0.5, 0.0, 0.5]).unwrap()).unwrap();
        assert_eq!(
            probabilities(&mixed),
            Probabilities {
                p_h: 0.5,
                p_v: 0.0,
                p_b: 0.5
            }
        );
    }

    #[test]
    fn closed_form_cases() {
        let zero = closed_form_no_particle(t(0.3), 0);
        assert_eq!(
            zero,
            Probabilities {
                p_h: 1.0,
                p_v: 0.0,
                p_b: 0.0
            }
        );
        let p = closed_form_no_particle(Angle::switching(17).unwrap(), 17);
        assert!(p.p_h < 1e-30 && (p.p_v - 1.0).abs() < 1e-15);

        assert_eq!(
            closed_form_perfect_absorber(t(0.3), 0),
            Probabilities {
                p_h: 1.0,
                p_v: 0.0,
                p_b: 0.0
            }
        );
        let p = closed_form_perfect_absorber(Angle::switching(24).unwrap(), 24);
        assert!((p.p_b - 0.0978).abs() < 5e-5);

        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..30 {
            let theta = t(rng.random_range(-2.0..2.0));
            let n = rng.random_range(1..200);
            let cfg = CycleConfig::new(
                ThetaMode::Explicit(theta),
                AbsorptionProbability::ONE,
                n,
                ParticleModel::Absent,
            )
            .unwrap();
            assert!(
                evolve(&cfg)
                    .0
                    .max_abs_diff(&closed_form_no_particle(theta, n.into()))
                    < 1e-10
            );
            let cfg = CycleConfig::new(
                ThetaMode::Explicit(theta),
                AbsorptionProbability::ONE,
                n,
                ParticleModel::Coherent,
            )
            .unwrap();
            assert!(
                evolve(&cfg)
                    .0
                    .max_abs_diff(&closed_form_perfect_absorber(theta, n.into()))
                    < 1e-12
            );
        }
    }

    #[test]
    fn right_angle_with_particle_explodes_at_rate_a() {
        let theta = t(PI / 2.0);
        let cfg = CycleConfig::new(
            ThetaMode::Explicit(theta),
            a(0.3),
            1,
            ParticleModel::Coherent,
        )
        .unwrap();
        let (p, _) = evolve(&cfg);
        assert!((p.p_b - 0.3).abs() < 1e-15 && (p.p_v - 0.7).abs() < 1e-15);
    }

    #[test]
    fn config_validation() {
        assert!(CycleConfig::auto(ParticleModel::Coherent, 0.5, 0).is_err());
        assert!(CycleConfig::auto(ParticleModel::Coherent, 1.2, 3).is_err());
        assert_eq!(
            "collapse".parse::<ParticleModel>().unwrap(),
            ParticleModel::Collapse
        );
        assert!("bomb".parse::<ParticleModel>().is_err());
        assert_eq!("auto".parse::<ThetaMode>().unwrap(), ThetaMode::Auto);
        assert_eq!(
            "0.25".parse::<ThetaMode>().unwrap(),
            ThetaMode::Explicit(t(0.25))
        );
        assert!("nan".parse::<ThetaMode>().is_err());
        assert!("quarter".parse::<ThetaMode>().is_err());
    }

    #[test]
    fn clamping_only_touches_dust() {
        let p = Probabilities {
            p_h: -1e-13,
            p_v: 0.5,
            p_b: -1e-3,
        };
        let c = p.clamped();
        assert_eq!(c.p_h, 0.0);
        assert_eq!(c.p_b, -1e-3);
    }

    #[test]
    fn history_ends_at_evolve() {
        let cfg = CycleConfig::auto(ParticleModel::Collapse, 0.4, 12).unwrap();
        let hist = evolve_history(&cfg);
        assert_eq!(hist.len(), 12);
        assert_eq!(*hist.last().unwrap(), evolve(&cfg).1);
        for w in hist.windows(2) {
            assert!(w[1].population(BasisLabel::B) >= w[0].population(BasisLabel::B) - 1e-13);
        }
    }
}

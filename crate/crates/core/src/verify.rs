//! Self-check suite run by the `verify` subcommand.
//!
//! Every check builds its channels from an [`OperatorSet`], so a deliberately
//! broken operator can be injected to confirm the suite notices.

use std::fmt;
use std::io::{self, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::evolution::{
    apply_kraus, closed_form_no_particle, closed_form_perfect_absorber, coherent_kraus_from,
    collapse_kraus, dephase, evolve, kraus_completeness, step_coherent, CycleConfig, DensityMatrix,
    ParticleModel, Probabilities, ThetaMode,
};
use crate::matrix::{Dim, SquareMatrix};
use crate::operators::{
    absorption, rotator2, rotator3, rotator_eigen, rotator_power, AbsorptionProbability, Angle,
    BasisLabel,
};
use crate::oracle::{compare, estimate, TrajectoryConfig, Z_THRESHOLD};
use crate::par::{self, Execution};
use crate::sweep::absorption_grid;
use crate::{HERMITIAN_TOL, PSD_TOL};

const RANDOM_STATES: usize = 1000;
const SUITE_SEED: u64 = 0x5eed_0f1f;
const REDUCED_ORACLE_TRAJECTORIES: u64 = 100_000;

/// The operator constructors the checks are built from.
#[derive(Clone, Copy)]
pub struct OperatorSet {
    pub absorption: fn(AbsorptionProbability) -> SquareMatrix,
    pub switching_angle: fn(u32) -> Angle,
}

impl Default for OperatorSet {
    fn default() -> Self {
        Self {
            absorption,
            switching_angle: |n| Angle::switching(n).expect("n >= 1"),
        }
    }
}

impl OperatorSet {
    fn step(
        &self,
        model: ParticleModel,
        rho: &SquareMatrix,
        theta: Angle,
        a: AbsorptionProbability,
    ) -> SquareMatrix {
        match model {
            ParticleModel::Coherent => dephase(&apply_kraus(
                &coherent_kraus_from(&rotator3(theta), &(self.absorption)(a)),
                rho,
            )),
            ParticleModel::Absent => self.step(
                ParticleModel::Coherent,
                rho,
                theta,
                AbsorptionProbability::ZERO,
            ),
            ParticleModel::Collapse => apply_kraus(&collapse_kraus(theta, a), rho),
        }
    }

    fn evolve(
        &self,
        model: ParticleModel,
        theta: Angle,
        a: AbsorptionProbability,
        n: u32,
    ) -> Probabilities {
        let mut rho = *DensityMatrix::basis(BasisLabel::H).matrix();
        for _ in 0..n {
            rho = self.step(model, &rho, theta, a);
        }
        Probabilities {
            p_h: rho[(0, 0)].re,
            p_v: rho[(1, 1)].re,
            p_b: rho[(2, 2)].re,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn write<W: Write>(&self, out: &mut W) -> io::Result<()> {
        for c in &self.checks {
            writeln!(out, "{c}")?;
        }
        let failed = self.failures().count();
        writeln!(
            out,
            "{} checks, {} passed, {} failed",
            self.checks.len(),
            self.checks.len() - failed,
            failed
        )
    }
}

fn check(name: &'static str, passed: bool, detail: String) -> CheckResult {
    CheckResult {
        name,
        passed,
        detail,
    }
}

pub fn verify() -> VerifyReport {
    verify_with(&OperatorSet::default())
}

pub fn verify_with(ops: &OperatorSet) -> VerifyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED);
    let states: Vec<(DensityMatrix, Angle, AbsorptionProbability)> = (0..RANDOM_STATES)
        .map(|_| {
            use rand::Rng;
            let rho = DensityMatrix::random(&mut rng);
            let theta = Angle::new(rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
                .expect("finite");
            let a = AbsorptionProbability::new(rng.random_range(0.0..=1.0)).expect("in range");
            (rho, theta, a)
        })
        .collect();

    let checks = vec![
        unitarity(ops),
        trace_preservation(ops, &states),
        hermitian_psd(ops, &states),
        absorbed_fixed_point(ops),
        b_population_monotone(ops, &states),
        step_consistency(ops, &states),
        v_switching(ops),
        limiting_cases(ops),
        model_equivalence(ops, &states),
        rotator_closed_form(),
        absorption_monotonicity(ops),
        reduced_oracle(),
    ];
    VerifyReport { checks }
}

fn unitarity(ops: &OperatorSet) -> CheckResult {
    let id = SquareMatrix::identity(Dim::Three);
    let mut worst = 0.0_f64;
    for k in 0..=100 {
        let a = AbsorptionProbability::new(k as f64 / 100.0).expect("grid");
        let theta = Angle::new(0.0628 * k as f64).expect("grid");
        for u in [(ops.absorption)(a), rotator3(theta)] {
            worst = worst.max((u * u.dagger()).max_abs_diff(&id).expect("3×3"));
        }
    }
    check(
        "unitarity",
        worst <= 1e-13,
        format!("max |U·U† − I| = {worst:.3e}"),
    )
}

fn trace_preservation(
    ops: &OperatorSet,
    states: &[(DensityMatrix, Angle, AbsorptionProbability)],
) -> CheckResult {
    let id = SquareMatrix::identity(Dim::Three);
    let mut worst = 0.0_f64;
    for (rho, theta, a) in states {
        let m = rho.matrix();
        let ab = (ops.absorption)(*a);
        let u = rotator3(*theta);
        // bare absorber and each full cycle
        let outputs = [
            ab.conjugate(m).expect("3×3"),
            ops.step(ParticleModel::Coherent, m, *theta, *a),
            ops.step(ParticleModel::Collapse, m, *theta, *a),
        ];
        for out in outputs {
            worst = worst.max((out.trace() - m.trace()).norm());
        }
        for ks in [
            kraus_completeness(&coherent_kraus_from(&u, &ab)),
            kraus_completeness(&collapse_kraus(*theta, *a)),
        ] {
            worst = worst.max(ks.max_abs_diff(&id).expect("3×3"));
        }
        worst = worst.max((ab.dagger() * ab).max_abs_diff(&id).expect("3×3"));
    }
    check(
        "trace-preservation",
        worst <= 1e-13,
        format!("max trace drift over {} states = {worst:.3e}", states.len()),
    )
}

fn hermitian_psd(
    ops: &OperatorSet,
    states: &[(DensityMatrix, Angle, AbsorptionProbability)],
) -> CheckResult {
    let mut bad = 0;
    for (rho, theta, a) in states {
        for model in [ParticleModel::Coherent, ParticleModel::Collapse] {
            let out = ops.step(model, rho.matrix(), *theta, *a);
            let ok = out.is_hermitian(HERMITIAN_TOL) && out.is_psd(PSD_TOL).unwrap_or(false);
            if !ok {
                bad += 1;
            }
        }
    }
    check(
        "hermitian-psd",
        bad == 0,
        format!("{bad} of {} outputs invalid", 2 * states.len()),
    )
}

fn absorbed_fixed_point(ops: &OperatorSet) -> CheckResult {
    let b = *DensityMatrix::basis(BasisLabel::B).matrix();
    let mut exact = true;
    for k in 0..=20 {
        let a = AbsorptionProbability::new(k as f64 / 20.0).expect("grid");
        let theta = Angle::new(-3.0 + 0.3 * k as f64).expect("grid");
        for model in [ParticleModel::Coherent, ParticleModel::Collapse] {
            exact &= ops.step(model, &b, theta, a) == b;
        }
    }
    check(
        "absorbed-fixed-point",
        exact,
        "|B⟩⟨B| invariant under both cycles".into(),
    )
}

fn b_population_monotone(
    ops: &OperatorSet,
    states: &[(DensityMatrix, Angle, AbsorptionProbability)],
) -> CheckResult {
    let mut worst = 0.0_f64;
    for (rho, theta, a) in states {
        for model in [ParticleModel::Coherent, ParticleModel::Collapse] {
            let out = ops.step(model, rho.matrix(), *theta, *a);
            worst = worst.max(rho.matrix()[(2, 2)].re - out[(2, 2)].re);
        }
    }
    check(
        "absorption-irreversible",
        worst <= 1e-13,
        format!(
            "largest decrease of the B population = {:.3e}",
            worst.max(0.0)
        ),
    )
}

fn step_consistency(
    ops: &OperatorSet,
    states: &[(DensityMatrix, Angle, AbsorptionProbability)],
) -> CheckResult {
    let worst = states
        .iter()
        .map(|(rho, theta, a)| {
            let lib = step_coherent(rho, *theta, *a);
            ops.step(ParticleModel::Coherent, rho.matrix(), *theta, *a)
                .max_abs_diff(lib.matrix())
                .expect("3×3")
        })
        .fold(0.0, f64::max);
    check(
        "step-consistency",
        worst <= 1e-14,
        format!("max deviation from the library cycle = {worst:.3e}"),
    )
}

fn v_switching(ops: &OperatorSet) -> CheckResult {
    let cycles: Vec<u32> = (1..=500).collect();
    let worst = par::map(Execution::default(), &cycles, |&n| {
        let p = ops.evolve(
            ParticleModel::Absent,
            (ops.switching_angle)(n),
            AbsorptionProbability::ZERO,
            n,
        );
        1.0 - p.p_v
    })
    .into_iter()
    .fold(0.0, f64::max);
    check(
        "v-switching",
        worst <= 1e-10,
        format!("max 1 − p_v over N = 1..500 = {worst:.3e}"),
    )
}

fn limiting_cases(ops: &OperatorSet) -> CheckResult {
    let cycles: Vec<u32> = (1..=250).collect();
    let worst = par::map(Execution::default(), &cycles, |&n| {
        let theta = (ops.switching_angle)(n);
        let none = ops.evolve(
            ParticleModel::Coherent,
            theta,
            AbsorptionProbability::ZERO,
            n,
        );
        let full = ops.evolve(
            ParticleModel::Coherent,
            theta,
            AbsorptionProbability::ONE,
            n,
        );
        none.max_abs_diff(&closed_form_no_particle(theta, n.into()))
            .max(full.max_abs_diff(&closed_form_perfect_absorber(theta, n.into())))
    })
    .into_iter()
    .fold(0.0, f64::max);
    check(
        "limiting-cases",
        worst <= 1e-10,
        format!("max closed-form deviation at A ∈ {{0, 1}}, N = 1..250 = {worst:.3e}"),
    )
}

fn model_equivalence(
    ops: &OperatorSet,
    states: &[(DensityMatrix, Angle, AbsorptionProbability)],
) -> CheckResult {
    let mut worst = 0.0_f64;
    for (rho, theta, _) in states.iter().take(100) {
        for a in [AbsorptionProbability::ZERO, AbsorptionProbability::ONE] {
            let coh = ops.step(ParticleModel::Coherent, rho.matrix(), *theta, a);
            let col = ops.step(ParticleModel::Collapse, rho.matrix(), *theta, a);
            worst = worst.max(coh.max_abs_diff(&col).expect("3×3"));
        }
    }
    check(
        "model-equivalence",
        worst <= 1e-12,
        format!("max |coherent − collapse| at A ∈ {{0, 1}} = {worst:.3e}"),
    )
}

fn rotator_closed_form() -> CheckResult {
    let mut power_err = 0.0_f64;
    let mut eig_err = 0.0_f64;
    for k in 0..10 {
        let theta = Angle::new(0.05 + 0.6 * k as f64).expect("grid");
        let step = rotator2(theta);
        let mut acc = SquareMatrix::identity(Dim::Two);
        for n in 1..=2000_u64 {
            acc = acc * step;
            if n % 100 == 0 {
                power_err = power_err.max(rotator_power(theta, n).max_abs_diff(&acc).expect("2×2"));
            }
        }
        eig_err = eig_err.max(
            rotator_eigen(theta)
                .reconstruct()
                .max_abs_diff(&step)
                .expect("2×2"),
        );
    }
    check(
        "rotator-closed-form",
        power_err <= 1e-10 && eig_err <= 1e-13,
        format!("power error = {power_err:.3e}, eigen reconstruction error = {eig_err:.3e}"),
    )
}

fn absorption_monotonicity(ops: &OperatorSet) -> CheckResult {
    let grid = absorption_grid(21).expect("21 steps");
    let mut worst = 0.0_f64;
    for n in [10_u32, 50, 250] {
        let theta = (ops.switching_angle)(n);
        let p_h = par::map(Execution::default(), &grid, |&a| {
            ops.evolve(
                ParticleModel::Coherent,
                theta,
                AbsorptionProbability::new(a).expect("grid"),
                n,
            )
            .p_h
        });
        for w in p_h.windows(2) {
            worst = worst.max(w[0] - w[1]);
        }
    }
    check(
        "absorption-monotonicity",
        worst <= 1e-12,
        format!("largest decrease of p_h along A = {:.3e}", worst.max(0.0)),
    )
}

fn reduced_oracle() -> CheckResult {
    let mut worst = 0.0_f64;
    for model in [ParticleModel::Coherent, ParticleModel::Collapse] {
        for a in [0.25, 0.75] {
            for n in [1_u32, 10] {
                let cycle = CycleConfig::new(
                    ThetaMode::Auto,
                    AbsorptionProbability::new(a).expect("grid"),
                    n,
                    model,
                )
                .expect("valid");
                let tc = TrajectoryConfig::new(cycle, REDUCED_ORACLE_TRAJECTORIES, SUITE_SEED)
                    .expect("valid");
                worst = worst.max(compare(&estimate(&tc), &evolve(&cycle).0).max_abs());
            }
        }
    }
    check(
        "oracle-concordance",
        worst <= Z_THRESHOLD,
        format!("max |z| over 8 cells at M = {REDUCED_ORACLE_TRAJECTORIES} = {worst:.3}"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::SquareMatrix;

    fn flipped_emission(a: AbsorptionProbability) -> SquareMatrix {
        let keep = (1.0 - a.value()).sqrt();
        let take = a.value().sqrt();
        SquareMatrix::from_real_rows(&[[1.0, 0.0, 0.0], [0.0, keep, take], [0.0, take, keep]])
            .unwrap()
    }

    fn failed(report: &VerifyReport) -> Vec<&'static str> {
        report.failures().map(|c| c.name).collect()
    }

    #[test]
    fn fresh_build_passes() {
        let report = verify();
        assert!(report.passed(), "{:?}", failed(&report));
    }

    #[test]
    fn flipped_emission_sign_breaks_trace_preservation() {
        let ops = OperatorSet {
            absorption: flipped_emission,
            ..OperatorSet::default()
        };
        let report = verify_with(&ops);
        assert!(!report.passed());
        assert!(failed(&report).contains(&"trace-preservation"));
    }

    #[test]
    fn wrong_switching_angle_breaks_v_switching() {
        let ops = OperatorSet {
            switching_angle: |n| Angle::new(std::f64::consts::PI / f64::from(n)).unwrap(),
            ..OperatorSet::default()
        };
        let report = verify_with(&ops);
        assert!(failed(&report).contains(&"v-switching"));
    }

    #[test]
    fn report_is_deterministic() {
        let mut first = Vec::new();
        let mut second = Vec::new();
        verify().write(&mut first).unwrap();
        verify().write(&mut second).unwrap();
        assert_eq!(first, second);
    }
}

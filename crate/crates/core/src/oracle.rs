//! Monte Carlo unraveling of both cycle models into single-photon trajectories.
//!
//! Each trajectory follows a pure state through the interferometer, sampling
//! every measurement by the Born rule. Trajectory `i` draws from ChaCha8
//! stream `i` under the run seed, so an estimate depends only on
//! `(seed, trajectories, config)` and not on thread count or scheduling.
//!
//! All operators involved are real, so amplitudes are kept as `f64`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::evolution::{CycleConfig, ParticleModel, Probabilities};
use crate::operators::BasisLabel;
use crate::par::{self, Execution};

/// z-score bound for agreement between an estimate and the exact result.
pub const Z_THRESHOLD: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryConfig {
    pub cycle: CycleConfig,
    pub trajectories: u64,
    pub seed: u64,
}

impl TrajectoryConfig {
    pub fn new(cycle: CycleConfig, trajectories: u64, seed: u64) -> Result<Self> {
        if trajectories == 0 {
            return Err(Error::Usage("trajectory count must be at least 1".into()));
        }
        Ok(Self {
            cycle,
            trajectories,
            seed,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OutcomeCounts {
    pub n_h: u64,
    pub n_v: u64,
    pub n_b: u64,
}

impl OutcomeCounts {
    pub fn get(&self, label: BasisLabel) -> u64 {
        match label {
            BasisLabel::H => self.n_h,
            BasisLabel::V => self.n_v,
            BasisLabel::B => self.n_b,
        }
    }

    pub fn total(&self) -> u64 {
        self.n_h + self.n_v + self.n_b
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutcomeEstimate {
    pub counts: OutcomeCounts,
    pub trajectories: u64,
    pub p_hat: Probabilities,
    /// Binomial standard error √(p̂(1−p̂)/M) per outcome.
    pub stderr: Probabilities,
}

impl OutcomeEstimate {
    pub fn from_counts(counts: OutcomeCounts) -> Self {
        let m = counts.total();
        let mf = m as f64;
        let p = |k: u64| k as f64 / mf;
        let p_hat = Probabilities {
            p_h: p(counts.n_h),
            p_v: p(counts.n_v),
            p_b: p(counts.n_b),
        };
        let se = |q: f64| (q * (1.0 - q) / mf).sqrt();
        let stderr = Probabilities {
            p_h: se(p_hat.p_h),
            p_v: se(p_hat.p_v),
            p_b: se(p_hat.p_b),
        };
        Self {
            counts,
            trajectories: m,
            p_hat,
            stderr,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZScores {
    pub z_h: f64,
    pub z_v: f64,
    pub z_b: f64,
}

impl ZScores {
    pub fn get(&self, label: BasisLabel) -> f64 {
        match label {
            BasisLabel::H => self.z_h,
            BasisLabel::V => self.z_v,
            BasisLabel::B => self.z_b,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.z_h.abs().max(self.z_v.abs()).max(self.z_b.abs())
    }
}

/// Independent random stream for trajectory `index` under `seed`.
pub fn trajectory_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Samples where one photon ends up after `cycle.cycles()` passes.
pub fn sample_trajectory<R: Rng + ?Sized>(cycle: &CycleConfig, rng: &mut R) -> BasisLabel {
    let (s, c) = cycle.theta().radians().sin_cos();
    let a = cycle.effective_absorption().value();
    let keep = (1.0 - a).sqrt();

    // surviving amplitudes on H and V, always unit norm
    let (mut h, mut v) = (1.0_f64, 0.0_f64);
    for _ in 0..cycle.cycles() {
        let (rh, rv) = (c * h - s * v, s * h + c * v);
        match cycle.model() {
            ParticleModel::Coherent | ParticleModel::Absent => {
                // Ab sends √A·rv into |B⟩; then the {B, B̄} measurement
                let p_absorb = a * rv * rv;
                if rng.random::<f64>() < p_absorb {
                    return BasisLabel::B;
                }
                let norm = (1.0 - p_absorb).sqrt();
                h = rh / norm;
                v = keep * rv / norm;
            }
            ParticleModel::Collapse => {
                if rng.random::<f64>() < a {
                    // the particle looks: photon found in the H arm or absorbed
                    if rng.random::<f64>() < rh * rh {
                        h = 1.0;
                        v = 0.0;
                    } else {
                        return BasisLabel::B;
                    }
                } else {
                    h = rh;
                    v = rv;
                }
            }
        }
        debug_assert!((h * h + v * v - 1.0).abs() < 1e-12);
    }
    if rng.random::<f64>() < h * h {
        BasisLabel::H
    } else {
        BasisLabel::V
    }
}

pub fn estimate(config: &TrajectoryConfig) -> OutcomeEstimate {
    estimate_with(config, Execution::default())
}

pub fn estimate_with(config: &TrajectoryConfig, exec: Execution) -> OutcomeEstimate {
    let cycle = config.cycle;
    let seed = config.seed;
    let tally: [u64; 3] = par::tally(exec, config.trajectories, |i| {
        sample_trajectory(&cycle, &mut trajectory_rng(seed, i)).index()
    });
    OutcomeEstimate::from_counts(OutcomeCounts {
        n_h: tally[0],
        n_v: tally[1],
        n_b: tally[2],
    })
}

/// Per-outcome (p̂ − p)/σ with σ floored at 1/(2M).
pub fn compare(est: &OutcomeEstimate, exact: &Probabilities) -> ZScores {
    let floor = 1.0 / (2.0 * est.trajectories as f64);
    let z = |l: BasisLabel| (est.p_hat.get(l) - exact.get(l)) / est.stderr.get(l).max(floor);
    ZScores {
        z_h: z(BasisLabel::H),
        z_v: z(BasisLabel::V),
        z_b: z(BasisLabel::B),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::{evolve, ThetaMode};
    use crate::operators::{AbsorptionProbability, Angle};
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn no_particle_always_switches() {
        for n in [1, 7, 50] {
            let cfg = CycleConfig::auto(ParticleModel::Coherent, 0.0, n).unwrap();
            let mut rng = trajectory_rng(9, 0);
            for _ in 0..1000 {
                assert_eq!(sample_trajectory(&cfg, &mut rng), BasisLabel::V);
            }
        }
    }

    #[test]
    fn right_angle_perfect_absorber_always_explodes() {
        for model in [ParticleModel::Coherent, ParticleModel::Collapse] {
            let cfg = CycleConfig::new(
                ThetaMode::Explicit(Angle::new(FRAC_PI_2).unwrap()),
                AbsorptionProbability::ONE,
                1,
                model,
            )
            .unwrap();
            let mut rng = trajectory_rng(3, 0);
            for _ in 0..1000 {
                assert_eq!(sample_trajectory(&cfg, &mut rng), BasisLabel::B);
            }
        }
    }

    #[test]
    fn single_trajectory_counts_one() {
        let cfg = CycleConfig::auto(ParticleModel::Collapse, 0.5, 10).unwrap();
        let est = estimate(&TrajectoryConfig::new(cfg, 1, 77).unwrap());
        assert_eq!(est.counts.total(), 1);
        assert_eq!(est.trajectories, 1);
    }

    #[test]
    fn estimates_are_reproducible_and_schedule_independent() {
        let cfg = CycleConfig::auto(ParticleModel::Coherent, 0.5, 20).unwrap();
        let tc = TrajectoryConfig::new(cfg, 20_000, 1234).unwrap();
        let first = estimate_with(&tc, Execution::Parallel);
        assert_eq!(first, estimate_with(&tc, Execution::Parallel));
        assert_eq!(first, estimate_with(&tc, Execution::Sequential));
        let other = estimate(&TrajectoryConfig::new(cfg, 20_000, 1235).unwrap());
        assert_ne!(first.counts, other.counts);
    }

    #[test]
    fn estimate_fields_are_consistent() {
        let counts = OutcomeCounts {
            n_h: 25,
            n_v: 25,
            n_b: 50,
        };
        let est = OutcomeEstimate::from_counts(counts);
        assert_eq!(est.p_hat.p_b, 0.5);
        assert_eq!(est.p_hat.p_h, 0.25);
        assert!((est.stderr.p_b - 0.05).abs() < 1e-15);
    }

    #[test]
    fn compare_cases() {
        let est = OutcomeEstimate::from_counts(OutcomeCounts {
            n_h: 50,
            n_v: 50,
            n_b: 0,
        });
        let z = compare(&est, &est.p_hat);
        assert_eq!(z.max_abs(), 0.0);
        let exact = Probabilities {
            p_h: 0.5,
            p_v: 0.5,
            p_b: 0.0,
        };
        assert_eq!(compare(&est, &exact).max_abs(), 0.0);
        // floored σ at p̂ = 0: (0 − 0.01)/(1/200) = −2
        let exact = Probabilities {
            p_h: 0.49,
            p_v: 0.5,
            p_b: 0.01,
        };
        assert!((compare(&est, &exact).z_b + 2.0).abs() < 1e-12);
    }

    #[test]
    fn moderate_sample_matches_density_matrix() {
        for model in [ParticleModel::Coherent, ParticleModel::Collapse] {
            let cfg = CycleConfig::auto(model, 0.5, 10).unwrap();
            let est = estimate(&TrajectoryConfig::new(cfg, 100_000, 5).unwrap());
            let z = compare(&est, &evolve(&cfg).0);
            assert!(z.max_abs() <= Z_THRESHOLD, "{model}: {z:?}");
        }
    }

    #[test]
    fn zero_trajectories_rejected() {
        let cfg = CycleConfig::auto(ParticleModel::Coherent, 0.5, 10).unwrap();
        assert!(TrajectoryConfig::new(cfg, 0, 1).is_err());
    }
}

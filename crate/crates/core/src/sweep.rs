//! Parameter sweeps over cycle count and absorption probability, and the CSV
//! table format they are written in.
//!
//! Records are always emitted sorted by `(a, n)`, whatever order the cells
//! were computed in.

use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::evolution::{evolve, CycleConfig, ParticleModel, ThetaMode};
use crate::operators::{AbsorptionProbability, BasisLabel};
use crate::oracle::{OutcomeEstimate, TrajectoryConfig, ZScores};
use crate::par::{self, Execution};

pub const CSV_HEADER: &str = "model,a,n,theta,p_h,p_v,p_b";
pub const ORACLE_CSV_HEADER: &str =
    "model,a,n,theta,trajectories,seed,outcome,count,p_hat,stderr,p_exact,z";

/// Default cycle range for cycle sweeps and the grid (N = 1..250).
pub const DEFAULT_MAX_CYCLES: u32 = 250;
/// Default absorption values for `sweep-cycles`.
pub const DEFAULT_CYCLE_SWEEP_ABSORPTIONS: [f64; 2] = [0.0, 1.0];
/// Default cycle counts for `sweep-absorption`.
pub const DEFAULT_ABSORPTION_SWEEP_CYCLES: [u32; 3] = [10, 50, 250];
pub const DEFAULT_ABSORPTION_STEPS: usize = 101;
pub const DEFAULT_GRID_ABSORPTION_STEPS: usize = 21;

/// One output row.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRecord {
    pub model: ParticleModel,
    pub a: f64,
    pub n: u32,
    pub theta: f64,
    pub p_h: f64,
    pub p_v: f64,
    pub p_b: f64,
}

impl SweepRecord {
    pub fn write_csv_row<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            self.model,
            format_real(self.a),
            self.n,
            format_real(self.theta),
            format_real(self.p_h),
            format_real(self.p_v),
            format_real(self.p_b)
        )
    }
}

/// Which axis a sweep varies.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepSpec {
    /// N = 1..=n_max at each listed absorption probability.
    Cycles { absorptions: Vec<f64>, n_max: u32 },
    /// A on `steps` equally spaced points of [0, 1] at each listed N.
    Absorption { cycles: Vec<u32>, steps: usize },
    /// Full (A, N) product for heat-map style plots.
    Grid { n_max: u32, a_steps: usize },
}

impl SweepSpec {
    /// Every (a, n) cell in emission order.
    pub fn cells(&self) -> Result<Vec<(f64, u32)>> {
        let mut cells = match self {
            SweepSpec::Cycles { absorptions, n_max } => {
                check_n_max(*n_max)?;
                if absorptions.is_empty() {
                    return Err(Error::Usage("no absorption values given".into()));
                }
                for &a in absorptions {
                    AbsorptionProbability::new(a)?;
                }
                absorptions
                    .iter()
                    .flat_map(|&a| (1..=*n_max).map(move |n| (a, n)))
                    .collect::<Vec<_>>()
            }
            SweepSpec::Absorption { cycles, steps } => {
                let grid = absorption_grid(*steps)?;
                if cycles.is_empty() || cycles.contains(&0) {
                    return Err(Error::Usage(
                        "cycle counts must be non-empty and ≥ 1".into(),
                    ));
                }
                grid.iter()
                    .flat_map(|&a| cycles.iter().map(move |&n| (a, n)))
                    .collect()
            }
            SweepSpec::Grid { n_max, a_steps } => {
                check_n_max(*n_max)?;
                let grid = absorption_grid(*a_steps)?;
                grid.iter()
                    .flat_map(|&a| (1..=*n_max).map(move |n| (a, n)))
                    .collect()
            }
        };
        cells.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
        cells.dedup();
        Ok(cells)
    }
}

fn check_n_max(n_max: u32) -> Result<()> {
    if n_max == 0 {
        return Err(Error::Usage(
            "maximum cycle count must be at least 1".into(),
        ));
    }
    Ok(())
}

/// `steps` equally spaced points from 0 to 1, both endpoints exact.
pub fn absorption_grid(steps: usize) -> Result<Vec<f64>> {
    if steps < 2 {
        return Err(Error::Usage(
            "absorption grid needs at least 2 steps".into(),
        ));
    }
    let last = (steps - 1) as f64;
    Ok((0..steps).map(|k| k as f64 / last).collect())
}

pub fn run_single(config: &CycleConfig) -> Result<SweepRecord> {
    let (p, _) = evolve(config);
    if !p.is_valid() {
        return Err(Error::InvalidState(format!(
            "output probabilities {p:?} violate normalization"
        )));
    }
    let p = p.clamped();
    Ok(SweepRecord {
        model: config.model(),
        a: config.absorption().value(),
        n: config.cycles(),
        theta: config.theta().radians(),
        p_h: p.p_h,
        p_v: p.p_v,
        p_b: p.p_b,
    })
}

/// Evaluates every cell of `spec`.
pub fn run_sweep(
    spec: &SweepSpec,
    model: ParticleModel,
    theta: ThetaMode,
    exec: Execution,
) -> Result<Vec<SweepRecord>> {
    let cells = spec.cells()?;
    let configs = cells
        .iter()
        .map(|&(a, n)| CycleConfig::new(theta, AbsorptionProbability::new(a)?, n, model))
        .collect::<Result<Vec<_>>>()?;
    par::map(exec, &configs, run_single).into_iter().collect()
}

pub fn sweep_cycles(a: f64, n_max: u32, model: ParticleModel) -> Result<Vec<SweepRecord>> {
    let spec = SweepSpec::Cycles {
        absorptions: vec![a],
        n_max,
    };
    run_sweep(&spec, model, ThetaMode::Auto, Execution::default())
}

pub fn sweep_absorption(n: u32, steps: usize, model: ParticleModel) -> Result<Vec<SweepRecord>> {
    let spec = SweepSpec::Absorption {
        cycles: vec![n],
        steps,
    };
    run_sweep(&spec, model, ThetaMode::Auto, Execution::default())
}

pub fn sweep_grid(n_max: u32, a_steps: usize, model: ParticleModel) -> Result<Vec<SweepRecord>> {
    let spec = SweepSpec::Grid { n_max, a_steps };
    run_sweep(&spec, model, ThetaMode::Auto, Execution::default())
}

pub fn write_csv<W: Write>(records: &[SweepRecord], out: &mut W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in records {
        r.write_csv_row(out)?;
    }
    Ok(())
}

pub fn to_csv_string(records: &[SweepRecord]) -> String {
    let mut buf = Vec::new();
    write_csv(records, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("CSV is ASCII")
}

/// Three rows (h, v, b) comparing a trajectory estimate with the exact result.
pub fn write_oracle_csv<W: Write>(
    config: &TrajectoryConfig,
    est: &OutcomeEstimate,
    exact: &crate::evolution::Probabilities,
    z: &ZScores,
    out: &mut W,
) -> io::Result<()> {
    writeln!(out, "{ORACLE_CSV_HEADER}")?;
    let cycle = &config.cycle;
    for label in BasisLabel::ALL {
        let outcome = match label {
            BasisLabel::H => "h",
            BasisLabel::V => "v",
            BasisLabel::B => "b",
        };
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            cycle.model(),
            format_real(cycle.absorption().value()),
            cycle.cycles(),
            format_real(cycle.theta().radians()),
            config.trajectories,
            config.seed,
            outcome,
            est.counts.get(label),
            format_real(est.p_hat.get(label)),
            format_real(est.stderr.get(label)),
            format_real(exact.clamped().get(label)),
            format_real(z.get(label)),
        )?;
    }
    Ok(())
}

/// Renders a double with 17 significant digits.
///
/// Magnitudes in [1e-4, 1e17) and exact zero use positional notation with a
/// decimal point; everything else uses `d.dddddddddddddddde±x` notation. The
/// output parses back to the identical `f64`.
pub fn format_real(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return if x.is_sign_negative() {
            "-0.0000000000000000".into()
        } else {
            "0.0000000000000000".into()
        };
    }
    let sci = format!("{x:.16e}");
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..]
        .parse()
        .expect("integer exponent");
    if (-4..17).contains(&exp) {
        let decimals = (16 - exp).max(0) as usize;
        let mut s = format!("{x:.decimals$}");
        if !s.contains('.') {
            s.push_str(".0");
        }
        s
    } else {
        sci
    }
}

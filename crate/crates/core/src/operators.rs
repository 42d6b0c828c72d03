//! Operators of the interferometer: the polarization rotator, its spectral form,
//! the three-level rotator acting on {H, V, B}, the absorption unitary and the
//! measurement projectors.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::matrix::{ComplexScalar, Dim, SquareMatrix, StateVector};

/// Rotation angle in radians. Any finite value is accepted.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Angle(f64);

impl Angle {
    pub fn new(theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(Self(theta))
    }

    /// The switching angle π/(2N): N passes rotate |H⟩ fully onto |V⟩.
    pub fn switching(cycles: u32) -> Result<Self> {
        if cycles == 0 {
            return Err(Error::Usage("cycle count must be at least 1".into()));
        }
        Ok(Self(PI / (2.0 * f64::from(cycles))))
    }

    pub fn radians(self) -> f64 {
        self.0
    }
}

/// Probability that the particle absorbs a photon passing through its arm.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct AbsorptionProbability(f64);

impl AbsorptionProbability {
    pub const ZERO: Self = Self(0.0);
    pub const ONE: Self = Self(1.0);

    pub fn new(a: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&a) {
            return Err(Error::AbsorptionOutOfRange(a));
        }
        Ok(Self(a))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for AbsorptionProbability {
    type Error = Error;

    fn try_from(a: f64) -> Result<Self> {
        Self::new(a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisLabel {
    H,
    V,
    B,
}

impl BasisLabel {
    pub const ALL: [BasisLabel; 3] = [BasisLabel::H, BasisLabel::V, BasisLabel::B];

    pub fn index(self) -> usize {
        match self {
            BasisLabel::H => 0,
            BasisLabel::V => 1,
            BasisLabel::B => 2,
        }
    }

    pub fn ket(self) -> StateVector {
        StateVector::basis(Dim::Three, self.index())
    }
}

/// Subspaces with a projector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subspace {
    Basis(BasisLabel),
    /// Everything except |B⟩: the photon was not absorbed.
    NotB,
}

impl From<BasisLabel> for Subspace {
    fn from(label: BasisLabel) -> Self {
        Subspace::Basis(label)
    }
}

/// Eigen-pairs of the 2×2 rotator.
#[derive(Debug, Clone, Copy)]
pub struct EigenDecomposition2 {
    pub eigenvalues: [ComplexScalar; 2],
    pub eigenvectors: [StateVector; 2],
}

impl EigenDecomposition2 {
    /// Σ λᵢ |vᵢ⟩⟨vᵢ|.
    pub fn reconstruct(&self) -> SquareMatrix {
        self.eigenvalues
            .iter()
            .zip(&self.eigenvectors)
            .map(|(&l, v)| v.outer(v).expect("2×2 eigenvector").scale(l))
            .fold(SquareMatrix::zeros(Dim::Two), |acc, m| acc + m)
    }

    /// Σ λᵢⁿ |vᵢ⟩⟨vᵢ|.
    pub fn power(&self, n: u64) -> SquareMatrix {
        self.eigenvalues
            .iter()
            .zip(&self.eigenvectors)
            .map(|(&l, v)| v.outer(v).expect("2×2 eigenvector").scale(l.powu(n as u32)))
            .fold(SquareMatrix::zeros(Dim::Two), |acc, m| acc + m)
    }
}

/// ϑ(θ) = [[cos θ, −sin θ], [sin θ, cos θ]].
pub fn rotator2(theta: Angle) -> SquareMatrix {
    let (s, c) = theta.radians().sin_cos();
    SquareMatrix::real2([[c, -s], [s, c]])
}

/// Eigenvalue e^{−iθ} with eigenvector (1, i)/√2 and e^{+iθ} with (1, −i)/√2.
///
/// The first component of each eigenvector is real and positive.
pub fn rotator_eigen(theta: Angle) -> EigenDecomposition2 {
    let t = theta.radians();
    let r = FRAC_1_SQRT_2;
    let plus_i = StateVector::new(&[Complex64::new(r, 0.0), Complex64::new(0.0, r)])
        .expect("unit eigenvector");
    let minus_i = StateVector::new(&[Complex64::new(r, 0.0), Complex64::new(0.0, -r)])
        .expect("unit eigenvector");
    EigenDecomposition2 {
        eigenvalues: [
            Complex64::from_polar(1.0, -t),
            Complex64::from_polar(1.0, t),
        ],
        eigenvectors: [plus_i, minus_i],
    }
}

/// ϑⁿ = ϑ(nθ), evaluated in closed form with nθ reduced modulo 2π.
pub fn rotator_power(theta: Angle, n: u64) -> SquareMatrix {
    rotator2(Angle(reduced_multiple(theta.radians(), n)))
}

/// Low part of 2π: `TAU + TAU_LO` carries about 107 bits of 2π.
const TAU_LO: f64 = 2.4492935982947064e-16;

/// `n·theta` reduced into [−π, π].
///
/// The product is split exactly into `p + e` with an FMA and the turns are
/// removed against a two-word 2π, so the error stays near one ulp of π
/// instead of growing with `n`.
fn reduced_multiple(theta: f64, n: u64) -> f64 {
    let nf = n as f64;
    let p = nf * theta;
    let e = nf.mul_add(theta, -p);
    let k = (p / TAU).round();
    let r = (-k).mul_add(TAU, p);
    (-k).mul_add(TAU_LO, r) + e
}

/// U: ϑ(θ) on {H, V}, identity on |B⟩.
pub fn rotator3(theta: Angle) -> SquareMatrix {
    let (s, c) = theta.radians().sin_cos();
    SquareMatrix::real3([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
}

/// Ab: rotates amplitude √A from |V⟩ into |B⟩, with the matching −√A emission
/// term that keeps the matrix unitary.
pub fn absorption(a: AbsorptionProbability) -> SquareMatrix {
    let keep = (1.0 - a.value()).sqrt();
    let take = a.value().sqrt();
    SquareMatrix::real3([[1.0, 0.0, 0.0], [0.0, keep, -take], [0.0, take, keep]])
}

pub fn projector(subspace: impl Into<Subspace>) -> SquareMatrix {
    let diag = match subspace.into() {
        Subspace::Basis(BasisLabel::H) => [1.0, 0.0, 0.0],
        Subspace::Basis(BasisLabel::V) => [0.0, 1.0, 0.0],
        Subspace::Basis(BasisLabel::B) => [0.0, 0.0, 1.0],
        Subspace::NotB => [1.0, 1.0, 0.0],
    };
    SquareMatrix::real3([
        [diag[0], 0.0, 0.0],
        [0.0, diag[1], 0.0],
        [0.0, 0.0, diag[2]],
    ])
}

//! Dense complex linear algebra for the two fixed Hilbert-space sizes used here.
//!
//! Everything is stack allocated. A [`SquareMatrix`] is either 2×2 (polarization
//! only) or 3×3 (polarization plus the absorbed state); mixing the two is a
//! usage error.

use std::fmt;
use std::ops::{Add, Index, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexScalar = Complex64;

const ZERO: ComplexScalar = Complex64::new(0.0, 0.0);
const ONE: ComplexScalar = Complex64::new(1.0, 0.0);

/// Maximum number of cyclic Jacobi sweeps before giving up on convergence.
const MAX_JACOBI_SWEEPS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dim {
    Two,
    Three,
}

impl Dim {
    pub const fn size(self) -> usize {
        match self {
            Dim::Two => 2,
            Dim::Three => 3,
        }
    }

    pub fn from_size(n: usize) -> Result<Self> {
        match n {
            2 => Ok(Dim::Two),
            3 => Ok(Dim::Three),
            other => Err(Error::Usage(format!("unsupported dimension {other}"))),
        }
    }
}

/// Square complex matrix of dimension 2 or 3.
///
/// Storage is always 3×3; entries outside the active `dim × dim` block are zero
/// and never read.
#[derive(Clone, Copy, PartialEq)]
pub struct SquareMatrix {
    dim: Dim,
    entries: [[ComplexScalar; 3]; 3],
}

impl SquareMatrix {
    pub fn zeros(dim: Dim) -> Self {
        Self {
            dim,
            entries: [[ZERO; 3]; 3],
        }
    }

    pub fn identity(dim: Dim) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim.size() {
            m.entries[i][i] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major complex entries; `rows.len()` picks the dimension.
    pub fn from_rows<R: AsRef<[ComplexScalar]>>(rows: &[R]) -> Result<Self> {
        let dim = Dim::from_size(rows.len())?;
        let mut m = Self::zeros(dim);
        for (r, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != dim.size() {
                return Err(Error::DimensionMismatch {
                    left: dim.size(),
                    right: row.len(),
                });
            }
            for (c, z) in row.iter().enumerate() {
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite);
                }
                m.entries[r][c] = *z;
            }
        }
        Ok(m)
    }

    /// Real-valued row-major constructor.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let complex: Vec<Vec<ComplexScalar>> = rows
            .iter()
            .map(|row| {
                row.as_ref()
                    .iter()
                    .map(|&x| Complex64::new(x, 0.0))
                    .collect()
            })
            .collect();
        Self::from_rows(&complex)
    }

    pub(crate) fn real3(rows: [[f64; 3]; 3]) -> Self {
        Self::real(Dim::Three, &rows)
    }

    pub(crate) fn real2(rows: [[f64; 2]; 2]) -> Self {
        Self::real(Dim::Two, &rows)
    }

    fn real<const N: usize>(dim: Dim, rows: &[[f64; N]; N]) -> Self {
        let mut m = Self::zeros(dim);
        for (dst, src) in m.entries.iter_mut().zip(rows) {
            for (z, &x) in dst.iter_mut().zip(src) {
                *z = Complex64::new(x, 0.0);
            }
        }
        m
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let dim = Dim::from_size(values.len())?;
        let mut m = Self::zeros(dim);
        for (i, &v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite);
            }
            m.entries[i][i] = Complex64::new(v, 0.0);
        }
        Ok(m)
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> ComplexScalar {
        let n = self.dim.size();
        assert!(
            row < n && col < n,
            "index ({row}, {col}) out of range for {n}×{n}"
        );
        self.entries[row][col]
    }

    pub(crate) fn set(&mut self, row: usize, col: usize, value: ComplexScalar) {
        self.entries[row][col] = value;
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim.size(),
                right: other.dim.size(),
            });
        }
        Ok(())
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        self.check_dim(rhs)?;
        Ok(self.mul_unchecked(rhs))
    }

    fn mul_unchecked(&self, rhs: &Self) -> Self {
        let n = self.dim.size();
        let mut out = Self::zeros(self.dim);
        for r in 0..n {
            for c in 0..n {
                let mut acc = ZERO;
                for k in 0..n {
                    acc += self.entries[r][k] * rhs.entries[k][c];
                }
                out.entries[r][c] = acc;
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let n = self.dim.size();
        let mut out = Self::zeros(self.dim);
        for r in 0..n {
            for c in 0..n {
                out.entries[c][r] = self.entries[r][c].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> ComplexScalar {
        (0..self.dim.size()).map(|i| self.entries[i][i]).sum()
    }

    pub fn apply(&self, v: &StateVector) -> Result<StateVector> {
        if self.dim != v.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim.size(),
                right: v.dim.size(),
            });
        }
        let n = self.dim.size();
        let mut amps = [ZERO; 3];
        for (r, amp) in amps.iter_mut().enumerate().take(n) {
            *amp = (0..n).map(|k| self.entries[r][k] * v.amps[k]).sum();
        }
        Ok(StateVector { dim: v.dim, amps })
    }

    pub fn scale(&self, factor: ComplexScalar) -> Self {
        let mut out = *self;
        for row in out.entries.iter_mut() {
            for z in row.iter_mut() {
                *z *= factor;
            }
        }
        out
    }

    /// `self · rho · self†`.
    pub fn conjugate(&self, rho: &Self) -> Result<Self> {
        self.check_dim(rho)?;
        Ok(self.mul_unchecked(rho).mul_unchecked(&self.dagger()))
    }

    /// Largest entry-wise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_dim(other)?;
        let n = self.dim.size();
        let mut worst = 0.0_f64;
        for r in 0..n {
            for c in 0..n {
                worst = worst.max((self.entries[r][c] - other.entries[r][c]).norm());
            }
        }
        Ok(worst)
    }

    /// True iff every entry of `self − self†` has modulus at most `tol`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        let n = self.dim.size();
        for r in 0..n {
            for c in r..n {
                if (self.entries[r][c] - self.entries[c][r].conj()).norm() > tol {
                    return false;
                }
            }
        }
        true
    }

    /// Eigenvalues of a Hermitian matrix in ascending order.
    ///
    /// The matrix `A + iB` is embedded as the real symmetric `[[A, -B], [B, A]]`,
    /// whose spectrum is that of the original with every eigenvalue doubled, and
    /// diagonalized with cyclic Jacobi rotations.
    pub fn hermitian_eigenvalues(&self, tol: f64) -> Result<Vec<f64>> {
        if !self.is_hermitian(tol) {
            return Err(Error::NotHermitian);
        }
        let n = self.dim.size();
        let mut embed = vec![vec![0.0_f64; 2 * n]; 2 * n];
        for r in 0..n {
            for c in 0..n {
                // symmetrize so Jacobi sees an exactly symmetric input
                let z = (self.entries[r][c] + self.entries[c][r].conj()) * 0.5;
                embed[r][c] = z.re;
                embed[r + n][c + n] = z.re;
                embed[r][c + n] = -z.im;
                embed[r + n][c] = z.im;
            }
        }
        let mut all = jacobi_eigenvalues(embed);
        all.sort_by(f64::total_cmp);
        Ok(all.into_iter().step_by(2).collect())
    }

    /// True iff the Hermitian matrix has no eigenvalue below `-tol`.
    pub fn is_psd(&self, tol: f64) -> Result<bool> {
        let eig = self.hermitian_eigenvalues(tol)?;
        Ok(eig.iter().all(|&l| l >= -tol))
    }
}

/// Eigenvalues of a real symmetric matrix by cyclic Jacobi sweeps.
#[allow(clippy::needless_range_loop)]
fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    let scale: f64 = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    if scale == 0.0 {
        return vec![0.0; n];
    }
    for _ in 0..MAX_JACOBI_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| (0..n).filter(move |&q| q != p).map(move |q| (p, q)))
            .map(|(p, q)| a[p][q] * a[p][q])
            .sum::<f64>()
            .sqrt();
        if off <= f64::EPSILON * 1e-3 * scale {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

impl Index<(usize, usize)> for SquareMatrix {
    type Output = ComplexScalar;

    fn index(&self, (row, col): (usize, usize)) -> &ComplexScalar {
        let n = self.dim.size();
        assert!(
            row < n && col < n,
            "index ({row}, {col}) out of range for {n}×{n}"
        );
        &self.entries[row][col]
    }
}

/// Panics on dimension mismatch; use [`SquareMatrix::matmul`] for the fallible form.
impl Mul for SquareMatrix {
    type Output = SquareMatrix;

    fn mul(self, rhs: SquareMatrix) -> SquareMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        self.mul_unchecked(&rhs)
    }
}

impl Add for SquareMatrix {
    type Output = SquareMatrix;

    fn add(self, rhs: SquareMatrix) -> SquareMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        let mut out = self;
        for r in 0..3 {
            for c in 0..3 {
                out.entries[r][c] += rhs.entries[r][c];
            }
        }
        out
    }
}

impl Sub for SquareMatrix {
    type Output = SquareMatrix;

    fn sub(self, rhs: SquareMatrix) -> SquareMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        let mut out = self;
        for r in 0..3 {
            for c in 0..3 {
                out.entries[r][c] -= rhs.entries[r][c];
            }
        }
        out
    }
}

impl fmt::Debug for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.dim.size();
        let rows: Vec<&[ComplexScalar]> = (0..n).map(|r| &self.entries[r][..n]).collect();
        f.debug_list().entries(rows).finish()
    }
}

/// Column vector of amplitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector {
    dim: Dim,
    amps: [ComplexScalar; 3],
}

impl StateVector {
    /// Accepts sub-normalized vectors; rejects squared norms above `1 + 1e-12`.
    pub fn new(amps: &[ComplexScalar]) -> Result<Self> {
        let dim = Dim::from_size(amps.len())?;
        if amps.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if norm > 1.0 + 1e-12 {
            return Err(Error::Usage(format!("state norm² {norm} exceeds 1")));
        }
        let mut buf = [ZERO; 3];
        buf[..amps.len()].copy_from_slice(amps);
        Ok(Self { dim, amps: buf })
    }

    /// The `index`-th computational basis vector.
    pub fn basis(dim: Dim, index: usize) -> Self {
        assert!(index < dim.size(), "basis index {index} out of range");
        let mut amps = [ZERO; 3];
        amps[index] = ONE;
        Self { dim, amps }
    }

    pub fn dim(&self) -> Dim {
        self.dim
    }

    pub fn amplitudes(&self) -> &[ComplexScalar] {
        &self.amps[..self.dim.size()]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes().iter().map(|z| z.norm_sqr()).sum()
    }

    /// `|self⟩⟨other|`.
    pub fn outer(&self, other: &StateVector) -> Result<SquareMatrix> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim.size(),
                right: other.dim.size(),
            });
        }
        let n = self.dim.size();
        let mut m = SquareMatrix::zeros(self.dim);
        for r in 0..n {
            for c in 0..n {
                m.entries[r][c] = self.amps[r] * other.amps[c].conj();
            }
        }
        Ok(m)
    }
}

pub fn matmul(a: &SquareMatrix, b: &SquareMatrix) -> Result<SquareMatrix> {
    a.matmul(b)
}

pub fn dagger(a: &SquareMatrix) -> SquareMatrix {
    a.dagger()
}

pub fn trace(a: &SquareMatrix) -> ComplexScalar {
    a.trace()
}

pub fn apply(m: &SquareMatrix, v: &StateVector) -> Result<StateVector> {
    m.apply(v)
}

pub fn is_hermitian(a: &SquareMatrix, tol: f64) -> bool {
    a.is_hermitian(tol)
}

pub fn is_psd(a: &SquareMatrix, tol: f64) -> Result<bool> {
    a.is_psd(tol)
}

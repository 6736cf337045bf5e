//! Dense complex linear algebra used by every other module.
//!
//! Matrices are stored row-major and are immutable once constructed; every
//! operation returns a fresh value. Joint system/environment objects always
//! put the system factor on the left, so the environment index varies
//! fastest: joint index = `sys * d_env + env`.

use std::fmt;
use std::ops::Index;

use num_complex::Complex64;

use crate::error::{shape, validation, Error, Result};

pub type Complex = Complex64;

pub const ZERO: Complex = Complex::new(0.0, 0.0);
pub const ONE: Complex = Complex::new(1.0, 0.0);

/// Numerical tolerances bounding floating-point drift.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Unit-norm and unit-trace checks.
    pub norm: f64,
    /// Hermiticity (max entrywise |A - A†|).
    pub herm: f64,
    /// Smallest admissible eigenvalue is `-psd`.
    pub psd: f64,
    /// Off-diagonal Frobenius mass at which Jacobi sweeps stop.
    pub jacobi: f64,
    /// Trace-preservation deficit of a Kraus set.
    pub cptp: f64,
    /// Kraus operators below this Frobenius norm are dropped.
    pub prune: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            norm: 1e-10,
            herm: 1e-10,
            psd: 1e-9,
            jacobi: 1e-12,
            cptp: 1e-9,
            prune: 1e-12,
        }
    }
}

impl Tolerances {
    pub const NAMES: [&'static str; 6] = ["norm", "herm", "psd", "jacobi", "cptp", "prune"];

    /// Overrides one tolerance by name.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::Domain(format!(
                "tolerance {name} must be positive and finite, got {value}"
            )));
        }
        let slot = match name {
            "norm" => &mut self.norm,
            "herm" => &mut self.herm,
            "psd" => &mut self.psd,
            "jacobi" => &mut self.jacobi,
            "cptp" => &mut self.cptp,
            "prune" => &mut self.prune,
            other => {
                return Err(Error::Domain(format!(
                    "unknown tolerance {other:?}; expected one of {:?}",
                    Self::NAMES
                )))
            }
        };
        *slot = value;
        Ok(())
    }
}

fn check_finite(entries: &[Complex]) -> Result<()> {
    match entries.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
        Some(i) => Err(validation(format!("non-finite entry at flat index {i}"))),
        None => Ok(()),
    }
}

/// A column of complex amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    entries: Vec<Complex>,
}

impl ComplexVector {
    pub fn new(entries: Vec<Complex>) -> Result<Self> {
        if entries.is_empty() {
            return Err(shape("vector must have positive dimension"));
        }
        check_finite(&entries)?;
        Ok(Self { entries })
    }

    pub fn zeros(dim: usize) -> Self {
        Self { entries: vec![ZERO; dim] }
    }

    /// Computational basis vector |index⟩.
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.entries[index % dim] = ONE;
        v
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Complex] {
        &self.entries
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ⟨self|other⟩, conjugate-linear in `self`.
    pub fn inner(&self, other: &ComplexVector) -> Result<Complex> {
        if self.dim() != other.dim() {
            return Err(shape(format!(
                "inner product of vectors with dims {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(self.entries.iter().zip(&other.entries).map(|(a, b)| a.conj() * b).sum())
    }

    /// |self⟩ ⊗ |other⟩ with `other` as the fast index.
    pub fn kron(&self, other: &ComplexVector) -> ComplexVector {
        let entries = self
            .entries
            .iter()
            .flat_map(|a| other.entries.iter().map(move |b| a * b))
            .collect();
        ComplexVector { entries }
    }

    /// |self⟩⟨other|.
    pub fn outer(&self, other: &ComplexVector) -> ComplexMatrix {
        let cols = other.dim();
        ComplexMatrix::from_fn(self.dim(), cols, |r, c| self.entries[r] * other.entries[c].conj())
    }

    pub fn scale(&self, s: Complex) -> ComplexVector {
        ComplexVector { entries: self.entries.iter().map(|z| z * s).collect() }
    }

    pub fn add(&self, other: &ComplexVector) -> Result<ComplexVector> {
        if self.dim() != other.dim() {
            return Err(shape(format!("adding vectors of dims {} and {}", self.dim(), other.dim())));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(ComplexVector { entries })
    }

    pub fn distance(&self, other: &ComplexVector) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(shape(format!("distance between dims {} and {}", self.dim(), other.dim())));
        }
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// The vector as a `dim × 1` matrix.
    pub fn to_column(&self) -> ComplexMatrix {
        ComplexMatrix { rows: self.dim(), cols: 1, entries: self.entries.clone() }
    }
}

impl Index<usize> for ComplexVector {
    type Output = Complex;

    fn index(&self, i: usize) -> &Complex {
        &self.entries[i]
    }
}

/// A unit-norm vector: a pure qudit state.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket(ComplexVector);

impl Ket {
    pub fn new(vec: ComplexVector) -> Result<Self> {
        Self::with_tolerances(vec, &Tolerances::default())
    }

    pub fn with_tolerances(vec: ComplexVector, tol: &Tolerances) -> Result<Self> {
        let n = vec.norm();
        if (n - 1.0).abs() > tol.norm {
            return Err(validation(format!("ket norm is {n}, expected 1 within {}", tol.norm)));
        }
        Ok(Self(vec))
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        Self(ComplexVector::basis(dim, index))
    }

    pub fn vector(&self) -> &ComplexVector {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    /// |ψ⟩⟨ψ|.
    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix(self.0.outer(&self.0))
    }
}

/// Dense row-major complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:>+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex;

    fn index(&self, (r, c): (usize, usize)) -> &Complex {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of {}x{}", self.rows, self.cols);
        &self.entries[r * self.cols + c]
    }
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(shape(format!("matrix dimensions must be positive, got {rows}x{cols}")));
        }
        if entries.len() != rows * cols {
            return Err(shape(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        check_finite(&entries)?;
        Ok(Self { rows, cols, entries })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        Self { rows, cols, entries }
    }

    /// Real-valued matrix from nested rows; panics on ragged input.
    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let cols = rows[0].len();
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self::from_fn(rows.len(), cols, |r, c| Complex::new(rows[r][c], 0.0))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| if r == c { ONE } else { ZERO })
    }

    pub fn diagonal(diag: &[Complex]) -> Self {
        let n = diag.len();
        Self::from_fn(n, n, |r, c| if r == c { diag[r] } else { ZERO })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex] {
        &self.entries
    }

    pub(crate) fn entries_mut(&mut self) -> &mut [Complex] {
        &mut self.entries
    }

    pub fn column(&self, c: usize) -> ComplexVector {
        ComplexVector { entries: (0..self.rows).map(|r| self[(r, c)]).collect() }
    }

    /// Interprets an `n × 1` matrix as a vector.
    pub fn to_vector(&self) -> Result<ComplexVector> {
        if self.cols != 1 {
            return Err(shape(format!("expected a column vector, got {}x{}", self.rows, self.cols)));
        }
        Ok(ComplexVector { entries: self.entries.clone() })
    }

    fn require_square(&self, op: &str) -> Result<usize> {
        if !self.is_square() {
            return Err(shape(format!("{op} needs a square matrix, got {}x{}", self.rows, self.cols)));
        }
        Ok(self.rows)
    }

    fn require_same_shape(&self, other: &ComplexMatrix, op: &str) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(shape(format!(
                "{op}: shapes {}x{} and {}x{} differ",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != other.rows {
            return Err(shape(format!(
                "matmul: {}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (n, m) = (self.rows, other.cols);
        let mut out = vec![ZERO; n * m];
        for i in 0..n {
            let row = &mut out[i * m..(i + 1) * m];
            for k in 0..self.cols {
                let a = self.entries[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let brow = &other.entries[k * m..(k + 1) * m];
                for (o, b) in row.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Ok(ComplexMatrix { rows: n, cols: m, entries: out })
    }

    pub fn apply(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if self.cols != v.dim() {
            return Err(shape(format!(
                "applying {}x{} matrix to vector of dim {}",
                self.rows,
                self.cols,
                v.dim()
            )));
        }
        let entries = (0..self.rows)
            .map(|r| {
                self.entries[r * self.cols..(r + 1) * self.cols]
                    .iter()
                    .zip(&v.entries)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect();
        Ok(ComplexVector { entries })
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn trace(&self) -> Result<Complex> {
        let n = self.require_square("trace")?;
        Ok((0..n).map(|i| self.entries[i * n + i]).sum())
    }

    /// Kronecker product, `self` as the outer (slow) factor:
    /// `out[(i*b.rows + k), (j*b.cols + l)] = self[i,j] * b[k,l]`.
    pub fn kron(&self, b: &ComplexMatrix) -> ComplexMatrix {
        let rows = self.rows * b.rows;
        let cols = self.cols * b.cols;
        ComplexMatrix::from_fn(rows, cols, |r, c| {
            self[(r / b.rows, c / b.cols)] * b[(r % b.rows, c % b.cols)]
        })
    }

    /// Traces out the right (environment) factor of a `d_sys*d_env` square matrix.
    pub fn partial_trace_env(&self, d_sys: usize, d_env: usize) -> Result<ComplexMatrix> {
        let n = self.require_square("partial_trace_env")?;
        if d_sys == 0 || d_env == 0 || d_sys * d_env != n {
            return Err(shape(format!(
                "partial_trace_env: {n}x{n} does not factor as {d_sys}*{d_env}"
            )));
        }
        Ok(ComplexMatrix::from_fn(d_sys, d_sys, |i, j| {
            (0..d_env).map(|m| self.entries[(i * d_env + m) * n + j * d_env + m]).sum()
        }))
    }

    pub fn scale(&self, s: Complex) -> ComplexMatrix {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.require_same_shape(other, "add")?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        Ok(ComplexMatrix { rows: self.rows, cols: self.cols, entries })
    }

    pub fn sub(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.require_same_shape(other, "sub")?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        Ok(ComplexMatrix { rows: self.rows, cols: self.cols, entries })
    }

    /// [A, B] = AB − BA.
    pub fn commutator(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.matmul(other)?.sub(&other.matmul(self)?)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn frobenius_distance(&self, other: &ComplexMatrix) -> Result<f64> {
        self.require_same_shape(other, "frobenius_distance")?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> Result<f64> {
        self.require_same_shape(other, "max_abs_diff")?;
        Ok(self.entries.iter().zip(&other.entries).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    /// Largest entrywise |A − A†|; infinite for non-square input.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst = 0.0f64;
        for r in 0..n {
            for c in r..n {
                worst = worst.max((self[(r, c)] - self[(c, r)].conj()).norm());
            }
        }
        worst
    }

    /// Real spectrum of a Hermitian matrix in ascending order, by cyclic
    /// complex Jacobi rotations.
    pub fn hermitian_eigenvalues(&self, tol: &Tolerances) -> Result<Vec<f64>> {
        self.require_square("hermitian_eigenvalues")?;
        let defect = self.hermiticity_defect();
        if defect > tol.herm {
            return Err(validation(format!(
                "matrix is not Hermitian: max |A - A†| = {defect:e} exceeds {:e}",
                tol.herm
            )));
        }
        Ok(jacobi_eigenvalues(self, tol.jacobi))
    }
}

fn off_diagonal_mass(a: &[Complex], n: usize) -> f64 {
    let mut s = 0.0;
    for r in 0..n {
        for c in 0..n {
            if r != c {
                s += a[r * n + c].norm_sqr();
            }
        }
    }
    s.sqrt()
}

const MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi on a Hermitian matrix. Each rotation first removes the
/// phase of a[p,q] with a diagonal unitary, then applies a real Givens
/// rotation zeroing the now-real off-diagonal pair.
fn jacobi_eigenvalues(m: &ComplexMatrix, jacobi_tol: f64) -> Vec<f64> {
    let n = m.rows;
    let mut a = m.entries.clone();
    // symmetrize so the rotations act on an exactly Hermitian matrix
    for r in 0..n {
        a[r * n + r] = Complex::new(a[r * n + r].re, 0.0);
        for c in r + 1..n {
            let avg = (a[r * n + c] + a[c * n + r].conj()) * 0.5;
            a[r * n + c] = avg;
            a[c * n + r] = avg.conj();
        }
    }
    let threshold = jacobi_tol * m.frobenius_norm().max(1.0);

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_mass(&a, n) < threshold {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let r = apq.norm();
                if r < f64::MIN_POSITIVE {
                    continue;
                }
                let phase = apq / r; // e^{iφ}
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let ph_conj = phase.conj();

                // A ← A U with U[:,p] = c e_p − s e^{−iφ} e_q, U[:,q] = s e_p + c e^{−iφ} e_q
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q] * ph_conj;
                    a[k * n + p] = akp * c - akq * s;
                    a[k * n + q] = akp * s + akq * c;
                }
                // A ← U† A
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k] * phase;
                    a[p * n + k] = apk * c - aqk * s;
                    a[q * n + k] = apk * s + aqk * c;
                }
                a[p * n + q] = ZERO;
                a[q * n + p] = ZERO;
                a[p * n + p].im = 0.0;
                a[q * n + q].im = 0.0;
            }
        }
    }

    let mut eig: Vec<f64> = (0..n).map(|i| a[i * n + i].re).collect();
    eig.sort_by(|x, y| x.total_cmp(y));
    eig
}

/// A Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        Self::with_tolerances(mat, &Tolerances::default())
    }

    /// Validates every density-matrix invariant, naming the first one that fails.
    pub fn with_tolerances(mat: ComplexMatrix, tol: &Tolerances) -> Result<Self> {
        if !mat.is_square() {
            return Err(shape(format!("density matrix must be square, got {}x{}", mat.rows, mat.cols)));
        }
        let defect = mat.hermiticity_defect();
        if defect > tol.herm {
            return Err(validation(format!(
                "density matrix is not Hermitian: max |ρ - ρ†| = {defect:e} (tolerance {:e})",
                tol.herm
            )));
        }
        let tr = mat.trace()?;
        if (tr - ONE).norm() > tol.norm {
            return Err(validation(format!(
                "density matrix trace is {}{:+}i, expected 1 within {:e}",
                tr.re, tr.im, tol.norm
            )));
        }
        let min_eig = jacobi_eigenvalues(&mat, tol.jacobi)[0];
        if min_eig < -tol.psd {
            return Err(validation(format!(
                "density matrix is not positive semidefinite: min eigenvalue {min_eig:e} (tolerance {:e})",
                tol.psd
            )));
        }
        Ok(Self(mat))
    }

    /// I/d.
    pub fn maximally_mixed(d: usize) -> Self {
        Self(ComplexMatrix::identity(d).scale(Complex::new(1.0 / d as f64, 0.0)))
    }

    pub fn dim(&self) -> usize {
        self.0.rows
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }
}

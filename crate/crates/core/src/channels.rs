//! Operator-sum (Kraus) channels ρ ↦ Σ_m E_m ρ E_m†.
//!
//! The channel invariant is trace preservation, Σ_m E_m† E_m = I. The
//! reversed-order sum Σ_m E_m E_m† = I (unitality) is reported separately and
//! is not required.
//!
//! Kraus lists are not unique, so channel equality is decided on the Choi
//! matrix `J = Σ_{i,j} E(|i⟩⟨j|) ⊗ |i⟩⟨j|` (output factor left), i.e.
//! `J[(r,i),(s,j)] = Σ_m E_m[r,i] · conj(E_m[s,j])`.

use crate::dilation::{make_isometry, GammaTable};
use crate::error::{domain, shape, validation, Error, Result};
use crate::numerics::{Complex, ComplexMatrix, DensityMatrix, Tolerances, ZERO};
use crate::weyl::{weyl_element, WeylIndex};

/// Label written into exported Choi files.
pub const CHOI_CONVENTION: &str = "column-stacking";

/// Completeness report for a Kraus list.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceReport {
    pub trace_preserving: bool,
    /// ‖Σ E†E − I‖_F.
    pub deficit: f64,
    /// ‖Σ E E† − I‖_F.
    pub unital_deficit: f64,
}

/// Measures both completeness sums of an arbitrary Kraus list.
pub fn completeness_report(kraus: &[ComplexMatrix], tol: &Tolerances) -> Result<TraceReport> {
    let first = kraus.first().ok_or_else(|| shape("empty Kraus list"))?;
    let d = first.rows();
    let mut left = ComplexMatrix::zeros(d, d);
    let mut right = ComplexMatrix::zeros(d, d);
    for e in kraus {
        let ed = e.dagger();
        left = left.add(&ed.matmul(e)?)?;
        right = right.add(&e.matmul(&ed)?)?;
    }
    let id = ComplexMatrix::identity(d);
    let deficit = left.frobenius_distance(&id)?;
    let unital_deficit = right.frobenius_distance(&id)?;
    Ok(TraceReport { trace_preserving: deficit < tol.cptp, deficit, unital_deficit })
}

/// A trace-preserving Kraus channel on C^d.
#[derive(Debug, Clone)]
pub struct QuantumChannel {
    d: usize,
    kraus: Vec<ComplexMatrix>,
    tol: Tolerances,
}

impl QuantumChannel {
    pub fn new(kraus: Vec<ComplexMatrix>) -> Result<Self> {
        Self::with_tolerances(kraus, Tolerances::default())
    }

    pub fn with_tolerances(kraus: Vec<ComplexMatrix>, tol: Tolerances) -> Result<Self> {
        let first = kraus.first().ok_or_else(|| shape("a channel needs at least one Kraus operator"))?;
        let d = first.rows();
        if let Some((m, e)) = kraus.iter().enumerate().find(|(_, e)| e.rows() != d || e.cols() != d) {
            return Err(shape(format!(
                "Kraus operator {m} is {}x{}, expected {d}x{d}",
                e.rows(),
                e.cols()
            )));
        }
        let report = completeness_report(&kraus, &tol)?;
        if !report.trace_preserving {
            return Err(validation(format!(
                "Kraus operators are not trace preserving: ‖Σ E†E − I‖_F = {:e} exceeds {:e}",
                report.deficit, tol.cptp
            )));
        }
        Ok(Self { d, kraus, tol })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn kraus(&self) -> &[ComplexMatrix] {
        &self.kraus
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    /// The identity channel {I}.
    pub fn identity(d: usize) -> Self {
        Self { d, kraus: vec![ComplexMatrix::identity(d)], tol: Tolerances::default() }
    }
}

pub fn is_trace_preserving(ch: &QuantumChannel) -> TraceReport {
    completeness_report(&ch.kraus, &ch.tol).expect("channel Kraus list is non-empty and square")
}

/// Kraus operators of an isometry V: C^d → C^d ⊗ C^{d²}, one per environment
/// basis vector: `E_m[r, c] = V[r·d² + m, c]`. Operators with Frobenius norm
/// below the prune tolerance are dropped.
pub fn kraus_from_isometry(v: &ComplexMatrix, tol: &Tolerances) -> Result<QuantumChannel> {
    let d = v.cols();
    if v.rows() != d * d * d {
        return Err(shape(format!("isometry must be d³ x d, got {}x{d}", v.rows())));
    }
    let defect = v.dagger().matmul(v)?.frobenius_distance(&ComplexMatrix::identity(d))?;
    if defect > tol.norm {
        return Err(validation(format!(
            "not an isometry: ‖V†V − I‖_F = {defect:e} exceeds {:e}",
            tol.norm
        )));
    }
    let env = d * d;
    let kraus: Vec<ComplexMatrix> = (0..env)
        .map(|m| ComplexMatrix::from_fn(d, d, |r, c| v[(r * env + m, c)]))
        .filter(|e| e.frobenius_norm() >= tol.prune)
        .collect();
    QuantumChannel::with_tolerances(kraus, *tol)
}

/// Σ_m E_m ρ E_m†, accumulated in Kraus order and validated as a density matrix.
pub fn apply_channel(ch: &QuantumChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.dim() != ch.d {
        return Err(shape(format!("channel on d = {} applied to {}x{} state", ch.d, rho.dim(), rho.dim())));
    }
    let mut acc = ComplexMatrix::zeros(ch.d, ch.d);
    for e in &ch.kraus {
        acc = acc.add(&e.matmul(rho.matrix())?.matmul(&e.dagger())?)?;
    }
    DensityMatrix::with_tolerances(acc, &ch.tol)
        .map_err(|e| Error::Internal(format!("channel output is not a density matrix: {e}")))
}

/// Probability weights p_{l,k} over the Weyl basis, l-major.
#[derive(Debug, Clone, PartialEq)]
pub struct WeylWeights {
    d: usize,
    p: Vec<f64>,
}

impl WeylWeights {
    pub fn new(d: usize, p: Vec<f64>) -> Result<Self> {
        Self::with_tolerances(d, p, &Tolerances::default())
    }

    pub fn with_tolerances(d: usize, p: Vec<f64>, tol: &Tolerances) -> Result<Self> {
        if d < 2 {
            return Err(domain(format!("qudit dimension must be at least 2, got {d}")));
        }
        if p.len() != d * d {
            return Err(shape(format!("Weyl weights for d = {d} need {} entries, got {}", d * d, p.len())));
        }
        if let Some((i, w)) = p.iter().enumerate().find(|(_, w)| !(w.is_finite() && **w >= 0.0)) {
            return Err(domain(format!("weight {i} is {w}; weights must be nonnegative")));
        }
        let total: f64 = p.iter().sum();
        if (total - 1.0).abs() > tol.norm {
            return Err(domain(format!("Weyl weights sum to {total}, expected 1")));
        }
        Ok(Self { d, p })
    }

    /// p = 1/d² everywhere.
    pub fn uniform(d: usize) -> Result<Self> {
        Self::new(d, vec![1.0 / (d * d) as f64; d * d])
    }

    /// All weight on one element.
    pub fn point(idx: WeylIndex) -> Self {
        let d = idx.d();
        let mut p = vec![0.0; d * d];
        p[idx.linear()] = 1.0;
        Self { d, p }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn weights(&self) -> &[f64] {
        &self.p
    }
}

/// Kraus set {√p_{l,k} X_l Z_k}; zero-weight elements are omitted.
pub fn weyl_channel(w: &WeylWeights) -> Result<QuantumChannel> {
    let kraus: Vec<ComplexMatrix> = WeylIndex::all(w.d)?
        .filter(|i| w.p[i.linear()] > 0.0)
        .map(|i| weyl_element(i).scale(Complex::new(w.p[i.linear()].sqrt(), 0.0)))
        .collect();
    QuantumChannel::new(kraus)
}

/// Kraus channel of the γ dilation followed by a partial trace over the environment.
pub fn channel_from_dilation(g: &GammaTable) -> Result<QuantumChannel> {
    kraus_from_isometry(&make_isometry(g), &Tolerances::default())
}

/// Choi matrix of a channel on C^d (d² × d²).
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiMatrix {
    pub d: usize,
    pub mat: ComplexMatrix,
}

pub fn choi_matrix(ch: &QuantumChannel) -> ChoiMatrix {
    let d = ch.d;
    let n = d * d;
    let mut mat = ComplexMatrix::zeros(n, n);
    let out = mat.entries_mut();
    for e in &ch.kraus {
        // w[r*d + i] = E[r, i]
        let w = e.entries();
        for (x, wx) in w.iter().enumerate() {
            if *wx == ZERO {
                continue;
            }
            for (y, wy) in w.iter().enumerate() {
                out[x * n + y] += wx * wy.conj();
            }
        }
    }
    ChoiMatrix { d, mat }
}

/// Frobenius distance between the Choi matrices of two channels.
pub fn choi_distance(a: &QuantumChannel, b: &QuantumChannel) -> Result<f64> {
    if a.d != b.d {
        return Err(shape(format!("comparing channels on d = {} and d = {}", a.d, b.d)));
    }
    choi_matrix(a).mat.frobenius_distance(&choi_matrix(b).mat)
}

pub fn channels_equal(a: &QuantumChannel, b: &QuantumChannel, tol: f64) -> Result<bool> {
    Ok(choi_distance(a, b)? < tol)
}

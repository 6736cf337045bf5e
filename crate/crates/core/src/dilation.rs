//! System–environment interaction as an isometry V: C^d → C^d ⊗ C^{d²}.
//!
//! Each basis qudit evolves as
//!
//! ```text
//! V|i⟩ = Σ_l γ_{−i+l, −i} |i+l⟩ ⊗ |e_{−i+l, −i}⟩
//! ```
//!
//! where the environment label |e_{a,b}⟩ sits at linear index `a*d + b` and
//! the system factor is outer, so the joint index is `sys * d² + a*d + b`.
//!
//! Because column i only touches environment labels with `b = −i`, distinct
//! columns are orthogonal automatically and V is an isometry exactly when
//! every γ column has unit ℓ² mass: Σ_a |γ_{a,b}|² = 1.
//!
//! Only the action on |i⟩ ⊗ |E⟩ is realized; the initial environment state is
//! absorbed into γ and never materialized.

use crate::error::{shape, validation, Result};
use crate::numerics::{Complex, ComplexMatrix, ComplexVector, DensityMatrix, Ket, Tolerances, ZERO};
use crate::weyl::{apply_weyl, phase, reduce, WeylIndex};

/// Environment amplitudes γ_{a,b}, stored a-major.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaTable {
    d: usize,
    gamma: Vec<Complex>,
}

impl GammaTable {
    pub fn new(d: usize, gamma: Vec<Complex>) -> Result<Self> {
        Self::with_tolerances(d, gamma, &Tolerances::default())
    }

    /// Validates the per-column normalization that makes V an isometry.
    pub fn with_tolerances(d: usize, gamma: Vec<Complex>, tol: &Tolerances) -> Result<Self> {
        if d < 2 {
            return Err(crate::error::domain(format!("qudit dimension must be at least 2, got {d}")));
        }
        if gamma.len() != d * d {
            return Err(shape(format!("gamma table for d = {d} needs {} entries, got {}", d * d, gamma.len())));
        }
        if gamma.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(validation("gamma table has non-finite entries"));
        }
        let table = Self { d, gamma };
        let bad: Vec<String> = table
            .column_masses()
            .iter()
            .enumerate()
            .filter(|(_, m)| (*m - 1.0).abs() > tol.norm)
            .map(|(b, m)| format!("column b={b}: mass {m:.17e}, deficit {:.3e}", 1.0 - m))
            .collect();
        if !bad.is_empty() {
            return Err(validation(format!(
                "gamma columns must satisfy sum_a |gamma[a][b]|^2 = 1 within {:e}; {}",
                tol.norm,
                bad.join("; ")
            )));
        }
        Ok(table)
    }

    /// Single unit entry per column: γ_{rows[b], b} = 1.
    pub fn single_entry(d: usize, rows: &[usize]) -> Result<Self> {
        if rows.len() != d {
            return Err(shape(format!("need one row per column ({d}), got {}", rows.len())));
        }
        let mut gamma = vec![ZERO; d * d];
        for (b, &a) in rows.iter().enumerate() {
            gamma[(a % d) * d + b] = Complex::new(1.0, 0.0);
        }
        Self::new(d, gamma)
    }

    /// |γ_{a,b}| = 1/√d with the supplied phases (a-major, radians).
    pub fn uniform_magnitude(d: usize, phases: &[f64]) -> Result<Self> {
        if phases.len() != d * d {
            return Err(shape(format!("need {} phases, got {}", d * d, phases.len())));
        }
        let mag = 1.0 / (d as f64).sqrt();
        Self::new(d, phases.iter().map(|&t| Complex::from_polar(mag, t)).collect())
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn get(&self, a: usize, b: usize) -> Complex {
        self.gamma[a * self.d + b]
    }

    pub fn entries(&self) -> &[Complex] {
        &self.gamma
    }

    /// Σ_a |γ_{a,b}|² for each column b.
    pub fn column_masses(&self) -> Vec<f64> {
        let d = self.d;
        (0..d).map(|b| (0..d).map(|a| self.gamma[a * d + b].norm_sqr()).sum()).collect()
    }
}

/// Linear position of |e_{a,b}⟩ in the d²-dimensional environment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnvBasisIndex {
    pub a: usize,
    pub b: usize,
}

impl EnvBasisIndex {
    pub fn new(d: usize, a: i64, b: i64) -> Self {
        Self { a: reduce(a, d), b: reduce(b, d) }
    }

    pub fn linear(&self, d: usize) -> usize {
        self.a * d + self.b
    }
}

/// Joint system ⊗ environment vector of dimension d³.
#[derive(Debug, Clone, PartialEq)]
pub struct JointState {
    pub d: usize,
    pub vec: ComplexVector,
}

/// One term of the regrouped joint state: `X_l Z_k |ψ⟩ ⊗ v_{lk}`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeylFormTerm {
    pub idx: WeylIndex,
    /// X_l Z_k |ψ⟩.
    pub sys: ComplexVector,
    /// Unnormalized environment vector v_{lk} = Σ_z ω^{zk} γ_{z+l,z} |e_{z+l,z}⟩.
    pub env: ComplexVector,
}

/// (joint row, γ value) pairs of column i of V.
fn isometry_column(g: &GammaTable, i: usize) -> impl Iterator<Item = (usize, Complex)> + '_ {
    let d = g.d;
    let b = reduce(-(i as i64), d);
    (0..d).map(move |l| {
        let a = reduce(l as i64 - i as i64, d);
        let row = ((i + l) % d) * d * d + a * d + b;
        (row, g.gamma[a * d + b])
    })
}

/// The d³ × d isometry V.
pub fn make_isometry(g: &GammaTable) -> ComplexMatrix {
    let d = g.d;
    let mut v = ComplexMatrix::zeros(d * d * d, d);
    let entries = v.entries_mut();
    for i in 0..d {
        for (row, val) in isometry_column(g, i) {
            entries[row * d + i] = val;
        }
    }
    v
}

/// V|ψ⟩ evaluated directly from the double sum over (i, l).
pub fn evolve_pure(psi: &Ket, g: &GammaTable) -> Result<JointState> {
    let d = g.d;
    if psi.dim() != d {
        return Err(shape(format!("state of dim {} does not match gamma table d = {d}", psi.dim())));
    }
    let mut out = vec![ZERO; d * d * d];
    for i in 0..d {
        let alpha = psi.vector()[i];
        for (row, val) in isometry_column(g, i) {
            out[row] += alpha * val;
        }
    }
    Ok(JointState { d, vec: ComplexVector::new(out)? })
}

/// v_{lk}: component ω^{zk} γ_{z+l,z} at environment label (z+l, z).
pub fn env_vector(g: &GammaTable, idx: WeylIndex) -> Result<ComplexVector> {
    let d = g.d;
    if idx.d() != d {
        return Err(shape(format!("Weyl index for d = {} used with gamma table d = {d}", idx.d())));
    }
    let mut out = vec![ZERO; d * d];
    for z in 0..d {
        let a = (z + idx.l()) % d;
        out[a * d + z] = phase(d, (z * idx.k()) as i64) * g.gamma[a * d + z];
    }
    ComplexVector::new(out)
}

/// Regroups V|ψ⟩ as (1/d) Σ_{l,k} X_l Z_k |ψ⟩ ⊗ v_{lk}, returning the d² terms l-major.
pub fn weyl_form_of_joint(psi: &Ket, g: &GammaTable) -> Result<Vec<WeylFormTerm>> {
    let d = g.d;
    if psi.dim() != d {
        return Err(shape(format!("state of dim {} does not match gamma table d = {d}", psi.dim())));
    }
    WeylIndex::all(d)?
        .map(|idx| {
            Ok(WeylFormTerm { idx, sys: apply_weyl(idx, psi.vector())?, env: env_vector(g, idx)? })
        })
        .collect()
}

/// (1/d) Σ sys ⊗ env over the terms.
pub fn reassemble(terms: &[WeylFormTerm]) -> Result<ComplexVector> {
    let first = terms.first().ok_or_else(|| shape("no Weyl-form terms to reassemble"))?;
    let d = first.idx.d();
    let inv_d = Complex::new(1.0 / d as f64, 0.0);
    let mut acc = ComplexVector::zeros(d * d * d);
    for t in terms {
        acc = acc.add(&t.sys.kron(&t.env).scale(inv_d))?;
    }
    Ok(acc)
}

/// O[(l,k),(l',k')] = ⟨v_{lk}, v_{l'k'}⟩. Block diagonal in l; within a block
/// the entries are Σ_z ω^{z(k'−k)} |γ_{z+l,z}|², so the v_{lk} are mutually
/// orthogonal only when |γ_{a,b}| depends on a − b alone.
pub fn env_overlap_matrix(g: &GammaTable) -> Result<ComplexMatrix> {
    let d = g.d;
    let vs: Vec<ComplexVector> =
        WeylIndex::all(d)?.map(|i| env_vector(g, i)).collect::<Result<_>>()?;
    let n = vs.len();
    let mut entries = Vec::with_capacity(n * n);
    for x in &vs {
        for y in &vs {
            entries.push(x.inner(y)?);
        }
    }
    ComplexMatrix::new(n, n, entries)
}

/// V ρ V†, a d³ × d³ joint density.
pub fn evolve_density(rho: &DensityMatrix, g: &GammaTable) -> Result<ComplexMatrix> {
    if rho.dim() != g.d {
        return Err(shape(format!(
            "density matrix of dim {} does not match gamma table d = {}",
            rho.dim(),
            g.d
        )));
    }
    let v = make_isometry(g);
    v.matmul(rho.matrix())?.matmul(&v.dagger())
}

/// ρ = Σ_s p_s α^s for a probability vector p over coefficient matrices α^s.
pub fn ensemble_to_density(
    weights: &[f64],
    states: &[ComplexMatrix],
    tol: &Tolerances,
) -> Result<DensityMatrix> {
    if weights.is_empty() || weights.len() != states.len() {
        return Err(shape(format!(
            "ensemble needs one weight per state, got {} weights and {} states",
            weights.len(),
            states.len()
        )));
    }
    if let Some((s, p)) = weights.iter().enumerate().find(|(_, p)| !(p.is_finite() && **p >= 0.0)) {
        return Err(crate::error::domain(format!("weight {s} is {p}; weights must be nonnegative")));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > tol.norm {
        return Err(crate::error::domain(format!("weights sum to {total}, expected 1")));
    }
    let d = states[0].rows();
    let mut acc = ComplexMatrix::zeros(d, d);
    for (p, alpha) in weights.iter().zip(states) {
        if alpha.rows() != d || alpha.cols() != d {
            return Err(shape(format!(
                "ensemble member is {}x{}, expected {d}x{d}",
                alpha.rows(),
                alpha.cols()
            )));
        }
        acc = acc.add(&alpha.scale(Complex::new(*p, 0.0)))?;
    }
    DensityMatrix::with_tolerances(acc, tol)
}

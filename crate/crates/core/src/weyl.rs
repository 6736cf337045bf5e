//! The Weyl–Heisenberg basis {X_l Z_k : (l, k) ∈ Z_d × Z_d} of d×d operators.
//!
//! `X_l |i⟩ = |i + l⟩` and `Z_k |i⟩ = ω^{ik} |i⟩` with `ω = exp(2πi/d)`, so
//! `X_l Z_k` has exactly one nonzero per column: `ω^{nk}` at row `n + l`.
//! The d² elements are Hilbert–Schmidt orthogonal with squared norm d, which
//! makes decomposition a trace against each element scaled by 1/d.
//!
//! Indices are always reduced into `[0, d)`; negative inputs are accepted.
//! Elements are enumerated l-major: linear index `l * d + k`.

use std::f64::consts::PI;

use crate::error::{domain, shape, Error, Result};
use crate::numerics::{Complex, ComplexMatrix, ComplexVector, ONE, ZERO};

/// `x mod d` in `[0, d)`.
pub fn reduce(x: i64, d: usize) -> usize {
    x.rem_euclid(d as i64) as usize
}

/// ω^e = exp(2πi·(e mod d)/d). Quarter turns are returned exactly.
pub fn phase(d: usize, e: i64) -> Complex {
    let r = reduce(e, d);
    if (4 * r).is_multiple_of(d) {
        return match 4 * r / d {
            0 => ONE,
            1 => Complex::new(0.0, 1.0),
            2 => Complex::new(-1.0, 0.0),
            _ => Complex::new(0.0, -1.0),
        };
    }
    Complex::from_polar(1.0, 2.0 * PI * r as f64 / d as f64)
}

/// The primitive root of unity exp(2πi/d).
pub fn omega(d: usize) -> Result<Complex> {
    if d < 1 {
        return Err(domain("omega requires d >= 1"));
    }
    Ok(phase(d, 1))
}

fn phase_table(d: usize) -> Vec<Complex> {
    (0..d as i64).map(|e| phase(d, e)).collect()
}

fn require_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(domain(format!("qudit dimension must be at least 2, got {d}")));
    }
    Ok(())
}

/// Label (l, k) of the basis element X_l Z_k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylIndex {
    d: usize,
    l: usize,
    k: usize,
}

impl WeylIndex {
    pub fn new(d: usize, l: i64, k: i64) -> Result<Self> {
        require_dim(d)?;
        Ok(Self { d, l: reduce(l, d), k: reduce(k, d) })
    }

    /// Inverse of [`WeylIndex::linear`].
    pub fn from_linear(d: usize, idx: usize) -> Result<Self> {
        require_dim(d)?;
        if idx >= d * d {
            return Err(domain(format!("linear index {idx} out of range for d = {d}")));
        }
        Ok(Self { d, l: idx / d, k: idx % d })
    }

    /// All d² indices in l-major order.
    pub fn all(d: usize) -> Result<impl Iterator<Item = WeylIndex>> {
        require_dim(d)?;
        Ok((0..d * d).map(move |i| WeylIndex { d, l: i / d, k: i % d }))
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn linear(&self) -> usize {
        self.l * self.d + self.k
    }
}

/// X_l: the permutation with entry[m, n] = 1 iff m ≡ n + l (mod d).
pub fn shift_matrix(d: usize, l: i64) -> Result<ComplexMatrix> {
    require_dim(d)?;
    let l = reduce(l, d);
    Ok(ComplexMatrix::from_fn(d, d, |m, n| if m == (n + l) % d { ONE } else { ZERO }))
}

/// Z_k = diag(ω^{0·k}, ω^{1·k}, …, ω^{(d−1)k}).
pub fn clock_matrix(d: usize, k: i64) -> Result<ComplexMatrix> {
    require_dim(d)?;
    let k = reduce(k, d) as i64;
    let diag: Vec<Complex> = (0..d as i64).map(|m| phase(d, m * k)).collect();
    Ok(ComplexMatrix::diagonal(&diag))
}

/// X_l Z_k as a dense matrix.
pub fn weyl_element(idx: WeylIndex) -> ComplexMatrix {
    let (d, l, k) = (idx.d, idx.l, idx.k);
    ComplexMatrix::from_fn(d, d, |m, n| {
        if m == (n + l) % d {
            phase(d, (n * k) as i64)
        } else {
            ZERO
        }
    })
}

/// X_l Z_k |ψ⟩ without forming the matrix.
pub fn apply_weyl(idx: WeylIndex, psi: &ComplexVector) -> Result<ComplexVector> {
    let d = idx.d;
    if psi.dim() != d {
        return Err(shape(format!("applying a d = {d} Weyl element to a vector of dim {}", psi.dim())));
    }
    let mut out = vec![ZERO; d];
    for n in 0..d {
        out[(n + idx.l) % d] = phase(d, (n * idx.k) as i64) * psi[n];
    }
    ComplexVector::new(out)
}

/// Precomputed basis for one dimension.
#[derive(Debug, Clone)]
pub struct WeylBasis {
    d: usize,
    omega: Complex,
    elements: Vec<ComplexMatrix>,
}

impl WeylBasis {
    pub fn new(d: usize) -> Result<Self> {
        let elements = WeylIndex::all(d)?.map(weyl_element).collect();
        Ok(Self { d, omega: omega(d)?, elements })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn omega(&self) -> Complex {
        self.omega
    }

    pub fn element(&self, idx: WeylIndex) -> &ComplexMatrix {
        &self.elements[idx.linear()]
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    /// Multiplies the nonzero entry in column `col` of element `idx` by -1.
    /// Used only by the verifier's fault-injection mode.
    pub(crate) fn flip_phase(&mut self, idx: WeylIndex, col: usize) {
        let d = self.d;
        let row = (col + idx.l) % d;
        let m = &mut self.elements[idx.linear()];
        m.entries_mut()[row * d + col] *= -1.0;
    }

    /// G[(l,k),(m,n)] = tr(W_{lk}† W_{mn}). Equal to d·I exactly when the
    /// elements are orthogonal, which certifies linear independence of d²
    /// vectors in a d²-dimensional space.
    pub fn gram_matrix(&self) -> ComplexMatrix {
        let n = self.elements.len();
        let daggers: Vec<ComplexMatrix> = self.elements.iter().map(|w| w.dagger()).collect();
        ComplexMatrix::from_fn(n, n, |r, c| hs_trace(&daggers[r], &self.elements[c]))
    }
}

/// tr(A·B) for square matrices of equal size, without forming the product.
fn hs_trace(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex {
    let n = a.rows();
    let (ae, be) = (a.entries(), b.entries());
    let mut s = ZERO;
    for i in 0..n {
        for j in 0..n {
            s += ae[i * n + j] * be[j * n + i];
        }
    }
    s
}

/// Expansion coefficients ξ_{l,k} of an operator in the Weyl basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    d: usize,
    xi: Vec<Complex>,
}

impl CoefficientTable {
    /// `xi` is l-major with d² entries.
    pub fn new(d: usize, xi: Vec<Complex>) -> Result<Self> {
        require_dim(d)?;
        if xi.len() != d * d {
            return Err(shape(format!("coefficient table for d = {d} needs {} entries, got {}", d * d, xi.len())));
        }
        if xi.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::Validation("coefficient table has non-finite entries".into()));
        }
        Ok(Self { d, xi })
    }

    pub fn zeros(d: usize) -> Result<Self> {
        require_dim(d)?;
        Ok(Self { d, xi: vec![ZERO; d * d] })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn get(&self, idx: WeylIndex) -> Complex {
        self.xi[idx.linear()]
    }

    pub fn at(&self, l: usize, k: usize) -> Complex {
        self.xi[l * self.d + k]
    }

    pub fn entries(&self) -> &[Complex] {
        &self.xi
    }

    /// Σ |ξ_{l,k}|².
    pub fn squared_norm(&self) -> f64 {
        self.xi.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Largest |ξ| difference against another table of the same d.
    pub fn max_abs_diff(&self, other: &CoefficientTable) -> Result<f64> {
        if self.d != other.d {
            return Err(domain(format!("comparing tables for d = {} and d = {}", self.d, other.d)));
        }
        Ok(self.xi.iter().zip(&other.xi).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }
}

/// ξ_{l,k} = (1/d)·tr((X_l Z_k)† A), evaluated on the d nonzeros of X_l Z_k:
/// ξ_{l,k} = (1/d) Σ_n ω^{−nk} A[n + l, n].
pub fn decompose(a: &ComplexMatrix) -> Result<CoefficientTable> {
    if !a.is_square() {
        return Err(shape(format!("decompose needs a square matrix, got {}x{}", a.rows(), a.cols())));
    }
    let d = a.rows();
    require_dim(d)?;
    let phases = phase_table(d);
    let inv_d = 1.0 / d as f64;
    let mut xi = Vec::with_capacity(d * d);
    for l in 0..d {
        let diag: Vec<Complex> = (0..d).map(|n| a[((n + l) % d, n)]).collect();
        for k in 0..d {
            let s: Complex = diag
                .iter()
                .enumerate()
                .map(|(n, v)| phases[(n * k) % d].conj() * v)
                .sum();
            xi.push(s * inv_d);
        }
    }
    Ok(CoefficientTable { d, xi })
}

/// Σ_{l,k} ξ_{l,k} X_l Z_k.
pub fn reconstruct(t: &CoefficientTable) -> ComplexMatrix {
    let d = t.d;
    let phases = phase_table(d);
    let mut out = ComplexMatrix::zeros(d, d);
    let entries = out.entries_mut();
    for l in 0..d {
        for n in 0..d {
            let s: Complex = (0..d).map(|k| t.xi[l * d + k] * phases[(n * k) % d]).sum();
            entries[((n + l) % d) * d + n] += s;
        }
    }
    out
}

/// Coefficients of the commutator [W_x, W_y] in the basis.
pub fn commutator_in_basis(x: WeylIndex, y: WeylIndex) -> Result<CoefficientTable> {
    if x.d != y.d {
        return Err(domain(format!("commutator of indices with d = {} and d = {}", x.d, y.d)));
    }
    decompose(&weyl_element(x).commutator(&weyl_element(y))?)
}

/// ‖reconstruct(commutator_in_basis(x, y)) − [W_x, W_y]‖_F: the Lie-closure residual.
pub fn closure_residual(x: WeylIndex, y: WeylIndex) -> Result<f64> {
    let table = commutator_in_basis(x, y)?;
    let direct = weyl_element(x).commutator(&weyl_element(y))?;
    reconstruct(&table).frobenius_distance(&direct)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn idx(d: usize, l: i64, k: i64) -> WeylIndex {
        WeylIndex::new(d, l, k).unwrap()
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega(1).unwrap(), ONE);
        assert_eq!(omega(2).unwrap(), c(-1.0, 0.0));
        assert_eq!(omega(4).unwrap(), c(0.0, 1.0));
        assert!(matches!(omega(0), Err(Error::Domain(_))));
    }

    #[test]
    fn omega_is_primitive() {
        for d in 1..=16usize {
            let w = omega(d).unwrap();
            assert!((w.powi(d as i32) - ONE).norm() < 1e-10);
            for t in 1..d {
                assert!((w.powi(t as i32) - ONE).norm() > 1e-3, "d={d} t={t}");
            }
        }
    }

    #[test]
    fn negative_indices_are_reduced() {
        let a = idx(5, -1, -7);
        assert_eq!((a.l(), a.k()), (4, 3));
        assert_eq!(shift_matrix(3, -1).unwrap(), shift_matrix(3, 2).unwrap());
    }

    #[test]
    fn shift_examples() {
        let x = shift_matrix(2, 1).unwrap();
        assert_eq!(x, ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]));
        for d in 2..6 {
            assert_eq!(shift_matrix(d, 0).unwrap(), ComplexMatrix::identity(d));
        }
        let x1 = shift_matrix(3, 1).unwrap();
        assert_eq!(shift_matrix(3, 2).unwrap(), x1.matmul(&x1).unwrap());
        // X_1 |i⟩ = |i+1⟩
        for i in 0..4 {
            let out = shift_matrix(4, 1).unwrap().apply(&ComplexVector::basis(4, i)).unwrap();
            assert_eq!(out, ComplexVector::basis(4, (i + 1) % 4));
        }
    }

    #[test]
    fn clock_examples() {
        assert_eq!(
            clock_matrix(2, 1).unwrap(),
            ComplexMatrix::diagonal(&[ONE, c(-1.0, 0.0)])
        );
        let w = Complex::from_polar(1.0, 2.0 * PI / 3.0);
        let z = clock_matrix(3, 1).unwrap();
        let expected = ComplexMatrix::diagonal(&[ONE, w, w * w]);
        assert!(z.frobenius_distance(&expected).unwrap() < 1e-15);
        let z2 = z.matmul(&z).unwrap();
        assert!(clock_matrix(3, 2).unwrap().frobenius_distance(&z2).unwrap() < 1e-15);
        // dagger of Z_1 conjugates each phase
        let zd = ComplexMatrix::diagonal(&[ONE, w.conj(), (w * w).conj()]);
        assert!(z.dagger().frobenius_distance(&zd).unwrap() < 1e-15);
        // trace of Z_1 (d=3) vanishes, as does trace of X_1
        assert!(z.trace().unwrap().norm() < 1e-15);
        assert_eq!(shift_matrix(3, 1).unwrap().trace().unwrap(), ZERO);
    }

    #[test]
    fn dimension_below_two_is_rejected() {
        assert!(shift_matrix(1, 0).is_err());
        assert!(clock_matrix(0, 0).is_err());
        assert!(WeylIndex::new(1, 0, 0).is_err());
        assert!(decompose(&ComplexMatrix::identity(1)).is_err());
    }

    #[test]
    fn weyl_element_examples() {
        let w = weyl_element(idx(2, 1, 1));
        assert_eq!(w, ComplexMatrix::from_real_rows(&[&[0.0, -1.0], &[1.0, 0.0]]));
        for d in 2..6 {
            assert_eq!(weyl_element(idx(d, 0, 0)), ComplexMatrix::identity(d));
        }
        let om = omega(3).unwrap();
        let expected = ComplexMatrix::new(
            3,
            3,
            vec![ZERO, ZERO, om * om, ONE, ZERO, ZERO, ZERO, om, ZERO],
        )
        .unwrap();
        assert!(weyl_element(idx(3, 1, 1)).frobenius_distance(&expected).unwrap() < 1e-15);
    }

    #[test]
    fn weyl_element_matches_shift_times_clock() {
        for d in [2usize, 3, 4, 5, 7] {
            for i in WeylIndex::all(d).unwrap() {
                let product = shift_matrix(d, i.l() as i64)
                    .unwrap()
                    .matmul(&clock_matrix(d, i.k() as i64).unwrap())
                    .unwrap();
                assert!(weyl_element(i).frobenius_distance(&product).unwrap() < 1e-14);
            }
        }
    }

    #[test]
    fn apply_weyl_matches_dense() {
        let psi = ComplexVector::new(vec![c(0.1, 0.2), c(-0.3, 0.4), c(0.5, -0.6), c(0.7, 0.0)]).unwrap();
        for i in WeylIndex::all(4).unwrap() {
            let sparse = apply_weyl(i, &psi).unwrap();
            let dense = weyl_element(i).apply(&psi).unwrap();
            assert!(sparse.distance(&dense).unwrap() < 1e-15);
        }
        assert!(apply_weyl(idx(3, 0, 0), &psi).is_err());
    }

    #[test]
    fn decompose_identity_and_rank_one() {
        let t = decompose(&ComplexMatrix::identity(4)).unwrap();
        for i in WeylIndex::all(4).unwrap() {
            let want = if i.linear() == 0 { ONE } else { ZERO };
            assert!((t.get(i) - want).norm() < 1e-15);
        }

        // |2⟩⟨1| at d=3: ξ_{l,k} = (1/3) ω^{−k} δ_{1+l,2}
        let a = ComplexVector::basis(3, 2).outer(&ComplexVector::basis(3, 1));
        let t = decompose(&a).unwrap();
        for i in WeylIndex::all(3).unwrap() {
            let want = if i.l() == 1 { phase(3, -(i.k() as i64)) / 3.0 } else { ZERO };
            assert!((t.get(i) - want).norm() < 1e-15);
        }
        let back = reconstruct(&t);
        assert!(back.frobenius_distance(&a).unwrap() < 1e-15);
    }

    #[test]
    fn reconstruct_examples() {
        assert_eq!(reconstruct(&CoefficientTable::zeros(3).unwrap()), ComplexMatrix::zeros(3, 3));
        let t = CoefficientTable::new(2, vec![ZERO, ZERO, ONE, ZERO]).unwrap();
        assert_eq!(reconstruct(&t), shift_matrix(2, 1).unwrap());
    }

    #[test]
    fn decompose_rejects_non_square() {
        assert!(matches!(decompose(&ComplexMatrix::zeros(2, 3)), Err(Error::Shape(_))));
    }

    #[test]
    fn gram_matrix_examples() {
        let g = WeylBasis::new(2).unwrap().gram_matrix();
        assert!(g.frobenius_distance(&ComplexMatrix::identity(4).scale(c(2.0, 0.0))).unwrap() < 1e-14);
        let g3 = WeylBasis::new(3).unwrap().gram_matrix();
        let row = idx(3, 1, 0).linear();
        let col = idx(3, 0, 1).linear();
        assert!(g3[(row, col)].norm() < 1e-15);
        for i in 0..9 {
            assert!((g3[(i, i)] - c(3.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn fault_injection_breaks_orthogonality() {
        let mut b = WeylBasis::new(3).unwrap();
        b.flip_phase(idx(3, 0, 1), 0);
        let g = b.gram_matrix();
        let target = ComplexMatrix::identity(9).scale(c(3.0, 0.0));
        assert!(g.frobenius_distance(&target).unwrap() >= 1.0);
    }

    #[test]
    fn commutator_examples() {
        let x = idx(3, 1, 2);
        let t = commutator_in_basis(x, x).unwrap();
        assert_eq!(t.squared_norm(), 0.0);
        let t = commutator_in_basis(idx(3, 0, 0), idx(3, 2, 1)).unwrap();
        assert_eq!(t.squared_norm(), 0.0);

        // [X, Z] = (1 − ω) XZ = 2 XZ at d = 2
        let t = commutator_in_basis(idx(2, 1, 0), idx(2, 0, 1)).unwrap();
        for i in WeylIndex::all(2).unwrap() {
            let want = if (i.l(), i.k()) == (1, 1) { c(2.0, 0.0) } else { ZERO };
            assert!((t.get(i) - want).norm() < 1e-15);
        }
        assert!(matches!(commutator_in_basis(idx(2, 1, 0), idx(3, 0, 1)), Err(Error::Domain(_))));
    }

    #[test]
    fn commutator_coefficients_follow_weyl_relation() {
        // W_{l1,k1} W_{l2,k2} = ω^{k1 l2} W_{l1+l2, k1+k2}
        for d in [2usize, 3, 4] {
            for x in WeylIndex::all(d).unwrap() {
                for y in WeylIndex::all(d).unwrap() {
                    let t = commutator_in_basis(x, y).unwrap();
                    let coeff = phase(d, (x.k() * y.l()) as i64) - phase(d, (y.k() * x.l()) as i64);
                    let sum = idx(d, (x.l() + y.l()) as i64, (x.k() + y.k()) as i64);
                    for i in WeylIndex::all(d).unwrap() {
                        let want = if i == sum { coeff } else { ZERO };
                        assert!((t.get(i) - want).norm() < 1e-12);
                    }
                }
            }
        }
    }
}

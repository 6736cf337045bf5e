//! Seeded random draws of states, operators and dilations for verification.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::dilation::GammaTable;
use crate::numerics::{Complex, ComplexMatrix, ComplexVector, DensityMatrix, Ket, ZERO};

pub const DEFAULT_SEED: u64 = 0x5EED_D1A7;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex {
    Complex::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian_complex(rng))
}

pub fn random_ket<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Ket {
    let raw: Vec<Complex> = (0..d).map(|_| gaussian_complex(rng)).collect();
    let n = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let v = ComplexVector::new(raw.into_iter().map(|z| z / n).collect()).expect("finite draw");
    Ket::new(v).expect("normalized draw")
}

/// Full-rank mixed state G G† / tr(G G†).
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, d: usize) -> DensityMatrix {
    let g = ginibre(rng, d, d);
    let gg = g.matmul(&g.dagger()).expect("square");
    let tr = gg.trace().expect("square").re;
    let mut m = gg.scale(Complex::new(1.0 / tr, 0.0));
    // exact hermiticity after rounding
    let n = d;
    let e = m.entries_mut();
    for r in 0..n {
        e[r * n + r].im = 0.0;
        for c in r + 1..n {
            e[c * n + r] = e[r * n + c].conj();
        }
    }
    DensityMatrix::new(m).expect("Wishart draw is a density matrix")
}

/// γ table whose columns are independent uniformly random unit vectors.
pub fn random_gamma<R: Rng + ?Sized>(rng: &mut R, d: usize) -> GammaTable {
    let mut gamma = vec![ZERO; d * d];
    for b in 0..d {
        let col: Vec<Complex> = (0..d).map(|_| gaussian_complex(rng)).collect();
        let n = col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for (a, z) in col.into_iter().enumerate() {
            gamma[a * d + b] = z / n;
        }
    }
    GammaTable::new(d, gamma).expect("normalized columns")
}

/// |γ| = 1/√d with uniformly random phases.
pub fn random_uniform_magnitude_gamma<R: Rng + ?Sized>(rng: &mut R, d: usize) -> GammaTable {
    let phases: Vec<f64> = (0..d * d).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
    GammaTable::uniform_magnitude(d, &phases).expect("uniform magnitudes are normalized")
}

/// Haar-distributed unitary via Gram–Schmidt on a Ginibre matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = ginibre(rng, n, n);
    let mut cols: Vec<Vec<Complex>> = Vec::with_capacity(n);
    for c in 0..n {
        let mut v: Vec<Complex> = (0..n).map(|r| g[(r, c)]).collect();
        // two passes of modified Gram–Schmidt
        for _ in 0..2 {
            for q in &cols {
                let proj: Complex = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, qa) in v.iter_mut().zip(q) {
                    *x -= proj * qa;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / norm).collect());
    }
    ComplexMatrix::from_fn(n, n, |r, c| cols[c][r])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn draws_are_reproducible() {
        let a = random_density(&mut seeded_rng(7), 3);
        let b = random_density(&mut seeded_rng(7), 3);
        assert_eq!(a, b);
    }

    #[test]
    fn unitary_is_unitary() {
        let mut rng = seeded_rng(1);
        for n in 1..7 {
            let u = random_unitary(&mut rng, n);
            let uu = u.dagger().matmul(&u).unwrap();
            assert!(uu.frobenius_distance(&ComplexMatrix::identity(n)).unwrap() < 1e-13);
        }
    }
}

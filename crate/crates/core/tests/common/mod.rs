//! Brute-force reference implementations shared by the integration tests.
//!
//! Nothing here calls into the library's basis, dilation or channel code;
//! matrices are plain `Vec<Vec<Complex>>` built from first principles.

#![allow(dead_code)]

use std::f64::consts::TAU;

use weyl_core::{Complex, ComplexMatrix};

pub type Dense = Vec<Vec<Complex>>;

pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

pub fn omega(d: usize) -> Complex {
    Complex::from_polar(1.0, TAU / d as f64)
}

pub fn zeros(r: usize, c_: usize) -> Dense {
    vec![vec![c(0.0, 0.0); c_]; r]
}

pub fn eye(d: usize) -> Dense {
    let mut m = zeros(d, d);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = c(1.0, 0.0);
    }
    m
}

pub fn mul(a: &Dense, b: &Dense) -> Dense {
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    let mut out = zeros(n, m);
    for i in 0..n {
        for j in 0..m {
            let mut s = c(0.0, 0.0);
            for t in 0..k {
                s += a[i][t] * b[t][j];
            }
            out[i][j] = s;
        }
    }
    out
}

pub fn adjoint(a: &Dense) -> Dense {
    let mut out = zeros(a[0].len(), a.len());
    for (i, row) in a.iter().enumerate() {
        for (j, z) in row.iter().enumerate() {
            out[j][i] = z.conj();
        }
    }
    out
}

pub fn trace(a: &Dense) -> Complex {
    (0..a.len()).map(|i| a[i][i]).sum()
}

pub fn pow(a: &Dense, e: usize) -> Dense {
    (0..e).fold(eye(a.len()), |acc, _| mul(&acc, a))
}

/// Single shift |i⟩ ↦ |i+1⟩, written column by column.
pub fn shift(d: usize) -> Dense {
    let mut x = zeros(d, d);
    for i in 0..d {
        x[(i + 1) % d][i] = c(1.0, 0.0);
    }
    x
}

/// Single clock |i⟩ ↦ ω^i |i⟩.
pub fn clock(d: usize) -> Dense {
    let w = omega(d);
    let mut z = zeros(d, d);
    for i in 0..d {
        z[i][i] = w.powu(i as u32);
    }
    z
}

/// X^l Z^k by repeated products of the single shift and clock.
pub fn weyl(d: usize, l: usize, k: usize) -> Dense {
    mul(&pow(&shift(d), l), &pow(&clock(d), k))
}

/// ξ_{l,k} = tr((X_l Z_k)† A) / d, l-major.
pub fn decompose(a: &Dense) -> Vec<Complex> {
    let d = a.len();
    let mut xi = Vec::with_capacity(d * d);
    for l in 0..d {
        for k in 0..d {
            xi.push(trace(&mul(&adjoint(&weyl(d, l, k)), a)) / d as f64);
        }
    }
    xi
}

pub fn from_lib(m: &ComplexMatrix) -> Dense {
    (0..m.rows()).map(|r| (0..m.cols()).map(|c_| m[(r, c_)]).collect()).collect()
}

pub fn to_lib(a: &Dense) -> ComplexMatrix {
    ComplexMatrix::from_fn(a.len(), a[0].len(), |r, c_| a[r][c_])
}

pub fn max_diff(a: &Dense, b: &Dense) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn frob_diff(a: &Dense, b: &Dense) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Σ_m E_m ρ E_m†.
pub fn apply_kraus(kraus: &[Dense], rho: &Dense) -> Dense {
    let d = rho.len();
    let mut out = zeros(d, d);
    for e in kraus {
        let t = mul(&mul(e, rho), &adjoint(e));
        for i in 0..d {
            for j in 0..d {
                out[i][j] += t[i][j];
            }
        }
    }
    out
}

/// J = Σ_{ij} E(|i⟩⟨j|) ⊗ |i⟩⟨j|, output factor on the left.
pub fn choi(kraus: &[Dense], d: usize) -> Dense {
    let mut j = zeros(d * d, d * d);
    for i in 0..d {
        for jj in 0..d {
            let mut unit = zeros(d, d);
            unit[i][jj] = c(1.0, 0.0);
            let img = apply_kraus(kraus, &unit);
            for r in 0..d {
                for s in 0..d {
                    j[r * d + i][s * d + jj] += img[r][s];
                }
            }
        }
    }
    j
}

/// Closed form of any γ dilation channel: the environment records b = −i, so
/// ρ ↦ Σ_{a,b} |γ_{a,b}|² ρ_{−b,−b} |a−2b⟩⟨a−2b|.
pub fn dilation_channel_closed_form(gamma: &[Complex], rho: &Dense) -> Dense {
    let d = rho.len();
    let mut out = zeros(d, d);
    for a in 0..d {
        for b in 0..d {
            let src = (d - b) % d;
            let dst = (a + 2 * d - 2 * b) % d;
            out[dst][dst] += rho[src][src] * gamma[a * d + b].norm_sqr();
        }
    }
    out
}

/// V|ψ⟩ with the joint index (system, a, b), straight from the defining sum.
pub fn evolve(gamma: &[Complex], psi: &[Complex]) -> Vec<Complex> {
    let d = psi.len();
    let mut out = vec![c(0.0, 0.0); d * d * d];
    for i in 0..d {
        for l in 0..d {
            let a = (d + l - i) % d;
            let b = (d - i) % d;
            out[((i + l) % d) * d * d + a * d + b] += psi[i] * gamma[a * d + b];
        }
    }
    out
}

/// tr_env over a (d·e)×(d·e) matrix with the environment index fast.
pub fn partial_trace(m: &Dense, d: usize, e: usize) -> Dense {
    let mut out = zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            for t in 0..e {
                out[i][j] += m[i * e + t][j * e + t];
            }
        }
    }
    out
}

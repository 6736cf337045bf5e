//! The invariant suite run by `weyl verify`.
//!
//! Each check measures one residual for one dimension and compares it with a
//! fixed tolerance. Every check draws from its own RNG stream derived from the
//! base seed, the dimension and the check name, so results do not depend on
//! which checks ran before.

use std::time::Instant;

use serde::Serialize;

use crate::channels::{
    apply_channel, channel_from_dilation, choi_distance, is_trace_preserving, weyl_channel, QuantumChannel,
    WeylWeights,
};
use crate::dilation::{evolve_density, evolve_pure, make_isometry, reassemble, weyl_form_of_joint};
use crate::error::Result;
use crate::numerics::{Complex, ComplexMatrix, ComplexVector, DensityMatrix, ZERO};
use crate::random::{
    ginibre, random_density, random_gamma, random_ket, random_uniform_magnitude_gamma, random_unitary,
    seeded_rng,
};
use crate::weyl::{
    clock_matrix, closure_residual, decompose, phase, reconstruct, shift_matrix, WeylBasis, WeylIndex,
};

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub dims: Vec<usize>,
    pub seed: u64,
    pub roundtrip_samples: usize,
    pub dilation_samples: usize,
    pub depolarizing_samples: usize,
    /// Flip one phase of the basis before the orthogonality check.
    pub inject_fault: bool,
}

impl VerifyConfig {
    pub fn new(dims: Vec<usize>, seed: u64) -> Self {
        Self {
            dims,
            seed,
            roundtrip_samples: 100,
            dilation_samples: 50,
            depolarizing_samples: 100,
            inject_fault: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub d: usize,
    pub status: &'static str,
    pub residual: f64,
    pub tolerance: f64,
    pub wall_time_s: f64,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub status: &'static str,
    pub seed: u64,
    pub dims: Vec<usize>,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}

type CheckFn = fn(&VerifyConfig, usize, u64) -> Result<f64>;

const CHECKS: &[(&str, f64, CheckFn)] = &[
    ("choi_mixing_invariance", 1e-10, check_mixing_invariance),
    ("depolarizing_limit", 1e-10, check_depolarizing),
    ("dilation_partial_trace", 1e-10, check_dilation_partial_trace),
    ("gram_orthogonality", 1e-10, check_gram),
    ("isometry", 1e-10, check_isometry),
    ("lie_closure", 1e-10, check_lie_closure),
    ("parseval", 1e-10, check_parseval),
    ("rank_one_coefficients", 1e-12, check_rank_one),
    ("roundtrip", 1e-10, check_roundtrip),
    ("trace_character", 1e-10, check_trace_character),
    ("trace_preservation", 1e-10, check_trace_preservation),
    ("uniform_dilation_choi", 1e-9, check_uniform_dilation_choi),
    ("weyl_commutation", 1e-12, check_weyl_commutation),
    ("weyl_form_consistency", 1e-10, check_weyl_form),
];

pub fn check_names() -> impl Iterator<Item = &'static str> {
    CHECKS.iter().map(|(n, _, _)| *n)
}

fn stream_seed(base: u64, d: usize, check: usize) -> u64 {
    base ^ ((d as u64) << 32) ^ ((check as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Runs every check for every requested dimension; results ordered by (name, d).
pub fn run(cfg: &VerifyConfig) -> Result<VerifyReport> {
    let mut checks = Vec::new();
    for (i, (name, tolerance, f)) in CHECKS.iter().enumerate() {
        for &d in &cfg.dims {
            let start = Instant::now();
            let residual = f(cfg, d, stream_seed(cfg.seed, d, i))?;
            let status = if residual < *tolerance { "pass" } else { "fail" };
            checks.push(CheckResult {
                name,
                d,
                status,
                residual,
                tolerance: *tolerance,
                wall_time_s: start.elapsed().as_secs_f64(),
            });
        }
    }
    let status = if checks.iter().all(CheckResult::passed) { "pass" } else { "fail" };
    Ok(VerifyReport { status, seed: cfg.seed, dims: cfg.dims.clone(), checks })
}

fn check_gram(cfg: &VerifyConfig, d: usize, _seed: u64) -> Result<f64> {
    let mut basis = WeylBasis::new(d)?;
    if cfg.inject_fault {
        basis.flip_phase(WeylIndex::new(d, 0, 1)?, 0);
    }
    let target = ComplexMatrix::identity(d * d).scale(Complex::new(d as f64, 0.0));
    basis.gram_matrix().frobenius_distance(&target)
}

fn check_trace_character(_: &VerifyConfig, d: usize, _seed: u64) -> Result<f64> {
    let basis = WeylBasis::new(d)?;
    let mut worst = 0.0f64;
    for idx in WeylIndex::all(d)? {
        let want = if idx.linear() == 0 { d as f64 } else { 0.0 };
        worst = worst.max((basis.element(idx).trace()? - Complex::new(want, 0.0)).norm());
    }
    Ok(worst)
}

fn check_rank_one(_: &VerifyConfig, d: usize, _seed: u64) -> Result<f64> {
    let mut worst = 0.0f64;
    for a in 0..d {
        for b in 0..d {
            let t = decompose(&ComplexVector::basis(d, a).outer(&ComplexVector::basis(d, b)))?;
            for idx in WeylIndex::all(d)? {
                let want = if (b + idx.l()) % d == a {
                    phase(d, -((b * idx.k()) as i64)) / d as f64
                } else {
                    ZERO
                };
                worst = worst.max((t.get(idx) - want).norm());
            }
        }
    }
    Ok(worst)
}

fn check_roundtrip(cfg: &VerifyConfig, d: usize, seed: u64) -> Result<f64> {
    let mut rng = seeded_rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..cfg.roundtrip_samples {
        let a = ginibre(&mut rng, d, d);
        worst = worst.max(reconstruct(&decompose(&a)?).frobenius_distance(&a)?);
    }
    Ok(worst)
}

fn check_parseval(cfg: &VerifyConfig, d: usize, seed: u64) -> Result<f64> {
    let mut rng = seeded_rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..cfg.roundtrip_samples {
        let a = ginibre(&mut rng, d, d);
        let lhs = decompose(&a)?.squared_norm();
        let rhs = a.dagger().matmul(&a)?.trace()?.re / d as f64;
        worst = worst.max((lhs - rhs).abs());
    }
    Ok(worst)
}

fn check_weyl_commutation(_: &VerifyConfig, d: usize, _seed: u64) -> Result<f64> {
    let mut worst = 0.0f64;
    for idx in WeylIndex::all(d)? {
        let (l, k) = (idx.l() as i64, idx.k() as i64);
        let x = shift_matrix(d, l)?;
        let z = clock_matrix(d, k)?;
        let lhs = z.matmul(&x)?;
        let rhs = x.matmul(&z)?.scale(phase(d, l * k));
        worst = worst.max(lhs.max_abs_diff(&rhs)?);
    }
    Ok(worst)
}

fn check_lie_closure(_: &VerifyConfig, d: usize, _seed: u64) -> Result<f64> {
    let mut worst = 0.0f64;
    for x in WeylIndex::all(d)? {
        for y in WeylIndex::all(d)? {
            worst = worst.max(closure_residual(x, y)?);
        }
    }
    Ok(worst)
}

fn check_isometry(cfg: &VerifyConfig, d: usize, seed: u64) -> Result<f64> {
    let mut rng = seeded_rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..cfg.dilation_samples {
        let v = make_isometry(&random_gamma(&mut rng, d));
        worst = worst.max(v.dagger().matmul(&v)?.frobenius_distance(&ComplexMatrix::identity(d))?);
    }
    Ok(worst)
}

fn check_weyl_form(cfg: &VerifyConfig, d: usize, seed: u64) -> Result<f64> {
    let mut rng = seeded_rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..cfg.dilation_samples {
        let g = random_gamma(&mut rng, d);
        let psi = random_ket(&mut rng, d);
        let direct = evolve_pure(&psi, &g)?;
        let regrouped = reassemble(&weyl_form_of_joint(&psi, &g)?)?;
        worst = worst.max(regrouped.distance(&direct.vec)?);
    }
    Ok(worst)
}

fn check_dilation_partial_trace(cfg: &VerifyConfig, d: usize, seed: u64) -> Result<f64> {
    let mut rng = seeded_rng(seed);
    let mut worst = 0.0f64;
    for _ in 0..cfg.dilation_samples {
        let g = random_gamma(&mut rng, d);
        let rho = random_density(&mut rng, d);
        let via_kraus = apply_channel(&channel_from_dilation(&g)?, &rho)?;
        let via_env = evolve_density(&rho, &g)?.partial_trace_env(d, d * d)?;
        worst = worst.max(via_kraus.matrix().frobenius_distance(&via_env)?);
    }
    Ok(worst)
}

fn check_trace_preservation(cfg: &VerifyConfig, d: usize, seed: u64) -> Result<f64> {
    let mut rng = seeded_rng(seed);
    let mut worst = is_trace_preserving(&weyl_channel(&WeylWeights::uniform(d)?)?).deficit;
    for _ in 0..cfg.dilation_samples {
        let ch = channel_from_dilation(&random_gamma(&mut rng, d))?;
        worst = worst.max(is_trace_preserving(&ch).deficit);
    }
    Ok(worst)
}

fn check_depolarizing(cfg: &VerifyConfig, d: usize, seed: u64) -> Result<f64> {
    let mut rng = seeded_rng(seed);
    let ch = weyl_channel(&WeylWeights::uniform(d)?)?;
    let target = DensityMatrix::maximally_mixed(d);
    let mut worst = 0.0f64;
    for _ in 0..cfg.depolarizing_samples {
        let out = apply_channel(&ch, &random_density(&mut rng, d))?;
        worst = worst.max(out.matrix().frobenius_distance(target.matrix())?);
    }
    Ok(worst)
}

fn check_uniform_dilation_choi(_: &VerifyConfig, d: usize, seed: u64) -> Result<f64> {
    let mut rng = seeded_rng(seed);
    let dil = channel_from_dilation(&random_uniform_magnitude_gamma(&mut rng, d))?;
    choi_distance(&dil, &weyl_channel(&WeylWeights::uniform(d)?)?)
}

fn check_mixing_invariance(_: &VerifyConfig, d: usize, seed: u64) -> Result<f64> {
    let mut rng = seeded_rng(seed);
    let ch = channel_from_dilation(&random_gamma(&mut rng, d))?;
    let mixed = mix_kraus(&ch, &random_unitary(&mut rng, ch.kraus().len()))?;
    choi_distance(&ch, &mixed)
}

/// {F_m = Σ_n u[m,n] E_n} for a unitary u.
pub fn mix_kraus(ch: &QuantumChannel, u: &ComplexMatrix) -> Result<QuantumChannel> {
    let d = ch.d();
    let kraus = (0..u.rows())
        .map(|m| {
            ch.kraus()
                .iter()
                .enumerate()
                .try_fold(ComplexMatrix::zeros(d, d), |acc, (n, e)| acc.add(&e.scale(u[(m, n)])))
        })
        .collect::<Result<Vec<_>>>()?;
    QuantumChannel::with_tolerances(kraus, *ch.tolerances())
}

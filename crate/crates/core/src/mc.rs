//! Monte Carlo estimates of multi-trace GUE expectations.
//!
//! Sampling convention: diagonal entries are standard normal, off-diagonal real and
//! imaginary parts are independent normals of variance 1/2, so `E|X_ij|² = 1` and the
//! density is proportional to `exp(-Tr X²/2)`. This is the normalization under which
//! `E[Tr X²] = N²`.
//!
//! Sample `i` draws from a ChaCha8 generator seeded with `seed` and switched to
//! stream `i`. Per-sample values are collected in index order and reduced serially,
//! so results are bit-identical for any thread count.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use thiserror::Error;

use crate::moments::{expectation, IndexMultiset, MomentCache};
use crate::numeric::bigint_ratio_to_f64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum McError {
    #[error("matrix size must be at least 1")]
    EmptyMatrix,
    #[error("need at least 2 samples, got {0}")]
    TooFewSamples(u64),
    #[error("sigma bound must be positive, got {0}")]
    BadSigmaBound(f64),
}

/// Row-major `N×N` Hermitian matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix {
    n: usize,
    entries: Vec<Complex64>,
}

impl HermitianMatrix {
    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.n + j]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.entry(i, i)).sum()
    }

    fn identity(n: usize) -> Self {
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            entries[i * n + i] = Complex64::new(1.0, 0.0);
        }
        HermitianMatrix { n, entries }
    }

    /// Traces of `X^0, X^1, ..., X^max_power`, by repeated multiplication.
    pub fn power_traces(&self, max_power: u32) -> Vec<f64> {
        let mut traces = Vec::with_capacity(max_power as usize + 1);
        let mut power = HermitianMatrix::identity(self.n);
        traces.push(self.n as f64);
        for _ in 0..max_power {
            power = &power * self;
            // powers of a Hermitian matrix are Hermitian: the trace is real
            traces.push(power.trace().re);
        }
        traces
    }
}

impl Mul for &HermitianMatrix {
    type Output = HermitianMatrix;

    fn mul(self, rhs: &HermitianMatrix) -> HermitianMatrix {
        let n = self.n;
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                let row = &rhs.entries[k * n..(k + 1) * n];
                for (out, b) in entries[i * n..(i + 1) * n].iter_mut().zip(row) {
                    *out += a * b;
                }
            }
        }
        HermitianMatrix { n, entries }
    }
}

/// One GUE draw.
pub fn sample_gue<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<HermitianMatrix, McError> {
    if n == 0 {
        return Err(McError::EmptyMatrix);
    }
    let half = std::f64::consts::FRAC_1_SQRT_2;
    let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        let d: f64 = rng.sample(StandardNormal);
        entries[i * n + i] = Complex64::new(d, 0.0);
        for j in i + 1..n {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            let z = Complex64::new(re * half, im * half);
            entries[i * n + j] = z;
            entries[j * n + i] = z.conj();
        }
    }
    Ok(HermitianMatrix { n, entries })
}

/// The generator used for sample `index` of a run seeded with `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Clone, Debug, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
}

/// Mean and standard error of `stat(X)` over `samples` independent draws.
pub fn estimate<F>(n: usize, samples: u64, seed: u64, stat: F) -> Result<McEstimate, McError>
where
    F: Fn(&HermitianMatrix) -> f64 + Sync,
{
    if n == 0 {
        return Err(McError::EmptyMatrix);
    }
    if samples < 2 {
        return Err(McError::TooFewSamples(samples));
    }
    let values: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|index| {
            let mut rng = sample_rng(seed, index);
            let x = sample_gue(n, &mut rng).expect("n >= 1");
            stat(&x)
        })
        .collect();
    let count = samples as f64;
    let mean = values.iter().sum::<f64>() / count;
    let variance = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (count - 1.0);
    Ok(McEstimate {
        mean,
        std_error: (variance / count).sqrt(),
        samples,
        seed,
    })
}

/// Estimate of `E[Π_r Tr X^{k_r}]`.
pub fn estimate_multi_trace(
    ks: &IndexMultiset,
    n: usize,
    samples: u64,
    seed: u64,
) -> Result<McEstimate, McError> {
    let max_power = ks.ks().iter().copied().max().unwrap_or(0);
    estimate(n, samples, seed, |x| {
        let traces = x.power_traces(max_power);
        ks.ks().iter().map(|&k| traces[k as usize]).product()
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct MomentReport {
    pub ks: IndexMultiset,
    pub n: usize,
    pub exact: BigInt,
    pub estimate: McEstimate,
    pub sigma_bound: f64,
    pub passed: bool,
}

impl MomentReport {
    /// `|mean - exact|` in units of the standard error.
    pub fn deviation(&self) -> f64 {
        let gap = (self.estimate.mean - self.exact_f64()).abs();
        if gap == 0.0 {
            0.0
        } else {
            gap / self.estimate.std_error
        }
    }

    pub fn exact_f64(&self) -> f64 {
        bigint_ratio_to_f64(&self.exact, &BigInt::from(1))
    }
}

impl fmt::Display for MomentReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ks: {}  N: {}", self.ks, self.n)?;
        writeln!(f, "exact: {}", self.exact)?;
        writeln!(f, "mean: {}", self.estimate.mean)?;
        writeln!(f, "std_error: {}", self.estimate.std_error)?;
        writeln!(
            f,
            "deviation: {:.3} std errors (bound {})",
            self.deviation(),
            self.sigma_bound
        )?;
        writeln!(
            f,
            "samples: {}  seed: {}",
            self.estimate.samples, self.estimate.seed
        )?;
        write!(f, "result: {}", if self.passed { "pass" } else { "fail" })
    }
}

/// Compare the exact moment with a Monte Carlo estimate.
///
/// Passes iff `|mean - exact| <= sigma_bound * std_error`.
pub fn cross_check(
    ks: &IndexMultiset,
    n: usize,
    samples: u64,
    seed: u64,
    sigma_bound: f64,
    cache: &MomentCache,
) -> Result<MomentReport, McError> {
    if sigma_bound.is_nan() || sigma_bound <= 0.0 {
        return Err(McError::BadSigmaBound(sigma_bound));
    }
    let estimate = estimate_multi_trace(ks, n, samples, seed)?;
    let exact = expectation(ks, n as u64, cache);
    let mut report = MomentReport {
        ks: ks.clone(),
        n,
        exact,
        estimate,
        sigma_bound,
        passed: false,
    };
    let gap = (report.estimate.mean - report.exact_f64()).abs();
    report.passed = gap <= sigma_bound * report.estimate.std_error;
    Ok(report)
}

/// A cross-check that gets one retry on a second fixed seed.
///
/// At a 4σ bound a correct implementation fails a single check with probability
/// around 6e-5; requiring two independent failures makes a spurious failure
/// negligible while a real bias still fails both attempts.
#[derive(Clone, Debug, PartialEq)]
pub struct RetriedCheck {
    pub first: MomentReport,
    pub retry: Option<MomentReport>,
}

impl RetriedCheck {
    pub fn passed(&self) -> bool {
        self.first.passed || self.retry.as_ref().is_some_and(|r| r.passed)
    }

    pub fn last(&self) -> &MomentReport {
        self.retry.as_ref().unwrap_or(&self.first)
    }
}

pub fn cross_check_with_retry(
    ks: &IndexMultiset,
    n: usize,
    samples: u64,
    seeds: [u64; 2],
    sigma_bound: f64,
    cache: &MomentCache,
) -> Result<RetriedCheck, McError> {
    let first = cross_check(ks, n, samples, seeds[0], sigma_bound, cache)?;
    let retry = if first.passed {
        None
    } else {
        Some(cross_check(ks, n, samples, seeds[1], sigma_bound, cache)?)
    };
    Ok(RetriedCheck { first, retry })
}

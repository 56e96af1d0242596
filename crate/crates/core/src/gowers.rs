//! Gowers uniformity norms on cyclic groups, Fourier sup diagnostics, Weyl
//! square averages, and the two-prime orthogonality statistic.
//!
//! U^1 is the plain mean; U^2 goes through the fourth-moment Fourier
//! identity in O(N log N); U^3 runs the defining recursion with one
//! Fourier-accelerated inner norm per shift, O(N^2 log N). Higher orders
//! are not needed here and are rejected.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::numeric::{e_of, pairwise_sum, pairwise_sum_f64};

/// A finite sequence on Z_N with entries in the closed unit disk.
#[derive(Clone, Debug)]
pub struct CyclicSequence {
    values: Vec<Complex64>,
}

impl CyclicSequence {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("empty sequence".into()));
        }
        for (i, v) in values.iter().enumerate() {
            if v.norm() > 1.0 + 1e-12 {
                return Err(Error::InvalidArgument(format!(
                    "entry {i} has modulus {} > 1",
                    v.norm()
                )));
            }
        }
        Ok(CyclicSequence { values })
    }

    /// Embed a sequence given on [N] = {1..N} as a cyclic sequence (the
    /// periodic extension of a*1_[N]; Gowers norms are shift-invariant, so
    /// the rotation convention does not matter).
    pub fn from_interval(values_1_to_n: Vec<Complex64>) -> Result<Self> {
        Self::new(values_1_to_n)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }
}

fn dft(values: &[Complex64]) -> Vec<Complex64> {
    let mut buf = values.to_vec();
    FftPlanner::new().plan_fft_forward(buf.len()).process(&mut buf);
    buf
}

/// ||a||_{U^s(Z_N)} for s in {1, 2, 3}.
pub fn gowers_norm(a: &CyclicSequence, s: u32) -> Result<f64> {
    match s {
        1 => Ok(u1(a.values())),
        2 => Ok(u2_fourth(a.values()).powf(0.25)),
        3 => {
            let n = a.len();
            let vals = a.values();
            use rayon::prelude::*;
            let inner: Vec<f64> = (0..n)
                .into_par_iter()
                .map(|h| {
                    let twisted: Vec<Complex64> = (0..n)
                        .map(|i| vals[i] * vals[(i + h) % n].conj())
                        .collect();
                    u2_fourth(&twisted)
                })
                .collect();
            let mean = pairwise_sum_f64(&inner) / n as f64;
            Ok(mean.powf(1.0 / 8.0))
        }
        _ => Err(Error::Unsupported(format!(
            "U^{s} norms are outside the implemented range 1..=3"
        ))),
    }
}

fn u1(values: &[Complex64]) -> f64 {
    (pairwise_sum(values) / values.len() as f64).norm()
}

/// ||a||_{U^2}^4 = sum_xi |hat a(xi)|^4 with the E-normalized transform.
fn u2_fourth(values: &[Complex64]) -> f64 {
    let n = values.len() as f64;
    let hat = dft(values);
    let fourth: Vec<f64> = hat
        .iter()
        .map(|c| {
            let m2 = (c / n).norm_sqr();
            m2 * m2
        })
        .collect();
    pairwise_sum_f64(&fourth)
}

/// Gowers norm of a sequence given on the interval [N], via the periodic
/// embedding into Z_N.
pub fn gowers_norm_interval(values_1_to_n: &[Complex64], s: u32) -> Result<f64> {
    let seq = CyclicSequence::from_interval(values_1_to_n.to_vec())?;
    gowers_norm(&seq, s)
}

/// max_j |E_{n in [N]} a(n) e(n j / 4N)|: the continuous sup over
/// frequencies, sampled on a grid of mesh 1/(4N) via one zero-padded
/// transform. |E a(n)e(n alpha)| is Lipschitz in alpha with constant at
/// most pi*N, so the grid misses the true sup by at most pi/4 times the
/// local gap.
pub fn fourier_sup(a: &CyclicSequence) -> f64 {
    let n = a.len();
    let mut padded = vec![Complex64::new(0.0, 0.0); 4 * n];
    padded[..n].copy_from_slice(a.values());
    let hat = dft(&padded);
    hat.iter().map(|c| c.norm()).fold(0.0, f64::max) / n as f64
}

/// E_{n in [N]} e(n^2 t).
pub fn weyl_square_average(t: f64, n_max: u64) -> Result<Complex64> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("need N >= 1".into()));
    }
    let terms: Vec<Complex64> = (1..=n_max)
        .map(|n| {
            let sq = (n as f64) * (n as f64);
            e_of((sq * t).fract())
        })
        .collect();
    Ok(pairwise_sum(&terms) / n_max as f64)
}

/// E_{n in [N]} a(pn) * conj(a(qn)) for distinct primes p, q. The sequence
/// must be defined on [N * max(p, q)] (1-indexed slice of length at least
/// that).
pub fn daboussi_katai_stat(
    a: &[Complex64],
    p: u64,
    q: u64,
    n_max: u64,
) -> Result<Complex64> {
    if p == q {
        return Err(Error::InvalidArgument("p and q must be distinct".into()));
    }
    if !crate::multfn::is_prime_u64(p) || !crate::multfn::is_prime_u64(q) {
        return Err(Error::InvalidArgument("p and q must be prime".into()));
    }
    let need = (n_max * p.max(q)) as usize;
    if a.len() < need {
        return Err(Error::RangeError(format!(
            "sequence of length {} is shorter than N*max(p,q) = {need}",
            a.len()
        )));
    }
    let terms: Vec<Complex64> = (1..=n_max as usize)
        .map(|n| a[p as usize * n - 1] * a[q as usize * n - 1].conj())
        .collect();
    Ok(pairwise_sum(&terms) / n_max as f64)
}

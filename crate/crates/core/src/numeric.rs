//! Shared numeric helpers: pairwise (tree) reductions used by every grid
//! average in the crate, and elementary integer arithmetic.
//!
//! All averages are accumulated as fixed-shape pairwise sums so that results
//! agree to well below 1e-12 no matter how worker threads interleave: blocks
//! are summed in index order and the block results are folded by a balanced
//! binary tree whose shape depends only on the block count.

use num_complex::Complex64;

/// Pairwise sum of a slice of complex values (balanced binary tree).
pub fn pairwise_sum(values: &[Complex64]) -> Complex64 {
    const LEAF: usize = 64;
    if values.len() <= LEAF {
        let mut acc = Complex64::new(0.0, 0.0);
        for v in values {
            acc += v;
        }
        return acc;
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Pairwise sum of a slice of reals.
pub fn pairwise_sum_f64(values: &[f64]) -> f64 {
    const LEAF: usize = 64;
    if values.len() <= LEAF {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum_f64(&values[..mid]) + pairwise_sum_f64(&values[mid..])
}

/// Sums `f(i)` for `i` in `0..n` through fixed-size blocks, in parallel,
/// with a deterministic reduction tree. The block partition depends only on
/// `n`, so the result is bit-identical for every thread count.
pub fn parallel_block_sum<F>(n: usize, block: usize, f: F) -> Complex64
where
    F: Fn(usize) -> Complex64 + Sync,
{
    use rayon::prelude::*;
    if n == 0 {
        return Complex64::new(0.0, 0.0);
    }
    let nblocks = n.div_ceil(block);
    let partials: Vec<Complex64> = (0..nblocks)
        .into_par_iter()
        .map(|b| {
            let lo = b * block;
            let hi = usize::min(lo + block, n);
            let mut acc = Complex64::new(0.0, 0.0);
            for i in lo..hi {
                acc += f(i);
            }
            acc
        })
        .collect();
    pairwise_sum(&partials)
}

/// Real-valued variant of [`parallel_block_sum`].
pub fn parallel_block_sum_f64<F>(n: usize, block: usize, f: F) -> f64
where
    F: Fn(usize) -> f64 + Sync,
{
    use rayon::prelude::*;
    if n == 0 {
        return 0.0;
    }
    let nblocks = n.div_ceil(block);
    let partials: Vec<f64> = (0..nblocks)
        .into_par_iter()
        .map(|b| {
            let lo = b * block;
            let hi = usize::min(lo + block, n);
            let mut acc = 0.0;
            for i in lo..hi {
                acc += f(i);
            }
            acc
        })
        .collect();
    pairwise_sum_f64(&partials)
}

/// e(t) = exp(2*pi*i*t).
pub fn e_of(t: f64) -> Complex64 {
    let phase = 2.0 * std::f64::consts::PI * t;
    Complex64::new(phase.cos(), phase.sin())
}

pub fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Integer square root of a u128, rounding down.
pub fn isqrt_u128(n: u128) -> u128 {
    if n == 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as u128;
    // correct the float guess
    while x > 0 && x * x > n {
        x -= 1;
    }
    while (x + 1).checked_mul(x + 1).is_some_and(|s| s <= n) {
        x += 1;
    }
    x
}

pub fn is_perfect_square_u128(n: u128) -> bool {
    let r = isqrt_u128(n);
    r * r == n
}

/// (base^exp) mod m for u64 arguments, exact via u128 intermediates.
pub fn modpow_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc: u64 = 1;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % m as u128) as u64;
        }
        base = ((base as u128 * base as u128) % m as u128) as u64;
        exp >>= 1;
    }
    acc
}

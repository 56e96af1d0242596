//! Pretentious distance between multiplicative functions, restricted to
//! prime subsets, reported as partial sums up to an explicit cutoff.

use crate::error::{Error, Result};
use crate::multfn::{DirichletCharacter, MultFnSpec, PrimeTable};
use crate::numeric::{modpow_u64, parallel_block_sum_f64};

/// A set of primes given by a closed description.
#[derive(Clone, Debug)]
pub enum PrimeSetSpec {
    /// Every prime.
    All,
    /// Primes congruent to one of `allowed` mod `modulus`.
    Residues { modulus: u64, allowed: Vec<u64> },
    /// Primes p with Legendre symbol (-d/p) = 1. The prime 2 and primes
    /// dividing 2d are excluded; finitely many primes never change whether
    /// a distance is bounded.
    LegendreSet(i64),
}

impl PrimeSetSpec {
    pub fn contains(&self, p: u64) -> bool {
        match self {
            PrimeSetSpec::All => true,
            PrimeSetSpec::Residues { modulus, allowed } => allowed.contains(&(p % modulus)),
            PrimeSetSpec::LegendreSet(d) => {
                if p == 2 {
                    return false;
                }
                let dd = d.unsigned_abs() % p;
                if dd == 0 {
                    return false; // p | d
                }
                let neg_d = (p - dd) % p;
                let a = if *d < 0 { dd } else { neg_d };
                if a == 0 {
                    return false;
                }
                legendre_symbol_unchecked(a, p) == 1
            }
        }
    }
}

fn legendre_symbol_unchecked(a: u64, p: u64) -> i32 {
    let r = modpow_u64(a % p, (p - 1) / 2, p);
    if r == 0 {
        0
    } else if r == 1 {
        1
    } else {
        -1
    }
}

/// Legendre symbol (a/p) by Euler's criterion; p must be an odd prime.
pub fn legendre_symbol(a: i64, p: u64) -> Result<i32> {
    if p < 3 || !crate::multfn::is_prime_u64(p) {
        return Err(Error::InvalidArgument(format!("{p} is not an odd prime")));
    }
    let r = a.rem_euclid(p as i64) as u64;
    Ok(legendre_symbol_unchecked(r, p))
}

/// Squared pretentious distance between f and g, truncated to primes
/// p <= cutoff lying in `set`:
/// sum over p of (1/p) * (1 - Re(f(p) * conj(g(p)))).
pub fn distance_sq(
    f: &MultFnSpec,
    g: &MultFnSpec,
    cutoff: u64,
    set: &PrimeSetSpec,
    table: &PrimeTable,
) -> Result<f64> {
    if cutoff > table.bound() {
        return Err(Error::RangeError(format!(
            "cutoff {cutoff} exceeds the sieve bound {}",
            table.bound()
        )));
    }
    let primes = table.primes_in(1, cutoff);
    let total = parallel_block_sum_f64(primes.len(), 4096, |i| {
        let p = primes[i];
        if !set.contains(p) {
            return 0.0;
        }
        let term = 1.0 - (f.prime_value(p) * g.prime_value(p).conj()).re;
        term / p as f64
    });
    Ok(total.max(0.0))
}

/// Distance from f to the twisted character chi * n^{it}, truncated at
/// `cutoff`.
pub fn distance_to_twisted_character(
    f: &MultFnSpec,
    chi: &DirichletCharacter,
    t: f64,
    cutoff: u64,
    table: &PrimeTable,
) -> Result<f64> {
    let target = MultFnSpec::product(
        MultFnSpec::character(chi.clone()),
        MultFnSpec::archimedean(t),
    );
    distance_sq(f, &target, cutoff, &PrimeSetSpec::All, table)
}

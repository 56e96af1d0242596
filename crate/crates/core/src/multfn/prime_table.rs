use crate::error::{Error, Result};

/// Smallest-prime-factor sieve over `2..=bound`, plus the ordered list of
/// primes up to `bound`. Backs every prime sum and bulk evaluation in the
/// crate. Linear-sieve construction, so each composite is crossed exactly
/// once.
pub struct PrimeTable {
    bound: u64,
    /// spf[n] = least prime factor of n, for 0 <= n <= bound (entries 0,1 unused).
    spf: Vec<u32>,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn build(bound: u64) -> Result<Self> {
        if bound < 2 {
            return Err(Error::InvalidArgument(format!(
                "sieve bound must be >= 2, got {bound}"
            )));
        }
        if bound > u32::MAX as u64 {
            return Err(Error::RangeError(format!(
                "sieve bound {bound} exceeds the u32 spf cell size"
            )));
        }
        let n = bound as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes: Vec<u64> = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u64);
            }
            let lead = spf[i];
            for &p in &primes {
                let p = p as usize;
                if p > lead as usize || i * p > n {
                    break;
                }
                spf[i * p] = p as u32;
            }
        }
        Ok(PrimeTable { bound, spf, primes })
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Least prime factor of n; requires 2 <= n <= bound.
    pub fn spf(&self, n: u64) -> u64 {
        debug_assert!(n >= 2 && n <= self.bound);
        self.spf[n as usize] as u64
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && n <= self.bound && self.spf[n as usize] as u64 == n
    }

    /// Primes p with lo < p <= hi, as a subslice of the prime list.
    pub fn primes_in(&self, lo: u64, hi: u64) -> &[u64] {
        let start = self.primes.partition_point(|&p| p <= lo);
        let end = self.primes.partition_point(|&p| p <= hi);
        &self.primes[start..end]
    }
}

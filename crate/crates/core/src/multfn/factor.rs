//! Integer factorization: spf walk inside the sieve, trial division plus
//! Brent's cycle method above it. Everything is deterministic — the rho
//! "random" parameters follow a fixed schedule — so repeated runs agree.

use dashmap::DashMap;
use std::sync::OnceLock;

use super::prime_table::PrimeTable;
use crate::error::{Error, Result};
use crate::numeric::gcd_u64;

/// Trial-divide by table primes up to this bound before switching to rho.
const TRIAL_BOUND: u64 = 1 << 12;

/// Bounded concurrent memo for factorizations above the sieve range.
/// Insertions stop at capacity; entries are never evicted. Hits only ever
/// short-circuit a deterministic computation, so cache state cannot change
/// results.
pub struct FactorCache {
    map: DashMap<u64, Vec<(u64, u32)>>,
    capacity: usize,
}

impl FactorCache {
    pub fn new(capacity: usize) -> Self {
        FactorCache {
            map: DashMap::new(),
            capacity,
        }
    }

    fn get(&self, n: u64) -> Option<Vec<(u64, u32)>> {
        self.map.get(&n).map(|r| r.clone())
    }

    fn put(&self, n: u64, factors: &[(u64, u32)]) {
        if self.map.len() < self.capacity {
            self.map.insert(n, factors.to_vec());
        }
    }
}

fn global_cache() -> &'static FactorCache {
    static CACHE: OnceLock<FactorCache> = OnceLock::new();
    CACHE.get_or_init(|| FactorCache::new(1 << 20))
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, exact for all u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Floyd rho with the polynomial x^2 + c, batching gcds 64 steps at a time.
/// The caller walks c upward from 1, so the whole search is a fixed schedule.
fn rho_once(n: u64, c: u64) -> Option<u64> {
    let step = |v: u64| (mulmod(v, v, n) + c) % n;
    let (mut x, mut y) = (2u64, 2u64);
    let (mut xs, mut ys) = (x, y);
    let mut prod = 1u64;
    for count in 1u64..(1 << 22) {
        x = step(x);
        y = step(step(y));
        if x == y {
            return None; // cycle closed without exposing a factor
        }
        prod = mulmod(prod, x.abs_diff(y), n);
        if count % 64 == 0 {
            let d = gcd_u64(prod, n);
            if d > 1 {
                if d < n {
                    return Some(d);
                }
                // overshot: replay the last batch with per-step gcds
                let (mut xr, mut yr) = (xs, ys);
                for _ in 0..64 {
                    xr = step(xr);
                    yr = step(step(yr));
                    let g = gcd_u64(xr.abs_diff(yr), n);
                    if g > 1 && g < n {
                        return Some(g);
                    }
                }
                return None;
            }
            xs = x;
            ys = y;
            prod = 1;
        }
    }
    None
}

fn factor_u64_into(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime_u64(n) {
        out.push(n);
        return;
    }
    let mut c = 1u64;
    loop {
        if let Some(d) = rho_once(n, c) {
            factor_u64_into(d, out);
            factor_u64_into(n / d, out);
            return;
        }
        c += 1;
    }
}

/// Factor `n >= 1` into (prime, exponent) pairs with primes strictly
/// increasing. Uses the spf table for n <= bound, then trial division by
/// table primes up to 2^12, then deterministic Brent rho. Results above the
/// sieve range are memoized in a bounded shared cache.
pub fn factorize(n: u64, table: &PrimeTable) -> Result<Vec<(u64, u32)>> {
    if n == 0 {
        return Err(Error::InvalidArgument("cannot factor 0".into()));
    }
    if n <= table.bound() {
        return Ok(factorize_sieved(n, table));
    }
    if let Some(hit) = global_cache().get(n) {
        return Ok(hit);
    }
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut rest = n;
    for &p in table.primes() {
        if p > TRIAL_BOUND || p * p > rest {
            break;
        }
        if rest % p == 0 {
            let mut e = 0u32;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        if rest <= table.bound() {
            break;
        }
    }
    if rest > 1 {
        if rest <= table.bound() {
            factors.extend(factorize_sieved(rest, table));
        } else {
            let mut primes = Vec::new();
            factor_u64_into(rest, &mut primes);
            primes.sort_unstable();
            let mut i = 0;
            while i < primes.len() {
                let p = primes[i];
                let mut e = 0u32;
                while i < primes.len() && primes[i] == p {
                    e += 1;
                    i += 1;
                }
                factors.push((p, e));
            }
        }
    }
    factors.sort_unstable_by_key(|&(p, _)| p);
    global_cache().put(n, &factors);
    Ok(factors)
}

fn factorize_sieved(mut n: u64, table: &PrimeTable) -> Vec<(u64, u32)> {
    let mut factors: Vec<(u64, u32)> = Vec::new();
    while n > 1 {
        let p = table.spf(n);
        let mut e = 0u32;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        factors.push((p, e));
    }
    factors
}

/// Number of prime factors of n counted with multiplicity.
pub fn big_omega(n: u64, table: &PrimeTable) -> Result<u32> {
    Ok(factorize(n, table)?.iter().map(|&(_, e)| e).sum())
}

//! Folner boxes, the prime-sum functionals F_N / G_N / G_{d,N},
//! concentration deficits for linear and quadratic arguments,
//! Turan-Kubilius variance, and the exact-divisibility statistics w_{Q,N}.

use num_complex::Complex64;

use crate::distance::PrimeSetSpec;
use crate::error::{Error, Result};
use crate::multfn::{factorize, DirichletCharacter, MultFnSpec, PrimeTable};
use crate::numeric::{parallel_block_sum_f64, pairwise_sum};
use crate::quadforms::QuadForm;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// An element of a Folner box stored as its exponent vector over the box
/// primes; the integer magnitude is materialized only on demand and only
/// when it fits in 128 bits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FolnerElement {
    /// (prime, exponent), primes strictly increasing.
    pub exponents: Vec<(u64, u32)>,
}

impl FolnerElement {
    pub fn unit() -> Self {
        FolnerElement { exponents: Vec::new() }
    }

    pub fn magnitude_u128(&self) -> Result<u128> {
        let mut acc: u128 = 1;
        for &(p, e) in &self.exponents {
            for _ in 0..e {
                acc = acc.checked_mul(p as u128).ok_or_else(|| {
                    Error::RangeError("Folner element magnitude exceeds 128 bits".into())
                })?;
            }
        }
        Ok(acc)
    }

    /// f at this element, straight from the exponent vector.
    pub fn eval(&self, f: &MultFnSpec) -> Complex64 {
        self.exponents
            .iter()
            .map(|&(p, e)| f.prime_value(p).powi(e as i32))
            .product()
    }

    /// The magnitude reduced mod m, via modular exponentiation.
    pub fn magnitude_mod(&self, m: u64) -> u64 {
        if m == 1 {
            return 0;
        }
        let mut acc: u64 = 1;
        for &(p, e) in &self.exponents {
            let pe = crate::numeric::modpow_u64(p % m, e as u64, m);
            acc = ((acc as u128 * pe as u128) % m as u128) as u64;
        }
        acc
    }
}

/// Exhaustive enumeration or deterministic uniform sampling of a box.
#[derive(Clone, Copy, Debug)]
pub enum BoxMode {
    Exhaustive,
    Sampled { count: usize, seed: u64 },
}

/// Size cap for exhaustive enumeration.
pub const EXHAUSTIVE_LIMIT: u128 = 1_000_000;

fn small_primes_up_to(k: u64) -> Vec<u64> {
    let mut primes = Vec::new();
    'outer: for n in 2..=k {
        for &p in &primes {
            if p * p > n {
                break;
            }
            if n % p == 0 {
                continue 'outer;
            }
        }
        primes.push(n);
    }
    primes
}

fn enumerate_box(
    primes: &[u64],
    lo: &[u32],
    hi: &[u32],
    mode: BoxMode,
) -> Result<Vec<FolnerElement>> {
    debug_assert_eq!(primes.len(), lo.len());
    debug_assert_eq!(primes.len(), hi.len());
    let mut size: u128 = 1;
    for i in 0..primes.len() {
        if hi[i] < lo[i] {
            return Ok(vec![]);
        }
        size = size.saturating_mul((hi[i] - lo[i] + 1) as u128);
    }
    match mode {
        BoxMode::Exhaustive => {
            if size > EXHAUSTIVE_LIMIT {
                return Err(Error::SizeError(format!(
                    "box has {size} elements, above the exhaustive cap {EXHAUSTIVE_LIMIT}; use sampled mode"
                )));
            }
            let mut out = Vec::with_capacity(size as usize);
            let mut current: Vec<u32> = lo.to_vec();
            loop {
                out.push(FolnerElement {
                    exponents: primes
                        .iter()
                        .zip(&current)
                        .map(|(&p, &e)| (p, e))
                        .collect(),
                });
                // odometer increment
                let mut i = 0;
                loop {
                    if i == primes.len() {
                        return Ok(out);
                    }
                    if current[i] < hi[i] {
                        current[i] += 1;
                        break;
                    }
                    current[i] = lo[i];
                    i += 1;
                }
            }
        }
        BoxMode::Sampled { count, seed } => {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut out = Vec::with_capacity(count);
            for _ in 0..count {
                let exponents = primes
                    .iter()
                    .enumerate()
                    .map(|(i, &p)| (p, rng.gen_range(lo[i]..=hi[i])))
                    .collect();
                out.push(FolnerElement { exponents });
            }
            Ok(out)
        }
    }
}

/// The box {prod_{p <= K} p^{a_p} : K < a_p <= 2K}.
pub fn folner_box(k: u64, mode: BoxMode) -> Result<Vec<FolnerElement>> {
    if k < 1 {
        return Err(Error::InvalidArgument("need K >= 1".into()));
    }
    let primes = small_primes_up_to(k);
    let lo = vec![k as u32 + 1; primes.len()];
    let hi = vec![2 * k as u32; primes.len()];
    enumerate_box(&primes, &lo, &hi, mode)
}

/// The restricted boxes over the mod-8 prime classes:
/// j = 1 uses primes p = 1, 3 (mod 8), j = 2 uses p = 1, 7 (mod 8),
/// with exponents K < l_p <= floor(3K/2).
pub fn restricted_folner_box(j: u8, k: u64, mode: BoxMode) -> Result<Vec<FolnerElement>> {
    if k < 1 {
        return Err(Error::InvalidArgument("need K >= 1".into()));
    }
    let classes: &[u64] = match j {
        1 => &[1, 3],
        2 => &[1, 7],
        _ => return Err(Error::InvalidArgument("j must be 1 or 2".into())),
    };
    let primes: Vec<u64> = small_primes_up_to(k)
        .into_iter()
        .filter(|&p| classes.contains(&(p % 8)))
        .collect();
    let lo = vec![k as u32 + 1; primes.len()];
    let hi = vec![(3 * k / 2) as u32; primes.len()];
    enumerate_box(&primes, &lo, &hi, mode)
}

/// A pretentious target chi * n^{it}.
#[derive(Clone, Debug)]
pub struct PretentiousTarget {
    pub chi: DirichletCharacter,
    pub t: f64,
}

impl PretentiousTarget {
    pub fn new(chi: DirichletCharacter, t: f64) -> Self {
        PretentiousTarget { chi, t }
    }

    pub fn trivial() -> Self {
        PretentiousTarget {
            chi: DirichletCharacter::principal(1).expect("modulus 1 is valid"),
            t: 0.0,
        }
    }

    /// f(p) * conj(chi(p)) * p^{-it} - 1, the summand of the functionals.
    fn summand(&self, f: &MultFnSpec, p: u64) -> Complex64 {
        let phase = -self.t * (p as f64).ln();
        let p_it = Complex64::new(phase.cos(), phase.sin());
        f.prime_value(p) * self.chi.eval(p as i128).conj() * p_it - Complex64::new(1.0, 0.0)
    }
}

/// F_N(f, K) = sum_{K < p <= N} (1/p) (f(p) conj(chi(p)) p^{-it} - 1).
pub fn f_functional(
    f: &MultFnSpec,
    target: &PretentiousTarget,
    k: u64,
    n_max: u64,
    table: &PrimeTable,
) -> Result<Complex64> {
    if n_max > table.bound() {
        return Err(Error::RangeError(format!(
            "N = {n_max} exceeds the sieve bound {}",
            table.bound()
        )));
    }
    let primes = table.primes_in(k, n_max);
    let terms: Vec<Complex64> = primes
        .iter()
        .map(|&p| target.summand(f, p) / p as f64)
        .collect();
    Ok(pairwise_sum(&terms))
}

/// G_N(f, K): the same sum restricted to p = 1 (mod 4), without the
/// factor 2.
pub fn g_functional(
    f: &MultFnSpec,
    target: &PretentiousTarget,
    k: u64,
    n_max: u64,
    table: &PrimeTable,
) -> Result<Complex64> {
    if n_max > table.bound() {
        return Err(Error::RangeError(format!(
            "N = {n_max} exceeds the sieve bound {}",
            table.bound()
        )));
    }
    let primes = table.primes_in(k, n_max);
    let terms: Vec<Complex64> = primes
        .iter()
        .filter(|&&p| p % 4 == 1)
        .map(|&p| target.summand(f, p) / p as f64)
        .collect();
    Ok(pairwise_sum(&terms))
}

/// G_{d,N}(f, K) = 2 sum_{K < p <= N, p in P_d} (1/p)(f(p) conj(chi(p)) p^{-it} - 1).
pub fn g_functional_d(
    f: &MultFnSpec,
    target: &PretentiousTarget,
    d: i64,
    k: u64,
    n_max: u64,
    table: &PrimeTable,
) -> Result<Complex64> {
    if n_max > table.bound() {
        return Err(Error::RangeError(format!(
            "N = {n_max} exceeds the sieve bound {}",
            table.bound()
        )));
    }
    let set = PrimeSetSpec::LegendreSet(d);
    let primes = table.primes_in(k, n_max);
    let terms: Vec<Complex64> = primes
        .iter()
        .filter(|&&p| set.contains(p))
        .map(|&p| target.summand(f, p) / p as f64)
        .collect();
    Ok(pairwise_sum(&terms) * 2.0)
}

fn check_q_support(q: u64, k: u64, table: &PrimeTable) -> Result<()> {
    if q == 0 {
        return Err(Error::InvalidArgument("Q must be positive".into()));
    }
    for (p, _) in factorize(q, table)? {
        if p > k {
            return Err(Error::InvalidArgument(format!(
                "Q has the prime factor {p} > K = {k}; the concentration window requires support below K"
            )));
        }
    }
    Ok(())
}

/// E_{n in [N]} |f(Qn+1) - (Qn)^{it} exp(F_N(f,K))|.
pub fn linear_deficit(
    f: &MultFnSpec,
    target: &PretentiousTarget,
    q: u64,
    k: u64,
    n_max: u64,
    table: &PrimeTable,
) -> Result<f64> {
    check_q_support(q, k, table)?;
    q.checked_mul(n_max)
        .and_then(|v| v.checked_add(1))
        .ok_or_else(|| Error::RangeError("Q*N+1 overflows".into()))?;
    let osc = f_functional(f, target, k, n_max, table)?.exp();
    let t = target.t;
    let qf = q as f64;
    let sum = try_sum_rows(n_max as usize, 8192, |i| {
        let n = (i + 1) as u64;
        let v = f.eval((q as i128) * n as i128 + 1, table)?;
        let phase = t * (qf * n as f64).ln();
        let target_val = Complex64::new(phase.cos(), phase.sin()) * osc;
        Ok((v - target_val).norm())
    })?;
    Ok(sum / n_max as f64)
}

/// E_{m,n in [N]} |f((Qm+a)^2 + d (Qn+b)^2) - Q^{2it} (m^2+dn^2)^{it} exp(G_{d,N}(f,K))|.
///
/// For d < 0 the oscillating factor uses |m^2 + d n^2|^{it} and skips the
/// measure-zero cells where the form vanishes.
#[allow(clippy::too_many_arguments)]
pub fn quadratic_deficit(
    f: &MultFnSpec,
    target: &PretentiousTarget,
    q: u64,
    k: u64,
    n_max: u64,
    d: i64,
    offsets: (u64, u64),
    table: &PrimeTable,
) -> Result<f64> {
    check_q_support(q, k, table)?;
    let form = QuadForm::sum_d_squares(d);
    if !form.is_irreducible() {
        return Err(Error::InvalidArgument(format!(
            "m^2 + {d} n^2 is reducible; concentration requires an irreducible form"
        )));
    }
    let osc = g_functional_d(f, target, d, k, n_max, table)?.exp();
    let t = target.t;
    let (a, b) = offsets;
    let q2it = {
        let phase = 2.0 * t * (q as f64).ln();
        Complex64::new(phase.cos(), phase.sin())
    };
    let qi = q as i128;
    let sum = try_sum_rows(n_max as usize, 8, |mi| {
        let m = (mi + 1) as i128;
        let x = qi * m + a as i128;
        let x2 = x * x;
        let mut acc = 0.0;
        for nn in 1..=n_max as i128 {
            let y = qi * nn + b as i128;
            let v = x2 + d as i128 * y * y;
            let raw = (m * m + d as i128 * nn * nn).unsigned_abs();
            if raw == 0 {
                continue;
            }
            let phase = t * (raw as f64).ln();
            let target_val = q2it * Complex64::new(phase.cos(), phase.sin()) * osc;
            acc += (f.eval(v, table)? - target_val).norm();
        }
        Ok(acc)
    })?;
    Ok(sum / (n_max as f64 * n_max as f64))
}

fn try_sum_rows<F>(rows: usize, block: usize, f: F) -> Result<f64>
where
    F: Fn(usize) -> Result<f64> + Sync,
{
    use rayon::prelude::*;
    let nblocks = rows.div_ceil(block);
    let partials: Vec<Result<f64>> = (0..nblocks)
        .into_par_iter()
        .map(|bi| {
            let lo = bi * block;
            let hi = usize::min(lo + block, rows);
            let mut acc = 0.0;
            for i in lo..hi {
                acc += f(i)?;
            }
            Ok(acc)
        })
        .collect();
    let mut vals = Vec::with_capacity(nblocks);
    for r in partials {
        vals.push(r?);
    }
    Ok(crate::numeric::pairwise_sum_f64(&vals))
}

/// The additive function h(p^k) = f(p^k) - 1 attached to a completely
/// multiplicative f, evaluated by summing over the prime powers exactly
/// dividing the argument.
#[derive(Clone, Debug)]
pub struct AdditiveFn {
    f: MultFnSpec,
}

/// h with h(n) = sum over p^k || n of (f(p^k) - 1).
pub fn additive_from_mult(f: &MultFnSpec) -> AdditiveFn {
    AdditiveFn { f: f.clone() }
}

impl AdditiveFn {
    pub fn prime_term(&self, p: u64) -> Complex64 {
        self.f.prime_value(p) - Complex64::new(1.0, 0.0)
    }

    pub fn eval(&self, n: u64, table: &PrimeTable) -> Result<Complex64> {
        let mut acc = ZERO;
        for (p, e) in factorize(n, table)? {
            acc += self.f.prime_value(p).powi(e as i32) - Complex64::new(1.0, 0.0);
        }
        Ok(acc)
    }
}

/// E_{n in [N]} |h(Qn+1) - H_N(h,K)|^2 with H_N = sum_{K<p<=N} h(p)/p.
pub fn turan_kubilius_variance(
    h: &AdditiveFn,
    q: u64,
    k: u64,
    n_max: u64,
    table: &PrimeTable,
) -> Result<f64> {
    check_q_support(q, k, table)?;
    let primes = table.primes_in(k, n_max);
    let mean_terms: Vec<Complex64> = primes
        .iter()
        .map(|&p| h.prime_term(p) / p as f64)
        .collect();
    let h_n = pairwise_sum(&mean_terms);
    let sum = try_sum_rows(n_max as usize, 4096, |i| {
        let n = (i + 1) as u64;
        let arg = q
            .checked_mul(n)
            .and_then(|v| v.checked_add(1))
            .ok_or_else(|| Error::RangeError("Qn+1 overflows".into()))?;
        Ok((h.eval(arg, table)? - h_n).norm_sqr())
    })?;
    Ok(sum / n_max as f64)
}

/// The tail sum sum_{K < p <= N} |h(p)|^2 / p that controls the
/// Turan-Kubilius variance.
pub fn tk_tail_sum(h: &AdditiveFn, k: u64, n_max: u64, table: &PrimeTable) -> f64 {
    let primes = table.primes_in(k, n_max);
    let terms: Vec<f64> = primes
        .iter()
        .map(|&p| h.prime_term(p).norm_sqr() / p as f64)
        .collect();
    crate::numeric::pairwise_sum_f64(&terms)
}

/// Which argument the divisibility statistic runs over.
#[derive(Clone, Copy, Debug)]
pub enum WArgument {
    /// Qn + 1 over n in [N].
    Linear,
    /// (Qm+1)^2 + d (Qn)^2 over (m, n) in [N]^2.
    Quadratic { d: i64 },
}

/// Empirical frequency of exact divisibility: the fraction of index points
/// whose argument is divisible by p and q exactly once each.
pub fn w_statistic(
    p: u64,
    q_prime: u64,
    q: u64,
    n_max: u64,
    arg: WArgument,
) -> Result<f64> {
    if !crate::multfn::is_prime_u64(p) || !crate::multfn::is_prime_u64(q_prime) {
        return Err(Error::InvalidArgument("p and q must be prime".into()));
    }
    if q % p == 0 || q % q_prime == 0 {
        return Err(Error::InvalidArgument("p and q must not divide Q".into()));
    }
    let exactly_divides = |prime: u64, v: i128| -> bool {
        let pr = prime as i128;
        v.rem_euclid(pr) == 0 && v.rem_euclid(pr * pr) != 0
    };
    match arg {
        WArgument::Linear => {
            let hits = parallel_block_sum_f64(n_max as usize, 65_536, |i| {
                let n = (i + 1) as i128;
                let v = q as i128 * n + 1;
                if exactly_divides(p, v) && exactly_divides(q_prime, v) {
                    1.0
                } else {
                    0.0
                }
            });
            Ok(hits / n_max as f64)
        }
        WArgument::Quadratic { d } => {
            let hits = parallel_block_sum_f64(n_max as usize, 16, |mi| {
                let m = (mi + 1) as i128;
                let x = q as i128 * m + 1;
                let x2 = x * x;
                let mut acc = 0.0;
                for nn in 1..=n_max as i128 {
                    let y = q as i128 * nn;
                    let v = x2 + d as i128 * y * y;
                    if exactly_divides(p, v) && exactly_divides(q_prime, v) {
                        acc += 1.0;
                    }
                }
                acc
            });
            Ok(hits / (n_max as f64 * n_max as f64))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multfn::builtin;

    fn table() -> PrimeTable {
        PrimeTable::build(100_000).unwrap()
    }

    #[test]
    fn folner_box_small_cases() {
        let b1 = folner_box(1, BoxMode::Exhaustive).unwrap();
        assert_eq!(b1, vec![FolnerElement::unit()]);
        assert_eq!(b1[0].magnitude_u128().unwrap(), 1);

        let b2 = folner_box(2, BoxMode::Exhaustive).unwrap();
        let mags: Vec<u128> = b2.iter().map(|e| e.magnitude_u128().unwrap()).collect();
        assert_eq!(mags.len(), 2);
        assert!(mags.contains(&8) && mags.contains(&16));

        let b3 = folner_box(3, BoxMode::Exhaustive).unwrap();
        assert_eq!(b3.len(), 9);
        for e in &b3 {
            for &(_, a) in &e.exponents {
                assert!((4..=6).contains(&a));
            }
        }
    }

    #[test]
    fn restricted_box_cases() {
        // K = 3: only the prime 3 (3 = 3 mod 8), exponents in (3, 4.5] -> {4}
        let b = restricted_folner_box(1, 3, BoxMode::Exhaustive).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].exponents, vec![(3, 4)]);
        assert_eq!(b[0].magnitude_u128().unwrap(), 81);

        // K = 6: no prime <= 6 is 1 or 7 mod 8
        let b = restricted_folner_box(2, 6, BoxMode::Exhaustive).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0], FolnerElement::unit());

        // K = 11: primes {3, 11}, exponents in (11, 16] -> 5 choices each
        let b = restricted_folner_box(1, 11, BoxMode::Exhaustive).unwrap();
        assert_eq!(b.len(), 25);
    }

    #[test]
    fn sampled_mode_is_deterministic() {
        let a = folner_box(20, BoxMode::Sampled { count: 100, seed: 7 }).unwrap();
        let b = folner_box(20, BoxMode::Sampled { count: 100, seed: 7 }).unwrap();
        assert_eq!(a, b);
        let c = folner_box(20, BoxMode::Sampled { count: 100, seed: 8 }).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn oversized_exhaustive_box_is_rejected() {
        assert!(matches!(
            folner_box(23, BoxMode::Exhaustive),
            Err(Error::SizeError(_))
        ));
    }

    #[test]
    fn folner_eval_matches_magnitude_eval() {
        let t = table();
        let f = MultFnSpec::product(builtin::modified_char3(), MultFnSpec::archimedean(0.3));
        for el in folner_box(5, BoxMode::Exhaustive).unwrap() {
            let m = el.magnitude_u128().unwrap();
            let direct = f.eval(m as i128, &t).unwrap();
            let symbolic = el.eval(&f);
            assert!((direct - symbolic).norm() < 1e-9, "at {m}");
        }
    }

    #[test]
    fn magnitude_mod_matches() {
        let el = FolnerElement { exponents: vec![(2, 10), (3, 5)] };
        let m = el.magnitude_u128().unwrap(); // 1024 * 243 = 248832
        assert_eq!(m, 248_832);
        for q in [7u64, 100, 248_832] {
            assert_eq!(el.magnitude_mod(q), (m % q as u128) as u64);
        }
    }

    #[test]
    fn f_functional_vanishes_on_exact_twist() {
        let t = table();
        let chi = DirichletCharacter::legendre(5).unwrap();
        let f = MultFnSpec::product(
            MultFnSpec::character(chi.clone()),
            MultFnSpec::archimedean(1.1),
        );
        let target = PretentiousTarget::new(chi, 1.1);
        let v = f_functional(&f, &target, 5, 10_000, &t).unwrap();
        assert!(v.norm() < 1e-12, "{v}");
    }

    #[test]
    fn f_functional_for_liouville_is_minus_two_tail() {
        let t = table();
        let f = MultFnSpec::liouville();
        let v = f_functional(&f, &PretentiousTarget::trivial(), 10, 1000, &t).unwrap();
        let expect: f64 = t.primes_in(10, 1000).iter().map(|&p| -2.0 / p as f64).sum();
        assert!((v.re - expect).abs() < 1e-12 && v.im.abs() < 1e-15);
    }

    #[test]
    fn g_functional_conventions() {
        let t = table();
        let f = MultFnSpec::liouville();
        let target = PretentiousTarget::trivial();
        let plain = g_functional(&f, &target, 10, 5000, &t).unwrap();
        let with_d = g_functional_d(&f, &target, 1, 10, 5000, &t).unwrap();
        // P_1 = {p = 1 mod 4}: the d-convention is exactly twice the plain sum
        assert!((with_d - plain * 2.0).norm() < 1e-12);
        // and for d = 2 the sum runs over p = 1,3 mod 8
        let d2 = g_functional_d(&f, &target, 2, 10, 5000, &t).unwrap();
        let expect: f64 = t
            .primes_in(10, 5000)
            .iter()
            .filter(|&&p| p % 8 == 1 || p % 8 == 3)
            .map(|&p| -4.0 / p as f64)
            .sum();
        assert!((d2.re - expect).abs() < 1e-12);
    }

    #[test]
    fn linear_deficit_exact_zero_for_modified_char() {
        let t = table();
        let f = builtin::modified_char3();
        let chi = DirichletCharacter::legendre(3).unwrap();
        let target = PretentiousTarget::new(chi, 0.0);
        let v = linear_deficit(&f, &target, 243, 3, 10_000, &t).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn linear_deficit_even_perturbation() {
        let t = table();
        let f = MultFnSpec::finite_perturbation(
            MultFnSpec::one(),
            vec![(2, Complex64::new(-1.0, 0.0))],
        )
        .unwrap();
        let target = PretentiousTarget::trivial();
        // Q even: Qn+1 is odd, so the perturbation never fires
        let v = linear_deficit(&f, &target, 6, 3, 5000, &t).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn linear_deficit_rejects_large_prime_support() {
        let t = table();
        let f = MultFnSpec::one();
        let r = linear_deficit(&f, &PretentiousTarget::trivial(), 10, 3, 100, &t);
        assert!(matches!(r, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn sparse_flip_deficit_bounded_by_tail() {
        let t = table();
        // flips on thin primes above K: the deficit is at most ~2 * density
        // of n with a flipped prime dividing Qn+1, which is <= 2 * tail sum
        let flips = vec![101u64, 211, 401, 809, 1601];
        let eps: f64 = flips.iter().map(|&p| 1.0 / p as f64).sum();
        let f = MultFnSpec::sparse_flip(MultFnSpec::one(), flips).unwrap();
        let q: u64 = 2 * 3 * 5 * 7; // primes <= K = 10
        let v = linear_deficit(&f, &PretentiousTarget::trivial(), q, 10, 100_000, &t).unwrap();
        assert!(v <= 4.0 * eps, "deficit {v} vs 4*eps = {}", 4.0 * eps);
    }

    #[test]
    fn quadratic_deficit_zero_for_exact_constant() {
        let t = table();
        let f = MultFnSpec::one();
        let v = quadratic_deficit(
            &f,
            &PretentiousTarget::trivial(),
            2,
            2,
            200,
            1,
            (1, 0),
            &t,
        )
        .unwrap();
        assert!(v < 1e-12);
    }

    #[test]
    fn quadratic_deficit_rejects_reducible_form() {
        let t = table();
        let r = quadratic_deficit(
            &MultFnSpec::one(),
            &PretentiousTarget::trivial(),
            2,
            2,
            50,
            -1,
            (1, 0),
            &t,
        );
        assert!(matches!(r, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn additive_function_values() {
        let t = table();
        let h = additive_from_mult(&MultFnSpec::one());
        assert_eq!(h.eval(360, &t).unwrap(), ZERO);
        let h = additive_from_mult(&MultFnSpec::liouville());
        // h(p) = -2, h(6) = h(2) + h(3) = -4
        assert_eq!(h.eval(6, &t).unwrap().re, -4.0);
        // h(4) = lambda(4) - 1 = 0
        assert_eq!(h.eval(4, &t).unwrap().re, 0.0);
        let hp = h.prime_term(7);
        assert_eq!(hp.re, -2.0);
    }

    #[test]
    fn tk_variance_zero_for_zero_h() {
        let t = table();
        let h = additive_from_mult(&MultFnSpec::one());
        let v = turan_kubilius_variance(&h, 6, 3, 10_000, &t).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn tk_variance_zero_for_killed_support() {
        let t = table();
        // h vanishes except at 2, 3; Q = 6 makes Qn+1 coprime to both
        let f = MultFnSpec::finite_perturbation(
            MultFnSpec::one(),
            vec![(2, Complex64::new(-1.0, 0.0)), (3, Complex64::new(0.0, 1.0))],
        )
        .unwrap();
        let h = additive_from_mult(&f);
        let v = turan_kubilius_variance(&h, 6, 3, 10_000, &t).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn w_statistic_linear_matches_density() {
        let n = 100_000u64;
        let w = w_statistic(5, 5, 6, n, WArgument::Linear).unwrap();
        let expect = (1.0 / 5.0) * (1.0 - 1.0 / 5.0);
        assert!((w - expect).abs() < 25.0 / n as f64, "{w} vs {expect}");
    }

    #[test]
    fn w_statistic_multiplicativity() {
        let n = 100_000u64;
        let wpq = w_statistic(5, 13, 6, n, WArgument::Linear).unwrap();
        let wp = w_statistic(5, 5, 6, n, WArgument::Linear).unwrap();
        let wq = w_statistic(13, 13, 6, n, WArgument::Linear).unwrap();
        assert!((wpq - wp * wq).abs() <= 10.0 / n as f64);
    }

    #[test]
    fn w_statistic_quadratic_case() {
        let n = 2048u64;
        let w = w_statistic(5, 5, 6, n, WArgument::Quadratic { d: 1 }).unwrap();
        let expect = (2.0 / 5.0) * (1.0 - 1.0 / 5.0f64).powi(2);
        assert!((w - expect).abs() < 0.02, "{w} vs {expect}");
    }

    #[test]
    fn w_statistic_rejects_bad_args() {
        assert!(w_statistic(4, 5, 6, 10, WArgument::Linear).is_err());
        assert!(w_statistic(5, 3, 6, 10, WArgument::Linear).is_err());
    }
}

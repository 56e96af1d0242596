//! Closed descriptions of completely multiplicative functions and their
//! evaluation.
//!
//! A `MultFnSpec` is an algebraic description, not a bare callable: knowing
//! the structure lets us evaluate f at a huge highly-composite Q directly
//! from an exponent vector, take fast residue-based paths for (modified)
//! characters, and decide membership in the unit-modulus class.
//!
//! Values are extended to all of Z by f(0) = 0 and f(-n) = f(n).

use std::sync::Arc;

use num_complex::Complex64;

use super::character::DirichletCharacter;
use super::factor::factorize;
use super::prime_table::PrimeTable;
use crate::error::{Error, Result};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Debug)]
enum Variant {
    /// The constant function 1.
    One,
    /// (-1)^Omega(n).
    Liouville,
    /// A Dirichlet character, vanishing where gcd(n, q) > 1.
    Character(DirichletCharacter),
    /// chi at primes not dividing the modulus, 1 at primes dividing it.
    ModifiedCharacter(DirichletCharacter),
    /// n^{it} = exp(i t ln n).
    Archimedean(f64),
    /// base with finitely many prime values overridden by unit-circle values.
    FinitePerturbation(Arc<MultFnSpec>, Vec<(u64, Complex64)>),
    /// base with the sign flipped (value negated) on an explicit prime set.
    SparseFlip(Arc<MultFnSpec>, Vec<u64>),
    Product(Arc<MultFnSpec>, Arc<MultFnSpec>),
    Conjugate(Arc<MultFnSpec>),
}

/// A completely multiplicative function with values in the closed unit disk.
#[derive(Clone, Debug)]
pub struct MultFnSpec {
    variant: Variant,
    /// Values at the primes below `PRIME_CACHE_LIMIT`, filled at construction.
    small_prime_values: Vec<(u64, Complex64)>,
}

const PRIME_CACHE_LIMIT: u64 = 256;
const SMALL_PRIMES: [u64; 54] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
    97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191,
    193, 197, 199, 211, 223, 227, 229, 233, 239, 241, 251,
];

impl MultFnSpec {
    fn from_variant(variant: Variant) -> Self {
        let mut spec = MultFnSpec {
            variant,
            small_prime_values: Vec::new(),
        };
        spec.small_prime_values = SMALL_PRIMES
            .iter()
            .map(|&p| (p, spec.prime_value_uncached(p)))
            .collect();
        spec
    }

    pub fn one() -> Self {
        Self::from_variant(Variant::One)
    }

    pub fn liouville() -> Self {
        Self::from_variant(Variant::Liouville)
    }

    pub fn character(chi: DirichletCharacter) -> Self {
        Self::from_variant(Variant::Character(chi))
    }

    /// Completely multiplicative f with f(p) = chi(p) where chi(p) != 0 and
    /// f(p) = 1 where chi(p) = 0.
    pub fn modified_character(chi: DirichletCharacter) -> Self {
        Self::from_variant(Variant::ModifiedCharacter(chi))
    }

    pub fn archimedean(t: f64) -> Self {
        Self::from_variant(Variant::Archimedean(t))
    }

    /// Override f at finitely many primes with unit-circle values.
    pub fn finite_perturbation(base: MultFnSpec, overrides: Vec<(u64, Complex64)>) -> Result<Self> {
        for &(p, v) in &overrides {
            if !super::factor::is_prime_u64(p) {
                return Err(Error::InvalidArgument(format!("{p} is not prime")));
            }
            if (v.norm() - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidArgument(format!(
                    "override at {p} must lie on the unit circle, got {v}"
                )));
            }
        }
        let mut overrides = overrides;
        overrides.sort_unstable_by_key(|&(p, _)| p);
        overrides.dedup_by_key(|&mut (p, _)| p);
        Ok(Self::from_variant(Variant::FinitePerturbation(
            Arc::new(base),
            overrides,
        )))
    }

    /// Negate f at the primes of an explicit set.
    pub fn sparse_flip(base: MultFnSpec, primes: Vec<u64>) -> Result<Self> {
        for &p in &primes {
            if !super::factor::is_prime_u64(p) {
                return Err(Error::InvalidArgument(format!("{p} is not prime")));
            }
        }
        let mut primes = primes;
        primes.sort_unstable();
        primes.dedup();
        Ok(Self::from_variant(Variant::SparseFlip(
            Arc::new(base),
            primes,
        )))
    }

    pub fn product(left: MultFnSpec, right: MultFnSpec) -> Self {
        Self::from_variant(Variant::Product(Arc::new(left), Arc::new(right)))
    }

    pub fn conjugate(inner: MultFnSpec) -> Self {
        Self::from_variant(Variant::Conjugate(Arc::new(inner)))
    }

    /// Structural test for the constant-1 function (used by discrete
    /// measures to track the weight at 1).
    pub fn is_one(&self) -> bool {
        match &self.variant {
            Variant::One => true,
            Variant::Archimedean(t) => *t == 0.0,
            Variant::Conjugate(inner) => inner.is_one(),
            Variant::Product(l, r) => l.is_one() && r.is_one(),
            Variant::FinitePerturbation(_, overrides) if !overrides.is_empty() => false,
            Variant::SparseFlip(_, primes) if !primes.is_empty() => false,
            Variant::FinitePerturbation(base, _) | Variant::SparseFlip(base, _) => base.is_one(),
            _ => false,
        }
    }

    /// True when every value at n >= 1 has modulus 1 (the class of
    /// unit-modulus completely multiplicative functions). Characters fall
    /// outside: they vanish at primes dividing the modulus.
    pub fn is_unit_modulus(&self) -> bool {
        match &self.variant {
            Variant::One | Variant::Liouville | Variant::ModifiedCharacter(_) => true,
            Variant::Archimedean(_) => true,
            Variant::Character(chi) => chi.modulus() == 1,
            Variant::FinitePerturbation(base, _) => base.is_unit_modulus(),
            Variant::SparseFlip(base, _) => base.is_unit_modulus(),
            Variant::Product(l, r) => l.is_unit_modulus() && r.is_unit_modulus(),
            Variant::Conjugate(inner) => inner.is_unit_modulus(),
        }
    }

    /// f(p) for a prime p, from the construction-time cache when available.
    pub fn prime_value(&self, p: u64) -> Complex64 {
        if p < PRIME_CACHE_LIMIT {
            if let Ok(i) = self.small_prime_values.binary_search_by_key(&p, |&(q, _)| q) {
                return self.small_prime_values[i].1;
            }
        }
        self.prime_value_uncached(p)
    }

    fn prime_value_uncached(&self, p: u64) -> Complex64 {
        match &self.variant {
            Variant::One => ONE,
            Variant::Liouville => -ONE,
            Variant::Character(chi) => chi.eval(p as i128),
            Variant::ModifiedCharacter(chi) => {
                if chi.modulus() % p == 0 {
                    ONE
                } else {
                    chi.eval(p as i128)
                }
            }
            Variant::Archimedean(t) => arch_value(*t, p as f64),
            Variant::FinitePerturbation(base, overrides) => {
                match overrides.binary_search_by_key(&p, |&(q, _)| q) {
                    Ok(i) => overrides[i].1,
                    Err(_) => base.prime_value(p),
                }
            }
            Variant::SparseFlip(base, primes) => {
                let v = base.prime_value(p);
                if primes.binary_search(&p).is_ok() {
                    -v
                } else {
                    v
                }
            }
            Variant::Product(l, r) => l.prime_value(p) * r.prime_value(p),
            Variant::Conjugate(inner) => inner.prime_value(p).conj(),
        }
    }

    /// f at an arbitrary integer (even extension; f(0) = 0). Arguments whose
    /// absolute value exceeds u64 territory are a range error unless a
    /// residue-based fast path applies.
    pub fn eval(&self, n: i128, table: &PrimeTable) -> Result<Complex64> {
        if n == 0 {
            return Ok(ZERO);
        }
        let m = n.unsigned_abs();
        self.eval_u128(m, table)
    }

    fn eval_u128(&self, m: u128, table: &PrimeTable) -> Result<Complex64> {
        debug_assert!(m > 0);
        match &self.variant {
            Variant::One => Ok(ONE),
            Variant::Character(chi) => Ok(chi.eval(
                (m % chi.modulus() as u128) as i128,
            )),
            Variant::ModifiedCharacter(chi) => Ok(eval_modified(chi, m)),
            Variant::Archimedean(t) => Ok(arch_value(*t, m as f64)),
            Variant::Conjugate(inner) => Ok(inner.eval_u128(m, table)?.conj()),
            Variant::Product(l, r) => Ok(l.eval_u128(m, table)? * r.eval_u128(m, table)?),
            Variant::FinitePerturbation(base, overrides) => {
                let mut rest = m;
                let mut acc = ONE;
                for &(p, v) in overrides {
                    let p = p as u128;
                    while rest % p == 0 {
                        rest /= p;
                        acc *= v;
                    }
                }
                Ok(acc * base.eval_u128(rest.max(1), table)?)
            }
            Variant::SparseFlip(base, primes) => {
                let mut sign = 1.0;
                for &p in primes {
                    let p = p as u128;
                    let mut m2 = m;
                    while m2 % p == 0 {
                        m2 /= p;
                        sign = -sign;
                    }
                }
                Ok(sign * base.eval_u128(m, table)?)
            }
            Variant::Liouville => {
                let n64 = u64::try_from(m).map_err(|_| {
                    Error::RangeError(format!("argument {m} exceeds the 64-bit factor range"))
                })?;
                let omega = super::factor::big_omega(n64, table)?;
                Ok(if omega % 2 == 0 { ONE } else { -ONE })
            }
        }
    }

    /// f at prod p^e over a factorization, without touching the integer.
    pub fn eval_factored(&self, factors: &[(u64, u32)]) -> Complex64 {
        factors
            .iter()
            .map(|&(p, e)| self.prime_value(p).powi(e as i32))
            .product()
    }

    /// Values f(1), ..., f(n_max) via one spf sweep; O(n_max) multiplications.
    /// The returned vector is 1-indexed (entry 0 is f(0) = 0).
    pub fn eval_range(&self, n_max: u64, table: &PrimeTable) -> Result<Vec<Complex64>> {
        if n_max > table.bound() {
            return Err(Error::RangeError(format!(
                "range {n_max} exceeds the sieve bound {}",
                table.bound()
            )));
        }
        let n = n_max as usize;
        let mut out = vec![ZERO; n + 1];
        if n >= 1 {
            out[1] = ONE;
        }
        for i in 2..=n {
            let p = table.spf(i as u64);
            out[i] = out[i / p as usize] * self.prime_value(p);
        }
        Ok(out)
    }
}

fn arch_value(t: f64, x: f64) -> Complex64 {
    // x^{it} = exp(i t ln x)
    let phase = t * x.ln();
    Complex64::new(phase.cos(), phase.sin())
}

/// Modified character at m: strip the primes dividing the modulus (they
/// carry value 1), then read chi at the cofactor's residue. No
/// factorization of m is ever needed.
fn eval_modified(chi: &DirichletCharacter, m: u128) -> Complex64 {
    let q = chi.modulus();
    if q == 1 {
        return ONE;
    }
    let mut rest = m;
    for &p in chi.modulus_primes() {
        let p = p as u128;
        while rest % p == 0 {
            rest /= p;
        }
    }
    chi.eval((rest % q as u128) as i128)
}

/// Convenience constructors for the functions used throughout the test and
/// CLI surfaces.
pub mod builtin {
    use super::*;

    /// The modified character attached to the Legendre character mod 3.
    pub fn modified_char3() -> MultFnSpec {
        MultFnSpec::modified_character(DirichletCharacter::legendre(3).expect("3 is prime"))
    }

    /// The modified character attached to the even real character mod 8.
    pub fn modified_char8_even() -> MultFnSpec {
        MultFnSpec::modified_character(DirichletCharacter::mod8_even())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> PrimeTable {
        PrimeTable::build(10_000).unwrap()
    }

    #[test]
    fn liouville_small_values() {
        let t = table();
        let f = MultFnSpec::liouville();
        let expect = [1.0, -1.0, -1.0, 1.0, -1.0, 1.0]; // lambda(1..6)
        for (i, &v) in expect.iter().enumerate() {
            assert_eq!(f.eval((i + 1) as i128, &t).unwrap().re, v);
        }
        assert_eq!(f.eval(12, &t).unwrap().re, -1.0); // Omega(12) = 3
    }

    #[test]
    fn zero_and_even_extension() {
        let t = table();
        for f in [
            MultFnSpec::one(),
            MultFnSpec::liouville(),
            MultFnSpec::archimedean(0.7),
            builtin::modified_char3(),
        ] {
            assert_eq!(f.eval(0, &t).unwrap(), ZERO);
            for n in [1i128, 7, 360, 9999] {
                assert_eq!(f.eval(-n, &t).unwrap(), f.eval(n, &t).unwrap());
            }
        }
    }

    #[test]
    fn archimedean_zero_is_one() {
        let t = table();
        let f = MultFnSpec::archimedean(0.0);
        for n in 1..100i128 {
            assert!((f.eval(n, &t).unwrap() - ONE).norm() < 1e-15);
        }
    }

    #[test]
    fn modified_character_values() {
        let t = table();
        let chi = DirichletCharacter::legendre(3).unwrap();
        let f = MultFnSpec::modified_character(chi.clone());
        assert_eq!(f.eval(3, &t).unwrap().re, 1.0);
        assert_eq!(f.eval(2, &t).unwrap(), chi.eval(2));
        let f6 = f.eval(6, &t).unwrap();
        let f2 = f.eval(2, &t).unwrap();
        let f3 = f.eval(3, &t).unwrap();
        assert!((f6 - f2 * f3).norm() < 1e-15);
        // fast path handles arguments far beyond any sieve or u64 range
        let big = 3i128.pow(40) * 2;
        assert_eq!(f.eval(big, &t).unwrap(), chi.eval(2));
    }

    #[test]
    fn eval_range_matches_pointwise() {
        let t = table();
        for f in [
            MultFnSpec::one(),
            MultFnSpec::liouville(),
            builtin::modified_char3(),
            MultFnSpec::archimedean(1.3),
            MultFnSpec::product(MultFnSpec::liouville(), MultFnSpec::archimedean(0.4)),
        ] {
            let range = f.eval_range(500, &t).unwrap();
            for n in 1..=500u64 {
                let direct = f.eval(n as i128, &t).unwrap();
                assert!(
                    (range[n as usize] - direct).norm() < 1e-12,
                    "mismatch at {n}"
                );
            }
        }
    }

    #[test]
    fn eval_range_rejects_beyond_bound() {
        let t = table();
        assert!(matches!(
            MultFnSpec::one().eval_range(20_000, &t),
            Err(Error::RangeError(_))
        ));
    }

    #[test]
    fn one_range() {
        let t = table();
        let v = MultFnSpec::one().eval_range(5, &t).unwrap();
        assert_eq!(&v[1..], &[ONE, ONE, ONE, ONE, ONE]);
    }

    #[test]
    fn sparse_flip_and_perturbation() {
        let t = table();
        let f = MultFnSpec::finite_perturbation(MultFnSpec::one(), vec![(2, -ONE)]).unwrap();
        assert_eq!(f.eval(2, &t).unwrap().re, -1.0);
        assert_eq!(f.eval(4, &t).unwrap().re, 1.0);
        assert_eq!(f.eval(6, &t).unwrap().re, -1.0);
        let g = MultFnSpec::sparse_flip(MultFnSpec::liouville(), vec![3]).unwrap();
        assert_eq!(g.eval(3, &t).unwrap().re, 1.0); // flipped from -1
        assert_eq!(g.eval(9, &t).unwrap().re, 1.0);
        assert_eq!(g.eval(2, &t).unwrap().re, -1.0);
    }

    #[test]
    fn eval_factored_matches_eval() {
        let t = table();
        let f = MultFnSpec::product(builtin::modified_char3(), MultFnSpec::archimedean(0.9));
        for n in [1u64, 2, 36, 720, 9973] {
            let factors = factorize(n, &t).unwrap();
            let a = f.eval_factored(&factors);
            let b = f.eval(n as i128, &t).unwrap();
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn unit_modulus_classification() {
        assert!(MultFnSpec::liouville().is_unit_modulus());
        assert!(builtin::modified_char3().is_unit_modulus());
        assert!(!MultFnSpec::character(DirichletCharacter::legendre(3).unwrap()).is_unit_modulus());
    }
}

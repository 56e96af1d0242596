use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numeric::{e_of, gcd_u64, modpow_u64};

/// A Dirichlet character mod q, stored as its full value table over residues.
///
/// values[r] = 0 exactly when gcd(r, q) > 1, values are multiplicative on
/// residues, and values[1 mod q] = 1. Construction validates all three.
#[derive(Clone, Debug)]
pub struct DirichletCharacter {
    modulus: u64,
    values: Vec<Complex64>,
    modulus_primes: Vec<u64>,
}

const TOL: f64 = 1e-9;

impl DirichletCharacter {
    pub fn from_values(modulus: u64, values: Vec<Complex64>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidArgument("character modulus must be >= 1".into()));
        }
        if values.len() != modulus as usize {
            return Err(Error::InvalidArgument(format!(
                "expected {} values, got {}",
                modulus,
                values.len()
            )));
        }
        let mut modulus_primes = Vec::new();
        let mut m = modulus;
        let mut d = 2;
        while d * d <= m {
            if m % d == 0 {
                modulus_primes.push(d);
                while m % d == 0 {
                    m /= d;
                }
            }
            d += 1;
        }
        if m > 1 {
            modulus_primes.push(m);
        }
        let chi = DirichletCharacter {
            modulus,
            values,
            modulus_primes,
        };
        chi.validate()?;
        Ok(chi)
    }

    /// Primes dividing the modulus, ascending.
    pub fn modulus_primes(&self) -> &[u64] {
        &self.modulus_primes
    }

    fn validate(&self) -> Result<()> {
        let q = self.modulus;
        for r in 0..q {
            let v = self.values[r as usize];
            if gcd_u64(r, q) > 1 || (q > 1 && r == 0) {
                if v.norm() > TOL {
                    return Err(Error::InvalidArgument(format!(
                        "chi({r}) must vanish for gcd({r},{q}) > 1"
                    )));
                }
            } else if (v.norm() - 1.0).abs() > TOL {
                return Err(Error::InvalidArgument(format!(
                    "chi({r}) must have modulus 1, got {v}"
                )));
            }
        }
        let one = self.values[(1 % q) as usize];
        if (one - Complex64::new(1.0, 0.0)).norm() > TOL {
            return Err(Error::InvalidArgument("chi(1) must equal 1".into()));
        }
        for r in 0..q {
            for s in 0..q {
                let lhs = self.values[((r * s) % q) as usize];
                let rhs = self.values[r as usize] * self.values[s as usize];
                if (lhs - rhs).norm() > TOL {
                    return Err(Error::InvalidArgument(format!(
                        "chi({r}*{s}) != chi({r})*chi({s}) mod {q}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// The principal character mod q.
    pub fn principal(q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidArgument("modulus must be >= 1".into()));
        }
        let values = (0..q)
            .map(|r| {
                if q == 1 || gcd_u64(r, q) == 1 {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
            .collect();
        Self::from_values(q, values)
    }

    /// The quadratic (Legendre-symbol) character mod an odd prime p.
    pub fn legendre(p: u64) -> Result<Self> {
        if p < 3 || !crate::multfn::factor::is_prime_u64(p) {
            return Err(Error::InvalidArgument(format!("{p} is not an odd prime")));
        }
        let values = (0..p)
            .map(|r| {
                if r == 0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    let s = modpow_u64(r, (p - 1) / 2, p);
                    if s == 1 {
                        Complex64::new(1.0, 0.0)
                    } else {
                        Complex64::new(-1.0, 0.0)
                    }
                }
            })
            .collect();
        Self::from_values(p, values)
    }

    /// The character chi_j mod a prime q, defined on a fixed primitive root
    /// g by chi_j(g^k) = e(jk/(q-1)). j = 0 gives the principal character,
    /// j = (q-1)/2 the Legendre character.
    pub fn exponential(q: u64, j: u64) -> Result<Self> {
        if q < 2 || !crate::multfn::factor::is_prime_u64(q) {
            return Err(Error::InvalidArgument(format!("{q} is not prime")));
        }
        let g = primitive_root(q);
        let mut values = vec![Complex64::new(0.0, 0.0); q as usize];
        let mut acc = 1u64;
        for k in 0..(q - 1) {
            values[acc as usize] = e_of((j * k) as f64 / (q - 1) as f64);
            acc = acc * g % q;
        }
        Self::from_values(q, values)
    }

    /// The nontrivial character mod 4 (value -1 at 3 mod 4).
    pub fn mod4() -> Self {
        let z = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        Self::from_values(4, vec![z, one, z, -one]).expect("fixed table is valid")
    }

    /// The even real character mod 8: value 1 at 1,7 and -1 at 3,5.
    pub fn mod8_even() -> Self {
        let z = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        Self::from_values(8, vec![z, one, z, -one, z, -one, z, one]).expect("fixed table is valid")
    }

    /// The odd real character mod 8: value 1 at 1,3 and -1 at 5,7.
    pub fn mod8_odd() -> Self {
        let z = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        Self::from_values(8, vec![z, one, z, one, z, -one, z, -one]).expect("fixed table is valid")
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// chi at an arbitrary integer (reduced mod q; even extension via |n|).
    pub fn eval(&self, n: i128) -> Complex64 {
        let q = self.modulus as i128;
        let r = (n.unsigned_abs() % q as u128) as usize;
        self.values[r]
    }

    pub fn value_at_residue(&self, r: u64) -> Complex64 {
        self.values[(r % self.modulus) as usize]
    }

    pub fn is_principal(&self) -> bool {
        (0..self.modulus).all(|r| {
            let v = self.values[r as usize];
            if gcd_u64(r, self.modulus) == 1 || self.modulus == 1 {
                (v - Complex64::new(1.0, 0.0)).norm() < TOL
            } else {
                true
            }
        })
    }
}

/// Least primitive root mod a prime q.
fn primitive_root(q: u64) -> u64 {
    if q == 2 {
        return 1;
    }
    let mut phi_factors = Vec::new();
    let mut m = q - 1;
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            phi_factors.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        phi_factors.push(m);
    }
    'candidate: for g in 2..q {
        for &f in &phi_factors {
            if modpow_u64(g, (q - 1) / f, q) == 1 {
                continue 'candidate;
            }
        }
        return g;
    }
    unreachable!("every prime has a primitive root")
}

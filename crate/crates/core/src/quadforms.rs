//! Binary quadratic forms, Rado-triple classification, solution
//! parametrizations, and representation counting over boxes.

use crate::error::{Error, Result};
use crate::numeric::{is_perfect_square_u128, isqrt_u128};

/// The integer form alpha*m^2 + beta*m*n + gamma*n^2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadForm {
    pub alpha: i64,
    pub beta: i64,
    pub gamma: i64,
}

impl QuadForm {
    pub fn new(alpha: i64, beta: i64, gamma: i64) -> Result<Self> {
        if alpha == 0 && beta == 0 && gamma == 0 {
            return Err(Error::InvalidArgument("the zero form is not allowed".into()));
        }
        Ok(QuadForm { alpha, beta, gamma })
    }

    /// m^2 + d n^2.
    pub fn sum_d_squares(d: i64) -> Self {
        QuadForm { alpha: 1, beta: 0, gamma: d }
    }

    /// m^2 - n^2.
    pub fn difference_of_squares() -> Self {
        QuadForm { alpha: 1, beta: 0, gamma: -1 }
    }

    /// c * m * n.
    pub fn cross(c: i64) -> Self {
        QuadForm { alpha: 0, beta: c, gamma: 0 }
    }

    pub fn eval(&self, m: i128, n: i128) -> i128 {
        self.alpha as i128 * m * m + self.beta as i128 * m * n + self.gamma as i128 * n * n
    }

    /// Overflow-checked evaluation for lattice points that may be huge.
    pub fn eval_checked(&self, m: i128, n: i128) -> Result<i128> {
        let term = |c: i64, x: i128, y: i128| -> Option<i128> {
            (c as i128).checked_mul(x)?.checked_mul(y)
        };
        term(self.alpha, m, m)
            .and_then(|a| Some(a.checked_add(term(self.beta, m, n)?)?))
            .and_then(|s| Some(s.checked_add(term(self.gamma, n, n)?)?))
            .ok_or_else(|| {
                Error::RangeError(format!("form value overflows 128 bits at ({m}, {n})"))
            })
    }

    /// beta^2 - 4 alpha gamma.
    pub fn discriminant(&self) -> i128 {
        let a = self.alpha as i128;
        let b = self.beta as i128;
        let c = self.gamma as i128;
        b * b - 4 * a * c
    }

    /// True iff the form does not factor into two rational linear forms.
    /// Degenerate forms (alpha = 0 or gamma = 0) contain a linear factor and
    /// count as reducible, as does any form with a perfect-square
    /// discriminant.
    pub fn is_irreducible(&self) -> bool {
        if self.alpha == 0 || self.gamma == 0 {
            return false;
        }
        let d = self.discriminant();
        if d >= 0 && is_perfect_square_u128(d as u128) {
            return false;
        }
        true
    }
}

impl std::fmt::Display for QuadForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}m^2{:+}mn{:+}n^2", self.alpha, self.beta, self.gamma)
    }
}

/// Coefficients (a, b, c) of the equation a x^2 + b y^2 = c z^2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RadoTriple {
    pub a: u64,
    pub b: u64,
    pub c: u64,
}

impl RadoTriple {
    pub fn new(a: u64, b: u64, c: u64) -> Result<Self> {
        if a == 0 || b == 0 || c == 0 {
            return Err(Error::InvalidArgument("triple entries must be positive".into()));
        }
        Ok(RadoTriple { a, b, c })
    }

    /// True iff a = c, b = c, or a + b = c.
    pub fn is_rado(&self) -> bool {
        self.a == self.c || self.b == self.c || self.a + self.b == self.c
    }
}

/// Degree-4 homogeneous polynomial in (m, n) as coefficients of
/// m^4, m^3 n, m^2 n^2, m n^3, n^4. Exact integer arithmetic.
type Quartic = [i128; 5];

fn form_product(f: &QuadForm, g: &QuadForm) -> Quartic {
    let (a1, b1, c1) = (f.alpha as i128, f.beta as i128, f.gamma as i128);
    let (a2, b2, c2) = (g.alpha as i128, g.beta as i128, g.gamma as i128);
    [
        a1 * a2,
        a1 * b2 + b1 * a2,
        a1 * c2 + b1 * b2 + c1 * a2,
        b1 * c2 + c1 * b2,
        c1 * c2,
    ]
}

/// A parametrized solution family: the polynomial identity
/// a Px^2 + b Py^2 + d Px Py = c Pz^2 holds exactly.
#[derive(Clone, Debug)]
pub struct Parametrization {
    pub px: QuadForm,
    pub py: QuadForm,
    pub pz: QuadForm,
    /// (a, b, d, c) of the identity above; k-scaling is implicit (both
    /// sides are homogeneous of degree 2 in the forms).
    pub identity: (i64, i64, i64, i64),
}

impl Parametrization {
    fn verified(self) -> Result<Self> {
        if self.identity_holds() {
            Ok(self)
        } else {
            Err(Error::InvalidArgument(format!(
                "parametrization identity fails for {} / {} / {}",
                self.px, self.py, self.pz
            )))
        }
    }

    /// Exact polynomial check of a Px^2 + b Py^2 + d Px Py - c Pz^2 = 0.
    pub fn identity_holds(&self) -> bool {
        let (a, b, d, c) = self.identity;
        let xx = form_product(&self.px, &self.px);
        let yy = form_product(&self.py, &self.py);
        let xy = form_product(&self.px, &self.py);
        let zz = form_product(&self.pz, &self.pz);
        (0..5).all(|i| {
            a as i128 * xx[i] + b as i128 * yy[i] + d as i128 * xy[i] - c as i128 * zz[i] == 0
        })
    }

    /// The solution (x, y, z) at scaling k and parameters (m, n).
    pub fn at(&self, k: i128, m: i128, n: i128) -> (i128, i128, i128) {
        (
            k * self.px.eval(m, n),
            k * self.py.eval(m, n),
            k * self.pz.eval(m, n),
        )
    }
}

/// The three standard families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StandardFamily {
    /// x^2 + y^2 = z^2: x = k(m^2-n^2), y = k(2mn), z = k(m^2+n^2).
    PM1,
    /// x^2 + 2y^2 = z^2: x = k(m^2-2n^2), y = k(2mn), z = k(m^2+2n^2).
    PM2,
    /// x^2 + y^2 = 2z^2: x = k(m^2-n^2+2mn), y = k(m^2-n^2-2mn), z = k(m^2+n^2).
    PM3,
}

pub fn standard_parametrization(which: StandardFamily) -> Parametrization {
    let p = |alpha, beta, gamma| QuadForm { alpha, beta, gamma };
    let raw = match which {
        StandardFamily::PM1 => Parametrization {
            px: p(1, 0, -1),
            py: p(0, 2, 0),
            pz: p(1, 0, 1),
            identity: (1, 1, 0, 1),
        },
        StandardFamily::PM2 => Parametrization {
            px: p(1, 0, -2),
            py: p(0, 2, 0),
            pz: p(1, 0, 2),
            identity: (1, 2, 0, 1),
        },
        StandardFamily::PM3 => Parametrization {
            px: p(1, 2, -1),
            py: p(1, -2, -1),
            pz: p(1, 0, 1),
            identity: (1, 1, 0, 2),
        },
    };
    raw.verified().expect("standard families satisfy their identities")
}

/// The family solving a x^2 + b y^2 + d x y = a z^2:
/// x = k(b m^2 - a n^2), y = k m(-d m + 2 a n), z = k(b m^2 - d m n + a n^2).
pub fn general_xyz_parametrization(a: i64, b: i64, d: i64) -> Result<Parametrization> {
    if a < 1 || b < 1 {
        return Err(Error::InvalidArgument("need a, b >= 1".into()));
    }
    Parametrization {
        px: QuadForm { alpha: b, beta: 0, gamma: -a },
        py: QuadForm { alpha: -d, beta: 2 * a, gamma: 0 },
        pz: QuadForm { alpha: b, beta: -d, gamma: a },
        identity: (a, b, d, a),
    }
    .verified()
}

/// All solutions of a x^2 + b y^2 = c z^2 with 1 <= x, y, z <= bound, by
/// brute force over (x, y) with an exact square-root test on the z side.
pub fn enumerate_solutions(t: &RadoTriple, bound: u64) -> Result<Vec<(u64, u64, u64)>> {
    let mut out = Vec::new();
    let (a, b, c) = (t.a as u128, t.b as u128, t.c as u128);
    for x in 1..=bound as u128 {
        let ax2 = a
            .checked_mul(x * x)
            .ok_or_else(|| Error::RangeError(format!("a*x^2 overflows at x={x}")))?;
        for y in 1..=bound as u128 {
            let s = ax2
                .checked_add(
                    b.checked_mul(y * y)
                        .ok_or_else(|| Error::RangeError(format!("b*y^2 overflows at y={y}")))?,
                )
                .ok_or_else(|| Error::RangeError("a*x^2+b*y^2 overflows".into()))?;
            if s % c != 0 {
                continue;
            }
            let z2 = s / c;
            let z = isqrt_u128(z2);
            if z * z == z2 && z >= 1 && z <= bound as u128 {
                out.push((x as u64, y as u64, z as u64));
            }
        }
    }
    Ok(out)
}

/// Ordered, signed representations of k as m^2 + n^2 over Z x Z.
pub fn count_r2(k: u64) -> u64 {
    if k == 0 {
        return 1;
    }
    let mut count = 0u64;
    let s = isqrt_u128(k as u128) as i64;
    for m in -s..=s {
        let r = k as i128 - (m as i128) * (m as i128);
        debug_assert!(r >= 0);
        let t = isqrt_u128(r as u128) as i128;
        if t * t == r {
            count += if t == 0 { 1 } else { 2 };
        }
    }
    count
}

/// |{(m, n) in [N]^2 : |m^2 + d n^2| = k}| by exhaustive count.
pub fn count_reps_box(d: i64, n_max: u64, k: u64) -> u64 {
    let mut count = 0u64;
    for m in 1..=n_max as i128 {
        for n in 1..=n_max as i128 {
            let v = m * m + d as i128 * n * n;
            if v.unsigned_abs() == k as u128 {
                count += 1;
            }
        }
    }
    count
}

/// |{(m, n) in [N]^2 : p divides m^2 + d n^2}| by exhaustive count.
pub fn divisibility_count_box(d: i64, n_max: u64, p: u64) -> Result<u64> {
    if !crate::multfn::is_prime_u64(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let p = p as i128;
    let mut count = 0u64;
    for m in 1..=n_max as i128 {
        for n in 1..=n_max as i128 {
            let v = m * m + d as i128 * n * n;
            if v.rem_euclid(p) == 0 {
                count += 1;
            }
        }
    }
    Ok(count)
}

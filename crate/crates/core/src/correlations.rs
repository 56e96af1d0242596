//! Lattice-restricted correlation averages of multiplicative functions over
//! linear and quadratic forms.
//!
//! Every quantity here is a finite-N Cesaro average over the grid
//! [N] x [N]; callers probe decay by re-running at doubling N. Negative
//! form values go through the even extension, and the positivity indicator
//! (both forms positive) is opt-in.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::multfn::{factorize, MultFnSpec, PrimeTable};
use crate::numeric::{gcd_u128, parallel_block_sum, parallel_block_sum_f64};
use crate::quadforms::QuadForm;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Restriction of a grid average to the lattice (Q m + a, Q n + b).
#[derive(Clone, Copy, Debug)]
pub struct Lattice {
    pub q: u128,
    pub a: u128,
    pub b: u128,
}

impl Lattice {
    pub fn trivial() -> Self {
        Lattice { q: 1, a: 0, b: 0 }
    }

    /// The lattice (Qm + 1, Qn) used by the L-quantities.
    pub fn shifted(q: u128) -> Self {
        Lattice { q, a: 1, b: 0 }
    }

    fn apply(&self, m: u64, n: u64) -> Result<(i128, i128)> {
        let x = self
            .q
            .checked_mul(m as u128)
            .and_then(|v| v.checked_add(self.a))
            .ok_or_else(|| Error::RangeError(format!("lattice point overflows at m={m}")))?;
        let y = self
            .q
            .checked_mul(n as u128)
            .and_then(|v| v.checked_add(self.b))
            .ok_or_else(|| Error::RangeError(format!("lattice point overflows at n={n}")))?;
        let xi = i128::try_from(x)
            .map_err(|_| Error::RangeError(format!("lattice point exceeds i128 at m={m}")))?;
        let yi = i128::try_from(y)
            .map_err(|_| Error::RangeError(format!("lattice point exceeds i128 at n={n}")))?;
        Ok((xi, yi))
    }
}

/// Indicator of an arc on the unit circle applied to the oscillating point
/// P1(m,n)^{it} * P2(m,n)^{-it}, together with an optional m > n cut.
#[derive(Clone, Debug)]
pub struct ArcWeight {
    /// Arc length (radians).
    pub delta: f64,
    /// Archimedean frequency in the oscillating point.
    pub t: f64,
    /// Center of the arc on the unit circle.
    pub center: Complex64,
    pub require_m_gt_n: bool,
}

impl ArcWeight {
    /// Arc of length delta around 1 at frequency t, restricted to m > n.
    pub fn new(delta: f64, t: f64) -> Result<Self> {
        if !(delta > 0.0) || delta > 2.0 * std::f64::consts::PI {
            return Err(Error::InvalidArgument(format!(
                "arc length must lie in (0, 2*pi], got {delta}"
            )));
        }
        Ok(ArcWeight {
            delta,
            t,
            center: Complex64::new(1.0, 0.0),
            require_m_gt_n: true,
        })
    }

    pub fn with_center(mut self, center: Complex64) -> Result<Self> {
        if (center.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument("arc center must lie on the unit circle".into()));
        }
        self.center = center;
        Ok(self)
    }

    pub fn with_m_gt_n(mut self, flag: bool) -> Self {
        self.require_m_gt_n = flag;
        self
    }

    /// Membership of the raw grid point (m, n) with form values v1, v2.
    pub fn accepts(&self, m: u64, n: u64, v1: i128, v2: i128) -> bool {
        if self.require_m_gt_n && m <= n {
            return false;
        }
        if v1 == 0 || v2 == 0 {
            return false;
        }
        let full_circle = self.delta >= 2.0 * std::f64::consts::PI - 1e-15;
        if full_circle {
            return true;
        }
        let theta = self.t * ((v1.unsigned_abs() as f64).ln() - (v2.unsigned_abs() as f64).ln());
        let gap = angle_distance(theta, self.center.arg());
        gap <= self.delta / 2.0
    }
}

/// An arc weight together with the two forms it oscillates against. The
/// weight is always evaluated at the raw grid point (m, n); lattices only
/// enter the main correlation factors.
#[derive(Clone, Debug)]
pub struct GridWeight {
    pub arc: ArcWeight,
    pub p1: QuadForm,
    pub p2: QuadForm,
}

impl GridWeight {
    pub fn new(arc: ArcWeight, p1: QuadForm, p2: QuadForm) -> Self {
        GridWeight { arc, p1, p2 }
    }

    fn accepts(&self, m: u64, n: u64) -> bool {
        let v1 = self.p1.eval(m as i128, n as i128);
        let v2 = self.p2.eval(m as i128, n as i128);
        self.arc.accepts(m, n, v1, v2)
    }
}

fn angle_distance(a: f64, b: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut d = (a - b).rem_euclid(two_pi);
    if d > std::f64::consts::PI {
        d = two_pi - d;
    }
    d
}

fn eval_form_value(f: &MultFnSpec, v: i128, table: &PrimeTable) -> Result<Complex64> {
    f.eval(v, table)
}

/// E_{m,n in [N]} w(m,n) * 1_S * f(P1(Qm+a, Qn+b)) * conj(g(P2(Qm+a, Qn+b))).
///
/// The optional weight is evaluated at the raw (m, n) with its own forms;
/// the positivity cut 1_S keeps points where both lattice form values are
/// positive.
#[allow(clippy::too_many_arguments)]
pub fn corr_quad_pair(
    f: &MultFnSpec,
    g: &MultFnSpec,
    p1: &QuadForm,
    p2: &QuadForm,
    n_max: u64,
    lattice: &Lattice,
    weight: Option<&GridWeight>,
    positivity: bool,
    table: &PrimeTable,
) -> Result<Complex64> {
    let n = n_max as usize;
    let sum = try_parallel_rows(n, |mi| {
        let m = (mi + 1) as u64;
        let mut acc = ZERO;
        for nn in 1..=n_max {
            if let Some(w) = weight {
                if !w.accepts(m, nn) {
                    continue;
                }
            }
            let (x, y) = lattice.apply(m, nn)?;
            let v1 = p1.eval_checked(x, y)?;
            let v2 = p2.eval_checked(x, y)?;
            if positivity && (v1 <= 0 || v2 <= 0) {
                continue;
            }
            acc += eval_form_value(f, v1, table)? * eval_form_value(g, v2, table)?.conj();
        }
        Ok(acc)
    })?;
    Ok(sum / (n_max as f64 * n_max as f64))
}

/// Parallel sum over rows with a deterministic reduction: rows are computed
/// independently (any thread order), collected in index order, and folded
/// by a fixed tree.
fn try_parallel_rows<F>(rows: usize, f: F) -> Result<Complex64>
where
    F: Fn(usize) -> Result<Complex64> + Sync,
{
    use rayon::prelude::*;
    let partials: Vec<Result<Complex64>> = (0..rows).into_par_iter().map(f).collect();
    let mut vals = Vec::with_capacity(rows);
    for r in partials {
        vals.push(r?);
    }
    Ok(crate::numeric::pairwise_sum(&vals))
}

/// An integer linear form u*m + v*n.
#[derive(Clone, Copy, Debug)]
pub struct LinearForm {
    pub u: i64,
    pub v: i64,
}

impl LinearForm {
    pub fn eval(&self, m: i128, n: i128) -> i128 {
        self.u as i128 * m + self.v as i128 * n
    }
}

/// E_{m,n in [N]} prod_j f_j(L_j(m,n)) * g(P(m,n)).
pub fn corr_general(
    fs: &[(MultFnSpec, LinearForm)],
    g: &MultFnSpec,
    p: &QuadForm,
    n_max: u64,
    table: &PrimeTable,
) -> Result<Complex64> {
    let n = n_max as usize;
    let sum = try_parallel_rows(n, |mi| {
        let m = (mi + 1) as i128;
        let mut acc = ZERO;
        for nn in 1..=n_max as i128 {
            let mut term = eval_form_value(g, p.eval(m, nn), table)?;
            for (f, l) in fs {
                if term == ZERO {
                    break;
                }
                term *= eval_form_value(f, l.eval(m, nn), table)?;
            }
            acc += term;
        }
        Ok(acc)
    })?;
    Ok(sum / (n_max as f64 * n_max as f64))
}

/// E_{m,n in [N]} f((Qm+1)^2 - (Qn)^2) * conj(f(2(Qm+1)Qn)).
///
/// Both arguments factor through complete multiplicativity:
/// (Qm+1)^2 - (Qn)^2 = (Q(m-n)+1)(Q(m+n)+1) and
/// 2(Qm+1)Qn = 2 * (Qm+1) * Q * n, so the whole grid needs only O(N)
/// point evaluations.
pub fn l_quantity(f: &MultFnSpec, q: u64, n_max: u64, table: &PrimeTable) -> Result<Complex64> {
    if q == 0 {
        return Err(Error::InvalidArgument("Q must be positive".into()));
    }
    let qi = q as i128;
    let nmax = n_max as i128;
    q.checked_mul(2 * n_max)
        .and_then(|v| v.checked_add(1))
        .ok_or_else(|| Error::RangeError("Q*N exceeds the 64-bit evaluation range".into()))?;

    // diag[j + (N-1)] = f(Q*j + 1) for j in [-(N-1), 2N]
    let offset = (n_max - 1) as i128;
    let mut diag = Vec::with_capacity((3 * n_max) as usize);
    for j in -(nmax - 1)..=(2 * nmax) {
        diag.push(f.eval(qi * j + 1, table)?);
    }
    let mut row = Vec::with_capacity(n_max as usize + 1);
    row.push(ZERO);
    for m in 1..=nmax {
        row.push(f.eval(qi * m + 1, table)?);
    }
    let col = if n_max <= table.bound() {
        f.eval_range(n_max, table)?
    } else {
        let mut v = vec![ZERO; n_max as usize + 1];
        for (nn, slot) in v.iter_mut().enumerate().skip(1) {
            *slot = f.eval(nn as i128, table)?;
        }
        v
    };
    let f2 = f.eval(2, table)?;
    let fq = f.eval(qi, table)?;

    let sum = try_parallel_rows(n_max as usize, |mi| {
        let m = (mi + 1) as i128;
        let mut acc = ZERO;
        for nn in 1..=nmax {
            let a = diag[(m - nn + offset) as usize];
            let b = diag[(m + nn + offset) as usize];
            let lhs = a * b;
            let rhs = (f2 * row[m as usize] * fq * col[nn as usize]).conj();
            acc += lhs * rhs;
        }
        Ok(acc)
    })?;
    Ok(sum / (n_max as f64 * n_max as f64))
}

/// E_{n in [N]} conj(f(2n)).
pub fn a_quantity(f: &MultFnSpec, n_max: u64, table: &PrimeTable) -> Result<Complex64> {
    let vals = if 2 * n_max <= table.bound() {
        f.eval_range(2 * n_max, table)?
    } else {
        let mut v = vec![ZERO; 2 * n_max as usize + 1];
        for n in 1..=n_max {
            v[2 * n as usize] = f.eval(2 * n as i128, table)?;
        }
        v
    };
    let sum = parallel_block_sum(n_max as usize, 8192, |i| vals[2 * (i + 1)].conj());
    Ok(sum / n_max as f64)
}

/// Which weighted L-average to take: the difference form (m^2 - n^2 on the
/// quadratic slot) or the sum form (m^2 + n^2).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightedVariant {
    Minus,
    Plus,
}

/// Weighted L-averages: E w_delta(m,n) f((Qm+1)^2 -/+ (Qn)^2) conj(f(2(Qm+1)Qn)),
/// with the arc weight computed at the raw (m, n) from forms
/// (m^2 -/+ n^2, mn).
pub fn weighted_l_quantity(
    f: &MultFnSpec,
    q: u64,
    n_max: u64,
    weight: &ArcWeight,
    variant: WeightedVariant,
    table: &PrimeTable,
) -> Result<Complex64> {
    let sign = match variant {
        WeightedVariant::Minus => -1,
        WeightedVariant::Plus => 1,
    };
    let quad = QuadForm { alpha: 1, beta: 0, gamma: sign };
    let grid_weight = GridWeight::new(weight.clone(), quad, QuadForm::cross(1));
    corr_quad_pair(
        f,
        f,
        &quad,
        &QuadForm::cross(2),
        n_max,
        &Lattice::shifted(q as u128),
        Some(&grid_weight),
        false,
        table,
    )
}

/// E_{m,n in [N]} w(m, n) for the arc weight with forms P1, P2: the weight
/// mass.
pub fn mu_delta(
    weight: &ArcWeight,
    p1: &QuadForm,
    p2: &QuadForm,
    n_max: u64,
) -> f64 {
    let total = parallel_block_sum_f64(n_max as usize, 64, |mi| {
        let m = (mi + 1) as u64;
        let mut acc = 0.0;
        for nn in 1..=n_max {
            let v1 = p1.eval(m as i128, nn as i128);
            let v2 = p2.eval(m as i128, nn as i128);
            if weight.accepts(m, nn, v1, v2) {
                acc += 1.0;
            }
        }
        acc
    });
    total / (n_max as f64 * n_max as f64)
}

/// Offsets (a, b), lexicographically least, with
///   a^2 + 2b^2 = a^2 - 2b^2 = 1 (mod q),
///   gcd(a^2 + 2b^2, Q) = Q1 and gcd(|a^2 - 2b^2|, Q) = Q2.
/// The conditions are periodic in each coordinate, so the search runs over
/// one period via the Chinese remainder structure of the constraints.
pub fn solve_offsets(q: u64, q1: u128, q2: u128, big_q: u128) -> Result<(u64, u64)> {
    if q == 0 {
        return Err(Error::InvalidArgument("q must be >= 1".into()));
    }
    if q1 == 0 || q2 == 0 || big_q == 0 || big_q % q1 != 0 || big_q % q2 != 0 {
        return Err(Error::InvalidArgument(
            "Q1 and Q2 must be positive divisors of Q".into(),
        ));
    }
    if gcd_u128(q1, q2) != 1 || gcd_u128(q1 * q2, q as u128) != 1 {
        return Err(Error::InvalidArgument(
            "need Q1, Q2 coprime to each other and to q".into(),
        ));
    }
    // prime-power moduli over which the gcd conditions are decided: for
    // each p^e || Q the exponent of p in a^2 +/- 2b^2 must be pinned, which
    // takes the residue mod p^{min(e, v_p(Q1 Q2) + 1)}
    let mut local: Vec<u128> = Vec::new();
    let mut rest = big_q;
    let mut p = 2u128;
    while rest > 1 {
        if p * p > rest {
            p = rest;
        }
        if rest % p == 0 {
            let mut e = 0u32;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            let pinned = val_p(q1, p).max(val_p(q2, p)) + 1;
            local.push(p.pow(pinned.min(e)));
        }
        p += 1;
        if p > 1 << 24 {
            return Err(Error::RangeError(
                "Q has a prime factor beyond the offset search range".into(),
            ));
        }
    }
    // combined period of the constraints
    let mut period = q as u128;
    for &pe in &local {
        let g = gcd_u128(period, pe);
        period = period
            .checked_mul(pe / g)
            .ok_or_else(|| Error::RangeError("offset search period overflows".into()))?;
    }
    if period > 1 << 22 {
        return Err(Error::RangeError(format!(
            "offset search period {period} is beyond the supported budget"
        )));
    }
    let period = period as u64;
    let check = |a: u64, b: u64| -> bool {
        let aa = a as i128 * a as i128;
        let bb = 2 * (b as i128) * (b as i128);
        let v1 = aa + bb;
        let v2 = aa - bb;
        if (v1.rem_euclid(q as i128)) != (1 % q) as i128
            || (v2.rem_euclid(q as i128)) != (1 % q) as i128
        {
            return false;
        }
        let g1 = gcd_u128(v1.unsigned_abs(), big_q);
        let g2 = gcd_u128(v2.unsigned_abs(), big_q);
        g1 == q1 && g2 == q2
    };
    for a in 1..=period {
        for b in 1..=period {
            if check(a, b) {
                return Ok((a, b));
            }
        }
    }
    Err(Error::NotFound(format!(
        "no offsets satisfy the congruence system for q={q}, Q1={q1}, Q2={q2}"
    )))
}

fn val_p(mut n: u128, p: u128) -> u32 {
    let mut e = 0;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    e
}

/// prod_{p <= K} p^{2K}, the lattice modulus of the two-form average.
pub fn two_form_modulus(k: u64, table: &PrimeTable) -> Result<u128> {
    let mut acc: u128 = 1;
    for &p in table.primes_in(1, k) {
        for _ in 0..2 * k {
            acc = acc
                .checked_mul(p as u128)
                .ok_or_else(|| Error::RangeError(format!("Q_K overflows 128 bits at K={k}")))?;
        }
    }
    Ok(acc)
}

/// E_{m,n in [N]} [1_S] f(P1(Qm+a, Qn+b)) * conj(f(P2(Qm+a, Qn+b))) with
/// P1 = m^2 + 2n^2, P2 = m^2 - 2n^2, Q = prod_{p<=K} p^{2K}, and offsets
/// from [`solve_offsets`] for the supplied q (a common period of the
/// characters f is built from; q = 1 when there is none).
#[allow(clippy::too_many_arguments)]
pub fn two_form_l(
    f: &MultFnSpec,
    q: u64,
    k: u64,
    q1: u128,
    q2: u128,
    n_max: u64,
    positivity: bool,
    table: &PrimeTable,
) -> Result<Complex64> {
    validate_restricted_part(q1, 3, k, q)?;
    validate_restricted_part(q2, 7, k, q)?;
    let big_q = two_form_modulus(k, table)?;
    let (a, b) = solve_offsets(q, q1, q2, big_q)?;
    let lattice = Lattice { q: big_q, a: a as u128, b: b as u128 };
    corr_quad_pair(
        f,
        f,
        &QuadForm::sum_d_squares(2),
        &QuadForm::sum_d_squares(-2),
        n_max,
        &lattice,
        None,
        positivity,
        table,
    )
}

/// Q_j must be composed of primes <= K in the residue class r mod 8, all
/// coprime to q.
fn validate_restricted_part(qj: u128, r: u64, k: u64, q: u64) -> Result<()> {
    let mut rest = qj;
    let mut p = 2u128;
    while rest > 1 {
        if p * p > rest {
            p = rest;
        }
        if rest % p == 0 {
            while rest % p == 0 {
                rest /= p;
            }
            let pu = u64::try_from(p)
                .map_err(|_| Error::InvalidArgument("Q-part prime exceeds u64".into()))?;
            if pu > k || pu % 8 != r || q % pu == 0 {
                return Err(Error::InvalidArgument(format!(
                    "prime {pu} in the Q-part must be <= K, congruent to {r} mod 8, and coprime to q"
                )));
            }
        } else {
            p += 1;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multfn::builtin;

    fn table() -> PrimeTable {
        PrimeTable::build(100_000).unwrap()
    }

    #[test]
    fn trivial_function_gives_one() {
        let t = table();
        let f = MultFnSpec::one();
        let p1 = QuadForm::sum_d_squares(1);
        for lat in [Lattice::trivial(), Lattice { q: 7, a: 3, b: 2 }] {
            let v = corr_quad_pair(&f, &f, &p1, &p1, 50, &lat, None, false, &t).unwrap();
            assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn conjugation_symmetry() {
        let t = table();
        let f = MultFnSpec::liouville();
        let g = builtin::modified_char3();
        let p1 = QuadForm::difference_of_squares();
        let p2 = QuadForm::cross(2);
        let lat = Lattice::trivial();
        let ab = corr_quad_pair(&f, &g, &p1, &p2, 64, &lat, None, false, &t).unwrap();
        let ba = corr_quad_pair(&g, &f, &p2, &p1, 64, &lat, None, false, &t).unwrap();
        assert!((ab - ba.conj()).norm() < 1e-12);
    }

    #[test]
    fn l_quantity_matches_generic_path() {
        let t = table();
        for f in [MultFnSpec::liouville(), builtin::modified_char3()] {
            for q in [1u64, 9] {
                let fast = l_quantity(&f, q, 96, &t).unwrap();
                let generic = corr_quad_pair(
                    &f,
                    &f,
                    &QuadForm::difference_of_squares(),
                    &QuadForm::cross(2),
                    96,
                    &Lattice::shifted(q as u128),
                    None,
                    false,
                    &t,
                )
                .unwrap();
                assert!((fast - generic).norm() < 1e-10, "q={q}: {fast} vs {generic}");
            }
        }
    }

    #[test]
    fn a_quantity_values() {
        let t = table();
        let v = a_quantity(&MultFnSpec::one(), 1000, &t).unwrap();
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        let v = a_quantity(&MultFnSpec::liouville(), 100_000 / 2, &t).unwrap();
        assert!(v.norm() < 0.02, "{}", v.norm());
    }

    #[test]
    fn archimedean_a_quantity_magnitude() {
        let t = table();
        let tt = 1.5f64;
        let v = a_quantity(&MultFnSpec::archimedean(tt), 50_000, &t).unwrap();
        // E n^{-it} ~ N^{-it}/(1-it): magnitude 1/|1-it|
        let expect = 1.0 / (1.0 + tt * tt).sqrt();
        assert!((v.norm() - expect).abs() < 0.01, "{} vs {}", v.norm(), expect);
    }

    #[test]
    fn unimodular_scaling_preserves_l_magnitude() {
        let t = table();
        let f = builtin::modified_char3();
        let scaled = MultFnSpec::product(f.clone(), MultFnSpec::archimedean(0.0));
        let a = l_quantity(&f, 3, 128, &t).unwrap();
        let b = l_quantity(&scaled, 3, 128, &t).unwrap();
        assert!((a.norm() - b.norm()).abs() < 1e-12);
    }

    #[test]
    fn weight_mass_full_circle() {
        let w = ArcWeight::new(2.0 * std::f64::consts::PI, 1.0).unwrap();
        let m = mu_delta(&w, &QuadForm::difference_of_squares(), &QuadForm::cross(1), 200);
        let expect = (200.0 * 199.0 / 2.0) / (200.0 * 200.0);
        assert!((m - expect).abs() < 1e-12);
    }

    #[test]
    fn weight_mass_degenerate_frequency() {
        // t = 0: the oscillating point is constant 1
        let w = ArcWeight::new(0.3, 0.0).unwrap();
        let m = mu_delta(&w, &QuadForm::difference_of_squares(), &QuadForm::cross(1), 100);
        assert!((m - (100.0 * 99.0 / 2.0) / 10_000.0).abs() < 1e-12);
        // center far from 1: empty arc
        let w2 = ArcWeight::new(0.3, 0.0)
            .unwrap()
            .with_center(Complex64::new(-1.0, 0.0))
            .unwrap();
        let m2 = mu_delta(&w2, &QuadForm::difference_of_squares(), &QuadForm::cross(1), 100);
        assert_eq!(m2, 0.0);
    }

    #[test]
    fn weighted_one_equals_weight_mass() {
        let t = table();
        let w = ArcWeight::new(0.5, 1.0).unwrap();
        let v = weighted_l_quantity(&MultFnSpec::one(), 1, 256, &w, WeightedVariant::Minus, &t)
            .unwrap();
        let mass = mu_delta(
            &w,
            &QuadForm::difference_of_squares(),
            &QuadForm::cross(1),
            256,
        );
        assert!((v.re - mass).abs() < 1e-12 && v.im.abs() < 1e-14);
    }

    #[test]
    fn arc_partition_recovers_half() {
        // partition the circle into arcs; the weighted masses add to the
        // unweighted m > n mass 1/2 - O(1/N)
        let n = 128;
        let k = 8;
        let mut total = 0.0;
        for j in 0..k {
            let theta = (2.0 * std::f64::consts::PI) * (j as f64 + 0.5) / k as f64;
            let w = ArcWeight::new(2.0 * std::f64::consts::PI / k as f64, 1.0)
                .unwrap()
                .with_center(Complex64::new(theta.cos(), theta.sin()))
                .unwrap();
            total += mu_delta(&w, &QuadForm::difference_of_squares(), &QuadForm::cross(1), n);
        }
        let unweighted = (n as f64 * (n as f64 - 1.0) / 2.0) / (n as f64 * n as f64);
        // boundary points can fall in two adjacent closed arcs
        assert!((total - unweighted).abs() < 0.01, "{total} vs {unweighted}");
    }

    #[test]
    fn solve_offsets_trivial() {
        assert_eq!(solve_offsets(1, 1, 1, 1).unwrap(), (1, 1));
    }

    #[test]
    fn solve_offsets_three() {
        // 3 | a^2+2b^2 exactly once, 3 coprime to a^2-2b^2
        let (a, b) = solve_offsets(1, 3, 1, 3).unwrap();
        assert_eq!((a, b), (1, 1));
        assert_eq!((a * a + 2 * b * b) % 3, 0);
        assert_ne!((a as i64 * a as i64 - 2 * b as i64 * b as i64).rem_euclid(3), 0);
    }

    #[test]
    fn solve_offsets_postconditions() {
        let q = 8u64;
        let (q1, q2) = (81u128, 1u128);
        let big_q = 46656u128; // 2^6 3^6
        let (a, b) = solve_offsets(q, q1, q2, big_q).unwrap();
        let v1 = (a as i128).pow(2) + 2 * (b as i128).pow(2);
        let v2 = (a as i128).pow(2) - 2 * (b as i128).pow(2);
        assert_eq!(v1.rem_euclid(8), 1);
        assert_eq!(v2.rem_euclid(8), 1);
        assert_eq!(gcd_u128(v1.unsigned_abs(), big_q), 81);
        assert_eq!(gcd_u128(v2.unsigned_abs(), big_q), 1);
    }

    #[test]
    fn two_form_one_is_positivity_mass() {
        let t = table();
        let v = two_form_l(&MultFnSpec::one(), 1, 2, 1, 1, 64, true, &t).unwrap();
        assert!(v.im.abs() < 1e-14);
        assert!(v.re > 0.0 && v.re <= 1.0);
        // mass of {m^2 > 2n^2} on the lattice is near 1 - 1/sqrt(2)... the
        // indicator-only average just has to sit strictly inside (0, 1)
        assert!(v.re > 0.2 && v.re < 0.5, "{}", v.re);
    }

    #[test]
    fn corr_general_trivial_and_liouville_mean() {
        let t = table();
        let one = MultFnSpec::one();
        let v = corr_general(
            &[(one.clone(), LinearForm { u: 1, v: 0 })],
            &one,
            &QuadForm::sum_d_squares(1),
            64,
            &t,
        )
        .unwrap();
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        // s = 1, f1 = liouville on L(m,n) = m, g = One: this is E lambda(m)
        let v = corr_general(
            &[(MultFnSpec::liouville(), LinearForm { u: 1, v: 0 })],
            &one,
            &QuadForm::sum_d_squares(1),
            316,
            &t,
        )
        .unwrap();
        assert!(v.norm() < 0.05, "{}", v.norm());
    }

    #[test]
    fn overflow_reports_range_error() {
        let t = table();
        let lat = Lattice { q: u128::MAX / 2, a: 0, b: 0 };
        let r = corr_quad_pair(
            &MultFnSpec::one(),
            &MultFnSpec::one(),
            &QuadForm::sum_d_squares(1),
            &QuadForm::sum_d_squares(1),
            4,
            &lat,
            None,
            false,
            &t,
        );
        assert!(matches!(r, Err(Error::RangeError(_))));
    }
}

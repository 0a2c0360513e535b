//! Exact integer arithmetic primitives: factorization, Ramanujan and
//! Kloosterman sums, the Euler factors `psi_alpha`, and divisor-function
//! evaluation on factored arguments.
//!
//! Everything here is a pure function of its inputs; the exponential sums are
//! evaluated in double precision with angles reduced mod 1 before scaling by
//! 2*pi, which keeps the accumulated error far below the fixed 1e-6 rounding
//! tolerance for all supported moduli.

use crate::error::{Error, Result};
use crate::sieve::SpfTable;

/// Rounding tolerance for exponential sums that must come out as real
/// integers (Ramanujan) or real numbers (Kloosterman).
pub const EXP_SUM_TOL: f64 = 1e-6;

/// Prime-power factorization `n = prod p^e`, pairs sorted by ascending `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimePowerFactorization {
    factors: Vec<(u64, u32)>,
}

impl PrimePowerFactorization {
    /// Pairs `(p, e)` in ascending order of `p`.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Reconstructs the factored integer.
    pub fn value(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| p.pow(e))
            .product::<u64>()
    }

    /// Distinct prime divisors, ascending.
    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// All divisors, ascending.
    pub fn divisors(&self) -> Vec<u64> {
        let mut divs = vec![1u64];
        for &(p, e) in &self.factors {
            let prev = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..prev {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }

    /// Moebius function of the factored integer.
    pub fn mobius(&self) -> i64 {
        if self.factors.iter().any(|&(_, e)| e > 1) {
            0
        } else if self.factors.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Euler totient of the factored integer.
    pub fn euler_phi(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| (p - 1) * p.pow(e - 1))
            .product()
    }

    /// Sum of divisors of the factored integer.
    pub fn sigma1(&self) -> u64 {
        self.factors
            .iter()
            .map(|&(p, e)| (p.pow(e + 1) - 1) / (p - 1))
            .product()
    }
}

/// gcd bookkeeping: `g = gcd(a, b)` together with the cofactors `a / g` and
/// `b / g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GcdDecomposition {
    pub g: u64,
    pub cofactor_a: u64,
    pub cofactor_b: u64,
}

impl GcdDecomposition {
    pub fn new(a: u64, b: u64) -> Self {
        let g = gcd(a, b);
        GcdDecomposition {
            g,
            cofactor_a: if g == 0 { 0 } else { a / g },
            cofactor_b: if g == 0 { 0 } else { b / g },
        }
    }
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// gcd for possibly negative arguments, always nonnegative.
pub fn gcd_i64(a: i64, b: i64) -> u64 {
    gcd(a.unsigned_abs(), b.unsigned_abs())
}

/// Factorize `n >= 1`. Uses the smallest-prime-factor table when provided and
/// `n` is within its limit, trial division otherwise. `n = 1` gives the empty
/// factorization.
pub fn factorize(n: u64, spf: Option<&SpfTable>) -> Result<PrimePowerFactorization> {
    if n == 0 {
        return Err(Error::NonPositive);
    }
    if let Some(table) = spf {
        if n <= table.limit() {
            return Ok(factorize_with_spf(n, table));
        }
    }
    let mut factors = Vec::new();
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0u32;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        factors.push((m, 1));
    }
    Ok(PrimePowerFactorization { factors })
}

fn factorize_with_spf(n: u64, spf: &SpfTable) -> PrimePowerFactorization {
    let mut factors = Vec::new();
    let mut m = n;
    while m > 1 {
        let p = spf.spf(m);
        let mut e = 0u32;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        factors.push((p, e));
    }
    PrimePowerFactorization { factors }
}

/// Moebius function by factorization.
pub fn mobius(n: u64) -> Result<i64> {
    Ok(factorize(n, None)?.mobius())
}

/// Euler totient by factorization.
pub fn euler_phi(n: u64) -> Result<u64> {
    Ok(factorize(n, None)?.euler_phi())
}

/// Binomial coefficient, exact, with overflow detection.
pub fn binomial(n: u64, r: u64) -> Result<u64> {
    if r > n {
        return Ok(0);
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 1..=r {
        // exact at every step: acc holds C(n - r + i, i) * i! / i!
        acc = acc
            .checked_mul((n - r + i) as u128)
            .ok_or(Error::DivisorOverflow { n, k: r as u32 })?
            / i as u128;
    }
    u64::try_from(acc).map_err(|_| Error::DivisorOverflow { n, k: r as u32 })
}

/// `d_k(n)` from the factorization of `n`: the number of ordered `k`-tuples
/// with product `n`, i.e. `prod C(e + k - 1, k - 1)` over the prime powers
/// `p^e || n`.
pub fn dk_of_factored(k: u32, f: &PrimePowerFactorization) -> Result<u64> {
    if k == 0 {
        return Err(Error::InvalidParameter("d_k requires k >= 1".into()));
    }
    let mut acc: u64 = 1;
    for &(_, e) in f.factors() {
        let b = binomial(e as u64 + k as u64 - 1, k as u64 - 1)?;
        acc = acc.checked_mul(b).ok_or(Error::DivisorOverflow {
            n: f.value(),
            k,
        })?;
    }
    Ok(acc)
}

/// Ramanujan sum `c_d(h)` by the Moebius closed form
/// `sum over e | (d, |h|) of e * mu(d / e)`.
///
/// `c_d(-h) = c_d(h)`, and `c_d(0) = phi(d)`.
pub fn ramanujan_sum(d: u64, h: i64) -> Result<i64> {
    if d == 0 {
        return Err(Error::NonPositive);
    }
    let fd = factorize(d, None)?;
    if h == 0 {
        return Ok(fd.euler_phi() as i64);
    }
    let g = gcd(d, h.unsigned_abs());
    let mut sum = 0i64;
    for e in factorize(g, None)?.divisors() {
        let m = factorize(d / e, None)?.mobius();
        if m != 0 {
            sum += e as i64 * m;
        }
    }
    Ok(sum)
}

/// Ramanujan sum by its defining exponential sum over residues coprime to
/// `d`, rounded to the nearest integer. Serves as the independent oracle for
/// [`ramanujan_sum`]; cost is O(d), so `d` should stay below ~1e5.
pub fn ramanujan_oracle(d: u64, h: i64) -> Result<i64> {
    if d == 0 {
        return Err(Error::NonPositive);
    }
    let mut re = 0.0f64;
    let mut im = 0.0f64;
    for a in 1..=d {
        if gcd(a, d) != 1 {
            continue;
        }
        // a h / d mod 1, computed in integers first
        let t = ((a as i128 * h as i128).rem_euclid(d as i128)) as f64 / d as f64;
        let angle = 2.0 * std::f64::consts::PI * t;
        re += angle.cos();
        im += angle.sin();
    }
    let rounded = re.round();
    if im.abs() > EXP_SUM_TOL || (re - rounded).abs() > EXP_SUM_TOL {
        return Err(Error::NotNearInteger { re, im });
    }
    Ok(rounded as i64)
}

/// Modular inverse of `x` mod `c` by extended Euclid; `None` when
/// `gcd(x, c) != 1`.
pub fn mod_inverse(x: u64, c: u64) -> Option<u64> {
    if c == 1 {
        return Some(0);
    }
    let (mut r0, mut r1) = (c as i128, (x % c) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    if r0 != 1 {
        return None;
    }
    Some(s0.rem_euclid(c as i128) as u64)
}

/// Kloosterman sum `S(a, b; c) = sum over x mod c, (x, c) = 1, of
/// e((a x + b x^-1) / c)`.
///
/// The sum is real (x -> -x pairs terms with their conjugates); the imaginary
/// part is checked against the fixed tolerance and reported as an internal
/// inconsistency if it survives. Direct evaluation, O(c log c).
pub fn kloosterman(a: i64, b: i64, c: u64) -> Result<f64> {
    if c == 0 {
        return Err(Error::ZeroModulus);
    }
    let am = a.rem_euclid(c as i64) as u64;
    let bm = b.rem_euclid(c as i64) as u64;
    let mut re = 0.0f64;
    let mut im = 0.0f64;
    for x in 1..=c {
        let Some(inv) = mod_inverse(x, c) else {
            continue;
        };
        let t = ((am as u128 * x as u128 + bm as u128 * inv as u128) % c as u128) as f64
            / c as f64;
        let angle = 2.0 * std::f64::consts::PI * t;
        re += angle.cos();
        im += angle.sin();
    }
    if im.abs() > EXP_SUM_TOL {
        return Err(Error::NotNearInteger { re, im });
    }
    Ok(re)
}

/// Euler factor `psi_alpha(n) = prod over p | n of (1 - p^(-1-alpha))`.
pub fn psi(alpha: f64, n: u64) -> Result<f64> {
    let f = factorize(n, None)?;
    Ok(psi_of_primes(alpha, f.primes()))
}

/// `psi_alpha` over an explicit iterator of distinct primes.
pub fn psi_of_primes(alpha: f64, primes: impl Iterator<Item = u64>) -> f64 {
    let mut acc = 1.0;
    for p in primes {
        acc *= 1.0 - (p as f64).powf(-1.0 - alpha);
    }
    acc
}

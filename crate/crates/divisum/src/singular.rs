//! Singular-series constants for the correlation main terms.
//!
//! The basic object is the absolutely convergent double series
//!
//! `C(h; d1, d2 exponents) = sum over d1, d2 of
//!     c_{d1}(h) c_{d2}(h) (d1, d2) / (d1^(2+delta1) d2^(2+delta2))`,
//!
//! which factors as a constant (its value at h = 1) times a multiplicative
//! function of h given on prime powers in closed form. A second, very
//! different-looking expression for the same constant arises from the
//! character decomposition of the pair-correlation main term; it is
//! implemented here as `c3` and tested to agree.

use crate::arith::{factorize, gcd, psi_of_primes};
use crate::error::{Error, Result};
use crate::mainterm::SeriesTruncation;
use crate::sieve::{sieve_mu, sieve_phi, SpfTable};

/// Riemann zeta for real s > 1 by Euler-Maclaurin summation.
pub fn zeta(s: f64) -> f64 {
    assert!(s > 1.0, "zeta implemented for s > 1 only");
    let n = 64u64;
    let nf = n as f64;
    let mut sum = 0.0;
    for m in 1..=n {
        sum += (m as f64).powf(-s);
    }
    sum += nf.powf(1.0 - s) / (s - 1.0);
    sum -= 0.5 * nf.powf(-s);
    // Bernoulli corrections B2, B4, B6
    let t1 = s * nf.powf(-s - 1.0) / 12.0;
    let t2 = s * (s + 1.0) * (s + 2.0) * nf.powf(-s - 3.0) / 720.0;
    let t3 = s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) * nf.powf(-s - 5.0) / 30240.0;
    sum + t1 - t2 + t3
}

/// A truncated series value together with a crude (upper-bound style) tail
/// estimate.
#[derive(Debug, Clone, Copy)]
pub struct TruncatedSeries {
    pub value: f64,
    pub tail_estimate: f64,
}

/// Ramanujan coefficients c_d(h) for all d <= d_max.
fn ramanujan_row(h: i64, d_max: u64, spf: &SpfTable) -> Result<Vec<f64>> {
    let mu = sieve_mu(d_max, spf)?;
    let h_abs = h.unsigned_abs().max(1);
    let h_divs = factorize(h_abs, None)?.divisors();
    let mut row = vec![0.0f64; d_max as usize + 1];
    for d in 1..=d_max {
        let mut c = 0i64;
        for &e in &h_divs {
            if d % e == 0 {
                c += e as i64 * mu.get(d / e);
            }
        }
        row[d as usize] = c as f64;
    }
    Ok(row)
}

/// Truncated evaluation of the singular-series double sum
/// `sum over d1, d2 <= d_max of c_{d1}(h) c_{d2}(h) (d1, d2)
///  / (d1^(2+delta1) d2^(2+delta2))`.
pub fn singular_series_truncated(
    h: i64,
    delta1: f64,
    delta2: f64,
    trunc: &SeriesTruncation,
    spf: &SpfTable,
) -> Result<TruncatedSeries> {
    let d_max = trunc.d_max.max(1);
    if d_max > spf.limit() {
        return Err(Error::TableLimit {
            what: "d_max",
            value: d_max,
            limit: spf.limit(),
        });
    }
    let c = ramanujan_row(h, d_max, spf)?;
    let mut pw1 = vec![0.0f64; d_max as usize + 1];
    let mut pw2 = vec![0.0f64; d_max as usize + 1];
    for d in 1..=d_max as usize {
        pw1[d] = (d as f64).powf(-(2.0 + delta1));
        pw2[d] = (d as f64).powf(-(2.0 + delta2));
    }
    let mut total = 0.0f64;
    for d1 in 1..=d_max {
        let c1 = c[d1 as usize];
        if c1 == 0.0 {
            continue;
        }
        let w1 = c1 * pw1[d1 as usize];
        let mut inner = 0.0f64;
        for d2 in 1..=d_max {
            let c2 = c[d2 as usize];
            if c2 == 0.0 {
                continue;
            }
            inner += c2 * pw2[d2 as usize] * gcd(d1, d2) as f64;
        }
        total += w1 * inner;
    }

    // crude tail bound: |c_d(h)| <= sigma(gcd(d,h)) <= sigma(|h|), and the
    // gcd-weighted inner sum is O(zeta(2) sigma(d)/d) = O(zeta(2) log d)
    let sigma_h = factorize(h.unsigned_abs().max(1), None)?.sigma1() as f64;
    let decay = 1.0 + delta1.min(delta2).min(0.0);
    let df = d_max as f64;
    let tail = 2.0 * zeta(2.0) * sigma_h * sigma_h * (2.0 + df.ln()) / df.powf(decay);
    Ok(TruncatedSeries {
        value: total,
        tail_estimate: tail,
    })
}

/// The multiplicative factor gamma_{delta1,delta2}(h) of the singular
/// series, via its closed form on prime powers:
///
/// for p^k || h the local factor is
/// `sum_{i=0}^{k} p^(-i(1+d1+d2))
///  + sum_{i=0}^{k-1} sum_{j=0}^{i} [ p^(-((i+1) + j d1 + (i+1) d2))
///                                  + p^(-((i+1) + (i+1) d1 + j d2)) ]
///  - (p-1) / (p^(3+d1+d2) - p^(1+d1) - p^(1+d2) + 1)
///    * sum_{i=0}^{k-1} sum_{j=0}^{i} [ p^(-(i + j d1 + i d2))
///                                    + p^(-(i + i d1 + j d2)) ]`.
pub fn gamma_euler(h: u64, delta1: f64, delta2: f64) -> Result<f64> {
    if h == 0 {
        return Err(Error::NonPositive);
    }
    let mut acc = 1.0f64;
    for &(p, k) in factorize(h, None)?.factors() {
        acc *= gamma_local(p, k, delta1, delta2);
    }
    Ok(acc)
}

fn gamma_local(p: u64, k: u32, d1: f64, d2: f64) -> f64 {
    let p = p as f64;
    let mut first = 0.0;
    for i in 0..=k as i32 {
        let i = i as f64;
        first += p.powf(-(i + i * d1 + i * d2));
    }
    let mut second = 0.0;
    let mut third = 0.0;
    for i in 0..k as i32 {
        for j in 0..=i {
            let (i, j) = (i as f64, j as f64);
            second += p.powf(-((i + 1.0) + j * d1 + (i + 1.0) * d2))
                + p.powf(-((i + 1.0) + (i + 1.0) * d1 + j * d2));
            third += p.powf(-(i + j * d1 + i * d2)) + p.powf(-(i + i * d1 + j * d2));
        }
    }
    let denom = p.powf(3.0 + d1 + d2) - p.powf(1.0 + d1) - p.powf(1.0 + d2) + 1.0;
    first + second - (p - 1.0) / denom * third
}

/// The character-decomposition form of the singular series:
///
/// `C3(h) = 1/(zeta(2+d1) zeta(2+d2)) * sum over h1, h2 | h, u1 | h1,
/// u2 | h2 of h1^d1 h2^d2 u1 u2 / h^(2+d1+d2) psi_{d1}(h1/u1)
/// psi_{d2}(h2/u2) * sum over d coprime to (h1/u1)(h2/u2) of
/// d^(-(1+d1+d2)) mu(d/(d,u1)) mu(d/(d,u2)) / (phi(d/(d,u1)) phi(d/(d,u2)))
/// * psi_0(d) psi_0(u1 d) psi_0(u2 d) / (psi_{1+d1}(h1 d) psi_{1+d2}(h2 d))`,
///
/// truncated at `trunc.d_max` (the mu factors force the d-sum into rapidly
/// absolutely convergent territory). `C3(1)` recovers the h = 1 singular
/// series, and `C3(h)/C3(1)` is multiplicative in h.
pub fn c3(
    h: u64,
    delta1: f64,
    delta2: f64,
    trunc: &SeriesTruncation,
    spf: &SpfTable,
) -> Result<f64> {
    if h == 0 {
        return Err(Error::NonPositive);
    }
    let d_max = trunc.d_max.max(1);
    if d_max > spf.limit() || h > spf.limit() {
        return Err(Error::TableLimit {
            what: "d_max or h",
            value: d_max.max(h),
            limit: spf.limit(),
        });
    }
    let mu = sieve_mu(d_max, spf)?;
    let phi = sieve_phi(d_max, spf)?;

    struct Tuple {
        u1: u64,
        u2: u64,
        mask: u64,
        weight: f64,
        // distinct primes of h1, h2, u1, u2 for the psi factors over unions
        primes_h1: Vec<u64>,
        primes_h2: Vec<u64>,
        primes_u1: Vec<u64>,
        primes_u2: Vec<u64>,
        psi_h1: f64,
        psi_h2: f64,
        psi_u1: f64,
        psi_u2: f64,
    }

    let hf = h as f64;
    let h_divs = factorize(h, Some(spf))?.divisors();
    let mut tuples = Vec::new();
    for &h1 in &h_divs {
        let f_h1 = factorize(h1, Some(spf))?;
        for &u1 in &f_h1.divisors() {
            for &h2 in &h_divs {
                let f_h2 = factorize(h2, Some(spf))?;
                for &u2 in &f_h2.divisors() {
                    let q1 = h1 / u1;
                    let q2 = h2 / u2;
                    let weight = (h1 as f64).powf(delta1)
                        * (h2 as f64).powf(delta2)
                        * (u1 * u2) as f64
                        / hf.powf(2.0 + delta1 + delta2)
                        * psi_of_primes(delta1, factorize(q1, Some(spf))?.primes())
                        * psi_of_primes(delta2, factorize(q2, Some(spf))?.primes());
                    let f_u1 = factorize(u1, Some(spf))?;
                    let f_u2 = factorize(u2, Some(spf))?;
                    tuples.push(Tuple {
                        u1,
                        u2,
                        mask: q1 * q2,
                        weight,
                        psi_u1: psi_of_primes(0.0, f_u1.primes()),
                        psi_u2: psi_of_primes(0.0, f_u2.primes()),
                        psi_h1: psi_of_primes(1.0 + delta1, f_h1.primes()),
                        psi_h2: psi_of_primes(1.0 + delta2, f_h2.primes()),
                        primes_h1: f_h1.primes().collect(),
                        primes_h2: f_h2.primes().collect(),
                        primes_u1: f_u1.primes().collect(),
                        primes_u2: f_u2.primes().collect(),
                    });
                }
            }
        }
    }

    let mut total = 0.0f64;
    let mut d_primes = Vec::with_capacity(8);
    for d in 1..=d_max {
        // distinct primes of d and the per-prime Euler factors
        d_primes.clear();
        let mut m = d;
        while m > 1 {
            let p = spf.spf(m);
            d_primes.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        let d_pow = (d as f64).powf(-(1.0 + delta1 + delta2));
        let mut psi0_d = 1.0;
        for &p in &d_primes {
            psi0_d *= 1.0 - 1.0 / p as f64;
        }
        for t in &tuples {
            if gcd(d, t.mask) != 1 {
                continue;
            }
            let e1 = d / gcd(d, t.u1);
            let m1 = mu.get(e1);
            if m1 == 0 {
                continue;
            }
            let e2 = d / gcd(d, t.u2);
            let m2 = mu.get(e2);
            if m2 == 0 {
                continue;
            }
            // psi factors over the unions of prime sets
            let mut psi_u1d = t.psi_u1;
            let mut psi_u2d = t.psi_u2;
            let mut psi_h1d = t.psi_h1;
            let mut psi_h2d = t.psi_h2;
            for &p in &d_primes {
                let pf = p as f64;
                if !t.primes_u1.contains(&p) {
                    psi_u1d *= 1.0 - 1.0 / pf;
                }
                if !t.primes_u2.contains(&p) {
                    psi_u2d *= 1.0 - 1.0 / pf;
                }
                if !t.primes_h1.contains(&p) {
                    psi_h1d *= 1.0 - pf.powf(-2.0 - delta1);
                }
                if !t.primes_h2.contains(&p) {
                    psi_h2d *= 1.0 - pf.powf(-2.0 - delta2);
                }
            }
            let term = t.weight * d_pow * (m1 * m2) as f64
                / (phi[e1 as usize] as f64 * phi[e2 as usize] as f64)
                * psi0_d
                * psi_u1d
                * psi_u2d
                / (psi_h1d * psi_h2d);
            total += term;
        }
    }
    Ok(total / (zeta(2.0 + delta1) * zeta(2.0 + delta2)))
}

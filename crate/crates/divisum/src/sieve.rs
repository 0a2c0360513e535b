//! Bulk tabulation of d_k(n), mu(n) and phi(n) via a smallest-prime-factor
//! sieve with segmented construction.
//!
//! Tables are built segment by segment so the transient working set (the
//! residual-cofactor buffer) stays bounded regardless of the table size;
//! segments are independent and may be processed by parallel workers with
//! disjoint write ranges. Finished tables are immutable and safely shareable.
//!
//! Storage is 4 bytes per entry for both the smallest-prime-factor table and
//! the divisor tables; d_k values are overflow-checked against the 32-bit
//! entry width rather than assumed to fit.

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Default segment length (entries) for table construction.
pub const DEFAULT_SEGMENT_LEN: usize = 1 << 22;

fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    while r * r > n {
        r -= 1;
    }
    r
}

fn alloc_u32(len: usize, what: &'static str) -> Result<Vec<u32>> {
    let mut v = Vec::new();
    v.try_reserve_exact(len).map_err(|_| Error::Allocation {
        what,
        bytes: len as u64 * 4,
    })?;
    v.resize(len, 0);
    Ok(v)
}

/// Simple bootstrap sieve for the base primes up to `bound`.
fn small_primes(bound: u64) -> Vec<u32> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for p in 2..=n {
        if !composite[p] {
            primes.push(p as u32);
            let mut m = p * p;
            while m <= n {
                composite[m] = true;
                m += p;
            }
        }
    }
    primes
}

/// Smallest-prime-factor table for 2..=limit.
///
/// `spf(n)` is the least prime dividing n, with `spf(p) = p` exactly at the
/// primes. Immutable after construction.
pub struct SpfTable {
    limit: u64,
    spf: Vec<u32>,
}

impl SpfTable {
    /// Builds the table with the default segment length.
    pub fn build(limit: u64) -> Result<Self> {
        Self::build_segmented(limit, DEFAULT_SEGMENT_LEN)
    }

    /// Builds the table, processing `segment_len` entries per worker unit.
    pub fn build_segmented(limit: u64, segment_len: usize) -> Result<Self> {
        if limit < 2 {
            return Err(Error::InvalidParameter(
                "spf table limit must be at least 2".into(),
            ));
        }
        if limit > u32::MAX as u64 {
            return Err(Error::InvalidParameter(
                "spf table limit must fit 32-bit entries".into(),
            ));
        }
        let segment_len = segment_len.max(1 << 12);
        let base = small_primes(isqrt(limit));
        let mut spf = alloc_u32(limit as usize + 1, "spf table")?;

        spf.par_chunks_mut(segment_len)
            .enumerate()
            .for_each(|(i, chunk)| {
                let lo = (i * segment_len) as u64;
                let hi = lo + chunk.len() as u64;
                for &p in &base {
                    let p = p as u64;
                    if p * p >= hi {
                        break;
                    }
                    // composites only: any m with spf(m) = p satisfies m >= p^2
                    let mut m = lo.div_ceil(p).max(p) * p;
                    if m < p * p {
                        m = p * p;
                    }
                    while m < hi {
                        let slot = &mut chunk[(m - lo) as usize];
                        if *slot == 0 {
                            *slot = p as u32;
                        }
                        m += p;
                    }
                }
                // remaining zeros in this segment are primes
                for (j, slot) in chunk.iter_mut().enumerate() {
                    let n = lo + j as u64;
                    if *slot == 0 && n >= 2 {
                        *slot = n as u32;
                    }
                }
            });

        Ok(SpfTable { limit, spf })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Smallest prime factor of `n`, for 2 <= n <= limit.
    #[inline]
    pub fn spf(&self, n: u64) -> u64 {
        self.spf[n as usize] as u64
    }

    #[inline]
    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && self.spf[n as usize] as u64 == n
    }

    /// Primes up to `bound` (inclusive), ascending.
    pub fn primes_up_to(&self, bound: u64) -> Vec<u64> {
        (2..=bound.min(self.limit))
            .filter(|&n| self.is_prime(n))
            .collect()
    }
}

/// Table of d_k(n) for 1..=limit, 32-bit entries.
pub struct DivisorTable {
    k: u32,
    limit: u64,
    values: Vec<u32>,
}

impl DivisorTable {
    /// Assembles a table from raw entries (cache loading); `values[0]` is
    /// ignored, `values[n]` must equal d_k(n).
    pub(crate) fn from_raw(k: u32, limit: u64, values: Vec<u32>) -> Result<Self> {
        if values.len() != limit as usize + 1 {
            return Err(Error::CacheFormat(format!(
                "entry count {} does not match limit {}",
                values.len(),
                limit
            )));
        }
        Ok(DivisorTable { k, limit, values })
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// d_k(n); `n` must be within 1..=limit.
    #[inline]
    pub fn get(&self, n: u64) -> u64 {
        self.values[n as usize] as u64
    }

    /// Checked access with a table-limit error.
    pub fn try_get(&self, n: u64) -> Result<u64> {
        if n == 0 {
            return Err(Error::NonPositive);
        }
        if n > self.limit {
            return Err(Error::TableLimit {
                what: "n",
                value: n,
                limit: self.limit,
            });
        }
        Ok(self.values[n as usize] as u64)
    }

    /// Exact summatory function `sum over n <= x of d_k(n)`.
    pub fn summatory(&self, x: u64) -> Result<u64> {
        if x > self.limit {
            return Err(Error::TableLimit {
                what: "x",
                value: x,
                limit: self.limit,
            });
        }
        Ok(self.values[1..=x as usize]
            .iter()
            .map(|&v| v as u64)
            .sum())
    }
}

/// Tabulates d_k(n) for n <= limit by extracting prime exponents per segment
/// and multiplying binomial factors `d_k(p^e) = C(e + k - 1, k - 1)`.
pub fn sieve_dk(limit: u64, k: u32, spf: &SpfTable) -> Result<DivisorTable> {
    sieve_dk_segmented(limit, k, spf, DEFAULT_SEGMENT_LEN)
}

pub fn sieve_dk_segmented(
    limit: u64,
    k: u32,
    spf: &SpfTable,
    segment_len: usize,
) -> Result<DivisorTable> {
    if k == 0 {
        return Err(Error::InvalidParameter("d_k requires k >= 1".into()));
    }
    if limit < 1 {
        return Err(Error::NonPositive);
    }
    if limit > spf.limit() {
        return Err(Error::TableLimit {
            what: "limit",
            value: limit,
            limit: spf.limit(),
        });
    }
    let segment_len = segment_len.max(1 << 12);

    // d_k(p^e) = C(e + k - 1, k - 1), tabulated over all exponents that can
    // occur below the limit. An entry overflowing the 64-bit intermediate is
    // only an error if the exponent is actually reachable, which it is by
    // construction (2^e <= limit).
    let e_max = 63 - limit.leading_zeros() as usize;
    let mut binom = Vec::with_capacity(e_max + 1);
    for e in 0..=e_max {
        match crate::arith::binomial(e as u64 + k as u64 - 1, k as u64 - 1) {
            Ok(b) => binom.push(b),
            Err(_) => {
                return Err(Error::DivisorOverflow {
                    n: 1u64 << e,
                    k,
                })
            }
        }
    }

    let base = spf.primes_up_to(isqrt(limit));
    let mut values = alloc_u32(limit as usize + 1, "divisor table")?;

    let overflow = std::sync::Mutex::new(None::<u64>);
    values
        .par_chunks_mut(segment_len)
        .enumerate()
        .for_each(|(i, chunk)| {
            let lo = (i * segment_len) as u64;
            let hi = lo + chunk.len() as u64;
            let mut rem: Vec<u32> = (lo..hi).map(|n| n as u32).collect();
            for v in chunk.iter_mut() {
                *v = 1;
            }
            let mut bad = None;
            for &p in &base {
                if p >= hi {
                    break;
                }
                let start = lo.div_ceil(p).max(1) * p;
                let mut m = start;
                while m < hi {
                    let idx = (m - lo) as usize;
                    let mut r = rem[idx];
                    let mut e = 0usize;
                    let p32 = p as u32;
                    while r % p32 == 0 {
                        r /= p32;
                        e += 1;
                    }
                    rem[idx] = r;
                    let v = chunk[idx] as u64 * binom[e];
                    if v > u32::MAX as u64 {
                        bad.get_or_insert(m);
                        chunk[idx] = u32::MAX;
                    } else {
                        chunk[idx] = v as u32;
                    }
                    m += p;
                }
            }
            // whatever is left in rem is 1 or a prime above sqrt(limit)
            for (j, &r) in rem.iter().enumerate() {
                let n = lo + j as u64;
                if n < 2 {
                    chunk[j] = if n == 1 { 1 } else { 0 };
                    continue;
                }
                if r > 1 {
                    let v = chunk[j] as u64 * binom[1];
                    if v > u32::MAX as u64 {
                        bad.get_or_insert(n);
                        chunk[j] = u32::MAX;
                    } else {
                        chunk[j] = v as u32;
                    }
                }
            }
            if let Some(n) = bad {
                let mut guard = overflow.lock().unwrap();
                match *guard {
                    Some(prev) if prev <= n => {}
                    _ => *guard = Some(n),
                }
            }
        });

    if let Some(n) = overflow.into_inner().unwrap() {
        return Err(Error::DivisorOverflow { n, k });
    }
    Ok(DivisorTable { k, limit, values })
}

/// Moebius function table for 1..=limit.
pub struct MobiusTable {
    limit: u64,
    values: Vec<i8>,
}

impl MobiusTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    #[inline]
    pub fn get(&self, n: u64) -> i64 {
        self.values[n as usize] as i64
    }
}

/// Tabulates mu(n) for n <= limit via the recursion on the smallest prime
/// factor: mu(n) = 0 if spf(n)^2 | n, else -mu(n / spf(n)).
pub fn sieve_mu(limit: u64, spf: &SpfTable) -> Result<MobiusTable> {
    if limit > spf.limit() {
        return Err(Error::TableLimit {
            what: "limit",
            value: limit,
            limit: spf.limit(),
        });
    }
    let mut values = vec![0i8; limit as usize + 1];
    if limit >= 1 {
        values[1] = 1;
    }
    for n in 2..=limit {
        let p = spf.spf(n);
        let m = n / p;
        values[n as usize] = if m % p == 0 { 0 } else { -values[m as usize] };
    }
    Ok(MobiusTable { limit, values })
}

/// Tabulates phi(n) for n <= limit via the smallest-prime-factor recursion.
pub fn sieve_phi(limit: u64, spf: &SpfTable) -> Result<Vec<u32>> {
    if limit > spf.limit() {
        return Err(Error::TableLimit {
            what: "limit",
            value: limit,
            limit: spf.limit(),
        });
    }
    let mut phi = vec![0u32; limit as usize + 1];
    if limit >= 1 {
        phi[1] = 1;
    }
    for n in 2..=limit {
        let p = spf.spf(n);
        let m = n / p;
        phi[n as usize] = if m % p == 0 {
            phi[m as usize] * p as u32
        } else {
            phi[m as usize] * (p as u32 - 1)
        };
    }
    Ok(phi)
}

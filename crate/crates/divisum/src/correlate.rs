//! Exact brute-force evaluation of the correlation sums: the shifted
//! convolutions `sum d_k(n) d(n + h)`, their smooth companions, divisor sums
//! over arithmetic progressions, pair correlations, and the defect moments.
//!
//! Integer sums are exact regardless of how the range is partitioned across
//! workers; real-valued sums are reduced in a fixed block order so results
//! are bit-identical for any worker count.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mainterm::{phi0, AnalyticContext, Variant};
use crate::sieve::DivisorTable;
use crate::weight::{WeightSpec, Window};

/// One correlation experiment: cutoff, shift, order, variant, and an
/// optional smooth weight (sharp cutoff when absent).
#[derive(Debug, Clone, Copy)]
pub struct CorrelationRequest {
    pub x: f64,
    pub h: i64,
    pub k: u32,
    pub variant: Variant,
    pub weight: Option<WeightSpec>,
}

impl CorrelationRequest {
    pub fn validate(&self) -> Result<()> {
        if self.x < 1.0 {
            return Err(Error::InvalidParameter(format!(
                "cutoff x must be at least 1, got {}",
                self.x
            )));
        }
        if self.h == 0 {
            return Err(Error::InvalidParameter(
                "shift h must be a nonzero integer".into(),
            ));
        }
        if self.k < 2 {
            return Err(Error::InvalidParameter(
                "correlation order k must be at least 2 (k = 1 degenerates to a plain divisor sum)"
                    .into(),
            ));
        }
        Ok(())
    }
}

/// Result of one experiment. `residual = exact - main` exactly as stored;
/// `excluded` counts terms dropped because a divisor argument fell below 1.
#[derive(Debug, Clone)]
pub struct CorrelationReport {
    pub request: CorrelationRequest,
    pub exact: f64,
    pub main: f64,
    pub residual: f64,
    pub wall_seconds: f64,
    pub excluded: u64,
}

fn check_limit(what: &'static str, value: u64, table: &DivisorTable) -> Result<()> {
    if value > table.limit() {
        return Err(Error::TableLimit {
            what,
            value,
            limit: table.limit(),
        });
    }
    Ok(())
}

const BLOCK: u64 = 1 << 16;

/// Deterministic blocked reduction of `f(n)` over `lo..=hi` into f64:
/// blocks are computed in parallel but summed in block order.
fn block_sum<F>(lo: u64, hi: u64, f: F) -> f64
where
    F: Fn(u64) -> f64 + Sync,
{
    if hi < lo {
        return 0.0;
    }
    let nblocks = (hi - lo + 1).div_ceil(BLOCK);
    let partials: Vec<f64> = (0..nblocks)
        .into_par_iter()
        .map(|b| {
            let s = lo + b * BLOCK;
            let e = (s + BLOCK - 1).min(hi);
            let mut acc = 0.0;
            for n in s..=e {
                acc += f(n);
            }
            acc
        })
        .collect();
    partials.into_iter().sum()
}

fn block_sum_u64<F>(lo: u64, hi: u64, f: F) -> u64
where
    F: Fn(u64) -> u64 + Sync,
{
    if hi < lo {
        return 0;
    }
    let nblocks = (hi - lo + 1).div_ceil(BLOCK);
    (0..nblocks)
        .into_par_iter()
        .map(|b| {
            let s = lo + b * BLOCK;
            let e = (s + BLOCK - 1).min(hi);
            let mut acc = 0u64;
            for n in s..=e {
                acc += f(n);
            }
            acc
        })
        .sum()
}

/// Sharp-cutoff shifted convolution, exact:
/// plus variant `sum over n <= x of d_k(n) d(n + h)`,
/// minus variant `sum over n <= x of d_k(n + h) d(n)`.
///
/// Terms whose shifted argument falls below 1 (possible for h < 0) are
/// excluded and counted.
pub fn shifted_sum(
    req: &CorrelationRequest,
    dk: &DivisorTable,
    d2: &DivisorTable,
) -> Result<(u64, u64)> {
    req.validate()?;
    if dk.k() != req.k {
        return Err(Error::InvalidParameter(format!(
            "request has k = {}, table holds d_{}",
            req.k,
            dk.k()
        )));
    }
    let n_max = req.x.floor() as u64;
    let h = req.h;
    // capacity checks up front so a scan can record the row as failed
    let shifted_max = if h >= 0 {
        n_max + h as u64
    } else {
        n_max
    };
    match req.variant {
        Variant::Plus => {
            check_limit("n", n_max, dk)?;
            check_limit("n + h", shifted_max, d2)?;
        }
        Variant::Minus => {
            check_limit("n + h", shifted_max, dk)?;
            check_limit("n", n_max, d2)?;
        }
    }
    let excluded = if h < 0 {
        n_max.min(h.unsigned_abs())
    } else {
        0
    };
    let sum = block_sum_u64(1, n_max, |n| {
        let arg = n as i64 + h;
        if arg < 1 {
            return 0;
        }
        let arg = arg as u64;
        match req.variant {
            Variant::Plus => dk.get(n) * d2.get(arg),
            Variant::Minus => dk.get(arg) * d2.get(n),
        }
    });
    Ok((sum, excluded))
}

/// Smooth shifted convolution `sum over n of w(n/x) d_k(n) d(n +/- h)`;
/// the weight's support confines the summation (to [x/2, x] for the bump).
pub fn smooth_shifted_sum(
    req: &CorrelationRequest,
    dk: &DivisorTable,
    d2: &DivisorTable,
) -> Result<(f64, u64)> {
    req.validate()?;
    let Some(w) = req.weight else {
        return Err(Error::InvalidParameter(
            "smooth sum requires a weight; use shifted_sum for the sharp cutoff".into(),
        ));
    };
    let window = Window::scaled(w, req.x);
    let Some((lo, hi)) = window.integer_range() else {
        return Ok((0.0, 0));
    };
    let shift = match req.variant {
        Variant::Plus => req.h,
        Variant::Minus => -req.h,
    };
    check_limit("n", hi, dk)?;
    let top = hi as i64 + shift;
    if top >= 1 {
        check_limit("n + h", top as u64, d2)?;
    }
    let excluded = std::sync::atomic::AtomicU64::new(0);
    let sum = block_sum(lo, hi, |n| {
        let arg = n as i64 + shift;
        if arg < 1 {
            excluded.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
            return 0.0;
        }
        let wv = window.eval(n as f64);
        if wv == 0.0 {
            return 0.0;
        }
        wv * dk.get(n) as f64 * d2.get(arg as u64) as f64
    });
    Ok((sum, excluded.into_inner()))
}

/// Weighted divisor sum over an arithmetic progression:
/// `sum over m == h (mod b), m in supp(window) of d(m) window(m)`.
pub fn progression_sum(b: u64, h: i64, window: &Window, d2: &DivisorTable) -> Result<f64> {
    if b == 0 {
        return Err(Error::ZeroModulus);
    }
    let Some((lo, hi)) = window.integer_range() else {
        return Ok(0.0);
    };
    check_limit("m", hi, d2)?;
    let res = h.rem_euclid(b as i64) as u64;
    // first m >= lo with m == res (mod b)
    let mut m = lo + ((res + b - lo % b) % b);
    let mut acc = 0.0;
    while m <= hi {
        acc += d2.get(m) as f64 * window.eval(m as f64);
        m += b;
    }
    Ok(acc)
}

/// Sharp-window progression sum as an exact integer:
/// `sum over m == h (mod b), lo <= m <= hi of d(m)`.
pub fn progression_sum_exact(
    b: u64,
    h: i64,
    lo: u64,
    hi: u64,
    d2: &DivisorTable,
) -> Result<u64> {
    if b == 0 {
        return Err(Error::ZeroModulus);
    }
    if hi < lo {
        return Ok(0);
    }
    check_limit("m", hi, d2)?;
    let res = h.rem_euclid(b as i64) as u64;
    let mut m = lo + ((res + b - lo % b) % b);
    let mut acc = 0u64;
    while m <= hi {
        acc += d2.get(m);
        m += b;
    }
    Ok(acc)
}

/// Pair-correlation sum
/// `sum over b of w(r1 b / x) w(r2 b / x) d(r1 b + h) d(r2 b + h)`.
///
/// Symmetric in (r1, r2); terms with a divisor argument below 1 are skipped.
pub fn pair_correlation(
    r1: u64,
    r2: u64,
    h: i64,
    x: f64,
    weight: WeightSpec,
    d2: &DivisorTable,
) -> Result<f64> {
    if r1 == 0 || r2 == 0 {
        return Err(Error::NonPositive);
    }
    let w1 = Window::scaled(weight, x / r1 as f64);
    let w2 = Window::scaled(weight, x / r2 as f64);
    let window = Window::product(w1, w2);
    let Some((lo, hi)) = window.integer_range() else {
        return Ok(0.0);
    };
    let top = (r1.max(r2) as i64)
        .checked_mul(hi as i64)
        .and_then(|v| v.checked_add(h))
        .ok_or(Error::InvalidParameter("pair range overflows".into()))?;
    if top >= 1 {
        check_limit("r b + h", top as u64, d2)?;
    }
    let sum = block_sum(lo, hi, |b| {
        let a1 = r1 as i64 * b as i64 + h;
        let a2 = r2 as i64 * b as i64 + h;
        if a1 < 1 || a2 < 1 {
            return 0.0;
        }
        let wv = window.eval(b as f64);
        if wv == 0.0 {
            return 0.0;
        }
        wv * d2.get(a1 as u64) as f64 * d2.get(a2 as u64) as f64
    });
    Ok(sum)
}

/// The three moments of the progression defect over a modulus range:
/// `phi0_sq = sum Phi0(b)^2`, `cross = sum Phi0(b) Phi(b)`,
/// `phi_sq = sum Phi(b)^2`, where
/// `Phi(b) = sum over a of v1(a) w(a b / x) d(a b + h)` is the brute-force
/// progression sum and `Phi0(b)` its predicted main term.
#[derive(Debug, Clone, Copy)]
pub struct DefectMoments {
    pub phi0_sq: f64,
    pub cross: f64,
    pub phi_sq: f64,
}

pub struct DefectConfig {
    /// Window for the progression variable `a` (scale A1).
    pub a_window: Window,
    /// Outer smooth weight applied at `a b / x`.
    pub weight: WeightSpec,
    pub x: f64,
    pub h: i64,
}

pub fn defect_moments(
    cfg: &DefectConfig,
    b_range: std::ops::RangeInclusive<u64>,
    d2: &DivisorTable,
    ctx: &AnalyticContext,
) -> Result<DefectMoments> {
    if cfg.h < 1 {
        return Err(Error::InvalidParameter(
            "defect moments are defined for shifts h >= 1".into(),
        ));
    }
    let (a_lo, a_hi) = cfg.a_window.support();
    if a_hi <= a_lo {
        return Ok(DefectMoments {
            phi0_sq: 0.0,
            cross: 0.0,
            phi_sq: 0.0,
        });
    }
    let mut phi0_sq = 0.0;
    let mut cross = 0.0;
    let mut phi_sq = 0.0;
    for b in b_range {
        // brute-force progression sum over a
        let lo = a_lo.max(1.0).ceil() as u64;
        let hi = a_hi.floor() as u64;
        let mut phi = 0.0;
        for a in lo..=hi {
            let va = cfg.a_window.eval(a as f64);
            if va == 0.0 {
                continue;
            }
            let n = a * b;
            let arg = n as i64 + cfg.h;
            let wv = cfg.weight.eval(n as f64 / cfg.x);
            if wv == 0.0 {
                continue;
            }
            phi += va * wv * d2.try_get(arg as u64)? as f64;
        }
        // predicted main term: window in the n = a b variable
        let n_window = Window::product(
            Window::scaled(cfg.weight, cfg.x),
            scale_window(&cfg.a_window, b as f64),
        );
        let p0 = phi0(b, cfg.h, &n_window, ctx)?;
        phi0_sq += p0 * p0;
        cross += p0 * phi;
        phi_sq += phi * phi;
    }
    Ok(DefectMoments {
        phi0_sq,
        cross,
        phi_sq,
    })
}

/// Rescales a window of the variable `a` into the variable `n = a * b`.
fn scale_window(w: &Window, b: f64) -> Window {
    match w {
        Window::Sharp { lo, hi } => Window::sharp(lo * b, hi * b),
        Window::Scaled { weight, scale } => Window::scaled(*weight, scale * b),
        Window::Product(l, r) => Window::product(scale_window(l, b), scale_window(r, b)),
        Window::Translated { inner, shift } => {
            Window::translated(scale_window(inner, b), shift * b)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::{sieve_dk, SpfTable};

    fn tables(limit: u64) -> (DivisorTable, DivisorTable, DivisorTable) {
        let spf = SpfTable::build(limit).unwrap();
        (
            sieve_dk(limit, 2, &spf).unwrap(),
            sieve_dk(limit, 3, &spf).unwrap(),
            sieve_dk(limit, 4, &spf).unwrap(),
        )
    }

    #[test]
    fn shifted_sum_examples() {
        let (d2, _, _) = tables(64);
        let req = CorrelationRequest {
            x: 10.0,
            h: 1,
            k: 2,
            variant: Variant::Plus,
            weight: None,
        };
        assert_eq!(shifted_sum(&req, &d2, &d2).unwrap(), (74, 0));

        let req1 = CorrelationRequest { x: 1.0, ..req };
        assert_eq!(shifted_sum(&req1, &d2, &d2).unwrap().0, 2);

        // minus variant by direct enumeration
        let reqm = CorrelationRequest {
            variant: Variant::Minus,
            ..req
        };
        let expect: u64 = (1..=10u64).map(|n| d2.get(n + 1) * d2.get(n)).sum();
        assert_eq!(shifted_sum(&reqm, &d2, &d2).unwrap().0, expect);
    }

    #[test]
    fn shifted_sum_negative_h_excludes_and_counts() {
        let (d2, _, _) = tables(64);
        let req = CorrelationRequest {
            x: 10.0,
            h: -3,
            k: 2,
            variant: Variant::Plus,
            weight: None,
        };
        let (sum, excluded) = shifted_sum(&req, &d2, &d2).unwrap();
        assert_eq!(excluded, 3);
        let expect: u64 = (4..=10u64).map(|n| d2.get(n) * d2.get(n - 3)).sum();
        assert_eq!(sum, expect);
    }

    #[test]
    fn shifted_sum_rejects_k1_and_capacity() {
        let (d2, _, _) = tables(64);
        let req = CorrelationRequest {
            x: 10.0,
            h: 1,
            k: 1,
            variant: Variant::Plus,
            weight: None,
        };
        assert!(shifted_sum(&req, &d2, &d2).is_err());
        let req = CorrelationRequest {
            x: 64.0,
            h: 1,
            k: 2,
            variant: Variant::Plus,
            weight: None,
        };
        assert!(matches!(
            shifted_sum(&req, &d2, &d2),
            Err(Error::TableLimit { .. })
        ));
    }

    #[test]
    fn smooth_sum_two_term_window() {
        // Omega = 1, x = 4: only n = 3 contributes, and w(3/4) = 1
        let (d2, _, _) = tables(16);
        let req = CorrelationRequest {
            x: 4.0,
            h: 1,
            k: 2,
            variant: Variant::Plus,
            weight: Some(WeightSpec::bump(1.0).unwrap()),
        };
        let (v, excluded) = smooth_shifted_sum(&req, &d2, &d2).unwrap();
        assert_eq!(excluded, 0);
        let expect = (d2.get(3) * d2.get(4)) as f64;
        assert!((v - expect).abs() < 1e-12, "{v} vs {expect}");
    }

    #[test]
    fn smooth_sum_below_sharp_sum() {
        let (d2, _, _) = tables(20_100);
        let req = CorrelationRequest {
            x: 10_000.0,
            h: 1,
            k: 2,
            variant: Variant::Plus,
            weight: Some(WeightSpec::bump(0.5).unwrap()),
        };
        let (smooth, _) = smooth_shifted_sum(&req, &d2, &d2).unwrap();
        let sharp = shifted_sum(
            &CorrelationRequest {
                weight: None,
                ..req
            },
            &d2,
            &d2,
        )
        .unwrap()
        .0 as f64;
        assert!(smooth > 0.0);
        assert!(smooth <= sharp);
    }

    #[test]
    fn smooth_sum_mirrored_shift() {
        // sum w(n/x) d_k(n) d(n - h) equals the plus-variant sum re-indexed
        let (d2, _, _) = tables(4100);
        let x = 2000.0;
        let h = 5i64;
        let w = WeightSpec::bump(1.0).unwrap();
        let req = CorrelationRequest {
            x,
            h,
            k: 2,
            variant: Variant::Minus,
            weight: Some(w),
        };
        let (v, _) = smooth_shifted_sum(&req, &d2, &d2).unwrap();
        let window = Window::scaled(w, x);
        let mut direct = 0.0;
        for m in 1..=4000u64 {
            let n = m as i64 + h;
            if n < 1 {
                continue;
            }
            direct += window.eval(n as f64) * d2.get(n as u64) as f64 * d2.get(m) as f64;
        }
        assert!((v - direct).abs() < 1e-9);
    }

    #[test]
    fn progression_examples() {
        let (d2, _, _) = tables(128);
        // b = 2, h = 1, sharp [1, 10]: d(1)+d(3)+d(5)+d(7)+d(9) = 10
        let w = Window::sharp(1.0, 10.0);
        assert_eq!(progression_sum(2, 1, &w, &d2).unwrap(), 10.0);
        assert_eq!(progression_sum_exact(2, 1, 1, 10, &d2).unwrap(), 10);

        // b = 1: every m in the window
        let all: u64 = (1..=10u64).map(|m| d2.get(m)).sum();
        assert_eq!(progression_sum(1, 0, &w, &d2).unwrap(), all as f64);

        // b > span of the window: at most one term
        let _w = Window::sharp(50.0, 100.0);
        let v = progression_sum_exact(60, 1, 50, 100, &d2).unwrap();
        assert_eq!(v, d2.get(61));
    }

    #[test]
    fn progression_handles_negative_residue() {
        let (d2, _, _) = tables(128);
        // m == -1 (mod 5) over [1, 30]: m in {4, 9, 14, 19, 24, 29}
        let expect: u64 = [4u64, 9, 14, 19, 24, 29].iter().map(|&m| d2.get(m)).sum();
        assert_eq!(progression_sum_exact(5, -1, 1, 30, &d2).unwrap(), expect);
    }

    #[test]
    fn decomposition_identity_small() {
        // sum_{n <= x} d_k(n) d(n + h) = sum_b d_{k-1}(b) *
        //   (progression sum of d over m == h (mod b), h < m <= x + h)
        let limit = 2100u64;
        let spf = SpfTable::build(limit).unwrap();
        let d2 = sieve_dk(limit, 2, &spf).unwrap();
        for k in [3u32, 4] {
            let dk = sieve_dk(limit, k, &spf).unwrap();
            let dkm1 = sieve_dk(limit, k - 1, &spf).unwrap();
            for h in [1i64, 2] {
                let x = 2000u64;
                let req = CorrelationRequest {
                    x: x as f64,
                    h,
                    k,
                    variant: Variant::Plus,
                    weight: None,
                };
                let lhs = shifted_sum(&req, &dk, &d2).unwrap().0;
                let mut rhs = 0u64;
                for b in 1..=x {
                    // m = a b + h with 1 <= a <= x/b is exactly the class
                    // m == h (mod b) over the window (h, x + h]
                    rhs += dkm1.get(b)
                        * progression_sum_exact(b, h, h as u64 + 1, x + h as u64, &d2)
                            .unwrap();
                }
                assert_eq!(lhs, rhs, "k = {k}, h = {h}");
            }
        }
    }

    #[test]
    fn pair_correlation_symmetry_and_diagonal() {
        let (d2, _, _) = tables(1024);
        let sharp = WeightSpec::sharp();
        let a = pair_correlation(2, 3, 1, 300.0, sharp, &d2).unwrap();
        let b = pair_correlation(3, 2, 1, 300.0, sharp, &d2).unwrap();
        assert_eq!(a, b);

        // r1 = r2 = r: sum of w(r b / x)^2 d(r b + h)^2
        let r = 2u64;
        let x = 300.0;
        let v = pair_correlation(r, r, 1, x, sharp, &d2).unwrap();
        let mut direct = 0.0;
        for bb in 1..=150u64 {
            direct += (d2.get(r * bb + 1) * d2.get(r * bb + 1)) as f64;
        }
        assert_eq!(v, direct);
    }

    #[test]
    fn pair_correlation_sharp_enumeration() {
        let (d2, _, _) = tables(256);
        // (r1, r2, h, x) = (1, 2, 1, 100), sharp: b <= 50
        let v = pair_correlation(1, 2, 1, 100.0, WeightSpec::sharp(), &d2).unwrap();
        let mut direct = 0.0;
        for b in 1..=50u64 {
            direct += (d2.get(b + 1) * d2.get(2 * b + 1)) as f64;
        }
        assert_eq!(v, direct);
    }

    #[test]
    fn defect_moments_positive_semidefinite() {
        let (d2, _, _) = tables(25_000);
        let ctx = AnalyticContext::default();
        let x = 10_000.0f64;
        let a1 = x.powf(0.25);
        let cfg = DefectConfig {
            a_window: Window::scaled(WeightSpec::bump(1.0).unwrap(), a1),
            weight: WeightSpec::bump(1.0).unwrap(),
            x,
            h: 1,
        };
        let b_lo = (x / a1 / 2.0) as u64;
        let b_hi = (x / a1) as u64;
        let m = defect_moments(&cfg, b_lo..=b_hi, &d2, &ctx).unwrap();
        let defect = m.phi0_sq - 2.0 * m.cross + m.phi_sq;
        assert!(defect >= 0.0, "defect {defect}");
        // one-point range: Cauchy-Schwarz is equality on one point
        let one = defect_moments(&cfg, b_lo..=b_lo, &d2, &ctx).unwrap();
        assert!(one.cross * one.cross <= one.phi0_sq * one.phi_sq * (1.0 + 1e-12));
        // empty range
        let empty = defect_moments(&cfg, 10..=9, &d2, &ctx).unwrap();
        assert_eq!(empty.phi_sq, 0.0);
        assert_eq!(empty.cross, 0.0);
        assert_eq!(empty.phi0_sq, 0.0);
    }

    #[test]
    fn defect_identity_matches_direct_square() {
        // Sigma1 - 2 Sigma2 + Sigma3 = sum (Phi0 - Phi)^2, computed directly
        let (d2, _, _) = tables(25_000);
        let ctx = AnalyticContext::default();
        let x = 8000.0f64;
        let a1 = 12.0;
        let cfg = DefectConfig {
            a_window: Window::scaled(WeightSpec::bump(1.0).unwrap(), a1),
            weight: WeightSpec::bump(1.0).unwrap(),
            x,
            h: 1,
        };
        let b_lo = 400u64;
        let b_hi = 500u64;
        let m = defect_moments(&cfg, b_lo..=b_hi, &d2, &ctx).unwrap();
        let lhs = m.phi0_sq - 2.0 * m.cross + m.phi_sq;

        let mut rhs = 0.0;
        for b in b_lo..=b_hi {
            let mut phi = 0.0;
            for a in 1..=(a1 as u64) {
                let va = cfg.a_window.eval(a as f64);
                if va == 0.0 {
                    continue;
                }
                let n = a * b;
                phi += va
                    * cfg.weight.eval(n as f64 / x)
                    * d2.get((n as i64 + 1) as u64) as f64;
            }
            let n_window = Window::product(
                Window::scaled(cfg.weight, x),
                Window::scaled(WeightSpec::bump(1.0).unwrap(), a1 * b as f64),
            );
            let p0 = phi0(b, 1, &n_window, &ctx).unwrap();
            rhs += (p0 - phi) * (p0 - phi);
        }
        assert!(
            (lhs - rhs).abs() <= 1e-9 * rhs.abs().max(1.0),
            "{lhs} vs {rhs}"
        );
    }
}

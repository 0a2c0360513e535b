//! Main term for the pair-correlation sums
//! `sum over b of w(r1 b/x) w(r2 b/x) d(r1 b + h) d(r2 b + h)`:
//!
//! `M(r1, r2) = int w(r1 eta/x) w(r2 eta/x)
//!     Delta_{delta1}(r1 eta + h) Delta_{delta2}(r2 eta + h)
//!     C(r1, r2, h; delta1, delta2) d eta`,
//!
//! where C is the gcd-structured singular series below and both Delta
//! operators act on the full product. Since all delta-dependence sits in C,
//! the double operator produces four eta-independent coefficients (value,
//! two first derivatives, mixed derivative at delta = 0), each integrated
//! against the window times the corresponding log factors.

use crate::arith::{factorize, gcd_i64, psi_of_primes, ramanujan_sum};
use crate::error::{Error, Result};
use crate::mainterm::{AnalyticContext, DeltaParams, SeriesTruncation};
use crate::quad::integrate_adaptive;
use crate::weight::{WeightSpec, Window};

/// The singular series of the pair correlation:
///
/// `C(r1, r2, h) = sum over u1 | (r1, h), u2 | (r2, h) of
///    u1^d1 u2^d2 / ((r1,h)^d1 (r2,h)^d2)
///    psi_{d1}(r1 u1 / (r1,h)) psi_{d2}(r2 u2 / (r2,h))
///    sum over d <= d_max coprime to r1 u1 r2 u2 / ((r1,h)(r2,h)) of
///      d^-(2+d1+d2) c_d((r1 h - r2 h) / ((r1,h)(r2,h)))`.
///
/// The Ramanujan-sum argument is always an integer (gcd(u1,u2) divides
/// r1 - r2 whenever u1 | r1, u2 | r2 and both divide h); the guard stays in
/// place and reports the configuration should the reduction ever fail.
pub fn pair_singular_series(
    r1: u64,
    r2: u64,
    h: i64,
    delta1: f64,
    delta2: f64,
    trunc: &SeriesTruncation,
) -> Result<f64> {
    if r1 == 0 || r2 == 0 {
        return Err(Error::NonPositive);
    }
    if h == 0 {
        return Err(Error::InvalidParameter(
            "pair correlation requires a nonzero shift".into(),
        ));
    }
    let g1 = gcd_i64(r1 as i64, h);
    let g2 = gcd_i64(r2 as i64, h);
    let num = h
        .checked_mul(r1 as i64 - r2 as i64)
        .ok_or_else(|| Error::InvalidParameter("shift argument overflows".into()))?;
    let den = (g1 * g2) as i64;
    if num % den != 0 {
        return Err(Error::NonIntegralShift {
            num,
            den,
            r1,
            r2,
            h,
        });
    }
    let arg = num / den;

    // c_d(arg) for d <= d_max, shared across tuples
    let d_max = trunc.d_max.max(1);
    let mut c_row = Vec::with_capacity(d_max as usize + 1);
    c_row.push(0.0);
    for d in 1..=d_max {
        c_row.push(ramanujan_sum(d, arg)? as f64);
    }

    let mut total = 0.0f64;
    for &u1 in &factorize(g1, None)?.divisors() {
        for &u2 in &factorize(g2, None)?.divisors() {
            let q1 = r1 / g1 * u1;
            let q2 = r2 / g2 * u2;
            let mask = q1 * q2;
            let weight = (u1 as f64 / g1 as f64).powf(delta1)
                * (u2 as f64 / g2 as f64).powf(delta2)
                * psi_of_primes(delta1, factorize(q1, None)?.primes())
                * psi_of_primes(delta2, factorize(q2, None)?.primes());
            let mut dsum = 0.0f64;
            for d in 1..=d_max {
                if c_row[d as usize] == 0.0 || crate::arith::gcd(d, mask) != 1 {
                    continue;
                }
                dsum += c_row[d as usize] * (d as f64).powf(-(2.0 + delta1 + delta2));
            }
            total += weight * dsum;
        }
    }
    Ok(total)
}

/// Value, both first delta-derivatives, and the mixed derivative of the
/// pair singular series at delta = 0, by central differences with one
/// Richardson refinement.
fn singular_series_jet(
    r1: u64,
    r2: u64,
    h: i64,
    params: &DeltaParams,
    trunc: &SeriesTruncation,
) -> Result<(f64, f64, f64, f64)> {
    let e = params.fd_step;
    let f = |d1: f64, d2: f64| pair_singular_series(r1, r2, h, d1, d2, trunc);
    let c0 = f(0.0, 0.0)?;

    let d1 = {
        let coarse = (f(e, 0.0)? - f(-e, 0.0)?) / (2.0 * e);
        let fine = (f(0.5 * e, 0.0)? - f(-0.5 * e, 0.0)?) / e;
        (4.0 * fine - coarse) / 3.0
    };
    let d2 = {
        let coarse = (f(0.0, e)? - f(0.0, -e)?) / (2.0 * e);
        let fine = (f(0.0, 0.5 * e)? - f(0.0, -0.5 * e)?) / e;
        (4.0 * fine - coarse) / 3.0
    };
    let cross = |s: f64| -> Result<f64> {
        Ok((f(s, s)? - f(s, -s)? - f(-s, s)? + f(-s, -s)?) / (4.0 * s * s))
    };
    let d12 = {
        let coarse = cross(e)?;
        let fine = cross(0.5 * e)?;
        (4.0 * fine - coarse) / 3.0
    };
    if !(c0.is_finite() && d1.is_finite() && d2.is_finite() && d12.is_finite()) {
        return Err(Error::NonFinite("pair singular series jet"));
    }
    Ok((c0, d1, d2, d12))
}

/// The pair-correlation main term. Requires `r1 != r2` (the diagonal is the
/// caller's concern) and `h >= 1`.
#[allow(clippy::too_many_arguments)]
pub fn pair_main_term(
    r1: u64,
    r2: u64,
    h: i64,
    x: f64,
    weight: WeightSpec,
    params: &DeltaParams,
    trunc: &SeriesTruncation,
    ctx: &AnalyticContext,
) -> Result<f64> {
    if r1 == r2 {
        return Err(Error::InvalidParameter(
            "pair main term is defined off the diagonal r1 != r2".into(),
        ));
    }
    if h < 1 {
        return Err(Error::InvalidParameter(
            "pair main term requires h >= 1".into(),
        ));
    }
    let window = Window::product(
        Window::scaled(weight, x / r1 as f64),
        Window::scaled(weight, x / r2 as f64),
    );
    let (lo, hi) = window.support();
    let lo = lo.max(0.0);
    if hi <= lo {
        return Ok(0.0);
    }

    let (c0, c1, c2, c12) = singular_series_jet(r1, r2, h, params, trunc)?;

    // Delta1 Delta2 C = L1 L2 c0 + 2 L1 c2 + 2 L2 c1 + 4 c12,
    // L_i(eta) = log(r_i eta + h) + 2 gamma
    let two_gamma = 2.0 * ctx.euler_gamma;
    let hf = h as f64;
    let r1f = r1 as f64;
    let r2f = r2 as f64;
    let mut integrand = |eta: f64| {
        let w = window.eval(eta);
        if w == 0.0 {
            return 0.0;
        }
        let l1 = (r1f * eta + hf).ln() + two_gamma;
        let l2 = (r2f * eta + hf).ln() + two_gamma;
        w * (l1 * l2 * c0 + 2.0 * l1 * c2 + 2.0 * l2 * c1 + 4.0 * c12)
    };
    integrate_adaptive(&mut integrand, lo, hi, &ctx.quad)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::correlate::pair_correlation;
    use crate::sieve::{sieve_dk, SpfTable};

    #[test]
    fn singular_series_base_value() {
        // r1 = 1, r2 = 2, h = 1: single tuple, argument -1, so
        // C = psi_0(2) sum over odd d of mu(d)/d^2 = (1/2)(6/pi^2)/(1 - 1/4)
        let t = SeriesTruncation::with_d_max(4000);
        let got = pair_singular_series(1, 2, 1, 0.0, 0.0, &t).unwrap();
        let expect = 4.0 / std::f64::consts::PI.powi(2);
        assert!((got - expect).abs() < 1e-5, "{got} vs {expect}");
    }

    #[test]
    fn singular_series_symmetry() {
        let t = SeriesTruncation::with_d_max(1000);
        let a = pair_singular_series(6, 35, 4, 0.13, 0.05, &t).unwrap();
        let b = pair_singular_series(35, 6, 4, 0.05, 0.13, &t).unwrap();
        assert!((a - b).abs() < 1e-12, "{a} vs {b}");
    }

    #[test]
    fn gcd_collapse_single_tuple() {
        // coprime (r_i, h): the u-sums collapse; value equals
        // psi_0(r1) psi_0(r2) sum over d coprime to r1 r2 of c_d(h(r1-r2))/d^2
        let t = SeriesTruncation::with_d_max(2000);
        let got = pair_singular_series(3, 5, 1, 0.0, 0.0, &t).unwrap();
        let mut expect = 0.0;
        for d in 1..=2000u64 {
            if crate::arith::gcd(d, 15) != 1 {
                continue;
            }
            expect += ramanujan_sum(d, -2).unwrap() as f64 / (d * d) as f64;
        }
        expect *= psi_of_primes(0.0, [3u64].into_iter()) * psi_of_primes(0.0, [5u64].into_iter());
        assert!((got - expect).abs() < 1e-12);
    }

    #[test]
    fn main_term_symmetric_and_requires_offdiagonal() {
        let ctx = AnalyticContext::default();
        let params = DeltaParams::at_zero();
        let t = SeriesTruncation::with_d_max(1000);
        let a =
            pair_main_term(1, 2, 1, 50_000.0, WeightSpec::sharp(), &params, &t, &ctx).unwrap();
        let b =
            pair_main_term(2, 1, 1, 50_000.0, WeightSpec::sharp(), &params, &t, &ctx).unwrap();
        assert!((a - b).abs() <= 1e-10 * a.abs());
        assert!(
            pair_main_term(2, 2, 1, 1000.0, WeightSpec::sharp(), &params, &t, &ctx).is_err()
        );
    }

    #[test]
    fn main_term_tracks_brute_force() {
        let limit = 200_010u64;
        let spf = SpfTable::build(limit).unwrap();
        let d2 = sieve_dk(limit, 2, &spf).unwrap();
        let ctx = AnalyticContext::default();
        let params = DeltaParams::at_zero();
        let t = SeriesTruncation::with_d_max(2000);
        let x = 100_000.0;
        for (r1, r2, h) in [(1u64, 2u64, 1i64), (2, 3, 2), (3, 5, 1)] {
            let exact = pair_correlation(r1, r2, h, x, WeightSpec::sharp(), &d2).unwrap();
            let m = pair_main_term(r1, r2, h, x, WeightSpec::sharp(), &params, &t, &ctx).unwrap();
            let rel = (exact - m).abs() / exact;
            assert!(rel < 0.05, "(r1,r2,h) = ({r1},{r2},{h}): rel {rel:.4}");
        }
    }

    #[test]
    fn empty_window_gives_zero() {
        // bump weights with r2 = 2 r1 have disjoint supports
        let ctx = AnalyticContext::default();
        let params = DeltaParams::at_zero();
        let t = SeriesTruncation::with_d_max(500);
        let w = crate::weight::WeightSpec::bump(1.0).unwrap();
        let m = pair_main_term(1, 2, 1, 10_000.0, w, &params, &t, &ctx).unwrap();
        assert_eq!(m, 0.0);
    }
}

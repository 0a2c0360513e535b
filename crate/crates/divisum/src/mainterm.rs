//! Predicted main terms for divisor sums over progressions and for the
//! shifted correlation sums.
//!
//! The building block is the logarithmic weight
//! `lambda_{h,d}(xi) = (c_d(h)/d) (log xi + 2 gamma - 2 log d)`,
//! which is what the operator `Delta_delta = (log xi + 2 gamma +
//! 2 d/d delta)|_{delta=0}` produces when applied to `c_d(h) d^(-1-delta)`.
//! Summing it over the divisors of the modulus gives the progression main
//! term `phi0`; resumming against d_{k-1} gives the correlation main term.

use crate::arith::ramanujan_sum;
use crate::error::{Error, Result};
use crate::quad::{integrate_adaptive, QuadConfig};
use crate::sieve::{DivisorTable, MobiusTable};
use crate::weight::{WeightSpec, Window};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Shared analytic configuration: the constant gamma and the quadrature
/// tolerances used by every integral evaluator.
#[derive(Debug, Clone, Copy)]
pub struct AnalyticContext {
    pub euler_gamma: f64,
    pub quad: QuadConfig,
}

impl Default for AnalyticContext {
    fn default() -> Self {
        AnalyticContext {
            euler_gamma: EULER_GAMMA,
            quad: QuadConfig::default(),
        }
    }
}

/// Regularization exponents (delta1, delta2) and the finite-difference step
/// used to realize d/d delta numerically.
#[derive(Debug, Clone, Copy)]
pub struct DeltaParams {
    pub delta1: f64,
    pub delta2: f64,
    pub fd_step: f64,
}

impl DeltaParams {
    pub fn new(delta1: f64, delta2: f64, fd_step: f64) -> Result<Self> {
        if delta1.abs() > 0.5 || delta2.abs() > 0.5 {
            return Err(Error::InvalidParameter(
                "regularization exponents must satisfy |delta| <= 0.5".into(),
            ));
        }
        if !(1e-6..=1e-2).contains(&fd_step) {
            return Err(Error::InvalidParameter(
                "finite-difference step must lie in [1e-6, 1e-2]".into(),
            ));
        }
        Ok(DeltaParams {
            delta1,
            delta2,
            fd_step,
        })
    }

    pub fn at_zero() -> Self {
        DeltaParams {
            delta1: 0.0,
            delta2: 0.0,
            fd_step: 1e-4,
        }
    }
}

/// Truncation settings for the infinite sums (singular series, dual sums).
#[derive(Debug, Clone, Copy)]
pub struct SeriesTruncation {
    pub d_max: u64,
    pub tail_tol: f64,
    pub quadrature_points: u32,
}

impl Default for SeriesTruncation {
    fn default() -> Self {
        SeriesTruncation {
            d_max: 2000,
            tail_tol: 1e-6,
            quadrature_points: 32,
        }
    }
}

impl SeriesTruncation {
    pub fn with_d_max(d_max: u64) -> Self {
        SeriesTruncation {
            d_max,
            ..Default::default()
        }
    }
}

/// `lambda_{h,d}(xi) = (c_d(h)/d) (log xi + 2 gamma - 2 log d)`.
pub fn lambda(h: i64, d: u64, xi: f64, ctx: &AnalyticContext) -> Result<f64> {
    if xi <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "lambda requires a positive argument, got {xi}"
        )));
    }
    let c = ramanujan_sum(d, h)? as f64;
    let d = d as f64;
    Ok(c / d * (xi.ln() + 2.0 * ctx.euler_gamma - 2.0 * d.ln()))
}

/// Applies `Delta_delta(xi) = (log xi + 2 gamma + 2 d/d delta)|_{delta = 0}`
/// to a scalar function of delta: `(log xi + 2 gamma) f(0) + 2 f'(0)`, with
/// the derivative by central differences plus one Richardson refinement.
pub fn delta_operator(
    f: &mut dyn FnMut(f64) -> f64,
    xi: f64,
    params: &DeltaParams,
    ctx: &AnalyticContext,
) -> Result<f64> {
    if xi <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "delta operator requires a positive argument, got {xi}"
        )));
    }
    let e = params.fd_step;
    let f0 = f(0.0);
    let coarse = (f(e) - f(-e)) / (2.0 * e);
    let fine = (f(0.5 * e) - f(-0.5 * e)) / e;
    let deriv = (4.0 * fine - coarse) / 3.0;
    let value = (xi.ln() + 2.0 * ctx.euler_gamma) * f0 + 2.0 * deriv;
    if !value.is_finite() {
        return Err(Error::NonFinite("delta operator"));
    }
    Ok(value)
}

/// Divisor-sum coefficients of the progression main term for modulus `b`:
/// writing `sum over d | b of lambda_{h,d}(u) = c1 (log u + 2 gamma) - c2`,
/// returns `(c1, c2)` with `c1 = sum c_d(h)/d`, `c2 = 2 sum (c_d(h)/d) log d`.
pub fn progression_coefficients(b: u64, h: i64) -> Result<(f64, f64)> {
    if b == 0 {
        return Err(Error::ZeroModulus);
    }
    let divisors = crate::arith::factorize(b, None)?.divisors();
    let mut c1 = 0.0;
    let mut c2 = 0.0;
    for d in divisors {
        let c = ramanujan_sum(d, h)? as f64;
        if c == 0.0 {
            continue;
        }
        let df = d as f64;
        c1 += c / df;
        c2 += 2.0 * c / df * df.ln();
    }
    Ok((c1, c2))
}

/// Main term of the divisor sum over the progression determined by `b` and
/// `h`, against a window in the summation variable `xi` (so the divisor
/// argument is `xi + h`):
///
/// `phi0(b) = (1/b) * integral of window(xi) * sum over d | b of
/// lambda_{h,d}(xi + h) d xi`.
///
/// Sharp windows use the exact antiderivative; smooth windows are handled by
/// adaptive quadrature at the context tolerance.
pub fn phi0(b: u64, h: i64, window: &Window, ctx: &AnalyticContext) -> Result<f64> {
    let (c1, c2) = progression_coefficients(b, h)?;
    let (lo, hi) = window.support();
    if hi <= lo {
        return Ok(0.0);
    }
    let hf = h as f64;
    if lo + hf < 0.0 {
        return Err(Error::InvalidParameter(
            "window reaches non-positive divisor arguments".into(),
        ));
    }
    let two_gamma = 2.0 * ctx.euler_gamma;
    let integral = match window {
        Window::Sharp { .. } => {
            // antiderivative of log(xi + h) is (xi+h) log(xi+h) - (xi+h)
            let a = |u: f64| if u <= 0.0 { 0.0 } else { u * u.ln() - u };
            let log_part = a(hi + hf) - a(lo + hf);
            c1 * (log_part + two_gamma * (hi - lo)) - c2 * (hi - lo)
        }
        _ => integrate_adaptive(
            &mut |xi: f64| window.eval(xi) * (c1 * ((xi + hf).ln() + two_gamma) - c2),
            lo,
            hi,
            &ctx.quad,
        )?,
    };
    Ok(integral / b as f64)
}

/// Which of the two shifted correlation sums is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// `sum over n <= x of d_k(n) d(n + h)`
    Plus,
    /// `sum over n <= x of d_k(n + h) d(n)`
    Minus,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Plus => "plus",
            Variant::Minus => "minus",
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plus" => Ok(Variant::Plus),
            "minus" => Ok(Variant::Minus),
            other => Err(Error::InvalidParameter(format!(
                "unknown variant '{other}' (expected plus or minus)"
            ))),
        }
    }
}

/// Default mode cutoff for [`main_term`]: large enough that the model error
/// is far below the brute-force comparison tolerances, small enough
/// (well below sqrt(x)) that the modes cannot resolve individual divisor
/// counts.
pub fn mode_cutoff(x: f64) -> u64 {
    if x < 1.0 {
        return 1;
    }
    let floor = (x.sqrt().floor() as u64).clamp(1, 16);
    (x.powf(0.4).ceil() as u64).max(floor)
}

/// Predicted main term for the shifted correlation sum, evaluated as a
/// Ramanujan-mode sum: the shifted divisor factor is replaced by its
/// truncated mode expansion
///
/// `T_Q(m) = sum over q <= Q of (c_q(m)/q)(log m + 2 gamma - 2 log q)`,
///
/// so that `M = sum over n <= x of w(n/x) d_k(n) T_Q(n + h)` (plus variant;
/// the minus variant models the plain divisor factor instead). For q | n
/// the modes coincide exactly with the divisor-restricted lambda_{h,q}
/// resummation, since `c_q(n + h) = c_q(h)` there; completing the sum to
/// all q <= Q removes the near-diagonal bias that the purely
/// divisor-restricted form suffers for moduli beyond x^(2/3)
/// (see [`main_term_resummed`]).
///
/// Computed by swapping to progression sums of the d_k table over moduli
/// e <= Q, in O(x log Q). Requires `h >= 1`, `mu` tabulated to Q, and the
/// d_k table up to x (plus variant) or x + h (minus variant).
pub fn main_term(
    x: f64,
    h: i64,
    k: u32,
    variant: Variant,
    weight: Option<WeightSpec>,
    dk: &DivisorTable,
    mu: &MobiusTable,
    ctx: &AnalyticContext,
) -> Result<f64> {
    main_term_modes(x, h, k, variant, weight, dk, mu, ctx, mode_cutoff(x))
}

/// [`main_term`] with an explicit mode cutoff.
#[allow(clippy::too_many_arguments)]
pub fn main_term_modes(
    x: f64,
    h: i64,
    k: u32,
    variant: Variant,
    weight: Option<WeightSpec>,
    dk: &DivisorTable,
    mu: &MobiusTable,
    ctx: &AnalyticContext,
    mode_cut: u64,
) -> Result<f64> {
    if h < 1 {
        return Err(Error::InvalidParameter(
            "main term is defined for shifts h >= 1".into(),
        ));
    }
    if k < 1 {
        return Err(Error::InvalidParameter("main term requires k >= 1".into()));
    }
    if dk.k() != k {
        return Err(Error::InvalidParameter(format!(
            "main term for k = {k} needs the d_{k} table, got d_{}",
            dk.k()
        )));
    }
    if x < 1.0 {
        return Ok(0.0);
    }
    let n_max = x.floor() as u64;
    let table_need = match variant {
        Variant::Plus => n_max,
        Variant::Minus => n_max + h as u64,
    };
    if table_need > dk.limit() {
        return Err(Error::TableLimit {
            what: "n",
            value: table_need,
            limit: dk.limit(),
        });
    }
    let q_cut = mode_cut.max(1);
    if q_cut > mu.limit() {
        return Err(Error::TableLimit {
            what: "mode cutoff",
            value: q_cut,
            limit: mu.limit(),
        });
    }
    let window = weight.map(|w| Window::scaled(w, x));
    let hf = h as f64;
    let two_gamma = 2.0 * ctx.euler_gamma;

    // M = sum over e <= Q of [P'_e alpha_e + P_e beta_e], where P_e and P'_e
    // are progression sums of the exact d_k values (with and without the
    // log factor) and alpha, beta collect the Moebius weights of the modes
    // divisible by e. Parallel over e with ordered reduction.
    use rayon::prelude::*;
    let partials: Vec<f64> = (1..=q_cut)
        .into_par_iter()
        .map(|e| {
            // progression: plus variant needs n == -h (mod e) with the d_k
            // factor at n and the log at n + h; minus needs e | n with the
            // d_k factor at n + h and the log at n.
            let r = match variant {
                Variant::Plus => (-h).rem_euclid(e as i64) as u64,
                Variant::Minus => 0,
            };
            let mut n = if r == 0 { e } else { r };
            let mut p = 0.0f64;
            let mut pl = 0.0f64;
            while n <= n_max {
                let (dv, logarg) = match variant {
                    Variant::Plus => (dk.get(n), n as f64 + hf),
                    Variant::Minus => (dk.get(n + h as u64), n as f64),
                };
                let mut v = dv as f64;
                if let Some(w) = &window {
                    let wv = w.eval(n as f64);
                    if wv == 0.0 {
                        n += e;
                        continue;
                    }
                    v *= wv;
                }
                p += v;
                pl += v * logarg.ln();
                n += e;
            }
            let mut alpha = 0.0f64;
            let mut beta = 0.0f64;
            let ln_e = (e as f64).ln();
            for j in 1..=(q_cut / e) {
                let m = mu.get(j);
                if m == 0 {
                    continue;
                }
                let mj = m as f64 / j as f64;
                alpha += mj;
                beta += mj * (two_gamma - 2.0 * ln_e - 2.0 * (j as f64).ln());
            }
            pl * alpha + p * beta
        })
        .collect();
    Ok(partials.into_iter().sum())
}

/// Semi-analytic main term in its divisor-restricted resummed form: the
/// progression main terms `phi0` resummed against d_{k-1},
///
/// `M = sum over b of d_{k-1}(b) (1/b) sum over d | b of (c_d(h)/d) *
///      integral of W(xi) (log(xi + s) + 2 gamma - 2 log d) d xi`,
///
/// with `s = h` for the plus variant (where the window W covers the d_k
/// argument) and `s = 0` for the minus variant (where W covers the plain
/// divisor argument and b runs up to x + h). Computed by swapping the b and
/// d sums, in O(x log x). Requires `h >= 1`.
///
/// Accuracy caveat: for sharp cutoffs this form systematically misweights
/// the moduli b beyond x^(2/3), whose inner progressions hold only O(1)
/// terms; the bias is of order x (log x)^(k-2) (a few percent at x = 1e6
/// and growing in k and h). [`main_term`] is the default evaluator; this
/// form is kept for cross-checks at moderate accuracy.
pub fn main_term_resummed(
    x: f64,
    h: i64,
    k: u32,
    variant: Variant,
    weight: Option<WeightSpec>,
    dkm1: &DivisorTable,
    mu: &MobiusTable,
    ctx: &AnalyticContext,
) -> Result<f64> {
    if h < 1 {
        return Err(Error::InvalidParameter(
            "main term is defined for shifts h >= 1".into(),
        ));
    }
    if k < 1 {
        return Err(Error::InvalidParameter("main term requires k >= 1".into()));
    }
    if dkm1.k() != k - 1 {
        return Err(Error::InvalidParameter(format!(
            "main term for k = {k} needs the d_{} table, got d_{}",
            k - 1,
            dkm1.k()
        )));
    }
    if x < 1.0 {
        return Ok(0.0);
    }
    let b_max = match variant {
        Variant::Plus => x.floor() as u64,
        Variant::Minus => x.floor() as u64 + h as u64,
    };
    if b_max > dkm1.limit() {
        return Err(Error::TableLimit {
            what: "b",
            value: b_max,
            limit: dkm1.limit(),
        });
    }
    if b_max > mu.limit() {
        return Err(Error::TableLimit {
            what: "b",
            value: b_max,
            limit: mu.limit(),
        });
    }

    // The window over the integration variable xi, and the shift s entering
    // log(xi + s). For smooth weights the two window integrals W0 and Jlog
    // are modulus-independent and computed once.
    let hf = h as f64;
    let shift = match variant {
        Variant::Plus => hf,
        Variant::Minus => 0.0,
    };
    let (w0, jlog) = match weight {
        None => (0.0, 0.0),
        Some(w) => {
            let window = match variant {
                Variant::Plus => Window::scaled(w, x),
                Variant::Minus => Window::translated(Window::scaled(w, x), hf),
            };
            let (lo, hi) = window.support();
            let lo = lo.max(0.0);
            if hi <= lo {
                return Ok(0.0);
            }
            let w0 = integrate_adaptive(&mut |xi: f64| window.eval(xi), lo, hi, &ctx.quad)?;
            let jl = integrate_adaptive(
                &mut |xi: f64| window.eval(xi) * (xi + shift).ln(),
                lo,
                hi,
                &ctx.quad,
            )?;
            (w0, jl)
        }
    };

    let two_gamma = 2.0 * ctx.euler_gamma;
    let h_divisors = crate::arith::factorize(h as u64, None)?.divisors();

    // Sharp cutoff: the per-modulus integral runs to the last lattice point
    // X_b = b * floor(x / b), not to x itself. The continuum measure X_b / b
    // then equals the integer count of the inner progression exactly; using
    // x instead overcounts every modulus by the fractional part {x/b}, which
    // aggregates to a systematic h-dependent excess of a few percent.
    let sharp = weight.is_none();
    let n_max = x.floor();
    let antid = |u: f64| if u <= 0.0 { 0.0 } else { u * u.ln() - u };

    // M = sum over d of (c_d(h)/d) sum over multiples b = j d of
    //     d_{k-1}(b)/b [Jlog(b) + (2 gamma - 2 log d) W0(b)].
    // Blocked over d; blocks may run on parallel workers but are reduced in
    // block order, so the result does not depend on the worker count.
    use rayon::prelude::*;
    let block = 4096u64;
    let blocks = b_max.div_ceil(block);
    let partials: Vec<f64> = (0..blocks)
        .into_par_iter()
        .map(|bi| {
            let d_lo = bi * block + 1;
            let d_hi = ((bi + 1) * block).min(b_max);
            let mut acc = 0.0;
            for d in d_lo..=d_hi {
                // c_d(h) = sum over e | (d, h) of e mu(d/e)
                let mut c = 0i64;
                for &e in &h_divisors {
                    if d % e == 0 {
                        c += e as i64 * mu.get(d / e);
                    }
                }
                if c == 0 {
                    continue;
                }
                let df = d as f64;
                let mut t_log = 0.0f64;
                let mut t_w0 = 0.0f64;
                let mut b = d;
                while b <= b_max {
                    let coeff = dkm1.get(b) as f64 / b as f64;
                    if sharp {
                        // lattice-exact endpoints of the inner progression
                        let (xi_lo, xi_hi, measure) = match variant {
                            Variant::Plus => {
                                let hi = (b * (n_max as u64 / b)) as f64;
                                (0.0, hi, hi)
                            }
                            Variant::Minus => {
                                let hu = h as u64;
                                let a_lo = hu / b;
                                let a_hi = (n_max as u64 + hu) / b;
                                let lo = (b * a_lo) as f64 - hf;
                                let hi = (b * a_hi) as f64 - hf;
                                (lo.max(0.0), hi, ((a_hi - a_lo) * b) as f64)
                            }
                        };
                        t_log += coeff * (antid(xi_hi + shift) - antid(xi_lo + shift));
                        t_w0 += coeff * measure;
                    } else {
                        t_log += coeff * jlog;
                        t_w0 += coeff * w0;
                    }
                    b += d;
                }
                acc += c as f64 / df * (t_log + (two_gamma - 2.0 * df.ln()) * t_w0);
            }
            acc
        })
        .collect();
    Ok(partials.into_iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sieve::{sieve_dk, sieve_mu, SpfTable};

    fn ctx() -> AnalyticContext {
        AnalyticContext::default()
    }

    #[test]
    fn lambda_examples() {
        let c = ctx();
        let g = c.euler_gamma;
        assert!((lambda(7, 1, 1.0, &c).unwrap() - 2.0 * g).abs() < 1e-15);
        // c_3(6) = 2
        let v = lambda(6, 3, std::f64::consts::E, &c).unwrap();
        let expect = 2.0 / 3.0 * (1.0 + 2.0 * g - 2.0 * 3.0f64.ln());
        assert!((v - expect).abs() < 1e-14);
        // c_2(1) = -1
        let x = 17.0f64;
        let v = lambda(1, 2, x, &c).unwrap();
        let expect = -0.5 * (x.ln() + 2.0 * g - 2.0 * 2.0f64.ln());
        assert!((v - expect).abs() < 1e-14);
        assert!(lambda(1, 2, 0.0, &c).is_err());
    }

    #[test]
    fn delta_operator_reproduces_lambda() {
        // applying the operator to c_d(h) d^(-1-delta) must give exactly
        // lambda_{h,d}: the -2 log d comes out of the derivative
        let c = ctx();
        let params = DeltaParams::at_zero();
        for d in [1u64, 2, 3, 10, 37, 100] {
            for h in [1i64, 2, 6, 12] {
                let cd = ramanujan_sum(d, h).unwrap() as f64;
                let xi = 50.0;
                let got = delta_operator(
                    &mut |delta| cd * (d as f64).powf(-1.0 - delta),
                    xi,
                    &params,
                    &c,
                )
                .unwrap();
                let expect = lambda(h, d, xi, &c).unwrap();
                assert!(
                    (got - expect).abs() < 1e-8,
                    "d = {d}, h = {h}: {got} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn delta_operator_trivial_cases() {
        let c = ctx();
        let params = DeltaParams::at_zero();
        let xi = 3.0f64;
        let v = delta_operator(&mut |_| 1.0, xi, &params, &c).unwrap();
        assert!((v - (xi.ln() + 2.0 * c.euler_gamma)).abs() < 1e-12);
        // f(delta) = exp(a delta) has derivative a at 0
        let a = 1.7f64;
        let v = delta_operator(&mut |d| (a * d).exp(), xi, &params, &c).unwrap();
        assert!((v - (xi.ln() + 2.0 * c.euler_gamma + 2.0 * a)).abs() < 1e-8);
    }

    #[test]
    fn delta_params_validation() {
        assert!(DeltaParams::new(0.6, 0.0, 1e-4).is_err());
        assert!(DeltaParams::new(0.1, 0.07, 1e-1).is_err());
        assert!(DeltaParams::new(0.1, 0.07, 1e-4).is_ok());
    }

    #[test]
    fn phi0_single_divisor() {
        // b = 1, sharp window [0, x], h = 1: integral of log(xi + 1) + 2 gamma
        let c = ctx();
        let x = 100.0f64;
        let got = phi0(1, 1, &Window::sharp(0.0, x), &c).unwrap();
        let a = |u: f64| u * u.ln() - u;
        let expect = a(x + 1.0) - a(1.0) + 2.0 * c.euler_gamma * x;
        assert!((got - expect).abs() < 1e-9 * expect.abs());
    }

    #[test]
    fn phi0_two_divisors_matches_lambda_quadrature() {
        let c = ctx();
        let x = 64.0f64;
        let got = phi0(2, 1, &Window::sharp(0.0, x), &c).unwrap();
        let expect = 0.5
            * integrate_adaptive(
                &mut |xi: f64| {
                    lambda(1, 1, xi + 1.0, &c).unwrap() + lambda(1, 2, xi + 1.0, &c).unwrap()
                },
                0.0,
                x,
                &c.quad,
            )
            .unwrap();
        assert!((got - expect).abs() < 1e-8 * expect.abs().max(1.0));
    }

    #[test]
    fn phi0_prime_dividing_shift() {
        // d = p contributes with c_p(h) = p - 1 when p | h
        let p = 5u64;
        let h = 10i64;
        let (c1, _) = progression_coefficients(p, h).unwrap();
        let expect = 1.0 + (p as f64 - 1.0) / p as f64;
        assert!((c1 - expect).abs() < 1e-15);
    }

    #[test]
    fn resummed_small_x_close_to_exact() {
        // k = 2, x = 10, h = 1: exact D = 74, main term within 15%
        let spf = SpfTable::build(64).unwrap();
        let d1 = sieve_dk(64, 1, &spf).unwrap();
        let mu = sieve_mu(64, &spf).unwrap();
        let m = main_term_resummed(10.0, 1, 2, Variant::Plus, None, &d1, &mu, &ctx()).unwrap();
        assert!(
            (m - 74.0).abs() / 74.0 < 0.15,
            "main term {m} too far from 74"
        );
    }

    #[test]
    fn mode_main_term_small_x_close_to_exact() {
        let spf = SpfTable::build(64).unwrap();
        let d2t = sieve_dk(64, 2, &spf).unwrap();
        let mu = sieve_mu(64, &spf).unwrap();
        let m = main_term(10.0, 1, 2, Variant::Plus, None, &d2t, &mu, &ctx()).unwrap();
        assert!(
            (m - 74.0).abs() / 74.0 < 0.15,
            "mode main term {m} too far from 74"
        );
    }

    #[test]
    fn mode_main_term_tracks_exact_at_moderate_x() {
        let limit = 20_030u64;
        let spf = SpfTable::build(limit).unwrap();
        let mu = sieve_mu(1000, &spf).unwrap();
        let d2t = sieve_dk(limit, 2, &spf).unwrap();
        let c = ctx();
        for (k, h) in [(2u32, 1i64), (2, 2), (3, 1), (3, 12)] {
            let dkt = sieve_dk(limit, k, &spf).unwrap();
            let x = 20_000.0;
            let exact: f64 = (1..=20_000u64)
                .map(|n| dkt.get(n) as f64 * d2t.get(n + h as u64) as f64)
                .sum();
            let m = main_term(x, h, k, Variant::Plus, None, &dkt, &mu, &c).unwrap();
            let rel = (exact - m).abs() / exact;
            assert!(rel < 0.01, "k = {k}, h = {h}: rel {rel}");
        }
    }

    #[test]
    fn mode_main_term_minus_variant() {
        let limit = 20_030u64;
        let spf = SpfTable::build(limit).unwrap();
        let mu = sieve_mu(1000, &spf).unwrap();
        let d2t = sieve_dk(limit, 2, &spf).unwrap();
        let d3t = sieve_dk(limit, 3, &spf).unwrap();
        let c = ctx();
        let h = 2i64;
        let exact: f64 = (1..=20_000u64)
            .map(|n| d3t.get(n + h as u64) as f64 * d2t.get(n) as f64)
            .sum();
        let m = main_term(20_000.0, h, 3, Variant::Minus, None, &d3t, &mu, &c).unwrap();
        let rel = (exact - m).abs() / exact;
        assert!(rel < 0.01, "minus variant rel {rel}");
    }

    #[test]
    fn main_term_monotone_in_x() {
        let spf = SpfTable::build(4000).unwrap();
        let d2t = sieve_dk(4000, 2, &spf).unwrap();
        let mu = sieve_mu(4000, &spf).unwrap();
        let mut last = 0.0;
        for x in [10.0, 40.0, 160.0, 640.0, 2560.0] {
            let m = main_term(x, 1, 2, Variant::Plus, None, &d2t, &mu, &ctx()).unwrap();
            assert!(m > last, "x = {x}");
            last = m;
        }
    }

    #[test]
    fn main_term_consistent_with_phi0_resummation() {
        // the two evaluation orders of the same double sum agree:
        // sum over b <= x of d_{k-1}(b) phi0(b, sharp window to the last
        // lattice point b floor(x/b)) = main_term
        let c = ctx();
        let x = 400.0;
        let spf = SpfTable::build(400).unwrap();
        let mu = sieve_mu(400, &spf).unwrap();
        for k in [2u32, 3] {
            let dkm1 = sieve_dk(400, k - 1, &spf).unwrap();
            let direct =
                main_term_resummed(x, 2, k, Variant::Plus, None, &dkm1, &mu, &c).unwrap();
            let mut resummed = 0.0;
            for b in 1..=400u64 {
                let xb = (b * (400 / b)) as f64;
                resummed +=
                    dkm1.get(b) as f64 * phi0(b, 2, &Window::sharp(0.0, xb), &c).unwrap();
            }
            assert!(
                (direct - resummed).abs() <= 1e-6 * resummed.abs(),
                "k = {k}: {direct} vs {resummed}"
            );
        }
    }

    #[test]
    fn main_term_rejects_bad_input() {
        let spf = SpfTable::build(64).unwrap();
        let d1 = sieve_dk(64, 1, &spf).unwrap();
        let mu = sieve_mu(64, &spf).unwrap();
        assert!(main_term_resummed(10.0, 0, 2, Variant::Plus, None, &d1, &mu, &ctx()).is_err());
        assert!(main_term_resummed(1e6, 1, 2, Variant::Plus, None, &d1, &mu, &ctx()).is_err());
        let d2t = sieve_dk(64, 2, &spf).unwrap();
        assert!(main_term(10.0, 0, 2, Variant::Plus, None, &d2t, &mu, &ctx()).is_err());
        assert!(main_term(1e6, 1, 2, Variant::Plus, None, &d2t, &mu, &ctx()).is_err());
    }
}

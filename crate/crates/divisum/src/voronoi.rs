//! Verifier for the dual expansion of a smoothly weighted divisor sum over
//! an arithmetic progression: the exact sum
//!
//! `Phi(b) = sum over m == h (mod b) of d(m) g(m)`
//!
//! is reproduced as a main term (the Ramanujan divisor sum against the
//! logarithmic density) minus a Y0-kernel dual sum plus a K0-kernel dual
//! sum, each dual term weighted by Kloosterman sums:
//!
//! `Phi(b) = main
//!   - (2 pi / b) sum over d | b, m >= 1 of d(m) S(h, m; d)/d  IY(d, m)
//!   + (4 / b)    sum over d | b, m >= 1 of d(m) S(h, -m; d)/d IK(d, m)`
//!
//! with `IY = int Y0(4 pi sqrt(m xi)/d) g(xi) dxi` and `IK` its K0
//! companion. The dual sums are truncated at a per-divisor cutoff scaling
//! like d^2 (the oscillation of the kernels against the smooth window kills
//! the tail superalgebraically once m exceeds ~ d^2 / (x Omega^2), the
//! shape of the classical cutoffs); the configured cutoff applies at d = b.

use crate::arith::{factorize, kloosterman};
use crate::error::{Error, Result};
use crate::mainterm::{phi0, AnalyticContext};
use crate::quad::integrate_oscillatory;
use crate::sieve::DivisorTable;
use crate::weight::Window;

#[derive(Debug, Clone, Copy)]
pub struct VoronoiCheckConfig {
    pub b: u64,
    pub h: i64,
    /// Window scale; the smooth window must sit inside [x/2, x].
    pub x: f64,
    /// Dual-sum cutoff at d = b; divisor d gets ceil(m_cut (d/b)^2),
    /// floored at 16.
    pub m_cut: u64,
    /// Relative tolerance target used for the cutoff warning.
    pub tol: f64,
}

impl VoronoiCheckConfig {
    pub fn new(b: u64, h: i64, x: f64, m_cut: u64) -> Result<Self> {
        if b == 0 {
            return Err(Error::ZeroModulus);
        }
        if m_cut == 0 {
            return Err(Error::InvalidParameter("m_cut must be >= 1".into()));
        }
        if x < 4.0 * h.unsigned_abs() as f64 {
            return Err(Error::InvalidParameter(format!(
                "window scale x = {x} must be at least 4 |h|"
            )));
        }
        Ok(VoronoiCheckConfig {
            b,
            h,
            x,
            m_cut,
            tol: 1e-3,
        })
    }

    /// Default cutoff: a scaled analogue of the classical dual-range shape
    /// x^(1+eps) / (c A)^2 with eps-slack 0.1 and an empirical constant of
    /// 4, validated by the doubling test rather than trusted.
    pub fn default_m_cut(x: f64, b: u64, omega: f64) -> u64 {
        let shaped = 4.0 * x.powf(0.1) * (b * b) as f64 / (x * omega * omega);
        (shaped.ceil() as u64).max(64)
    }
}

/// One evaluated expansion, with the pieces reported separately.
#[derive(Debug, Clone, Copy)]
pub struct VoronoiExpansion {
    pub main: f64,
    pub y_dual: f64,
    pub k_dual: f64,
    /// main - y_dual + k_dual
    pub total: f64,
    /// Set when the last dyadic block of some divisor's dual sum still
    /// contributed more than the configured tolerance (cutoff too small).
    pub cutoff_warning: bool,
}

/// Evaluates the dual expansion of `Phi(b)` for a smooth window `g` in the
/// progression variable. `d_small` must cover the dual summation range
/// (`m <= m_cut`).
pub fn voronoi_dual(
    cfg: &VoronoiCheckConfig,
    window: &Window,
    d_small: &DivisorTable,
    ctx: &AnalyticContext,
) -> Result<VoronoiExpansion> {
    if !window.is_smooth() {
        return Err(Error::InvalidParameter(
            "the dual expansion requires a smooth window (sharp cutoffs excluded by contract)"
                .into(),
        ));
    }
    let (lo, hi) = window.support();
    if hi <= lo || lo <= 0.0 {
        return Err(Error::InvalidParameter(
            "window support must be a positive interval".into(),
        ));
    }

    // main term: phi0 integrates window(xi) lambda(xi + h); translating by h
    // turns it into the progression-variable integral of g(u) lambda(u)
    let main = phi0(
        cfg.b,
        cfg.h,
        &Window::translated(window.clone(), cfg.h as f64),
        ctx,
    )?;

    let su = lo.sqrt();
    let eu = hi.sqrt();
    // panel cap resolving both the kernel oscillation and the window scale
    let max_panel = (eu - su) / 12.0;

    let mut y_dual = 0.0f64;
    let mut k_dual = 0.0f64;
    let mut warning = false;
    let scale = main.abs().max(1.0);

    for d in factorize(cfg.b, None)?.divisors() {
        let m_top = ((cfg.m_cut as f64 * (d * d) as f64 / (cfg.b * cfg.b) as f64).ceil()
            as u64)
            .max(16)
            .min(cfg.m_cut);
        if m_top > d_small.limit() {
            return Err(Error::TableLimit {
                what: "dual cutoff",
                value: m_top,
                limit: d_small.limit(),
            });
        }
        // Kloosterman sums depend on m only through m mod d
        let mut s_plus = Vec::with_capacity(d as usize);
        let mut s_minus = Vec::with_capacity(d as usize);
        for j in 0..d {
            s_plus.push(kloosterman(cfg.h, j as i64, d)?);
            s_minus.push(kloosterman(cfg.h, -(j as i64), d)?);
        }
        let mut block_y = 0.0f64;
        let mut block_k = 0.0f64;
        for m in 1..=m_top {
            let dm = d_small.get(m) as f64;
            let kappa = 4.0 * std::f64::consts::PI * (m as f64).sqrt() / d as f64;
            // int B(4 pi sqrt(m xi)/d) g(xi) dxi = 2 int B(kappa u) g(u^2) u du
            let iy = 2.0
                * integrate_oscillatory(
                    &mut |u: f64| {
                        crate::bessel::y0(kappa * u).unwrap_or(0.0) * window.eval(u * u) * u
                    },
                    su,
                    eu,
                    kappa,
                    max_panel,
                );
            let ik = if kappa * su > 500.0 {
                0.0
            } else {
                2.0 * integrate_oscillatory(
                    &mut |u: f64| {
                        crate::bessel::k0(kappa * u).unwrap_or(0.0) * window.eval(u * u) * u
                    },
                    su,
                    eu,
                    0.0,
                    max_panel,
                )
            };
            let ty = dm * s_plus[(m % d) as usize] / d as f64 * iy;
            let tk = dm * s_minus[(m % d) as usize] / d as f64 * ik;
            y_dual += ty;
            k_dual += tk;
            if m > m_top / 2 {
                block_y += ty.abs();
                block_k += tk.abs();
            }
        }
        let block = (2.0 * std::f64::consts::PI * block_y + 4.0 * block_k) / cfg.b as f64;
        if block > cfg.tol * scale {
            warning = true;
        }
    }

    let y_dual = 2.0 * std::f64::consts::PI / cfg.b as f64 * y_dual;
    let k_dual = 4.0 / cfg.b as f64 * k_dual;
    Ok(VoronoiExpansion {
        main,
        y_dual,
        k_dual,
        total: main - y_dual + k_dual,
        cutoff_warning: warning,
    })
}

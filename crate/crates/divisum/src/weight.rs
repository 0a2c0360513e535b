//! Smooth and sharp cutoff weights, and the window objects built from them.
//!
//! The bump weight is a fixed C-infinity mollifier supported in [1/2, 1],
//! reparameterized so that the transition zones at both ends have width
//! omega/4: derivatives grow like omega^(-nu) as the weight sharpens, while
//! the plateau value stays exactly 1. The sharp weight is the indicator of
//! [0, 1].

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightKind {
    /// Indicator of [0, 1].
    Sharp,
    /// Smooth bump supported in [1/2, 1], vanishing at both endpoints.
    Bump,
}

/// A cutoff weight `w` with sharpness parameter omega.
///
/// Derivative magnitudes of the bump kind obey `|w^(nu)| <= K_nu / omega^nu`
/// for nu <= 4, with the documented constants [`DERIVATIVE_BOUNDS`].
#[derive(Debug, Clone, Copy)]
pub struct WeightSpec {
    pub kind: WeightKind,
    pub omega: f64,
    pub normalization: f64,
}

/// Constants K_nu in the derivative contract `|w^(nu)| <= K_nu / omega^nu`,
/// indexed by nu = 0..=4. Measured numerically for the concrete bump below
/// and frozen with headroom.
pub const DERIVATIVE_BOUNDS: [f64; 5] = [1.0, 9.0, 300.0, 20_000.0, 2_000_000.0];

/// exp(-1/u) extended by zero to u <= 0.
fn mollifier(u: f64) -> f64 {
    if u <= 0.0 {
        0.0
    } else {
        (-1.0 / u).exp()
    }
}

/// Smooth step: 0 for u <= 0, 1 for u >= 1.
fn smooth_step(u: f64) -> f64 {
    let a = mollifier(u);
    if a == 0.0 {
        return 0.0;
    }
    let b = mollifier(1.0 - u);
    a / (a + b)
}

impl WeightSpec {
    pub fn sharp() -> Self {
        WeightSpec {
            kind: WeightKind::Sharp,
            omega: 1.0,
            normalization: 1.0,
        }
    }

    pub fn bump(omega: f64) -> Result<Self> {
        if !(omega > 0.0 && omega <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "bump sharpness must lie in (0, 1], got {omega}"
            )));
        }
        Ok(WeightSpec {
            kind: WeightKind::Bump,
            omega,
            normalization: 1.0,
        })
    }

    /// Width of each transition zone of the bump.
    fn zone(&self) -> f64 {
        self.omega / 4.0
    }

    /// Support of `w` as an interval of the unscaled argument.
    pub fn support(&self) -> (f64, f64) {
        match self.kind {
            WeightKind::Sharp => (0.0, 1.0),
            WeightKind::Bump => (0.5, 1.0),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.normalization
            * match self.kind {
                WeightKind::Sharp => {
                    if (0.0..=1.0).contains(&t) {
                        1.0
                    } else {
                        0.0
                    }
                }
                WeightKind::Bump => {
                    if t <= 0.5 || t >= 1.0 {
                        0.0
                    } else {
                        let z = self.zone();
                        smooth_step((t - 0.5) / z) * smooth_step((1.0 - t) / z)
                    }
                }
            }
    }

    /// nu-th derivative of `w` at `t`, nu <= 4, by central differences.
    ///
    /// The sharp kind returns 0 away from its jump points (the derivative is
    /// not defined there; callers relying on derivative bounds must use the
    /// bump kind).
    pub fn deriv(&self, t: f64, nu: u32) -> Result<f64> {
        if nu == 0 {
            return Ok(self.eval(t));
        }
        if nu > 4 {
            return Err(Error::InvalidParameter(
                "weight derivatives supported up to order 4".into(),
            ));
        }
        if self.kind == WeightKind::Sharp {
            return Ok(0.0);
        }
        let h = self.zone() / 40.0;
        let f = |u: f64| self.eval(u);
        let v = match nu {
            1 => (f(t + h) - f(t - h)) / (2.0 * h),
            2 => (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h),
            3 => {
                (f(t + 2.0 * h) - 2.0 * f(t + h) + 2.0 * f(t - h) - f(t - 2.0 * h))
                    / (2.0 * h * h * h)
            }
            _ => {
                (f(t + 2.0 * h) - 4.0 * f(t + h) + 6.0 * f(t) - 4.0 * f(t - h)
                    + f(t - 2.0 * h))
                    / (h * h * h * h)
            }
        };
        Ok(v)
    }
}

/// A weight evaluated on an absolute axis: sharp cutoffs with explicit
/// bounds, scaled weights `t -> w(t / scale)`, translations and pointwise
/// products. Summation and quadrature routines query the support to bound
/// their work.
#[derive(Debug, Clone)]
pub enum Window {
    /// Indicator of [lo, hi].
    Sharp { lo: f64, hi: f64 },
    /// `t -> w(t / scale)`.
    Scaled { weight: WeightSpec, scale: f64 },
    /// Pointwise product.
    Product(Box<Window>, Box<Window>),
    /// `t -> inner(t + shift)`.
    Translated { inner: Box<Window>, shift: f64 },
}

impl Window {
    pub fn sharp(lo: f64, hi: f64) -> Self {
        Window::Sharp { lo, hi }
    }

    pub fn scaled(weight: WeightSpec, scale: f64) -> Self {
        Window::Scaled { weight, scale }
    }

    pub fn product(a: Window, b: Window) -> Self {
        Window::Product(Box::new(a), Box::new(b))
    }

    pub fn translated(inner: Window, shift: f64) -> Self {
        Window::Translated {
            inner: Box::new(inner),
            shift,
        }
    }

    /// Support [lo, hi]; empty supports have lo > hi.
    pub fn support(&self) -> (f64, f64) {
        match self {
            Window::Sharp { lo, hi } => (*lo, *hi),
            Window::Scaled { weight, scale } => {
                let (a, b) = weight.support();
                (a * scale, b * scale)
            }
            Window::Product(a, b) => {
                let (a0, a1) = a.support();
                let (b0, b1) = b.support();
                (a0.max(b0), a1.min(b1))
            }
            Window::Translated { inner, shift } => {
                let (a, b) = inner.support();
                (a - shift, b - shift)
            }
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Window::Sharp { lo, hi } => {
                if t >= *lo && t <= *hi {
                    1.0
                } else {
                    0.0
                }
            }
            Window::Scaled { weight, scale } => weight.eval(t / scale),
            Window::Product(a, b) => {
                let va = a.eval(t);
                if va == 0.0 {
                    0.0
                } else {
                    va * b.eval(t)
                }
            }
            Window::Translated { inner, shift } => inner.eval(t + shift),
        }
    }

    /// True when no sharp piece is involved.
    pub fn is_smooth(&self) -> bool {
        match self {
            Window::Sharp { .. } => false,
            Window::Scaled { weight, .. } => weight.kind == WeightKind::Bump,
            Window::Product(a, b) => a.is_smooth() && b.is_smooth(),
            Window::Translated { inner, .. } => inner.is_smooth(),
        }
    }

    /// Integer range covered by the support, clamped below by 1.
    pub fn integer_range(&self) -> Option<(u64, u64)> {
        let (lo, hi) = self.support();
        if hi < 1.0 || hi < lo {
            return None;
        }
        let lo = lo.max(1.0).ceil() as u64;
        let hi = hi.floor() as u64;
        if lo > hi {
            None
        } else {
            Some((lo, hi))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_boundary_and_plateau() {
        let w = WeightSpec::bump(1.0).unwrap();
        assert_eq!(w.eval(0.5), 0.0);
        assert_eq!(w.eval(1.0), 0.0);
        assert_eq!(w.eval(0.75), 1.0);
        assert_eq!(w.eval(0.2), 0.0);
        assert_eq!(w.eval(1.2), 0.0);
        // plateau widens as omega shrinks
        let sharp = WeightSpec::bump(0.25).unwrap();
        assert_eq!(sharp.eval(0.6), 1.0);
        assert_eq!(sharp.eval(0.9), 1.0);
        for t in [0.55, 0.6, 0.75, 0.9, 0.95] {
            let v = w.eval(t);
            assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn bump_rejects_bad_omega() {
        assert!(WeightSpec::bump(0.0).is_err());
        assert!(WeightSpec::bump(1.5).is_err());
    }

    #[test]
    fn derivative_scales_like_inverse_omega() {
        // max |w'| over the transition zone, at omega = 1 and omega = 1/8
        let max_d1 = |omega: f64| {
            let w = WeightSpec::bump(omega).unwrap();
            let mut m: f64 = 0.0;
            for i in 0..2000 {
                let t = 0.5 + 0.5 * (i as f64 + 0.5) / 2000.0;
                m = m.max(w.deriv(t, 1).unwrap().abs());
            }
            m
        };
        let r = max_d1(1.0 / 8.0) / max_d1(1.0);
        assert!(r > 2.0 && r < 32.0, "scaling ratio {r} not within factor 4 of 8");
    }

    #[test]
    fn derivative_contract_at_sampled_points() {
        for &omega in &[1.0, 0.5, 0.25, 0.125] {
            let w = WeightSpec::bump(omega).unwrap();
            for nu in 0..=4u32 {
                let bound = DERIVATIVE_BOUNDS[nu as usize] / omega.powi(nu as i32);
                for i in 0..400 {
                    let t = 0.5 + 0.5 * (i as f64 + 0.5) / 400.0;
                    let d = w.deriv(t, nu).unwrap().abs();
                    assert!(
                        d <= bound,
                        "nu = {nu}, omega = {omega}, t = {t}: |w^nu| = {d:.3e} > {bound:.3e}"
                    );
                }
            }
        }
    }

    #[test]
    fn sharp_weight_is_indicator() {
        let w = WeightSpec::sharp();
        assert_eq!(w.eval(0.0), 1.0);
        assert_eq!(w.eval(1.0), 1.0);
        assert_eq!(w.eval(0.5), 1.0);
        assert_eq!(w.eval(-0.01), 0.0);
        assert_eq!(w.eval(1.01), 0.0);
    }

    #[test]
    fn window_support_and_eval() {
        let x = 100.0;
        let w = Window::scaled(WeightSpec::bump(1.0).unwrap(), x);
        assert_eq!(w.support(), (50.0, 100.0));
        assert_eq!(w.eval(75.0), 1.0);
        assert_eq!(w.eval(40.0), 0.0);

        let prod = Window::product(
            Window::scaled(WeightSpec::sharp(), 80.0),
            Window::sharp(10.0, 200.0),
        );
        assert_eq!(prod.support(), (10.0, 80.0));
        assert_eq!(prod.eval(50.0), 1.0);
        assert_eq!(prod.eval(90.0), 0.0);

        let tr = Window::translated(Window::sharp(5.0, 10.0), 2.0);
        assert_eq!(tr.support(), (3.0, 8.0));
        assert_eq!(tr.eval(3.0), 1.0);
        assert_eq!(tr.eval(9.0), 0.0);

        assert_eq!(tr.integer_range(), Some((3, 8)));
        assert!(Window::sharp(5.0, 4.0).integer_range().is_none());
    }
}

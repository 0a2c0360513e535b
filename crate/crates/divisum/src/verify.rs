//! Named verification suites: each runs a family of internal identities at
//! fixed desk-scale parameters and reports machine-readable pass/fail
//! results with the measured quantities.

use crate::arith::{
    dk_of_factored, factorize, gcd, gcd_i64, kloosterman, ramanujan_oracle, ramanujan_sum,
};
use crate::correlate::{progression_sum, progression_sum_exact, shifted_sum, CorrelationRequest};
use crate::error::{Error, Result};
use crate::mainterm::{AnalyticContext, SeriesTruncation, Variant};
use crate::singular::{c3, gamma_euler, singular_series_truncated};
use crate::sieve::{sieve_dk, SpfTable};
use crate::voronoi::{voronoi_dual, VoronoiCheckConfig};
use crate::weight::{WeightSpec, Window};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Ramanujan,
    Kloosterman,
    Voronoi,
    Singular,
    Gamma3,
    Decomposition,
    All,
}

impl std::str::FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ramanujan" => Ok(Suite::Ramanujan),
            "kloosterman" => Ok(Suite::Kloosterman),
            "voronoi" => Ok(Suite::Voronoi),
            "singular" => Ok(Suite::Singular),
            "gamma3" => Ok(Suite::Gamma3),
            "decomposition" => Ok(Suite::Decomposition),
            "all" => Ok(Suite::All),
            other => Err(Error::InvalidParameter(format!(
                "unknown suite '{other}' (expected ramanujan, kloosterman, voronoi, singular, gamma3, decomposition or all)"
            ))),
        }
    }
}

/// One named invariant with its measured worst case.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub suite: &'static str,
    pub name: String,
    pub pass: bool,
    /// Worst measured deviation (0 for exact identities that held).
    pub measured: f64,
    /// Threshold the measurement is compared against.
    pub threshold: f64,
    pub detail: String,
}

impl CheckResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] {} {}: measured {:.3e} vs threshold {:.3e}{}",
            if self.pass { "PASS" } else { "FAIL" },
            self.suite,
            self.name,
            self.measured,
            self.threshold,
            if self.detail.is_empty() {
                String::new()
            } else {
                format!(" ({})", self.detail)
            }
        )
    }
}

pub fn run_verify(suite: Suite) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    match suite {
        Suite::Ramanujan => verify_ramanujan(&mut out)?,
        Suite::Kloosterman => verify_kloosterman(&mut out)?,
        Suite::Voronoi => verify_voronoi(&mut out)?,
        Suite::Singular => verify_singular(&mut out)?,
        Suite::Gamma3 => verify_gamma3(&mut out)?,
        Suite::Decomposition => verify_decomposition(&mut out)?,
        Suite::All => {
            verify_ramanujan(&mut out)?;
            verify_kloosterman(&mut out)?;
            verify_singular(&mut out)?;
            verify_gamma3(&mut out)?;
            verify_decomposition(&mut out)?;
            verify_voronoi(&mut out)?;
        }
    }
    Ok(out)
}

fn verify_ramanujan(out: &mut Vec<CheckResult>) -> Result<()> {
    // closed form vs exponential-sum oracle, exact, d <= 300, |h| <= 300
    let mut mismatches = 0u64;
    for d in 1..=300u64 {
        for h in -300..=300i64 {
            if ramanujan_sum(d, h)? != ramanujan_oracle(d, h)? {
                mismatches += 1;
            }
        }
    }
    out.push(CheckResult {
        suite: "ramanujan",
        name: "closed form = exponential oracle (d <= 300, |h| <= 300)".into(),
        pass: mismatches == 0,
        measured: mismatches as f64,
        threshold: 0.0,
        detail: "exact integer equality".into(),
    });

    // multiplicativity over coprime moduli
    let mut bad = 0u64;
    for d1 in 1..=300u64 {
        for d2 in d1..=300u64 {
            if gcd(d1, d2) != 1 {
                continue;
            }
            for h in [-100i64, -37, -6, -1, 1, 2, 12, 45, 100] {
                if ramanujan_sum(d1 * d2, h)? != ramanujan_sum(d1, h)? * ramanujan_sum(d2, h)? {
                    bad += 1;
                }
            }
        }
    }
    out.push(CheckResult {
        suite: "ramanujan",
        name: "multiplicativity over coprime moduli (d1, d2 <= 300)".into(),
        pass: bad == 0,
        measured: bad as f64,
        threshold: 0.0,
        detail: "|h| <= 100 sampled".into(),
    });
    Ok(())
}

fn verify_kloosterman(out: &mut Vec<CheckResult>) -> Result<()> {
    let mut worst_sym = 0.0f64;
    let mut weil_violations = 0u64;
    for c in 1..=500u64 {
        let dc = dk_of_factored(2, &factorize(c, None)?)? as f64;
        let sqrt_c = (c as f64).sqrt();
        let mut values = vec![vec![0.0f64; 21]; 21];
        for a in 1..=20i64 {
            for b in 1..=20i64 {
                values[a as usize][b as usize] = kloosterman(a, b, c)?;
            }
        }
        for a in 1..=20usize {
            for b in a..=20usize {
                let s = values[a][b];
                worst_sym = worst_sym.max((s - values[b][a]).abs());
                let g = gcd(gcd_i64(a as i64, b as i64), c) as f64;
                if s.abs() > dc * sqrt_c * g.sqrt() + 1e-6 {
                    weil_violations += 1;
                }
            }
        }
    }
    out.push(CheckResult {
        suite: "kloosterman",
        name: "symmetry S(a,b;c) = S(b,a;c) (a,b <= 20, c <= 500)".into(),
        pass: worst_sym < 1e-6,
        measured: worst_sym,
        threshold: 1e-6,
        detail: String::new(),
    });
    out.push(CheckResult {
        suite: "kloosterman",
        name: "Weil bound |S| <= d(c) sqrt(c (a,b,c))".into(),
        pass: weil_violations == 0,
        measured: weil_violations as f64,
        threshold: 0.0,
        detail: "violations counted with 1e-6 slack".into(),
    });

    let mut worst_deg = 0.0f64;
    for c in 1..=500u64 {
        for b in 1..=20i64 {
            let s = kloosterman(0, b, c)?;
            let r = ramanujan_sum(c, b)? as f64;
            worst_deg = worst_deg.max((s - r).abs());
        }
    }
    out.push(CheckResult {
        suite: "kloosterman",
        name: "degenerate S(0,b;c) = c_c(b)".into(),
        pass: worst_deg < 1e-6,
        measured: worst_deg,
        threshold: 1e-6,
        detail: String::new(),
    });
    Ok(())
}

fn verify_singular(out: &mut Vec<CheckResult>) -> Result<()> {
    // factorization through the multiplicative Euler factor, h <= 50,
    // both delta pairs, d_max = 2000
    let spf = SpfTable::build(4096)?;
    let trunc = SeriesTruncation::with_d_max(2000);
    let mut worst = 0.0f64;
    let mut detail = String::new();
    for &(d1, d2) in &[(0.0, 0.0), (0.1, 0.07)] {
        let base = singular_series_truncated(1, d1, d2, &trunc, &spf)?.value;
        for h in 2..=50u64 {
            let ratio = singular_series_truncated(h as i64, d1, d2, &trunc, &spf)?.value / base;
            let g = gamma_euler(h, d1, d2)?;
            let err = (ratio - g).abs();
            if err > worst {
                worst = err;
                detail = format!("worst at h = {h}, deltas = ({d1}, {d2})");
            }
        }
    }
    out.push(CheckResult {
        suite: "singular",
        name: "C(h)/C(1) = gamma(h) at d_max = 2000 (h <= 50, both delta pairs)".into(),
        pass: worst <= 1e-4,
        measured: worst,
        threshold: 1e-4,
        detail,
    });
    Ok(())
}

fn verify_gamma3(out: &mut Vec<CheckResult>) -> Result<()> {
    // the two singular-series routes agree on prime powers
    let spf = SpfTable::build(16_384)?;
    let trunc = SeriesTruncation::with_d_max(10_000);
    let mut worst = 0.0f64;
    let mut detail = String::new();
    for &(d1, d2) in &[(0.0, 0.0), (0.1, 0.07)] {
        let base = c3(1, d1, d2, &trunc, &spf)?;
        for p in [2u64, 3, 5, 7] {
            for k in 1..=4u32 {
                let h = p.pow(k);
                let ratio = c3(h, d1, d2, &trunc, &spf)? / base;
                let g = gamma_euler(h, d1, d2)?;
                let err = (ratio - g).abs();
                if err > worst {
                    worst = err;
                    detail = format!("worst at p^k = {h}, deltas = ({d1}, {d2})");
                }
            }
        }
    }
    out.push(CheckResult {
        suite: "gamma3",
        name: "c3(p^k)/c3(1) = gamma(p^k) (p in 2,3,5,7; k <= 4; both delta pairs)".into(),
        pass: worst <= 1e-6,
        measured: worst,
        threshold: 1e-6,
        detail,
    });
    Ok(())
}

fn verify_decomposition(out: &mut Vec<CheckResult>) -> Result<()> {
    // opening d_k against progression sums is an exact integer identity
    let x = 10_000u64;
    let spf = SpfTable::build(x + 3)?;
    let d2 = sieve_dk(x + 3, 2, &spf)?;
    let mut bad = 0u64;
    for k in [3u32, 4] {
        let dk = sieve_dk(x + 3, k, &spf)?;
        let dkm1 = sieve_dk(x + 3, k - 1, &spf)?;
        for h in [1i64, 2] {
            let req = CorrelationRequest {
                x: x as f64,
                h,
                k,
                variant: Variant::Plus,
                weight: None,
            };
            let lhs = shifted_sum(&req, &dk, &d2)?.0;
            let mut rhs = 0u64;
            for b in 1..=x {
                rhs +=
                    dkm1.get(b) * progression_sum_exact(b, h, h as u64 + 1, x + h as u64, &d2)?;
            }
            if lhs != rhs {
                bad += 1;
            }
        }
    }
    out.push(CheckResult {
        suite: "decomposition",
        name: "shifted sum = sum d_{k-1}(b) x progression sums (x = 1e4, k in 3,4; h in 1,2)"
            .into(),
        pass: bad == 0,
        measured: bad as f64,
        threshold: 0.0,
        detail: "exact integer equality".into(),
    });
    Ok(())
}

fn verify_voronoi(out: &mut Vec<CheckResult>) -> Result<()> {
    let ctx = AnalyticContext::default();
    let x = 10_000.0;
    let spf = SpfTable::build(16_384)?;
    let d2 = sieve_dk(16_384, 2, &spf)?;
    let g = Window::scaled(WeightSpec::bump(1.0)?, x);
    let mut worst = 0.0f64;
    let mut detail = String::new();
    let mut warnings = 0u64;
    for b in 1..=50u64 {
        for h in 1..=10i64 {
            let m_cut = VoronoiCheckConfig::default_m_cut(x, b, 1.0);
            let cfg = VoronoiCheckConfig::new(b, h, x, m_cut)?;
            let expansion = voronoi_dual(&cfg, &g, &d2, &ctx)?;
            if expansion.cutoff_warning {
                warnings += 1;
            }
            let exact = progression_sum(b, h, &g, &d2)?;
            let rel = (expansion.total - exact).abs() / exact.abs();
            if rel > worst {
                worst = rel;
                detail = format!("worst at b = {b}, h = {h}");
            }
        }
    }
    out.push(CheckResult {
        suite: "voronoi",
        name: "dual expansion matches progression sums (b <= 50, h <= 10, x = 1e4)".into(),
        pass: worst <= 1e-3 && warnings == 0,
        measured: worst,
        threshold: 1e-3,
        detail: format!("{detail}; cutoff warnings {warnings}"),
    });

    // doubling the cutoff does not worsen the residual
    let b = 36u64;
    let h = 5i64;
    let exact = progression_sum(b, h, &g, &d2)?;
    let base = VoronoiCheckConfig::default_m_cut(x, b, 1.0);
    let mut last = f64::INFINITY;
    let mut monotone = true;
    for m_cut in [base / 4, base / 2, base] {
        let cfg = VoronoiCheckConfig::new(b, h, x, m_cut.max(16))?;
        let expansion = voronoi_dual(&cfg, &g, &d2, &ctx)?;
        let res = (expansion.total - exact).abs();
        if res > last * 1.05 {
            monotone = false;
        }
        last = res;
    }
    out.push(CheckResult {
        suite: "voronoi",
        name: "residual decreases as the dual cutoff doubles".into(),
        pass: monotone,
        measured: last,
        threshold: f64::INFINITY,
        detail: format!("final residual at b = {b}, h = {h}"),
    });
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_parse() {
        for name in [
            "ramanujan",
            "kloosterman",
            "voronoi",
            "singular",
            "gamma3",
            "decomposition",
            "all",
        ] {
            assert!(name.parse::<Suite>().is_ok());
        }
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn decomposition_suite_passes() {
        let results = run_verify(Suite::Decomposition).unwrap();
        assert!(!results.is_empty());
        for r in &results {
            assert!(r.pass, "{}", r.line());
        }
    }
}

//! Scan driver: correlation experiments over a geometric x grid with
//! residual-slope fits, plus the table bundle the drivers share.

use std::collections::BTreeMap;
use std::time::Instant;

use crate::correlate::{shifted_sum, smooth_shifted_sum, CorrelationRequest};
use crate::error::{Error, Result};
use crate::mainterm::{main_term, mode_cutoff, AnalyticContext, Variant};
use crate::report::ReportRow;
use crate::sieve::{sieve_dk, sieve_mu, DivisorTable, MobiusTable, SpfTable};
use crate::weight::WeightSpec;

/// Divisor tables for a family of correlation experiments.
pub struct CorrelationTables {
    pub limit: u64,
    pub d2: DivisorTable,
    pub dk: BTreeMap<u32, DivisorTable>,
    pub mu: MobiusTable,
}

impl CorrelationTables {
    /// Builds the tables needed for orders `ks` up to cutoff `x_max` with
    /// shifts `hs`.
    pub fn build(x_max: f64, hs: &[i64], ks: &[u32]) -> Result<Self> {
        Self::assemble(x_max, hs, ks, Vec::new())
    }

    /// Like [`CorrelationTables::build`], reusing preloaded tables (from the
    /// binary cache) where their order and limit fit; anything missing is
    /// sieved on the spot.
    pub fn assemble(
        x_max: f64,
        hs: &[i64],
        ks: &[u32],
        preloaded: Vec<DivisorTable>,
    ) -> Result<Self> {
        let h_pad = hs.iter().map(|h| h.unsigned_abs()).max().unwrap_or(0);
        let limit = (x_max.floor() as u64 + h_pad + 1).max(64);
        let mut pool: BTreeMap<u32, DivisorTable> = BTreeMap::new();
        for t in preloaded {
            if t.limit() >= limit {
                pool.entry(t.k()).or_insert(t);
            }
        }
        let mut needed: Vec<u32> = ks.to_vec();
        needed.push(2);
        needed.sort_unstable();
        needed.dedup();
        let mut spf: Option<SpfTable> = None;
        for &k in &needed {
            if k < 2 {
                return Err(Error::InvalidParameter(
                    "correlation order k must be at least 2".into(),
                ));
            }
            if !pool.contains_key(&k) {
                if spf.is_none() {
                    spf = Some(SpfTable::build(limit)?);
                }
                pool.insert(k, sieve_dk(limit, k, spf.as_ref().unwrap())?);
            }
        }
        // the Moebius table only has to reach the mode cutoff, which stays
        // tiny; a small dedicated spf table covers it
        let mu_limit = mode_cutoff(x_max).max(64).min(limit);
        let mu = match &spf {
            Some(table) => sieve_mu(mu_limit, table)?,
            None => {
                let small = SpfTable::build(mu_limit)?;
                sieve_mu(mu_limit, &small)?
            }
        };
        let d2 = pool.remove(&2).expect("order 2 always built");
        Ok(CorrelationTables {
            limit,
            d2,
            dk: pool,
            mu,
        })
    }

    pub fn order(&self, k: u32) -> Result<&DivisorTable> {
        if k == 2 {
            return Ok(&self.d2);
        }
        self.dk
            .get(&k)
            .ok_or_else(|| Error::InvalidParameter(format!("no d_{k} table built")))
    }
}

#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub x_from: f64,
    pub x_to: f64,
    pub x_steps: u32,
    pub hs: Vec<i64>,
    pub ks: Vec<u32>,
    pub variant: Variant,
    pub weight: Option<WeightSpec>,
    pub fit: bool,
}

impl ScanConfig {
    /// Geometric grid with `x_steps` points from `x_from` to `x_to`
    /// inclusive, strictly increasing.
    pub fn grid(&self) -> Result<Vec<f64>> {
        if self.x_steps == 0 {
            return Err(Error::InvalidParameter("x_steps must be >= 1".into()));
        }
        if self.x_from < 1.0 || self.x_to < self.x_from {
            return Err(Error::InvalidParameter(
                "scan grid requires 1 <= x_from <= x_to".into(),
            ));
        }
        if self.x_steps == 1 {
            return Ok(vec![self.x_from]);
        }
        let ratio = (self.x_to / self.x_from).powf(1.0 / (self.x_steps - 1) as f64);
        if ratio <= 1.0 {
            return Err(Error::InvalidParameter(
                "scan grid must be strictly increasing".into(),
            ));
        }
        Ok((0..self.x_steps)
            .map(|i| self.x_from * ratio.powi(i as i32))
            .collect())
    }

    pub fn validate(&self) -> Result<()> {
        self.grid()?;
        for &k in &self.ks {
            if k < 2 {
                return Err(Error::InvalidParameter(
                    "k = 1 degenerates to a plain divisor sum and is rejected".into(),
                ));
            }
        }
        for &h in &self.hs {
            if h == 0 {
                return Err(Error::InvalidParameter("shift h must be nonzero".into()));
            }
        }
        Ok(())
    }
}

/// Least-squares fit of log |R| against log x for one (h, k) series.
#[derive(Debug, Clone, Serialize)]
pub struct FitResult {
    pub h: i64,
    pub k: u32,
    pub slope: f64,
    pub intercept: f64,
    pub points: usize,
    pub fit_residual: f64,
}

use serde::Serialize;

pub fn fit_loglog(points: &[(f64, f64)]) -> Option<(f64, f64, f64)> {
    // slopes are only meaningful with at least 4 points
    if points.len() < 4 {
        return None;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rms = (points
        .iter()
        .map(|p| {
            let e = p.1 - (slope * p.0 + intercept);
            e * e
        })
        .sum::<f64>()
        / n)
        .sqrt();
    Some((slope, intercept, rms))
}

/// Runs the scan: one row per (x, h, k) grid point in input order, one fit
/// per (h, k) series when requested. Per-point capacity errors are recorded
/// in the row's flags; they do not abort the scan.
pub fn run_scan(
    cfg: &ScanConfig,
    tables: &CorrelationTables,
    ctx: &AnalyticContext,
) -> Result<(Vec<ReportRow>, Vec<FitResult>)> {
    cfg.validate()?;
    let grid = cfg.grid()?;
    let mut rows = Vec::with_capacity(grid.len() * cfg.hs.len() * cfg.ks.len());
    let mut series: BTreeMap<(i64, u32), Vec<(f64, f64)>> = BTreeMap::new();

    for &x in &grid {
        for &h in &cfg.hs {
            for &k in &cfg.ks {
                let t0 = Instant::now();
                let row = match scan_point(cfg, tables, ctx, x, h, k) {
                    Ok((exact, main, excluded)) => {
                        let residual = exact - main;
                        if cfg.fit && residual != 0.0 {
                            series
                                .entry((h, k))
                                .or_default()
                                .push((x.ln(), residual.abs().ln()));
                        }
                        ReportRow {
                            x,
                            h,
                            k,
                            variant: cfg.variant.as_str().into(),
                            omega: cfg.weight.map(|w| w.omega),
                            d: Some(exact),
                            m: Some(main),
                            r: Some(residual),
                            rel_err: (exact != 0.0)
                                .then(|| (residual / exact).abs()),
                            seconds: t0.elapsed().as_secs_f64(),
                            flags: if excluded > 0 {
                                format!("excluded={excluded}")
                            } else {
                                String::new()
                            },
                        }
                    }
                    Err(e) => ReportRow {
                        x,
                        h,
                        k,
                        variant: cfg.variant.as_str().into(),
                        omega: cfg.weight.map(|w| w.omega),
                        d: None,
                        m: None,
                        r: None,
                        rel_err: None,
                        seconds: t0.elapsed().as_secs_f64(),
                        flags: format!("err:{e}"),
                    },
                };
                rows.push(row);
            }
        }
    }

    let mut fits = Vec::new();
    if cfg.fit {
        for ((h, k), pts) in series {
            if let Some((slope, intercept, rms)) = fit_loglog(&pts) {
                fits.push(FitResult {
                    h,
                    k,
                    slope,
                    intercept,
                    points: pts.len(),
                    fit_residual: rms,
                });
            }
        }
    }
    Ok((rows, fits))
}

fn scan_point(
    cfg: &ScanConfig,
    tables: &CorrelationTables,
    ctx: &AnalyticContext,
    x: f64,
    h: i64,
    k: u32,
) -> Result<(f64, f64, u64)> {
    let dk = tables.order(k)?;
    let req = CorrelationRequest {
        x,
        h,
        k,
        variant: cfg.variant,
        weight: cfg.weight,
    };
    let (exact, excluded) = match cfg.weight {
        None => {
            let (v, e) = shifted_sum(&req, dk, &tables.d2)?;
            (v as f64, e)
        }
        Some(_) => smooth_shifted_sum(&req, dk, &tables.d2)?,
    };
    let main = main_term(x, h, k, cfg.variant, cfg.weight, dk, &tables.mu, ctx)?;
    Ok((exact, main, excluded))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_geometric_and_increasing() {
        let cfg = ScanConfig {
            x_from: 1e4,
            x_to: 1e6,
            x_steps: 5,
            hs: vec![1],
            ks: vec![2],
            variant: Variant::Plus,
            weight: None,
            fit: false,
        };
        let g = cfg.grid().unwrap();
        assert_eq!(g.len(), 5);
        assert!((g[0] - 1e4).abs() < 1e-6);
        assert!((g[4] - 1e6).abs() < 1e-4);
        let r0 = g[1] / g[0];
        for w in g.windows(2) {
            assert!(w[1] > w[0]);
            assert!((w[1] / w[0] - r0).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_k1_and_empty_h_gives_empty_output() {
        let tables = CorrelationTables::build(100.0, &[1], &[2]).unwrap();
        let ctx = AnalyticContext::default();
        let bad = ScanConfig {
            x_from: 10.0,
            x_to: 100.0,
            x_steps: 2,
            hs: vec![1],
            ks: vec![1],
            variant: Variant::Plus,
            weight: None,
            fit: false,
        };
        assert!(run_scan(&bad, &tables, &ctx).is_err());

        let empty = ScanConfig {
            hs: vec![],
            ks: vec![2],
            ..bad
        };
        let (rows, fits) = run_scan(&empty, &tables, &ctx).unwrap();
        assert!(rows.is_empty());
        assert!(fits.is_empty());
    }

    #[test]
    fn capacity_error_recorded_in_row() {
        // tables built for x = 100 cannot serve x = 10000; the scan keeps
        // going and flags the row
        let tables = CorrelationTables::build(100.0, &[1], &[2]).unwrap();
        let ctx = AnalyticContext::default();
        let cfg = ScanConfig {
            x_from: 50.0,
            x_to: 10_000.0,
            x_steps: 3,
            hs: vec![1],
            ks: vec![2],
            variant: Variant::Plus,
            weight: None,
            fit: false,
        };
        let (rows, _) = run_scan(&cfg, &tables, &ctx).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows[0].flags.is_empty());
        assert!(rows[2].flags.starts_with("err:"));
        assert!(rows[2].d.is_none());
    }

    #[test]
    fn fit_needs_four_points() {
        assert!(fit_loglog(&[(0.0, 0.0), (1.0, 1.0), (2.0, 2.0)]).is_none());
        let (s, b, r) =
            fit_loglog(&[(0.0, 1.0), (1.0, 3.0), (2.0, 5.0), (3.0, 7.0)]).unwrap();
        assert!((s - 2.0).abs() < 1e-12);
        assert!((b - 1.0).abs() < 1e-12);
        assert!(r < 1e-12);
    }

    #[test]
    fn small_scan_end_to_end() {
        let tables = CorrelationTables::build(4000.0, &[1, 2], &[2, 3]).unwrap();
        let ctx = AnalyticContext::default();
        let cfg = ScanConfig {
            x_from: 100.0,
            x_to: 4000.0,
            x_steps: 4,
            hs: vec![1, 2],
            ks: vec![2, 3],
            variant: Variant::Plus,
            weight: None,
            fit: true,
        };
        let (rows, fits) = run_scan(&cfg, &tables, &ctx).unwrap();
        assert_eq!(rows.len(), 4 * 2 * 2);
        // all rows computed, deterministic order: x-major, then h, then k
        assert!(rows.iter().all(|r| r.flags.is_empty()));
        assert_eq!(rows[0].k, 2);
        assert_eq!(rows[1].k, 3);
        assert_eq!(rows[2].h, 2);
        assert_eq!(fits.len(), 4);
        for f in &fits {
            assert_eq!(f.points, 4);
        }
    }
}

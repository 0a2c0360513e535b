//! Command-line front end: cache sieve tables, run correlation and
//! main-term experiments, pair correlations, grid scans with residual
//! fits, and the named verification suites.
//!
//! `DIVISUM_THREADS` caps the worker count (default: available
//! parallelism). All computed output is deterministic; only the `seconds`
//! column varies between runs.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};

use divisum::cache::{dump_divisor_table, load_divisor_table};
use divisum::correlate::{pair_correlation, shifted_sum, smooth_shifted_sum, CorrelationRequest};
use divisum::mainterm::{main_term, AnalyticContext, DeltaParams, SeriesTruncation, Variant};
use divisum::pair::pair_main_term;
use divisum::report::{ReportRow, CSV_HEADER};
use divisum::scan::{run_scan, CorrelationTables, ScanConfig};
use divisum::sieve::{sieve_dk_segmented, SpfTable, DEFAULT_SEGMENT_LEN};
use divisum::verify::{run_verify, Suite};
use divisum::weight::WeightSpec;

#[derive(Parser)]
#[command(
    name = "divisum",
    version,
    about = "Shifted divisor correlations: exact sums, predicted main terms, verification suites"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build (and optionally cache) a d_k divisor table.
    Sieve {
        #[arg(long)]
        limit: u64,
        #[arg(long, default_value_t = 2)]
        k: u32,
        /// Write the table to this file in the binary cache format.
        #[arg(long)]
        cache: Option<PathBuf>,
        /// Segment length (entries) for table construction.
        #[arg(long, default_value_t = DEFAULT_SEGMENT_LEN)]
        segment: usize,
    },
    /// One correlation experiment: exact sum, main term, residual.
    Correlate {
        #[arg(long)]
        x: f64,
        #[arg(long)]
        h: i64,
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long, default_value = "plus")]
        variant: Variant,
        /// Smooth bump weight with this sharpness (default: sharp cutoff).
        #[arg(long, conflicts_with = "sharp")]
        omega: Option<f64>,
        /// Sharp cutoff (the default).
        #[arg(long)]
        sharp: bool,
        /// Cached divisor tables to reuse (repeatable).
        #[arg(long)]
        cache: Vec<PathBuf>,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Evaluate only the predicted main term.
    Mainterm {
        #[arg(long)]
        x: f64,
        #[arg(long)]
        h: i64,
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long, default_value = "plus")]
        variant: Variant,
        #[arg(long)]
        cache: Vec<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Pair correlation: brute-force sum vs its singular-series main term.
    Pair {
        #[arg(long)]
        r1: u64,
        #[arg(long)]
        r2: u64,
        #[arg(long)]
        h: i64,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        cache: Vec<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Correlation scan over a geometric x grid with optional slope fits.
    Scan {
        #[arg(long)]
        x_from: f64,
        #[arg(long)]
        x_to: f64,
        #[arg(long)]
        x_steps: u32,
        /// Shift values (repeatable or comma-separated).
        #[arg(long = "h", value_delimiter = ',', required = true)]
        hs: Vec<i64>,
        /// Orders k (repeatable or comma-separated).
        #[arg(long = "k", value_delimiter = ',', required = true)]
        ks: Vec<u32>,
        #[arg(long, default_value = "plus")]
        variant: Variant,
        #[arg(long)]
        omega: Option<f64>,
        /// Fit log|R| against log x per (h, k) series.
        #[arg(long)]
        fit: bool,
        #[arg(long)]
        cache: Vec<PathBuf>,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run a named verification suite; nonzero exit on any failure.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        json: bool,
    },
}

fn configure_threads() {
    if let Ok(v) = std::env::var("DIVISUM_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n >= 1 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
        }
    }
}

fn load_caches(paths: &[PathBuf]) -> anyhow::Result<Vec<divisum::sieve::DivisorTable>> {
    paths
        .iter()
        .map(|p| load_divisor_table(p).with_context(|| format!("loading {}", p.display())))
        .collect()
}

fn emit(output: Option<&PathBuf>, content: &str) -> anyhow::Result<()> {
    match output {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            w.write_all(content.as_bytes())?;
            w.flush()?;
        }
        None => print!("{content}"),
    }
    Ok(())
}

fn weight_from(omega: Option<f64>) -> anyhow::Result<Option<WeightSpec>> {
    Ok(match omega {
        Some(w) => Some(WeightSpec::bump(w)?),
        None => None,
    })
}

fn main() -> anyhow::Result<()> {
    configure_threads();
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Sieve {
            limit,
            k,
            cache,
            segment,
        } => {
            let t0 = Instant::now();
            let spf = SpfTable::build_segmented(limit, segment)?;
            let table = sieve_dk_segmented(limit, k, &spf, segment)?;
            eprintln!(
                "sieved d_{k} up to {limit} in {:.2}s",
                t0.elapsed().as_secs_f64()
            );
            if let Some(path) = cache {
                dump_divisor_table(&table, &path)?;
                eprintln!("cached to {}", path.display());
            }
        }
        Cmd::Correlate {
            x,
            h,
            k,
            variant,
            omega,
            sharp: _,
            cache,
            json,
            output,
        } => {
            let weight = weight_from(omega)?;
            let tables = CorrelationTables::assemble(x, &[h], &[k], load_caches(&cache)?)?;
            let ctx = AnalyticContext::default();
            let t0 = Instant::now();
            let req = CorrelationRequest {
                x,
                h,
                k,
                variant,
                weight,
            };
            let dk = tables.order(k)?;
            let (exact, excluded) = match weight {
                None => {
                    let (v, e) = shifted_sum(&req, dk, &tables.d2)?;
                    (v as f64, e)
                }
                Some(_) => smooth_shifted_sum(&req, dk, &tables.d2)?,
            };
            let main = main_term(x, h, k, variant, weight, dk, &tables.mu, &ctx)?;
            let row = ReportRow {
                x,
                h,
                k,
                variant: variant.as_str().into(),
                omega: weight.map(|w| w.omega),
                d: Some(exact),
                m: Some(main),
                r: Some(exact - main),
                rel_err: (exact != 0.0).then(|| ((exact - main) / exact).abs()),
                seconds: t0.elapsed().as_secs_f64(),
                flags: if excluded > 0 {
                    format!("excluded={excluded}")
                } else {
                    String::new()
                },
            };
            let content = if json {
                format!("{}\n", row.to_json())
            } else {
                format!("{CSV_HEADER}\n{}\n", row.to_csv())
            };
            emit(output.as_ref(), &content)?;
        }
        Cmd::Mainterm {
            x,
            h,
            k,
            variant,
            cache,
            json,
        } => {
            let tables = CorrelationTables::assemble(x, &[h], &[k], load_caches(&cache)?)?;
            let ctx = AnalyticContext::default();
            let m = main_term(x, h, k, variant, None, tables.order(k)?, &tables.mu, &ctx)?;
            if json {
                println!(
                    "{}",
                    serde_json::json!({
                        "x": x, "h": h, "k": k,
                        "variant": variant.as_str(), "M": m
                    })
                );
            } else {
                println!("{m}");
            }
        }
        Cmd::Pair {
            r1,
            r2,
            h,
            x,
            cache,
            json,
        } => {
            let r_max = r1.max(r2);
            let tables =
                CorrelationTables::assemble(x + r_max as f64, &[h], &[2], load_caches(&cache)?)?;
            let ctx = AnalyticContext::default();
            let t0 = Instant::now();
            let sigma = pair_correlation(r1, r2, h, x, WeightSpec::sharp(), &tables.d2)?;
            let main = pair_main_term(
                r1,
                r2,
                h,
                x,
                WeightSpec::sharp(),
                &DeltaParams::at_zero(),
                &SeriesTruncation::default(),
                &ctx,
            )?;
            let residual = sigma - main;
            let rel = if sigma != 0.0 {
                (residual / sigma).abs()
            } else {
                0.0
            };
            let seconds = t0.elapsed().as_secs_f64();
            if json {
                println!(
                    "{}",
                    serde_json::json!({
                        "r1": r1, "r2": r2, "h": h, "x": x,
                        "sigma": sigma, "M": main, "R": residual,
                        "rel_err": rel, "seconds": seconds
                    })
                );
            } else {
                println!("r1,r2,h,x,sigma,M,R,rel_err,seconds");
                println!("{r1},{r2},{h},{x},{sigma},{main},{residual},{rel},{seconds:.3}");
            }
        }
        Cmd::Scan {
            x_from,
            x_to,
            x_steps,
            hs,
            ks,
            variant,
            omega,
            fit,
            cache,
            json,
            output,
        } => {
            let cfg = ScanConfig {
                x_from,
                x_to,
                x_steps,
                hs,
                ks,
                variant,
                weight: weight_from(omega)?,
                fit,
            };
            let tables =
                CorrelationTables::assemble(x_to, &cfg.hs, &cfg.ks, load_caches(&cache)?)?;
            let ctx = AnalyticContext::default();
            let (rows, fits) = run_scan(&cfg, &tables, &ctx)?;
            let mut content = String::new();
            if json {
                for row in &rows {
                    content.push_str(&row.to_json());
                    content.push('\n');
                }
                for f in &fits {
                    content.push_str(&serde_json::to_string(f)?);
                    content.push('\n');
                }
            } else {
                content.push_str(CSV_HEADER);
                content.push('\n');
                for row in &rows {
                    content.push_str(&row.to_csv());
                    content.push('\n');
                }
                for f in &fits {
                    content.push_str(&format!(
                        "# fit h={} k={} slope={} intercept={} points={} rms={}\n",
                        f.h, f.k, f.slope, f.intercept, f.points, f.fit_residual
                    ));
                }
            }
            emit(output.as_ref(), &content)?;
        }
        Cmd::Verify { suite, json } => {
            let suite: Suite = suite.parse()?;
            let results = run_verify(suite)?;
            let mut failed = 0;
            for r in &results {
                if json {
                    println!(
                        "{}",
                        serde_json::json!({
                            "suite": r.suite, "name": r.name, "pass": r.pass,
                            "measured": r.measured, "threshold": r.threshold,
                            "detail": r.detail
                        })
                    );
                } else {
                    println!("{}", r.line());
                }
                if !r.pass {
                    failed += 1;
                }
            }
            if failed > 0 {
                bail!("{failed} verification check(s) failed");
            }
        }
    }
    Ok(())
}

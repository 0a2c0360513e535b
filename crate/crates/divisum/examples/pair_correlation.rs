//! Pair correlations of shifted divisor values along two progressions,
//! compared with the singular-series main term (the double delta operator
//! applied to the gcd-structured constant).
//!
//! Run with: cargo run --release --example pair_correlation

use divisum::correlate::pair_correlation;
use divisum::mainterm::{AnalyticContext, DeltaParams, SeriesTruncation};
use divisum::pair::{pair_main_term, pair_singular_series};
use divisum::scan::CorrelationTables;
use divisum::weight::WeightSpec;

fn main() -> divisum::Result<()> {
    let x = 1_000_000.0;
    let tables = CorrelationTables::build(x + 8.0, &[1, 2], &[2])?;
    let ctx = AnalyticContext::default();
    let params = DeltaParams::at_zero();
    let trunc = SeriesTruncation::with_d_max(2000);

    println!("sharp weights, x = {x}:");
    println!("  (r1,r2)  h   Sigma (exact)      M (predicted)      rel. residual");
    for (r1, r2) in [(1u64, 2u64), (2, 3), (3, 5)] {
        for h in [1i64, 2] {
            let sigma = pair_correlation(r1, r2, h, x, WeightSpec::sharp(), &tables.d2)?;
            let m = pair_main_term(r1, r2, h, x, WeightSpec::sharp(), &params, &trunc, &ctx)?;
            println!(
                "  ({r1},{r2})    {h}   {sigma:>16.1}   {m:>16.1}   {:+.3e}",
                (sigma - m) / sigma
            );
        }
    }

    println!("\nthe singular constant at delta = 0 for (r1, r2, h) = (1, 2, 1):");
    let c = pair_singular_series(1, 2, 1, 0.0, 0.0, &trunc)?;
    println!("  C = {c:.10} (= 4/pi^2 = {:.10})", 4.0 / std::f64::consts::PI.powi(2));
    Ok(())
}

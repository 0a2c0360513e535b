//! Shifted correlation sums, sharp and smooth, with their predicted main
//! terms and residuals.
//!
//! Run with: cargo run --release --example correlate

use divisum::correlate::{shifted_sum, smooth_shifted_sum, CorrelationRequest};
use divisum::mainterm::{main_term, AnalyticContext, Variant};
use divisum::scan::CorrelationTables;
use divisum::weight::WeightSpec;

fn main() -> divisum::Result<()> {
    let x = 200_000.0;
    let tables = CorrelationTables::build(x, &[1, 2, 12], &[2, 3, 4])?;
    let ctx = AnalyticContext::default();

    println!("sharp cutoff, x = {x}:");
    println!("  k  h   D (exact)        M (predicted)     R/D");
    for k in [2u32, 3, 4] {
        for h in [1i64, 2, 12] {
            let req = CorrelationRequest {
                x,
                h,
                k,
                variant: Variant::Plus,
                weight: None,
            };
            let (d, _) = shifted_sum(&req, tables.order(k)?, &tables.d2)?;
            let m = main_term(x, h, k, Variant::Plus, None, tables.order(k)?, &tables.mu, &ctx)?;
            println!(
                "  {k}  {h:>2}  {d:>14}   {m:>16.2}  {:+.2e}",
                (d as f64 - m) / d as f64
            );
        }
    }

    let w = WeightSpec::bump(0.5)?;
    println!("\nsmooth bump weight (omega = 0.5), minus variant:");
    for h in [1i64, 2] {
        let req = CorrelationRequest {
            x,
            h,
            k: 3,
            variant: Variant::Minus,
            weight: Some(w),
        };
        let (d, _) = smooth_shifted_sum(&req, tables.order(3)?, &tables.d2)?;
        let m = main_term(x, h, 3, Variant::Minus, Some(w), tables.order(3)?, &tables.mu, &ctx)?;
        println!("  k=3 h={h}: D = {d:.2}, M = {m:.2}, rel {:+.2e}", (d - m) / d);
    }
    Ok(())
}

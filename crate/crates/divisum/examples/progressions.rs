//! Divisor sums over arithmetic progressions: exact sums, the predicted
//! main term phi0, and the exact decomposition identity tying the shifted
//! correlation sum to its progression pieces.
//!
//! Run with: cargo run --release --example progressions

use divisum::correlate::{progression_sum, progression_sum_exact, shifted_sum, CorrelationRequest};
use divisum::mainterm::{phi0, AnalyticContext, Variant};
use divisum::sieve::{sieve_dk, SpfTable};
use divisum::weight::{WeightSpec, Window};

fn main() -> divisum::Result<()> {
    let x = 100_000u64;
    let spf = SpfTable::build(x + 16)?;
    let d2 = sieve_dk(x + 16, 2, &spf)?;
    let ctx = AnalyticContext::default();

    println!("smooth window on [x/2, x], x = {x}: exact progression sums vs phi0");
    let g = Window::scaled(WeightSpec::bump(1.0)?, x as f64);
    for (b, h) in [(1u64, 1i64), (4, 1), (12, 5), (35, 2)] {
        let exact = progression_sum(b, h, &g, &d2)?;
        // phi0 takes the window in the summand variable xi = m - h
        let pred = phi0(b, h, &Window::translated(g.clone(), h as f64), &ctx)?;
        println!(
            "  b = {b:>2}, h = {h}: exact {exact:>12.2}, predicted {pred:>12.2}, rel {:+.2e}",
            (exact - pred) / exact
        );
    }

    println!("\nexact decomposition at x = 10000, k = 3, h = 1:");
    let x = 10_000u64;
    let d3 = sieve_dk(x + 2, 3, &spf)?;
    let req = CorrelationRequest {
        x: x as f64,
        h: 1,
        k: 3,
        variant: Variant::Plus,
        weight: None,
    };
    let lhs = shifted_sum(&req, &d3, &d2)?.0;
    let mut rhs = 0u64;
    for b in 1..=x {
        rhs += d2.get(b) * progression_sum_exact(b, 1, 2, x + 1, &d2)?;
    }
    println!("  sum d_3(n) d(n+1) = {lhs}");
    println!("  sum_b d_2(b) [progression sums] = {rhs}");
    println!("  equal: {}", lhs == rhs);
    Ok(())
}

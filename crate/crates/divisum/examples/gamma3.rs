//! Two very different expressions for the same multiplicative function:
//! the ratio c3(h)/c3(1) of the character-decomposition singular series
//! against the closed Euler-product factor gamma(h), compared on prime
//! powers.
//!
//! Run with: cargo run --release --example gamma3

use divisum::mainterm::SeriesTruncation;
use divisum::singular::{c3, gamma_euler};
use divisum::sieve::SpfTable;

fn main() -> divisum::Result<()> {
    let spf = SpfTable::build(16_384)?;
    let trunc = SeriesTruncation::with_d_max(10_000);

    for &(d1, d2) in &[(0.0, 0.0), (0.1, 0.07)] {
        let base = c3(1, d1, d2, &trunc, &spf)?;
        println!("deltas = ({d1}, {d2}): c3(1) = {base:.10}");
        println!("  p^k    c3(p^k)/c3(1)      gamma(p^k)         diff");
        for p in [2u64, 3, 5, 7] {
            for k in 1..=3u32 {
                let h = p.pow(k);
                let ratio = c3(h, d1, d2, &trunc, &spf)? / base;
                let g = gamma_euler(h, d1, d2)?;
                println!("  {h:>4}   {ratio:>16.10}   {g:>16.10}   {:+.1e}", ratio - g);
            }
        }
        println!();
    }

    // multiplicativity of the ratio
    let base = c3(1, 0.1, 0.07, &trunc, &spf)?;
    let lhs = c3(6, 0.1, 0.07, &trunc, &spf)? / base;
    let rhs = (c3(2, 0.1, 0.07, &trunc, &spf)? / base) * (c3(3, 0.1, 0.07, &trunc, &spf)? / base);
    println!("multiplicativity: gamma3(6) = {lhs:.10}, gamma3(2) gamma3(3) = {rhs:.10}");
    Ok(())
}

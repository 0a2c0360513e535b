//! The singular series in its two shapes: the truncated Ramanujan-sum
//! double series and the factorization into a base constant times the
//! multiplicative Euler factor gamma(h).
//!
//! Run with: cargo run --release --example singular_series

use divisum::mainterm::SeriesTruncation;
use divisum::singular::{gamma_euler, singular_series_truncated};
use divisum::sieve::SpfTable;

fn main() -> divisum::Result<()> {
    let spf = SpfTable::build(8192)?;
    let trunc = SeriesTruncation::with_d_max(2000);

    for &(d1, d2) in &[(0.0, 0.0), (0.1, 0.07)] {
        println!("deltas = ({d1}, {d2}):");
        let base = singular_series_truncated(1, d1, d2, &trunc, &spf)?;
        println!(
            "  C(1) = {:.8} (tail estimate {:.1e})",
            base.value, base.tail_estimate
        );
        println!("  h    C(h)/C(1) truncated    gamma(h) product   diff");
        for h in [2u64, 3, 4, 6, 12, 30, 49] {
            let ratio = singular_series_truncated(h as i64, d1, d2, &trunc, &spf)?.value
                / base.value;
            let g = gamma_euler(h, d1, d2)?;
            println!("  {h:>2}   {ratio:>18.10}   {g:>16.10}   {:+.2e}", ratio - g);
        }
        println!();
    }

    // refinement: doubling the truncation moves the value well below the
    // reported tail estimate
    let coarse = singular_series_truncated(1, 0.0, 0.0, &SeriesTruncation::with_d_max(2000), &spf)?;
    let fine = singular_series_truncated(1, 0.0, 0.0, &SeriesTruncation::with_d_max(4000), &spf)?;
    println!(
        "refinement at h = 1: d_max 2000 -> 4000 moves the value by {:.2e} (estimate {:.2e})",
        (fine.value - coarse.value).abs(),
        coarse.tail_estimate
    );
    Ok(())
}

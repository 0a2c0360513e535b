//! Bulk divisor tables: the smallest-prime-factor sieve, d_k tabulation,
//! the summatory function against the classical Dirichlet asymptotic, and
//! the binary cache round trip.
//!
//! Run with: cargo run --release --example sieve_tables

use divisum::cache::{dump_divisor_table, load_divisor_table};
use divisum::mainterm::EULER_GAMMA;
use divisum::sieve::{sieve_dk, SpfTable};
use std::time::Instant;

fn main() -> divisum::Result<()> {
    let limit = 1_000_000u64;
    let t0 = Instant::now();
    let spf = SpfTable::build(limit)?;
    let d2 = sieve_dk(limit, 2, &spf)?;
    let d4 = sieve_dk(limit, 4, &spf)?;
    println!(
        "built spf, d_2 and d_4 up to {limit} in {:.2}s",
        t0.elapsed().as_secs_f64()
    );

    println!("\nfirst divisor counts: {:?}", (1..=12).map(|n| d2.get(n)).collect::<Vec<_>>());
    println!("d_4(360) = {}", d4.get(360));

    let x = 1_000_000u64;
    let exact = d2.summatory(x)?;
    let xf = x as f64;
    let predicted = xf * xf.ln() + (2.0 * EULER_GAMMA - 1.0) * xf;
    println!(
        "\nsummatory d(n) up to {x}: exact {exact}, x log x + (2 gamma - 1) x = {predicted:.1}"
    );
    println!(
        "difference {:+.1} (classical error scale sqrt(x) = {:.0})",
        exact as f64 - predicted,
        xf.sqrt()
    );

    let path = std::env::temp_dir().join("divisum-example-d2.tbl");
    dump_divisor_table(&d2, &path)?;
    let loaded = load_divisor_table(&path)?;
    println!(
        "\ncache round trip: wrote {} entries, reread d({}) = {}",
        loaded.limit() + 1,
        987_654,
        loaded.get(987_654)
    );
    std::fs::remove_file(&path).ok();
    Ok(())
}

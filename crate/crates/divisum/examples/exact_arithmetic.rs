//! Exact arithmetic primitives: Ramanujan sums against their defining
//! exponential sum, Kloosterman sums with the Weil bound, and the Euler
//! factors psi_alpha.
//!
//! Run with: cargo run --release --example exact_arithmetic

use divisum::arith::{
    dk_of_factored, factorize, gcd, kloosterman, psi, ramanujan_oracle, ramanujan_sum,
};

fn main() -> divisum::Result<()> {
    println!("Ramanujan sums c_d(h), closed form vs exponential oracle:");
    for (d, h) in [(1u64, 5i64), (3, 6), (6, 4), (12, 0), (30, 12)] {
        println!(
            "  c_{d}({h}) = {} (oracle {})",
            ramanujan_sum(d, h)?,
            ramanujan_oracle(d, h)?
        );
    }

    println!("\nKloosterman sums S(a, b; c) and the Weil bound d(c) sqrt(c (a,b,c)):");
    for (a, b, c) in [(1i64, 1i64, 2u64), (1, 1, 3), (2, 3, 35), (5, 7, 101)] {
        let s = kloosterman(a, b, c)?;
        let dc = dk_of_factored(2, &factorize(c, None)?)? as f64;
        let g = gcd(gcd(a.unsigned_abs(), b.unsigned_abs()), c) as f64;
        let bound = dc * ((c as f64) * g).sqrt();
        println!("  S({a},{b};{c}) = {s:+.6} (|S| <= {bound:.3})");
    }

    println!("\nEuler factors psi_alpha(n) = prod over p | n of (1 - p^(-1-alpha)):");
    for (alpha, n) in [(0.0, 6u64), (1.0, 2), (0.07, 360)] {
        println!("  psi_{alpha}({n}) = {:.9}", psi(alpha, n)?);
    }

    println!("\nDivisor function d_k on factored arguments:");
    for (k, n) in [(2u32, 12u64), (3, 4), (4, 360)] {
        println!("  d_{k}({n}) = {}", dk_of_factored(k, &factorize(n, None)?)?);
    }
    Ok(())
}

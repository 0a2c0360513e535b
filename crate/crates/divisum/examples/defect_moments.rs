//! The three progression-defect moments and their Cauchy-Schwarz identity:
//! the combination phi0_sq - 2 cross + phi_sq equals the sum of squared
//! defects and so stays nonnegative.
//!
//! Run with: cargo run --release --example defect_moments

use divisum::correlate::{defect_moments, DefectConfig};
use divisum::mainterm::AnalyticContext;
use divisum::sieve::{sieve_dk, SpfTable};
use divisum::weight::{WeightSpec, Window};

fn main() -> divisum::Result<()> {
    let ctx = AnalyticContext::default();
    let x = 10_000.0f64;
    let spf = SpfTable::build(25_000)?;
    let d2 = sieve_dk(25_000, 2, &spf)?;

    // progression variable confined to a short window of scale x^(1/4)
    let a1 = x.powf(0.25);
    let cfg = DefectConfig {
        a_window: Window::scaled(WeightSpec::bump(1.0)?, a1),
        weight: WeightSpec::bump(1.0)?,
        x,
        h: 1,
    };
    let b_lo = (x / a1 / 2.0) as u64;
    let b_hi = (x / a1) as u64;
    let m = defect_moments(&cfg, b_lo..=b_hi, &d2, &ctx)?;
    println!("moduli b in [{b_lo}, {b_hi}], window scale {a1:.1}:");
    println!("  sum Phi0^2      = {:>14.4}", m.phi0_sq);
    println!("  sum Phi0 Phi    = {:>14.4}", m.cross);
    println!("  sum Phi^2       = {:>14.4}", m.phi_sq);
    let defect = m.phi0_sq - 2.0 * m.cross + m.phi_sq;
    println!("  defect sum      = {defect:>14.4} (>= 0)");
    println!(
        "  defect fraction = {:.3e} of sum Phi^2",
        defect / m.phi_sq
    );
    Ok(())
}

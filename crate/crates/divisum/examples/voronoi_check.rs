//! The dual expansion of a smooth progression sum: main term minus the
//! Y0/Kloosterman dual sum plus the K0 companion, verified against the
//! exact sum, with the cutoff-doubling refinement.
//!
//! Run with: cargo run --release --example voronoi_check

use divisum::correlate::progression_sum;
use divisum::mainterm::AnalyticContext;
use divisum::sieve::{sieve_dk, SpfTable};
use divisum::voronoi::{voronoi_dual, VoronoiCheckConfig};
use divisum::weight::{WeightSpec, Window};

fn main() -> divisum::Result<()> {
    let ctx = AnalyticContext::default();
    let x = 10_000.0;
    let spf = SpfTable::build(16_384)?;
    let d2 = sieve_dk(16_384, 2, &spf)?;
    let g = Window::scaled(WeightSpec::bump(1.0)?, x);

    println!("smooth window on [{}, {}]:", x / 2.0, x);
    println!("  b   h   exact        main         Y-dual      K-dual      rel. residual");
    for (b, h) in [(1u64, 1i64), (4, 1), (12, 3), (24, 10), (50, 9)] {
        let m_cut = VoronoiCheckConfig::default_m_cut(x, b, 1.0);
        let cfg = VoronoiCheckConfig::new(b, h, x, m_cut)?;
        let e = voronoi_dual(&cfg, &g, &d2, &ctx)?;
        let exact = progression_sum(b, h, &g, &d2)?;
        println!(
            "  {b:>2}  {h:>2}  {exact:>10.2}  {:>10.2}  {:>+10.3e}  {:>+9.2e}  {:+.2e}",
            e.main,
            e.y_dual,
            e.k_dual,
            (e.total - exact) / exact
        );
    }

    println!("\ncutoff refinement at b = 36, h = 5:");
    let exact = progression_sum(36, 5, &g, &d2)?;
    for m_cut in [16u64, 32, 64, 128] {
        let cfg = VoronoiCheckConfig::new(36, 5, x, m_cut)?;
        let e = voronoi_dual(&cfg, &g, &d2, &ctx)?;
        println!(
            "  m_cut = {m_cut:>3}: residual {:+.3e}{}",
            e.total - exact,
            if e.cutoff_warning { "  (cutoff warning)" } else { "" }
        );
    }
    Ok(())
}

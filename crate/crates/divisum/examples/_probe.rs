use divisum::correlate::progression_sum;
use divisum::mainterm::AnalyticContext;
use divisum::sieve::{sieve_dk, SpfTable};
use divisum::voronoi::{voronoi_dual, VoronoiCheckConfig};
use divisum::weight::{WeightSpec, Window};
use std::time::Instant;

fn main() {
    let ctx = AnalyticContext::default();
    let x = 10_000.0;
    let spf = SpfTable::build(16_384).unwrap();
    let d2 = sieve_dk(16_384, 2, &spf).unwrap();
    let g = Window::scaled(WeightSpec::bump(1.0).unwrap(), x);
    let t0 = Instant::now();
    let mut worst = (0.0f64, 0u64, 0i64);
    let mut warns = 0;
    for b in 1..=50u64 {
        for h in 1..=10i64 {
            let m_cut = VoronoiCheckConfig::default_m_cut(x, b, 1.0);
            let cfg = VoronoiCheckConfig::new(b, h, x, m_cut).unwrap();
            let got = voronoi_dual(&cfg, &g, &d2, &ctx).unwrap();
            let exact = progression_sum(b, h, &g, &d2).unwrap();
            let rel = (got.total - exact).abs() / exact.abs();
            if got.cutoff_warning { warns += 1; }
            if rel > worst.0 { worst = (rel, b, h); }
        }
    }
    println!("500 configs in {:.1}s; worst rel {:.3e} at (b={}, h={}); warnings {}",
        t0.elapsed().as_secs_f64(), worst.0, worst.1, worst.2, warns);
}

//! The Y0/K0/J kernels and the three spectral transforms of a smooth
//! compactly supported test function.
//!
//! Run with: cargo run --release --example bessel_kernels

use divisum::bessel::{bessel, j0, j1, k0, y0, y1, KernelKind};
use divisum::transform::{bessel_transform, TransformKind};
use divisum::weight::{WeightSpec, Window};

fn main() -> divisum::Result<()> {
    println!("kernel values:");
    for t in [0.001f64, 0.5, 8.0, 50.0, 500.0] {
        println!(
            "  t = {t:>7}: J0 = {:+.10e}  Y0 = {:+.10e}  K0 = {:.10e}",
            j0(t)?,
            y0(t)?,
            k0(t)?
        );
    }
    println!(
        "\nJ kernel of higher order: J_5(10) = {:+.10e}",
        bessel(KernelKind::J(5), 10.0)?
    );

    // Wronskian sanity: J1 Y0 - J0 Y1 = 2/(pi t)
    let t = 37.5f64;
    let w = j1(t)? * y0(t)? - j0(t)? * y1(t)?;
    println!(
        "\nWronskian at t = {t}: {w:.12e} vs 2/(pi t) = {:.12e}",
        2.0 / (std::f64::consts::PI * t)
    );

    // transforms of a bump supported on [1, 2]
    let f = Window::scaled(WeightSpec::bump(1.0)?, 2.0);
    println!("\ntransforms of a smooth bump on [1, 2]:");
    for r in [0.0f64, 1.0, 5.0, 20.0] {
        let hat = bessel_transform(TransformKind::Hat, &f, r)?;
        let check = bessel_transform(TransformKind::Check, &f, r)?;
        println!("  r = {r:>4}: hat = {hat:+.6e}  check = {check:+.6e}");
    }
    for l in [1u32, 2, 5] {
        let tilde = bessel_transform(TransformKind::Tilde, &f, l as f64)?;
        println!("  l = {l:>4}: tilde = {tilde:+.6e}");
    }
    Ok(())
}

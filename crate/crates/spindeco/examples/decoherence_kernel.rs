//! The universal decoherence kernel M(t, z) and its scaling functions.
//!
//! Demonstrates the three computational routes (exact series, torus
//! quadrature, Bessel resummation) agreeing, the small- and large-time laws,
//! and the slow-channel scaling collapse.
//!
//! Run with: cargo run --release --example decoherence_kernel

use spindeco::kernel::{m_kernel, m_quadrature, m_series, phi, psi};

fn main() {
    println!("three routes at a few sample points:");
    println!(
        "{:>5} {:>5} {:>14} {:>14} {:>14}",
        "t", "z", "series", "quadrature", "resummed"
    );
    for (t, z) in [(0.5, 0.0), (2.0, 0.5), (4.0, -0.7), (8.0, 0.9)] {
        println!(
            "{t:>5} {z:>5} {:>14.10} {:>14.10} {:>14.10}",
            m_series(t, z).unwrap(),
            m_quadrature(t, z).unwrap(),
            m_kernel(t, z)
        );
    }

    println!("\nsmall-time law  M = 1 + t^2 (z - 1) + O(t^4):");
    for z in [-0.5, 0.0, 0.5] {
        let t = 0.1;
        let law = 1.0 + t * t * (z - 1.0);
        println!("  z = {z:>4}: M = {:.8}, law = {law:.8}", m_kernel(t, z));
    }

    println!("\nlarge-time envelope  M ~ t^-3 [(1+z)/(1-z)^3 - ...] / 2 pi:");
    let z = 0.5;
    for t in [20.0, 30.0, 40.0] {
        let a = (1.0 + z) / (1.0f64 - z).powi(3) / (2.0 * std::f64::consts::PI);
        println!(
            "  t = {t}: M t^3 = {:.4} (constant term {a:.4})",
            m_kernel(t, z) * t * t * t
        );
    }

    println!("\nslow-channel collapse  M(t, z) -> psi(t (1 - z)) as z -> 1:");
    for z in [0.99, 0.995] {
        let eps = 1.0 - z;
        print!("  z = {z}: ");
        for tp in [0.5, 1.0, 2.0, 4.0] {
            let t = tp / eps;
            print!("|M - psi|({tp}) = {:.5}  ", (m_kernel(t, z) - psi(tp)).abs());
        }
        println!();
    }

    println!("\nfirst correction near z = 1:  M(t, 1 - eps) = 1 + eps phi(t):");
    let eps = 1e-3;
    for t in [1.0, 5.0, 10.0] {
        println!(
            "  t = {t}: M = {:.8}, 1 + eps phi = {:.8}",
            m_kernel(t, 1.0 - eps),
            1.0 + eps * phi(t)
        );
    }
}

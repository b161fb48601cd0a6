//! The exact angular-momentum layer: Clebsch-Gordan and 6-j coefficients
//! carried as signs times square roots of exact rationals.
//!
//! Run with: cargo run --release --example exact_coefficients

use spindeco::halfint::HalfInt;
use spindeco::su2::{clebsch_gordan, wigner6j};

fn h(twice: i64) -> HalfInt {
    HalfInt::from_twice(twice)
}

fn main() {
    println!("singlet decomposition of two spin-1/2:");
    for (m1, m2) in [(1, -1), (-1, 1)] {
        let c = clebsch_gordan(h(1), h(m1), h(1), h(m2), h(0), h(0));
        println!(
            "  <1/2 {m1:+}/2; 1/2 {m2:+}/2 | 0 0> = {:+.15}   (radicand {})",
            c.to_f64(),
            c.radicand()
        );
    }

    println!("\nstretched weights <j j; l 0 | j j> at j = 10:");
    for l in [0, 1, 5, 15, 20] {
        let c = clebsch_gordan(h(20), h(20), HalfInt::from_int(l), h(0), h(20), h(20));
        println!("  l = {l:>2}: {:.12}", c.to_f64());
    }

    println!("\n6-j symbols:");
    let v = wigner6j(
        HalfInt::from_int(1),
        HalfInt::from_int(1),
        HalfInt::from_int(1),
        HalfInt::from_int(1),
        HalfInt::from_int(1),
        HalfInt::from_int(1),
    );
    println!("  {{1 1 1; 1 1 1}} = {} (exactly 1/6)", v.to_f64());
    // closed family {j j 0; j j l} = (-1)^(2j+l) / (2j+1)
    for (tj, l) in [(5i64, 2i64), (8, 3), (13, 7)] {
        let v = wigner6j(h(tj), h(tj), h(0), h(tj), h(tj), HalfInt::from_int(l));
        println!(
            "  {{j j 0; j j {l}}} at 2j = {tj}: {:+.12} (expect {:+.12})",
            v.to_f64(),
            if (tj + l) % 2 == 0 { 1.0 } else { -1.0 } / (tj as f64 + 1.0)
        );
    }

    // a large-spin coefficient that would overflow naive factorials
    let big = clebsch_gordan(h(400), h(0), h(400), h(0), h(400), h(0));
    println!("\nlarge-spin CG <200 0; 200 0 | 200 0> = {:.12e}", big.to_f64());
}

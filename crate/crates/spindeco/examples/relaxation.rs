//! Magnetization relaxation of a polarized large spin: scaling-function
//! decay with an algebraic tail instead of an exponential.
//!
//! Run with: cargo run --release --example relaxation

use spindeco::coupling::{derive, CouplingSpec};
use spindeco::evolution::{magnetization, magnetization_ratio};
use spindeco::kernel::psi;
use spindeco::states::coherent;

fn main() {
    let two_j = 200; // j = 100
    let spec = CouplingSpec::single_channel(two_j, 1, 1.0).unwrap();
    let d = derive(&spec).unwrap();
    let tau3 = d.tau3 / d.tau0;
    println!("equilibration time tau3 = {tau3:.0} tau0");

    let state = coherent(two_j, 0.0, 0.0);
    println!("\n{:>9} {:>12} {:>14}", "t/tau3", "Sz(t)/Sz(0)", "psi(8t/3pi tau3)");
    for f in [0.0, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0] {
        let t = f * tau3;
        let ratio = magnetization(&state, &d, t) / 100.0;
        let law = psi(8.0 / (3.0 * std::f64::consts::PI) * f);
        println!("{f:>9.1} {ratio:>12.6} {law:>14.6}");
    }

    // the tail is algebraic, t^-3, not exponential
    let r1 = magnetization_ratio(&d, 10.0 * tau3);
    let r2 = magnetization_ratio(&d, 20.0 * tau3);
    println!(
        "\ntail exponent between 10 and 20 tau3: {:.3} (algebraic value -3)",
        (r2 / r1).ln() / 2.0f64.ln()
    );
}

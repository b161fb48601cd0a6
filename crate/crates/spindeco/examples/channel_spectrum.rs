//! Per-channel coupling ratios Z(l) and their large-spin scaling limit.
//!
//! Run with: cargo run --release --example channel_spectrum

use spindeco::coupling::{derive, y_scaling, CouplingSpec};

fn show(label: &str, spec: &CouplingSpec) {
    let d = derive(spec).unwrap();
    println!("\n{label}  (2j = {}, tau0 = {:.4})", spec.two_j, d.tau0);
    println!("{:>4} {:>12} {:>12}", "l", "Z(l)", "Y(l/2j)");
    let step = (spec.two_j / 10).max(1);
    for l in (0..=spec.two_j).step_by(step as usize) {
        let x = l as f64 / spec.two_j as f64;
        println!("{l:>4} {:>12.6} {:>12.6}", d.z_at(l), y_scaling(spec, x));
    }
}

fn main() {
    // all channels equally coupled: the unstructured ensemble, Z(l>0) = 0
    let gue = CouplingSpec::equal_up_to(20, 20, 1.0).unwrap();
    show("equal couplings in every channel", &gue);

    // a few low channels only: slow decoherence at small l
    let low = CouplingSpec::new(80, [(0, 1.0), (1, 1.0), (2, 1.0), (3, 1.0)]).unwrap();
    show("channels l <= 3", &low);

    // odd channels only: Z(2j) approaches -1 (fast antipodal decoherence)
    let odd = CouplingSpec::new(80, [(1, 1.0), (3, 1.0)]).unwrap();
    show("odd channels only", &odd);

    // even channels only: parity protection, Z(2j) approaches +1
    let even = CouplingSpec::new(80, [(0, 1.0), (2, 1.0), (4, 1.0)]).unwrap();
    show("even channels only", &even);
}

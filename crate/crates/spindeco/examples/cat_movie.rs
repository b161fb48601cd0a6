//! Phase-space movie of a two-component cat state: the interference fringes
//! die on the fast decoherence time while the two classical peaks survive.
//!
//! Writes numbered CSV frames plus a JSON manifest under out-cat-movie/.
//!
//! Run with: cargo run --release --example cat_movie

use num_complex::Complex64;
use spindeco::coupling::{derive, CouplingSpec};
use spindeco::evolution::frames;
use spindeco::output::write_field;
use spindeco::sphere::{Grid, RadialMap};
use spindeco::states::cat2;
use spindeco::wigner::{FieldKind, FieldNormalization};

fn main() {
    let two_j = 40; // j = 20
    let spec = CouplingSpec::single_channel(two_j, 1, 1.0).unwrap();
    let d = derive(&spec).unwrap();
    println!(
        "worked configuration: tau0 = tau1 = {:.3}, tau2 = {:.3} (tau0 units: 1, 1, 10)",
        d.tau0, d.tau2
    );

    let half_pi = std::f64::consts::FRAC_PI_2;
    let state = cat2(
        two_j,
        (half_pi, 0.0),
        (half_pi, std::f64::consts::PI),
        Complex64::new(1.0, 0.0),
        Complex64::new(1.0, 0.0),
    );

    let times: Vec<f64> = (0..=16).map(|i| i as f64 * 0.75).collect();
    let grid = Grid::stereographic(81, 4.0, RadialMap::TanHalf);
    let fields = frames(
        &state,
        &d,
        &times,
        &grid,
        FieldKind::Wigner,
        FieldNormalization::Orthonormal,
    )
    .unwrap();

    std::fs::create_dir_all("out-cat-movie").unwrap();
    for (i, f) in fields.iter().enumerate() {
        let path = std::path::PathBuf::from(format!("out-cat-movie/frame_{i:04}.csv"));
        write_field(f, &path).unwrap();
    }
    println!("wrote {} frames to out-cat-movie/", fields.len());

    // fringe amplitude on the interference meridian vs peak height
    let probe_grid = Grid::sphere(2 * two_j as usize + 1, 4 * two_j as usize);
    let fringe_track = frames(
        &state,
        &d,
        &times,
        &probe_grid,
        FieldKind::Wigner,
        FieldNormalization::Orthonormal,
    )
    .unwrap();
    println!("\n{:>6} {:>12} {:>12}", "t/tau0", "fringe", "peak");
    for f in &fringe_track {
        let mut fringe = 0.0f64;
        let mut peak = 0.0f64;
        for (&(theta, phi), &v) in f.coords.iter().zip(&f.values) {
            // fringes live on the meridian phi = +-pi/2; peaks at phi = 0, pi
            let dphi = (phi - half_pi).abs().min((phi - 1.5 * std::f64::consts::PI).abs());
            if dphi < 0.1 {
                fringe = fringe.max(v.abs());
            }
            if (theta - half_pi).abs() < 0.08
                && (phi.min(2.0 * std::f64::consts::PI - phi)) < 0.1
            {
                peak = peak.max(v);
            }
        }
        println!("{:>6.2} {fringe:>12.5} {peak:>12.5}", f.time.unwrap());
    }
}

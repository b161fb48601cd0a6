//! Wigner and Husimi fields of coherent, cat and random states.
//!
//! Run with: cargo run --release --example phase_space_fields

use num_complex::Complex64;
use spindeco::sphere::Grid;
use spindeco::states::{cat2, coherent, random_state};
use spindeco::wigner::{field, FieldKind, FieldNormalization, WignerTransform};

fn summarize(label: &str, state: &spindeco::states::SpinState) {
    let t = WignerTransform::for_spin(state.twice_j);
    let w = t.to_harmonics(&state.density_matrix().mat).unwrap();
    let grid = Grid::sphere_for_degree(2 * state.twice_j as usize);
    let wig = field(&w, &grid, FieldKind::Wigner, FieldNormalization::Orthonormal);
    let hus = field(&w, &grid, FieldKind::Husimi, FieldNormalization::Physical);
    println!(
        "{label:<24} purity = {:.4}  wigner in [{:+.3}, {:+.3}]  husimi in [{:+.3e}, {:.3}]",
        w.norm_sq(),
        wig.min(),
        wig.max(),
        hus.min(),
        hus.max()
    );
}

fn main() {
    let two_j = 40; // j = 20
    println!("phase-space fields at j = 20 (negativity of the Wigner field");
    println!("marks quantum interference; the Husimi field never goes negative)\n");
    summarize("coherent", &coherent(two_j, 1.0, 0.3));
    summarize(
        "antipodal cat",
        &cat2(
            two_j,
            (std::f64::consts::FRAC_PI_2, 0.0),
            (std::f64::consts::FRAC_PI_2, std::f64::consts::PI),
            Complex64::new(1.0, 0.0),
            Complex64::new(1.0, 0.0),
        ),
    );
    summarize("random pure", &random_state(two_j, 42));

    // the Husimi field of a coherent state is the overlap law cos^{4j}(d/2)
    let s = coherent(two_j, 0.0, 0.0);
    let t = WignerTransform::for_spin(two_j);
    let w = t.to_harmonics(&s.density_matrix().mat).unwrap();
    let grid = Grid::sphere(24, 8);
    let q = field(&w, &grid, FieldKind::Husimi, FieldNormalization::Physical);
    println!("\ncoherent-state Husimi vs overlap law cos^(4j)(theta/2):");
    for (i, (&(theta, _), &v)) in grid.angles.iter().zip(&q.values).enumerate() {
        if i % 40 == 0 {
            println!(
                "  theta = {theta:.3}: Q = {v:.6e}, law = {:.6e}",
                (theta / 2.0).cos().powi(2 * two_j as i32)
            );
        }
    }
}

//! Finite-size Monte Carlo against the analytic kernel: sample the random
//! interaction, evolve exactly, trace out the environment, and compare the
//! per-channel damping with its planar-limit prediction.
//!
//! Run with: cargo run --release --example mc_oracle

use spindeco::coupling::{derive, CouplingSpec};
use spindeco::kernel::m_kernel;
use spindeco::montecarlo::{empirical_kernel, sample_hamiltonian, spectrum, spectrum_semicircle_distance};
use spindeco::states::coherent;

fn main() {
    // spin 1/2 coupled through the l = 1 channel
    let spec = CouplingSpec::single_channel(1, 1, 1.0).unwrap();
    let d = derive(&spec).unwrap();
    println!("Z(1) = {:.6}, tau0 = {:.6}", d.z_at(1), d.tau0);

    let n_env = 64;
    let samples = 40;
    let rho0 = coherent(1, 1.0, 0.5).density_matrix();
    let times_tau0 = [0.5, 1.0, 2.0, 3.0, 5.0];
    let times_abs: Vec<f64> = times_tau0.iter().map(|t| t * d.tau0).collect();
    println!("\nN = {n_env}, {samples} samples; l = 1 channel factor:");
    println!("{:>7} {:>12} {:>9} {:>12}", "t/tau0", "empirical", "sigma", "analytic");
    let est = empirical_kernel(&rho0, &spec, n_env, samples, 2024, &times_abs).unwrap();
    for e in est.iter().filter(|e| e.l == 1 && e.m == 0) {
        let t = e.t / d.tau0;
        println!(
            "{t:>7.2} {:>12.5} {:>9.5} {:>12.5}",
            e.ratio,
            e.sigma,
            m_kernel(t, d.z_at(1))
        );
    }

    // eigenvalue density of the sampled Hamiltonian: semicircle
    let spec2 = CouplingSpec::new(2, [(0, 0.5), (1, 1.0)]).unwrap();
    let d2 = derive(&spec2).unwrap();
    let mut eigs = Vec::new();
    for seed in 0..10 {
        eigs.extend(spectrum(&sample_hamiltonian(&spec2, 120, seed).unwrap()));
    }
    let dist = spectrum_semicircle_distance(&mut eigs, d2.hat_delta0);
    println!(
        "\neigenvalue CDF vs semicircle on [-2 sqrt(hd0), 2 sqrt(hd0)]: sup distance {dist:.4}"
    );
}

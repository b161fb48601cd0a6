//! Environment with its own spectral density, started in an energy
//! eigenstate: energy-dependent kernels, the exponential fast-bath regime
//! and the golden-rule diffusion coefficient.
//!
//! Run with: cargo run --release --example external_bath

use spindeco::external::{
    self, diffusion_coefficient, m_external, m_scaling, n_of_t, BathSpec,
};
use spindeco::kernel::m_kernel;

fn main() {
    println!("degeneracy checks of the energy-resolved kernel:");
    for t in [1.0, 3.0] {
        println!(
            "  M(t={t}, E=0, z=0.5, zav=0)   = {:.8}  plain kernel = {:.8}",
            m_external(t, 0.0, 0.5, 0.0).unwrap(),
            m_kernel(t, 0.5)
        );
        let n = n_of_t(t, 0.6);
        println!(
            "  M(t={t}, E=0, z=0.6, zav=0.6) = {:.8}  |N(t)|^2     = {:.8}",
            m_external(t, 0.0, 0.6, 0.6).unwrap(),
            n.norm_sqr()
        );
    }

    println!("\nenergy dependence at fixed channel (z = 0.8, zav = 0.5, t = 4):");
    for e in [0.0, 0.5, 1.0, 1.3] {
        println!("  E = {e}: M = {:.6}", m_external(4.0, e, 0.8, 0.5).unwrap());
    }

    println!("\nfast-bath scaling limit: exponential then algebraic decay");
    let zav = 0.999;
    let t_cross = (1.0f64 / (1.0 - zav)).ln();
    println!("  crossover expected near tp = {t_cross:.2}");
    for tp in [1.0, 3.0, 5.0, 8.0, 12.0, 20.0] {
        let v = m_scaling(tp, 0.0, zav);
        println!(
            "  tp = {tp:>4}: M_scaling = {v:.3e}   pure exponential = {:.3e}",
            (-2.0 * tp).exp()
        );
    }

    println!("\ngolden-rule diffusion coefficient across the band:");
    let bath = BathSpec::semicircle(40, 4.0, [(1, 0.5)]).unwrap().derive().unwrap();
    let msq = external::commutator_mean_square(&bath, 256);
    println!("  E[|<a|C|b>|^2] at N = 256: {msq:.6e}");
    for e in [0.0, 2.0, 3.5, 4.0] {
        let d_analytic = diffusion_coefficient(&bath, e);
        let d_golden = external::diffusion_coefficient_golden(&bath, e, 256, msq);
        println!("  E = {e}: D = {d_analytic:.6e}  (golden-rule route {d_golden:.6e})");
    }
}

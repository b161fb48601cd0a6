//! Time evolution of spin states through the per-channel kernels, and the
//! observables built on top: purity, entropy, phase-space frames, the
//! diffusion-regime profile, widths and magnetization.

use rayon::prelude::*;

use crate::coupling::CouplingDerived;
use crate::error::Result;
use crate::kernel::{m_hat, psi, TimeUnit};
use crate::matrix::{self, CMat};
use crate::numeric::adaptive_simpson;
use crate::sphere::Grid;
use crate::states::SpinState;
use crate::wigner::{field, FieldKind, FieldNormalization, HarmonicSpectrum, PhaseSpaceField, WignerTransform};

/// Evolve a harmonic spectrum to time `t` (in `tau0` units): every `(l, m)`
/// coefficient is multiplied by the channel kernel. The `l = 0` mode is
/// untouched, so the trace is preserved exactly.
pub fn evolve(w0: &HarmonicSpectrum, derived: &CouplingDerived, t: f64) -> HarmonicSpectrum {
    let mut out = w0.clone();
    for l in 1..=w0.twice_j {
        let factor = m_hat(derived, l, t, TimeUnit::Tau0);
        for m in -l..=l {
            out.set(l, m, w0.get(l, m) * factor);
        }
    }
    out
}

/// Purity `tr(rho^2)`, evaluated as the squared harmonic norm.
pub fn purity(w: &HarmonicSpectrum) -> f64 {
    w.norm_sq()
}

/// Von Neumann entropy of the operator the spectrum represents.
pub fn entropy(w: &HarmonicSpectrum) -> f64 {
    let t = WignerTransform::for_spin(w.twice_j);
    let mat = t.from_harmonics(w);
    let vals = matrix::hermitian_eigenvalues(&mat);
    -vals
        .iter()
        .filter(|&&p| p > 1e-15)
        .map(|&p| p * p.ln())
        .sum::<f64>()
}

/// Evolve a pure state and render one phase-space field per requested time.
/// Times are in `tau0` units; fields carry their time stamp.
pub fn frames(
    state: &SpinState,
    derived: &CouplingDerived,
    times: &[f64],
    grid: &Grid,
    kind: FieldKind,
    normalization: FieldNormalization,
) -> Result<Vec<PhaseSpaceField>> {
    let t = WignerTransform::for_spin(state.twice_j);
    let w0 = t.to_harmonics(&state.density_matrix().mat)?;
    let fields: Vec<PhaseSpaceField> = times
        .par_iter()
        .map(|&time| {
            let wt = evolve(&w0, derived, time);
            let mut f = field(&wt, grid, kind, normalization);
            f.time = Some(time);
            f
        })
        .collect();
    Ok(fields)
}

/// The self-similar phase-space density of the diffusion regime at scaled
/// time `tp`, evaluated at planar radius `z_abs`:
/// `(3/(8 pi tp)) int cos(th) exp(-|z|^2 3 pi / (16 tp cos th)) dth`.
/// Normalized so the plane integral is 1.
pub fn w_quantum(z_abs: f64, tp: f64) -> f64 {
    let pref = 3.0 / (8.0 * std::f64::consts::PI * tp);
    let a = 3.0 * std::f64::consts::PI * z_abs * z_abs / (16.0 * tp);
    let f = |th: f64| {
        let c = th.cos();
        if c < 1e-300 {
            return 0.0;
        }
        c * (-a / c).exp()
    };
    pref
        * adaptive_simpson(
            &f,
            -std::f64::consts::FRAC_PI_2,
            std::f64::consts::FRAC_PI_2,
            1e-12,
        )
}

/// Diffusion profile in the self-similar variable `r = |z| / sqrt(tp)`:
/// `W(z, tp) = (1/tp) * diffusion_profile_quantum(|z|/sqrt(tp))`.
pub fn diffusion_profile_quantum(r: f64) -> f64 {
    w_quantum(r, 1.0)
}

/// Radial moments `<|z|^p>` of the self-similar profile (at `tp = 1`).
pub fn diffusion_profile_moment(p: i32) -> f64 {
    let f = |r: f64| r.powi(p + 1) * diffusion_profile_quantum(r);
    2.0 * std::f64::consts::PI * adaptive_simpson(&f, 0.0, 12.0, 1e-12)
}

/// Variance-matched planar Gaussian, for comparison against the quantum
/// profile: `g(r) = exp(-r^2/(2 s2)) / (2 pi s2)` with `<|z|^2> = 2 s2`.
pub fn gaussian_profile(r: f64, variance: f64) -> f64 {
    let s2 = variance / 2.0;
    (-r * r / (2.0 * s2)).exp() / (2.0 * std::f64::consts::PI * s2)
}

/// Angular width of the Husimi density about its own centroid direction.
///
/// The Husimi field of a density matrix is nonnegative, so it serves as a
/// probability weight; the width is the root mean square geodesic angle.
pub fn husimi_width(w: &HarmonicSpectrum) -> f64 {
    let degree = w.twice_j as usize;
    let grid = Grid::sphere(degree + 24, degree + 24);
    let q = field(w, &grid, FieldKind::Husimi, FieldNormalization::Orthonormal);
    // centroid direction
    let mut c = [0.0f64; 3];
    let mut total = 0.0f64;
    for ((&(theta, phi), &v), &wq) in grid.angles.iter().zip(&q.values).zip(&grid.weights) {
        let p = v.max(0.0) * wq;
        c[0] += p * theta.sin() * phi.cos();
        c[1] += p * theta.sin() * phi.sin();
        c[2] += p * theta.cos();
        total += p;
    }
    let norm = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
    let center = if norm > 1e-12 * total.abs().max(1e-300) {
        [c[0] / norm, c[1] / norm, c[2] / norm]
    } else {
        [0.0, 0.0, 1.0]
    };
    let mut second = 0.0f64;
    for ((&(theta, phi), &v), &wq) in grid.angles.iter().zip(&q.values).zip(&grid.weights) {
        let p = v.max(0.0) * wq;
        let dot = (theta.sin() * phi.cos()) * center[0]
            + (theta.sin() * phi.sin()) * center[1]
            + theta.cos() * center[2];
        let ang = dot.clamp(-1.0, 1.0).acos();
        second += p * ang * ang;
    }
    (second / total).sqrt()
}

/// Width of an evolved coherent state at time `t` (`tau0` units).
pub fn width(state: &SpinState, derived: &CouplingDerived, t: f64) -> Result<f64> {
    let tr = WignerTransform::for_spin(state.twice_j);
    let w0 = tr.to_harmonics(&state.density_matrix().mat)?;
    Ok(husimi_width(&evolve(&w0, derived, t)))
}

/// Diffusive part of the width: the total width deconvolved from the
/// initial coherent core (quadrature subtraction). This is the quantity
/// that grows as `sqrt(t)` in the diffusion window; the raw width flattens
/// at early times where the static `1/sqrt(j)` core still dominates.
pub fn diffusive_width(state: &SpinState, derived: &CouplingDerived, t: f64) -> Result<f64> {
    let tr = WignerTransform::for_spin(state.twice_j);
    let w0 = tr.to_harmonics(&state.density_matrix().mat)?;
    let base = husimi_width(&w0);
    let total = husimi_width(&evolve(&w0, derived, t));
    Ok((total * total - base * base).max(0.0).sqrt())
}

/// Large-spin magnetization relaxation factor at time `t` (`tau0` units):
/// the `l = 1` channel in its slow-decoherence scaling form,
/// `psi((8/(3 pi)) t / tau3)` with `tau3` the equilibration time.
///
/// This is the closed-form relaxation law for `j >> 1`; the exact channel
/// factor `M(t, Z(1))` is available through [`evolve`] / `m_hat` and differs
/// from it by an order-one rescaling of the argument at finite `j`.
pub fn magnetization_ratio(derived: &CouplingDerived, t: f64) -> f64 {
    let j = derived.spec.two_j as f64 / 2.0;
    if derived.d0 == 0.0 {
        return 1.0;
    }
    let tau3_tau0 = j * j / derived.d0;
    psi(8.0 / (3.0 * std::f64::consts::PI) * t / tau3_tau0)
}

/// Mean `S_z` at time `t` for an initial pure state, by the large-spin
/// relaxation law. Zero initial magnetization stays zero forever.
pub fn magnetization(state: &SpinState, derived: &CouplingDerived, t: f64) -> f64 {
    let sz0 = matrix::spin_expectation(&state.amps, state.twice_j)[2];
    if sz0 == 0.0 {
        return 0.0;
    }
    sz0 * magnetization_ratio(derived, t)
}

/// Positivity probe: smallest eigenvalue of the evolved density matrix.
pub fn min_eigenvalue_after(
    rho0: &CMat,
    twice_j: i64,
    derived: &CouplingDerived,
    t: f64,
) -> Result<f64> {
    let tr = WignerTransform::for_spin(twice_j);
    let w0 = tr.to_harmonics(rho0)?;
    let wt = evolve(&w0, derived, t);
    let mat = tr.from_harmonics(&wt);
    Ok(matrix::hermitian_eigenvalues(&mat)
        .into_iter()
        .fold(f64::INFINITY, f64::min))
}

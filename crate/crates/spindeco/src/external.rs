//! Environment with its own spectral density and an energy-eigenstate
//! initial condition.
//!
//! The interaction still acts channel by channel, but the kernel now depends
//! on the initial environment energy `E` and on two coupling ratios: the
//! per-channel `Z(l)` and the mode average `Z_av` (the weight of the
//! environment's own dynamics). For a semicircular density of states the
//! kernel has a closed two-contour representation; its contours are fixed
//! operationally by the degeneracy checks (`Z_av -> 0` must reproduce the
//! plain kernel, and `Z(l) = Z_av` at `E = 0` must factorize into
//! `|N(t)|^2`), which the tests enforce.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::coupling::{self, CouplingSpec};
use crate::error::{Error, Result};
use crate::numeric::{adaptive_simpson, integrate_gl};
use crate::states::coherent_harmonic;
use crate::wigner::HarmonicSpectrum;

/// Normalized density of states of the environment Hamiltonian.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum BathDensity {
    /// Semicircle of half-width `e0`; the closed-form kernel applies.
    Semicircle { e0: f64 },
    /// Tabulated density on a uniform energy grid (trapezoid-normalized).
    Tabulated { energies: Vec<f64>, values: Vec<f64> },
}

impl BathDensity {
    pub fn value(&self, e: f64) -> f64 {
        match self {
            BathDensity::Semicircle { e0 } => {
                if e.abs() >= *e0 {
                    0.0
                } else {
                    2.0 / (std::f64::consts::PI * e0 * e0) * (e0 * e0 - e * e).sqrt()
                }
            }
            BathDensity::Tabulated { energies, values } => {
                if energies.len() < 2 {
                    return 0.0;
                }
                let lo = energies[0];
                let hi = energies[energies.len() - 1];
                if e < lo || e > hi {
                    return 0.0;
                }
                let s = (e - lo) / (hi - lo) * (energies.len() - 1) as f64;
                let i = (s.floor() as usize).min(energies.len() - 2);
                let f = s - i as f64;
                values[i] * (1.0 - f) + values[i + 1] * f
            }
        }
    }

    pub fn support(&self) -> (f64, f64) {
        match self {
            BathDensity::Semicircle { e0 } => (-e0, *e0),
            BathDensity::Tabulated { energies, .. } => {
                (energies[0], energies[energies.len() - 1])
            }
        }
    }

    /// Hilbert transform `int nu(E) / (w - E) dE` for complex `w` off the
    /// support.
    pub fn hilbert(&self, w: Complex64) -> Complex64 {
        match self {
            BathDensity::Semicircle { e0 } => {
                // closed form 2 (w - sqrt(w^2 - e0^2)) / e0^2 with the branch
                // that decays at infinity
                let root = (w * w - e0 * e0).sqrt();
                let root = if (w - root).norm() <= (w + root).norm() {
                    root
                } else {
                    -root
                };
                2.0 * (w - root) / (e0 * e0)
            }
            BathDensity::Tabulated { energies, values } => {
                let mut acc = Complex64::new(0.0, 0.0);
                for i in 0..energies.len() - 1 {
                    let de = energies[i + 1] - energies[i];
                    let f0 = values[i] / (w - energies[i]);
                    let f1 = values[i + 1] / (w - energies[i + 1]);
                    acc += 0.5 * (f0 + f1) * de;
                }
                acc
            }
        }
    }
}

/// Bath specification: density of states plus interaction channels
/// (`l >= 1` only; the `l = 0` sector IS the bath Hamiltonian).
#[derive(Clone, Debug)]
pub struct BathSpec {
    pub two_j: i64,
    pub density: BathDensity,
    /// interaction variances for l >= 1
    pub coupling: CouplingSpec,
}

/// Derived quantities for a semicircle bath.
#[derive(Clone, Debug)]
pub struct BathDerived {
    pub spec: BathSpec,
    /// combined coupling spec with the bath as the l = 0 channel
    pub combined: coupling::CouplingDerived,
    pub e0: f64,
}

impl BathSpec {
    pub fn semicircle(two_j: i64, e0: f64, channels: impl IntoIterator<Item = (i64, f64)>) -> Result<Self> {
        let chans: Vec<(i64, f64)> = channels.into_iter().collect();
        for &(l, _) in &chans {
            if l < 1 {
                return Err(Error::InvalidSpec {
                    field: format!("coupling.{l}"),
                    reason: "bath interaction channels start at l = 1".into(),
                });
            }
        }
        let coupling = CouplingSpec::new(two_j, chans)?;
        Ok(Self {
            two_j,
            density: BathDensity::Semicircle { e0 },
            coupling,
        })
    }

    /// Fold the semicircle bath into a combined coupling spec:
    /// the bath Hamiltonian is the `l = 0` channel with
    /// `delta_bar(0) = e0^2 / 4`.
    pub fn derive(&self) -> Result<BathDerived> {
        let BathDensity::Semicircle { e0 } = self.density else {
            return Err(Error::InvalidSpec {
                field: "density".into(),
                reason: "closed-form kernel requires the semicircle density".into(),
            });
        };
        let mut merged = self.coupling.clone();
        merged.delta_bar.insert(0, e0 * e0 / 4.0);
        let combined = coupling::derive(&merged)?;
        Ok(BathDerived {
            spec: self.clone(),
            combined,
            e0,
        })
    }
}

/// Self-consistent resolvent of the dressed environment: the fixed point of
/// `C(x, E) = 1 / (x - E - hat_delta_prime * C(x))` with `C(x)` its
/// density-weighted average. Returns `(C(x), C(x, E))` for the requested
/// probe energy.
pub fn self_consistent_resolvent(
    density: &BathDensity,
    hat_delta_prime: f64,
    x: Complex64,
    probe_e: f64,
) -> Result<(Complex64, Complex64)> {
    let avg = |c: Complex64| -> Complex64 {
        match density {
            BathDensity::Semicircle { e0 } => {
                // int nu(E)/(x - E - d C) dE = hilbert(x - d C)
                density.hilbert(x - hat_delta_prime * c) * (e0 / e0)
            }
            BathDensity::Tabulated { .. } => density.hilbert(x - hat_delta_prime * c),
        }
    };
    let mut c = Complex64::new(0.0, 0.0);
    let relax = 0.5;
    let tol = 1e-12;
    let max_iter = 10_000;
    let mut residual = f64::INFINITY;
    for _ in 0..max_iter {
        let next = avg(c);
        residual = (next - c).norm();
        c = relax * next + (1.0 - relax) * c;
        if residual < tol {
            let c_e = 1.0 / (x - probe_e - hat_delta_prime * c);
            return Ok((c, c_e));
        }
    }
    Err(Error::FixedPoint {
        residual,
        iterations: max_iter,
    })
}

/// `N(t, Z) = contour integral of e^{-i t X} / W(X)`, with
/// `W(X) = Z H(X) + 1/H(X)` on the unit `H`-circle. `|N|^2` is the kernel at
/// `E = 0` when every channel sits at the mode average.
pub fn n_of_t(t: f64, z_av: f64) -> Complex64 {
    let k = ((16.0 * t.abs()).ceil() as usize).max(256);
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..k {
        let theta = 2.0 * std::f64::consts::PI * i as f64 / k as f64;
        let h = Complex64::from_polar(1.0, theta);
        let x = 2.0 * theta.cos();
        let w = z_av * h + h.conj(); // Z H + 1/H on |H| = 1
        let jac = h - h.conj(); // H - 1/H
        acc += jac * Complex64::from_polar(1.0, -t * x) / w;
    }
    // orientation: the unit circle traverses the spectral cut clockwise in
    // the energy variable, so the contour rule picks up a minus sign; fixed
    // so that N(0, Z) = 1
    -acc / k as f64
}

/// The external-bath kernel `M(t, E, Z(l), Z_av)` for the semicircle case,
/// by double quadrature on the unit torus. `t` in `tau0` units, `E` in
/// `1/tau0` units (so the band edge sits at `|E| = 2 sqrt(Z_av)`).
pub fn m_external(t: f64, e: f64, z_l: f64, z_av: f64) -> Result<f64> {
    if e.abs() > 2.0 * z_av.sqrt() + 1e-12 {
        return Err(Error::InvalidSpec {
            field: "E".into(),
            reason: format!(
                "initial energy {e} outside the dressed band |E| <= {}",
                2.0 * z_av.sqrt()
            ),
        });
    }
    if z_l > 1.0 {
        return Err(Error::InvalidSpec {
            field: "z_l".into(),
            reason: format!("channel ratio {z_l} > 1"),
        });
    }
    if z_l == 1.0 {
        // the l = 0 channel: identity for all times (trace preservation);
        // the z_l -> 1 limit of the quadrature confirms it numerically
        return Ok(1.0);
    }
    let mut k = ((16.0 * t.abs()).ceil() as usize).max(256);
    k = k.max((20.0 / (1.0 - z_l)).ceil() as usize);
    if z_av < 1.0 {
        k = k.max((20.0 / (1.0 - z_av)).ceil() as usize);
    }
    const K_CAP: usize = 8192;
    if k > K_CAP {
        return Err(Error::Contour {
            context: format!(
                "needs {k} nodes (> {K_CAP}); parameters too close to the pole (z_l = {z_l}, z_av = {z_av})"
            ),
        });
    }
    // per-axis factors
    let mut f_plus = Vec::with_capacity(k); // (H - 1/H) e^{-i t X} / (W - E)
    let mut f_minus = Vec::with_capacity(k); // same with e^{+i t X}
    let mut hvals = Vec::with_capacity(k);
    for i in 0..k {
        let theta = 2.0 * std::f64::consts::PI * i as f64 / k as f64;
        let h = Complex64::from_polar(1.0, theta);
        let x = 2.0 * theta.cos();
        let w = z_av * h + h.conj();
        let jac = h - h.conj();
        let base = jac / (w - e);
        f_plus.push(base * Complex64::from_polar(1.0, -t * x));
        f_minus.push(base * Complex64::from_polar(1.0, t * x));
        hvals.push(h);
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for i1 in 0..k {
        let a = f_plus[i1];
        let h1 = hvals[i1];
        for i2 in 0..k {
            let hh = h1 * hvals[i2];
            acc += a * f_minus[i2] * (1.0 - z_av * hh) / (1.0 - z_l * hh);
        }
    }
    // two orientation factors of -i, one per axis, and 1/(2 pi)^2 -> product
    // of the two normalized single-contour rules
    let val = acc * Complex64::new(0.0, -1.0) * Complex64::new(0.0, 1.0) / (k * k) as f64;
    Ok(val.re)
}

/// Scaling limit of the external kernel as `Z(l) -> 1` at fixed
/// `tp = t (1 - Z(l))`: a single Lorentzian-weighted exponential average.
pub fn m_scaling(tp: f64, e: f64, z_av: f64) -> f64 {
    let f = |theta: f64| {
        let c = theta.cos();
        let s = theta.sin();
        let denom = ((1.0 + z_av) * c - e).powi(2) + (1.0 - z_av) * (1.0 - z_av) * s * s;
        (1.0 - (2.0 * theta).cos()) * (1.0 - z_av) * (-2.0 * tp * s).exp() / denom
    };
    // Two kinds of sharp structure: a Lorentzian spike of width (1 - z_av)
    // at cos(theta_c) = e/(1 + z_av), and exponential boundary layers of
    // width ~ 1/tp at both endpoints (these carry the algebraic tail).
    // Scale-matched geometric panels with a fixed Gauss rule resolve both
    // at deterministic cost.
    let pi = std::f64::consts::PI;
    let theta_c = (e / (1.0 + z_av)).clamp(-1.0, 1.0).acos();
    let w_spike = (1.0 - z_av).max(1e-12);
    let w_edge = (1.0 / (2.0 * tp + 1.0)).min(pi / 8.0);
    let mut cuts: Vec<f64> = Vec::new();
    for s in [1.0, 4.0, 16.0, 64.0] {
        cuts.push(s * w_edge);
        cuts.push(pi - s * w_edge);
    }
    for s in [1.0, 3.0, 10.0, 30.0, 100.0] {
        cuts.push(theta_c - s * w_spike);
        cuts.push(theta_c + s * w_spike);
    }
    cuts.push(theta_c);
    cuts.push(0.0);
    cuts.push(pi);
    cuts.retain(|c| (0.0..=pi).contains(c));
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-13);
    let mut acc = 0.0;
    for pair in cuts.windows(2) {
        acc += integrate_gl(&f, pair[0], pair[1], 48);
    }
    acc / pi
}

/// Diffusion coefficient of a coherent state in the fast-bath regime,
/// analytic route: `D(E) = d0 sqrt(e0^2 - E^2) / (4 j (j+1))`.
pub fn diffusion_coefficient(bath: &BathDerived, e: f64) -> f64 {
    let j = bath.spec.two_j as f64 / 2.0;
    let e0 = bath.e0;
    if e.abs() >= e0 {
        return 0.0;
    }
    bath.combined.d0 * (e0 * e0 - e * e).sqrt() / (4.0 * j * (j + 1.0))
}

/// Mean squared matrix element of the spin-interaction commutator
/// `C = i [S, H_int]` over the full product space, analytic:
/// `E|<a|C|b>|^2 = d0 * hat_delta(0) / (N (2j+1))`.
pub fn commutator_mean_square(bath: &BathDerived, n_env: u64) -> f64 {
    bath.combined.d0 * bath.combined.hat_delta0 / (n_env as f64 * (bath.spec.two_j as f64 + 1.0))
}

/// Golden-rule route to the diffusion coefficient: the commutator
/// mean-square (from [`commutator_mean_square`] or a sampled estimate)
/// converted through the fluctuation-dissipation prefactor
/// `2 pi rho(E) * z_av * (2j+1) / (4 j (j+1))`.
pub fn diffusion_coefficient_golden(
    bath: &BathDerived,
    e: f64,
    n_env: u64,
    mean_sq_c: f64,
) -> f64 {
    let j = bath.spec.two_j as f64 / 2.0;
    let rho = n_env as f64 * bath.spec.density.value(e);
    2.0 * std::f64::consts::PI
        * rho
        * mean_sq_c
        * bath.combined.z_av
        * (bath.spec.two_j as f64 + 1.0)
        / (4.0 * j * (j + 1.0))
}

/// Harmonics of a coherent state evolved in the fast-bath (Markovian)
/// regime: each degree decays exponentially at rate `l (l+1) D(E)`.
pub fn fast_bath_harmonics(bath: &BathDerived, e: f64, t: f64) -> HarmonicSpectrum {
    let two_j = bath.spec.two_j;
    let d = diffusion_coefficient(bath, e);
    let mut w = HarmonicSpectrum::zero(two_j);
    for l in 0..=two_j {
        let decay = (-t * (l * (l + 1)) as f64 * d).exp();
        w.set(l, 0, Complex64::new(coherent_harmonic(two_j, l) * decay, 0.0));
    }
    w
}

/// Energy weight for the randomized (mixture-of-diffusions) profile.
pub enum RandomWeight<'a> {
    /// The bath's own density of states (random initial environment state).
    Density(&'a BathDensity),
    /// Squared amplitudes of a specific initial decomposition, tabulated.
    Amplitude { energies: Vec<f64>, weights: Vec<f64> },
}

/// Planar distribution of a diffusing coherent state as a mixture of
/// Gaussians with energy-dependent diffusion constants:
/// `W(u, t) = int dE weight(E) exp(-|u|^2/(4 D(E) t)) / (4 pi D(E) t)`.
pub fn randomized_profile(bath: &BathDerived, u_abs: f64, t: f64, weight: &RandomWeight) -> f64 {
    let gauss = |d: f64| -> f64 {
        if d <= 0.0 {
            return 0.0;
        }
        (-u_abs * u_abs / (4.0 * d * t)).exp() / (4.0 * std::f64::consts::PI * d * t)
    };
    match weight {
        RandomWeight::Density(density) => match density {
            BathDensity::Semicircle { e0 } => {
                // E = e0 sin(phi): nu dE = (2/pi) cos^2(phi) dphi
                let f = |phi: f64| {
                    let e = e0 * phi.sin();
                    let c = phi.cos();
                    c * c * gauss(diffusion_coefficient(bath, e))
                };
                2.0 / std::f64::consts::PI
                    * integrate_gl(
                        f,
                        -std::f64::consts::FRAC_PI_2,
                        std::f64::consts::FRAC_PI_2,
                        240,
                    )
            }
            BathDensity::Tabulated { .. } => {
                let (lo, hi) = density.support();
                let f = |e: f64| density.value(e) * gauss(diffusion_coefficient(bath, e));
                adaptive_simpson(&f, lo, hi, 1e-12)
            }
        },
        RandomWeight::Amplitude { energies, weights } => {
            // discrete mixture
            energies
                .iter()
                .zip(weights)
                .map(|(&e, &p)| p * gauss(diffusion_coefficient(bath, e)))
                .sum()
        }
    }
}

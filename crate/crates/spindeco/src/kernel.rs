//! The universal per-channel decoherence kernel `M(t, z)` and its scaling
//! limits.
//!
//! `M(t, z)` multiplies each harmonic of the density matrix; `t` is measured
//! in units of the system time `tau0` and `z = Z(l)` encodes the coupling
//! distribution. Three independent computational routes are kept:
//!
//! * a double power series in `t^2` and `z`, summed in exact rational
//!   arithmetic because its terms cancel catastrophically in doubles once
//!   `t` exceeds a few units;
//! * a double trapezoid rule over the unit torus, spectrally convergent for
//!   `|z|` away from 1;
//! * a resummation as `sum_n n^2 z^{n-1} J_n(2t)^2 / t^2`, obtained by
//!   integrating the torus representation mode by mode. Its terms carry no
//!   cancellation in `z >= 0` and the Bessel factors cut the sum off at
//!   `n ~ 2t`, so it is cheap and accurate uniformly in `|z| <= 1`; it is
//!   the default evaluation path.
//!
//! The scaling functions: `psi(tp)` is the `z -> 1` limit at `tp = t (1-z)`
//! fixed, and `phi(t)` the first `z`-derivative at `z = 1`, so that
//! `M(t, 1-eps) = 1 + eps phi(t) + O(eps^2)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::coupling::CouplingDerived;
use crate::error::{Error, Result};
use crate::numeric::{bessel_j_array, integrate_gl};
use crate::su2::with_factorials;

/// Largest `t` the exact series path accepts before flagging
/// non-convergence; callers switch to quadrature or the resummed path.
pub const SERIES_RADIUS: f64 = 12.0;

/// Hard cap on series order.
const SERIES_M_CAP: usize = 700;

/// `1 - z` below which the scaling function replaces the kernel in routed
/// evaluation (when `t (1-z)` is order one or larger).
pub const PSI_SWITCH: f64 = 0.02;

/// Kernel by the literal double series, accumulated in exact rational
/// arithmetic and rounded once at the end.
///
/// Errors with [`Error::NonConvergence`] for `t` beyond [`SERIES_RADIUS`]
/// or if the truncation residual estimate stays above tolerance at the
/// order cap.
pub fn m_series(t: f64, z: f64) -> Result<f64> {
    if !(0.0..=SERIES_RADIUS).contains(&t.abs()) {
        return Err(Error::NonConvergence {
            context: format!("series evaluated at t = {t}, beyond radius {SERIES_RADIUS}"),
        });
    }
    let m_max = ((4.0 * t * t).ceil() as usize).max(40).min(SERIES_M_CAP);
    let t_rat = BigRational::from_float(t).ok_or_else(|| Error::NonConvergence {
        context: "t not finite".into(),
    })?;
    let z_rat = BigRational::from_float(z).ok_or_else(|| Error::NonConvergence {
        context: "z not finite".into(),
    })?;
    let t2 = &t_rat * &t_rat;

    with_factorials(2 * m_max + m_max + 3, |facts| {
        let f = |n: usize| BigRational::from(BigInt::from(facts.factorial(n).unwrap().clone()));
        let mut acc = BigRational::zero();
        let mut t_pow = BigRational::from(BigInt::from(1));
        let mut last_mag = f64::INFINITY;
        let mut negligible_run = 0usize;
        for m in 0..=m_max {
            // inner polynomial sum_n (-z)^n (n+1)^2 (2m)! / ((m-n)! (m+n+2)!)
            let mut inner = BigRational::zero();
            let mut z_pow = BigRational::from(BigInt::from(1));
            let two_m_fact = f(2 * m);
            for n in 0..=m {
                let w = BigRational::from(BigInt::from(((n + 1) * (n + 1)) as i64));
                let term = &two_m_fact * w / (f(m - n) * f(m + n + 2)) * &z_pow;
                if n % 2 == 0 {
                    inner += term;
                } else {
                    inner -= term;
                }
                z_pow *= &z_rat;
            }
            let pref = BigRational::from(BigInt::from(2 * (2 * m as i64 + 1)))
                / (f(m) * f(m + 1));
            let mut term = pref * inner * &t_pow;
            if m % 2 == 1 {
                term = -term;
            }
            last_mag = term.abs().to_f64().unwrap_or(f64::INFINITY);
            acc += term;
            t_pow *= &t2;
            // adaptive truncation: once well past the peak the tail is
            // monotonically negligible
            if m >= 40 && last_mag < 1e-22 {
                negligible_run += 1;
                if negligible_run >= 3 {
                    break;
                }
            } else {
                negligible_run = 0;
            }
        }
        if last_mag > 1e-12 {
            return Err(Error::NonConvergence {
                context: format!(
                    "series residual estimate {last_mag:.2e} at order {m_max} (t = {t})"
                ),
            });
        }
        Ok(acc.to_f64().unwrap_or(f64::NAN))
    })
}

/// Kernel by double trapezoid quadrature over the unit torus.
///
/// Node count grows with `t`; the pole of the summed geometric factor sits a
/// distance `~(1-|z|)` from the torus, so `|z|` must stay at least `10/K`
/// away from 1 ([`Error::Contour`] otherwise).
pub fn m_quadrature(t: f64, z: f64) -> Result<f64> {
    let k = (16.0 * t.abs()).ceil().max(256.0) as usize;
    if z.abs() > 1.0 - 10.0 / k as f64 {
        return Err(Error::Contour {
            context: format!("|z| = {} too close to 1 for {k} nodes", z.abs()),
        });
    }
    // precompute one circle of integrand factors
    let mut w2m1 = Vec::with_capacity(k); // w^2 - 1
    let mut phase = Vec::with_capacity(k); // e^{-2 i t cos(theta)}
    let mut wvals = Vec::with_capacity(k);
    for i in 0..k {
        let theta = 2.0 * std::f64::consts::PI * i as f64 / k as f64;
        let w = num_complex::Complex64::from_polar(1.0, theta);
        wvals.push(w);
        w2m1.push(w * w - 1.0);
        phase.push(num_complex::Complex64::from_polar(1.0, -2.0 * t * theta.cos()));
    }
    let mut acc = num_complex::Complex64::new(0.0, 0.0);
    for i1 in 0..k {
        let a = w2m1[i1] * phase[i1];
        for i2 in 0..k {
            let b = w2m1[i2] * phase[i2].conj();
            acc += a * b / (1.0 - z * wvals[i1] * wvals[i2]);
        }
    }
    Ok(acc.re / (k * k) as f64)
}

/// Default kernel evaluation: the Bessel resummation
/// `M(t, z) = (1/t^2) sum_{n >= 1} n^2 z^{n-1} J_n(2t)^2`.
///
/// Valid for all `t >= 0` and `|z| <= 1`; cost is linear in `t`.
pub fn m_kernel(t: f64, z: f64) -> f64 {
    debug_assert!(z.abs() <= 1.0 + 1e-12);
    if t == 0.0 {
        return 1.0;
    }
    if t.abs() < 1e-7 {
        return 1.0 + t * t * (z - 1.0);
    }
    if z == 1.0 {
        return 1.0;
    }
    let x = 2.0 * t.abs();
    let n_max = (x + 12.0 * x.cbrt() + 30.0).ceil() as usize;
    let j = bessel_j_array(x, n_max);
    let mut acc = 0.0f64;
    let mut z_pow = 1.0f64;
    for n in 1..=n_max {
        let jn = j[n];
        acc += (n * n) as f64 * z_pow * jn * jn;
        z_pow *= z;
    }
    acc / (t * t)
}

/// Scaling limit of the kernel as `z -> 1` at fixed `tp = t (1 - z)`:
/// a one-dimensional exponential average over the band.
pub fn psi(tp: f64) -> f64 {
    debug_assert!(tp >= 0.0);
    // In the form (4/pi) int_0^{pi/2} sin^2(s) exp(-2 tp sin s) ds the mass
    // concentrates near s ~ 1/tp at large tp; a panel split at the decay
    // scale keeps fixed-order Gauss rules accurate for every tp.
    let f = |s: f64| {
        let u = s.sin();
        u * u * (-2.0 * tp * u).exp()
    };
    let half_pi = std::f64::consts::FRAC_PI_2;
    let cut = (20.0 / (2.0 * tp + 1.0)).min(half_pi);
    let mut acc = integrate_gl(f, 0.0, cut, 96);
    if cut < half_pi {
        acc += integrate_gl(f, cut, half_pi, 96);
    }
    4.0 / std::f64::consts::PI * acc
}

/// Power-series route for the scaling function, usable as an independent
/// cross-check at small argument (alternating, cancels beyond `tp ~ 1`).
pub fn psi_series(tp: f64) -> Result<f64> {
    if tp > 4.0 {
        return Err(Error::NonConvergence {
            context: format!("scaling-function series at tp = {tp}"),
        });
    }
    // (2/sqrt(pi)) sum_k (-2 tp)^k G(1.5 + k/2) / (k! G(2 + k/2))
    // with G the gamma function on the half-integer ladder
    let k_max = 120;
    let mut gam = Vec::with_capacity(k_max + 2);
    gam.push(0.5 * std::f64::consts::PI.sqrt()); // Gamma(1.5)
    gam.push(1.0); // Gamma(2)
    for i in 2..k_max + 2 {
        let x = 1.5 + (i as f64 - 2.0) / 2.0;
        let prev = gam[i - 2];
        gam.push(x * prev);
    }
    let mut acc = 0.0f64;
    let mut pow = 1.0f64;
    let mut fact = 1.0f64;
    for k in 0..=k_max {
        if k > 0 {
            pow *= -2.0 * tp;
            fact *= k as f64;
        }
        acc += pow * gam[k] / (fact * gam[k + 1]);
    }
    Ok(2.0 / std::f64::consts::PI.sqrt() * acc)
}

/// First correction of the kernel near `z = 1` at fixed `t`:
/// `M(t, 1 - eps) = 1 + eps phi(t) + O(eps^2)`.
///
/// Series for small `t`, Bessel resummation of the exact `z`-derivative
/// beyond: `phi(t) = -(1/t^2) sum_n (n-1) n^2 J_n(2t)^2`.
pub fn phi(t: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    if t.abs() <= 4.0 {
        // 1 - 1F2(-1/2; 1, 2; -4 t^2) by direct series
        let mut term = 1.0f64;
        let mut f12 = 1.0f64;
        let x = -4.0 * t * t;
        for k in 0..200 {
            let kf = k as f64;
            term *= (kf - 0.5) * x / ((kf + 1.0) * (kf + 1.0) * (kf + 2.0));
            f12 += term;
            if term.abs() < 1e-17 {
                break;
            }
        }
        return 1.0 - f12;
    }
    let x = 2.0 * t.abs();
    let n_max = (x + 12.0 * x.cbrt() + 30.0).ceil() as usize;
    let j = bessel_j_array(x, n_max);
    let mut acc = 0.0f64;
    for n in 2..=n_max {
        let jn = j[n];
        acc += ((n - 1) * n * n) as f64 * jn * jn;
    }
    -acc / (t * t)
}

/// How the time argument of routed evaluation is interpreted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TimeUnit {
    /// `t` is already in units of `tau0` (the default convention).
    Tau0,
    /// `t` is absolute; it is divided by `tau0` internally.
    Absolute,
}

/// Per-channel kernel with route selection.
///
/// The scaling function replaces the full kernel when the channel sits close
/// to the slow-decoherence point (`1 - Z(l)` small) and the scaling variable
/// is order one; everywhere else the resummed kernel is used directly.
pub fn m_hat(derived: &CouplingDerived, l: i64, t: f64, unit: TimeUnit) -> f64 {
    let t_tau0 = match unit {
        TimeUnit::Tau0 => t,
        TimeUnit::Absolute => t / derived.tau0,
    };
    let z = derived.z_at(l);
    if l == 0 || z == 1.0 {
        return 1.0;
    }
    let eps = 1.0 - z;
    if eps > 0.0 && eps < PSI_SWITCH && t_tau0 * eps >= 1.0 {
        return psi(t_tau0 * eps);
    }
    m_kernel(t_tau0, z)
}

/// Evaluation method recorded in a sampled kernel table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelMethod {
    Series,
    Quadrature,
    Resummed,
    PsiScaling,
    Routed,
}

/// Kernel values sampled on a time grid for every channel of a coupling.
pub struct KernelTable {
    /// times in `tau0` units
    pub times: Vec<f64>,
    /// `values[l][i] = M(times[i], Z(l))`
    pub values: Vec<Vec<f64>>,
    pub method: KernelMethod,
}

impl KernelTable {
    /// Routed evaluation over all channels `l = 0..=2j`.
    pub fn build(derived: &CouplingDerived, times: &[f64]) -> Self {
        use rayon::prelude::*;
        let values: Vec<Vec<f64>> = (0..=derived.spec.two_j)
            .into_par_iter()
            .map(|l| {
                times
                    .iter()
                    .map(|&t| m_hat(derived, l, t, TimeUnit::Tau0))
                    .collect()
            })
            .collect();
        Self {
            times: times.to_vec(),
            values,
            method: KernelMethod::Routed,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_coefficients_at_low_order() {
        // order t^2: coefficient -1 at z^0 and +1 at z^1, so that
        // M = 1 + t^2 (z - 1) + O(t^4)
        let c = |m: usize, n: usize| -> f64 {
            let f = |k: usize| -> f64 {
                (1..=k).map(|v| v as f64).product::<f64>().max(1.0)
            };
            let sign = if (m + n) % 2 == 0 { 1.0 } else { -1.0 };
            sign * 2.0 * (2.0 * m as f64 + 1.0) * ((n + 1) * (n + 1)) as f64 * f(2 * m)
                / (f(m) * f(m + 1) * f(m - n) * f(m + n + 2))
        };
        assert_eq!(c(0, 0), 1.0);
        assert_eq!(c(1, 0), -1.0);
        assert_eq!(c(1, 1), 1.0);
        // fixed-m alternating coefficient sums vanish at z = 1 for m >= 1
        for m in 1..=10 {
            let s: f64 = (0..=m).map(|n| c(m, n)).sum();
            assert!(s.abs() < 1e-9, "m={m}: {s}");
        }
    }

    #[test]
    fn kernel_at_zero_time_and_unit_z() {
        for z in [-0.9, -0.3, 0.0, 0.5, 0.99] {
            assert_eq!(m_series(0.0, z).unwrap(), 1.0);
            assert_eq!(m_kernel(0.0, z), 1.0);
        }
        // z = 1 is the identity channel for all times
        for t in [0.5, 3.0, 20.0, 300.0] {
            assert_eq!(m_kernel(t, 1.0), 1.0);
        }
        // the resummation reproduces z = 1 as a sum rule, not a shortcut
        let t = 7.0f64;
        let x = 2.0 * t;
        let n_max = (x + 12.0 * x.cbrt() + 30.0).ceil() as usize;
        let j = bessel_j_array(x, n_max);
        let s: f64 = (1..=n_max).map(|n| (n * n) as f64 * j[n] * j[n]).sum();
        assert!((s / (t * t) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn series_radius_flag() {
        assert!(matches!(
            m_series(SERIES_RADIUS + 1.0, 0.0),
            Err(Error::NonConvergence { .. })
        ));
        assert!(matches!(
            m_quadrature(1.0, 0.999),
            Err(Error::Contour { .. })
        ));
    }

    #[test]
    fn gue_channel_closed_form() {
        // z = 0: M(t, 0) = J_1(2t)^2 / t^2
        for t in [0.3, 1.0, 4.0, 9.0] {
            let j = bessel_j_array(2.0 * t, 4);
            let expect = j[1] * j[1] / (t * t);
            assert!((m_kernel(t, 0.0) - expect).abs() < 1e-14);
            assert!((m_quadrature(t, 0.0).unwrap() - expect).abs() < 1e-10);
        }
    }

    #[test]
    fn three_routes_agree() {
        // series (exact rational) vs torus quadrature vs resummation
        let ts = [0.0, 1.0, 2.0, 3.5, 5.0, 6.5, 8.0];
        let zs = [-0.9, -0.45, 0.0, 0.45, 0.9];
        for &t in &ts {
            for &z in &zs {
                let s = m_series(t, z).unwrap();
                let q = m_quadrature(t, z).unwrap();
                let b = m_kernel(t, z);
                assert!((s - q).abs() < 1e-7, "t={t} z={z}: series {s} quad {q}");
                assert!((s - b).abs() < 1e-9, "t={t} z={z}: series {s} resummed {b}");
            }
        }
    }

    #[test]
    fn kernel_bounded_for_nonnegative_z() {
        for &z in &[0.0, 0.3, 0.7, 0.95, 0.999] {
            let mut t = 0.0;
            while t <= 50.0 {
                let v = m_kernel(t, z);
                assert!(v.abs() <= 1.0 + 1e-9, "t={t} z={z}: {v}");
                t += 0.7;
            }
        }
    }

    #[test]
    fn large_time_tail() {
        // t^-3 envelope with the stated amplitude, oscillation included
        let z = 0.5f64;
        let a_coeff = (1.0 + z) / (1.0 - z).powi(3) / (2.0 * std::f64::consts::PI);
        let b_coeff = (1.0 - z) / (1.0 + z).powi(3) / (2.0 * std::f64::consts::PI);
        for &t in &[25.0f64, 32.0, 40.0] {
            let predict = (a_coeff - b_coeff * (4.0 * t).sin()) / (t * t * t);
            let v = m_kernel(t, z);
            assert!(
                (v - predict).abs() < 0.1 * predict.abs(),
                "t={t}: {v} vs {predict}"
            );
        }
        // oscillatory term dominant near z = -1: the signal oscillates with
        // an amplitude far above the non-oscillatory a/t^3 floor (the
        // asymptotic B coefficient itself converges only as t (1+z) grows)
        let z = -0.9f64;
        let a_coeff = (1.0 + z) / (1.0 - z).powi(3) / (2.0 * std::f64::consts::PI);
        let b_coeff = (1.0 - z) / (1.0 + z).powi(3) / (2.0 * std::f64::consts::PI);
        assert!(b_coeff.abs() > 100.0 * a_coeff.abs());
        let base = 100.0f64;
        let mut max_v = f64::NEG_INFINITY;
        let mut min_v = f64::INFINITY;
        for i in 0..60 {
            let t = base + i as f64 * std::f64::consts::FRAC_PI_2 / 30.0;
            let v = m_kernel(t, z);
            max_v = max_v.max(v);
            min_v = min_v.min(v);
        }
        let floor = a_coeff / (base * base * base);
        assert!(min_v < 0.0 && max_v > 0.0, "no sign oscillation");
        assert!(max_v - min_v > 1e3 * floor, "oscillation {}", max_v - min_v);
    }

    #[test]
    fn psi_properties() {
        assert!((psi(0.0) - 1.0).abs() < 1e-12);
        // initial slope -16/(3 pi)
        let h = 1e-6;
        let slope = (psi(h) - 1.0) / h;
        let expect = -16.0 / (3.0 * std::f64::consts::PI);
        assert!((slope - expect).abs() < 1e-4, "{slope} vs {expect}");
        // series route agrees at small argument
        for tp in [0.05, 0.3, 0.8] {
            assert!((psi_series(tp).unwrap() - psi(tp)).abs() < 1e-10);
        }
        // strictly decreasing and positive
        let mut prev = psi(0.0);
        for i in 1..=40 {
            let v = psi(i as f64 * 0.25);
            assert!(v > 0.0 && v < prev);
            prev = v;
        }
        // algebraic tail: t^3 psi(t) -> 1/pi
        let v = psi(20.0);
        let expect = 1.0 / std::f64::consts::PI / 20.0f64.powi(3);
        assert!((v / expect - 1.0).abs() < 0.15, "{v} vs {expect}");
        let v = psi(50.0);
        let expect = 1.0 / std::f64::consts::PI / 50.0f64.powi(3);
        assert!((v / expect - 1.0).abs() < 0.05, "{v} vs {expect}");
    }

    #[test]
    fn phi_properties() {
        assert_eq!(phi(0.0), 0.0);
        // phi(t) ~ -t^2 at small t
        for t in [0.01, 0.05] {
            assert!((phi(t) / (t * t) + 1.0).abs() < 0.02, "t={t}");
        }
        // series and resummed branches agree across the split
        for t in [2.0, 3.0, 3.9, 4.1] {
            let series = {
                let mut term = 1.0f64;
                let mut f12 = 1.0f64;
                let x = -4.0 * t * t;
                for k in 0..400 {
                    let kf = k as f64;
                    term *= (kf - 0.5) * x / ((kf + 1.0) * (kf + 1.0) * (kf + 2.0));
                    f12 += term;
                }
                1.0 - f12
            };
            assert!((phi(t) - series).abs() < 1e-8, "t={t}: {} vs {series}", phi(t));
        }
    }

    #[test]
    fn phi_matches_kernel_crossover() {
        // M(t, 1-eps) = 1 + eps phi(t) within the genuine second-order
        // remainder, which reaches ~1.3e-4 by t = 10 at eps = 1e-3
        let eps = 1e-3;
        let z = 1.0 - eps;
        let mut t = 0.25;
        while t <= 10.0 {
            let lhs = m_kernel(t, z);
            let rhs = 1.0 + eps * phi(t);
            let bound = if t <= 8.0 { 1e-4 } else { 1.6e-4 };
            assert!((lhs - rhs).abs() < bound, "t={t}: {lhs} vs {rhs}");
            t += 0.25;
        }
    }

    #[test]
    fn phi_large_time_slope_matches_psi_initial_slope() {
        // continuity of the two scaling regimes forces
        // phi(t)/t -> psi'(0) = -16/(3 pi)
        let expect = -16.0 / (3.0 * std::f64::consts::PI);
        for t in [50.0, 100.0, 200.0] {
            let ratio = phi(t) / t;
            assert!(
                (ratio - expect).abs() < 0.02 * expect.abs(),
                "t={t}: {ratio} vs {expect}"
            );
        }
    }

    #[test]
    fn scaling_collapse_near_unit_z() {
        // sup over tp in [0.2, 5] of |M(t, z) - psi(t (1-z))| small for z -> 1
        for &z in &[0.99, 0.995] {
            let eps = 1.0 - z;
            let mut tp = 0.2;
            let mut sup = 0.0f64;
            while tp <= 5.0 {
                let t = tp / eps;
                sup = sup.max((m_kernel(t, z) - psi(tp)).abs());
                tp += 0.2;
            }
            assert!(sup <= 0.02, "z={z}: sup = {sup}");
        }
    }

    #[test]
    fn routed_kernel_and_table() {
        use crate::coupling::{derive, CouplingSpec};
        let spec = CouplingSpec::single_channel(40, 1, 1.0).unwrap();
        let d = derive(&spec).unwrap();
        // l = 0 channel is exactly 1 forever
        for t in [0.0, 5.0, 500.0] {
            assert_eq!(m_hat(&d, 0, t, TimeUnit::Tau0), 1.0);
        }
        // scaling route engages for small 1 - Z(l) at large t
        let z1 = d.z_at(1);
        let eps = 1.0 - z1;
        assert!(eps < PSI_SWITCH);
        let t = 2.0 / eps;
        assert_eq!(m_hat(&d, 1, t, TimeUnit::Tau0), psi(t * eps));
        // absolute-time flag rescales by tau0
        let t_abs = 3.0 * d.tau0;
        assert!(
            (m_hat(&d, 5, t_abs, TimeUnit::Absolute) - m_hat(&d, 5, 3.0, TimeUnit::Tau0)).abs()
                < 1e-15
        );
        let table = KernelTable::build(&d, &[0.0, 1.0, 2.0]);
        assert_eq!(table.values.len(), 41);
        for l in 0..=40 {
            assert!((table.values[l][0] - 1.0).abs() < 1e-12, "M(0) = 1 per channel");
        }
    }
}

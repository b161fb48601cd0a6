//! Per-channel couplings and everything derived from them.
//!
//! The model is parameterized by nonnegative variances `delta_bar(l)` for
//! the interaction in each total-spin channel `l`. Two linear transforms of
//! that distribution control the dynamics: the overall rate `hat_delta(0)`
//! (which sets the time unit `tau0 = 1/sqrt(hat_delta(0))`) and the
//! per-channel ratios `Z(l) = hat_delta(l) / hat_delta(0)` that feed the
//! decoherence kernel. `hat_delta(l)` is a 6-j contraction of the input
//! distribution; for large spins it is evaluated through a stable
//! factorial-ratio sum rather than exact 6-j symbols.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::su2::wigner6j;

/// Model parameterization: spin, per-channel variances, optional finite
/// environment size.
///
/// `delta_bar(l)` is the variance per channel in the convention where the
/// large-environment, large-spin limit holds them fixed. The absolute
/// per-matrix-element variance at finite environment size `N` is
/// `delta(l) = (2j+1) delta_bar(l) / N`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct CouplingSpec {
    pub two_j: i64,
    /// sparse map l -> delta_bar(l); absent entries are zero
    pub delta_bar: BTreeMap<i64, f64>,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub n_env: Option<u64>,
}

impl CouplingSpec {
    pub fn new(two_j: i64, delta_bar: impl IntoIterator<Item = (i64, f64)>) -> Result<Self> {
        let spec = Self {
            two_j,
            delta_bar: delta_bar.into_iter().collect(),
            n_env: None,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Single-channel convenience constructor.
    pub fn single_channel(two_j: i64, l: i64, delta_bar: f64) -> Result<Self> {
        Self::new(two_j, [(l, delta_bar)])
    }

    /// Equal couplings on all channels `0 ..= l0`.
    pub fn equal_up_to(two_j: i64, l0: i64, delta_bar: f64) -> Result<Self> {
        Self::new(two_j, (0..=l0).map(|l| (l, delta_bar)))
    }

    pub fn with_env_size(mut self, n: u64) -> Self {
        self.n_env = Some(n);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.two_j < 0 {
            return Err(Error::InvalidSpec {
                field: "two_j".into(),
                reason: format!("must be >= 0, got {}", self.two_j),
            });
        }
        if self.delta_bar.is_empty() || self.delta_bar.values().all(|&v| v == 0.0) {
            return Err(Error::InvalidSpec {
                field: "delta_bar".into(),
                reason: "at least one channel variance must be positive".into(),
            });
        }
        for (&l, &v) in &self.delta_bar {
            if l < 0 || l > self.two_j {
                return Err(Error::InvalidSpec {
                    field: format!("delta_bar.{l}"),
                    reason: format!("channel index must lie in 0..={}", self.two_j),
                });
            }
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidSpec {
                    field: format!("delta_bar.{l}"),
                    reason: format!("variance must be finite and >= 0, got {v}"),
                });
            }
        }
        if self.n_env == Some(0) {
            return Err(Error::InvalidSpec {
                field: "N".into(),
                reason: "environment size must be positive".into(),
            });
        }
        Ok(())
    }

    pub fn delta_bar_at(&self, l: i64) -> f64 {
        self.delta_bar.get(&l).copied().unwrap_or(0.0)
    }

    /// Largest channel with positive coupling.
    pub fn l_support(&self) -> i64 {
        self.delta_bar
            .iter()
            .filter(|(_, &v)| v > 0.0)
            .map(|(&l, _)| l)
            .max()
            .unwrap_or(0)
    }

    /// Absolute per-component variance `delta(l)` at environment size `n`.
    pub fn delta_abs(&self, l: i64, n: u64) -> f64 {
        (self.two_j as f64 + 1.0) * self.delta_bar_at(l) / n as f64
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let spec: CouplingSpec = serde_json::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serialization")
    }
}

/// `hat_delta(l)` through the stable factorial-ratio sum.
///
/// The `k`-th term of the inner sum over a source channel `l'` is built by
/// incremental ratios, so the evaluation stays in range and is accurate for
/// spins far beyond where exact 6-j arithmetic is practical. The sum
/// truncates at `min(l, l')`, which is small whenever only a few channels
/// couple.
pub fn hat_delta(spec: &CouplingSpec, l: i64) -> f64 {
    let two_j = spec.two_j;
    let mut total = 0.0;
    for (&lp, &db) in &spec.delta_bar {
        if db == 0.0 {
            continue;
        }
        let k_max = lp.min(l);
        // k = 0 term: (l'! l! (2j)!) / (l'! l! (2j+1)!) = 1/(2j+1)
        let mut term = 1.0 / (two_j as f64 + 1.0);
        let mut inner = term;
        for k in 0..k_max {
            let kf = k as f64;
            let ratio = -((lp as f64 + kf + 1.0) * (lp as f64 - kf) * (l as f64 + kf + 1.0)
                * (l as f64 - kf))
                / ((kf + 1.0) * (kf + 1.0) * (two_j as f64 - kf) * (two_j as f64 + kf + 2.0));
            term *= ratio;
            inner += term;
        }
        total += db * (2.0 * lp as f64 + 1.0) * inner;
    }
    (two_j as f64 + 1.0) * total
}

/// `hat_delta(l)` through exact 6-j symbols; the slow reference path used to
/// cross-check the factorial-ratio sum.
pub fn hat_delta_via_6j(spec: &CouplingSpec, l: i64) -> f64 {
    let two_j = spec.two_j;
    let j = HalfInt::from_twice(two_j);
    let mut total = 0.0;
    for (&lp, &db) in &spec.delta_bar {
        if db == 0.0 {
            continue;
        }
        // delta_tilde(l') = (2j+1) delta_bar(l')
        let dt = (two_j as f64 + 1.0) * db;
        let six = wigner6j(
            j,
            j,
            HalfInt::from_int(lp),
            j,
            j,
            HalfInt::from_int(l),
        )
        .to_f64();
        let sign = if (two_j + lp + l) % 2 == 0 { 1.0 } else { -1.0 };
        total += dt * (2.0 * lp as f64 + 1.0) * sign * six;
    }
    total
}

/// The full set of derived coupling quantities.
#[derive(Clone, Debug)]
pub struct CouplingDerived {
    pub spec: CouplingSpec,
    /// `hat_delta(l)` for `l = 0..=2j`
    pub hat_delta: Vec<f64>,
    /// `Z(l) = hat_delta(l)/hat_delta(0)`; `Z(0) = 1` exactly
    pub z: Vec<f64>,
    pub hat_delta0: f64,
    /// mean of `hat_delta(l)` over all `(l, m)` modes; equals `delta_bar(0)`
    pub hat_delta_av: f64,
    /// `hat_delta(0)` with the `l = 0` channel excluded
    pub hat_delta_prime0: f64,
    /// mode-averaged `Z`; equals `delta_bar(0)/hat_delta(0)`
    pub z_av: f64,
    /// curvature of `Z(l)` at small `l`
    pub d0: f64,
    /// time unit: `sqrt(hat_delta(0)) = 1/tau0`
    pub tau0: f64,
    /// decoherence time of a generic state
    pub tau1: f64,
    /// evolution time of a coherent state
    pub tau2: f64,
    /// equilibration time, `j * tau2`
    pub tau3: f64,
}

impl CouplingDerived {
    pub fn z_at(&self, l: i64) -> f64 {
        self.z[l as usize]
    }

    /// `Z'(l)`: the `l = 0`-channel-excluded ratio used when the environment
    /// has its own dynamics.
    pub fn z_prime(&self, l: i64) -> f64 {
        if self.hat_delta_prime0 == 0.0 {
            return if l == 0 { 1.0 } else { f64::NAN };
        }
        (self.hat_delta[l as usize] - self.hat_delta_av) / self.hat_delta_prime0
    }
}

/// Derive every coupling quantity from a spec.
pub fn derive(spec: &CouplingSpec) -> Result<CouplingDerived> {
    spec.validate()?;
    let two_j = spec.two_j;
    let hat: Vec<f64> = (0..=two_j).map(|l| hat_delta(spec, l)).collect();
    let hat0 = hat[0];
    let mut z: Vec<f64> = hat.iter().map(|&h| h / hat0).collect();
    z[0] = 1.0;
    let hat_av = spec.delta_bar_at(0);
    let hat_prime0 = hat0 - hat_av;
    let z_av = hat_av / hat0;
    let d0 = d0(spec);
    let j = two_j as f64 / 2.0;
    let tau0 = hat0.powf(-0.5);
    let tau1 = if z_av < 1.0 {
        tau0 / (1.0 - z_av)
    } else {
        f64::INFINITY
    };
    let tau2 = if d0 > 0.0 { tau0 * j / d0 } else { f64::INFINITY };
    let tau3 = j * tau2;
    Ok(CouplingDerived {
        spec: spec.clone(),
        hat_delta: hat,
        z,
        hat_delta0: hat0,
        hat_delta_av: hat_av,
        hat_delta_prime0: hat_prime0,
        z_av,
        d0,
        tau0,
        tau1,
        tau2,
        tau3,
    })
}

/// The `Z(l)` array alone.
pub fn z_of_l(spec: &CouplingSpec) -> Result<Vec<f64>> {
    Ok(derive(spec)?.z)
}

/// Terminating hypergeometric factor for the scaling limit of `Z(l)`:
/// `F_l(x) = sum_k (-1)^k (l+k)!/( (k!)^2 (l-k)! ) x^{2k}`.
fn f_poly(l: i64, x: f64) -> f64 {
    let mut term = 1.0;
    let mut acc = 1.0;
    for k in 0..l {
        let kf = k as f64;
        term *= -((l as f64 + kf + 1.0) * (l as f64 - kf)) / ((kf + 1.0) * (kf + 1.0)) * x * x;
        acc += term;
    }
    acc
}

/// Scaling limit of `Z(l)` at `x = l/(2j)` for a fixed channel distribution:
/// a polynomial in `x^2`, independent of the spin.
pub fn y_scaling(spec: &CouplingSpec, x: f64) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for (&lp, &db) in &spec.delta_bar {
        if db == 0.0 {
            continue;
        }
        let w = db * (2.0 * lp as f64 + 1.0);
        num += w * f_poly(lp, x);
        den += w;
    }
    num / den
}

/// Small-`l` curvature of `Z(l)`:
/// `Z(l) = 1 - l(l+1) d0 / (4 j (j+1)) + O((l/j)^4)`.
pub fn d0(spec: &CouplingSpec) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for (&lp, &db) in &spec.delta_bar {
        if db == 0.0 {
            continue;
        }
        let w = db * (2.0 * lp as f64 + 1.0);
        if lp >= 1 {
            num += w * (lp * (lp + 1)) as f64;
        }
        den += w;
    }
    num / den
}

/// The four characteristic times `(tau0, tau1, tau2, tau3)`.
pub fn timescales(spec: &CouplingSpec) -> Result<(f64, f64, f64, f64)> {
    let d = derive(spec)?;
    Ok((d.tau0, d.tau1, d.tau2, d.tau3))
}

/// Hilbert-Schmidt norm (per dimension) of the full coupling Hamiltonian:
/// `sqrt(hat_delta(0))`.
pub fn hamiltonian_norm(spec: &CouplingSpec) -> f64 {
    hat_delta(spec, 0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::linear_fit;

    #[test]
    fn gue_limit_all_channels_equal() {
        // equal couplings in every channel reduce to the unstructured
        // ensemble: hat_delta(l > 0) = 0 and Z(l > 0) = 0
        let two_j = 7; // j = 7/2
        let delta = 0.3;
        let spec = CouplingSpec::equal_up_to(two_j, two_j, delta).unwrap();
        let d = derive(&spec).unwrap();
        // hat_delta(0) = (2j+1) N delta_abs = sum (2l+1) delta_bar
        let expect0: f64 = (0..=two_j).map(|l| (2 * l + 1) as f64 * delta).sum();
        assert!((d.hat_delta0 - expect0).abs() < 1e-12 * expect0);
        for l in 1..=two_j {
            assert!(d.hat_delta[l as usize].abs() < 1e-12 * expect0, "l={l}");
            assert!(d.z_at(l).abs() < 1e-12);
        }
    }

    #[test]
    fn hat_delta0_is_weighted_channel_sum() {
        let spec = CouplingSpec::new(9, [(0, 0.4), (2, 1.7), (5, 0.2)]).unwrap();
        let expect: f64 = 0.4 + 5.0 * 1.7 + 11.0 * 0.2;
        assert!((hat_delta(&spec, 0) - expect).abs() < 1e-12);
        assert!((hat_delta_via_6j(&spec, 0) - expect).abs() < 1e-12);
    }

    #[test]
    fn two_formula_paths_agree_spin_half() {
        let spec = CouplingSpec::single_channel(1, 1, 0.8).unwrap();
        // hat_delta(0) = delta_tilde(1) * 3 / 2 with delta_tilde = 2 delta_bar
        let dt = 2.0 * 0.8;
        assert!((hat_delta(&spec, 0) - dt * 1.5).abs() < 1e-12);
        for l in 0..=1 {
            let a = hat_delta(&spec, l);
            let b = hat_delta_via_6j(&spec, l);
            assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0), "l={l}: {a} vs {b}");
        }
    }

    #[test]
    fn racah_path_matches_exact_6j_path() {
        // random-ish specs across spins up to 2j = 80
        for &two_j in &[2i64, 5, 11, 24, 80] {
            let l0 = two_j.min(6);
            let spec = CouplingSpec::new(
                two_j,
                (0..=l0).map(|l| (l, 0.1 + ((l * 37 + 11) % 17) as f64 / 10.0)),
            )
            .unwrap();
            for l in 0..=two_j {
                let fast = hat_delta(&spec, l);
                let exact = hat_delta_via_6j(&spec, l);
                let scale = hat_delta(&spec, 0);
                assert!(
                    (fast - exact).abs() <= 1e-10 * scale,
                    "2j={two_j} l={l}: {fast} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn z_parity_extremes_at_top_channel() {
        // couplings on even channels only: Z(2j) near +1 for large spin
        let two_j = 400;
        let even = CouplingSpec::new(two_j, [(0, 1.0), (2, 1.0), (4, 1.0)]).unwrap();
        let z = z_of_l(&even).unwrap();
        assert!(z[two_j as usize] > 0.9, "even: {}", z[two_j as usize]);
        // odd channels only: Z(2j) near -1
        let odd = CouplingSpec::new(two_j, [(1, 1.0), (3, 1.0)]).unwrap();
        let z = z_of_l(&odd).unwrap();
        assert!(z[two_j as usize] < -0.9, "odd: {}", z[two_j as usize]);
        // single odd channel
        let single = CouplingSpec::single_channel(two_j, 3, 0.7).unwrap();
        let z = z_of_l(&single).unwrap();
        assert!(z[two_j as usize] < -0.9);
    }

    #[test]
    fn y_scaling_limits() {
        let spec = CouplingSpec::single_channel(400, 1, 1.0).unwrap();
        assert!((y_scaling(&spec, 0.0) - 1.0).abs() < 1e-15);
        // single l' = 1 channel: Y(x) = 1 - 2 x^2
        for x in [0.1, 0.5, 0.9] {
            assert!((y_scaling(&spec, x) - (1.0 - 2.0 * x * x)).abs() < 1e-14);
        }
    }

    #[test]
    fn z_approaches_scaling_function_at_large_spin() {
        let two_j = 800; // j = 400
        let spec = CouplingSpec::new(two_j, [(0, 1.0), (1, 1.0), (2, 1.0), (3, 1.0)]).unwrap();
        let z = z_of_l(&spec).unwrap();
        let mut sup = 0.0f64;
        for l in 0..=two_j {
            let x = l as f64 / two_j as f64;
            sup = sup.max((z[l as usize] - y_scaling(&spec, x)).abs());
        }
        assert!(sup < 0.01, "sup |Z - Y| = {sup}");
    }

    #[test]
    fn d0_special_cases() {
        // single channel l = 1: d0 = 1*2*3 / 3 = 2
        let spec = CouplingSpec::single_channel(40, 1, 0.5).unwrap();
        assert_eq!(d0(&spec), 2.0);
        // dominant l = 0 channel suppresses d0
        let with0 = CouplingSpec::new(40, [(0, 100.0), (1, 1.0), (2, 1.0)]).unwrap();
        let without0 = CouplingSpec::new(40, [(1, 1.0), (2, 1.0)]).unwrap();
        assert!(d0(&with0) < 0.1 * d0(&without0));
        // equal couplings up to l0: d0 ~ l0^2 / 2 for large l0
        let l0 = 40;
        let eq = CouplingSpec::equal_up_to(100, l0, 1.0).unwrap();
        let expect = (l0 * l0) as f64 / 2.0;
        assert!((d0(&eq) / expect - 1.0).abs() < 0.15, "{} vs {expect}", d0(&eq));
    }

    #[test]
    fn worked_timescales() {
        // j = 20, single l = 1 channel: (tau0, tau1, tau2) = (1, 1, 10) tau0
        let spec = CouplingSpec::single_channel(40, 1, 1.0).unwrap();
        let (t0, t1, t2, t3) = timescales(&spec).unwrap();
        assert_eq!(t1 / t0, 1.0);
        assert_eq!(t2 / t0, 10.0);
        assert_eq!(t3 / t0, 200.0);
        // general inequality j/(l0(l0+1)) tau1 <= tau2 <= j/2 tau1
        for spec in [
            CouplingSpec::new(40, [(0, 2.0), (1, 0.3), (3, 0.7)]).unwrap(),
            CouplingSpec::new(40, [(1, 1.0), (2, 1.0), (4, 0.2)]).unwrap(),
        ] {
            let (_, t1, t2, _) = timescales(&spec).unwrap();
            let j = 20.0;
            let l0 = spec.l_support() as f64;
            assert!(t2 >= j / (l0 * (l0 + 1.0)) * t1 - 1e-12);
            assert!(t2 <= j / 2.0 * t1 + 1e-12);
        }
        // no interaction channels above l = 0: tau1 infinite
        let pure0 = CouplingSpec::single_channel(10, 0, 1.0).unwrap();
        let (_, t1, t2, _) = timescales(&pure0).unwrap();
        assert!(t1.is_infinite() && t2.is_infinite());
    }

    #[test]
    fn norm_identities() {
        let spec = CouplingSpec::new(9, [(0, 1.3), (1, 0.4), (3, 0.7)]).unwrap();
        let d = derive(&spec).unwrap();
        assert!((hamiltonian_norm(&spec) - d.hat_delta0.sqrt()).abs() < 1e-14);
        // interaction-only norm fraction: |H'|^2/|H|^2 = 1 - z_av
        let prime_sq: f64 = [(1i64, 0.4), (3, 0.7)]
            .iter()
            .map(|&(l, v)| (2 * l + 1) as f64 * v)
            .sum();
        assert!(((prime_sq / d.hat_delta0) - (1.0 - d.z_av)).abs() < 1e-14);
        assert!((d.z_av - 1.3 / d.hat_delta0).abs() < 1e-14);
    }

    #[test]
    fn small_l_expansion_residual_exponent() {
        let two_j = 400; // j = 200
        let spec = CouplingSpec::new(two_j, [(0, 0.5), (1, 1.0), (2, 0.8), (3, 0.6)]).unwrap();
        let d = derive(&spec).unwrap();
        let j = 200.0;
        let mut lx = Vec::new();
        let mut ly = Vec::new();
        for l in 4..=20i64 {
            let approx = 1.0 - (l * (l + 1)) as f64 * d.d0 / (4.0 * j * (j + 1.0));
            let resid = (d.z_at(l) - approx).abs();
            lx.push((l as f64).ln());
            ly.push(resid.ln());
        }
        let (slope, _) = linear_fit(&lx, &ly);
        assert!(slope >= 3.5, "residual exponent {slope}");
    }

    #[test]
    fn z_bounds_on_sampled_specs() {
        // |Z(l)| < 1 strictly for 0 < l <= 2j whenever some l > 0 couples
        let mut lcg: u64 = 0x2545F4914F6CDD1D;
        let mut next = move || {
            lcg = lcg.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((lcg >> 33) as f64) / (2f64.powi(31))
        };
        for case in 0..40 {
            let two_j = 2 + (case % 30) * 4; // up to 2j = 118
            let l0 = 1 + (case % 5);
            let mut chans = vec![(l0, 0.2 + next())];
            for l in 0..l0 {
                let v = next();
                if v > 0.3 {
                    chans.push((l, v));
                }
            }
            let spec = CouplingSpec::new(two_j, chans).unwrap();
            let z = z_of_l(&spec).unwrap();
            assert_eq!(z[0], 1.0);
            for l in 1..=two_j {
                let v = z[l as usize];
                assert!(v.abs() < 1.0, "2j={two_j} l={l}: Z={v}");
            }
        }
    }

    #[test]
    fn spec_json_round_trip_and_validation() {
        let text = r#"{"two_j": 40, "delta_bar": {"1": 1.0, "3": 0.25}, "N": 256}"#;
        let spec = CouplingSpec::parse_json(text).unwrap();
        assert_eq!(spec.two_j, 40);
        assert_eq!(spec.n_env, Some(256));
        assert_eq!(spec.delta_bar_at(3), 0.25);
        let back = CouplingSpec::parse_json(&spec.to_json()).unwrap();
        assert_eq!(back, spec);

        let bad = r#"{"two_j": 4, "delta_bar": {"9": 1.0}}"#;
        let err = CouplingSpec::parse_json(bad).unwrap_err();
        assert!(err.to_string().contains("delta_bar.9"), "{err}");
        let bad = r#"{"two_j": 4, "delta_bar": {"1": -2.0}}"#;
        assert!(CouplingSpec::parse_json(bad).is_err());
        let bad = r#"{"two_j": 4, "delta_bar": {}}"#;
        assert!(CouplingSpec::parse_json(bad).is_err());
    }
}

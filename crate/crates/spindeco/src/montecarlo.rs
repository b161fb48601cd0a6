//! Finite-size Monte Carlo cross-check of the large-environment results.
//!
//! Samples the full random interaction Hamiltonian at finite environment
//! size `N`, evolves the joint system exactly by eigendecomposition, traces
//! the environment out, and compares the empirical per-channel damping
//! against the analytic kernel.

use faer::complex_native::c64;
use faer::Mat;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::coupling::{derive, CouplingSpec};
use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::matrix::{self, CMat};
use crate::su2::clebsch_gordan;
use crate::wigner::{DensityMatrix, WignerTransform};

/// Default cap on the joint Hilbert-space dimension `(2j+1) N`.
pub const DEFAULT_DIM_CAP: usize = 4096;

/// One draw of the random interaction Hamiltonian.
pub struct EnsembleSample {
    pub spec: CouplingSpec,
    pub n_env: usize,
    pub seed: u64,
    /// joint Hamiltonian, spin index major (`row = r * N + alpha`)
    pub h: CMat,
    /// the bare environment block (the `l = 0` part), `N x N`
    pub h_env: CMat,
}

impl EnsembleSample {
    pub fn dim(&self) -> usize {
        (self.spec.two_j as usize + 1) * self.n_env
    }
}

fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen::<f64>().max(1e-300);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Spherical-tensor coupling matrix for channel `(l, m)`:
/// `T^(l,m)_{rs} = (-1)^m sqrt((2l+1)/(2j+1)) <j s; l -m | j r>`.
fn tensor_op(twice_j: i64, l: i64, m: i64) -> CMat {
    let dim = (twice_j + 1) as usize;
    let j = HalfInt::from_twice(twice_j);
    let norm = ((2.0 * l as f64 + 1.0) / (twice_j as f64 + 1.0)).sqrt();
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    Mat::from_fn(dim, dim, |ra, sa| {
        let tr = 2 * ra as i64 - twice_j;
        let ts = 2 * sa as i64 - twice_j;
        if ts - tr != 2 * m {
            return c64::new(0.0, 0.0);
        }
        let cg = clebsch_gordan(
            j,
            HalfInt::from_twice(ts),
            HalfInt::from_int(l),
            HalfInt::from_int(-m),
            j,
            HalfInt::from_twice(tr),
        );
        c64::new(sign * norm * cg.to_f64(), 0.0)
    })
}

/// Draw one Hamiltonian from the invariant Gaussian ensemble.
///
/// Per channel `l` the environment-space coefficients are independent
/// Gaussians of total variance `delta(l) = (2j+1) delta_bar(l) / N` per
/// complex component, Hermitian-paired between `m` and `-m`, so the
/// assembled operator is Hermitian to the last bit.
pub fn sample_hamiltonian(spec: &CouplingSpec, n_env: usize, seed: u64) -> Result<EnsembleSample> {
    sample_hamiltonian_capped(spec, n_env, seed, DEFAULT_DIM_CAP)
}

pub fn sample_hamiltonian_capped(
    spec: &CouplingSpec,
    n_env: usize,
    seed: u64,
    dim_cap: usize,
) -> Result<EnsembleSample> {
    spec.validate()?;
    let two_j = spec.two_j;
    let d_s = (two_j + 1) as usize;
    let dim = d_s * n_env;
    if dim > dim_cap {
        return Err(Error::SizeCap { dim, cap: dim_cap });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut h = matrix::zeros(dim);
    let mut h_env = matrix::zeros(n_env);
    for (&l, &db) in &spec.delta_bar {
        if db == 0.0 {
            continue;
        }
        let delta = spec.delta_abs(l, n_env as u64);
        // m = 0: Hermitian environment coefficient, E[|W_{ab}|^2] = delta
        let mut w0 = matrix::zeros(n_env);
        for a in 0..n_env {
            for b in a..n_env {
                if a == b {
                    w0[(a, a)] = c64::new(delta.sqrt() * standard_normal(&mut rng), 0.0);
                } else {
                    let re = (delta / 2.0).sqrt() * standard_normal(&mut rng);
                    let im = (delta / 2.0).sqrt() * standard_normal(&mut rng);
                    w0[(a, b)] = c64::new(re, im);
                    w0[(b, a)] = c64::new(re, -im);
                }
            }
        }
        let t0 = tensor_op(two_j, l, 0);
        h += matrix::kron(&t0, &w0);
        if l == 0 {
            // the l = 0 tensor is the identity over sqrt(2j+1), so this is
            // the actual environment Hamiltonian appearing in H
            let scale = c64::new(1.0 / (two_j as f64 + 1.0).sqrt(), 0.0);
            for a in 0..n_env {
                for b in 0..n_env {
                    h_env[(a, b)] += w0[(a, b)] * scale;
                }
            }
        }
        // m > 0: unconstrained complex coefficient plus its Hermitian partner
        for m in 1..=l {
            let w = Mat::from_fn(n_env, n_env, |_, _| {
                c64::new(
                    (delta / 2.0).sqrt() * standard_normal(&mut rng),
                    (delta / 2.0).sqrt() * standard_normal(&mut rng),
                )
            });
            let tp = tensor_op(two_j, l, m);
            let block = matrix::kron(&tp, &w);
            // W^(l,-m) = (-1)^m W^(l,m)^dagger makes this pair exactly
            // the block plus its adjoint
            h += &block;
            h += matrix::adjoint(&block);
        }
    }
    Ok(EnsembleSample {
        spec: spec.clone(),
        n_env,
        seed,
        h,
        h_env,
    })
}

/// Eigenvalues of a sample.
pub fn spectrum(sample: &EnsembleSample) -> Vec<f64> {
    matrix::hermitian_eigenvalues(&sample.h)
}

/// Cumulative distribution of the semicircle law on `[-r, r]`.
pub fn semicircle_cdf(x: f64, r: f64) -> f64 {
    if x <= -r {
        return 0.0;
    }
    if x >= r {
        return 1.0;
    }
    0.5 + x * (r * r - x * x).sqrt() / (std::f64::consts::PI * r * r)
        + (x / r).asin() / std::f64::consts::PI
}

/// Sup-norm distance between the empirical eigenvalue CDF and the
/// semicircle on `[-2 sqrt(hat_delta(0)), 2 sqrt(hat_delta(0))]`.
pub fn spectrum_semicircle_distance(eigs: &mut [f64], hat_delta0: f64) -> f64 {
    eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let r = 2.0 * hat_delta0.sqrt();
    let n = eigs.len() as f64;
    let mut worst = 0.0f64;
    for (i, &x) in eigs.iter().enumerate() {
        let f = semicircle_cdf(x, r);
        let lo = i as f64 / n;
        let hi = (i + 1) as f64 / n;
        worst = worst.max((f - lo).abs()).max((f - hi).abs());
    }
    worst
}

/// Initial environment state for exact evolution.
#[derive(Clone, Copy, Debug)]
pub enum EnvInit {
    /// `1/N`, the generic (infinite-temperature) choice.
    MaximallyMixed,
    /// The `k`-th eigenstate of the bare environment block, by ascending
    /// eigenvalue.
    EnvEigenstate(usize),
}

/// Exact reduced evolution of the spin for one sample: eigendecompose once,
/// then trace the environment out at each requested time (absolute units).
pub fn evolve_exact(
    rho_s: &DensityMatrix,
    env_init: EnvInit,
    sample: &EnsembleSample,
    times: &[f64],
) -> Result<Vec<DensityMatrix>> {
    let d_s = (sample.spec.two_j + 1) as usize;
    let n = sample.n_env;
    let dim = sample.dim();
    if rho_s.dim() != d_s {
        return Err(Error::Dimension {
            expected: d_s,
            got: rho_s.dim(),
        });
    }
    let rho_e: CMat = match env_init {
        EnvInit::MaximallyMixed => Mat::from_fn(n, n, |a, b| {
            if a == b {
                c64::new(1.0 / n as f64, 0.0)
            } else {
                c64::new(0.0, 0.0)
            }
        }),
        EnvInit::EnvEigenstate(k) => {
            let (_, u) = matrix::hermitian_eigen(&sample.h_env);
            Mat::from_fn(n, n, |a, b| u[(a, k)] * u[(b, k)].conj())
        }
    };
    let rho0 = matrix::kron(&rho_s.mat, &rho_e);
    let (vals, u) = matrix::hermitian_eigen(&sample.h);
    // P = U^dag rho0 U evolves by pure phases
    let p = matrix::adjoint(&u) * &rho0 * &u;

    // Fast path: contract the environment trace once into per-(r,s) kernels
    //   rho_S(t)_{rs} = sum_ab P_ab e^{-i(l_a - l_b) t} C^{rs}_{ba},
    //   C^{rs} = V_s^dag V_r with V_x the n-row block of U for spin index x,
    // after which every extra time costs O(dim^2) instead of matrix products.
    let kernel_entries = d_s * d_s * dim * dim;
    if kernel_entries <= 32_000_000 {
        let blocks: Vec<CMat> = (0..d_s)
            .map(|x| Mat::from_fn(n, dim, |alpha, a| u[(x * n + alpha, a)]))
            .collect();
        let mut kernels: Vec<CMat> = Vec::with_capacity(d_s * d_s);
        for r in 0..d_s {
            for s in 0..d_s {
                kernels.push(matrix::adjoint(&blocks[s]) * &blocks[r]);
            }
        }
        let mut out = Vec::with_capacity(times.len());
        for &t in times {
            let phase: Vec<Complex64> = vals
                .iter()
                .map(|&ev| Complex64::from_polar(1.0, -ev * t))
                .collect();
            let reduced = Mat::from_fn(d_s, d_s, |r, s| {
                let c = &kernels[r * d_s + s];
                let mut acc = Complex64::new(0.0, 0.0);
                for a in 0..dim {
                    let pa = phase[a];
                    for b in 0..dim {
                        let pab = matrix::to_num(p[(a, b)]);
                        acc += pab * pa * phase[b].conj() * matrix::to_num(c[(b, a)]);
                    }
                }
                matrix::cplx(acc)
            });
            out.push(DensityMatrix::from_matrix(sample.spec.two_j, reduced)?);
        }
        return Ok(out);
    }

    // General path: rebuild the full evolved matrix per time.
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        let phase: Vec<Complex64> = vals
            .iter()
            .map(|&ev| Complex64::from_polar(1.0, -ev * t))
            .collect();
        let rho_t_eig = Mat::from_fn(dim, dim, |a, b| {
            p[(a, b)] * matrix::cplx(phase[a] * phase[b].conj())
        });
        let rho_t = &u * &rho_t_eig * matrix::adjoint(&u);
        let reduced = matrix::partial_trace_env(&rho_t, d_s, n);
        out.push(DensityMatrix::from_matrix(sample.spec.two_j, reduced)?);
    }
    Ok(out)
}

/// Empirical channel factor with a bootstrap error bar.
#[derive(Clone, Debug)]
pub struct ChannelEstimate {
    pub l: i64,
    pub m: i64,
    pub t: f64,
    /// ensemble-averaged ratio `W^(l,m)(t) / W^(l,m)(0)`
    pub ratio: f64,
    /// bootstrap standard error (1 sigma, 1000 resamples)
    pub sigma: f64,
}

/// Ensemble-averaged per-channel damping factors, with bootstrap errors.
///
/// `times` are in absolute units. The per-sample harmonics are averaged in
/// seed order (bit-reproducible), then divided by the initial harmonic.
pub fn empirical_kernel(
    rho_s: &DensityMatrix,
    spec: &CouplingSpec,
    n_env: usize,
    n_samples: usize,
    base_seed: u64,
    times: &[f64],
) -> Result<Vec<ChannelEstimate>> {
    let two_j = spec.two_j;
    let transform = WignerTransform::for_spin(two_j);
    let w0 = transform.to_harmonics(&rho_s.mat)?;

    // per sample, per time, per (l, m): evolved harmonic
    let per_sample: Result<Vec<Vec<Vec<Complex64>>>> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let sample = sample_hamiltonian(spec, n_env, base_seed.wrapping_add(i as u64))?;
            let rhos = evolve_exact(rho_s, EnvInit::MaximallyMixed, &sample, times)?;
            rhos.iter()
                .map(|r| {
                    let w = transform.to_harmonics(&r.mat)?;
                    Ok(w.iter().map(|(_, _, v)| v).collect())
                })
                .collect()
        })
        .collect();
    let per_sample = per_sample?;

    let mode_list: Vec<(i64, i64)> = (0..=two_j).flat_map(|l| (-l..=l).map(move |m| (l, m))).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed ^ 0x9e3779b97f4a7c15);
    let mut out = Vec::new();
    for (ti, &t) in times.iter().enumerate() {
        for (mi, &(l, m)) in mode_list.iter().enumerate() {
            let denom = w0.get(l, m);
            if denom.norm() < 1e-12 {
                continue;
            }
            let draws: Vec<Complex64> = per_sample.iter().map(|s| s[ti][mi]).collect();
            let mean: Complex64 = draws.iter().sum::<Complex64>() / draws.len() as f64;
            let ratio = (mean / denom).re;
            // bootstrap over samples
            let mut boots = Vec::with_capacity(1000);
            for _ in 0..1000 {
                let mut acc = Complex64::new(0.0, 0.0);
                for _ in 0..draws.len() {
                    acc += draws[rng.gen_range(0..draws.len())];
                }
                boots.push((acc / draws.len() as f64 / denom).re);
            }
            let bmean: f64 = boots.iter().sum::<f64>() / boots.len() as f64;
            let var: f64 =
                boots.iter().map(|b| (b - bmean) * (b - bmean)).sum::<f64>() / boots.len() as f64;
            out.push(ChannelEstimate {
                l,
                m,
                t,
                ratio,
                sigma: var.sqrt(),
            });
        }
    }
    Ok(out)
}

/// Monte Carlo check of the commutator-to-norm ratio
/// `|[S, H']|^2 / (|S|^2 |H'|^2)` against the analytic value
/// `d0 / ((1 - z_av) j (j+1))`. Returns `(mc_estimate, analytic)`;
/// the estimate is `NaN` when the interaction part vanishes.
pub fn commutator_norm_check(
    spec: &CouplingSpec,
    n_env: usize,
    n_samples: usize,
    base_seed: u64,
) -> Result<(f64, f64)> {
    let d = derive(spec)?;
    let two_j = spec.two_j;
    let j = two_j as f64 / 2.0;
    let analytic = if d.z_av < 1.0 {
        d.d0 / ((1.0 - d.z_av) * j * (j + 1.0))
    } else {
        f64::NAN
    };
    // strip the l = 0 channel to get the pure interaction part
    let mut prime = spec.clone();
    prime.delta_bar.remove(&0);
    if prime.delta_bar.values().all(|&v| v == 0.0) {
        return Ok((f64::NAN, analytic));
    }
    let spin_full: Vec<CMat> = matrix::spin_operators(two_j)
        .into_iter()
        .map(|s| matrix::kron(&s, &matrix::identity(n_env)))
        .collect();
    let sums: Vec<(f64, f64)> = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let sample =
                sample_hamiltonian(&prime, n_env, base_seed.wrapping_add(i as u64)).unwrap();
            let h_norm_sq = matrix::frobenius_norm_sq(&sample.h);
            let mut c_norm_sq = 0.0;
            for s in &spin_full {
                let c = matrix::commutator(s, &sample.h);
                c_norm_sq += matrix::frobenius_norm_sq(&c);
            }
            (c_norm_sq, h_norm_sq)
        })
        .collect();
    let c_tot: f64 = sums.iter().map(|v| v.0).sum();
    let h_tot: f64 = sums.iter().map(|v| v.1).sum();
    let mc = c_tot / (j * (j + 1.0) * h_tot);
    Ok((mc, analytic))
}

/// Empirical covariance of two matrix elements over an ensemble, for
/// propagator checks: `E[H_{rs}^{ab} H_{tu}^{cd}]`.
pub fn empirical_covariance(
    spec: &CouplingSpec,
    n_env: usize,
    n_samples: usize,
    base_seed: u64,
    idx1: (usize, usize),
    idx2: (usize, usize),
) -> Complex64 {
    let acc: Complex64 = (0..n_samples)
        .into_par_iter()
        .map(|i| {
            let s = sample_hamiltonian(spec, n_env, base_seed.wrapping_add(i as u64)).unwrap();
            matrix::to_num(s.h[(idx1.0, idx1.1)]) * matrix::to_num(s.h[(idx2.0, idx2.1)])
        })
        .sum();
    acc / n_samples as f64
}

/// Analytic propagator of the spin part:
/// `D_{rs,tu} = delta_{s-r,t-u} sum_l delta(l) (2l+1)/(2j+1)
///  <j s; l r-s | j r> <j t; l u-t | j u>`.
pub fn analytic_propagator(
    spec: &CouplingSpec,
    n_env: usize,
    r: i64,
    s: i64,
    t: i64,
    u: i64,
) -> f64 {
    let two_j = spec.two_j;
    if (s - r) != (t - u) {
        return 0.0;
    }
    let jh = HalfInt::from_twice(two_j);
    let mut total = 0.0;
    for (&l, &db) in &spec.delta_bar {
        if db == 0.0 {
            continue;
        }
        let delta = (two_j as f64 + 1.0) * db / n_env as f64;
        // arguments are twice-values; the channel magnetic number r - s is
        // always an integer (twice-value r - s)
        let cg1 = clebsch_gordan(
            jh,
            HalfInt::from_twice(s),
            HalfInt::from_int(l),
            HalfInt::from_twice(r - s),
            jh,
            HalfInt::from_twice(r),
        );
        let cg2 = clebsch_gordan(
            jh,
            HalfInt::from_twice(t),
            HalfInt::from_int(l),
            HalfInt::from_twice(u - t),
            jh,
            HalfInt::from_twice(u),
        );
        total += delta * (2.0 * l as f64 + 1.0) / (two_j as f64 + 1.0) * cg1.to_f64() * cg2.to_f64();
    }
    total
}

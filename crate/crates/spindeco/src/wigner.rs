//! Harmonic decomposition of spin operators and phase-space fields.
//!
//! An operator on the spin-`j` Hilbert space decomposes into irreducible
//! components of total spin `l = 0 ..= 2j`; its `(l, m)` coefficients are at
//! the same time the spherical-harmonic coefficients of its Wigner function
//! on the unit sphere. The map is unitary: `tr(A B^dag)` equals the sum of
//! `W_A conj(W_B)` over `(l, m)` and also the integral of the two fields.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use faer::complex_native::c64;
use faer::Mat;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::halfint::HalfInt;
use crate::matrix::{self, CMat};
use crate::sphere::{Grid, GridSpec, LegendreTable};
use crate::su2::{clebsch_gordan, stretched_weight};

/// Density matrix of the spin: Hermitian, unit trace, positive semidefinite.
#[derive(Clone)]
pub struct DensityMatrix {
    pub twice_j: i64,
    pub mat: CMat,
}

impl DensityMatrix {
    pub fn dim(&self) -> usize {
        (self.twice_j + 1) as usize
    }

    pub fn from_matrix(twice_j: i64, mat: CMat) -> Result<Self> {
        let dim = (twice_j + 1) as usize;
        if mat.nrows() != dim || mat.ncols() != dim {
            return Err(Error::Dimension {
                expected: dim,
                got: mat.nrows(),
            });
        }
        Ok(Self { twice_j, mat })
    }

    /// Pure-state density matrix from amplitudes over `|m>`.
    pub fn from_amplitudes(twice_j: i64, amps: &[Complex64]) -> Result<Self> {
        let dim = (twice_j + 1) as usize;
        if amps.len() != dim {
            return Err(Error::Dimension {
                expected: dim,
                got: amps.len(),
            });
        }
        let mat = Mat::from_fn(dim, dim, |r, s| {
            matrix::cplx(amps[r] * amps[s].conj())
        });
        Ok(Self { twice_j, mat })
    }

    /// Maximally mixed state `1 / (2j+1)`.
    pub fn maximally_mixed(twice_j: i64) -> Self {
        let dim = (twice_j + 1) as usize;
        let mat = Mat::from_fn(dim, dim, |r, s| {
            if r == s {
                c64::new(1.0 / dim as f64, 0.0)
            } else {
                c64::new(0.0, 0.0)
            }
        });
        Self { twice_j, mat }
    }

    pub fn trace(&self) -> Complex64 {
        matrix::trace(&self.mat)
    }

    pub fn purity(&self) -> f64 {
        let sq = &self.mat * &self.mat;
        matrix::trace(&sq).re
    }

    /// Von Neumann entropy; eigenvalues clipped at zero.
    pub fn entropy(&self) -> f64 {
        let vals = matrix::hermitian_eigenvalues(&self.mat);
        -vals
            .iter()
            .filter(|&&p| p > 1e-15)
            .map(|&p| p * p.ln())
            .sum::<f64>()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        matrix::hermitian_eigenvalues(&self.mat)
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn hermiticity_residual(&self) -> f64 {
        matrix::max_abs_diff(&self.mat, &matrix::adjoint(&self.mat))
    }
}

/// Harmonic coefficients `W^(l,m)` of an operator, `0 <= l <= 2j`, `|m| <= l`.
#[derive(Clone, Debug)]
pub struct HarmonicSpectrum {
    pub twice_j: i64,
    coeffs: Vec<Complex64>,
}

impl HarmonicSpectrum {
    pub fn zero(twice_j: i64) -> Self {
        let n = ((twice_j + 1) * (twice_j + 1)) as usize;
        Self {
            twice_j,
            coeffs: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn l_max(&self) -> i64 {
        self.twice_j
    }

    fn index(&self, l: i64, m: i64) -> usize {
        debug_assert!((0..=self.twice_j).contains(&l) && m.abs() <= l);
        (l * l + l + m) as usize
    }

    pub fn get(&self, l: i64, m: i64) -> Complex64 {
        self.coeffs[self.index(l, m)]
    }

    pub fn set(&mut self, l: i64, m: i64, v: Complex64) {
        let i = self.index(l, m);
        self.coeffs[i] = v;
    }

    /// Iterate `(l, m, value)`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, i64, Complex64)> + '_ {
        let tj = self.twice_j;
        (0..=tj).flat_map(move |l| (-l..=l).map(move |m| (l, m, self.get(l, m))))
    }

    /// Sum of `|W|^2`; equals `tr(A^dag A)` by unitarity of the transform.
    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Largest violation of the Hermitian-source constraint
    /// `W^(l,m) = (-1)^m conj(W^(l,-m))`.
    pub fn hermiticity_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for (l, m, v) in self.iter() {
            if m < 0 {
                continue;
            }
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            let partner = sign * self.get(l, -m).conj();
            worst = worst.max((v - partner).norm());
        }
        worst
    }
}

/// Cached transform tables for one value of the spin.
///
/// Entry `(l, m, r)` holds `sqrt((2l+1)/(2j+1)) <j r; l m | j r+m>` computed
/// exactly and rounded once. Both transform directions use the same kernel:
/// with Condon-Shortley phases the inverse kernel
/// `(-1)^m <j s; l -m | j r>` equals the forward one transposed, which the
/// unit tests check coefficient by coefficient.
pub struct WignerTransform {
    pub twice_j: i64,
    // per (l, m): coefficients over the row index of the lower matrix label
    table: Vec<Vec<f64>>,
}

static TRANSFORM_CACHE: OnceLock<Mutex<HashMap<i64, Arc<WignerTransform>>>> = OnceLock::new();

impl WignerTransform {
    /// Get (or build and cache) the table for spin `j = twice_j / 2`.
    pub fn for_spin(twice_j: i64) -> Arc<Self> {
        let cache = TRANSFORM_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(t) = cache.lock().unwrap().get(&twice_j) {
            return t.clone();
        }
        let built = Arc::new(Self::build(twice_j));
        cache
            .lock()
            .unwrap()
            .entry(twice_j)
            .or_insert(built)
            .clone()
    }

    fn build(twice_j: i64) -> Self {
        let j = HalfInt::from_twice(twice_j);
        let dim = (twice_j + 1) as usize;
        let norm_dim = (twice_j + 1) as f64;
        let mut table = Vec::new();

        for l in 0..=twice_j {
            for m in -l..=l {

                // valid rows: r and r+m both in [-j, j]
                let mut col = Vec::with_capacity(dim);
                for a in 0..dim as i64 {
                    let twice_r = 2 * a - twice_j;
                    let twice_s = twice_r + 2 * m;
                    if twice_s.abs() > twice_j {
                        col.push(0.0);
                        continue;
                    }
                    let cg = clebsch_gordan(
                        j,
                        HalfInt::from_twice(twice_r),
                        HalfInt::from_int(l),
                        HalfInt::from_int(m),
                        j,
                        HalfInt::from_twice(twice_s),
                    );
                    let factor = ((2.0 * l as f64 + 1.0) / norm_dim).sqrt();
                    col.push(factor * cg.to_f64());
                }
                table.push(col);

            }
        }
        Self {
            twice_j,
            table,

        }
    }

    fn kernel(&self, l: i64, m: i64) -> &[f64] {
        &self.table[(l * l + l + m) as usize]
    }

    /// Forward transform: harmonic coefficients of a matrix.
    pub fn to_harmonics(&self, a: &CMat) -> Result<HarmonicSpectrum> {
        let dim = (self.twice_j + 1) as usize;
        if a.nrows() != dim || a.ncols() != dim {
            return Err(Error::Dimension {
                expected: dim,
                got: a.nrows(),
            });
        }
        let mut out = HarmonicSpectrum::zero(self.twice_j);
        for l in 0..=self.twice_j {
            for m in -l..=l {
                let k = self.kernel(l, m);
                let mut acc = Complex64::new(0.0, 0.0);
                for (ra, &kv) in k.iter().enumerate() {
                    if kv == 0.0 {
                        continue;
                    }
                    let sa = ra as i64 + m;
                    acc += kv * matrix::to_num(a[(ra, sa as usize)]);
                }
                out.set(l, m, acc);
            }
        }
        Ok(out)
    }

    /// Inverse transform: rebuild the matrix from its harmonics.
    pub fn from_harmonics(&self, w: &HarmonicSpectrum) -> CMat {
        let dim = (self.twice_j + 1) as usize;
        let mut out = matrix::zeros(dim);
        for l in 0..=self.twice_j {
            for m in -l..=l {
                let k = self.kernel(l, m);
                let coeff = w.get(l, m);
                if coeff == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for (ra, &kv) in k.iter().enumerate() {
                    if kv == 0.0 {
                        continue;
                    }
                    let sa = (ra as i64 + m) as usize;
                    out[(ra, sa)] += matrix::cplx(kv * coeff);
                }
            }
        }
        out
    }

    /// The spin-`l` irreducible component of a matrix.
    pub fn spin_component(&self, a: &CMat, l: i64) -> Result<CMat> {
        let w = self.to_harmonics(a)?;
        let mut only = HarmonicSpectrum::zero(self.twice_j);
        for m in -l..=l {
            only.set(l, m, w.get(l, m));
        }
        Ok(self.from_harmonics(&only))
    }
}

/// Which phase-space symbol to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldKind {
    /// Plain harmonic resummation; self-dual under the trace pairing.
    Wigner,
    /// Coherent-state diagonal expectation (nonnegative for density
    /// matrices); harmonics weighted by the stretched coefficient per `l`.
    Husimi,
    /// Dual of Husimi; weights inverted.
    PSymbol,
}

/// Field normalization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum FieldNormalization {
    /// `integral(W_A conj(W_B)) = tr(A B^dag)`.
    #[default]
    Orthonormal,
    /// Scaled by `sqrt(4 pi / (2j+1))`; the Husimi field then equals the
    /// coherent-state expectation `<n|A|n>` pointwise.
    Physical,
}

/// A real-valued field sampled on a phase-space grid.
#[derive(Clone)]
pub struct PhaseSpaceField {
    pub twice_j: i64,
    pub kind: FieldKind,
    pub normalization: FieldNormalization,
    pub grid_spec: GridSpec,
    /// coordinate pair per node (theta/phi or plane x/y, per grid)
    pub coords: Vec<(f64, f64)>,
    pub values: Vec<f64>,
    /// quadrature weights (zero for grids without a rule)
    pub weights: Vec<f64>,
    /// time stamp carried through to serialized output
    pub time: Option<f64>,
}

impl PhaseSpaceField {
    /// Integral of the field against another over the sphere. Requires a
    /// quadrature grid.
    pub fn integrate_against(&self, other: &PhaseSpaceField) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .zip(&self.weights)
            .map(|((a, b), w)| a * b * w)
            .sum()
    }

    pub fn integral(&self) -> f64 {
        self.values.iter().zip(&self.weights).map(|(v, w)| v * w).sum()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Per-degree weight applied to the harmonics for a given symbol.
fn kind_weights(twice_j: i64, kind: FieldKind) -> Vec<f64> {
    (0..=twice_j)
        .map(|l| match kind {
            FieldKind::Wigner => 1.0,
            FieldKind::Husimi => stretched_weight(twice_j, l),
            FieldKind::PSymbol => 1.0 / stretched_weight(twice_j, l),
        })
        .collect()
}

/// Evaluate a phase-space field from a harmonic spectrum on a grid.
pub fn field(
    w: &HarmonicSpectrum,
    grid: &Grid,
    kind: FieldKind,
    normalization: FieldNormalization,
) -> PhaseSpaceField {
    let twice_j = w.twice_j;
    let l_max = twice_j as usize;
    let weights_l = kind_weights(twice_j, kind);
    let norm = match normalization {
        FieldNormalization::Orthonormal => 1.0,
        FieldNormalization::Physical => {
            (4.0 * std::f64::consts::PI / (twice_j as f64 + 1.0)).sqrt()
        }
    };

    let values: Vec<f64> = grid
        .angles
        .iter()
        .map(|&(theta, phi)| {
            let leg = LegendreTable::build(l_max, theta.cos(), theta.sin());
            let mut acc = Complex64::new(0.0, 0.0);
            for l in 0..=twice_j {
                let cl = weights_l[l as usize];
                // m = 0
                acc += cl * w.get(l, 0) * leg.get(l as usize, 0);
                for m in 1..=l {
                    let p = leg.get(l as usize, m as usize);
                    let e = Complex64::from_polar(1.0, m as f64 * phi);
                    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                    // Y_l^m = p e^{i m phi},  Y_l^{-m} = sign * p e^{-i m phi}
                    acc += cl * p * (w.get(l, m) * e + w.get(l, -m) * sign * e.conj());
                }
            }
            acc.re * norm
        })
        .collect();

    PhaseSpaceField {
        twice_j,
        kind,
        normalization,
        grid_spec: grid.spec.clone(),
        coords: grid.coords.clone(),
        values,
        weights: grid.weights.clone(),
        time: None,
    }
}

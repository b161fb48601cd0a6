//! Orthonormal spherical harmonics and phase-space grids on the unit sphere.
//!
//! Harmonics are normalized so that the integral of `Y_l^m conj(Y_l'^m')`
//! over the sphere (measure `sin(theta) dtheta dphi`) is a Kronecker delta,
//! with the Condon-Shortley phase carried by the Legendre recurrence.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::numeric::gauss_legendre;

/// Fully normalized associated Legendre values `P~_l^m(cos theta)` for all
/// `0 <= m <= l <= l_max`, such that `Y_l^m = P~_l^m(cos θ) e^{i m φ}`.
/// Stable upward recurrence, usable to degree several thousand.
pub struct LegendreTable {
    l_max: usize,
    // row-major by l: entry (l, m) at l*(l+1)/2 + m
    vals: Vec<f64>,
}

impl LegendreTable {
    pub fn build(l_max: usize, cos_theta: f64, sin_theta: f64) -> Self {
        let mut vals = vec![0.0; (l_max + 1) * (l_max + 2) / 2];
        let idx = |l: usize, m: usize| l * (l + 1) / 2 + m;
        vals[0] = (1.0 / (4.0 * std::f64::consts::PI)).sqrt();
        // diagonal: P~_m^m = -sqrt((2m+1)/(2m)) sin(theta) P~_{m-1}^{m-1}
        for m in 1..=l_max {
            let f = -((2.0 * m as f64 + 1.0) / (2.0 * m as f64)).sqrt();
            vals[idx(m, m)] = f * sin_theta * vals[idx(m - 1, m - 1)];
        }
        // first superdiagonal: P~_{m+1}^m = sqrt(2m+3) cos(theta) P~_m^m
        for m in 0..l_max {
            vals[idx(m + 1, m)] = (2.0 * m as f64 + 3.0).sqrt() * cos_theta * vals[idx(m, m)];
        }
        // upward in l
        for m in 0..=l_max {
            for l in (m + 2)..=l_max {
                let lf = l as f64;
                let mf = m as f64;
                let a = ((4.0 * lf * lf - 1.0) / (lf * lf - mf * mf)).sqrt();
                let b = (((lf - 1.0) * (lf - 1.0) - mf * mf) / (4.0 * (lf - 1.0) * (lf - 1.0) - 1.0))
                    .sqrt();
                vals[idx(l, m)] = a * (cos_theta * vals[idx(l - 1, m)] - b * vals[idx(l - 2, m)]);
            }
        }
        Self { l_max, vals }
    }

    /// `P~_l^m` for `0 <= m <= l`.
    pub fn get(&self, l: usize, m: usize) -> f64 {
        debug_assert!(m <= l && l <= self.l_max);
        self.vals[l * (l + 1) / 2 + m]
    }
}

/// `Y_l^m(theta, phi)` for a single `(l, m)`, `m` of either sign.
pub fn spherical_harmonic(l: usize, m: i64, theta: f64, phi: f64) -> Complex64 {
    let table = LegendreTable::build(l, theta.cos(), theta.sin());
    let ma = m.unsigned_abs() as usize;
    let p = table.get(l, ma);
    let phase = Complex64::from_polar(1.0, ma as f64 * phi);
    if m >= 0 {
        p * phase
    } else {
        // Y_l^{-m} = (-1)^m conj(Y_l^m)
        let sign = if ma % 2 == 0 { 1.0 } else { -1.0 };
        sign * p * phase.conj()
    }
}

/// How a planar radius maps back to a polar angle on the sphere.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum RadialMap {
    /// Genuine stereographic projection, `r = 2 tan(theta/2)`.
    #[default]
    TanHalf,
    /// Monotone variant `r = 2 arctan(theta/2)`; kept selectable because the
    /// fields only care that the radial map is monotone.
    ArctanHalf,
}

impl RadialMap {
    /// Polar angle for a planar radius; `None` when the radius is outside the
    /// image of the map.
    pub fn theta(self, r: f64) -> Option<f64> {
        match self {
            RadialMap::TanHalf => Some(2.0 * (r / 2.0).atan()),
            RadialMap::ArctanHalf => {
                // inverse of r = 2 arctan(theta/2): theta = 2 tan(r/2),
                // defined for r < pi and theta <= pi
                if r >= std::f64::consts::PI {
                    return None;
                }
                let th = 2.0 * (r / 2.0).tan();
                (th <= std::f64::consts::PI).then_some(th)
            }
        }
    }

    /// Planar radius for a polar angle.
    pub fn radius(self, theta: f64) -> f64 {
        match self {
            RadialMap::TanHalf => 2.0 * (theta / 2.0).tan(),
            RadialMap::ArctanHalf => 2.0 * (theta / 2.0).atan(),
        }
    }
}

/// Specification of the grid a field is sampled on.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub enum GridSpec {
    /// Gauss-Legendre nodes in `cos(theta)` times a uniform `phi` grid; the
    /// natural quadrature grid for band-limited fields.
    Sphere { n_theta: usize, n_phi: usize },
    /// Square stereographic-plane grid, `n x n` points over `[-r_max, r_max]`,
    /// nodes with radius beyond `r_max` masked out.
    Stereographic {
        n: usize,
        r_max: f64,
        map: RadialMap,
    },
}

/// A concrete list of sample points, plus quadrature weights when the grid
/// supports exact integration.
pub struct Grid {
    pub spec: GridSpec,
    /// (theta, phi) per node
    pub angles: Vec<(f64, f64)>,
    /// planar or angular coordinate pair written to CSV per node
    pub coords: Vec<(f64, f64)>,
    /// quadrature weight per node for integrals over the sphere;
    /// zero for grids without a rule
    pub weights: Vec<f64>,
}

impl Grid {
    /// Quadrature grid integrating spherical polynomials up to the given
    /// harmonic degree exactly: `n_theta = degree + 1` Gauss nodes and
    /// `n_phi >= degree + 1` uniform azimuthal nodes.
    pub fn sphere_for_degree(degree: usize) -> Self {
        Self::sphere(degree + 1, (degree + 1).max(4))
    }

    pub fn sphere(n_theta: usize, n_phi: usize) -> Self {
        let (xs, ws) = gauss_legendre(n_theta);
        let dphi = 2.0 * std::f64::consts::PI / n_phi as f64;
        let mut angles = Vec::with_capacity(n_theta * n_phi);
        let mut coords = Vec::with_capacity(n_theta * n_phi);
        let mut weights = Vec::with_capacity(n_theta * n_phi);
        for (x, w) in xs.iter().zip(&ws) {
            let theta = x.acos();
            for k in 0..n_phi {
                let phi = k as f64 * dphi;
                angles.push((theta, phi));
                coords.push((theta, phi));
                weights.push(w * dphi);
            }
        }
        Self {
            spec: GridSpec::Sphere { n_theta, n_phi },
            angles,
            coords,
            weights,
        }
    }

    pub fn stereographic(n: usize, r_max: f64, map: RadialMap) -> Self {
        let mut angles = Vec::new();
        let mut coords = Vec::new();
        for iy in 0..n {
            for ix in 0..n {
                let x = if n == 1 {
                    0.0
                } else {
                    -r_max + 2.0 * r_max * ix as f64 / (n - 1) as f64
                };
                let y = if n == 1 {
                    0.0
                } else {
                    -r_max + 2.0 * r_max * iy as f64 / (n - 1) as f64
                };
                let r = (x * x + y * y).sqrt();
                if r > r_max {
                    continue; // masked
                }
                let Some(theta) = map.theta(r) else { continue };
                let phi = y.atan2(x);
                angles.push((theta, phi));
                coords.push((x, y));
            }
        }
        let weights = vec![0.0; angles.len()];
        Self {
            spec: GridSpec::Stereographic { n, r_max, map },
            angles,
            coords,
            weights,
        }
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    pub fn has_quadrature(&self) -> bool {
        matches!(self.spec, GridSpec::Sphere { .. })
    }
}

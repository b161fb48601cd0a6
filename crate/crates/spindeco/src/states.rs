//! Initial spin states: coherent, cat superpositions and random pure states.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::su2::with_factorials;
use crate::wigner::DensityMatrix;

/// A pure spin state: unit-norm amplitudes over `|m>`, `m = -j ..= j`
/// (row `a` holds `m = a - j`).
#[derive(Clone, Debug)]
pub struct SpinState {
    pub twice_j: i64,
    pub amps: Vec<Complex64>,
}

/// Serialized form: amplitude list as `(re, im)` pairs.
#[derive(Serialize, Deserialize)]
struct SpinStateWire {
    two_j: i64,
    amplitudes: Vec<(f64, f64)>,
}

impl SpinState {
    pub fn dim(&self) -> usize {
        (self.twice_j + 1) as usize
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    fn normalized(twice_j: i64, mut amps: Vec<Complex64>) -> Self {
        let n = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in amps.iter_mut() {
            *a /= n;
        }
        Self { twice_j, amps }
    }

    pub fn density_matrix(&self) -> DensityMatrix {
        DensityMatrix::from_amplitudes(self.twice_j, &self.amps).expect("consistent dims")
    }

    pub fn inner(&self, other: &SpinState) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn to_json(&self) -> String {
        let wire = SpinStateWire {
            two_j: self.twice_j,
            amplitudes: self.amps.iter().map(|a| (a.re, a.im)).collect(),
        };
        serde_json::to_string_pretty(&wire).expect("state serialization")
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let wire: SpinStateWire = serde_json::from_str(text)?;
        let dim = (wire.two_j + 1) as usize;
        if wire.amplitudes.len() != dim {
            return Err(Error::Dimension {
                expected: dim,
                got: wire.amplitudes.len(),
            });
        }
        Ok(Self {
            twice_j: wire.two_j,
            amps: wire
                .amplitudes
                .iter()
                .map(|&(re, im)| Complex64::new(re, im))
                .collect(),
        })
    }
}

/// Coherent state pointing along `(theta, phi)`:
/// binomial amplitudes `sqrt(C(2j, j+m)) cos^{j+m}(theta/2) sin^{j-m}(theta/2)
/// e^{-i m phi}`.
pub fn coherent(twice_j: i64, theta: f64, phi: f64) -> SpinState {
    let dim = (twice_j + 1) as usize;
    let c = (theta / 2.0).cos();
    let s = (theta / 2.0).sin();
    let ln_binoms: Vec<f64> = with_factorials(twice_j as usize, |facts| {
        (0..dim)
            .map(|a| {
                facts.ln_factorial(twice_j as usize).unwrap()
                    - facts.ln_factorial(a).unwrap()
                    - facts.ln_factorial(twice_j as usize - a).unwrap()
            })
            .collect()
    });
    let amps: Vec<Complex64> = (0..dim)
        .map(|a| {
            // a = j + m
            let jm = a as f64; // j + m
            let jmm = (twice_j as usize - a) as f64; // j - m
            let m = a as f64 - twice_j as f64 / 2.0;
            let mag = (0.5 * ln_binoms[a]).exp() * c.powf(jm) * s.powf(jmm);
            mag * Complex64::from_polar(1.0, -m * phi)
        })
        .collect();
    SpinState::normalized(twice_j, amps)
}

/// Two-state superposition of coherent states, normalized.
pub fn cat2(
    twice_j: i64,
    n1: (f64, f64),
    n2: (f64, f64),
    c1: Complex64,
    c2: Complex64,
) -> SpinState {
    let a = coherent(twice_j, n1.0, n1.1);
    let b = coherent(twice_j, n2.0, n2.1);
    let amps: Vec<Complex64> = a
        .amps
        .iter()
        .zip(&b.amps)
        .map(|(x, y)| c1 * x + c2 * y)
        .collect();
    SpinState::normalized(twice_j, amps)
}

/// Three-state superposition of coherent states, normalized.
pub fn cat3(
    twice_j: i64,
    dirs: [(f64, f64); 3],
    coeffs: [Complex64; 3],
) -> SpinState {
    let states: Vec<SpinState> = dirs
        .iter()
        .map(|&(th, ph)| coherent(twice_j, th, ph))
        .collect();
    let dim = (twice_j + 1) as usize;
    let amps: Vec<Complex64> = (0..dim)
        .map(|i| {
            coeffs
                .iter()
                .zip(&states)
                .map(|(c, s)| c * s.amps[i])
                .sum()
        })
        .collect();
    SpinState::normalized(twice_j, amps)
}

/// Random pure state: independent complex-normal amplitudes, normalized.
/// Deterministic in the seed.
pub fn random_state(twice_j: i64, seed: u64) -> SpinState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = (twice_j + 1) as usize;
    let amps: Vec<Complex64> = (0..dim)
        .map(|_| {
            // Box-Muller pairs
            let u1: f64 = rng.gen::<f64>().max(1e-300);
            let u2: f64 = rng.gen();
            let r = (-2.0 * u1.ln()).sqrt();
            Complex64::new(
                r * (2.0 * std::f64::consts::PI * u2).cos(),
                r * (2.0 * std::f64::consts::PI * u2).sin(),
            )
        })
        .collect();
    SpinState::normalized(twice_j, amps)
}

/// Closed-form harmonic coefficients `W^(l,0)` of the highest-weight
/// projector `|j><j|` (all other `m` vanish):
/// `sqrt((2j)!^2 (2l+1) / ((2j+l+1)! (2j-l)!))`.
/// Usable at spins far beyond where a full transform table is practical.
pub fn coherent_harmonic(twice_j: i64, l: i64) -> f64 {
    with_factorials((2 * twice_j + 2) as usize, |facts| {
        let ln = 2.0 * facts.ln_factorial(twice_j as usize).unwrap()
            + (2.0 * l as f64 + 1.0).ln()
            - facts.ln_factorial((twice_j + l + 1) as usize).unwrap()
            - facts.ln_factorial((twice_j - l) as usize).unwrap();
        (0.5 * ln).exp()
    })
}

/// Large-spin (Stirling) asymptote of [`coherent_harmonic`]:
/// `sqrt((2l+1)/(2j)) exp(-l^2/(4j))`, valid for `l^3 << j^2`.
pub fn coherent_harmonic_asymptotic(twice_j: i64, l: i64) -> f64 {
    let j = twice_j as f64 / 2.0;
    ((2.0 * l as f64 + 1.0) / twice_j as f64).sqrt() * (-(l * l) as f64 / (4.0 * j)).exp()
}

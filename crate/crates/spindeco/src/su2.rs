//! Exact Clebsch-Gordan and Wigner 6-j coefficients.
//!
//! The alternating sums in the closed-form expressions cancel catastrophically
//! in floating point once the spins grow, so everything here is computed with
//! big-integer factorials and exact rationals, and only converted to `f64` at
//! the boundary. Values are carried as a sign times the square root of an
//! exact nonnegative rational.
//!
//! Phases follow the Condon-Shortley convention throughout.

use std::cmp::Ordering;
use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::halfint::{triangle, valid_jm, HalfInt};

/// Hard cap on factorial arguments; far above anything a desk-scale spin needs.
const FACTORIAL_CAP: usize = 100_000;

/// Exact factorials up to a fixed bound, with cached natural logs.
pub struct FactorialTable {
    facts: Vec<BigUint>,
    ln: Vec<f64>,
}

impl FactorialTable {
    /// Build a table of `0! ..= n_max!`.
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max > FACTORIAL_CAP {
            return Err(Error::Capacity {
                requested: n_max,
                capacity: FACTORIAL_CAP,
            });
        }
        let mut facts = Vec::with_capacity(n_max + 1);
        let mut ln = Vec::with_capacity(n_max + 1);
        let mut acc = BigUint::one();
        let mut ln_acc = 0.0f64;
        facts.push(acc.clone());
        ln.push(0.0);
        for n in 1..=n_max {
            acc *= n;
            ln_acc += (n as f64).ln();
            facts.push(acc.clone());
            ln.push(ln_acc);
        }
        Ok(Self { facts, ln })
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    /// Exact `n!`.
    pub fn factorial(&self, n: usize) -> Result<&BigUint> {
        self.facts.get(n).ok_or(Error::Capacity {
            requested: n,
            capacity: self.facts.len().saturating_sub(1),
        })
    }

    /// Cached `ln(n!)`.
    pub fn ln_factorial(&self, n: usize) -> Result<f64> {
        self.ln.get(n).copied().ok_or(Error::Capacity {
            requested: n,
            capacity: self.ln.len().saturating_sub(1),
        })
    }
}

/// Build an exact factorial table with cached logs.
pub fn log_factorial_table(n_max: usize) -> Result<FactorialTable> {
    FactorialTable::new(n_max)
}

// Shared, growable table so coefficient calls need no explicit table argument.
// Grown in chunks; immutable once handed out would be nicer but a short lock
// around lookups is plenty at the sizes involved.
pub(crate) fn with_factorials<T>(min_len: usize, f: impl FnOnce(&FactorialTable) -> T) -> T {
    static TABLE: OnceLock<Mutex<FactorialTable>> = OnceLock::new();
    let cell = TABLE.get_or_init(|| Mutex::new(FactorialTable::new(128).expect("small table")));
    let mut guard = cell.lock().expect("factorial table lock");
    if guard.len() < min_len + 1 {
        let target = (min_len + 1).next_power_of_two().max(128);
        *guard = FactorialTable::new(target.min(FACTORIAL_CAP)).expect("factorial growth");
    }
    f(&guard)
}

/// A value of the form `sign * sqrt(radicand)` with an exact rational radicand.
///
/// Stored as the signed rational `sign * radicand`, so equality and hashing
/// are plain rational comparisons.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedSqrtRational(BigRational);

impl SignedSqrtRational {
    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    /// Construct `c * sqrt(r)` from a rational coefficient and radicand.
    pub fn new(coeff: BigRational, radicand: BigRational) -> Self {
        let signed = match coeff.cmp(&BigRational::zero()) {
            Ordering::Less => -(coeff.clone() * coeff * radicand),
            Ordering::Equal => BigRational::zero(),
            Ordering::Greater => coeff.clone() * coeff * radicand,
        };
        Self(signed)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Sign of the value: -1, 0 or +1.
    pub fn signum(&self) -> i32 {
        match self.0.cmp(&BigRational::zero()) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    /// The exact radicand `value^2`, in lowest terms.
    pub fn radicand(&self) -> BigRational {
        self.0.abs()
    }

    /// Signed square, `sign * value^2`.
    pub fn signed_square(&self) -> &BigRational {
        &self.0
    }

    /// Convert to double precision. Robust for radicands whose numerator or
    /// denominator overflow `f64` individually: the ratio is rescaled by a
    /// power of two before the square root is taken.
    pub fn to_f64(&self) -> f64 {
        let sign = self.signum() as f64;
        if sign == 0.0 {
            return 0.0;
        }
        let rad = self.0.abs();
        let (m_num, e_num) = big_to_mantissa_exp(rad.numer());
        let (m_den, e_den) = big_to_mantissa_exp(rad.denom());
        let mut e = e_num - e_den;
        let mut m = m_num / m_den;
        // make the power-of-two exponent even so its square root is exact
        if e % 2 != 0 {
            m *= 2.0;
            e -= 1;
        }
        sign * m.sqrt() * (e as f64 / 2.0).exp2()
    }
}

impl std::ops::Mul for SignedSqrtRational {
    type Output = SignedSqrtRational;
    fn mul(self, rhs: SignedSqrtRational) -> SignedSqrtRational {
        SignedSqrtRational(self.0 * rhs.0)
    }
}

/// Split a big integer into `mantissa * 2^exp` with mantissa in `[1, 2^53)`.
fn big_to_mantissa_exp(x: &BigInt) -> (f64, i64) {
    let mag = x.magnitude();
    let bits = mag.bits();
    if bits <= 53 {
        let v: u64 = mag.try_into().unwrap_or(u64::MAX);
        return (v as f64, 0);
    }
    let shift = bits - 53;
    let top: BigUint = mag >> shift;
    let v: u64 = top.try_into().unwrap_or(u64::MAX);
    (v as f64, shift as i64)
}

fn big_rational_from_facts(
    table: &FactorialTable,
    numer: &[usize],
    denom: &[usize],
) -> BigRational {
    let mut num = BigUint::one();
    for &n in numer {
        num *= table.factorial(n).expect("table sized by caller");
    }
    let mut den = BigUint::one();
    for &n in denom {
        den *= table.factorial(n).expect("table sized by caller");
    }
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Squared triangle coefficient `(a+b-c)! (a-b+c)! (-a+b+c)! / (a+b+c+1)!`
/// for a triad already known to satisfy the triangle condition.
fn triangle_norm_sq(table: &FactorialTable, a: HalfInt, b: HalfInt, c: HalfInt) -> BigRational {
    let p1 = (a + b - c).plus_as_int(HalfInt::ZERO).unwrap() as usize;
    let p2 = (a - b + c).plus_as_int(HalfInt::ZERO).unwrap() as usize;
    let p3 = (b + c - a).plus_as_int(HalfInt::ZERO).unwrap() as usize;
    let q = (a + b + c).plus_as_int(HalfInt::from_int(1)).unwrap() as usize;
    big_rational_from_facts(table, &[p1, p2, p3], &[q])
}

/// Exact Clebsch-Gordan coefficient `<j1 m1; j2 m2 | j3 m3>`.
///
/// Out-of-domain arguments (parity mismatch, `|m| > j`, `m1+m2 != m3`,
/// triangle violation) return exact zero rather than an error.
pub fn clebsch_gordan(
    j1: HalfInt,
    m1: HalfInt,
    j2: HalfInt,
    m2: HalfInt,
    j3: HalfInt,
    m3: HalfInt,
) -> SignedSqrtRational {
    if !valid_jm(j1, m1) || !valid_jm(j2, m2) || !valid_jm(j3, m3) {
        return SignedSqrtRational::zero();
    }
    if (m1 + m2) != m3 || !triangle(j1, j2, j3) {
        return SignedSqrtRational::zero();
    }

    // All of these are nonnegative integers once the checks above pass.
    let j1j2_minus_j3 = (j1 + j2 - j3).plus_as_int(HalfInt::ZERO).unwrap();
    let j1_minus_m1 = j1.minus_as_int(m1).unwrap();
    let j1_plus_m1 = j1.plus_as_int(m1).unwrap();
    let j2_minus_m2 = j2.minus_as_int(m2).unwrap();
    let j2_plus_m2 = j2.plus_as_int(m2).unwrap();
    let j3_minus_m3 = j3.minus_as_int(m3).unwrap();
    let j3_plus_m3 = j3.plus_as_int(m3).unwrap();
    // k-sum bounds; these two may be negative
    let a1 = (j2 - j3 - m1).plus_as_int(HalfInt::ZERO).unwrap();
    let a2 = (j1 - j3 + m2).plus_as_int(HalfInt::ZERO).unwrap();

    let k_min = 0i64.max(a1).max(a2);
    let k_max = j1j2_minus_j3.min(j1_minus_m1).min(j2_plus_m2);
    if k_min > k_max {
        return SignedSqrtRational::zero();
    }

    let max_fact = ((j1 + j2 + j3).plus_as_int(HalfInt::from_int(1)).unwrap() as usize).max(16);
    with_factorials(max_fact, |table| {
        let mut series = BigRational::zero();
        for k in k_min..=k_max {
            let denom = [
                k as usize,
                (j1j2_minus_j3 - k) as usize,
                (j1_minus_m1 - k) as usize,
                (j2_plus_m2 - k) as usize,
                (k - a1) as usize,
                (k - a2) as usize,
            ];
            let term = big_rational_from_facts(table, &[], &denom);
            if k % 2 == 0 {
                series += term;
            } else {
                series -= term;
            }
        }
        if series.is_zero() {
            return SignedSqrtRational::zero();
        }
        let mut radicand = triangle_norm_sq(table, j1, j2, j3);
        radicand *= BigRational::from(BigInt::from(j3.twice() + 1));
        for n in [
            j3_plus_m3,
            j3_minus_m3,
            j1_minus_m1,
            j1_plus_m1,
            j2_minus_m2,
            j2_plus_m2,
        ] {
            radicand *= BigRational::from(BigInt::from(
                table.factorial(n as usize).expect("sized").clone(),
            ));
        }
        SignedSqrtRational::new(series, radicand)
    })
}

/// Exact Wigner 6-j symbol `{j1 j2 j3; j4 j5 j6}` via the Racah single sum.
///
/// Returns exact zero when any of the four triads violates the triangle rules.
pub fn wigner6j(
    j1: HalfInt,
    j2: HalfInt,
    j3: HalfInt,
    j4: HalfInt,
    j5: HalfInt,
    j6: HalfInt,
) -> SignedSqrtRational {
    if !triangle(j1, j2, j3)
        || !triangle(j1, j5, j6)
        || !triangle(j4, j2, j6)
        || !triangle(j4, j5, j3)
    {
        return SignedSqrtRational::zero();
    }

    let t1 = (j1 + j2 + j3).plus_as_int(HalfInt::ZERO).unwrap();
    let t2 = (j1 + j5 + j6).plus_as_int(HalfInt::ZERO).unwrap();
    let t3 = (j4 + j2 + j6).plus_as_int(HalfInt::ZERO).unwrap();
    let t4 = (j4 + j5 + j3).plus_as_int(HalfInt::ZERO).unwrap();
    let q1 = (j1 + j2 + j4 + j5).plus_as_int(HalfInt::ZERO).unwrap();
    let q2 = (j2 + j3 + j5 + j6).plus_as_int(HalfInt::ZERO).unwrap();
    let q3 = (j3 + j1 + j6 + j4).plus_as_int(HalfInt::ZERO).unwrap();

    let k_min = t1.max(t2).max(t3).max(t4);
    let k_max = q1.min(q2).min(q3);
    if k_min > k_max {
        return SignedSqrtRational::zero();
    }

    let max_fact = (k_max as usize + 1).max(16);
    with_factorials(max_fact, |table| {
        let mut series = BigRational::zero();
        for k in k_min..=k_max {
            let numer = [(k + 1) as usize];
            let denom = [
                (k - t1) as usize,
                (k - t2) as usize,
                (k - t3) as usize,
                (k - t4) as usize,
                (q1 - k) as usize,
                (q2 - k) as usize,
                (q3 - k) as usize,
            ];
            let term = big_rational_from_facts(table, &numer, &denom);
            if k % 2 == 0 {
                series += term;
            } else {
                series -= term;
            }
        }
        if series.is_zero() {
            return SignedSqrtRational::zero();
        }
        let mut radicand = triangle_norm_sq(table, j1, j2, j3);
        radicand *= triangle_norm_sq(table, j1, j5, j6);
        radicand *= triangle_norm_sq(table, j4, j2, j6);
        radicand *= triangle_norm_sq(table, j4, j5, j3);
        SignedSqrtRational::new(series, radicand)
    })
}

/// `<j m; 0 0 | j m>`-style stretched coefficient `<j j; l 0 | j j>`, the
/// per-degree weight that turns harmonic coefficients into coherent-state
/// expectation values. Exact, then converted to `f64`.
pub fn stretched_weight(twice_j: i64, l: i64) -> f64 {
    let j = HalfInt::from_twice(twice_j);
    clebsch_gordan(j, j, HalfInt::from_int(l), HalfInt::ZERO, j, j).to_f64()
}

//! Half-integer angular momenta stored as twice their value.
//!
//! Spins and magnetic quantum numbers are either integers or half odd
//! integers. Storing `2j` as a signed integer keeps every triangle and
//! parity check exact; nothing in the crate ever parses a floating `j`.

use std::fmt;

/// An exact half-integer, stored as `twice = 2j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    /// From twice the value (`HalfInt::from_twice(1)` is 1/2).
    pub const fn from_twice(twice: i64) -> Self {
        Self { twice }
    }

    /// From an integer value.
    pub const fn from_int(n: i64) -> Self {
        Self { twice: 2 * n }
    }

    pub const ZERO: HalfInt = HalfInt { twice: 0 };

    pub const fn twice(self) -> i64 {
        self.twice
    }

    pub fn to_f64(self) -> f64 {
        self.twice as f64 / 2.0
    }

    pub const fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    /// True when `self` and `other` are both integers or both half odd.
    pub const fn same_parity(self, other: HalfInt) -> bool {
        (self.twice - other.twice) % 2 == 0
    }

    pub const fn is_nonnegative(self) -> bool {
        self.twice >= 0
    }

    pub fn abs(self) -> HalfInt {
        HalfInt::from_twice(self.twice.abs())
    }

    /// `j + m` as an exact integer; `None` when the parities differ.
    pub fn plus_as_int(self, other: HalfInt) -> Option<i64> {
        let t = self.twice + other.twice;
        (t % 2 == 0).then_some(t / 2)
    }

    /// `j - m` as an exact integer; `None` when the parities differ.
    pub fn minus_as_int(self, other: HalfInt) -> Option<i64> {
        let t = self.twice - other.twice;
        (t % 2 == 0).then_some(t / 2)
    }
}

impl std::ops::Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt::from_twice(self.twice + rhs.twice)
    }
}

impl std::ops::Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt::from_twice(self.twice - rhs.twice)
    }
}

impl std::ops::Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt::from_twice(-self.twice)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// Triangle condition for a triad `(a, b, c)`, including integer-sum parity.
pub fn triangle(a: HalfInt, b: HalfInt, c: HalfInt) -> bool {
    let (ta, tb, tc) = (a.twice(), b.twice(), c.twice());
    ta >= 0
        && tb >= 0
        && tc >= 0
        && tc <= ta + tb
        && tc >= (ta - tb).abs()
        && (ta + tb + tc) % 2 == 0
}

/// Magnetic quantum number validity: `|m| <= j` with matching parity.
pub fn valid_jm(j: HalfInt, m: HalfInt) -> bool {
    j.is_nonnegative() && m.abs().twice() <= j.twice() && j.same_parity(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_and_parity() {
        assert_eq!(HalfInt::from_twice(3).to_string(), "3/2");
        assert_eq!(HalfInt::from_int(2).to_string(), "2");
        assert!(HalfInt::from_twice(3).same_parity(HalfInt::from_twice(1)));
        assert!(!HalfInt::from_twice(3).same_parity(HalfInt::from_int(1)));
    }

    #[test]
    fn triangle_cases() {
        let j = HalfInt::from_twice(1);
        assert!(triangle(j, j, HalfInt::from_int(1)));
        assert!(triangle(j, j, HalfInt::ZERO));
        // parity violation: 1/2 + 1/2 + 1/2 is not an integer
        assert!(!triangle(j, j, j));
        assert!(!triangle(
            HalfInt::from_int(1),
            HalfInt::from_int(1),
            HalfInt::from_int(3)
        ));
    }

    #[test]
    fn jm_validity() {
        let j = HalfInt::from_twice(5);
        assert!(valid_jm(j, HalfInt::from_twice(-3)));
        assert!(!valid_jm(j, HalfInt::from_twice(7)));
        assert!(!valid_jm(j, HalfInt::from_int(1)));
    }
}

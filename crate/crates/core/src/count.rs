use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Shl};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// Exact nonnegative integer of unbounded magnitude.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Count(BigUint);

impl Count {
    pub fn zero() -> Self {
        Count(BigUint::zero())
    }

    pub fn one() -> Self {
        Count(BigUint::one())
    }

    /// `2^e`.
    pub fn pow2(e: usize) -> Self {
        Count(BigUint::one() << e)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }
}

impl From<u64> for Count {
    fn from(v: u64) -> Self {
        Count(BigUint::from(v))
    }
}

impl From<usize> for Count {
    fn from(v: usize) -> Self {
        Count(BigUint::from(v))
    }
}

impl From<BigUint> for Count {
    fn from(v: BigUint) -> Self {
        Count(v)
    }
}

impl Add for Count {
    type Output = Count;
    fn add(self, rhs: Count) -> Count {
        Count(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a Count> for Count {
    type Output = Count;
    fn add(self, rhs: &'a Count) -> Count {
        Count(self.0 + &rhs.0)
    }
}

impl AddAssign for Count {
    fn add_assign(&mut self, rhs: Count) {
        self.0 += rhs.0;
    }
}

impl<'a> AddAssign<&'a Count> for Count {
    fn add_assign(&mut self, rhs: &'a Count) {
        self.0 += &rhs.0;
    }
}

impl Mul for Count {
    type Output = Count;
    fn mul(self, rhs: Count) -> Count {
        Count(self.0 * rhs.0)
    }
}

impl<'a> Mul<&'a Count> for &'a Count {
    type Output = Count;
    fn mul(self, rhs: &'a Count) -> Count {
        Count(&self.0 * &rhs.0)
    }
}

impl Shl<usize> for Count {
    type Output = Count;
    fn shl(self, rhs: usize) -> Count {
        Count(self.0 << rhs)
    }
}

impl<'a> Shl<usize> for &'a Count {
    type Output = Count;
    fn shl(self, rhs: usize) -> Count {
        Count(&self.0 << rhs)
    }
}

impl Sum for Count {
    fn sum<I: Iterator<Item = Count>>(iter: I) -> Count {
        iter.fold(Count::zero(), |a, b| a + b)
    }
}

impl PartialEq<u64> for Count {
    fn eq(&self, other: &u64) -> bool {
        self.0 == BigUint::from(*other)
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_past_64_bits() {
        let big = Count::pow2(70) + Count::from(5u64);
        assert_eq!(big.to_string(), "1180591620717411303429");
        assert!(big.to_u64().is_none());
        assert_eq!(&Count::from(6u64) * &Count::from(7u64), 42u64);
        assert_eq!(Count::from(3u64) << 2, 12u64);
    }
}

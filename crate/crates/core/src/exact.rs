//! Exact integer counts and rational probabilities.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, Mul, Sub};

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

/// An exact non-negative count.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BigCount(pub BigUint);

impl BigCount {
    pub fn zero() -> Self {
        Self(BigUint::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_u128(&self) -> Option<u128> {
        self.0.to_u128()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::INFINITY)
    }

    /// `self - other`, panicking on underflow.
    pub fn minus(&self, other: &BigCount) -> BigCount {
        assert!(other <= self, "count underflow");
        BigCount(&self.0 - &other.0)
    }

    pub fn divides(&self, other: &BigCount) -> bool {
        !self.is_zero() && other.0.is_multiple_of(&self.0)
    }

    pub fn ratio(&self, den: &BigCount) -> Ratio {
        Ratio::new(self.clone(), den.clone())
    }
}

impl From<u128> for BigCount {
    fn from(v: u128) -> Self {
        Self(BigUint::from(v))
    }
}

impl From<u64> for BigCount {
    fn from(v: u64) -> Self {
        Self(BigUint::from(v))
    }
}

impl From<usize> for BigCount {
    fn from(v: usize) -> Self {
        Self(BigUint::from(v))
    }
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for BigCount {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl Add for BigCount {
    type Output = BigCount;
    fn add(self, rhs: BigCount) -> BigCount {
        BigCount(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a BigCount> for &'a BigCount {
    type Output = BigCount;
    fn add(self, rhs: &BigCount) -> BigCount {
        BigCount(&self.0 + &rhs.0)
    }
}

impl<'a> Sub<&'a BigCount> for &'a BigCount {
    type Output = BigCount;
    fn sub(self, rhs: &BigCount) -> BigCount {
        self.minus(rhs)
    }
}

impl<'a> Mul<&'a BigCount> for &'a BigCount {
    type Output = BigCount;
    fn mul(self, rhs: &BigCount) -> BigCount {
        BigCount(&self.0 * &rhs.0)
    }
}

impl Mul<u64> for &BigCount {
    type Output = BigCount;
    fn mul(self, rhs: u64) -> BigCount {
        BigCount(&self.0 * rhs)
    }
}

impl Sum for BigCount {
    fn sum<I: Iterator<Item = BigCount>>(iter: I) -> Self {
        iter.fold(BigCount::zero(), |a, b| a + b)
    }
}

impl Product for BigCount {
    fn product<I: Iterator<Item = BigCount>>(iter: I) -> Self {
        iter.fold(BigCount(BigUint::one()), |a, b| BigCount(a.0 * b.0))
    }
}

/// An exact non-negative rational in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ratio(BigRational);

impl Ratio {
    /// Panics when `den` is zero.
    pub fn new(num: impl Into<BigCount>, den: impl Into<BigCount>) -> Self {
        let (num, den) = (num.into(), den.into());
        assert!(!den.is_zero(), "zero denominator");
        Self(BigRational::new(num.0.into(), den.0.into()))
    }

    pub fn integer(v: impl Into<BigCount>) -> Self {
        Self::new(v, 1u64)
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn numer(&self) -> BigCount {
        BigCount(self.0.numer().to_biguint().expect("non-negative"))
    }

    pub fn denom(&self) -> BigCount {
        BigCount(self.0.denom().to_biguint().expect("non-negative"))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn pow(&self, e: u32) -> Ratio {
        Ratio(num_traits::Pow::pow(&self.0, e))
    }

    pub fn recip(&self) -> Ratio {
        Ratio(self.0.recip())
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl Serialize for Ratio {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'a> Mul<&'a Ratio> for &'a Ratio {
    type Output = Ratio;
    fn mul(self, rhs: &Ratio) -> Ratio {
        Ratio(&self.0 * &rhs.0)
    }
}

impl Mul for Ratio {
    type Output = Ratio;
    fn mul(self, rhs: Ratio) -> Ratio {
        Ratio(self.0 * rhs.0)
    }
}

impl Add for Ratio {
    type Output = Ratio;
    fn add(self, rhs: Ratio) -> Ratio {
        Ratio(self.0 + rhs.0)
    }
}

impl std::ops::Div for Ratio {
    type Output = Ratio;
    fn div(self, rhs: Ratio) -> Ratio {
        Ratio(self.0 / rhs.0)
    }
}

impl Product for Ratio {
    fn product<I: Iterator<Item = Ratio>>(iter: I) -> Self {
        iter.fold(Ratio::one(), |a, b| a * b)
    }
}

/// A probability: a [`Ratio`] in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct ExactProb(Ratio);

impl ExactProb {
    /// `None` if the value falls outside `[0, 1]` or `den` is zero.
    pub fn new(num: impl Into<BigCount>, den: impl Into<BigCount>) -> Option<Self> {
        let (num, den) = (num.into(), den.into());
        (!den.is_zero() && num <= den).then(|| Self(Ratio::new(num, den)))
    }

    pub fn from_ratio(r: Ratio) -> Option<Self> {
        (r <= Ratio::one()).then_some(Self(r))
    }

    pub fn ratio(&self) -> &Ratio {
        &self.0
    }

    pub fn into_ratio(self) -> Ratio {
        self.0
    }
}

impl fmt::Display for ExactProb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `binom(n, k)` as an exact count.
pub fn binomial(n: u64, k: u64) -> BigCount {
    if k > n {
        return BigCount::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    BigCount(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms() {
        let r = Ratio::new(400u64, 40000u64);
        assert_eq!(r.to_string(), "1/100");
        assert_eq!(r.numer(), BigCount::from(1u64));
    }

    #[test]
    fn probability_range() {
        assert!(ExactProb::new(3u64, 2u64).is_none());
        assert!(ExactProb::new(1u64, 0u64).is_none());
        assert_eq!(ExactProb::new(2u64, 4u64).unwrap().to_string(), "1/2");
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigCount::from(10u64));
        assert_eq!(binomial(6, 3), BigCount::from(20u64));
        assert_eq!(binomial(3, 5), BigCount::zero());
        assert_eq!(binomial(64, 32).to_string(), "1832624140942590534");
    }

    #[test]
    fn divisibility() {
        assert!(BigCount::from(3u64).divides(&BigCount::from(12u64)));
        assert!(!BigCount::from(5u64).divides(&BigCount::from(12u64)));
        assert!(!BigCount::zero().divides(&BigCount::from(12u64)));
    }
}

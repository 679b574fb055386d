use std::fmt;
use std::ops::{Add, AddAssign};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

/// An exact, non-negative occurrence count of arbitrary size.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BigCount(pub BigUint);

impl BigCount {
    pub fn zero() -> Self {
        BigCount(BigUint::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn as_biguint(&self) -> &BigUint {
        &self.0
    }

    pub fn into_biguint(self) -> BigUint {
        self.0
    }

    pub fn bits(&self) -> u64 {
        self.0.bits()
    }

    /// Builds a count from little-endian 64-bit limbs.
    pub fn from_limbs(limbs: &[u64]) -> Self {
        BigCount(biguint_from_limbs(limbs))
    }

    /// `self · 2^{-shift}` rounded to the nearest double, without ever
    /// materialising `self` as a float (no overflow for huge counts).
    pub fn to_f64_scaled(&self, shift: u64) -> f64 {
        scaled_to_f64(&self.0, shift)
    }

    pub fn to_bigint(&self) -> BigInt {
        BigInt::from(self.0.clone())
    }
}

impl From<u64> for BigCount {
    fn from(v: u64) -> Self {
        BigCount(BigUint::from(v))
    }
}

impl From<BigUint> for BigCount {
    fn from(v: BigUint) -> Self {
        BigCount(v)
    }
}

impl fmt::Display for BigCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl FromStr for BigCount {
    type Err = num_bigint::ParseBigIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BigUint::from_str(s).map(BigCount)
    }
}

impl Add for BigCount {
    type Output = BigCount;

    fn add(self, rhs: BigCount) -> BigCount {
        BigCount(self.0 + rhs.0)
    }
}

impl AddAssign<&BigCount> for BigCount {
    fn add_assign(&mut self, rhs: &BigCount) {
        self.0 += &rhs.0;
    }
}

pub(crate) fn biguint_from_limbs(limbs: &[u64]) -> BigUint {
    let mut digits = Vec::with_capacity(limbs.len() * 2);
    for &l in limbs {
        digits.push(l as u32);
        digits.push((l >> 32) as u32);
    }
    BigUint::new(digits)
}

/// Writes `value` into `out` as little-endian limbs. Returns `false` if it
/// does not fit.
pub(crate) fn biguint_to_limbs(value: &BigUint, out: &mut [u64]) -> bool {
    let digits = value.to_u64_digits();
    if digits.len() > out.len() {
        return false;
    }
    out.fill(0);
    out[..digits.len()].copy_from_slice(&digits);
    true
}

/// `n · 2^{-shift}` as a double.
pub fn scaled_to_f64(n: &BigUint, shift: u64) -> f64 {
    let bits = n.bits();
    if bits == 0 {
        return 0.0;
    }
    // Keep 64 significant bits, then scale by the remaining power of two.
    let drop = bits.saturating_sub(64);
    let top = (n >> drop).to_u64().expect("at most 64 bits remain");
    let exp = drop as i64 - shift as i64;
    top as f64 * pow2(exp)
}

/// `2^e` for any integer exponent, saturating to 0 / inf outside f64 range.
pub(crate) fn pow2(e: i64) -> f64 {
    if e > 1023 {
        f64::INFINITY
    } else if e < -1074 {
        0.0
    } else if e < -1022 {
        // subnormal range: split to avoid an out-of-range intermediate
        pow2(e + 64) * pow2(-64)
    } else {
        f64::from_bits(((e + 1023) as u64) << 52)
    }
}

//! Coefficient rings for chains.
//!
//! Everything in the crate is exact. Integer chains use machine integers with
//! checked arithmetic; GF(2) chains use [`Z2`].

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{CheckedAdd, CheckedMul, One, Zero};
use serde::{Deserialize, Serialize};

/// Which ring a coefficient type models.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ring {
    Integers,
    Mod2,
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integers => f.write_str("Z"),
            Ring::Mod2 => f.write_str("Z2"),
        }
    }
}

/// A commutative ring usable as a chain coefficient.
///
/// Implemented for the signed machine integers and for [`Z2`]. Addition is
/// expected to be overflow-checked by callers through [`CheckedAdd`].
pub trait Coefficient:
    Copy
    + Eq
    + Ord
    + Hash
    + fmt::Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + CheckedAdd
    + CheckedMul
    + Send
    + Sync
    + 'static
{
    const RING: Ring;

    /// Absolute value, as used by the sup-norm.
    fn magnitude(&self) -> u64;

    /// Image of an integer under the canonical ring map.
    fn from_i64(v: i64) -> Self;

    /// Integer representative (`0`/`1` for GF(2)).
    fn to_i64(&self) -> i64;

    fn add_checked(self, rhs: Self) -> Self {
        self.checked_add(&rhs).expect("coefficient overflow")
    }

    fn mul_checked(self, rhs: Self) -> Self {
        self.checked_mul(&rhs).expect("coefficient overflow")
    }
}

macro_rules! impl_signed_coefficient {
    ($($t:ty)*) => ($(
        impl Coefficient for $t {
            const RING: Ring = Ring::Integers;

            fn magnitude(&self) -> u64 {
                u64::try_from(self.unsigned_abs()).expect("magnitude exceeds u64")
            }

            fn from_i64(v: i64) -> Self {
                <$t>::try_from(v).expect("integer out of range for coefficient type")
            }

            fn to_i64(&self) -> i64 {
                i64::try_from(*self).expect("coefficient exceeds i64")
            }
        }
    )*)
}

impl_signed_coefficient!(i32 i64 i128);

/// The field with two elements.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Z2(bool);

impl Z2 {
    pub const ZERO: Z2 = Z2(false);
    pub const ONE: Z2 = Z2(true);

    pub fn new(bit: bool) -> Self {
        Z2(bit)
    }

    pub fn bit(self) -> bool {
        self.0
    }
}

impl fmt::Debug for Z2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", u8::from(self.0))
    }
}

impl fmt::Display for Z2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", u8::from(self.0))
    }
}

impl Add for Z2 {
    type Output = Z2;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Z2) -> Z2 {
        Z2(self.0 ^ rhs.0)
    }
}

impl Sub for Z2 {
    type Output = Z2;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn sub(self, rhs: Z2) -> Z2 {
        Z2(self.0 ^ rhs.0)
    }
}

impl Mul for Z2 {
    type Output = Z2;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, rhs: Z2) -> Z2 {
        Z2(self.0 & rhs.0)
    }
}

impl Neg for Z2 {
    type Output = Z2;
    fn neg(self) -> Z2 {
        self
    }
}

impl Zero for Z2 {
    fn zero() -> Self {
        Z2::ZERO
    }
    fn is_zero(&self) -> bool {
        !self.0
    }
}

impl One for Z2 {
    fn one() -> Self {
        Z2::ONE
    }
}

impl CheckedAdd for Z2 {
    fn checked_add(&self, v: &Self) -> Option<Self> {
        Some(*self + *v)
    }
}

impl CheckedMul for Z2 {
    fn checked_mul(&self, v: &Self) -> Option<Self> {
        Some(*self * *v)
    }
}

impl Coefficient for Z2 {
    const RING: Ring = Ring::Mod2;

    fn magnitude(&self) -> u64 {
        u64::from(self.0)
    }

    fn from_i64(v: i64) -> Self {
        Z2(v.rem_euclid(2) == 1)
    }

    fn to_i64(&self) -> i64 {
        i64::from(self.0)
    }
}

//! Coefficient fields.
//!
//! Polynomial code is generic over [`Field`], which layers a few
//! conversions on top of the `num-traits` arithmetic traits. The only
//! implementor shipped here is the prime field [`Fp`], parameterised by a
//! [`Modulus`] marker: [`Const`] fixes the prime at compile time, while
//! [`RunPrime`] reads it from a process-wide value installed once at start-up
//! (the CLI's `--prime` flag).

use std::fmt;
use std::hash::Hash;
use std::marker::PhantomData;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::OnceLock;

use num_traits::{Inv, One, Zero};

use crate::error::{Error, Result};

/// Default modulus for runs that do not pick one.
pub const DEFAULT_PRIME: u64 = 32003;

/// Encoded predicate polynomials take integer values in [-27, 27] on boolean
/// points; any prime above this bound keeps their zero sets intact.
pub const MIN_PRIME_EXCLUSIVE: u64 = 27;

/// A commutative field usable as polynomial coefficients.
pub trait Field:
    Clone
    + Copy
    + Eq
    + Hash
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Inv<Output = Self>
{
    /// Image of an integer under the canonical ring map.
    fn from_i64(value: i64) -> Self;

    fn characteristic() -> u64;

    /// Representative in `[0, characteristic)`.
    fn canonical(&self) -> u64;
}

pub const fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Checks that `p` is an admissible coefficient modulus.
pub fn validate_prime(p: u64) -> Result<u64> {
    // Products of two residues must fit in u64.
    if p > MIN_PRIME_EXCLUSIVE && p < (1 << 32) && is_prime(p) {
        Ok(p)
    } else {
        Err(Error::InvalidModulus(p))
    }
}

/// Type-level source of a prime modulus.
pub trait Modulus: Copy + Eq + Hash + fmt::Debug + Default + 'static {
    fn modulus() -> u64;
}

/// A modulus fixed at compile time.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Const<const P: u64>;

impl<const P: u64> Modulus for Const<P> {
    #[inline]
    fn modulus() -> u64 {
        const {
            assert!(
                P > MIN_PRIME_EXCLUSIVE && P < (1 << 32) && is_prime(P),
                "modulus must be a prime in (27, 2^32)"
            )
        };
        P
    }
}

static RUN_PRIME: OnceLock<u64> = OnceLock::new();

/// A modulus chosen at run time. It is written at most once per process;
/// reading it before [`RunPrime::install`] freezes it at [`DEFAULT_PRIME`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct RunPrime;

impl RunPrime {
    pub fn install(p: u64) -> Result<()> {
        let p = validate_prime(p)?;
        let current = *RUN_PRIME.get_or_init(|| p);
        if current == p {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "run prime already fixed to {current}, cannot switch to {p}"
            )))
        }
    }
}

impl Modulus for RunPrime {
    #[inline]
    fn modulus() -> u64 {
        *RUN_PRIME.get_or_init(|| DEFAULT_PRIME)
    }
}

/// Element of GF(p).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp<M: Modulus> {
    value: u64,
    _modulus: PhantomData<M>,
}

impl<M: Modulus> Fp<M> {
    #[inline]
    pub fn new(value: u64) -> Self {
        Fp {
            value: value % M::modulus(),
            _modulus: PhantomData,
        }
    }

    #[inline]
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn pow(self, mut exp: u64) -> Self {
        let mut base = self;
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            exp >>= 1;
        }
        acc
    }
}

impl<M: Modulus> Field for Fp<M> {
    fn from_i64(value: i64) -> Self {
        let p = M::modulus() as i64;
        Fp::new(value.rem_euclid(p) as u64)
    }

    fn characteristic() -> u64 {
        M::modulus()
    }

    fn canonical(&self) -> u64 {
        self.value
    }
}

impl<M: Modulus> fmt::Debug for Fp<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, M::modulus())
    }
}

impl<M: Modulus> fmt::Display for Fp<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl<M: Modulus> Add for Fp<M> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        let p = M::modulus();
        let s = self.value + rhs.value;
        Fp {
            value: if s >= p { s - p } else { s },
            _modulus: PhantomData,
        }
    }
}

impl<M: Modulus> Sub for Fp<M> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<M: Modulus> Neg for Fp<M> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        if self.value == 0 {
            self
        } else {
            Fp {
                value: M::modulus() - self.value,
                _modulus: PhantomData,
            }
        }
    }
}

impl<M: Modulus> Mul for Fp<M> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        Fp::new(self.value * rhs.value)
    }
}

impl<M: Modulus> Inv for Fp<M> {
    type Output = Self;
    /// Multiplicative inverse by Fermat's little theorem.
    ///
    /// Panics on zero.
    fn inv(self) -> Self {
        assert!(self.value != 0, "zero has no inverse in GF(p)");
        self.pow(M::modulus() - 2)
    }
}

impl<M: Modulus> Div for Fp<M> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.inv()
    }
}

impl<M: Modulus> Zero for Fp<M> {
    fn zero() -> Self {
        Fp {
            value: 0,
            _modulus: PhantomData,
        }
    }

    fn is_zero(&self) -> bool {
        self.value == 0
    }
}

impl<M: Modulus> One for Fp<M> {
    fn one() -> Self {
        Fp::new(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type F = Fp<Const<32003>>;
    type Small = Fp<Const<31>>;

    #[test]
    fn primality() {
        let primes: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(is_prime(32003));
        assert!(!is_prime(32001));
    }

    #[test]
    fn validate_rejects_small_and_composite() {
        assert!(validate_prime(23).is_err());
        assert!(validate_prime(27).is_err());
        assert!(validate_prime(33).is_err());
        assert_eq!(validate_prime(29), Ok(29));
    }

    #[test]
    fn negative_integers_wrap() {
        assert_eq!(F::from_i64(-1).value(), 32002);
        assert_eq!(F::from_i64(-27) + F::from_i64(27), F::zero());
        assert_eq!(Small::from_i64(-62).value(), 0);
    }

    #[test]
    fn inverses() {
        for v in 1..31u64 {
            let x = Small::new(v);
            assert_eq!(x * x.inv(), Small::one());
        }
        assert_eq!(F::from_i64(2) / F::from_i64(2), F::one());
    }

    #[test]
    fn boolean_range_values_stay_distinct_from_zero() {
        for v in -27..=27i64 {
            assert_eq!(Small::from_i64(v).is_zero(), v == 0);
        }
    }
}

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact complex number with rational parts.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Self::new(BigRational::one(), BigRational::zero())
    }

    pub fn i() -> Self {
        Self::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_real(re: BigRational) -> Self {
        Self::new(re, BigRational::zero())
    }

    /// `(b + i)/(b - i)`, the unit-modulus number whose argument is
    /// `2 arctan(1/b)`. For `b = p/q` this equals `(p + qi)/(p - qi)`.
    pub fn from_base(b: &BigRational) -> Self {
        let (p, q) = (b.numer(), b.denom());
        let n = p * p + q * q;
        let re = BigRational::new(p * p - q * q, n.clone());
        let im = BigRational::new(BigInt::from(2) * p * q, n);
        Self::new(re, im)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -&self.im)
    }

    /// `re^2 + im^2`.
    pub fn norm(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn square(&self) -> Self {
        let re = &self.re * &self.re - &self.im * &self.im;
        let im = BigRational::from_integer(2.into()) * &self.re * &self.im;
        Self::new(re, im)
    }

    /// `1/self`, or `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(Self::new(&self.re / &n, -&self.im / &n))
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        other.inverse().map(|inv| self * &inv)
    }

    /// `self^e` by binary powering; negative exponents invert first.
    /// `None` when `self` is zero and `e < 0`.
    pub fn pow(&self, e: &BigInt) -> Option<Self> {
        let base = if e.is_negative() {
            self.inverse()?
        } else {
            self.clone()
        };
        let mut e = e.abs();
        let mut result = Self::one();
        let mut b = base;
        while !e.is_zero() {
            if e.bit(0) {
                result = &result * &b;
            }
            e >>= 1;
            if !e.is_zero() {
                b = b.square();
            }
        }
        Some(result)
    }

    pub fn pow_u64(&self, e: u64) -> Self {
        self.pow(&BigInt::from(e)).expect("non-negative exponent")
    }
}

/// Gaussian integer `re + im i`, used where denominators can be avoided.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct GaussianInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussianInt {
    pub fn one() -> Self {
        GaussianInt {
            re: BigInt::one(),
            im: BigInt::zero(),
        }
    }

    pub fn mul(&self, o: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    pub fn pow(&self, e: &BigInt) -> GaussianInt {
        let mut e = e.abs();
        let mut result = Self::one();
        let mut b = self.clone();
        while !e.is_zero() {
            if e.bit(0) {
                result = result.mul(&b);
            }
            e >>= 1;
            if !e.is_zero() {
                b = b.mul(&b);
            }
        }
        result
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re, -self.im)
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})i", self.re, self.im)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

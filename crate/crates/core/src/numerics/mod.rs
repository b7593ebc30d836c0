//! Arbitrary-precision numerics: exact rationals, error-tracked reals and the
//! transcendental kernels (square root, arctangent series, tangent evaluators,
//! Bernoulli numbers, logarithms) used by the formula machinery.

mod bernoulli;
mod hpreal;
mod log;
mod mag;
mod precision;
mod series;
mod trig;

use std::borrow::Cow;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

pub use bernoulli::bernoulli;
pub use hpreal::{parse_decimal_rational, HPReal};
pub use log::{ln_abs, log10_abs};
pub use mag::ErrBound;
pub use precision::PrecisionContext;
pub use series::{arctan_euler, arctan_gh, arctan_maclaurin, ArctanSeries};
pub use trig::{
    doubling_chain, sin_cos, tan_bernoulli, tan_doubling, tan_hp, tan_series_coefficient,
};


use crate::error::{Error, Result};

/// Argument of a numeric kernel: an exact rational or an error-tracked real.
///
/// Exact rationals with small numerators and denominators let the series
/// kernels update terms with integer multiplications instead of full products.
#[derive(Debug, Clone)]
pub enum Arg<'a> {
    Exact(Cow<'a, BigRational>),
    Approx(&'a HPReal),
}

impl<'a> Arg<'a> {
    pub fn to_hpreal(&self, ctx: &PrecisionContext) -> HPReal {
        match self {
            Arg::Exact(r) => HPReal::from_rational(r, ctx),
            Arg::Approx(x) => x.with_ctx(ctx),
        }
    }
}

impl<'a> From<&'a BigRational> for Arg<'a> {
    fn from(r: &'a BigRational) -> Self {
        Arg::Exact(Cow::Borrowed(r))
    }
}

impl From<BigRational> for Arg<'static> {
    fn from(r: BigRational) -> Self {
        Arg::Exact(Cow::Owned(r))
    }
}

impl<'a> From<&'a HPReal> for Arg<'a> {
    fn from(x: &'a HPReal) -> Self {
        Arg::Approx(x)
    }
}

/// Convenience: the rational `num/den`. Panics if `den == 0`.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

/// Square root to `ctx` accuracy.
pub fn sqrt_hp<'a>(x: impl Into<Arg<'a>>, ctx: &PrecisionContext) -> Result<HPReal> {
    let x = x.into();
    if let Arg::Exact(r) = &x {
        if r.numer() < &BigInt::from(0) {
            return Err(Error::Domain("square root of a negative number".into()));
        }
    }
    x.to_hpreal(ctx).sqrt()?.ensure_tolerance("sqrt")
}

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::{Arg, HPReal, PrecisionContext};

/// `atanh(1/d)` for an integer `d > 1`, by integer term updates.
fn atanh_recip(d: i64, ctx: &PrecisionContext) -> HPReal {
    let d2 = BigInt::from(d * d);
    let mut pow = HPReal::one(ctx).div_i64(d);
    let mut sum = HPReal::zero(ctx);
    let threshold = ctx.truncation_threshold();
    let mut n: i64 = 0;
    loop {
        sum = &sum + &pow.div_i64(2 * n + 1);
        pow = pow.div_int(&d2);
        n += 1;
        let next = pow.abs_upper();
        if next < threshold {
            // geometric tail with ratio 1/d^2 <= 1/4
            return sum.with_added_error(next.mul_u64(2));
        }
    }
}

fn ln2(ctx: &PrecisionContext) -> HPReal {
    atanh_recip(3, ctx).mul_i64(2)
}

fn ln10(ctx: &PrecisionContext) -> HPReal {
    // ln 10 = 3 ln 2 + ln(5/4) = 3 ln 2 + 2 atanh(1/9)
    &ln2(ctx).mul_i64(3) + &atanh_recip(9, ctx).mul_i64(2)
}

/// `atanh(z)` for `|z| <= 1/3`, full-precision term updates.
fn atanh_small(z: &HPReal, ctx: &PrecisionContext) -> HPReal {
    let z2 = z.square();
    let mut pow = z.clone();
    let mut sum = HPReal::zero(ctx);
    let threshold = ctx.truncation_threshold();
    let mut n: i64 = 0;
    loop {
        sum = &sum + &pow.div_i64(2 * n + 1);
        pow = &pow * &z2;
        n += 1;
        let next = pow.abs_upper();
        if next < threshold {
            return sum.with_added_error(next.mul_u64(2));
        }
    }
}

/// `ln(m * 2^e)` for an exact dyadic with `m > 0`.
fn ln_dyadic(m: &BigInt, e: i64, ctx: &PrecisionContext) -> HPReal {
    // y = m / 2^(bits-1) lies in [1, 2)
    let b = m.bits() as i64;
    let y = HPReal::from_dyadic(m.clone(), -(b - 1), ctx);
    let one = HPReal::one(ctx);
    let z = (&y - &one).div(&(&y + &one)).expect("y + 1 >= 2");
    let ln_y = atanh_small(&z, ctx).mul_i64(2);
    &ln_y + &ln2(ctx).mul_i64(e + b - 1)
}

fn ln_int(n: &BigInt, ctx: &PrecisionContext) -> HPReal {
    // rounding n to working precision first keeps the cost independent of its size
    let h = HPReal::from_int(&n.abs(), ctx);
    let (mid, err) = h.split_error();
    let (m, e) = mid.mantissa_exponent();
    let ln = ln_dyadic(m, e, ctx);
    // |d ln x| <= err / x
    ln.with_added_error(err.div(mid.mag_lower()))
}

/// Natural logarithm of `|x|`, `x != 0`.
pub fn ln_abs<'a>(x: impl Into<Arg<'a>>, ctx: &PrecisionContext) -> Result<HPReal> {
    let ictx = ctx.extended(2);
    let v = match x.into() {
        Arg::Exact(r) => {
            if r.is_zero() {
                return Err(Error::Domain("logarithm of zero".into()));
            }
            let num = ln_int(r.numer(), &ictx);
            if r.denom().is_one() {
                num
            } else {
                &num - &ln_int(r.denom(), &ictx)
            }
        }
        Arg::Approx(h) => {
            let lower = h
                .abs_lower()
                .ok_or_else(|| Error::Domain("logarithm of a value indistinguishable from zero".into()))?;
            let (mid, err) = h.with_ctx(&ictx).split_error();
            let mid = mid.abs();
            let (m, e) = mid.mantissa_exponent();
            ln_dyadic(m, e, &ictx).with_added_error(err.div(lower))
        }
    };
    Ok(v.with_ctx(ctx))
}

/// `log10|x|`, `x != 0`. Exact rationals are handled through the bit length
/// of numerator and denominator plus a mantissa correction, so huge integers
/// are never converted in full.
pub fn log10_abs<'a>(x: impl Into<Arg<'a>>, ctx: &PrecisionContext) -> Result<HPReal> {
    let ictx = ctx.extended(2);
    let ln = ln_abs(x, &ictx)?;
    ln.div(&ln10(&ictx))?
        .with_ctx(ctx)
        .ensure_tolerance("log10_abs")
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{ratio, ErrBound};

    fn ctx(d: u32) -> PrecisionContext {
        PrecisionContext::new(d).unwrap()
    }

    #[test]
    fn powers_of_ten() {
        let c = ctx(30);
        let two = log10_abs(ratio(100, 1), &c).unwrap();
        assert!(two.agrees_with(&HPReal::from_i64(2, &c), ErrBound::ZERO));
        let m3 = log10_abs(ratio(1, 1000), &c).unwrap();
        assert!(m3.agrees_with(&HPReal::from_i64(-3, &c), ErrBound::ZERO));
        let neg = log10_abs(ratio(-10, 1), &c).unwrap();
        assert!(neg.agrees_with(&HPReal::one(&c), ErrBound::ZERO));
    }

    #[test]
    fn integer_value() {
        // mpmath: log10(85445659)
        let r = HPReal::parse_decimal(
            "7.931690003625099397119320718036529463038956348356",
            &ctx(48),
        )
        .unwrap();
        let v = log10_abs(ratio(85445659, 1), &ctx(20)).unwrap();
        assert!(v.agrees_with(&r, ErrBound::pow10_neg(47)));
        assert_eq!(v.truncated_decimal(8), "7.93169000");
    }

    #[test]
    fn zero_is_rejected() {
        assert!(matches!(
            log10_abs(ratio(0, 1), &ctx(10)),
            Err(Error::Domain(_))
        ));
        let z = HPReal::zero(&ctx(10)).with_added_error(ErrBound::pow2(-5));
        assert!(log10_abs(&z, &ctx(10)).is_err());
    }

    #[test]
    fn huge_integers_are_cheap() {
        let n = num_traits::pow(BigInt::from(10), 200_000) * 3;
        let v = log10_abs(num_rational::BigRational::from_integer(n), &ctx(30)).unwrap();
        // log10(3) = 0.47712125471966243729502790325512
        let r = HPReal::parse_decimal("200000.47712125471966243729502790325512", &ctx(38)).unwrap();
        assert!(v.agrees_with(&r, ErrBound::pow10_neg(32)));
    }
}

//! Tangent evaluators.
//!
//! * [`sin_cos`] / [`tan_hp`]: full-accuracy Taylor evaluation with argument
//!   halving and double-angle reconstruction.
//! * [`doubling_chain`]: the approximation `f_n(x) = 2 f_(n-1) / (1 - f_(n-1)^2)`
//!   seeded with `s = x + x^3/3`; its error bound covers arithmetic only.
//! * [`tan_doubling`]: the same chain, with the seed's truncation error folded
//!   into the bound, so it brackets `tan(2^n x)` itself.
//! * [`tan_bernoulli`]: the truncated Bernoulli-number tangent series.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::numerics::{bernoulli, Arg, ErrBound, HPReal, PrecisionContext};

/// Upper bound on 2 zeta(2) = pi^2/3.
fn coeff_scale() -> ErrBound {
    ErrBound::new(33, 0).div(ErrBound::new(10, 0))
}

/// Upper bound on 4/pi^2.
fn coeff_ratio() -> ErrBound {
    ErrBound::new(4053, 0).div(ErrBound::new(10000, 0))
}

/// Bound on `sum_{n > terms} |c_n| |x|^(2n-1)` for the tangent series, where
/// `|c_n| <= 2 zeta(2) (4/pi^2)^n`. `None` when `|x|` is too close to pi/2.
fn tan_tail_bound(x_upper: ErrBound, terms: u64) -> Option<ErrBound> {
    let rho = coeff_ratio().mul(x_upper).mul(x_upper);
    let denom = ErrBound::new(1, 0).sub_lower(rho)?;
    // 3.3 * ratio^(terms+1) * |x|^(2 terms + 1) / (1 - rho)
    let mut acc = coeff_scale().mul(x_upper);
    let mut base = rho;
    let mut e = terms;
    let mut pw = ErrBound::new(1, 0);
    while e > 0 {
        if e & 1 == 1 {
            pw = pw.mul(base);
        }
        base = base.mul(base);
        e >>= 1;
    }
    acc = acc.mul(pw).mul(coeff_ratio());
    Some(acc.div(denom))
}

/// Rejects `|x| >= 1.5707963` (a lower bound on pi/2).
fn check_tan_domain(x: &HPReal) -> Result<()> {
    let limit = ErrBound::new(15_707_963, 0);
    if x.abs_upper().mul_u64(10_000_000) >= limit {
        return Err(Error::Domain("tangent argument must satisfy |x| < pi/2".into()));
    }
    Ok(())
}

/// Coefficient of `x^(2n-1)` in the tangent series:
/// `(-1)^(n-1) 2^(2n) (2^(2n) - 1) B_(2n) / (2n)!`.
pub fn tan_series_coefficient(n: u32) -> BigRational {
    assert!(n >= 1, "tangent series starts at n = 1");
    let mut fact = BigInt::one();
    for i in 1..=(2 * n as u64) {
        fact *= i;
    }
    let p = BigInt::one() << (2 * n) as usize;
    let sign = if n % 2 == 1 { 1 } else { -1 };
    let b = bernoulli(2 * n as u64);
    b * BigRational::new(&p * (&p - 1) * sign, fact)
}

/// Truncated tangent series with `terms` terms; the error bound includes the
/// analytic bound on the omitted tail.
pub fn tan_bernoulli<'a>(x: impl Into<Arg<'a>>, terms: u32, ctx: &PrecisionContext) -> Result<HPReal> {
    if terms == 0 {
        return Err(Error::Invalid("tan_bernoulli needs at least one term".into()));
    }
    let x = x.into().to_hpreal(ctx);
    check_tan_domain(&x)?;
    if x.is_zero() && x.is_exact() {
        return Ok(HPReal::zero(ctx));
    }
    let x2 = x.square();
    let mut pow = x.clone();
    let mut sum = HPReal::zero(ctx);
    // (2n)! and 2^(2n) maintained incrementally
    let mut fact = BigInt::one();
    let mut p = BigInt::one();
    for n in 1..=terms as u64 {
        fact *= (2 * n - 1) * (2 * n);
        p <<= 2;
        let b = bernoulli(2 * n);
        let num = b.numer() * &p * (&p - 1);
        let den = b.denom() * &fact;
        let term = pow.mul_int(&num).div_int(&den);
        sum = if n % 2 == 1 { &sum + &term } else { &sum - &term };
        if n < terms as u64 {
            pow = &pow * &x2;
        }
    }
    let tail = tan_tail_bound(x.abs_upper(), terms as u64)
        .ok_or_else(|| Error::Domain("tangent argument too close to pi/2".into()))?;
    Ok(sum.with_added_error(tail).with_ctx(ctx))
}

fn seed(x: &HPReal) -> HPReal {
    let cube = &x.square() * x;
    x + &cube.div_i64(3)
}

fn run_doubling(mut f: HPReal, n: u32, ctx: &PrecisionContext) -> Result<HPReal> {
    let floor = ctx.tolerance();
    let one = HPReal::one(ctx);
    for step in 1..=n {
        let d = &one - &f.square();
        match d.abs_lower() {
            Some(l) if l >= floor => {}
            _ => return Err(Error::PoleProximity { step }),
        }
        f = f.mul_i64(2).div(&d).map_err(|_| Error::PoleProximity { step })?;
    }
    Ok(f)
}

/// `f_n(x)` with seed `f_0 = x + x^3/3` and `n` doublings. The error bound
/// covers rounding and input uncertainty, not the distance to `tan(2^n x)`.
pub fn doubling_chain<'a>(x: impl Into<Arg<'a>>, n: u32, ctx: &PrecisionContext) -> Result<HPReal> {
    let x = x.into().to_hpreal(ctx);
    run_doubling(seed(&x), n, ctx)
}

/// `tan(2^n x)` through the doubling chain; the error bound additionally
/// contains the seed's truncation error `|tan x - x - x^3/3|` carried through
/// every doubling.
pub fn tan_doubling<'a>(x: impl Into<Arg<'a>>, n: u32, ctx: &PrecisionContext) -> Result<HPReal> {
    let x = x.into().to_hpreal(ctx);
    check_tan_domain(&x)?;
    if x.is_zero() && x.is_exact() {
        return Ok(HPReal::zero(ctx));
    }
    // tail of the series after x + x^3/3
    let seed_err = tan_tail_bound(x.abs_upper(), 2)
        .ok_or_else(|| Error::Domain("tangent argument too close to pi/2".into()))?;
    run_doubling(seed(&x).with_added_error(seed_err), n, ctx)
}

/// Sine and cosine to `ctx` accuracy.
pub fn sin_cos<'a>(x: impl Into<Arg<'a>>, ctx: &PrecisionContext) -> Result<(HPReal, HPReal)> {
    let (mid, input_err) = x.into().to_hpreal(ctx).split_error();
    if mid.is_zero() {
        let one = HPReal::one(ctx);
        return Ok((
            HPReal::zero(ctx).with_added_error(input_err),
            one.with_added_error(input_err),
        ));
    }
    let bits = ctx.working_bits() as f64;
    let mag = mid.mag_upper().log2().ceil().max(0.0);
    let halvings = ((bits.sqrt() / 2.0).ceil() + mag) as i64;
    // each double-angle step may lose about two bits
    let extra_digits = ((2 * halvings + 20) as f64 * std::f64::consts::LOG10_2).ceil() as u32;
    let ictx = ctx.extended(extra_digits);
    let y = mid.with_ctx(&ictx).mul_pow2(-halvings);
    let y2 = y.square();
    let threshold = ictx.truncation_threshold();

    let mut s = y.clone();
    let mut term = y.clone();
    let mut j: i64 = 1;
    loop {
        term = (&term * &y2).div_int(&BigInt::from(-(2 * j) * (2 * j + 1)));
        if term.abs_upper() < threshold {
            s = s.with_added_error(term.abs_upper());
            break;
        }
        s = &s + &term;
        j += 1;
    }
    let mut c = HPReal::one(&ictx);
    let mut term = HPReal::one(&ictx);
    let mut j: i64 = 1;
    loop {
        term = (&term * &y2).div_int(&BigInt::from(-(2 * j - 1) * (2 * j)));
        if term.abs_upper() < threshold {
            c = c.with_added_error(term.abs_upper());
            break;
        }
        c = &c + &term;
        j += 1;
    }
    let one = HPReal::one(&ictx);
    for _ in 0..halvings {
        let s2 = (&s * &c).mul_i64(2);
        c = &one - &s.square().mul_i64(2);
        s = s2;
    }
    let s = s.with_added_error(input_err).with_ctx(ctx);
    let c = c.with_added_error(input_err).with_ctx(ctx);
    Ok((s, c))
}

/// Tangent to `ctx` accuracy via [`sin_cos`].
pub fn tan_hp<'a>(x: impl Into<Arg<'a>>, ctx: &PrecisionContext) -> Result<HPReal> {
    let (s, c) = sin_cos(x, &ctx.extended(4))?;
    if c.abs_lower().is_none() {
        return Err(Error::PoleProximity { step: 0 });
    }
    let t = s.div(&c)?;
    Ok(t.with_ctx(ctx))
}

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numerics::{ErrBound, PrecisionContext};

/// Exact binary number `m * 2^e`, used for endpoint arithmetic.
#[derive(Debug, Clone)]
pub(crate) struct Dyadic {
    pub m: BigInt,
    pub e: i64,
}

impl Dyadic {
    pub fn from_bound(b: ErrBound) -> Dyadic {
        let (m, e) = b.parts();
        Dyadic {
            m: BigInt::from(m),
            e,
        }
    }

    fn aligned(&self, other: &Dyadic) -> (BigInt, BigInt, i64) {
        let e = self.e.min(other.e);
        (
            &self.m << (self.e - e) as usize,
            &other.m << (other.e - e) as usize,
            e,
        )
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(other);
        Dyadic { m: a + b, e }
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(other);
        Dyadic { m: a - b, e }
    }

    pub fn cmp_abs(&self, other: &Dyadic) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.abs().cmp(&b.abs())
    }

    /// floor(self * 10^d)
    pub fn floor_scaled10(&self, d: u32) -> BigInt {
        let scaled = &self.m * BigInt::from(10u32).pow(d);
        if self.e >= 0 {
            scaled << self.e as usize
        } else {
            scaled.div_floor(&(BigInt::one() << (-self.e) as usize))
        }
    }
}

/// A high-precision real: a binary floating midpoint with a rigorous absolute
/// error bound and the precision context it was produced under.
///
/// Arithmetic rounds the midpoint to `ctx.working_bits()` significant bits and
/// folds both rounding and propagated input error into `err_bound`, so the
/// true value always lies in `[mid - err, mid + err]`.
#[derive(Clone)]
pub struct HPReal {
    mant: BigInt,
    exp: i64,
    err: ErrBound,
    ctx: PrecisionContext,
}

fn bits_of(m: &BigInt) -> i64 {
    m.bits() as i64
}

fn mag_of(m: &BigInt, exp: i64, upper: bool) -> ErrBound {
    if m.is_zero() {
        return ErrBound::ZERO;
    }
    let b = bits_of(m);
    let a = m.magnitude();
    if b <= 32 {
        return ErrBound::new(a.to_u64().unwrap_or(0), exp);
    }
    let shift = b - 32;
    let top: u64 = (a >> shift as usize).to_u64().unwrap_or(u64::MAX);
    ErrBound::new(if upper { top + 1 } else { top }, exp + shift)
}

impl HPReal {
    fn rounded(mant: BigInt, exp: i64, err: ErrBound, ctx: PrecisionContext) -> HPReal {
        let bits = ctx.working_bits() as i64;
        let b = bits_of(&mant);
        if b <= bits {
            return HPReal {
                mant,
                exp,
                err,
                ctx,
            };
        }
        let shift = (b - bits) as u64;
        let exact = mant.trailing_zeros().is_none_or(|tz| tz >= shift);
        let new_exp = exp + shift as i64;
        let err = if exact {
            err
        } else {
            err.add(ErrBound::pow2(new_exp))
        };
        HPReal {
            mant: mant >> shift as usize,
            exp: new_exp,
            err,
            ctx,
        }
    }

    /// Exact value `mant * 2^exp` (rounded only if it exceeds the working precision).
    pub fn from_dyadic(mant: BigInt, exp: i64, ctx: &PrecisionContext) -> HPReal {
        Self::rounded(mant, exp, ErrBound::ZERO, *ctx)
    }

    pub fn zero(ctx: &PrecisionContext) -> HPReal {
        HPReal {
            mant: BigInt::zero(),
            exp: 0,
            err: ErrBound::ZERO,
            ctx: *ctx,
        }
    }

    pub fn one(ctx: &PrecisionContext) -> HPReal {
        Self::from_i64(1, ctx)
    }

    pub fn from_i64(n: i64, ctx: &PrecisionContext) -> HPReal {
        Self::from_int(&BigInt::from(n), ctx)
    }

    pub fn from_int(n: &BigInt, ctx: &PrecisionContext) -> HPReal {
        Self::rounded(n.clone(), 0, ErrBound::ZERO, *ctx)
    }

    /// Correctly bounded binary approximation of an exact rational.
    pub fn from_rational(r: &BigRational, ctx: &PrecisionContext) -> HPReal {
        if r.is_integer() {
            return Self::from_int(r.numer(), ctx);
        }
        let (num, den) = (r.numer(), r.denom());
        let bits = ctx.working_bits() as i64;
        let shift = bits + bits_of(den) - bits_of(num) + 2;
        let (q, rem, exp) = if shift >= 0 {
            let (q, rem) = (num << shift as usize).div_rem(den);
            (q, rem, -shift)
        } else {
            let (q, rem) = num.div_rem(&(den << (-shift) as usize));
            (q, rem, -shift)
        };
        let err = if rem.is_zero() {
            ErrBound::ZERO
        } else {
            ErrBound::pow2(exp)
        };
        Self::rounded(q, exp, err, *ctx)
    }

    /// Parses a decimal literal such as `-0.125` or `3`.
    pub fn parse_decimal(s: &str, ctx: &PrecisionContext) -> Result<HPReal> {
        let r = parse_decimal_rational(s)?;
        Ok(Self::from_rational(&r, ctx))
    }

    pub fn ctx(&self) -> &PrecisionContext {
        &self.ctx
    }

    pub fn err_bound(&self) -> ErrBound {
        self.err
    }

    /// Binary significand and exponent of the midpoint.
    pub fn mantissa_exponent(&self) -> (&BigInt, i64) {
        (&self.mant, self.exp)
    }

    /// Re-rounds to another context; never loses the error accounting.
    pub fn with_ctx(&self, ctx: &PrecisionContext) -> HPReal {
        Self::rounded(self.mant.clone(), self.exp, self.err, *ctx)
    }

    pub fn with_added_error(mut self, extra: ErrBound) -> HPReal {
        self.err = self.err.add(extra);
        self
    }

    /// The midpoint as an exact value (error bound dropped).
    pub fn midpoint(&self) -> HPReal {
        HPReal {
            err: ErrBound::ZERO,
            ..self.clone()
        }
    }

    pub fn split_error(&self) -> (HPReal, ErrBound) {
        (self.midpoint(), self.err)
    }

    pub fn is_exact(&self) -> bool {
        self.err.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    /// Sign of the midpoint.
    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    /// Upper bound on |midpoint|.
    pub fn mag_upper(&self) -> ErrBound {
        mag_of(&self.mant, self.exp, true)
    }

    /// Lower bound on |midpoint|.
    pub fn mag_lower(&self) -> ErrBound {
        mag_of(&self.mant, self.exp, false)
    }

    /// Upper bound on |true value|.
    pub fn abs_upper(&self) -> ErrBound {
        self.mag_upper().add(self.err)
    }

    /// Lower bound on |true value|, `None` if zero is not excluded.
    pub fn abs_lower(&self) -> Option<ErrBound> {
        self.mag_lower().sub_lower(self.err)
    }

    pub fn is_definitely_positive(&self) -> bool {
        self.signum() > 0 && self.abs_lower().is_some()
    }

    pub fn is_definitely_negative(&self) -> bool {
        self.signum() < 0 && self.abs_lower().is_some()
    }

    pub fn to_f64(&self) -> f64 {
        if self.mant.is_zero() {
            return 0.0;
        }
        let b = bits_of(&self.mant);
        let shift = (b - 60).max(0);
        let top = (&self.mant >> shift as usize).to_f64().unwrap_or(0.0);
        top * 2f64.powf((self.exp + shift) as f64)
    }

    /// Exact midpoint as a rational.
    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as usize)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    pub(crate) fn dyadic(&self) -> Dyadic {
        Dyadic {
            m: self.mant.clone(),
            e: self.exp,
        }
    }

    /// True when `|self - other| <= err(self) + err(other) + slack`.
    pub fn agrees_with(&self, other: &HPReal, slack: ErrBound) -> bool {
        let diff = self.dyadic().sub(&other.dyadic());
        let bound = Dyadic::from_bound(self.err.add(other.err).add(slack));
        diff.cmp_abs(&bound) != Ordering::Greater
    }

    /// Exact comparison of midpoints.
    pub fn cmp_mid(&self, other: &HPReal) -> Ordering {
        let d = self.dyadic().sub(&other.dyadic());
        d.m.sign().cmp(&Sign::NoSign).then(Ordering::Equal)
    }

    /// `err <= 10^-digits * max(1, |value|)`.
    pub fn meets_tolerance(&self) -> bool {
        let one = ErrBound::new(1, 0);
        let scale = self.mag_lower().max(one);
        self.err <= self.ctx.tolerance().mul(scale)
    }

    pub fn ensure_tolerance(self, what: &str) -> Result<HPReal> {
        if self.meets_tolerance() {
            Ok(self)
        } else {
            Err(Error::PrecisionExhausted(format!(
                "{what}: error bound {} exceeds the {}-digit tolerance",
                self.err,
                self.ctx.digits()
            )))
        }
    }

    pub fn abs(&self) -> HPReal {
        HPReal {
            mant: self.mant.abs(),
            ..self.clone()
        }
    }

    fn merged_ctx(&self, other: &HPReal) -> PrecisionContext {
        if other.ctx.working_digits() > self.ctx.working_digits() {
            other.ctx
        } else {
            self.ctx
        }
    }

    fn top_exp(&self) -> i64 {
        self.exp + bits_of(&self.mant)
    }

    fn add_impl(&self, other: &HPReal, negate_other: bool) -> HPReal {
        let ctx = self.merged_ctx(other);
        let bits = ctx.working_bits() as i64;
        let err = self.err.add(other.err);
        if other.mant.is_zero() {
            return Self::rounded(self.mant.clone(), self.exp, err, ctx);
        }
        if self.mant.is_zero() {
            let m = if negate_other {
                -other.mant.clone()
            } else {
                other.mant.clone()
            };
            return Self::rounded(m, other.exp, err, ctx);
        }
        // an operand far below the other's last bit only widens the error
        if self.top_exp() - other.top_exp() > bits + 4 {
            return Self::rounded(self.mant.clone(), self.exp, err.add(other.mag_upper()), ctx);
        }
        if other.top_exp() - self.top_exp() > bits + 4 {
            let m = if negate_other {
                -other.mant.clone()
            } else {
                other.mant.clone()
            };
            return Self::rounded(m, other.exp, err.add(self.mag_upper()), ctx);
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << (self.exp - e) as usize;
        let b = &other.mant << (other.exp - e) as usize;
        let m = if negate_other { a - b } else { a + b };
        Self::rounded(m, e, err, ctx)
    }

    pub fn mul_ref(&self, other: &HPReal) -> HPReal {
        let ctx = self.merged_ctx(other);
        let err = self
            .mag_upper()
            .mul(other.err)
            .add(other.mag_upper().mul(self.err))
            .add(self.err.mul(other.err));
        Self::rounded(&self.mant * &other.mant, self.exp + other.exp, err, ctx)
    }

    pub fn square(&self) -> HPReal {
        self.mul_ref(self)
    }

    /// `self / other`; fails when the divisor's error interval contains zero.
    pub fn div(&self, other: &HPReal) -> Result<HPReal> {
        let ctx = self.merged_ctx(other);
        let denom_lower = other.abs_lower().ok_or_else(|| {
            Error::PrecisionExhausted("division by a value indistinguishable from zero".into())
        })?;
        if self.mant.is_zero() {
            let err = self.err.div(denom_lower);
            return Ok(HPReal {
                mant: BigInt::zero(),
                exp: 0,
                err,
                ctx,
            });
        }
        let bits = ctx.working_bits() as i64;
        let shift = (bits + bits_of(&other.mant) - bits_of(&self.mant) + 2).max(0);
        let (q, rem) = (&self.mant << shift as usize).div_rem(&other.mant);
        let exp = self.exp - other.exp - shift;
        let mut err = ErrBound::ZERO;
        if !rem.is_zero() {
            err = ErrBound::pow2(exp);
        }
        if !self.err.is_zero() || !other.err.is_zero() {
            // (ea + |a/b| eb) / (|b| - eb)
            let q_upper = self.mag_upper().div(other.mag_lower());
            let num = self.err.add(q_upper.mul(other.err));
            err = err.add(num.div(denom_lower));
        }
        Ok(Self::rounded(q, exp, err, ctx))
    }

    pub fn mul_int(&self, n: &BigInt) -> HPReal {
        let err = self.err.mul(mag_of(n, 0, true));
        Self::rounded(&self.mant * n, self.exp, err, self.ctx)
    }

    pub fn mul_i64(&self, n: i64) -> HPReal {
        self.mul_int(&BigInt::from(n))
    }

    /// Division by a nonzero integer.
    pub fn div_int(&self, n: &BigInt) -> HPReal {
        assert!(!n.is_zero(), "HPReal::div_int by zero");
        let bits = self.ctx.working_bits() as i64;
        let shift = (bits + bits_of(n) - bits_of(&self.mant) + 2).max(0);
        let (q, rem) = (&self.mant << shift as usize).div_rem(n);
        let exp = self.exp - shift;
        let mut err = self.err.div(mag_of(n, 0, false));
        if !rem.is_zero() {
            err = err.add(ErrBound::pow2(exp));
        }
        Self::rounded(q, exp, err, self.ctx)
    }

    pub fn div_i64(&self, n: i64) -> HPReal {
        self.div_int(&BigInt::from(n))
    }

    /// Exact multiplication by `2^n`.
    pub fn mul_pow2(&self, n: i64) -> HPReal {
        HPReal {
            mant: self.mant.clone(),
            exp: self.exp + n,
            err: self.err.mul_pow2(n),
            ctx: self.ctx,
        }
    }

    /// Square root with propagated error.
    pub fn sqrt(&self) -> Result<HPReal> {
        if self.signum() < 0 {
            if self.abs_lower().is_some() {
                return Err(Error::Domain("square root of a negative number".into()));
            }
            return Ok(HPReal {
                mant: BigInt::zero(),
                exp: 0,
                err: self.err.sqrt(),
                ctx: self.ctx,
            });
        }
        if self.mant.is_zero() {
            return Ok(HPReal {
                mant: BigInt::zero(),
                exp: 0,
                err: self.err.sqrt(),
                ctx: self.ctx,
            });
        }
        let bits = self.ctx.working_bits() as i64;
        let mut shift = (2 * bits + 2 - bits_of(&self.mant)).max(0);
        if (self.exp - shift) % 2 != 0 {
            shift += 1;
        }
        let m = &self.mant << shift as usize;
        let s = m.sqrt();
        let exp = (self.exp - shift) / 2;
        let mut err = ErrBound::ZERO;
        if &s * &s != m {
            err = ErrBound::pow2(exp);
        }
        if !self.err.is_zero() {
            let root_lower = mag_of(&s, exp, false);
            let via_derivative = self.err.div(root_lower);
            err = err.add(via_derivative.min(self.err.sqrt()));
        }
        Ok(Self::rounded(s, exp, err, self.ctx))
    }

    /// floor of the midpoint.
    pub fn floor_mid(&self) -> BigInt {
        if self.exp >= 0 {
            &self.mant << self.exp as usize
        } else {
            self.mant.div_floor(&(BigInt::one() << (-self.exp) as usize))
        }
    }

    /// `Some(floor)` when the midpoint is farther than `factor * err` from
    /// every integer (or the value is exact), otherwise `None`.
    pub fn certified_floor(&self, factor: u64) -> Option<BigInt> {
        let f = self.floor_mid();
        if self.err.is_zero() {
            return Some(f);
        }
        let mid = self.dyadic();
        let lo = Dyadic { m: f.clone(), e: 0 };
        let hi = Dyadic {
            m: &f + 1,
            e: 0,
        };
        let margin = Dyadic::from_bound(self.err.mul_u64(factor));
        let d_lo = mid.sub(&lo);
        let d_hi = hi.sub(&mid);
        if d_lo.cmp_abs(&margin) == Ordering::Greater && d_hi.cmp_abs(&margin) == Ordering::Greater
        {
            Some(f)
        } else {
            None
        }
    }

    /// Truncated decimal expansion with `frac_digits` digits after the point,
    /// certified against both ends of the error interval.
    pub fn certified_truncation(&self, frac_digits: u32) -> Option<String> {
        let err = Dyadic::from_bound(self.err);
        let lo = self.dyadic().sub(&err);
        let hi = self.dyadic().add(&err);
        let a = truncate_toward_zero_scaled(&lo, frac_digits);
        let b = truncate_toward_zero_scaled(&hi, frac_digits);
        if a == b && lo.m.sign() == hi.m.sign() {
            Some(format_scaled(&a, frac_digits))
        } else {
            None
        }
    }

    /// Midpoint truncated (toward zero) to `frac_digits` decimals.
    pub fn truncated_decimal(&self, frac_digits: u32) -> String {
        format_scaled(
            &truncate_toward_zero_scaled(&self.dyadic(), frac_digits),
            frac_digits,
        )
    }

    /// Midpoint rounded to nearest with `frac_digits` decimals.
    pub fn to_decimal_string(&self, frac_digits: u32) -> String {
        let half = Dyadic {
            m: if self.signum() < 0 {
                BigInt::from(-1)
            } else {
                BigInt::one()
            },
            e: -1,
        };
        let scaled = self.dyadic();
        let ten_d = Dyadic {
            m: BigInt::from(10u32).pow(frac_digits),
            e: 0,
        };
        let product = Dyadic {
            m: &scaled.m * &ten_d.m,
            e: scaled.e,
        };
        let shifted = product.add(&half);
        let v = truncate_toward_zero_scaled(&shifted, 0);
        format_scaled(&v, frac_digits)
    }

    /// Scientific notation with `sig` significant digits.
    pub fn to_scientific(&self, sig: u32) -> String {
        if self.mant.is_zero() {
            return "0".into();
        }
        let sig = sig.max(1);
        let approx_log = self.mag_upper().log10().floor() as i64;
        let mut frac = sig as i64 - 1 - approx_log;
        for _ in 0..3 {
            let scaled = scaled_round(&self.dyadic(), frac);
            let len = scaled.magnitude().to_string().len() as i64;
            if len == sig as i64 {
                let digits = scaled.magnitude().to_string();
                let sign = if self.signum() < 0 { "-" } else { "" };
                let e10 = sig as i64 - 1 - frac;
                return if sig == 1 {
                    format!("{sign}{digits}e{e10}")
                } else {
                    format!("{sign}{}.{}e{e10}", &digits[..1], &digits[1..])
                };
            }
            frac += sig as i64 - len;
        }
        self.to_decimal_string(sig)
    }
}

fn scaled_round(d: &Dyadic, frac: i64) -> BigInt {
    let (num, den) = if frac >= 0 {
        (&d.m * BigInt::from(10u32).pow(frac as u32), BigInt::one())
    } else {
        (d.m.clone(), BigInt::from(10u32).pow((-frac) as u32))
    };
    let (num, den) = if d.e >= 0 {
        (num << d.e as usize, den)
    } else {
        (num, den << (-d.e) as usize)
    };
    let r = BigRational::new(num, den);
    r.round().to_integer()
}

fn truncate_toward_zero_scaled(d: &Dyadic, frac_digits: u32) -> BigInt {
    let mag = Dyadic {
        m: d.m.abs(),
        e: d.e,
    };
    let t = mag.floor_scaled10(frac_digits);
    if d.m.sign() == Sign::Minus {
        -t
    } else {
        t
    }
}

fn format_scaled(v: &BigInt, frac_digits: u32) -> String {
    let neg = v.sign() == Sign::Minus;
    let s = v.magnitude().to_string();
    let d = frac_digits as usize;
    let body = if d == 0 {
        s
    } else if s.len() > d {
        format!("{}.{}", &s[..s.len() - d], &s[s.len() - d..])
    } else {
        format!("0.{}{}", "0".repeat(d - s.len()), s)
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

/// Parses `[-]digits[.digits]` into an exact rational.
pub fn parse_decimal_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    let (t, exp10) = match t.split_once(['e', 'E']) {
        Some((m, e)) => (
            m,
            e.parse::<i32>()
                .map_err(|_| Error::Invalid(format!("bad exponent in {s:?}")))?,
        ),
        None => (t, 0),
    };
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    let valid = |p: &str| p.chars().all(|c| c.is_ascii_digit());
    if (int_part.is_empty() && frac_part.is_empty()) || !valid(int_part) || !valid(frac_part) {
        return Err(Error::Invalid(format!("not a decimal number: {s:?}")));
    }
    let digits = format!("{int_part}{frac_part}");
    let n = BigInt::from_str(if digits.is_empty() { "0" } else { &digits })
        .map_err(|e| Error::Invalid(e.to_string()))?;
    let den = BigInt::from(10u32).pow(frac_part.len() as u32);
    let mut r = BigRational::new(n, den);
    let scale = BigRational::from_integer(BigInt::from(10u32).pow(exp10.unsigned_abs()));
    if exp10 >= 0 {
        r *= scale;
    } else {
        r /= scale;
    }
    Ok(if neg { -r } else { r })
}

impl fmt::Debug for HPReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "HPReal({} ± {}, {} digits)",
            self.to_scientific(self.ctx.digits().min(40)),
            self.err,
            self.ctx.digits()
        )
    }
}

impl fmt::Display for HPReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(self.ctx.digits() as usize) as u32;
        let l = self.mag_upper().log10();
        if self.mant.is_zero() || (-3.0..21.0).contains(&l) {
            let int_digits = if l > 0.0 { l.ceil() as u32 } else { 0 };
            write!(
                f,
                "{}",
                self.to_decimal_string(digits.saturating_sub(int_digits).max(1))
            )
        } else {
            write!(f, "{}", self.to_scientific(digits))
        }
    }
}

impl Add for &HPReal {
    type Output = HPReal;
    fn add(self, rhs: &HPReal) -> HPReal {
        self.add_impl(rhs, false)
    }
}

impl Sub for &HPReal {
    type Output = HPReal;
    fn sub(self, rhs: &HPReal) -> HPReal {
        self.add_impl(rhs, true)
    }
}

impl Mul for &HPReal {
    type Output = HPReal;
    fn mul(self, rhs: &HPReal) -> HPReal {
        self.mul_ref(rhs)
    }
}

impl Neg for &HPReal {
    type Output = HPReal;
    fn neg(self) -> HPReal {
        HPReal {
            mant: -self.mant.clone(),
            ..self.clone()
        }
    }
}

impl Neg for HPReal {
    type Output = HPReal;
    fn neg(mut self) -> HPReal {
        self.mant = -self.mant;
        self
    }
}

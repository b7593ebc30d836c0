//! Nested radicals `a_k = sqrt(2 + a_(k-1))`, `a_0 = 0`, and the quantities
//! built from them: `u1_k = floor(a_k / sqrt(2 - a_(k-1)))` and the limit
//! `2^k sqrt(2 - a_(k-1)) -> pi`.
//!
//! `2 - a_k` shrinks by a factor of about 4 per step, so the radicals are
//! carried with `ceil(0.7 k)` extra digits to keep that difference accurate.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::numerics::{HPReal, PrecisionContext};
use crate::u1_solver::floor_with_escalation;

/// Digits added to the caller's context to absorb the cancellation in `2 - a_k`.
fn cancellation_digits(k: u32) -> u32 {
    (7 * k as u64).div_ceil(10) as u32
}

/// `a_0 ..= a_k`, computed forward from `a_0 = 0`.
#[derive(Debug, Clone)]
pub struct RadicalSequence {
    k: u32,
    values: Vec<HPReal>,
    ctx: PrecisionContext,
}

impl RadicalSequence {
    pub fn new(k: u32, ctx: &PrecisionContext) -> Result<Self> {
        let ictx = ctx.extended(cancellation_digits(k));
        let two = HPReal::from_i64(2, &ictx);
        let mut values = Vec::with_capacity(k as usize + 1);
        values.push(HPReal::zero(&ictx));
        for n in 1..=k as usize {
            let next = (&two + &values[n - 1]).sqrt()?;
            values.push(next);
        }
        let seq = RadicalSequence {
            k,
            values,
            ctx: *ctx,
        };
        // 2 - a_k must still carry ctx.digits() significant digits
        let gap = seq.gap(k);
        let ok = gap
            .abs_lower()
            .is_some_and(|l| gap.err_bound() <= l.mul(ctx.tolerance()));
        if !ok {
            return Err(Error::PrecisionExhausted(format!(
                "2 - a_{k} is not resolved at {} digits",
                ctx.digits()
            )));
        }
        Ok(seq)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn ctx(&self) -> &PrecisionContext {
        &self.ctx
    }

    /// `a_n`, at the sequence's internal precision. Panics if `n > k`.
    pub fn get(&self, n: u32) -> &HPReal {
        &self.values[n as usize]
    }

    pub fn values(&self) -> &[HPReal] {
        &self.values
    }

    /// `2 - a_n`.
    pub fn gap(&self, n: u32) -> HPReal {
        let a = self.get(n);
        &HPReal::from_i64(2, a.ctx()) - a
    }

    /// `a_n / sqrt(2 - a_(n-1))` for `1 <= n <= k`.
    pub fn u1_ratio(&self, n: u32) -> Result<HPReal> {
        assert!(n >= 1 && n <= self.k, "index out of range");
        self.get(n).div(&self.gap(n - 1).sqrt()?)
    }

    /// `2^n sqrt(2 - a_(n-1))` for `1 <= n <= k`.
    pub fn pi_limit(&self, n: u32) -> Result<HPReal> {
        assert!(n >= 1 && n <= self.k, "index out of range");
        Ok(self.gap(n - 1).sqrt()?.mul_pow2(n as i64).with_ctx(&self.ctx))
    }
}

/// `a_k`, returned at the internal precision so that `2 - a_k` keeps
/// `ctx.digits()` significant digits.
pub fn nested_radical(k: u32, ctx: &PrecisionContext) -> Result<HPReal> {
    let seq = RadicalSequence::new(k, ctx)?;
    Ok(seq.get(k).clone())
}

/// `u1_k = floor(a_k / sqrt(2 - a_(k-1)))`, escalating precision when the
/// ratio sits too close to an integer.
pub fn u1_radical(k: u32, ctx: &PrecisionContext) -> Result<BigInt> {
    match k {
        0 => Err(Error::Invalid("u1_radical needs k >= 1".into())),
        // a_1 / sqrt(2) = 1 exactly; no finite precision can certify that floor
        1 => Ok(BigInt::from(1)),
        _ => floor_with_escalation(ctx, |c| RadicalSequence::new(k, c)?.u1_ratio(k)),
    }
}

/// `2^k sqrt(2 - a_(k-1))`, which tends to pi.
pub fn pi_radical_limit(k: u32, ctx: &PrecisionContext) -> Result<HPReal> {
    if k == 0 {
        return Err(Error::Invalid("pi_radical_limit needs k >= 1".into()));
    }
    RadicalSequence::new(k, ctx)?.pi_limit(k)
}

//! Quadratically convergent iteration for pi:
//! `theta <- 1/(1/theta + (1 - tan(2^(k-1)/theta))/2^k)`, `theta_0 = 2^k`,
//! with `2^(k+1)/theta_n -> pi`. The number of correct digits roughly
//! doubles per step, so step `n` runs at `2^(n+1) + 10` digits.

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::numerics::{log10_abs, tan_hp, ErrBound, HPReal, PrecisionContext};

fn step_ctx(n: u32) -> Result<PrecisionContext> {
    if n > 28 {
        return Err(Error::PrecisionExhausted(format!(
            "step {n} would need 2^{} digits",
            n + 1
        )));
    }
    PrecisionContext::new((1u32 << (n + 1)) + 10)
}

/// `theta_n` for a fixed `k`.
#[derive(Debug, Clone)]
pub struct QuadState {
    pub k: u32,
    pub theta: HPReal,
    pub n: u32,
    pub ctx: PrecisionContext,
}

impl QuadState {
    /// `theta_0 = 2^k`.
    pub fn initial(k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::Invalid("k must be at least 1".into()));
        }
        let ctx = step_ctx(0)?;
        Ok(QuadState {
            k,
            theta: HPReal::from_int(&(BigInt::one() << k as usize), &ctx),
            n: 0,
            ctx,
        })
    }

    /// `2^(k+1) / theta_n`.
    pub fn pi_estimate(&self) -> Result<HPReal> {
        HPReal::one(&self.ctx)
            .div(&self.theta)
            .map(|r| r.mul_pow2(self.k as i64 + 1))
    }
}

/// One iteration, at `2^(n+2) + 10` digits.
pub fn quad_step(s: &QuadState) -> Result<QuadState> {
    quad_step_at(s, &step_ctx(s.n + 1)?)
}

/// One iteration at a caller-chosen precision.
pub fn quad_step_at(s: &QuadState, ctx: &PrecisionContext) -> Result<QuadState> {
    let ctx = *ctx;
    let k = s.k as i64;
    let theta = s.theta.with_ctx(&ctx);
    let one = HPReal::one(&ctx);
    let recip = one.div(&theta)?;
    let t = tan_hp(&recip.mul_pow2(k - 1), &ctx)?;
    let denom = &recip + &(&one - &t).mul_pow2(-k);
    if !denom.is_definitely_positive() {
        return Err(Error::PrecisionExhausted(
            "iteration left the region where theta > 0".into(),
        ));
    }
    Ok(QuadState {
        k: s.k,
        theta: one.div(&denom)?,
        n: s.n + 1,
        ctx,
    })
}

/// The estimates `2^(k+1)/theta_n` for `n = 1..=iterations`.
pub fn quad_trace(k: u32, iterations: u32) -> Result<Vec<HPReal>> {
    let mut s = QuadState::initial(k)?;
    let mut out = Vec::with_capacity(iterations as usize);
    for _ in 0..iterations {
        s = quad_step(&s)?;
        out.push(s.pi_estimate()?);
    }
    Ok(out)
}

/// Like [`quad_trace`] but with every step at `ctx`, for inspecting the
/// iterates themselves rather than the convergence schedule.
pub fn quad_trace_at(k: u32, iterations: u32, ctx: &PrecisionContext) -> Result<Vec<HPReal>> {
    let mut s = QuadState::initial(k)?;
    let mut out = Vec::with_capacity(iterations as usize);
    for _ in 0..iterations {
        s = quad_step_at(&s, ctx)?;
        out.push(s.pi_estimate()?);
    }
    Ok(out)
}

/// `2^(k+1)/theta_n` after `iterations` steps.
pub fn pi_quadratic(k: u32, iterations: u32) -> Result<HPReal> {
    if iterations == 0 {
        return Err(Error::Invalid("iterations must be at least 1".into()));
    }
    let mut s = QuadState::initial(k)?;
    for _ in 0..iterations {
        s = quad_step(&s)?;
    }
    s.pi_estimate()
}

/// `floor(-log10 |approx - reference|)`, clamped at 0.
///
/// The reference must be known much more tightly than the difference.
pub fn correct_digits(approx: &HPReal, reference: &HPReal) -> Result<u64> {
    let diff = &approx.midpoint() - &reference.midpoint();
    let d = diff.abs_upper();
    if d.is_zero() || reference.err_bound().mul_u64(1000) > d {
        return Err(Error::PrecisionExhausted(
            "reference is too coarse to count digits".into(),
        ));
    }
    if d >= ErrBound::new(1, 0) {
        return Ok(0);
    }
    let ctx = PrecisionContext::new(20)?;
    let l = log10_abs(&diff.with_ctx(&ctx), &ctx)?;
    let neg = -l;
    Ok(neg.floor_mid().try_into().unwrap_or(0))
}

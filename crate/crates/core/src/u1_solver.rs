//! Surd-free computation of the first constant `u1_k`.
//!
//! Two routes are offered: the fixed-point iteration
//! `u <- 1/(1/u + (1 - tan(2^(k-1)/u))/2^k)`, whose limit is `2^(k+1)/pi`,
//! and the doubling recurrence
//! `u_(k+1) = floor(2/(1/u_k + (1 - tan(2^(k-1)/u_k))/2^k))` with the
//! tangent replaced by the doubling chain seeded at `1/u_k`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::numerics::{doubling_chain, tan_hp, HPReal, PrecisionContext};

/// Number of times a floor is retried at doubled precision before giving up.
pub const MAX_ESCALATIONS: u32 = 4;

/// Iteration cap for [`fixed_point_u1`].
pub const FIXED_POINT_MAX_ITERATIONS: u32 = 64;

/// `floor(x)` if the midpoint is more than twice the error bound away from
/// every integer, `None` when the floor cannot be decided.
pub fn safe_floor(x: &HPReal) -> Option<BigInt> {
    x.certified_floor(2)
}

/// Evaluates `eval` at `ctx`, then at doubled digit counts, until the floor
/// is certified. Fails with [`Error::FloorAmbiguity`] after
/// [`MAX_ESCALATIONS`] retries.
pub fn floor_with_escalation<F>(ctx: &PrecisionContext, mut eval: F) -> Result<BigInt>
where
    F: FnMut(&PrecisionContext) -> Result<HPReal>,
{
    let mut c = *ctx;
    for attempt in 0..=MAX_ESCALATIONS {
        if attempt > 0 {
            c = c.with_digits(c.digits().saturating_mul(2));
        }
        match eval(&c) {
            Ok(v) => {
                if let Some(f) = safe_floor(&v) {
                    return Ok(f);
                }
            }
            Err(Error::PrecisionExhausted(_)) | Err(Error::PoleProximity { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Err(Error::FloorAmbiguity {
        attempts: MAX_ESCALATIONS + 1,
    })
}

/// Iteration state of the fixed-point solver.
#[derive(Debug, Clone)]
pub struct SolverState {
    pub k: u32,
    pub estimate: HPReal,
    pub ctx: PrecisionContext,
    pub iterations: u32,
}

impl SolverState {
    pub fn new(k: u32, guess: &BigRational, ctx: &PrecisionContext) -> Result<Self> {
        if k < 2 {
            return Err(Error::Invalid("fixed-point solver needs k >= 2".into()));
        }
        if guess <= &BigRational::from_integer(0.into()) {
            return Err(Error::Invalid("initial guess must be positive".into()));
        }
        Ok(SolverState {
            k,
            estimate: HPReal::from_rational(guess, ctx),
            ctx: *ctx,
            iterations: 0,
        })
    }

    /// One application of the map.
    pub fn step(&self) -> Result<SolverState> {
        let estimate = fixed_point_map(&self.estimate, self.k, &self.ctx)?;
        Ok(SolverState {
            estimate,
            iterations: self.iterations + 1,
            ..self.clone()
        })
    }
}

/// `1/(1/u + (1 - tan(2^(k-1)/u))/2^k)`.
fn fixed_point_map(u: &HPReal, k: u32, ctx: &PrecisionContext) -> Result<HPReal> {
    let ictx = ctx.extended(4);
    let u = u.with_ctx(&ictx);
    let one = HPReal::one(&ictx);
    let recip = one.div(&u)?;
    let t = tan_hp(&recip.mul_pow2(k as i64 - 1), &ictx)?;
    let denom = &recip + &(&one - &t).mul_pow2(-(k as i64));
    Ok(one.div(&denom)?.with_ctx(ctx))
}

/// `floor(2^(k+1) / 3.14159)`.
pub fn default_guess(k: u32) -> BigRational {
    let num = BigInt::one() << (k as usize + 1);
    BigRational::from_integer(num * 100_000u32 / 314_159u32)
}

/// All iterates of the fixed-point map from `guess` until two successive
/// values agree to `ctx.digits()` significant digits. The guess itself is
/// not included.
pub fn fixed_point_trace(
    k: u32,
    guess: &BigRational,
    ctx: &PrecisionContext,
) -> Result<Vec<HPReal>> {
    let mut state = SolverState::new(k, guess, ctx)?;
    let mut trace = Vec::new();
    while state.iterations < FIXED_POINT_MAX_ITERATIONS {
        let next = state.step()?;
        let diff = (&next.estimate - &state.estimate).abs_upper();
        let scale = next.estimate.mag_upper().mul(ctx.tolerance());
        trace.push(next.estimate.clone());
        if diff <= scale {
            return Ok(trace);
        }
        state = next;
    }
    Err(Error::Divergence {
        iterations: FIXED_POINT_MAX_ITERATIONS,
    })
}

/// Converged fixed point, close to `2^(k+1)/pi`; callers floor it with
/// [`safe_floor`].
pub fn fixed_point_u1(k: u32, guess: &BigRational, ctx: &PrecisionContext) -> Result<HPReal> {
    let trace = fixed_point_trace(k, guess, ctx)?;
    Ok(trace.last().expect("trace is non-empty").clone())
}

/// Working precision for the chain step at `k`.
fn chain_ctx(k: u32, ctx: &PrecisionContext) -> PrecisionContext {
    ctx.with_digits(ctx.digits().max(32).max(k + 16))
}

/// `2/(1/u + (1 - f_(k-1)(1/u))/2^k)` with the doubling chain in place of the tangent.
fn chain_value(u: &BigInt, k: u32, ctx: &PrecisionContext) -> Result<HPReal> {
    let recip = BigRational::new(BigInt::one(), u.clone());
    let f = doubling_chain(&recip, k - 1, ctx)?;
    let one = HPReal::one(ctx);
    let x = HPReal::from_rational(&recip, ctx);
    let denom = &x + &(&one - &f).mul_pow2(-(k as i64));
    HPReal::from_i64(2, ctx).div(&denom)
}

/// The next element of the chain after `u = u1_k`.
pub fn chain_step(u: &BigInt, k: u32, ctx: &PrecisionContext) -> Result<BigInt> {
    let next = floor_with_escalation(&chain_ctx(k, ctx), |c| chain_value(u, k, c))?;
    let twice: BigInt = u * 2;
    if next < twice || next > &twice + 1 {
        return Err(Error::Consistency { k: k + 1 });
    }
    Ok(next)
}

/// `[u1_2, u1_3, ..., u1_kmax]` starting from `u1_2 = 2`.
pub fn u1_chain(k_max: u32, ctx: &PrecisionContext) -> Result<Vec<BigInt>> {
    if k_max < 2 {
        return Err(Error::Invalid("chain needs k_max >= 2".into()));
    }
    let mut out = Vec::with_capacity(k_max as usize - 1);
    let mut u = BigInt::from(2);
    out.push(u.clone());
    for k in 2..k_max {
        u = chain_step(&u, k, ctx)?;
        out.push(u.clone());
    }
    Ok(out)
}

/// `u1_k` without square roots: the last element of [`u1_chain`].
pub fn u1_surdless(k: u32, ctx: &PrecisionContext) -> Result<BigInt> {
    Ok(u1_chain(k, ctx)?.pop().expect("chain is non-empty"))
}

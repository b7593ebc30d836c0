//! Arctangent series kernels.
//!
//! All three stop once the magnitude of the next term drops below
//! `10^-(digits + guard)` and add a bound on the discarded tail to the
//! result's error. Input uncertainty is propagated through the Lipschitz
//! bound `|arctan'| <= 1`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::{Arg, ErrBound, HPReal, PrecisionContext};

const MAX_TERMS: u64 = 20_000_000;

/// Choice of arctangent expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArctanSeries {
    Maclaurin,
    Euler,
    Gh,
}

impl ArctanSeries {
    pub const ALL: [ArctanSeries; 3] = [
        ArctanSeries::Maclaurin,
        ArctanSeries::Euler,
        ArctanSeries::Gh,
    ];

    pub fn eval<'a>(self, x: impl Into<Arg<'a>>, ctx: &PrecisionContext) -> Result<HPReal> {
        match self {
            ArctanSeries::Maclaurin => arctan_maclaurin(x, ctx),
            ArctanSeries::Euler => arctan_euler(x, ctx),
            ArctanSeries::Gh => arctan_gh(x, ctx),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ArctanSeries::Maclaurin => "maclaurin",
            ArctanSeries::Euler => "euler",
            ArctanSeries::Gh => "gh",
        }
    }
}

impl fmt::Display for ArctanSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ArctanSeries {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "maclaurin" => Ok(ArctanSeries::Maclaurin),
            "euler" => Ok(ArctanSeries::Euler),
            "gh" => Ok(ArctanSeries::Gh),
            other => Err(Error::Invalid(format!("unknown series {other:?}"))),
        }
    }
}

/// Multiplier applied to a term to get the next one.
enum Step {
    /// multiply by num, divide by den
    Ints(BigInt, BigInt),
    Real(HPReal),
}

impl Step {
    fn apply(&self, t: &HPReal) -> HPReal {
        match self {
            Step::Ints(n, d) => t.mul_int(n).div_int(d),
            Step::Real(r) => t * r,
        }
    }
}

fn finish(sum: HPReal, input_err: ErrBound, ctx: &PrecisionContext, what: &str) -> Result<HPReal> {
    sum.with_added_error(input_err)
        .with_ctx(ctx)
        .ensure_tolerance(what)
}

fn too_many_terms(what: &str) -> Error {
    Error::PrecisionExhausted(format!("{what}: series needs more than {MAX_TERMS} terms"))
}

/// `sum (-1)^n x^(2n+1) / (2n+1)`, for `|x| < 1`.
pub fn arctan_maclaurin<'a>(x: impl Into<Arg<'a>>, ctx: &PrecisionContext) -> Result<HPReal> {
    let x = x.into();
    let one = ErrBound::new(1, 0);
    let (xh, input_err, step) = match &x {
        Arg::Exact(r) => {
            if r.numer().abs() >= r.denom().abs() {
                return Err(Error::ConvergenceDomain(
                    "Maclaurin arctangent needs |x| < 1".into(),
                ));
            }
            let n = r.numer() * r.numer();
            let d = r.denom() * r.denom();
            (HPReal::from_rational(r, ctx), ErrBound::ZERO, Step::Ints(-n, d))
        }
        Arg::Approx(h) => {
            if h.abs_upper() >= one {
                return Err(Error::ConvergenceDomain(
                    "Maclaurin arctangent needs |x| < 1".into(),
                ));
            }
            let (mid, e) = h.split_error();
            let mid = mid.with_ctx(ctx);
            let x2 = -mid.square();
            (mid, e, Step::Real(x2))
        }
    };
    if xh.is_zero() && xh.is_exact() {
        return Ok(HPReal::zero(ctx).with_added_error(input_err));
    }
    let threshold = ctx.truncation_threshold();
    let mut pow = xh;
    let mut sum = HPReal::zero(ctx);
    let mut n: u64 = 0;
    loop {
        sum = &sum + &pow.div_int(&BigInt::from(2 * n + 1));
        pow = step.apply(&pow);
        n += 1;
        let next = pow.abs_upper().div(ErrBound::new(2 * n + 1, 0));
        if next < threshold {
            // alternating with decreasing magnitude: tail <= first omitted term
            sum = sum.with_added_error(next);
            break;
        }
        if n > MAX_TERMS {
            return Err(too_many_terms("arctan_maclaurin"));
        }
    }
    finish(sum, input_err, ctx, "arctan_maclaurin")
}

/// `sum 2^(2n) (n!)^2 / (2n+1)! * x^(2n+1) / (1+x^2)^(n+1)`, any finite `x`.
///
/// Terms are produced by the ratio `2n/(2n+1) * x^2/(1+x^2)`.
pub fn arctan_euler<'a>(x: impl Into<Arg<'a>>, ctx: &PrecisionContext) -> Result<HPReal> {
    let x = x.into();
    // first term, y = x^2/(1+x^2) as a step, and an upper bound on 1 + x^2
    let (first, input_err, y_step, one_plus_x2) = match &x {
        Arg::Exact(r) => {
            let (p, q) = (r.numer(), r.denom());
            let p2 = p * p;
            let s = &p2 + q * q;
            let t0 = HPReal::from_rational(
                &num_rational::BigRational::new(p * q, s.clone()),
                ctx,
            );
            let bound = HPReal::from_rational(&(r.as_ref() * r.as_ref()), ctx)
                .abs_upper()
                .add(ErrBound::new(1, 0));
            (t0, ErrBound::ZERO, Step::Ints(p2, s), bound)
        }
        Arg::Approx(h) => {
            let (mid, e) = h.split_error();
            let mid = mid.with_ctx(ctx);
            let x2 = mid.square();
            let d = &x2 + &HPReal::one(ctx);
            let t0 = mid.div(&d)?;
            let y = x2.div(&d)?;
            let bound = d.abs_upper();
            (t0, e, Step::Real(y), bound)
        }
    };
    if first.is_zero() && first.is_exact() {
        return Ok(HPReal::zero(ctx).with_added_error(input_err));
    }
    let threshold = ctx.truncation_threshold();
    let mut term = first;
    let mut sum = HPReal::zero(ctx);
    let mut n: u64 = 0;
    loop {
        sum = &sum + &term;
        n += 1;
        term = y_step
            .apply(&term)
            .mul_int(&BigInt::from(2 * n))
            .div_int(&BigInt::from(2 * n + 1));
        let next = term.abs_upper();
        if next < threshold {
            // ratios stay below y, so the tail is at most next / (1 - y) = next * (1 + x^2)
            sum = sum.with_added_error(next.mul(one_plus_x2));
            break;
        }
        if n > MAX_TERMS {
            return Err(too_many_terms("arctan_euler"));
        }
    }
    finish(sum, input_err, ctx, "arctan_euler")
}

/// `2 sum 1/(2n-1) * g_n / (g_n^2 + h_n^2)` with `g_1 = 2/x`, `h_1 = 1` and
///
/// ```text
/// g_n = (1 - 4/x^2) g_(n-1) + 4 h_(n-1) / x
/// h_n = (1 - 4/x^2) h_(n-1) - 4 g_(n-1) / x
/// ```
///
/// Requires `x != 0`.
pub fn arctan_gh<'a>(x: impl Into<Arg<'a>>, ctx: &PrecisionContext) -> Result<HPReal> {
    let x = x.into();
    // updates: (g, h) -> ((a g + b h)/c, (a h - b g)/c)
    enum Update {
        Ints { a: BigInt, b: BigInt, c: BigInt },
        Real { a: HPReal, b: HPReal },
    }
    let (g1, update, input_err, x_upper, x_lower) = match &x {
        Arg::Exact(r) => {
            if r.is_zero() {
                return Err(Error::Domain("arctan_gh needs x != 0".into()));
            }
            let (p, q) = (r.numer(), r.denom());
            let p2 = p * p;
            let a = &p2 - q * q * 4;
            let b = p * q * 4;
            let g1 = HPReal::from_rational(&num_rational::BigRational::new(q * 2, p.clone()), ctx);
            let xh = HPReal::from_rational(r, ctx);
            let (xu, xl) = (xh.abs_upper(), xh.abs_lower());
            (g1, Update::Ints { a, b, c: p2 }, ErrBound::ZERO, xu, xl)
        }
        Arg::Approx(h) => {
            let (mid, e) = h.split_error();
            if mid.is_zero() {
                return Err(Error::Domain("arctan_gh needs x != 0".into()));
            }
            let mid = mid.with_ctx(ctx);
            let inv = HPReal::one(ctx).div(&mid)?;
            let a = &HPReal::one(ctx) - &inv.square().mul_i64(4);
            let b = inv.mul_i64(4);
            let (xu, xl) = (mid.abs_upper(), mid.abs_lower());
            (inv.mul_i64(2), Update::Real { a, b }, e, xu, xl)
        }
    };
    let x_lower = x_lower.ok_or_else(|| Error::Domain("arctan_gh needs x != 0".into()))?;
    // |w_(n+1)| = q |w_n| with q = x^2/(x^2+4); tail factor 1/(1-q) = 1 + x^2/4
    let four = ErrBound::new(4, 0);
    let x2u = x_upper.mul(x_upper);
    let q_upper = x2u.div(x_lower.mul(x_lower).add(four));
    let q_upper = q_upper.min(ErrBound::new(1, 0));
    let tail_factor = ErrBound::new(1, 0).add(x2u.div(four));

    let threshold = ctx.truncation_threshold();
    let mut g = g1;
    let mut h = HPReal::one(ctx);
    let mut sum = HPReal::zero(ctx);
    let mut n: u64 = 1;
    loop {
        let den = &g.square() + &h.square();
        let term = g.div(&den)?.mul_i64(2).div_int(&BigInt::from(2 * n - 1));
        sum = &sum + &term;
        let den_lower = den.abs_lower().ok_or_else(|| {
            Error::PrecisionExhausted("arctan_gh: g^2 + h^2 lost all precision".into())
        })?;
        let w = ErrBound::new(1, 0).div(den_lower).sqrt();
        let next = w
            .mul(q_upper)
            .mul_u64(2)
            .div(ErrBound::new(2 * n + 1, 0));
        if next < threshold {
            sum = sum.with_added_error(next.mul(tail_factor));
            break;
        }
        let (ng, nh) = match &update {
            Update::Ints { a, b, c } => (
                (&g.mul_int(a) + &h.mul_int(b)).div_int(c),
                (&h.mul_int(a) - &g.mul_int(b)).div_int(c),
            ),
            Update::Real { a, b } => (&(a * &g) + &(b * &h), &(a * &h) - &(b * &g)),
        };
        g = ng;
        h = nh;
        n += 1;
        if n > MAX_TERMS {
            return Err(too_many_terms("arctan_gh"));
        }
    }
    finish(sum, input_err, ctx, "arctan_gh")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::ratio;

    fn ctx(d: u32) -> PrecisionContext {
        PrecisionContext::new(d).unwrap()
    }

    // reference values computed with mpmath at 60 digits
    const ATAN_1_5: &str = "0.197395559849880758370049765194790293447585103787852101517688";
    const ATAN_1_239: &str = "0.004184076002074723864538214959285452741048065307631950827019612";
    const QUARTER_PI: &str = "0.785398163397448309615660845819875721049292349843776455243736";

    fn check(v: &HPReal, reference: &str) {
        let r = HPReal::parse_decimal(reference, &ctx(60)).unwrap();
        assert!(
            v.agrees_with(&r, ErrBound::pow10_neg(59)),
            "{v:?} vs {reference}"
        );
        assert!(v.meets_tolerance());
    }

    #[test]
    fn zero_argument() {
        let c = ctx(30);
        assert!(arctan_maclaurin(ratio(0, 1), &c).unwrap().is_zero());
        assert!(arctan_euler(ratio(0, 1), &c).unwrap().is_zero());
        assert!(matches!(
            arctan_gh(ratio(0, 1), &c),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn maclaurin_values() {
        let c = ctx(30);
        check(&arctan_maclaurin(ratio(1, 5), &c).unwrap(), ATAN_1_5);
        check(&arctan_maclaurin(ratio(1, 239), &c).unwrap(), ATAN_1_239);
        assert!(matches!(
            arctan_maclaurin(ratio(1, 1), &c),
            Err(Error::ConvergenceDomain(_))
        ));
        assert!(matches!(
            arctan_maclaurin(ratio(-3, 2), &c),
            Err(Error::ConvergenceDomain(_))
        ));
    }

    #[test]
    fn euler_and_gh_at_one_give_quarter_pi() {
        let c = ctx(30);
        check(&arctan_euler(ratio(1, 1), &c).unwrap(), QUARTER_PI);
        check(&arctan_gh(ratio(1, 1), &c).unwrap(), QUARTER_PI);
    }

    #[test]
    fn gh_is_odd() {
        let c = ctx(30);
        let a = arctan_gh(ratio(1, 5), &c).unwrap();
        let b = arctan_gh(ratio(-1, 5), &c).unwrap();
        assert!(a.agrees_with(&-b, ErrBound::ZERO));
        check(&a, ATAN_1_5);
    }

    #[test]
    fn approximate_arguments_agree_with_exact_ones() {
        let c = ctx(40);
        let x = HPReal::from_rational(&ratio(1, 5), &c);
        for s in ArctanSeries::ALL {
            let a = s.eval(&x, &c).unwrap();
            let b = s.eval(ratio(1, 5), &c).unwrap();
            assert!(a.agrees_with(&b, ErrBound::ZERO), "{s}");
        }
    }

    #[test]
    fn series_names_round_trip() {
        for s in ArctanSeries::ALL {
            assert_eq!(s.name().parse::<ArctanSeries>().unwrap(), s);
        }
        assert!("taylor".parse::<ArctanSeries>().is_err());
    }
}

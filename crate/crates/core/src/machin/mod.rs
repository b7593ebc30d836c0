//! Machin-like formulas `pi/4 = sum A_j arctan(1/B_j)`.
//!
//! The two-term family `pi/4 = 2^(k-1) arctan(1/u1) + arctan(1/u2)` is built
//! exactly: `u2 = sigma_k / (1 - tau_k)` where `sigma_k + i tau_k` is
//! `((u1 + i)/(u1 - i))^(2^(k-1))`, obtained by `k - 1` squarings.

mod gaussian;
pub mod json;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::numerics::{
    arctan_euler, log10_abs, sin_cos, tan_hp, ArctanSeries, HPReal, PrecisionContext,
};

pub use gaussian::GaussianRational;
use gaussian::GaussianInt;

/// Largest `k` for which [`u2_exact`] materialises `u2` without being forced.
pub const U2_MATERIALIZATION_CAP: u32 = 24;

/// One term `coef * arctan(1/base)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MachinTerm {
    pub coef: BigInt,
    pub base: BigRational,
}

impl MachinTerm {
    pub fn new(coef: impl Into<BigInt>, base: BigRational) -> Self {
        MachinTerm {
            coef: coef.into(),
            base,
        }
    }
}

/// `pi/4 = sum coef_j arctan(1/base_j)` (claimed, not yet verified).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MachinFormula {
    terms: Vec<MachinTerm>,
}

impl MachinFormula {
    /// Rejects empty formulas, zero coefficients and zero bases.
    pub fn new(terms: Vec<MachinTerm>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::Invalid("a formula needs at least one term".into()));
        }
        for t in &terms {
            if t.coef.is_zero() {
                return Err(Error::Invalid("term coefficients must be nonzero".into()));
            }
            if t.base.is_zero() {
                return Err(Error::Invalid("term bases must be nonzero".into()));
            }
        }
        Ok(MachinFormula { terms })
    }

    fn from_ints(pairs: &[(i64, i64)]) -> Self {
        let terms = pairs
            .iter()
            .map(|&(a, b)| MachinTerm::new(a, BigRational::from_integer(b.into())))
            .collect();
        MachinFormula::new(terms).expect("builtin formulas are well formed")
    }

    pub fn terms(&self) -> &[MachinTerm] {
        &self.terms
    }

    /// `pi/4 = 4 arctan(1/5) - arctan(1/239)`.
    pub fn machin() -> Self {
        Self::from_ints(&[(4, 5), (-1, 239)])
    }

    /// First formula of Kanada's self-checking pair.
    pub fn kanada1() -> Self {
        Self::from_ints(&[(44, 57), (7, 239), (-12, 682), (24, 12943)])
    }

    /// Second formula of Kanada's self-checking pair.
    pub fn kanada2() -> Self {
        Self::from_ints(&[(12, 49), (32, 57), (-5, 239), (12, 110443)])
    }

    /// `machin`, `kanada1` or `kanada2`.
    pub fn builtin(name: &str) -> Option<Self> {
        match name {
            "machin" => Some(Self::machin()),
            "kanada1" => Some(Self::kanada1()),
            "kanada2" => Some(Self::kanada2()),
            _ => None,
        }
    }
}

/// `pi/4 = 2^(k-1) arctan(1/u1) + arctan(1/u2)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoTermFormula {
    pub k: u32,
    pub u1: BigInt,
    pub u2: BigRational,
}

impl TwoTermFormula {
    pub fn new(k: u32, u1: BigInt, u2: BigRational) -> Result<Self> {
        if k == 0 {
            return Err(Error::Invalid("k must be at least 1".into()));
        }
        if u1.is_zero() || u2.is_zero() {
            return Err(Error::Invalid("u1 and u2 must be nonzero".into()));
        }
        Ok(TwoTermFormula { k, u1, u2 })
    }

    /// Builds the formula for `k` from a given `u1` with the exact `u2`,
    /// subject to the materialisation cap unless `force` is set.
    pub fn from_u1(k: u32, u1: BigInt, force: bool) -> Result<Self> {
        let b = BigRational::from_integer(u1.clone());
        let u2 = if force {
            u2_exact_uncapped(&b, k)?
        } else {
            u2_exact(&b, k)?
        };
        Self::new(k, u1, u2)
    }

    pub fn alpha(&self) -> BigInt {
        BigInt::one() << (self.k as usize - 1)
    }

    pub fn to_machin(&self) -> MachinFormula {
        MachinFormula::new(vec![
            MachinTerm::new(self.alpha(), BigRational::from_integer(self.u1.clone())),
            MachinTerm::new(1, self.u2.clone()),
        ])
        .expect("nonzero by construction")
    }
}

/// `(sigma_k, tau_k)`: the seed `(u1 + i)/(u1 - i)` squared `k - 1` times.
pub fn two_step_iteration(u1: &BigRational, k: u32) -> Result<GaussianRational> {
    if k == 0 {
        return Err(Error::Invalid("two-step iteration starts at k = 1".into()));
    }
    let mut z = GaussianRational::from_base(u1);
    for _ in 1..k {
        z = z.square();
    }
    Ok(z)
}

/// `sigma_k / (1 - tau_k)`, refusing `k` above [`U2_MATERIALIZATION_CAP`].
pub fn u2_exact(u1: &BigRational, k: u32) -> Result<BigRational> {
    if k > U2_MATERIALIZATION_CAP {
        return Err(Error::MaterializationCap {
            k,
            cap: U2_MATERIALIZATION_CAP,
        });
    }
    u2_exact_uncapped(u1, k)
}

/// [`u2_exact`] without the cap. The numerator of `u2` has roughly
/// `8 * 2^(k-3)` digits for the standard `u1_k`.
pub fn u2_exact_uncapped(u1: &BigRational, k: u32) -> Result<BigRational> {
    second_constant(&two_step_iteration(u1, k)?)
}

fn second_constant(z: &GaussianRational) -> Result<BigRational> {
    let d = BigRational::one() - &z.im;
    if d.is_zero() {
        return Err(Error::DegenerateAngle);
    }
    Ok(&z.re / d)
}

fn base_above_one(beta1: &BigRational) -> Result<()> {
    if beta1 <= &BigRational::one() {
        return Err(Error::Domain("beta1 must be greater than 1".into()));
    }
    Ok(())
}

/// `beta2` with `pi/4 = alpha arctan(1/beta1) + arctan(1/beta2)`, from the
/// `alpha`-th power of `(beta1 + i)/(beta1 - i)` by binary powering.
pub fn beta2_from_alpha(alpha: &BigInt, beta1: &BigRational) -> Result<BigRational> {
    if !alpha.is_positive() {
        return Err(Error::Domain("alpha must be positive".into()));
    }
    base_above_one(beta1)?;
    let z = GaussianRational::from_base(beta1)
        .pow(alpha)
        .expect("positive exponent");
    second_constant(&z)
}

/// The unreduced complex form `2/(z - i) - i` of the second constant, with
/// `z = ((beta1 + i)/(beta1 - i))^alpha`. Its imaginary part is zero.
pub fn beta2_complex(alpha: &BigInt, beta1: &BigRational) -> Result<GaussianRational> {
    if !alpha.is_positive() {
        return Err(Error::Domain("alpha must be positive".into()));
    }
    let z = GaussianRational::from_base(beta1)
        .pow(alpha)
        .expect("positive exponent");
    let two = GaussianRational::from_real(BigRational::from_integer(2.into()));
    let i = GaussianRational::i();
    let q = two.div(&(&z - &i)).ok_or(Error::DegenerateAngle)?;
    Ok(&q - &i)
}

/// `true` iff `prod ((B_j + i)/(B_j - i))^(A_j) = i` exactly.
///
/// With `B = p/q`, `(B + i)/(B - i) = w / conj(w)` for `w = p + qi`, so the
/// product is `N / conj(N)` with `N = prod w_j^(A_j)` (negative powers use
/// `conj(w)`). `N / conj(N) = i` holds iff `Re N = Im N`.
pub fn verify_formula(f: &MachinFormula) -> bool {
    let mut acc = GaussianInt::one();
    for t in f.terms() {
        let (p, q) = (t.base.numer(), t.base.denom());
        let im = if t.coef.is_negative() { -q } else { q.clone() };
        let w = GaussianInt { re: p.clone(), im };
        acc = acc.mul(&w.pow(&t.coef));
    }
    acc.re == acc.im && !acc.re.is_zero()
}

/// [`verify_formula`] computed literally with Gaussian rationals: each
/// `(B + i)/(B - i)` raised by binary powering, negative powers by exact
/// inversion. Slower; kept as a cross-check.
pub fn verify_formula_rational(f: &MachinFormula) -> bool {
    let mut acc = GaussianRational::one();
    for t in f.terms() {
        match GaussianRational::from_base(&t.base).pow(&t.coef) {
            Some(p) => acc = &acc * &p,
            None => return false,
        }
    }
    acc == GaussianRational::i()
}

/// `pi/4 = sum_{n=1..N} arctan(N / ((n-1) n + N^2))`.
pub fn identity9_terms(n: u32) -> Result<MachinFormula> {
    if n == 0 {
        return Err(Error::Invalid("N must be at least 1".into()));
    }
    let big_n = BigInt::from(n);
    let terms = (1..=n as u64)
        .map(|j| {
            let num = BigInt::from((j - 1) * j) + &big_n * &big_n;
            MachinTerm::new(1, BigRational::new(num, big_n.clone()))
        })
        .collect();
    MachinFormula::new(terms)
}

/// Lehmer's measure `sum 1/log10|B_j|`.
pub fn lehmer_measure(f: &MachinFormula, ctx: &PrecisionContext) -> Result<HPReal> {
    let ictx = ctx.extended(4);
    let one = HPReal::one(&ictx);
    let mut mu = HPReal::zero(&ictx);
    for t in f.terms() {
        if t.base.abs() <= BigRational::one() {
            return Err(Error::Domain(format!(
                "Lehmer measure needs |B| > 1, got {}",
                t.base
            )));
        }
        let l = log10_abs(&t.base, &ictx)?;
        mu = &mu + &one.div(&l)?;
    }
    mu.with_ctx(ctx).ensure_tolerance("lehmer_measure")
}

/// `true` when the relative error of `v` is below `10^-digits`.
fn relatively_accurate(v: &HPReal, ctx: &PrecisionContext) -> bool {
    match v.abs_lower() {
        Some(l) => v.err_bound() <= l.mul(ctx.tolerance()),
        None => false,
    }
}

/// Runs `eval` with growing extra digits until the result is accurate to
/// `ctx.digits()` significant digits.
fn with_relative_escalation<F>(ctx: &PrecisionContext, start: u32, what: &str, mut eval: F) -> Result<HPReal>
where
    F: FnMut(&PrecisionContext) -> Result<HPReal>,
{
    let mut extra = start;
    for _ in 0..8 {
        let ictx = ctx.extended(extra);
        match eval(&ictx) {
            Ok(v) if relatively_accurate(&v, ctx) => return Ok(v.with_ctx(ctx)),
            Ok(_) | Err(Error::PrecisionExhausted(_)) | Err(Error::PoleProximity { .. }) => {}
            Err(e) => return Err(e),
        }
        extra = extra * 2 + 10;
    }
    Err(Error::PrecisionExhausted(format!(
        "{what}: no stable result at {} extra digits",
        extra
    )))
}

/// Digits lost when an angle is multiplied by `2^(k-1)`.
fn doubling_loss(k: u32) -> u32 {
    (k as f64 * std::f64::consts::LOG10_2).ceil() as u32 + 4
}

/// `cos A / (1 - sin A)` with `A = 2^(k-1) arctan(2 u1 / (u1^2 - 1))`,
/// accurate to `ctx.digits()` significant digits.
pub fn u2_trig(u1: &BigInt, k: u32, ctx: &PrecisionContext) -> Result<HPReal> {
    if u1 < &BigInt::from(2) {
        return Err(Error::Domain("u2_trig needs u1 >= 2".into()));
    }
    if k == 0 {
        return Err(Error::Invalid("k must be at least 1".into()));
    }
    let x = BigRational::new(u1 * 2, u1 * u1 - 1);
    with_relative_escalation(ctx, doubling_loss(k), "u2_trig", |c| {
        let angle = arctan_euler(&x, c)?.mul_pow2(k as i64 - 1);
        let (s, co) = sin_cos(&angle, c)?;
        let den = &HPReal::one(c) - &s;
        co.div(&den)
    })
}

/// The small-angle estimate `u2 ~ 2 / (1 - tan(2^(k-1)/u1))`.
pub fn u2_approx(u1: &BigInt, k: u32, ctx: &PrecisionContext) -> Result<HPReal> {
    if u1.is_zero() || k == 0 {
        return Err(Error::Invalid("u2_approx needs u1 != 0 and k >= 1".into()));
    }
    let arg = BigRational::new(BigInt::one() << (k as usize - 1), u1.clone());
    with_relative_escalation(ctx, 10, "u2_approx", |c| {
        let t = tan_hp(&arg, c)?;
        let den = &HPReal::one(c) - &t;
        HPReal::from_i64(2, c).div(&den)
    })
}

/// Lehmer's measure of the two-term formula for `(k, u1)` without
/// materialising `u2`: `1/log10 u1 + 1/log10|u2|` with `u2` from [`u2_trig`].
pub fn lehmer_estimate_two_term(k: u32, u1: &BigInt, ctx: &PrecisionContext) -> Result<HPReal> {
    let ictx = ctx.extended(4);
    let u2 = u2_trig(u1, k, &ictx)?;
    let l2 = log10_abs(&u2, &ictx)?;
    let l1 = log10_abs(BigRational::from_integer(u1.clone()), &ictx)?;
    if !l1.is_definitely_positive() || !l2.is_definitely_positive() {
        return Err(Error::Domain("Lehmer measure needs |u1|, |u2| > 1".into()));
    }
    let one = HPReal::one(&ictx);
    let mu = &one.div(&l1)? + &one.div(&l2)?;
    mu.with_ctx(ctx).ensure_tolerance("lehmer_estimate_two_term")
}

/// `4 sum A_j arctan(1/B_j)` at `ctx` accuracy, with each `1/B_j` handed to
/// the series kernel as an exact rational.
pub fn formula_value(f: &MachinFormula, series: ArctanSeries, ctx: &PrecisionContext) -> Result<HPReal> {
    // coefficient sizes amplify the per-term error
    let max_coef_bits = f.terms().iter().map(|t| t.coef.bits()).max().unwrap_or(0);
    let extra = ((max_coef_bits as f64 + (f.terms().len() as f64).log2() + 2.0)
        * std::f64::consts::LOG10_2)
        .ceil() as u32;
    let ictx = ctx.extended(extra);
    let mut sum = HPReal::zero(&ictx);
    for t in f.terms() {
        let x = t.base.recip();
        let a = series.eval(&x, &ictx)?;
        sum = &sum + &a.mul_int(&t.coef);
    }
    sum.mul_pow2(2).with_ctx(ctx).ensure_tolerance("formula_value")
}

/// `pi` to `digits` decimals as `"3.xxxx"`. The formula is verified first;
/// the digits are accepted only when evaluations at `digits + 10` and
/// `digits + 20` both certify the same truncation.
pub fn compute_pi_formula(f: &MachinFormula, digits: u32, series: ArctanSeries) -> Result<String> {
    if digits == 0 {
        return Err(Error::Invalid("digits must be at least 1".into()));
    }
    if !verify_formula(f) {
        return Err(Error::Invalid("formula does not verify exactly".into()));
    }
    let run = |extra: u32| -> Result<Option<String>> {
        let ctx = PrecisionContext::new(digits + extra)?;
        Ok(formula_value(f, series, &ctx)?.certified_truncation(digits))
    };
    match (run(10)?, run(20)?) {
        (Some(a), Some(b)) if a == b => Ok(a),
        _ => Err(Error::PrecisionExhausted(format!(
            "could not certify {digits} digits"
        ))),
    }
}

/// [`compute_pi_formula`] for a two-term formula.
pub fn compute_pi(f: &TwoTermFormula, digits: u32, series: ArctanSeries) -> Result<String> {
    compute_pi_formula(&f.to_machin(), digits, series)
}

/// pi at `ctx` accuracy from Machin's formula and the Euler series.
pub fn reference_pi(ctx: &PrecisionContext) -> Result<HPReal> {
    formula_value(&MachinFormula::machin(), ArctanSeries::Euler, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{ratio, ErrBound};

    fn ctx(d: u32) -> PrecisionContext {
        PrecisionContext::new(d).unwrap()
    }

    fn int(n: i64) -> BigRational {
        ratio(n, 1)
    }

    #[test]
    fn iteration_for_five() {
        let z1 = two_step_iteration(&int(5), 1).unwrap();
        assert_eq!((z1.re, z1.im), (ratio(24, 26), ratio(10, 26)));
        let z2 = two_step_iteration(&int(5), 2).unwrap();
        assert_eq!((z2.re, z2.im), (ratio(119, 169), ratio(120, 169)));
        let z3 = two_step_iteration(&int(5), 3).unwrap();
        assert_eq!((z3.re, z3.im), (ratio(-239, 28561), ratio(28560, 28561)));
        assert!(two_step_iteration(&int(5), 0).is_err());
    }

    #[test]
    fn small_second_constants() {
        assert_eq!(u2_exact(&int(5), 3).unwrap(), int(-239));
        assert_eq!(u2_exact(&int(2), 2).unwrap(), int(-7));
        assert_eq!(
            u2_exact(&int(2), 25),
            Err(Error::MaterializationCap { k: 25, cap: 24 })
        );
        // k = 1 with u1 = 1 is the degenerate pi/4 = arctan(1) itself
        assert_eq!(u2_exact(&int(1), 1), Err(Error::DegenerateAngle));
    }

    #[test]
    fn beta2_checks() {
        assert_eq!(beta2_from_alpha(&BigInt::from(4), &int(5)).unwrap(), int(-239));
        assert!(matches!(
            beta2_from_alpha(&BigInt::from(4), &ratio(1, 2)),
            Err(Error::Domain(_))
        ));
        let c = beta2_complex(&BigInt::from(4), &int(5)).unwrap();
        assert_eq!(c, GaussianRational::from_real(int(-239)));
    }

    #[test]
    fn builtin_formulas_verify() {
        assert!(verify_formula(&MachinFormula::machin()));
        assert!(verify_formula(&MachinFormula::kanada1()));
        assert!(verify_formula(&MachinFormula::kanada2()));
        let mutant = MachinFormula::from_ints(&[(4, 5), (1, 239)]);
        assert!(!verify_formula(&mutant));
        for f in [MachinFormula::machin(), MachinFormula::kanada1(), mutant] {
            assert_eq!(verify_formula(&f), verify_formula_rational(&f));
        }
        let scaled = MachinFormula::new(vec![
            MachinTerm::new(2, ratio(3, 1)),
            MachinTerm::new(-1, ratio(-7, 1)),
        ])
        .unwrap();
        // 2 arctan(1/3) - arctan(-1/7) = pi/4
        assert!(verify_formula(&scaled));
        assert!(verify_formula_rational(&scaled));
        assert!(MachinFormula::builtin("nope").is_none());
    }

    #[test]
    fn identity_family() {
        let f2 = identity9_terms(2).unwrap();
        let bases: Vec<_> = f2.terms().iter().map(|t| t.base.clone()).collect();
        assert_eq!(bases, [int(2), int(3)]);
        let f4 = identity9_terms(4).unwrap();
        let bases: Vec<_> = f4.terms().iter().map(|t| t.base.recip()).collect();
        assert_eq!(bases, [ratio(1, 4), ratio(2, 9), ratio(2, 11), ratio(1, 7)]);
        assert!(verify_formula(&f4));
    }

    #[test]
    fn lehmer_values() {
        let c = ctx(20);
        let single = MachinFormula::from_ints(&[(1, 10)]);
        let one = lehmer_measure(&single, &c).unwrap();
        assert!(one.agrees_with(&HPReal::one(&c), ErrBound::ZERO));
        let m = lehmer_measure(&MachinFormula::machin(), &c).unwrap();
        assert_eq!(m.truncated_decimal(6), "1.851127");
        assert!(matches!(
            lehmer_measure(&identity9_terms(1).unwrap(), &c),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn trig_form_matches_exact() {
        let c = ctx(30);
        let v = u2_trig(&BigInt::from(5), 3, &c).unwrap();
        assert!(v.agrees_with(&HPReal::from_i64(-239, &c), ErrBound::ZERO));
        let v = u2_trig(&BigInt::from(2), 2, &c).unwrap();
        assert!(v.agrees_with(&HPReal::from_i64(-7, &c), ErrBound::ZERO));
    }

    #[test]
    fn approximate_form_has_the_right_sign() {
        let c = ctx(20);
        assert!(u2_approx(&BigInt::from(5), 3, &c).unwrap().is_definitely_negative());
    }

    #[test]
    fn short_pi() {
        let f = TwoTermFormula::from_u1(3, BigInt::from(5), false).unwrap();
        assert_eq!(compute_pi(&f, 1, ArctanSeries::Maclaurin).unwrap(), "3.1");
        let bad = TwoTermFormula::new(3, BigInt::from(5), int(-238)).unwrap();
        assert!(matches!(
            compute_pi(&bad, 5, ArctanSeries::Euler),
            Err(Error::Invalid(_))
        ));
    }
}

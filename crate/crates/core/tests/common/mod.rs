//! Test oracles that share no code with the library.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_traits::Zero;

/// `arctan(1/x) * 10^(digits + 10)` by plain integer Maclaurin summation.
fn arctan_recip_scaled(x: u64, scale: &BigInt) -> BigInt {
    let x2 = BigInt::from(x * x);
    let mut term = scale / BigInt::from(x);
    let mut sum = term.clone();
    let mut n: u64 = 1;
    while !term.is_zero() {
        term /= &x2;
        let t = &term / BigInt::from(2 * n + 1);
        if n % 2 == 1 {
            sum -= t;
        } else {
            sum += t;
        }
        n += 1;
    }
    sum
}

/// Decimal digits of pi as `"3.1415..."` with `digits` decimals, from
/// Machin's formula in fixed-point integer arithmetic.
pub fn pi_digits(digits: usize) -> String {
    let guard = 10;
    let scale = num_traits::pow(BigInt::from(10), digits + guard);
    let pi: BigInt = (arctan_recip_scaled(5, &scale) * 16) - (arctan_recip_scaled(239, &scale) * 4);
    let s = (pi / num_traits::pow(BigInt::from(10), guard)).to_string();
    format!("{}.{}", &s[..1], &s[1..])
}

/// The 1000-decimal reference stored with the tests.
pub fn stored_pi_1000() -> &'static str {
    include_str!("../data/pi_1000.txt").trim()
}

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

fn cache() -> &'static Mutex<HashMap<u64, BigRational>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, BigRational>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Bernoulli number `B_n` (with `B_1 = -1/2`) from the double sum
///
/// ```text
/// B_n = sum_{m=0..n} 1/(m+1) sum_{l=0..m} (-1)^l C(m, l) l^n
/// ```
///
/// Values are memoised in a process-wide table.
pub fn bernoulli(n: u64) -> BigRational {
    if let Some(b) = cache().lock().expect("bernoulli cache poisoned").get(&n) {
        return b.clone();
    }
    let b = double_sum(n);
    cache()
        .lock()
        .expect("bernoulli cache poisoned")
        .insert(n, b.clone());
    b
}

fn double_sum(n: u64) -> BigRational {
    // l^n for l = 0..=n; 0^0 = 1
    let powers: Vec<BigInt> = (0..=n)
        .map(|l| {
            if n == 0 {
                BigInt::one()
            } else {
                num_traits::pow(BigInt::from(l), n as usize)
            }
        })
        .collect();
    let mut total = BigRational::zero();
    for m in 0..=n {
        let mut inner = BigInt::zero();
        let mut binom = BigInt::one();
        for l in 0..=m {
            if l > 0 {
                binom = binom * (m - l + 1) / l;
            }
            let t = &binom * &powers[l as usize];
            if l % 2 == 0 {
                inner += t;
            } else {
                inner -= t;
            }
        }
        if !inner.is_zero() {
            total += BigRational::new(inner, BigInt::from(m + 1));
        }
    }
    total
}

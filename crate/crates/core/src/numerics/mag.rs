use std::cmp::Ordering;
use std::fmt;

const MAN_BITS: u32 = 32;
const MAN_MIN: u64 = 1 << (MAN_BITS - 1);
const MAN_LIMIT: u64 = 1 << MAN_BITS;

/// A non-negative magnitude `man * 2^exp` with a 32-bit significand.
///
/// Used for error bounds. Every operation that cannot be exact rounds
/// toward +infinity, except the explicitly named lower-bound helpers.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ErrBound {
    man: u64,
    exp: i64,
}

impl ErrBound {
    pub const ZERO: ErrBound = ErrBound { man: 0, exp: 0 };

    /// `man * 2^exp`, rounded up to 32 significant bits.
    pub fn new(man: u64, exp: i64) -> Self {
        Self::normalize_up(man, exp)
    }

    /// Exactly `2^exp`.
    pub fn pow2(exp: i64) -> Self {
        ErrBound {
            man: MAN_MIN,
            exp: exp - (MAN_BITS as i64 - 1),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.man == 0
    }

    pub(crate) fn parts(&self) -> (u64, i64) {
        (self.man, self.exp)
    }

    fn normalize_up(mut man: u64, mut exp: i64) -> Self {
        if man == 0 {
            return Self::ZERO;
        }
        while man >= MAN_LIMIT {
            let lost = man & 1;
            man = (man >> 1) + lost;
            exp += 1;
        }
        while man < MAN_MIN {
            man <<= 1;
            exp -= 1;
        }
        ErrBound { man, exp }
    }

    fn normalize_down(mut man: u64, mut exp: i64) -> Self {
        if man == 0 {
            return Self::ZERO;
        }
        while man >= MAN_LIMIT {
            man >>= 1;
            exp += 1;
        }
        while man < MAN_MIN {
            man <<= 1;
            exp -= 1;
        }
        ErrBound { man, exp }
    }

    /// Upper bound on `self + other`.
    pub fn add(self, other: ErrBound) -> ErrBound {
        if self.is_zero() {
            return other;
        }
        if other.is_zero() {
            return self;
        }
        let (hi, lo) = if self.exp >= other.exp {
            (self, other)
        } else {
            (other, self)
        };
        let d = hi.exp - lo.exp;
        if d >= MAN_BITS as i64 {
            // lo < 2^(lo.exp + 32) <= 2^hi.exp: one unit of hi covers it
            return Self::normalize_up(hi.man + 1, hi.exp);
        }
        Self::normalize_up((hi.man << d) + lo.man, lo.exp)
    }

    /// Lower bound on `self - other`, or `None` when that is not provably positive.
    pub fn sub_lower(self, other: ErrBound) -> Option<ErrBound> {
        if other.is_zero() {
            return if self.is_zero() { None } else { Some(self) };
        }
        if self <= other {
            return None;
        }
        let d = self.exp - other.exp;
        if d >= MAN_BITS as i64 {
            return Some(Self::normalize_down(self.man - 1, self.exp));
        }
        let diff = (self.man << d) - other.man;
        if diff == 0 {
            None
        } else {
            Some(Self::normalize_down(diff, other.exp))
        }
    }

    pub fn mul(self, other: ErrBound) -> ErrBound {
        if self.is_zero() || other.is_zero() {
            return Self::ZERO;
        }
        Self::normalize_up(self.man * other.man, self.exp + other.exp)
    }

    /// Upper bound on `self * n`.
    pub fn mul_u64(self, n: u64) -> ErrBound {
        self.mul(ErrBound::new(n, 0))
    }

    /// Upper bound on `self / other`, `other` being a lower bound on a divisor.
    ///
    /// Panics if `other` is zero.
    pub fn div(self, other: ErrBound) -> ErrBound {
        assert!(!other.is_zero(), "ErrBound division by zero");
        if self.is_zero() {
            return Self::ZERO;
        }
        let q = (self.man << MAN_BITS) / other.man + 1;
        Self::normalize_up(q, self.exp - MAN_BITS as i64 - other.exp)
    }

    pub fn mul_pow2(self, n: i64) -> ErrBound {
        if self.is_zero() {
            self
        } else {
            ErrBound {
                man: self.man,
                exp: self.exp + n,
            }
        }
    }

    /// Upper bound on the square root.
    pub fn sqrt(self) -> ErrBound {
        if self.is_zero() {
            return self;
        }
        // scale to an even exponent with the significand in [2^62, 2^64)
        let mut man = self.man << 31;
        let mut exp = self.exp - 31;
        if exp % 2 != 0 {
            man >>= 1;
            man += 1;
            exp += 1;
        }
        let mut r = (man as f64).sqrt() as u64;
        while (r as u128) * (r as u128) < man as u128 {
            r += 1;
        }
        Self::normalize_up(r, exp / 2)
    }

    /// Upper bound on `10^-n`.
    pub fn pow10_neg(n: u64) -> ErrBound {
        // ceil(2^35 / 10) * 2^-35 >= 1/10
        let tenth = ErrBound::new((1u64 << 35) / 10 + 1, -35);
        let mut result = ErrBound::new(1, 0);
        let mut base = tenth;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(base);
            }
            base = base.mul(base);
            e >>= 1;
        }
        result
    }

    pub fn max(self, other: ErrBound) -> ErrBound {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Approximate base-2 logarithm; `-inf` for zero.
    pub fn log2(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            (self.man as f64).log2() + self.exp as f64
        }
    }

    pub fn log10(&self) -> f64 {
        self.log2() * std::f64::consts::LOG10_2
    }

    /// Smallest `e` with `self <= 2^e`.
    pub fn exponent_upper(&self) -> i64 {
        if self.is_zero() {
            i64::MIN
        } else if self.man == MAN_MIN {
            self.exp + MAN_BITS as i64 - 1
        } else {
            self.exp + MAN_BITS as i64
        }
    }
}

impl PartialOrd for ErrBound {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ErrBound {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.is_zero(), other.is_zero()) {
            (true, true) => Ordering::Equal,
            (true, false) => Ordering::Less,
            (false, true) => Ordering::Greater,
            _ => self
                .exp
                .cmp(&other.exp)
                .then_with(|| self.man.cmp(&other.man)),
        }
    }
}

impl fmt::Debug for ErrBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ErrBound({})", self)
    }
}

impl fmt::Display for ErrBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let l = self.log10();
        let e = l.floor();
        write!(f, "{:.3}e{}", 10f64.powf(l - e), e as i64)
    }
}

use crate::error::{Error, Result};
use crate::numerics::ErrBound;

/// log2(10), rounded up.
const LOG2_10_UPPER: f64 = 3.321_928_094_887_363;

/// Requested decimal accuracy plus guard digits.
///
/// Every real-valued operation runs at `digits + guard` decimal digits and
/// promises `digits` correct ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    digits: u32,
    guard: u32,
}

impl PrecisionContext {
    pub const DEFAULT_GUARD: u32 = 10;

    pub fn new(digits: u32) -> Result<Self> {
        Self::with_guard(digits, Self::DEFAULT_GUARD)
    }

    pub fn with_guard(digits: u32, guard: u32) -> Result<Self> {
        if digits == 0 {
            return Err(Error::Invalid("precision must be at least one digit".into()));
        }
        Ok(PrecisionContext { digits, guard })
    }

    /// Context for a chain of `iterations` dependent operations:
    /// guard = 10 + ceil(log10(iterations)).
    pub fn for_iterations(digits: u32, iterations: u64) -> Result<Self> {
        let extra = if iterations <= 1 {
            0
        } else {
            (iterations as f64).log10().ceil() as u32
        };
        Self::with_guard(digits, Self::DEFAULT_GUARD + extra)
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn guard(&self) -> u32 {
        self.guard
    }

    pub fn working_digits(&self) -> u32 {
        self.digits + self.guard
    }

    /// Binary precision used for significands.
    pub fn working_bits(&self) -> u64 {
        (self.working_digits() as f64 * LOG2_10_UPPER).ceil() as u64 + 8
    }

    /// Same guard, more requested digits.
    pub fn with_digits(&self, digits: u32) -> Self {
        PrecisionContext {
            digits: digits.max(1),
            guard: self.guard,
        }
    }

    pub fn extended(&self, extra_digits: u32) -> Self {
        self.with_digits(self.digits + extra_digits)
    }

    /// Upper bound on `10^-digits`, the absolute accuracy target for values of magnitude <= 1.
    pub fn tolerance(&self) -> ErrBound {
        ErrBound::pow10_neg(self.digits as u64)
    }

    /// Upper bound on `10^-(digits + guard)`, the series truncation threshold.
    pub fn truncation_threshold(&self) -> ErrBound {
        ErrBound::pow10_neg(self.working_digits() as u64)
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        PrecisionContext {
            digits: 50,
            guard: Self::DEFAULT_GUARD,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_zero_digits() {
        assert!(PrecisionContext::new(0).is_err());
    }

    #[test]
    fn guard_grows_with_iteration_count() {
        let ctx = PrecisionContext::for_iterations(30, 1000).unwrap();
        assert_eq!(ctx.guard(), 13);
        assert_eq!(ctx.working_digits(), 43);
        assert_eq!(PrecisionContext::for_iterations(30, 1).unwrap().guard(), 10);
    }

    #[test]
    fn working_bits_cover_working_digits() {
        let ctx = PrecisionContext::new(100).unwrap();
        assert!(ctx.working_bits() as f64 >= 110.0 * 10f64.log2());
    }
}
